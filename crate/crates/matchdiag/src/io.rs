//! Plain-text input formats: point lists, lower-triangle distance matrices,
//! and explicit index mappings.
//!
//! Every parse error carries the 1-based line number of the offending line.
//! Point files keep a normalized rendition of each line (tokens trimmed,
//! re-joined with single commas) so that a mapping can later be inferred by
//! exact textual coordinate equality rather than by floating-point
//! comparisons.

use crate::blockfn::SetMapping;
use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;

/// A parsed point file: the coordinates plus the normalized text of each
/// point line, in file order.
#[derive(Debug, Clone)]
pub struct ParsedPoints {
    points: Vec<Vec<f64>>,
    normalized_lines: Vec<String>,
}

impl ParsedPoints {
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn normalized_lines(&self) -> &[String] {
        &self.normalized_lines
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Builds the metric space these points describe.
    pub fn to_space(&self) -> Result<FiniteMetricSpace> {
        FiniteMetricSpace::from_points(&self.points)
    }
}

/// Parses a point file: one point per line, comma-separated decimal
/// coordinates. Blank lines are skipped.
pub fn parse_points(text: &str) -> Result<ParsedPoints> {
    let mut points = Vec::new();
    let mut normalized_lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut coords = Vec::new();
        let mut tokens = Vec::new();
        for piece in raw.split(',') {
            let token = piece.trim();
            if token.is_empty() {
                return Err(Error::Parse {
                    line,
                    msg: "empty coordinate".into(),
                });
            }
            let value: f64 = token.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid coordinate {token:?}"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!("coordinate {token:?} is not finite"),
                });
            }
            coords.push(value);
            tokens.push(token.to_string());
        }
        points.push(coords);
        normalized_lines.push(tokens.join(","));
    }
    Ok(ParsedPoints {
        points,
        normalized_lines,
    })
}

/// Parses a distance-matrix file: first line the point count `n`, then
/// `n − 1` lines giving the strict lower triangle row by row (row `i` holds
/// the `i` distances to points `0..i`), space-separated. Blank lines are
/// skipped.
pub fn parse_distance_matrix(text: &str) -> Result<FiniteMetricSpace> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, raw)| (idx + 1, raw))
        .filter(|(_, raw)| !raw.trim().is_empty());

    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing point count".into(),
    })?;
    let n: usize = header.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid point count {:?}", header.trim()),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line,
            msg: "point count must be positive".into(),
        });
    }

    let mut rows = vec![vec![0.0; n]; n];
    for i in 1..n {
        let (line, raw) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: format!("missing lower-triangle row for point {i}"),
        })?;
        let entries: Vec<&str> = raw.split_whitespace().collect();
        if entries.len() != i {
            return Err(Error::Parse {
                line,
                msg: format!(
                    "row for point {i} must have {i} entries, found {}",
                    entries.len()
                ),
            });
        }
        for (j, token) in entries.iter().enumerate() {
            let value: f64 = token.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid distance {token:?}"),
            })?;
            rows[i][j] = value;
            rows[j][i] = value;
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            msg: format!("unexpected extra line after {} matrix rows", n - 1),
        });
    }
    FiniteMetricSpace::from_matrix(&rows)
}

/// Parses a mapping file: one line per domain point, `"i j"` meaning domain
/// index `i` maps to codomain index `j`. Every domain index must appear
/// exactly once.
pub fn parse_mapping(text: &str, domain_len: usize, codomain_len: usize) -> Result<SetMapping> {
    let mut target: Vec<Option<usize>> = vec![None; domain_len];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let [i_token, j_token] = fields.as_slice() else {
            return Err(Error::Parse {
                line,
                msg: format!("expected two indices, found {}", fields.len()),
            });
        };
        let parse_index = |token: &str| -> Result<usize> {
            token.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid index {token:?}"),
            })
        };
        let i = parse_index(i_token)?;
        let j = parse_index(j_token)?;
        if i >= domain_len {
            return Err(Error::MappingOutOfRange {
                index: i,
                target: j,
                len: domain_len,
            });
        }
        if target[i].is_some() {
            return Err(Error::MappingNotTotal(format!(
                "domain index {i} is mapped more than once (line {line})"
            )));
        }
        target[i] = Some(j);
    }
    let target: Vec<usize> = target
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            t.ok_or_else(|| Error::MappingNotTotal(format!("domain index {i} is never mapped")))
        })
        .collect::<Result<_>>()?;
    SetMapping::new(target, codomain_len)
}

/// Infers the mapping by exact textual coordinate equality: each domain
/// point line must appear verbatim (after normalization) among the codomain
/// point lines.
pub fn infer_mapping(domain: &ParsedPoints, codomain: &ParsedPoints) -> Result<SetMapping> {
    let target = domain
        .normalized_lines()
        .iter()
        .enumerate()
        .map(|(index, text)| {
            codomain
                .normalized_lines()
                .iter()
                .position(|candidate| candidate == text)
                .ok_or_else(|| Error::NoCoordinateMatch {
                    index,
                    text: text.clone(),
                })
        })
        .collect::<Result<Vec<usize>>>()?;
    SetMapping::new(target, codomain.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_parse_and_normalize() {
        let parsed = parse_points("0, 0\n2,0\n\n 2 , 2 \n4,4\n").unwrap();
        assert_eq!(parsed.len(), 4);
        assert_eq!(parsed.points()[2], vec![2.0, 2.0]);
        assert_eq!(parsed.normalized_lines()[2], "2,2");
        let space = parsed.to_space().unwrap();
        assert_eq!(space.len(), 4);
        assert_eq!(space.dist(0, 1), 2.0);
    }

    #[test]
    fn point_errors_name_the_line() {
        let err = parse_points("1,2\n3,oops\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_points("1,,2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = parse_points("inf,2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn matrix_parses_lower_triangle() {
        let space = parse_distance_matrix("3\n1\n2 1.5\n").unwrap();
        assert_eq!(space.len(), 3);
        assert_eq!(space.dist(1, 0), 1.0);
        assert_eq!(space.dist(0, 2), 2.0);
        assert_eq!(space.dist(2, 1), 1.5);
    }

    #[test]
    fn matrix_errors_name_the_line() {
        let err = parse_distance_matrix("3\n1\n2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_distance_matrix("3\n1\n2 1.5\n9\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = parse_distance_matrix("zero\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = parse_distance_matrix("2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
    }

    #[test]
    fn matrix_rejects_nonmetric_values() {
        assert!(matches!(
            parse_distance_matrix("2\n-1\n").unwrap_err(),
            Error::InvalidDistance { .. }
        ));
    }

    #[test]
    fn mapping_parses_and_validates() {
        let m = parse_mapping("0 0\n1 2\n", 2, 3).unwrap();
        assert_eq!(m.target(), &[0, 2]);
        assert!(m.is_injective());

        assert!(matches!(
            parse_mapping("0 0\n", 2, 3).unwrap_err(),
            Error::MappingNotTotal(_)
        ));
        assert!(matches!(
            parse_mapping("0 0\n0 1\n", 2, 3).unwrap_err(),
            Error::MappingNotTotal(_)
        ));
        assert!(matches!(
            parse_mapping("0 0\n1 7\n", 2, 3).unwrap_err(),
            Error::MappingOutOfRange { .. }
        ));
        assert!(matches!(
            parse_mapping("0\n", 1, 1).unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn inference_matches_exact_text_only() {
        let codomain = parse_points("0,0\n1,1\n2,2\n").unwrap();
        let domain = parse_points("2,2\n0,0\n").unwrap();
        let m = infer_mapping(&domain, &codomain).unwrap();
        assert_eq!(m.target(), &[2, 0]);

        // "1.0,1" denotes the same point as "1,1" but is textually distinct,
        // so inference refuses to guess.
        let fuzzy = parse_points("1.0,1\n").unwrap();
        let err = infer_mapping(&fuzzy, &codomain).unwrap_err();
        assert!(matches!(err, Error::NoCoordinateMatch { index: 0, .. }), "{err}");
    }

    #[test]
    fn whitespace_differences_normalize_away() {
        let codomain = parse_points("0 , 0\n5,5\n").unwrap();
        let domain = parse_points("0,0\n").unwrap();
        let m = infer_mapping(&domain, &codomain).unwrap();
        assert_eq!(m.target(), &[0]);
    }
}
