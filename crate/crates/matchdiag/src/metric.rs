//! Finite metric spaces, Hausdorff distances between their subsets, and
//! uniform shifts of a metric.
//!
//! A [`FiniteMetricSpace`] stores the full distance matrix. Spaces built
//! from coordinates keep the point list around; spaces built from raw
//! matrices (or produced by [`shift_space`]) do not. Coincident points are
//! rejected at construction instead of being folded together, so every
//! off-diagonal distance is strictly positive.

use crate::error::{Error, Result};

/// Absolute tolerance used by [`pair_hausdorff`] when checking that the given
/// index maps embed the two ambient spaces isometrically into the common one.
pub const ISOMETRY_TOL: f64 = 1e-9;

/// A finite metric space given by its full distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<f64>,
    coords: Option<Vec<Vec<f64>>>,
}

impl FiniteMetricSpace {
    /// Builds the space of the given points under the Euclidean metric.
    ///
    /// All points must share one dimension, coordinates must be finite, and
    /// no two points may coincide.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySpace);
        }
        let dim = points[0].len();
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    got: p.len(),
                });
            }
            if !p.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidCoordinate { index });
            }
        }
        let n = points.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(&points[i], &points[j]);
                if d == 0.0 {
                    return Err(Error::DuplicatePoint(i, j));
                }
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(Self {
            n,
            dist,
            coords: Some(points.to_vec()),
        })
    }

    /// Builds a space from a full square distance matrix.
    ///
    /// The matrix must be symmetric with an exactly zero diagonal and finite,
    /// strictly positive off-diagonal entries. The triangle inequality is
    /// deliberately *not* enforced here; see [`Self::max_triangle_defect`].
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptySpace);
        }
        let n = rows.len();
        for (index, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: n,
                    got: row.len(),
                });
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            if rows[i][i] != 0.0 {
                return Err(Error::InvalidDistance {
                    i,
                    j: i,
                    value: rows[i][i],
                });
            }
            for j in (i + 1)..n {
                let d = rows[i][j];
                if rows[j][i] != d {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        lower: rows[j][i],
                        upper: d,
                    });
                }
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidDistance { i, j, value: d });
                }
                if d == 0.0 {
                    return Err(Error::DuplicatePoint(i, j));
                }
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(Self {
            n,
            dist,
            coords: None,
        })
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: construction rejects empty spaces.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Distance between points `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// The coordinates this space was built from, if any.
    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    /// Largest triangle-inequality defect `d(i,k) − d(i,j) − d(j,k)` over all
    /// triples, clamped at zero. Exhaustive, so cubic in the point count;
    /// callers should gate it on size.
    pub fn max_triangle_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if j == i {
                    continue;
                }
                for k in (i + 1)..self.n {
                    if k == j {
                        continue;
                    }
                    worst = worst.max(self.dist(i, k) - self.dist(i, j) - self.dist(j, k));
                }
            }
        }
        worst
    }

    /// The restriction of this space to the given indices, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        let m = indices.len();
        for &i in indices {
            if i >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.n,
                });
            }
        }
        let mut dist = vec![0.0; m * m];
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                if a != b && self.dist(i, j) == 0.0 {
                    return Err(Error::DuplicatePoint(a, b));
                }
                dist[a * m + b] = self.dist(i, j);
            }
        }
        let coords = self
            .coords
            .as_ref()
            .map(|c| indices.iter().map(|&i| c[i].clone()).collect());
        Ok(Self { n: m, dist, coords })
    }
}

fn euclidean(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

fn check_subset(subset: &[usize], len: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    for &i in subset {
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
    }
    Ok(())
}

/// Hausdorff distance between two index subsets of one space: the largest
/// distance from a point of either subset to the nearest point of the other.
pub fn hausdorff(a: &[usize], b: &[usize], space: &FiniteMetricSpace) -> Result<f64> {
    check_subset(a, space.len())?;
    check_subset(b, space.len())?;
    let directed = |from: &[usize], to: &[usize]| {
        from.iter()
            .map(|&i| {
                to.iter()
                    .map(|&j| space.dist(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0_f64, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

/// An ambient space together with the indices of a distinguished subset.
#[derive(Debug, Clone)]
pub struct MetricPair {
    ambient: FiniteMetricSpace,
    subset: Vec<usize>,
}

impl MetricPair {
    /// Pairs an ambient space with a non-empty, repeat-free subset of its
    /// indices.
    pub fn new(ambient: FiniteMetricSpace, subset: Vec<usize>) -> Result<Self> {
        check_subset(&subset, ambient.len())?;
        let mut seen = vec![false; ambient.len()];
        for &i in &subset {
            if seen[i] {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: ambient.len(),
                });
            }
            seen[i] = true;
        }
        Ok(Self { ambient, subset })
    }

    pub fn ambient(&self) -> &FiniteMetricSpace {
        &self.ambient
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }
}

/// Hausdorff distance between two subset pairs embedded in a common space:
/// the larger of the subset-to-subset and ambient-to-ambient Hausdorff
/// distances, measured inside `common`.
///
/// `embed_p` and `embed_q` send the ambient indices of `p` and `q` to indices
/// of `common`; both maps must preserve distances up to [`ISOMETRY_TOL`].
pub fn pair_hausdorff(
    p: &MetricPair,
    q: &MetricPair,
    common: &FiniteMetricSpace,
    embed_p: &[usize],
    embed_q: &[usize],
) -> Result<f64> {
    check_embedding(p.ambient(), common, embed_p)?;
    check_embedding(q.ambient(), common, embed_q)?;
    let image = |emb: &[usize], idx: &[usize]| -> Vec<usize> {
        idx.iter().map(|&i| emb[i]).collect()
    };
    let sub = hausdorff(
        &image(embed_p, p.subset()),
        &image(embed_q, q.subset()),
        common,
    )?;
    let amb = hausdorff(embed_p, embed_q, common)?;
    Ok(sub.max(amb))
}

fn check_embedding(
    space: &FiniteMetricSpace,
    common: &FiniteMetricSpace,
    embed: &[usize],
) -> Result<()> {
    if embed.len() != space.len() {
        return Err(Error::SizeMismatch(space.len(), embed.len()));
    }
    for &i in embed {
        if i >= common.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: common.len(),
            });
        }
    }
    for i in 0..space.len() {
        for j in (i + 1)..space.len() {
            let original = space.dist(i, j);
            let embedded = common.dist(embed[i], embed[j]);
            if (original - embedded).abs() > ISOMETRY_TOL {
                return Err(Error::NotIsometric {
                    i,
                    j,
                    original,
                    embedded,
                });
            }
        }
    }
    Ok(())
}

/// Adds `delta` to every off-diagonal distance. The order of distances is
/// preserved exactly; for `delta == 0` the space comes back unchanged,
/// otherwise the result keeps no coordinates (the shifted metric is in
/// general not realizable by the original points).
pub fn shift_space(x: &FiniteMetricSpace, delta: f64) -> Result<FiniteMetricSpace> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::NegativeDelta(delta));
    }
    if delta == 0.0 {
        return Ok(x.clone());
    }
    let n = x.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                dist[i * n + j] = x.dist(i, j) + delta;
            }
        }
    }
    Ok(FiniteMetricSpace {
        n,
        dist,
        coords: None,
    })
}

/// Largest absolute difference between corresponding entries of two distance
/// matrices over spaces with the same number of points.
pub fn sup_metric_distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch(x.len(), y.len()));
    }
    let mut worst: f64 = 0.0;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            worst = worst.max((x.dist(i, j) - y.dist(i, j)).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn staircase_z() -> FiniteMetricSpace {
        FiniteMetricSpace::from_points(&[
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![2.0, 2.0],
            vec![4.0, 4.0],
            vec![1.0, 1.0],
            vec![3.0, 3.0],
            vec![6.0, 6.0],
        ])
        .unwrap()
    }

    #[test]
    fn rejects_duplicate_points() {
        let err = FiniteMetricSpace::from_points(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap_err();
        assert!(matches!(err, Error::DuplicatePoint(0, 1)));
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let err = FiniteMetricSpace::from_points(&[vec![1.0], vec![1.0, 2.0]]).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                index: 1,
                expected: 1,
                got: 2
            }
        ));
    }

    #[test]
    fn matrix_validation() {
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(matches!(
            FiniteMetricSpace::from_matrix(&asym).unwrap_err(),
            Error::NotSymmetric { .. }
        ));
        let zero = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        assert!(matches!(
            FiniteMetricSpace::from_matrix(&zero).unwrap_err(),
            Error::DuplicatePoint(0, 1)
        ));
        let neg = vec![vec![0.0, -1.0], vec![-1.0, 0.0]];
        assert!(matches!(
            FiniteMetricSpace::from_matrix(&neg).unwrap_err(),
            Error::InvalidDistance { .. }
        ));
    }

    #[test]
    fn hausdorff_full_vs_subset() {
        // The three staircase fillers sit sqrt(2) away from the subset, except
        // the far corner at 2*sqrt(2).
        let z = staircase_z();
        let all: Vec<usize> = (0..7).collect();
        let sub = vec![0, 1, 2, 3];
        let d = hausdorff(&all, &sub, &z).unwrap();
        assert_eq!(d, 8.0_f64.sqrt());
        assert_eq!(d, hausdorff(&sub, &all, &z).unwrap());
    }

    #[test]
    fn hausdorff_empty_subset_errors() {
        let z = staircase_z();
        assert!(matches!(
            hausdorff(&[], &[0], &z).unwrap_err(),
            Error::EmptySubset
        ));
    }

    #[test]
    fn triangle_defect_flags_violations() {
        // Collinear points make the inequality tight, so rounding can leave
        // a defect on the order of machine epsilon but no more.
        let z = staircase_z();
        assert!(z.max_triangle_defect() < 1e-12);
        let bad = FiniteMetricSpace::from_matrix(&[
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(bad.max_triangle_defect(), 3.0);
    }

    #[test]
    fn shift_adds_exactly_delta() {
        let z = staircase_z();
        let shifted = shift_space(&z, 3.0).unwrap();
        for i in 0..z.len() {
            for j in 0..z.len() {
                if i == j {
                    assert_eq!(shifted.dist(i, j), 0.0);
                } else {
                    assert_eq!(shifted.dist(i, j), z.dist(i, j) + 3.0);
                }
            }
        }
        assert_eq!(shift_space(&z, 0.0).unwrap(), z);
        assert!(matches!(
            shift_space(&z, -1.0).unwrap_err(),
            Error::NegativeDelta(_)
        ));
    }

    #[test]
    fn pair_hausdorff_requires_isometric_embeddings() {
        let z = staircase_z();
        let x = z.restrict(&[0, 1, 2, 3]).unwrap();
        let p = MetricPair::new(x, vec![0, 1]).unwrap();
        let q = MetricPair::new(z.clone(), vec![0, 1]).unwrap();
        // Embedding the restriction back where it came from is isometric.
        let d = pair_hausdorff(&p, &q, &z, &[0, 1, 2, 3], &[0, 1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(d, 8.0_f64.sqrt()); // ambient side dominates
        // A scrambled embedding is not.
        let err = pair_hausdorff(&p, &q, &z, &[0, 1, 2, 6], &[0, 1, 2, 3, 4, 5, 6]).unwrap_err();
        assert!(matches!(err, Error::NotIsometric { .. }));
    }

    #[test]
    fn restrict_keeps_distances() {
        let z = staircase_z();
        let x = z.restrict(&[0, 1, 2, 3]).unwrap();
        assert_eq!(x.len(), 4);
        assert_eq!(x.dist(0, 1), 2.0);
        assert_eq!(x.dist(2, 3), 8.0_f64.sqrt());
        assert_eq!(x.coords().unwrap()[3], vec![4.0, 4.0]);
    }

    fn arb_points(max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(
            prop::collection::vec(-10.0..10.0f64, 2),
            1..=max_n,
        )
        .prop_filter("coincident points", |pts| {
            for i in 0..pts.len() {
                for j in (i + 1)..pts.len() {
                    if pts[i] == pts[j] {
                        return false;
                    }
                }
            }
            true
        })
    }

    proptest! {
        #[test]
        fn hausdorff_is_symmetric_and_zero_on_equal_sets(
            pts in arb_points(8),
            raw_a in prop::collection::vec(0usize..8, 1..6),
            raw_b in prop::collection::vec(0usize..8, 1..6),
        ) {
            let space = FiniteMetricSpace::from_points(&pts).unwrap();
            let a: Vec<usize> = raw_a.iter().map(|i| i % space.len()).collect();
            let b: Vec<usize> = raw_b.iter().map(|i| i % space.len()).collect();
            let ab = hausdorff(&a, &b, &space).unwrap();
            let ba = hausdorff(&b, &a, &space).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert_eq!(hausdorff(&a, &a, &space).unwrap(), 0.0);
            let mut sa = a.clone();
            let mut sb = b.clone();
            sa.sort_unstable();
            sa.dedup();
            sb.sort_unstable();
            sb.dedup();
            prop_assert_eq!(ab == 0.0, sa == sb);
        }

        #[test]
        fn shift_preserves_distance_order(pts in arb_points(8), delta in 0.0..5.0f64) {
            use std::cmp::Ordering;
            let space = FiniteMetricSpace::from_points(&pts).unwrap();
            let shifted = shift_space(&space, delta).unwrap();
            let n = space.len();
            for i in 0..n {
                for j in (i + 1)..n {
                    prop_assert_eq!(shifted.dist(i, j), space.dist(i, j) + delta);
                    for k in 0..n {
                        for l in (k + 1)..n {
                            let before = space.dist(i, j).partial_cmp(&space.dist(k, l)).unwrap();
                            let after = shifted.dist(i, j).partial_cmp(&shifted.dist(k, l)).unwrap();
                            // Addition by a constant is monotone; rounding may
                            // at worst merge a strict inequality into a tie.
                            if before == Ordering::Equal {
                                prop_assert_eq!(after, Ordering::Equal);
                            } else {
                                prop_assert!(after == before || after == Ordering::Equal);
                            }
                        }
                    }
                }
            }
        }
    }
}
