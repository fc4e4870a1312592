//! The JSON document a compute run produces: both barcodes, the block
//! function (as diagram points plus the deficiency column), the derived
//! kernel/image/cokernel barcodes, and the injectivity flag.
//!
//! Serialization must round-trip bit-exactly. Floats go through serde_json's
//! shortest-round-trip decimal rendering; an infinite first coordinate is
//! encoded as the literal string `"inf"` because JSON has no infinity.
//! Field order is fixed by declaration order, and `to_json` output is
//! byte-deterministic for equal inputs.

use crate::blockfn::{
    block_function, matching_diagram, BlockFunction, Endpoint, MatchingDiagram, SetMapping,
};
use crate::decomposition::{cokernel_barcode, image_barcode, kernel_barcode};
use crate::error::{Error, Result};
use crate::filtration::{barcode0, Barcode, IntervalBarcode};
use crate::geomfn::block_function_geometric;
use crate::metric::FiniteMetricSpace;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

pub const SCHEMA_VERSION: u32 = 1;

/// An `a`-coordinate in JSON: a plain number, or the literal `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisValue(pub Endpoint);

impl Serialize for AxisValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Endpoint::Finite(v) => serializer.serialize_f64(v),
            Endpoint::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for AxisValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct AxisVisitor;

        impl Visitor<'_> for AxisVisitor {
            type Value = AxisValue;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<AxisValue, E> {
                Ok(AxisValue(Endpoint::Finite(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<AxisValue, E> {
                Ok(AxisValue(Endpoint::Finite(v as f64)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<AxisValue, E> {
                Ok(AxisValue(Endpoint::Finite(v as f64)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<AxisValue, E> {
                if v == "inf" {
                    Ok(AxisValue(Endpoint::Infinity))
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(AxisVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeathDoc {
    pub death: f64,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarcodeDoc {
    pub deaths: Vec<DeathDoc>,
    pub infinite_bars: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub a: AxisValue,
    pub b: f64,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeficiencyDoc {
    pub b: f64,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalDoc {
    pub birth: f64,
    pub death: f64,
    pub mult: usize,
}

/// Everything one compute run produces, in serialization order.
///
/// `block_cells` lists the full matching diagram — finite cells first,
/// sorted by `(a, b)`, then the `(∞, b)` points — while `deficiency` keeps
/// one entry per codomain death value, zeros included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub schema_version: u32,
    pub domain_barcode: BarcodeDoc,
    pub codomain_barcode: BarcodeDoc,
    pub block_cells: Vec<CellDoc>,
    pub deficiency: Vec<DeficiencyDoc>,
    pub kernel: Vec<IntervalDoc>,
    pub image: BarcodeDoc,
    pub cokernel: BarcodeDoc,
    pub mapping_injective: bool,
}

impl From<&Barcode> for BarcodeDoc {
    fn from(barcode: &Barcode) -> Self {
        BarcodeDoc {
            deaths: barcode
                .deaths()
                .iter()
                .map(|&(death, mult)| DeathDoc { death, mult })
                .collect(),
            infinite_bars: barcode.infinite_bars(),
        }
    }
}

impl BarcodeDoc {
    pub fn to_barcode(&self) -> Result<Barcode> {
        Barcode::new(
            self.deaths.iter().map(|d| (d.death, d.mult)).collect(),
            self.infinite_bars,
        )
    }
}

impl DiagramDocument {
    /// Serializes to pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serialization is total");
        out.push('\n');
        out
    }

    /// Parses a document, reporting the offending line on malformed JSON and
    /// rejecting unknown schema versions.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DiagramDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse {
                line: 1,
                msg: format!(
                    "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                    doc.schema_version
                ),
            });
        }
        Ok(doc)
    }

    pub fn to_matching_diagram(&self) -> Result<MatchingDiagram> {
        MatchingDiagram::new(
            self.block_cells
                .iter()
                .map(|c| (c.a.0, c.b, c.mult))
                .collect(),
        )
    }

    /// Rebuilds the block function from the finite cells and the deficiency
    /// column.
    pub fn to_block_function(&self) -> Result<BlockFunction> {
        let cells = self
            .block_cells
            .iter()
            .filter_map(|c| c.a.0.finite().map(|a| (a, c.b, c.mult)))
            .collect();
        let deficiency = self.deficiency.iter().map(|d| (d.b, d.mult)).collect();
        BlockFunction::from_parts(cells, deficiency)
    }

    pub fn to_kernel_barcode(&self) -> Result<IntervalBarcode> {
        IntervalBarcode::from_intervals(
            self.kernel
                .iter()
                .map(|iv| (iv.birth, iv.death, iv.mult))
                .collect(),
        )
    }
}

/// Pipeline switches for [`compute_document`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ComputeOptions {
    /// Compute the block function through the component-graph cycle counts
    /// instead of the component-count sweep.
    pub geometric: bool,
    /// Absolute tolerance for grouping nearby death values into one bar;
    /// `0.0` keeps the default exact-equality semantics.
    pub tol: f64,
}

/// Runs the full pipeline: both barcodes, the block function, optional
/// death-value grouping, and the derived barcodes.
pub fn compute_document(
    domain: &FiniteMetricSpace,
    codomain: &FiniteMetricSpace,
    mapping: &SetMapping,
    options: &ComputeOptions,
) -> Result<DiagramDocument> {
    debug_assert!(options.tol >= 0.0);
    let mut domain_barcode = barcode0(domain);
    let mut codomain_barcode = barcode0(codomain);
    let mut bf = if options.geometric {
        block_function_geometric(domain, codomain, mapping)?
    } else {
        block_function(domain, codomain, mapping)?
    };
    if options.tol > 0.0 {
        (domain_barcode, codomain_barcode, bf) =
            group_deaths(&domain_barcode, &codomain_barcode, &bf, options.tol)?;
    }
    let diagram = matching_diagram(&bf);

    Ok(DiagramDocument {
        schema_version: SCHEMA_VERSION,
        domain_barcode: BarcodeDoc::from(&domain_barcode),
        codomain_barcode: BarcodeDoc::from(&codomain_barcode),
        block_cells: diagram
            .points()
            .iter()
            .map(|&(a, b, mult)| CellDoc {
                a: AxisValue(a),
                b,
                mult,
            })
            .collect(),
        deficiency: bf
            .deficiency()
            .iter()
            .map(|&(b, mult)| DeficiencyDoc { b, mult })
            .collect(),
        kernel: kernel_barcode(&bf)
            .intervals()
            .iter()
            .map(|&(birth, death, mult)| IntervalDoc { birth, death, mult })
            .collect(),
        image: BarcodeDoc::from(&image_barcode(&bf)),
        cokernel: BarcodeDoc::from(&cokernel_barcode(&bf)),
        mapping_injective: mapping.is_injective(),
    })
}

/// Greedy left-to-right grouping: walking the distinct values in increasing
/// order, a value joins the current group while it lies within `tol` of the
/// group's smallest member, and every member is replaced by that smallest
/// value.
fn value_groups(sorted: &[f64], tol: f64) -> Vec<(f64, f64)> {
    let mut map = Vec::with_capacity(sorted.len());
    let mut anchor = f64::NEG_INFINITY;
    for &v in sorted {
        if v - anchor > tol {
            anchor = v;
        }
        map.push((v, anchor));
    }
    map
}

fn lookup(map: &[(f64, f64)], value: f64) -> Result<f64> {
    map.binary_search_by(|probe| probe.0.total_cmp(&value))
        .map(|idx| map[idx].1)
        .map_err(|_| {
            Error::InternalInvariantViolation(format!(
                "death value {value} missing from its barcode support"
            ))
        })
}

fn group_deaths(
    domain_barcode: &Barcode,
    codomain_barcode: &Barcode,
    bf: &BlockFunction,
    tol: f64,
) -> Result<(Barcode, Barcode, BlockFunction)> {
    let a_map = value_groups(&domain_barcode.support(), tol);
    let b_map = value_groups(&codomain_barcode.support(), tol);
    let merge_barcode = |barcode: &Barcode, map: &[(f64, f64)]| -> Result<Barcode> {
        let mut deaths: Vec<(f64, usize)> = Vec::new();
        for &(death, mult) in barcode.deaths() {
            let rep = lookup(map, death)?;
            match deaths.last_mut() {
                Some(last) if last.0 == rep => last.1 += mult,
                _ => deaths.push((rep, mult)),
            }
        }
        Barcode::new(deaths, barcode.infinite_bars())
    };
    let merged_domain = merge_barcode(domain_barcode, &a_map)?;
    let merged_codomain = merge_barcode(codomain_barcode, &b_map)?;

    let cells = bf
        .cells()
        .iter()
        .map(|&(a, b, mult)| Ok((lookup(&a_map, a)?, lookup(&b_map, b)?, mult)))
        .collect::<Result<Vec<_>>>()?;
    let mut deficiency: Vec<(f64, usize)> = Vec::new();
    for &(b, mult) in bf.deficiency() {
        let rep = lookup(&b_map, b)?;
        match deficiency.last_mut() {
            Some(last) if last.0 == rep => last.1 += mult,
            _ => deficiency.push((rep, mult)),
        }
    }
    let merged_bf = BlockFunction::from_parts(cells, deficiency)?;
    Ok((merged_domain, merged_codomain, merged_bf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proptest_support::{staircase_inclusion, staircase_x, staircase_z};

    fn staircase_document(options: &ComputeOptions) -> DiagramDocument {
        let x = staircase_x();
        let z = staircase_z();
        let mapping = staircase_inclusion();
        compute_document(&x, &z, &mapping, options).unwrap()
    }

    #[test]
    fn staircase_document_has_the_published_shape() {
        let doc = staircase_document(&ComputeOptions::default());
        assert_eq!(doc.schema_version, SCHEMA_VERSION);
        assert_eq!(doc.domain_barcode.deaths.len(), 2);
        assert_eq!(doc.domain_barcode.infinite_bars, 1);
        // Two finite cells, then the two ∞-column points.
        assert_eq!(doc.block_cells.len(), 4);
        assert!(doc.block_cells[..2].iter().all(|c| c.a.0.is_finite()));
        assert!(doc.block_cells[2..].iter().all(|c| !c.a.0.is_finite()));
        assert_eq!(doc.deficiency.len(), 2);
        assert_eq!(doc.kernel.len(), 2);
        assert_eq!(doc.image.infinite_bars, 1);
        assert_eq!(doc.cokernel.infinite_bars, 0);
        assert!(doc.mapping_injective);
    }

    #[test]
    fn json_round_trips_exactly() {
        let doc = staircase_document(&ComputeOptions::default());
        let text = doc.to_json();
        assert!(text.ends_with('\n'));
        let back = DiagramDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        // And the bytes themselves are reproducible.
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn infinity_is_the_literal_string() {
        let doc = staircase_document(&ComputeOptions::default());
        let text = doc.to_json();
        assert!(text.contains("\"a\": \"inf\""));
        assert!(!text.contains("null"));
    }

    #[test]
    fn geometric_route_yields_identical_bytes() {
        let default = staircase_document(&ComputeOptions::default());
        let geometric = staircase_document(&ComputeOptions {
            geometric: true,
            ..Default::default()
        });
        assert_eq!(geometric.to_json(), default.to_json());
    }

    #[test]
    fn malformed_json_names_the_line() {
        let err = DiagramDocument::from_json("{\n  \"schema_version\": oops\n}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = DiagramDocument::from_json("{}").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
    }

    #[test]
    fn alien_schema_versions_are_rejected() {
        let mut doc = staircase_document(&ComputeOptions::default());
        doc.schema_version = 99;
        let err = DiagramDocument::from_json(&doc.to_json()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn axis_values_accept_integers_and_reject_other_strings() {
        let v: AxisValue = serde_json::from_str("2").unwrap();
        assert_eq!(v.0.finite(), Some(2.0));
        let v: AxisValue = serde_json::from_str("\"inf\"").unwrap();
        assert!(!v.0.is_finite());
        assert!(serde_json::from_str::<AxisValue>("\"infinity\"").is_err());
    }

    #[test]
    fn document_parts_convert_back() {
        let doc = staircase_document(&ComputeOptions::default());
        let bf = doc.to_block_function().unwrap();
        assert_eq!(bf.cells().len(), 2);
        let diagram = doc.to_matching_diagram().unwrap();
        assert_eq!(diagram.total_multiplicity(), 6);
        let kernel = doc.to_kernel_barcode().unwrap();
        assert_eq!(kernel.total(), 3);
        let domain = doc.domain_barcode.to_barcode().unwrap();
        assert_eq!(domain.total_finite(), 3);
    }

    #[test]
    fn grouping_merges_near_ties() {
        // Distances 1 and 1.05 collapse onto 1 at tolerance 0.1; the far
        // point stays its own bar.
        let z = FiniteMetricSpace::from_points(&[
            vec![0.0],
            vec![1.0],
            vec![2.05],
            vec![10.0],
        ])
        .unwrap();
        let x = z.restrict(&[0, 3]).unwrap();
        let mapping = SetMapping::new(vec![0, 3], 4).unwrap();
        let exact = compute_document(&z, &z, &SetMapping::identity(4), &ComputeOptions::default())
            .unwrap();
        assert_eq!(exact.codomain_barcode.deaths.len(), 3);

        let grouped = compute_document(
            &x,
            &z,
            &mapping,
            &ComputeOptions {
                tol: 0.1,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(grouped.codomain_barcode.deaths.len(), 2);
        assert_eq!(grouped.codomain_barcode.deaths[0].death, 1.0);
        assert_eq!(grouped.codomain_barcode.deaths[0].mult, 2);
        // Derived barcodes are rebuilt from the grouped block function, so
        // their supports live on the grouped values.
        for death in &grouped.cokernel.deaths {
            assert!(death.death == 1.0 || death.death == 10.0 - 2.05);
        }
        let round = DiagramDocument::from_json(&grouped.to_json()).unwrap();
        assert_eq!(round, grouped);
    }

    #[test]
    fn grouping_is_anchored_left_not_chained() {
        // 1, 1.08, 1.16: the third value is within tol of the second but not
        // of the group anchor, so it opens a new group.
        let map = value_groups(&[1.0, 1.08, 1.16], 0.1);
        assert_eq!(map, vec![(1.0, 1.0), (1.08, 1.0), (1.16, 1.16)]);
    }
}
