//! Everything the block function determines: the ladder decomposition of the
//! induced morphism, the kernel/image/cokernel barcodes, the bar-level
//! partial matching, and the reconstruction of the diagram from its parts.

use crate::blockfn::{BlockFunction, Endpoint, MatchingDiagram};
use crate::error::{Error, Result};
use crate::filtration::{Barcode, IntervalBarcode};

/// A morphism written as a direct sum of elementary pieces: bar-to-bar
/// ladders, bare codomain bars, and the everlasting component.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderDecomposition {
    /// `(a, b, multiplicity)`: bars dying at `a` carried onto bars dying at
    /// `b`, sorted by `(a, b)`.
    ladders: Vec<(f64, f64, usize)>,
    /// `(b, multiplicity)`: codomain bars hit by nothing.
    births_only: Vec<(f64, usize)>,
    /// The infinite bars pair up; present for any map of nonempty spaces.
    has_infinite: bool,
}

impl LadderDecomposition {
    pub fn ladders(&self) -> &[(f64, f64, usize)] {
        &self.ladders
    }

    pub fn births_only(&self) -> &[(f64, usize)] {
        &self.births_only
    }

    pub fn has_infinite(&self) -> bool {
        self.has_infinite
    }
}

/// Splits the morphism into ladders. Only meaningful when every domain bar
/// is carried somewhere — true for injective mappings — so the row marginal
/// is checked first, and the column marginal against the codomain barcode.
pub fn ladder_decomposition(
    bf: &BlockFunction,
    domain: &Barcode,
    codomain: &Barcode,
) -> Result<LadderDecomposition> {
    for &(a, mult) in domain.deaths() {
        let carried = bf.row_sum(a);
        if carried != mult {
            return Err(Error::NotInjectiveDecomposable(format!(
                "{carried} of {mult} bars dying at {a} are carried onto codomain bars"
            )));
        }
    }
    for &(a, _, _) in bf.cells() {
        if domain.multiplicity(a) == 0 {
            return Err(Error::NotInjectiveDecomposable(format!(
                "block cells live at {a}, which is not a domain death value"
            )));
        }
    }
    for &(b, mult) in codomain.deaths() {
        if bf.col_sum(b) + bf.deficiency_at(b) != mult {
            return Err(Error::InconsistentParts(format!(
                "cells and deficiency at {b} do not add up to the codomain multiplicity {mult}"
            )));
        }
    }
    Ok(LadderDecomposition {
        ladders: bf.cells().to_vec(),
        births_only: bf
            .deficiency()
            .iter()
            .filter(|d| d.1 > 0)
            .copied()
            .collect(),
        has_infinite: true,
    })
}

/// The kernel barcode: a cell `(a, b)` strictly below the diagonal kills a
/// class born when the codomain bar dies at `b` and keeps it until the
/// domain bar dies at `a`.
pub fn kernel_barcode(bf: &BlockFunction) -> IntervalBarcode {
    let intervals: Vec<(f64, f64, usize)> = bf
        .cells()
        .iter()
        .filter(|&&(a, b, _)| a > b)
        .map(|&(a, b, m)| (b, a, m))
        .collect();
    IntervalBarcode::from_intervals(intervals).expect("cells below the diagonal are proper intervals")
}

/// The image barcode: each codomain death value receives the cells of its
/// column, plus the everlasting component.
pub fn image_barcode(bf: &BlockFunction) -> Barcode {
    let mut deaths: Vec<(f64, usize)> = Vec::new();
    for &(b, _) in bf.deficiency() {
        let covered = bf.col_sum(b);
        if covered > 0 {
            deaths.push((b, covered));
        }
    }
    Barcode::new(deaths, 1).expect("column sums over a sorted support form a barcode")
}

/// The cokernel barcode: exactly the nonzero deficiencies.
pub fn cokernel_barcode(bf: &BlockFunction) -> Barcode {
    let deaths: Vec<(f64, usize)> = bf
        .deficiency()
        .iter()
        .filter(|d| d.1 > 0)
        .copied()
        .collect();
    Barcode::new(deaths, 0).expect("deficiencies over a sorted support form a barcode")
}

/// A bar-level matching between two barcodes. Bars are named by their death
/// value and a 1-based copy index within that value.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialMatching {
    pairs: Vec<((f64, usize), (f64, usize))>,
    unmatched_domain: Vec<(f64, usize)>,
    unmatched_codomain: Vec<(f64, usize)>,
}

impl PartialMatching {
    /// Matched pairs `((a, copy), (b, copy))` in domain order.
    pub fn pairs(&self) -> &[((f64, usize), (f64, usize))] {
        &self.pairs
    }

    pub fn unmatched_domain(&self) -> &[(f64, usize)] {
        &self.unmatched_domain
    }

    pub fn unmatched_codomain(&self) -> &[(f64, usize)] {
        &self.unmatched_codomain
    }
}

/// Expands the block function into a bar-level matching: cells are visited
/// by ascending `(a, b)` and each multiplicity consumes the lowest unused
/// copy indices on both sides.
pub fn induced_matching(
    bf: &BlockFunction,
    domain: &Barcode,
    codomain: &Barcode,
) -> Result<PartialMatching> {
    for &(a, b, _) in bf.cells() {
        if domain.multiplicity(a) == 0 {
            return Err(Error::NotAMatching(format!(
                "cells at domain death {a} have no bars to match"
            )));
        }
        if codomain.multiplicity(b) == 0 {
            return Err(Error::NotAMatching(format!(
                "cells at codomain death {b} have no bars to match"
            )));
        }
    }
    for &(a, mult) in domain.deaths() {
        if bf.row_sum(a) > mult {
            return Err(Error::NotAMatching(format!(
                "{} cells at domain death {a} exceed its {mult} bars",
                bf.row_sum(a)
            )));
        }
    }
    for &(b, mult) in codomain.deaths() {
        if bf.col_sum(b) > mult {
            return Err(Error::NotAMatching(format!(
                "{} cells at codomain death {b} exceed its {mult} bars",
                bf.col_sum(b)
            )));
        }
    }

    let mut domain_used: Vec<(f64, usize)> =
        domain.deaths().iter().map(|&(a, _)| (a, 0)).collect();
    let mut codomain_used: Vec<(f64, usize)> =
        codomain.deaths().iter().map(|&(b, _)| (b, 0)).collect();
    let next = |used: &mut Vec<(f64, usize)>, value: f64| -> usize {
        let slot = used
            .iter_mut()
            .find(|(v, _)| *v == value)
            .expect("value is on the barcode support");
        slot.1 += 1;
        slot.1
    };

    let mut pairs = Vec::new();
    // Cells are already sorted by (a, b), which is exactly the promised
    // visiting order.
    for &(a, b, mult) in bf.cells() {
        for _ in 0..mult {
            let da = next(&mut domain_used, a);
            let db = next(&mut codomain_used, b);
            pairs.push(((a, da), (b, db)));
        }
    }

    let leftovers = |used: &[(f64, usize)], deaths: &[(f64, usize)]| {
        let mut out = Vec::new();
        for (&(value, consumed), &(_, mult)) in used.iter().zip(deaths) {
            for copy in (consumed + 1)..=mult {
                out.push((value, copy));
            }
        }
        out
    };
    Ok(PartialMatching {
        pairs,
        unmatched_domain: leftovers(&domain_used, domain.deaths()),
        unmatched_codomain: leftovers(&codomain_used, codomain.deaths()),
    })
}

/// Rebuilds the matching diagram of an embedding-like morphism from its
/// kernel barcode, domain barcode, and cokernel barcode: kernel intervals
/// give the off-diagonal points, leftover domain bars sit on the diagonal,
/// and cokernel bars fill the infinite column.
pub fn diagram_from_parts(
    kernel: &IntervalBarcode,
    domain: &Barcode,
    cokernel: &Barcode,
) -> Result<MatchingDiagram> {
    if cokernel.infinite_bars() > 0 {
        return Err(Error::InconsistentParts(
            "a cokernel barcode cannot have infinite bars".into(),
        ));
    }
    let mut points: Vec<(Endpoint, f64, usize)> = Vec::new();
    for &(birth, death, mult) in kernel.intervals() {
        if domain.multiplicity(death) == 0 {
            return Err(Error::InconsistentParts(format!(
                "kernel interval dies at {death}, which is not a domain death value"
            )));
        }
        points.push((Endpoint::Finite(death), birth, mult));
    }
    for &(a, mult) in domain.deaths() {
        let consumed: usize = kernel
            .intervals()
            .iter()
            .filter(|iv| iv.1 == a)
            .map(|iv| iv.2)
            .sum();
        if consumed > mult {
            return Err(Error::InconsistentParts(format!(
                "kernel intervals dying at {a} outnumber the domain bars there"
            )));
        }
        if consumed < mult {
            points.push((Endpoint::Finite(a), a, mult - consumed));
        }
    }
    for &(b, mult) in cokernel.deaths() {
        points.push((Endpoint::Infinity, b, mult));
    }
    MatchingDiagram::new(points)
}
