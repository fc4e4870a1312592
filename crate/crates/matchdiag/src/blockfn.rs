//! The block function of a set mapping between two finite metric spaces.
//!
//! A mapping `f: X → Z` induces a linear map between the component spaces of
//! the two filtrations. For every pair of death values `(a, b)` the block
//! function counts how many bars of the domain barcode ending at `a` are
//! carried onto bars of the codomain barcode ending at `b`; the deficiency
//! counts the codomain bars at `b` left uncovered.
//!
//! Three routes are kept deliberately separate. [`block_value`] evaluates one
//! cell as the literal dimension of a quotient of explicit subspace bases;
//! [`block_value_alt`] evaluates the same cell through a sum/rank identity
//! that never materializes an intersection basis. [`block_function`] computes
//! the whole table at once by counting connected components of unions of
//! spanning-tree edges — a double difference of the component-count table
//! recovers every cell. The first two serve as per-cell oracles for the
//! third; tests insist they agree.

use crate::error::{Error, Result};
use crate::filtration::{components_at, mst_edges, MstEdge, UnionFind};
use crate::gf2::{apply_map, subspace_from_partition, Gf2Subspace};
use crate::metric::FiniteMetricSpace;
use std::cmp::Ordering;
use std::fmt;

/// A total map of domain point indices into codomain point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetMapping {
    target: Vec<usize>,
    codomain_len: usize,
    injective: bool,
}

impl SetMapping {
    /// Wraps `target[i] = image of domain point i`, checking totality into a
    /// codomain of the given size.
    pub fn new(target: Vec<usize>, codomain_len: usize) -> Result<Self> {
        let mut seen = vec![false; codomain_len];
        let mut injective = true;
        for (index, &t) in target.iter().enumerate() {
            if t >= codomain_len {
                return Err(Error::MappingOutOfRange {
                    index,
                    target: t,
                    len: codomain_len,
                });
            }
            if seen[t] {
                injective = false;
            }
            seen[t] = true;
        }
        Ok(Self {
            target,
            codomain_len,
            injective,
        })
    }

    /// The identity mapping on `n` points.
    pub fn identity(n: usize) -> Self {
        Self {
            target: (0..n).collect(),
            codomain_len: n,
            injective: true,
        }
    }

    /// Domain size.
    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    pub fn codomain_len(&self) -> usize {
        self.codomain_len
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    /// Image of domain point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.target[i]
    }

    /// True when no two domain points share an image.
    pub fn is_injective(&self) -> bool {
        self.injective
    }
}

/// A death value that may be infinite. Orders after every finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Finite(f64),
    Infinity,
}

impl Endpoint {
    /// Total order: finite values by their floating-point total order,
    /// infinity last.
    pub fn total_cmp(&self, other: &Endpoint) -> Ordering {
        match (self, other) {
            (Endpoint::Finite(x), Endpoint::Finite(y)) => x.total_cmp(y),
            (Endpoint::Finite(_), Endpoint::Infinity) => Ordering::Less,
            (Endpoint::Infinity, Endpoint::Finite(_)) => Ordering::Greater,
            (Endpoint::Infinity, Endpoint::Infinity) => Ordering::Equal,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Endpoint::Finite(_))
    }

    /// The wrapped value, if finite.
    pub fn finite(&self) -> Option<f64> {
        match self {
            Endpoint::Finite(v) => Some(*v),
            Endpoint::Infinity => None,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Finite(v) => write!(f, "{v}"),
            Endpoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Vectors killed by collapsing components at threshold `a` (edges of weight
/// `≤ a`). Grows from the zero subspace at `a = 0` to dimension `n − 1`.
pub fn kernel_plus(space: &FiniteMetricSpace, a: f64) -> Gf2Subspace {
    subspace_from_partition(&components_at(space, a, false), space.len())
}

/// Same with strict threshold (edges of weight `< a`): what has already died
/// before `a`. Equals [`kernel_plus`] at the previous critical value.
pub fn kernel_minus(space: &FiniteMetricSpace, a: f64) -> Gf2Subspace {
    subspace_from_partition(&components_at(space, a, true), space.len())
}

pub(crate) fn check_compatible(
    x: &FiniteMetricSpace,
    z: &FiniteMetricSpace,
    mapping: &SetMapping,
) -> Result<()> {
    if mapping.len() != x.len() {
        return Err(Error::SizeMismatch(mapping.len(), x.len()));
    }
    if mapping.codomain_len() != z.len() {
        return Err(Error::SizeMismatch(mapping.codomain_len(), z.len()));
    }
    Ok(())
}

/// The four subspaces a single cell is built from: the pushed-forward domain
/// kernels and the codomain kernels at the two thresholds.
fn cell_subspaces(
    x: &FiniteMetricSpace,
    z: &FiniteMetricSpace,
    mapping: &SetMapping,
    a: f64,
    b: f64,
) -> Result<[Gf2Subspace; 4]> {
    let a_plus = apply_map(mapping.target(), z.len(), &kernel_plus(x, a))?;
    let a_minus = apply_map(mapping.target(), z.len(), &kernel_minus(x, a))?;
    let b_plus = kernel_plus(z, b);
    let b_minus = kernel_minus(z, b);
    Ok([a_plus, a_minus, b_plus, b_minus])
}

/// Multiplicity of the single cell `(a, b)`, as the dimension of the quotient
///
/// ```text
/// (A⁺ ∩ B⁺) / (A⁻ ∩ B⁺ + A⁺ ∩ B⁻)
/// ```
///
/// where `A±` are the pushed-forward domain kernels at `a` and `B±` the
/// codomain kernels at `b`. The denominator is materialized and checked to
/// sit inside the numerator before subtracting dimensions.
pub fn block_value(
    x: &FiniteMetricSpace,
    z: &FiniteMetricSpace,
    mapping: &SetMapping,
    a: f64,
    b: f64,
) -> Result<usize> {
    check_compatible(x, z, mapping)?;
    let [a_plus, a_minus, b_plus, b_minus] = cell_subspaces(x, z, mapping, a, b)?;
    let numerator = a_plus.intersection(&b_plus)?;
    let denominator = a_minus
        .intersection(&b_plus)?
        .sum(&a_plus.intersection(&b_minus)?)?;
    if !numerator.contains(&denominator)? {
        return Err(Error::InternalInvariantViolation(format!(
            "block quotient denominator escapes its numerator at ({a}, {b})"
        )));
    }
    Ok(numerator.dim() - denominator.dim())
}

/// The same cell through the identity
///
/// ```text
/// dim((A⁺ + B⁻) ∩ (A⁻ + B⁺)) − dim(A⁻ + B⁻)
/// ```
///
/// evaluated purely with ranks of sums, never an intersection basis — an
/// independent arithmetic path from [`block_value`].
pub fn block_value_alt(
    x: &FiniteMetricSpace,
    z: &FiniteMetricSpace,
    mapping: &SetMapping,
    a: f64,
    b: f64,
) -> Result<usize> {
    check_compatible(x, z, mapping)?;
    let [a_plus, a_minus, b_plus, b_minus] = cell_subspaces(x, z, mapping, a, b)?;
    let left = a_plus.sum(&b_minus)?;
    let right = a_minus.sum(&b_plus)?;
    let bottom = a_minus.sum(&b_minus)?;
    if !left.contains(&bottom)? || !right.contains(&bottom)? {
        return Err(Error::InternalInvariantViolation(format!(
            "sum of strict kernels escapes the cell envelope at ({a}, {b})"
        )));
    }
    Ok(left.dim_intersection(&right)? - bottom.dim())
}

/// The block function: every nonzero cell plus the per-death deficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFunction {
    /// Nonzero cells `(a, b, multiplicity)`, sorted by `(a, b)`.
    cells: Vec<(f64, f64, usize)>,
    /// `(b, deficiency)` for every codomain death value, zeros included,
    /// sorted by `b`.
    deficiency: Vec<(f64, usize)>,
}

impl BlockFunction {
    /// Reassembles a block function from parts (deserialization, tolerance
    /// merging). Cells are sorted and merged; deficiency entries must cover
    /// distinct death values.
    pub fn from_parts(
        mut cells: Vec<(f64, f64, usize)>,
        mut deficiency: Vec<(f64, usize)>,
    ) -> Result<Self> {
        for &(a, b, _) in &cells {
            if !a.is_finite() || !b.is_finite() || a <= 0.0 || b <= 0.0 {
                return Err(Error::InconsistentParts(format!(
                    "block cell at ({a}, {b}) is not positive finite"
                )));
            }
        }
        cells.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
        cells.dedup_by(|next, prev| {
            if next.0 == prev.0 && next.1 == prev.1 {
                prev.2 += next.2;
                true
            } else {
                false
            }
        });
        cells.retain(|&(_, _, m)| m > 0);
        deficiency.sort_by(|p, q| p.0.total_cmp(&q.0));
        for pair in deficiency.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InconsistentParts(format!(
                    "duplicate deficiency entry at {}",
                    pair[0].0
                )));
            }
        }
        for &(b, _) in &deficiency {
            if !b.is_finite() || b <= 0.0 {
                return Err(Error::InconsistentParts(format!(
                    "deficiency death {b} is not positive finite"
                )));
            }
        }
        for &(_, b, _) in &cells {
            if deficiency.binary_search_by(|d| d.0.total_cmp(&b)).is_err() {
                return Err(Error::InconsistentParts(format!(
                    "cell death {b} missing from the deficiency support"
                )));
            }
        }
        Ok(Self { cells, deficiency })
    }

    /// Nonzero cells `(a, b, multiplicity)` sorted by `(a, b)`.
    pub fn cells(&self) -> &[(f64, f64, usize)] {
        &self.cells
    }

    /// `(b, deficiency)` over the full codomain death support.
    pub fn deficiency(&self) -> &[(f64, usize)] {
        &self.deficiency
    }

    /// Multiplicity at one cell (zero when absent).
    pub fn cell(&self, a: f64, b: f64) -> usize {
        self.cells
            .binary_search_by(|c| c.0.total_cmp(&a).then(c.1.total_cmp(&b)))
            .map(|k| self.cells[k].2)
            .unwrap_or(0)
    }

    /// Deficiency at one codomain death value (zero when off-support).
    pub fn deficiency_at(&self, b: f64) -> usize {
        self.deficiency
            .binary_search_by(|d| d.0.total_cmp(&b))
            .map(|k| self.deficiency[k].1)
            .unwrap_or(0)
    }

    /// Sum of the cells in row `a`.
    pub fn row_sum(&self, a: f64) -> usize {
        self.cells
            .iter()
            .filter(|c| c.0 == a)
            .map(|c| c.2)
            .sum()
    }

    /// Sum of the cells in column `b`.
    pub fn col_sum(&self, b: f64) -> usize {
        self.cells
            .iter()
            .filter(|c| c.1 == b)
            .map(|c| c.2)
            .sum()
    }

    /// Distinct `a` values that carry at least one cell, ascending.
    pub fn domain_support(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.cells.iter().map(|c| c.0).collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty() && self.deficiency.iter().all(|d| d.1 == 0)
    }
}

/// Computes the whole block function by component counting.
///
/// Let `N[i][j]` be the number of connected components of the graph on the
/// codomain points whose edges are the images of the domain's spanning-tree
/// edges of weight `≤ aᵢ` together with the codomain's spanning-tree edges of
/// weight `≤ bⱼ` (row/column 0 meaning no edges of that kind). Non-tree edges
/// never change a component, so trees suffice. Every cell is then the double
/// difference
///
/// ```text
/// cells(aᵢ, bⱼ) = N[i][j] − N[i−1][j] − N[i][j−1] + N[i−1][j−1]
/// ```
///
/// and each row of `N` comes from one incremental union-find sweep. The
/// deficiency falls out of the definition `m(bⱼ) − Σᵢ cells(aᵢ, bⱼ)`.
pub fn block_function(
    x: &FiniteMetricSpace,
    z: &FiniteMetricSpace,
    mapping: &SetMapping,
) -> Result<BlockFunction> {
    check_compatible(x, z, mapping)?;
    let x_tree = mst_edges(x);
    let z_tree = mst_edges(z);
    let a_values = distinct_weights(&x_tree);
    let b_values = distinct_weights(&z_tree);
    let p = a_values.len();
    let q = b_values.len();

    let mut n = vec![vec![0i64; q + 1]; p + 1];
    let mut x_idx = 0;
    let mut base = UnionFind::new(z.len());
    for (i, row) in n.iter_mut().enumerate() {
        // Rows share the image edges of all earlier rows; only the fresh
        // weight group is merged in, then the codomain edges are replayed on
        // a copy.
        if i > 0 {
            while x_idx < x_tree.len() && x_tree[x_idx].weight <= a_values[i - 1] {
                let (u, v) = (mapping.apply(x_tree[x_idx].i), mapping.apply(x_tree[x_idx].j));
                if u != v {
                    base.union(u, v);
                }
                x_idx += 1;
            }
        }
        let mut uf = base.clone();
        row[0] = uf.components() as i64;
        let mut z_idx = 0;
        for (j, cell) in row.iter_mut().enumerate().skip(1) {
            while z_idx < z_tree.len() && z_tree[z_idx].weight <= b_values[j - 1] {
                uf.union(z_tree[z_idx].i, z_tree[z_idx].j);
                z_idx += 1;
            }
            *cell = uf.components() as i64;
        }
    }

    let mut cells = Vec::new();
    for i in 1..=p {
        for j in 1..=q {
            let value = n[i][j] - n[i - 1][j] - n[i][j - 1] + n[i - 1][j - 1];
            if value < 0 {
                return Err(Error::InternalInvariantViolation(format!(
                    "negative block multiplicity {value} at ({}, {})",
                    a_values[i - 1],
                    b_values[j - 1]
                )));
            }
            if value > 0 {
                cells.push((a_values[i - 1], b_values[j - 1], value as usize));
            }
        }
    }

    let mut deficiency = Vec::with_capacity(q);
    for (j, &b) in b_values.iter().enumerate() {
        let mult = z_tree.iter().filter(|e| e.weight == b).count();
        let covered: usize = cells.iter().filter(|c| c.1 == b).map(|c| c.2).sum();
        let value = mult as i64 - covered as i64;
        if value < 0 {
            return Err(Error::NegativeDeficiency { death: b, value });
        }
        debug_assert_eq!(value, n[p][j] - n[p][j + 1]);
        deficiency.push((b, value as usize));
    }

    Ok(BlockFunction { cells, deficiency })
}

fn distinct_weights(tree: &[MstEdge]) -> Vec<f64> {
    let mut out: Vec<f64> = tree.iter().map(|e| e.weight).collect();
    out.dedup();
    out
}

/// The matching diagram: one point per nonzero cell, plus a point at
/// `(∞, b)` for every nonzero deficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingDiagram {
    points: Vec<(Endpoint, f64, usize)>,
}

impl MatchingDiagram {
    /// Wraps a raw point list, sorting by `(a, b)` with infinite `a` last and
    /// merging duplicates. Multiplicity-zero points are dropped.
    pub fn new(mut points: Vec<(Endpoint, f64, usize)>) -> Result<Self> {
        for &(a, b, _) in &points {
            if !b.is_finite() || b <= 0.0 {
                return Err(Error::InconsistentParts(format!(
                    "diagram point ({a}, {b}) needs a positive finite second coordinate"
                )));
            }
            if let Endpoint::Finite(v) = a {
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::InconsistentParts(format!(
                        "diagram point ({a}, {b}) needs a positive first coordinate"
                    )));
                }
            }
        }
        points.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
        points.dedup_by(|next, prev| {
            if prev.0.total_cmp(&next.0).is_eq() && prev.1 == next.1 {
                prev.2 += next.2;
                true
            } else {
                false
            }
        });
        points.retain(|&(_, _, m)| m > 0);
        Ok(Self { points })
    }

    /// Points `(a, b, multiplicity)` sorted by `(a, b)`, infinite `a` last.
    pub fn points(&self) -> &[(Endpoint, f64, usize)] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total number of points counted with multiplicity.
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.2).sum()
    }
}

/// Assembles the diagram of a block function.
pub fn matching_diagram(bf: &BlockFunction) -> MatchingDiagram {
    let mut points: Vec<(Endpoint, f64, usize)> = bf
        .cells()
        .iter()
        .map(|&(a, b, m)| (Endpoint::Finite(a), b, m))
        .collect();
    points.extend(
        bf.deficiency()
            .iter()
            .filter(|d| d.1 > 0)
            .map(|&(b, m)| (Endpoint::Infinity, b, m)),
    );
    MatchingDiagram::new(points).expect("block function parts are valid diagram points")
}
