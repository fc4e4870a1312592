//! Subspaces of GF(2)^n on bit-packed rows.
//!
//! A [`Gf2Subspace`] always holds a reduced row-echelon basis: rows are
//! nonzero, their pivot (lowest set bit) columns are strictly increasing, and
//! every pivot column is zero in all other rows. Bases are therefore
//! canonical — two subspaces are equal exactly when their row lists are.
//!
//! Sums reduce one basis into the other. Intersections track, for every row
//! of the stacked system, the part contributed by the first subspace; rows
//! that cancel on the stacked side leave that part as an intersection
//! element. This gives explicit intersection bases without going through the
//! rank formula, which [`Gf2Subspace::dim_intersection`] uses instead.

use crate::error::{Error, Result};
use crate::filtration::Partition;

fn word_count(dim: usize) -> usize {
    dim.div_ceil(64)
}

fn get_bit(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(row: &mut [u64], i: usize) {
    row[i / 64] ^= 1 << (i % 64);
}

fn xor_in(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn leading_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
}

/// A subspace of GF(2)^`ambient_dim` in reduced row-echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Subspace {
    ambient_dim: usize,
    rows: Vec<Vec<u64>>,
}

impl Gf2Subspace {
    /// The zero subspace.
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            rows: Vec::new(),
        }
    }

    /// Span of the given vectors, each written as a list of support indices.
    pub fn from_rows(ambient_dim: usize, rows: &[Vec<usize>]) -> Self {
        let mut space = Self::zero(ambient_dim);
        for support in rows {
            let mut row = vec![0u64; word_count(ambient_dim)];
            for &i in support {
                assert!(i < ambient_dim, "support index out of range");
                set_bit(&mut row, i);
            }
            space.insert(row);
        }
        space
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The reduced basis rows, pivots increasing.
    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Support indices of basis row `k`.
    pub fn row_support(&self, k: usize) -> Vec<usize> {
        (0..self.ambient_dim)
            .filter(|&i| get_bit(&self.rows[k], i))
            .collect()
    }

    /// Adds a vector to the span, keeping the reduced form. Returns false if
    /// the vector was already in the span.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        debug_assert_eq!(row.len(), word_count(self.ambient_dim));
        for r in &self.rows {
            let p = leading_bit(r).expect("stored rows are nonzero");
            if get_bit(&row, p) {
                xor_in(&mut row, r);
            }
        }
        let Some(pivot) = leading_bit(&row) else {
            return false;
        };
        for r in &mut self.rows {
            if get_bit(r, pivot) {
                xor_in(r, &row);
            }
        }
        let pos = self
            .rows
            .partition_point(|r| leading_bit(r).expect("stored rows are nonzero") < pivot);
        self.rows.insert(pos, row);
        true
    }

    /// True when `vector` lies in the span.
    pub fn contains_vector(&self, vector: &[u64]) -> bool {
        let mut row = vector.to_vec();
        for r in &self.rows {
            let p = leading_bit(r).expect("stored rows are nonzero");
            if get_bit(&row, p) {
                xor_in(&mut row, r);
            }
        }
        leading_bit(&row).is_none()
    }

    /// True when every vector of `other` lies in this span.
    pub fn contains(&self, other: &Gf2Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.rows.iter().all(|r| self.contains_vector(r)))
    }

    /// The sum of the two subspaces.
    pub fn sum(&self, other: &Gf2Subspace) -> Result<Gf2Subspace> {
        self.check_ambient(other)?;
        let mut result = self.clone();
        for r in &other.rows {
            result.insert(r.clone());
        }
        Ok(result)
    }

    /// Dimension of the sum: the rank of the two bases stacked.
    pub fn dim_sum(&self, other: &Gf2Subspace) -> Result<usize> {
        Ok(self.sum(other)?.dim())
    }

    /// Dimension of the intersection through the rank formula
    /// `dim A + dim B − dim(A + B)`.
    pub fn dim_intersection(&self, other: &Gf2Subspace) -> Result<usize> {
        Ok(self.dim() + other.dim() - self.dim_sum(other)?)
    }

    /// An explicit basis of the intersection.
    ///
    /// Stacks `[v | v]` for this basis and `[w | 0]` for the other, then
    /// eliminates on the left half. A row whose left half cancels has a right
    /// half that is simultaneously a combination of this basis and equal to a
    /// combination of the other's — an intersection element.
    pub fn intersection(&self, other: &Gf2Subspace) -> Result<Gf2Subspace> {
        self.check_ambient(other)?;
        let w = word_count(self.ambient_dim);
        let mut pivots: Vec<Vec<u64>> = Vec::new();
        let mut result = Gf2Subspace::zero(self.ambient_dim);
        let feed = |combined: Vec<u64>, pivots: &mut Vec<Vec<u64>>, result: &mut Gf2Subspace| {
            let mut c = combined;
            loop {
                let Some(p) = leading_bit(&c[..w]) else {
                    // Left half cancelled: the right half lies in both spans.
                    result.insert(c[w..].to_vec());
                    return;
                };
                match pivots.iter().find(|r| leading_bit(&r[..w]) == Some(p)) {
                    Some(r) => {
                        let r = r.clone();
                        xor_in(&mut c, &r);
                    }
                    None => {
                        pivots.push(c);
                        return;
                    }
                }
            }
        };
        for r in &self.rows {
            let mut combined = vec![0u64; 2 * w];
            combined[..w].copy_from_slice(r);
            combined[w..].copy_from_slice(r);
            feed(combined, &mut pivots, &mut result);
        }
        for r in &other.rows {
            let mut combined = vec![0u64; 2 * w];
            combined[..w].copy_from_slice(r);
            feed(combined, &mut pivots, &mut result);
        }
        Ok(result)
    }

    fn check_ambient(&self, other: &Gf2Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        Ok(())
    }
}

/// The subspace spanned by `e_x + e_rep(x)` over all non-representative
/// indices of the partition: the vectors killed when each block is collapsed
/// to a point. Its dimension is `n − #blocks`.
pub fn subspace_from_partition(p: &Partition, ambient_dim: usize) -> Gf2Subspace {
    assert_eq!(p.len(), ambient_dim, "partition size must match ambient");
    let w = word_count(ambient_dim);
    let mut space = Gf2Subspace::zero(ambient_dim);
    for x in 0..p.len() {
        let rep = p.rep(x);
        if rep != x {
            let mut row = vec![0u64; w];
            set_bit(&mut row, rep);
            set_bit(&mut row, x);
            space.insert(row);
        }
    }
    debug_assert_eq!(space.dim(), p.len() - p.blocks());
    space
}

/// Pushes a subspace forward along a map of basis indices: `e_x` goes to
/// `e_target[x]`, so a vector's image toggles the target bit once per
/// support index (indices with a common target cancel in pairs).
pub fn apply_map(target: &[usize], target_ambient: usize, s: &Gf2Subspace) -> Result<Gf2Subspace> {
    if target.len() != s.ambient_dim() {
        return Err(Error::AmbientMismatch(target.len(), s.ambient_dim()));
    }
    for (index, &t) in target.iter().enumerate() {
        if t >= target_ambient {
            return Err(Error::MappingOutOfRange {
                index,
                target: t,
                len: target_ambient,
            });
        }
    }
    let w = word_count(target_ambient);
    let mut result = Gf2Subspace::zero(target_ambient);
    for k in 0..s.dim() {
        let mut row = vec![0u64; w];
        for x in s.row_support(k) {
            set_bit(&mut row, target[x]);
        }
        result.insert(row);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::Partition;
    use proptest::prelude::*;

    fn subspace(ambient: usize, rows: &[&[usize]]) -> Gf2Subspace {
        Gf2Subspace::from_rows(ambient, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    /// Intersection by solving for zero sums of the stacked bases, keeping
    /// the full coefficient vector rather than partial sums.
    fn kernel_method_intersection(a: &Gf2Subspace, b: &Gf2Subspace) -> Gf2Subspace {
        let dim = a.ambient_dim();
        let w = word_count(dim);
        let total = a.dim() + b.dim();
        let cw = word_count(total.max(1));
        let mut stacked: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
        for (k, r) in a.basis().iter().chain(b.basis()).enumerate() {
            let mut coeff = vec![0u64; cw];
            set_bit(&mut coeff, k);
            stacked.push((r.clone(), coeff));
        }
        let mut pivots: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
        let mut result = Gf2Subspace::zero(dim);
        for (mut vec, mut coeff) in stacked {
            loop {
                let Some(p) = leading_bit(&vec) else {
                    // Zero sum: the first-half combination is in both spans.
                    let mut element = vec![0u64; w];
                    for (k, r) in a.basis().iter().enumerate() {
                        if get_bit(&coeff, k) {
                            xor_in(&mut element, r);
                        }
                    }
                    result.insert(element);
                    break;
                };
                match pivots.iter().find(|(v, _)| leading_bit(v) == Some(p)) {
                    Some((v, c)) => {
                        let (v, c) = (v.clone(), c.clone());
                        xor_in(&mut vec, &v);
                        xor_in(&mut coeff, &c);
                    }
                    None => {
                        pivots.push((vec, coeff));
                        break;
                    }
                }
            }
        }
        result
    }

    #[test]
    fn partition_subspace_has_reduced_basis() {
        // Blocks {0,1,2} and {3}: canonical basis {e0+e2, e1+e2}.
        let p = Partition::new(vec![0, 0, 0, 3]).unwrap();
        let s = subspace_from_partition(&p, 4);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.row_support(0), vec![0, 2]);
        assert_eq!(s.row_support(1), vec![1, 2]);
    }

    #[test]
    fn basis_is_canonical_under_reordering() {
        let s1 = subspace(6, &[&[0, 1], &[1, 2], &[3, 4]]);
        let s2 = subspace(6, &[&[3, 4], &[0, 2], &[0, 1], &[1, 2]]);
        assert_eq!(s1, s2);
        assert_eq!(s1.dim(), 3);
    }

    #[test]
    fn contains_and_membership() {
        let s = subspace(4, &[&[0, 1], &[1, 2]]);
        let sub = subspace(4, &[&[0, 2]]);
        assert!(s.contains(&sub).unwrap());
        assert!(!sub.contains(&s).unwrap());
        let outside = subspace(4, &[&[3]]);
        assert!(!s.contains(&outside).unwrap());
    }

    #[test]
    fn apply_map_collapses_merged_points() {
        // Mapping both endpoints of e0+e1 to one target kills the vector.
        let s = subspace(3, &[&[0, 1], &[1, 2]]);
        let image = apply_map(&[0, 0, 1], 2, &s).unwrap();
        assert_eq!(image.dim(), 1);
        assert_eq!(image.row_support(0), vec![0, 1]);
    }

    #[test]
    fn ambient_mismatch_is_rejected() {
        let a = subspace(3, &[&[0]]);
        let b = subspace(4, &[&[0]]);
        assert!(matches!(
            a.dim_sum(&b).unwrap_err(),
            Error::AmbientMismatch(3, 4)
        ));
    }

    #[test]
    fn intersection_of_plane_and_line() {
        let plane = subspace(4, &[&[0, 1], &[1, 2]]);
        let other = subspace(4, &[&[0, 2], &[3]]);
        let meet = plane.intersection(&other).unwrap();
        assert_eq!(meet.dim(), 1);
        assert_eq!(meet.row_support(0), vec![0, 2]);
    }

    fn arb_subspace(ambient: usize) -> impl Strategy<Value = Gf2Subspace> {
        prop::collection::vec(
            prop::collection::vec(0..ambient, 1..=ambient),
            0..=ambient,
        )
        .prop_map(move |rows| Gf2Subspace::from_rows(ambient, &rows))
    }

    proptest! {
        #[test]
        fn rank_formula_matches_explicit_bases(a in arb_subspace(9), b in arb_subspace(9)) {
            let explicit = a.intersection(&b).unwrap();
            let oracle = kernel_method_intersection(&a, &b);
            prop_assert_eq!(&explicit, &oracle);
            prop_assert_eq!(a.dim_intersection(&b).unwrap(), explicit.dim());
            // The intersection sits inside both, the summands inside the sum.
            prop_assert!(a.contains(&explicit).unwrap());
            prop_assert!(b.contains(&explicit).unwrap());
            let total = a.sum(&b).unwrap();
            prop_assert!(total.contains(&a).unwrap());
            prop_assert!(total.contains(&b).unwrap());
            prop_assert_eq!(total.dim(), a.dim_sum(&b).unwrap());
        }

        #[test]
        fn insertion_is_idempotent(a in arb_subspace(8)) {
            let mut again = a.clone();
            for k in 0..a.dim() {
                prop_assert!(!again.insert(a.basis()[k].clone()));
            }
            prop_assert_eq!(again, a);
        }

        #[test]
        fn intersection_commutes(a in arb_subspace(7), b in arb_subspace(7)) {
            prop_assert_eq!(a.intersection(&b).unwrap(), b.intersection(&a).unwrap());
        }
    }
}
