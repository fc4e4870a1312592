//! Shared fixtures and proptest strategies for the unit tests.

use crate::blockfn::SetMapping;
use crate::metric::FiniteMetricSpace;
use proptest::prelude::*;

/// Four points climbing a diagonal staircase; its barcode has a double death
/// at 2 and a single one at 2√2.
pub fn staircase_x() -> FiniteMetricSpace {
    FiniteMetricSpace::from_points(&[
        vec![0.0, 0.0],
        vec![2.0, 0.0],
        vec![2.0, 2.0],
        vec![4.0, 4.0],
    ])
    .unwrap()
}

/// The staircase with three extra diagonal points: five deaths at √2, one at
/// 2√2.
pub fn staircase_z() -> FiniteMetricSpace {
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

/// The staircase points sit at the first four indices of the larger space.
pub fn staircase_inclusion() -> SetMapping {
    SetMapping::new(vec![0, 1, 2, 3], 7).unwrap()
}

/// Three points on a line mapped onto a stretched line: every bar lands on a
/// longer-lived bar, so both block cells sit above the diagonal.
pub fn line_triple() -> (FiniteMetricSpace, FiniteMetricSpace, SetMapping) {
    let x = FiniteMetricSpace::from_points(&[vec![0.0], vec![0.5], vec![1.0]]).unwrap();
    let z = FiniteMetricSpace::from_points(&[vec![0.0], vec![1.0], vec![3.0]]).unwrap();
    let m = SetMapping::new(vec![0, 1, 2], 3).unwrap();
    (x, z, m)
}

/// Points on a small integer grid: ties in the distance multiset are common,
/// which is where multiplicity bookkeeping can go wrong.
pub fn arb_grid_points(max_len: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::btree_set((0u8..6, 0u8..6), 2..=max_len).prop_map(|set| {
        set.into_iter()
            .map(|(a, b)| vec![a as f64, b as f64])
            .collect()
    })
}

/// Either Euclidean grid points or a random symmetric positive matrix
/// (integer entries, so triangle violations and ties both occur).
pub fn arb_space(max_len: usize) -> BoxedStrategy<FiniteMetricSpace> {
    let euclidean =
        arb_grid_points(max_len).prop_map(|pts| FiniteMetricSpace::from_points(&pts).unwrap());
    let matrix = (2usize..=max_len).prop_flat_map(|n| {
        prop::collection::vec(1u8..=9, n * (n - 1) / 2).prop_map(move |vals| {
            let mut rows = vec![vec![0.0; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in 0..i {
                    rows[i][j] = vals[k] as f64;
                    rows[j][i] = vals[k] as f64;
                    k += 1;
                }
            }
            FiniteMetricSpace::from_matrix(&rows).unwrap()
        })
    });
    prop_oneof![euclidean, matrix].boxed()
}

/// A subset inclusion: the domain is a restriction of the codomain and the
/// mapping records the chosen indices.
pub fn arb_inclusion(
    max_len: usize,
) -> impl Strategy<Value = (FiniteMetricSpace, FiniteMetricSpace, SetMapping)> {
    arb_space(max_len).prop_flat_map(|z| {
        let n = z.len();
        prop::collection::btree_set(0..n, 1..=n).prop_map(move |s| {
            let subset: Vec<usize> = s.into_iter().collect();
            let x = z.restrict(&subset).unwrap();
            let m = SetMapping::new(subset, n).unwrap();
            (x, z.clone(), m)
        })
    })
}

/// A full random instance: half the time a subset inclusion, half the time
/// an unrelated domain with an arbitrary (often non-injective) mapping.
pub fn arb_instance() -> impl Strategy<Value = (FiniteMetricSpace, FiniteMetricSpace, SetMapping)>
{
    arb_space(8).prop_flat_map(|z| {
        let n = z.len();
        let z_for_inclusion = z.clone();
        let inclusion = prop::collection::btree_set(0..n, 1..=n).prop_map(move |s| {
            let subset: Vec<usize> = s.into_iter().collect();
            let x = z_for_inclusion.restrict(&subset).unwrap();
            let m = SetMapping::new(subset, n).unwrap();
            (x, z_for_inclusion.clone(), m)
        });
        let arbitrary = arb_space(6).prop_flat_map(move |x| {
            let z = z.clone();
            prop::collection::vec(0..n, x.len())
                .prop_map(move |target| (x.clone(), z.clone(), SetMapping::new(target, n).unwrap()))
        });
        prop_oneof![inclusion.boxed(), arbitrary.boxed()]
    })
}
