//! Shared fixtures and seeded generators for the integration suites.
//!
//! Everything is deterministic: suites that must agree on "the same
//! instances" (route equivalence and the marginal checks, the perturbation
//! and bottleneck-bound trials) regenerate them from the same seed.

#![allow(dead_code)]

use matchdiag::blockfn::SetMapping;
use matchdiag::metric::FiniteMetricSpace;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Four points climbing a staircase in the plane; barcode {2: 2, 2√2: 1}.
pub fn staircase_x() -> FiniteMetricSpace {
    FiniteMetricSpace::from_points(&[
        vec![0.0, 0.0],
        vec![2.0, 0.0],
        vec![2.0, 2.0],
        vec![4.0, 4.0],
    ])
    .unwrap()
}

/// The staircase plus three midpoints and an outlier; barcode {√2: 5, 2√2: 1}.
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

/// The staircase points are the first four codomain points.
pub fn staircase_inclusion() -> SetMapping {
    SetMapping::new(vec![0, 1, 2, 3], 7).unwrap()
}

/// Distinct integer grid points in `[0, 6]²`, shuffled.
pub fn random_grid_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    assert!(n <= 49, "grid holds only 49 distinct points");
    let mut seen: BTreeSet<(u8, u8)> = BTreeSet::new();
    while seen.len() < n {
        seen.insert((rng.random_range(0..7), rng.random_range(0..7)));
    }
    let mut points: Vec<Vec<f64>> = seen
        .into_iter()
        .map(|(a, b)| vec![f64::from(a), f64::from(b)])
        .collect();
    points.shuffle(rng);
    points
}

pub fn random_euclidean(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
    FiniteMetricSpace::from_points(&random_grid_points(rng, n)).unwrap()
}

/// A symmetric matrix of small integer distances; the triangle inequality is
/// deliberately not enforced.
pub fn random_matrix_space(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = rng.random_range(1..=9) as f64;
            rows[i][j] = d;
            rows[j][i] = d;
        }
    }
    FiniteMetricSpace::from_matrix(&rows).unwrap()
}

/// `k` distinct indices below `n`, sorted.
pub fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(rng);
    indices.truncate(k);
    indices.sort_unstable();
    indices
}

/// One randomly drawn problem: a codomain, a domain, and a mapping between
/// them. `inclusion` marks the instances whose domain is a metric subset of
/// the codomain under the identity on indices.
pub struct Instance {
    pub x: FiniteMetricSpace,
    pub z: FiniteMetricSpace,
    pub mapping: SetMapping,
    pub inclusion: bool,
}

/// Deterministic instance stream mixing Euclidean and raw-matrix codomains
/// with subset-inclusion, injective, and non-injective mappings.
pub fn random_instances(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let z_len = rng.random_range(2..=12);
            let euclidean = i % 2 == 0;
            let z = if euclidean {
                random_euclidean(&mut rng, z_len)
            } else {
                random_matrix_space(&mut rng, z_len)
            };
            match i % 3 {
                0 => {
                    let k = rng.random_range(1..=z_len);
                    let subset = random_subset(&mut rng, z_len, k);
                    let x = z.restrict(&subset).unwrap();
                    let mapping = SetMapping::new(subset, z_len).unwrap();
                    Instance {
                        x,
                        z,
                        mapping,
                        inclusion: true,
                    }
                }
                1 => {
                    let k = rng.random_range(1..=z_len);
                    let x = if euclidean {
                        random_euclidean(&mut rng, k)
                    } else {
                        random_matrix_space(&mut rng, k)
                    };
                    let mut targets = random_subset(&mut rng, z_len, k);
                    targets.shuffle(&mut rng);
                    let mapping = SetMapping::new(targets, z_len).unwrap();
                    Instance {
                        x,
                        z,
                        mapping,
                        inclusion: false,
                    }
                }
                _ => {
                    let k = rng.random_range(1..=12);
                    let x = if euclidean {
                        random_euclidean(&mut rng, k)
                    } else {
                        random_matrix_space(&mut rng, k)
                    };
                    let targets = (0..k).map(|_| rng.random_range(0..z_len)).collect();
                    let mapping = SetMapping::new(targets, z_len).unwrap();
                    Instance {
                        x,
                        z,
                        mapping,
                        inclusion: false,
                    }
                }
            }
        })
        .collect()
}

/// One perturbation trial: a planar codomain, a copy with every point moved
/// by at most `eps`, and the subset defining the domain on both sides.
pub struct PerturbationTrial {
    pub z: FiniteMetricSpace,
    pub z_moved: FiniteMetricSpace,
    pub subset: Vec<usize>,
    pub eps: f64,
    /// Hausdorff distance of the pair (subset and ambient simultaneously)
    /// measured in the common plane; at most `eps` by construction.
    pub pair_h: f64,
}

impl PerturbationTrial {
    pub fn x(&self) -> FiniteMetricSpace {
        self.z.restrict(&self.subset).unwrap()
    }

    pub fn x_moved(&self) -> FiniteMetricSpace {
        self.z_moved.restrict(&self.subset).unwrap()
    }

    pub fn mapping(&self) -> SetMapping {
        SetMapping::new(self.subset.clone(), self.z.len()).unwrap()
    }
}

/// Continuous planar points far enough apart to survive perturbation without
/// collisions.
fn random_cloud(rng: &mut ChaCha8Rng, n: usize, spread: f64) -> Vec<Vec<f64>> {
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n);
    while points.len() < n {
        let candidate = vec![
            rng.random_range(0.0..spread),
            rng.random_range(0.0..spread),
        ];
        let far_enough = points.iter().all(|p: &Vec<f64>| {
            let dx: f64 = p[0] - candidate[0];
            let dy: f64 = p[1] - candidate[1];
            (dx * dx + dy * dy).sqrt() > 1e-6
        });
        if far_enough {
            points.push(candidate);
        }
    }
    points
}

/// A vector of norm at most `eps` (and at least a sliver, so points never
/// coincide with their originals).
fn random_shift(rng: &mut ChaCha8Rng, eps: f64) -> (f64, f64) {
    loop {
        let dx = rng.random_range(-eps..=eps);
        let dy = rng.random_range(-eps..=eps);
        let norm = (dx * dx + dy * dy).sqrt();
        if norm <= eps && norm >= eps * 1e-3 {
            return (dx, dy);
        }
    }
}

pub fn perturbation_trials(seed: u64, count: usize) -> Vec<PerturbationTrial> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=30);
            let eps = rng.random_range(0.01..=0.5);
            loop {
                let original = random_cloud(&mut rng, n, 10.0);
                let moved: Vec<Vec<f64>> = original
                    .iter()
                    .map(|p| {
                        let (dx, dy) = random_shift(&mut rng, eps);
                        vec![p[0] + dx, p[1] + dy]
                    })
                    .collect();
                let (Ok(z), Ok(z_moved)) = (
                    FiniteMetricSpace::from_points(&original),
                    FiniteMetricSpace::from_points(&moved),
                ) else {
                    continue;
                };
                let mut combined = original.clone();
                combined.extend(moved.iter().cloned());
                let Ok(common) = FiniteMetricSpace::from_points(&combined) else {
                    continue;
                };
                let k = rng.random_range(1..=n);
                let subset = random_subset(&mut rng, n, k);
                let pair_h = matchdiag::metric::pair_hausdorff(
                    &matchdiag::metric::MetricPair::new(z.clone(), subset.clone()).unwrap(),
                    &matchdiag::metric::MetricPair::new(z_moved.clone(), subset.clone()).unwrap(),
                    &common,
                    &(0..n).collect::<Vec<_>>(),
                    &(n..2 * n).collect::<Vec<_>>(),
                )
                .unwrap();
                assert!(
                    pair_h <= eps + 1e-12,
                    "per-point moves of at most {eps} produced pair Hausdorff {pair_h}"
                );
                return PerturbationTrial {
                    z,
                    z_moved,
                    subset,
                    eps,
                    pair_h,
                };
            }
        })
        .collect()
}
