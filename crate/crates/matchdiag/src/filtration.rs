//! Sublevel connectivity of a finite metric space: partitions into
//! components at a threshold, minimum-spanning-tree edges, and the barcode
//! they induce.
//!
//! Every finite death value of the degree-zero barcode is the weight of one
//! minimum-spanning-tree edge, so Kruskal's algorithm is the whole story
//! here. Edge-weight ties are broken by the lexicographic order of the index
//! pair, which keeps partitions and spanning trees reproducible.

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;

/// Union-find over `0..n` with union by rank and path halving.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            components: n,
        }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] as usize != i {
            let grandparent = self.parent[self.parent[i] as usize];
            self.parent[i] = grandparent;
            i = grandparent as usize;
        }
        i
    }

    /// Merges the components of `i` and `j`; true if they were distinct.
    pub fn union(&mut self, i: usize, j: usize) -> bool {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri == rj {
            return false;
        }
        let (hi, lo) = if self.rank[ri] >= self.rank[rj] {
            (ri, rj)
        } else {
            (rj, ri)
        };
        self.parent[lo] = hi as u32;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Flattens into a [`Partition`] with canonical smallest-index labels.
    pub fn partition(&mut self) -> Partition {
        let n = self.parent.len();
        let mut smallest = vec![usize::MAX; n];
        for i in 0..n {
            let r = self.find(i);
            if smallest[r] == usize::MAX {
                smallest[r] = i;
            }
        }
        let labels = (0..n).map(|i| smallest[self.find(i)]).collect();
        Partition { labels }
    }
}

/// A partition of `{0, …, n−1}`. Every index maps to the smallest index in
/// its block, so labels are canonical and lookups are idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    /// Wraps a label vector, normalizing labels to the smallest member of
    /// each block. Labels must point inside the partition.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        for (i, &l) in labels.iter().enumerate() {
            if l >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
        }
        let mut uf = UnionFind::new(n);
        for (i, &l) in labels.iter().enumerate() {
            uf.union(i, l);
        }
        Ok(uf.partition())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The smallest index in the block of `i`.
    pub fn rep(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    /// Number of blocks.
    pub fn blocks(&self) -> usize {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(i, &l)| i == l)
            .count()
    }
}

/// One edge of the minimum spanning tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MstEdge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Minimum-spanning-tree edges of the complete distance graph, in the order
/// Kruskal selects them (nondecreasing weight, ties by index pair).
pub fn mst_edges(space: &FiniteMetricSpace) -> Vec<MstEdge> {
    let n = space.len();
    let mut edges: Vec<(f64, u32, u32)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((space.dist(i, j), i as u32, j as u32));
        }
    }
    edges.sort_unstable_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| a.1.cmp(&b.1))
            .then_with(|| a.2.cmp(&b.2))
    });
    let mut uf = UnionFind::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for (weight, i, j) in edges {
        if uf.union(i as usize, j as usize) {
            tree.push(MstEdge {
                i: i as usize,
                j: j as usize,
                weight,
            });
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    tree
}

/// A degree-zero barcode: a multiset of finite death values plus a count of
/// bars that never die. Deaths are kept sorted with exact-value grouping.
#[derive(Debug, Clone, PartialEq)]
pub struct Barcode {
    deaths: Vec<(f64, usize)>,
    infinite_bars: usize,
}

impl Barcode {
    /// Groups a list of death values into a barcode.
    pub fn from_death_values(mut values: Vec<f64>, infinite_bars: usize) -> Self {
        values.sort_unstable_by(f64::total_cmp);
        let mut deaths: Vec<(f64, usize)> = Vec::new();
        for v in values {
            match deaths.last_mut() {
                Some((d, m)) if *d == v => *m += 1,
                _ => deaths.push((v, 1)),
            }
        }
        Self {
            deaths,
            infinite_bars,
        }
    }

    /// Wraps pre-grouped deaths; values must be finite, positive, strictly
    /// increasing, with multiplicities at least one.
    pub fn new(deaths: Vec<(f64, usize)>, infinite_bars: usize) -> Result<Self> {
        for (k, &(d, m)) in deaths.iter().enumerate() {
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::InconsistentParts(format!(
                    "death value {d} is not a positive finite number"
                )));
            }
            if m == 0 {
                return Err(Error::InconsistentParts(format!(
                    "death value {d} has multiplicity zero"
                )));
            }
            if k > 0 && deaths[k - 1].0 >= d {
                return Err(Error::InconsistentParts(
                    "death values must be strictly increasing".into(),
                ));
            }
        }
        Ok(Self {
            deaths,
            infinite_bars,
        })
    }

    pub fn deaths(&self) -> &[(f64, usize)] {
        &self.deaths
    }

    pub fn infinite_bars(&self) -> usize {
        self.infinite_bars
    }

    /// The distinct death values, increasing.
    pub fn support(&self) -> Vec<f64> {
        self.deaths.iter().map(|&(d, _)| d).collect()
    }

    pub fn multiplicity(&self, death: f64) -> usize {
        self.deaths
            .binary_search_by(|(d, _)| d.total_cmp(&death))
            .map(|k| self.deaths[k].1)
            .unwrap_or(0)
    }

    /// Total number of finite bars.
    pub fn total_finite(&self) -> usize {
        self.deaths.iter().map(|&(_, m)| m).sum()
    }
}

/// A barcode of half-open intervals `[birth, death)` with multiplicities,
/// kept sorted by (birth, death).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalBarcode {
    intervals: Vec<(f64, f64, usize)>,
}

impl IntervalBarcode {
    /// Groups raw (birth, death, multiplicity) triples. Intervals must be
    /// nonempty: finite endpoints with `birth < death` and `birth ≥ 0`.
    pub fn from_intervals(raw: Vec<(f64, f64, usize)>) -> Result<Self> {
        for &(b, d, _) in &raw {
            if !b.is_finite() || !d.is_finite() || b < 0.0 || b >= d {
                return Err(Error::InconsistentParts(format!(
                    "[{b}, {d}) is not a nonempty interval"
                )));
            }
        }
        let mut sorted = raw;
        sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut intervals: Vec<(f64, f64, usize)> = Vec::new();
        for (b, d, m) in sorted {
            if m == 0 {
                continue;
            }
            match intervals.last_mut() {
                Some((pb, pd, pm)) if *pb == b && *pd == d => *pm += m,
                _ => intervals.push((b, d, m)),
            }
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[(f64, f64, usize)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total number of intervals, counted with multiplicity.
    pub fn total(&self) -> usize {
        self.intervals.iter().map(|&(_, _, m)| m).sum()
    }

    pub fn multiplicity(&self, birth: f64, death: f64) -> usize {
        self.intervals
            .iter()
            .find(|&&(b, d, _)| b == birth && d == death)
            .map(|&(_, _, m)| m)
            .unwrap_or(0)
    }
}

/// The degree-zero barcode of the threshold filtration: one finite bar per
/// minimum-spanning-tree edge, dying at the edge weight, plus one infinite
/// bar for the surviving component.
pub fn barcode0(space: &FiniteMetricSpace) -> Barcode {
    let weights = mst_edges(space).iter().map(|e| e.weight).collect();
    Barcode::from_death_values(weights, 1)
}

/// Components of the graph with an edge for every pair at distance `≤ r`
/// (or `< r` when `strict`).
pub fn components_at(space: &FiniteMetricSpace, r: f64, strict: bool) -> Partition {
    let n = space.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = space.dist(i, j);
            if (strict && d < r) || (!strict && d <= r) {
                uf.union(i, j);
            }
        }
    }
    uf.partition()
}

/// The strictly increasing list of distinct spanning-tree weights — the
/// thresholds where component counts change.
pub fn critical_values(space: &FiniteMetricSpace) -> Vec<f64> {
    let mut values: Vec<f64> = mst_edges(space).iter().map(|e| e.weight).collect();
    values.sort_unstable_by(f64::total_cmp);
    values.dedup();
    values
}
