//! ε-matchings between matching diagrams and the bottleneck distance
//! between barcodes.
//!
//! Both problems reduce to the same question: given two point multisets and
//! a threshold, is there a perfect assignment in which every point is either
//! matched to a close point on the other side or individually cheap enough
//! to discard? Feasibility is decided by maximum bipartite matching on an
//! augmented graph (each side gets one discard slot per opposite point, and
//! unused slots absorb each other), and the minimal threshold is found by
//! binary search over the finitely many values where any single condition
//! can flip.

use crate::blockfn::{Endpoint, MatchingDiagram};
use crate::error::{Error, Result};
use crate::filtration::{Barcode, IntervalBarcode};
use std::collections::VecDeque;

/// Maximum bipartite matching (Hopcroft–Karp). `adj[l]` lists the right
/// neighbors of left vertex `l`; returns the matched right vertex per left
/// vertex, `usize::MAX` when unmatched.
fn hopcroft_karp(adj: &[Vec<usize>], right_count: usize) -> Vec<usize> {
    const FREE: usize = usize::MAX;
    let n = adj.len();
    let mut match_left = vec![FREE; n];
    let mut match_right = vec![FREE; right_count];

    fn augment(
        l: usize,
        adj: &[Vec<usize>],
        dist: &mut [usize],
        match_left: &mut [usize],
        match_right: &mut [usize],
    ) -> bool {
        for &r in &adj[l] {
            let partner = match_right[r];
            if partner == FREE
                || (dist[partner] == dist[l] + 1
                    && augment(partner, adj, dist, match_left, match_right))
            {
                match_left[l] = r;
                match_right[r] = l;
                return true;
            }
        }
        // Dead end: prune this vertex for the rest of the phase.
        dist[l] = FREE;
        false
    }

    loop {
        // One BFS phase layers the graph from every free left vertex.
        let mut dist = vec![FREE; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for l in 0..n {
            if match_left[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            }
        }
        let mut reachable_free_right = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let partner = match_right[r];
                if partner == FREE {
                    reachable_free_right = true;
                } else if dist[partner] == FREE {
                    dist[partner] = dist[l] + 1;
                    queue.push_back(partner);
                }
            }
        }
        if !reachable_free_right {
            return match_left;
        }
        for l in 0..n {
            if match_left[l] == FREE {
                augment(l, adj, &mut dist, &mut match_left, &mut match_right);
            }
        }
    }
}

/// One diagram point with its multiplicity flattened away.
pub type DiagramPoint = (Endpoint, f64);

fn expand(diagram: &MatchingDiagram) -> Vec<DiagramPoint> {
    let mut out = Vec::with_capacity(diagram.total_multiplicity());
    for &(a, b, mult) in diagram.points() {
        for _ in 0..mult {
            out.push((a, b));
        }
    }
    out
}

fn points_match(p: DiagramPoint, q: DiagramPoint, delta: f64) -> bool {
    let first = match (p.0, q.0) {
        (Endpoint::Infinity, Endpoint::Infinity) => true,
        (Endpoint::Finite(a), Endpoint::Finite(a2)) => (a - a2).abs() <= delta,
        _ => false,
    };
    first && (p.1 - q.1).abs() <= delta
}

fn point_discardable(p: DiagramPoint, delta: f64) -> bool {
    let first = match p.0 {
        Endpoint::Infinity => true,
        Endpoint::Finite(a) => a <= delta,
    };
    first && p.1 <= delta
}

/// A witness that two diagrams are within `delta` of each other: matched
/// pairs move at most `delta` per coordinate (infinities only onto
/// infinities), everything else is individually discardable at `delta`.
#[derive(Debug, Clone)]
pub struct DeltaMatching {
    delta: f64,
    pairs: Vec<(DiagramPoint, DiagramPoint)>,
    unmatched_left: Vec<DiagramPoint>,
    unmatched_right: Vec<DiagramPoint>,
}

impl DeltaMatching {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn pairs(&self) -> &[(DiagramPoint, DiagramPoint)] {
        &self.pairs
    }

    pub fn unmatched_left(&self) -> &[DiagramPoint] {
        &self.unmatched_left
    }

    pub fn unmatched_right(&self) -> &[DiagramPoint] {
        &self.unmatched_right
    }

    /// Re-checks every condition the witness claims to satisfy.
    pub fn validate(&self) -> Result<()> {
        for &(p, q) in &self.pairs {
            if !points_match(p, q, self.delta) {
                return Err(Error::NotAMatching(format!(
                    "pair ({}, {}) -> ({}, {}) moves further than {}",
                    p.0, p.1, q.0, q.1, self.delta
                )));
            }
        }
        for &p in self.unmatched_left.iter().chain(&self.unmatched_right) {
            if !point_discardable(p, self.delta) {
                return Err(Error::NotAMatching(format!(
                    "unmatched point ({}, {}) is not discardable at {}",
                    p.0, p.1, self.delta
                )));
            }
        }
        Ok(())
    }
}

/// Decides whether the two diagrams admit a matching at the given threshold,
/// returning a witness when they do.
///
/// Left points face the right points plus one discard slot each; a slot is
/// reachable only when its owner satisfies the discard condition, and spare
/// slots on the two sides absorb each other. The diagrams are `delta`-close
/// exactly when the augmented graph has a perfect matching.
pub fn delta_matching_feasible(
    d1: &MatchingDiagram,
    d2: &MatchingDiagram,
    delta: f64,
) -> Result<Option<DeltaMatching>> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::NegativeDelta(delta));
    }
    let left = expand(d1);
    let right = expand(d2);
    let (nl, nr) = (left.len(), right.len());

    // Left side of the bipartite graph: real left points, then one slot per
    // right point. Right side: real right points, then one slot per left
    // point.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nl + nr];
    for (l, &p) in left.iter().enumerate() {
        for (r, &q) in right.iter().enumerate() {
            if points_match(p, q, delta) {
                adj[l].push(r);
            }
        }
        if point_discardable(p, delta) {
            adj[l].push(nr + l);
        }
    }
    for (r, &q) in right.iter().enumerate() {
        if point_discardable(q, delta) {
            adj[nl + r].push(r);
        }
        for l in 0..nl {
            adj[nl + r].push(nr + l);
        }
    }

    let match_left = hopcroft_karp(&adj, nr + nl);
    if match_left.iter().any(|&r| r == usize::MAX) {
        return Ok(None);
    }

    let mut pairs = Vec::new();
    let mut unmatched_left = Vec::new();
    let mut matched_right = vec![false; nr];
    for (l, &p) in left.iter().enumerate() {
        let r = match_left[l];
        if r < nr {
            pairs.push((p, right[r]));
            matched_right[r] = true;
        } else {
            unmatched_left.push(p);
        }
    }
    let unmatched_right = right
        .iter()
        .enumerate()
        .filter(|(r, _)| !matched_right[*r])
        .map(|(_, &q)| q)
        .collect();
    Ok(Some(DeltaMatching {
        delta,
        pairs,
        unmatched_left,
        unmatched_right,
    }))
}

/// Every threshold at which some matching or discard condition can flip:
/// the coordinates themselves and the cross-diagram coordinate differences.
fn diagram_candidates(d1: &MatchingDiagram, d2: &MatchingDiagram) -> Vec<f64> {
    let mut out = vec![0.0];
    let coords = |d: &MatchingDiagram| -> (Vec<f64>, Vec<f64>) {
        let mut first = Vec::new();
        let mut second = Vec::new();
        for &(a, b, _) in d.points() {
            if let Endpoint::Finite(v) = a {
                first.push(v);
            }
            second.push(b);
        }
        (first, second)
    };
    let (a1, b1) = coords(d1);
    let (a2, b2) = coords(d2);
    out.extend(a1.iter().chain(&a2).chain(&b1).chain(&b2));
    for &x in &a1 {
        for &y in &a2 {
            out.push((x - y).abs());
        }
    }
    for &x in &b1 {
        for &y in &b2 {
            out.push((x - y).abs());
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// The smallest threshold at which the two diagrams match, with a witness.
///
/// Feasibility is monotone in the threshold and can only change at a
/// candidate value, so a binary search over the candidates finds the
/// attained minimum. Discarding everything is feasible at the largest
/// coordinate, so a witness always exists.
pub fn min_delta_matching(d1: &MatchingDiagram, d2: &MatchingDiagram) -> DeltaMatching {
    let candidates = diagram_candidates(d1, d2);
    let feasible = |delta: f64| {
        delta_matching_feasible(d1, d2, delta).expect("candidate thresholds are nonnegative")
    };
    let mut lo = 0;
    let mut hi = candidates.len() - 1;
    if let Some(witness) = feasible(candidates[0]) {
        return witness;
    }
    // Invariant: candidates[lo] infeasible, candidates[hi] feasible.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if feasible(candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    feasible(candidates[hi]).expect("discarding everything is feasible at the largest coordinate")
}

/// A barcode seen as a list of `(birth, death)` bars, death possibly
/// infinite. Both barcode flavors convert into it.
#[derive(Debug, Clone, Copy)]
pub enum BarcodeRef<'a> {
    Deaths(&'a Barcode),
    Intervals(&'a IntervalBarcode),
}

impl<'a> From<&'a Barcode> for BarcodeRef<'a> {
    fn from(b: &'a Barcode) -> Self {
        BarcodeRef::Deaths(b)
    }
}

impl<'a> From<&'a IntervalBarcode> for BarcodeRef<'a> {
    fn from(b: &'a IntervalBarcode) -> Self {
        BarcodeRef::Intervals(b)
    }
}

impl BarcodeRef<'_> {
    /// Finite bars as `(birth, death)` pairs, multiplicity expanded.
    fn finite_bars(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        match self {
            BarcodeRef::Deaths(b) => {
                for &(death, mult) in b.deaths() {
                    for _ in 0..mult {
                        out.push((0.0, death));
                    }
                }
            }
            BarcodeRef::Intervals(b) => {
                for &(birth, death, mult) in b.intervals() {
                    for _ in 0..mult {
                        out.push((birth, death));
                    }
                }
            }
        }
        out
    }

    /// Births of the infinite bars.
    fn infinite_births(&self) -> Vec<f64> {
        match self {
            BarcodeRef::Deaths(b) => vec![0.0; b.infinite_bars()],
            BarcodeRef::Intervals(_) => Vec::new(),
        }
    }
}

fn bars_match(p: (f64, f64), q: (f64, f64), eps: f64) -> bool {
    (p.0 - q.0).abs() <= eps && (p.1 - q.1).abs() <= eps
}

fn bar_discardable(p: (f64, f64), eps: f64) -> bool {
    (p.1 - p.0) / 2.0 <= eps
}

fn bottleneck_feasible(left: &[(f64, f64)], right: &[(f64, f64)], eps: f64) -> bool {
    let (nl, nr) = (left.len(), right.len());
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nl + nr];
    for (l, &p) in left.iter().enumerate() {
        for (r, &q) in right.iter().enumerate() {
            if bars_match(p, q, eps) {
                adj[l].push(r);
            }
        }
        if bar_discardable(p, eps) {
            adj[l].push(nr + l);
        }
    }
    for (r, &q) in right.iter().enumerate() {
        if bar_discardable(q, eps) {
            adj[nl + r].push(r);
        }
        for l in 0..nl {
            adj[nl + r].push(nr + l);
        }
    }
    hopcroft_karp(&adj, nr + nl)
        .iter()
        .all(|&r| r != usize::MAX)
}

/// The bottleneck distance between two barcodes: the smallest `ε` admitting
/// a matching in which paired bars differ by at most `ε` per endpoint and
/// every unpaired bar has half-length at most `ε`.
///
/// Infinite bars must pair among themselves; when the two counts differ no
/// threshold works and the distance is infinite. Otherwise sorted pairing of
/// their births is optimal, and the finite bars are decided by the same
/// candidate binary search as the diagram matching.
pub fn barcode_bottleneck<'a, 'b>(
    left: impl Into<BarcodeRef<'a>>,
    right: impl Into<BarcodeRef<'b>>,
) -> f64 {
    let left = left.into();
    let right = right.into();
    let mut left_inf = left.infinite_births();
    let mut right_inf = right.infinite_births();
    if left_inf.len() != right_inf.len() {
        return f64::INFINITY;
    }
    left_inf.sort_by(f64::total_cmp);
    right_inf.sort_by(f64::total_cmp);
    let infinite_floor = left_inf
        .iter()
        .zip(&right_inf)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let left_bars = left.finite_bars();
    let right_bars = right.finite_bars();
    let mut candidates = vec![infinite_floor];
    for &(birth, death) in left_bars.iter().chain(&right_bars) {
        candidates.push((death - birth) / 2.0);
    }
    for &p in &left_bars {
        for &q in &right_bars {
            candidates.push((p.0 - q.0).abs());
            candidates.push((p.1 - q.1).abs());
        }
    }
    candidates.retain(|&c| c >= infinite_floor);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let feasible = |eps: f64| bottleneck_feasible(&left_bars, &right_bars, eps);
    let mut lo = 0;
    let mut hi = candidates.len() - 1;
    if feasible(candidates[0]) {
        return candidates[0];
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    debug_assert!(feasible(candidates[hi]));
    candidates[hi]
}
