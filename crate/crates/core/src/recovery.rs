//! Two-cluster recovery in the geometric block model.
//!
//! The triangle-count algorithm looks at every edge, counts the common
//! neighbors of its endpoints and deletes the edge when the count falls
//! strictly between a lower threshold `E_D` and an upper threshold `E_S`.
//! Cross-cluster edges concentrate in that band; the connected components of
//! what is left are the clusters.
//!
//! For the 1-D model with `r_s = a log n / n` and `r_d = b log n / n` the
//! thresholds come from two transcendental equations in `b`
//! ([`solve_t1`], [`solve_t2`]). [`compute_thresholds`] also solves for the
//! retained distance bands `θ₁`, `θ₂` that drive [`recovery_guaranteed`].

// NaN must fail every parameter check, hence the negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::{Deserialize, Serialize};

use crate::analysis::{edge_triangle_counts, UnionFind};
use crate::error::{domain, Error, Result};
use crate::generators::{GeometricInstance, ModelSpec};
use crate::geometry::{cap_fraction, circle_distance_raw, lens_fraction};
use crate::graph::{Graph, Partition};

const BISECTION_ITERS: usize = 200;
const ROOT_TOL: f64 = 1e-12;

/// Bisection for an increasing `f` with `f(lo) < 0 ≤ f(hi)`.
fn bisect_increasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= ROOT_TOL * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `(2b + t) ln((2b + t)/(2b)) − t − 1`, strictly increasing in `t > 0`.
pub fn t1_equation(b: f64, t: f64) -> f64 {
    let s = 2.0 * b + t;
    s * (s / (2.0 * b)).ln() - t - 1.0
}

/// `(2b − t) ln((2b − t)/(2b)) + t − 1`, strictly increasing on `(0, 2b)`.
pub fn t2_equation(b: f64, t: f64) -> f64 {
    let s = 2.0 * b - t;
    let log_term = if s > 0.0 { s * (s / (2.0 * b)).ln() } else { 0.0 };
    log_term + t - 1.0
}

/// Root of [`t1_equation`] in `(0, 10b + 20]`.
pub fn solve_t1(b: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return domain(format!("t1 needs b > 0, got {b}"));
    }
    Ok(bisect_increasing(|t| t1_equation(b, t), 0.0, 10.0 * b + 20.0))
}

/// Root of [`t2_equation`] in `(0, 2b)`; absent when `2b ≤ 1`, where the
/// equation's supremum `2b − 1` never becomes positive.
pub fn solve_t2(b: f64) -> Option<f64> {
    if !(b > 0.0) || 2.0 * b <= 1.0 {
        return None;
    }
    Some(bisect_increasing(|t| t2_equation(b, t), 0.0, 2.0 * b))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryThresholds {
    pub a: f64,
    pub b: f64,
    pub t1: f64,
    pub t2: Option<f64>,
    pub theta1: f64,
    pub theta2: f64,
    /// Upper count threshold in units of `log n` (the normalized `n E_S` of
    /// the algorithm).
    pub e_s: f64,
    /// Lower count threshold in units of `log n`; 0 when `t2` is absent.
    pub e_d: f64,
}

impl RecoveryThresholds {
    /// Integer count bounds for a graph on `n` vertices: edges with count in
    /// `(lower, upper)` are deleted.
    pub fn count_bounds(&self, n: usize) -> (u64, u64) {
        let log_n = (n as f64).ln();
        let upper = (self.e_s * log_n).ceil().max(0.0) as u64;
        let lower = (self.e_d * log_n).floor().max(0.0) as u64;
        (lower, upper)
    }

    /// `t2` is undefined (`2b ≤ 1`) so `E_D` was set to 0.
    pub fn degenerate_lower(&self) -> bool {
        self.t2.is_none()
    }
}

/// `½ (p ln(p / (2a − θ)) + 2a − θ − p)`, the exponent in the keep-edge
/// conditions, with `p = 4b + 2t₁` (upper band) or `p = 4b − 2t₂` (lower band).
fn band_exponent(p: f64, a: f64, theta: f64) -> f64 {
    let q = 2.0 * a - theta;
    0.5 * (p * (p / q).ln() + q - p)
}

pub fn compute_thresholds(a: f64, b: f64) -> Result<RecoveryThresholds> {
    if !(b > 0.0) || !(a >= 2.0 * b) || !a.is_finite() {
        return domain(format!("thresholds need a >= 2b > 0, got a={a} b={b}"));
    }
    let t1 = solve_t1(b)?;
    let t2 = solve_t2(b);

    // θ₁: largest θ in [0, 2a − 4b − 2t₁] with exponent > 1. The exponent is
    // decreasing in θ on that interval (q ≥ p there).
    let p1 = 4.0 * b + 2.0 * t1;
    let hi1 = 2.0 * a - p1;
    let cond1 = |theta: f64| band_exponent(p1, a, theta) - 1.0;
    let theta1 = if hi1 < 0.0 || cond1(0.0) <= 0.0 {
        0.0
    } else if cond1(hi1) > 0.0 {
        hi1
    } else {
        bisect_increasing(|th| -cond1(th), 0.0, hi1)
    };

    // θ₂: smallest θ in [max(2b, 2a − 4b + 2t₂), a] with exponent > 1. Here
    // q ≤ p and the exponent is increasing in θ.
    let theta2 = match t2 {
        Some(t2) => {
            let p2 = 4.0 * b - 2.0 * t2;
            let lo2 = (2.0 * b).max(2.0 * a - p2);
            let cond2 = |theta: f64| band_exponent(p2, a, theta) - 1.0;
            if lo2 > a || cond2(a) <= 0.0 {
                a
            } else if cond2(lo2) > 0.0 {
                lo2
            } else {
                bisect_increasing(cond2, lo2, a)
            }
        }
        None => a,
    };

    Ok(RecoveryThresholds {
        a,
        b,
        t1,
        t2,
        theta1,
        theta2,
        e_s: 2.0 * b + t1,
        e_d: t2.map_or(0.0, |t2| (2.0 * b - t2).max(0.0)),
    })
}

/// `a − θ₂ + θ₁ > 2` or (`a − θ₂ > 1` and `a > 2`).
pub fn recovery_guaranteed(a: f64, b: f64) -> Result<bool> {
    let th = compute_thresholds(a, b)?;
    Ok(a - th.theta2 + th.theta1 > 2.0 || (a - th.theta2 > 1.0 && a > 2.0))
}

/// Smallest `a ≥ 2b` for which [`recovery_guaranteed`] holds, to 1e-6.
pub fn min_a_for_recovery(b: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return domain(format!("min_a needs b > 0, got {b}"));
    }
    let mut lo = 2.0 * b;
    if recovery_guaranteed(lo, b)? {
        return Ok(lo);
    }
    let mut hi = lo.max(1.0) * 2.0;
    while !recovery_guaranteed(hi, b)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e9 {
            return domain(format!("no recovering a found for b={b}"));
        }
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if recovery_guaranteed(mid, b)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Same,
    Different,
}

/// Mean common-neighbor count of an edge at geodesic distance `x` in a
/// 1-D GBM with absolute radii `rs > rd` on `n` vertices.
pub fn expected_common_neighbors(x: f64, rs: f64, rd: f64, n: usize, relation: Relation) -> Result<f64> {
    if !(rd >= 0.0 && rd < rs) {
        return domain(format!("need 0 <= rd < rs, got rs={rs} rd={rd}"));
    }
    let nf = n as f64;
    match relation {
        Relation::Same => {
            if !(0.0..=rs).contains(&x) {
                return domain(format!("same-cluster edge distance {x} outside [0, rs]"));
            }
            let mut mean = (nf / 2.0 - 2.0) * (2.0 * rs - x);
            if x <= 2.0 * rd {
                mean += nf / 2.0 * (2.0 * rd - x);
            }
            Ok(mean)
        }
        Relation::Different => {
            if !(0.0..=rd).contains(&x) {
                return domain(format!("cross-cluster edge distance {x} outside [0, rd]"));
            }
            Ok(if rs > 2.0 * rd {
                (nf - 2.0) * 2.0 * rd
            } else {
                (nf - 2.0) * (rs + rd - x).min(2.0 * rd)
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryOutcome {
    pub partition: Partition,
    /// Components of the pruned (or informative) graph.
    pub component_count: usize,
    pub removed_edges: usize,
    /// The 2-partition was not forced by the data: several assignments fit
    /// it equally well.
    pub ambiguous: bool,
    pub accuracy: Option<f64>,
    pub exact: Option<bool>,
}

impl RecoveryOutcome {
    pub fn scored(mut self, truth: &Partition) -> Result<Self> {
        let (acc, exact) = evaluate_partition(&self.partition, truth)?;
        self.accuracy = Some(acc);
        self.exact = Some(exact);
        Ok(self)
    }
}

/// Best agreement over the two label matchings.
pub fn evaluate_partition(pred: &Partition, truth: &Partition) -> Result<(f64, bool)> {
    if pred.len() != truth.len() {
        return domain(format!(
            "partition lengths differ: {} vs {}",
            pred.len(),
            truth.len()
        ));
    }
    if truth.is_empty() {
        return Ok((1.0, true));
    }
    let agree = pred
        .labels()
        .iter()
        .zip(truth.labels())
        .filter(|(p, t)| p == t)
        .count();
    let best = agree.max(truth.len() - agree);
    Ok((best as f64 / truth.len() as f64, best == truth.len()))
}

/// Collapses the components of the pruned graph to two clusters.
///
/// The two largest components seed clusters 0 and 1; every other component
/// joins the cluster it shares more original edges with (ties to 0), in
/// decreasing size order.
fn components_to_partition(original: &Graph, labels: &[u32], count: usize) -> Partition {
    let n = original.n();
    if count == 0 {
        return Partition::halves(0);
    }
    let mut sizes = vec![0usize; count];
    for &l in labels {
        sizes[l as usize] += 1;
    }
    let mut order: Vec<usize> = (0..count).collect();
    // stable: equal sizes keep first-seen order
    order.sort_by(|&x, &y| sizes[y].cmp(&sizes[x]));

    let mut cluster_of = vec![u8::MAX; count];
    cluster_of[order[0]] = 0;
    if count > 1 {
        cluster_of[order[1]] = 1;
    }
    if count > 2 {
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); count];
        for v in 0..n {
            members[labels[v] as usize].push(v as u32);
        }
        for &c in &order[2..] {
            let mut votes = [0usize; 2];
            for &u in &members[c] {
                for &w in original.neighbors(u as usize) {
                    let k = cluster_of[labels[w as usize] as usize];
                    if k != u8::MAX {
                        votes[k as usize] += 1;
                    }
                }
            }
            cluster_of[c] = u8::from(votes[1] > votes[0]);
        }
    }
    Partition::new(labels.iter().map(|&l| cluster_of[l as usize]).collect())
        .expect("labels are 0 or 1")
}

/// Keeps the edges whose triangle count passes `keep` and splits the
/// surviving graph into two clusters.
pub fn prune_and_split(g: &Graph, keep: impl Fn(u32) -> bool) -> RecoveryOutcome {
    let counts = edge_triangle_counts(g);
    let mut uf = UnionFind::new(g.n());
    let mut removed = 0;
    for ((u, v), c) in counts.iter() {
        if keep(c) {
            uf.union(u as usize, v as usize);
        } else {
            removed += 1;
        }
    }
    let comps = uf.labeling();
    RecoveryOutcome {
        partition: components_to_partition(g, &comps.labels, comps.count),
        component_count: comps.count,
        removed_edges: removed,
        ambiguous: comps.count > 2,
        accuracy: None,
        exact: None,
    }
}

/// Triangle-count recovery on a 1-D GBM with scaled radii `a`, `b`.
pub fn recover_gbm_1d(g: &Graph, a: f64, b: f64) -> Result<RecoveryOutcome> {
    let th = compute_thresholds(a, b)?;
    let (lower, upper) = th.count_bounds(g.n());
    Ok(prune_and_split(g, |c| {
        let c = c as u64;
        c >= upper || c <= lower
    }))
}

/// Count thresholds `(E_S, E_D)` for `GBM_t`:
/// `E_S = c_s (B n + √(6 B n ln n))`, `E_D = c_d (n 𝒱(r_s, r_d, r_d) − √(2 B n ln n))`
/// with `B` the normalized cap of radius `r_d`.
pub fn highdim_thresholds(n: usize, t: usize, rs: f64, rd: f64, c_s: f64, c_d: f64) -> Result<(f64, f64)> {
    if !(rd > 0.0 && rd < rs && rs <= 2.0) {
        return domain(format!("need 0 < rd < rs <= 2, got rs={rs} rd={rd}"));
    }
    let nf = n as f64;
    let log_n = nf.ln().max(0.0);
    let cap = cap_fraction(t, rd)?;
    let lens = lens_fraction(t, rs, rd, rd)?;
    let e_s = c_s * (cap * nf + (6.0 * cap * nf * log_n).sqrt());
    let e_d = c_d * (nf * lens - (2.0 * nf * cap * log_n).sqrt());
    Ok((e_s, e_d))
}

/// Triangle-count recovery on `GBM_t` with absolute chord radii.
pub fn recover_gbm_highdim(
    g: &Graph,
    t: usize,
    rs: f64,
    rd: f64,
    c_s: f64,
    c_d: f64,
) -> Result<RecoveryOutcome> {
    let (e_s, e_d) = highdim_thresholds(g.n(), t, rs, rd, c_s, c_d)?;
    Ok(prune_and_split(g, |c| {
        let c = c as f64;
        c >= e_s || c <= e_d
    }))
}

/// Recovery with known locations on the 1-D GBM.
///
/// A pair at distance in `(rd, rs]` is informative: an edge means same
/// cluster, no edge means different clusters. Same-cluster pairs are merged
/// with union-find and the resulting pieces 2-colored along the
/// different-cluster constraints. Pieces not tied together by any constraint
/// are oriented so both clusters get `n/2` vertices; the outcome is marked
/// ambiguous when more than one orientation achieves the best balance.
pub fn recover_with_locations(inst: &GeometricInstance, rs: f64, rd: f64) -> Result<RecoveryOutcome> {
    let Some(pos) = inst.positions.as_circle() else {
        return Err(Error::Model("location-aware recovery needs circle positions".into()));
    };
    if !(rd >= 0.0 && rd < rs && rs <= 0.5) {
        return domain(format!("need 0 <= rd < rs <= 0.5, got rs={rs} rd={rd}"));
    }
    let g = &inst.graph;
    let n = g.n();

    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&x, &y| pos[x as usize].value().total_cmp(&pos[y as usize].value()));
    let unrolled: Vec<f64> = order
        .iter()
        .map(|&i| pos[i as usize].value())
        .chain(order.iter().map(|&i| pos[i as usize].value() + 1.0))
        .collect();

    let mut uf = UnionFind::new(n);
    let mut differ: Vec<(u32, u32)> = Vec::new();
    for k in 0..n {
        let u = order[k] as usize;
        let x = unrolled[k];
        let lap = &unrolled[k + 1..k + n];
        let start = lap.partition_point(|&y| y - x < rd - 1e-12);
        let end = lap.partition_point(|&y| y - x <= rs + 1e-12);
        for j in start..end {
            let v = order[(k + 1 + j) % n] as usize;
            let d = circle_distance_raw(pos[u].value(), pos[v].value());
            if !(d > rd && d <= rs) {
                continue;
            }
            if g.has_edge(u, v) {
                uf.union(u, v);
            } else {
                differ.push((u as u32, v as u32));
            }
        }
    }
    let comps = uf.labeling();

    let mut constraints: Vec<Vec<u32>> = vec![Vec::new(); comps.count];
    for &(u, v) in &differ {
        let (cu, cv) = (comps.labels[u as usize], comps.labels[v as usize]);
        if cu == cv {
            return Err(Error::Inconsistency(format!(
                "vertices {u} and {v} must be in the same and in different clusters"
            )));
        }
        constraints[cu as usize].push(cv);
        constraints[cv as usize].push(cu);
    }

    let mut color = vec![u8::MAX; comps.count];
    let mut piece_of = vec![0usize; comps.count];
    let mut pieces = 0;
    let mut queue = std::collections::VecDeque::new();
    for start in 0..comps.count {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        piece_of[start] = pieces;
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            for &d in &constraints[c] {
                let d = d as usize;
                if color[d] == u8::MAX {
                    color[d] = 1 - color[c];
                    piece_of[d] = pieces;
                    queue.push_back(d);
                } else if color[d] == color[c] {
                    return Err(Error::Inconsistency(
                        "different-cluster constraints form an odd cycle".into(),
                    ));
                }
            }
        }
        pieces += 1;
    }

    // Each piece can be flipped as a whole. Orient them so the clusters
    // have the model's equal sizes.
    let mut excess = vec![0i64; pieces];
    for &l in &comps.labels {
        let c = l as usize;
        excess[piece_of[c]] += if color[c] == 0 { 1 } else { -1 };
    }
    let (flips, unique) = balance_pieces(&excess);
    let partition = Partition::new(
        comps
            .labels
            .iter()
            .map(|&l| {
                let c = l as usize;
                color[c] ^ u8::from(flips[piece_of[c]])
            })
            .collect(),
    )?;
    Ok(RecoveryOutcome {
        partition,
        component_count: comps.count,
        removed_edges: 0,
        ambiguous: !unique,
        accuracy: None,
        exact: None,
    })
}

/// Largest `pieces × range` table the balancing search will build.
const BALANCE_TABLE_LIMIT: usize = 50_000_000;

/// Chooses which pieces to flip so that the signed sum of `excess` is as
/// close to zero as possible, keeping piece 0 fixed. Returns the flips and
/// whether that choice was the only optimal one.
fn balance_pieces(excess: &[i64]) -> (Vec<bool>, bool) {
    let k = excess.len();
    let span: i64 = excess.iter().map(|e| e.abs()).sum();
    let width = 2 * span as usize + 1;
    if k <= 1 {
        return (vec![false; k], true);
    }
    if k.saturating_mul(width) > BALANCE_TABLE_LIMIT {
        let mut flips = vec![false; k];
        let mut sum = excess[0];
        for i in 1..k {
            flips[i] = (sum > 0) == (excess[i] > 0) && excess[i] != 0;
            sum += if flips[i] { -excess[i] } else { excess[i] };
        }
        return (flips, false);
    }
    // ways[i][s]: number of sign choices for pieces 0..=i reaching sum s,
    // saturated at 2.
    let idx = |s: i64| (s + span) as usize;
    let mut ways = vec![vec![0u8; width]; k];
    ways[0][idx(excess[0])] = 1;
    for i in 1..k {
        let (done, rest) = ways.split_at_mut(i);
        let (prev, cur) = (&done[i - 1], &mut rest[0]);
        for s in -span..=span {
            let w = prev[idx(s)];
            if w == 0 {
                continue;
            }
            for t in [s + excess[i], s - excess[i]] {
                let c = &mut cur[idx(t)];
                *c = (*c + w).min(2);
            }
        }
    }
    let last = &ways[k - 1];
    let best = (0..=span)
        .find(|&d| last[idx(d)] > 0 || last[idx(-d)] > 0)
        .expect("some sum is reachable");
    let mut target = if last[idx(best)] > 0 { best } else { -best };
    let optimal = u32::from(last[idx(best)]) + if best == 0 { 0 } else { u32::from(last[idx(-best)]) };
    let mut flips = vec![false; k];
    for i in (1..k).rev() {
        let keep = target - excess[i];
        if (-span..=span).contains(&keep) && ways[i - 1][idx(keep)] > 0 {
            target = keep;
        } else {
            flips[i] = true;
            target += excess[i];
        }
    }
    (flips, optimal == 1)
}

/// Location-aware recovery using the instance's own radii, scored against
/// its truth when present.
pub fn recover_instance_with_locations(inst: &GeometricInstance) -> Result<RecoveryOutcome> {
    let ModelSpec::Gbm { rs, rd } = inst.spec else {
        return Err(Error::Model(format!(
            "location-aware recovery needs a gbm instance, got {}",
            inst.model().name()
        )));
    };
    let out = recover_with_locations(inst, rs, rd)?;
    match &inst.truth {
        Some(truth) => out.scored(truth),
        None => Ok(out),
    }
}

/// Triangle-count recovery using the instance's own radii, scored against
/// its truth when present. Defaults `c_s = c_d = 1` in high dimension.
pub fn recover_instance(inst: &GeometricInstance, c_s: f64, c_d: f64) -> Result<RecoveryOutcome> {
    let n = inst.n();
    let out = match inst.spec {
        ModelSpec::Gbm { rs, rd } => {
            let unit = crate::generators::connectivity_scale(n, 1);
            if unit == 0.0 {
                return domain("recovery needs n >= 2");
            }
            recover_gbm_1d(&inst.graph, rs / unit, rd / unit)?
        }
        ModelSpec::Gbmt { t, rs, rd } => recover_gbm_highdim(&inst.graph, t, rs, rd, c_s, c_d)?,
        _ => {
            return Err(Error::Model(format!(
                "triangle recovery needs a gbm or gbmt instance, got {}",
                inst.model().name()
            )))
        }
    };
    match &inst.truth {
        Some(truth) => out.scored(truth),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build, Positions};
    use crate::geometry::CircPosition;

    #[test]
    fn t1_examples() {
        let t = solve_t1(1.0).unwrap();
        assert!(t1_equation(1.0, 2.3) < 0.0 && t1_equation(1.0, 2.4) > 0.0);
        assert!((t - 2.31).abs() < 0.005, "{t}");
        let t = solve_t1(0.01).unwrap();
        assert!(t1_equation(0.01, 0.43) < 0.0 && t1_equation(0.01, 0.45) > 0.0);
        assert!((t - 0.44).abs() < 0.005, "{t}");
        assert!(solve_t1(0.0).is_err());
        assert!(solve_t1(-1.0).is_err());
    }

    #[test]
    fn t2_examples() {
        let t = solve_t2(1.0).unwrap();
        assert!(t2_equation(1.0, 1.6) < 0.0 && t2_equation(1.0, 1.65) > 0.0);
        assert!((t - 1.62).abs() < 0.01, "{t}");
        assert_eq!(solve_t2(0.4), None);
        assert_eq!(solve_t2(0.5), None);
    }

    #[test]
    fn root_residuals_on_log_grid() {
        for i in 0..=40 {
            let b = 0.01 * 5000f64.powf(i as f64 / 40.0);
            let t1 = solve_t1(b).unwrap();
            assert!(t1_equation(b, t1).abs() < 1e-8, "b={b}");
            if let Some(t2) = solve_t2(b) {
                assert!(t2_equation(b, t2).abs() < 1e-8, "b={b}");
            }
        }
    }

    #[test]
    fn threshold_examples() {
        let th = compute_thresholds(8.96, 1.0).unwrap();
        let t2 = th.t2.unwrap();
        assert!(2.0 * 8.96 - 4.0 + 2.0 * t2 > 8.96);
        assert_eq!(th.theta2, 8.96);
        assert!((th.theta1 - 2.0).abs() < 0.05, "{}", th.theta1);

        let th = compute_thresholds(3.18, 0.01).unwrap();
        assert!(th.t2.is_none() && th.degenerate_lower());
        assert_eq!(th.theta2, 3.18);
        assert_eq!(th.e_d, 0.0);
        assert!((th.theta1 - 2.0).abs() < 0.05, "{}", th.theta1);

        assert!(compute_thresholds(1.0, 1.0).is_err());
    }

    #[test]
    fn e_s_exceeds_e_d() {
        for &b in &[0.01, 0.3, 0.6, 1.0, 3.0, 7.0, 20.0] {
            for k in 0..10 {
                let a = 2.0 * b + k as f64;
                let th = compute_thresholds(a, b).unwrap();
                assert!(th.e_s > th.e_d);
                assert!(th.t1 > 0.0);
                assert!(th.theta1 >= 0.0 && th.theta2 <= a);
            }
        }
    }

    #[test]
    fn guarantee_examples() {
        assert!(recovery_guaranteed(9.0, 1.0).unwrap());
        assert!(!recovery_guaranteed(8.5, 1.0).unwrap());
        assert!(recovery_guaranteed(3.2, 0.01).unwrap());
    }

    #[test]
    fn min_a_examples() {
        assert!((min_a_for_recovery(1.0).unwrap() - 8.96).abs() <= 0.05);
        assert!((min_a_for_recovery(4.0).unwrap() - 18.98).abs() <= 0.05);
        assert!((min_a_for_recovery(0.01).unwrap() - 3.18).abs() <= 0.05);
    }

    #[test]
    fn expected_common_neighbor_examples() {
        let (rs, rd, n) = (0.05, 0.01, 1000);
        let v = expected_common_neighbors(rs, rs, rd, n, Relation::Same).unwrap();
        assert!((v - (500.0 - 2.0) * rs).abs() < 1e-12);
        for &x in &[0.0, 0.004, 0.01] {
            let v = expected_common_neighbors(x, rs, rd, n, Relation::Different).unwrap();
            assert!((v - 998.0 * 2.0 * rd).abs() < 1e-12);
        }
        let (rs, rd) = (0.015, 0.01);
        let v = expected_common_neighbors(0.0, rs, rd, n, Relation::Same).unwrap();
        assert!((v - (498.0 * 2.0 * rs + 500.0 * 2.0 * rd)).abs() < 1e-12);
        let v = expected_common_neighbors(0.008, rs, rd, n, Relation::Different).unwrap();
        assert!((v - 998.0 * 0.017).abs() < 1e-12);
        assert!(expected_common_neighbors(0.02, 0.015, 0.01, n, Relation::Different).is_err());
        assert!(expected_common_neighbors(0.1, 0.015, 0.01, n, Relation::Same).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let truth = Partition::halves(6);
        assert_eq!(evaluate_partition(&truth, &truth).unwrap(), (1.0, true));
        assert_eq!(evaluate_partition(&truth.flipped(), &truth).unwrap(), (1.0, true));
        let zeros = Partition::new(vec![0; 6]).unwrap();
        assert_eq!(evaluate_partition(&zeros, &truth).unwrap(), (0.5, false));
        assert!(evaluate_partition(&Partition::halves(4), &truth).is_err());
    }

    fn clique_edges(vs: &[u32]) -> Vec<(u32, u32)> {
        let mut e = Vec::new();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                e.push((u, v));
            }
        }
        e
    }

    #[test]
    fn separated_cliques_recover_exactly() {
        // Two K_60 with no edges between them: every count is 58.
        let n = 120;
        let left: Vec<u32> = (0..60).collect();
        let right: Vec<u32> = (60..120).collect();
        let mut edges = clique_edges(&left);
        edges.extend(clique_edges(&right));
        let g = Graph::from_edges(n, &edges).unwrap();
        let th = compute_thresholds(4.0, 1.0).unwrap();
        let (_, upper) = th.count_bounds(n);
        assert!(upper <= 58);
        let out = recover_gbm_1d(&g, 4.0, 1.0).unwrap().scored(&Partition::halves(n)).unwrap();
        assert_eq!(out.removed_edges, 0);
        assert_eq!(out.component_count, 2);
        assert_eq!(out.exact, Some(true));
    }

    #[test]
    fn highdim_removes_middle_band() {
        // Two cliques plus a bridge with zero common neighbors. E_D is
        // negative at this size, so the bridge lands in the deletion band.
        let n = 80;
        let left: Vec<u32> = (0..40).collect();
        let right: Vec<u32> = (40..80).collect();
        let mut edges = clique_edges(&left);
        edges.extend(clique_edges(&right));
        edges.push((0, 40));
        let g = Graph::from_edges(n, &edges).unwrap();
        let (e_s, e_d) = highdim_thresholds(n, 2, 0.4, 0.3, 1.0, 1.0).unwrap();
        assert!(e_d < 0.0 && e_s < 38.0);
        let out = recover_gbm_highdim(&g, 2, 0.4, 0.3, 1.0, 1.0).unwrap();
        assert_eq!(out.removed_edges, 1);
        let (_, exact) = evaluate_partition(&out.partition, &Partition::halves(n)).unwrap();
        assert!(exact);
    }

    #[test]
    fn highdim_threshold_formula() {
        let (n, t, rs, rd) = (10_000usize, 2usize, 0.08, 0.05);
        let (e_s, e_d) = highdim_thresholds(n, t, rs, rd, 1.0, 1.0).unwrap();
        let nf = n as f64;
        let cap = rd * rd / 4.0; // Archimedes on S^2
        let want_s = cap * nf + (6.0 * cap * nf * nf.ln()).sqrt();
        assert!((e_s - want_s).abs() < 1e-9);
        let lens = lens_fraction(t, rs, rd, rd).unwrap();
        let want_d = nf * lens - (2.0 * nf * cap * nf.ln()).sqrt();
        assert!((e_d - want_d).abs() < 1e-9);
    }

    fn circle(xs: &[f64]) -> Positions {
        Positions::Circle(xs.iter().map(|&x| CircPosition::new(x).unwrap()).collect())
    }

    #[test]
    fn locations_two_vertices() {
        // different clusters at distance in (rd, rs]: no edge, so must differ
        let inst = build(ModelSpec::Gbm { rs: 0.2, rd: 0.05 }, circle(&[0.1, 0.2]), 0).unwrap();
        let out = recover_instance_with_locations(&inst).unwrap();
        assert_eq!(out.exact, Some(true));
        assert!(!out.ambiguous);
    }

    #[test]
    fn locations_ambiguous_pieces() {
        // Three far-apart groups; no informative pair links them. Vertices
        // 2 and 3 straddle the cluster split, so their group holds two
        // components tied by a must-differ constraint.
        let xs = [0.0, 0.01, 0.3, 0.31, 0.6, 0.61];
        let inst = build(ModelSpec::Gbm { rs: 0.05, rd: 0.001 }, circle(&xs), 0).unwrap();
        let out = recover_instance_with_locations(&inst).unwrap();
        assert!(out.ambiguous);
        assert_eq!(out.component_count, 4);
        assert_ne!(out.partition.label(2), out.partition.label(3));
    }

    #[test]
    fn locations_balance_places_loose_vertex() {
        // Vertex 3 has no informative pair; equal cluster sizes force it
        // into cluster 1.
        let xs = [0.0, 0.1, 0.2, 0.9];
        let inst = build(ModelSpec::Gbm { rs: 0.15, rd: 0.05 }, circle(&xs), 0).unwrap();
        let out = recover_instance_with_locations(&inst).unwrap();
        assert_eq!(out.exact, Some(true));
        assert!(!out.ambiguous);
    }

    #[test]
    fn balance_search() {
        assert_eq!(balance_pieces(&[3, 1, 2]), (vec![false, true, true], true));
        assert_eq!(balance_pieces(&[4, 1]), (vec![false, true], true));
        assert!(!balance_pieces(&[2, 0, 2]).1);
        assert!(!balance_pieces(&[2, 2, 1, 1]).1);
        assert_eq!(balance_pieces(&[5]), (vec![false], true));
        let (flips, _) = balance_pieces(&[2, 2, 1, 1]);
        let sum: i64 = [2, 2, 1, 1].iter().zip(&flips).map(|(e, &f)| if f { -e } else { *e }).sum();
        assert_eq!(sum, 0);
    }

    #[test]
    fn locations_inconsistent_input() {
        // Deleting the same-cluster edge (0, 1) leaves three pairwise
        // must-differ constraints among vertices 0, 1, 2: an odd cycle.
        let spec = ModelSpec::Gbm { rs: 0.2, rd: 0.01 };
        let mut inst = build(spec, circle(&[0.1, 0.2, 0.15, 0.9]), 0).unwrap();
        let edges: Vec<_> = inst.graph.edges().filter(|&e| e != (0, 1)).collect();
        inst.graph = Graph::from_edges(4, &edges).unwrap();
        assert!(matches!(
            recover_instance_with_locations(&inst),
            Err(Error::Inconsistency(_))
        ));
    }
}
