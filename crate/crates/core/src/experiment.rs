//! Seeded Monte-Carlo sweeps over parameter grids.
//!
//! A trial is identified by its grid point and index. Its seed is
//!
//! ```text
//! seed_used = derive_seed(master_seed, [model, n, t, bits(a), bits(b), bits(c), trial_index])
//! ```
//!
//! where `model` is 0..=4 in the order vrg, rag, gbm, gbmt, vrg_union, `bits`
//! is the IEEE-754 bit pattern and `bits(c)` is 0 when the model has no `c`.
//! [`run_trial`] with that seed replays the trial in isolation.
//!
//! Grid points are ordered `n`, `t`, `a`, `b`, `c` (last varies fastest), and
//! trials within a point by index. Output order does not depend on the
//! number of worker threads.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{connected_components, count_isolated, count_no_left_neighbor};
use crate::error::{domain, Result};
use crate::generators::{connectivity_scale, generate, Model, ModelSpec};
use crate::recovery::{recover_instance, recover_instance_with_locations};
use crate::rng::derive_seed;

pub const TRIALS_SCHEMA: &str = "# annulus-sweep-trials v1";
pub const SUMMARY_SCHEMA: &str = "# annulus-sweep-summary v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Connectivity,
    IsolatedCount,
    Recovery,
    NoLeftNeighbor,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryMode {
    #[default]
    Triangle,
    WithLocations,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    #[serde(default = "default_t")]
    pub t: Vec<usize>,
    pub n: Vec<usize>,
    /// Inner radius constants, only for `vrg_union`.
    #[serde(default)]
    pub c: Vec<f64>,
}

fn default_t() -> Vec<usize> {
    vec![1]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: Model,
    pub grid: Grid,
    pub trials: usize,
    pub master_seed: u64,
    pub measure: Measure,
    #[serde(default)]
    pub recovery: RecoveryMode,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub n: usize,
    pub t: usize,
    pub a: f64,
    pub b: f64,
    pub c: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub model: Model,
    pub point: GridPoint,
    pub trial_index: usize,
    pub seed_used: u64,
    pub edges: usize,
    pub connected: bool,
    pub components: usize,
    pub isolated: usize,
    pub no_left_neighbor: Option<usize>,
    pub accuracy: Option<f64>,
    pub exact: Option<bool>,
    pub removed_edges: Option<usize>,
    pub wall_time_ms: f64,
}

fn model_tag(model: Model) -> u64 {
    match model {
        Model::Vrg => 0,
        Model::Rag => 1,
        Model::Gbm => 2,
        Model::Gbmt => 3,
        Model::VrgUnion => 4,
    }
}

/// Converts scaled constants to a model spec with absolute radii, using the
/// unit `(ln n / n)^{1/t}`. `a` is the outer (or same-cluster) constant.
pub fn scaled_spec(model: Model, point: &GridPoint) -> Result<ModelSpec> {
    let unit = connectivity_scale(point.n, point.t);
    absolute_spec(
        model,
        &GridPoint {
            a: point.a * unit,
            b: point.b * unit,
            c: point.c.map(|c| c * unit),
            ..*point
        },
    )
}

/// Builds a model spec reading `a`, `b`, `c` as absolute radii.
pub fn absolute_spec(model: Model, point: &GridPoint) -> Result<ModelSpec> {
    let GridPoint { n, t, a, b, c } = *point;
    if model.on_circle() && t != 1 {
        return domain(format!("{} lives on the circle, t must be 1", model.name()));
    }
    if c.is_some() != (model == Model::VrgUnion) {
        return domain("c is required for vrg_union and only there");
    }
    let spec = match model {
        Model::Vrg => ModelSpec::Vrg { r1: b, r2: a },
        Model::Rag => ModelSpec::Rag { t, r1: b, r2: a },
        Model::Gbm => ModelSpec::Gbm { rs: a, rd: b },
        Model::Gbmt => ModelSpec::Gbmt { t, rs: a, rd: b },
        Model::VrgUnion => ModelSpec::VrgUnion {
            inner: c.unwrap_or(0.0),
            r1: b,
            r2: a,
        },
    };
    spec.validate(n)?;
    Ok(spec)
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return domain("trials must be at least 1");
        }
        let g = &self.grid;
        if g.a.is_empty() || g.b.is_empty() || g.n.is_empty() || g.t.is_empty() {
            return domain("grid lists a, b, n and t must be nonempty");
        }
        if (self.model == Model::VrgUnion) == g.c.is_empty() {
            return domain("grid.c must be given for vrg_union and only there");
        }
        if g.n.iter().any(|&n| n < 2) {
            return domain("n must be at least 2");
        }
        if self.measure == Measure::Recovery && !self.model.has_clusters() {
            return domain("recovery needs gbm or gbmt");
        }
        if self.recovery == RecoveryMode::WithLocations && self.model != Model::Gbm {
            return domain("location-aware recovery needs gbm");
        }
        if self.measure == Measure::NoLeftNeighbor && !self.model.on_circle() {
            return domain("no_left_neighbor needs a circle model");
        }
        for p in self.points() {
            scaled_spec(self.model, &p)?;
        }
        Ok(())
    }

    /// Grid points in canonical order.
    pub fn points(&self) -> Vec<GridPoint> {
        let g = &self.grid;
        let cs: Vec<Option<f64>> = if g.c.is_empty() {
            vec![None]
        } else {
            g.c.iter().copied().map(Some).collect()
        };
        let mut out = Vec::new();
        for &n in &g.n {
            for &t in &g.t {
                for &a in &g.a {
                    for &b in &g.b {
                        for &c in &cs {
                            out.push(GridPoint { n, t, a, b, c });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn seed_for(&self, point: &GridPoint, trial_index: usize) -> u64 {
        derive_seed(
            self.master_seed,
            &[
                model_tag(self.model),
                point.n as u64,
                point.t as u64,
                point.a.to_bits(),
                point.b.to_bits(),
                point.c.map_or(0, f64::to_bits),
                trial_index as u64,
            ],
        )
    }

    /// Runs every trial, in parallel, returning records in canonical order.
    pub fn run(&self) -> Result<Vec<TrialRecord>> {
        self.validate()?;
        let jobs: Vec<(GridPoint, usize)> = self
            .points()
            .into_iter()
            .flat_map(|p| (0..self.trials).map(move |i| (p, i)))
            .collect();
        jobs.par_iter()
            .map(|&(p, i)| {
                let seed = self.seed_for(&p, i);
                let mut rec = run_trial(self.model, self.measure, self.recovery, &p, seed)?;
                rec.trial_index = i;
                Ok(rec)
            })
            .collect()
    }
}

/// Generates and measures one instance. `trial_index` is left at 0.
pub fn run_trial(
    model: Model,
    measure: Measure,
    mode: RecoveryMode,
    point: &GridPoint,
    seed: u64,
) -> Result<TrialRecord> {
    let start = Instant::now();
    let spec = scaled_spec(model, point)?;
    let inst = generate(spec, point.n, seed)?;
    let cc = connected_components(&inst.graph);
    let mut rec = TrialRecord {
        model,
        point: *point,
        trial_index: 0,
        seed_used: seed,
        edges: inst.graph.edge_count(),
        connected: cc.count == 1,
        components: cc.count,
        isolated: count_isolated(&inst.graph),
        no_left_neighbor: None,
        accuracy: None,
        exact: None,
        removed_edges: None,
        wall_time_ms: 0.0,
    };
    match measure {
        Measure::Connectivity | Measure::IsolatedCount => {}
        Measure::NoLeftNeighbor => rec.no_left_neighbor = Some(count_no_left_neighbor(&inst)?),
        Measure::Recovery => {
            let out = match mode {
                RecoveryMode::Triangle => recover_instance(&inst, 1.0, 1.0)?,
                RecoveryMode::WithLocations => recover_instance_with_locations(&inst)?,
            };
            rec.accuracy = out.accuracy;
            rec.exact = out.exact;
            rec.removed_edges = Some(out.removed_edges);
        }
    }
    rec.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(rec)
}

/// Nine significant digits, trailing zeros trimmed, plain decimal for
/// exponents in `[-5, 9)` and `<mantissa>e<exp>` otherwise.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let s = format!("{:.*}", (8 - exp) as usize, x);
        trim_zeros(&s).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

fn point_cells(model: Model, p: &GridPoint) -> String {
    format!(
        "{},{},{},{},{},{}",
        model.name(),
        p.n,
        p.t,
        format_sig9(p.a),
        format_sig9(p.b),
        opt(p.c, format_sig9)
    )
}

pub fn write_trials_csv<W: Write>(records: &[TrialRecord], timing: bool, mut w: W) -> Result<()> {
    writeln!(w, "{TRIALS_SCHEMA}")?;
    write!(
        w,
        "model,n,t,a,b,c,trial_index,seed_used,edges,connected,components,isolated,no_left_neighbor,accuracy,exact,removed_edges"
    )?;
    writeln!(w, "{}", if timing { ",wall_time_ms" } else { "" })?;
    for r in records {
        write!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}{}",
            point_cells(r.model, &r.point),
            r.trial_index,
            r.seed_used,
            r.edges,
            r.connected,
            r.components,
            r.isolated,
            opt(r.no_left_neighbor, |v| v.to_string()),
            opt(r.accuracy, format_sig9),
            opt(r.exact, |v| v.to_string()),
            opt(r.removed_edges, |v| v.to_string()),
            if timing { format!(",{}", format_sig9(r.wall_time_ms)) } else { String::new() }
        )?;
        writeln!(w)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointSummary {
    pub model: Model,
    pub point: GridPoint,
    pub trials: usize,
    pub mean_edges: f64,
    pub connected_fraction: f64,
    pub mean_components: f64,
    pub mean_isolated: f64,
    /// Standard error of the isolated-count mean.
    pub se_isolated: f64,
    pub mean_no_left_neighbor: Option<f64>,
    pub mean_accuracy: Option<f64>,
    pub exact_fraction: Option<f64>,
    pub mean_removed_edges: Option<f64>,
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, k) = xs.fold((0.0, 0usize), |(s, k), x| (s + x, k + 1));
    (k > 0).then(|| s / k as f64)
}

/// Per-point aggregates. Records must be in canonical order.
pub fn summarize(records: &[TrialRecord]) -> Vec<PointSummary> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let head = &records[start];
        let end = start
            + records[start..]
                .iter()
                .take_while(|r| r.point == head.point)
                .count();
        let rs = &records[start..end];
        let k = rs.len() as f64;
        let iso = mean(rs.iter().map(|r| r.isolated as f64)).unwrap_or(0.0);
        let var = if rs.len() > 1 {
            rs.iter().map(|r| (r.isolated as f64 - iso).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        out.push(PointSummary {
            model: head.model,
            point: head.point,
            trials: rs.len(),
            mean_edges: mean(rs.iter().map(|r| r.edges as f64)).unwrap_or(0.0),
            connected_fraction: rs.iter().filter(|r| r.connected).count() as f64 / k,
            mean_components: mean(rs.iter().map(|r| r.components as f64)).unwrap_or(0.0),
            mean_isolated: iso,
            se_isolated: (var / k).sqrt(),
            mean_no_left_neighbor: mean(rs.iter().filter_map(|r| r.no_left_neighbor.map(|v| v as f64))),
            mean_accuracy: mean(rs.iter().filter_map(|r| r.accuracy)),
            exact_fraction: mean(rs.iter().filter_map(|r| r.exact.map(|e| f64::from(u8::from(e))))),
            mean_removed_edges: mean(rs.iter().filter_map(|r| r.removed_edges.map(|v| v as f64))),
        });
        start = end;
    }
    out
}

pub fn write_summary_csv<W: Write>(summary: &[PointSummary], mut w: W) -> Result<()> {
    writeln!(w, "{SUMMARY_SCHEMA}")?;
    writeln!(
        w,
        "model,n,t,a,b,c,trials,mean_edges,connected_fraction,mean_components,mean_isolated,se_isolated,mean_no_left_neighbor,mean_accuracy,exact_fraction,mean_removed_edges"
    )?;
    for s in summary {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            point_cells(s.model, &s.point),
            s.trials,
            format_sig9(s.mean_edges),
            format_sig9(s.connected_fraction),
            format_sig9(s.mean_components),
            format_sig9(s.mean_isolated),
            format_sig9(s.se_isolated),
            opt(s.mean_no_left_neighbor, format_sig9),
            opt(s.mean_accuracy, format_sig9),
            opt(s.exact_fraction, format_sig9),
            opt(s.mean_removed_edges, format_sig9),
        )?;
    }
    Ok(())
}
