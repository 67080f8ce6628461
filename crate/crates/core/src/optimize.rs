//! Pattern search for small systolic ratios over edge lengths, and the
//! entropy against systole scan.

use crate::complex::{MetricComplex, PiOneData};
use crate::error::{Error, Result};
use crate::growth::fmt_f64;
use crate::invariants::{
    edge_triangles, geodesic_candidates, phi_systole_with, ratio_from, volume_entropy,
    GeodesicLoop, GeodesicOptions, SystoleMode,
};
use crate::search::Budget;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

/// Relative slack kept in every triangle inequality by accepted moves.
pub const TRIANGLE_SLACK: f64 = 1e-6;

/// Relative change in the ratio attributed to rounding when a subdivision
/// round recomputes it.
const ROUNDING: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizeConfig {
    /// Cap on full cycles over the edges, across all rounds.
    pub max_iters: usize,
    /// Multiplicative step, greater than 1.
    pub initial_step: f64,
    /// `step <- 1 + (step - 1) * shrink` after a cycle without improvement.
    pub shrink: f64,
    /// A round ends once the step falls below this.
    pub min_step: f64,
    /// Determines the edge visiting order.
    pub seed: u64,
    /// Rescale to unit volume after every accepted move.
    pub normalize: bool,
    /// Barycentric subdivision rounds after the first convergence.
    pub subdivisions: usize,
    pub mode: SystoleMode,
    pub budget: Budget,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig {
            max_iters: 200,
            initial_step: 1.10,
            shrink: 0.5,
            min_step: 1.001,
            seed: 0,
            normalize: false,
            subdivisions: 0,
            mode: SystoleMode::EdgePath,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub round: usize,
    pub ratio: f64,
    pub systole: f64,
    pub volume: f64,
    pub step: f64,
    pub accepted: usize,
}

#[derive(Clone, Debug)]
pub struct OptimizeOutcome {
    pub best: MetricComplex,
    pub phi: PiOneData,
    pub ratio: f64,
    pub systole: f64,
    /// Ratio of `best` recomputed from scratch.
    pub verified_ratio: f64,
    pub trace: Vec<TraceRow>,
    pub accepted: usize,
    /// Some cycle found every move blocked by the triangle inequality.
    pub stalled: bool,
}

/// `iteration,round,ratio,systole,volume,step,accepted`.
pub fn trace_csv(trace: &[TraceRow]) -> String {
    let mut s = String::from("iteration,round,ratio,systole,volume,step,accepted\n");
    for r in trace {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.iteration,
            r.round,
            fmt_f64(r.ratio),
            fmt_f64(r.systole),
            fmt_f64(r.volume),
            fmt_f64(r.step),
            r.accepted
        );
    }
    s
}

fn admissible(x: &MetricComplex, edge_tris: &[Vec<usize>], e: usize, lengths: &[f64]) -> bool {
    edge_tris[e].iter().all(|&t| {
        let l = x.triangles()[t].edges.map(|i| lengths[i]);
        let tol = TRIANGLE_SLACK * (l[0] + l[1] + l[2]);
        l[0] + l[1] > l[2] + tol && l[1] + l[2] > l[0] + tol && l[2] + l[0] > l[1] + tol
    })
}

/// Systole evaluation with a cache of straightened loops in geodesic mode.
struct Evaluator {
    mode: SystoleMode,
    budget: Budget,
    cache: Vec<GeodesicLoop>,
}

impl Evaluator {
    fn systole(&mut self, x: &MetricComplex, p: &PiOneData) -> Result<f64> {
        match self.mode {
            SystoleMode::Geodesic(opts) if x.dimension() == 2 => {
                let mut all = geodesic_candidates(x, p, opts)?;
                let edge_tris = edge_triangles(x);
                for g in &self.cache {
                    let mut g = g.clone();
                    g.straighten(x, &edge_tris);
                    all.push(g);
                }
                all.sort_by(|a, b| a.length.total_cmp(&b.length));
                all.dedup_by(|a, b| {
                    (a.length - b.length).abs() <= 1e-12 * b.length && a.label == b.label
                });
                all.truncate(opts.candidates);
                let len = all.first().map_or(f64::INFINITY, |g| g.length);
                self.cache = all;
                Ok(len)
            }
            _ => Ok(phi_systole_with(x, p, self.mode, self.budget)?.length),
        }
    }

    /// Upper bound on the systole from cached loops, if any.
    fn bound(&self, x: &MetricComplex) -> Option<f64> {
        if self.cache.is_empty() {
            return None;
        }
        let b = self
            .cache
            .iter()
            .map(|g| {
                let mut g = g.clone();
                g.relax(x);
                g.length
            })
            .fold(f64::INFINITY, f64::min);
        Some(b)
    }
}

/// Coordinate pattern search on edge lengths minimizing `Vol / sys^n`.
pub fn optimize_ratio(
    x: &MetricComplex,
    p: &PiOneData,
    cfg: &OptimizeConfig,
) -> Result<OptimizeOutcome> {
    if !(cfg.initial_step > 1.0 && cfg.min_step > 1.0 && cfg.shrink > 0.0 && cfg.shrink < 1.0) {
        return Err(Error::InvalidArgument(
            "need step > 1, min step > 1 and shrink in (0, 1)".into(),
        ));
    }
    let dim = x.dimension() as i32;
    let normalize = |c: MetricComplex| -> Result<MetricComplex> {
        if cfg.normalize {
            let v = c.volume()?;
            c.scaled(v.powf(-1.0 / dim as f64))
        } else {
            Ok(c)
        }
    };
    let mut x = normalize(x.clone())?;
    let mut p = p.clone();
    let mut ev = Evaluator {
        mode: cfg.mode,
        budget: cfg.budget,
        cache: Vec::new(),
    };
    let mut sys = ev.systole(&x, &p)?;
    let mut ratio = ratio_from(&x, sys)?;
    let mut trace = Vec::new();
    let mut accepted = 0;
    let mut stalled = false;
    let mut iteration = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut step = cfg.initial_step;
    trace.push(TraceRow {
        iteration,
        round: 0,
        ratio,
        systole: sys,
        volume: x.volume()?,
        step,
        accepted,
    });
    for round in 0..=cfg.subdivisions {
        if round > 0 {
            let (y, q) = p.subdivide_all(&x)?;
            ev.cache = ev
                .cache
                .iter()
                .map(|g| g.through_subdivision(&x, &y))
                .collect();
            x = y;
            p = q;
            // same space, so a rise within rounding is noise; keep the earlier value
            let s = ev.systole(&x, &p)?;
            let r = ratio_from(&x, s)?;
            if r < ratio || r > ratio * (1.0 + ROUNDING) {
                sys = s;
                ratio = r;
            }
            step = cfg.initial_step;
            trace.push(TraceRow {
                iteration,
                round,
                ratio,
                systole: sys,
                volume: x.volume()?,
                step,
                accepted,
            });
        }
        let edge_tris = edge_triangles(&x);
        let mut order: Vec<usize> = (0..x.edges().len()).collect();
        order.shuffle(&mut rng);
        while step >= cfg.min_step && iteration < cfg.max_iters {
            iteration += 1;
            let mut improved = false;
            let mut blocked = true;
            for &e in &order {
                for factor in [step, 1.0 / step] {
                    let mut lengths = x.lengths();
                    lengths[e] *= factor;
                    if !admissible(&x, &edge_tris, e, &lengths) {
                        continue;
                    }
                    blocked = false;
                    let trial = x.with_lengths(&lengths)?;
                    let vol = trial.volume()?;
                    if let Some(b) = ev.bound(&trial) {
                        if vol / b.powi(dim) >= ratio {
                            continue;
                        }
                    }
                    let saved = ev.cache.clone();
                    let s = ev.systole(&trial, &p)?;
                    let r = ratio_from(&trial, s)?;
                    if r < ratio {
                        x = normalize(trial)?;
                        sys = if cfg.normalize {
                            s * (x.volume()? / vol).powf(1.0 / dim as f64)
                        } else {
                            s
                        };
                        ratio = r;
                        accepted += 1;
                        improved = true;
                        break;
                    }
                    ev.cache = saved;
                }
            }
            stalled |= blocked;
            if !improved {
                step = 1.0 + (step - 1.0) * cfg.shrink;
            }
            trace.push(TraceRow {
                iteration,
                round,
                ratio,
                systole: sys,
                volume: x.volume()?,
                step,
                accepted,
            });
        }
    }
    // independent recheck; geodesic searches are redone on a denser Steiner graph
    let check = match cfg.mode {
        SystoleMode::Geodesic(o) => SystoleMode::Geodesic(GeodesicOptions {
            steiner_points: 2 * o.steiner_points,
            candidates: 2 * o.candidates,
            ..o
        }),
        m => m,
    };
    let verified_ratio = ratio_from(&x, phi_systole_with(&x, &p, check, cfg.budget)?.length)?;
    Ok(OptimizeOutcome {
        best: x,
        phi: p,
        ratio,
        systole: sys,
        verified_ratio,
        trace,
        accepted,
        stalled,
    })
}

/// A complex with attached homomorphism, named for reporting.
#[derive(Clone, Debug)]
pub struct ScanMember {
    pub name: String,
    pub complex: MetricComplex,
    pub phi: PiOneData,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub name: String,
    pub dimension: usize,
    pub volume: f64,
    pub systole: f64,
    pub ratio: f64,
    pub entropy: f64,
    /// `entropy * Vol^(1/n)`.
    pub entropy_product: f64,
    /// `ratio * log^n(1 + entropy) / entropy^n`; absent below `1e-3` entropy.
    pub implied_c: Option<f64>,
}

/// Entropy below which the implied constant is not reported.
pub const IMPLIED_C_FLOOR: f64 = 1e-3;

pub fn entropy_systole_scan(
    family: &[ScanMember],
    r_max: f64,
    samples: usize,
    mode: SystoleMode,
    budget: Budget,
) -> Result<Vec<ScanRow>> {
    family
        .iter()
        .map(|m| {
            let x = &m.complex;
            let n = x.dimension() as i32;
            let volume = x.volume()?;
            let systole = phi_systole_with(x, &m.phi, mode, budget)?.length;
            let ratio = ratio_from(x, systole)?;
            let entropy = volume_entropy(x, &m.phi, r_max, samples, None, budget)?
                .estimate
                .point_estimate;
            let implied_c = (entropy >= IMPLIED_C_FLOOR)
                .then(|| ratio * (1.0 + entropy).ln().powi(n) / entropy.powi(n));
            Ok(ScanRow {
                name: m.name.clone(),
                dimension: n as usize,
                volume,
                systole,
                ratio,
                entropy,
                entropy_product: entropy * volume.powf(1.0 / n as f64),
                implied_c,
            })
        })
        .collect()
}

/// `name,dimension,volume,systole,ratio,entropy,entropy_product,implied_c`.
pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut s =
        String::from("name,dimension,volume,systole,ratio,entropy,entropy_product,implied_c\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.name,
            r.dimension,
            fmt_f64(r.volume),
            fmt_f64(r.systole),
            fmt_f64(r.ratio),
            fmt_f64(r.entropy),
            fmt_f64(r.entropy_product),
            r.implied_c.map_or(String::new(), fmt_f64)
        );
    }
    s
}
