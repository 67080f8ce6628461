//! Volume, systoles, stable systoles, volume entropy and systolic ratios
//! of a complex with a homomorphism `phi: pi_1 -> pi` attached.

mod geodesic;
mod loops;

pub use geodesic::{
    edge_triangles, geodesic_candidates, GeodesicLoop, GeodesicOptions, LoopPoint, SteinerGraph,
};
pub use loops::{rooted_cover_loop, tree_loop, tree_loops, tree_loops_at, GraphLoop, RootOutcome};

use crate::complex::{
    CoverFrontier, CoverNorm, CoverSearch, LabeledGraph, Lattice, MetricComplex, PiOneData,
};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::growth::{estimate_from_profile, fmt_f64, EntropyEstimate};
use crate::norm::Norm;
use crate::search::{Budget, CayleySearch};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

/// Total length or area.
pub fn volume(x: &MetricComplex) -> Result<f64> {
    x.volume()
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum SystoleMode {
    /// Loops along edges of the 1-skeleton.
    #[default]
    EdgePath,
    /// Straightened flat geodesics on a pure 2-complex.
    Geodesic(GeodesicOptions),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasepointLoop {
    pub vertex: usize,
    /// `INFINITY` when no nontrivial loop exists.
    pub length: f64,
    pub label: Option<GroupElement>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystoleResult {
    /// `INFINITY` when every loop has trivial image.
    pub length: f64,
    /// Edge-path witness as `(edge, forward)` steps.
    pub witness: Vec<(usize, bool)>,
    pub geodesic: Option<GeodesicLoop>,
    pub label: Option<GroupElement>,
    pub basepoint: Option<usize>,
    pub per_basepoint: Vec<BasepointLoop>,
}

impl SystoleResult {
    pub fn is_finite(&self) -> bool {
        self.length.is_finite()
    }

    /// `basepoint,length,label` with one row per vertex for edge paths.
    pub fn to_csv(&self, x: &MetricComplex, target: &GroupSpec) -> String {
        let mut s = String::from("basepoint,length,label\n");
        let label = |g: &Option<GroupElement>| {
            g.as_ref()
                .map_or(String::new(), |g| target.format_element(g))
        };
        if self.per_basepoint.is_empty() {
            let _ = writeln!(s, ",{},{}", fmt_f64(self.length), label(&self.label));
        }
        for row in &self.per_basepoint {
            let _ = writeln!(
                s,
                "{},{},{}",
                x.vertex_ids()[row.vertex],
                fmt_f64(row.length),
                label(&row.label)
            );
        }
        s
    }
}

fn phi_graph(x: &MetricComplex, p: &PiOneData) -> Result<(LabeledGraph<GroupElement>, GroupSpec)> {
    let target = p.phi()?.target.clone();
    let labels = p.edge_labels()?;
    Ok((LabeledGraph::one_skeleton(x, &target, &labels), target))
}

/// The induced norm `g -> d(x~, g x~)` on the deck group, from the lifts of
/// the basepoint.
pub fn induced_norm(x: &MetricComplex, p: &PiOneData) -> Result<Norm> {
    let (graph, group) = phi_graph(x, p)?;
    Ok(Norm::geometric(Arc::new(CoverNorm {
        graph: Arc::new(graph),
        group,
        base: x.base(),
    })))
}

fn edge_steps(graph: &LabeledGraph<GroupElement>, steps: &[(usize, usize)]) -> Vec<(usize, bool)> {
    steps
        .iter()
        .map(|&(n, k)| {
            let a = &graph.adj[n][k];
            (
                a.tag.expect("one-skeleton arcs carry their edge"),
                a.forward,
            )
        })
        .collect()
}

/// Edge-path `phi`-systole: per-vertex cover Dijkstra until a lift of the
/// vertex with nontrivial label settles.
pub fn phi_systole(x: &MetricComplex, p: &PiOneData, budget: Budget) -> Result<SystoleResult> {
    let (graph, target) = phi_graph(x, p)?;
    let outcomes: Vec<RootOutcome<GroupElement>> = (0..x.vertex_count())
        .into_par_iter()
        .map(|v| rooted_cover_loop(&graph, &target, v, budget.nodes))
        .collect();
    let mut per_basepoint = Vec::new();
    let mut best: Option<GraphLoop<GroupElement>> = None;
    let mut unresolved = f64::INFINITY;
    let mut saturated = false;
    for (v, out) in outcomes.into_iter().enumerate() {
        match out {
            RootOutcome::Found(lp) => {
                per_basepoint.push(BasepointLoop {
                    vertex: v,
                    length: lp.length,
                    label: Some(lp.label.clone()),
                });
                if best.as_ref().is_none_or(|b| lp.length < b.length) {
                    best = Some(lp);
                }
            }
            RootOutcome::Saturated => {
                saturated = true;
                per_basepoint.push(BasepointLoop {
                    vertex: v,
                    length: f64::INFINITY,
                    label: None,
                });
            }
            RootOutcome::Budget(lb) => unresolved = unresolved.min(lb),
        }
    }
    match best {
        Some(lp) if lp.length <= unresolved => Ok(SystoleResult {
            length: lp.length,
            witness: edge_steps(&graph, &lp.steps),
            geodesic: None,
            label: Some(lp.label),
            basepoint: Some(lp.root),
            per_basepoint,
        }),
        Some(lp) => Err(Error::Inconclusive {
            lower_bound: unresolved.min(lp.length),
        }),
        None if saturated => Ok(SystoleResult {
            length: f64::INFINITY,
            witness: Vec::new(),
            geodesic: None,
            label: None,
            basepoint: None,
            per_basepoint,
        }),
        None => Err(Error::Inconclusive {
            lower_bound: unresolved,
        }),
    }
}

/// Edge-path systole by shortest-path trees: the minimum over roots of
/// the best loop made of two tree paths and one arc.
pub fn phi_systole_by_trees(x: &MetricComplex, p: &PiOneData) -> Result<SystoleResult> {
    let (graph, target) = phi_graph(x, p)?;
    let loops = tree_loops(&graph, &target, 0.0, 1);
    Ok(match loops.into_iter().next() {
        Some(lp) => SystoleResult {
            length: lp.length,
            witness: edge_steps(&graph, &lp.steps),
            geodesic: None,
            label: Some(lp.label),
            basepoint: Some(lp.root),
            per_basepoint: Vec::new(),
        },
        None => SystoleResult {
            length: f64::INFINITY,
            witness: Vec::new(),
            geodesic: None,
            label: None,
            basepoint: None,
            per_basepoint: Vec::new(),
        },
    })
}

/// Systole in the chosen mode. Geodesic mode on a 1-complex is the edge-path
/// systole.
pub fn phi_systole_with(
    x: &MetricComplex,
    p: &PiOneData,
    mode: SystoleMode,
    budget: Budget,
) -> Result<SystoleResult> {
    match mode {
        SystoleMode::Geodesic(opts) if x.dimension() == 2 => {
            let best = geodesic_candidates(x, p, opts)?.into_iter().next();
            Ok(SystoleResult {
                length: best.as_ref().map_or(f64::INFINITY, |g| g.length),
                witness: Vec::new(),
                label: best.as_ref().map(|g| g.label.clone()),
                geodesic: best,
                basepoint: None,
                per_basepoint: Vec::new(),
            })
        }
        _ => phi_systole(x, p, budget),
    }
}

/// `Vol / sys^n`.
pub fn systolic_ratio(x: &MetricComplex, p: &PiOneData, budget: Budget) -> Result<f64> {
    systolic_ratio_with(x, p, SystoleMode::EdgePath, budget)
}

pub fn systolic_ratio_with(
    x: &MetricComplex,
    p: &PiOneData,
    mode: SystoleMode,
    budget: Budget,
) -> Result<f64> {
    let sys = phi_systole_with(x, p, mode, budget)?;
    ratio_from(x, sys.length)
}

pub(crate) fn ratio_from(x: &MetricComplex, sys: f64) -> Result<f64> {
    if !sys.is_finite() {
        return Err(Error::NotEssential);
    }
    Ok(x.volume()? / sys.powi(x.dimension() as i32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StableSystoleResult {
    pub class: Vec<i64>,
    /// `(k, l(ka), l(ka)/k)`.
    pub per_k: Vec<(usize, f64, f64)>,
    pub lower: f64,
    pub upper: f64,
    pub diameter: f64,
    /// False when the budget cut the `k` range short.
    pub complete: bool,
}

impl StableSystoleResult {
    /// `k,ell_ka,ratio,lower,upper`; bounds are running values through `k`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,ell_ka,ratio,lower,upper\n");
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for &(k, l, r) in &self.per_k {
            lo = lo.max((l - 2.0 * self.diameter) / k as f64);
            hi = hi.min((l + 2.0 * self.diameter) / k as f64);
            let _ = writeln!(
                s,
                "{k},{},{},{},{}",
                fmt_f64(l),
                fmt_f64(r),
                fmt_f64(lo),
                fmt_f64(hi)
            );
        }
        s
    }
}

/// Stable norm of `a` in `H(pi) = Z^b`: shortest loops of class `ka` on the
/// `H(pi)`-labelled cover, bracketed by the diameter correction.
pub fn stable_systole(
    x: &MetricComplex,
    p: &PiOneData,
    a: &[i64],
    k_max: usize,
    budget: Budget,
) -> Result<StableSystoleResult> {
    let phi = p.phi()?;
    let rank = phi.target.h_rank();
    if rank == 0 {
        return Err(Error::NoNontrivialClasses);
    }
    if a.len() != rank || a.iter().all(|&c| c == 0) || k_max == 0 {
        return Err(Error::InvalidArgument(format!(
            "need a nonzero class with {rank} coordinates and k_max >= 1"
        )));
    }
    let lattice = Lattice { rank };
    let labels: Vec<Vec<i64>> = p
        .edge_labels()?
        .iter()
        .map(|g| phi.target.abelianize(g))
        .collect();
    let graph = LabeledGraph::one_skeleton(x, &lattice, &labels);
    let targets: HashMap<Vec<i64>, usize> = (1..=k_max)
        .map(|k| (a.iter().map(|c| c * k as i64).collect(), k))
        .collect();
    // per vertex: (found lengths by k, lower bound on the unfound)
    let per_vertex: Vec<(Vec<Option<f64>>, f64)> = (0..x.vertex_count())
        .into_par_iter()
        .map(|v| {
            let mut found = vec![None; k_max + 1];
            let mut left = k_max;
            let mut search = CoverSearch::new(&graph, &lattice, v);
            let mut reached = f64::INFINITY;
            while let Some(id) = search.pop() {
                if search.node(id) == v {
                    if let Some(&k) = targets.get(search.label(id)) {
                        found[k] = Some(search.dist(id));
                        left -= 1;
                        if left == 0 {
                            break;
                        }
                    }
                }
                if search.settled_count() >= budget.nodes {
                    reached = search.dist(id);
                    break;
                }
                search.expand(id, f64::INFINITY);
            }
            (found, reached)
        })
        .collect();
    let diameter = x.diameter();
    let mut per_k = Vec::new();
    let mut complete = true;
    for k in 1..=k_max {
        let best = per_vertex
            .iter()
            .filter_map(|(f, _)| f[k])
            .fold(f64::INFINITY, f64::min);
        let floor = per_vertex
            .iter()
            .filter(|(f, _)| f[k].is_none())
            .map(|(_, r)| *r)
            .fold(f64::INFINITY, f64::min);
        if !best.is_finite() || best > floor {
            complete = false;
            break;
        }
        per_k.push((k, best, best / k as f64));
    }
    if per_k.is_empty() {
        let floor = per_vertex
            .iter()
            .map(|(_, r)| *r)
            .fold(f64::INFINITY, f64::min);
        return Err(Error::BudgetExceeded {
            budget: budget.nodes,
            lower_bound: floor,
        });
    }
    let lower = per_k
        .iter()
        .map(|&(k, l, _)| (l - 2.0 * diameter) / k as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let upper = per_k
        .iter()
        .map(|&(k, l, _)| (l + 2.0 * diameter) / k as f64)
        .fold(f64::INFINITY, f64::min);
    Ok(StableSystoleResult {
        class: a.to_vec(),
        per_k,
        lower,
        upper,
        diameter,
        complete,
    })
}

/// Generator-norm comparison: `S` is the set of deck transformations moving
/// the base lift at most `R + 2D`, weighted by that displacement.
#[derive(Clone, Debug, PartialEq)]
pub struct Sandwich {
    pub radius: f64,
    pub diameter: f64,
    pub generator_count: usize,
    pub generator_entropy: f64,
    /// `(R + 2D) / R`.
    pub factor: f64,
    pub upper_estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeEntropy {
    pub estimate: EntropyEstimate,
    pub sandwich: Option<Sandwich>,
}

/// Whether the images of the chords pairwise commute.
pub fn deck_group_is_abelian(p: &PiOneData) -> Result<bool> {
    let phi = p.phi()?;
    let g = &phi.target;
    let im = &phi.images;
    Ok(im
        .iter()
        .enumerate()
        .all(|(i, a)| im[i + 1..].iter().all(|b| g.mul(a, b) == g.mul(b, a))))
}

/// Volume entropy of the `phi`-cover from the lifts of the basepoint.
/// An abelian deck group has polynomial growth, so the estimate is set to
/// zero and flagged.
pub fn volume_entropy(
    x: &MetricComplex,
    p: &PiOneData,
    r_max: f64,
    samples: usize,
    sandwich_radius: Option<f64>,
    budget: Budget,
) -> Result<VolumeEntropy> {
    if !(r_max > 0.0) || samples < 2 {
        return Err(Error::InvalidArgument(
            "need r_max > 0 and at least two samples".into(),
        ));
    }
    let (graph, target) = phi_graph(x, p)?;
    let frontier = CoverFrontier::expand(&graph, &target, x.base(), r_max, budget);
    let profile = frontier.profile_at(x.base());
    let mut estimate = estimate_from_profile(&profile, r_max, samples, None);
    if deck_group_is_abelian(p)? {
        estimate.point_estimate = 0.0;
        estimate.diagnostics.polynomial_growth = true;
    }
    let sandwich = match sandwich_radius {
        None => None,
        Some(r) => {
            if !(r > 0.0) {
                return Err(Error::InvalidArgument(
                    "sandwich radius must be positive".into(),
                ));
            }
            let diameter = x.diameter();
            let cut = r + 2.0 * diameter;
            if cut > frontier.exhaustive_up_to {
                return Err(Error::InvalidArgument(format!(
                    "sandwich needs the cover ball of radius {cut}, only {} was enumerated",
                    frontier.exhaustive_up_to
                )));
            }
            let mut gens = Vec::new();
            let mut weights = Vec::new();
            for (node, g, d) in &frontier.settled {
                if *node == x.base() && *d > 0.0 && *d <= cut + crate::search::radius_slack(cut) {
                    gens.push(g.clone());
                    weights.push(*d);
                }
            }
            let search = CayleySearch {
                group: &target,
                gens: &gens,
                weights: &weights,
            };
            let ball = search.ball(r_max, budget);
            let mut gen_est = estimate_from_profile(&ball, r_max, samples, Some(gens.len()));
            if estimate.diagnostics.polynomial_growth {
                gen_est.point_estimate = 0.0;
            }
            let factor = cut / r;
            Some(Sandwich {
                radius: r,
                diameter,
                generator_count: gens.len(),
                generator_entropy: gen_est.point_estimate,
                factor,
                upper_estimate: gen_est.point_estimate * factor,
            })
        }
    };
    Ok(VolumeEntropy { estimate, sandwich })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    #[test]
    fn wedge_systole_is_short_circle() {
        let (x, p) = builders::wedge_with_phi(&[3.0, 5.0]).unwrap();
        let s = phi_systole(&x, &p, Budget::default()).unwrap();
        assert_eq!(s.length, 3.0);
        assert_eq!(s.witness, vec![(0, true)]);
    }

    #[test]
    fn odd_winding_on_circle() {
        let (x, p) = builders::circle_with_phi(7.0, 2).unwrap();
        assert_eq!(phi_systole(&x, &p, Budget::default()).unwrap().length, 7.0);
        let x = builders::polygon(7, 7.0).unwrap();
        let mut p = PiOneData::new(&x);
        p.attach_phi(
            &x,
            GroupSpec::cyclic(2).unwrap(),
            vec![GroupElement::Finite(1)],
        )
        .unwrap();
        let s = phi_systole(&x, &p, Budget::default()).unwrap();
        assert!((s.length - 7.0).abs() < 1e-12);
    }

    #[test]
    fn trivial_phi_has_infinite_systole() {
        let x = builders::grid_torus(3, 3, 1.0).unwrap();
        let mut p = PiOneData::new(&x);
        let n = p.generator_count();
        p.attach_phi(&x, GroupSpec::trivial(), vec![GroupElement::Trivial; n])
            .unwrap();
        let s = phi_systole(&x, &p, Budget::default()).unwrap();
        assert!(!s.is_finite());
        assert_eq!(
            systolic_ratio(&x, &p, Budget::default()),
            Err(Error::NotEssential)
        );
    }

    #[test]
    fn torus_systole_and_ratio() {
        let (x, p) = builders::grid_torus_with_phi(3, 4, 1.0).unwrap();
        let s = phi_systole(&x, &p, Budget::default()).unwrap();
        assert_eq!(s.length, 3.0);
        let t = phi_systole_by_trees(&x, &p).unwrap();
        assert_eq!(t.length, 3.0);
        let r = systolic_ratio(&x, &p, Budget::default()).unwrap();
        assert!((r - 12.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn stable_norms() {
        let (x, p) = builders::circle_with_phi(5.0, 0).unwrap();
        let s = stable_systole(&x, &p, &[1], 4, Budget::default()).unwrap();
        assert_eq!((s.lower, s.upper), (5.0, 5.0));
        let (x, p) = builders::wedge_with_phi(&[1.0, 1.0]).unwrap();
        let s = stable_systole(&x, &p, &[1, 1], 5, Budget::default()).unwrap();
        assert!(s.per_k.iter().all(|&(k, l, _)| l == 2.0 * k as f64));
        let (x, p) = builders::grid_torus_with_phi(3, 4, 1.0).unwrap();
        let s = stable_systole(&x, &p, &[1, 0], 4, Budget::default()).unwrap();
        assert!(s.lower <= 3.0 && 3.0 <= s.upper);
        assert_eq!(s.per_k[0].1, 3.0);
    }

    #[test]
    fn finite_target_has_no_classes() {
        let (x, p) = builders::hemi_icosahedron(1.0).unwrap();
        assert_eq!(
            stable_systole(&x, &p, &[1], 2, Budget::default()),
            Err(Error::NoNontrivialClasses)
        );
    }

    #[test]
    fn wedge_entropy_and_sandwich() {
        let (x, p) = builders::wedge_with_phi(&[1.0, 1.0]).unwrap();
        let v = volume_entropy(&x, &p, 10.0, 5, Some(1.0), Budget::default()).unwrap();
        assert_eq!(v.estimate.counts.last().unwrap().1, 2 * 3u64.pow(10) - 1);
        let s = v.sandwich.unwrap();
        assert_eq!(s.generator_count, 4);
        assert_eq!(s.factor, 1.0);
        assert!((s.upper_estimate - v.estimate.point_estimate).abs() < 1e-12);
    }

    #[test]
    fn abelian_cover_entropy_is_zero() {
        let (x, p) = builders::circle_with_phi(3.0, 0).unwrap();
        let v = volume_entropy(&x, &p, 30.0, 4, None, Budget::default()).unwrap();
        assert_eq!(v.estimate.point_estimate, 0.0);
        assert!(v.estimate.diagnostics.polynomial_growth);
    }
}
