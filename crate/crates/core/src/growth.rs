//! Growth functions `β_L(r) = #{g : L(g) ≤ r}` and volume-entropy estimates.
//!
//! Every count comes from one exhaustive enumeration of the ball of the
//! largest requested radius. For word and generator norms the enumeration is
//! Dijkstra on the Cayley graph; free-product norms are enumerated directly
//! over alternating normal forms from the factor balls.
//!
//! The entropy point estimate is the octave difference quotient
//! `(log β(r) − log β(r/2)) / (r/2)`. It has the same limit as
//! `(1/r) log β(r)` but cancels the polynomial prefactor of `β`, which the
//! raw quotient only sheds at rate `log(r)/r`.

use crate::error::{Error, Result};
use crate::group::{GroupKind, GroupSpec};
use crate::norm::Norm;
use crate::search::{radius_slack, BallProfile, Budget, CayleySearch};

/// Enumerates every element with `L(g) ≤ radius`.
///
/// Stops early (with `complete == false`) when the budget is exhausted.
pub fn ball_profile(
    group: &GroupSpec,
    norm: &Norm,
    radius: f64,
    budget: Budget,
) -> Result<BallProfile> {
    if !(radius >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "radius must be non-negative, got {radius}"
        )));
    }
    norm.validate(group)?;
    match norm {
        Norm::FreeProduct { left, rho, right } => {
            let (g, h) = match group.factors() {
                Some([g, h]) => (g, h),
                _ => {
                    return Err(Error::InvalidNorm(
                        "free-product norm on a non-product".into(),
                    ))
                }
            };
            free_product_ball(g, left, h, right, *rho, radius, budget)
        }
        Norm::Geometric(inner) => inner.ball(radius, budget),
        Norm::Discrete => {
            let gens = group.generators();
            let mut norms = vec![0.0];
            if radius + radius_slack(radius) >= 1.0 {
                if matches!(group.kind(), GroupKind::Finite(_)) {
                    norms.extend(std::iter::repeat_n(1.0, gens.len()));
                } else if !gens.is_empty() {
                    return Err(Error::BudgetExceeded {
                        budget: budget.nodes,
                        lower_bound: 0.0,
                    });
                }
            }
            Ok(BallProfile::from_unsorted(norms, radius, true, radius))
        }
        _ => {
            let (gens, weights) = norm
                .weighted_generators(group)
                .ok_or_else(|| Error::InvalidNorm("norm has no generating set".into()))?;
            Ok(CayleySearch {
                group,
                gens: &gens,
                weights: &weights,
            }
            .ball(radius, budget))
        }
    }
}

fn free_product_ball(
    g: &GroupSpec,
    left: &Norm,
    h: &GroupSpec,
    right: &Norm,
    rho: f64,
    radius: f64,
    budget: Budget,
) -> Result<BallProfile> {
    let pl = ball_profile(g, left, radius, budget)?;
    let pr = ball_profile(h, right, radius / rho, budget)?;
    // drop the identity (the unique zero) and scale the right factor
    let lists = [
        pl.norms[1..].to_vec(),
        pr.norms[1..].iter().map(|x| rho * x).collect::<Vec<_>>(),
    ];
    let cut = radius + radius_slack(radius);
    let mut out = vec![0.0];
    let mut complete = pl.complete && pr.complete;

    fn extend(
        lists: &[Vec<f64>; 2],
        last: usize,
        acc: f64,
        cut: f64,
        out: &mut Vec<f64>,
        cap: usize,
    ) -> bool {
        for (f, list) in lists.iter().enumerate() {
            if f == last {
                continue;
            }
            for &v in list {
                let s = acc + v;
                if s > cut {
                    break;
                }
                if out.len() >= cap {
                    return false;
                }
                out.push(s);
                if !extend(lists, f, s, cut, out, cap) {
                    return false;
                }
            }
        }
        true
    }

    if !extend(&lists, usize::MAX, 0.0, cut, &mut out, budget.nodes) {
        complete = false;
    }
    let exhaustive = if complete { radius } else { 0.0 };
    Ok(BallProfile::from_unsorted(
        out, radius, complete, exhaustive,
    ))
}

/// `β_L(r)`; an incomplete enumeration is an error carrying the radius up
/// to which it was exhaustive.
pub fn ball_count(group: &GroupSpec, norm: &Norm, r: f64, budget: Budget) -> Result<u64> {
    let p = ball_profile(group, norm, r, budget)?;
    if !p.complete {
        return Err(Error::BudgetExceeded {
            budget: budget.nodes,
            lower_bound: p.exhaustive_up_to,
        });
    }
    Ok(p.count_at(r) as u64)
}

/// Sampled growth function.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthTable {
    pub group: String,
    pub norm: String,
    pub radii: Vec<f64>,
    pub counts: Vec<u64>,
    pub exhaustive_up_to: f64,
    /// `#S` when the norm is a generator norm.
    pub generator_count: Option<usize>,
}

impl GrowthTable {
    pub fn from_profile(
        profile: &BallProfile,
        radii: &[f64],
        generator_count: Option<usize>,
    ) -> Self {
        GrowthTable {
            group: String::new(),
            norm: String::new(),
            radii: radii.to_vec(),
            counts: radii.iter().map(|&r| profile.count_at(r) as u64).collect(),
            exhaustive_up_to: profile.exhaustive_up_to,
            generator_count,
        }
    }

    /// `(1/t)(log β(t) + log #S)` at each radius; `None` for non-generator norms.
    pub fn generator_bounds(&self) -> Vec<Option<f64>> {
        self.radii
            .iter()
            .zip(&self.counts)
            .map(|(&t, &b)| {
                let s = self.generator_count?;
                (t > 0.0).then(|| generator_bound(t, b, s))
            })
            .collect()
    }

    /// CSV with columns `r, beta, log_beta_over_r, lemma73_bound`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["r", "beta", "log_beta_over_r", "lemma73_bound"])
            .expect("in-memory write");
        for ((&r, &b), bound) in self.radii.iter().zip(&self.counts).zip(self.generator_bounds()) {
            let lb = if r > 0.0 {
                fmt_f64((b as f64).ln() / r)
            } else {
                String::new()
            };
            w.write_record([
                fmt_f64(r),
                b.to_string(),
                lb,
                bound.map(fmt_f64).unwrap_or_default(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
    }
}

/// Shortest round-trip representation, always with a decimal point or exponent.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn generator_bound(t: f64, beta: u64, gens: usize) -> f64 {
    if gens == 0 {
        // β ≡ 1 on the trivial group
        return 0.0;
    }
    ((beta as f64).ln() + (gens as f64).ln()) / t
}

/// `β_L` at each of `radii`, from one enumeration up to the largest radius.
pub fn growth_table(
    group: &GroupSpec,
    norm: &Norm,
    radii: &[f64],
    budget: Budget,
) -> Result<GrowthTable> {
    let r_max = radii.iter().cloned().fold(0.0, f64::max);
    let profile = ball_profile(group, norm, r_max, budget)?;
    if !profile.complete {
        return Err(Error::BudgetExceeded {
            budget: budget.nodes,
            lower_bound: profile.exhaustive_up_to,
        });
    }
    let mut t = GrowthTable::from_profile(&profile, radii, norm.generator_count(group));
    t.group = group.to_string();
    t.norm = norm.describe(group);
    Ok(t)
}

/// `r_max · 2^{-k}` for `k = samples-1, …, 0`, increasing.
pub fn geometric_radii(r_max: f64, samples: usize) -> Vec<f64> {
    (0..samples)
        .rev()
        .map(|k| r_max * 0.5f64.powi(k as i32))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyDiagnostics {
    /// Elements enumerated.
    pub enumerated: usize,
    /// Whether the enumeration reached `r_max`.
    pub exhaustive: bool,
    pub exhaustive_up_to: f64,
    /// Octave quotients over the last two octaves agree within 5%.
    pub converged: bool,
    pub generator_count: Option<usize>,
    /// Set when the estimate was fixed to zero because the group is known to
    /// have polynomial growth.
    pub polynomial_growth: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate {
    /// `(r, (1/r) log β(r))` at the sampled radii.
    pub lower_sequence: Vec<(f64, f64)>,
    /// `min_t (1/t)(log β(t) + log #S)` over sampled `t`; generator norms only.
    pub upper_bound: Option<f64>,
    pub point_estimate: f64,
    /// `(r, β(r))` at the sampled radii.
    pub counts: Vec<(f64, u64)>,
    pub diagnostics: EntropyDiagnostics,
}

fn octave_quotient(profile: &BallProfile, r: f64) -> f64 {
    let hi = profile.count_at(r) as f64;
    let lo = profile.count_at(r / 2.0) as f64;
    (hi.ln() - lo.ln()) / (r / 2.0)
}

/// Builds an estimate from an enumerated ball. When the ball is incomplete
/// the estimate is taken at the largest exhaustive radius and flagged.
pub fn estimate_from_profile(
    profile: &BallProfile,
    r_max: f64,
    samples: usize,
    generator_count: Option<usize>,
) -> EntropyEstimate {
    let exhaustive = profile.complete;
    let r_eff = if exhaustive {
        r_max
    } else {
        profile.exhaustive_up_to.min(r_max)
    };
    let radii: Vec<f64> = geometric_radii(r_eff, samples)
        .into_iter()
        .filter(|&r| r > 0.0)
        .collect();
    let counts: Vec<(f64, u64)> = radii
        .iter()
        .map(|&r| (r, profile.count_at(r) as u64))
        .collect();
    let lower_sequence = counts
        .iter()
        .map(|&(r, b)| (r, (b as f64).ln() / r))
        .collect();
    let upper_bound = generator_count.and_then(|s| {
        counts
            .iter()
            .map(|&(t, b)| generator_bound(t, b, s))
            .min_by(f64::total_cmp)
    });
    let (point_estimate, converged) = if r_eff > 0.0 {
        let now = octave_quotient(profile, r_eff);
        let before = octave_quotient(profile, r_eff / 2.0);
        let scale = now.abs().max(before.abs());
        (now, scale == 0.0 || (now - before).abs() <= 0.05 * scale)
    } else {
        (0.0, false)
    };
    EntropyEstimate {
        lower_sequence,
        upper_bound,
        point_estimate,
        counts,
        diagnostics: EntropyDiagnostics {
            enumerated: profile.len(),
            exhaustive,
            exhaustive_up_to: profile.exhaustive_up_to,
            converged,
            generator_count,
            polynomial_growth: false,
        },
    }
}

/// Estimates `λ(G, L) = lim (1/r) log β_L(r)` from the ball of radius `r_max`.
pub fn entropy_estimate(
    group: &GroupSpec,
    norm: &Norm,
    r_max: f64,
    samples: usize,
    budget: Budget,
) -> Result<EntropyEstimate> {
    if !(r_max > 0.0) || samples < 2 {
        return Err(Error::InvalidArgument(
            "need r_max > 0 and at least two samples".into(),
        ));
    }
    let profile = ball_profile(group, norm, r_max, budget)?;
    Ok(estimate_from_profile(
        &profile,
        r_max,
        samples,
        norm.generator_count(group),
    ))
}

impl EntropyEstimate {
    /// Same schema as [`GrowthTable::to_csv`], at the sampled radii.
    pub fn to_csv(&self) -> String {
        let table = GrowthTable {
            group: String::new(),
            norm: String::new(),
            radii: self.counts.iter().map(|c| c.0).collect(),
            counts: self.counts.iter().map(|c| c.1).collect(),
            exhaustive_up_to: self.diagnostics.exhaustive_up_to,
            generator_count: self.diagnostics.generator_count,
        };
        table.to_csv()
    }
}

/// Pairs `(r, t)` from `radii` with `r + t ≤ r_max` where
/// `β(r+t) ≤ β(r)·β(t)·#S` fails.
pub fn submultiplicativity_violations(
    profile: &BallProfile,
    radii: &[f64],
    gens: usize,
) -> Vec<(f64, f64)> {
    let r_max = profile.exhaustive_up_to;
    let mut bad = Vec::new();
    for &r in radii {
        for &t in radii {
            if r + t > r_max + radius_slack(r_max) {
                continue;
            }
            let lhs = profile.count_at(r + t) as u128;
            let rhs = profile.count_at(r) as u128 * profile.count_at(t) as u128 * gens as u128;
            if lhs > rhs {
                bad.push((r, t));
            }
        }
    }
    bad
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeProductRow {
    pub rho: f64,
    pub r_max: f64,
    pub estimate: EntropyEstimate,
    pub baseline_lambda_g: f64,
}

/// Entropy of `L_G ∗ ρL_H` on `G ∗ H` for each `ρ`, next to `λ̂(G, L_G)`.
#[allow(clippy::too_many_arguments)]
pub fn free_product_limit(
    g: &GroupSpec,
    h: &GroupSpec,
    lg: &Norm,
    lh: &Norm,
    rhos: &[f64],
    r_max: f64,
    samples: usize,
    budget: Budget,
) -> Result<Vec<FreeProductRow>> {
    if !lg.is_generator_norm(g) || !lh.is_generator_norm(h) {
        return Err(Error::InvalidNorm(
            "factor norms must be generator norms".into(),
        ));
    }
    if rhos.iter().any(|&r| !(r > 0.0)) || rhos.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "scales must be positive and increasing".into(),
        ));
    }
    let product = GroupSpec::free_product(vec![g.clone(), h.clone()])?;
    let baseline = entropy_estimate(g, lg, r_max, samples, budget)?;
    rhos.iter()
        .map(|&rho| {
            let norm = Norm::free_product(lg.clone(), rho, lh.clone())?;
            let estimate = entropy_estimate(&product, &norm, r_max, samples, budget)?;
            Ok(FreeProductRow {
                rho,
                r_max,
                estimate,
                baseline_lambda_g: baseline.point_estimate,
            })
        })
        .collect()
}

/// CSV with columns `rho, r_max, entropy_estimate, upper_bound, baseline_lambda_G`.
pub fn free_product_csv(rows: &[FreeProductRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "rho",
        "r_max",
        "entropy_estimate",
        "upper_bound",
        "baseline_lambda_G",
    ])
    .expect("in-memory write");
    for row in rows {
        w.write_record([
            fmt_f64(row.rho),
            fmt_f64(row.r_max),
            fmt_f64(row.estimate.point_estimate),
            row.estimate.upper_bound.map(fmt_f64).unwrap_or_default(),
            fmt_f64(row.baseline_lambda_g),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_balls() {
        let b = Budget::default();
        let f2 = GroupSpec::free(2);
        assert_eq!(ball_count(&f2, &Norm::word(), 2.0, b).unwrap(), 17);
        let z2 = GroupSpec::free_abelian(2);
        assert_eq!(ball_count(&z2, &Norm::word(), 2.0, b).unwrap(), 13);
        let t = GroupSpec::trivial();
        assert_eq!(ball_count(&t, &Norm::word(), 5.0, b).unwrap(), 1);
    }

    #[test]
    fn trivial_group_entropy_is_zero() {
        let t = GroupSpec::trivial();
        let e = entropy_estimate(&t, &Norm::word(), 8.0, 4, Budget::default()).unwrap();
        assert_eq!(e.point_estimate, 0.0);
        assert_eq!(e.upper_bound, Some(0.0));
    }

    #[test]
    fn free_product_ball_matches_cayley_enumeration() {
        // L_G * 1·L_H with word norms is the word norm over S ∪ T.
        let g = GroupSpec::parse("product { abelian 1 ; abelian 1 }").unwrap();
        let fp = Norm::parse("freeprod word 1 word", &g, Budget::default()).unwrap();
        let a = ball_profile(&g, &fp, 6.0, Budget::default()).unwrap();
        let b = ball_profile(&g, &Norm::word(), 6.0, Budget::default()).unwrap();
        assert_eq!(a.norms, b.norms);
    }

    #[test]
    fn budget_flags_entropy_non_exhaustive() {
        let f2 = GroupSpec::free(2);
        let e = entropy_estimate(&f2, &Norm::word(), 12.0, 4, Budget::new(5000)).unwrap();
        assert!(!e.diagnostics.exhaustive);
        assert!(e.diagnostics.exhaustive_up_to < 12.0);
        assert!(matches!(
            ball_count(&f2, &Norm::word(), 12.0, Budget::new(5000)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn growth_csv_schema() {
        let f2 = GroupSpec::free(2);
        let t = growth_table(&f2, &Norm::word(), &[1.0, 2.0], Budget::default()).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "r,beta,log_beta_over_r,lemma73_bound");
        assert!(lines[2].starts_with("2.0,17,"));
        let z = GroupSpec::free(1);
        let geo = Norm::Discrete;
        // discrete norm on an infinite group has no finite ball
        assert!(growth_table(&z, &geo, &[1.0], Budget::default()).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        let f2 = GroupSpec::free(2);
        assert!(entropy_estimate(&f2, &Norm::word(), 0.0, 4, Budget::default()).is_err());
        assert!(entropy_estimate(&f2, &Norm::word(), 4.0, 1, Budget::default()).is_err());
        let z = GroupSpec::free_abelian(1);
        assert!(free_product_limit(
            &z,
            &z,
            &Norm::word(),
            &Norm::word(),
            &[2.0, 1.0],
            4.0,
            3,
            Budget::default()
        )
        .is_err());
    }
}
