//! Norms on finitely generated groups: word norms, generator norms,
//! free-product norms and norms induced by a covering-space metric.

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind, GroupSpec, Syllable};
use crate::search::{BallProfile, Budget, CayleySearch};
use std::fmt;
use std::sync::Arc;

/// Norm evaluated through a geometric model, e.g. `γ ↦ d(x̃, γx̃)` in a
/// covering space.
pub trait GeometricNorm: Send + Sync + fmt::Debug {
    fn eval(&self, g: &GroupElement, budget: Budget) -> Result<f64>;
    fn ball(&self, radius: f64, budget: Budget) -> Result<BallProfile>;
    fn describe(&self) -> String;
}

/// Generator norm `N_{L,S}(g) = inf Σ L(s_i)` over factorizations `g = s_1⋯s_n`.
#[derive(Clone, Debug)]
pub struct GeneratorNorm {
    base: Box<Norm>,
    gens: Vec<GroupElement>,
    weights: Vec<f64>,
}

impl GeneratorNorm {
    pub fn base(&self) -> &Norm {
        &self.base
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

#[derive(Clone, Debug)]
pub enum Norm {
    /// Word length over `gens`, or over the standard generators when `None`.
    Word {
        gens: Option<Vec<GroupElement>>,
    },
    /// `1` on every nontrivial element.
    Discrete,
    Generator(GeneratorNorm),
    /// `Σ L_G(γ_i) + ρ·Σ L_H(h_j)` over the alternating normal form of a
    /// two-factor free product.
    FreeProduct {
        left: Box<Norm>,
        rho: f64,
        right: Box<Norm>,
    },
    Geometric(Arc<dyn GeometricNorm>),
}

fn symmetrize(group: &GroupSpec, gens: Vec<GroupElement>) -> Result<Vec<GroupElement>> {
    let mut out: Vec<GroupElement> = Vec::with_capacity(2 * gens.len());
    for s in gens {
        if !group.contains(&s) {
            return Err(Error::Structure(format!(
                "{s:?} is not an element of {group}"
            )));
        }
        if group.is_identity(&s) {
            return Err(Error::InvalidNorm(
                "generating set must exclude the identity".into(),
            ));
        }
        let inv = group.inv(&s);
        for x in [s, inv] {
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out.sort();
    Ok(out)
}

fn two_factors(group: &GroupSpec) -> Result<(&GroupSpec, &GroupSpec)> {
    match group.factors() {
        Some([g, h]) => Ok((g, h)),
        _ => Err(Error::InvalidNorm(format!(
            "free-product norm needs a two-factor free product, got {group}"
        ))),
    }
}

impl Norm {
    pub fn word() -> Norm {
        Norm::Word { gens: None }
    }

    /// Word norm over a custom generating set, closed under inverses.
    pub fn word_on(group: &GroupSpec, gens: Vec<GroupElement>) -> Result<Norm> {
        Ok(Norm::Word {
            gens: Some(symmetrize(group, gens)?),
        })
    }

    /// `N_{base,S}`; `gens` is closed under inverses and the weights
    /// `base(s)` are evaluated once here.
    pub fn generator(
        group: &GroupSpec,
        base: Norm,
        gens: Vec<GroupElement>,
        budget: Budget,
    ) -> Result<Norm> {
        base.validate(group)?;
        let gens = symmetrize(group, gens)?;
        if gens.is_empty() {
            return Err(Error::InvalidNorm("generating set is empty".into()));
        }
        let weights = gens
            .iter()
            .map(|s| base.eval(group, s, budget))
            .collect::<Result<Vec<_>>>()?;
        Ok(Norm::Generator(GeneratorNorm {
            base: Box::new(base),
            gens,
            weights,
        }))
    }

    /// Generator norm with precomputed weights, e.g. read off a cover expansion.
    pub fn generator_with_weights(
        group: &GroupSpec,
        base: Norm,
        gens: Vec<GroupElement>,
        weights: Vec<f64>,
    ) -> Result<Norm> {
        if gens.len() != weights.len() || gens.is_empty() {
            return Err(Error::InvalidNorm(
                "need one positive weight per generator".into(),
            ));
        }
        for (s, w) in gens.iter().zip(&weights) {
            if !group.contains(s) || group.is_identity(s) || !(*w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidNorm(format!(
                    "bad generator {s:?} with weight {w}"
                )));
            }
        }
        let mut pairs: Vec<_> = gens.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (gens, weights): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Ok(Norm::Generator(GeneratorNorm {
            base: Box::new(base),
            gens,
            weights,
        }))
    }

    pub fn free_product(left: Norm, rho: f64, right: Norm) -> Result<Norm> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidNorm(format!(
                "scale must be positive, got {rho}"
            )));
        }
        Ok(Norm::FreeProduct {
            left: Box::new(left),
            rho,
            right: Box::new(right),
        })
    }

    pub fn geometric(inner: Arc<dyn GeometricNorm>) -> Norm {
        Norm::Geometric(inner)
    }

    /// Checks that this norm is defined on `group`.
    pub fn validate(&self, group: &GroupSpec) -> Result<()> {
        match self {
            Norm::Word { gens: Some(gens) } => {
                if gens.iter().all(|s| group.contains(s)) {
                    Ok(())
                } else {
                    Err(Error::Structure(format!(
                        "generators are not elements of {group}"
                    )))
                }
            }
            Norm::Generator(n) => {
                if n.gens.iter().all(|s| group.contains(s)) {
                    n.base.validate(group)
                } else {
                    Err(Error::Structure(format!(
                        "generators are not elements of {group}"
                    )))
                }
            }
            Norm::FreeProduct { left, right, .. } => {
                let (g, h) = two_factors(group)?;
                left.validate(g)?;
                right.validate(h)
            }
            _ => Ok(()),
        }
    }

    /// `L(g)`.
    pub fn eval(&self, group: &GroupSpec, g: &GroupElement, budget: Budget) -> Result<f64> {
        if !group.contains(g) {
            return Err(Error::Structure(format!(
                "{g:?} is not an element of {group}"
            )));
        }
        match self {
            Norm::Word { gens: None } => Ok(standard_word_length(group, g) as f64),
            Norm::Word { gens: Some(gens) } => {
                let w = vec![1.0; gens.len()];
                CayleySearch {
                    group,
                    gens,
                    weights: &w,
                }
                .distance(g, budget)
            }
            Norm::Discrete => Ok(if group.is_identity(g) { 0.0 } else { 1.0 }),
            Norm::Generator(n) => CayleySearch {
                group,
                gens: &n.gens,
                weights: &n.weights,
            }
            .distance(g, budget),
            Norm::FreeProduct { left, rho, right } => {
                let (gf, hf) = two_factors(group)?;
                let GroupElement::Product(syl) = g else {
                    unreachable!("checked above")
                };
                let (mut l, mut r) = (0.0, 0.0);
                for Syllable { factor, element } in syl {
                    if *factor == 0 {
                        l += left.eval(gf, element, budget)?;
                    } else {
                        r += right.eval(hf, element, budget)?;
                    }
                }
                Ok(l + rho * r)
            }
            Norm::Geometric(inner) => inner.eval(g, budget),
        }
    }

    /// The weighted symmetric generating set `(S, L(s))` when this is a
    /// generator norm. A free product of generator norms is the generator
    /// norm over `S ∪ T` with weights `L_G(s)` and `ρ·L_H(t)`.
    pub fn weighted_generators(&self, group: &GroupSpec) -> Option<(Vec<GroupElement>, Vec<f64>)> {
        match self {
            Norm::Word { gens: None } => {
                let gens = group.generators();
                let w = vec![1.0; gens.len()];
                Some((gens, w))
            }
            Norm::Word { gens: Some(gens) } => Some((gens.clone(), vec![1.0; gens.len()])),
            Norm::Generator(n) => Some((n.gens.clone(), n.weights.clone())),
            Norm::FreeProduct { left, rho, right } => {
                let (gf, hf) = two_factors(group).ok()?;
                let (s, ws) = left.weighted_generators(gf)?;
                let (t, wt) = right.weighted_generators(hf)?;
                let mut gens = Vec::new();
                let mut weights = Vec::new();
                for (x, w) in s.into_iter().zip(ws) {
                    gens.push(group.embed(0, x).ok()?);
                    weights.push(w);
                }
                for (x, w) in t.into_iter().zip(wt) {
                    gens.push(group.embed(1, x).ok()?);
                    weights.push(rho * w);
                }
                Some((gens, weights))
            }
            Norm::Discrete => match group.kind() {
                GroupKind::Finite(_) | GroupKind::Trivial => {
                    let gens = group.generators();
                    let w = vec![1.0; gens.len()];
                    Some((gens, w))
                }
                _ => None,
            },
            Norm::Geometric(_) => None,
        }
    }

    /// `#S` for generator norms.
    pub fn generator_count(&self, group: &GroupSpec) -> Option<usize> {
        self.weighted_generators(group).map(|(s, _)| s.len())
    }

    pub fn is_generator_norm(&self, group: &GroupSpec) -> bool {
        self.generator_count(group).is_some()
    }
}

/// Word length over the standard generators, read off the normal form.
pub fn standard_word_length(group: &GroupSpec, g: &GroupElement) -> u64 {
    match (group.kind(), g) {
        (_, GroupElement::Trivial) => 0,
        (_, GroupElement::Free(w)) => w.len() as u64,
        (_, GroupElement::Abelian(v)) => v.iter().map(|x| x.unsigned_abs()).sum(),
        (GroupKind::Finite(_), GroupElement::Finite(_)) => u64::from(!group.is_identity(g)),
        (GroupKind::FreeProduct(fs), GroupElement::Product(syl)) => syl
            .iter()
            .map(|s| standard_word_length(&fs[s.factor], &s.element))
            .sum(),
        _ => 0,
    }
}

// ---------------------------------------------------------------------------
// Text form:
//   word | word [ s1 s2 ... ] | one | genorm <norm> [ s1 s2 ... ]
//   | freeprod <norm> <rho> <norm> | ( <norm> )

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_whitespace() || matches!(ch, '[' | ']' | '(' | ')') {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                out.push(ch.to_string());
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

struct NormParser<'a> {
    tokens: &'a [String],
    pos: usize,
    budget: Budget,
}

impl NormParser<'_> {
    fn err(&self, m: impl Into<String>) -> Error {
        Error::parse(1, m)
    }

    fn next(&mut self) -> Result<String> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.err("unexpected end of norm spec"))?;
        self.pos += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn element_list(&mut self, group: &GroupSpec) -> Result<Vec<GroupElement>> {
        if self.next()? != "[" {
            return Err(self.err("expected `[` before generator list"));
        }
        let mut gens = Vec::new();
        loop {
            let t = self.next()?;
            if t == "]" {
                return Ok(gens);
            }
            gens.push(group.parse_element(&t)?);
        }
    }

    /// `bare_list` allows `word [..]`; a `genorm` base must parenthesize it.
    fn norm(&mut self, group: &GroupSpec, bare_list: bool) -> Result<Norm> {
        let head = self.next()?;
        match head.as_str() {
            "(" => {
                let n = self.norm(group, true)?;
                if self.next()? != ")" {
                    return Err(self.err("expected `)`"));
                }
                Ok(n)
            }
            "word" => {
                if bare_list && self.peek() == Some("[") {
                    let gens = self.element_list(group)?;
                    Norm::word_on(group, gens)
                } else {
                    Ok(Norm::word())
                }
            }
            "one" => Ok(Norm::Discrete),
            "genorm" => {
                let base = self.norm(group, false)?;
                let gens = self.element_list(group)?;
                Norm::generator(group, base, gens, self.budget)
            }
            "freeprod" => {
                let (g, h) = two_factors(group)?;
                let left = self.norm(g, true)?;
                let rho_tok = self.next()?;
                let rho: f64 = rho_tok
                    .parse()
                    .map_err(|_| self.err(format!("bad scale `{rho_tok}`")))?;
                let right = self.norm(h, true)?;
                Norm::free_product(left, rho, right)
            }
            other => Err(self.err(format!("unknown norm `{other}`"))),
        }
    }
}

impl Norm {
    /// Parses a norm declaration relative to the group it is defined on.
    pub fn parse(text: &str, group: &GroupSpec, budget: Budget) -> Result<Norm> {
        let tokens = tokenize(text);
        let mut p = NormParser {
            tokens: &tokens,
            pos: 0,
            budget,
        };
        let n = p.norm(group, true)?;
        if p.pos != tokens.len() {
            return Err(Error::parse(
                1,
                format!("trailing input `{}`", tokens[p.pos]),
            ));
        }
        n.validate(group)?;
        Ok(n)
    }

    /// Canonical text form; geometric norms render their description.
    pub fn describe(&self, group: &GroupSpec) -> String {
        let list = |gens: &[GroupElement]| {
            let items: Vec<String> = gens.iter().map(|g| group.format_element(g)).collect();
            format!("[ {} ]", items.join(" "))
        };
        match self {
            Norm::Word { gens: None } => "word".into(),
            Norm::Word { gens: Some(g) } => format!("word {}", list(g)),
            Norm::Discrete => "one".into(),
            Norm::Generator(n) => {
                format!("genorm ( {} ) {}", n.base.describe(group), list(&n.gens))
            }
            Norm::FreeProduct { left, rho, right } => match two_factors(group) {
                Ok((g, h)) => format!(
                    "freeprod ( {} ) {rho:?} ( {} )",
                    left.describe(g),
                    right.describe(h)
                ),
                Err(_) => "freeprod".into(),
            },
            Norm::Geometric(inner) => inner.describe(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz() -> GroupSpec {
        GroupSpec::parse("product { abelian 1 ; abelian 1 }").unwrap()
    }

    #[test]
    fn word_norm_on_free_group() {
        let f2 = GroupSpec::free(2);
        let g = f2.parse_element("a*b*a^-1").unwrap();
        assert_eq!(Norm::word().eval(&f2, &g, Budget::default()).unwrap(), 3.0);
        assert_eq!(
            Norm::word()
                .eval(&f2, &f2.identity(), Budget::default())
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn free_product_norm_reads_normal_form() {
        let g = zz();
        let n = Norm::parse("freeprod word 2 word", &g, Budget::default()).unwrap();
        let aba = g.parse_element("a*b*a").unwrap();
        assert_eq!(n.eval(&g, &aba, Budget::default()).unwrap(), 4.0);
        assert_eq!(n.eval(&g, &g.identity(), Budget::default()).unwrap(), 0.0);
        assert_eq!(n.generator_count(&g), Some(4));
    }

    #[test]
    fn generator_norm_weights_come_from_base() {
        let f2 = GroupSpec::free(2);
        let n = Norm::parse("genorm word [ a b*a ]", &f2, Budget::default()).unwrap();
        let Norm::Generator(gn) = &n else { panic!() };
        assert_eq!(gn.generators().len(), 4);
        let b = f2.parse_element("b").unwrap();
        let ba = f2.parse_element("b*a").unwrap();
        assert_eq!(n.eval(&f2, &ba, Budget::default()).unwrap(), 2.0);
        assert_eq!(n.eval(&f2, &b, Budget::default()).unwrap(), 3.0);
        // {a, b^2} does not generate b: the search can only run out of budget.
        let sub = Norm::parse("genorm word [ a b^2 ]", &f2, Budget::default()).unwrap();
        assert!(matches!(
            sub.eval(&f2, &b, Budget::new(2000)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn generator_norm_over_discrete_base_is_word_norm() {
        let z2 = GroupSpec::free_abelian(2);
        let base = Norm::Discrete;
        let gens = vec![
            z2.parse_element("a").unwrap(),
            z2.parse_element("b").unwrap(),
        ];
        let n = Norm::generator(&z2, base, gens, Budget::default()).unwrap();
        let g = z2.parse_element("a^3*b^-2").unwrap();
        assert_eq!(n.eval(&z2, &g, Budget::default()).unwrap(), 5.0);
        assert_eq!(Norm::word().eval(&z2, &g, Budget::default()).unwrap(), 5.0);
    }

    #[test]
    fn rejects_bad_specs() {
        let f2 = GroupSpec::free(2);
        assert!(Norm::parse("freeprod word 1 word", &f2, Budget::default()).is_err());
        assert!(Norm::parse("genorm word [ 1 ]", &f2, Budget::default()).is_err());
        assert!(Norm::parse("nope", &f2, Budget::default()).is_err());
        assert!(Norm::parse("freeprod word -1 word", &zz(), Budget::default()).is_err());
    }

    #[test]
    fn describe_round_trips() {
        let g = zz();
        for text in [
            "word",
            "freeprod ( word ) 2.0 ( genorm ( word ) [ b^-2 b^2 ] )",
        ] {
            let n = Norm::parse(text, &g, Budget::default()).unwrap();
            let again = Norm::parse(&n.describe(&g), &g, Budget::default()).unwrap();
            assert_eq!(again.describe(&g), n.describe(&g));
        }
    }
}
