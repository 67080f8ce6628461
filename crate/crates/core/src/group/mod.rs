//! Finitely generated groups with a canonical-normal-form word problem.
//!
//! Only classes whose word problem is solved by a normal form are
//! representable: the trivial group, free groups, free abelian groups,
//! groups given by a multiplication table, and free products of these.

mod element;
mod parse;

pub use element::{GroupElement, Syllable};

use crate::error::{Error, Result};
pub(crate) use element::reduce_free;
use rand::Rng;
use std::fmt;

/// Largest order accepted for table groups.
pub const MAX_FINITE_ORDER: usize = 256;

/// Multiplication table of a finite group, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    order: usize,
    table: Vec<u16>,
    identity: u16,
    inverses: Vec<u16>,
}

impl FiniteTable {
    /// `table` is row-major: `table[a * order + b]` is the product `ab`.
    pub fn new(order: usize, table: Vec<usize>, identity: usize) -> Result<Self> {
        if order == 0 || order > MAX_FINITE_ORDER {
            return Err(Error::InvalidGroup(format!(
                "finite order must be in 1..={MAX_FINITE_ORDER}, got {order}"
            )));
        }
        if table.len() != order * order {
            return Err(Error::InvalidGroup(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if identity >= order {
            return Err(Error::InvalidGroup(format!(
                "identity index {identity} out of range"
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::InvalidGroup(format!(
                "table entry {bad} out of range"
            )));
        }
        let m = |a: usize, b: usize| table[a * order + b];
        for a in 0..order {
            if m(identity, a) != a || m(a, identity) != a {
                return Err(Error::InvalidGroup(format!(
                    "{identity} is not a two-sided identity"
                )));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = m(a, b);
                for c in 0..order {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(order);
        for a in 0..order {
            match (0..order).find(|&b| m(a, b) == identity) {
                Some(b) => inverses.push(b as u16),
                None => return Err(Error::InvalidGroup(format!("element {a} has no inverse"))),
            }
        }
        Ok(FiniteTable {
            order,
            table: table.into_iter().map(|x| x as u16).collect(),
            identity: identity as u16,
            inverses,
        })
    }

    /// Cyclic group of the given order, identity at index 0.
    pub fn cyclic(order: usize) -> Result<Self> {
        let table = (0..order * order)
            .map(|i| (i / order + i % order) % order.max(1))
            .collect();
        FiniteTable::new(order, table, 0)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity as usize
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.table[a as usize * self.order + b as usize]
    }

    pub fn inverse(&self, a: u16) -> u16 {
        self.inverses[a as usize]
    }

    pub fn entries(&self) -> impl Iterator<Item = usize> + '_ {
        self.table.iter().map(|&x| x as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Trivial,
    Free(usize),
    FreeAbelian(usize),
    Finite(FiniteTable),
    FreeProduct(Vec<GroupSpec>),
}

/// A finitely generated group together with the symbols that address its
/// generators in element literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    kind: GroupKind,
    labels: Vec<String>,
}

pub(crate) fn label_name(i: usize) -> String {
    let c = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        c.to_string()
    } else {
        format!("{c}{}", i / 26)
    }
}

impl GroupSpec {
    pub fn trivial() -> Self {
        GroupSpec {
            kind: GroupKind::Trivial,
            labels: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self::atomic(GroupKind::Free(rank))
    }

    pub fn free_abelian(rank: usize) -> Self {
        Self::atomic(GroupKind::FreeAbelian(rank))
    }

    pub fn finite(table: FiniteTable) -> Self {
        Self::atomic(GroupKind::Finite(table))
    }

    pub fn cyclic(order: usize) -> Result<Self> {
        Ok(Self::finite(FiniteTable::cyclic(order)?))
    }

    pub fn free_product(factors: Vec<GroupSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup(
                "free product needs at least one factor".into(),
            ));
        }
        let mut g = GroupSpec {
            kind: GroupKind::FreeProduct(factors),
            labels: Vec::new(),
        };
        g.relabel(&mut 0);
        Ok(g)
    }

    fn atomic(kind: GroupKind) -> Self {
        let mut g = GroupSpec {
            kind,
            labels: Vec::new(),
        };
        g.relabel(&mut 0);
        g
    }

    fn relabel(&mut self, next: &mut usize) {
        let mut take = |n: usize| {
            let v: Vec<String> = (*next..*next + n).map(label_name).collect();
            *next += n;
            v
        };
        self.labels = match &mut self.kind {
            GroupKind::Trivial => Vec::new(),
            GroupKind::Free(m) | GroupKind::FreeAbelian(m) => take(*m),
            GroupKind::Finite(_) => take(1),
            GroupKind::FreeProduct(factors) => {
                let mut all = Vec::new();
                for f in factors.iter_mut() {
                    f.relabel(next);
                    all.extend(f.labels.iter().cloned());
                }
                all
            }
        };
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    /// Symbols addressing the generators. A table group has a single symbol
    /// `x`; its elements are written `x.i`.
    pub fn generator_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn factors(&self) -> Option<&[GroupSpec]> {
        match &self.kind {
            GroupKind::FreeProduct(f) => Some(f),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            GroupKind::Trivial => GroupElement::Trivial,
            GroupKind::Free(_) => GroupElement::Free(Vec::new()),
            GroupKind::FreeAbelian(n) => GroupElement::Abelian(vec![0; *n]),
            GroupKind::Finite(t) => GroupElement::Finite(t.identity),
            GroupKind::FreeProduct(_) => GroupElement::Product(Vec::new()),
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        match g {
            GroupElement::Trivial => true,
            GroupElement::Free(w) => w.is_empty(),
            GroupElement::Abelian(v) => v.iter().all(|&x| x == 0),
            GroupElement::Finite(i) => match &self.kind {
                GroupKind::Finite(t) => *i == t.identity,
                _ => false,
            },
            GroupElement::Product(s) => s.is_empty(),
        }
    }

    /// Whether `g` is a well-formed normal form of an element of this group.
    pub fn contains(&self, g: &GroupElement) -> bool {
        match (&self.kind, g) {
            (GroupKind::Trivial, GroupElement::Trivial) => true,
            (GroupKind::Free(m), GroupElement::Free(w)) => {
                w.iter().all(|&x| x != 0 && x.unsigned_abs() as usize <= *m)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupKind::FreeAbelian(n), GroupElement::Abelian(v)) => v.len() == *n,
            (GroupKind::Finite(t), GroupElement::Finite(i)) => (*i as usize) < t.order,
            (GroupKind::FreeProduct(fs), GroupElement::Product(syl)) => {
                syl.iter().all(|s| {
                    s.factor < fs.len()
                        && fs[s.factor].contains(&s.element)
                        && !fs[s.factor].is_identity(&s.element)
                }) && syl.windows(2).all(|p| p[0].factor != p[1].factor)
            }
            _ => false,
        }
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::Structure(format!(
                "{g:?} is not an element of {self}"
            )))
        }
    }

    /// Product `gh` in normal form.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    /// Unchecked product; both arguments must belong to this group.
    pub(crate) fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (&self.kind, g, h) {
            (GroupKind::Trivial, _, _) => GroupElement::Trivial,
            (GroupKind::Free(_), GroupElement::Free(a), GroupElement::Free(b)) => {
                let mut w = Vec::with_capacity(a.len() + b.len());
                w.extend_from_slice(a);
                reduce_free(&mut w, b);
                GroupElement::Free(w)
            }
            (GroupKind::FreeAbelian(_), GroupElement::Abelian(a), GroupElement::Abelian(b)) => {
                GroupElement::Abelian(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupKind::Finite(t), GroupElement::Finite(a), GroupElement::Finite(b)) => {
                GroupElement::Finite(t.mul(*a, *b))
            }
            (GroupKind::FreeProduct(fs), GroupElement::Product(a), GroupElement::Product(b)) => {
                let mut out = a.clone();
                for s in b {
                    match out.last_mut() {
                        Some(last) if last.factor == s.factor => {
                            let f = &fs[s.factor];
                            let m = f.mul(&last.element, &s.element);
                            if f.is_identity(&m) {
                                out.pop();
                            } else {
                                last.element = m;
                            }
                        }
                        _ => out.push(s.clone()),
                    }
                }
                GroupElement::Product(out)
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(self.inv(g))
    }

    pub(crate) fn inv(&self, g: &GroupElement) -> GroupElement {
        match (&self.kind, g) {
            (_, GroupElement::Trivial) => GroupElement::Trivial,
            (_, GroupElement::Free(w)) => GroupElement::Free(w.iter().rev().map(|x| -x).collect()),
            (_, GroupElement::Abelian(v)) => GroupElement::Abelian(v.iter().map(|x| -x).collect()),
            (GroupKind::Finite(t), GroupElement::Finite(a)) => GroupElement::Finite(t.inverse(*a)),
            (GroupKind::FreeProduct(fs), GroupElement::Product(syl)) => GroupElement::Product(
                syl.iter()
                    .rev()
                    .map(|s| Syllable::new(s.factor, fs[s.factor].inv(&s.element)))
                    .collect(),
            ),
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Embeds an element of factor `factor` into this free product.
    pub fn embed(&self, factor: usize, g: GroupElement) -> Result<GroupElement> {
        let fs = self
            .factors()
            .ok_or_else(|| Error::Structure(format!("{self} is not a free product")))?;
        let f = fs
            .get(factor)
            .ok_or_else(|| Error::Structure(format!("factor {factor} out of range")))?;
        f.check(&g)?;
        if f.is_identity(&g) {
            Ok(GroupElement::Product(Vec::new()))
        } else {
            Ok(GroupElement::Product(vec![Syllable::new(factor, g)]))
        }
    }

    /// The standard symmetric generating set: free and abelian generators
    /// with their inverses, every nonidentity element of a table group, and
    /// the union of the factors' sets for a free product.
    pub fn generators(&self) -> Vec<GroupElement> {
        match &self.kind {
            GroupKind::Trivial => Vec::new(),
            GroupKind::Free(m) => (1..=*m as i32)
                .flat_map(|k| [GroupElement::Free(vec![k]), GroupElement::Free(vec![-k])])
                .collect(),
            GroupKind::FreeAbelian(n) => (0..*n)
                .flat_map(|i| {
                    [1, -1].map(|s| {
                        let mut v = vec![0; *n];
                        v[i] = s;
                        GroupElement::Abelian(v)
                    })
                })
                .collect(),
            GroupKind::Finite(t) => (0..t.order as u16)
                .filter(|&i| i != t.identity)
                .map(GroupElement::Finite)
                .collect(),
            GroupKind::FreeProduct(fs) => fs
                .iter()
                .enumerate()
                .flat_map(|(i, f)| {
                    f.generators()
                        .into_iter()
                        .map(move |g| GroupElement::Product(vec![Syllable::new(i, g)]))
                })
                .collect(),
        }
    }

    /// Rank of the torsion-free abelianization `H = H_1(G)/Torsion`.
    pub fn h_rank(&self) -> usize {
        match &self.kind {
            GroupKind::Trivial | GroupKind::Finite(_) => 0,
            GroupKind::Free(m) | GroupKind::FreeAbelian(m) => *m,
            GroupKind::FreeProduct(fs) => fs.iter().map(|f| f.h_rank()).sum(),
        }
    }

    /// Image of `g` in the torsion-free abelianization, as an integer vector
    /// of length [`h_rank`](Self::h_rank). Free products map to the direct sum.
    pub fn abelianize(&self, g: &GroupElement) -> Vec<i64> {
        let mut out = vec![0; self.h_rank()];
        self.abelianize_into(g, &mut out);
        out
    }

    fn abelianize_into(&self, g: &GroupElement, out: &mut [i64]) {
        match (&self.kind, g) {
            (GroupKind::Free(_), GroupElement::Free(w)) => {
                for &x in w {
                    out[x.unsigned_abs() as usize - 1] += x.signum() as i64;
                }
            }
            (GroupKind::FreeAbelian(_), GroupElement::Abelian(v)) => {
                for (o, x) in out.iter_mut().zip(v) {
                    *o += x;
                }
            }
            (GroupKind::FreeProduct(fs), GroupElement::Product(syl)) => {
                let mut offsets = Vec::with_capacity(fs.len());
                let mut acc = 0;
                for f in fs {
                    offsets.push(acc);
                    acc += f.h_rank();
                }
                for s in syl {
                    let f = &fs[s.factor];
                    let lo = offsets[s.factor];
                    f.abelianize_into(&s.element, &mut out[lo..lo + f.h_rank()]);
                }
            }
            _ => {}
        }
    }

    /// Whether every group of this class has polynomial growth (trivial,
    /// finite, or free abelian, including a free product with one such factor).
    pub fn has_polynomial_growth(&self) -> bool {
        match &self.kind {
            GroupKind::Trivial | GroupKind::Finite(_) | GroupKind::FreeAbelian(_) => true,
            GroupKind::Free(m) => *m <= 1,
            GroupKind::FreeProduct(fs) => {
                let nontrivial: Vec<_> = fs.iter().filter(|f| !f.generators().is_empty()).collect();
                let order_two =
                    |f: &GroupSpec| matches!(&f.kind, GroupKind::Finite(t) if t.order == 2);
                match nontrivial.as_slice() {
                    [] => true,
                    [f] => f.has_polynomial_growth(),
                    // infinite dihedral group
                    [f, g] => order_two(f) && order_two(g),
                    _ => false,
                }
            }
        }
    }

    /// Product of `len` uniformly chosen standard generators.
    pub fn random_word<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> GroupElement {
        let gens = self.generators();
        let mut g = self.identity();
        if gens.is_empty() {
            return g;
        }
        for _ in 0..len {
            g = self.mul(&g, &gens[rng.gen_range(0..gens.len())]);
        }
        g
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroupKind::Trivial => write!(f, "trivial"),
            GroupKind::Free(m) => write!(f, "free {m}"),
            GroupKind::FreeAbelian(n) => write!(f, "abelian {n}"),
            GroupKind::Finite(t) => {
                write!(f, "finite {}", t.order)?;
                for x in t.entries() {
                    write!(f, " {x}")?;
                }
                write!(f, " {}", t.identity)
            }
            GroupKind::FreeProduct(fs) => {
                write!(f, "product {{ ")?;
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ; ")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, " }}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_star_z() -> GroupSpec {
        GroupSpec::free_product(vec![GroupSpec::free_abelian(1), GroupSpec::free_abelian(1)])
            .unwrap()
    }

    #[test]
    fn free_group_cancellation() {
        let f2 = GroupSpec::free(2);
        let ab = f2.parse_element("a*b").unwrap();
        let b_inv_a = f2.parse_element("b^-1*a").unwrap();
        assert_eq!(
            f2.multiply(&ab, &b_inv_a).unwrap(),
            GroupElement::Free(vec![1, 1])
        );
    }

    #[test]
    fn abelian_is_componentwise() {
        let z2 = GroupSpec::free_abelian(2);
        let g = GroupElement::Abelian(vec![1, 3]);
        let h = GroupElement::Abelian(vec![2, -1]);
        assert_eq!(
            z2.multiply(&g, &h).unwrap(),
            GroupElement::Abelian(vec![3, 2])
        );
    }

    #[test]
    fn free_product_alternating_form() {
        let g = z_star_z();
        let a2 = g.parse_element("a^2").unwrap();
        let ba = g.parse_element("b*a^-1").unwrap();
        let p = g.multiply(&a2, &ba).unwrap();
        assert_eq!(
            p,
            GroupElement::Product(vec![
                Syllable::new(0, GroupElement::Abelian(vec![2])),
                Syllable::new(1, GroupElement::Abelian(vec![1])),
                Syllable::new(0, GroupElement::Abelian(vec![-1])),
            ])
        );
        assert_eq!(g.format_element(&p), "a^2*b*a^-1");
    }

    #[test]
    fn free_product_cascading_cancellation() {
        let g = z_star_z();
        let x = g.parse_element("a*b").unwrap();
        let y = g.parse_element("b^-1*a").unwrap();
        assert_eq!(g.format_element(&g.multiply(&x, &y).unwrap()), "a^2");
        let z = g.parse_element("b^-1*a^-1").unwrap();
        assert!(g.is_identity(&g.multiply(&x, &z).unwrap()));
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let f2 = GroupSpec::free(2);
        let err = f2.multiply(&GroupElement::Abelian(vec![1, 0]), &f2.identity());
        assert!(matches!(err, Err(Error::Structure(_))));
        assert!(f2
            .multiply(&GroupElement::Free(vec![3]), &f2.identity())
            .is_err());
        assert!(f2
            .multiply(&GroupElement::Free(vec![1, -1]), &f2.identity())
            .is_err());
    }

    #[test]
    fn finite_table_validation() {
        assert!(FiniteTable::cyclic(5).is_ok());
        // not associative: a 3-element "group" where 1*1 = 1
        let bad = vec![0, 1, 2, 1, 1, 0, 2, 0, 1];
        assert!(FiniteTable::new(3, bad, 0).is_err());
        assert!(FiniteTable::new(2, vec![0, 1, 1, 0], 5).is_err());
        assert!(FiniteTable::new(300, vec![], 0).is_err());
    }

    #[test]
    fn symmetric_groups_table_is_accepted() {
        // S3 as permutations of {0,1,2}
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mut table = Vec::new();
        for a in &perms {
            for b in &perms {
                table.push(idx([a[b[0]], a[b[1]], a[b[2]]]));
            }
        }
        let t = FiniteTable::new(6, table, 0).unwrap();
        let s3 = GroupSpec::finite(t);
        let x = GroupElement::Finite(1);
        let y = GroupElement::Finite(2);
        assert_ne!(s3.mul(&x, &y), s3.mul(&y, &x));
        assert_eq!(s3.generators().len(), 5);
    }

    #[test]
    fn abelianization_of_free_product() {
        let g = GroupSpec::free_product(vec![
            GroupSpec::free(2),
            GroupSpec::cyclic(2).unwrap(),
            GroupSpec::free_abelian(1),
        ])
        .unwrap();
        assert_eq!(g.h_rank(), 3);
        let e = g.parse_element("a*b^2*c.1*d^-3*a").unwrap();
        assert_eq!(g.abelianize(&e), vec![2, 2, -3]);
    }

    #[test]
    fn polynomial_growth_classes() {
        assert!(GroupSpec::free_abelian(3).has_polynomial_growth());
        assert!(GroupSpec::free(1).has_polynomial_growth());
        assert!(!GroupSpec::free(2).has_polynomial_growth());
        assert!(!z_star_z().has_polynomial_growth());
    }
}
