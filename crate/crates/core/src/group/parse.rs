//! Text forms: group declarations and element literals.
//!
//! Group declarations:
//!
//! ```text
//! trivial
//! free <m>
//! abelian <n>
//! finite <k> <k*k row-major table entries> <identity-index>
//! product { <spec> ; <spec> ; ... }
//! ```
//!
//! Element literals are `*`-separated powers of generator symbols, e.g.
//! `a^2*b*a^-1`; `1` is the identity and table-group elements are `x.i`.

use super::{label_name, FiniteTable, GroupElement, GroupKind, GroupSpec, Syllable};
use crate::error::{Error, Result};

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_whitespace() || matches!(ch, '{' | '}' | ';') {
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

struct SpecParser<'a> {
    tokens: &'a [String],
    pos: usize,
    line: usize,
}

impl SpecParser<'_> {
    fn next(&mut self) -> Result<&str> {
        let t = self
            .tokens
            .get(self.pos)
            .ok_or_else(|| Error::parse(self.line, "unexpected end of group spec"))?;
        self.pos += 1;
        Ok(t)
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let line = self.line;
        let t = self.next()?;
        t.parse()
            .map_err(|_| Error::parse(line, format!("expected {what}, found `{t}`")))
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let line = self.line;
        let head = self.next()?.to_string();
        match head.as_str() {
            "trivial" => Ok(GroupSpec::trivial()),
            "free" => Ok(GroupSpec::free(self.number("rank")?)),
            "abelian" => Ok(GroupSpec::free_abelian(self.number("rank")?)),
            "finite" => {
                let k = self.number("order")?;
                if k == 0 || k > super::MAX_FINITE_ORDER {
                    return Err(Error::parse(line, format!("finite order {k} out of range")));
                }
                let mut table = Vec::with_capacity(k * k);
                for _ in 0..k * k {
                    table.push(self.number("table entry")?);
                }
                let identity = self.number("identity index")?;
                let t = FiniteTable::new(k, table, identity).map_err(|e| match e {
                    Error::InvalidGroup(m) => Error::parse(line, m),
                    other => other,
                })?;
                Ok(GroupSpec::finite(t))
            }
            "product" => {
                if self.next()? != "{" {
                    return Err(Error::parse(line, "expected `{` after `product`"));
                }
                let mut factors = vec![self.spec()?];
                loop {
                    match self.next()? {
                        ";" => factors.push(self.spec()?),
                        "}" => break,
                        t => {
                            return Err(Error::parse(
                                line,
                                format!("expected `;` or `}}`, found `{t}`"),
                            ))
                        }
                    }
                }
                GroupSpec::free_product(factors)
            }
            other => Err(Error::parse(line, format!("unknown group kind `{other}`"))),
        }
    }
}

impl GroupSpec {
    /// Parses a group declaration.
    pub fn parse(text: &str) -> Result<GroupSpec> {
        Self::parse_at_line(text, 1)
    }

    pub(crate) fn parse_at_line(text: &str, line: usize) -> Result<GroupSpec> {
        let tokens = tokenize(text);
        let mut p = SpecParser {
            tokens: &tokens,
            pos: 0,
            line,
        };
        let spec = p.spec()?;
        if p.pos != tokens.len() {
            return Err(Error::parse(
                line,
                format!("trailing input `{}`", tokens[p.pos]),
            ));
        }
        Ok(spec)
    }

    /// Generator (or table element, when `index` is set) addressed by the
    /// label with position `label` in [`generator_labels`](Self::generator_labels).
    fn atom(&self, label: usize, index: Option<usize>) -> Result<GroupElement> {
        let bad = |m: String| Error::Structure(m);
        match &self.kind {
            GroupKind::Free(m) if label < *m && index.is_none() => {
                Ok(GroupElement::Free(vec![label as i32 + 1]))
            }
            GroupKind::FreeAbelian(n) if label < *n && index.is_none() => {
                let mut v = vec![0; *n];
                v[label] = 1;
                Ok(GroupElement::Abelian(v))
            }
            GroupKind::Finite(t) if label == 0 => match index {
                Some(i) if i < t.order() => Ok(GroupElement::Finite(i as u16)),
                Some(i) => Err(bad(format!("table element {i} out of range"))),
                None => Err(bad("table group elements are written `x.i`".into())),
            },
            GroupKind::FreeProduct(fs) => {
                let mut offset = 0;
                for (i, f) in fs.iter().enumerate() {
                    let n = f.labels.len();
                    if label < offset + n {
                        let inner = f.atom(label - offset, index)?;
                        return self.embed(i, inner);
                    }
                    offset += n;
                }
                Err(bad(format!("label index {label} out of range")))
            }
            _ => Err(bad(format!("no generator {} in {self}", label_name(label)))),
        }
    }

    fn power(&self, g: &GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inv(g) } else { g.clone() };
        let mut out = self.identity();
        for _ in 0..k.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        out
    }

    /// Parses an element literal such as `a^2*b*a^-1`, `c.1` or `1`.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        let mut g = self.identity();
        if text == "1" || text.is_empty() {
            return Ok(g);
        }
        for factor in text.split('*') {
            let err = || Error::Structure(format!("bad element literal `{factor}` in `{text}`"));
            let (atom, exp) = match factor.split_once('^') {
                Some((a, e)) => (a, e.parse::<i64>().map_err(|_| err())?),
                None => (factor, 1),
            };
            if atom == "1" {
                continue;
            }
            let (name, index) = match atom.split_once('.') {
                Some((n, i)) => (n, Some(i.parse::<usize>().map_err(|_| err())?)),
                None => (atom, None),
            };
            let label = self.labels.iter().position(|l| l == name).ok_or_else(err)?;
            let a = self.atom(label, index)?;
            g = self.mul(&g, &self.power(&a, exp));
        }
        Ok(g)
    }

    /// Inverse of [`parse_element`](Self::parse_element).
    pub fn format_element(&self, g: &GroupElement) -> String {
        let mut parts = Vec::new();
        self.format_into(g, &mut parts);
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn format_into(&self, g: &GroupElement, parts: &mut Vec<String>) {
        let pow = |name: &str, k: i64| {
            if k == 1 {
                name.to_string()
            } else {
                format!("{name}^{k}")
            }
        };
        match (&self.kind, g) {
            (GroupKind::Free(_), GroupElement::Free(w)) => {
                let mut i = 0;
                while i < w.len() {
                    let mut j = i;
                    while j < w.len() && w[j] == w[i] {
                        j += 1;
                    }
                    let name = &self.labels[w[i].unsigned_abs() as usize - 1];
                    parts.push(pow(name, (j - i) as i64 * w[i].signum() as i64));
                    i = j;
                }
            }
            (GroupKind::FreeAbelian(_), GroupElement::Abelian(v)) => {
                for (name, &k) in self.labels.iter().zip(v) {
                    if k != 0 {
                        parts.push(pow(name, k));
                    }
                }
            }
            (GroupKind::Finite(t), GroupElement::Finite(i)) => {
                if *i as usize != t.identity() {
                    parts.push(format!("{}.{i}", self.labels[0]));
                }
            }
            (GroupKind::FreeProduct(fs), GroupElement::Product(syl)) => {
                for Syllable { factor, element } in syl {
                    fs[*factor].format_into(element, parts);
                }
            }
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        for text in [
            "trivial",
            "free 2",
            "abelian 3",
            "finite 2 0 1 1 0 0",
            "product { abelian 1 ; abelian 1 }",
            "product { free 2 ; product { finite 2 0 1 1 0 0 ; abelian 1 } }",
        ] {
            let g = GroupSpec::parse(text).unwrap();
            assert_eq!(g.to_string(), text);
        }
    }

    #[test]
    fn nested_product_labels_are_global() {
        let g = GroupSpec::parse("product { free 2 ; product { finite 2 0 1 1 0 0 ; abelian 1 } }")
            .unwrap();
        assert_eq!(g.generator_labels(), ["a", "b", "c", "d"]);
        let e = g.parse_element("a*c.1*d^2*b").unwrap();
        assert_eq!(g.format_element(&e), "a*c.1*d^2*b");
    }

    #[test]
    fn parse_errors_carry_line() {
        match GroupSpec::parse_at_line("fre 2", 7) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
        assert!(GroupSpec::parse("product { free 1 ").is_err());
        assert!(GroupSpec::parse("finite 2 0 1 1 1 0").is_err());
        assert!(GroupSpec::parse("free 2 junk").is_err());
    }

    #[test]
    fn element_literals() {
        let f2 = GroupSpec::free(2);
        assert_eq!(f2.parse_element("1").unwrap(), f2.identity());
        assert_eq!(f2.parse_element("a*a^-1").unwrap(), f2.identity());
        assert_eq!(
            f2.parse_element("a^3").unwrap(),
            GroupElement::Free(vec![1, 1, 1])
        );
        assert!(f2.parse_element("z").is_err());
        assert!(f2.parse_element("a.1").is_err());
        let z2 = GroupSpec::cyclic(2).unwrap();
        assert_eq!(z2.parse_element("a.1").unwrap(), GroupElement::Finite(1));
        assert_eq!(z2.parse_element("a.1^2").unwrap(), GroupElement::Finite(0));
    }

    #[test]
    fn many_generators_get_distinct_labels() {
        let g = GroupSpec::free(30);
        let labels = g.generator_labels();
        let set: std::collections::HashSet<_> = labels.iter().collect();
        assert_eq!(set.len(), 30);
        let e = g.parse_element("d1^2*a").unwrap();
        assert_eq!(g.format_element(&e), "d1^2*a");
    }
}
