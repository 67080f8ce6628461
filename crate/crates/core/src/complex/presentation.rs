//! Fundamental-group presentations and homomorphisms to target groups.
//!
//! Generators are the chords of a breadth-first spanning tree rooted at
//! the basepoint; each triangle contributes its boundary word as a relator.
//!
//! Homomorphism files:
//!
//! ```text
//! target <group declaration>
//! map <edge-id> <element>
//! ```
//!
//! A `map` line labels the edge traversed from its first to its second
//! endpoint; unlisted edges carry the identity.

use super::MetricComplex;
use crate::error::{Error, Result};
use crate::group::{reduce_free, GroupElement, GroupSpec};
use std::collections::VecDeque;
use std::fmt::Write as _;

/// Images of the chord generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Phi {
    pub target: GroupSpec,
    pub images: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiOneData {
    /// Whether each edge lies in the spanning tree.
    pub tree: Vec<bool>,
    /// Tree edge joining each vertex to its parent; `None` at the root.
    pub parent: Vec<Option<usize>>,
    /// Edge index of each generator.
    pub chords: Vec<usize>,
    pub chord_of_edge: Vec<Option<usize>>,
    /// Freely reduced boundary word of each triangle; letter `±(i+1)` is
    /// chord `i` to the power `±1`.
    pub relators: Vec<Vec<i32>>,
    pub phi: Option<Phi>,
}

impl PiOneData {
    pub fn new(x: &MetricComplex) -> Self {
        let n = x.vertex_count();
        let adj = x.vertex_adjacency();
        let mut tree = vec![false; x.edges().len()];
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[x.base()] = true;
        let mut queue = VecDeque::from([x.base()]);
        while let Some(v) = queue.pop_front() {
            let mut out: Vec<(usize, usize)> = adj[v].clone();
            out.sort_by_key(|&(_, e)| e);
            for (w, e) in out {
                if !seen[w] {
                    seen[w] = true;
                    tree[e] = true;
                    parent[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        let mut chords = Vec::new();
        let mut chord_of_edge = vec![None; tree.len()];
        for (e, &t) in tree.iter().enumerate() {
            if !t {
                chord_of_edge[e] = Some(chords.len());
                chords.push(e);
            }
        }
        let mut p = PiOneData {
            tree,
            parent,
            chords,
            chord_of_edge,
            relators: Vec::new(),
            phi: None,
        };
        p.relators = x
            .triangles()
            .iter()
            .map(|t| {
                let mut w = Vec::new();
                for k in 0..3 {
                    reduce_free(&mut w, &p.edge_word(t.edges[k], t.forward[k]));
                }
                w
            })
            .collect();
        p
    }

    pub fn generator_count(&self) -> usize {
        self.chords.len()
    }

    /// Word of an edge traversal: a chord letter, or empty on the tree.
    pub fn edge_word(&self, edge: usize, forward: bool) -> Vec<i32> {
        match self.chord_of_edge[edge] {
            Some(c) if forward => vec![c as i32 + 1],
            Some(c) => vec![-(c as i32 + 1)],
            None => Vec::new(),
        }
    }

    /// The free group on the chords.
    pub fn free_group(&self) -> GroupSpec {
        GroupSpec::free(self.chords.len())
    }

    pub fn relator_elements(&self) -> Vec<GroupElement> {
        self.relators
            .iter()
            .map(|w| GroupElement::Free(w.clone()))
            .collect()
    }

    pub fn phi(&self) -> Result<&Phi> {
        self.phi.as_ref().ok_or(Error::MissingPhi)
    }

    /// Image of a word in the chord letters.
    pub fn image_of_word(&self, word: &[i32]) -> Result<GroupElement> {
        let phi = self.phi()?;
        let mut g = phi.target.identity();
        for &l in word {
            let a = &phi.images[l.unsigned_abs() as usize - 1];
            let a = if l > 0 { a.clone() } else { phi.target.inv(a) };
            g = phi.target.mul(&g, &a);
        }
        Ok(g)
    }

    /// Attaches chord images after checking membership and every relator.
    pub fn attach_phi(
        &mut self,
        x: &MetricComplex,
        target: GroupSpec,
        images: Vec<GroupElement>,
    ) -> Result<()> {
        if images.len() != self.chords.len() {
            return Err(Error::InvalidArgument(format!(
                "{} chord images given, {} chords present",
                images.len(),
                self.chords.len()
            )));
        }
        if let Some(g) = images.iter().find(|g| !target.contains(g)) {
            return Err(Error::Structure(format!(
                "{g:?} is not an element of {target}"
            )));
        }
        self.phi = Some(Phi { target, images });
        for (t, r) in self.relators.iter().enumerate() {
            let img = self.image_of_word(r)?;
            let phi = self.phi.as_ref().expect("just attached");
            if !phi.target.is_identity(&img) {
                let image = phi.target.format_element(&img);
                self.phi = None;
                return Err(Error::RelatorViolation {
                    triangle: x.triangle_name(t),
                    image,
                });
            }
        }
        Ok(())
    }

    /// Label of each edge, from `ends[0]` to `ends[1]`, in the tree gauge.
    pub fn edge_labels(&self) -> Result<Vec<GroupElement>> {
        let phi = self.phi()?;
        Ok(self
            .chord_of_edge
            .iter()
            .map(|c| c.map_or_else(|| phi.target.identity(), |c| phi.images[c].clone()))
            .collect())
    }

    /// Presentation of `x` with the homomorphism determined by arbitrary
    /// edge labels, gauge-fixed to the spanning tree.
    pub fn from_edge_labels(
        x: &MetricComplex,
        target: GroupSpec,
        labels: &[GroupElement],
    ) -> Result<Self> {
        let mut p = PiOneData::new(x);
        if labels.len() != x.edges().len() {
            return Err(Error::InvalidArgument("one label per edge required".into()));
        }
        if let Some(g) = labels.iter().find(|g| !target.contains(g)) {
            return Err(Error::Structure(format!(
                "{g:?} is not an element of {target}"
            )));
        }
        let pot = p.potentials(x, &target, labels);
        let images = p
            .chords
            .iter()
            .map(|&e| {
                let [u, v] = x.edges()[e].ends;
                target.mul(&target.mul(&pot[u], &labels[e]), &target.inv(&pot[v]))
            })
            .collect();
        p.attach_phi(x, target, images)?;
        Ok(p)
    }

    /// Product of labels along the tree path from the root to each vertex.
    fn potentials(
        &self,
        x: &MetricComplex,
        target: &GroupSpec,
        labels: &[GroupElement],
    ) -> Vec<GroupElement> {
        let n = x.vertex_count();
        let mut pot: Vec<Option<GroupElement>> = vec![None; n];
        pot[x.base()] = Some(target.identity());
        fn resolve(
            v: usize,
            x: &MetricComplex,
            parent: &[Option<usize>],
            target: &GroupSpec,
            labels: &[GroupElement],
            pot: &mut Vec<Option<GroupElement>>,
        ) -> GroupElement {
            let mut chain = vec![v];
            while pot[*chain.last().unwrap()].is_none() {
                let w = *chain.last().unwrap();
                let e = parent[w].expect("connected");
                let ends = x.edges()[e].ends;
                chain.push(if ends[0] == w { ends[1] } else { ends[0] });
            }
            while chain.len() > 1 {
                let w = chain[chain.len() - 2];
                let up = chain[chain.len() - 1];
                let e = parent[w].expect("connected");
                let step = if x.edges()[e].ends[0] == up {
                    labels[e].clone()
                } else {
                    target.inv(&labels[e])
                };
                pot[w] = Some(target.mul(pot[up].as_ref().unwrap(), &step));
                chain.pop();
            }
            pot[v].clone().unwrap()
        }
        (0..n)
            .map(|v| resolve(v, x, &self.parent, target, labels, &mut pot))
            .collect()
    }

    /// Parses a homomorphism file for `x`.
    pub fn parse_phi(x: &MetricComplex, text: &str) -> Result<Self> {
        let mut target = None;
        let mut maps: Vec<(usize, i64, String)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            match head {
                "target" if target.is_none() => {
                    target = Some(GroupSpec::parse_at_line(rest, line)?)
                }
                "target" => return Err(Error::parse(line, "duplicate target")),
                "map" => {
                    let mut f = rest.split_whitespace();
                    let (Some(id), Some(elt), None) = (f.next(), f.next(), f.next()) else {
                        return Err(Error::parse(line, "expected `map <edge-id> <element>`"));
                    };
                    let id = id
                        .parse::<i64>()
                        .map_err(|_| Error::parse(line, format!("bad edge id `{id}`")))?;
                    maps.push((line, id, elt.to_string()));
                }
                _ => {
                    return Err(Error::parse(
                        line,
                        format!("unrecognized declaration `{body}`"),
                    ))
                }
            }
        }
        let target = target.ok_or_else(|| Error::parse(1, "missing `target` line"))?;
        let mut labels = vec![target.identity(); x.edges().len()];
        let mut seen = vec![false; x.edges().len()];
        for (line, id, elt) in maps {
            let e = x
                .edge_index(id)
                .ok_or_else(|| Error::parse(line, format!("unknown edge {id}")))?;
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::parse(line, format!("edge {id} mapped twice")));
            }
            labels[e] = target
                .parse_element(&elt)
                .map_err(|err| Error::parse(line, err.to_string()))?;
        }
        PiOneData::from_edge_labels(x, target, &labels)
    }

    /// Homomorphism file listing the nontrivial chord images.
    pub fn phi_to_text(&self, x: &MetricComplex) -> Result<String> {
        let phi = self.phi()?;
        let mut s = format!("target {}\n", phi.target);
        for (c, &e) in self.chords.iter().enumerate() {
            if !phi.target.is_identity(&phi.images[c]) {
                let _ = writeln!(
                    s,
                    "map {} {}",
                    x.edges()[e].id,
                    phi.target.format_element(&phi.images[c])
                );
            }
        }
        Ok(s)
    }

    /// Flat barycentric subdivision of triangle `t`, carrying the homomorphism.
    pub fn subdivide_triangle(
        &self,
        x: &MetricComplex,
        t: usize,
    ) -> Result<(MetricComplex, PiOneData)> {
        let phi = self.phi()?;
        let g = &phi.target;
        let mut labels = self.edge_labels()?;
        let tri = x.triangles()[t].clone();
        let step = |k: usize| {
            let l = &labels[tri.edges[k]];
            if tri.forward[k] {
                l.clone()
            } else {
                g.inv(l)
            }
        };
        // label from corner 0 to each corner
        let to_corner = [g.identity(), step(0), g.inv(&step(2))];
        let (y, _) = x.subdivide_triangle(t)?;
        labels.extend(to_corner);
        let p = PiOneData::from_edge_labels(&y, g.clone(), &labels)?;
        Ok((y, p))
    }

    /// Flat barycentric subdivision of every triangle, carrying the homomorphism.
    pub fn subdivide_all(&self, x: &MetricComplex) -> Result<(MetricComplex, PiOneData)> {
        let mut y = x.clone();
        let mut p = self.clone();
        for k in 0..x.triangles().len() {
            (y, p) = p.subdivide_triangle(&y, 3 * k)?;
        }
        Ok((y, p))
    }
}

/// Invariant factors of an integer matrix, ignoring zeros.
pub fn smith_invariants(matrix: &[Vec<i64>]) -> Vec<u64> {
    let mut m: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest(&m, t..rows, t..cols) else {
            break;
        };
        m.swap(t, pi);
        for r in m.iter_mut() {
            r.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    for r in m.iter_mut() {
                        r[j] -= q * r[t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if clean {
                // invariant factors must divide everything below-right
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        for j in t..cols {
                            m[t][j] += m[i][j];
                        }
                        continue;
                    }
                    None => break,
                }
            }
            let col = (t..rows)
                .filter(|&i| m[i][t] != 0)
                .min_by_key(|&i| m[i][t].abs())
                .unwrap_or(t);
            let row = (t..cols)
                .filter(|&j| m[t][j] != 0)
                .min_by_key(|&j| m[t][j].abs())
                .unwrap_or(t);
            if m[col][t].abs() <= m[t][row].abs() {
                m.swap(t, col);
            } else {
                for r in m.iter_mut() {
                    r.swap(t, row);
                }
            }
        }
        out.push(m[t][t].unsigned_abs() as u64);
        t += 1;
    }
    out
}

fn smallest(
    m: &[Vec<i128>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if m[i][j] != 0 && best.is_none_or(|(a, b)| m[i][j].abs() < m[a][b].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// `H_1` of the complex as `(free rank, torsion invariant factors > 1)`.
pub fn abelianization(p: &PiOneData) -> (usize, Vec<u64>) {
    let matrix: Vec<Vec<i64>> = p
        .relators
        .iter()
        .map(|w| {
            let mut row = vec![0; p.chords.len()];
            for &l in w {
                row[l.unsigned_abs() as usize - 1] += l.signum() as i64;
            }
            row
        })
        .collect();
    let inv = smith_invariants(&matrix);
    let torsion = inv.iter().copied().filter(|&d| d > 1).collect();
    (p.chords.len() - inv.len(), torsion)
}
