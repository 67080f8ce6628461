//! Piecewise-flat metric simplicial complexes of dimension at most two.
//!
//! Text format, one declaration per line (`#` starts a comment):
//!
//! ```text
//! v <id>
//! e <id> <v1> <v2> <length>
//! t <e1> <e2> <e3>
//! base <vid>
//! ```

mod cover;
mod presentation;

pub use cover::{
    CoverFrontier, CoverNorm, CoverSearch, LabelGroup, LabeledArc, LabeledGraph, Lattice,
};
pub use presentation::{abelianization, Phi, PiOneData};

use crate::error::{Error, Result};
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: i64,
    pub ends: [usize; 2],
    pub length: f64,
}

/// A triangle with its oriented boundary: edge `edges[i]` runs from
/// `corners[i]` to `corners[(i + 1) % 3]`, traversed forwards when
/// `forward[i]` (i.e. from `ends[0]` to `ends[1]`).
#[derive(Clone, Debug, PartialEq)]
pub struct Triangle {
    pub edges: [usize; 3],
    pub corners: [usize; 3],
    pub forward: [bool; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricComplex {
    vertex_ids: Vec<i64>,
    edges: Vec<Edge>,
    triangles: Vec<Triangle>,
    base: usize,
}

/// Lengths must satisfy the strict triangle inequality.
pub fn is_flat_triangle(l: [f64; 3]) -> bool {
    l[0] + l[1] > l[2] && l[1] + l[2] > l[0] && l[2] + l[0] > l[1]
}

/// Area of a Euclidean triangle from its side lengths (Heron, in the
/// cancellation-free ordering).
pub fn heron_area(l: [f64; 3]) -> f64 {
    let mut s = l;
    s.sort_by(|a, b| b.total_cmp(a));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

fn orient(edges: &[Edge], tri: [usize; 3]) -> Option<Triangle> {
    for order in [[tri[0], tri[1], tri[2]], [tri[0], tri[2], tri[1]]] {
        for first_forward in [true, false] {
            let e0 = &edges[order[0]];
            let (p, q) = if first_forward {
                (e0.ends[0], e0.ends[1])
            } else {
                (e0.ends[1], e0.ends[0])
            };
            let e1 = &edges[order[1]];
            let (f1, r) = if e1.ends[0] == q {
                (true, e1.ends[1])
            } else if e1.ends[1] == q {
                (false, e1.ends[0])
            } else {
                continue;
            };
            let e2 = &edges[order[2]];
            let f2 = if e2.ends == [r, p] {
                true
            } else if e2.ends == [p, r] {
                false
            } else {
                continue;
            };
            if p == q || q == r || r == p {
                continue;
            }
            return Some(Triangle {
                edges: order,
                corners: [p, q, r],
                forward: [first_forward, f1, f2],
            });
        }
    }
    None
}

impl MetricComplex {
    /// Validates and builds a complex. Triangles are given by edge indices
    /// in any order and orientation.
    pub fn new(
        vertex_ids: Vec<i64>,
        edges: Vec<Edge>,
        triangles: Vec<[usize; 3]>,
        base: usize,
    ) -> Result<Self> {
        let nv = vertex_ids.len();
        if nv == 0 {
            return Err(Error::InvalidComplex("no vertices".into()));
        }
        if base >= nv {
            return Err(Error::InvalidComplex("basepoint out of range".into()));
        }
        for e in &edges {
            if e.ends.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidComplex(format!(
                    "edge {} has an unknown endpoint",
                    e.id
                )));
            }
            if !(e.length > 0.0 && e.length.is_finite()) {
                return Err(Error::InvalidComplex(format!(
                    "edge {} has non-positive or non-finite length {}",
                    e.id, e.length
                )));
            }
        }
        let mut tris = Vec::with_capacity(triangles.len());
        for t in triangles {
            let name = || {
                let ids: Vec<String> = t
                    .iter()
                    .map(|&i| edges.get(i).map_or("?".into(), |e| e.id.to_string()))
                    .collect();
                ids.join(" ")
            };
            if t.iter().any(|&i| i >= edges.len()) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::InvalidComplex(format!(
                    "triangle {} has bad edges",
                    name()
                )));
            }
            let tri = orient(&edges, t).ok_or_else(|| {
                Error::InvalidComplex(format!("edges {} do not bound a triangle", name()))
            })?;
            let l = t.map(|i| edges[i].length);
            if !is_flat_triangle(l) {
                return Err(Error::TriangleInequality {
                    triangle: name(),
                    lengths: l,
                });
            }
            tris.push(tri);
        }
        let c = MetricComplex {
            vertex_ids,
            edges,
            triangles: tris,
            base,
        };
        if !c.is_connected() {
            return Err(Error::InvalidComplex("complex is disconnected".into()));
        }
        Ok(c)
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let adj = self.vertex_adjacency();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `adj[v]` lists `(neighbour, edge)`; a loop edge appears twice.
    pub fn vertex_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.ends[0]].push((e.ends[1], i));
            adj[e.ends[1]].push((e.ends[0], i));
        }
        adj
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn vertex_ids(&self) -> &[i64] {
        &self.vertex_ids
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn with_base(mut self, base: usize) -> Result<Self> {
        if base >= self.vertex_count() {
            return Err(Error::InvalidComplex("basepoint out of range".into()));
        }
        self.base = base;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        if !self.triangles.is_empty() {
            2
        } else if !self.edges.is_empty() {
            1
        } else {
            0
        }
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.length).collect()
    }

    pub fn triangle_lengths(&self, t: usize) -> [f64; 3] {
        self.triangles[t].edges.map(|i| self.edges[i].length)
    }

    /// Same combinatorics, new edge lengths (revalidated).
    pub fn with_lengths(&self, lengths: &[f64]) -> Result<Self> {
        if lengths.len() != self.edges.len() {
            return Err(Error::InvalidArgument(
                "one length per edge required".into(),
            ));
        }
        let mut c = self.clone();
        for (e, &l) in c.edges.iter_mut().zip(lengths) {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidComplex(format!(
                    "edge {} has bad length {l}",
                    e.id
                )));
            }
            e.length = l;
        }
        for t in 0..c.triangles.len() {
            let l = c.triangle_lengths(t);
            if !is_flat_triangle(l) {
                return Err(Error::TriangleInequality {
                    triangle: c.triangle_name(t),
                    lengths: l,
                });
            }
        }
        Ok(c)
    }

    /// Every edge length multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let l: Vec<f64> = self.lengths().iter().map(|x| x * c).collect();
        self.with_lengths(&l)
    }

    pub fn triangle_name(&self, t: usize) -> String {
        let ids: Vec<String> = self.triangles[t]
            .edges
            .iter()
            .map(|&i| self.edges[i].id.to_string())
            .collect();
        ids.join(" ")
    }

    /// Total length (dimension 1) or total Heron area (dimension 2).
    pub fn volume(&self) -> Result<f64> {
        match self.dimension() {
            0 => Ok(0.0),
            1 => Ok(self.edges.iter().map(|e| e.length).sum()),
            _ => {
                let mut covered = vec![false; self.edges.len()];
                for t in &self.triangles {
                    for &e in &t.edges {
                        covered[e] = true;
                    }
                }
                if let Some(i) = covered.iter().position(|c| !c) {
                    return Err(Error::MixedDimension(format!(
                        "edge {} lies in no triangle of a 2-dimensional complex",
                        self.edges[i].id
                    )));
                }
                Ok((0..self.triangles.len())
                    .map(|t| heron_area(self.triangle_lengths(t)))
                    .sum())
            }
        }
    }

    /// Diameter of the 1-skeleton under edge lengths.
    pub fn diameter(&self) -> f64 {
        (0..self.vertex_count())
            .map(|v| self.vertex_distances(v).into_iter().fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// Edge-path distances from `source`.
    pub fn vertex_distances(&self, source: usize) -> Vec<f64> {
        use crate::search::Dist;
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let adj = self.vertex_adjacency();
        let mut dist = vec![f64::INFINITY; self.vertex_count()];
        dist[source] = 0.0;
        let mut heap = BinaryHeap::from([Reverse((Dist(0.0), source))]);
        while let Some(Reverse((Dist(d), v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(w, e) in &adj[v] {
                let nd = d + self.edges[e].length;
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(Reverse((Dist(nd), w)));
                }
            }
        }
        dist
    }

    /// Inserts the flat barycentre of triangle `t`, replacing it by three
    /// triangles. New edge lengths are the centroid-to-corner distances of
    /// the Euclidean realization, so the geometry is unchanged.
    ///
    /// Returns the new complex and the index of the new vertex.
    pub fn subdivide_triangle(&self, t: usize) -> Result<(Self, usize)> {
        let tri = self
            .triangles
            .get(t)
            .ok_or_else(|| Error::InvalidArgument("no such triangle".into()))?
            .clone();
        let mut c = self.clone();
        let g = c.vertex_ids.len();
        let next_vid = c.vertex_ids.iter().max().map_or(0, |m| m + 1);
        c.vertex_ids.push(next_vid);
        // side opposite corner i is edge (i+1)%3
        let side = |i: usize| self.edges[tri.edges[(i + 1) % 3]].length;
        let mut next_eid = c.edges.iter().map(|e| e.id).max().map_or(0, |m| m + 1);
        let mut spoke = [0usize; 3];
        for i in 0..3 {
            let a = side(i);
            let b = side((i + 1) % 3);
            let cc = side((i + 2) % 3);
            let len = (2.0 * b * b + 2.0 * cc * cc - a * a).max(0.0).sqrt() / 3.0;
            spoke[i] = c.edges.len();
            c.edges.push(Edge {
                id: next_eid,
                ends: [g, tri.corners[i]],
                length: len,
            });
            next_eid += 1;
        }
        let mut raw: Vec<[usize; 3]> = c.triangles.iter().map(|x| x.edges).collect();
        raw.remove(t);
        for i in 0..3 {
            raw.insert(t + i, [tri.edges[i], spoke[(i + 1) % 3], spoke[i]]);
        }
        let out = MetricComplex::new(c.vertex_ids, c.edges, raw, c.base)?;
        Ok((out, g))
    }

    /// Barycentric flat subdivision of every triangle.
    pub fn subdivide_all(&self) -> Result<Self> {
        let mut c = self.clone();
        let n = self.triangles.len();
        // each subdivision turns triangle k into slots k..k+3
        for k in 0..n {
            c = c.subdivide_triangle(3 * k)?.0;
        }
        Ok(c)
    }

    /// Parses the line-oriented complex format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vids: HashMap<i64, usize> = HashMap::new();
        let mut vertex_ids = Vec::new();
        let mut eids: HashMap<i64, usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut tris = Vec::new();
        let mut base = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let f: Vec<&str> = body.split_whitespace().collect();
            let int = |s: &str| {
                s.parse::<i64>()
                    .map_err(|_| Error::parse(line, format!("expected integer, found `{s}`")))
            };
            match f[0] {
                "v" if f.len() == 2 => {
                    let id = int(f[1])?;
                    if vids.insert(id, vertex_ids.len()).is_some() {
                        return Err(Error::parse(line, format!("duplicate vertex {id}")));
                    }
                    vertex_ids.push(id);
                }
                "e" if f.len() == 5 => {
                    let id = int(f[1])?;
                    let mut ends = [0; 2];
                    for k in 0..2 {
                        let v = int(f[2 + k])?;
                        ends[k] = *vids
                            .get(&v)
                            .ok_or_else(|| Error::parse(line, format!("unknown vertex {v}")))?;
                    }
                    let length: f64 = f[4]
                        .parse()
                        .map_err(|_| Error::parse(line, format!("bad length `{}`", f[4])))?;
                    if !(length > 0.0 && length.is_finite()) {
                        return Err(Error::parse(
                            line,
                            format!("edge {id} needs a positive finite length"),
                        ));
                    }
                    if eids.insert(id, edges.len()).is_some() {
                        return Err(Error::parse(line, format!("duplicate edge {id}")));
                    }
                    edges.push(Edge { id, ends, length });
                }
                "t" if f.len() == 4 => {
                    let mut t = [0; 3];
                    for k in 0..3 {
                        let e = int(f[1 + k])?;
                        t[k] = *eids
                            .get(&e)
                            .ok_or_else(|| Error::parse(line, format!("unknown edge {e}")))?;
                    }
                    tris.push(t);
                }
                "base" if f.len() == 2 => {
                    let v = int(f[1])?;
                    base = Some(
                        *vids
                            .get(&v)
                            .ok_or_else(|| Error::parse(line, format!("unknown vertex {v}")))?,
                    );
                }
                _ => {
                    return Err(Error::parse(
                        line,
                        format!("unrecognized declaration `{body}`"),
                    ))
                }
            }
        }
        MetricComplex::new(vertex_ids, edges, tris, base.unwrap_or(0))
    }

    /// Inverse of [`parse`](Self::parse); lengths are written round-trip exact.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for id in &self.vertex_ids {
            let _ = writeln!(s, "v {id}");
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "e {} {} {} {:?}",
                e.id, self.vertex_ids[e.ends[0]], self.vertex_ids[e.ends[1]], e.length
            );
        }
        for t in &self.triangles {
            let ids = t.edges.map(|i| self.edges[i].id);
            let _ = writeln!(s, "t {} {} {}", ids[0], ids[1], ids[2]);
        }
        let _ = writeln!(s, "base {}", self.vertex_ids[self.base]);
        s
    }

    /// Index of the edge with file id `id`.
    pub fn edge_index(&self, id: i64) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }
}
