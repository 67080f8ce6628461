//! Graphs with group-labelled arcs and Dijkstra on their covers.
//!
//! The cover of a labelled graph has vertex set `nodes x Labels`; an arc
//! `u -> v` with label `g` lifts to `(u, h) -> (v, h*g)`.

use super::MetricComplex;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::norm::GeometricNorm;
use crate::search::{radius_slack, BallProfile, Budget, Dist};
use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

/// A group whose elements label arcs.
pub trait LabelGroup: Sync {
    type Label: Clone + Eq + Hash + Ord + Debug + Send + Sync;
    fn identity(&self) -> Self::Label;
    fn mul(&self, a: &Self::Label, b: &Self::Label) -> Self::Label;
    fn inv(&self, a: &Self::Label) -> Self::Label;
    fn is_identity(&self, a: &Self::Label) -> bool {
        *a == self.identity()
    }
}

impl LabelGroup for GroupSpec {
    type Label = GroupElement;
    fn identity(&self) -> GroupElement {
        GroupSpec::identity(self)
    }
    fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupSpec::mul(self, a, b)
    }
    fn inv(&self, a: &GroupElement) -> GroupElement {
        GroupSpec::inv(self, a)
    }
    fn is_identity(&self, a: &GroupElement) -> bool {
        GroupSpec::is_identity(self, a)
    }
}

/// `Z^rank` with vector labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub rank: usize,
}

impl LabelGroup for Lattice {
    type Label = Vec<i64>;
    fn identity(&self) -> Vec<i64> {
        vec![0; self.rank]
    }
    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn inv(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }
    fn is_identity(&self, a: &Vec<i64>) -> bool {
        a.iter().all(|&x| x == 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledArc<L> {
    pub to: usize,
    pub length: f64,
    pub label: L,
    /// Edge of a one-skeleton, or the triangle a chord runs through.
    pub tag: Option<usize>,
    /// Whether the arc runs with the tagged edge's orientation.
    pub forward: bool,
    /// Index of the reverse arc in `adj[to]`.
    pub rev: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledGraph<L> {
    pub adj: Vec<Vec<LabeledArc<L>>>,
}

impl<L: Clone> LabeledGraph<L> {
    pub fn new(nodes: usize) -> Self {
        LabeledGraph {
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds `u -> v` with `label` and `v -> u` with `inverse`.
    pub fn add_edge(
        &mut self,
        u: usize,
        v: usize,
        length: f64,
        label: L,
        inverse: L,
        tag: Option<usize>,
    ) {
        let (iu, iv) = (self.adj[u].len(), self.adj[v].len() + usize::from(u == v));
        self.adj[u].push(LabeledArc {
            to: v,
            length,
            label,
            tag,
            forward: true,
            rev: iv,
        });
        self.adj[v].push(LabeledArc {
            to: u,
            length,
            label: inverse,
            tag,
            forward: false,
            rev: iu,
        });
    }

    /// One-skeleton of `x`; `labels[e]` is carried by edge `e` from
    /// `ends[0]` to `ends[1]`.
    pub fn one_skeleton<G: LabelGroup<Label = L>>(
        x: &MetricComplex,
        group: &G,
        labels: &[L],
    ) -> Self {
        let mut g = LabeledGraph::new(x.vertex_count());
        for (i, e) in x.edges().iter().enumerate() {
            g.add_edge(
                e.ends[0],
                e.ends[1],
                e.length,
                labels[i].clone(),
                group.inv(&labels[i]),
                Some(i),
            );
        }
        g
    }

    pub fn map_labels<M: Clone>(&self, f: impl Fn(&L) -> M) -> LabeledGraph<M> {
        LabeledGraph {
            adj: self
                .adj
                .iter()
                .map(|arcs| {
                    arcs.iter()
                        .map(|a| LabeledArc {
                            to: a.to,
                            length: a.length,
                            label: f(&a.label),
                            tag: a.tag,
                            forward: a.forward,
                            rev: a.rev,
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

struct State<L> {
    node: usize,
    label: L,
    dist: f64,
    settled: bool,
    /// Predecessor state and the arc index within its node's list.
    pred: Option<(usize, usize)>,
}

/// Dijkstra on the cover, started at `(start, 1)`. Ties are broken by
/// discovery order, which is deterministic.
pub struct CoverSearch<'a, G: LabelGroup> {
    graph: &'a LabeledGraph<G::Label>,
    group: &'a G,
    states: Vec<State<G::Label>>,
    index: HashMap<(usize, G::Label), usize>,
    heap: BinaryHeap<Reverse<(Dist, usize)>>,
    settled: usize,
}

impl<'a, G: LabelGroup> CoverSearch<'a, G> {
    pub fn new(graph: &'a LabeledGraph<G::Label>, group: &'a G, start: usize) -> Self {
        let mut s = CoverSearch {
            graph,
            group,
            states: Vec::new(),
            index: HashMap::new(),
            heap: BinaryHeap::new(),
            settled: 0,
        };
        s.offer(start, group.identity(), 0.0, None);
        s
    }

    fn offer(&mut self, node: usize, label: G::Label, dist: f64, pred: Option<(usize, usize)>) {
        match self.index.entry((node, label)) {
            Entry::Occupied(e) => {
                let st = &mut self.states[*e.get()];
                if !st.settled && dist < st.dist {
                    st.dist = dist;
                    st.pred = pred;
                    self.heap.push(Reverse((Dist(dist), *e.get())));
                }
            }
            Entry::Vacant(e) => {
                let id = self.states.len();
                let label = e.key().1.clone();
                e.insert(id);
                self.states.push(State {
                    node,
                    label,
                    dist,
                    settled: false,
                    pred,
                });
                self.heap.push(Reverse((Dist(dist), id)));
            }
        }
    }

    /// Settles and returns the next state.
    pub fn pop(&mut self) -> Option<usize> {
        while let Some(Reverse((Dist(d), id))) = self.heap.pop() {
            let st = &mut self.states[id];
            if st.settled || d > st.dist {
                continue;
            }
            st.settled = true;
            self.settled += 1;
            return Some(id);
        }
        None
    }

    /// Relaxes the arcs out of settled state `id`, ignoring lifts beyond `cut`.
    pub fn expand(&mut self, id: usize, cut: f64) {
        let (node, d) = (self.states[id].node, self.states[id].dist);
        let graph = self.graph;
        for (k, arc) in graph.adj[node].iter().enumerate() {
            let nd = d + arc.length;
            if nd <= cut {
                let label = self.group.mul(&self.states[id].label, &arc.label);
                self.offer(arc.to, label, nd, Some((id, k)));
            }
        }
    }

    pub fn node(&self, id: usize) -> usize {
        self.states[id].node
    }

    pub fn label(&self, id: usize) -> &G::Label {
        &self.states[id].label
    }

    pub fn dist(&self, id: usize) -> f64 {
        self.states[id].dist
    }

    pub fn settled_count(&self) -> usize {
        self.settled
    }

    /// Arcs `(node, arc index)` of the shortest path from the start to `id`.
    pub fn path(&self, id: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut cur = id;
        while let Some((p, k)) = self.states[cur].pred {
            out.push((self.states[p].node, k));
            cur = p;
        }
        out.reverse();
        out
    }
}

/// Settled lifts within a radius of `(start, 1)`.
#[derive(Clone, Debug)]
pub struct CoverFrontier<L> {
    /// `(node, label, distance)` in settling order.
    pub settled: Vec<(usize, L, f64)>,
    pub radius: f64,
    pub complete: bool,
    pub exhaustive_up_to: f64,
}

impl<L: Clone + Eq + Hash + Ord + Debug + Send + Sync> CoverFrontier<L> {
    pub fn expand<G: LabelGroup<Label = L>>(
        graph: &LabeledGraph<L>,
        group: &G,
        start: usize,
        radius: f64,
        budget: Budget,
    ) -> Self {
        let cut = radius + radius_slack(radius);
        let mut search = CoverSearch::new(graph, group, start);
        let mut settled = Vec::new();
        let mut reached = 0.0;
        while let Some(id) = search.pop() {
            if settled.len() >= budget.nodes {
                return CoverFrontier {
                    settled,
                    radius,
                    complete: false,
                    exhaustive_up_to: reached,
                };
            }
            reached = search.dist(id);
            settled.push((search.node(id), search.label(id).clone(), reached));
            search.expand(id, cut);
        }
        CoverFrontier {
            settled,
            radius,
            complete: true,
            exhaustive_up_to: radius,
        }
    }

    /// Distances to the lifts of `node`, as a ball profile of deck labels.
    pub fn profile_at(&self, node: usize) -> BallProfile {
        let norms = self
            .settled
            .iter()
            .filter(|s| s.0 == node)
            .map(|s| s.2)
            .collect();
        BallProfile::from_unsorted(norms, self.radius, self.complete, self.exhaustive_up_to)
    }

    pub fn distance(&self, node: usize, label: &L) -> Option<f64> {
        self.settled
            .iter()
            .find(|s| s.0 == node && &s.1 == label)
            .map(|s| s.2)
    }
}

/// The norm `g -> d((v, 1), (v, g))` on the deck group of a labelled graph.
#[derive(Clone, Debug)]
pub struct CoverNorm {
    pub graph: Arc<LabeledGraph<GroupElement>>,
    pub group: GroupSpec,
    pub base: usize,
}

impl GeometricNorm for CoverNorm {
    fn eval(&self, g: &GroupElement, budget: Budget) -> Result<f64> {
        let mut search = CoverSearch::new(&self.graph, &self.group, self.base);
        while let Some(id) = search.pop() {
            if search.node(id) == self.base && search.label(id) == g {
                return Ok(search.dist(id));
            }
            if search.settled_count() >= budget.nodes {
                return Err(Error::BudgetExceeded {
                    budget: budget.nodes,
                    lower_bound: search.dist(id),
                });
            }
            search.expand(id, f64::INFINITY);
        }
        Err(Error::Structure(format!(
            "{} is not a deck transformation",
            self.group.format_element(g)
        )))
    }

    fn ball(&self, radius: f64, budget: Budget) -> Result<BallProfile> {
        Ok(
            CoverFrontier::expand(&self.graph, &self.group, self.base, radius, budget)
                .profile_at(self.base),
        )
    }

    fn describe(&self) -> String {
        "cover".into()
    }
}
