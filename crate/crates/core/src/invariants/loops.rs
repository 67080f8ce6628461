//! Shortest loops with nontrivial label in a labelled graph.

use crate::complex::{CoverSearch, LabelGroup, LabeledGraph};
use crate::search::Dist;
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// A closed walk: `steps[i] = (node, arc index)`, starting and ending at `root`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphLoop<L> {
    pub length: f64,
    pub root: usize,
    pub steps: Vec<(usize, usize)>,
    pub label: L,
}

impl<L> GraphLoop<L> {
    /// Sum of arc lengths in walk order.
    pub fn walk_length(&self, graph: &LabeledGraph<L>) -> f64 {
        self.steps
            .iter()
            .fold(0.0, |acc, &(n, k)| acc + graph.adj[n][k].length)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RootOutcome<L> {
    Found(GraphLoop<L>),
    /// The whole cover component was exhausted: every loop is trivial.
    Saturated,
    /// Budget ran out; no nontrivial loop at the root is shorter than this.
    Budget(f64),
}

/// Cover Dijkstra from `(root, 1)` until some `(root, g != 1)` settles.
pub fn rooted_cover_loop<G: LabelGroup>(
    graph: &LabeledGraph<G::Label>,
    group: &G,
    root: usize,
    budget: usize,
) -> RootOutcome<G::Label> {
    let mut search = CoverSearch::new(graph, group, root);
    while let Some(id) = search.pop() {
        if search.node(id) == root && !group.is_identity(search.label(id)) {
            let steps = search.path(id);
            let lp = GraphLoop {
                length: 0.0,
                root,
                steps,
                label: search.label(id).clone(),
            };
            let length = lp.walk_length(graph);
            return RootOutcome::Found(GraphLoop { length, ..lp });
        }
        if search.settled_count() >= budget {
            return RootOutcome::Budget(search.dist(id));
        }
        search.expand(id, f64::INFINITY);
    }
    RootOutcome::Saturated
}

/// Shortest loop at `root` of the form tree path, one arc, tree path back,
/// among those shorter than `cut`. By the three-path property, the minimum
/// over all roots is the shortest nontrivial loop.
pub fn tree_loop<G: LabelGroup>(
    graph: &LabeledGraph<G::Label>,
    group: &G,
    root: usize,
    cut: f64,
) -> Option<GraphLoop<G::Label>> {
    tree_loops_at(graph, group, root, cut, 1).into_iter().next()
}

/// Up to `keep` shortest tree loops at `root` whose labels are pairwise
/// distinct up to inversion, shortest first.
pub fn tree_loops_at<G: LabelGroup>(
    graph: &LabeledGraph<G::Label>,
    group: &G,
    root: usize,
    cut: f64,
    keep: usize,
) -> Vec<GraphLoop<G::Label>> {
    let n = graph.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut label: Vec<Option<G::Label>> = vec![None; n];
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut settled = vec![false; n];
    dist[root] = 0.0;
    label[root] = Some(group.identity());
    let mut heap = BinaryHeap::from([Reverse((Dist(0.0), root))]);
    // sorted by length, labels distinct
    let mut best: Vec<(f64, usize, usize, G::Label)> = Vec::new();
    let limit = |best: &[(f64, usize, usize, G::Label)]| {
        if best.len() < keep {
            cut
        } else {
            best[keep - 1].0
        }
    };
    while let Some(Reverse((Dist(d), u))) = heap.pop() {
        if settled[u] || d > dist[u] {
            continue;
        }
        // any loop closed from here has length at least 2d
        if 2.0 * d >= limit(&best) {
            break;
        }
        settled[u] = true;
        let lu = label[u].clone().expect("settled nodes are labelled");
        for (k, arc) in graph.adj[u].iter().enumerate() {
            let w = arc.to;
            if settled[w] {
                let lw = label[w].as_ref().expect("settled nodes are labelled");
                let g = group.mul(&group.mul(&lu, &arc.label), &group.inv(lw));
                let len = d + arc.length + dist[w];
                if group.is_identity(&g) || len >= limit(&best) {
                    continue;
                }
                let gi = group.inv(&g);
                match best.iter().position(|b| b.3 == g || b.3 == gi) {
                    Some(i) if best[i].0 <= len => continue,
                    Some(i) => {
                        best.remove(i);
                    }
                    None => {}
                }
                let at = best.partition_point(|b| b.0 <= len);
                best.insert(at, (len, u, k, g));
                best.truncate(keep);
            } else {
                let nd = d + arc.length;
                if nd < dist[w] {
                    dist[w] = nd;
                    label[w] = Some(group.mul(&lu, &arc.label));
                    pred[w] = Some((u, k));
                    heap.push(Reverse((Dist(nd), w)));
                }
            }
        }
    }
    best.into_iter()
        .map(|(_, u, k, _)| {
            let mut steps = Vec::new();
            let mut cur = u;
            while let Some((p, pk)) = pred[cur] {
                steps.push((p, pk));
                cur = p;
            }
            steps.reverse();
            steps.push((u, k));
            let mut cur = graph.adj[u][k].to;
            while let Some((p, pk)) = pred[cur] {
                steps.push((cur, graph.adj[p][pk].rev));
                cur = p;
            }
            let mut g = group.identity();
            for &(node, arc) in &steps {
                g = group.mul(&g, &graph.adj[node][arc].label);
            }
            let lp = GraphLoop {
                length: 0.0,
                root,
                steps,
                label: g,
            };
            let length = lp.walk_length(graph);
            GraphLoop { length, ..lp }
        })
        .collect()
}

/// Roots processed per parallel batch; fixed so results do not depend on
/// the thread count.
const BATCH: usize = 16;

/// The `keep` best tree loops at every root, with distinct labels per root,
/// whose length is within `1 + slack` of the running minimum; sorted by
/// `(length, root)`.
pub fn tree_loops<G: LabelGroup>(
    graph: &LabeledGraph<G::Label>,
    group: &G,
    slack: f64,
    keep: usize,
) -> Vec<GraphLoop<G::Label>> {
    let n = graph.node_count();
    let mut found: Vec<GraphLoop<G::Label>> = Vec::new();
    let mut best = f64::INFINITY;
    for start in (0..n).step_by(BATCH) {
        let cut = best * (1.0 + slack);
        let batch: Vec<_> = (start..(start + BATCH).min(n))
            .into_par_iter()
            .flat_map_iter(|r| tree_loops_at(graph, group, r, cut, keep))
            .collect();
        for lp in batch {
            best = best.min(lp.length);
            found.push(lp);
        }
    }
    found.retain(|lp| lp.length <= best * (1.0 + slack));
    found.sort_by(|a, b| a.length.total_cmp(&b.length).then(a.root.cmp(&b.root)));
    found
}
