//! Dijkstra over lazily expanded Cayley graphs, keyed by normal forms.

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use std::cmp::{Ordering, Reverse};
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

/// Default cap on visited normal forms per search.
pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

/// Environment variable that overrides [`DEFAULT_NODE_BUDGET`] in the CLI.
pub const BUDGET_ENV: &str = "SYSTOLAB_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            nodes: DEFAULT_NODE_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(nodes: usize) -> Self {
        Budget { nodes }
    }

    /// Default budget, overridden by `SYSTOLAB_BUDGET` when it parses.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }
}

/// Slack for comparing accumulated float distances against a radius.
pub(crate) fn radius_slack(r: f64) -> f64 {
    1e-9 * r.abs().max(1.0)
}

/// Totally ordered `f64` for heaps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dist(pub f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Sorted norm values of every element in a ball around the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct BallProfile {
    /// Ascending; the identity contributes the leading `0.0`.
    pub norms: Vec<f64>,
    pub radius: f64,
    /// False when the node budget stopped the enumeration early.
    pub complete: bool,
    /// Radius up to which the enumeration is known to be exhaustive.
    pub exhaustive_up_to: f64,
}

impl BallProfile {
    pub(crate) fn from_unsorted(
        mut norms: Vec<f64>,
        radius: f64,
        complete: bool,
        exhaustive_up_to: f64,
    ) -> Self {
        norms.sort_by(f64::total_cmp);
        BallProfile {
            norms,
            radius,
            complete,
            exhaustive_up_to,
        }
    }

    /// Number of elements with norm at most `r`.
    pub fn count_at(&self, r: f64) -> usize {
        let cut = r + radius_slack(r);
        self.norms.partition_point(|&x| x <= cut)
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }
}

/// Weighted Cayley graph `g -> g*s` with edge weight `L(s)`.
#[derive(Clone, Copy, Debug)]
pub struct CayleySearch<'a> {
    pub group: &'a GroupSpec,
    pub gens: &'a [GroupElement],
    pub weights: &'a [f64],
}

struct Frontier {
    heap: BinaryHeap<Reverse<(Dist, GroupElement)>>,
    best: HashMap<GroupElement, (f64, bool)>,
    settled: usize,
}

impl Frontier {
    fn new(start: GroupElement) -> Self {
        let mut heap = BinaryHeap::new();
        let mut best = HashMap::new();
        best.insert(start.clone(), (0.0, false));
        heap.push(Reverse((Dist(0.0), start)));
        Frontier {
            heap,
            best,
            settled: 0,
        }
    }

    /// Next settled element in (distance, normal form) order.
    fn pop(&mut self) -> Option<(f64, GroupElement)> {
        while let Some(Reverse((Dist(d), g))) = self.heap.pop() {
            let slot = self.best.get_mut(&g).expect("queued elements are recorded");
            if slot.1 || d > slot.0 {
                continue;
            }
            slot.1 = true;
            self.settled += 1;
            return Some((d, g));
        }
        None
    }

    fn relax(&mut self, g: GroupElement, d: f64) {
        match self.best.entry(g) {
            Entry::Occupied(mut e) => {
                let slot = e.get_mut();
                if !slot.1 && d < slot.0 {
                    slot.0 = d;
                    self.heap.push(Reverse((Dist(d), e.key().clone())));
                }
            }
            Entry::Vacant(e) => {
                self.heap.push(Reverse((Dist(d), e.key().clone())));
                e.insert((d, false));
            }
        }
    }
}

impl CayleySearch<'_> {
    /// Weighted distance from the identity to `target`.
    pub fn distance(&self, target: &GroupElement, budget: Budget) -> Result<f64> {
        let mut frontier = Frontier::new(self.group.identity());
        let mut reached = 0.0;
        while let Some((d, g)) = frontier.pop() {
            if &g == target {
                return Ok(d);
            }
            reached = d;
            if frontier.settled >= budget.nodes {
                break;
            }
            for (s, w) in self.gens.iter().zip(self.weights) {
                frontier.relax(self.group.mul(&g, s), d + w);
            }
        }
        if frontier.heap.is_empty() && frontier.settled < budget.nodes {
            return Err(Error::Structure(format!(
                "{} is not generated by the given set",
                self.group.format_element(target)
            )));
        }
        Err(Error::BudgetExceeded {
            budget: budget.nodes,
            lower_bound: reached,
        })
    }

    /// All elements within `radius` of the identity.
    pub fn ball(&self, radius: f64, budget: Budget) -> BallProfile {
        let cut = radius + radius_slack(radius);
        let mut frontier = Frontier::new(self.group.identity());
        let mut norms = Vec::new();
        let mut reached = 0.0;
        while let Some((d, g)) = frontier.pop() {
            if norms.len() >= budget.nodes {
                return BallProfile::from_unsorted(norms, radius, false, reached);
            }
            norms.push(d);
            reached = d;
            for (s, w) in self.gens.iter().zip(self.weights) {
                let nd = d + w;
                if nd <= cut {
                    frontier.relax(self.group.mul(&g, s), nd);
                }
            }
        }
        BallProfile::from_unsorted(norms, radius, true, radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_group_ball_counts() {
        let f2 = GroupSpec::free(2);
        let gens = f2.generators();
        let w = vec![1.0; gens.len()];
        let s = CayleySearch {
            group: &f2,
            gens: &gens,
            weights: &w,
        };
        let ball = s.ball(2.0, Budget::default());
        assert!(ball.complete);
        assert_eq!(ball.len(), 17);
        assert_eq!(ball.count_at(1.0), 5);
        assert_eq!(ball.count_at(0.5), 1);
    }

    #[test]
    fn distance_with_weights() {
        let z = GroupSpec::free_abelian(1);
        let gens = vec![
            GroupElement::Abelian(vec![1]),
            GroupElement::Abelian(vec![-1]),
            GroupElement::Abelian(vec![3]),
            GroupElement::Abelian(vec![-3]),
        ];
        let w = vec![1.0, 1.0, 2.0, 2.0];
        let s = CayleySearch {
            group: &z,
            gens: &gens,
            weights: &w,
        };
        assert_eq!(
            s.distance(&GroupElement::Abelian(vec![7]), Budget::default())
                .unwrap(),
            5.0
        );
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let f2 = GroupSpec::free(2);
        let gens = f2.generators();
        let w = vec![1.0; gens.len()];
        let s = CayleySearch {
            group: &f2,
            gens: &gens,
            weights: &w,
        };
        let far = f2.parse_element("a^20").unwrap();
        match s.distance(&far, Budget::new(100)) {
            Err(Error::BudgetExceeded { lower_bound, .. }) => assert!(lower_bound >= 2.0),
            other => panic!("{other:?}"),
        }
        let ball = s.ball(10.0, Budget::new(100));
        assert!(!ball.complete);
        assert_eq!(ball.len(), 100);
    }

    #[test]
    fn unreachable_target_in_finite_search_space() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        let gens = vec![GroupElement::Finite(2)];
        let w = vec![1.0];
        let s = CayleySearch {
            group: &z4,
            gens: &gens,
            weights: &w,
        };
        assert!(matches!(
            s.distance(&GroupElement::Finite(1), Budget::default()),
            Err(Error::Structure(_))
        ));
    }
}
