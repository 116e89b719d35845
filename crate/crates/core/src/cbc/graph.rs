use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{BayonetPair, CbcFamily};
use crate::words::{AmbiguityWitness, Word};

/// The graph on `⟦n⟧` with an arrow `k₁ → k₂` whenever some member holds two
/// distinct words `a^{i₁}ba^{j₁}`, `a^{i₂}ba^{j₂}` with `k₁ ≡ i₁ − i₂` and
/// `k₂ ≡ j₂ − j₁`. Each arrow keeps its first witness in (member, top, bottom)
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), PathStep>,
}

/// One arrow of a path with the two words that justify it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub member: usize,
    pub top: BayonetPair,
    pub bottom: BayonetPair,
}

impl CompatibilityGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.keys().copied()
    }

    pub fn has_edge(&self, k1: usize, k2: usize) -> bool {
        self.edges.contains_key(&(k1, k2))
    }

    pub fn successors(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((k, 0)..(k + 1, 0)).map(|(&(_, b), _)| b)
    }

    /// A shortest nonempty path `0 → … → 0`, as its vertex list.
    pub fn shortest_cycle_through_zero(&self) -> Option<Vec<usize>> {
        if self.has_edge(0, 0) {
            return Some(vec![0, 0]);
        }
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for s in self.successors(0) {
            parent[s] = 0;
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            if self.has_edge(v, 0) {
                let mut chain = vec![v];
                let mut cur = v;
                while parent[cur] != 0 {
                    cur = parent[cur];
                    chain.push(cur);
                }
                let mut path = vec![0];
                path.extend(chain.into_iter().rev());
                path.push(0);
                return Some(path);
            }
            for s in self.successors(v).collect::<Vec<_>>() {
                if s != 0 && parent[s] == usize::MAX {
                    parent[s] = v;
                    queue.push_back(s);
                }
            }
        }
        None
    }
}

pub fn compatibility_graph(family: &CbcFamily) -> CompatibilityGraph {
    let n = family.n();
    let mut edges = BTreeMap::new();
    for (member, x) in family.members().iter().enumerate() {
        for &top in x.pairs() {
            for &bottom in x.pairs() {
                if top == bottom {
                    continue;
                }
                let k1 = (top.0 + n - bottom.0) % n;
                let k2 = (bottom.1 + n - top.1) % n;
                edges.entry((k1, k2)).or_insert(PathStep { member, top, bottom });
            }
        }
    }
    CompatibilityGraph { n, edges }
}

/// A nonempty `0 → 0` path and the equation between two distinct products
/// over `{a^n}` and the members' words it yields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incompatibility {
    pub n: usize,
    pub path: Vec<usize>,
    pub steps: Vec<PathStep>,
    pub witness: AmbiguityWitness,
}

impl Incompatibility {
    /// Re-checks path labels, member ownership and the word equation.
    pub fn verify(&self, family: &CbcFamily) -> bool {
        let n = self.n;
        if n != family.n()
            || self.path.len() != self.steps.len() + 1
            || self.steps.is_empty()
            || self.path.first() != Some(&0)
            || self.path.last() != Some(&0)
        {
            return false;
        }
        for (idx, st) in self.steps.iter().enumerate() {
            let Some(x) = family.members().get(st.member) else {
                return false;
            };
            if st.top == st.bottom || !x.contains(st.top) || !x.contains(st.bottom) {
                return false;
            }
            if (st.top.0 + n - st.bottom.0) % n != self.path[idx]
                || (st.bottom.1 + n - st.top.1) % n != self.path[idx + 1]
            {
                return false;
            }
        }
        let a_n = Word::power(b'a', n);
        let expected = witness_from_steps(n, &self.steps);
        expected == self.witness
            && self.witness.verify_with(|w| {
                *w == a_n
                    || w.as_bayonet()
                        .is_some_and(|p| family.members().iter().any(|m| m.contains(p)))
            })
    }
}

/// Pads the a-blocks with copies of `a^n` so both rows spell the same word.
pub(crate) fn witness_from_steps(n: usize, steps: &[PathStep]) -> AmbiguityWitness {
    let t = steps.len();
    let block = |s: usize, row: fn(&PathStep) -> BayonetPair| -> usize {
        let left = if s == 0 { 0 } else { row(&steps[s - 1]).1 };
        let right = if s == t { 0 } else { row(&steps[s]).0 };
        left + right
    };
    let a_n = Word::power(b'a', n);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for s in 0..=t {
        let top = block(s, |st| st.top);
        let bottom = block(s, |st| st.bottom);
        let target = top.max(bottom);
        debug_assert_eq!((target - top) % n, 0);
        debug_assert_eq!((target - bottom) % n, 0);
        left.extend(std::iter::repeat(a_n.clone()).take((target - top) / n));
        right.extend(std::iter::repeat(a_n.clone()).take((target - bottom) / n));
        if s < t {
            left.push(Word::bayonet(steps[s].top.0, steps[s].top.1));
            right.push(Word::bayonet(steps[s].bottom.0, steps[s].bottom.1));
        }
    }
    AmbiguityWitness { left, right }
}

/// `Ok` when the graph has no nonempty `0 → 0` path, otherwise the shortest
/// such path with its word-level witness.
pub fn is_compatible(family: &CbcFamily) -> std::result::Result<(), Incompatibility> {
    let g = compatibility_graph(family);
    match g.shortest_cycle_through_zero() {
        None => Ok(()),
        Some(path) => {
            let steps: Vec<PathStep> = path.windows(2).map(|w| g.edges[&(w[0], w[1])]).collect();
            let witness = witness_from_steps(family.n(), &steps);
            Err(Incompatibility {
                n: family.n(),
                path,
                steps,
                witness,
            })
        }
    }
}
