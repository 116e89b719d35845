//! Border test against a stable closure without materializing it.
//!
//! For a composition `Y = X₀ ∘_{c₁} X₁ ∘ … ∘_{c_k} X_k` the row multiset
//! `R^u(a^P Y)` depends only on `R^u(a^P (X₀ ∘ … ∘ X_{k−1}))`, the last member
//! and `c_k`. Exploring the reachable row sets therefore covers every member of
//! the closure, and `(P, Q)` borders the closure iff each reachable row set `S`
//! is a set with `S ⊕ Q = Z_n`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::Border;
use crate::cbc::{compose_pairs, Cbc};
use crate::error::{Error, Result};

/// Largest modulus handled by the row-set exploration.
pub const CLOSURE_BORDER_LIMIT: usize = 128;

/// One composition step `· ∘_r X_member`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TraceStep {
    pub member: usize,
    pub r: usize,
}

/// A member of the closure, given as a composition chain, whose row `row`
/// breaks the tiling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureBorderFailure {
    pub start: usize,
    pub steps: Vec<TraceStep>,
    pub row: usize,
}

impl ClosureBorderFailure {
    /// Replays the chain and checks that the border really fails on it.
    pub fn verify(&self, bd: &Border, members: &[Cbc]) -> bool {
        let Some(first) = members.get(self.start) else { return false };
        let n = first.n();
        if bd.n() != n || self.row >= n {
            return false;
        }
        let mut pairs = first.pairs().to_vec();
        for s in &self.steps {
            let Some(x) = members.get(s.member) else { return false };
            if s.r >= n {
                return false;
            }
            pairs = compose_pairs(n, &pairs, x.pairs(), s.r);
        }
        let mut row: Vec<usize> = Vec::new();
        for &p in &bd.p_residues() {
            for &(i, j) in &pairs {
                if (p + i) % n == self.row {
                    row.push(j);
                }
            }
        }
        !row_tiles(&row, &bd.q_residues(), n)
    }
}

fn row_tiles(row: &[usize], q: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    for &s in row {
        for &v in q {
            let c = (s + v) % n;
            if seen[c] {
                return false;
            }
            seen[c] = true;
        }
    }
    seen.iter().all(|&b| b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum ClosureBorderVerdict {
    Borders { row_sets: usize },
    Fails(ClosureBorderFailure),
}

impl ClosureBorderVerdict {
    pub fn borders(&self) -> bool {
        matches!(self, ClosureBorderVerdict::Borders { .. })
    }
}

/// Row masks `R^k(X)` of each member.
#[derive(Clone, Debug)]
pub(crate) struct RowTables {
    n: usize,
    full: u128,
    rows: Vec<Vec<u128>>,
}

impl RowTables {
    pub(crate) fn new(members: &[Cbc]) -> Self {
        let n = members[0].n();
        debug_assert!(n <= CLOSURE_BORDER_LIMIT);
        let rows = members
            .iter()
            .map(|x| {
                let mut r = vec![0u128; n];
                for &(i, j) in x.pairs() {
                    r[i] |= 1 << j;
                }
                r
            })
            .collect();
        let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        RowTables { n, full, rows }
    }

    pub(crate) fn from_rows(n: usize, rows: Vec<Vec<u128>>) -> Self {
        let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        RowTables { n, full, rows }
    }

    pub(crate) fn into_rows(self) -> Vec<Vec<u128>> {
        self.rows
    }

    fn rotate(&self, s: u128, q: usize) -> u128 {
        if q == 0 {
            s
        } else {
            ((s << q) | (s >> (self.n - q))) & self.full
        }
    }

    fn tiles(&self, s: u128, q: &[usize]) -> bool {
        let mut acc = 0u128;
        for &v in q {
            let r = self.rotate(s, v);
            if acc & r != 0 {
                return false;
            }
            acc |= r;
        }
        acc == self.full
    }

    /// `⋃_{j ∈ js} R^{(c − j) mod n}(X_member)`, `None` on overlap.
    fn gather(&self, member: usize, js: impl Iterator<Item = usize>, c: usize) -> Option<u128> {
        let rows = &self.rows[member];
        let n = self.n;
        let mut acc = 0u128;
        for j in js {
            let r = rows[(c + n - j) % n];
            if acc & r != 0 {
                return None;
            }
            acc |= r;
        }
        Some(acc)
    }
}

fn bits(mut s: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let b = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(b)
        }
    })
}

#[derive(Clone, Copy)]
enum Origin {
    Start { member: usize, row: usize },
    Step { prev: u128, member: usize, r: usize },
}

enum Visited {
    Dense { stamps: Vec<u32>, stamp: u32 },
    Sparse(HashSet<u128>),
    Traced(HashMap<u128, Origin>),
}

impl Visited {
    fn reset(&mut self) {
        match self {
            Visited::Dense { stamps, stamp } => {
                *stamp = stamp.wrapping_add(1);
                if *stamp == 0 {
                    stamps.iter_mut().for_each(|s| *s = 0);
                    *stamp = 1;
                }
            }
            Visited::Sparse(s) => s.clear(),
            Visited::Traced(m) => m.clear(),
        }
    }

    fn insert(&mut self, s: u128, origin: Origin) -> bool {
        match self {
            Visited::Dense { stamps, stamp } => {
                let slot = &mut stamps[s as usize];
                if *slot == *stamp {
                    false
                } else {
                    *slot = *stamp;
                    true
                }
            }
            Visited::Sparse(set) => set.insert(s),
            Visited::Traced(map) => {
                if map.contains_key(&s) {
                    false
                } else {
                    map.insert(s, origin);
                    true
                }
            }
        }
    }
}

/// Reusable exploration buffers; dense marking is used for `n ≤ 16`.
pub(crate) struct Explorer {
    visited: Visited,
    queue: Vec<u128>,
}

/// Where the exploration broke the tiling: the state it came from (`None`
/// for a start state) and the step taken.
struct Breach {
    origin: Origin,
}

impl Explorer {
    pub(crate) fn new(n: usize) -> Self {
        let visited = if n <= 16 {
            Visited::Dense { stamps: vec![0; 1 << n], stamp: 0 }
        } else {
            Visited::Sparse(HashSet::new())
        };
        Explorer { visited, queue: Vec::new() }
    }

    fn traced() -> Self {
        Explorer { visited: Visited::Traced(HashMap::new()), queue: Vec::new() }
    }

    /// Explores all reachable row sets; returns the count or the breach.
    fn explore(&mut self, t: &RowTables, p: &[usize], q: &[usize]) -> std::result::Result<usize, Breach> {
        self.visited.reset();
        self.queue.clear();
        let n = t.n;
        for member in 0..t.rows.len() {
            for row in 0..n {
                let origin = Origin::Start { member, row };
                match t.gather(member, p.iter().copied(), row) {
                    Some(s) if t.tiles(s, q) => {
                        if self.visited.insert(s, origin) {
                            self.queue.push(s);
                        }
                    }
                    _ => return Err(Breach { origin }),
                }
            }
        }
        let mut head = 0;
        while head < self.queue.len() {
            let s = self.queue[head];
            head += 1;
            for member in 0..t.rows.len() {
                for r in 0..n {
                    let origin = Origin::Step { prev: s, member, r };
                    match t.gather(member, bits(s), r) {
                        Some(s2) if t.tiles(s2, q) => {
                            if self.visited.insert(s2, origin) {
                                self.queue.push(s2);
                            }
                        }
                        _ => return Err(Breach { origin }),
                    }
                }
            }
        }
        Ok(self.queue.len())
    }

    /// Fast yes/no test used by sweeps.
    pub(crate) fn borders(&mut self, t: &RowTables, p: &[usize], q: &[usize]) -> bool {
        self.explore(t, p, q).is_ok()
    }
}

fn failure_from(explorer: &Explorer, breach: Breach) -> ClosureBorderFailure {
    let Visited::Traced(map) = &explorer.visited else { unreachable!("traced explorer") };
    let mut steps = Vec::new();
    let mut origin = breach.origin;
    loop {
        match origin {
            Origin::Start { member, row } => {
                steps.reverse();
                return ClosureBorderFailure { start: member, steps, row };
            }
            Origin::Step { prev, member, r } => {
                steps.push(TraceStep { member, r });
                origin = map[&prev];
            }
        }
    }
}

pub(crate) fn check_members(members: &[Cbc]) -> Result<usize> {
    let n = members
        .first()
        .ok_or_else(|| Error::InvalidInput("a family needs at least one member".into()))?
        .n();
    if n > CLOSURE_BORDER_LIMIT {
        return Err(Error::EnvelopeExceeded(format!(
            "closure border test supports n ≤ {CLOSURE_BORDER_LIMIT}, got {n}"
        )));
    }
    Ok(n)
}

/// Decides whether `bd` borders every member of the stable closure of
/// `members`, returning a replayable counterexample otherwise.
///
/// The members must form a compatible family; this is not rechecked.
pub(crate) fn closure_border_verdict(bd: &Border, members: &[Cbc]) -> Result<ClosureBorderVerdict> {
    let n = check_members(members)?;
    if bd.n() != n {
        return Err(Error::ModulusMismatch { expected: n, found: bd.n() });
    }
    let tables = RowTables::new(members);
    let (p, q) = (bd.p_residues(), bd.q_residues());
    let mut explorer = Explorer::new(n);
    match explorer.explore(&tables, &p, &q) {
        Ok(row_sets) => Ok(ClosureBorderVerdict::Borders { row_sets }),
        Err(_) => {
            let mut traced = Explorer::traced();
            let breach = traced
                .explore(&tables, &p, &q)
                .err()
                .expect("exploration is deterministic");
            Ok(ClosureBorderVerdict::Fails(failure_from(&traced, breach)))
        }
    }
}
