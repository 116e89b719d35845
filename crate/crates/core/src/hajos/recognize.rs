use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{expand_pairs, ht_structure};
use crate::cbc::{BayonetPair, Cbc, CbcFamily};
use crate::cyclic::divisors;
use crate::error::{Error, Result};

/// Whether a level is used as expanded or through its dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainSide {
    Direct,
    Dual,
}

impl ChainSide {
    fn flip(self) -> Self {
        match self {
            ChainSide::Direct => ChainSide::Dual,
            ChainSide::Dual => ChainSide::Direct,
        }
    }

    fn apply(self, x: Cbc) -> Cbc {
        match self {
            ChainSide::Direct => x,
            ChainSide::Dual => x.dual(),
        }
    }
}

/// `X ← side(H_t(X))` with the given shifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HajosStep {
    pub t: usize,
    pub side: ChainSide,
    pub shifts: Vec<Vec<usize>>,
}

/// Steps in replay order, starting from `{b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HajosChain {
    pub steps: Vec<HajosStep>,
}

impl HajosChain {
    /// Every intermediate cbc, `{b}` first.
    pub fn levels(&self) -> Result<Vec<Cbc>> {
        let mut out = vec![Cbc::unit()];
        for s in &self.steps {
            let x = out.last().expect("nonempty");
            let pairs = expand_pairs(x.pairs(), x.n(), s.t, &s.shifts)?;
            out.push(s.side.apply(Cbc::new(x.n() * s.t, pairs)?));
        }
        Ok(out)
    }

    pub fn replay(&self) -> Result<Cbc> {
        Ok(self.levels()?.pop().expect("nonempty"))
    }

    pub fn verify(&self, y: &Cbc) -> bool {
        self.replay().is_ok_and(|x| &x == y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "chain")]
pub enum HajosVerdict {
    Yes(HajosChain),
    No,
}

impl HajosVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, HajosVerdict::Yes(_))
    }
}

/// One member of a family level: its base in the previous level and shifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelMember {
    pub base: usize,
    pub shifts: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyLevel {
    pub t: usize,
    pub side: ChainSide,
    pub members: Vec<LevelMember>,
}

/// Levels in replay order from `{{b}}`; the last level lists the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FamilyHajosChain {
    pub levels: Vec<FamilyLevel>,
}

impl FamilyHajosChain {
    pub fn replay(&self) -> Result<Vec<Cbc>> {
        Ok(self.replay_levels()?.pop().expect("at least the unit level"))
    }

    /// Every level of the replay, starting with `[{b}]`.
    pub fn replay_levels(&self) -> Result<Vec<Vec<Cbc>>> {
        let mut all = vec![vec![Cbc::unit()]];
        for level in &self.levels {
            let cur = all.last().expect("nonempty");
            let mut next = Vec::with_capacity(level.members.len());
            for m in &level.members {
                let x = cur
                    .get(m.base)
                    .ok_or_else(|| Error::InvalidInput(format!("no base with id {}", m.base)))?;
                let pairs = expand_pairs(x.pairs(), x.n(), level.t, &m.shifts)?;
                next.push(level.side.apply(Cbc::new(x.n() * level.t, pairs)?));
            }
            all.push(next);
        }
        Ok(all)
    }

    /// The replay lists exactly the members of the family.
    pub fn verify(&self, family: &CbcFamily) -> bool {
        self.replay().is_ok_and(|v| v.as_slice() == family.members())
    }

    /// True when every level below the last has a single cbc, so all members
    /// share their intermediate reductions.
    pub fn shared(&self) -> bool {
        let k = self.levels.len();
        self.levels.iter().take(k.saturating_sub(1)).all(|l| l.members.len() == 1)
    }

    pub(crate) fn into_single(self) -> HajosChain {
        HajosChain {
            steps: self
                .levels
                .into_iter()
                .map(|mut l| {
                    assert_eq!(l.members.len(), 1);
                    let m = l.members.pop().expect("one member");
                    HajosStep { t: l.t, side: l.side, shifts: m.shifts }
                })
                .collect(),
        }
    }
}

/// Depth-first search over divisors `t` (increasing) and sides (direct
/// first), memoized on families of smaller size up to duality.
pub(crate) struct Recognizer {
    memo: HashMap<Vec<Cbc>, Option<FamilyHajosChain>>,
    shared_only: bool,
    memo_below: usize,
}

fn sorted_dedup(v: impl IntoIterator<Item = Cbc>) -> Vec<Cbc> {
    let mut v: Vec<Cbc> = v.into_iter().collect();
    v.sort();
    v.dedup();
    v
}

/// Re-indexes the last level of a chain for `from` so that it lists `to`,
/// where `to[i]` is `from[perm[i]]` up to duality when `flip` is set.
fn relabel(mut chain: FamilyHajosChain, from: &[Cbc], to: &[Cbc], flip: bool) -> FamilyHajosChain {
    if let Some(last) = chain.levels.last_mut() {
        if flip {
            last.side = last.side.flip();
        }
        let members = to
            .iter()
            .map(|y| {
                let key = if flip { y.dual() } else { y.clone() };
                let idx = from.iter().position(|x| *x == key).expect("member present");
                last.members[idx].clone()
            })
            .collect();
        last.members = members;
    }
    chain
}

impl Recognizer {
    pub(crate) fn new(shared_only: bool) -> Self {
        Recognizer { memo: HashMap::new(), shared_only, memo_below: 0 }
    }

    /// A chain whose last level lists `members` in the given order.
    pub(crate) fn family(&mut self, members: &[Cbc]) -> Option<FamilyHajosChain> {
        let n = members.first()?.n();
        self.memo_below = self.memo_below.max(n);
        let sorted = sorted_dedup(members.iter().cloned());
        let chain = self.solve(&sorted)?;
        Some(relabel(chain, &sorted, members, false))
    }

    fn solve(&mut self, ms: &[Cbc]) -> Option<FamilyHajosChain> {
        let dual = sorted_dedup(ms.iter().map(Cbc::dual));
        if dual.as_slice() < ms {
            let chain = self.solve_canonical(&dual)?;
            return Some(relabel(chain, &dual, ms, true));
        }
        self.solve_canonical(ms)
    }

    fn solve_canonical(&mut self, ms: &[Cbc]) -> Option<FamilyHajosChain> {
        let small = ms[0].n() < self.memo_below;
        if small {
            if let Some(hit) = self.memo.get(ms) {
                return hit.clone();
            }
        }
        let out = self.search(ms);
        if small {
            self.memo.insert(ms.to_vec(), out.clone());
        }
        out
    }

    fn search(&mut self, ms: &[Cbc]) -> Option<FamilyHajosChain> {
        let n = ms[0].n();
        if n == 1 {
            return Some(FamilyHajosChain { levels: Vec::new() });
        }
        for t in divisors(n).into_iter().filter(|&t| t > 1) {
            let m = n / t;
            'side: for side in [ChainSide::Direct, ChainSide::Dual] {
                let mut parts: Vec<(Vec<BayonetPair>, Vec<Vec<usize>>)> = Vec::with_capacity(ms.len());
                for y in ms {
                    let z = side.apply(y.clone());
                    match ht_structure(z.pairs(), n, m) {
                        Some(p) => parts.push(p),
                        None => continue 'side,
                    }
                }
                let mut bases: Vec<Vec<BayonetPair>> = parts.iter().map(|p| p.0.clone()).collect();
                bases.sort();
                bases.dedup();
                if self.shared_only && bases.len() > 1 {
                    continue;
                }
                let base_cbc: Vec<Cbc> =
                    bases.iter().map(|b| Cbc::from_sorted_unchecked(m, b.clone())).collect();
                if let Some(mut sub) = self.solve(&base_cbc) {
                    let members = parts
                        .into_iter()
                        .map(|(b, shifts)| LevelMember {
                            base: bases.binary_search(&b).expect("base listed"),
                            shifts,
                        })
                        .collect();
                    sub.levels.push(FamilyLevel { t, side, members });
                    return Some(sub);
                }
            }
        }
        None
    }
}

/// Decides whether `y` is a Hajós cbc, with a replayable chain from `{b}`.
pub fn is_hajos_cbc(y: &Cbc) -> HajosVerdict {
    match Recognizer::new(false).family(std::slice::from_ref(y)) {
        Some(chain) => HajosVerdict::Yes(chain.into_single()),
        None => HajosVerdict::No,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HajosFamilyReport {
    /// Verdict under the reading where all members share the intermediate
    /// reductions `Y_i`.
    pub hajos: bool,
    /// Verdict when each level only needs the family of reductions to be
    /// Hajós, members possibly reducing to different cbc.
    pub per_member_hajos: bool,
    /// A shared chain when `hajos`, else a per-member chain when one exists.
    pub chain: Option<FamilyHajosChain>,
    /// Members whose top reduction differs from that of member 0 in the
    /// per-member chain, when only that reading succeeds.
    pub sharing_breakers: Vec<usize>,
}

/// Decides whether a family is Hajós under both readings of the definition.
pub fn is_hajos_family(family: &CbcFamily) -> HajosFamilyReport {
    let members = family.members();
    if let Some(chain) = Recognizer::new(true).family(members) {
        return HajosFamilyReport {
            hajos: true,
            per_member_hajos: true,
            chain: Some(chain),
            sharing_breakers: Vec::new(),
        };
    }
    let chain = Recognizer::new(false).family(members);
    let sharing_breakers = chain
        .as_ref()
        .and_then(|c| c.levels.last())
        .map(|top| {
            let b0 = top.members[0].base;
            (0..top.members.len()).filter(|&i| top.members[i].base != b0).collect()
        })
        .unwrap_or_default();
    HajosFamilyReport {
        hajos: false,
        per_member_hajos: chain.is_some(),
        chain,
        sharing_breakers,
    }
}
