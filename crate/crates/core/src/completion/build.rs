use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{is_prefix_suffix, Direction, PrefixSuffixChain, PrefixSuffixVerdict};
use crate::cbc::{BayonetPair, Cbc, CbcFamily};
use crate::error::{Error, Result};
use crate::hajos::{ChainSide, FamilyHajosChain, FamilyLevel, Recognizer};
use crate::words::{is_code, FiniteCode, Word};

/// Depth bound used when a base code's own chain has to be searched.
const BASE_CHAIN_DEPTH: usize = 16;

/// Exponents for one word `ω` of the base code: the words
/// `a^{n i_s} ω a^{n (s + t j_s)}` for `s ∈ ⟦t⟧`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionRow {
    pub omega: Word,
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

/// A code together with a prefix-suffix chain down to its alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completion {
    pub code: FiniteCode,
    pub chain: PrefixSuffixChain,
}

impl Completion {
    pub fn verify(&self) -> bool {
        self.chain.target() == &self.code && self.chain.verify() && self.chain.reaches_alphabet()
    }
}

struct Entry {
    w: Word,
    s: usize,
    i: usize,
    j: usize,
}

/// The two levels above `K ∋ a^m`: `{a^{mt}} ∪ {a^{mi} w a^{ms}}` is a suffix
/// code over `K`, and `{a^{mt}} ∪ {a^{mi} w a^{m(s+tj)}}` a prefix code over
/// it. `mirrored` swaps the sides of `w` and the two directions.
fn expansion_levels(m: usize, t: usize, entries: &[Entry], mirrored: bool) -> Result<[(FiniteCode, Direction); 2]> {
    let mut seen: BTreeMap<(&Word, usize), (usize, usize)> = BTreeMap::new();
    for e in entries {
        if *seen.entry((&e.w, e.s)).or_insert((e.i, e.j)) != (e.i, e.j) {
            return Err(Error::InvalidInput(format!("two exponent choices for {} at s = {}", e.w, e.s)));
        }
    }
    let place = |left: usize, right: usize, w: &Word| {
        if mirrored {
            Word::around(m * right, w, m * left)
        } else {
            Word::around(m * left, w, m * right)
        }
    };
    let top = Word::power(b'a', m * t);
    let low = FiniteCode::new(entries.iter().map(|e| place(e.i, e.s, &e.w)).chain([top.clone()]));
    let high = FiniteCode::new(entries.iter().map(|e| place(e.i, e.s + t * e.j, &e.w)).chain([top]));
    let (hd, ld) = if mirrored {
        (Direction::Suffix, Direction::Prefix)
    } else {
        (Direction::Prefix, Direction::Suffix)
    };
    Ok([(high, hd), (low, ld)])
}

fn stack(mut lower: PrefixSuffixChain, levels: [(FiniteCode, Direction); 2]) -> PrefixSuffixChain {
    let [(high, hd), (low, ld)] = levels;
    lower.push_front(low, ld);
    lower.push_front(high, hd);
    lower
}

/// The prefix-suffix chain of a base code, which must reach the alphabet.
fn base_chain(c: &FiniteCode) -> Result<PrefixSuffixChain> {
    match is_prefix_suffix(c, BASE_CHAIN_DEPTH)? {
        PrefixSuffixVerdict::Yes { chain } => Ok(chain),
        PrefixSuffixVerdict::No { .. } => Err(Error::Precondition(format!("{c} is not a prefix-suffix code"))),
        PrefixSuffixVerdict::Unknown { reason } => Err(Error::EnvelopeExceeded(reason)),
    }
}

/// Expands a prefix-suffix code `C ∋ a^n` into
/// `{a^{nt}} ∪ {a^{n i_s} ω a^{n(s + t j_s)} : ω, s}`, returning the code with
/// its chain through `C`.
pub fn build_prefix_suffix_expansion(c: &FiniteCode, n: usize, t: usize, rows: &[ExpansionRow]) -> Result<Completion> {
    if n == 0 || t == 0 {
        return Err(Error::InvalidInput("n and t must be positive".into()));
    }
    if !c.contains(&Word::power(b'a', n)) {
        return Err(Error::Precondition(format!("the base code must contain a^{n}")));
    }
    let mut entries = Vec::new();
    let mut omegas = BTreeSet::new();
    for row in rows {
        if !c.contains(&row.omega) || row.omega.is_power_of_a() || !omegas.insert(&row.omega) {
            return Err(Error::InvalidInput(format!(
                "{} must be a distinct word of the base code other than a power of a",
                row.omega
            )));
        }
        if row.i.len() != t || row.j.len() != t {
            return Err(Error::InvalidInput(format!("each row needs {t} values of i and of j")));
        }
        entries.extend((0..t).map(|s| Entry { w: row.omega.clone(), s, i: row.i[s], j: row.j[s] }));
    }
    let chain = stack(base_chain(c)?, expansion_levels(n, t, &entries, false)?);
    Ok(Completion { code: chain.target().clone(), chain })
}

/// Words to place at one level: target `idx` uses the member `member` of that
/// level, with pairs read in the actual orientation.
struct Target {
    omega: usize,
    member: usize,
    pairs: BTreeSet<BayonetPair>,
}

struct Builder<'a> {
    levels: &'a [FamilyLevel],
    cbcs: Vec<Vec<Cbc>>,
    omegas: &'a [Word],
    base: PrefixSuffixChain,
}

impl Builder<'_> {
    /// The chain from `{a^{n_d}} ∪ {a^x ω a^y}` down to the alphabet, where
    /// `n_d` is the modulus at depth `d`.
    fn chain(&self, d: usize, targets: &[Target], flipped: bool) -> Result<PrefixSuffixChain> {
        if d == 0 {
            let entries: Vec<Entry> = targets
                .iter()
                .flat_map(|tg| tg.pairs.iter().map(|&(x, y)| Entry { w: self.omegas[tg.omega].clone(), s: 0, i: x, j: y }))
                .collect();
            return Ok(stack(self.base.clone(), expansion_levels(1, 1, &entries, false)?));
        }
        let level = &self.levels[d - 1];
        let n = self.cbcs[d][0].n();
        let (t, m) = (level.t, n / level.t);
        let eff = if flipped {
            match level.side {
                ChainSide::Direct => ChainSide::Dual,
                ChainSide::Dual => ChainSide::Direct,
            }
        } else {
            level.side
        };
        let mirrored = eff == ChainSide::Dual;
        let mut lower = Vec::new();
        let mut entries = Vec::new();
        for tg in targets {
            let base = level.members[tg.member].base;
            let y = &self.cbcs[d - 1][base];
            let mut low = BTreeSet::new();
            for &(x1, x2) in &tg.pairs {
                let (p1, p2) = if mirrored { (x2, x1) } else { (x1, x2) };
                let (y1, y2) = (p1 % m, p2 % m);
                if !y.contains((y1, y2)) {
                    return Err(Error::Precondition(format!("({x1}, {x2}) does not reduce into its member")));
                }
                let low_pair = if mirrored { (y2, y1) } else { (y1, y2) };
                low.insert(low_pair);
                entries.push(Entry {
                    w: Word::around(low_pair.0, &self.omegas[tg.omega], low_pair.1),
                    s: (p2 % n) / m,
                    i: p1 / m,
                    j: p2 / n,
                });
            }
            lower.push(Target { omega: tg.omega, member: base, pairs: low });
        }
        let below = self.chain(d - 1, &lower, mirrored)?;
        Ok(stack(below, expansion_levels(m, t, &entries, mirrored)?))
    }
}

/// Builds `{a^n} ∪ X₁[ω₁] ∪ ⋯ ∪ X_k[ω_k]` with a prefix-suffix chain, where
/// `C = {a, ω₁, …, ω_k}` is a prefix-suffix code, `ℰ` a Hajós family and each
/// `X_i` a set of pairs reducing injectively into a member of `ℰ`.
///
/// The family chain is recognized when not supplied.
pub fn complete_hajos(
    family: &CbcFamily,
    omegas: &[Word],
    xs: &[Vec<BayonetPair>],
    chain: Option<&FamilyHajosChain>,
) -> Result<Completion> {
    if omegas.len() != xs.len() {
        return Err(Error::InvalidInput("one set of pairs per word ω is needed".into()));
    }
    let c = FiniteCode::new(omegas.iter().cloned().chain([Word::power(b'a', 1)]));
    if c.len() != omegas.len() + 1 || omegas.iter().any(Word::is_empty) {
        return Err(Error::InvalidInput("the words ω must be distinct, nonempty and differ from a".into()));
    }
    if !is_code(&c)?.is_code() {
        return Err(Error::Precondition(format!("{c} is not a code")));
    }
    let chain = match chain {
        Some(ch) if ch.verify(family) => ch.clone(),
        Some(_) => return Err(Error::InvalidInput("the chain does not replay to the family".into())),
        None => Recognizer::new(false)
            .family(family.members())
            .ok_or_else(|| Error::Precondition("the family is not Hajós".into()))?,
    };
    let n = family.n();
    let mut targets = Vec::with_capacity(xs.len());
    for (k, x) in xs.iter().enumerate() {
        let reduced: BTreeSet<BayonetPair> = x.iter().map(|&(i, j)| (i % n, j % n)).collect();
        let pairs: BTreeSet<BayonetPair> = x.iter().copied().collect();
        if reduced.len() != x.len() || pairs.len() != x.len() {
            return Err(Error::InvalidInput(format!("X_{} is not injective modulo {n}", k + 1)));
        }
        let member = family
            .members()
            .iter()
            .position(|y| reduced.iter().all(|&p| y.contains(p)))
            .ok_or_else(|| Error::Precondition(format!("X_{} does not reduce into a member of the family", k + 1)))?;
        targets.push(Target { omega: k, member, pairs });
    }
    let builder = Builder { levels: &chain.levels, cbcs: chain.replay_levels()?, omegas, base: base_chain(&c)? };
    let out = builder.chain(chain.levels.len(), &targets, false)?;
    let code = FiniteCode::new(
        xs.iter()
            .zip(omegas)
            .flat_map(|(x, w)| x.iter().map(move |&(i, j)| Word::around(i, w, j)))
            .chain([Word::power(b'a', n)]),
    );
    debug_assert_eq!(out.target(), &code);
    Ok(Completion { code, chain: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cbc::fixtures::cbc8;

    fn code(s: &str) -> FiniteCode {
        FiniteCode::parse_list(s).unwrap()
    }

    #[test]
    fn explicit_expansion() {
        let row = ExpansionRow { omega: "b".parse().unwrap(), i: vec![0, 0, 1, 3], j: vec![0; 4] };
        let out = build_prefix_suffix_expansion(&code("a b"), 1, 4, &[row]).unwrap();
        assert_eq!(out.code, code("aaaa b ba abaa aaabaaa"));
        assert!(out.verify(), "{out:?}");
        let row = ExpansionRow { omega: "b".parse().unwrap(), i: vec![0, 2], j: vec![1, 0] };
        let out = build_prefix_suffix_expansion(&code("a b"), 1, 2, &[row]).unwrap();
        assert_eq!(out.code, code("aa baa aaba"));
        assert!(out.verify());
    }

    #[test]
    fn expansion_over_prefix_code() {
        let c = code("aa ab b");
        let rows = [
            ExpansionRow { omega: "ab".parse().unwrap(), i: vec![1, 0], j: vec![0, 1] },
            ExpansionRow { omega: "b".parse().unwrap(), i: vec![0, 3], j: vec![2, 0] },
        ];
        let out = build_prefix_suffix_expansion(&c, 2, 2, &rows).unwrap();
        assert!(out.code.contains(&"aaaa".parse().unwrap()));
        assert!(out.verify() && is_code(&out.code).unwrap().is_code(), "{out:?}");
        let trivial: Vec<ExpansionRow> =
            ["ab", "b"].iter().map(|w| ExpansionRow { omega: w.parse().unwrap(), i: vec![0], j: vec![0] }).collect();
        let out = build_prefix_suffix_expansion(&c, 2, 1, &trivial).unwrap();
        assert_eq!(out.code, c);
        let bad = ExpansionRow { omega: "b".parse().unwrap(), i: vec![0], j: vec![] };
        assert!(build_prefix_suffix_expansion(&c, 2, 1, &[bad]).is_err());
    }

    #[test]
    fn completes_four_cbc() {
        let y = Cbc::new(4, [(0, 0), (0, 1), (1, 2), (3, 3)]).unwrap();
        let fam = CbcFamily::singleton(y.clone());
        let out = complete_hajos(&fam, &["b".parse().unwrap()], &[y.pairs().to_vec()], None).unwrap();
        assert_eq!(out.code, code("aaaa b ba abaa aaabaaa"));
        assert!(out.verify(), "{out:?}");
    }

    #[test]
    fn completes_eight_cbc_and_dual() {
        for y in [cbc8(), cbc8().dual()] {
            let fam = CbcFamily::singleton(y.clone());
            let lifted: Vec<BayonetPair> = y.pairs().iter().map(|&(i, j)| (i + 8 * (i % 2), j + 16)).collect();
            for w in ["b", "bb", "bab"] {
                let out = complete_hajos(&fam, &[w.parse().unwrap()], &[lifted.clone()], None).unwrap();
                assert!(out.verify(), "{w}: {out:?}");
                assert!(is_code(&out.code).unwrap().is_code());
            }
        }
    }

    #[test]
    fn completes_family_with_two_words() {
        let ceb = Cbc::new(4, [(0, 0), (1, 0), (2, 1), (3, 0)]).unwrap();
        let cebb = Cbc::new(4, [(0, 0), (1, 0), (2, 0), (3, 0)]).unwrap();
        let fam = CbcFamily::new(vec![ceb.clone(), cebb]).unwrap();
        let xs = vec![ceb.pairs().to_vec(), vec![(1, 4), (2, 0)]];
        let out = complete_hajos(&fam, &["b".parse().unwrap(), "c".parse().unwrap()], &xs, None).unwrap();
        assert!(out.verify(), "{out:?}");
    }

    #[test]
    fn rejects_non_hajos_and_bad_input() {
        let y = Cbc::new(8, [(0, 0), (0, 1), (0, 4), (1, 5), (2, 0), (2, 1), (2, 4), (3, 5)]).unwrap();
        let fam = CbcFamily::singleton(y.clone());
        let b: Word = "b".parse().unwrap();
        let err = complete_hajos(&fam, &[b.clone()], &[y.pairs().to_vec()], None);
        assert!(matches!(err, Err(Error::Precondition(_))));
        let fam = CbcFamily::singleton(cbc8());
        let err = complete_hajos(&fam, &[b], &[vec![(0, 0), (8, 0)]], None);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }
}
