//! Prefix-suffix codes: chain certificates, a bounded recognizer, the
//! Hajós completion builder and the inclusion equivalence for bayonet sets.

mod build;
mod inclusion;

pub use build::{build_prefix_suffix_expansion, complete_hajos, Completion, ExpansionRow};
pub use inclusion::{inclusion_equivalence, InclusionReport};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{factor_over, is_code, CodeVerdict, FiniteCode, Word};

/// How a level sits over the next one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Prefix,
    Suffix,
}

/// `levels[k]` is a prefix or suffix code over `levels[k + 1]`, as told by
/// `directions[k]`. The first level is the target and the last the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixSuffixChain {
    pub levels: Vec<FiniteCode>,
    pub directions: Vec<Direction>,
}

fn is_affix(short: &[usize], long: &[usize], dir: Direction) -> bool {
    short.len() < long.len()
        && match dir {
            Direction::Prefix => long.starts_with(short),
            Direction::Suffix => long.ends_with(short),
        }
}

/// Factorizations of the words of `upper` over `lower`, `None` when one is
/// missing.
fn factor_all(upper: &FiniteCode, lower: &FiniteCode) -> Option<Vec<Vec<usize>>> {
    upper.iter().map(|w| factor_over(w, lower)).collect()
}

fn affix_free(seqs: &[Vec<usize>], dir: Direction) -> bool {
    seqs.iter()
        .enumerate()
        .all(|(a, x)| seqs.iter().enumerate().all(|(b, y)| a == b || (x != y && !is_affix(x, y, dir))))
}

/// True when `upper ⊆ lower*` and the factorizations are prefix (suffix) free.
pub fn is_affix_code_over(upper: &FiniteCode, lower: &FiniteCode, dir: Direction) -> bool {
    factor_all(upper, lower).is_some_and(|seqs| affix_free(&seqs, dir))
}

impl PrefixSuffixChain {
    pub fn trivial(c: FiniteCode) -> Self {
        PrefixSuffixChain { levels: vec![c], directions: Vec::new() }
    }

    pub fn target(&self) -> &FiniteCode {
        &self.levels[0]
    }

    pub fn base(&self) -> &FiniteCode {
        self.levels.last().expect("nonempty chain")
    }

    /// Appends `lower`, whose target must be this chain's base.
    pub fn then(mut self, lower: PrefixSuffixChain) -> Result<Self> {
        if lower.target() != self.base() {
            return Err(Error::InvalidInput("chains do not meet".into()));
        }
        self.levels.extend(lower.levels.into_iter().skip(1));
        self.directions.extend(lower.directions);
        Ok(self)
    }

    /// Prepends `upper` as a `dir` code over the current target, skipping it
    /// when equal.
    fn push_front(&mut self, upper: FiniteCode, dir: Direction) {
        if &upper != self.target() {
            self.levels.insert(0, upper);
            self.directions.insert(0, dir);
        }
    }

    /// The base consists of single letters, covering every letter of the target.
    pub fn reaches_alphabet(&self) -> bool {
        let base = self.base();
        base.iter().all(|w| w.len() == 1)
            && self.target().alphabet().iter().all(|&c| base.contains(&Word::power(c, 1)))
    }

    /// Re-validates every level: codehood, composition and the affix property.
    pub fn verify(&self) -> bool {
        if self.levels.is_empty() || self.directions.len() + 1 != self.levels.len() {
            return false;
        }
        let codes = self.levels.iter().all(|l| !l.is_empty() && is_code(l).is_ok_and(|v| v.is_code()));
        codes
            && self
                .levels
                .windows(2)
                .zip(&self.directions)
                .all(|(w, &dir)| is_affix_code_over(&w[0], &w[1], dir))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PrefixSuffixVerdict {
    Yes { chain: PrefixSuffixChain },
    /// Every candidate chain was examined.
    No { codes_examined: usize },
    Unknown { reason: String },
}

impl PrefixSuffixVerdict {
    pub fn chain(&self) -> Option<&PrefixSuffixChain> {
        match self {
            PrefixSuffixVerdict::Yes { chain } => Some(chain),
            _ => None,
        }
    }
}

/// Candidate intermediate codes examined before giving up.
pub const SEARCH_BUDGET: usize = 200_000;

type Step = (usize, Vec<Word>, Direction);

struct Search {
    alphabet: FiniteCode,
    memo: HashMap<Vec<Word>, Option<Step>>,
    budget: usize,
    examined: usize,
}

fn weight(ws: &[Word]) -> usize {
    ws.iter().map(|w| w.len() - 1).sum()
}

impl Search {
    /// Length of the shortest chain from `s` down to the alphabet.
    fn shortest(&mut self, s: &[Word]) -> Result<Option<usize>> {
        if s.iter().all(|w| w.len() == 1) {
            return Ok(Some(usize::from(s != self.alphabet.words())));
        }
        if let Some(hit) = self.memo.get(s) {
            return Ok(hit.as_ref().map(|h| h.0));
        }
        let mut best: Option<Step> = None;
        for (d, dir) in self.candidates(s)? {
            debug_assert!(weight(&d) < weight(s));
            if let Some(len) = self.shortest(&d)? {
                if best.as_ref().is_none_or(|b| len + 1 < b.0) {
                    best = Some((len + 1, d, dir));
                }
            }
        }
        let out = best.as_ref().map(|b| b.0);
        self.memo.insert(s.to_vec(), best);
        Ok(out)
    }

    /// Codes `D ≠ S` made of the pieces of one factorization of each word of
    /// `S`, over which `S` is a prefix or a suffix code.
    fn candidates(&mut self, s: &[Word]) -> Result<Vec<(Vec<Word>, Direction)>> {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut pieces: Vec<Vec<Word>> = Vec::new();
        self.split(s, 0, &mut pieces, &mut out, &mut seen)?;
        Ok(out)
    }

    fn split(
        &mut self,
        s: &[Word],
        k: usize,
        pieces: &mut Vec<Vec<Word>>,
        out: &mut Vec<(Vec<Word>, Direction)>,
        seen: &mut std::collections::HashSet<Vec<Word>>,
    ) -> Result<()> {
        if k == s.len() {
            let d = FiniteCode::new(pieces.iter().flatten().cloned());
            if d.words() == s || !seen.insert(d.words().to_vec()) {
                return Ok(());
            }
            self.examined += 1;
            if self.examined > self.budget {
                return Err(Error::EnvelopeExceeded(format!(
                    "prefix-suffix search examined more than {} codes",
                    self.budget
                )));
            }
            if !is_code(&d)?.is_code() {
                return Ok(());
            }
            let upper = FiniteCode::new(s.iter().cloned());
            for dir in [Direction::Prefix, Direction::Suffix] {
                if is_affix_code_over(&upper, &d, dir) {
                    out.push((d.words().to_vec(), dir));
                    break;
                }
            }
            return Ok(());
        }
        let w = s[k].letters();
        let cuts = w.len() - 1;
        for mask in 0u64..(1u64 << cuts) {
            let mut parts = Vec::new();
            let mut start = 0;
            for c in 0..cuts {
                if mask >> c & 1 == 1 {
                    parts.push(Word::from_letters(w[start..=c].to_vec())?);
                    start = c + 1;
                }
            }
            parts.push(Word::from_letters(w[start..].to_vec())?);
            pieces.push(parts);
            let partial = FiniteCode::new(pieces.iter().flatten().cloned());
            if matches!(is_code(&partial)?, CodeVerdict::Code) {
                self.split(s, k + 1, pieces, out, seen)?;
            }
            pieces.pop();
        }
        Ok(())
    }

    fn chain_from(&self, s: &[Word]) -> PrefixSuffixChain {
        let mut levels = vec![FiniteCode::new(s.iter().cloned())];
        let mut directions = Vec::new();
        let mut cur = s.to_vec();
        loop {
            if cur.iter().all(|w| w.len() == 1) {
                if cur != self.alphabet.words() {
                    levels.push(self.alphabet.clone());
                    directions.push(Direction::Prefix);
                }
                break;
            }
            let (_, next, dir) = self.memo[&cur].clone().expect("solved level");
            levels.push(FiniteCode::new(next.iter().cloned()));
            directions.push(dir);
            cur = next;
        }
        PrefixSuffixChain { levels, directions }
    }
}

/// Searches a shortest prefix-suffix chain from `c` down to its alphabet.
///
/// Intermediate codes are restricted to pieces of factorizations of the
/// words above; any chain can be pruned to that form, so exhausting the
/// candidates proves that no chain exists.
pub fn is_prefix_suffix(c: &FiniteCode, depth_bound: usize) -> Result<PrefixSuffixVerdict> {
    is_prefix_suffix_with_budget(c, depth_bound, SEARCH_BUDGET)
}

pub fn is_prefix_suffix_with_budget(c: &FiniteCode, depth_bound: usize, budget: usize) -> Result<PrefixSuffixVerdict> {
    if c.is_empty() || c.iter().any(Word::is_empty) {
        return Err(Error::InvalidInput("a code needs nonempty words".into()));
    }
    if let CodeVerdict::NotCode(w) = is_code(c)? {
        return Err(Error::NotACode(Box::new(w)));
    }
    let alphabet = FiniteCode::new(c.alphabet().into_iter().map(|l| Word::power(l, 1)));
    let mut search = Search { alphabet, memo: HashMap::new(), budget, examined: 0 };
    match search.shortest(c.words()) {
        Ok(Some(len)) if len <= depth_bound => Ok(PrefixSuffixVerdict::Yes { chain: search.chain_from(c.words()) }),
        Ok(Some(len)) => Ok(PrefixSuffixVerdict::Unknown {
            reason: format!("the shortest chain has {len} steps, above the bound {depth_bound}"),
        }),
        Ok(None) => Ok(PrefixSuffixVerdict::No { codes_examined: search.examined }),
        Err(Error::EnvelopeExceeded(reason)) => Ok(PrefixSuffixVerdict::Unknown { reason }),
        Err(e) => Err(e),
    }
}
