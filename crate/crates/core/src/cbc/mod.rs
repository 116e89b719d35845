//! Complete bayonet codes: sets of `n` words `a^i b a^j` with `i, j < n`
//! such that `{a^n} ∪ X` is a code.

mod closure;
mod embed;
mod enumerate;
mod graph;
mod omega;

pub use closure::{stable_closure, stable_closure_capped, DEFAULT_CLOSURE_CAP};
pub use embed::{joint_embeddability, EmbedVerdict};
pub use enumerate::{enumerate_cbc, for_each_cbc, for_each_cbc_containing, DEFAULT_ENUMERATION_BOUND};
pub use graph::{compatibility_graph, is_compatible, CompatibilityGraph, Incompatibility, PathStep};
pub use omega::{c_of_omega, c_of_omega_pairs, maximality_sweep, MaximalitySweep};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclic::ResidueSet;
use crate::error::{Error, Result};
use crate::words::{FiniteCode, Word};

/// A word `a^i b a^j`, stored as `(i, j)`.
pub type BayonetPair = (usize, usize);

/// An n-complete bayonet code.
///
/// Pairs are kept sorted, which makes equality, hashing and ordering
/// structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cbc {
    n: usize,
    pairs: Vec<BayonetPair>,
}

/// Why a pair set fails to be a cbc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum CbcFailure {
    WrongSize { expected: usize, found: usize },
    Ambiguity { certificate: Box<Incompatibility> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "failure")]
pub enum CbcVerdict {
    Yes,
    No(CbcFailure),
}

impl CbcVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, CbcVerdict::Yes)
    }
}

fn normalize_pairs(n: usize, pairs: impl IntoIterator<Item = BayonetPair>) -> Result<Vec<BayonetPair>> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    let mut v: Vec<BayonetPair> = pairs.into_iter().collect();
    if let Some(&(i, j)) = v.iter().find(|&&(i, j)| i >= n || j >= n) {
        return Err(Error::OutOfRange { value: i.max(j), n });
    }
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Decides whether the pairs form an n-cbc, via the compatibility graph of
/// the singleton family.
pub fn is_cbc(n: usize, pairs: &[BayonetPair]) -> Result<CbcVerdict> {
    let pairs = normalize_pairs(n, pairs.iter().copied())?;
    if pairs.len() != n {
        return Ok(CbcVerdict::No(CbcFailure::WrongSize {
            expected: n,
            found: pairs.len(),
        }));
    }
    let candidate = Cbc { n, pairs };
    let family = CbcFamily::from_members_unchecked(n, vec![candidate]);
    Ok(match is_compatible(&family) {
        Ok(()) => CbcVerdict::Yes,
        Err(certificate) => CbcVerdict::No(CbcFailure::Ambiguity {
            certificate: Box::new(certificate),
        }),
    })
}

impl Cbc {
    /// Validates the pairs and builds the cbc.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = BayonetPair>) -> Result<Self> {
        let pairs = normalize_pairs(n, pairs)?;
        match is_cbc(n, &pairs)? {
            CbcVerdict::Yes => Ok(Cbc { n, pairs }),
            CbcVerdict::No(CbcFailure::WrongSize { expected, found }) => Err(Error::InvalidInput(
                format!("a {expected}-cbc needs {expected} words, got {found}"),
            )),
            CbcVerdict::No(CbcFailure::Ambiguity { certificate }) => {
                Err(Error::NotACode(Box::new(certificate.witness.clone())))
            }
        }
    }

    /// Builds from words `a^i b a^j` with exponents below `n`.
    pub fn from_words(n: usize, words: &FiniteCode) -> Result<Self> {
        let pairs = words
            .iter()
            .map(|w| {
                w.as_bayonet()
                    .ok_or_else(|| Error::InvalidInput(format!("{w} is not a bayonet word")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, pairs)
    }

    /// Skips validation; for sets known to be cbc by construction.
    pub(crate) fn from_sorted_unchecked(n: usize, pairs: Vec<BayonetPair>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(pairs.len(), n);
        Cbc { n, pairs }
    }

    /// The one-element cbc `{b}` of size 1.
    pub fn unit() -> Self {
        Cbc { n: 1, pairs: vec![(0, 0)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[BayonetPair] {
        &self.pairs
    }

    pub fn contains(&self, pair: BayonetPair) -> bool {
        self.pairs.binary_search(&pair).is_ok()
    }

    pub fn words(&self) -> FiniteCode {
        self.pairs.iter().map(|&(i, j)| Word::bayonet(i, j)).collect()
    }

    /// `{a^n} ∪ X` as a word set.
    pub fn with_a_power(&self) -> FiniteCode {
        self.words().with(Word::power(b'a', self.n))
    }

    /// `{a^j b a^i : a^i b a^j ∈ X}`.
    pub fn dual(&self) -> Cbc {
        let mut pairs: Vec<BayonetPair> = self.pairs.iter().map(|&(i, j)| (j, i)).collect();
        pairs.sort_unstable();
        Cbc { n: self.n, pairs }
    }

    /// `L(X) = {i mod n : a^i b a^j ∈ X}`.
    pub fn left_set(&self) -> ResidueSet {
        ResidueSet::from_values(self.n, self.pairs.iter().map(|&(i, _)| i as i64))
    }

    /// `R^k(X) = {j : a^k b a^j ∈ X}`.
    pub fn right_of(&self, k: usize) -> Result<ResidueSet> {
        let r = ResidueSet::from_values(
            self.n,
            self.pairs.iter().filter(|&&(i, _)| i == k).map(|&(_, j)| j as i64),
        );
        if r.is_empty() {
            return Err(Error::Precondition(format!("{k} is not a left exponent of the cbc")));
        }
        Ok(r)
    }

    /// `R(X) = {R^k(X) : k ∈ L(X)}` without repetitions, sorted.
    pub fn right_classes(&self) -> Vec<ResidueSet> {
        let mut out: Vec<ResidueSet> = self
            .left_set()
            .iter()
            .map(|k| self.right_of(k).expect("k is a left exponent"))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// The cbc translated by `a^c · X · a^d` modulo `a^n`.
    pub fn shift(&self, c: usize, d: usize) -> Cbc {
        let n = self.n;
        let mut pairs: Vec<BayonetPair> =
            self.pairs.iter().map(|&(i, j)| ((i + c) % n, (j + d) % n)).collect();
        pairs.sort_unstable();
        Cbc { n, pairs }
    }
}

impl fmt::Debug for Cbc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cbc(n={}, {:?})", self.n, self.pairs)
    }
}

impl fmt::Display for Cbc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.words())
    }
}

#[derive(Serialize, Deserialize)]
struct CbcJson {
    n: usize,
    pairs: Vec<[usize; 2]>,
}

impl Serialize for Cbc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CbcJson {
            n: self.n,
            pairs: self.pairs.iter().map(|&(i, j)| [i, j]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cbc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CbcJson::deserialize(d)?;
        Cbc::new(raw.n, raw.pairs.into_iter().map(|[i, j]| (i, j))).map_err(serde::de::Error::custom)
    }
}

/// `X ∘_r Y = {(i, ℓ) : (i, j) ∈ X, (k, ℓ) ∈ Y, (j + k) mod n = r}`.
///
/// The result is a plain pair set; it is a cbc only for compatible operands.
pub fn compose(x: &Cbc, y: &Cbc, r: usize) -> Result<Vec<BayonetPair>> {
    if x.n != y.n {
        return Err(Error::ModulusMismatch { expected: x.n, found: y.n });
    }
    if r >= x.n {
        return Err(Error::OutOfRange { value: r, n: x.n });
    }
    Ok(compose_pairs(x.n, &x.pairs, &y.pairs, r))
}

pub(crate) fn compose_pairs(
    n: usize,
    x: &[BayonetPair],
    y: &[BayonetPair],
    r: usize,
) -> Vec<BayonetPair> {
    let mut out = Vec::new();
    for &(i, j) in x {
        let k = (r + n - j) % n;
        for &(k2, l) in y {
            if k2 == k {
                out.push((i, l));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// A nonempty set of n-cbc sharing the modulus, in insertion order without
/// repetitions. Member ids are positions in that order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CbcFamily {
    n: usize,
    members: Vec<Cbc>,
}

impl CbcFamily {
    pub fn new(members: Vec<Cbc>) -> Result<Self> {
        let n = members
            .first()
            .ok_or_else(|| Error::InvalidInput("a family needs at least one member".into()))?
            .n;
        if let Some(bad) = members.iter().find(|m| m.n != n) {
            return Err(Error::ModulusMismatch { expected: n, found: bad.n });
        }
        Ok(Self::from_members_unchecked(n, members))
    }

    pub fn singleton(x: Cbc) -> Self {
        CbcFamily { n: x.n, members: vec![x] }
    }

    pub(crate) fn from_members_unchecked(n: usize, members: Vec<Cbc>) -> Self {
        let mut out: Vec<Cbc> = Vec::with_capacity(members.len());
        for m in members {
            if !out.contains(&m) {
                out.push(m);
            }
        }
        CbcFamily { n, members: out }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Cbc] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &Cbc) -> bool {
        self.members.contains(x)
    }

    pub fn dual(&self) -> CbcFamily {
        CbcFamily {
            n: self.n,
            members: self.members.iter().map(Cbc::dual).collect(),
        }
    }

    /// Members sorted, for order-insensitive comparison.
    pub fn sorted_members(&self) -> Vec<Cbc> {
        let mut v = self.members.clone();
        v.sort();
        v
    }

    /// Same members regardless of order.
    pub fn same_set(&self, other: &CbcFamily) -> bool {
        self.n == other.n && self.sorted_members() == other.sorted_members()
    }
}

impl Serialize for CbcFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CbcFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<Cbc>::deserialize(d)?;
        CbcFamily::new(members).map_err(serde::de::Error::custom)
    }
}

/// Outcome of the triangle inequality sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum TriangleVerdict {
    Holds,
    Fails { k: usize, count: usize },
}

/// Checks `|{x ∈ X : |x| ≤ k}| ≤ k` for every `k ∈ ⟦n⟧`, with `|a^i b a^j| = i + j + 1`.
pub fn triangle_property(x: &Cbc) -> TriangleVerdict {
    let n = x.n;
    let mut by_len = vec![0usize; 2 * n];
    for &(i, j) in &x.pairs {
        by_len[i + j + 1] += 1;
    }
    let mut count = 0;
    for (k, &c) in by_len.iter().enumerate().take(n) {
        count += c;
        if count > k {
            return TriangleVerdict::Fails { k, count };
        }
    }
    TriangleVerdict::Holds
}

/// Parses the cbc text format: `n=<int>` then one `i j` pair per line.
pub fn parse_cbc_text(text: &str) -> Result<Cbc> {
    let mut n = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: idx + 1, message };
        if let Some(v) = line.strip_prefix("n=") {
            n = Some(v.trim().parse::<usize>().map_err(|e| err(format!("bad modulus: {e}")))?);
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| err(format!("{t:?}: {e}"))))
            .collect::<Result<_>>()?;
        match nums[..] {
            [i, j] => pairs.push((i, j)),
            _ => return Err(err(format!("expected two integers, got {line:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::InvalidInput("missing n= line".into()))?;
    Cbc::new(n, pairs)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// `{b, ba, aba², a³ba³, a⁴b, a⁴ba, a⁵ba², a⁷ba⁷}`.
    pub fn cbc8() -> Cbc {
        Cbc::new(8, [(0, 0), (0, 1), (1, 2), (3, 3), (4, 0), (4, 1), (5, 2), (7, 7)]).unwrap()
    }

    pub fn code_e() -> FiniteCode {
        FiniteCode::parse_list("b ab aaaa aaba aaab aabb").unwrap()
    }
}
