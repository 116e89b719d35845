//! Subsets of Z_n and factorizations of cyclic groups.

mod extend;
mod hajos;
mod krasner;
mod numbers;
mod properties;

pub use extend::{
    enumerate_factorizations, extend_to_factorization, extract_restivo_pair, ExtensionVerdict,
};
pub use hajos::{is_hajos_factorization, HajosFactorizationChain, HajosFactorizationVerdict, Side};
pub use krasner::{enumerate_krasner, is_krasner, KrasnerChain, KrasnerFactorization};
pub use properties::{check_period_propagation, check_prime_power_dichotomy, PropertySweep};
pub use numbers::{divisors, gcd, is_cbc_hajos_number, is_hajos_number, is_prime, prime_factors};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subset of Z_n stored as a bitmask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueSet {
    n: usize,
    bits: Vec<u64>,
}

impl ResidueSet {
    pub fn empty(n: usize) -> Self {
        assert!(n >= 1, "modulus must be positive");
        ResidueSet {
            n,
            bits: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        Self::interval(n, n)
    }

    /// `{0, 1, …, len-1}` inside Z_n.
    pub fn interval(n: usize, len: usize) -> Self {
        Self::from_values(n, 0..len as i64)
    }

    /// Elements are reduced mod n.
    pub fn from_values(n: usize, values: impl IntoIterator<Item = i64>) -> Self {
        let mut s = Self::empty(n);
        for v in values {
            s.insert(v.rem_euclid(n as i64) as usize);
        }
        s
    }

    /// Elements must already lie in `0..n`.
    pub fn from_elements(n: usize, values: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        let mut s = Self::empty(n);
        for &v in values {
            if v >= n {
                return Err(Error::OutOfRange { value: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.n && self.bits[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        debug_assert!(x < self.n);
        self.bits[x / 64] |= 1 << (x % 64);
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&x| self.contains(x))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// `k + S` in Z_n.
    pub fn translate(&self, k: i64) -> Self {
        Self::from_values(self.n, self.iter().map(|x| x as i64 + k))
    }

    /// `d·S` in Z_n.
    pub fn scale(&self, d: i64) -> Self {
        Self::from_values(self.n, self.iter().map(|x| x as i64 * d))
    }

    /// `S mod m`, a subset of Z_m.
    pub fn reduce_mod(&self, m: usize) -> Self {
        Self::from_values(m, self.iter().map(|x| x as i64))
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.n == other.n && self.iter().all(|x| other.contains(x))
    }

    /// True iff `m ≠ 0` in Z_n and `m + S = S`.
    pub fn is_periodic(&self, m: usize) -> bool {
        m % self.n != 0 && self.translate(m as i64) == *self
    }

    /// `{m ∈ ⟦n⟧ : m + S = S}`, which always contains 0.
    pub fn periods(&self) -> ResidueSet {
        let mut out = Self::empty(self.n);
        out.insert(0);
        for m in 1..self.n {
            if self.is_periodic(m) {
                out.insert(m);
            }
        }
        out
    }

    /// True when no nonzero residue is a period.
    pub fn is_aperiodic(&self) -> bool {
        self.periods().len() == 1
    }

    /// The unique `S mod m` with `S = S mod m + m⟦n/m⟧` in Z_n.
    pub fn decompose_periodic(&self, m: usize) -> Result<ResidueSet> {
        if m == 0 || m >= self.n || self.n % m != 0 {
            return Err(Error::Precondition(format!(
                "decomposition needs a proper divisor of {}, got {m}",
                self.n
            )));
        }
        if !self.is_periodic(m) {
            return Err(Error::NotAPeriod(m));
        }
        Ok(self.reduce_mod(m))
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/Z{}", self.to_vec(), self.n)
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// True iff every residue of Z_n is `p + q` for exactly one `(p, q) ∈ P × Q`.
pub fn is_factorization(p: &ResidueSet, q: &ResidueSet, n: usize) -> bool {
    if p.n() != n || q.n() != n || p.len() * q.len() != n {
        return false;
    }
    let mut seen = ResidueSet::empty(n);
    for x in p.iter() {
        for y in q.iter() {
            let s = (x + y) % n;
            if seen.contains(s) {
                return false;
            }
            seen.insert(s);
        }
    }
    true
}

/// An ordered pair `(P, Q)` that factorizes Z_n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FactorizationPair {
    p: ResidueSet,
    q: ResidueSet,
}

impl FactorizationPair {
    pub fn new(p: ResidueSet, q: ResidueSet) -> Result<Self> {
        let n = p.n();
        if q.n() != n {
            return Err(Error::ModulusMismatch { expected: n, found: q.n() });
        }
        if !is_factorization(&p, &q, n) {
            return Err(Error::NotAFactorization(n));
        }
        Ok(FactorizationPair { p, q })
    }

    pub fn from_elements(n: usize, p: &[usize], q: &[usize]) -> Result<Self> {
        Self::new(ResidueSet::from_elements(n, p)?, ResidueSet::from_elements(n, q)?)
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn p(&self) -> &ResidueSet {
        &self.p
    }

    pub fn q(&self) -> &ResidueSet {
        &self.q
    }

    pub fn swap(&self) -> Self {
        FactorizationPair {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    /// `(P − p, Q − q)`, which contains 0 on both sides.
    pub fn normalize(&self, p: usize, q: usize) -> Result<Self> {
        if !self.p.contains(p) {
            return Err(Error::Precondition(format!("{p} is not in P")));
        }
        if !self.q.contains(q) {
            return Err(Error::Precondition(format!("{q} is not in Q")));
        }
        Ok(FactorizationPair {
            p: self.p.translate(-(p as i64)),
            q: self.q.translate(-(q as i64)),
        })
    }

    /// Normalization by the smallest element of each side.
    pub fn normalized(&self) -> Self {
        let p0 = self.p.first().expect("factorization sides are nonempty");
        let q0 = self.q.first().expect("factorization sides are nonempty");
        self.normalize(p0, q0).expect("minimum belongs to the set")
    }

    pub fn is_periodic(&self) -> bool {
        !self.p.is_aperiodic() || !self.q.is_aperiodic()
    }
}

impl fmt::Display for FactorizationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

#[derive(Serialize, Deserialize)]
struct FactorizationJson {
    n: usize,
    #[serde(rename = "P")]
    p: Vec<usize>,
    #[serde(rename = "Q")]
    q: Vec<usize>,
}

impl Serialize for FactorizationPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FactorizationJson {
            n: self.n(),
            p: self.p.to_vec(),
            q: self.q.to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FactorizationPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FactorizationJson::deserialize(d)?;
        FactorizationPair::from_elements(raw.n, &raw.p, &raw.q).map_err(serde::de::Error::custom)
    }
}

/// Parses the `n=` / `P=` / `Q=` text format into raw parts.
pub fn parse_factorization_text(text: &str) -> Result<(usize, Vec<usize>, Vec<usize>)> {
    let mut n = None;
    let mut p = None;
    let mut q = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: idx + 1, message };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected key=value, got {line:?}")))?;
        let ints = || -> Result<Vec<usize>> {
            value
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|e| parse_err(format!("{t:?}: {e}"))))
                .collect()
        };
        match key.trim() {
            "n" => {
                n = Some(
                    value
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| parse_err(format!("bad modulus: {e}")))?,
                )
            }
            "P" => p = Some(ints()?),
            "Q" => q = Some(ints()?),
            other => return Err(parse_err(format!("unknown key {other:?}"))),
        }
    }
    match (n, p, q) {
        (Some(n), Some(p), Some(q)) => Ok((n, p, q)),
        _ => Err(Error::InvalidInput("factorization needs n=, P= and Q= lines".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(n: usize, v: &[usize]) -> ResidueSet {
        ResidueSet::from_elements(n, v).unwrap()
    }

    #[test]
    fn factorization_examples() {
        assert!(is_factorization(&rs(8, &[4, 5, 6, 7]), &rs(8, &[1, 5]), 8));
        for n in 1..10 {
            assert!(is_factorization(&rs(n, &[0]), &ResidueSet::full(n), n));
        }
        assert!(!is_factorization(&rs(8, &[2, 4]), &rs(8, &[0, 2, 4, 6]), 8));
    }

    #[test]
    fn period_sets() {
        assert_eq!(rs(8, &[1, 5]).periods(), rs(8, &[0, 4]));
        assert_eq!(ResidueSet::full(6).periods(), ResidueSet::full(6));
        assert_eq!(rs(36, &[0, 4, 8, 9, 13, 17]).periods(), rs(36, &[0]));
    }

    #[test]
    fn periodic_decomposition() {
        assert_eq!(rs(8, &[1, 5]).decompose_periodic(4).unwrap(), rs(4, &[1]));
        let r1 = rs(36, &[0, 2, 12, 14, 24, 26]);
        assert_eq!(r1.decompose_periodic(12).unwrap(), rs(12, &[0, 2]));
        assert!(matches!(rs(8, &[1, 5]).decompose_periodic(2), Err(Error::NotAPeriod(2))));
        assert!(rs(8, &[1, 5]).decompose_periodic(8).is_err());
        assert!(rs(8, &[1, 5]).decompose_periodic(3).is_err());
    }

    #[test]
    fn normalization() {
        let f = FactorizationPair::from_elements(8, &[4, 5, 6, 7], &[1, 5]).unwrap();
        let g = f.normalize(4, 1).unwrap();
        assert_eq!(g, FactorizationPair::from_elements(8, &[0, 1, 2, 3], &[0, 4]).unwrap());
        assert_eq!(g.normalize(0, 0).unwrap(), g);
        assert_eq!(g.q().periods(), f.q().periods());
        assert!(f.normalize(0, 1).is_err());
        assert!(matches!(
            FactorizationPair::from_elements(8, &[2, 4], &[0, 2, 4, 6]),
            Err(Error::NotAFactorization(8))
        ));
    }

    #[test]
    fn text_and_json_formats() {
        let (n, p, q) = parse_factorization_text("n=8\nP=4,5,6,7\nQ=1, 5\n").unwrap();
        let f = FactorizationPair::from_elements(n, &p, &q).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"n":8,"P":[4,5,6,7],"Q":[1,5]}"#);
        let back: FactorizationPair = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<FactorizationPair>(r#"{"n":8,"P":[2,4],"Q":[0,2,4,6]}"#).is_err());
        assert!(parse_factorization_text("n=8\nP=1\n").is_err());
    }
}
