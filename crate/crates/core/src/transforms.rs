//! Exponent transforms of bayonet sets and the divisibility bounds they give
//! for cbc containing a bayonet code.
//!
//! `φ_{d₁,d₂}` multiplies exponents modulo n and, for `d₁` prime to `|Q|` and
//! `d₂` prime to `|P|`, keeps a family bordered by `(P, Q)`. Its integer
//! counterpart `μ_{d₁,d₂}` needs no modulus; when `μ_{1,d}(T)` is not a code,
//! no cbc containing `T` has a border with `|P|` prime to `d`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::borders::{border_check_closure, Border};
use crate::cbc::{is_compatible, BayonetPair, Cbc, CbcFamily};
use crate::cyclic::{gcd, is_prime};
use crate::error::{Error, Result};
use crate::words::{is_code, AmbiguityWitness, CodeVerdict, FiniteCode, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiParams {
    pub d1: usize,
    pub d2: usize,
}

impl PhiParams {
    /// `gcd(d₁, |Q|) = 1` and `gcd(d₂, |P|) = 1`.
    pub fn check(&self, bd: &Border) -> Result<()> {
        if gcd(self.d1, bd.q().len()) != 1 {
            return Err(Error::GcdViolation(format!("gcd(d1 = {}, |Q| = {}) ≠ 1", self.d1, bd.q().len())));
        }
        if gcd(self.d2, bd.p().len()) != 1 {
            return Err(Error::GcdViolation(format!("gcd(d2 = {}, |P| = {}) ≠ 1", self.d2, bd.p().len())));
        }
        Ok(())
    }
}

/// `{(d₁i mod n, d₂j mod n)}`, sorted and without repetitions.
pub fn phi(x: &Cbc, d1: usize, d2: usize) -> Vec<BayonetPair> {
    let n = x.n();
    let mut out: Vec<BayonetPair> = x.pairs().iter().map(|&(i, j)| (d1 * i % n, d2 * j % n)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiVerdict {
    pub params: PhiParams,
    /// `φ(X)` when it is an n-cbc.
    pub image: Option<Cbc>,
    pub compatible: bool,
    pub bordered: bool,
}

impl PhiVerdict {
    pub fn holds(&self) -> bool {
        self.image.is_some() && self.compatible && self.bordered
    }
}

/// Checks that `{φ(X)} ∪ ℰ` is a compatible family whose closure is still
/// bordered by `bd`, where `X` is member `member` of `ℰ`.
pub fn phi_closure_check(family: &CbcFamily, bd: &Border, member: usize, d1: usize, d2: usize) -> Result<PhiVerdict> {
    let params = PhiParams { d1, d2 };
    params.check(bd)?;
    let x = family
        .members()
        .get(member)
        .ok_or_else(|| Error::InvalidInput(format!("no member with id {member}")))?;
    if !border_check_closure(bd, family)?.borders() {
        return Err(Error::Precondition(format!("{bd} does not border the stable closure")));
    }
    let Ok(image) = Cbc::new(family.n(), phi(x, d1, d2)) else {
        return Ok(PhiVerdict { params, image: None, compatible: false, bordered: false });
    };
    let mut members = family.members().to_vec();
    if !members.contains(&image) {
        members.push(image.clone());
    }
    let enlarged = CbcFamily::new(members)?;
    let compatible = is_compatible(&enlarged).is_ok();
    let bordered = compatible && border_check_closure(bd, &enlarged)?.borders();
    Ok(PhiVerdict { params, image: Some(image), compatible, bordered })
}

fn bayonet_pairs(t: &FiniteCode) -> Result<Vec<BayonetPair>> {
    t.iter()
        .map(|w| {
            w.as_bayonet()
                .ok_or_else(|| Error::InvalidInput(format!("{w} is not of the form a^i b a^j")))
        })
        .collect()
}

/// `{a^{d₁i} b a^{d₂j} : a^i b a^j ∈ T}`.
pub fn mu(t: &[BayonetPair], d1: usize, d2: usize) -> FiniteCode {
    t.iter().map(|&(i, j)| Word::bayonet(d1 * i, d2 * j)).collect()
}

/// Forced prime divisors of `|P|` and `|Q|` for any border `(P, Q)` of
/// `{X}°` with `X` an n-cbc containing `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    /// Primes `d` with `μ_{d,1}(T)` not a code; each divides `|Q|`.
    pub left_forced_primes: Vec<usize>,
    /// Primes `d` with `μ_{1,d}(T)` not a code; each divides `|P|`.
    pub right_forced_primes: Vec<usize>,
    pub n_divisor: u64,
    pub left_witnesses: BTreeMap<usize, AmbiguityWitness>,
    pub right_witnesses: BTreeMap<usize, AmbiguityWitness>,
}

impl DivisibilityReport {
    /// Re-checks every witness and the product.
    pub fn verify(&self, t: &FiniteCode) -> bool {
        let Ok(pairs) = bayonet_pairs(t) else { return false };
        let side_ok = |primes: &[usize], wit: &BTreeMap<usize, AmbiguityWitness>, left: bool| {
            primes.len() == wit.len()
                && primes.iter().all(|&d| {
                    let (d1, d2) = if left { (d, 1) } else { (1, d) };
                    wit.get(&d).is_some_and(|w| w.verify(&mu(&pairs, d1, d2)))
                })
        };
        let product: u64 =
            self.left_forced_primes.iter().chain(&self.right_forced_primes).map(|&p| p as u64).product();
        side_ok(&self.left_forced_primes, &self.left_witnesses, true)
            && side_ok(&self.right_forced_primes, &self.right_witnesses, false)
            && product == self.n_divisor
    }
}

/// Tests every prime `d ≤ prime_bound` on both sides.
pub fn divisibility_analysis(t: &FiniteCode, prime_bound: usize) -> Result<DivisibilityReport> {
    let pairs = bayonet_pairs(t)?;
    if let CodeVerdict::NotCode(w) = is_code(t)? {
        return Err(Error::NotACode(Box::new(w)));
    }
    let mut report = DivisibilityReport {
        left_forced_primes: Vec::new(),
        right_forced_primes: Vec::new(),
        n_divisor: 1,
        left_witnesses: BTreeMap::new(),
        right_witnesses: BTreeMap::new(),
    };
    for d in (2..=prime_bound).filter(|&d| is_prime(d)) {
        if let CodeVerdict::NotCode(w) = is_code(&mu(&pairs, d, 1))? {
            report.left_forced_primes.push(d);
            report.left_witnesses.insert(d, w);
            report.n_divisor *= d as u64;
        }
        if let CodeVerdict::NotCode(w) = is_code(&mu(&pairs, 1, d))? {
            report.right_forced_primes.push(d);
            report.right_witnesses.insert(d, w);
            report.n_divisor *= d as u64;
        }
    }
    Ok(report)
}
