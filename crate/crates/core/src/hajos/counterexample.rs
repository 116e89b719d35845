use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{find_krasner_border, is_hajos_cbc};
use crate::cbc::{Cbc, CbcFamily};
use crate::cyclic::{enumerate_krasner, gcd, is_factorization, is_prime, FactorizationPair, ResidueSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RightFactor {
    R1,
    R2,
}

/// `ℓ ↦ D_ℓ` for every `ℓ ∈ L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub BTreeMap<usize, RightFactor>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonHajosSpec {
    pub p1: usize,
    pub p2: usize,
    pub q1: usize,
    pub q2: usize,
    /// Defaults to `R₁` on `p₁p₂⟦q₁⟧` and `R₂` elsewhere.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Assignment>,
}

impl NonHajosSpec {
    pub fn new(p1: usize, p2: usize, q1: usize, q2: usize) -> Self {
        NonHajosSpec { p1, p2, q1, q2, assignment: None }
    }

    pub fn n(&self) -> usize {
        self.p1 * self.p2 * self.q1 * self.q2
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("p1", self.p1), ("p2", self.p2), ("q1", self.q1), ("q2", self.q2)] {
            if !is_prime(v) {
                return Err(Error::InvalidInput(format!("{name} = {v} is not prime")));
            }
        }
        if gcd(self.p1 * self.p2, self.q1) != 1 {
            return Err(Error::GcdViolation(format!("gcd(p1·p2, q1) ≠ 1 for {self:?}")));
        }
        if gcd(self.q1 * self.q2, self.p1) != 1 {
            return Err(Error::GcdViolation(format!("gcd(q1·q2, p1) ≠ 1 for {self:?}")));
        }
        Ok(())
    }

    fn sum(&self, a: usize, ka: usize, b: usize, kb: usize) -> ResidueSet {
        let n = self.n();
        ResidueSet::from_values(n, (0..ka).flat_map(|x| (0..kb).map(move |y| (a * x + b * y) as i64)))
    }

    /// `L = p₁p₂⟦q₁⟧ + q₁q₂⟦p₁⟧`.
    pub fn l(&self) -> ResidueSet {
        self.sum(self.p1 * self.p2, self.q1, self.q1 * self.q2, self.p1)
    }

    /// `R₁ = p₁p₂q₁⟦q₂⟧ + p₁⟦p₂⟧`.
    pub fn r1(&self) -> ResidueSet {
        self.sum(self.p1 * self.p2 * self.q1, self.q2, self.p1, self.p2)
    }

    /// `R₂ = p₁q₁q₂⟦p₂⟧ + q₁⟦q₂⟧`.
    pub fn r2(&self) -> ResidueSet {
        self.sum(self.p1 * self.q1 * self.q2, self.p2, self.q1, self.q2)
    }

    pub fn default_assignment(&self) -> Assignment {
        let first = ResidueSet::from_values(self.n(), (0..self.q1).map(|x| (self.p1 * self.p2 * x) as i64));
        Assignment(
            self.l()
                .iter()
                .map(|l| (l, if first.contains(l) { RightFactor::R1 } else { RightFactor::R2 }))
                .collect(),
        )
    }

    fn resolved_assignment(&self) -> Result<Assignment> {
        let a = self.assignment.clone().unwrap_or_else(|| self.default_assignment());
        let keys: Vec<usize> = a.0.keys().copied().collect();
        if keys != self.l().to_vec() {
            return Err(Error::InvalidInput(format!(
                "the assignment must cover exactly L = {}",
                self.l()
            )));
        }
        let used: std::collections::BTreeSet<RightFactor> = a.0.values().copied().collect();
        if used.len() != 2 {
            return Err(Error::InvalidInput("the assignment must use both R1 and R2".into()));
        }
        Ok(a)
    }
}

/// The constructed cbc and each verified property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonHajosBundle {
    pub spec: NonHajosSpec,
    pub n: usize,
    pub l: Vec<usize>,
    pub r1: Vec<usize>,
    pub r2: Vec<usize>,
    pub cbc: Cbc,
    pub l_r1_factorization: bool,
    pub l_r2_factorization: bool,
    /// Nonzero periods of `R₁` and `R₂`.
    pub r1_periods: Vec<usize>,
    pub r2_periods: Vec<usize>,
    pub common_periods: Vec<usize>,
    pub l_aperiodic: bool,
    pub is_cbc: bool,
    pub is_hajos: bool,
    /// Krasner factorizations tested against the closure of `{Y}`, `None`
    /// when that check was skipped.
    pub krasner_checked: Option<usize>,
    pub krasner_bordered: Option<bool>,
}

impl NonHajosBundle {
    /// Every property needed for a non-Hajós cbc holds.
    pub fn all_hold(&self) -> bool {
        self.l_r1_factorization
            && self.l_r2_factorization
            && !self.r1_periods.is_empty()
            && !self.r2_periods.is_empty()
            && self.common_periods.is_empty()
            && self.l_aperiodic
            && self.is_cbc
            && !self.is_hajos
            && self.krasner_bordered != Some(true)
    }
}

fn nonzero_periods(s: &ResidueSet) -> Vec<usize> {
    s.periods().iter().filter(|&m| m != 0).collect()
}

/// Builds `Y = Σ_{ℓ∈L} a^ℓ b a^{D_ℓ}` and checks the properties making it a
/// non-Hajós cbc. The Krasner border exhaustion runs when `check_krasner` is set.
pub fn build_non_hajos_cbc(spec: &NonHajosSpec, check_krasner: bool) -> Result<NonHajosBundle> {
    spec.validate()?;
    let assignment = spec.resolved_assignment()?;
    let n = spec.n();
    let (l, r1, r2) = (spec.l(), spec.r1(), spec.r2());
    let pairs: Vec<(usize, usize)> = assignment
        .0
        .iter()
        .flat_map(|(&ell, &f)| {
            let d = if f == RightFactor::R1 { r1.to_vec() } else { r2.to_vec() };
            d.into_iter().map(move |j| (ell, j))
        })
        .collect();
    let cbc = Cbc::new(n, pairs)?;
    let r1_periods = nonzero_periods(&r1);
    let r2_periods = nonzero_periods(&r2);
    let common_periods = r1_periods.iter().copied().filter(|m| r2_periods.contains(m)).collect();
    let is_hajos = is_hajos_cbc(&cbc).is_yes();
    let (krasner_checked, krasner_bordered) = if check_krasner {
        let found = find_krasner_border(&CbcFamily::singleton(cbc.clone()))?;
        (Some(enumerate_krasner(n).len()), Some(found.is_some()))
    } else {
        (None, None)
    };
    Ok(NonHajosBundle {
        spec: NonHajosSpec { assignment: Some(assignment), ..spec.clone() },
        n,
        l_r1_factorization: is_factorization(&l, &r1, n),
        l_r2_factorization: is_factorization(&l, &r2, n),
        l_aperiodic: l.is_aperiodic(),
        l: l.to_vec(),
        r1: r1.to_vec(),
        r2: r2.to_vec(),
        cbc,
        r1_periods,
        r2_periods,
        common_periods,
        is_cbc: true,
        is_hajos,
        krasner_checked,
        krasner_bordered,
    })
}

/// The cbc `a^Q b a^P`, that is the pairs `Q × P`, bordered by `(P, Q)`.
pub fn cbc_from_factorization(f: &FactorizationPair) -> Cbc {
    let pairs: Vec<(usize, usize)> = f.q().iter().flat_map(|i| f.p().iter().map(move |j| (i, j))).collect();
    Cbc::new(f.n(), pairs).expect("a factorization yields a cbc")
}

/// `2pᵖ − p!`, the number of p-cbc for a prime `p`.
pub fn count_hajos_prime(p: usize) -> Result<u128> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let pow = (p as u128).checked_pow(p as u32);
    let fact = (1..=p as u128).try_fold(1u128, |acc, k| acc.checked_mul(k));
    match (pow.and_then(|x| x.checked_mul(2)), fact) {
        (Some(a), Some(b)) => Ok(a - b),
        _ => Err(Error::EnvelopeExceeded(format!("2·{p}^{p} overflows"))),
    }
}

/// A factorization of Z_72 with both sides aperiodic: the copy of the size-36
/// construction in the even residues, with `2R₁` on the even coset and
/// `2R₂ + 1` on the odd one.
pub fn non_hajos_factorization_72() -> FactorizationPair {
    FactorizationPair::from_elements(
        72,
        &[0, 8, 16, 18, 26, 34],
        &[0, 1, 4, 7, 13, 24, 28, 37, 43, 48, 49, 52],
    )
    .expect("frozen factorization")
}
