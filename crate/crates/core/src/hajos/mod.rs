//! The `H_t` expansion, right-periodic cbc, Hajós cbc and families, the
//! Krasner border characterization and the non-Hajós construction.

mod counterexample;
mod krasner_border;
mod recognize;

pub use counterexample::{
    build_non_hajos_cbc, cbc_from_factorization, count_hajos_prime, non_hajos_factorization_72,
    Assignment, NonHajosBundle, NonHajosSpec, RightFactor,
};
pub use krasner_border::{
    find_krasner_border, krasner_border_equivalence, krasner_hajos_sweep, KrasnerBorderVerdict,
    SweepReport,
};
pub use recognize::{
    is_hajos_cbc, is_hajos_family, ChainSide, FamilyHajosChain, FamilyLevel, HajosChain,
    HajosFamilyReport, HajosStep, HajosVerdict, LevelMember,
};

pub(crate) use recognize::Recognizer;

use serde::{Deserialize, Serialize};

use crate::borders::{border_check_closure, Border};
use crate::cbc::{BayonetPair, Cbc, CbcFamily};
use crate::cyclic::ResidueSet;
use crate::error::{Error, Result};

/// A choice of shifts `k_{ℓ,s} ∈ ⟦t⟧` selecting one member of `H_t(base)`.
/// Row `ℓ` follows the sorted pairs of the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HtParams {
    pub base: Cbc,
    pub t: usize,
    pub shifts: Vec<Vec<usize>>,
}

/// `{a^{i_ℓ + k_{ℓ,s} n} b a^{j_ℓ + (s−1) n}}` for the chosen shifts.
pub fn expand_ht(params: &HtParams) -> Result<Cbc> {
    let pairs = expand_pairs(params.base.pairs(), params.base.n(), params.t, &params.shifts)?;
    Cbc::new(params.base.n() * params.t, pairs)
}

pub(crate) fn expand_pairs(
    base: &[BayonetPair],
    n: usize,
    t: usize,
    shifts: &[Vec<usize>],
) -> Result<Vec<BayonetPair>> {
    if t == 0 {
        return Err(Error::InvalidInput("t must be positive".into()));
    }
    if shifts.len() != base.len() || shifts.iter().any(|row| row.len() != t || row.iter().any(|&k| k >= t)) {
        return Err(Error::InvalidInput(format!(
            "shifts must be a {}×{t} matrix over ⟦{t}⟧",
            base.len()
        )));
    }
    let mut out: Vec<BayonetPair> = base
        .iter()
        .zip(shifts)
        .flat_map(|(&(i, j), row)| row.iter().enumerate().map(move |(s, &k)| (i + k * n, j + s * n)))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// `{(i mod m, j mod m)}`.
pub fn reduce_mod(y: &Cbc, m: usize) -> Result<Vec<BayonetPair>> {
    check_base(y.n(), m)?;
    let mut v: Vec<BayonetPair> = y.pairs().iter().map(|&(i, j)| (i % m, j % m)).collect();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

fn check_base(n: usize, m: usize) -> Result<()> {
    if m == 0 || n % m != 0 {
        return Err(Error::InvalidInput(format!("{m} does not divide {n}")));
    }
    if m == n {
        return Err(Error::InvalidInput("the base must be smaller than the cbc (t > 1)".into()));
    }
    Ok(())
}

/// Recovers `(base, shifts)` with `Y ∈ H_{n/m}(base)` when `Y` has that shape.
/// The base is not checked to be a cbc.
pub(crate) fn ht_structure(pairs: &[BayonetPair], n: usize, m: usize) -> Option<(Vec<BayonetPair>, Vec<Vec<usize>>)> {
    let t = n / m;
    let mut base: Vec<BayonetPair> = pairs.iter().map(|&(i, j)| (i % m, j % m)).collect();
    base.sort_unstable();
    base.dedup();
    if base.len() != m {
        return None;
    }
    let mut shifts = vec![vec![usize::MAX; t]; m];
    for &(i, j) in pairs {
        let row = base.binary_search(&(i % m, j % m)).expect("base contains the reduction");
        let slot = &mut shifts[row][j / m];
        if *slot != usize::MAX {
            return None;
        }
        *slot = i / m;
    }
    Some((base, shifts))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "params")]
pub enum RightPeriodicity {
    Yes(HtParams),
    No,
}

impl RightPeriodicity {
    pub fn is_yes(&self) -> bool {
        matches!(self, RightPeriodicity::Yes(_))
    }
}

/// Whether `Y ∈ H_{n/m}(X)` for some m-cbc `X`, which is then `Y mod m`.
pub fn is_right_periodic(y: &Cbc, m: usize) -> Result<RightPeriodicity> {
    check_base(y.n(), m)?;
    let Some((base, shifts)) = ht_structure(y.pairs(), y.n(), m) else {
        return Ok(RightPeriodicity::No);
    };
    Ok(match Cbc::new(m, base) {
        Ok(base) => RightPeriodicity::Yes(HtParams { base, t: y.n() / m, shifts }),
        Err(_) => RightPeriodicity::No,
    })
}

/// For a border `(P, Q)` of the closure with `P` m-periodic, tests whether
/// every `R^k(a^{P mod m} Y)` is m-periodic, which makes every member
/// m-right-periodic.
pub fn periodicity_criterion(family: &CbcFamily, bd: &Border, m: usize) -> Result<bool> {
    let n = family.n();
    check_base(n, m)?;
    let p_set = ResidueSet::from_values(n, bd.p().iter().copied());
    if p_set.len() != bd.p().len() || !p_set.is_periodic(m) {
        return Err(Error::Precondition(format!("P = {p_set} is not {m}-periodic in Z_{n}")));
    }
    if !border_check_closure(bd, family)?.borders() {
        return Err(Error::Precondition(format!("{bd} does not border the stable closure")));
    }
    let base = p_set.decompose_periodic(m)?;
    for y in family.members() {
        for k in 0..n {
            let row = ResidueSet::from_values(
                n,
                base.iter()
                    .flat_map(|a| y.pairs().iter().filter(move |&&(i, _)| (a + i) % n == k).map(|&(_, j)| j as i64)),
            );
            if !row.is_empty() && !row.is_periodic(m) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
