use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{complete_hajos, is_prefix_suffix, PrefixSuffixChain, PrefixSuffixVerdict};
use crate::cbc::{for_each_cbc_containing, BayonetPair, Cbc, CbcFamily};
use crate::cyclic::is_cbc_hajos_number;
use crate::error::{Error, Result};
use crate::hajos::{HajosChain, Recognizer};
use crate::words::{is_code, CodeVerdict, FiniteCode, Word};

/// The four statements for `{aⁿ} ∪ X`, `X ⊆ a*ωa*`:
/// (1) inclusion in a finite maximal code, (2) `C_X(ω)` in an n-cbc,
/// (3) `C_X(ω)` in a Hajós n-cbc, (4) prefix-suffix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub n: usize,
    pub omega: Word,
    /// `C_X(ω)` as residue pairs.
    pub pairs: Vec<BayonetPair>,
    /// Not evaluated; follows from (2) through the equivalence.
    pub statement1_implied: bool,
    /// First n-cbc containing `C_X(ω)`.
    pub statement2: Option<Cbc>,
    /// First Hajós n-cbc containing `C_X(ω)`, with its chain.
    pub statement3: Option<(Cbc, HajosChain)>,
    /// Built from the statement 3 witness when there is one, searched otherwise.
    pub statement4: PrefixSuffixVerdict,
}

impl InclusionReport {
    pub fn statement4_holds(&self) -> Option<bool> {
        match &self.statement4 {
            PrefixSuffixVerdict::Yes { .. } => Some(true),
            PrefixSuffixVerdict::No { .. } => Some(false),
            PrefixSuffixVerdict::Unknown { .. } => None,
        }
    }

    /// Statements 2 to 4 agree (an undecided statement 4 counts as agreeing).
    pub fn agree(&self) -> bool {
        let s2 = self.statement2.is_some();
        s2 == self.statement3.is_some() && self.statement4_holds().is_none_or(|s4| s4 == s2)
    }

    pub fn chain(&self) -> Option<&PrefixSuffixChain> {
        self.statement4.chain()
    }
}

/// Evaluates statements 2 to 4 for `{aⁿ} ∪ X`. The modulus must be a cbc
/// Hajós number and the set a code.
pub fn inclusion_equivalence(x: &FiniteCode, omega: &Word, n: usize, bound: usize, depth_bound: usize) -> Result<InclusionReport> {
    if n == 0 || !is_cbc_hajos_number(n) {
        return Err(Error::Unsupported(format!("{n} is not a cbc Hajós number")));
    }
    if omega.is_empty() || omega.is_power_of_a() {
        return Err(Error::InvalidInput("ω must contain a letter other than a".into()));
    }
    let exps: Vec<BayonetPair> = x
        .iter()
        .map(|w| w.split_around(omega).ok_or_else(|| Error::InvalidInput(format!("{w} is not in a*{omega}a*"))))
        .collect::<Result<_>>()?;
    let full = x.with(Word::power(b'a', n));
    if let CodeVerdict::NotCode(w) = is_code(&full)? {
        return Err(Error::NotACode(Box::new(w)));
    }
    let mut pairs: Vec<BayonetPair> = exps.iter().map(|&(i, j)| (i % n, j % n)).collect();
    pairs.sort_unstable();
    pairs.dedup();

    let mut first: Option<Cbc> = None;
    let mut hajos: Option<(Cbc, HajosChain)> = None;
    let mut recognizer = Recognizer::new(false);
    for_each_cbc_containing(n, bound, &pairs, &mut |ps| {
        let y = Cbc::from_sorted_unchecked(n, ps.to_vec());
        first.get_or_insert_with(|| y.clone());
        if let Some(chain) = recognizer.family(std::slice::from_ref(&y)) {
            hajos = Some((y, chain.into_single()));
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;

    let statement4 = match &hajos {
        Some((y, _)) => {
            let done = complete_hajos(&CbcFamily::singleton(y.clone()), std::slice::from_ref(omega), &[exps], None)?;
            debug_assert_eq!(done.code, full);
            PrefixSuffixVerdict::Yes { chain: done.chain }
        }
        None => is_prefix_suffix(&full, depth_bound)?,
    };
    Ok(InclusionReport {
        n,
        omega: omega.clone(),
        pairs,
        statement1_implied: first.is_some(),
        statement2: first,
        statement3: hajos,
        statement4,
    })
}
