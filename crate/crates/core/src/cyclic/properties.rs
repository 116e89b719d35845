//! Exhaustive checks of two structural facts about factorizations of Z_n.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{enumerate_factorizations, enumerate_krasner, prime_factors, FactorizationPair, ResidueSet};
use crate::error::Result;

/// Cases examined and counterexamples, each listing the sets involved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertySweep {
    pub n: usize,
    pub checked: u64,
    pub violations: Vec<Vec<Vec<usize>>>,
}

impl PropertySweep {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Complements of each normalized set, keyed by that set.
fn complements(list: &[FactorizationPair]) -> BTreeMap<&ResidueSet, Vec<&ResidueSet>> {
    let mut by_q: BTreeMap<&ResidueSet, Vec<&ResidueSet>> = BTreeMap::new();
    for f in list {
        by_q.entry(f.q()).or_default().push(f.p());
    }
    by_q
}

fn normalized(s: &ResidueSet) -> ResidueSet {
    s.translate(-(s.first().unwrap_or(0) as i64))
}

/// For every Krasner `(U, V)` (either orientation) and every period `m` of
/// `U`, each `P` with `(P, V)` a factorization is `m`-periodic.
pub fn check_period_propagation(n: usize) -> Result<PropertySweep> {
    let all = enumerate_factorizations(n)?;
    let by_q = complements(&all);
    let mut sweep = PropertySweep { n, checked: 0, violations: Vec::new() };
    for k in enumerate_krasner(n) {
        let f = &k.factorization;
        for (u, v) in [(f.p(), f.q()), (f.q(), f.p())] {
            let periods: Vec<usize> = u.periods().iter().filter(|&m| m != 0).collect();
            let Some(ps) = by_q.get(&normalized(v)) else { continue };
            for p in ps {
                for &m in &periods {
                    sweep.checked += 1;
                    if !p.is_periodic(m) {
                        sweep.violations.push(vec![u.to_vec(), v.to_vec(), p.to_vec()]);
                    }
                }
            }
        }
    }
    Ok(sweep)
}

/// For factorizations `(P, Q₁)`, `(P, Q₂)` with `|P|` a prime power, `P` is
/// periodic or `Q₁` and `Q₂` have a common nonzero period.
pub fn check_prime_power_dichotomy(n: usize) -> Result<PropertySweep> {
    let all = enumerate_factorizations(n)?;
    let mut by_p: BTreeMap<&ResidueSet, Vec<(&ResidueSet, ResidueSet)>> = BTreeMap::new();
    for f in &all {
        by_p.entry(f.p()).or_default().push((f.q(), f.q().periods()));
    }
    let mut sweep = PropertySweep { n, checked: 0, violations: Vec::new() };
    for (p, qs) in by_p {
        let mut f = prime_factors(p.len());
        f.dedup();
        if f.len() != 1 || !p.is_aperiodic() {
            sweep.checked += (qs.len() * qs.len()) as u64 * u64::from(f.len() == 1);
            continue;
        }
        for (q1, a) in &qs {
            for (q2, b) in &qs {
                sweep.checked += 1;
                if !a.iter().any(|m| m != 0 && b.contains(m)) {
                    sweep.violations.push(vec![p.to_vec(), q1.to_vec(), q2.to_vec()]);
                }
            }
        }
    }
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sizes() {
        for n in 1..=12 {
            let s = check_period_propagation(n).unwrap();
            assert!(s.holds(), "{s:?}");
            let s = check_prime_power_dichotomy(n).unwrap();
            assert!(s.holds(), "{s:?}");
        }
        assert!(check_period_propagation(8).unwrap().checked > 0);
        assert!(check_prime_power_dichotomy(8).unwrap().checked > 0);
    }
}
