use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{divisors, is_factorization, FactorizationPair, ResidueSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    P,
    Q,
}

/// Reduction steps `(m, side)` taking a factorization of size n down to size 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HajosFactorizationChain {
    pub steps: Vec<(usize, Side)>,
}

impl HajosFactorizationChain {
    /// Replays the chain, checking that each reduced pair is a factorization.
    pub fn verify(&self, f: &FactorizationPair) -> bool {
        let (mut p, mut q) = (f.p().clone(), f.q().clone());
        for &(m, side) in &self.steps {
            let n = p.n();
            if m == 0 || m >= n || n % m != 0 {
                return false;
            }
            let periodic = match side {
                Side::P => p.is_periodic(m),
                Side::Q => q.is_periodic(m),
            };
            if !periodic {
                return false;
            }
            p = p.reduce_mod(m);
            q = q.reduce_mod(m);
            if !is_factorization(&p, &q, m) {
                return false;
            }
        }
        p.n() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "chain")]
pub enum HajosFactorizationVerdict {
    Yes(HajosFactorizationChain),
    No,
}

impl HajosFactorizationVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, HajosFactorizationVerdict::Yes(_))
    }
}

type Memo = HashMap<(ResidueSet, ResidueSet), Option<Vec<(usize, Side)>>>;

fn search(p: &ResidueSet, q: &ResidueSet, memo: &mut Memo) -> Option<Vec<(usize, Side)>> {
    let n = p.n();
    if n == 1 {
        return Some(Vec::new());
    }
    // Hajós-ness is invariant under translating either side.
    let key = (
        p.translate(-(p.first().unwrap() as i64)),
        q.translate(-(q.first().unwrap() as i64)),
    );
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let mut found = None;
    'outer: for m in divisors(n).into_iter().filter(|&m| m < n) {
        for side in [Side::P, Side::Q] {
            let periodic = match side {
                Side::P => p.is_periodic(m),
                Side::Q => q.is_periodic(m),
            };
            if !periodic {
                continue;
            }
            let (pr, qr) = (p.reduce_mod(m), q.reduce_mod(m));
            if !is_factorization(&pr, &qr, m) {
                continue;
            }
            if let Some(rest) = search(&pr, &qr, memo) {
                let mut steps = vec![(m, side)];
                steps.extend(rest);
                found = Some(steps);
                break 'outer;
            }
        }
    }
    memo.insert(key, found.clone());
    found
}

/// Exhaustive recognition over every proper divisor period on both sides.
pub fn is_hajos_factorization(f: &FactorizationPair) -> Result<HajosFactorizationVerdict> {
    if !is_factorization(f.p(), f.q(), f.n()) {
        return Err(Error::NotAFactorization(f.n()));
    }
    Ok(match search(f.p(), f.q(), &mut Memo::new()) {
        Some(steps) => HajosFactorizationVerdict::Yes(HajosFactorizationChain { steps }),
        None => HajosFactorizationVerdict::No,
    })
}
