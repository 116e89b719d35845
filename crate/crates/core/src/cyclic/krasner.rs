use serde::{Deserialize, Serialize};

use super::{FactorizationPair, ResidueSet};
use crate::error::{Error, Result};

/// The ordered factor chain `t₁, …, t_k` a Krasner factorization is built from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KrasnerChain {
    pub factors: Vec<usize>,
    pub swapped: bool,
}

impl KrasnerChain {
    /// `U = Σ_{i even} t₁⋯t_{i−1}⟦t_i⟧`, `V = Σ_{i odd} t₁⋯t_{i−1}⟦t_i⟧`; the
    /// pair is `(U, V)`, or `(V, U)` when swapped.
    pub fn expand(&self) -> Result<FactorizationPair> {
        if self.factors.iter().any(|&t| t < 2) {
            return Err(Error::InvalidInput("Krasner factors must exceed 1".into()));
        }
        let n: usize = self.factors.iter().product();
        let mut u = vec![0i64];
        let mut v = vec![0i64];
        let mut scale = 1usize;
        for (idx, &t) in self.factors.iter().enumerate() {
            let target = if (idx + 1) % 2 == 0 { &mut u } else { &mut v };
            *target = target
                .iter()
                .flat_map(|&x| (0..t).map(move |c| x + (scale * c) as i64))
                .collect();
            scale *= t;
        }
        let (u, v) = (ResidueSet::from_values(n, u), ResidueSet::from_values(n, v));
        let pair = if self.swapped { (v, u) } else { (u, v) };
        FactorizationPair::new(pair.0, pair.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KrasnerFactorization {
    pub factorization: FactorizationPair,
    pub chain: KrasnerChain,
}

fn ordered_chains(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 1 {
        out.push(prefix.clone());
        return;
    }
    for t in 2..=n {
        if n % t == 0 {
            prefix.push(t);
            ordered_chains(n / t, prefix, out);
            prefix.pop();
        }
    }
}

/// Every Krasner factorization of size `n`, each listed once with the first
/// chain (in lexicographic chain order) that produces it.
pub fn enumerate_krasner(n: usize) -> Vec<KrasnerFactorization> {
    assert!(n >= 1, "size must be positive");
    let mut chains = Vec::new();
    ordered_chains(n, &mut Vec::new(), &mut chains);
    let mut out: Vec<KrasnerFactorization> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for factors in chains {
        for swapped in [false, true] {
            let chain = KrasnerChain {
                factors: factors.clone(),
                swapped,
            };
            let factorization = chain.expand().expect("Krasner chains expand to factorizations");
            if seen.insert(factorization.clone()) {
                out.push(KrasnerFactorization { factorization, chain });
            }
        }
    }
    out
}

/// True iff `|P|·|Q| = n` and every `k ∈ ⟦n⟧` is an integer sum `p + q`.
pub fn is_krasner(p: &ResidueSet, q: &ResidueSet) -> bool {
    let n = p.n();
    if q.n() != n || p.len() * q.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for x in p.iter() {
        for y in q.iter() {
            if x + y < n {
                hit[x + y] = true;
            }
        }
    }
    hit.into_iter().all(|h| h)
}
