//! Construction of a cbc bordering a compatible family, by compositions of
//! a seed member with members of the family.

use serde::{Deserialize, Serialize};

use super::{border_check_family, Border, TraceStep};
use crate::cbc::{compose_pairs, is_compatible, Cbc, CbcFamily};
use crate::cyclic::{is_factorization, FactorizationPair, ResidueSet};
use crate::error::{Error, Result};

const TRACE_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedBorderReport {
    pub seed: usize,
    pub bordering_cbc: Cbc,
    pub composition_trace: Vec<TraceStep>,
    pub factorizations: Vec<FactorizationPair>,
}

impl NormalizedBorderReport {
    /// Recomputes the cbc from the seed and the trace.
    pub fn replay(&self, family: &CbcFamily) -> Result<Cbc> {
        let members = family.members();
        let seed = members
            .get(self.seed)
            .ok_or_else(|| Error::InvalidInput(format!("no member with id {}", self.seed)))?;
        let n = family.n();
        let mut pairs = seed.pairs().to_vec();
        for s in &self.composition_trace {
            let x = members
                .get(s.member)
                .ok_or_else(|| Error::InvalidInput(format!("no member with id {}", s.member)))?;
            if s.r >= n {
                return Err(Error::OutOfRange { value: s.r, n });
            }
            pairs = compose_pairs(n, &pairs, x.pairs(), s.r);
        }
        Cbc::new(n, pairs)
    }

    /// Pure check of every claim of the report.
    pub fn verify(&self, family: &CbcFamily) -> bool {
        let Ok(y) = self.replay(family) else { return false };
        if y != self.bordering_cbc {
            return false;
        }
        let classes = y.right_classes();
        let disjoint = classes
            .iter()
            .enumerate()
            .all(|(a, r)| classes[a + 1..].iter().all(|s| r.iter().all(|v| !s.contains(v))));
        let l = y.left_set();
        let expected: Vec<FactorizationPair> = classes
            .iter()
            .filter_map(|r| FactorizationPair::new(r.clone(), l.clone()).ok())
            .collect();
        disjoint
            && expected.len() == classes.len()
            && expected == self.factorizations
            && self
                .factorizations
                .iter()
                .all(|f| border_check_family(&Border::from_factorization(f), family))
    }
}

fn first_gap(r: &ResidueSet, l: &ResidueSet, n: usize) -> Option<usize> {
    let mut hit = vec![false; n];
    for a in r.iter() {
        for b in l.iter() {
            hit[(a + b) % n] = true;
        }
    }
    hit.iter().position(|&h| !h)
}

fn first_uncovered_cell(r: &ResidueSet, x: &Cbc, l: &ResidueSet) -> Option<(usize, usize)> {
    let n = x.n();
    let mut hit = vec![false; n * n];
    for a in r.iter() {
        for &(i, j) in x.pairs() {
            for b in l.iter() {
                hit[((a + i) % n) * n + (j + b) % n] = true;
            }
        }
    }
    hit.iter().position(|&h| !h).map(|c| (c / n, c % n))
}

struct Builder<'f> {
    family: &'f CbcFamily,
    seed: usize,
    y: Cbc,
    trace: Vec<TraceStep>,
}

impl Builder<'_> {
    fn then(&self, y: &Cbc, member: usize, r: usize) -> Cbc {
        let n = y.n();
        let pairs = compose_pairs(n, y.pairs(), self.family.members()[member].pairs(), r);
        assert_eq!(pairs.len(), n, "composition inside a compatible family lost words");
        Cbc::new(n, pairs).expect("compositions of compatible cbc are cbc")
    }

    /// `Y ← Y ∘_{r₁} X_{m₁} ∘ … ∘_{r_k} X_{m_k} ∘_r Y`.
    fn extend(&mut self, middle: &[TraceStep], r: usize) -> Result<()> {
        let mut y = self.y.clone();
        for s in middle {
            y = self.then(&y, s.member, s.r);
        }
        y = self.then(&y, self.seed, r);
        for s in &self.trace.clone() {
            y = self.then(&y, s.member, s.r);
        }
        let old = std::mem::take(&mut self.trace);
        let mut trace = old.clone();
        trace.extend_from_slice(middle);
        trace.push(TraceStep { member: self.seed, r });
        trace.extend_from_slice(&old);
        if trace.len() > TRACE_LIMIT {
            return Err(Error::EnvelopeExceeded(format!(
                "composition trace exceeds {TRACE_LIMIT} steps"
            )));
        }
        self.trace = trace;
        self.y = y;
        Ok(())
    }

    /// Finds the first `k ∈ L(Y)` whose pair `(R^k(Y), L(Y))` fails to be a
    /// factorization bordering the family, and the composition that removes `k`.
    fn shrink_step(&self) -> Result<Option<(Vec<TraceStep>, usize)>> {
        let n = self.y.n();
        let l = self.y.left_set();
        for k in l.iter() {
            let r = self.y.right_of(k)?;
            if let Some(i) = first_gap(&r, &l, n) {
                return Ok(Some((Vec::new(), i)));
            }
            if !is_factorization(&r, &l, n) {
                return self.fallback_shrink(l.len()).map(Some);
            }
            for (id, x) in self.family.members().iter().enumerate() {
                if let Some((i, j)) = first_uncovered_cell(&r, x, &l) {
                    return Ok(Some((vec![TraceStep { member: id, r: i }], j)));
                }
            }
        }
        Ok(None)
    }

    /// When `R^k(Y) + L(Y)` covers `Z_n` with repetitions there is no gap to
    /// exploit; the first `Y ∘_c Y`, then `Y ∘_i X ∘_j Y`, with a smaller left
    /// set is used instead.
    fn fallback_shrink(&self, size: usize) -> Result<(Vec<TraceStep>, usize)> {
        let n = self.y.n();
        let seed = &self.family.members()[self.seed];
        let tail = |mut pairs: Vec<(usize, usize)>, r: usize| {
            pairs = compose_pairs(n, &pairs, seed.pairs(), r);
            for s in &self.trace {
                pairs = compose_pairs(n, &pairs, self.family.members()[s.member].pairs(), s.r);
            }
            pairs
        };
        let left = |pairs: &[(usize, usize)]| ResidueSet::from_values(n, pairs.iter().map(|p| p.0 as i64)).len();
        for c in 0..n {
            if left(&tail(self.y.pairs().to_vec(), c)) < size {
                return Ok((Vec::new(), c));
            }
        }
        for (id, x) in self.family.members().iter().enumerate() {
            for i in 0..n {
                let mid = compose_pairs(n, self.y.pairs(), x.pairs(), i);
                for j in 0..n {
                    if left(&tail(mid.clone(), j)) < size {
                        return Ok((vec![TraceStep { member: id, r: i }], j));
                    }
                }
            }
        }
        Err(Error::Unsupported(format!(
            "no single composition shrinks the left set of {}",
            self.y
        )))
    }

    fn merge_step(&self) -> Option<usize> {
        let classes = self.y.right_classes();
        let n = self.y.n();
        let l0 = self.y.left_set().first().expect("nonempty cbc");
        for (a, r) in classes.iter().enumerate() {
            for s in &classes[a + 1..] {
                if let Some(v) = r.iter().find(|&v| s.contains(v)) {
                    return Some((v + l0) % n);
                }
            }
        }
        None
    }
}

/// Composes the seed with members of a compatible family until the result
/// borders the family and has pairwise disjoint right classes.
///
/// Failing classes are handled in increasing `k`, then member id, then
/// lexicographic `(i, j)`.
pub fn find_border(family: &CbcFamily, seed: usize) -> Result<NormalizedBorderReport> {
    is_compatible(family).map_err(|inc| Error::Incompatible(Box::new(inc)))?;
    let y = family
        .members()
        .get(seed)
        .ok_or_else(|| Error::InvalidInput(format!("no member with id {seed}")))?
        .clone();
    let mut b = Builder { family, seed, y, trace: Vec::new() };
    while let Some((middle, r)) = b.shrink_step()? {
        let before = b.y.left_set().len();
        b.extend(&middle, r)?;
        assert!(b.y.left_set().len() < before, "left set must shrink");
    }
    while let Some(r) = b.merge_step() {
        let before = b.y.right_classes();
        let left = b.y.left_set();
        b.extend(&[], r)?;
        let after = b.y.right_classes();
        assert!(after.len() < before.len() && after.iter().all(|c| before.contains(c)));
        assert_eq!(b.y.left_set(), left);
    }
    let l = b.y.left_set();
    let factorizations = b
        .y
        .right_classes()
        .into_iter()
        .map(|r| FactorizationPair::new(r, l.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormalizedBorderReport {
        seed,
        bordering_cbc: b.y,
        composition_trace: b.trace,
        factorizations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cbc::fixtures::cbc8;
    use crate::cbc::{enumerate_cbc, stable_closure};

    fn stable4() -> CbcFamily {
        let ceb = Cbc::new(4, [(0, 0), (1, 0), (2, 1), (3, 0)]).unwrap();
        let cebb = Cbc::new(4, [(0, 0), (1, 0), (2, 0), (3, 0)]).unwrap();
        CbcFamily::new(vec![ceb, cebb]).unwrap()
    }

    #[test]
    fn eight_cbc() {
        let fam = CbcFamily::singleton(cbc8());
        let rep = find_border(&fam, 0).unwrap();
        assert!(rep.verify(&fam));
        let closed = stable_closure(&fam).unwrap();
        for f in &rep.factorizations {
            assert!(border_check_family(&Border::from_factorization(f), &closed));
        }
    }

    #[test]
    fn unit_family() {
        let fam = CbcFamily::singleton(Cbc::unit());
        let rep = find_border(&fam, 0).unwrap();
        assert!(rep.composition_trace.is_empty());
        assert_eq!(rep.factorizations, vec![FactorizationPair::from_elements(1, &[0], &[0]).unwrap()]);
    }

    #[test]
    fn stable_set_yields_krasner_border_up_to_translation() {
        let fam = stable4();
        for seed in 0..2 {
            let rep = find_border(&fam, seed).unwrap();
            assert!(rep.verify(&fam));
            let found = rep.factorizations.iter().any(|f| {
                let g = f.normalized();
                g.p().len() == 1 && g.q().len() == 4
            });
            assert!(found, "{rep:?}");
        }
    }

    #[test]
    fn every_small_singleton() {
        for n in 1..=5 {
            for x in enumerate_cbc(n, 6).unwrap() {
                let fam = CbcFamily::singleton(x);
                assert!(find_border(&fam, 0).unwrap().verify(&fam));
            }
        }
    }
}
