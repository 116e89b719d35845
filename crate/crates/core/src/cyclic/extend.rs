//! Exact-cover search for factorizations with prescribed elements.

use serde::{Deserialize, Serialize};

use super::{divisors, FactorizationPair, ResidueSet};
use crate::error::{Error, Result};
use crate::words::{FiniteCode, Word};

/// Largest modulus handled by the bitmask search.
pub const SEARCH_LIMIT: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum ExtensionVerdict {
    Yes { factorization: FactorizationPair },
    /// Every `(|P|, |Q|)` split listed was searched exhaustively.
    No { splits: Vec<(usize, usize)> },
}

struct Search {
    n: usize,
    full: u128,
    a: usize,
    b: usize,
}

impl Search {
    fn rot(&self, mask: u128, k: usize) -> u128 {
        if k == 0 {
            return mask;
        }
        ((mask << k) | (mask >> (self.n - k))) & self.full
    }

    fn add_p(&self, p: u128, q: u128, cov: u128, x: usize) -> Option<(u128, u128)> {
        let s = self.rot(q, x);
        (s & cov == 0).then_some((p | 1 << x, cov | s))
    }

    fn add_q(&self, p: u128, q: u128, cov: u128, y: usize) -> Option<(u128, u128)> {
        let s = self.rot(p, y);
        (s & cov == 0).then_some((q | 1 << y, cov | s))
    }

    /// Calls `emit` on each completion; stops early when `emit` returns true.
    fn run(&self, p: u128, q: u128, cov: u128, emit: &mut dyn FnMut(u128, u128) -> bool) -> bool {
        if cov == self.full {
            return emit(p, q);
        }
        let x = (!cov).trailing_zeros() as usize;
        let (pc, qc) = (p.count_ones() as usize, q.count_ones() as usize);
        for pe in 0..self.n {
            let qe = (x + self.n - pe) % self.n;
            let p_in = p >> pe & 1 == 1;
            let q_in = q >> qe & 1 == 1;
            if (!p_in && pc == self.a) || (!q_in && qc == self.b) {
                continue;
            }
            let (mut p2, mut cov2) = (p, cov);
            if !p_in {
                match self.add_p(p, q, cov, pe) {
                    Some(v) => (p2, cov2) = v,
                    None => continue,
                }
            }
            let mut q2 = q;
            if !q_in {
                match self.add_q(p2, q, cov2, qe) {
                    Some(v) => (q2, cov2) = v,
                    None => continue,
                }
            }
            if self.run(p2, q2, cov2, emit) {
                return true;
            }
        }
        false
    }

    /// Seeds the search with the prescribed elements; `None` when they collide.
    fn seed(&self, p0: &ResidueSet, q0: &ResidueSet) -> Option<(u128, u128, u128)> {
        let (mut p, mut q, mut cov) = (0u128, 0u128, 0u128);
        for x in p0.iter() {
            (p, cov) = self.add_p(p, q, cov, x)?;
        }
        for y in q0.iter() {
            (q, cov) = self.add_q(p, q, cov, y)?;
        }
        Some((p, q, cov))
    }
}

fn mask_to_set(n: usize, mask: u128) -> ResidueSet {
    ResidueSet::from_values(n, (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| i as i64))
}

fn full_mask(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn check_envelope(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if n > SEARCH_LIMIT {
        return Err(Error::EnvelopeExceeded(format!(
            "factorization search supports n ≤ {SEARCH_LIMIT}, got {n}"
        )));
    }
    Ok(())
}

/// Looks for a factorization `(P, Q)` of Z_n with `P0 ⊆ P` and `Q0 ⊆ Q`.
pub fn extend_to_factorization(
    p0: &ResidueSet,
    q0: &ResidueSet,
    n: usize,
) -> Result<ExtensionVerdict> {
    check_envelope(n)?;
    if p0.n() != n || q0.n() != n {
        return Err(Error::ModulusMismatch {
            expected: n,
            found: if p0.n() != n { p0.n() } else { q0.n() },
        });
    }
    let mut splits = Vec::new();
    for a in divisors(n) {
        let b = n / a;
        if a < p0.len() || b < q0.len() {
            continue;
        }
        splits.push((a, b));
        let search = Search { n, full: full_mask(n), a, b };
        let Some((p, q, cov)) = search.seed(p0, q0) else {
            continue;
        };
        let mut hit = None;
        search.run(p, q, cov, &mut |p, q| {
            hit = Some((p, q));
            true
        });
        if let Some((p, q)) = hit {
            let factorization = FactorizationPair::new(mask_to_set(n, p), mask_to_set(n, q))?;
            return Ok(ExtensionVerdict::Yes { factorization });
        }
    }
    Ok(ExtensionVerdict::No { splits })
}

/// Every normalized factorization (`0 ∈ P`, `0 ∈ Q`) of Z_n, each exactly once.
pub fn enumerate_factorizations(n: usize) -> Result<Vec<FactorizationPair>> {
    check_envelope(n)?;
    let zero = ResidueSet::from_values(n, [0]);
    let mut out = Vec::new();
    for a in divisors(n) {
        let search = Search { n, full: full_mask(n), a, b: n / a };
        let (p, q, cov) = search.seed(&zero, &zero).expect("0 + 0 never collides");
        search.run(p, q, cov, &mut |p, q| {
            out.push((p, q));
            false
        });
    }
    out.into_iter()
        .map(|(p, q)| FactorizationPair::new(mask_to_set(n, p), mask_to_set(n, q)))
        .collect()
}

/// `({k : a^k b⁺ ∈ M}, {k : b⁺ a^k ∈ M})` reduced mod n.
pub fn extract_restivo_pair(m: &FiniteCode, n: usize) -> Result<(ResidueSet, ResidueSet)> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if !m.contains(&Word::bayonet(0, 0)) {
        return Err(Error::Precondition("b must belong to M".into()));
    }
    if !m.contains(&Word::power(b'a', n)) {
        return Err(Error::Precondition(format!("a^{n} must belong to M")));
    }
    let mut p = ResidueSet::empty(n);
    let mut q = ResidueSet::empty(n);
    for w in m.iter() {
        let l = w.letters();
        let lead_a = l.iter().take_while(|&&c| c == b'a').count();
        if lead_a < l.len() && l[lead_a..].iter().all(|&c| c == b'b') {
            p.insert(lead_a % n);
        }
        let lead_b = l.iter().take_while(|&&c| c == b'b').count();
        if lead_b > 0 && l[lead_b..].iter().all(|&c| c == b'a') {
            q.insert((l.len() - lead_b) % n);
        }
    }
    Ok((p, q))
}

#[cfg(test)]
mod tests {
    use super::super::is_factorization;
    use super::*;

    fn rs(n: usize, v: &[usize]) -> ResidueSet {
        ResidueSet::from_elements(n, v).unwrap()
    }

    #[test]
    fn restivo_sets_do_not_extend() {
        let v = extend_to_factorization(&rs(5, &[0, 1]), &rs(5, &[0, 2]), 5).unwrap();
        assert!(matches!(v, ExtensionVerdict::No { .. }));
    }

    #[test]
    fn extension_in_z8() {
        match extend_to_factorization(&rs(8, &[0, 1]), &rs(8, &[0, 2]), 8).unwrap() {
            ExtensionVerdict::Yes { factorization } => {
                assert!(rs(8, &[0, 1]).is_subset(factorization.p()));
                assert!(rs(8, &[0, 2]).is_subset(factorization.q()));
                assert!(is_factorization(factorization.p(), factorization.q(), 8));
            }
            ExtensionVerdict::No { .. } => panic!("({{0,1,4,5}},{{0,2}}) exists"),
        }
    }

    #[test]
    fn trivial_extension() {
        let v = extend_to_factorization(&ResidueSet::empty(1), &ResidueSet::empty(1), 1).unwrap();
        assert_eq!(
            v,
            ExtensionVerdict::Yes {
                factorization: FactorizationPair::from_elements(1, &[0], &[0]).unwrap()
            }
        );
    }

    #[test]
    fn enumeration_is_exhaustive_and_duplicate_free() {
        for n in 1..=12usize {
            let listed = enumerate_factorizations(n).unwrap();
            let set: std::collections::HashSet<_> = listed.iter().cloned().collect();
            assert_eq!(set.len(), listed.len());
            let mut brute = 0;
            for pm in (1u32..(1 << n)).filter(|m| m & 1 == 1) {
                let p: Vec<usize> = (0..n).filter(|i| pm >> i & 1 == 1).collect();
                if n % p.len() != 0 {
                    continue;
                }
                for qm in (1u32..(1 << n)).filter(|m| m & 1 == 1) {
                    if (qm.count_ones() as usize) * p.len() != n {
                        continue;
                    }
                    let q: Vec<usize> = (0..n).filter(|i| qm >> i & 1 == 1).collect();
                    if is_factorization(&rs(n, &p), &rs(n, &q), n) {
                        brute += 1;
                    }
                }
            }
            assert_eq!(brute, listed.len(), "n = {n}");
        }
    }

    #[test]
    fn restivo_extraction() {
        let e = FiniteCode::parse_list("b ab aaaa aaba aaab aabb").unwrap();
        let (p, q) = extract_restivo_pair(&e, 4).unwrap();
        assert_eq!((p.clone(), q.clone()), (rs(4, &[0, 1, 2, 3]), rs(4, &[0])));
        assert!(is_factorization(&p, &q, 4));
        let m = FiniteCode::parse_list("b aaaaa").unwrap();
        assert_eq!(extract_restivo_pair(&m, 5).unwrap(), (rs(5, &[0]), rs(5, &[0])));
        let r = FiniteCode::parse_list("aaaaa ab b baa").unwrap();
        assert_eq!(extract_restivo_pair(&r, 5).unwrap(), (rs(5, &[0, 1]), rs(5, &[0, 2])));
        assert!(extract_restivo_pair(&FiniteCode::parse_list("ab aaaa").unwrap(), 4).is_err());
        assert!(extract_restivo_pair(&e, 3).is_err());
    }
}
