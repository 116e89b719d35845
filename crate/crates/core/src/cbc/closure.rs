use std::collections::HashSet;

use super::{compose_pairs, is_compatible, Cbc, CbcFamily};
use crate::error::{Error, Result};

/// Default cap on the number of members a materialized closure may reach.
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// The least stable family containing the input: closed under every `∘_r`.
pub fn stable_closure(family: &CbcFamily) -> Result<CbcFamily> {
    stable_closure_capped(family, DEFAULT_CLOSURE_CAP)
}

/// As [`stable_closure`], failing with `EnvelopeExceeded` past `cap` members.
/// Members are listed in discovery order, inputs first.
pub fn stable_closure_capped(family: &CbcFamily, cap: usize) -> Result<CbcFamily> {
    is_compatible(family).map_err(|inc| Error::Incompatible(Box::new(inc)))?;
    let n = family.n();
    let mut members: Vec<Cbc> = family.members().to_vec();
    let mut seen: HashSet<Cbc> = members.iter().cloned().collect();
    let mut done = 0;
    while done < members.len() {
        let k = done;
        for s in 0..=k {
            for (x, y) in [(k, s), (s, k)] {
                for r in 0..n {
                    let pairs = compose_pairs(n, members[x].pairs(), members[y].pairs(), r);
                    // Compositions within a compatible family are cbc; a short
                    // result would mean the compatibility test is unsound.
                    assert_eq!(pairs.len(), n, "composition of compatible cbc lost words");
                    let c = Cbc::from_sorted_unchecked(n, pairs);
                    if !seen.contains(&c) {
                        if members.len() >= cap {
                            return Err(Error::EnvelopeExceeded(format!(
                                "stable closure exceeds {cap} members"
                            )));
                        }
                        seen.insert(c.clone());
                        members.push(c);
                    }
                }
            }
        }
        done += 1;
    }
    Ok(CbcFamily::from_members_unchecked(n, members))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::cbc8;
    use super::super::is_cbc;
    use super::*;

    fn cbc(n: usize, pairs: &[(usize, usize)]) -> Cbc {
        Cbc::new(n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn e_stable_set() {
        let ceb = cbc(4, &[(0, 0), (1, 0), (2, 1), (3, 0)]);
        let cebb = cbc(4, &[(0, 0), (1, 0), (2, 0), (3, 0)]);
        let fam = CbcFamily::new(vec![ceb.clone(), cebb.clone()]).unwrap();
        let closed = stable_closure(&fam).unwrap();
        let want = CbcFamily::new(vec![
            ceb,
            cebb,
            cbc(4, &[(0, 1), (1, 1), (2, 0), (3, 1)]),
            cbc(4, &[(0, 1), (1, 1), (2, 1), (3, 1)]),
        ])
        .unwrap();
        assert!(closed.same_set(&want), "{closed:?}");
        for m in closed.members() {
            assert!(is_cbc(4, m.pairs()).unwrap().is_yes());
        }
    }

    #[test]
    fn idempotent_and_trivial() {
        let unit = CbcFamily::singleton(Cbc::unit());
        assert!(stable_closure(&unit).unwrap().same_set(&unit));
        let closed = stable_closure(&CbcFamily::singleton(cbc8())).unwrap();
        assert!(stable_closure(&closed).unwrap().same_set(&closed));
        assert!(matches!(
            stable_closure_capped(&CbcFamily::singleton(cbc8()), 1),
            Err(Error::EnvelopeExceeded(_)) | Ok(_)
        ));
    }
}
