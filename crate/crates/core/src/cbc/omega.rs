//! `C_M(ω) = {(i mod n, j mod n) : a^i ω a^j ∈ M*}` through the flower
//! automaton of `M`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{BayonetPair, Cbc};
use crate::error::{Error, Result};
use crate::words::{is_code, CodeVerdict, FiniteCode, Word};

type StateSet = Vec<usize>;

/// Nondeterministic recognizer of `M*`: states are the proper prefixes of
/// words of `M`, the empty prefix being both initial and final.
struct Flower {
    next: Vec<HashMap<u8, Vec<usize>>>,
}

impl Flower {
    fn new(m: &FiniteCode) -> Self {
        let mut ids: HashMap<Vec<u8>, usize> = HashMap::new();
        ids.insert(Vec::new(), 0);
        for w in m.iter() {
            for k in 1..w.len() {
                let len = ids.len();
                ids.entry(w.letters()[..k].to_vec()).or_insert(len);
            }
        }
        let mut next = vec![HashMap::new(); ids.len()];
        for w in m.iter() {
            let l = w.letters();
            for k in 0..l.len() {
                let from = ids[&l[..k]];
                let to = if k + 1 == l.len() { 0 } else { ids[&l[..=k]] };
                let slot: &mut Vec<usize> = next[from].entry(l[k]).or_default();
                if !slot.contains(&to) {
                    slot.push(to);
                }
            }
        }
        Flower { next }
    }

    fn step(&self, s: &StateSet, c: u8) -> StateSet {
        let set: BTreeSet<usize> = s
            .iter()
            .filter_map(|&q| self.next[q].get(&c))
            .flatten()
            .copied()
            .collect();
        set.into_iter().collect()
    }

    fn read(&self, s: &StateSet, w: &Word) -> StateSet {
        w.letters().iter().fold(s.clone(), |acc, &c| self.step(&acc, c))
    }

    /// All `(a^k-image of s, k mod n)` pairs; the joint sequence is eventually
    /// periodic, so iteration stops at the first repeat.
    fn a_orbit(&self, s: &StateSet, n: usize) -> Vec<(StateSet, usize)> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let (mut cur, mut r) = (s.clone(), 0usize);
        while seen.insert((cur.clone(), r)) {
            out.push((cur.clone(), r));
            cur = self.step(&cur, b'a');
            r = (r + 1) % n;
        }
        out
    }
}

fn check_input(m: &FiniteCode, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if !m.contains(&Word::power(b'a', n)) {
        return Err(Error::Precondition(format!("a^{n} must belong to M")));
    }
    if let CodeVerdict::NotCode(w) = is_code(m)? {
        return Err(Error::NotACode(Box::new(w)));
    }
    Ok(())
}

fn residue_pairs(flower: &Flower, n: usize, omega: &Word) -> Vec<BayonetPair> {
    let mut out = BTreeSet::new();
    let mut cache: HashMap<StateSet, Vec<usize>> = HashMap::new();
    for (s, i) in flower.a_orbit(&vec![0], n) {
        let crossed = flower.read(&s, omega);
        if crossed.is_empty() {
            continue;
        }
        let rights = cache.entry(crossed.clone()).or_insert_with(|| {
            let mut js: Vec<usize> = flower
                .a_orbit(&crossed, n)
                .into_iter()
                .filter(|(t, _)| t.contains(&0))
                .map(|(_, j)| j)
                .collect();
            js.sort_unstable();
            js.dedup();
            js
        });
        for &j in rights.iter() {
            out.insert((i, j));
        }
    }
    out.into_iter().collect()
}

/// The raw residue pairs of `C_M(ω)`; fewer than `n` when `M` is not maximal.
pub fn c_of_omega_pairs(m: &FiniteCode, n: usize, omega: &Word) -> Result<Vec<BayonetPair>> {
    check_input(m, n)?;
    Ok(residue_pairs(&Flower::new(m), n, omega))
}

/// `C_M(ω)` as an n-cbc. Fails when it has fewer than `n` words.
pub fn c_of_omega(m: &FiniteCode, n: usize, omega: &Word) -> Result<Cbc> {
    let pairs = c_of_omega_pairs(m, n, omega)?;
    if pairs.len() != n {
        return Err(Error::Precondition(format!(
            "C_M({omega}) has {} words instead of {n}, so M is not maximal",
            pairs.len()
        )));
    }
    Cbc::new(n, pairs)
}

/// Result of checking `|C_M(ω)| = n` over all short words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum MaximalitySweep {
    /// No violation up to the length bound; this does not prove maximality.
    NoViolationUpTo { max_len: usize, words_checked: usize },
    Violation { omega: Word, size: usize },
}

/// Bounded necessary-condition sweep for maximality over the alphabet of `M`.
pub fn maximality_sweep(m: &FiniteCode, n: usize, max_len: usize) -> Result<MaximalitySweep> {
    check_input(m, n)?;
    let flower = Flower::new(m);
    let alphabet = m.alphabet();
    let mut layer = vec![Word::empty()];
    let mut checked = 0;
    for _ in 0..=max_len {
        for omega in &layer {
            checked += 1;
            let size = residue_pairs(&flower, n, omega).len();
            if size != n {
                return Ok(MaximalitySweep::Violation { omega: omega.clone(), size });
            }
        }
        layer = layer
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&c| {
                    let mut v = w.letters().to_vec();
                    v.push(c);
                    Word::from_letters(v).expect("alphabet letters")
                })
            })
            .collect();
    }
    Ok(MaximalitySweep::NoViolationUpTo { max_len, words_checked: checked })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::code_e;
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn worked_values() {
        let e = code_e();
        let ceb = c_of_omega(&e, 4, &w("b")).unwrap();
        assert_eq!(ceb.words(), FiniteCode::parse_list("b ab aaba aaab").unwrap());
        let cebb = c_of_omega(&e, 4, &w("bb")).unwrap();
        assert_eq!(cebb.words(), FiniteCode::parse_list("b ab aab aaab").unwrap());
    }

    #[test]
    fn trivial_alphabet() {
        let m = FiniteCode::parse_list("a b").unwrap();
        assert_eq!(c_of_omega(&m, 1, &w("b")).unwrap(), Cbc::unit());
    }

    #[test]
    fn preconditions_and_incompleteness() {
        let r = FiniteCode::parse_list("aaaaa ab b baa").unwrap();
        assert!(c_of_omega_pairs(&r, 5, &w("b")).unwrap().len() < 5);
        assert!(c_of_omega(&r, 5, &w("b")).is_err());
        assert!(c_of_omega(&code_e(), 3, &w("b")).is_err());
        let not_code = FiniteCode::parse_list("aaaa a b").unwrap();
        assert!(matches!(c_of_omega(&not_code, 4, &w("b")), Err(Error::NotACode(_))));
    }

    #[test]
    fn bounded_sweep() {
        assert!(matches!(
            maximality_sweep(&code_e(), 4, 4).unwrap(),
            MaximalitySweep::NoViolationUpTo { .. }
        ));
        let r = FiniteCode::parse_list("aaaaa ab b baa").unwrap();
        assert!(matches!(maximality_sweep(&r, 5, 3).unwrap(), MaximalitySweep::Violation { .. }));
    }
}
