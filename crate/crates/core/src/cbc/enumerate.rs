//! Backtracking enumeration of all n-cbc with incremental cycle pruning.

use std::ops::ControlFlow;

use super::{BayonetPair, Cbc};
use crate::error::{Error, Result};

/// Default largest `n` accepted by the enumerators.
pub const DEFAULT_ENUMERATION_BOUND: usize = 6;

/// Hard limit of the bitmask representation.
pub(crate) const HARD_LIMIT: usize = 32;

struct Enumerator<'f> {
    n: usize,
    chosen: Vec<(usize, usize)>,
    taken: Vec<bool>,
    // Free cells at or after each index; only required cells are pre-taken.
    free_suffix: Vec<usize>,
    visit: &'f mut dyn FnMut(&[BayonetPair]) -> ControlFlow<()>,
}

/// Successor masks of the compatibility graph of a partial set.
pub(crate) type Adjacency = [u32; HARD_LIMIT];

pub(crate) fn has_zero_cycle(adj: &Adjacency, n: usize) -> bool {
    let mut reach = adj[0];
    loop {
        if reach & 1 == 1 {
            return true;
        }
        let mut next = reach;
        let mut bits = reach;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            next |= adj[v];
        }
        if next == reach {
            return false;
        }
        reach = next;
        debug_assert!(reach >> n == 0);
    }
}

pub(crate) fn add_edges(adj: &mut Adjacency, n: usize, chosen: &[(usize, usize)], (i, j): (usize, usize)) {
    for &(i2, j2) in chosen {
        adj[(i + n - i2) % n] |= 1 << ((j2 + n - j) % n);
        adj[(i2 + n - i) % n] |= 1 << ((j + n - j2) % n);
    }
}

impl Enumerator<'_> {
    fn run(&mut self, adj: &Adjacency, from: usize) -> ControlFlow<()> {
        let n = self.n;
        if self.chosen.len() == n {
            let mut pairs = self.chosen.clone();
            pairs.sort_unstable();
            return (self.visit)(&pairs);
        }
        let need = n - self.chosen.len();
        let cells = n * n;
        for cell in from..cells {
            if self.taken[cell] {
                continue;
            }
            if self.free_suffix[cell] < need {
                break;
            }
            let pair = (cell / n, cell % n);
            let mut next = *adj;
            add_edges(&mut next, n, &self.chosen, pair);
            if has_zero_cycle(&next, n) {
                continue;
            }
            self.chosen.push(pair);
            self.taken[cell] = true;
            let flow = self.run(&next, cell + 1);
            self.taken[cell] = false;
            self.chosen.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `visit` on every n-cbc containing `required`, in lexicographic order
/// of the sorted pair lists restricted to the free cells.
pub fn for_each_cbc_containing(
    n: usize,
    bound: usize,
    required: &[BayonetPair],
    visit: &mut dyn FnMut(&[BayonetPair]) -> ControlFlow<()>,
) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if n > bound.min(HARD_LIMIT) {
        return Err(Error::EnvelopeExceeded(format!(
            "cbc enumeration is limited to n ≤ {}, got {n}",
            bound.min(HARD_LIMIT)
        )));
    }
    let mut req = required.to_vec();
    req.sort_unstable();
    req.dedup();
    if let Some(&(i, j)) = req.iter().find(|&&(i, j)| i >= n || j >= n) {
        return Err(Error::OutOfRange { value: i.max(j), n });
    }
    if req.len() > n {
        return Ok(());
    }
    let mut adj: Adjacency = [0; HARD_LIMIT];
    let mut chosen = Vec::new();
    let mut taken = vec![false; n * n];
    for &p in &req {
        add_edges(&mut adj, n, &chosen, p);
        chosen.push(p);
        taken[p.0 * n + p.1] = true;
    }
    if has_zero_cycle(&adj, n) {
        return Ok(());
    }
    let mut free_suffix = vec![0; n * n + 1];
    for c in (0..n * n).rev() {
        free_suffix[c] = free_suffix[c + 1] + usize::from(!taken[c]);
    }
    let mut e = Enumerator { n, chosen, taken, free_suffix, visit };
    let _ = e.run(&adj, 0);
    Ok(())
}

/// Calls `visit` on every n-cbc in lexicographic order; `visit` may stop early.
pub fn for_each_cbc(
    n: usize,
    bound: usize,
    visit: &mut dyn FnMut(&[BayonetPair]) -> ControlFlow<()>,
) -> Result<()> {
    for_each_cbc_containing(n, bound, &[], visit)
}

/// All n-cbc, in lexicographic order of their sorted pair lists.
pub fn enumerate_cbc(n: usize, bound: usize) -> Result<Vec<Cbc>> {
    let mut out = Vec::new();
    for_each_cbc(n, bound, &mut |pairs| {
        out.push(Cbc::from_sorted_unchecked(n, pairs.to_vec()));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::is_cbc;
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_cbc(1, 6).unwrap(), vec![Cbc::unit()]);
        assert_eq!(enumerate_cbc(2, 6).unwrap().len(), 6);
        assert_eq!(enumerate_cbc(3, 6).unwrap().len(), 48);
    }

    #[test]
    fn agrees_with_direct_recognition() {
        for n in 1..=3usize {
            let listed = enumerate_cbc(n, 6).unwrap();
            assert!(listed.windows(2).all(|w| w[0] < w[1]));
            let cells: Vec<BayonetPair> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
            let mut brute = 0;
            for mask in 0u32..(1 << cells.len()) {
                if mask.count_ones() as usize == n {
                    let pairs: Vec<_> =
                        (0..cells.len()).filter(|b| mask >> b & 1 == 1).map(|b| cells[b]).collect();
                    if is_cbc(n, &pairs).unwrap().is_yes() {
                        brute += 1;
                    }
                }
            }
            assert_eq!(brute, listed.len());
        }
    }

    #[test]
    fn envelope() {
        assert!(matches!(enumerate_cbc(7, 6), Err(Error::EnvelopeExceeded(_))));
        let mut count = 0;
        for_each_cbc_containing(3, 6, &[(0, 0), (1, 0)], &mut |p| {
            assert!(p.contains(&(0, 0)) && p.contains(&(1, 0)));
            count += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        assert!(count > 0);
    }
}
