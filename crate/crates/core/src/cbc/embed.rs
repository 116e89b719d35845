use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::enumerate::{add_edges, for_each_cbc_containing, has_zero_cycle, Adjacency, HARD_LIMIT};
use super::{BayonetPair, Cbc};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum EmbedVerdict {
    /// One cbc per required set, jointly compatible.
    Yes { members: Vec<Cbc> },
    /// Every tuple of candidates was examined and none is compatible.
    No {
        candidate_counts: Vec<usize>,
        tuples_examined: u64,
    },
}

impl EmbedVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, EmbedVerdict::Yes { .. })
    }
}

fn adjacency(n: usize, pairs: &[BayonetPair]) -> Adjacency {
    let mut adj = [0; HARD_LIMIT];
    for (k, &p) in pairs.iter().enumerate() {
        add_edges(&mut adj, n, &pairs[..k], p);
    }
    adj
}

/// Searches for cbc `X_k ⊇ required[k]` forming a compatible family.
pub fn joint_embeddability(
    required: &[Vec<BayonetPair>],
    n: usize,
    bound: usize,
) -> Result<EmbedVerdict> {
    let mut candidates: Vec<Vec<(Vec<BayonetPair>, Adjacency)>> = Vec::new();
    for req in required {
        let mut found = Vec::new();
        for_each_cbc_containing(n, bound, req, &mut |pairs| {
            found.push((pairs.to_vec(), adjacency(n, pairs)));
            ControlFlow::Continue(())
        })?;
        candidates.push(found);
    }
    let candidate_counts: Vec<usize> = candidates.iter().map(Vec::len).collect();
    let mut examined = 0u64;
    let mut picks = Vec::new();
    let found = search(&candidates, n, &[0; HARD_LIMIT], &mut picks, &mut examined);
    Ok(if found {
        EmbedVerdict::Yes {
            members: picks
                .iter()
                .enumerate()
                .map(|(k, &c)| Cbc::from_sorted_unchecked(n, candidates[k][c].0.clone()))
                .collect(),
        }
    } else {
        EmbedVerdict::No { candidate_counts, tuples_examined: examined }
    })
}

fn search(
    candidates: &[Vec<(Vec<BayonetPair>, Adjacency)>],
    n: usize,
    union: &Adjacency,
    picks: &mut Vec<usize>,
    examined: &mut u64,
) -> bool {
    let depth = picks.len();
    if depth == candidates.len() {
        return true;
    }
    for (idx, (_, adj)) in candidates[depth].iter().enumerate() {
        *examined += 1;
        let mut next = *union;
        for v in 0..n {
            next[v] |= adj[v];
        }
        if has_zero_cycle(&next, n) {
            continue;
        }
        picks.push(idx);
        if search(candidates, n, &next, picks, examined) {
            return true;
        }
        picks.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::super::{is_compatible, CbcFamily};
    use super::*;

    #[test]
    fn non_embeddable_pair() {
        let v = joint_embeddability(&[vec![(1, 0), (1, 2)], vec![(2, 0), (1, 0)]], 5, 6).unwrap();
        match v {
            EmbedVerdict::No { candidate_counts, .. } => {
                assert!(candidate_counts.iter().all(|&c| c > 0));
            }
            EmbedVerdict::Yes { .. } => panic!("no compatible pair exists"),
        }
    }

    #[test]
    fn single_requirement() {
        match joint_embeddability(&[vec![(0, 0)]], 2, 6).unwrap() {
            EmbedVerdict::Yes { members } => {
                assert!(members[0].contains((0, 0)));
                assert!(is_compatible(&CbcFamily::new(members).unwrap()).is_ok());
            }
            EmbedVerdict::No { .. } => panic!("{{b}} extends to a 2-cbc"),
        }
    }
}
