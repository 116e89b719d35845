use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{FamilyHajosChain, Recognizer};
use crate::borders::{Border, Explorer, RowTables, CLOSURE_BORDER_LIMIT};
use crate::cbc::{for_each_cbc, is_compatible, Cbc, CbcFamily};
use crate::cyclic::{enumerate_krasner, KrasnerFactorization};
use crate::error::{Error, Result};

/// Krasner factorizations of one size with their residue lists.
struct KrasnerTable {
    list: Vec<KrasnerFactorization>,
    residues: Vec<(Vec<usize>, Vec<usize>)>,
}

impl KrasnerTable {
    fn new(n: usize) -> Self {
        let list = enumerate_krasner(n);
        let residues = list
            .iter()
            .map(|k| (k.factorization.p().to_vec(), k.factorization.q().to_vec()))
            .collect();
        KrasnerTable { list, residues }
    }

    fn first_bordering(&self, explorer: &mut Explorer, tables: &RowTables) -> Option<usize> {
        self.residues.iter().position(|(p, q)| explorer.borders(tables, p, q))
    }
}

fn check_family(family: &CbcFamily) -> Result<usize> {
    is_compatible(family).map_err(|inc| Error::Incompatible(Box::new(inc)))?;
    let n = family.n();
    if n > CLOSURE_BORDER_LIMIT {
        return Err(Error::EnvelopeExceeded(format!(
            "Krasner border search supports n ≤ {CLOSURE_BORDER_LIMIT}, got {n}"
        )));
    }
    Ok(n)
}

/// The first Krasner factorization, in enumeration order, bordering the
/// stable closure of a compatible family, or `None` after checking them all.
pub fn find_krasner_border(family: &CbcFamily) -> Result<Option<(KrasnerFactorization, Border)>> {
    let n = check_family(family)?;
    let table = KrasnerTable::new(n);
    let tables = RowTables::new(family.members());
    let mut explorer = Explorer::new(n);
    Ok(table.first_bordering(&mut explorer, &tables).map(|i| {
        let k = table.list[i].clone();
        let border = Border::from_factorization(&k.factorization);
        (k, border)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum KrasnerBorderVerdict {
    /// Both a decomposition and a Krasner border of the closure exist.
    Hajos { chain: FamilyHajosChain, krasner: KrasnerFactorization, border: Border },
    /// No decomposition, and none of the Krasner factorizations borders the closure.
    NotHajos { krasner_checked: usize },
    /// Only the decomposition path ran, the modulus being too large.
    DecompositionOnly { hajos: bool, chain: Option<FamilyHajosChain> },
    /// The two characterizations disagree.
    Disagreement { chain: Option<FamilyHajosChain>, border: Option<Border> },
}

/// Decides Hajós-ness of a compatible family by decomposition and by a Krasner
/// border of its stable closure, and reports whether both agree.
///
/// Decomposition uses per-member reductions.
pub fn krasner_border_equivalence(family: &CbcFamily) -> Result<KrasnerBorderVerdict> {
    is_compatible(family).map_err(|inc| Error::Incompatible(Box::new(inc)))?;
    let chain = Recognizer::new(false).family(family.members());
    if family.n() > CLOSURE_BORDER_LIMIT {
        return Ok(KrasnerBorderVerdict::DecompositionOnly { hajos: chain.is_some(), chain });
    }
    let found = find_krasner_border(family)?;
    Ok(match (chain, found) {
        (Some(chain), Some((krasner, border))) => KrasnerBorderVerdict::Hajos { chain, krasner, border },
        (None, None) => KrasnerBorderVerdict::NotHajos { krasner_checked: enumerate_krasner(family.n()).len() },
        (chain, found) => KrasnerBorderVerdict::Disagreement { chain, border: found.map(|f| f.1) },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    pub cbc_count: u64,
    pub hajos_count: u64,
    pub bordered_count: u64,
    /// Up to 16 cbc where the two characterizations disagree.
    pub disagreements: Vec<Cbc>,
    pub disagreement_count: u64,
}

/// Runs both characterizations on every n-cbc seen as a singleton family.
pub fn krasner_hajos_sweep(n: usize, bound: usize) -> Result<SweepReport> {
    let table = KrasnerTable::new(n);
    let mut explorer = Explorer::new(n);
    let mut recognizer = Recognizer::new(false);
    let mut report = SweepReport {
        n,
        cbc_count: 0,
        hajos_count: 0,
        bordered_count: 0,
        disagreements: Vec::new(),
        disagreement_count: 0,
    };
    let mut rows = vec![vec![0u128; n]];
    for_each_cbc(n, bound, &mut |pairs| {
        rows[0].iter_mut().for_each(|r| *r = 0);
        for &(i, j) in pairs {
            rows[0][i] |= 1 << j;
        }
        let tables = RowTables::from_rows(n, std::mem::take(&mut rows));
        let bordered = table.first_bordering(&mut explorer, &tables).is_some();
        rows = tables.into_rows();
        let y = Cbc::from_sorted_unchecked(n, pairs.to_vec());
        let hajos = recognizer.family(std::slice::from_ref(&y)).is_some();
        report.cbc_count += 1;
        report.hajos_count += u64::from(hajos);
        report.bordered_count += u64::from(bordered);
        if hajos != bordered {
            report.disagreement_count += 1;
            if report.disagreements.len() < 16 {
                report.disagreements.push(y);
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cbc::fixtures::cbc8;

    #[test]
    fn stable_set_has_krasner_border() {
        let ceb = Cbc::new(4, [(0, 0), (1, 0), (2, 1), (3, 0)]).unwrap();
        let cebb = Cbc::new(4, [(0, 0), (1, 0), (2, 0), (3, 0)]).unwrap();
        let fam = CbcFamily::new(vec![ceb, cebb]).unwrap();
        let KrasnerBorderVerdict::Hajos { border, chain, .. } = krasner_border_equivalence(&fam).unwrap() else {
            panic!("stable set is Hajós")
        };
        assert!(chain.verify(&fam));
        assert_eq!((border.p(), border.q()), (&[0][..], &[0, 1, 2, 3][..]));
    }

    #[test]
    fn unit_and_eight_cbc() {
        let v = krasner_border_equivalence(&CbcFamily::singleton(Cbc::unit())).unwrap();
        assert!(matches!(v, KrasnerBorderVerdict::Hajos { .. }));
        let v = krasner_border_equivalence(&CbcFamily::singleton(cbc8())).unwrap();
        assert!(matches!(v, KrasnerBorderVerdict::Hajos { .. }), "{v:?}");
    }

    /// Bordered by a Krasner factorization but neither it nor its dual has an
    /// `H_t` shape.
    #[test]
    fn krasner_bordered_yet_not_hajos() {
        let y = Cbc::new(8, [(0, 0), (0, 1), (0, 4), (1, 5), (2, 0), (2, 1), (2, 4), (3, 5)]).unwrap();
        let fam = CbcFamily::singleton(y.clone());
        assert!(!crate::hajos::is_hajos_cbc(&y).is_yes());
        let bd = Border::new(8, [0, 1, 4, 5], [0, 2]).unwrap();
        let closed = crate::cbc::stable_closure(&fam).unwrap();
        assert!(crate::borders::border_check_family(&bd, &closed));
        for m in [1, 2, 4] {
            assert!(!crate::hajos::is_right_periodic(&y, m).unwrap().is_yes());
            assert!(!crate::hajos::is_right_periodic(&y.dual(), m).unwrap().is_yes());
        }
        assert!(matches!(
            krasner_border_equivalence(&fam).unwrap(),
            KrasnerBorderVerdict::Disagreement { chain: None, border: Some(_) }
        ));
    }

    #[test]
    fn small_sweeps_agree() {
        for n in 1..=6 {
            let rep = krasner_hajos_sweep(n, 6).unwrap();
            assert_eq!(rep.disagreement_count, 0, "{rep:?}");
            assert_eq!(rep.hajos_count, rep.cbc_count);
        }
    }
}
