//! Borders: pairs `(P, Q)` of integer sets with
//! `a^P X a^Q ≡ a^⟦n⟧ b a^⟦n⟧` modulo `a^n = ε`.

mod closure;
mod normalize;

pub use closure::{ClosureBorderFailure, ClosureBorderVerdict, TraceStep, CLOSURE_BORDER_LIMIT};
pub use normalize::{find_border, NormalizedBorderReport};

pub(crate) use closure::{Explorer, RowTables};

use serde::{Deserialize, Serialize};

use crate::cbc::{is_compatible, Cbc, CbcFamily};
use crate::cyclic::gcd;
use crate::cyclic::{is_factorization, FactorizationPair, ResidueSet};
use crate::error::{Error, Result};

/// A candidate border. Values are raw integers; they are reduced modulo `n`
/// only when checked, so translated borders may leave `⟦n⟧`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BorderJson", into = "BorderJson")]
pub struct Border {
    n: usize,
    p: Vec<i64>,
    q: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct BorderJson {
    n: usize,
    #[serde(rename = "P")]
    p: Vec<i64>,
    #[serde(rename = "Q")]
    q: Vec<i64>,
}

impl TryFrom<BorderJson> for Border {
    type Error = Error;
    fn try_from(raw: BorderJson) -> Result<Self> {
        Border::new(raw.n, raw.p, raw.q)
    }
}

impl From<Border> for BorderJson {
    fn from(b: Border) -> Self {
        BorderJson { n: b.n, p: b.p, q: b.q }
    }
}

impl Border {
    /// Sorts and deduplicates both sides; requires `|P|·|Q| = n`.
    pub fn new(n: usize, p: impl IntoIterator<Item = i64>, q: impl IntoIterator<Item = i64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        let mut p: Vec<i64> = p.into_iter().collect();
        let mut q: Vec<i64> = q.into_iter().collect();
        p.sort_unstable();
        p.dedup();
        q.sort_unstable();
        q.dedup();
        if p.len() * q.len() != n {
            return Err(Error::InvalidInput(format!(
                "a border of size {n} needs |P|·|Q| = {n}, got {}·{}",
                p.len(),
                q.len()
            )));
        }
        Ok(Border { n, p, q })
    }

    pub fn from_factorization(f: &FactorizationPair) -> Self {
        let raw = |s: &ResidueSet| s.iter().map(|v| v as i64).collect::<Vec<_>>();
        Border { n: f.n(), p: raw(f.p()), q: raw(f.q()) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &[i64] {
        &self.p
    }

    pub fn q(&self) -> &[i64] {
        &self.q
    }

    /// `P mod n`, with multiplicity.
    pub fn p_residues(&self) -> Vec<usize> {
        reduce(&self.p, self.n)
    }

    /// `Q mod n`, with multiplicity.
    pub fn q_residues(&self) -> Vec<usize> {
        reduce(&self.q, self.n)
    }

    pub fn swap(&self) -> Border {
        Border { n: self.n, p: self.q.clone(), q: self.p.clone() }
    }

    /// The reduced pair, when it is a factorization of `Z_n`.
    pub fn to_factorization(&self) -> Option<FactorizationPair> {
        let p = ResidueSet::from_values(self.n, self.p.iter().copied());
        let q = ResidueSet::from_values(self.n, self.q.iter().copied());
        if p.len() != self.p.len() || q.len() != self.q.len() {
            return None;
        }
        FactorizationPair::new(p, q).ok()
    }
}

fn reduce(v: &[i64], n: usize) -> Vec<usize> {
    v.iter().map(|&x| x.rem_euclid(n as i64) as usize).collect()
}

impl std::fmt::Display for Border {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?}) mod {}", self.p, self.q, self.n)
    }
}

/// True iff `{(p + i, j + q)}` covers `⟦n⟧²` exactly once.
pub fn border_check(bd: &Border, x: &Cbc) -> bool {
    let n = x.n();
    if bd.n != n {
        return false;
    }
    let (p, q) = (bd.p_residues(), bd.q_residues());
    let mut seen = vec![false; n * n];
    for &a in &p {
        for &(i, j) in x.pairs() {
            let row = (a + i) % n;
            for &b in &q {
                let cell = row * n + (j + b) % n;
                if seen[cell] {
                    return false;
                }
                seen[cell] = true;
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// True iff `bd` borders every member.
pub fn border_check_family(bd: &Border, family: &CbcFamily) -> bool {
    family.members().iter().all(|x| border_check(bd, x))
}

/// Decides whether `bd` borders the whole stable closure of a compatible
/// family, without building the closure.
pub fn border_check_closure(bd: &Border, family: &CbcFamily) -> Result<ClosureBorderVerdict> {
    is_compatible(family).map_err(|inc| Error::Incompatible(Box::new(inc)))?;
    closure::closure_border_verdict(bd, family.members())
}

/// `(P + i, Q + j)`.
pub fn translate_border(bd: &Border, i: i64, j: i64) -> Border {
    Border {
        n: bd.n,
        p: bd.p.iter().map(|v| v + i).collect(),
        q: bd.q.iter().map(|v| v + j).collect(),
    }
}

/// `(d₁P, d₂Q)`, requiring `d₁` prime to `|P|` and `d₂` prime to `|Q|`.
pub fn scale_border(bd: &Border, d1: i64, d2: i64) -> Result<Border> {
    for (d, side, len) in [(d1, "P", bd.p.len()), (d2, "Q", bd.q.len())] {
        if gcd(d.unsigned_abs() as usize, len) != 1 {
            return Err(Error::GcdViolation(format!("gcd({d}, |{side}| = {len}) ≠ 1")));
        }
    }
    Border::new(bd.n, bd.p.iter().map(|v| v * d1), bd.q.iter().map(|v| v * d2))
}

/// `(q⟦p⟧, p⟦q⟧)` for a border of `x` with coprime sizes `p = |P|`, `q = |Q|`.
pub fn canonical_coprime_border(x: &Cbc, bd: &Border) -> Result<FactorizationPair> {
    let (p, q) = (bd.p.len(), bd.q.len());
    if gcd(p, q) != 1 {
        return Err(Error::GcdViolation(format!("|P| = {p} and |Q| = {q} are not coprime")));
    }
    if !border_check(bd, x) {
        return Err(Error::Precondition(format!("{bd} does not border the cbc")));
    }
    let n = x.n();
    let f = FactorizationPair::new(
        ResidueSet::from_values(n, (0..p).map(|k| (q * k) as i64)),
        ResidueSet::from_values(n, (0..q).map(|k| (p * k) as i64)),
    )?;
    debug_assert!(border_check(&Border::from_factorization(&f), x));
    Ok(f)
}

/// One of the three pairs derived from a border of a stable set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BordanteCandidate {
    pub label: String,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub is_factorization: bool,
    pub borders_closure: bool,
}

/// `R^k(a^P X)` with multiplicity, sorted.
pub fn right_row_of(bd: &Border, x: &Cbc, k: usize) -> Vec<usize> {
    let n = x.n();
    let mut out: Vec<usize> = bd
        .p_residues()
        .iter()
        .flat_map(|&a| x.pairs().iter().filter(move |&&(i, _)| (a + i) % n == k).map(|&(_, j)| j))
        .collect();
    out.sort_unstable();
    out
}

/// `L^k(Y a^Q)` with multiplicity, sorted.
pub fn left_column_of(bd: &Border, y: &Cbc, k: usize) -> Vec<usize> {
    let n = y.n();
    let mut out: Vec<usize> = bd
        .q_residues()
        .iter()
        .flat_map(|&b| y.pairs().iter().filter(move |&&(_, j)| (j + b) % n == k).map(|&(i, _)| i))
        .collect();
    out.sort_unstable();
    out
}

/// The pairs `(P, L^{k₂}(Y a^Q))`, `(R^{k₁}(a^P X), L^{k₂}(Y a^Q))` and
/// `(R^{k₁}(a^P X), Q)` for a border of the closure of `family`, each checked
/// for being a factorization that borders the closure.
pub fn bordante_factorizations(
    family: &CbcFamily,
    bd: &Border,
    x: usize,
    y: usize,
    k1: usize,
    k2: usize,
) -> Result<Vec<BordanteCandidate>> {
    let n = family.n();
    let get = |id: usize| {
        family
            .members()
            .get(id)
            .ok_or_else(|| Error::InvalidInput(format!("no member with id {id}")))
    };
    let (xm, ym) = (get(x)?, get(y)?);
    if k1 >= n || k2 >= n {
        return Err(Error::OutOfRange { value: k1.max(k2), n });
    }
    if !border_check_closure(bd, family)?.borders() {
        return Err(Error::Precondition(format!("{bd} does not border the stable closure")));
    }
    let r = right_row_of(bd, xm, k1);
    let l = left_column_of(bd, ym, k2);
    let (p, q) = (bd.p_residues(), bd.q_residues());
    let mut out = Vec::new();
    for (label, a, b) in [("(P, L)", &p, &l), ("(R, L)", &r, &l), ("(R, Q)", &r, &q)] {
        let ra = ResidueSet::from_values(n, a.iter().map(|&v| v as i64));
        let rb = ResidueSet::from_values(n, b.iter().map(|&v| v as i64));
        let is_fact = ra.len() == a.len() && rb.len() == b.len() && is_factorization(&ra, &rb, n);
        let borders_closure = is_fact && {
            let cand = Border::new(n, a.iter().map(|&v| v as i64), b.iter().map(|&v| v as i64))?;
            closure::closure_border_verdict(&cand, family.members())?.borders()
        };
        let (mut a, mut b) = (a.clone(), b.clone());
        a.sort_unstable();
        b.sort_unstable();
        out.push(BordanteCandidate {
            label: label.into(),
            p: a,
            q: b,
            is_factorization: is_fact,
            borders_closure,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cbc::fixtures::cbc8;
    use crate::cbc::stable_closure;

    fn bd(n: usize, p: &[i64], q: &[i64]) -> Border {
        Border::new(n, p.iter().copied(), q.iter().copied()).unwrap()
    }

    fn stable4() -> CbcFamily {
        let ceb = Cbc::new(4, [(0, 0), (1, 0), (2, 1), (3, 0)]).unwrap();
        let cebb = Cbc::new(4, [(0, 0), (1, 0), (2, 0), (3, 0)]).unwrap();
        CbcFamily::new(vec![ceb, cebb]).unwrap()
    }

    #[test]
    fn worked_borders() {
        let x = cbc8();
        assert!(border_check(&bd(8, &[2, 4], &[0, 2, 4, 6]), &x));
        assert!(border_check(&bd(8, &[4, 5, 6, 7], &[1, 5]), &x));
        assert!(!border_check(&bd(8, &[0, 1], &[0, 2, 4, 6]), &x));
        let closed = stable_closure(&stable4()).unwrap();
        assert!(border_check_family(&bd(4, &[0], &[0, 1, 2, 3]), &closed));
    }

    #[test]
    fn closure_check_matches_materialized_closure() {
        let fam = stable4();
        let closed = stable_closure(&fam).unwrap();
        for p in 0u32..16 {
            for q in 0u32..16 {
                let pv: Vec<i64> = (0..4).filter(|b| p >> b & 1 == 1).collect();
                let qv: Vec<i64> = (0..4).filter(|b| q >> b & 1 == 1).collect();
                let Ok(b) = Border::new(4, pv, qv) else { continue };
                let v = border_check_closure(&b, &fam).unwrap();
                assert_eq!(v.borders(), border_check_family(&b, &closed), "{b}");
                if let ClosureBorderVerdict::Fails(f) = v {
                    assert!(f.verify(&b, fam.members()));
                }
            }
        }
    }

    #[test]
    fn duality() {
        let x = cbc8();
        for b in [bd(8, &[2, 4], &[0, 2, 4, 6]), bd(8, &[0, 1], &[0, 2, 4, 6])] {
            assert_eq!(border_check(&b, &x), border_check(&b.swap(), &x.dual()));
        }
    }

    #[test]
    fn transformations() {
        let x = cbc8();
        let b = bd(8, &[2, 4], &[0, 2, 4, 6]);
        let t = translate_border(&b, -2, 0);
        assert_eq!(t.p(), &[0, 2]);
        assert!(border_check(&t, &x));
        assert_eq!(scale_border(&b, 1, 1).unwrap(), b);
        let s = scale_border(&b, 3, 1).unwrap();
        assert_eq!(s.p(), &[6, 12]);
        assert!(border_check(&s, &x));
        assert!(matches!(scale_border(&b, 2, 1), Err(Error::GcdViolation(_))));
    }

    #[test]
    fn coprime_canonical() {
        let f = FactorizationPair::from_elements(6, &[0, 1], &[0, 2, 4]).unwrap();
        let x = Cbc::new(6, f.q().iter().flat_map(|i| f.p().iter().map(move |j| (i, j)))).unwrap();
        let got = canonical_coprime_border(&x, &Border::from_factorization(&f)).unwrap();
        assert_eq!(got.p().to_vec(), vec![0, 3]);
        assert_eq!(got.q().to_vec(), vec![0, 2, 4]);
        assert_eq!(
            canonical_coprime_border(&Cbc::unit(), &bd(1, &[0], &[0])).unwrap(),
            FactorizationPair::from_elements(1, &[0], &[0]).unwrap()
        );
        assert!(matches!(
            canonical_coprime_border(&cbc8(), &bd(8, &[2, 4], &[0, 2, 4, 6])),
            Err(Error::GcdViolation(_))
        ));
    }

    #[test]
    fn bordante() {
        let fam = stable4();
        let out = bordante_factorizations(&fam, &bd(4, &[0], &[0, 1, 2, 3]), 0, 0, 0, 0).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|c| c.is_factorization && c.borders_closure), "{out:?}");
        let one = CbcFamily::singleton(Cbc::unit());
        let out = bordante_factorizations(&one, &bd(1, &[0], &[0]), 0, 0, 0, 0).unwrap();
        assert!(out.iter().all(|c| c.p == vec![0] && c.q == vec![0] && c.borders_closure));
        let f8 = CbcFamily::singleton(cbc8());
        let out = bordante_factorizations(&f8, &bd(8, &[4, 5, 6, 7], &[1, 5]), 0, 0, 3, 5).unwrap();
        assert!(out.iter().all(|c| c.is_factorization && c.borders_closure), "{out:?}");
    }

    #[test]
    fn json_round_trip() {
        let b = bd(8, &[-2, 4], &[0, 2, 4, 6]);
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"n":8,"P":[-2,4],"Q":[0,2,4,6]}"#);
        assert_eq!(serde_json::from_str::<Border>(&s).unwrap(), b);
        assert!(serde_json::from_str::<Border>(r#"{"n":8,"P":[0],"Q":[0]}"#).is_err());
    }
}
