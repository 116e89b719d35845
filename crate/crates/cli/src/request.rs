//! Fully resolved requests and their execution.

use std::fmt::Write as _;

use bayonet::borders::{border_check_closure, find_border, Border, ClosureBorderVerdict};
use bayonet::cbc::{
    compose, is_cbc, is_compatible, joint_embeddability, stable_closure_capped, triangle_property, BayonetPair,
    Cbc, CbcFamily, CbcVerdict, EmbedVerdict, TriangleVerdict,
};
use bayonet::completion::{
    build_prefix_suffix_expansion, complete_hajos, inclusion_equivalence, is_prefix_suffix, ExpansionRow,
    PrefixSuffixVerdict,
};
use bayonet::cyclic::{enumerate_krasner, is_cbc_hajos_number, is_hajos_number, is_krasner, FactorizationPair};
use bayonet::hajos::{
    build_non_hajos_cbc, is_hajos_cbc, is_hajos_family, krasner_border_equivalence, krasner_hajos_sweep,
    FamilyHajosChain, HajosVerdict, KrasnerBorderVerdict, NonHajosSpec,
};
use bayonet::transforms::{divisibility_analysis, phi_closure_check};
use bayonet::words::{is_code, CodeVerdict, FiniteCode, Word};
use bayonet::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

/// Everything a subcommand needs, recorded in its output so that `verify`
/// can re-check the result.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Request {
    CheckCode { words: FiniteCode },
    CheckCbc { n: usize, pairs: Vec<BayonetPair> },
    Compose { family: CbcFamily, left: usize, right: usize, r: usize },
    Compatible { family: CbcFamily },
    Stable { family: CbcFamily, cap: usize },
    BorderFind { family: CbcFamily, seed: usize },
    BorderCheck { family: CbcFamily, border: Border },
    HajosCbc { cbc: Cbc },
    HajosFamily { family: CbcFamily },
    HajosNumber { n: usize },
    KrasnerEnum { n: usize },
    KrasnerCheck { factorization: FactorizationPair },
    KrasnerEquiv { family: CbcFamily },
    KrasnerSweep { n: usize, bound: usize },
    Triangle { cbc: Cbc },
    Phi { family: CbcFamily, border: Border, member: usize, d1: usize, d2: usize },
    MuAnalyze { words: FiniteCode, prime_bound: usize },
    Counterexample { spec: NonHajosSpec, check_krasner: bool },
    CompleteHajos {
        family: CbcFamily,
        omegas: Vec<Word>,
        xs: Vec<Vec<BayonetPair>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chain: Option<FamilyHajosChain>,
    },
    CompleteExpansion { code: FiniteCode, n: usize, t: usize, rows: Vec<ExpansionRow> },
    Inclusion { words: FiniteCode, omega: Word, n: usize, bound: usize, depth_bound: usize },
    PrefixSuffix { words: FiniteCode, depth_bound: usize },
    Embed { n: usize, required: Vec<Vec<BayonetPair>>, bound: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Affirmative,
    Negative,
    Unknown,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Affirmative => 0,
            Status::Negative => 1,
            Status::Unknown => 2,
        }
    }

    fn of(b: bool) -> Self {
        if b {
            Status::Affirmative
        } else {
            Status::Negative
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub verdict: String,
    pub status: Status,
    pub certificate: Option<Value>,
    pub text: String,
}

impl Outcome {
    fn new(verdict: impl Into<String>, status: Status, certificate: Option<Value>, text: String) -> Self {
        Outcome { verdict: verdict.into(), status, certificate, text }
    }

    fn yes_no(b: bool, yes: &str, no: &str, certificate: Option<Value>, text: String) -> Self {
        Outcome::new(if b { yes } else { no }, Status::of(b), certificate, text)
    }
}

fn cert<T: Serialize>(v: &T) -> Option<Value> {
    Some(serde_json::to_value(v).expect("serializable certificate"))
}

fn pairs_text(pairs: &[BayonetPair]) -> String {
    pairs.iter().map(|(i, j)| format!("({i},{j})")).collect::<Vec<_>>().join(" ")
}

fn words_text(c: &Cbc) -> String {
    c.words().to_string()
}

/// Turns library errors that are really negative or undecided verdicts into
/// outcomes; everything else stays an error.
fn soften(e: Error) -> Result<Outcome, CliError> {
    match e {
        Error::Incompatible(inc) => {
            let text = format!("the family is not compatible: {}", inc.witness.equation());
            Ok(Outcome::new("incompatible", Status::Negative, cert(&inc), text))
        }
        Error::EnvelopeExceeded(reason) => {
            Ok(Outcome::new("envelope_exceeded", Status::Unknown, Some(json!({ "reason": reason })), reason))
        }
        Error::Unsupported(reason) => {
            Ok(Outcome::new("unsupported", Status::Unknown, Some(json!({ "reason": reason })), reason))
        }
        other => Err(other.into()),
    }
}

impl Request {
    pub fn name(&self) -> String {
        match serde_json::to_value(self).expect("serializable request")["command"].as_str() {
            Some(s) => s.to_string(),
            None => unreachable!("tagged enum"),
        }
    }

    pub fn execute(&self) -> Result<Outcome, CliError> {
        self.run().or_else(|e| match e {
            CliError::Library(inner) => soften(inner),
            other => Err(other),
        })
    }

    fn run(&self) -> Result<Outcome, CliError> {
        Ok(match self {
            Request::CheckCode { words } => match is_code(words)? {
                CodeVerdict::Code => Outcome::new("code", Status::Affirmative, None, format!("{words} is a code")),
                CodeVerdict::NotCode(w) => {
                    let text = format!("{words} is not a code: {}", w.equation());
                    Outcome::new("not_code", Status::Negative, cert(&w), text)
                }
            },
            Request::CheckCbc { n, pairs } => {
                let v = is_cbc(*n, pairs)?;
                let text = match &v {
                    CbcVerdict::Yes => format!("{} is a {n}-cbc", pairs_text(pairs)),
                    CbcVerdict::No(f) => format!("not a {n}-cbc: {}", serde_json::to_string(f).unwrap_or_default()),
                };
                Outcome::yes_no(v.is_yes(), "cbc", "not_cbc", cert(&v), text)
            }
            Request::Compose { family, left, right, r } => {
                let get = |k: usize| {
                    family.members().get(k).ok_or_else(|| CliError::input(format!("no member with id {k}")))
                };
                let pairs = compose(get(*left)?, get(*right)?, *r)?;
                let ok = is_cbc(family.n(), &pairs)?.is_yes();
                let text = format!("X{left} ∘_{r} X{right} = {}", pairs_text(&pairs));
                Outcome::yes_no(ok, "cbc", "not_cbc", Some(json!({ "pairs": pairs })), text)
            }
            Request::Compatible { family } => match is_compatible(family) {
                Ok(()) => Outcome::new("compatible", Status::Affirmative, None, "the family is compatible".into()),
                Err(inc) => return soften(Error::Incompatible(Box::new(inc))),
            },
            Request::Stable { family, cap } => {
                let closure = stable_closure_capped(family, *cap)?;
                let mut text = format!("stable closure with {} members", closure.len());
                for m in closure.members() {
                    let _ = write!(text, "\n  {}", words_text(m));
                }
                Outcome::new("stable", Status::Affirmative, cert(&closure), text)
            }
            Request::BorderFind { family, seed } => {
                let rep = find_border(family, *seed)?;
                let mut text = format!("bordering cbc {}", words_text(&rep.bordering_cbc));
                for f in &rep.factorizations {
                    let _ = write!(text, "\n  border P={:?} Q={:?}", f.p().to_vec(), f.q().to_vec());
                }
                Outcome::new("bordered", Status::Affirmative, cert(&rep), text)
            }
            Request::BorderCheck { family, border } => {
                let v = border_check_closure(border, family)?;
                let text = match &v {
                    ClosureBorderVerdict::Borders { .. } => format!("{border} borders the stable closure"),
                    _ => format!("{border} does not border the stable closure"),
                };
                Outcome::yes_no(v.borders(), "borders", "not_bordered", cert(&v), text)
            }
            Request::HajosCbc { cbc } => match is_hajos_cbc(cbc) {
                HajosVerdict::Yes(chain) => {
                    let steps: Vec<String> = chain.steps.iter().map(|s| format!("t={} {:?}", s.t, s.side)).collect();
                    let text = format!("Hajós cbc, chain from {{b}}: {}", steps.join(", "));
                    Outcome::new("hajos", Status::Affirmative, cert(&chain), text)
                }
                HajosVerdict::No => Outcome::new("not_hajos", Status::Negative, None, "not a Hajós cbc".into()),
            },
            Request::HajosFamily { family } => {
                let rep = is_hajos_family(family);
                let text = format!("hajos:{} per_member_hajos:{}", rep.hajos, rep.per_member_hajos);
                Outcome::yes_no(rep.hajos, "hajos", "not_hajos", cert(&rep), text)
            }
            Request::HajosNumber { n } => {
                let (h, c) = (is_hajos_number(*n), is_cbc_hajos_number(*n));
                let text = format!("hajos:{h} cbc_hajos:{c}");
                Outcome::yes_no(c, "cbc_hajos", "not_cbc_hajos", Some(json!({ "hajos": h, "cbc_hajos": c })), text)
            }
            Request::KrasnerEnum { n } => {
                let list = enumerate_krasner(*n);
                let mut text = format!("{} Krasner factorizations of size {n}", list.len());
                for k in &list {
                    let f = &k.factorization;
                    let _ = write!(text, "\n  P={:?} Q={:?} chain={:?}", f.p().to_vec(), f.q().to_vec(), k.chain);
                }
                Outcome::new("enumerated", Status::Affirmative, cert(&list), text)
            }
            Request::KrasnerCheck { factorization: f } => {
                let ok = is_krasner(f.p(), f.q());
                let text = format!("P={:?} Q={:?} krasner:{ok}", f.p().to_vec(), f.q().to_vec());
                Outcome::yes_no(ok, "krasner", "not_krasner", None, text)
            }
            Request::KrasnerEquiv { family } => {
                let v = krasner_border_equivalence(family)?;
                let (verdict, status) = match &v {
                    KrasnerBorderVerdict::Hajos { .. } => ("hajos", Status::Affirmative),
                    KrasnerBorderVerdict::NotHajos { .. } => ("not_hajos", Status::Negative),
                    KrasnerBorderVerdict::Disagreement { .. } => ("disagreement", Status::Negative),
                    KrasnerBorderVerdict::DecompositionOnly { .. } => ("decomposition_only", Status::Unknown),
                };
                Outcome::new(verdict, status, cert(&v), format!("verdict: {verdict}"))
            }
            Request::KrasnerSweep { n, bound } => {
                let rep = krasner_hajos_sweep(*n, *bound)?;
                let text = format!(
                    "n={} cbc:{} hajos:{} krasner_bordered:{} disagreements:{}",
                    rep.n, rep.cbc_count, rep.hajos_count, rep.bordered_count, rep.disagreement_count
                );
                Outcome::yes_no(rep.disagreement_count == 0, "agree", "disagree", cert(&rep), text)
            }
            Request::Triangle { cbc } => {
                let v = triangle_property(cbc);
                let text = match v {
                    TriangleVerdict::Holds => "the triangle property holds".to_string(),
                    TriangleVerdict::Fails { k, count } => format!("{count} words of length ≤ {k}"),
                };
                Outcome::yes_no(v == TriangleVerdict::Holds, "holds", "fails", cert(&v), text)
            }
            Request::Phi { family, border, member, d1, d2 } => {
                let v = phi_closure_check(family, border, *member, *d1, *d2)?;
                let text = format!("image cbc:{} compatible:{} bordered:{}", v.image.is_some(), v.compatible, v.bordered);
                Outcome::yes_no(v.holds(), "holds", "fails", cert(&v), text)
            }
            Request::MuAnalyze { words, prime_bound } => {
                let rep = divisibility_analysis(words, *prime_bound)?;
                let mut text = format!(
                    "left forced {:?}, right forced {:?}, n divisible by {}",
                    rep.left_forced_primes, rep.right_forced_primes, rep.n_divisor
                );
                for (side, wit) in [("left", &rep.left_witnesses), ("right", &rep.right_witnesses)] {
                    for (d, w) in wit {
                        let _ = write!(text, "\n  {side} d={d}: {}", w.equation());
                    }
                }
                Outcome::new(format!("n_divisor={}", rep.n_divisor), Status::Affirmative, cert(&rep), text)
            }
            Request::Counterexample { spec, check_krasner } => {
                let b = build_non_hajos_cbc(spec, *check_krasner)?;
                let text = format!(
                    "n={} L={:?} R1={:?} R2={:?}\ncbc: {}\nis_cbc:{} is_hajos:{} krasner_bordered:{:?}",
                    b.n,
                    b.l,
                    b.r1,
                    b.r2,
                    pairs_text(b.cbc.pairs()),
                    b.is_cbc,
                    b.is_hajos,
                    b.krasner_bordered
                );
                Outcome::yes_no(b.all_hold(), "non_hajos", "check_failed", cert(&b), text)
            }
            Request::CompleteHajos { family, omegas, xs, chain } => {
                let done = complete_hajos(family, omegas, xs, chain.as_ref())?;
                let text = format!("{}\nchain of {} levels", done.code, done.chain.levels.len());
                Outcome::yes_no(done.verify(), "prefix_suffix", "check_failed", cert(&done), text)
            }
            Request::CompleteExpansion { code, n, t, rows } => {
                let done = build_prefix_suffix_expansion(code, *n, *t, rows)?;
                let text = format!("{}\nchain of {} levels", done.code, done.chain.levels.len());
                Outcome::yes_no(done.verify(), "prefix_suffix", "check_failed", cert(&done), text)
            }
            Request::Inclusion { words, omega, n, bound, depth_bound } => {
                let rep = inclusion_equivalence(words, omega, *n, *bound, *depth_bound)?;
                let s2 = rep.statement2.is_some();
                let text = format!(
                    "statement2:{s2} statement3:{} statement4:{:?} agree:{}",
                    rep.statement3.is_some(),
                    rep.statement4_holds(),
                    rep.agree()
                );
                let (verdict, status) = match (rep.agree(), s2) {
                    (false, _) => ("disagreement", Status::Negative),
                    (true, true) => ("included", Status::Affirmative),
                    (true, false) => ("not_included", Status::Negative),
                };
                Outcome::new(verdict, status, cert(&rep), text)
            }
            Request::PrefixSuffix { words, depth_bound } => {
                let v = is_prefix_suffix(words, *depth_bound)?;
                match &v {
                    PrefixSuffixVerdict::Yes { chain } => {
                        let mut text = format!("{words} is prefix-suffix");
                        for (lvl, dir) in chain.levels.iter().skip(1).zip(&chain.directions) {
                            let _ = write!(text, "\n  {dir:?} code over {lvl}");
                        }
                        Outcome::new("prefix_suffix", Status::Affirmative, cert(&v), text)
                    }
                    PrefixSuffixVerdict::No { codes_examined } => Outcome::new(
                        "not_prefix_suffix",
                        Status::Negative,
                        cert(&v),
                        format!("{words} is not prefix-suffix ({codes_examined} candidate code{} examined)", if *codes_examined == 1 { "" } else { "s" }),
                    ),
                    PrefixSuffixVerdict::Unknown { reason } => {
                        Outcome::new("unknown", Status::Unknown, cert(&v), reason.clone())
                    }
                }
            }
            Request::Embed { n, required, bound } => {
                let v = joint_embeddability(required, *n, *bound)?;
                let text = match &v {
                    EmbedVerdict::Yes { members } => {
                        members.iter().map(words_text).collect::<Vec<_>>().join("\n")
                    }
                    EmbedVerdict::No { tuples_examined, .. } => {
                        format!("no compatible choice ({tuples_examined} tuples examined)")
                    }
                };
                Outcome::yes_no(v.is_yes(), "embeddable", "not_embeddable", cert(&v), text)
            }
        })
    }
}
