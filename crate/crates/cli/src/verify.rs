//! Re-checks a recorded result. Certificates are checked directly where a
//! checker exists; other results are recomputed and compared.

use bayonet::borders::{border_check_closure, ClosureBorderVerdict, NormalizedBorderReport};
use bayonet::cbc::{compose, is_compatible, Cbc, CbcFamily, EmbedVerdict, Incompatibility};
use bayonet::completion::{Completion, ExpansionRow, InclusionReport, PrefixSuffixChain, PrefixSuffixVerdict};
use bayonet::hajos::{HajosChain, HajosFamilyReport, KrasnerBorderVerdict};
use bayonet::transforms::DivisibilityReport;
use bayonet::words::{is_code, AmbiguityWitness, FiniteCode, Word};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::request::Request;
use crate::{CliError, CommandResult};

fn parse<T: DeserializeOwned>(cert: &Option<Value>) -> Result<T, CliError> {
    let v = cert.clone().ok_or_else(|| CliError::input("the result carries no certificate"))?;
    serde_json::from_value(v).map_err(|e| CliError::input(format!("certificate: {e}")))
}

fn recompute(doc: &CommandResult) -> Result<bool, CliError> {
    let fresh = doc.input.execute()?;
    Ok(fresh.verdict == doc.verdict && fresh.certificate == doc.certificate)
}

fn chain_proves(chain: &PrefixSuffixChain, target: &FiniteCode) -> bool {
    chain.target() == target && chain.verify() && chain.reaches_alphabet()
}

/// Every composition of two members stays in the set.
fn closed(closure: &CbcFamily) -> Result<bool, CliError> {
    let ms = closure.members();
    for x in ms {
        for y in ms {
            for r in 0..closure.n() {
                let z = compose(x, y, r)?;
                match Cbc::new(closure.n(), z) {
                    Ok(z) if closure.contains(&z) => {}
                    _ => return Ok(false),
                }
            }
        }
    }
    Ok(true)
}

fn expansion_code(n: usize, t: usize, rows: &[ExpansionRow]) -> FiniteCode {
    rows.iter()
        .flat_map(|r| (0..t).map(move |s| Word::around(n * r.i[s], &r.omega, n * (s + t * r.j[s]))))
        .chain([Word::power(b'a', n * t)])
        .collect()
}

/// True when the recorded verdict is confirmed.
pub fn verify(doc: &CommandResult) -> Result<bool, CliError> {
    let cert = &doc.certificate;
    let v = doc.verdict.as_str();
    Ok(match &doc.input {
        Request::CheckCode { words } if v == "not_code" => parse::<AmbiguityWitness>(cert)?.verify(words),
        Request::CheckCode { words } => v == "code" && is_code(words)?.is_code(),
        Request::Compatible { family } if v == "incompatible" => parse::<Incompatibility>(cert)?.verify(family),
        Request::Compatible { family } => v == "compatible" && is_compatible(family).is_ok(),
        Request::Stable { family, .. } if v == "stable" => {
            let closure: CbcFamily = parse(cert)?;
            closure.n() == family.n()
                && family.members().iter().all(|m| closure.contains(m))
                && is_compatible(&closure).is_ok()
                && closed(&closure)?
        }
        Request::BorderFind { family, .. } if v == "bordered" => parse::<NormalizedBorderReport>(cert)?.verify(family),
        Request::BorderCheck { family, border } if v == "not_bordered" => match parse(cert)? {
            ClosureBorderVerdict::Fails(f) => f.verify(border, family.members()),
            ClosureBorderVerdict::Borders { .. } => false,
        },
        Request::HajosCbc { cbc } if v == "hajos" => parse::<HajosChain>(cert)?.verify(cbc),
        Request::HajosFamily { family } if v == "hajos" => {
            let rep: HajosFamilyReport = parse(cert)?;
            rep.hajos && rep.chain.is_some_and(|c| c.shared() && c.verify(family))
        }
        Request::KrasnerEquiv { family } if v == "hajos" => match parse(cert)? {
            KrasnerBorderVerdict::Hajos { chain, border, krasner } => {
                chain.verify(family)
                    && bayonet::cyclic::is_krasner(krasner.factorization.p(), krasner.factorization.q())
                    && border_check_closure(&border, family)?.borders()
            }
            _ => false,
        },
        Request::MuAnalyze { words, .. } => parse::<DivisibilityReport>(cert)?.verify(words),
        Request::CompleteHajos { omegas, xs, family, .. } if v == "prefix_suffix" => {
            let done: Completion = parse(cert)?;
            let expected: FiniteCode = xs
                .iter()
                .zip(omegas)
                .flat_map(|(x, w)| x.iter().map(move |&(i, j)| Word::around(i, w, j)))
                .chain([Word::power(b'a', family.n())])
                .collect();
            done.code == expected && done.verify()
        }
        Request::CompleteExpansion { code, n, t, rows } if v == "prefix_suffix" => {
            let done: Completion = parse(cert)?;
            rows.iter().all(|r| r.i.len() == *t && r.j.len() == *t)
                && done.code == expansion_code(*n, *t, rows)
                && done.verify()
                && done.chain.levels.contains(code)
        }
        Request::PrefixSuffix { words, .. } if v == "prefix_suffix" => match parse(cert)? {
            PrefixSuffixVerdict::Yes { chain } => chain_proves(&chain, words),
            _ => false,
        },
        Request::Inclusion { words, n, .. } if v == "included" => {
            let rep: InclusionReport = parse(cert)?;
            let full = words.with(Word::power(b'a', *n));
            let holds = |y: &Cbc| rep.pairs.iter().all(|&p| y.contains(p));
            rep.statement2.as_ref().is_some_and(holds)
                && rep.statement3.as_ref().is_some_and(|(y, c)| holds(y) && c.verify(y))
                && rep.chain().is_some_and(|c| chain_proves(c, &full))
        }
        Request::Embed { required, n, .. } if v == "embeddable" => match parse(cert)? {
            EmbedVerdict::Yes { members } => {
                members.len() == required.len()
                    && members.iter().zip(required).all(|(m, req)| m.n() == *n && req.iter().all(|&p| m.contains(p)))
                    && CbcFamily::new(members).is_ok_and(|f| is_compatible(&f).is_ok())
            }
            EmbedVerdict::No { .. } => false,
        },
        _ => recompute(doc)?,
    })
}
