//! Readers for the text and JSON input formats.

use std::io::Read;

use bayonet::borders::Border;
use bayonet::cbc::{BayonetPair, Cbc, CbcFamily};
use bayonet::cyclic::{parse_factorization_text, FactorizationPair};
use bayonet::words::{FiniteCode, Word};
use serde::Deserialize;

use crate::CliError;

pub fn read_source(path: &str) -> Result<String, CliError> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::input(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn is_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('{' | '['))
}

fn json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::input(format!("JSON input: {e}")))
}

/// A word list: JSON array of strings or one word per line.
pub fn words(text: &str) -> Result<FiniteCode, CliError> {
    if is_json(text) {
        let ws: Vec<Word> = json(text)?;
        return Ok(FiniteCode::new(ws));
    }
    Ok(FiniteCode::parse_word_list(text)?)
}

#[derive(Deserialize)]
struct RawCbc {
    n: usize,
    pairs: Vec<[usize; 2]>,
}

/// A pair set that need not be a cbc.
pub fn raw_cbc(text: &str) -> Result<(usize, Vec<BayonetPair>), CliError> {
    if is_json(text) {
        let raw: RawCbc = json(text)?;
        return Ok((raw.n, raw.pairs.into_iter().map(|[i, j]| (i, j)).collect()));
    }
    let mut n = None;
    let mut pairs = Vec::new();
    for (idx, line) in text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = line.strip_prefix("n=") {
            n = Some(v.trim().parse().map_err(|e| CliError::input(format!("line {idx}: {e}")))?);
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| CliError::input(format!("line {idx}: {t:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        match nums[..] {
            [i, j] => pairs.push((i, j)),
            _ => return Err(CliError::input(format!("line {idx}: expected two integers"))),
        }
    }
    let n = n.ok_or_else(|| CliError::input("missing n= line"))?;
    Ok((n, pairs))
}

pub fn cbc(text: &str) -> Result<Cbc, CliError> {
    let (n, pairs) = raw_cbc(text)?;
    Ok(Cbc::new(n, pairs)?)
}

/// A JSON array of cbc objects, or a single cbc in either format.
pub fn family(text: &str) -> Result<CbcFamily, CliError> {
    if text.trim_start().starts_with('[') {
        return json(text);
    }
    Ok(CbcFamily::singleton(cbc(text)?))
}

pub fn factorization(text: &str) -> Result<FactorizationPair, CliError> {
    if is_json(text) {
        return json(text);
    }
    let (n, p, q) = parse_factorization_text(text)?;
    Ok(FactorizationPair::from_elements(n, &p, &q)?)
}

/// Comma separated integers such as `0,4,8`.
pub fn int_list(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|e| CliError::input(format!("{t:?}: {e}"))))
        .collect()
}

/// A border from a file (JSON or factorization text) or from `--p`/`--q`.
pub fn border(path: Option<&str>, p: Option<&str>, q: Option<&str>, n: usize) -> Result<Border, CliError> {
    match (path, p, q) {
        (Some(path), None, None) => {
            let text = read_source(path)?;
            if is_json(&text) {
                return json(&text);
            }
            let (n, p, q) = parse_factorization_text(&text)?;
            Ok(Border::new(n, p.iter().map(|&x| x as i64), q.iter().map(|&x| x as i64))?)
        }
        (None, Some(p), Some(q)) => Ok(Border::new(n, int_list(p)?, int_list(q)?)?),
        _ => Err(CliError::usage("give either --border <path> or both --p and --q")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(words("[\"b\",\"ab\"]").unwrap(), words("# c\nab\n\nb\n").unwrap());
        assert_eq!(raw_cbc("n=2\n0 0\n1 1\n").unwrap(), raw_cbc("{\"n\":2,\"pairs\":[[0,0],[1,1]]}").unwrap());
        assert!(raw_cbc("0 0").is_err());
        assert_eq!(family("n=1\n0 0").unwrap().len(), 1);
        assert_eq!(int_list("0, 4,8").unwrap(), vec![0, 4, 8]);
        assert!(factorization("n=4\nP=0,1\nQ=0,2\n").is_ok());
    }
}
