//! Words over a lowercase alphabet, finite codes, and unique decipherability.
//!
//! Codehood is decided with the Sardinas–Patterson dangling-suffix iteration.
//! The iteration is run as a shortest-path search over dangling suffixes so
//! that a negative verdict comes with the ambiguity of smallest total length.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over the letters `a`..=`z`.
///
/// Words are ordered shortlex (length first, then lexicographically) so that
/// every collection of words has a deterministic, human friendly order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from raw letters, rejecting anything outside `a..=z`.
    pub fn from_letters(letters: impl Into<Vec<u8>>) -> Result<Self> {
        let letters = letters.into();
        if let Some(bad) = letters.iter().find(|c| !c.is_ascii_lowercase()) {
            return Err(Error::InvalidInput(format!(
                "letter {:?} is not in a..z",
                *bad as char
            )));
        }
        Ok(Word(letters))
    }

    /// `letter` repeated `count` times.
    pub fn power(letter: u8, count: usize) -> Self {
        debug_assert!(letter.is_ascii_lowercase());
        Word(vec![letter; count])
    }

    /// The bayonet word `a^i b a^j`.
    pub fn bayonet(i: usize, j: usize) -> Self {
        Self::around(i, &Word(vec![b'b']), j)
    }

    /// The word `a^i w a^j`.
    pub fn around(i: usize, w: &Word, j: usize) -> Self {
        let mut v = Vec::with_capacity(i + w.len() + j);
        v.extend(std::iter::repeat(b'a').take(i));
        v.extend_from_slice(&w.0);
        v.extend(std::iter::repeat(b'a').take(j));
        Word(v)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut v = Vec::new();
        for p in parts {
            v.extend_from_slice(&p.0);
        }
        Word(v)
    }

    /// True when the word contains only the letter `a` (the empty word included).
    pub fn is_power_of_a(&self) -> bool {
        self.0.iter().all(|&c| c == b'a')
    }

    /// Splits `a^i b a^j` into `(i, j)`; `None` for any other shape.
    pub fn as_bayonet(&self) -> Option<(usize, usize)> {
        self.split_around(&Word(vec![b'b']))
    }

    /// Splits `a^i w a^j` into `(i, j)`. The split is unique whenever `w` is
    /// not a power of `a`.
    pub fn split_around(&self, w: &Word) -> Option<(usize, usize)> {
        if w.is_power_of_a() || self.len() < w.len() {
            return None;
        }
        let lead = self.0.iter().take_while(|&&c| c == b'a').count();
        let w_lead = w.0.iter().take_while(|&&c| c == b'a').count();
        if lead < w_lead {
            return None;
        }
        let i = lead - w_lead;
        let rest = &self.0[i..];
        if !rest.starts_with(&w.0) {
            return None;
        }
        let tail = &rest[w.len()..];
        if tail.iter().all(|&c| c == b'a') {
            Some((i, tail.len()))
        } else {
            None
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        f.write_str(std::str::from_utf8(&self.0).expect("ascii letters"))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "ε" {
            return Ok(Word::empty());
        }
        Word::from_letters(s.as_bytes().to_vec())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(std::str::from_utf8(&self.0).expect("ascii letters"))
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::from_letters(s.into_bytes()).map_err(serde::de::Error::custom)
    }
}

/// A finite set of words, kept sorted shortlex and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Word>", into = "Vec<Word>")]
pub struct FiniteCode {
    words: Vec<Word>,
}

impl FiniteCode {
    pub fn new(words: impl IntoIterator<Item = Word>) -> Self {
        let mut words: Vec<Word> = words.into_iter().collect();
        words.sort();
        words.dedup();
        FiniteCode { words }
    }

    /// Parses whitespace separated words, e.g. `"aabb abaaa b ba"`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let words = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(Word::from_str)
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteCode::new(words))
    }

    /// Parses the word-list text format: one word per line, blank lines and
    /// lines starting with `#` ignored.
    pub fn parse_word_list(text: &str) -> Result<Self> {
        let mut words = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let w = Word::from_letters(line.as_bytes().to_vec()).map_err(|e| Error::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?;
            words.push(w);
        }
        Ok(FiniteCode::new(words))
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn union(&self, other: &FiniteCode) -> FiniteCode {
        FiniteCode::new(self.words.iter().chain(other.words.iter()).cloned())
    }

    pub fn with(&self, w: Word) -> FiniteCode {
        FiniteCode::new(self.words.iter().cloned().chain(std::iter::once(w)))
    }

    /// The sorted letters used by the words of the set.
    pub fn alphabet(&self) -> Vec<u8> {
        let mut letters: Vec<u8> = self.words.iter().flat_map(|w| w.0.iter().copied()).collect();
        letters.sort_unstable();
        letters.dedup();
        letters
    }

    fn validate(&self) -> Result<()> {
        if self.words.is_empty() {
            return Err(Error::InvalidInput("the set of words is empty".into()));
        }
        if self.words.iter().any(Word::is_empty) {
            return Err(Error::InvalidInput("the empty word cannot belong to a code".into()));
        }
        Ok(())
    }
}

impl fmt::Display for FiniteCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, w) in self.words.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("}")
    }
}

impl From<Vec<Word>> for FiniteCode {
    fn from(words: Vec<Word>) -> Self {
        FiniteCode::new(words)
    }
}

impl From<FiniteCode> for Vec<Word> {
    fn from(c: FiniteCode) -> Self {
        c.words
    }
}

impl FromIterator<Word> for FiniteCode {
    fn from_iter<T: IntoIterator<Item = Word>>(iter: T) -> Self {
        FiniteCode::new(iter)
    }
}

/// Two distinct factorizations of the same word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityWitness {
    pub left: Vec<Word>,
    pub right: Vec<Word>,
}

impl AmbiguityWitness {
    pub fn left_word(&self) -> Word {
        Word::concat(&self.left)
    }

    pub fn right_word(&self) -> Word {
        Word::concat(&self.right)
    }

    /// Re-checks the witness by direct concatenation. Every word must also
    /// satisfy `member`.
    pub fn verify_with(&self, member: impl Fn(&Word) -> bool) -> bool {
        !self.left.is_empty()
            && self.left != self.right
            && self.left_word() == self.right_word()
            && self.left.iter().chain(self.right.iter()).all(member)
    }

    pub fn verify(&self, set: &FiniteCode) -> bool {
        self.verify_with(|w| set.contains(w))
    }

    /// Renders the witness as a word equation, e.g. `(b)(ab) = (ba)(b)`.
    pub fn equation(&self) -> String {
        let side = |ws: &[Word]| ws.iter().map(|w| format!("({w})")).collect::<String>();
        format!("{} = {}", side(&self.left), side(&self.right))
    }

    /// The same equation with the two sides swapped.
    pub fn swapped(&self) -> Self {
        AmbiguityWitness {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

/// Outcome of the unique-decipherability test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "witness")]
pub enum CodeVerdict {
    Code,
    NotCode(AmbiguityWitness),
}

impl CodeVerdict {
    pub fn is_code(&self) -> bool {
        matches!(self, CodeVerdict::Code)
    }

    pub fn witness(&self) -> Option<&AmbiguityWitness> {
        match self {
            CodeVerdict::Code => None,
            CodeVerdict::NotCode(w) => Some(w),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Side {
    Left,
    Right,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A node of the dangling-suffix search: the side that is ahead and the
/// letters by which it is ahead. The empty suffix is the accepting node.
type Node = (Vec<u8>, Side);

enum Parent {
    Start { shorter: usize, longer: usize },
    Step { from: Node, word: usize },
}

/// Decides unique decipherability.
///
/// On failure the witness is one of minimal total length; among those the
/// search order (shortlex on words) makes the choice deterministic.
pub fn is_code(c: &FiniteCode) -> Result<CodeVerdict> {
    c.validate()?;
    let words = c.words();

    let mut dist: HashMap<Node, usize> = HashMap::new();
    let mut parent: HashMap<Node, Parent> = HashMap::new();
    // Heap entries: (cost, insertion order, node). The insertion counter makes
    // ties resolve in discovery order.
    let mut heap: BinaryHeap<Reverse<(usize, usize, Node)>> = BinaryHeap::new();
    let mut counter = 0usize;

    for (xi, x) in words.iter().enumerate() {
        for (yi, y) in words.iter().enumerate() {
            if xi != yi && x.len() < y.len() && x.is_prefix_of(y) {
                let node: Node = (y.0[x.len()..].to_vec(), Side::Right);
                let cost = y.len();
                if dist.get(&node).map_or(true, |&d| cost < d) {
                    dist.insert(node.clone(), cost);
                    parent.insert(node.clone(), Parent::Start { shorter: xi, longer: yi });
                    heap.push(Reverse((cost, counter, node)));
                    counter += 1;
                }
            }
        }
    }

    let mut settled: std::collections::HashSet<Node> = std::collections::HashSet::new();
    while let Some(Reverse((cost, _, node))) = heap.pop() {
        if settled.contains(&node) || dist.get(&node).is_some_and(|&d| d < cost) {
            continue;
        }
        if node.0.is_empty() {
            return Ok(CodeVerdict::NotCode(unwind(words, &parent, &node)));
        }
        settled.insert(node.clone());
        let (suffix, ahead) = &node;
        for (wi, w) in words.iter().enumerate() {
            let (next, next_cost) = if w.0.len() <= suffix.len() {
                if !suffix.starts_with(&w.0) {
                    continue;
                }
                ((suffix[w.len()..].to_vec(), *ahead), cost)
            } else {
                if !w.0.starts_with(suffix) {
                    continue;
                }
                (
                    (w.0[suffix.len()..].to_vec(), ahead.other()),
                    cost + w.len() - suffix.len(),
                )
            };
            if settled.contains(&next) {
                continue;
            }
            if dist.get(&next).map_or(true, |&d| next_cost < d) {
                dist.insert(next.clone(), next_cost);
                parent.insert(
                    next.clone(),
                    Parent::Step {
                        from: node.clone(),
                        word: wi,
                    },
                );
                heap.push(Reverse((next_cost, counter, next)));
                counter += 1;
            }
        }
    }
    Ok(CodeVerdict::Code)
}

fn unwind(words: &[Word], parent: &HashMap<Node, Parent>, end: &Node) -> AmbiguityWitness {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut cur = end.clone();
    loop {
        match &parent[&cur] {
            Parent::Start { shorter, longer } => {
                left.push(words[*shorter].clone());
                right.push(words[*longer].clone());
                break;
            }
            Parent::Step { from, word } => {
                // The appended word went to the side that was behind at `from`.
                match from.1.other() {
                    Side::Left => left.push(words[*word].clone()),
                    Side::Right => right.push(words[*word].clone()),
                }
                cur = from.clone();
            }
        }
    }
    left.reverse();
    right.reverse();
    AmbiguityWitness { left, right }
}

/// True iff no word of the set is a prefix of another one.
pub fn is_prefix_set(c: &FiniteCode) -> Result<bool> {
    if c.is_empty() {
        return Err(Error::InvalidInput("the set of words is empty".into()));
    }
    Ok(!pairs_related(c, Word::is_prefix_of))
}

/// True iff no word of the set is a suffix of another one.
pub fn is_suffix_set(c: &FiniteCode) -> Result<bool> {
    if c.is_empty() {
        return Err(Error::InvalidInput("the set of words is empty".into()));
    }
    Ok(!pairs_related(c, Word::is_suffix_of))
}

fn pairs_related(c: &FiniteCode, rel: impl Fn(&Word, &Word) -> bool) -> bool {
    let ws = c.words();
    ws.iter()
        .enumerate()
        .any(|(i, x)| ws.iter().enumerate().any(|(j, y)| i != j && rel(x, y)))
}

/// Replaces the letter `b` of every bayonet word `a^i b a^j` by `omega`.
pub fn substitute(x: &FiniteCode, omega: &Word) -> Result<FiniteCode> {
    let mut out = Vec::with_capacity(x.len());
    for w in x.iter() {
        let (i, j) = w
            .as_bayonet()
            .ok_or_else(|| Error::InvalidInput(format!("{w} is not of the form a^i b a^j")))?;
        out.push(Word::around(i, omega, j));
    }
    Ok(FiniteCode::new(out))
}

/// Unique factorization of `w` over the code `over`, as indices into
/// `over.words()`. Returns `None` when `w` is not in `over*`.
pub fn factor_over(w: &Word, over: &FiniteCode) -> Option<Vec<usize>> {
    let letters = w.letters();
    let n = letters.len();
    // back[k] = Some((start, word)) when letters[..k] factors and ends with `word`.
    let mut back: Vec<Option<(usize, usize)>> = vec![None; n + 1];
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for k in 0..n {
        if !reach[k] {
            continue;
        }
        for (idx, v) in over.words().iter().enumerate() {
            let end = k + v.len();
            if !v.is_empty() && end <= n && !reach[end] && letters[k..end] == v.0[..] {
                reach[end] = true;
                back[end] = Some((k, idx));
            }
        }
    }
    if !reach[n] {
        return None;
    }
    let mut seq = Vec::new();
    let mut k = n;
    while k > 0 {
        let (start, idx) = back[k].expect("reachable position has a predecessor");
        seq.push(idx);
        k = start;
    }
    seq.reverse();
    Some(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> FiniteCode {
        FiniteCode::parse_list(s).unwrap()
    }

    #[test]
    fn intro_set_is_not_a_code() {
        let c = code("aabb abaaa b ba");
        let v = is_code(&c).unwrap();
        let w = v.witness().expect("not a code");
        assert!(w.verify(&c));
        assert_eq!(w.left_word().to_string(), "babaaabb");
        assert_eq!(w.equation(), "(b)(abaaa)(b)(b) = (ba)(ba)(aabb)");
    }

    #[test]
    fn prefix_example_is_a_code() {
        let c = code("aaa ab aab bba ba");
        assert!(is_code(&c).unwrap().is_code());
        assert!(is_prefix_set(&c).unwrap());
        assert!(!is_suffix_set(&c).unwrap());
    }

    #[test]
    fn small_prefix_and_suffix_cases() {
        assert!(is_code(&code("b")).unwrap().is_code());
        let c = code("b ab");
        assert!(is_prefix_set(&c).unwrap());
        assert!(!is_suffix_set(&c).unwrap());
        let c = code("aa");
        assert!(is_prefix_set(&c).unwrap() && is_suffix_set(&c).unwrap());
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(is_code(&FiniteCode::default()).is_err());
        assert!(is_code(&FiniteCode::new([Word::empty(), Word::power(b'a', 1)])).is_err());
        assert!(Word::from_str("aB").is_err());
    }

    #[test]
    fn substitution() {
        let x = code("b ab");
        let bb: Word = "bb".parse().unwrap();
        assert_eq!(substitute(&x, &bb).unwrap(), code("bb abb"));
        let y = code("b ab aaba aaab");
        assert_eq!(substitute(&y, &Word::bayonet(0, 0)).unwrap(), y);
        let aa: Word = "aa".parse().unwrap();
        let z = substitute(&x, &aa).unwrap();
        assert_eq!(z, code("aa aaa"));
        assert_eq!(z.len(), 2);
        assert!(!is_code(&z).unwrap().is_code());
        assert!(substitute(&code("bab"), &bb).is_err());
    }

    #[test]
    fn word_list_format() {
        let c = FiniteCode::parse_word_list("# intro\naabb\n\nabaaa\n b \nba\n").unwrap();
        assert_eq!(c, code("aabb abaaa b ba"));
        let err = FiniteCode::parse_word_list("ab\nA1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn bayonet_split() {
        assert_eq!(Word::bayonet(2, 3).as_bayonet(), Some((2, 3)));
        assert_eq!("aabab".parse::<Word>().unwrap().as_bayonet(), None);
        let omega: Word = "aba".parse().unwrap();
        let w = Word::around(2, &omega, 1);
        assert_eq!(w.to_string(), "aaabaa");
        assert_eq!(w.split_around(&omega), Some((2, 1)));
    }

    #[test]
    fn factorization_over_a_code() {
        let over = code("aa ab b");
        let w: Word = "abbab".parse().unwrap();
        let seq = factor_over(&w, &over).unwrap();
        let parts: Vec<String> = seq.iter().map(|&k| over.words()[k].to_string()).collect();
        assert_eq!(parts, ["ab", "b", "ab"]);
        assert!(factor_over(&"ba".parse().unwrap(), &code("aa ab")).is_none());
    }
}
