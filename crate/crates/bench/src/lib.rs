//! Shared inputs for the benchmarks.

use bayonet::cbc::{Cbc, CbcFamily};
use bayonet::words::FiniteCode;

pub fn intro_code() -> FiniteCode {
    FiniteCode::parse_list("aabb abaaa b ba").expect("valid words")
}

/// `{b, ba, aba², a³ba³, a⁴b, a⁴ba, a⁵ba², a⁷ba⁷}`.
pub fn cbc8() -> Cbc {
    Cbc::new(8, [(0, 0), (0, 1), (1, 2), (3, 3), (4, 0), (4, 1), (5, 2), (7, 7)]).expect("an 8-cbc")
}

/// `{C_E(b), C_E(bb)}` for `E = {b, ab, a⁴, a²ba, a³b, a²b²}`.
pub fn stable_pair() -> CbcFamily {
    let ceb = Cbc::new(4, [(0, 0), (1, 0), (2, 1), (3, 0)]).expect("a 4-cbc");
    let cebb = Cbc::new(4, [(0, 0), (1, 0), (2, 0), (3, 0)]).expect("a 4-cbc");
    CbcFamily::new(vec![ceb, cebb]).expect("same modulus")
}

/// The 13-word bayonet code whose cbc would need `36 | n`.
pub fn t13() -> FiniteCode {
    FiniteCode::parse_list(
        "b baa baaaaaaaa baaaaaaaaaa abaaaaaaaa abaaaaaaaaaa aaaab aaaabaa aaaaab aaaaabaaa \
         aaaaabaaaaaa aaaaaaaaab aaaaaaaaabaa",
    )
    .expect("valid words")
}
