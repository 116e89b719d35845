//! Complete bayonet codes and the factorizations of cyclic groups that
//! border them.

pub mod borders;
pub mod completion;
pub mod cbc;
pub mod cyclic;
pub mod error;
pub mod hajos;
pub mod transforms;
pub mod words;

pub use cbc::{
    compose, is_cbc, triangle_property, BayonetPair, Cbc, CbcFamily, CbcVerdict, TriangleVerdict,
};
pub use borders::{border_check, Border};
pub use cyclic::{is_factorization, FactorizationPair, ResidueSet};
pub use error::{Error, Result};
pub use hajos::{expand_ht, is_hajos_cbc, is_hajos_family, HajosChain, HajosVerdict, HtParams};
pub use words::{is_code, AmbiguityWitness, CodeVerdict, FiniteCode, Word};
