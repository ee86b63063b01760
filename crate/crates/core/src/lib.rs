//! Exact computer algebra for characteristic-p function fields: p-basis
//! expansions, degree of imprimitivity, p-polynomial group presentations,
//! partial fraction decomposition of group-valued maps, and constructive
//! witnesses that rational functions lie in the image of the universal
//! additive forms after a substitution T ↦ αT^{p^d}.

pub mod error;
pub mod fq;
pub mod idx;
pub mod poly;
pub mod kfield;
pub mod linalg;
pub mod ratfun;
pub mod expr;
pub mod imprim;
pub mod ppoly;
pub mod sympoly;
pub mod groups;
pub mod pfd;
pub mod cohokill;
pub mod identities;

pub use error::{Error, Result};
