//! Stern polynomials a(n;z) in exact arithmetic.
//!
//! The crate covers generation of a(n;z) and its sparse integer arithmetic,
//! the (s_m, t_m) decomposition along binary sequences with the limit
//! series it produces, the named subsequences phi_n and psi_n with their
//! identities, and numerical zero analysis (root finding, sector and annulus
//! counts, the clustering bounds and the real zero of a(4n+3;x)).

pub mod binseq;
pub mod error;
pub mod mp;
mod ntt;
pub mod par;
pub mod poly;
pub mod special;
pub mod stern;
pub mod zeros;

pub use binseq::{BitSpec, STPair};
pub use error::{Error, Result};
pub use par::Execution;
pub use poly::SparsePoly;
pub use stern::{stern_degree, stern_number, stern_poly, SternIndex};
