//! Exact linear algebra over Z_m and passive key recovery against two
//! matrix cryptosystems.
//!
//! The crate implements, end to end:
//!
//! - a two-matrix exponent key exchange over GL(n, F_p) ([`kex`]) and the
//!   eavesdropper attack that recovers the shared key from the public
//!   transcript by relinearizing one bilinear system ([`kex_attack`]);
//! - a conjugation-style public-key scheme over Z_n with n = pq ([`pke`])
//!   and the break that, given the factors of n, recovers the session key
//!   via two prime-field solves and CRT recombination ([`pke_attack`]);
//! - the supporting exact arithmetic: residues and primality
//!   ([`modular`]), dense matrices with division-free characteristic
//!   polynomials ([`matrix`]), polynomial evaluation ([`poly`]), reduced
//!   row echelon solving with nullspace ([`solve`]), and CRT ([`crt`]).
//!
//! Everything is deterministic given a seed ([`rng`]), and every artifact
//! file round-trips bit-exactly through the text formats in [`textio`].

// index loops mirror the row/column arithmetic throughout
#![allow(clippy::needless_range_loop)]

pub mod crt;
pub mod error;
pub mod kex;
pub mod kex_attack;
pub mod matrix;
pub mod modular;
pub mod pke;
pub mod pke_attack;
pub mod poly;
pub mod report;
pub mod rng;
pub mod solve;
pub mod textio;

pub use crt::{crt_recombine, crt_scalar};
pub use error::{AlgebraError, AttackError, KexError, PkeError};
pub use matrix::ModMatrix;
pub use modular::{is_prime, random_prime, ModInt, Modulus};
pub use poly::Polynomial;
pub use report::{AttackReport, ReportFile};
pub use rng::{SeededRng, GENERATOR_NAME};
pub use solve::{solve_linear, LinearSolveResult, RectMatrix};
pub use textio::{FileMeta, ParseError};
