//! The two-matrix exponent key exchange over GL(n, F_p).
//!
//! Public data: a prime modulus, a dimension, and two invertible
//! non-commuting matrices M1, M2. Alice sends C1 = M1^a1 * M2^a2, Bob
//! replies C2 = M1^b1 * C1 * M2^b2, and both sides derive the shared key
//! K = M1^b1 * M2^b2. Honest runs here provide ground truth for the
//! attack; nothing about the scheme is hardened, because the point of
//! this crate is that it breaks.

use crate::error::KexError;
use crate::matrix::ModMatrix;
use crate::modular::Modulus;
use crate::rng::SeededRng;
use crate::textio::{Cursor, FileMeta, ParseError};

/// Default inclusive upper bound for sampled secret exponents. Large
/// enough that exponent brute force is visibly hopeless, small enough for
/// fast tests.
pub const DEFAULT_EXPONENT_MAX: u64 = 1 << 20;

/// Public parameters: the group GL(dim, F_p) is identified by (modulus,
/// dim); M1 and M2 are invertible and do not commute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KexParams {
    modulus: Modulus,
    dim: usize,
    m1: ModMatrix,
    m2: ModMatrix,
}

impl KexParams {
    /// Validates every parameter invariant: prime modulus, conformant
    /// dims, both generators invertible, generators non-commuting.
    pub fn new(m1: ModMatrix, m2: ModMatrix) -> Result<Self, KexError> {
        let modulus = m1.modulus();
        if !modulus.is_prime() {
            return Err(KexError::NonPrimeModulus {
                modulus: modulus.value(),
            });
        }
        if m1.dim() != m2.dim() || m1.modulus().value() != m2.modulus().value() {
            return Err(KexError::Algebra(
                crate::error::AlgebraError::DimensionMismatch {
                    left: m1.dim(),
                    right: m2.dim(),
                },
            ));
        }
        m1.inverse()?;
        m2.inverse()?;
        if m1.commutes_with(&m2)? {
            return Err(KexError::CommutingGenerators);
        }
        Ok(Self {
            modulus,
            dim: m1.dim(),
            m1,
            m2,
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m1(&self) -> &ModMatrix {
        &self.m1
    }

    pub fn m2(&self) -> &ModMatrix {
        &self.m2
    }
}

/// One party's secret exponent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KexSecret {
    pub e1: i64,
    pub e2: i64,
}

/// Samples a secret with both exponents uniform in [2, max].
pub fn sample_secret(rng: &mut SeededRng, max: u64) -> KexSecret {
    KexSecret {
        e1: rng.range(2, max) as i64,
        e2: rng.range(2, max) as i64,
    }
}

/// Random public parameters: invertible generators resampled until they
/// do not commute. Fails for dim < 2 since all 1x1 matrices commute.
pub fn keygen(modulus: Modulus, dim: usize, rng: &mut SeededRng) -> Result<KexParams, KexError> {
    if dim < 2 {
        return Err(KexError::DegenerateDim { dim });
    }
    if !modulus.is_prime() {
        return Err(KexError::NonPrimeModulus {
            modulus: modulus.value(),
        });
    }
    loop {
        let m1 = ModMatrix::random_invertible(dim, modulus, rng);
        let m2 = ModMatrix::random_invertible(dim, modulus, rng);
        if !m1.commutes_with(&m2).expect("conformant by construction") {
            return Ok(KexParams {
                modulus,
                dim,
                m1,
                m2,
            });
        }
    }
}

/// Alice's opening message C1 = M1^e1 * M2^e2.
pub fn alice_init(params: &KexParams, secret: &KexSecret) -> ModMatrix {
    params
        .m1
        .pow(secret.e1)
        .expect("generators invertible")
        .mul(&params.m2.pow(secret.e2).expect("generators invertible"))
        .expect("conformant by construction")
}

/// Bob's reply C2 = M1^e1 * C1 * M2^e2 together with his copy of the
/// shared key K = M1^e1 * M2^e2.
pub fn bob_respond(
    params: &KexParams,
    c1: &ModMatrix,
    secret: &KexSecret,
) -> (ModMatrix, ModMatrix) {
    let left = params.m1.pow(secret.e1).expect("generators invertible");
    let right = params.m2.pow(secret.e2).expect("generators invertible");
    let c2 = left
        .mul(c1)
        .expect("conformant transcript")
        .mul(&right)
        .expect("conformant transcript");
    let key = left.mul(&right).expect("conformant by construction");
    (c2, key)
}

/// Alice's key derivation K = M1^{-e1} * C2 * M2^{-e2}.
pub fn alice_finalize(params: &KexParams, secret: &KexSecret, c2: &ModMatrix) -> ModMatrix {
    params
        .m1
        .pow(-secret.e1)
        .expect("generators invertible")
        .mul(c2)
        .expect("conformant transcript")
        .mul(&params.m2.pow(-secret.e2).expect("generators invertible"))
        .expect("conformant transcript")
}

/// Everything a passive eavesdropper sees: parameters plus both exchanged
/// messages. Secrets never appear here; the attack modules accept only
/// this type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KexTranscript {
    pub params: KexParams,
    pub c1: ModMatrix,
    pub c2: ModMatrix,
    pub meta: FileMeta,
}

impl KexTranscript {
    /// Serializes to the transcript file format: `[meta]`, `[params]`
    /// (M1 then M2), `[C1]`, `[C2]`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.meta.write(&mut out);
        out.push_str("[params]\n");
        crate::textio::write_matrix(&mut out, &self.params.m1);
        crate::textio::write_matrix(&mut out, &self.params.m2);
        out.push_str("[C1]\n");
        crate::textio::write_matrix(&mut out, &self.c1);
        out.push_str("[C2]\n");
        crate::textio::write_matrix(&mut out, &self.c2);
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        let mut cur = Cursor::new(text)?;
        let meta = cur.parse_meta()?;
        cur.expect_section("params")?;
        let m1 = cur.parse_matrix()?;
        let m2 = cur.parse_matrix()?;
        let params = KexParams::new(m1, m2).map_err(|e| cur.error(e.to_string()))?;
        cur.expect_section("C1")?;
        let c1 = cur.parse_matrix()?;
        cur.expect_section("C2")?;
        let c2 = cur.parse_matrix()?;
        cur.expect_end()?;
        for m in [&c1, &c2] {
            if m.dim() != params.dim() || m.modulus().value() != params.modulus().value() {
                return Err(ParseError::new(0, "C1/C2 not conformant with params"));
            }
        }
        Ok(Self {
            params,
            c1,
            c2,
            meta,
        })
    }
}

/// Runs one honest exchange and packages the public view.
pub fn run_exchange(
    params: &KexParams,
    alice: &KexSecret,
    bob: &KexSecret,
    meta: FileMeta,
) -> (KexTranscript, ModMatrix) {
    let c1 = alice_init(params, alice);
    let (c2, key_bob) = bob_respond(params, &c1, bob);
    let key_alice = alice_finalize(params, alice, &c2);
    debug_assert_eq!(key_alice, key_bob, "key agreement must be exact");
    (
        KexTranscript {
            params: params.clone(),
            c1,
            c2,
            meta,
        },
        key_bob,
    )
}
