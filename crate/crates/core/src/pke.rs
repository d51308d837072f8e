//! The conjugation-style public-key scheme over Z_n, n = pq.
//!
//! Alice picks invertible A, C mod n, publishes (A, B, G) with B = CAC and
//! G a polynomial in C. Bob picks D as a polynomial in G (so D commutes
//! with C), sends (K*M, E) with K = DBD and E = DAD. Alice decrypts via
//! K = CEC. Correctness: DBD = DCACD = CDADC = CEC since C and D commute.

use crate::error::{AlgebraError, PkeError};
use crate::matrix::ModMatrix;
use crate::modular::{is_prime, Modulus};
use crate::poly::Polynomial;
use crate::rng::SeededRng;
use crate::textio::{Cursor, FileMeta, ParseError};

/// Public key (n, A, B, G). B = CAC for the matching private C, and G
/// commutes with C.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatentPublicKey {
    modulus: Modulus,
    k: usize,
    a: ModMatrix,
    b: ModMatrix,
    g: ModMatrix,
}

impl PatentPublicKey {
    pub fn new(a: ModMatrix, b: ModMatrix, g: ModMatrix) -> Result<Self, PkeError> {
        let modulus = a.modulus();
        for m in [&b, &g] {
            if m.dim() != a.dim() {
                return Err(PkeError::Algebra(AlgebraError::DimensionMismatch {
                    left: a.dim(),
                    right: m.dim(),
                }));
            }
            if m.modulus().value() != modulus.value() {
                return Err(PkeError::Algebra(AlgebraError::ModulusMismatch {
                    left: modulus.value(),
                    right: m.modulus().value(),
                }));
            }
        }
        Ok(Self {
            modulus,
            k: a.dim(),
            a,
            b,
            g,
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> &ModMatrix {
        &self.a
    }

    pub fn b(&self) -> &ModMatrix {
        &self.b
    }

    pub fn g(&self) -> &ModMatrix {
        &self.g
    }

    /// Entrywise reduction of the whole key modulo a prime factor of n.
    pub fn reduce(&self, prime: Modulus) -> Result<Self, AlgebraError> {
        Ok(Self {
            modulus: prime,
            k: self.k,
            a: self.a.reduce(prime)?,
            b: self.b.reduce(prime)?,
            g: self.g.reduce(prime)?,
        })
    }

    pub fn to_text(&self, meta: &FileMeta) -> String {
        let mut out = String::new();
        meta.write(&mut out);
        for (name, m) in [("A", &self.a), ("B", &self.b), ("G", &self.g)] {
            out.push_str(&format!("[{name}]\n"));
            crate::textio::write_matrix(&mut out, m);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<(Self, FileMeta), ParseError> {
        let mut cur = Cursor::new(text)?;
        let meta = cur.parse_meta()?;
        cur.expect_section("A")?;
        let a = cur.parse_matrix()?;
        cur.expect_section("B")?;
        let b = cur.parse_matrix()?;
        cur.expect_section("G")?;
        let g = cur.parse_matrix()?;
        cur.expect_end()?;
        let key = Self::new(a, b, g).map_err(|e| ParseError::new(0, e.to_string()))?;
        Ok((key, meta))
    }
}

/// Private key: the conjugator C plus the factorization of n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatentPrivateKey {
    c: ModMatrix,
    p: Modulus,
    q: Modulus,
}

impl PatentPrivateKey {
    pub fn c(&self) -> &ModMatrix {
        &self.c
    }

    pub fn p(&self) -> Modulus {
        self.p
    }

    pub fn q(&self) -> Modulus {
        self.q
    }

    pub fn to_text(&self, meta: &FileMeta) -> String {
        let mut meta = meta.clone();
        meta.push("p", self.p.value().to_string());
        meta.push("q", self.q.value().to_string());
        let mut out = String::new();
        meta.write(&mut out);
        out.push_str("[C]\n");
        crate::textio::write_matrix(&mut out, &self.c);
        out
    }

    pub fn from_text(text: &str) -> Result<(Self, FileMeta), ParseError> {
        let mut cur = Cursor::new(text)?;
        let mut meta = cur.parse_meta()?;
        let p: u64 = meta
            .get("p")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| ParseError::new(1, "missing p= in [meta]"))?;
        let q: u64 = meta
            .get("q")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| ParseError::new(1, "missing q= in [meta]"))?;
        // p and q are structured key fields; keep them out of the
        // caller-visible metadata so serialize(parse(file)) stays identity
        meta.remove("p");
        meta.remove("q");
        cur.expect_section("C")?;
        let c = cur.parse_matrix()?;
        cur.expect_end()?;
        let p = Modulus::new(p).map_err(|e| ParseError::new(1, e.to_string()))?;
        let q = Modulus::new(q).map_err(|e| ParseError::new(1, e.to_string()))?;
        Ok((Self { c, p, q }, meta))
    }
}

/// Ciphertext (K*M, E).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatentCiphertext {
    pub km: ModMatrix,
    pub e: ModMatrix,
}

impl PatentCiphertext {
    pub fn to_text(&self, meta: &FileMeta) -> String {
        let mut out = String::new();
        meta.write(&mut out);
        out.push_str("[KM]\n");
        crate::textio::write_matrix(&mut out, &self.km);
        out.push_str("[E]\n");
        crate::textio::write_matrix(&mut out, &self.e);
        out
    }

    pub fn from_text(text: &str) -> Result<(Self, FileMeta), ParseError> {
        let mut cur = Cursor::new(text)?;
        let meta = cur.parse_meta()?;
        cur.expect_section("KM")?;
        let km = cur.parse_matrix()?;
        cur.expect_section("E")?;
        let e = cur.parse_matrix()?;
        cur.expect_end()?;
        Ok((Self { km, e }, meta))
    }
}

/// Key generation with g of full degree <= k-1.
pub fn keygen(
    p: u64,
    q: u64,
    k: usize,
    rng: &mut SeededRng,
) -> Result<(PatentPublicKey, PatentPrivateKey), PkeError> {
    keygen_with_degree(p, q, k, k.saturating_sub(1), rng)
}

/// Key generation with an explicit degree bound for g (the worked example
/// uses degree 1).
pub fn keygen_with_degree(
    p: u64,
    q: u64,
    k: usize,
    g_degree: usize,
    rng: &mut SeededRng,
) -> Result<(PatentPublicKey, PatentPrivateKey), PkeError> {
    if p == q || !is_prime(p) || !is_prime(q) {
        return Err(PkeError::BadFactors { p, q });
    }
    if k < 2 {
        return Err(PkeError::DegenerateDim { dim: k });
    }
    let n = p
        .checked_mul(q)
        .ok_or(PkeError::Algebra(AlgebraError::BadModulus { value: u64::MAX }))?;
    let modulus = Modulus::new(n)?;
    let a = ModMatrix::random_invertible(k, modulus, rng);
    let c = ModMatrix::random_invertible(k, modulus, rng);
    let b = c.mul(&a)?.mul(&c)?;
    let g = Polynomial::random(g_degree, modulus, rng).eval_matrix(&c)?;
    let public = PatentPublicKey {
        modulus,
        k,
        a,
        b,
        g,
    };
    let private = PatentPrivateKey {
        c,
        p: Modulus::new(p)?,
        q: Modulus::new(q)?,
    };
    Ok((public, private))
}

/// Encryption with d of full degree <= k-1. Returns the ciphertext and
/// the session key K = DBD; K is ground truth for the harness only and is
/// never serialized with the ciphertext.
pub fn encrypt(
    pk: &PatentPublicKey,
    message: &ModMatrix,
    rng: &mut SeededRng,
) -> (PatentCiphertext, ModMatrix) {
    encrypt_with_degree(pk, message, pk.k.saturating_sub(1), rng)
}

/// Encryption with an explicit degree bound for d; resamples until D is
/// invertible.
pub fn encrypt_with_degree(
    pk: &PatentPublicKey,
    message: &ModMatrix,
    d_degree: usize,
    rng: &mut SeededRng,
) -> (PatentCiphertext, ModMatrix) {
    let d = loop {
        let candidate = Polynomial::random(d_degree, pk.modulus, rng)
            .eval_matrix(&pk.g)
            .expect("conformant by construction");
        if candidate.inverse().is_ok() {
            break candidate;
        }
    };
    encrypt_with_d(pk, message, &d)
}

/// Deterministic encryption hook with a caller-chosen D (tests force
/// D = identity to pin K = B, E = A).
pub fn encrypt_with_d(
    pk: &PatentPublicKey,
    message: &ModMatrix,
    d: &ModMatrix,
) -> (PatentCiphertext, ModMatrix) {
    let key = d.mul(&pk.b).expect("conformant").mul(d).expect("conformant");
    let e = d.mul(&pk.a).expect("conformant").mul(d).expect("conformant");
    let km = key.mul(message).expect("conformant message");
    (PatentCiphertext { km, e }, key)
}

/// Decryption: K = CEC, then M = K^{-1} (KM).
pub fn decrypt(
    sk: &PatentPrivateKey,
    ct: &PatentCiphertext,
) -> Result<ModMatrix, PkeError> {
    let key = sk.c.mul(&ct.e)?.mul(&sk.c)?;
    let key_inv = key.inverse()?;
    Ok(key_inv.mul(&ct.km)?)
}
