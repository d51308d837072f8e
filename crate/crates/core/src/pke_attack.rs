//! Key recovery against the conjugation scheme, given the factorization
//! of the modulus.
//!
//! Working mod each prime factor p: since D is a polynomial in G, the
//! ciphertext component E_p = D_p A_p D_p lies in the span of the
//! symmetric products G^i A G^j. Relinearizing x_i x_j =: u_{i,j} (i <= j)
//! turns E_p = (sum x_i G^i) A (sum x_j G^j) into k^2 linear equations in
//! k(k+1)/2 unknowns. Crucially, ANY solution u — rank-one or not — maps
//! to the partial key linearly:
//!
//!   sum u_{i,j} S^B_{i,j} = C (sum u_{i,j} S^A_{i,j}) C = C E_p C = K_p
//!
//! because G (hence each G^i) commutes with C and B = CAC. So no
//! coefficient extraction, no square roots, no retries: solve once, apply
//! the B-side basis, recombine mod p and mod q by CRT.

use std::time::Instant;

use crate::crt::crt_recombine;
use crate::error::{AlgebraError, AttackError};
use crate::matrix::ModMatrix;
use crate::modular::Modulus;
use crate::pke::{PatentCiphertext, PatentPublicKey};
use crate::report::AttackReport;
use crate::solve::{solve_linear, LinearSolveResult, RectMatrix};

/// Entrywise reduction modulo a divisor of the matrix modulus.
pub fn reduce_mod(m: &ModMatrix, prime: Modulus) -> Result<ModMatrix, AlgebraError> {
    m.reduce(prime)
}

/// Index pairs (i, j) with i <= j < k, in the order the unknown vector
/// uses them.
pub fn symmetric_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in i..k {
            pairs.push((i, j));
        }
    }
    pairs
}

/// The relinearized system mod one prime: k^2 equations over k(k+1)/2
/// symmetric unknowns u_{i,j} = x_i x_j.
#[derive(Debug, Clone)]
pub struct QuadraticSystem {
    prime: Modulus,
    k: usize,
    g_powers: Vec<ModMatrix>,
    sym_basis_a: Vec<ModMatrix>,
    coeff: RectMatrix,
    rhs: Vec<u64>,
}

fn symmetric_products(
    g_powers: &[ModMatrix],
    center: &ModMatrix,
) -> Result<Vec<ModMatrix>, AlgebraError> {
    let k = g_powers.len();
    let mut basis = Vec::with_capacity(k * (k + 1) / 2);
    for (i, j) in symmetric_pairs(k) {
        let left = g_powers[i].mul(center)?.mul(&g_powers[j])?;
        if i == j {
            basis.push(left);
        } else {
            let right = g_powers[j].mul(center)?.mul(&g_powers[i])?;
            basis.push(left.add(&right));
        }
    }
    Ok(basis)
}

/// Builds the system for one prime from the reduced G, A and E.
pub fn build_quadratic_system(
    gp: &ModMatrix,
    ap: &ModMatrix,
    ep: &ModMatrix,
) -> Result<QuadraticSystem, AttackError> {
    let k = gp.dim();
    let prime = gp.modulus();
    let mut g_powers = Vec::with_capacity(k);
    g_powers.push(ModMatrix::identity(k, prime));
    for _ in 1..k {
        let next = g_powers.last().unwrap().mul(gp)?;
        g_powers.push(next);
    }
    let sym_basis_a = symmetric_products(&g_powers, ap)?;
    let columns: Vec<Vec<u64>> = sym_basis_a.iter().map(|m| m.flatten().to_vec()).collect();
    let coeff = RectMatrix::from_columns(&columns, prime)?;
    Ok(QuadraticSystem {
        prime,
        k,
        g_powers,
        sym_basis_a,
        coeff,
        rhs: ep.flatten().to_vec(),
    })
}

impl QuadraticSystem {
    pub fn prime(&self) -> Modulus {
        self.prime
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// k(k+1)/2, versus k unknowns before relinearization.
    pub fn unknown_count(&self) -> usize {
        self.k * (self.k + 1) / 2
    }

    pub fn equation_count(&self) -> usize {
        self.k * self.k
    }

    pub fn sym_basis_a(&self) -> &[ModMatrix] {
        &self.sym_basis_a
    }

    pub fn coeff(&self) -> &RectMatrix {
        &self.coeff
    }

    pub fn rhs(&self) -> &[u64] {
        &self.rhs
    }

    /// Symmetric basis with another center matrix over the cached powers
    /// of G; called with B to turn a solution into the partial key.
    pub fn symmetric_basis_for(
        &self,
        center: &ModMatrix,
    ) -> Result<Vec<ModMatrix>, AlgebraError> {
        symmetric_products(&self.g_powers, center)
    }

    pub fn solve(&self) -> Result<LinearSolveResult, AttackError> {
        match solve_linear(&self.coeff, &self.rhs) {
            Ok(sol) => Ok(sol),
            Err(AlgebraError::Inconsistent) => Err(AttackError::Inconsistent),
            Err(e) => Err(AttackError::Algebra(e)),
        }
    }

    /// Applies a solution vector to a symmetric basis.
    pub fn combine(basis: &[ModMatrix], solution: &[u64]) -> ModMatrix {
        assert_eq!(basis.len(), solution.len());
        let mut acc = ModMatrix::zero(basis[0].dim(), basis[0].modulus());
        for (m, &c) in basis.iter().zip(solution) {
            acc = acc.add(&m.scale(c));
        }
        acc
    }
}

/// The key reduced mod one prime factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialKey {
    pub prime: Modulus,
    pub kp: ModMatrix,
}

/// Recovers K mod one prime from the reduced public key and reduced E:
/// solve the relinearized system (particular solution, free variables
/// zero) and push the solution through the B-side basis.
pub fn recover_partial_key(
    pk_p: &PatentPublicKey,
    ep: &ModMatrix,
) -> Result<PartialKey, AttackError> {
    let system = build_quadratic_system(pk_p.g(), pk_p.a(), ep)?;
    let solution = system.solve()?;
    let basis_b = system.symmetric_basis_for(pk_p.b())?;
    let kp = QuadraticSystem::combine(&basis_b, &solution.particular);
    Ok(PartialKey {
        prime: system.prime(),
        kp,
    })
}

/// Full break: partial keys mod p and mod q, CRT recombination, then
/// M = K^{-1} (KM). Deterministic — no retries on this path.
pub fn recover_key_and_message(
    pk: &PatentPublicKey,
    ct: &PatentCiphertext,
    p: Modulus,
    q: Modulus,
    truth: Option<&ModMatrix>,
) -> Result<(ModMatrix, ModMatrix, AttackReport), AttackError> {
    let start = Instant::now();
    let n = pk.modulus().value();
    if p.value().checked_mul(q.value()) != Some(n) {
        return Err(AttackError::FactorMismatch {
            p: p.value(),
            q: q.value(),
            n,
        });
    }
    let partial_p = recover_partial_key(&pk.reduce(p)?, &ct.e.reduce(p)?)?;
    let partial_q = recover_partial_key(&pk.reduce(q)?, &ct.e.reduce(q)?)?;
    let key = crt_recombine(&partial_p.kp, &partial_q.kp)?;
    let message = key.inverse()?.mul(&ct.km)?;
    let verified = truth.map(|t| *t == key);
    let report = AttackReport {
        recovered_key: key.clone(),
        attempts: 1,
        elapsed: start.elapsed(),
        verified,
    };
    Ok((key, message, report))
}
