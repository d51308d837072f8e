//! Passive key recovery against the two-matrix exponent exchange.
//!
//! An eavesdropper sees (M1, M2, C1, C2). Every power of an n x n matrix
//! is a linear combination of its first n powers, so C1 = M1^a1 * M2^a2
//! can be written p(M1) * q(M2) with deg p, deg q < n. Expanding the
//! product gives the bilinear system
//!
//!   sum_{i,j} x_i y_j M1^i M2^j = C1
//!
//! which relinearizes to n^2 linear equations in the n^2 unknowns
//! u_{i,j} = x_i y_j. Any rank-one solution u = x y^T with p(M1), q(M2)
//! invertible and p(M1) q(M2) = C1 recovers the shared key as
//! p(M1)^{-1} C2 q(M2)^{-1}: inverses of polynomials in M commute with
//! powers of M, so the unknown exponents cancel. The final product check
//! makes every accepted output a certified key, which is why randomized
//! retries on degenerate solution spaces are sound.

use std::sync::OnceLock;
use std::time::Instant;

use crate::error::{AlgebraError, AttackError};
use crate::kex::{KexParams, KexTranscript};
use crate::matrix::ModMatrix;
use crate::modular::Modulus;
use crate::report::AttackReport;
use crate::rng::SeededRng;
use crate::solve::{solve_linear, LinearSolveResult, RectMatrix};

/// Default retry budget for degenerate (non-unique) solution spaces.
pub const DEFAULT_RETRY_BUDGET: u32 = 64;

/// The relinearized system for one transcript. Powers of the generators
/// are computed once and cached; the elimination also runs once, lazily,
/// however many solutions are sampled afterwards.
#[derive(Debug)]
pub struct RelinSystem {
    dim: usize,
    modulus: Modulus,
    m1_powers: Vec<ModMatrix>,
    m2_powers: Vec<ModMatrix>,
    basis: Vec<ModMatrix>,
    coeff: RectMatrix,
    rhs: Vec<u64>,
    solved: OnceLock<Result<LinearSolveResult, AlgebraError>>,
}

/// Consecutive powers M^0 .. M^{count-1}.
fn power_ladder(m: &ModMatrix, count: usize) -> Vec<ModMatrix> {
    let mut powers = Vec::with_capacity(count);
    powers.push(ModMatrix::identity(m.dim(), m.modulus()));
    for _ in 1..count {
        let next = powers.last().unwrap().mul(m).expect("conformant");
        powers.push(next);
    }
    powers
}

/// Builds the n^2 x n^2 system whose column (i, j) is the flattening of
/// M1^i * M2^j and whose right-hand side is the flattening of C1.
pub fn build_relin_system(params: &KexParams, c1: &ModMatrix) -> RelinSystem {
    assert_eq!(c1.dim(), params.dim(), "C1 not conformant");
    assert_eq!(
        c1.modulus().value(),
        params.modulus().value(),
        "C1 not conformant"
    );
    let n = params.dim();
    let m1_powers = power_ladder(params.m1(), n);
    let m2_powers = power_ladder(params.m2(), n);
    let mut basis = Vec::with_capacity(n * n);
    for p1 in &m1_powers {
        for p2 in &m2_powers {
            basis.push(p1.mul(p2).expect("conformant"));
        }
    }
    let columns: Vec<Vec<u64>> = basis.iter().map(|b| b.flatten().to_vec()).collect();
    let coeff = RectMatrix::from_columns(&columns, params.modulus()).expect("square system");
    RelinSystem {
        dim: n,
        modulus: params.modulus(),
        m1_powers,
        m2_powers,
        basis,
        coeff,
        rhs: c1.flatten().to_vec(),
        solved: OnceLock::new(),
    }
}

impl RelinSystem {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// The cached basis matrices M1^i * M2^j, index i*n + j.
    pub fn basis(&self) -> &[ModMatrix] {
        &self.basis
    }

    pub fn coeff(&self) -> &RectMatrix {
        &self.coeff
    }

    pub fn rhs(&self) -> &[u64] {
        &self.rhs
    }

    pub fn m1_powers(&self) -> &[ModMatrix] {
        &self.m1_powers
    }

    pub fn m2_powers(&self) -> &[ModMatrix] {
        &self.m2_powers
    }

    /// Runs the elimination (once) and returns the solution set.
    pub fn solution(&self) -> Result<&LinearSolveResult, AttackError> {
        let cached = self
            .solved
            .get_or_init(|| solve_linear(&self.coeff, &self.rhs));
        match cached {
            Ok(sol) => Ok(sol),
            Err(AlgebraError::Inconsistent) => Err(AttackError::Inconsistent),
            Err(e) => Err(AttackError::Algebra(e.clone())),
        }
    }

    pub fn nullspace_dim(&self) -> Result<usize, AttackError> {
        Ok(self.solution()?.nullspace.len())
    }

    /// One solution of the linear system, arranged as the n x n matrix
    /// u_{i,j}: the particular solution plus a random field combination of
    /// the nullspace basis. A full-rank system returns its unique solution
    /// without consuming randomness.
    pub fn sample_solution(&self, rng: &mut SeededRng) -> Result<ModMatrix, AttackError> {
        let sol = self.solution()?;
        let m = self.modulus;
        let mut u = sol.particular.clone();
        for basis_vec in &sol.nullspace {
            let scale = m.sample(rng);
            if scale == 0 {
                continue;
            }
            for (slot, &v) in u.iter_mut().zip(basis_vec) {
                *slot = m.add(*slot, m.mul(scale, v));
            }
        }
        Ok(ModMatrix::new(self.dim, m, u).expect("square by construction"))
    }
}

/// An outer-product factorization u = x y^T. The pair is unique only up
/// to the gauge (lambda x, lambda^{-1} y); key recovery is invariant
/// under it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneFactor {
    pub x: Vec<u64>,
    pub y: Vec<u64>,
}

/// Factors a rank-one matrix by substitution: take the first nonzero
/// entry u_{r,c}, set x_r = 1, y = row r, and x_i = u_{i,c} / u_{r,c};
/// then verify x_i y_j = u_{i,j} everywhere.
pub fn rank_one_factor(u: &ModMatrix) -> Result<RankOneFactor, AttackError> {
    let n = u.dim();
    let m = u.modulus();
    let mut pivot = None;
    'scan: for r in 0..n {
        for c in 0..n {
            if u.get(r, c) != 0 {
                pivot = Some((r, c));
                break 'scan;
            }
        }
    }
    let Some((r, c)) = pivot else {
        return Err(AttackError::ZeroMatrix);
    };
    let pivot_inv = m.inv(u.get(r, c)).map_err(AttackError::Algebra)?;
    let y: Vec<u64> = (0..n).map(|j| u.get(r, j)).collect();
    let x: Vec<u64> = (0..n).map(|i| m.mul(u.get(i, c), pivot_inv)).collect();
    for i in 0..n {
        for j in 0..n {
            if m.mul(x[i], y[j]) != u.get(i, j) {
                return Err(AttackError::NotRankOne);
            }
        }
    }
    Ok(RankOneFactor { x, y })
}

/// Linear combination of cached powers: sum coeffs[i] * powers[i].
pub fn combine_powers(powers: &[ModMatrix], coeffs: &[u64]) -> ModMatrix {
    assert_eq!(powers.len(), coeffs.len());
    let mut acc = ModMatrix::zero(powers[0].dim(), powers[0].modulus());
    for (p, &c) in powers.iter().zip(coeffs) {
        acc = acc.add(&p.scale(c));
    }
    acc
}

/// Recovers the shared key from a transcript. Samples solutions until one
/// factors as rank one with both p(M1) and q(M2) invertible and the
/// product reproduces C1 exactly; only then is the key emitted, so a
/// returned report is always arithmetically certified.
pub fn recover_key(
    transcript: &KexTranscript,
    rng: &mut SeededRng,
    retry_budget: u32,
    truth: Option<&ModMatrix>,
) -> Result<AttackReport, AttackError> {
    let system = build_relin_system(&transcript.params, &transcript.c1);
    recover_from_system(&system, &transcript.c2, rng, retry_budget, truth)
}

/// Attack driver over a prebuilt system; see [`recover_key`].
pub fn recover_from_system(
    system: &RelinSystem,
    c2: &ModMatrix,
    rng: &mut SeededRng,
    retry_budget: u32,
    truth: Option<&ModMatrix>,
) -> Result<AttackReport, AttackError> {
    let start = Instant::now();
    let mut not_rank_one = 0u32;
    let mut factor_singular = 0u32;
    let mut product_mismatch = 0u32;
    // a unique solution cannot change between attempts, so don't burn the
    // budget on it; this also surfaces Inconsistent before any sampling
    let nullspace_dim = system.solution()?.nullspace.len();
    let budget = if nullspace_dim == 0 {
        1
    } else {
        retry_budget.max(1)
    };
    for attempt in 1..=budget {
        let u = system.sample_solution(rng)?;
        let factor = match rank_one_factor(&u) {
            Ok(f) => f,
            Err(AttackError::NotRankOne) | Err(AttackError::ZeroMatrix) => {
                not_rank_one += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let p_m1 = combine_powers(system.m1_powers(), &factor.x);
        let q_m2 = combine_powers(system.m2_powers(), &factor.y);
        // invertibility is checked by attempting the inversion the key
        // computation needs anyway
        let (p_inv, q_inv) = match (p_m1.inverse(), q_m2.inverse()) {
            (Ok(p), Ok(q)) => (p, q),
            _ => {
                factor_singular += 1;
                continue;
            }
        };
        let product = p_m1.mul(&q_m2).expect("conformant");
        if product.flatten() != system.rhs() {
            product_mismatch += 1;
            continue;
        }
        let key = p_inv
            .mul(c2)
            .expect("conformant transcript")
            .mul(&q_inv)
            .expect("conformant transcript");
        let verified = truth.map(|t| *t == key);
        return Ok(AttackReport {
            recovered_key: key,
            attempts: attempt,
            elapsed: start.elapsed(),
            verified,
        });
    }
    Err(AttackError::RetriesExhausted {
        attempts: budget,
        nullspace_dim,
        not_rank_one,
        factor_singular,
        product_mismatch,
    })
}
