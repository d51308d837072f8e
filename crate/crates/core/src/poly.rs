//! Polynomials over Z_m, evaluated at scalars or square matrices.

use crate::error::AlgebraError;
use crate::matrix::ModMatrix;
use crate::modular::Modulus;
use crate::rng::SeededRng;

/// Coefficient index i holds the coefficient of X^i. Trailing zeros are
/// permitted; `trimmed` produces the canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    modulus: Modulus,
    coeffs: Vec<u64>,
}

impl Polynomial {
    pub fn new(modulus: Modulus, coeffs: Vec<u64>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| modulus.reduce(c)).collect();
        Self { modulus, coeffs }
    }

    pub fn constant(value: u64, modulus: Modulus) -> Self {
        Self::new(modulus, vec![value])
    }

    /// Uniform coefficients for degrees 0..=max_degree.
    pub fn random(max_degree: usize, modulus: Modulus, rng: &mut SeededRng) -> Self {
        let coeffs = (0..=max_degree).map(|_| modulus.sample(rng)).collect();
        Self { modulus, coeffs }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Degree of the canonical form; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Canonical form with trailing zero coefficients removed.
    pub fn trimmed(&self) -> Self {
        let len = self.degree().map_or(0, |d| d + 1);
        Self {
            modulus: self.modulus,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    /// Horner evaluation at a scalar.
    pub fn eval(&self, x: u64) -> u64 {
        let m = self.modulus;
        let x = m.reduce(x);
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| m.add(m.mul(acc, x), c))
    }

    /// Horner evaluation at a square matrix over the same modulus.
    pub fn eval_matrix(&self, x: &ModMatrix) -> Result<ModMatrix, AlgebraError> {
        if x.modulus().value() != self.modulus.value() {
            return Err(AlgebraError::ModulusMismatch {
                left: self.modulus.value(),
                right: x.modulus().value(),
            });
        }
        let id = ModMatrix::identity(x.dim(), x.modulus());
        let mut acc = ModMatrix::zero(x.dim(), x.modulus());
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(&id.scale(c));
        }
        Ok(acc)
    }
}
