//! Dense square matrices over Z_m with exact arithmetic.
//!
//! Entries are kept strictly reduced; products go through u128
//! intermediates so no modulus below 2^63 can overflow. Values are
//! immutable after construction.

use crate::error::AlgebraError;
use crate::modular::{gcd, Modulus};
use crate::poly::Polynomial;
use crate::rng::SeededRng;

/// Square matrix over Z_m, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    dim: usize,
    modulus: Modulus,
    entries: Vec<u64>,
}

impl ModMatrix {
    /// Builds a matrix from row-major entries, reducing them mod m.
    pub fn new(dim: usize, modulus: Modulus, entries: Vec<u64>) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::BadDimension { dim });
        }
        if entries.len() != dim * dim {
            return Err(AlgebraError::BadEntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let entries = entries.into_iter().map(|e| modulus.reduce(e)).collect();
        Ok(Self {
            dim,
            modulus,
            entries,
        })
    }

    pub fn zero(dim: usize, modulus: Modulus) -> Self {
        Self {
            dim,
            modulus,
            entries: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize, modulus: Modulus) -> Self {
        let mut out = Self::zero(dim, modulus);
        for i in 0..dim {
            out.entries[i * dim + i] = 1 % modulus.value();
        }
        out
    }

    /// Uniform random matrix.
    pub fn random(dim: usize, modulus: Modulus, rng: &mut SeededRng) -> Self {
        let entries = (0..dim * dim).map(|_| modulus.sample(rng)).collect();
        Self {
            dim,
            modulus,
            entries,
        }
    }

    /// Uniform random invertible matrix (rejection sampling).
    pub fn random_invertible(dim: usize, modulus: Modulus, rng: &mut SeededRng) -> Self {
        loop {
            let candidate = Self::random(dim, modulus, rng);
            if candidate.inverse().is_ok() {
                return candidate;
            }
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.dim + col]
    }

    /// Row-major entries, the flattening used by the relinearized systems.
    #[inline]
    pub fn flatten(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn conformance(&self, rhs: &Self) -> Result<(), AlgebraError> {
        if self.dim != rhs.dim {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        if self.modulus.value() != rhs.modulus.value() {
            return Err(AlgebraError::ModulusMismatch {
                left: self.modulus.value(),
                right: rhs.modulus.value(),
            });
        }
        Ok(())
    }

    /// Exact product.
    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.conformance(rhs)?;
        let n = self.dim;
        let m = self.modulus.value() as u128;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u128;
                for k in 0..n {
                    acc = (acc + self.entries[i * n + k] as u128 * rhs.entries[k * n + j] as u128)
                        % m;
                }
                entries[i * n + j] = acc as u64;
            }
        }
        Ok(Self {
            dim: n,
            modulus: self.modulus,
            entries,
        })
    }

    /// Entrywise sum. Panics on nonconformant operands.
    pub fn add(&self, rhs: &Self) -> Self {
        self.conformance(rhs).expect("nonconformant add");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(&a, &b)| self.modulus.add(a, b))
            .collect();
        Self {
            dim: self.dim,
            modulus: self.modulus,
            entries,
        }
    }

    /// Entrywise difference. Panics on nonconformant operands.
    pub fn sub(&self, rhs: &Self) -> Self {
        self.conformance(rhs).expect("nonconformant sub");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(&a, &b)| self.modulus.sub(a, b))
            .collect();
        Self {
            dim: self.dim,
            modulus: self.modulus,
            entries,
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, scalar: u64) -> Self {
        let s = self.modulus.reduce(scalar);
        let entries = self
            .entries
            .iter()
            .map(|&a| self.modulus.mul(a, s))
            .collect();
        Self {
            dim: self.dim,
            modulus: self.modulus,
            entries,
        }
    }

    /// Square-and-multiply power with signed exponent; negative exponents
    /// invert first, so they require an invertible base.
    pub fn pow(&self, exp: i64) -> Result<Self, AlgebraError> {
        let mut base = if exp < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::identity(self.dim, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("conformant by construction");
            }
            base = base.mul(&base).expect("conformant by construction");
            e >>= 1;
        }
        Ok(acc)
    }

    /// Gauss-Jordan inverse. Every pivot must be a unit mod m; when a
    /// column offers only non-unit nonzero entries over a composite
    /// modulus, the shared gcd is reported — over n = pq it is a factor.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let n = self.dim;
        let m = self.modulus;
        let width = 2 * n;
        let mut work = vec![0u64; n * width];
        for i in 0..n {
            work[i * width..i * width + n].copy_from_slice(&self.entries[i * n..(i + 1) * n]);
            work[i * width + n + i] = 1 % m.value();
        }
        for col in 0..n {
            let mut pivot_row = None;
            let mut first_nonzero = None;
            for row in col..n {
                let v = work[row * width + col];
                if v != 0 {
                    if first_nonzero.is_none() {
                        first_nonzero = Some(v);
                    }
                    if gcd(v, m.value()) == 1 {
                        pivot_row = Some(row);
                        break;
                    }
                }
            }
            let Some(pivot_row) = pivot_row else {
                return Err(AlgebraError::NotInvertible {
                    factor: first_nonzero.map(|v| gcd(v, m.value())),
                });
            };
            if pivot_row != col {
                for j in 0..width {
                    work.swap(col * width + j, pivot_row * width + j);
                }
            }
            let inv = m.inv(work[col * width + col]).expect("pivot is a unit");
            for j in 0..width {
                work[col * width + j] = m.mul(work[col * width + j], inv);
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let f = work[row * width + col];
                if f == 0 {
                    continue;
                }
                for j in 0..width {
                    let sub = m.mul(f, work[col * width + j]);
                    work[row * width + j] = m.sub(work[row * width + j], sub);
                }
            }
        }
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            entries[i * n..(i + 1) * n].copy_from_slice(&work[i * width + n..(i + 1) * width]);
        }
        Ok(Self {
            dim: n,
            modulus: m,
            entries,
        })
    }

    /// Monic characteristic polynomial by the Berkowitz scheme: only ring
    /// operations, so composite moduli are fine.
    pub fn charpoly(&self) -> Polynomial {
        let n = self.dim;
        let m = self.modulus;
        // Coefficient vector of the trailing principal submatrix, highest
        // degree first; grown one size per step.
        let mut coeffs: Vec<u64> = vec![1 % m.value()];
        for size in 1..=n {
            let off = n - size;
            let a = self.get(off, off);
            let mut toeplitz_col = Vec::with_capacity(size + 1);
            toeplitz_col.push(1 % m.value());
            toeplitz_col.push(m.neg(a));
            if size >= 2 {
                let sub = size - 1;
                let row: Vec<u64> = (0..sub).map(|j| self.get(off, off + 1 + j)).collect();
                let mut w: Vec<u64> = (0..sub).map(|i| self.get(off + 1 + i, off)).collect();
                for k in 0..sub {
                    let mut dot = 0u128;
                    for (r, wv) in row.iter().zip(&w) {
                        dot = (dot + *r as u128 * *wv as u128) % m.value() as u128;
                    }
                    toeplitz_col.push(m.neg(dot as u64));
                    if k + 1 < sub {
                        // w <- B * w over the trailing (size-1) block
                        let mut next = vec![0u64; sub];
                        for (i, slot) in next.iter_mut().enumerate() {
                            let mut acc = 0u128;
                            for (j, wv) in w.iter().enumerate() {
                                acc = (acc
                                    + self.get(off + 1 + i, off + 1 + j) as u128 * *wv as u128)
                                    % m.value() as u128;
                            }
                            *slot = acc as u64;
                        }
                        w = next;
                    }
                }
            }
            let mut next = vec![0u64; size + 1];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = 0u128;
                for (j, c) in coeffs.iter().enumerate() {
                    if i >= j && i - j < toeplitz_col.len() {
                        acc = (acc + toeplitz_col[i - j] as u128 * *c as u128)
                            % m.value() as u128;
                    }
                }
                *slot = acc as u64;
            }
            coeffs = next;
        }
        coeffs.reverse(); // ascending powers
        Polynomial::new(m, coeffs)
    }

    /// Entrywise reduction to a divisor of the modulus.
    pub fn reduce(&self, new_modulus: Modulus) -> Result<Self, AlgebraError> {
        if !self.modulus.value().is_multiple_of(new_modulus.value()) {
            return Err(AlgebraError::NotADivisor {
                divisor: new_modulus.value(),
                modulus: self.modulus.value(),
            });
        }
        let entries = self.entries.iter().map(|&e| new_modulus.reduce(e)).collect();
        Ok(Self {
            dim: self.dim,
            modulus: new_modulus,
            entries,
        })
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool, AlgebraError> {
        Ok(self.mul(other)? == other.mul(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    fn mat(dim: usize, modulus: u64, entries: &[u64]) -> ModMatrix {
        ModMatrix::new(dim, m(modulus), entries.to_vec()).unwrap()
    }

    #[test]
    fn mul_permutation_swaps_columns() {
        let a = mat(2, 5, &[1, 2, 3, 4]);
        let p = mat(2, 5, &[0, 1, 1, 0]);
        assert_eq!(a.mul(&p).unwrap(), mat(2, 5, &[2, 1, 4, 3]));
    }

    #[test]
    fn mul_identity_is_neutral() {
        let a = mat(3, 97, &[5, 6, 7, 8, 9, 10, 11, 12, 13]);
        let id = ModMatrix::identity(3, m(97));
        assert_eq!(a.mul(&id).unwrap(), a);
        assert_eq!(id.mul(&a).unwrap(), a);
    }

    #[test]
    fn mul_rejects_nonconformant() {
        let a = mat(2, 5, &[1, 0, 0, 1]);
        let b = mat(3, 5, &[0; 9]);
        let c = mat(2, 7, &[1, 0, 0, 1]);
        assert!(matches!(
            a.mul(&b),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            a.mul(&c),
            Err(AlgebraError::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn pow_edge_cases() {
        let a = mat(2, 569, &[12, 34, 11, 99]);
        assert_eq!(a.pow(0).unwrap(), ModMatrix::identity(2, m(569)));
        assert_eq!(a.pow(1).unwrap(), a);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let mut rng = SeededRng::new(11);
        let p = m(97);
        for _ in 0..10 {
            let a = ModMatrix::random(3, p, &mut rng);
            let mut naive = ModMatrix::identity(3, p);
            for _ in 0..5 {
                naive = naive.mul(&a).unwrap();
            }
            assert_eq!(a.pow(5).unwrap(), naive);
        }
    }

    #[test]
    fn negative_pow_inverts() {
        let mut rng = SeededRng::new(13);
        let p = m(569);
        let a = ModMatrix::random_invertible(3, p, &mut rng);
        let inv = a.inverse().unwrap();
        assert_eq!(a.pow(-1).unwrap(), inv);
        assert_eq!(
            a.pow(-4).unwrap(),
            inv.pow(4).unwrap(),
        );
    }

    #[test]
    fn inverse_examples() {
        let id = ModMatrix::identity(2, m(5));
        assert_eq!(id.inverse().unwrap(), id);
        let swap = mat(2, 5, &[0, 1, 1, 0]);
        assert_eq!(swap.inverse().unwrap(), swap);
        // zero-divisor pivot over a composite modulus surfaces the factor
        let bad = mat(2, 6, &[2, 0, 0, 1]);
        assert_eq!(
            bad.inverse(),
            Err(AlgebraError::NotInvertible { factor: Some(2) })
        );
    }

    #[test]
    fn inverse_times_self_is_identity() {
        let mut rng = SeededRng::new(17);
        for dim in 2..=5 {
            let p = m(65521);
            let a = ModMatrix::random_invertible(dim, p, &mut rng);
            let prod = a.inverse().unwrap().mul(&a).unwrap();
            assert_eq!(prod, ModMatrix::identity(dim, p));
        }
    }

    #[test]
    fn inverse_prefers_unit_pivot_over_composite() {
        // column 0 holds a zero divisor above a unit; elimination must
        // select the unit and succeed
        let a = mat(2, 6, &[2, 1, 5, 0]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), ModMatrix::identity(2, m(6)));
    }

    #[test]
    fn charpoly_closed_forms() {
        // (X-1)^2 = X^2 + 5X + 1 mod 7
        let id = ModMatrix::identity(2, m(7));
        assert_eq!(id.charpoly().coeffs(), &[1, 5, 1]);
        // nilpotent: X^2
        let nil = mat(2, 7, &[0, 1, 0, 0]);
        assert_eq!(nil.charpoly().coeffs(), &[0, 0, 1]);
        // generic 2x2: X^2 - (a+d)X + (ad-bc)
        let g = mat(2, 97, &[3, 5, 7, 11]);
        let trace = 3 + 11;
        let det = 3 * 11 + 97 - 5 * 7; // ad - bc = -2 = 95 mod 97
        assert_eq!(g.charpoly().coeffs(), &[det, 97 - trace, 1]);
    }

    #[test]
    fn charpoly_is_monic_degree_n() {
        let mut rng = SeededRng::new(23);
        for dim in 1..=6 {
            let a = ModMatrix::random(dim, m(61133), &mut rng);
            let f = a.charpoly();
            assert_eq!(f.coeffs().len(), dim + 1);
            assert_eq!(f.coeffs()[dim], 1);
        }
    }

    #[test]
    fn reduce_requires_divisor() {
        let a = mat(2, 61133, &[57174, 14133, 7237, 20711]);
        let r = a.reduce(m(541)).unwrap();
        assert_eq!(r, mat(2, 541, &[369, 67, 204, 153]));
        assert!(matches!(
            a.reduce(m(7)),
            Err(AlgebraError::NotADivisor { .. })
        ));
    }
}
