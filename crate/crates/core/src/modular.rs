//! Scalar arithmetic modulo m for m prime or composite.
//!
//! The modulus is capped below 2^63 so every product fits a u128
//! intermediate; reduction happens before values leave this module.

use crate::error::AlgebraError;
use crate::rng::SeededRng;

/// Exclusive upper bound on moduli.
pub const MAX_MODULUS: u64 = 1 << 63;

/// A validated modulus together with its primality status.
///
/// The `prime` flag is computed once at construction by a deterministic
/// Miller-Rabin test; field-only operations (Gaussian elimination) check it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    value: u64,
    prime: bool,
}

impl Modulus {
    pub fn new(value: u64) -> Result<Self, AlgebraError> {
        if !(2..MAX_MODULUS).contains(&value) {
            return Err(AlgebraError::BadModulus { value });
        }
        Ok(Self {
            value,
            prime: is_prime(value),
        })
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn is_prime(&self) -> bool {
        self.prime
    }

    /// Number of bits in the modulus.
    pub fn bits(&self) -> u32 {
        64 - self.value.leading_zeros()
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.value
    }

    #[inline]
    pub fn reduce_u128(&self, x: u128) -> u64 {
        (x % self.value as u128) as u64
    }

    /// Assumes a, b < m.
    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.value {
            s - self.value
        } else {
            s
        }
    }

    /// Assumes a, b < m.
    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.value - b + a
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.value - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.value as u128) as u64
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    ///
    /// When gcd(a, m) > 1 the gcd is surfaced: over n = pq it is a
    /// nontrivial factor of the modulus.
    pub fn inv(&self, a: u64) -> Result<u64, AlgebraError> {
        let (g, x) = ext_gcd(a % self.value, self.value);
        if g != 1 {
            return Err(AlgebraError::NonUnit { gcd: g });
        }
        let m = self.value as i128;
        Ok(((x % m + m) % m) as u64)
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut base = base % self.value;
        let mut acc = 1 % self.value;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Uniform residue in [0, m).
    pub fn sample(&self, rng: &mut SeededRng) -> u64 {
        rng.below(self.value)
    }
}

/// A residue bundled with its modulus. Binary operations require equal
/// moduli and panic otherwise; use `inverse` for the fallible division path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModInt {
    residue: u64,
    modulus: Modulus,
}

impl ModInt {
    pub fn new(residue: u64, modulus: Modulus) -> Self {
        Self {
            residue: modulus.reduce(residue),
            modulus,
        }
    }

    #[inline]
    pub fn residue(&self) -> u64 {
        self.residue
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        Ok(Self {
            residue: self.modulus.inv(self.residue)?,
            modulus: self.modulus,
        })
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.modulus.value(),
            other.modulus.value(),
            "mixed moduli in scalar operation"
        );
    }
}

impl std::ops::Add for ModInt {
    type Output = ModInt;
    fn add(self, rhs: ModInt) -> ModInt {
        self.check(&rhs);
        ModInt {
            residue: self.modulus.add(self.residue, rhs.residue),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Sub for ModInt {
    type Output = ModInt;
    fn sub(self, rhs: ModInt) -> ModInt {
        self.check(&rhs);
        ModInt {
            residue: self.modulus.sub(self.residue, rhs.residue),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for ModInt {
    type Output = ModInt;
    fn mul(self, rhs: ModInt) -> ModInt {
        self.check(&rhs);
        ModInt {
            residue: self.modulus.mul(self.residue, rhs.residue),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for ModInt {
    type Output = ModInt;
    fn neg(self) -> ModInt {
        ModInt {
            residue: self.modulus.neg(self.residue),
            modulus: self.modulus,
        }
    }
}

/// Returns (gcd, x) with a*x = gcd (mod b).
fn ext_gcd(a: u64, b: u64) -> (u64, i128) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 as u64, s0)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller-Rabin. The base set is exact for all n < 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Uniform prime with exactly `bits` bits (2 <= bits <= 62).
pub fn random_prime(bits: u32, rng: &mut SeededRng) -> u64 {
    assert!((2..=62).contains(&bits), "bits out of range");
    let lo = 1u64 << (bits - 1);
    let span = lo; // [lo, 2*lo)
    loop {
        let candidate = lo + rng.below(span);
        if is_prime(candidate) {
            return candidate;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn modulus_validation() {
        assert!(Modulus::new(0).is_err());
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(MAX_MODULUS).is_err());
        assert!(m(2).is_prime());
        assert!(m(569).is_prime());
        assert!(!m(6).is_prime());
        assert!(!m(61133).is_prime()); // 541 * 113
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(m(7).inv(1).unwrap(), 1);
        assert_eq!(m(7).inv(3).unwrap(), 5); // 3*5 = 15 = 1 mod 7
        assert_eq!(
            m(6).inv(2),
            Err(AlgebraError::NonUnit { gcd: 2 }),
        );
    }

    #[test]
    fn inverse_all_units_mod_prime() {
        let p = m(97);
        for a in 1..97 {
            let b = p.inv(a).unwrap();
            assert_eq!(p.mul(a, b), 1);
        }
    }

    #[test]
    fn modint_ops() {
        let p = m(17);
        let a = ModInt::new(10, p);
        let b = ModInt::new(12, p);
        assert_eq!((a + b).residue(), 5);
        assert_eq!((a - b).residue(), 15);
        assert_eq!((a * b).residue(), 1);
        assert_eq!((-a).residue(), 7);
        assert_eq!(a.inverse().unwrap().residue(), 12);
    }

    #[test]
    #[should_panic(expected = "mixed moduli")]
    fn modint_mixed_moduli_panics() {
        let _ = ModInt::new(1, m(5)) + ModInt::new(1, m(7));
    }

    #[test]
    fn deterministic_miller_rabin() {
        let primes = [2u64, 3, 5, 541, 113, 6133, 65521, 2147483647, 4611686018427387847];
        for p in primes {
            assert!(is_prime(p), "{p} should be prime");
        }
        let composites = [4u64, 561, 61133, 65521 * 2, 3215031751];
        for c in composites {
            assert!(!is_prime(c), "{c} should be composite");
        }
    }

    #[test]
    fn random_prime_has_requested_width() {
        let mut rng = SeededRng::new(7);
        for _ in 0..50 {
            let p = random_prime(16, &mut rng);
            assert!((1 << 15..1 << 16).contains(&p));
            assert!(is_prime(p));
        }
    }
}
