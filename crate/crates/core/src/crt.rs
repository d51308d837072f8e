//! Chinese-remainder recombination of matrices over coprime moduli.

use crate::error::AlgebraError;
use crate::matrix::ModMatrix;
use crate::modular::{gcd, Modulus};

/// Residue mod p*q reducing to a mod p and b mod q. The combined
/// modulus must stay in range (p*q < 2^63).
pub fn crt_scalar(a: u64, p: Modulus, b: u64, q: Modulus) -> Result<u64, AlgebraError> {
    let (pv, qv) = (p.value(), q.value());
    if gcd(pv, qv) != 1 {
        return Err(AlgebraError::ModuliNotCoprime { p: pv, q: qv });
    }
    let product = pv as u128 * qv as u128;
    if product >= 1 << 63 {
        return Err(AlgebraError::BadModulus { value: u64::MAX });
    }
    let p_inv = q.inv(pv % qv).expect("coprime moduli");
    let diff = q.sub(q.reduce(b), q.reduce(a % qv));
    let lift = q.mul(diff, p_inv);
    Ok(a % pv + pv * lift)
}

/// Entrywise CRT preimage: the unique matrix mod p*q reducing to `mp` and
/// `mq`. The moduli are read from the operands.
pub fn crt_recombine(mp: &ModMatrix, mq: &ModMatrix) -> Result<ModMatrix, AlgebraError> {
    let p = mp.modulus();
    let q = mq.modulus();
    if gcd(p.value(), q.value()) != 1 {
        return Err(AlgebraError::ModuliNotCoprime {
            p: p.value(),
            q: q.value(),
        });
    }
    if mp.dim() != mq.dim() {
        return Err(AlgebraError::DimensionMismatch {
            left: mp.dim(),
            right: mq.dim(),
        });
    }
    let product = p
        .value()
        .checked_mul(q.value())
        .ok_or(AlgebraError::BadModulus { value: u64::MAX })?;
    let combined = Modulus::new(product)?;
    let entries = mp
        .flatten()
        .iter()
        .zip(mq.flatten())
        .map(|(&a, &b)| crt_scalar(a, p, b, q))
        .collect::<Result<Vec<_>, _>>()?;
    ModMatrix::new(mp.dim(), combined, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn scalar_examples() {
        let p = m(541);
        let q = m(113);
        assert_eq!(crt_scalar(51, p, 43, q).unwrap(), 20609);
        assert_eq!(crt_scalar(0, p, 0, q).unwrap(), 0);
    }

    #[test]
    fn reference_key_recombination() {
        let kp = ModMatrix::new(2, m(541), vec![51, 256, 178, 366]).unwrap();
        let kq = ModMatrix::new(2, m(113), vec![43, 10, 95, 92]).unwrap();
        let k = crt_recombine(&kp, &kq).unwrap();
        assert_eq!(k.modulus().value(), 61133);
        assert_eq!(k.flatten(), &[20609, 51651, 14785, 1448]);
    }

    #[test]
    fn roundtrip_through_reductions() {
        let mut rng = SeededRng::new(31);
        let p = m(541);
        let q = m(113);
        let n = m(541 * 113);
        for _ in 0..20 {
            let a = ModMatrix::random(3, n, &mut rng);
            let back = crt_recombine(&a.reduce(p).unwrap(), &a.reduce(q).unwrap()).unwrap();
            assert_eq!(back, a);
        }
    }

    #[test]
    fn non_coprime_rejected() {
        let a = ModMatrix::identity(2, m(6));
        let b = ModMatrix::identity(2, m(10));
        assert!(matches!(
            crt_recombine(&a, &b),
            Err(AlgebraError::ModuliNotCoprime { .. })
        ));
    }

    #[test]
    fn oversized_product_rejected() {
        // each modulus is valid on its own but the combination overflows
        let p = m((1 << 62) - 57); // prime
        let q = m((1 << 62) - 87); // prime
        assert!(matches!(
            crt_scalar(1, p, 2, q),
            Err(AlgebraError::BadModulus { .. })
        ));
    }
}
