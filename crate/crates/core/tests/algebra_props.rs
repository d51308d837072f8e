//! Algebraic property suites: every check here is exact, zero tolerance.

use matbreak_core::{
    crt_recombine, crt_scalar, kex_attack, modular::random_prime, solve_linear, ModMatrix,
    Modulus, Polynomial, RectMatrix, SeededRng,
};
use proptest::prelude::*;

fn m(v: u64) -> Modulus {
    Modulus::new(v).unwrap()
}

/// A matrix satisfies its own characteristic polynomial.
#[test]
fn cayley_hamilton_holds() {
    for trial in 0..200u64 {
        let mut rng = SeededRng::stream(0xCA11E7, trial);
        let prime = random_prime(16, &mut rng);
        let dim = 2 + rng.below(5) as usize; // 2..=6
        let a = ModMatrix::random(dim, m(prime), &mut rng);
        let image = a.charpoly().eval_matrix(&a).unwrap();
        assert!(image.is_zero(), "f_M(M) != 0 for trial {trial}");
    }
}

/// Cayley-Hamilton needs no division, so it holds over composites too.
#[test]
fn cayley_hamilton_composite_modulus() {
    for trial in 0..50u64 {
        let mut rng = SeededRng::stream(0xC0, trial);
        let dim = 2 + rng.below(4) as usize;
        let a = ModMatrix::random(dim, m(61133), &mut rng);
        assert!(a.charpoly().eval_matrix(&a).unwrap().is_zero());
    }
}

/// Inverses of invertible polynomials in T commute with T.
#[test]
fn centralizer_of_polynomial_inverses() {
    let mut done = 0u32;
    let mut trial = 0u64;
    while done < 100 {
        let mut rng = SeededRng::stream(0xCE47, trial);
        trial += 1;
        let prime = random_prime(16, &mut rng);
        let dim = 2 + rng.below(4) as usize;
        let t = ModMatrix::random_invertible(dim, m(prime), &mut rng);
        let p_of_t = Polynomial::random(dim - 1, m(prime), &mut rng)
            .eval_matrix(&t)
            .unwrap();
        let Ok(inv) = p_of_t.inverse() else {
            continue; // resample until p(T) is invertible
        };
        assert_eq!(
            inv.mul(&t).unwrap(),
            t.mul(&inv).unwrap(),
            "p(T)^-1 must commute with T"
        );
        done += 1;
    }
}

/// Reductions mod p and q recombine to the original matrix, and the CRT
/// map respects + and * entrywise.
#[test]
fn crt_is_a_ring_isomorphism() {
    let p = m(541);
    let q = m(113);
    let n = m(61133);
    for trial in 0..50u64 {
        let mut rng = SeededRng::stream(0xC47, trial);
        let a = ModMatrix::random(3, n, &mut rng);
        let b = ModMatrix::random(3, n, &mut rng);
        let back = crt_recombine(&a.reduce(p).unwrap(), &a.reduce(q).unwrap()).unwrap();
        assert_eq!(back, a);
        // homomorphism on products and sums
        let prod = a.mul(&b).unwrap();
        let prod_via_crt = crt_recombine(
            &a.reduce(p).unwrap().mul(&b.reduce(p).unwrap()).unwrap(),
            &a.reduce(q).unwrap().mul(&b.reduce(q).unwrap()).unwrap(),
        )
        .unwrap();
        assert_eq!(prod_via_crt, prod);
        let sum = a.add(&b);
        let sum_via_crt = crt_recombine(
            &a.reduce(p).unwrap().add(&b.reduce(p).unwrap()),
            &a.reduce(q).unwrap().add(&b.reduce(q).unwrap()),
        )
        .unwrap();
        assert_eq!(sum_via_crt, sum);
    }
}

/// Any reported non-invertibility factor is a nontrivial divisor: force a
/// first column made of multiples of one prime factor and check the gcd
/// surfaces.
#[test]
fn reported_factors_divide_the_modulus() {
    let n = 61133u64;
    for (factor, cofactor) in [(541u64, 113u64), (113, 541)] {
        for trial in 0..20u64 {
            let mut rng = SeededRng::stream(0xFAC ^ factor, trial);
            let mut a = ModMatrix::random(3, m(n), &mut rng);
            let mut entries = a.flatten().to_vec();
            for row in 0..3 {
                entries[row * 3] = factor * (1 + rng.below(cofactor - 1));
            }
            a = ModMatrix::new(3, m(n), entries).unwrap();
            let err = a.inverse().unwrap_err();
            assert_eq!(
                err,
                matbreak_core::AlgebraError::NotInvertible {
                    factor: Some(factor)
                }
            );
        }
    }
}

proptest! {
    #[test]
    fn scalar_crt_reduces_back(a in 0u64..541, b in 0u64..113) {
        let x = crt_scalar(a, m(541), b, m(113)).unwrap();
        prop_assert!(x < 61133);
        prop_assert_eq!(x % 541, a);
        prop_assert_eq!(x % 113, b);
    }

    #[test]
    fn pow_is_additive_in_the_exponent(seed in any::<u64>(), e1 in -64i64..64, e2 in -64i64..64) {
        let mut rng = SeededRng::new(seed);
        let a = ModMatrix::random_invertible(3, m(569), &mut rng);
        let lhs = a.pow(e1).unwrap().mul(&a.pow(e2).unwrap()).unwrap();
        let rhs = a.pow(e1 + e2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn solve_outputs_satisfy_their_system(seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8) {
        let mut rng = SeededRng::new(seed);
        let p = m(65521);
        let entries: Vec<u64> = (0..rows * cols).map(|_| p.sample(&mut rng)).collect();
        let coeff = RectMatrix::new(rows, cols, p, entries).unwrap();
        // build a guaranteed-consistent rhs from a random preimage
        let x: Vec<u64> = (0..cols).map(|_| p.sample(&mut rng)).collect();
        let rhs = coeff.apply(&x);
        let out = solve_linear(&coeff, &rhs).unwrap();
        prop_assert_eq!(coeff.apply(&out.particular), rhs);
        for v in &out.nullspace {
            prop_assert!(coeff.apply(v).iter().all(|&e| e == 0));
        }
        prop_assert_eq!(out.nullspace.len(), cols - out.rank);
    }

    #[test]
    fn rank_one_factor_reproduces_outer_products(seed in any::<u64>(), dim in 2usize..6) {
        let mut rng = SeededRng::new(seed);
        let p = m(569);
        // random nonzero x, y
        let x: Vec<u64> = (0..dim).map(|_| 1 + rng.below(568)).collect();
        let y: Vec<u64> = (0..dim).map(|_| 1 + rng.below(568)).collect();
        let mut entries = Vec::with_capacity(dim * dim);
        for xi in &x {
            for yj in &y {
                entries.push(p.mul(*xi, *yj));
            }
        }
        let u = ModMatrix::new(dim, p, entries).unwrap();
        let f = kex_attack::rank_one_factor(&u).unwrap();
        // the pair may differ from (x, y) by the gauge scaling; the outer
        // product is the contract
        for i in 0..dim {
            for j in 0..dim {
                prop_assert_eq!(p.mul(f.x[i], f.y[j]), u.get(i, j));
            }
        }
    }
}
