//! Norms and exceptional primes in Z[zeta_p].

use cubecert::arith::{is_family_prime, is_prime_u64, legendre, prime_divisors_u64, smallest_nonresidue};
use cubecert::cyclo::{
    common_factor_degree, exceptional_primes, exceptional_primes_with, ideal_norm_lattice, norm_via_resultant,
    u_elements, CycloInt,
};
use cubecert::lattice::bareiss_det;
use cubecert::polyfp::PolyFp;
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

/// `|det Sylvester(Phi_p, U)|` with exact integer elimination.
fn sylvester_norm(u: &CycloInt) -> BigUint {
    let p = u.p() as usize;
    let phi = vec![BigInt::from(1); p];
    let mut g: Vec<BigInt> = u.coeffs().to_vec();
    while g.last().is_some_and(Zero::is_zero) {
        g.pop();
    }
    let m = phi.len() - 1;
    let n = g.len() - 1;
    if n == 0 {
        return g[0].abs().to_biguint().unwrap().pow(m as u32);
    }
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in phi.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(rows).abs().to_biguint().unwrap()
}

fn family(limit: u64) -> Vec<u64> {
    (11..=limit).filter(|&p| is_family_prime(p)).collect()
}

#[test]
fn resultant_matches_sylvester_determinant() {
    for p in family(31) {
        let us = u_elements(p, smallest_nonresidue(p)).unwrap();
        for u in &us.elements {
            assert_eq!(norm_via_resultant(u), sylvester_norm(u), "p = {p}");
        }
    }
}

#[test]
fn norms_independent_of_nonresidue() {
    for p in family(31) {
        let base = u_elements(p, smallest_nonresidue(p)).unwrap();
        let base_norms: Vec<BigUint> = base.elements.iter().map(norm_via_resultant).collect();
        let base_report = exceptional_primes(p).unwrap();
        for z in (2..p).filter(|&z| legendre(z as i128, p) == -1) {
            let us = u_elements(p, z).unwrap();
            let norms: Vec<BigUint> = us.elements.iter().map(norm_via_resultant).collect();
            assert_eq!(norms, base_norms, "p = {p}, z = {z}");
            let report = exceptional_primes_with(p, z).unwrap();
            assert_eq!(report.norm_gcd, base_report.norm_gcd);
            assert_eq!(report.confirmed, base_report.confirmed);
        }
    }
}

#[test]
fn lattice_and_norm_routes_agree() {
    for p in family(50) {
        let z = smallest_nonresidue(p);
        let lattice = ideal_norm_lattice(p, z).unwrap();
        let mut from_lattice: Vec<u64> = prime_divisors_u64(lattice.to_u64().expect("small index"))
            .into_iter()
            .filter(|&l| l != p && (p * p - 1) % l != 0)
            .collect();
        from_lattice.sort_unstable();
        let report = exceptional_primes(p).unwrap();
        let mut confirmed: Vec<u64> = report
            .confirmed
            .iter()
            .map(|l| l.to_u64().unwrap())
            .filter(|&l| (p * p - 1) % l != 0)
            .collect();
        confirmed.sort_unstable();
        assert_eq!(from_lattice, confirmed, "p = {p}");
        assert!(report.cofactor == BigUint::from(1u32));
    }
}

/// `l | N(u_t)` exactly when `Phi_p` and `U_t` share a factor mod `l`.
#[test]
fn prime_divisors_of_norms_detected_mod_l() {
    for p in family(47) {
        let us = u_elements(p, smallest_nonresidue(p)).unwrap();
        for u in &us.elements {
            let norm = norm_via_resultant(u);
            for l in (2..1000u64).filter(|&l| is_prime_u64(l) && l != p) {
                let divides = (&norm % l).is_zero();
                let phi = PolyFp::new(l, vec![1; p as usize]);
                let shared = phi.gcd(&u.to_poly_mod(l)).degree().unwrap_or(0) > 0;
                assert_eq!(divides, shared, "p = {p}, l = {l}");
            }
        }
    }
}

#[test]
fn confirmation_degree_for_synthetic_elements() {
    // 1 - zeta has norm p; (1 - zeta)^k has norm p^k
    for p in family(47) {
        let one_minus = CycloInt::one(p).sub(&CycloInt::zeta_pow(p, 1));
        assert_eq!(norm_via_resultant(&one_minus), BigUint::from(p));
        assert_eq!(norm_via_resultant(&one_minus.mul(&one_minus)), BigUint::from(p * p));
    }
    let us = u_elements(11, 2).unwrap();
    assert_eq!(common_factor_degree(&us, &BigUint::from(13u32)), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn norm_is_multiplicative(pi in 0usize..3, a in prop::collection::vec(-3i64..=3, 10), b in prop::collection::vec(-3i64..=3, 10)) {
        let p = [11u64, 23, 29][pi];
        let make = |v: &[i64]| {
            let mut coeffs = vec![BigInt::zero(); p as usize - 1];
            for (i, &c) in v.iter().enumerate() {
                coeffs[i] = BigInt::from(c);
            }
            CycloInt::from_coeffs(p, coeffs)
        };
        let (x, y) = (make(&a), make(&b));
        prop_assert_eq!(norm_via_resultant(&x.mul(&y)), norm_via_resultant(&x) * norm_via_resultant(&y));
        prop_assert_eq!(norm_via_resultant(&x), sylvester_norm(&x));
    }

    #[test]
    fn zeta_is_a_unit(pi in 0usize..3, k in 0u64..60) {
        let p = [11u64, 23, 29][pi];
        let z = CycloInt::zeta_pow(p, k);
        prop_assert_eq!(norm_via_resultant(&z), BigUint::from(1u32));
    }
}
