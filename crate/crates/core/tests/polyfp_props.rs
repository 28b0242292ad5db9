//! Squarefree decomposition, cube test and separability against polynomials
//! built from known irreducible factors.

use std::collections::BTreeMap;

use cubecert::polyfp::{is_cube, is_separable, squarefree_decomposition, PolyFp};
use proptest::prelude::*;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 13];

fn has_root(f: &PolyFp) -> bool {
    (0..f.modulus()).any(|x| f.eval(x) == 0)
}

/// Monic irreducibles of degree 1..=3 by brute force (no roots suffices).
fn irreducibles(p: u64) -> Vec<PolyFp> {
    let mut out: Vec<PolyFp> = (0..p).map(|a| PolyFp::linear(p, a)).collect();
    for deg in 2..=3usize {
        let count = p.pow(deg as u32);
        for code in 0..count {
            let mut coeffs = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                coeffs.push(c % p);
                c /= p;
            }
            coeffs.push(1);
            let f = PolyFp::new(p, coeffs);
            if !has_root(&f) {
                out.push(f);
            }
        }
    }
    out
}

/// `(p, unit, [(irreducible index, exponent)])` with distinct indices.
fn factored() -> impl Strategy<Value = (u64, u64, Vec<(usize, u64)>)> {
    (0..PRIMES.len()).prop_flat_map(|i| {
        let p = PRIMES[i];
        let n = irreducibles(p).len();
        (
            Just(p),
            1..p,
            prop::collection::btree_map(0..n, 1u64..=9, 1..4).prop_map(|m| m.into_iter().collect()),
        )
    })
}

fn build(p: u64, unit: u64, spec: &[(usize, u64)]) -> (PolyFp, BTreeMap<u64, PolyFp>) {
    let irr = irreducibles(p);
    let mut f = PolyFp::constant(p, unit);
    let mut layers: BTreeMap<u64, PolyFp> = BTreeMap::new();
    for &(i, e) in spec {
        f = f.mul(&irr[i].pow(e));
        let layer = layers.entry(e).or_insert_with(|| PolyFp::one(p));
        *layer = layer.mul(&irr[i]);
    }
    (f, layers)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decomposition_matches_construction((p, unit, spec) in factored()) {
        let (f, layers) = build(p, unit, &spec);
        let dec = squarefree_decomposition(&f).unwrap();
        prop_assert_eq!(dec.unit, unit);
        let got: BTreeMap<u64, PolyFp> = dec.factors.iter().map(|(g, e)| (*e, g.clone())).collect();
        prop_assert_eq!(got.len(), dec.factors.len(), "repeated exponent");
        prop_assert_eq!(got, layers);
        prop_assert_eq!(dec.reassemble(p), f);
    }

    #[test]
    fn cube_iff_all_exponents_divisible((p, unit, spec) in factored()) {
        let (f, _) = build(p, unit, &spec);
        let (cube, root) = is_cube(&f).unwrap();
        let unit_is_cube = (1..p).any(|x| x * x % p * x % p == unit);
        let expected = unit_is_cube && spec.iter().all(|(_, e)| e % 3 == 0);
        prop_assert_eq!(cube, expected);
        if let Some(g) = root {
            prop_assert_eq!(g.pow(3), f);
        }
    }

    #[test]
    fn cubes_and_twisted_cubes((p, unit, spec) in factored(), extra in 0usize..8) {
        let (g, _) = build(p, unit, &spec);
        let cube = g.pow(3);
        prop_assert!(is_cube(&cube).unwrap().0);
        // multiply by one further irreducible to the first power
        let irr = irreducibles(p);
        let h = irr[extra % irr.len()].clone();
        let twisted = cube.mul(&h);
        prop_assert!(!is_cube(&twisted).unwrap().0);
    }

    #[test]
    fn separable_iff_exponents_one((p, unit, spec) in factored()) {
        let (f, _) = build(p, unit, &spec);
        prop_assume!(f.degree().unwrap_or(0) > 0);
        prop_assert_eq!(is_separable(&f).unwrap(), spec.iter().all(|&(_, e)| e == 1));
    }
}

/// The product of the monic irreducibles of degree dividing `k` is
/// `t^{p^k} - t`; the decomposition has to see it as squarefree.
#[test]
fn frobenius_polynomials_are_squarefree() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        for k in 1..=2u32 {
            let deg = p.pow(k) as usize;
            if deg > 170 {
                continue;
            }
            let mut coeffs = vec![0u64; deg + 1];
            coeffs[deg] = 1;
            coeffs[1] = p - 1;
            let f = PolyFp::new(p, coeffs);
            let dec = squarefree_decomposition(&f).unwrap();
            assert_eq!(dec.factors.len(), 1);
            assert_eq!(dec.factors[0].1, 1);
            assert!(is_separable(&f).unwrap());
            // its p-th power is a p-th power layer only
            let fp = f.pow(p);
            let dec = squarefree_decomposition(&fp).unwrap();
            assert_eq!(dec.factors, vec![(f.clone(), p)]);
            assert_eq!(is_cube(&fp).unwrap().0, p == 3);
        }
    }
}

/// Layer oracle: multiplicity of each irreducible read off by repeated
/// exact division, compared with the decomposition for degree <= 12.
#[test]
fn layer_oracle_by_trial_division() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let irr = irreducibles(p);
        let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ p;
        for _ in 0..40 {
            let mut f = PolyFp::one(p);
            while f.degree().unwrap() < 6 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let g = &irr[(state >> 33) as usize % irr.len()];
                f = f.mul(g);
            }
            if f.degree().unwrap() > 12 {
                continue;
            }
            let mut expected: BTreeMap<u64, PolyFp> = BTreeMap::new();
            for g in &irr {
                let mut e = 0;
                let mut rest = f.clone();
                while rest.rem(g).is_zero() {
                    rest = rest.exact_div(g);
                    e += 1;
                }
                if e > 0 {
                    let layer = expected.entry(e).or_insert_with(|| PolyFp::one(p));
                    *layer = layer.mul(g);
                }
            }
            let dec = squarefree_decomposition(&f).unwrap();
            let got: BTreeMap<u64, PolyFp> = dec.factors.into_iter().map(|(g, e)| (e, g)).collect();
            assert_eq!(got, expected, "p = {p}, f = {f}");
        }
    }
}

#[test]
fn degenerate_inputs() {
    assert!(squarefree_decomposition(&PolyFp::zero(7)).is_err());
    assert!(is_separable(&PolyFp::constant(7, 3)).is_err());
    let (cube, root) = is_cube(&PolyFp::constant(7, 6)).unwrap();
    assert!(cube);
    assert_eq!(root.unwrap().pow(3), PolyFp::constant(7, 6));
    assert!(!is_cube(&PolyFp::constant(7, 3)).unwrap().0);
}
