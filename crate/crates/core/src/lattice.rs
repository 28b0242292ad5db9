//! Exact integer linear algebra: fraction-free determinants and the index of
//! a full-rank sublattice of Z^n via a Hermite normal form computed modulo a
//! known multiple of the determinant.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Determinant by Bareiss' fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(m.iter().all(|row| row.len() == n), "square matrix required");
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.sign() == Sign::Minus {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Index `[Z^n : L]` of the lattice spanned by `generators`, given a nonzero
/// multiple `modulus` of that index (so `modulus * Z^n` lies in `L`).
///
/// Maintains an upper-triangular basis of `L + modulus * Z^n`, starting from
/// `modulus * I` and folding each generator in with unimodular 2x2 row
/// operations; off-diagonal entries are kept reduced modulo `modulus`.
pub fn index_with_modulus(generators: &[Vec<BigInt>], n: usize, modulus: &BigUint) -> BigUint {
    assert!(!modulus.is_zero(), "modulus must be nonzero");
    let d = BigInt::from(modulus.clone());
    let mut basis: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); n];
            row[i] = d.clone();
            row
        })
        .collect();
    for gen in generators {
        assert_eq!(gen.len(), n, "generator length mismatch");
        let mut v: Vec<BigInt> = gen.iter().map(|x| x.mod_floor(&d)).collect();
        for j in 0..n {
            if v[j].is_zero() {
                continue;
            }
            let pivot = basis[j][j].clone();
            let (g, s, t) = ext_gcd(&pivot, &v[j]);
            let a = &pivot / &g;
            let b = &v[j] / &g;
            let mut new_row = vec![BigInt::zero(); n];
            let mut new_v = vec![BigInt::zero(); n];
            for k in j..n {
                new_row[k] = (&s * &basis[j][k] + &t * &v[k]).mod_floor(&d);
                new_v[k] = (&a * &v[k] - &b * &basis[j][k]).mod_floor(&d);
            }
            // the pivot itself must not be reduced to zero when it equals d
            new_row[j] = g;
            new_v[j] = BigInt::zero();
            basis[j] = new_row;
            v = new_v;
        }
    }
    basis
        .iter()
        .enumerate()
        .map(|(i, row)| row[i].abs().to_biguint().unwrap())
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(bareiss_det(m(&[&[2, 0], &[0, 3]])), BigInt::from(6));
        assert_eq!(bareiss_det(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(bareiss_det(m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(
            bareiss_det(m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])),
            BigInt::from(4)
        );
    }

    #[test]
    fn index_of_sublattices() {
        // 2Z x 3Z generated redundantly
        let gens = m(&[&[2, 0], &[0, 3], &[4, 6]]);
        assert_eq!(index_with_modulus(&gens, 2, &BigUint::from(6u32)), BigUint::from(6u32));
        // {(x, y) : x = y mod 5} has index 5
        let gens = m(&[&[1, 1], &[0, 5]]);
        assert_eq!(index_with_modulus(&gens, 2, &BigUint::from(25u32)), BigUint::from(5u32));
        // the whole lattice
        let gens = m(&[&[3, 1], &[2, 1]]);
        assert_eq!(index_with_modulus(&gens, 2, &BigUint::from(1u32)), BigUint::one());
    }

    #[test]
    fn index_matches_determinant_for_square_bases() {
        let gens = m(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let det = bareiss_det(gens.clone()).abs().to_biguint().unwrap();
        assert_eq!(index_with_modulus(&gens, 3, &det), det);
    }
}
