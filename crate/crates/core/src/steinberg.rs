//! The degree-zero divisors on P^1(F_p) with coefficients in F_l, under the
//! right action of GL_2(F_p). Used as an independent check on exceptional
//! primes: for `l` prime to `p(p^2-1)`, the vectors fixed by the cubes `3C`
//! of a non-split Cartan subgroup should generate everything as a module
//! over the unipotent group ring exactly when `l` is not exceptional.

use crate::arith::{add_mod, is_prime_u64, prime_divisors_u64, sub_mod};
use crate::cyclo::coset_partition;
use crate::error::{Error, Result};
use crate::ff::{p1_act, Mat2, P1Point};
use crate::linalg;

/// Element of `Div(P^1(F_p)) (x) F_l`, indexed in `p1_enumerate` order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorVector {
    pub p: u64,
    pub ell: u64,
    pub residues: Vec<u64>,
}

impl DivisorVector {
    pub fn zero(p: u64, ell: u64) -> Self {
        Self {
            p,
            ell,
            residues: vec![0; p as usize + 1],
        }
    }

    pub fn point(p: u64, ell: u64, pt: P1Point) -> Self {
        let mut v = Self::zero(p, ell);
        v.residues[pt.index()] = 1;
        v
    }

    /// `t = [1:0] - [0:1]`.
    pub fn t(p: u64, ell: u64) -> Self {
        Self::point(p, ell, P1Point::affine(0)).sub(&Self::point(p, ell, P1Point::INFINITY))
    }

    pub fn degree(&self) -> u64 {
        self.residues.iter().fold(0, |acc, &x| add_mod(acc, x, self.ell))
    }

    pub fn is_degree_zero(&self) -> bool {
        self.degree() == 0
    }

    pub fn add(&self, other: &Self) -> Self {
        let residues = self
            .residues
            .iter()
            .zip(&other.residues)
            .map(|(&a, &b)| add_mod(a, b, self.ell))
            .collect();
        Self { residues, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let residues = self
            .residues
            .iter()
            .zip(&other.residues)
            .map(|(&a, &b)| sub_mod(a, b, self.ell))
            .collect();
        Self { residues, ..*self }
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = (c as i128).rem_euclid(self.ell as i128) as u64;
        let residues = self
            .residues
            .iter()
            .map(|&a| crate::arith::mul_mod(a, c, self.ell))
            .collect();
        Self { residues, ..*self }
    }

    /// Right action `D * M`, extended linearly from points.
    pub fn act(&self, mat: &Mat2) -> Self {
        let mut out = Self::zero(self.p, self.ell);
        for (i, &c) in self.residues.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let image = p1_act(P1Point::from_index(i), mat).expect("invertible matrix");
            let j = image.index();
            out.residues[j] = add_mod(out.residues[j], c, self.ell);
        }
        out
    }
}

/// `sum_i c_i U^i` in `Z[U]`, `U = [[1, 1], [0, 1]]`, exponents mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingU {
    pub p: u64,
    pub coeffs: Vec<i64>,
}

impl GroupRingU {
    pub fn zero(p: u64) -> Self {
        Self {
            p,
            coeffs: vec![0; p as usize],
        }
    }

    /// `sum_{i=0}^{p-1} U^i`.
    pub fn full_sum(p: u64) -> Self {
        Self {
            p,
            coeffs: vec![1; p as usize],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// `v * (sum c_i U^i)`.
    pub fn act_on(&self, v: &DivisorVector) -> DivisorVector {
        let mut out = DivisorVector::zero(v.p, v.ell);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                out = out.add(&v.act(&Mat2::unipotent(self.p, i as u64)).scale(c));
            }
        }
        out
    }
}

/// `gamma_w = sum_{b in I_w} U^{b eps}` for `w = ONE, J, JP`.
pub fn gamma_elements(p: u64, eps: u64) -> Result<[GroupRingU; 3]> {
    let parts = coset_partition(p, eps)?;
    Ok(parts.map(|part| {
        let mut g = GroupRingU::zero(p);
        for b in part {
            g.coeffs[((b * eps) % p) as usize] += 1;
        }
        g
    }))
}

fn check_characteristic(p: u64, ell: u64) -> Result<()> {
    if !is_prime_u64(ell) {
        return Err(Error::NotPrime(ell));
    }
    let excluded = ell == p || (p * p - 1) % ell == 0;
    if excluded {
        return Err(Error::ExcludedCharacteristic { p, ell });
    }
    Ok(())
}

/// First `[[a, b eps], [b, a]]` in lexicographic `(a, b)` order whose
/// multiplicative order is `p^2 - 1`.
pub fn cartan_generator(p: u64, eps: u64) -> Mat2 {
    let order = p * p - 1;
    let mut primes = prime_divisors_u64(p - 1);
    primes.extend(prime_divisors_u64(p + 1));
    primes.sort_unstable();
    primes.dedup();
    let identity = Mat2::identity(p);
    for a in 0..p {
        for b in 0..p {
            let Ok(m) = Mat2::new(p, [[a, b * eps % p], [b, a]]) else {
                continue;
            };
            if primes.iter().all(|&q| m.pow(order / q) != identity) {
                return m;
            }
        }
    }
    unreachable!("the non-split Cartan subgroup is cyclic")
}

/// Basis of the `3C`-fixed vectors in `Div^0(P^1(F_p)) (x) F_l`.
pub fn fixed_space_3c(p: u64, eps: u64, ell: u64) -> Result<Vec<DivisorVector>> {
    check_characteristic(p, ell)?;
    let g = cartan_generator(p, eps);
    let h = g.pow(3);
    // basis of the degree-zero part: P_i - P_0 for i = 1..=p
    let basis: Vec<DivisorVector> = (1..=p as usize)
        .map(|i| {
            DivisorVector::point(p, ell, P1Point::from_index(i))
                .sub(&DivisorVector::point(p, ell, P1Point::INFINITY))
        })
        .collect();
    let images: Vec<DivisorVector> = basis.iter().map(|b| b.act(&h).sub(b)).collect();
    // columns are images; rows are P^1 coordinates
    let matrix: Vec<Vec<u64>> = (0..=p as usize)
        .map(|r| images.iter().map(|v| v.residues[r]).collect())
        .collect();
    let kernel = linalg::kernel(&matrix, ell);
    Ok(kernel
        .into_iter()
        .map(|x| {
            x.iter()
                .zip(&basis)
                .fold(DivisorVector::zero(p, ell), |acc, (&c, b)| acc.add(&b.scale(c as i64)))
        })
        .collect())
}

/// `z_w = sum_{I_w} [1 : eps b] - sum_{I_ONE} [1 : eps b] - [0 : 1]` for
/// `w = J, JP`.
pub fn z_elements(p: u64, eps: u64, ell: u64) -> Result<[DivisorVector; 2]> {
    let parts = coset_partition(p, eps)?;
    let sum_over = |part: &[u64]| {
        part.iter().fold(DivisorVector::zero(p, ell), |acc, &b| {
            acc.add(&DivisorVector::point(p, ell, P1Point::affine(b * eps % p)))
        })
    };
    let base = sum_over(&parts[0]).add(&DivisorVector::point(p, ell, P1Point::INFINITY));
    Ok([sum_over(&parts[1]).sub(&base), sum_over(&parts[2]).sub(&base)])
}

fn as_rows(vs: &[DivisorVector]) -> Vec<Vec<u64>> {
    vs.iter().map(|v| v.residues.clone()).collect()
}

pub fn span_rank(vs: &[DivisorVector]) -> usize {
    match vs.first() {
        None => 0,
        Some(v) => linalg::rank(&as_rows(vs), v.ell),
    }
}

/// Whether the `3C`-fixed vectors generate `Div^0 (x) F_l` under `F_l[U]`.
pub fn generation_test(p: u64, eps: u64, ell: u64) -> Result<bool> {
    let fixed = fixed_space_3c(p, eps, ell)?;
    let u = Mat2::unipotent(p, 1);
    let mut orbit = Vec::with_capacity(fixed.len() * p as usize);
    for v in fixed {
        let mut cur = v;
        for _ in 0..p {
            let next = cur.act(&u);
            orbit.push(cur);
            cur = next;
        }
    }
    Ok(span_rank(&orbit) == p as usize)
}

/// The `p` vectors `t U^i`.
pub fn t_orbit(p: u64, ell: u64) -> Vec<DivisorVector> {
    let t = DivisorVector::t(p, ell);
    (0..p).map(|i| t.act(&Mat2::unipotent(p, i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_supports_at_11() {
        let g = gamma_elements(11, 2).unwrap();
        let sizes: Vec<usize> = g.iter().map(GroupRingU::support_size).collect();
        assert_eq!(sizes, vec![3, 4, 4]);
        assert_eq!(g[0].coeffs[0], 1);
        assert_eq!(g[0].add(&g[1]).add(&g[2]), GroupRingU::full_sum(11));
    }

    #[test]
    fn fixed_space_rank_two_at_11_7() {
        let fixed = fixed_space_3c(11, 2, 7).unwrap();
        assert_eq!(fixed.len(), 2);
        assert!(fixed.iter().all(DivisorVector::is_degree_zero));
    }

    #[test]
    fn excluded_characteristics() {
        for ell in [2u64, 3, 5, 11] {
            assert_eq!(
                fixed_space_3c(11, 2, ell).unwrap_err(),
                Error::ExcludedCharacteristic { p: 11, ell }
            );
        }
        assert!(generation_test(11, 2, 3).is_err());
    }

    #[test]
    fn t_translates_are_independent() {
        let orbit = t_orbit(11, 13);
        assert_eq!(orbit[1], DivisorVector::point(11, 13, P1Point::affine(1))
            .sub(&DivisorVector::point(11, 13, P1Point::INFINITY)));
        assert_eq!(span_rank(&orbit), 11);
    }
}
