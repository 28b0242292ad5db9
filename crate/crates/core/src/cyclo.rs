//! Arithmetic in Z[zeta_p], the cubic-coset character sums `u_{z,t}`, and
//! detection of exceptional primes.
//!
//! A prime `l` is exceptional for `p` when it divides the norm of the ideal
//! generated by the three sums. Two independent routes are provided:
//!
//! * [`exceptional_primes`]: multi-modular resultants give the element norms,
//!   their gcd bounds the candidates, and each candidate is confirmed by a
//!   common-factor test of `Phi_p` and the three sums in F_l[x];
//! * [`ideal_norm_lattice`]: the ideal norm as a lattice index, from a
//!   Hermite normal form of the Z-span of `u_t * zeta^k`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    crt_prime, factor, is_family_prime, reduce_bigint, smallest_nonresidue, CrtAccumulator,
    RHO_ITERATION_CAP, TRIAL_DIVISION_LIMIT,
};
use crate::error::{Error, Result};
use crate::ff::{CubicCoset, Fp2Field};
use crate::lattice::{bareiss_det, index_with_modulus};
use crate::polyfp::PolyFp;
use crate::serde_big;

/// `sum c_k zeta_p^k`, `0 <= k < p - 1`, canonical modulo `Phi_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl CycloInt {
    pub fn zero(p: u64) -> Self {
        Self {
            p,
            coeffs: vec![BigInt::zero(); p as usize - 1],
        }
    }

    pub fn one(p: u64) -> Self {
        Self::zeta_pow(p, 0)
    }

    pub fn zeta_pow(p: u64, k: u64) -> Self {
        Self::from_exponents(p, &[k % p])
    }

    /// `sum_i zeta^{e_i}` for a multiset of exponents in `[0, p)`.
    pub fn from_exponents(p: u64, exponents: &[u64]) -> Self {
        let mut full = vec![0i64; p as usize];
        for &e in exponents {
            full[(e % p) as usize] += 1;
        }
        Self::from_full(p, full.into_iter().map(BigInt::from).collect())
    }

    /// Reduce a length-`p` coefficient vector (a polynomial mod `x^p - 1`)
    /// by `zeta^{p-1} = -(1 + ... + zeta^{p-2})`.
    fn from_full(p: u64, mut full: Vec<BigInt>) -> Self {
        debug_assert_eq!(full.len(), p as usize);
        let top = full.pop().unwrap();
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        Self { p, coeffs: full }
    }

    pub fn from_coeffs(p: u64, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), p as usize - 1, "CycloInt needs p - 1 coefficients");
        Self { p, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        Self {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        Self {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                full[(i + j) % p] += a * b;
            }
        }
        Self::from_full(self.p, full)
    }

    /// Multiplication by `zeta`.
    pub fn mul_zeta(&self) -> Self {
        let mut full = Vec::with_capacity(self.p as usize);
        full.push(BigInt::zero());
        full.extend(self.coeffs.iter().cloned());
        Self::from_full(self.p, full)
    }

    pub fn to_poly_mod(&self, q: u64) -> PolyFp {
        PolyFp::new(q, self.coeffs.iter().map(|c| reduce_bigint(c, q)).collect())
    }

    /// `max_sigma |sigma(u)|` is at most the smallest L1 norm over the
    /// representatives `c + k (1 + zeta + ... + zeta^{p-1})`; returns that
    /// L1 norm.
    pub fn embedding_bound(&self) -> BigUint {
        let mut full: Vec<BigInt> = self.coeffs.clone();
        full.push(BigInt::zero());
        let mut sorted = full.clone();
        sorted.sort();
        let median = sorted[sorted.len() / 2].clone();
        full.iter()
            .map(|c| (c - &median).abs().to_biguint().unwrap())
            .sum()
    }
}

/// The three sums `u_t = sum_{b : 1 + b sqrt z in t} zeta^b`.
#[derive(Debug, Clone)]
pub struct UElements {
    pub p: u64,
    pub z: u64,
    /// Exponent sets `I_t`, indexed by [`CubicCoset::index`].
    pub exponents: [Vec<u64>; 3],
    pub elements: [CycloInt; 3],
}

impl UElements {
    pub fn get(&self, coset: CubicCoset) -> &CycloInt {
        &self.elements[coset.index()]
    }
}

pub fn check_family_prime(p: u64) -> Result<()> {
    if is_family_prime(p) {
        Ok(())
    } else {
        Err(Error::OutsideFamily(p))
    }
}

/// Partition of F_p by the cubic class of `1 + b sqrt z`.
pub fn coset_partition(p: u64, z: u64) -> Result<[Vec<u64>; 3]> {
    let field = Fp2Field::new(p, z)?;
    let mut parts: [Vec<u64>; 3] = Default::default();
    for (b, class) in field.classify_line()?.into_iter().enumerate() {
        parts[class.index()].push(b as u64);
    }
    Ok(parts)
}

pub fn u_elements(p: u64, z: u64) -> Result<UElements> {
    check_family_prime(p)?;
    let exponents = coset_partition(p, z)?;
    let elements = [0, 1, 2].map(|i| CycloInt::from_exponents(p, &exponents[i]));
    Ok(UElements {
        p,
        z,
        exponents,
        elements,
    })
}

/// `|N(u)| = |Res(Phi_p, U)|` by Chinese remaindering over word-size primes.
pub fn norm_via_resultant(u: &CycloInt) -> BigUint {
    let p = u.p();
    if u.is_zero() {
        return BigUint::zero();
    }
    // |N(u)| <= bound^(p-1); the CRT modulus has to exceed twice that
    let target: BigUint = u.embedding_bound().pow((p - 1) as u32) * 2u32;
    let mut count = 0usize;
    let mut modulus = BigUint::one();
    while modulus <= target {
        modulus *= crt_prime(count);
        count += 1;
    }
    let residues: Vec<(u64, u64)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let q = crt_prime(i);
            let phi = PolyFp::new(q, vec![1; p as usize]);
            (phi.resultant(&u.to_poly_mod(q)), q)
        })
        .collect();
    let mut acc = CrtAccumulator::default();
    for (r, q) in residues {
        acc.push(r, q);
    }
    acc.symmetric().abs().to_biguint().unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub p: u64,
    pub z: u64,
    /// `I_ONE`, `I_J`, `I_JP`.
    pub exponents: [Vec<u64>; 3],
    #[serde(with = "serde_big::biguint")]
    pub norm_gcd: BigUint,
    /// Every prime found in `norm_gcd`, with its confirmation verdict.
    pub candidates: Vec<CandidatePrime>,
    #[serde(with = "serde_big::biguint_vec")]
    pub confirmed: Vec<BigUint>,
    /// Unfactored part of `norm_gcd`; 1 means `confirmed` is complete.
    #[serde(with = "serde_big::biguint")]
    pub cofactor: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidatePrime {
    #[serde(with = "serde_big::biguint")]
    pub prime: BigUint,
    pub exceptional: bool,
}

impl ExceptionalReport {
    pub fn is_empty_and_complete(&self) -> bool {
        self.confirmed.is_empty() && self.cofactor.is_one()
    }
}

pub fn exceptional_primes(p: u64) -> Result<ExceptionalReport> {
    check_family_prime(p)?;
    exceptional_primes_with(p, smallest_nonresidue(p))
}

pub fn exceptional_primes_with(p: u64, z: u64) -> Result<ExceptionalReport> {
    let us = u_elements(p, z)?;
    let norms: Vec<BigUint> = us.elements.par_iter().map(norm_via_resultant).collect();
    let g = norms.iter().fold(BigUint::zero(), |acc, n| acc.gcd(n));
    if g.is_zero() {
        return Err(Error::Internal(format!("all u-element norms vanish for p = {p}")));
    }
    let fact = factor(&g, TRIAL_DIVISION_LIMIT, RHO_ITERATION_CAP);
    let candidates: Vec<CandidatePrime> = fact
        .primes
        .iter()
        .map(|(ell, _)| CandidatePrime {
            prime: ell.clone(),
            exceptional: shares_factor_with_phi(&us, ell),
        })
        .collect();
    let confirmed = candidates
        .iter()
        .filter(|c| c.exceptional)
        .map(|c| c.prime.clone())
        .collect();
    Ok(ExceptionalReport {
        p,
        z,
        exponents: us.exponents.clone(),
        norm_gcd: g,
        candidates,
        confirmed,
        cofactor: fact.cofactor,
    })
}

/// Positive-degree `gcd(Phi_p, U_ONE, U_J, U_JP)` in F_l[x].
pub fn shares_factor_with_phi(us: &UElements, ell: &BigUint) -> bool {
    common_factor_degree(us, ell) > 0
}

pub fn common_factor_degree(us: &UElements, ell: &BigUint) -> usize {
    match ell.to_u64().filter(|&l| l < (1 << 63)) {
        Some(l) => {
            let mut g = PolyFp::new(l, vec![1; us.p as usize]);
            for u in &us.elements {
                g = g.gcd(&u.to_poly_mod(l));
            }
            g.degree().unwrap_or(0)
        }
        None => big::common_factor_degree(us, ell),
    }
}

/// Polynomial gcd over F_l for primes too large for a machine word.
mod big {
    use super::*;

    fn trim(v: &mut Vec<BigUint>) {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
    }

    fn rem(a: &[BigUint], b: &[BigUint], l: &BigUint) -> Vec<BigUint> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let inv = b[db].modpow(&(l - 2u32), l);
        while r.len() > db {
            let top = r.len() - 1;
            let c = (&r[top] * &inv) % l;
            for (j, bj) in b.iter().enumerate() {
                let idx = top - db + j;
                let sub = (&c * bj) % l;
                r[idx] = (&r[idx] + l - sub) % l;
            }
            trim(&mut r);
        }
        r
    }

    pub(super) fn common_factor_degree(us: &UElements, l: &BigUint) -> usize {
        let reduce = |u: &CycloInt| {
            let lb = BigInt::from(l.clone());
            let mut v: Vec<BigUint> = u
                .coeffs()
                .iter()
                .map(|c| c.mod_floor(&lb).to_biguint().unwrap())
                .collect();
            trim(&mut v);
            v
        };
        let mut g: Vec<BigUint> = vec![BigUint::one(); us.p as usize];
        for u in &us.elements {
            let mut b = reduce(u);
            let mut a = g;
            while !b.is_empty() {
                let r = rem(&a, &b, l);
                a = b;
                b = r;
            }
            g = a;
        }
        g.len().saturating_sub(1)
    }
}

/// Norm of the ideal generated by the three sums, as the index in Z^{p-1}
/// of the Z-span of `{u_t * zeta^k}`. Oracle scale only (`p <= 200`).
pub fn ideal_norm_lattice(p: u64, z: u64) -> Result<BigUint> {
    if p > 200 {
        return Err(Error::Unsupported(format!("lattice oracle limited to p <= 200, got {p}")));
    }
    let us = u_elements(p, z)?;
    let n = p as usize - 1;
    let mut generators = Vec::with_capacity(3 * n);
    let mut multiple = BigUint::zero();
    for u in &us.elements {
        let mut rows = Vec::with_capacity(n);
        let mut cur = u.clone();
        for _ in 0..n {
            rows.push(cur.coeffs().to_vec());
            cur = cur.mul_zeta();
        }
        if multiple.is_zero() {
            // the index of the principal ideal (u) is a multiple of the answer
            multiple = bareiss_det(rows.clone()).abs().to_biguint().unwrap();
        }
        generators.extend(rows);
    }
    if multiple.is_zero() {
        return Err(Error::Internal(format!(
            "lattice spanned by u-elements is not full rank for p = {p}"
        )));
    }
    Ok(index_with_modulus(&generators, n, &multiple))
}
