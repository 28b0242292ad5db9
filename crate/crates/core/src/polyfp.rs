//! Dense univariate polynomials over a prime field F_p (p < 2^63):
//! Euclidean algorithm, resultants, squarefree decomposition in
//! characteristic p, and the cube and separability tests built on it.

use std::fmt;

use num_bigint::BigInt;

use crate::arith::{add_mod, inv_mod, mul_mod, pow_mod, reduce_bigint, sub_mod};
use crate::error::{Error, Result};

/// Coefficients low to high, no trailing zeros. The zero polynomial has no
/// coefficients and degree `None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl fmt::Debug for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyFp(mod {}: {:?})", self.p, self.coeffs)
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}*t")?,
                (_, 1) => write!(f, "t^{k}")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl PolyFp {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = Self {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| (c as i128).rem_euclid(p as i128) as u64).collect())
    }

    pub fn from_bigints(p: u64, coeffs: &[BigInt]) -> Self {
        Self::new(p, coeffs.iter().map(|c| reduce_bigint(c, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    /// The monomial `t`.
    pub fn t(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    /// `t - a`.
    pub fn linear(p: u64, a: u64) -> Self {
        Self::new(p, vec![sub_mod(0, a % p, p), 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.p;
        Self::new(p, self.coeffs.iter().map(|&x| mul_mod(x, c, p)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading_coeff(), self.p).expect("p prime");
        self.scale(inv)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(p, (0..n).map(|k| add_mod(self.coeff(k), other.coeff(k), p)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(p, (0..n).map(|k| sub_mod(self.coeff(k), other.coeff(k), p)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % pp;
            }
        }
        Self::new(p, acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let inv_lc = inv_mod(divisor.leading_coeff(), p).expect("p prime");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], inv_lc, p);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = sub_mod(rem[k + j], mul_mod(c, d, p), p);
            }
        }
        rem.truncate(dd);
        (Self::new(p, quot), Self::new(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| mul_mod(c, k as u64 % p, p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, self.p), c, self.p))
    }

    /// For `f(t) = g(t^p)` returns `g`, using `c^(1/p) = c` in F_p.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        debug_assert!(self.coeffs.iter().enumerate().all(|(k, &c)| c == 0 || k % p == 0));
        Self::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }

    /// Resultant `Res(self, other)` via the Euclidean remainder sequence,
    /// tracking leading coefficients and signs.
    pub fn resultant(&self, other: &Self) -> u64 {
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            return 0;
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = 1u64;
        loop {
            let da = a.degree().unwrap() as u64;
            let db = b.degree().unwrap() as u64;
            if db == 0 {
                return mul_mod(acc, pow_mod(b.leading_coeff(), da, p), p);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return 0;
            }
            let dr = r.degree().unwrap() as u64;
            if (da * db) % 2 == 1 {
                acc = sub_mod(0, acc, p);
            }
            acc = mul_mod(acc, pow_mod(b.leading_coeff(), da - dr, p), p);
            a = b;
            b = r;
        }
    }
}

/// `f = unit * prod g_i^{e_i}`, `g_i` monic squarefree pairwise coprime,
/// `e_i` strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: u64,
    pub factors: Vec<(PolyFp, u64)>,
}

impl SquarefreeDecomposition {
    pub fn reassemble(&self, p: u64) -> PolyFp {
        self.factors
            .iter()
            .fold(PolyFp::constant(p, self.unit), |acc, (g, e)| acc.mul(&g.pow(*e)))
    }
}

pub fn squarefree_decomposition(f: &PolyFp) -> Result<SquarefreeDecomposition> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut factors = Vec::new();
    sqf_monic(&f.monic(), 1, &mut factors);
    factors.sort_by_key(|(_, e)| *e);
    Ok(SquarefreeDecomposition {
        unit: f.leading_coeff(),
        factors,
    })
}

fn sqf_monic(f: &PolyFp, multiplier: u64, out: &mut Vec<(PolyFp, u64)>) {
    if f.is_constant() {
        return;
    }
    let p = f.modulus();
    let one = PolyFp::one(p);
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c);
    let mut i = 1u64;
    // w collects the factors whose multiplicity is prime to p and at least i
    while w != one {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y);
        if fac != one {
            out.push((fac, i * multiplier));
        }
        w = y;
        c = c.exact_div(&w);
        i += 1;
    }
    // what is left has every multiplicity divisible by p
    if c != one {
        sqf_monic(&c.pth_root(), multiplier * p, out);
    }
}

/// Cube root of `a` in F_p when one exists.
pub fn cube_root_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if p % 3 == 2 {
        return Some(pow_mod(a, (2 * p - 1) / 3, p));
    }
    if p == 3 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 3, p) != 1 {
        return None;
    }
    // p - 1 = 3^s * t with 3 not dividing t
    let mut t = p - 1;
    let mut s = 0u32;
    while t % 3 == 0 {
        t /= 3;
        s += 1;
    }
    let k = inv_mod(3 % t.max(1), t.max(1)).unwrap_or(0);
    let x0 = pow_mod(a, k, p);
    let x0_cubed_inv = inv_mod(pow_mod(x0, 3, p), p).unwrap();
    let e = mul_mod(a, x0_cubed_inv, p);
    let non_cube = (2..p).find(|&c| pow_mod(c, (p - 1) / 3, p) != 1).unwrap();
    let g = pow_mod(non_cube, t, p);
    // discrete log of e to base g in the group of order 3^s, digit by digit
    let g_inv = inv_mod(g, p).unwrap();
    let zeta = pow_mod(g, 3u64.pow(s - 1), p);
    let mut m = 0u64;
    let mut residual = e;
    for i in 0..s {
        let probe = pow_mod(residual, 3u64.pow(s - 1 - i), p);
        let digit = if probe == 1 {
            0
        } else if probe == zeta {
            1
        } else {
            2
        };
        m += digit * 3u64.pow(i);
        residual = mul_mod(residual, pow_mod(g_inv, digit * 3u64.pow(i), p), p);
    }
    if m % 3 != 0 {
        return None;
    }
    let y = pow_mod(g, m / 3, p);
    let x = mul_mod(x0, y, p);
    debug_assert_eq!(pow_mod(x, 3, p), a);
    Some(x)
}

/// Whether `f` is a cube in F_p[t]; on success also returns `g` with
/// `g^3 = f`, checked by re-multiplication.
pub fn is_cube(f: &PolyFp) -> Result<(bool, Option<PolyFp>)> {
    let dec = squarefree_decomposition(f)?;
    let p = f.modulus();
    if dec.factors.iter().any(|(_, e)| e % 3 != 0) {
        return Ok((false, None));
    }
    let Some(lc_root) = cube_root_mod(dec.unit, p) else {
        return Ok((false, None));
    };
    let root = dec
        .factors
        .iter()
        .fold(PolyFp::constant(p, lc_root), |acc, (g, e)| acc.mul(&g.pow(e / 3)));
    if root.pow(3) != *f {
        return Err(Error::Internal(format!("cube root of {f} failed re-multiplication")));
    }
    Ok((true, Some(root)))
}

pub fn is_separable(f: &PolyFp) -> Result<bool> {
    match f.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Err(Error::ConstantPolynomial),
        Some(_) => Ok(f.gcd(&f.derivative()).is_constant()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructed_cube() {
        let f = PolyFp::linear(7, 1).pow(3);
        let dec = squarefree_decomposition(&f).unwrap();
        assert_eq!(dec.factors, vec![(PolyFp::linear(7, 1), 3)]);
        let (cube, root) = is_cube(&f).unwrap();
        assert!(cube);
        assert_eq!(root.unwrap(), PolyFp::linear(7, 1));
    }

    #[test]
    fn squarefree_product() {
        let f = PolyFp::t(5).mul(&PolyFp::linear(5, 1));
        let dec = squarefree_decomposition(&f).unwrap();
        assert_eq!(dec.factors, vec![(PolyFp::from_i64(5, &[0, -1, 1]), 1)]);
        assert!(!is_cube(&f).unwrap().0);
    }

    #[test]
    fn frobenius_power() {
        for p in [3u64, 5, 7, 11] {
            let a = 2 % p;
            let mut c = vec![0u64; p as usize + 1];
            c[0] = sub_mod(0, a, p);
            c[p as usize] = 1;
            let f = PolyFp::new(p, c);
            let dec = squarefree_decomposition(&f).unwrap();
            assert_eq!(dec.factors, vec![(PolyFp::linear(p, a), p)]);
            assert_eq!(is_cube(&f).unwrap().0, p == 3);
        }
    }

    #[test]
    fn separability_examples() {
        assert!(!is_separable(&PolyFp::from_i64(13, &[0, 0, 1])).unwrap());
        assert!(is_separable(&PolyFp::from_i64(7, &[1, 0, 1])).unwrap());
        assert_eq!(is_separable(&PolyFp::zero(7)), Err(Error::ZeroPolynomial));
        assert_eq!(is_separable(&PolyFp::one(7)), Err(Error::ConstantPolynomial));
        assert_eq!(is_cube(&PolyFp::zero(7)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn mixed_multiplicities_with_char_p() {
        // (t+1)^3 (t+2)^9 t over F_3: multiplicities 1, 3, 9
        let p = 3;
        let f = PolyFp::t(p)
            .mul(&PolyFp::linear(p, 2).pow(3))
            .mul(&PolyFp::linear(p, 1).pow(9));
        let dec = squarefree_decomposition(&f).unwrap();
        let exps: Vec<u64> = dec.factors.iter().map(|(_, e)| *e).collect();
        assert_eq!(exps, vec![1, 3, 9]);
        assert_eq!(dec.reassemble(p), f);
    }

    #[test]
    fn leading_coefficient_cube_classes() {
        // over F_7 the cubes are {1, 6}
        let f = PolyFp::linear(7, 3).pow(3);
        assert!(is_cube(&f.scale(6)).unwrap().0);
        assert!(!is_cube(&f.scale(2)).unwrap().0);
        for p in [7u64, 13, 19, 31, 37] {
            for a in 1..p {
                let expect = (1..p).any(|x| pow_mod(x, 3, p) == a);
                let got = cube_root_mod(a, p);
                assert_eq!(got.is_some(), expect, "p={p} a={a}");
                if let Some(x) = got {
                    assert_eq!(pow_mod(x, 3, p), a);
                }
            }
        }
    }

    #[test]
    fn resultant_small_cases() {
        // Res(t - a, g) = g(a) for monic linear first argument
        let g = PolyFp::from_i64(101, &[5, 3, 0, 1]);
        assert_eq!(PolyFp::linear(101, 7).resultant(&g), g.eval(7));
        // Res(t^2 - 1, t - 1) = 0
        let f = PolyFp::from_i64(101, &[-1, 0, 1]);
        assert_eq!(f.resultant(&PolyFp::linear(101, 1)), 0);
        // Res(t^2 + 1, 2t + 3) = 2^2 * ((-3/2)^2 + 1) = 9 + 4 = 13
        let h = PolyFp::from_i64(101, &[3, 2]);
        assert_eq!(PolyFp::from_i64(101, &[1, 0, 1]).resultant(&h), 13);
        assert_eq!(h.resultant(&PolyFp::from_i64(101, &[1, 0, 1])), 13);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(PolyFp::from_i64(7, &[1, 0, 3, 1]).to_string(), "t^3 + 3*t^2 + 1");
    }
}
