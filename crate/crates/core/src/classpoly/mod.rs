//! Hilbert class polynomials `H_{-D}` by the complex-analytic method:
//! enumerate the primitive reduced forms of discriminant `-D`, evaluate
//! `j` at each CM point to high precision, expand the product and round.

pub mod bigfloat;
mod cache;

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyfp::PolyFp;
use crate::serde_big;
use bigfloat::{BigComplex, BigFloat};

pub use cache::ClassPolyCache;

/// Primitive reduced positive definite form `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a >= 1 && b.abs() <= a && a <= c && !(b < 0 && (b.abs() == a || a == c))
    }
}

pub fn is_valid_discriminant(d: u64) -> bool {
    d > 0 && matches!(d % 4, 0 | 3)
}

/// All primitive reduced forms of discriminant `-d`, ordered by `a`, then
/// `|b|`, positive `b` first.
pub fn reduced_forms(d: u64) -> Result<Vec<QuadForm>> {
    if !is_valid_discriminant(d) {
        return Err(Error::InvalidDiscriminant(d));
    }
    let d = d as i64;
    let mut forms = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= d {
        for abs_b in (d & 1..=a).step_by(2) {
            let num = abs_b * abs_b + d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let signs: &[i64] = if abs_b == 0 { &[1] } else { &[1, -1] };
            for &sign in signs {
                let form = QuadForm { a, b: sign * abs_b, c };
                if form.is_reduced() && form.is_primitive() {
                    forms.push(form);
                }
            }
        }
        a += 1;
    }
    Ok(forms)
}

pub fn class_number(d: u64) -> Result<usize> {
    reduced_forms(d).map(|f| f.len())
}

/// Monic integer polynomial, coefficients low to high.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPoly {
    pub d: u64,
    pub h: usize,
    #[serde(with = "serde_big::bigint_vec")]
    pub coeffs: Vec<BigInt>,
}

impl ClassPoly {
    pub fn reduce_mod(&self, p: u64) -> PolyFp {
        PolyFp::from_bigints(p, &self.coeffs)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }
}

/// `bits = ceil(pi sqrt(D) / ln 2 * sum 1/a) + 64 + 10 h`.
pub fn precision_bits(d: u64, forms: &[QuadForm]) -> u64 {
    let height: f64 = forms.iter().map(|f| 1.0 / f.a as f64).sum();
    let dominant = std::f64::consts::PI * (d as f64).sqrt() / std::f64::consts::LN_2 * height;
    dominant.ceil() as u64 + 64 + 10 * forms.len() as u64
}

/// `log2 |1/q|` for `q = e^{2 pi i tau}`.
fn q_height_bits(im_tau: f64) -> f64 {
    2.0 * std::f64::consts::PI * im_tau / std::f64::consts::LN_2
}

/// Number of q-expansion terms so that `300 (N+1)^4 |q|^N < 2^{-target-8}`.
pub fn series_length(im_tau: f64, target_bits: u64) -> usize {
    let h = q_height_bits(im_tau);
    let mut n = 1usize;
    while 300f64.log2() + 4.0 * ((n + 1) as f64).log2() - n as f64 * h > -(target_bits as f64) - 8.0 {
        n += 1;
    }
    n
}

fn sigma3_table(n: usize) -> Vec<BigInt> {
    let mut sigma = vec![0u64; n + 1];
    for d in 1..=n {
        let cube = (d as u64).pow(3);
        let mut m = d;
        while m <= n {
            sigma[m] += cube;
            m += d;
        }
    }
    sigma.into_iter().map(BigInt::from).collect()
}

/// `j(tau) = E_4(q)^3 / Delta(q)`, with `E_4 = 1 + 240 sum sigma_3(n) q^n`
/// and `Delta = q prod (1 - q^n)^24` (the product via Euler's pentagonal
/// series). The result carries `bits` fractional bits.
pub fn eval_j(tau: &BigComplex, bits: u64) -> Result<BigComplex> {
    let im = tau.im.to_f64();
    // Im tau >= sqrt(3)/2 on the reduced-form range
    let sqrt3_over_2 = BigFloat::from_int(3, tau.prec()).sqrt().div_int(2);
    let tolerance = BigFloat::from_raw(BigInt::one() << 8u32, tau.prec());
    if tau.im.add(&tolerance).sub(&sqrt3_over_2).is_negative() {
        return Err(Error::TauTooLow);
    }
    let height = q_height_bits(im).ceil() as u64;
    let work = (bits + 2 * height + 64) as u32;
    let tau_w = tau.with_prec(work.max(tau.prec()));
    let work = tau_w.prec();
    let q = tau_w.exp_2pi_i();
    let n = series_length(im, work as u64);

    let sigma = sigma3_table(n);
    let mut e4 = BigComplex::from_int(0, work);
    for k in (1..=n).rev() {
        e4 = e4.add_int(&sigma[k] * 240u32).mul(&q);
    }
    let e4 = e4.add_int(1);

    // prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}, k over all integers
    let mut eta = BigComplex::from_int(1, work);
    let mut k = 1u64;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        if e1 as usize > n {
            break;
        }
        let e2 = k * (3 * k + 1) / 2;
        let mut term = q.pow(e1);
        if e2 as usize <= n {
            term = term.add(&q.pow(e2));
        }
        eta = if k % 2 == 1 { eta.sub(&term) } else { eta.add(&term) };
        k += 1;
    }
    let e8 = eta.square().square().square();
    let e24 = e8.square().mul(&e8);
    let delta = q.mul(&e24);
    if delta.norm_sqr().is_zero() {
        return Err(Error::InsufficientPrecision {
            d: 0,
            bits,
            residual: "Delta underflow".into(),
        });
    }
    let j = e4.square().mul(&e4).div(&delta);
    Ok(j.with_prec(bits as u32))
}

/// CM point `(-b + i sqrt D) / 2a` at `prec` fractional bits.
pub fn cm_point(form: &QuadForm, d: u64, prec: u32) -> BigComplex {
    let re = BigFloat::from_ratio(-form.b, 2 * form.a, prec);
    let im = BigFloat::from_int(d, prec).sqrt().div_int(2 * form.a);
    BigComplex::new(re, im)
}

/// Class polynomial plus the worst rounding residuals seen while building it.
#[derive(Debug, Clone)]
pub struct ClassPolyEvaluation {
    pub poly: ClassPoly,
    pub bits: u64,
    /// `log2` of the largest `|Re c - round(Re c)|` over coefficients.
    pub max_real_residual_log2: Option<i64>,
    /// `log2` of the largest `|Im c|` over coefficients.
    pub max_imag_log2: Option<i64>,
}

pub fn hilbert_class_poly_at(d: u64, bits: u64) -> Result<ClassPolyEvaluation> {
    let forms = reduced_forms(d)?;
    // coefficient sizes eat into the fractional bits; carry half again as many
    let internal = bits + bits / 2 + 32;
    let prec = internal as u32;
    let roots: Vec<BigComplex> = forms
        .par_iter()
        .map(|f| {
            let im = (d as f64).sqrt() / (2 * f.a) as f64;
            let tau = cm_point(f, d, (internal + 2 * q_height_bits(im).ceil() as u64 + 80) as u32);
            eval_j(&tau, internal)
        })
        .collect::<Result<_>>()?;

    // prod (t - j_i), coefficients low to high
    let mut poly = vec![BigComplex::from_int(1, prec)];
    for root in &roots {
        let mut next = vec![BigComplex::from_int(0, prec); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(root));
        }
        poly = next;
    }

    let quarter = BigFloat::from_ratio(1, 4, prec);
    let mut coeffs = Vec::with_capacity(poly.len());
    let mut worst_re = BigFloat::zero(prec);
    let mut worst_im = BigFloat::zero(prec);
    for c in &poly {
        let (n, residual) = c.re.round();
        if residual.cmp_abs(&worst_re).is_gt() {
            worst_re = residual;
        }
        if c.im.cmp_abs(&worst_im).is_gt() {
            worst_im = c.im.abs();
        }
        coeffs.push(n);
    }
    if !worst_re.cmp_abs(&quarter).is_lt() || !worst_im.cmp_abs(&quarter).is_lt() {
        return Err(Error::InsufficientPrecision {
            d,
            bits,
            residual: format!("{:e}", worst_re.to_f64().max(worst_im.to_f64())),
        });
    }
    Ok(ClassPolyEvaluation {
        poly: ClassPoly {
            d,
            h: forms.len(),
            coeffs,
        },
        bits,
        max_real_residual_log2: worst_re.log2_floor(),
        max_imag_log2: worst_im.log2_floor(),
    })
}

fn memo() -> &'static RwLock<HashMap<u64, ClassPoly>> {
    static MEMO: OnceLock<RwLock<HashMap<u64, ClassPoly>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `H_{-d}` at the heuristic precision, doubling it on rounding failure.
/// Results are memoised in-process.
pub fn hilbert_class_poly(d: u64) -> Result<ClassPoly> {
    if let Some(hit) = memo().read().expect("memo poisoned").get(&d) {
        return Ok(hit.clone());
    }
    let forms = reduced_forms(d)?;
    let mut bits = precision_bits(d, &forms);
    let mut attempts = 0;
    let poly = loop {
        match hilbert_class_poly_at(d, bits) {
            Ok(eval) => break eval.poly,
            Err(Error::InsufficientPrecision { .. }) if attempts < 3 => {
                attempts += 1;
                bits *= 2;
            }
            Err(e) => return Err(e),
        }
    };
    memo().write().expect("memo poisoned").insert(d, poly.clone());
    Ok(poly)
}

/// Like [`hilbert_class_poly`], consulting and extending a file cache.
pub fn hilbert_class_poly_cached(d: u64, cache: Option<&ClassPolyCache>) -> Result<ClassPoly> {
    if let Some(cache) = cache {
        if let Some(hit) = cache.get(d) {
            return Ok(hit);
        }
        let poly = hilbert_class_poly(d)?;
        cache.insert(&poly)?;
        return Ok(poly);
    }
    hilbert_class_poly(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn forms(d: u64) -> Vec<(i64, i64, i64)> {
        reduced_forms(d).unwrap().iter().map(|f| (f.a, f.b, f.c)).collect()
    }

    #[test]
    fn small_discriminants() {
        assert_eq!(forms(3), vec![(1, 1, 1)]);
        assert_eq!(forms(4), vec![(1, 0, 1)]);
        assert_eq!(forms(108), vec![(1, 0, 27), (4, 2, 7), (4, -2, 7)]);
        assert_eq!(forms(23), vec![(1, 1, 6), (2, 1, 3), (2, -1, 3)]);
        assert_eq!(class_number(20).unwrap(), 2);
        assert_eq!(reduced_forms(5), Err(Error::InvalidDiscriminant(5)));
        assert_eq!(reduced_forms(0), Err(Error::InvalidDiscriminant(0)));
    }

    #[test]
    fn j_at_elliptic_points() {
        let i = cm_point(&QuadForm { a: 1, b: 0, c: 1 }, 4, 200);
        let j = eval_j(&i, 100).unwrap();
        assert!((j.re.to_f64() - 1728.0).abs() < 1e-20);
        assert!(j.im.to_f64().abs() < 1e-20);
        let rho = cm_point(&QuadForm { a: 1, b: 1, c: 1 }, 3, 200);
        let j = eval_j(&rho, 100).unwrap();
        assert!(j.re.to_f64().abs() < 1e-20 && j.im.to_f64().abs() < 1e-20);
    }

    #[test]
    fn low_tau_rejected() {
        let tau = BigComplex::new(BigFloat::zero(64), BigFloat::from_ratio(1, 2, 64));
        assert_eq!(eval_j(&tau, 64).unwrap_err(), Error::TauTooLow);
    }

    #[test]
    fn degree_one_polynomials() {
        let h3 = hilbert_class_poly(3).unwrap();
        assert_eq!(h3.coeffs, vec![BigInt::zero(), BigInt::one()]);
        let h4 = hilbert_class_poly(4).unwrap();
        assert_eq!(h4.coeffs, vec![BigInt::from(-1728), BigInt::one()]);
        let h7 = hilbert_class_poly(7).unwrap();
        assert_eq!(h7.coeffs, vec![BigInt::from(3375), BigInt::one()]);
    }
}
