//! Binary fixed-point reals and complexes on top of `BigInt`: a value is
//! `mantissa / 2^prec`. Enough transcendental functions (pi, exp, sin, cos,
//! sqrt) to evaluate q-expansions at CM points.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Guard bits used inside transcendental functions.
const GUARD: u32 = 48;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        Self { mant: BigInt::zero(), prec }
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        Self { mant: n.into() << prec, prec }
    }

    /// `num / den`, truncated.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, prec: u32) -> Self {
        let num: BigInt = num.into() << prec;
        Self { mant: num.div_floor(&den.into()), prec }
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        let scaled = x * 2f64.powi(52);
        let m = BigInt::from(scaled as i64);
        Self::from_raw(m, 52).with_prec(prec)
    }

    pub fn from_raw(mant: BigInt, prec: u32) -> Self {
        Self { mant, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let mant = match prec.cmp(&self.prec) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant << (prec - self.prec),
            Ordering::Less => &self.mant >> (self.prec - prec),
        };
        Self { mant, prec }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn abs(&self) -> Self {
        Self { mant: self.mant.abs(), prec: self.prec }
    }

    pub fn neg(&self) -> Self {
        Self { mant: -&self.mant, prec: self.prec }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        Self { mant: &self.mant + &o.mant, prec: self.prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        Self { mant: &self.mant - &o.mant, prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        Self { mant: (&self.mant * &o.mant) >> self.prec, prec: self.prec }
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Self {
        Self { mant: &self.mant * k.into(), prec: self.prec }
    }

    pub fn div_int(&self, k: impl Into<BigInt>) -> Self {
        Self { mant: self.mant.div_floor(&k.into()), prec: self.prec }
    }

    pub fn div(&self, o: &Self) -> Self {
        debug_assert_eq!(self.prec, o.prec);
        assert!(!o.is_zero(), "division by zero");
        Self { mant: (&self.mant << self.prec).div_floor(&o.mant), prec: self.prec }
    }

    pub fn shl(&self, k: u32) -> Self {
        Self { mant: &self.mant << k, prec: self.prec }
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative");
        let shifted = (&self.mant << self.prec).to_biguint().unwrap();
        Self { mant: BigInt::from(shifted.sqrt()), prec: self.prec }
    }

    /// Nearest integer and `|self - nearest|`.
    pub fn round(&self) -> (BigInt, BigFloat) {
        let half = BigInt::one() << (self.prec.max(1) - 1);
        let n = if self.prec == 0 {
            self.mant.clone()
        } else {
            (&self.mant + &half) >> self.prec
        };
        let residual = self.sub(&BigFloat::from_int(n.clone(), self.prec)).abs();
        (n, residual)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits();
        if bits <= 1000 {
            return self.mant.to_f64().unwrap_or(f64::NAN) / 2f64.powi(self.prec as i32);
        }
        let drop = bits - 60;
        let top = (&self.mant >> drop).to_f64().unwrap();
        top * 2f64.powf(drop as f64 - self.prec as f64)
    }

    /// `log2 |self|` rounded down; `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 - self.prec as i64)
        }
    }

    pub fn cmp_abs(&self, o: &Self) -> Ordering {
        self.mant.abs().cmp(&o.mant.abs())
    }
}

fn atan_inv(x: u64, prec: u32) -> BigInt {
    // atan(1/x) = sum (-1)^k / ((2k+1) x^(2k+1)), fixed point at `prec`
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << prec) / &x;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

pub fn pi(prec: u32) -> BigFloat {
    let wp = prec + GUARD;
    let m = atan_inv(5, wp) * 16 - atan_inv(239, wp) * 4;
    BigFloat::from_raw(m, wp).with_prec(prec)
}

pub fn ln2(prec: u32) -> BigFloat {
    // ln 2 = sum_{k>=1} 1 / (k 2^k)
    let wp = prec + GUARD;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    loop {
        let term = (BigInt::one() << wp) >> k as u32;
        let term = term / k;
        if term.is_zero() {
            break;
        }
        sum += term;
        k += 1;
    }
    BigFloat::from_raw(sum, wp).with_prec(prec)
}

pub fn exp(x: &BigFloat) -> BigFloat {
    let prec = x.prec();
    let wp = prec + GUARD;
    let xw = x.with_prec(wp);
    let l2 = ln2(wp);
    // x = k ln 2 + r with |r| <= ln2 / 2
    let k = xw.div(&l2).round().0;
    let r = xw.sub(&l2.mul_int(k.clone()));
    const HALVINGS: u32 = 12;
    let r = BigFloat::from_raw(r.mant >> HALVINGS, wp);
    let one = BigFloat::from_int(1, wp);
    let mut term = one.clone();
    let mut sum = one;
    let mut n = 1u64;
    loop {
        term = term.mul(&r).div_int(n);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
        n += 1;
    }
    for _ in 0..HALVINGS {
        sum = sum.mul(&sum);
    }
    let k = k.to_i64().expect("exponent in range");
    let mant = if k >= 0 {
        sum.mant << k as u32
    } else {
        sum.mant >> (-k) as u32
    };
    BigFloat::from_raw(mant, wp).with_prec(prec)
}

/// `(sin x, cos x)`.
pub fn sin_cos(x: &BigFloat) -> (BigFloat, BigFloat) {
    let prec = x.prec();
    let wp = prec + GUARD + x.log2_floor().unwrap_or(0).max(0) as u32;
    let xw = x.with_prec(wp);
    let two_pi = pi(wp).shl(1);
    let turns = xw.div(&two_pi).round().0;
    let r = xw.sub(&two_pi.mul_int(turns));
    const HALVINGS: u32 = 8;
    let r = BigFloat::from_raw(r.mant >> HALVINGS, wp);
    let r2 = r.mul(&r);
    let one = BigFloat::from_int(1, wp);
    // Taylor series for sin and cos at the reduced argument
    let (mut s, mut c) = (r.clone(), one.clone());
    let (mut ts, mut tc) = (r.clone(), one);
    let mut n = 1u64;
    loop {
        ts = ts.mul(&r2).div_int((2 * n) * (2 * n + 1)).neg();
        tc = tc.mul(&r2).div_int((2 * n - 1) * (2 * n)).neg();
        if ts.is_zero() && tc.is_zero() {
            break;
        }
        s = s.add(&ts);
        c = c.add(&tc);
        n += 1;
    }
    for _ in 0..HALVINGS {
        let s2 = s.mul(&c).shl(1);
        let c2 = c.mul(&c).sub(&s.mul(&s));
        s = s2;
        c = c2;
    }
    (s.with_prec(prec), c.with_prec(prec))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        debug_assert_eq!(re.prec(), im.prec());
        Self { re, im }
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        Self::new(BigFloat::from_int(n, prec), BigFloat::zero(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn add_int(&self, n: impl Into<BigInt>) -> Self {
        Self::new(self.re.add(&BigFloat::from_int(n, self.prec())), self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn div(&self, o: &Self) -> Self {
        let den = o.norm_sqr();
        let num = self.mul(&Self::new(o.re.clone(), o.im.neg()));
        Self::new(num.re.div(&den), num.im.div(&den))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::from_int(1, self.prec());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// `e^{2 pi i z}`.
    pub fn exp_2pi_i(&self) -> Self {
        let prec = self.prec();
        let two_pi = pi(prec + GUARD).shl(1);
        let radius = exp(&self.im.with_prec(prec + GUARD).mul(&two_pi).neg());
        let (s, c) = sin_cos(&self.re.with_prec(prec + GUARD).mul(&two_pi));
        Self::new(radius.mul(&c), radius.mul(&s)).with_prec(prec)
    }
}
