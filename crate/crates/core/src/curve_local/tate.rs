//! Tate's algorithm at a single prime, on integral Weierstrass models.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::valuation_big;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I0 => write!(f, "I0"),
            Kodaira::In(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::I0Star => write!(f, "I0*"),
            Kodaira::InStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

impl std::str::FromStr for Kodaira {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unsupported(format!("Kodaira symbol {s:?}"));
        Ok(match s {
            "I0" => Kodaira::I0,
            "II" => Kodaira::II,
            "III" => Kodaira::III,
            "IV" => Kodaira::IV,
            "I0*" => Kodaira::I0Star,
            "IV*" => Kodaira::IVStar,
            "III*" => Kodaira::IIIStar,
            "II*" => Kodaira::IIStar,
            _ => {
                let body = s.strip_prefix('I').ok_or_else(bad)?;
                match body.strip_suffix('*') {
                    Some(k) => Kodaira::InStar(k.parse().map_err(|_| bad())?),
                    None => Kodaira::In(body.parse().map_err(|_| bad())?),
                }
            }
        })
    }
}

impl Serialize for Kodaira {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Kodaira {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TateResult {
    pub ell: u64,
    pub exponent: u32,
    pub kodaira: Kodaira,
    /// Valuation of the minimal discriminant.
    pub disc_valuation: u32,
}

/// `[a1, a2, a3, a4, a6]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weierstrass {
    pub a: [BigInt; 5],
}

impl Weierstrass {
    pub fn new(a: [i128; 5]) -> Self {
        Self {
            a: a.map(BigInt::from),
        }
    }

    pub fn short(a4: i128, a6: i128) -> Self {
        Self::new([0, 0, 0, a4, a6])
    }

    /// `(b2, b4, b6, b8)`.
    pub fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = a1 * a3 + 2 * a4;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// Substitution `x = x' + r`, `y = y' + s x' + t`.
    pub fn translate(&self, r: &BigInt, s: &BigInt, t: &BigInt) -> Self {
        let [a1, a2, a3, a4, a6] = &self.a;
        let n1 = a1 + 2 * s;
        let n2 = a2 - s * a1 + 3 * r - s * s;
        let n3 = a3 + r * a1 + 2 * t;
        let n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        Self {
            a: [n1, n2, n3, n4, n6],
        }
    }

    /// Divide `a_i` by `u^i`; caller guarantees divisibility.
    fn scale_down(&self, u: &BigInt) -> Self {
        let pows = [1u32, 2, 3, 4, 6];
        let mut a = self.a.clone();
        for (ai, &k) in a.iter_mut().zip(&pows) {
            *ai = &*ai / u.pow(k);
        }
        Self { a }
    }
}

fn divides(d: &BigInt, x: &BigInt) -> bool {
    (x % d).is_zero()
}

fn residue(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    u64::try_from(r).expect("residue fits")
}

fn find_singular_point(e: &Weierstrass, p: u64) -> Option<(u64, u64)> {
    let [a1, a2, a3, a4, a6] = e.a.each_ref().map(|a| residue(a, p) as i128);
    let p = p as i128;
    for x in 0..p {
        for y in 0..p {
            let f = y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6;
            let fx = a1 * y - 3 * x * x - 2 * a2 * x - a4;
            let fy = 2 * y + a1 * x + a3;
            if f.rem_euclid(p) == 0 && fx.rem_euclid(p) == 0 && fy.rem_euclid(p) == 0 {
                return Some((x as u64, y as u64));
            }
        }
    }
    None
}

/// Runs Tate's algorithm at `p` on an integral model.
pub fn tate(model: &Weierstrass, p: u64) -> Result<TateResult> {
    let pb = BigInt::from(p);
    let pw = |k: u32| pb.pow(k);
    let zero = BigInt::zero();
    // a_i / p^k mod p
    let coef = |e: &Weierstrass, i: usize, k: u32| residue(&(&e.a[i] / pb.pow(k)), p) as i128;
    let mut e = model.clone();
    loop {
        let disc = e.discriminant();
        if disc.is_zero() {
            return Err(Error::Unsupported("singular Weierstrass model".into()));
        }
        let n = valuation_big(&disc, p);
        let done = |exponent, kodaira| {
            Ok(TateResult {
                ell: p,
                exponent,
                kodaira,
                disc_valuation: n,
            })
        };
        if n == 0 {
            return done(0, Kodaira::I0);
        }
        // step 2: move the singular point to (0, 0)
        let (x0, y0) = find_singular_point(&e, p)
            .ok_or_else(|| Error::Internal(format!("no singular point mod {p}")))?;
        e = e.translate(&BigInt::from(x0), &zero, &BigInt::from(y0));
        let [b2, _, b6, b8] = e.b_invariants();
        if !divides(&pb, &b2) {
            return done(1, Kodaira::In(n));
        }
        // steps 3-5
        if !divides(&pw(2), &e.a[4]) {
            return done(n, Kodaira::II);
        }
        if !divides(&pw(3), &b8) {
            return done(n - 1, Kodaira::III);
        }
        if !divides(&pw(3), &b6) {
            return done(n - 2, Kodaira::IV);
        }
        // step 6: arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
        let mut arranged = None;
        'search: for s in 0..p {
            for t in 0..p * p * p {
                let cand = e.translate(&zero, &BigInt::from(s), &BigInt::from(t));
                let [a1, a2, a3, a4, a6] = &cand.a;
                if divides(&pb, a1)
                    && divides(&pb, a2)
                    && divides(&pw(2), a3)
                    && divides(&pw(2), a4)
                    && divides(&pw(3), a6)
                {
                    arranged = Some(cand);
                    break 'search;
                }
            }
        }
        e = arranged.ok_or_else(|| Error::Internal(format!("step 6 change of variables at {p}")))?;
        let (a21, a42, a63) = (coef(&e, 1, 1), coef(&e, 3, 2), coef(&e, 4, 3));
        let pi = p as i128;
        let cubic = |x: i128| (x * x * x + a21 * x * x + a42 * x + a63).rem_euclid(pi);
        let dcubic = |x: i128| (3 * x * x + 2 * a21 * x + a42).rem_euclid(pi);
        let triple = (0..pi).find(|&r| {
            (a21 + 3 * r).rem_euclid(pi) == 0
                && (a42 - 3 * r * r).rem_euclid(pi) == 0
                && (a63 + r * r * r).rem_euclid(pi) == 0
        });
        let double = (0..pi).find(|&r| cubic(r) == 0 && dcubic(r) == 0);
        match (triple, double) {
            (None, None) => return done(n - 4, Kodaira::I0Star),
            (None, Some(_)) => {
                // step 7 (I_n*) arises only for potentially multiplicative reduction
                return Err(Error::Unsupported(format!("Kodaira type I_n* at {p}")));
            }
            (Some(r0), _) => {
                e = e.translate(&(BigInt::from(r0) * &pb), &zero, &zero);
            }
        }
        // step 8
        let (a32, a64) = (coef(&e, 2, 2), coef(&e, 4, 4));
        if (a32 * a32 + 4 * a64).rem_euclid(pi) != 0 {
            return done(n - 6, Kodaira::IVStar);
        }
        let y0 = (0..pi)
            .find(|&y| (y * y + a32 * y - a64).rem_euclid(pi) == 0)
            .ok_or_else(|| Error::Internal(format!("step 8 root at {p}")))?;
        e = e.translate(&zero, &zero, &(BigInt::from(y0) * pw(2)));
        // steps 9-10
        if !divides(&pw(4), &e.a[3]) {
            return done(n - 7, Kodaira::IIIStar);
        }
        if !divides(&pw(6), &e.a[4]) {
            return done(n - 8, Kodaira::IIStar);
        }
        // not minimal: rescale and start over
        e = e.scale_down(&pb);
    }
}

/// Tate's algorithm on `y^2 = x^3 + n` at `ell` in {2, 3}.
pub fn tate_conductor(ell: u64, n: i128) -> Result<TateResult> {
    if ell != 2 && ell != 3 {
        return Err(Error::Unsupported(format!("Tate engine runs at 2 and 3 only, got {ell}")));
    }
    if n == 0 {
        return Err(Error::Unsupported("y^2 = x^3 is singular".into()));
    }
    tate(&Weierstrass::short(0, n), ell)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(ell: u64, n: i128) -> (u32, String) {
        let r = tate_conductor(ell, n).unwrap();
        (r.exponent, r.kodaira.to_string())
    }

    #[test]
    fn minus_23() {
        assert_eq!(run(3, -23), (3, "II".into()));
        assert_eq!(run(2, -23), (2, "IV".into()));
    }

    #[test]
    fn small_conductors() {
        // y^2 = x^3 + 1 has conductor 36
        assert_eq!(run(2, 1).0, 2);
        assert_eq!(run(3, 1).0, 2);
        // y^2 = x^3 + 16 has conductor 27
        assert_eq!(run(2, 16).0, 0);
        assert_eq!(run(3, 16).0, 3);
        // y^2 = x^3 - 432 has conductor 27 (non-minimal at 2 as given)
        assert_eq!(run(2, -432).0, 0);
        assert_eq!(run(3, -432).0, 3);
    }

    #[test]
    fn non_minimal_input_is_rescaled() {
        // n * 2^6 is isomorphic to n over Q
        assert_eq!(run(2, -23 * 64), run(2, -23));
        assert_eq!(run(3, 5 * 729), run(3, 5));
    }

    #[test]
    fn kodaira_text_round_trip() {
        for k in [Kodaira::I0, Kodaira::In(7), Kodaira::I0Star, Kodaira::InStar(3), Kodaira::IIStar] {
            assert_eq!(k.to_string().parse::<Kodaira>().unwrap(), k);
        }
    }

    #[test]
    fn rejects_other_primes() {
        assert!(tate_conductor(5, 1).is_err());
    }
}
