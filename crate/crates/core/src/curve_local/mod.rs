//! Local invariants of the Mordell curves `E_n : y^2 = x^3 + n` attached to a
//! family prime `p`: validity of `(p, n)`, surjectivity of the mod-p
//! representation, the conductor `M = 2^e2 3^e3n L^2` of the twisted
//! character representation, the parameter `c` with `M = 3 c^2`, and the
//! conductor of `E_n`.

pub mod tate;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_cube_root, factor_i128, is_prime_u64, valuation};
use crate::error::{Error, Result};
use crate::serde_big;
pub use tate::{tate_conductor, Kodaira, TateResult, Weierstrass};

/// Inputs are limited to `|n| < 2^62` so that all intermediate products stay
/// in `i128`.
pub const N_LIMIT: i128 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyViolation {
    PNotPrime { p: u64 },
    POutsideFamily { p: u64, residue_mod_9: u64 },
    NZero,
    NTooLarge,
    DivisibleBy16,
    DivisibleBy81,
    SixthPower { ell: u128 },
    PValuation { p: u64, found: u32, allowed: [u32; 2] },
}

impl fmt::Display for FamilyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyViolation::PNotPrime { p } => write!(f, "p = {p} is not prime"),
            FamilyViolation::POutsideFamily { p, residue_mod_9 } => {
                if *p < 11 {
                    write!(f, "p = {p} < 11 outside family")
                } else {
                    write!(f, "p = {residue_mod_9} mod 9 outside family")
                }
            }
            FamilyViolation::NZero => write!(f, "n = 0 gives a singular curve"),
            FamilyViolation::NTooLarge => write!(f, "|n| >= 2^62 not supported"),
            FamilyViolation::DivisibleBy16 => write!(f, "16 divides n"),
            FamilyViolation::DivisibleBy81 => write!(f, "81 divides n"),
            FamilyViolation::SixthPower { ell } => write!(f, "{ell}^6 divides n"),
            FamilyViolation::PValuation { p, found, allowed } => write!(
                f,
                "v_{p}(n) = {found}, expected {} or {}",
                allowed[0], allowed[1]
            ),
        }
    }
}

/// Every hypothesis on `(p, n)` that fails, in a fixed order.
pub fn check_family(p: u64, n: i128) -> Vec<FamilyViolation> {
    let mut out = Vec::new();
    let p_prime = is_prime_u64(p);
    if !p_prime {
        out.push(FamilyViolation::PNotPrime { p });
    } else if p < 11 || !matches!(p % 9, 2 | 5) {
        out.push(FamilyViolation::POutsideFamily {
            p,
            residue_mod_9: p % 9,
        });
    }
    if n == 0 {
        out.push(FamilyViolation::NZero);
        return out;
    }
    if n.abs() >= N_LIMIT {
        out.push(FamilyViolation::NTooLarge);
        return out;
    }
    if n % 16 == 0 {
        out.push(FamilyViolation::DivisibleBy16);
    }
    if n % 81 == 0 {
        out.push(FamilyViolation::DivisibleBy81);
    }
    for (ell, e) in factor_i128(n) {
        if e >= 6 {
            out.push(FamilyViolation::SixthPower { ell });
        }
    }
    if p_prime && p >= 2 {
        let allowed = match p % 9 {
            2 => Some([2, 5]),
            5 => Some([1, 4]),
            _ => None,
        };
        if let Some(allowed) = allowed {
            let found = valuation(n, p);
            if !allowed.contains(&found) {
                out.push(FamilyViolation::PValuation { p, found, allowed });
            }
        }
    }
    out
}

fn require_family(p: u64, n: i128) -> Result<()> {
    let violations = check_family(p, n);
    if violations.is_empty() {
        return Ok(());
    }
    let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
    Err(Error::Family(text.join("; ")))
}

/// False exactly when `n = 2 p^{v_p(n)} a^3` for an integer `a`.
pub fn rho_surjective(p: u64, n: i128) -> bool {
    let pa = (p as i128).pow(valuation(n, p));
    let m = 2 * pa;
    if n % m != 0 {
        return true;
    }
    exact_cube_root(n / m).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeAdic {
    pub cube_in_q3: bool,
    pub e3: u32,
    pub e3n: u32,
    /// Exponent of 3 in the conductor of `E_n`.
    pub f3: u32,
    pub kodaira: Kodaira,
}

pub fn is_cube_in_q3(n: i128) -> bool {
    let v = valuation(n, 3);
    if v % 3 != 0 {
        return false;
    }
    let unit = n / 3i128.pow(v);
    matches!(unit.rem_euclid(9), 1 | 8)
}

pub fn three_adic_data(n: i128) -> Result<ThreeAdic> {
    let local = tate_conductor(3, n)?;
    let cube_in_q3 = is_cube_in_q3(n);
    let (e3, e3n) = if cube_in_q3 {
        (0, 1)
    } else {
        if local.exponent % 2 == 0 {
            return Err(Error::Consistency(format!(
                "n = {n} is not a cube in Q_3 but v_3(N) = {} is even",
                local.exponent
            )));
        }
        ((local.exponent - 1) / 2, local.exponent)
    };
    Ok(ThreeAdic {
        cube_in_q3,
        e3,
        e3n,
        f3: local.exponent,
        kodaira: local.kodaira,
    })
}

/// `(c2, e2)`.
pub fn two_adic_data(n: i128) -> (u32, u32) {
    if valuation(n, 2) == 1 {
        (1, 0)
    } else {
        (2, 2)
    }
}

/// Product of the primes `l | n`, `l` prime to `6p`, with `3 ∤ v_l(n)`.
pub fn l_part(p: u64, n: i128) -> u128 {
    factor_i128(n)
        .into_iter()
        .filter(|&(ell, e)| ell != 2 && ell != 3 && ell != p as u128 && e % 3 != 0)
        .map(|(ell, _)| ell)
        .product()
}

/// Primes dividing `n` and prime to `6p`.
fn tame_primes(p: u64, n: i128) -> Vec<u128> {
    factor_i128(n)
        .into_iter()
        .map(|(ell, _)| ell)
        .filter(|&ell| ell != 2 && ell != 3 && ell != p as u128)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoPrimeConductor {
    #[serde(with = "serde_big::biguint")]
    pub m: BigUint,
    pub l: u128,
    pub c: u128,
}

pub fn conductor_rho_prime(p: u64, n: i128) -> Result<RhoPrimeConductor> {
    require_family(p, n)?;
    let (c2, e2) = two_adic_data(n);
    let three = three_adic_data(n)?;
    let l = l_part(p, n);
    let c = l * c2 as u128 * 3u128.pow(three.e3);
    let m = BigUint::from(2u32).pow(e2) * BigUint::from(3u32).pow(three.e3n) * BigUint::from(l).pow(2);
    let three_c2 = BigUint::from(3u32) * BigUint::from(c).pow(2);
    if three_c2 != m {
        return Err(Error::Consistency(format!(
            "3c^2 != M for (p, n) = ({p}, {n}): c = {c} (L = {l}, c2 = {c2}, e3 = {}), M = {m} (e2 = {e2}, e3n = {})",
            three.e3, three.e3n
        )));
    }
    Ok(RhoPrimeConductor { m, l, c })
}

/// Conductor of `E_n`: `2^f2 3^f3 p^2 prod l^2` over `l | n` prime to `6p`.
pub fn conductor(p: u64, n: i128) -> Result<BigUint> {
    require_family(p, n)?;
    Ok(conductor_unchecked(p, n)?.0)
}

fn conductor_unchecked(p: u64, n: i128) -> Result<(BigUint, TateResult, TateResult)> {
    let at2 = tate_conductor(2, n)?;
    let at3 = tate_conductor(3, n)?;
    let mut big = BigUint::from(2u32).pow(at2.exponent) * BigUint::from(3u32).pow(at3.exponent);
    big *= BigUint::from(p).pow(2);
    for ell in tame_primes(p, n) {
        big *= BigUint::from(ell).pow(2);
    }
    Ok((big, at2, at3))
}

/// The twist `y^2 = x^3 + eps p^alpha` with `alpha = 1` for `p = 5 mod 9`,
/// `alpha = 2` for `p = 2 mod 9`, and `eps = p^alpha mod 4`.
pub fn canonical_twist(p: u64) -> Result<i128> {
    let alpha = match p % 9 {
        5 => 1,
        2 => 2,
        _ => return Err(Error::OutsideFamily(p)),
    };
    let pa = (p as i128).pow(alpha);
    Ok(if pa % 4 == 1 { pa } else { -pa })
}

/// Everything about `(p, n)` the certificate needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MordellData {
    pub p: u64,
    pub n: i128,
    /// `n / p^{v_p(n)}`.
    pub n_prime: i128,
    /// `-432 n^2`.
    pub discriminant: i128,
    pub valuations: Vec<(u128, u32)>,
    pub surjective: bool,
    pub c2: u32,
    pub e2: u32,
    pub three_adic: ThreeAdic,
    pub l: u128,
    pub c: u128,
    #[serde(with = "serde_big::biguint")]
    pub m: BigUint,
    #[serde(with = "serde_big::biguint")]
    pub conductor: BigUint,
    pub tate_2: TateResult,
    pub tate_3: TateResult,
}

impl MordellData {
    pub fn new(p: u64, n: i128) -> Result<Self> {
        require_family(p, n)?;
        let (c2, e2) = two_adic_data(n);
        let rho = conductor_rho_prime(p, n)?;
        let three_adic = three_adic_data(n)?;
        let (conductor, tate_2, tate_3) = conductor_unchecked(p, n)?;
        Ok(Self {
            p,
            n,
            n_prime: n / (p as i128).pow(valuation(n, p)),
            discriminant: -432 * n * n,
            valuations: factor_i128(n),
            surjective: rho_surjective(p, n),
            c2,
            e2,
            three_adic,
            l: rho.l,
            c: rho.c,
            m: rho.m,
            conductor,
            tate_2,
            tate_3,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_examples() {
        assert!(check_family(23, -23).is_empty());
        assert!(check_family(11, 121).is_empty());
        let v = check_family(13, 13);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].to_string(), "p = 4 mod 9 outside family");
        let v = check_family(11, 11 * 16 * 81);
        assert_eq!(v.len(), 3);
        assert!(check_family(23, 23 * 7i128.pow(6)).contains(&FamilyViolation::SixthPower { ell: 7 }));
    }

    #[test]
    fn surjectivity() {
        assert!(rho_surjective(23, -23));
        assert!(!rho_surjective(23, 46));
        assert!(!rho_surjective(11, 6534));
        assert!(!rho_surjective(23, -46 * 8));
        assert!(rho_surjective(23, 46 * 3));
    }

    #[test]
    fn local_data() {
        let t = three_adic_data(-23).unwrap();
        assert_eq!((t.cube_in_q3, t.e3, t.e3n, t.f3), (false, 1, 3, 3));
        assert!(is_cube_in_q3(10) && is_cube_in_q3(-1) && is_cube_in_q3(27 * 8));
        assert!(!is_cube_in_q3(9));
        assert_eq!(two_adic_data(2), (1, 0));
        assert_eq!(two_adic_data(-23), (2, 2));
        assert_eq!(two_adic_data(12), (2, 2));
    }

    #[test]
    fn rho_prime_conductors() {
        let r = conductor_rho_prime(23, -23).unwrap();
        assert_eq!((r.m, r.c), (BigUint::from(108u32), 6));
        let r = conductor_rho_prime(11, 121).unwrap();
        assert_eq!((r.m, r.c), (BigUint::from(108u32), 6));
        let r = conductor_rho_prime(11, 605).unwrap();
        assert_eq!((r.m, r.l, r.c), (BigUint::from(2700u32), 5, 30));
    }

    #[test]
    fn curve_conductors() {
        assert_eq!(conductor(23, -23).unwrap(), BigUint::from(57132u32));
        assert_eq!(conductor(29, 841).unwrap(), BigUint::from(90828u32));
        assert_eq!(conductor(11, 605).unwrap(), BigUint::from(326700u32));
        assert!(conductor(13, 13).is_err());
    }

    #[test]
    fn twists() {
        assert_eq!(canonical_twist(23).unwrap(), -23);
        assert_eq!(canonical_twist(29).unwrap(), 841);
        assert_eq!(canonical_twist(41).unwrap(), 41);
        assert!(canonical_twist(13).is_err());
    }
}
