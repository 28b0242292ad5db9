//! F_p, F_{p^2} = F_p(sqrt z), cubic-residue classes in F_{p^2}^x and the
//! projective line P^1(F_p) with its right GL_2 action on row vectors.

use serde::{Deserialize, Serialize};

use crate::arith::{add_mod, inv_mod, is_prime_u64, legendre, mul_mod, pow_mod, prime_divisors_u64, sub_mod};
use crate::error::{Error, Result};

/// `a + b * sqrt(z)` with `a, b` in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp2Elem {
    pub a: u64,
    pub b: u64,
}

impl Fp2Elem {
    pub const ONE: Fp2Elem = Fp2Elem { a: 1, b: 0 };

    pub fn new(a: u64, b: u64) -> Self {
        Self { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

/// Classes of F_{p^2}^x modulo cubes, with the Z/3 group law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CubicCoset {
    #[serde(rename = "ONE")]
    One,
    #[serde(rename = "J")]
    J,
    #[serde(rename = "JP")]
    JP,
}

impl CubicCoset {
    pub const ALL: [CubicCoset; 3] = [CubicCoset::One, CubicCoset::J, CubicCoset::JP];

    pub fn index(self) -> usize {
        match self {
            CubicCoset::One => 0,
            CubicCoset::J => 1,
            CubicCoset::JP => 2,
        }
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i % 3]
    }

    pub fn compose(self, other: Self) -> Self {
        Self::from_index(self.index() + other.index())
    }
}

/// F_{p^2} presented as F_p(sqrt z) for a fixed non-residue `z`.
#[derive(Debug, Clone)]
pub struct Fp2Field {
    p: u64,
    z: u64,
    generator: Fp2Elem,
    /// `generator^((p^2-1)/3)`, the cube root of unity labelling `J`.
    omega: Fp2Elem,
}

impl Fp2Field {
    pub fn new(p: u64, z: u64) -> Result<Self> {
        if p < 3 || !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if legendre(z as i128, p) != -1 {
            return Err(Error::NotNonResidue(z, p));
        }
        let mut field = Self {
            p,
            z: z % p,
            generator: Fp2Elem::ONE,
            omega: Fp2Elem::ONE,
        };
        field.generator = field.canonical_generator();
        if p % 3 == 2 {
            field.omega = field.pow(field.generator, field.order() / 3);
        }
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    /// Order of the multiplicative group, `p^2 - 1`.
    pub fn order(&self) -> u64 {
        self.p * self.p - 1
    }

    pub fn generator(&self) -> Fp2Elem {
        self.generator
    }

    pub fn elem(&self, a: u64, b: u64) -> Fp2Elem {
        Fp2Elem::new(a % self.p, b % self.p)
    }

    pub fn add(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        Fp2Elem::new(add_mod(x.a, y.a, self.p), add_mod(x.b, y.b, self.p))
    }

    pub fn mul(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        let p = self.p;
        let bb = mul_mod(mul_mod(x.b, y.b, p), self.z, p);
        Fp2Elem::new(
            add_mod(mul_mod(x.a, y.a, p), bb, p),
            add_mod(mul_mod(x.a, y.b, p), mul_mod(x.b, y.a, p), p),
        )
    }

    pub fn pow(&self, mut base: Fp2Elem, mut exp: u64) -> Fp2Elem {
        let mut acc = Fp2Elem::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `x^p`, i.e. `a - b sqrt z`.
    pub fn frobenius(&self, x: Fp2Elem) -> Fp2Elem {
        Fp2Elem::new(x.a, sub_mod(0, x.b, self.p))
    }

    pub fn multiplicative_order_is_full(&self, x: Fp2Elem) -> bool {
        if x.is_zero() {
            return false;
        }
        let n = self.order();
        let mut primes = prime_divisors_u64(self.p - 1);
        for q in prime_divisors_u64(self.p + 1) {
            if !primes.contains(&q) {
                primes.push(q);
            }
        }
        primes.iter().all(|&q| self.pow(x, n / q) != Fp2Elem::ONE)
    }

    /// Smallest `(a, b)` in lexicographic order generating F_{p^2}^x.
    fn canonical_generator(&self) -> Fp2Elem {
        for a in 0..self.p {
            for b in 0..self.p {
                let x = Fp2Elem::new(a, b);
                if self.multiplicative_order_is_full(x) {
                    return x;
                }
            }
        }
        unreachable!("F_(p^2)^x is cyclic")
    }

    /// Class of `x` in F_{p^2}^x / (F_{p^2}^x)^3. `J` is the class of the
    /// canonical generator.
    pub fn cubic_coset(&self, x: Fp2Elem) -> Result<CubicCoset> {
        if self.p % 3 != 2 {
            return Err(Error::CubesNotIndexThree(self.p));
        }
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let y = self.pow(x, self.order() / 3);
        if y == Fp2Elem::ONE {
            Ok(CubicCoset::One)
        } else if y == self.omega {
            Ok(CubicCoset::J)
        } else {
            debug_assert_eq!(y, self.mul(self.omega, self.omega));
            Ok(CubicCoset::JP)
        }
    }

    /// Cubic class of `1 + b sqrt z` for each `b` in `F_p`, indexed by `b`.
    pub fn classify_line(&self) -> Result<Vec<CubicCoset>> {
        (0..self.p)
            .map(|b| self.cubic_coset(Fp2Elem::new(1, b)))
            .collect()
    }
}

/// A point of P^1(F_p), normalised to `[1 : y]` or `[0 : 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P1Point {
    pub x: u64,
    pub y: u64,
}

impl P1Point {
    pub const INFINITY: P1Point = P1Point { x: 0, y: 1 };

    pub fn affine(y: u64) -> Self {
        Self { x: 1, y }
    }

    /// Normalise an arbitrary nonzero row vector.
    pub fn from_row(x: u64, y: u64, p: u64) -> Self {
        let (x, y) = (x % p, y % p);
        if x == 0 {
            assert!(y != 0, "zero row vector is not a point");
            Self::INFINITY
        } else {
            let inv = inv_mod(x, p).expect("p prime");
            Self::affine(mul_mod(y, inv, p))
        }
    }

    /// Position in `p1_enumerate` order.
    pub fn index(&self) -> usize {
        if self.x == 0 {
            0
        } else {
            1 + self.y as usize
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Self::INFINITY
        } else {
            Self::affine(i as u64 - 1)
        }
    }
}

pub fn p1_enumerate(p: u64) -> Vec<P1Point> {
    std::iter::once(P1Point::INFINITY)
        .chain((0..p).map(P1Point::affine))
        .collect()
}

/// Invertible 2x2 matrix over F_p, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub p: u64,
    pub m: [[u64; 2]; 2],
}

impl Mat2 {
    pub fn new(p: u64, m: [[u64; 2]; 2]) -> Result<Self> {
        let m = [[m[0][0] % p, m[0][1] % p], [m[1][0] % p, m[1][1] % p]];
        let mat = Self { p, m };
        if mat.det() == 0 {
            return Err(Error::SingularMatrix(p));
        }
        Ok(mat)
    }

    pub fn identity(p: u64) -> Self {
        Self { p, m: [[1, 0], [0, 1]] }
    }

    /// The unipotent `[[1, k], [0, 1]]`.
    pub fn unipotent(p: u64, k: u64) -> Self {
        Self { p, m: [[1, k % p], [0, 1]] }
    }

    pub fn det(&self) -> u64 {
        let p = self.p;
        sub_mod(mul_mod(self.m[0][0], self.m[1][1], p), mul_mod(self.m[0][1], self.m[1][0], p), p)
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let p = self.p;
        let mut out = [[0u64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = add_mod(
                    mul_mod(self.m[i][0], other.m[0][j], p),
                    mul_mod(self.m[i][1], other.m[1][j], p),
                    p,
                );
            }
        }
        Mat2 { p, m: out }
    }

    pub fn pow(&self, mut exp: u64) -> Mat2 {
        let mut acc = Mat2::identity(self.p);
        let mut base = *self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }
}

/// `[x : y] * M` on row vectors, renormalised.
pub fn p1_act(pt: P1Point, mat: &Mat2) -> Result<P1Point> {
    if mat.det() == 0 {
        return Err(Error::SingularMatrix(mat.p));
    }
    let p = mat.p;
    let x = add_mod(mul_mod(pt.x, mat.m[0][0], p), mul_mod(pt.y, mat.m[1][0], p), p);
    let y = add_mod(mul_mod(pt.x, mat.m[0][1], p), mul_mod(pt.y, mat.m[1][1], p), p);
    Ok(P1Point::from_row(x, y, p))
}

/// Quadratic residuosity via Euler's criterion, exposed for callers that
/// only need a yes/no.
pub fn is_square_mod(a: u64, p: u64) -> bool {
    a % p == 0 || pow_mod(a, (p - 1) / 2, p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::smallest_nonresidue;

    fn field(p: u64) -> Fp2Field {
        Fp2Field::new(p, smallest_nonresidue(p)).unwrap()
    }

    #[test]
    fn one_and_cubes_of_generator_are_trivial() {
        let f = field(11);
        assert_eq!(f.cubic_coset(Fp2Elem::ONE).unwrap(), CubicCoset::One);
        let g = f.generator();
        assert_eq!(f.cubic_coset(g).unwrap(), CubicCoset::J);
        assert_eq!(f.cubic_coset(f.mul(g, g)).unwrap(), CubicCoset::JP);
        assert_eq!(f.cubic_coset(f.pow(g, 3)).unwrap(), CubicCoset::One);
    }

    #[test]
    fn line_fibre_sizes_at_11() {
        let classes = field(11).classify_line().unwrap();
        let count = |c| classes.iter().filter(|&&x| x == c).count();
        assert_eq!(count(CubicCoset::J), 4);
        assert_eq!(count(CubicCoset::JP), 4);
        assert_eq!(count(CubicCoset::One), 3);
        assert_eq!(classes[0], CubicCoset::One);
    }

    #[test]
    fn error_paths() {
        let f = field(11);
        assert_eq!(f.cubic_coset(Fp2Elem::new(0, 0)), Err(Error::ZeroElement));
        let f7 = field(7);
        assert_eq!(f7.cubic_coset(Fp2Elem::ONE), Err(Error::CubesNotIndexThree(7)));
        assert!(matches!(Fp2Field::new(11, 3), Err(Error::NotNonResidue(3, 11))));
        assert!(Mat2::new(11, [[1, 2], [2, 4]]).is_err());
    }

    #[test]
    fn projective_line_basics() {
        let pts = p1_enumerate(11);
        assert_eq!(pts.len(), 12);
        assert_eq!(p1_enumerate(5)[0], P1Point::INFINITY);
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 12);
        for (i, pt) in pts.iter().enumerate() {
            assert_eq!(pt.index(), i);
            assert_eq!(P1Point::from_index(i), *pt);
        }
        let u = Mat2::unipotent(11, 1);
        assert_eq!(p1_act(P1Point::affine(0), &u).unwrap(), P1Point::affine(1));
        for pt in pts {
            assert_eq!(p1_act(pt, &Mat2::identity(11)).unwrap(), pt);
        }
    }

    #[test]
    fn scalar_row_normalisation() {
        assert_eq!(P1Point::from_row(3, 6, 11), P1Point::affine(2));
        assert_eq!(P1Point::from_row(0, 7, 11), P1Point::INFINITY);
    }
}
