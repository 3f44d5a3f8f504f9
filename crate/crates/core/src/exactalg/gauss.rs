use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Gaussian integer `re + im * i`.
///
/// Components are machine integers with overflow-checked arithmetic; every
/// value used by this crate is a small combination of fourth roots of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        GaussInt { re, im }
    }

    /// `i^k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussInt::new(1, 0),
            1 => GaussInt::new(0, 1),
            2 => GaussInt::new(-1, 0),
            _ => GaussInt::new(0, -1),
        }
    }

    /// `(-1)^k`.
    pub fn sign(k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Self::ONE
        } else {
            -Self::ONE
        }
    }

    pub fn conj(self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    pub fn norm(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// Exponent `k` with `self = i^k`, if `self` is a unit.
    pub fn unit_exponent(self) -> Option<i64> {
        (0..4).find(|&k| Self::i_pow(k) == self)
    }

    /// Inverse of a unit.
    pub fn unit_inv(self) -> Self {
        assert!(self.is_unit(), "{self} is not a unit");
        self.conj()
    }

    /// Power with a possibly negative exponent; negative exponents need a unit.
    pub fn pow(self, k: i64) -> Self {
        let base = if k < 0 { self.unit_inv() } else { self };
        let mut result = Self::ONE;
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result * b;
            }
            b = b * b;
            e >>= 1;
        }
        result
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt::new(
            self.re.checked_add(o.re).expect("GaussInt overflow"),
            self.im.checked_add(o.im).expect("GaussInt overflow"),
        )
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, o: GaussInt) -> GaussInt {
        self + (-o)
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.re, -self.im)
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, o: GaussInt) -> GaussInt {
        let re = (self.re as i128) * (o.re as i128) - (self.im as i128) * (o.im as i128);
        let im = (self.re as i128) * (o.im as i128) + (self.im as i128) * (o.re as i128);
        GaussInt::new(
            i64::try_from(re).expect("GaussInt overflow"),
            i64::try_from(im).expect("GaussInt overflow"),
        )
    }
}

impl std::iter::Sum for GaussInt {
    fn sum<I: Iterator<Item = GaussInt>>(iter: I) -> GaussInt {
        iter.fold(GaussInt::ZERO, |a, b| a + b)
    }
}

impl std::iter::Product for GaussInt {
    fn product<I: Iterator<Item = GaussInt>>(iter: I) -> GaussInt {
        iter.fold(GaussInt::ONE, |a, b| a * b)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im < 0 => write!(f, "{re}-{}i", -im),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}
