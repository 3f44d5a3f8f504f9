use std::fmt;

use super::gauss::GaussInt;

/// An element `zeta_m^exp` of the cyclic group `mu_m`, for a fixed primitive
/// root `zeta_m = exp(2 pi i / m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MuElem {
    m: u32,
    exp: u32,
}

impl MuElem {
    pub fn new(m: u32, exp: i64) -> Self {
        assert!(m >= 1, "mu_0 is not a group");
        MuElem { m, exp: exp.rem_euclid(m as i64) as u32 }
    }

    pub fn one(m: u32) -> Self {
        MuElem { m, exp: 0 }
    }

    /// `(-1)^k` inside `mu_m`, which needs `m` even unless `k` is even.
    pub fn sign(m: u32, k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Self::one(m)
        } else {
            assert!(m % 2 == 0, "-1 is not in mu_{m}");
            MuElem { m, exp: m / 2 }
        }
    }

    pub fn order_of_group(self) -> u32 {
        self.m
    }

    pub fn exponent(self) -> u32 {
        self.exp
    }

    pub fn is_one(self) -> bool {
        self.exp == 0
    }

    /// Multiplicative order of this element.
    pub fn order(self) -> u32 {
        self.m / num_integer::gcd(self.m, self.exp)
    }

    pub fn mul(self, o: MuElem) -> MuElem {
        assert_eq!(self.m, o.m, "mixing mu_{} and mu_{}", self.m, o.m);
        MuElem::new(self.m, self.exp as i64 + o.exp as i64)
    }

    pub fn inv(self) -> MuElem {
        MuElem::new(self.m, -(self.exp as i64))
    }

    pub fn pow(self, k: i64) -> MuElem {
        MuElem::new(self.m, (self.exp as i64 * k.rem_euclid(self.m as i64)) % self.m as i64)
    }

    /// Image under the inclusion `mu_m -> mu_big` sending `zeta_m` to
    /// `zeta_big^(big/m)`.
    pub fn lift(self, big: u32) -> MuElem {
        assert!(big % self.m == 0, "mu_{} does not embed in mu_{big}", self.m);
        MuElem::new(big, (self.exp * (big / self.m)) as i64)
    }

    /// The Gaussian integer with the same value, if it lies in `mu_4`.
    pub fn to_gauss(self) -> Option<GaussInt> {
        let e = self.exp as u64 * 4;
        (e % self.m as u64 == 0).then(|| GaussInt::i_pow((e / self.m as u64) as i64))
    }

    /// Inverse of [`MuElem::to_gauss`] into `mu_m`, with `4 | m` or the value
    /// real.
    pub fn from_gauss(m: u32, g: GaussInt) -> Option<MuElem> {
        let k = g.unit_exponent()? as u32;
        if (k * m) % 4 != 0 {
            return None;
        }
        Some(MuElem::new(m, ((k * m) / 4) as i64))
    }

    /// Value as `+1` or `-1`, if real.
    pub fn to_sign(self) -> Option<i64> {
        if self.exp == 0 {
            Some(1)
        } else if 2 * self.exp == self.m {
            Some(-1)
        } else {
            None
        }
    }
}

impl fmt::Display for MuElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_gauss() {
            Some(g) => write!(f, "{g}"),
            None => write!(f, "z{}^{}", self.m, self.exp),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let z = MuElem::new(8, 1);
        assert_eq!(z.pow(8), MuElem::one(8));
        assert_eq!(z.pow(2).to_gauss(), Some(GaussInt::I));
        assert_eq!(z.to_gauss(), None);
        assert_eq!(MuElem::new(4, 2).lift(8), MuElem::new(8, 4));
        assert_eq!(MuElem::sign(8, 1).to_sign(), Some(-1));
        assert_eq!(MuElem::from_gauss(8, -GaussInt::I), Some(MuElem::new(8, 6)));
        assert_eq!(MuElem::from_gauss(2, GaussInt::I), None);
        assert_eq!(MuElem::new(6, 2).order(), 3);
        assert_eq!(z.mul(z.inv()), MuElem::one(8));
    }
}
