//! Local fields at desk scale: `Q_p` for odd `p` (units kept mod `p^k`) and
//! the reals. Hilbert symbols, Weil indices, additive characters and finite
//! symbol data for `F^x / F^{xn}`.

mod symbols;
mod symbol_datum;
mod weil;

pub use symbol_datum::{symbol_datum, SymbolDatum};
pub use symbols::{hilbert2, hilbert_n_tame, legendre};
pub use weil::{
    coboundary_functions, omega_w_bijection_check, weil_index, weil_laws_check, weil_table,
    OmegaWReport, WeilLawReport,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::pow_mod;

/// Sign convention for the real Weil index: `w(-1, psi_0)` is `-i` or `+i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RealOrientation {
    #[default]
    MinusI,
    PlusI,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldModel {
    PAdic { p: i64, precision: u32 },
    Real { orientation: RealOrientation },
}

impl FieldModel {
    pub const DEFAULT_PRECISION: u32 = 3;

    pub fn padic(p: i64) -> Result<Self> {
        Self::padic_with_precision(p, Self::DEFAULT_PRECISION)
    }

    pub fn padic_with_precision(p: i64, precision: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::UnsupportedField("residue characteristic 2".into()));
        }
        if !is_prime(p) {
            return Err(Error::UnsupportedField(format!("{p} is not a prime")));
        }
        if precision == 0 || p.checked_pow(precision).map_or(true, |m| m > 1_000_000_000) {
            return Err(Error::UnsupportedField(format!("precision {precision} for p = {p}")));
        }
        Ok(FieldModel::PAdic { p, precision })
    }

    pub fn real() -> Self {
        FieldModel::Real { orientation: RealOrientation::default() }
    }

    pub fn real_oriented(orientation: RealOrientation) -> Self {
        FieldModel::Real { orientation }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, FieldModel::Real { .. })
    }

    pub fn residue_prime(&self) -> Option<i64> {
        match *self {
            FieldModel::PAdic { p, .. } => Some(p),
            FieldModel::Real { .. } => None,
        }
    }

    /// `p^k`, the modulus for stored unit parts.
    pub fn unit_modulus(&self) -> Option<i64> {
        match *self {
            FieldModel::PAdic { p, precision } => Some(p.pow(precision)),
            FieldModel::Real { .. } => None,
        }
    }

    /// Smallest primitive root mod `p`.
    pub fn primitive_root(&self) -> Option<i64> {
        let p = self.residue_prime()?;
        let factors = prime_factors(p - 1);
        (2..p).chain(std::iter::once(1)).find(|&g| factors.iter().all(|&q| pow_mod(g, ((p - 1) / q) as u64, p) != 1))
    }

    pub fn one(&self) -> FieldElement {
        match *self {
            FieldModel::PAdic { .. } => FieldElement::PAdic { val: 0, unit: 1, modulus: self.unit_modulus().unwrap() },
            FieldModel::Real { .. } => FieldElement::Real { negative: false },
        }
    }

    /// The uniformizer `p`, or `None` for the reals.
    pub fn uniformizer(&self) -> Option<FieldElement> {
        self.residue_prime().map(|_| FieldElement::PAdic { val: 1, unit: 1, modulus: self.unit_modulus().unwrap() })
    }

    pub fn minus_one(&self) -> FieldElement {
        self.from_int(-1).expect("-1 is a unit")
    }

    /// Embeds a nonzero integer.
    pub fn from_int(&self, x: i64) -> Result<FieldElement> {
        if x == 0 {
            return Err(Error::Precondition("zero is not in F^x".into()));
        }
        match *self {
            FieldModel::Real { .. } => Ok(FieldElement::Real { negative: x < 0 }),
            FieldModel::PAdic { p, .. } => {
                let (mut val, mut u) = (0, x);
                while u % p == 0 {
                    u /= p;
                    val += 1;
                }
                self.element(val, u)
            }
        }
    }

    /// `p^val * unit` for a unit prime to `p`; for the reals `val` must be 0
    /// and only the sign of `unit` is kept.
    pub fn element(&self, val: i64, unit: i64) -> Result<FieldElement> {
        match *self {
            FieldModel::Real { .. } => {
                if val != 0 || unit == 0 {
                    return Err(Error::Precondition("real elements are given by a nonzero sign".into()));
                }
                Ok(FieldElement::Real { negative: unit < 0 })
            }
            FieldModel::PAdic { p, .. } => {
                if unit % p == 0 {
                    return Err(Error::Precondition(format!("{unit} is not a unit mod {p}")));
                }
                let modulus = self.unit_modulus().unwrap();
                Ok(FieldElement::PAdic { val, unit: unit.rem_euclid(modulus), modulus })
            }
        }
    }

    /// Representatives of `F^x / F^{x2}`: `1, u0, p, p u0` or `1, -1`.
    pub fn square_class_reps(&self) -> Vec<FieldElement> {
        match *self {
            FieldModel::Real { .. } => vec![self.one(), self.minus_one()],
            FieldModel::PAdic { .. } => {
                let u0 = self.element(0, self.primitive_root().unwrap()).unwrap();
                let pi = self.uniformizer().unwrap();
                vec![self.one(), u0, pi, pi.mul(&u0)]
            }
        }
    }

    pub fn label(&self) -> String {
        match *self {
            FieldModel::PAdic { p, .. } => format!("Q_{p}"),
            FieldModel::Real { .. } => "R".into(),
        }
    }
}

impl fmt::Display for FieldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn prime_factors(mut m: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// A nonzero element: valuation and unit mod `p^k`, or a real sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    PAdic { val: i64, unit: i64, modulus: i64 },
    Real { negative: bool },
}

impl FieldElement {
    pub fn valuation(&self) -> i64 {
        match *self {
            FieldElement::PAdic { val, .. } => val,
            FieldElement::Real { .. } => 0,
        }
    }

    pub fn mul(&self, o: &FieldElement) -> FieldElement {
        match (*self, *o) {
            (FieldElement::PAdic { val, unit, modulus }, FieldElement::PAdic { val: v2, unit: u2, modulus: m2 }) => {
                assert_eq!(modulus, m2, "elements of different fields");
                FieldElement::PAdic { val: val + v2, unit: (unit as i128 * u2 as i128 % modulus as i128) as i64, modulus }
            }
            (FieldElement::Real { negative: a }, FieldElement::Real { negative: b }) => {
                FieldElement::Real { negative: a ^ b }
            }
            _ => panic!("elements of different fields"),
        }
    }

    pub fn pow(&self, e: i64) -> FieldElement {
        match *self {
            FieldElement::PAdic { val, unit, modulus } => {
                let base = if e >= 0 { unit } else { mod_inverse(unit, modulus) };
                FieldElement::PAdic { val: val * e, unit: pow_mod(base, e.unsigned_abs(), modulus), modulus }
            }
            FieldElement::Real { negative } => FieldElement::Real { negative: negative && e % 2 != 0 },
        }
    }

    pub fn inv(&self) -> FieldElement {
        self.pow(-1)
    }

    pub fn neg(&self) -> FieldElement {
        match *self {
            FieldElement::PAdic { val, unit, modulus } => {
                FieldElement::PAdic { val, unit: (modulus - unit) % modulus, modulus }
            }
            FieldElement::Real { negative } => FieldElement::Real { negative: !negative },
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FieldElement::PAdic { val: 0, unit, .. } => write!(f, "{unit}"),
            FieldElement::PAdic { val, unit, .. } => write!(f, "p^{val}*{unit}"),
            FieldElement::Real { negative } => f.write_str(if negative { "-1" } else { "1" }),
        }
    }
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let (mut old_r, mut r) = (a.rem_euclid(m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m as i128) as i64
}

/// The additive character `psi(x) = psi_0(c x)` for a fixed reference
/// `psi_0` of conductor 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdditiveCharacter {
    pub twist: FieldElement,
}

impl AdditiveCharacter {
    pub fn reference(field: &FieldModel) -> Self {
        AdditiveCharacter { twist: field.one() }
    }

    pub fn new(twist: FieldElement) -> Self {
        AdditiveCharacter { twist }
    }

    /// `^c psi`, given by `x -> psi(c x)`.
    pub fn twisted(&self, c: &FieldElement) -> Self {
        AdditiveCharacter { twist: self.twist.mul(c) }
    }

    pub fn conductor(&self) -> Option<i64> {
        match self.twist {
            FieldElement::PAdic { val, .. } => Some(val),
            FieldElement::Real { .. } => None,
        }
    }
}

/// Parity of the conductor of a p-adic character.
pub fn conductor_parity(psi: &AdditiveCharacter) -> Result<u8> {
    psi.conductor()
        .map(|m| m.rem_euclid(2) as u8)
        .ok_or_else(|| Error::UnsupportedField("conductor of a real character".into()))
}
