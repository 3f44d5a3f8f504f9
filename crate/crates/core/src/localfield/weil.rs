use super::{hilbert2, legendre, AdditiveCharacter, FieldElement, FieldModel, RealOrientation, SymbolDatum};
use crate::error::{Error, Result};
use crate::exactalg::GaussInt;

/// Normalized quadratic Gauss sum of `F_p`: `1` for `p = 1 mod 4`, `i` otherwise.
pub(crate) fn gauss_sign(p: i64) -> GaussInt {
    if p % 4 == 1 {
        GaussInt::ONE
    } else {
        GaussInt::I
    }
}

fn sign(s: i64) -> GaussInt {
    if s == 1 {
        GaussInt::ONE
    } else {
        -GaussInt::ONE
    }
}

/// The Weil index `w(x, psi)` in `mu_4`.
///
/// For the reference character: `w(p^a u) = 1` when `a` is even and
/// `legendre(u) * g_p` when `a` is odd; on the reals `w(-1) = -i` (or `+i`
/// under [`RealOrientation::PlusI`]). Twisted characters use
/// `w(x, ^c psi) = (x, c)_2 w(x, psi)`.
pub fn weil_index(x: &FieldElement, psi: &AdditiveCharacter, field: &FieldModel) -> Result<GaussInt> {
    let base = match (*field, *x) {
        (FieldModel::Real { orientation }, FieldElement::Real { negative }) => {
            if !negative {
                GaussInt::ONE
            } else if orientation == RealOrientation::MinusI {
                -GaussInt::I
            } else {
                GaussInt::I
            }
        }
        (FieldModel::PAdic { p, .. }, FieldElement::PAdic { val, unit, .. }) => {
            if val.rem_euclid(2) == 0 {
                GaussInt::ONE
            } else {
                sign(legendre(unit, p)) * gauss_sign(p)
            }
        }
        _ => return Err(Error::UnsupportedField(format!("{x} is not in {field}"))),
    };
    Ok(sign(hilbert2(x, &psi.twist, field)?) * base)
}

/// `w(a, psi)` for every element `a` of a quadratic symbol datum.
pub fn weil_table(sd: &SymbolDatum, psi: &AdditiveCharacter) -> Result<Vec<GaussInt>> {
    if sd.n != 2 {
        return Err(Error::Precondition("Weil index tables need n = 2".into()));
    }
    sd.elements().iter().map(|a| weil_index(&sd.element_field(a), psi, &sd.field)).collect()
}

/// Every `f: F^x/F^{x2} -> mu_4` with `f(xy) f(x)^{-1} f(y)^{-1} = (x, y)_2`,
/// sorted.
pub fn coboundary_functions(sd: &SymbolDatum) -> Result<Vec<Vec<GaussInt>>> {
    if sd.n != 2 {
        return Err(Error::Precondition("coboundary functions need n = 2".into()));
    }
    let elems = sd.elements();
    let size = elems.len();
    let products: Vec<Vec<usize>> = elems
        .iter()
        .map(|a| elems.iter().map(|b| sd.group.index_of(&sd.group.add(a, b))).collect())
        .collect();
    let mut out = Vec::new();
    for code in 0u64..1 << (2 * size) {
        let table: Vec<GaussInt> = (0..size).map(|k| GaussInt::i_pow((code >> (2 * k) & 3) as i64)).collect();
        let ok = (0..size).all(|i| {
            (0..size).all(|j| {
                let h = sign(sd.h_index(i, j).to_sign().unwrap());
                table[products[i][j]] == table[i] * table[j] * h
            })
        });
        if ok {
            out.push(table);
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaWReport {
    /// Number of `F^{x2}`-orbits of nontrivial additive characters.
    pub omega: usize,
    /// Number of functions with coboundary the Hilbert symbol.
    pub w: usize,
    pub injective: bool,
    pub bijective: bool,
}

/// Checks that `^c psi_0 -> w(., ^c psi_0)` is a bijection from orbits of
/// characters (one per square class `c`) to [`coboundary_functions`].
pub fn omega_w_bijection_check(field: &FieldModel) -> Result<OmegaWReport> {
    let sd = super::symbol_datum(field, 2)?;
    let targets = coboundary_functions(&sd)?;
    let psi0 = AdditiveCharacter::reference(field);
    let mut images = Vec::new();
    for c in field.square_class_reps() {
        images.push(weil_table(&sd, &psi0.twisted(&c))?);
    }
    let omega = images.len();
    let mut distinct = images.clone();
    distinct.sort();
    distinct.dedup();
    let injective = distinct.len() == omega;
    let lands = images.iter().all(|t| targets.binary_search(t).is_ok());
    Ok(OmegaWReport { omega, w: targets.len(), injective, bijective: injective && lands && omega == targets.len() })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeilLawReport {
    pub w1: bool,
    pub w2: bool,
    pub w3: bool,
    pub w4: bool,
    pub checks: usize,
}

impl WeilLawReport {
    pub fn all(&self) -> bool {
        self.w1 && self.w2 && self.w3 && self.w4
    }
}

/// Checks on square-class representatives and a few extra elements, for
/// every character `^c psi_0`:
/// `w(x)^2 = (x, x)_2`, `w(xy) = w(x) w(y) (x, y)_2`, `w(x c^2) = w(x)` and
/// `w(x, ^c psi) = (x, c)_2 w(x, psi)`.
pub fn weil_laws_check(field: &FieldModel) -> Result<WeilLawReport> {
    let reps = field.square_class_reps();
    let mut xs = reps.clone();
    for k in [-7i64, -3, 2, 10, 12, 45] {
        if let Ok(x) = field.from_int(k) {
            xs.push(x);
        }
    }
    let psi0 = AdditiveCharacter::reference(field);
    let psis: Vec<AdditiveCharacter> = reps.iter().map(|c| psi0.twisted(c)).collect();
    let mut r = WeilLawReport { w1: true, w2: true, w3: true, w4: true, checks: 0 };
    let h = |a: &FieldElement, b: &FieldElement| hilbert2(a, b, field).map(sign);
    for psi in &psis {
        for x in &xs {
            let wx = weil_index(x, psi, field)?;
            r.w1 &= wx * wx == h(x, x)?;
            for y in &xs {
                let wy = weil_index(y, psi, field)?;
                r.w2 &= weil_index(&x.mul(y), psi, field)? == wx * wy * h(x, y)?;
                r.w3 &= weil_index(&x.mul(&y.pow(2)), psi, field)? == wx;
                r.w4 &= weil_index(x, &psi.twisted(y), field)? == h(x, y)? * wx;
                r.checks += 3;
            }
            r.checks += 1;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        for f in [FieldModel::padic(3).unwrap(), FieldModel::padic(5).unwrap(), FieldModel::real()] {
            let psi0 = AdditiveCharacter::reference(&f);
            for c in f.square_class_reps() {
                assert_eq!(weil_index(&f.one(), &psi0.twisted(&c), &f).unwrap(), GaussInt::ONE);
            }
        }
        let q3 = FieldModel::padic(3).unwrap();
        let w = weil_index(&q3.from_int(3).unwrap(), &AdditiveCharacter::reference(&q3), &q3).unwrap();
        assert_eq!(w * w, -GaussInt::ONE);
        let q5 = FieldModel::padic(5).unwrap();
        let w = weil_index(&q5.from_int(5).unwrap(), &AdditiveCharacter::reference(&q5), &q5).unwrap();
        assert_eq!(w * w, GaussInt::ONE);
        let r = FieldModel::real();
        let psi0 = AdditiveCharacter::reference(&r);
        assert_eq!(weil_index(&r.minus_one(), &psi0, &r).unwrap(), -GaussInt::I);
        let flipped = FieldModel::real_oriented(RealOrientation::PlusI);
        assert_eq!(weil_index(&r.minus_one(), &psi0, &flipped).unwrap(), GaussInt::I);
    }

    #[test]
    fn laws_and_bijection() {
        for f in [3, 5, 7, 11].map(|p| FieldModel::padic(p).unwrap()) {
            assert!(weil_laws_check(&f).unwrap().all(), "{f}");
            let rep = omega_w_bijection_check(&f).unwrap();
            assert_eq!((rep.omega, rep.w, rep.bijective), (4, 4, true), "{f}");
        }
        for f in [FieldModel::real(), FieldModel::real_oriented(RealOrientation::PlusI)] {
            assert!(weil_laws_check(&f).unwrap().all());
            let rep = omega_w_bijection_check(&f).unwrap();
            assert_eq!((rep.omega, rep.w, rep.bijective), (2, 2, true));
        }
    }
}
