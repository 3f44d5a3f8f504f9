use super::{FieldElement, FieldModel};
use crate::error::{Error, Result};
use crate::exactalg::{pow_mod, MuElem};

/// Legendre symbol of a unit mod an odd prime, as `+1` or `-1`.
pub fn legendre(u: i64, p: i64) -> i64 {
    if pow_mod(u, ((p - 1) / 2) as u64, p) == 1 {
        1
    } else {
        -1
    }
}

fn check_same(x: &FieldElement, y: &FieldElement, field: &FieldModel) -> Result<()> {
    let ok = match (field, x, y) {
        (FieldModel::Real { .. }, FieldElement::Real { .. }, FieldElement::Real { .. }) => true,
        (FieldModel::PAdic { .. }, FieldElement::PAdic { modulus: a, .. }, FieldElement::PAdic { modulus: b, .. }) => {
            Some(*a) == field.unit_modulus() && a == b
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::UnsupportedField(format!("elements do not belong to {field}")))
    }
}

/// The quadratic Hilbert symbol `(x, y)_2` in `{1, -1}`.
pub fn hilbert2(x: &FieldElement, y: &FieldElement, field: &FieldModel) -> Result<i64> {
    check_same(x, y, field)?;
    Ok(match (*x, *y) {
        (FieldElement::Real { negative: a }, FieldElement::Real { negative: b }) => {
            if a && b {
                -1
            } else {
                1
            }
        }
        (FieldElement::PAdic { val: a, unit: u, .. }, FieldElement::PAdic { val: b, unit: v, .. }) => {
            let p = field.residue_prime().unwrap();
            let mut s = if (a * b).rem_euclid(2) == 1 && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
            if b.rem_euclid(2) == 1 {
                s *= legendre(u, p);
            }
            if a.rem_euclid(2) == 1 {
                s *= legendre(v, p);
            }
            s
        }
        _ => unreachable!(),
    })
}

/// Tame symbol `(x, y)_n` in `mu_n`, for `n | p - 1`.
///
/// The value is `t^((p-1)/n)` with `t = (-1)^{ab} x^b y^{-a} mod p`
/// (`a`, `b` the valuations); it is identified with `mu_n` through the
/// smallest primitive root `g`, sending `g^((p-1)/n)` to `zeta_n`. For the
/// reals only `n <= 2` is meaningful.
pub fn hilbert_n_tame(x: &FieldElement, y: &FieldElement, field: &FieldModel, n: u32) -> Result<MuElem> {
    check_same(x, y, field)?;
    if n == 0 {
        return Err(Error::UnsupportedField("n = 0".into()));
    }
    if n == 1 {
        return Ok(MuElem::one(1));
    }
    match *field {
        FieldModel::Real { .. } => {
            if n != 2 {
                return Err(Error::UnsupportedField(format!("mu_{n} is not in R")));
            }
            Ok(MuElem::sign(2, (hilbert2(x, y, field)? == -1) as i64))
        }
        FieldModel::PAdic { p, .. } => {
            if (p - 1) % n as i64 != 0 {
                return Err(Error::UnsupportedField(format!("{n} does not divide {p} - 1")));
            }
            let (a, u) = parts(x);
            let (b, v) = parts(y);
            // (-1)^{ab} u^b v^{-a}; p^b and p^{-a} cancel against the valuations.
            let mut t = pow_signed(u, b, p) * pow_signed(v, -a, p) % p;
            if (a * b).rem_euclid(2) == 1 {
                t = p - t;
            }
            let w = pow_mod(t, ((p - 1) / n as i64) as u64, p);
            let g = field.primitive_root().unwrap();
            let zeta = pow_mod(g, ((p - 1) / n as i64) as u64, p);
            let mut acc = 1;
            for e in 0..n {
                if acc == w {
                    return Ok(MuElem::new(n, e as i64));
                }
                acc = acc * zeta % p;
            }
            unreachable!("t^((p-1)/n) is an n-th root of unity")
        }
    }
}

fn parts(x: &FieldElement) -> (i64, i64) {
    match *x {
        FieldElement::PAdic { val, unit, .. } => (val, unit),
        FieldElement::Real { .. } => unreachable!(),
    }
}

fn pow_signed(u: i64, e: i64, p: i64) -> i64 {
    let base = if e >= 0 { u.rem_euclid(p) } else { pow_mod(u, (p - 2) as u64, p) };
    pow_mod(base, e.unsigned_abs(), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_examples() {
        let q3 = FieldModel::padic(3).unwrap();
        let three = q3.from_int(3).unwrap();
        assert_eq!(hilbert2(&three, &three, &q3).unwrap(), -1);
        let r = FieldModel::real();
        assert_eq!(hilbert2(&r.minus_one(), &r.minus_one(), &r).unwrap(), -1);
        assert_eq!(hilbert2(&r.minus_one(), &r.one(), &r).unwrap(), 1);
        for p in [3, 5, 7, 11, 13] {
            let f = FieldModel::padic(p).unwrap();
            for u in 1..p {
                for v in 1..p {
                    let (x, y) = (f.from_int(u).unwrap(), f.from_int(v).unwrap());
                    assert_eq!(hilbert2(&x, &y, &f).unwrap(), 1);
                }
            }
        }
        assert!(hilbert2(&three, &r.one(), &q3).is_err());
    }

    #[test]
    fn tame_examples() {
        let q5 = FieldModel::padic(5).unwrap();
        let five = q5.from_int(5).unwrap();
        assert_eq!(hilbert_n_tame(&five, &five, &q5, 4).unwrap(), MuElem::new(4, 2));
        assert!(hilbert_n_tame(&five, &five, &q5, 3).is_err());
        assert!(hilbert_n_tame(&five, &five, &q5, 1).unwrap().is_one());
    }

    fn samples(f: &FieldModel) -> Vec<FieldElement> {
        let mut out = Vec::new();
        for x in [-30i64, -12, -7, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 14, 15, 21, 25, 49, 50, 98] {
            out.push(f.from_int(x).unwrap());
        }
        out.push(f.from_int(7).unwrap().inv());
        out
    }

    #[test]
    fn symbol_laws() {
        for (p, n) in [(3, 2), (5, 2), (5, 4), (7, 2), (7, 3), (7, 6), (13, 12)] {
            let f = FieldModel::padic(p).unwrap();
            let xs = samples(&f);
            for x in &xs {
                assert!(hilbert_n_tame(x, &x.neg(), &f, n).unwrap().is_one());
                for y in &xs {
                    let hxy = hilbert_n_tame(x, y, &f, n).unwrap();
                    assert!(hxy.mul(hilbert_n_tame(y, x, &f, n).unwrap()).is_one());
                    for z in xs.iter().take(6) {
                        let lhs = hilbert_n_tame(x, &y.mul(z), &f, n).unwrap();
                        assert_eq!(lhs, hxy.mul(hilbert_n_tame(x, z, &f, n).unwrap()));
                    }
                    if n == 2 {
                        assert_eq!(hxy.to_sign().unwrap(), hilbert2(x, y, &f).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn steinberg_relation() {
        for (p, n) in [(5, 4), (7, 3), (7, 6), (13, 4)] {
            let f = FieldModel::padic(p).unwrap();
            for a in -60i64..60 {
                if a == 0 || a == 1 {
                    continue;
                }
                let x = f.from_int(a).unwrap();
                let one_minus = f.from_int(1 - a).unwrap();
                assert!(hilbert_n_tame(&x, &one_minus, &f, n).unwrap().is_one(), "p={p} n={n} a={a}");
            }
        }
    }
}
