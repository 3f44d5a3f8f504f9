use super::{hilbert_n_tame, FieldElement, FieldModel};
use crate::error::{Error, Result};
use crate::exactalg::{pow_mod, FinAbGroup, MuElem};

/// A finite model of `F^x / F^{xn}` with its `mu_n`-valued Hilbert symbol.
///
/// p-adic: coordinates `(a, b)` stand for `p^a u0^b`, with `u0` the smallest
/// primitive root; the first generator is the Frobenius class and the second
/// spans the inertia (unit) classes. Real: one coordinate for the sign.
#[derive(Clone, Debug)]
pub struct SymbolDatum {
    pub field: FieldModel,
    pub n: u32,
    pub group: FinAbGroup,
    pub labels: Vec<String>,
    /// Generator index of the uniformizer class.
    pub frobenius: Option<usize>,
    /// Generator indices spanning the unit classes.
    pub inertia: Vec<usize>,
    table: Vec<MuElem>,
    size: usize,
}

impl SymbolDatum {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> Vec<Vec<i64>> {
        self.group.elements()
    }

    /// `h(a, b)` by element index.
    pub fn h_index(&self, i: usize, j: usize) -> MuElem {
        self.table[i * self.size + j]
    }

    pub fn h(&self, a: &[i64], b: &[i64]) -> MuElem {
        self.h_index(self.group.index_of(a), self.group.index_of(b))
    }

    /// A field element representing a class.
    pub fn element_field(&self, a: &[i64]) -> FieldElement {
        match self.field {
            FieldModel::Real { .. } => {
                if a.first().map_or(false, |x| x.rem_euclid(2) == 1) {
                    self.field.minus_one()
                } else {
                    self.field.one()
                }
            }
            FieldModel::PAdic { .. } => {
                let (val, e) = match a {
                    [v, e] => (*v, *e),
                    _ => (0, 0),
                };
                let u0 = self.field.primitive_root().unwrap();
                let modulus = self.field.unit_modulus().unwrap();
                self.field.element(val, pow_mod(u0, e as u64, modulus)).unwrap()
            }
        }
    }

    /// The class of a field element.
    pub fn class_of(&self, x: &FieldElement) -> Result<Vec<i64>> {
        if self.group.dim() == 0 {
            return Ok(Vec::new());
        }
        match (self.field, *x) {
            (FieldModel::Real { .. }, FieldElement::Real { negative }) => Ok(vec![negative as i64]),
            (FieldModel::PAdic { p, .. }, FieldElement::PAdic { val, unit, .. }) => {
                let g = self.field.primitive_root().unwrap();
                let target = unit.rem_euclid(p);
                let mut acc = 1;
                let mut dlog = 0;
                while acc != target {
                    acc = acc * g % p;
                    dlog += 1;
                }
                Ok(self.group.reduce(&[val, dlog]))
            }
            _ => Err(Error::UnsupportedField(format!("{x} is not in {}", self.field))),
        }
    }

    pub fn is_inertia(&self, a: &[i64]) -> bool {
        match self.frobenius {
            Some(k) => a[k].rem_euclid(self.n as i64) == 0,
            None => true,
        }
    }

    /// Bimultiplicativity, `h(a, b) h(b, a) = 1` and `h(a, a)^2 = 1`.
    pub fn check_invariants(&self) -> bool {
        let elems = self.elements();
        let s = self.size;
        let idx: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| self.group.index_of(&self.group.add(a, b))).collect())
            .collect();
        (0..s).all(|i| {
            self.h_index(i, i).pow(2).is_one()
                && (0..s).all(|j| {
                    self.h_index(i, j).mul(self.h_index(j, i)).is_one()
                        && (0..s).all(|k| self.h_index(i, idx[j][k]) == self.h_index(i, j).mul(self.h_index(i, k)))
                })
        })
    }
}

/// Builds the symbol datum of `F^x / F^{xn}`.
pub fn symbol_datum(field: &FieldModel, n: u32) -> Result<SymbolDatum> {
    let (group, labels, frobenius, inertia) = if n == 1 {
        (FinAbGroup::trivial(), Vec::new(), None, Vec::new())
    } else {
        match *field {
            FieldModel::Real { .. } => {
                if n != 2 {
                    return Err(Error::UnsupportedField(format!("R^x / R^x{n} with n = {n}")));
                }
                (FinAbGroup::new(vec![2], 0)?, vec!["-1".to_string()], None, Vec::new())
            }
            FieldModel::PAdic { p, .. } => {
                if (p - 1) % n as i64 != 0 {
                    return Err(Error::UnsupportedField(format!("{n} does not divide {p} - 1")));
                }
                let u0 = field.primitive_root().unwrap();
                (FinAbGroup::new(vec![n as i64, n as i64], 0)?, vec!["p".to_string(), u0.to_string()], Some(0), vec![1])
            }
        }
    };
    let mut sd = SymbolDatum { field: *field, n, group, labels, frobenius, inertia, table: Vec::new(), size: 0 };
    let elems = sd.elements();
    sd.size = elems.len();
    let reps: Vec<FieldElement> = elems.iter().map(|a| sd.element_field(a)).collect();
    let mut table = Vec::with_capacity(sd.size * sd.size);
    for x in &reps {
        for y in &reps {
            table.push(if n == 1 { MuElem::one(1) } else { hilbert_n_tame(x, y, field, n)? });
        }
    }
    sd.table = table;
    if !sd.check_invariants() {
        return Err(Error::Precondition(format!("symbol table of {field} is not a skew pairing")));
    }
    Ok(sd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_data() {
        let q3 = symbol_datum(&FieldModel::padic(3).unwrap(), 2).unwrap();
        assert_eq!(q3.group.torsion(), &[2, 2]);
        let (pi, u0) = (vec![1, 0], vec![0, 1]);
        assert_eq!(q3.h(&pi, &pi).to_sign(), Some(-1));
        assert_eq!(q3.h(&u0, &u0).to_sign(), Some(1));
        assert_eq!(q3.h(&pi, &u0).to_sign(), Some(-1));
        let q5 = symbol_datum(&FieldModel::padic(5).unwrap(), 2).unwrap();
        assert_eq!(q5.h(&pi, &pi).to_sign(), Some(1));
        let r = symbol_datum(&FieldModel::real(), 2).unwrap();
        assert_eq!(r.size(), 2);
        assert_eq!(r.h(&[1], &[1]).to_sign(), Some(-1));
    }

    #[test]
    fn higher_degree() {
        for (p, n) in [(7, 3), (5, 4), (7, 6), (13, 4)] {
            let f = FieldModel::padic(p).unwrap();
            let sd = symbol_datum(&f, n).unwrap();
            assert_eq!(sd.size(), (n * n) as usize);
            for a in sd.elements() {
                assert_eq!(sd.class_of(&sd.element_field(&a)).unwrap(), a);
                // h(a, a)^m = +-1 whenever 2m is divisible by n
                for m in 0..2 * n as i64 {
                    if (2 * m) % n as i64 == 0 {
                        assert!(sd.h(&a, &a).pow(m).to_sign().is_some());
                    }
                }
            }
        }
        assert!(symbol_datum(&FieldModel::padic(5).unwrap(), 3).is_err());
        assert!(symbol_datum(&FieldModel::real(), 3).is_err());
        assert_eq!(symbol_datum(&FieldModel::real(), 1).unwrap().size(), 1);
    }
}
