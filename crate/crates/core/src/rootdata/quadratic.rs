use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::datum::{RootDatum, Side};
use crate::error::{Error, Result};

/// Integer quadratic form `Q(y) = y^T B y / 2` on `Y = Z^rank`, stored by its
/// polar form `B(y1, y2) = Q(y1 + y2) - Q(y1) - Q(y2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    gram: Vec<Vec<i64>>,
}

impl QuadraticForm {
    /// `gram` must be symmetric with even diagonal (`B(e_i, e_i) = 2Q(e_i)`).
    pub fn from_gram(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("Gram matrix is not square".into()));
        }
        for i in 0..n {
            if gram[i][i] % 2 != 0 {
                return Err(Error::Shape(format!("B(e{i}, e{i}) is odd")));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Shape(format!("Gram matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(QuadraticForm { gram })
    }

    /// From basis values `Q(e_i)` and cross terms `B(e_i, e_j)` (the lower
    /// triangle of `cross` is ignored).
    pub fn from_values(values: &[i64], cross: &[Vec<i64>]) -> Result<Self> {
        let n = values.len();
        let mut gram = vec![vec![0; n]; n];
        for i in 0..n {
            gram[i][i] = 2 * values[i];
            for j in i + 1..n {
                let b = cross.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0);
                gram[i][j] = b;
                gram[j][i] = b;
            }
        }
        Self::from_gram(gram)
    }

    /// `Q = sum_i values[i] * y_i^2`.
    pub fn diagonal(values: &[i64]) -> Self {
        Self::from_values(values, &[]).expect("diagonal form is well formed")
    }

    /// The unique form on a semisimple datum with the given values on the
    /// simple coroots, via `B(alpha_i^vee, y) = Q(alpha_i^vee) <y, alpha_i>`.
    pub fn from_coroot_values(rd: &RootDatum, values: &[i64]) -> Result<Self> {
        let r = rd.rank();
        let l = rd.semisimple_rank();
        if values.len() != l {
            return Err(Error::Shape(format!("{} coroot values for {l} coroots", values.len())));
        }
        if l != r {
            return Err(Error::Precondition(
                "coroot values determine Q only when the coroots span Y over Q".into(),
            ));
        }
        // Solve R^T B = M with R the coroot columns and M_ik = Q_i (alpha_i)_k.
        let big = |x: i64| BigRational::from_integer(x.into());
        let mut aug: Vec<Vec<BigRational>> = (0..r)
            .map(|i| {
                let mut row: Vec<BigRational> = rd.coroots()[i].iter().map(|&x| big(x)).collect();
                row.extend(rd.roots()[i].iter().map(|&x| big(values[i] * x)));
                row
            })
            .collect();
        for col in 0..r {
            let pivot = (col..r)
                .find(|&i| !aug[i][col].is_zero())
                .ok_or_else(|| Error::Precondition("coroots are linearly dependent".into()))?;
            aug.swap(col, pivot);
            let p = aug[col][col].clone();
            for x in aug[col].iter_mut() {
                *x = &*x / &p;
            }
            for i in 0..r {
                if i != col && !aug[i][col].is_zero() {
                    let f = aug[i][col].clone();
                    let pivot_row = aug[col].clone();
                    for (x, y) in aug[i].iter_mut().zip(pivot_row) {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        let mut gram = vec![vec![0i64; r]; r];
        for i in 0..r {
            for k in 0..r {
                let v = &aug[i][r + k];
                if !v.denom().is_one() {
                    return Err(Error::Precondition("coroot values give a non-integral form".into()));
                }
                gram[i][k] = v.numer().to_i64().ok_or(Error::Overflow("quadratic form"))?;
            }
        }
        let q = Self::from_gram(gram)
            .map_err(|_| Error::NotWeylInvariant("coroot values are inconsistent".into()))?;
        if !is_weyl_invariant(&q, rd) {
            return Err(Error::NotWeylInvariant("coroot values are inconsistent".into()));
        }
        Ok(q)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn bilinear(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s: i128 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            let inner: i128 = row.iter().zip(b).map(|(&g, &y)| g as i128 * y as i128).sum();
            s += a[i] as i128 * inner;
        }
        i64::try_from(s).expect("bilinear form overflow")
    }

    pub fn value(&self, y: &[i64]) -> i64 {
        self.bilinear(y, y) / 2
    }

    /// The form restricted to a sublattice with the given basis columns.
    pub fn restrict(&self, basis: &[Vec<i64>]) -> QuadraticForm {
        let gram = basis.iter().map(|a| basis.iter().map(|b| self.bilinear(a, b)).collect()).collect();
        QuadraticForm { gram }
    }
}

/// Outcome of the Weyl-invariance test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylReport {
    pub invariant: bool,
    /// First `(i, y)` with `Q(s_i y) != Q(y)`.
    pub witness: Option<(usize, Vec<i64>)>,
    /// `B(alpha_i^vee, y) = Q(alpha_i^vee) <y, alpha_i>` on basis vectors,
    /// checked only when invariant.
    pub lemma_holds: Option<bool>,
}

/// Tests `Q(s_i y) = Q(y)` on `{e_i} + {e_i + e_j}` for every simple reflection.
pub fn weyl_invariance_report(q: &QuadraticForm, rd: &RootDatum) -> WeylReport {
    let r = rd.rank();
    let mut probes = Vec::new();
    for i in 0..r {
        let mut e = vec![0; r];
        e[i] = 1;
        probes.push(e.clone());
        for j in i + 1..r {
            let mut f = e.clone();
            f[j] = 1;
            probes.push(f);
        }
    }
    for i in 0..rd.semisimple_rank() {
        for y in &probes {
            let s = rd.simple_reflection(i, y, Side::Cochar).expect("index in range");
            if q.value(&s) != q.value(y) {
                return WeylReport { invariant: false, witness: Some((i, y.clone())), lemma_holds: None };
            }
        }
    }
    let lemma = (0..rd.semisimple_rank()).all(|i| {
        let c = &rd.coroots()[i];
        let qc = q.value(c);
        (0..r).all(|k| {
            let mut e = vec![0; r];
            e[k] = 1;
            q.bilinear(c, &e) == qc * rd.roots()[i][k]
        })
    });
    WeylReport { invariant: true, witness: None, lemma_holds: Some(lemma) }
}

pub fn is_weyl_invariant(q: &QuadraticForm, rd: &RootDatum) -> bool {
    q.rank() == rd.rank() && weyl_invariance_report(q, rd).invariant
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::presets::preset;

    #[test]
    fn examples() {
        let sl2 = preset("SL2").unwrap().datum;
        assert!(is_weyl_invariant(&QuadraticForm::diagonal(&[1]), &sl2));
        let sp4 = preset("Sp4").unwrap().datum;
        let q = QuadraticForm::diagonal(&[1, 1]);
        let report = weyl_invariance_report(&q, &sp4);
        assert!(report.invariant && report.lemma_holds == Some(true));
        assert_eq!(q.value(&sp4.coroots()[0]), 1);
        assert_eq!(q.value(&sp4.coroots()[1]), 2);
        assert!(!is_weyl_invariant(&QuadraticForm::diagonal(&[1, 0]), &sp4));
    }

    #[test]
    fn from_coroot_values_matches_e_basis() {
        let sp4 = preset("Sp4").unwrap().datum;
        let q = QuadraticForm::from_coroot_values(&sp4, &[1, 2]).unwrap();
        assert_eq!(q, QuadraticForm::diagonal(&[1, 1]));
        assert!(QuadraticForm::from_coroot_values(&sp4, &[1, 1]).is_err());
    }

    #[test]
    fn polar_identity() {
        let q = QuadraticForm::from_values(&[1, 3], &[vec![0, -1]]).unwrap();
        for a in [[1, 0], [2, -1], [3, 5]] {
            for b in [[0, 1], [-1, 4]] {
                let s = [a[0] + b[0], a[1] + b[1]];
                assert_eq!(q.bilinear(&a, &b), q.value(&s) - q.value(&a) - q.value(&b));
            }
        }
    }
}
