use super::{Bisector, BisectorMorphism};
use crate::error::{Error, Result};
use crate::rootdata::{QuadraticForm, RootDatum};

/// An element of `Z/2 x Z^k`, a finitely generated stand-in for `F^x` in
/// which the torsion bit plays `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FModelElem {
    pub negative: bool,
    pub exps: Vec<i64>,
}

impl FModelElem {
    pub fn one(free_rank: usize) -> Self {
        FModelElem { negative: false, exps: vec![0; free_rank] }
    }

    /// `(-1)^bit`.
    pub fn sign(bit: u8, free_rank: usize) -> Self {
        FModelElem { negative: bit & 1 == 1, exps: vec![0; free_rank] }
    }

    pub fn generator(index: usize, free_rank: usize) -> Self {
        let mut e = Self::one(free_rank);
        e.exps[index] = 1;
        e
    }

    pub fn mul(&self, o: &FModelElem) -> FModelElem {
        FModelElem {
            negative: self.negative ^ o.negative,
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self) -> FModelElem {
        FModelElem { negative: self.negative, exps: self.exps.iter().map(|a| -a).collect() }
    }

    pub fn div(&self, o: &FModelElem) -> FModelElem {
        self.mul(&o.inv())
    }

    pub fn with_sign(&self, bit: u8) -> FModelElem {
        FModelElem { negative: self.negative ^ (bit & 1 == 1), exps: self.exps.clone() }
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.exps.iter().all(|&e| e == 0)
    }
}

/// An element `(y, f)` of the extension `E_C` of `Y` by `F^x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtElem {
    pub y: Vec<i64>,
    pub f: FModelElem,
}

impl ExtElem {
    pub fn new(y: Vec<i64>, f: FModelElem) -> Self {
        ExtElem { y, f }
    }
}

/// `(y1, f1)(y2, f2) = (y1 + y2, (-1)^{C(y1, y2)} f1 f2)`.
pub fn extension_multiply(c: &Bisector, a: &ExtElem, b: &ExtElem) -> ExtElem {
    let y = a.y.iter().zip(&b.y).map(|(x, z)| x + z).collect();
    ExtElem { y, f: a.f.mul(&b.f).with_sign(c.eval(&a.y, &b.y)) }
}

pub fn extension_inverse(c: &Bisector, a: &ExtElem) -> ExtElem {
    ExtElem { y: a.y.iter().map(|x| -x).collect(), f: a.f.inv().with_sign(c.eval(&a.y, &a.y)) }
}

/// `phi_H(y, f) = (y, (-1)^{H(y)} f)`, an isomorphism `E_{C1} -> E_{C2}`.
pub fn phi_h(h: &BisectorMorphism, a: &ExtElem) -> ExtElem {
    ExtElem { y: a.y.clone(), f: a.f.with_sign(h.eval(&a.y)) }
}

/// The commutator `a b a^{-1} b^{-1}`, which lies over `0`.
pub fn commutator(c: &Bisector, a: &ExtElem, b: &ExtElem) -> FModelElem {
    let ab = extension_multiply(c, a, b);
    let ab_ainv = extension_multiply(c, &ab, &extension_inverse(c, a));
    let full = extension_multiply(c, &ab_ainv, &extension_inverse(c, b));
    debug_assert!(full.y.iter().all(|&x| x == 0));
    full.f
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationReport {
    pub holds: bool,
    pub failing_pairs: Vec<(usize, usize)>,
}

/// Checks that `e_i -> (alpha_i^vee, eta(i))` respects the commutator
/// relations `[e_i, e_j] = (-1)^{B(alpha_i^vee, alpha_j^vee)}`.
pub fn check_eqsc_presentation(
    c: &Bisector,
    q: &QuadraticForm,
    eta: &[FModelElem],
    rd: &RootDatum,
) -> Result<PresentationReport> {
    let l = rd.semisimple_rank();
    if eta.len() != l {
        return Err(Error::Shape(format!("eta needs {l} values")));
    }
    let images: Vec<ExtElem> =
        rd.coroots().iter().zip(eta).map(|(a, e)| ExtElem::new(a.clone(), e.clone())).collect();
    let mut failing_pairs = Vec::new();
    for i in 0..l {
        for j in 0..l {
            let got = commutator(c, &images[i], &images[j]);
            let bit = q.bilinear(&rd.coroots()[i], &rd.coroots()[j]).rem_euclid(2) as u8;
            if got != FModelElem::sign(bit, eta[i].exps.len()) {
                failing_pairs.push((i, j));
            }
        }
    }
    Ok(PresentationReport { holds: failing_pairs.is_empty(), failing_pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisector::{fair_bisector, solve_morphism};
    use crate::rootdata::preset;

    fn elem(y: &[i64], neg: bool, e: i64) -> ExtElem {
        ExtElem::new(y.to_vec(), FModelElem { negative: neg, exps: vec![e] })
    }

    #[test]
    fn sl2_extension() {
        let c = Bisector::new(&[vec![1]]).unwrap();
        let a = elem(&[1], false, 0);
        let unit = elem(&[0], false, 0);
        assert_eq!(extension_multiply(&c, &a, &unit), a);
        assert_eq!(extension_multiply(&c, &a, &a), elem(&[2], true, 0));
        assert!(commutator(&c, &a, &a).is_one());
    }

    #[test]
    fn commutator_is_polar_form() {
        let p = preset("Sp4").unwrap();
        let c = Bisector::new(&[vec![1, 0], vec![0, 1]]).unwrap();
        let q = QuadraticForm::from_gram(vec![vec![2, 1], vec![1, 2]]).unwrap();
        let c2 = Bisector::new(&[vec![1, 1], vec![0, 1]]).unwrap();
        let pts = crate::exactalg::window_points(2, 2);
        for y1 in &pts {
            for y2 in &pts {
                let a = ExtElem::new(y1.clone(), FModelElem::one(1));
                let b = ExtElem::new(y2.clone(), FModelElem::generator(0, 1));
                let bit = q.bilinear(y1, y2).rem_euclid(2) as u8;
                assert_eq!(commutator(&c2, &a, &b), FModelElem::sign(bit, 1));
                let bit = p.default_q.bilinear(y1, y2).rem_euclid(2) as u8;
                assert_eq!(commutator(&c, &a, &b), FModelElem::sign(bit, 1));
            }
        }
    }

    #[test]
    fn phi_is_an_isomorphism_and_composes() {
        let c1 = Bisector::new(&[vec![1, 0], vec![0, 1]]).unwrap();
        let c2 = Bisector::new(&[vec![1, 1], vec![1, 1]]).unwrap();
        let c3 = c1.clone();
        let h12 = solve_morphism(&c1, &c2).unwrap();
        let h23 = solve_morphism(&c2, &c3).unwrap();
        let h13 = h12.compose(&h23);
        let pts = crate::exactalg::window_points(2, 2);
        for y1 in &pts {
            for y2 in &pts {
                let a = elem(y1, false, 1);
                let b = elem(y2, true, -2);
                assert_eq!(
                    phi_h(&h12, &extension_multiply(&c1, &a, &b)),
                    extension_multiply(&c2, &phi_h(&h12, &a), &phi_h(&h12, &b))
                );
                assert_eq!(phi_h(&h23, &phi_h(&h12, &a)), phi_h(&h13, &a));
            }
        }
    }

    #[test]
    fn presentation_checks() {
        for name in ["SL2", "Sp4", "SL3", "G2-sc"] {
            let p = preset(name).unwrap();
            let c = fair_bisector(&p.default_q, &p.datum).unwrap();
            let l = p.datum.semisimple_rank();
            let eta: Vec<FModelElem> = (0..l).map(|i| FModelElem::generator(i, l)).collect();
            assert!(check_eqsc_presentation(&c, &p.default_q, &eta, &p.datum).unwrap().holds, "{name}");
        }
    }
}
