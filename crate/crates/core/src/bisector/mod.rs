//! Bisectors of a quadratic form: mod-2 matrices `C` with
//! `C(y, y) = Q(y) mod 2`, their fairness, morphisms, central extensions and
//! tetractors.
//!
//! Residues in `Y/2Y` are encoded as bitmasks: bit `k` is coordinate `k`.

mod extension;
mod morphism;
mod tetractor;

pub use extension::{
    check_eqsc_presentation, commutator, extension_multiply, phi_h, ExtElem, FModelElem,
    PresentationReport,
};
pub use morphism::{
    all_morphisms, descends_to_bar_y, sc_morphism_check, solve_morphism, BisectorMorphism,
    ScMorphismReport,
};
pub use tetractor::{fair_descent_check, is_tetractor, tetractors, DescentReport, Tetractor};

use crate::error::{Error, Result};
use crate::rootdata::{QuadraticForm, RootDatum};

/// A `Z/2`-valued bilinear form on `Y`, stored on the standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bisector {
    c: Vec<Vec<u8>>,
}

impl Bisector {
    /// Reduces an integer matrix mod 2.
    pub fn new(matrix: &[Vec<i64>]) -> Result<Self> {
        let r = matrix.len();
        if matrix.iter().any(|row| row.len() != r) {
            return Err(Error::Shape("bisector matrix must be square".into()));
        }
        let c = matrix.iter().map(|row| row.iter().map(|x| x.rem_euclid(2) as u8).collect()).collect();
        Ok(Bisector { c })
    }

    pub fn zero(rank: usize) -> Self {
        Bisector { c: vec![vec![0; rank]; rank] }
    }

    pub fn rank(&self) -> usize {
        self.c.len()
    }

    pub fn matrix(&self) -> &[Vec<u8>] {
        &self.c
    }

    pub fn matrix_i64(&self) -> Vec<Vec<i64>> {
        self.c.iter().map(|row| row.iter().map(|&x| x as i64).collect()).collect()
    }

    /// `C(y1, y2)` in `{0, 1}` for integer vectors.
    pub fn eval(&self, y1: &[i64], y2: &[i64]) -> u8 {
        let mut acc = 0i64;
        for (i, row) in self.c.iter().enumerate() {
            if y1[i] % 2 == 0 {
                continue;
            }
            for (j, &cij) in row.iter().enumerate() {
                if cij == 1 {
                    acc += y2[j].rem_euclid(2);
                }
            }
        }
        (acc % 2) as u8
    }

    /// `C(a, b)` for residues given as bitmasks.
    pub fn eval_mask(&self, a: u32, b: u32) -> u8 {
        let mut acc = 0u8;
        for (i, row) in self.c.iter().enumerate() {
            if a >> i & 1 == 1 {
                for (j, &cij) in row.iter().enumerate() {
                    acc ^= cij & (b >> j & 1) as u8;
                }
            }
        }
        acc
    }

    /// The difference `other - self` as a mod-2 matrix.
    pub fn difference(&self, other: &Bisector) -> Vec<Vec<u8>> {
        self.c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x ^ y).collect())
            .collect()
    }
}

pub(crate) fn mask_to_vec(mask: u32, rank: usize) -> Vec<i64> {
    (0..rank).map(|k| (mask >> k & 1) as i64).collect()
}

pub(crate) fn vec_to_mask(y: &[i64]) -> u32 {
    y.iter().enumerate().fold(0, |m, (k, x)| m | ((x.rem_euclid(2) as u32) << k))
}

pub(crate) fn residue_count(rank: usize) -> Result<u32> {
    if rank > 20 {
        return Err(Error::Precondition(format!("Y/2Y of rank {rank} is too large to enumerate")));
    }
    Ok(1u32 << rank)
}

/// Checks `C(y, y) = Q(y) mod 2` on every residue of `Y/2Y`.
pub fn is_bisector(c: &Bisector, q: &QuadraticForm) -> bool {
    let r = c.rank();
    if q.rank() != r {
        return false;
    }
    let Ok(count) = residue_count(r) else { return false };
    (0..count).all(|m| c.eval_mask(m, m) as i64 == q.value(&mask_to_vec(m, r)).rem_euclid(2))
}

/// A simple coroot of even `Q`-value pairing oddly with a basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessWitness {
    pub coroot: usize,
    pub basis: usize,
    /// `true` when `C(coroot, e_basis)` is odd, `false` for `C(e_basis, coroot)`.
    pub coroot_first: bool,
}

/// Whether `C(alpha^vee, y) = C(y, alpha^vee) = 0` for every simple coroot
/// with `Q(alpha^vee)` even; the first failure otherwise.
pub fn fairness_witness(c: &Bisector, q: &QuadraticForm, rd: &RootDatum) -> Option<FairnessWitness> {
    let r = c.rank();
    for (i, a) in rd.coroots().iter().enumerate() {
        if q.value(a).rem_euclid(2) != 0 {
            continue;
        }
        for k in 0..r {
            let e = mask_to_vec(1 << k, r);
            if c.eval(a, &e) == 1 {
                return Some(FairnessWitness { coroot: i, basis: k, coroot_first: true });
            }
            if c.eval(&e, a) == 1 {
                return Some(FairnessWitness { coroot: i, basis: k, coroot_first: false });
            }
        }
    }
    None
}

pub fn is_fair(c: &Bisector, q: &QuadraticForm, rd: &RootDatum) -> bool {
    is_bisector(c, q) && fairness_witness(c, q, rd).is_none()
}

/// Builds a fair bisector.
///
/// Simple coroots outside `2Y` are taken in order (those with even `Q` first),
/// keeping a maximal subset independent mod 2, which is then completed by
/// standard basis vectors to a basis `v` of `Y/2Y`. On that basis `C` is
/// upper triangular: `B(v_i, v_j)` above the diagonal and `Q(v_i)` on it.
/// Even-`Q` coroots left out of the basis lie in the span of the even-`Q`
/// ones kept, so their rows and columns vanish too.
pub fn fair_bisector(q: &QuadraticForm, rd: &RootDatum) -> Result<Bisector> {
    let r = q.rank();
    residue_count(r)?;
    let mut ordered: Vec<&Vec<i64>> = rd.coroots().iter().filter(|a| q.value(a) % 2 == 0).collect();
    ordered.extend(rd.coroots().iter().filter(|a| q.value(a) % 2 != 0));
    let mut basis: Vec<u32> = Vec::new();
    let mut echelon: Vec<u32> = Vec::new();
    let candidates = ordered.into_iter().map(|a| vec_to_mask(a)).chain((0..r).map(|k| 1u32 << k));
    for m in candidates {
        if let Some(reduced) = reduce_against(&echelon, m) {
            echelon.push(reduced);
            basis.push(m);
        }
        if basis.len() == r {
            break;
        }
    }
    let vs: Vec<Vec<i64>> = basis.iter().map(|&m| mask_to_vec(m, r)).collect();
    let mut cv = vec![vec![0u8; r]; r];
    for i in 0..r {
        cv[i][i] = q.value(&vs[i]).rem_euclid(2) as u8;
        for j in i + 1..r {
            cv[i][j] = q.bilinear(&vs[i], &vs[j]).rem_euclid(2) as u8;
        }
    }
    // Standard coordinates: e_k = sum_i inv[i][k] v_i.
    let inv = invert_mod2(&basis, r)
        .ok_or_else(|| Error::FairBisectorConstruction("completed basis is singular mod 2".into()))?;
    let mut ce = vec![vec![0i64; r]; r];
    for (a, row) in ce.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            let mut acc = 0u8;
            for i in 0..r {
                for j in 0..r {
                    acc ^= inv[i][a] & inv[j][b] & cv[i][j];
                }
            }
            *cell = acc as i64;
        }
    }
    let c = Bisector::new(&ce)?;
    if !is_bisector(&c, q) {
        return Err(Error::FairBisectorConstruction("output is not a bisector".into()));
    }
    if let Some(w) = fairness_witness(&c, q, rd) {
        return Err(Error::FairBisectorConstruction(format!("output is unfair at coroot {}", w.coroot)));
    }
    Ok(c)
}

// Reduces `m` against an echelon set (each entry with a distinct lowest bit);
// `None` if it reduces to zero.
fn reduce_against(echelon: &[u32], mut m: u32) -> Option<u32> {
    for &e in echelon {
        if m >> e.trailing_zeros() & 1 == 1 {
            m ^= e;
        }
    }
    (m != 0).then_some(m)
}

/// Coefficients expressing each standard basis vector in the basis `vs`:
/// `result[i][k]` is the coefficient of `vs[i]` in `e_k`.
fn invert_mod2(vs: &[u32], r: usize) -> Option<Vec<Vec<u8>>> {
    // Augmented rows: coordinates of v_i, then the identity.
    let mut rows: Vec<(u32, u32)> = vs.iter().enumerate().map(|(i, &m)| (m, 1u32 << i)).collect();
    if rows.len() != r {
        return None;
    }
    for col in 0..r {
        let pivot = (col..r).find(|&i| rows[i].0 >> col & 1 == 1)?;
        rows.swap(col, pivot);
        for i in 0..r {
            if i != col && rows[i].0 >> col & 1 == 1 {
                rows[i].0 ^= rows[col].0;
                rows[i].1 ^= rows[col].1;
            }
        }
    }
    // Row `k` now reads e_k = sum over bits i of rows[k].1 of v_i.
    let mut out = vec![vec![0u8; r]; r];
    for (k, &(_, comb)) in rows.iter().enumerate() {
        for (i, row) in out.iter_mut().enumerate() {
            row[k] = (comb >> i & 1) as u8;
        }
    }
    Some(out)
}
