use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::finab::FinAbGroup;
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::{big_vec, to_i64};
use crate::error::{Error, Result};

/// Basis (as columns) of `{y in Z^cols : M y in n Z^rows}`.
pub fn kernel_mod(m: &IntMatrix, n: &BigInt) -> IntMatrix {
    assert!(n.is_positive(), "kernel_mod needs n >= 1");
    let s = smith_normal_form(m);
    let diag = s.diagonal();
    let mut basis = s.v.clone();
    for j in 0..m.cols() {
        let d = diag.get(j).cloned().unwrap_or_else(BigInt::zero);
        let factor = n / n.gcd(&d);
        if !factor.is_one() {
            for i in 0..basis.rows() {
                let x = basis.get(i, j) * &factor;
                basis.set(i, j, x);
            }
        }
    }
    basis
}

/// Basis (as columns) of the integer kernel `{y : M y = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let rank = s.rank();
    let cols: Vec<Vec<BigInt>> = (rank..m.cols()).map(|j| s.v.column(j)).collect();
    columns_to_matrix(&cols, m.cols())
}

/// One integral solution of `A x = b`, or `None` if there is none.
/// Free coordinates are set to zero.
pub fn solve_integral(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b);
    let diag = s.diagonal();
    let mut w = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let (q, r) = c.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            w[i] = q;
        }
    }
    Some(s.v.mul_vec(&w))
}

/// A basis (as columns) of the lattice spanned by the columns of `g`.
pub fn lattice_span(g: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(g);
    let diag = s.diagonal();
    let cols: Vec<Vec<BigInt>> = diag
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(i, d)| s.u_inv.column(i).iter().map(|x| x * d).collect())
        .collect();
    columns_to_matrix(&cols, g.rows())
}

/// Basis of the intersection of two lattices given by column bases.
pub fn lattice_intersection(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    if a.rows() != b.rows() {
        return Err(Error::Shape("lattices live in different ambient spaces".into()));
    }
    let joined = a.hstack(&b.scale(&BigInt::from(-1)))?;
    let kernel = integer_kernel(&joined);
    let gens: Vec<Vec<BigInt>> = (0..kernel.cols())
        .map(|j| {
            let x: Vec<BigInt> = kernel.column(j)[..a.cols()].to_vec();
            a.mul_vec(&x)
        })
        .collect();
    Ok(lattice_span(&columns_to_matrix(&gens, a.rows())))
}

/// Column Hermite normal form of a square full-rank lattice basis: a lower
/// triangular basis of the same lattice with positive diagonal and entries
/// left of the diagonal reduced into `[0, pivot)`.
pub fn hermite_basis(basis: &IntMatrix) -> Result<IntMatrix> {
    let n = basis.rows();
    if basis.cols() != n || basis.det().is_zero() {
        return Err(Error::Shape("hermite_basis needs a square full-rank basis".into()));
    }
    let mut h = basis.clone();
    for i in 0..n {
        loop {
            let nonzero: Vec<usize> = (i..n).filter(|&j| !h.get(i, j).is_zero()).collect();
            let pivot = *nonzero
                .iter()
                .min_by_key(|&&j| h.get(i, j).abs())
                .expect("full rank keeps a nonzero entry");
            h.swap_cols(i, pivot);
            let mut done = true;
            for j in i + 1..n {
                let q = h.get(i, j).div_floor(h.get(i, i));
                if !q.is_zero() {
                    h.add_col_multiple(j, i, &-q);
                }
                if !h.get(i, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(i, i).is_negative() {
            for r in 0..n {
                let x = -h.get(r, i);
                h.set(r, i, x);
            }
        }
        let pivot = h.get(i, i).clone();
        for j in 0..i {
            let q = h.get(i, j).div_floor(&pivot);
            if !q.is_zero() {
                h.add_col_multiple(j, i, &-q);
            }
        }
    }
    Ok(h)
}

fn columns_to_matrix(cols: &[Vec<BigInt>], rows: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    m
}

/// The quotient of an ambient lattice by a sublattice, with a projection that
/// reduces ambient vectors to group coordinates.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub group: FinAbGroup,
    ambient: IntMatrix,
    u: IntMatrix,
    /// For each group coordinate: the SNF row it reads and its modulus
    /// (`0` for a free coordinate).
    slots: Vec<(usize, i64)>,
    lifts: Vec<Vec<i64>>,
}

impl QuotientMap {
    /// Group coordinates of a vector given in ambient-space coordinates.
    pub fn project(&self, y: &[i64]) -> Result<Vec<i64>> {
        let c = solve_integral(&self.ambient, &big_vec(y)).ok_or(Error::NotContained)?;
        self.project_coords(&c)
    }

    fn project_coords(&self, c: &[BigInt]) -> Result<Vec<i64>> {
        let uc = self.u.mul_vec(c);
        self.slots
            .iter()
            .map(|&(row, modulus)| {
                let x = to_i64(&uc[row])?;
                Ok(if modulus == 0 { x } else { x.rem_euclid(modulus) })
            })
            .collect()
    }

    /// Ambient-space lifts of the group generators, in coordinate order.
    pub fn generator_lifts(&self) -> &[Vec<i64>] {
        &self.lifts
    }
}

/// Computes `ambient / sub`, where `ambient` is given by a column basis and
/// `sub` by generating columns, both in the same coordinates.
pub fn quotient_group(ambient: &IntMatrix, sub: &IntMatrix) -> Result<QuotientMap> {
    if ambient.rows() != sub.rows() {
        return Err(Error::Shape("ambient and sub live in different spaces".into()));
    }
    let r = ambient.cols();
    let mut coords = IntMatrix::zeros(r, sub.cols());
    for j in 0..sub.cols() {
        let x = solve_integral(ambient, &sub.column(j)).ok_or(Error::NotContained)?;
        for (i, v) in x.into_iter().enumerate() {
            coords.set(i, j, v);
        }
    }
    let s = smith_normal_form(&coords);
    let diag = s.diagonal();
    let mut torsion = Vec::new();
    let mut slots = Vec::new();
    let mut free = Vec::new();
    for i in 0..r {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free.push(i);
        } else if !d.is_one() {
            let d = to_i64(&d)?;
            torsion.push(d);
            slots.push((i, d));
        }
    }
    slots.extend(free.iter().map(|&i| (i, 0)));
    let lifts = slots
        .iter()
        .map(|&(i, _)| super::small_vec(&ambient.mul_vec(&s.u_inv.column(i))))
        .collect::<Result<Vec<_>>>()?;
    let group = FinAbGroup::new(torsion, free.len())?;
    Ok(QuotientMap { group, ambient: ambient.clone(), u: s.u, slots, lifts })
}
