//! Finite models of split metaplectic tori.
//!
//! `F^x` is replaced by `M = F^x / F^{xn}` (the group of a [`SymbolDatum`]),
//! except that the uniformizer may be given a longer period `L` (a multiple
//! of `n`) so that Frobenius values are not forced by `pi^n = 1`. The
//! symbol and the Weil index only see `L` through `a mod n`.
//! A cover over a lattice basis `b_1..b_r` has elements `b_1(u_1)...b_r(u_r) * zeta`
//! stored as `(u_1..u_r, zeta)`; products are brought back to this normal
//! form with the cocycle
//! `prod_i h(t_i, s_i)^Q(b_i) * prod_{i>j} h(t_i, s_j)^B(b_i, b_j)`.

mod characters;

pub use characters::{backward, forward,
    center_image_check, enumerate_param_functions, genuine_characters, param_character_bijection,
    BijectionReport, CenterReport, GenuineCharacter, ParamFunction,
};

use crate::bisector::{is_bisector, Bisector};
use crate::error::{Error, Result};
use crate::exactalg::window_points;
use crate::localfield::SymbolDatum;
use crate::metaplectic::ModifiedRootDatum;
use crate::rootdata::QuadraticForm;
use crate::twisthopf::SuiteReport;

/// Largest cover the model will build.
pub const MAX_ELEMENTS: usize = 1 << 16;

/// Normal-form element: one `M` index per basis vector and `zeta` as an
/// exponent of `zeta_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverElement {
    pub t: Vec<usize>,
    pub zeta: u32,
}

#[derive(Clone, Debug)]
pub struct MetaTorusModel {
    pub sd: SymbolDatum,
    /// Basis vectors in `Y` coordinates.
    pub basis: Vec<Vec<i64>>,
    q_values: Vec<i64>,
    gram: Vec<Vec<i64>>,
    c: Vec<Vec<u8>>,
    m_add: Vec<Vec<usize>>,
    m_neg: Vec<usize>,
    m_zero: usize,
    h_exp: Vec<Vec<u32>>,
    m_moduli: Vec<i64>,
    m_elements: Vec<Vec<i64>>,
}

/// The cover `T~#` over the basis of `Y~`.
pub fn build_t_sharp(md: &ModifiedRootDatum, sd: &SymbolDatum, c: &Bisector) -> Result<MetaTorusModel> {
    if md.n != sd.n as i64 {
        return Err(Error::Config(format!("cover degree {} but symbols of degree {}", md.n, sd.n)));
    }
    MetaTorusModel::over_basis(&md.q, c, sd, md.y_tilde_basis.clone(), sd.n as i64)
}

/// [`build_t_sharp`] with the uniformizer of period `period` in `M`.
pub fn build_t_sharp_with_period(
    md: &ModifiedRootDatum,
    sd: &SymbolDatum,
    c: &Bisector,
    period: i64,
) -> Result<MetaTorusModel> {
    if md.n != sd.n as i64 {
        return Err(Error::Config(format!("cover degree {} but symbols of degree {}", md.n, sd.n)));
    }
    MetaTorusModel::over_basis(&md.q, c, sd, md.y_tilde_basis.clone(), period)
}

/// The full cover of `T = Y (x) M`, with its non-trivial commutators.
pub fn build_cover(q: &QuadraticForm, c: &Bisector, sd: &SymbolDatum) -> Result<MetaTorusModel> {
    let r = q.rank();
    let basis = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
    MetaTorusModel::over_basis(q, c, sd, basis, sd.n as i64)
}

impl MetaTorusModel {
    pub fn over_basis(
        q: &QuadraticForm,
        c: &Bisector,
        sd: &SymbolDatum,
        basis: Vec<Vec<i64>>,
        period: i64,
    ) -> Result<Self> {
        if period < 1 || period % sd.n as i64 != 0 {
            return Err(Error::Config(format!("uniformizer period {period} is not a multiple of {}", sd.n)));
        }
        let mut m_moduli = sd.group.torsion().to_vec();
        if let Some(k) = sd.frobenius {
            if k < m_moduli.len() {
                m_moduli[k] = period;
            } else if period > 1 {
                m_moduli.insert(k, period);
            }
        }
        if !is_bisector(c, q) {
            return Err(Error::Precondition("C is not a bisector of Q".into()));
        }
        let r = q.rank();
        if basis.len() != r || basis.iter().any(|b| b.len() != r) {
            return Err(Error::Shape(format!("expected {r} basis vectors of length {r}")));
        }
        let m_size: usize = m_moduli.iter().map(|&d| d as usize).product();
        let size = (m_size as u128).pow(r as u32) * sd.n as u128;
        if size > MAX_ELEMENTS as u128 {
            return Err(Error::Config(format!("cover of order {size} exceeds {MAX_ELEMENTS}")));
        }
        let q_values = basis.iter().map(|b| q.value(b)).collect();
        let gram = basis.iter().map(|a| basis.iter().map(|b| q.bilinear(a, b)).collect()).collect();
        let cm = basis.iter().map(|a| basis.iter().map(|b| c.eval(a, b)).collect()).collect();
        let m_elements = mixed_radix(&m_moduli);
        let index = |v: Vec<i64>| mixed_index(&m_moduli, &v);
        let m_add = m_elements
            .iter()
            .map(|a| m_elements.iter().map(|b| index(a.iter().zip(b).map(|(x, y)| x + y).collect())).collect())
            .collect();
        let m_neg = m_elements.iter().map(|a| index(a.iter().map(|x| -x).collect())).collect();
        let h_exp = m_elements
            .iter()
            .map(|a| m_elements.iter().map(|b| sd.h(a, b).exponent()).collect())
            .collect();
        Ok(MetaTorusModel {
            sd: sd.clone(),
            basis,
            q_values,
            gram,
            c: cm,
            m_add,
            m_neg,
            m_zero: 0,
            h_exp,
            m_moduli,
            m_elements,
        })
    }

    pub fn n(&self) -> u32 {
        self.sd.n
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn m_size(&self) -> usize {
        self.m_elements.len()
    }

    /// Coordinate moduli of `M`.
    pub fn m_moduli(&self) -> &[i64] {
        &self.m_moduli
    }

    /// Index of a coordinate vector of `M` (reduced on the way).
    pub fn m_index(&self, coords: &[i64]) -> usize {
        mixed_index(&self.m_moduli, coords)
    }

    /// Period of the uniformizer in `M` (`1` without one).
    pub fn frobenius_period(&self) -> i64 {
        self.sd.frobenius.and_then(|k| self.m_moduli.get(k).copied()).unwrap_or(1)
    }

    /// Index of the uniformizer class, if the field has one.
    pub fn uniformizer(&self) -> Option<usize> {
        let k = self.sd.frobenius?;
        let mut e = vec![0; self.m_moduli.len()];
        *e.get_mut(k)? = 1;
        Some(self.m_index(&e))
    }

    /// Whether a class of `M` is a unit class.
    pub fn is_unit_class(&self, u: usize) -> bool {
        self.sd.frobenius.map_or(true, |k| self.m_elements[u].get(k).map_or(true, |&a| a == 0))
    }

    /// Index in the symbol datum of the class of `u`.
    pub fn symbol_index(&self, u: usize) -> usize {
        self.sd.group.index_of(&self.m_elements[u])
    }

    /// Order of the cover: `|M|^rank * n`.
    pub fn size(&self) -> usize {
        self.m_size().pow(self.rank() as u32) * self.n() as usize
    }

    /// The value group `mu_m` for characters, `m = 2n * exponent(M)`.
    pub fn character_order(&self) -> u32 {
        let exp = self.m_moduli.iter().fold(1, |acc, &d| crate::exactalg::lcm(acc, d));
        2 * self.n() * exp as u32
    }

    pub fn q_value(&self, i: usize) -> i64 {
        self.q_values[i]
    }

    pub fn bilinear(&self, i: usize, j: usize) -> i64 {
        self.gram[i][j]
    }

    pub fn bisector_entry(&self, i: usize, j: usize) -> u8 {
        self.c[i][j]
    }

    /// `h(u, v)` as an exponent of `zeta_n`.
    pub fn h(&self, u: usize, v: usize) -> u32 {
        self.h_exp[u][v]
    }

    pub fn m_add(&self, u: usize, v: usize) -> usize {
        self.m_add[u][v]
    }

    pub fn m_neg(&self, u: usize) -> usize {
        self.m_neg[u]
    }

    pub fn m_zero(&self) -> usize {
        self.m_zero
    }

    /// Coordinates of an `M` index over the generators.
    pub fn m_coords(&self, u: usize) -> &[i64] {
        &self.m_elements[u]
    }

    /// `k * u` in the additive notation of `M`.
    pub fn m_scale(&self, k: i64, u: usize) -> usize {
        let v: Vec<i64> = self.m_elements[u].iter().map(|x| k * x).collect();
        self.m_index(&v)
    }

    /// Generators of `M` with their orders.
    pub fn m_generators(&self) -> Vec<(usize, i64)> {
        (0..self.m_moduli.len())
            .map(|k| {
                let mut e = vec![0; self.m_moduli.len()];
                e[k] = 1;
                (self.m_index(&e), self.m_moduli[k])
            })
            .collect()
    }

    fn zeta_pow(&self, base: u32, e: i64) -> i64 {
        base as i64 * e.rem_euclid(self.n() as i64)
    }

    fn reduce_zeta(&self, e: i64) -> u32 {
        e.rem_euclid(self.n() as i64) as u32
    }

    pub fn identity(&self) -> CoverElement {
        CoverElement { t: vec![self.m_zero; self.rank()], zeta: 0 }
    }

    pub fn central(&self, zeta: u32) -> CoverElement {
        CoverElement { t: vec![self.m_zero; self.rank()], zeta: zeta % self.n() }
    }

    pub fn is_central_element(&self, x: &CoverElement) -> bool {
        x.t.iter().all(|&u| u == self.m_zero)
    }

    fn cocycle(&self, t: &[usize], s: &[usize]) -> i64 {
        let r = self.rank();
        let mut e = 0i64;
        for i in 0..r {
            e += self.zeta_pow(self.h(t[i], s[i]), self.q_values[i]);
            for j in 0..i {
                e += self.zeta_pow(self.h(t[i], s[j]), self.gram[i][j]);
            }
        }
        e
    }

    pub fn multiply(&self, a: &CoverElement, b: &CoverElement) -> CoverElement {
        let t = a.t.iter().zip(&b.t).map(|(&x, &y)| self.m_add[x][y]).collect();
        let e = a.zeta as i64 + b.zeta as i64 + self.cocycle(&a.t, &b.t);
        CoverElement { t, zeta: self.reduce_zeta(e) }
    }

    pub fn inverse(&self, a: &CoverElement) -> CoverElement {
        let t: Vec<usize> = a.t.iter().map(|&x| self.m_neg[x]).collect();
        let e = -(a.zeta as i64) - self.cocycle(&a.t, &t);
        CoverElement { t, zeta: self.reduce_zeta(e) }
    }

    pub fn commutator(&self, a: &CoverElement, b: &CoverElement) -> CoverElement {
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        self.multiply(&ab, &self.inverse(&ba))
    }

    pub fn power(&self, a: &CoverElement, k: u64) -> CoverElement {
        (0..k).fold(self.identity(), |acc, _| self.multiply(&acc, a))
    }

    /// Normal form of `y(u)` for `y` given in basis coordinates, obtained
    /// from the basis elements through the sum relation.
    pub fn element(&self, y: &[i64], u: usize) -> CoverElement {
        let r = self.rank();
        let t = y.iter().map(|&c| self.m_scale(c, u)).collect();
        let mut e = 0i64;
        for i in 0..r {
            let tri = y[i] * (y[i] - 1) / 2;
            e += tri * (self.q_values[i] - self.c[i][i] as i64);
            for j in i + 1..r {
                e -= self.c[i][j] as i64 * y[i] * y[j];
            }
        }
        CoverElement { t, zeta: self.reduce_zeta(self.zeta_pow(self.h(u, u), e)) }
    }

    pub fn index(&self, a: &CoverElement) -> usize {
        let ms = self.m_size();
        a.t.iter().fold(0usize, |acc, &u| acc * ms + u) * self.n() as usize + a.zeta as usize
    }

    /// All elements in index order.
    pub fn elements(&self) -> Vec<CoverElement> {
        let (ms, n, r) = (self.m_size(), self.n() as usize, self.rank());
        (0..self.size())
            .map(|mut k| {
                let zeta = (k % n) as u32;
                k /= n;
                let mut t = vec![0; r];
                for slot in t.iter_mut().rev() {
                    *slot = k % ms;
                    k /= ms;
                }
                CoverElement { t, zeta }
            })
            .collect()
    }

    /// Generators `b_i(g_k)` of the cover modulo `mu_n`, basis-major.
    pub fn generators(&self) -> Vec<(usize, usize, i64, CoverElement)> {
        let r = self.rank();
        let mut out = Vec::new();
        for i in 0..r {
            for &(g, order) in &self.m_generators() {
                let mut y = vec![0; r];
                y[i] = 1;
                out.push((i, g, order, self.element(&y, g)));
            }
        }
        out
    }

    /// Group axioms and the three presentation relations. Associativity is
    /// checked against every pair and each generator, which suffices by
    /// induction on word length.
    pub fn verify(&self, radius: i64) -> Vec<SuiteReport> {
        let elems = self.elements();
        let mut gens: Vec<CoverElement> = self.generators().into_iter().map(|g| g.3).collect();
        gens.push(self.central(1));
        let mut reports = Vec::new();

        let mut assoc = SuiteReport::ok("associativity", 0);
        let mut unit = SuiteReport::ok("identity-inverse", 0);
        for a in &elems {
            let ok = self.multiply(a, &self.identity()) == *a
                && self.multiply(&self.identity(), a) == *a
                && self.multiply(a, &self.inverse(a)) == self.identity();
            record(&mut unit, ok, || format!("{a:?}"));
            for b in &elems {
                let ab = self.multiply(a, b);
                for g in &gens {
                    let ok = self.multiply(&ab, g) == self.multiply(a, &self.multiply(b, g));
                    record(&mut assoc, ok, || format!("{a:?} {b:?} {g:?}"));
                }
            }
        }
        reports.push(assoc);
        reports.push(unit);

        let ys = window_points(self.rank(), radius);
        let us = 0..self.m_size();
        let mut product = SuiteReport::ok("relation-product", 0);
        let mut sum = SuiteReport::ok("relation-sum", 0);
        let mut comm = SuiteReport::ok("relation-commutator", 0);
        for y in &ys {
            let qy = self.form_value(y);
            for u1 in us.clone() {
                for u2 in us.clone() {
                    let lhs = self.multiply(&self.element(y, u1), &self.element(y, u2));
                    let twist = self.central(self.reduce_zeta(self.zeta_pow(self.h(u1, u2), qy)));
                    let rhs = self.multiply(&self.element(y, self.m_add[u1][u2]), &twist);
                    record(&mut product, lhs == rhs, || format!("y={y:?} u=({u1},{u2})"));
                }
            }
            for y2 in &ys {
                let cy = self.bisector_value(y, y2) as i64;
                let by = self.bilinear_value(y, y2);
                let yy: Vec<i64> = y.iter().zip(y2).map(|(a, b)| a + b).collect();
                for u in us.clone() {
                    let lhs = self.multiply(&self.element(y, u), &self.element(y2, u));
                    let twist = self.central(self.reduce_zeta(self.zeta_pow(self.h(u, u), cy)));
                    let rhs = self.multiply(&self.element(&yy, u), &twist);
                    record(&mut sum, lhs == rhs, || format!("y1={y:?} y2={y2:?} u={u}"));
                    for u2 in us.clone() {
                        let got = self.commutator(&self.element(y, u), &self.element(y2, u2));
                        let want = self.central(self.reduce_zeta(self.zeta_pow(self.h(u, u2), by)));
                        record(&mut comm, got == want, || format!("y1={y:?} y2={y2:?} u=({u},{u2})"));
                    }
                }
            }
        }
        reports.extend([product, sum, comm]);
        reports
    }

    /// `Q` at a vector in basis coordinates.
    pub fn form_value(&self, y: &[i64]) -> i64 {
        let r = self.rank();
        let mut v = 0;
        for i in 0..r {
            v += self.q_values[i] * y[i] * y[i];
            for j in 0..i {
                v += self.gram[i][j] * y[i] * y[j];
            }
        }
        v
    }

    pub fn bilinear_value(&self, a: &[i64], b: &[i64]) -> i64 {
        let r = self.rank();
        (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).map(|(i, j)| self.gram[i][j] * a[i] * b[j]).sum()
    }

    pub fn bisector_value(&self, a: &[i64], b: &[i64]) -> u8 {
        let r = self.rank();
        let s: i64 = (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .map(|(i, j)| self.c[i][j] as i64 * a[i] * b[j])
            .sum();
        s.rem_euclid(2) as u8
    }
}

fn mixed_radix(moduli: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &d in moduli {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..d).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn mixed_index(moduli: &[i64], v: &[i64]) -> usize {
    moduli.iter().zip(v).fold(0usize, |acc, (&d, &x)| acc * d as usize + x.rem_euclid(d) as usize)
}

pub(crate) fn record(report: &mut SuiteReport, ok: bool, witness: impl FnOnce() -> String) {
    report.checked += 1;
    if !ok {
        report.failures += 1;
        if report.witness.is_none() {
            report.witness = Some(witness());
        }
    }
}

#[cfg(test)]
mod tests;
