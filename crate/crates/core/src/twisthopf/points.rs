use std::sync::Arc;

use rayon::prelude::*;

use super::{add, sweep, ChiCocycle, SuiteReport, Tally, Trivializer, TwistContext};
use crate::bisector::Bisector;
use crate::error::{Error, Result};
use crate::exactalg::{window_points, GaussInt, MuElem};

/// A point `(g, t)`: `g` in `A` and the values `t(b_k)` in `mu_m` on the
/// basis of `Y~`, stored as exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub g: usize,
    pub t: Vec<u32>,
}

/// Points of the toral L-group with values in `mu_m`: pairs `(g, t)` with
/// `t(u + v) = t(u) t(v) h(g, g)^{C(u, v)}`, multiplied by
/// `(g1, t1)(g2, t2) = (g1 g2, t1 t2 h(g1, g2)^{Q(.)})`.
#[derive(Clone, Debug)]
pub struct PointGroup {
    pub ctx: Arc<TwistContext>,
    pub m: u32,
    /// `C` on `Y~` coordinates, or `None` for the untwisted direct product.
    c: Option<Bisector>,
}

const MAX_POINTS: usize = 1 << 16;

impl PointGroup {
    pub fn twisted(chi: &ChiCocycle, m: u32) -> Result<Self> {
        Self::build(&chi.ctx, Some(chi.c.clone()), m)
    }

    pub fn untwisted(ctx: &Arc<TwistContext>, m: u32) -> Result<Self> {
        Self::build(ctx, None, m)
    }

    fn build(ctx: &Arc<TwistContext>, c: Option<Bisector>, m: u32) -> Result<Self> {
        let n = ctx.n() as u32;
        if m == 0 || m % (2 * n) != 0 {
            return Err(Error::Config(format!("mu_{m} is too small: need a multiple of {}", 2 * n)));
        }
        Ok(PointGroup { ctx: ctx.clone(), m, c })
    }

    pub fn is_twisted(&self) -> bool {
        self.c.is_some()
    }

    fn sign(&self, s: GaussInt) -> u32 {
        if s == GaussInt::ONE {
            0
        } else {
            self.m / 2
        }
    }

    /// `h(a, b)^e` as an exponent in `mu_m`; trivial when untwisted.
    fn h_exp(&self, a: usize, b: usize, e: i64) -> u32 {
        if self.is_twisted() {
            self.sign(self.ctx.h_pow(a, b, e))
        } else {
            0
        }
    }

    pub fn size(&self) -> usize {
        self.ctx.group_size() * (self.m as usize).pow(self.ctx.rank() as u32)
    }

    pub fn elements(&self) -> Result<Vec<Point>> {
        if self.size() > MAX_POINTS {
            return Err(Error::Config(format!("{} points are too many to enumerate", self.size())));
        }
        let r = self.ctx.rank();
        let mut ts: Vec<Vec<u32>> = vec![Vec::new()];
        for _ in 0..r {
            ts = ts.into_iter().flat_map(|p| (0..self.m).map(move |x| [p.clone(), vec![x]].concat())).collect();
        }
        Ok((0..self.ctx.group_size()).flat_map(|g| ts.iter().map(move |t| Point { g, t: t.clone() })).collect())
    }

    pub fn identity(&self) -> Point {
        Point { g: self.ctx.identity(), t: vec![0; self.ctx.rank()] }
    }

    fn basis_q(&self, k: usize) -> i64 {
        self.ctx.q().gram()[k][k] / 2
    }

    pub fn multiply(&self, p1: &Point, p2: &Point) -> Point {
        let t = (0..p1.t.len())
            .map(|k| (p1.t[k] + p2.t[k] + self.h_exp(p1.g, p2.g, self.basis_q(k))) % self.m)
            .collect();
        Point { g: self.ctx.gmul(p1.g, p2.g), t }
    }

    pub fn inverse(&self, p: &Point) -> Point {
        let gi = self.ctx.ginv(p.g);
        let t = (0..p.t.len())
            .map(|k| (2 * self.m - p.t[k] - self.h_exp(p.g, gi, self.basis_q(k))) % self.m)
            .collect();
        Point { g: gi, t }
    }

    /// `t(y)` for `y` in `Y~` coordinates:
    /// `prod t(b_k)^{y_k} * h(g, g)^{sum_{i<j} y_i y_j C_ij + sum_i C(y_i b_i choose 2)}`.
    pub fn t_value(&self, p: &Point, y: &[i64]) -> MuElem {
        let m = self.m as i64;
        let mut e: i64 = p.t.iter().zip(y).map(|(&t, &c)| t as i64 * c).sum::<i64>().rem_euclid(m);
        if let Some(c) = &self.c {
            let mut phi = 0i64;
            let cm = c.matrix();
            for i in 0..y.len() {
                phi += y[i] * (y[i] - 1) / 2 * cm[i][i] as i64;
                for j in i + 1..y.len() {
                    phi += y[i] * y[j] * cm[i][j] as i64;
                }
            }
            e += self.h_exp(p.g, p.g, phi) as i64;
        }
        MuElem::new(self.m, e)
    }

    fn mu(&self, e: u32) -> MuElem {
        MuElem::new(self.m, e as i64)
    }

    /// Group axioms, the product law on `t` over the window points of the
    /// given radius, twisted multiplicativity of `t`, the exact sequence
    /// `Hom(Y~, mu_m) -> points -> A`, and for odd `n` equality with the
    /// direct product law.
    pub fn verify(&self, radius: i64) -> Result<Vec<SuiteReport>> {
        let pts = self.elements()?;
        let np = pts.len();
        if (np as u128).pow(3) > 1u128 << 27 {
            return Err(Error::Config(format!("{np} points are too many for an exhaustive sweep")));
        }
        let ws = window_points(self.ctx.rank(), radius.min(self.ctx.window));
        let e = self.identity();

        let assoc = sweep("associativity", np, |i| {
            let mut t = Tally::default();
            for b in &pts {
                let ab = self.multiply(&pts[i], b);
                for c in &pts {
                    let ok = self.multiply(&ab, c) == self.multiply(&pts[i], &self.multiply(b, c));
                    t.check(ok, || format!("{:?} {:?} {:?}", pts[i], b, c));
                }
            }
            t.finish()
        });
        let group = sweep("identity-inverse", np, |i| {
            let mut t = Tally::default();
            let p = &pts[i];
            let q = self.inverse(p);
            let ok = self.multiply(&e, p) == *p
                && self.multiply(p, &e) == *p
                && self.multiply(p, &q) == e
                && self.multiply(&q, p) == e;
            t.check(ok, || format!("{p:?}"));
            t.finish()
        });
        let law = sweep("product-law", np, |i| {
            let mut t = Tally::default();
            let p1 = &pts[i];
            for p2 in &pts {
                let prod = self.multiply(p1, p2);
                for y in &ws {
                    let expected = self.t_value(p1, y)
                        .mul(self.t_value(p2, y))
                        .mul(self.mu(self.h_exp(p1.g, p2.g, self.ctx.q().value(y))));
                    t.check(self.t_value(&prod, y) == expected, || format!("{p1:?} {p2:?} at {y:?}"));
                }
            }
            t.finish()
        });
        let twisted_mult = sweep("twisted-multiplicativity", np, |i| {
            let mut t = Tally::default();
            let p = &pts[i];
            for u in &ws {
                for v in &ws {
                    let cuv = self.c.as_ref().map_or(0, |c| c.eval(u, v) as i64);
                    let expected =
                        self.t_value(p, u).mul(self.t_value(p, v)).mul(self.mu(self.h_exp(p.g, p.g, cuv)));
                    t.check(self.t_value(p, &add(u, v)) == expected, || format!("{p:?} at {u:?}, {v:?}"));
                }
            }
            t.finish()
        });
        let kernel: Vec<&Point> = pts.iter().filter(|p| p.g == self.ctx.identity()).collect();
        let per_fiber = (self.m as usize).pow(self.ctx.rank() as u32);
        let mut exact = SuiteReport::ok("exact-sequence", 0);
        let fibers_full = (0..self.ctx.group_size()).all(|g| pts.iter().filter(|p| p.g == g).count() == per_fiber);
        let kernel_ok = kernel.par_iter().all(|a| {
            kernel.iter().all(|b| {
                let prod = self.multiply(a, b);
                let plain: Vec<u32> = a.t.iter().zip(&b.t).map(|(x, y)| (x + y) % self.m).collect();
                prod.g == self.ctx.identity() && prod.t == plain
            })
        });
        let projection_ok = pts.par_iter().all(|a| {
            pts.iter().all(|b| self.multiply(a, b).g == self.ctx.gmul(a.g, b.g))
        });
        exact.checked = 3;
        for (ok, what) in [(fibers_full, "fiber sizes"), (kernel_ok, "kernel law"), (projection_ok, "projection")] {
            if !ok {
                exact.failures += 1;
                exact.witness.get_or_insert_with(|| what.to_string());
            }
        }
        let mut out = vec![assoc, group, law, twisted_mult, exact];
        if self.ctx.n() % 2 != 0 {
            out.push(sweep("direct-product", np, |i| {
                let mut t = Tally::default();
                for b in &pts {
                    let plain: Vec<u32> = pts[i].t.iter().zip(&b.t).map(|(x, y)| (x + y) % self.m).collect();
                    let expected = Point { g: self.ctx.gmul(pts[i].g, b.g), t: plain };
                    t.check(self.multiply(&pts[i], b) == expected, || format!("{:?} {b:?}", pts[i]));
                }
                t.finish()
            }));
        }
        Ok(out)
    }
}

/// `(g, t) -> (g, t * omega(.)(g))`, from untwisted points to twisted ones.
pub fn omega_point_map(omega: &Trivializer, target: &PointGroup, p: &Point) -> Result<Point> {
    let r = target.ctx.rank();
    let t = (0..r)
        .map(|k| {
            let mut e = vec![0; r];
            e[k] = 1;
            let w = MuElem::from_gauss(target.m, omega.value(&e, p.g))
                .ok_or_else(|| Error::Config(format!("mu_{} does not contain mu_4", target.m)))?;
            Ok((p.t[k] + w.exponent()) % target.m)
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(Point { g: p.g, t })
}

impl PointGroup {
    /// Checks that [`omega_point_map`] is a bijective homomorphism from
    /// `source` (untwisted) to `self`, compatible with `t` on the window.
    pub fn verify_omega_map(&self, omega: &Trivializer, source: &PointGroup, radius: i64) -> Result<SuiteReport> {
        let pts = source.elements()?;
        let images = pts.iter().map(|p| omega_point_map(omega, self, p)).collect::<Result<Vec<_>>>()?;
        let ws = window_points(self.ctx.rank(), radius.min(self.ctx.window));
        let mut report = sweep("omega-points", pts.len(), |i| {
            let mut t = Tally::default();
            for (j, q) in pts.iter().enumerate() {
                let ok = omega_point_map(omega, self, &source.multiply(&pts[i], q)).ok()
                    == Some(self.multiply(&images[i], &images[j]));
                t.check(ok, || format!("{:?} {q:?}", pts[i]));
            }
            for y in &ws {
                let w = MuElem::from_gauss(self.m, omega.value(y, pts[i].g)).unwrap_or(MuElem::one(self.m));
                let ok = self.t_value(&images[i], y) == source.t_value(&pts[i], y).mul(w);
                t.check(ok, || format!("t values of {:?} at {y:?}", pts[i]));
            }
            t.finish()
        });
        let mut sorted = images.clone();
        sorted.sort();
        sorted.dedup();
        report.checked += 1;
        if sorted.len() != self.size() {
            report.failures += 1;
            report.witness.get_or_insert_with(|| "not a bijection".into());
        }
        Ok(report)
    }
}
