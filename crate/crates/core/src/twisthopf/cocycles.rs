use std::sync::Arc;

use super::{add, sweep, SuiteReport, Tally, TwistContext};
use crate::bisector::{fair_descent_check, is_bisector, is_tetractor, Bisector, Tetractor};
use crate::error::{Error, Result};
use crate::exactalg::GaussInt;
use crate::localfield::{weil_table, AdditiveCharacter, FieldElement};
use crate::metaplectic::BarY;

/// `tau_y(a, b) = h(a, b)^{Q(y)}`.
#[derive(Clone, Debug)]
pub struct TauCocycle {
    pub ctx: Arc<TwistContext>,
}

impl TauCocycle {
    pub fn value(&self, y: &[i64], a: usize, b: usize) -> GaussInt {
        self.ctx.h_pow(a, b, self.ctx.q().value(y))
    }
}

/// `chi(u, v)(g) = h(g, g)^{C(u, v)}`.
#[derive(Clone, Debug)]
pub struct ChiCocycle {
    pub ctx: Arc<TwistContext>,
    /// The bisector on `Y`.
    pub c_y: Bisector,
    /// The same form on `Y~` coordinates.
    pub c: Bisector,
}

impl ChiCocycle {
    pub fn value(&self, u: &[i64], v: &[i64], g: usize) -> GaussInt {
        self.ctx.h_pow(g, g, self.c.eval(u, v) as i64)
    }
}

/// Builds `tau` and checks normalization (OT1), descent along the modified
/// coroots and multiplicativity in `y` (OT2), and the 2-cocycle identity
/// (OT3) on the window.
pub fn build_tau(ctx: &Arc<TwistContext>) -> (TauCocycle, Vec<SuiteReport>) {
    let tau = TauCocycle { ctx: ctx.clone() };
    let pts = ctx.window_points();
    let g = ctx.group_size();
    let e = ctx.identity();
    let one = GaussInt::ONE;

    let ot1 = sweep("OT1", pts.len(), |i| {
        let mut t = Tally::default();
        for a in 0..g {
            t.check(tau.value(&pts[i], e, a) == one && tau.value(&pts[i], a, e) == one, || {
                format!("tau_{:?} not normalized at {}", pts[i], ctx.group_label(a))
            });
        }
        t.finish()
    });
    let ot2 = sweep("OT2", pts.len(), |i| {
        let mut t = Tally::default();
        let y = &pts[i];
        for a in 0..g {
            for b in 0..g {
                let base = tau.value(y, a, b);
                for (k, cor) in ctx.coroots().iter().enumerate() {
                    t.check(tau.value(cor, a, b) == one && tau.value(&add(y, cor), a, b) == base, || {
                        format!("tau moves under modified coroot {k} at y = {y:?}")
                    });
                }
                for u in pts {
                    let ok = tau.value(&add(y, u), a, b) == base * tau.value(u, a, b);
                    t.check(ok, || format!("tau not multiplicative at {y:?}, {u:?}"));
                }
            }
        }
        t.finish()
    });
    let ot3 = sweep("OT3", pts.len(), |i| {
        let mut t = Tally::default();
        let y = &pts[i];
        for a in 0..g {
            for b in 0..g {
                for c in 0..g {
                    let lhs = tau.value(y, a, b) * tau.value(y, ctx.gmul(a, b), c);
                    let rhs = tau.value(y, b, c) * tau.value(y, a, ctx.gmul(b, c));
                    t.check(lhs == rhs, || format!("cocycle identity fails at y = {y:?}"));
                }
            }
        }
        t.finish()
    });
    (tau, vec![ot1, ot2, ot3])
}

/// Builds `chi` from a bisector on `Y` and checks TO1 (normalization),
/// TO2 (cocycle identity in the lattice arguments), TO3 (each `chi(u, v)` is
/// a character of `A`), symmetry and involutivity.
pub fn build_chi(ctx: &Arc<TwistContext>, c_y: &Bisector) -> Result<(ChiCocycle, Vec<SuiteReport>)> {
    if !is_bisector(c_y, &ctx.md.q) {
        return Err(Error::Precondition("C is not a bisector of Q".into()));
    }
    let basis = &ctx.md.y_tilde_basis;
    let matrix: Vec<Vec<i64>> =
        basis.iter().map(|bk| basis.iter().map(|bl| c_y.eval(bk, bl) as i64).collect()).collect();
    let chi = ChiCocycle { ctx: ctx.clone(), c_y: c_y.clone(), c: Bisector::new(&matrix)? };
    let pts = ctx.window_points();
    let g = ctx.group_size();
    let e = ctx.identity();
    let zero = vec![0; ctx.rank()];
    let one = GaussInt::ONE;

    let to1 = sweep("TO1", pts.len(), |i| {
        let mut t = Tally::default();
        let u = &pts[i];
        for a in 0..g {
            t.check(chi.value(u, &zero, a) == one && chi.value(&zero, u, a) == one, || {
                format!("chi({u:?}, 0) != 1")
            });
        }
        for v in pts {
            t.check(chi.value(u, v, e) == one, || format!("chi({u:?}, {v:?}) not normalized"));
        }
        t.finish()
    });
    let to2 = sweep("TO2", pts.len(), |i| {
        let mut t = Tally::default();
        let u = &pts[i];
        for v in pts {
            let uv = add(u, v);
            for w in pts {
                let vw = add(v, w);
                for a in 0..g {
                    let lhs = chi.value(u, v, a) * chi.value(&uv, w, a);
                    let rhs = chi.value(v, w, a) * chi.value(u, &vw, a);
                    t.check(lhs == rhs, || format!("chi cocycle fails at {u:?}, {v:?}, {w:?}"));
                }
            }
        }
        t.finish()
    });
    let to3 = sweep("TO3", pts.len(), |i| {
        let mut t = Tally::default();
        let u = &pts[i];
        for v in pts {
            for a in 0..g {
                for b in 0..g {
                    let ok = chi.value(u, v, ctx.gmul(a, b)) == chi.value(u, v, a) * chi.value(u, v, b);
                    t.check(ok, || format!("chi({u:?}, {v:?}) is not a character"));
                }
            }
        }
        t.finish()
    });
    let symmetry = sweep("TO-symmetry", pts.len(), |i| {
        let mut t = Tally::default();
        let u = &pts[i];
        for v in pts {
            for a in 0..g {
                t.check(chi.value(u, v, a) == chi.value(v, u, a), || format!("chi not symmetric at {u:?}, {v:?}"));
            }
        }
        t.finish()
    });
    let involutive = sweep("TO-involutive", pts.len(), |i| {
        let mut t = Tally::default();
        let u = &pts[i];
        for v in pts {
            for a in 0..g {
                let x = chi.value(u, v, a);
                t.check(x * x == one, || format!("chi({u:?}, {v:?})^2 != 1"));
            }
        }
        t.finish()
    });
    Ok((chi, vec![to1, to2, to3, symmetry, involutive]))
}

/// Com1: `C` descends along the modified coroots (lattice check), and `chi`
/// is unchanged by such shifts on the window. Com2: the mixed identity
/// `tau_u(a, b) tau_v(a, b) chi(u, v)(a) chi(u, v)(b) = tau_{u+v}(a, b) chi(u, v)(ab)`.
pub fn verify_compatible(tau: &TauCocycle, chi: &ChiCocycle) -> Vec<SuiteReport> {
    let ctx = &chi.ctx;
    let pts = ctx.window_points();
    let g = ctx.group_size();
    let descent = fair_descent_check(&chi.c_y, &ctx.md);
    let mut com1 = sweep("Com1", pts.len(), |i| {
        let mut t = Tally::default();
        let u = &pts[i];
        for v in pts {
            for (k, cor) in ctx.coroots().iter().enumerate() {
                for a in 0..g {
                    let base = chi.value(u, v, a);
                    let ok = chi.value(&add(u, cor), v, a) == base && chi.value(u, &add(v, cor), a) == base;
                    t.check(ok, || format!("chi moves under modified coroot {k} at {u:?}, {v:?}"));
                }
            }
        }
        t.finish()
    });
    com1.checked += 1;
    if !descent.holds {
        com1.failures += 1;
        let (k, y) = descent.witness.clone().unwrap_or_default();
        com1.witness = Some(format!("C pairs modified coroot {k} oddly with {y:?}"));
    }
    let com2 = sweep("Com2", pts.len(), |i| {
        let mut t = Tally::default();
        let u = &pts[i];
        for v in pts {
            let uv = add(u, v);
            for a in 0..g {
                for b in 0..g {
                    let lhs = tau.value(u, a, b) * tau.value(v, a, b) * chi.value(u, v, a) * chi.value(u, v, b);
                    let rhs = tau.value(&uv, a, b) * chi.value(u, v, ctx.gmul(a, b));
                    t.check(lhs == rhs, || format!("Com2 fails at {u:?}, {v:?}"));
                }
            }
        }
        t.finish()
    });
    vec![com1, com2]
}

/// `omega(y)(g) = w(rec g, psi)^{kappa(y mod BarY)}`.
#[derive(Clone, Debug)]
pub struct Trivializer {
    pub ctx: Arc<TwistContext>,
    pub kappa: Tetractor,
    pub psi: AdditiveCharacter,
    w: Vec<GaussInt>,
    /// Images in `BarY` of the `Y~` basis vectors.
    bar_of_basis: Vec<Vec<i64>>,
}

impl Trivializer {
    pub fn bar(&self, y: &[i64]) -> Vec<i64> {
        let dim = self.kappa.rank();
        (0..dim)
            .map(|j| y.iter().zip(&self.bar_of_basis).map(|(c, b)| c * b[j]).sum::<i64>().rem_euclid(2))
            .collect()
    }

    pub fn kappa_at(&self, y: &[i64]) -> u8 {
        self.kappa.value(&self.bar(y))
    }

    pub fn value(&self, y: &[i64], g: usize) -> GaussInt {
        self.w[g].pow(self.kappa_at(y) as i64)
    }

    /// The Weil index table `w(rec g, psi)`.
    pub fn weil_values(&self) -> &[GaussInt] {
        &self.w
    }

    /// The trivializer for `-kappa`, the convolution inverse.
    pub fn inverse(&self) -> Trivializer {
        Trivializer { kappa: self.kappa.negated(), ..self.clone() }
    }
}

/// Builds `omega` for `n = 2` and checks Triv1-3, that `-kappa` gives the
/// convolution inverse, and that `-kappa` with `psi` agrees with `kappa`
/// with `^{-1} psi` (complex conjugation of the Weil indices).
pub fn build_omega(
    chi: &ChiCocycle,
    psi: &AdditiveCharacter,
    kappa: &Tetractor,
    bar_y: &BarY,
) -> Result<(Trivializer, Vec<SuiteReport>)> {
    let ctx = &chi.ctx;
    if ctx.n() != 2 {
        return Err(Error::Precondition("trivializers are built for n = 2".into()));
    }
    if !is_tetractor(kappa, &chi.c_y, &ctx.md.q, bar_y) {
        return Err(Error::Precondition("kappa is not a tetractor of C on BarY".into()));
    }
    let r = ctx.rank();
    let bar_of_basis = (0..r)
        .map(|k| {
            let mut e = vec![0; r];
            e[k] = 1;
            bar_y.project(&ctx.to_y(&e))
        })
        .collect::<Result<Vec<_>>>()?;
    let w = weil_table(&ctx.sd, psi)?;
    let omega = Trivializer { ctx: ctx.clone(), kappa: kappa.clone(), psi: *psi, w, bar_of_basis };
    let minus_one: FieldElement = ctx.sd.field.minus_one();
    let conj = Trivializer { w: weil_table(&ctx.sd, &psi.twisted(&minus_one))?, ..omega.clone() };
    let inverse = omega.inverse();

    let pts = ctx.window_points();
    let g = ctx.group_size();
    let e = ctx.identity();
    let one = GaussInt::ONE;
    let zero = vec![0; r];

    let mut triv1 = sweep("Triv1", pts.len(), |i| {
        let mut t = Tally::default();
        t.check(omega.value(&pts[i], e) == one, || format!("omega({:?})(1) != 1", pts[i]));
        t.finish()
    });
    for a in 0..g {
        triv1.checked += 1;
        if omega.value(&zero, a) != one {
            triv1.failures += 1;
            triv1.witness.get_or_insert_with(|| "omega(0) != 1".into());
        }
    }
    let triv2 = sweep("Triv2", pts.len(), |i| {
        let mut t = Tally::default();
        let u = &pts[i];
        for v in pts {
            let uv = add(u, v);
            for a in 0..g {
                let ok = omega.value(&uv, a) == omega.value(u, a) * omega.value(v, a) * chi.value(u, v, a);
                t.check(ok, || format!("Triv2 fails at {u:?}, {v:?}, {}", ctx.group_label(a)));
            }
        }
        t.finish()
    });
    let tau = TauCocycle { ctx: ctx.clone() };
    let triv3 = sweep("Triv3", pts.len(), |i| {
        let mut t = Tally::default();
        let y = &pts[i];
        for a in 0..g {
            for b in 0..g {
                let ok = omega.value(y, a) * omega.value(y, b) == omega.value(y, ctx.gmul(a, b)) * tau.value(y, a, b);
                t.check(ok, || format!("Triv3 fails at {y:?}"));
            }
        }
        t.finish()
    });
    let inv = sweep("Triv-inverse", pts.len(), |i| {
        let mut t = Tally::default();
        let y = &pts[i];
        for a in 0..g {
            t.check(omega.value(y, a) * inverse.value(y, a) == one, || format!("-kappa is not inverse at {y:?}"));
            t.check(inverse.value(y, a) == conj.value(y, a), || format!("-kappa != conjugate psi at {y:?}"));
        }
        t.finish()
    });
    Ok((omega, vec![triv1, triv2, triv3, inv]))
}
