use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{add, neg, sweep, ChiCocycle, SuiteReport, Tally, TauCocycle, Trivializer, TwistContext};
use crate::bisector::{descends_to_bar_y, BisectorMorphism};
use crate::error::{Error, Result};
use crate::exactalg::{window_points, GaussInt};

/// Basis element `delta_g (x) y`: group element index and `Y~` coordinates.
pub type Key = (usize, Vec<i64>);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HopfElement(pub BTreeMap<Key, GaussInt>);

impl HopfElement {
    pub fn basis(g: usize, y: Vec<i64>) -> Self {
        HopfElement(BTreeMap::from([((g, y), GaussInt::ONE)]))
    }

    pub fn add_term(&mut self, key: Key, c: GaussInt) {
        add_entry(&mut self.0, key, c);
    }
}

/// An element of the tensor square.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorElement(pub BTreeMap<(Key, Key), GaussInt>);

impl TensorElement {
    fn add_term(&mut self, key: (Key, Key), c: GaussInt) {
        add_entry(&mut self.0, key, c);
    }
}

type Tensor3 = BTreeMap<(Key, Key, Key), GaussInt>;

fn add3(t: &mut Tensor3, key: (Key, Key, Key), c: GaussInt) {
    add_entry(t, key, c);
}

fn add_entry<K: Ord>(map: &mut BTreeMap<K, GaussInt>, key: K, c: GaussInt) {
    match map.entry(key) {
        Entry::Occupied(mut e) => {
            let v = *e.get() + c;
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
    }
}

/// `O(A) (x) Z[i][Y~]` with multiplication twisted by `chi` and
/// comultiplication twisted by `tau` (either may be absent).
#[derive(Clone, Debug)]
pub struct ToralTwistedHopf {
    pub ctx: Arc<TwistContext>,
    tau: bool,
    chi: Option<ChiCocycle>,
}

impl ToralTwistedHopf {
    pub fn untwisted(ctx: &Arc<TwistContext>) -> Self {
        ToralTwistedHopf { ctx: ctx.clone(), tau: false, chi: None }
    }

    pub fn twisted(tau: &TauCocycle, chi: &ChiCocycle) -> Self {
        ToralTwistedHopf { ctx: tau.ctx.clone(), tau: true, chi: Some(chi.clone()) }
    }

    fn chi_val(&self, u: &[i64], v: &[i64], g: usize) -> GaussInt {
        self.chi.as_ref().map_or(GaussInt::ONE, |c| c.value(u, v, g))
    }

    fn tau_val(&self, y: &[i64], a: usize, b: usize) -> GaussInt {
        if self.tau {
            self.ctx.h_pow(a, b, self.ctx.q().value(y))
        } else {
            GaussInt::ONE
        }
    }

    pub fn unit(&self) -> HopfElement {
        let zero = vec![0; self.ctx.rank()];
        let mut out = HopfElement::default();
        for g in 0..self.ctx.group_size() {
            out.add_term((g, zero.clone()), GaussInt::ONE);
        }
        out
    }

    fn mul_basis(&self, a: &Key, b: &Key) -> Result<Option<(Key, GaussInt)>> {
        if a.0 != b.0 {
            return Ok(None);
        }
        let y = add(&a.1, &b.1);
        self.ctx.check_window(&y)?;
        Ok(Some(((a.0, y), self.chi_val(&a.1, &b.1, a.0))))
    }

    pub fn multiply(&self, x: &HopfElement, z: &HopfElement) -> Result<HopfElement> {
        let mut out = HopfElement::default();
        for (ka, ca) in &x.0 {
            for (kb, cb) in &z.0 {
                if let Some((k, s)) = self.mul_basis(ka, kb)? {
                    out.add_term(k, *ca * *cb * s);
                }
            }
        }
        Ok(out)
    }

    fn comul_basis(&self, key: &Key) -> Vec<((Key, Key), GaussInt)> {
        let (g, y) = key;
        (0..self.ctx.group_size())
            .map(|a| {
                let b = self.ctx.gmul(self.ctx.ginv(a), *g);
                (((a, y.clone()), (b, y.clone())), self.tau_val(y, a, b))
            })
            .collect()
    }

    pub fn comultiply(&self, x: &HopfElement) -> TensorElement {
        let mut out = TensorElement::default();
        for (k, c) in &x.0 {
            for (kk, s) in self.comul_basis(k) {
                out.add_term(kk, *c * s);
            }
        }
        out
    }

    pub fn counit(&self, x: &HopfElement) -> GaussInt {
        x.0.iter().filter(|(k, _)| k.0 == self.ctx.identity()).map(|(_, c)| *c).sum()
    }

    /// `S(delta_g (x) y) = s delta_{g^-1} (x) (-y)` with the scalar fixed by
    /// `m (S (x) id) Delta = unit * counit`.
    pub fn antipode(&self, x: &HopfElement) -> HopfElement {
        let mut out = HopfElement::default();
        for ((g, y), c) in &x.0 {
            let gi = self.ctx.ginv(*g);
            let s = (self.tau_val(y, *g, gi) * self.chi_val(&neg(y), y, gi)).unit_inv();
            out.add_term((gi, neg(y)), *c * s);
        }
        out
    }

    pub fn multiply_tensor(&self, x: &TensorElement, z: &TensorElement) -> Result<TensorElement> {
        let mut out = TensorElement::default();
        for ((a1, a2), ca) in &x.0 {
            for ((b1, b2), cb) in &z.0 {
                if let (Some((k1, s1)), Some((k2, s2))) = (self.mul_basis(a1, b1)?, self.mul_basis(a2, b2)?) {
                    out.add_term((k1, k2), *ca * *cb * s1 * s2);
                }
            }
        }
        Ok(out)
    }

    fn basis_sample(&self, radius: i64) -> Result<Vec<Key>> {
        if radius < 1 || 3 * radius > self.ctx.window {
            return Err(Error::Config(format!(
                "sample radius {radius} needs a window of at least {}",
                3 * radius.max(1)
            )));
        }
        let pts = window_points(self.ctx.rank(), radius);
        Ok((0..self.ctx.group_size()).flat_map(|g| pts.iter().map(move |y| (g, y.clone()))).collect())
    }

    fn m_after(&self, t: &TensorElement, left: bool) -> Result<HopfElement> {
        let mut out = HopfElement::default();
        for ((k1, k2), c) in &t.0 {
            let (a, b) = if left {
                (self.antipode(&HopfElement::basis(k1.0, k1.1.clone())), HopfElement::basis(k2.0, k2.1.clone()))
            } else {
                (HopfElement::basis(k1.0, k1.1.clone()), self.antipode(&HopfElement::basis(k2.0, k2.1.clone())))
            };
            for (k, v) in self.multiply(&a, &b)?.0 {
                out.add_term(k, *c * v);
            }
        }
        Ok(out)
    }

    fn coassoc(&self, k: &Key) -> (Tensor3, Tensor3) {
        let mut left = Tensor3::new();
        let mut right = Tensor3::new();
        for ((a, b), c) in self.comul_basis(k) {
            for ((a1, a2), c1) in self.comul_basis(&a) {
                add3(&mut left, (a1, a2, b.clone()), c * c1);
            }
            for ((b1, b2), c2) in self.comul_basis(&b) {
                add3(&mut right, (a.clone(), b1, b2), c * c2);
            }
        }
        (left, right)
    }

    /// Checks the Hopf algebra axioms on all basis elements `delta_g (x) y`
    /// with `|y_k| <= radius` (and all pairs and triples of them); the
    /// window must be at least `3 * radius`.
    pub fn verify_axioms(&self, radius: i64) -> Result<Vec<SuiteReport>> {
        let b = self.basis_sample(radius)?;
        let el = |k: &Key| HopfElement::basis(k.0, k.1.clone());
        let unit = self.unit();
        let show = |k: &Key| format!("{}(x){:?}", self.ctx.group_label(k.0), k.1);

        let assoc = sweep("associativity", b.len(), |i| {
            let mut t = Tally::default();
            let x = el(&b[i]);
            for j in &b {
                let y = el(j);
                let xy = self.multiply(&x, &y);
                for k in &b {
                    let z = el(k);
                    let lhs = xy.as_ref().ok().and_then(|xy| self.multiply(xy, &z).ok());
                    let rhs = self.multiply(&y, &z).ok().and_then(|yz| self.multiply(&x, &yz).ok());
                    t.check(lhs.is_some() && lhs == rhs, || format!("({}, {}, {})", show(&b[i]), show(j), show(k)));
                }
            }
            t.finish()
        });
        let commutative = sweep("commutativity", b.len(), |i| {
            let mut t = Tally::default();
            let x = el(&b[i]);
            for j in &b {
                let y = el(j);
                let ok = matches!((self.multiply(&x, &y), self.multiply(&y, &x)), (Ok(p), Ok(q)) if p == q);
                t.check(ok, || format!("({}, {})", show(&b[i]), show(j)));
            }
            t.finish()
        });
        let unit_law = sweep("unit", b.len(), |i| {
            let mut t = Tally::default();
            let x = el(&b[i]);
            let ok = self.multiply(&unit, &x).ok() == Some(x.clone()) && self.counit(&unit) == GaussInt::ONE;
            t.check(ok, || show(&b[i]));
            t.finish()
        });
        let coassoc = sweep("coassociativity", b.len(), |i| {
            let mut t = Tally::default();
            let (l, r) = self.coassoc(&b[i]);
            t.check(l == r, || show(&b[i]));
            t.finish()
        });
        let counit = sweep("counit", b.len(), |i| {
            let mut t = Tally::default();
            let x = el(&b[i]);
            let d = self.comultiply(&x);
            let mut left = HopfElement::default();
            let mut right = HopfElement::default();
            for ((k1, k2), c) in &d.0 {
                if k1.0 == self.ctx.identity() {
                    left.add_term(k2.clone(), *c);
                }
                if k2.0 == self.ctx.identity() {
                    right.add_term(k1.clone(), *c);
                }
            }
            t.check(left == x && right == x, || show(&b[i]));
            t.finish()
        });
        let bialgebra = sweep("bialgebra", b.len(), |i| {
            let mut t = Tally::default();
            let x = el(&b[i]);
            for j in &b {
                let y = el(j);
                let ok = match self.multiply(&x, &y) {
                    Ok(xy) => {
                        let lhs = self.comultiply(&xy);
                        let rhs = self.multiply_tensor(&self.comultiply(&x), &self.comultiply(&y));
                        rhs.ok() == Some(lhs) && self.counit(&xy) == self.counit(&x) * self.counit(&y)
                    }
                    Err(_) => false,
                };
                t.check(ok, || format!("({}, {})", show(&b[i]), show(j)));
            }
            t.finish()
        });
        let antipode = sweep("antipode", b.len(), |i| {
            let mut t = Tally::default();
            let x = el(&b[i]);
            let d = self.comultiply(&x);
            let mut expected = HopfElement::default();
            let e = self.counit(&x);
            for (k, c) in &unit.0 {
                expected.add_term(k.clone(), *c * e);
            }
            let ok = self.m_after(&d, true).ok() == Some(expected.clone())
                && self.m_after(&d, false).ok() == Some(expected);
            t.check(ok, || show(&b[i]));
            t.finish()
        });
        Ok(vec![assoc, commutative, unit_law, coassoc, counit, bialgebra, antipode])
    }

    /// Compares products and coproducts of basis elements with another
    /// algebra on the same context.
    pub fn same_tables(&self, other: &ToralTwistedHopf, radius: i64) -> Result<SuiteReport> {
        let b = self.basis_sample(radius)?;
        Ok(sweep("tables", b.len(), |i| {
            let mut t = Tally::default();
            let x = HopfElement::basis(b[i].0, b[i].1.clone());
            t.check(self.comultiply(&x) == other.comultiply(&x), || format!("coproduct of {:?}", b[i]));
            for k in &b {
                let y = HopfElement::basis(k.0, k.1.clone());
                t.check(self.multiply(&x, &y).ok() == other.multiply(&x, &y).ok(), || {
                    format!("product of {:?} and {k:?}", b[i])
                });
            }
            t.finish()
        }))
    }
}

type Scalar = Arc<dyn Fn(usize, &[i64]) -> GaussInt + Send + Sync>;

/// A linear map `delta_g (x) y -> lambda(g, y) delta_g (x) y`.
#[derive(Clone)]
pub struct DiagonalMap {
    pub name: String,
    lambda: Scalar,
}

impl fmt::Debug for DiagonalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiagonalMap({})", self.name)
    }
}

impl DiagonalMap {
    pub fn new(name: &str, lambda: impl Fn(usize, &[i64]) -> GaussInt + Send + Sync + 'static) -> Self {
        DiagonalMap { name: name.to_string(), lambda: Arc::new(lambda) }
    }

    pub fn scalar(&self, g: usize, y: &[i64]) -> GaussInt {
        (self.lambda)(g, y)
    }

    pub fn apply(&self, x: &HopfElement) -> HopfElement {
        let mut out = HopfElement::default();
        for ((g, y), c) in &x.0 {
            out.add_term((*g, y.clone()), *c * self.scalar(*g, y));
        }
        out
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &DiagonalMap) -> DiagonalMap {
        let (a, b) = (self.lambda.clone(), other.lambda.clone());
        DiagonalMap {
            name: format!("{} o {}", self.name, other.name),
            lambda: Arc::new(move |g, y| a(g, y) * b(g, y)),
        }
    }
}

/// Change of bisector: `delta_g (x) y -> h(g, g)^{H(y)} delta_g (x) y`.
pub fn alpha_h(h: &BisectorMorphism, ctx: &Arc<TwistContext>) -> Result<DiagonalMap> {
    if !descends_to_bar_y(h, &ctx.md) {
        return Err(Error::Precondition("H is not invariant under the modified coroots".into()));
    }
    let (h, c) = (h.clone(), ctx.clone());
    Ok(DiagonalMap::new("alpha_H", move |g, y| c.h_pow(g, g, h.eval(&c.to_y(y)) as i64)))
}

/// The constant-sign variant `delta_g (x) y -> (-1)^{H(y)} delta_g (x) y`,
/// kept to show that it is not comultiplicative.
pub fn sign_only_alpha_h(h: &BisectorMorphism, ctx: &Arc<TwistContext>) -> DiagonalMap {
    let (h, c) = (h.clone(), ctx.clone());
    DiagonalMap::new("sign-only alpha_H", move |_, y| GaussInt::sign(h.eval(&c.to_y(y)) as i64))
}

/// `delta_g (x) y -> omega(y)(g) delta_g (x) y`, from the untwisted algebra
/// to the twisted one.
pub fn alpha_omega(omega: &Trivializer) -> DiagonalMap {
    let w = omega.clone();
    DiagonalMap::new("alpha_omega", move |g, y| w.value(y, g))
}

/// Checks that a diagonal map is a bialgebra isomorphism `src -> dst` on
/// basis elements of the given radius (pairs for products).
pub fn verify_diagonal_morphism(
    map: &DiagonalMap,
    src: &ToralTwistedHopf,
    dst: &ToralTwistedHopf,
    radius: i64,
) -> Result<Vec<SuiteReport>> {
    let b = src.basis_sample(radius)?;
    let el = |k: &Key| HopfElement::basis(k.0, k.1.clone());
    let mult = sweep("multiplicative", b.len(), |i| {
        let mut t = Tally::default();
        let x = el(&b[i]);
        for j in &b {
            let y = el(j);
            let lhs = src.multiply(&x, &y).map(|p| map.apply(&p)).ok();
            let rhs = dst.multiply(&map.apply(&x), &map.apply(&y)).ok();
            t.check(lhs.is_some() && lhs == rhs, || format!("{:?} * {j:?}", b[i]));
        }
        t.finish()
    });
    let comult = sweep("comultiplicative", b.len(), |i| {
        let mut t = Tally::default();
        let x = el(&b[i]);
        let lhs = dst.comultiply(&map.apply(&x));
        let mut rhs = TensorElement::default();
        for ((k1, k2), c) in src.comultiply(&x).0 {
            let s = map.scalar(k1.0, &k1.1) * map.scalar(k2.0, &k2.1);
            rhs.add_term((k1, k2), c * s);
        }
        t.check(lhs == rhs, || format!("{:?}", b[i]));
        t.finish()
    });
    let units = sweep("unit-counit", b.len(), |i| {
        let mut t = Tally::default();
        let x = el(&b[i]);
        let s = map.scalar(b[i].0, &b[i].1);
        t.check(dst.counit(&map.apply(&x)) == src.counit(&x) && s.is_unit(), || format!("{:?}", b[i]));
        t.finish()
    });
    let mut units = units;
    units.checked += 1;
    if map.apply(&src.unit()) != dst.unit() {
        units.failures += 1;
        units.witness.get_or_insert_with(|| "unit not preserved".into());
    }
    Ok(vec![mult, comult, units])
}
