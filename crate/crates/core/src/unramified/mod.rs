//! Unramified parameters on the torus model, the central shift `z_Q(v)`,
//! conductor-parity dependence and the quadratic `gamma` identity.
//!
//! Everything here needs `n = 2` over `Q_p` with `p` odd: Weil indices and
//! tetractors live on quadratic data, and the unit/uniformizer split of the
//! symbol datum plays the role of inertia and Frobenius.

use std::collections::{BTreeMap, BTreeSet};

use crate::bisector::{Bisector, Tetractor};
use crate::error::{Error, Result};
use crate::exactalg::{window_points, FinAbGroup, GaussInt, MuElem};
use crate::localfield::{hilbert2, weil_table, AdditiveCharacter, FieldElement, FieldModel};
use crate::metaplectic::{center_characters, BarY, ModifiedRootDatum};
use crate::torusparams::{MetaTorusModel, ParamFunction};

/// Lattice vectors (basis coordinates) on which verdicts and tables are
/// evaluated. The twisted composite is a character of the lattice, so the
/// unit cube already contains a basis.
const RADIUS: i64 = 1;

fn require_odd_padic(field: &FieldModel) -> Result<i64> {
    match field.residue_prime() {
        Some(p) if p % 2 == 1 => Ok(p),
        _ => Err(Error::UnsupportedField(format!("{} needs an odd residue characteristic", field.label()))),
    }
}

fn require_quadratic(model: &MetaTorusModel) -> Result<i64> {
    if model.n() != 2 {
        return Err(Error::Precondition(format!("unramified data needs n = 2, got {}", model.n())));
    }
    require_odd_padic(&model.sd.field)
}

fn to_y(model: &MetaTorusModel, y: &[i64]) -> Vec<i64> {
    let r = model.rank();
    (0..r).map(|j| (0..r).map(|i| y[i] * model.basis[i][j]).sum()).collect()
}

fn kappa_at(model: &MetaTorusModel, bar: &BarY, kappa: &Tetractor, y: &[i64]) -> Result<i64> {
    Ok(kappa.at(bar, &to_y(model, y))? as i64)
}

fn as_mu(model: &MetaTorusModel, w: GaussInt) -> Result<MuElem> {
    MuElem::from_gauss(model.character_order(), w)
        .ok_or_else(|| Error::Precondition(format!("{w} is not a fourth root of unity in mu_{}", model.character_order())))
}

/// `w(u, psi)` for every class of the model's `M`.
fn weil_values(model: &MetaTorusModel, psi: &AdditiveCharacter) -> Result<Vec<GaussInt>> {
    let table = weil_table(&model.sd, psi)?;
    Ok((0..model.m_size()).map(|u| table[model.symbol_index(u)]).collect())
}

/// `w(gamma, psi)^kappa(y) * phi(y; gamma)` for a class index `gamma`.
fn composite(
    model: &MetaTorusModel,
    bar: &BarY,
    weil: &[GaussInt],
    phi: &ParamFunction,
    kappa: &Tetractor,
    y: &[i64],
    gamma: usize,
) -> Result<MuElem> {
    let w = as_mu(model, weil[gamma])?;
    Ok(w.pow(kappa_at(model, bar, kappa, y)?).mul(phi.value(model, y, gamma)))
}

/// Whether the twisted composite is trivial on every unit class.
pub fn is_unramified(
    model: &MetaTorusModel,
    bar: &BarY,
    phi: &ParamFunction,
    psi: &AdditiveCharacter,
    kappa: &Tetractor,
) -> Result<bool> {
    require_quadratic(model)?;
    let weil = weil_values(model, psi)?;
    for y in window_points(model.rank(), RADIUS) {
        for gamma in 0..model.m_size() {
            if model.is_unit_class(gamma) && !composite(model, bar, &weil, phi, kappa, &y, gamma)?.is_one() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The Frobenius image `y -> w(pi, psi)^kappa(y) * phi(y; pi)` of an
/// unramified parameter, tabulated on the unit cube (lexicographic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedParameter {
    pub phi: ParamFunction,
    pub table: Vec<(Vec<i64>, MuElem)>,
    /// Whether the table is additive on the cube, as a character must be.
    pub is_character: bool,
}

impl UnramifiedParameter {
    pub fn value(&self, y: &[i64]) -> Option<MuElem> {
        self.table.iter().find(|(v, _)| v == y).map(|(_, g)| *g)
    }

    /// Values as Gaussian integers, when they lie in `mu_4`.
    pub fn gauss_table(&self) -> Vec<(Vec<i64>, Option<GaussInt>)> {
        self.table.iter().map(|(y, g)| (y.clone(), g.to_gauss())).collect()
    }
}

pub fn frobenius_image(
    model: &MetaTorusModel,
    bar: &BarY,
    phi: &ParamFunction,
    psi: &AdditiveCharacter,
    kappa: &Tetractor,
) -> Result<UnramifiedParameter> {
    if !is_unramified(model, bar, phi, psi, kappa)? {
        return Err(Error::Precondition("parameter is not unramified".into()));
    }
    let weil = weil_values(model, psi)?;
    let pi = model.uniformizer().expect("p-adic field");
    let points = window_points(model.rank(), RADIUS);
    let table = points
        .iter()
        .map(|y| Ok((y.clone(), composite(model, bar, &weil, phi, kappa, y, pi)?)))
        .collect::<Result<Vec<_>>>()?;
    let lookup: BTreeMap<&[i64], MuElem> = table.iter().map(|(y, g)| (y.as_slice(), *g)).collect();
    let is_character = points.iter().all(|a| {
        points.iter().all(|b| {
            let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            lookup.get(s.as_slice()).map_or(true, |&g| g == lookup[a.as_slice()].mul(lookup[b.as_slice()]))
        })
    });
    Ok(UnramifiedParameter { phi: phi.clone(), table, is_character })
}

/// Checks that `(conj phi, -kappa)` is unramified with Frobenius image the
/// conjugate of that of `(phi, kappa)`. When `phi` is real at the uniformizer
/// this says that `kappa -> -kappa` conjugates the image.
pub fn negated_kappa_check(
    model: &MetaTorusModel,
    bar: &BarY,
    phi: &ParamFunction,
    psi: &AdditiveCharacter,
    kappa: &Tetractor,
) -> Result<bool> {
    let g = frobenius_image(model, bar, phi, psi, kappa)?;
    let conj = phi.conjugate();
    let minus = kappa.negated();
    if !is_unramified(model, bar, &conj, psi, &minus)? {
        return Ok(false);
    }
    let h = frobenius_image(model, bar, &conj, psi, &minus)?;
    Ok(g.table.iter().zip(&h.table).all(|((_, a), (_, b))| a.inv() == *b))
}

/// Every parameter function of the model that is unramified for `(psi, kappa)`.
pub fn unramified_parameters(
    model: &MetaTorusModel,
    bar: &BarY,
    params: &[ParamFunction],
    psi: &AdditiveCharacter,
    kappa: &Tetractor,
) -> Result<Vec<ParamFunction>> {
    let mut out = Vec::new();
    for phi in params {
        if is_unramified(model, bar, phi, psi, kappa)? {
            out.push(phi.clone());
        }
    }
    Ok(out)
}

/// `Leg(v)` for a unit `v`, read off as `(v, p)_2`.
fn unit_legendre(v: &FieldElement, field: &FieldModel) -> Result<i64> {
    require_odd_padic(field)?;
    if v.valuation() != 0 {
        return Err(Error::Precondition(format!("{v} is not a unit")));
    }
    hilbert2(v, &field.uniformizer().expect("p-adic field"), field)
}

/// The central element `y -> Leg(v)^Q(y)` on the character group of the
/// center, given on generator lifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralShift {
    pub legendre: i64,
    pub group: FinAbGroup,
    pub values: Vec<i64>,
    /// Triviality on every modified coroot.
    pub well_defined: bool,
}

pub fn central_shift(md: &ModifiedRootDatum, v: &FieldElement, field: &FieldModel) -> Result<CentralShift> {
    let leg = unit_legendre(v, field)?;
    let centre = center_characters(md)?;
    let pow = |y: &[i64]| if leg == 1 { 1 } else { GaussInt::sign(md.q.value(y)).re };
    Ok(CentralShift {
        legendre: leg,
        group: centre.group.clone(),
        values: centre.generator_lifts().iter().map(|l| pow(l)).collect(),
        well_defined: md.coroots_in_y.iter().all(|a| pow(a) == 1),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftReport {
    pub legendre: i64,
    pub checked: u64,
    pub failures: u64,
    pub witness: Option<String>,
    /// Verdict for the shifted character, which must again be unramified.
    pub shifted_unramified: bool,
}

impl ShiftReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.shifted_unramified
    }
}

/// Compares the Frobenius images for `psi` and `^v psi` against
/// `z_Q(v)(y) = Leg(v)^Q(y)`, together with `kappa(y) = Q(y) mod 2`.
pub fn shift_theorem_check(
    model: &MetaTorusModel,
    bar: &BarY,
    phi: &ParamFunction,
    psi: &AdditiveCharacter,
    v: &FieldElement,
    kappa: &Tetractor,
) -> Result<ShiftReport> {
    let leg = unit_legendre(v, &model.sd.field)?;
    let g = frobenius_image(model, bar, phi, psi, kappa)?;
    let shifted = psi.twisted(v);
    let mut rep = ShiftReport { legendre: leg, checked: 0, failures: 0, witness: None, shifted_unramified: false };
    if !is_unramified(model, bar, phi, &shifted, kappa)? {
        rep.witness = Some("shifted parameter is ramified".into());
        return Ok(rep);
    }
    rep.shifted_unramified = true;
    let g2 = frobenius_image(model, bar, phi, &shifted, kappa)?;
    let m = model.character_order();
    for ((y, a), (_, b)) in g.table.iter().zip(&g2.table) {
        let q = model.form_value(y);
        let z = MuElem::sign(m, if leg == 1 { 0 } else { q });
        let parity_ok = (kappa_at(model, bar, kappa, y)? - q).rem_euclid(2) == 0;
        for ok in [*b == z.mul(*a), parity_ok] {
            rep.checked += 1;
            if !ok {
                rep.failures += 1;
                rep.witness.get_or_insert_with(|| format!("y={y:?}: g={a} g'={b} Leg={leg}"));
            }
        }
    }
    Ok(rep)
}

/// One additive character of the conductor sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiVerdict {
    pub conductor: i64,
    pub unit: i64,
    pub unramified: bool,
    pub w_pi: GaussInt,
    pub frobenius: Option<Vec<MuElem>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConductorReport {
    pub verdicts: Vec<PsiVerdict>,
    /// Verdicts seen for even and odd conductors. Agreement across the two
    /// parities is recorded, not required.
    pub by_parity: [BTreeSet<bool>; 2],
    /// Characters with equal `w(pi, psi)` give equal Frobenius images.
    pub frobenius_consistent: bool,
    pub witness: Option<String>,
}

impl ConductorReport {
    pub fn passed(&self) -> bool {
        self.by_parity.iter().all(|s| s.len() <= 1) && self.frobenius_consistent
    }
}

/// Sweeps `psi = ^c psi_0` over `c = p^a u` with `a` in `0..4` and `u`
/// running through `1..p` and `1 + p`.
pub fn conductor_dependence_check(
    model: &MetaTorusModel,
    bar: &BarY,
    phi: &ParamFunction,
    kappa: &Tetractor,
) -> Result<ConductorReport> {
    let p = require_quadratic(model)?;
    let field = model.sd.field;
    let psi0 = AdditiveCharacter::reference(&field);
    let pi = field.uniformizer().expect("p-adic field");
    let units: Vec<i64> = (1..p).chain([1 + p]).collect();
    let mut verdicts = Vec::new();
    for a in 0..4 {
        for &u in &units {
            let c = field.element(a, u)?;
            let psi = psi0.twisted(&c);
            let unramified = is_unramified(model, bar, phi, &psi, kappa)?;
            let frobenius = if unramified {
                Some(frobenius_image(model, bar, phi, &psi, kappa)?.table.into_iter().map(|(_, g)| g).collect())
            } else {
                None
            };
            let w_pi = crate::localfield::weil_index(&pi, &psi, &field)?;
            verdicts.push(PsiVerdict { conductor: a, unit: u, unramified, w_pi, frobenius });
        }
    }
    let mut by_parity = [BTreeSet::new(), BTreeSet::new()];
    let mut by_w: BTreeMap<GaussInt, &Vec<MuElem>> = BTreeMap::new();
    let mut witness = None;
    let mut frobenius_consistent = true;
    for v in &verdicts {
        by_parity[(v.conductor % 2) as usize].insert(v.unramified);
        if let Some(g) = &v.frobenius {
            if *by_w.entry(v.w_pi).or_insert(g) != g {
                frobenius_consistent = false;
                witness.get_or_insert_with(|| format!("conductor {} unit {}: Frobenius image differs", v.conductor, v.unit));
            }
        }
    }
    for (parity, seen) in by_parity.iter().enumerate() {
        if seen.len() > 1 {
            witness.get_or_insert_with(|| format!("verdict varies within conductor parity {parity}"));
        }
    }
    Ok(ConductorReport { verdicts, by_parity, frobenius_consistent, witness })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SavinReport {
    /// `gamma` on every element of `BarY`, in lexicographic order.
    pub gamma: Vec<(Vec<i64>, GaussInt)>,
    pub checked: u64,
    pub failures: u64,
    pub witness: Option<String>,
}

impl SavinReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `gamma(y) = w_pi^kappa(y)` on `BarY`, checked against
/// `gamma(y1) gamma(y2) = hilb_pp^C(y1, y2) gamma(y1 + y2)` on all pairs.
/// `hilb_pp` is `Hilb_2(pi, pi)`; `w_pi` must square to it.
pub fn savin_gamma(
    kappa: &Tetractor,
    bar: &BarY,
    c: &Bisector,
    w_pi: GaussInt,
    hilb_pp: i64,
) -> Result<SavinReport> {
    if bar.n_odd {
        return Err(Error::Precondition("the gamma function needs n = 2".into()));
    }
    if hilb_pp.abs() != 1 || w_pi * w_pi != GaussInt::new(hilb_pp, 0) {
        return Err(Error::Precondition(format!("{w_pi} does not square to {hilb_pp}")));
    }
    let group = bar.group();
    let elems = group.elements();
    let lifts = bar.generator_lifts();
    let r = c.rank();
    let lift = |e: &[i64]| -> Vec<i64> {
        (0..r).map(|j| e.iter().zip(lifts).map(|(k, l)| k * l[j]).sum()).collect()
    };
    let gamma = |e: &[i64]| w_pi.pow(kappa.value(e) as i64);
    let mut rep = SavinReport {
        gamma: elems.iter().map(|e| (e.clone(), gamma(e))).collect(),
        checked: 0,
        failures: 0,
        witness: None,
    };
    for a in &elems {
        for b in &elems {
            let sign = GaussInt::sign(if hilb_pp == 1 { 0 } else { c.eval(&lift(a), &lift(b)) as i64 });
            let ok = gamma(a) * gamma(b) == sign * gamma(&group.add(a, b));
            rep.checked += 1;
            if !ok {
                rep.failures += 1;
                rep.witness.get_or_insert_with(|| format!("{a:?} {b:?}"));
            }
        }
    }
    Ok(rep)
}
