use std::collections::{BTreeMap, BTreeSet};

use super::{record, CoverElement, MetaTorusModel};
use crate::error::{Error, Result};
use crate::exactalg::{gcd, window_points, MuElem};
use crate::twisthopf::SuiteReport;

/// Largest number of characters or parameter functions we enumerate.
pub const MAX_ENUMERATION: usize = 1 << 16;

/// A homomorphism from the cover to `mu_m` restricting to
/// `zeta -> zeta^epsilon` on `mu_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GenuineCharacter {
    pub epsilon: i64,
    /// Values on the generators `b_i(g_k)`, basis-major.
    pub generator_values: Vec<MuElem>,
    table: Vec<MuElem>,
}

impl GenuineCharacter {
    /// Values indexed by [`MetaTorusModel::index`].
    pub fn table(&self) -> &[MuElem] {
        &self.table
    }

    pub fn value(&self, model: &MetaTorusModel, x: &CoverElement) -> MuElem {
        self.table[model.index(x)]
    }

    /// The pointwise inverse, genuine for the conjugate embedding.
    pub fn conjugate(&self) -> GenuineCharacter {
        GenuineCharacter {
            epsilon: -self.epsilon,
            generator_values: self.generator_values.iter().map(|v| v.inv()).collect(),
            table: self.table.iter().map(|v| v.inv()).collect(),
        }
    }
}

fn embed(model: &MetaTorusModel, epsilon: i64, zeta: i64) -> MuElem {
    let m = model.character_order();
    MuElem::new(m, epsilon * zeta * (m / model.n()) as i64)
}

fn is_homomorphism(model: &MetaTorusModel, table: &[MuElem], epsilon: i64) -> bool {
    let elems = model.elements();
    let gens: Vec<CoverElement> = model.generators().into_iter().map(|g| g.3).collect();
    let centre_ok = (0..model.n()).all(|z| table[model.index(&model.central(z))] == embed(model, epsilon, z as i64));
    centre_ok
        && elems.iter().all(|x| {
            let vx = table[model.index(x)];
            gens.iter().all(|g| table[model.index(&model.multiply(x, g))] == vx.mul(table[model.index(g)]))
        })
}

/// All genuine characters for `zeta -> zeta^epsilon`, by solving the power
/// relation `g^order = zeta_g` at each generator and extending along normal
/// forms. Every candidate is checked to be a homomorphism; the generator
/// check suffices since the cover is generated by them and `mu_n`.
pub fn genuine_characters(model: &MetaTorusModel, epsilon: i64) -> Result<Vec<GenuineCharacter>> {
    let (n, m) = (model.n() as i64, model.character_order() as i64);
    if gcd(epsilon, n) != 1 {
        return Err(Error::Precondition(format!("epsilon exponent {epsilon} is not a unit mod {n}")));
    }
    let gens = model.generators();
    let mut choices: Vec<Vec<MuElem>> = Vec::new();
    for (_, _, order, g) in &gens {
        let p = model.power(g, *order as u64);
        if !model.is_central_element(&p) {
            return Err(Error::Precondition("generator power is not central".into()));
        }
        let target = embed(model, epsilon, p.zeta as i64);
        choices.push(
            (0..m)
                .map(|j| MuElem::new(m as u32, j))
                .filter(|v| v.pow(*order) == target)
                .collect(),
        );
    }
    let total: u128 = choices.iter().map(|c| c.len() as u128).product();
    if total > MAX_ENUMERATION as u128 {
        return Err(Error::Config(format!("{total} candidate characters exceed {MAX_ENUMERATION}")));
    }

    // Word for each normal form t: prod_i prod_k gen(i,k)^{a_ik}, and its
    // central discrepancy.
    let classes: Vec<CoverElement> = model.elements().into_iter().filter(|x| x.zeta == 0).collect();
    let ngen = model.m_generators().len();
    let words: Vec<(Vec<i64>, u32)> = classes
        .iter()
        .map(|x| {
            let exps: Vec<i64> = x.t.iter().flat_map(|&u| model.m_coords(u).to_vec()).collect();
            let w = gens
                .iter()
                .zip(&exps)
                .fold(model.identity(), |acc, (g, &a)| model.multiply(&acc, &model.power(&g.3, a as u64)));
            debug_assert_eq!(w.t, x.t);
            (exps, w.zeta)
        })
        .collect();
    debug_assert_eq!(words.first().map_or(0, |w| w.0.len()), model.rank() * ngen);

    let mut out = Vec::new();
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(out);
    }
    let mut pick = vec![0usize; choices.len()];
    loop {
        let values: Vec<MuElem> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        let mut table = vec![MuElem::one(m as u32); model.size()];
        for (x, (exps, wz)) in classes.iter().zip(&words) {
            let base = values.iter().zip(exps).fold(MuElem::one(m as u32), |acc, (v, &a)| acc.mul(v.pow(a)));
            for z in 0..model.n() {
                let el = CoverElement { t: x.t.clone(), zeta: z };
                table[model.index(&el)] = base.mul(embed(model, epsilon, z as i64 - *wz as i64));
            }
        }
        if is_homomorphism(model, &table, epsilon) {
            out.push(GenuineCharacter { epsilon, generator_values: values, table });
        }
        // Advance the mixed-radix counter.
        let mut k = pick.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
        }
    }
}

/// A parameter function, stored by its tables `u -> phi(b_i; u)` on the
/// basis. Other lattice vectors follow from the sum condition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ParamFunction {
    pub tables: Vec<Vec<MuElem>>,
}

impl ParamFunction {
    /// The pointwise complex conjugate, again a parameter function since
    /// every twist factor is a sign.
    pub fn conjugate(&self) -> ParamFunction {
        ParamFunction { tables: self.tables.iter().map(|t| t.iter().map(|v| v.inv()).collect()).collect() }
    }

    /// `phi(y; u)` for `y` in basis coordinates.
    pub fn value(&self, model: &MetaTorusModel, y: &[i64], u: usize) -> MuElem {
        let m = model.character_order();
        let r = model.rank();
        let mut v = MuElem::one(m);
        let mut e = 0i64;
        for i in 0..r {
            v = v.mul(self.tables[i][u].pow(y[i]));
            e += model.bisector_entry(i, i) as i64 * y[i] * (y[i] - 1) / 2;
            for j in i + 1..r {
                e += model.bisector_entry(i, j) as i64 * y[i] * y[j];
            }
        }
        v.mul(embed(model, 1, model.h(u, u) as i64 * e))
    }

    /// The three defining conditions on lattice vectors of the given radius.
    pub fn check(&self, model: &MetaTorusModel, radius: i64) -> SuiteReport {
        let m = model.character_order();
        let one = MuElem::one(m);
        let mut rep = SuiteReport::ok("parameter-conditions", 0);
        let ys = window_points(model.rank(), radius);
        let us = 0..model.m_size();
        let zero = vec![0; model.rank()];
        for u in us.clone() {
            record(&mut rep, self.value(model, &zero, u) == one, || format!("phi(0;{u})"));
        }
        for y in &ys {
            record(&mut rep, self.value(model, y, model.m_zero()) == one, || format!("phi({y:?};1)"));
            let q = model.form_value(y);
            for u1 in us.clone() {
                for u2 in us.clone() {
                    let lhs = self.value(model, y, model.m_add(u1, u2));
                    let rhs = self
                        .value(model, y, u1)
                        .mul(self.value(model, y, u2))
                        .mul(embed(model, 1, model.h(u1, u2) as i64 * q));
                    record(&mut rep, lhs == rhs, || format!("product y={y:?} u=({u1},{u2})"));
                }
            }
            for y2 in &ys {
                let c = model.bisector_value(y, y2) as i64;
                let yy: Vec<i64> = y.iter().zip(y2).map(|(a, b)| a + b).collect();
                for u in us.clone() {
                    let lhs = self.value(model, &yy, u);
                    let rhs = self
                        .value(model, y, u)
                        .mul(self.value(model, y2, u))
                        .mul(embed(model, 1, model.h(u, u) as i64 * c));
                    record(&mut rep, lhs == rhs, || format!("sum y1={y:?} y2={y2:?} u={u}"));
                }
            }
        }
        rep
    }
}

/// All `f: M -> mu_m` with `f(0) = 1` and `f(u1 + u2) = f(u1) f(u2) h(u1, u2)^q`.
/// Values are branched only where no earlier pair determines them; every
/// completed table is checked on all pairs.
fn twisted_tables(model: &MetaTorusModel, q: i64) -> Vec<Vec<MuElem>> {
    let size = model.m_size();
    let m = model.character_order();
    let twist = |a: usize, b: usize| embed(model, 1, model.h(a, b) as i64 * q);
    let valid = |f: &[MuElem]| {
        (0..size).all(|a| (0..size).all(|b| f[model.m_add(a, b)] == f[a].mul(f[b]).mul(twist(a, b))))
    };
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Option<MuElem>>> = vec![{
        let mut f = vec![None; size];
        f[model.m_zero()] = Some(MuElem::one(m));
        f
    }];
    while let Some(f) = stack.pop() {
        let Some(pos) = f.iter().position(Option::is_none) else {
            let table: Vec<MuElem> = f.into_iter().map(Option::unwrap).collect();
            if valid(&table) {
                out.push(table);
            }
            continue;
        };
        let determined = (0..size).find_map(|a| {
            let fa = f[a]?;
            (0..size).find_map(|b| {
                let fb = f[b]?;
                (model.m_add(a, b) == pos).then(|| fa.mul(fb).mul(twist(a, b)))
            })
        });
        match determined {
            Some(v) => {
                let mut g = f;
                g[pos] = Some(v);
                stack.push(g);
            }
            None => {
                for j in (0..m).rev() {
                    let mut g = f.clone();
                    g[pos] = Some(MuElem::new(m, j as i64));
                    stack.push(g);
                }
            }
        }
    }
    out.sort();
    out
}

/// Every parameter function on the model, sorted by tables.
pub fn enumerate_param_functions(model: &MetaTorusModel) -> Result<Vec<ParamFunction>> {
    let per_basis: Vec<Vec<Vec<MuElem>>> = (0..model.rank()).map(|i| twisted_tables(model, model.q_value(i))).collect();
    let total: u128 = per_basis.iter().map(|t| t.len() as u128).product();
    if total > MAX_ENUMERATION as u128 {
        return Err(Error::Config(format!("{total} parameter functions exceed {MAX_ENUMERATION}")));
    }
    let mut out = vec![Vec::new()];
    for tables in &per_basis {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<MuElem>>| {
                tables.iter().map(move |t| {
                    let mut p = prefix.clone();
                    p.push(t.clone());
                    p
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(|tables| ParamFunction { tables }).collect())
}

/// Outcome of matching genuine characters with parameter functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    /// Embedding exponent of the characters. On `Y~` every `h^Q(y)` and
    /// `h(u, u)^C` is a sign (`2Q(y)` lies in `nZ`), so the sign flip between
    /// the relations and the conditions is invisible and `epsilon = zeta`
    /// works on the nose.
    pub epsilon: i64,
    pub characters: usize,
    pub parameters: usize,
    pub forward_misses: usize,
    pub backward_misses: usize,
    pub round_trip_failures: usize,
    pub condition_failures: u64,
    pub witness: Option<String>,
    pub note: String,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.characters == self.parameters
            && self.forward_misses == 0
            && self.backward_misses == 0
            && self.round_trip_failures == 0
            && self.condition_failures == 0
    }
}

pub fn forward(model: &MetaTorusModel, chi: &GenuineCharacter) -> ParamFunction {
    let r = model.rank();
    let tables = (0..r)
        .map(|i| {
            let mut y = vec![0; r];
            y[i] = 1;
            (0..model.m_size()).map(|u| chi.value(model, &model.element(&y, u))).collect()
        })
        .collect();
    ParamFunction { tables }
}

pub fn backward(model: &MetaTorusModel, phi: &ParamFunction, epsilon: i64) -> Vec<MuElem> {
    model
        .elements()
        .iter()
        .map(|x| {
            x.t.iter()
                .enumerate()
                .fold(embed(model, epsilon, x.zeta as i64), |acc, (i, &u)| acc.mul(phi.tables[i][u]))
        })
        .collect()
}

/// Builds both enumerations and checks that `y(u) -> phi(y; u)` and its
/// inverse are mutually inverse bijections. Values live in `mu_m`, so
/// unramified `C^x` directions appear only through the free choice of
/// Frobenius values.
pub fn param_character_bijection(model: &MetaTorusModel) -> Result<BijectionReport> {
    let epsilon = 1;
    let chars = genuine_characters(model, epsilon)?;
    let params = enumerate_param_functions(model)?;
    let char_index: BTreeMap<&[MuElem], usize> = chars.iter().enumerate().map(|(i, c)| (c.table(), i)).collect();
    let param_set: BTreeSet<&ParamFunction> = params.iter().collect();
    let mut rep = BijectionReport {
        epsilon,
        characters: chars.len(),
        parameters: params.len(),
        forward_misses: 0,
        backward_misses: 0,
        round_trip_failures: 0,
        condition_failures: 0,
        witness: None,
        note: format!("values in mu_{}; non-torsion directions are not modelled", model.character_order()),
    };
    let note_witness = |rep: &mut BijectionReport, w: String| {
        if rep.witness.is_none() {
            rep.witness = Some(w);
        }
    };
    let ys = window_points(model.rank(), 1);
    for (k, chi) in chars.iter().enumerate() {
        let phi = forward(model, chi);
        if !param_set.contains(&phi) {
            rep.forward_misses += 1;
            note_witness(&mut rep, format!("character {k} maps outside the parameters"));
        }
        if backward(model, &phi, epsilon) != chi.table() {
            rep.round_trip_failures += 1;
            note_witness(&mut rep, format!("character {k} does not round-trip"));
        }
        for y in &ys {
            for u in 0..model.m_size() {
                if phi.value(model, y, u) != chi.value(model, &model.element(y, u)) {
                    rep.condition_failures += 1;
                    note_witness(&mut rep, format!("character {k}: phi({y:?};{u}) differs"));
                }
            }
        }
    }
    for (k, phi) in params.iter().enumerate() {
        let cond = phi.check(model, 1);
        rep.condition_failures += cond.failures;
        if let Some(w) = cond.witness {
            note_witness(&mut rep, format!("parameter {k}: {w}"));
        }
        let table = backward(model, phi, epsilon);
        match char_index.get(table.as_slice()) {
            None => {
                rep.backward_misses += 1;
                note_witness(&mut rep, format!("parameter {k} gives no genuine character"));
            }
            Some(&i) => {
                if forward(model, &chars[i]) != *phi {
                    rep.round_trip_failures += 1;
                    note_witness(&mut rep, format!("parameter {k} does not round-trip"));
                }
            }
        }
    }
    Ok(rep)
}

/// Central classes of a cover against the image of a sublattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterReport {
    pub classes: usize,
    pub central: usize,
    pub image: usize,
    pub equal: bool,
    /// A class in one set but not the other.
    pub witness: Option<Vec<usize>>,
}

/// Compares the classes `t` with `[t, s] = 1` for all `s` against the span
/// of `v (x) u` for `v` in `sublattice` (cover basis coordinates). The
/// commutator is bimultiplicative, so testing `s` on generators suffices.
pub fn center_image_check(cover: &MetaTorusModel, sublattice: &[Vec<i64>]) -> Result<CenterReport> {
    let r = cover.rank();
    if sublattice.iter().any(|v| v.len() != r) {
        return Err(Error::Shape(format!("sublattice vectors must have length {r}")));
    }
    let classes: Vec<CoverElement> = cover.elements().into_iter().filter(|x| x.zeta == 0).collect();
    let gens: Vec<CoverElement> = cover.generators().into_iter().map(|g| g.3).collect();
    let central: BTreeSet<Vec<usize>> = classes
        .iter()
        .filter(|x| gens.iter().all(|g| cover.commutator(x, g) == cover.identity()))
        .map(|x| x.t.clone())
        .collect();
    let mut image: BTreeSet<Vec<usize>> = BTreeSet::new();
    image.insert(vec![cover.m_zero(); r]);
    for v in sublattice {
        let mut next = image.clone();
        for t in &image {
            for u in 0..cover.m_size() {
                let s: Vec<usize> = t.iter().zip(v).map(|(&a, &c)| cover.m_add(a, cover.m_scale(c, u))).collect();
                next.insert(s);
            }
        }
        image = next;
    }
    let witness = central.symmetric_difference(&image).next().cloned();
    Ok(CenterReport {
        classes: classes.len(),
        central: central.len(),
        image: image.len(),
        equal: witness.is_none(),
        witness,
    })
}
