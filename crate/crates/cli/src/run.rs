//! Resolves a job against the core library and builds the report sections.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use mlk_core::bisector::{
    fair_bisector, fair_descent_check, fairness_witness, is_bisector, tetractors, Bisector, Tetractor,
};
use mlk_core::exactalg::{GaussInt, MuElem};
use mlk_core::localfield::{
    hilbert2, legendre, omega_w_bijection_check, symbol_datum, weil_laws_check, weil_table, AdditiveCharacter,
    FieldModel, RealOrientation, SymbolDatum,
};
use mlk_core::metaplectic::{
    bar_y, center_characters, dual_datum, modify, BarY, MetaplecticStructure, ModifiedRootDatum,
};
use mlk_core::rootdata::{preset, CartanDatum, QuadraticForm, RootDatum};
use mlk_core::torusparams::{
    build_cover, build_t_sharp, build_t_sharp_with_period, center_image_check, enumerate_param_functions,
    genuine_characters, param_character_bijection,
};
use mlk_core::twisthopf::{
    build_chi, build_omega, build_tau, verify_compatible, ToralTwistedHopf, TwistContext, DEFAULT_WINDOW,
};
use mlk_core::unramified::{
    central_shift, conductor_dependence_check, frobenius_image, negated_kappa_check, savin_gamma,
    shift_theorem_check, unramified_parameters,
};

use crate::jobspec::{Command, DatumSpec, ErrorCode, FormSpec, JobSpec, Orientation, PsiSpec, SchemaError};
use crate::report::{Report, Settings, SuiteLine, SCHEMA_VERSION};

/// Overrides taken from the command line.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub command: Option<Command>,
    pub window: Option<i64>,
}

type Section = (Value, Vec<SuiteLine>);
type SectionResult = Result<Section, SchemaError>;

fn bad(message: impl Into<String>) -> SchemaError {
    SchemaError { code: ErrorCode::BadValue, message: message.into(), line: None, column: None }
}

fn core(context: &str) -> impl Fn(mlk_core::Error) -> SchemaError + '_ {
    move |e| bad(format!("{context}: {e}"))
}

struct Setting {
    rd: RootDatum,
    q: QuadraticForm,
    md: ModifiedRootDatum,
    c: Bisector,
    c_from_job: bool,
    field: FieldModel,
    psi: AdditiveCharacter,
    psi_spec: PsiSpec,
    kappa: Option<usize>,
    window: i64,
}

/// Smallest odd prime `p` with `n | p - 1`, so that `mu_n` lies in `Q_p`.
fn default_prime(n: i64) -> i64 {
    (3..).find(|&p| crate::jobspec::is_odd_prime(p) && (p - 1) % n == 0).expect("Dirichlet")
}

fn resolve(job: &JobSpec, opts: &RunOptions) -> Result<Setting, SchemaError> {
    let rd = match &job.root_datum {
        DatumSpec::Preset(name) => preset(name).map_err(core("root_datum"))?.datum,
        DatumSpec::Explicit { rank, pairing, coroots, roots } => {
            let cartan = CartanDatum::new(pairing.clone()).map_err(core("root_datum.pairing"))?;
            RootDatum::new(*rank, cartan, coroots.clone(), roots.clone()).map_err(core("root_datum"))?
        }
    };
    let q = match &job.q {
        FormSpec::Basis { values, cross } => QuadraticForm::from_values(values, cross).map_err(core("Q"))?,
        FormSpec::Coroots(map) => {
            let values: Vec<i64> =
                (1..=rd.semisimple_rank()).map(|i| map[&format!("alpha{i}_vee")]).collect();
            QuadraticForm::from_coroot_values(&rd, &values).map_err(|e| match e {
                mlk_core::Error::Precondition(_) => {
                    bad(format!("Q: {e}; give Q as {{\"values\": [...], \"cross\": [[...]]}} instead"))
                }
                other => bad(format!("Q: {other}")),
            })?
        }
    };
    let n = job.n;
    let ms = MetaplecticStructure::new(q.clone(), n, &rd).map_err(core("Q"))?;
    let md = modify(&ms, &rd).map_err(core("modify"))?;
    let (c, c_from_job) = match &job.c {
        Some(m) => {
            let c = Bisector::new(m).map_err(core("C"))?;
            if !is_bisector(&c, &q) {
                return Err(bad("C is not a bisector of Q: C + C^T must equal B mod 2 with diagonal Q mod 2"));
            }
            (c, true)
        }
        None => (fair_bisector(&q, &rd).map_err(core("fair bisector"))?, false),
    };
    let field = match &job.field {
        None => FieldModel::padic(default_prime(n)).map_err(core("field"))?,
        Some(f) => match f.p {
            Some(p) => match f.precision {
                Some(k) => FieldModel::padic_with_precision(p, k),
                None => FieldModel::padic(p),
            }
            .map_err(core("field"))?,
            None => FieldModel::real_oriented(match f.orientation {
                Some(Orientation::PlusI) => RealOrientation::PlusI,
                _ => RealOrientation::MinusI,
            }),
        },
    };
    let psi_spec = job.psi.clone().unwrap_or(PsiSpec { conductor: 0, unit: 1 });
    let twist = field.element(psi_spec.conductor, psi_spec.unit).map_err(core("psi"))?;
    let psi = AdditiveCharacter::reference(&field).twisted(&twist);
    let window = opts.window.unwrap_or(DEFAULT_WINDOW);
    if window < 1 {
        return Err(bad("window must be at least 1"));
    }
    let setting = Setting { rd, q, md, c, c_from_job, field, psi, psi_spec, kappa: job.kappa, window };
    if job.kappa.is_some() {
        setting.kappas(&setting.bar()?)?;
    }
    Ok(setting)
}

impl Setting {
    fn symbols(&self) -> Result<SymbolDatum, SchemaError> {
        symbol_datum(&self.field, self.md.n as u32).map_err(core("field"))
    }

    fn bar(&self) -> Result<BarY, SchemaError> {
        bar_y(&self.md).map_err(core("BarY"))
    }

    /// Tetractors with their indices in the sorted list, filtered by the job's selector.
    fn kappas(&self, bar: &BarY) -> Result<Vec<(usize, Tetractor)>, SchemaError> {
        let all = tetractors(&self.c, &self.q, bar).map_err(core("tetractors"))?;
        match self.kappa {
            None => Ok(all.into_iter().enumerate().collect()),
            Some(k) if k < all.len() => Ok(vec![(k, all[k].clone())]),
            Some(k) => Err(bad(format!("kappa = {k} but there are only {} tetractors", all.len()))),
        }
    }

    fn settings(&self) -> Settings {
        let (precision, orientation) = match self.field {
            FieldModel::PAdic { precision, .. } => (Some(precision), None),
            FieldModel::Real { orientation } => (
                None,
                Some(match orientation {
                    RealOrientation::MinusI => "minus_i".to_string(),
                    RealOrientation::PlusI => "plus_i".to_string(),
                }),
            ),
        };
        Settings {
            field: self.field.label(),
            precision,
            orientation,
            n: self.md.n,
            window: self.window,
            psi_conductor: self.psi_spec.conductor,
            psi_unit: self.psi_spec.unit,
            kappa: self.kappa,
            bisector_source: if self.c_from_job { "job".into() } else { "fair_bisector".into() },
        }
    }
}

fn mu(v: MuElem) -> String {
    v.to_string()
}

fn modify_section(s: &Setting) -> SectionResult {
    let md = &s.md;
    let dual = dual_datum(md).map_err(core("dual datum"))?;
    let bar = s.bar()?;
    let cc = center_characters(md).map_err(core("center"))?;
    let coroot_images: Vec<Value> = s
        .rd
        .coroots()
        .iter()
        .map(|a| match md.tilde_coords(a) {
            Some(_) => bar.project(a).map(|v| json!(v)).unwrap_or(Value::Null),
            None => Value::Null,
        })
        .collect();
    let same = md.y_tilde_is_y();
    let summary = vec![
        if same { "Ytilde = Y".to_string() } else { format!("[Y : Ytilde] = {}", md.index) },
        if same { "Xtilde = X".to_string() } else { format!("Xtilde = (1/{}) * span of x_tilde_scaled", md.den) },
        format!("dual type = {}", dual.describe()),
        format!("barY = {}", bar.group()),
        format!("center characters = {}", cc.group),
    ];
    let body = json!({
        "summary": summary,
        "n": md.n,
        "q_gram": s.q.gram(),
        "scaling": md.scaling.values,
        "zero_q": md.scaling.zero_q,
        "y_tilde_basis": md.y_tilde_basis,
        "y_tilde_equals_y": same,
        "index": md.index,
        "x_tilde": {"den": md.den, "scaled_basis": md.x_tilde_scaled},
        "x_tilde_equals_x": same,
        "modified_coroots": md.coroots_in_y,
        "modified_roots_scaled": md.roots_in_x_scaled,
        "modified_cartan_matrix": md.datum.cartan_matrix(),
        "q_tilde_gram": md.q_tilde.gram(),
        "dual": {
            "type": dual.describe(),
            "dynkin": dual.types.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "simply_connected": dual.simply_connected,
            "adjoint": dual.adjoint,
            "group": dual.group_name,
        },
        "bar_y": {
            "group": bar.group().to_string(),
            "rank": bar.rank(),
            "generator_lifts": bar.generator_lifts(),
            "coroot_images": coroot_images,
        },
        "center_characters": {
            "group": cc.group.to_string(),
            "generator_lifts_tilde": cc.generator_lifts(),
        },
    });
    Ok((body, Vec::new()))
}

fn bisector_section(s: &Setting) -> SectionResult {
    let r = s.c.rank();
    let mut trace = Vec::new();
    let mut checked = 0u64;
    for (i, a) in s.rd.coroots().iter().enumerate() {
        let qa = s.q.value(a);
        let even = qa.rem_euclid(2) == 0;
        let e = |j: usize| -> Vec<i64> { (0..r).map(|k| i64::from(k == j)).collect() };
        let row: Vec<u8> = (0..r).map(|j| s.c.eval(a, &e(j))).collect();
        let col: Vec<u8> = (0..r).map(|j| s.c.eval(&e(j), a)).collect();
        if even {
            checked += 2 * r as u64;
        }
        trace.push(json!({
            "coroot": i,
            "coroot_vector": a,
            "q_value": qa,
            "q_even": even,
            "c_coroot_basis": row,
            "c_basis_coroot": col,
        }));
    }
    let witness = fairness_witness(&s.c, &s.q, &s.rd);
    let descent = fair_descent_check(&s.c, &s.md);
    let witness_json = witness.as_ref().map(|w| {
        json!({"coroot": w.coroot, "basis": w.basis, "coroot_first": w.coroot_first})
    });
    let body = json!({
        "matrix": s.c.matrix_i64(),
        "source": if s.c_from_job { "job" } else { "fair_bisector" },
        "is_bisector": is_bisector(&s.c, &s.q),
        "is_fair": witness.is_none(),
        "fairness_witness": witness_json,
        "trace": trace,
        "descent": {"holds": descent.holds, "witness": descent.witness.as_ref().map(|(i, y)| json!([i, y]))},
    });
    let suites = vec![
        SuiteLine::verdict("fairness", checked, witness.is_none(), || {
            let w = witness.as_ref().expect("failing");
            if w.coroot_first {
                format!("C(alpha{}_vee, e{}) is odd", w.coroot + 1, w.basis + 1)
            } else {
                format!("C(e{}, alpha{}_vee) is odd", w.basis + 1, w.coroot + 1)
            }
        }),
        SuiteLine::verdict("fair-descent", (s.md.coroots_in_y.len() * s.md.rank() * 2) as u64, descent.holds, || {
            let (i, y) = descent.witness.clone().expect("failing");
            format!("modified coroot {} pairs oddly with {y:?}", i + 1)
        }),
    ];
    Ok((body, suites))
}

fn tetractor_section(s: &Setting) -> SectionResult {
    let bar = s.bar()?;
    let all = tetractors(&s.c, &s.q, &bar).map_err(core("tetractors"))?;
    let expected = 1u64 << bar.rank();
    let listed: Vec<Value> = all
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let neg = t.negated();
            let partner = all.iter().position(|u| *u == neg);
            json!({"index": k, "table": t.table(), "negated_index": partner})
        })
        .collect();
    let body = json!({
        "bar_y": bar.group().to_string(),
        "bar_y_rank": bar.rank(),
        "count": all.len(),
        "expected": expected,
        "tetractors": listed,
    });
    let suites = vec![SuiteLine::verdict("tetractor-count", 1, all.len() as u64 == expected, || {
        format!("{} tetractors, expected 2^{} = {expected}", all.len(), bar.rank())
    })];
    Ok((body, suites))
}

fn verify_section(s: &Setting) -> SectionResult {
    let sd = s.symbols()?;
    let ctx = Arc::new(TwistContext::new(&s.md, &sd, s.window).map_err(core("twist context"))?);
    let (tau, r_tau) = build_tau(&ctx);
    let (chi, r_chi) = build_chi(&ctx, &s.c).map_err(core("chi"))?;
    let mut suites: Vec<SuiteLine> = Vec::new();
    for r in r_tau.iter().chain(&r_chi).chain(&verify_compatible(&tau, &chi)) {
        suites.push(SuiteLine::from_suite("", r));
    }
    let mut kappa_used = Vec::new();
    let n = s.md.n;
    if n == 2 {
        let bar = s.bar()?;
        for (k, kappa) in s.kappas(&bar)? {
            let (_, reports) = build_omega(&chi, &s.psi, &kappa, &bar).map_err(core("omega"))?;
            for r in &reports {
                suites.push(SuiteLine::from_suite(&format!("[kappa {k}] "), r));
            }
            kappa_used.push(k);
        }
    }
    let radius = s.window / 3;
    let twisted = ToralTwistedHopf::twisted(&tau, &chi);
    let untwisted = ToralTwistedHopf::untwisted(&ctx);
    if radius >= 1 {
        for r in twisted.verify_axioms(radius).map_err(core("hopf axioms"))? {
            suites.push(SuiteLine::from_suite("hopf twisted: ", &r));
        }
        for r in untwisted.verify_axioms(radius).map_err(core("hopf axioms"))? {
            suites.push(SuiteLine::from_suite("hopf untwisted: ", &r));
        }
        if n % 2 == 1 {
            let r = twisted.same_tables(&untwisted, radius).map_err(core("tables"))?;
            suites.push(SuiteLine::from_suite("odd degree: twisted = untwisted ", &r));
        }
    }
    let note = match n {
        2 => "trivializers built for every selected tetractor",
        _ if n % 2 == 1 => "odd degree: twisted tables compared with untwisted ones",
        _ => "trivializers need n = 2 and are skipped",
    };
    let body = json!({
        "field": s.field.label(),
        "group_size": ctx.group_size(),
        "window": s.window,
        "window_points": ctx.window_points().len(),
        "hopf_radius": radius,
        "tetractors_used": kappa_used,
        "note": note,
    });
    Ok((body, suites))
}

fn symbols_section(s: &Setting) -> SectionResult {
    let sd = s.symbols()?;
    let elements = sd.elements();
    let size = sd.size();
    let hilbert: Vec<Vec<String>> = (0..size).map(|i| (0..size).map(|j| mu(sd.h_index(i, j))).collect()).collect();
    let mut body = serde_json::Map::new();
    body.insert("field".into(), json!(s.field.label()));
    body.insert("n".into(), json!(sd.n));
    body.insert("generators".into(), json!(sd.labels));
    body.insert("elements".into(), json!(elements));
    body.insert("hilbert".into(), json!(hilbert));
    body.insert("psi".into(), json!({"conductor": s.psi.conductor(), "twist": s.psi.twist.to_string()}));
    let mut suites = Vec::new();
    if sd.n == 2 {
        let w = weil_table(&sd, &s.psi).map_err(core("weil"))?;
        body.insert("weil".into(), json!(w.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
    }
    let laws = weil_laws_check(&s.field).map_err(core("weil laws"))?;
    let checks = laws.checks as u64;
    for (name, ok) in [("W1", laws.w1), ("W2", laws.w2), ("W3", laws.w3), ("W4", laws.w4)] {
        suites.push(SuiteLine::verdict(name, checks, ok, || format!("{name} fails on {}", s.field.label())));
    }
    let ow = omega_w_bijection_check(&s.field).map_err(core("omega-w"))?;
    body.insert(
        "omega_w".into(),
        json!({"omega": ow.omega, "w": ow.w, "injective": ow.injective, "bijective": ow.bijective}),
    );
    suites.push(SuiteLine::verdict("Omega-W bijection", ow.omega as u64, ow.bijective, || {
        format!("|Omega| = {}, |W| = {}, injective = {}", ow.omega, ow.w, ow.injective)
    }));
    Ok((Value::Object(body), suites))
}

fn params_section(s: &Setting) -> SectionResult {
    let sd = s.symbols()?;
    let model = build_t_sharp(&s.md, &sd, &s.c).map_err(core("torus model"))?;
    let mut suites: Vec<SuiteLine> = model.verify(1).iter().map(|r| SuiteLine::from_suite("torus: ", r)).collect();
    let chars = genuine_characters(&model, 1).map_err(core("characters"))?;
    let params = enumerate_param_functions(&model).map_err(core("parameters"))?;
    let bij = param_character_bijection(&model).map_err(core("bijection"))?;
    let misses = (bij.forward_misses + bij.backward_misses + bij.round_trip_failures) as u64 + bij.condition_failures;
    let count_gap = u64::from(bij.characters != bij.parameters);
    suites.push(SuiteLine {
        label: "character-parameter bijection".into(),
        checked: (bij.characters + bij.parameters) as u64,
        failures: misses + count_gap,
        witness: if bij.passed() {
            None
        } else {
            Some(bij.witness.clone().unwrap_or_else(|| format!("{} characters, {} parameters", bij.characters, bij.parameters)))
        },
    });
    let cover = build_cover(&s.q, &s.c, &sd).map_err(core("cover"))?;
    let center = center_image_check(&cover, &s.md.y_tilde_basis).map_err(core("center"))?;
    suites.push(SuiteLine::verdict("center = image of Ytilde", center.classes as u64, center.equal, || {
        format!("class {:?} in one set only", center.witness)
    }));
    let body = json!({
        "field": s.field.label(),
        "model": {
            "basis": model.basis,
            "size": model.size(),
            "m_moduli": model.m_moduli(),
            "character_order": model.character_order(),
        },
        "genuine_characters": chars.len(),
        "parameter_functions": params.len(),
        "bijection": {
            "epsilon": bij.epsilon,
            "characters": bij.characters,
            "parameters": bij.parameters,
            "forward_misses": bij.forward_misses,
            "backward_misses": bij.backward_misses,
            "round_trip_failures": bij.round_trip_failures,
            "condition_failures": bij.condition_failures,
            "note": bij.note,
        },
        "center": {
            "classes": center.classes,
            "central": center.central,
            "image": center.image,
            "equal": center.equal,
        },
    });
    Ok((body, suites))
}

fn unramified_section(s: &Setting) -> SectionResult {
    let p = match (s.md.n, s.field.residue_prime()) {
        (2, Some(p)) => p,
        _ => return Err(bad("unramified data needs n = 2 over Q_p with p odd")),
    };
    let sd = s.symbols()?;
    let model = build_t_sharp_with_period(&s.md, &sd, &s.c, 4).map_err(core("torus model"))?;
    let bar = s.bar()?;
    let params = enumerate_param_functions(&model).map_err(core("parameters"))?;
    let field = s.field;
    let units: Vec<i64> = (1..p).collect();
    let pi = field.uniformizer().expect("p-adic");
    let hilb_pp = hilbert2(&pi, &pi, &field).map_err(core("hilbert"))?;
    let w_choices = if hilb_pp == 1 { [GaussInt::ONE, -GaussInt::ONE] } else { [GaussInt::I, -GaussInt::I] };
    let mut suites = Vec::new();
    let mut per_kappa = Vec::new();
    for (k, kappa) in s.kappas(&bar)? {
        let tag = format!("[kappa {k}] ");
        let unr = unramified_parameters(&model, &bar, &params, &s.psi, &kappa).map_err(core("unramified"))?;
        let mut g_tables = Vec::new();
        let mut negated = SuiteLine { label: format!("{tag}negated kappa conjugates g"), checked: 0, failures: 0, witness: None };
        let mut shift = SuiteLine { label: format!("{tag}shift theorem"), checked: 0, failures: 0, witness: None };
        for phi in &unr {
            let index = params.iter().position(|x| x == phi);
            let g = frobenius_image(&model, &bar, phi, &s.psi, &kappa).map_err(core("frobenius image"))?;
            g_tables.push(json!({
                "parameter": index,
                "is_character": g.is_character,
                "g": g.table.iter().map(|(y, v)| json!([y, mu(*v)])).collect::<Vec<_>>(),
            }));
            negated.checked += 1;
            if !negated_kappa_check(&model, &bar, phi, &s.psi, &kappa).map_err(core("negated kappa"))? {
                negated.failures += 1;
                negated.witness.get_or_insert_with(|| format!("parameter {index:?}"));
            }
            for &v in &units {
                let ve = field.element(0, v).map_err(core("unit"))?;
                let rep = shift_theorem_check(&model, &bar, phi, &s.psi, &ve, &kappa).map_err(core("shift"))?;
                shift.checked += rep.checked.max(1);
                if !rep.passed() {
                    shift.failures += rep.failures.max(1);
                    shift.witness.get_or_insert_with(|| format!("v = {v}: {}", rep.witness.clone().unwrap_or_default()));
                }
            }
        }
        let mut parity = SuiteLine { label: format!("{tag}conductor parity"), checked: 0, failures: 0, witness: None };
        let mut verdict_sets = [std::collections::BTreeSet::new(), std::collections::BTreeSet::new()];
        for (i, phi) in params.iter().enumerate() {
            let rep = conductor_dependence_check(&model, &bar, phi, &kappa).map_err(core("conductor"))?;
            parity.checked += rep.verdicts.len() as u64;
            if !rep.passed() {
                parity.failures += 1;
                parity.witness.get_or_insert_with(|| format!("parameter {i}: {}", rep.witness.clone().unwrap_or_default()));
            }
            if !rep.verdicts.is_empty() && rep.verdicts.iter().any(|v| v.unramified) {
                for par in 0..2 {
                    verdict_sets[par].extend(rep.by_parity[par].iter().copied());
                }
            }
        }
        let mut savin = Vec::new();
        for w in w_choices {
            let rep = savin_gamma(&kappa, &bar, &s.c, w, hilb_pp).map_err(core("gamma"))?;
            suites.push(SuiteLine {
                label: format!("{tag}gamma identity (w = {w})"),
                checked: rep.checked,
                failures: rep.failures,
                witness: rep.witness.clone(),
            });
            savin.push(json!({
                "w_pi": w.to_string(),
                "gamma": rep.gamma.iter().map(|(y, g)| json!([y, g.to_string()])).collect::<Vec<_>>(),
            }));
        }
        suites.extend([negated, shift, parity]);
        per_kappa.push(json!({
            "index": k,
            "table": kappa.table(),
            "unramified_parameters": unr.len(),
            "g_tables": g_tables,
            "gamma": savin,
        }));
    }
    let nonresidue = (2..p).find(|&v| legendre(v, p) == -1).expect("odd prime has a nonresidue");
    let z = central_shift(&s.md, &field.element(0, nonresidue).map_err(core("unit"))?, &field)
        .map_err(core("central shift"))?;
    let body = json!({
        "field": field.label(),
        "frobenius_period": model.frobenius_period(),
        "parameter_functions": params.len(),
        "hilbert_pi_pi": hilb_pp,
        "kappas": per_kappa,
        "central_shift": {
            "v": nonresidue,
            "legendre": z.legendre,
            "group": z.group.to_string(),
            "values": z.values,
            "well_defined": z.well_defined,
        },
    });
    suites.push(SuiteLine::verdict("central shift well defined", 1, z.well_defined, || {
        format!("z_Q({nonresidue}) does not descend to the center")
    }));
    Ok((body, suites))
}

fn section(cmd: Command, s: &Setting) -> SectionResult {
    match cmd {
        Command::Modify => modify_section(s),
        Command::Bisector => bisector_section(s),
        Command::Tetractor => tetractor_section(s),
        Command::Verify => verify_section(s),
        Command::Symbols => symbols_section(s),
        Command::Params => params_section(s),
        Command::Unramified => unramified_section(s),
        Command::Report => unreachable!("report is expanded by the caller"),
    }
}

/// Runs a validated job. Errors are input problems found while building the
/// objects (exit code 2); failing verification shows up in the report.
pub fn run(job: &JobSpec, opts: &RunOptions) -> Result<Report, Vec<SchemaError>> {
    let command = opts.command.or(job.command).ok_or_else(|| {
        vec![SchemaError {
            code: ErrorCode::MissingField,
            message: "no command given on the command line or in the job".into(),
            line: None,
            column: None,
        }]
    })?;
    let setting = resolve(job, opts).map_err(|e| vec![e])?;
    let mut sections = BTreeMap::new();
    let mut suites = Vec::new();
    if command == Command::Report {
        for cmd in Command::ALL.into_iter().filter(|&c| c != Command::Report) {
            match section(cmd, &setting) {
                Ok((body, mut lines)) => {
                    sections.insert(cmd.name().to_string(), body);
                    for l in &mut lines {
                        l.label = format!("{}: {}", cmd.name(), l.label);
                    }
                    suites.extend(lines);
                }
                Err(e) => {
                    sections.insert(cmd.name().to_string(), json!({"skipped": e.message}));
                }
            }
        }
    } else {
        let (body, lines) = section(command, &setting).map_err(|e| vec![e])?;
        sections.insert(command.name().to_string(), body);
        suites = lines;
    }
    let passed = suites.iter().all(SuiteLine::passed);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: command.name().to_string(),
        job: job.clone(),
        settings: setting.settings(),
        sections,
        suites,
        passed,
    })
}
