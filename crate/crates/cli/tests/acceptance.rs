//! Acceptance gate: one line per criterion, with its runtime bound.
//!
//! Runs without the libtest harness so the lines always print. Criterion 9
//! asks for two distinct fair bisectors of the Sp4 form; an exhaustive search
//! finds exactly one, so it reports FAIL. That outcome is expected and does
//! not fail the target; any other FAIL does.

use std::process::{Command as Process, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::Value;

use mlk_cli::{run_text, Report, RunOptions};
use mlk_core::bisector::{fair_bisector, is_bisector, is_fair, solve_morphism, tetractors, Bisector};
use mlk_core::localfield::{hilbert2, omega_w_bijection_check, symbol_datum, weil_laws_check, AdditiveCharacter, FieldModel};
use mlk_core::metaplectic::{bar_y, modify, MetaplecticStructure};
use mlk_core::rootdata::{preset, QuadraticForm};
use mlk_core::exactalg::GaussInt;
use mlk_core::twisthopf::{alpha_h, build_chi, build_omega, build_tau, verify_diagonal_morphism, ToralTwistedHopf, TwistContext, DEFAULT_WINDOW};
use mlk_core::unramified::savin_gamma;

type Outcome = Result<String, String>;

fn job(text: &str) -> Result<Report, String> {
    run_text(text, &RunOptions::default()).map_err(|e| format!("{e:?}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_suites_pass(r: &Report, what: &str) -> Result<u64, String> {
    if let Some(s) = r.suites.iter().find(|s| !s.passed()) {
        return Err(format!("{what}: {} has {} failures, witness {:?}", s.label, s.failures, s.witness));
    }
    Ok(r.suites.iter().map(|s| s.checked).sum())
}

fn mp_form(rank: usize) -> String {
    let vals: Vec<String> =
        (1..=rank).map(|i| format!("\"alpha{i}_vee\":{}", if i == 1 { 1 } else { 2 })).collect();
    format!("{{{}}}", vals.join(","))
}

fn criterion_1() -> Outcome {
    for rank in 1..=3usize {
        let r = job(&format!(r#"{{"root_datum":"Sp{}","Q":{},"n":2,"command":"modify"}}"#, 2 * rank, mp_form(rank)))?;
        let m = &r.sections["modify"];
        let tag = format!("Sp{}", 2 * rank);
        ensure(m["y_tilde_equals_y"] == true && m["x_tilde_equals_x"] == true, || format!("{tag}: lattices changed"))?;
        let mut doubled = vec![0i64; rank];
        doubled[0] = 2;
        ensure(m["modified_coroots"][0] == serde_json::json!(doubled), || format!("{tag}: {}", m["modified_coroots"]))?;
        // Rank one: C1 and A1 name the same Cartan type, and the classifier says A1.
        let expected = if rank == 1 { "A1".to_string() } else { format!("C{rank}") };
        ensure(m["dual"]["dynkin"] == serde_json::json!([expected]), || format!("{tag}: dual {}", m["dual"]))?;
        ensure(m["dual"]["simply_connected"] == true, || format!("{tag}: dual not simply connected"))?;
        ensure(m["dual"]["group"] == format!("Sp{}", 2 * rank) || (rank == 1 && m["dual"]["group"] == "SL2"), || {
            format!("{tag}: dual group {}", m["dual"]["group"])
        })?;
        let bar = &m["bar_y"];
        ensure(bar["group"] == "Z/2" && bar["coroot_images"][0] == serde_json::json!([1]), || {
            format!("{tag}: barY {bar}")
        })?;
    }
    Ok("Sp2, Sp4, Sp6: Ytilde = Y, doubled short coroot, dual C_r simply connected, barY = Z/2 on the short coroot".into())
}

fn criterion_2() -> Outcome {
    let r = job(r#"{"root_datum":"Sp4","Q":{"alpha1_vee":1,"alpha2_vee":2},"n":2,"command":"tetractor"}"#)?;
    let t = &r.sections["tetractor"];
    ensure(t["count"] == 2, || format!("Mp4 has {} tetractors", t["count"]))?;
    let mut general = Vec::new();
    for (name, q) in [
        ("GL1", r#"{"values":[1]}"#),
        ("T2", r#"{"values":[1,1]}"#),
        ("GL2", r#"{"values":[1,1]}"#),
        ("SL3", r#"{"alpha1_vee":1,"alpha2_vee":1}"#),
        ("Sp6", &mp_form(3)),
        ("Spin5", r#"{"alpha1_vee":1,"alpha2_vee":2}"#),
        ("G2-sc", r#"{"alpha1_vee":3,"alpha2_vee":1}"#),
    ] {
        let r = job(&format!(r#"{{"root_datum":"{name}","Q":{q},"n":2,"command":"tetractor"}}"#))?;
        let t = &r.sections["tetractor"];
        ensure(t["count"] == t["expected"], || format!("{name}: {} tetractors, expected {}", t["count"], t["expected"]))?;
        general.push(format!("{name} {}", t["count"]));
    }

    // The two Mp4 trivializations are complex conjugate.
    let p = preset("Sp4").map_err(|e| e.to_string())?;
    let field = FieldModel::padic(3).map_err(|e| e.to_string())?;
    let ms = MetaplecticStructure::new(p.default_q.clone(), 2, &p.datum).map_err(|e| e.to_string())?;
    let md = modify(&ms, &p.datum).map_err(|e| e.to_string())?;
    let sd = symbol_datum(&field, 2).map_err(|e| e.to_string())?;
    let ctx = Arc::new(TwistContext::new(&md, &sd, DEFAULT_WINDOW).map_err(|e| e.to_string())?);
    let c = fair_bisector(&p.default_q, &p.datum).map_err(|e| e.to_string())?;
    let (chi, _) = build_chi(&ctx, &c).map_err(|e| e.to_string())?;
    let bar = bar_y(&md).map_err(|e| e.to_string())?;
    let kappas = tetractors(&c, &p.default_q, &bar).map_err(|e| e.to_string())?;
    let psi = AdditiveCharacter::reference(&field);
    let (w0, _) = build_omega(&chi, &psi, &kappas[0], &bar).map_err(|e| e.to_string())?;
    let (w1, _) = build_omega(&chi, &psi, &kappas[1], &bar).map_err(|e| e.to_string())?;
    let mut differ = false;
    for y in ctx.window_points() {
        for g in 0..ctx.group_size() {
            ensure(w1.value(y, g) == w0.value(y, g).conj(), || format!("omega values at {y:?} are not conjugate"))?;
            differ |= w1.value(y, g) != w0.value(y, g);
        }
    }
    ensure(differ, || "the two trivializations coincide".into())?;
    Ok(format!("Mp4: 2 tetractors with conjugate trivializations; 2^rank(barY) for {}", general.join(", ")))
}

const FIELDS: [&str; 4] = [r#"{"p":3}"#, r#"{"p":5}"#, r#"{"p":7}"#, r#"{"p":"real"}"#];

fn criterion_3() -> Outcome {
    let presets = [
        ("GL1", r#"{"values":[1]}"#),
        ("GL1", r#"{"values":[2]}"#),
        ("SL2", r#"{"alpha1_vee":1}"#),
        ("Sp4", r#"{"alpha1_vee":1,"alpha2_vee":2}"#),
        ("T2", r#"{"values":[1,1]}"#),
    ];
    let required = ["OT1", "OT2", "OT3", "TO1", "TO2", "TO3", "TO-symmetry", "TO-involutive", "Com1", "Com2"];
    let mut total = 0;
    for field in FIELDS {
        for (name, q) in presets {
            let what = format!("{name} Q={q} field={field}");
            let r = job(&format!(r#"{{"root_datum":"{name}","Q":{q},"n":2,"field":{field},"command":"verify"}}"#))?;
            total += all_suites_pass(&r, &what)?;
            for label in required {
                ensure(r.suites.iter().any(|s| s.label == label && s.checked > 0), || format!("{what}: no {label}"))?;
            }
            let kappas = r.sections["verify"]["tetractors_used"].as_array().map_or(0, Vec::len);
            ensure(kappas > 0, || format!("{what}: no tetractors"))?;
            for k in 0..kappas {
                for t in ["Triv1", "Triv2", "Triv3"] {
                    let label = format!("[kappa {k}] {t}");
                    ensure(r.suites.iter().any(|s| s.label == label && s.checked > 0), || format!("{what}: no {label}"))?;
                }
            }
        }
    }
    Ok(format!("20 field/preset pairs, {total} identities checked, zero witnesses"))
}

fn criterion_4() -> Outcome {
    let mut cases = 0;
    for (n, field) in [(1, r#"{"p":3}"#), (1, r#"{"p":"real"}"#), (3, r#"{"p":7}"#)] {
        for (name, q) in [
            ("GL1", r#"{"values":[1]}"#),
            ("SL2", r#"{"alpha1_vee":1}"#),
            ("Sp4", r#"{"alpha1_vee":1,"alpha2_vee":2}"#),
            ("T2", r#"{"values":[1,1]}"#),
        ] {
            let r = job(&format!(r#"{{"root_datum":"{name}","Q":{q},"n":{n},"field":{field},"command":"verify"}}"#))?;
            all_suites_pass(&r, &format!("{name} n={n}"))?;
            ensure(r.suites.iter().any(|s| s.label.starts_with("odd degree") && s.checked > 0), || {
                format!("{name} n={n}: no table comparison")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases: twisted tables equal untwisted ones"))
}

fn criterion_5() -> Outcome {
    let mut counts = Vec::new();
    for field in [r#"{"p":3}"#, r#"{"p":5}"#, r#"{"p":"real"}"#] {
        let r = job(&format!(r#"{{"root_datum":"GL1","Q":{{"values":[1]}},"n":2,"field":{field},"command":"params"}}"#))?;
        all_suites_pass(&r, field)?;
        let b = &r.sections["params"]["bijection"];
        ensure(b["characters"] == b["parameters"] && b["characters"].as_u64() > Some(0), || format!("{field}: {b}"))?;
        counts.push(format!("{} {}", r.settings.field, b["characters"]));
    }
    Ok(format!("characters = parameters, maps mutually inverse: {}", counts.join(", ")))
}

/// `a x^2 + b y^2 = z^2` has a nonzero solution in `Q_p` (odd `p`, `v(a), v(b) <= 1`)
/// iff some primitive solution mod `p^3` has a partial derivative of valuation at most 1.
fn conic_solvable_padic(a: i64, b: i64, p: i64) -> bool {
    let m = p * p * p;
    let val = |x: i64| -> u32 {
        let mut x = x.rem_euclid(m);
        if x == 0 {
            return 3;
        }
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    let mut roots: Vec<Vec<i64>> = vec![Vec::new(); m as usize];
    for z in 0..m {
        roots[(z * z % m) as usize].push(z);
    }
    for x in 0..m {
        for y in 0..m {
            let t = (a * x % m * x % m + b * y % m * y % m).rem_euclid(m);
            for &z in &roots[t as usize] {
                let primitive = x % p != 0 || y % p != 0 || z % p != 0;
                if primitive && val(2 * a * x).min(val(2 * b * y)).min(val(2 * z)) <= 1 {
                    return true;
                }
            }
        }
    }
    false
}

fn strip_squares(mut a: i64, p: i64) -> i64 {
    while a % (p * p) == 0 {
        a /= p * p;
    }
    a
}

const SAMPLES: [i64; 12] = [-15, -7, -6, -3, -2, -1, 1, 2, 3, 5, 10, 21];

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    for p in [3, 5, 7] {
        let field = FieldModel::padic(p).map_err(|e| e.to_string())?;
        let laws = weil_laws_check(&field).map_err(|e| e.to_string())?;
        ensure(laws.all(), || format!("Q_{p}: {laws:?}"))?;
        let ow = omega_w_bijection_check(&field).map_err(|e| e.to_string())?;
        ensure(ow.bijective && ow.omega == 4 && ow.w == 4, || format!("Q_{p}: {ow:?}"))?;
        let mut pairs = 0;
        for &a in &SAMPLES {
            for &b in &SAMPLES {
                let (sa, sb) = (strip_squares(a, p), strip_squares(b, p));
                let fa = field.from_int(a).map_err(|e| e.to_string())?;
                let fb = field.from_int(b).map_err(|e| e.to_string())?;
                let h = hilbert2(&fa, &fb, &field).map_err(|e| e.to_string())?;
                ensure((h == 1) == conic_solvable_padic(sa, sb, p), || format!("Q_{p}: Hilb2({a}, {b}) = {h}"))?;
                pairs += 1;
            }
        }
        notes.push(format!("Q_{p} {pairs} pairs"));
    }
    let real = FieldModel::real();
    let laws = weil_laws_check(&real).map_err(|e| e.to_string())?;
    ensure(laws.all(), || format!("R: {laws:?}"))?;
    let ow = omega_w_bijection_check(&real).map_err(|e| e.to_string())?;
    ensure(ow.bijective && ow.omega == 2 && ow.w == 2, || format!("R: {ow:?}"))?;
    let mut pairs = 0;
    for &a in &SAMPLES {
        for &b in &SAMPLES {
            let h = hilbert2(&real.from_int(a).unwrap(), &real.from_int(b).unwrap(), &real).map_err(|e| e.to_string())?;
            // Over R the conic has a point iff the form a x^2 + b y^2 takes a positive value.
            ensure((h == 1) == (a > 0 || b > 0), || format!("R: Hilb2({a}, {b}) = {h}"))?;
            pairs += 1;
        }
    }
    notes.push(format!("R {pairs} pairs"));
    Ok(format!("W1-W4 and Omega-W pass; Hilb2 matches conic solvability ({})", notes.join(", ")))
}

fn criterion_7() -> Outcome {
    let mut shifts = 0;
    let mut unramified = 0;
    for p in [3, 5] {
        for (name, q) in [
            ("GL1", r#"{"values":[1]}"#),
            ("SL2", r#"{"alpha1_vee":1}"#),
            ("Sp4", r#"{"alpha1_vee":1,"alpha2_vee":2}"#),
        ] {
            for conductor in [0, 1] {
                let r = job(&format!(
                    r#"{{"root_datum":"{name}","Q":{q},"n":2,"field":{{"p":{p}}},"psi":{{"conductor":{conductor},"unit":1}},"command":"unramified"}}"#
                ))?;
                all_suites_pass(&r, &format!("{name} Q_{p} conductor {conductor}"))?;
                for s in &r.suites {
                    if s.label.ends_with("shift theorem") {
                        shifts += s.checked;
                    }
                }
                for k in r.sections["unramified"]["kappas"].as_array().into_iter().flatten() {
                    unramified += k["unramified_parameters"].as_u64().unwrap_or(0);
                }
            }
        }
    }
    ensure(shifts > 0 && unramified > 0, || "nothing was checked".into())?;
    Ok(format!("{unramified} unramified parameters, {shifts} shift identities; conductor parity holds"))
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    let sl3 = preset("SL3").map_err(|e| e.to_string())?;
    let sl3_q = QuadraticForm::from_coroot_values(&sl3.datum, &[1, 1]).map_err(|e| e.to_string())?;
    let sp4 = preset("Sp4").map_err(|e| e.to_string())?;
    for (name, rd, q) in [("Mp4", &sp4.datum, &sp4.default_q), ("SL3", &sl3.datum, &sl3_q)] {
        let c = fair_bisector(q, rd).map_err(|e| e.to_string())?;
        let ms = MetaplecticStructure::new(q.clone(), 2, rd).map_err(|e| e.to_string())?;
        let md = modify(&ms, rd).map_err(|e| e.to_string())?;
        let bar = bar_y(&md).map_err(|e| e.to_string())?;
        for p in [3, 5] {
            let field = FieldModel::padic(p).map_err(|e| e.to_string())?;
            let pi = field.uniformizer().expect("p-adic");
            let h = hilbert2(&pi, &pi, &field).map_err(|e| e.to_string())?;
            let choices = if h == 1 { [GaussInt::ONE, -GaussInt::ONE] } else { [GaussInt::I, -GaussInt::I] };
            for kappa in tetractors(&c, q, &bar).map_err(|e| e.to_string())? {
                for w in choices {
                    let rep = savin_gamma(&kappa, &bar, &c, w, h).map_err(|e| e.to_string())?;
                    ensure(rep.passed(), || format!("{name} Q_{p} w={w}: {:?}", rep.witness))?;
                    checked += rep.checked;
                }
            }
        }
    }
    Ok(format!("Mp4 and SL3 over Q_3, Q_5, both w choices: {checked} pairs"))
}

/// Every bisector of `q`, by exhaustion over 0/1 matrices.
fn all_bisectors(q: &QuadraticForm) -> Vec<Bisector> {
    let r = q.rank();
    (0u32..1 << (r * r))
        .map(|code| {
            let m: Vec<Vec<i64>> =
                (0..r).map(|i| (0..r).map(|j| i64::from(code >> (i * r + j) & 1)).collect()).collect();
            Bisector::new(&m).expect("square 0/1 matrix")
        })
        .filter(|c| is_bisector(c, q))
        .collect()
}

fn criterion_9() -> Outcome {
    let p = preset("Sp4").map_err(|e| e.to_string())?;
    let q = &p.default_q;
    let fair: Vec<Bisector> = all_bisectors(q).into_iter().filter(|c| is_fair(c, q, &p.datum)).collect();
    if fair.len() < 2 {
        let listed: Vec<Vec<Vec<i64>>> = fair.iter().map(Bisector::matrix_i64).collect();
        return Err(format!(
            "the Sp4 form Q = y1^2 + y2^2 has {} fair bisector(s) {listed:?}: fairness at the coroot e2 - e1 forces C12 = C21 = 1",
            fair.len()
        ));
    }
    let field = FieldModel::padic(3).map_err(|e| e.to_string())?;
    let ms = MetaplecticStructure::new(q.clone(), 2, &p.datum).map_err(|e| e.to_string())?;
    let md = modify(&ms, &p.datum).map_err(|e| e.to_string())?;
    let sd = symbol_datum(&field, 2).map_err(|e| e.to_string())?;
    let ctx = Arc::new(TwistContext::new(&md, &sd, DEFAULT_WINDOW).map_err(|e| e.to_string())?);
    let (c1, c2) = (&fair[0], &fair[1]);
    let (tau, _) = build_tau(&ctx);
    let (chi1, _) = build_chi(&ctx, c1).map_err(|e| e.to_string())?;
    let (chi2, _) = build_chi(&ctx, c2).map_err(|e| e.to_string())?;
    let (a1, a2) = (ToralTwistedHopf::twisted(&tau, &chi1), ToralTwistedHopf::twisted(&tau, &chi2));
    let h12 = solve_morphism(c1, c2).map_err(|e| e.to_string())?;
    let h21 = solve_morphism(c2, c1).map_err(|e| e.to_string())?;
    let map = alpha_h(&h12, &ctx).map_err(|e| e.to_string())?;
    for s in verify_diagonal_morphism(&map, &a1, &a2, 1).map_err(|e| e.to_string())? {
        ensure(s.passed(), || format!("alpha_H {}: {:?}", s.name, s.witness))?;
    }
    let composed = alpha_h(&h21, &ctx).map_err(|e| e.to_string())?.compose(&map);
    let direct = alpha_h(&h12.compose(&h21), &ctx).map_err(|e| e.to_string())?;
    for y in ctx.window_points() {
        for g in 0..ctx.group_size() {
            ensure(composed.scalar(g, y) == direct.scalar(g, y), || format!("composition fails at {y:?}"))?;
        }
    }
    Ok("alpha_H is a Hopf isomorphism and composes additively".into())
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let jobs = [
        r#"{"root_datum":"Sp4","Q":{"alpha1_vee":1,"alpha2_vee":2},"n":2,"command":"report"}"#,
        r#"{"root_datum":"T2","Q":{"values":[1,1],"cross":[[0,1],[0,0]]},"n":2,"field":{"p":5},"command":"report"}"#,
        r#"{"root_datum":"SL3","Q":{"alpha1_vee":1,"alpha2_vee":1},"n":3,"command":"report"}"#,
    ];
    for (i, text) in jobs.iter().enumerate() {
        let path = dir.path().join(format!("job{i}.json"));
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        let mut outputs = Vec::new();
        for threads in ["1", "1", "3"] {
            let out = Process::new(env!("CARGO_BIN_EXE_mlk"))
                .args(["--job", path.to_str().unwrap()])
                .env("MLK_THREADS", threads)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.code() == Some(0), || format!("job {i}: exit {:?}", out.status.code()))?;
            outputs.push(out.stdout);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("job {i}: outputs differ"))?;
        let parsed: Value = serde_json::from_slice(&outputs[0]).map_err(|e| e.to_string())?;
        ensure(parsed["schema_version"] == 1, || "schema_version missing".into())?;
    }
    Ok(format!("{} report jobs byte-identical across runs and thread counts", jobs.len()))
}

/// Criteria that cannot hold, with the reason; they must still report FAIL.
const UNATTAINABLE: [usize; 1] = [9];

fn main() -> ExitCode {
    let criteria: [(usize, &str, fn() -> Outcome, u64); 10] = [
        (1, "Mp_2n modification", criterion_1, 1),
        (2, "tetractor count", criterion_2, 1),
        (3, "cocycle suites", criterion_3, 30),
        (4, "odd-degree triviality", criterion_4, 1),
        (5, "torus parameterization", criterion_5, 10),
        (6, "Weil-index laws", criterion_6, 10),
        (7, "unramified shift theorem", criterion_7, 10),
        (8, "gamma identity", criterion_8, 1),
        (9, "change-of-bisector functoriality", criterion_9, 5),
        (10, "determinism", criterion_10, 60),
    ];
    let mut unexpected = 0;
    for (id, name, check, bound) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(bound) => {
                Err(format!("took {elapsed:.2?}, bound {bound} s ({detail})"))
            }
            other => other,
        };
        match &outcome {
            Ok(detail) => println!("criterion {id:>2} PASS {name} [{elapsed:.2?}]: {detail}"),
            Err(reason) => println!("criterion {id:>2} FAIL {name} [{elapsed:.2?}]: {reason}"),
        }
        if outcome.is_ok() == UNATTAINABLE.contains(&id) {
            unexpected += 1;
            if outcome.is_ok() {
                println!("criterion {id:>2} was recorded as unattainable but passed; update UNATTAINABLE");
            }
        }
    }
    if unexpected == 0 {
        println!("acceptance: all attainable criteria pass; criteria {UNATTAINABLE:?} fail as recorded");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected outcome(s)");
        ExitCode::FAILURE
    }
}
