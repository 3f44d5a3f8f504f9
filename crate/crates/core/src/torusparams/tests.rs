use std::collections::{BTreeSet, VecDeque};

use super::*;
use crate::bisector::fair_bisector;
use crate::exactalg::MuElem;
use crate::localfield::{symbol_datum, FieldModel};
use crate::metaplectic::{modify, MetaplecticStructure};
use crate::rootdata::{preset, RootDatum};

fn t_sharp(rd: &RootDatum, q: &QuadraticForm, n: i64, field: FieldModel) -> MetaTorusModel {
    let ms = MetaplecticStructure::new(q.clone(), n, rd).unwrap();
    let md = modify(&ms, rd).unwrap();
    let sd = symbol_datum(&field, n as u32).unwrap();
    build_t_sharp(&md, &sd, &fair_bisector(q, rd).unwrap()).unwrap()
}

fn gl1(q: i64, n: i64, field: FieldModel) -> MetaTorusModel {
    t_sharp(&RootDatum::torus(1), &QuadraticForm::diagonal(&[q]), n, field)
}

fn q3() -> FieldModel {
    FieldModel::padic(3).unwrap()
}

fn assert_all(reports: &[SuiteReport]) {
    for r in reports {
        assert!(r.passed(), "{} failed: {:?}", r.name, r.witness);
    }
}

/// Independent oracle: propagate values along the Cayley graph from chosen
/// images of `y(pi)`, `y(u0)`, `zeta`, rejecting on conflict.
fn oracle_characters(model: &MetaTorusModel, epsilon: i64) -> BTreeSet<Vec<MuElem>> {
    let m = model.character_order();
    let mut gens: Vec<CoverElement> = model.generators().into_iter().map(|g| g.3).collect();
    gens.push(model.central(1));
    let zeta_value = MuElem::new(m, epsilon * (m / model.n()) as i64);
    let mut out = BTreeSet::new();
    let free = gens.len() - 1;
    for code in 0..(m as usize).pow(free as u32) {
        let mut vals: Vec<MuElem> = (0..free)
            .map(|k| MuElem::new(m, ((code / (m as usize).pow(k as u32)) % m as usize) as i64))
            .collect();
        vals.push(zeta_value);
        let mut table: Vec<Option<MuElem>> = vec![None; model.size()];
        table[model.index(&model.identity())] = Some(MuElem::one(m));
        let mut queue = VecDeque::from([model.identity()]);
        let mut ok = true;
        while let Some(x) = queue.pop_front() {
            let vx = table[model.index(&x)].unwrap();
            for (g, &vg) in gens.iter().zip(&vals) {
                let y = model.multiply(&x, g);
                let k = model.index(&y);
                match table[k] {
                    None => {
                        table[k] = Some(vx.mul(vg));
                        queue.push_back(y);
                    }
                    Some(v) if v != vx.mul(vg) => ok = false,
                    _ => {}
                }
            }
        }
        if ok {
            out.insert(table.into_iter().map(Option::unwrap).collect());
        }
    }
    out
}

#[test]
fn gl1_cover_examples() {
    let model = gl1(1, 2, q3());
    assert_eq!(model.size(), 8);
    assert_all(&model.verify(2));
    let pi = model.uniformizer().unwrap();
    let x = model.element(&[1], pi);
    // y(pi)^2 = y(pi^2) (pi, pi)_2 and pi^2 is trivial in M.
    assert_eq!(model.multiply(&x, &x), model.central(1));

    let trivial = gl1(1, 1, q3());
    assert_eq!(trivial.size(), 1);
    assert_eq!(genuine_characters(&trivial, 1).unwrap().len(), 1);
}

#[test]
fn full_cover_commutators() {
    let t2 = preset("T2").unwrap();
    let q = &t2.default_q;
    let sd = symbol_datum(&q3(), 2).unwrap();
    let cover = build_cover(q, &fair_bisector(q, &t2.datum).unwrap(), &sd).unwrap();
    assert_all(&cover.verify(1));

    // GL1 with n = 4 has commutator (u1, u2)_4^2, which is not trivial.
    let q = QuadraticForm::diagonal(&[1]);
    let sd = symbol_datum(&FieldModel::padic(5).unwrap(), 4).unwrap();
    let cover = build_cover(&q, &fair_bisector(&q, &RootDatum::torus(1)).unwrap(), &sd).unwrap();
    assert_all(&cover.verify(1));
    let elems = cover.elements();
    assert!(elems.iter().any(|a| elems.iter().any(|b| cover.commutator(a, b) != cover.identity())));
    let report = center_image_check(&cover, &[vec![2]]).unwrap();
    assert!(report.equal, "{report:?}");
    assert_eq!((report.classes, report.central), (16, 4));
}

#[test]
fn center_matches_modified_lattice() {
    let cases = [
        ("GL1", QuadraticForm::diagonal(&[0]), 2, q3()),
        ("GL1", QuadraticForm::diagonal(&[1]), 2, q3()),
        ("T2", QuadraticForm::diagonal(&[1, 1]), 2, q3()),
        ("Sp4", preset("Sp4").unwrap().default_q, 2, FieldModel::padic(5).unwrap()),
        ("SL3", preset("SL3").unwrap().default_q, 2, q3()),
        ("GL1", QuadraticForm::diagonal(&[1]), 3, FieldModel::padic(7).unwrap()),
        ("T2", QuadraticForm::diagonal(&[1, 1]), 2, FieldModel::real()),
    ];
    for (name, q, n, field) in cases {
        let rd = preset(name).unwrap().datum;
        let ms = MetaplecticStructure::new(q.clone(), n, &rd).unwrap();
        let md = modify(&ms, &rd).unwrap();
        let sd = symbol_datum(&field, n as u32).unwrap();
        let cover = build_cover(&q, &fair_bisector(&q, &rd).unwrap(), &sd).unwrap();
        let report = center_image_check(&cover, &md.y_tilde_basis).unwrap();
        assert!(report.equal, "{name}: {report:?}");
        if q.gram().iter().flatten().all(|&b| b == 0) {
            assert_eq!(report.central, report.classes);
        }
    }
}

#[test]
fn characters_match_oracle() {
    for model in [gl1(1, 2, q3()), gl1(2, 2, q3()), gl1(1, 2, FieldModel::real()), gl1(1, 3, FieldModel::padic(7).unwrap())] {
        for eps in [1, -1] {
            let found: BTreeSet<Vec<MuElem>> =
                genuine_characters(&model, eps).unwrap().iter().map(|c| c.table().to_vec()).collect();
            assert_eq!(found, oracle_characters(&model, eps));
            assert_eq!(found.len(), model.m_size());
        }
        let plus: BTreeSet<GenuineCharacter> = genuine_characters(&model, 1).unwrap().into_iter().collect();
        let minus: BTreeSet<GenuineCharacter> =
            genuine_characters(&model, -1).unwrap().iter().map(GenuineCharacter::conjugate).collect();
        assert_eq!(plus, minus);
    }
}

#[test]
fn bijection_holds() {
    let sp4 = preset("Sp4").unwrap();
    let sl3 = preset("SL3").unwrap();
    let models = [
        gl1(1, 2, q3()),
        gl1(1, 2, FieldModel::padic(5).unwrap()),
        gl1(1, 2, FieldModel::real()),
        gl1(2, 2, q3()),
        gl1(1, 3, FieldModel::padic(7).unwrap()),
        gl1(1, 1, q3()),
        t_sharp(&sp4.datum, &sp4.default_q, 2, q3()),
        t_sharp(&sl3.datum, &sl3.default_q, 2, FieldModel::real()),
    ];
    for model in models {
        let report = param_character_bijection(&model).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.characters, model.m_size().pow(model.rank() as u32));
    }
}

#[test]
fn odd_degree_parameters_are_homomorphisms() {
    let model = gl1(1, 3, FieldModel::padic(7).unwrap());
    for phi in enumerate_param_functions(&model).unwrap() {
        let f = &phi.tables[0];
        for a in 0..model.m_size() {
            for b in 0..model.m_size() {
                assert_eq!(f[model.m_add(a, b)], f[a].mul(f[b]));
            }
        }
    }
}

#[test]
fn parameter_check_rejects_a_broken_table() {
    let model = gl1(1, 2, q3());
    let mut phi = enumerate_param_functions(&model).unwrap().remove(0);
    assert!(phi.check(&model, 1).passed());
    phi.tables[0][1] = phi.tables[0][1].mul(MuElem::new(model.character_order(), 1));
    assert!(!phi.check(&model, 1).passed());
}
