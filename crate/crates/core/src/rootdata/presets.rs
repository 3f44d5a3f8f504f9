use super::cartan::CartanDatum;
use super::datum::RootDatum;
use super::quadratic::QuadraticForm;
use crate::error::{Error, Result};

/// A named root datum with a default Weyl-invariant form.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: String,
    pub datum: RootDatum,
    pub default_q: QuadraticForm,
}

const NAMES: &[&str] =
    &["SL2", "PGL2", "SL3", "GL1", "GL2", "Sp2", "Sp4", "Sp6", "Spin5", "G2-sc", "T2"];

pub fn preset_names() -> &'static [&'static str] {
    NAMES
}

/// `Sp_{2n}` on `Y = Z^n` with simple roots `2e_1` (long) and `e_k - e_{k-1}`.
pub fn symplectic(n: usize) -> Result<RootDatum> {
    if n == 0 {
        return Err(Error::Config("Sp0 is not a group".into()));
    }
    let mut pairing = vec![vec![0i64; n]; n];
    pairing[0][0] = 4;
    for k in 1..n {
        pairing[k][k] = 2;
        pairing[k - 1][k] = if k == 1 { -2 } else { -1 };
        pairing[k][k - 1] = pairing[k - 1][k];
    }
    let e = |k: usize| -> Vec<i64> {
        let mut v = vec![0; n];
        v[k] = 1;
        v
    };
    let mut coroots = vec![e(0)];
    let mut roots = vec![e(0).iter().map(|x| 2 * x).collect()];
    for k in 1..n {
        let d: Vec<i64> = e(k).iter().zip(e(k - 1)).map(|(a, b)| a - b).collect();
        coroots.push(d.clone());
        roots.push(d);
    }
    RootDatum::new(n, CartanDatum::new(pairing)?, coroots, roots)
}

pub fn preset(name: &str) -> Result<Preset> {
    let cartan = |p: Vec<Vec<i64>>| CartanDatum::new(p);
    let (datum, default_q) = match name {
        "SL2" => (RootDatum::simply_connected(cartan(vec![vec![2]])?)?, QuadraticForm::diagonal(&[1])),
        "PGL2" => (RootDatum::adjoint(cartan(vec![vec![2]])?)?, QuadraticForm::diagonal(&[1])),
        "SL3" => {
            let rd = RootDatum::simply_connected(cartan(vec![vec![2, -1], vec![-1, 2]])?)?;
            let q = QuadraticForm::from_coroot_values(&rd, &[1, 1])?;
            (rd, q)
        }
        "GL1" => (RootDatum::torus(1), QuadraticForm::diagonal(&[1])),
        "T2" => (RootDatum::torus(2), QuadraticForm::diagonal(&[1, 1])),
        "GL2" => (
            RootDatum::new(2, cartan(vec![vec![2]])?, vec![vec![1, -1]], vec![vec![1, -1]])?,
            QuadraticForm::diagonal(&[1, 1]),
        ),
        "Sp2" => (symplectic(1)?, QuadraticForm::diagonal(&[1])),
        "Sp4" => (symplectic(2)?, QuadraticForm::diagonal(&[1, 1])),
        "Sp6" => (symplectic(3)?, QuadraticForm::diagonal(&[1, 1, 1])),
        "Spin5" => {
            let rd = RootDatum::simply_connected(cartan(vec![vec![4, -2], vec![-2, 2]])?)?;
            let q = QuadraticForm::from_coroot_values(&rd, &[1, 2])?;
            (rd, q)
        }
        "G2-sc" => {
            let rd = RootDatum::simply_connected(cartan(vec![vec![2, -3], vec![-3, 6]])?)?;
            let q = QuadraticForm::from_coroot_values(&rd, &[3, 1])?;
            (rd, q)
        }
        other => return Err(Error::Config(format!("unknown preset {other:?}"))),
    };
    Ok(Preset { name: name.to_string(), datum, default_q })
}
