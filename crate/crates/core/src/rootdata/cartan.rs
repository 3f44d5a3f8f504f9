use crate::error::{Error, Result};
use crate::exactalg::{lcm, IntMatrix};
use num_traits::Signed;

/// A Cartan datum: an index set `0..size` with a symmetric integer pairing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanDatum {
    pairing: Vec<Vec<i64>>,
}

/// Axiom-by-axiom validation of a Cartan datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanReport {
    /// `i.i` is positive and even for every `i`.
    pub diagonal_ok: bool,
    /// `2(i.j)/(i.i)` is a non-positive integer for `i != j`.
    pub off_diagonal_ok: bool,
    /// All leading principal minors are positive.
    pub positive_definite: bool,
    pub cartan_matrix: Option<Vec<Vec<i64>>>,
    /// Braid constants `h(i,j)` in `{2, 3, 4, 6}` (diagonal entries are 0).
    pub braid: Option<Vec<Vec<u32>>>,
}

impl CartanReport {
    pub fn is_valid(&self) -> bool {
        self.diagonal_ok && self.off_diagonal_ok && self.positive_definite && self.braid.is_some()
    }
}

impl CartanDatum {
    /// Accepts any square symmetric integer matrix; use [`validate_cartan`]
    /// to check the axioms.
    pub fn new(pairing: Vec<Vec<i64>>) -> Result<Self> {
        let n = pairing.len();
        if pairing.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("pairing matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if pairing[i][j] != pairing[j][i] {
                    return Err(Error::Shape(format!("pairing not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(CartanDatum { pairing })
    }

    pub fn empty() -> Self {
        CartanDatum { pairing: Vec::new() }
    }

    /// Parses a validated datum, rejecting anything that fails an axiom.
    pub fn validated(pairing: Vec<Vec<i64>>) -> Result<Self> {
        let d = Self::new(pairing)?;
        let report = validate_cartan(&d);
        if !report.is_valid() {
            return Err(Error::InvalidCartan(format!("{report:?}")));
        }
        Ok(d)
    }

    pub fn size(&self) -> usize {
        self.pairing.len()
    }

    pub fn dot(&self, i: usize, j: usize) -> i64 {
        self.pairing[i][j]
    }

    pub fn pairing(&self) -> &[Vec<i64>] {
        &self.pairing
    }

    /// `a_ij = 2(i.j)/(i.i)`; errors when an entry is not integral.
    pub fn cartan_matrix(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.size();
        let mut a = vec![vec![0; n]; n];
        for i in 0..n {
            let ii = self.pairing[i][i];
            if ii <= 0 {
                return Err(Error::InvalidCartan(format!("{i}.{i} = {ii} is not positive")));
            }
            for j in 0..n {
                let num = 2 * self.pairing[i][j];
                if num % ii != 0 {
                    return Err(Error::InvalidCartan(format!("2({i}.{j})/({i}.{i}) not integral")));
                }
                a[i][j] = num / ii;
            }
        }
        Ok(a)
    }
}

/// Braid constant from `4(i.j)^2 / ((i.i)(j.j))`.
fn braid_constant(ij: i64, ii: i64, jj: i64) -> Option<u32> {
    let num = 4 * ij * ij;
    let den = ii * jj;
    if num % den != 0 {
        return None;
    }
    match num / den {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    }
}

pub fn validate_cartan(d: &CartanDatum) -> CartanReport {
    let n = d.size();
    let p = &d.pairing;
    let diagonal_ok = (0..n).all(|i| p[i][i] > 0 && p[i][i] % 2 == 0);
    let off_diagonal_ok = diagonal_ok
        && (0..n).all(|i| {
            (0..n).all(|j| i == j || ((2 * p[i][j]) % p[i][i] == 0 && p[i][j] <= 0))
        });
    let positive_definite = (1..=n).all(|k| {
        let minor: Vec<Vec<i64>> = (0..k).map(|i| p[i][..k].to_vec()).collect();
        IntMatrix::from_rows(&minor, k).map(|m| m.det().is_positive()).unwrap_or(false)
    });
    let cartan_matrix = if off_diagonal_ok { d.cartan_matrix().ok() } else { None };
    let braid = if diagonal_ok {
        let mut h = vec![vec![0u32; n]; n];
        let mut ok = true;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    match braid_constant(p[i][j], p[i][i], p[j][j]) {
                        Some(c) => h[i][j] = c,
                        None => ok = false,
                    }
                }
            }
        }
        ok.then_some(h)
    } else {
        None
    };
    CartanReport { diagonal_ok, off_diagonal_ok, positive_definite, cartan_matrix, braid }
}

/// The dual Cartan datum together with the constant `m_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCartan {
    pub m_i: i64,
    pub datum: CartanDatum,
}

/// Dual datum `i x j = m_I (i.j) / ((i.i)(j.j))` with `m_I = lcm_i 2(i.i)`.
pub fn dual_cartan(d: &CartanDatum) -> Result<DualCartan> {
    let report = validate_cartan(d);
    if !report.is_valid() {
        return Err(Error::InvalidCartan("dual of an invalid datum".into()));
    }
    let n = d.size();
    let m_i = (0..n).fold(1, |acc, i| lcm(acc, 2 * d.dot(i, i)));
    let mut pairing = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let num = m_i * d.dot(i, j);
            let den = d.dot(i, i) * d.dot(j, j);
            if num % den != 0 {
                return Err(Error::InvalidCartan(format!("dual entry ({i},{j}) not integral")));
            }
            pairing[i][j] = num / den;
        }
        if pairing[i][i] % 2 != 0 {
            return Err(Error::InvalidCartan(format!("dual {i}.{i} is odd")));
        }
    }
    let datum = CartanDatum::new(pairing)?;
    let dual_report = validate_cartan(&datum);
    if dual_report.braid != report.braid {
        return Err(Error::InvalidCartan("braid constants changed under duality".into()));
    }
    Ok(DualCartan { m_i, datum })
}
