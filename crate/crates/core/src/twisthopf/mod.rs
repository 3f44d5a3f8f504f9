//! The toral double twist `O(Gamma) (x)_{tau, chi} O(T~v)` over `Z[i]`.
//!
//! The Galois side is the finite group `A = F^x / F^{xn}` of a
//! [`SymbolDatum`]. Lattice vectors are given in coordinates of the chosen
//! basis of `Y~` and live in a cube window `[-K, K]^r`; results leaving the
//! window raise [`Error::WindowOverflow`].

mod cocycles;
mod hopf;
mod points;

pub use cocycles::{
    build_chi, build_omega, build_tau, verify_compatible, ChiCocycle, TauCocycle, Trivializer,
};
pub use hopf::{
    alpha_h, alpha_omega, sign_only_alpha_h, verify_diagonal_morphism, DiagonalMap, HopfElement,
    Key, TensorElement, ToralTwistedHopf,
};
pub use points::{omega_point_map, Point, PointGroup};

use rayon::prelude::*;

use crate::error::{Error, Result, VecDisplay};
use crate::exactalg::{window_points, GaussInt, MuElem};
use crate::localfield::SymbolDatum;
use crate::metaplectic::ModifiedRootDatum;
use crate::rootdata::QuadraticForm;

pub const DEFAULT_WINDOW: i64 = 3;

/// Outcome of one exhaustive verification suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub checked: u64,
    pub failures: u64,
    /// The first failing cell in sweep order.
    pub witness: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn ok(name: &str, checked: u64) -> Self {
        SuiteReport { name: name.to_string(), checked, failures: 0, witness: None }
    }
}

pub fn all_passed(reports: &[SuiteReport]) -> bool {
    reports.iter().all(SuiteReport::passed)
}

/// Runs `cell` over `0..outer` in parallel. Each call returns its number of
/// checks and failures plus its first witness; witnesses are merged in index
/// order so the report does not depend on scheduling.
pub(crate) fn sweep<F>(name: &str, outer: usize, cell: F) -> SuiteReport
where
    F: Fn(usize) -> (u64, u64, Option<String>) + Sync + Send,
{
    let parts: Vec<(u64, u64, Option<String>)> = (0..outer).into_par_iter().map(&cell).collect();
    let mut report = SuiteReport::ok(name, 0);
    for (checked, failures, witness) in parts {
        report.checked += checked;
        report.failures += failures;
        if report.witness.is_none() {
            report.witness = witness;
        }
    }
    report
}

/// Tally helper for sweep cells.
#[derive(Default)]
pub(crate) struct Tally {
    pub checked: u64,
    pub failures: u64,
    pub witness: Option<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn finish(self) -> (u64, u64, Option<String>) {
        (self.checked, self.failures, self.witness)
    }
}

/// The shared setting: the Galois model, the modified datum and the window.
#[derive(Clone, Debug)]
pub struct TwistContext {
    pub sd: SymbolDatum,
    pub md: ModifiedRootDatum,
    pub window: i64,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
    points: Vec<Vec<i64>>,
}

impl TwistContext {
    pub fn new(md: &ModifiedRootDatum, sd: &SymbolDatum, window: i64) -> Result<Self> {
        if md.n != sd.n as i64 {
            return Err(Error::Config(format!("cover degree {} but symbols of degree {}", md.n, sd.n)));
        }
        if window < 1 {
            return Err(Error::Config("window must be at least 1".into()));
        }
        let elems = sd.elements();
        let mul = elems
            .iter()
            .map(|a| elems.iter().map(|b| sd.group.index_of(&sd.group.add(a, b))).collect())
            .collect();
        let inv = elems.iter().map(|a| sd.group.index_of(&sd.group.neg(a))).collect();
        let identity = sd.group.index_of(&sd.group.zero());
        let points = window_points(md.rank(), window);
        Ok(TwistContext { sd: sd.clone(), md: md.clone(), window, mul, inv, identity, points })
    }

    pub fn n(&self) -> i64 {
        self.md.n
    }

    pub fn rank(&self) -> usize {
        self.md.rank()
    }

    /// `Q` on `Y~` coordinates.
    pub fn q(&self) -> &QuadraticForm {
        &self.md.q_tilde
    }

    pub fn group_size(&self) -> usize {
        self.sd.size()
    }

    pub fn gmul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn ginv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn h(&self, a: usize, b: usize) -> MuElem {
        self.sd.h_index(a, b)
    }

    /// `h(a, b)^e`, which the callers only use when it is `+-1`.
    pub fn h_pow(&self, a: usize, b: usize, e: i64) -> GaussInt {
        sign_of(self.h(a, b).pow(e))
    }

    /// Window points in lexicographic order.
    pub fn window_points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn in_window(&self, c: &[i64]) -> bool {
        c.iter().all(|x| x.abs() <= self.window)
    }

    pub fn check_window(&self, c: &[i64]) -> Result<()> {
        if self.in_window(c) {
            Ok(())
        } else {
            Err(Error::WindowOverflow(VecDisplay(c.to_vec())))
        }
    }

    /// `Y` coordinates of a `Y~` coordinate vector.
    pub fn to_y(&self, c: &[i64]) -> Vec<i64> {
        self.md.to_y(c)
    }

    /// Modified coroots in `Y~` coordinates.
    pub fn coroots(&self) -> &[Vec<i64>] {
        self.md.datum.coroots()
    }

    pub fn group_label(&self, a: usize) -> String {
        format!("{:?}", self.sd.elements()[a])
    }
}

pub(crate) fn sign_of(m: MuElem) -> GaussInt {
    match m.to_sign() {
        Some(s) => GaussInt::sign((s < 0) as i64),
        None => panic!("{m} is not +-1"),
    }
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}
