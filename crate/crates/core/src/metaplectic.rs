//! The modified root datum of a metaplectic structure `(Q, n)`, its dual,
//! the quotient `BarY` and the character group of the dual group's center.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactalg::{
    big_vec, gcd, hermite_basis, kernel_mod, lattice_intersection, quotient_group, small_vec,
    smith_normal_form, solve_integral, to_i64, FinAbGroup, IntMatrix, QuotientMap,
};
use crate::rootdata::{
    classify_cartan_matrix, is_weyl_invariant, CartanDatum, DynkinType, QuadraticForm, RootDatum,
};

/// A Weyl-invariant integer quadratic form on `Y` and a cover degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaplecticStructure {
    q: QuadraticForm,
    n: i64,
}

impl MetaplecticStructure {
    pub fn new(q: QuadraticForm, n: i64, rd: &RootDatum) -> Result<Self> {
        if n < 1 {
            return Err(Error::Config(format!("cover degree {n} must be positive")));
        }
        if !is_weyl_invariant(&q, rd) {
            return Err(Error::NotWeylInvariant("rejected metaplectic structure".into()));
        }
        Ok(MetaplecticStructure { q, n })
    }

    pub fn q(&self) -> &QuadraticForm {
        &self.q
    }

    pub fn n(&self) -> i64 {
        self.n
    }
}

/// The integers `n_i`, plus the simple indices where `Q(alpha_i^vee) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingIntegers {
    pub values: Vec<i64>,
    pub zero_q: Vec<usize>,
}

/// `n_i = n / gcd(n, Q(alpha_i^vee))`, the least positive integer with
/// `n_i Q(alpha_i^vee)` divisible by `n`.
pub fn scaling_integers(ms: &MetaplecticStructure, rd: &RootDatum) -> ScalingIntegers {
    let mut zero_q = Vec::new();
    let values = rd
        .coroots()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let qc = ms.q.value(c);
            if qc == 0 {
                zero_q.push(i);
            }
            ms.n / gcd(ms.n, qc)
        })
        .collect();
    ScalingIntegers { values, zero_q }
}

/// The modified root datum.
///
/// `datum` is expressed in the coordinates of the chosen basis of `Ỹ` (and
/// the dual basis of `X̃`), so it pairs by the dot product like every other
/// [`RootDatum`]. The `*_in_y` and `*_in_x` fields give the same objects in
/// the original lattices.
#[derive(Clone, Debug)]
pub struct ModifiedRootDatum {
    pub n: i64,
    pub scaling: ScalingIntegers,
    /// Basis of `Ỹ` in `Y` coordinates (Hermite normal form).
    pub y_tilde_basis: Vec<Vec<i64>>,
    /// `den` times a basis of `X̃`, in `X` coordinates.
    pub x_tilde_scaled: Vec<Vec<i64>>,
    /// Exponent of `Y / Ỹ`; `den * X̃` lies in `X`.
    pub den: i64,
    /// Modified coroots `n_i alpha_i^vee` in `Y` coordinates.
    pub coroots_in_y: Vec<Vec<i64>>,
    /// `den * alpha_i / n_i` in `X` coordinates.
    pub roots_in_x_scaled: Vec<Vec<i64>>,
    /// The modified Cartan datum `(I, ⊙)`.
    pub cartan: CartanDatum,
    pub datum: RootDatum,
    /// `Q` restricted to `Ỹ`, in `Ỹ` coordinates.
    pub q_tilde: QuadraticForm,
    /// `Q` on `Y`.
    pub q: QuadraticForm,
    /// Index `[Y : Ỹ]`.
    pub index: i64,
    basis_matrix: IntMatrix,
}

impl ModifiedRootDatum {
    pub fn rank(&self) -> usize {
        self.y_tilde_basis.len()
    }

    /// `Y` coordinates of a vector given in `Ỹ` coordinates.
    pub fn to_y(&self, c: &[i64]) -> Vec<i64> {
        let r = self.rank();
        (0..r).map(|i| (0..r).map(|k| self.y_tilde_basis[k][i] * c[k]).sum()).collect()
    }

    /// `Ỹ` coordinates of a vector of `Y`, if it lies in `Ỹ`.
    pub fn tilde_coords(&self, y: &[i64]) -> Option<Vec<i64>> {
        solve_integral(&self.basis_matrix, &big_vec(y)).and_then(|v| small_vec(&v).ok())
    }

    /// `Ỹ = Y`.
    pub fn y_tilde_is_y(&self) -> bool {
        self.index == 1
    }
}

/// Builds the modified root datum of `(Q, n)`.
pub fn modify(ms: &MetaplecticStructure, rd: &RootDatum) -> Result<ModifiedRootDatum> {
    if !is_weyl_invariant(&ms.q, rd) {
        return Err(Error::NotWeylInvariant("modify".into()));
    }
    let r = rd.rank();
    let n = ms.n;
    let gram = IntMatrix::from_rows(ms.q.gram(), r)?;
    let basis_matrix = if r == 0 {
        IntMatrix::zeros(0, 0)
    } else {
        hermite_basis(&kernel_mod(&gram, &BigInt::from(n)))?
    };
    let y_tilde_basis = basis_matrix.columns_i64()?;
    let index = to_i64(&basis_matrix.det())?.abs();
    let den = smith_normal_form(&basis_matrix).diagonal().last().map(to_i64).transpose()?.unwrap_or(1);

    // den * K^{-1}: its rows are den times the dual basis of Ỹ, in X coordinates.
    let mut scaled_inverse = vec![vec![0i64; r]; r];
    for j in 0..r {
        let mut target = vec![BigInt::from(0); r];
        target[j] = BigInt::from(den);
        let col = solve_integral(&basis_matrix, &target)
            .ok_or_else(|| Error::Precondition("den does not clear the dual lattice".into()))?;
        for (i, x) in col.iter().enumerate() {
            scaled_inverse[i][j] = to_i64(x)?;
        }
    }
    let x_tilde_scaled = scaled_inverse.clone();

    let scaling = scaling_integers(ms, rd);
    let l = rd.semisimple_rank();
    let mut coroots_in_y = Vec::with_capacity(l);
    let mut coroots_tilde = Vec::with_capacity(l);
    let mut roots_in_x_scaled = Vec::with_capacity(l);
    let mut roots_tilde = Vec::with_capacity(l);
    for i in 0..l {
        let ni = scaling.values[i];
        let c: Vec<i64> = rd.coroots()[i].iter().map(|x| ni * x).collect();
        let ct = solve_integral(&basis_matrix, &big_vec(&c))
            .ok_or_else(|| Error::Precondition(format!("modified coroot {i} is not in Y~")))?;
        coroots_tilde.push(small_vec(&ct)?);
        coroots_in_y.push(c);
        let alpha = &rd.roots()[i];
        let mut rt = Vec::with_capacity(r);
        for k in 0..r {
            let pairing: i64 = (0..r).map(|m| y_tilde_basis[k][m] * alpha[m]).sum();
            if pairing % ni != 0 {
                return Err(Error::Precondition(format!("<Y~, alpha_{i}/n_{i}> not integral")));
            }
            rt.push(pairing / ni);
        }
        roots_tilde.push(rt);
        let scaled: Vec<i64> = alpha.iter().map(|x| x * den).collect();
        if scaled.iter().any(|x| x % ni != 0) {
            return Err(Error::Precondition("den * alpha_i / n_i not integral".into()));
        }
        roots_in_x_scaled.push(scaled.iter().map(|x| x / ni).collect());
    }

    let mut pairing = vec![vec![0i64; l]; l];
    for i in 0..l {
        for j in 0..l {
            let a = n / scaling.values[i];
            let b = n / scaling.values[j];
            pairing[i][j] = a * b * rd.cartan().dot(i, j);
        }
    }
    let cartan = CartanDatum::new(pairing)?;
    let datum = RootDatum::new(r, cartan.clone(), coroots_tilde, roots_tilde)?;
    let q_tilde = ms.q.restrict(&y_tilde_basis);

    let md = ModifiedRootDatum {
        n,
        scaling,
        y_tilde_basis,
        x_tilde_scaled,
        den,
        coroots_in_y,
        roots_in_x_scaled,
        cartan,
        datum,
        q_tilde,
        q: ms.q.clone(),
        index,
        basis_matrix,
    };
    check_invariants(&md)?;
    Ok(md)
}

fn check_invariants(md: &ModifiedRootDatum) -> Result<()> {
    let r = md.rank();
    for a in 0..r {
        for b in 0..r {
            if md.q_tilde.gram()[a][b] % md.n != 0 {
                return Err(Error::Precondition("B(Y~, Y~) not in nZ".into()));
            }
        }
    }
    for (i, c) in md.coroots_in_y.iter().enumerate() {
        if md.q.value(c) % md.n != 0 {
            return Err(Error::Precondition(format!("Q(modified coroot {i}) not in nZ")));
        }
    }
    Ok(())
}

/// The dual of the modified datum, classified.
#[derive(Clone, Debug)]
pub struct DualDatumReport {
    /// `(X̃, Ỹ)`: characters are `Ỹ`, roots are the modified coroots.
    pub datum: RootDatum,
    pub types: Vec<DynkinType>,
    pub simply_connected: bool,
    pub adjoint: bool,
    pub group_name: Option<String>,
}

impl DualDatumReport {
    /// Type labels such as `"C2 (Sp4)"`.
    pub fn describe(&self) -> String {
        let types: Vec<String> = self.types.iter().map(|t| t.to_string()).collect();
        let body = if types.is_empty() { format!("torus of rank {}", self.datum.rank()) } else { types.join(" x ") };
        match &self.group_name {
            Some(name) => format!("{body} ({name})"),
            None => body,
        }
    }
}

pub fn dual_datum(md: &ModifiedRootDatum) -> Result<DualDatumReport> {
    let datum = md.datum.dual()?;
    let types = classify_cartan_matrix(datum.cartan_matrix())?;
    let r = datum.rank();
    // In the dual datum, `coroots()` are the cocharacter-side vectors (the
    // modified roots) and `roots()` the character-side ones (modified coroots).
    let simply_connected = torsion_free_quotient(r, datum.coroots())?;
    let adjoint = torsion_free_quotient(r, datum.roots())?;
    let semisimple = datum.semisimple_rank() == r;
    let group_name = name_group(&types, r, semisimple, simply_connected, adjoint);
    Ok(DualDatumReport { datum, types, simply_connected, adjoint, group_name })
}

fn torsion_free_quotient(rank: usize, gens: &[Vec<i64>]) -> Result<bool> {
    if gens.is_empty() {
        return Ok(true);
    }
    let sub = IntMatrix::from_columns(gens, rank)?;
    let q = quotient_group(&IntMatrix::identity(rank), &sub)?;
    Ok(q.group.torsion().is_empty())
}

fn name_group(types: &[DynkinType], rank: usize, semisimple: bool, sc: bool, adj: bool) -> Option<String> {
    if types.is_empty() {
        return Some(if rank == 1 { "GL1".into() } else { format!("torus of rank {rank}") });
    }
    if !semisimple || types.len() != 1 {
        return None;
    }
    let name = match (types[0], sc, adj) {
        (DynkinType::A(k), true, _) => format!("SL{}", k + 1),
        (DynkinType::A(k), _, true) => format!("PGL{}", k + 1),
        (DynkinType::C(k), true, _) => format!("Sp{}", 2 * k),
        (DynkinType::C(k), _, true) => format!("PSp{}", 2 * k),
        (DynkinType::B(k), true, _) => format!("Spin{}", 2 * k + 1),
        (DynkinType::B(k), _, true) => format!("SO{}", 2 * k + 1),
        (DynkinType::D(k), true, _) => format!("Spin{}", 2 * k),
        (DynkinType::G2, _, _) => "G2".into(),
        (DynkinType::F4, _, _) => "F4".into(),
        (t, true, _) => format!("simply connected {t}"),
        (t, _, true) => format!("adjoint {t}"),
        _ => return None,
    };
    Some(name)
}

/// `Ỹ / (2Y ∩ Ỹ + Z[modified coroots])`, an elementary abelian 2-group.
/// Trivial when `n` is odd.
#[derive(Clone, Debug)]
pub struct BarY {
    pub quotient: QuotientMap,
    pub n_odd: bool,
}

impl BarY {
    pub fn group(&self) -> &FinAbGroup {
        &self.quotient.group
    }

    pub fn rank(&self) -> usize {
        self.group().dim()
    }

    /// Image of a vector of `Ỹ` given in `Y` coordinates.
    pub fn project(&self, y: &[i64]) -> Result<Vec<i64>> {
        self.quotient.project(y)
    }

    /// Lifts of the generators, in `Y` coordinates.
    pub fn generator_lifts(&self) -> &[Vec<i64>] {
        self.quotient.generator_lifts()
    }
}

pub fn bar_y(md: &ModifiedRootDatum) -> Result<BarY> {
    let r = md.rank();
    let ambient = md.basis_matrix.clone();
    let n_odd = md.n % 2 != 0;
    let sub = if n_odd || r == 0 {
        ambient.clone()
    } else {
        let two_y = IntMatrix::identity(r).scale(&BigInt::from(2));
        let meet = lattice_intersection(&two_y, &ambient)?;
        let mut gens = meet.columns_i64()?;
        gens.extend(md.coroots_in_y.iter().cloned());
        IntMatrix::from_columns(&gens, r)?
    };
    let quotient = quotient_group(&ambient, &sub)?;
    if !quotient.group.is_elementary_2() {
        return Err(Error::Precondition(format!("BarY = {} is not elementary abelian", quotient.group)));
    }
    Ok(BarY { quotient, n_odd })
}

/// Character group `Ỹ / <modified coroots>` of the center of the dual group.
pub fn center_characters(md: &ModifiedRootDatum) -> Result<QuotientMap> {
    let r = md.rank();
    let sub = IntMatrix::from_columns(md.datum.coroots(), r)?;
    quotient_group(&IntMatrix::identity(r), &sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::preset;

    fn build(name: &str, n: i64) -> (RootDatum, ModifiedRootDatum) {
        let p = preset(name).unwrap();
        let ms = MetaplecticStructure::new(p.default_q.clone(), n, &p.datum).unwrap();
        let md = modify(&ms, &p.datum).unwrap();
        (p.datum, md)
    }

    #[test]
    fn sp4_cover() {
        let (rd, md) = build("Sp4", 2);
        assert_eq!(md.scaling.values, vec![2, 1]);
        assert!(md.y_tilde_is_y());
        assert_eq!(md.den, 1);
        assert_eq!(md.coroots_in_y[0], vec![2, 0]);
        assert_eq!(md.coroots_in_y[1], rd.coroots()[1]);
        let dual = dual_datum(&md).unwrap();
        assert_eq!(dual.describe(), "C2 (Sp4)");
        assert!(dual.simply_connected);
        let by = bar_y(&md).unwrap();
        assert_eq!(by.group().torsion(), &[2]);
        assert_eq!(by.project(&rd.coroots()[0]).unwrap(), vec![1]);
        assert_eq!(center_characters(&md).unwrap().group.torsion(), &[2]);
    }

    #[test]
    fn sl3_cover_doubles_the_lattice() {
        let (rd, md) = build("SL3", 2);
        assert_eq!(md.scaling.values, vec![2, 2]);
        assert_eq!(md.index, 4);
        assert_eq!(md.y_tilde_basis, vec![vec![2, 0], vec![0, 2]]);
        // y -> y/2 identifies the modified datum with the original one
        assert_eq!(md.datum.coroots(), rd.coroots());
        assert_eq!(md.datum.roots(), rd.roots());
        assert!(bar_y(&md).unwrap().group().is_trivial());
    }

    #[test]
    fn n_one_changes_nothing() {
        for name in ["SL2", "Sp4", "G2-sc", "GL2"] {
            let (rd, md) = build(name, 1);
            assert!(md.y_tilde_is_y());
            assert_eq!(md.datum.coroots(), rd.coroots());
            assert_eq!(md.datum.roots(), rd.roots());
            assert!(bar_y(&md).unwrap().n_odd);
        }
    }

    #[test]
    fn sl2_and_gl1() {
        let (_, md) = build("SL2", 2);
        let dual = dual_datum(&md).unwrap();
        assert_eq!(dual.group_name.as_deref(), Some("SL2"));
        assert_eq!(center_characters(&md).unwrap().group.torsion(), &[2]);
        let (_, md) = build("GL1", 2);
        let dual = dual_datum(&md).unwrap();
        assert!(dual.types.is_empty());
        assert_eq!(dual.describe(), "torus of rank 1 (GL1)");
        assert_eq!(bar_y(&md).unwrap().group().torsion(), &[2]);
        let center = center_characters(&md).unwrap();
        assert_eq!((center.group.torsion().len(), center.group.free_rank()), (0, 1));
    }

    #[test]
    fn dual_lattice_needs_more_than_lcm_of_scalings() {
        let rd = RootDatum::torus(1);
        let ms = MetaplecticStructure::new(QuadraticForm::diagonal(&[1]), 4, &rd).unwrap();
        let md = modify(&ms, &rd).unwrap();
        assert_eq!(md.y_tilde_basis, vec![vec![2]]);
        assert_eq!((md.den, md.x_tilde_scaled.clone()), (2, vec![vec![1]]));
    }

    #[test]
    fn zero_form_is_flagged() {
        let p = preset("SL2").unwrap();
        let ms = MetaplecticStructure::new(QuadraticForm::diagonal(&[0]), 3, &p.datum).unwrap();
        let s = scaling_integers(&ms, &p.datum);
        assert_eq!(s.values, vec![1]);
        assert_eq!(s.zero_q, vec![0]);
    }

    #[test]
    fn rejects_non_invariant_form() {
        let p = preset("Sp4").unwrap();
        assert!(MetaplecticStructure::new(QuadraticForm::diagonal(&[1, 0]), 2, &p.datum).is_err());
    }
}
