use super::Bisector;
use crate::error::{Error, Result};
use crate::metaplectic::{BarY, ModifiedRootDatum};
use crate::rootdata::QuadraticForm;

/// A function `kappa: BarY -> Z/4` with `kappa(a + b) - kappa(a) - kappa(b)
/// = 2 C(a, b)` and `kappa(a) = Q(a) mod 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tetractor {
    /// Values in lexicographic element order of `BarY`.
    table: Vec<u8>,
    rank: usize,
}

impl Tetractor {
    pub fn from_table(rank: usize, table: Vec<u8>) -> Result<Self> {
        if table.len() != 1 << rank {
            return Err(Error::Shape(format!("tetractor on (Z/2)^{rank} needs {} values", 1u32 << rank)));
        }
        Ok(Tetractor { table: table.into_iter().map(|x| x % 4).collect(), rank })
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `kappa` at a `BarY` element given by its coordinates.
    pub fn value(&self, bar: &[i64]) -> u8 {
        let idx = bar.iter().fold(0usize, |acc, x| acc * 2 + x.rem_euclid(2) as usize);
        self.table[idx]
    }

    /// `kappa` at the image of a vector of `Y~` given in `Y` coordinates.
    pub fn at(&self, bar_y: &BarY, y: &[i64]) -> Result<u8> {
        Ok(self.value(&bar_y.project(y)?))
    }

    /// `-kappa`, again a tetractor.
    pub fn negated(&self) -> Tetractor {
        Tetractor { table: self.table.iter().map(|&x| (4 - x) % 4).collect(), rank: self.rank }
    }

    /// `kappa + 2 lambda` for a homomorphism `lambda` given on the basis.
    pub fn shift(&self, lambda: &[u8]) -> Tetractor {
        let table = (0..self.table.len())
            .map(|idx| {
                let bits = self.bits(idx);
                let l: u8 = bits.iter().zip(lambda).map(|(b, x)| b & x).fold(0, |a, b| a ^ b);
                (self.table[idx] + 2 * l) % 4
            })
            .collect();
        Tetractor { table, rank: self.rank }
    }

    fn bits(&self, idx: usize) -> Vec<u8> {
        (0..self.rank).map(|i| (idx >> (self.rank - 1 - i) & 1) as u8).collect()
    }
}

fn lift(bar_y: &BarY, bits: &[u8], ambient: usize) -> Vec<i64> {
    let mut y = vec![0i64; ambient];
    for (b, g) in bits.iter().zip(bar_y.generator_lifts()) {
        if *b == 1 {
            for (yk, gk) in y.iter_mut().zip(g) {
                *yk += gk;
            }
        }
    }
    y
}

/// Every tetractor of `C` on `BarY`, sorted by value table.
///
/// One is built from the basis: `kappa(b_i) = Q(b_i) mod 2`, extended by
/// `kappa(sum e_i b_i) = sum e_i kappa(b_i) + 2 sum_{i<j} e_i e_j C(b_i, b_j)`.
/// The rest are its shifts by `2 lambda`, `lambda` in `Hom(BarY, Z/2)`.
pub fn tetractors(c: &Bisector, q: &QuadraticForm, bar_y: &BarY) -> Result<Vec<Tetractor>> {
    let rank = bar_y.rank();
    if rank > 12 {
        return Err(Error::Precondition(format!("BarY of rank {rank} is too large to tabulate")));
    }
    let ambient = c.rank();
    let lifts = bar_y.generator_lifts();
    let base_vals: Vec<u8> = lifts.iter().map(|b| q.value(b).rem_euclid(2) as u8).collect();
    let size = 1usize << rank;
    let mut table = Vec::with_capacity(size);
    for idx in 0..size {
        let bits: Vec<u8> = (0..rank).map(|i| (idx >> (rank - 1 - i) & 1) as u8).collect();
        let mut k: u32 = 0;
        for i in 0..rank {
            if bits[i] == 0 {
                continue;
            }
            k += base_vals[i] as u32;
            for j in i + 1..rank {
                if bits[j] == 1 {
                    k += 2 * c.eval(&lifts[i], &lifts[j]) as u32;
                }
            }
        }
        table.push((k % 4) as u8);
    }
    let kappa0 = Tetractor { table, rank };
    verify(&kappa0, c, q, bar_y, ambient)?;
    let mut all: Vec<Tetractor> = (0..size)
        .map(|code| {
            let lambda: Vec<u8> = (0..rank).map(|i| (code >> i & 1) as u8).collect();
            kappa0.shift(&lambda)
        })
        .collect();
    all.sort();
    Ok(all)
}

/// Checks the defining identities of a tetractor on all pairs.
pub fn is_tetractor(kappa: &Tetractor, c: &Bisector, q: &QuadraticForm, bar_y: &BarY) -> bool {
    verify(kappa, c, q, bar_y, c.rank()).is_ok()
}

fn verify(kappa: &Tetractor, c: &Bisector, q: &QuadraticForm, bar_y: &BarY, ambient: usize) -> Result<()> {
    let size = kappa.table.len();
    let fail = |what: &str| Err(Error::Precondition(format!("tetractor identity fails: {what}")));
    if kappa.table.first() != Some(&0) {
        return fail("kappa(0) != 0");
    }
    for a in 0..size {
        let la = lift(bar_y, &kappa.bits(a), ambient);
        if kappa.table[a] as i64 % 2 != q.value(&la).rem_euclid(2) {
            return fail("parity");
        }
        for b in 0..size {
            let lb = lift(bar_y, &kappa.bits(b), ambient);
            let lhs = (kappa.table[a ^ b] as i64 - kappa.table[a] as i64 - kappa.table[b] as i64).rem_euclid(4);
            if lhs != 2 * c.eval(&la, &lb) as i64 {
                return fail("coboundary");
            }
        }
    }
    Ok(())
}

/// Outcome of [`fair_descent_check`]; the witness names a modified coroot
/// index and a basis vector of `Y~` (in `Y` coordinates) pairing oddly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentReport {
    pub holds: bool,
    pub witness: Option<(usize, Vec<i64>)>,
}

/// Checks `C(modified coroot, y) = C(y, modified coroot) = 0` for every
/// basis vector `y` of `Y~`, so that `C` descends to a symmetric form on
/// `BarY`. Vacuous for odd `n`.
pub fn fair_descent_check(c: &Bisector, md: &ModifiedRootDatum) -> DescentReport {
    if md.n % 2 != 0 {
        return DescentReport { holds: true, witness: None };
    }
    for (i, a) in md.coroots_in_y.iter().enumerate() {
        for y in &md.y_tilde_basis {
            if c.eval(a, y) == 1 || c.eval(y, a) == 1 {
                return DescentReport { holds: false, witness: Some((i, y.clone())) };
            }
        }
    }
    DescentReport { holds: true, witness: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisector::fair_bisector;
    use crate::metaplectic::{bar_y, modify, MetaplecticStructure};
    use crate::rootdata::{preset, RootDatum};

    fn setup(rd: &RootDatum, q: &QuadraticForm, n: i64) -> (ModifiedRootDatum, BarY, Bisector) {
        let ms = MetaplecticStructure::new(q.clone(), n, rd).unwrap();
        let md = modify(&ms, rd).unwrap();
        let by = bar_y(&md).unwrap();
        (md, by, fair_bisector(q, rd).unwrap())
    }

    // Every table BarY -> Z/4 satisfying the identities.
    fn brute_force(c: &Bisector, q: &QuadraticForm, by: &BarY) -> Vec<Tetractor> {
        let r = by.rank();
        let size = 1usize << r;
        (0u64..1 << (2 * size))
            .map(|code| {
                let table = (0..size).map(|k| (code >> (2 * k) & 3) as u8).collect();
                Tetractor::from_table(r, table).unwrap()
            })
            .filter(|k| is_tetractor(k, c, q, by))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    #[test]
    fn mp4_has_two_tetractors() {
        let p = preset("Sp4").unwrap();
        let (_, by, c) = setup(&p.datum, &p.default_q, 2);
        let ks = tetractors(&c, &p.default_q, &by).unwrap();
        assert_eq!(ks.len(), 2);
        let values: Vec<u8> = ks.iter().map(|k| k.value(&[1])).collect();
        assert_eq!(values, vec![1, 3]);
        assert_eq!(ks, brute_force(&c, &p.default_q, &by));
    }

    #[test]
    fn trivial_bar_y() {
        let p = preset("SL3").unwrap();
        let (_, by, c) = setup(&p.datum, &p.default_q, 2);
        let ks = tetractors(&c, &p.default_q, &by).unwrap();
        assert_eq!(ks, vec![Tetractor::from_table(0, vec![0]).unwrap()]);
    }

    #[test]
    fn rank_two_torus_has_four() {
        let p = preset("T2").unwrap();
        let (_, by, c) = setup(&p.datum, &p.default_q, 2);
        assert_eq!(c, Bisector::new(&[vec![1, 0], vec![0, 1]]).unwrap());
        let ks = tetractors(&c, &p.default_q, &by).unwrap();
        assert_eq!(ks.len(), 4);
        assert_eq!(ks, brute_force(&c, &p.default_q, &by));
    }

    #[test]
    fn descent() {
        let p = preset("Sp4").unwrap();
        let (md, _, c) = setup(&p.datum, &p.default_q, 2);
        assert!(fair_descent_check(&c, &md).holds);
        let diag = Bisector::new(&[vec![1, 0], vec![0, 1]]).unwrap();
        let r = fair_descent_check(&diag, &md);
        assert_eq!(r.witness, Some((1, vec![1, 0])));
        let ms = MetaplecticStructure::new(p.default_q.clone(), 3, &p.datum).unwrap();
        assert!(fair_descent_check(&diag, &modify(&ms, &p.datum).unwrap()).holds);
    }
}
