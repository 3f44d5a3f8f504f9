use std::collections::BTreeSet;

use super::{residue_count, vec_to_mask, Bisector, FModelElem};
use crate::error::{Error, Result};
use crate::metaplectic::ModifiedRootDatum;
use crate::rootdata::RootDatum;

/// A morphism `C1 -> C2`: a function `H: Y/2Y -> Z/2` with
/// `H(y1 + y2) - H(y1) - H(y2) = C2(y1, y2) - C1(y1, y2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BisectorMorphism {
    /// Values indexed by residue bitmask.
    table: Vec<u8>,
    rank: usize,
}

impl BisectorMorphism {
    pub fn from_table(rank: usize, table: Vec<u8>) -> Result<Self> {
        if table.len() != residue_count(rank)? as usize {
            return Err(Error::Shape(format!("H needs {} values", 1u32 << rank)));
        }
        Ok(BisectorMorphism { table: table.into_iter().map(|x| x & 1).collect(), rank })
    }

    pub fn identity(rank: usize) -> Self {
        BisectorMorphism { table: vec![0; 1 << rank], rank }
    }

    /// `H(y) = sum_i a_i y_i + sum_{i<j} b_ij y_i y_j mod 2`.
    pub fn quadratic(rank: usize, linear: &[u8], cross: &[Vec<u8>]) -> Self {
        let table = (0u32..1 << rank)
            .map(|m| {
                let mut acc = 0u8;
                for i in 0..rank {
                    if m >> i & 1 == 1 {
                        acc ^= linear[i] & 1;
                        for j in i + 1..rank {
                            acc ^= cross[i][j] & (m >> j & 1) as u8;
                        }
                    }
                }
                acc
            })
            .collect();
        BisectorMorphism { table, rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn eval(&self, y: &[i64]) -> u8 {
        self.table[vec_to_mask(y) as usize]
    }

    pub fn eval_mask(&self, m: u32) -> u8 {
        self.table[m as usize]
    }

    /// Composition of `C1 -> C2` and `C2 -> C3` is `H1 + H2`.
    pub fn compose(&self, other: &BisectorMorphism) -> BisectorMorphism {
        let table = self.table.iter().zip(&other.table).map(|(a, b)| a ^ b).collect();
        BisectorMorphism { table, rank: self.rank }
    }

    /// `-H = H`.
    pub fn inverse(&self) -> BisectorMorphism {
        self.clone()
    }

    /// Checks the coboundary identity on all pairs of residues.
    pub fn is_morphism(&self, c1: &Bisector, c2: &Bisector) -> bool {
        let count = self.table.len() as u32;
        (0..count).all(|a| {
            (0..count).all(|b| {
                self.table[(a ^ b) as usize] ^ self.table[a as usize] ^ self.table[b as usize]
                    == c1.eval_mask(a, b) ^ c2.eval_mask(a, b)
            })
        })
    }
}

/// Finds a morphism `C1 -> C2` by searching linear parts and pairwise
/// correction bits in increasing order.
pub fn solve_morphism(c1: &Bisector, c2: &Bisector) -> Result<BisectorMorphism> {
    let r = c1.rank();
    if c2.rank() != r {
        return Err(Error::Shape("bisectors of different rank".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
    let bits = r + pairs.len();
    if bits > 30 {
        return Err(Error::Precondition(format!("rank {r} is beyond the morphism search")));
    }
    for code in 0u64..1 << bits {
        let linear: Vec<u8> = (0..r).map(|i| (code >> i & 1) as u8).collect();
        let mut cross = vec![vec![0u8; r]; r];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            cross[i][j] = (code >> (r + k) & 1) as u8;
        }
        let h = BisectorMorphism::quadratic(r, &linear, &cross);
        if h.is_morphism(c1, c2) {
            return Ok(h);
        }
    }
    Err(Error::Precondition("no morphism between these bisectors".into()))
}

/// Every morphism `C1 -> C2` of the form found by [`solve_morphism`], sorted.
pub fn all_morphisms(c1: &Bisector, c2: &Bisector) -> Result<Vec<BisectorMorphism>> {
    let base = solve_morphism(c1, c2)?;
    let r = c1.rank();
    // Any two differ by an automorphism of C1, i.e. a linear function mod 2.
    let mut out: Vec<BisectorMorphism> = (0u32..1 << r)
        .map(|code| {
            let linear: Vec<u8> = (0..r).map(|i| (code >> i & 1) as u8).collect();
            base.compose(&BisectorMorphism::quadratic(r, &linear, &vec![vec![0; r]; r]))
        })
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScMorphismReport {
    pub holds: bool,
    /// Simple indices where `eta2(i)/eta1(i) != (-1)^{H(alpha_i^vee)}`.
    pub failing: Vec<usize>,
}

/// Checks `eta2(i) / eta1(i) = (-1)^{H(alpha_i^vee)}` for every simple index.
pub fn sc_morphism_check(
    h: &BisectorMorphism,
    eta1: &[FModelElem],
    eta2: &[FModelElem],
    rd: &RootDatum,
) -> Result<ScMorphismReport> {
    let l = rd.semisimple_rank();
    if eta1.len() != l || eta2.len() != l {
        return Err(Error::Shape(format!("eta needs {l} values")));
    }
    let failing: Vec<usize> = (0..l)
        .filter(|&i| {
            let ratio = eta2[i].div(&eta1[i]);
            ratio != FModelElem::sign(h.eval(&rd.coroots()[i]), ratio.exps.len())
        })
        .collect();
    Ok(ScMorphismReport { holds: failing.is_empty(), failing })
}

/// Checks `H(y + modified coroot) = H(y)` for every residue `y` of `Y/2Y`
/// lying in the image of `Y~`, so that `H` descends to `BarY`.
pub fn descends_to_bar_y(h: &BisectorMorphism, md: &ModifiedRootDatum) -> bool {
    if h.rank() != md.rank() {
        return false;
    }
    let residues = tilde_residues(md);
    md.coroots_in_y.iter().all(|a| {
        let am = vec_to_mask(a);
        residues.iter().all(|&m| h.eval_mask(m ^ am) == h.eval_mask(m))
    })
}

// The image of Y~ in Y/2Y, spanned by the reductions of its basis.
fn tilde_residues(md: &ModifiedRootDatum) -> BTreeSet<u32> {
    let mut span = BTreeSet::from([0u32]);
    for b in &md.y_tilde_basis {
        let g = vec_to_mask(b);
        let more: Vec<u32> = span.iter().map(|s| s ^ g).collect();
        span.extend(more);
    }
    span
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisector::fair_bisector;
    use crate::metaplectic::{modify, MetaplecticStructure};
    use crate::rootdata::{preset, QuadraticForm};

    fn bisectors_of(q: &QuadraticForm) -> Vec<Bisector> {
        let r = q.rank();
        (0u32..1 << (r * r))
            .map(|bits| {
                let m: Vec<Vec<i64>> =
                    (0..r).map(|i| (0..r).map(|j| (bits >> (i * r + j) & 1) as i64).collect()).collect();
                Bisector::new(&m).unwrap()
            })
            .filter(|c| super::super::is_bisector(c, q))
            .collect()
    }

    // Every set-map Y/2Y -> Z/2 satisfying the coboundary identity.
    fn set_map_morphisms(c1: &Bisector, c2: &Bisector) -> Vec<BisectorMorphism> {
        let r = c1.rank();
        let size = 1usize << r;
        let mut out: Vec<BisectorMorphism> = (0u64..1 << size)
            .map(|bits| {
                let table = (0..size).map(|k| (bits >> k & 1) as u8).collect();
                BisectorMorphism::from_table(r, table).unwrap()
            })
            .filter(|h| h.is_morphism(c1, c2))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn structured_search_finds_every_set_map_morphism() {
        let forms = [
            QuadraticForm::diagonal(&[1]),
            QuadraticForm::diagonal(&[1, 1]),
            QuadraticForm::from_gram(vec![vec![2, 1], vec![1, 2]]).unwrap(),
            QuadraticForm::diagonal(&[1, 2, 3]),
        ];
        for q in &forms {
            let bs = bisectors_of(q);
            for c1 in &bs {
                for c2 in &bs {
                    assert_eq!(all_morphisms(c1, c2).unwrap(), set_map_morphisms(c1, c2));
                }
            }
        }
    }

    #[test]
    fn sl2_has_two_automorphisms() {
        let c = Bisector::new(&[vec![1]]).unwrap();
        assert_eq!(all_morphisms(&c, &c).unwrap().len(), 2);
        assert_eq!(solve_morphism(&c, &c).unwrap(), BisectorMorphism::identity(1));
    }

    #[test]
    fn sp4_forms_are_connected() {
        let diag = Bisector::new(&[vec![1, 0], vec![0, 1]]).unwrap();
        let ones = Bisector::new(&[vec![1, 1], vec![1, 1]]).unwrap();
        let h = solve_morphism(&diag, &ones).unwrap();
        assert_eq!(h.eval(&[1, 1]) ^ h.eval(&[1, 0]) ^ h.eval(&[0, 1]), 1);
        let back = solve_morphism(&ones, &diag).unwrap();
        assert!(h.compose(&back).is_morphism(&diag, &diag));
        assert!(h.inverse().is_morphism(&ones, &diag));
    }

    #[test]
    fn sc_condition_and_descent() {
        let p = preset("Sp4").unwrap();
        let eta = vec![FModelElem::one(1), FModelElem::generator(0, 1)];
        let id = BisectorMorphism::identity(2);
        assert!(sc_morphism_check(&id, &eta, &eta, &p.datum).unwrap().holds);
        let flip = BisectorMorphism::quadratic(2, &[1, 0], &[vec![0, 0], vec![0, 0]]);
        let report = sc_morphism_check(&flip, &eta, &eta, &p.datum).unwrap();
        assert_eq!(report.failing, vec![0, 1]);

        let ms = MetaplecticStructure::new(p.default_q.clone(), 2, &p.datum).unwrap();
        let md = modify(&ms, &p.datum).unwrap();
        let c = fair_bisector(&p.default_q, &p.datum).unwrap();
        for h in all_morphisms(&c, &c).unwrap() {
            if sc_morphism_check(&h, &eta, &eta, &p.datum).unwrap().holds {
                assert!(descends_to_bar_y(&h, &md));
            }
        }
    }
}
