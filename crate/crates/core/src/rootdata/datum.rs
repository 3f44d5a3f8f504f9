use std::collections::{BTreeSet, VecDeque};

use super::cartan::{validate_cartan, CartanDatum};
use crate::error::{Error, Result};
use crate::exactalg::dot;

/// Which lattice a vector lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The cocharacter lattice `Y`.
    Cochar,
    /// The character lattice `X`.
    Char,
}

/// A root datum `(Y, X)` with `Y = X = Z^rank` paired by the dot product.
///
/// `coroots[i]` lies in `Y` and `roots[i]` in `X`; the Cartan datum may be
/// empty (a torus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    rank: usize,
    cartan: CartanDatum,
    cartan_matrix: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
}

/// All roots with their coroots, index-matched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
}

impl RootDatum {
    pub fn new(
        rank: usize,
        cartan: CartanDatum,
        coroots: Vec<Vec<i64>>,
        roots: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let l = cartan.size();
        if coroots.len() != l || roots.len() != l {
            return Err(Error::InvalidRootDatum(format!(
                "{l} simple indices but {} coroots and {} roots",
                coroots.len(),
                roots.len()
            )));
        }
        if coroots.iter().chain(&roots).any(|v| v.len() != rank) {
            return Err(Error::InvalidRootDatum(format!("vectors must have length {rank}")));
        }
        let report = validate_cartan(&cartan);
        if !report.is_valid() {
            return Err(Error::InvalidCartan(format!("{report:?}")));
        }
        let cartan_matrix = report.cartan_matrix.expect("valid datum");
        for i in 0..l {
            for j in 0..l {
                let got = dot(&coroots[i], &roots[j]);
                if got != cartan_matrix[i][j] {
                    return Err(Error::InvalidRootDatum(format!(
                        "<coroot {i}, root {j}> = {got}, expected a_{i}{j} = {}",
                        cartan_matrix[i][j]
                    )));
                }
            }
        }
        Ok(RootDatum { rank, cartan, cartan_matrix, coroots, roots })
    }

    /// A torus of the given rank (no roots).
    pub fn torus(rank: usize) -> Self {
        RootDatum {
            rank,
            cartan: CartanDatum::empty(),
            cartan_matrix: Vec::new(),
            coroots: Vec::new(),
            roots: Vec::new(),
        }
    }

    /// Simply connected datum: `Y` has the simple coroots as basis.
    pub fn simply_connected(cartan: CartanDatum) -> Result<Self> {
        let a = cartan.cartan_matrix()?;
        let l = a.len();
        let coroots = (0..l).map(|i| unit(l, i)).collect();
        let roots = (0..l).map(|j| (0..l).map(|i| a[i][j]).collect()).collect();
        Self::new(l, cartan, coroots, roots)
    }

    /// Adjoint datum: `X` has the simple roots as basis.
    pub fn adjoint(cartan: CartanDatum) -> Result<Self> {
        let a = cartan.cartan_matrix()?;
        let l = a.len();
        let coroots = a.clone();
        let roots = (0..l).map(|j| unit(l, j)).collect();
        Self::new(l, cartan, coroots, roots)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of simple roots.
    pub fn semisimple_rank(&self) -> usize {
        self.coroots.len()
    }

    pub fn cartan(&self) -> &CartanDatum {
        &self.cartan
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan_matrix
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    /// The dual datum `(X, Y)`.
    pub fn dual(&self) -> Result<RootDatum> {
        let dual = super::cartan::dual_cartan(&self.cartan)?;
        RootDatum::new(self.rank, dual.datum, self.roots.clone(), self.coroots.clone())
    }

    /// `s_i(y) = y - <y, alpha_i> alpha_i^vee` or `s_i(x) = x - <alpha_i^vee, x> alpha_i`.
    pub fn simple_reflection(&self, i: usize, v: &[i64], side: Side) -> Result<Vec<i64>> {
        if i >= self.coroots.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.coroots.len() });
        }
        if v.len() != self.rank {
            return Err(Error::Shape(format!("vector of length {} in rank {}", v.len(), self.rank)));
        }
        let (pair_with, shift) = match side {
            Side::Cochar => (&self.roots[i], &self.coroots[i]),
            Side::Char => (&self.coroots[i], &self.roots[i]),
        };
        let k = dot(v, pair_with);
        Ok(v.iter().zip(shift).map(|(a, b)| a - k * b).collect())
    }

    /// Orbit closure of the simple (root, coroot) pairs under the simple
    /// reflections. Roots come out sorted lexicographically.
    pub fn generate_roots(&self) -> Result<RootSystem> {
        let l = self.coroots.len();
        let bound = (2 * l * l).max(240);
        let mut seen: BTreeSet<(Vec<i64>, Vec<i64>)> = BTreeSet::new();
        let mut queue: VecDeque<(Vec<i64>, Vec<i64>)> = VecDeque::new();
        for i in 0..l {
            let pair = (self.roots[i].clone(), self.coroots[i].clone());
            if seen.insert(pair.clone()) {
                queue.push_back(pair);
            }
        }
        while let Some((root, coroot)) = queue.pop_front() {
            for i in 0..l {
                let pair = (
                    self.simple_reflection(i, &root, Side::Char)?,
                    self.simple_reflection(i, &coroot, Side::Cochar)?,
                );
                if seen.insert(pair.clone()) {
                    if seen.len() > bound {
                        return Err(Error::NotFiniteType(format!("root orbit exceeds {bound}")));
                    }
                    queue.push_back(pair);
                }
            }
        }
        let (roots, coroots) = seen.into_iter().unzip();
        Ok(RootSystem { roots, coroots })
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::presets::preset;

    #[test]
    fn reflections() {
        let sl2 = preset("SL2").unwrap().datum;
        assert_eq!(sl2.simple_reflection(0, &[1], Side::Cochar).unwrap(), vec![-1]);
        assert_eq!(sl2.simple_reflection(0, &[0], Side::Cochar).unwrap(), vec![0]);
        assert!(matches!(
            sl2.simple_reflection(1, &[0], Side::Cochar),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn sp4_weights_match_signed_permutations() {
        // alpha_1 = 2e1 (long) flips the sign of the first coordinate,
        // alpha_2 = e2 - e1 swaps the two coordinates.
        let sp4 = preset("Sp4").unwrap().datum;
        for x in -2..=2 {
            for y in -2..=2 {
                assert_eq!(sp4.simple_reflection(0, &[x, y], Side::Char).unwrap(), vec![-x, y]);
                assert_eq!(sp4.simple_reflection(1, &[x, y], Side::Char).unwrap(), vec![y, x]);
                assert_eq!(sp4.simple_reflection(0, &[x, y], Side::Cochar).unwrap(), vec![-x, y]);
            }
        }
    }

    #[test]
    fn root_counts() {
        for (name, count) in [("SL2", 2), ("SL3", 6), ("Sp4", 8), ("Sp6", 18), ("G2-sc", 12)] {
            let rs = preset(name).unwrap().datum.generate_roots().unwrap();
            assert_eq!(rs.roots.len(), count, "{name}");
            assert_eq!(rs.coroots.len(), count);
            let set: BTreeSet<_> = rs.roots.iter().cloned().collect();
            assert!(rs.roots.iter().all(|r| set.contains(&r.iter().map(|x| -x).collect::<Vec<_>>())));
        }
    }

    #[test]
    fn rejects_wrong_pairing() {
        let a1 = CartanDatum::new(vec![vec![2]]).unwrap();
        assert!(RootDatum::new(1, a1, vec![vec![1]], vec![vec![1]]).is_err());
    }
}
