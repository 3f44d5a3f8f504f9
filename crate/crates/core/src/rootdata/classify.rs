use std::fmt;

use super::cartan::{validate_cartan, CartanDatum};
use crate::error::{Error, Result};

/// Connected Dynkin types of finite type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl DynkinType {
    pub fn rank(self) -> usize {
        match self {
            DynkinType::A(n) | DynkinType::B(n) | DynkinType::C(n) | DynkinType::D(n) => n,
            DynkinType::E(n) => n,
            DynkinType::F4 => 4,
            DynkinType::G2 => 2,
        }
    }

    /// Every standard label naming this isomorphism class, canonical first.
    pub fn labels(self) -> Vec<String> {
        match self {
            DynkinType::A(1) => vec!["A1".into(), "B1".into(), "C1".into()],
            DynkinType::C(2) => vec!["C2".into(), "B2".into()],
            DynkinType::A(3) => vec!["A3".into(), "D3".into()],
            t => vec![t.to_string()],
        }
    }

    /// Bourbaki-numbered Cartan matrix `a_ij = <alpha_i^vee, alpha_j>`.
    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        match self {
            DynkinType::A(n) => (1..n).for_each(|i| link(i - 1, i, -1, -1)),
            DynkinType::B(n) => {
                (1..n - 1).for_each(|i| link(i - 1, i, -1, -1));
                link(n - 2, n - 1, -1, -2);
            }
            DynkinType::C(n) => {
                (1..n - 1).for_each(|i| link(i - 1, i, -1, -1));
                link(n - 2, n - 1, -2, -1);
            }
            DynkinType::D(n) => {
                (1..n - 1).for_each(|i| link(i - 1, i, -1, -1));
                link(n - 3, n - 1, -1, -1);
            }
            DynkinType::E(n) => {
                link(0, 2, -1, -1);
                link(1, 3, -1, -1);
                (3..n).for_each(|i| link(i - 1, i, -1, -1));
            }
            DynkinType::F4 => {
                link(0, 1, -1, -1);
                link(1, 2, -1, -2);
                link(2, 3, -1, -1);
            }
            DynkinType::G2 => link(0, 1, -3, -1),
        }
        a
    }

    fn candidates(n: usize) -> Vec<DynkinType> {
        let mut c = vec![DynkinType::A(n)];
        if n == 2 {
            c.push(DynkinType::C(2));
            c.push(DynkinType::G2);
        }
        if n >= 3 {
            c.push(DynkinType::B(n));
            c.push(DynkinType::C(n));
        }
        if n >= 4 {
            c.push(DynkinType::D(n));
        }
        if (6..=8).contains(&n) {
            c.push(DynkinType::E(n));
        }
        if n == 4 {
            c.push(DynkinType::F4);
        }
        c
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::B(n) => write!(f, "B{n}"),
            DynkinType::C(n) => write!(f, "C{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
            DynkinType::F4 => write!(f, "F4"),
            DynkinType::G2 => write!(f, "G2"),
        }
    }
}

/// Classifies a valid finite-type Cartan datum into connected components.
pub fn classify_cartan(d: &CartanDatum) -> Result<Vec<DynkinType>> {
    let report = validate_cartan(d);
    if !report.is_valid() {
        return Err(Error::NotFiniteType("datum fails the Cartan axioms".into()));
    }
    classify_cartan_matrix(&report.cartan_matrix.expect("valid datum has a Cartan matrix"))
}

/// Classifies a Cartan matrix by matching each connected component against
/// the finite catalogue up to reindexing. Components are listed in order of
/// their smallest index.
pub fn classify_cartan_matrix(a: &[Vec<i64>]) -> Result<Vec<DynkinType>> {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && (a[i][j] != 0 || a[j][i] != 0) {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        let sub: Vec<Vec<i64>> = comp.iter().map(|&i| comp.iter().map(|&j| a[i][j]).collect()).collect();
        let found = DynkinType::candidates(comp.len())
            .into_iter()
            .find(|t| isomorphic(&sub, &t.cartan_matrix()))
            .ok_or_else(|| Error::NotFiniteType(format!("component {comp:?} matches no finite type")))?;
        out.push(found);
    }
    Ok(out)
}

/// Whether some permutation `p` has `a[p(i)][p(j)] = b[i][j]` for all `i, j`.
fn isomorphic(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    fn extend(a: &[Vec<i64>], b: &[Vec<i64>], perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let k = perm.len();
        if k == a.len() {
            return true;
        }
        for cand in 0..a.len() {
            if used[cand] || a[cand][cand] != b[k][k] {
                continue;
            }
            let consistent = perm
                .iter()
                .enumerate()
                .all(|(i, &pi)| a[pi][cand] == b[i][k] && a[cand][pi] == b[k][i]);
            if consistent {
                used[cand] = true;
                perm.push(cand);
                if extend(a, b, perm, used) {
                    return true;
                }
                perm.pop();
                used[cand] = false;
            }
        }
        false
    }
    a.len() == b.len() && extend(a, b, &mut Vec::new(), &mut vec![false; a.len()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_examples() {
        assert_eq!(classify_cartan_matrix(&[vec![2]]).unwrap(), vec![DynkinType::A(1)]);
        let c2 = classify_cartan_matrix(&[vec![2, -1], vec![-2, 2]]).unwrap();
        assert_eq!(c2, vec![DynkinType::C(2)]);
        assert_eq!(c2[0].labels(), vec!["C2", "B2"]);
        let a1a1 = classify_cartan_matrix(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(a1a1, vec![DynkinType::A(1), DynkinType::A(1)]);
    }

    #[test]
    fn every_catalogue_entry_is_valid_and_distinguished() {
        let all: Vec<DynkinType> = (1..=8).flat_map(DynkinType::candidates).collect();
        for t in &all {
            let a = t.cartan_matrix();
            assert_eq!(classify_cartan_matrix(&a).unwrap(), vec![*t], "{t}");
        }
    }

    #[test]
    fn b3_and_c3_differ() {
        assert!(!isomorphic(&DynkinType::B(3).cartan_matrix(), &DynkinType::C(3).cartan_matrix()));
    }

    #[test]
    fn affine_rejected() {
        let affine_a2 = vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]];
        assert!(classify_cartan_matrix(&affine_a2).is_err());
    }

    #[test]
    fn reindexed_g2() {
        let g2 = classify_cartan_matrix(&[vec![2, -1], vec![-3, 2]]).unwrap();
        assert_eq!(g2, vec![DynkinType::G2]);
    }
}
