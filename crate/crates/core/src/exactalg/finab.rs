use crate::error::{Error, Result};

/// Finitely generated abelian group `Z/d_1 + ... + Z/d_k + Z^free` with
/// `d_1 | d_2 | ... | d_k` and every `d_j >= 2`.
///
/// Elements are coordinate vectors: torsion coordinates first, reduced into
/// `[0, d_j)`, then free coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    torsion: Vec<i64>,
    free_rank: usize,
}

impl FinAbGroup {
    pub fn new(torsion: Vec<i64>, free_rank: usize) -> Result<Self> {
        if torsion.iter().any(|&d| d < 2) {
            return Err(Error::Shape("invariant factors must be >= 2".into()));
        }
        if torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Shape("invariant factors must form a divisibility chain".into()));
        }
        Ok(FinAbGroup { torsion, free_rank })
    }

    pub fn trivial() -> Self {
        FinAbGroup { torsion: Vec::new(), free_rank: 0 }
    }

    /// `(Z/2)^rank`.
    pub fn elementary_2(rank: usize) -> Self {
        FinAbGroup { torsion: vec![2; rank], free_rank: 0 }
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn dim(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().map(|&d| d as u64).product())
    }

    /// Largest invariant factor (1 for the trivial group); `None` if infinite.
    pub fn exponent(&self) -> Option<i64> {
        self.is_finite().then(|| self.torsion.last().copied().unwrap_or(1))
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.dim(), "element has the wrong number of coordinates");
        v.iter()
            .enumerate()
            .map(|(j, &x)| if j < self.torsion.len() { x.rem_euclid(self.torsion[j]) } else { x })
            .collect()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.dim()]
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = a.iter().map(|x| -x).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = a.iter().map(|x| k * x).collect();
        self.reduce(&s)
    }

    /// All elements in lexicographic coordinate order. Panics on an infinite
    /// group.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        assert!(self.is_finite(), "cannot enumerate an infinite group");
        let mut out = vec![Vec::new()];
        for &d in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Dense index of a reduced element of a finite group.
    pub fn index_of(&self, a: &[i64]) -> usize {
        let mut idx = 0usize;
        for (j, &d) in self.torsion.iter().enumerate() {
            idx = idx * d as usize + a[j].rem_euclid(d) as usize;
        }
        idx
    }

    pub fn is_elementary_2(&self) -> bool {
        self.is_finite() && self.torsion.iter().all(|&d| d == 2)
    }
}

impl std::fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
