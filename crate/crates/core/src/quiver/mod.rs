//! Nilpotent representations of the cyclic quiver with `n` nodes over
//! `F_p`, i.e. parabolic torsion sheaves supported at one marked point.
//!
//! `maps[j]` is the arrow from node `j` to node `j + 1 (mod n)`, a matrix of
//! shape `dims[j+1] × dims[j]`; `maps[n-1]` closes the cycle at node 0.
//!
//! Only `Hom` and `Ext¹` are computed: the two-term complex in [`homext`]
//! has no higher cohomology by construction.

pub mod bundle;
pub mod decompose;
pub mod filtration;
pub mod fp;
pub mod homext;
pub mod segment;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::Prime;
pub use fp::FpMatrix;
pub use segment::{enumerate_classes, Multisegment, Segment};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("composite around the cycle from node {node} is not nilpotent")]
    NotNilpotent { node: usize },
    #[error("representations differ in {0}")]
    Mismatch(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("no filtration: {0}")]
    Filtration(String),
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Validation {
    /// Support at the marked point only.
    #[default]
    Nilpotent,
    /// Shapes only; composites may have nonzero eigenvalues.
    Relaxed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRep {
    n: usize,
    p: Prime,
    dims: Vec<usize>,
    maps: Vec<FpMatrix>,
}

impl QuiverRep {
    /// Builds and shape-checks a representation.
    pub fn new(p: Prime, dims: Vec<usize>, maps: Vec<FpMatrix>) -> Result<Self, QuiverError> {
        let n = dims.len();
        if n == 0 {
            return Err(QuiverError::Shape("a cyclic quiver needs at least one node".into()));
        }
        if maps.len() != n {
            return Err(QuiverError::Shape(format!("{} maps for {n} nodes", maps.len())));
        }
        for (j, m) in maps.iter().enumerate() {
            let want = (dims[(j + 1) % n], dims[j]);
            if (m.rows(), m.cols()) != want || m.p() != p.get() {
                return Err(QuiverError::Shape(format!(
                    "map {} from node {j} is {}x{} over F_{}, expected {}x{} over F_{p}",
                    j + 1,
                    m.rows(),
                    m.cols(),
                    m.p(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(QuiverRep { n, p, dims, maps })
    }

    pub fn zero(p: Prime, n: usize) -> Self {
        let dims = vec![0; n];
        let maps = (0..n).map(|_| FpMatrix::zeros(p.get(), 0, 0)).collect();
        QuiverRep { n, p, dims, maps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn map(&self, j: usize) -> &FpMatrix {
        &self.maps[j % self.n]
    }

    pub fn maps(&self) -> &[FpMatrix] {
        &self.maps
    }

    /// `φ_{i+l} ∘ … ∘ φ_{i+1} : V_i → V_{i+l}`.
    pub fn path(&self, i: usize, l: usize) -> FpMatrix {
        let p = self.p.get();
        let mut acc = FpMatrix::identity(p, self.dims[i % self.n]);
        for s in 0..l {
            acc = self.map(i + s).mul(&acc);
        }
        acc
    }

    pub fn cycle_rank(&self, i: usize, l: usize) -> usize {
        if l == 0 {
            return self.dims[i % self.n];
        }
        self.path(i, l).rank()
    }

    /// All `cycle_rank(i, l)` for `l ≤ total_dim`, node-major.
    pub fn rank_invariants(&self) -> Vec<usize> {
        let t = self.total_dim();
        (0..self.n)
            .flat_map(|i| (0..=t).map(move |l| (i, l)))
            .map(|(i, l)| self.cycle_rank(i, l))
            .collect()
    }

    pub fn validate(&self, mode: Validation) -> Result<(), QuiverError> {
        Self::new(self.p, self.dims.clone(), self.maps.clone())?;
        if mode == Validation::Nilpotent {
            for i in 0..self.n {
                let c = self.path(i, self.n);
                if !c.pow(self.dims[i]).is_zero() {
                    return Err(QuiverError::NotNilpotent { node: i });
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self, mode: Validation) -> bool {
        self.validate(mode).is_ok()
    }

    fn check_compatible(&self, other: &Self) -> Result<(), QuiverError> {
        if self.n != other.n {
            return Err(QuiverError::Mismatch(format!("node count ({} vs {})", self.n, other.n)));
        }
        if self.p != other.p {
            return Err(QuiverError::Mismatch(format!("prime ({} vs {})", self.p, other.p)));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, QuiverError> {
        self.check_compatible(other)?;
        let p = self.p.get();
        let n = self.n;
        let dims: Vec<usize> = (0..n).map(|i| self.dims[i] + other.dims[i]).collect();
        let maps = (0..n)
            .map(|j| {
                let (a, b) = (&self.maps[j], &other.maps[j]);
                let mut m = FpMatrix::zeros(p, a.rows() + b.rows(), a.cols() + b.cols());
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        m.set(a.rows() + r, a.cols() + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        Self::new(self.p, dims, maps)
    }

    /// The representation with maps `g_{j+1} φ_j g_j^{-1}`.
    pub fn conjugate(&self, g: &[FpMatrix]) -> Result<Self, QuiverError> {
        if g.len() != self.n {
            return Err(QuiverError::Shape("one change of basis per node".into()));
        }
        let inv = g
            .iter()
            .map(|m| m.inverse().ok_or_else(|| QuiverError::Shape("change of basis is singular".into())))
            .collect::<Result<Vec<_>, _>>()?;
        let maps = (0..self.n)
            .map(|j| g[(j + 1) % self.n].mul(&self.maps[j]).mul(&inv[j]))
            .collect();
        Self::new(self.p, self.dims.clone(), maps)
    }

    /// A random basis change of `self`.
    pub fn random_conjugate<R: Rng>(&self, rng: &mut R) -> Self {
        let g: Vec<FpMatrix> = self
            .dims
            .iter()
            .map(|&d| FpMatrix::random_invertible(self.p.get(), d, rng))
            .collect();
        self.conjugate(&g).expect("invertible by construction")
    }

    /// Rejection-samples uniformly random maps until the result is nilpotent.
    pub fn random_nilpotent<R: Rng>(p: Prime, dims: &[usize], rng: &mut R) -> Self {
        let n = dims.len();
        loop {
            let maps = (0..n)
                .map(|j| FpMatrix::random(p.get(), dims[(j + 1) % n], dims[j], rng))
                .collect();
            let r = QuiverRep::new(p, dims.to_vec(), maps).expect("shapes match");
            if r.is_valid(Validation::Nilpotent) {
                return r;
            }
        }
    }
}

/// Wire form `{"n": 2, "p": 3, "dims": [1, 1], "maps": [[[1]], [[0]]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub n: usize,
    pub p: u32,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<i64>>>,
}

impl QuiverJson {
    pub fn from_rep(r: &QuiverRep) -> Self {
        QuiverJson {
            n: r.n,
            p: r.p.get(),
            dims: r.dims.clone(),
            maps: r.maps.iter().map(FpMatrix::to_rows).collect(),
        }
    }

    pub fn to_rep(&self) -> Result<QuiverRep, String> {
        let p = Prime::new(self.p).map_err(|e| e.to_string())?;
        let n = self.n;
        if self.dims.len() != n || self.maps.len() != n {
            return Err(format!("expected {n} dimensions and {n} maps"));
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(j, rows)| {
                let (r, c) = (self.dims[(j + 1) % n], self.dims[j]);
                // an empty row list stands for any matrix with zero rows
                if r == 0 && rows.is_empty() {
                    return Ok(FpMatrix::zeros(p.get(), 0, c));
                }
                FpMatrix::from_rows(p.get(), r, c, rows)
                    .ok_or_else(|| format!("map {} is not a {r}x{c} matrix", j + 1))
            })
            .collect::<Result<Vec<_>, String>>()?;
        QuiverRep::new(p, self.dims.clone(), maps).map_err(|e| e.to_string())
    }
}
