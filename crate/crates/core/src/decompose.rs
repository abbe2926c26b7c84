//! The normal form `g = u · diag(π^d) · σ · k` with `u` unipotent upper
//! triangular over `K` and `k` in the Iwahori subgroup.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::matrix::SeriesMatrix;
use crate::perm::Permutation;
use crate::series::{with_retry, SeriesError, TruncatedSeries, Window};

/// Double-coset label `N(K) · diag(π^d) · σ · Iw`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub d: Vec<i64>,
    pub sigma: Permutation,
}

impl Cell {
    pub fn new(d: Vec<i64>, sigma: Permutation) -> Result<Self, String> {
        if d.len() != sigma.n() {
            return Err(format!(
                "d has length {} but sigma permutes {} letters",
                d.len(),
                sigma.n()
            ));
        }
        Ok(Cell { d, sigma })
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    /// The representative `diag(π^d) · σ`.
    pub fn matrix(&self, p: crate::scalars::Prime) -> SeriesMatrix {
        SeriesMatrix::diag_pi(p, &self.d)
            .mul(&SeriesMatrix::perm(p, &self.sigma))
            .expect("shapes agree")
    }

    /// Every cell with `|d_i| ≤ bound`, in lexicographic order.
    pub fn all_bounded(n: usize, bound: i64) -> Vec<Cell> {
        let perms = Permutation::all(n);
        let mut ds: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..n {
            ds = ds
                .into_iter()
                .flat_map(|v| {
                    (-bound..=bound).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        ds.into_iter()
            .flat_map(|d| perms.iter().map(move |s| Cell { d: d.clone(), sigma: s.clone() }))
            .collect()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.d.iter().map(|x| x.to_string()).collect();
        write!(f, "(d=({}), σ={})", d.join(","), self.sigma)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub u: SeriesMatrix,
    pub cell: Cell,
    pub k: SeriesMatrix,
}

impl Decomposition {
    /// `u · diag(π^d) · σ · k`.
    pub fn reconstruct(&self) -> Result<SeriesMatrix, SeriesError> {
        let p = self.u.prime();
        SeriesMatrix::product([&self.u, &self.cell.matrix(p), &self.k])
    }
}

/// Row-by-row reduction from the bottom.
///
/// For each row: entries in already pivoted columns are cleared with the
/// (monomial) lower pivot rows; the pivot is the leftmost unused column of
/// least valuation; that column is rescaled so the pivot is exactly `π^m`;
/// then the other unused columns are cleared with Iwahori column operations.
pub fn decompose(g: &SeriesMatrix, window: Window) -> Result<Decomposition, SeriesError> {
    let n = g.n();
    let p = g.prime();
    let mut a = g.clone();
    let mut uinv = SeriesMatrix::identity(p, n);
    let mut used = vec![false; n];
    let mut pivot = vec![0usize; n];
    let mut d = vec![0i64; n];

    for r in (0..n).rev() {
        for s in r + 1..n {
            let e = a.get(r, pivot[s]).clone();
            if e.is_exact_zero() {
                continue;
            }
            let c = e.neg().shift(-d[s]);
            a.add_row_multiple(r, s, &c)?;
            uinv.add_row_multiple(r, s, &c)?;
            a.set(r, pivot[s], TruncatedSeries::exact_zero(p));
        }

        let (pc, m) = choose_pivot(&a, r, &used)?;
        let w = a.get(r, pc).shift(-m);
        a.scale_col(pc, &w.inv(window)?)?;
        a.set(r, pc, TruncatedSeries::monomial(p, 1, m));

        for j in (0..n).filter(|&j| !used[j] && j != pc) {
            let e = a.get(r, j).clone();
            if e.is_exact_zero() {
                continue;
            }
            let c = e.neg().shift(-m);
            a.add_col_multiple(j, pc, &c)?;
            a.set(r, j, TruncatedSeries::exact_zero(p));
        }

        used[pc] = true;
        pivot[r] = pc;
        d[r] = m;
    }

    let mut images = vec![0usize; n];
    for (r, &c) in pivot.iter().enumerate() {
        images[c] = r;
    }
    let sigma = Permutation::from_images(images).expect("pivots form a permutation");
    let u = uinv.unipotent_inverse()?;
    let neg_d: Vec<i64> = d.iter().map(|x| -x).collect();
    let k = SeriesMatrix::product([
        &SeriesMatrix::perm(p, &sigma.inverse()),
        &SeriesMatrix::diag_pi(p, &neg_d),
        &uinv,
        g,
    ])?;
    Ok(Decomposition {
        u,
        cell: Cell { d, sigma },
        k,
    })
}

fn choose_pivot(a: &SeriesMatrix, r: usize, used: &[bool]) -> Result<(usize, i64), SeriesError> {
    let cols: Vec<usize> = (0..a.n()).filter(|&j| !used[j]).collect();
    let m = cols
        .iter()
        .filter_map(|&j| a.get(r, j).valuation().ok().flatten())
        .min();
    let Some(m) = m else {
        return if cols.iter().all(|&j| a.get(r, j).is_exact_zero()) {
            Err(SeriesError::NotInvertible)
        } else {
            Err(SeriesError::InsufficientPrecision(format!(
                "row {} has no certified nonzero entry",
                r + 1
            )))
        };
    };
    for &j in &cols {
        let x = a.get(r, j);
        if x.is_zero_at_precision() && !x.is_exact_zero() && x.precision().unwrap() <= m {
            return Err(SeriesError::InsufficientPrecision(format!(
                "entry ({}, {}) is {x}, cannot rule out valuation {m}",
                r + 1,
                j + 1
            )));
        }
    }
    let pc = cols
        .into_iter()
        .find(|&j| a.get(r, j).valuation().ok().flatten() == Some(m))
        .expect("minimum is attained");
    Ok((pc, m))
}

/// [`decompose`] with the widen-and-retry policy.
pub fn decompose_with_retry(
    g: &SeriesMatrix,
    window: Window,
    retries: u32,
) -> Result<Decomposition, SeriesError> {
    with_retry(window, retries, |w| decompose(g, w))
}

/// Sum of the `π^{-1}` coefficients on the superdiagonal, mod p.
pub fn residue_character(u: &SeriesMatrix) -> Result<u32, SeriesError> {
    let p = u.prime();
    let mut total = 0i64;
    for i in 0..u.n().saturating_sub(1) {
        total += u.get(i, i + 1).residue_coeff()? as i64;
    }
    Ok(p.reduce(total))
}
