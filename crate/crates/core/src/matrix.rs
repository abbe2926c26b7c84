//! Square matrices over `F_p((π))` at tracked precision.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::perm::Permutation;
use crate::scalars::Prime;
use crate::series::{SeriesError, SeriesJson, TruncatedSeries, Window};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesMatrix {
    n: usize,
    p: Prime,
    entries: Vec<TruncatedSeries>,
}

impl SeriesMatrix {
    pub fn from_rows(p: Prime, rows: Vec<Vec<TruncatedSeries>>) -> Result<Self, SeriesError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(SeriesError::DimensionMismatch(format!(
                    "row of length {} in a {n}x{n} matrix",
                    row.len()
                )));
            }
            for x in row {
                if x.prime() != p {
                    return Err(SeriesError::PrimeMismatch(p.get(), x.prime().get()));
                }
                entries.push(x);
            }
        }
        Ok(SeriesMatrix { n, p, entries })
    }

    pub fn from_fn(p: Prime, n: usize, mut f: impl FnMut(usize, usize) -> TruncatedSeries) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        SeriesMatrix { n, p, entries }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        Self::from_fn(p, n, |i, j| {
            if i == j {
                TruncatedSeries::one(p)
            } else {
                TruncatedSeries::exact_zero(p)
            }
        })
    }

    /// `diag(π^{d_1}, …, π^{d_n})`.
    pub fn diag_pi(p: Prime, d: &[i64]) -> Self {
        Self::from_fn(p, d.len(), |i, j| {
            if i == j {
                TruncatedSeries::monomial(p, 1, d[i])
            } else {
                TruncatedSeries::exact_zero(p)
            }
        })
    }

    pub fn perm(p: Prime, sigma: &Permutation) -> Self {
        Self::from_fn(p, sigma.n(), |i, j| {
            if i == sigma.apply(j) {
                TruncatedSeries::one(p)
            } else {
                TruncatedSeries::exact_zero(p)
            }
        })
    }

    /// `1 + c·E_{i,j}` (0-based indices).
    pub fn elementary(p: Prime, n: usize, i: usize, j: usize, c: TruncatedSeries) -> Self {
        let mut m = Self::identity(p, n);
        let e = &m.entries[i * n + j] + &c;
        m.set(i, j, e);
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: TruncatedSeries) {
        self.entries[i * self.n + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<TruncatedSeries>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.p != other.p {
            return Err(SeriesError::PrimeMismatch(self.p.get(), other.p.get()));
        }
        if self.n != other.n {
            return Err(SeriesError::DimensionMismatch(format!(
                "{}x{} against {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = TruncatedSeries::exact_zero(self.p);
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_exact_zero() || b.is_exact_zero() {
                        continue;
                    }
                    acc = acc.checked_add(&a.checked_mul(b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(SeriesMatrix {
            n,
            p: self.p,
            entries,
        })
    }

    /// Product of a sequence of matrices, left to right.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a SeriesMatrix>) -> Result<Self, SeriesError> {
        let mut it = factors.into_iter();
        let first = it.next().expect("empty product").clone();
        it.try_fold(first, |acc, m| acc.mul(m))
    }

    /// Gauss–Jordan inverse; each pivot is a certified nonzero entry of
    /// least valuation in its column.
    pub fn inv(&self, window: Window) -> Result<Self, SeriesError> {
        let n = self.n;
        let p = self.p;
        let mut a = self.clone();
        let mut b = Self::identity(p, n);
        for c in 0..n {
            let mut best: Option<(usize, i64)> = None;
            let mut all_exact_zero = true;
            for r in c..n {
                let x = a.get(r, c);
                if !x.is_exact_zero() {
                    all_exact_zero = false;
                }
                if let Ok(Some(v)) = x.valuation() {
                    if best.map_or(true, |(_, bv)| v < bv) {
                        best = Some((r, v));
                    }
                }
            }
            let (r, _) = match best {
                Some(b) => b,
                None if all_exact_zero => return Err(SeriesError::NotInvertible),
                None => {
                    return Err(SeriesError::InsufficientPrecision(format!(
                        "no certified pivot in column {}",
                        c + 1
                    )))
                }
            };
            a.swap_rows(r, c);
            b.swap_rows(r, c);
            let s = a.get(c, c).inv(window)?;
            a.scale_row(c, &s)?;
            b.scale_row(c, &s)?;
            for r2 in 0..n {
                if r2 == c || a.get(r2, c).is_exact_zero() {
                    continue;
                }
                let f = a.get(r2, c).neg();
                a.add_row_multiple(r2, c, &f)?;
                b.add_row_multiple(r2, c, &f)?;
                a.set(r2, c, TruncatedSeries::exact_zero(p));
            }
        }
        Ok(b)
    }

    pub fn swap_rows(&mut self, r: usize, s: usize) {
        if r != s {
            for j in 0..self.n {
                self.entries.swap(r * self.n + j, s * self.n + j);
            }
        }
    }

    pub fn scale_row(&mut self, r: usize, c: &TruncatedSeries) -> Result<(), SeriesError> {
        for j in 0..self.n {
            let x = c.checked_mul(self.get(r, j))?;
            self.set(r, j, x);
        }
        Ok(())
    }

    pub fn scale_col(&mut self, col: usize, c: &TruncatedSeries) -> Result<(), SeriesError> {
        for i in 0..self.n {
            let x = self.get(i, col).checked_mul(c)?;
            self.set(i, col, x);
        }
        Ok(())
    }

    /// `row r += c · row s`.
    pub fn add_row_multiple(&mut self, r: usize, s: usize, c: &TruncatedSeries) -> Result<(), SeriesError> {
        for j in 0..self.n {
            let src = self.get(s, j);
            if src.is_exact_zero() {
                continue;
            }
            let x = self.get(r, j).checked_add(&c.checked_mul(src)?)?;
            self.set(r, j, x);
        }
        Ok(())
    }

    /// `col j += c · col s`.
    pub fn add_col_multiple(&mut self, j: usize, s: usize, c: &TruncatedSeries) -> Result<(), SeriesError> {
        for i in 0..self.n {
            let src = self.get(i, s);
            if src.is_exact_zero() {
                continue;
            }
            let x = self.get(i, j).checked_add(&src.checked_mul(c)?)?;
            self.set(i, j, x);
        }
        Ok(())
    }

    /// Inverse of a unipotent upper-triangular matrix by back substitution.
    pub fn unipotent_inverse(&self) -> Result<Self, SeriesError> {
        let n = self.n;
        let p = self.p;
        let mut out = Self::identity(p, n);
        for j in 0..n {
            for i in (0..j).rev() {
                // out[i][j] = -Σ_{i<k≤j} a[i][k] out[k][j]
                let mut acc = TruncatedSeries::exact_zero(p);
                for k in i + 1..=j {
                    let a = self.get(i, k);
                    let b = out.get(k, j);
                    if a.is_exact_zero() || b.is_exact_zero() {
                        continue;
                    }
                    acc = acc.checked_add(&a.checked_mul(b)?)?;
                }
                out.set(i, j, acc.neg());
            }
        }
        Ok(out)
    }

    /// Upper triangular with exact ones on the diagonal.
    pub fn is_unipotent_upper(&self) -> bool {
        let one = TruncatedSeries::one(self.p);
        (0..self.n).all(|i| {
            (0..self.n).all(|j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => self.get(i, j) == &one,
                std::cmp::Ordering::Greater => self.get(i, j).is_exact_zero(),
                std::cmp::Ordering::Less => true,
            })
        })
    }

    /// Membership in the Iwahori subgroup: integral entries, strictly lower
    /// part in `πO`, unit diagonal (equivalently unit determinant).
    pub fn iwahori_member(&self) -> Result<bool, SeriesError> {
        let mut unsure: Option<String> = None;
        for i in 0..self.n {
            for j in 0..self.n {
                let x = self.get(i, j);
                let need = if i > j { 1 } else { 0 };
                match x.lower_bound() {
                    None => {}
                    Some(v) if v >= need => {}
                    Some(_) if !x.is_zero_at_precision() => return Ok(false),
                    Some(_) => {
                        unsure.get_or_insert(format!("entry ({}, {}) is {x}", i + 1, j + 1));
                    }
                }
                if i == j {
                    match x.coeff(0) {
                        Ok(0) if x.lower_bound().map_or(true, |v| v >= 0) => return Ok(false),
                        Ok(_) => {}
                        Err(_) => {
                            unsure.get_or_insert(format!("diagonal entry {} is {x}", i + 1));
                        }
                    }
                }
            }
        }
        match unsure {
            Some(what) => Err(SeriesError::InsufficientPrecision(what)),
            None => Ok(true),
        }
    }

    /// Every entry agrees with `other` wherever both are known.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.n == other.n
            && self.p == other.p
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.agrees_with(b))
    }

    /// Smallest absolute precision among inexact entries.
    pub fn min_precision(&self) -> Option<i64> {
        self.entries.iter().filter_map(|x| x.precision()).min()
    }
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Wire form `{"p": 3, "n": 2, "window": [-4, 8], "entries": [[series, …], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub p: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[i64; 2]>,
    pub entries: Vec<Vec<SeriesJson>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &SeriesMatrix, window: Window) -> Self {
        MatrixJson {
            p: m.p.get(),
            n: m.n,
            window: Some([window.lo, window.hi]),
            entries: m
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| SeriesJson::from_series(x, Some(window.hi))).collect())
                .collect(),
        }
    }

    /// The window stored in the file, if any.
    pub fn file_window(&self) -> Result<Option<Window>, String> {
        match self.window {
            None => Ok(None),
            Some([lo, hi]) => Window::new(lo, hi)
                .map(Some)
                .ok_or_else(|| format!("window [{lo}, {hi}) must satisfy lo < 0 < hi")),
        }
    }

    pub fn to_matrix(&self, window: Window) -> Result<SeriesMatrix, String> {
        let p = Prime::new(self.p).map_err(|e| e.to_string())?;
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(format!("entries do not form a {0}x{0} array", self.n));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|s| s.to_series(p, window)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        SeriesMatrix::from_rows(p, rows).map_err(|e| e.to_string())
    }
}
