//! Laurent series over `F_p` carried to a finite, tracked absolute precision.
//!
//! A [`TruncatedSeries`] is either an exact Laurent polynomial or a value
//! known modulo `π^prec`. Every operation propagates precision so that any
//! coefficient or valuation it reports is certified: changing the unknown
//! digits of the inputs cannot change it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::Prime;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("series over different primes ({0} vs {1})")]
    PrimeMismatch(u32, u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

impl SeriesError {
    pub fn is_precision(&self) -> bool {
        matches!(self, SeriesError::InsufficientPrecision(_))
    }
}

fn short(what: impl Into<String>) -> SeriesError {
    SeriesError::InsufficientPrecision(what.into())
}

/// Working precision window `[lo, hi)`.
///
/// Inputs read from files are known modulo `π^hi` with no digits below `lo`;
/// expanding the inverse of a non-monomial unit keeps `hi - lo` digits of
/// relative precision.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Default for Window {
    fn default() -> Self {
        Window { lo: -4, hi: 8 }
    }
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Option<Self> {
        (lo < 0 && 0 < hi).then_some(Window { lo, hi })
    }

    pub fn width(&self) -> i64 {
        self.hi - self.lo
    }

    /// Doubles both ends.
    pub fn widened(&self) -> Self {
        Window {
            lo: self.lo * 2,
            hi: self.hi * 2,
        }
    }
}

/// Runs `f` at `window`, doubling the window after each precision failure,
/// for at most `retries` extra attempts.
pub fn with_retry<T, E, F>(window: Window, retries: u32, mut f: F) -> Result<T, E>
where
    F: FnMut(Window) -> Result<T, E>,
    E: RetryableError,
{
    let mut w = window;
    let mut attempt = 0;
    loop {
        match f(w) {
            Err(e) if e.is_precision() && attempt < retries => {
                attempt += 1;
                w = w.widened();
            }
            other => return other,
        }
    }
}

/// Errors that can signal a precision shortfall.
pub trait RetryableError {
    fn is_precision(&self) -> bool;
}

impl RetryableError for SeriesError {
    fn is_precision(&self) -> bool {
        SeriesError::is_precision(self)
    }
}

impl RetryableError for crate::error::Error {
    fn is_precision(&self) -> bool {
        crate::error::Error::is_precision(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    p: Prime,
    /// Exponent of `coeffs[0]`.
    lead: i64,
    /// Residues mod p; first and last entries nonzero when nonempty.
    coeffs: Vec<u32>,
    /// Coefficients at exponents `>= prec` are unknown; `None` means exact.
    prec: Option<i64>,
}

impl TruncatedSeries {
    pub fn exact_zero(p: Prime) -> Self {
        TruncatedSeries {
            p,
            lead: 0,
            coeffs: Vec::new(),
            prec: None,
        }
    }

    /// `O(π^prec)`: zero at this precision, but not certified zero.
    pub fn zero_to(p: Prime, prec: i64) -> Self {
        TruncatedSeries {
            p,
            lead: 0,
            coeffs: Vec::new(),
            prec: Some(prec),
        }
    }

    pub fn one(p: Prime) -> Self {
        Self::monomial(p, 1, 0)
    }

    /// Exact `c · π^e`.
    pub fn monomial(p: Prime, c: i64, e: i64) -> Self {
        Self::from_coeffs(p, [(e, c)], None)
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated
    /// exponents accumulate and coefficients at or above `prec` are dropped.
    pub fn from_coeffs<I>(p: Prime, terms: I, prec: Option<i64>) -> Self
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        let terms: Vec<(i64, i64)> = terms
            .into_iter()
            .filter(|&(e, _)| prec.map_or(true, |pr| e < pr))
            .collect();
        if terms.is_empty() {
            return TruncatedSeries {
                p,
                lead: 0,
                coeffs: Vec::new(),
                prec,
            };
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![0u32; (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = p.reduce(*slot as i64 + c);
        }
        Self::normalized(p, lo, coeffs, prec)
    }

    fn normalized(p: Prime, mut lead: i64, mut coeffs: Vec<u32>, prec: Option<i64>) -> Self {
        if let Some(pr) = prec {
            let keep = (pr - lead).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let skip = coeffs.iter().take_while(|&&c| c == 0).count();
        if skip > 0 {
            coeffs.drain(..skip);
            lead += skip as i64;
        }
        if coeffs.is_empty() {
            lead = 0;
        }
        TruncatedSeries {
            p,
            lead,
            coeffs,
            prec,
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Absolute precision; `None` for exact values.
    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec.is_none() && self.coeffs.is_empty()
    }

    /// No known nonzero coefficient (exact zero or `O(π^prec)`).
    pub fn is_zero_at_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Known nonzero coefficients as `(exponent, residue)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.lead + i as i64, c))
    }

    /// Largest `v` such that the true value certainly lies in `π^v·O`;
    /// `None` stands for `+∞` (exact zero).
    pub fn lower_bound(&self) -> Option<i64> {
        if !self.coeffs.is_empty() {
            Some(self.lead)
        } else {
            self.prec
        }
    }

    /// Certified valuation; `Ok(None)` for the exact zero.
    pub fn valuation(&self) -> Result<Option<i64>, SeriesError> {
        if !self.coeffs.is_empty() {
            Ok(Some(self.lead))
        } else if self.prec.is_none() {
            Ok(None)
        } else {
            Err(short(format!(
                "valuation of O(π^{}) is unknown",
                self.prec.unwrap()
            )))
        }
    }

    /// Certified coefficient of `π^e`.
    pub fn coeff(&self, e: i64) -> Result<u32, SeriesError> {
        if let Some(pr) = self.prec {
            if e >= pr {
                return Err(short(format!("coefficient of π^{e} beyond precision {pr}")));
            }
        }
        if self.coeffs.is_empty() || e < self.lead {
            return Ok(0);
        }
        Ok(self
            .coeffs
            .get((e - self.lead) as usize)
            .copied()
            .unwrap_or(0))
    }

    /// Coefficient of `π^{-1}`.
    pub fn residue_coeff(&self) -> Result<u32, SeriesError> {
        self.coeff(-1)
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.p != other.p {
            Err(SeriesError::PrimeMismatch(self.p.get(), other.p.get()))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let prec = min_prec(self.prec, other.prec);
        if self.coeffs.is_empty() {
            return Ok(Self::normalized(self.p, other.lead, other.coeffs.clone(), prec));
        }
        if other.coeffs.is_empty() {
            return Ok(Self::normalized(self.p, self.lead, self.coeffs.clone(), prec));
        }
        let lo = self.lead.min(other.lead);
        let hi = (self.lead + self.coeffs.len() as i64).max(other.lead + other.coeffs.len() as i64);
        let mut coeffs = vec![0u32; (hi - lo) as usize];
        let m = self.p.get();
        for (src, lead) in [(&self.coeffs, self.lead), (&other.coeffs, other.lead)] {
            let off = (lead - lo) as usize;
            for (i, &c) in src.iter().enumerate() {
                let s = coeffs[off + i] + c;
                coeffs[off + i] = if s >= m { s - m } else { s };
            }
        }
        Ok(Self::normalized(self.p, lo, coeffs, prec))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Self::exact_zero(self.p));
        }
        let prec = min_prec(
            add_prec(self.lower_bound(), other.prec),
            add_prec(other.lower_bound(), self.prec),
        );
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::normalized(self.p, 0, Vec::new(), prec));
        }
        let m = self.p.get() as u64;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % m;
            }
        }
        let coeffs = acc.into_iter().map(|c| c as u32).collect();
        Ok(Self::normalized(self.p, self.lead + other.lead, coeffs, prec))
    }

    pub fn neg(&self) -> Self {
        let m = self.p.get();
        TruncatedSeries {
            p: self.p,
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|&c| if c == 0 { 0 } else { m - c }).collect(),
            prec: self.prec,
        }
    }

    /// Multiplies by `π^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedSeries {
            p: self.p,
            lead: if self.coeffs.is_empty() { 0 } else { self.lead + k },
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|pr| pr + k),
        }
    }

    /// Multiplies by a residue.
    pub fn scale(&self, c: i64) -> Self {
        let c = self.p.reduce(c) as u64;
        if c == 0 {
            return Self::exact_zero(self.p);
        }
        let m = self.p.get() as u64;
        let coeffs = self.coeffs.iter().map(|&a| (a as u64 * c % m) as u32).collect();
        Self::normalized(self.p, self.lead, coeffs, self.prec)
    }

    /// Multiplicative inverse. Needs a certified valuation; non-monomial
    /// exact units are expanded to `window.width()` digits of relative
    /// precision.
    pub fn inv(&self, window: Window) -> Result<Self, SeriesError> {
        let v = self.valuation()?.ok_or(SeriesError::NotInvertible)?;
        let p = self.p;
        let a0_inv = p.inv(self.coeffs[0]);
        if self.prec.is_none() && self.coeffs.len() == 1 {
            return Ok(Self::monomial(p, a0_inv as i64, -v));
        }
        let rel = match self.prec {
            Some(pr) => (pr - v).min(window.width()),
            None => window.width(),
        };
        let rel = rel.max(1) as usize;
        let m = p.get() as u64;
        let a = |k: usize| -> u64 { self.coeffs.get(k).copied().unwrap_or(0) as u64 };
        let mut b = vec![0u64; rel];
        b[0] = a0_inv as u64;
        for k in 1..rel {
            let mut s = 0u64;
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                s = (s + a(j) * b[k - j]) % m;
            }
            b[k] = (m - s) % m * a0_inv as u64 % m;
        }
        let coeffs = b.into_iter().map(|c| c as u32).collect();
        Ok(Self::normalized(p, -v, coeffs, Some(-v + rel as i64)))
    }

    /// True when every coefficient known in both agrees.
    pub fn agrees_with(&self, other: &Self) -> bool {
        match self.checked_add(&other.neg()) {
            Ok(d) => d.coeffs.is_empty(),
            Err(_) => false,
        }
    }

    /// Forgets everything at and above `prec`.
    pub fn truncated(&self, prec: i64) -> Self {
        Self::normalized(
            self.p,
            self.lead,
            self.coeffs.clone(),
            min_prec(self.prec, Some(prec)),
        )
    }
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn add_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

impl Add<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.checked_add(&rhs.neg()).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::neg(self)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms()
            .map(|(e, c)| match (e, c) {
                (0, _) => format!("{c}"),
                (_, 1) => format!("π^{e}"),
                _ => format!("{c}π^{e}"),
            })
            .collect();
        if let Some(pr) = self.prec {
            parts.push(format!("O(π^{pr})"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Wire form: `{"exact_zero": bool, "coeffs": [[exponent, coeff], …]}` plus
/// optional `exact` / `prec` overrides of the enclosing window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub exact_zero: bool,
    #[serde(default)]
    pub coeffs: Vec<(i64, i64)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<i64>,
}

impl SeriesJson {
    pub fn from_series(s: &TruncatedSeries, window_hi: Option<i64>) -> Self {
        SeriesJson {
            exact_zero: s.is_exact_zero(),
            coeffs: s.terms().map(|(e, c)| (e, c as i64)).collect(),
            exact: s.is_exact() && !s.is_exact_zero(),
            prec: match s.prec {
                Some(pr) if Some(pr) != window_hi => Some(pr),
                _ => None,
            },
        }
    }

    /// Reads the series inside `window`; coefficients outside `[lo, hi)` are rejected.
    pub fn to_series(&self, p: Prime, window: Window) -> Result<TruncatedSeries, String> {
        if self.exact_zero {
            if self.coeffs.iter().any(|&(_, c)| p.reduce(c) != 0) {
                return Err("exact_zero series with nonzero coefficients".into());
            }
            return Ok(TruncatedSeries::exact_zero(p));
        }
        let prec = if self.exact { None } else { Some(self.prec.unwrap_or(window.hi)) };
        for &(e, _) in &self.coeffs {
            if e < window.lo || prec.map_or(false, |pr| e >= pr) {
                return Err(format!(
                    "coefficient exponent {e} outside window [{}, {})",
                    window.lo,
                    prec.unwrap_or(i64::MAX)
                ));
            }
        }
        Ok(TruncatedSeries::from_coeffs(p, self.coeffs.iter().copied(), prec))
    }
}
