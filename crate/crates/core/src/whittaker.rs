//! The Iwahori-invariant Whittaker function of the twisted Steinberg
//! representation, normalized by `W(1) = 1`.

use serde::{Deserialize, Serialize};

use crate::decompose::{decompose_with_retry, residue_character, Cell};
use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::perm::Permutation;
use crate::scalars::{psi_char, specialize, CycloScalar, Prime, QLPoly};
use crate::series::Window;

/// Whether `W` carries the factor `sign(σ)`.
///
/// `Unsigned` reproduces the antidiagonal GL_2 value without the sign; it
/// fails the `T_s` eigenvalue check and exists as a negative control.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConvention {
    #[default]
    Signed,
    Unsigned,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhittakerContext {
    pub n: usize,
    pub p: Option<Prime>,
    pub window: Window,
    pub retries: u32,
    pub sign: SignConvention,
}

impl WhittakerContext {
    pub fn new(n: usize, p: Option<Prime>) -> Self {
        assert!(n >= 1, "rank must be positive");
        WhittakerContext {
            n,
            p,
            window: Window::default(),
            retries: 3,
            sign: SignConvention::Signed,
        }
    }

    pub fn with_sign(mut self, sign: SignConvention) -> Self {
        self.sign = sign;
        self
    }

    pub fn with_window(mut self, window: Window, retries: u32) -> Self {
        self.window = window;
        self.retries = retries;
        self
    }

    fn prime(&self) -> Result<Prime> {
        self.p
            .ok_or_else(|| Error::Input("evaluation at a matrix needs a prime".into()))
    }
}

/// `Σ_{i<j} (d_i - d_j)`.
pub fn dominance_gap(d: &[i64]) -> i64 {
    let n = d.len() as i64;
    d.iter()
        .enumerate()
        .map(|(i, &x)| x * (n - 1 - 2 * i as i64))
        .sum()
}

pub fn is_dominant(d: &[i64]) -> bool {
    d.windows(2).all(|w| w[0] >= w[1])
}

/// `q^{inv(σ)}`.
pub fn vol_sigma(sigma: &Permutation) -> QLPoly {
    QLPoly::q_pow(sigma.inv_count() as i64)
}

/// `q^{Σ_{i<j}(d_i - d_j)}` for dominant `d`.
pub fn vol_dominant(d: &[i64]) -> Result<QLPoly> {
    if !is_dominant(d) {
        return Err(Error::Input(format!("{d:?} is not dominant")));
    }
    Ok(QLPoly::q_pow(dominance_gap(d)))
}

/// `λ^{Σ d_i} · q^{-Σ_{i<j}(d_i - d_j)}`.
pub fn delta_lambda(d: &[i64]) -> QLPoly {
    QLPoly::monomial(1, -dominance_gap(d), d.iter().sum())
}

/// `d_i ≥ d_{i+1} - [σ^{-1}(i) > σ^{-1}(i+1)]` for all `i`.
pub fn support_holds(cell: &Cell) -> bool {
    let sinv = cell.sigma.inverse();
    (0..cell.n().saturating_sub(1)).all(|i| {
        let drop = (sinv.apply(i) > sinv.apply(i + 1)) as i64;
        cell.d[i] >= cell.d[i + 1] - drop
    })
}

pub fn whittaker_formula(cell: &Cell) -> QLPoly {
    whittaker_formula_with(cell, SignConvention::Signed)
}

pub fn whittaker_formula_with(cell: &Cell, sign: SignConvention) -> QLPoly {
    if !support_holds(cell) {
        return QLPoly::zero();
    }
    let s = match sign {
        SignConvention::Signed => cell.sigma.sign(),
        SignConvention::Unsigned => 1,
    };
    let q_exp = -dominance_gap(&cell.d) - cell.sigma.inv_count() as i64;
    QLPoly::monomial(s, q_exp, cell.d.iter().sum())
}

/// Value at a matrix together with the data it was read from.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: CycloScalar,
    pub cell: Cell,
    /// `None` when the cell is outside the support and the phase was not needed.
    pub residue: Option<u32>,
}

pub fn whittaker_eval(ctx: &WhittakerContext, g: &SeriesMatrix) -> Result<CycloScalar> {
    Ok(whittaker_eval_detailed(ctx, g)?.value)
}

/// `ψ(residue(u)) · W(cell)` for `g = u · diag(π^d) · σ · k`.
pub fn whittaker_eval_detailed(ctx: &WhittakerContext, g: &SeriesMatrix) -> Result<Evaluation> {
    let p = ctx.prime()?;
    if g.prime() != p || g.n() != ctx.n {
        return Err(Error::Input(format!(
            "matrix is {}x{} over F_{}, context is GL_{} over F_{}",
            g.n(),
            g.n(),
            g.prime(),
            ctx.n,
            p
        )));
    }
    let dec = decompose_with_retry(g, ctx.window, ctx.retries)?;
    let w = whittaker_formula_with(&dec.cell, ctx.sign);
    if w.is_zero() {
        return Ok(Evaluation {
            value: CycloScalar::zero(p),
            cell: dec.cell,
            residue: None,
        });
    }
    let res = residue_character(&dec.u)?;
    let value = &psi_char(p, res as i64) * &specialize(&w, p);
    Ok(Evaluation {
        value,
        cell: dec.cell,
        residue: Some(res),
    })
}
