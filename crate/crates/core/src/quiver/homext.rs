//! `Hom` and `Ext¹` between representations from the two-term complex
//! `⊕_i Hom(X_i, Y_i) → ⊕_i Hom(X_i, Y_{i+1})`, `f ↦ f_{i+1} φ^X_i − φ^Y_i f_i`.

use super::{FpMatrix, QuiverError, QuiverRep};

/// Position of entry `(a, b)` of `f_i` among the unknowns.
fn offsets(x: &QuiverRep, y: &QuiverRep) -> Vec<usize> {
    let mut off = Vec::with_capacity(x.n() + 1);
    let mut acc = 0;
    for i in 0..x.n() {
        off.push(acc);
        acc += y.dims()[i] * x.dims()[i];
    }
    off.push(acc);
    off
}

/// Matrix of the differential.
pub fn differential(x: &QuiverRep, y: &QuiverRep) -> Result<FpMatrix, QuiverError> {
    if x.n() != y.n() || x.prime() != y.prime() {
        return Err(QuiverError::Mismatch("node count or prime".into()));
    }
    let n = x.n();
    let p = x.prime().get();
    let dx = x.dims();
    let dy = y.dims();
    let off = offsets(x, y);
    let mut row_off = Vec::with_capacity(n + 1);
    let mut acc = 0;
    for i in 0..n {
        row_off.push(acc);
        acc += dy[(i + 1) % n] * dx[i];
    }
    let mut d = FpMatrix::zeros(p, acc, off[n]);
    let add = |d: &mut FpMatrix, r: usize, c: usize, v: u32| {
        let cur = d.get(r, c);
        d.set(r, c, (cur + v) % p);
    };
    for i in 0..n {
        let next = (i + 1) % n;
        let phx = x.map(i);
        let phy = y.map(i);
        // output entry (a, b): a over Y_{i+1}, b over X_i
        for a in 0..dy[next] {
            for b in 0..dx[i] {
                let row = row_off[i] + a * dx[i] + b;
                // (f_{i+1} φ^X_i)_{ab} = Σ_c f_{i+1}[a][c] φ^X_i[c][b]
                for c in 0..dx[next] {
                    let coef = phx.get(c, b);
                    if coef != 0 {
                        add(&mut d, row, off[next] + a * dx[next] + c, coef);
                    }
                }
                // -(φ^Y_i f_i)_{ab} = -Σ_c φ^Y_i[a][c] f_i[c][b]
                for c in 0..dy[i] {
                    let coef = phy.get(a, c);
                    if coef != 0 {
                        add(&mut d, row, off[i] + c * dx[i] + b, p - coef);
                    }
                }
            }
        }
    }
    Ok(d)
}

pub fn hom_dim(x: &QuiverRep, y: &QuiverRep) -> Result<usize, QuiverError> {
    let d = differential(x, y)?;
    Ok(d.cols() - d.rank())
}

pub fn ext1_dim(x: &QuiverRep, y: &QuiverRep) -> Result<usize, QuiverError> {
    let d = differential(x, y)?;
    Ok(d.rows() - d.rank())
}

/// `Σ_i x_i (y_i − y_{i+1})`.
pub fn euler_form(x: &[usize], y: &[usize]) -> i64 {
    let n = x.len();
    (0..n)
        .map(|i| x[i] as i64 * (y[i] as i64 - y[(i + 1) % n] as i64))
        .sum()
}

/// A basis of `Hom(X, Y)`, each element given node by node.
pub fn hom_basis(x: &QuiverRep, y: &QuiverRep) -> Result<Vec<Vec<FpMatrix>>, QuiverError> {
    let d = differential(x, y)?;
    let off = offsets(x, y);
    let p = x.prime().get();
    Ok(d.kernel()
        .into_iter()
        .map(|v| {
            (0..x.n())
                .map(|i| {
                    let (r, c) = (y.dims()[i], x.dims()[i]);
                    let mut f = FpMatrix::zeros(p, r, c);
                    for a in 0..r {
                        for b in 0..c {
                            f.set(a, b, v[off[i] + a * c + b]);
                        }
                    }
                    f
                })
                .collect()
        })
        .collect())
}

/// Exhaustive search for an isomorphism among all of `Hom(X, Y)`. Only
/// sensible when `p^{hom}` is small.
pub fn isomorphic_brute_force(x: &QuiverRep, y: &QuiverRep) -> Result<bool, QuiverError> {
    if x.dims() != y.dims() {
        return Ok(false);
    }
    let basis = hom_basis(x, y)?;
    let p = x.prime().get();
    let count = (p as u64).checked_pow(basis.len() as u32).expect("search space too large");
    for idx in 0..count {
        let mut digits = idx;
        let mut f: Vec<FpMatrix> = (0..x.n())
            .map(|i| FpMatrix::zeros(p, y.dims()[i], x.dims()[i]))
            .collect();
        for b in &basis {
            let c = (digits % p as u64) as u32;
            digits /= p as u64;
            if c == 0 {
                continue;
            }
            for (fi, bi) in f.iter_mut().zip(b) {
                for r in 0..fi.rows() {
                    for s in 0..fi.cols() {
                        fi.set(r, s, fi.get(r, s) + c * bi.get(r, s));
                    }
                }
            }
        }
        if f.iter().all(FpMatrix::is_invertible) {
            return Ok(true);
        }
    }
    Ok(false)
}
