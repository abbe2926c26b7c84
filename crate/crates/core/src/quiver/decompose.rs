//! Krull–Schmidt decomposition of a nilpotent representation into segments,
//! with an explicit intertwiner to the canonical block form.

use super::fp::{extend_basis, FpMatrix};
use super::{Multisegment, QuiverError, QuiverRep, Segment, Validation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverDecomposition {
    pub multisegment: Multisegment,
    /// `certificate[j]` maps the canonical basis at node `j` into `V_j`:
    /// `φ_j · P_j = P_{j+1} · canonical_j`.
    pub certificate: Vec<FpMatrix>,
}


/// Decomposes `r` by choosing, for each node `j` and length `m`, tops of
/// segments `Segment(j, m)` as a complement of
/// `ker X^{m-1} + X(ker X^{m+1} at node j-1)` inside `ker X^m` at node `j`,
/// where `X` is the degree-one arrow. The strings `X^t(top)` form the new
/// basis; the result is always checked.
pub fn decompose(r: &QuiverRep) -> Result<QuiverDecomposition, QuiverError> {
    r.validate(Validation::Nilpotent)?;
    let n = r.n();
    let p = r.prime().get();
    let total = r.total_dim();

    // kernels[m][j] = basis of ker(path(j, m)), m = 0..=total+1
    let kernels: Vec<Vec<Vec<Vec<u32>>>> = (0..=total + 1)
        .map(|m| (0..n).map(|j| r.path(j, m).kernel()).collect())
        .collect();

    let mut tops: Vec<(Segment, Vec<u32>)> = Vec::new();
    for m in (1..=total).rev() {
        for j in 0..n {
            let dim = r.dims()[j];
            let prev = (j + n - 1) % n;
            let mut base: Vec<Vec<u32>> = kernels[m - 1][j].clone();
            base.extend(kernels[m + 1][prev].iter().map(|v| r.map(prev).mul_vec(v)));
            for v in extend_basis(p, dim, &base, &kernels[m][j]) {
                tops.push((Segment::new(j, m), v));
            }
        }
    }
    tops.sort_by(|a, b| a.0.cmp(&b.0));
    let multisegment = Multisegment::new(tops.iter().map(|t| t.0).collect());

    let basis = multisegment.basis(n);
    let certificate: Vec<FpMatrix> = (0..n)
        .map(|j| {
            let cols: Vec<Vec<u32>> = basis[j]
                .iter()
                .map(|&(k, t)| {
                    let (seg, top) = &tops[k];
                    r.path(seg.start, t).mul_vec(top)
                })
                .collect();
            FpMatrix::from_columns(p, r.dims()[j], &cols)
        })
        .collect();
    let dec = QuiverDecomposition {
        multisegment,
        certificate,
    };
    verify_certificate(r, &dec)?;
    Ok(dec)
}

/// Checks that the certificate is invertible at each node and intertwines
/// the canonical form with `r`.
pub fn verify_certificate(r: &QuiverRep, dec: &QuiverDecomposition) -> Result<(), QuiverError> {
    let n = r.n();
    let canon = dec.multisegment.build(n, r.prime());
    if canon.dims() != r.dims() {
        return Err(QuiverError::Certificate(format!(
            "dimension vector {:?} differs from {:?}",
            canon.dims(),
            r.dims()
        )));
    }
    for j in 0..n {
        let pj = &dec.certificate[j];
        if (pj.rows(), pj.cols()) != (r.dims()[j], r.dims()[j]) || !pj.is_invertible() {
            return Err(QuiverError::Certificate(format!("node {j} change of basis is singular")));
        }
        let lhs = r.map(j).mul(pj);
        let rhs = dec.certificate[(j + 1) % n].mul(canon.map(j));
        if lhs != rhs {
            return Err(QuiverError::Certificate(format!("arrow from node {j} does not intertwine")));
        }
    }
    Ok(())
}
