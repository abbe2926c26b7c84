//! Predicted `Ext¹(T, E)` and `Hom(E, T)` dimensions for a torsion sheaf `T`
//! against a parabolic bundle `E`, from degree data alone.
//!
//! `E` enters only through `rank` and the degrees `deg E^{(i,p)}` of its
//! flag at each marked point, `i = 0..n-1`; indices are read cyclically with
//! `deg E^{(i+n,p)} = deg E^{(i,p)} + rank`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Flag degrees of a parabolic bundle at one marked point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagDegrees {
    pub rank: i64,
    pub degrees: Vec<i64>,
}

impl FlagDegrees {
    /// Steps between consecutive indices lie in `[0, rank]`.
    pub fn new(rank: i64, degrees: Vec<i64>) -> Result<Self, String> {
        let f = FlagDegrees { rank, degrees };
        let n = f.degrees.len() as i64;
        if n == 0 || rank < 0 {
            return Err("need a nonnegative rank and at least one index".into());
        }
        for i in 0..n {
            let step = f.deg(i + 1) - f.deg(i);
            if step < 0 || step > rank {
                return Err(format!("degree step {step} at index {i} is outside [0, {rank}]"));
            }
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// `deg E^{(i,p)}` for any integer `i`.
    pub fn deg(&self, i: i64) -> i64 {
        let n = self.degrees.len() as i64;
        let (q, r) = (i.div_euclid(n), i.rem_euclid(n));
        self.degrees[r as usize] + q * self.rank
    }
}

/// `(hom, ext1)` for the elementary sheaf `k(p)` at index `i0`.
pub fn predicted_dims_vs_bundle(
    elementary_index: (usize, &str),
    bundle_degrees: &BTreeMap<String, FlagDegrees>,
) -> Result<(i64, i64), String> {
    let (i0, point) = elementary_index;
    let flag = bundle_degrees
        .get(point)
        .ok_or_else(|| format!("no degree data at point {point}"))?;
    if i0 >= flag.n() {
        return Err(format!("index {i0} out of range for {} indices", flag.n()));
    }
    let i = i0 as i64;
    Ok((flag.deg(i) - flag.deg(i - 1), flag.deg(i + 1) - flag.deg(i)))
}

/// `(hom, ext1)` for a torsion sheaf at `point` with torsion degree vector
/// `torsion`, summing the elementary contributions of a filtration.
pub fn predicted_for_torsion(
    torsion: &[usize],
    point: &str,
    bundle_degrees: &BTreeMap<String, FlagDegrees>,
) -> Result<(i64, i64), String> {
    let mut hom = 0;
    let mut ext = 0;
    for (i, &t) in torsion.iter().enumerate() {
        let (h, e) = predicted_dims_vs_bundle((i, point), bundle_degrees)?;
        hom += t as i64 * h;
        ext += t as i64 * e;
    }
    Ok((hom, ext))
}
