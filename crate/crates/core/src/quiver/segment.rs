//! Indecomposable nilpotent representations and their multisets.
//!
//! `Segment { start: j, length: k }` has one basis vector at each of the
//! nodes `j, j+1, …, j+k-1 (mod n)`, consecutive vectors joined by identity
//! arrows and the last one sent to zero.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FpMatrix, QuiverRep};
use crate::scalars::Prime;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct Segment {
    pub start: usize,
    pub length: usize,
}

impl Segment {
    pub fn new(start: usize, length: usize) -> Self {
        assert!(length >= 1, "segments have positive length");
        Segment { start, length }
    }

    /// Node holding the `t`-th vector.
    pub fn node(&self, t: usize, n: usize) -> usize {
        (self.start + t) % n
    }
}

impl TryFrom<(usize, usize)> for Segment {
    type Error = String;
    fn try_from((start, length): (usize, usize)) -> Result<Self, String> {
        if length == 0 {
            Err("segment length must be positive".into())
        } else {
            Ok(Segment { start, length })
        }
    }
}

impl From<Segment> for (usize, usize) {
    fn from(s: Segment) -> Self {
        (s.start, s.length)
    }
}

/// A sorted multiset of segments.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "RawMultisegment")]
pub struct Multisegment {
    segments: Vec<Segment>,
}

#[derive(Deserialize)]
struct RawMultisegment {
    segments: Vec<Segment>,
}

impl From<RawMultisegment> for Multisegment {
    fn from(raw: RawMultisegment) -> Self {
        Multisegment::new(raw.segments)
    }
}

impl Multisegment {
    pub fn new(mut segments: Vec<Segment>) -> Self {
        segments.sort();
        Multisegment { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Number of segment vectors at each node. Starts must be below `n`.
    pub fn dims(&self, n: usize) -> Vec<usize> {
        let mut dims = vec![0; n];
        for s in &self.segments {
            for t in 0..s.length {
                dims[s.node(t, n)] += 1;
            }
        }
        dims
    }

    /// `(segment index, t)` for each basis vector at each node, in the
    /// canonical order: segment order, then position along the segment.
    pub fn basis(&self, n: usize) -> Vec<Vec<(usize, usize)>> {
        let mut basis = vec![Vec::new(); n];
        for (k, s) in self.segments.iter().enumerate() {
            for t in 0..s.length {
                basis[s.node(t, n)].push((k, t));
            }
        }
        basis
    }

    /// The block-diagonal canonical representation.
    pub fn build(&self, n: usize, p: Prime) -> QuiverRep {
        let dims = self.dims(n);
        let basis = self.basis(n);
        let index: Vec<BTreeMap<(usize, usize), usize>> = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, &key)| (key, i)).collect())
            .collect();
        let maps = (0..n)
            .map(|j| {
                let next = (j + 1) % n;
                let mut m = FpMatrix::zeros(p.get(), dims[next], dims[j]);
                for (col, &(k, t)) in basis[j].iter().enumerate() {
                    if t + 1 < self.segments[k].length {
                        m.set(index[next][&(k, t + 1)], col, 1);
                    }
                }
                m
            })
            .collect();
        QuiverRep::new(p, dims, maps).expect("canonical shapes")
    }
}

impl std::fmt::Display for Multisegment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .segments
            .iter()
            .map(|s| format!("[{},{}]", s.start, s.length))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// All isomorphism classes with dimension vector `dims`, sorted.
pub fn enumerate_classes(dims: &[usize], n: usize) -> Vec<Multisegment> {
    assert_eq!(dims.len(), n, "one dimension per node");
    let total: usize = dims.iter().sum();
    let candidates: Vec<Segment> = (0..n)
        .flat_map(|s| (1..=total).map(move |l| Segment::new(s, l)))
        .collect();
    let mut out = Vec::new();
    let mut remaining = dims.to_vec();
    let mut chosen = Vec::new();
    fill(&candidates, 0, n, &mut remaining, &mut chosen, &mut out);
    out.sort();
    out
}

fn fill(
    candidates: &[Segment],
    from: usize,
    n: usize,
    remaining: &mut Vec<usize>,
    chosen: &mut Vec<Segment>,
    out: &mut Vec<Multisegment>,
) {
    if remaining.iter().all(|&x| x == 0) {
        out.push(Multisegment::new(chosen.clone()));
        return;
    }
    for (idx, s) in candidates.iter().enumerate().skip(from) {
        let mut cover = vec![0; n];
        for t in 0..s.length {
            cover[s.node(t, n)] += 1;
        }
        if cover.iter().zip(remaining.iter()).any(|(c, r)| c > r) {
            continue;
        }
        for (r, c) in remaining.iter_mut().zip(&cover) {
            *r -= c;
        }
        chosen.push(*s);
        fill(candidates, idx, n, remaining, chosen, out);
        chosen.pop();
        for (r, c) in remaining.iter_mut().zip(&cover) {
            *r += c;
        }
    }
}
