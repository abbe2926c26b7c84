//! Filtrations by subrepresentations: elementary steps (one new dimension at
//! one node) and, for constant dimension vectors, constant-degree steps.

use super::decompose::decompose;
use super::fp::{extend_basis, span_rank, FpMatrix};
use super::{QuiverError, QuiverRep, Validation};

/// A subrepresentation, given by a basis of its space at each node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubRep {
    pub bases: Vec<Vec<Vec<u32>>>,
}

impl SubRep {
    pub fn zero(n: usize) -> Self {
        SubRep {
            bases: vec![Vec::new(); n],
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Stable under every arrow of `r`.
    pub fn is_subrep_of(&self, r: &QuiverRep) -> bool {
        let n = r.n();
        let p = r.prime().get();
        (0..n).all(|j| {
            let next = (j + 1) % n;
            let dim = r.dims()[next];
            let own = span_rank(p, r.dims()[j], &self.bases[j]) == self.bases[j].len();
            let mut span = self.bases[next].clone();
            let before = span_rank(p, dim, &span);
            span.extend(self.bases[j].iter().map(|v| r.map(j).mul_vec(v)));
            own && span_rank(p, dim, &span) == before
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    /// `0 ⊊ steps[0] ⊊ … ⊊ steps[last] = r`.
    pub steps: Vec<SubRep>,
}

impl Filtration {
    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.steps.iter().map(SubRep::dims).collect()
    }
}

/// Greedy maximal chain: at each step the lowest node carrying a vector
/// whose image already lies in the current subrepresentation.
pub fn elementary_filtration(r: &QuiverRep) -> Result<Filtration, QuiverError> {
    r.validate(Validation::Nilpotent)?;
    let n = r.n();
    let p = r.prime().get();
    let mut cur = SubRep::zero(n);
    let mut steps = Vec::new();
    while cur.dims() != r.dims() {
        let mut grown = false;
        for j in 0..n {
            let next = (j + 1) % n;
            let (dj, dn) = (r.dims()[j], r.dims()[next]);
            // solve φ_j v = B w with B spanning the current space at node j+1
            let k = cur.bases[next].len();
            let mut sys = FpMatrix::zeros(p, dn, dj + k);
            for a in 0..dn {
                for b in 0..dj {
                    sys.set(a, b, r.map(j).get(a, b));
                }
                for (c, w) in cur.bases[next].iter().enumerate() {
                    sys.set(a, dj + c, (p - w[a]) % p);
                }
            }
            let preimage: Vec<Vec<u32>> = sys.kernel().into_iter().map(|v| v[..dj].to_vec()).collect();
            if let Some(v) = extend_basis(p, dj, &cur.bases[j], &preimage).into_iter().next() {
                cur.bases[j].push(v);
                steps.push(cur.clone());
                grown = true;
                break;
            }
        }
        if !grown {
            return Err(QuiverError::Filtration("no elementary extension found".into()));
        }
    }
    Ok(Filtration { steps })
}

/// For `dims = (c, …, c)`: a chain whose `i`-th term has dimension vector
/// `(i, …, i)`, built from suffixes of the segments in a decomposition.
pub fn constant_degree_filtration(r: &QuiverRep) -> Result<Filtration, QuiverError> {
    let n = r.n();
    let c = r.dims()[0];
    if r.dims().iter().any(|&d| d != c) {
        return Err(QuiverError::Filtration(format!("dimension vector {:?} is not constant", r.dims())));
    }
    let dec = decompose(r)?;
    let lengths: Vec<usize> = dec.multisegment.segments().iter().map(|s| s.length).collect();
    let starts: Vec<usize> = dec.multisegment.segments().iter().map(|s| s.start).collect();
    let mut taken = vec![0usize; lengths.len()];
    let mut path = Vec::new();
    if !extend_chain(n, &starts, &lengths, &mut taken, &mut path) {
        return Err(QuiverError::Filtration("segments admit no constant-degree chain".into()));
    }

    let basis = dec.multisegment.basis(n);
    let steps = path
        .iter()
        .map(|taken: &Vec<usize>| {
            let bases = (0..n)
                .map(|j| {
                    basis[j]
                        .iter()
                        .enumerate()
                        .filter(|(_, &(k, t))| t + taken[k] >= lengths[k])
                        .map(|(col, _)| dec.certificate[j].column(col))
                        .collect()
                })
                .collect();
            SubRep { bases }
        })
        .collect();
    Ok(Filtration { steps })
}

/// Depth-first search over steps adding one vector at every node.
fn extend_chain(
    n: usize,
    starts: &[usize],
    lengths: &[usize],
    taken: &mut Vec<usize>,
    path: &mut Vec<Vec<usize>>,
) -> bool {
    if taken.iter().zip(lengths).all(|(t, l)| t == l) {
        return true;
    }
    let mut cover = vec![0usize; n];
    step_choices(n, starts, lengths, 0, taken, &mut cover, path)
}

fn step_choices(
    n: usize,
    starts: &[usize],
    lengths: &[usize],
    k: usize,
    taken: &mut Vec<usize>,
    cover: &mut Vec<usize>,
    path: &mut Vec<Vec<usize>>,
) -> bool {
    if k == lengths.len() {
        if cover.iter().any(|&c| c != 1) {
            return false;
        }
        path.push(taken.clone());
        if extend_chain(n, starts, lengths, taken, path) {
            return true;
        }
        path.pop();
        return false;
    }
    let base = taken[k];
    for extra in 0..=(lengths[k] - base).min(n) {
        // the vectors added are positions lengths-base-extra .. lengths-base-1
        let mut ok = true;
        for e in 0..extra {
            let t = lengths[k] - base - 1 - e;
            let node = (starts[k] + t) % n;
            cover[node] += 1;
            if cover[node] > 1 {
                ok = false;
            }
        }
        if ok {
            taken[k] = base + extra;
            if step_choices(n, starts, lengths, k + 1, taken, cover, path) {
                return true;
            }
            taken[k] = base;
        }
        for e in 0..extra {
            let t = lengths[k] - base - 1 - e;
            cover[(starts[k] + t) % n] -= 1;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{Multisegment, Segment};
    use crate::scalars::Prime;

    fn ms(v: &[(usize, usize)]) -> Multisegment {
        Multisegment::new(v.iter().map(|&(s, l)| Segment::new(s, l)).collect())
    }

    #[test]
    fn segment_socle_comes_first() {
        let r = ms(&[(0, 2)]).build(2, Prime::new(3).unwrap());
        let f = elementary_filtration(&r).unwrap();
        assert_eq!(f.dims(), vec![vec![0, 1], vec![1, 1]]);
        assert!(f.steps.iter().all(|s| s.is_subrep_of(&r)));
    }

    #[test]
    fn semisimple_picks_lowest_node() {
        let r = ms(&[(0, 1), (1, 1)]).build(2, Prime::new(2).unwrap());
        assert_eq!(elementary_filtration(&r).unwrap().dims(), vec![vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn constant_degree_chain() {
        let r = ms(&[(0, 2), (1, 2)]).build(2, Prime::new(3).unwrap());
        let f = constant_degree_filtration(&r).unwrap();
        assert_eq!(f.dims(), vec![vec![1, 1], vec![2, 2]]);
        assert!(f.steps.iter().all(|s| s.is_subrep_of(&r)));
    }
}
