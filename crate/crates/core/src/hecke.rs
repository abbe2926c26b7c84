//! Iwahori–Hecke operators as explicit sums over right cosets.
//!
//! `(T_g f)(x) = Σ_{h ∈ Iw g Iw / Iw} f(x h)`; a word `[g1, g2]` is the
//! composite `T_{g1} ∘ T_{g2}`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decompose::Cell;
use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::perm::Permutation;
use crate::scalars::{specialize, CycloScalar, Prime, QLPoly};
use crate::series::{SeriesError, TruncatedSeries};
use crate::whittaker::{dominance_gap, is_dominant, whittaker_eval, WhittakerContext};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum HeckeGenerator {
    #[serde(rename = "srefl")]
    SimpleRefl { i: usize },
    #[serde(rename = "tleq")]
    TLeq { i: usize },
    #[serde(rename = "diag")]
    DiagDominant { d: Vec<i64> },
    #[serde(rename = "word")]
    Word { of: Vec<HeckeGenerator> },
}

impl HeckeGenerator {
    pub fn word(of: Vec<HeckeGenerator>) -> Self {
        HeckeGenerator::Word { of }
    }

    /// `T_σ` as the word of simple reflections along a reduced expression.
    pub fn for_permutation(sigma: &Permutation) -> Self {
        Self::word(
            sigma
                .reduced_word()
                .into_iter()
                .map(|i| HeckeGenerator::SimpleRefl { i })
                .collect(),
        )
    }

    pub fn validate(&self, n: usize) -> std::result::Result<(), HeckeError> {
        let bad = |m: String| Err(HeckeError::InvalidGenerator(m));
        match self {
            HeckeGenerator::SimpleRefl { i } if *i < 1 || *i >= n => bad(format!("s_{i} needs 1 ≤ i < {n}")),
            HeckeGenerator::TLeq { i } if *i < 1 || *i > n => bad(format!("t_≤{i} needs 1 ≤ i ≤ {n}")),
            HeckeGenerator::DiagDominant { d } if d.len() != n => {
                bad(format!("diagonal {d:?} has length {}, expected {n}", d.len()))
            }
            HeckeGenerator::DiagDominant { d } if !is_dominant(d) => bad(format!("{d:?} is not dominant")),
            HeckeGenerator::Word { of } => of.iter().try_for_each(|g| g.validate(n)),
            _ => Ok(()),
        }
    }

    /// Non-word factors in composition order.
    pub fn atoms(&self) -> Vec<&HeckeGenerator> {
        match self {
            HeckeGenerator::Word { of } => of.iter().flat_map(|g| g.atoms()).collect(),
            g => vec![g],
        }
    }
}

impl fmt::Display for HeckeGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeckeGenerator::SimpleRefl { i } => write!(f, "srefl:{i}"),
            HeckeGenerator::TLeq { i } => write!(f, "tleq:{i}"),
            HeckeGenerator::DiagDominant { d } => {
                let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                write!(f, "diag:{}", parts.join(","))
            }
            HeckeGenerator::Word { of } => {
                let parts: Vec<String> = of.iter().map(|g| g.to_string()).collect();
                write!(f, "word:{}", parts.join(","))
            }
        }
    }
}

/// Parses `tleq:2`, `srefl:1`, `diag:1,0` and `word:srefl:1,tleq:2`.
/// Inside a word, a bare number continues the preceding `diag` vector.
impl FromStr for HeckeGenerator {
    type Err = HeckeError;

    fn from_str(s: &str) -> std::result::Result<Self, HeckeError> {
        let err = || HeckeError::InvalidGenerator(format!("cannot parse {s:?}"));
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("word:") {
            let mut of: Vec<HeckeGenerator> = Vec::new();
            for piece in rest.split(',').map(str::trim) {
                if piece.contains(':') {
                    of.push(atom_from_str(piece).ok_or_else(err)?);
                } else if let Some(HeckeGenerator::DiagDominant { d }) = of.last_mut() {
                    d.push(piece.parse().map_err(|_| err())?);
                } else {
                    return Err(err());
                }
            }
            return Ok(HeckeGenerator::Word { of });
        }
        atom_from_str(s).ok_or_else(err)
    }
}

fn atom_from_str(s: &str) -> Option<HeckeGenerator> {
    let (kind, arg) = s.split_once(':')?;
    match kind {
        "tleq" => Some(HeckeGenerator::TLeq { i: arg.parse().ok()? }),
        "srefl" => Some(HeckeGenerator::SimpleRefl { i: arg.parse().ok()? }),
        "diag" => Some(HeckeGenerator::DiagDominant {
            d: arg
                .split(',')
                .map(|x| x.trim().parse().ok())
                .collect::<Option<Vec<i64>>>()?,
        }),
        _ => None,
    }
}

/// `t_≤i`: `e_1 ↦ π e_i`, `e_j ↦ e_{j-1}` for `1 < j ≤ i`, `e_j ↦ e_j` for `j > i`.
pub fn t_leq_matrix(p: Prime, n: usize, i: usize) -> SeriesMatrix {
    assert!(1 <= i && i <= n);
    let mut m = SeriesMatrix::from_fn(p, n, |_, _| TruncatedSeries::exact_zero(p));
    m.set(i - 1, 0, TruncatedSeries::monomial(p, 1, 1));
    for j in 2..=i {
        m.set(j - 2, j - 1, TruncatedSeries::one(p));
    }
    for j in i + 1..=n {
        m.set(j - 1, j - 1, TruncatedSeries::one(p));
    }
    m
}

/// The matrix `g` with `T_g` the given (non-word) generator.
pub fn base_matrix(gen: &HeckeGenerator, p: Prime, n: usize) -> Option<SeriesMatrix> {
    match gen {
        HeckeGenerator::SimpleRefl { i } => Some(SeriesMatrix::perm(p, &Permutation::simple(n, *i))),
        HeckeGenerator::TLeq { i } => Some(t_leq_matrix(p, n, *i)),
        HeckeGenerator::DiagDominant { d } => Some(SeriesMatrix::diag_pi(p, d)),
        HeckeGenerator::Word { .. } => None,
    }
}

/// All vectors in `{0..p-1}^len`, lexicographic.
fn residue_vectors(p: u32, len: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p as i64).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// Right coset representatives of `Iw g Iw / Iw`. For a word the list is
/// the products `h1 · h2 · …` over the factors' representatives.
pub fn coset_reps(gen: &HeckeGenerator, p: Prime, n: usize) -> std::result::Result<Vec<SeriesMatrix>, HeckeError> {
    gen.validate(n)?;
    let reps = match gen {
        HeckeGenerator::TLeq { i } => {
            let t = t_leq_matrix(p, n, *i);
            residue_vectors(p.get(), n - i)
                .into_iter()
                .map(|v| {
                    let mut m = SeriesMatrix::identity(p, n);
                    for (j, &c) in v.iter().enumerate() {
                        m.set(0, i + j, TruncatedSeries::monomial(p, c, -1));
                    }
                    t.mul(&m)
                })
                .collect::<std::result::Result<Vec<_>, _>>()?
        }
        HeckeGenerator::SimpleRefl { i } => {
            let s = SeriesMatrix::perm(p, &Permutation::simple(n, *i));
            (0..p.get() as i64)
                .map(|a| SeriesMatrix::elementary(p, n, i - 1, *i, TruncatedSeries::monomial(p, a, 0)).mul(&s))
                .collect::<std::result::Result<Vec<_>, _>>()?
        }
        HeckeGenerator::DiagDominant { d } => {
            let slots: Vec<(usize, usize, i64)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| (i, j, d[i] - d[j]))
                .filter(|&(_, _, w)| w > 0)
                .collect();
            let total: usize = slots.iter().map(|s| s.2 as usize).sum();
            let diag = SeriesMatrix::diag_pi(p, d);
            residue_vectors(p.get(), total)
                .into_iter()
                .map(|v| {
                    let mut u = SeriesMatrix::identity(p, n);
                    let mut it = v.into_iter();
                    for &(i, j, w) in &slots {
                        let terms: Vec<(i64, i64)> = (0..w).map(|e| (e, it.next().unwrap())).collect();
                        u.set(i, j, TruncatedSeries::from_coeffs(p, terms, None));
                    }
                    u.mul(&diag)
                })
                .collect::<std::result::Result<Vec<_>, _>>()?
        }
        HeckeGenerator::Word { of } => {
            let mut acc = vec![SeriesMatrix::identity(p, n)];
            for g in of {
                let reps = coset_reps(g, p, n)?;
                let mut next = Vec::with_capacity(acc.len() * reps.len());
                for a in &acc {
                    for h in &reps {
                        next.push(a.mul(h)?);
                    }
                }
                acc = next;
            }
            acc
        }
    };
    Ok(reps)
}

/// `[Iw g Iw : Iw]` as a polynomial in `q`.
pub fn expected_volume(gen: &HeckeGenerator, n: usize) -> QLPoly {
    match gen {
        HeckeGenerator::SimpleRefl { .. } => QLPoly::q(),
        HeckeGenerator::TLeq { i } => QLPoly::q_pow(n as i64 - *i as i64),
        HeckeGenerator::DiagDominant { d } => QLPoly::q_pow(dominance_gap(d)),
        HeckeGenerator::Word { of } => of.iter().fold(QLPoly::one(), |acc, g| &acc * &expected_volume(g, n)),
    }
}

/// Eigenvalue of `T_g` on the Steinberg Whittaker vector.
pub fn expected_eigenvalue(gen: &HeckeGenerator) -> QLPoly {
    match gen {
        HeckeGenerator::SimpleRefl { .. } => QLPoly::constant(-1),
        HeckeGenerator::TLeq { i } => {
            let s = if i % 2 == 1 { 1 } else { -1 };
            QLPoly::monomial(s, 0, 1)
        }
        HeckeGenerator::DiagDominant { d } => QLPoly::lambda_pow(d.iter().sum()),
        HeckeGenerator::Word { of } => of.iter().fold(QLPoly::one(), |acc, g| &acc * &expected_eigenvalue(g)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepReport {
    pub generator: String,
    pub count: usize,
    pub expected_count: u64,
    pub inequivalent: bool,
    pub members: bool,
    pub failures: Vec<String>,
}

impl RepReport {
    pub fn passed(&self) -> bool {
        self.inequivalent && self.members && self.count as u64 == self.expected_count
    }
}

fn specialized_count(v: &QLPoly, p: Prime) -> u64 {
    let c = specialize(v, p);
    let x = c.coeff(0);
    let r = x.as_rational().expect("volume is rational");
    assert!(r.is_integer(), "volume is an integer");
    r.to_integer().try_into().expect("volume fits in u64")
}

/// Builds the representatives of `gen` and certifies them.
pub fn validate_reps(gen: &HeckeGenerator, ctx: &WhittakerContext) -> Result<RepReport> {
    let p = require_prime(ctx)?;
    gen.validate(ctx.n)?;
    if let HeckeGenerator::Word { of } = gen {
        let parts = of.iter().map(|g| validate_reps(g, ctx)).collect::<Result<Vec<_>>>()?;
        return Ok(RepReport {
            generator: gen.to_string(),
            count: parts.iter().map(|r| r.count).product(),
            expected_count: parts.iter().map(|r| r.expected_count).product(),
            inequivalent: parts.iter().all(|r| r.inequivalent),
            members: parts.iter().all(|r| r.members),
            failures: parts.into_iter().flat_map(|r| r.failures).collect(),
        });
    }
    let reps = coset_reps(gen, p, ctx.n)?;
    validate_rep_set(gen, &reps, ctx)
}

/// Certifies a candidate list for a non-word generator: each `h` lies in
/// `Iw · g`, no two lie in the same right coset, and the count is the volume.
pub fn validate_rep_set(gen: &HeckeGenerator, reps: &[SeriesMatrix], ctx: &WhittakerContext) -> Result<RepReport> {
    let p = require_prime(ctx)?;
    let n = ctx.n;
    let base = base_matrix(gen, p, n)
        .ok_or_else(|| Error::Input("words are validated factor by factor".into()))?;
    let base_inv = base.inv(ctx.window)?;
    let mut failures = Vec::new();

    let mut members = true;
    for (a, h) in reps.iter().enumerate() {
        if !h.mul(&base_inv)?.iwahori_member()? {
            members = false;
            failures.push(format!("representative {a} is not in Iw·g"));
        }
    }

    let invs = reps.iter().map(|h| h.inv(ctx.window)).collect::<std::result::Result<Vec<_>, _>>()?;
    let pairs: Vec<(usize, usize)> = (0..reps.len())
        .flat_map(|a| (a + 1..reps.len()).map(move |b| (a, b)))
        .collect();
    let clashes = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<Option<(usize, usize)>> {
            let m = invs[a].mul(&reps[b])?;
            Ok(m.iwahori_member()?.then_some((a, b)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut inequivalent = true;
    for (a, b) in clashes.into_iter().flatten() {
        inequivalent = false;
        failures.push(format!("representatives {a} and {b} lie in the same coset"));
    }

    let expected_count = specialized_count(&expected_volume(gen, n), p);
    if reps.len() as u64 != expected_count {
        failures.push(format!("{} representatives, volume is {expected_count}", reps.len()));
    }
    Ok(RepReport {
        generator: gen.to_string(),
        count: reps.len(),
        expected_count,
        inequivalent,
        members,
        failures,
    })
}

fn require_prime(ctx: &WhittakerContext) -> Result<Prime> {
    ctx.p
        .ok_or_else(|| Error::Input("Hecke operators need a prime".into()))
}

/// `(T_gen f)(x)`.
pub fn hecke_apply<F>(gen: &HeckeGenerator, f: &F, x: &SeriesMatrix, ctx: &WhittakerContext) -> Result<CycloScalar>
where
    F: Fn(&SeriesMatrix) -> Result<CycloScalar> + Sync,
{
    let p = require_prime(ctx)?;
    gen.validate(ctx.n)?;
    let reps = gen
        .atoms()
        .into_iter()
        .map(|g| coset_reps(g, p, ctx.n))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    apply_nested(&reps, f, x)
}

fn apply_nested<F>(reps: &[Vec<SeriesMatrix>], f: &F, x: &SeriesMatrix) -> Result<CycloScalar>
where
    F: Fn(&SeriesMatrix) -> Result<CycloScalar>,
{
    let Some((first, rest)) = reps.split_first() else {
        return f(x);
    };
    let mut acc = CycloScalar::zero(x.prime());
    for h in first {
        let y = x.mul(h)?;
        acc = &acc + &apply_nested(rest, f, &y)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenRow {
    pub cell: Cell,
    pub lhs: CycloScalar,
    pub rhs: CycloScalar,
}

impl EigenRow {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenReport {
    pub generator: HeckeGenerator,
    pub eigenvalue: QLPoly,
    pub rows: Vec<EigenRow>,
}

impl EigenReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(EigenRow::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EigenRow> {
        self.rows.iter().filter(|r| !r.passed())
    }
}

/// Checks `(T_gen W)(x) = eigenvalue · W(x)` at `x = diag(π^d) σ` for each cell.
pub fn verify_eigen(gen: &HeckeGenerator, cells: &[Cell], ctx: &WhittakerContext) -> Result<EigenReport> {
    let p = require_prime(ctx)?;
    gen.validate(ctx.n)?;
    let eigenvalue = expected_eigenvalue(gen);
    let scale = specialize(&eigenvalue, p);
    let reps = gen
        .atoms()
        .into_iter()
        .map(|g| coset_reps(g, p, ctx.n))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let w = |g: &SeriesMatrix| whittaker_eval(ctx, g);
    let rows = cells
        .par_iter()
        .map(|cell| -> Result<EigenRow> {
            if cell.n() != ctx.n {
                return Err(Error::Input(format!("cell {cell} does not match n = {}", ctx.n)));
            }
            let x = cell.matrix(p);
            let lhs = apply_nested(&reps, &w, &x)?;
            let rhs = &scale * &w(&x)?;
            Ok(EigenRow {
                cell: cell.clone(),
                lhs,
                rhs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenReport {
        generator: gen.clone(),
        eigenvalue,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_leq_shapes() {
        let p = Prime::new(3).unwrap();
        assert_eq!(t_leq_matrix(p, 2, 1), SeriesMatrix::diag_pi(p, &[1, 0]));
        let pi = TruncatedSeries::monomial(p, 1, 1);
        let one = TruncatedSeries::one(p);
        let z = TruncatedSeries::exact_zero(p);
        let t2 = SeriesMatrix::from_rows(p, vec![vec![z.clone(), one.clone()], vec![pi.clone(), z.clone()]]).unwrap();
        assert_eq!(t_leq_matrix(p, 2, 2), t2);
        let t3 = t_leq_matrix(p, 3, 3);
        assert_eq!(t3.get(2, 0), &pi);
        assert_eq!(t3.get(0, 1), &one);
        assert_eq!(t3.get(1, 2), &one);
    }

    #[test]
    fn parse_and_print() {
        let g: HeckeGenerator = "word:srefl:1,tleq:2".parse().unwrap();
        assert_eq!(
            g,
            HeckeGenerator::word(vec![HeckeGenerator::SimpleRefl { i: 1 }, HeckeGenerator::TLeq { i: 2 }])
        );
        assert_eq!(g.to_string(), "word:srefl:1,tleq:2");
        let g: HeckeGenerator = "word:diag:2,1,0,srefl:2".parse().unwrap();
        assert_eq!(g.to_string(), "word:diag:2,1,0,srefl:2");
        assert!("bogus:1".parse::<HeckeGenerator>().is_err());
        let json = serde_json::to_string(&HeckeGenerator::DiagDominant { d: vec![1, 0] }).unwrap();
        assert_eq!(json, r#"{"kind":"diag","d":[1,0]}"#);
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(expected_eigenvalue(&HeckeGenerator::TLeq { i: 2 }), QLPoly::monomial(-1, 0, 1));
        let w: HeckeGenerator = "word:srefl:1,tleq:2".parse().unwrap();
        assert_eq!(expected_eigenvalue(&w), QLPoly::lambda());
        assert_eq!(
            expected_eigenvalue(&HeckeGenerator::DiagDominant { d: vec![2, 1, 0] }),
            QLPoly::lambda_pow(3)
        );
    }

    #[test]
    fn rep_counts() {
        let p2 = Prime::new(2).unwrap();
        let p3 = Prime::new(3).unwrap();
        assert_eq!(coset_reps(&HeckeGenerator::TLeq { i: 2 }, p3, 2).unwrap(), vec![t_leq_matrix(p3, 2, 2)]);
        assert_eq!(coset_reps(&HeckeGenerator::TLeq { i: 1 }, p2, 2).unwrap().len(), 2);
        assert_eq!(coset_reps(&HeckeGenerator::SimpleRefl { i: 1 }, p3, 2).unwrap().len(), 3);
        assert_eq!(coset_reps(&HeckeGenerator::DiagDominant { d: vec![1, 0] }, p3, 2).unwrap().len(), 3);
    }
}
