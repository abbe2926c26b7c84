//! Frobenius traces `L(k)` of the Whittaker sheaf on the torsion sheaves
//! `O_{(d-k)p} ⊕ Ω_{kp}` for `k ∈ ½ℕ`, and the sheaf-to-operator dictionary
//! in rank two.
//!
//! Half-integers are stored doubled: `twice_k = 2k`.
//!
//! As cyclic-quiver representations with two nodes, `Ω_{mp}` is
//! `Segment(0, 2m)` and `O_{mp}` is `Segment(1, 2m)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::hecke::{expected_eigenvalue, HeckeGenerator};
use crate::quiver::homext::ext1_dim;
use crate::quiver::{enumerate_classes, Multisegment, Segment};
use crate::scalars::{psi_char, specialize, CycloScalar, Prime, QLPoly};

/// `k` as text: `0`, `1/2`, `1`, `3/2`, …
pub fn k_label(twice_k: u32) -> String {
    if twice_k % 2 == 0 {
        (twice_k / 2).to_string()
    } else {
        format!("{twice_k}/2")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceTable {
    d: u32,
    values: BTreeMap<u32, QLPoly>,
}

impl TraceTable {
    pub fn d(&self) -> u32 {
        self.d
    }

    /// `L(k)` for `twice_k = 2k ∈ [0, 2d]`.
    pub fn get(&self, twice_k: u32) -> &QLPoly {
        &self.values[&twice_k]
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, &QLPoly)> {
        self.values.iter().map(|(&k, v)| (k, v))
    }
}

fn q_minus_one() -> QLPoly {
    &QLPoly::q() - &QLPoly::one()
}

/// The recursion for `0 ≤ k ≤ d/2`, extended by `L(k) = L(d-k)`:
///
/// ```text
/// L(k) = q^k λ^d − (q−1) Σ_{i=0}^{k−1} q^i L(k−½−i)     k ∈ ℕ
/// L(k) =        − (q−1) Σ_{i=0}^{k−½} q^i L(k−½−i)     k ∈ ½ + ℕ
/// ```
pub fn l_values(d: u32) -> TraceTable {
    assert!(d >= 1, "d must be positive");
    let lam_d = QLPoly::lambda_pow(d as i64);
    let mut values: BTreeMap<u32, QLPoly> = BTreeMap::new();
    for tk in 0..=d {
        values.insert(tk, recursion_step(tk, &lam_d, &values));
    }
    for tk in d + 1..=2 * d {
        let mirror = values[&(2 * d - tk)].clone();
        values.insert(tk, mirror);
    }
    TraceTable { d, values }
}

/// Right-hand side of the recursion at `2k = tk`, reading lower values from `known`.
fn recursion_step(tk: u32, lam_d: &QLPoly, known: &BTreeMap<u32, QLPoly>) -> QLPoly {
    let mut sum = QLPoly::zero();
    for (i, lower) in shell_indices(tk).enumerate() {
        sum = &sum + &(&QLPoly::q_pow(i as i64) * &known[&lower]);
    }
    let tail = &q_minus_one() * &sum;
    if tk % 2 == 0 {
        &(&QLPoly::q_pow(tk as i64 / 2) * lam_d) - &tail
    } else {
        -&tail
    }
}

/// `2(k − ½ − i)` for `i = 0, 1, …` down to the last nonnegative value.
fn shell_indices(tk: u32) -> impl Iterator<Item = u32> {
    (0..tk).rev().step_by(2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityRow {
    pub k: String,
    pub lhs: QLPoly,
    pub rhs: QLPoly,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub d: u32,
    pub rows: Vec<IdentityRow>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

fn row(tk: u32, lhs: QLPoly, rhs: QLPoly) -> IdentityRow {
    IdentityRow {
        k: k_label(tk),
        passed: lhs == rhs,
        lhs,
        rhs,
    }
}

/// `±q^{2k} λ^d`, positive for integral `k`.
pub fn weighted_target(tk: u32, d: u32) -> QLPoly {
    let s = if tk % 2 == 0 { 1 } else { -1 };
    QLPoly::monomial(s, tk as i64, d as i64)
}

/// `L(k) − L(k−½) = ±q^{2k} λ^d` for `0 < k ≤ d/2`.
pub fn verify_lemma54(d: u32) -> IdentityReport {
    let t = l_values(d);
    let rows = (1..=d)
        .map(|tk| row(tk, t.get(tk) - t.get(tk - 1), weighted_target(tk, d)))
        .collect();
    IdentityReport { d, rows }
}

/// `dim Ext¹(O_{(d-k)p}, Ω_{jp})` with `j = twice_j / 2`, from the quiver.
pub fn ext_dim(d: u32, twice_k: u32, twice_j: u32) -> usize {
    if twice_j == 0 {
        return 0;
    }
    let p = Prime::new(2).expect("2 is prime");
    let x = Multisegment::new(vec![Segment::new(1, (2 * d - twice_k) as usize)]).build(2, p);
    let y = Multisegment::new(vec![Segment::new(0, twice_j as usize)]).build(2, p);
    ext1_dim(&x, &y).expect("same quiver")
}

/// Shells of `Ext¹(O_{(d-k)p}, Ω_{kp})` under the push-out chain
/// `Ω_k ⊃ Ω_{k-1} ⊃ …`: `(exponent of the outer size, exponent of the inner
/// size, 2k' of the middle sheaf O_{(d-k')p} ⊕ Ω_{k'p})`, outermost first.
pub fn shells(d: u32, tk: u32) -> Vec<(usize, usize, u32)> {
    let mut out = Vec::new();
    let mut tj = tk;
    let mut l = 0u32;
    while tj > 0 {
        let inner = tj.saturating_sub(2);
        let middle = if tk % 2 == 1 {
            // Ω_{(d-l)p} ⊕ O_{lp}
            2 * d - 2 * l
        } else {
            // Ω_{(d-l-½)p} ⊕ O_{(l+½)p}
            2 * d - 2 * l - 1
        };
        out.push((ext_dim(d, tk, tj), ext_dim(d, tk, inner), middle));
        tj = inner;
        l += 1;
    }
    out
}

/// The unweighted sum over `Ext¹` equals `q^k λ^d` (integral `k`) or `0`,
/// assembled from quiver shell sizes and the table.
pub fn verify_unweighted(d: u32) -> IdentityReport {
    let t = l_values(d);
    let rows = (0..=d)
        .map(|tk| {
            let mut sum = t.get(tk).clone();
            for (outer, inner, middle) in shells(d, tk) {
                let size = &QLPoly::q_pow(outer as i64) - &QLPoly::q_pow(inner as i64);
                sum = &sum + &(&size * t.get(middle));
            }
            let rhs = if tk % 2 == 0 {
                QLPoly::monomial(1, tk as i64 / 2, d as i64)
            } else {
                QLPoly::zero()
            };
            row(tk, sum, rhs)
        })
        .collect();
    IdentityReport { d, rows }
}

/// The `Ψ`-weighted sum at `q = p`, with `Ψ` the character of the innermost
/// (one-dimensional) step of the push-out chain, summed element by element.
/// Returns `(computed, specialize(±q^{2k} λ^d))` for each admissible `k`.
pub fn character_sums(d: u32, p: Prime) -> Vec<(String, CycloScalar, CycloScalar)> {
    let t = l_values(d);
    (1..=d)
        .map(|tk| {
            let sh = shells(d, tk);
            let dim = sh.first().map_or(0, |s| s.0);
            // coordinates 0..dim; the innermost subspace is coordinate 0,
            // shell boundaries are the inner dimensions listed in `sh`.
            let mut total = specialize(t.get(tk), p);
            let pp = p.get() as u64;
            for idx in 1..pp.pow(dim as u32) {
                let mut digits = idx;
                let mut coords = Vec::with_capacity(dim);
                for _ in 0..dim {
                    coords.push((digits % pp) as i64);
                    digits /= pp;
                }
                let top = coords.iter().rposition(|&c| c != 0).unwrap() + 1;
                let (_, _, middle) = *sh
                    .iter()
                    .find(|s| s.1 < top && top <= s.0)
                    .expect("every nonzero vector lies in a shell");
                let phase = psi_char(p, coords[0]);
                total = &total + &(&phase * &specialize(t.get(middle), p));
            }
            (k_label(tk), total, specialize(&weighted_target(tk, d), p))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DictionaryEntry {
    pub class: Multisegment,
    pub operator: HeckeGenerator,
    pub eigenvalue: QLPoly,
}

/// The three torsion sheaves of degree `(1, 1)` in rank two and the Hecke
/// operators they correspond to.
///
/// Signs follow the operators, so the split class gets `-λ`. Reading the
/// sign instead as `(-1)^{codim}` times the Frobenius trace depends on how
/// codimension is counted for that class; the table does not pick one.
pub fn sheaf_operator_table() -> Vec<DictionaryEntry> {
    let s1 = HeckeGenerator::SimpleRefl { i: 1 };
    let t2 = HeckeGenerator::TLeq { i: 2 };
    let lam = QLPoly::lambda();
    vec![
        DictionaryEntry {
            class: Multisegment::new(vec![Segment::new(0, 2)]),
            operator: HeckeGenerator::word(vec![s1.clone(), t2.clone()]),
            eigenvalue: lam.clone(),
        },
        DictionaryEntry {
            class: Multisegment::new(vec![Segment::new(1, 2)]),
            operator: HeckeGenerator::word(vec![t2.clone(), s1]),
            eigenvalue: lam.clone(),
        },
        DictionaryEntry {
            class: Multisegment::new(vec![Segment::new(0, 1), Segment::new(1, 1)]),
            operator: HeckeGenerator::word(vec![t2]),
            eigenvalue: -&lam,
        },
    ]
}

/// Checks the table against the class enumeration and the operator eigenvalues.
pub fn verify_dictionary() -> Result<(), String> {
    let table = sheaf_operator_table();
    let mut classes: Vec<Multisegment> = table.iter().map(|e| e.class.clone()).collect();
    classes.sort();
    if classes != enumerate_classes(&[1, 1], 2) {
        return Err("table does not list the degree (1, 1) classes".into());
    }
    for e in &table {
        let ev = expected_eigenvalue(&e.operator);
        if ev != e.eigenvalue {
            return Err(format!("{}: table says {}, operator gives {ev}", e.class, e.eigenvalue));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(d: i64) -> QLPoly {
        QLPoly::lambda_pow(d)
    }

    #[test]
    fn small_tables() {
        let t = l_values(1);
        assert_eq!(t.get(0), &lam(1));
        assert_eq!(t.get(1), &(&(-&q_minus_one()) * &lam(1)));
        assert_eq!(t.get(2), &lam(1));
        let t = l_values(2);
        assert_eq!(t.get(0), &lam(2));
        let qm1 = q_minus_one();
        let expected = &(&QLPoly::q() + &(&qm1 * &qm1)) * &lam(2);
        assert_eq!(t.get(2), &expected);
    }

    #[test]
    fn difference_rows() {
        let r = verify_lemma54(2);
        assert!(r.passed());
        assert_eq!(r.rows[0].rhs, QLPoly::monomial(-1, 1, 2));
        assert_eq!(r.rows[1].rhs, QLPoly::monomial(1, 2, 2));
        assert_eq!(verify_lemma54(1).rows[0].lhs, QLPoly::monomial(-1, 1, 1));
    }

    #[test]
    fn shell_sizes_add_up() {
        for d in 1..=6 {
            for tk in 0..=d {
                let total = if tk % 2 == 0 { tk / 2 } else { (tk + 1) / 2 } as usize;
                let sh = shells(d, tk);
                assert_eq!(sh.first().map_or(0, |s| s.0), total, "d={d} 2k={tk}");
                assert_eq!(sh.last().map_or(0, |s| s.1), 0);
            }
        }
    }

    #[test]
    fn unweighted_examples() {
        let r = verify_unweighted(2);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.rows[2].lhs, QLPoly::monomial(1, 1, 2));
        assert!(r.rows[1].lhs.is_zero());
        assert!(verify_unweighted(1).rows[1].lhs.is_zero());
    }

    #[test]
    fn dictionary_is_consistent() {
        verify_dictionary().unwrap();
    }
}
