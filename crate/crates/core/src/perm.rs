//! Permutations of `{1..n}` in one-line notation.
//!
//! Internally 0-based; the public one-line form is 1-based. The matrix of
//! `σ` has `(σ)_{i,j} = 1` iff `i = σ(j)`, so matrices multiply like
//! composition.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// The adjacent transposition `s_i` swapping `i` and `i+1` (1-based `i`).
    pub fn simple(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "s_{i} out of range for n = {n}");
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i - 1, i);
        Permutation { images }
    }

    /// From a 1-based image sequence.
    pub fn from_one_line(line: &[usize]) -> Result<Self, String> {
        let n = line.len();
        let mut seen = vec![false; n];
        let mut images = Vec::with_capacity(n);
        for &x in line {
            if x == 0 || x > n || seen[x - 1] {
                return Err(format!("{line:?} is not a permutation of 1..{n}"));
            }
            seen[x - 1] = true;
            images.push(x - 1);
        }
        Ok(Permutation { images })
    }

    /// 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self, String> {
        let line: Vec<usize> = images.iter().map(|x| x + 1).collect();
        Self::from_one_line(&line)
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `σ(j)`, 0-based.
    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.n()];
        for (j, &x) in self.images.iter().enumerate() {
            images[x] = j;
        }
        Permutation { images }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    /// `#{i < j : σ(i) > σ(j)}`.
    pub fn inv_count(&self) -> usize {
        let s = &self.images;
        (0..s.len())
            .flat_map(|i| (i + 1..s.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| s[i] > s[j])
            .count()
    }

    pub fn sign(&self) -> i64 {
        if self.inv_count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Indices `[i1, …, ik]` (1-based) with `σ = s_{i1} ∘ … ∘ s_{ik}` and
    /// `k = inv_count`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.images.clone();
        let mut word = Vec::new();
        loop {
            match (0..w.len().saturating_sub(1)).find(|&j| w[j] > w[j + 1]) {
                Some(j) => {
                    w.swap(j, j + 1);
                    word.push(j + 1);
                }
                None => break,
            }
        }
        word.reverse();
        word
    }

    /// All permutations of `n` letters in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            let n = used.len();
            if prefix.len() == n {
                out.push(Permutation {
                    images: prefix.clone(),
                });
                return;
            }
            for x in 0..n {
                if !used[x] {
                    used[x] = true;
                    prefix.push(x);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[x] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = String;
    fn try_from(v: Vec<usize>) -> Result<Self, String> {
        Permutation::from_one_line(&v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.one_line()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}
