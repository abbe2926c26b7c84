#![allow(dead_code)]

use parahecke::decompose::Cell;
use parahecke::matrix::SeriesMatrix;
use parahecke::perm::Permutation;
use parahecke::scalars::Prime;
use parahecke::series::TruncatedSeries;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

/// Exact Laurent polynomial with exponents in `[lo, hi]`.
pub fn series<R: Rng>(rng: &mut R, p: Prime, lo: i64, hi: i64) -> TruncatedSeries {
    let mut terms = Vec::new();
    for e in lo..=hi {
        if rng.gen_bool(0.5) {
            terms.push((e, rng.gen_range(0..p.get()) as i64));
        }
    }
    TruncatedSeries::from_coeffs(p, terms, None)
}

pub fn unit<R: Rng>(rng: &mut R, p: Prime) -> TruncatedSeries {
    let lead = TruncatedSeries::monomial(p, rng.gen_range(1..p.get()) as i64, 0);
    &lead + &series(rng, p, 1, 2)
}

/// Unipotent upper triangular with entries supported in `[lo, 2]`.
pub fn unipotent<R: Rng>(rng: &mut R, p: Prime, n: usize, lo: i64) -> SeriesMatrix {
    let mut u = SeriesMatrix::identity(p, n);
    for i in 0..n {
        for j in i + 1..n {
            u.set(i, j, series(rng, p, lo, 2));
        }
    }
    u
}

/// Random element of the Iwahori subgroup.
pub fn iwahori<R: Rng>(rng: &mut R, p: Prime, n: usize) -> SeriesMatrix {
    SeriesMatrix::from_fn(p, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => unit(rng, p),
        std::cmp::Ordering::Less => series(rng, p, 0, 2),
        std::cmp::Ordering::Greater => series(rng, p, 1, 3),
    })
}

pub fn permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    Permutation::all(n).choose(rng).unwrap().clone()
}

pub fn cell<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Cell {
    let d = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
    Cell::new(d, permutation(rng, n)).unwrap()
}

/// `u · diag(π^d) σ · k` for a random cell, with the pieces.
pub fn from_cell<R: Rng>(rng: &mut R, p: Prime, c: &Cell) -> (SeriesMatrix, SeriesMatrix, SeriesMatrix) {
    let n = c.n();
    let u = unipotent(rng, p, n, -2);
    let k = iwahori(rng, p, n);
    let g = SeriesMatrix::product([&u, &c.matrix(p), &k]).unwrap();
    (u, g, k)
}

/// Random matrix with exact entries supported in `[-2, 2]`.
pub fn matrix<R: Rng>(rng: &mut R, p: Prime, n: usize) -> SeriesMatrix {
    SeriesMatrix::from_fn(p, n, |_, _| series(rng, p, -2, 2))
}
