//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use parahecke::decompose::{decompose, Cell};
use parahecke::hecke::{expected_eigenvalue, validate_reps, verify_eigen, HeckeGenerator};
use parahecke::matrix::SeriesMatrix;
use parahecke::perm::Permutation;
use parahecke::quiver::bundle::{predicted_dims_vs_bundle, predicted_for_torsion, FlagDegrees};
use parahecke::quiver::decompose::{decompose as split, verify_certificate};
use parahecke::quiver::homext::{euler_form, ext1_dim, hom_dim, isomorphic_brute_force};
use parahecke::quiver::{enumerate_classes, QuiverRep};
use parahecke::scalars::QLPoly;
use parahecke::series::{SeriesError, Window};
use parahecke::trace::{sheaf_operator_table, verify_dictionary, verify_lemma54, verify_unweighted};
use parahecke::whittaker::{dominance_gap, is_dominant, whittaker_formula, WhittakerContext};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn generators(n: usize) -> Vec<HeckeGenerator> {
    let mut gens: Vec<HeckeGenerator> = (1..n).map(|i| HeckeGenerator::SimpleRefl { i }).collect();
    gens.extend((1..=n).map(|i| HeckeGenerator::TLeq { i }));
    gens.extend(dominant(n, 4).into_iter().map(|d| HeckeGenerator::DiagDominant { d }));
    gens
}

/// Dominant `d` with `d_n = 0` and gap at most `max_gap`, plus the centre.
fn dominant(n: usize, max_gap: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![0]];
    for _ in 1..n {
        out = out
            .into_iter()
            .flat_map(|d| (0..=max_gap).map(move |x| [vec![x], d.clone()].concat()))
            .collect();
    }
    out.retain(|d| is_dominant(d) && dominance_gap(d) <= max_gap);
    out.push(vec![1; n]);
    out
}

fn eigen_suite() -> Check {
    let mut rows = 0;
    for n in [2usize, 3] {
        let mut cells = Cell::all_bounded(n, 2);
        cells.shuffle(&mut ChaCha8Rng::seed_from_u64(n as u64));
        cells.truncate(120);
        for p in [2u32, 3] {
            let ctx = WhittakerContext::new(n, Some(common::prime(p)));
            for g in generators(n) {
                let report = verify_eigen(&g, &cells, &ctx).map_err(|e| format!("{g}: {e}"))?;
                if let Some(row) = report.failures().next() {
                    return Err(format!("n={n} p={p} {g} at {}: {} vs {}", row.cell, row.lhs, row.rhs));
                }
                rows += report.rows.len();
            }
        }
    }
    Ok(format!("{rows} exact eigen checks"))
}

fn gl2_table() -> Check {
    let cell = |d: [i64; 2], s: [usize; 2]| Cell::new(d.to_vec(), Permutation::from_one_line(&s).unwrap()).unwrap();
    for d2 in -2..=2i64 {
        for m in 0..=4i64 {
            let d1 = d2 + m;
            let diag = whittaker_formula(&cell([d1, d2], [1, 2]));
            ensure(diag == QLPoly::monomial(1, d2 - d1, d1 + d2), || format!("diagonal ({d1},{d2}) gave {diag}"))?;
            // the sign is the one forced by the T_s eigenvalue -1
            let anti = whittaker_formula(&cell([d1, d2], [2, 1]));
            ensure(anti == QLPoly::monomial(-1, d2 - d1 - 1, d1 + d2), || {
                format!("antidiagonal ({d1},{d2}) gave {anti}")
            })?;
        }
    }
    let ctx = WhittakerContext::new(2, Some(common::prime(3)));
    let s = HeckeGenerator::SimpleRefl { i: 1 };
    let report = verify_eigen(&s, &Cell::all_bounded(2, 1), &ctx).map_err(|e| e.to_string())?;
    ensure(report.passed(), || "T_s oracle disagrees with the signed table".into())?;
    Ok("diagonal and antidiagonal columns, d1-d2 in 0..=4".into())
}

fn trace_identities() -> Check {
    for d in 1..=8 {
        let w = verify_lemma54(d);
        ensure(w.passed(), || format!("weighted identity fails at d={d}"))?;
        let u = verify_unweighted(d);
        ensure(u.passed(), || format!("unweighted sums fail at d={d}"))?;
    }
    Ok("d = 1..=8".into())
}

fn dictionary() -> Check {
    let classes = enumerate_classes(&[1, 1], 2);
    ensure(classes.len() == 3, || format!("{} classes", classes.len()))?;
    verify_dictionary()?;
    let eigen: Vec<QLPoly> = sheaf_operator_table().iter().map(|e| expected_eigenvalue(&e.operator)).collect();
    let lam = QLPoly::lambda();
    ensure(eigen == vec![lam.clone(), lam.clone(), -&lam], || format!("eigenvalues {eigen:?}"))?;
    let ctx = WhittakerContext::new(2, Some(common::prime(2)));
    for e in sheaf_operator_table() {
        let report = verify_eigen(&e.operator, &Cell::all_bounded(2, 1), &ctx).map_err(|x| x.to_string())?;
        ensure(report.passed(), || format!("{} does not act by {}", e.operator, e.eigenvalue))?;
    }
    Ok("3 classes, eigenvalues λ, λ, -λ".into())
}

fn dim_vectors(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|d| (0..=max_total).map(move |x| [d.clone(), vec![x]].concat()))
            .collect();
    }
    out.retain(|d| (1..=max_total).contains(&d.iter().sum()));
    out
}

fn krull_schmidt() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut round_trips = 0;
    for n in 1..=3 {
        for p in [2, 3] {
            let p = common::prime(p);
            for dims in dim_vectors(n, 4) {
                for ms in enumerate_classes(&dims, n) {
                    let r = ms.build(n, p).random_conjugate(&mut rng);
                    let dec = split(&r).map_err(|e| e.to_string())?;
                    ensure(dec.multisegment == ms, || format!("{ms} came back as {}", dec.multisegment))?;
                    verify_certificate(&r, &dec).map_err(|e| e.to_string())?;
                    round_trips += 1;
                }
            }
        }
    }
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let p = common::prime([2, 3][rng.gen_range(0..2)]);
        let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let r = QuiverRep::random_nilpotent(p, &dims, &mut rng);
        let dec = split(&r).map_err(|e| e.to_string())?;
        verify_certificate(&r, &dec).map_err(|e| e.to_string())?;
    }
    let p = common::prime(2);
    let mut pairs = 0;
    for n in 1..=3 {
        for dims in dim_vectors(n, 3) {
            let classes = enumerate_classes(&dims, n);
            let invariants: BTreeSet<Vec<usize>> =
                classes.iter().map(|ms| ms.build(n, p).rank_invariants()).collect();
            ensure(invariants.len() == classes.len(), || format!("rank data collide at {dims:?}"))?;
            for (a, x) in classes.iter().enumerate() {
                for (b, y) in classes.iter().enumerate() {
                    let rx = x.build(n, p).random_conjugate(&mut rng);
                    let iso = isomorphic_brute_force(&rx, &y.build(n, p)).map_err(|e| e.to_string())?;
                    ensure(iso == (a == b), || format!("{x} vs {y}: brute force says {iso}"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{round_trips} round trips, 100 random reps, {pairs} isomorphism pairs"))
}

fn decomposition_engine() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let w = Window::default();
    for t in 0..200 {
        let n = rng.gen_range(1..=3);
        let p = common::prime([2, 3, 5][rng.gen_range(0..3)]);
        let c = common::cell(&mut rng, n, 2);
        let (_, g, _) = common::from_cell(&mut rng, p, &c);
        let dec = decompose(&g, w).map_err(|e| format!("case {t}: {e}"))?;
        let back = dec.reconstruct().map_err(|e| e.to_string())?;
        ensure(dec.cell == c && back.agrees_with(&g), || format!("case {t}: reconstruction"))?;
        ensure(dec.u.is_unipotent_upper() && dec.k.iwahori_member().unwrap_or(false), || {
            format!("case {t}: factor shapes")
        })?;
        let u2 = common::unipotent(&mut rng, p, n, -2);
        let k2 = common::iwahori(&mut rng, p, n);
        let g2 = SeriesMatrix::product([&u2, &g, &k2]).map_err(|e| e.to_string())?;
        let cell2 = decompose(&g2, w).map_err(|e| format!("case {t}: {e}"))?.cell;
        ensure(cell2 == c, || format!("case {t}: {c} moved to {cell2}"))?;

        let m = common::matrix(&mut rng, p, n);
        match decompose(&m, w) {
            Err(SeriesError::NotInvertible) => {}
            Err(e) => return Err(format!("case {t}: {e}")),
            Ok(dec) => {
                let back = dec.reconstruct().map_err(|e| e.to_string())?;
                ensure(back.agrees_with(&m), || format!("case {t}: random matrix"))?;
            }
        }
    }
    let mut families = 0;
    for n in 1..=3 {
        for p in [2u32, 3] {
            let ctx = WhittakerContext::new(n, Some(common::prime(p)));
            let mut gens = generators(n);
            if n >= 2 {
                gens.push(HeckeGenerator::word(vec![
                    HeckeGenerator::SimpleRefl { i: 1 },
                    HeckeGenerator::TLeq { i: n },
                ]));
            }
            for g in gens {
                let rep = validate_reps(&g, &ctx).map_err(|e| e.to_string())?;
                ensure(rep.passed(), || format!("n={n} p={p} {g}: {:?}", rep.failures))?;
                families += 1;
            }
        }
    }
    Ok(format!("200 cases, {families} representative sets"))
}

fn bundle_arithmetic() -> Check {
    let mut grid = 0;
    for n in 1..=4usize {
        for rank in 0..=3i64 {
            for base in -2..=2i64 {
                for steps in 0..(rank + 1).pow(n as u32 - 1) {
                    let mut degrees = vec![base];
                    let mut s = steps;
                    for _ in 1..n {
                        degrees.push(degrees.last().unwrap() + s % (rank + 1));
                        s /= rank + 1;
                    }
                    let Ok(flag) = FlagDegrees::new(rank, degrees.clone()) else { continue };
                    let at = BTreeMap::from([("p".to_string(), flag.clone())]);
                    for d in 0..=3 {
                        let got = predicted_for_torsion(&vec![d; n], "p", &at)?;
                        ensure(got == (d as i64 * rank, d as i64 * rank), || {
                            format!("constant degree {d} on {degrees:?} gave {got:?}")
                        })?;
                    }
                    for i in 0..n {
                        let got = predicted_dims_vs_bundle((i, "p"), &at)?;
                        let i = i as i64;
                        let want = (flag.deg(i) - flag.deg(i - 1), flag.deg(i + 1) - flag.deg(i));
                        ensure(got == want, || format!("index {i} on {degrees:?} gave {got:?}"))?;
                    }
                    grid += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let p = common::prime([2, 3, 5][rng.gen_range(0..3)]);
        let dx: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let dy: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let x = QuiverRep::random_nilpotent(p, &dx, &mut rng);
        let y = QuiverRep::random_nilpotent(p, &dy, &mut rng);
        let chi = hom_dim(&x, &y).map_err(|e| e.to_string())? as i64 - ext1_dim(&x, &y).map_err(|e| e.to_string())? as i64;
        ensure(chi == euler_form(&dx, &dy), || format!("{dx:?} vs {dy:?}: {chi}"))?;
    }
    Ok(format!("{grid} flag degree vectors, 100 Euler pairs"))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Check, u64); 7] = [
        (1, "eigenvalue suite", eigen_suite, 60),
        (2, "GL_2 table", gl2_table, 1),
        (3, "trace recursion", trace_identities, 1),
        (4, "degree (1,1) dictionary", dictionary, 1),
        (5, "Krull-Schmidt suite", krull_schmidt, 120),
        (6, "decomposition engine", decomposition_engine, 60),
        (7, "bundle arithmetic", bundle_arithmetic, 5),
    ];
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let slow = took > Duration::from_secs(limit);
        let verdict = match (&result, slow) {
            (Ok(_), false) => "PASS",
            _ => "FAIL",
        };
        let detail = match &result {
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        println!("criterion {id} {verdict}: {name}: {detail} ({:.2}s, limit {limit}s)", took.as_secs_f64());
        if verdict == "FAIL" {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
