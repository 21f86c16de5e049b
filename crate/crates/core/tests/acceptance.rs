//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//!
//! Tolerances are pinned here and do not read the environment.

mod common;

use std::fs;
use std::time::{Duration, Instant};

use common::{del_iter, del_super, dist, super_power_apply, tri_iter, tri_super, Dense, GaussInt};
use isosym::classify::{minimal_order, OrderKind};
use isosym::drazin::core_nilpotent;
use isosym::elementary::{compose_mn, compose_scale, delta_power, delta_scale, triangle_power, triangle_scale, ComposeOrder, Pair};
use isosym::generators::{mr_symmetric_instance, theorem1_instance, theorem2_instance, theorem3_instance, GenOptions, Theorem3Options};
use isosym::harness::{corollaries, exact, lemmas, pair_residual, theorem1, theorem2, theorem3, Verdict};
use isosym::rng::Rng;
use isosym::tolerance::STRICT_FACTOR;
use isosym::{CMatrix, ToleranceContext};

/// Default zero test: `‖R‖ ≤ 1e-12 + 1e-9·scale`.
const TOL: ToleranceContext = ToleranceContext { atol: 1e-12, rtol: 1e-9 };
/// Absolute tolerance on the Jordan-block entries.
const JORDAN_ABS: f64 = 1e-12;
/// Relative agreement between representations.
const CROSS_RTOL: f64 = 1e-10;
/// Relative agreement of the two expansion sides.
const EXPANSION_RTOL: f64 = 1e-10;
/// Relative agreement between exact and floating evaluation.
const EXACT_RTOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn jordan2() -> CMatrix {
    CMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0])
}

fn gaussian(rng: &mut Rng, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, |_, _| rng.complex_gaussian())
}

fn jordan_benchmarks() -> Outcome {
    let a = jordan2();
    let b = a.adjoint();
    let i = CMatrix::identity(2);
    let iso = minimal_order(OrderKind::Triangle, &b, &a, &i, 10, &TOL).unwrap().order;
    let sym = minimal_order(OrderKind::Delta, &b, &a, &i, 10, &TOL).unwrap().order;
    let d2 = triangle_power(&b, &a, &i, 2).unwrap();
    let s2 = delta_power(&b, &a, &i, 2).unwrap();
    let want_d2 = CMatrix::from_real(2, &[0.0, 0.0, 0.0, 2.0]);
    let want_s2 = CMatrix::from_real(2, &[0.0, 0.0, 0.0, -2.0]);
    let err_d2 = (&d2 - &want_d2).max_abs();
    let err_s2 = (&s2 - &want_s2).max_abs();
    let (db, da, di) = (Dense::from_cm(&b), Dense::from_cm(&a), Dense::identity(2));
    let oracle_err = dist(&d2, &tri_iter(&db, &da, &di, 2)).max(dist(&s2, &del_iter(&db, &da, &di, 2)));
    let p = Pair::new(&b, &a);
    let iso11 = compose_mn(p, p, &i, 1, 1, ComposeOrder::TriangleFirstOutside).unwrap().fro_norm();
    let oracle11 = tri_iter(&db, &da, &del_iter(&db, &da, &di, 1), 1).fro();
    let pass = iso == Some(3)
        && sym == Some(3)
        && err_d2 <= JORDAN_ABS
        && err_s2 <= JORDAN_ABS
        && oracle_err <= JORDAN_ABS
        && iso11 <= JORDAN_ABS
        && oracle11 <= JORDAN_ABS;
    outcome(
        pass,
        format!("isometry {iso:?}, symmetry {sym:?}, Δ² err {err_d2:.1e}, δ² err {err_s2:.1e}, (1,1) residual {iso11:.1e}"),
    )
}

fn mr_family() -> Outcome {
    let mut cells = 0;
    let mut bad = Vec::new();
    let mut worst_ratio = f64::INFINITY;
    for n in 2..=4 {
        for dim in [n, (n + 2).min(8), 8] {
            for seed in 0..4 {
                cells += 1;
                let (a, k) = match mr_symmetric_instance(seed, dim, n, None) {
                    Ok(v) => v,
                    Err(e) => {
                        bad.push(format!("n={n} dim={dim} seed={seed}: {e}"));
                        continue;
                    }
                };
                let b = a.adjoint();
                let i = CMatrix::identity(dim);
                let p = Pair::new(&b, &a);
                let (db, da, di) = (Dense::from_cm(&b), Dense::from_cm(&a), Dense::identity(dim));
                let top = del_iter(&db, &da, &di, 2 * n - 1).fro();
                let below = del_iter(&db, &da, &di, 2 * n - 2).fro();
                let th_top = TOL.threshold(delta_scale(p, &i, 2 * n - 1).unwrap());
                let th_below = TOL.threshold(delta_scale(p, &i, 2 * n - 2).unwrap());
                let found = minimal_order(OrderKind::Delta, &b, &a, &i, 10, &TOL).unwrap().order;
                worst_ratio = worst_ratio.min(below / th_below);
                if k != 2 * n - 1 || found != Some(2 * n - 1) || top > th_top || below <= STRICT_FACTOR * th_below {
                    bad.push(format!("n={n} dim={dim} seed={seed}: found {found:?}, top {top:.1e}, below {below:.1e}"));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{}/{cells} cells, min residual/threshold at 2n−2 = {worst_ratio:.1e} {}", cells - bad.len(), bad.join("; ")))
}

fn theorem1_suite() -> Outcome {
    let opts = GenOptions::default();
    let (mut passed, mut non_vacuous, mut term_cells, mut term_terms, mut term_fails) = (0, 0, 0, 0, 0);
    let mut bad = Vec::new();
    for seed in 0..100u64 {
        let dim = 2 + (seed as usize % 5);
        let inst = match theorem1_instance(seed, dim, &opts) {
            Ok(i) => i,
            Err(e) => {
                bad.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let terms = seed < 10;
        let rep = theorem1::verify_theorem1(&inst, seed, dim, terms, &TOL);
        if rep.verdict == Verdict::Vacuous {
            bad.push(format!("seed {seed}: vacuous"));
            continue;
        }
        non_vacuous += 1;
        let [(sb1, ta1), (sb2, ta2)] = inst.products();
        let (m, n) = inst.orders.conclusion();
        let scale = compose_scale(Pair::new(&sb1, &ta1), Pair::new(&sb2, &ta2), &inst.x, m, n).unwrap();
        let inner = del_iter(&Dense::from_cm(&sb2), &Dense::from_cm(&ta2), &Dense::from_cm(&inst.x), n);
        let oracle = tri_iter(&Dense::from_cm(&sb1), &Dense::from_cm(&ta1), &inner, m).fro();
        let oracle_ok = oracle <= TOL.threshold(scale);
        if terms {
            term_cells += 1;
            let cases: Vec<_> = rep.conclusions.iter().filter(|c| c.label.starts_with("case ")).collect();
            term_terms += cases.len();
            term_fails += cases.iter().filter(|c| !c.pass).count();
        }
        if rep.verdict == Verdict::Pass && oracle_ok && inst.orders.m().max(inst.orders.n()).max(inst.orders.r()).max(inst.orders.s()) <= 3 {
            passed += 1;
        } else {
            bad.push(format!("seed {seed} dim {dim}: verdict {:?}, oracle residual {oracle:.1e}", rep.verdict));
        }
    }
    let pass = passed == 100 && non_vacuous == 100 && term_cells == 10 && term_terms > 0 && term_fails == 0;
    outcome(
        pass,
        format!("{passed}/{non_vacuous} non-vacuous cells pass; {}/{term_terms} case terms pass on {term_cells} instances {}", term_terms - term_fails, bad.join("; ")),
    )
}

fn theorem2_suite() -> Outcome {
    let opts = GenOptions { max_order: 2, ..GenOptions::default() };
    let (mut passed, mut bad) = (0, Vec::new());
    for seed in 0..100u64 {
        let dim = 2 + (seed as usize % 5);
        let inst = match theorem2_instance(seed, dim, &opts) {
            Ok(i) => i,
            Err(e) => {
                bad.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let rep = theorem2::verify_theorem2(&inst, seed, dim, &TOL);
        let [(b1, a1), (b2, a2)] = inst.perturbed();
        let (m, n) = inst.conclusion();
        let scale = compose_scale(Pair::new(&b1, &a1), Pair::new(&b2, &a2), &inst.x, m, n).unwrap();
        let inner = del_iter(&Dense::from_cm(&b2), &Dense::from_cm(&a2), &Dense::from_cm(&inst.x), n);
        let oracle = tri_iter(&Dense::from_cm(&b1), &Dense::from_cm(&a1), &inner, m).fro();
        let nil = inst.nil;
        let bounds = inst.m <= 2 && inst.n <= 2 && [nil.m1, nil.n1, nil.m2, nil.n2].iter().all(|&k| k <= 3);
        if rep.verdict == Verdict::Pass && oracle <= TOL.threshold(scale) && bounds {
            passed += 1;
        } else {
            bad.push(format!("seed {seed} dim {dim}: verdict {:?}, oracle {oracle:.1e}", rep.verdict));
        }
    }
    let (mut pairs_ok, mut identities) = (true, 0);
    for seed in 0..20u64 {
        let rep = theorem2::verify_expansion(seed, 2 + (seed as usize % 5), 10, 4, EXPANSION_RTOL);
        identities += rep.conclusions.len();
        pairs_ok &= rep.verdict == Verdict::Pass;
    }
    let pass = passed == 100 && pairs_ok && identities == 400;
    outcome(pass, format!("{passed}/100 conclusions pass; expansion identities {identities}/400 on 200 pairs {} {}", if pairs_ok { "pass" } else { "FAIL" }, bad.join("; ")))
}

fn theorem3_suite() -> Outcome {
    let mut rows = Vec::new();
    let (mut proof_pass, mut statement_pass, mut axioms_ok, mut forcing_ok) = (0, 0, 0, 0);
    let mut worst_lift = f64::INFINITY;
    let mut bad = Vec::new();
    for seed in 0..50u64 {
        let dim = 2 + (seed as usize % 7);
        let o = Theorem3Options { strict: dim >= 3 && seed % 2 == 1, ..Theorem3Options::default() };
        let inst = match theorem3_instance(seed, dim, &o) {
            Ok(i) => i,
            Err(e) => {
                bad.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        // Drazin axioms against the test oracle
        let dd = core_nilpotent(&inst.a, &TOL).unwrap();
        let (a, ad) = (Dense::from_cm(&inst.a), Dense::from_cm(&dd.td));
        let scale = inst.a.spectral_norm().max(1.0).powi(inst.p as i32 + 1) * dd.td.spectral_norm().max(1.0).powi(2);
        let ap = (0..inst.p).fold(Dense::identity(dim), |y, _| y.mul(&a));
        let axioms = [
            ad.mul(&a).sub(&a.mul(&ad)).fro(),
            ad.mul(&a).mul(&ad).sub(&ad).fro(),
            ap.mul(&a).mul(&ad).sub(&ap).fro(),
        ];
        let axioms_pass = dd.p == inst.p && axioms.iter().all(|&r| r <= TOL.threshold(scale));
        axioms_ok += axioms_pass as usize;

        let reps = theorem3::verify_theorem3(&inst, seed, dim, &TOL);
        let part_i = &reps[0];
        let proof_ok = part_i.variant == "i" && part_i.verdict == Verdict::Pass;
        proof_pass += proof_ok as usize;
        let statement: Vec<_> = part_i.diagnostics.iter().filter(|d| d.label.contains("_{Ad*,A}(")).collect();
        let statement_ok = statement.iter().all(|d| d.pass);
        statement_pass += statement_ok as usize;

        // corner forcing: lift of the hypothesis residual
        let aa = inst.a.adjoint();
        let p = Pair::new(&aa, &inst.a);
        let (r0, s0) = pair_residual(p, p, &inst.x, inst.m, inst.n).unwrap();
        let e = CMatrix::unit(dim, 0, dd.core_dim);
        let xp = &inst.x + &dd.from_splitting(&e);
        let (r1, _) = pair_residual(p, p, &xp, inst.m, inst.n).unwrap();
        let lift = r1 / r0.max(TOL.threshold(s0));
        worst_lift = worst_lift.min(lift);
        let forcing = theorem3::verify_forcing(&inst, seed, dim, &TOL);
        let forcing_pass = lift >= STRICT_FACTOR && forcing.verdict == Verdict::Pass;
        forcing_ok += forcing_pass as usize;

        if !(axioms_pass && proof_ok && forcing_pass) {
            bad.push(format!("seed {seed} dim {dim}: axioms {axioms_pass}, proof form {proof_ok}, forcing {forcing_pass}"));
        }
        rows.push(serde_json::json!({
            "seed": seed,
            "dim": dim,
            "p": inst.p,
            "strict": inst.strict,
            "proof_form": part_i.conclusions,
            "statement_form": statement,
            "forcing_lift": lift,
        }));
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("thm3_forms.json");
    let _ = fs::write(&path, serde_json::to_string_pretty(&rows).unwrap());
    let pass = rows.len() == 50 && proof_pass == 50 && axioms_ok == 50 && forcing_ok == 50;
    outcome(
        pass,
        format!(
            "Drazin axioms {axioms_ok}/50, proof form {proof_pass}/50, statement form {statement_pass}/50 (logged), min forcing lift {worst_lift:.1e}, per-instance residuals in {} {}",
            path.display(),
            bad.join("; ")
        ),
    )
}

fn cross_representation() -> Outcome {
    let mut rng = Rng::new(0x5eed);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for idx in 0..200 {
        let dim = 1 + idx % 6;
        let [b1, a1, b2, a2, x] = std::array::from_fn(|_| gaussian(&mut rng, dim).scale_real(rng.uniform_in(0.5, 1.5)));
        let m = 1 + rng.below(4);
        let n = 1 + rng.below(4);
        let (p1, p2) = (Pair::new(&b1, &a1), Pair::new(&b2, &a2));
        let [db1, da1, db2, da2, dx] = [&b1, &a1, &b2, &a2, &x].map(Dense::from_cm);

        let direct = triangle_power(&b1, &a1, &x, m).unwrap();
        let s = triangle_scale(p1, &x, m).unwrap();
        worst = worst.max(dist(&direct, &tri_iter(&db1, &da1, &dx, m)) / s);
        worst = worst.max(dist(&direct, &super_power_apply(&tri_super(&db1, &da1), &dx, m)) / s);

        let direct = delta_power(&b2, &a2, &x, n).unwrap();
        let s = delta_scale(p2, &x, n).unwrap();
        worst = worst.max(dist(&direct, &del_iter(&db2, &da2, &dx, n)) / s);
        worst = worst.max(dist(&direct, &super_power_apply(&del_super(&db2, &da2), &dx, n)) / s);

        // Δ outside δ, and δ outside Δ; the double sum needs commuting input
        let s = compose_scale(p1, p2, &x, m, n).unwrap();
        let iter = tri_iter(&db1, &da1, &del_iter(&db2, &da2, &dx, n), m);
        let sup = super_power_apply(&tri_super(&db1, &da1), &super_power_apply(&del_super(&db2, &da2), &dx, n), m);
        let v = compose_mn(p1, p2, &x, m, n, ComposeOrder::TriangleFirstOutside).unwrap();
        worst = worst.max(dist(&v, &iter) / s).max(dist(&v, &sup) / s);
        let iter = del_iter(&db2, &da2, &tri_iter(&db1, &da1, &dx, m), n);
        let sup = super_power_apply(&del_super(&db2, &da2), &super_power_apply(&tri_super(&db1, &da1), &dx, m), n);
        let v = compose_mn(p1, p2, &x, m, n, ComposeOrder::DeltaFirstOutside).unwrap();
        worst = worst.max(dist(&v, &iter) / s).max(dist(&v, &sup) / s);
        count += 1;
    }
    let harness_ok = (0..4u64).all(|seed| lemmas::verify_cross_representation(seed, 2 + seed as usize, 10, 4, CROSS_RTOL).verdict == Verdict::Pass);
    outcome(worst <= CROSS_RTOL && harness_ok && count == 200, format!("{count} instances, worst relative disagreement {worst:.1e}"))
}

fn tensor_jordan() -> Outcome {
    let j = corollaries::jordan_tensor();
    let hyps = corollaries::tensor_iso_hypotheses(&j.s, &j.t, j.n, &TOL).unwrap();
    let hyps_ok = j.n == 3 && hyps.iter().all(|h| h.pass);
    let min_n = corollaries::minimal_tensor_iso_order(&j.s, &j.t, 5, &TOL).unwrap();
    let st = j.s.kron(&j.t).unwrap();
    let sta = st.adjoint();
    let k = 2 * j.n - 1;
    let ii = CMatrix::identity(4);
    let p = Pair::new(&sta, &st);
    let scale = compose_scale(p, p, &ii, k, k).unwrap();
    let (ds, dj) = (Dense::from_cm(&sta), Dense::from_cm(&j.s).kron(&Dense::from_cm(&j.t)));
    let oracle = tri_iter(&ds, &dj, &del_iter(&ds, &dj, &Dense::identity(4), k), k).fro();
    let cell = corollaries::verify_tensor_iso(&j, "cor04-jordan", 0, 2, &TOL);
    let pass = hyps_ok && min_n == Some(3) && oracle <= TOL.threshold(scale) && cell.verdict == Verdict::Pass;
    outcome(pass, format!("{} hypotheses at n = 3 ({}), minimal common order {min_n:?}, order-{k} residual {oracle:.1e} on 4×4", hyps.len(), if hyps_ok { "hold" } else { "FAIL" }))
}

fn exact_spot_check() -> Outcome {
    let mut rng = Rng::new(0xe8ac7);
    let mut worst: f64 = 0.0;
    for idx in 0..20 {
        let dim = 1 + idx % 4;
        let [b1, a1, b2, a2, x]: [GaussInt; 5] = std::array::from_fn(|_| {
            let re: Vec<i64> = (0..dim * dim).map(|_| rng.int_in(-2, 2)).collect();
            let im: Vec<i64> = (0..dim * dim).map(|_| rng.int_in(-2, 2)).collect();
            GaussInt::new(dim, &re, &im)
        });
        let m = 1 + rng.below(3);
        let n = 1 + rng.below(3);
        let [fb1, fa1, fb2, fa2, fx] = [&b1, &a1, &b2, &a2, &x].map(GaussInt::to_cm);
        let rel = |exact: &GaussInt, float: &CMatrix| {
            let e = exact.to_cm();
            (&e - float).fro_norm() / e.fro_norm().max(1.0)
        };
        worst = worst.max(rel(&b1.tri(&a1, &x, m), &triangle_power(&fb1, &fa1, &fx, m).unwrap()));
        worst = worst.max(rel(&b2.del(&a2, &x, n), &delta_power(&fb2, &fa2, &fx, n).unwrap()));
        let (p1, p2) = (Pair::new(&fb1, &fa1), Pair::new(&fb2, &fa2));
        let f = compose_mn(p1, p2, &fx, m, n, ComposeOrder::TriangleFirstOutside).unwrap();
        worst = worst.max(rel(&b1.tri(&a1, &b2.del(&a2, &x, n), m), &f));
        let f = compose_mn(p1, p2, &fx, m, n, ComposeOrder::DeltaFirstOutside).unwrap();
        worst = worst.max(rel(&b2.del(&a2, &b1.tri(&a1, &x, m), n), &f));
    }
    let harness = exact::verify_exact(0, 4, 20, 3);
    let pass = worst <= EXACT_RTOL && harness.verdict == Verdict::Pass;
    outcome(pass, format!("20 instances, worst relative error {worst:.1e}; rational oracle cell {:?}", harness.verdict))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("Jordan-block benchmarks", Duration::from_secs(1), jordan_benchmarks),
        ("self-adjoint plus nilpotent symmetry orders", Duration::from_secs(5), mr_family),
        ("product theorem suite", Duration::from_secs(60), theorem1_suite),
        ("nilpotent perturbation suite", Duration::from_secs(60), theorem2_suite),
        ("Drazin inverse suite", Duration::from_secs(30), theorem3_suite),
        ("cross-representation oracle", Duration::from_secs(30), cross_representation),
        ("Jordan tensor check", Duration::from_secs(5), tensor_jordan),
        ("exact-arithmetic spot check", Duration::from_secs(60), exact_spot_check),
    ];
    let mut failed = 0;
    for (k, (name, limit, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let elapsed = t.elapsed();
        let pass = o.pass && elapsed <= *limit;
        failed += !pass as usize;
        println!(
            "criterion {} {}: {name}: {} [{:.2}s, limit {}s]",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            o.detail.trim_end(),
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {}/8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
