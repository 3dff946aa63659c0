//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any fail.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use algebroid::combinatorics::{bound_check, enumerate_monomials, find_stable_s, monomial_count};
use algebroid::continuation::{loop_permutation, monodromy};
use algebroid::local::pole_divisor;
use algebroid::mapping::{map_arith, map_derivative, map_invert, map_negate, pushforward, reciprocal_shift, MapOp};
use algebroid::nevanlinna::{characteristic, counting, RadiusGrid};
use algebroid::polyalg::{resultant_param, resultant_w, BiPolynomial, ParamPolynomial};
use algebroid::verify::{check_lemma_3_1, check_lemma_3_3, check_smt, check_thm_2_5, wronskian_numeric};
use algebroid::{BiPoly, Equation, Map, Poly, Target, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn eq(coeffs: &[&[f64]]) -> Equation {
    Equation::from_real(coeffs).unwrap()
}

fn sqrt_z() -> Equation {
    eq(&[&[0.0, -1.0], &[], &[1.0]])
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Duration, limit: f64) -> Result<(), String> {
    ensure(t.as_secs_f64() < limit, format!("took {:.2}s, limit {limit}s", t.as_secs_f64()))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn elimination() -> Outcome {
    let start = Instant::now();
    let p = BiPoly::new(vec![Poly::from_real(&[0.0, -1.0]), Poly::zero(), Poly::one()]);
    let r1 = resultant_w(&p, &p.partial_w()).map_err(err)?;
    let d1 = r1.max_diff(&Poly::from_real(&[0.0, -4.0]));
    // 2W·X − 1 with coefficients in (z, X)
    let q = ParamPolynomial::new(vec![
        BiPolynomial::constant(c(-1.0, 0.0)),
        BiPolynomial::new(vec![Poly::zero(), Poly::from_real(&[2.0])]),
    ]);
    let r2 = resultant_param(&ParamPolynomial::from_zw(&p), &q);
    let want = BiPolynomial::new(vec![Poly::one(), Poly::zero(), Poly::from_real(&[0.0, -4.0])]);
    let d2 = (&r2 - &want).max_abs();
    ensure(d1 < 1e-12 && d2 < 1e-12, format!("residuals {d1:e}, {d2:e}"))?;
    within(start.elapsed(), 1.0)?;
    Ok(format!("residuals {d1:.1e}, {d2:.1e}"))
}

fn mapping_algebra() -> Outcome {
    let start = Instant::now();
    let inv = map_invert(&sqrt_z()).map_err(err)?.equation().ok_or("inverse is infinite")?;
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let z = C64::from_polar(0.5 + 0.3 * k as f64, 0.7 * k as f64 + 0.2);
        let s = z.sqrt();
        let roots = inv.finite_roots_at(z).map_err(err)?;
        for want in [1.0 / s, -1.0 / s] {
            worst = worst.max(roots.iter().map(|w| (w - want).norm()).fold(f64::INFINITY, f64::min));
        }
    }
    ensure(worst < 1e-9, format!("inverse branch error {worst:e}"))?;
    let deriv = map_derivative(&sqrt_z()).map_err(err)?;
    ensure(deriv.is_identical(&eq(&[&[1.0], &[], &[0.0, -4.0]])).identical, "derivative is not 1 − 4zX²")?;
    let neg = map_negate(&eq(&[&[0.0, -1.0], &[], &[], &[1.0]]));
    ensure(neg.is_identical(&eq(&[&[0.0, 1.0], &[], &[], &[1.0]])).identical, "negation is not W³ + z")?;
    within(start.elapsed(), 1.0)?;
    Ok(format!("inverse branch error {worst:.1e}"))
}

fn sqrt_characteristic() -> Outcome {
    let start = Instant::now();
    let inv = pushforward(&map_arith(MapOp::Div, &Map::constant(c(1.0, 0.0)), &Map::w()).map_err(err)?, &sqrt_z())
        .map_err(err)?;
    let poles = pole_divisor(&inv).map_err(err)?;
    let (mut dt, mut dn) = (0.0f64, 0.0f64);
    for r in [2.0f64, 4.0, 8.0, 16.0] {
        dt = dt.max((characteristic(&sqrt_z(), r).map_err(err)? - 0.5 * r.ln()).abs());
        dn = dn.max((counting(&poles, r, inv.v()).map_err(err)? - 0.5 * r.ln()).abs());
    }
    ensure(dt < 1e-4, format!("T error {dt:e}"))?;
    ensure(dn < 1e-12, format!("N(r, 1/W) error {dn:e}"))?;
    within(start.elapsed(), 10.0)?;
    Ok(format!("max |T − ½log r| = {dt:.1e}, max |N − ½log r| = {dn:.1e}"))
}

fn first_main_theorem() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [0.0, 1.0] {
        let e = pushforward(&reciprocal_shift(&Map::constant(c(a, 0.0))).map_err(err)?, &sqrt_z()).map_err(err)?;
        for r in [4.0, 16.0, 64.0, 100.0] {
            worst = worst.max((characteristic(&e, r).map_err(err)? - characteristic(&sqrt_z(), r).map_err(err)?).abs());
        }
    }
    ensure(worst <= 1.0, format!("difference {worst}"))?;
    Ok(format!("max |T(1/(W−a)) − T(W)| = {worst:.4}"))
}

fn sum_product_bounds() -> Outcome {
    let grid = RadiusGrid::geometric(4.0, 64.0, 10).map_err(err)?;
    let one_over_w = map_arith(MapOp::Div, &Map::constant(c(1.0, 0.0)), &Map::w()).map_err(err)?;
    let cases = [
        ("√z, 1/w", sqrt_z(), one_over_w),
        ("z, 3", eq(&[&[0.0, -1.0], &[1.0]]), Map::constant(c(3.0, 0.0))),
        ("√z, w", sqrt_z(), Map::w()),
    ];
    let mut min_slack = f64::INFINITY;
    for (name, e, h) in cases {
        let report = check_thm_2_5(&e, &h, &grid).map_err(err)?;
        ensure(report.verdict.passed(), format!("{name} failed"))?;
        min_slack = min_slack.min(report.rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min));
    }
    Ok(format!("3 pairs × 10 radii, min slack {min_slack:.3e}"))
}

fn wronskian_scaling() -> Outcome {
    let z = Map::z();
    let z2 = Map::from_z(Poly::from_real(&[0.0, 0.0, 1.0]));
    let one = Map::constant(c(1.0, 0.0));
    let zp1 = Map::from_z(Poly::from_real(&[1.0, 1.0]));
    let lin = eq(&[&[0.0, -1.0], &[1.0]]);
    let cases: Vec<(&str, Vec<Map>, Map, Equation)> = vec![
        ("k=2 v=1", vec![one.clone(), z.clone()], z.clone(), lin.clone()),
        ("k=3 v=1", vec![Map::w(), z2.clone(), one.clone()], zp1.clone(), lin),
        ("k=2 v=2", vec![Map::w(), z.clone()], zp1.clone(), sqrt_z()),
        ("k=3 v=2", vec![one.clone(), z.clone(), z2.clone()], zp1.clone(), sqrt_z()),
    ];
    let mut worst: f64 = 0.0;
    for (i, (name, fs, g, e)) in cases.into_iter().enumerate() {
        let report = check_lemma_3_3(&fs, &g, &e, 100, 1000 + i as u64).map_err(err)?;
        ensure(report.rows.len() == 100 && report.verdict.passed(), format!("{name} failed"))?;
        worst = worst.max(report.rows.iter().map(|r| r.lhs).fold(0.0, f64::max));
    }
    // alternating and multilinear
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let e = sqrt_z();
    let fs = [Map::w(), z.clone(), z2.clone()];
    for _ in 0..20 {
        let z0 = c(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5));
        let s = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let w = |f: &[Map]| wronskian_numeric(f, z0, &e, 0).map_err(err);
        let base = w(&fs)?;
        let swapped = w(&[fs[2].clone(), fs[1].clone(), fs[0].clone()])?;
        ensure((base + swapped).norm() < 1e-9 * (1.0 + base.norm()), "not alternating")?;
        let combo = map_arith(MapOp::Add, &map_arith(MapOp::Mul, &Map::constant(s), &fs[0]).map_err(err)?, &one)
            .map_err(err)?;
        let lhs = w(&[combo, fs[1].clone(), fs[2].clone()])?;
        let rhs = s * base + w(&[one.clone(), fs[1].clone(), fs[2].clone()])?;
        ensure((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()), "not multilinear")?;
    }
    Ok(format!("4 cases × 100 points, max relative error {worst:.1e}"))
}

fn monomial_combinatorics() -> Outcome {
    for q in 1..=5 {
        for s in 1..=6 {
            let n = enumerate_monomials(q, s + 1).len() as u64;
            ensure(n == monomial_count(q, s + 1).map_err(err)?, format!("count mismatch at q={q} s={s}"))?;
        }
    }
    for q in 1..=6 {
        for s in 1..=10 {
            ensure(bound_check(q, s).map_err(err)?, format!("bound fails at q={q} s={s}"))?;
        }
    }
    ensure(find_stable_s(3, 0.5).map_err(err)? == 4, "find_stable_s(3, 0.5) ≠ 4")?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let q = rng.random_range(1..10usize);
        let eps: f64 = rng.random_range(0.01..2.0);
        let s = find_stable_s(q, eps).map_err(err)?;
        let threshold = (q as f64 - 1.0 - eps) / eps;
        let closed = if threshold < 1.0 { 1 } else { threshold.floor() as usize + 1 };
        ensure(s == closed, format!("q={q} ε={eps}: {s} vs {closed}"))?;
    }
    Ok("enumeration, bound and 20 random thresholds agree".into())
}

fn monodromy_cycles() -> Outcome {
    let mut times = Vec::new();
    let t = Instant::now();
    let m = monodromy(&sqrt_z(), c(0.0, 0.0), 1.0).map_err(err)?;
    ensure(m.cycle_lengths() == vec![2], format!("√z cycles {:?}", m.cycles))?;
    times.push(t.elapsed());
    let t = Instant::now();
    let m = monodromy(&eq(&[&[0.0, -1.0], &[], &[], &[1.0]]), c(0.0, 0.0), 1.0).map_err(err)?;
    ensure(m.cycle_lengths() == vec![3], format!("∛z cycles {:?}", m.cycles))?;
    times.push(t.elapsed());
    let t = Instant::now();
    ensure(loop_permutation(&sqrt_z(), c(3.0, 0.0), 1.0).map_err(err)?.is_identity(), "regular loop permutes")?;
    times.push(t.elapsed());
    for d in &times {
        within(*d, 5.0)?;
    }
    Ok(format!("slowest {:.3}s", times.iter().max().unwrap().as_secs_f64()))
}

fn constants(cs: &[f64]) -> Vec<Target> {
    cs.iter().map(|&x| Target::constant(c(x, 0.0))).collect()
}

fn second_main_theorem() -> Outcome {
    let grid = RadiusGrid::new(vec![16.0, 64.0, 256.0]).map_err(err)?;
    let report = check_smt(&sqrt_z(), &constants(&[0.0, 1.0, -1.0]), 0.1, &grid).map_err(err)?;
    let mut margin = f64::INFINITY;
    for row in report.rows.iter().filter(|r| r.label == "with-ramification") {
        ensure(row.slack >= 0.5 * row.r.ln(), format!("slack {} at r = {}", row.slack, row.r))?;
        margin = margin.min(row.slack - 0.5 * row.r.ln());
    }
    let reduced: Vec<_> = report.rows.iter().filter(|r| r.label == "without-ramification").collect();
    ensure(reduced.len() == 3, "reduced form rows missing")?;
    ensure(reduced.iter().all(|r| r.lhs.is_finite() && r.rhs.is_finite() && r.lhs < 0.0), "reduced form not computed")?;
    ensure(report.verdict.passed(), "verdict fail")?;
    Ok(format!("min slack − ½log r = {margin:.3}; reduced form rows: {}", reduced.len()))
}

fn proximity_split() -> Outcome {
    let grid = RadiusGrid::geometric(4.0, 64.0, 10).map_err(err)?;
    let report = check_lemma_3_1(&sqrt_z(), &constants(&[1.0, -1.0]), &grid).map_err(err)?;
    let model = report.slack_model.ok_or("no slack model")?;
    ensure(model.c1 <= 20.0 && report.verdict.passed(), format!("C1 = {}", model.c1))?;
    let single = check_lemma_3_1(&sqrt_z(), &constants(&[1.0]), &grid).map_err(err)?;
    ensure(single.rows.iter().all(|r| r.lhs == 0.0), "q = 1 margin is not zero")?;
    Ok(format!("C0 = {:.4}, C1 = {:.4}", model.c0, model.c1))
}

fn cli_contract() -> Outcome {
    let dir = std::env::temp_dir().join(format!("algebroid-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let spec = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sqrt_z.toml");
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_algebroid")).args(args).current_dir(&dir).output();
    let text = std::fs::read_to_string(&spec).map_err(err)?;
    std::fs::write(dir.join("bad.toml"), text.replace("version = 1", "version = [1")).map_err(err)?;
    std::fs::write(dir.join("false.toml"), text.replace("epsilon = 0.1", "epsilon = -100.0")).map_err(err)?;
    let spec = spec.to_str().unwrap();
    let codes = [
        run(&["verify", "smt", "bad.toml"]).map_err(err)?.status.code(),
        run(&["verify", "smt", spec]).map_err(err)?.status.code(),
        run(&["verify", "smt", "false.toml"]).map_err(err)?.status.code(),
    ];
    ensure(codes == [Some(1), Some(0), Some(2)], format!("exit codes {codes:?}"))?;
    let a = run(&["--seed", "3", "characteristic", spec]).map_err(err)?;
    let b = run(&["--seed", "3", "characteristic", spec]).map_err(err)?;
    ensure(a.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout, "characteristic CSV differs")?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok("exit codes 1/0/2; CSV identical across runs".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("exact elimination", elimination),
        ("mapping algebra", mapping_algebra),
        ("characteristic of √z", sqrt_characteristic),
        ("first main theorem sanity", first_main_theorem),
        ("sum and product bounds", sum_product_bounds),
        ("Wronskian scaling", wronskian_scaling),
        ("monomial combinatorics", monomial_combinatorics),
        ("monodromy", monodromy_cycles),
        ("second main theorem", second_main_theorem),
        ("proximity split slack model", proximity_split),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({why}; {secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
