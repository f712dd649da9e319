//! Acceptance suite: every criterion runs at its pinned tolerance and prints
//! one line. The process exits with status 1 if any criterion fails.

use std::time::Instant;

use centmean::run::{default_threads, sweep};
use centmean_core::cmo::{cmo_norm_upper, cmo_p_norm, DEFAULT_GRID, DEFAULT_R_RANGE};
use centmean_core::commutators::{bracket_commutator, commutator_mean, companion_commutator_mean, CommutatorParams};
use centmean_core::constants::{c0, c1, c2, shell_series, DEFAULT_SERIES_TOL};
use centmean_core::dyadic::{decompose_i, shell_h, shell_inequalities, triple_power_bound, weight_bound};
use centmean_core::harness::{
    Grid, HarnessConfig, InequalityReport, Theorem, Verdict, DEFAULT_COMMUTATOR_PROFILES, DEFAULT_SYMBOLS,
};
use centmean_core::means::{mean, OuterParams};
use centmean_core::profiles::{parse_label, power_profile, product_profile};
use centmean_core::{MeanParams, QuadratureSpec, RadialProfile, Side};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into() }
    }
}

fn profile(label: &str) -> RadialProfile {
    parse_label(label).expect("corpus label").profile
}

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect()
}

fn counts(reports: &[InequalityReport]) -> (usize, usize, usize) {
    let c = |v| reports.iter().filter(|r| r.verdict == v).count();
    (c(Verdict::Pass), c(Verdict::Fail), c(Verdict::Degenerate))
}

fn max_ratio(reports: &[InequalityReport]) -> f64 {
    reports
        .iter()
        .filter(|r| r.verdict != Verdict::Degenerate && r.ratio.is_finite())
        .map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn first_failure(reports: &[InequalityReport]) -> String {
    reports
        .iter()
        .find(|r| r.verdict == Verdict::Fail)
        .map(|r| format!("; first failure {:?} ratio {} ({})", r.case, r.ratio, r.diagnostic.as_deref().unwrap_or("")))
        .unwrap_or_default()
}

fn within(limit_secs: f64, start: Instant) -> (bool, String) {
    let secs = start.elapsed().as_secs_f64();
    (secs < limit_secs, format!("{secs:.1}s of {limit_secs}s"))
}

/// Power profiles against `(±n/(±(nα+βr)))^{1/r} R^β`, relative 1e-8, under 10 s.
fn closed_form_means() -> Outcome {
    let start = Instant::now();
    let grid = Grid::default();
    let betas = [-2.0, -1.5, -0.5, 0.0, 0.5, 1.0, 2.5];
    let (mut checked, mut worst, mut bad) = (0usize, 0.0f64, Vec::new());
    for n in 1..=3u32 {
        for r in [-1.0, 0.5, 1.0, 2.0, 3.0] {
            for &alpha in &grid.alpha {
                for beta in betas {
                    let w = n as f64 * alpha + beta * r;
                    if w == 0.0 {
                        continue;
                    }
                    let side = if w > 0.0 { Side::Central } else { Side::Companion };
                    let f = power_profile(beta, 0.0, f64::INFINITY).unwrap().profile;
                    let p = MeanParams::new(n, r, alpha).unwrap();
                    for &radius in &grid.radius {
                        let want = (n as f64 / w.abs()).powf(1.0 / r) * radius.powf(beta);
                        let err = match mean(&f, &p, radius, side, &q()) {
                            Ok(got) => (got - want).abs() / want,
                            Err(_) => f64::INFINITY,
                        };
                        checked += 1;
                        worst = worst.max(err);
                        if !(err <= 1e-8) {
                            bad.push(format!("n={n} r={r} a={alpha} b={beta} R={radius}"));
                        }
                    }
                }
            }
        }
    }
    let (fast, time) = within(10.0, start);
    Outcome::new(
        bad.is_empty() && fast,
        format!("{checked} means, worst relative error {worst:.2e}, {} above 1e-8 {bad:?}, {time}", bad.len()),
    )
}

fn run_grid(theorems: &[Theorem]) -> Vec<InequalityReport> {
    let grid = Grid::default().only(theorems);
    sweep(&grid, HarnessConfig::default(), default_threads()).expect("default grid")
}

/// Pointwise mixed-mean inequality: ≥ 300 cases, ratios ≤ 1 + 1e-6,
/// constant profiles at ratio 1 ± 1e-9, under 2 minutes.
fn theorem1() -> Outcome {
    let start = Instant::now();
    let reports = run_grid(&[Theorem::One]);
    let (pass, fail, degenerate) = counts(&reports);
    let over: Vec<&InequalityReport> = reports.iter().filter(|r| r.ratio.is_finite() && r.ratio > 1.0 + 1e-6).collect();
    let constants: Vec<f64> = reports
        .iter()
        .filter(|r| r.case.f_label.starts_with("const:") && r.ratio.is_finite())
        .map(|r| r.ratio)
        .collect();
    let const_dev = constants.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    let (fast, time) = within(120.0, start);
    Outcome::new(
        reports.len() >= 300 && fail == 0 && over.is_empty() && !constants.is_empty() && const_dev <= 1e-9 && fast,
        format!(
            "{} cases: {pass} pass, {fail} fail, {degenerate} degenerate; max ratio {:.9}; {} constant cases within {const_dev:.1e} of 1; {time}{}",
            reports.len(),
            max_ratio(&reports),
            constants.len(),
            first_failure(&reports)
        ),
    )
}

/// Weighted-norm inequality against its explicit constants, under 2 minutes.
fn theorem2() -> Outcome {
    let start = Instant::now();
    let reports = run_grid(&[Theorem::Two]);
    let (pass, fail, degenerate) = counts(&reports);
    let (fast, time) = within(120.0, start);
    Outcome::new(
        fail == 0 && pass > 0 && fast,
        format!(
            "{} cases: {pass} pass, {fail} fail, {degenerate} degenerate (divergent sides); max ratio {:.6}; {time}{}",
            reports.len(),
            max_ratio(&reports),
            first_failure(&reports)
        ),
    )
}

/// Explicit constants and the shell series.
fn constants() -> Outcome {
    let c1v = c1(1, 2.0, 1.0, 1e-10).unwrap();
    let c2v = c2(1, 2.0, 1.0, 2.0, 1.0, 1e-10).unwrap();
    let s1 = shell_series(1, 2.0, 1.0, DEFAULT_SERIES_TOL).unwrap().value;
    let x: f64 = 1.0 / 16.0;
    let closed = x * (1.0 + x) / (1.0 - x).powi(3);
    let s2 = shell_series(2, 3.0, 2.0, DEFAULT_SERIES_TOL).unwrap().value;
    // c1 and c2 are truncated sums: "exactly" means within the tail tolerance.
    let ok = (c1v - 768.0).abs() <= 1e-10 * 768.0
        && (c2v - 2_359_296.0).abs() <= 2.0 * 1e-10 * 2_359_296.0
        && (s1 - 2.0).abs() <= 1e-12
        && (s2 - closed).abs() <= 1e-12;
    Outcome::new(ok, format!("c1 = {c1v}, c2 = {c2v}, series(1,2,1) = {s1}, series(2,3,2) = {s2} vs {closed}"))
}

/// Commutator inequalities with the CMO upper estimate, under 5 minutes.
fn theorems3_4() -> Outcome {
    let start = Instant::now();
    let reports = run_grid(&[Theorem::Three, Theorem::Four]);
    let (pass, fail, degenerate) = counts(&reports);
    let constant_b: Vec<&InequalityReport> =
        reports.iter().filter(|r| r.case.b_label.as_deref().is_some_and(|b| b.starts_with("const:"))).collect();
    let const_bad = constant_b.iter().filter(|r| !(r.lhs <= 1e-9)).count();
    let (fast, time) = within(300.0, start);
    Outcome::new(
        fail == 0 && const_bad == 0 && !constant_b.is_empty() && fast,
        format!(
            "{} cases: {pass} pass, {fail} fail, {degenerate} degenerate; max ratio {:.3e}; {} constant-symbol cases, {const_bad} with lhs > 1e-9; {time}{}",
            reports.len(),
            max_ratio(&reports),
            constant_b.len(),
            first_failure(&reports)
        ),
    )
}

/// Parameters `(n, r, α)` of the central and companion proof paths.
const PROOF_PARAMS: [(Side, u32, f64, f64); 4] = [
    (Side::Central, 1, 1.0, 2.0),
    (Side::Central, 2, 2.0, 1.5),
    (Side::Companion, 1, 1.0, 0.5),
    (Side::Companion, 2, 2.0, 0.25),
];

/// Shell decomposition: equivalence on a 20-point grid, the chain, the
/// weight bound, 1000 convexity triples and the shell inequality with c0.
fn dyadic_path() -> Outcome {
    let radii = log_grid(0.05, 20.0, 20);
    let mut equiv_worst = 0.0f64;
    let mut violations: Vec<String> = Vec::new();
    let mut evaluated = 0usize;
    for &(side, n, r, alpha) in &PROOF_PARAMS {
        for fl in DEFAULT_COMMUTATOR_PROFILES {
            let f = profile(fl);
            for bl in DEFAULT_SYMBOLS {
                let b = profile(bl);
                let cmo = cmo_norm_upper(&b, n, DEFAULT_R_RANGE, &q()).unwrap().value;
                let cp = CommutatorParams::new(MeanParams::new(n, r, alpha).unwrap(), b).unwrap();
                for &x in &radii {
                    let here = format!("{fl} {bl} {side} n={n} r={r} a={alpha} x={x}");
                    let direct = match side {
                        Side::Central => commutator_mean(&f, &cp, x, &q()),
                        Side::Companion => companion_commutator_mean(&f, &cp, x, &q()),
                    };
                    match (shell_h(x, &f, &cp, side, &q()), direct) {
                        (Ok(h), Ok(d)) => {
                            let (h, d) = (h.value, d.powf(r));
                            let err = if d == 0.0 { h.abs() } else { (h - d).abs() / d };
                            equiv_worst = equiv_worst.max(err);
                            if !(err <= 1e-6) {
                                violations.push(format!("equivalence {here}: {h} vs {d}"));
                            }
                        }
                        (h, d) => violations.push(format!("equivalence {here}: {:?} / {:?}", h.err(), d.err())),
                    }
                    match decompose_i(x, &f, &cp, side, cmo, None, &q()) {
                        Ok(rep) => {
                            violations.extend(rep.violations(1e-9).into_iter().map(|v| format!("chain {here}: {v}")))
                        }
                        Err(e) => violations.push(format!("chain {here}: {e}")),
                    }
                    evaluated += 1;
                }
                let outer = OuterParams::new(r + 1.0, if side == Side::Central { 0.5 } else { 3.0 }).unwrap();
                match shell_inequalities(&f, &cp, &outer, 2.0, side, cmo, 16, &q()) {
                    Ok(rows) => {
                        for row in rows.iter().filter(|row| !row.holds(1e-9)) {
                            violations.push(format!(
                                "shell inequality {fl} {bl} {side} i={}: {} > {}",
                                row.index, row.lhs, row.rhs
                            ));
                        }
                    }
                    Err(e) => violations.push(format!("shell inequality {fl} {bl} {side}: {e}")),
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut weight_checks = 0usize;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=3u32);
        let alpha = rng.gen_range(-3.0..3.0);
        let i = rng.gen_range(-30..30i32);
        let lo = 2f64.powi(i - 1);
        let t = lo + (2f64.powi(i) - lo) * rng.gen_range(f64::EPSILON..=1.0);
        let (l, rr) = weight_bound(n, alpha, i, t);
        weight_checks += 1;
        if !(l <= rr + 1e-12 * rr.abs().max(1.0)) {
            violations.push(format!("weight bound n={n} a={alpha} i={i} t={t}"));
        }
    }
    let mut convexity_checks = 0usize;
    for r in [0.5, 1.0, 2.0, 3.0] {
        for _ in 0..1000 {
            let [a, b, c]: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1e3..1e3));
            let (l, rr) = triple_power_bound(a, b, c, r);
            convexity_checks += 1;
            if !(l <= rr * (1.0 + 1e-12)) {
                violations.push(format!("convexity r={r} ({a},{b},{c})"));
            }
        }
    }
    let c0v = c0(1, 2.0, 1.0, 2.0, DEFAULT_SERIES_TOL).unwrap();
    Outcome::new(
        violations.is_empty(),
        format!(
            "{evaluated} points, worst equivalence error {equiv_worst:.1e}; {weight_checks} weight and {convexity_checks} convexity samples; c0(1,2,1,2) = {c0v}; {} violations {:?}",
            violations.len(),
            violations
        ),
    )
}

/// CMO estimator: indicator oscillation, monotonicity in p, lower ≤ upper.
fn cmo_estimator() -> Outcome {
    let ind = profile("indicator:a=0:b=1");
    let est = cmo_p_norm(&ind, 1.0, 1, DEFAULT_R_RANGE, DEFAULT_GRID, &q()).unwrap();
    let mut ok = (est.value - 0.5).abs() <= 1e-4 && (est.argmax_r - 2.0).abs() <= 1e-3;
    let mut notes = vec![format!("indicator CMO^1 = {} at R = {}", est.value, est.argmax_r)];
    let mut symbols: Vec<&str> = DEFAULT_SYMBOLS.to_vec();
    symbols.push("indicator:a=0:b=1");
    for label in symbols {
        let b = profile(label);
        let upper = cmo_norm_upper(&b, 1, DEFAULT_R_RANGE, &q()).unwrap().value;
        let lows: Vec<f64> = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&p| cmo_p_norm(&b, p, 1, DEFAULT_R_RANGE, DEFAULT_GRID, &q()).unwrap().value)
            .collect();
        let tol = 1e-9;
        let monotone = lows.windows(2).all(|w| w[0] <= w[1] + tol);
        let sandwiched = lows.iter().all(|&l| l <= upper + tol);
        if !(monotone && sandwiched) {
            ok = false;
            notes.push(format!("{label}: {lows:?} upper {upper}"));
        }
    }
    Outcome::new(ok, notes.join("; "))
}

/// `|[M_r, b] f(R)| ≤ M_{r,b}(f)(R) + 1e-9` for r ∈ {1, 2, 3}, every corpus
/// pair and both sides.
fn pointwise_domination() -> Outcome {
    let radii = log_grid(0.05, 20.0, 20);
    let (mut checked, mut failed) = (0usize, 0usize);
    let mut negative_b_only = true;
    // |M_r(bf) - |b(R)| M_r(f)|, the form Minkowski's inequality bounds.
    let mut abs_level_failed = 0usize;
    let mut worst: Option<(f64, String)> = None;
    for side in [Side::Central, Side::Companion] {
        let alpha = if side == Side::Central { 2.0 } else { 0.5 };
        for r in [1.0, 2.0, 3.0] {
            for fl in DEFAULT_COMMUTATOR_PROFILES {
                let f = profile(fl);
                for bl in DEFAULT_SYMBOLS {
                    let b = profile(bl);
                    let cp = CommutatorParams::new(MeanParams::new(1, r, alpha).unwrap(), b.clone()).unwrap();
                    for &radius in &radii {
                        let bracket = bracket_commutator(&f, &cp, radius, &q(), side).unwrap();
                        let m = match side {
                            Side::Central => commutator_mean(&f, &cp, radius, &q()),
                            Side::Companion => companion_commutator_mean(&f, &cp, radius, &q()),
                        }
                        .unwrap();
                        checked += 1;
                        let plain = mean(&f, &cp.base, radius, side, &q()).unwrap();
                        let with_b = mean(&product_profile(&b, &f), &cp.base, radius, side, &q()).unwrap();
                        if !((with_b - b.eval(radius).abs() * plain).abs() - m <= 1e-9) {
                            abs_level_failed += 1;
                        }
                        let excess = bracket - m;
                        if !(excess <= 1e-9) {
                            failed += 1;
                            negative_b_only &= b.eval(radius) < 0.0;
                            if worst.as_ref().is_none_or(|(e, _)| excess > *e) {
                                worst = Some((
                                    excess,
                                    format!(
                                        "{side} r={r} f={fl} b={bl} R={radius:.4}: bracket {bracket:.6e} > {m:.6e}"
                                    ),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    let mut detail = format!("{checked} points, {failed} above the commutator mean");
    if let Some((_, w)) = worst {
        detail.push_str(&format!("; worst {w}"));
        if negative_b_only {
            detail.push_str("; every violation has b(R) < 0");
        }
    }
    detail.push_str(&format!("; with |b(R)| in place of b(R): {abs_level_failed} above"));
    Outcome::new(failed == 0, detail)
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("closed-form power means", closed_form_means),
        ("pointwise mixed-mean inequality", theorem1),
        ("weighted-norm inequality", theorem2),
        ("explicit constants", constants),
        ("commutator inequalities", theorems3_4),
        ("dyadic proof path", dyadic_path),
        ("CMO estimator", cmo_estimator),
        ("pointwise domination of the bracket", pointwise_domination),
    ];
    // Numeric arguments select criteria; anything else is ignored.
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(k + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let mark = if out.ok { "PASS" } else { "FAIL" };
        println!("criterion {} {mark} {name} [{secs:.1}s]: {}", k + 1, out.detail);
        failed += usize::from(!out.ok);
    }
    println!("acceptance: {} of {ran} criteria pass", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
