//! Closed-form and brute-force oracles for the public API.

use centmean_core::cmo::{ball_average, cmo_norm_upper, cmo_p_norm};
use centmean_core::commutators::{commutator_mean, companion_commutator_mean, CommutatorParams};
use centmean_core::constants::{c1, c2, shell_series, DEFAULT_SERIES_TOL};
use centmean_core::means::{companion_mean, mean, mixed_mean, weighted_integral, OuterParams};
use centmean_core::profiles::{bounded_oscillator, parse_label, power_profile};
use centmean_core::{MeanParams, QuadratureSpec, Side};

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn power_means_match_closed_form() {
    for n in 1..=3 {
        for r in [-1.0, 0.5, 1.0, 2.0, 3.0] {
            for alpha in [0.25, 0.5, 1.5, 2.0, 3.0] {
                for beta in [-2.0, -0.5, 0.0, 1.0, 2.5] {
                    let p = MeanParams::new(n, r, alpha).unwrap();
                    let f = power_profile(beta, 0.0, f64::INFINITY).unwrap().profile;
                    let w = n as f64 * alpha + beta * r;
                    for radius in [0.3f64, 1.0, 7.0] {
                        if w == 0.0 {
                            continue;
                        }
                        let side = if w > 0.0 { Side::Central } else { Side::Companion };
                        let want = (n as f64 / w.abs()).powf(1.0 / r) * radius.powf(beta);
                        let got = mean(&f, &p, radius, side, &q()).unwrap();
                        assert!(rel(got, want) <= 1e-8, "n={n} r={r} a={alpha} b={beta} R={radius}: {got} vs {want}");
                    }
                }
            }
        }
    }
}

#[test]
fn mean_of_linear_profile() {
    // n ∫_0^1 v^{n α - 1} v^2 dv with n = α = 1, r = 2: (1/3)^{1/2}.
    let f = parse_label("power:beta=1").unwrap().profile;
    let p = MeanParams::new(1, 2.0, 1.0).unwrap();
    let got = mean(&f, &p, 1.0, Side::Central, &q()).unwrap();
    assert!(rel(got, (1.0f64 / 3.0).sqrt()) < 1e-12);
}

#[test]
fn constant_means() {
    for (c, r, alpha) in [(2.0, 1.0, 0.5), (-3.0, 2.0, 1.5), (0.5, -1.0, 3.0)] {
        let f = parse_label(&format!("const:c={c}")).unwrap().profile;
        let p = MeanParams::new(2, r, alpha).unwrap();
        for radius in [0.01, 1.0, 50.0] {
            let got = mean(&f, &p, radius, Side::Central, &q()).unwrap();
            let want = f64::abs(c) * alpha.powf(-1.0 / r);
            assert!(rel(got, want) < 1e-10, "{got} vs {want}");
        }
    }
}

#[test]
fn companion_mean_of_indicator() {
    // M*_1(1_[1,2], α)(1) = n ∫_1^2 v^{nα-1} dv = (2^{nα} - 1)/α.
    let f = parse_label("indicator:a=1:b=2").unwrap().profile;
    let p = MeanParams::new(2, 1.0, -0.5).unwrap();
    let got = companion_mean(&f, &p, 1.0, &q()).unwrap();
    assert!(rel(got, (2f64.powf(-1.0) - 1.0) / -0.5) < 1e-12);
}

#[test]
fn mixed_mean_of_constant_is_product_of_factors() {
    let f = parse_label("const:c=1").unwrap().profile;
    let inner = MeanParams::new(1, 1.0, 2.0).unwrap();
    let outer = OuterParams::new(3.0, 1.5).unwrap();
    let got = mixed_mean(&f, &inner, &outer, 2.0, Side::Central, &q()).unwrap();
    let want = 2f64.powf(-1.0) * 1.5f64.powf(-1.0 / 3.0);
    assert!(rel(got, want) < 1e-9, "{got} vs {want}");
}

#[test]
fn weighted_integral_of_indicator() {
    // n = 1, |B(t)| = 2t: ∫_{-1}^{1} (2|y|)^{γ-1} dy = 2^γ/γ.
    let f = parse_label("indicator:a=0:b=1").unwrap().profile;
    let got = weighted_integral(&f, 2.0, 0.5, 1, &q()).unwrap().value;
    assert!(rel(got, 2f64.sqrt() / 0.5) < 1e-10, "{got}");
}

fn riemann(f: &str, b: &str, r: f64, alpha: f64, radius: f64, lo: f64, hi: f64) -> f64 {
    let f = parse_label(f).unwrap().profile;
    let b = parse_label(b).unwrap().profile;
    let m = 400_000;
    let (a, z) = (lo.ln(), hi.ln());
    let h = (z - a) / m as f64;
    let br = b.eval(radius);
    let mut acc = 0.0;
    for i in 0..m {
        let t = (a + (i as f64 + 0.5) * h).exp();
        acc += t.powf(alpha) * ((b.eval(t) - br) * f.eval(t)).abs().powf(r);
    }
    (acc * h * radius.powf(-alpha)).powf(1.0 / r)
}

#[test]
fn commutators_match_riemann_sums() {
    let b = bounded_oscillator(1.0, 0.0);
    let f = parse_label("indicator:a=0:b=1").unwrap().profile;
    let cp = CommutatorParams::new(MeanParams::new(1, 1.0, 2.0).unwrap(), b.clone()).unwrap();
    let got = commutator_mean(&f, &cp, 1.0, &q()).unwrap();
    let want = riemann("indicator:a=0:b=1", "osc:amp=1:phase=0", 1.0, 2.0, 1.0, 1e-9, 1.0);
    assert!(rel(got, want) < 1e-6, "{got} vs {want}");

    let f = parse_label("indicator:a=1:b=2").unwrap().profile;
    let cp = CommutatorParams::new(MeanParams::new(1, 1.0, 0.5).unwrap(), b).unwrap();
    let got = companion_commutator_mean(&f, &cp, 1.0, &q()).unwrap();
    let want = riemann("indicator:a=1:b=2", "osc:amp=1:phase=0", 1.0, 0.5, 1.0, 1.0, 2.0);
    assert!(rel(got, want) < 1e-6, "{got} vs {want}");
}

#[test]
fn commutator_with_smooth_symbol_at_small_radius() {
    // b(Rv) - b(R) is ~R^4 here; the difference must not be lost to rounding.
    let f = parse_label("indicator:a=0:b=1").unwrap().profile;
    let b = parse_label("smooth:radius=1:k=4").unwrap().profile;
    let cp = CommutatorParams::new(MeanParams::new(1, 1.0, 1.0).unwrap(), b).unwrap();
    let radius = 1e-3;
    let got = commutator_mean(&f, &cp, radius, &q()).unwrap();
    // ∫_0^1 ((Rv)^4... to leading order: R^4 ∫_0^1 (1 - v^4) dv = 0.8 R^4.
    let want = 0.8 * radius.powi(4);
    assert!(rel(got, want) < 1e-10, "{got} vs {want}");
}

#[test]
fn constants() {
    assert!(rel(c1(1, 2.0, 1.0, 1e-10).unwrap(), 768.0) < 1e-10);
    assert!(rel(c2(1, 2.0, 1.0, 2.0, 1.0, 1e-10).unwrap(), 2_359_296.0) < 1e-10);
    let s = shell_series(1, 2.0, 1.0, DEFAULT_SERIES_TOL).unwrap();
    assert!((s.value - 2.0).abs() < 1e-12);
    let x: f64 = 1.0 / 16.0;
    let s = shell_series(2, 3.0, 2.0, DEFAULT_SERIES_TOL).unwrap();
    assert!((s.value - x * (1.0 + x) / (1.0 - x).powi(3)).abs() < 1e-12);
}

#[test]
fn ball_averages() {
    let c = parse_label("const:c=4").unwrap().profile;
    assert!((ball_average(&c, 3, 2.0, &q()).unwrap() - 4.0).abs() < 1e-12);
    let ind = parse_label("indicator:a=0:b=1").unwrap().profile;
    assert!((ball_average(&ind, 1, 2.0, &q()).unwrap() - 0.5).abs() < 1e-12);
    let t = parse_label("power:beta=1").unwrap().profile;
    assert!((ball_average(&t, 1, 1.0, &q()).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn cmo_of_indicator() {
    let ind = parse_label("indicator:a=0:b=1").unwrap().profile;
    let est = cmo_p_norm(&ind, 1.0, 1, (0.1, 10.0), 200, &q()).unwrap();
    assert!((est.value - 0.5).abs() < 1e-4, "{est:?}");
    assert!((est.argmax_r - 2.0).abs() < 1e-3, "{est:?}");
    let upper = cmo_norm_upper(&ind, 1, (0.1, 10.0), &q()).unwrap();
    assert!(est.value <= upper.value);
}
