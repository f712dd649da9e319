//! Structural invariants as property tests.

use centmean_core::cmo::{cmo_norm_upper, cmo_p_norm};
use centmean_core::commutators::{bracket_commutator, commutator_mean, CommutatorParams};
use centmean_core::means::{mean, mixed_mean, OuterParams};
use centmean_core::profiles::{
    bounded_oscillator, dilate_profile, parse_label, product_profile, scale_profile, RadialProfile,
};
use centmean_core::{MeanParams, QuadratureSpec, Side};
use proptest::prelude::*;

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

const CENTRAL: [&str; 4] =
    ["indicator:a=0:b=1", "bump:beta=0.5:kappa=4", "power:beta=1:a=0:b=1", "bump:beta=0:kappa=2"];
const SYMBOLS: [&str; 4] = ["osc:amp=1:phase=0", "osc:amp=0.5:phase=0.7", "smooth:radius=1:k=4", "smooth:radius=2:k=2"];

fn profile(label: &str) -> RadialProfile {
    parse_label(label).unwrap().profile
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mean_is_absolutely_homogeneous(
        fi in 0..CENTRAL.len(),
        c in prop::sample::select(vec![-2.0, 0.5, 3.0, -0.1, 7.5]),
        n in 1u32..=3,
        r in prop::sample::select(vec![0.5, 1.0, 2.0, 3.0]),
        alpha in 0.25f64..3.0,
        radius in 0.1f64..10.0,
    ) {
        let f = profile(CENTRAL[fi]);
        let p = MeanParams::new(n, r, alpha).unwrap();
        let a = mean(&scale_profile(&f, c), &p, radius, Side::Central, &q()).unwrap();
        let b = mean(&f, &p, radius, Side::Central, &q()).unwrap();
        prop_assert!(close(a, c.abs() * b, 1e-10), "{a} vs {}", c.abs() * b);
    }

    #[test]
    fn mean_is_dilation_covariant(
        fi in 0..CENTRAL.len(),
        lambda in prop::sample::select(vec![0.5, 2.0, 10.0]),
        r in prop::sample::select(vec![0.5, 1.0, 2.0]),
        alpha in 0.25f64..3.0,
        radius in 0.1f64..10.0,
        companion in any::<bool>(),
    ) {
        let f = profile(CENTRAL[fi]);
        // Companion means of these profiles need α < 0 to converge.
        let (side, alpha) = if companion { (Side::Companion, -alpha) } else { (Side::Central, alpha) };
        let p = MeanParams::new(2, r, alpha).unwrap();
        let dilated = dilate_profile(&f, lambda).unwrap();
        let a = mean(&dilated, &p, radius, side, &q()).unwrap();
        let b = mean(&f, &p, lambda * radius, side, &q()).unwrap();
        prop_assert!(close(a, b, 1e-9), "{a} vs {b}");
    }

    #[test]
    fn mean_of_constant(
        c in -5.0f64..5.0,
        n in 1u32..=3,
        r in prop::sample::select(vec![-1.0, 0.5, 1.0, 2.0]),
        alpha in 0.1f64..4.0,
        radius in 1e-3f64..1e3,
    ) {
        prop_assume!(c != 0.0);
        // Negative orders need a strictly positive profile.
        prop_assume!(r > 0.0 || c > 0.0);
        let f = parse_label(&format!("const:c={c}")).unwrap().profile;
        let p = MeanParams::new(n, r, alpha).unwrap();
        let got = mean(&f, &p, radius, Side::Central, &q()).unwrap();
        prop_assert!(close(got, c.abs() * alpha.powf(-1.0 / r), 1e-10));
    }

    #[test]
    fn mean_is_monotone(
        fi in 0..CENTRAL.len(),
        a in 0.0f64..2.0,
        r in prop::sample::select(vec![0.5, 1.0, 2.0]),
        alpha in 0.25f64..3.0,
        radius in 0.1f64..10.0,
    ) {
        // |1_[a,∞) f| ≤ |f|.
        let f = profile(CENTRAL[fi]);
        let cut = product_profile(&parse_label(&format!("power:beta=0:a={a}")).unwrap().profile, &f);
        let p = MeanParams::new(1, r, alpha).unwrap();
        let small = mean(&cut, &p, radius, Side::Central, &q()).unwrap();
        let big = mean(&f, &p, radius, Side::Central, &q()).unwrap();
        prop_assert!(small <= big * (1.0 + 1e-10), "{small} > {big}");
    }

    #[test]
    fn mixed_mean_is_homogeneous(
        c in prop::sample::select(vec![-2.0, 0.5, 3.0]),
        s in 1.5f64..4.0,
        gamma in 0.5f64..2.0,
        radius in 0.2f64..5.0,
    ) {
        let f = profile("bump:beta=0.5:kappa=4");
        let inner = MeanParams::new(1, 1.0, 2.0).unwrap();
        let outer = OuterParams::new(s, gamma).unwrap();
        let a = mixed_mean(&scale_profile(&f, c), &inner, &outer, radius, Side::Central, &q()).unwrap();
        let b = mixed_mean(&f, &inner, &outer, radius, Side::Central, &q()).unwrap();
        prop_assert!(close(a, c.abs() * b, 1e-8), "{a} vs {}", c.abs() * b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn commutator_ignores_symbol_shift_and_is_homogeneous_in_f(
        fi in 0..CENTRAL.len(),
        bi in 0..SYMBOLS.len(),
        shift in -4.0f64..4.0,
        c in prop::sample::select(vec![-2.0, 0.5, 3.0]),
        r in prop::sample::select(vec![0.5, 1.0, 2.0]),
        alpha in 0.5f64..3.0,
        radius in 0.1f64..10.0,
    ) {
        let f = profile(CENTRAL[fi]);
        let b = profile(SYMBOLS[bi]);
        let shifted = RadialProfile::new("shifted", {
            let b = b.clone();
            move |t| b.eval(t) + shift
        });
        let p = MeanParams::new(2, r, alpha).unwrap();
        let base = commutator_mean(&f, &CommutatorParams::new(p, b.clone()).unwrap(), radius, &q()).unwrap();
        let moved = commutator_mean(&f, &CommutatorParams::new(p, shifted).unwrap(), radius, &q()).unwrap();
        prop_assert!(close(base, moved, 1e-6), "{base} vs {moved}");
        let scaled = commutator_mean(&scale_profile(&f, c), &CommutatorParams::new(p, b).unwrap(), radius, &q()).unwrap();
        prop_assert!(close(scaled, c.abs() * base, 1e-9), "{scaled} vs {}", c.abs() * base);
    }

    #[test]
    fn constant_symbol(
        fi in 0..CENTRAL.len(),
        k in -5.0f64..5.0,
        r in prop::sample::select(vec![1.0, 2.0, 3.0]),
        radius in 0.1f64..10.0,
    ) {
        let f = profile(CENTRAL[fi]);
        let b = parse_label(&format!("const:c={k}")).unwrap().profile;
        let p = MeanParams::new(1, r, 2.0).unwrap();
        let cp = CommutatorParams::new(p, b).unwrap();
        prop_assert_eq!(commutator_mean(&f, &cp, radius, &q()).unwrap(), 0.0);
        // M_r(k f) = |k| M_r(f), so the bracket is (|k| - k) M_r(f).
        let bracket = bracket_commutator(&f, &cp, radius, &q(), Side::Central).unwrap();
        let m = mean(&f, &p, radius, Side::Central, &q()).unwrap();
        prop_assert!((bracket - (k.abs() - k) * m).abs() <= 1e-9 * (1.0 + k.abs() * m), "{bracket} vs {}", (k.abs() - k) * m);
    }

    #[test]
    fn oscillation_is_shift_and_scale_covariant(
        amp in 0.1f64..3.0,
        phase in 0.0f64..6.0,
        k in -3.0f64..3.0,
        c in 0.2f64..4.0,
    ) {
        let b = bounded_oscillator(amp, phase);
        let shifted = RadialProfile::new("shifted", {
            let b = b.clone();
            move |t| b.eval(t) + k
        });
        let range = (0.1, 10.0);
        let base = cmo_p_norm(&b, 1.0, 1, range, 40, &q()).unwrap().value;
        let moved = cmo_p_norm(&shifted, 1.0, 1, range, 40, &q()).unwrap().value;
        let scaled = cmo_p_norm(&scale_profile(&b, c), 1.0, 1, range, 40, &q()).unwrap().value;
        prop_assert!(close(base, moved, 1e-8), "{base} vs {moved}");
        prop_assert!(close(scaled, c * base, 1e-8), "{scaled} vs {}", c * base);
    }
}

#[test]
fn oscillation_is_monotone_in_p_and_below_upper_estimate() {
    let range = (1e-2, 1e2);
    for label in SYMBOLS.iter().chain(["indicator:a=0:b=1", "const:c=3"].iter()) {
        let b = profile(label);
        let vals: Vec<f64> =
            [1.0, 2.0, 4.0, 8.0].iter().map(|&p| cmo_p_norm(&b, p, 1, range, 60, &q()).unwrap().value).collect();
        for w in vals.windows(2) {
            assert!(w[0] <= w[1] + 1e-9, "{label}: {vals:?}");
        }
        let upper = cmo_norm_upper(&b, 1, range, &q()).unwrap().value;
        assert!(vals[3] <= upper + 1e-9, "{label}: {} > {upper}", vals[3]);
    }
}
