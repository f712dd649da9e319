//! Explicit constants of the commutator inequalities.
//!
//! All of them share the bracket
//!
//! ```text
//! 2^{n|α|} 2^{n|α-1|} 3^r · 4 · 2^{2nr} · Σ_{k≥0} 2^{-kn|α-1|} k^r
//! ```
//!
//! taken to the power `1/r` (`c1`) or `s/r` (`c0`, and `c2` after the
//! prefactor `|1 - γr/s|^{-s/r}`). The series is summed until a geometric
//! tail bound falls below the tolerance; the partial sum (a lower bound) is
//! what the constants use.

use alloc::format;

use crate::error::{Error, Result};
use crate::math;
use crate::means::Side;

/// A convergent series: the true value lies in `[value, value + tail_bound]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    /// Index of the last term included.
    pub truncation_k: u64,
    pub tail_bound: f64,
}

const MAX_TERMS: u64 = 100_000_000;

/// `Σ_{k=0}^∞ 2^{-kn|α-1|} k^r` with `0^r = 0`.
pub fn shell_series(n: u32, alpha: f64, r: f64, tol: f64) -> Result<SeriesResult> {
    if n == 0 {
        return Err(Error::param("dimension n must be at least 1"));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param("series order r must be positive"));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tolerance must be positive"));
    }
    let gap = (alpha - 1.0).abs();
    if gap == 0.0 {
        return Err(Error::DivergentSeries);
    }
    if !gap.is_finite() {
        return Err(Error::param("alpha must be finite"));
    }
    let x = math::pow(2.0, -(n as f64) * gap);
    let lnx = math::ln(x);
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut k: u64 = 1;
    loop {
        let kf = k as f64;
        let term = math::exp(kf * lnx + r * math::ln(kf));
        // Kahan summation keeps long sums at full precision.
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        let q = x * math::pow((kf + 1.0) / kf, r);
        if q < 1.0 {
            let tail = term * q / (1.0 - q);
            if tail <= tol || term == 0.0 {
                return Ok(SeriesResult { value: sum, truncation_k: k, tail_bound: tail });
            }
        }
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::param(format!(
                "series with ratio {x} needs more than {MAX_TERMS} terms for tolerance {tol}"
            )));
        }
    }
}

/// Series tolerance used by the constant helpers.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;

/// The shared bracket `2^{n|α|} 2^{n|α-1|} 3^r · 4 · 2^{2nr} · S`.
pub fn bracket(n: u32, alpha: f64, r: f64, tol: f64) -> Result<f64> {
    let series = shell_series(n, alpha, r, tol)?;
    Ok(bracket_prefactor(n, alpha, r) * series.value)
}

/// `2^{n|α|} 2^{n|α-1|} 3^r`, the factor in front of `I1 + I2 + I3`.
pub fn split_factor(n: u32, alpha: f64, r: f64) -> f64 {
    let nf = n as f64;
    math::pow(2.0, nf * alpha.abs()) * math::pow(2.0, nf * (alpha - 1.0).abs()) * math::pow(3.0, r)
}

fn bracket_prefactor(n: u32, alpha: f64, r: f64) -> f64 {
    split_factor(n, alpha, r) * 4.0 * math::pow(2.0, 2.0 * n as f64 * r)
}

fn check_orders(r: f64, s: f64) -> Result<()> {
    if !(r > 0.0 && s > r && s.is_finite()) {
        return Err(Error::param(format!("constants need s > r > 0 (r = {r}, s = {s})")));
    }
    Ok(())
}

/// `c1 = bracket^{1/r}`.
pub fn c1(n: u32, alpha: f64, r: f64, tol: f64) -> Result<f64> {
    Ok(math::pow(bracket(n, alpha, r, tol)?, 1.0 / r))
}

/// `c2 = |1 - γr/s|^{-s/r} · bracket^{s/r}`.
pub fn c2(n: u32, alpha: f64, r: f64, s: f64, gamma: f64, tol: f64) -> Result<f64> {
    check_orders(r, s)?;
    let d = (1.0 - gamma * r / s).abs();
    if d == 0.0 || !gamma.is_finite() {
        return Err(Error::DegenerateConstant);
    }
    let e = s / r;
    Ok(math::pow(d, -e) * math::pow(bracket(n, alpha, r, tol)?, e))
}

/// `c0 = bracket^{s/r}`, the constant of the shell inequality.
pub fn c0(n: u32, alpha: f64, r: f64, s: f64, tol: f64) -> Result<f64> {
    check_orders(r, s)?;
    Ok(math::pow(bracket(n, alpha, r, tol)?, s / r))
}

/// `(α - γr/s)^{-s/r}` (central) or `(γr/s - α)^{-s/r}` (companion).
pub fn theorem2_constant(alpha: f64, gamma: f64, r: f64, s: f64, side: Side) -> Result<f64> {
    if r == 0.0 || !(s > 0.0) || !(r < s) {
        return Err(Error::param(format!("need r < s, r != 0, s > 0 (r = {r}, s = {s})")));
    }
    let d = alpha - gamma * r / s;
    let base = match side {
        Side::Central => d,
        Side::Companion => -d,
    };
    if !(base > 0.0) {
        let cond = match side {
            Side::Central => "alpha - gamma*r/s > 0",
            Side::Companion => "alpha - gamma*r/s < 0",
        };
        return Err(Error::HypothesisViolation(format!("{cond} required (it is {d})")));
    }
    Ok(math::pow(base, -s / r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn series_examples() {
        let s = shell_series(1, 2.0, 1.0, 1e-13).unwrap();
        assert!((s.value - 2.0).abs() <= 1e-12);
        assert!(s.value <= 2.0 && 2.0 <= s.value + s.tail_bound + 1e-15);
        let x = 1.0 / 16.0;
        let want = x * (1.0 + x) / (1.0f64 - x).powi(3);
        let s = shell_series(2, 3.0, 2.0, 1e-14).unwrap();
        assert!((s.value - want).abs() <= 1e-12, "{} vs {want}", s.value);
        let s = shell_series(1, 2.0, 1e-9, 1e-12).unwrap();
        assert!((s.value - 1.0).abs() < 1e-7);
        assert_eq!(shell_series(1, 1.0, 1.0, 1e-12), Err(Error::DivergentSeries));
    }

    #[test]
    fn c1_c2_examples() {
        let c = c1(1, 2.0, 1.0, 1e-10).unwrap();
        assert!((c - 768.0).abs() <= 768.0 * 1e-10);
        let s = shell_series(1, 2.0, 1.0, 1e-10).unwrap();
        assert!((c / s.value - 384.0).abs() < 1e-9);
        let c = c2(1, 2.0, 1.0, 2.0, 1.0, 1e-12).unwrap();
        assert!((c - 2_359_296.0).abs() <= 2_359_296.0 * 1e-11);
        let b = bracket(1, 2.0, 1.0, 1e-12).unwrap();
        assert!((c2(1, 2.0, 1.0, 2.0, 0.0, 1e-12).unwrap() - b * b).abs() <= 1e-9 * b * b);
        assert_eq!(c2(1, 2.0, 1.0, 2.0, 2.0, 1e-12), Err(Error::DegenerateConstant));
        assert_eq!(c1(1, 1.0, 1.0, 1e-12), Err(Error::DivergentSeries));
    }

    #[test]
    fn theorem2_examples() {
        assert_eq!(theorem2_constant(1.0, 0.0, 1.0, 2.0, Side::Central).unwrap(), 1.0);
        assert_eq!(theorem2_constant(1.0, 0.0, 3.0, 5.0, Side::Central).unwrap(), 1.0);
        assert!((theorem2_constant(2.0, 1.0, 1.0, 2.0, Side::Central).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(theorem2_constant(0.0, 2.0, 1.0, 2.0, Side::Companion).unwrap(), 1.0);
        assert!(matches!(theorem2_constant(0.0, 2.0, 1.0, 2.0, Side::Central), Err(Error::HypothesisViolation(_))));
    }

    proptest! {
        #[test]
        fn partial_sums_bracket_the_value(n in 1u32..4, alpha in 1.2f64..4.0, r in 0.3f64..3.0) {
            let s = shell_series(n, alpha, r, 1e-12).unwrap();
            let long = shell_series(n, alpha, r, 1e-15).unwrap();
            prop_assert!(long.truncation_k >= s.truncation_k);
            prop_assert!(s.value <= long.value + 1e-15 * long.value);
            prop_assert!(long.value <= s.value + s.tail_bound + 1e-15 * long.value);
            // 10x-longer direct partial sum
            let x = 2f64.powf(-(n as f64) * (alpha - 1.0).abs());
            let k10 = 10 * s.truncation_k.max(10);
            let direct: f64 = (1..=k10).map(|k| x.powf(k as f64) * (k as f64).powf(r)).sum();
            prop_assert!(direct <= s.value + s.tail_bound + 1e-12 * direct);
        }

        #[test]
        fn series_decreases_with_gap(n in 1u32..4, a in 1.1f64..3.0, d in 0.05f64..1.0, r in 0.5f64..3.0) {
            let near = shell_series(n, a, r, 1e-13).unwrap().value;
            let far = shell_series(n, a + d, r, 1e-13).unwrap().value;
            prop_assert!(far <= near);
            // mirrored side of 1
            let mirrored = shell_series(n, 2.0 - a, r, 1e-13).unwrap().value;
            prop_assert!((mirrored - near).abs() <= 1e-12 * near.max(1e-300));
        }

        #[test]
        fn c2_relation(n in 1u32..4, alpha in 1.2f64..3.0, r in 0.5f64..2.0, extra in 0.1f64..2.0, gamma in -1.0f64..0.9) {
            let s = r + extra;
            let c = c1(n, alpha, r, 1e-13).unwrap();
            let lhs = c2(n, alpha, r, s, gamma, 1e-13).unwrap();
            let rhs = (1.0 - gamma * r / s).abs().powf(-s / r) * c.powf(s);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs);
        }
    }
}
