//! Ball averages and central mean oscillation.
//!
//! `‖b‖_{CMO^p} = sup_R (|B(R)|^{-1} ∫_{B(R)} |b - b_{B(R)}|^p)^{1/p}` and
//! `‖b‖_{CMO} = sup_{p ≥ 1} ‖b‖_{CMO^p}`. The supremum over `R` is searched
//! on a log-spaced grid with local refinement; for `CMO` the `p → ∞` limit
//! `sup_R ess-sup_{B(R)} |b - b_{B(R)}|` is used, which dominates every
//! `CMO^p` norm.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::means::{check_radius, root, scaled};
use crate::profiles::RadialProfile;
use crate::quadrature::{integrate, integrate_with_kinks, Estimate, QuadratureSpec};

/// Which side of the true norm an estimate lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

/// Result of a search over radii.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillationEstimate {
    /// Oscillation order; `∞` for the `CMO` upper estimate.
    pub p: f64,
    pub value: f64,
    pub kind: BoundKind,
    pub r_min: f64,
    pub r_max: f64,
    pub grid_size: usize,
    pub argmax_r: f64,
}

/// Default search window and resolution.
pub const DEFAULT_R_RANGE: (f64, f64) = (1e-3, 1e3);
pub const DEFAULT_GRID: usize = 200;
const REFINE_PASSES: usize = 3;
const REFINE_POINTS: usize = 21;

/// Ess-sup sampling covers `t ∈ [R·1e-8, R]`.
const SAMPLE_DECADES: f64 = 8.0;
const SAMPLE_POINTS: usize = 400;

/// `b_{B(R)} = n ∫_0^1 v^{n-1} b(Rv) dv`, with its error.
pub fn ball_average_estimate(b: &RadialProfile, n: u32, radius: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    check_radius(radius)?;
    spec.validate()?;
    if n == 0 {
        return Err(Error::param("dimension n must be at least 1"));
    }
    let sup = b.support();
    let lo = sup.start / radius;
    let hi = (sup.end / radius).min(1.0);
    if !(hi > lo) || b.is_zero() {
        return Ok(Estimate::exact(0.0));
    }
    let nf = n as f64;
    let knots: Vec<f64> = b.breakpoints().iter().map(|t| t / radius).collect();
    let e = integrate(
        |v| Ok(scaled(radius, v).map_or(0.0, |t| nf * math::pow(v, nf - 1.0) * b.eval(t))),
        lo,
        hi,
        &knots,
        spec,
    )?;
    Ok(e)
}

/// `|B(R)|^{-1} ∫_{B(R)} b`.
pub fn ball_average(b: &RadialProfile, n: u32, radius: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(ball_average_estimate(b, n, radius, spec)?.value)
}

fn unit_knots(b: &RadialProfile, radius: f64) -> Vec<f64> {
    let mut knots: Vec<f64> = b.breakpoints().iter().map(|t| t / radius).collect();
    let sup = b.support();
    knots.extend([sup.start / radius, sup.end / radius]);
    knots.retain(|v| *v > 0.0 && *v < 1.0);
    knots
}

/// `b_{B(R)} - b(R)`, integrated from `b(Rv) - b(R)` so that a nearly flat
/// `b` keeps its relative accuracy.
pub fn average_offset(b: &RadialProfile, n: u32, radius: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    check_radius(radius)?;
    if n == 0 {
        return Err(Error::param("dimension n must be at least 1"));
    }
    let nf = n as f64;
    let level = b.eval(radius);
    let dev = |v: f64| scaled(radius, v).map_or(-level, |t| b.difference(t, radius));
    integrate(|v| Ok(nf * math::pow(v, nf - 1.0) * dev(v)), 0.0, 1.0, &unit_knots(b, radius), spec)
}

/// `(|B(R)|^{-1} ∫_{B(R)} |b - b_{B(R)}|^p)^{1/p}`.
pub fn oscillation(b: &RadialProfile, p: f64, n: u32, radius: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param("oscillation order p must lie in [1, inf)"));
    }
    check_radius(radius)?;
    spec.validate()?;
    if n == 0 {
        return Err(Error::param("dimension n must be at least 1"));
    }
    if b.is_zero() {
        return Ok(0.0);
    }
    let nf = n as f64;
    let level = b.eval(radius);
    let dev = |v: f64| scaled(radius, v).map_or(-level, |t| b.difference(t, radius));
    let knots = unit_knots(b, radius);
    let offset = average_offset(b, n, radius, spec)?.value;
    let mut kinks: Vec<f64> =
        b.level_crossings(level + offset, radius * math::exp2i(-40), radius).into_iter().map(|t| t / radius).collect();
    kinks.push(1.0);
    let e = integrate_with_kinks(
        |v| {
            let d = dev(v) - offset;
            Ok(if d == 0.0 { 0.0 } else { nf * math::pow(v, nf - 1.0) * math::abs_pow(d, p) })
        },
        0.0,
        1.0,
        &knots,
        &kinks,
        spec,
    )?;
    Ok(root(e, p).value)
}

/// Maximises `objective` over a log grid on `[lo, hi]`, then refines three
/// times around the best point with the spacing shrinking tenfold per pass.
fn grid_max<F>(mut objective: F, lo: f64, hi: f64, grid: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::param(format!("radius range [{lo}, {hi}] is invalid")));
    }
    if grid < 2 || lo == hi {
        let v = objective(lo)?;
        return Ok((v, lo));
    }
    let (a, z) = (math::ln(lo), math::ln(hi));
    let mut step = (z - a) / (grid - 1) as f64;
    let mut best = (f64::NEG_INFINITY, lo);
    for i in 0..grid {
        let x = if i + 1 == grid { z } else { a + step * i as f64 };
        let r = math::exp(x);
        let v = objective(r)?;
        if v > best.0 {
            best = (v, r);
        }
    }
    for _ in 0..REFINE_PASSES {
        let centre = math::ln(best.1);
        let half = step;
        step = 2.0 * half / (REFINE_POINTS - 1) as f64;
        for j in 0..REFINE_POINTS {
            let x = centre - half + step * j as f64;
            if x < a || x > z {
                continue;
            }
            let r = math::exp(x);
            let v = objective(r)?;
            if v > best.0 {
                best = (v, r);
            }
        }
    }
    Ok(best)
}

/// Grid lower estimate of `‖b‖_{CMO^p}` over radii in `r_range`.
pub fn cmo_p_norm(
    b: &RadialProfile,
    p: f64,
    n: u32,
    r_range: (f64, f64),
    grid_size: usize,
    spec: &QuadratureSpec,
) -> Result<OscillationEstimate> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param("oscillation order p must lie in [1, inf)"));
    }
    if n == 0 {
        return Err(Error::param("dimension n must be at least 1"));
    }
    spec.validate()?;
    let (value, argmax_r) = grid_max(|r| oscillation(b, p, n, r, spec), r_range.0, r_range.1, grid_size)?;
    Ok(OscillationEstimate {
        p,
        value: value.max(0.0),
        kind: BoundKind::Lower,
        r_min: r_range.0,
        r_max: r_range.1,
        grid_size,
        argmax_r,
    })
}

/// `ess-sup_{0 < t ≤ R} |b(t) - c|`, by dense log sampling, both sides of
/// every breakpoint, and a local refinement around the best sample.
pub fn sup_deviation(b: &RadialProfile, c: f64, radius: f64) -> f64 {
    let dev = |t: f64| (b.eval(t) - c).abs();
    let span = SAMPLE_DECADES * core::f64::consts::LN_10;
    let step = span / (SAMPLE_POINTS - 1) as f64;
    let top = math::ln(radius);
    let mut best = (0.0f64, top);
    for j in 0..SAMPLE_POINTS {
        let x = top - step * j as f64;
        let v = dev(math::exp(x));
        if v > best.0 {
            best = (v, x);
        }
    }
    let mut h = step;
    for _ in 0..REFINE_PASSES {
        let centre = best.1;
        let fine = 2.0 * h / (REFINE_POINTS - 1) as f64;
        for j in 0..REFINE_POINTS {
            let x = (centre - h + fine * j as f64).min(top);
            let v = dev(math::exp(x));
            if v > best.0 {
                best = (v, x);
            }
        }
        h = fine;
    }
    let mut out = best.0;
    for &bp in b.breakpoints() {
        if bp <= radius {
            out = out.max(dev(bp * (1.0 - 1e-12)));
            if bp < radius {
                out = out.max(dev(bp * (1.0 + 1e-12)));
            }
        }
    }
    if b.support().start > 0.0 {
        out = out.max(c.abs());
    }
    out
}

/// Estimate of `‖b‖_{CMO}` from above: `sup_R ess-sup_{B(R)} |b - b_{B(R)}|`
/// over the radius window. Needs a known bound on `|b|`.
pub fn cmo_norm_upper(
    b: &RadialProfile,
    n: u32,
    r_range: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<OscillationEstimate> {
    cmo_norm_upper_with_grid(b, n, r_range, DEFAULT_GRID, spec)
}

pub fn cmo_norm_upper_with_grid(
    b: &RadialProfile,
    n: u32,
    r_range: (f64, f64),
    grid_size: usize,
    spec: &QuadratureSpec,
) -> Result<OscillationEstimate> {
    if b.sup_bound().is_none() {
        return Err(Error::UnboundedSymbol(format!(
            "'{}' has no known bound, so no CMO upper estimate is available",
            b.label()
        )));
    }
    if n == 0 {
        return Err(Error::param("dimension n must be at least 1"));
    }
    spec.validate()?;
    let (value, argmax_r) = grid_max(
        |r| {
            let avg = b.eval(r) + average_offset(b, n, r, spec)?.value;
            Ok(sup_deviation(b, avg, r))
        },
        r_range.0,
        r_range.1,
        grid_size,
    )?;
    Ok(OscillationEstimate {
        p: f64::INFINITY,
        value: value.max(0.0),
        kind: BoundKind::Upper,
        r_min: r_range.0,
        r_max: r_range.1,
        grid_size,
        argmax_r,
    })
}
