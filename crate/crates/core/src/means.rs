//! Central integral means, companion means, mixed means and weighted norms.
//!
//! With `f(x) = g(|x|)`, `|B(t)| = ω_n t^n` and the substitution `t = Rv`,
//!
//! ```text
//! M_r(f,α)(R)^r  = n ∫_0^1 v^{nα-1} |g(Rv)|^r dv
//! M*_r(f,α)(R)^r = n ∫_1^∞ v^{nα-1} |g(Rv)|^r dv
//! ```
//!
//! so `ω_n` cancels and the integrals stay O(1) whatever the radius.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;
use crate::profiles::{Growth, RadialProfile};
use crate::quadrature::{dyadic_knots, integrate, integrate_fixed, integrate_ln, Estimate, QuadratureSpec};

/// Dimension `n`, order `r` and weight exponent `α` of a mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanParams {
    pub n: u32,
    pub r: f64,
    pub alpha: f64,
}

impl MeanParams {
    pub fn new(n: u32, r: f64, alpha: f64) -> Result<Self> {
        let p = MeanParams { n, r, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("dimension n must be at least 1"));
        }
        if self.r == 0.0 || !self.r.is_finite() {
            return Err(Error::param("order r must be finite and nonzero"));
        }
        if !self.alpha.is_finite() {
            return Err(Error::param("alpha must be finite"));
        }
        Ok(())
    }

    /// `nα`, the exponent of the radial weight.
    pub fn weight(&self) -> f64 {
        self.n as f64 * self.alpha
    }
}

/// Order `s` and weight exponent `γ` of an outer mean or weighted norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OuterParams {
    pub s: f64,
    pub gamma: f64,
}

impl OuterParams {
    pub fn new(s: f64, gamma: f64) -> Result<Self> {
        if s == 0.0 || !s.is_finite() || !gamma.is_finite() {
            return Err(Error::param("outer order s must be finite and nonzero, gamma finite"));
        }
        Ok(OuterParams { s, gamma })
    }
}

/// Ball `B(R)` or its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Central,
    Companion,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Central => "central",
            Side::Companion => "companion",
        })
    }
}

/// `ω_n`, the volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: u32) -> f64 {
    let (mut w, start) = if n.is_multiple_of(2) { (1.0, 2) } else { (2.0, 3) };
    let mut k = start;
    while k <= n {
        w *= 2.0 * PI / k as f64;
        k += 2;
    }
    w
}

/// `|B(R)| = ω_n R^n`.
pub fn ball_volume(n: u32, radius: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("dimension n must be at least 1"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::param("radius must be positive"));
    }
    Ok(unit_ball_volume(n) * math::pow(radius, n as f64))
}

pub(crate) fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("radius must be positive and finite, got {radius}")))
    }
}

/// Whether an integral of power-law type converges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Finiteness {
    /// Converges with room to spare.
    Finite,
    /// Converges, but the decisive exponent sits within the margin of the
    /// boundary, where quadrature cannot resolve it reliably.
    Marginal,
    Divergent,
}

/// Width of the band around an integrability boundary treated as marginal.
pub const GROWTH_MARGIN: f64 = 0.05;

fn classify(q: f64, margin: f64) -> Finiteness {
    if q > margin {
        Finiteness::Finite
    } else if q > 0.0 {
        Finiteness::Marginal
    } else {
        Finiteness::Divergent
    }
}

fn worst(a: Finiteness, b: Finiteness) -> Finiteness {
    use Finiteness::*;
    match (a, b) {
        (Divergent, _) | (_, Divergent) => Divergent,
        (Marginal, _) | (_, Marginal) => Marginal,
        _ => Finite,
    }
}

/// Finiteness of `M_r(g, α)` (central) or `M*_r(g, α)` (companion) at every
/// radius, from the envelope of `g`.
/// For `r < 0` a divergent integral means `M^r = ∞`, i.e. the mean vanishes.
pub fn mean_finiteness(g: Growth, p: &MeanParams, side: Side, margin: f64) -> Finiteness {
    if mean_vanishes(g, p, side) {
        return Finiteness::Finite;
    }
    classify(mean_exponent(g, p, side), margin)
}

fn mean_exponent(g: Growth, p: &MeanParams, side: Side) -> f64 {
    let w = p.weight();
    match side {
        Side::Central => w + p.r * g.origin,
        Side::Companion => -(w + p.r * g.infinity),
    }
}

/// Whether a mean of negative order is identically `0` because the integral
/// of `|g|^r` diverges.
pub fn mean_vanishes(g: Growth, p: &MeanParams, side: Side) -> bool {
    p.r < 0.0 && mean_exponent(g, p, side) <= 0.0
}

/// Envelope of the mean as a function of the radius, assuming it is finite.
/// A vanishing mean gets the envelope `origin = ∞`, `infinity = -∞`.
pub fn mean_growth(g: Growth, p: &MeanParams, side: Side) -> Growth {
    if mean_vanishes(g, p, side) {
        return Growth { origin: f64::INFINITY, infinity: f64::NEG_INFINITY };
    }
    let crit = -p.weight() / p.r;
    let pick = |e: f64, towards_max: bool| if towards_max { e.max(crit) } else { e.min(crit) };
    match side {
        Side::Central => Growth { origin: g.origin, infinity: pick(g.infinity, p.r > 0.0) },
        Side::Companion => Growth { origin: pick(g.origin, p.r < 0.0), infinity: g.infinity },
    }
}

/// Finiteness of `∫ t^{κ-1} h(t)^s dt` over `(0, R)`, `(R, ∞)` or `(0, ∞)`
/// for `h` with envelope `g`.
pub fn weighted_finiteness(
    g: Growth,
    kappa: f64,
    s: f64,
    near_zero: bool,
    near_infinity: bool,
    margin: f64,
) -> Finiteness {
    let mut out = Finiteness::Finite;
    if near_zero {
        out = worst(out, classify(kappa + s * g.origin, margin));
    }
    if near_infinity {
        out = worst(out, classify(-(kappa + s * g.infinity), margin));
    }
    out
}

fn require_positive_on(f: &RadialProfile, lo: f64, hi: f64) -> Result<()> {
    if f.is_strictly_positive() && f.support().covers(lo, hi) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "negative order needs a profile that is strictly positive on [{lo}, {hi}], '{}' is not",
            f.label()
        )))
    }
}

/// Scaled breakpoints of `f` inside `(lo, hi)`.
fn scaled_knots(f: &RadialProfile, scale: f64, lo: f64, hi: f64) -> Vec<f64> {
    f.breakpoints().iter().map(|b| b / scale).filter(|v| *v > lo && *v < hi).collect()
}

/// `exp((κ-1)·ln t + order·ln|h|)`, i.e. `t^{κ-1}|h|^order` without
/// intermediate overflow.
#[inline]
pub(crate) fn weighted_power(t: f64, kappa: f64, h: f64, order: f64) -> f64 {
    let a = h.abs();
    if a == 0.0 {
        return if order > 0.0 { 0.0 } else { f64::INFINITY };
    }
    if kappa == 1.0 {
        return math::abs_pow(a, order);
    }
    math::exp((kappa - 1.0) * math::ln(t) + order * math::ln(a))
}

/// `R·v`, or `None` when it under- or overflows. Integrands treat such
/// points as contributing nothing: they lie below `1e-308` or above
/// `1e308` in the original radius.
#[inline]
pub(crate) fn scaled(radius: f64, v: f64) -> Option<f64> {
    let t = radius * v;
    if (f64::MIN_POSITIVE..=f64::MAX).contains(&t) {
        Some(t)
    } else {
        None
    }
}

/// Integration range in `v = t/R` for a profile supported on
/// `[start, end]`, with extra knots. Where `R·v` would leave the range of
/// normal floats within reach of the integrator, the range is cut there
/// and graded knots are added so the cut does not sit inside a mapped panel.
pub(crate) fn v_range(start: f64, end: f64, radius: f64, side: Side) -> (f64, f64, Vec<f64>) {
    const REACH: i32 = 900;
    const STEP: i32 = 8;
    let mut knots = Vec::new();
    match side {
        Side::Central => {
            let mut lo = start / radius;
            let hi = (end / radius).min(1.0);
            let floor = f64::MIN_POSITIVE / radius;
            if floor > lo && floor > math::exp2i(-REACH) && floor < hi {
                lo = floor;
                let mut k = math::ceil(math::log2(lo)) as i32 + STEP;
                while (k as f64) < math::log2(hi) {
                    knots.push(math::exp2i(k));
                    k += STEP;
                }
            }
            (lo, hi, knots)
        }
        Side::Companion => {
            let lo = (start / radius).max(1.0);
            let mut hi = end / radius;
            let ceiling = f64::MAX / radius;
            if ceiling < hi && ceiling < math::exp2i(REACH) && ceiling > lo {
                hi = ceiling;
                let mut k = math::floor(math::log2(hi)) as i32 - STEP;
                while (k as f64) > math::log2(lo) {
                    knots.push(math::exp2i(k));
                    k -= STEP;
                }
            }
            (lo, hi, knots)
        }
    }
}

/// `ln 2^-958`: below this reference scale profile values are near underflow.
const TINY_SCALE_LN: f64 = -958.0 * core::f64::consts::LN_2;

/// `M^r` (central: `n∫_0^1`, companion: `n∫_1^∞` of `v^{nα-1}|g(Rv)|^r dv`).
pub fn mean_power(
    f: &RadialProfile,
    p: &MeanParams,
    radius: f64,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    Ok(match mean_parts(f, p, radius, side, spec)? {
        None => Estimate::exact(0.0),
        Some((est, ln_c)) => {
            let k = math::exp(p.r * ln_c);
            Estimate::new(k * est.value, k * est.abs_err)
        }
    })
}

/// `(J, ln c)` with `M^r = c^r·J`: the integrand is divided by `|g|^r` at a
/// reference point, so that means of very small or very large profiles
/// stay representable. `None` when the mean is exactly `0`.
fn mean_parts(
    f: &RadialProfile,
    p: &MeanParams,
    radius: f64,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<Option<(Estimate, f64)>> {
    p.validate()?;
    spec.validate()?;
    check_radius(radius)?;
    let (dom_lo, dom_hi) = match side {
        Side::Central => (0.0, radius),
        Side::Companion => (radius, f64::INFINITY),
    };
    if p.r < 0.0 {
        require_positive_on(f, dom_lo, dom_hi)?;
    } else if f.is_zero() {
        return Ok(None);
    }
    if let Some(g) = f.growth() {
        if mean_vanishes(g, p, side) {
            return Ok(Some((Estimate::exact(f64::INFINITY), 0.0)));
        }
        if mean_finiteness(g, p, side, 0.0) == Finiteness::Divergent {
            return Err(Error::divergence(format!(
                "{side} mean of '{}' diverges (n*alpha = {}, r = {})",
                f.label(),
                p.weight(),
                p.r
            )));
        }
    }
    let sup = f.support();
    let (lo, hi, mut knots) = v_range(sup.start, sup.end, radius, side);
    if !(hi > lo) {
        return Ok(None);
    }
    knots.extend(scaled_knots(f, radius, lo, hi));
    if side == Side::Companion && hi.is_infinite() {
        knots.extend(dyadic_knots(lo, hi, 4));
    }
    let ln_h = |t: f64| f.ln_abs(t);
    let (est, shift) = log_radial_integral(ln_h, p.n, p.weight(), p.r, radius, side, lo, hi, &knots, &[], spec)?;
    Ok(Some((est, shift / p.r)))
}

/// `n ∫ v^{w-1} |h(Rv)|^r dv` over `(lo, hi)`, given `ln|h|`, computed in the
/// variable `ln v` and returned as `(J, shift)` with the integral equal to
/// `exp(shift)·J`. The shift is the sampled peak of the log-integrand, so `J`
/// stays representable where the integral itself does not.
#[allow(clippy::too_many_arguments)]
pub(crate) fn log_radial_integral<H>(
    ln_h: H,
    n: u32,
    w: f64,
    r: f64,
    radius: f64,
    side: Side,
    lo: f64,
    hi: f64,
    knots: &[f64],
    kinks: &[f64],
    spec: &QuadratureSpec,
) -> Result<(Estimate, f64)>
where
    H: Fn(f64) -> f64,
{
    let mut knots = knots.to_vec();
    let v_ref = if lo > 0.0 && hi < lo * math::exp2i(64) {
        math::sqrt(lo) * math::sqrt(hi)
    } else {
        match side {
            Side::Central => 0.5 * hi,
            Side::Companion => 2.0 * lo,
        }
    };
    let ln_c = scaled(radius, v_ref).map_or(0.0, |t| {
        let l = ln_h(t);
        if l.is_finite() {
            l
        } else {
            0.0
        }
    });
    let nf = n as f64;
    let fallback = (w * math::ln(v_ref) + r * ln_c, ln_c, v_ref);
    let (shift, ln_h_peak, v_peak) = log_peak(&ln_h, radius, w, r, lo, hi).unwrap_or(fallback);
    knots.extend([-16, -4, 0, 4, 16].iter().map(|&k| v_peak * math::exp2i(k)).filter(|v| *v > lo && *v < hi));
    // Profile values or means near the underflow threshold lose precision
    // and drop to zero inside the range; such integrals are resolved to 1e-6.
    let spec = if ln_h_peak.min(shift / r) < TINY_SCALE_LN { spec.with_rel_tol(spec.rel_tol.max(1e-6)) } else { *spec };
    // Integrate in x = ±ln(v/anchor) over [0, X], measure v dx.
    let (anchor, dir, x_hi) = if lo > 0.0 { (lo, 1.0, math::ln(hi / lo)) } else { (hi, -1.0, f64::INFINITY) };
    let ln_anchor = math::ln(anchor);
    let to_x = |v: f64| dir * math::ln(v / anchor);
    let x_peak = to_x(v_peak);
    let x_knots: Vec<f64> = knots
        .iter()
        .map(|v| to_x(*v))
        .chain((4..=10).flat_map(|k| {
            let d = math::exp2i(k);
            [x_peak - d, x_peak + d]
        }))
        .filter(|x| *x > 0.0 && *x < x_hi)
        .collect();
    let x_kinks: Vec<f64> = kinks.iter().filter(|v| **v >= lo && **v <= hi).map(|v| to_x(*v)).collect();
    let ln_n = math::ln(nf);
    let est = integrate_ln(
        |x| {
            let ln_v = ln_anchor + dir * x;
            let Some(t) = scaled(radius, math::exp(ln_v)) else {
                return Ok(f64::NEG_INFINITY);
            };
            let lg = ln_h(t);
            if lg == f64::NEG_INFINITY {
                return Ok(if r > 0.0 { f64::NEG_INFINITY } else { f64::INFINITY });
            }
            Ok(ln_n + w * ln_v + r * lg - shift)
        },
        0.0,
        x_hi,
        &x_knots,
        &x_kinks,
        &spec,
    )?;
    Ok((est, shift))
}

/// Largest sampled `ln(v^w |g(Rv)|^r)` over `(lo, hi)` on a log-spaced grid,
/// the scale of the mean integral in the measure `dv/v`, with `ln|g|` and
/// `v` at the maximizing sample.
fn log_peak<H: Fn(f64) -> f64>(ln_h: &H, radius: f64, w: f64, r: f64, lo: f64, hi: f64) -> Option<(f64, f64, f64)> {
    const SAMPLES: usize = 257;
    let a = lo.max(f64::MIN_POSITIVE / radius).max(f64::MIN_POSITIVE);
    let b = hi.min(f64::MAX / radius).min(f64::MAX);
    if !(b > a) {
        return None;
    }
    let (la, lb) = (math::ln(a), math::ln(b));
    let mut peak: Option<(f64, f64, f64)> = None;
    for i in 0..SAMPLES {
        let lv = la + (lb - la) * i as f64 / (SAMPLES - 1) as f64;
        let Some(t) = scaled(radius, math::exp(lv)) else {
            continue;
        };
        let lg = ln_h(t);
        if lg.is_finite() {
            let x = w * lv + r * lg;
            if peak.is_none_or(|(p, _, _)| x > p) {
                peak = Some((x, lg, math::exp(lv)));
            }
        }
    }
    peak
}

/// `J ↦ J^{1/r}` with first-order error propagation.
pub(crate) fn root(e: Estimate, order: f64) -> Estimate {
    if e.value == 0.0 && e.abs_err == 0.0 {
        return Estimate::exact(if order > 0.0 { 0.0 } else { f64::INFINITY });
    }
    let v = math::pow(e.value.max(0.0), 1.0 / order);
    Estimate::with_rel_err(v, e.rel_err() / order.abs())
}

/// `M_r(f, α)(R)` or `M*_r(f, α)(R)` with its error estimate.
pub fn mean_estimate(
    f: &RadialProfile,
    p: &MeanParams,
    radius: f64,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    Ok(match mean_parts(f, p, radius, side, spec)? {
        None => root(Estimate::exact(0.0), p.r),
        Some((est, ln_c)) => {
            let m = root(est, p.r);
            let c = math::exp(ln_c);
            Estimate::new(c * m.value, c * m.abs_err)
        }
    })
}

/// `ln M_r(f, α)(R)` (or of `M*_r`), representable where the mean itself
/// over- or underflows.
pub fn mean_log(f: &RadialProfile, p: &MeanParams, radius: f64, side: Side, spec: &QuadratureSpec) -> Result<LogValue> {
    Ok(match mean_parts(f, p, radius, side, spec)? {
        None => root(Estimate::exact(0.0), p.r).into(),
        Some((est, ln_c)) => LogValue { ln: ln_c + math::ln(est.value) / p.r, rel_err: est.rel_err() / p.r.abs() },
    })
}

/// `M_r(f, α)(R)` or `M*_r(f, α)(R)`.
pub fn mean(f: &RadialProfile, p: &MeanParams, radius: f64, side: Side, spec: &QuadratureSpec) -> Result<f64> {
    Ok(mean_estimate(f, p, radius, side, spec)?.value)
}

/// `M_r(f, α)(R) = (|B(R)|^{-α} ∫_{B(R)} |B(|x|)|^{α-1}|f|^r dx)^{1/r}`.
pub fn central_mean(f: &RadialProfile, p: &MeanParams, radius: f64, spec: &QuadratureSpec) -> Result<f64> {
    mean(f, p, radius, Side::Central, spec)
}

/// `M*_r(f, α)(R)`, the same over `R^n ∖ B(R)`.
pub fn companion_mean(f: &RadialProfile, p: &MeanParams, radius: f64, spec: &QuadratureSpec) -> Result<f64> {
    mean(f, p, radius, Side::Companion, spec)
}

const CURVE_LO: i32 = -40;
const CURVE_HI: i32 = 40;

/// `t ↦ M_r(f, α)(t)` (or `M*_r`) for repeated evaluation.
///
/// The radial integral `∫_0^t u^{nα-1}|g|^r du` (or `∫_t^∞`) is tabulated at
/// `t = 2^k`, `|k| ≤ 40`; an evaluation adds one short integral from the
/// nearest node. Radii outside the table fall back to a direct evaluation.
#[derive(Clone, Debug)]
pub struct MeanCurve {
    f: RadialProfile,
    p: MeanParams,
    side: Side,
    spec: QuadratureSpec,
    /// Cumulative integral at `2^k`, index `k - CURVE_LO`.
    table: Vec<Estimate>,
    /// Negative order with a divergent integral: `M ≡ 0`.
    vanishing: bool,
}

impl MeanCurve {
    pub fn new(f: &RadialProfile, p: &MeanParams, side: Side, spec: &QuadratureSpec) -> Result<Self> {
        p.validate()?;
        spec.validate()?;
        if p.r < 0.0 {
            match side {
                Side::Central => require_positive_on(f, 0.0, f64::INFINITY)?,
                Side::Companion => require_positive_on(f, 0.0, f64::INFINITY)?,
            }
        }
        let mut curve = MeanCurve { f: f.clone(), p: *p, side, spec: *spec, table: Vec::new(), vanishing: false };
        if let Some(g) = f.growth() {
            if mean_vanishes(g, p, side) {
                curve.vanishing = true;
                return Ok(curve);
            }
            if mean_finiteness(g, p, side, 0.0) == Finiteness::Divergent {
                return Err(Error::divergence(format!("{side} mean of '{}' diverges", f.label())));
            }
        }
        let count = (CURVE_HI - CURVE_LO + 1) as usize;
        let mut pieces = Vec::with_capacity(count + 1);
        match side {
            Side::Central => {
                pieces.push(curve.raw(0.0, math::exp2i(CURVE_LO))?);
                for k in CURVE_LO..CURVE_HI {
                    pieces.push(curve.raw(math::exp2i(k), math::exp2i(k + 1))?);
                }
                let mut acc = Estimate::exact(0.0);
                for piece in pieces {
                    acc = acc + piece;
                    curve.table.push(acc);
                }
            }
            Side::Companion => {
                pieces.push(curve.raw(math::exp2i(CURVE_HI), f64::INFINITY)?);
                for k in (CURVE_LO..CURVE_HI).rev() {
                    pieces.push(curve.raw(math::exp2i(k), math::exp2i(k + 1))?);
                }
                let mut acc = Estimate::exact(0.0);
                for piece in pieces {
                    acc = acc + piece;
                    curve.table.push(acc);
                }
                curve.table.reverse();
            }
        }
        Ok(curve)
    }

    /// `∫_a^b u^{nα-1}|g(u)|^r du` restricted to the support.
    fn raw(&self, a: f64, b: f64) -> Result<Estimate> {
        let sup = self.f.support();
        let lo = a.max(sup.start);
        let hi = b.min(sup.end);
        if !(hi > lo) {
            return Ok(Estimate::exact(0.0));
        }
        if self.p.r > 0.0 && self.f.is_zero() {
            return Ok(Estimate::exact(0.0));
        }
        let knots = scaled_knots(&self.f, 1.0, lo, hi);
        let w = self.p.weight();
        let r = self.p.r;
        let f = &self.f;
        integrate(|u| Ok(weighted_power(u, w, f.eval(u), r)), lo, hi, &knots, &self.spec)
    }

    /// Sub-octave piece added to a table entry. A fixed rule keeps the curve
    /// smooth in `t`; the adaptive rule takes over when it is not accurate.
    fn partial(&self, base: Estimate, a: f64, b: f64) -> Result<Estimate> {
        let sup = self.f.support();
        let lo = a.max(sup.start);
        let hi = b.min(sup.end);
        if !(hi > lo) || (self.p.r > 0.0 && self.f.is_zero()) {
            return Ok(Estimate::exact(0.0));
        }
        let knots = scaled_knots(&self.f, 1.0, lo, hi);
        let w = self.p.weight();
        let r = self.p.r;
        let f = &self.f;
        if let Ok(est) = integrate_fixed(|u| Ok(weighted_power(u, w, f.eval(u), r)), lo, hi, &knots, 4) {
            let total = (base.value + est.value).abs();
            if est.abs_err <= self.spec.abs_tol.max(self.spec.rel_tol * total) {
                return Ok(est);
            }
        }
        self.raw(a, b)
    }

    pub fn params(&self) -> &MeanParams {
        &self.p
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// `M(t)^r`.
    pub fn power_at(&self, t: f64) -> Result<Estimate> {
        check_radius(t)?;
        if self.vanishing {
            return Ok(Estimate::exact(f64::INFINITY));
        }
        if !self.in_table(t) {
            return mean_power(&self.f, &self.p, t, self.side, &self.spec);
        }
        let lt = math::log2(t);
        let integral = match self.side {
            Side::Central => {
                let k = math::floor(lt) as i32;
                let base = self.table[(k - CURVE_LO) as usize];
                base + self.partial(base, math::exp2i(k), t)?
            }
            Side::Companion => {
                let k = math::ceil(lt) as i32;
                let base = self.table[(k - CURVE_LO) as usize];
                base + self.partial(base, t, math::exp2i(k))?
            }
        };
        let w = self.p.weight();
        let scale = self.p.n as f64 * math::exp(-w * math::ln(t));
        Ok(Estimate::new(integral.value * scale, integral.abs_err * scale))
    }

    /// `M(t)`.
    pub fn at(&self, t: f64) -> Result<Estimate> {
        if self.vanishing {
            check_radius(t)?;
            return Ok(Estimate::exact(0.0));
        }
        if !self.in_table(t) {
            check_radius(t)?;
            return mean_estimate(&self.f, &self.p, t, self.side, &self.spec);
        }
        Ok(root(self.power_at(t)?, self.p.r))
    }

    /// `ln M(t)` with the relative error of `M(t)`.
    pub fn ln_at(&self, t: f64) -> Result<LogValue> {
        check_radius(t)?;
        if self.vanishing {
            return Ok(LogValue { ln: f64::NEG_INFINITY, rel_err: 0.0 });
        }
        if !self.in_table(t) {
            return mean_log(&self.f, &self.p, t, self.side, &self.spec);
        }
        Ok(self.at(t)?.into())
    }

    fn in_table(&self, t: f64) -> bool {
        let lt = math::log2(t);
        lt > CURVE_LO as f64 && lt < CURVE_HI as f64
    }
}

/// A nonnegative quantity held as its logarithm, so that means far outside
/// the range of `f64` still enter outer integrals correctly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    /// `ln h`; `-∞` for `h = 0`, `+∞` for `h = ∞`.
    pub ln: f64,
    pub rel_err: f64,
}

impl LogValue {
    pub fn value(&self) -> f64 {
        math::exp(self.ln)
    }
}

impl From<Estimate> for LogValue {
    fn from(e: Estimate) -> Self {
        LogValue { ln: math::ln(e.value.abs()), rel_err: e.rel_err() }
    }
}

/// `∫_lo^hi t^{κ-1} h(t)^s dt` for a nonnegative `h` known with error;
/// `h` returns `None` where the point contributes nothing. The returned
/// error adds the inner errors, propagated to first order.
pub(crate) fn power_weighted_integral<H>(
    mut h: H,
    kappa: f64,
    s: f64,
    lo: f64,
    hi: f64,
    knots: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    H: FnMut(f64) -> Result<Option<LogValue>>,
{
    // (t, integrand, relative inner error) at every node, for the error term.
    let mut samples: Vec<(f64, f64, f64)> = Vec::new();
    let est = integrate(
        |t| {
            let Some(e) = h(t)? else {
                return Ok(0.0);
            };
            let v = if e.ln == f64::NEG_INFINITY && s > 0.0 {
                0.0
            } else {
                math::exp((kappa - 1.0) * math::ln(t) + s * e.ln)
            };
            if v > 0.0 && v.is_finite() {
                samples.push((t, v, e.rel_err));
            }
            Ok(v)
        },
        lo,
        hi,
        knots,
        spec,
    )?;
    Ok(Estimate::new(est.value, est.abs_err + 2.0 * s.abs() * inner_error(&mut samples)))
}

/// Trapezoid estimate of `∫ rel(t)·ψ(t) dt` over the quadrature nodes.
fn inner_error(samples: &mut [(f64, f64, f64)]) -> f64 {
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let first = samples.first().map_or(0.0, |p| p.0 * p.1 * p.2);
    samples.windows(2).fold(first, |acc, w| {
        let (t0, v0, e0) = w[0];
        let (t1, v1, e1) = w[1];
        acc + 0.5 * (t1 - t0) * (v0 * e0 + v1 * e1)
    })
}

fn outer_divergence(
    f: &RadialProfile,
    inner: &MeanParams,
    outer: &OuterParams,
    side: Side,
    full_space: bool,
) -> Result<()> {
    if let Some(g) = f.growth() {
        let m = mean_growth(g, inner, side);
        let kappa = inner.n as f64 * outer.gamma;
        let (zero, inf) = match (full_space, side) {
            (true, _) => (true, true),
            (false, Side::Central) => (true, false),
            (false, Side::Companion) => (false, true),
        };
        if weighted_finiteness(m, kappa, outer.s, zero, inf, 0.0) == Finiteness::Divergent {
            return Err(Error::divergence(format!("outer integral of the {side} mean of '{}' diverges", f.label())));
        }
    }
    Ok(())
}

/// `M_s(M_r(f, α), γ)(R)` (central) or `M*_s(M*_r(f, α), γ)(R)` (companion)
/// with its error. The inner means run at a tenth of the outer tolerance.
pub fn mixed_mean_estimate(
    f: &RadialProfile,
    inner: &MeanParams,
    outer: &OuterParams,
    radius: f64,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let curve = MeanCurve::new(f, inner, side, &spec.tightened(10.0))?;
    mixed_mean_from_curve(&curve, f, outer, radius, spec)
}

/// Outer mean of an already tabulated inner mean.
pub fn mixed_mean_from_curve(
    curve: &MeanCurve,
    f: &RadialProfile,
    outer: &OuterParams,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    check_radius(radius)?;
    let inner = *curve.params();
    let side = curve.side();
    outer_divergence(f, &inner, outer, side, false)?;
    outer_mean(|t| curve.ln_at(t), inner.n, outer, radius, side, f.breakpoints(), spec)
}

/// `[n ∫ v^{nγ-1} h(Rv)^s dv]^{1/s}` over `(0, 1)` (central) or `(1, ∞)`
/// (companion) for a nonnegative radial quantity `h` known with error.
pub(crate) fn outer_mean<H>(
    mut h: H,
    n: u32,
    outer: &OuterParams,
    radius: f64,
    side: Side,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    H: FnMut(f64) -> Result<LogValue>,
{
    let (lo, hi) = match side {
        Side::Central => (0.0, 1.0),
        Side::Companion => (1.0, f64::INFINITY),
    };
    let mut knots: Vec<f64> = breakpoints.iter().map(|b| b / radius).filter(|v| *v > lo && *v < hi).collect();
    if side == Side::Companion {
        knots.extend(dyadic_knots(lo, hi, 4));
    }
    let kappa = n as f64 * outer.gamma;
    let est =
        power_weighted_integral(|v| scaled(radius, v).map(&mut h).transpose(), kappa, outer.s, lo, hi, &knots, spec)?;
    let nf = n as f64;
    Ok(root(Estimate::new(nf * est.value, nf * est.abs_err), outer.s))
}

/// `M_s(M_r(f, α), γ)(R)` or its companion analogue.
pub fn mixed_mean(
    f: &RadialProfile,
    inner: &MeanParams,
    outer: &OuterParams,
    radius: f64,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(mixed_mean_estimate(f, inner, outer, radius, side, spec)?.value)
}

/// `∫_{R^n} |B(|y|)|^{γ-1} h(|y|)^s dy = n ω_n^γ ∫_0^∞ t^{nγ-1} h(t)^s dt`.
pub(crate) fn full_space_integral<H>(
    mut h: H,
    n: u32,
    outer: &OuterParams,
    knots: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    H: FnMut(f64) -> Result<LogValue>,
{
    let mut knots: Vec<f64> = knots.to_vec();
    knots.push(1.0);
    let nf = n as f64;
    let est = power_weighted_integral(|t| h(t).map(Some), nf * outer.gamma, outer.s, 0.0, f64::INFINITY, &knots, spec)?;
    let c = nf * math::pow(unit_ball_volume(n), outer.gamma);
    Ok(Estimate::new(c * est.value, c * est.abs_err))
}

/// `∫_{R^n} |B(|y|)|^{γ-1} M_r(f, α)(|y|)^s dy` (or with `M*_r`).
pub fn mean_weighted_integral(
    f: &RadialProfile,
    inner: &MeanParams,
    outer: &OuterParams,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    outer_divergence(f, inner, outer, side, true)?;
    let curve = MeanCurve::new(f, inner, side, &spec.tightened(10.0))?;
    full_space_integral(|t| curve.ln_at(t), inner.n, outer, f.breakpoints(), spec)
}

/// `∫_{R^n} |B(|y|)|^{γ-1}|f(y)|^s dy`.
pub fn weighted_integral(f: &RadialProfile, s: f64, gamma: f64, n: u32, spec: &QuadratureSpec) -> Result<Estimate> {
    let outer = OuterParams::new(s, gamma)?;
    if n == 0 {
        return Err(Error::param("dimension n must be at least 1"));
    }
    spec.validate()?;
    if s > 0.0 && f.is_zero() {
        return Ok(Estimate::exact(0.0));
    }
    if s < 0.0 {
        require_positive_on(f, 0.0, f64::INFINITY)?;
    }
    let nf = n as f64;
    if let Some(g) = f.growth() {
        if weighted_finiteness(g, nf * gamma, s, true, true, 0.0) == Finiteness::Divergent {
            return Err(Error::divergence(format!("weighted integral of '{}' diverges", f.label())));
        }
    }
    let sup = f.support();
    let knots: Vec<f64> = f.breakpoints().iter().copied().chain(core::iter::once(1.0)).collect();
    let est = integrate(|t| Ok(weighted_power(t, nf * outer.gamma, f.eval(t), s)), sup.start, sup.end, &knots, spec)?;
    let c = nf * math::pow(unit_ball_volume(n), gamma);
    Ok(Estimate::new(c * est.value, c * est.abs_err))
}

/// `(∫_{R^n} |B(|y|)|^{γ-1}|f(y)|^s dy)^{1/s}`, `s > 0`.
pub fn weighted_norm(f: &RadialProfile, s: f64, gamma: f64, n: u32, spec: &QuadratureSpec) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::param("weighted norm needs s > 0"));
    }
    Ok(root(weighted_integral(f, s, gamma, n, spec)?, s).value)
}
