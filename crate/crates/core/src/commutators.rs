//! Commutator means `M_{r,b}`, `M*_{r,b}` and bracket commutators.
//!
//! For radial `b` the commutator mean depends on `y` only through `R = |y|`:
//!
//! ```text
//! M_{r,b}(f,α)(R)^r = n ∫_0^1 v^{nα-1} |b(Rv) - b(R)|^r |g(Rv)|^r dv
//! ```
//!
//! The factor `|b(Rv) - b(R)|^r` has a kink wherever `b` crosses the level
//! `b(R)`, in particular at `v = 1`. Those points are located through the
//! symbol's level-set metadata and handed to the quadrature as kinks.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::means::{check_radius, log_radial_integral, mean_estimate, root, v_range, LogValue, MeanParams, Side};
use crate::profiles::{product_profile, RadialProfile};
use crate::quadrature::{dyadic_knots, Estimate, QuadratureSpec};

/// Level crossings are searched down to `R·2^{-LEVEL_SPAN}` (central) or up
/// to `R·2^{LEVEL_SPAN}` (companion).
const LEVEL_SPAN: i32 = 40;

/// A mean of order `r > 0` together with the symbol `b`.
#[derive(Clone, Debug)]
pub struct CommutatorParams {
    pub base: MeanParams,
    pub b: RadialProfile,
}

impl CommutatorParams {
    pub fn new(base: MeanParams, b: RadialProfile) -> Result<Self> {
        let cp = CommutatorParams { base, b };
        cp.validate()?;
        Ok(cp)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !(self.base.r > 0.0) {
            return Err(Error::param("commutator means need r > 0"));
        }
        Ok(())
    }
}

/// `M_{r,b}(f,α)(R)^r` (central) or `M*_{r,b}(f,α)(R)^r` (companion).
pub fn commutator_power(
    f: &RadialProfile,
    cp: &CommutatorParams,
    radius: f64,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    Ok(match commutator_parts(f, cp, radius, side, spec)? {
        None => Estimate::exact(0.0),
        Some((est, shift)) => {
            let scale = math::exp(shift);
            Estimate::new(est.value * scale, est.abs_err * scale)
        }
    })
}

/// The commutator mean through its logarithm, for values outside the range
/// of `f64`.
pub fn commutator_log(
    f: &RadialProfile,
    cp: &CommutatorParams,
    radius: f64,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<LogValue> {
    let r = cp.base.r;
    Ok(match commutator_parts(f, cp, radius, side, spec)? {
        None => Estimate::exact(0.0).into(),
        Some((est, _)) if est.value == 0.0 => est.into(),
        Some((est, shift)) => LogValue { ln: (shift + math::ln(est.value)) / r, rel_err: est.rel_err() / r },
    })
}

/// The integral as `exp(shift)·J`, or `None` when it is exactly zero.
fn commutator_parts(
    f: &RadialProfile,
    cp: &CommutatorParams,
    radius: f64,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<Option<(Estimate, f64)>> {
    cp.validate()?;
    spec.validate()?;
    check_radius(radius)?;
    if f.is_zero() || cp.b.is_zero() {
        return Ok(None);
    }
    let sup = f.support();
    let (lo, hi, range_knots) = v_range(sup.start, sup.end, radius, side);
    if !(hi > lo) {
        return Ok(None);
    }
    let b = &cp.b;
    let span = math::exp2i(LEVEL_SPAN);
    let (search_lo, search_hi) = match side {
        Side::Central => ((lo * radius).max(radius / span), hi * radius),
        Side::Companion => (lo * radius, (hi * radius).min(radius * span)),
    };
    let mut kinks: Vec<f64> =
        b.level_crossings(b.eval(radius), search_lo, search_hi).into_iter().map(|t| t / radius).collect();
    kinks.push(1.0);
    let mut knots: Vec<f64> = f
        .breakpoints()
        .iter()
        .chain(b.breakpoints().iter())
        .map(|t| t / radius)
        .filter(|v| *v > lo && *v < hi)
        .chain(range_knots)
        .collect();
    if side == Side::Companion && hi.is_infinite() {
        knots.extend(dyadic_knots(lo, hi, 4));
    }
    let ln_h = |t: f64| math::ln(b.difference(t, radius).abs()) + f.ln_abs(t);
    let r = cp.base.r;
    log_radial_integral(ln_h, cp.base.n, cp.base.weight(), r, radius, side, lo, hi, &knots, &kinks, spec)
        .map(Some)
        .map_err(|e| match e {
            Error::Divergence(m) => Error::Divergence(format!("{side} commutator mean of '{}': {m}", f.label())),
            Error::Unresolved(m) => Error::Unresolved(format!("{side} commutator mean of '{}': {m}", f.label())),
            other => other,
        })
}

/// Commutator mean with its error estimate.
pub fn commutator_estimate(
    f: &RadialProfile,
    cp: &CommutatorParams,
    radius: f64,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    Ok(root(commutator_power(f, cp, radius, side, spec)?, cp.base.r))
}

/// `M_{r,b}(f,α)(R)`.
pub fn commutator_mean(f: &RadialProfile, cp: &CommutatorParams, radius: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(commutator_estimate(f, cp, radius, Side::Central, spec)?.value)
}

/// `M*_{r,b}(f,α)(R)`.
pub fn companion_commutator_mean(
    f: &RadialProfile,
    cp: &CommutatorParams,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(commutator_estimate(f, cp, radius, Side::Companion, spec)?.value)
}

/// `|M_r(bf,α)(R) - b(R)·M_r(f,α)(R)|` (or with companion means), with the
/// absolute error of the difference.
pub fn bracket_estimate(
    f: &RadialProfile,
    cp: &CommutatorParams,
    radius: f64,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    cp.validate()?;
    check_radius(radius)?;
    let bf = product_profile(&cp.b, f);
    let with_b = mean_estimate(&bf, &cp.base, radius, side, spec)?;
    let plain = mean_estimate(f, &cp.base, radius, side, spec)?;
    let br = cp.b.eval(radius);
    let value = (with_b.value - br * plain.value).abs();
    Ok(Estimate::new(value, with_b.abs_err + br.abs() * plain.abs_err))
}

/// `|[M_r(·,α), b] f(R)|` (central) or `|[M*_r(·,α), b] f(R)|` (companion).
pub fn bracket_commutator(
    f: &RadialProfile,
    cp: &CommutatorParams,
    radius: f64,
    spec: &QuadratureSpec,
    side: Side,
) -> Result<f64> {
    Ok(bracket_estimate(f, cp, radius, side, spec)?.value)
}
