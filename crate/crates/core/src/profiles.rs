//! Radial profiles `g(t)`, `t > 0`, standing for `f(x) = g(|x|)` on `R^n`.
//!
//! A profile carries the metadata the rest of the crate relies on instead of
//! guessing: its support, whether it is strictly positive there, whether it
//! is locally bounded (including at the origin), power-law bounds near `0`
//! and `∞`, a global bound on `|g|` when one is known, the points where it
//! is not smooth, and optionally the solutions of `g(t) = c`.
//!
//! Corpus entries pair a profile with closed forms for its means when they
//! exist. They are addressable by labels such as `power:beta=1:a=0:b=inf`
//! (see [`parse_label`]).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;
use crate::means::{unit_ball_volume, MeanParams};

pub type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `(level, lo, hi) ↦` every `t ∈ [lo, hi]` with `g(t) = level`, ascending.
/// `(s, t) ↦ g(s) - g(t)` for `s, t` in the support.
pub type DiffFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type LevelSetFn = Arc<dyn Fn(f64, f64, f64) -> Vec<f64> + Send + Sync>;

/// Closed interval `[start, end]` with `0 ≤ start < end ≤ ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Support {
    pub start: f64,
    pub end: f64,
}

impl Support {
    pub const FULL: Support = Support { start: 0.0, end: f64::INFINITY };

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }

    /// True if `[lo, hi]` lies inside the support (touching `0` counts when
    /// the support starts at `0`).
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.start <= lo && self.end >= hi
    }
}

/// Power-law envelope: `|g(t)| ≤ C·t^origin` near `0` and `|g(t)| ≤ C·t^infinity`
/// for large `t`. `origin = +∞` means `g` vanishes near `0`; `infinity = -∞`
/// means it vanishes near `∞`. For strictly positive profiles the orders are
/// exact (bounded above and below by multiples of the power).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Growth {
    pub origin: f64,
    pub infinity: f64,
}

#[derive(Clone)]
pub struct RadialProfile {
    eval: EvalFn,
    ln_abs: Option<EvalFn>,
    diff: Option<DiffFn>,
    support: Support,
    strictly_positive: bool,
    locally_bounded: bool,
    origin_exponent: Option<f64>,
    decay_exponent: Option<f64>,
    sup_abs: Option<f64>,
    breakpoints: Vec<f64>,
    level_set: Option<LevelSetFn>,
    label: String,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("strictly_positive", &self.strictly_positive)
            .field("locally_bounded", &self.locally_bounded)
            .field("origin_exponent", &self.origin_exponent)
            .field("decay_exponent", &self.decay_exponent)
            .field("sup_abs", &self.sup_abs)
            .finish()
    }
}

impl RadialProfile {
    /// A profile with full support and no metadata; refine it with the
    /// `with_*` builders.
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RadialProfile {
            eval: Arc::new(eval),
            ln_abs: None,
            diff: None,
            support: Support::FULL,
            strictly_positive: false,
            locally_bounded: false,
            origin_exponent: None,
            decay_exponent: None,
            sup_abs: None,
            breakpoints: Vec::new(),
            level_set: None,
            label: label.into(),
        }
    }

    /// Direct evaluation of `ln|g|`, for profiles whose values leave the
    /// range of `f64` while their logarithm does not.
    pub fn with_ln_abs(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.ln_abs = Some(Arc::new(f));
        self
    }

    /// Evaluation of `g(s) - g(t)` that avoids cancellation when the two
    /// values are close.
    pub fn with_difference(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.diff = Some(Arc::new(f));
        self
    }

    pub fn with_support(mut self, start: f64, end: f64) -> Self {
        self.support = Support { start, end };
        self
    }

    pub fn with_strict_positivity(mut self, yes: bool) -> Self {
        self.strictly_positive = yes;
        self
    }

    pub fn with_local_bound(mut self, yes: bool) -> Self {
        self.locally_bounded = yes;
        self
    }

    pub fn with_origin_exponent(mut self, e: f64) -> Self {
        self.origin_exponent = Some(e);
        self
    }

    pub fn with_decay_exponent(mut self, d: f64) -> Self {
        self.decay_exponent = Some(d);
        self
    }

    pub fn with_sup_bound(mut self, m: f64) -> Self {
        self.sup_abs = Some(m);
        self
    }

    pub fn with_breakpoints(mut self, mut pts: Vec<f64>) -> Self {
        pts.retain(|p| *p > 0.0 && p.is_finite());
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        self.breakpoints = pts;
        self
    }

    pub fn with_level_set(mut self, f: impl Fn(f64, f64, f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.level_set = Some(Arc::new(f));
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `g(t)`; zero outside the support and for `t ≤ 0`.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if t > 0.0 && self.support.contains(t) {
            (self.eval)(t)
        } else {
            0.0
        }
    }

    /// `ln|g(t)|`; `-∞` where `g` vanishes.
    #[inline]
    pub fn ln_abs(&self, t: f64) -> f64 {
        if !(t > 0.0 && self.support.contains(t)) {
            return f64::NEG_INFINITY;
        }
        match &self.ln_abs {
            Some(l) => l(t),
            None => math::ln((self.eval)(t).abs()),
        }
    }

    /// `g(s) - g(t)`.
    #[inline]
    pub fn difference(&self, s: f64, t: f64) -> f64 {
        match &self.diff {
            Some(d) if s > 0.0 && t > 0.0 && self.support.contains(s) && self.support.contains(t) => d(s, t),
            _ => self.eval(s) - self.eval(t),
        }
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.strictly_positive
    }

    pub fn is_locally_bounded(&self) -> bool {
        self.locally_bounded
    }

    pub fn decay_exponent(&self) -> Option<f64> {
        self.decay_exponent
    }

    pub fn origin_exponent(&self) -> Option<f64> {
        self.origin_exponent
    }

    /// Known bound on `sup |g|`.
    pub fn sup_bound(&self) -> Option<f64> {
        self.sup_abs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Points where `g` may fail to be smooth, including finite support ends.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Envelope exponents, when both ends are known.
    pub fn growth(&self) -> Option<Growth> {
        let origin = if self.support.start > 0.0 { f64::INFINITY } else { self.origin_exponent? };
        let infinity = if self.support.end.is_finite() { f64::NEG_INFINITY } else { self.decay_exponent? };
        Some(Growth { origin, infinity })
    }

    /// Solutions of `g(t) = level` in `[lo, hi]`, when the profile knows them.
    pub fn level_crossings(&self, level: f64, lo: f64, hi: f64) -> Vec<f64> {
        match &self.level_set {
            Some(f) if hi > lo => f(level, lo, hi),
            _ => Vec::new(),
        }
    }

    /// True if `g` is identically zero as far as the metadata can tell.
    pub fn is_zero(&self) -> bool {
        self.sup_abs == Some(0.0)
    }
}

/// Closed forms available for a corpus entry: `coef·t^beta` on `[a, b]`,
/// zero elsewhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedForm {
    Power { coef: f64, beta: f64, a: f64, b: f64 },
}

impl ClosedForm {
    /// `∫ t^{weight-1}|g(t)|^order dt` over `[lo, hi] ∩ [a, b]`; `None` when
    /// the integral diverges.
    pub fn power_integral(&self, weight: f64, order: f64, lo: f64, hi: f64) -> Option<f64> {
        let ClosedForm::Power { coef, beta, a, b } = *self;
        let l = lo.max(a);
        let h = hi.min(b);
        if !(h > l) {
            return Some(0.0);
        }
        if coef == 0.0 {
            return if order > 0.0 { Some(0.0) } else { None };
        }
        let q = weight + beta * order;
        if (l == 0.0 && q <= 0.0) || (h.is_infinite() && q >= 0.0) {
            return None;
        }
        let base = if q == 0.0 {
            math::ln(h / l)
        } else {
            let hq = if h.is_infinite() { 0.0 } else { math::pow(h, q) };
            let lq = if l == 0.0 { 0.0 } else { math::pow(l, q) };
            (hq - lq) / q
        };
        Some(math::pow(coef.abs(), order) * base)
    }

    fn covers(&self, lo: f64, hi: f64) -> bool {
        let ClosedForm::Power { coef, a, b, .. } = *self;
        coef != 0.0 && a <= lo && b >= hi
    }

    /// `M_r(g, α)(R) = (n R^{-nα} ∫_0^R t^{nα-1}|g|^r dt)^{1/r}`.
    pub fn central_mean(&self, p: &MeanParams, radius: f64) -> Option<f64> {
        if p.r < 0.0 && !self.covers(0.0, radius) {
            return None;
        }
        let w = p.n as f64 * p.alpha;
        let j = self.power_integral(w, p.r, 0.0, radius)?;
        Some(math::pow(p.n as f64 * math::pow(radius, -w) * j, 1.0 / p.r))
    }

    /// `M*_r(g, α)(R) = (n R^{-nα} ∫_R^∞ t^{nα-1}|g|^r dt)^{1/r}`.
    pub fn companion_mean(&self, p: &MeanParams, radius: f64) -> Option<f64> {
        if p.r < 0.0 && !self.covers(radius, f64::INFINITY) {
            return None;
        }
        let w = p.n as f64 * p.alpha;
        let j = self.power_integral(w, p.r, radius, f64::INFINITY)?;
        Some(math::pow(p.n as f64 * math::pow(radius, -w) * j, 1.0 / p.r))
    }

    /// `∫_{R^n} |B(|y|)|^{γ-1}|g|^s dy = n ω_n^γ ∫_0^∞ t^{nγ-1}|g|^s dt`.
    pub fn weighted_integral(&self, s: f64, gamma: f64, n: u32) -> Option<f64> {
        let nf = n as f64;
        let j = self.power_integral(nf * gamma, s, 0.0, f64::INFINITY)?;
        Some(nf * math::pow(unit_ball_volume(n), gamma) * j)
    }

    /// `(∫_{R^n} |B(|y|)|^{γ-1}|g|^s dy)^{1/s}`.
    pub fn weighted_norm(&self, s: f64, gamma: f64, n: u32) -> Option<f64> {
        Some(math::pow(self.weighted_integral(s, gamma, n)?, 1.0 / s))
    }

    /// Ball average `|B(R)|^{-1}∫_{B(R)} g = n R^{-n} ∫_0^R t^{n-1} g dt`.
    pub fn ball_average(&self, n: u32, radius: f64) -> Option<f64> {
        let ClosedForm::Power { coef, .. } = *self;
        let nf = n as f64;
        let j = self.power_integral(nf, 1.0, 0.0, radius)?;
        Some(coef.signum() * nf * math::pow(radius, -nf) * j)
    }
}

/// A profile together with whatever closed forms are known for it.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub profile: RadialProfile,
    pub closed_form: Option<ClosedForm>,
}

impl CorpusEntry {
    fn plain(profile: RadialProfile) -> Self {
        CorpusEntry { profile, closed_form: None }
    }
}

fn check_range(a: f64, b: f64) -> Result<()> {
    if a >= 0.0 && b > a && !b.is_nan() {
        Ok(())
    } else {
        Err(Error::param(format!("support [{a}, {b}] must satisfy 0 <= a < b")))
    }
}

/// `c·t^β` on `[a, b]`, zero elsewhere, with its closed-form means.
fn scaled_power(label: String, coef: f64, beta: f64, a: f64, b: f64) -> Result<CorpusEntry> {
    check_range(a, b)?;
    if coef == 0.0 {
        return Ok(CorpusEntry { profile: zero_profile(), closed_form: Some(ClosedForm::Power { coef, beta, a, b }) });
    }
    let eval = move |t: f64| {
        if beta == 0.0 {
            coef
        } else if beta == 1.0 {
            coef * t
        } else {
            coef * math::pow(t, beta)
        }
    };
    let sup = if beta == 0.0 {
        Some(coef.abs())
    } else if beta > 0.0 && b.is_finite() {
        Some(coef.abs() * math::pow(b, beta))
    } else if beta < 0.0 && a > 0.0 {
        Some(coef.abs() * math::pow(a, beta))
    } else {
        None
    };
    let ln_coef = math::ln(coef.abs());
    let mut profile = RadialProfile::new(label, eval)
        .with_ln_abs(move |t| if beta == 0.0 { ln_coef } else { ln_coef + beta * math::ln(t) })
        .with_difference(move |s, t| eval(t) * math::exp_m1(beta * math::ln(s / t)))
        .with_support(a, b)
        .with_strict_positivity(coef > 0.0)
        .with_local_bound(beta >= 0.0 || a > 0.0)
        .with_origin_exponent(beta)
        .with_decay_exponent(beta)
        .with_breakpoints(alloc::vec![a, b]);
    if let Some(m) = sup {
        profile = profile.with_sup_bound(m);
    }
    Ok(CorpusEntry { profile, closed_form: Some(ClosedForm::Power { coef, beta, a, b }) })
}

/// `g(t) = t^β` on `[a, b]` (`b` may be infinite).
pub fn power_profile(beta: f64, a: f64, b: f64) -> Result<CorpusEntry> {
    scaled_power(format!("power:beta={beta}:a={a}:b={b}"), 1.0, beta, a, b)
}

/// Characteristic function of the annulus `a ≤ t ≤ b`.
pub fn indicator_profile(a: f64, b: f64) -> Result<CorpusEntry> {
    if !b.is_finite() {
        return Err(Error::param("indicator needs a finite outer radius"));
    }
    scaled_power(format!("indicator:a={a}:b={b}"), 1.0, 0.0, a, b)
}

/// `g ≡ c`.
pub fn constant_profile(c: f64) -> CorpusEntry {
    scaled_power(format!("const:c={c}"), c, 0.0, 0.0, f64::INFINITY).expect("full support is valid")
}

pub fn zero_profile() -> RadialProfile {
    RadialProfile::new("zero", |_| 0.0)
        .with_local_bound(true)
        .with_origin_exponent(f64::INFINITY)
        .with_decay_exponent(f64::NEG_INFINITY)
        .with_sup_bound(0.0)
}

/// `g(t) = A·sin(ln t + φ)`: bounded by `|A|`, oscillating on every scale.
pub fn bounded_oscillator(amplitude: f64, phase: f64) -> RadialProfile {
    if amplitude == 0.0 {
        return zero_profile();
    }
    let label = format!("osc:amp={amplitude}:phase={phase}");
    RadialProfile::new(label, move |t| amplitude * math::sin(math::ln(t) + phase))
        .with_difference(move |s, t| {
            let (a, b) = (math::ln(s), math::ln(t));
            2.0 * amplitude * math::cos(0.5 * (a + b) + phase) * math::sin(0.5 * math::ln(s / t))
        })
        .with_local_bound(true)
        .with_origin_exponent(0.0)
        .with_decay_exponent(0.0)
        .with_sup_bound(amplitude.abs())
        .with_level_set(move |level, lo, hi| oscillator_crossings(amplitude, phase, level, lo, hi))
}

fn oscillator_crossings(amplitude: f64, phase: f64, level: f64, lo: f64, hi: f64) -> Vec<f64> {
    let y = level / amplitude;
    let mut out = Vec::new();
    if !(y.abs() <= 1.0) || !(lo > 0.0) || !(hi > lo) {
        return out;
    }
    let theta_lo = math::ln(lo) + phase;
    let theta_hi = if hi.is_finite() { math::ln(hi) + phase } else { theta_lo + 2000.0 * PI };
    let base = math::asin(y);
    for root in [base, PI - base] {
        let k0 = math::ceil((theta_lo - root) / (2.0 * PI)) as i64;
        let mut k = k0;
        loop {
            let theta = root + 2.0 * PI * k as f64;
            if theta > theta_hi || out.len() > 4096 {
                break;
            }
            out.push(math::exp(theta - phase));
            k += 1;
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// `g(t) = t^β (1 + t)^{-κ}`: strictly positive, order `β` at `0` and
/// `β - κ` at `∞`.
pub fn bump_profile(beta: f64, kappa: f64) -> RadialProfile {
    let label = format!("bump:beta={beta}:kappa={kappa}");
    let mut p = RadialProfile::new(label, move |t| {
        if t > 1.0 {
            math::exp(beta * math::ln(t) - kappa * math::ln_1p(t))
        } else {
            math::pow(t, beta) * math::pow(1.0 + t, -kappa)
        }
    })
    .with_ln_abs(move |t| beta * math::ln(t) - kappa * math::ln_1p(t))
    .with_strict_positivity(true)
    .with_local_bound(beta >= 0.0)
    .with_origin_exponent(beta)
    .with_decay_exponent(beta - kappa);
    if beta >= 0.0 && kappa >= beta {
        let sup = if beta == 0.0 || kappa == beta {
            1.0
        } else {
            let t = beta / (kappa - beta);
            math::pow(t, beta) * math::pow(1.0 + t, -kappa)
        };
        p = p.with_sup_bound(sup);
    }
    p
}

/// Smoothed indicator of `[0, radius]`: `g(t) = 1 / (1 + (t/radius)^k)`.
pub fn smooth_indicator(radius: f64, sharpness: f64) -> Result<RadialProfile> {
    if !(radius > 0.0 && sharpness > 0.0) {
        return Err(Error::param("smooth indicator needs radius > 0 and k > 0"));
    }
    let label = format!("smooth:radius={radius}:k={sharpness}");
    Ok(RadialProfile::new(label, move |t| 1.0 / (1.0 + math::pow(t / radius, sharpness)))
        .with_difference(move |s, t| smooth_difference(radius, sharpness, s, t))
        .with_strict_positivity(true)
        .with_local_bound(true)
        .with_origin_exponent(0.0)
        .with_decay_exponent(-sharpness)
        .with_sup_bound(1.0)
        .with_level_set(move |level, lo, hi| {
            if !(level > 0.0 && level < 1.0) {
                return Vec::new();
            }
            let t = radius * math::pow(1.0 / level - 1.0, 1.0 / sharpness);
            if t >= lo && t <= hi {
                alloc::vec![t]
            } else {
                Vec::new()
            }
        }))
}

/// `1/(1+x) - 1/(1+y)` with `x = (s/R)^k`, `y = (t/R)^k`, written in terms of
/// `y` or `1/y` so the difference keeps its relative accuracy.
fn smooth_difference(radius: f64, k: f64, s: f64, t: f64) -> f64 {
    let q = k * math::ln(s / t);
    let (x, y) = (math::pow(s / radius, k), math::pow(t / radius, k));
    let out = if y <= 1.0 {
        -y * math::exp_m1(q) / ((1.0 + x) * (1.0 + y))
    } else {
        let (u, v) = (1.0 / x, 1.0 / y);
        v * math::exp_m1(-q) / ((1.0 + u) * (1.0 + v))
    };
    if out.is_finite() {
        out
    } else {
        1.0 / (1.0 + x) - 1.0 / (1.0 + y)
    }
}

/// Pointwise scaling `g ↦ c·g`.
pub fn scale_profile(p: &RadialProfile, c: f64) -> RadialProfile {
    if c == 0.0 {
        return zero_profile();
    }
    let inner = p.clone();
    let mut out = RadialProfile {
        eval: Arc::new(move |t| c * (inner.eval)(t)),
        ln_abs: {
            let inner = p.clone();
            let ln_c = math::ln(c.abs());
            Some(Arc::new(move |t| ln_c + inner.ln_abs(t)))
        },
        diff: {
            let inner = p.clone();
            Some(Arc::new(move |s, t| c * inner.difference(s, t)))
        },
        strictly_positive: p.strictly_positive && c > 0.0,
        sup_abs: p.sup_abs.map(|m| m * c.abs()),
        level_set: None,
        label: format!("scale({c},{})", p.label),
        ..p.clone()
    };
    if let Some(ls) = p.level_set.clone() {
        out.level_set = Some(Arc::new(move |level, lo, hi| ls(level / c, lo, hi)));
    }
    out
}

/// Dilation `g ↦ g(λ·)`; the support and breakpoints shrink by `λ`.
pub fn dilate_profile(p: &RadialProfile, lambda: f64) -> Result<RadialProfile> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::param("dilation factor must be positive"));
    }
    let inner = p.clone();
    let mut out = RadialProfile {
        eval: Arc::new(move |t| (inner.eval)(lambda * t)),
        ln_abs: {
            let inner = p.clone();
            Some(Arc::new(move |t| inner.ln_abs(lambda * t)))
        },
        diff: {
            let inner = p.clone();
            Some(Arc::new(move |s, t| inner.difference(lambda * s, lambda * t)))
        },
        support: Support { start: p.support.start / lambda, end: p.support.end / lambda },
        breakpoints: p.breakpoints.iter().map(|b| b / lambda).collect(),
        level_set: None,
        label: format!("dilate({lambda},{})", p.label),
        ..p.clone()
    };
    if let Some(ls) = p.level_set.clone() {
        out.level_set = Some(Arc::new(move |level, lo, hi| {
            ls(level, lo * lambda, hi * lambda).into_iter().map(|t| t / lambda).collect()
        }));
    }
    Ok(out)
}

/// Pointwise product `g·h`.
pub fn product_profile(p: &RadialProfile, q: &RadialProfile) -> RadialProfile {
    let (pa, qa) = (p.clone(), q.clone());
    let start = p.support.start.max(q.support.start);
    let end = p.support.end.min(q.support.end);
    let mut out = RadialProfile::new(format!("({})*({})", p.label, q.label), move |t| (pa.eval)(t) * (qa.eval)(t))
        .with_ln_abs({
            let (pa, qa) = (p.clone(), q.clone());
            move |t| pa.ln_abs(t) + qa.ln_abs(t)
        })
        .with_support(start, end.max(start))
        .with_strict_positivity(p.strictly_positive && q.strictly_positive)
        .with_local_bound(p.locally_bounded && q.locally_bounded)
        .with_breakpoints(p.breakpoints.iter().chain(q.breakpoints.iter()).copied().collect());
    if let (Some(a), Some(b)) = (p.origin_exponent, q.origin_exponent) {
        out = out.with_origin_exponent(a + b);
    }
    if let (Some(a), Some(b)) = (p.decay_exponent, q.decay_exponent) {
        out = out.with_decay_exponent(a + b);
    }
    if let (Some(a), Some(b)) = (p.sup_abs, q.sup_abs) {
        out = out.with_sup_bound(a * b);
    }
    out
}

fn parse_number(key: &str, value: &str) -> Result<f64> {
    value.trim().parse::<f64>().map_err(|_| Error::Label(format!("{key}={value} is not a number")))
}

struct Fields<'a> {
    kind: &'a str,
    pairs: Vec<(&'a str, f64)>,
}

impl<'a> Fields<'a> {
    fn parse(label: &'a str) -> Result<Self> {
        let mut parts = label.trim().split(':');
        let kind = parts.next().unwrap_or("").trim();
        let mut pairs = Vec::new();
        for part in parts {
            let (k, v) =
                part.split_once('=').ok_or_else(|| Error::Label(format!("expected key=value, found '{part}'")))?;
            let k = k.trim();
            if pairs.iter().any(|(seen, _)| *seen == k) {
                return Err(Error::Label(format!("duplicate key '{k}'")));
            }
            pairs.push((k, parse_number(k, v)?));
        }
        Ok(Fields { kind, pairs })
    }

    fn allow(&self, keys: &[&str]) -> Result<()> {
        for (k, _) in &self.pairs {
            if !keys.contains(k) {
                return Err(Error::Label(format!("unknown key '{k}' for '{}'", self.kind)));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<f64> {
        self.pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn require(&self, key: &str) -> Result<f64> {
        self.get(key).ok_or_else(|| Error::Label(format!("'{}' needs {key}=...", self.kind)))
    }
}

/// Resolves a corpus label.
///
/// | label | profile |
/// |---|---|
/// | `power:beta=B[:a=A][:b=B]` | `t^B` on `[A, B]` (defaults `0`, `inf`) |
/// | `indicator:[a=A:]b=B` | indicator of `[A, B]` |
/// | `const:c=C` | `C` |
/// | `osc[:amp=A][:phase=P]` | `A·sin(ln t + P)` |
/// | `bump:beta=B:kappa=K` | `t^B (1+t)^{-K}` |
/// | `smooth[:radius=R][:k=K]` | `1/(1 + (t/R)^K)` |
/// | `zero` | `0` |
pub fn parse_label(label: &str) -> Result<CorpusEntry> {
    let f = Fields::parse(label)?;
    match f.kind {
        "power" => {
            f.allow(&["beta", "a", "b"])?;
            power_profile(f.require("beta")?, f.get("a").unwrap_or(0.0), f.get("b").unwrap_or(f64::INFINITY))
        }
        "indicator" => {
            f.allow(&["a", "b"])?;
            indicator_profile(f.get("a").unwrap_or(0.0), f.require("b")?)
        }
        "const" => {
            f.allow(&["c"])?;
            Ok(constant_profile(f.require("c")?))
        }
        "osc" => {
            f.allow(&["amp", "phase"])?;
            let amp = f.get("amp").unwrap_or(1.0);
            let phase = f.get("phase").unwrap_or(0.0);
            Ok(CorpusEntry::plain(bounded_oscillator(amp, phase)))
        }
        "bump" => {
            f.allow(&["beta", "kappa"])?;
            Ok(CorpusEntry::plain(bump_profile(f.require("beta")?, f.require("kappa")?)))
        }
        "smooth" => {
            f.allow(&["radius", "k"])?;
            let p = smooth_indicator(f.get("radius").unwrap_or(1.0), f.get("k").unwrap_or(4.0))?;
            Ok(CorpusEntry::plain(p))
        }
        "zero" => {
            f.allow(&[])?;
            Ok(CorpusEntry::plain(zero_profile()))
        }
        other => Err(Error::Label(format!("unknown profile kind '{other}'"))),
    }
    .map(|mut e| {
        e.profile.label = label.trim().to_string();
        e
    })
}
