//! Globally adaptive Gauss–Kronrod (10/21) quadrature on `[lo, hi] ⊂ [0, ∞]`.
//!
//! The range is first cut at caller-supplied knots. A segment touching the
//! origin is integrated in the variable `w` with `t = a·exp(-w/(1-w))`,
//! which turns a power singularity `t^{p-1}` into exponential decay. A
//! segment reaching infinity uses the inversion `t = a/u` followed by the
//! same exponential map, i.e. `t = a·exp(w/(1-w))`. Segments bounded by a
//! kink of the integrand (a point where it is only continuous, such as
//! `|b(t) - c|^r` at a crossing) are graded with the cubic map
//! `t = a + (b-a)(3w² - 2w³)` so the kink lands on a smooth endpoint.
//!
//! After the initial cut, the panel with the largest error estimate is
//! bisected (in `w`) until the summed error meets the tolerance.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::math;

/// How an infinite upper limit is treated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailPolicy {
    /// Bounded supports are integrated exactly to their end. Otherwise the
    /// tail `(a, ∞)` is mapped onto a finite interval and resolved
    /// adaptively, so the decay of the integrand bounds the truncation.
    DecayBound,
    /// Every infinite upper limit is replaced by the given radius.
    HardCutoff(f64),
}

/// Tolerances and limits for one adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Subdivision budget. An integral that runs out of panels within a
    /// factor 1000 of the tolerance is returned with its error estimate;
    /// otherwise it is reported as divergent.
    pub max_panels: usize,
    pub tail: TailPolicy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-11, abs_tol: 1e-300, max_panels: 4000, tail: TailPolicy::DecayBound }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_panels: usize, tail: TailPolicy) -> Result<Self> {
        let spec = QuadratureSpec { rel_tol, abs_tol, max_panels, tail };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::param("rel_tol must be positive"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::param("abs_tol must be positive"));
        }
        if self.max_panels < 1 {
            return Err(Error::param("max_panels must be at least 1"));
        }
        if let TailPolicy::HardCutoff(c) = self.tail {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::param("cutoff radius must be positive and finite"));
            }
        }
        Ok(())
    }

    /// Same spec with the relative tolerance divided by `factor`, floored
    /// just above double-precision roundoff.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureSpec { rel_tol: (self.rel_tol / factor).max(2e-14), ..*self }
    }

    pub fn with_rel_tol(&self, rel_tol: f64) -> Self {
        QuadratureSpec { rel_tol, ..*self }
    }
}

/// An integral value together with its estimated absolute error.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_err: f64,
}

impl Estimate {
    pub fn new(value: f64, abs_err: f64) -> Self {
        Estimate { value, abs_err }
    }

    pub fn exact(value: f64) -> Self {
        Estimate { value, abs_err: 0.0 }
    }

    /// Relative error; zero for an exact zero, infinite for an uncertain zero.
    pub fn rel_err(&self) -> f64 {
        if self.abs_err == 0.0 {
            0.0
        } else if self.value == 0.0 {
            f64::INFINITY
        } else {
            self.abs_err / self.value.abs()
        }
    }

    /// Builds an estimate from a value and a relative error.
    pub fn with_rel_err(value: f64, rel_err: f64) -> Self {
        Estimate { value, abs_err: value.abs() * rel_err }
    }
}

impl core::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate { value: self.value + rhs.value, abs_err: self.abs_err + rhs.abs_err }
    }
}

#[derive(Clone, Copy, Debug)]
enum Map {
    Linear { a: f64, b: f64 },
    Graded { a: f64, b: f64 },
    Origin { anchor: f64 },
    Tail { anchor: f64 },
}

impl Map {
    /// Point and Jacobian for the parameter `w ∈ (0, 1)`. `None` when the
    /// point under- or overflows; the integrand is taken to vanish there.
    #[inline]
    fn apply(&self, w: f64) -> Option<(f64, f64)> {
        let (t, jac) = match *self {
            Map::Linear { a, b } => (a + (b - a) * w, b - a),
            Map::Graded { a, b } => {
                let phi = w * w * (3.0 - 2.0 * w);
                (a + (b - a) * phi, (b - a) * 6.0 * w * (1.0 - w))
            }
            Map::Origin { anchor } => {
                let om = 1.0 - w;
                let t = anchor * math::exp(-w / om);
                (t, t / (om * om))
            }
            Map::Tail { anchor } => {
                let om = 1.0 - w;
                let t = anchor * math::exp(w / om);
                (t, t / (om * om))
            }
        };
        if t > 0.0 && t.is_finite() && jac.is_finite() {
            Some((t, jac))
        } else {
            None
        }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    map: Map,
    w0: f64,
    w1: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn eval_mapped<F>(f: &mut F, map: &Map, w: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    match map.apply(w) {
        None => Ok(0.0),
        Some((t, jac)) => {
            let v = f(t)?;
            if !v.is_finite() {
                return Err(Error::divergence(format!("integrand is not finite at t = {t:e}")));
            }
            if v == 0.0 {
                Ok(0.0)
            } else {
                Ok(v * jac)
            }
        }
    }
}

/// As [`eval_mapped`] for an integrand given by its logarithm; the Jacobian
/// is folded in before exponentiating.
fn eval_mapped_ln<F>(f: &mut F, map: &Map, w: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    match map.apply(w) {
        None => Ok(0.0),
        Some((t, jac)) => {
            let lv = f(t)?;
            if lv == f64::NEG_INFINITY {
                return Ok(0.0);
            }
            let v = math::exp(lv + math::ln(jac));
            if !v.is_finite() {
                return Err(Error::divergence(format!("integrand is not finite at t = {t:e}")));
            }
            Ok(v)
        }
    }
}

fn gauss_kronrod<E>(ev: &mut E, map: Map, w0: f64, w1: f64) -> Result<Panel>
where
    E: FnMut(&Map, f64) -> Result<f64>,
{
    let center = 0.5 * (w0 + w1);
    let half = 0.5 * (w1 - w0);
    let fc = ev(&map, center)?;
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = fc.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = ev(&map, center - x)?;
        let f2 = ev(&map, center + x)?;
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        fv1[j] = f1;
        fv2[j] = f2;
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * math::pow(200.0 * err / res_asc, 1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() || !err.is_finite() {
        return Err(Error::divergence("quadrature panel overflowed"));
    }
    Ok(Panel { map, w0, w1, value, err })
}

/// `∫_lo^hi f(t) dt` with `0 ≤ lo < hi ≤ ∞`, the range first cut at `knots`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, knots: &[f64], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_with_kinks(f, lo, hi, knots, &[], spec)
}

/// As [`integrate`], additionally grading every segment that ends at one of
/// `kinks`.
pub fn integrate_with_kinks<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    knots: &[f64],
    kinks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    adaptive(|m: &Map, w| eval_mapped(&mut f, m, w), lo, hi, knots, kinks, spec)
}

/// `∫_lo^hi exp(ln_f(t)) dt` for an integrand known through its logarithm,
/// which may over- or underflow where the mapped integrand does not.
/// `kinks` are handled as in [`integrate_with_kinks`].
pub fn integrate_ln<F>(
    mut ln_f: F,
    lo: f64,
    hi: f64,
    knots: &[f64],
    kinks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    adaptive(|m: &Map, w| eval_mapped_ln(&mut ln_f, m, w), lo, hi, knots, kinks, spec)
}

fn adaptive<E>(mut f: E, lo: f64, hi: f64, knots: &[f64], kinks: &[f64], spec: &QuadratureSpec) -> Result<Estimate>
where
    E: FnMut(&Map, f64) -> Result<f64>,
{
    let hi = match spec.tail {
        TailPolicy::HardCutoff(c) if hi.is_infinite() => c,
        _ => hi,
    };
    if !(lo >= 0.0) || hi.is_nan() {
        return Err(Error::param("integration range must lie in [0, inf]"));
    }
    if hi <= lo {
        return Ok(Estimate::exact(0.0));
    }

    let mut points: Vec<(f64, bool)> = knots
        .iter()
        .map(|&k| (k, false))
        .chain(kinks.iter().map(|&k| (k, true)))
        .filter(|&(k, _)| k > lo && k < hi && k.is_finite())
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cuts: Vec<(f64, bool)> = Vec::with_capacity(points.len() + 3);
    let lo_kink = kinks.contains(&lo);
    let hi_kink = kinks.contains(&hi);
    cuts.push((lo, lo_kink));
    for (p, kink) in points {
        let last = cuts.last_mut().unwrap();
        if (p - last.0).abs() <= 1e-14 * p {
            last.1 |= kink;
        } else {
            cuts.push((p, kink));
        }
    }
    if lo == 0.0 && hi.is_infinite() && cuts.len() == 1 {
        cuts.push((1.0, false));
    }
    if hi.is_finite() && (hi - cuts.last().unwrap().0).abs() <= 1e-14 * hi && cuts.len() > 1 {
        cuts.pop();
    }
    cuts.push((hi, hi_kink));

    let mut heap = BinaryHeap::with_capacity(2 * cuts.len());
    for pair in cuts.windows(2) {
        let (a, ka) = pair[0];
        let (b, kb) = pair[1];
        let map = if a == 0.0 {
            Map::Origin { anchor: b }
        } else if b.is_infinite() {
            Map::Tail { anchor: a }
        } else if ka || kb {
            Map::Graded { a, b }
        } else {
            Map::Linear { a, b }
        };
        heap.push(gauss_kronrod(&mut f, map, 0.0, 1.0)?);
    }

    let mut total: f64 = heap.iter().map(|p| p.value).sum();
    let mut total_err: f64 = heap.iter().map(|p| p.err).sum();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut panels = heap.len();

    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.w0 + worst.w1);
        if !(mid > worst.w0 && mid < worst.w1) || worst.w1 - worst.w0 < 1e-12 {
            frozen.push(worst);
            continue;
        }
        if panels >= spec.max_panels {
            // Close enough: hand back the estimate with its honest error.
            if total_err <= 1e3 * tol {
                heap.push(worst);
                break;
            }
            return Err(Error::unresolved(format!(
                "no convergence within {} panels (estimate {total:e} +/- {total_err:e})",
                spec.max_panels
            )));
        }
        let left = gauss_kronrod(&mut f, worst.map, worst.w0, mid)?;
        let right = gauss_kronrod(&mut f, worst.map, mid, worst.w1)?;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        panels += 1;
        heap.push(left);
        heap.push(right);
    }

    let (value, abs_err) = heap.iter().chain(frozen.iter()).fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err));
    if !value.is_finite() {
        return Err(Error::divergence("integral is not finite"));
    }
    if abs_err > spec.abs_tol.max(spec.rel_tol * value.abs()) && abs_err > value.abs() {
        return Err(Error::unresolved(format!("estimate {value:e} +/- {abs_err:e}")));
    }
    Ok(Estimate { value, abs_err })
}

/// `∫_lo^hi f(t) dt` over a finite range `0 < lo < hi` with a fixed rule:
/// each segment between `knots` is split into `pieces` equal panels. The
/// result is a smooth function of the endpoints, unlike [`integrate`].
pub fn integrate_fixed<F>(mut f: F, lo: f64, hi: f64, knots: &[f64], pieces: usize) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo > 0.0) || !hi.is_finite() {
        return Err(Error::param("fixed rule needs a finite range in (0, inf)"));
    }
    if hi <= lo {
        return Ok(Estimate::exact(0.0));
    }
    let mut cuts: Vec<f64> = knots.iter().copied().filter(|&k| k > lo && k < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.insert(0, lo);
    cuts.push(hi);
    let mut f = |m: &Map, w| eval_mapped(&mut f, m, w);
    let pieces = pieces.max(1);
    let step = 1.0 / pieces as f64;
    let mut acc = Estimate::exact(0.0);
    for pair in cuts.windows(2) {
        let map = Map::Linear { a: pair[0], b: pair[1] };
        for i in 0..pieces {
            let w1 = if i + 1 == pieces { 1.0 } else { (i + 1) as f64 * step };
            let p = gauss_kronrod(&mut f, map, i as f64 * step, w1)?;
            acc = acc + Estimate::new(p.value, p.err);
        }
    }
    Ok(acc)
}

/// Powers of two strictly inside `(lo, hi)`, nearest to `hi` first, at most
/// `max_count` of them. Used as the initial dyadic cut of a range.
pub fn dyadic_knots(lo: f64, hi: f64, max_count: usize) -> Vec<f64> {
    let mut out = Vec::new();
    if !(hi > lo) || hi <= 0.0 || max_count == 0 {
        return out;
    }
    let start = if hi.is_finite() {
        math::ceil(math::log2(hi)) as i32 - 1
    } else {
        math::floor(math::log2(lo.max(f64::MIN_POSITIVE))) as i32 + max_count as i32
    };
    let mut k = start;
    while out.len() < max_count && k > -1000 {
        let p = math::exp2i(k);
        if p <= lo {
            break;
        }
        if p < hi {
            out.push(p);
        }
        k -= 1;
    }
    out.reverse();
    out
}
