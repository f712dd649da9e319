//! Dyadic shell machinery behind the commutator estimates.
//!
//! Inward partitions cover `B(R)` by `C_i = (2^{i-1}, 2^i]` for `i < N` and
//! `C_N = (2^{N-1}, R]`, `N = ⌈log2 R⌉`. Outward partitions cover
//! `R^n ∖ B(R)` by `C_N = (R, 2^N]` and `C_i = (2^{i-1}, 2^i]` for `i > N`,
//! `N = ⌊log2 R⌋ + 1`. Only finitely many shells are kept; what lies beyond
//! them (a core ball or an exterior region) is integrated in one piece and
//! reported separately.
//!
//! Everything is radial, so `∫_A |B(|y|)|^{κ-1} φ(|y|) dy = n ω_n^κ ∫ t^{nκ-1} φ(t) dt`
//! and the `ω_n` factors cancel from every inequality checked here.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cmo::average_offset;
use crate::commutators::{commutator_power, CommutatorParams};
use crate::constants::{c0, shell_series, split_factor, DEFAULT_SERIES_TOL};
use crate::error::{Error, Result};
use crate::math;
use crate::means::{
    check_radius, mean, mean_growth, scaled, unit_ball_volume, weighted_power, MeanCurve, MeanParams, OuterParams, Side,
};
use crate::profiles::RadialProfile;
use crate::quadrature::{integrate, integrate_with_kinks, Estimate, QuadratureSpec};

/// Shells kept before the remainder is merged.
pub const DEFAULT_DEPTH: usize = 64;

/// Partitions of a ball (inward) or of its exterior (outward).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Inward,
    Outward,
}

impl Direction {
    pub fn of(side: Side) -> Direction {
        match side {
            Side::Central => Direction::Inward,
            Side::Companion => Direction::Outward,
        }
    }
}

/// `{t : inner < t ≤ outer}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shell {
    pub index: i32,
    pub inner: f64,
    pub outer: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShellPartition {
    pub direction: Direction,
    pub radius: f64,
    /// The index `N`.
    pub top: i32,
    /// Outermost shell first (inward) or innermost first (outward).
    pub shells: Vec<Shell>,
    /// The merged remainder: `[0, a]` inward, `[a, ∞)` outward.
    pub remainder: (f64, f64),
}

impl ShellPartition {
    /// Index of the shell containing radius `t`.
    pub fn index_of(&self, t: f64) -> Option<i32> {
        self.shells
            .iter()
            .find(|s| match self.direction {
                Direction::Inward => t > s.inner && t <= s.outer,
                Direction::Outward => t >= s.inner && t <= s.outer && (t > s.inner || s.index == self.top),
            })
            .map(|s| s.index)
    }

    /// `|B(R)|` split into shells plus remainder (inward only).
    pub fn measures(&self, n: u32) -> Vec<f64> {
        let w = unit_ball_volume(n);
        let nf = n as f64;
        let mut out: Vec<f64> =
            self.shells.iter().map(|s| w * (math::pow(s.outer, nf) - math::pow(s.inner, nf))).collect();
        if self.direction == Direction::Inward {
            out.push(w * math::pow(self.remainder.1, nf));
        }
        out
    }
}

/// Partition with [`DEFAULT_DEPTH`] shells.
pub fn build_partition(radius: f64, direction: Direction) -> Result<ShellPartition> {
    build_partition_with_depth(radius, direction, DEFAULT_DEPTH)
}

pub fn build_partition_with_depth(radius: f64, direction: Direction, depth: usize) -> Result<ShellPartition> {
    check_radius(radius)?;
    if depth == 0 {
        return Err(Error::param("partition needs at least one shell"));
    }
    let l = math::log2(radius);
    let mut shells = Vec::with_capacity(depth);
    match direction {
        Direction::Inward => {
            let mut top = math::ceil(l) as i32;
            if math::exp2i(top) < radius {
                top += 1;
            }
            while math::exp2i(top - 1) >= radius {
                top -= 1;
            }
            for k in 0..depth as i32 {
                let i = top - k;
                let outer = if k == 0 { radius } else { math::exp2i(i) };
                shells.push(Shell { index: i, inner: math::exp2i(i - 1), outer });
            }
            let a = math::exp2i(top - depth as i32);
            Ok(ShellPartition { direction, radius, top, shells, remainder: (0.0, a) })
        }
        Direction::Outward => {
            let mut top = math::floor(l) as i32 + 1;
            while math::exp2i(top) <= radius {
                top += 1;
            }
            while math::exp2i(top - 1) > radius {
                top -= 1;
            }
            for k in 0..depth as i32 {
                let i = top + k;
                let inner = if k == 0 { radius } else { math::exp2i(i - 1) };
                shells.push(Shell { index: i, inner, outer: math::exp2i(i) });
            }
            let a = math::exp2i(top + depth as i32 - 1);
            Ok(ShellPartition { direction, radius, top, shells, remainder: (a, f64::INFINITY) })
        }
    }
}

/// `n ∫_{lo}^{hi} (t/x)^{nα-1} |b(x) - b(t)|^r |f(t)|^r dt/x`, the shell
/// piece of `h(x) = M_{r,b}(f,α)(|x|)^r`.
fn commutator_piece(
    f: &RadialProfile,
    cp: &CommutatorParams,
    x: f64,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let sup = f.support();
    let lo = lo.max(sup.start);
    let hi = hi.min(sup.end);
    if !(hi > lo) || f.is_zero() {
        return Ok(Estimate::exact(0.0));
    }
    let b = &cp.b;
    let level = b.eval(x);
    let (vlo, vhi) = (lo / x, hi / x);
    let search_lo = if lo > 0.0 { lo } else { x * math::exp2i(-40) };
    let search_hi = if hi.is_finite() { hi } else { x * math::exp2i(40) };
    let kinks: Vec<f64> = b
        .level_crossings(level, search_lo, search_hi)
        .into_iter()
        .map(|t| t / x)
        .chain(core::iter::once(1.0))
        .collect();
    let knots: Vec<f64> = f.breakpoints().iter().chain(b.breakpoints().iter()).map(|t| t / x).collect();
    let w = cp.base.weight();
    let r = cp.base.r;
    let nf = cp.base.n as f64;
    integrate_with_kinks(
        |v| {
            let Some(t) = scaled(x, v) else {
                return Ok(0.0);
            };
            Ok(nf * weighted_power(v, w, (b.eval(t) - level) * f.eval(t), r))
        },
        vlo,
        vhi,
        &knots,
        &kinks,
        spec,
    )
}

/// `h(x) = M_{r,b}(f,α)(|x|)^r` (or with `M*`) computed shell by shell over
/// the partition of radius `|x|`.
pub fn shell_h(
    x: f64,
    f: &RadialProfile,
    cp: &CommutatorParams,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    cp.validate()?;
    let part = build_partition(x, Direction::of(side))?;
    let mut total = Estimate::exact(0.0);
    for s in &part.shells {
        total = total + commutator_piece(f, cp, x, s.inner, s.outer, spec)?;
    }
    total = total + commutator_piece(f, cp, x, part.remainder.0, part.remainder.1, spec)?;
    Ok(total)
}

/// `R ↦ M_r(f,1)(R)`, the unweighted `r`-mean of `|f|` over `B(R)`.
pub fn g_profile(f: &RadialProfile, r: f64, n: u32) -> Result<RadialProfile> {
    g_profile_on(f, r, n, Side::Central)
}

/// `g` for either side: `M_r(f,1)` or `M*_r(f,1)`.
pub fn g_profile_on(f: &RadialProfile, r: f64, n: u32, side: Side) -> Result<RadialProfile> {
    let p = MeanParams::new(n, r, 1.0)?;
    if !(r > 0.0) {
        return Err(Error::param("g needs r > 0"));
    }
    let inner = f.clone();
    let spec = QuadratureSpec::default();
    let label = format!("g(r={r},n={n},{side},{})", f.label());
    let mut g = RadialProfile::new(label, move |t| mean(&inner, &p, t, side, &spec).unwrap_or(f64::NAN))
        .with_local_bound(f.is_locally_bounded());
    if side == Side::Central {
        g = g.with_support(f.support().start, f64::INFINITY);
    } else {
        g = g.with_support(0.0, f.support().end);
    }
    if let Some(gr) = f.growth() {
        let m = mean_growth(gr, &p, side);
        g = g.with_origin_exponent(m.origin).with_decay_exponent(m.infinity);
    }
    if let Some(m) = f.sup_bound() {
        g = g.with_sup_bound(m);
    }
    Ok(g)
}

/// `|B(t)|^α ≤ |B(1)|^α 2^{n|α|} 2^{inα}` for `t ∈ (2^{i-1}, 2^i]`, compared
/// in logarithms. Returns `(ln lhs, ln rhs)`.
pub fn weight_bound(n: u32, alpha: f64, i: i32, t: f64) -> (f64, f64) {
    let nf = n as f64;
    let ln2 = core::f64::consts::LN_2;
    let lw = math::ln(unit_ball_volume(n));
    let lhs = alpha * (lw + nf * math::ln(t));
    let rhs = alpha * lw + nf * alpha.abs() * ln2 + i as f64 * nf * alpha * ln2;
    (lhs, rhs)
}

/// `(|a+b+c|^r, 3^r(|a|^r + |b|^r + |c|^r))`.
pub fn triple_power_bound(a: f64, b: f64, c: f64, r: f64) -> (f64, f64) {
    let p = |x: f64| math::abs_pow(x, r);
    (p(a + b + c), math::pow(3.0, r) * (p(a) + p(b) + p(c)))
}

/// One instance of `|b_{B_i} - b_{B̄_j}| ≤ 2^{2n}‖b‖(|i - j|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapCheck {
    pub j: i32,
    pub lhs: f64,
    pub bound: f64,
}

/// One instance of `∫_{C̄_j} |b - b_{B̄_j}|^r|f|^r ≤ ‖b‖^r ∫_{C̄_j} |f|^r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderCheck {
    pub j: i32,
    pub lhs: f64,
    pub rhs: f64,
}

/// The triangle-split of `h(x)` and every bound used on the way.
#[derive(Clone, Debug, PartialEq)]
pub struct ShellDecompositionReport {
    pub x: f64,
    pub direction: Direction,
    pub partition_radius: f64,
    /// Index `i` of the shell containing `x`.
    pub shell_index: i32,
    pub shell_count: usize,
    /// `h(x)` summed over the shells `C̄_j` plus the remainder.
    pub h_value: f64,
    /// `M_{r,b}(f,α)(|x|)^r` by one direct quadrature.
    pub direct_value: f64,
    /// Part of `h` from the merged remainder.
    pub remainder: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    /// `2^{n|α|} 2^{n|α-1|} 3^r`.
    pub bound_constant: f64,
    /// `bound_constant·(I1 + I2 + I3) + remainder`.
    pub bound_value: f64,
    /// `g(x)^r`.
    pub g_r: f64,
    pub cmo_bound: f64,
    pub i1_bound: f64,
    pub i2_bound: f64,
    pub i3_bound: f64,
    pub gap_checks: Vec<GapCheck>,
    pub holder_checks: Vec<HolderCheck>,
    /// Summed quadrature error of the pieces.
    pub quadrature_error: f64,
}

impl ShellDecompositionReport {
    /// Every chain inequality that fails beyond `rel_slack` (relative) and
    /// the quadrature error budget.
    pub fn violations(&self, rel_slack: f64) -> Vec<String> {
        let tol = |v: f64| rel_slack * v.abs() + self.quadrature_error + 1e-300;
        let mut out = Vec::new();
        let mut check = |name: &str, lhs: f64, rhs: f64| {
            if !(lhs <= rhs + tol(rhs)) {
                out.push(format!("{name}: {lhs:e} > {rhs:e}"));
            }
        };
        check("h <= K(I1+I2+I3)", self.h_value, self.bound_value);
        check("I1 bound", self.i1, self.i1_bound);
        check("I2 bound", self.i2, self.i2_bound);
        check("I3 bound", self.i3, self.i3_bound);
        for g in &self.gap_checks {
            check(&format!("gap j={}", g.j), g.lhs, g.bound);
        }
        for h in &self.holder_checks {
            check(&format!("holder j={}", h.j), h.lhs, h.rhs);
        }
        out
    }

    /// `|h - direct| / direct`.
    pub fn equivalence_error(&self) -> f64 {
        let d = self.direct_value.abs();
        if d == 0.0 {
            self.h_value.abs()
        } else {
            (self.h_value - self.direct_value).abs() / d
        }
    }
}

/// Ball average with a cache keyed by radius bits.
struct Averages<'a> {
    b: &'a RadialProfile,
    n: u32,
    spec: QuadratureSpec,
    seen: Vec<(u64, f64)>,
}

impl<'a> Averages<'a> {
    /// `b_{B(R)} - b(R)`.
    fn offset(&mut self, radius: f64) -> Result<f64> {
        let key = radius.to_bits();
        if let Some(&(_, v)) = self.seen.iter().find(|(k, _)| *k == key) {
            return Ok(v);
        }
        let v = average_offset(self.b, self.n, radius, &self.spec)?.value;
        self.seen.push((key, v));
        Ok(v)
    }
}

/// `n ∫_{lo}^{hi} t^{n-1} φ(t) |f(t)|^r dt`.
#[allow(clippy::too_many_arguments)]
fn shell_moment<P>(
    f: &RadialProfile,
    n: u32,
    r: f64,
    lo: f64,
    hi: f64,
    kinks: &[f64],
    spec: &QuadratureSpec,
    mut phi: P,
) -> Result<Estimate>
where
    P: FnMut(f64) -> f64,
{
    let sup = f.support();
    let lo = lo.max(sup.start);
    let hi = hi.min(sup.end);
    if !(hi > lo) {
        return Ok(Estimate::exact(0.0));
    }
    let nf = n as f64;
    let knots: Vec<f64> = f.breakpoints().to_vec();
    let est = integrate_with_kinks(
        |t| {
            let w = phi(t);
            if w == 0.0 {
                return Ok(0.0);
            }
            Ok(nf * w * weighted_power(t, nf, f.eval(t), r))
        },
        lo,
        hi,
        &knots,
        kinks,
        spec,
    )?;
    Ok(est)
}

/// Splits `h(x)` into `I1 + I2 + I3` over the shells `C̄_j` and re-checks
/// every bound of the chain with the CMO estimate `cmo_bound`.
///
/// `partition_radius` fixes which ball `B_i` the point `x` belongs to; by
/// default it is `|x|`, so that `B_i = B̄_i = B(|x|)`.
pub fn decompose_i(
    x: f64,
    f: &RadialProfile,
    cp: &CommutatorParams,
    side: Side,
    cmo_bound: f64,
    partition_radius: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<ShellDecompositionReport> {
    decompose_i_with_depth(x, f, cp, side, cmo_bound, partition_radius, DEFAULT_DEPTH, spec)
}

#[allow(clippy::too_many_arguments)]
pub fn decompose_i_with_depth(
    x: f64,
    f: &RadialProfile,
    cp: &CommutatorParams,
    side: Side,
    cmo_bound: f64,
    partition_radius: Option<f64>,
    depth: usize,
    spec: &QuadratureSpec,
) -> Result<ShellDecompositionReport> {
    cp.validate()?;
    check_radius(x)?;
    let p = cp.base;
    match side {
        Side::Central if !(p.alpha > 1.0) => {
            return Err(Error::HypothesisViolation(String::from("alpha > 1 required for the inward chain")))
        }
        Side::Companion if !(p.alpha < 1.0) => {
            return Err(Error::HypothesisViolation(String::from("alpha < 1 required for the outward chain")))
        }
        _ => {}
    }
    if !(cmo_bound >= 0.0) {
        return Err(Error::param("CMO bound must be nonnegative"));
    }
    let direction = Direction::of(side);
    let rp = partition_radius.unwrap_or(x);
    check_radius(rp)?;
    let part = build_partition_with_depth(rp, direction, depth)?;
    let i = part
        .index_of(x)
        .or((x == rp).then_some(part.top))
        .ok_or_else(|| Error::param(format!("x = {x} lies outside the partition of radius {rp}")))?;
    // Ball B_i containing x, and the reference shells C̄_j relative to x.
    let ball_i = match direction {
        Direction::Inward if i == part.top => rp,
        _ => math::exp2i(i),
    };
    let mut bars: Vec<(i32, f64, f64, f64)> = Vec::with_capacity(depth);
    match direction {
        Direction::Inward => {
            for k in 0..depth as i32 {
                let j = i - k;
                let outer = if k == 0 { x } else { math::exp2i(j) };
                bars.push((j, math::exp2i(j - 1), outer, outer));
            }
        }
        Direction::Outward => {
            for k in 0..depth as i32 {
                let j = i + k;
                let inner = if k == 0 { x } else { math::exp2i(j - 1) };
                bars.push((j, inner, math::exp2i(j), math::exp2i(j)));
            }
        }
    }
    let remainder_range = match direction {
        Direction::Inward => (0.0, math::exp2i(i - depth as i32)),
        Direction::Outward => (math::exp2i(i + depth as i32 - 1), f64::INFINITY),
    };

    let n = p.n;
    let nf = n as f64;
    let r = p.r;
    let ln2 = core::f64::consts::LN_2;
    let b = &cp.b;
    let mut avgs = Averages { b, n, spec: *spec, seen: Vec::new() };
    // Averages are handled as offsets from b at the ball radius, which
    // keeps differences of nearly equal averages accurate.
    let off_i = avgs.offset(ball_i)?;
    let d1 = math::abs_pow(b.difference(x, ball_i) - off_i, r);

    let mut h = Estimate::exact(0.0);
    let (mut i1, mut i2, mut i3) = (0.0, 0.0, 0.0);
    let mut err = 0.0;
    let mut gap_checks = Vec::new();
    let mut holder_checks = Vec::new();
    let four_n = math::exp2i(2 * n as i32);
    for &(j, lo, hi, ball_j) in &bars {
        let hp = commutator_piece(f, cp, x, lo, hi, spec)?;
        h = h + hp;
        let off_j = if ball_j == ball_i { off_i } else { avgs.offset(ball_j)? };
        let avg_j = b.eval(ball_j) + off_j;
        let gap = b.difference(ball_i, ball_j) + off_i - off_j;
        let crossings = b.level_crossings(avg_j, lo, hi.min(x * math::exp2i(40)));
        let plain = shell_moment(f, n, r, lo, hi, &[], spec, |_| 1.0)?;
        let osc =
            shell_moment(f, n, r, lo, hi, &crossings, spec, |t| math::abs_pow(b.difference(t, ball_j) - off_j, r))?;
        err += plain.abs_err * (d1 + math::abs_pow(gap, r)) + osc.abs_err;
        // n 2^{-inα} 2^{jn(α-1)} in logarithms
        let scale = math::exp((-(i as f64) * nf * p.alpha + j as f64 * nf * (p.alpha - 1.0)) * ln2);
        i1 += scale * d1 * plain.value;
        i2 += scale * osc.value;
        i3 += scale * math::abs_pow(gap, r) * plain.value;
        let steps = (i - j).abs() as f64;
        gap_checks.push(GapCheck { j, lhs: gap.abs(), bound: four_n * cmo_bound * steps });
        holder_checks.push(HolderCheck { j, lhs: osc.value, rhs: math::abs_pow(cmo_bound, r) * plain.value });
    }
    let rem = commutator_piece(f, cp, x, remainder_range.0, remainder_range.1, spec)?;
    h = h + rem;
    let direct = commutator_power(f, cp, x, side, spec)?;

    let k = split_factor(n, p.alpha, r);
    let bound_value = k * (i1 + i2 + i3) + rem.value;
    let g_r = math::pow(mean(f, &MeanParams::new(n, r, 1.0)?, x, side, spec)?, r);
    let geometric = 1.0 / (1.0 - math::pow(2.0, -nf * (p.alpha - 1.0).abs()));
    let series = shell_series(n, p.alpha, r, DEFAULT_SERIES_TOL)?;
    let br = math::abs_pow(cmo_bound, r);
    let scale_err = k * err;
    Ok(ShellDecompositionReport {
        x,
        direction,
        partition_radius: rp,
        shell_index: i,
        shell_count: bars.len(),
        h_value: h.value,
        direct_value: direct.value,
        remainder: rem.value,
        i1,
        i2,
        i3,
        bound_constant: k,
        bound_value,
        g_r,
        cmo_bound,
        i1_bound: geometric * d1 * g_r,
        i2_bound: geometric * br * g_r,
        i3_bound: math::pow(four_n, r) * (series.value + series.tail_bound) * br * g_r,
        gap_checks,
        holder_checks,
        quadrature_error: h.abs_err + direct.abs_err + scale_err,
    })
}

/// One shell of the inequality
/// `∫_{C_i} t^{nγ-1} h^{s/r} ≤ c0 ∫_{C_i} t^{nγ-1} (|b - b_{B_i}|^s + ‖b‖^s) g^s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShellInequality {
    pub index: i32,
    pub lhs: f64,
    pub rhs: f64,
    pub quadrature_error: f64,
}

impl ShellInequality {
    pub fn holds(&self, rel_slack: f64) -> bool {
        self.lhs <= self.rhs * (1.0 + rel_slack) + self.quadrature_error
    }
}

/// The shell inequality on every shell of the partition of radius `R`
/// (`depth` shells; the remainder is skipped).
#[allow(clippy::too_many_arguments)]
pub fn shell_inequalities(
    f: &RadialProfile,
    cp: &CommutatorParams,
    outer: &OuterParams,
    radius: f64,
    side: Side,
    cmo_bound: f64,
    depth: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<ShellInequality>> {
    cp.validate()?;
    let p = cp.base;
    let s = outer.s;
    let constant = c0(p.n, p.alpha, p.r, s, DEFAULT_SERIES_TOL)?;
    let part = build_partition_with_depth(radius, Direction::of(side), depth)?;
    let g_params = MeanParams::new(p.n, p.r, 1.0)?;
    let curve = MeanCurve::new(f, &g_params, side, &spec.tightened(10.0))?;
    let kappa = p.n as f64 * outer.gamma;
    let b = &cp.b;
    let inner_spec = spec.tightened(10.0);
    let mut out = Vec::with_capacity(part.shells.len());
    let mut avgs = Averages { b, n: p.n, spec: *spec, seen: Vec::new() };
    let bs = math::abs_pow(cmo_bound, s);
    for sh in &part.shells {
        let ball_i = match part.direction {
            Direction::Inward if sh.index == part.top => radius,
            _ => math::exp2i(sh.index),
        };
        let off_i = avgs.offset(ball_i)?;
        let avg_i = b.eval(ball_i) + off_i;
        let mut inner_rel: f64 = 0.0;
        let lhs = integrate(
            |t| {
                let hv = commutator_power(f, cp, t, side, &inner_spec)?;
                if hv.value > 0.0 {
                    inner_rel = inner_rel.max(hv.rel_err());
                }
                Ok(weighted_power(t, kappa, hv.value, s / p.r))
            },
            sh.inner,
            sh.outer,
            f.breakpoints(),
            spec,
        )?;
        let crossings = b.level_crossings(avg_i, sh.inner, sh.outer);
        let rhs = integrate_with_kinks(
            |t| {
                let g = curve.at(t)?.value;
                let wgt = math::abs_pow(b.difference(t, ball_i) - off_i, s) + bs;
                Ok(wgt * weighted_power(t, kappa, g, s))
            },
            sh.inner,
            sh.outer,
            f.breakpoints(),
            &crossings,
            spec,
        )?;
        let lhs_err = lhs.abs_err + (s / p.r) * inner_rel * lhs.value;
        out.push(ShellInequality {
            index: sh.index,
            lhs: lhs.value,
            rhs: constant * rhs.value,
            quadrature_error: lhs_err + constant * rhs.abs_err,
        });
    }
    Ok(out)
}
