//! Theorem-level checks: both sides of each mixed-means and weighted
//! inequality evaluated on corpus profiles, with pass/fail verdicts.
//!
//! | theorem | central (`M`) | companion (`M*`) |
//! |---|---|---|
//! | 1 | `M_s(M_r(f,α),γ)(R) ≤ M_r(M_s(f,γ),α)(R)` | same with `M*` |
//! | 2 | `∫|B|^{γ-1} M_r(f,α)^s ≤ (α-γr/s)^{-s/r} ∫|B|^{γ-1}|f|^s` | constant `(γr/s-α)^{-s/r}` |
//! | 3 | `M_s(M_{r,b}(f,α),γ)(R) ≤ c1‖b‖ M_r(M_s(f,γ),1)(R)` | `α < 1` instead of `α > 1` |
//! | 4 | `∫|B|^{γ-1} M_{r,b}(f,α)^s ≤ c2‖b‖^s ∫|B|^{γ-1}|f|^s` | `γ > s/r` instead of `γ < s/r` |
//!
//! `‖b‖` is the CMO upper estimate of [`cmo_norm_upper`]; a verdict is
//! `pass` when `lhs / (constant·rhs) ≤ 1 + tol`, with `tol` the summed
//! relative quadrature errors plus a `1e-9` floor.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::cmo::{cmo_norm_upper, DEFAULT_R_RANGE};
use crate::commutators::{commutator_log, CommutatorParams};
use crate::constants::{c1, c2, theorem2_constant, DEFAULT_SERIES_TOL};
use crate::error::{Error, Result};
use crate::means::{
    full_space_integral, mean_finiteness, mean_growth, mixed_mean_from_curve, outer_mean, weighted_finiteness,
    weighted_integral, Finiteness, LogValue, MeanCurve, MeanParams, OuterParams, Side, GROWTH_MARGIN,
};
use crate::profiles::{parse_label, CorpusEntry, Growth, RadialProfile};
use crate::quadrature::{Estimate, QuadratureSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    One,
    Two,
    Three,
    Four,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::One, Theorem::Two, Theorem::Three, Theorem::Four];

    pub fn number(self) -> u8 {
        match self {
            Theorem::One => 1,
            Theorem::Two => 2,
            Theorem::Three => 3,
            Theorem::Four => 4,
        }
    }

    pub fn from_number(k: u8) -> Option<Theorem> {
        Theorem::ALL.into_iter().find(|t| t.number() == k)
    }

    /// Whether the statement is pointwise in `R`.
    pub fn has_radius(self) -> bool {
        matches!(self, Theorem::One | Theorem::Three)
    }

    /// Whether the statement involves a symbol `b`.
    pub fn has_symbol(self) -> bool {
        matches!(self, Theorem::Three | Theorem::Four)
    }

    /// `"T1-central"`, `"T4-companion"`, ...
    pub fn id(self, side: Side) -> String {
        format!("T{}-{side}", self.number())
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.number())
    }
}

/// One instance of one inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoremCase {
    pub theorem: Theorem,
    pub side: Side,
    pub n: u32,
    pub r: f64,
    pub s: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Only for theorems 1 and 3.
    pub radius: Option<f64>,
    pub f_label: String,
    /// Only for theorems 3 and 4.
    pub b_label: Option<String>,
}

impl TheoremCase {
    pub fn id(&self) -> String {
        self.theorem.id(self.side)
    }

    /// Total order used for every report listing.
    pub fn cmp_key(&self, other: &Self) -> Ordering {
        let num = |x: f64, y: f64| x.total_cmp(&y);
        let opt = |x: Option<f64>, y: Option<f64>| match (x, y) {
            (Some(a), Some(b)) => a.total_cmp(&b),
            (a, b) => a.is_some().cmp(&b.is_some()),
        };
        self.theorem
            .cmp(&other.theorem)
            .then(self.side.cmp(&other.side))
            .then(self.n.cmp(&other.n))
            .then(num(self.r, other.r))
            .then(num(self.s, other.s))
            .then(num(self.alpha, other.alpha))
            .then(num(self.gamma, other.gamma))
            .then(opt(self.radius, other.radius))
            .then(self.f_label.cmp(&other.f_label))
            .then(self.b_label.cmp(&other.b_label))
    }
}

/// `Ok(())` when every stated condition of the case's theorem holds,
/// otherwise the first violated condition.
pub fn hypothesis_check(case: &TheoremCase) -> core::result::Result<(), String> {
    let fail = |m: &str| Err(String::from(m));
    let (r, s, a, g) = (case.r, case.s, case.alpha, case.gamma);
    if case.n == 0 {
        return fail("n >= 1 required");
    }
    if ![r, s, a, g].iter().all(|x| x.is_finite()) {
        return fail("finite parameters required");
    }
    if case.theorem.has_radius() {
        match case.radius {
            Some(x) if x > 0.0 && x.is_finite() => {}
            _ => return fail("R>0 required"),
        }
    }
    if case.theorem.has_symbol() && case.b_label.is_none() {
        return fail("a symbol b is required");
    }
    let central = case.side == Side::Central;
    match case.theorem {
        Theorem::One => {
            if r == 0.0 || s == 0.0 {
                return fail("r,s != 0 required");
            }
            if !(r < s) {
                return fail("r<s required");
            }
        }
        Theorem::Two => {
            if r == 0.0 {
                return fail("r != 0 required");
            }
            if !(s > 0.0) {
                return fail("s>0 required");
            }
            if !(r < s) {
                return fail("r<s required");
            }
            let d = a - g * r / s;
            if central && !(d > 0.0) {
                return fail("alpha-gamma*r/s>0 required");
            }
            if !central && !(d < 0.0) {
                return fail("alpha-gamma*r/s<0 required");
            }
        }
        Theorem::Three | Theorem::Four => {
            if !(s > r && r > 0.0) {
                return fail("s>r>0 required");
            }
            if central && !(a > 1.0) {
                return fail("α>1 required");
            }
            if !central && !(a < 1.0) {
                return fail("α<1 required");
            }
            if case.theorem == Theorem::Four {
                if central && !(g < s / r) {
                    return fail("gamma<s/r required");
                }
                if !central && !(g > s / r) {
                    return fail("gamma>s/r required");
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// Both sides vanish, diverge, or sit too close to an integrability
    /// boundary to be certified.
    Degenerate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Degenerate => "degenerate",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub case: TheoremCase,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    /// `lhs / (constant·rhs)`; NaN for degenerate cases without a ratio.
    pub ratio: f64,
    pub verdict: Verdict,
    /// Summed relative quadrature error of both sides.
    pub quadrature_error: f64,
    pub cmo_bound_used: Option<f64>,
    pub diagnostic: Option<String>,
}

impl InequalityReport {
    fn degenerate(case: &TheoremCase, why: String) -> Self {
        InequalityReport {
            case: case.clone(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            constant: f64::NAN,
            ratio: f64::NAN,
            verdict: Verdict::Degenerate,
            quadrature_error: 0.0,
            cmo_bound_used: None,
            diagnostic: Some(why),
        }
    }
}

/// Tolerances and quadrature settings of a [`Checker`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarnessConfig {
    /// Quadrature for theorems 1 and 2.
    pub spec: QuadratureSpec,
    /// Quadrature for theorems 3 and 4 (commutator means are costlier).
    pub commutator_spec: QuadratureSpec,
    /// `constant·rhs` at or below this is degenerate.
    pub degenerate_tol: f64,
    /// Floor added to the quadrature error when judging a ratio.
    pub noise_floor: f64,
    /// Exponent band around integrability boundaries treated as uncertifiable.
    pub growth_margin: f64,
    /// Radii scanned by the CMO upper estimate.
    pub cmo_range: (f64, f64),
}

impl Default for HarnessConfig {
    fn default() -> Self {
        let spec = QuadratureSpec::default();
        HarnessConfig {
            spec,
            commutator_spec: spec.with_rel_tol(1e-7),
            degenerate_tol: 1e-200,
            noise_floor: 1e-9,
            growth_margin: GROWTH_MARGIN,
            cmo_range: DEFAULT_R_RANGE,
        }
    }
}

impl HarnessConfig {
    /// Same quadrature for every theorem.
    pub fn with_spec(spec: QuadratureSpec) -> Self {
        HarnessConfig { spec, commutator_spec: spec, ..HarnessConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct CurveKey {
    f: String,
    n: u32,
    r: u64,
    alpha: u64,
    side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct CommutatorKey {
    f: String,
    b: String,
    n: u32,
    r: u64,
    alpha: u64,
    side: Side,
}

/// Evaluates cases with profiles, mean curves, CMO estimates and commutator
/// values cached across calls. Grouping cases by profile pair and `(n, r, α)`
/// keeps the caches warm.
#[derive(Debug, Default)]
pub struct Checker {
    config: HarnessConfig,
    profiles: BTreeMap<String, CorpusEntry>,
    curves: BTreeMap<CurveKey, MeanCurve>,
    cmo: BTreeMap<(String, u32), f64>,
    commutators: BTreeMap<CommutatorKey, BTreeMap<u64, LogValue>>,
}

impl Checker {
    pub fn new(config: HarnessConfig) -> Self {
        Checker { config, ..Checker::default() }
    }

    pub fn config(&self) -> &HarnessConfig {
        &self.config
    }

    /// Profile for a corpus label, parsed once.
    pub fn profile(&mut self, label: &str) -> Result<RadialProfile> {
        if let Some(e) = self.profiles.get(label) {
            return Ok(e.profile.clone());
        }
        let e = parse_label(label)?;
        let p = e.profile.clone();
        self.profiles.insert(label.to_string(), e);
        Ok(p)
    }

    /// The CMO upper estimate of a symbol in dimension `n`.
    pub fn cmo_bound(&mut self, label: &str, n: u32) -> Result<f64> {
        let key = (label.to_string(), n);
        if let Some(v) = self.cmo.get(&key) {
            return Ok(*v);
        }
        let b = self.profile(label)?;
        let v = cmo_norm_upper(&b, n, self.config.cmo_range, &self.config.spec)?.value;
        self.cmo.insert(key, v);
        Ok(v)
    }

    fn curve(&mut self, f: &RadialProfile, p: &MeanParams, side: Side, spec: &QuadratureSpec) -> Result<&MeanCurve> {
        let key = CurveKey { f: f.label().to_string(), n: p.n, r: p.r.to_bits(), alpha: p.alpha.to_bits(), side };
        if !self.curves.contains_key(&key) {
            let c = MeanCurve::new(f, p, side, &spec.tightened(10.0))?;
            self.curves.insert(key.clone(), c);
        }
        Ok(&self.curves[&key])
    }

    /// Evaluates a case. Hypothesis violations, unparsable labels and
    /// unbounded symbols are errors; divergent integrals give a degenerate
    /// report.
    pub fn check(&mut self, case: &TheoremCase) -> Result<InequalityReport> {
        hypothesis_check(case).map_err(Error::HypothesisViolation)?;
        let out = match case.theorem {
            Theorem::One => self.theorem1(case),
            Theorem::Two => self.theorem2(case),
            Theorem::Three => self.theorem3(case),
            Theorem::Four => self.theorem4(case),
        };
        match out {
            Err(Error::Divergence(m) | Error::Unresolved(m)) => Ok(InequalityReport::degenerate(case, m)),
            other => other,
        }
    }

    /// [`check`](Self::check) with every error folded into the report.
    /// Divergence is degenerate; anything else is a failure.
    pub fn check_recorded(&mut self, case: &TheoremCase) -> InequalityReport {
        match self.check(case) {
            Ok(r) => r,
            Err(e) => {
                let mut rep = InequalityReport::degenerate(case, e.to_string());
                rep.verdict = Verdict::Fail;
                rep
            }
        }
    }

    /// Runs every case in the given order.
    pub fn run(&mut self, cases: &[TheoremCase]) -> Vec<InequalityReport> {
        cases.iter().map(|c| self.check_recorded(c)).collect()
    }

    fn finish(
        &self,
        case: &TheoremCase,
        lhs: Estimate,
        rhs: Estimate,
        constant: f64,
        cmo: Option<f64>,
    ) -> InequalityReport {
        let denom = constant * rhs.value;
        let qerr = lhs.rel_err() + rhs.rel_err();
        let mut rep = InequalityReport {
            case: case.clone(),
            lhs: lhs.value,
            rhs: rhs.value,
            constant,
            ratio: f64::NAN,
            verdict: Verdict::Degenerate,
            quadrature_error: qerr,
            cmo_bound_used: cmo,
            diagnostic: None,
        };
        if !lhs.value.is_finite() || !denom.is_finite() {
            rep.diagnostic = Some(String::from("non-finite side"));
            return rep;
        }
        if !(denom > self.config.degenerate_tol) {
            rep.diagnostic = Some(String::from("right-hand side vanishes"));
            return rep;
        }
        rep.ratio = lhs.value / denom;
        rep.verdict = if rep.ratio <= 1.0 + qerr + self.config.noise_floor { Verdict::Pass } else { Verdict::Fail };
        rep
    }

    fn margin_issue(&self, what: &str, parts: &[Finiteness]) -> Option<String> {
        if parts.contains(&Finiteness::Divergent) {
            Some(format!("{what} diverges"))
        } else if parts.contains(&Finiteness::Marginal) {
            Some(format!("{what} is within the growth margin of divergence"))
        } else {
            None
        }
    }

    /// Finiteness of an outer mean / weighted integral of the mean with
    /// inner parameters `p` of a profile with envelope `g`.
    fn nested_finiteness(
        &self,
        g: Growth,
        p: &MeanParams,
        kappa: f64,
        s: f64,
        side: Side,
        full_space: bool,
    ) -> [Finiteness; 2] {
        let m = self.config.growth_margin;
        let inner = mean_finiteness(g, p, side, m);
        let mg = mean_growth(g, p, side);
        let (zero, inf) = match (full_space, side) {
            (true, _) => (true, true),
            (false, Side::Central) => (true, false),
            (false, Side::Companion) => (false, true),
        };
        [inner, weighted_finiteness(mg, kappa, s, zero, inf, m)]
    }

    fn theorem1(&mut self, case: &TheoremCase) -> Result<InequalityReport> {
        let spec = self.config.spec;
        let f = self.profile(&case.f_label)?;
        let n = case.n;
        let nf = n as f64;
        let radius = case.radius.unwrap_or(1.0);
        let lhs_inner = MeanParams::new(n, case.r, case.alpha)?;
        let rhs_inner = MeanParams::new(n, case.s, case.gamma)?;
        let lhs_outer = OuterParams::new(case.s, case.gamma)?;
        let rhs_outer = OuterParams::new(case.r, case.alpha)?;
        if let Some(g) = f.growth() {
            let mut parts = Vec::new();
            parts.extend(self.nested_finiteness(g, &lhs_inner, nf * case.gamma, case.s, case.side, false));
            parts.extend(self.nested_finiteness(g, &rhs_inner, nf * case.alpha, case.r, case.side, false));
            if let Some(why) = self.margin_issue("a mixed mean", &parts) {
                return Ok(InequalityReport::degenerate(case, why));
            }
        }
        let lhs = {
            let curve = self.curve(&f, &lhs_inner, case.side, &spec)?;
            mixed_mean_from_curve(curve, &f, &lhs_outer, radius, &spec)?
        };
        let rhs = {
            let curve = self.curve(&f, &rhs_inner, case.side, &spec)?;
            mixed_mean_from_curve(curve, &f, &rhs_outer, radius, &spec)?
        };
        Ok(self.finish(case, lhs, rhs, 1.0, None))
    }

    fn theorem2(&mut self, case: &TheoremCase) -> Result<InequalityReport> {
        let spec = self.config.spec;
        let f = self.profile(&case.f_label)?;
        let n = case.n;
        let nf = n as f64;
        let inner = MeanParams::new(n, case.r, case.alpha)?;
        let outer = OuterParams::new(case.s, case.gamma)?;
        let constant = theorem2_constant(case.alpha, case.gamma, case.r, case.s, case.side)?;
        if let Some(g) = f.growth() {
            let m = self.config.growth_margin;
            let rhs_fin = weighted_finiteness(g, nf * case.gamma, case.s, true, true, m);
            if let Some(why) = self.margin_issue("the weighted integral of f", &[rhs_fin]) {
                return Ok(InequalityReport::degenerate(case, why));
            }
            let parts = self.nested_finiteness(g, &inner, nf * case.gamma, case.s, case.side, true);
            if parts.contains(&Finiteness::Divergent) {
                let mut rep = InequalityReport::degenerate(case, String::from("lhs diverges while rhs is finite"));
                rep.verdict = Verdict::Fail;
                return Ok(rep);
            }
            if let Some(why) = self.margin_issue("the weighted integral of the mean", &parts) {
                return Ok(InequalityReport::degenerate(case, why));
            }
        }
        let rhs = weighted_integral(&f, case.s, case.gamma, n, &spec)?;
        let lhs = {
            let curve = self.curve(&f, &inner, case.side, &spec)?;
            full_space_integral(|t| curve.ln_at(t), n, &outer, f.breakpoints(), &spec)?
        };
        Ok(self.finish(case, lhs, rhs, constant, None))
    }

    /// `t ↦ M_{r,b}(f,α)(t)` memoized by `t`.
    fn commutator_values(&mut self, key: CommutatorKey) -> &mut BTreeMap<u64, LogValue> {
        self.commutators.entry(key).or_default()
    }

    fn symbol_parts(&mut self, case: &TheoremCase) -> Result<(RadialProfile, RadialProfile, f64, CommutatorKey)> {
        let f = self.profile(&case.f_label)?;
        let b_label = case.b_label.clone().unwrap_or_default();
        let b = self.profile(&b_label)?;
        if !f.is_locally_bounded() {
            return Err(Error::InvalidInput(format!("'{}' is not locally bounded", f.label())));
        }
        let norm = self.cmo_bound(&b_label, case.n)?;
        let key = CommutatorKey {
            f: case.f_label.clone(),
            b: b_label,
            n: case.n,
            r: case.r.to_bits(),
            alpha: case.alpha.to_bits(),
            side: case.side,
        };
        Ok((f, b, norm, key))
    }

    /// Left side of theorem 3 (outer mean) or theorem 4 (full-space integral).
    fn commutator_lhs(
        &mut self,
        case: &TheoremCase,
        f: &RadialProfile,
        b: &RadialProfile,
        key: CommutatorKey,
    ) -> Result<Estimate> {
        let spec = self.config.commutator_spec;
        let n = case.n;
        let cp = CommutatorParams::new(MeanParams::new(n, case.r, case.alpha)?, b.clone())?;
        let outer = OuterParams::new(case.s, case.gamma)?;
        let knots: Vec<f64> = f.breakpoints().iter().chain(b.breakpoints()).copied().collect();
        let side = case.side;
        let memo = self.commutator_values(key);
        let commutator = |t| memo_commutator(memo, f, &cp, t, side, &spec);
        match case.theorem {
            Theorem::Three => outer_mean(commutator, n, &outer, case.radius.unwrap_or(1.0), side, &knots, &spec),
            _ => full_space_integral(commutator, n, &outer, &knots, &spec),
        }
    }

    /// Degenerate report for a divergent right side. A symbol with zero
    /// oscillation still gets its (vanishing) left side evaluated.
    fn degenerate_rhs(
        &mut self,
        case: &TheoremCase,
        why: String,
        norm: f64,
        f: &RadialProfile,
        b: &RadialProfile,
        key: CommutatorKey,
    ) -> InequalityReport {
        let mut rep = InequalityReport::degenerate(case, why);
        if norm == 0.0 {
            if let Ok(lhs) = self.commutator_lhs(case, f, b, key) {
                rep.lhs = lhs.value;
            }
        }
        rep
    }

    fn theorem3(&mut self, case: &TheoremCase) -> Result<InequalityReport> {
        let spec = self.config.commutator_spec;
        let (f, b, norm, key) = self.symbol_parts(case)?;
        let n = case.n;
        let radius = case.radius.unwrap_or(1.0);
        let constant = c1(n, case.alpha, case.r, DEFAULT_SERIES_TOL)?;
        let rhs_inner = MeanParams::new(n, case.s, case.gamma)?;
        let rhs_outer = OuterParams::new(case.r, 1.0)?;
        if let Some(g) = f.growth() {
            let parts = self.nested_finiteness(g, &rhs_inner, n as f64, case.r, case.side, false);
            if let Some(why) = self.margin_issue("the right-hand mixed mean", &parts) {
                return Ok(self.degenerate_rhs(case, why, norm, &f, &b, key));
            }
        }
        let mixed = {
            let curve = self.curve(&f, &rhs_inner, case.side, &spec)?;
            mixed_mean_from_curve(curve, &f, &rhs_outer, radius, &spec)?
        };
        let rhs = Estimate::new(norm * mixed.value, norm * mixed.abs_err);
        let lhs = match self.commutator_lhs(case, &f, &b, key) {
            Ok(v) => v,
            Err(Error::Divergence(m)) => {
                let mut rep = InequalityReport::degenerate(case, format!("lhs diverges while rhs is finite: {m}"));
                rep.verdict = Verdict::Fail;
                return Ok(rep);
            }
            Err(e) => return Err(e),
        };
        Ok(self.finish(case, lhs, rhs, constant, Some(norm)))
    }

    fn theorem4(&mut self, case: &TheoremCase) -> Result<InequalityReport> {
        let spec = self.config.commutator_spec;
        let (f, b, norm, key) = self.symbol_parts(case)?;
        let n = case.n;
        let constant = c2(n, case.alpha, case.r, case.s, case.gamma, DEFAULT_SERIES_TOL)?;
        if let Some(g) = f.growth() {
            let m = self.config.growth_margin;
            let rhs_fin = weighted_finiteness(g, n as f64 * case.gamma, case.s, true, true, m);
            if let Some(why) = self.margin_issue("the weighted integral of f", &[rhs_fin]) {
                return Ok(self.degenerate_rhs(case, why, norm, &f, &b, key));
            }
        }
        let wf = weighted_integral(&f, case.s, case.gamma, n, &spec)?;
        let bs = crate::math::pow(norm, case.s);
        let rhs = Estimate::new(bs * wf.value, bs * wf.abs_err);
        let lhs = match self.commutator_lhs(case, &f, &b, key) {
            Ok(v) => v,
            Err(Error::Divergence(m)) => {
                let mut rep = InequalityReport::degenerate(case, format!("lhs diverges while rhs is finite: {m}"));
                rep.verdict = Verdict::Fail;
                return Ok(rep);
            }
            Err(e) => return Err(e),
        };
        Ok(self.finish(case, lhs, rhs, constant, Some(norm)))
    }
}

fn memo_commutator(
    memo: &mut BTreeMap<u64, LogValue>,
    f: &RadialProfile,
    cp: &CommutatorParams,
    t: f64,
    side: Side,
    spec: &QuadratureSpec,
) -> Result<LogValue> {
    let key = t.to_bits();
    if let Some(e) = memo.get(&key) {
        return Ok(*e);
    }
    let e = commutator_log(f, cp, t, side, spec)?;
    memo.insert(key, e);
    Ok(e)
}

/// Theorem 1 for a single case.
pub fn check_theorem1(case: &TheoremCase, q: &QuadratureSpec) -> Result<InequalityReport> {
    check_single(Theorem::One, case, q)
}

/// Theorem 2 for a single case.
pub fn check_theorem2(case: &TheoremCase, q: &QuadratureSpec) -> Result<InequalityReport> {
    check_single(Theorem::Two, case, q)
}

/// Theorem 3 for a single case.
pub fn check_theorem3(case: &TheoremCase, q: &QuadratureSpec) -> Result<InequalityReport> {
    check_single(Theorem::Three, case, q)
}

/// Theorem 4 for a single case.
pub fn check_theorem4(case: &TheoremCase, q: &QuadratureSpec) -> Result<InequalityReport> {
    check_single(Theorem::Four, case, q)
}

fn check_single(t: Theorem, case: &TheoremCase, q: &QuadratureSpec) -> Result<InequalityReport> {
    if case.theorem != t {
        return Err(Error::param(format!("case is for {}, not {t}", case.theorem)));
    }
    Checker::new(HarnessConfig::with_spec(*q)).check(case)
}

/// How `s` is derived from `r` on a grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SRule {
    /// `s = r + c`.
    Offset(f64),
    /// `s = c·r`.
    Scale(f64),
    /// `s = c`.
    Fixed(f64),
}

impl SRule {
    pub fn apply(self, r: f64) -> f64 {
        match self {
            SRule::Offset(c) => r + c,
            SRule::Scale(c) => c * r,
            SRule::Fixed(c) => c,
        }
    }

    /// Parses `"r+0.5"`, `"r-1"`, `"2r"`, `"2*r"`, `"r"` or a number.
    pub fn parse(text: &str) -> Result<SRule> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::param(format!("cannot read s rule '{text}'"));
        let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
        if t == "r" {
            return Ok(SRule::Scale(1.0));
        }
        if let Some(rest) = t.strip_prefix('r') {
            if let Some(c) = rest.strip_prefix('+') {
                return Ok(SRule::Offset(num(c)?));
            }
            if let Some(c) = rest.strip_prefix('-') {
                return Ok(SRule::Offset(-num(c)?));
            }
            if let Some(c) = rest.strip_prefix('*') {
                return Ok(SRule::Scale(num(c)?));
            }
            return Err(bad());
        }
        if let Some(c) = t.strip_suffix('r') {
            let c = c.strip_suffix('*').unwrap_or(c);
            return Ok(SRule::Scale(num(c)?));
        }
        Ok(SRule::Fixed(num(&t)?))
    }
}

impl fmt::Display for SRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SRule::Offset(c) if *c < 0.0 => write!(f, "r-{}", -c),
            SRule::Offset(c) => write!(f, "r+{c}"),
            SRule::Scale(c) => write!(f, "{c}r"),
            SRule::Fixed(c) => write!(f, "{c}"),
        }
    }
}

/// A parameter grid with its corpus selection.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub theorems: Vec<Theorem>,
    pub sides: Vec<Side>,
    pub n: Vec<u32>,
    pub r: Vec<f64>,
    pub s: Vec<SRule>,
    pub alpha: Vec<f64>,
    pub gamma: Vec<f64>,
    pub radius: Vec<f64>,
    /// Profiles for theorems 1 and 2.
    pub profiles: Vec<String>,
    /// Profiles for theorems 3 and 4.
    pub commutator_profiles: Vec<String>,
    pub symbols: Vec<String>,
}

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Profiles used for theorems 1 and 2 by default.
pub const DEFAULT_PROFILES: [&str; 7] = [
    "const:c=1",
    "indicator:a=0:b=1",
    "indicator:a=1:b=2",
    "power:beta=1:a=0:b=1",
    "power:beta=-1.5:a=1:b=inf",
    "bump:beta=0.5:kappa=4",
    "bump:beta=0:kappa=2",
];

/// Profiles used for theorems 3 and 4 by default.
pub const DEFAULT_COMMUTATOR_PROFILES: [&str; 4] =
    ["indicator:a=0:b=1", "indicator:a=1:b=2", "bump:beta=0.5:kappa=4", "power:beta=1:a=0:b=1"];

/// Bounded symbols used by default.
pub const DEFAULT_SYMBOLS: [&str; 5] =
    ["const:c=3", "osc:amp=0.5:phase=0", "osc:amp=1:phase=0", "osc:amp=2:phase=0", "smooth:radius=1:k=4"];

impl Default for Grid {
    fn default() -> Self {
        Grid {
            theorems: Theorem::ALL.to_vec(),
            sides: alloc::vec![Side::Central, Side::Companion],
            n: alloc::vec![1, 2, 3],
            r: alloc::vec![-1.0, 0.5, 1.0, 2.0],
            s: alloc::vec![SRule::Offset(0.5), SRule::Scale(2.0), SRule::Fixed(3.0)],
            alpha: alloc::vec![0.25, 0.5, 1.5, 2.0, 3.0],
            gamma: alloc::vec![-1.0, 0.0, 0.5, 1.0, 2.0],
            radius: alloc::vec![0.5, 1.0, 5.0],
            profiles: labels(&DEFAULT_PROFILES),
            commutator_profiles: labels(&DEFAULT_COMMUTATOR_PROFILES),
            symbols: labels(&DEFAULT_SYMBOLS),
        }
    }
}

impl Grid {
    /// The grid restricted to the given theorems.
    pub fn only(mut self, theorems: &[Theorem]) -> Self {
        self.theorems.retain(|t| theorems.contains(t));
        self
    }

    /// Every case that passes its hypothesis check and whose profiles meet
    /// the theorem's input requirements, grouped so that cases sharing
    /// cached data are adjacent.
    pub fn cases(&self) -> Result<Vec<TheoremCase>> {
        Ok(self.enumerate()?.into_iter().filter_map(|(c, h)| h.is_ok().then_some(c)).collect())
    }

    /// The combinations dropped by the hypothesis check, with the reason.
    pub fn rejected(&self) -> Result<Vec<(TheoremCase, String)>> {
        Ok(self.enumerate()?.into_iter().filter_map(|(c, h)| h.err().map(|e| (c, e))).collect())
    }

    #[allow(clippy::type_complexity)]
    fn enumerate(&self) -> Result<Vec<(TheoremCase, core::result::Result<(), String>)>> {
        let mut profiles: BTreeMap<&str, RadialProfile> = BTreeMap::new();
        for l in self.profiles.iter().chain(&self.commutator_profiles).chain(&self.symbols) {
            if !profiles.contains_key(l.as_str()) {
                profiles.insert(l, parse_label(l)?.profile);
            }
        }
        let mut s_values: Vec<(f64, Vec<f64>)> = Vec::new();
        for &r in &self.r {
            let mut ss: Vec<f64> = self.s.iter().map(|rule| rule.apply(r)).collect();
            ss.sort_by(f64::total_cmp);
            ss.dedup();
            s_values.push((r, ss));
        }
        let mut out = Vec::new();
        for &theorem in &self.theorems {
            for &side in &self.sides {
                let fs = if theorem.has_symbol() { &self.commutator_profiles } else { &self.profiles };
                let bs: Vec<Option<&String>> =
                    if theorem.has_symbol() { self.symbols.iter().map(Some).collect() } else { alloc::vec![None] };
                let radii: Vec<Option<f64>> = if theorem.has_radius() {
                    self.radius.iter().copied().map(Some).collect()
                } else {
                    alloc::vec![None]
                };
                for fl in fs {
                    let f = &profiles[fl.as_str()];
                    for b in &bs {
                        if let Some(bl) = b {
                            if profiles[bl.as_str()].sup_bound().is_none() || !f.is_locally_bounded() {
                                continue;
                            }
                        }
                        for &n in &self.n {
                            for (r, ss) in &s_values {
                                if *r < 0.0 && !(f.is_strictly_positive() && f.support().covers(0.0, f64::INFINITY)) {
                                    continue;
                                }
                                for &alpha in &self.alpha {
                                    for &s in ss {
                                        for &gamma in &self.gamma {
                                            for &radius in &radii {
                                                let case = TheoremCase {
                                                    theorem,
                                                    side,
                                                    n,
                                                    r: *r,
                                                    s,
                                                    alpha,
                                                    gamma,
                                                    radius,
                                                    f_label: fl.clone(),
                                                    b_label: b.cloned(),
                                                };
                                                let h = hypothesis_check(&case);
                                                out.push((case, h));
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Aggregates for one theorem id.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TheoremSummary {
    pub cases: usize,
    pub pass: usize,
    pub fail: usize,
    pub degenerate: usize,
    /// Largest ratio among non-degenerate cases.
    pub max_ratio: Option<f64>,
}

/// Per-theorem aggregates keyed by id (`"T1-central"`, ...). Every id in
/// `ids` appears, even without cases.
pub fn summarize(ids: &[String], reports: &[InequalityReport]) -> BTreeMap<String, TheoremSummary> {
    let mut out: BTreeMap<String, TheoremSummary> =
        ids.iter().map(|i| (i.clone(), TheoremSummary::default())).collect();
    for rep in reports {
        let e = out.entry(rep.case.id()).or_default();
        e.cases += 1;
        match rep.verdict {
            Verdict::Pass => e.pass += 1,
            Verdict::Fail => e.fail += 1,
            Verdict::Degenerate => e.degenerate += 1,
        }
        if rep.verdict != Verdict::Degenerate && rep.ratio.is_finite() {
            e.max_ratio = Some(e.max_ratio.map_or(rep.ratio, |m| m.max(rep.ratio)));
        }
    }
    out
}

/// Sorts reports by case key.
pub fn sort_reports(reports: &mut [InequalityReport]) {
    reports.sort_by(|a, b| a.case.cmp_key(&b.case));
}

/// Evaluates every case of a grid on one thread and returns the sorted
/// reports.
pub fn sweep(grid: &Grid, config: HarnessConfig) -> Result<Vec<InequalityReport>> {
    let cases = grid.cases()?;
    let mut checker = Checker::new(config);
    let mut reports = checker.run(&cases);
    sort_reports(&mut reports);
    Ok(reports)
}
