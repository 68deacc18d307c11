//! Numerical checks of the explicit chart formulas around a blowdown.
//!
//! The local model is normalised to `λ1 = (1, 0)`, `λ2 = (0, 1)`,
//! `λ3 = (-k, m)` with `0 < k <= m`. The edges `E1, E2, E3` have equations
//! `p1 = 0`, `p̂ = 0` and `p2 = 0`, where `p̂ = p2 + s·p1 - t`. The vertex
//! `v1 = E1 ∩ E2` is smooth, `v2 = E2 ∩ E3` has local group of order `k`, and
//! after deleting `E2` the new vertex `w` has order `m`.
//!
//! The blowdown on orbit coordinates is
//! `ρ(p1, p2, q1, q2) = (δ(p̂)^k·p1, δ(p̂)·p2, q1, q2)` where `δ` equals
//! `x^(1/m)` below `eps1`, `1` above `eps2`, and interpolates monotonically
//! in between.
//!
//! All fractional powers use the principal branch. A point is only accepted
//! for verification when every complex number raised to a fractional power
//! has its angle strictly inside `(-π, π)`, computed from the angular
//! coordinates without reduction mod 1; otherwise both sides of an identity
//! may legitimately differ by a root of unity (an element of the local group).

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{Float, FloatConst};
use rand::distributions::uniform::SampleUniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lattice::LatticeInt;

/// Float scalar used by the chart checks.
pub trait ChartFloat: Float + FloatConst + SampleUniform + Debug + Display + Send + Sync + 'static {}

impl<T> ChartFloat for T where T: Float + FloatConst + SampleUniform + Debug + Display + Send + Sync + 'static {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChartError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("point outside the domain: {0}")]
    Domain(String),
}

/// Minimum distance to a vanishing locus for a point to be evaluated.
pub const VANISHING_MARGIN: f64 = 1e-6;
/// Minimum distance (in turns) of an argument from the principal branch cut.
pub const BRANCH_MARGIN: f64 = 1e-3;
/// Default pass threshold for residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Interval the angular coordinates are drawn from.
pub const ANGLE_RANGE: (f64, f64) = (0.05, 0.45);

fn c<F: ChartFloat>(v: f64) -> F {
    F::from(v).expect("constant representable in the float type")
}

fn cexp<F: ChartFloat>(radius: F, turns: F) -> Complex<F> {
    Complex::from_polar(radius, F::TAU() * turns)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalModelParams<F> {
    pub k: u32,
    pub m: u32,
    pub s: F,
    pub t: F,
    pub eps1: F,
    pub eps2: F,
}

impl<F: ChartFloat> LocalModelParams<F> {
    pub fn new(k: u32, m: u32, s: F, t: F, eps1: F, eps2: F) -> Result<Self, ChartError> {
        if !(0 < k && k <= m) {
            return Err(ChartError::InvalidParams(format!("need 0 < k <= m, got k={k}, m={m}")));
        }
        if !(s > F::zero() && t > F::zero()) {
            return Err(ChartError::InvalidParams("s and t must be positive".into()));
        }
        if !(F::zero() < eps1 && eps1 < eps2 && eps2 < F::one()) {
            return Err(ChartError::InvalidParams("need 0 < eps1 < eps2 < 1".into()));
        }
        Ok(Self { k, m, s, t, eps1, eps2 })
    }

    /// `s = t = 1`, `eps1 = 0.1`, `eps2 = 0.5`.
    pub fn standard(k: u32, m: u32) -> Result<Self, ChartError> {
        Self::new(k, m, F::one(), F::one(), c(0.1), c(0.5))
    }

    fn kf(&self) -> F {
        c(self.k as f64)
    }

    fn mf(&self) -> F {
        c(self.m as f64)
    }
}

/// A point of `P × T_N` in orbit coordinates: `(p1, p2)` on the polygon and
/// angular coordinates `(q1, q2)` in the standard basis of `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint<F> {
    pub p1: F,
    pub p2: F,
    pub q1: F,
    pub q2: F,
}

impl<F: ChartFloat> OrbitPoint<F> {
    pub fn new(p1: F, p2: F, q1: F, q2: F) -> Self {
        Self { p1, p2, q1, q2 }
    }

    /// `p̂ = p2 + s·p1 - t`, the function vanishing on the deleted edge.
    pub fn p_hat(&self, params: &LocalModelParams<F>) -> F {
        self.p2 + params.s * self.p1 - params.t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    V1,
    V2,
    W,
    V1Primed,
    V2Primed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartValue<F> {
    pub z1: Complex<F>,
    pub z2: Complex<F>,
    pub chart: Chart,
}

fn smootherstep<F: ChartFloat>(u: F) -> F {
    u * u * u * (u * (u * c(6.0) - c(15.0)) + c(10.0))
}

/// The radial rescaling profile of the blowdown.
///
/// Between `eps1` and `eps2` the exponent `1/m` of `x^(1/m)` is faded to zero
/// with a quintic smoothstep, which keeps `δ` non-decreasing.
pub fn delta<F: ChartFloat>(params: &LocalModelParams<F>, x: F) -> F {
    let inv_m = F::one() / params.mf();
    if x < params.eps1 {
        x.powf(inv_m)
    } else if x > params.eps2 {
        F::one()
    } else {
        let u = (x - params.eps1) / (params.eps2 - params.eps1);
        ((F::one() - smootherstep(u)) * inv_m * x.ln()).exp()
    }
}

/// `ρ(p1, p2, q1, q2) = (δ(p̂)^k·p1, δ(p̂)·p2, q1, q2)`.
pub fn blowdown_orbit_map<F: ChartFloat>(params: &LocalModelParams<F>, pt: &OrbitPoint<F>) -> OrbitPoint<F> {
    let d = delta(params, pt.p_hat(params));
    OrbitPoint {
        p1: d.powi(params.k as i32) * pt.p1,
        p2: d * pt.p2,
        q1: pt.q1,
        q2: pt.q2,
    }
}

fn nonnegative<F: ChartFloat>(name: &str, v: F) -> Result<F, ChartError> {
    if v >= F::zero() {
        Ok(v)
    } else {
        Err(ChartError::Domain(format!("{name} = {v} is negative")))
    }
}

fn nonvanishing<F: ChartFloat>(name: &str, v: F) -> Result<F, ChartError> {
    if v > F::zero() {
        Ok(v)
    } else {
        Err(ChartError::Domain(format!("{name} = {v} must be positive here")))
    }
}

/// Evaluates the complex coordinates of one chart.
///
/// For [`Chart::W`] the point is read as an image point `(r1, r2, q1, q2)`.
pub fn chart_eval<F: ChartFloat>(
    params: &LocalModelParams<F>,
    pt: &OrbitPoint<F>,
    chart: Chart,
) -> Result<ChartValue<F>, ChartError> {
    let (k, m) = (params.kf(), params.mf());
    let (z1, z2) = match chart {
        Chart::V1 => {
            let p1 = nonnegative("p1", pt.p1)?;
            let ph = nonnegative("p̂", pt.p_hat(params))?;
            (cexp(p1.sqrt(), pt.q1), cexp(ph.sqrt(), pt.q2))
        }
        Chart::V2 => {
            let p2 = nonnegative("p2", pt.p2)?;
            let ph = nonnegative("p̂", pt.p_hat(params))?;
            (cexp(ph.sqrt(), (m * pt.q1 + k * pt.q2) / k), cexp(p2.sqrt(), -pt.q1 / k))
        }
        Chart::W => {
            let r1 = nonnegative("r1", pt.p1)?;
            let r2 = nonnegative("r2", pt.p2)?;
            (cexp(r1.sqrt(), (m * pt.q1 + k * pt.q2) / m), cexp(r2.sqrt(), pt.q2 / m))
        }
        Chart::V1Primed => {
            let base = chart_eval(params, pt, Chart::V1)?;
            let p2 = nonvanishing("p2", pt.p2)?;
            let ph = nonvanishing("p̂", pt.p_hat(params))?;
            let d = delta(params, ph);
            (
                base.z1 * (F::one() / p2.powi(params.k as i32)).sqrt(),
                base.z2 * (d.powi(params.m as i32) * p2.powi(params.m as i32) / ph).sqrt(),
            )
        }
        Chart::V2Primed => {
            let base = chart_eval(params, pt, Chart::V2)?;
            let p1 = nonvanishing("p1", pt.p1)?;
            let ph = nonvanishing("p̂", pt.p_hat(params))?;
            let d = delta(params, ph);
            (
                base.z1 * (d.powi(params.m as i32) * p1.powf(m / k) / ph).sqrt(),
                base.z2 * p1.powf(-F::one() / k).sqrt(),
            )
        }
    };
    Ok(ChartValue { z1, z2, chart })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual<F> {
    pub identity: String,
    pub residual: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport<F> {
    pub residuals: Vec<Residual<F>>,
}

impl<F> Default for ResidualReport<F> {
    fn default() -> Self {
        Self { residuals: Vec::new() }
    }
}

impl<F: ChartFloat> ResidualReport<F> {
    fn push(&mut self, identity: impl Into<String>, lhs: Complex<F>, rhs: Complex<F>) {
        self.residuals.push(Residual {
            identity: identity.into(),
            residual: (lhs - rhs).norm(),
        });
    }

    pub fn max(&self) -> F {
        self.residuals.iter().map(|r| r.residual).fold(F::zero(), F::max)
    }

    pub fn passes(&self, tolerance: F) -> bool {
        self.residuals.iter().all(|r| r.residual < tolerance)
    }
}

fn in_branch_window<F: ChartFloat>(turns: F) -> bool {
    turns.abs() < c::<F>(0.5 - BRANCH_MARGIN)
}

/// Checks the sampling contract of [`verify_blowdown_identities`].
pub fn check_blowdown_point<F: ChartFloat>(params: &LocalModelParams<F>, pt: &OrbitPoint<F>) -> Result<(), ChartError> {
    let margin = c::<F>(VANISHING_MARGIN);
    let ph = pt.p_hat(params);
    if !(ph > margin && ph < params.eps1 - margin) {
        return Err(ChartError::Domain(format!("p̂ = {ph} must lie in (0, eps1) away from the ends")));
    }
    if !(pt.p1 > margin && pt.p2 > margin) {
        return Err(ChartError::Domain("p1 and p2 must be bounded away from 0".into()));
    }
    let (k, m) = (params.kf(), params.mf());
    let angles = [pt.q1, pt.q2, (m * pt.q1 + k * pt.q2) / k];
    if !angles.into_iter().all(in_branch_window) {
        return Err(ChartError::Domain("angular coordinates cross a branch cut".into()));
    }
    Ok(())
}

/// Invariant monomials `z1(w)^i z2(w)^j` with `m | ik + j`, `0 <= i, j <= m`.
pub fn invariant_monomials(k: u32, m: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for i in 0..=m {
        for j in 0..=m {
            if (i, j) != (0, 0) && (i * k + j).is_multiple_of(m) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Residuals of every chart identity for the blowdown at one point.
///
/// Each left-hand side is evaluated on the image point in the chart at `w`;
/// each right-hand side from the source charts at `v1`, `v2` and their
/// holomorphic modifications.
pub fn verify_blowdown_identities<F: ChartFloat>(
    params: &LocalModelParams<F>,
    pt: &OrbitPoint<F>,
    monomials: &[(u32, u32)],
) -> Result<ResidualReport<F>, ChartError> {
    check_blowdown_point(params, pt)?;
    let (k, m) = (params.kf(), params.mf());
    let ph = pt.p_hat(params);
    let d = delta(params, ph);
    let image = blowdown_orbit_map(params, pt);

    let w = chart_eval(params, &image, Chart::W)?;
    let v1 = chart_eval(params, pt, Chart::V1)?;
    let v2 = chart_eval(params, pt, Chart::V2)?;
    let v1p = chart_eval(params, pt, Chart::V1Primed)?;
    let v2p = chart_eval(params, pt, Chart::V2Primed)?;

    let mut rep = ResidualReport::default();
    let real = |x: F| Complex::new(x, F::zero());

    // map into the chart at w, from the chart at v1
    rep.push(
        "blowdown_v1.z1",
        w.z1,
        v1.z1 * v1.z2.powf(k / m) * real((d.powf(k) / ph.powf(k / m)).sqrt()),
    );
    rep.push(
        "blowdown_v1.z2",
        w.z2,
        v1.z2.powf(F::one() / m) * real((d * pt.p2 / ph.powf(F::one() / m)).sqrt()),
    );
    // from the chart at v2
    rep.push(
        "blowdown_v2.z1",
        w.z1,
        v2.z1.powf(k / m) * real((d.powf(k) * pt.p1 / ph.powf(k / m)).sqrt()),
    );
    rep.push(
        "blowdown_v2.z2",
        w.z2,
        v2.z1.powf(F::one() / m) * v2.z2 * real((d / ph.powf(F::one() / m)).sqrt()),
    );
    // holomorphic form in the modified coordinates
    rep.push("holomorphic_v1.z1", w.z1, v1p.z1 * v1p.z2.powf(k / m));
    rep.push("holomorphic_v1.z2", w.z2, v1p.z2.powf(F::one() / m));
    rep.push("holomorphic_v2.z1", w.z1, v2p.z1.powf(k / m));
    rep.push("holomorphic_v2.z2", w.z2, v2p.z1.powf(F::one() / m) * v2p.z2);
    // change of modified coordinates between v1 and v2
    rep.push("primed_transition.z1", v2p.z1, v1p.z1.powf(m / k) * v1p.z2);
    rep.push("primed_transition.z2", v2p.z2, v1p.z1.powf(-F::one() / k));

    for &(i, j) in monomials {
        if !(i * params.k + j).is_multiple_of(params.m) {
            return Err(ChartError::InvalidParams(format!(
                "monomial ({i}, {j}) is not invariant: m does not divide ik + j"
            )));
        }
        let n = ((i * params.k + j) / params.m) as i32;
        let (i, j) = (i as i32, j as i32);
        let lhs = w.z1.powi(i) * w.z2.powi(j);
        rep.push(format!("pullback_v1({i},{j})"), lhs, v1p.z1.powi(i) * v1p.z2.powi(n));
        rep.push(format!("pullback_v2({i},{j})"), lhs, v2p.z1.powi(n) * v2p.z2.powi(j));
    }
    Ok(rep)
}

/// `|z_i|²` against the radial function defining each coordinate, as
/// relative errors.
pub fn radial_consistency<F: ChartFloat>(params: &LocalModelParams<F>, pt: &OrbitPoint<F>) -> Result<Vec<F>, ChartError> {
    let ph = pt.p_hat(params);
    let rel = |z: Complex<F>, target: F| ((z.norm_sqr() - target) / target).abs();
    let v1 = chart_eval(params, pt, Chart::V1)?;
    let v2 = chart_eval(params, pt, Chart::V2)?;
    let w = chart_eval(params, pt, Chart::W)?;
    Ok(vec![
        rel(v1.z1, pt.p1),
        rel(v1.z2, ph),
        rel(v2.z1, ph),
        rel(v2.z2, pt.p2),
        rel(w.z1, pt.p1),
        rel(w.z2, pt.p2),
    ])
}

/// Generic vertex transition: `λ1 = (1, 0)`, `λ2 = (a, b)`, `λ3 = (c, d)`,
/// `E2` given by `p̂ = p2 + s·p1 - t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionParams<F> {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub s: F,
    pub t: F,
}

impl<F: ChartFloat> TransitionParams<F> {
    pub fn new(a: i64, b: i64, c: i64, d: i64, s: F, t: F) -> Result<Self, ChartError> {
        if b == 0 {
            return Err(ChartError::InvalidParams("λ1 and λ2 are dependent (b = 0)".into()));
        }
        if a * d - b * c == 0 {
            return Err(ChartError::InvalidParams("λ2 and λ3 are dependent".into()));
        }
        Ok(Self { a, b, c, d, s, t })
    }

    pub fn delta(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    fn p_hat(&self, pt: &OrbitPoint<F>) -> F {
        pt.p2 + self.s * pt.p1 - self.t
    }
}

/// Residual of the coordinate change from the chart at `v1 = E1 ∩ E2` to the
/// chart at `v2 = E2 ∩ E3` on their overlap.
pub fn verify_general_transition<F: ChartFloat>(
    tp: &TransitionParams<F>,
    pt: &OrbitPoint<F>,
) -> Result<ResidualReport<F>, ChartError> {
    let margin = c::<F>(VANISHING_MARGIN);
    let ph = tp.p_hat(pt);
    for (name, v) in [("p1", pt.p1), ("p2", pt.p2), ("p̂", ph)] {
        if v.is_nan() || v <= margin {
            return Err(ChartError::Domain(format!("{name} = {v} must be positive on the overlap")));
        }
    }
    let f = |n: i64| c::<F>(n as f64);
    let (a, b, cc, d, dl) = (f(tp.a), f(tp.b), f(tp.c), f(tp.d), f(tp.delta()));
    let arg_v1 = pt.q1 - a * pt.q2 / b;
    if !in_branch_window(arg_v1) {
        return Err(ChartError::Domain("angular coordinates cross a branch cut".into()));
    }

    let z1v1 = cexp(pt.p1.sqrt(), arg_v1);
    let z2v1 = cexp(ph.sqrt(), pt.q2 / b);
    let z1v2 = cexp(ph.sqrt(), (d * pt.q1 - cc * pt.q2) / dl);
    let z2v2 = cexp(pt.p2.sqrt(), (-b * pt.q1 + a * pt.q2) / dl);

    let sp1 = pt.p1.sqrt();
    let real = |x: F| Complex::new(x, F::zero());
    let mut rep = ResidualReport::default();
    rep.push("transition.z1", z1v2, z1v1.powf(d / dl) * z2v1 * real(sp1.powf(-d / dl)));
    rep.push(
        "transition.z2",
        z2v2,
        z1v1.powf(-b / dl) * real(pt.p2.sqrt()) * real(sp1.powf(b / dl)),
    );
    Ok(rep)
}

/// Exponent of `z2'` in the pullback of the canonical form:
/// `(k + 1)/m - 1`, zero exactly for crepant blowdowns.
pub fn discrepancy_exponent<I: LatticeInt>(k: &I, m: &I) -> Ratio<I> {
    Ratio::new(k.clone() + I::one(), m.clone()) - Ratio::from_integer(I::one())
}

fn angle<F: ChartFloat>(rng: &mut ChaCha8Rng) -> F {
    rng.gen_range(c::<F>(ANGLE_RANGE.0)..c::<F>(ANGLE_RANGE.1))
}

/// Draws up to `count` admissible blowdown points; `attempts` bounds the
/// number of rejected draws.
pub fn sample_blowdown_points<F: ChartFloat>(
    params: &LocalModelParams<F>,
    count: usize,
    seed: u64,
) -> Vec<OrbitPoint<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let limit = count.saturating_mul(1000).max(1000);
    let mut tries = 0;
    while out.len() < count && tries < limit {
        tries += 1;
        let p1 = rng.gen_range(F::zero()..params.t / params.s);
        let ph = rng.gen_range(F::zero()..params.eps1);
        let pt = OrbitPoint::new(p1, ph - params.s * p1 + params.t, angle(&mut rng), angle(&mut rng));
        if check_blowdown_point(params, &pt).is_ok() {
            out.push(pt);
        }
    }
    out
}

pub fn sample_transition_points<F: ChartFloat>(tp: &TransitionParams<F>, count: usize, seed: u64) -> Vec<OrbitPoint<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let limit = count.saturating_mul(1000).max(1000);
    let mut tries = 0;
    let upper = tp.t / tp.s;
    while out.len() < count && tries < limit {
        tries += 1;
        let p1 = rng.gen_range(F::zero()..upper);
        let p2 = rng.gen_range(F::zero()..tp.t + F::one());
        let pt = OrbitPoint::new(p1, p2, angle(&mut rng), angle(&mut rng));
        if verify_general_transition(tp, &pt).is_ok() {
            out.push(pt);
        }
    }
    out
}

/// Aggregate of many point checks: the largest residual seen per identity.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchReport<F> {
    pub requested: usize,
    pub points: usize,
    pub max_residuals: Vec<Residual<F>>,
}

impl<F: ChartFloat> BatchReport<F> {
    pub fn max(&self) -> F {
        self.max_residuals.iter().map(|r| r.residual).fold(F::zero(), F::max)
    }

    pub fn passes(&self, tolerance: F) -> bool {
        self.points == self.requested && self.max_residuals.iter().all(|r| r.residual < tolerance)
    }

    fn absorb(&mut self, rep: ResidualReport<F>) {
        self.points += 1;
        for r in rep.residuals {
            match self.max_residuals.iter_mut().find(|m| m.identity == r.identity) {
                Some(m) => m.residual = m.residual.max(r.residual),
                None => self.max_residuals.push(r),
            }
        }
    }
}

/// Blowdown identities (all invariant monomials included) over `count`
/// seeded points.
pub fn verify_blowdown_batch<F: ChartFloat>(
    params: &LocalModelParams<F>,
    count: usize,
    seed: u64,
) -> Result<BatchReport<F>, ChartError> {
    let monomials = invariant_monomials(params.k, params.m);
    let mut report = BatchReport {
        requested: count,
        points: 0,
        max_residuals: Vec::new(),
    };
    for pt in sample_blowdown_points(params, count, seed) {
        report.absorb(verify_blowdown_identities(params, &pt, &monomials)?);
    }
    Ok(report)
}

pub fn verify_transition_batch<F: ChartFloat>(
    tp: &TransitionParams<F>,
    count: usize,
    seed: u64,
) -> Result<BatchReport<F>, ChartError> {
    let mut report = BatchReport {
        requested: count,
        points: 0,
        max_residuals: Vec::new(),
    };
    for pt in sample_transition_points(tp, count, seed) {
        report.absorb(verify_general_transition(tp, &pt)?);
    }
    Ok(report)
}
