//! Norms on finite coefficient vectors.
//!
//! Every norm here is 1-unconditional: it only looks at `|x_i|`. The
//! [`LatticeNorm`] trait is the common evaluator interface; it is also
//! implemented by realized bases in `L_1` so that the constant estimators
//! work uniformly over abstract and realized norms.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A norm evaluator on finite coefficient vectors.
pub trait LatticeNorm: Sync {
    fn norm(&self, x: &[f64]) -> f64;
}

impl<T: LatticeNorm + ?Sized> LatticeNorm for &T {
    fn norm(&self, x: &[f64]) -> f64 {
        (**self).norm(x)
    }
}

/// Coefficients against an abstract basis. Non-empty, all entries finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CoefficientVector(Vec<f64>);

impl CoefficientVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Degenerate("empty coefficient vector".into()));
        }
        if let Some(bad) = entries.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("coefficient {bad}")));
        }
        Ok(Self(entries))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for CoefficientVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CoefficientVector> for Vec<f64> {
    fn from(v: CoefficientVector) -> Self {
        v.0
    }
}

impl Deref for CoefficientVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// The ℓ_p norm. `p = f64::INFINITY` gives the max norm.
pub fn lp_norm(x: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(invalid("p", p, "l_p is a norm only for p >= 1"));
    }
    Ok(lp_unchecked(x, p))
}

pub(crate) fn lp_unchecked(x: &[f64], p: f64) -> f64 {
    if p == f64::INFINITY {
        return max_abs(x);
    }
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    let sum: f64 = x.iter().map(|v| v.abs().powf(p)).sum();
    if sum.is_finite() && (sum > 0.0 || x.iter().all(|&v| v == 0.0)) {
        return sum.powf(1.0 / p);
    }
    // overflow or underflow: rescale by the largest entry
    let m = max_abs(x);
    let scaled: f64 = x.iter().map(|v| (v.abs() / m).powf(p)).sum();
    m * scaled.powf(1.0 / p)
}

/// Parametric families of Orlicz functions, before normalization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrliczKind {
    /// `t^p`
    Power { p: f64 },
    /// `t^p * ln(e + t)^q`
    PowerLog { p: f64, q: f64 },
    /// `t^p + t^q`
    PowerSum { p: f64, q: f64 },
}

impl OrliczKind {
    fn raw(&self, t: f64) -> f64 {
        match *self {
            OrliczKind::Power { p } => t.powf(p),
            OrliczKind::PowerLog { p, q } => t.powf(p) * (std::f64::consts::E + t).ln().powf(q),
            OrliczKind::PowerSum { p, q } => t.powf(p) + t.powf(q),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            OrliczKind::Power { p } => {
                if !(p >= 1.0 && p.is_finite()) {
                    return Err(invalid("p", p, "Orlicz power must be finite and >= 1"));
                }
            }
            OrliczKind::PowerLog { p, q } => {
                if !(p >= 1.0 && p.is_finite()) {
                    return Err(invalid("p", p, "Orlicz power must be finite and >= 1"));
                }
                if !(q >= 0.0 && q.is_finite()) {
                    return Err(invalid("q", q, "log exponent must be finite and >= 0"));
                }
            }
            OrliczKind::PowerSum { p, q } => {
                for (name, v) in [("p", p), ("q", q)] {
                    if !(v >= 1.0 && v.is_finite()) {
                        return Err(invalid(name, v, "Orlicz power must be finite and >= 1"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
struct OrliczSpec {
    #[serde(flatten)]
    kind: OrliczKind,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    inner_power: f64,
}

fn one() -> f64 {
    1.0
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

/// A convex Orlicz function `M`, normalized so that `M(1) = 1`.
///
/// Evaluates `K(c * t^a)` where `K` is the declared family, `a` the inner
/// power (1 unless the function was built by [`OrliczFunction::compose_power`])
/// and `c` the argument rescaling with `K(c) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OrliczSpec", into = "OrliczSpec")]
pub struct OrliczFunction {
    kind: OrliczKind,
    inner_power: f64,
    scale: f64,
}

impl TryFrom<OrliczSpec> for OrliczFunction {
    type Error = Error;
    fn try_from(spec: OrliczSpec) -> Result<Self> {
        Self::new(spec.kind)?.compose_power(spec.inner_power)
    }
}

impl From<OrliczFunction> for OrliczSpec {
    fn from(m: OrliczFunction) -> Self {
        OrliczSpec {
            kind: m.kind,
            inner_power: m.inner_power,
        }
    }
}

impl OrliczFunction {
    pub fn new(kind: OrliczKind) -> Result<Self> {
        kind.validate()?;
        let scale = match kind {
            OrliczKind::Power { .. } => 1.0,
            _ => unit_preimage(&kind),
        };
        let m = Self {
            kind,
            inner_power: 1.0,
            scale,
        };
        m.check_shape()?;
        Ok(m)
    }

    pub fn power(p: f64) -> Result<Self> {
        Self::new(OrliczKind::Power { p })
    }

    pub fn kind(&self) -> OrliczKind {
        self.kind
    }

    /// The function `t ↦ M(t^q)`, `q >= 1`. Its Luxemburg gauge is the
    /// `q`-convexification of `ℓ_M`.
    pub fn compose_power(&self, q: f64) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(invalid("q", q, "inner power must be finite and >= 1"));
        }
        let m = Self {
            inner_power: self.inner_power * q,
            ..self.clone()
        };
        m.check_shape()?;
        Ok(m)
    }

    /// `M(t)` for `t >= 0`.
    pub fn eval(&self, t: f64) -> f64 {
        let u = if self.inner_power == 1.0 {
            t
        } else {
            t.powf(self.inner_power)
        };
        if self.scale == 1.0 {
            self.kind.raw(u)
        } else {
            self.kind.raw(self.scale * u)
        }
    }

    fn check_shape(&self) -> Result<()> {
        if self.eval(0.0) != 0.0 {
            return Err(Error::Degenerate("Orlicz function must vanish at 0".into()));
        }
        if (self.eval(1.0) - 1.0).abs() > 1e-12 {
            return Err(Error::Degenerate("Orlicz function not normalized".into()));
        }
        let mut grid = vec![0.0];
        grid.extend(log_grid(1e-4, 1e4, 64));
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (ma, mb) = (self.eval(a), self.eval(b));
            if !(ma.is_finite() && mb.is_finite()) {
                return Err(Error::NonFinite(format!("Orlicz function at {b}")));
            }
            if mb < ma {
                return Err(Error::Degenerate(format!("Orlicz function decreases on [{a}, {b}]")));
            }
            let mid = self.eval(0.5 * (a + b));
            if mid > 0.5 * (ma + mb) * (1.0 + 1e-12) + 1e-12 {
                return Err(Error::Degenerate(format!("Orlicz function not convex on [{a}, {b}]")));
            }
        }
        Ok(())
    }
}

// c with K(c) = 1, by bisection on the increasing raw function
fn unit_preimage(kind: &OrliczKind) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    while kind.raw(hi) < 1.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if kind.raw(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (kind.raw(lo) - 1.0).abs() < (kind.raw(hi) - 1.0).abs() {
        lo
    } else {
        hi
    }
}

/// `n` log-spaced points in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `Σ M(|x_i|)`.
pub fn orlicz_modular(x: &[f64], m: &OrliczFunction) -> f64 {
    x.iter().map(|v| m.eval(v.abs())).sum()
}

/// Default bracket width for [`luxemburg_norm`], relative to `max |x_i|`.
pub const LUXEMBURG_TOL: f64 = 1e-10;

/// Luxemburg gauge `inf{ρ > 0 : Σ M(|x_i|/ρ) <= 1}` by bisection.
///
/// The bracket is `[‖x‖_∞, d‖x‖_∞]`: at `ρ = ‖x‖_∞` the largest term alone
/// is `M(1) = 1`, and at `ρ = d‖x‖_∞` convexity gives `M(|x_i|/ρ) <= 1/d`.
/// `tol` is the final bracket width in units of `‖x‖_∞`; bisection also
/// stops once the midpoint no longer moves.
pub fn luxemburg_norm(x: &[f64], m: &OrliczFunction, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(invalid("tol", tol, "tolerance must be positive"));
    }
    if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("coefficient {bad}")));
    }
    let top = max_abs(x);
    if top == 0.0 {
        return Ok(0.0);
    }
    let y: Vec<f64> = x.iter().map(|v| v.abs() / top).collect();
    let modular = |rho: f64| y.iter().map(|v| m.eval(v / rho)).sum::<f64>();
    let (mut lo, mut hi) = (1.0, y.len() as f64);
    let (at_lo, at_hi) = (modular(lo), modular(hi));
    if !(at_lo.is_finite() && at_hi.is_finite()) {
        return Err(Error::NonFinite("modular at bracket endpoint".into()));
    }
    if lo == hi {
        return Ok(top);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if modular(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(top * 0.5 * (lo + hi))
}

/// Entrywise `|x_i|^α`.
pub fn power_transform(x: &[f64], alpha: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid("alpha", alpha, "power must be positive"));
    }
    Ok(power_unchecked(x, alpha))
}

fn power_unchecked(x: &[f64], alpha: f64) -> Vec<f64> {
    if alpha == 1.0 {
        x.iter().map(|v| v.abs()).collect()
    } else {
        x.iter().map(|v| v.abs().powf(alpha)).collect()
    }
}

/// `‖|x|^q‖_base^{1/q}`.
pub fn convexified_norm<N: LatticeNorm + ?Sized>(x: &[f64], base: &N, q: f64) -> Result<f64> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(invalid("q", q, "convexification exponent must be >= 1"));
    }
    Ok(convexified_unchecked(x, base, q))
}

fn convexified_unchecked<N: LatticeNorm + ?Sized>(x: &[f64], base: &N, q: f64) -> f64 {
    if q == 1.0 {
        return base.norm(x);
    }
    base.norm(&power_unchecked(x, q)).powf(1.0 / q)
}

/// `‖|x|^{1/s}‖_base^s`.
pub fn concavified_norm<N: LatticeNorm + ?Sized>(x: &[f64], base: &N, s: f64) -> Result<f64> {
    if !(s >= 1.0 && s.is_finite()) {
        return Err(invalid("s", s, "concavification exponent must be >= 1"));
    }
    Ok(concavified_unchecked(x, base, s))
}

fn concavified_unchecked<N: LatticeNorm + ?Sized>(x: &[f64], base: &N, s: f64) -> f64 {
    if s == 1.0 {
        return base.norm(x);
    }
    base.norm(&power_unchecked(x, 1.0 / s)).powf(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotone {
    Increasing,
    Decreasing,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthCheck {
    pub passes: bool,
    /// Smallest `C` such that `M(t)/t^p` is within factor `C` of a monotone
    /// function on the grid.
    pub constant: f64,
}

/// The default grid: 64 log-spaced points in `[1e-4, 1e4]`.
pub fn default_growth_grid() -> Vec<f64> {
    log_grid(1e-4, 1e4, 64)
}

/// Tests whether `g(t) = M(t)/t^p` is equivalent, within `max_constant`, to
/// a monotone function on `grid`.
///
/// For the increasing direction the envelope is the running maximum and the
/// constant is `max_j max_{i<=j} g(t_i) / g(t_j)`; the decreasing case uses
/// the running minimum.
pub fn orlicz_growth_check(
    m: &OrliczFunction,
    p: f64,
    direction: Monotone,
    grid: &[f64],
    max_constant: f64,
) -> Result<GrowthCheck> {
    if grid.len() < 16 {
        return Err(Error::Degenerate(format!(
            "growth grid needs at least 16 points, got {}",
            grid.len()
        )));
    }
    if grid[0] <= 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Degenerate("growth grid must be positive and strictly increasing".into()));
    }
    if grid[grid.len() - 1] / grid[0] < 1e4 * (1.0 - 1e-12) {
        return Err(Error::Degenerate("growth grid must span at least 4 decades".into()));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(invalid("p", p, "growth exponent must be positive"));
    }
    let mut constant: f64 = 1.0;
    let mut envelope: Option<f64> = None;
    for &t in grid {
        let g = m.eval(t) / t.powf(p);
        let env = match (direction, envelope) {
            (_, None) => g,
            (Monotone::Increasing, Some(e)) => e.max(g),
            (Monotone::Decreasing, Some(e)) => e.min(g),
        };
        envelope = Some(env);
        let ratio = match direction {
            Monotone::Increasing => env / g,
            Monotone::Decreasing => g / env,
        };
        constant = constant.max(ratio);
    }
    Ok(GrowthCheck {
        passes: constant <= max_constant,
        constant,
    })
}

/// A 1-unconditional norm on finite coefficient vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceNorm {
    Lp { p: f64 },
    Linf,
    Orlicz { m: OrliczFunction },
    Convexified { base: Box<SequenceNorm>, q: f64 },
    Concavified { base: Box<SequenceNorm>, s: f64 },
}

impl SequenceNorm {
    pub fn lp(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            return Ok(SequenceNorm::Linf);
        }
        let n = SequenceNorm::Lp { p };
        n.validate()?;
        Ok(n)
    }

    pub fn orlicz(m: OrliczFunction) -> Self {
        SequenceNorm::Orlicz { m }
    }

    pub fn convexified(base: SequenceNorm, q: f64) -> Result<Self> {
        let n = SequenceNorm::Convexified {
            base: Box::new(base),
            q,
        };
        n.validate()?;
        Ok(n)
    }

    pub fn concavified(base: SequenceNorm, s: f64) -> Result<Self> {
        let n = SequenceNorm::Concavified {
            base: Box::new(base),
            s,
        };
        n.validate()?;
        Ok(n)
    }

    /// Checks parameters of deserialized norms.
    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceNorm::Lp { p } => {
                if !(*p >= 1.0) {
                    return Err(invalid("p", *p, "l_p is a norm only for p >= 1"));
                }
            }
            SequenceNorm::Linf | SequenceNorm::Orlicz { .. } => {}
            SequenceNorm::Convexified { base, q } => {
                if !(*q >= 1.0 && q.is_finite()) {
                    return Err(invalid("q", *q, "convexification exponent must be >= 1"));
                }
                base.validate()?;
            }
            SequenceNorm::Concavified { base, s } => {
                if !(*s >= 1.0 && s.is_finite()) {
                    return Err(invalid("s", *s, "concavification exponent must be >= 1"));
                }
                base.validate()?;
            }
        }
        Ok(())
    }

    /// Unconditionality constant. Every built-in norm depends on `|x|` only.
    pub fn unconditional_constant(&self) -> f64 {
        1.0
    }
}

/// Bracket width used when a [`SequenceNorm::Orlicz`] is evaluated as a norm:
/// bisection runs to machine precision so homogeneity holds to rounding.
const NORM_TOL: f64 = f64::EPSILON;

impl LatticeNorm for SequenceNorm {
    fn norm(&self, x: &[f64]) -> f64 {
        match self {
            SequenceNorm::Lp { p } => lp_unchecked(x, *p),
            SequenceNorm::Linf => max_abs(x),
            SequenceNorm::Orlicz { m } => luxemburg_norm(x, m, NORM_TOL).unwrap_or(f64::NAN),
            SequenceNorm::Convexified { base, q } => convexified_unchecked(x, base.as_ref(), *q),
            SequenceNorm::Concavified { base, s } => concavified_unchecked(x, base.as_ref(), *s),
        }
    }
}
