//! Estimators for convexity/concavity constants, `L_r`-vs-`L_1` equivalence
//! constants, change-of-density search and embedding distortion.
//!
//! Suprema are estimated by randomized search followed by greedy coordinate
//! polish, so every returned supremum is a lower bound on the true constant
//! (and every returned infimum an upper bound). Each sample draws from its
//! own seeded stream, so results do not depend on evaluation order.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, invalid, Error, Result};
use crate::measure::{change_of_density, ls_unchecked, AtomicMeasure, StepVector};
use crate::par;
use crate::rng::{self, tag};
use crate::sequence::{lp_unchecked, LatticeNorm};

use rand::Rng;

/// Sweeps of coordinate polish applied to each sample in [`estimate_constant`].
pub const POLISH_SWEEPS: usize = 16;

/// Floor mixed into every density produced by [`density_search`].
pub const DENSITY_FLOOR: f64 = 1e-6;

fn check_exponent(name: &'static str, v: f64) -> Result<()> {
    if v >= 1.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, v, "exponent must be finite and >= 1"))
    }
}

// (Σ_i |x_i|^q)^{1/q} taken coordinatewise
fn power_mean<'a, I: IntoIterator<Item = &'a [f64]>>(xs: I, dim: usize, q: f64) -> Vec<f64> {
    let mut acc = vec![0.0; dim];
    for x in xs {
        for (a, v) in acc.iter_mut().zip(x) {
            *a += v.abs().powf(q);
        }
    }
    acc.iter_mut().for_each(|a| *a = a.powf(1.0 / q));
    acc
}

fn tuple_dim(xs: &[&[f64]]) -> Result<usize> {
    let dim = xs.first().map(|x| x.len()).ok_or_else(|| Error::Degenerate("empty tuple".into()))?;
    for x in xs {
        check_dims(dim, x.len())?;
    }
    if xs.iter().all(|x| x.iter().all(|&v| v == 0.0)) {
        return Err(Error::Degenerate("all vectors in the tuple are zero".into()));
    }
    Ok(dim)
}

/// `(Σ‖x_i‖^r)^{1/r} / ‖(Σ|x_i|^r)^{1/r}‖`. The `r`-concavity constant is
/// the supremum of this ratio over all finite tuples.
pub fn concavity_ratio<N: LatticeNorm + ?Sized>(e: &N, xs: &[&[f64]], r: f64) -> Result<f64> {
    check_exponent("r", r)?;
    let dim = tuple_dim(xs)?;
    let norms: Vec<f64> = xs.iter().map(|x| e.norm(x)).collect();
    let top = lp_unchecked(&norms, r);
    let bottom = e.norm(&power_mean(xs.iter().copied(), dim, r));
    Ok(top / bottom)
}

/// `‖(Σ|x_i|^p)^{1/p}‖ / (Σ‖x_i‖^p)^{1/p}`.
pub fn convexity_ratio<N: LatticeNorm + ?Sized>(e: &N, xs: &[&[f64]], p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    let dim = tuple_dim(xs)?;
    let norms: Vec<f64> = xs.iter().map(|x| e.norm(x)).collect();
    let top = e.norm(&power_mean(xs.iter().copied(), dim, p));
    Ok(top / lp_unchecked(&norms, p))
}

/// Which lattice constant to estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ConstantMode {
    Convexity { p: f64 },
    Concavity { r: f64 },
}

impl ConstantMode {
    fn ratio<N: LatticeNorm + ?Sized>(&self, e: &N, flat: &[f64], dim: usize) -> f64 {
        let xs: Vec<&[f64]> = flat.chunks(dim).collect();
        let v = match *self {
            ConstantMode::Convexity { p } => convexity_ratio(e, &xs, p),
            ConstantMode::Concavity { r } => concavity_ratio(e, &xs, r),
        };
        v.unwrap_or(f64::NAN)
    }

    fn exponent(&self) -> (&'static str, f64) {
        match *self {
            ConstantMode::Convexity { p } => ("p", p),
            ConstantMode::Concavity { r } => ("r", r),
        }
    }
}

/// Greedy coordinate ascent on `f` from `x`, returning the final value.
///
/// Each sweep tries `x_i ± step` for `i` in index order and keeps the first
/// improving move per coordinate; a sweep without improvement halves the
/// step. NaN values never count as improvements.
pub fn coordinate_ascent<F: Fn(&[f64]) -> f64>(x: &mut [f64], f: F, sweeps: usize) -> f64 {
    let mut best = f(x);
    let mut step = 0.5 * x.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-3);
    for _ in 0..sweeps {
        let mut improved = false;
        for i in 0..x.len() {
            let orig = x[i];
            for dir in [1.0, -1.0] {
                x[i] = orig + dir * step;
                let v = f(x);
                if v > best || (best.is_nan() && !v.is_nan()) {
                    best = v;
                    improved = true;
                    break;
                }
                x[i] = orig;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// Randomized lower bound for the convexity or concavity constant of `e`:
/// `budget` random tuples of `tuple_size` vectors in `R^dim`, each polished
/// by [`coordinate_ascent`], maximum taken over samples. Sample `k` depends
/// only on `(seed, k)`, so a larger budget never returns a smaller value.
pub fn estimate_constant<N: LatticeNorm + ?Sized>(
    e: &N,
    mode: ConstantMode,
    dim: usize,
    tuple_size: usize,
    budget: usize,
    seed: u64,
) -> Result<f64> {
    let (name, q) = mode.exponent();
    check_exponent(name, q)?;
    if budget == 0 || dim == 0 || tuple_size == 0 {
        return Err(Error::Degenerate("budget, dim and tuple size must be >= 1".into()));
    }
    let values = par::map_indexed(budget, |k| {
        let mut rng = rng::stream(seed, rng::tagged(tag::ESTIMATE, k as u64));
        let mut flat: Vec<f64> = (0..tuple_size)
            .flat_map(|_| rng::probe_direction(&mut rng, dim).into_iter().map(f64::abs))
            .collect();
        coordinate_ascent(&mut flat, |x| mode.ratio(e, x, dim), POLISH_SWEEPS)
    });
    Ok(values.into_iter().filter(|v| !v.is_nan()).fold(f64::NEG_INFINITY, f64::max))
}

/// Result of [`certify_norm_equivalence`].
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceCertificate {
    /// Largest observed `‖x‖_{L_r} / ‖x‖_{L_1}` on the span, a lower bound on
    /// the true constant.
    pub constant: f64,
    /// Coefficients of the witnessing span element.
    pub witness: Vec<f64>,
}

fn rl_ratio(xs: &[StepVector], mu: &AtomicMeasure, r: f64, c: &[f64]) -> f64 {
    let y = match StepVector::combine(c, xs) {
        Ok(y) => y,
        Err(_) => return f64::NAN,
    };
    let l1 = ls_unchecked(&y, mu, 1.0);
    if l1 == 0.0 {
        return f64::NAN;
    }
    if r == 1.0 {
        return 1.0;
    }
    ls_unchecked(&y, mu, r) / l1
}

/// Samples that get coordinate polish in the span searches.
const POLISHED_SAMPLES: usize = 4;

/// Estimates `K_2 = sup_{x ∈ span xs} ‖x‖_{L_r(μ)} / ‖x‖_{L_1(μ)}`.
pub fn certify_norm_equivalence(
    xs: &[StepVector],
    mu: &AtomicMeasure,
    r: f64,
    budget: usize,
    seed: u64,
) -> Result<EquivalenceCertificate> {
    check_exponent("r", r)?;
    if budget == 0 {
        return Err(Error::Degenerate("budget must be >= 1".into()));
    }
    if xs.is_empty() {
        return Err(Error::Degenerate("empty span".into()));
    }
    for (i, x) in xs.iter().enumerate() {
        check_dims(mu.len(), x.len())?;
        if x.iter().all(|&v| v == 0.0) {
            return Err(Error::Degenerate(format!("span vector {i} is zero")));
        }
    }
    let m = xs.len();
    let samples = par::map_indexed(budget, |k| {
        let mut rng = rng::stream(seed, rng::tagged(tag::CERTIFY, k as u64));
        // the first m samples are the basis vectors themselves
        let c = if k < m {
            let mut e = vec![0.0; m];
            e[k] = 1.0;
            e
        } else {
            rng::probe_direction(&mut rng, m)
        };
        let v = rl_ratio(xs, mu, r, &c);
        (v, c)
    });
    let mut ranked: Vec<(f64, Vec<f64>)> = samples.into_iter().filter(|(v, _)| !v.is_nan()).collect();
    if ranked.is_empty() {
        return Err(Error::Degenerate("span is numerically zero".into()));
    }
    if r == 1.0 {
        return Ok(EquivalenceCertificate {
            constant: 1.0,
            witness: ranked.swap_remove(0).1,
        });
    }
    // stable sort keeps index order among ties
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
    ranked.truncate(POLISHED_SAMPLES);
    let polished = par::map_indexed(ranked.len(), |k| {
        let mut c = ranked[k].1.clone();
        let v = coordinate_ascent(&mut c, |c| rl_ratio(xs, mu, r, c), POLISH_SWEEPS);
        (v.max(ranked[k].0), c)
    });
    let (constant, witness) = polished
        .into_iter()
        .fold((f64::NEG_INFINITY, Vec::new()), |best, cur| if cur.0 > best.0 { cur } else { best });
    Ok(EquivalenceCertificate { constant, witness })
}

/// Result of [`density_search`].
#[derive(Clone, Debug)]
pub struct DensityResult {
    /// Density with respect to `μ`; strictly positive, `Σ h_t μ_t = 1`.
    pub h: StepVector,
    /// Certified `K_2` of the span under `hμ`.
    pub constant: f64,
    /// Certified `K_2` for `h ≡ 1`.
    pub uniform_constant: f64,
    /// Certified `K_2` after each iteration.
    pub history: Vec<f64>,
}

/// Random samples per certification inside [`density_search`].
pub const DENSITY_CERTIFY_BUDGET: usize = 64;

/// Searches for a density `h` making `L_r(hμ)` and `L_1(hμ)` equivalent on
/// the span of `xs / h`.
///
/// Iterative reweighting: keep a pool of span elements (the basis plus the
/// witness of every certification), set the target density to the mixture of
/// normalized `|y_k|` weighted by the square of each element's current
/// `L_r/L_1` ratio, and move `h` toward it (fully on the first iteration,
/// halfway afterwards). A uniform floor `ε = 1e-6` keeps `h > 0`. The best
/// certified density is returned, so the result is never worse than `h ≡ 1`.
pub fn density_search(
    xs: &[StepVector],
    mu: &AtomicMeasure,
    r: f64,
    iterations: usize,
    seed: u64,
) -> Result<DensityResult> {
    check_exponent("r", r)?;
    if iterations == 0 {
        return Err(Error::Degenerate("iterations must be >= 1".into()));
    }
    if !mu.is_probability() {
        return Err(invalid("mu", mu.total(), "density search needs a probability measure"));
    }
    let n = mu.len();
    let m = xs.len();
    let certify = |h: &StepVector, it: u64| -> Result<EquivalenceCertificate> {
        let (nu, ys) = change_of_density(xs, mu, h)?;
        certify_norm_equivalence(&ys, &nu, r, DENSITY_CERTIFY_BUDGET, seed ^ rng::tagged(tag::DENSITY, it))
    };
    let mut h = StepVector::constant(n, 1.0);
    let first = certify(&h, 0)?;
    let uniform_constant = first.constant;
    let mut best = (h.clone(), first.constant);
    let mut history = Vec::with_capacity(iterations);
    let mut pool: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut e = vec![0.0; m];
            e[i] = 1.0;
            e
        })
        .collect();
    pool.push(first.witness);

    for it in 0..iterations {
        let targets: Vec<(f64, Vec<f64>)> = pool
            .iter()
            .filter_map(|c| {
                let y = StepVector::combine(c, xs).ok()?;
                let l1 = ls_unchecked(&y, mu, 1.0);
                if l1 == 0.0 {
                    return None;
                }
                let ratio = if r == 1.0 {
                    1.0
                } else {
                    let scaled: Vec<f64> = y.iter().zip(h.iter()).map(|(v, d)| v / d).collect();
                    let nu_w: Vec<f64> = h.iter().zip(mu.weights()).map(|(a, b)| a * b).collect();
                    let nu = AtomicMeasure::new(nu_w).ok()?;
                    ls_unchecked(&scaled, &nu, r) / l1
                };
                Some((ratio * ratio, y.iter().map(|v| v.abs() / l1).collect()))
            })
            .collect();
        let total: f64 = targets.iter().map(|t| t.0).sum();
        let step = if it == 0 { 1.0 } else { 0.5 };
        let mut next = vec![0.0; n];
        for (t, nx) in next.iter_mut().enumerate() {
            let target: f64 = targets.iter().map(|(w, d)| w * d[t]).sum::<f64>() / total;
            *nx = (1.0 - step) * h[t] + step * target;
            *nx = (1.0 - DENSITY_FLOOR) * *nx + DENSITY_FLOOR;
        }
        let mass: f64 = par::fixed_sum(&next.iter().zip(mu.weights()).map(|(a, b)| a * b).collect::<Vec<_>>());
        next.iter_mut().for_each(|v| *v /= mass);
        h = StepVector::new(next)?;
        let cert = certify(&h, it as u64 + 1)?;
        history.push(cert.constant);
        if cert.constant < best.1 {
            best = (h.clone(), cert.constant);
        }
        pool.push(cert.witness);
    }
    Ok(DensityResult {
        h: best.0,
        constant: best.1,
        uniform_constant,
        history,
    })
}

/// A linear map from `R^d` into some `L_1` space.
pub trait LinearMap: Sync {
    fn domain_dim(&self) -> usize;
    /// `‖T a‖_{L_1}`.
    fn image_norm(&self, a: &[f64]) -> f64;
}

/// Two-sided ratio bounds of a linear map against a domain norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistortionReport {
    /// Smallest observed `‖Ta‖/‖a‖`: an upper bound on the true infimum.
    pub lower_ratio: f64,
    /// Largest observed `‖Ta‖/‖a‖`: a lower bound on the true supremum.
    pub upper_ratio: f64,
    pub distortion: f64,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub budget: usize,
    pub seed: u64,
    pub polish_iterations: usize,
}

impl DistortionReport {
    pub fn with_constants(mut self, k1: f64, k2: f64) -> Self {
        self.k1 = Some(k1);
        self.k2 = Some(k2);
        self
    }
}

/// Estimates the distortion of `map` against `domain`.
///
/// `budget` random directions are evaluated, then the extreme samples get
/// `polish_sweeps` sweeps of coordinate polish (maximizing the ratio for the
/// upper bound, minimizing it for the lower bound).
pub fn distortion<T, N>(map: &T, domain: &N, budget: usize, polish_sweeps: usize, seed: u64) -> Result<DistortionReport>
where
    T: LinearMap + ?Sized,
    N: LatticeNorm + ?Sized,
{
    if budget == 0 {
        return Err(Error::Degenerate("budget must be >= 1".into()));
    }
    let d = map.domain_dim();
    let ratio = |a: &[f64]| {
        let n = domain.norm(a);
        if n == 0.0 {
            f64::NAN
        } else {
            map.image_norm(a) / n
        }
    };
    let samples = par::map_indexed(budget, |k| {
        let mut rng = rng::stream(seed, rng::tagged(tag::DISTORTION, k as u64));
        let mut a = rng::probe_direction(&mut rng, d);
        let n = domain.norm(&a);
        if n > 0.0 {
            a.iter_mut().for_each(|v| *v /= n);
        }
        // occasionally flip to a pure coordinate direction
        if rng.gen_bool(0.1) {
            let i = rng.gen_range(0..d);
            a.iter_mut().for_each(|v| *v = 0.0);
            a[i] = 1.0;
        }
        (ratio(&a), a)
    });
    let valid: Vec<&(f64, Vec<f64>)> = samples.iter().filter(|s| !s.0.is_nan()).collect();
    if valid.is_empty() {
        return Err(Error::Degenerate("domain norm vanished on every sample".into()));
    }
    let hi = valid.iter().fold(valid[0], |b, s| if s.0 > b.0 { s } else { b });
    let lo = valid.iter().fold(valid[0], |b, s| if s.0 < b.0 { s } else { b });
    if hi.0 == 0.0 {
        return Err(Error::Degenerate("zero map".into()));
    }
    let mut up = hi.1.clone();
    let upper = coordinate_ascent(&mut up, ratio, polish_sweeps).max(hi.0);
    let mut down = lo.1.clone();
    let lower = (-coordinate_ascent(&mut down, |a| -ratio(a), polish_sweeps)).min(lo.0);
    Ok(DistortionReport {
        lower_ratio: lower,
        upper_ratio: upper,
        distortion: upper / lower,
        k1: None,
        k2: None,
        budget,
        seed,
        polish_iterations: polish_sweeps,
    })
}
