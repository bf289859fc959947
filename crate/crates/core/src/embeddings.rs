//! Explicit embeddings into `L_1`.
//!
//! Stable and Gaussian realizations of `ℓ_α` inside `L_1`, the exact
//! disjoint-block model of `ℓ_1`, the tensor map `a ↦ Σ_i e_i ⊗ x_i`, the
//! per-instance verification of its two-sided bound, and the concavification
//! and Gaussian/Rademacher tensoring constructions.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::constants::LinearMap;
use crate::error::{check_dims, invalid, Error, Result};
use crate::measure::{iterated_tensor_ls, ls_unchecked, AtomicMeasure, StepVector};
use crate::par::{self, CHUNK};
use crate::realization::BasisRealization;
use crate::rng::{self, tag};
use crate::sequence::LatticeNorm;

/// Minimum atom count for sampled realizations.
pub const MIN_STABLE_ATOMS: usize = 100;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Divide each coordinate by its sample mean of `|f_i|`.
    #[default]
    EmpiricalL1,
    /// Divide by the closed-form `E|X|` of the standard stable law.
    Analytic,
}

/// Parameters of a symmetric `α`-stable realization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StableSampleSpec {
    pub alpha: f64,
    pub dim: usize,
    pub atoms: usize,
    pub seed: u64,
    #[serde(default)]
    pub normalization: Normalization,
}

impl StableSampleSpec {
    pub fn new(alpha: f64, dim: usize, atoms: usize, seed: u64) -> Self {
        Self {
            alpha,
            dim,
            atoms,
            seed,
            normalization: Normalization::EmpiricalL1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.is_nan() || self.alpha <= 1.0 {
            return Err(invalid(
                "alpha",
                self.alpha,
                "stable index must exceed 1: the L_1 normalization needs a finite first moment",
            ));
        }
        if self.alpha > 2.0 {
            return Err(invalid("alpha", self.alpha, "stable index must be at most 2"));
        }
        if self.dim == 0 {
            return Err(Error::Degenerate("stable realization with dimension 0".into()));
        }
        if self.atoms < MIN_STABLE_ATOMS {
            return Err(invalid("atoms", self.atoms as f64, "stable realizations need at least 100 atoms"));
        }
        Ok(())
    }
}

/// One standard symmetric `α`-stable draw (characteristic function
/// `exp(-|t|^α)`) by the Chambers–Mallows–Stuck transform of a uniform angle
/// `u ∈ (-π/2, π/2)` and a unit exponential `w`.
pub fn cms_symmetric(alpha: f64, u: f64, w: f64) -> f64 {
    let a = (alpha * u).sin() / u.cos().powf(1.0 / alpha);
    let b = (((1.0 - alpha) * u).cos() / w).powf((1.0 - alpha) / alpha);
    a * b
}

/// `E|X|` for the standard symmetric `α`-stable law, `α > 1`.
pub fn stable_abs_mean(alpha: f64) -> f64 {
    2.0 * libm::tgamma(1.0 - 1.0 / alpha) / std::f64::consts::PI
}

fn draw_stable_column(spec: &StableSampleSpec, i: usize) -> Vec<f64> {
    let n = spec.atoms;
    let chunks = par::map_indexed(n.div_ceil(CHUNK), |c| {
        let stream = rng::tagged(tag::STABLE, ((i as u64) << 24) | c as u64);
        let mut rng = rng::stream(spec.seed, stream);
        let len = CHUNK.min(n - c * CHUNK);
        (0..len)
            .map(|_| {
                let u = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
                let w: f64 = rng.sample(Exp1);
                cms_symmetric(spec.alpha, u, w)
            })
            .collect::<Vec<_>>()
    });
    chunks.concat()
}

/// Independent symmetric `α`-stable coordinates on `atoms` equally weighted
/// atoms, each normalized in `L_1`.
pub fn sample_stable(spec: &StableSampleSpec) -> Result<BasisRealization> {
    spec.validate()?;
    let measure = AtomicMeasure::uniform(spec.atoms)?;
    let basis = (0..spec.dim)
        .map(|i| {
            let mut v = draw_stable_column(spec, i);
            let scale = match spec.normalization {
                Normalization::EmpiricalL1 => ls_unchecked(&v, &measure, 1.0),
                Normalization::Analytic => stable_abs_mean(spec.alpha),
            };
            v.iter_mut().for_each(|x| *x /= scale);
            StepVector::new(v)
        })
        .collect::<Result<Vec<_>>>()?;
    BasisRealization::new(measure, basis, spec.seed)
}

/// Gaussian coordinates: [`sample_stable`] at `α = 2`.
pub fn sample_gaussian(dim: usize, atoms: usize, seed: u64) -> Result<BasisRealization> {
    sample_stable(&StableSampleSpec::new(2.0, dim, atoms, seed))
}

/// Independent random signs on `atoms` equally weighted atoms.
pub fn sample_rademacher(dim: usize, atoms: usize, seed: u64) -> Result<BasisRealization> {
    if dim == 0 || atoms == 0 {
        return Err(Error::Degenerate("empty Rademacher realization".into()));
    }
    let measure = AtomicMeasure::uniform(atoms)?;
    let basis = (0..dim)
        .map(|i| {
            let mut rng = rng::stream(seed, rng::tagged(tag::RADEMACHER, i as u64));
            StepVector::new((0..atoms).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    BasisRealization::new(measure, basis, seed)
}

/// Normalized indicators of `dim` disjoint blocks of a uniform measure on
/// `atoms` atoms: an exact isometric copy of `ℓ_1^dim`.
pub fn realize_l1_disjoint(dim: usize, atoms: usize) -> Result<BasisRealization> {
    if dim == 0 {
        return Err(Error::Degenerate("dimension 0".into()));
    }
    if atoms < dim {
        return Err(invalid("atoms", atoms as f64, "need at least one atom per basis vector"));
    }
    let measure = AtomicMeasure::uniform(atoms)?;
    let (base, extra) = (atoms / dim, atoms % dim);
    let mut start = 0;
    let basis = (0..dim)
        .map(|i| {
            let len = base + usize::from(i < extra);
            let mass = len as f64 / atoms as f64;
            let mut v = vec![0.0; atoms];
            v[start..start + len].iter_mut().for_each(|x| *x = 1.0 / mass);
            start += len;
            StepVector::new(v)
        })
        .collect::<Result<Vec<_>>>()?;
    BasisRealization::new(measure, basis, 0)
}

/// Rescales every basis vector to unit `L_s` norm.
pub fn normalize_in_ls(real: &BasisRealization, s: f64, seed: u64) -> Result<BasisRealization> {
    if !(s >= 1.0) {
        return Err(invalid("s", s, "L_s is a norm only for s >= 1"));
    }
    let basis = real
        .basis()
        .iter()
        .map(|e| {
            let n = ls_unchecked(e, real.measure(), s);
            StepVector::new(e.iter().map(|v| v / n).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    BasisRealization::new(real.measure().clone(), basis, seed)
}

/// Second factor of a tensor embedding.
#[derive(Clone, Debug)]
pub enum TensorFactor {
    /// A realized basis `{f_j}`; the domain is `m × dim` matrices.
    Realization(BasisRealization),
    /// Arbitrary vectors spanning `X ⊂ L_1(μ)`.
    Vectors {
        measure: AtomicMeasure,
        vectors: Vec<StepVector>,
    },
}

/// `A ↦ Σ_i e_i ⊗ (Σ_j a_ij f_j)` from `rows × cols` matrices (row-major)
/// into `L_1(λ × μ)`.
#[derive(Clone, Debug)]
pub struct EmbeddingMap {
    e_real: BasisRealization,
    measure: AtomicMeasure,
    f: Vec<StepVector>,
}

/// Builds the tensor embedding of `e_real` (over `λ`) with `factor` (over `μ`).
pub fn tensor_embed(e_real: BasisRealization, factor: TensorFactor) -> Result<EmbeddingMap> {
    let (measure, f) = match factor {
        TensorFactor::Realization(r) => (r.measure().clone(), r.basis().to_vec()),
        TensorFactor::Vectors { measure, vectors } => (measure, vectors),
    };
    if f.is_empty() {
        return Err(Error::Degenerate("tensor factor with no vectors".into()));
    }
    for v in &f {
        check_dims(measure.len(), v.len())?;
    }
    Ok(EmbeddingMap { e_real, measure, f })
}

impl EmbeddingMap {
    pub fn rows(&self) -> usize {
        self.e_real.dim()
    }

    pub fn cols(&self) -> usize {
        self.f.len()
    }

    pub fn e_real(&self) -> &BasisRealization {
        &self.e_real
    }

    pub fn measure(&self) -> &AtomicMeasure {
        &self.measure
    }

    pub fn factor(&self) -> &[StepVector] {
        &self.f
    }

    /// The blocks `x_i = Σ_j a_ij f_j`.
    pub fn blocks(&self, a: &[f64]) -> Result<Vec<StepVector>> {
        check_dims(self.rows() * self.cols(), a.len())?;
        a.chunks(self.cols()).map(|row| StepVector::combine(row, &self.f)).collect()
    }

    /// `‖T a‖_{L_s(λ×μ)}`.
    pub fn image_ls_norm(&self, a: &[f64], s: f64) -> Result<f64> {
        iterated_tensor_ls(&self.e_real, &self.blocks(a)?, &self.measure, s)
    }

    /// `T a` on the materialized product grid, `λ` index varying slowest.
    /// Only for small instances.
    pub fn image(&self, a: &[f64]) -> Result<StepVector> {
        let blocks = self.blocks(a)?;
        let lam = self.e_real.measure();
        let mut out = Vec::with_capacity(lam.len() * self.measure.len());
        for p in lam.product(&self.measure) {
            let v: f64 = self
                .e_real
                .basis()
                .iter()
                .zip(&blocks)
                .map(|(e, x)| e[p.s_atom] * x[p.t_atom])
                .sum();
            out.push(v);
        }
        StepVector::new(out)
    }

    /// The product measure `λ × μ` matching [`EmbeddingMap::image`].
    pub fn product_measure(&self) -> Result<AtomicMeasure> {
        AtomicMeasure::new(self.e_real.measure().product(&self.measure).map(|p| p.weight).collect())
    }
}

impl LinearMap for EmbeddingMap {
    fn domain_dim(&self) -> usize {
        self.rows() * self.cols()
    }

    fn image_norm(&self, a: &[f64]) -> f64 {
        self.image_ls_norm(a, 1.0).unwrap_or(f64::NAN)
    }
}

impl LinearMap for BasisRealization {
    fn domain_dim(&self) -> usize {
        self.dim()
    }

    fn image_norm(&self, a: &[f64]) -> f64 {
        self.l1_norm(a)
    }
}

/// Tolerance for each inequality of the chain, relative to its larger side.
pub const CHAIN_TOL: f64 = 1e-9;

/// Every member of the two-sided chain
/// `L ≤ T ≤ K_u·M1 ≤ K_u·K1·M2 ≤ K_u·K1·K2·L`, where `K_u` is the certified
/// unconditionality constant of `{e_i}` (exactly 1 for disjoint bases).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    /// `‖Σ ‖x_i‖_1 e_i‖_{L_1(λ)}`
    pub l: f64,
    /// `‖Σ e_i ⊗ x_i‖_{L_1(λ×μ)}`
    pub t: f64,
    /// `∫ ‖Σ |x_i(t)| e_i‖ dμ`; equals `t` when `{e_i}` is 1-unconditional.
    pub t_abs: f64,
    /// `(∫ ‖Σ |x_i(t)| e_i‖^r dμ)^{1/r}`
    pub m1: f64,
    /// `‖Σ ‖x_i‖_{L_r(μ)} e_i‖`
    pub m2: f64,
    /// Concavity ratio witnessed by the integral-form tuple, `m1 / m2`.
    pub k1: f64,
    /// `max_i ‖x_i‖_{L_r} / ‖x_i‖_{L_1}`
    pub k2: f64,
    /// Relative slack `(rhs - lhs) / max(lhs, rhs)` of `L ≤ T`, `T ≤ K_u·M1`,
    /// `M1 ≤ K1·M2` and `K1·M2 ≤ K1·K2·L`.
    pub slacks: [f64; 4],
    /// Certified unconditionality constant of `{e_i}`.
    pub unconditional_constant: f64,
    pub passes: bool,
}

fn rel_slack(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (rhs - lhs) / scale
    }
}

/// Computes every member of the chain for blocks `xs` over the probability
/// measure `μ` and checks each inequality to [`CHAIN_TOL`].
pub fn verify_theorem_chain(
    e_real: &BasisRealization,
    xs: &[StepVector],
    mu: &AtomicMeasure,
    r: f64,
) -> Result<ChainReport> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(invalid("r", r, "concavity exponent must be >= 1"));
    }
    if !mu.is_probability() {
        return Err(invalid("mu", mu.total(), "the Hölder step needs a probability measure"));
    }
    check_dims(e_real.dim(), xs.len())?;
    for x in xs {
        check_dims(mu.len(), x.len())?;
    }
    let m = xs.len();
    let l1: Vec<f64> = xs.iter().map(|x| ls_unchecked(x, mu, 1.0)).collect();
    let lr: Vec<f64> = xs.iter().map(|x| ls_unchecked(x, mu, r)).collect();
    if l1.iter().all(|&v| v == 0.0) {
        return Err(Error::Degenerate("all blocks are zero".into()));
    }
    let l = e_real.l1_norm(&l1);
    let t = iterated_tensor_ls(e_real, xs, mu, 1.0)?;
    let phis = par::map_indexed(mu.len(), |ti| {
        let c: Vec<f64> = xs.iter().map(|x| x[ti].abs()).collect();
        if c.iter().all(|&v| v == 0.0) {
            0.0
        } else {
            e_real.l1_norm(&c)
        }
    });
    let w = mu.weights();
    let t_abs = par::chunked_sum(mu.len(), |i| w[i] * phis[i]);
    let m1 = par::chunked_sum(mu.len(), |i| w[i] * phis[i].powf(r)).powf(1.0 / r);
    let m2 = e_real.l1_norm(&lr);
    let k1 = m1 / m2;
    let k2 = (0..m)
        .filter(|&i| l1[i] > 0.0)
        .map(|i| lr[i] / l1[i])
        .fold(1.0, f64::max);
    let slacks = [
        rel_slack(l, t),
        rel_slack(t, e_real.unconditional_constant() * m1),
        rel_slack(m1, k1 * m2),
        rel_slack(k1 * m2, k1 * k2 * l),
    ];
    Ok(ChainReport {
        l,
        t,
        t_abs,
        m1,
        m2,
        k1,
        k2,
        slacks,
        unconditional_constant: e_real.unconditional_constant(),
        passes: slacks.iter().all(|&s| s >= -CHAIN_TOL),
    })
}

/// The span of `g_i = f_i ⊗ |x_i|^s` in `L_1`, with `f_i` independent
/// `2/s`-stable variables normalized in `L_1`. Evaluated lazily over the
/// product of the stable atoms and the atoms of `x`.
#[derive(Clone, Debug)]
pub struct ConcavifiedRealization {
    stable: BasisRealization,
    measure: AtomicMeasure,
    powers: Vec<StepVector>,
    s: f64,
}

/// Builds the concavification embedding of `x_real` (viewed in `L_s`).
/// `stable.alpha` must equal `2/s` and `stable.dim` the dimension of `x_real`.
pub fn concavify_embed(
    x_real: &BasisRealization,
    s: f64,
    stable: &StableSampleSpec,
) -> Result<ConcavifiedRealization> {
    if !(s > 1.0 && s < 2.0) {
        return Err(invalid(
            "s",
            s,
            "concavification needs 1 < s < 2 (s = 2 would need the index-1 stable law, which has no mean)",
        ));
    }
    if (stable.alpha - 2.0 / s).abs() > 1e-12 {
        return Err(invalid("alpha", stable.alpha, "stable index must equal 2/s"));
    }
    check_dims(x_real.dim(), stable.dim)?;
    let f = sample_stable(stable)?;
    let powers = x_real
        .basis()
        .iter()
        .map(|x| StepVector::new(x.iter().map(|v| v.abs().powf(s)).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConcavifiedRealization {
        stable: f,
        measure: x_real.measure().clone(),
        powers,
        s,
    })
}

impl ConcavifiedRealization {
    pub fn dim(&self) -> usize {
        self.powers.len()
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn stable(&self) -> &BasisRealization {
        &self.stable
    }

    /// `‖Σ a_i g_i‖_{L_1}`.
    pub fn l1_norm(&self, a: &[f64]) -> Result<f64> {
        check_dims(self.dim(), a.len())?;
        let blocks: Vec<StepVector> = a
            .iter()
            .zip(&self.powers)
            .map(|(c, p)| StepVector::new(p.iter().map(|v| c * v).collect()))
            .collect::<Result<_>>()?;
        iterated_tensor_ls(&self.stable, &blocks, &self.measure, 1.0)
    }

    /// Materializes `{g_i}` over the product measure, stable index varying
    /// slowest. Only for small instances.
    pub fn materialize(&self) -> Result<BasisRealization> {
        let lam = self.stable.measure();
        let weights = lam.product(&self.measure).map(|p| p.weight).collect();
        let basis = self
            .stable
            .basis()
            .iter()
            .zip(&self.powers)
            .map(|(f, x)| StepVector::new(lam.product(&self.measure).map(|p| f[p.s_atom] * x[p.t_atom]).collect()))
            .collect::<Result<Vec<_>>>()?;
        BasisRealization::new(AtomicMeasure::new(weights)?, basis, 0)
    }
}

impl LatticeNorm for ConcavifiedRealization {
    fn norm(&self, x: &[f64]) -> f64 {
        self.l1_norm(x).unwrap_or(f64::NAN)
    }
}

impl LinearMap for ConcavifiedRealization {
    fn domain_dim(&self) -> usize {
        self.dim()
    }

    fn image_norm(&self, a: &[f64]) -> f64 {
        self.norm(a)
    }
}

/// Tensoring with independent Gaussians `g_j` normalized in `L_1`:
/// `A ↦ Σ_i e_i ⊗ Σ_j a_ij g_j`.
pub fn gaussian_tensor_embed(e_real: BasisRealization, n: usize, atoms: usize, seed: u64) -> Result<EmbeddingMap> {
    let g = sample_gaussian(n, atoms, seed)?;
    tensor_embed(e_real, TensorFactor::Realization(g))
}

/// The Rademacher variant of [`gaussian_tensor_embed`]. Its rows are only
/// equivalent (Khintchine), not isometric, to `ℓ_2`.
pub fn rademacher_tensor_embed(e_real: BasisRealization, n: usize, atoms: usize, seed: u64) -> Result<EmbeddingMap> {
    if atoms < MIN_STABLE_ATOMS {
        return Err(invalid("atoms", atoms as f64, "sampled realizations need at least 100 atoms"));
    }
    let g = sample_rademacher(n, atoms, seed)?;
    tensor_embed(e_real, TensorFactor::Realization(g))
}
