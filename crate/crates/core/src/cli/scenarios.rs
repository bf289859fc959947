//! Scenario runners behind the CLI subcommands. Each returns its CSV table
//! and text summary as strings; nothing here touches the filesystem.

use std::fmt::Write as _;

use crate::cli::config::{ExperimentConfig, FactorKind};
use crate::constants::{
    certify_norm_equivalence, density_search, distortion, estimate_constant, ConstantMode, DistortionReport, LinearMap,
};
use crate::embeddings::{
    concavify_embed, normalize_in_ls, realize_l1_disjoint, sample_gaussian, tensor_embed, verify_theorem_chain,
    EmbeddingMap, StableSampleSpec, TensorFactor, CHAIN_TOL,
};
use crate::error::{Error, Result};
use crate::matrix::EfNorm;
use crate::measure::change_of_density;
use crate::realization::LsView;
use crate::rng::{self, derive_seed, tag};
use crate::sequence::{
    concavified_norm, convexified_norm, default_growth_grid, lp_norm, luxemburg_norm, orlicz_growth_check,
    LatticeNorm, Monotone, OrliczFunction, OrliczKind, SequenceNorm, LUXEMBURG_TOL,
};

/// Relative slack allowed on `distortion <= K_1 K_2`.
pub const DISTORTION_SLACK: f64 = 0.02;

/// Largest equivalence constant accepted at each stage of the sketch.
pub const SKETCH_LIMIT: f64 = 1.25;

/// Density-search iterations used by `density` and `remark2` when the
/// config leaves `density_iterations` at 0.
pub const DEFAULT_DENSITY_ITERATIONS: usize = 4;

/// Output of one scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub name: &'static str,
    pub csv: String,
    pub summary: String,
    /// Every asserted inequality held.
    pub passed: bool,
}

struct Table {
    w: csv::Writer<Vec<u8>>,
    prefix: [String; 2],
}

impl Table {
    fn new(cfg: &ExperimentConfig, columns: &[&str]) -> Result<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<&str> = ["config_hash", "seed"].iter().chain(columns).copied().collect();
        w.write_record(&header)?;
        Ok(Self {
            w,
            prefix: [cfg.hash(), cfg.seed().to_string()],
        })
    }

    fn row(&mut self, fields: Vec<String>) -> Result<()> {
        self.w.write_record(self.prefix.iter().cloned().chain(fields))?;
        Ok(())
    }

    fn finish(self) -> Result<String> {
        let bytes = self.w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn summary_head(name: &str, cfg: &ExperimentConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario: {name}");
    let _ = writeln!(s, "config_hash: {}", cfg.hash());
    let _ = writeln!(s, "seed: {}", cfg.seed());
    let _ = writeln!(s, "budget: {}", cfg.budget);
    s
}

fn verdict(s: &mut String, passed: bool) {
    let _ = writeln!(s, "result: {}", if passed { "PASS" } else { "FAIL" });
}

fn fmt(v: f64) -> String {
    v.to_string()
}

fn equivalence(report: &DistortionReport) -> f64 {
    report.upper_ratio.max(1.0 / report.lower_ratio)
}

/// `norm`: evaluates the configured norm on every listed vector.
pub fn run_norm(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let norm = cfg
        .norm
        .as_ref()
        .ok_or_else(|| Error::Config("`norm` requires a `norm` entry".into()))?;
    if cfg.vectors.is_empty() {
        return Err(Error::Config("`norm` requires at least one entry in `vectors`".into()));
    }
    let mut table = Table::new(cfg, &["index", "dim", "norm"])?;
    let mut summary = summary_head("norm", cfg);
    for (k, v) in cfg.vectors.iter().enumerate() {
        let value = norm.norm(v);
        table.row(vec![k.to_string(), v.len().to_string(), fmt(value)])?;
        let _ = writeln!(summary, "vector {k}: {value:.12}");
    }
    verdict(&mut summary, true);
    Ok(RunReport {
        name: "norm",
        csv: table.finish()?,
        summary,
        passed: true,
    })
}

/// `estimate`: convexity or concavity constant of the configured norm in
/// dimension `e.dim`, at every budget `1, 2, 4, ...` up to `budget`.
/// Asserts that the estimates never decrease with the budget.
pub fn run_estimate(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let norm = cfg
        .norm
        .as_ref()
        .ok_or_else(|| Error::Config("`estimate` requires a `norm` entry".into()))?;
    let mode = cfg
        .mode
        .ok_or_else(|| Error::Config("`estimate` requires a `mode` entry".into()))?;
    let (mode_name, exponent) = match mode {
        ConstantMode::Convexity { p } => ("convexity", p),
        ConstantMode::Concavity { r } => ("concavity", r),
    };
    let mut budgets = Vec::new();
    let mut b = 1;
    while b < cfg.budget {
        budgets.push(b);
        b *= 2;
    }
    budgets.push(cfg.budget);
    let mut table = Table::new(cfg, &["mode", "exponent", "dim", "tuple_size", "samples", "constant"])?;
    let mut summary = summary_head("estimate", cfg);
    let mut previous = f64::NEG_INFINITY;
    let mut passed = true;
    for &samples in &budgets {
        let c = estimate_constant(norm, mode, cfg.e.dim, cfg.tuple_size, samples, cfg.seed())?;
        passed &= c >= previous;
        previous = c;
        table.row(vec![
            mode_name.into(),
            fmt(exponent),
            cfg.e.dim.to_string(),
            cfg.tuple_size.to_string(),
            samples.to_string(),
            fmt(c),
        ])?;
    }
    let _ = writeln!(summary, "{mode_name} constant (exponent {exponent}): {previous:.12}");
    let _ = writeln!(summary, "monotone in budget: {passed}");
    verdict(&mut summary, passed);
    Ok(RunReport {
        name: "estimate",
        csv: table.finish()?,
        summary,
        passed,
    })
}

fn density_iterations(cfg: &ExperimentConfig) -> usize {
    if cfg.density_iterations == 0 {
        DEFAULT_DENSITY_ITERATIONS
    } else {
        cfg.density_iterations
    }
}

/// `density`: change-of-density search on the span of the realized `F`,
/// targeting `L_r` with `r = e.exponent`. The table lists the density atom by
/// atom. Asserts that the result is no worse than the uniform density.
pub fn run_density(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let r = cfg.e.exponent;
    let f_real = cfg.f.realize(cfg.f.dim, derive_seed(cfg.seed(), 1))?;
    let res = density_search(f_real.basis(), f_real.measure(), r, density_iterations(cfg), cfg.seed())?;
    let mut table = Table::new(cfg, &["atom", "weight", "h"])?;
    for (t, (w, h)) in f_real.measure().weights().iter().zip(res.h.iter()).enumerate() {
        table.row(vec![t.to_string(), fmt(*w), fmt(*h)])?;
    }
    let passed = res.constant <= res.uniform_constant;
    let mut summary = summary_head("density", cfg);
    let _ = writeln!(summary, "r: {r}");
    let _ = writeln!(summary, "K_2 uniform density: {:.12}", res.uniform_constant);
    let _ = writeln!(summary, "K_2 searched density: {:.12}", res.constant);
    for (k, c) in res.history.iter().enumerate() {
        let _ = writeln!(summary, "iteration {k}: {c:.12}");
    }
    verdict(&mut summary, passed);
    Ok(RunReport {
        name: "density",
        csv: table.finish()?,
        summary,
        passed,
    })
}

/// `T` viewed in `L_s`.
struct LsMap<'a> {
    map: &'a EmbeddingMap,
    s: f64,
}

impl LinearMap for LsMap<'_> {
    fn domain_dim(&self) -> usize {
        self.map.domain_dim()
    }

    fn image_norm(&self, a: &[f64]) -> f64 {
        self.map.image_ls_norm(a, self.s).unwrap_or(f64::NAN)
    }
}

/// `embed`: the tensor embedding of `E(F)` into `L_1`.
///
/// Per instance the chain `L <= T <= K_u M1 <= K_u K1 M2 <= K_u K1 K2 L` is
/// verified and `L <= T <= K_u K1 K2 L` re-asserted (`K_u`: certified
/// unconditionality constant of the realized `E`, 1 for disjoint bases); then the distortion against
/// `ℓ_r(ℓ_p)` is checked against the certified `K_1 K_2` with relative slack
/// [`DISTORTION_SLACK`].
pub fn run_theorem1(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let (r, p) = (cfg.e.exponent, cfg.f.exponent);
    if r > p {
        return Err(Error::Config(format!(
            "embed needs r <= p (got r = {r}, p = {p}); use remark2 for r > p"
        )));
    }
    let seed = cfg.seed();
    let (m, n) = (cfg.e.dim, cfg.f.dim);
    let e_real = cfg.e.realize(m, derive_seed(seed, 0))?;
    let f_real = cfg.f.realize(n, derive_seed(seed, 1))?;
    let (mu, fs, density) = if cfg.density_iterations > 0 {
        let res = density_search(f_real.basis(), f_real.measure(), r, cfg.density_iterations, derive_seed(seed, 2))?;
        let (nu, ys) = change_of_density(f_real.basis(), f_real.measure(), &res.h)?;
        (nu, ys, Some(res))
    } else {
        (f_real.measure().clone(), f_real.basis().to_vec(), None)
    };
    let k1_estimate = estimate_constant(
        &e_real,
        ConstantMode::Concavity { r },
        m,
        cfg.tuple_size,
        cfg.budget,
        derive_seed(seed, 3),
    )?;
    let k2_estimate = certify_norm_equivalence(&fs, &mu, r, cfg.budget, derive_seed(seed, 4))?.constant;
    let map = tensor_embed(
        e_real,
        TensorFactor::Vectors {
            measure: mu.clone(),
            vectors: fs,
        },
    )?;

    let mut chains = Vec::with_capacity(cfg.instances);
    for k in 0..cfg.instances {
        let mut rng = rng::stream(seed, rng::tagged(tag::INSTANCE, k as u64));
        let a = rng::probe_direction(&mut rng, m * n);
        let xs = map.blocks(&a)?;
        chains.push(verify_theorem_chain(map.e_real(), &xs, &mu, r)?);
    }
    let k1 = chains.iter().map(|c| c.k1).fold(k1_estimate, f64::max);
    let k2 = chains.iter().map(|c| c.k2).fold(k2_estimate, f64::max);

    let e_norm = cfg.e.abstract_norm();
    let f_norm = cfg.f.abstract_norm();
    let domain = EfNorm {
        rows: m,
        cols: n,
        e: &e_norm,
        f: &f_norm,
    };
    let report =
        distortion(&map, &domain, cfg.budget, cfg.polish_sweeps, derive_seed(seed, 5))?.with_constants(k1, k2);
    let ls_report = if cfg.s > 1.0 {
        let view = LsMap { map: &map, s: cfg.s };
        Some(distortion(&view, &domain, cfg.budget, cfg.polish_sweeps, derive_seed(seed, 6))?)
    } else {
        None
    };
    let distortion_ls = ls_report.as_ref().map_or(report.distortion, |r| r.distortion);

    let mut table = Table::new(
        cfg,
        &[
            "instance",
            "l",
            "t",
            "m1",
            "m2",
            "k1",
            "k2",
            "t_over_l",
            "distortion",
            "k1_certified",
            "k2_certified",
            "s",
            "distortion_ls",
            "passes",
        ],
    )?;
    let mut failures = 0;
    for (k, c) in chains.iter().enumerate() {
        let upper = c.unconditional_constant * c.k1 * c.k2 * c.l;
        let driver_ok = c.l <= c.t * (1.0 + CHAIN_TOL) && c.t <= upper * (1.0 + CHAIN_TOL);
        let ok = c.passes && driver_ok;
        failures += usize::from(!ok);
        table.row(vec![
            k.to_string(),
            fmt(c.l),
            fmt(c.t),
            fmt(c.m1),
            fmt(c.m2),
            fmt(c.k1),
            fmt(c.k2),
            fmt(c.t / c.l),
            fmt(report.distortion),
            fmt(k1),
            fmt(k2),
            fmt(cfg.s),
            fmt(distortion_ls),
            ok.to_string(),
        ])?;
    }
    let bound = k1 * k2 * (1.0 + DISTORTION_SLACK);
    let distortion_ok = report.distortion <= bound;
    let passed = failures == 0 && distortion_ok;

    let mut summary = summary_head("embed", cfg);
    let _ = writeln!(summary, "E: {} dim {m}, r = {r}, atoms {}", kind_label(cfg.e.kind), cfg.e.atoms);
    let _ = writeln!(summary, "F: {} dim {n}, p = {p}, atoms {}", kind_label(cfg.f.kind), cfg.f.atoms);
    let _ = writeln!(summary, "E unconditional constant (sampled): {:.6}", map.e_real().unconditional_constant());
    if let Some(d) = &density {
        let _ = writeln!(
            summary,
            "density search: K_2 {:.6} -> {:.6}",
            d.uniform_constant, d.constant
        );
    }
    let _ = writeln!(summary, "K_1 certified: {k1:.6} (sampled {k1_estimate:.6})");
    let _ = writeln!(summary, "K_2 certified: {k2:.6} (sampled {k2_estimate:.6})");
    let _ = writeln!(summary, "instances: {} ({failures} chain failures)", chains.len());
    let _ = writeln!(
        summary,
        "distortion: {:.6} (lower {:.6}, upper {:.6}), bound K_1 K_2 (1 + {DISTORTION_SLACK}) = {bound:.6}: {}",
        report.distortion,
        report.lower_ratio,
        report.upper_ratio,
        if distortion_ok { "holds" } else { "VIOLATED" }
    );
    if let Some(ls) = &ls_report {
        let _ = writeln!(summary, "distortion in L_{}: {:.6}", cfg.s, ls.distortion);
    }
    verdict(&mut summary, passed);
    Ok(RunReport {
        name: "embed",
        csv: table.finish()?,
        summary,
        passed,
    })
}

/// `remark2`: distortion of the natural tensor construction for `ℓ_r(ℓ_p)`
/// with `r > p`, for each `n` in the schedule, alongside the `K_2` of the
/// span of `F` before and after density search. Observational only.
pub fn run_remark2(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let (r, p) = (cfg.e.exponent, cfg.f.exponent);
    if r <= p {
        return Err(Error::Config(format!(
            "remark2 needs r > p (got r = {r}, p = {p}); use embed for r <= p"
        )));
    }
    if cfg.schedule.is_empty() || cfg.schedule.contains(&0) {
        return Err(Error::Config("schedule must be a nonempty list of positive sizes".into()));
    }
    let seed = cfg.seed();
    let e_norm = cfg.e.abstract_norm();
    let f_norm = cfg.f.abstract_norm();
    let mut table = Table::new(
        cfg,
        &[
            "n",
            "r",
            "p",
            "lower_ratio",
            "upper_ratio",
            "distortion",
            "k1",
            "k2_uniform",
            "k2_density",
            "bound",
        ],
    )?;
    let mut summary = summary_head("remark2", cfg);
    for (idx, &n) in cfg.schedule.iter().enumerate() {
        let base = 16 * idx as u64 + 16;
        let e_real = cfg.e.realize(n, derive_seed(seed, base))?;
        let f_real = cfg.f.realize(n, derive_seed(seed, base + 1))?;
        let k1 = estimate_constant(
            &e_real,
            ConstantMode::Concavity { r },
            n,
            cfg.tuple_size,
            cfg.budget,
            derive_seed(seed, base + 2),
        )?;
        let dens = density_search(
            f_real.basis(),
            f_real.measure(),
            r,
            density_iterations(cfg),
            derive_seed(seed, base + 3),
        )?;
        let map = tensor_embed(e_real, TensorFactor::Realization(f_real))?;
        let domain = EfNorm {
            rows: n,
            cols: n,
            e: &e_norm,
            f: &f_norm,
        };
        let rep = distortion(&map, &domain, cfg.budget, cfg.polish_sweeps, derive_seed(seed, base + 4))?;
        let bound = k1 * dens.constant;
        table.row(vec![
            n.to_string(),
            fmt(r),
            fmt(p),
            fmt(rep.lower_ratio),
            fmt(rep.upper_ratio),
            fmt(rep.distortion),
            fmt(k1),
            fmt(dens.uniform_constant),
            fmt(dens.constant),
            fmt(bound),
        ])?;
        let _ = writeln!(
            summary,
            "n = {n}: distortion {:.6}, K_1 {k1:.6}, K_2 {:.6} -> {:.6}",
            rep.distortion, dens.uniform_constant, dens.constant
        );
    }
    let _ = writeln!(summary, "observational run: no growth rate is asserted");
    verdict(&mut summary, true);
    Ok(RunReport {
        name: "remark2",
        csv: table.finish()?,
        summary,
        passed: true,
    })
}

/// The concavified `L_s` norm of a realization, as the oracle for stage 3.
struct ConcavifiedLs<'a> {
    view: LsView<'a>,
}

impl LatticeNorm for ConcavifiedLs<'_> {
    fn norm(&self, x: &[f64]) -> f64 {
        concavified_norm(x, &self.view, self.view.s).unwrap_or(f64::NAN)
    }
}

struct StageRow {
    stage: &'static str,
    check: &'static str,
    lower: f64,
    upper: f64,
    constant: f64,
    limit: f64,
}

impl StageRow {
    fn from_report(stage: &'static str, check: &'static str, rep: &DistortionReport) -> Self {
        Self {
            stage,
            check,
            lower: rep.lower_ratio,
            upper: rep.upper_ratio,
            constant: equivalence(rep),
            limit: SKETCH_LIMIT,
        }
    }

    fn passes(&self) -> bool {
        self.constant <= self.limit
    }
}

/// Ratio bounds of `value` against `oracle` on `budget` probe directions.
fn sampled_equivalence(
    dim: usize,
    budget: usize,
    seed: u64,
    value: impl Fn(&[f64]) -> Result<f64>,
    oracle: impl Fn(&[f64]) -> Result<f64>,
) -> Result<(f64, f64)> {
    let (mut lower, mut upper) = (f64::INFINITY, 0.0_f64);
    for k in 0..budget {
        let mut rng = rng::stream(seed, rng::tagged(tag::INSTANCE, k as u64));
        let x = rng::probe_direction(&mut rng, dim);
        let ratio = value(&x)? / oracle(&x)?;
        lower = lower.min(ratio);
        upper = upper.max(ratio);
    }
    Ok((lower, upper))
}

/// `sketch`: the three-stage construction for an Orlicz space `ℓ_M` whose
/// basis is `r`-concave, `1 < r < 2`, with `s = 2/r`:
///
/// 1. the `2/r`-convexification of `ℓ_M` against the Luxemburg gauge of
///    `M(t^{2/r})` (and against `ℓ_2` when `M(t) = t^r`);
/// 2. Gaussian tensoring: rows against `ℓ_2`, then the map against
///    `ℓ_1(ℓ_2)`;
/// 3. the span of `f_i ⊗ |x_i|^s` against the `s`-concavified `L_s` norm of
///    `{x_i}`.
///
/// Stage constants are `max(upper, 1/lower)` and must not exceed
/// [`SKETCH_LIMIT`]. A failed growth check aborts the run.
pub fn run_sketch(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let r = cfg.e.exponent;
    let s = 2.0 / r;
    if !(r > 1.0 && r < 2.0) {
        return Err(Error::Config(format!(
            "sketch needs 1 < r < 2 (got r = {r}, so s = 2/r = {s}); the s = 2 boundary would need \
             index-1 stable variables, which have no mean"
        )));
    }
    let (m, n) = (cfg.e.dim, cfg.f.dim);
    let orlicz = match &cfg.orlicz {
        Some(mf) => mf.clone(),
        None => OrliczFunction::power(r)?,
    };
    let growth = orlicz_growth_check(&orlicz, r, Monotone::Decreasing, &default_growth_grid(), cfg.growth_constant)?;
    let mut rows = vec![StageRow {
        stage: "growth",
        check: "m_over_t_pow_r_decreasing",
        lower: growth.constant,
        upper: growth.constant,
        constant: growth.constant,
        limit: cfg.growth_constant,
    }];
    let mut summary = summary_head("sketch", cfg);
    let _ = writeln!(summary, "r: {r}, s = 2/r: {s}, dims {m} x {n}");
    let _ = writeln!(summary, "growth constant: {:.6} (limit {})", growth.constant, cfg.growth_constant);
    if growth.passes {
        sketch_stages(cfg, &orlicz, r, &mut rows)?;
    } else {
        let _ = writeln!(summary, "growth check failed: run aborted");
    }
    let mut table = Table::new(cfg, &["stage", "check", "lower_ratio", "upper_ratio", "constant", "limit", "passes"])?;
    let mut passed = true;
    for row in &rows {
        passed &= row.passes();
        table.row(vec![
            row.stage.into(),
            row.check.into(),
            fmt(row.lower),
            fmt(row.upper),
            fmt(row.constant),
            fmt(row.limit),
            row.passes().to_string(),
        ])?;
        if row.stage != "growth" {
            let _ = writeln!(summary, "{} {}: {:.6}", row.stage, row.check, row.constant);
        }
    }
    verdict(&mut summary, passed);
    Ok(RunReport {
        name: "sketch",
        csv: table.finish()?,
        summary,
        passed,
    })
}

fn sketch_stages(cfg: &ExperimentConfig, orlicz: &OrliczFunction, r: f64, rows: &mut Vec<StageRow>) -> Result<()> {
    let seed = cfg.seed();
    let (m, n) = (cfg.e.dim, cfg.f.dim);
    let q = 2.0 / r;
    let s = q;

    let l_m = SequenceNorm::orlicz(orlicz.clone());
    let composed = orlicz.compose_power(q)?;
    let (lo, hi) = sampled_equivalence(
        m,
        cfg.budget,
        derive_seed(seed, 40),
        |x| convexified_norm(x, &l_m, q),
        |x| luxemburg_norm(x, &composed, LUXEMBURG_TOL),
    )?;
    rows.push(StageRow {
        stage: "convexify",
        check: "luxemburg_of_composed",
        lower: lo,
        upper: hi,
        constant: hi.max(1.0 / lo),
        limit: SKETCH_LIMIT,
    });
    if matches!(orlicz.kind(), OrliczKind::Power { p } if p == r) {
        let (lo, hi) = sampled_equivalence(
            m,
            cfg.budget,
            derive_seed(seed, 40),
            |x| convexified_norm(x, &l_m, q),
            |x| lp_norm(x, 2.0),
        )?;
        rows.push(StageRow {
            stage: "convexify",
            check: "l2",
            lower: lo,
            upper: hi,
            constant: hi.max(1.0 / lo),
            limit: SKETCH_LIMIT,
        });
    }

    let l1 = SequenceNorm::Lp { p: 1.0 };
    let l2 = SequenceNorm::Lp { p: 2.0 };
    let g = sample_gaussian(n, cfg.f.atoms, derive_seed(seed, 41))?;
    let rep = distortion(&g, &l2, cfg.budget, cfg.polish_sweeps, derive_seed(seed, 42))?;
    rows.push(StageRow::from_report("gaussian", "rows_vs_l2", &rep));
    let e_real = realize_l1_disjoint(m, m)?;
    let map = tensor_embed(e_real, TensorFactor::Realization(g))?;
    let domain = EfNorm {
        rows: m,
        cols: n,
        e: &l1,
        f: &l2,
    };
    let rep = distortion(&map, &domain, cfg.budget, cfg.polish_sweeps, derive_seed(seed, 43))?;
    rows.push(StageRow::from_report("gaussian", "map_vs_l1_l2", &rep));

    let x_real = normalize_in_ls(
        &sample_gaussian(n, cfg.x_atoms, derive_seed(seed, 44))?,
        s,
        derive_seed(seed, 45),
    )?;
    let spec = StableSampleSpec::new(2.0 / s, n, cfg.f.atoms, derive_seed(seed, 46));
    let conc = concavify_embed(&x_real, s, &spec)?;
    let oracle = ConcavifiedLs {
        view: LsView { real: &x_real, s },
    };
    let rep = distortion(&conc, &oracle, cfg.budget, cfg.polish_sweeps, derive_seed(seed, 47))?;
    rows.push(StageRow::from_report("concavify", "vs_concavified_ls", &rep));
    Ok(())
}

fn kind_label(kind: FactorKind) -> &'static str {
    match kind {
        FactorKind::Disjoint => "disjoint",
        FactorKind::Stable => "stable",
        FactorKind::Gaussian => "gaussian",
        FactorKind::Rademacher => "rademacher",
    }
}
