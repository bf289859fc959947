//! Finite atomic measures, step functions and exact quadrature.
//!
//! A measure is a list of strictly positive atom weights; a step vector holds
//! one value per atom. Every integral is a finite weighted sum, so the
//! inequalities checked elsewhere in the crate are checked exactly (up to
//! rounding) rather than up to a discretization error.

use std::io::{Read, Write};
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, invalid, Error, Result};
use crate::par;
use crate::realization::BasisRealization;

/// Tolerance for "total mass is one".
pub const PROBABILITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct AtomicMeasure {
    weights: Vec<f64>,
    total: f64,
}

impl TryFrom<Vec<f64>> for AtomicMeasure {
    type Error = Error;
    fn try_from(w: Vec<f64>) -> Result<Self> {
        Self::new(w)
    }
}

impl From<AtomicMeasure> for Vec<f64> {
    fn from(m: AtomicMeasure) -> Self {
        m.weights
    }
}

impl AtomicMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Degenerate("measure with no atoms".into()));
        }
        if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(invalid("weight", w, "atom weights must be finite and positive"));
        }
        let total = par::fixed_sum(&weights);
        Ok(Self { weights, total })
    }

    /// `n` atoms of mass `1/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Degenerate("measure with no atoms".into()));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn is_probability(&self) -> bool {
        (self.total - 1.0).abs() <= PROBABILITY_TOL
    }

    /// Pairs of atoms of `self × other`, `self` index varying slowest.
    pub fn product<'a>(&'a self, other: &'a AtomicMeasure) -> impl Iterator<Item = ProductPoint> + 'a {
        self.weights.iter().enumerate().flat_map(move |(s, ws)| {
            other.weights.iter().enumerate().map(move |(t, wt)| ProductPoint {
                s_atom: s,
                t_atom: t,
                weight: ws * wt,
            })
        })
    }
}

/// An atom of a product measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductPoint {
    pub s_atom: usize,
    pub t_atom: usize,
    pub weight: f64,
}

/// A function on the atoms of some [`AtomicMeasure`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct StepVector(Vec<f64>);

impl StepVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("step value {bad}")));
        }
        Ok(Self(values))
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self(vec![c; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Pointwise linear combination `Σ c_i v_i`.
    pub fn combine(coeffs: &[f64], vectors: &[StepVector]) -> Result<StepVector> {
        check_dims(vectors.len(), coeffs.len())?;
        let n = vectors.first().map_or(0, |v| v.len());
        let mut out = vec![0.0; n];
        for (c, v) in coeffs.iter().zip(vectors) {
            check_dims(n, v.len())?;
            if *c == 0.0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(v.values()) {
                *o += c * x;
            }
        }
        Ok(StepVector(out))
    }
}

impl TryFrom<Vec<f64>> for StepVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<StepVector> for Vec<f64> {
    fn from(v: StepVector) -> Self {
        v.0
    }
}

impl Deref for StepVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn weighted_abs_pow_sum(weights: &[f64], values: &[f64], s: f64) -> f64 {
    let mut partials = Vec::with_capacity(values.len().div_ceil(par::CHUNK));
    for (w, v) in weights.chunks(par::CHUNK).zip(values.chunks(par::CHUNK)) {
        let mut acc = 0.0;
        if s == 1.0 {
            for (a, b) in w.iter().zip(v) {
                acc += a * b.abs();
            }
        } else if s == 2.0 {
            for (a, b) in w.iter().zip(v) {
                acc += a * b * b;
            }
        } else {
            for (a, b) in w.iter().zip(v) {
                acc += a * b.abs().powf(s);
            }
        }
        partials.push(acc);
    }
    partials.iter().sum()
}

/// `(Σ_t w_t |v_t|^s)^{1/s}`.
pub fn ls_norm(v: &StepVector, m: &AtomicMeasure, s: f64) -> Result<f64> {
    check_dims(m.len(), v.len())?;
    if !(s >= 1.0) {
        return Err(invalid("s", s, "L_s is a norm only for s >= 1"));
    }
    Ok(ls_unchecked(v, m, s))
}

pub(crate) fn ls_unchecked(v: &[f64], m: &AtomicMeasure, s: f64) -> f64 {
    let sum = weighted_abs_pow_sum(m.weights(), v, s);
    if s == 1.0 {
        sum
    } else if s == 2.0 {
        sum.sqrt()
    } else {
        sum.powf(1.0 / s)
    }
}

fn check_family(xs: &[StepVector], mu: &AtomicMeasure) -> Result<()> {
    for x in xs {
        check_dims(mu.len(), x.len())?;
    }
    Ok(())
}

/// Values `(x_1(t), ..., x_m(t))` at atom `t`.
fn column(xs: &[StepVector], t: usize, out: &mut [f64]) {
    for (o, x) in out.iter_mut().zip(xs) {
        *o = x[t];
    }
}

/// `‖Σ_i e_i ⊗ x_i‖_{L_1(λ×μ)}`, evaluated as
/// `Σ_t μ_t Σ_s λ_s |Σ_i x_i(t) e_i(s)|` without materializing the product
/// grid. The outer sum runs over fixed chunks of `μ`-atoms.
pub fn iterated_tensor_l1(e_real: &BasisRealization, xs: &[StepVector], mu: &AtomicMeasure) -> Result<f64> {
    iterated_tensor_ls(e_real, xs, mu, 1.0)
}

/// `‖Σ_i e_i ⊗ x_i‖_{L_s(λ×μ)}`; `s = 1` is [`iterated_tensor_l1`].
pub fn iterated_tensor_ls(
    e_real: &BasisRealization,
    xs: &[StepVector],
    mu: &AtomicMeasure,
    s: f64,
) -> Result<f64> {
    check_dims(e_real.dim(), xs.len())?;
    check_family(xs, mu)?;
    if !(s >= 1.0) {
        return Err(invalid("s", s, "L_s is a norm only for s >= 1"));
    }
    let m = xs.len();
    let w = mu.weights();
    let sum = par::chunked_sum(mu.len(), |t| {
        let mut c = vec![0.0; m];
        column(xs, t, &mut c);
        if c.iter().all(|&v| v == 0.0) {
            return 0.0;
        }
        w[t] * e_real.abs_pow_integral(&c, s)
    });
    Ok(if s == 1.0 { sum } else { sum.powf(1.0 / s) })
}

/// Reweights `μ` by the density `h` and divides every vector by `h`:
/// returns `(hμ, x/h)`. The map is an isometry of `L_1`.
pub fn change_of_density(
    xs: &[StepVector],
    mu: &AtomicMeasure,
    h: &StepVector,
) -> Result<(AtomicMeasure, Vec<StepVector>)> {
    check_dims(mu.len(), h.len())?;
    check_family(xs, mu)?;
    if let Some(&bad) = h.iter().find(|v| !(**v > 0.0)) {
        return Err(invalid("h", bad, "density must be strictly positive on every atom"));
    }
    let mass: f64 = par::fixed_sum(&h.iter().zip(mu.weights()).map(|(a, b)| a * b).collect::<Vec<_>>());
    if (mass - 1.0).abs() > 1e-10 {
        return Err(invalid("h", mass, "density must integrate to 1 against mu"));
    }
    let weights = h.iter().zip(mu.weights()).map(|(a, b)| a * b).collect();
    let measure = AtomicMeasure::new(weights)?;
    let vectors = xs
        .iter()
        .map(|x| StepVector(x.iter().zip(h.iter()).map(|(v, d)| v / d).collect()))
        .collect();
    Ok((measure, vectors))
}

/// Writes a measure and step vectors as CSV with columns
/// `atom,weight,v0,v1,...`.
pub fn write_step_csv<W: Write>(writer: W, mu: &AtomicMeasure, vectors: &[StepVector]) -> Result<()> {
    check_family(vectors, mu)?;
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["atom".to_string(), "weight".to_string()];
    header.extend((0..vectors.len()).map(|i| format!("v{i}")));
    w.write_record(&header)?;
    for (t, weight) in mu.weights().iter().enumerate() {
        let mut row = vec![t.to_string(), weight.to_string()];
        row.extend(vectors.iter().map(|v| v[t].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_step_csv`].
pub fn read_step_csv<R: Read>(reader: R) -> Result<(AtomicMeasure, Vec<StepVector>)> {
    let mut r = csv::Reader::from_reader(reader);
    let ncols = r.headers()?.len();
    if ncols < 2 {
        return Err(Error::Config("step CSV needs atom and weight columns".into()));
    }
    let mut weights = Vec::new();
    let mut columns = vec![Vec::new(); ncols - 2];
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Config(format!("bad number in row {row}, column {i}")))
        };
        let atom = parse(0)?;
        if atom != row as f64 {
            return Err(Error::Config(format!("atom index {atom} out of order at row {row}")));
        }
        weights.push(parse(1)?);
        for (j, col) in columns.iter_mut().enumerate() {
            col.push(parse(j + 2)?);
        }
    }
    let measure = AtomicMeasure::new(weights)?;
    let vectors = columns.into_iter().map(StepVector::new).collect::<Result<_>>()?;
    Ok((measure, vectors))
}
