//! Basic sequences realized as step functions in `L_1(μ)`.

use std::io::{Read, Write};

use crate::error::{check_dims, Error, Result};
use crate::measure::{read_step_csv, write_step_csv, AtomicMeasure, StepVector};
use crate::par::{self, CHUNK};
use crate::rng::{self, tag};
use crate::sequence::LatticeNorm;

use rand::Rng;

/// Random sign patterns drawn when certifying the unconditionality constant.
pub const UNCONDITIONAL_BUDGET: usize = 64;

/// A finite basic sequence `{e_i}` of step functions over a shared measure,
/// together with its certified constants.
#[derive(Clone, Debug)]
pub struct BasisRealization {
    measure: AtomicMeasure,
    basis: Vec<StepVector>,
    unconditional_constant: f64,
    normalization_defect: f64,
}

impl BasisRealization {
    /// Builds a realization and certifies its unconditionality constant with
    /// [`UNCONDITIONAL_BUDGET`] sign patterns drawn from `seed`. Disjointly
    /// supported bases are exactly 1-unconditional and skip sampling.
    pub fn new(measure: AtomicMeasure, basis: Vec<StepVector>, seed: u64) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Degenerate("realization with no basis vectors".into()));
        }
        for e in &basis {
            check_dims(measure.len(), e.len())?;
        }
        let mut real = Self {
            measure,
            basis,
            unconditional_constant: 1.0,
            normalization_defect: 0.0,
        };
        real.normalization_defect = (0..real.dim())
            .map(|i| (real.basis_l1(i) - 1.0).abs())
            .fold(0.0, f64::max);
        if !real.disjoint_supports() {
            real.unconditional_constant = real.certify_unconditional(UNCONDITIONAL_BUDGET, seed);
        }
        Ok(real)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn measure(&self) -> &AtomicMeasure {
        &self.measure
    }

    pub fn basis(&self) -> &[StepVector] {
        &self.basis
    }

    /// Certified (sampled) unconditionality constant, `>= 1`.
    pub fn unconditional_constant(&self) -> f64 {
        self.unconditional_constant
    }

    /// `max_i |‖e_i‖_1 - 1|`.
    pub fn normalization_defect(&self) -> f64 {
        self.normalization_defect
    }

    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        if self.normalization_defect <= tol {
            Ok(())
        } else {
            Err(Error::Degenerate(format!(
                "normalization defect {} exceeds {tol}",
                self.normalization_defect
            )))
        }
    }

    fn basis_l1(&self, i: usize) -> f64 {
        crate::measure::ls_unchecked(&self.basis[i], &self.measure, 1.0)
    }

    fn disjoint_supports(&self) -> bool {
        (0..self.measure.len()).all(|t| self.basis.iter().filter(|e| e[t] != 0.0).count() <= 1)
    }

    /// `Σ a_i e_i` as a step vector.
    pub fn combination(&self, a: &[f64]) -> Result<StepVector> {
        StepVector::combine(a, &self.basis)
    }

    /// `∫ |Σ c_i e_i|^s dλ`, in fixed blocks of atoms. Panics if `c` has the
    /// wrong length.
    pub fn abs_pow_integral(&self, c: &[f64], s: f64) -> f64 {
        assert_eq!(c.len(), self.dim(), "coefficient length");
        let n = self.measure.len();
        let w = self.measure.weights();
        let mut buf = [0.0_f64; CHUNK];
        let mut total = 0.0;
        let mut start = 0;
        while start < n {
            let end = (start + CHUNK).min(n);
            let b = &mut buf[..end - start];
            b.fill(0.0);
            for (ci, e) in c.iter().zip(&self.basis) {
                if *ci == 0.0 {
                    continue;
                }
                for (x, v) in b.iter_mut().zip(&e[start..end]) {
                    *x += ci * v;
                }
            }
            total += block_sum(&w[start..end], b, s);
            start = end;
        }
        total
    }

    /// `‖Σ a_i e_i‖_{L_1}`.
    pub fn l1_norm(&self, a: &[f64]) -> f64 {
        self.abs_pow_integral(a, 1.0)
    }

    /// `‖Σ a_i e_i‖_{L_s}`.
    pub fn ls_norm(&self, a: &[f64], s: f64) -> f64 {
        let v = self.abs_pow_integral(a, s);
        if s == 1.0 {
            v
        } else {
            v.powf(1.0 / s)
        }
    }

    /// Largest observed `‖Σ σ_i c_i e_i‖ / ‖Σ c_i e_i‖` (or its reciprocal)
    /// over `budget` random directions `c` and sign patterns `σ`.
    pub fn certify_unconditional(&self, budget: usize, seed: u64) -> f64 {
        let m = self.dim();
        let ratios = par::map_indexed(budget, |k| {
            let mut rng = rng::stream(seed, rng::tagged(tag::UNCONDITIONAL, k as u64));
            let c = rng::probe_direction(&mut rng, m);
            let flipped: Vec<f64> = c
                .iter()
                .map(|v| if rng.gen_bool(0.5) { -v } else { *v })
                .collect();
            let (a, b) = (self.l1_norm(&c), self.l1_norm(&flipped));
            if a == 0.0 && b == 0.0 {
                1.0
            } else {
                (a / b).max(b / a)
            }
        });
        ratios.into_iter().fold(1.0, f64::max)
    }

    /// Writes `atom,weight,v0,...` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_step_csv(writer, &self.measure, &self.basis)
    }

    pub fn read_csv<R: Read>(reader: R, seed: u64) -> Result<Self> {
        let (measure, basis) = read_step_csv(reader)?;
        Self::new(measure, basis, seed)
    }
}

// Eight independent lanes keep the reduction order fixed while letting the
// compiler vectorize it.
fn block_sum(w: &[f64], b: &[f64], s: f64) -> f64 {
    let mut lanes = [0.0_f64; 8];
    let wc = w.chunks_exact(8);
    let bc = b.chunks_exact(8);
    let (wr, br) = (wc.remainder(), bc.remainder());
    if s == 1.0 {
        for (ws, bs) in wc.zip(bc) {
            for k in 0..8 {
                lanes[k] += ws[k] * bs[k].abs();
            }
        }
        for (k, (x, y)) in wr.iter().zip(br).enumerate() {
            lanes[k] += x * y.abs();
        }
    } else if s == 2.0 {
        for (ws, bs) in wc.zip(bc) {
            for k in 0..8 {
                lanes[k] += ws[k] * bs[k] * bs[k];
            }
        }
        for (k, (x, y)) in wr.iter().zip(br).enumerate() {
            lanes[k] += x * y * y;
        }
    } else {
        for (ws, bs) in wc.zip(bc) {
            for k in 0..8 {
                lanes[k] += ws[k] * bs[k].abs().powf(s);
            }
        }
        for (k, (x, y)) in wr.iter().zip(br).enumerate() {
            lanes[k] += x * y.abs().powf(s);
        }
    }
    ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7]))
}

impl LatticeNorm for BasisRealization {
    fn norm(&self, x: &[f64]) -> f64 {
        self.l1_norm(x)
    }
}

/// `‖Σ a_i x_i‖_{L_s}` for a realization viewed in an `L_s` model.
#[derive(Clone, Copy, Debug)]
pub struct LsView<'a> {
    pub real: &'a BasisRealization,
    pub s: f64,
}

impl LatticeNorm for LsView<'_> {
    fn norm(&self, x: &[f64]) -> f64 {
        self.real.ls_norm(x, self.s)
    }
}
