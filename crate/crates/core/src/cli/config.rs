use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constants::ConstantMode;
use crate::embeddings::{realize_l1_disjoint, sample_gaussian, sample_rademacher, sample_stable, StableSampleSpec};
use crate::error::{Error, Result};
use crate::realization::BasisRealization;
use crate::sequence::{CoefficientVector, OrliczFunction, SequenceNorm};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// Normalized disjoint indicators: exact `ℓ_1`.
    #[default]
    Disjoint,
    /// Symmetric stable variables of index `exponent`.
    Stable,
    Gaussian,
    Rademacher,
}

/// One factor of an experiment: `E` (with its concavity exponent `r`) or
/// `F`/`X` (with its convexity exponent `p`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    #[serde(default)]
    pub kind: FactorKind,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_exponent", alias = "r", alias = "p")]
    pub exponent: f64,
    #[serde(default = "default_atoms")]
    pub atoms: usize,
}

impl Default for FactorSpec {
    fn default() -> Self {
        Self {
            kind: FactorKind::Disjoint,
            dim: default_dim(),
            exponent: default_exponent(),
            atoms: default_atoms(),
        }
    }
}

fn default_dim() -> usize {
    2
}
fn default_exponent() -> f64 {
    1.0
}
fn default_atoms() -> usize {
    512
}
fn default_budget() -> usize {
    64
}
fn default_instances() -> usize {
    8
}
fn default_polish() -> usize {
    2
}
fn default_s() -> f64 {
    1.0
}
fn default_tuple() -> usize {
    2
}
fn default_growth() -> f64 {
    4.0
}
fn default_x_atoms() -> usize {
    512
}
fn default_schedule() -> Vec<usize> {
    vec![2, 4, 8]
}

impl FactorSpec {
    pub fn with(kind: FactorKind, dim: usize, exponent: f64, atoms: usize) -> Self {
        Self {
            kind,
            dim,
            exponent,
            atoms,
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Config(format!("{name}.dim must be >= 1")));
        }
        if !(self.exponent >= 1.0 && self.exponent.is_finite()) {
            return Err(Error::Config(format!("{name}.exponent must be >= 1, got {}", self.exponent)));
        }
        if self.kind == FactorKind::Stable && !(self.exponent > 1.0 && self.exponent <= 2.0) {
            return Err(Error::Config(format!(
                "{name}: stable index must lie in (1, 2], got {}",
                self.exponent
            )));
        }
        if self.atoms < self.dim {
            return Err(Error::Config(format!("{name}.atoms must be >= {name}.dim")));
        }
        Ok(())
    }

    /// The abstract sequence norm this factor realizes.
    pub fn abstract_norm(&self) -> SequenceNorm {
        match self.kind {
            FactorKind::Disjoint => SequenceNorm::Lp { p: 1.0 },
            FactorKind::Stable => SequenceNorm::Lp { p: self.exponent },
            FactorKind::Gaussian | FactorKind::Rademacher => SequenceNorm::Lp { p: 2.0 },
        }
    }

    pub fn realize(&self, dim: usize, seed: u64) -> Result<BasisRealization> {
        match self.kind {
            FactorKind::Disjoint => realize_l1_disjoint(dim, self.atoms.max(dim)),
            FactorKind::Stable => sample_stable(&StableSampleSpec::new(self.exponent, dim, self.atoms, seed)),
            FactorKind::Gaussian => sample_gaussian(dim, self.atoms, seed),
            FactorKind::Rademacher => sample_rademacher(dim, self.atoms, seed),
        }
    }
}

/// A single JSON experiment description shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub scenario: String,
    /// Outer factor `E` and its concavity exponent `r`.
    #[serde(default)]
    pub e: FactorSpec,
    /// Inner factor `F` (or `X`) and its convexity exponent `p`.
    #[serde(default)]
    pub f: FactorSpec,
    pub seed: Option<u64>,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default = "default_polish")]
    pub polish_sweeps: usize,
    /// Exponent of the `L_s` target space, `1 <= s <= r`.
    #[serde(default = "default_s")]
    pub s: f64,
    /// Iterations of change-of-density search on the span of `F` (0: off).
    #[serde(default)]
    pub density_iterations: usize,
    #[serde(default, skip_serializing)]
    pub out: Option<std::path::PathBuf>,
    pub norm: Option<SequenceNorm>,
    #[serde(default)]
    pub vectors: Vec<CoefficientVector>,
    pub mode: Option<ConstantMode>,
    #[serde(default = "default_tuple")]
    pub tuple_size: usize,
    pub orlicz: Option<OrliczFunction>,
    #[serde(default = "default_growth")]
    pub growth_constant: f64,
    #[serde(default = "default_x_atoms")]
    pub x_atoms: usize,
    #[serde(default = "default_schedule")]
    pub schedule: Vec<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults deserialize")
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        Ok(cfg)
    }

    /// Shared parameter checks.
    pub fn validate(&self) -> Result<()> {
        if self.seed.is_none() {
            return Err(Error::Config("a seed is required (config `seed` or --seed)".into()));
        }
        if self.budget == 0 {
            return Err(Error::Config("budget must be >= 1".into()));
        }
        if self.instances == 0 {
            return Err(Error::Config("instances must be >= 1".into()));
        }
        self.e.validate("e")?;
        self.f.validate("f")?;
        if self.f.exponent > 2.0 {
            return Err(Error::Config(format!("f.exponent must be <= 2, got {}", self.f.exponent)));
        }
        if !(self.s >= 1.0 && self.s <= self.e.exponent) {
            return Err(Error::Config(format!(
                "s must satisfy 1 <= s <= r = {}, got {}",
                self.e.exponent, self.s
            )));
        }
        if let Some(n) = &self.norm {
            n.validate()?;
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_aliases() {
        let cfg = ExperimentConfig::from_json(
            r#"{"seed": 3, "e": {"kind": "stable", "dim": 4, "r": 1.2, "atoms": 1000},
                "f": {"kind": "stable", "p": 1.8}}"#,
        )
        .unwrap();
        assert_eq!(cfg.e.exponent, 1.2);
        assert_eq!(cfg.f.exponent, 1.8);
        assert_eq!(cfg.f.atoms, 512);
        assert_eq!(cfg.budget, 64);
        cfg.validate().unwrap();
    }

    #[test]
    fn validation_errors() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.validate().is_err(), "missing seed");
        cfg.seed = Some(1);
        cfg.validate().unwrap();
        cfg.budget = 0;
        assert!(cfg.validate().is_err());
        cfg.budget = 1;
        cfg.f.exponent = 2.5;
        assert!(cfg.validate().is_err());
        cfg.f.exponent = 1.0;
        cfg.e.kind = FactorKind::Stable;
        cfg.e.exponent = 1.0;
        assert!(cfg.validate().is_err());
        assert!(ExperimentConfig::from_json(r#"{"seed": 1, "bogus": 2}"#).is_err());
    }

    #[test]
    fn hash_ignores_output_dir() {
        let mut a = ExperimentConfig::default();
        a.seed = Some(5);
        let mut b = a.clone();
        b.out = Some("/tmp/elsewhere".into());
        assert_eq!(a.hash(), b.hash());
        b.seed = Some(6);
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
    }
}
