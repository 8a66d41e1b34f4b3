//! Experiment configuration: JSON schema, validation, and materialization
//! into library types. Unknown keys are rejected so typos fail loudly.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use fracsum::geom::Point;
use fracsum::ifs::{AffineMap, Ifs};
use fracsum::linalg::Mat;

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dimension: usize,
    pub task: Task,
    /// Map list; required by every task except verify-ex73 and lemma-check.
    #[serde(default)]
    pub ifs: Vec<MapSpec>,
    #[serde(default)]
    pub depth: Option<u32>,
    #[serde(default)]
    pub n: Option<u64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub samples: Option<usize>,
    /// Claimed thickness for the probe task, also echoed through the
    /// thickness report's threshold arithmetic.
    #[serde(default)]
    pub thickness_c: Option<f64>,
    #[serde(default)]
    pub radii_per_decade: Option<u32>,
    /// Cap on the number of cylinders ℓᵏ.
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub memory_cap_bytes: Option<u64>,
    /// Output directory, overridable with --out.
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
pub enum Task {
    #[serde(rename = "attractor")]
    Attractor,
    #[serde(rename = "sumset")]
    Sumset,
    #[serde(rename = "thickness")]
    Thickness,
    #[serde(rename = "verify-thm71")]
    SumIdentity,
    #[serde(rename = "verify-ex73")]
    Counterexample,
    #[serde(rename = "lemma-check")]
    LemmaCheck,
    #[serde(rename = "thm12-probe")]
    HierarchyProbe,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum MapSpec {
    #[serde(rename = "similitude")]
    Similitude {
        ratio: f64,
        translation: Vec<f64>,
        /// Rotation angle in radians (d = 2, or d = 3 together with axis).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        angle: Option<f64>,
        /// Exact quarter turns (d = 2); ±1 materializes as 0/±1 entries.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quarter_turns: Option<i64>,
        /// Rotation axis (d = 3).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axis: Option<[f64; 3]>,
    },
    #[serde(rename = "affine")]
    Affine { matrix: Vec<Vec<f64>>, translation: Vec<f64> },
}

impl ExperimentConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| anyhow!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dimension) {
            bail!("dimension must be 1, 2 or 3, got {}", self.dimension);
        }
        for (i, m) in self.ifs.iter().enumerate() {
            m.validate(self.dimension)
                .with_context(|| format!("map {} is invalid", i + 1))?;
        }
        let needs_ifs = !matches!(self.task, Task::Counterexample | Task::LemmaCheck);
        if needs_ifs && self.ifs.is_empty() {
            bail!("task {:?} requires a non-empty ifs map list", self.task);
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d.is_finite()) {
                bail!("delta must be positive and finite, got {d}");
            }
        }
        if let Some(c) = self.thickness_c {
            if !(c > 0.0 && c <= 1.0) {
                bail!("thickness_c must satisfy 0 < c ≤ 1, got {c}");
            }
        }
        Ok(())
    }

    pub fn build_ifs(&self) -> Result<Ifs> {
        let maps: Vec<AffineMap> = self
            .ifs
            .iter()
            .enumerate()
            .map(|(i, m)| {
                m.materialize(self.dimension)
                    .with_context(|| format!("map {} cannot be materialized", i + 1))
            })
            .collect::<Result<_>>()?;
        Ifs::new(maps).map_err(|e| anyhow!("invalid system: {e}"))
    }
}

impl MapSpec {
    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            MapSpec::Similitude { ratio, translation, angle, quarter_turns, axis } => {
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    bail!("similitude ratio must be in (0, 1), got {ratio}");
                }
                if translation.len() != dim {
                    bail!("translation has {} coordinates, expected {dim}", translation.len());
                }
                if angle.is_some() && quarter_turns.is_some() {
                    bail!("give either angle or quarter_turns, not both");
                }
                let rotates = angle.is_some() || quarter_turns.is_some();
                if rotates && dim == 1 {
                    bail!("rotations are undefined in dimension 1");
                }
                if axis.is_some() && dim != 3 {
                    bail!("axis is only meaningful in dimension 3");
                }
                if dim == 3 && rotates && axis.is_none() {
                    bail!("3-D rotations need an axis");
                }
                Ok(())
            }
            MapSpec::Affine { matrix, translation } => {
                if matrix.len() != dim || matrix.iter().any(|r| r.len() != dim) {
                    bail!("matrix must be {dim}×{dim}");
                }
                if translation.len() != dim {
                    bail!("translation has {} coordinates, expected {dim}", translation.len());
                }
                if matrix.iter().flatten().any(|v| !v.is_finite()) {
                    bail!("matrix entries must be finite");
                }
                Ok(())
            }
        }
    }

    fn materialize(&self, dim: usize) -> Result<AffineMap> {
        match self {
            MapSpec::Similitude { ratio, translation, angle, quarter_turns, axis } => {
                let rotation = match (quarter_turns, angle, axis) {
                    (Some(q), None, None) => Mat::quarter_turns2(*q),
                    (None, Some(a), None) if dim == 2 => Mat::rotation2(*a),
                    (None, Some(a), Some(ax)) if dim == 3 => Mat::rotation3(*ax, *a),
                    (None, None, _) => Mat::identity(dim),
                    _ => bail!("unsupported rotation specification for dimension {dim}"),
                };
                let map = AffineMap::similitude(*ratio, rotation, Point::new(translation));
                Ok(map)
            }
            MapSpec::Affine { matrix, translation } => {
                let linear = Mat::from_rows(matrix);
                let map = AffineMap::affine(linear, Point::new(translation));
                if map.contraction_ub() >= 1.0 {
                    bail!(
                        "affine map is not contracting (operator norm bound {})",
                        map.contraction_ub()
                    );
                }
                Ok(map)
            }
        }
    }
}
