//! JSON manifest describing one geometric instance: the base dimension, the
//! tangent-like structure, a semispray, and optional strong torsion, metric,
//! sample points, and seed.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

/// Errors surfaced by the command-line driver, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input: unreadable file, bad JSON, bad expression, wrong
    /// shape. Exit code 2.
    Input(String),
    /// Well-formed input describing an instance that fails validation:
    /// invalid structure, non-semispray field, incompatible strong torsion.
    /// Exit code 1.
    Rejected(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Rejected(msg) => write!(f, "instance rejected: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Rejected(_) => 1,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    /// Base dimension `n`; the chart has `2n` variables `x1..xn, y1..yn`.
    pub dimension_n: usize,
    /// `"canonical"` (the default) or an explicit structure description.
    #[serde(default)]
    pub structure: StructureSpec,
    /// Vertical components `G^i` of the semispray `y^i ∂x^i + G^i ∂y^i`;
    /// only valid with the canonical structure.
    #[serde(default)]
    pub semispray_vertical: Option<Vec<String>>,
    /// All `2n` components of the semispray; required for an explicit
    /// structure.
    #[serde(default)]
    pub semispray_components: Option<Vec<String>>,
    /// Optional strong-torsion coefficients `t^i_α` of `dx^α ⊗ ∂y^i`
    /// (n×n, canonical structure only). When present the connection is
    /// built from the decomposition `Γ = [L,S] + t`.
    #[serde(default)]
    pub strong_torsion: Option<Vec<Vec<String>>>,
    /// Optional fiber metric matrix (n×n symmetric, positive-definite at
    /// the sample points). Defaults to the identity.
    #[serde(default)]
    pub metric: Option<Vec<Vec<String>>>,
    /// Optional extra sample points, each a `2n`-tuple of rationals such
    /// as `"-1/2"`.
    #[serde(default)]
    pub points: Option<Vec<Vec<String>>>,
    /// Seed for the deterministic sampler (overridden by `--seed`).
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum StructureSpec {
    /// The name `"canonical"`.
    Named(String),
    /// An explicit structure: matrix, kernel frame, and dilation field.
    Explicit(ExplicitStructure),
}

impl Default for StructureSpec {
    fn default() -> Self {
        StructureSpec::Named("canonical".to_string())
    }
}

/// Explicit structure data: `matrix` is the 2n×2n matrix of the vector
/// 1-form on the coordinate frame, `kernel_frame` lists n spanning fields
/// of its kernel (each as 2n components), and `liouville` gives the
/// dilation field.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitStructure {
    pub matrix: Vec<Vec<String>>,
    pub kernel_frame: Vec<Vec<String>>,
    pub liouville: Vec<String>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("manifest: {e}")))
    }
}
