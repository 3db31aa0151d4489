//! Turns a parsed manifest into validated geometric objects.

use lconn_core::calculus::scalar::ScalarForm;
use lconn_core::calculus::vector::{VectorField, VectorForm};
use lconn_core::connection::{ConnectionError, LConnection};
use lconn_core::ratpoly::{MultiPoly, Point};
use lconn_core::sample::{grid_points, Sampler};
use lconn_core::tangent::{Semispray, TangentStructure};

use crate::expr::{parse_expression, parse_rational};
use crate::manifest::{CliError, Manifest, StructureSpec};

/// A fully parsed and structurally validated instance. Connection-level
/// compatibility and metric admissibility are checked later so that the
/// verification suite can report them as ordinary failing checks.
#[derive(Debug)]
pub struct Instance {
    pub n: usize,
    pub seed: u64,
    pub ts: TangentStructure,
    pub semispray: Semispray,
    /// Declared strong torsion; when present the connection is built from
    /// the decomposition route.
    pub strong_torsion: Option<VectorForm>,
    /// Declared fiber metric entries; `None` means the identity.
    pub metric_entries: Option<Vec<Vec<MultiPoly>>>,
    /// Grid points, then manifest points, then seeded extras.
    pub points: Vec<Point>,
}

impl Instance {
    pub fn build(
        manifest: &Manifest,
        seed_override: Option<u64>,
        extra_points: usize,
    ) -> Result<Self, CliError> {
        let n = manifest.dimension_n;
        if n < 1 {
            return Err(CliError::Input("dimension_n must be at least 1".to_string()));
        }
        let nv = 2 * n;
        let seed = seed_override.or(manifest.seed).unwrap_or(0);

        let mut points = grid_points(nv);
        if let Some(tuples) = &manifest.points {
            for (k, tuple) in tuples.iter().enumerate() {
                if tuple.len() != nv {
                    return Err(CliError::Input(format!(
                        "points[{k}] has {} entries (want {nv})",
                        tuple.len()
                    )));
                }
                let mut pt = Point::new();
                for (j, s) in tuple.iter().enumerate() {
                    let value = parse_rational(s).map_err(|e| {
                        CliError::Input(format!("points[{k}][{j}] \"{s}\": {e}"))
                    })?;
                    pt.push(value);
                }
                points.push(pt);
            }
        }
        let mut sampler = Sampler::new(seed);
        for _ in 0..extra_points {
            points.push(sampler.point(nv));
        }

        let ts = build_structure(manifest, n, &points)?;
        let semispray = build_semispray(manifest, &ts)?;
        let strong_torsion = build_strong_torsion(manifest, &ts)?;
        let metric_entries = match &manifest.metric {
            None => None,
            Some(rows) => Some(parse_matrix(rows, n, n, manifest.dimension_n, "metric")?),
        };

        Ok(Instance {
            n,
            seed,
            ts,
            semispray,
            strong_torsion,
            metric_entries,
            points,
        })
    }

    /// Builds the connection along the route selected by the manifest:
    /// `Γ = [L,S] + t` when strong torsion is declared, `Γ = [L,S]`
    /// otherwise. Incompatible data is a rejection, not an input error.
    pub fn connection(&self) -> Result<LConnection, CliError> {
        match &self.strong_torsion {
            Some(t) => {
                LConnection::from_decomposition(&self.semispray, t, &self.ts).map_err(|e| match e {
                    ConnectionError::Incompatible { residual } => CliError::Rejected(format!(
                        "strong torsion is incompatible with the semispray; residual {residual}"
                    )),
                    other => CliError::Rejected(other.to_string()),
                })
            }
            None => Ok(LConnection::from_semispray(&self.semispray, &self.ts)),
        }
    }
}

fn parse_matrix(
    rows: &[Vec<String>],
    want_rows: usize,
    want_cols: usize,
    n: usize,
    what: &str,
) -> Result<Vec<Vec<MultiPoly>>, CliError> {
    if rows.len() != want_rows {
        return Err(CliError::Input(format!(
            "{what} has {} rows (want {want_rows})",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(want_rows);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != want_cols {
            return Err(CliError::Input(format!(
                "{what}[{i}] has {} entries (want {want_cols})",
                row.len()
            )));
        }
        let mut parsed = Vec::with_capacity(want_cols);
        for (j, src) in row.iter().enumerate() {
            let poly = parse_expression(src, n)
                .map_err(|e| CliError::Input(format!("{what}[{i}][{j}] \"{src}\": {e}")))?;
            parsed.push(poly);
        }
        out.push(parsed);
    }
    Ok(out)
}

fn parse_fields(
    rows: &[Vec<String>],
    count: usize,
    n: usize,
    what: &str,
) -> Result<Vec<VectorField>, CliError> {
    let mats = parse_matrix(rows, count, 2 * n, n, what)?;
    Ok(mats.into_iter().map(VectorField::from_components).collect())
}

fn build_structure(
    manifest: &Manifest,
    n: usize,
    points: &[Point],
) -> Result<TangentStructure, CliError> {
    match &manifest.structure {
        StructureSpec::Named(name) if name == "canonical" => Ok(TangentStructure::canonical(n)),
        StructureSpec::Named(name) => Err(CliError::Input(format!(
            "unknown structure \"{name}\" (expected \"canonical\" or an explicit description)"
        ))),
        StructureSpec::Explicit(spec) => {
            let matrix = parse_matrix(&spec.matrix, 2 * n, 2 * n, n, "structure.matrix")?;
            let l = VectorForm::from_matrix(&matrix);
            let kernel_frame = parse_fields(&spec.kernel_frame, n, n, "structure.kernel_frame")?;
            let liouville_comps = parse_matrix(
                &[spec.liouville.clone()],
                1,
                2 * n,
                n,
                "structure.liouville",
            )?
            .pop()
            .expect("one row");
            let liouville = VectorField::from_components(liouville_comps);
            TangentStructure::custom(l, kernel_frame, liouville, points)
                .map_err(|e| CliError::Rejected(e.to_string()))
        }
    }
}

fn build_semispray(manifest: &Manifest, ts: &TangentStructure) -> Result<Semispray, CliError> {
    let n = ts.n();
    if ts.is_canonical() {
        if manifest.semispray_components.is_some() {
            return Err(CliError::Input(
                "semispray_components is only for explicit structures; use semispray_vertical"
                    .to_string(),
            ));
        }
        let vertical = manifest.semispray_vertical.as_ref().ok_or_else(|| {
            CliError::Input("semispray_vertical is required (n expressions)".to_string())
        })?;
        let rows = vec![vertical.clone()];
        let g = parse_matrix(&rows, 1, n, n, "semispray_vertical")?.pop().expect("one row");
        ts.semispray_from_vertical(&g).map_err(|e| CliError::Rejected(e.to_string()))
    } else {
        if manifest.semispray_vertical.is_some() {
            return Err(CliError::Input(
                "semispray_vertical is only for the canonical structure; use semispray_components"
                    .to_string(),
            ));
        }
        let comps = manifest.semispray_components.as_ref().ok_or_else(|| {
            CliError::Input("semispray_components is required (2n expressions)".to_string())
        })?;
        let rows = vec![comps.clone()];
        let parsed =
            parse_matrix(&rows, 1, 2 * n, n, "semispray_components")?.pop().expect("one row");
        ts.semispray_from_field(VectorField::from_components(parsed))
            .map_err(|e| CliError::Rejected(e.to_string()))
    }
}

fn build_strong_torsion(
    manifest: &Manifest,
    ts: &TangentStructure,
) -> Result<Option<VectorForm>, CliError> {
    let Some(rows) = &manifest.strong_torsion else {
        return Ok(None);
    };
    if !ts.is_canonical() {
        return Err(CliError::Input(
            "strong_torsion coefficients require the canonical structure".to_string(),
        ));
    }
    let n = ts.n();
    let nv = 2 * n;
    let coeffs = parse_matrix(rows, n, n, n, "strong_torsion")?;
    // t = Σ t^i_α dx^α ⊗ ∂y^i: purely semibasic by construction.
    let mut components = vec![ScalarForm::zero(nv, 1); nv];
    for (i, row) in coeffs.iter().enumerate() {
        let entries: Vec<(Vec<u8>, MultiPoly)> = row
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(alpha, p)| (vec![alpha as u8], p.clone()))
            .collect();
        components[n + i] = ScalarForm::from_coefficients(nv, 1, entries);
    }
    Ok(Some(VectorForm::from_components(components)))
}
