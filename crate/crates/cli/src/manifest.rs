//! Run manifests: a list of named scenarios, each pairing a configuration with
//! one task and its parameters.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use ghlab::curve::PolyCurve;
use ghlab::gallery;
use ghlab::plane::{PlaneFrame, Point2};
use ghlab::MonopoleConfig;
use serde::{Deserialize, Serialize};

use crate::RunError;

pub const BUNDLED: [(&str, &str); 2] = [
    ("paper-figures", include_str!("../manifests/paper-figures.json")),
    ("closed-forms", include_str!("../manifests/closed-forms.json")),
];

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    /// Seed for the randomized parts of tasks; `--seed` overrides it.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub scenarios: Vec<Scenario>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub config: ConfigSource,
    pub task: Task,
}

/// A configuration given inline, as a file path (relative to the manifest), or
/// as the configuration of a gallery curve.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ConfigSource {
    Gallery { gallery: String },
    Path(String),
    Inline(MonopoleConfig),
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    #[serde(default = "horizontal")]
    pub plane: PlaneFrame,
    pub center: [f64; 2],
    pub radius: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    #[serde(default = "horizontal")]
    pub plane: PlaneFrame,
    pub from: [f64; 2],
    pub to: [f64; 2],
    /// Total clockwise turn of the tangent; positive bulges left of `from -> to`.
    pub sweep: f64,
    pub nodes: usize,
    pub start: usize,
    pub end: usize,
}

fn horizontal() -> PlaneFrame {
    PlaneFrame::horizontal()
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum CurveSource {
    Gallery { gallery: String },
    Circle { circle: CircleSpec },
    Arc { arc: ArcSpec },
    Path(String),
    Inline(PolyCurve),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case", tag = "model", deny_unknown_fields)]
pub enum RadialCheck {
    /// Single center, zero mass: `|x(t)| = r0 - t`.
    Flat { tolerance: f64 },
    /// Single center with mass `m`: `(1 + 2 m |x|)^3 + 6 m t` is constant.
    TaubNut { mass: f64, tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case", tag = "model", deny_unknown_fields)]
pub enum CliffordCheck {
    /// `r(t) = r0 - 2t`.
    Flat { tolerance: f64 },
    /// `m r^2 + r` decreases with slope 2.
    TaubNut { mass: f64, tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowVerdictLabel {
    Stable,
    Unstable,
    NotAlmostCalibrated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeLabel {
    ConvergedToSegment,
    ShrunkToPoint,
    SingularityDetected,
    CenterCollision,
    SelfIntersection,
    MaxTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityLabels {
    pub thomas: bool,
    pub flow: FlowVerdictLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestFunction {
    /// `|x - about|^2`.
    RadialSquare,
    /// `d1^2 + cos(d2) d1 d3 + d2^3 + d3^2` with `d = x - about`.
    Mixed,
}

fn default_nodes() -> usize {
    128
}
fn default_cfl() -> f64 {
    0.4
}
fn default_checkpoint_dt() -> f64 {
    0.01
}
fn default_t_max() -> f64 {
    10.0
}
fn default_conv_tol() -> f64 {
    1e-3
}
fn default_singularity() -> f64 {
    1e6
}
fn default_samples() -> usize {
    2000
}
fn default_points() -> usize {
    20
}
fn default_delta() -> f64 {
    0.1
}
fn default_orbit_t_max() -> f64 {
    100.0
}
fn default_grid() -> usize {
    41
}
fn default_box() -> f64 {
    3.0
}
fn default_function() -> TestFunction {
    TestFunction::Mixed
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum Task {
    /// Critical points of the potential (or the axis orbit of a periodic configuration).
    Orbits {
        #[serde(default)]
        grid_density: Option<usize>,
    },
    OrbitFlow {
        start: [f64; 3],
        #[serde(default = "default_orbit_t_max")]
        t_max: f64,
        /// Compare `|x(t)|` against a closed form while `t <= check_until`.
        #[serde(default)]
        check: Option<RadialCheck>,
        #[serde(default)]
        check_until: Option<f64>,
    },
    Portrait {
        #[serde(default = "horizontal")]
        plane: PlaneFrame,
        u_range: [f64; 2],
        w_range: [f64; 2],
        #[serde(default = "default_grid")]
        n: usize,
        /// Number of level sets of the orbit length to draw; none if absent.
        #[serde(default)]
        levels: Option<usize>,
    },
    CurveFlow {
        curve: CurveSource,
        #[serde(default = "default_nodes")]
        nodes: usize,
        #[serde(default = "default_cfl")]
        cfl: f64,
        #[serde(default = "default_checkpoint_dt")]
        checkpoint_dt: f64,
        #[serde(default = "default_t_max")]
        t_max: f64,
        #[serde(default = "default_conv_tol")]
        conv_tol: f64,
        #[serde(default = "default_singularity")]
        singularity_threshold: f64,
        #[serde(default)]
        check: Option<CliffordCheck>,
        /// Outcomes that count as a pass.
        #[serde(default)]
        expect: Option<Vec<OutcomeLabel>>,
    },
    Stability {
        curve: CurveSource,
        #[serde(default = "default_delta")]
        delta: f64,
        #[serde(default)]
        expect: Option<StabilityLabels>,
    },
    JordanHolder {
        curve: CurveSource,
        /// Expected facet phases, compared to `1e-12`.
        #[serde(default)]
        expect_tau: Option<Vec<f64>>,
    },
    Curvature {
        chord: [usize; 2],
        #[serde(default = "default_samples")]
        samples: usize,
    },
    HessianCheck {
        #[serde(default = "default_points")]
        points: usize,
        #[serde(default = "default_function")]
        function: TestFunction,
        #[serde(default)]
        about: [f64; 3],
        /// Half width of the box sampled for test points.
        #[serde(default = "default_box")]
        half_width: f64,
        /// Also require the Hessian to be positive definite at every point.
        #[serde(default)]
        expect_positive: bool,
    },
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Orbits { .. } => "orbits",
            Task::OrbitFlow { .. } => "orbit-flow",
            Task::Portrait { .. } => "portrait",
            Task::CurveFlow { .. } => "curve-flow",
            Task::Stability { .. } => "stability",
            Task::JordanHolder { .. } => "jordan-holder",
            Task::Curvature { .. } => "curvature",
            Task::HessianCheck { .. } => "hessian-check",
        }
    }
}

/// Reads a manifest from a file, or one of the bundled manifests by name.
pub fn load_manifest(source: &str) -> Result<(Manifest, PathBuf), RunError> {
    if let Some((_, text)) = BUNDLED.iter().find(|(name, _)| *name == source) {
        let m = serde_json::from_str(text).map_err(|e| RunError::Invalid(format!("bundled manifest {source}: {e}")))?;
        return Ok((m, PathBuf::from(".")));
    }
    let path = Path::new(source);
    let text = fs::read_to_string(path).map_err(|e| RunError::Invalid(format!("{source}: {e}")))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| RunError::Invalid(format!("{source}: {e}")))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((m, base))
}

pub fn validate(manifest: &Manifest) -> Result<(), RunError> {
    let mut seen = BTreeSet::new();
    for s in &manifest.scenarios {
        if s.name.is_empty() || s.name.contains(['/', '\\']) || s.name.starts_with('.') {
            return Err(RunError::Invalid(format!("scenario name {:?} is not a valid directory name", s.name)));
        }
        if !seen.insert(s.name.as_str()) {
            return Err(RunError::Invalid(format!("duplicate scenario name {:?}", s.name)));
        }
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(base: &Path, path: &str) -> Result<T, RunError> {
    let full = base.join(path);
    let text = fs::read_to_string(&full).map_err(|e| RunError::Invalid(format!("{}: {e}", full.display())))?;
    serde_json::from_str(&text).map_err(|e| RunError::Invalid(format!("{}: {e}", full.display())))
}

pub fn resolve_config(source: &ConfigSource, base: &Path) -> Result<MonopoleConfig, RunError> {
    match source {
        ConfigSource::Inline(c) => Ok(c.clone()),
        ConfigSource::Path(p) => read_json(base, p),
        ConfigSource::Gallery { gallery: name } => {
            gallery::by_name(name).map(|s| s.config).map_err(|e| RunError::Invalid(e.to_string()))
        }
    }
}

pub fn resolve_curve(source: &CurveSource, base: &Path) -> Result<PolyCurve, RunError> {
    let invalid = |e: ghlab::Error| RunError::Invalid(e.to_string());
    match source {
        CurveSource::Inline(c) => Ok(c.clone()),
        CurveSource::Path(p) => read_json(base, p),
        CurveSource::Gallery { gallery: name } => gallery::by_name(name).map(|s| s.curve).map_err(invalid),
        CurveSource::Circle { circle: c } => {
            PolyCurve::circle(c.plane, Point2::from(c.center), c.radius, c.nodes).map_err(invalid)
        }
        CurveSource::Arc { arc: a } => PolyCurve::circular_arc(
            a.plane,
            Point2::from(a.from),
            Point2::from(a.to),
            a.sweep,
            a.nodes,
            a.start,
            a.end,
        )
        .map_err(invalid),
    }
}
