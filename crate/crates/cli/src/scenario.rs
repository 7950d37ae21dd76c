//! Scenario documents: the JSON input format.
//!
//! Exact phases are strings such as `"1/3 turns"`; floats are plain JSON
//! numbers, compared with the scenario tolerance.

use std::fmt;

use num_rational::Rational64;
use serde::de::{self, Deserializer};
use serde::Deserialize;

use holonomy_core::phase::parse_turns;

/// An exact phase read from `"p/q turns"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Turns(pub Rational64);

impl<'de> Deserialize<'de> for Turns {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_turns(&s)
            .map(Turns)
            .ok_or_else(|| de::Error::custom(format!("expected \"p/q turns\", got {s:?}")))
    }
}

impl fmt::Display for Turns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{} turns", self.0.numer())
        } else {
            write!(f, "{}/{} turns", self.0.numer(), self.0.denom())
        }
    }
}

fn default_seed() -> u64 {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub space: Option<SpaceSpec>,
    #[serde(default)]
    pub bundle: Option<BundleSpec>,
    #[serde(default)]
    pub gerbe: Option<GerbeSpec>,
    #[serde(default)]
    pub site: Option<SiteSpec>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Seed for every randomised sweep in the scenario.
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub requests: Vec<Request>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum ComplexSpec {
    Circle(usize),
    Path(usize),
    Torus([usize; 2]),
    Sphere([usize; 2]),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub name: String,
    #[serde(default)]
    pub faces: Vec<usize>,
    #[serde(default)]
    pub edges: Vec<usize>,
    #[serde(default)]
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceSpec {
    /// `circle-2-charts`, `sphere-2-charts`, `torus-4-charts`, ….
    Builtin(String),
    /// Torus grid covered by windows of `width` consecutive faces.
    TorusWindows { m: usize, n: usize, width: usize },
    /// Torus grid covered by two bands of rows.
    TorusBands { m: usize, n: usize },
    /// A cell complex with charts closed under boundary.
    Complex { complex: ComplexSpec, charts: Vec<ChartSpec> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub charts: [usize; 2],
    /// One value per vertex of the complex.
    pub values: Vec<Turns>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum BundleModel {
    /// Zero data on the scenario space.
    Trivial,
    Monopole { n: i64 },
    FlatTorus { m: usize, n: usize, holonomy: [Turns; 2] },
    /// Transition functions and connection 1-forms on the scenario space.
    Combinatorial {
        transitions: Vec<TransitionSpec>,
        /// One value per edge, per chart.
        connections: Vec<Vec<Turns>>,
    },
}

/// Deliberate corruption of one transition value.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum BundleFault {
    Vertex { charts: [usize; 2], vertex: usize, amount: Turns },
    Sample { charts: [usize; 2], point: Vec<f64>, radians: f64 },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub model: BundleModel,
    #[serde(default)]
    pub fault: Option<BundleFault>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaSpec {
    pub charts: [usize; 3],
    pub values: Vec<Turns>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFormSpec {
    pub charts: [usize; 2],
    pub values: Vec<Turns>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum GerbeModel {
    Trivial,
    FlatTorus { m: usize, n: usize, flux: Turns },
    /// Explicit data on the scenario space; missing entries are zero.
    Data {
        #[serde(default)]
        theta: Vec<ThetaSpec>,
        #[serde(default)]
        a: Vec<PairFormSpec>,
        /// One value per face, per chart.
        curvings: Vec<Vec<Turns>>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaFault {
    pub charts: [usize; 3],
    pub vertex: usize,
    pub value: Turns,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GerbeSpec {
    pub model: GerbeModel,
    /// Apply a random Deligne gauge move with this seed before use.
    #[serde(default)]
    pub gauge_seed: Option<u64>,
    #[serde(default)]
    pub fault: Option<ThetaFault>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SiteSpec {
    Circle { n: usize, arcs: Vec<Vec<usize>> },
    Interval { n: usize, pieces: Vec<Vec<usize>> },
    General {
        points: usize,
        cover: Vec<Vec<usize>>,
        #[serde(default)]
        edges: Vec<[usize; 2]>,
    },
    /// Vertices, chart vertex sets and edges of the scenario space.
    FromSpace,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum PathSpec {
    /// Edge steps `[edge, ±1]` or `[edge, ±1, chart]` from `start`.
    Edges { start: usize, steps: Vec<Vec<i64>> },
    /// Consecutive vertices joined by edges.
    Vertices(Vec<usize>),
    /// Longitude `from → to` at fixed colatitude, read in one chart.
    Latitude {
        theta: f64,
        #[serde(default)]
        from: Option<f64>,
        #[serde(default)]
        to: Option<f64>,
        chart: usize,
    },
    Meridian { phi: f64, from: f64, to: f64, chart: usize },
    /// Segment in angular coordinates.
    Line { from: Vec<f64>, to: Vec<f64>, chart: usize },
    CircleArc { from: f64, to: f64, chart: usize },
    Concat(Vec<PathSpec>),
    Reverse(Box<PathSpec>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SurfaceSpec {
    /// Every face once, positively.
    Fundamental,
    Faces(Vec<(usize, i8)>),
    Repeated { surface: Box<SurfaceSpec>, times: usize },
    Inverse(Box<SurfaceSpec>),
}

/// Perturbations that must leave a holonomy unchanged.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThinChecks {
    pub backtracks: usize,
    pub reparametrizations: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopySpec {
    /// Indices into the request's loop list.
    pub source: usize,
    pub target: usize,
    #[serde(default)]
    pub faces: Vec<(usize, i8)>,
}

/// Gauge-groupoid transport along site edges.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgePhases {
    /// Fiber order `q`: phases live in `(1/q)Z/Z`.
    pub order: i64,
    /// `[from, to, phase]`; unlisted edges carry phase 0.
    #[serde(default)]
    pub phases: Vec<(usize, usize, Turns)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum AtlasSpec {
    /// Each chart carries the full pair groupoid on its points.
    Pair,
    /// Reachability subgroupoids of a transport along geodesics.
    Transport { transport: EdgePhases, path_budget: usize },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartConnection {
    pub chart: usize,
    /// `[edge, value]`; unlisted edges carry 0.
    #[serde(default)]
    pub edges: Vec<(usize, Turns)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum DoubleSweep {
    /// Transport law and piecewise identity on composable path pairs.
    TransportLaw {
        generators: Vec<PathSpec>,
        max_len: usize,
        budget: usize,
        pairs: usize,
    },
    /// Round trip and interchange law on the small crossed modules.
    CrossedModules { budget: usize },
}

fn default_budget() -> usize {
    8
}

fn default_pairs() -> usize {
    1000
}

fn default_max_rules() -> usize {
    holonomy_core::local::MAX_RULES
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "verb", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Request {
    ValidateBundle {
        /// Expected total curvature (for example `"1 turns"` for ∫F = 2π).
        #[serde(default)]
        total_curvature: Option<Turns>,
    },
    Transport {
        path: PathSpec,
        #[serde(default)]
        expect: Option<Turns>,
    },
    Holonomy {
        #[serde(rename = "loop")]
        path: PathSpec,
        #[serde(default)]
        expect: Option<Turns>,
        #[serde(default)]
        thin: Option<ThinChecks>,
    },
    ValidateGerbe {},
    SurfaceHolonomy {
        surface: SurfaceSpec,
        #[serde(default)]
        expect: Option<Turns>,
        /// Sweep every valid assignment, up to this many.
        #[serde(default)]
        sweep: Option<u64>,
        #[serde(default)]
        thin: Option<ThinChecks>,
        #[serde(default)]
        gauge_trials: usize,
    },
    TwoHolonomy {
        generators: Vec<SurfaceSpec>,
        max_len: usize,
        budget: usize,
        #[serde(default)]
        gauge_trials: usize,
    },
    LoopTransport {
        loops: Vec<PathSpec>,
        homotopies: Vec<HomotopySpec>,
        #[serde(default = "default_pairs")]
        pairs: usize,
        #[serde(default)]
        gauge_trials: usize,
    },
    BuildLocalSubgroupoid {
        transport: EdgePhases,
        #[serde(default = "default_budget")]
        path_budget: usize,
    },
    Globalise {
        atlas: AtlasSpec,
        #[serde(default = "default_pairs")]
        pairs: usize,
        /// Enumerate normal forms up to this length and require exactly one
        /// per pair of objects.
        #[serde(default)]
        bijective: Option<usize>,
        #[serde(default)]
        expect_hol: Option<String>,
        #[serde(default)]
        expect_glob_order: Option<usize>,
        #[serde(default = "default_max_rules")]
        max_rules: usize,
    },
    #[serde(rename = "theorem-1")]
    Theorem1 {
        connection: Vec<ChartConnection>,
        #[serde(default = "default_budget")]
        path_budget: usize,
        #[serde(default = "default_pairs")]
        pairs: usize,
        #[serde(default)]
        expect_hol: Option<String>,
        #[serde(default)]
        expect_glob_order: Option<usize>,
        #[serde(default = "default_max_rules")]
        max_rules: usize,
    },
    DoubleCheck {
        sweep: DoubleSweep,
    },
}

impl Request {
    pub fn verb(&self) -> &'static str {
        match self {
            Request::ValidateBundle { .. } => "validate-bundle",
            Request::Transport { .. } => "transport",
            Request::Holonomy { .. } => "holonomy",
            Request::ValidateGerbe {} => "validate-gerbe",
            Request::SurfaceHolonomy { .. } => "surface-holonomy",
            Request::TwoHolonomy { .. } => "two-holonomy",
            Request::LoopTransport { .. } => "loop-transport",
            Request::BuildLocalSubgroupoid { .. } => "build-local-subgroupoid",
            Request::Globalise { .. } => "globalise",
            Request::Theorem1 { .. } => "theorem-1",
            Request::DoubleCheck { .. } => "double-check",
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
