//! Scenario runner: reads a JSON scenario, executes its requests against
//! `holonomy-core`, and emits a deterministic report.

pub mod model;
pub mod pipeline;
pub mod report;
pub mod scenario;
pub mod sweeps;
pub mod verbs;

use std::path::Path;

use thiserror::Error;

use holonomy_core::phase::DEFAULT_TOLERANCE;
use holonomy_core::quadrature::Quadrature;

pub use report::{Check, Report, Status, VerbResult};
pub use scenario::{Request, Scenario};

use crate::verbs::{Context, GlobalExpectations};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("scenario does not match the schema: {0}")]
    Schema(String),
    #[error("unknown verb `{0}`; run `holonomy explain --list` for the verbs")]
    UnknownVerb(String),
    #[error("`{0}` is neither a readable file nor a bundled scenario")]
    UnknownScenario(String),
    #[error("scenario `{scenario}` has no `{verb}` request")]
    NoRequest { scenario: String, verb: String },
    #[error("{0}")]
    Io(String),
}

/// Exit status for input errors.
pub const EXIT_INPUT: i32 = 2;
/// Exit status when any check fails.
pub const EXIT_FAIL: i32 = 1;

pub fn exit_code(report: &Report) -> i32 {
    if report.passed() {
        0
    } else {
        EXIT_FAIL
    }
}

/// Bundled scenarios as `(name, JSON)`.
pub const BUNDLED: &[(&str, &str)] = &[
    ("trivial-everything", include_str!("../scenarios/trivial-everything.json")),
    ("monopole-n1", include_str!("../scenarios/monopole-n1.json")),
    ("monopole-n2", include_str!("../scenarios/monopole-n2.json")),
    ("monopole-n3", include_str!("../scenarios/monopole-n3.json")),
    ("flat-torus-bundle", include_str!("../scenarios/flat-torus-bundle.json")),
    ("flat-torus-bundle-fault", include_str!("../scenarios/flat-torus-bundle-fault.json")),
    ("monopole-fault", include_str!("../scenarios/monopole-fault.json")),
    ("flat-torus-gerbe-1-3", include_str!("../scenarios/flat-torus-gerbe-1-3.json")),
    ("flat-torus-gerbe-1-2", include_str!("../scenarios/flat-torus-gerbe-1-2.json")),
    ("flat-torus-gerbe-2-5", include_str!("../scenarios/flat-torus-gerbe-2-5.json")),
    ("gerbe-theta-fault", include_str!("../scenarios/gerbe-theta-fault.json")),
    ("circle-two-arcs-holonomy", include_str!("../scenarios/circle-two-arcs-holonomy.json")),
    ("interval-two-arcs", include_str!("../scenarios/interval-two-arcs.json")),
    ("gerbe-atlas", include_str!("../scenarios/gerbe-atlas.json")),
    ("crossed-modules", include_str!("../scenarios/crossed-modules.json")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn parse(text: &str) -> Result<Scenario, CliError> {
    Scenario::from_json(text).map_err(|e| CliError::Schema(e.to_string()))
}

/// Reads a scenario from a file, or by bundled name when no such file
/// exists.
pub fn load(arg: &str) -> Result<Scenario, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{arg}: {e}")))?;
        return parse(&text);
    }
    match bundled(arg) {
        Some(text) => parse(text),
        None => Err(CliError::UnknownScenario(arg.to_string())),
    }
}

pub const VERBS: &[(&str, &str)] = &[
    (
        "validate-bundle",
        "Checks the line bundle cocycle g_ij g_jk g_ki = 1 on triple overlaps, g_ii = 1, and \
         A_j − A_i = d log g_ij on double overlaps. Reports the first located violation and the \
         total curvature ∫F (exact turns on complexes, radians on the sphere).",
    ),
    (
        "transport",
        "Parallel transport along a path: the sum of ∫A_i over chart stretches plus the transition \
         phase at each chart switch. Phases are reported in exact turns and radians.",
    ),
    (
        "holonomy",
        "Transport around a closed path. With `thin`, the value is re-checked after random \
         backtrack insertions and monotone reparametrizations.",
    ),
    (
        "validate-gerbe",
        "Checks δθ = 0 mod 1 on quadruple overlaps, A_ij + A_jk + A_ki + dθ_ijk = 0 mod 1 on triple \
         overlaps, and F_i − F_j = dA_ij on double overlaps, with located violations.",
    ),
    (
        "surface-holonomy",
        "Surface holonomy of a closed 2-chain by the face/edge/vertex formula: Σ over faces of \
         ∫F_i(f), plus Σ over boundary edges of ±∫A_ij(e), plus Σ over vertices of ±θ_ijk(v), \
         where i, j, k are the charts assigned to the face, edge and vertex of each flag. \
         With `sweep`, every valid chart assignment is enumerated and must give the same value.",
    ),
    (
        "two-holonomy",
        "Generates 2-loops from the given generators and checks that surface holonomy is a \
         homomorphism to U(1): Hol(s⋆t) = Hol(s)·Hol(t), Hol(s⋆s⁻¹) = 1, commutativity, and \
         invariance under thin padding.",
    ),
    (
        "loop-transport",
        "Transport in the loop space: homotopies between based loops act by the surface holonomy \
         of the swept 2-chain. Builds the cylindrical groupoid, its thin quotient and phase \
         groups, and checks the connection pair transport law.",
    ),
    (
        "build-local-subgroupoid",
        "Builds the local subgroupoid of a gauge transport on a finite site: chosen geodesics per \
         chart, reachability subgroupoids C(U_i), and the germ section; checks geodesic coherence, \
         flatness and path locality.",
    ),
    (
        "globalise",
        "Globalises a local subgroupoid: glob is the subgroupoid generated by the pieces, Hol is \
         the free groupoid on piece arrows modulo in-piece composition and overlap identification, \
         completed to a confluent rewriting system. Reports vertex group presentations and checks \
         the covering morphism Hol → glob.",
    ),
    (
        "theorem-1",
        "End to end: validate the gerbe, check the declared connections ω_i against its curvings \
         and connective structure, transport along geodesics in each chart, build the local \
         subgroupoid, and globalise it into the holonomy groupoid.",
    ),
    (
        "double-check",
        "Double groupoid sweeps: the transport law and piecewise identity on composable path \
         pairs, or the crossed module round trip and exhaustive interchange law.",
    ),
];

pub fn explain(verb: &str) -> Result<&'static str, CliError> {
    VERBS
        .iter()
        .find(|(v, _)| *v == verb)
        .map(|(_, t)| *t)
        .ok_or_else(|| CliError::UnknownVerb(verb.to_string()))
}

/// One line per bundled scenario: name and description.
pub fn list_scenarios() -> Result<String, CliError> {
    let mut rows = Vec::new();
    for (name, text) in BUNDLED {
        let s = parse(text)?;
        rows.push(format!("{name:<28} {}", s.description));
    }
    Ok(rows.join("\n") + "\n")
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Only run requests of this verb.
    pub verb: Option<String>,
    pub parallel: bool,
    /// Overrides the scenario tolerance.
    pub tolerance: Option<f64>,
}

pub fn run(s: &Scenario, opts: &RunOptions) -> Result<Report, CliError> {
    if let Some(v) = &opts.verb {
        explain(v)?;
        if !s.requests.iter().any(|r| r.verb() == v) {
            return Err(CliError::NoRequest {
                scenario: s.name.clone(),
                verb: v.clone(),
            });
        }
    }
    let cx = Context {
        scenario: s,
        tolerance: opts.tolerance.or(s.tolerance).unwrap_or(DEFAULT_TOLERANCE),
        parallel: opts.parallel,
        quad: Quadrature::default(),
    };
    let mut results = Vec::new();
    for (i, req) in s.requests.iter().enumerate() {
        if opts.verb.as_deref().is_some_and(|v| v != req.verb()) {
            continue;
        }
        results.push(execute(&cx, req, format!("requests[{i}]")));
    }
    Ok(Report::new(&s.name, results))
}

fn execute(cx: &Context, req: &Request, location: String) -> VerbResult {
    let mut r = VerbResult::new(req.verb(), location.clone());
    let outcome = match req {
        Request::ValidateBundle { total_curvature } => verbs::validate_bundle(cx, *total_curvature, &mut r),
        Request::Transport { path, expect } => verbs::transport_verb(cx, path, *expect, &mut r),
        Request::Holonomy { path, expect, thin } => verbs::holonomy_verb(cx, path, *expect, thin.as_ref(), &mut r),
        Request::ValidateGerbe {} => verbs::validate_gerbe(cx, &mut r),
        Request::SurfaceHolonomy {
            surface,
            expect,
            sweep,
            thin,
            gauge_trials,
        } => verbs::surface_holonomy_verb(cx, surface, *expect, *sweep, thin.as_ref(), *gauge_trials, &mut r),
        Request::TwoHolonomy {
            generators,
            max_len,
            budget,
            gauge_trials,
        } => verbs::two_holonomy_verb(cx, generators, *max_len, *budget, *gauge_trials, &mut r),
        Request::LoopTransport {
            loops,
            homotopies,
            pairs,
            gauge_trials,
        } => verbs::loop_transport_verb(cx, loops, homotopies, *pairs, *gauge_trials, &mut r),
        Request::BuildLocalSubgroupoid { transport, path_budget } => {
            verbs::build_local_verb(cx, transport, *path_budget, &mut r)
        }
        Request::Globalise {
            atlas,
            pairs,
            bijective,
            expect_hol,
            expect_glob_order,
            max_rules,
        } => {
            let want = GlobalExpectations {
                pairs: *pairs,
                bijective: *bijective,
                hol: expect_hol.as_deref(),
                glob_order: *expect_glob_order,
            };
            verbs::globalise_verb(cx, atlas, *max_rules, &want, &mut r)
        }
        Request::Theorem1 {
            connection,
            path_budget,
            pairs,
            expect_hol,
            expect_glob_order,
            max_rules,
        } => {
            let spec = pipeline::Theorem1 {
                connection,
                path_budget: *path_budget,
                max_rules: *max_rules,
                want: GlobalExpectations {
                    pairs: *pairs,
                    bijective: None,
                    hol: expect_hol.as_deref(),
                    glob_order: *expect_glob_order,
                },
            };
            pipeline::theorem_one(cx, &spec, &mut r)
        }
        Request::DoubleCheck { sweep } => verbs::double_check_verb(cx, sweep, &mut r),
    };
    match outcome {
        Ok(()) => r.settle(),
        Err(e) => {
            let mut failed = VerbResult::failed(req.verb(), location, e.to_string());
            failed.values = r.values;
            failed.checks = r.checks;
            failed
        }
    }
}
