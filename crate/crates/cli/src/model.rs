//! Turning scenario specs into core objects.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use holonomy_core::bundle::{torus_two_band_space, LineBundleData};
use holonomy_core::cover::{build_cover, CellComplex, CombinatorialCover, CoverSpec, CoveredSpace};
use holonomy_core::forms::DiscreteForm;
use holonomy_core::gerbe::{torus_window_space, DeligneGauge, GerbeData, TwoLoop};
use holonomy_core::groupoid::FiniteGroupoid;
use holonomy_core::local::EdgeTransport;
use holonomy_core::paths::{Curve, EdgePath, EdgeStep, SmoothPath, ThinPath};
use holonomy_core::site::FiniteSite;
use holonomy_core::{Error, Result};

use crate::scenario::{
    BundleFault, BundleModel, BundleSpec, ComplexSpec, EdgePhases, GerbeModel, GerbeSpec, PathSpec, Scenario,
    SiteSpec, SpaceSpec, SurfaceSpec, Turns,
};

fn turns(v: &[Turns]) -> Vec<Rational64> {
    v.iter().map(|t| t.0).collect()
}

pub fn complex(spec: &ComplexSpec) -> CellComplex {
    match *spec {
        ComplexSpec::Circle(n) => CellComplex::circle(n),
        ComplexSpec::Path(n) => CellComplex::path(n),
        ComplexSpec::Torus([m, n]) => CellComplex::torus(m, n),
        ComplexSpec::Sphere([r, c]) => CellComplex::sphere(r, c),
    }
}

pub fn space(spec: &SpaceSpec) -> Result<CoveredSpace> {
    match spec {
        SpaceSpec::Builtin(name) => build_cover(CoverSpec::Builtin(name.clone())),
        SpaceSpec::TorusWindows { m, n, width } => torus_window_space(*m, *n, *width),
        SpaceSpec::TorusBands { m, n } => torus_two_band_space(*m, *n),
        SpaceSpec::Complex { complex: c, charts } => {
            let charts = charts
                .iter()
                .map(|ch| (ch.name.clone(), ch.faces.clone(), ch.edges.clone(), ch.vertices.clone()))
                .collect();
            let cover = CombinatorialCover::new(complex(c), charts)?;
            build_cover(CoverSpec::Combinatorial {
                cover,
                declared_nerve: None,
                require_good: false,
            })
        }
    }
}

fn scenario_space(s: &Scenario, what: &str) -> Result<CoveredSpace> {
    let spec = s
        .space
        .as_ref()
        .ok_or_else(|| Error::Invalid(format!("{what} needs the scenario `space`")))?;
    space(spec)
}

pub fn bundle(s: &Scenario, spec: &BundleSpec) -> Result<LineBundleData> {
    let mut b = match &spec.model {
        BundleModel::Trivial => LineBundleData::trivial(scenario_space(s, "a trivial bundle")?)?,
        BundleModel::Monopole { n } => LineBundleData::monopole(*n)?,
        BundleModel::FlatTorus { m, n, holonomy } => LineBundleData::flat_torus(*m, *n, [holonomy[0].0, holonomy[1].0])?,
        BundleModel::Combinatorial {
            transitions,
            connections,
        } => {
            let sp = scenario_space(s, "combinatorial bundle data")?;
            let conns = connections.iter().map(|c| DiscreteForm::new(1, turns(c))).collect();
            let trans = transitions
                .iter()
                .map(|t| ((t.charts[0], t.charts[1]), turns(&t.values)))
                .collect();
            LineBundleData::combinatorial(sp, conns, trans)?
        }
    };
    if let Some(tol) = s.tolerance {
        b.tolerance = tol;
    }
    match &spec.fault {
        None => Ok(b),
        Some(BundleFault::Vertex { charts, vertex, amount }) => b.corrupt_vertex(charts[0], charts[1], *vertex, amount.0),
        Some(BundleFault::Sample { charts, point, radians }) => b.corrupt_sample(charts[0], charts[1], point, *radians),
    }
}

/// A Deligne gauge with entries in `{−12, …, 12}/12`.
pub fn random_gauge(g: &GerbeData, seed: u64) -> DeligneGauge {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DeligneGauge::from_fn(g, || Rational64::new(rng.gen_range(-12..=12), 12))
}

pub fn gerbe(s: &Scenario, spec: &GerbeSpec) -> Result<GerbeData> {
    let g = match &spec.model {
        GerbeModel::Trivial => GerbeData::trivial(scenario_space(s, "a trivial gerbe")?)?,
        GerbeModel::FlatTorus { m, n, flux } => GerbeData::flat_torus(*m, *n, flux.0)?,
        GerbeModel::Data { theta, a, curvings } => {
            let sp = scenario_space(s, "explicit gerbe data")?;
            GerbeData::new(
                sp,
                theta.iter().map(|t| (t.charts, turns(&t.values))).collect(),
                a.iter()
                    .map(|x| ((x.charts[0], x.charts[1]), DiscreteForm::new(1, turns(&x.values))))
                    .collect(),
                curvings.iter().map(|f| DiscreteForm::new(2, turns(f))).collect(),
            )?
        }
    };
    let g = match spec.gauge_seed {
        Some(seed) => g.gauge_transform(&random_gauge(&g, seed))?,
        None => g,
    };
    match &spec.fault {
        Some(f) => g.with_theta(f.charts, f.vertex, f.value.0),
        None => Ok(g),
    }
}

pub fn edge_path(c: &CellComplex, spec: &PathSpec) -> Result<EdgePath> {
    match spec {
        PathSpec::Edges { start, steps } => {
            let steps = steps
                .iter()
                .map(|s| match s.as_slice() {
                    [e, sign] => Ok(EdgeStep::new(*e as usize, *sign as i8)),
                    [e, sign, chart] => Ok(EdgeStep::in_chart(*e as usize, *sign as i8, *chart as usize)),
                    _ => Err(Error::Invalid(format!("edge step {s:?} is not [edge, sign] or [edge, sign, chart]"))),
                })
                .collect::<Result<Vec<_>>>()?;
            EdgePath::new(c, *start, steps)
        }
        PathSpec::Vertices(v) => EdgePath::through(c, v),
        PathSpec::Concat(parts) => {
            let mut it = parts.iter();
            let first = it.next().ok_or_else(|| Error::Invalid("empty concatenation".into()))?;
            it.try_fold(edge_path(c, first)?, |acc, p| acc.concat(&edge_path(c, p)?))
        }
        PathSpec::Reverse(p) => Ok(edge_path(c, p)?.reverse()),
        other => Err(Error::KindMismatch(format!("{other:?} is not a combinatorial path"))),
    }
}

/// Builds a path on the bundle's backend.
pub fn thin_path(b: &LineBundleData, spec: &PathSpec) -> Result<ThinPath> {
    if let Some(cover) = b.space.combinatorial() {
        return Ok(ThinPath::Combinatorial(edge_path(&cover.complex, spec)?));
    }
    let cover = b.space.analytic().expect("one backend");
    let smooth = |curve: Curve, chart: usize| SmoothPath::new(cover, vec![(curve, chart)]);
    let p = match spec {
        PathSpec::Latitude { theta, from, to, chart } => smooth(
            Curve::Latitude {
                theta: *theta,
                phi_from: from.unwrap_or(0.0),
                phi_to: to.unwrap_or(TAU),
            },
            *chart,
        )?,
        PathSpec::Meridian { phi, from, to, chart } => smooth(
            Curve::Meridian {
                phi: *phi,
                theta_from: *from,
                theta_to: *to,
            },
            *chart,
        )?,
        PathSpec::Line { from, to, chart } => smooth(
            Curve::Line {
                from: from.clone(),
                to: to.clone(),
            },
            *chart,
        )?,
        PathSpec::CircleArc { from, to, chart } => smooth(Curve::CircleArc { from: *from, to: *to }, *chart)?,
        PathSpec::Concat(parts) => {
            let mut it = parts.iter();
            let first = it.next().ok_or_else(|| Error::Invalid("empty concatenation".into()))?;
            let mut acc = match thin_path(b, first)? {
                ThinPath::Smooth(p) => p,
                ThinPath::Combinatorial(_) => unreachable!("analytic backend"),
            };
            for p in it {
                if let ThinPath::Smooth(q) = thin_path(b, p)? {
                    acc = acc.concat(&q, cover)?;
                }
            }
            acc
        }
        PathSpec::Reverse(p) => return Ok(thin_path(b, p)?.reverse()),
        other => return Err(Error::KindMismatch(format!("{other:?} is not a smooth path"))),
    };
    Ok(ThinPath::Smooth(p))
}

pub fn surface(c: &CellComplex, spec: &SurfaceSpec) -> Result<TwoLoop> {
    match spec {
        SurfaceSpec::Fundamental => TwoLoop::fundamental(c),
        SurfaceSpec::Faces(f) => TwoLoop::new(c, f.clone()),
        SurfaceSpec::Repeated { surface: s, times } => Ok(surface(c, s)?.repeated(*times)),
        SurfaceSpec::Inverse(s) => Ok(surface(c, s)?.inverse()),
    }
}

pub fn site(s: &Scenario, spec: &SiteSpec) -> Result<FiniteSite> {
    match spec {
        SiteSpec::Circle { n, arcs } => FiniteSite::circle(*n, arcs),
        SiteSpec::Interval { n, pieces } => FiniteSite::interval(*n, pieces),
        SiteSpec::General { points, cover, edges } => {
            FiniteSite::new(*points, cover, edges.iter().map(|e| (e[0], e[1])).collect())
        }
        SiteSpec::FromSpace => {
            let sp = scenario_space(s, "a site read from the space")?;
            site_of_space(&sp)
        }
    }
}

/// Points are vertices, cover sets are chart vertex sets, edges are the
/// complex's edges.
pub fn site_of_space(sp: &CoveredSpace) -> Result<FiniteSite> {
    let cover = sp
        .combinatorial()
        .ok_or_else(|| Error::Invalid("a site needs a combinatorial space".into()))?;
    let sets: Vec<Vec<usize>> = cover
        .charts
        .iter()
        .map(|ch| ch.cells.vertices.iter().copied().collect())
        .collect();
    FiniteSite::new(cover.complex.vertex_count(), &sets, cover.complex.edges().to_vec())
}

/// The gauge groupoid over the site with the listed phases on its edges.
pub fn edge_transport(site: &FiniteSite, spec: &EdgePhases) -> Result<EdgeTransport> {
    let parent = Arc::new(FiniteGroupoid::gauge(site.point_count(), spec.order, None)?);
    gauge_transport(parent, site.edges(), |a, b| {
        spec.phases
            .iter()
            .find(|(x, y, _)| (*x, *y) == (a, b))
            .map(|t| t.2 .0)
            .or_else(|| spec.phases.iter().find(|(x, y, _)| (*x, *y) == (b, a)).map(|t| -t.2 .0))
            .unwrap_or_default()
    })
}

pub fn gauge_transport(
    parent: Arc<FiniteGroupoid>,
    edges: &[(usize, usize)],
    phase: impl Fn(usize, usize) -> Rational64,
) -> Result<EdgeTransport> {
    let arrows = edges
        .iter()
        .map(|&(a, b)| parent.gauge_arrow(a, b, phase(a, b)))
        .collect::<Result<Vec<_>>>()?;
    EdgeTransport::new(parent, edges.to_vec(), arrows)
}
