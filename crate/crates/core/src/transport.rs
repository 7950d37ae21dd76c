//! Parallel transport and holonomy of thin paths in a line bundle, and
//! the double groupoid of thin paths with its connection pair.
//!
//! A transport starts in the reference chart of its start point (the
//! lowest-numbered chart containing it), follows each segment in its own
//! chart contributing `−∫A_i`, adds `g_ij` at every chart switch, and ends
//! by switching into the reference chart of its end point.

use num_rational::Rational64;
use num_traits::Zero;

use crate::bundle::{BundleData, LineBundleData};
use crate::cover::ChartId;
use crate::double::{check_transport_law, ConnectionPair, LawReport, PhaseDouble};
use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, PhaseArrow};
use crate::paths::{Ambient, Curve, EdgePath, SmoothPath, ThinPath};
use crate::phase::{circular_distance, Phase};
use crate::quadrature::Quadrature;

/// One chart-constant stretch of a transport.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub chart: ChartId,
    /// `∫ A_chart` over the stretch.
    pub integral: Phase,
    /// Steps (combinatorial) or pieces (smooth) covered.
    pub steps: std::ops::Range<usize>,
    pub converged: bool,
}

/// A transition phase inserted at a chart switch.
#[derive(Clone, Debug, PartialEq)]
pub struct Insertion {
    pub from: ChartId,
    pub to: ChartId,
    pub location: String,
    pub phase: Phase,
}

/// The evaluated lift at one time: it runs from `λ(0)` to `at` with the
/// given phase, read in the reference chart of `at`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialLift {
    pub t: f64,
    pub at: PathPoint,
    pub phase: Phase,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransportResult {
    pub value: Phase,
    pub segments: Vec<Segment>,
    pub insertions: Vec<Insertion>,
    /// Lifts at `t = 0` and after every step or piece.
    pub partials: Vec<PartialLift>,
}

/// A point of the underlying space: a vertex, or coordinates keyed on a
/// `10⁻⁸` grid after normalisation.
#[derive(Clone, Debug)]
pub enum PathPoint {
    Vertex(usize),
    Point { key: Vec<i64>, coords: Vec<f64> },
}

impl PartialEq for PathPoint {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (PathPoint::Vertex(a), PathPoint::Vertex(b)) => a == b,
            (PathPoint::Point { key: a, .. }, PathPoint::Point { key: b, .. }) => a == b,
            _ => false,
        }
    }
}

impl Eq for PathPoint {}

impl PathPoint {
    pub fn point(bundle: &LineBundleData, x: &[f64]) -> PathPoint {
        let norm = match bundle.space.analytic() {
            Some(c) => c.manifold.normalize(x),
            None => x.to_vec(),
        };
        let key = norm
            .iter()
            .map(|v| {
                let k = (v * 1e8).round() as i64;
                // 2π and 0 name the same angle.
                if k == (std::f64::consts::TAU * 1e8).round() as i64 {
                    0
                } else {
                    k
                }
            })
            .collect();
        PathPoint::Point { key, coords: x.to_vec() }
    }
}

/// Lowest chart containing a vertex.
pub fn reference_chart_vertex(bundle: &LineBundleData, v: usize) -> Result<ChartId> {
    let cover = bundle
        .space
        .combinatorial()
        .ok_or_else(|| Error::KindMismatch("vertex on an analytic space".into()))?;
    cover
        .charts_containing_vertex(v)
        .first()
        .copied()
        .ok_or_else(|| Error::ChartMismatch(format!("vertex {v} is in no chart")))
}

/// Lowest chart containing a point.
pub fn reference_chart_point(bundle: &LineBundleData, x: &[f64]) -> Result<ChartId> {
    let cover = bundle
        .space
        .analytic()
        .ok_or_else(|| Error::KindMismatch("point on a combinatorial space".into()))?;
    (0..cover.charts.len())
        .find(|&i| cover.contains(i, x))
        .ok_or_else(|| Error::ChartMismatch(format!("point {x:?} is in no chart")))
}

fn ensure_valid(bundle: &LineBundleData) -> Result<()> {
    let report = bundle.validate();
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidBundle(format!("{} fails at {}", v.identity, v.location))),
    }
}

/// Transport along a path of either kind. The bundle is assumed valid;
/// use [`transport_checked`] to validate first.
pub fn transport(bundle: &LineBundleData, path: &ThinPath, quad: &Quadrature) -> Result<TransportResult> {
    match path {
        ThinPath::Combinatorial(p) => transport_edges(bundle, p),
        ThinPath::Smooth(p) => transport_smooth(bundle, p, quad),
    }
}

/// [`transport`] after validating the bundle.
pub fn transport_checked(bundle: &LineBundleData, path: &ThinPath, quad: &Quadrature) -> Result<TransportResult> {
    ensure_valid(bundle)?;
    transport(bundle, path, quad)
}

/// Transport of a closed path.
pub fn holonomy(bundle: &LineBundleData, path: &ThinPath, quad: &Quadrature) -> Result<Phase> {
    let closed = match path {
        ThinPath::Combinatorial(p) => p.is_closed(),
        ThinPath::Smooth(p) => {
            let cover = bundle
                .space
                .analytic()
                .ok_or_else(|| Error::KindMismatch("smooth path on a combinatorial space".into()))?;
            p.is_closed(cover)
        }
    };
    if !closed {
        return Err(Error::NotClosed("holonomy needs a closed path".into()));
    }
    Ok(transport(bundle, path, quad)?.value)
}

pub fn transport_edges(bundle: &LineBundleData, path: &EdgePath) -> Result<TransportResult> {
    let BundleData::Combinatorial { connections, .. } = &bundle.data else {
        return Err(Error::KindMismatch("edge path on an analytic bundle".into()));
    };
    let cover = bundle.space.combinatorial().expect("combinatorial");
    let complex = &cover.complex;
    let mut at = path.start();
    let mut cur = reference_chart_vertex(bundle, at)?;
    let mut total = Rational64::zero();
    let mut segments: Vec<Segment> = Vec::new();
    let mut insertions = Vec::new();
    let mut partials = vec![PartialLift {
        t: 0.0,
        at: PathPoint::Vertex(at),
        phase: Phase::zero(),
    }];
    let n = path.len();
    let mut seg_total = Rational64::zero();
    let mut seg_start = 0;
    for (k, step) in path.steps().iter().enumerate() {
        let chart = match step.chart {
            Some(c) => c,
            None if cover.charts[cur].cells.edges.contains(&step.edge) => cur,
            None => *cover
                .charts_containing_edge(step.edge)
                .first()
                .ok_or_else(|| Error::ChartMismatch(format!("edge {} is in no chart", step.edge)))?,
        };
        if chart >= cover.charts.len() || !cover.charts[chart].cells.edges.contains(&step.edge) {
            return Err(Error::ChartMismatch(format!(
                "step {k} uses edge {} outside its chart {}",
                step.edge,
                bundle.space.chart_name(chart.min(cover.charts.len() - 1))
            )));
        }
        if chart != cur {
            if k > seg_start {
                segments.push(Segment {
                    chart: cur,
                    integral: Phase::from_ratio(seg_total),
                    steps: seg_start..k,
                    converged: true,
                });
            }
            let g = bundle.transition_turns(cur, chart, at)?;
            insertions.push(Insertion {
                from: cur,
                to: chart,
                location: format!("vertex {at}"),
                phase: Phase::from_ratio(g),
            });
            total += g;
            cur = chart;
            seg_total = Rational64::zero();
            seg_start = k;
        }
        let a = connections[chart].oriented(step.edge, step.sign);
        total -= a;
        seg_total += a;
        at = complex.step_end(step.edge, step.sign);
        let r = reference_chart_vertex(bundle, at)?;
        partials.push(PartialLift {
            t: (k + 1) as f64 / n as f64,
            at: PathPoint::Vertex(at),
            phase: Phase::from_ratio(total + bundle.transition_turns(cur, r, at)?),
        });
    }
    if n > seg_start {
        segments.push(Segment {
            chart: cur,
            integral: Phase::from_ratio(seg_total),
            steps: seg_start..n,
            converged: true,
        });
    }
    let r = reference_chart_vertex(bundle, at)?;
    if r != cur {
        let g = bundle.transition_turns(cur, r, at)?;
        insertions.push(Insertion {
            from: cur,
            to: r,
            location: format!("vertex {at}"),
            phase: Phase::from_ratio(g),
        });
        total += g;
    }
    Ok(TransportResult {
        value: Phase::from_ratio(total),
        segments,
        insertions,
        partials,
    })
}

pub fn transport_smooth(bundle: &LineBundleData, path: &SmoothPath, quad: &Quadrature) -> Result<TransportResult> {
    let BundleData::Analytic { connections, .. } = &bundle.data else {
        return Err(Error::KindMismatch("smooth path on a combinatorial bundle".into()));
    };
    let cover = bundle.space.analytic().expect("analytic");
    let start = path.start_point();
    let mut cur = reference_chart_point(bundle, &start)?;
    let mut total = 0.0;
    let mut segments = Vec::new();
    let mut insertions = Vec::new();
    let mut partials = vec![PartialLift {
        t: 0.0,
        at: PathPoint::point(bundle, &start),
        phase: Phase::zero(),
    }];
    for (k, piece) in path.pieces().iter().enumerate() {
        if piece.chart >= cover.charts.len() {
            return Err(Error::ChartMismatch(format!("piece {k} names chart {}", piece.chart)));
        }
        piece.check_in_chart(cover)?;
        if piece.chart != cur {
            let x = piece.start_point();
            let g = bundle.transition_radians(cur, piece.chart, &x)?;
            insertions.push(Insertion {
                from: cur,
                to: piece.chart,
                location: format!("point {x:?}"),
                phase: Phase::from_radians(g),
            });
            total += g;
            cur = piece.chart;
        }
        let est = piece.integrate(&connections[cur], quad);
        total -= est.value;
        segments.push(Segment {
            chart: cur,
            integral: Phase::from_radians(est.value),
            steps: k..k + 1,
            converged: est.converged,
        });
        let x = piece.end_point();
        let r = reference_chart_point(bundle, &x)?;
        partials.push(PartialLift {
            t: piece.t1,
            at: PathPoint::point(bundle, &x),
            phase: Phase::from_radians(total + bundle.transition_radians(cur, r, &x)?),
        });
    }
    let end = path.end_point();
    let r = reference_chart_point(bundle, &end)?;
    if r != cur {
        let g = bundle.transition_radians(cur, r, &end)?;
        insertions.push(Insertion {
            from: cur,
            to: r,
            location: format!("point {end:?}"),
            phase: Phase::from_radians(g),
        });
        total += g;
    }
    Ok(TransportResult {
        value: Phase::from_radians(total),
        segments,
        insertions,
        partials,
    })
}

/// The lift `Υ^λ(t)` read in the reference chart of `λ(t)`.
pub fn partial_transport(bundle: &LineBundleData, path: &SmoothPath, t: f64, quad: &Quadrature) -> Result<Phase> {
    let BundleData::Analytic { connections, .. } = &bundle.data else {
        return Err(Error::KindMismatch("smooth path on a combinatorial bundle".into()));
    };
    let mut cur = reference_chart_point(bundle, &path.start_point())?;
    let mut total = 0.0;
    for piece in path.pieces() {
        if piece.t0 >= t && piece.t0 > 0.0 {
            break;
        }
        if piece.chart != cur {
            total += bundle.transition_radians(cur, piece.chart, &piece.start_point())?;
            cur = piece.chart;
        }
        let b = piece.local_time(t);
        total -= piece.integrate_between(&connections[cur], quad, 0.0, b).value;
        if piece.t1 >= t {
            break;
        }
    }
    let x = path.point_at(t);
    let r = reference_chart_point(bundle, &x)?;
    total += bundle.transition_radians(cur, r, &x)?;
    Ok(Phase::from_radians(total))
}

/// The groupoid of thin paths: objects are points, composition is
/// concatenation. Combinatorial arrows are compared by normal form;
/// smooth arrows by endpoints and transport, the only thin-invariant
/// observable available for them.
pub struct ThinPathGroupoid<'a> {
    pub bundle: &'a LineBundleData,
    pub quad: Quadrature,
}

impl<'a> ThinPathGroupoid<'a> {
    fn ambient(&self) -> Ambient<'_> {
        match self.bundle.space.combinatorial() {
            Some(c) => Ambient::Complex(&c.complex),
            None => Ambient::Analytic(self.bundle.space.analytic().expect("analytic")),
        }
    }

    pub fn endpoint(&self, path: &ThinPath, end: bool) -> PathPoint {
        match path {
            ThinPath::Combinatorial(p) => PathPoint::Vertex(if end { p.end() } else { p.start() }),
            ThinPath::Smooth(p) => PathPoint::point(self.bundle, &if end { p.end_point() } else { p.start_point() }),
        }
    }

    /// Transport phase, or NaN (never equal to anything) on failure.
    pub fn phase(&self, path: &ThinPath) -> Phase {
        transport(self.bundle, path, &self.quad)
            .map(|r| r.value)
            .unwrap_or_else(|_| Phase::from_radians(f64::NAN))
    }
}

impl Groupoid for ThinPathGroupoid<'_> {
    type Object = PathPoint;
    type Arrow = ThinPath;

    fn source(&self, a: &ThinPath) -> PathPoint {
        self.endpoint(a, false)
    }

    fn target(&self, a: &ThinPath) -> PathPoint {
        self.endpoint(a, true)
    }

    fn identity(&self, x: &PathPoint) -> ThinPath {
        match x {
            PathPoint::Vertex(v) => ThinPath::Combinatorial(EdgePath::constant(*v)),
            PathPoint::Point { coords, .. } => {
                let cover = self.bundle.space.analytic().expect("analytic");
                let chart = reference_chart_point(self.bundle, coords).unwrap_or(0);
                let curve = Curve::Line {
                    from: coords.clone(),
                    to: coords.clone(),
                };
                ThinPath::Smooth(SmoothPath::new(cover, vec![(curve, chart)]).expect("constant path"))
            }
        }
    }

    fn inverse(&self, a: &ThinPath) -> ThinPath {
        a.reverse()
    }

    fn compose(&self, g: &ThinPath, h: &ThinPath) -> Result<ThinPath> {
        g.concat(h, self.ambient())
    }

    fn arrows_equal(&self, a: &ThinPath, b: &ThinPath) -> bool {
        match (a, b) {
            (ThinPath::Combinatorial(p), ThinPath::Combinatorial(q)) => p.thin_equal(q),
            (ThinPath::Smooth(_), ThinPath::Smooth(_)) => {
                self.source(a) == self.source(b)
                    && self.target(a) == self.target(b)
                    && self.phase(a).approx_eq(&self.phase(b), self.bundle.tolerance)
            }
            _ => false,
        }
    }
}

/// Thin-path double groupoid of a bundle over a finite path family.
pub struct ThinPathDouble<'a> {
    pub double: PhaseDouble<ThinPathGroupoid<'a>>,
    pub family: Vec<ThinPath>,
}

/// Builds the family of all composites of at most `max_len` generators
/// (and their reverses), failing with `BudgetExceeded` past `budget`.
pub fn thin_path_double_groupoid<'a>(
    bundle: &'a LineBundleData,
    generators: &[ThinPath],
    max_len: usize,
    budget: usize,
    quad: Quadrature,
) -> Result<ThinPathDouble<'a>> {
    let v = ThinPathGroupoid { bundle, quad };
    for g in generators {
        transport(bundle, g, &quad)?;
    }
    let mut letters: Vec<ThinPath> = generators.to_vec();
    letters.extend(generators.iter().map(|g| g.reverse()));
    let mut family = letters.clone();
    let mut frontier = letters.clone();
    for _ in 1..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for l in &letters {
                if v.target(p) != v.source(l) {
                    continue;
                }
                let pl = v.compose(p, l)?;
                if !family.iter().any(|q| q == &pl) {
                    family.push(pl.clone());
                    next.push(pl);
                    if family.len() > budget {
                        return Err(Error::BudgetExceeded(format!(
                            "path family exceeds {budget} paths at word length ≤ {max_len}"
                        )));
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(ThinPathDouble {
        double: PhaseDouble::new(v, bundle.tolerance),
        family,
    })
}

impl<'a> ThinPathDouble<'a> {
    pub fn vertical(&self) -> &ThinPathGroupoid<'a> {
        use crate::double::DoubleGroupoid;
        self.double.vertical()
    }

    /// `Hol(λ)`: the horizontal arrow `λ(0) → λ(1)` carrying the transport.
    pub fn hol(&self, path: &ThinPath) -> PhaseArrow<PathPoint> {
        let v = self.vertical();
        PhaseArrow {
            source: v.source(path),
            target: v.target(path),
            phase: v.phase(path),
        }
    }

    pub fn connection_pair(&self) -> ConnectionPair<'_, PhaseDouble<ThinPathGroupoid<'a>>> {
        let v: &ThinPathGroupoid<'a> = self.vertical();
        self.double.connection_pair(move |p: &ThinPath| PhaseArrow {
            source: v.source(p),
            target: v.target(p),
            phase: v.phase(p),
        })
    }

    /// Composable pairs of the family in a fixed order, at most `limit`.
    pub fn composable_pairs(&self, limit: usize) -> Vec<(ThinPath, ThinPath)> {
        let v = self.vertical();
        let mut out = Vec::new();
        for a in &self.family {
            for b in &self.family {
                if out.len() >= limit {
                    return out;
                }
                if v.target(a) == v.source(b) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    pub fn check_transport_law(&self, pairs: &[(ThinPath, ThinPath)]) -> LawReport {
        let cp = self.connection_pair();
        check_transport_law(&cp, &self.double, pairs)
    }

    /// The piecewise law `Υ^{λ⋆μ}(t) = Υ^λ(2t)` for `t ≤ ½` and
    /// `Υ^μ(2t−1) ∘₂ Υ^λ(1)` for `t ≥ ½`, at nine times for smooth paths
    /// and at every vertex for edge paths.
    pub fn check_piecewise(&self, pairs: &[(ThinPath, ThinPath)]) -> LawReport {
        let mut report = LawReport::new("piecewise transport law");
        let v = self.vertical();
        for (i, (a, b)) in pairs.iter().enumerate() {
            let outcome = piecewise_instance(v.bundle, a, b, &v.quad);
            match outcome {
                Ok(None) => report.record(i, true, String::new),
                Ok(Some(detail)) => report.record(i, false, || detail),
                Err(e) => report.record(i, false, || format!("evaluation failed: {e}")),
            }
        }
        report
    }
}

/// `None` when the piecewise law holds for `(a, b)`, else where it fails.
pub fn piecewise_instance(bundle: &LineBundleData, a: &ThinPath, b: &ThinPath, quad: &Quadrature) -> Result<Option<String>> {
    match (a, b) {
        (ThinPath::Combinatorial(p), ThinPath::Combinatorial(q)) => {
            let pq = p.joined(q)?;
            let lifts = |x: &EdgePath| -> Result<Vec<Phase>> {
                Ok(transport_edges(bundle, x)?.partials.into_iter().map(|l| l.phase).collect())
            };
            let (tp, tq, tpq) = (lifts(p)?, lifts(q)?, lifts(&pq)?);
            let end = *tp.last().expect("nonempty");
            for k in 0..tpq.len() {
                let expected = if k <= p.len() { tp[k] } else { tq[k - p.len()] + end };
                if tpq[k] != expected {
                    return Ok(Some(format!(
                        "after {k} steps: {} but the pieces give {}",
                        tpq[k].turns_string(),
                        expected.turns_string()
                    )));
                }
            }
            Ok(None)
        }
        (ThinPath::Smooth(p), ThinPath::Smooth(q)) => {
            let cover = bundle
                .space
                .analytic()
                .ok_or_else(|| Error::KindMismatch("smooth path on a combinatorial space".into()))?;
            let pq = p.concat(q, cover)?;
            let end = partial_transport(bundle, p, 1.0, quad)?;
            for k in 0..=8 {
                let t = k as f64 / 8.0;
                let lhs = partial_transport(bundle, &pq, t, quad)?;
                let mut rhs = Vec::new();
                if t <= 0.5 {
                    rhs.push(partial_transport(bundle, p, 2.0 * t, quad)?);
                }
                if t >= 0.5 {
                    rhs.push(partial_transport(bundle, q, 2.0 * t - 1.0, quad)? + end);
                }
                for r in rhs {
                    let d = circular_distance(lhs.radians(), r.radians());
                    if d > bundle.tolerance {
                        return Ok(Some(format!("at t = {t}: {lhs} but the pieces give {r} (off by {d:.3e})")));
                    }
                }
            }
            Ok(None)
        }
        _ => Err(Error::KindMismatch("pair mixes path kinds".into())),
    }
}

/// Largest gap over nine sample times between `Υ^{λψ}(t)` and
/// `Υ^λ(ψ(t)) − Υ^λ(ψ(0))`, for `ψ` the affine map onto `[t0, t1]`.
pub fn restriction_law_defect(bundle: &LineBundleData, path: &SmoothPath, t0: f64, t1: f64, quad: &Quadrature) -> Result<f64> {
    let sub = path.restrict(t0, t1)?;
    let base = partial_transport(bundle, path, t0, quad)?;
    let mut worst: f64 = 0.0;
    for k in 0..=8 {
        let t = k as f64 / 8.0;
        let lhs = partial_transport(bundle, path, t0 + t * (t1 - t0), quad)?;
        let rhs = partial_transport(bundle, &sub, t, quad)? + base;
        worst = worst.max(circular_distance(lhs.radians(), rhs.radians()));
    }
    Ok(worst)
}

/// Largest gap over nine sample times between the lift of the
/// reparametrized path at `t` and the original lift at `ψ(σ(t))`.
pub fn reparametrization_defect(
    bundle: &LineBundleData,
    path: &SmoothPath,
    psi: &crate::paths::Reparam,
    quad: &Quadrature,
) -> Result<f64> {
    let moved = path.reparametrize(psi)?;
    let full = crate::paths::Reparam::Compose(vec![crate::paths::Reparam::Sitting(path.sitting_eps()), psi.clone()]);
    let mut worst: f64 = 0.0;
    for k in 0..=8 {
        let t = k as f64 / 8.0;
        let lhs = partial_transport(bundle, &moved, t, quad)?;
        let rhs = partial_transport(bundle, path, full.eval(t), quad)?;
        worst = worst.max(circular_distance(lhs.radians(), rhs.radians()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{Curve, EdgeStep};
    use std::f64::consts::{PI, TAU};

    fn latitude(bundle: &LineBundleData, theta: f64, chart: ChartId) -> ThinPath {
        let cover = bundle.space.analytic().unwrap();
        let curve = Curve::Latitude {
            theta,
            phi_from: 0.0,
            phi_to: TAU,
        };
        ThinPath::Smooth(SmoothPath::new(cover, vec![(curve, chart)]).unwrap())
    }

    #[test]
    fn latitude_loop_matches_closed_form() {
        let b = LineBundleData::monopole(1).unwrap();
        let q = Quadrature::default();
        for theta in [0.3, 0.9, PI / 2.0] {
            let h = holonomy(&b, &latitude(&b, theta, 0), &q).unwrap();
            let expected = Phase::from_radians(-0.5 * (1.0 - theta.cos()) * TAU);
            assert!(h.approx_eq(&expected, 1e-9), "θ = {theta}: {h} vs {expected}");
        }
        let eq = holonomy(&b, &latitude(&b, PI / 2.0, 1), &q).unwrap();
        assert!(eq.approx_eq(&Phase::from_radians(PI), 1e-9));
    }

    #[test]
    fn flat_torus_winding_loops_see_declared_holonomy() {
        let hol = [Rational64::new(1, 3), Rational64::new(2, 5)];
        let b = LineBundleData::flat_torus(3, 4, hol).unwrap();
        let complex = &b.space.combinatorial().unwrap().complex;
        let row = EdgePath::new(complex, 0, (0..4).map(|j| EdgeStep::new(2 * j, 1)).collect()).unwrap();
        let col = EdgePath::new(complex, 0, (0..3).map(|i| EdgeStep::new(2 * (4 * i) + 1, 1)).collect()).unwrap();
        let q = Quadrature::default();
        assert_eq!(holonomy(&b, &ThinPath::Combinatorial(row), &q).unwrap(), Phase::from_ratio(hol[0]));
        assert_eq!(holonomy(&b, &ThinPath::Combinatorial(col), &q).unwrap(), Phase::from_ratio(hol[1]));
    }

    #[test]
    fn transport_law_and_piecewise_law_on_latitudes() {
        let b = LineBundleData::monopole(2).unwrap();
        let gens = vec![latitude(&b, 1.4, 0), latitude(&b, 1.4, 1)];
        let tp = thin_path_double_groupoid(&b, &gens, 2, 64, Quadrature::default()).unwrap();
        let pairs = tp.composable_pairs(40);
        assert!(tp.check_transport_law(&pairs).passed());
        assert!(tp.check_piecewise(&pairs[..6]).passed());
    }

    #[test]
    fn restriction_and_reparametrization_laws() {
        let b = LineBundleData::monopole(1).unwrap();
        let ThinPath::Smooth(p) = latitude(&b, 1.1, 0) else { unreachable!() };
        let q = Quadrature::default();
        assert!(restriction_law_defect(&b, &p, 0.2, 0.7, &q).unwrap() < 1e-9);
        let psi = crate::paths::Reparam::Power(2.0);
        assert!(reparametrization_defect(&b, &p, &psi, &q).unwrap() < 1e-9);
    }
}
