//! Thin paths: combinatorial edge paths kept in backtrack-free normal
//! form, and smooth piecewise paths with sitting instants.

use std::f64::consts::TAU;

use crate::cover::{AnalyticCover, CellComplex, ChartId};
use crate::error::{Error, Result};
use crate::forms::OneForm;
use crate::quadrature::{Estimate, Quadrature};

/// Default length of the sitting intervals `[0, ε)` and `(1 − ε, 1]`.
pub const SITTING_EPS: f64 = 1.0 / 16.0;

/// One signed edge of an edge path, with the chart it is evaluated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeStep {
    pub edge: usize,
    pub sign: i8,
    pub chart: Option<ChartId>,
}

impl EdgeStep {
    pub fn new(edge: usize, sign: i8) -> Self {
        EdgeStep { edge, sign, chart: None }
    }

    pub fn in_chart(edge: usize, sign: i8, chart: ChartId) -> Self {
        EdgeStep {
            edge,
            sign,
            chart: Some(chart),
        }
    }

    pub fn reversed(self) -> Self {
        EdgeStep {
            sign: -self.sign,
            ..self
        }
    }
}

/// A walk along edges of a cell complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgePath {
    start: usize,
    end: usize,
    steps: Vec<EdgeStep>,
}

impl EdgePath {
    /// Builds and normalises a path; consecutive steps must meet.
    pub fn new(complex: &CellComplex, start: usize, steps: Vec<EdgeStep>) -> Result<Self> {
        if start >= complex.vertex_count() {
            return Err(Error::Invalid(format!("start vertex {start} does not exist")));
        }
        let mut at = start;
        for (k, s) in steps.iter().enumerate() {
            if s.edge >= complex.edge_count() || (s.sign != 1 && s.sign != -1) {
                return Err(Error::Invalid(format!("step {k} is not a signed edge")));
            }
            if complex.step_start(s.edge, s.sign) != at {
                return Err(Error::EndpointMismatch(format!(
                    "step {k} starts at vertex {} but the walk is at {at}",
                    complex.step_start(s.edge, s.sign)
                )));
            }
            at = complex.step_end(s.edge, s.sign);
        }
        Ok(EdgePath {
            start,
            end: at,
            steps: normalize(steps),
        })
    }

    /// Path through a vertex sequence, using the lowest-numbered edge
    /// between consecutive vertices.
    pub fn through(complex: &CellComplex, vertices: &[usize]) -> Result<Self> {
        let start = *vertices
            .first()
            .ok_or_else(|| Error::Invalid("empty vertex sequence".into()))?;
        let mut steps = Vec::new();
        for w in vertices.windows(2) {
            let (e, s) = *complex
                .edges_between(w[0], w[1])
                .first()
                .ok_or_else(|| Error::EndpointMismatch(format!("no edge between {} and {}", w[0], w[1])))?;
            steps.push(EdgeStep::new(e, s));
        }
        Self::new(complex, start, steps)
    }

    pub fn constant(vertex: usize) -> Self {
        EdgePath {
            start: vertex,
            end: vertex,
            steps: Vec::new(),
        }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn steps(&self) -> &[EdgeStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start == self.end
    }

    /// Vertices visited, starting with `start`.
    pub fn vertices(&self, complex: &CellComplex) -> Vec<usize> {
        let mut out = vec![self.start];
        out.extend(self.steps.iter().map(|s| complex.step_end(s.edge, s.sign)));
        out
    }

    pub fn concat(&self, other: &EdgePath) -> Result<EdgePath> {
        if self.end != other.start {
            return Err(Error::EndpointMismatch(format!(
                "first path ends at {} but second starts at {}",
                self.end, other.start
            )));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(EdgePath {
            start: self.start,
            end: other.end,
            steps: normalize(steps),
        })
    }

    /// Concatenation without cancelling backtracks at the junction.
    pub fn joined(&self, other: &EdgePath) -> Result<EdgePath> {
        if self.end != other.start {
            return Err(Error::EndpointMismatch(format!(
                "first path ends at {} but second starts at {}",
                self.end, other.start
            )));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(EdgePath {
            start: self.start,
            end: other.end,
            steps,
        })
    }

    pub fn reverse(&self) -> EdgePath {
        EdgePath {
            start: self.end,
            end: self.start,
            steps: self.steps.iter().rev().map(|s| s.reversed()).collect(),
        }
    }

    /// Insert `e e⁻¹` after position `at` (a thin perturbation kept out
    /// of normal form so transports can be compared).
    pub fn with_backtrack(&self, complex: &CellComplex, at: usize, edge: usize, chart: Option<ChartId>) -> Result<Self> {
        let verts = self.vertices(complex);
        let v = *verts
            .get(at)
            .ok_or_else(|| Error::Invalid(format!("position {at} is past the end of the path")))?;
        let (s, t) = complex.edge(edge);
        let sign = if s == v {
            1
        } else if t == v {
            -1
        } else {
            return Err(Error::EndpointMismatch(format!("edge {edge} does not meet vertex {v}")));
        };
        let mut steps = self.steps.clone();
        let first = EdgeStep { edge, sign, chart };
        steps.insert(at, first.reversed());
        steps.insert(at, first);
        Ok(EdgePath {
            start: self.start,
            end: self.end,
            steps,
        })
    }

    /// Signed edges of the normal form, without chart labels.
    pub fn thin_class(&self) -> (usize, usize, Vec<(usize, i8)>) {
        let bare: Vec<EdgeStep> = self.steps.iter().map(|s| EdgeStep::new(s.edge, s.sign)).collect();
        (
            self.start,
            self.end,
            normalize(bare).iter().map(|s| (s.edge, s.sign)).collect(),
        )
    }

    pub fn thin_equal(&self, other: &EdgePath) -> bool {
        self.thin_class() == other.thin_class()
    }

    /// Same path with every step relabelled by `chart_of(step)`.
    pub fn with_charts(&self, chart_of: impl Fn(&EdgeStep) -> Option<ChartId>) -> EdgePath {
        EdgePath {
            start: self.start,
            end: self.end,
            steps: self
                .steps
                .iter()
                .map(|s| EdgeStep {
                    chart: chart_of(s),
                    ..*s
                })
                .collect(),
        }
    }
}

/// Cancels adjacent `e e⁻¹` pairs, whatever their chart labels.
pub fn normalize(steps: Vec<EdgeStep>) -> Vec<EdgeStep> {
    let mut out: Vec<EdgeStep> = Vec::with_capacity(steps.len());
    for s in steps {
        match out.last() {
            Some(top) if top.edge == s.edge && top.sign == -s.sign => {
                out.pop();
            }
            _ => out.push(s),
        }
    }
    out
}

/// Monotone maps of `[0, 1]`, with derivatives.
#[derive(Clone, Debug, PartialEq)]
pub enum Reparam {
    Identity,
    /// `t^k`.
    Power(f64),
    /// Constant on `[0, ε]` and `[1 − ε, 1]`, smooth and increasing
    /// between.
    Sitting(f64),
    /// `lo + t (hi − lo)`; maps into a curve's parameter range.
    Affine { lo: f64, hi: f64 },
    /// `Σ c_k t^k`; monotonicity is checked, not assumed.
    Polynomial(Vec<f64>),
    /// `1 − t`; only produced by path reversal.
    Reverse,
    /// `(inner(a + t (b − a)) − c) / (d − c)`.
    Window { inner: Box<Reparam>, a: f64, b: f64, c: f64, d: f64 },
    /// Applied left to right.
    Compose(Vec<Reparam>),
}

fn bump(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

fn bump_deriv(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        bump(x) / (x * x)
    }
}

impl Reparam {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Reparam::Identity => t,
            Reparam::Power(k) => t.max(0.0).powf(*k),
            Reparam::Sitting(eps) => {
                let x = ((t - eps) / (1.0 - 2.0 * eps)).clamp(0.0, 1.0);
                let (f, g) = (bump(x), bump(1.0 - x));
                if f + g == 0.0 {
                    x
                } else {
                    f / (f + g)
                }
            }
            Reparam::Affine { lo, hi } => lo + t * (hi - lo),
            Reparam::Polynomial(c) => c.iter().rev().fold(0.0, |acc, ck| acc * t + ck),
            Reparam::Reverse => 1.0 - t,
            Reparam::Window { inner, a, b, c, d } => (inner.eval(a + t * (b - a)) - c) / (d - c),
            Reparam::Compose(maps) => maps.iter().fold(t, |x, m| m.eval(x)),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            Reparam::Identity => 1.0,
            Reparam::Power(k) => {
                if t <= 0.0 {
                    if *k > 1.0 {
                        0.0
                    } else if *k == 1.0 {
                        1.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    k * t.powf(k - 1.0)
                }
            }
            Reparam::Sitting(eps) => {
                let w = 1.0 - 2.0 * eps;
                let x = (t - eps) / w;
                if x <= 0.0 || x >= 1.0 {
                    return 0.0;
                }
                let (f, g) = (bump(x), bump(1.0 - x));
                let (df, dg) = (bump_deriv(x), -bump_deriv(1.0 - x));
                (df * g - f * dg) / ((f + g) * (f + g)) / w
            }
            Reparam::Affine { lo, hi } => hi - lo,
            Reparam::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, ck)| acc * t + k as f64 * ck),
            Reparam::Reverse => -1.0,
            Reparam::Window { inner, a, b, c, d } => inner.deriv(a + t * (b - a)) * (b - a) / (d - c),
            Reparam::Compose(maps) => {
                let mut x = t;
                let mut dx = 1.0;
                for m in maps {
                    if dx == 0.0 {
                        return 0.0;
                    }
                    dx *= m.deriv(x);
                    x = m.eval(x);
                }
                dx
            }
        }
    }

    /// A monotone smooth surjection of `[0, 1]`, checked on 1025 samples.
    pub fn check_monotone(&self) -> Result<()> {
        const N: usize = 1024;
        let tol = 1e-12;
        if self.eval(0.0).abs() > tol || (self.eval(1.0) - 1.0).abs() > tol {
            return Err(Error::NonMonotone(format!(
                "ψ(0) = {}, ψ(1) = {}; expected 0 and 1",
                self.eval(0.0),
                self.eval(1.0)
            )));
        }
        let mut prev = self.eval(0.0);
        for i in 1..=N {
            let t = i as f64 / N as f64;
            let x = self.eval(t);
            if x < prev - tol || self.deriv(t) < -tol {
                return Err(Error::NonMonotone(format!("ψ decreases near t = {t}")));
            }
            prev = x;
        }
        Ok(())
    }

    /// `ψ⁻¹(y)` by bisection, taking the smallest preimage.
    pub fn inverse(&self, y: f64) -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

/// Built-in parametric curves, each over `u ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Curve {
    /// `φ` from `from` to `to` on the circle.
    CircleArc { from: f64, to: f64 },
    /// Fixed colatitude, longitude from `phi_from` to `phi_to`.
    Latitude { theta: f64, phi_from: f64, phi_to: f64 },
    /// Fixed longitude, colatitude from `theta_from` to `theta_to`.
    Meridian { phi: f64, theta_from: f64, theta_to: f64 },
    /// Shortest great-circle arc between two `(θ, φ)` points.
    GreatArc { p: [f64; 2], q: [f64; 2] },
    /// Straight segment in angular coordinates (torus, three-torus).
    Line { from: Vec<f64>, to: Vec<f64> },
}

fn unit(p: [f64; 2]) -> [f64; 3] {
    [p[0].sin() * p[1].cos(), p[0].sin() * p[1].sin(), p[0].cos()]
}

impl Curve {
    /// Winding line `start + 2π·winding·u` on a torus.
    pub fn torus_line(start: Vec<f64>, winding: Vec<f64>) -> Curve {
        let to = start.iter().zip(&winding).map(|(s, w)| s + TAU * w).collect();
        Curve::Line { from: start, to }
    }

    pub fn eval(&self, u: f64) -> Vec<f64> {
        match self {
            Curve::CircleArc { from, to } => vec![from + u * (to - from)],
            Curve::Latitude { theta, phi_from, phi_to } => vec![*theta, phi_from + u * (phi_to - phi_from)],
            Curve::Meridian { phi, theta_from, theta_to } => vec![theta_from + u * (theta_to - theta_from), *phi],
            Curve::GreatArc { p, q } => {
                let (x, _) = self.great_arc(u, *p, *q);
                let theta = x[2].clamp(-1.0, 1.0).acos();
                let phi = x[1].atan2(x[0]);
                vec![theta, phi]
            }
            Curve::Line { from, to } => from.iter().zip(to).map(|(a, b)| a + u * (b - a)).collect(),
        }
    }

    pub fn deriv(&self, u: f64) -> Vec<f64> {
        match self {
            Curve::CircleArc { from, to } => vec![to - from],
            Curve::Latitude { phi_from, phi_to, .. } => vec![0.0, phi_to - phi_from],
            Curve::Meridian { theta_from, theta_to, .. } => vec![theta_to - theta_from, 0.0],
            Curve::GreatArc { p, q } => {
                let (x, dx) = self.great_arc(u, *p, *q);
                let s = (1.0 - x[2] * x[2]).max(1e-300).sqrt();
                let r2 = (x[0] * x[0] + x[1] * x[1]).max(1e-300);
                vec![-dx[2] / s, (x[0] * dx[1] - x[1] * dx[0]) / r2]
            }
            Curve::Line { from, to } => from.iter().zip(to).map(|(a, b)| b - a).collect(),
        }
    }

    fn great_arc(&self, u: f64, p: [f64; 2], q: [f64; 2]) -> ([f64; 3], [f64; 3]) {
        let a = unit(p);
        let b = unit(q);
        let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
        let omega = dot.acos();
        if omega < 1e-15 {
            return (a, [0.0; 3]);
        }
        let s = omega.sin();
        let (ca, cb) = (((1.0 - u) * omega).sin() / s, (u * omega).sin() / s);
        let (da, db) = (-omega * ((1.0 - u) * omega).cos() / s, omega * (u * omega).cos() / s);
        let mut x = [0.0; 3];
        let mut dx = [0.0; 3];
        for k in 0..3 {
            x[k] = ca * a[k] + cb * b[k];
            dx[k] = da * a[k] + db * b[k];
        }
        (x, dx)
    }
}

/// One chart-labelled piece of a smooth path on the parameter interval
/// `[t0, t1]`: at `t`, the point is `curve(map((t − t0)/(t1 − t0)))`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothPiece {
    pub curve: Curve,
    pub map: Reparam,
    pub t0: f64,
    pub t1: f64,
    pub chart: ChartId,
}

impl SmoothPiece {
    fn local(&self, t: f64) -> f64 {
        if self.t1 > self.t0 {
            ((t - self.t0) / (self.t1 - self.t0)).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }

    pub fn point_at(&self, t: f64) -> Vec<f64> {
        self.curve.eval(self.map.eval(self.local(t)))
    }

    pub fn start_point(&self) -> Vec<f64> {
        self.curve.eval(self.map.eval(0.0))
    }

    pub fn end_point(&self) -> Vec<f64> {
        self.curve.eval(self.map.eval(1.0))
    }

    /// `∫ A` over the piece, evaluated in the piece's own parameter so
    /// that reparametrizations change the integrand but not the value.
    pub fn integrate(&self, form: &OneForm, quad: &Quadrature) -> Estimate {
        self.integrate_between(form, quad, 0.0, 1.0)
    }

    /// `∫ A` over the local parameter range `[a, b] ⊂ [0, 1]`.
    pub fn integrate_between(&self, form: &OneForm, quad: &Quadrature, a: f64, b: f64) -> Estimate {
        let f = |tau: f64| {
            let u = self.map.eval(tau);
            let du = self.map.deriv(tau);
            if du == 0.0 {
                return 0.0;
            }
            let x = self.curve.eval(u);
            let v: Vec<f64> = self.curve.deriv(u).iter().map(|c| c * du).collect();
            form.pair(&x, &v)
        };
        quad.integrate(&f, a, b)
    }

    /// Local parameter of path time `t` within this piece.
    pub fn local_time(&self, t: f64) -> f64 {
        self.local(t)
    }

    /// Checks 65 sample points lie in the piece's chart.
    pub fn check_in_chart(&self, cover: &AnalyticCover) -> Result<()> {
        for i in 0..=64 {
            let x = self.curve.eval(self.map.eval(i as f64 / 64.0));
            if !cover.contains(self.chart, &x) {
                return Err(Error::ChartMismatch(format!(
                    "point {x:?} of a piece is outside chart {}",
                    cover.charts[self.chart].name
                )));
            }
        }
        Ok(())
    }
}

/// A piecewise smooth path on an analytic manifold, constant near both
/// ends.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothPath {
    pieces: Vec<SmoothPiece>,
    eps: f64,
}

fn same_point(cover: &AnalyticCover, a: &[f64], b: &[f64]) -> bool {
    let (a, b) = (cover.manifold.normalize(a), cover.manifold.normalize(b));
    a.iter()
        .zip(&b)
        .all(|(x, y)| crate::phase::circular_distance(*x, *y) < 1e-9)
}

impl SmoothPath {
    /// Pieces given as `(curve, chart)` in order, spread evenly over
    /// `[0, 1]` and then made to sit at both ends.
    pub fn new(cover: &AnalyticCover, segments: Vec<(Curve, ChartId)>) -> Result<Self> {
        Self::with_eps(cover, segments, SITTING_EPS)
    }

    pub fn with_eps(cover: &AnalyticCover, segments: Vec<(Curve, ChartId)>, eps: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Invalid("a smooth path needs at least one piece".into()));
        }
        if !(0.0..0.5).contains(&eps) {
            return Err(Error::Invalid(format!("sitting length {eps} is not in [0, 1/2)")));
        }
        let n = segments.len() as f64;
        let pieces: Vec<SmoothPiece> = segments
            .into_iter()
            .enumerate()
            .map(|(k, (curve, chart))| SmoothPiece {
                curve,
                map: Reparam::Identity,
                t0: k as f64 / n,
                t1: (k + 1) as f64 / n,
                chart,
            })
            .collect();
        let raw = SmoothPath { pieces, eps };
        raw.check_junctions(cover)?;
        Ok(raw.globally_reparametrized(&Reparam::Sitting(eps)))
    }

    /// A single curve split at the given curve parameters, switching to
    /// the listed chart at each split.
    pub fn with_switches(cover: &AnalyticCover, curve: Curve, first_chart: ChartId, switches: &[(f64, ChartId)]) -> Result<Self> {
        let mut cuts = vec![(0.0, first_chart)];
        cuts.extend_from_slice(switches);
        let mut segments = Vec::new();
        for (k, &(u0, chart)) in cuts.iter().enumerate() {
            let u1 = cuts.get(k + 1).map_or(1.0, |c| c.0);
            if u1 <= u0 {
                return Err(Error::Invalid("chart switch times must increase".into()));
            }
            segments.push((
                Curve::sub(&curve, u0, u1),
                chart,
            ));
        }
        Self::new(cover, segments)
    }

    fn check_junctions(&self, cover: &AnalyticCover) -> Result<()> {
        for w in self.pieces.windows(2) {
            let (p, q) = (w[0].end_point(), w[1].start_point());
            if !same_point(cover, &p, &q) {
                return Err(Error::EndpointMismatch(format!("pieces meet at {p:?} and {q:?}")));
            }
            if !cover.contains(w[0].chart, &p) || !cover.contains(w[1].chart, &p) {
                return Err(Error::ChartMismatch(format!(
                    "junction {p:?} is not in the overlap of {} and {}",
                    cover.charts[w[0].chart].name, cover.charts[w[1].chart].name
                )));
            }
        }
        Ok(())
    }

    pub fn pieces(&self) -> &[SmoothPiece] {
        &self.pieces
    }

    pub fn sitting_eps(&self) -> f64 {
        self.eps
    }

    pub fn start_point(&self) -> Vec<f64> {
        self.pieces[0].start_point()
    }

    pub fn end_point(&self) -> Vec<f64> {
        self.pieces[self.pieces.len() - 1].end_point()
    }

    pub fn point_at(&self, t: f64) -> Vec<f64> {
        let p = self
            .pieces
            .iter()
            .find(|p| t <= p.t1)
            .unwrap_or_else(|| self.pieces.last().expect("nonempty"));
        p.point_at(t)
    }

    pub fn is_closed(&self, cover: &AnalyticCover) -> bool {
        same_point(cover, &self.start_point(), &self.end_point())
    }

    /// `t ↦ λ(ψ(t))` for a monotone surjection `ψ`.
    fn globally_reparametrized(&self, psi: &Reparam) -> SmoothPath {
        let n = self.pieces.len();
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let a = if k == 0 { 0.0 } else { psi.inverse(p.t0) };
                let b = if k + 1 == n { 1.0 } else { psi.inverse(p.t1) };
                let window = Reparam::Window {
                    inner: Box::new(psi.clone()),
                    a,
                    b,
                    c: p.t0,
                    d: p.t1,
                };
                SmoothPiece {
                    curve: p.curve.clone(),
                    map: Reparam::Compose(vec![window, p.map.clone()]),
                    t0: a,
                    t1: b,
                    chart: p.chart,
                }
            })
            .filter(|p| p.t1 > p.t0 || n == 1)
            .collect();
        SmoothPath { pieces, eps: self.eps }
    }

    /// `λ ⋆ λ̄` through `ψ₁(t) = t/2` and `ψ₂(t) = t/2 + 1/2`.
    pub fn concat(&self, other: &SmoothPath, cover: &AnalyticCover) -> Result<SmoothPath> {
        let (p, q) = (self.end_point(), other.start_point());
        if !same_point(cover, &p, &q) {
            return Err(Error::EndpointMismatch(format!("first path ends at {p:?}, second starts at {q:?}")));
        }
        let last = self.pieces.last().expect("nonempty").chart;
        let first = other.pieces[0].chart;
        if !cover.contains(last, &p) || !cover.contains(first, &p) {
            return Err(Error::ChartMismatch(format!(
                "junction {p:?} is not in the overlap of {} and {}",
                cover.charts[last].name, cover.charts[first].name
            )));
        }
        let mut pieces: Vec<SmoothPiece> = self
            .pieces
            .iter()
            .map(|s| SmoothPiece {
                t0: s.t0 / 2.0,
                t1: s.t1 / 2.0,
                ..s.clone()
            })
            .collect();
        pieces.extend(other.pieces.iter().map(|s| SmoothPiece {
            t0: s.t0 / 2.0 + 0.5,
            t1: s.t1 / 2.0 + 0.5,
            ..s.clone()
        }));
        Ok(SmoothPath {
            pieces,
            eps: self.eps.min(other.eps) / 2.0,
        })
    }

    pub fn reverse(&self) -> SmoothPath {
        let pieces = self
            .pieces
            .iter()
            .rev()
            .map(|p| SmoothPiece {
                curve: p.curve.clone(),
                map: Reparam::Compose(vec![Reparam::Reverse, p.map.clone()]),
                t0: 1.0 - p.t1,
                t1: 1.0 - p.t0,
                chart: p.chart,
            })
            .collect();
        SmoothPath { pieces, eps: self.eps }
    }

    /// `t ↦ λ(t₀ + t (t₁ − t₀))`, without sitting instants.
    pub fn restrict(&self, t0: f64, t1: f64) -> Result<SmoothPath> {
        if !(0.0 <= t0 && t0 < t1 && t1 <= 1.0) {
            return Err(Error::Invalid(format!("[{t0}, {t1}] is not a subinterval of [0, 1]")));
        }
        let w = t1 - t0;
        let pieces: Vec<SmoothPiece> = self
            .pieces
            .iter()
            .filter(|p| p.t1 > t0 && p.t0 < t1)
            .map(|p| {
                let (a, b) = (p.t0.max(t0), p.t1.min(t1));
                let window = Reparam::Window {
                    inner: Box::new(Reparam::Identity),
                    a,
                    b,
                    c: p.t0,
                    d: p.t1,
                };
                SmoothPiece {
                    curve: p.curve.clone(),
                    map: Reparam::Compose(vec![window, p.map.clone()]),
                    t0: (a - t0) / w,
                    t1: (b - t0) / w,
                    chart: p.chart,
                }
            })
            .collect();
        Ok(SmoothPath { pieces, eps: 0.0 })
    }

    /// `t ↦ λ(ψ(σ(t)))`, with `σ` the sitting map, so the result still
    /// sits at both ends.
    pub fn reparametrize(&self, psi: &Reparam) -> Result<SmoothPath> {
        psi.check_monotone()?;
        let full = Reparam::Compose(vec![Reparam::Sitting(self.eps), psi.clone()]);
        Ok(self.globally_reparametrized(&full))
    }
}

impl Curve {
    /// The restriction of a curve to `[u0, u1]`, reparametrized over
    /// `[0, 1]`.
    pub fn sub(curve: &Curve, u0: f64, u1: f64) -> Curve {
        match curve {
            Curve::CircleArc { from, to } => Curve::CircleArc {
                from: from + u0 * (to - from),
                to: from + u1 * (to - from),
            },
            Curve::Latitude { theta, phi_from, phi_to } => Curve::Latitude {
                theta: *theta,
                phi_from: phi_from + u0 * (phi_to - phi_from),
                phi_to: phi_from + u1 * (phi_to - phi_from),
            },
            Curve::Meridian { phi, theta_from, theta_to } => Curve::Meridian {
                phi: *phi,
                theta_from: theta_from + u0 * (theta_to - theta_from),
                theta_to: theta_from + u1 * (theta_to - theta_from),
            },
            Curve::GreatArc { .. } => {
                let p = curve.eval(u0);
                let q = curve.eval(u1);
                Curve::GreatArc {
                    p: [p[0], p[1]],
                    q: [q[0], q[1]],
                }
            }
            Curve::Line { from, to } => Curve::Line {
                from: from.iter().zip(to).map(|(a, b)| a + u0 * (b - a)).collect(),
                to: from.iter().zip(to).map(|(a, b)| a + u1 * (b - a)).collect(),
            },
        }
    }
}

/// A path of either kind.
#[derive(Clone, Debug, PartialEq)]
pub enum ThinPath {
    Combinatorial(EdgePath),
    Smooth(SmoothPath),
}

/// The ambient data a path operation may need.
#[derive(Clone, Copy, Debug)]
pub enum Ambient<'a> {
    Complex(&'a CellComplex),
    Analytic(&'a AnalyticCover),
}

impl ThinPath {
    pub fn kind(&self) -> &'static str {
        match self {
            ThinPath::Combinatorial(_) => "combinatorial",
            ThinPath::Smooth(_) => "smooth",
        }
    }

    pub fn concat(&self, other: &ThinPath, ambient: Ambient<'_>) -> Result<ThinPath> {
        match (self, other, ambient) {
            (ThinPath::Combinatorial(a), ThinPath::Combinatorial(b), _) => Ok(ThinPath::Combinatorial(a.concat(b)?)),
            (ThinPath::Smooth(a), ThinPath::Smooth(b), Ambient::Analytic(cover)) => {
                Ok(ThinPath::Smooth(a.concat(b, cover)?))
            }
            (ThinPath::Smooth(_), ThinPath::Smooth(_), Ambient::Complex(_)) => {
                Err(Error::KindMismatch("smooth paths need an analytic cover".into()))
            }
            _ => Err(Error::KindMismatch(format!(
                "cannot concatenate a {} path with a {} path",
                self.kind(),
                other.kind()
            ))),
        }
    }

    pub fn reverse(&self) -> ThinPath {
        match self {
            ThinPath::Combinatorial(p) => ThinPath::Combinatorial(p.reverse()),
            ThinPath::Smooth(p) => ThinPath::Smooth(p.reverse()),
        }
    }

    /// Combinatorial paths carry no parametrization, so only the
    /// monotonicity of `ψ` is checked for them.
    pub fn reparametrize(&self, psi: &Reparam) -> Result<ThinPath> {
        match self {
            ThinPath::Combinatorial(p) => {
                psi.check_monotone()?;
                Ok(ThinPath::Combinatorial(p.clone()))
            }
            ThinPath::Smooth(p) => Ok(ThinPath::Smooth(p.reparametrize(psi)?)),
        }
    }

    /// Decided for combinatorial paths by comparing normal forms.
    pub fn thin_equal(&self, other: &ThinPath) -> Result<bool> {
        match (self, other) {
            (ThinPath::Combinatorial(a), ThinPath::Combinatorial(b)) => Ok(a.thin_equal(b)),
            _ => Err(Error::KindMismatch(
                "thin equivalence of smooth paths is only tested behaviourally".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn backtracks_cancel() {
        let c = CellComplex::path(4);
        let p = EdgePath::new(&c, 0, vec![EdgeStep::new(0, 1), EdgeStep::new(1, 1)]).unwrap();
        let q = EdgePath::new(&c, 2, vec![EdgeStep::new(1, -1), EdgeStep::new(1, 1), EdgeStep::new(2, 1)]).unwrap();
        assert_eq!(q.len(), 1);
        let pq = p.concat(&q).unwrap();
        assert_eq!(pq.thin_class().2, vec![(0, 1), (1, 1), (2, 1)]);
        assert!(p.concat(&p.reverse()).unwrap().is_empty());
        assert!(matches!(p.concat(&p), Err(Error::EndpointMismatch(_))));
    }

    #[test]
    fn sitting_map_is_monotone_and_sits() {
        let s = Reparam::Sitting(SITTING_EPS);
        assert!(s.check_monotone().is_ok());
        assert_eq!(s.eval(0.03), 0.0);
        assert_eq!(s.eval(0.97), 1.0);
        assert!((s.eval(0.5) - 0.5).abs() < 1e-12);
        let h = 1e-6;
        for t in [0.1, 0.3, 0.6, 0.9] {
            let fd = (s.eval(t + h) - s.eval(t - h)) / (2.0 * h);
            assert!((fd - s.deriv(t)).abs() < 1e-5, "t = {t}");
        }
        assert!(matches!(
            Reparam::Polynomial(vec![0.0, 3.0, -2.0]).check_monotone(),
            Err(Error::NonMonotone(_))
        ));
    }

    #[test]
    fn great_arc_derivative_matches_difference() {
        let c = Curve::GreatArc {
            p: [0.4, 0.2],
            q: [1.9, 2.5],
        };
        let h = 1e-6;
        for u in [0.1, 0.5, 0.8] {
            let (a, b) = (c.eval(u + h), c.eval(u - h));
            let d = c.deriv(u);
            assert!(((a[0] - b[0]) / (2.0 * h) - d[0]).abs() < 1e-6);
            assert!(((a[1] - b[1]) / (2.0 * h) - d[1]).abs() < 1e-6);
        }
    }

    #[test]
    fn smooth_concat_and_reverse() {
        let cover = AnalyticCover::builtin("circle-2-charts").unwrap();
        let a = SmoothPath::new(&cover, vec![(Curve::CircleArc { from: 0.0, to: 0.5 * PI }, 0)]).unwrap();
        let b = SmoothPath::new(&cover, vec![(Curve::CircleArc { from: 0.5 * PI, to: PI }, 0)]).unwrap();
        let ab = a.concat(&b, &cover).unwrap();
        assert!((ab.point_at(0.5)[0] - 0.5 * PI).abs() < 1e-12);
        assert!((ab.end_point()[0] - PI).abs() < 1e-12);
        let r = ab.reverse();
        assert!((r.start_point()[0] - PI).abs() < 1e-12);
        assert!((r.point_at(0.25)[0] - ab.point_at(0.75)[0]).abs() < 1e-12);
        assert!(matches!(b.concat(&b, &cover), Err(Error::EndpointMismatch(_))));
    }
}
