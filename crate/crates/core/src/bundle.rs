//! U(1) line-bundle data on a covered space: transition phases and local
//! connection forms, with validation, gauge moves and built-in examples.
//!
//! Conventions: transitions satisfy `A_i − A_j = d g_ij` on `U_ij`, and a
//! chart switch `i → j` at `x` contributes `g_ij(x)` to a transport.
//! Combinatorial data is in exact turns; analytic data in radians.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_rational::Rational64;
use num_traits::Zero;

use crate::cover::{build_cover, CellComplex, ChartId, CombinatorialCover, CoverSpec, CoveredSpace, Manifold};
use crate::error::{Error, Result};
use crate::forms::{DiscreteForm, OneForm, ScalarFn, TwoForm};
use crate::phase::{circular_distance, Phase, DEFAULT_TOLERANCE};
use crate::quadrature::Quadrature;

/// Transition phases and connection forms for one backend.
#[derive(Clone, Debug, PartialEq)]
pub enum BundleData {
    Combinatorial {
        /// `g_ij` per vertex, in turns, for every ordered pair of
        /// overlapping charts. Only vertices of `U_ij` are read.
        transitions: BTreeMap<(ChartId, ChartId), Vec<Rational64>>,
        /// `A_i` per chart, in turns. Only edges of `U_i` are read.
        connections: Vec<DiscreteForm>,
    },
    Analytic {
        /// `g_ij` in radians for every ordered pair of overlapping charts.
        transitions: BTreeMap<(ChartId, ChartId), ScalarFn>,
        connections: Vec<OneForm>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineBundleData {
    pub space: CoveredSpace,
    pub data: BundleData,
    pub tolerance: f64,
}

/// One failed identity, with where it failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub identity: String,
    pub location: String,
    /// Size of the defect: turns on the combinatorial backend, radians on
    /// the analytic one.
    pub defect: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, identity: &str, location: impl FnOnce() -> String, defect: f64) {
        self.checked += 1;
        if !ok {
            self.violations.push(Violation {
                identity: identity.to_string(),
                location: location(),
                defect,
            });
        }
    }
}

/// Gauge functions `χ_i`, one per chart.
#[derive(Clone, Debug, PartialEq)]
pub enum GaugeFunctions {
    /// Turns per vertex.
    Combinatorial(Vec<Vec<Rational64>>),
    /// Radians; should be single valued on each chart.
    Analytic(Vec<ScalarFn>),
}

fn frac_part(x: Rational64) -> Rational64 {
    x - x.floor()
}

fn is_integer(x: Rational64) -> bool {
    x.is_integer()
}

fn ratio_f64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn fmt_point(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| format!("{v:.6}")).collect();
    format!("({})", parts.join(", "))
}

impl LineBundleData {
    /// Combinatorial data; transitions given for one order of each pair
    /// get the other order filled in as the inverse.
    pub fn combinatorial(
        space: CoveredSpace,
        connections: Vec<DiscreteForm>,
        transitions: Vec<((ChartId, ChartId), Vec<Rational64>)>,
    ) -> Result<Self> {
        let cover = space
            .combinatorial()
            .ok_or_else(|| Error::InvalidBundle("combinatorial data on an analytic space".into()))?;
        let n = space.chart_count();
        let nv = cover.complex.vertex_count();
        let ne = cover.complex.edge_count();
        if connections.len() != n {
            return Err(Error::InvalidBundle(format!("{} connection forms for {n} charts", connections.len())));
        }
        for (i, a) in connections.iter().enumerate() {
            if a.degree != 1 || a.values.len() != ne {
                return Err(Error::InvalidBundle(format!("connection of chart {i} is not a 1-form on {ne} edges")));
            }
        }
        let mut map = BTreeMap::new();
        for ((i, j), g) in transitions {
            if i >= n || j >= n || i == j || g.len() != nv {
                return Err(Error::InvalidBundle(format!("transition ({i}, {j}) is malformed")));
            }
            map.entry((j, i)).or_insert_with(|| g.iter().map(|v| -v).collect());
            map.insert((i, j), g);
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && !cover.intersection(&[i, j]).vertices.is_empty() {
                    map.entry((i, j)).or_insert_with(|| vec![Rational64::zero(); nv]);
                }
            }
        }
        Ok(LineBundleData {
            space,
            data: BundleData::Combinatorial {
                transitions: map,
                connections,
            },
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    pub fn analytic(
        space: CoveredSpace,
        connections: Vec<OneForm>,
        transitions: Vec<((ChartId, ChartId), ScalarFn)>,
    ) -> Result<Self> {
        if space.analytic().is_none() {
            return Err(Error::InvalidBundle("analytic data on a combinatorial space".into()));
        }
        let n = space.chart_count();
        if connections.len() != n {
            return Err(Error::InvalidBundle(format!("{} connection forms for {n} charts", connections.len())));
        }
        let mut map = BTreeMap::new();
        for ((i, j), g) in transitions {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidBundle(format!("transition ({i}, {j}) is malformed")));
            }
            map.entry((j, i)).or_insert_with(|| g.scaled(-1.0));
            map.insert((i, j), g);
        }
        for s in space.nerve().of_order(2) {
            let (i, j) = (s.charts[0], s.charts[1]);
            map.entry((i, j)).or_insert(ScalarFn::Zero);
            map.entry((j, i)).or_insert(ScalarFn::Zero);
        }
        Ok(LineBundleData {
            space,
            data: BundleData::Analytic {
                transitions: map,
                connections,
            },
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    /// `g ≡ 1`, `A ≡ 0` on any space.
    pub fn trivial(space: CoveredSpace) -> Result<Self> {
        let n = space.chart_count();
        match space.combinatorial() {
            Some(c) => {
                let zero = DiscreteForm::zero(&c.complex, 1);
                Self::combinatorial(space.clone(), vec![zero; n], Vec::new())
            }
            None => Self::analytic(space, vec![OneForm::zero(); n], Vec::new()),
        }
    }

    /// Charge-`n` monopole on `sphere-2-charts`: `A_± = (n/2)(±1 − cos θ) dφ`
    /// with `g_{north,south} = n φ`.
    pub fn monopole(n: i64) -> Result<Self> {
        let space = build_cover(CoverSpec::Builtin("sphere-2-charts".into()))?;
        Self::analytic(
            space,
            vec![OneForm::monopole(n, true), OneForm::monopole(n, false)],
            vec![((0, 1), ScalarFn::Linear(vec![0.0, n as f64]))],
        )
    }

    /// Flat bundle on an `m × n` torus grid with holonomy `hol[0]` around
    /// each row loop and `hol[1]` around each column loop (turns).
    ///
    /// Chart 0 holds face columns `0..n/2`, chart 1 the rest. The row
    /// holonomy sits in the transition on vertex column 0; the column
    /// holonomy is spread over vertical edges.
    pub fn flat_torus(m: usize, n: usize, hol: [Rational64; 2]) -> Result<Self> {
        if m < 2 || n < 4 {
            return Err(Error::InvalidBundle("flat torus needs at least a 2 × 4 grid".into()));
        }
        let space = torus_two_band_space(m, n)?;
        let complex = &space.combinatorial().expect("combinatorial").complex;
        let mut a = DiscreteForm::zero(complex, 1);
        for i in 0..m {
            for j in 0..n {
                a.values[2 * (i * n + j) + 1] = -hol[1] / Rational64::from_integer(m as i64);
            }
        }
        let mut g01 = vec![Rational64::zero(); m * n];
        for i in 0..m {
            g01[i * n] = -hol[0];
        }
        let conns = vec![a.clone().in_chart(0), a.in_chart(1)];
        Self::combinatorial(space.clone(), conns, vec![((0, 1), g01)])
    }

    pub fn chart_count(&self) -> usize {
        self.space.chart_count()
    }

    pub fn is_combinatorial(&self) -> bool {
        matches!(self.data, BundleData::Combinatorial { .. })
    }

    /// `g_ij(v)` in turns; zero when `i == j`.
    pub fn transition_turns(&self, i: ChartId, j: ChartId, v: usize) -> Result<Rational64> {
        if i == j {
            return Ok(Rational64::zero());
        }
        match &self.data {
            BundleData::Combinatorial { transitions, .. } => transitions
                .get(&(i, j))
                .map(|g| g[v])
                .ok_or_else(|| Error::ChartMismatch(format!("charts {i} and {j} do not overlap"))),
            BundleData::Analytic { .. } => Err(Error::KindMismatch("analytic transitions are not exact".into())),
        }
    }

    /// `g_ij(x)` in radians; zero when `i == j`.
    pub fn transition_radians(&self, i: ChartId, j: ChartId, x: &[f64]) -> Result<f64> {
        if i == j {
            return Ok(0.0);
        }
        match &self.data {
            BundleData::Analytic { transitions, .. } => {
                let cover = self.space.analytic().expect("analytic");
                transitions
                    .get(&(i, j))
                    .map(|g| g.eval(&cover.manifold.normalize(x)))
                    .ok_or_else(|| Error::ChartMismatch(format!("charts {i} and {j} do not overlap")))
            }
            BundleData::Combinatorial { .. } => Err(Error::KindMismatch("combinatorial transitions live on vertices".into())),
        }
    }

    /// Every cocycle and compatibility identity, with locations.
    pub fn validate(&self) -> ValidationReport {
        match &self.data {
            BundleData::Combinatorial { transitions, connections } => {
                self.validate_combinatorial(transitions, connections)
            }
            BundleData::Analytic { transitions, connections } => self.validate_analytic(transitions, connections),
        }
    }

    fn validate_combinatorial(
        &self,
        transitions: &BTreeMap<(ChartId, ChartId), Vec<Rational64>>,
        connections: &[DiscreteForm],
    ) -> ValidationReport {
        let cover = self.space.combinatorial().expect("combinatorial");
        let complex = &cover.complex;
        let n = self.chart_count();
        let mut report = ValidationReport::default();
        let names = |i: ChartId| self.space.chart_name(i).to_string();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let overlap = cover.intersection(&[i, j]);
                if overlap.vertices.is_empty() {
                    continue;
                }
                let Some(g) = transitions.get(&(i, j)) else {
                    report.check(false, "transition defined", || format!("U_{}{}", names(i), names(j)), 1.0);
                    continue;
                };
                if i < j {
                    let back = &transitions[&(j, i)];
                    for &v in &overlap.vertices {
                        let s = g[v] + back[v];
                        report.check(
                            is_integer(s),
                            "g_ji = g_ij⁻¹",
                            || format!("vertex {v} of U_{}∩U_{}", names(i), names(j)),
                            ratio_f64(frac_part(s)),
                        );
                    }
                }
                for &e in &overlap.edges {
                    let (s, t) = complex.edge(e);
                    let defect = connections[i].value(e) - connections[j].value(e) - (g[t] - g[s]);
                    report.check(
                        is_integer(defect),
                        "A_i − A_j = d g_ij",
                        || format!("edge {e} ({s}→{t}) of U_{}∩U_{}", names(i), names(j)),
                        ratio_f64(frac_part(defect)),
                    );
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let triple = cover.intersection(&[i, j, k]);
                    for &v in &triple.vertices {
                        let s = transitions[&(i, j)][v] + transitions[&(j, k)][v] + transitions[&(k, i)][v];
                        report.check(
                            is_integer(s),
                            "g_ij g_jk g_ki = 1",
                            || format!("vertex {v} of U_{}∩U_{}∩U_{}", names(i), names(j), names(k)),
                            ratio_f64(frac_part(s)),
                        );
                    }
                }
            }
        }
        report
    }

    fn validate_analytic(
        &self,
        transitions: &BTreeMap<(ChartId, ChartId), ScalarFn>,
        connections: &[OneForm],
    ) -> ValidationReport {
        let cover = self.space.analytic().expect("analytic");
        let tol = self.tolerance;
        let n = self.chart_count();
        let (samples, steps) = sample_grid(cover.manifold);
        let (nodes, weights) = crate::quadrature::gauss_legendre(8);
        let mut report = ValidationReport::default();
        let names = |i: ChartId| self.space.chart_name(i).to_string();
        for i in 0..n {
            for j in i + 1..n {
                let Some(g) = transitions.get(&(i, j)) else {
                    continue;
                };
                let back = &transitions[&(j, i)];
                let both = |x: &[f64]| cover.contains(i, x) && cover.contains(j, x);
                for x in samples.iter().filter(|x| both(x)) {
                    let s = g.eval(x) + back.eval(x);
                    let d = circular_distance(s, 0.0);
                    report.check(
                        d <= tol,
                        "g_ji = g_ij⁻¹",
                        || format!("sample {} of U_{}∩U_{}", fmt_point(x), names(i), names(j)),
                        d,
                    );
                    for (k, h) in steps.iter().enumerate() {
                        let mut y = x.clone();
                        y[k] += h;
                        if !cover.manifold.sample_in_range(&y) {
                            continue;
                        }
                        let mut mid = x.clone();
                        mid[k] += h / 2.0;
                        if !both(&y) || !both(&mid) {
                            continue;
                        }
                        // ∫ (A_i − A_j) along the segment x → y.
                        let mut integral = 0.0;
                        for (t, w) in nodes.iter().zip(&weights) {
                            let mut p = x.clone();
                            p[k] += h * (t + 1.0) / 2.0;
                            let ai = connections[i].components(&p)[k];
                            let aj = connections[j].components(&p)[k];
                            integral += w * (ai - aj) * h / 2.0;
                        }
                        let dg = g.eval(&cover.manifold.normalize(&y)) - g.eval(x);
                        let d = circular_distance(integral, dg);
                        report.check(
                            d <= tol,
                            "A_i − A_j = d g_ij",
                            || {
                                format!(
                                    "segment {} → {} of U_{}∩U_{}",
                                    fmt_point(x),
                                    fmt_point(&y),
                                    names(i),
                                    names(j)
                                )
                            },
                            d,
                        );
                    }
                }
                for k in j + 1..n {
                    let (Some(gjk), Some(gki)) = (transitions.get(&(j, k)), transitions.get(&(k, i))) else {
                        continue;
                    };
                    for x in samples
                        .iter()
                        .filter(|x| both(x) && cover.contains(k, x))
                    {
                        let d = circular_distance(g.eval(x) + gjk.eval(x) + gki.eval(x), 0.0);
                        report.check(
                            d <= tol,
                            "g_ij g_jk g_ki = 1",
                            || format!("sample {} of U_{}∩U_{}∩U_{}", fmt_point(x), names(i), names(j), names(k)),
                            d,
                        );
                    }
                }
            }
        }
        report
    }

    /// `A_i ← A_i + dχ_i`, `g_ij ← g_ij + χ_i − χ_j`.
    pub fn gauge_transform(&self, chi: &GaugeFunctions) -> Result<LineBundleData> {
        let data = match (&self.data, chi) {
            (BundleData::Combinatorial { transitions, connections }, GaugeFunctions::Combinatorial(chi)) => {
                let complex = &self.space.combinatorial().expect("combinatorial").complex;
                if chi.len() != connections.len() || chi.iter().any(|c| c.len() != complex.vertex_count()) {
                    return Err(Error::InvalidBundle("gauge functions do not match the charts".into()));
                }
                let connections = connections
                    .iter()
                    .zip(chi)
                    .map(|(a, c)| Ok(a.add(&DiscreteForm::new(0, c.clone()).d(complex)?)))
                    .collect::<Result<Vec<_>>>()?;
                let transitions = transitions
                    .iter()
                    .map(|(&(i, j), g)| {
                        let moved = g.iter().enumerate().map(|(v, x)| x + chi[i][v] - chi[j][v]).collect();
                        ((i, j), moved)
                    })
                    .collect();
                BundleData::Combinatorial { transitions, connections }
            }
            (BundleData::Analytic { transitions, connections }, GaugeFunctions::Analytic(chi)) => {
                if chi.len() != connections.len() {
                    return Err(Error::InvalidBundle("gauge functions do not match the charts".into()));
                }
                let connections = connections
                    .iter()
                    .zip(chi)
                    .map(|(a, c)| a.clone().plus(crate::forms::OneFormTerm::Gradient(c.clone())))
                    .collect();
                let transitions = transitions
                    .iter()
                    .map(|(&(i, j), g)| {
                        let moved = ScalarFn::Sum(vec![g.clone(), chi[i].clone(), chi[j].scaled(-1.0)]);
                        ((i, j), moved)
                    })
                    .collect();
                BundleData::Analytic { transitions, connections }
            }
            _ => return Err(Error::KindMismatch("gauge functions of the wrong backend".into())),
        };
        Ok(LineBundleData {
            space: self.space.clone(),
            data,
            tolerance: self.tolerance,
        })
    }

    /// Adds `amount` to `g_ij` only (not `g_ji`) at one vertex.
    pub fn corrupt_vertex(&self, i: ChartId, j: ChartId, vertex: usize, amount: Rational64) -> Result<LineBundleData> {
        let mut out = self.clone();
        match &mut out.data {
            BundleData::Combinatorial { transitions, .. } => {
                let g = transitions
                    .get_mut(&(i, j))
                    .ok_or_else(|| Error::ChartMismatch(format!("charts {i} and {j} do not overlap")))?;
                g[vertex] += amount;
                Ok(out)
            }
            BundleData::Analytic { .. } => Err(Error::KindMismatch("use corrupt_sample on analytic data".into())),
        }
    }

    /// Multiplies `g_ij` by `exp(i·amount)` at one sample point only.
    pub fn corrupt_sample(&self, i: ChartId, j: ChartId, point: &[f64], amount: f64) -> Result<LineBundleData> {
        let mut out = self.clone();
        match &mut out.data {
            BundleData::Analytic { transitions, .. } => {
                let g = transitions
                    .get_mut(&(i, j))
                    .ok_or_else(|| Error::ChartMismatch(format!("charts {i} and {j} do not overlap")))?;
                *g = ScalarFn::Sum(vec![
                    g.clone(),
                    ScalarFn::Spike {
                        center: point.to_vec(),
                        radius: 1e-6,
                        amount,
                    },
                ]);
                Ok(out)
            }
            BundleData::Combinatorial { .. } => Err(Error::KindMismatch("use corrupt_vertex on combinatorial data".into())),
        }
    }

    /// `∫ F` over the whole space, each cell evaluated in the lowest chart
    /// containing it. Exact turns on the combinatorial backend; on the
    /// analytic backend only the sphere is supported.
    pub fn total_curvature(&self, quad: &Quadrature) -> Result<Phase> {
        match &self.data {
            BundleData::Combinatorial { connections, .. } => {
                let cover = self.space.combinatorial().expect("combinatorial");
                let curvature = connections
                    .iter()
                    .map(|a| a.d(&cover.complex))
                    .collect::<Result<Vec<_>>>()?;
                let mut total = Rational64::zero();
                for f in 0..cover.complex.face_count() {
                    let i = *cover
                        .charts_containing_face(f)
                        .first()
                        .ok_or_else(|| Error::InvalidBundle(format!("face {f} is in no chart")))?;
                    total += curvature[i].value(f);
                }
                Ok(Phase::from_ratio(total))
            }
            BundleData::Analytic { connections, .. } => {
                let cover = self.space.analytic().expect("analytic");
                let f: Vec<TwoForm> = connections.iter().map(|a| a.d()).collect();
                if cover.manifold != Manifold::Sphere {
                    return Err(Error::Invalid("analytic total curvature is only implemented on the sphere".into()));
                }
                Ok(Phase::from_radians(crate::forms::sphere_total(&f[0], &f[1], cover, quad)?))
            }
        }
    }

    /// Raw `∫ F` over the sphere in radians, without reduction.
    pub fn sphere_flux(&self, quad: &Quadrature) -> Result<f64> {
        match &self.data {
            BundleData::Analytic { connections, .. } => {
                let cover = self.space.analytic().expect("analytic");
                crate::forms::sphere_total(&connections[0].d(), &connections[1].d(), cover, quad)
            }
            _ => Err(Error::KindMismatch("sphere flux needs analytic data".into())),
        }
    }
}

/// Torus grid with two charts made of face-column bands.
pub fn torus_two_band_space(m: usize, n: usize) -> Result<CoveredSpace> {
    let complex = CellComplex::torus(m, n);
    let band = |cols: std::ops::Range<usize>| -> Vec<usize> {
        (0..m).flat_map(|i| cols.clone().map(move |j| i * n + j)).collect()
    };
    let cover = CombinatorialCover::new(
        complex,
        vec![
            ("left".into(), band(0..n / 2), vec![], vec![]),
            ("right".into(), band(n / 2..n), vec![], vec![]),
        ],
    )?;
    build_cover(CoverSpec::Combinatorial {
        cover,
        declared_nerve: None,
        require_good: false,
    })
}

/// Sample grid and per-coordinate step sizes used by analytic validation.
pub fn sample_grid(manifold: Manifold) -> (Vec<Vec<f64>>, Vec<f64>) {
    match manifold {
        Manifold::Circle => {
            let n = 512;
            ((0..n).map(|k| vec![TAU * k as f64 / n as f64]).collect(), vec![TAU / n as f64])
        }
        Manifold::Sphere => {
            let (rows, cols) = (64, 64);
            let pts = (0..rows)
                .flat_map(|a| {
                    (0..cols).map(move |b| vec![PI * (a as f64 + 0.5) / rows as f64, TAU * b as f64 / cols as f64])
                })
                .collect();
            (pts, vec![PI / rows as f64, TAU / cols as f64])
        }
        Manifold::Torus => {
            let n = 48;
            let h = TAU / n as f64;
            let pts = (0..n)
                .flat_map(|a| (0..n).map(move |b| vec![h * a as f64, h * b as f64]))
                .collect();
            (pts, vec![h, h])
        }
        Manifold::ThreeTorus => {
            let n = 16;
            let h = TAU / n as f64;
            let pts = (0..n)
                .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| vec![h * a as f64, h * b as f64, h * c as f64])))
                .collect();
            (pts, vec![h, h, h])
        }
    }
}

impl Manifold {
    /// Whether a raw coordinate tuple is inside the coordinate domain
    /// (only the sphere's colatitude is bounded).
    pub fn sample_in_range(&self, x: &[f64]) -> bool {
        match self {
            Manifold::Sphere => x[0] > 0.0 && x[0] < PI,
            _ => true,
        }
    }
}
