//! Abelian gerbes with connective structure and curving on a cell
//! complex, as exact Deligne cochains in turns, and their surface
//! holonomy.
//!
//! Data: `θ_ijk` per vertex of `U_ijk` (totally antisymmetric), `A_ij`
//! per edge of `U_ij` (`A_ji = −A_ij`), and curvings `F_i` per face of
//! `U_i`. Relations, mod 1 where phases are involved:
//!
//! * `θ_jkl − θ_ikl + θ_ijl − θ_ijk = 0` on `U_ijkl`
//! * `A_ij + A_jk + A_ki = −dθ_ijk` on `U_ijk`
//! * `F_i − F_j = dA_ij` on `U_ij` (exactly)
//!
//! The holonomy of a 2-chain is the flag sum
//! `Σ_f m_f [F_{i_f}(f) + Σ_{e<f} ε A_{i_e i_f}(e) + Σ_{v<e<f} ε ε' θ_{i_v i_e i_f}(v)]`
//! with charts chosen per face, edge and vertex.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

use crate::cover::{build_cover, chart_subsets, CellComplex, ChartId, CombinatorialCover, CoverSpec, CoveredSpace};
use crate::double::LawReport;
use crate::error::{Error, Result};
use crate::forms::DiscreteForm;
use crate::phase::Phase;

type Triple = [ChartId; 3];

#[derive(Clone, Debug, PartialEq)]
pub struct GerbeData {
    pub space: CoveredSpace,
    theta: BTreeMap<Triple, Vec<Rational64>>,
    a: BTreeMap<(ChartId, ChartId), DiscreteForm>,
    f: Vec<DiscreteForm>,
}

/// One failed Deligne relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GerbeViolation {
    pub relation: String,
    pub location: String,
    pub defect: Rational64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GerbeReport {
    pub checked: usize,
    pub violations: Vec<GerbeViolation>,
}

impl GerbeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, defect: Rational64, mod_one: bool, relation: &str, location: impl FnOnce() -> String) {
        self.checked += 1;
        let bad = if mod_one { !defect.is_integer() } else { !defect.is_zero() };
        if bad {
            self.violations.push(GerbeViolation {
                relation: relation.into(),
                location: location(),
                defect: if mod_one { defect - defect.floor() } else { defect },
            });
        }
    }
}

/// A Deligne coboundary: functions `h_ij` (turns per vertex, `i < j`) and
/// 1-forms `χ_i`, acting by `θ += δh`, `A_ij += χ_i − χ_j − dh_ij`,
/// `F_i += dχ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeligneGauge {
    pub h: BTreeMap<(ChartId, ChartId), Vec<Rational64>>,
    pub chi: Vec<DiscreteForm>,
}

fn sort3(c: [ChartId; 3]) -> (Triple, i64) {
    let mut t = c;
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (t, sign)
}

fn cells_of(cover: &CombinatorialCover, charts: &[ChartId]) -> crate::cover::CellSet {
    cover.intersection(charts)
}

impl GerbeData {
    /// Builds gerbe data; entries may be given in any index order and are
    /// stored antisymmetrised. Missing entries are zero.
    pub fn new(
        space: CoveredSpace,
        theta: Vec<(Triple, Vec<Rational64>)>,
        a: Vec<((ChartId, ChartId), DiscreteForm)>,
        f: Vec<DiscreteForm>,
    ) -> Result<Self> {
        let cover = space
            .combinatorial()
            .ok_or_else(|| Error::InvalidGerbe("gerbe data needs a combinatorial cover".into()))?;
        let complex = &cover.complex;
        let n = space.chart_count();
        if f.len() != n || f.iter().any(|x| x.degree != 2 || x.values.len() != complex.face_count()) {
            return Err(Error::InvalidGerbe(format!("need {n} curvings, each a 2-form on every face")));
        }
        let mut theta_map = BTreeMap::new();
        for (idx, values) in theta {
            let (t, sign) = sort3(idx);
            if t[0] == t[1] || t[1] == t[2] || t[2] >= n || values.len() != complex.vertex_count() {
                return Err(Error::InvalidGerbe(format!("θ entry {idx:?} is malformed")));
            }
            let values = values.iter().map(|v| v * sign).collect();
            theta_map.insert(t, values);
        }
        let mut a_map = BTreeMap::new();
        for ((i, j), form) in a {
            if i == j || i >= n || j >= n || form.degree != 1 || form.values.len() != complex.edge_count() {
                return Err(Error::InvalidGerbe(format!("A entry ({i}, {j}) is malformed")));
            }
            let form = if i < j { form } else { form.scale(Rational64::from_integer(-1)) };
            a_map.insert((i.min(j), i.max(j)), form);
        }
        for s in chart_subsets(n, 3) {
            if s.len() == 2 && !cells_of(cover, &s).is_empty() {
                a_map
                    .entry((s[0], s[1]))
                    .or_insert_with(|| DiscreteForm::zero(complex, 1));
            }
            if s.len() == 3 && !cells_of(cover, &s).vertices.is_empty() {
                theta_map
                    .entry([s[0], s[1], s[2]])
                    .or_insert_with(|| vec![Rational64::zero(); complex.vertex_count()]);
            }
        }
        Ok(GerbeData {
            space,
            theta: theta_map,
            a: a_map,
            f,
        })
    }

    /// `θ ≡ 0`, `A ≡ 0`, `F ≡ 0`.
    pub fn trivial(space: CoveredSpace) -> Result<Self> {
        let complex = &space
            .combinatorial()
            .ok_or_else(|| Error::InvalidGerbe("gerbe data needs a combinatorial cover".into()))?
            .complex;
        let zero = DiscreteForm::zero(complex, 2);
        let n = space.chart_count();
        Self::new(space.clone(), Vec::new(), Vec::new(), vec![zero; n])
    }

    /// Flat B-field on an `m × n` torus grid: every chart carries the same
    /// curving, `φ/(mn)` on each face, with `θ ≡ 0` and `A ≡ 0`. Chart `k`
    /// is the closure of faces `k` and `k + 1` (mod `mn`).
    pub fn flat_torus(m: usize, n: usize, phi: Rational64) -> Result<Self> {
        let space = torus_window_space(m, n, 2)?;
        let complex = &space.combinatorial().expect("combinatorial").complex;
        let per_face = phi / Rational64::from_integer((m * n) as i64);
        let curving = DiscreteForm::new(2, vec![per_face; complex.face_count()]);
        let k = space.chart_count();
        Self::new(space.clone(), Vec::new(), Vec::new(), vec![curving; k])
    }

    pub fn complex(&self) -> &CellComplex {
        &self.cover().complex
    }

    pub fn cover(&self) -> &CombinatorialCover {
        self.space.combinatorial().expect("combinatorial")
    }

    pub fn chart_count(&self) -> usize {
        self.space.chart_count()
    }

    /// `θ_ijk(v)` with antisymmetry; zero when two indices agree.
    pub fn theta(&self, i: ChartId, j: ChartId, k: ChartId, v: usize) -> Rational64 {
        if i == j || j == k || i == k {
            return Rational64::zero();
        }
        let (t, sign) = sort3([i, j, k]);
        self.theta.get(&t).map_or(Rational64::zero(), |x| x[v] * sign)
    }

    /// `A_ij(e)` with `A_ji = −A_ij`; zero when `i == j`.
    pub fn a(&self, i: ChartId, j: ChartId, e: usize) -> Rational64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Rational64::zero(),
            std::cmp::Ordering::Less => self.a.get(&(i, j)).map_or(Rational64::zero(), |x| x.value(e)),
            std::cmp::Ordering::Greater => -self.a.get(&(j, i)).map_or(Rational64::zero(), |x| x.value(e)),
        }
    }

    pub fn curving(&self, i: ChartId, face: usize) -> Rational64 {
        self.f[i].value(face)
    }

    /// Sets one stored `θ` value (sorted indices), for fault injection.
    pub fn with_theta(&self, t: Triple, v: usize, value: Rational64) -> Result<Self> {
        let (key, sign) = sort3(t);
        let mut out = self.clone();
        let slot = out
            .theta
            .get_mut(&key)
            .ok_or_else(|| Error::InvalidGerbe(format!("no triple overlap {t:?}")))?;
        slot[v] = value * sign;
        Ok(out)
    }

    /// All three relation families, with locations.
    pub fn validate(&self) -> GerbeReport {
        let cover = self.cover();
        let complex = &cover.complex;
        let n = self.chart_count();
        let name = |c: &[ChartId]| -> String {
            let names: Vec<&str> = c.iter().map(|&i| self.space.chart_name(i)).collect();
            format!("U[{}]", names.join(","))
        };
        let mut report = GerbeReport::default();
        for s in chart_subsets(n, 4) {
            let cells = cells_of(cover, &s);
            match s.len() {
                2 => {
                    let (i, j) = (s[0], s[1]);
                    let Some(a) = self.a.get(&(i, j)) else { continue };
                    let da = a.d(complex).expect("1-form");
                    for &f in &cells.faces {
                        let defect = self.f[i].value(f) - self.f[j].value(f) - da.value(f);
                        report.check(defect, false, "F_i − F_j = dA_ij", || format!("face {f} of {}", name(&s)));
                    }
                }
                3 => {
                    let (i, j, k) = (s[0], s[1], s[2]);
                    for &e in &cells.edges {
                        let (a, b) = complex.edge(e);
                        let defect = self.a(i, j, e) + self.a(j, k, e) + self.a(k, i, e) + self.theta(i, j, k, b)
                            - self.theta(i, j, k, a);
                        report.check(defect, true, "A_ij + A_jk + A_ki = −dθ_ijk", || {
                            format!("edge {e} of {}", name(&s))
                        });
                    }
                }
                4 => {
                    let (i, j, k, l) = (s[0], s[1], s[2], s[3]);
                    for &v in &cells.vertices {
                        let defect = self.theta(j, k, l, v) - self.theta(i, k, l, v) + self.theta(i, j, l, v)
                            - self.theta(i, j, k, v);
                        report.check(defect, true, "δθ = 0", || format!("vertex {v} of {}", name(&s)));
                    }
                }
                _ => {}
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidGerbe(format!("{} fails at {}", v.relation, v.location))),
        }
    }

    pub fn gauge_transform(&self, g: &DeligneGauge) -> Result<GerbeData> {
        let complex = self.complex();
        let n = self.chart_count();
        if g.chi.len() != n || g.chi.iter().any(|c| c.degree != 1 || c.values.len() != complex.edge_count()) {
            return Err(Error::InvalidGerbe("gauge 1-forms do not match the charts".into()));
        }
        let h = |i: ChartId, j: ChartId, v: usize| -> Rational64 {
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => Rational64::zero(),
                std::cmp::Ordering::Less => g.h.get(&(i, j)).map_or(Rational64::zero(), |x| x[v]),
                std::cmp::Ordering::Greater => -g.h.get(&(j, i)).map_or(Rational64::zero(), |x| x[v]),
            }
        };
        let mut out = self.clone();
        for (t, values) in out.theta.iter_mut() {
            for (v, x) in values.iter_mut().enumerate() {
                *x += h(t[0], t[1], v) + h(t[1], t[2], v) + h(t[2], t[0], v);
            }
        }
        for (&(i, j), form) in out.a.iter_mut() {
            for (e, x) in form.values.iter_mut().enumerate() {
                let (s, t) = complex.edge(e);
                *x += g.chi[i].value(e) - g.chi[j].value(e) - (h(i, j, t) - h(i, j, s));
            }
        }
        for (i, form) in out.f.iter_mut().enumerate() {
            *form = form.add(&g.chi[i].d(complex)?);
        }
        Ok(out)
    }
}

impl DeligneGauge {
    pub fn zero(gerbe: &GerbeData) -> Self {
        let complex = gerbe.complex();
        DeligneGauge {
            h: gerbe
                .a
                .keys()
                .map(|&k| (k, vec![Rational64::zero(); complex.vertex_count()]))
                .collect(),
            chi: vec![DiscreteForm::zero(complex, 1); gerbe.chart_count()],
        }
    }

    /// Fills every slot from `next`, in a fixed order: all `h` values by
    /// pair then vertex, then all `χ` values by chart then edge.
    pub fn from_fn(gerbe: &GerbeData, mut next: impl FnMut() -> Rational64) -> Self {
        let mut g = Self::zero(gerbe);
        for values in g.h.values_mut() {
            values.iter_mut().for_each(|x| *x = next());
        }
        for form in &mut g.chi {
            form.values.iter_mut().for_each(|x| *x = next());
        }
        g
    }
}

/// Torus grid whose chart `k` is the closure of the `width` faces
/// `k, k+1, …` (mod `mn`, row-major).
pub fn torus_window_space(m: usize, n: usize, width: usize) -> Result<CoveredSpace> {
    let complex = CellComplex::torus(m, n);
    let faces = m * n;
    let charts = (0..faces)
        .map(|k| {
            let f: Vec<usize> = (0..width).map(|d| (k + d) % faces).collect();
            (format!("W{k}"), f, Vec::new(), Vec::new())
        })
        .collect();
    let cover = CombinatorialCover::new(complex, charts)?;
    build_cover(CoverSpec::Combinatorial {
        cover,
        declared_nerve: None,
        require_good: false,
    })
}

/// A closed 2-chain, kept as a list of signed face occurrences so that
/// thin padding `f f⁻¹` is visible to assignments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoLoop {
    faces: Vec<(usize, i8)>,
}

/// Boundary of a list of signed faces as an edge → coefficient map.
pub fn boundary(complex: &CellComplex, faces: &[(usize, i8)]) -> BTreeMap<usize, i64> {
    let mut out: BTreeMap<usize, i64> = BTreeMap::new();
    for &(f, m) in faces {
        for &(e, s) in complex.face(f) {
            *out.entry(e).or_default() += i64::from(m) * i64::from(s);
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

impl TwoLoop {
    pub fn new(complex: &CellComplex, faces: Vec<(usize, i8)>) -> Result<Self> {
        if let Some(&(f, m)) = faces.iter().find(|&&(f, m)| f >= complex.face_count() || (m != 1 && m != -1)) {
            return Err(Error::InvalidSurface(format!("({f}, {m}) is not a signed face")));
        }
        let b = boundary(complex, &faces);
        if let Some((e, c)) = b.iter().next() {
            return Err(Error::InvalidSurface(format!("not closed: edge {e} has boundary coefficient {c}")));
        }
        Ok(TwoLoop { faces })
    }

    /// Every face once, positively: the fundamental cycle of a closed
    /// oriented grid.
    pub fn fundamental(complex: &CellComplex) -> Result<Self> {
        Self::new(complex, (0..complex.face_count()).map(|f| (f, 1)).collect())
    }

    pub fn faces(&self) -> &[(usize, i8)] {
        &self.faces
    }

    pub fn concat(&self, other: &TwoLoop) -> TwoLoop {
        let mut faces = self.faces.clone();
        faces.extend_from_slice(&other.faces);
        TwoLoop { faces }
    }

    pub fn inverse(&self) -> TwoLoop {
        TwoLoop {
            faces: self.faces.iter().rev().map(|&(f, m)| (f, -m)).collect(),
        }
    }

    pub fn repeated(&self, k: usize) -> TwoLoop {
        TwoLoop {
            faces: self.faces.iter().copied().cycle().take(self.faces.len() * k).collect(),
        }
    }

    /// Inserts `f f⁻¹` at position `at`.
    pub fn padded(&self, at: usize, face: usize) -> TwoLoop {
        let mut faces = self.faces.clone();
        let at = at.min(faces.len());
        faces.insert(at, (face, -1));
        faces.insert(at, (face, 1));
        TwoLoop { faces }
    }

    /// Net multiplicity of each face.
    pub fn chain(&self) -> BTreeMap<usize, i64> {
        let mut out: BTreeMap<usize, i64> = BTreeMap::new();
        for &(f, m) in &self.faces {
            *out.entry(f).or_default() += i64::from(m);
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

/// Charts for every face occurrence, edge and vertex of a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceAssignment {
    pub faces: Vec<ChartId>,
    pub edges: BTreeMap<usize, ChartId>,
    pub vertices: BTreeMap<usize, ChartId>,
}

/// Edges and vertices met by a list of faces.
pub fn support(complex: &CellComplex, faces: &[(usize, i8)]) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut edges = BTreeSet::new();
    let mut vertices = BTreeSet::new();
    for &(f, _) in faces {
        for &(e, _) in complex.face(f) {
            edges.insert(e);
            let (s, t) = complex.edge(e);
            vertices.insert(s);
            vertices.insert(t);
        }
    }
    (edges, vertices)
}

impl SurfaceAssignment {
    /// Lowest-numbered chart for every cell.
    pub fn canonical(gerbe: &GerbeData, faces: &[(usize, i8)]) -> Result<Self> {
        let cover = gerbe.cover();
        let (edges, vertices) = support(&cover.complex, faces);
        let first = |v: Vec<ChartId>, what: String| v.first().copied().ok_or(Error::InvalidAssignment(what));
        Ok(SurfaceAssignment {
            faces: faces
                .iter()
                .map(|&(f, _)| first(cover.charts_containing_face(f), format!("face {f} is in no chart")))
                .collect::<Result<_>>()?,
            edges: edges
                .iter()
                .map(|&e| Ok((e, first(cover.charts_containing_edge(e), format!("edge {e} is in no chart"))?)))
                .collect::<Result<_>>()?,
            vertices: vertices
                .iter()
                .map(|&v| Ok((v, first(cover.charts_containing_vertex(v), format!("vertex {v} is in no chart"))?)))
                .collect::<Result<_>>()?,
        })
    }

    /// Face charts as given; each edge and vertex takes the chart of the
    /// first face occurrence containing it.
    pub fn from_faces(gerbe: &GerbeData, faces: &[(usize, i8)], face_charts: Vec<ChartId>) -> Result<Self> {
        if face_charts.len() != faces.len() {
            return Err(Error::InvalidAssignment("one chart per face occurrence is needed".into()));
        }
        let complex = gerbe.complex();
        let mut edges = BTreeMap::new();
        let mut vertices = BTreeMap::new();
        for (&(f, _), &c) in faces.iter().zip(&face_charts) {
            for &(e, _) in complex.face(f) {
                edges.entry(e).or_insert(c);
                let (s, t) = complex.edge(e);
                vertices.entry(s).or_insert(c);
                vertices.entry(t).or_insert(c);
            }
        }
        let asg = SurfaceAssignment {
            faces: face_charts,
            edges,
            vertices,
        };
        asg.check(gerbe, faces)?;
        Ok(asg)
    }

    /// The ordered chart pair `(i_e, i_f)` of every edge–face incidence.
    pub fn edge_pairs(&self, complex: &CellComplex, faces: &[(usize, i8)]) -> Vec<(usize, ChartId, ChartId)> {
        faces
            .iter()
            .zip(&self.faces)
            .flat_map(|(&(f, _), &cf)| complex.face(f).iter().map(move |&(e, _)| (e, cf)))
            .map(|(e, cf)| (e, self.edges[&e], cf))
            .collect()
    }

    /// Every assigned chart contains its cell.
    pub fn check(&self, gerbe: &GerbeData, faces: &[(usize, i8)]) -> Result<()> {
        let cover = gerbe.cover();
        if self.faces.len() != faces.len() {
            return Err(Error::InvalidAssignment("one chart per face occurrence is needed".into()));
        }
        for (k, (&(f, _), &c)) in faces.iter().zip(&self.faces).enumerate() {
            if c >= cover.charts.len() || !cover.charts[c].cells.faces.contains(&f) {
                return Err(Error::InvalidAssignment(format!("occurrence {k}: chart {c} does not contain face {f}")));
            }
        }
        let (edges, vertices) = support(&cover.complex, faces);
        for e in edges {
            match self.edges.get(&e) {
                Some(&c) if c < cover.charts.len() && cover.charts[c].cells.edges.contains(&e) => {}
                Some(&c) => return Err(Error::InvalidAssignment(format!("chart {c} does not contain edge {e}"))),
                None => return Err(Error::InvalidAssignment(format!("edge {e} has no chart"))),
            }
        }
        for v in vertices {
            match self.vertices.get(&v) {
                Some(&c) if c < cover.charts.len() && cover.charts[c].cells.vertices.contains(&v) => {}
                Some(&c) => return Err(Error::InvalidAssignment(format!("chart {c} does not contain vertex {v}"))),
                None => return Err(Error::InvalidAssignment(format!("vertex {v} has no chart"))),
            }
        }
        Ok(())
    }
}

/// The three parts of a flag sum, in turns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlagSum {
    pub faces: Rational64,
    pub edges: Rational64,
    pub vertices: Rational64,
}

impl FlagSum {
    pub fn total(&self) -> Rational64 {
        self.faces + self.edges + self.vertices
    }
}

/// The flag sum of a list of signed faces under an assignment, without
/// checking closure or the assignment.
pub fn flag_sum(gerbe: &GerbeData, faces: &[(usize, i8)], asg: &SurfaceAssignment) -> FlagSum {
    let complex = gerbe.complex();
    let mut out = FlagSum::default();
    for (&(f, m), &cf) in faces.iter().zip(&asg.faces) {
        let m = Rational64::from_integer(i64::from(m));
        out.faces += m * gerbe.curving(cf, f);
        for &(e, s) in complex.face(f) {
            let ce = asg.edges[&e];
            let me = m * Rational64::from_integer(i64::from(s));
            out.edges += me * gerbe.a(ce, cf, e);
            let (a, b) = complex.edge(e);
            out.vertices += me * (gerbe.theta(asg.vertices[&b], ce, cf, b) - gerbe.theta(asg.vertices[&a], ce, cf, a));
        }
    }
    out
}

/// Surface holonomy of a 2-loop: validates the gerbe and the assignment.
pub fn surface_holonomy(gerbe: &GerbeData, s: &TwoLoop, asg: &SurfaceAssignment) -> Result<Phase> {
    gerbe.ensure_valid()?;
    asg.check(gerbe, s.faces())?;
    Ok(Phase::from_ratio(flag_sum(gerbe, s.faces(), asg).total()))
}

/// Surface holonomy under the canonical assignment.
pub fn surface_holonomy_canonical(gerbe: &GerbeData, s: &TwoLoop) -> Result<Phase> {
    let asg = SurfaceAssignment::canonical(gerbe, s.faces())?;
    surface_holonomy(gerbe, s, &asg)
}

/// Outcome of evaluating every valid assignment of one surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentSweep {
    pub count: u64,
    /// Assignments whose value differs from the canonical one.
    pub mismatches: u64,
    pub value: Rational64,
}

/// Evaluates the flag sum under every valid assignment of charts to the
/// cells of `s`, in integer arithmetic over a common denominator.
pub fn sweep_assignments(gerbe: &GerbeData, s: &TwoLoop, limit: u64) -> Result<AssignmentSweep> {
    gerbe.ensure_valid()?;
    let cover = gerbe.cover();
    let complex = &cover.complex;
    let faces = s.faces();
    let (edge_set, vertex_set) = support(complex, faces);
    let edges: Vec<usize> = edge_set.into_iter().collect();
    let vertices: Vec<usize> = vertex_set.into_iter().collect();
    let face_opts: Vec<Vec<ChartId>> = faces.iter().map(|&(f, _)| cover.charts_containing_face(f)).collect();
    let edge_opts: Vec<Vec<ChartId>> = edges.iter().map(|&e| cover.charts_containing_edge(e)).collect();
    let vertex_opts: Vec<Vec<ChartId>> = vertices.iter().map(|&v| cover.charts_containing_vertex(v)).collect();
    let count = face_opts
        .iter()
        .chain(&edge_opts)
        .chain(&vertex_opts)
        .try_fold(1u64, |acc, o| acc.checked_mul(o.len() as u64))
        .filter(|&c| c <= limit)
        .ok_or_else(|| Error::BudgetExceeded(format!("more than {limit} assignments")))?;
    if count == 0 {
        return Err(Error::InvalidAssignment("some cell lies in no chart".into()));
    }
    let canonical = SurfaceAssignment::canonical(gerbe, faces)?;
    let value = flag_sum(gerbe, faces, &canonical).total();

    // Common denominator of every value the sweep can read.
    let n = gerbe.chart_count();
    let mut den: i64 = *value.denom();
    let mut note = |x: Rational64| den = den.lcm(x.denom());
    for &(f, _) in faces {
        (0..n).for_each(|i| note(gerbe.curving(i, f)));
    }
    for &e in &edges {
        (0..n).for_each(|i| (0..n).for_each(|j| note(gerbe.a(i, j, e))));
    }
    for &v in &vertices {
        for t in gerbe.theta.values() {
            note(t[v]);
        }
    }
    let int = |x: Rational64| -> i64 { (x * den).to_integer().rem_euclid(den) };
    let target = int(value);
    let e_index: BTreeMap<usize, usize> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let v_index: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    // Flags (occurrence, edge slot, vertex slot, coefficient).
    let mut flags = Vec::new();
    let mut edge_terms = Vec::new();
    for (p, &(f, m)) in faces.iter().enumerate() {
        for &(e, s) in complex.face(f) {
            let c = i64::from(m) * i64::from(s);
            edge_terms.push((p, e_index[&e], c));
            let (a, b) = complex.edge(e);
            flags.push((p, e_index[&e], v_index[&a], -c));
            flags.push((p, e_index[&e], v_index[&b], c));
        }
    }

    let mut mismatches = 0u64;
    let mut face_pick = vec![0usize; faces.len()];
    loop {
        let cf: Vec<ChartId> = face_pick.iter().zip(&face_opts).map(|(&k, o)| o[k]).collect();
        let face_part: i64 = faces
            .iter()
            .zip(&cf)
            .map(|(&(f, m), &c)| i64::from(m) * int(gerbe.curving(c, f)))
            .sum();
        let mut edge_pick = vec![0usize; edges.len()];
        loop {
            let ce: Vec<ChartId> = edge_pick.iter().zip(&edge_opts).map(|(&k, o)| o[k]).collect();
            let mut base = face_part;
            for &(p, ei, c) in &edge_terms {
                base += c * int(gerbe.a(ce[ei], cf[p], edges[ei]));
            }
            // Per-vertex tables: contribution of each chart choice.
            let tables: Vec<Vec<i64>> = vertex_opts
                .iter()
                .enumerate()
                .map(|(vi, opts)| {
                    opts.iter()
                        .map(|&cv| {
                            flags
                                .iter()
                                .filter(|fl| fl.2 == vi)
                                .map(|&(p, ei, _, c)| c * int(gerbe.theta(cv, ce[ei], cf[p], vertices[vi])))
                                .sum::<i64>()
                                .rem_euclid(den)
                        })
                        .collect()
                })
                .collect();
            let mut vertex_pick = vec![0usize; vertices.len()];
            loop {
                let total: i64 = base + vertex_pick.iter().enumerate().map(|(vi, &k)| tables[vi][k]).sum::<i64>();
                if total.rem_euclid(den) != target {
                    mismatches += 1;
                }
                if !advance(&mut vertex_pick, &vertex_opts) {
                    break;
                }
            }
            if !advance(&mut edge_pick, &edge_opts) {
                break;
            }
        }
        if !advance(&mut face_pick, &face_opts) {
            break;
        }
    }
    Ok(AssignmentSweep {
        count,
        mismatches,
        value,
    })
}

/// Odometer step over option lists; false after the last combination.
fn advance(pick: &mut [usize], opts: &[Vec<ChartId>]) -> bool {
    for (k, o) in pick.iter_mut().zip(opts) {
        *k += 1;
        if *k < o.len() {
            return true;
        }
        *k = 0;
    }
    false
}

/// Values of the 2-holonomy on a family of 2-loops, with the checks run
/// on it.
#[derive(Clone, Debug)]
pub struct TwoHolonomyTable {
    pub loops: Vec<TwoLoop>,
    pub values: Vec<Phase>,
    pub homomorphism: LawReport,
    pub inverses: LawReport,
    pub commutativity: LawReport,
    pub thin_invariance: LawReport,
}

impl TwoHolonomyTable {
    pub fn passed(&self) -> bool {
        self.homomorphism.passed()
            && self.inverses.passed()
            && self.commutativity.passed()
            && self.thin_invariance.passed()
    }
}

/// Generates all concatenations of at most `max_len` generators and their
/// inverses, then checks `Hol(s⋆t) = Hol(s) + Hol(t)`, `Hol(s⋆s⁻¹) = 0`,
/// `Hol(s⋆t) = Hol(t⋆s)` on every pair and invariance under padding each
/// loop with `f f⁻¹` in a different chart.
pub fn two_holonomy(gerbe: &GerbeData, generators: &[TwoLoop], max_len: usize, budget: usize) -> Result<TwoHolonomyTable> {
    gerbe.ensure_valid()?;
    let hol = |s: &TwoLoop| -> Result<Rational64> {
        let asg = SurfaceAssignment::canonical(gerbe, s.faces())?;
        Ok(flag_sum(gerbe, s.faces(), &asg).total())
    };
    let mut letters: Vec<TwoLoop> = generators.to_vec();
    letters.extend(generators.iter().map(|g| g.inverse()));
    let mut loops: Vec<TwoLoop> = Vec::new();
    let mut frontier = vec![TwoLoop { faces: Vec::new() }];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for l in &letters {
                let pl = p.concat(l);
                if !loops.contains(&pl) {
                    loops.push(pl.clone());
                    next.push(pl);
                    if loops.len() > budget {
                        return Err(Error::BudgetExceeded(format!("2-loop family exceeds {budget} members")));
                    }
                }
            }
        }
        frontier = next;
    }
    let values: Vec<Rational64> = loops.iter().map(&hol).collect::<Result<_>>()?;
    let eq = |a: Rational64, b: Rational64| (a - b).is_integer();
    let mut homomorphism = LawReport::new("Hol(s⋆t) = Hol(s) + Hol(t)");
    let mut commutativity = LawReport::new("Hol(s⋆t) = Hol(t⋆s)");
    let mut idx = 0;
    for (i, s) in loops.iter().enumerate() {
        for (j, t) in loops.iter().enumerate() {
            let st = hol(&s.concat(t))?;
            let ts = hol(&t.concat(s))?;
            homomorphism.record(idx, eq(st, values[i] + values[j]), || format!("s = #{i}, t = #{j}"));
            commutativity.record(idx, eq(st, ts), || format!("s = #{i}, t = #{j}"));
            idx += 1;
        }
    }
    let mut inverses = LawReport::new("Hol(s⋆s⁻¹) = 0");
    let mut thin_invariance = LawReport::new("padding by f f⁻¹ keeps Hol");
    let cover = gerbe.cover();
    for (i, s) in loops.iter().enumerate() {
        inverses.record(i, eq(hol(&s.concat(&s.inverse()))?, Rational64::zero()), || format!("s = #{i}"));
        let face = s.faces().first().map_or(0, |&(f, _)| f);
        let padded = s.padded(s.faces().len() / 2, face);
        let mut asg = SurfaceAssignment::canonical(gerbe, padded.faces())?;
        // The padding pair sits in the highest chart containing the face.
        let k = s.faces().len() / 2;
        let top = *cover.charts_containing_face(face).last().expect("covered");
        asg.faces[k] = top;
        asg.faces[k + 1] = top;
        let v = flag_sum(gerbe, padded.faces(), &asg).total();
        thin_invariance.record(i, eq(v, values[i]), || format!("s = #{i}"));
    }
    Ok(TwoHolonomyTable {
        loops,
        values: values.into_iter().map(Phase::from_ratio).collect(),
        homomorphism,
        inverses,
        commutativity,
        thin_invariance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_torus_gerbe_validates_and_gives_its_flux() {
        let phi = Rational64::new(2, 5);
        let g = GerbeData::flat_torus(2, 2, phi).unwrap();
        assert!(g.validate().passed());
        let s = TwoLoop::fundamental(g.complex()).unwrap();
        assert_eq!(surface_holonomy_canonical(&g, &s).unwrap(), Phase::from_ratio(phi));
        assert_eq!(surface_holonomy_canonical(&g, &s.repeated(3)).unwrap(), Phase::from_ratio(phi * 3));
    }

    #[test]
    fn open_chains_are_not_two_loops() {
        let c = CellComplex::torus(2, 2);
        assert!(matches!(TwoLoop::new(&c, vec![(0, 1)]), Err(Error::InvalidSurface(_))));
    }

    #[test]
    fn gauge_moved_gerbe_stays_valid() {
        let g = GerbeData::flat_torus(2, 2, Rational64::new(1, 3)).unwrap();
        let mut k = 0i64;
        let gauge = DeligneGauge::from_fn(&g, || {
            k += 1;
            Rational64::new(k % 7 - 3, 5)
        });
        let moved = g.gauge_transform(&gauge).unwrap();
        let r = moved.validate();
        assert!(r.passed(), "{:?}", r.violations.first());
        let s = TwoLoop::fundamental(g.complex()).unwrap();
        assert_eq!(
            surface_holonomy_canonical(&moved, &s).unwrap(),
            Phase::from_ratio(Rational64::new(1, 3))
        );
    }
}
