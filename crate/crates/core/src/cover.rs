//! Covered spaces: cell complexes with chart subcomplexes, analytic
//! built-in manifolds with chart domains, and the nerve of the cover up to
//! 4-fold intersections.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::{Error, Result};

pub type ChartId = usize;

/// Largest intersection order tracked in the nerve.
pub const MAX_NERVE_ORDER: usize = 4;

/// A 2-dimensional cell complex: vertices, oriented edges, and faces given
/// by closed boundary walks of signed edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    faces: Vec<Vec<(usize, i8)>>,
}

impl CellComplex {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, faces: Vec<Vec<(usize, i8)>>) -> Result<Self> {
        for (i, &(s, t)) in edges.iter().enumerate() {
            if s >= vertex_count || t >= vertex_count {
                return Err(Error::Invalid(format!("edge {i} has an endpoint outside the vertex set")));
            }
        }
        let c = CellComplex {
            vertex_count,
            edges,
            faces,
        };
        for (f, walk) in c.faces.iter().enumerate() {
            if walk.is_empty() {
                return Err(Error::Invalid(format!("face {f} has an empty boundary")));
            }
            for (k, &(e, sign)) in walk.iter().enumerate() {
                if e >= c.edges.len() || (sign != 1 && sign != -1) {
                    return Err(Error::Invalid(format!("face {f} step {k} is not a signed edge")));
                }
                let next = walk[(k + 1) % walk.len()];
                if c.step_end(e, sign) != c.step_start(next.0, next.1) {
                    return Err(Error::Invalid(format!("boundary of face {f} is not closed at step {k}")));
                }
            }
        }
        Ok(c)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn face(&self, f: usize) -> &[(usize, i8)] {
        &self.faces[f]
    }

    pub fn step_start(&self, e: usize, sign: i8) -> usize {
        if sign > 0 {
            self.edges[e].0
        } else {
            self.edges[e].1
        }
    }

    pub fn step_end(&self, e: usize, sign: i8) -> usize {
        if sign > 0 {
            self.edges[e].1
        } else {
            self.edges[e].0
        }
    }

    /// Corner vertices of a face in boundary order.
    pub fn face_vertices(&self, f: usize) -> Vec<usize> {
        self.faces[f].iter().map(|&(e, s)| self.step_start(e, s)).collect()
    }

    /// Edges `v → w` or `w → v`, with the sign that walks from `v` to `w`.
    pub fn edges_between(&self, v: usize, w: usize) -> Vec<(usize, i8)> {
        let mut out = Vec::new();
        for (i, &(s, t)) in self.edges.iter().enumerate() {
            if s == v && t == w {
                out.push((i, 1));
            } else if s == w && t == v {
                out.push((i, -1));
            }
        }
        out
    }

    /// Cycle graph on `n ≥ 2` vertices, edge `i` running `i → i+1`.
    pub fn circle(n: usize) -> Self {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        CellComplex::new(n, edges, Vec::new()).expect("circle complex")
    }

    /// Path graph `0 - 1 - … - n−1`.
    pub fn path(n: usize) -> Self {
        let edges = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        CellComplex::new(n, edges, Vec::new()).expect("path complex")
    }

    /// Torus cut into an `m × n` grid of squares. Vertex `(i, j)` is
    /// `i * n + j`; horizontal edge `(i, j) → (i, j+1)` is `2(i n + j)`,
    /// vertical edge `(i, j) → (i+1, j)` is `2(i n + j) + 1`; face `(i, j)`
    /// is `i n + j`, oriented counterclockwise.
    pub fn torus(m: usize, n: usize) -> Self {
        let v = |i: usize, j: usize| (i % m) * n + (j % n);
        let mut edges = Vec::with_capacity(2 * m * n);
        for i in 0..m {
            for j in 0..n {
                edges.push((v(i, j), v(i, j + 1)));
                edges.push((v(i, j), v(i + 1, j)));
            }
        }
        let h = |i: usize, j: usize| 2 * v(i, j);
        let vert = |i: usize, j: usize| 2 * v(i, j) + 1;
        let faces = (0..m)
            .flat_map(|i| {
                (0..n).map(move |j| vec![(h(i, j), 1), (vert(i, j + 1), 1), (h(i + 1, j), -1), (vert(i, j), -1)])
            })
            .collect();
        CellComplex::new(m * n, edges, faces).expect("torus complex")
    }

    /// Sphere as `rows` latitude bands of `cols` cells with equal-area
    /// spacing: ring `k` (1 ≤ k < rows) sits at `cos θ = 1 − 2k/rows`.
    ///
    /// Vertex 0 is the north pole, vertex 1 the south pole, ring vertex
    /// `(k, j)` is `2 + (k−1) cols + j`. Ring edges run eastward; meridian
    /// edges run southward. Face `(k, j)` lies between rings `k` and `k+1`
    /// and is oriented by the outward normal.
    pub fn sphere(rows: usize, cols: usize) -> Self {
        assert!(rows >= 2 && cols >= 2);
        let ring = |k: usize, j: usize| -> usize {
            if k == 0 {
                0
            } else if k == rows {
                1
            } else {
                2 + (k - 1) * cols + (j % cols)
            }
        };
        let vertex_count = 2 + (rows - 1) * cols;
        let mut edges = Vec::new();
        let mut ring_edge = vec![vec![usize::MAX; cols]; rows + 1];
        let mut meridian = vec![vec![usize::MAX; cols]; rows];
        for k in 1..rows {
            for j in 0..cols {
                ring_edge[k][j] = edges.len();
                edges.push((ring(k, j), ring(k, j + 1)));
            }
        }
        for k in 0..rows {
            for j in 0..cols {
                meridian[k][j] = edges.len();
                edges.push((ring(k, j), ring(k + 1, j)));
            }
        }
        let mut faces = Vec::new();
        for k in 0..rows {
            for j in 0..cols {
                // Outward normal with east = +φ and south = +θ: the
                // boundary runs south, east, north, west.
                let mut walk = vec![(meridian[k][j], 1)];
                if k + 1 < rows {
                    walk.push((ring_edge[k + 1][j], 1));
                }
                walk.push((meridian[k][(j + 1) % cols], -1));
                if k > 0 {
                    walk.push((ring_edge[k][j], -1));
                }
                faces.push(walk);
            }
        }
        CellComplex::new(vertex_count, edges, faces).expect("sphere complex")
    }

    /// Ring edges of latitude ring `k` on a [`CellComplex::sphere`] grid,
    /// in eastward order.
    pub fn sphere_ring(rows: usize, cols: usize, k: usize) -> Vec<usize> {
        assert!(k >= 1 && k < rows);
        ((k - 1) * cols..k * cols).collect()
    }

    /// Smallest cell set containing the given cells and closed under
    /// taking boundaries.
    pub fn closure(&self, vertices: &[usize], edges: &[usize], faces: &[usize]) -> Result<CellSet> {
        let mut set = CellSet::default();
        for &f in faces {
            if f >= self.faces.len() {
                return Err(Error::Invalid(format!("face {f} does not exist")));
            }
            set.faces.insert(f);
            for &(e, _) in &self.faces[f] {
                set.edges.insert(e);
            }
        }
        for &e in edges {
            if e >= self.edges.len() {
                return Err(Error::Invalid(format!("edge {e} does not exist")));
            }
            set.edges.insert(e);
        }
        for &e in &set.edges.clone() {
            set.vertices.insert(self.edges[e].0);
            set.vertices.insert(self.edges[e].1);
        }
        for &v in vertices {
            if v >= self.vertex_count {
                return Err(Error::Invalid(format!("vertex {v} does not exist")));
            }
            set.vertices.insert(v);
        }
        Ok(set)
    }

    pub fn is_closed(&self, set: &CellSet) -> bool {
        set.faces
            .iter()
            .all(|&f| self.faces[f].iter().all(|(e, _)| set.edges.contains(e)))
            && set
                .edges
                .iter()
                .all(|&e| set.vertices.contains(&self.edges[e].0) && set.vertices.contains(&self.edges[e].1))
    }

    /// Whether a closed cell set collapses to a single vertex by
    /// elementary collapses of free faces.
    pub fn is_collapsible(&self, set: &CellSet) -> bool {
        let mut faces = set.faces.clone();
        let mut edges = set.edges.clone();
        let mut vertices = set.vertices.clone();
        if vertices.is_empty() {
            return false;
        }
        loop {
            let mut progressed = false;
            // Free edge: boundary of exactly one face, with multiplicity one.
            let mut edge_uses = std::collections::BTreeMap::<usize, (usize, usize)>::new();
            for &f in &faces {
                for &(e, _) in &self.faces[f] {
                    let entry = edge_uses.entry(e).or_insert((0, f));
                    entry.0 += 1;
                }
            }
            if let Some((&e, &(_, f))) = edge_uses.iter().find(|(_, &(n, _))| n == 1) {
                faces.remove(&f);
                edges.remove(&e);
                progressed = true;
            }
            if !progressed {
                let mut vertex_uses = std::collections::BTreeMap::<usize, (usize, usize)>::new();
                for &e in &edges {
                    if edge_uses.contains_key(&e) {
                        continue;
                    }
                    let (s, t) = self.edges[e];
                    for v in [s, t] {
                        let entry = vertex_uses.entry(v).or_insert((0, e));
                        entry.0 += 1;
                    }
                }
                // A vertex is free if exactly one edge meets it and that
                // edge bounds no face; edges that bound faces still count.
                let blocked: BTreeSet<usize> = edges
                    .iter()
                    .filter(|e| edge_uses.contains_key(e))
                    .flat_map(|&e| [self.edges[e].0, self.edges[e].1])
                    .collect();
                if let Some((&v, &(_, e))) = vertex_uses
                    .iter()
                    .find(|(v, &(n, e))| n == 1 && !blocked.contains(v) && self.edges[e].0 != self.edges[e].1)
                {
                    edges.remove(&e);
                    vertices.remove(&v);
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
        faces.is_empty() && edges.is_empty() && vertices.len() == 1
    }

    /// Connected components of a closed cell set (through its edges).
    pub fn component_count(&self, set: &CellSet) -> usize {
        let verts: Vec<usize> = set.vertices.iter().copied().collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let idx = |v: usize| verts.binary_search(&v).expect("closed cell set");
        for &e in &set.edges {
            let (a, b) = (idx(self.edges[e].0), idx(self.edges[e].1));
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..verts.len()).filter(|&i| find(&mut parent, i) == i).count()
    }
}

/// A set of cells of a [`CellComplex`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellSet {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
    pub faces: BTreeSet<usize>,
}

impl CellSet {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty() && self.faces.is_empty()
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        CellSet {
            vertices: self.vertices.intersection(&other.vertices).copied().collect(),
            edges: self.edges.intersection(&other.edges).copied().collect(),
            faces: self.faces.intersection(&other.faces).copied().collect(),
        }
    }

    pub fn cell_count(&self) -> usize {
        self.vertices.len() + self.edges.len() + self.faces.len()
    }
}

/// A named chart of a combinatorial cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexChart {
    pub name: String,
    pub cells: CellSet,
}

/// A complex with a cover by closed subcomplexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialCover {
    pub complex: CellComplex,
    pub charts: Vec<ComplexChart>,
}

impl CombinatorialCover {
    /// Charts given by the faces, edges and vertices they must contain,
    /// closed under boundary.
    pub fn new(complex: CellComplex, charts: Vec<(String, Vec<usize>, Vec<usize>, Vec<usize>)>) -> Result<Self> {
        let charts = charts
            .into_iter()
            .map(|(name, faces, edges, vertices)| {
                Ok(ComplexChart {
                    cells: complex.closure(&vertices, &edges, &faces)?,
                    name,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let cover = CombinatorialCover { complex, charts };
        cover.check_covers()?;
        Ok(cover)
    }

    fn check_covers(&self) -> Result<()> {
        let c = &self.complex;
        for v in 0..c.vertex_count() {
            if !self.charts.iter().any(|ch| ch.cells.vertices.contains(&v)) {
                return Err(Error::Invalid(format!("vertex {v} lies in no chart")));
            }
        }
        for e in 0..c.edge_count() {
            if !self.charts.iter().any(|ch| ch.cells.edges.contains(&e)) {
                return Err(Error::Invalid(format!("edge {e} lies in no chart")));
            }
        }
        for f in 0..c.face_count() {
            if !self.charts.iter().any(|ch| ch.cells.faces.contains(&f)) {
                return Err(Error::Invalid(format!("face {f} lies in no chart")));
            }
        }
        Ok(())
    }

    pub fn intersection(&self, charts: &[ChartId]) -> CellSet {
        let mut it = charts.iter();
        let first = match it.next() {
            Some(&i) => self.charts[i].cells.clone(),
            None => return CellSet::default(),
        };
        it.fold(first, |acc, &j| acc.intersection(&self.charts[j].cells))
    }

    pub fn charts_containing_vertex(&self, v: usize) -> Vec<ChartId> {
        (0..self.charts.len())
            .filter(|&i| self.charts[i].cells.vertices.contains(&v))
            .collect()
    }

    pub fn charts_containing_edge(&self, e: usize) -> Vec<ChartId> {
        (0..self.charts.len())
            .filter(|&i| self.charts[i].cells.edges.contains(&e))
            .collect()
    }

    pub fn charts_containing_face(&self, f: usize) -> Vec<ChartId> {
        (0..self.charts.len())
            .filter(|&i| self.charts[i].cells.faces.contains(&f))
            .collect()
    }
}

/// An arc `{φ : |φ − center| < half_width}` of the circle, in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub center: f64,
    pub half_width: f64,
}

impl Arc {
    pub fn contains(&self, phi: f64) -> bool {
        crate::phase::circular_distance(phi, self.center) < self.half_width
    }

    /// The arc as disjoint open intervals of `[0, 2π)`.
    fn intervals(&self) -> Vec<(f64, f64)> {
        if self.half_width >= PI {
            return vec![(0.0, TAU)];
        }
        let lo = (self.center - self.half_width).rem_euclid(TAU);
        let hi = lo + 2.0 * self.half_width;
        if hi <= TAU {
            vec![(lo, hi)]
        } else {
            vec![(0.0, hi - TAU), (lo, TAU)]
        }
    }
}

/// Intersection of arcs as open intervals in `[0, 2π)`, and the number of
/// connected components on the circle.
fn arc_intersection(arcs: &[Arc]) -> (Vec<(f64, f64)>, usize) {
    let mut current: Vec<(f64, f64)> = vec![(0.0, TAU)];
    for a in arcs {
        let mut next = Vec::new();
        for &(lo, hi) in &current {
            for (alo, ahi) in a.intervals() {
                let (l, h) = (lo.max(alo), hi.min(ahi));
                if l < h {
                    next.push((l, h));
                }
            }
        }
        current = next;
    }
    current.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut components = current.len();
    if components >= 2 && current[0].0 == 0.0 && current[components - 1].1 == TAU {
        components -= 1;
    }
    (current, components)
}

/// Chart domains of the analytic built-ins.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    /// `θ < bound` on the sphere.
    CapNorth(f64),
    /// `θ > bound` on the sphere.
    CapSouth(f64),
    /// Product of arcs, one per angular coordinate.
    Arcs(Vec<Arc>),
}

impl Domain {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::CapNorth(b) => x[0] < *b,
            Domain::CapSouth(b) => x[0] > *b,
            Domain::Arcs(arcs) => arcs.iter().zip(x).all(|(a, &phi)| a.contains(phi)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Manifold {
    /// Coordinate `φ`.
    Circle,
    /// Coordinates `(θ, φ)`, colatitude and longitude.
    Sphere,
    /// Coordinates `(x, y)` in `[0, 2π)²`.
    Torus,
    /// Coordinates `(x, y, z)` in `[0, 2π)³`.
    ThreeTorus,
}

impl Manifold {
    pub fn dimension(&self) -> usize {
        match self {
            Manifold::Circle => 1,
            Manifold::Sphere | Manifold::Torus => 2,
            Manifold::ThreeTorus => 3,
        }
    }

    /// Reduce angular coordinates into their fundamental ranges.
    pub fn normalize(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Manifold::Sphere => vec![x[0], x[1].rem_euclid(TAU)],
            _ => x.iter().map(|c| c.rem_euclid(TAU)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticChart {
    pub name: String,
    pub domain: Domain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticCover {
    pub manifold: Manifold,
    pub charts: Vec<AnalyticChart>,
}

/// Arcs `A = (−0.2π, 1.2π)` and `B = (0.8π, 2.2π)`; they overlap in two
/// components.
pub fn standard_arcs() -> [Arc; 2] {
    [
        Arc {
            center: 0.5 * PI,
            half_width: 0.7 * PI,
        },
        Arc {
            center: 1.5 * PI,
            half_width: 0.7 * PI,
        },
    ]
}

impl AnalyticCover {
    pub fn builtin(name: &str) -> Result<Self> {
        let [a, b] = standard_arcs();
        let product = |dim: usize| -> Vec<AnalyticChart> {
            (0..1usize << dim)
                .map(|mask| {
                    let arcs: Vec<Arc> = (0..dim).map(|k| if mask >> (dim - 1 - k) & 1 == 0 { a } else { b }).collect();
                    let name: String = (0..dim)
                        .map(|k| if mask >> (dim - 1 - k) & 1 == 0 { 'A' } else { 'B' })
                        .collect();
                    AnalyticChart {
                        name,
                        domain: Domain::Arcs(arcs),
                    }
                })
                .collect()
        };
        let (manifold, charts) = match name {
            "circle-2-charts" => (Manifold::Circle, product(1)),
            "sphere-2-charts" => (
                Manifold::Sphere,
                vec![
                    AnalyticChart {
                        name: "north".into(),
                        domain: Domain::CapNorth(0.6 * PI),
                    },
                    AnalyticChart {
                        name: "south".into(),
                        domain: Domain::CapSouth(0.4 * PI),
                    },
                ],
            ),
            "torus-4-charts" => (Manifold::Torus, product(2)),
            "three-torus-8-charts" => (Manifold::ThreeTorus, product(3)),
            other => return Err(Error::Invalid(format!("unknown built-in manifold {other:?}"))),
        };
        Ok(AnalyticCover { manifold, charts })
    }

    pub fn contains(&self, chart: ChartId, x: &[f64]) -> bool {
        self.charts[chart].domain.contains(&self.manifold.normalize(x))
    }

    /// `(nonempty, component count, contractible)` for an intersection.
    fn intersection_shape(&self, charts: &[ChartId]) -> (bool, usize, bool) {
        match self.manifold {
            Manifold::Sphere => {
                let (mut lo, mut hi) = (0.0f64, PI);
                for &c in charts {
                    match self.charts[c].domain {
                        Domain::CapNorth(b) => hi = hi.min(b),
                        Domain::CapSouth(b) => lo = lo.max(b),
                        Domain::Arcs(_) => unreachable!("sphere charts are caps"),
                    }
                }
                let nonempty = lo < hi;
                // A cap containing a pole is a disc; a band is an annulus.
                let contractible = nonempty && (lo == 0.0 || hi == PI);
                (nonempty, usize::from(nonempty), contractible)
            }
            _ => {
                let dim = self.manifold.dimension();
                let mut components = 1;
                let mut contractible = true;
                for k in 0..dim {
                    let arcs: Vec<Arc> = charts
                        .iter()
                        .map(|&c| match &self.charts[c].domain {
                            Domain::Arcs(a) => a[k],
                            _ => unreachable!("product charts are arcs"),
                        })
                        .collect();
                    let (intervals, n) = arc_intersection(&arcs);
                    if intervals.is_empty() {
                        return (false, 0, false);
                    }
                    let full = intervals.len() == 1 && intervals[0] == (0.0, TAU);
                    components *= n;
                    contractible &= n == 1 && !full;
                }
                (true, components, contractible)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Backend {
    Combinatorial(CombinatorialCover),
    Analytic(AnalyticCover),
}

/// A nonempty intersection `U_{i₁…i_p}` with its shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveSimplex {
    pub charts: Vec<ChartId>,
    pub components: usize,
    pub contractible: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Nerve {
    simplices: Vec<NerveSimplex>,
}

impl Nerve {
    pub fn simplices(&self) -> &[NerveSimplex] {
        &self.simplices
    }

    /// Intersections of exactly `p` charts.
    pub fn of_order(&self, p: usize) -> impl Iterator<Item = &NerveSimplex> {
        self.simplices.iter().filter(move |s| s.charts.len() == p)
    }

    pub fn count(&self, p: usize) -> usize {
        self.of_order(p).count()
    }

    pub fn get(&self, charts: &[ChartId]) -> Option<&NerveSimplex> {
        let mut key = charts.to_vec();
        key.sort_unstable();
        key.dedup();
        self.simplices.iter().find(|s| s.charts == key)
    }

    pub fn contains(&self, charts: &[ChartId]) -> bool {
        self.get(charts).is_some()
    }

    /// Every sub-tuple of a listed tuple is listed.
    pub fn is_downward_closed(&self) -> std::result::Result<(), Vec<ChartId>> {
        for s in &self.simplices {
            if s.charts.len() < 2 {
                continue;
            }
            for skip in 0..s.charts.len() {
                let face: Vec<ChartId> = s
                    .charts
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &c)| c)
                    .collect();
                if !self.contains(&face) {
                    return Err(s.charts.clone());
                }
            }
        }
        Ok(())
    }

    pub fn from_simplices(mut simplices: Vec<NerveSimplex>) -> Self {
        for s in &mut simplices {
            s.charts.sort_unstable();
            s.charts.dedup();
        }
        simplices.sort_by(|a, b| a.charts.len().cmp(&b.charts.len()).then_with(|| a.charts.cmp(&b.charts)));
        simplices.dedup_by(|a, b| a.charts == b.charts);
        Nerve { simplices }
    }
}

/// Chart subsets of size 1..=max_order in (size, lexicographic) order.
pub fn chart_subsets(n: usize, max_order: usize) -> Vec<Vec<ChartId>> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    for k in 1..=max_order.min(n) {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoveredSpace {
    pub name: String,
    backend: Backend,
    nerve: Nerve,
    good: bool,
}

/// What to build.
#[derive(Clone, Debug)]
pub enum CoverSpec {
    Builtin(String),
    Combinatorial {
        cover: CombinatorialCover,
        /// An optional declared nerve, checked against the computed one.
        declared_nerve: Option<Vec<Vec<ChartId>>>,
        /// Fail with `NotGood` instead of recording `good = false`.
        require_good: bool,
    },
}

pub fn build_cover(spec: CoverSpec) -> Result<CoveredSpace> {
    match spec {
        CoverSpec::Builtin(name) => {
            let cover = AnalyticCover::builtin(&name)?;
            let simplices = chart_subsets(cover.charts.len(), MAX_NERVE_ORDER)
                .into_iter()
                .filter_map(|charts| {
                    let (nonempty, components, contractible) = cover.intersection_shape(&charts);
                    nonempty.then_some(NerveSimplex {
                        charts,
                        components,
                        contractible,
                    })
                })
                .collect();
            let nerve = Nerve::from_simplices(simplices);
            let good = nerve.simplices().iter().all(|s| s.contractible);
            Ok(CoveredSpace {
                name,
                backend: Backend::Analytic(cover),
                nerve,
                good,
            })
        }
        CoverSpec::Combinatorial {
            cover,
            declared_nerve,
            require_good,
        } => {
            for ch in &cover.charts {
                if !cover.complex.is_closed(&ch.cells) {
                    return Err(Error::Invalid(format!("chart {} is not a subcomplex", ch.name)));
                }
            }
            let simplices: Vec<NerveSimplex> = chart_subsets(cover.charts.len(), MAX_NERVE_ORDER)
                .into_iter()
                .filter_map(|charts| {
                    let cells = cover.intersection(&charts);
                    if cells.is_empty() {
                        return None;
                    }
                    Some(NerveSimplex {
                        components: cover.complex.component_count(&cells),
                        contractible: cover.complex.is_collapsible(&cells),
                        charts,
                    })
                })
                .collect();
            let nerve = Nerve::from_simplices(simplices);
            if let Some(declared) = declared_nerve {
                let declared = Nerve::from_simplices(
                    declared
                        .into_iter()
                        .map(|charts| NerveSimplex {
                            charts,
                            components: 0,
                            contractible: false,
                        })
                        .collect(),
                );
                if let Err(tuple) = declared.is_downward_closed() {
                    return Err(Error::BadNerve(format!(
                        "declared intersection {tuple:?} has an unlisted face"
                    )));
                }
                let lhs: Vec<&Vec<ChartId>> = declared.simplices().iter().map(|s| &s.charts).collect();
                let rhs: Vec<&Vec<ChartId>> = nerve.simplices().iter().map(|s| &s.charts).collect();
                if lhs != rhs {
                    return Err(Error::BadNerve(
                        "declared nerve differs from the computed intersections".into(),
                    ));
                }
            }
            let good = nerve.simplices().iter().all(|s| s.contractible);
            if require_good && !good {
                let bad = nerve.simplices().iter().find(|s| !s.contractible).expect("some bad");
                return Err(Error::NotGood(format!(
                    "intersection {:?} does not collapse to a point",
                    bad.charts
                )));
            }
            Ok(CoveredSpace {
                name: "combinatorial".into(),
                backend: Backend::Combinatorial(cover),
                nerve,
                good,
            })
        }
    }
}

impl CoveredSpace {
    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn nerve(&self) -> &Nerve {
        &self.nerve
    }

    pub fn is_good(&self) -> bool {
        self.good
    }

    pub fn chart_count(&self) -> usize {
        match &self.backend {
            Backend::Combinatorial(c) => c.charts.len(),
            Backend::Analytic(a) => a.charts.len(),
        }
    }

    pub fn chart_name(&self, i: ChartId) -> &str {
        match &self.backend {
            Backend::Combinatorial(c) => &c.charts[i].name,
            Backend::Analytic(a) => &a.charts[i].name,
        }
    }

    pub fn combinatorial(&self) -> Option<&CombinatorialCover> {
        match &self.backend {
            Backend::Combinatorial(c) => Some(c),
            Backend::Analytic(_) => None,
        }
    }

    pub fn analytic(&self) -> Option<&AnalyticCover> {
        match &self.backend {
            Backend::Analytic(a) => Some(a),
            Backend::Combinatorial(_) => None,
        }
    }
}

impl fmt::Display for CoveredSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} charts", self.name, self.chart_count())?;
        for p in 2..=MAX_NERVE_ORDER {
            write!(f, ", {} {p}-fold", self.nerve.count(p))?;
        }
        write!(f, ", {})", if self.good { "good" } else { "not good" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_grid_counts() {
        let t = CellComplex::torus(3, 4);
        assert_eq!((t.vertex_count(), t.edge_count(), t.face_count()), (12, 24, 12));
        let s = CellComplex::sphere(4, 6);
        // Euler characteristic 2.
        assert_eq!(s.vertex_count() as i64 - s.edge_count() as i64 + s.face_count() as i64, 2);
    }

    #[test]
    fn collapsibility() {
        let t = CellComplex::torus(3, 3);
        let one_face = t.closure(&[], &[], &[0]).unwrap();
        assert!(t.is_collapsible(&one_face));
        let all = t.closure(&[], &[], &(0..9).collect::<Vec<_>>()).unwrap();
        assert!(!t.is_collapsible(&all));
        let c = CellComplex::circle(5);
        let arc = c.closure(&[], &[0, 1, 2], &[]).unwrap();
        assert!(c.is_collapsible(&arc));
        let whole = c.closure(&[], &[0, 1, 2, 3, 4], &[]).unwrap();
        assert!(!c.is_collapsible(&whole));
        let two_points = c.closure(&[0, 2], &[], &[]).unwrap();
        assert!(!c.is_collapsible(&two_points));
        assert_eq!(c.component_count(&two_points), 2);
    }

    #[test]
    fn analytic_nerves() {
        let circle = build_cover(CoverSpec::Builtin("circle-2-charts".into())).unwrap();
        let u12 = circle.nerve().get(&[0, 1]).unwrap();
        assert_eq!(u12.components, 2);
        assert!(!circle.is_good());
        let sphere = build_cover(CoverSpec::Builtin("sphere-2-charts".into())).unwrap();
        let band = sphere.nerve().get(&[0, 1]).unwrap();
        assert_eq!(band.components, 1);
        assert!(!band.contractible);
        assert!(sphere.nerve().get(&[0]).unwrap().contractible);
    }
}
