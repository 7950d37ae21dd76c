//! Local subgroupoids on a finite site: germs of wide subgroupoids,
//! subgroupoids reached by a path transport, geodesic atlases, and
//! globalisation to a holonomy groupoid of reduced words.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use crate::double::LawReport;
use crate::error::{Error, Result};
use crate::groupoid::{generated_subgroupoid, ArrowId, FiniteGroupoid, Groupoid, ObjectId, Subgroupoid};
use crate::presentation::Presentation;
use crate::rewriting::{RewriteSystem, Word};
use crate::site::{contains, mask, members, FiniteSite, PointSet};

/// A representative `(U, H)` of a germ at `x`.
#[derive(Clone, Debug)]
pub struct Germ {
    pub point: usize,
    pub open: PointSet,
    pub sub: Subgroupoid,
}

pub fn germ_at(site: &FiniteSite, x: usize, open: PointSet, sub: Subgroupoid) -> Result<Germ> {
    if !site.is_open(open) {
        return Err(Error::Invalid(format!("{:?} is not open", members(open))));
    }
    if !contains(open, x) {
        return Err(Error::PointOutside(format!("{x} is not in {:?}", members(open))));
    }
    if *sub.objects() != members(open) {
        return Err(Error::NotWide(format!(
            "objects {:?} differ from the open set {:?}",
            sub.objects(),
            members(open)
        )));
    }
    Ok(Germ { point: x, open, sub })
}

/// `(U, H) ∼ₓ (V, K)`: some open `W ∋ x` inside `U ∩ V` has `H|W = K|W`.
pub fn germ_equal(site: &FiniteSite, a: &Germ, b: &Germ) -> bool {
    if a.point != b.point {
        return false;
    }
    let uv = a.open & b.open;
    site.opens_containing(a.point).filter(|&w| w & !uv == 0).any(|w| {
        let w = members(w);
        a.sub.restrict(&w) == b.sub.restrict(&w)
    })
}

/// A path transport on a graph: traversing edge `k` forward gives
/// `arrows[k]`, backward its inverse, and paths compose.
#[derive(Clone, Debug)]
pub struct EdgeTransport {
    pub parent: Arc<FiniteGroupoid>,
    pub edges: Vec<(usize, usize)>,
    pub arrows: Vec<ArrowId>,
}

impl EdgeTransport {
    /// Checks that each arrow runs along its edge and that repeated edges
    /// carry consistent arrows.
    pub fn new(parent: Arc<FiniteGroupoid>, edges: Vec<(usize, usize)>, arrows: Vec<ArrowId>) -> Result<Self> {
        if edges.len() != arrows.len() {
            return Err(Error::InconsistentTransport("one arrow per edge is needed".into()));
        }
        let mut seen: BTreeMap<(usize, usize), ArrowId> = BTreeMap::new();
        for (k, (&(x, y), &g)) in edges.iter().zip(&arrows).enumerate() {
            if g >= parent.arrow_count() || parent.endpoints(g) != (x, y) {
                return Err(Error::InconsistentTransport(format!("edge {k} ({x} → {y}) carries arrow {g} elsewhere")));
            }
            for (key, want) in [((x, y), g), ((y, x), parent.inverse_id(g))] {
                if let Some(&prev) = seen.get(&key) {
                    if prev != want {
                        return Err(Error::InconsistentTransport(format!(
                            "edge {k} disagrees with an earlier edge between {x} and {y}"
                        )));
                    }
                }
                seen.insert(key, want);
            }
        }
        Ok(EdgeTransport { parent, edges, arrows })
    }

    /// Arrow for one step `x → y`, if an edge joins them.
    pub fn step(&self, x: usize, y: usize) -> Option<ArrowId> {
        self.edges.iter().zip(&self.arrows).find_map(|(&(a, b), &g)| {
            if (a, b) == (x, y) {
                Some(g)
            } else if (a, b) == (y, x) {
                Some(self.parent.inverse_id(g))
            } else {
                None
            }
        })
    }

    /// `Υ(λ)(1)` along a vertex path.
    pub fn along(&self, path: &[usize]) -> Result<ArrowId> {
        let first = *path.first().ok_or_else(|| Error::Invalid("empty vertex path".into()))?;
        let mut acc = self.parent.identity_id(first);
        for w in path.windows(2) {
            let g = self
                .step(w[0], w[1])
                .ok_or_else(|| Error::Invalid(format!("no edge {} — {}", w[0], w[1])))?;
            acc = self.parent.compose_ids(acc, g)?;
        }
        Ok(acc)
    }

    /// Neighbours of `x` inside `u` with the step arrow.
    fn moves(&self, x: usize, u: PointSet) -> Vec<(usize, ArrowId)> {
        let mut out = Vec::new();
        for (&(a, b), &g) in self.edges.iter().zip(&self.arrows) {
            if !contains(u, a) || !contains(u, b) {
                continue;
            }
            if a == x {
                out.push((b, g));
            }
            if b == x {
                out.push((a, self.parent.inverse_id(g)));
            }
        }
        out
    }
}

/// `C_Υ(𝔾|U)`: every `Υ(λ)(1)` for edge paths `λ` inside `U`, with the
/// identities. Found by search over (endpoint, arrow) states.
pub fn c_upsilon(t: &EdgeTransport, u: PointSet) -> Result<Subgroupoid> {
    let p = &t.parent;
    let objects = members(u);
    if let Some(&x) = objects.iter().find(|&&x| x >= p.object_count()) {
        return Err(Error::UnknownObject(format!("#{x}")));
    }
    let mut arrows = BTreeSet::new();
    for &x in &objects {
        let start = p.identity_id(x);
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(g) = queue.pop_front() {
            let (_, y) = p.endpoints(g);
            for (_, h) in t.moves(y, u) {
                let gh = p.compose_ids(g, h)?;
                if seen.insert(gh) {
                    queue.push_back(gh);
                }
            }
        }
        arrows.extend(seen);
    }
    Subgroupoid::new(p.clone(), objects, arrows)
}

/// Chosen paths `geod_i(x, y)` inside each chart, as vertex lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicStructure {
    pub charts: Vec<PointSet>,
    pub paths: Vec<BTreeMap<(usize, usize), Vec<usize>>>,
}

/// What the geodesic checks covered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicReport {
    pub pairs: usize,
    pub overlap_pairs: usize,
    pub paths_checked: usize,
}

impl GeodesicStructure {
    /// Shortest paths inside each chart, ties broken by the
    /// lexicographically smallest vertex sequence.
    pub fn bfs_lex(edges: &[(usize, usize)], charts: &[PointSet]) -> Self {
        let mut paths = Vec::new();
        for &u in charts {
            let pts = members(u);
            let nbrs = |x: usize| -> BTreeSet<usize> {
                edges
                    .iter()
                    .filter(|&&(a, b)| contains(u, a) && contains(u, b))
                    .filter_map(|&(a, b)| {
                        if a == x {
                            Some(b)
                        } else if b == x {
                            Some(a)
                        } else {
                            None
                        }
                    })
                    .collect()
            };
            let mut table = BTreeMap::new();
            for &y in &pts {
                // Distances to y, then greedy smallest next vertex.
                let mut dist: BTreeMap<usize, usize> = BTreeMap::from([(y, 0)]);
                let mut queue = VecDeque::from([y]);
                while let Some(v) = queue.pop_front() {
                    for w in nbrs(v) {
                        if !dist.contains_key(&w) {
                            dist.insert(w, dist[&v] + 1);
                            queue.push_back(w);
                        }
                    }
                }
                for &x in &pts {
                    let Some(&d) = dist.get(&x) else { continue };
                    let mut path = vec![x];
                    let mut cur = x;
                    for k in (0..d).rev() {
                        cur = *nbrs(cur).iter().find(|w| dist.get(w) == Some(&k)).expect("distance layer");
                        path.push(cur);
                    }
                    table.insert((x, y), path);
                }
            }
            paths.push(table);
        }
        GeodesicStructure {
            charts: charts.to_vec(),
            paths,
        }
    }

    /// Uniqueness and in-chart validity, coherence on overlaps, and
    /// flatness against every in-chart path of at most `budget` steps.
    /// `transports` holds one transport per chart, or a single shared one.
    pub fn verify(&self, transports: &[EdgeTransport], budget: usize) -> Result<GeodesicReport> {
        if transports.len() != 1 && transports.len() != self.charts.len() {
            return Err(Error::Invalid("need one transport per chart or a shared one".into()));
        }
        let pick = |i: usize| &transports[i.min(transports.len() - 1)];
        let mut report = GeodesicReport {
            pairs: 0,
            overlap_pairs: 0,
            paths_checked: 0,
        };
        for (i, (&u, table)) in self.charts.iter().zip(&self.paths).enumerate() {
            for x in members(u) {
                for y in members(u) {
                    let path = table
                        .get(&(x, y))
                        .ok_or_else(|| Error::Invalid(format!("chart {i} has no geodesic {x} → {y}")))?;
                    if path.first() != Some(&x) || path.last() != Some(&y) || path.iter().any(|&v| !contains(u, v)) {
                        return Err(Error::Invalid(format!("chart {i}: geod({x}, {y}) leaves the chart or misses its ends")));
                    }
                    if path.windows(2).any(|w| pick(i).step(w[0], w[1]).is_none()) {
                        return Err(Error::Invalid(format!("chart {i}: geod({x}, {y}) is not an edge path")));
                    }
                    report.pairs += 1;
                }
            }
        }
        for i in 0..self.charts.len() {
            for j in i + 1..self.charts.len() {
                let w = self.charts[i] & self.charts[j];
                // Only pairs joined by a path inside the overlap.
                let mut reach: BTreeMap<usize, usize> = BTreeMap::new();
                for x in members(w) {
                    if reach.contains_key(&x) {
                        continue;
                    }
                    let mut queue = VecDeque::from([x]);
                    reach.insert(x, x);
                    while let Some(v) = queue.pop_front() {
                        for (n, _) in pick(i).moves(v, w) {
                            if let std::collections::btree_map::Entry::Vacant(e) = reach.entry(n) {
                                e.insert(x);
                                queue.push_back(n);
                            }
                        }
                    }
                }
                for x in members(w) {
                    for y in members(w) {
                        if reach[&x] != reach[&y] {
                            continue;
                        }
                        if self.paths[i][&(x, y)] != self.paths[j][&(x, y)] {
                            return Err(Error::OverlapIncoherence(format!(
                                "charts {i} and {j} choose different geodesics {x} → {y}"
                            )));
                        }
                        report.overlap_pairs += 1;
                    }
                }
            }
        }
        for (i, (&u, table)) in self.charts.iter().zip(&self.paths).enumerate() {
            let t = pick(i);
            let p = &t.parent;
            for x in members(u) {
                // Depth-first over in-chart paths from x.
                let mut stack = vec![(x, p.identity_id(x), 0usize)];
                while let Some((v, g, len)) = stack.pop() {
                    report.paths_checked += 1;
                    let expected = t.along(&table[&(x, v)])?;
                    if g != expected {
                        return Err(Error::FlatnessViolation(format!(
                            "chart {i}: a path {x} → {v} of length {len} transports to arrow {g}, the geodesic to {expected}"
                        )));
                    }
                    if len < budget {
                        for (w, h) in t.moves(v, u) {
                            stack.push((w, p.compose_ids(g, h)?, len + 1));
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}

/// An atlas of wide pieces `(U_i, H_i)` and the section
/// `x ↦ [U_i, H_i]_x` for the first chart containing `x`.
#[derive(Clone, Debug)]
pub struct LocalSubgroupoid {
    pub site: FiniteSite,
    pub atlas: Vec<(PointSet, Subgroupoid)>,
    pub section: Vec<Germ>,
}

impl LocalSubgroupoid {
    pub fn from_atlas(site: FiniteSite, atlas: Vec<(PointSet, Subgroupoid)>) -> Result<Self> {
        let mut section = Vec::with_capacity(site.point_count());
        for x in 0..site.point_count() {
            let (u, h) = atlas
                .iter()
                .find(|(u, _)| contains(*u, x))
                .ok_or_else(|| Error::Invalid(format!("point {x} lies in no chart")))?;
            section.push(germ_at(&site, x, *u, h.clone())?);
        }
        for (u, h) in &atlas {
            germ_at(&site, u.trailing_zeros() as usize, *u, h.clone())?;
        }
        Ok(LocalSubgroupoid { site, atlas, section })
    }

    pub fn parent(&self) -> &Arc<FiniteGroupoid> {
        self.atlas[0].1.parent()
    }

    /// Well-definedness and local constancy of the section: every chart
    /// through `x` gives the same germ there, and some chart through `x`
    /// represents the section at every one of its points.
    pub fn check_path_locality(&self) -> LawReport {
        let mut report = LawReport::new("[U_i, H_i]_x independent of i and locally constant");
        let mut idx = 0;
        for x in 0..self.site.point_count() {
            for (i, (u, h)) in self.atlas.iter().enumerate() {
                if !contains(*u, x) {
                    continue;
                }
                let g = Germ {
                    point: x,
                    open: *u,
                    sub: h.clone(),
                };
                report.record(idx, germ_equal(&self.site, &g, &self.section[x]), || {
                    format!("chart {i} gives a different germ at {x}")
                });
                idx += 1;
            }
            let constant = self.atlas.iter().filter(|(u, _)| contains(*u, x)).any(|(u, h)| {
                members(*u).into_iter().all(|y| {
                    let g = Germ {
                        point: y,
                        open: *u,
                        sub: h.clone(),
                    };
                    germ_equal(&self.site, &g, &self.section[y])
                })
            });
            report.record(idx, constant, || format!("section is not locally constant at {x}"));
            idx += 1;
        }
        report
    }
}

/// Builds `x ↦ [U_i, C_Υ(𝔾|U_i)]_x` after verifying the geodesics, with
/// per-chart transports as in [`GeodesicStructure::verify`].
pub fn build_local_subgroupoid(
    site: &FiniteSite,
    geod: &GeodesicStructure,
    transports: &[EdgeTransport],
    path_budget: usize,
) -> Result<(LocalSubgroupoid, GeodesicReport)> {
    if let Some(u) = geod.charts.iter().find(|&&u| !site.is_open(u)) {
        return Err(Error::Invalid(format!("chart {:?} is not open", members(*u))));
    }
    if geod.charts.iter().fold(0, |a, &u| a | u) != site.whole() {
        return Err(Error::Invalid("the charts do not cover the site".into()));
    }
    let report = geod.verify(transports, path_budget)?;
    let atlas = geod
        .charts
        .iter()
        .enumerate()
        .map(|(i, &u)| Ok((u, c_upsilon(&transports[i.min(transports.len() - 1)], u)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((LocalSubgroupoid::from_atlas(site.clone(), atlas)?, report))
}

/// One letter of the holonomy groupoid: a non-identity arrow of a piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Letter {
    pub piece: usize,
    pub arrow: ArrowId,
}

/// An arrow of the holonomy groupoid: a reduced word with endpoints.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HolArrow {
    pub source: ObjectId,
    pub target: ObjectId,
    pub word: Word,
}

/// Words over the disjoint union of the pieces modulo in-piece
/// composition and identification of shared arrows on connected parts of
/// overlaps, reduced by a completed rewriting system.
#[derive(Clone, Debug)]
pub struct HolonomyGroupoid {
    parent: Arc<FiniteGroupoid>,
    letters: Vec<Letter>,
    index: BTreeMap<Letter, u32>,
    system: RewriteSystem,
    pub completion: crate::rewriting::Completion,
}

impl HolonomyGroupoid {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn rules(&self) -> usize {
        self.system.rules().len()
    }

    pub fn letter(&self, piece: usize, arrow: ArrowId) -> Option<u32> {
        self.index.get(&Letter { piece, arrow }).copied()
    }

    fn ends(&self, l: u32) -> (ObjectId, ObjectId) {
        self.parent.endpoints(self.letters[l as usize].arrow)
    }

    fn inverse_letter(&self, l: u32) -> u32 {
        let Letter { piece, arrow } = self.letters[l as usize];
        self.index[&Letter {
            piece,
            arrow: self.parent.inverse_id(arrow),
        }]
    }

    /// The arrow of a composable word starting at `source`.
    pub fn word(&self, source: ObjectId, word: &[u32]) -> Result<HolArrow> {
        let mut at = source;
        for &l in word {
            if l as usize >= self.letters.len() {
                return Err(Error::UnknownArrow(format!("letter {l}")));
            }
            let (s, t) = self.ends(l);
            if s != at {
                return Err(Error::NonComposable(format!("letter {l} starts at {s}, not {at}")));
            }
            at = t;
        }
        Ok(HolArrow {
            source,
            target: at,
            word: self.system.reduce(word),
        })
    }

    /// The covering morphism to the parent: evaluate the word.
    pub fn evaluate(&self, a: &HolArrow) -> ArrowId {
        a.word.iter().fold(self.parent.identity_id(a.source), |acc, &l| {
            self.parent
                .compose_ids(acc, self.letters[l as usize].arrow)
                .expect("composable word")
        })
    }

    /// Normal forms of every composable word of at most `max_len`
    /// letters, grouped by endpoints.
    pub fn enumerate(&self, max_len: usize) -> BTreeMap<(ObjectId, ObjectId), BTreeSet<Word>> {
        let mut out: BTreeMap<(ObjectId, ObjectId), BTreeSet<Word>> = BTreeMap::new();
        for x in 0..self.parent.object_count() {
            out.entry((x, x)).or_default().insert(Vec::new());
        }
        let mut by_source: BTreeMap<ObjectId, Vec<u32>> = BTreeMap::new();
        for l in 0..self.letters.len() as u32 {
            by_source.entry(self.ends(l).0).or_default().push(l);
        }
        let mut frontier: Vec<(ObjectId, ObjectId, Word)> =
            (0..self.parent.object_count()).map(|x| (x, x, Vec::new())).collect();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (s, t, w) in &frontier {
                for &l in by_source.get(t).into_iter().flatten() {
                    let mut w2 = w.clone();
                    w2.push(l);
                    let t2 = self.ends(l).1;
                    out.entry((*s, t2)).or_default().insert(self.system.reduce(&w2));
                    next.push((*s, t2, w2));
                }
            }
            frontier = next;
        }
        out
    }

    /// Presentation of the vertex group at `x`: generators are letters off
    /// a spanning tree of the letter graph, relators are the rules.
    pub fn vertex_group(&self, x: ObjectId) -> Presentation {
        let mut tree: BTreeSet<u32> = BTreeSet::new();
        let mut reached = BTreeSet::from([x]);
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            for l in 0..self.letters.len() as u32 {
                let (s, t) = self.ends(l);
                if s == v && reached.insert(t) {
                    tree.insert(l);
                    queue.push_back(t);
                }
            }
        }
        let gens: Vec<u32> = (0..self.letters.len() as u32)
            .filter(|l| !tree.contains(l) && reached.contains(&self.ends(*l).0))
            .collect();
        let gen_of: BTreeMap<u32, i32> = gens.iter().enumerate().map(|(k, &l)| (l, k as i32 + 1)).collect();
        let image = |w: &[u32]| -> Vec<i32> { w.iter().filter_map(|l| gen_of.get(l).copied()).collect() };
        let mut relators = Vec::new();
        for (l, r) in self.system.rules() {
            if !reached.contains(&self.ends(l[0]).0) {
                continue;
            }
            let mut rel = image(l);
            rel.extend(crate::presentation::invert(&image(r)));
            relators.push(rel);
        }
        Presentation::new(gens.len(), relators).simplify()
    }

    /// `φ(a·b) = φ(a)·φ(b)` for the covering morphism on given pairs.
    pub fn check_morphism(&self, pairs: &[(HolArrow, HolArrow)]) -> LawReport {
        let mut report = LawReport::new("covering map preserves composition");
        for (i, (a, b)) in pairs.iter().enumerate() {
            let ok = match self.compose(a, b) {
                Ok(ab) => {
                    let lhs = self.evaluate(&ab);
                    self.parent
                        .compose_ids(self.evaluate(a), self.evaluate(b))
                        .is_ok_and(|rhs| rhs == lhs)
                }
                Err(_) => false,
            };
            report.record(i, ok, || format!("pair #{i}: {a:?} then {b:?}"));
        }
        report
    }
}

impl Groupoid for HolonomyGroupoid {
    type Object = ObjectId;
    type Arrow = HolArrow;

    fn source(&self, a: &HolArrow) -> ObjectId {
        a.source
    }
    fn target(&self, a: &HolArrow) -> ObjectId {
        a.target
    }
    fn identity(&self, x: &ObjectId) -> HolArrow {
        HolArrow {
            source: *x,
            target: *x,
            word: Vec::new(),
        }
    }
    fn inverse(&self, a: &HolArrow) -> HolArrow {
        let w: Word = a.word.iter().rev().map(|&l| self.inverse_letter(l)).collect();
        HolArrow {
            source: a.target,
            target: a.source,
            word: self.system.reduce(&w),
        }
    }
    fn compose(&self, g: &HolArrow, h: &HolArrow) -> Result<HolArrow> {
        if g.target != h.source {
            return Err(Error::NonComposable(format!("{} then {}", g.target, h.source)));
        }
        let mut w = g.word.clone();
        w.extend_from_slice(&h.word);
        Ok(HolArrow {
            source: g.source,
            target: h.target,
            word: self.system.reduce(&w),
        })
    }
    fn arrows_equal(&self, a: &HolArrow, b: &HolArrow) -> bool {
        a == b
    }
}

/// `glob(S)`, the holonomy groupoid and its covering morphism.
#[derive(Clone, Debug)]
pub struct Globalisation {
    pub glob: Subgroupoid,
    pub hol: HolonomyGroupoid,
}

/// Default cap on rules during completion.
pub const MAX_RULES: usize = 20_000;

pub fn globalise(s: &LocalSubgroupoid, max_rules: usize) -> Result<Globalisation> {
    let parent = s.parent().clone();
    let glob = generated_subgroupoid(parent.clone(), s.atlas.iter().flat_map(|(_, h)| h.arrows().iter().copied()))?;
    let mut letters = Vec::new();
    for (i, (_, h)) in s.atlas.iter().enumerate() {
        for &g in h.arrows() {
            let (a, b) = parent.endpoints(g);
            if !(a == b && parent.identity_id(a) == g) {
                letters.push(Letter { piece: i, arrow: g });
            }
        }
    }
    letters.sort();
    let index: BTreeMap<Letter, u32> = letters.iter().enumerate().map(|(k, &l)| (l, k as u32)).collect();
    let mut equations: Vec<(Word, Word)> = Vec::new();
    for (i, (_, h)) in s.atlas.iter().enumerate() {
        for &g in h.arrows() {
            let Some(&lg) = index.get(&Letter { piece: i, arrow: g }) else { continue };
            let (_, t) = parent.endpoints(g);
            for &k in h.arrows() {
                if parent.endpoints(k).0 != t {
                    continue;
                }
                let Some(&lk) = index.get(&Letter { piece: i, arrow: k }) else { continue };
                let gk = parent.compose_ids(g, k)?;
                let rhs = index.get(&Letter { piece: i, arrow: gk }).map_or(Vec::new(), |&l| vec![l]);
                equations.push((vec![lg, lk], rhs));
            }
        }
    }
    for i in 0..s.atlas.len() {
        for j in i + 1..s.atlas.len() {
            let (ui, hi) = &s.atlas[i];
            let (uj, hj) = &s.atlas[j];
            for comp in s.site.components(ui & uj) {
                for &g in hi.arrows() {
                    let (a, b) = parent.endpoints(g);
                    if !contains(comp, a) || !contains(comp, b) || !hj.contains(g) {
                        continue;
                    }
                    if let (Some(&li), Some(&lj)) = (
                        index.get(&Letter { piece: i, arrow: g }),
                        index.get(&Letter { piece: j, arrow: g }),
                    ) {
                        equations.push((vec![lj], vec![li]));
                    }
                }
            }
        }
    }
    let mut system = RewriteSystem::new(equations);
    let completion = system.complete(max_rules)?;
    Ok(Globalisation {
        glob,
        hol: HolonomyGroupoid {
            parent,
            letters,
            index,
            system,
            completion,
        },
    })
}

/// Pair-groupoid pieces `𝔾|U_i` on every cover set of `site`.
pub fn pair_atlas(site: &FiniteSite) -> Result<LocalSubgroupoid> {
    let parent = Arc::new(FiniteGroupoid::pair((0..site.point_count()).map(|i| format!("p{i}"))));
    let atlas = site
        .cover_sets()
        .iter()
        .map(|&u| (u, Subgroupoid::full_on(parent.clone(), members(u))))
        .collect();
    LocalSubgroupoid::from_atlas(site.clone(), atlas)
}

/// Point set from a list, for callers outside this module.
pub fn point_set(points: &[usize]) -> PointSet {
    mask(points.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_two_arcs_has_free_holonomy() {
        let site = FiniteSite::circle(8, &[vec![0, 1, 2, 3, 4], vec![4, 5, 6, 7, 0]]).unwrap();
        let s = pair_atlas(&site).unwrap();
        let g = globalise(&s, MAX_RULES).unwrap();
        assert!(g.glob.vertex_group(0).unwrap().is_trivial());
        let p = g.hol.vertex_group(0);
        assert_eq!(p.to_string(), "⟨a |⟩");
    }

    #[test]
    fn interval_two_arcs_has_no_holonomy() {
        let site = FiniteSite::interval(8, &[vec![0, 1, 2, 3, 4], vec![3, 4, 5, 6, 7]]).unwrap();
        let s = pair_atlas(&site).unwrap();
        let g = globalise(&s, MAX_RULES).unwrap();
        assert_eq!(g.hol.vertex_group(0).to_string(), "⟨ |⟩");
        let words = g.hol.enumerate(3);
        assert!(words.values().all(|w| w.len() == 1), "{words:?}");
        assert_eq!(words.len(), 64);
    }
}
