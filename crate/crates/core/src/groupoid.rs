//! Finite groupoids, their subgroupoids, and the finite model of the
//! Ehresmann gauge groupoid of a U(1)-bundle.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Debug;
use std::sync::Arc;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::phase::Phase;

/// Partial composition over a set of objects. `compose(g, h)` is "g then h"
/// and is defined exactly when `target(g) == source(h)`.
pub trait Groupoid {
    type Object: Clone + Eq + Debug;
    type Arrow: Clone + Debug;

    fn source(&self, a: &Self::Arrow) -> Self::Object;
    fn target(&self, a: &Self::Arrow) -> Self::Object;
    fn identity(&self, x: &Self::Object) -> Self::Arrow;
    fn inverse(&self, a: &Self::Arrow) -> Self::Arrow;
    fn compose(&self, g: &Self::Arrow, h: &Self::Arrow) -> Result<Self::Arrow>;
    fn arrows_equal(&self, a: &Self::Arrow, b: &Self::Arrow) -> bool;
}

pub type ObjectId = usize;
pub type ArrowId = usize;

/// An arrow of a [`FiniteGroupoid`]. Gauge arrows carry their fiber phase.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrow {
    pub id: ArrowId,
    pub source: ObjectId,
    pub target: ObjectId,
    pub payload: Option<Phase>,
}

#[derive(Clone, Debug)]
enum Law {
    Pair,
    /// Fiber `Z/order`; `twist[x][y]` is the reference-frame offset between
    /// the fibers over `x` and `y`, in units of `1/order` turns.
    Gauge { order: i64, twist: Vec<Vec<i64>> },
    Table {
        arrows: Vec<(ObjectId, ObjectId)>,
        table: HashMap<(ArrowId, ArrowId), ArrowId>,
        identity: Vec<ArrowId>,
        inverse: Vec<ArrowId>,
    },
}

/// A groupoid with finitely many objects and arrows.
///
/// Arrow ids are canonical: pair arrows are `source * n + target`, gauge
/// arrows `(source * n + target) * order + k`, so equality of groupoids
/// built the same way is plain comparison.
#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    law: Law,
}

impl FiniteGroupoid {
    /// The pair (indiscrete) groupoid: one arrow between any two objects.
    pub fn pair<S: Into<String>>(objects: impl IntoIterator<Item = S>) -> Self {
        FiniteGroupoid {
            objects: objects.into_iter().map(Into::into).collect(),
            law: Law::Pair,
        }
    }

    /// Finite model of `P ×_G P ⇒ X` for a U(1)-bundle over `n_points`
    /// points with fiber discretised to `Z/order`.
    ///
    /// `twist[x][y]` fixes how the reference points of the fibers are
    /// related; composition is
    /// `(x→y, a)(y→z, b) = (x→z, a + b + t_xy + t_yz − t_xz)`.
    /// A zero twist gives pair groupoid × phase group.
    pub fn gauge(n_points: usize, order: i64, twist: Option<Vec<Vec<i64>>>) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::Invalid("gauge groupoid needs at least one point".into()));
        }
        if order < 1 {
            return Err(Error::Invalid("fiber order must be positive".into()));
        }
        let twist = twist.unwrap_or_else(|| vec![vec![0; n_points]; n_points]);
        if twist.len() != n_points || twist.iter().any(|r| r.len() != n_points) {
            return Err(Error::Invalid("twist table must be n × n".into()));
        }
        if (0..n_points).any(|x| twist[x][x].rem_euclid(order) != 0) {
            return Err(Error::Invalid("twist must vanish on the diagonal".into()));
        }
        Ok(FiniteGroupoid {
            objects: (0..n_points).map(|i| format!("x{i}")).collect(),
            law: Law::Gauge { order, twist },
        })
    }

    /// Same as [`FiniteGroupoid::gauge`] with explicit object names.
    pub fn gauge_named<S: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        order: i64,
    ) -> Result<Self> {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let mut g = Self::gauge(objects.len(), order, None)?;
        g.objects = objects;
        Ok(g)
    }

    /// A groupoid from an explicit composition table. Identities and
    /// inverses are derived and every law is checked exhaustively.
    pub fn from_table<S: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        arrows: Vec<(ObjectId, ObjectId)>,
        table: HashMap<(ArrowId, ArrowId), ArrowId>,
    ) -> Result<Self> {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let n = objects.len();
        for (i, &(s, t)) in arrows.iter().enumerate() {
            if s >= n || t >= n {
                return Err(Error::MalformedGroupoid(format!("arrow {i} has an unknown endpoint")));
            }
        }
        for g in 0..arrows.len() {
            for h in 0..arrows.len() {
                let composable = arrows[g].1 == arrows[h].0;
                match table.get(&(g, h)) {
                    Some(&k) if !composable => {
                        return Err(Error::MalformedGroupoid(format!(
                            "composite of non-composable {g},{h} is tabulated as {k}"
                        )))
                    }
                    None if composable => {
                        return Err(Error::MalformedGroupoid(format!("missing composite {g}∘{h}")))
                    }
                    Some(&k) if k >= arrows.len() || arrows[k] != (arrows[g].0, arrows[h].1) => {
                        return Err(Error::MalformedGroupoid(format!(
                            "composite {g}∘{h} has wrong endpoints"
                        )))
                    }
                    _ => {}
                }
            }
        }
        let mut identity = Vec::with_capacity(n);
        for x in 0..n {
            let e = (0..arrows.len()).find(|&e| {
                arrows[e] == (x, x)
                    && (0..arrows.len()).all(|g| {
                        (arrows[g].0 != x || table[&(e, g)] == g)
                            && (arrows[g].1 != x || table[&(g, e)] == g)
                    })
            });
            match e {
                Some(e) => identity.push(e),
                None => {
                    return Err(Error::MalformedGroupoid(format!("object {x} has no identity")))
                }
            }
        }
        let mut inverse = Vec::with_capacity(arrows.len());
        for g in 0..arrows.len() {
            let (s, t) = arrows[g];
            let inv = (0..arrows.len()).find(|&h| {
                arrows[h] == (t, s) && table[&(g, h)] == identity[s] && table[&(h, g)] == identity[t]
            });
            match inv {
                Some(h) => inverse.push(h),
                None => return Err(Error::MalformedGroupoid(format!("arrow {g} has no inverse"))),
            }
        }
        let g = FiniteGroupoid {
            objects,
            law: Law::Table {
                arrows,
                table,
                identity,
                inverse,
            },
        };
        g.check_laws().map_err(Error::MalformedGroupoid)?;
        Ok(g)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, name: &str) -> Result<ObjectId> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn fiber_order(&self) -> Option<i64> {
        match &self.law {
            Law::Gauge { order, .. } => Some(*order),
            _ => None,
        }
    }

    pub fn arrow_count(&self) -> usize {
        let n = self.objects.len();
        match &self.law {
            Law::Pair => n * n,
            Law::Gauge { order, .. } => n * n * *order as usize,
            Law::Table { arrows, .. } => arrows.len(),
        }
    }

    pub fn arrow(&self, id: ArrowId) -> Arrow {
        let n = self.objects.len();
        match &self.law {
            Law::Pair => Arrow {
                id,
                source: id / n,
                target: id % n,
                payload: None,
            },
            Law::Gauge { order, .. } => {
                let k = (id % *order as usize) as i64;
                let st = id / *order as usize;
                Arrow {
                    id,
                    source: st / n,
                    target: st % n,
                    payload: Some(Phase::from_turns(k, *order)),
                }
            }
            Law::Table { arrows, .. } => Arrow {
                id,
                source: arrows[id].0,
                target: arrows[id].1,
                payload: None,
            },
        }
    }

    pub fn endpoints(&self, id: ArrowId) -> (ObjectId, ObjectId) {
        let a = self.arrow(id);
        (a.source, a.target)
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        (0..self.arrow_count()).map(|i| self.arrow(i))
    }

    /// Arrows `x → y`.
    pub fn hom(&self, x: ObjectId, y: ObjectId) -> Vec<ArrowId> {
        let n = self.objects.len();
        match &self.law {
            Law::Pair => vec![x * n + y],
            Law::Gauge { order, .. } => {
                let base = (x * n + y) * *order as usize;
                (base..base + *order as usize).collect()
            }
            Law::Table { arrows, .. } => (0..arrows.len()).filter(|&i| arrows[i] == (x, y)).collect(),
        }
    }

    /// The gauge arrow `x → y` carrying `k/order` turns.
    pub fn gauge_arrow(&self, x: ObjectId, y: ObjectId, turns: Rational64) -> Result<ArrowId> {
        let n = self.objects.len();
        match &self.law {
            Law::Gauge { order, .. } => {
                let scaled = turns * Rational64::from_integer(*order);
                if !scaled.is_integer() {
                    return Err(Error::Invalid(format!(
                        "phase {turns} is not a multiple of 1/{order}"
                    )));
                }
                let k = scaled.to_integer().rem_euclid(*order) as usize;
                Ok((x * n + y) * *order as usize + k)
            }
            _ => Err(Error::Invalid("not a gauge groupoid".into())),
        }
    }

    pub fn identity_id(&self, x: ObjectId) -> ArrowId {
        let n = self.objects.len();
        match &self.law {
            Law::Pair => x * n + x,
            Law::Gauge { order, .. } => (x * n + x) * *order as usize,
            Law::Table { identity, .. } => identity[x],
        }
    }

    pub fn inverse_id(&self, g: ArrowId) -> ArrowId {
        let n = self.objects.len();
        match &self.law {
            Law::Pair => {
                let (s, t) = (g / n, g % n);
                t * n + s
            }
            Law::Gauge { order, twist } => {
                let o = *order as usize;
                let k = (g % o) as i64;
                let (s, t) = ((g / o) / n, (g / o) % n);
                let kinv = (-k - twist[s][t] - twist[t][s]).rem_euclid(*order);
                (t * n + s) * o + kinv as usize
            }
            Law::Table { inverse, .. } => inverse[g],
        }
    }

    pub fn compose_ids(&self, g: ArrowId, h: ArrowId) -> Result<ArrowId> {
        let (gs, gt) = self.endpoints(g);
        let (hs, ht) = self.endpoints(h);
        if gt != hs {
            return Err(Error::NonComposable(format!(
                "target of arrow {g} is {} but source of arrow {h} is {}",
                self.objects[gt], self.objects[hs]
            )));
        }
        let n = self.objects.len();
        Ok(match &self.law {
            Law::Pair => gs * n + ht,
            Law::Gauge { order, twist } => {
                let o = *order as usize;
                let a = (g % o) as i64;
                let b = (h % o) as i64;
                let k = (a + b + twist[gs][gt] + twist[gt][ht] - twist[gs][ht]).rem_euclid(*order);
                (gs * n + ht) * o + k as usize
            }
            Law::Table { table, .. } => table[&(g, h)],
        })
    }

    /// Exhaustive check of associativity, identity and inverse laws.
    pub fn check_laws(&self) -> std::result::Result<(), String> {
        let m = self.arrow_count();
        let mut out_of: Vec<Vec<ArrowId>> = vec![Vec::new(); self.objects.len()];
        for a in self.arrows() {
            out_of[a.source].push(a.id);
        }
        for g in 0..m {
            let (s, t) = self.endpoints(g);
            let e_s = self.identity_id(s);
            let e_t = self.identity_id(t);
            if self.compose_ids(e_s, g).ok() != Some(g) || self.compose_ids(g, e_t).ok() != Some(g) {
                return Err(format!("identity law fails at arrow {g}"));
            }
            let inv = self.inverse_id(g);
            if self.compose_ids(g, inv).ok() != Some(e_s) || self.compose_ids(inv, g).ok() != Some(e_t)
            {
                return Err(format!("inverse law fails at arrow {g}"));
            }
            for &h in &out_of[t] {
                let gh = self.compose_ids(g, h).map_err(|e| e.to_string())?;
                let ht = self.endpoints(h).1;
                for &k in &out_of[ht] {
                    let left = self.compose_ids(gh, k).map_err(|e| e.to_string())?;
                    let hk = self.compose_ids(h, k).map_err(|e| e.to_string())?;
                    let right = self.compose_ids(g, hk).map_err(|e| e.to_string())?;
                    if left != right {
                        return Err(format!("associativity fails at ({g},{h},{k})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Arrows `x → x` with their multiplication table.
    pub fn vertex_group(&self, x: ObjectId) -> Result<VertexGroup> {
        if x >= self.objects.len() {
            return Err(Error::UnknownObject(format!("#{x}")));
        }
        VertexGroup::from_elements(self, x, self.hom(x, x))
    }
}

impl Groupoid for FiniteGroupoid {
    type Object = ObjectId;
    type Arrow = ArrowId;

    fn source(&self, a: &ArrowId) -> ObjectId {
        self.endpoints(*a).0
    }
    fn target(&self, a: &ArrowId) -> ObjectId {
        self.endpoints(*a).1
    }
    fn identity(&self, x: &ObjectId) -> ArrowId {
        self.identity_id(*x)
    }
    fn inverse(&self, a: &ArrowId) -> ArrowId {
        self.inverse_id(*a)
    }
    fn compose(&self, g: &ArrowId, h: &ArrowId) -> Result<ArrowId> {
        self.compose_ids(*g, *h)
    }
    fn arrows_equal(&self, a: &ArrowId, b: &ArrowId) -> bool {
        a == b
    }
}

/// Free-standing `compose` on a finite groupoid.
pub fn compose(g: ArrowId, h: ArrowId, groupoid: &FiniteGroupoid) -> Result<ArrowId> {
    groupoid.compose_ids(g, h)
}

/// A finite vertex group `G(x, x)` with an explicit multiplication table
/// over indices into `elements`.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexGroup {
    pub object: ObjectId,
    pub elements: Vec<ArrowId>,
    pub table: Vec<Vec<usize>>,
}

impl VertexGroup {
    fn from_elements(g: &FiniteGroupoid, x: ObjectId, elements: Vec<ArrowId>) -> Result<Self> {
        let index: HashMap<ArrowId, usize> = elements.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut table = vec![vec![0; elements.len()]; elements.len()];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                let c = g.compose_ids(a, b)?;
                table[i][j] = *index
                    .get(&c)
                    .ok_or_else(|| Error::MalformedGroupoid("vertex group not closed".into()))?;
            }
        }
        Ok(VertexGroup {
            object: x,
            elements,
            table,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// A subgroupoid of a finite groupoid, given by object and arrow subsets.
#[derive(Clone, Debug)]
pub struct Subgroupoid {
    parent: Arc<FiniteGroupoid>,
    objects: BTreeSet<ObjectId>,
    arrows: BTreeSet<ArrowId>,
}

impl PartialEq for Subgroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.arrows == other.arrows
    }
}

impl Eq for Subgroupoid {}

impl Subgroupoid {
    /// Checked constructor: the arrow set must be closed under
    /// composition, identities and inverses over the given objects.
    pub fn new(
        parent: Arc<FiniteGroupoid>,
        objects: BTreeSet<ObjectId>,
        arrows: BTreeSet<ArrowId>,
    ) -> Result<Self> {
        let s = Subgroupoid {
            parent,
            objects,
            arrows,
        };
        s.check_closed()?;
        Ok(s)
    }

    fn check_closed(&self) -> Result<()> {
        let p = &self.parent;
        for &x in &self.objects {
            if x >= p.object_count() {
                return Err(Error::UnknownObject(format!("#{x}")));
            }
            if !self.arrows.contains(&p.identity_id(x)) {
                return Err(Error::MalformedGroupoid(format!("identity of {} missing", p.objects()[x])));
            }
        }
        let by_source = self.by_source();
        for &g in &self.arrows {
            let (s, t) = p.endpoints(g);
            if !self.objects.contains(&s) || !self.objects.contains(&t) {
                return Err(Error::MalformedGroupoid(format!("arrow {g} leaves the object set")));
            }
            if !self.arrows.contains(&p.inverse_id(g)) {
                return Err(Error::MalformedGroupoid(format!("inverse of arrow {g} missing")));
            }
            for &h in by_source.get(&t).into_iter().flatten() {
                if !self.arrows.contains(&p.compose_ids(g, h)?) {
                    return Err(Error::MalformedGroupoid(format!("composite {g}∘{h} missing")));
                }
            }
        }
        Ok(())
    }

    fn by_source(&self) -> BTreeMap<ObjectId, Vec<ArrowId>> {
        let mut m: BTreeMap<ObjectId, Vec<ArrowId>> = BTreeMap::new();
        for &g in &self.arrows {
            m.entry(self.parent.endpoints(g).0).or_default().push(g);
        }
        m
    }

    /// Identities only, over the given objects.
    pub fn discrete(parent: Arc<FiniteGroupoid>, objects: BTreeSet<ObjectId>) -> Self {
        let arrows = objects.iter().map(|&x| parent.identity_id(x)).collect();
        Subgroupoid {
            parent,
            objects,
            arrows,
        }
    }

    /// The full subgroupoid `G|U`.
    pub fn full_on(parent: Arc<FiniteGroupoid>, objects: BTreeSet<ObjectId>) -> Self {
        let mut arrows = BTreeSet::new();
        for &x in &objects {
            for &y in &objects {
                arrows.extend(parent.hom(x, y));
            }
        }
        Subgroupoid {
            parent,
            objects,
            arrows,
        }
    }

    /// Smallest subgroupoid on `objects` containing the generators and all
    /// identities there.
    pub fn generated_on(
        parent: Arc<FiniteGroupoid>,
        objects: BTreeSet<ObjectId>,
        generators: impl IntoIterator<Item = ArrowId>,
    ) -> Result<Self> {
        let mut arrows: BTreeSet<ArrowId> = BTreeSet::new();
        let mut by_source: Vec<Vec<ArrowId>> = vec![Vec::new(); parent.object_count()];
        let mut by_target: Vec<Vec<ArrowId>> = vec![Vec::new(); parent.object_count()];
        let mut queue: VecDeque<ArrowId> = VecDeque::new();
        let push = |g: ArrowId,
                        arrows: &mut BTreeSet<ArrowId>,
                        by_source: &mut Vec<Vec<ArrowId>>,
                        by_target: &mut Vec<Vec<ArrowId>>,
                        queue: &mut VecDeque<ArrowId>| {
            if arrows.insert(g) {
                let (s, t) = parent.endpoints(g);
                by_source[s].push(g);
                by_target[t].push(g);
                queue.push_back(g);
            }
        };
        for &x in &objects {
            if x >= parent.object_count() {
                return Err(Error::UnknownObject(format!("#{x}")));
            }
            push(parent.identity_id(x), &mut arrows, &mut by_source, &mut by_target, &mut queue);
        }
        for g in generators {
            if g >= parent.arrow_count() {
                return Err(Error::UnknownArrow(format!("#{g}")));
            }
            let (s, t) = parent.endpoints(g);
            if !objects.contains(&s) || !objects.contains(&t) {
                return Err(Error::Invalid(format!("generator {g} leaves the object set")));
            }
            push(g, &mut arrows, &mut by_source, &mut by_target, &mut queue);
        }
        while let Some(g) = queue.pop_front() {
            let inv = parent.inverse_id(g);
            push(inv, &mut arrows, &mut by_source, &mut by_target, &mut queue);
            let (s, t) = parent.endpoints(g);
            let after: Vec<ArrowId> = by_source[t].clone();
            for h in after {
                let gh = parent.compose_ids(g, h)?;
                push(gh, &mut arrows, &mut by_source, &mut by_target, &mut queue);
            }
            let before: Vec<ArrowId> = by_target[s].clone();
            for h in before {
                let hg = parent.compose_ids(h, g)?;
                push(hg, &mut arrows, &mut by_source, &mut by_target, &mut queue);
            }
        }
        Ok(Subgroupoid {
            parent,
            objects,
            arrows,
        })
    }

    pub fn parent(&self) -> &Arc<FiniteGroupoid> {
        &self.parent
    }

    pub fn objects(&self) -> &BTreeSet<ObjectId> {
        &self.objects
    }

    pub fn arrows(&self) -> &BTreeSet<ArrowId> {
        &self.arrows
    }

    pub fn contains(&self, g: ArrowId) -> bool {
        self.arrows.contains(&g)
    }

    /// `H|W`: objects in `W`, arrows with both endpoints in `W`.
    pub fn restrict(&self, w: &BTreeSet<ObjectId>) -> Subgroupoid {
        let objects: BTreeSet<ObjectId> = self.objects.intersection(w).copied().collect();
        let arrows = self
            .arrows
            .iter()
            .copied()
            .filter(|&g| {
                let (s, t) = self.parent.endpoints(g);
                objects.contains(&s) && objects.contains(&t)
            })
            .collect();
        Subgroupoid {
            parent: self.parent.clone(),
            objects,
            arrows,
        }
    }

    /// Wide relative to the full parent.
    pub fn is_wide(&self) -> bool {
        self.objects.len() == self.parent.object_count()
    }

    /// Wide relative to `G|U`.
    pub fn is_wide_in(&self, u: &BTreeSet<ObjectId>) -> bool {
        &self.objects == u
    }

    /// Contains every parent arrow between its objects.
    pub fn is_full(&self) -> bool {
        self.objects
            .iter()
            .all(|&x| self.objects.iter().all(|&y| self.parent.hom(x, y).iter().all(|g| self.arrows.contains(g))))
    }

    pub fn vertex_group(&self, x: ObjectId) -> Result<VertexGroup> {
        if !self.objects.contains(&x) {
            return Err(Error::UnknownObject(
                self.parent.objects().get(x).cloned().unwrap_or_else(|| format!("#{x}")),
            ));
        }
        let elements = self
            .parent
            .hom(x, x)
            .into_iter()
            .filter(|g| self.arrows.contains(g))
            .collect();
        VertexGroup::from_elements(&self.parent, x, elements)
    }

    /// Union of arrow sets followed by closure.
    pub fn join(&self, other: &Subgroupoid) -> Result<Subgroupoid> {
        let objects = self.objects.union(&other.objects).copied().collect();
        Subgroupoid::generated_on(
            self.parent.clone(),
            objects,
            self.arrows.iter().chain(other.arrows.iter()).copied(),
        )
    }
}

/// Smallest wide subgroupoid containing `generators`.
pub fn generated_subgroupoid(
    parent: Arc<FiniteGroupoid>,
    generators: impl IntoIterator<Item = ArrowId>,
) -> Result<Subgroupoid> {
    let objects = (0..parent.object_count()).collect();
    Subgroupoid::generated_on(parent, objects, generators)
}

/// Object-indexed `gauge_groupoid(n_points, fiber_phases)`.
pub fn gauge_groupoid(n_points: usize, order: i64, twist: Option<Vec<Vec<i64>>>) -> Result<FiniteGroupoid> {
    FiniteGroupoid::gauge(n_points, order, twist)
}

/// An arrow `source → target` of a [`PhaseGroupoid`].
#[derive(Clone, Debug)]
pub struct PhaseArrow<O> {
    pub source: O,
    pub target: O,
    pub phase: Phase,
}

/// The gauge groupoid of a trivialised U(1)-bundle over an arbitrary object
/// type: arrows are `(x, y, phase)` and phases add under composition.
#[derive(Clone, Debug)]
pub struct PhaseGroupoid<O> {
    pub tolerance: f64,
    _marker: std::marker::PhantomData<O>,
}

impl<O> PhaseGroupoid<O> {
    pub fn new(tolerance: f64) -> Self {
        PhaseGroupoid {
            tolerance,
            _marker: std::marker::PhantomData,
        }
    }
}

impl<O: Clone + Eq + Debug> Groupoid for PhaseGroupoid<O> {
    type Object = O;
    type Arrow = PhaseArrow<O>;

    fn source(&self, a: &PhaseArrow<O>) -> O {
        a.source.clone()
    }
    fn target(&self, a: &PhaseArrow<O>) -> O {
        a.target.clone()
    }
    fn identity(&self, x: &O) -> PhaseArrow<O> {
        PhaseArrow {
            source: x.clone(),
            target: x.clone(),
            phase: Phase::zero(),
        }
    }
    fn inverse(&self, a: &PhaseArrow<O>) -> PhaseArrow<O> {
        PhaseArrow {
            source: a.target.clone(),
            target: a.source.clone(),
            phase: -a.phase,
        }
    }
    fn compose(&self, g: &PhaseArrow<O>, h: &PhaseArrow<O>) -> Result<PhaseArrow<O>> {
        if g.target != h.source {
            return Err(Error::NonComposable(format!("{:?} then {:?}", g.target, h.source)));
        }
        Ok(PhaseArrow {
            source: g.source.clone(),
            target: h.target.clone(),
            phase: g.phase + h.phase,
        })
    }
    fn arrows_equal(&self, a: &PhaseArrow<O>, b: &PhaseArrow<O>) -> bool {
        a.source == b.source && a.target == b.target && a.phase.approx_eq(&b.phase, self.tolerance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| ["a", "b", "c", "d", "e"][i].to_string()).collect()
    }

    #[test]
    fn pair_groupoid_composition() {
        let g = FiniteGroupoid::pair(names(3));
        let ab = g.hom(0, 1)[0];
        let bc = g.hom(1, 2)[0];
        let ac = compose(ab, bc, &g).unwrap();
        assert_eq!(g.endpoints(ac), (0, 2));
        assert!(matches!(compose(bc, ab, &g), Err(Error::NonComposable(_))));
        g.check_laws().unwrap();
    }

    #[test]
    fn gauge_payloads_add() {
        let g = FiniteGroupoid::gauge(2, 12, None).unwrap();
        let a = g.gauge_arrow(0, 1, Rational64::new(1, 4)).unwrap();
        let b = g.gauge_arrow(1, 0, Rational64::new(1, 3)).unwrap();
        let c = g.compose_ids(a, b).unwrap();
        let arrow = g.arrow(c);
        assert_eq!((arrow.source, arrow.target), (0, 0));
        assert_eq!(arrow.payload.unwrap().turns(), Some(Rational64::new(7, 12)));
    }

    #[test]
    fn twisted_gauge_groupoid_satisfies_laws() {
        let twist = vec![vec![0, 1, 3], vec![2, 0, 5], vec![1, 4, 0]];
        let g = FiniteGroupoid::gauge(3, 6, Some(twist)).unwrap();
        g.check_laws().unwrap();
        assert!(FiniteGroupoid::gauge(2, 4, Some(vec![vec![1, 0], vec![0, 0]])).is_err());
    }

    #[test]
    fn single_point_vertex_group_is_the_phase_group() {
        let g = FiniteGroupoid::gauge(1, 5, None).unwrap();
        let vg = g.vertex_group(0).unwrap();
        assert_eq!(vg.order(), 5);
        for i in 0..5 {
            for j in 0..5 {
                let k = vg.table[i][j];
                let pi = g.arrow(vg.elements[i]).payload.unwrap();
                let pj = g.arrow(vg.elements[j]).payload.unwrap();
                let pk = g.arrow(vg.elements[k]).payload.unwrap();
                assert_eq!((pi + pj).turns(), pk.turns());
            }
        }
    }

    #[test]
    fn generated_from_nothing_is_discrete() {
        let g = Arc::new(FiniteGroupoid::pair(names(4)));
        let s = generated_subgroupoid(g.clone(), []).unwrap();
        assert!(s.is_wide());
        assert!(!s.is_full());
        assert_eq!(s.arrows().len(), 4);
    }

    #[test]
    fn generated_from_a_path_is_everything() {
        let g = Arc::new(FiniteGroupoid::pair(names(4)));
        let gens = [g.hom(0, 1)[0], g.hom(1, 2)[0], g.hom(2, 3)[0]];
        let s = generated_subgroupoid(g.clone(), gens).unwrap();
        assert_eq!(s.arrows().len(), 16);
        assert!(s.is_full());
    }

    #[test]
    fn generated_vertex_group_contains_sixth_turn() {
        let g = Arc::new(FiniteGroupoid::gauge(2, 12, None).unwrap());
        let a = g.gauge_arrow(0, 1, Rational64::new(1, 2)).unwrap();
        let b = g.gauge_arrow(0, 1, Rational64::new(1, 3)).unwrap();
        let s = generated_subgroupoid(g.clone(), [a, b]).unwrap();
        let vg = s.vertex_group(0).unwrap();
        let phases: Vec<Rational64> = vg
            .elements
            .iter()
            .map(|&e| g.arrow(e).payload.unwrap().turns().unwrap())
            .collect();
        assert!(phases.contains(&Rational64::new(1, 6)));
        assert_eq!(vg.order(), 6);
    }

    #[test]
    fn generation_is_idempotent_and_monotone() {
        let g = Arc::new(FiniteGroupoid::gauge(3, 4, None).unwrap());
        let a = g.gauge_arrow(0, 1, Rational64::new(1, 4)).unwrap();
        let b = g.gauge_arrow(1, 2, Rational64::new(1, 2)).unwrap();
        let s1 = generated_subgroupoid(g.clone(), [a]).unwrap();
        let s2 = generated_subgroupoid(g.clone(), s1.arrows().iter().copied()).unwrap();
        assert_eq!(s1, s2);
        let s3 = generated_subgroupoid(g.clone(), [a, b]).unwrap();
        assert!(s1.arrows().is_subset(s3.arrows()));
    }

    #[test]
    fn restriction_of_full_is_full() {
        let g = Arc::new(FiniteGroupoid::gauge(4, 3, None).unwrap());
        let u: BTreeSet<_> = [0, 2, 3].into_iter().collect();
        let s = Subgroupoid::full_on(g.clone(), u.clone());
        assert!(s.is_full());
        assert!(s.is_wide_in(&u));
        assert!(!s.is_wide());
        Subgroupoid::new(g.clone(), u, s.arrows().clone()).unwrap();
        assert!(matches!(s.vertex_group(1), Err(Error::UnknownObject(_))));
    }

    #[test]
    fn table_groupoid_is_validated() {
        // Z/2 as a one-object groupoid.
        let mut table = HashMap::new();
        table.insert((0, 0), 0);
        table.insert((0, 1), 1);
        table.insert((1, 0), 1);
        table.insert((1, 1), 0);
        let g = FiniteGroupoid::from_table(["*"], vec![(0, 0), (0, 0)], table.clone()).unwrap();
        assert_eq!(g.inverse_id(1), 1);
        table.insert((1, 1), 1);
        assert!(FiniteGroupoid::from_table(["*"], vec![(0, 0), (0, 0)], table).is_err());
    }
}
