//! Double groupoids, connection pairs `(Υ, Hol)` and the transport law.
//!
//! Squares are drawn with horizontal edges on top and bottom and vertical
//! edges on the sides:
//!
//! ```text
//!   x ──up──▶ y
//!   │         │
//! left      right
//!   ▼         ▼
//!   z ─down─▶ w
//! ```
//!
//! `compose1` stacks `s` above `t` (needs `down(s) = up(t)`), `compose2`
//! places `s` left of `t` (needs `right(s) = left(t)`). `eps1(h)` is the
//! square with `up = down = h` and identity sides; `eps2(v)` has
//! `left = right = v` and identity top and bottom.

use std::fmt::Debug;

use crate::error::Result;
use crate::groupoid::{Groupoid, PhaseArrow, PhaseGroupoid};
use crate::phase::Phase;

pub type HArrow<D> = <<D as DoubleGroupoid>::H as Groupoid>::Arrow;
pub type VArrow<D> = <<D as DoubleGroupoid>::V as Groupoid>::Arrow;
pub type Point<D> = <<D as DoubleGroupoid>::H as Groupoid>::Object;

pub trait DoubleGroupoid {
    type H: Groupoid;
    type V: Groupoid<Object = <Self::H as Groupoid>::Object>;
    type Square: Clone + Debug;

    fn horizontal(&self) -> &Self::H;
    fn vertical(&self) -> &Self::V;

    fn up(&self, s: &Self::Square) -> HArrow<Self>;
    fn down(&self, s: &Self::Square) -> HArrow<Self>;
    fn left(&self, s: &Self::Square) -> VArrow<Self>;
    fn right(&self, s: &Self::Square) -> VArrow<Self>;

    fn compose1(&self, s: &Self::Square, t: &Self::Square) -> Result<Self::Square>;
    fn compose2(&self, s: &Self::Square, t: &Self::Square) -> Result<Self::Square>;
    fn eps1(&self, h: &HArrow<Self>) -> Self::Square;
    fn eps2(&self, v: &VArrow<Self>) -> Self::Square;

    fn squares_equal(&self, s: &Self::Square, t: &Self::Square) -> bool;

    /// Corner compatibility of the four bounding edges.
    fn boundary_consistent(&self, s: &Self::Square) -> bool {
        let h = self.horizontal();
        let v = self.vertical();
        let (u, d, l, r) = (self.up(s), self.down(s), self.left(s), self.right(s));
        h.source(&u) == v.source(&l)
            && h.target(&u) == v.source(&r)
            && v.target(&l) == h.source(&d)
            && v.target(&r) == h.target(&d)
    }
}

/// A double groupoid whose squares can be listed.
pub trait FiniteDouble: DoubleGroupoid {
    fn squares(&self) -> Vec<Self::Square>;
    fn horizontal_arrows(&self) -> Vec<HArrow<Self>>;
    fn vertical_arrows(&self) -> Vec<VArrow<Self>>;
}

/// `(Υ, Hol)`: a functor `Hol: V → H` and a square-valued transport
/// `Υ: V → D`.
pub struct ConnectionPair<'a, D: DoubleGroupoid + ?Sized> {
    hol: Box<dyn Fn(&VArrow<D>) -> HArrow<D> + Send + Sync + 'a>,
    ups: Box<dyn Fn(&VArrow<D>) -> D::Square + Send + Sync + 'a>,
}

impl<'a, D: DoubleGroupoid + ?Sized> ConnectionPair<'a, D> {
    pub fn new(
        hol: impl Fn(&VArrow<D>) -> HArrow<D> + Send + Sync + 'a,
        ups: impl Fn(&VArrow<D>) -> D::Square + Send + Sync + 'a,
    ) -> Self {
        ConnectionPair {
            hol: Box::new(hol),
            ups: Box::new(ups),
        }
    }

    pub fn hol(&self, a: &VArrow<D>) -> HArrow<D> {
        (self.hol)(a)
    }

    pub fn upsilon(&self, a: &VArrow<D>) -> D::Square {
        (self.ups)(a)
    }
}

/// The first counterexample found by a law sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    /// Position of the offending item in the swept sequence.
    pub index: usize,
    pub detail: String,
}

/// Outcome of a law sweep over a finite set of instances.
#[derive(Clone, Debug, PartialEq)]
pub struct LawReport {
    pub law: String,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<Counterexample>,
}

impl LawReport {
    pub fn new(law: impl Into<String>) -> Self {
        LawReport {
            law: law.into(),
            checked: 0,
            failures: 0,
            first_failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn record(&mut self, index: usize, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(Counterexample {
                    index,
                    detail: detail(),
                });
            }
        }
    }

    /// Combine two reports on disjoint parts of a sweep; `other` comes
    /// after `self` in sweep order.
    pub fn merge(mut self, other: LawReport) -> LawReport {
        self.checked += other.checked;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        self
    }
}

/// Checks, for every `a` appearing in `pairs`, that `Υ(a)` has boundary
/// `(Hol(a), a, e_y, f_y)`, and for every composable `(a, b)` that
///
/// ```text
/// Υ(a∘b) = [ Υ(a)   ε₁(Hol b) ]
///          [ ε₂(b)  Υ(b)      ]
/// ```
///
/// The right side is evaluated row by row (`∘₂` then `∘₁`).
pub fn check_transport_law<D: DoubleGroupoid + ?Sized>(
    cp: &ConnectionPair<'_, D>,
    d: &D,
    pairs: &[(VArrow<D>, VArrow<D>)],
) -> LawReport {
    let mut report = LawReport::new("transport law");
    for (i, (a, b)) in pairs.iter().enumerate() {
        let (ok, detail) = transport_law_instance(cp, d, a, b);
        report.record(i, ok, || detail);
    }
    report
}

/// One instance of the transport law, with a description of what failed.
pub fn transport_law_instance<D: DoubleGroupoid + ?Sized>(
    cp: &ConnectionPair<'_, D>,
    d: &D,
    a: &VArrow<D>,
    b: &VArrow<D>,
) -> (bool, String) {
    for (name, arrow) in [("a", a), ("b", b)] {
        if let Err(e) = check_connection_boundary(cp, d, arrow) {
            return (false, format!("boundary of Υ({name}) = Υ({arrow:?}): {e}"));
        }
    }
    let v = d.vertical();
    let ab = match v.compose(a, b) {
        Ok(ab) => ab,
        Err(e) => return (false, format!("pair not composable: {e}")),
    };
    let lhs = cp.upsilon(&ab);
    let top = d.compose2(&cp.upsilon(a), &d.eps1(&cp.hol(b)));
    let bottom = d.compose2(&d.eps2(b), &cp.upsilon(b));
    let rhs = match (top, bottom) {
        (Ok(t), Ok(bt)) => d.compose1(&t, &bt),
        (Err(e), _) | (_, Err(e)) => return (false, format!("2×2 grid not composable: {e}")),
    };
    match rhs {
        Ok(rhs) if d.squares_equal(&lhs, &rhs) => (true, String::new()),
        Ok(rhs) => (
            false,
            format!("Υ(a∘b) = {lhs:?} differs from grid composite {rhs:?} for a = {a:?}, b = {b:?}"),
        ),
        Err(e) => (false, format!("grid rows not composable: {e}")),
    }
}

/// Boundary condition `Υ(a) = (up Hol(a), left a, right e_y, down f_y)`.
pub fn check_connection_boundary<D: DoubleGroupoid + ?Sized>(
    cp: &ConnectionPair<'_, D>,
    d: &D,
    a: &VArrow<D>,
) -> std::result::Result<(), String> {
    let h = d.horizontal();
    let v = d.vertical();
    let s = cp.upsilon(a);
    let y = v.target(a);
    if !h.arrows_equal(&d.up(&s), &cp.hol(a)) {
        return Err(format!("up edge {:?} is not Hol(a) = {:?}", d.up(&s), cp.hol(a)));
    }
    if !v.arrows_equal(&d.left(&s), a) {
        return Err("left edge is not a".into());
    }
    if !v.arrows_equal(&d.right(&s), &v.identity(&y)) {
        return Err("right edge is not the vertical identity at the target".into());
    }
    if !h.arrows_equal(&d.down(&s), &h.identity(&y)) {
        return Err("down edge is not the horizontal identity at the target".into());
    }
    Ok(())
}

/// Interchange on one 2×2 grid `[a c; b d]`:
/// `(a ∘₁ b) ∘₂ (c ∘₁ d) = (a ∘₂ c) ∘₁ (b ∘₂ d)`. Returns `None` when the
/// grid is not composable.
pub fn interchange_holds<D: DoubleGroupoid + ?Sized>(
    dg: &D,
    a: &D::Square,
    b: &D::Square,
    c: &D::Square,
    d: &D::Square,
) -> Option<bool> {
    let cols = dg
        .compose1(a, b)
        .and_then(|ab| dg.compose1(c, d).and_then(|cd| dg.compose2(&ab, &cd)));
    let rows = dg
        .compose2(a, c)
        .and_then(|ac| dg.compose2(b, d).and_then(|bd| dg.compose1(&ac, &bd)));
    match (cols, rows) {
        (Ok(x), Ok(y)) => Some(dg.squares_equal(&x, &y)),
        _ => None,
    }
}

/// Exhaustive interchange sweep over every composable 2×2 grid of a finite
/// double groupoid. Stops with an error report once `budget` grids have
/// been visited.
pub fn check_interchange_exhaustive<D: FiniteDouble>(dg: &D, budget: usize) -> LawReport {
    let squares = dg.squares();
    let h = dg.horizontal();
    let v = dg.vertical();
    let mut report = LawReport::new("interchange");
    let mut index = 0usize;
    for a in &squares {
        for c in squares.iter().filter(|c| v.arrows_equal(&dg.left(c), &dg.right(a))) {
            for b in squares.iter().filter(|b| h.arrows_equal(&dg.up(b), &dg.down(a))) {
                for d in squares.iter().filter(|d| {
                    h.arrows_equal(&dg.up(d), &dg.down(c)) && v.arrows_equal(&dg.left(d), &dg.right(b))
                }) {
                    if index >= budget {
                        report.record(index, false, || format!("budget of {budget} grids exceeded"));
                        return report;
                    }
                    let ok = interchange_holds(dg, a, b, c, d).unwrap_or(false);
                    report.record(index, ok, || format!("grid [{a:?} {c:?}; {b:?} {d:?}]"));
                    index += 1;
                }
            }
        }
    }
    report
}

/// Associativity of both compositions over all composable triples.
pub fn check_associativity_exhaustive<D: FiniteDouble>(dg: &D) -> LawReport {
    let squares = dg.squares();
    let h = dg.horizontal();
    let v = dg.vertical();
    let mut report = LawReport::new("associativity");
    let mut index = 0;
    for s in &squares {
        for t in squares.iter().filter(|t| h.arrows_equal(&dg.up(t), &dg.down(s))) {
            for u in squares.iter().filter(|u| h.arrows_equal(&dg.up(u), &dg.down(t))) {
                let lhs = dg.compose1(s, t).and_then(|st| dg.compose1(&st, u));
                let rhs = dg.compose1(t, u).and_then(|tu| dg.compose1(s, &tu));
                let ok = matches!((&lhs, &rhs), (Ok(x), Ok(y)) if dg.squares_equal(x, y));
                report.record(index, ok, || format!("∘₁ on {s:?}, {t:?}, {u:?}"));
                index += 1;
            }
        }
        for t in squares.iter().filter(|t| v.arrows_equal(&dg.left(t), &dg.right(s))) {
            for u in squares.iter().filter(|u| v.arrows_equal(&dg.left(u), &dg.right(t))) {
                let lhs = dg.compose2(s, t).and_then(|st| dg.compose2(&st, u));
                let rhs = dg.compose2(t, u).and_then(|tu| dg.compose2(s, &tu));
                let ok = matches!((&lhs, &rhs), (Ok(x), Ok(y)) if dg.squares_equal(x, y));
                report.record(index, ok, || format!("∘₂ on {s:?}, {t:?}, {u:?}"));
                index += 1;
            }
        }
    }
    report
}

/// A square with phase-valued horizontal edges, vertical edges from an
/// arbitrary groupoid, and an abelian phase payload.
#[derive(Clone, Debug)]
pub struct PhaseSquare<O, A> {
    pub up: PhaseArrow<O>,
    pub down: PhaseArrow<O>,
    pub left: A,
    pub right: A,
    pub payload: Phase,
}

/// Double groupoid whose horizontal edges form the gauge groupoid of a
/// trivialised U(1)-bundle and whose vertical edges come from `V`.
/// Payloads add under both compositions.
#[derive(Clone, Debug)]
pub struct PhaseDouble<V: Groupoid> {
    horizontal: PhaseGroupoid<V::Object>,
    vertical: V,
}

impl<V: Groupoid> PhaseDouble<V> {
    pub fn new(vertical: V, tolerance: f64) -> Self {
        PhaseDouble {
            horizontal: PhaseGroupoid::new(tolerance),
            vertical,
        }
    }

    /// The connection pair induced by a holonomy functor: `Υ(a)` is the
    /// thin square `(Hol a, a, e_y, f_y)`.
    pub fn connection_pair<'a>(
        &'a self,
        hol: impl Fn(&V::Arrow) -> PhaseArrow<V::Object> + Send + Sync + Clone + 'a,
    ) -> ConnectionPair<'a, Self>
    where
        V: Sync,
        V::Object: Send + Sync,
        V::Arrow: Send + Sync,
    {
        let hol2 = hol.clone();
        ConnectionPair::new(hol, move |a: &V::Arrow| {
            let y = self.vertical.target(a);
            PhaseSquare {
                up: hol2(a),
                down: self.horizontal.identity(&y),
                left: a.clone(),
                right: self.vertical.identity(&y),
                payload: Phase::zero(),
            }
        })
    }
}

impl<V: Groupoid> DoubleGroupoid for PhaseDouble<V> {
    type H = PhaseGroupoid<V::Object>;
    type V = V;
    type Square = PhaseSquare<V::Object, V::Arrow>;

    fn horizontal(&self) -> &Self::H {
        &self.horizontal
    }
    fn vertical(&self) -> &V {
        &self.vertical
    }
    fn up(&self, s: &Self::Square) -> PhaseArrow<V::Object> {
        s.up.clone()
    }
    fn down(&self, s: &Self::Square) -> PhaseArrow<V::Object> {
        s.down.clone()
    }
    fn left(&self, s: &Self::Square) -> V::Arrow {
        s.left.clone()
    }
    fn right(&self, s: &Self::Square) -> V::Arrow {
        s.right.clone()
    }

    fn compose1(&self, s: &Self::Square, t: &Self::Square) -> Result<Self::Square> {
        if !self.horizontal.arrows_equal(&s.down, &t.up) {
            return Err(crate::Error::NonComposable(format!(
                "down edge {:?} vs up edge {:?}",
                s.down, t.up
            )));
        }
        Ok(PhaseSquare {
            up: s.up.clone(),
            down: t.down.clone(),
            left: self.vertical.compose(&s.left, &t.left)?,
            right: self.vertical.compose(&s.right, &t.right)?,
            payload: s.payload + t.payload,
        })
    }

    fn compose2(&self, s: &Self::Square, t: &Self::Square) -> Result<Self::Square> {
        if !self.vertical.arrows_equal(&s.right, &t.left) {
            return Err(crate::Error::NonComposable(format!(
                "right edge {:?} vs left edge {:?}",
                s.right, t.left
            )));
        }
        Ok(PhaseSquare {
            up: self.horizontal.compose(&s.up, &t.up)?,
            down: self.horizontal.compose(&s.down, &t.down)?,
            left: s.left.clone(),
            right: t.right.clone(),
            payload: s.payload + t.payload,
        })
    }

    fn eps1(&self, h: &PhaseArrow<V::Object>) -> Self::Square {
        PhaseSquare {
            up: h.clone(),
            down: h.clone(),
            left: self.vertical.identity(&h.source),
            right: self.vertical.identity(&h.target),
            payload: Phase::zero(),
        }
    }

    fn eps2(&self, v: &V::Arrow) -> Self::Square {
        let x = self.vertical.source(v);
        let y = self.vertical.target(v);
        PhaseSquare {
            up: self.horizontal.identity(&x),
            down: self.horizontal.identity(&y),
            left: v.clone(),
            right: v.clone(),
            payload: Phase::zero(),
        }
    }

    fn squares_equal(&self, s: &Self::Square, t: &Self::Square) -> bool {
        let h = &self.horizontal;
        let v = &self.vertical;
        h.arrows_equal(&s.up, &t.up)
            && h.arrows_equal(&s.down, &t.down)
            && v.arrows_equal(&s.left, &t.left)
            && v.arrows_equal(&s.right, &t.right)
            && s.payload.approx_eq(&t.payload, h.tolerance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::FiniteGroupoid;
    use num_rational::Rational64;

    fn phase_arrow(x: usize, y: usize, p: i64, q: i64) -> PhaseArrow<usize> {
        PhaseArrow {
            source: x,
            target: y,
            phase: Phase::from_turns(p, q),
        }
    }

    fn pair_double() -> PhaseDouble<FiniteGroupoid> {
        PhaseDouble::new(FiniteGroupoid::pair(["a", "b", "c"]), 1e-12)
    }

    #[test]
    fn eps1_is_functorial_along_compose2() {
        let d = pair_double();
        let h1 = phase_arrow(0, 1, 1, 5);
        let h2 = phase_arrow(1, 2, 1, 3);
        let lhs = d.compose2(&d.eps1(&h1), &d.eps1(&h2)).unwrap();
        let h12 = d.horizontal().compose(&h1, &h2).unwrap();
        assert!(d.squares_equal(&lhs, &d.eps1(&h12)));
    }

    #[test]
    fn payloads_add() {
        let d = pair_double();
        let v = d.vertical();
        let base = |p: i64, q: i64| PhaseSquare {
            up: phase_arrow(0, 0, 0, 1),
            down: phase_arrow(0, 0, 0, 1),
            left: v.identity(&0),
            right: v.identity(&0),
            payload: Phase::from_turns(p, q),
        };
        let s = d.compose1(&base(1, 6), &base(1, 3)).unwrap();
        assert_eq!(s.payload.turns(), Some(Rational64::new(1, 2)));
        let s = d.compose2(&base(1, 6), &base(1, 3)).unwrap();
        assert_eq!(s.payload.turns(), Some(Rational64::new(1, 2)));
    }

    fn hol_table(a: &usize) -> PhaseArrow<usize> {
        // Hol(x→y) = φ_y − φ_x for a potential φ: a functor on the pair groupoid.
        let phi = [0i64, 1, 5];
        let (x, y) = (a / 3, a % 3);
        phase_arrow(x, y, phi[y] - phi[x], 7)
    }

    fn all_pairs(v: &FiniteGroupoid) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..v.arrow_count() {
            for b in 0..v.arrow_count() {
                if v.target(&a) == v.source(&b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    #[test]
    fn trivial_connection_satisfies_transport_law() {
        let d = pair_double();
        let cp = d.connection_pair(|a: &usize| {
            let (x, y) = (a / 3, a % 3);
            phase_arrow(x, y, 0, 1)
        });
        let report = check_transport_law(&cp, &d, &all_pairs(d.vertical()));
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.checked, 27);
    }

    #[test]
    fn functorial_holonomy_satisfies_transport_law() {
        let d = pair_double();
        let cp = d.connection_pair(hol_table);
        assert!(check_transport_law(&cp, &d, &all_pairs(d.vertical())).passed());
    }

    #[test]
    fn corrupted_upsilon_is_located() {
        let d = pair_double();
        let v = d.vertical();
        let bad = v.hom(0, 2)[0];
        let cp: ConnectionPair<'_, PhaseDouble<FiniteGroupoid>> = ConnectionPair::new(hol_table, move |a: &usize| {
            let y = a % 3;
            let mut up = hol_table(a);
            if *a == bad {
                up.phase += Phase::from_turns(1, 2);
            }
            PhaseSquare {
                up,
                down: phase_arrow(y, y, 0, 1),
                left: *a,
                right: y * 3 + y,
                payload: Phase::zero(),
            }
        });
        let pairs = all_pairs(d.vertical());
        let report = check_transport_law(&cp, &d, &pairs);
        assert!(!report.passed());
        let first = report.first_failure.unwrap();
        let (a, b) = pairs[first.index];
        assert!(a == bad || b == bad || v.compose(&a, &b).unwrap() == bad);
    }
}
