//! Crossed modules of finite groups and their double groupoids.
//!
//! A crossed module is `μ: M → P` with a right action `m ↦ m^p` of `P` on
//! `M` such that `μ(m^p) = p⁻¹ μ(m) p` and `m^{μ(n)} = n⁻¹ m n`.
//!
//! Its double groupoid has one point, `H = V = P`, and squares
//! `(u, l, r, d; m)` with `μ(m) = l·d·r⁻¹·u⁻¹`.

use crate::double::{DoubleGroupoid, FiniteDouble, HArrow, VArrow};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupGroupoid};
use crate::groupoid::Groupoid;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedModule {
    m: FiniteGroup,
    p: FiniteGroup,
    mu: Vec<usize>,
    /// `action[p][m] = m^p`.
    action: Vec<Vec<usize>>,
}

impl CrossedModule {
    /// Builds and validates a crossed module.
    pub fn new(m: FiniteGroup, p: FiniteGroup, mu: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self> {
        let cm = CrossedModule { m, p, mu, action };
        cm.validate()?;
        Ok(cm)
    }

    /// Builds without validating; [`CrossedModule::validate`] reports the
    /// first violated axiom.
    pub fn new_unchecked(m: FiniteGroup, p: FiniteGroup, mu: Vec<usize>, action: Vec<Vec<usize>>) -> Self {
        CrossedModule { m, p, mu, action }
    }

    /// `μ` with the trivial action, validated like any other.
    pub fn with_trivial_action(m: FiniteGroup, p: FiniteGroup, mu: Vec<usize>) -> Result<Self> {
        let action = (0..p.order()).map(|_| m.elements().collect()).collect();
        Self::new(m, p, mu, action)
    }

    /// The identity `G → G` with conjugation.
    pub fn conjugation(g: FiniteGroup) -> Self {
        let action = g
            .elements()
            .map(|p| g.elements().map(|m| g.conjugate(m, p)).collect())
            .collect();
        let mu = g.elements().collect();
        Self::new(g.clone(), g, mu, action).expect("conjugation crossed module")
    }

    pub fn m(&self) -> &FiniteGroup {
        &self.m
    }

    pub fn p(&self) -> &FiniteGroup {
        &self.p
    }

    pub fn mu(&self, m: usize) -> usize {
        self.mu[m]
    }

    pub fn act(&self, m: usize, p: usize) -> usize {
        self.action[p][m]
    }

    pub fn validate(&self) -> Result<()> {
        let (m, p) = (&self.m, &self.p);
        let bad = |s: String| Err(Error::InvalidCrossedModule(s));
        if self.mu.len() != m.order() || self.mu.iter().any(|&x| x >= p.order()) {
            return bad("μ is not a map M → P".into());
        }
        if !m.is_homomorphism_to(p, &self.mu) {
            return bad("μ is not a homomorphism".into());
        }
        if self.action.len() != p.order() || self.action.iter().any(|row| row.len() != m.order()) {
            return bad("action table has the wrong shape".into());
        }
        for q in p.elements() {
            if !m.is_homomorphism_to(m, &self.action[q]) {
                return bad(format!("action of {q} is not an endomorphism of M"));
            }
        }
        for x in m.elements() {
            if self.act(x, 0) != x {
                return bad("identity of P does not act trivially".into());
            }
            for a in p.elements() {
                for b in p.elements() {
                    if self.act(self.act(x, a), b) != self.act(x, p.mul(a, b)) {
                        return bad(format!("(m^p)^q ≠ m^(pq) at m={x}, p={a}, q={b}"));
                    }
                }
                if self.mu[self.act(x, a)] != p.conjugate(self.mu[x], a) {
                    return bad(format!("μ(m^p) ≠ p⁻¹μ(m)p at m={x}, p={a}"));
                }
            }
            for n in m.elements() {
                if self.act(x, self.mu[n]) != m.conjugate(x, n) {
                    return bad(format!("Peiffer identity m^μ(n) = n⁻¹mn fails at m={x}, n={n}"));
                }
            }
        }
        Ok(())
    }
}

/// Named crossed modules small enough for exhaustive interchange sweeps.
pub fn small_crossed_modules() -> Vec<(String, CrossedModule)> {
    let z = FiniteGroup::cyclic;
    let v4 = FiniteGroup::product(&z(2), &z(2));
    let mk = |m: FiniteGroup, p: FiniteGroup, mu: Vec<usize>| {
        CrossedModule::with_trivial_action(m, p, mu).expect("small crossed module")
    };
    vec![
        ("1 -> Z2".into(), mk(z(1), z(2), vec![0])),
        ("Z2 = Z2".into(), CrossedModule::conjugation(z(2))),
        ("Z3 -> 1".into(), mk(z(3), z(1), vec![0; 3])),
        ("Z2xZ2 -> 1".into(), mk(v4, z(1), vec![0; 4])),
        ("Z4 -> Z2".into(), mk(z(4), z(2), vec![0, 1, 0, 1])),
        ("Z2 -> Z4".into(), mk(z(2), z(4), vec![0, 2])),
        ("Z8 -> 1".into(), mk(z(8), z(1), vec![0; 8])),
    ]
}

/// A square `(u, l, r, d; m)` of a crossed-module double groupoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CmSquare {
    pub up: usize,
    pub left: usize,
    pub right: usize,
    pub down: usize,
    pub payload: usize,
}

#[derive(Clone, Debug)]
pub struct CrossedModuleDouble {
    cm: CrossedModule,
    edges: GroupGroupoid,
}

pub fn double_from_crossed_module(cm: &CrossedModule) -> Result<CrossedModuleDouble> {
    cm.validate()?;
    Ok(CrossedModuleDouble {
        edges: GroupGroupoid(cm.p.clone()),
        cm: cm.clone(),
    })
}

impl CrossedModuleDouble {
    pub fn crossed_module(&self) -> &CrossedModule {
        &self.cm
    }

    /// `l·d·r⁻¹·u⁻¹`, which `μ` of the payload must equal.
    pub fn boundary_word(&self, u: usize, l: usize, r: usize, d: usize) -> usize {
        let p = &self.cm.p;
        p.mul(p.mul(p.mul(l, d), p.inv(r)), p.inv(u))
    }

    pub fn square(&self, up: usize, left: usize, right: usize, down: usize, payload: usize) -> Result<CmSquare> {
        if self.cm.mu(payload) != self.boundary_word(up, left, right, down) {
            return Err(Error::Invalid(format!(
                "μ({payload}) does not match the boundary ({up}, {left}, {right}, {down})"
            )));
        }
        Ok(CmSquare {
            up,
            left,
            right,
            down,
            payload,
        })
    }

    /// The connection pair `Hol = id`, `Υ(a) = (a, a, 1, 1; 1)`.
    pub fn upsilon(&self, a: usize) -> CmSquare {
        CmSquare {
            up: a,
            left: a,
            right: 0,
            down: 0,
            payload: 0,
        }
    }
}

impl DoubleGroupoid for CrossedModuleDouble {
    type H = GroupGroupoid;
    type V = GroupGroupoid;
    type Square = CmSquare;

    fn horizontal(&self) -> &GroupGroupoid {
        &self.edges
    }
    fn vertical(&self) -> &GroupGroupoid {
        &self.edges
    }
    fn up(&self, s: &CmSquare) -> usize {
        s.up
    }
    fn down(&self, s: &CmSquare) -> usize {
        s.down
    }
    fn left(&self, s: &CmSquare) -> usize {
        s.left
    }
    fn right(&self, s: &CmSquare) -> usize {
        s.right
    }

    fn compose1(&self, s: &CmSquare, t: &CmSquare) -> Result<CmSquare> {
        if s.down != t.up {
            return Err(Error::NonComposable(format!("down {} vs up {}", s.down, t.up)));
        }
        let (m, p) = (&self.cm.m, &self.cm.p);
        Ok(CmSquare {
            up: s.up,
            left: p.mul(s.left, t.left),
            right: p.mul(s.right, t.right),
            down: t.down,
            payload: m.mul(self.cm.act(t.payload, p.inv(s.left)), s.payload),
        })
    }

    fn compose2(&self, s: &CmSquare, t: &CmSquare) -> Result<CmSquare> {
        if s.right != t.left {
            return Err(Error::NonComposable(format!("right {} vs left {}", s.right, t.left)));
        }
        let (m, p) = (&self.cm.m, &self.cm.p);
        Ok(CmSquare {
            up: p.mul(s.up, t.up),
            left: s.left,
            right: t.right,
            down: p.mul(s.down, t.down),
            payload: m.mul(s.payload, self.cm.act(t.payload, p.inv(s.up))),
        })
    }

    fn eps1(&self, h: &usize) -> CmSquare {
        CmSquare {
            up: *h,
            left: 0,
            right: 0,
            down: *h,
            payload: 0,
        }
    }

    fn eps2(&self, v: &usize) -> CmSquare {
        CmSquare {
            up: 0,
            left: *v,
            right: *v,
            down: 0,
            payload: 0,
        }
    }

    fn squares_equal(&self, s: &CmSquare, t: &CmSquare) -> bool {
        s == t
    }
}

impl FiniteDouble for CrossedModuleDouble {
    fn squares(&self) -> Vec<CmSquare> {
        let p = &self.cm.p;
        let mut out = Vec::new();
        for u in p.elements() {
            for l in p.elements() {
                for r in p.elements() {
                    for d in p.elements() {
                        let w = self.boundary_word(u, l, r, d);
                        for m in self.cm.m.elements().filter(|&m| self.cm.mu(m) == w) {
                            out.push(CmSquare {
                                up: u,
                                left: l,
                                right: r,
                                down: d,
                                payload: m,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    fn horizontal_arrows(&self) -> Vec<usize> {
        self.cm.p.elements().collect()
    }

    fn vertical_arrows(&self) -> Vec<usize> {
        self.cm.p.elements().collect()
    }
}

/// Recovers a crossed module from a one-point edge-symmetric double
/// groupoid: `M` is the set of squares with `up = left = right = 1`,
/// multiplied by `∘₂`; `μ` reads the bottom edge; `P` acts by
/// `s^p = ε₁(p⁻¹) ∘₂ s ∘₂ ε₁(p)`.
///
/// The returned `P` lists horizontal arrows in the order given by
/// [`FiniteDouble::horizontal_arrows`] with the identity moved to `0`.
pub fn crossed_module_from_double<D>(d: &D) -> Result<CrossedModule>
where
    D: FiniteDouble,
    D::V: Groupoid<Arrow = HArrow<D>>,
{
    let h = d.horizontal();
    let v = d.vertical();
    let hs = d.horizontal_arrows();
    let vs: Vec<VArrow<D>> = d.vertical_arrows();
    let same_edges = hs.len() == vs.len()
        && hs.iter().all(|a| vs.iter().any(|b| h.arrows_equal(a, b)))
        && hs.iter().all(|a| {
            hs.iter().all(|b| match (h.compose(a, b), v.compose(a, b)) {
                (Ok(x), Ok(y)) => h.arrows_equal(&x, &y),
                (Err(_), Err(_)) => true,
                _ => false,
            })
        });
    if !same_edges {
        return Err(Error::NotEdgeSymmetric(
            "horizontal and vertical edge groupoids differ".into(),
        ));
    }
    let point = match hs.first() {
        Some(a) => h.source(a),
        None => return Err(Error::Invalid("double groupoid has no edges".into())),
    };
    if hs.iter().any(|a| h.source(a) != point || h.target(a) != point) {
        return Err(Error::Invalid("only one-point double groupoids are supported".into()));
    }
    let e = h.identity(&point);
    let mut p_elems: Vec<HArrow<D>> = vec![e.clone()];
    p_elems.extend(hs.iter().filter(|a| !h.arrows_equal(a, &e)).cloned());
    let p_index = |a: &HArrow<D>| p_elems.iter().position(|b| h.arrows_equal(a, b));

    let squares = d.squares();
    let mut m_elems: Vec<D::Square> = Vec::new();
    let ident_sq = d.eps1(&e);
    m_elems.push(ident_sq.clone());
    for s in &squares {
        let special = h.arrows_equal(&d.up(s), &e)
            && v.arrows_equal(&d.left(s), &e)
            && v.arrows_equal(&d.right(s), &e);
        if special && !m_elems.iter().any(|t| d.squares_equal(s, t)) {
            m_elems.push(s.clone());
        }
    }
    let m_index = |s: &D::Square| m_elems.iter().position(|t| d.squares_equal(s, t));
    let missing = || Error::Invalid("composite left the enumerated squares".into());

    let mut p_table = vec![vec![0; p_elems.len()]; p_elems.len()];
    for (i, a) in p_elems.iter().enumerate() {
        for (j, b) in p_elems.iter().enumerate() {
            p_table[i][j] = p_index(&h.compose(a, b)?).ok_or_else(missing)?;
        }
    }
    let mut m_table = vec![vec![0; m_elems.len()]; m_elems.len()];
    for (i, s) in m_elems.iter().enumerate() {
        for (j, t) in m_elems.iter().enumerate() {
            m_table[i][j] = m_index(&d.compose2(s, t)?).ok_or_else(missing)?;
        }
    }
    let mu = m_elems
        .iter()
        .map(|s| p_index(&d.down(s)).ok_or_else(missing))
        .collect::<Result<Vec<_>>>()?;
    let mut action = vec![vec![0; m_elems.len()]; p_elems.len()];
    for (q, a) in p_elems.iter().enumerate() {
        let left = d.eps1(&h.inverse(a));
        let right = d.eps1(a);
        for (i, s) in m_elems.iter().enumerate() {
            let conj = d.compose2(&d.compose2(&left, s)?, &right)?;
            action[q][i] = m_index(&conj).ok_or_else(missing)?;
        }
    }
    let m = FiniteGroup::from_table("M'", m_table)?;
    let p = FiniteGroup::from_table("P'", p_table)?;
    CrossedModule::new(m, p, mu, action)
}

/// An isomorphism of crossed modules `(f: M → M', g: P → P')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedModuleIso {
    pub m_map: Vec<usize>,
    pub p_map: Vec<usize>,
}

/// Searches for an isomorphism `a → b`. With `identity_on_p` only
/// `g = id` is tried, which requires equal `P` tables.
pub fn find_isomorphism(a: &CrossedModule, b: &CrossedModule, identity_on_p: bool) -> Option<CrossedModuleIso> {
    let p_maps = if identity_on_p {
        if a.p != b.p && a.p.elements().any(|x| a.p.elements().any(|y| a.p.mul(x, y) != b.p.mul(x, y))) {
            return None;
        }
        if a.p.order() != b.p.order() {
            return None;
        }
        vec![a.p.elements().collect::<Vec<_>>()]
    } else {
        a.p.isomorphisms_to(&b.p)
    };
    let m_maps = a.m.isomorphisms_to(&b.m);
    for g in &p_maps {
        for f in &m_maps {
            let mu_ok = a.m.elements().all(|x| b.mu(f[x]) == g[a.mu(x)]);
            let act_ok = mu_ok
                && a.p
                    .elements()
                    .all(|q| a.m.elements().all(|x| f[a.act(x, q)] == b.act(f[x], g[q])));
            if act_ok {
                return Some(CrossedModuleIso {
                    m_map: f.clone(),
                    p_map: g.clone(),
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::{check_associativity_exhaustive, check_interchange_exhaustive, interchange_holds};

    #[test]
    fn small_examples_validate() {
        for (name, cm) in small_crossed_modules() {
            assert!(cm.validate().is_ok(), "{name}");
        }
    }

    #[test]
    fn inversion_action_violates_axioms() {
        let z4 = FiniteGroup::cyclic(4);
        let action = (0..4)
            .map(|p| (0..4).map(|m| if p % 2 == 0 { m } else { (4 - m) % 4 }).collect())
            .collect();
        let cm = CrossedModule::new_unchecked(z4.clone(), z4, (0..4).collect(), action);
        assert!(matches!(cm.validate(), Err(Error::InvalidCrossedModule(_))));
    }

    #[test]
    fn squares_satisfy_boundary_condition() {
        let cm = &small_crossed_modules()[4].1;
        let d = double_from_crossed_module(cm).unwrap();
        for s in d.squares() {
            assert_eq!(cm.mu(s.payload), d.boundary_word(s.up, s.left, s.right, s.down));
        }
        // Every boundary with w in the image of μ gets |ker μ| squares.
        assert_eq!(d.squares().len(), 16 * 2);
    }

    #[test]
    fn interchange_and_associativity_on_z4_over_z2() {
        let d = double_from_crossed_module(&small_crossed_modules()[4].1).unwrap();
        assert!(check_interchange_exhaustive(&d, usize::MAX).passed());
        assert!(check_associativity_exhaustive(&d).passed());
    }

    #[test]
    fn interchange_sampled_on_s3_conjugation() {
        let d = double_from_crossed_module(&CrossedModule::conjugation(FiniteGroup::s3())).unwrap();
        let sq = d.squares();
        let mut checked = 0;
        for (i, a) in sq.iter().enumerate().step_by(37) {
            for c in sq.iter().skip(i % 11).step_by(13).filter(|c| c.left == a.right) {
                for b in sq.iter().step_by(7).filter(|b| b.up == a.down) {
                    for dd in sq.iter().filter(|x| x.up == c.down && x.left == b.right).take(2) {
                        assert_eq!(interchange_holds(&d, a, b, c, dd), Some(true));
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn round_trip_is_isomorphic() {
        for (name, cm) in small_crossed_modules() {
            let d = double_from_crossed_module(&cm).unwrap();
            let back = crossed_module_from_double(&d).unwrap();
            assert!(find_isomorphism(&cm, &back, true).is_some(), "{name}");
        }
    }

    #[test]
    fn isomorphism_search_distinguishes() {
        let z = FiniteGroup::cyclic;
        let a = CrossedModule::with_trivial_action(z(4), z(2), vec![0, 1, 0, 1]).unwrap();
        let b = CrossedModule::with_trivial_action(z(4), z(2), vec![0; 4]).unwrap();
        assert!(find_isomorphism(&a, &b, false).is_none());
        assert!(find_isomorphism(&a, &a, false).is_some());
    }
}
