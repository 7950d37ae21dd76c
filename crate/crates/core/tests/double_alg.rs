use holonomy_core::crossed::{
    crossed_module_from_double, double_from_crossed_module, find_isomorphism, small_crossed_modules, CmSquare,
    CrossedModule, CrossedModuleDouble,
};
use holonomy_core::double::{
    check_interchange_exhaustive, check_transport_law, ConnectionPair, DoubleGroupoid, FiniteDouble,
};
use holonomy_core::group::{FiniteGroup, GroupGroupoid};
use holonomy_core::{Error, Groupoid};

#[test]
fn interchange_holds_exhaustively_on_small_crossed_modules() {
    for (name, cm) in small_crossed_modules() {
        let d = double_from_crossed_module(&cm).unwrap();
        let report = check_interchange_exhaustive(&d, 50_000_000);
        assert!(report.passed(), "{name}: {report:?}");
        assert!(report.checked > 0);
    }
}

#[test]
fn eckmann_hilton_on_identity_boundary_squares() {
    // With trivial P every square has identity edges, so both compositions
    // agree and are commutative.
    for order in [2, 3, 5, 8] {
        let cm = CrossedModule::with_trivial_action(FiniteGroup::cyclic(order), FiniteGroup::trivial(), vec![0; order])
            .unwrap();
        let d = double_from_crossed_module(&cm).unwrap();
        let sq = d.squares();
        assert_eq!(sq.len(), order);
        let e = d.eps1(&0);
        for s in &sq {
            for t in &sq {
                let v = d.compose1(s, t).unwrap();
                let h = d.compose2(s, t).unwrap();
                assert_eq!(v, h);
                assert_eq!(v, d.compose1(t, s).unwrap());
                // Derivation through interchange with identity squares.
                let lhs = d
                    .compose1(&d.compose2(s, &e).unwrap(), &d.compose2(&e, t).unwrap())
                    .unwrap();
                let rhs = d
                    .compose2(&d.compose1(s, &e).unwrap(), &d.compose1(&e, t).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

fn all_pairs(order: usize) -> Vec<(usize, usize)> {
    (0..order).flat_map(|a| (0..order).map(move |b| (a, b))).collect()
}

#[test]
fn identity_connection_satisfies_transport_law() {
    for (name, cm) in small_crossed_modules() {
        let d = double_from_crossed_module(&cm).unwrap();
        let cp: ConnectionPair<'_, CrossedModuleDouble> = ConnectionPair::new(|a: &usize| *a, |a: &usize| d.upsilon(*a));
        let report = check_transport_law(&cp, &d, &all_pairs(cm.p().order()));
        assert!(report.passed(), "{name}: {report:?}");
    }
}

#[test]
fn corrupted_connection_fails_transport_law_at_first_bad_pair() {
    // Hol sends 1 to 3 but fixes 2 and 3, so it stops being a homomorphism.
    let cm = &small_crossed_modules()[5].1;
    let d = double_from_crossed_module(cm).unwrap();
    let hol = |a: &usize| if *a == 1 { 3 } else { *a };
    let cp: ConnectionPair<'_, CrossedModuleDouble> = ConnectionPair::new(hol, |a: &usize| CmSquare {
        up: hol(a),
        left: *a,
        right: 0,
        down: 0,
        payload: 0,
    });
    let pairs = all_pairs(4);
    let report = check_transport_law(&cp, &d, &pairs);
    assert!(!report.passed());
    let first = report.first_failure.unwrap();
    let oracle = pairs
        .iter()
        .position(|&(a, b)| (hol(&a) + hol(&b)) % 4 != hol(&((a + b) % 4)))
        .unwrap();
    assert_eq!(first.index, oracle);
    assert_eq!(pairs[oracle], (1, 2));
}

#[test]
fn conjugation_module_round_trips() {
    let cm = CrossedModule::conjugation(FiniteGroup::s3());
    let d = double_from_crossed_module(&cm).unwrap();
    let back = crossed_module_from_double(&d).unwrap();
    let iso = find_isomorphism(&cm, &back, true).unwrap();
    assert_eq!(iso.p_map, (0..6).collect::<Vec<_>>());
}

#[test]
fn invalid_action_is_rejected_by_double_construction() {
    let z4 = FiniteGroup::cyclic(4);
    let action = (0..4)
        .map(|p| (0..4).map(|m| if p % 2 == 0 { m } else { (4 - m) % 4 }).collect())
        .collect();
    let cm = CrossedModule::new_unchecked(z4.clone(), z4, (0..4).collect(), action);
    assert!(matches!(
        double_from_crossed_module(&cm),
        Err(Error::InvalidCrossedModule(_))
    ));
}

/// Squares of `ε₁` type only, with a trivial vertical groupoid.
struct HorizontalOnly {
    h: GroupGroupoid,
    v: GroupGroupoid,
}

impl DoubleGroupoid for HorizontalOnly {
    type H = GroupGroupoid;
    type V = GroupGroupoid;
    type Square = usize;
    fn horizontal(&self) -> &GroupGroupoid {
        &self.h
    }
    fn vertical(&self) -> &GroupGroupoid {
        &self.v
    }
    fn up(&self, s: &usize) -> usize {
        *s
    }
    fn down(&self, s: &usize) -> usize {
        *s
    }
    fn left(&self, _: &usize) -> usize {
        0
    }
    fn right(&self, _: &usize) -> usize {
        0
    }
    fn compose1(&self, s: &usize, t: &usize) -> holonomy_core::Result<usize> {
        if s == t {
            Ok(*s)
        } else {
            Err(Error::NonComposable("edges differ".into()))
        }
    }
    fn compose2(&self, s: &usize, t: &usize) -> holonomy_core::Result<usize> {
        self.h.compose(s, t)
    }
    fn eps1(&self, h: &usize) -> usize {
        *h
    }
    fn eps2(&self, _: &usize) -> usize {
        0
    }
    fn squares_equal(&self, s: &usize, t: &usize) -> bool {
        s == t
    }
}

impl FiniteDouble for HorizontalOnly {
    fn squares(&self) -> Vec<usize> {
        self.h.0.elements().collect()
    }
    fn horizontal_arrows(&self) -> Vec<usize> {
        self.h.0.elements().collect()
    }
    fn vertical_arrows(&self) -> Vec<usize> {
        self.v.0.elements().collect()
    }
}

#[test]
fn non_edge_symmetric_double_is_rejected() {
    let d = HorizontalOnly {
        h: GroupGroupoid(FiniteGroup::cyclic(2)),
        v: GroupGroupoid(FiniteGroup::trivial()),
    };
    assert!(check_interchange_exhaustive(&d, 1000).passed());
    assert!(matches!(crossed_module_from_double(&d), Err(Error::NotEdgeSymmetric(_))));
}

#[test]
fn doubling_map_on_z4_is_a_crossed_module_for_every_action() {
    let z4 = FiniteGroup::cyclic(4);
    for flip in [false, true] {
        let action = (0..4)
            .map(|p| (0..4).map(|m| if flip && p % 2 == 1 { (4 - m) % 4 } else { m }).collect())
            .collect();
        let cm = CrossedModule::new(z4.clone(), z4.clone(), vec![0, 2, 0, 2], action);
        assert!(cm.is_ok());
    }
}
