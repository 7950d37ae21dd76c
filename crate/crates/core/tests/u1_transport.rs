use std::f64::consts::{PI, TAU};

use holonomy_core::bundle::{GaugeFunctions, LineBundleData};
use holonomy_core::cover::{build_cover, CoverSpec};
use holonomy_core::forms::ScalarFn;
use holonomy_core::paths::{Curve, EdgePath, EdgeStep, Reparam, SmoothPath, ThinPath};
use holonomy_core::quadrature::Quadrature;
use holonomy_core::transport::{holonomy, thin_path_double_groupoid, transport, transport_checked};
use holonomy_core::{Error, Phase};
use num_rational::Rational64;
use proptest::prelude::*;

/// Composite Simpson rule with many panels, independent of the library's
/// Gauss–Legendre quadrature.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn latitude(b: &LineBundleData, theta: f64, chart: usize) -> SmoothPath {
    let cover = b.space.analytic().unwrap();
    let curve = Curve::Latitude {
        theta,
        phi_from: 0.0,
        phi_to: TAU,
    };
    SmoothPath::new(cover, vec![(curve, chart)]).unwrap()
}

fn q() -> Quadrature {
    Quadrature::default()
}

#[test]
fn constant_path_has_identity_transport() {
    let b = LineBundleData::monopole(1).unwrap();
    let cover = b.space.analytic().unwrap();
    let x = vec![1.0, 2.0];
    let p = SmoothPath::new(cover, vec![(Curve::Line { from: x.clone(), to: x }, 0)]).unwrap();
    assert!(transport(&b, &ThinPath::Smooth(p), &q()).unwrap().value.is_identity(1e-9));
    let t = LineBundleData::flat_torus(3, 4, [Rational64::new(1, 3), Rational64::new(1, 2)]).unwrap();
    let r = transport(&t, &ThinPath::Combinatorial(EdgePath::constant(5)), &q()).unwrap();
    assert_eq!(r.value, Phase::zero());
}

#[test]
fn latitude_holonomy_matches_simpson_oracle() {
    let b = LineBundleData::monopole(1).unwrap();
    for theta in [0.2, 0.8, 1.3, PI / 2.0, 1.8] {
        let oracle = -simpson(|_| 0.5 * (1.0 - theta.cos()), 0.0, TAU, 2000);
        let h = holonomy(&b, &ThinPath::Smooth(latitude(&b, theta, 0)), &q()).unwrap();
        assert!(h.approx_eq(&Phase::from_radians(oracle), 1e-9), "θ = {theta}: {h}");
    }
    let eq = holonomy(&b, &ThinPath::Smooth(latitude(&b, PI / 2.0, 0)), &q()).unwrap();
    assert!(eq.approx_eq(&Phase::from_radians(PI), 1e-9));
}

#[test]
fn equator_holonomy_is_n_half_turns_in_either_chart() {
    for n in 1..=3 {
        let b = LineBundleData::monopole(n).unwrap();
        let expected = Phase::from_radians(n as f64 * PI);
        for chart in [0, 1] {
            let h = holonomy(&b, &ThinPath::Smooth(latitude(&b, PI / 2.0, chart)), &q()).unwrap();
            assert!(h.approx_eq(&expected, 1e-9), "n = {n}, chart {chart}: {h}");
        }
    }
}

#[test]
fn backtrack_padded_equator_keeps_its_holonomy() {
    let b = LineBundleData::monopole(3).unwrap();
    let cover = b.space.analytic().unwrap();
    let eq = latitude(&b, PI / 2.0, 0);
    let out = SmoothPath::new(
        cover,
        vec![(
            Curve::Meridian {
                phi: 0.0,
                theta_from: PI / 2.0,
                theta_to: 1.8,
            },
            1,
        )],
    )
    .unwrap();
    let padded = eq.concat(&out, cover).unwrap().concat(&out.reverse(), cover).unwrap();
    let a = holonomy(&b, &ThinPath::Smooth(eq), &q()).unwrap();
    let c = holonomy(&b, &ThinPath::Smooth(padded), &q()).unwrap();
    assert!(a.approx_eq(&c, 1e-9));
}

#[test]
fn loop_through_both_charts_agrees_with_single_chart() {
    let b = LineBundleData::monopole(2).unwrap();
    let cover = b.space.analytic().unwrap();
    let curve = Curve::Latitude {
        theta: 1.5,
        phi_from: 0.0,
        phi_to: TAU,
    };
    let split = SmoothPath::with_switches(cover, curve, 0, &[(0.3, 1), (0.7, 0)]).unwrap();
    let r = transport(&b, &ThinPath::Smooth(split), &q()).unwrap();
    assert_eq!(r.insertions.len(), 2);
    let whole = holonomy(&b, &ThinPath::Smooth(latitude(&b, 1.5, 0)), &q()).unwrap();
    assert!(r.value.approx_eq(&whole, 1e-9));
}

#[test]
fn torus_edge_loops_give_declared_flux_by_exact_sum() {
    let hol = [Rational64::new(2, 7), Rational64::new(3, 5)];
    let b = LineBundleData::flat_torus(4, 6, hol).unwrap();
    let complex = &b.space.combinatorial().unwrap().complex;
    // A loop winding twice around the rows and once around the columns.
    let mut steps = Vec::new();
    for _ in 0..2 {
        steps.extend((0..6).map(|j| EdgeStep::new(2 * j, 1)));
    }
    steps.extend((0..4).map(|i| EdgeStep::new(2 * (6 * i) + 1, 1)));
    let p = EdgePath::new(complex, 0, steps).unwrap();
    let h = holonomy(&b, &ThinPath::Combinatorial(p), &q()).unwrap();
    assert_eq!(h.turns(), Some(Phase::from_ratio(hol[0] * 2 + hol[1]).turns().unwrap()));
}

#[test]
fn open_path_is_not_a_loop() {
    let b = LineBundleData::flat_torus(2, 4, [Rational64::new(1, 2), Rational64::new(0, 1)]).unwrap();
    let complex = &b.space.combinatorial().unwrap().complex;
    let p = EdgePath::new(complex, 0, vec![EdgeStep::new(0, 1)]).unwrap();
    assert!(matches!(holonomy(&b, &ThinPath::Combinatorial(p), &q()), Err(Error::NotClosed(_))));
}

#[test]
fn invalid_bundle_is_rejected_by_checked_transport() {
    let b = LineBundleData::flat_torus(2, 4, [Rational64::new(1, 2), Rational64::new(0, 1)]).unwrap();
    let bad = b.corrupt_vertex(1, 0, 2, Rational64::new(1, 10)).unwrap();
    let p = ThinPath::Combinatorial(EdgePath::constant(0));
    assert!(matches!(transport_checked(&bad, &p, &q()), Err(Error::InvalidBundle(_))));
}

#[test]
fn fault_injected_transition_breaks_the_transport_law_at_a_located_pair() {
    let b = LineBundleData::flat_torus(3, 4, [Rational64::new(1, 3), Rational64::new(1, 4)]).unwrap();
    let complex = b.space.combinatorial().unwrap().complex.clone();
    // Horizontal edge 4 runs (0,2) → (0,3); vertex 2 lies in both charts.
    let into = EdgePath::new(&complex, 3, vec![EdgeStep::in_chart(4, -1, 1)]).unwrap();
    let gens = vec![ThinPath::Combinatorial(into)];
    let good = thin_path_double_groupoid(&b, &gens, 2, 64, q()).unwrap();
    let pairs = good.composable_pairs(100);
    assert!(good.check_transport_law(&pairs).passed());
    assert!(good.check_piecewise(&pairs).passed());

    let bad = b.corrupt_vertex(1, 0, 2, Rational64::new(1, 10)).unwrap();
    let faulty = thin_path_double_groupoid(&bad, &gens, 2, 64, q()).unwrap();
    let report = faulty.check_transport_law(&pairs);
    assert!(!report.passed());
    let first = report.first_failure.unwrap();
    // Oracle: the first pair whose junction is vertex 2 reached in chart 1.
    let expected = pairs
        .iter()
        .position(|(a, _)| matches!(a, ThinPath::Combinatorial(p) if p.end() == 2 && !p.is_empty()))
        .unwrap();
    assert_eq!(first.index, expected, "{}", first.detail);
}

#[test]
fn trivial_bundle_gives_degenerate_squares() {
    let space = build_cover(CoverSpec::Builtin("circle-2-charts".into())).unwrap();
    let b = LineBundleData::trivial(space).unwrap();
    let cover = b.space.analytic().unwrap();
    let arc = SmoothPath::new(cover, vec![(Curve::CircleArc { from: 0.0, to: 1.0 }, 0)]).unwrap();
    let tp = thin_path_double_groupoid(&b, &[ThinPath::Smooth(arc)], 3, 64, q()).unwrap();
    for p in &tp.family {
        assert!(tp.hol(p).phase.is_identity(1e-9));
    }
    let pairs = tp.composable_pairs(50);
    assert!(tp.check_transport_law(&pairs).passed());
}

#[test]
fn family_growth_past_budget_is_reported() {
    let b = LineBundleData::monopole(1).unwrap();
    let gens = vec![ThinPath::Smooth(latitude(&b, 1.4, 0)), ThinPath::Smooth(latitude(&b, 1.4, 1))];
    assert!(matches!(
        thin_path_double_groupoid(&b, &gens, 6, 20, q()),
        Err(Error::BudgetExceeded(_))
    ));
}

fn torus_loop(b: &LineBundleData, word: &[(bool, i8)]) -> EdgePath {
    let complex = &b.space.combinatorial().unwrap().complex;
    let (m, n) = (3usize, 4usize);
    let mut steps = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    for &(horizontal, sign) in word {
        if horizontal {
            if sign > 0 {
                steps.push(EdgeStep::new(2 * (i * n + j), 1));
                j = (j + 1) % n;
            } else {
                j = (j + n - 1) % n;
                steps.push(EdgeStep::new(2 * (i * n + j), -1));
            }
        } else if sign > 0 {
            steps.push(EdgeStep::new(2 * (i * n + j) + 1, 1));
            i = (i + 1) % m;
        } else {
            i = (i + m - 1) % m;
            steps.push(EdgeStep::new(2 * (i * n + j) + 1, -1));
        }
    }
    // Close up by walking back to the origin.
    while j != 0 {
        steps.push(EdgeStep::new(2 * (i * n + j), 1));
        j = (j + 1) % n;
    }
    while i != 0 {
        steps.push(EdgeStep::new(2 * (i * n) + 1, 1));
        i = (i + 1) % m;
    }
    EdgePath::new(complex, 0, steps).unwrap()
}

fn word() -> impl Strategy<Value = Vec<(bool, i8)>> {
    prop::collection::vec((any::<bool>(), prop_oneof![Just(1i8), Just(-1i8)]), 0..24)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn combinatorial_gauge_moves_keep_holonomy_exactly(w in word(), chi in prop::collection::vec(-20i64..20, 24)) {
        let b = LineBundleData::flat_torus(3, 4, [Rational64::new(1, 3), Rational64::new(2, 5)]).unwrap();
        let g = GaugeFunctions::Combinatorial(vec![
            chi[..12].iter().map(|&c| Rational64::new(c, 7)).collect(),
            chi[12..].iter().map(|&c| Rational64::new(c, 9)).collect(),
        ]);
        let moved = b.gauge_transform(&g).unwrap();
        prop_assert!(moved.validate().passed());
        let p = ThinPath::Combinatorial(torus_loop(&b, &w));
        let h0 = holonomy(&b, &p, &q()).unwrap();
        let h1 = holonomy(&moved, &p, &q()).unwrap();
        prop_assert_eq!(h0.turns(), h1.turns());
    }

    #[test]
    fn rerouting_through_other_charts_keeps_holonomy(w in word(), picks in prop::collection::vec(any::<bool>(), 40)) {
        let b = LineBundleData::flat_torus(3, 4, [Rational64::new(1, 6), Rational64::new(3, 4)]).unwrap();
        let cover = b.space.combinatorial().unwrap();
        let p = torus_loop(&b, &w);
        let steps: Vec<EdgeStep> = p.steps().to_vec();
        let relabelled = p.with_charts(|s| {
            let k = steps.iter().position(|t| t == s).unwrap_or(0);
            let options = cover.charts_containing_edge(s.edge);
            Some(options[usize::from(picks[k % picks.len()]) % options.len()])
        });
        let h0 = holonomy(&b, &ThinPath::Combinatorial(p), &q()).unwrap();
        let h1 = holonomy(&b, &ThinPath::Combinatorial(relabelled), &q()).unwrap();
        prop_assert_eq!(h0.turns(), h1.turns());
    }

    #[test]
    fn holonomy_is_additive_and_inverts(a in word(), c in word()) {
        let b = LineBundleData::flat_torus(3, 4, [Rational64::new(1, 5), Rational64::new(1, 7)]).unwrap();
        let (p, r) = (torus_loop(&b, &a), torus_loop(&b, &c));
        let hp = holonomy(&b, &ThinPath::Combinatorial(p.clone()), &q()).unwrap();
        let hr = holonomy(&b, &ThinPath::Combinatorial(r.clone()), &q()).unwrap();
        let hpr = holonomy(&b, &ThinPath::Combinatorial(p.concat(&r).unwrap()), &q()).unwrap();
        let hinv = holonomy(&b, &ThinPath::Combinatorial(p.reverse()), &q()).unwrap();
        prop_assert_eq!(hpr.turns(), (hp + hr).turns());
        prop_assert_eq!(hinv.turns(), (-hp).turns());
    }

    #[test]
    fn analytic_gauge_moves_keep_holonomy(theta in 1.3f64..1.8, amp in -1.0f64..1.0, k in 1i32..4, shift in 0.0f64..6.0) {
        let b = LineBundleData::monopole(1).unwrap();
        let chi = |s: f64| ScalarFn::Sum(vec![
            ScalarFn::Wave { index: 1, k: f64::from(k), amp: amp * s, shift },
            ScalarFn::CosTheta(0.3 * s),
        ]);
        let moved = b.gauge_transform(&GaugeFunctions::Analytic(vec![chi(1.0), chi(-0.5)])).unwrap();
        let cover = b.space.analytic().unwrap();
        let curve = Curve::Latitude { theta, phi_from: 0.3, phi_to: 0.3 + TAU };
        let p = ThinPath::Smooth(SmoothPath::with_switches(cover, curve, 1, &[(0.4, 0)]).unwrap());
        let h0 = holonomy(&b, &p, &q()).unwrap();
        let h1 = holonomy(&moved, &p, &q()).unwrap();
        prop_assert!(h0.approx_eq(&h1, 1e-9), "{} vs {}", h0, h1);
    }

    #[test]
    fn reparametrized_loops_keep_holonomy(k in 0.5f64..3.0, theta in 0.3f64..1.8) {
        let b = LineBundleData::monopole(2).unwrap();
        let p = latitude(&b, theta, 0);
        let moved = p.reparametrize(&Reparam::Power(k)).unwrap();
        let h0 = holonomy(&b, &ThinPath::Smooth(p), &q()).unwrap();
        let h1 = holonomy(&b, &ThinPath::Smooth(moved), &q()).unwrap();
        prop_assert!(h0.approx_eq(&h1, 1e-9));
    }
}
