use std::collections::BTreeSet;
use std::sync::Arc;

use holonomy_core::groupoid::{generated_subgroupoid, FiniteGroupoid, Groupoid, Subgroupoid};
use holonomy_core::local::{
    build_local_subgroupoid, c_upsilon, germ_at, germ_equal, globalise, pair_atlas, EdgeTransport, GeodesicStructure,
    Germ, HolArrow, LocalSubgroupoid, MAX_RULES,
};
use holonomy_core::site::{mask, members, FiniteSite, PointSet};
use holonomy_core::Error;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn circle_two_arcs() -> FiniteSite {
    FiniteSite::circle(8, &[vec![0, 1, 2, 3, 4], vec![4, 5, 6, 7, 0]]).unwrap()
}

fn interval_two_arcs() -> FiniteSite {
    FiniteSite::interval(8, &[vec![0, 1, 2, 3, 4], vec![3, 4, 5, 6, 7]]).unwrap()
}

/// Germ equality decided on the smallest open neighbourhood only.
fn germ_oracle(site: &FiniteSite, a: &Germ, b: &Germ) -> bool {
    let w = members(site.minimal_open(a.point));
    a.point == b.point && a.sub.restrict(&w) == b.sub.restrict(&w)
}

/// Rank of the amalgamated graph: every chart's induced graph is a path,
/// edges of two charts are merged when both ends lie in one component of
/// their overlap, and the rank is `E − V + 1`.
fn amalgamated_rank(site: &FiniteSite) -> usize {
    let charts = site.cover_sets();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for (i, &u) in charts.iter().enumerate() {
        for &(a, b) in site.edges() {
            if members(u).contains(&a) && members(u).contains(&b) {
                let shared = (0..i).any(|j| {
                    site.components(charts[j] & u)
                        .iter()
                        .any(|&c| members(c).contains(&a) && members(c).contains(&b))
                });
                if !shared {
                    edges.push((i, a, b));
                }
            }
        }
    }
    edges.len() + 1 - site.point_count()
}

fn random_wide(parent: &Arc<FiniteGroupoid>, u: PointSet, rng: &mut ChaCha8Rng) -> Subgroupoid {
    let objs: Vec<usize> = members(u).into_iter().collect();
    let gens: Vec<usize> = (0..rng.gen_range(0..4))
        .map(|_| {
            let x = *objs.choose(rng).unwrap();
            let y = *objs.choose(rng).unwrap();
            let hom = parent.hom(x, y);
            *hom.choose(rng).unwrap()
        })
        .collect();
    Subgroupoid::generated_on(parent.clone(), members(u), gens).unwrap()
}

#[test]
fn restriction_germs_are_equal_on_bundled_sites() {
    for site in [circle_two_arcs(), interval_two_arcs()] {
        let parent = Arc::new(FiniteGroupoid::gauge(site.point_count(), 3, None).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut checked = 0;
        for &u in site.opens().iter().filter(|&&u| u != 0) {
            let h = random_wide(&parent, u, &mut rng);
            for &v in site.opens().iter().filter(|&&v| v != 0 && v & !u == 0) {
                for x in members(v) {
                    let a = germ_at(&site, x, u, h.clone()).unwrap();
                    let b = germ_at(&site, x, v, h.restrict(&members(v))).unwrap();
                    assert!(germ_equal(&site, &a, &b));
                    checked += 1;
                }
            }
        }
        assert!(checked > 10);
    }
}

#[test]
fn germs_agree_inside_the_overlap_only() {
    let site = FiniteSite::interval(6, &[vec![0, 1, 2, 3], vec![2, 3, 4, 5], vec![2, 3]]).unwrap();
    let parent = Arc::new(FiniteGroupoid::gauge(6, 2, None).unwrap());
    let whole: BTreeSet<usize> = (0..6).collect();
    // H has a phase-1/2 arrow 0 → 1, K does not; both contain all of G|{2,3}.
    let g01 = parent.gauge_arrow(0, 1, Rational64::new(1, 2)).unwrap();
    let h = Subgroupoid::generated_on(parent.clone(), whole.clone(), parent.hom(2, 3).into_iter().chain([g01])).unwrap();
    let k = Subgroupoid::generated_on(parent.clone(), whole, parent.hom(2, 3)).unwrap();
    let x_all = site.whole();
    for x in 0..6 {
        let a = germ_at(&site, x, x_all, h.clone()).unwrap();
        let b = germ_at(&site, x, x_all, k.clone()).unwrap();
        let expected = germ_oracle(&site, &a, &b);
        assert_eq!(germ_equal(&site, &a, &b), expected);
        assert_eq!(expected, x >= 2, "point {x}");
    }
    let bad = germ_at(&site, 0, mask([2, 3]), k.restrict(&BTreeSet::from([2, 3])));
    assert!(matches!(bad, Err(Error::PointOutside(_))));
    let narrow = germ_at(&site, 2, mask([2, 3]), k.restrict(&BTreeSet::from([2])));
    assert!(matches!(narrow, Err(Error::NotWide(_))));
}

#[test]
fn germ_equality_is_an_equivalence_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut triples = 0;
    while triples < 1000 {
        let n = rng.gen_range(3..=8);
        let covers: Vec<Vec<usize>> = (0..rng.gen_range(1..=4))
            .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
            .collect();
        let site = FiniteSite::new(n, &covers, Vec::new()).unwrap();
        assert!(site.opens().len() <= 1 << 10);
        let parent = Arc::new(FiniteGroupoid::gauge(n, 2, None).unwrap());
        let x = rng.gen_range(0..n);
        let nbhds: Vec<PointSet> = site.opens_containing(x).collect();
        let germs: Vec<Germ> = (0..3)
            .map(|_| {
                let u = *nbhds.choose(&mut rng).unwrap();
                germ_at(&site, x, u, random_wide(&parent, u, &mut rng)).unwrap()
            })
            .collect();
        let eq = |i: usize, j: usize| germ_equal(&site, &germs[i], &germs[j]);
        for i in 0..3 {
            assert!(eq(i, i));
            for j in 0..3 {
                assert_eq!(eq(i, j), eq(j, i));
                assert_eq!(eq(i, j), germ_oracle(&site, &germs[i], &germs[j]));
                for k in 0..3 {
                    if eq(i, j) && eq(j, k) {
                        assert!(eq(i, k));
                    }
                }
            }
        }
        triples += 1;
    }
}

fn gauge_transport(n: usize, q: i64, edges: &[(usize, usize)], phases: &[i64]) -> EdgeTransport {
    let parent = Arc::new(FiniteGroupoid::gauge(n, q, None).unwrap());
    let arrows = edges
        .iter()
        .zip(phases)
        .map(|(&(a, b), &k)| parent.gauge_arrow(a, b, Rational64::new(k, q)).unwrap())
        .collect();
    EdgeTransport::new(parent, edges.to_vec(), arrows).unwrap()
}

#[test]
fn reachability_subgroupoids() {
    // No edges: only identities.
    let parent = Arc::new(FiniteGroupoid::gauge(4, 3, None).unwrap());
    let none = EdgeTransport::new(parent.clone(), Vec::new(), Vec::new()).unwrap();
    let c = c_upsilon(&none, mask(0..4)).unwrap();
    assert_eq!(c, Subgroupoid::discrete(parent.clone(), (0..4).collect()));

    // Flat transport on a path: one arrow per ordered pair, trivial loops.
    let edges: Vec<(usize, usize)> = (0..5).map(|i| (i, i + 1)).collect();
    let t = gauge_transport(6, 5, &edges, &[1, 3, 0, 4, 2]);
    let c = c_upsilon(&t, mask(0..6)).unwrap();
    assert!(c.is_wide());
    for x in 0..6 {
        assert!(c.vertex_group(x).unwrap().is_trivial());
        for y in 0..6 {
            let hom: Vec<_> = t.parent.hom(x, y).into_iter().filter(|g| c.contains(*g)).collect();
            assert_eq!(hom.len(), 1);
        }
    }

    // Circle with holonomy 2/6: the union over two arcs generates C_Υ(𝔾).
    let edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    let t = gauge_transport(6, 6, &edges, &[2, 0, 0, 0, 0, 0]);
    let whole = c_upsilon(&t, mask(0..6)).unwrap();
    assert_eq!(whole.vertex_group(0).unwrap().order(), 3);
    let arcs = [mask([0, 1, 2, 3]), mask([3, 4, 5, 0])];
    let pieces: Vec<usize> = arcs
        .iter()
        .flat_map(|&u| c_upsilon(&t, u).unwrap().arrows().iter().copied().collect::<Vec<_>>())
        .collect();
    assert_eq!(generated_subgroupoid(t.parent.clone(), pieces).unwrap(), whole);

    let wrong = EdgeTransport::new(t.parent.clone(), vec![(0, 1)], vec![t.parent.identity_id(0)]);
    assert!(matches!(wrong, Err(Error::InconsistentTransport(_))));
    let twice = EdgeTransport::new(
        t.parent.clone(),
        vec![(0, 1), (1, 0)],
        vec![t.arrows[0], t.parent.hom(1, 0)[0]],
    );
    assert!(matches!(twice, Err(Error::InconsistentTransport(_))));
}

#[test]
fn local_subgroupoid_from_bfs_geodesics() {
    let site = interval_two_arcs();
    let t = gauge_transport(8, 4, site.edges(), &[1, 2, 3, 0, 1, 2, 3]);
    let geod = GeodesicStructure::bfs_lex(site.edges(), site.cover_sets());
    let (s, report) = build_local_subgroupoid(&site, &geod, std::slice::from_ref(&t), 6).unwrap();
    assert!(report.paths_checked > report.pairs);
    let locality = s.check_path_locality();
    assert!(locality.passed(), "{:?}", locality.first_failure);

    // One chart: the section is the same germ representative everywhere.
    let single = FiniteSite::interval(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
    let t1 = gauge_transport(5, 4, single.edges(), &[1, 1, 1, 1]);
    let g1 = GeodesicStructure::bfs_lex(single.edges(), single.cover_sets());
    let (s1, _) = build_local_subgroupoid(&single, &g1, &[t1], 4).unwrap();
    assert!(s1.section.iter().all(|g| g.open == single.whole() && g.sub == s1.section[0].sub));

    // A different path between overlap points in the second chart.
    let mut broken = geod.clone();
    broken.paths[1].insert((3, 4), vec![3, 4, 3, 4]);
    match build_local_subgroupoid(&site, &broken, std::slice::from_ref(&t), 6) {
        Err(Error::OverlapIncoherence(msg)) => assert!(msg.contains("charts 0 and 1"), "{msg}"),
        other => panic!("expected OverlapIncoherence, got {other:?}"),
    }

    // A chart containing a loop with holonomy is not flat.
    let circle = FiniteSite::circle(6, &[(0..6).collect()]).unwrap();
    let tc = gauge_transport(6, 6, circle.edges(), &[1, 0, 0, 0, 0, 0]);
    let gc = GeodesicStructure::bfs_lex(circle.edges(), circle.cover_sets());
    assert!(matches!(
        build_local_subgroupoid(&circle, &gc, &[tc], 6),
        Err(Error::FlatnessViolation(_))
    ));
}

fn random_words(hol: &holonomy_core::local::HolonomyGroupoid, n: usize, rng: &mut ChaCha8Rng, len: usize) -> Vec<HolArrow> {
    let letters = hol.letters();
    (0..n)
        .map(|_| {
            let source = rng.gen_range(0..8);
            let mut at = source;
            let mut word = Vec::new();
            for _ in 0..rng.gen_range(0..=len) {
                let options: Vec<u32> = (0..letters.len() as u32)
                    .filter(|&l| hol_source(hol, l) == at)
                    .collect();
                let l = *options.choose(rng).unwrap();
                word.push(l);
                at = hol.word(source, &word).unwrap().target;
            }
            hol.word(source, &word).unwrap()
        })
        .collect()
}

fn hol_source(hol: &holonomy_core::local::HolonomyGroupoid, l: u32) -> usize {
    hol.word(0, &[l]).map(|_| 0).unwrap_or_else(|_| {
        (0..8).find(|&x| hol.word(x, &[l]).is_ok()).unwrap()
    })
}

#[test]
fn circle_globalisation_has_infinite_cyclic_kernel() {
    let site = circle_two_arcs();
    let s = pair_atlas(&site).unwrap();
    let g = globalise(&s, MAX_RULES).unwrap();
    let p = g.hol.vertex_group(0);
    assert_eq!(p.rank(), amalgamated_rank(&site));
    assert_eq!(p.rank(), 1);
    assert!(p.is_free());
    assert_eq!(p.to_string(), "⟨a |⟩");
    for x in 0..8 {
        assert!(g.glob.vertex_group(x).unwrap().is_trivial());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let words = random_words(&g.hol, 2000, &mut rng, 6);
    let pairs: Vec<(HolArrow, HolArrow)> = words
        .chunks(2)
        .map(|c| {
            let a = c[0].clone();
            let b = g.hol.compose(&g.hol.identity(&a.target), &c[1]).ok().filter(|b| b.source == a.target);
            let b = b.unwrap_or_else(|| g.hol.identity(&a.target));
            (a, b)
        })
        .collect();
    assert!(pairs.len() >= 1000);
    let law = g.hol.check_morphism(&pairs);
    assert!(law.passed() && law.checked == pairs.len());
    // Around the circle once: U1 from 0 to 4, U2 back to 0.
    let there = g.hol.letter(0, s.parent().hom(0, 4)[0]).unwrap();
    let back = g.hol.letter(1, s.parent().hom(4, 0)[0]).unwrap();
    let loop1 = g.hol.word(0, &[there, back]).unwrap();
    assert_eq!(g.hol.evaluate(&loop1), s.parent().identity_id(0));
    let mut power = g.hol.identity(&0);
    let mut seen = BTreeSet::new();
    for _ in 0..6 {
        power = g.hol.compose(&power, &loop1).unwrap();
        assert!(!power.word.is_empty());
        assert_eq!(g.hol.evaluate(&power), s.parent().identity_id(0));
        assert!(seen.insert(power.word.clone()));
    }
    assert_eq!(g.hol.compose(&power, &g.hol.inverse(&power)).unwrap(), g.hol.identity(&0));
}

#[test]
fn interval_globalisation_is_bijective() {
    let site = interval_two_arcs();
    let s = pair_atlas(&site).unwrap();
    let g = globalise(&s, MAX_RULES).unwrap();
    assert_eq!(amalgamated_rank(&site), 0);
    let words = g.hol.enumerate(3);
    assert_eq!(words.len(), 64);
    for (&(x, y), forms) in &words {
        assert_eq!(forms.len(), 1, "{x} → {y}: {forms:?}");
        let w = forms.iter().next().unwrap();
        let a = g.hol.word(x, w).unwrap();
        assert_eq!(s.parent().endpoints(g.hol.evaluate(&a)), (x, y));
    }
    assert!(matches!(globalise(&s, 1), Err(Error::NonConfluentRules(_))));
}

#[test]
fn glob_does_not_depend_on_piece_order() {
    let site = FiniteSite::circle(6, &[vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]]).unwrap();
    let t = gauge_transport(6, 6, site.edges(), &[1, 0, 2, 0, 0, 1]);
    let geod = GeodesicStructure::bfs_lex(site.edges(), site.cover_sets());
    let (s, _) = build_local_subgroupoid(&site, &geod, std::slice::from_ref(&t), 4).unwrap();
    let mut reversed = s.atlas.clone();
    reversed.reverse();
    let r = LocalSubgroupoid::from_atlas(site.clone(), reversed).unwrap();
    let a = globalise(&s, MAX_RULES).unwrap();
    let b = globalise(&r, MAX_RULES).unwrap();
    assert_eq!(a.glob, b.glob);
    assert_eq!(a.glob.vertex_group(0).unwrap().order(), 6 / 2);
    assert_eq!(a.hol.vertex_group(0).to_string(), "⟨a |⟩");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn interval_covers_with_connected_overlaps_give_bijective_morphisms(
        n in 4usize..=12,
        cuts in proptest::collection::vec(1usize..11, 1..3),
        overlap in 1usize..3,
    ) {
        let mut cuts: Vec<usize> = cuts.into_iter().filter(|&c| c < n - 1).collect();
        cuts.sort();
        cuts.dedup();
        let mut pieces = Vec::new();
        let mut start = 0;
        for &c in &cuts {
            pieces.push((start..=c).collect::<Vec<_>>());
            start = c.saturating_sub(overlap - 1);
        }
        pieces.push((start..n).collect());
        let site = FiniteSite::interval(n, &pieces).unwrap();
        let s = pair_atlas(&site).unwrap();
        let g = globalise(&s, MAX_RULES).unwrap();
        let words = g.hol.enumerate(pieces.len() + 1);
        prop_assert_eq!(words.len(), n * n);
        for forms in words.values() {
            prop_assert_eq!(forms.len(), 1);
        }
        prop_assert_eq!(g.hol.vertex_group(0).rank(), 0);
    }

    #[test]
    fn reachability_output_is_a_wide_subgroupoid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..7);
        let edges: Vec<(usize, usize)> = (0..rng.gen_range(1..8))
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .filter(|(a, b)| a != b)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let phases: Vec<i64> = edges.iter().map(|_| rng.gen_range(0..4)).collect();
        let parent = Arc::new(FiniteGroupoid::gauge(n, 4, None).unwrap());
        let arrows = edges.iter().zip(&phases)
            .map(|(&(a, b), &k)| parent.gauge_arrow(a, b, Rational64::new(k, 4)).unwrap())
            .collect();
        let Ok(t) = EdgeTransport::new(parent.clone(), edges, arrows) else { return Ok(()) };
        let u = mask((0..n).filter(|_| rng.gen_bool(0.7)));
        prop_assume!(u != 0);
        let c = c_upsilon(&t, u).unwrap();
        prop_assert!(c.is_wide_in(&members(u)));
        prop_assert!(Subgroupoid::new(parent, c.objects().clone(), c.arrows().clone()).is_ok());
    }
}
