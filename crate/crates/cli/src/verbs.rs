//! One function per scenario verb.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use holonomy_core::bundle::LineBundleData;
use holonomy_core::cover::Manifold;
use holonomy_core::crossed::{
    crossed_module_from_double, double_from_crossed_module, find_isomorphism, small_crossed_modules,
};
use holonomy_core::double::{check_interchange_exhaustive, FiniteDouble};
use holonomy_core::gerbe::{
    flag_sum, surface_holonomy_canonical, sweep_assignments, two_holonomy, GerbeData, SurfaceAssignment, TwoLoop,
};
use holonomy_core::groupoid::FiniteGroupoid;
use holonomy_core::local::{
    build_local_subgroupoid, globalise, pair_atlas, GeodesicStructure, Globalisation, HolArrow, HolonomyGroupoid,
    LocalSubgroupoid,
};
use holonomy_core::loopspace::{loop_space_groupoids, loop_transport, Homotopy, LoopClass};
use holonomy_core::paths::ThinPath;
use holonomy_core::quadrature::Quadrature;
use holonomy_core::site::{members, FiniteSite};
use holonomy_core::transport::{holonomy, thin_path_double_groupoid, transport};
use holonomy_core::{Error, Phase, Result};

use crate::model;
use crate::report::{phase_json, round12, Check, VerbResult};
use crate::scenario::{
    AtlasSpec, DoubleSweep, EdgePhases, HomotopySpec, PathSpec, Scenario, SurfaceSpec, ThinChecks, Turns,
};
use crate::sweeps::{backtrack, random_reparam, surface_backtrack, surface_reorder, sweep, trial_rng};

/// Shared settings for one scenario run.
pub struct Context<'a> {
    pub scenario: &'a Scenario,
    pub tolerance: f64,
    pub parallel: bool,
    pub quad: Quadrature,
}

impl Context<'_> {
    pub fn bundle(&self) -> Result<LineBundleData> {
        let spec = self
            .scenario
            .bundle
            .as_ref()
            .ok_or_else(|| Error::Invalid("this verb needs the scenario `bundle`".into()))?;
        model::bundle(self.scenario, spec)
    }

    pub fn gerbe(&self) -> Result<GerbeData> {
        let spec = self
            .scenario
            .gerbe
            .as_ref()
            .ok_or_else(|| Error::Invalid("this verb needs the scenario `gerbe`".into()))?;
        model::gerbe(self.scenario, spec)
    }

    pub fn site(&self) -> Result<FiniteSite> {
        let spec = self
            .scenario
            .site
            .as_ref()
            .ok_or_else(|| Error::Invalid("this verb needs the scenario `site`".into()))?;
        model::site(self.scenario, spec)
    }

    pub fn seed(&self) -> u64 {
        self.scenario.seed
    }
}

fn expect_phase(r: &mut VerbResult, got: &Phase, expect: Option<Turns>, tol: f64) {
    if let Some(e) = expect {
        let want = Phase::from_ratio(e.0);
        r.check(Check::with_detail(format!("phase equals {e}"), got.approx_eq(&want, tol), || {
            format!("got {}, off by {:.3e} rad", got.turns_string(), got.distance(&want))
        }));
    }
}

pub fn validate_bundle(cx: &Context, total: Option<Turns>, r: &mut VerbResult) -> Result<()> {
    let b = cx.bundle()?;
    let rep = b.validate();
    r.value("backend", if b.is_combinatorial() { "combinatorial" } else { "analytic" });
    r.value("charts", b.chart_count());
    r.value("identities_checked", rep.checked);
    r.value("violations", rep.violations.len());
    r.check(Check::with_detail("cocycle and compatibility identities", rep.passed(), || {
        let v = &rep.violations[0];
        format!("{} fails at {} by {}", v.identity, v.location, v.defect)
    }));
    if b.is_combinatorial() {
        let t = b.total_curvature(&cx.quad)?;
        r.value("total_curvature", phase_json(&t));
        if let Some(e) = total {
            let want = Phase::from_ratio(e.0);
            r.check(Check::with_detail(format!("total curvature equals {e}"), t.approx_eq(&want, cx.tolerance), || {
                format!("got {}", t.turns_string())
            }));
        }
    } else if b.space.analytic().is_some_and(|c| c.manifold == Manifold::Sphere) {
        let flux = b.sphere_flux(&cx.quad)?;
        r.value("total_curvature", json!({ "radians": round12(flux), "turns": round12(flux / TAU) }));
        if let Some(e) = total {
            let want = *e.0.numer() as f64 / *e.0.denom() as f64 * TAU;
            r.check(Check::with_detail(
                format!("total curvature equals {e}"),
                (flux - want).abs() <= cx.tolerance,
                || format!("∫F = {flux} rad, expected {want} rad"),
            ));
        }
    } else if total.is_some() {
        return Err(Error::Invalid("total curvature is only available on combinatorial spaces and the sphere".into()));
    }
    Ok(())
}

pub fn transport_verb(cx: &Context, path: &PathSpec, expect: Option<Turns>, r: &mut VerbResult) -> Result<()> {
    let b = cx.bundle()?;
    let p = model::thin_path(&b, path)?;
    let t = transport(&b, &p, &cx.quad)?;
    r.value("phase", phase_json(&t.value));
    r.value("segments", t.segments.len());
    r.value(
        "insertions",
        Value::Array(
            t.insertions
                .iter()
                .map(|i| json!({ "from": i.from, "to": i.to, "at": i.location, "phase": phase_json(&i.phase) }))
                .collect(),
        ),
    );
    expect_phase(r, &t.value, expect, cx.tolerance);
    Ok(())
}

pub fn holonomy_verb(
    cx: &Context,
    path: &PathSpec,
    expect: Option<Turns>,
    thin: Option<&ThinChecks>,
    r: &mut VerbResult,
) -> Result<()> {
    let b = cx.bundle()?;
    let p = model::thin_path(&b, path)?;
    let h = holonomy(&b, &p, &cx.quad)?;
    r.value("phase", phase_json(&h));
    expect_phase(r, &h, expect, cx.tolerance);
    if let Some(t) = thin {
        let same = |q: &ThinPath| -> Result<Option<String>> {
            let g = holonomy(&b, q, &cx.quad)?;
            Ok((!g.approx_eq(&h, cx.tolerance)).then(|| format!("perturbed holonomy {}", g.turns_string())))
        };
        r.check(Check::law(&sweep("backtrack insertion invariance", t.backtracks, cx.parallel, |k| {
            let mut rng = trial_rng(cx.seed(), k);
            same(&backtrack(&b, &p, &mut rng)?)
        })));
        r.check(Check::law(&sweep("reparametrization invariance", t.reparametrizations, cx.parallel, |k| {
            let mut rng = trial_rng(cx.seed() ^ 0x5EED, k);
            same(&p.reparametrize(&random_reparam(&mut rng))?)
        })));
    }
    Ok(())
}

pub fn validate_gerbe(cx: &Context, r: &mut VerbResult) -> Result<()> {
    let g = cx.gerbe()?;
    let rep = g.validate();
    r.value("charts", g.chart_count());
    r.value("relations_checked", rep.checked);
    r.value("violations", rep.violations.len());
    r.check(Check::with_detail("gerbe cocycle relations", rep.passed(), || {
        let v = &rep.violations[0];
        format!("{} fails at {} by {} turns", v.relation, v.location, v.defect)
    }));
    Ok(())
}

fn gauge_sweep(
    cx: &Context,
    g: &GerbeData,
    trials: usize,
    recorded: impl Fn(&GerbeData) -> Result<Vec<Phase>> + Sync,
) -> Result<Check> {
    let before = recorded(g)?;
    let report = sweep("Deligne gauge invariance", trials, cx.parallel, |k| {
        let moved = g.gauge_transform(&model::random_gauge(g, cx.seed().wrapping_add(1000 + k as u64)))?;
        let after = recorded(&moved)?;
        Ok(before
            .iter()
            .zip(&after)
            .position(|(x, y)| x != y)
            .map(|i| format!("recorded holonomy {i} moved from {} to {}", before[i].turns_string(), after[i].turns_string())))
    });
    Ok(Check::law(&report))
}

fn ratio_string(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn surface_holonomy_verb(
    cx: &Context,
    spec: &SurfaceSpec,
    expect: Option<Turns>,
    limit: Option<u64>,
    thin: Option<&ThinChecks>,
    gauge_trials: usize,
    r: &mut VerbResult,
) -> Result<()> {
    let g = cx.gerbe()?;
    g.ensure_valid()?;
    let c = g.complex();
    let s = model::surface(c, spec)?;
    let v = surface_holonomy_canonical(&g, &s)?;
    let parts = flag_sum(&g, s.faces(), &SurfaceAssignment::canonical(&g, s.faces())?);
    r.value("faces", s.faces().len());
    r.value("phase", phase_json(&v));
    r.value(
        "flag_sum",
        json!({
            "faces": ratio_string(parts.faces),
            "edges": ratio_string(parts.edges),
            "vertices": ratio_string(parts.vertices),
        }),
    );
    expect_phase(r, &v, expect, 0.0);
    if let Some(limit) = limit {
        let sw = sweep_assignments(&g, &s, limit)?;
        r.value("assignments", sw.count);
        r.value("assignment_mismatches", sw.mismatches);
        let agree = sw.mismatches == 0 && Phase::from_ratio(sw.value) == v;
        r.check(Check::with_detail("every valid assignment gives the same value", agree, || {
            format!("{} of {} assignments differ", sw.mismatches, sw.count)
        }));
    }
    if let Some(t) = thin {
        let same = |q: &TwoLoop| -> Result<Option<String>> {
            let w = surface_holonomy_canonical(&g, q)?;
            Ok((w != v).then(|| format!("perturbed surface holonomy {}", w.turns_string())))
        };
        r.check(Check::law(&sweep("backtrack insertion invariance", t.backtracks, cx.parallel, |k| {
            same(&surface_backtrack(c, &s, &mut trial_rng(cx.seed(), k)))
        })));
        r.check(Check::law(&sweep("reparametrization invariance", t.reparametrizations, cx.parallel, |k| {
            same(&surface_reorder(c, &s, &mut trial_rng(cx.seed() ^ 0x5EED, k))?)
        })));
    }
    if gauge_trials > 0 {
        r.check(gauge_sweep(cx, &g, gauge_trials, |h| Ok(vec![surface_holonomy_canonical(h, &s)?]))?);
    }
    Ok(())
}

pub fn two_holonomy_verb(
    cx: &Context,
    generators: &[SurfaceSpec],
    max_len: usize,
    budget: usize,
    gauge_trials: usize,
    r: &mut VerbResult,
) -> Result<()> {
    let g = cx.gerbe()?;
    g.ensure_valid()?;
    let gens = generators
        .iter()
        .map(|s| model::surface(g.complex(), s))
        .collect::<Result<Vec<_>>>()?;
    let table = two_holonomy(&g, &gens, max_len, budget)?;
    r.value("two_loops", table.loops.len());
    r.value(
        "generator_values",
        Value::Array(gens.iter().map(|s| surface_holonomy_canonical(&g, s).map(|p| phase_json(&p))).collect::<Result<_>>()?),
    );
    for law in [&table.homomorphism, &table.inverses, &table.commutativity, &table.thin_invariance] {
        r.check(Check::law(law));
    }
    if gauge_trials > 0 {
        let loops = &table.loops;
        r.check(gauge_sweep(cx, &g, gauge_trials, |h| {
            loops.iter().map(|s| surface_holonomy_canonical(h, s)).collect()
        })?);
    }
    Ok(())
}

pub fn loop_transport_verb(
    cx: &Context,
    loops: &[PathSpec],
    homotopies: &[HomotopySpec],
    pairs: usize,
    gauge_trials: usize,
    r: &mut VerbResult,
) -> Result<()> {
    let g = cx.gerbe()?;
    g.ensure_valid()?;
    let c = g.complex();
    let paths = loops.iter().map(|p| model::edge_path(c, p)).collect::<Result<Vec<_>>>()?;
    let pick = |i: usize| {
        paths
            .get(i)
            .ok_or_else(|| Error::Invalid(format!("homotopy refers to loop {i}, but only {} are listed", paths.len())))
    };
    let hs = homotopies
        .iter()
        .map(|h| Homotopy::new(c, pick(h.source)?, pick(h.target)?, h.faces.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut listed = Vec::new();
    for (spec, h) in homotopies.iter().zip(&hs) {
        let t = loop_transport(&g, h)?;
        listed.push(json!({
            "source": spec.source,
            "target": spec.target,
            "faces": h.faces.len(),
            "phase": phase_json(&t.phase),
        }));
    }
    r.value("transports", Value::Array(listed));
    let lsg = loop_space_groupoids(&g, &paths, &hs)?;
    r.value("loops", lsg.objects.len());
    r.value("cylinder_arrows", lsg.arrows.len());
    r.value("quotient_arrows", lsg.quotient.len());
    let mut groups = serde_json::Map::new();
    for (i, p) in paths.iter().enumerate() {
        if let Some(sub) = lsg.vertex_phases.get(&LoopClass::of(p)?) {
            groups.insert(
                format!("loop {i}"),
                json!({ "generator": format!("{} turns", ratio_string(sub.generator)), "order": sub.order }),
            );
        }
    }
    r.value("vertex_phase_groups", Value::Object(groups));
    r.check(Check::law(&lsg.quotient_morphism));
    r.check(Check::law(&lsg.check_connection_pair(pairs)));
    if gauge_trials > 0 {
        let closed: Vec<&Homotopy> = hs.iter().filter(|h| h.source == h.target).collect();
        r.check(gauge_sweep(cx, &g, gauge_trials, |x| {
            closed.iter().map(|h| loop_transport(x, h).map(|t| t.phase)).collect()
        })?);
    }
    Ok(())
}

fn describe_local(r: &mut VerbResult, site: &FiniteSite, s: &LocalSubgroupoid) -> Result<()> {
    r.value("points", site.point_count());
    r.value("opens", site.opens().len());
    let charts: Vec<Value> = s
        .atlas
        .iter()
        .map(|(u, h)| {
            let pts = members(*u);
            let base = *pts.iter().next().expect("charts are nonempty");
            Ok(json!({
                "points": pts.into_iter().collect::<Vec<_>>(),
                "arrows": h.arrows().len(),
                "vertex_group_order": h.vertex_group(base)?.order(),
            }))
        })
        .collect::<Result<_>>()?;
    r.value("charts", Value::Array(charts));
    r.check(Check::law(&s.check_path_locality()));
    Ok(())
}

pub fn build_local_verb(cx: &Context, spec: &EdgePhases, budget: usize, r: &mut VerbResult) -> Result<()> {
    let site = cx.site()?;
    let t = model::edge_transport(&site, spec)?;
    let geod = GeodesicStructure::bfs_lex(site.edges(), site.cover_sets());
    let (s, rep) = build_local_subgroupoid(&site, &geod, std::slice::from_ref(&t), budget)?;
    r.value(
        "geodesics",
        json!({ "pairs": rep.pairs, "overlap_pairs": rep.overlap_pairs, "paths_checked": rep.paths_checked }),
    );
    describe_local(r, &site, &s)
}

/// A random reduced word of at most `len` letters starting at `start`.
fn random_arrow(hol: &HolonomyGroupoid, parent: &FiniteGroupoid, start: usize, len: usize, rng: &mut impl Rng) -> Result<HolArrow> {
    let letters = hol.letters();
    let mut at = start;
    let mut word = Vec::new();
    for _ in 0..len {
        let options: Vec<u32> = (0..letters.len())
            .filter(|&l| parent.endpoints(letters[l].arrow).0 == at)
            .map(|l| l as u32)
            .collect();
        let Some(&l) = options.choose(rng) else { break };
        word.push(l);
        at = parent.endpoints(letters[l as usize].arrow).1;
    }
    hol.word(start, &word)
}

pub struct GlobalExpectations<'a> {
    pub pairs: usize,
    pub bijective: Option<usize>,
    pub hol: Option<&'a str>,
    pub glob_order: Option<usize>,
}

pub fn describe_globalisation(
    cx: &Context,
    site: &FiniteSite,
    s: &LocalSubgroupoid,
    gl: &Globalisation,
    want: &GlobalExpectations,
    r: &mut VerbResult,
) -> Result<()> {
    let parent: &Arc<FiniteGroupoid> = s.parent();
    r.value("letters", gl.hol.letters().len());
    r.value("rules", gl.hol.rules());
    r.value("completion_rounds", gl.hol.completion.rounds);
    let orders = (0..site.point_count())
        .map(|x| gl.glob.vertex_group(x).map(|v| v.order()))
        .collect::<Result<Vec<_>>>()?;
    r.value("glob_arrows", gl.glob.arrows().len());
    r.value("glob_vertex_group_orders", orders.clone());
    let pres = gl.hol.vertex_group(0);
    r.value("hol_vertex_group", pres.to_string());
    r.value("hol_vertex_group_rank", pres.rank());
    r.value("hol_vertex_group_free", pres.is_free());

    let mut rng = trial_rng(cx.seed(), 0);
    let mut pairs = Vec::with_capacity(want.pairs);
    for _ in 0..want.pairs {
        let start = rng.gen_range(0..site.point_count());
        let la = rng.gen_range(0..=6);
        let a = random_arrow(&gl.hol, parent, start, la, &mut rng)?;
        let lb = rng.gen_range(0..=6);
        let b = random_arrow(&gl.hol, parent, a.target, lb, &mut rng)?;
        pairs.push((a, b));
    }
    let law = gl.hol.check_morphism(&[]).law;
    let report = sweep(&law, pairs.len(), cx.parallel, |k| {
        let one = gl.hol.check_morphism(std::slice::from_ref(&pairs[k]));
        Ok(one.first_failure.map(|c| c.detail))
    });
    r.check(Check::law(&report));

    if let Some(max_len) = want.bijective {
        let words = gl.hol.enumerate(max_len);
        let n = site.point_count();
        let bad = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|k| words.get(k).map_or(0, |w| w.len()) != 1);
        r.value("normal_forms", words.values().map(|w| w.len()).sum::<usize>());
        r.check(Check::with_detail("covering morphism is bijective", bad.is_none(), || {
            let (x, y) = bad.expect("failure");
            format!("{} normal forms from {x} to {y} up to length {max_len}", words.get(&(x, y)).map_or(0, |w| w.len()))
        }));
    }
    if let Some(h) = want.hol {
        r.check(Check::with_detail(format!("Hol vertex group is {h}"), pres.to_string() == h, || {
            format!("got {pres}")
        }));
    }
    if let Some(k) = want.glob_order {
        r.check(Check::with_detail(
            format!("glob vertex groups have order {k}"),
            orders.iter().all(|&o| o == k),
            || format!("orders {orders:?}"),
        ));
    }
    Ok(())
}

pub fn globalise_verb(cx: &Context, atlas: &AtlasSpec, max_rules: usize, want: &GlobalExpectations, r: &mut VerbResult) -> Result<()> {
    let site = cx.site()?;
    let s = match atlas {
        AtlasSpec::Pair => pair_atlas(&site)?,
        AtlasSpec::Transport { transport: t, path_budget } => {
            let t = model::edge_transport(&site, t)?;
            let geod = GeodesicStructure::bfs_lex(site.edges(), site.cover_sets());
            build_local_subgroupoid(&site, &geod, std::slice::from_ref(&t), *path_budget)?.0
        }
    };
    let gl = globalise(&s, max_rules)?;
    describe_globalisation(cx, &site, &s, &gl, want, r)
}

pub fn double_check_verb(cx: &Context, sweep_spec: &DoubleSweep, r: &mut VerbResult) -> Result<()> {
    match sweep_spec {
        DoubleSweep::TransportLaw {
            generators,
            max_len,
            budget,
            pairs,
        } => {
            let b = cx.bundle()?;
            let gens = generators
                .iter()
                .map(|p| model::thin_path(&b, p))
                .collect::<Result<Vec<_>>>()?;
            let tp = thin_path_double_groupoid(&b, &gens, *max_len, *budget, cx.quad)?;
            let list = tp.composable_pairs(*pairs);
            r.value("family", tp.family.len());
            r.value("pairs", list.len());
            let law = tp.check_transport_law(&[]).law;
            r.check(Check::law(&sweep(&law, list.len(), cx.parallel, |k| {
                Ok(tp.check_transport_law(&list[k..k + 1]).first_failure.map(|c| c.detail))
            })));
            let law = tp.check_piecewise(&[]).law;
            r.check(Check::law(&sweep(&law, list.len(), cx.parallel, |k| {
                Ok(tp.check_piecewise(&list[k..k + 1]).first_failure.map(|c| c.detail))
            })));
        }
        DoubleSweep::CrossedModules { budget } => {
            let modules = small_crossed_modules();
            let run = |(name, cm): &(String, holonomy_core::crossed::CrossedModule)| -> Result<(Value, Vec<Check>)> {
                let d = double_from_crossed_module(cm)?;
                let back = crossed_module_from_double(&d)?;
                let iso = find_isomorphism(cm, &back, false);
                let interchange = check_interchange_exhaustive(&d, *budget);
                let mut checks = vec![Check::with_detail(format!("round trip of {name}"), iso.is_some(), || {
                    "no isomorphism to the recovered crossed module".into()
                })];
                let mut law = Check::law(&interchange);
                law.name = format!("{} on {name}", law.name);
                checks.push(law);
                let summary = json!({
                    "name": name,
                    "order_m": cm.m().order(),
                    "order_p": cm.p().order(),
                    "squares": d.squares().len(),
                    "isomorphism": iso.map(|i| json!({ "m": i.m_map, "p": i.p_map })),
                });
                Ok((summary, checks))
            };
            let results: Vec<Result<(Value, Vec<Check>)>> = if cx.parallel {
                modules.par_iter().map(run).collect()
            } else {
                modules.iter().map(run).collect()
            };
            let mut summaries = Vec::new();
            for res in results {
                let (v, checks) = res?;
                summaries.push(v);
                for c in checks {
                    r.check(c);
                }
            }
            r.value("crossed_modules", Value::Array(summaries));
        }
    }
    Ok(())
}
