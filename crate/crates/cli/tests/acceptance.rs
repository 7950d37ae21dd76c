//! Acceptance run: one PASS/FAIL line per criterion. Values are compared
//! with oracles computed here, not with the runner's own expectations.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use holonomy_cli::{model, parse, run, Request, RunOptions, Scenario, BUNDLED};
use holonomy_core::groupoid::{FiniteGroupoid, Subgroupoid};
use holonomy_core::local::{germ_at, germ_equal, Germ};
use holonomy_core::site::{members, FiniteSite, PointSet};

type Outcome = Result<String, String>;

fn scenario(name: &str) -> Scenario {
    let text = BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).expect(name);
    parse(text).unwrap()
}

fn report(name: &str, verb: Option<&str>, parallel: bool) -> (String, Duration) {
    let opts = RunOptions {
        verb: verb.map(str::to_string),
        parallel,
        tolerance: None,
    };
    let start = Instant::now();
    let r = run(&scenario(name), &opts).unwrap();
    (r.structured(), start.elapsed())
}

fn json(name: &str, verb: Option<&str>) -> (Value, Duration) {
    let (text, t) = report(name, verb, false);
    (serde_json::from_str(&text).unwrap(), t)
}

fn results(v: &Value) -> &Vec<Value> {
    v["results"].as_array().unwrap()
}

fn checks(r: &Value) -> &Vec<Value> {
    r["checks"].as_array().unwrap()
}

fn check<'a>(r: &'a Value, name: &str) -> Result<&'a Value, String> {
    checks(r)
        .iter()
        .find(|c| c["name"] == name)
        .ok_or_else(|| format!("{} at {} has no `{name}` check", r["verb"], r["location"]))
}

fn passed_with(r: &Value, name: &str, at_least: u64) -> Result<u64, String> {
    let c = check(r, name)?;
    let n = c["checked"].as_u64().unwrap_or(0);
    if c["status"] != "pass" || n < at_least {
        return Err(format!("{} at {}: `{name}` {} on {n} cases", r["verb"], r["location"], c["status"]));
    }
    Ok(n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Composite Simpson rule on `[a, b]`.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn monopole() -> Outcome {
    const TOL: f64 = 1e-9;
    let mut notes = Vec::new();
    for n in 1..=3 {
        let name = format!("monopole-n{n}");
        let (bundle, t0) = json(&name, Some("validate-bundle"));
        let (hol, t1) = json(&name, Some("holonomy"));
        let elapsed = t0 + t1;
        // North-chart potential (n/2)(1 − cos θ) dφ on the equator, and the
        // area form (n/2) sin θ dθ dφ over the sphere.
        let n_f = n as f64;
        let equator = simpson(|_| n_f / 2.0 * (1.0 - (PI / 2.0).cos()), 0.0, TAU, 512);
        let flux = TAU * simpson(|th| n_f / 2.0 * th.sin(), 0.0, PI, 2048);
        let rb = &results(&bundle)[0];
        ensure(rb["status"] == "pass", || format!("{name}: validate-bundle {}", rb["status"]))?;
        let got_flux = rb["values"]["total_curvature"]["radians"].as_f64().unwrap();
        ensure((got_flux - flux).abs() <= TOL, || format!("{name}: ∫F = {got_flux}, oracle {flux}"))?;
        ensure((flux - TAU * n_f).abs() <= TOL, || format!("{name}: oracle flux {flux}"))?;
        for r in results(&hol) {
            let got = r["values"]["phase"]["radians"].as_f64().unwrap();
            ensure(angle_gap(got, equator) <= TOL, || {
                format!("{name} {}: holonomy {got} rad, oracle {equator} rad", r["location"])
            })?;
        }
        ensure(elapsed < Duration::from_secs(5), || format!("{name} took {elapsed:?}"))?;
        notes.push(format!("n={n} {:.2}s", elapsed.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn transport_law() -> Outcome {
    let mut total = 0;
    for name in ["trivial-everything", "monopole-n1", "flat-torus-bundle"] {
        let (v, _) = json(name, Some("double-check"));
        for r in results(&v) {
            total += passed_with(r, "transport law", 1000)?;
            total += passed_with(r, "piecewise transport law", 1000)?;
        }
    }
    let (v, _) = json("flat-torus-bundle-fault", Some("double-check"));
    for r in results(&v) {
        for law in ["transport law", "piecewise transport law"] {
            let c = check(r, law)?;
            ensure(c["status"] == "fail" && c["counterexample"].is_object(), || {
                format!("fault scenario: `{law}` is {} without a located counterexample", c["status"])
            })?;
        }
    }
    Ok(format!("{total} pair checks, fault located"))
}

fn thin_invariance() -> Outcome {
    let mut seen = 0;
    for (name, _) in BUNDLED {
        let (v, _) = json(name, None);
        for r in results(&v) {
            if r["verb"] != "holonomy" && r["verb"] != "surface-holonomy" {
                continue;
            }
            if checks(r).iter().any(|c| c["name"] == "backtrack insertion invariance") {
                passed_with(r, "backtrack insertion invariance", 50)?;
                passed_with(r, "reparametrization invariance", 20)?;
                seen += 1;
            }
        }
    }
    ensure(seen >= 8, || format!("only {seen} requests carry thin checks"))?;
    Ok(format!("{seen} holonomy requests"))
}

/// Charts containing each cell of the surface, multiplied out.
fn assignment_count(s: &Scenario) -> u64 {
    let g = model::gerbe(s, s.gerbe.as_ref().unwrap()).unwrap();
    let surface = s
        .requests
        .iter()
        .find_map(|r| match r {
            Request::SurfaceHolonomy { surface, .. } => Some(surface),
            _ => None,
        })
        .unwrap();
    let c = g.complex();
    let faces = model::surface(c, surface).unwrap();
    let mut edges = BTreeSet::new();
    let mut vertices = BTreeSet::new();
    for &(f, _) in faces.faces() {
        for &(e, _) in c.face(f) {
            edges.insert(e);
            let (a, b) = c.edge(e);
            vertices.extend([a, b]);
        }
    }
    let charts = &g.cover().charts;
    let mut count = 1u64;
    for &(f, _) in faces.faces() {
        count *= charts.iter().filter(|ch| ch.cells.faces.contains(&f)).count() as u64;
    }
    for e in edges {
        count *= charts.iter().filter(|ch| ch.cells.edges.contains(&e)).count() as u64;
    }
    for v in vertices {
        count *= charts.iter().filter(|ch| ch.cells.vertices.contains(&v)).count() as u64;
    }
    count
}

const GERBES: [(&str, &str); 3] = [
    ("flat-torus-gerbe-1-3", "1/3 turns"),
    ("flat-torus-gerbe-1-2", "1/2 turns"),
    ("flat-torus-gerbe-2-5", "2/5 turns"),
];

fn assignment_independence() -> Outcome {
    let mut notes = Vec::new();
    for (name, flux) in GERBES {
        let (v, t) = json(name, Some("surface-holonomy"));
        let r = &results(&v)[0];
        let vals = &r["values"];
        ensure(vals["faces"] == 4, || format!("{name}: {} faces", vals["faces"]))?;
        ensure(vals["phase"]["turns"] == flux, || format!("{name}: holonomy {}", vals["phase"]["turns"]))?;
        check(r, "every valid assignment gives the same value")
            .and_then(|c| ensure(c["status"] == "pass", || format!("{name}: assignments disagree")))?;
        ensure(vals["assignment_mismatches"] == 0, || format!("{name}: mismatches"))?;
        let oracle = assignment_count(&scenario(name));
        ensure(vals["assignments"] == oracle, || {
            format!("{name}: {} assignments swept, oracle {oracle}", vals["assignments"])
        })?;
        ensure(t < Duration::from_secs(10), || format!("{name} took {t:?}"))?;
        notes.push(format!("{oracle} assignments in {:.2}s", t.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn two_holonomy() -> Outcome {
    let mut pairs = 0;
    for (name, _) in GERBES {
        let (v, _) = json(name, Some("two-holonomy"));
        let r = &results(&v)[0];
        pairs += passed_with(r, "Hol(s⋆t) = Hol(s) + Hol(t)", 100)?;
        passed_with(r, "Hol(s⋆s⁻¹) = 0", 1)?;
    }
    Ok(format!("{pairs} pairs"))
}

fn gauge_invariance() -> Outcome {
    let mut sweeps = 0;
    for (name, _) in GERBES {
        let (v, _) = json(name, None);
        for r in results(&v) {
            if ["surface-holonomy", "two-holonomy", "loop-transport"].contains(&r["verb"].as_str().unwrap()) {
                passed_with(r, "Deligne gauge invariance", 100)?;
                sweeps += 1;
            }
        }
    }
    ensure(sweeps >= 9, || format!("only {sweeps} gauge sweeps"))?;
    Ok(format!("{sweeps} sweeps of 100 perturbations"))
}

fn crossed_modules() -> Outcome {
    let (v, _) = json("crossed-modules", None);
    let r = &results(&v)[0];
    let modules = r["values"]["crossed_modules"].as_array().unwrap();
    ensure(modules.len() >= 5, || format!("{} crossed modules", modules.len()))?;
    for m in modules {
        let name = m["name"].as_str().unwrap();
        let (p, q) = (m["order_p"].as_u64().unwrap(), m["order_m"].as_u64().unwrap());
        ensure(p <= 8 && q <= 8, || format!("{name}: orders {p}, {q}"))?;
        ensure(m["isomorphism"]["p"].as_array().is_some_and(|a| a.len() as u64 == p), || {
            format!("{name}: no isomorphism on P")
        })?;
        ensure(m["isomorphism"]["m"].as_array().is_some_and(|a| a.len() as u64 == q), || {
            format!("{name}: no isomorphism on M")
        })?;
        check(r, &format!("round trip of {name}"))
            .and_then(|c| ensure(c["status"] == "pass", || format!("{name}: round trip fails")))?;
        let squares = m["squares"].as_u64().unwrap();
        passed_with(r, &format!("interchange on {name}"), squares)?;
    }
    Ok(format!("{} crossed modules", modules.len()))
}

/// `E − V + 1` of the graph where chart edges are merged when both ends lie
/// in one component of an overlap.
fn amalgamated_rank(site: &FiniteSite) -> u64 {
    let charts = site.cover_sets();
    let mut edges = 0;
    for (i, &u) in charts.iter().enumerate() {
        for &(a, b) in site.edges() {
            let inside = |w: PointSet| members(w).contains(&a) && members(w).contains(&b);
            if inside(u) && !(0..i).any(|j| site.components(charts[j] & u).into_iter().any(inside)) {
                edges += 1;
            }
        }
    }
    (edges + 1 - site.point_count()) as u64
}

fn scenario_site(name: &str) -> FiniteSite {
    let s = scenario(name);
    model::site(&s, s.site.as_ref().unwrap()).unwrap()
}

fn globalisation() -> Outcome {
    let start = Instant::now();
    let (v, _) = json("circle-two-arcs-holonomy", Some("globalise"));
    let r = &results(&v)[0];
    let rank = amalgamated_rank(&scenario_site("circle-two-arcs-holonomy"));
    let vals = &r["values"];
    ensure(rank == 1 && vals["hol_vertex_group_rank"] == rank, || {
        format!("Hol rank {}, oracle {rank}", vals["hol_vertex_group_rank"])
    })?;
    ensure(vals["hol_vertex_group"] == "⟨a |⟩" && vals["hol_vertex_group_free"] == true, || {
        format!("Hol vertex group {}", vals["hol_vertex_group"])
    })?;
    let glob = vals["glob_vertex_group_orders"].as_array().unwrap();
    ensure(glob.iter().all(|o| o == 1), || format!("glob vertex groups {glob:?}"))?;
    passed_with(r, "covering map preserves composition", 1000)?;

    let (v, _) = json("interval-two-arcs", Some("globalise"));
    let site = scenario_site("interval-two-arcs");
    ensure(site.point_count() <= 12, || format!("{} objects", site.point_count()))?;
    let mut bijective = 0;
    for r in results(&v) {
        if check(r, "covering morphism is bijective").is_ok_and(|c| c["status"] == "pass") {
            bijective += 1;
        }
        ensure(r["status"] == "pass", || format!("interval {}: {}", r["location"], r["status"]))?;
    }
    ensure(bijective >= 1, || "interval morphism not shown bijective".into())?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!("rank {rank}, {bijective} bijective atlases, {:.2}s", t.as_secs_f64()))
}

fn random_wide(parent: &Arc<FiniteGroupoid>, u: PointSet, rng: &mut ChaCha8Rng) -> Subgroupoid {
    let objs = members(u);
    let objs: Vec<usize> = objs.into_iter().collect();
    let gens: Vec<usize> = (0..rng.gen_range(0..4))
        .map(|_| {
            let x = *objs.choose(rng).unwrap();
            let y = *objs.choose(rng).unwrap();
            *parent.hom(x, y).choose(rng).unwrap()
        })
        .collect();
    Subgroupoid::generated_on(parent.clone(), members(u), gens).unwrap()
}

/// Equality on the smallest open neighbourhood.
fn germ_oracle(site: &FiniteSite, a: &Germ, b: &Germ) -> bool {
    let w = members(site.minimal_open(a.point));
    a.point == b.point && a.sub.restrict(&w) == b.sub.restrict(&w)
}

fn germs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut triples = 0;
    while triples < 1000 {
        let n = rng.gen_range(3..=10);
        let covers: Vec<Vec<usize>> = (0..rng.gen_range(1..=5))
            .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
            .collect();
        let site = FiniteSite::new(n, &covers, Vec::new()).unwrap();
        ensure(site.opens().len() <= 1 << 10, || format!("{} opens", site.opens().len()))?;
        let parent = Arc::new(FiniteGroupoid::gauge(n, 2, None).unwrap());
        let x = rng.gen_range(0..n);
        let nbhds: Vec<PointSet> = site.opens_containing(x).collect();
        let g: Vec<Germ> = (0..3)
            .map(|_| {
                let u = *nbhds.choose(&mut rng).unwrap();
                germ_at(&site, x, u, random_wide(&parent, u, &mut rng)).unwrap()
            })
            .collect();
        let eq = |i: usize, j: usize| germ_equal(&site, &g[i], &g[j]);
        for i in 0..3 {
            ensure(eq(i, i), || format!("triple {triples}: not reflexive"))?;
            for j in 0..3 {
                ensure(eq(i, j) == eq(j, i), || format!("triple {triples}: not symmetric"))?;
                ensure(eq(i, j) == germ_oracle(&site, &g[i], &g[j]), || format!("triple {triples}: oracle differs"))?;
                for k in 0..3 {
                    ensure(!(eq(i, j) && eq(j, k)) || eq(i, k), || format!("triple {triples}: not transitive"))?;
                }
            }
        }
        triples += 1;
    }

    let mut sites: Vec<FiniteSite> = ["circle-two-arcs-holonomy", "interval-two-arcs", "trivial-everything"]
        .into_iter()
        .map(scenario_site)
        .collect();
    let atlas = scenario("gerbe-atlas");
    sites.push(model::site_of_space(&model::space(atlas.space.as_ref().unwrap()).unwrap()).unwrap());
    let mut restrictions = 0;
    for site in &sites {
        let parent = Arc::new(FiniteGroupoid::gauge(site.point_count(), 3, None).unwrap());
        for &u in site.opens().iter().filter(|&&u| u != 0) {
            let h = random_wide(&parent, u, &mut rng);
            for &v in site.opens().iter().filter(|&&v| v != 0 && v & !u == 0) {
                for x in members(v) {
                    let a = germ_at(site, x, u, h.clone()).unwrap();
                    let b = germ_at(site, x, v, h.restrict(&members(v))).unwrap();
                    ensure(germ_equal(site, &a, &b), || format!("restriction to {:?} changes the germ at {x}", members(v)))?;
                    restrictions += 1;
                }
            }
        }
    }
    Ok(format!("{triples} triples, {restrictions} restrictions on {} bundled sites", sites.len()))
}

fn determinism() -> Outcome {
    let runs: Vec<String> = (0..3)
        .map(|_| report("gerbe-atlas", Some("theorem-1"), false).0)
        .chain((0..3).map(|_| report("gerbe-atlas", Some("theorem-1"), true).0))
        .collect();
    let v: Value = serde_json::from_str(&runs[0]).unwrap();
    ensure(v["status"] == "pass", || format!("theorem-1 status {}", v["status"]))?;
    ensure(runs.iter().all(|r| *r == runs[0]), || "structured reports differ between runs".into())?;
    Ok(format!("{} identical reports of {} bytes", runs.len(), runs[0].len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("monopole bundle holonomy and flux", monopole),
        ("transport law suite", transport_law),
        ("thin invariance", thin_invariance),
        ("gerbe assignment independence", assignment_independence),
        ("2-holonomy homomorphism", two_holonomy),
        ("Deligne gauge invariance", gauge_invariance),
        ("crossed module round trip", crossed_modules),
        ("globalisation holonomy", globalisation),
        ("germ machinery", germs),
        ("pipeline determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(note) => println!("PASS {:>2} {name}: {note}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
