//! Randomised invariance sweeps, optionally parallel, merged in index
//! order so reports do not depend on scheduling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use holonomy_core::bundle::LineBundleData;
use holonomy_core::cover::Manifold;
use holonomy_core::double::LawReport;
use holonomy_core::gerbe::TwoLoop;
use holonomy_core::paths::{Curve, EdgePath, Reparam, SmoothPath, ThinPath};
use holonomy_core::{Error, Result};

/// Runs `f` on `0..n` and records each outcome under its index. `Ok(None)`
/// passes, `Ok(Some(detail))` fails, `Err` fails with the error text.
pub fn sweep<F>(law: &str, n: usize, parallel: bool, f: F) -> LawReport
where
    F: Fn(usize) -> Result<Option<String>> + Sync,
{
    let outcomes: Vec<Result<Option<String>>> = if parallel {
        (0..n).into_par_iter().map(&f).collect()
    } else {
        (0..n).map(&f).collect()
    };
    let mut report = LawReport::new(law);
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(None) => report.record(i, true, String::new),
            Ok(Some(d)) => report.record(i, false, || d),
            Err(e) => report.record(i, false, || format!("evaluation failed: {e}")),
        }
    }
    report
}

/// Deterministic per-trial generator.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(trial as u64))
}

/// `λ` with an edge `e e⁻¹` inserted at a random vertex.
pub fn edge_backtrack(b: &LineBundleData, p: &EdgePath, rng: &mut ChaCha8Rng) -> Result<EdgePath> {
    let cover = b.space.combinatorial().expect("combinatorial");
    let c = &cover.complex;
    let at = rng.gen_range(0..=p.len());
    let v = p.vertices(c)[at];
    let incident: Vec<usize> = (0..c.edge_count())
        .filter(|&e| {
            let (x, y) = c.edge(e);
            x == v || y == v
        })
        .collect();
    let edge = *incident
        .choose(rng)
        .ok_or_else(|| Error::Invalid(format!("vertex {v} has no edges")))?;
    let chart = cover.charts_containing_edge(edge).choose(rng).copied();
    p.with_backtrack(c, at, edge, chart)
}

/// A short out-and-back excursion in `chart` starting at `x`.
fn excursion(b: &LineBundleData, x: &[f64], chart: usize, rng: &mut ChaCha8Rng) -> Result<SmoothPath> {
    let cover = b.space.analytic().expect("analytic");
    let delta = rng.gen_range(0.01..0.05) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let curve = match cover.manifold {
        Manifold::Circle => Curve::CircleArc {
            from: x[0],
            to: x[0] + delta,
        },
        Manifold::Sphere => Curve::Meridian {
            phi: x[1],
            theta_from: x[0],
            theta_to: x[0] + delta,
        },
        _ => {
            let k = rng.gen_range(0..x.len());
            let mut to = x.to_vec();
            to[k] += delta;
            Curve::Line { from: x.to_vec(), to }
        }
    };
    let out = SmoothPath::new(cover, vec![(curve, chart)])?;
    let end = out.end_point();
    if !cover.contains(chart, &end) {
        return Err(Error::ChartMismatch(format!("excursion leaves chart {chart}")));
    }
    out.concat(&out.reverse(), cover)
}

/// `λ` with an out-and-back excursion inserted at a random interior time.
pub fn smooth_backtrack(b: &LineBundleData, p: &SmoothPath, rng: &mut ChaCha8Rng) -> Result<SmoothPath> {
    let cover = b.space.analytic().expect("analytic");
    let t = rng.gen_range(0.2..0.8);
    let x = p.point_at(t);
    let chart = p
        .pieces()
        .iter()
        .find(|q| t <= q.t1)
        .map(|q| q.chart)
        .unwrap_or_default();
    let detour = excursion(b, &x, chart, rng).or_else(|_| excursion(b, &x, chart, rng))?;
    p.restrict(0.0, t)?
        .concat(&detour, cover)?
        .concat(&p.restrict(t, 1.0)?, cover)
}

pub fn backtrack(b: &LineBundleData, p: &ThinPath, rng: &mut ChaCha8Rng) -> Result<ThinPath> {
    match p {
        ThinPath::Combinatorial(e) => Ok(ThinPath::Combinatorial(edge_backtrack(b, e, rng)?)),
        ThinPath::Smooth(s) => Ok(ThinPath::Smooth(smooth_backtrack(b, s, rng)?)),
    }
}

/// A random monotone self-map of `[0, 1]`.
pub fn random_reparam(rng: &mut ChaCha8Rng) -> Reparam {
    match rng.gen_range(0..3) {
        0 => Reparam::Power(rng.gen_range(0.5..3.0)),
        1 => Reparam::Sitting(rng.gen_range(0.01..0.2)),
        _ => {
            // t + c t (1 − t) is increasing for |c| < 1.
            let c = rng.gen_range(-0.9..0.9);
            Reparam::Polynomial(vec![0.0, 1.0 + c, -c])
        }
    }
}

/// `s` padded with `f f⁻¹` at a random position and face.
pub fn surface_backtrack(c: &holonomy_core::cover::CellComplex, s: &TwoLoop, rng: &mut ChaCha8Rng) -> TwoLoop {
    let at = rng.gen_range(0..=s.faces().len());
    s.padded(at, rng.gen_range(0..c.face_count()))
}

/// `s` with its faces listed in a random order.
pub fn surface_reorder(c: &holonomy_core::cover::CellComplex, s: &TwoLoop, rng: &mut ChaCha8Rng) -> Result<TwoLoop> {
    let mut faces = s.faces().to_vec();
    faces.shuffle(rng);
    TwoLoop::new(c, faces)
}
