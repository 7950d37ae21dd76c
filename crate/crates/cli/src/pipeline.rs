//! The end-to-end pipeline: gerbe data, per-chart connections, local
//! transports along geodesics, local subgroupoid, globalisation.

use std::sync::Arc;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use holonomy_core::double::LawReport;
use holonomy_core::forms::DiscreteForm;
use holonomy_core::gerbe::GerbeData;
use holonomy_core::groupoid::FiniteGroupoid;
use holonomy_core::local::{build_local_subgroupoid, globalise, EdgeTransport, GeodesicStructure};
use holonomy_core::{Error, Result};

use crate::model::{gauge_transport, site_of_space};
use crate::report::{Check, VerbResult};
use crate::scenario::ChartConnection;
use crate::verbs::{describe_globalisation, Context, GlobalExpectations};

/// The declared 1-forms `ω_i`, one per chart, zero where unlisted.
pub fn connection_forms(g: &GerbeData, spec: &[ChartConnection]) -> Result<Vec<DiscreteForm>> {
    let cover = g.cover();
    let mut forms = vec![DiscreteForm::zero(g.complex(), 1); g.chart_count()];
    for c in spec {
        let form = forms
            .get_mut(c.chart)
            .ok_or_else(|| Error::Invalid(format!("connection for chart {} of {}", c.chart, g.chart_count())))?;
        for (e, t) in &c.edges {
            if !cover.charts[c.chart].cells.edges.contains(e) {
                return Err(Error::Invalid(format!("edge {e} is not in chart {}", cover.charts[c.chart].name)));
            }
            form.values[*e] = t.0;
        }
    }
    Ok(forms)
}

/// `dω_i = F_i` on faces of `U_i` and `ω_i − ω_j − A_ij ∈ Z` on edges of
/// `U_i ∩ U_j`.
pub fn check_compatibility(g: &GerbeData, omega: &[DiscreteForm], parallel: bool) -> Result<LawReport> {
    let cover = g.cover();
    let complex = g.complex();
    let n = g.chart_count();
    let d = omega.iter().map(|w| w.d(complex)).collect::<Result<Vec<_>>>()?;
    let chart_defects = |i: usize| -> Vec<(bool, String)> {
        let mut out = Vec::new();
        for &f in &cover.charts[i].cells.faces {
            let (dw, fi) = (d[i].value(f), g.curving(i, f));
            out.push((dw == fi, format!("face {f} of chart {i}: dω = {dw}, F = {fi}")));
        }
        for j in i + 1..n {
            for e in cover.intersection(&[i, j]).edges {
                let x = omega[i].value(e) - omega[j].value(e) - g.a(i, j, e);
                out.push((x.is_integer(), format!("edge {e} of charts {i}, {j}: ω_i − ω_j − A_ij = {x}")));
            }
        }
        out
    };
    let per_chart: Vec<Vec<(bool, String)>> = if parallel {
        (0..n).into_par_iter().map(chart_defects).collect()
    } else {
        (0..n).map(chart_defects).collect()
    };
    let mut report = LawReport::new("connection compatible with the gerbe");
    for (k, (ok, detail)) in per_chart.into_iter().flatten().enumerate() {
        report.record(k, ok, || detail);
    }
    Ok(report)
}

pub struct Theorem1<'a> {
    pub connection: &'a [ChartConnection],
    pub path_budget: usize,
    pub max_rules: usize,
    pub want: GlobalExpectations<'a>,
}

pub fn theorem_one(cx: &Context, spec: &Theorem1, r: &mut VerbResult) -> Result<()> {
    let g = cx.gerbe()?;
    let rep = g.validate();
    r.value("gerbe_relations_checked", rep.checked);
    r.check(Check::with_detail("gerbe cocycle relations", rep.passed(), || {
        let v = &rep.violations[0];
        format!("{} fails at {} by {} turns", v.relation, v.location, v.defect)
    }));
    if !rep.passed() {
        return Ok(());
    }
    let omega = connection_forms(&g, spec.connection)?;
    let compat = check_compatibility(&g, &omega, cx.parallel)?;
    r.check(Check::law(&compat));
    if !compat.passed() {
        return Ok(());
    }
    let order = omega
        .iter()
        .flat_map(|w| w.values.iter())
        .fold(1i64, |q, v| q.lcm(v.denom()));
    r.value("fiber_order", order);

    let site = site_of_space(&g.space)?;
    let parent = Arc::new(FiniteGroupoid::gauge(site.point_count(), order, None)?);
    let complex = g.complex();
    let chart_transport = |i: usize| -> Result<EdgeTransport> {
        let phase = |a: usize, b: usize| -> Rational64 {
            complex
                .edges_between(a, b)
                .first()
                .map(|&(e, sign)| omega[i].oriented(e, sign))
                .unwrap_or_else(Rational64::zero)
        };
        gauge_transport(parent.clone(), site.edges(), phase)
    };
    let transports: Vec<EdgeTransport> = if cx.parallel {
        (0..g.chart_count()).into_par_iter().map(chart_transport).collect::<Result<_>>()?
    } else {
        (0..g.chart_count()).map(chart_transport).collect::<Result<_>>()?
    };

    let geod = GeodesicStructure::bfs_lex(site.edges(), site.cover_sets());
    let (s, grep) = build_local_subgroupoid(&site, &geod, &transports, spec.path_budget)?;
    r.value(
        "geodesics",
        json!({ "pairs": grep.pairs, "overlap_pairs": grep.overlap_pairs, "paths_checked": grep.paths_checked }),
    );
    r.check(Check::law(&s.check_path_locality()));
    let gl = globalise(&s, spec.max_rules)?;
    describe_globalisation(cx, &site, &s, &gl, &spec.want, r)
}
