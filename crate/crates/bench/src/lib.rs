//! Fixtures shared by the benchmarks.

use std::f64::consts::TAU;

use num_rational::Rational64;

use holonomy_core::bundle::LineBundleData;
use holonomy_core::gerbe::{GerbeData, TwoLoop};
use holonomy_core::paths::{Curve, SmoothPath, ThinPath};
use holonomy_core::site::FiniteSite;

/// The monopole bundle of charge `n` with its equator in the north chart.
pub fn monopole_equator(n: i64) -> (LineBundleData, ThinPath) {
    let b = LineBundleData::monopole(n).unwrap();
    let cover = b.space.analytic().unwrap();
    let curve = Curve::Latitude {
        theta: TAU / 4.0,
        phi_from: 0.0,
        phi_to: TAU,
    };
    let p = SmoothPath::new(cover, vec![(curve, 0)]).unwrap();
    (b, ThinPath::Smooth(p))
}

/// Flat gerbe of flux `p/q` on an `m × n` torus, with its fundamental cycle.
pub fn flat_torus_gerbe(m: usize, n: usize, p: i64, q: i64) -> (GerbeData, TwoLoop) {
    let g = GerbeData::flat_torus(m, n, Rational64::new(p, q)).unwrap();
    let s = TwoLoop::fundamental(g.complex()).unwrap();
    (g, s)
}

/// A circle of `n` points covered by two half arcs.
pub fn circle_two_arcs(n: usize) -> FiniteSite {
    let half = n / 2;
    let a: Vec<usize> = (0..=half).collect();
    let b: Vec<usize> = (half..n).chain([0]).collect();
    FiniteSite::circle(n, &[a, b]).unwrap()
}
