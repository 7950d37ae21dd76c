//! Differential forms: exact cochains on cell complexes and named analytic
//! forms on the built-in manifolds.
//!
//! Discrete forms hold values in turns (`1` = one full turn) as exact
//! rationals. Analytic forms are in radians.

use std::f64::consts::TAU;

use num_rational::Rational64;
use num_traits::Zero;

use crate::cover::{AnalyticCover, CellComplex, CellSet, ChartId, Manifold};
use crate::error::{Error, Result};
use crate::quadrature::{Estimate, Quadrature};

/// A cochain of degree 0, 1 or 2 on a [`CellComplex`]. Values live on
/// vertices, positively oriented edges, or positively oriented faces;
/// reversing orientation negates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteForm {
    pub degree: u8,
    pub values: Vec<Rational64>,
    /// Chart whose cells carry the form, if restricted.
    pub chart: Option<ChartId>,
}

impl DiscreteForm {
    pub fn zero(complex: &CellComplex, degree: u8) -> Self {
        let n = match degree {
            0 => complex.vertex_count(),
            1 => complex.edge_count(),
            _ => complex.face_count(),
        };
        DiscreteForm {
            degree,
            values: vec![Rational64::zero(); n],
            chart: None,
        }
    }

    pub fn new(degree: u8, values: Vec<Rational64>) -> Self {
        DiscreteForm {
            degree,
            values,
            chart: None,
        }
    }

    pub fn in_chart(mut self, chart: ChartId) -> Self {
        self.chart = Some(chart);
        self
    }

    pub fn value(&self, cell: usize) -> Rational64 {
        self.values[cell]
    }

    /// Value on a cell with orientation `sign`.
    pub fn oriented(&self, cell: usize, sign: i8) -> Rational64 {
        if sign >= 0 {
            self.values[cell]
        } else {
            -self.values[cell]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &DiscreteForm) -> DiscreteForm {
        DiscreteForm {
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            chart: self.chart,
        }
    }

    pub fn scale(&self, k: Rational64) -> DiscreteForm {
        DiscreteForm {
            degree: self.degree,
            values: self.values.iter().map(|v| v * k).collect(),
            chart: self.chart,
        }
    }

    /// Coboundary: `(df)(e) = f(t) − f(s)`, `(dA)(f) = Σ ± A(e)`.
    pub fn d(&self, complex: &CellComplex) -> Result<DiscreteForm> {
        let values = match self.degree {
            0 => complex
                .edges()
                .iter()
                .map(|&(s, t)| self.values[t] - self.values[s])
                .collect(),
            1 => (0..complex.face_count())
                .map(|f| complex.face(f).iter().map(|&(e, s)| self.oriented(e, s)).sum())
                .collect(),
            k => return Err(Error::DegreeOverflow(k + 1)),
        };
        Ok(DiscreteForm {
            degree: self.degree + 1,
            values,
            chart: self.chart,
        })
    }

    /// Sum over signed edges, checking membership in `support` if given.
    pub fn integrate_line(&self, steps: &[(usize, i8)], support: Option<&CellSet>) -> Result<Rational64> {
        if self.degree != 1 {
            return Err(Error::Invalid(format!("line integral of a {}-form", self.degree)));
        }
        let mut total = Rational64::zero();
        for &(e, s) in steps {
            if let Some(cells) = support {
                if !cells.edges.contains(&e) {
                    return Err(Error::ChartMismatch(format!("edge {e} is outside the form's chart")));
                }
            }
            total += self.oriented(e, s);
        }
        Ok(total)
    }

    /// Sum over a 2-chain of `(face, multiplicity)`.
    pub fn integrate_surface(&self, chain: &[(usize, i64)], support: Option<&CellSet>) -> Result<Rational64> {
        if self.degree != 2 {
            return Err(Error::Invalid(format!("surface integral of a {}-form", self.degree)));
        }
        let mut total = Rational64::zero();
        for &(f, m) in chain {
            if let Some(cells) = support {
                if !cells.faces.contains(&f) {
                    return Err(Error::ChartMismatch(format!("face {f} is outside the form's chart")));
                }
            }
            total += self.values[f] * Rational64::from_integer(m);
        }
        Ok(total)
    }
}

/// Real-valued functions on a manifold's coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarFn {
    Zero,
    Constant(f64),
    /// `Σ c_k x_k`; single-valued on the circle only up to `2π c_k`, which
    /// is harmless when used as a phase with integer `c_k`.
    Linear(Vec<f64>),
    /// `amp · sin(k · x_index + shift)`.
    Wave { index: usize, k: f64, amp: f64, shift: f64 },
    /// `amp · cos θ` on the sphere.
    CosTheta(f64),
    /// `amount` inside a small ball and `0` elsewhere; used to corrupt one
    /// sample point.
    Spike { center: Vec<f64>, radius: f64, amount: f64 },
    Sum(Vec<ScalarFn>),
}

impl ScalarFn {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            ScalarFn::Zero => 0.0,
            ScalarFn::Constant(c) => *c,
            ScalarFn::Linear(c) => c.iter().zip(x).map(|(c, x)| c * x).sum(),
            ScalarFn::Wave { index, k, amp, shift } => amp * (k * x[*index] + shift).sin(),
            ScalarFn::CosTheta(a) => a * x[0].cos(),
            ScalarFn::Spike { center, radius, amount } => {
                let d2: f64 = center.iter().zip(x).map(|(c, x)| (c - x).powi(2)).sum();
                if d2.sqrt() < *radius {
                    *amount
                } else {
                    0.0
                }
            }
            ScalarFn::Sum(fs) => fs.iter().map(|f| f.eval(x)).sum(),
        }
    }

    /// Gradient; the spike contributes nothing.
    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        self.add_grad(x, &mut g);
        g
    }

    fn add_grad(&self, x: &[f64], g: &mut [f64]) {
        match self {
            ScalarFn::Zero | ScalarFn::Constant(_) | ScalarFn::Spike { .. } => {}
            ScalarFn::Linear(c) => {
                for (gk, ck) in g.iter_mut().zip(c) {
                    *gk += ck;
                }
            }
            ScalarFn::Wave { index, k, amp, shift } => g[*index] += amp * k * (k * x[*index] + shift).cos(),
            ScalarFn::CosTheta(a) => g[0] -= a * x[0].sin(),
            ScalarFn::Sum(fs) => fs.iter().for_each(|f| f.add_grad(x, g)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OneFormTerm {
    /// `c (pole − cos θ) dφ` on the sphere.
    Cap { c: f64, pole: f64 },
    Gradient(ScalarFn),
    /// `Σ c_k dx_k`.
    Constant(Vec<f64>),
}

/// A 1-form on a built-in manifold, as a sum of named terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OneForm {
    pub terms: Vec<OneFormTerm>,
}

impl OneForm {
    pub fn zero() -> Self {
        OneForm::default()
    }

    pub fn new(terms: Vec<OneFormTerm>) -> Self {
        OneForm { terms }
    }

    /// The monopole potential `(n/2)(±1 − cos θ) dφ`.
    pub fn monopole(n: i64, north: bool) -> Self {
        OneForm::new(vec![OneFormTerm::Cap {
            c: n as f64 / 2.0,
            pole: if north { 1.0 } else { -1.0 },
        }])
    }

    pub fn plus(mut self, term: OneFormTerm) -> Self {
        self.terms.push(term);
        self
    }

    pub fn neg(&self) -> OneForm {
        OneForm::new(
            self.terms
                .iter()
                .map(|t| match t {
                    OneFormTerm::Cap { c, pole } => OneFormTerm::Cap { c: -c, pole: *pole },
                    OneFormTerm::Gradient(f) => OneFormTerm::Gradient(f.scaled(-1.0)),
                    OneFormTerm::Constant(c) => OneFormTerm::Constant(c.iter().map(|v| -v).collect()),
                })
                .collect(),
        )
    }

    pub fn sum(&self, other: &OneForm) -> OneForm {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        OneForm::new(terms)
    }

    /// Components `(A_0, A_1, …)` at `x`.
    pub fn components(&self, x: &[f64]) -> Vec<f64> {
        let mut a = vec![0.0; x.len()];
        for t in &self.terms {
            match t {
                OneFormTerm::Cap { c, pole } => a[1] += c * (pole - x[0].cos()),
                OneFormTerm::Gradient(f) => {
                    for (ak, gk) in a.iter_mut().zip(f.grad(x)) {
                        *ak += gk;
                    }
                }
                OneFormTerm::Constant(c) => {
                    for (ak, ck) in a.iter_mut().zip(c) {
                        *ak += ck;
                    }
                }
            }
        }
        a
    }

    /// `A(x)·v`.
    pub fn pair(&self, x: &[f64], v: &[f64]) -> f64 {
        self.components(x).iter().zip(v).map(|(a, v)| a * v).sum()
    }

    /// Exterior derivative on a 2-dimensional manifold.
    pub fn d(&self) -> TwoForm {
        let mut terms = Vec::new();
        for t in &self.terms {
            if let OneFormTerm::Cap { c, .. } = t {
                terms.push(TwoFormTerm::SinTheta(*c));
            }
        }
        TwoForm { terms }
    }
}

fn scale_scalar(f: &ScalarFn, k: f64) -> ScalarFn {
    match f {
        ScalarFn::Zero => ScalarFn::Zero,
        ScalarFn::Constant(c) => ScalarFn::Constant(k * c),
        ScalarFn::Linear(c) => ScalarFn::Linear(c.iter().map(|v| k * v).collect()),
        ScalarFn::Wave { index, k: w, amp, shift } => ScalarFn::Wave {
            index: *index,
            k: *w,
            amp: k * amp,
            shift: *shift,
        },
        ScalarFn::CosTheta(a) => ScalarFn::CosTheta(k * a),
        ScalarFn::Spike { center, radius, amount } => ScalarFn::Spike {
            center: center.clone(),
            radius: *radius,
            amount: k * amount,
        },
        ScalarFn::Sum(fs) => ScalarFn::Sum(fs.iter().map(|f| scale_scalar(f, k)).collect()),
    }
}

impl ScalarFn {
    pub fn scaled(&self, k: f64) -> ScalarFn {
        scale_scalar(self, k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TwoFormTerm {
    /// `c sin θ dθ∧dφ` on the sphere.
    SinTheta(f64),
    /// `c dx∧dy`.
    Constant(f64),
}

/// A 2-form on a 2-dimensional built-in manifold, as a density against
/// `dx₀∧dx₁`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TwoForm {
    pub terms: Vec<TwoFormTerm>,
}

impl TwoForm {
    pub fn zero() -> Self {
        TwoForm::default()
    }

    /// The monopole curvature `(n/2) sin θ dθ∧dφ`.
    pub fn monopole(n: i64) -> Self {
        TwoForm {
            terms: vec![TwoFormTerm::SinTheta(n as f64 / 2.0)],
        }
    }

    pub fn density(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| match t {
                TwoFormTerm::SinTheta(c) => c * x[0].sin(),
                TwoFormTerm::Constant(c) => *c,
            })
            .sum()
    }

    pub fn sum(&self, other: &TwoForm) -> TwoForm {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TwoForm { terms }
    }

    /// Integral over the coordinate rectangle `x₀ ∈ a`, `x₁ ∈ b`, which
    /// must lie in `chart` (checked on a sample grid including corners).
    pub fn integrate_rect(
        &self,
        cover: &AnalyticCover,
        chart: Option<ChartId>,
        a: (f64, f64),
        b: (f64, f64),
        quad: &Quadrature,
    ) -> Result<Estimate> {
        if cover.manifold.dimension() != 2 {
            return Err(Error::Invalid("surface integrals need a 2-dimensional manifold".into()));
        }
        if let Some(c) = chart {
            check_rect_in_chart(cover, c, a, b)?;
        }
        Ok(quad.integrate_2d(&|x, y| self.density(&[x, y]), a, b))
    }
}

/// Checks a closed coordinate rectangle lies in a chart, on an 17 × 17
/// grid that includes the corners.
pub fn check_rect_in_chart(cover: &AnalyticCover, chart: ChartId, a: (f64, f64), b: (f64, f64)) -> Result<()> {
    const N: usize = 16;
    for i in 0..=N {
        for j in 0..=N {
            let x = a.0 + (a.1 - a.0) * i as f64 / N as f64;
            let y = b.0 + (b.1 - b.0) * j as f64 / N as f64;
            if !cover.contains(chart, &[x, y]) {
                return Err(Error::ChartMismatch(format!(
                    "point ({x:.6}, {y:.6}) is outside chart {}",
                    cover.charts[chart].name
                )));
            }
        }
    }
    Ok(())
}

/// Integral of a 2-form over the whole sphere, split at `θ = π/2` between
/// the north and south charts.
pub fn sphere_total(north: &TwoForm, south: &TwoForm, cover: &AnalyticCover, quad: &Quadrature) -> Result<f64> {
    if cover.manifold != Manifold::Sphere {
        return Err(Error::Invalid("not a sphere cover".into()));
    }
    let half = std::f64::consts::FRAC_PI_2;
    let n = north.integrate_rect(cover, Some(0), (0.0, half), (0.0, TAU), quad)?;
    let s = south.integrate_rect(cover, Some(1), (half, std::f64::consts::PI), (0.0, TAU), quad)?;
    Ok(n.value + s.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::CellComplex;
    use std::f64::consts::PI;

    fn r(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    #[test]
    fn d_of_constant_is_zero_and_dd_vanishes() {
        let t = CellComplex::torus(3, 3);
        let c = DiscreteForm::new(0, vec![r(2, 7); 9]);
        assert!(c.d(&t).unwrap().is_zero());
        let f = DiscreteForm::new(0, (0..9).map(|i| r(i * i, 5)).collect());
        assert!(f.d(&t).unwrap().d(&t).unwrap().is_zero());
        let two = f.d(&t).unwrap().d(&t).unwrap();
        assert!(matches!(two.d(&t), Err(Error::DegreeOverflow(3))));
    }

    #[test]
    fn flat_torus_flux_sums_exactly() {
        let f = DiscreteForm::new(2, vec![r(1, 6); 6]);
        let chain: Vec<(usize, i64)> = (0..6).map(|f| (f, 1)).collect();
        assert_eq!(f.integrate_surface(&chain, None).unwrap(), r(1, 1));
    }

    #[test]
    fn monopole_sphere_integral() {
        let cover = AnalyticCover::builtin("sphere-2-charts").unwrap();
        let q = Quadrature::default();
        for n in 1..=3 {
            let total = sphere_total(&TwoForm::monopole(n), &TwoForm::monopole(n), &cover, &q).unwrap();
            assert!((total - TAU * n as f64).abs() < 1e-9);
        }
        let err = TwoForm::monopole(1).integrate_rect(&cover, Some(0), (0.0, PI), (0.0, TAU), &q);
        assert!(matches!(err, Err(Error::ChartMismatch(_))));
    }

    #[test]
    fn gradients_and_caps() {
        let f = ScalarFn::Sum(vec![
            ScalarFn::Wave {
                index: 1,
                k: 2.0,
                amp: 0.3,
                shift: 0.1,
            },
            ScalarFn::CosTheta(0.5),
        ]);
        let x = [0.7, 1.9];
        let h = 1e-6;
        let g = f.grad(&x);
        for k in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            assert!(((f.eval(&xp) - f.eval(&xm)) / (2.0 * h) - g[k]).abs() < 1e-8);
        }
        let a = OneForm::monopole(1, true);
        assert!((a.d().density(&x) - TwoForm::monopole(1).density(&x)).abs() < 1e-15);
        let neg = OneForm::new(vec![OneFormTerm::Gradient(f.clone())]).neg();
        assert!((neg.components(&x)[1] + g[1]).abs() < 1e-15);
    }
}
