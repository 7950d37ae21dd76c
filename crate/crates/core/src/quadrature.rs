//! Composite Gauss–Legendre quadrature with panel doubling.

use std::sync::OnceLock;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

fn rule8() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(8))
}

/// Panel schedule: start with `panels` panels of `nodes`-point rules and
/// double until successive estimates differ by less than `tol`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub panels: usize,
    pub tol: f64,
    pub max_panels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            panels: 16,
            tol: 1e-10,
            max_panels: 1 << 14,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub panels: usize,
    pub converged: bool,
}

impl Quadrature {
    /// A single pass with a fixed panel count.
    pub fn fixed(&self, f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let (x, w) = rule8();
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let mid = lo + 0.5 * h;
            let mut s = 0.0;
            for k in 0..x.len() {
                s += w[k] * f(mid + 0.5 * h * x[k]);
            }
            total += 0.5 * h * s;
        }
        total
    }

    pub fn integrate(&self, f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Estimate {
        let mut panels = self.panels;
        let mut prev = self.fixed(f, a, b, panels);
        while panels < self.max_panels {
            panels *= 2;
            let next = self.fixed(f, a, b, panels);
            if (next - prev).abs() < self.tol {
                return Estimate {
                    value: next,
                    panels,
                    converged: true,
                };
            }
            prev = next;
        }
        Estimate {
            value: prev,
            panels,
            converged: false,
        }
    }

    /// Tensor-product rule on a rectangle with `panels × panels` cells.
    pub fn fixed_2d(&self, f: &dyn Fn(f64, f64) -> f64, x: (f64, f64), y: (f64, f64), panels: usize) -> f64 {
        let (nodes, w) = rule8();
        let hx = (x.1 - x.0) / panels as f64;
        let hy = (y.1 - y.0) / panels as f64;
        let mut total = 0.0;
        for px in 0..panels {
            let mx = x.0 + hx * (px as f64 + 0.5);
            for py in 0..panels {
                let my = y.0 + hy * (py as f64 + 0.5);
                let mut s = 0.0;
                for i in 0..nodes.len() {
                    for j in 0..nodes.len() {
                        s += w[i] * w[j] * f(mx + 0.5 * hx * nodes[i], my + 0.5 * hy * nodes[j]);
                    }
                }
                total += 0.25 * hx * hy * s;
            }
        }
        total
    }

    pub fn integrate_2d(&self, f: &dyn Fn(f64, f64) -> f64, x: (f64, f64), y: (f64, f64)) -> Estimate {
        let mut panels = self.panels;
        let mut prev = self.fixed_2d(f, x, y, panels);
        let cap = self.max_panels.min(1 << 9);
        while panels < cap {
            panels *= 2;
            let next = self.fixed_2d(f, x, y, panels);
            if (next - prev).abs() < self.tol {
                return Estimate {
                    value: next,
                    panels,
                    converged: true,
                };
            }
            prev = next;
        }
        Estimate {
            value: prev,
            panels,
            converged: false,
        }
    }
}
