//! Brute-force reference implementations, independent of the FFT code paths.
//!
//! Everything here works on plain slices so it can be shared between unit and
//! integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

/// Real trigonometric interpolant of periodic samples, from a naive O(n²) DFT.
pub struct TrigSeries {
    length: f64,
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TrigSeries {
    pub fn new(length: f64, values: &[f64]) -> Self {
        let n = values.len();
        let half = n / 2;
        let mut a = vec![0.0; half + 1];
        let mut b = vec![0.0; half + 1];
        for m in 0..=half {
            let (mut sa, mut sb) = (0.0, 0.0);
            for (j, &v) in values.iter().enumerate() {
                let th = 2.0 * PI * (m * j % n) as f64 / n as f64;
                sa += v * th.cos();
                sb += v * th.sin();
            }
            let w = if m == 0 || m == half { 1.0 } else { 2.0 };
            a[m] = w * sa / n as f64;
            b[m] = if m == half { 0.0 } else { w * sb / n as f64 };
        }
        Self { length, n, a, b }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let base = 2.0 * PI / self.length;
        (0..=self.n / 2)
            .map(|m| {
                let th = base * m as f64 * x;
                self.a[m] * th.cos() + self.b[m] * th.sin()
            })
            .sum()
    }
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(order);
    for i in 0..order {
        let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = order as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (x + 1.0), 0.5 * w));
    }
    out
}

pub fn kernel_p(s: f64, length: f64) -> f64 {
    (s - 0.5 * length).cosh() / (2.0 * (0.5 * length).sinh())
}

pub fn kernel_dp(s: f64, length: f64) -> f64 {
    (s - 0.5 * length).sinh() / (2.0 * (0.5 * length).sinh())
}

pub fn kernel_half_plus(s: f64, length: f64) -> f64 {
    (-s).exp() / (2.0 * (1.0 - (-length).exp()))
}

pub fn kernel_half_minus(s: f64, length: f64) -> f64 {
    (s - length).exp() / (2.0 * (1.0 - (-length).exp()))
}

/// `∫_0^L K(s) v(x_j - s) ds` on every grid point, with `v` the trigonometric
/// interpolant and composite Gauss–Legendre rules on each grid cell.
pub struct Quadrature {
    length: f64,
    n: usize,
    nodes: Vec<(f64, f64)>,
    /// `shifted[i][q] = v((i + 1 - τ_q) dx)`
    shifted: Vec<Vec<f64>>,
}

impl Quadrature {
    pub fn new(length: f64, values: &[f64]) -> Self {
        let series = TrigSeries::new(length, values);
        Self::with_function(length, values.len(), |x| series.eval(x))
    }

    /// Same quadrature applied to an explicit periodic function sampled on `n` cells.
    pub fn with_function(length: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let nodes = gauss_legendre(12);
        let dx = length / n as f64;
        let shifted = (0..n)
            .map(|i| {
                nodes
                    .iter()
                    .map(|&(t, _)| f((i as f64 + 1.0 - t) * dx))
                    .collect()
            })
            .collect();
        Self {
            length,
            n,
            nodes,
            shifted,
        }
    }

    pub fn convolve(&self, kernel: fn(f64, f64) -> f64) -> Vec<f64> {
        let n = self.n;
        let dx = self.length / n as f64;
        let kvals: Vec<Vec<f64>> = (0..n)
            .map(|m| {
                self.nodes
                    .iter()
                    .map(|&(t, w)| w * dx * kernel((m as f64 + t) * dx, self.length))
                    .collect()
            })
            .collect();
        (0..n)
            .map(|j| {
                let mut s = 0.0;
                for m in 0..n {
                    let i = (j + 2 * n - m - 1) % n;
                    s += kvals[m]
                        .iter()
                        .zip(&self.shifted[i])
                        .map(|(k, v)| k * v)
                        .sum::<f64>();
                }
                s
            })
            .collect()
    }
}

/// Direct O(n²) trapezoidal sum against the periodized one-sided kernel.
pub fn trapezoid_half(length: f64, values: &[f64], plus: bool) -> Vec<f64> {
    let n = values.len();
    let dx = length / n as f64;
    let kernel = |s: f64| {
        if plus {
            kernel_half_plus(s, length)
        } else {
            kernel_half_minus(s, length)
        }
    };
    (0..n)
        .map(|j| {
            (0..=n)
                .map(|m| {
                    let w = if m == 0 || m == n { 0.5 } else { 1.0 };
                    let v = values[(j + n - m % n) % n];
                    w * dx * kernel(m as f64 * dx) * v
                })
                .sum()
        })
        .collect()
}
