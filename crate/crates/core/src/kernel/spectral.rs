use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{Field, Grid};

/// FFT-backed Fourier multipliers on one grid.
///
/// Plans are shared behind `Arc` and the type holds no mutable state, so one
/// instance can serve any number of threads.
#[derive(Clone)]
pub struct Spectral {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish()
    }
}

impl Spectral {
    pub fn new(grid: Grid) -> Self {
        let n = grid.n();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let base = 2.0 * PI / grid.length();
        let k = (0..n)
            .map(|i| {
                let m = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
                base * m
            })
            .collect();
        Self {
            grid,
            forward,
            inverse,
            k,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Angular wavenumber of FFT bin `i`; the Nyquist bin carries `+pi n / L`.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub fn nyquist(&self) -> usize {
        self.grid.n() / 2
    }

    /// Unnormalized DFT of real samples.
    pub fn transform(&self, v: &[f64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.grid.n(), "sample count does not match grid");
        let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse of [`Spectral::transform`], keeping the real part.
    pub fn inverse_real(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        self.inverse.process(&mut spec);
        let scale = 1.0 / self.grid.n() as f64;
        spec.into_iter().map(|c| c.re * scale).collect()
    }

    /// Applies `symbol(k)` to every bin except Nyquist, which gets the real `nyquist_symbol`.
    pub fn apply(
        &self,
        v: &[f64],
        symbol: impl Fn(f64) -> Complex64,
        nyquist_symbol: f64,
    ) -> Vec<f64> {
        let mut spec = self.transform(v);
        self.multiply(&mut spec, symbol, nyquist_symbol);
        self.inverse_real(spec)
    }

    pub fn multiply(
        &self,
        spec: &mut [Complex64],
        symbol: impl Fn(f64) -> Complex64,
        nyquist_symbol: f64,
    ) {
        let ny = self.nyquist();
        for (i, (c, &k)) in spec.iter_mut().zip(&self.k).enumerate() {
            if i == ny {
                *c *= nyquist_symbol;
            } else {
                *c *= symbol(k);
            }
        }
    }

    fn field(&self, values: Vec<f64>) -> Field {
        Field::new(self.grid, values).expect("multiplier preserves length")
    }

    fn check(&self, v: &Field) {
        assert_eq!(v.grid(), &self.grid, "field lives on a different grid");
    }

    /// `u_x` by the multiplier `ik`; Nyquist mode zeroed.
    pub fn derivative(&self, v: &Field) -> Field {
        self.check(v);
        self.field(self.apply(v.values(), |k| Complex64::new(0.0, k), 0.0))
    }

    /// `(1 - ∂²)^{-1} v = p * v`, multiplier `1/(1+k²)`.
    pub fn convolve_p(&self, v: &Field) -> Field {
        self.check(v);
        let kn = self.k[self.nyquist()];
        self.field(self.apply(
            v.values(),
            |k| Complex64::new(1.0 / (1.0 + k * k), 0.0),
            1.0 / (1.0 + kn * kn),
        ))
    }

    /// `∂_x p * v`, multiplier `ik/(1+k²)`; Nyquist mode zeroed.
    pub fn convolve_dp(&self, v: &Field) -> Field {
        self.check(v);
        self.field(self.apply(v.values(), |k| Complex64::new(0.0, k / (1.0 + k * k)), 0.0))
    }

    /// `(p 1_{R+}) * v`, multiplier `1/(2(1+ik))`.
    pub fn convolve_half_plus(&self, v: &Field) -> Field {
        self.half(v, -1.0)
    }

    /// `(p 1_{R-}) * v`, multiplier `1/(2(1-ik))`.
    pub fn convolve_half_minus(&self, v: &Field) -> Field {
        self.half(v, 1.0)
    }

    fn half(&self, v: &Field, sign: f64) -> Field {
        self.check(v);
        let kn = self.k[self.nyquist()];
        self.field(self.apply(
            v.values(),
            |k| Complex64::new(1.0, sign * k) * (0.5 / (1.0 + k * k)),
            0.5 / (1.0 + kn * kn),
        ))
    }

    /// 2/3-rule truncation: zeroes bins with `|m| > n/3`.
    pub fn dealias(&self, v: &Field) -> Field {
        self.check(v);
        let n = self.grid.n();
        let cut = n / 3;
        let mut spec = self.transform(v.values());
        for (i, c) in spec.iter_mut().enumerate() {
            let m = if i <= n / 2 { i } else { n - i };
            if m > cut {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        self.field(self.inverse_real(spec))
    }

    /// Fraction of `sum_{m != 0} |c_m|^2` carried by bins with `|m| > cut n`.
    pub fn tail_fraction(&self, v: &Field, cut: f64) -> f64 {
        let n = self.grid.n();
        let spec = self.transform(v.values());
        let (mut tail, mut total) = (0.0, 0.0);
        for (i, c) in spec.iter().enumerate().skip(1) {
            let m = if i <= n / 2 { i } else { n - i };
            let e = c.norm_sqr();
            total += e;
            if m as f64 > cut * n as f64 {
                tail += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }

    pub fn interpolant(&self, v: &Field) -> TrigInterpolant {
        self.check(v);
        TrigInterpolant {
            length: self.grid.length(),
            coeffs: self.transform(v.values()),
        }
    }
}

/// Band-limited trigonometric interpolant of grid samples, evaluable anywhere.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    length: f64,
    coeffs: Vec<Complex64>,
}

impl TrigInterpolant {
    fn modes(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        let n = self.coeffs.len();
        let base = 2.0 * PI / self.length;
        (1..n / 2).map(move |m| (base * m as f64, self.coeffs[m]))
    }

    pub fn value(&self, x: f64) -> f64 {
        let n = self.coeffs.len();
        let kn = PI * n as f64 / self.length;
        let mut s = self.coeffs[0].re + self.coeffs[n / 2].re * (kn * x).cos();
        for (k, c) in self.modes() {
            s += 2.0 * (c * Complex64::from_polar(1.0, k * x)).re;
        }
        s / n as f64
    }

    /// Derivative of the interpolant with the Nyquist term dropped, i.e. the
    /// interpolant of the spectral derivative samples.
    pub fn derivative(&self, x: f64) -> f64 {
        let n = self.coeffs.len();
        let mut s = 0.0;
        for (k, c) in self.modes() {
            s += 2.0 * (c * Complex64::new(0.0, k) * Complex64::from_polar(1.0, k * x)).re;
        }
        s / n as f64
    }
}
