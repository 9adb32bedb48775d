//! Named initial data sampled on a grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::kernel::{Field, Grid, GridError};

/// Initial datum. Offsets are measured from `center` along the shorter way
/// around the period, so bumps are periodic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum Profile {
    Constant {
        value: f64,
    },
    /// `offset + amplitude sin(2 pi wavenumber x / L + phase)`.
    Sine {
        amplitude: f64,
        phase: f64,
        wavenumber: u32,
        offset: f64,
    },
    /// `offset_c + amplitude exp(-(d/width)^2)`.
    GaussianBump {
        amplitude: f64,
        width: f64,
        center: f64,
        offset_c: f64,
    },
    /// `offset_c` plus the derivative of a Gaussian bump, scaled so the lobes
    /// reach `±amplitude`; positive amplitude puts the positive lobe first.
    DerivativeBump {
        amplitude: f64,
        width: f64,
        center: f64,
        offset_c: f64,
    },
    /// `offset_c + amplitude cosh(L/2 - rho(d)) / cosh(L/2)` with the smoothed
    /// distance `rho(d) = sqrt(d^2 + mollification^2) - mollification`; the
    /// periodized peakon `e^{-|d|}` at zero mollification.
    SmoothedPeakon {
        amplitude: f64,
        center: f64,
        mollification: f64,
        offset_c: f64,
    },
    /// `offset + amplitude sum_{m=1}^{modes} (a_m cos + b_m sin)(2 pi m x / L) / m`
    /// with `a_m, b_m` uniform in `[-1, 1]` from a seeded ChaCha8 stream.
    RandomModes {
        seed: u64,
        modes: u32,
        amplitude: f64,
        offset: f64,
    },
    /// Raw samples, one per grid point.
    Samples {
        values: Vec<f64>,
    },
}

impl Profile {
    pub fn sine(amplitude: f64, phase: f64) -> Self {
        Self::Sine {
            amplitude,
            phase,
            wavenumber: 1,
            offset: 0.0,
        }
    }

    pub fn sample(&self, grid: Grid) -> Result<Field, GridError> {
        let l = grid.length();
        let tau = 2.0 * std::f64::consts::PI / l;
        let offset = |x: f64, center: f64| {
            let d = (x - center).rem_euclid(l);
            if d >= 0.5 * l {
                d - l
            } else {
                d
            }
        };
        let field = match self {
            Self::Constant { value } => Field::constant(grid, *value),
            Self::Sine {
                amplitude,
                phase,
                wavenumber,
                offset,
            } => Field::from_fn(grid, |x| offset + amplitude * (tau * *wavenumber as f64 * x + phase).sin()),
            Self::GaussianBump {
                amplitude,
                width,
                center,
                offset_c,
            } => Field::from_fn(grid, |x| {
                let s = offset(x, *center) / width;
                offset_c + amplitude * (-s * s).exp()
            }),
            Self::DerivativeBump {
                amplitude,
                width,
                center,
                offset_c,
            } => {
                // max of s e^{-s^2} is e^{-1/2}/sqrt 2
                let scale = 2f64.sqrt() * 0.5f64.exp();
                Field::from_fn(grid, |x| {
                    let s = offset(x, *center) / width;
                    offset_c - amplitude * scale * s * (-s * s).exp()
                })
            }
            Self::SmoothedPeakon {
                amplitude,
                center,
                mollification,
                offset_c,
            } => Field::from_fn(grid, |x| {
                let d = offset(x, *center);
                let rho = (d * d + mollification * mollification).sqrt() - mollification;
                offset_c + amplitude * ((0.5 * l - rho).cosh() / (0.5 * l).cosh())
            }),
            Self::RandomModes {
                seed,
                modes,
                amplitude,
                offset,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let coeffs: Vec<(f64, f64)> = (0..*modes)
                    .map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
                    .collect();
                Field::from_fn(grid, |x| {
                    let s: f64 = coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, (a, b))| {
                            let m = (i + 1) as f64;
                            (a * (tau * m * x).cos() + b * (tau * m * x).sin()) / m
                        })
                        .sum();
                    offset + amplitude * s
                })
            }
            Self::Samples { values } => Field::new_finite(grid, values.clone())?,
        };
        Field::new_finite(grid, field.into_values())
    }
}
