//! Convolution operators for `p(x) = ½ e^{-|x|}` on a uniform periodic grid.
//!
//! The full kernel, its derivative and the spectral one-sided kernels are
//! Fourier multipliers; the one-sided kernels also have O(n) recursive scans.
//! Convolving a periodic function with the line kernel is the same as
//! convolving over one period with the periodized kernel, so all identities
//! of the line kernel carry over.

mod grid;
mod interp;
pub mod io;
mod scan;
mod spectral;

pub use grid::{Field, Grid, GridError};
pub use interp::cubic_at;
pub use scan::{scan_half_minus, scan_half_plus};
pub use spectral::{Spectral, TrigInterpolant};

use serde::{Deserialize, Serialize};

/// How the one-sided convolutions `(p 1_{R±}) * v` are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfKernelMethod {
    /// Multipliers `1/(2(1 ± ik))`; exact for the trigonometric interpolant.
    #[default]
    Spectral,
    /// O(n) trapezoidal recursive scan; second order.
    Scan,
}

impl Spectral {
    pub fn half_plus_with(&self, v: &Field, method: HalfKernelMethod) -> Field {
        match method {
            HalfKernelMethod::Spectral => self.convolve_half_plus(v),
            HalfKernelMethod::Scan => scan_half_plus(v),
        }
    }

    pub fn half_minus_with(&self, v: &Field, method: HalfKernelMethod) -> Field {
        match method {
            HalfKernelMethod::Spectral => self.convolve_half_minus(v),
            HalfKernelMethod::Scan => scan_half_minus(v),
        }
    }
}

pub fn convolve_p(v: &Field) -> Field {
    Spectral::new(*v.grid()).convolve_p(v)
}

pub fn convolve_dp(v: &Field) -> Field {
    Spectral::new(*v.grid()).convolve_dp(v)
}

pub fn convolve_half_plus(v: &Field) -> Field {
    Spectral::new(*v.grid()).convolve_half_plus(v)
}

pub fn convolve_half_minus(v: &Field) -> Field {
    Spectral::new(*v.grid()).convolve_half_minus(v)
}

pub fn spectral_derivative(v: &Field) -> Field {
    Spectral::new(*v.grid()).derivative(v)
}

#[cfg(test)]
#[path = "../../tests/common/oracle.rs"]
pub(crate) mod oracle;
