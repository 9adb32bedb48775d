//! O(n) recursive scans for the one-sided kernels `p 1_{R±}` on a periodic grid.
//!
//! Within each cell the integrand `½ e^{-(x_j - ξ)} v(ξ)` is integrated by the
//! trapezoidal rule, so the scans equal the direct trapezoidal sums against the
//! periodized kernels
//!
//! `p⁺(s) = e^{-s} / (2(1 - e^{-L}))`, `p⁻(s) = e^{s-L} / (2(1 - e^{-L}))`, `s ∈ [0, L)`.

use super::grid::Field;

/// Forward scan for `(p 1_{R+}) * v`.
pub fn scan_half_plus(v: &Field) -> Field {
    let n = v.len();
    let dx = v.grid().dx();
    let decay = (-dx).exp();
    let closure = 1.0 / (1.0 - (-v.grid().length()).exp());
    let vals = v.values();
    let inc = |j: usize| 0.25 * dx * (decay * vals[(j + n - 1) % n] + vals[j % n]);

    // one unclosed sweep over a full period starting from zero at x_0
    let mut z = 0.0;
    for j in 1..=n {
        z = decay * z + inc(j);
    }
    let mut out = vec![0.0; n];
    out[0] = z * closure;
    for j in 1..n {
        out[j] = decay * out[j - 1] + inc(j);
    }
    Field::new(*v.grid(), out).expect("same length")
}

/// Backward scan for `(p 1_{R-}) * v`.
pub fn scan_half_minus(v: &Field) -> Field {
    let n = v.len();
    let dx = v.grid().dx();
    let decay = (-dx).exp();
    let closure = 1.0 / (1.0 - (-v.grid().length()).exp());
    let vals = v.values();
    // cell [x_j, x_{j+1}] seen from x_j
    let inc = |j: usize| 0.25 * dx * (vals[j % n] + decay * vals[(j + 1) % n]);

    let mut z = 0.0;
    for j in (0..n).rev() {
        z = decay * z + inc(j);
    }
    let mut out = vec![0.0; n];
    out[0] = z * closure;
    // walk x_{n-1}, x_{n-2}, ... using out[n] = out[0]
    let mut next = out[0];
    for j in (1..n).rev() {
        out[j] = decay * next + inc(j);
        next = out[j];
    }
    Field::new(*v.grid(), out).expect("same length")
}
