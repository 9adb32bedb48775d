//! Dense real polynomials with exact differentiation and interval extrema.

use serde::{Deserialize, Serialize};

/// Polynomial stored by ascending coefficients: `c[0] + c[1] v + c[2] v^2 + ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

/// Location and value of the extrema of a polynomial on a closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    /// `a * v^k`.
    pub fn monomial(a: f64, k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = a;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn eval(&self, v: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * v + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![0.0]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(0.0)
                        + other.coeffs.get(k).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| a * c).collect())
    }

    /// Real critical points (roots of the derivative) strictly inside `(lo, hi)`.
    ///
    /// Sign changes of the derivative on `samples` equispaced cells are refined
    /// by bisection, plus sample points where the derivative vanishes exactly.
    pub fn critical_points(&self, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
        let d = self.derivative();
        if d.is_constant() {
            return Vec::new();
        }
        let samples = samples.max(2);
        let h = (hi - lo) / samples as f64;
        let mut out = Vec::new();
        let mut prev_x = lo;
        let mut prev = d.eval(lo);
        for i in 1..=samples {
            let x = if i == samples { hi } else { lo + i as f64 * h };
            let y = d.eval(x);
            if y == 0.0 && i < samples {
                out.push(x);
            } else if prev != 0.0 && y != 0.0 && (prev < 0.0) != (y < 0.0) {
                out.push(bisect(&d, prev_x, x, prev));
            }
            prev_x = x;
            prev = y;
        }
        out
    }

    /// Minimum and maximum on `[lo, hi]`, exact up to root-refinement precision.
    ///
    /// Ties between candidates are broken toward the point of smallest
    /// absolute value, then toward the more negative point.
    pub fn extrema_on(&self, lo: f64, hi: f64, samples: usize) -> Extrema {
        let mut candidates = vec![lo, hi];
        candidates.extend(self.critical_points(lo, hi, samples));
        let values: Vec<(f64, f64)> = candidates.iter().map(|&x| (x, self.eval(x))).collect();
        let min = values.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max = values.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let scale = 1.0 + min.abs().max(max.abs());
        let tol = 1e-12 * scale;
        let pick = |target: f64| {
            values
                .iter()
                .filter(|p| (p.1 - target).abs() <= tol)
                .map(|p| p.0)
                .fold(None, |best: Option<f64>, x| match best {
                    None => Some(x),
                    Some(b) if x.abs() < b.abs() || (x.abs() == b.abs() && x < b) => Some(x),
                    keep => keep,
                })
                .unwrap_or(lo)
        };
        Extrema {
            min,
            argmin: pick(min),
            max,
            argmax: pick(max),
        }
    }
}

fn bisect(p: &Polynomial, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = p.eval(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_and_derivative() {
        let p = Polynomial::new(vec![1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
        assert_eq!(p.derivative().coeffs(), &[-2.0, 6.0]);
        assert_eq!(p.derivative().derivative().coeffs(), &[6.0]);
        assert!(Polynomial::new(vec![0.0, 0.0]).is_constant());
    }

    #[test]
    fn extrema_of_quartic_with_two_minimizers_prefers_negative() {
        // (v^2 - 1)^2 = 1 - 2v^2 + v^4
        let p = Polynomial::new(vec![1.0, 0.0, -2.0, 0.0, 1.0]);
        let e = p.extrema_on(-1.5, 1.5, 1000);
        assert!(e.min.abs() < 1e-14);
        assert!((e.argmin + 1.0).abs() < 1e-12);
        assert!((e.max - p.eval(1.5)).abs() < 1e-14);
    }

    #[test]
    fn extrema_prefers_smallest_magnitude() {
        // v^2 (v - 2)^2 has minima at 0 and 2
        let p = Polynomial::new(vec![0.0, 0.0, 4.0, -4.0, 1.0]);
        let e = p.extrema_on(-1.0, 3.0, 997);
        assert!(e.argmin.abs() < 1e-10);
    }

    #[test]
    fn linear_extrema_at_endpoints() {
        let p = Polynomial::new(vec![0.0, 2.0]);
        let e = p.extrema_on(1.0, 2.0, 10);
        assert_eq!((e.min, e.argmin, e.max, e.argmax), (2.0, 1.0, 4.0, 2.0));
    }
}
