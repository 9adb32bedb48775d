use super::{
    noise_floor, CriteriaError, CriterionKind, CriterionReport, Witness, LINE_TOLERANCE, SIGN_TOLERANCE,
};
use crate::kernel::{Field, Spectral};
use crate::model::CriterionParams;

/// The common end value when `u` is flat near both ends of the domain (the
/// first two and last two samples agree within [`LINE_TOLERANCE`]).
pub fn line_tail(u: &Field) -> Option<f64> {
    let n = u.len();
    let tail = u[0];
    [1, n - 2, n - 1]
        .iter()
        .all(|&j| (u[j] - tail).abs() <= LINE_TOLERANCE)
        .then_some(tail)
}

fn applicable(kind: CriterionKind, params: &CriterionParams) -> Result<(), CriteriaError> {
    if params.is_applicable() {
        Ok(())
    } else {
        Err(CriteriaError::Inapplicable {
            kind,
            diagnostic: params.diagnostic.clone(),
        })
    }
}

/// Looks for `x1 < x2` with `u0(x1) > c > u0(x2)`.
///
/// Meaningful for data that emulate the line, i.e. equal `c` near both ends;
/// otherwise the outcome carries a warning in `detail`.
pub fn check_sign_change(u0: &Field, params: &CriterionParams) -> Result<CriterionReport, CriteriaError> {
    let kind = CriterionKind::SignChange;
    applicable(kind, params)?;
    let c = params.c;
    let warning = match line_tail(u0) {
        Some(t) if (t - c).abs() <= LINE_TOLERANCE => String::new(),
        _ => format!("; warning: datum does not equal c = {c} near both ends, so it does not emulate the line"),
    };
    let g = u0.grid();
    let above = u0.values().iter().position(|&v| v > c + SIGN_TOLERANCE);
    let below = above.and_then(|i| {
        u0.values()[i..]
            .iter()
            .position(|&v| v < c - SIGN_TOLERANCE)
            .map(|k| i + k)
    });
    let (Some(i), Some(j)) = (above, below) else {
        return Ok(CriterionReport::unsatisfied(
            kind,
            format!("no point above c = {c} is followed by a point below it{warning}"),
        ));
    };
    let ux = Spectral::new(*g).derivative(u0);
    Ok(CriterionReport {
        kind,
        satisfied: true,
        witness: Some(Witness {
            x0: g.x(i),
            u0: u0[i],
            slope: ux[i],
        }),
        t_star_bound: None,
        riccati_bound: None,
        detail: format!(
            "u0({:.6}) = {:.6e} > c > u0({:.6}) = {:.6e}{warning}",
            g.x(i),
            u0[i] - c,
            g.x(j),
            u0[j] - c
        ),
    })
}

/// Discrete slopes of `e^{beta x}(u - c)` where `u >= c` and of
/// `e^{-beta x}(u - c)` where `u <= c`, over grid pairs `(j, j + 1)` inside
/// one such interval. The domain is read as the segment `[x_0, x_{n-1}]`.
fn pair_slopes(u: &Field, params: &CriterionParams) -> Vec<Option<f64>> {
    let dx = u.grid().dx();
    let c = params.c;
    let (up, down) = ((params.beta * dx).exp(), (-params.beta * dx).exp());
    u.values()
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0] - c, w[1] - c);
            if a >= 0.0 && b >= 0.0 {
                Some((up * b - a) / dx)
            } else if a <= 0.0 && b <= 0.0 {
                Some((down * b - a) / dx)
            } else {
                None
            }
        })
        .collect()
}

/// Indices `j` whose pair `(j, j + 1)` decreases the weighted profile by more
/// than the noise floor.
pub fn monotonicity_violations(u: &Field, params: &CriterionParams) -> Vec<usize> {
    let eta = noise_floor(u);
    pair_slopes(u, params)
        .iter()
        .enumerate()
        .filter_map(|(j, s)| s.filter(|&s| s < -eta).map(|_| j))
        .collect()
}

/// A global smooth solution keeps `e^{beta x}(u - c)` nondecreasing on every
/// interval where `u >= c`, and `e^{-beta x}(u - c)` nondecreasing where
/// `u <= c`. A violation shows `u` cannot be such a snapshot.
pub fn check_decay_monotonicity(u: &Field, params: &CriterionParams) -> Result<CriterionReport, CriteriaError> {
    let kind = CriterionKind::DecayMonotonicity;
    applicable(kind, params)?;
    let eta = noise_floor(u);
    let slopes = pair_slopes(u, params);
    let g = u.grid();
    let mut intervals: Vec<(usize, usize)> = Vec::new();
    let mut worst: Option<(usize, f64)> = None;
    let mut flat = 0usize;
    for (j, s) in slopes.iter().enumerate() {
        let Some(s) = *s else { continue };
        if s < -eta {
            match intervals.last_mut() {
                Some(last) if last.1 == j => last.1 = j + 1,
                _ => intervals.push((j, j + 1)),
            }
            if worst.is_none_or(|(_, w)| s < w) {
                worst = Some((j, s));
            }
        } else if s <= eta && (u[j] - params.c).abs() > eta {
            flat += 1;
        }
    }
    let Some((j, _)) = worst else {
        let detail = if flat > 0 {
            format!("boundary, not certified: weighted profile is flat within {eta:.3e} on {flat} cells")
        } else {
            "weighted profiles are nondecreasing on every interval".to_string()
        };
        return Ok(CriterionReport::unsatisfied(kind, detail));
    };
    let ux = Spectral::new(*g).derivative(u);
    let list: Vec<String> = intervals
        .iter()
        .map(|&(a, b)| format!("[{:.6}, {:.6}]", g.x(a), g.x(b)))
        .collect();
    Ok(CriterionReport {
        kind,
        satisfied: true,
        witness: Some(Witness {
            x0: g.x(j),
            u0: u[j],
            slope: ux[j],
        }),
        t_star_bound: None,
        riccati_bound: None,
        detail: format!("weighted profile decreases on {}", list.join(", ")),
    })
}
