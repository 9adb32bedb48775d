use super::grid::Field;

/// Periodic 4-point Catmull–Rom interpolation of grid samples at `x`.
pub fn cubic_at(field: &Field, x: f64) -> f64 {
    let g = field.grid();
    let n = g.n() as isize;
    let s = g.wrap(x) / g.dx();
    let j = s.floor() as isize;
    let t = s - j as f64;
    let at = |o: isize| field[((j + o).rem_euclid(n)) as usize];
    let (p0, p1, p2, p3) = (at(-1), at(0), at(1), at(2));
    let t2 = t * t;
    let t3 = t2 * t;
    0.5 * (2.0 * p1
        + (p2 - p0) * t
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2
        + (3.0 * (p1 - p2) + p3 - p0) * t3)
}
