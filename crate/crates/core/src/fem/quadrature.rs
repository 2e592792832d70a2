//! Composite Simpson quadrature that respects declared breakpoints.

use super::grid::Grid;
use super::profile::Profile;

/// Subintervals per mesh cell for profile integrals.
pub const SUBDIVISIONS_PER_CELL: usize = 32;

/// Composite Simpson rule for `f` on `[a, b]` with `n` (even) subintervals.
/// `fa`/`fb` are the one-sided endpoint values.
fn simpson_with_ends(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize, fa: f64, fb: f64) -> f64 {
    let n = if n % 2 == 1 { n + 1 } else { n.max(2) };
    let step = (b - a) / n as f64;
    let mut acc = fa + fb;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * step);
    }
    acc * step / 3.0
}

pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    simpson_with_ends(f, a, b, n, f(a), f(b))
}

/// Integral of a profile over `[a, b]`, split at the profile's breakpoints.
/// Each piece uses `n` Simpson subintervals and one-sided limits at its ends,
/// so piecewise polynomials of degree ≤ 3 are integrated exactly.
pub fn integrate_profile(p: &dyn Profile, a: f64, b: f64, n: usize) -> f64 {
    integrate_profile_with(p, &|x| p.eval(x), a, b, n, &|x, right| {
        p.eval_limit(x, right)
    })
}

/// Integral of `weight(x) * g(x)` where `weight` is a profile whose
/// breakpoints must be honored and `g` is smooth.
pub fn integrate_weighted(
    p: &dyn Profile,
    g: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    n: usize,
) -> f64 {
    integrate_profile_with(p, &|x| p.eval(x) * g(x), a, b, n, &|x, right| {
        p.eval_limit(x, right) * g(x)
    })
}

/// `(f - g)^2` integrated over `[a, b]`, split at the breakpoints of `f`.
pub fn integrate_squared_difference(
    p: &dyn Profile,
    g: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    n: usize,
) -> f64 {
    integrate_profile_with(p, &|x| (p.eval(x) - g(x)).powi(2), a, b, n, &|x, right| {
        (p.eval_limit(x, right) - g(x)).powi(2)
    })
}

fn integrate_profile_with(
    p: &dyn Profile,
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    n: usize,
    limit: &dyn Fn(f64, bool) -> f64,
) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut cuts = vec![a];
    cuts.extend(p.breakpoints().iter().copied().filter(|&c| c > a && c < b));
    cuts.push(b);
    cuts.windows(2)
        .map(|w| simpson_with_ends(f, w[0], w[1], n, limit(w[0], true), limit(w[1], false)))
        .sum()
}

/// Integrals of a profile over every mesh cell `(x_j, x_{j+1})`, `j = 0..=N`.
pub fn cell_integrals(p: &dyn Profile, grid: &Grid) -> Vec<f64> {
    (0..grid.cells())
        .map(|j| integrate_profile(p, grid.node(j), grid.node(j + 1), SUBDIVISIONS_PER_CELL))
        .collect()
}

/// `½ ∫_{x_{j-1}}^{x_{j+1}} f` for every interior node.
pub fn half_patch_integrals(p: &dyn Profile, grid: &Grid) -> Vec<f64> {
    let cells = cell_integrals(p, grid);
    cells.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}
