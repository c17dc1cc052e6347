//! One-dimensional maximization helpers: logarithmic grids for bracketing
//! and golden-section refinement inside a bracket.

/// `n` logarithmically spaced points from `a` to `b` inclusive.
/// Requires `0 < a < b` and `n >= 2`; both endpoints are exact.
pub(crate) fn log_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    debug_assert!(a > 0.0 && b > a && n >= 2);
    let (la, lb) = (a.ln(), b.ln());
    let step = (lb - la) / (n - 1) as f64;
    (0..n)
        .map(|i| match i {
            0 => a,
            i if i == n - 1 => b,
            i => (la + step * i as f64).exp(),
        })
        .collect()
}

/// Golden-section maximization on `[a, b]`. Returns `(argmax, max)`.
/// Converges to the global maximum when the function is unimodal on the
/// bracket; otherwise to some local maximum, never below the better of
/// the two interior probes.
pub(crate) fn golden_max(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= xtol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Scan a sorted ascending grid for the best value of `f`, then polish with
/// golden-section search on the bracket formed by the neighbours of the best
/// grid point. The polished value never falls below the grid scan.
pub(crate) fn grid_then_golden(
    f: &mut impl FnMut(f64) -> f64,
    grid: &[f64],
    xtol: f64,
) -> (f64, f64) {
    debug_assert!(grid.len() >= 2);
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v > best_v {
            best_i = i;
            best_v = v;
        }
    }
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(grid.len() - 1)];
    let (gx, gv) = golden_max(f, lo, hi, xtol);
    if gv > best_v {
        (gx, gv)
    } else {
        (grid[best_i], best_v)
    }
}
