//! Graded-mesh quadrature for integrals of the form `∫_0^t f(u) du` whose
//! integrand may blow up at zero (integrably, as `1/w` does for admissible
//! weights). Cells shrink geometrically toward zero, `[t/2^{k+1}, t/2^k]`,
//! each integrated by two 5-point Gauss-Legendre panels split at the
//! geometric midpoint. Summation stops once the last cell falls below
//! `tol` times the running total, which is sound exactly when the cell
//! contributions decay geometrically, the regime the mesh is built for.

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

#[derive(Clone, Copy, Debug)]
pub(crate) struct TailIntegral {
    pub value: f64,
    pub converged: bool,
}

fn gl5(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL5_NODES.iter().zip(GL5_WEIGHTS.iter()) {
        acc += w * f(c + h * x);
    }
    acc * h
}

/// `∫_0^t f(u) du` on the graded mesh. `converged` is false when the cell
/// budget runs out before the stop rule triggers (the integral is growing
/// too slowly toward zero, or diverges) or when a cell is non-finite.
pub(crate) fn graded_integral(
    f: &impl Fn(f64) -> f64,
    t: f64,
    tol: f64,
    max_cells: usize,
) -> TailIntegral {
    debug_assert!(t > 0.0 && tol > 0.0);
    let mut sum = 0.0;
    let mut hi = t;
    for k in 0..max_cells {
        let lo = 0.5 * hi;
        let mid = lo * std::f64::consts::SQRT_2;
        let cell = gl5(f, lo, mid) + gl5(f, mid, hi);
        if !cell.is_finite() {
            return TailIntegral {
                value: f64::NAN,
                converged: false,
            };
        }
        sum += cell;
        if k >= 3 && cell.abs() <= tol * sum.abs() {
            return TailIntegral {
                value: sum,
                converged: true,
            };
        }
        if lo < f64::MIN_POSITIVE {
            // Ran into the subnormal range before the stop rule fired: the
            // cells were not shrinking, so the integral has not converged
            // (log-divergent integrands land here).
            return TailIntegral {
                value: sum,
                converged: false,
            };
        }
        hi = lo;
    }
    TailIntegral {
        value: sum,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_constants_exactly() {
        let q = graded_integral(&|_| 1.0, 0.75, 1e-12, 4096);
        assert!(q.converged);
        assert!((q.value - 0.75).abs() < 1e-12);
    }

    #[test]
    fn handles_integrable_singularity() {
        // ∫_0^1 u^{-1/2} du = 2.
        let q = graded_integral(&|u: f64| u.powf(-0.5), 1.0, 1e-13, 4096);
        assert!(q.converged);
        assert!((q.value - 2.0).abs() < 1e-9, "value = {}", q.value);
    }

    #[test]
    fn steep_singularity_still_converges() {
        // ∫_0^1 u^{-2/3} du = 3; cells decay slowly (ratio 2^{-1/3}).
        let q = graded_integral(&|u: f64| u.powf(-2.0 / 3.0), 1.0, 1e-13, 4096);
        assert!(q.converged);
        assert!((q.value - 3.0).abs() < 1e-8, "value = {}", q.value);
    }

    #[test]
    fn flags_divergent_integrand() {
        // ∫_0^1 du/u diverges: every cell contributes ln 2.
        let q = graded_integral(&|u: f64| 1.0 / u, 1.0, 1e-12, 512);
        assert!(!q.converged);
    }
}
