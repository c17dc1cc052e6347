//! Admissible weights on `(0, ∞)` and the Calderón constant
//! `γ(w) = sup_{t>0} (w(t)/t) ∫_0^t du/w(u)`.
//!
//! A weight is admissible when it is positive on `(0, ∞)`, vanishes at zero
//! and grows without bound. Monotonicity is the textbook normalisation but
//! is deliberately not enforced: the logarithmic families below contain
//! parameter choices with a shallow dip near `s = 1` that are still useful
//! as inputs. Construction samples the weight and records the verdict in
//! [`Weight::is_monotone`]; norm computations consult the flag and switch
//! to a per-interval supremum search when it is false.
//!
//! Built-in families (`ln` throughout):
//!
//! * power: `w(s) = s^{1/p}`, `p > 1`
//! * powerlog: `w(s) = s^{1/p} (|ln s| + 1)^{1/q}`, `p > 1`, `q ≠ 0`
//! * powerloglog: `w(s) = s^{1/p} (|ln s| + 1)^q (ln(|ln s| + 3))^r`, `p > 1`

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::graded_integral;
use crate::search::{grid_then_golden, log_spaced};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightFamily {
    Power,
    PowerLog,
    PowerLogLog,
    Custom,
}

/// A weight on `(0, ∞)`. Cheap to clone; the evaluator is shared.
#[derive(Clone)]
pub struct Weight {
    family: WeightFamily,
    p: Option<f64>,
    q: Option<f64>,
    r: Option<f64>,
    monotone: bool,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Weight")
            .field("family", &self.family)
            .field("p", &self.p)
            .field("q", &self.q)
            .field("r", &self.r)
            .field("monotone", &self.monotone)
            .finish_non_exhaustive()
    }
}

fn require_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidWeight(format!("{name} must be finite, got {v}")))
    }
}

fn require_p(p: f64) -> Result<()> {
    require_finite("p", p)?;
    if p > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidWeight(format!(
            "p must exceed 1 (got {p}); at p <= 1 the constant gamma diverges"
        )))
    }
}

impl Weight {
    /// `w(s) = s^{1/p}` with `p > 1`.
    pub fn power(p: f64) -> Result<Self> {
        require_p(p)?;
        let inv_p = 1.0 / p;
        Self::build(
            WeightFamily::Power,
            Some(p),
            None,
            None,
            move |s: f64| s.powf(inv_p),
        )
    }

    /// `w(s) = s^{1/p} (|ln s| + 1)^{1/q}` with `p > 1` and `q ≠ 0`.
    pub fn power_log(p: f64, q: f64) -> Result<Self> {
        require_p(p)?;
        require_finite("q", q)?;
        if q == 0.0 {
            return Err(Error::InvalidWeight(
                "q must be nonzero; the exponent of the log factor is 1/q".into(),
            ));
        }
        let (inv_p, inv_q) = (1.0 / p, 1.0 / q);
        Self::build(
            WeightFamily::PowerLog,
            Some(p),
            Some(q),
            None,
            move |s: f64| s.powf(inv_p) * (s.ln().abs() + 1.0).powf(inv_q),
        )
    }

    /// `w(s) = s^{1/p} (|ln s| + 1)^q (ln(|ln s| + 3))^r` with `p > 1`.
    pub fn power_log_log(p: f64, q: f64, r: f64) -> Result<Self> {
        require_p(p)?;
        require_finite("q", q)?;
        require_finite("r", r)?;
        let inv_p = 1.0 / p;
        Self::build(
            WeightFamily::PowerLogLog,
            Some(p),
            Some(q),
            Some(r),
            move |s: f64| {
                let l = s.ln().abs();
                s.powf(inv_p) * (l + 1.0).powf(q) * (l + 3.0).ln().powf(r)
            },
        )
    }

    /// Wrap an arbitrary evaluator. It must be positive and finite on
    /// `(0, ∞)`; that is sampled at construction, the asymptotic conditions
    /// (vanishing at zero, unbounded growth) are the caller's responsibility.
    pub fn custom(eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::build(WeightFamily::Custom, None, None, None, eval)
    }

    fn build(
        family: WeightFamily,
        p: Option<f64>,
        q: Option<f64>,
        r: Option<f64>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let monotone = admissibility_scan(&eval)?;
        Ok(Weight {
            family,
            p,
            q,
            r,
            monotone,
            eval: Arc::new(eval),
        })
    }

    /// Evaluate at `s > 0`.
    pub fn evaluate(&self, s: f64) -> f64 {
        debug_assert!(s > 0.0, "weights are defined on (0, ∞), got s = {s}");
        (self.eval)(s)
    }

    pub fn family(&self) -> WeightFamily {
        self.family
    }

    /// The power exponent parameter `p`, when the family has one.
    pub fn exponent(&self) -> Option<f64> {
        self.p
    }

    pub fn params(&self) -> (Option<f64>, Option<f64>, Option<f64>) {
        (self.p, self.q, self.r)
    }

    /// Whether the construction-time sample scan saw a non-decreasing
    /// weight. False signals a genuine dip (beyond 1e-12 relative slack);
    /// supremum searches must not assume right-endpoint maxima then.
    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// Grammar form of the weight, e.g. `power:p=2` or `powerlog:p=2,q=1`.
    pub fn describe(&self) -> String {
        match self.family {
            WeightFamily::Power => format!("power:p={}", self.p.unwrap()),
            WeightFamily::PowerLog => {
                format!("powerlog:p={},q={}", self.p.unwrap(), self.q.unwrap())
            }
            WeightFamily::PowerLogLog => format!(
                "powerloglog:p={},q={},r={}",
                self.p.unwrap(),
                self.q.unwrap(),
                self.r.unwrap()
            ),
            WeightFamily::Custom => "custom".into(),
        }
    }
}

/// Positivity/finiteness check plus a monotonicity verdict, both from
/// samples: a log grid over `[1e-9, 1e9]` and a cluster around `s = 1`
/// where the log factors kink.
fn admissibility_scan(eval: &(impl Fn(f64) -> f64 + ?Sized)) -> Result<bool> {
    let mut pts = log_spaced(1e-9, 1e9, 512);
    for k in 1..=12 {
        let d = 10f64.powi(-k);
        pts.push(1.0 - d);
        pts.push(1.0 + d);
    }
    pts.push(1.0);
    pts.sort_by(f64::total_cmp);

    let mut running_max = 0.0f64;
    let mut monotone = true;
    for &s in &pts {
        let v = eval(s);
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidWeight(format!(
                "w({s:e}) = {v}; weights must be finite and positive on (0, ∞)"
            )));
        }
        if v < running_max * (1.0 - 1e-12) {
            monotone = false;
        }
        running_max = running_max.max(v);
    }
    Ok(monotone)
}

#[derive(Clone, Copy, Debug)]
pub struct GammaOptions {
    /// Search window for the supremum over `t`.
    pub t_min: f64,
    pub t_max: f64,
    /// Coarsest supremum grid; refined twice by doubling.
    pub grid: usize,
    /// Relative stop tolerance for the inner quadrature.
    pub quad_tol: f64,
    /// Cell budget per quadrature; exhausting it flags divergence.
    pub max_cells: usize,
}

impl Default for GammaOptions {
    fn default() -> Self {
        GammaOptions {
            t_min: 1e-6,
            t_max: 1e6,
            grid: 512,
            quad_tol: 1e-12,
            max_cells: 4096,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GammaEstimate {
    /// The supremum; `+∞` when divergence was detected.
    pub value: f64,
    pub argmax_t: f64,
    /// Points in the finest supremum grid used.
    pub grid_size: usize,
    pub diverged: bool,
}

/// Estimate `γ(w)` over `[t_min, t_max]`. The supremum grid is refined
/// twice; sustained growth of the scanned supremum (> 10% at both
/// refinements) or a non-convergent inner integral reports divergence
/// instead of a value. The finest scan is polished by golden-section
/// search around its best bracket.
pub fn gamma(w: &Weight, opts: GammaOptions) -> Result<GammaEstimate> {
    if !(opts.t_min > 0.0 && opts.t_max > opts.t_min) {
        return Err(Error::InvalidArgument(format!(
            "gamma window must satisfy 0 < t_min < t_max, got [{}, {}]",
            opts.t_min, opts.t_max
        )));
    }
    if opts.grid < 8 {
        return Err(Error::InvalidArgument("gamma grid must have at least 8 points".into()));
    }
    if !(opts.quad_tol > 0.0) {
        return Err(Error::InvalidArgument("quadrature tolerance must be positive".into()));
    }

    let quad_failed = std::cell::Cell::new(false);
    let mut objective = |t: f64| -> f64 {
        let q = graded_integral(&|u| 1.0 / w.evaluate(u), t, opts.quad_tol, opts.max_cells);
        if !q.converged {
            quad_failed.set(true);
        }
        w.evaluate(t) / t * q.value
    };

    let mut sups = [0.0f64; 3];
    let mut best_t = opts.t_min;
    let mut finest_grid = Vec::new();
    let mut finest_i = 0;
    for level in 0..3 {
        let grid = log_spaced(opts.t_min, opts.t_max, opts.grid << level);
        let mut level_best = f64::NEG_INFINITY;
        let mut level_i = 0;
        for (i, &t) in grid.iter().enumerate() {
            let v = objective(t);
            if v > level_best {
                level_best = v;
                level_i = i;
            }
        }
        sups[level] = level_best;
        best_t = grid[level_i];
        if level == 2 {
            finest_grid = grid;
            finest_i = level_i;
        }
    }

    let growing = sups[1] > sups[0] * 1.1 && sups[2] > sups[1] * 1.1;
    let grid_size = opts.grid << 2;
    if quad_failed.get() || growing || !sups[2].is_finite() {
        return Ok(GammaEstimate {
            value: f64::INFINITY,
            argmax_t: best_t,
            grid_size,
            diverged: true,
        });
    }

    let lo = finest_grid[finest_i.saturating_sub(1)];
    let hi = finest_grid[(finest_i + 1).min(finest_grid.len() - 1)];
    let (t, v) = grid_then_golden(&mut objective, &[lo, best_t, hi], 1e-10 * hi);
    let (argmax_t, value) = if v >= sups[2] { (t, v) } else { (best_t, sups[2]) };
    Ok(GammaEstimate {
        value,
        argmax_t,
        grid_size,
        diverged: false,
    })
}

/// `γ(s^{1/p}) = p/(p−1)`: for pure powers the objective
/// `(w(t)/t) ∫_0^t du/w(u)` is constant in `t`.
pub fn gamma_closed_power(p: f64) -> Result<f64> {
    require_p(p)?;
    Ok(p / (p - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_weight_evaluates() {
        let w = Weight::power(2.0).unwrap();
        assert!((w.evaluate(0.25) - 0.5).abs() < 1e-15);
        assert!((w.evaluate(1.0) - 1.0).abs() < 1e-15);
        assert!(w.is_monotone());
    }

    #[test]
    fn power_rejects_bad_exponents() {
        assert!(Weight::power(1.0).is_err());
        assert!(Weight::power(0.5).is_err());
        assert!(Weight::power(f64::NAN).is_err());
    }

    #[test]
    fn power_log_matches_hand_values() {
        // At s = e the log factor is (1 + 1) = 2.
        let e = std::f64::consts::E;
        let w = Weight::power_log(2.0, -1.0).unwrap();
        assert!((w.evaluate(e) - e.sqrt() / 2.0).abs() < 1e-12);
        let w = Weight::power_log(2.0, 1.0).unwrap();
        assert!((w.evaluate(e) - 2.0 * e.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn power_log_rejects_zero_q() {
        assert!(Weight::power_log(2.0, 0.0).is_err());
    }

    #[test]
    fn power_log_log_matches_hand_values() {
        // At s = 1 both log factors collapse: w(1) = ln 3.
        let w = Weight::power_log_log(2.0, 0.0, 1.0).unwrap();
        assert!((w.evaluate(1.0) - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn monotonicity_flags_shallow_dips() {
        // Exponent 1/q = 1/2 on the log factor keeps s^{1/2}(|ln s|+1)^{1/2}
        // non-decreasing; exponent 1 (q = 1) dips just below s = 1.
        assert!(Weight::power_log(2.0, 2.0).unwrap().is_monotone());
        assert!(!Weight::power_log(2.0, 1.0).unwrap().is_monotone());
        assert!(!Weight::power_log(2.0, -1.0).unwrap().is_monotone());
        // 1/2 - 1 - 1/(3 ln 3) < 0 at s = 1−: the double-log family dips too.
        assert!(!Weight::power_log_log(2.0, 1.0, 1.0).unwrap().is_monotone());
        assert!(Weight::power_log_log(2.0, 0.0, 0.0).unwrap().is_monotone());
    }

    #[test]
    fn custom_rejects_nonpositive_values() {
        assert!(Weight::custom(|s| s - 1.0).is_err());
        assert!(Weight::custom(|_| f64::NAN).is_err());
    }

    #[test]
    fn gamma_of_power_weights_is_p_over_p_minus_one() {
        for p in [1.5, 2.0, 4.0, 10.0] {
            let w = Weight::power(p).unwrap();
            let est = gamma(&w, GammaOptions::default()).unwrap();
            assert!(!est.diverged);
            let expect = gamma_closed_power(p).unwrap();
            assert!(
                (est.value - expect).abs() < 1e-6,
                "p = {p}: gamma = {}, closed form = {expect}",
                est.value
            );
        }
    }

    #[test]
    fn gamma_integrand_for_powers_is_constant_in_t() {
        // ∫_0^t u^{-1/p} du = t^{1-1/p} / (1 - 1/p), so the objective is
        // p/(p-1) at every t; spot-check the quadrature at scattered scales.
        let p = 3.0;
        let w = Weight::power(p).unwrap();
        for t in [1e-5, 0.3, 1.0, 47.0, 1e5] {
            let q = crate::quadrature::graded_integral(&|u| 1.0 / w.evaluate(u), t, 1e-13, 4096);
            assert!(q.converged);
            let objective = w.evaluate(t) / t * q.value;
            let expect = p / (p - 1.0);
            assert!(
                (objective - expect).abs() < 1e-8 * expect,
                "t = {t}: objective = {objective}"
            );
        }
    }

    #[test]
    fn gamma_scales_with_the_weight() {
        // γ(c·w) = γ(w): the constant drops out of w(t)/w(u).
        let base = Weight::power(2.0).unwrap();
        let scaled = Weight::custom(|s: f64| 3.0 * s.sqrt()).unwrap();
        let a = gamma(&base, GammaOptions::default()).unwrap();
        let b = gamma(&scaled, GammaOptions::default()).unwrap();
        assert!((a.value - b.value).abs() < 1e-8);
    }

    #[test]
    fn gamma_flags_divergence() {
        // w(s) = s is admissible-shaped but ∫ du/u diverges at zero.
        let w = Weight::custom(|s| s).unwrap();
        let est = gamma(&w, GammaOptions::default()).unwrap();
        assert!(est.diverged);
        assert!(est.value.is_infinite());
    }

    #[test]
    fn describe_round_trips_parameters() {
        assert_eq!(Weight::power(2.0).unwrap().describe(), "power:p=2");
        assert_eq!(
            Weight::power_log_log(2.0, 1.0, 1.0).unwrap().describe(),
            "powerloglog:p=2,q=1,r=1"
        );
    }
}
