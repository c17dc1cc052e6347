//! Extremal profiles and the constants they pin down.
//!
//! For `κ > 0` the profile `f*(t) = 1 − t^κ` on `(0, 1)` has the exact
//! average `f**(t) = 1 − t^κ/(κ+1)`. Against a weight `w` this yields
//!
//! * `G_κ(w) = sup_{0<t<1} w(t) (1 − t^κ)` (the weak norm),
//! * `H_κ(w) = sup_{0<t<1} w(t) (1 − t^κ/(κ+1))` (the Marcinkiewicz norm),
//! * `K_κ(w) = H_κ(w) / G_κ(w)`, the norm ratio the family realises.
//!
//! Every `K_κ(w)` is a lower bound on the worst-case ratio for `w`, and the
//! sharpest member of the family gives the best upper bound available from
//! it: [`theta_upper_bound`] minimises `K_κ` over a geometric `κ` grid. For
//! pure power weights all three quantities have closed forms, used here as
//! oracles for the search machinery.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::search::{grid_then_golden, log_spaced};
use crate::weights::{Weight, WeightFamily};

/// `f*` of the extremal family: `1 − t^κ` for `t ∈ [0, 1]`.
pub fn f_star_kappa(kappa: f64, t: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "the extremal profile lives on [0, 1], got t = {t}"
        )));
    }
    Ok(1.0 - t.powf(kappa))
}

/// `f**` of the extremal family: `1 − t^κ/(κ+1)` for `t ∈ (0, 1]`.
pub fn f_double_star_kappa(kappa: f64, t: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "the averaged extremal profile lives on (0, 1], got t = {t}"
        )));
    }
    Ok(1.0 - t.powf(kappa) / (kappa + 1.0))
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa.is_finite() && kappa > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "kappa must be finite and positive, got {kappa}"
        )))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SharpnessOptions {
    /// Log-grid points on `(0, 1)` before golden-section polish.
    pub grid: usize,
    /// Golden-section stopping width in `t`.
    pub xtol: f64,
}

impl Default for SharpnessOptions {
    fn default() -> Self {
        SharpnessOptions {
            grid: 256,
            xtol: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExtremalSup {
    pub value: f64,
    pub argmax_t: f64,
}

/// `G_κ(w)`.
pub fn g_kappa(w: &Weight, kappa: f64, opts: SharpnessOptions) -> Result<ExtremalSup> {
    check_kappa(kappa)?;
    sup_on_unit_interval(&mut |t: f64| w.evaluate(t) * (1.0 - t.powf(kappa)), opts)
}

/// `H_κ(w)`.
pub fn h_kappa(w: &Weight, kappa: f64, opts: SharpnessOptions) -> Result<ExtremalSup> {
    check_kappa(kappa)?;
    let shrink = kappa + 1.0;
    sup_on_unit_interval(
        &mut |t: f64| w.evaluate(t) * (1.0 - t.powf(kappa) / shrink),
        opts,
    )
}

fn sup_on_unit_interval(
    f: &mut impl FnMut(f64) -> f64,
    opts: SharpnessOptions,
) -> Result<ExtremalSup> {
    if opts.grid < 16 {
        return Err(Error::InvalidArgument("sharpness grid must have at least 16 points".into()));
    }
    let grid = log_spaced(1e-9, 1.0, opts.grid);
    let (argmax_t, value) = grid_then_golden(f, &grid, opts.xtol);
    Ok(ExtremalSup { value, argmax_t })
}

/// `G`, `H`, `K` and their argmaxes at one `κ`. `closed_form_K` is attached
/// for pure power weights, where `K_κ = (κ+1)^{1/(κp)}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KappaReport {
    pub kappa: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "closed_form_K", skip_serializing_if = "Option::is_none")]
    pub closed_form_k: Option<f64>,
    #[serde(rename = "argmax_t_G")]
    pub argmax_t_g: f64,
    #[serde(rename = "argmax_t_H")]
    pub argmax_t_h: f64,
}

/// Compute `G_κ`, `H_κ` and the ratio `K_κ = H_κ/G_κ` for one `κ`.
pub fn k_kappa(w: &Weight, kappa: f64, opts: SharpnessOptions) -> Result<KappaReport> {
    let g = g_kappa(w, kappa, opts)?;
    let h = h_kappa(w, kappa, opts)?;
    if !(g.value > 1e-300) {
        return Err(Error::Underflow(format!(
            "G_kappa at kappa = {kappa} is {:.3e}; the ratio K would be meaningless",
            g.value
        )));
    }
    let closed_form_k = match w.family() {
        WeightFamily::Power => {
            let p = w.exponent().expect("power weights carry p");
            Some(((kappa + 1.0).ln() / (kappa * p)).exp())
        }
        _ => None,
    };
    Ok(KappaReport {
        kappa,
        g: g.value,
        h: h.value,
        k: h.value / g.value,
        closed_form_k,
        argmax_t_g: g.argmax_t,
        argmax_t_h: h.argmax_t,
    })
}

/// Closed forms of `(G_κ, H_κ, K_κ)` for `w(s) = s^{1/p}`. With `a = κp`:
///
/// * the `G` objective `t^{1/p}(1 − t^κ)` is stationary at `t^κ = 1/(a+1)`,
///   giving `G = (a+1)^{-1/a} · a/(a+1)`;
/// * the `H` objective is stationary at `t^κ = (κ+1)/(a+1)`, giving
///   `H = ((κ+1)/(a+1))^{1/a} · a/(a+1)`;
/// * `K = H/G = (κ+1)^{1/a}`.
pub fn closed_form_ghk_power(p: f64, kappa: f64) -> Result<(f64, f64, f64)> {
    check_kappa(kappa)?;
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "closed forms hold for power weights with p > 1, got {p}"
        )));
    }
    let a = kappa * p;
    let edge = a / (a + 1.0);
    let g = (-(a + 1.0).ln() / a).exp() * edge;
    let h = (((kappa + 1.0) / (a + 1.0)).ln() / a).exp() * edge;
    let k = ((kappa + 1.0).ln() / a).exp();
    Ok((g, h, k))
}

/// A `κ` sweep and the upper bound it certifies.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaSweep {
    pub rows: Vec<KappaReport>,
    /// `min_κ K_κ(w)` over the grid: the best upper bound for the optimal
    /// bilateral constant obtainable from this family.
    pub theta_upper: f64,
    pub argmin_kappa: f64,
    /// The minimum sat on the first or last grid point; the true infimum
    /// may lie outside the swept range.
    pub boundary: bool,
}

/// Minimise `K_κ(w)` over a geometric grid of `steps` points on
/// `[kappa_min, kappa_max]`.
pub fn theta_upper_bound(
    w: &Weight,
    kappa_min: f64,
    kappa_max: f64,
    steps: usize,
    opts: SharpnessOptions,
) -> Result<ThetaSweep> {
    if !(kappa_min.is_finite() && kappa_min > 0.0 && kappa_max > kappa_min) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < kappa_min < kappa_max, got [{kappa_min}, {kappa_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument("a sweep needs at least 2 steps".into()));
    }
    let mut rows = Vec::with_capacity(steps);
    for kappa in log_spaced(kappa_min, kappa_max, steps) {
        rows.push(k_kappa(w, kappa, opts)?);
    }
    let (argmin_i, best) = rows
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.k.total_cmp(&b.k))
        .expect("steps >= 2");
    Ok(ThetaSweep {
        theta_upper: best.k,
        argmin_kappa: best.kappa,
        boundary: argmin_i == 0 || argmin_i == steps - 1,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::Weight;

    const OPTS: SharpnessOptions = SharpnessOptions {
        grid: 256,
        xtol: 1e-12,
    };

    #[test]
    fn extremal_profiles_evaluate() {
        assert_eq!(f_star_kappa(2.0, 0.0).unwrap(), 1.0);
        assert!((f_star_kappa(2.0, 0.5).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(f_star_kappa(2.0, 1.0).unwrap(), 0.0);
        assert!((f_double_star_kappa(2.0, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(f_star_kappa(2.0, 1.5).is_err());
        assert!(f_star_kappa(-1.0, 0.5).is_err());
        assert!(f_double_star_kappa(2.0, 0.0).is_err());
    }

    #[test]
    fn kappa_one_against_root_weight_by_hand() {
        // G: max of √t(1−t) at t = 1/3 is 2/(3√3); H: max of √t(1−t/2) at
        // t = 2/3 is (2/3)^{3/2}; K = √2.
        let w = Weight::power(2.0).unwrap();
        let rep = k_kappa(&w, 1.0, OPTS).unwrap();
        assert!((rep.g - 2.0 / (3.0 * 3.0f64.sqrt())).abs() < 1e-10);
        assert!((rep.h - (2.0f64 / 3.0).powf(1.5)).abs() < 1e-10);
        assert!((rep.k - 2.0f64.sqrt()).abs() < 1e-10);
        assert!((rep.argmax_t_g - 1.0 / 3.0).abs() < 1e-6);
        assert!((rep.argmax_t_h - 2.0 / 3.0).abs() < 1e-6);
        assert!((rep.closed_form_k.unwrap() - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn numeric_sups_match_closed_forms() {
        for p in [1.5, 2.0, 4.0] {
            let w = Weight::power(p).unwrap();
            for kappa in [0.5, 1.0, 2.0, 10.0, 100.0] {
                let rep = k_kappa(&w, kappa, OPTS).unwrap();
                let (g, h, k) = closed_form_ghk_power(p, kappa).unwrap();
                assert!((rep.g - g).abs() < 1e-8, "G at p={p}, kappa={kappa}");
                assert!((rep.h - h).abs() < 1e-8, "H at p={p}, kappa={kappa}");
                assert!((rep.k - k).abs() < 1e-8, "K at p={p}, kappa={kappa}");
            }
        }
    }

    #[test]
    fn stationary_points_of_the_closed_forms() {
        // Finite differences around the claimed argmaxes: both objectives
        // are interior-stationary there.
        let (p, kappa) = (2.5f64, 3.0f64);
        let a = kappa * p;
        let t_g = (1.0 / (a + 1.0)).powf(1.0 / kappa);
        let t_h = ((kappa + 1.0) / (a + 1.0)).powf(1.0 / kappa);
        let obj_g = |t: f64| t.powf(1.0 / p) * (1.0 - t.powf(kappa));
        let obj_h = |t: f64| t.powf(1.0 / p) * (1.0 - t.powf(kappa) / (kappa + 1.0));
        let eps = 1e-6;
        let dg = (obj_g(t_g + eps) - obj_g(t_g - eps)) / (2.0 * eps);
        let dh = (obj_h(t_h + eps) - obj_h(t_h - eps)) / (2.0 * eps);
        assert!(dg.abs() < 1e-8, "dG = {dg}");
        assert!(dh.abs() < 1e-8, "dH = {dh}");
        let (g, h, _) = closed_form_ghk_power(p, kappa).unwrap();
        assert!((obj_g(t_g) - g).abs() < 1e-14);
        assert!((obj_h(t_h) - h).abs() < 1e-14);
    }

    #[test]
    fn ratio_never_dips_below_one() {
        // H's objective dominates G's pointwise, so K >= 1 up to noise.
        let w = Weight::power_log(2.0, 2.0).unwrap();
        for kappa in [0.05, 0.7, 5.0, 300.0] {
            let rep = k_kappa(&w, kappa, OPTS).unwrap();
            assert!(rep.k >= 1.0 - 1e-9, "kappa = {kappa}: K = {}", rep.k);
        }
    }

    #[test]
    fn sweep_finds_interior_or_boundary_minimum() {
        let w = Weight::power(2.0).unwrap();
        let sweep = theta_upper_bound(&w, 0.01, 1000.0, 50, OPTS).unwrap();
        assert_eq!(sweep.rows.len(), 50);
        // For power weights K_kappa decreases toward 1, so the sweep bottoms
        // out at the largest kappa and flags the boundary.
        assert!(sweep.boundary);
        assert!((sweep.argmin_kappa - 1000.0).abs() < 1e-9);
        let expect = (1001.0f64.ln() / 2000.0).exp();
        assert!((sweep.theta_upper - expect).abs() < 1e-6);
    }

    #[test]
    fn sweep_validates_its_grid() {
        let w = Weight::power(2.0).unwrap();
        assert!(theta_upper_bound(&w, 0.0, 10.0, 10, OPTS).is_err());
        assert!(theta_upper_bound(&w, 5.0, 1.0, 10, OPTS).is_err());
        assert!(theta_upper_bound(&w, 1.0, 10.0, 1, OPTS).is_err());
    }
}
