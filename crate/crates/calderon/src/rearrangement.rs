//! Finite step functions and their decreasing rearrangements.
//!
//! A [`StepFunction`] is a finite list of (value, mass) pieces on a
//! non-atomic measure space; only the value distribution matters, not any
//! geometry. Its rearrangement [`DecreasingProfile`] is the right-continuous
//! non-increasing step function on `(0, ∞)` with the same distribution.
//!
//! Exact equimeasurability is an accumulation-order contract: the tail
//! function and the rearrangement both sum masses piece by piece in the
//! same stable descending-value order, so every tail mass equals the
//! corresponding profile breakpoint bit for bit, not merely up to rounding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub value: f64,
    pub mass: f64,
}

/// A non-negative step function with finitely many pieces of positive mass.
/// Construction takes absolute values: rearrangement theory only ever sees
/// `|f|`.
#[derive(Clone, Debug)]
pub struct StepFunction {
    pieces: Vec<Piece>,
}

impl StepFunction {
    pub fn new(pieces: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let pieces: Vec<Piece> = pieces
            .into_iter()
            .map(|(value, mass)| {
                if !value.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "piece value must be finite, got {value}"
                    )));
                }
                if !(mass.is_finite() && mass > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "piece mass must be finite and positive, got {mass}"
                    )));
                }
                Ok(Piece {
                    value: value.abs(),
                    mass,
                })
            })
            .collect::<Result<_>>()?;
        if pieces.is_empty() {
            return Err(Error::InvalidArgument(
                "a step function needs at least one piece".into(),
            ));
        }
        Ok(StepFunction { pieces })
    }

    /// Equal-mass pieces (mass `1/n` each) from `n` sampled values.
    /// Sampling is meant for profiles already given as non-negative curves,
    /// so a negative sample is an error rather than silently rectified.
    pub fn from_samples(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("need at least one sample".into()));
        }
        let mass = 1.0 / values.len() as f64;
        let pieces = values
            .iter()
            .map(|&v| {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "analytic samples must be finite and non-negative, got {v}"
                    )));
                }
                Ok(Piece { value: v, mass })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StepFunction { pieces })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Total mass in storage order. The rearrangement accumulates in sorted
    /// order instead; see [`DecreasingProfile::total_mass`].
    pub fn total_mass(&self) -> f64 {
        self.pieces.iter().map(|p| p.mass).sum()
    }

    /// `∫ |f| dμ` in storage order.
    pub fn integral(&self) -> f64 {
        self.pieces.iter().map(|p| p.value * p.mass).sum()
    }

    /// Masses rescaled to total 1; values untouched.
    pub fn normalized(&self) -> StepFunction {
        let total = self.total_mass();
        StepFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    value: p.value,
                    mass: p.mass / total,
                })
                .collect(),
        }
    }

    /// Indices sorted by descending value; ties keep storage order.
    fn sorted_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.pieces.len()).collect();
        idx.sort_by(|&a, &b| self.pieces[b].value.total_cmp(&self.pieces[a].value));
        idx
    }

    /// Distribution tail `μ{|f| ≥ threshold}` for `threshold ≥ 0`.
    /// Accumulates in the same order as [`rearrange`](Self::rearrange), so
    /// the result is bitwise equal to the matching profile breakpoint.
    pub fn tail(&self, threshold: f64) -> Result<f64> {
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tail threshold must be finite and non-negative, got {threshold}"
            )));
        }
        let mut acc = 0.0;
        for &j in &self.sorted_indices() {
            if self.pieces[j].value >= threshold {
                acc += self.pieces[j].mass;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    /// The decreasing rearrangement.
    pub fn rearrange(&self) -> DecreasingProfile {
        let idx = self.sorted_indices();
        let mut starts = Vec::new();
        let mut values = Vec::new();
        let mut prefix = Vec::new();
        let mut cum_mass = 0.0f64;
        let mut cum_int = 0.0f64;
        let mut i = 0;
        while i < idx.len() {
            let v = self.pieces[idx[i]].value;
            starts.push(cum_mass);
            values.push(v);
            prefix.push(cum_int);
            let run_start = cum_mass;
            while i < idx.len() && self.pieces[idx[i]].value == v {
                cum_mass += self.pieces[idx[i]].mass;
                i += 1;
            }
            cum_int += v * (cum_mass - run_start);
        }
        DecreasingProfile {
            starts,
            values,
            prefix,
            total_mass: cum_mass,
            total_integral: cum_int,
        }
    }
}

/// Midpoint-sample an analytic profile on `(0, 1)` into an `n`-piece step
/// function; see [`StepFunction::from_samples`] for the validation rules.
pub fn sample_analytic(h: impl Fn(f64) -> f64, n: usize) -> Result<StepFunction> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let samples: Vec<f64> = (0..n).map(|i| h((i as f64 + 0.5) / n as f64)).collect();
    StepFunction::from_samples(&samples)
}

/// A right-continuous non-increasing step function on `(0, total_mass)`,
/// zero beyond. Segment `i` covers `[starts[i], starts[i+1])` (the last
/// ends at `total_mass`) with strictly decreasing `values[i]`.
#[derive(Clone, Debug)]
pub struct DecreasingProfile {
    starts: Vec<f64>,
    values: Vec<f64>,
    /// `prefix[i] = ∫_0^{starts[i]} f*`.
    prefix: Vec<f64>,
    total_mass: f64,
    total_integral: f64,
}

impl DecreasingProfile {
    pub fn segment_count(&self) -> usize {
        self.values.len()
    }

    /// `(start, end, value)` of segment `i`.
    pub fn segment(&self, i: usize) -> (f64, f64, f64) {
        let end = self
            .starts
            .get(i + 1)
            .copied()
            .unwrap_or(self.total_mass);
        (self.starts[i], end, self.values[i])
    }

    /// `∫_0^{start of segment i} f*`.
    pub fn prefix_at_segment(&self, i: usize) -> f64 {
        self.prefix[i]
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn total_integral(&self) -> f64 {
        self.total_integral
    }

    fn segment_index(&self, t: f64) -> usize {
        // Last segment with starts[i] <= t; right continuity at breakpoints.
        self.starts.partition_point(|&s| s <= t) - 1
    }

    /// `f*(t)` for `t > 0`; zero from `total_mass` on.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "the rearrangement is defined for t > 0, got {t}"
            )));
        }
        if t >= self.total_mass {
            return Ok(0.0);
        }
        Ok(self.values[self.segment_index(t)])
    }

    /// `∫_0^t f*` for `t ≥ 0`; constant from `total_mass` on.
    pub fn prefix_integral(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "prefix integrals need t ≥ 0, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        if t >= self.total_mass {
            return Ok(self.total_integral);
        }
        let i = self.segment_index(t);
        Ok(self.prefix[i] + self.values[i] * (t - self.starts[i]))
    }

    /// The averaged rearrangement `f**(t) = t^{-1} ∫_0^t f*` for `t > 0`.
    pub fn double_star(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "the averaged rearrangement is defined for t > 0, got {t}"
            )));
        }
        Ok(self.prefix_integral(t)? / t)
    }

    /// `μ{f* ≥ threshold}`, bitwise equal to [`StepFunction::tail`] on the
    /// source function.
    pub fn tail(&self, threshold: f64) -> Result<f64> {
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tail threshold must be finite and non-negative, got {threshold}"
            )));
        }
        let n = self.values.partition_point(|&v| v >= threshold);
        Ok(if n == self.values.len() {
            self.total_mass
        } else {
            self.starts[n]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_piece() -> StepFunction {
        StepFunction::new([(3.0, 0.2), (1.0, 0.5), (2.0, 0.3)]).unwrap()
    }

    #[test]
    fn construction_validates_pieces() {
        assert!(StepFunction::new([]).is_err());
        assert!(StepFunction::new([(1.0, 0.0)]).is_err());
        assert!(StepFunction::new([(1.0, -0.1)]).is_err());
        assert!(StepFunction::new([(f64::INFINITY, 0.1)]).is_err());
        // Values pass through as |f|.
        let f = StepFunction::new([(-2.0, 0.5)]).unwrap();
        assert_eq!(f.pieces()[0].value, 2.0);
    }

    #[test]
    fn rearrangement_sorts_and_merges() {
        let f = three_piece();
        let p = f.rearrange();
        assert_eq!(p.segment_count(), 3);
        assert_eq!(p.segment(0), (0.0, 0.2, 3.0));
        assert_eq!(p.segment(1), (0.2, 0.5, 2.0));
        assert_eq!(p.segment(2), (0.5, 1.0, 1.0));
        assert_eq!(p.total_mass(), 1.0);
        assert!((p.total_integral() - 1.7).abs() < 1e-15);

        let tied = StepFunction::new([(2.0, 0.25), (2.0, 0.25), (1.0, 0.5)]).unwrap();
        assert_eq!(tied.rearrange().segment_count(), 2);
    }

    #[test]
    fn profile_values_are_right_continuous() {
        let p = three_piece().rearrange();
        assert_eq!(p.value_at(0.1).unwrap(), 3.0);
        assert_eq!(p.value_at(0.2).unwrap(), 2.0);
        assert_eq!(p.value_at(0.5).unwrap(), 1.0);
        assert_eq!(p.value_at(1.0).unwrap(), 0.0);
        assert_eq!(p.value_at(7.0).unwrap(), 0.0);
        assert!(p.value_at(0.0).is_err());
    }

    #[test]
    fn tails_match_profile_breakpoints_bitwise() {
        let f = three_piece();
        let p = f.rearrange();
        for thr in [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5] {
            assert_eq!(f.tail(thr).unwrap(), p.tail(thr).unwrap(), "thr = {thr}");
        }
        assert_eq!(f.tail(0.0).unwrap(), 1.0);
        assert_eq!(f.tail(2.0).unwrap(), 0.5);
        assert_eq!(f.tail(3.1).unwrap(), 0.0);
        assert!(f.tail(-1.0).is_err());
    }

    #[test]
    fn double_star_averages_the_prefix() {
        let p = three_piece().rearrange();
        // ∫_0^0.4 f* = 3(0.2) + 2(0.2) = 1.0.
        assert!((p.prefix_integral(0.4).unwrap() - 1.0).abs() < 1e-15);
        assert!((p.double_star(0.4).unwrap() - 2.5).abs() < 1e-15);
        // Beyond the support the average decays like 1/t.
        assert!((p.double_star(2.0).unwrap() - 0.85).abs() < 1e-15);
        assert!(p.double_star(0.0).is_err());
    }

    #[test]
    fn sampling_rejects_negative_profiles() {
        assert!(sample_analytic(|t| 0.5 - t, 8).is_err());
        assert!(sample_analytic(|_| 1.0, 0).is_err());
        let f = sample_analytic(|t| 1.0 - t, 4).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.pieces()[0].value, 1.0 - 0.125);
        assert!((f.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalization_rescales_masses_only() {
        let f = StepFunction::new([(2.0, 1.0), (1.0, 3.0)]).unwrap();
        let g = f.normalized();
        assert!((g.total_mass() - 1.0).abs() < 1e-15);
        assert_eq!(g.pieces()[0].value, 2.0);
        assert_eq!(g.pieces()[0].mass, 0.25);
    }
}
