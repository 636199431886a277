//! Fringe fitting and parameter estimation: sinusoid fits for (baseline,
//! visibility), reflectivity estimators from count ratios, and the
//! visibility quality-factor prediction.

use crate::model::{Beam, Scenario};
use crate::Scalar;
use thiserror::Error;

/// Errors from series validation, fitting and estimation.
#[derive(Debug, Error, PartialEq)]
pub enum CalibrationError {
    #[error("fringe series is empty")]
    EmptySeries,
    #[error("chi values must increase strictly (violated at point {index})")]
    NonMonotoneChi { index: usize },
    #[error("negative value at point {index}")]
    NegativeValue { index: usize },
    #[error("sigma at point {index} must be positive and finite")]
    InvalidSigma { index: usize },
    #[error("fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("fringe design is underdetermined (no usable spread in the regressors)")]
    Underdetermined,
    #[error("fitted baseline b = {b} is not positive")]
    NonpositiveBaseline { b: f64 },
    #[error("count ratio a = {a} below the estimator domain (needs a >= {min})")]
    RatioDomain { a: f64, min: f64 },
    #[error("reflectivity {0} outside (0, 1)")]
    ReflectivityDomain(f64),
    #[error("measured visibility {0} outside [0, 1]")]
    VisibilityDomain(f64),
}

/// One sample of a fringe scan.
///
/// Both the radian and the degree value of the scan phase are kept: files
/// and flags use degrees, the math uses radians, and keeping the parsed
/// degree value verbatim lets a write/read cycle reproduce a series exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringePoint<F: Scalar> {
    /// Scan phase in radians.
    pub chi: F,
    /// Scan phase in degrees, canonical at file boundaries.
    pub chi_deg: F,
    /// Counts or probability; non-negative.
    pub value: F,
    /// Optional 1-sigma uncertainty of `value`.
    pub sigma: Option<F>,
}

impl<F: Scalar> FringePoint<F> {
    pub fn from_degrees(chi_deg: F, value: F, sigma: Option<F>) -> Self {
        let chi = chi_deg * F::PI() / F::from_f64_lossy(180.0);
        Self {
            chi,
            chi_deg,
            value,
            sigma,
        }
    }

    pub fn from_radians(chi: F, value: F, sigma: Option<F>) -> Self {
        let chi_deg = chi * F::from_f64_lossy(180.0) / F::PI();
        Self {
            chi,
            chi_deg,
            value,
            sigma,
        }
    }
}

/// A validated fringe scan for one scenario and one detector beam.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeSeries<F: Scalar> {
    pub scenario: Scenario<F>,
    pub beam: Beam,
    points: Vec<FringePoint<F>>,
}

impl<F: Scalar> FringeSeries<F> {
    /// Validates and wraps a point list: strictly increasing `chi`,
    /// non-negative values, positive finite sigmas where present.
    pub fn new(
        scenario: Scenario<F>,
        beam: Beam,
        points: Vec<FringePoint<F>>,
    ) -> Result<Self, CalibrationError> {
        if points.is_empty() {
            return Err(CalibrationError::EmptySeries);
        }
        for (index, p) in points.iter().enumerate() {
            if index > 0 && p.chi <= points[index - 1].chi {
                return Err(CalibrationError::NonMonotoneChi { index });
            }
            if p.value < F::zero() {
                return Err(CalibrationError::NegativeValue { index });
            }
            if let Some(s) = p.sigma {
                if s <= F::zero() || !s.is_finite() {
                    return Err(CalibrationError::InvalidSigma { index });
                }
            }
        }
        Ok(Self {
            scenario,
            beam,
            points,
        })
    }

    pub fn points(&self) -> &[FringePoint<F>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Mean of the values over the scan, for ratio-style analyses.
    pub fn mean_value(&self) -> F {
        let sum = self
            .points
            .iter()
            .map(|p| p.value)
            .fold(F::zero(), |s, v| s + v);
        sum / F::from_f64_lossy(self.points.len() as f64)
    }
}

/// Result of the two-parameter fringe fit `f(chi) = b (1 + v sin chi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult<F: Scalar> {
    pub b: F,
    /// Signed visibility.
    pub v: F,
    /// Root-mean-square residual in value units.
    pub residual_rms: F,
    /// Covariance of `(b, v)`.
    pub covariance: [[F; 2]; 2],
    /// Set when `|v|` exceeds `1 + 3 stderr(v)`.
    pub v_flagged: bool,
}

impl<F: Scalar> FitResult<F> {
    pub fn stderr_b(&self) -> F {
        self.covariance[0][0].sqrt()
    }

    pub fn stderr_v(&self) -> F {
        self.covariance[1][1].sqrt()
    }
}

/// Result of the three-parameter variant `f(chi) = b (1 + v cos(chi + phi2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosFitResult<F: Scalar> {
    pub b: F,
    /// Non-negative by construction; the sign lives in `phi2`.
    pub v: F,
    pub phi2: F,
    pub residual_rms: F,
    /// Set when `v > 1`.
    pub v_flagged: bool,
}

fn weights<F: Scalar>(series: &FringeSeries<F>) -> (Vec<F>, bool) {
    let all_sigma = series.points().iter().all(|p| p.sigma.is_some());
    let w = series
        .points()
        .iter()
        .map(|p| match (all_sigma, p.sigma) {
            (true, Some(s)) => F::one() / (s * s),
            _ => F::one(),
        })
        .collect();
    (w, all_sigma)
}

/// Least-squares fit of `f(chi) = b (1 + v sin chi)`.
///
/// The model is linear in `(b, b v)`, so the fit solves the 2x2 normal
/// equations exactly, then divides. Weighted by `1/sigma²` when every point
/// carries a sigma (covariance taken from the weighted design), unweighted
/// otherwise (covariance scaled by the residual variance).
pub fn fit_fringe<F: Scalar>(series: &FringeSeries<F>) -> Result<FitResult<F>, CalibrationError> {
    let n = series.len();
    if n < 3 {
        return Err(CalibrationError::TooFewPoints { needed: 3, got: n });
    }
    let xs: Vec<F> = series.points().iter().map(|p| p.chi.sin()).collect();
    let spread = xs.iter().fold(F::neg_infinity(), |m, x| m.max(*x))
        - xs.iter().fold(F::infinity(), |m, x| m.min(*x));
    if spread <= F::from_f64_lossy(1e-12) {
        return Err(CalibrationError::Underdetermined);
    }
    let (w, weighted) = weights(series);

    let mut s_w = F::zero();
    let mut s_x = F::zero();
    let mut s_xx = F::zero();
    let mut s_y = F::zero();
    let mut s_xy = F::zero();
    for ((p, x), wi) in series.points().iter().zip(&xs).zip(&w) {
        s_w += *wi;
        s_x += *wi * *x;
        s_xx += *wi * *x * *x;
        s_y += *wi * p.value;
        s_xy += *wi * *x * p.value;
    }
    let det = s_w * s_xx - s_x * s_x;
    if det.abs() <= F::from_f64_lossy(1e-12) * s_w * s_xx.abs().max(F::one()) {
        return Err(CalibrationError::Underdetermined);
    }
    let p0 = (s_xx * s_y - s_x * s_xy) / det;
    let p1 = (s_w * s_xy - s_x * s_y) / det;
    if p0 <= F::zero() {
        return Err(CalibrationError::NonpositiveBaseline {
            b: p0.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut rss = F::zero();
    for (p, x) in series.points().iter().zip(&xs) {
        let r = p.value - (p0 + p1 * *x);
        rss += r * r;
    }
    let nf = F::from_f64_lossy(n as f64);
    let residual_rms = (rss / nf).sqrt();

    // Covariance of (p0, p1) from the inverse normal matrix.
    let scale = if weighted {
        F::one()
    } else {
        rss / F::from_f64_lossy((n - 2) as f64)
    };
    let cp = [
        [scale * s_xx / det, -scale * s_x / det],
        [-scale * s_x / det, scale * s_w / det],
    ];
    // Propagate to (b, v) = (p0, p1/p0).
    let v = p1 / p0;
    let j10 = -p1 / (p0 * p0);
    let j11 = F::one() / p0;
    let covariance = [
        [cp[0][0], j10 * cp[0][0] + j11 * cp[0][1]],
        [
            j10 * cp[0][0] + j11 * cp[1][0],
            j10 * j10 * cp[0][0]
                + j10 * j11 * (cp[0][1] + cp[1][0])
                + j11 * j11 * cp[1][1],
        ],
    ];
    let three = F::from_f64_lossy(3.0);
    let v_flagged = v.abs() > F::one() + three * covariance[1][1].max(F::zero()).sqrt();
    Ok(FitResult {
        b: p0,
        v,
        residual_rms,
        covariance,
        v_flagged,
    })
}

fn solve3<F: Scalar>(m: [[F; 3]; 3], rhs: [F; 3]) -> Option<[F; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let norm = m
        .iter()
        .flatten()
        .fold(F::zero(), |a, x| a.max(x.abs()))
        .powi(3);
    if det.abs() <= F::from_f64_lossy(1e-12) * norm.max(F::one()) {
        return None;
    }
    let mut out = [F::zero(); 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut mk = m;
        for (row, r) in mk.iter_mut().zip(rhs) {
            row[k] = r;
        }
        let dk = mk[0][0] * (mk[1][1] * mk[2][2] - mk[1][2] * mk[2][1])
            - mk[0][1] * (mk[1][0] * mk[2][2] - mk[1][2] * mk[2][0])
            + mk[0][2] * (mk[1][0] * mk[2][1] - mk[1][1] * mk[2][0]);
        *o = dk / det;
    }
    Some(out)
}

/// Least-squares fit of `f(chi) = b (1 + v cos(chi + phi2))`.
///
/// Expanded as `p0 + p1 cos(chi) + p2 sin(chi)` this is linear too, so the
/// exact 3x3 normal equations replace any phase-grid search; the phase and
/// visibility come back out of `(p1, p2)`.
pub fn fit_fringe_cos<F: Scalar>(
    series: &FringeSeries<F>,
) -> Result<CosFitResult<F>, CalibrationError> {
    let n = series.len();
    if n < 3 {
        return Err(CalibrationError::TooFewPoints { needed: 3, got: n });
    }
    let (w, _) = weights(series);
    let mut m = [[F::zero(); 3]; 3];
    let mut rhs = [F::zero(); 3];
    for (p, wi) in series.points().iter().zip(&w) {
        let row = [F::one(), p.chi.cos(), p.chi.sin()];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += *wi * row[i] * row[j];
            }
            rhs[i] += *wi * row[i] * p.value;
        }
    }
    let [p0, p1, p2] = solve3(m, rhs).ok_or(CalibrationError::Underdetermined)?;
    if p0 <= F::zero() {
        return Err(CalibrationError::NonpositiveBaseline {
            b: p0.to_f64().unwrap_or(f64::NAN),
        });
    }
    let amp = (p1 * p1 + p2 * p2).sqrt();
    let v = amp / p0;
    let phi2 = (-p2).atan2(p1);
    let mut rss = F::zero();
    for p in series.points() {
        let r = p.value - (p0 + p1 * p.chi.cos() + p2 * p.chi.sin());
        rss += r * r;
    }
    Ok(CosFitResult {
        b: p0,
        v,
        phi2,
        residual_rms: (rss / F::from_f64_lossy(n as f64)).sqrt(),
        v_flagged: v > F::one(),
    })
}

/// Reflectivity roots from the fringe-free H/O count ratio of the bare
/// instrument at `chi = 0`: `R = (1 ± √((a−1)/(a+1))) / 2`.
pub fn estimate_r_empty<F: Scalar>(a: F) -> Result<(F, F), CalibrationError> {
    if a < F::one() || a.is_nan() {
        return Err(CalibrationError::RatioDomain {
            a: a.to_f64().unwrap_or(f64::NAN),
            min: 1.0,
        });
    }
    let two = F::from_f64_lossy(2.0);
    let root = ((a - F::one()) / (a + F::one())).sqrt();
    Ok(((F::one() - root) / two, (F::one() + root) / two))
}

/// Reflectivity roots from the postselected H/O ratio at `chi = 0`:
/// `R = (1 ± √((a−2)/(a+2))) / 2`.
pub fn estimate_r_postselected<F: Scalar>(a: F) -> Result<(F, F), CalibrationError> {
    let two = F::from_f64_lossy(2.0);
    if a < two || a.is_nan() {
        return Err(CalibrationError::RatioDomain {
            a: a.to_f64().unwrap_or(f64::NAN),
            min: 2.0,
        });
    }
    let root = ((a - two) / (a + two)).sqrt();
    Ok(((F::one() - root) / two, (F::one() + root) / two))
}

/// Expected H-beam visibility given the splitter reflectivity and the
/// measured O-beam visibility: `v_H = v_O · 2RT/(R²+T²)` with `T = 1−R`.
pub fn quality_factor_prediction<F: Scalar>(
    r: F,
    v_o_measured: F,
) -> Result<F, CalibrationError> {
    if r <= F::zero() || r >= F::one() {
        return Err(CalibrationError::ReflectivityDomain(
            r.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if v_o_measured < F::zero() || v_o_measured > F::one() {
        return Err(CalibrationError::VisibilityDomain(
            v_o_measured.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let two = F::from_f64_lossy(2.0);
    let t = F::one() - r;
    Ok(v_o_measured * two * r * t / (r * r + t * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Scenario;
    use crate::oracle::{empty_probs, ideal_visibilities, prob_h, prob_o};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn synth(b: f64, v: f64, n: usize, sigma: Option<f64>) -> FringeSeries<f64> {
        let points = (0..n)
            .map(|k| {
                let chi_deg = k as f64 * 360.0 / n as f64;
                let chi = chi_deg.to_radians();
                FringePoint::from_degrees(chi_deg, b * (1.0 + v * chi.sin()), sigma)
            })
            .collect();
        FringeSeries::new(Scenario::Empty, Beam::O, points).unwrap()
    }

    #[test]
    fn series_validation() {
        let p = |deg: f64, v: f64| FringePoint::from_degrees(deg, v, None);
        assert_eq!(
            FringeSeries::<f64>::new(Scenario::Empty, Beam::O, vec![]),
            Err(CalibrationError::EmptySeries)
        );
        assert_eq!(
            FringeSeries::new(Scenario::Empty, Beam::O, vec![p(0.0, 1.0), p(0.0, 2.0)]),
            Err(CalibrationError::NonMonotoneChi { index: 1 })
        );
        assert_eq!(
            FringeSeries::new(Scenario::Empty, Beam::O, vec![p(0.0, -1.0)]),
            Err(CalibrationError::NegativeValue { index: 0 })
        );
        let bad_sigma = FringePoint::from_degrees(0.0, 1.0, Some(0.0));
        assert_eq!(
            FringeSeries::new(Scenario::Empty, Beam::O, vec![bad_sigma]),
            Err(CalibrationError::InvalidSigma { index: 0 })
        );
    }

    #[test]
    fn degree_radian_bookkeeping() {
        let p = FringePoint::<f64>::from_degrees(90.0, 1.0, None);
        assert_close(p.chi, PI / 2.0, 1e-15);
        let q = FringePoint::<f64>::from_radians(PI, 2.0, None);
        assert_close(q.chi_deg, 180.0, 1e-12);
    }

    #[test]
    fn noiseless_fit_recovers_parameters() {
        for (b, v) in [(5378.0, 0.82), (10467.0, -0.41), (1.0, 0.0)] {
            let fit = fit_fringe(&synth(b, v, 8, None)).unwrap();
            assert_close(fit.b, b, 1e-9 * b);
            assert_close(fit.v, v, 1e-9);
            assert!(fit.residual_rms <= 1e-9 * b);
            assert!(!fit.v_flagged);
        }
        // Same recovery when sigmas are attached.
        let fit = fit_fringe(&synth(5378.0, 0.82, 8, Some(50.0))).unwrap();
        assert_close(fit.b, 5378.0, 1e-6);
        assert_close(fit.v, 0.82, 1e-9);
    }

    #[test]
    fn fit_preconditions() {
        let two = synth(10.0, 0.5, 8, None).points()[..2].to_vec();
        let short = FringeSeries::new(Scenario::<f64>::Empty, Beam::O, two).unwrap();
        assert_eq!(
            fit_fringe(&short),
            Err(CalibrationError::TooFewPoints { needed: 3, got: 2 })
        );

        // chi = 0, π, 2π: all sin(chi) ≈ 0, so (b, v) cannot separate.
        let flat = FringeSeries::new(
            Scenario::<f64>::Empty,
            Beam::O,
            vec![
                FringePoint::from_degrees(0.0, 1.0, None),
                FringePoint::from_degrees(180.0, 1.1, None),
                FringePoint::from_degrees(360.0, 0.9, None),
            ],
        )
        .unwrap();
        assert_eq!(fit_fringe(&flat), Err(CalibrationError::Underdetermined));
    }

    #[test]
    fn negative_baseline_is_rejected() {
        // sin(chi) = 0.5, 1, 0.5: the extrapolated baseline at sin(chi) = 0
        // sits at −6 even though every value is non-negative.
        let points = vec![
            FringePoint::from_degrees(30.0, 0.0, None),
            FringePoint::from_degrees(90.0, 6.0, None),
            FringePoint::from_degrees(150.0, 0.0, None),
        ];
        let series = FringeSeries::new(Scenario::<f64>::Empty, Beam::O, points).unwrap();
        assert!(matches!(
            fit_fringe(&series),
            Err(CalibrationError::NonpositiveBaseline { .. })
        ));
    }

    #[test]
    fn noisy_fit_is_unbiased_within_monte_carlo_error() {
        let (b, v) = (5378.0, 0.82);
        let mut rng = StdRng::seed_from_u64(2024);
        let mut gauss = move || {
            let (u1, u2): (f64, f64) = (rng.gen(), rng.gen());
            (-2.0 * u1.max(1e-12).ln()).sqrt() * (2.0 * PI * u2).cos()
        };
        let sigma = 0.01 * b;
        let mut vs = Vec::new();
        for _ in 0..200 {
            let points = (0..16)
                .map(|k| {
                    let chi_deg = k as f64 * 22.5;
                    let clean = b * (1.0 + v * chi_deg.to_radians().sin());
                    FringePoint::from_degrees(chi_deg, (clean + sigma * gauss()).max(0.0), Some(sigma))
                })
                .collect();
            let series = FringeSeries::new(Scenario::Empty, Beam::O, points).unwrap();
            vs.push(fit_fringe(&series).unwrap().v);
        }
        let mean = vs.iter().sum::<f64>() / vs.len() as f64;
        let var = vs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (vs.len() - 1) as f64;
        let stderr_mean = (var / vs.len() as f64).sqrt();
        assert!(
            (mean - v).abs() <= 2.0 * stderr_mean,
            "mean {mean}, truth {v}, stderr {stderr_mean}"
        );
        // The per-fit error estimate should be in the same regime as the
        // observed scatter.
        let fit = fit_fringe(&synth(b, v, 16, Some(sigma))).unwrap();
        let predicted = fit.stderr_v();
        assert!(predicted > 0.3 * var.sqrt() && predicted < 3.0 * var.sqrt());
    }

    #[test]
    fn cos_variant_recovers_and_reduces_to_sin() {
        let (b, v, phi2) = (100.0, 0.6, 0.9);
        let points = (0..12)
            .map(|k| {
                let chi_deg = k as f64 * 30.0;
                let chi = chi_deg.to_radians();
                FringePoint::from_degrees(chi_deg, b * (1.0 + v * (chi + phi2).cos()), None)
            })
            .collect();
        let series = FringeSeries::new(Scenario::<f64>::Empty, Beam::O, points).unwrap();
        let fit = fit_fringe_cos(&series).unwrap();
        assert_close(fit.b, b, 1e-9);
        assert_close(fit.v, v, 1e-12);
        assert_close(fit.phi2, phi2, 1e-12);
        assert!(fit.residual_rms < 1e-9);

        // cos(chi − π/2) = sin(chi): both fits describe the same data.
        let sin_series = synth(5378.0, 0.82, 8, None);
        let cos_fit = fit_fringe_cos(&sin_series).unwrap();
        assert_close(cos_fit.v, 0.82, 1e-9);
        assert_close(cos_fit.phi2, -PI / 2.0, 1e-9);
    }

    #[test]
    fn reflectivity_estimators_match_known_ratios() {
        let (lo, hi) = estimate_r_empty(10467.0 / 5378.0).unwrap();
        assert_close(lo, 0.21663897944323968, 1e-12);
        assert_close(hi, 0.7833610205567603, 1e-12);
        let (lo, hi) = estimate_r_empty(3.0).unwrap();
        assert_close(lo, 0.1464466094067262, 1e-12);
        assert_close(hi, 0.8535533905932737, 1e-12);
        let (lo, hi) = estimate_r_empty(1.0).unwrap();
        assert_eq!((lo, hi), (0.5, 0.5));

        let (lo, hi) = estimate_r_postselected(144.0 / 11.0).unwrap();
        assert_close(lo, 0.0713568619946936, 1e-12);
        assert_close(hi, 0.9286431380053064, 1e-12);
        let (lo, hi) = estimate_r_postselected(13.0).unwrap();
        assert_close(lo, 0.0718255807111624, 1e-12);
        assert_close(hi, 0.9281744192888376, 1e-12);
        let (lo, hi) = estimate_r_postselected(2.0).unwrap();
        assert_eq!((lo, hi), (0.5, 0.5));

        assert!(matches!(
            estimate_r_empty(0.999),
            Err(CalibrationError::RatioDomain { .. })
        ));
        assert!(matches!(
            estimate_r_postselected(1.999),
            Err(CalibrationError::RatioDomain { .. })
        ));
    }

    #[test]
    fn estimators_invert_the_forward_ratios() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..100 {
            let r: f64 = rng.gen::<f64>() * 0.98 + 0.01;
            let (p_h, p_o) = empty_probs(r, 0.0).unwrap();
            let (lo, hi) = estimate_r_empty(p_h / p_o).unwrap();
            assert_close(lo, r.min(1.0 - r), 1e-10);
            assert_close(hi, r.max(1.0 - r), 1e-10);

            let mut cfg =
                crate::model::scenario_config(&Scenario::<f64>::Reference, 0.0).unwrap();
            cfg.r = r;
            let a = prob_h(&cfg).unwrap() / prob_o(&cfg).unwrap();
            let (lo, hi) = estimate_r_postselected(a).unwrap();
            assert_close(lo, r.min(1.0 - r), 1e-10);
            assert_close(hi, r.max(1.0 - r), 1e-10);
        }
    }

    #[test]
    fn quality_factor_examples() {
        assert_close(
            quality_factor_prediction(0.22, 0.82).unwrap(),
            0.42847746650426305,
            1e-15,
        );
        assert_close(quality_factor_prediction(0.5, 1.0).unwrap(), 1.0, 1e-15);
        assert_close(
            quality_factor_prediction(0.22, 1.0).unwrap(),
            0.5225334957369062,
            1e-15,
        );
        // Single source of truth for the ideal visibility.
        let (v_h, _) = ideal_visibilities(0.22).unwrap();
        assert_eq!(quality_factor_prediction(0.22, 1.0).unwrap(), v_h);

        assert!(quality_factor_prediction(0.0, 0.5).is_err());
        assert!(quality_factor_prediction(0.22, 1.2).is_err());
    }

    #[test]
    fn oracle_empty_fringes_fit_to_ideal_visibilities() {
        let mut o_points = Vec::new();
        let mut h_points = Vec::new();
        for k in 0..12 {
            let chi_deg = k as f64 * 30.0;
            let (p_h, p_o) = empty_probs(0.22, chi_deg.to_radians()).unwrap();
            o_points.push(FringePoint::from_degrees(chi_deg, p_o, None));
            h_points.push(FringePoint::from_degrees(chi_deg, p_h, None));
        }
        let o_fit = fit_fringe(
            &FringeSeries::new(Scenario::<f64>::Empty, Beam::O, o_points).unwrap(),
        )
        .unwrap();
        assert_close(o_fit.v, 1.0, 1e-9);
        assert_close(o_fit.b, 0.075504, 1e-12);

        let h_fit = fit_fringe(
            &FringeSeries::new(Scenario::<f64>::Empty, Beam::H, h_points).unwrap(),
        )
        .unwrap();
        // The H fringe runs in antiphase: signed visibility is negative.
        assert_close(h_fit.v, -0.5225334957369062, 1e-9);
        assert_close(h_fit.b, 0.144496, 1e-12);
    }
}
