//! Weak values of path-presence and spin-path operators, and the intensity
//! ratios from which an experiment extracts them.

use crate::model::{InterferometerConfig, Path, Postselect, StateVector8};
use crate::oracle::{
    apply_pair, component_matrix, pipeline_probs, ps1_zero_offset, Component, Mat2, OracleError,
};
use crate::{cre, CScalar, Scalar};
use thiserror::Error;

/// Errors from weak-value evaluation.
#[derive(Debug, Error, PartialEq)]
pub enum WeakError {
    /// The probe-strength division blows up at zero probe angle.
    #[error("weak-value estimator undefined in the limit {field} = 0")]
    UndefinedLimit { field: &'static str },
    /// Pre- and postselected states are (numerically) orthogonal.
    #[error("postselection is orthogonal to the preselected state (overlap {overlap:e})")]
    DegenerateOverlap { overlap: f64 },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Dense operator on the 8-component state space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator8<F: Scalar>(pub [[CScalar<F>; 8]; 8]);

impl<F: Scalar> Operator8<F> {
    pub fn zero() -> Self {
        Self([[cre(F::zero()); 8]; 8])
    }

    /// Projector onto the spin pair of one interior arm.
    pub fn presence(path: Path) -> Self {
        let mut m = Self::zero();
        let base = match path {
            Path::One => 4,
            Path::Two => 6,
        };
        m.0[base][base] = cre(F::one());
        m.0[base + 1][base + 1] = cre(F::one());
        m
    }

    /// Product of the Pauli z spin operator with an arm projector:
    /// `diag(1, −1)` on that arm's spin pair.
    pub fn spin_z_presence(path: Path) -> Self {
        let mut m = Self::zero();
        let base = match path {
            Path::One => 4,
            Path::Two => 6,
        };
        m.0[base][base] = cre(F::one());
        m.0[base + 1][base + 1] = cre(-F::one());
        m
    }

    pub fn apply(&self, v: &StateVector8<F>) -> StateVector8<F> {
        let mut out = StateVector8::zero();
        for (row, out_c) in self.0.iter().zip(out.0.iter_mut()) {
            *out_c = row
                .iter()
                .zip(v.0.iter())
                .map(|(m, x)| *m * *x)
                .fold(cre(F::zero()), |s, x| s + x);
        }
        out
    }
}

fn dagger<F: Scalar>(m: &Mat2<F>) -> Mat2<F> {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

/// Preselected state: the prepared spin propagated into the interior arms,
/// up to (not including) the first arm element. Components `(4, 5)` hold
/// arm 1, `(6, 7)` arm 2; the transmitted losses stay in `(0..4)`.
pub fn preselected_state<F: Scalar>(
    cfg: &InterferometerConfig<F>,
) -> Result<StateVector8<F>, OracleError> {
    let bs = component_matrix(Component::BeamSplitter(cfg.r))?;
    let st_alpha = component_matrix(Component::SpinTurner(cfg.alpha))?;
    let sr_mu1 = component_matrix(Component::SpinRotator(cfg.mu1))?;
    let sr_mu2 = component_matrix(Component::SpinRotator(cfg.mu2))?;
    let mut state = StateVector8::initial();
    apply_pair(&mut state, &st_alpha, 0, 1);
    apply_pair(&mut state, &bs, 0, 2);
    apply_pair(&mut state, &bs, 1, 3);
    apply_pair(&mut state, &sr_mu1, 0, 1);
    apply_pair(&mut state, &sr_mu2, 2, 3);
    apply_pair(&mut state, &bs, 0, 4);
    apply_pair(&mut state, &bs, 1, 5);
    apply_pair(&mut state, &bs, 2, 6);
    apply_pair(&mut state, &bs, 3, 7);
    Ok(state)
}

fn pulled_back_detection<F: Scalar>(
    cfg: &InterferometerConfig<F>,
    detector_slot: usize,
    turner_pair: (usize, usize),
) -> Result<StateVector8<F>, OracleError> {
    let bs = dagger(&component_matrix(Component::BeamSplitter(cfg.r))?);
    let st_beta = dagger(&component_matrix(Component::SpinTurner(cfg.beta))?);
    let ps1 = dagger(&component_matrix(Component::PhaseShifter(
        cfg.phi1 - ps1_zero_offset(),
    ))?);
    let ps2 = dagger(&component_matrix(Component::PhaseShifter(cfg.phi2))?);
    let mut state = StateVector8::basis(detector_slot);
    apply_pair(&mut state, &st_beta, turner_pair.0, turner_pair.1);
    apply_pair(&mut state, &bs, 4, 6);
    apply_pair(&mut state, &bs, 5, 7);
    apply_pair(&mut state, &ps1, 4, 5);
    apply_pair(&mut state, &ps2, 6, 7);
    Ok(state)
}

/// Postselected state for the O-beam analyzer: the spin-up detection mode
/// pulled back through the turner, the final splitter and the phase plates
/// to the cut where [`preselected_state`] lives.
pub fn postselected_state_o<F: Scalar>(
    cfg: &InterferometerConfig<F>,
) -> Result<StateVector8<F>, OracleError> {
    pulled_back_detection(cfg, 6, (6, 7))
}

/// Same pullback for an analyzer in the H beam.
pub fn postselected_state_h<F: Scalar>(
    cfg: &InterferometerConfig<F>,
) -> Result<StateVector8<F>, OracleError> {
    pulled_back_detection(cfg, 4, (4, 5))
}

/// The defining quotient `⟨post|A|pre⟩ / ⟨post|pre⟩`.
pub fn generic_weak_value<F: Scalar>(
    op: &Operator8<F>,
    pre: &StateVector8<F>,
    post: &StateVector8<F>,
) -> Result<CScalar<F>, WeakError> {
    let denom = post.inner(pre);
    if denom.norm() < F::from_f64_lossy(1e-12) {
        return Err(WeakError::DegenerateOverlap {
            overlap: denom.norm().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(post.inner(&op.apply(pre)) / denom)
}

/// Weak-value estimates a fringe experiment reports for one beam.
///
/// `pi1` and `pi2` are the linear-response path-presence readouts from the
/// absorber probes; `sz_pi1_sq` and `sz_pi2_sq` are the squared-magnitude
/// readouts of the spin-path products from the field probes, normalized by
/// `sin²(θ/2)`. They are reported as computed: anomalous configurations push
/// them outside `[0, 1]`, which sets `pathological` instead of clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValueReport<F: Scalar> {
    pub pi1: F,
    pub pi2: F,
    pub sz_pi1_sq: F,
    pub sz_pi2_sq: F,
    pub pathological: bool,
}

fn require_standard_prep<F: Scalar>(cfg: &InterferometerConfig<F>) -> Result<(), WeakError> {
    let tol = F::from_f64_lossy(1e-12);
    let half_pi = F::FRAC_PI_2();
    let fields: [(&'static str, F, F); 4] = [
        ("alpha", cfg.alpha, half_pi),
        ("beta", cfg.beta, half_pi),
        ("mu1", cfg.mu1, F::zero()),
        ("mu2", cfg.mu2, F::PI()),
    ];
    for (field, got, want) in fields {
        if (got - want).abs() > tol {
            return Err(WeakError::Oracle(OracleError::SpinPrep { field }));
        }
    }
    Ok(())
}

fn report<F: Scalar>(
    cfg: &InterferometerConfig<F>,
    sz_pi1_sq: F,
) -> Result<WeakValueReport<F>, WeakError> {
    if cfg.theta1 == F::zero() {
        return Err(WeakError::UndefinedLimit { field: "theta1" });
    }
    let two = F::from_f64_lossy(2.0);
    let pi2 = (F::one() + cfg.t2.sqrt()) / two;
    let fields = [F::zero(), pi2, sz_pi1_sq, F::zero()];
    let pathological = fields.iter().any(|v| *v < F::zero() || *v > F::one());
    Ok(WeakValueReport {
        pi1: F::zero(),
        pi2,
        sz_pi1_sq,
        sz_pi2_sq: F::zero(),
        pathological,
    })
}

/// Estimates extracted from O-beam fringes behind the analyzer.
///
/// The absorber probes find the full presence in path 2 and none in path 1;
/// the field probe in path 1 still modulates the rate, with normalized
/// squared magnitude `1 + 2 sin(chi) / sin(theta1/2)`.
pub fn weak_values_o<F: Scalar>(
    cfg: &InterferometerConfig<F>,
) -> Result<WeakValueReport<F>, WeakError> {
    require_standard_prep(cfg)?;
    let two = F::from_f64_lossy(2.0);
    let sz1 = F::one() + two * cfg.chi().sin() / (cfg.theta1 / two).sin();
    report(cfg, sz1)
}

/// Estimates extracted from H-beam fringes behind a mirrored analyzer.
pub fn weak_values_h<F: Scalar>(
    cfg: &InterferometerConfig<F>,
) -> Result<WeakValueReport<F>, WeakError> {
    require_standard_prep(cfg)?;
    let two = F::from_f64_lossy(2.0);
    let (r, t) = (cfg.r, F::one() - cfg.r);
    let ratio = t / r;
    let sz1 = ratio * ratio - two * ratio * cfg.chi().sin() / (cfg.theta1 / two).sin();
    report(cfg, sz1)
}

fn probe_ratios<F: Scalar>(
    cfg: &InterferometerConfig<F>,
    postselect: Postselect,
    pick: fn((F, F)) -> F,
) -> Result<[F; 4], WeakError> {
    require_standard_prep(cfg)?;
    let mut reference = *cfg;
    reference.t1 = F::one();
    reference.t2 = F::one();
    reference.theta1 = F::zero();
    reference.theta2 = F::zero();
    reference.postselect = postselect;
    let base = pick(pipeline_probs(&reference)?);

    let mut abs1 = reference;
    abs1.t1 = cfg.t1;
    let mut abs2 = reference;
    abs2.t2 = cfg.t2;
    let mut mag1 = reference;
    mag1.theta1 = cfg.theta1;
    let mut mag2 = reference;
    mag2.theta2 = cfg.theta2;
    Ok([
        pick(pipeline_probs(&abs1)?) / base,
        pick(pipeline_probs(&abs2)?) / base,
        pick(pipeline_probs(&mag1)?) / base,
        pick(pipeline_probs(&mag2)?) / base,
    ])
}

/// O-beam rates with each probe inserted alone, divided by the reference
/// rate: `[absorber 1, absorber 2, field 1, field 2]`.
///
/// Computed from live propagation, so these stay consistent with the state
/// pipeline rather than with the algebraic forms in [`weak_values_o`].
pub fn intensity_ratios_o<F: Scalar>(
    cfg: &InterferometerConfig<F>,
) -> Result<[F; 4], WeakError> {
    probe_ratios(cfg, Postselect::OOnly, |(_, o)| o)
}

/// H-beam counterpart of [`intensity_ratios_o`] with the analyzer mirrored
/// into H.
pub fn intensity_ratios_h<F: Scalar>(
    cfg: &InterferometerConfig<F>,
) -> Result<[F; 4], WeakError> {
    probe_ratios(cfg, Postselect::HOnly, |(h, _)| h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{scenario_config, Override, Scenario};
    use std::f64::consts::{FRAC_PI_2, PI};

    type Cfg = InterferometerConfig<f64>;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn probe_cfg(chi: f64) -> Cfg {
        scenario_config(
            &Scenario::Combined(vec![
                Override::T1(0.79),
                Override::T2(0.79),
                Override::Theta1(PI / 9.0),
                Override::Theta2(PI / 9.0),
            ]),
            chi,
        )
        .unwrap()
    }

    #[test]
    fn o_beam_report_matches_frozen_values() {
        let rep = weak_values_o(&probe_cfg(FRAC_PI_2)).unwrap();
        assert_eq!(rep.pi1, 0.0);
        assert_eq!(rep.sz_pi2_sq, 0.0);
        assert_close(rep.pi2, 0.9444097208657795, 1e-15);
        assert_close(rep.sz_pi1_sq, 1.0 + 11.517540966287267, 1e-12);
        assert!(rep.pathological);

        let flat = weak_values_o(&probe_cfg(0.0)).unwrap();
        assert_eq!(flat.sz_pi1_sq, 1.0);

        let trough = weak_values_o(&probe_cfg(1.5 * PI)).unwrap();
        assert_close(trough.sz_pi1_sq, -10.517540966287267, 1e-12);
        assert!(trough.pathological);
    }

    #[test]
    fn h_beam_report_matches_frozen_values() {
        let rep = weak_values_h(&probe_cfg(0.0)).unwrap();
        assert_eq!(rep.pi1, 0.0);
        assert_eq!(rep.sz_pi2_sq, 0.0);
        assert_close(rep.pi2, 0.9444097208657795, 1e-15);
        // (T/R)² at R = 0.22.
        assert_close(rep.sz_pi1_sq, 12.570247933884298, 1e-12);
    }

    #[test]
    fn presence_readouts_sum_to_one_only_without_absorption() {
        let mut cfg = probe_cfg(0.3);
        cfg.t2 = 1.0;
        let rep = weak_values_o(&cfg).unwrap();
        assert_eq!(rep.pi1 + rep.pi2, 1.0);
        cfg.t2 = 0.5;
        let rep = weak_values_o(&cfg).unwrap();
        assert!(rep.pi1 + rep.pi2 < 1.0);
    }

    #[test]
    fn zero_probe_angle_is_rejected() {
        let mut cfg = probe_cfg(0.3);
        cfg.theta1 = 0.0;
        assert_eq!(
            weak_values_o(&cfg),
            Err(WeakError::UndefinedLimit { field: "theta1" })
        );
        assert_eq!(
            weak_values_h(&cfg),
            Err(WeakError::UndefinedLimit { field: "theta1" })
        );
    }

    #[test]
    fn nonstandard_prep_is_rejected() {
        let mut cfg = probe_cfg(0.3);
        cfg.mu2 = 0.1;
        assert!(weak_values_o(&cfg).is_err());
        assert!(intensity_ratios_o(&cfg).is_err());
    }

    #[test]
    fn o_ratios_match_reduced_forms() {
        let half = (PI / 18.0).sin();
        for k in 0..12 {
            let chi = k as f64 * 2.0 * PI / 12.0;
            let cfg = probe_cfg(chi);
            let [r1, r2, r3, r4] = intensity_ratios_o(&cfg).unwrap();
            assert_close(r1, 1.0, 1e-12);
            assert_close(r2, 0.79, 1e-12);
            assert_close(r3, 1.0 + half * half + 2.0 * chi.sin() * half, 1e-12);
            assert_close(r4, (PI / 18.0).cos().powi(2), 1e-12);
        }
        let [_, _, r3, _] = intensity_ratios_o(&probe_cfg(0.0)).unwrap();
        assert_close(r3, 1.0301536896070458, 1e-13);
    }

    #[test]
    fn ratio_route_agrees_with_report_route() {
        let half = (PI / 18.0).sin();
        for k in 0..12 {
            let chi = 0.17 + k as f64 * 2.0 * PI / 12.0;
            let cfg = probe_cfg(chi);
            let [_, r2, r3, _] = intensity_ratios_o(&cfg).unwrap();
            let rep = weak_values_o(&cfg).unwrap();
            assert_close((r3 - 1.0) / (half * half), rep.sz_pi1_sq, 1e-10);
            assert_close((1.0 - r2) / (2.0 * (1.0 - 0.79f64.sqrt())), rep.pi2, 1e-12);

            let [h1, h2, h3, h4] = intensity_ratios_h(&cfg).unwrap();
            let hrep = weak_values_h(&cfg).unwrap();
            assert_close((h3 - 1.0) / (half * half), hrep.sz_pi1_sq, 1e-9);
            assert_close(h1, 1.0, 1e-12);
            assert_close((1.0 - h2) / (2.0 * (1.0 - 0.79f64.sqrt())), hrep.pi2, 1e-12);
            assert_close(h4, (PI / 18.0).cos().powi(2), 1e-12);
        }
    }

    #[test]
    fn field_probe_in_path_two_leaves_fringes_flat() {
        // sz_pi2_sq = 0 shows up as a chi-independent ratio: the path-2
        // field attenuates without shifting the fringe.
        let mut values = Vec::new();
        for k in 0..8 {
            let cfg = probe_cfg(k as f64 * PI / 4.0);
            let [_, _, _, r4] = intensity_ratios_o(&cfg).unwrap();
            values.push(r4);
        }
        let spread = values.iter().fold(0.0f64, |m, v| m.max(*v))
            - values.iter().fold(1.0f64, |m, v| m.min(*v));
        assert!(spread <= 1e-12, "spread {spread}");
    }

    #[test]
    fn generic_weak_values_reach_ideal_limits() {
        let cfg = scenario_config(&Scenario::<f64>::Reference, 0.37).unwrap();
        let pre = preselected_state(&cfg).unwrap();
        let post = postselected_state_o(&cfg).unwrap();
        let p1 = generic_weak_value(&Operator8::presence(Path::One), &pre, &post).unwrap();
        let p2 = generic_weak_value(&Operator8::presence(Path::Two), &pre, &post).unwrap();
        let s1 =
            generic_weak_value(&Operator8::spin_z_presence(Path::One), &pre, &post).unwrap();
        let s2 =
            generic_weak_value(&Operator8::spin_z_presence(Path::Two), &pre, &post).unwrap();
        assert_close(p1.norm(), 0.0, 1e-10);
        assert_close(p2.re, 1.0, 1e-10);
        assert_close(p2.im, 0.0, 1e-10);
        assert_close(s1.norm_sqr(), 1.0, 1e-10);
        assert_close(s2.norm(), 0.0, 1e-10);
    }

    #[test]
    fn mirrored_postselection_swaps_the_roles() {
        let cfg = scenario_config(&Scenario::<f64>::Reference, 0.37).unwrap();
        let pre = preselected_state(&cfg).unwrap();
        let post = postselected_state_h(&cfg).unwrap();
        let p1 = generic_weak_value(&Operator8::presence(Path::One), &pre, &post).unwrap();
        let p2 = generic_weak_value(&Operator8::presence(Path::Two), &pre, &post).unwrap();
        // The H analyzer also postselects the path-2 spin component.
        assert_close(p1.norm(), 0.0, 1e-10);
        assert_close(p2.re, 1.0, 1e-10);
    }

    #[test]
    fn degenerate_overlap_is_an_error() {
        let pre = StateVector8::<f64>::basis(0);
        let post = StateVector8::<f64>::basis(1);
        assert!(matches!(
            generic_weak_value(&Operator8::presence(Path::One), &pre, &post),
            Err(WeakError::DegenerateOverlap { .. })
        ));
    }

    #[test]
    fn weak_values_satisfy_the_completeness_sum_rule() {
        let cfg = scenario_config(&Scenario::<f64>::Reference, 1.1).unwrap();
        let pre = preselected_state(&cfg).unwrap();
        let post = postselected_state_o(&cfg).unwrap();
        let op = Operator8::<f64>::presence(Path::One);

        // Orthonormal basis containing the postselection, via Gram-Schmidt
        // over the detection modes.
        let mut basis: Vec<StateVector8<f64>> = vec![post];
        for k in 0..8 {
            let mut v = StateVector8::<f64>::basis(k);
            for b in &basis {
                let ov = b.inner(&v);
                for i in 0..8 {
                    v.0[i] -= b.0[i] * ov;
                }
            }
            let n = v.norm_sqr().sqrt();
            if n > 1e-9 {
                for c in v.0.iter_mut() {
                    *c /= crate::Complex::new(n, 0.0);
                }
                basis.push(v);
            }
        }
        assert_eq!(basis.len(), 8);

        let mut total = crate::Complex::new(0.0, 0.0);
        for b in &basis {
            let ov = b.inner(&pre);
            // |⟨b|pre⟩|² multiplied by the weak value, written without the
            // division so near-orthogonal terms stay finite.
            total += ov.conj() * b.inner(&op.apply(&pre));
            if ov.norm() > 1e-6 {
                let wv = generic_weak_value(&op, &pre, b).unwrap();
                let reconstructed = ov.norm_sqr() * wv;
                assert_close(
                    (reconstructed - ov.conj() * b.inner(&op.apply(&pre))).norm(),
                    0.0,
                    1e-12,
                );
            }
        }
        let expectation = pre.inner(&op.apply(&pre));
        assert_close((total - expectation).norm(), 0.0, 1e-12);
    }
}
