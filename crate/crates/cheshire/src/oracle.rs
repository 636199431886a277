//! Exact quantum model: component matrices, staged propagation of the
//! 8-component state, and closed-form detection probabilities.

use crate::model::{InterferometerConfig, Postselect, StateVector8};
use crate::{cplx, cre, CScalar, Scalar};
use thiserror::Error;

/// 2x2 complex matrix acting on a spin pair or a port pair.
pub type Mat2<F> = [[CScalar<F>; 2]; 2];

/// Errors from matrix construction and closed-form evaluation.
#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    /// Absorber transmissivity outside `[0, 1]`.
    #[error("absorber transmissivity {0} outside [0, 1]")]
    AbsorberDomain(f64),
    /// Beam-splitter reflectivity outside the open interval `(0, 1)`.
    #[error("beam-splitter reflectivity {0} outside (0, 1)")]
    BeamSplitterDomain(f64),
    /// Closed forms assume the standard spin preparation
    /// (alpha = beta = π/2, mu1 = 0, mu2 = π).
    #[error("closed form requires the standard spin preparation; {field} differs")]
    SpinPrep { field: &'static str },
    /// The requested closed form does not match the analyzer placement.
    #[error("closed form assumes postselection {requirement}; configuration has {got}")]
    PostselectMismatch {
        requirement: &'static str,
        got: Postselect,
    },
}

/// A single optical element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Component<F: Scalar> {
    /// Spin rotation about y by the given angle; π/2 turns +z into +x.
    SpinTurner(F),
    /// Spin rotation about z: diagonal phases `e^{±iμ/2}`.
    SpinRotator(F),
    /// Partially transmitting absorber of the given transmissivity.
    Absorber(F),
    /// Uniform phase plate `e^{iφ}`.
    PhaseShifter(F),
    /// Lossless splitter of the given reflectivity, acting on a port pair:
    /// transmitted amplitude `√(1−R)`, reflected amplitude `i√R`.
    BeamSplitter(F),
}

/// Matrix of a component, with domain checks on lossy/splitting elements.
pub fn component_matrix<F: Scalar>(c: Component<F>) -> Result<Mat2<F>, OracleError> {
    let two = F::from_f64_lossy(2.0);
    let zero = cre(F::zero());
    Ok(match c {
        Component::SpinTurner(a) => {
            let (s, co) = (a / two).sin_cos();
            [[cre(co), cre(-s)], [cre(s), cre(co)]]
        }
        Component::SpinRotator(mu) => {
            let half = mu / two;
            [
                [cplx(F::zero(), half).exp(), zero],
                [zero, cplx(F::zero(), -half).exp()],
            ]
        }
        Component::Absorber(t) => {
            if t < F::zero() || t > F::one() {
                return Err(OracleError::AbsorberDomain(t.to_f64().unwrap_or(f64::NAN)));
            }
            let a = cre(t.sqrt());
            [[a, zero], [zero, a]]
        }
        Component::PhaseShifter(phi) => {
            let p = cplx(F::zero(), phi).exp();
            [[p, zero], [zero, p]]
        }
        Component::BeamSplitter(r) => {
            if r <= F::zero() || r >= F::one() {
                return Err(OracleError::BeamSplitterDomain(
                    r.to_f64().unwrap_or(f64::NAN),
                ));
            }
            let t = cre((F::one() - r).sqrt());
            let ir = cplx(F::zero(), r.sqrt());
            [[t, ir], [ir, t]]
        }
    })
}

/// Applies a 2x2 matrix to the state components at `(a, b)`.
#[inline]
pub fn apply_pair<F: Scalar>(state: &mut StateVector8<F>, m: &Mat2<F>, a: usize, b: usize) {
    let (xa, xb) = (state.0[a], state.0[b]);
    state.0[a] = m[0][0] * xa + m[0][1] * xb;
    state.0[b] = m[1][0] * xa + m[1][1] * xb;
}

/// Phase-origin calibration of the rotatable plate in arm 1.
///
/// The plate's mechanical zero sits a quarter period from the scan origin
/// used when recording fringes, so propagation applies `phi1` minus this
/// offset. With it, the canonical spin preparation yields detection rates
/// whose interference terms go as `sin(chi)` with `chi = phi1 − phi2`.
pub fn ps1_zero_offset<F: Scalar>() -> F {
    F::FRAC_PI_2()
}

/// Propagates the initial state through every element of the instrument.
///
/// Component layout of the returned vector: `(0, 1)` and `(2, 3)` hold the
/// spin pairs that exited at the two interior splitters (losses), `(4, 5)`
/// is the H beam and `(6, 7)` the O beam, both after the final splitter and
/// after any postselecting spin turner.
pub fn propagate<F: Scalar>(
    cfg: &InterferometerConfig<F>,
) -> Result<StateVector8<F>, OracleError> {
    let bs = component_matrix(Component::BeamSplitter(cfg.r))?;
    let st_alpha = component_matrix(Component::SpinTurner(cfg.alpha))?;
    let sr_mu1 = component_matrix(Component::SpinRotator(cfg.mu1))?;
    let sr_mu2 = component_matrix(Component::SpinRotator(cfg.mu2))?;
    let abs1 = component_matrix(Component::Absorber(cfg.t1))?;
    let abs2 = component_matrix(Component::Absorber(cfg.t2))?;
    let field1 = component_matrix(Component::SpinRotator(cfg.theta1))?;
    let field2 = component_matrix(Component::SpinRotator(cfg.theta2))?;
    let ps1 = component_matrix(Component::PhaseShifter(cfg.phi1 - ps1_zero_offset()))?;
    let ps2 = component_matrix(Component::PhaseShifter(cfg.phi2))?;
    let st_beta = component_matrix(Component::SpinTurner(cfg.beta))?;

    let mut state = StateVector8::initial();

    // Preparation and first splitter: path 1 keeps (0, 1), path 2 gets (2, 3).
    apply_pair(&mut state, &st_alpha, 0, 1);
    apply_pair(&mut state, &bs, 0, 2);
    apply_pair(&mut state, &bs, 1, 3);

    // Path spin rotators.
    apply_pair(&mut state, &sr_mu1, 0, 1);
    apply_pair(&mut state, &sr_mu2, 2, 3);

    // Interior splitters: reflected parts enter the arms, transmitted parts
    // stay in (0..4) and never reach a detector.
    apply_pair(&mut state, &bs, 0, 4);
    apply_pair(&mut state, &bs, 1, 5);
    apply_pair(&mut state, &bs, 2, 6);
    apply_pair(&mut state, &bs, 3, 7);

    // Arm 2: absorber, weak field, fixed phase plate.
    apply_pair(&mut state, &abs2, 6, 7);
    apply_pair(&mut state, &field2, 6, 7);
    apply_pair(&mut state, &ps2, 6, 7);

    // Arm 1: absorber, weak field, rotatable phase plate.
    apply_pair(&mut state, &abs1, 4, 5);
    apply_pair(&mut state, &field1, 4, 5);
    apply_pair(&mut state, &ps1, 4, 5);

    // Final splitter: arm 1 transmits into H, arm 2 transmits into O.
    apply_pair(&mut state, &bs, 4, 6);
    apply_pair(&mut state, &bs, 5, 7);

    // Postselecting spin turner ahead of the analyzer(s).
    match cfg.postselect {
        Postselect::None => {}
        Postselect::OOnly => apply_pair(&mut state, &st_beta, 6, 7),
        Postselect::HOnly => apply_pair(&mut state, &st_beta, 4, 5),
        Postselect::Both => {
            apply_pair(&mut state, &st_beta, 4, 5);
            apply_pair(&mut state, &st_beta, 6, 7);
        }
    }
    Ok(state)
}

/// Detection probabilities `(p_h, p_o)` read off a propagated state.
///
/// A beam with an analyzer counts only its spin-up component; a beam
/// without one counts both.
pub fn detection_probs<F: Scalar>(state: &StateVector8<F>, postselect: Postselect) -> (F, F) {
    let p = |i: usize| state[i].norm_sqr();
    match postselect {
        Postselect::None => (p(4) + p(5), p(6) + p(7)),
        Postselect::OOnly => (p(4) + p(5), p(6)),
        Postselect::HOnly => (p(4), p(6) + p(7)),
        Postselect::Both => (p(4), p(6)),
    }
}

/// Propagation plus detection in one call.
pub fn pipeline_probs<F: Scalar>(
    cfg: &InterferometerConfig<F>,
) -> Result<(F, F), OracleError> {
    let state = propagate(cfg)?;
    Ok(detection_probs(&state, cfg.postselect))
}

fn require_standard_prep<F: Scalar>(cfg: &InterferometerConfig<F>) -> Result<(), OracleError> {
    let tol = F::from_f64_lossy(1e-12);
    let half_pi = F::FRAC_PI_2();
    if (cfg.alpha - half_pi).abs() > tol {
        return Err(OracleError::SpinPrep { field: "alpha" });
    }
    if (cfg.beta - half_pi).abs() > tol {
        return Err(OracleError::SpinPrep { field: "beta" });
    }
    if cfg.mu1.abs() > tol {
        return Err(OracleError::SpinPrep { field: "mu1" });
    }
    if (cfg.mu2 - F::PI()).abs() > tol {
        return Err(OracleError::SpinPrep { field: "mu2" });
    }
    Ok(())
}

fn require_postselect<F: Scalar>(
    cfg: &InterferometerConfig<F>,
    accepted: &[Postselect],
    requirement: &'static str,
) -> Result<(), OracleError> {
    if accepted.contains(&cfg.postselect) {
        Ok(())
    } else {
        Err(OracleError::PostselectMismatch {
            requirement,
            got: cfg.postselect,
        })
    }
}

fn check_r<F: Scalar>(r: F) -> Result<(), OracleError> {
    if r <= F::zero() || r >= F::one() {
        Err(OracleError::BeamSplitterDomain(r.to_f64().unwrap_or(f64::NAN)))
    } else {
        Ok(())
    }
}

fn f_h<F: Scalar>(cfg: &InterferometerConfig<F>) -> F {
    let two = F::from_f64_lossy(2.0);
    let (r, t) = (cfg.r, F::one() - cfg.r);
    let cross = (cfg.t1 * cfg.t2).sqrt() * cfg.chi().sin() * ((cfg.theta1 - cfg.theta2) / two).sin();
    r * (t * t * cfg.t1 + r * r * cfg.t2 - two * r * t * cross)
}

fn f_o<F: Scalar>(cfg: &InterferometerConfig<F>) -> F {
    let two = F::from_f64_lossy(2.0);
    let (r, t) = (cfg.r, F::one() - cfg.r);
    let s1 = (cfg.theta1 / two).sin();
    let c2 = (cfg.theta2 / two).cos();
    let cross = (cfg.t1 * cfg.t2).sqrt() * cfg.chi().sin() * s1 * c2;
    r * r * t * (cfg.t1 * s1 * s1 + cfg.t2 * c2 * c2 + two * cross)
}

fn f_h_tilde<F: Scalar>(cfg: &InterferometerConfig<F>) -> F {
    let two = F::from_f64_lossy(2.0);
    let (r, t) = (cfg.r, F::one() - cfg.r);
    let s1 = (cfg.theta1 / two).sin();
    let c2 = (cfg.theta2 / two).cos();
    let cross = (cfg.t1 * cfg.t2).sqrt() * cfg.chi().sin() * s1 * c2;
    r * (t * t * cfg.t1 * s1 * s1 + r * r * cfg.t2 * c2 * c2 - two * r * t * cross)
}

fn f_o_tilde<F: Scalar>(cfg: &InterferometerConfig<F>) -> F {
    let two = F::from_f64_lossy(2.0);
    let (r, t) = (cfg.r, F::one() - cfg.r);
    let cross = (cfg.t1 * cfg.t2).sqrt() * cfg.chi().sin() * ((cfg.theta1 - cfg.theta2) / two).sin();
    r * r * t * (cfg.t1 + cfg.t2 + two * cross)
}

/// H-beam rate when the H beam carries no analyzer.
pub fn prob_h<F: Scalar>(cfg: &InterferometerConfig<F>) -> Result<F, OracleError> {
    check_r(cfg.r)?;
    require_standard_prep(cfg)?;
    require_postselect(
        cfg,
        &[Postselect::None, Postselect::OOnly],
        "no analyzer in H",
    )?;
    Ok(f_h(cfg))
}

/// O-beam rate behind the spin analyzer.
pub fn prob_o<F: Scalar>(cfg: &InterferometerConfig<F>) -> Result<F, OracleError> {
    check_r(cfg.r)?;
    require_standard_prep(cfg)?;
    require_postselect(
        cfg,
        &[Postselect::OOnly, Postselect::Both],
        "an analyzer in O",
    )?;
    Ok(f_o(cfg))
}

/// H-beam rate behind a spin analyzer (mirrored postselection).
pub fn prob_h_tilde<F: Scalar>(cfg: &InterferometerConfig<F>) -> Result<F, OracleError> {
    check_r(cfg.r)?;
    require_standard_prep(cfg)?;
    require_postselect(
        cfg,
        &[Postselect::HOnly, Postselect::Both],
        "an analyzer in H",
    )?;
    Ok(f_h_tilde(cfg))
}

/// O-beam rate when the O beam carries no analyzer.
pub fn prob_o_tilde<F: Scalar>(cfg: &InterferometerConfig<F>) -> Result<F, OracleError> {
    check_r(cfg.r)?;
    require_standard_prep(cfg)?;
    require_postselect(
        cfg,
        &[Postselect::None, Postselect::HOnly],
        "no analyzer in O",
    )?;
    Ok(f_o_tilde(cfg))
}

/// Closed-form `(p_h, p_o)` for any analyzer placement, standard spin
/// preparation assumed. Agrees with [`pipeline_probs`] to numerical
/// precision on the shared domain.
pub fn closed_form_probs<F: Scalar>(
    cfg: &InterferometerConfig<F>,
) -> Result<(F, F), OracleError> {
    check_r(cfg.r)?;
    require_standard_prep(cfg)?;
    Ok(match cfg.postselect {
        Postselect::None => (f_h(cfg), f_o_tilde(cfg)),
        Postselect::OOnly => (f_h(cfg), f_o(cfg)),
        Postselect::HOnly => (f_h_tilde(cfg), f_o_tilde(cfg)),
        Postselect::Both => (f_h_tilde(cfg), f_o(cfg)),
    })
}

/// Detection fractions `(p_h, p_o)` of the bare interferometer (no spin
/// optics, no absorbers, both detectors counting everything).
pub fn empty_probs<F: Scalar>(r: F, chi: F) -> Result<(F, F), OracleError> {
    check_r(r)?;
    let two = F::from_f64_lossy(2.0);
    let t = F::one() - r;
    let s = chi.sin();
    let p_h = r * (r * r + t * t - two * r * t * s);
    let p_o = two * t * r * r * (F::one() + s);
    Ok((p_h, p_o))
}

/// Ideal fringe visibilities `(v_h, v_o)` of the bare interferometer.
pub fn ideal_visibilities<F: Scalar>(r: F) -> Result<(F, F), OracleError> {
    check_r(r)?;
    let two = F::from_f64_lossy(2.0);
    let t = F::one() - r;
    Ok((two * r * t / (r * r + t * t), F::one()))
}
