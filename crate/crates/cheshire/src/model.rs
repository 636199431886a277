//! Shared domain types: spinors, the 8-component state vector, instrument
//! configuration and scenario presets.

use crate::{cplx, cre, CScalar, Scalar};
use thiserror::Error;

/// Errors from spinor conversions.
#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    /// The spinor norm deviates from 1 beyond the accepted tolerance.
    #[error("invalid spinor: norm deviates from 1 by {deviation:e}")]
    InvalidSpinor { deviation: f64 },
}

/// Errors from configuration construction and validation.
#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    /// The same knob was overridden twice in a combined scenario.
    #[error("contradictory overrides: {field} set twice")]
    DuplicateOverride { field: &'static str },
    /// A parameter fell outside its legal range.
    #[error("{field} = {value} outside legal range {range}")]
    OutOfRange {
        field: &'static str,
        value: f64,
        range: &'static str,
    },
    /// A scenario name was not recognized.
    #[error("unknown scenario name {0:?}")]
    UnknownScenario(String),
}

/// Two-component spin state carried by a messenger or a state-vector pair.
///
/// The global phase is retained on purpose: the event engine's adaptive
/// beam-splitter rule interferes stored messages, so relative phases between
/// different messengers matter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor<F: Scalar> {
    /// Amplitude of the spin-up component (quantization axis z).
    pub up: CScalar<F>,
    /// Amplitude of the spin-down component.
    pub down: CScalar<F>,
}

impl<F: Scalar> Spinor<F> {
    pub fn new(up: CScalar<F>, down: CScalar<F>) -> Self {
        Self { up, down }
    }

    /// Spin-up basis state (+z).
    pub fn plus_z() -> Self {
        Self::new(cre(F::one()), cre(F::zero()))
    }

    pub fn norm_sqr(&self) -> F {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> CScalar<F> {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    pub fn scaled(&self, k: CScalar<F>) -> Self {
        Self::new(self.up * k, self.down * k)
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self::new(self.up / n, self.down / n)
    }
}

/// Spinor for polar angle `theta` and azimuth `phi` on the Bloch sphere:
/// `(cos(θ/2), e^{iφ} sin(θ/2))`.
pub fn spinor_from_bloch<F: Scalar>(theta: F, phi: F) -> Spinor<F> {
    let half = theta / F::from_f64_lossy(2.0);
    let azim = cplx(F::zero(), phi).exp();
    Spinor::new(cre(half.cos()), azim * cre(half.sin()))
}

/// Inverse of [`spinor_from_bloch`] up to a global phase.
///
/// Returns `(theta, phi, global_phase)` with `theta ∈ [0, π]` and
/// `phi ∈ [−π, π)` such that `e^{i·global_phase} · spinor_from_bloch(theta,
/// phi)` reconstructs the input. At the poles the azimuth is undetermined
/// and reported as 0. The norm must be within `1e-9` of 1 (or 100 machine
/// epsilons for scalars coarser than that).
pub fn bloch_from_spinor<F: Scalar>(s: &Spinor<F>) -> Result<(F, F, F), ModelError> {
    let tol = F::from_f64_lossy(1e-9).max(F::epsilon() * F::from_f64_lossy(100.0));
    let deviation = (s.norm_sqr().sqrt() - F::one()).abs();
    if deviation > tol {
        return Err(ModelError::InvalidSpinor {
            deviation: deviation.to_f64().unwrap_or(f64::NAN),
        });
    }
    let (au, ad) = (s.up.norm(), s.down.norm());
    let theta = F::from_f64_lossy(2.0) * ad.atan2(au);
    if ad == F::zero() {
        return Ok((F::zero(), F::zero(), s.up.arg()));
    }
    if au == F::zero() {
        return Ok((F::PI(), F::zero(), s.down.arg()));
    }
    let global = s.up.arg();
    let phi = wrap_phase(s.down.arg() - global);
    Ok((theta, phi, global))
}

/// Wraps an angle into `[−π, π)`.
pub(crate) fn wrap_phase<F: Scalar>(x: F) -> F {
    let tau = F::from_f64_lossy(2.0) * F::PI();
    let shifted = x + F::PI();
    let wrapped = shifted - tau * (shifted / tau).floor();
    wrapped - F::PI()
}

/// The 8-component state vector of the interferometer.
///
/// Components are stored zero-based and paired as (spin up, spin down):
///
/// * `(0, 1)`: spin up/down in path 1 (before the interior splitters),
/// * `(2, 3)`: spin up/down in path 2,
/// * `(4, 5)`: spin up/down in interior arm 1 (H beam after recombination),
/// * `(6, 7)`: spin up/down in interior arm 2 (O beam after recombination).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector8<F: Scalar>(pub [CScalar<F>; 8]);

impl<F: Scalar> StateVector8<F> {
    pub fn zero() -> Self {
        Self([cre(F::zero()); 8])
    }

    /// Basis vector with a 1 at `index`.
    pub fn basis(index: usize) -> Self {
        let mut v = Self::zero();
        v.0[index] = cre(F::one());
        v
    }

    /// The experiment's initial state: spin fully polarized along +z,
    /// entering in path 1.
    pub fn initial() -> Self {
        Self::basis(0)
    }

    pub fn norm_sqr(&self) -> F {
        self.0.iter().map(|a| a.norm_sqr()).fold(F::zero(), |s, x| s + x)
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> CScalar<F> {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .fold(cre(F::zero()), |s, x| s + x)
    }

    pub fn is_normalized(&self, tol: F) -> bool {
        (self.norm_sqr() - F::one()).abs() <= tol
    }
}

impl<F: Scalar> core::ops::Index<usize> for StateVector8<F> {
    type Output = CScalar<F>;
    fn index(&self, i: usize) -> &Self::Output {
        &self.0[i]
    }
}

/// Interferometer path between the first splitter and recombination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Path {
    One,
    Two,
}

impl Path {
    /// Zero-based index, handy for tallies.
    pub fn index(self) -> usize {
        match self {
            Path::One => 0,
            Path::Two => 1,
        }
    }
}

impl core::fmt::Display for Path {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Path::One => "1",
            Path::Two => "2",
        })
    }
}

/// Detector beam after the final splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Beam {
    H,
    O,
}

impl Beam {
    /// Zero-based index, handy for tallies.
    pub fn index(self) -> usize {
        match self {
            Beam::H => 0,
            Beam::O => 1,
        }
    }
}

impl core::fmt::Display for Beam {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Beam::H => "H",
            Beam::O => "O",
        })
    }
}

impl core::str::FromStr for Beam {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "h" => Ok(Beam::H),
            "o" => Ok(Beam::O),
            other => Err(format!("unknown beam {other:?} (expected H or O)")),
        }
    }
}

/// Which beams carry the spin turner + analyzer postselection stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Postselect {
    /// No postselection; both detectors count every arrival.
    None,
    /// Analyzer chain in the O beam only (the experiment's configuration).
    OOnly,
    /// Analyzer chain in the H beam only.
    HOnly,
    /// Analyzer chains in both beams.
    Both,
}

impl core::fmt::Display for Postselect {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Postselect::None => "none",
            Postselect::OOnly => "o-only",
            Postselect::HOnly => "h-only",
            Postselect::Both => "both",
        })
    }
}

impl core::str::FromStr for Postselect {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Postselect::None),
            "o-only" | "o" => Ok(Postselect::OOnly),
            "h-only" | "h" => Ok(Postselect::HOnly),
            "both" => Ok(Postselect::Both),
            other => Err(format!(
                "unknown postselection {other:?} (expected none, o-only, h-only or both)"
            )),
        }
    }
}

/// Every physical knob of the instrument.
///
/// Angles are radians; degrees exist only at CLI and file boundaries.
/// `chi` is always derived as `phi1 − phi2`, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig<F: Scalar> {
    /// Initial spin-turner angle about y (preparation).
    pub alpha: F,
    /// Final spin-turner angle about y (postselection).
    pub beta: F,
    /// Path-1 spin-rotator angle about z.
    pub mu1: F,
    /// Path-2 spin-rotator angle about z.
    pub mu2: F,
    /// Weak magnetic-field rotation in arm 1.
    pub theta1: F,
    /// Weak magnetic-field rotation in arm 2.
    pub theta2: F,
    /// Absorber transmissivity in arm 1.
    pub t1: F,
    /// Absorber transmissivity in arm 2.
    pub t2: F,
    /// Phase shift applied in arm 1.
    pub phi1: F,
    /// Phase shift applied in arm 2.
    pub phi2: F,
    /// Beam-splitter reflectivity, identical for all four splitters.
    pub r: F,
    /// Loss fraction of the O-beam analyzer chain.
    pub zeta: F,
    /// Scattering discard probability for absorber-traversing path-1
    /// messengers reflected at the final splitter.
    pub pscatt1: F,
    /// Same for path 2.
    pub pscatt2: F,
    /// Postselection mode.
    pub postselect: Postselect,
}

impl<F: Scalar> InterferometerConfig<F> {
    /// Relative phase `phi1 − phi2` scanned to record fringes.
    pub fn chi(&self) -> F {
        self.phi1 - self.phi2
    }

    /// Checks every parameter range.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let unit = |field: &'static str, v: F| -> Result<(), ConfigError> {
            if v < F::zero() || v > F::one() {
                Err(ConfigError::OutOfRange {
                    field,
                    value: v.to_f64().unwrap_or(f64::NAN),
                    range: "[0, 1]",
                })
            } else {
                Ok(())
            }
        };
        unit("t1", self.t1)?;
        unit("t2", self.t2)?;
        unit("zeta", self.zeta)?;
        unit("pscatt1", self.pscatt1)?;
        unit("pscatt2", self.pscatt2)?;
        if self.r <= F::zero() || self.r >= F::one() {
            return Err(ConfigError::OutOfRange {
                field: "r",
                value: self.r.to_f64().unwrap_or(f64::NAN),
                range: "(0, 1)",
            });
        }
        Ok(())
    }
}

/// One overridden knob inside a combined scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Override<F: Scalar> {
    Alpha(F),
    Beta(F),
    Mu1(F),
    Mu2(F),
    Theta1(F),
    Theta2(F),
    T1(F),
    T2(F),
    Phi1(F),
    Phi2(F),
    R(F),
    Zeta(F),
    Pscatt1(F),
    Pscatt2(F),
    Postselect(Postselect),
}

impl<F: Scalar> Override<F> {
    fn field(&self) -> &'static str {
        match self {
            Override::Alpha(_) => "alpha",
            Override::Beta(_) => "beta",
            Override::Mu1(_) => "mu1",
            Override::Mu2(_) => "mu2",
            Override::Theta1(_) => "theta1",
            Override::Theta2(_) => "theta2",
            Override::T1(_) => "t1",
            Override::T2(_) => "t2",
            Override::Phi1(_) => "phi1",
            Override::Phi2(_) => "phi2",
            Override::R(_) => "r",
            Override::Zeta(_) => "zeta",
            Override::Pscatt1(_) => "pscatt1",
            Override::Pscatt2(_) => "pscatt2",
            Override::Postselect(_) => "postselect",
        }
    }

    fn apply(&self, cfg: &mut InterferometerConfig<F>) {
        match *self {
            Override::Alpha(v) => cfg.alpha = v,
            Override::Beta(v) => cfg.beta = v,
            Override::Mu1(v) => cfg.mu1 = v,
            Override::Mu2(v) => cfg.mu2 = v,
            Override::Theta1(v) => cfg.theta1 = v,
            Override::Theta2(v) => cfg.theta2 = v,
            Override::T1(v) => cfg.t1 = v,
            Override::T2(v) => cfg.t2 = v,
            Override::Phi1(v) => cfg.phi1 = v,
            Override::Phi2(v) => cfg.phi2 = v,
            Override::R(v) => cfg.r = v,
            Override::Zeta(v) => cfg.zeta = v,
            Override::Pscatt1(v) => cfg.pscatt1 = v,
            Override::Pscatt2(v) => cfg.pscatt2 = v,
            Override::Postselect(v) => cfg.postselect = v,
        }
    }
}

/// Canonical measurement scenarios.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario<F: Scalar> {
    /// Bare interferometer: no spin turners, rotators, absorbers or
    /// analyzer; both detectors count everything.
    Empty,
    /// Reference: spin preparation on, no absorbers, no weak fields.
    Reference,
    /// Absorber with T = 0.79 in path 1.
    Abs1,
    /// Absorber with T = 0.79 in path 2.
    Abs2,
    /// Weak 20° field in arm 1.
    Mag1,
    /// Weak 20° field in arm 2.
    Mag2,
    /// Reference plus an arbitrary set of overrides.
    Combined(Vec<Override<F>>),
}

impl<F: Scalar> Scenario<F> {
    /// Short name used in file metadata and CLI arguments.
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Empty => "empty",
            Scenario::Reference => "ref",
            Scenario::Abs1 => "abs1",
            Scenario::Abs2 => "abs2",
            Scenario::Mag1 => "mag1",
            Scenario::Mag2 => "mag2",
            Scenario::Combined(_) => "combined",
        }
    }

    /// The six preset scenarios, in conventional order.
    pub fn presets() -> [Scenario<F>; 6] {
        [
            Scenario::Empty,
            Scenario::Reference,
            Scenario::Abs1,
            Scenario::Abs2,
            Scenario::Mag1,
            Scenario::Mag2,
        ]
    }
}

impl<F: Scalar> core::fmt::Display for Scenario<F> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl<F: Scalar> core::str::FromStr for Scenario<F> {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "empty" => Ok(Scenario::Empty),
            "ref" => Ok(Scenario::Reference),
            "abs1" => Ok(Scenario::Abs1),
            "abs2" => Ok(Scenario::Abs2),
            "mag1" => Ok(Scenario::Mag1),
            "mag2" => Ok(Scenario::Mag2),
            other => Err(ConfigError::UnknownScenario(other.to_string())),
        }
    }
}

/// Default beam-splitter reflectivity of the instrument.
pub fn default_reflectivity<F: Scalar>() -> F {
    F::from_f64_lossy(0.22)
}

/// Absorber transmissivity used by the ABS scenarios.
pub fn weak_absorber_transmissivity<F: Scalar>() -> F {
    F::from_f64_lossy(0.79)
}

/// Weak-field rotation angle used by the MAG scenarios (20°).
pub fn weak_field_angle<F: Scalar>() -> F {
    F::PI() / F::from_f64_lossy(9.0)
}

/// Builds the full configuration for a scenario at relative phase `chi`.
///
/// Baseline values: spin turners at π/2, rotators at (0, π) so the two
/// paths carry orthogonal +x/−x spins, no absorbers, no weak fields,
/// R = 0.22, ζ = 0, no scattering, O-beam postselection, `phi2 = 0` and
/// `phi1 = chi`.
pub fn scenario_config<F: Scalar>(
    scenario: &Scenario<F>,
    chi: F,
) -> Result<InterferometerConfig<F>, ConfigError> {
    let half_pi = F::FRAC_PI_2();
    let mut cfg = InterferometerConfig {
        alpha: half_pi,
        beta: half_pi,
        mu1: F::zero(),
        mu2: F::PI(),
        theta1: F::zero(),
        theta2: F::zero(),
        t1: F::one(),
        t2: F::one(),
        phi1: chi,
        phi2: F::zero(),
        r: default_reflectivity(),
        zeta: F::zero(),
        pscatt1: F::zero(),
        pscatt2: F::zero(),
        postselect: Postselect::OOnly,
    };
    match scenario {
        Scenario::Reference => {}
        Scenario::Empty => {
            cfg.alpha = F::zero();
            cfg.beta = F::zero();
            cfg.mu1 = F::zero();
            cfg.mu2 = F::zero();
            cfg.postselect = Postselect::None;
        }
        Scenario::Abs1 => cfg.t1 = weak_absorber_transmissivity(),
        Scenario::Abs2 => cfg.t2 = weak_absorber_transmissivity(),
        Scenario::Mag1 => cfg.theta1 = weak_field_angle(),
        Scenario::Mag2 => cfg.theta2 = weak_field_angle(),
        Scenario::Combined(overrides) => {
            let mut seen: Vec<&'static str> = Vec::new();
            for o in overrides {
                if seen.contains(&o.field()) {
                    return Err(ConfigError::DuplicateOverride { field: o.field() });
                }
                seen.push(o.field());
                o.apply(&mut cfg);
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    type S = Spinor<f64>;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn bloch_poles_and_axes() {
        let s = spinor_from_bloch(0.0, 1.2345);
        assert_close(s.up.re, 1.0, 1e-15);
        assert_close(s.up.im, 0.0, 1e-15);
        assert_close(s.down.norm(), 0.0, 1e-15);

        // +x and −x states.
        let px = spinor_from_bloch(std::f64::consts::FRAC_PI_2, 0.0);
        let inv = 1.0 / 2.0f64.sqrt();
        assert_close(px.up.re, inv, 1e-15);
        assert_close(px.down.re, inv, 1e-15);
        assert_close(px.down.im, 0.0, 1e-15);
        let mx = spinor_from_bloch(std::f64::consts::FRAC_PI_2, std::f64::consts::PI);
        assert_close(mx.up.re, inv, 1e-15);
        assert_close(mx.down.re, -inv, 1e-12);
    }

    #[test]
    fn bloch_inverse_examples() {
        let (t, p, g) = bloch_from_spinor(&S::plus_z()).unwrap();
        assert_eq!((t, p, g), (0.0, 0.0, 0.0));

        let inv = 1.0 / 2.0f64.sqrt();
        let px = S::new(crate::Complex::new(inv, 0.0), crate::Complex::new(inv, 0.0));
        let (t, p, g) = bloch_from_spinor(&px).unwrap();
        assert_close(t, std::f64::consts::FRAC_PI_2, 1e-12);
        assert_close(p, 0.0, 1e-12);
        assert_close(g, 0.0, 1e-12);

        // Equal components (1+i)/2 factor as a global phase of π/4.
        let s = S::new(crate::Complex::new(0.5, 0.5), crate::Complex::new(0.5, 0.5));
        let (t, p, g) = bloch_from_spinor(&s).unwrap();
        assert_close(t, std::f64::consts::FRAC_PI_2, 1e-12);
        assert_close(p, 0.0, 1e-12);
        assert_close(g, std::f64::consts::FRAC_PI_4, 1e-12);
    }

    #[test]
    fn bloch_rejects_bad_norm() {
        let s = S::new(crate::Complex::new(1.0, 0.0), crate::Complex::new(0.1, 0.0));
        assert!(matches!(
            bloch_from_spinor(&s),
            Err(ModelError::InvalidSpinor { .. })
        ));
    }

    #[test]
    fn bloch_round_trip_random() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let theta: f64 = rng.gen::<f64>() * std::f64::consts::PI;
            let phi = (rng.gen::<f64>() - 0.5) * 2.0 * std::f64::consts::PI;
            let g = (rng.gen::<f64>() - 0.5) * 2.0 * std::f64::consts::PI;
            let s = spinor_from_bloch(theta, phi).scaled(crate::cplx(0.0, g).exp());
            let (t2, p2, g2) = bloch_from_spinor(&s).unwrap();
            let back = spinor_from_bloch(t2, p2).scaled(crate::cplx(0.0, g2).exp());
            assert!((back.up - s.up).norm() <= 1e-10, "up mismatch");
            assert!((back.down - s.down).norm() <= 1e-10, "down mismatch");
        }
    }

    #[test]
    fn state_vector_basics() {
        let v = StateVector8::<f64>::initial();
        assert_eq!(v[0].re, 1.0);
        assert_close(v.norm_sqr(), 1.0, 1e-15);
        assert!(v.is_normalized(1e-12));
        let w = StateVector8::<f64>::basis(5);
        assert_eq!(v.inner(&w).norm(), 0.0);
    }

    #[test]
    fn scenario_presets_validate() {
        for s in Scenario::<f64>::presets() {
            let cfg = scenario_config(&s, 0.3).unwrap();
            cfg.validate().unwrap();
            assert_close(cfg.chi(), 0.3, 1e-15);
        }
    }

    #[test]
    fn scenario_reference_matches_contract() {
        let cfg = scenario_config(&Scenario::<f64>::Reference, 0.0).unwrap();
        assert_eq!(cfg.mu1, 0.0);
        assert_eq!(cfg.mu2, std::f64::consts::PI);
        assert_eq!((cfg.t1, cfg.t2), (1.0, 1.0));
        assert_eq!((cfg.theta1, cfg.theta2), (0.0, 0.0));
        assert_eq!(cfg.postselect, Postselect::OOnly);
        assert_eq!(cfg.r, 0.22);
        assert_eq!(cfg.zeta, 0.0);
    }

    #[test]
    fn scenario_abs2_and_empty() {
        let cfg = scenario_config(&Scenario::<f64>::Abs2, std::f64::consts::FRAC_PI_2).unwrap();
        assert_eq!(cfg.t2, 0.79);
        assert_eq!(cfg.t1, 1.0);

        let cfg = scenario_config(&Scenario::<f64>::Empty, 0.0).unwrap();
        assert_eq!(cfg.alpha, 0.0);
        assert_eq!(cfg.beta, 0.0);
        assert_eq!(cfg.mu1, 0.0);
        assert_eq!(cfg.mu2, 0.0);
        assert_eq!(cfg.postselect, Postselect::None);
    }

    #[test]
    fn duplicate_override_rejected() {
        let s = Scenario::Combined(vec![Override::T1(0.5), Override::T1(0.7)]);
        assert_eq!(
            scenario_config(&s, 0.0),
            Err(ConfigError::DuplicateOverride { field: "t1" })
        );
    }

    #[test]
    fn out_of_range_rejected() {
        let s = Scenario::Combined(vec![Override::T1(1.5)]);
        assert!(matches!(
            scenario_config(&s, 0.0),
            Err(ConfigError::OutOfRange { field: "t1", .. })
        ));
        let s = Scenario::Combined(vec![Override::R(1.0)]);
        assert!(matches!(
            scenario_config(&s, 0.0),
            Err(ConfigError::OutOfRange { field: "r", .. })
        ));
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::<f64>::presets() {
            let parsed: Scenario<f64> = s.name().parse().unwrap();
            assert_eq!(parsed, s);
        }
        assert!("bogus".parse::<Scenario<f64>>().is_err());
    }
}
