//! Event-based simulation: one messenger at a time walks the instrument,
//! and beam splitters route it stochastically from an internal state that
//! adapts to the arrival history.
//!
//! No wavefunction spans the run. Each splitter keeps a two-slot occupation
//! estimate and the last spinor seen on each input port; interference
//! emerges because routing probabilities are built from the coherent mix of
//! those stored messages. The engine works in `f64` only: its contract is a
//! stochastic process with exact reproducibility, not a numeric kernel worth
//! abstracting over scalar types.

use crate::model::{Beam, ConfigError, InterferometerConfig, Path, Postselect, Spinor};
use crate::oracle::{component_matrix, ps1_zero_offset, Component, Mat2, OracleError};
use crate::{Complex, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

/// Identifier of the only random-number generator this build provides.
pub const RNG_ID: &str = "chacha12";

/// Messengers discarded before tallying starts, letting the splitter
/// occupation estimates settle.
pub const WARMUP_COUNT: u64 = 1000;

/// Errors from run-specification validation.
#[derive(Debug, Error, PartialEq)]
pub enum DesError {
    #[error("unknown rng id {0:?} (this build provides \"chacha12\")")]
    UnknownRng(String),
    #[error("memory coupling gamma = {0} outside [0, 1)")]
    GammaDomain(f64),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Everything that determines a run, including the exact random stream.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineRunSpec {
    pub config: InterferometerConfig<Real>,
    /// Memory coupling of the splitter occupation update; larger values
    /// average over longer arrival histories.
    pub gamma: Real,
    /// Number of tallied messengers.
    pub n: u64,
    pub seed: u64,
    /// Must equal [`RNG_ID`]; recorded so stored results stay attributable.
    pub rng_id: String,
    /// Emit (and discard) [`WARMUP_COUNT`] messengers before tallying.
    pub warmup: bool,
}

impl EngineRunSpec {
    pub fn new(config: InterferometerConfig<Real>, gamma: Real, n: u64, seed: u64) -> Self {
        Self {
            config,
            gamma,
            n,
            seed,
            rng_id: RNG_ID.to_string(),
            warmup: true,
        }
    }
}

/// Where every emitted messenger ended up.
///
/// `counts[beam][path]` uses [`Beam::index`] and [`Path::index`]; the
/// remaining fields are the loss channels. The identity
/// `emitted == detected + all losses` holds exactly for every run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub counts: [[u64; 2]; 2],
    /// Transmitted straight out at the interior splitter of path 1.
    pub exits_bs1: u64,
    /// Same for path 2.
    pub exits_bs2: u64,
    pub absorbed: u64,
    pub analyzer_rejected: u64,
    pub zeta_lost: u64,
    pub scatter_discarded: u64,
    pub emitted: u64,
}

impl Tally {
    /// Detected count in one beam, both paths.
    pub fn detected(&self, beam: Beam) -> u64 {
        self.counts[beam.index()].iter().sum()
    }

    pub fn total_detected(&self) -> u64 {
        self.detected(Beam::H) + self.detected(Beam::O)
    }

    /// Sum of every sink; equals `emitted` exactly.
    pub fn accounted(&self) -> u64 {
        self.total_detected()
            + self.exits_bs1
            + self.exits_bs2
            + self.absorbed
            + self.analyzer_rejected
            + self.zeta_lost
            + self.scatter_discarded
    }

    /// Detection rate per emitted messenger (0 when nothing was emitted).
    pub fn rate(&self, beam: Beam) -> f64 {
        if self.emitted == 0 {
            0.0
        } else {
            self.detected(beam) as f64 / self.emitted as f64
        }
    }

    /// Fraction of a beam's detections that took the given path
    /// (0 when the beam is empty).
    pub fn path_fraction(&self, beam: Beam, path: Path) -> f64 {
        let total = self.detected(beam);
        if total == 0 {
            0.0
        } else {
            self.counts[beam.index()][path.index()] as f64 / total as f64
        }
    }
}

impl core::ops::AddAssign for Tally {
    fn add_assign(&mut self, rhs: Self) {
        for (row, r) in self.counts.iter_mut().zip(rhs.counts) {
            for (c, v) in row.iter_mut().zip(r) {
                *c += v;
            }
        }
        self.exits_bs1 += rhs.exits_bs1;
        self.exits_bs2 += rhs.exits_bs2;
        self.absorbed += rhs.absorbed;
        self.analyzer_rejected += rhs.analyzer_rejected;
        self.zeta_lost += rhs.zeta_lost;
        self.scatter_discarded += rhs.scatter_discarded;
        self.emitted += rhs.emitted;
    }
}

fn apply2(m: &Mat2<Real>, s: &Spinor<Real>) -> Spinor<Real> {
    Spinor::new(
        m[0][0] * s.up + m[0][1] * s.down,
        m[1][0] * s.up + m[1][1] * s.down,
    )
}

/// Splitter unit with two input ports and two output channels.
///
/// State: `x`, an exponentially weighted occupation estimate per port, and
/// the last spinor seen on each port. A message updates both, then the unit
/// mixes the stored, occupation-weighted spinors like amplitudes
/// (transmission `√(1−R)`, reflection `i√R`) and routes the messenger to a
/// channel with probability proportional to that channel's squared norm.
struct AdaptiveSplitter {
    gamma: Real,
    t: Real,
    ir: Complex,
    x: [Real; 2],
    stored: [Spinor<Real>; 2],
}

impl AdaptiveSplitter {
    fn new(r: Real, gamma: Real) -> Self {
        Self {
            gamma,
            t: (1.0 - r).sqrt(),
            ir: Complex::new(0.0, r.sqrt()),
            x: [0.5, 0.5],
            stored: [Spinor::plus_z(), Spinor::plus_z()],
        }
    }

    fn process(
        &mut self,
        port: usize,
        spinor: Spinor<Real>,
        rng: &mut ChaCha12Rng,
    ) -> (usize, Spinor<Real>) {
        for (i, x) in self.x.iter_mut().enumerate() {
            *x = self.gamma * *x + if i == port { 1.0 - self.gamma } else { 0.0 };
        }
        self.stored[port] = spinor;
        let v0 = self.stored[0].scaled(Complex::new(self.x[0].sqrt(), 0.0));
        let v1 = self.stored[1].scaled(Complex::new(self.x[1].sqrt(), 0.0));
        let t = Complex::new(self.t, 0.0);
        let ch0 = Spinor::new(t * v0.up + self.ir * v1.up, t * v0.down + self.ir * v1.down);
        let ch1 = Spinor::new(self.ir * v0.up + t * v1.up, self.ir * v0.down + t * v1.down);
        let (w0, w1) = (ch0.norm_sqr(), ch1.norm_sqr());
        let total = w0 + w1;
        if total < 1e-30 {
            // Unreachable while x stays normalized and stored spinors are
            // unit length; kept as a guard so a corrupt state cannot panic.
            let channel = usize::from(rng.gen::<f64>() >= 0.5);
            return (channel, spinor);
        }
        if rng.gen::<f64>() < w0 / total {
            (0, ch0.normalized())
        } else {
            (1, ch1.normalized())
        }
    }
}

struct Engine {
    config: InterferometerConfig<Real>,
    st_alpha: Mat2<Real>,
    st_beta: Mat2<Real>,
    sr_mu1: Mat2<Real>,
    sr_mu2: Mat2<Real>,
    field1: Mat2<Real>,
    field2: Mat2<Real>,
    phase1: Complex,
    phase2: Complex,
    bs0: AdaptiveSplitter,
    bs1: AdaptiveSplitter,
    bs2: AdaptiveSplitter,
    bs3: AdaptiveSplitter,
}

impl Engine {
    fn new(config: &InterferometerConfig<Real>, gamma: Real) -> Result<Self, DesError> {
        Ok(Self {
            config: *config,
            st_alpha: component_matrix(Component::SpinTurner(config.alpha))?,
            st_beta: component_matrix(Component::SpinTurner(config.beta))?,
            sr_mu1: component_matrix(Component::SpinRotator(config.mu1))?,
            sr_mu2: component_matrix(Component::SpinRotator(config.mu2))?,
            field1: component_matrix(Component::SpinRotator(config.theta1))?,
            field2: component_matrix(Component::SpinRotator(config.theta2))?,
            phase1: Complex::new(0.0, config.phi1 - ps1_zero_offset::<Real>()).exp(),
            phase2: Complex::new(0.0, config.phi2).exp(),
            bs0: AdaptiveSplitter::new(config.r, gamma),
            bs1: AdaptiveSplitter::new(config.r, gamma),
            bs2: AdaptiveSplitter::new(config.r, gamma),
            bs3: AdaptiveSplitter::new(config.r, gamma),
        })
    }

    fn emit(&mut self, tally: &mut Tally, rng: &mut ChaCha12Rng) {
        tally.emitted += 1;
        let mut spin = apply2(&self.st_alpha, &Spinor::plus_z());

        // First splitter: transmission continues in path 1.
        let (channel, out) = self.bs0.process(0, spin, rng);
        let path = if channel == 0 { Path::One } else { Path::Two };
        spin = out;

        spin = apply2(
            match path {
                Path::One => &self.sr_mu1,
                Path::Two => &self.sr_mu2,
            },
            &spin,
        );

        // Interior splitter: transmission leaves the instrument, reflection
        // enters the arm toward the recombiner.
        let (channel, out) = match path {
            Path::One => self.bs1.process(0, spin, rng),
            Path::Two => self.bs2.process(0, spin, rng),
        };
        if channel == 0 {
            match path {
                Path::One => tally.exits_bs1 += 1,
                Path::Two => tally.exits_bs2 += 1,
            }
            return;
        }
        spin = out;

        let (transmissivity, pscatt, field, phase) = match path {
            Path::One => (self.config.t1, self.config.pscatt1, &self.field1, self.phase1),
            Path::Two => (self.config.t2, self.config.pscatt2, &self.field2, self.phase2),
        };

        let mut traversed_absorber = false;
        if transmissivity < 1.0 {
            if rng.gen::<f64>() >= transmissivity {
                tally.absorbed += 1;
                return;
            }
            traversed_absorber = true;
        }

        spin = apply2(field, &spin);
        spin = spin.scaled(phase);

        // Recombiner: arm 1 feeds port 0; channel 0 is the H exit, so each
        // arm transmits into "its" beam and reflects into the other.
        let (channel, out) = self.bs3.process(path.index(), spin, rng);
        let beam = if channel == 0 { Beam::H } else { Beam::O };
        spin = out;

        // A messenger that crossed an absorber and then left through the
        // reflected exit may have been deflected as well; it misses the
        // detector with the configured scattering probability.
        let reflected = matches!(
            (path, beam),
            (Path::One, Beam::O) | (Path::Two, Beam::H)
        );
        if traversed_absorber && reflected && pscatt > 0.0 && rng.gen::<f64>() < pscatt {
            tally.scatter_discarded += 1;
            return;
        }

        let analyzed = matches!(
            (self.config.postselect, beam),
            (Postselect::OOnly, Beam::O)
                | (Postselect::HOnly, Beam::H)
                | (Postselect::Both, _)
        );
        if analyzed {
            spin = apply2(&self.st_beta, &spin);
            // The O-side analyzer chain carries the extra transport loss.
            if beam == Beam::O && self.config.zeta > 0.0 && rng.gen::<f64>() < self.config.zeta {
                tally.zeta_lost += 1;
                return;
            }
            let p_up = spin.up.norm_sqr() / spin.norm_sqr();
            if rng.gen::<f64>() >= p_up {
                tally.analyzer_rejected += 1;
                return;
            }
        }
        tally.counts[beam.index()][path.index()] += 1;
    }
}

/// Runs the event-based simulation described by `spec`.
pub fn run(spec: &EngineRunSpec) -> Result<Tally, DesError> {
    if spec.rng_id != RNG_ID {
        return Err(DesError::UnknownRng(spec.rng_id.clone()));
    }
    if !(0.0..1.0).contains(&spec.gamma) {
        return Err(DesError::GammaDomain(spec.gamma));
    }
    spec.config.validate()?;
    let mut engine = Engine::new(&spec.config, spec.gamma)?;
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    if spec.warmup {
        let mut scratch = Tally::default();
        for _ in 0..WARMUP_COUNT {
            engine.emit(&mut scratch, &mut rng);
        }
    }
    let mut tally = Tally::default();
    for _ in 0..spec.n {
        engine.emit(&mut tally, &mut rng);
    }
    Ok(tally)
}
