// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Measurement-conditioned time stepping.
//!
//! A measurement trajectory is represented by `n_w` pure-state walkers that
//! share every detector outcome but see independent bath noise. The ensemble
//! average of the walkers approximates the mixed state evolved by the
//! stochastic master equation, which is also integrated directly here as an
//! oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::diagnostics::{self, StepRecord, TrajectoryRecord};
use crate::linalg::{LinalgError, Operator, StateVector, C64};
use crate::model::{Model, ModelError, Outcome, SteeringChoice};
use crate::steering::{DecisionMode, GainEvaluator, Protocol, SteeringError};

/// `<c^dagger c>` below this value cannot carry a detector click.
pub const NULL_CHANNEL_TOL: f64 = 1e-14;
/// Most negative eigenvalue tolerated by [`sme_integrate`].
pub const SME_POSITIVITY_TOL: f64 = -1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("detector click drawn from a null channel (<c^dagger c> = {0:e})")]
    NullChannel(f64),
    #[error("density matrix lost positivity (min eigenvalue {0:e}); time step too large")]
    Positivity(f64),
    #[error("walker ensemble must hold at least one walker")]
    EmptyEnsemble,
    #[error("expected {expected} bath draws, got {got}")]
    BathDraws { expected: usize, got: usize },
    #[error("fixed {what} sequence has {got} entries, need {need}")]
    SequenceTooShort {
        what: &'static str,
        got: usize,
        need: usize,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Steering(#[from] SteeringError),
}

/// Normalization of the deterministic bath drift in the stochastic
/// Schrödinger equation.
///
/// `Unraveling` uses `(dt / 2) (2 <c^dagger> c - c^dagger c - |<c>|^2)`, whose
/// noise average reproduces the Lindblad dissipator. `Doubled` drops the
/// factor 1/2; its ensemble average carries an extra state-dependent drift
/// and is kept only for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BathDrift {
    #[default]
    Unraveling,
    Doubled,
}

impl BathDrift {
    fn factor(self) -> f64 {
        match self {
            BathDrift::Unraveling => 0.5,
            BathDrift::Doubled => 1.0,
        }
    }
}

/// Operators and random numbers driving one walker through one step.
#[derive(Debug, Clone, Copy)]
pub struct StepInputs<'a> {
    pub h0: &'a Operator,
    /// Outcome-selected measurement jump operator and its `c^dagger c`.
    pub c_meas: &'a Operator,
    pub c_meas_gram: &'a Operator,
    pub c_errors: &'a [Operator],
    pub c_error_grams: &'a [Operator],
    pub xi: u8,
    /// One standard normal per error channel.
    pub bath_draws: &'a [f64],
    pub drift: BathDrift,
}

/// One first-order stochastic Schrödinger step followed by renormalization.
pub fn sse_step(
    psi: &StateVector,
    input: &StepInputs<'_>,
    dt: f64,
) -> Result<StateVector, DynamicsError> {
    if input.bath_draws.len() != input.c_errors.len() {
        return Err(DynamicsError::BathDraws {
            expected: input.c_errors.len(),
            got: input.bath_draws.len(),
        });
    }
    let mut next = *psi;

    let h_psi = input.h0.apply(psi);
    next.axpy(C64::new(0.0, -dt), &h_psi);

    let gram_psi = input.c_meas_gram.apply(psi);
    let gram_mean = psi.inner(&gram_psi).re;
    next.axpy(C64::new(-0.5 * dt, 0.0), &gram_psi);
    next.axpy(C64::new(0.5 * dt * gram_mean, 0.0), psi);

    if input.xi == 1 {
        if gram_mean < NULL_CHANNEL_TOL {
            return Err(DynamicsError::NullChannel(gram_mean));
        }
        let c_psi = input.c_meas.apply(psi);
        next.axpy(C64::new(1.0 / gram_mean.sqrt(), 0.0), &c_psi);
        next.axpy(C64::new(-1.0, 0.0), psi);
    }

    let k = input.drift.factor() * dt;
    let sqrt_dt = dt.sqrt();
    for ((c, gram), &x) in input
        .c_errors
        .iter()
        .zip(input.c_error_grams)
        .zip(input.bath_draws)
    {
        let c_psi = c.apply(psi);
        let mean = psi.inner(&c_psi);
        let gram_psi = gram.apply(psi);
        // dt-drift: 2 <c^dagger> c - c^dagger c - <c^dagger><c>
        next.axpy(C64::new(2.0 * k, 0.0) * mean.conj(), &c_psi);
        next.axpy(C64::new(-k, 0.0), &gram_psi);
        next.axpy(C64::new(-k * mean.norm_sqr(), 0.0), psi);
        // noise: sqrt(dt) x (c - <c>)
        next.axpy(C64::new(sqrt_dt * x, 0.0), &c_psi);
        next.axpy(-mean * (sqrt_dt * x), psi);
    }

    next.normalize()?;
    Ok(next)
}

/// Pure-state walkers sharing one measurement record.
#[derive(Debug, Clone)]
pub struct WalkerEnsemble {
    walkers: Vec<StateVector>,
}

impl WalkerEnsemble {
    pub fn new(initial: StateVector, n_walkers: usize) -> Result<Self, DynamicsError> {
        if n_walkers == 0 {
            return Err(DynamicsError::EmptyEnsemble);
        }
        let initial = initial.normalized()?;
        Ok(Self {
            walkers: vec![initial; n_walkers],
        })
    }

    pub fn from_walkers(walkers: Vec<StateVector>) -> Result<Self, DynamicsError> {
        if walkers.is_empty() {
            return Err(DynamicsError::EmptyEnsemble);
        }
        Ok(Self { walkers })
    }

    pub fn len(&self) -> usize {
        self.walkers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walkers.is_empty()
    }

    pub fn walkers(&self) -> &[StateVector] {
        &self.walkers
    }

    pub fn walkers_mut(&mut self) -> &mut [StateVector] {
        &mut self.walkers
    }

    /// `(1 / n_w) sum |psi><psi|`
    pub fn mean_density(&self) -> Operator {
        let dim = self.walkers[0].dim();
        let mut acc = Operator::zeros(dim).unwrap();
        for psi in &self.walkers {
            acc += psi.projector();
        }
        acc.scale_re(1.0 / self.walkers.len() as f64)
    }
}

/// Seeds for the independent random streams of a run.
///
/// Streams are keyed by `(master_seed, trajectory, walker, kind)`, and each
/// walker's bath stream is consumed in `(step, channel)` order, so the draws
/// a walker sees never depend on how trajectories or walkers are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngPolicy {
    pub master_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
enum StreamKind {
    Outcome = 1,
    Bath = 2,
    Policy = 3,
}

impl RngPolicy {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    fn stream(&self, trajectory: u64, walker: u64, kind: StreamKind) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        seed[8..16].copy_from_slice(&trajectory.to_le_bytes());
        seed[16..24].copy_from_slice(&walker.to_le_bytes());
        seed[24..].copy_from_slice(&(kind as u64).to_le_bytes());
        ChaCha8Rng::from_seed(seed)
    }

    /// Uniform draws that select detector outcomes.
    pub fn outcome_stream(&self, trajectory: u64) -> ChaCha8Rng {
        self.stream(trajectory, 0, StreamKind::Outcome)
    }

    /// Standard-normal bath draws of one walker.
    pub fn bath_stream(&self, trajectory: u64, walker: u64) -> ChaCha8Rng {
        self.stream(trajectory, walker, StreamKind::Bath)
    }

    /// Choices of a random reference policy.
    pub fn policy_stream(&self, trajectory: u64) -> ChaCha8Rng {
        self.stream(trajectory, 0, StreamKind::Policy)
    }
}

/// Draws one outcome from probabilities evaluated on the ensemble average.
pub fn sample_outcome<R: Rng + ?Sized>(
    ensemble: &WalkerEnsemble,
    model: &Model,
    rng: &mut R,
) -> Result<Outcome, DynamicsError> {
    if ensemble.is_empty() {
        return Err(DynamicsError::EmptyEnsemble);
    }
    let rho = ensemble.mean_density();
    let table = model.probabilities(&rho)?;
    Ok(table.pick(rng.random::<f64>()))
}

/// Lindblad dissipator `c rho c^dagger - {c^dagger c, rho} / 2`.
pub fn dissipator(c: &Operator, gram: &Operator, rho: &Operator) -> Operator {
    *c * *rho * c.dagger() - gram.anticommutator(rho).scale_re(0.5)
}

/// Stochastic master equation increment `d rho` for a given outcome.
pub fn sme_step(
    rho: &Operator,
    outcome: Outcome,
    model: &Model,
    choice: &SteeringChoice,
) -> Result<Operator, DynamicsError> {
    let dt = model.dt();
    let h0 = model.hamiltonian(choice);
    let c = model.jumps().jump(outcome);
    let gram = model.jumps().gram(outcome);
    let gram_mean = rho.trace_product(gram).re;
    let dim = model.dim();

    let mut d = h0.commutator(rho).scale(C64::new(0.0, -dt));
    if outcome.is_jump() {
        if gram_mean < NULL_CHANNEL_TOL {
            return Err(DynamicsError::NullChannel(gram_mean));
        }
        d += (*c * *rho * c.dagger()).scale_re(1.0 / gram_mean) - *rho;
    }
    let shifted = *gram - Operator::identity(dim)?.scale_re(gram_mean);
    d -= shifted.anticommutator(rho).scale_re(0.5 * dt);
    for (c, g) in model.error_channels().iter().zip(model.error_grams()) {
        d += dissipator(c, g, rho).scale_re(dt);
    }
    Ok(d)
}

/// How the steering choice of each step is made.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    /// Maximize the anticipated gain of the protocol observable.
    Greedy,
    /// Uniformly random choices from the protocol's set, drawn from the
    /// trajectory's policy stream independently of the state.
    Random,
    /// A prescribed choice per step.
    Fixed(Vec<SteeringChoice>),
}

/// Where detector outcomes come from.
#[derive(Debug, Clone, PartialEq)]
pub enum OutcomeSource {
    Sampled,
    Fixed(Vec<Outcome>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryOptions {
    pub n_steps: usize,
    pub n_walkers: usize,
    /// Store `rho_bar` every `snapshot_stride` steps; 0 disables snapshots.
    pub snapshot_stride: usize,
    pub policy: Policy,
    pub outcomes: OutcomeSource,
    pub decision: DecisionMode,
    pub drift: BathDrift,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self {
            n_steps: 3000,
            n_walkers: 100,
            snapshot_stride: 1,
            policy: Policy::Greedy,
            outcomes: OutcomeSource::Sampled,
            decision: DecisionMode::Factorized,
            drift: BathDrift::Unraveling,
        }
    }
}

fn check_len(what: &'static str, got: usize, need: usize) -> Result<(), DynamicsError> {
    if got < need {
        return Err(DynamicsError::SequenceTooShort { what, got, need });
    }
    Ok(())
}

/// Runs one measurement trajectory of the steering protocol.
///
/// Each step: decide the steering choice from `rho_bar`, draw the shared
/// outcome, advance every walker with its own bath draws, record
/// diagnostics of the new `rho_bar`.
pub fn evolve_trajectory(
    model: &Model,
    protocol: &Protocol,
    options: &TrajectoryOptions,
    rng: &RngPolicy,
    trajectory: u64,
) -> Result<TrajectoryRecord, DynamicsError> {
    if let Policy::Fixed(seq) = &options.policy {
        check_len("choice", seq.len(), options.n_steps)?;
    }
    if let OutcomeSource::Fixed(seq) = &options.outcomes {
        check_len("outcome", seq.len(), options.n_steps)?;
    }
    let mut ensemble = WalkerEnsemble::new(*protocol.initial_state(), options.n_walkers)?;
    let mut outcome_rng = rng.outcome_stream(trajectory);
    let mut policy_rng = rng.policy_stream(trajectory);
    let mut bath_rngs: Vec<ChaCha8Rng> = (0..options.n_walkers as u64)
        .map(|w| rng.bath_stream(trajectory, w))
        .collect();
    let evaluator = GainEvaluator::new(model, protocol, options.decision)?;
    let n_channels = model.error_channels().len();
    let mut draws = vec![0.0; n_channels];
    let dt = model.dt();

    let mut record = TrajectoryRecord::new(model.n_qubits(), dt, options.snapshot_stride);
    record.steps.reserve(options.n_steps);
    let mut rho = ensemble.mean_density();

    for step in 0..options.n_steps {
        let choice = match &options.policy {
            Policy::Greedy => evaluator.choose(&rho)?,
            Policy::Random => {
                let set = protocol.steering_set();
                set[policy_rng.random_range(0..set.len())]
            }
            Policy::Fixed(seq) => seq[step],
        };
        let outcome = match &options.outcomes {
            OutcomeSource::Sampled => model.probabilities(&rho)?.pick(outcome_rng.random::<f64>()),
            OutcomeSource::Fixed(seq) => seq[step],
        };

        let inputs = StepInputs {
            h0: model.hamiltonian(&choice),
            c_meas: model.jumps().jump(outcome),
            c_meas_gram: model.jumps().gram(outcome),
            c_errors: model.error_channels(),
            c_error_grams: model.error_grams(),
            xi: outcome.xi,
            bath_draws: &[],
            drift: options.drift,
        };
        for (psi, bath) in ensemble.walkers_mut().iter_mut().zip(bath_rngs.iter_mut()) {
            for d in draws.iter_mut() {
                *d = bath.sample(StandardNormal);
            }
            let input = StepInputs {
                bath_draws: &draws,
                ..inputs
            };
            *psi = sse_step(psi, &input, dt)?;
        }

        rho = ensemble.mean_density();
        let index = step + 1;
        record.push(
            StepRecord::measure(index, choice, outcome, &rho, protocol),
            &rho,
        );
    }
    Ok(record)
}

/// Direct Euler integration of the stochastic master equation along a fixed
/// outcome sequence. Returns `rho` after each step.
///
/// With `choices = None` the steering is decided greedily from the
/// integrated state itself.
pub fn sme_integrate(
    model: &Model,
    protocol: &Protocol,
    outcomes: &[Outcome],
    choices: Option<&[SteeringChoice]>,
    n_steps: usize,
) -> Result<Vec<Operator>, DynamicsError> {
    check_len("outcome", outcomes.len(), n_steps)?;
    if let Some(seq) = choices {
        check_len("choice", seq.len(), n_steps)?;
    }
    let evaluator = GainEvaluator::new(model, protocol, DecisionMode::Factorized)?;
    let mut rho = protocol.initial_state().projector();
    let mut out = Vec::with_capacity(n_steps);
    for step in 0..n_steps {
        let choice = match choices {
            Some(seq) => seq[step],
            None => evaluator.choose(&rho)?,
        };
        rho += sme_step(&rho, outcomes[step], model, &choice)?;
        let min = diagnostics::min_eigenvalue(&rho)?;
        if min < SME_POSITIVITY_TOL {
            return Err(DynamicsError::Positivity(min));
        }
        out.push(rho);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::model::{ModelSpec, SteerOp};

    fn model(spec: ModelSpec) -> Model {
        Model::new(spec).unwrap()
    }

    fn inputs<'a>(
        m: &'a Model,
        choice: &SteeringChoice,
        outcome: Outcome,
        draws: &'a [f64],
    ) -> StepInputs<'a> {
        StepInputs {
            h0: m.hamiltonian(choice),
            c_meas: m.jumps().jump(outcome),
            c_meas_gram: m.jumps().gram(outcome),
            c_errors: m.error_channels(),
            c_error_grams: m.error_grams(),
            xi: outcome.xi,
            bath_draws: draws,
            drift: BathDrift::Unraveling,
        }
    }

    #[test]
    fn diagonal_drift_preserves_populations() {
        let m = model(ModelSpec::default());
        let none = SteeringChoice::single(SteerOp::None);
        let psi = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let out = sse_step(&psi, &inputs(&m, &none, Outcome::NO_CLICK, &[]), m.dt()).unwrap();
        assert!((out.amplitude(0).norm() - 0.6).abs() < 1e-12);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn click_applies_supercurrent_axis() {
        let m = model(ModelSpec::default());
        let none = SteeringChoice::single(SteerOp::None);
        let psi = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let out = sse_step(&psi, &inputs(&m, &none, Outcome::CLICK, &[]), m.dt()).unwrap();
        let axis = crate::model::supercurrent_axis(m.spec()).unwrap();
        let want = axis.apply(&psi);
        // equal up to a global phase, at first order in dt
        let overlap = want.inner(&out).norm();
        assert!((overlap - 1.0).abs() < 0.02, "overlap {overlap}");
        // drop the drift: pure click
        let h0 = Operator::zeros(2).unwrap();
        let zero_gram = Operator::zeros(2).unwrap();
        let input = StepInputs {
            h0: &h0,
            c_meas_gram: &zero_gram,
            ..inputs(&m, &none, Outcome::CLICK, &[])
        };
        let err = sse_step(&psi, &input, m.dt()).unwrap_err();
        assert!(matches!(err, DynamicsError::NullChannel(_)));
        let gram = *m.jumps().gram(Outcome::CLICK);
        let input = StepInputs {
            h0: &h0,
            c_meas_gram: &gram,
            ..inputs(&m, &none, Outcome::CLICK, &[])
        };
        let out = sse_step(&psi, &input, m.dt()).unwrap();
        assert!((want.inner(&out).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dephasing_leaves_eigenstate() {
        let m = model(ModelSpec {
            gamma_pd: 0.7,
            ..ModelSpec::default()
        });
        let none = SteeringChoice::single(SteerOp::None);
        let psi = StateVector::basis(2, 0).unwrap();
        let out = sse_step(&psi, &inputs(&m, &none, Outcome::NO_CLICK, &[1.3]), m.dt()).unwrap();
        assert!((out.amplitude(0).norm() - 1.0).abs() < 1e-12);
        assert!(matches!(
            sse_step(&psi, &inputs(&m, &none, Outcome::NO_CLICK, &[]), m.dt()),
            Err(DynamicsError::BathDraws { .. })
        ));
    }

    /// Monte Carlo mean of `|psi'><psi'|` over bath draws vs the SME increment.
    #[test]
    fn bath_average_reproduces_dissipator() {
        let m = model(ModelSpec {
            gamma_ad: 0.8,
            gamma_pd: 0.5,
            dt: 1e-3,
            ..ModelSpec::default()
        });
        let choice = SteeringChoice::single(SteerOp::PlusX);
        let psi = StateVector::new(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let rho = psi.projector();
        let want = sme_step(&rho, Outcome::NO_CLICK, &m, &choice).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200_000;
        let mut acc = Operator::zeros(2).unwrap();
        for _ in 0..n {
            let draws: [f64; 2] = [rng.sample(StandardNormal), rng.sample(StandardNormal)];
            // antithetic pair cancels the O(sqrt(dt)) noise exactly
            for sign in [1.0, -1.0] {
                let d = [sign * draws[0], sign * draws[1]];
                let out =
                    sse_step(&psi, &inputs(&m, &choice, Outcome::NO_CLICK, &d), m.dt()).unwrap();
                acc += out.projector();
            }
        }
        let got = acc.scale_re(0.5 / n as f64) - rho;
        let err = (got - want).max_abs();
        // relative to the size of the increment
        assert!(
            err < 0.05 * want.max_abs(),
            "err {err} vs {}",
            want.max_abs()
        );
    }

    #[test]
    fn sme_stationary_and_click_examples() {
        let m = model(ModelSpec::default());
        let none = SteeringChoice::single(SteerOp::None);
        let rho0 = StateVector::basis(2, 0).unwrap().projector();
        let d = sme_step(&rho0, Outcome::NO_CLICK, &m, &none).unwrap();
        assert!(d.max_abs() < 1e-15);

        let rho = StateVector::from_real(&[0.6, 0.8]).unwrap().projector();
        let axis = crate::model::supercurrent_axis(m.spec()).unwrap();
        let d = sme_step(&rho, Outcome::CLICK, &m, &none).unwrap();
        let commutator = m
            .hamiltonian(&none)
            .commutator(&rho)
            .scale(C64::new(0.0, -m.dt()));
        let want = axis * rho * axis - rho + commutator;
        assert!((d - want).max_abs() < 1e-12);
    }

    #[test]
    fn sme_is_trace_free() {
        let m = model(ModelSpec {
            n_qubits: 2,
            coupling: 0.49,
            gamma_ad: 0.3,
            gamma_pd: 0.2,
            ..ModelSpec::default()
        });
        let psi = StateVector::from_real(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        let rho = psi.projector();
        let choice = SteeringChoice::pair(SteerOp::PlusY, SteerOp::MinusZ);
        for &o in Outcome::all(2) {
            let d = sme_step(&rho, o, &m, &choice).unwrap();
            assert!(d.trace().norm() < 1e-14);
            assert!(d.is_hermitian(1e-14));
        }
    }

    #[test]
    fn outcome_sampling_matches_click_rate() {
        let m = model(ModelSpec {
            dt: 0.1,
            coupling: 2.0,
            ..ModelSpec::default()
        });
        let ens = WalkerEnsemble::new(StateVector::basis(2, 0).unwrap(), 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 40_000;
        let clicks = (0..n)
            .filter(|_| sample_outcome(&ens, &m, &mut rng).unwrap().is_jump())
            .count();
        let p = (2.0f64 * 0.1).powi(2);
        let sd = (p * (1.0 - p) / n as f64).sqrt();
        assert!(((clicks as f64 / n as f64) - p).abs() < 5.0 * sd);
    }

    #[test]
    fn bell_null_outcome_is_never_sampled() {
        let spec = ModelSpec {
            n_qubits: 2,
            coupling: 0.49,
            phase: std::f64::consts::PI,
            transmission: 0.5,
            dt: 0.3,
            ..ModelSpec::default()
        };
        let m = model(spec);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let y_minus = StateVector::new(&[C64::new(s, 0.0), C64::new(0.0, -s)]).unwrap();
        let y_plus = StateVector::new(&[C64::new(s, 0.0), C64::new(0.0, s)]).unwrap();
        let ens = WalkerEnsemble::new(y_minus.kron(&y_plus).unwrap(), 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen_minus_click = false;
        for _ in 0..20_000 {
            let o = sample_outcome(&ens, &m, &mut rng).unwrap();
            assert_ne!(o, Outcome::new(1, 1));
            seen_minus_click |= o == Outcome::new(1, -1);
        }
        assert!(seen_minus_click);
    }

    #[test]
    fn ensemble_rejects_zero_walkers() {
        assert!(WalkerEnsemble::new(StateVector::basis(2, 0).unwrap(), 0).is_err());
        let ens = WalkerEnsemble::new(StateVector::basis(2, 1).unwrap(), 4).unwrap();
        assert!(ens
            .mean_density()
            .approx_eq(&StateVector::basis(2, 1).unwrap().projector(), 0.0));
    }

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let p = RngPolicy::new(42);
        let a: u64 = p.bath_stream(0, 1).random();
        let b: u64 = p.bath_stream(0, 1).random();
        let c: u64 = p.bath_stream(0, 2).random();
        let d: u64 = p.outcome_stream(0).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
        let _ = pauli::x();
    }
}
