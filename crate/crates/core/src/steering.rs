// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Greedy steering decisions and the single-qubit Bloch-vector oracle.
//!
//! Every step the protocol picks the steering choice that maximizes the
//! anticipated measurement-averaged change of `Tr(rho O)`:
//! `sum_outcomes P(outcome) Tr(d rho_outcome O)`.
//!
//! Only the commutator with the steering Hamiltonian depends on the choice,
//! and it enters every outcome branch with total weight `sum P = 1`. The
//! [`DecisionMode::Factorized`] path therefore evaluates the outcome sum once
//! and adds `dt Tr(rho i[H_alpha, O])` per choice; [`DecisionMode::Exhaustive`]
//! enumerates every outcome for every choice and serves as its reference.

use std::cell::Cell;

use thiserror::Error;

use crate::dynamics::{self, DynamicsError, NULL_CHANNEL_TOL};
use crate::linalg::{herm_expect, pauli, LinalgError, Operator, StateVector, C64};
use crate::model::{
    bell_index, bell_observables, bell_states, supercurrent_axis, Model, ModelError, ModelSpec,
    Outcome, SteerOp, SteeringChoice,
};

/// Gains within this distance of the maximum count as tied.
pub const TIE_TOL: f64 = 1e-12;
/// Largest Bloch-vector length accepted by [`bloch_iterate`].
pub const BLOCH_NORM_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SteeringError {
    #[error("protocol {0:?} is not known")]
    UnknownProtocol(String),
    #[error("target is not the unique top eigenvector of the observable: {0}")]
    BadTarget(String),
    #[error("steering set is empty")]
    EmptySet,
    #[error("protocol acts on {protocol} qubits but the model has {model}")]
    QubitMismatch { protocol: usize, model: usize },
    #[error("Bloch vector has length {0}, outside the unit ball")]
    BlochNorm(f64),
    #[error("the Bloch representation needs a single qubit")]
    NotSingleQubit,
    #[error("{0}")]
    Dynamics(Box<DynamicsError>),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl From<DynamicsError> for SteeringError {
    fn from(e: DynamicsError) -> Self {
        SteeringError::Dynamics(Box::new(e))
    }
}

/// Initial state, target, steered observable and steering menu.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    name: String,
    initial: StateVector,
    target: StateVector,
    observable: Operator,
    set: Vec<SteeringChoice>,
    references: Vec<StateVector>,
    reference_labels: Vec<String>,
}

impl Protocol {
    /// Builds a protocol after checking that `target` is the unique
    /// top eigenvector of `observable`.
    pub fn new(
        name: impl Into<String>,
        initial: StateVector,
        target: StateVector,
        observable: Operator,
        set: Vec<SteeringChoice>,
    ) -> Result<Self, SteeringError> {
        let initial = initial.normalized()?;
        let target = target.normalized()?;
        if set.is_empty() {
            return Err(SteeringError::EmptySet);
        }
        let n_qubits = if target.dim() == 2 { 1 } else { 2 };
        if let Some(bad) = set.iter().find(|c| c.n_qubits() != n_qubits) {
            return Err(SteeringError::QubitMismatch {
                protocol: n_qubits,
                model: bad.n_qubits(),
            });
        }
        check_target(&observable, &target)?;
        Ok(Self {
            name: name.into(),
            initial,
            target,
            observable,
            set,
            references: vec![target],
            reference_labels: vec!["target".into()],
        })
    }

    /// Single qubit from `|+>` towards `|0>` with `O = sigma_z`.
    pub fn n1_target_zero() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = StateVector::basis(2, 0).unwrap();
        let mut p = Self::new(
            "n1-target-zero",
            StateVector::from_real(&[s, s]).unwrap(),
            zero,
            pauli::z(),
            crate::model::steering_set(1),
        )
        .unwrap();
        p.references = vec![zero, StateVector::basis(2, 1).unwrap()];
        p.reference_labels = vec!["F_0".into(), "F_1".into()];
        p
    }

    /// Two qubits from `|++>` towards `Phi_{xi,eta}` with
    /// `O = eta x1 x2 + (1 - 2 xi) z1 z2`.
    pub fn n2_bell(xi: u8, eta: i8) -> Result<Self, SteeringError> {
        if xi > 1 || (eta != 1 && eta != -1) {
            return Err(SteeringError::UnknownProtocol(format!("bell({xi},{eta})")));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_real(&[s, s]).unwrap();
        let (xx, zz) = bell_observables();
        let observable = xx.scale_re(f64::from(eta)) + zz.scale_re(1.0 - 2.0 * f64::from(xi));
        let bells = bell_states();
        let sign = if eta > 0 { '+' } else { '-' };
        let mut p = Self::new(
            format!("n2-bell-{xi}{sign}"),
            plus.kron(&plus)?,
            bells[bell_index(xi, eta)],
            observable,
            crate::model::steering_set(2),
        )?;
        p.references = bells.to_vec();
        p.reference_labels = ["F_0+", "F_0-", "F_1+", "F_1-"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Ok(p)
    }

    /// Resolves `n1-target-zero` and `n2-bell-{0+,0-,1+,1-}`.
    pub fn from_name(name: &str) -> Result<Self, SteeringError> {
        let unknown = || SteeringError::UnknownProtocol(name.to_string());
        if name == "n1-target-zero" {
            return Ok(Self::n1_target_zero());
        }
        let tag = name.strip_prefix("n2-bell-").ok_or_else(unknown)?;
        let mut chars = tag.chars();
        let xi = match chars.next() {
            Some('0') => 0,
            Some('1') => 1,
            _ => return Err(unknown()),
        };
        let eta = match (chars.next(), chars.next()) {
            (Some('+'), None) => 1,
            (Some('-' | '\u{2212}'), None) => -1,
            _ => return Err(unknown()),
        };
        Self::n2_bell(xi, eta)
    }

    /// Same protocol restricted to a subset of the steering menu.
    pub fn with_steering_set(mut self, set: Vec<SteeringChoice>) -> Result<Self, SteeringError> {
        if set.is_empty() {
            return Err(SteeringError::EmptySet);
        }
        let n = self.n_qubits();
        if let Some(bad) = set.iter().find(|c| c.n_qubits() != n) {
            return Err(SteeringError::QubitMismatch {
                protocol: n,
                model: bad.n_qubits(),
            });
        }
        self.set = set;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_qubits(&self) -> usize {
        if self.target.dim() == 2 {
            1
        } else {
            2
        }
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.initial
    }

    pub fn target_state(&self) -> &StateVector {
        &self.target
    }

    pub fn observable(&self) -> &Operator {
        &self.observable
    }

    pub fn steering_set(&self) -> &[SteeringChoice] {
        &self.set
    }

    /// States whose fidelities are logged alongside the target's.
    pub fn references(&self) -> &[StateVector] {
        &self.references
    }

    pub fn reference_labels(&self) -> &[String] {
        &self.reference_labels
    }
}

fn check_target(observable: &Operator, target: &StateVector) -> Result<(), SteeringError> {
    if observable.dim() != target.dim() {
        return Err(LinalgError::DimMismatch {
            left: observable.dim(),
            right: target.dim(),
        }
        .into());
    }
    if !observable.is_hermitian(1e-12) {
        return Err(SteeringError::BadTarget(
            "observable is not Hermitian".into(),
        ));
    }
    let eig = observable.eigvals_hermitian()?;
    let top = eig[eig.len() - 1];
    let second = eig[eig.len() - 2];
    let value = observable.expect_state(target).re;
    let residual = (observable.apply(target) - target.scale(C64::new(top, 0.0)))
        .norm_sqr()
        .sqrt();
    if residual > 1e-9 || (value - top).abs() > 1e-9 {
        return Err(SteeringError::BadTarget(format!(
            "<O> = {value} but top eigenvalue is {top}"
        )));
    }
    if top - second < 1e-9 {
        return Err(SteeringError::BadTarget(
            "top eigenvalue is degenerate".into(),
        ));
    }
    Ok(())
}

/// `sum_outcomes P Tr(d rho O)` by full outcome enumeration.
///
/// Outcomes whose channel is null contribute nothing: their weight times the
/// normalized jump term vanishes with `<c^dagger c>`.
pub fn expected_gain(
    rho: &Operator,
    choice: &SteeringChoice,
    model: &Model,
    observable: &Operator,
) -> Result<f64, SteeringError> {
    let table = model.probabilities(rho)?;
    let mut gain = 0.0;
    for &(outcome, p) in table.entries() {
        if outcome.is_jump() && rho.trace_product(model.jumps().gram(outcome)).re < NULL_CHANNEL_TOL
        {
            continue;
        }
        let d = dynamics::sme_step(rho, outcome, model, choice)?;
        gain += p * herm_expect(&d, observable)?;
    }
    Ok(gain)
}

/// How [`GainEvaluator`] computes the gain table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionMode {
    /// One outcome enumeration plus one trace per choice.
    #[default]
    Factorized,
    /// Every outcome for every choice.
    Exhaustive,
}

/// Gain tables and greedy choices for one (model, protocol) pair.
#[derive(Debug)]
pub struct GainEvaluator<'a> {
    model: &'a Model,
    protocol: &'a Protocol,
    mode: DecisionMode,
    /// `i [H_alpha, O]` aligned with the protocol's steering set.
    generators: Vec<Operator>,
    increments: Cell<u64>,
}

impl<'a> GainEvaluator<'a> {
    pub fn new(
        model: &'a Model,
        protocol: &'a Protocol,
        mode: DecisionMode,
    ) -> Result<Self, SteeringError> {
        if protocol.n_qubits() != model.n_qubits() {
            return Err(SteeringError::QubitMismatch {
                protocol: protocol.n_qubits(),
                model: model.n_qubits(),
            });
        }
        let o = protocol.observable();
        let generators = protocol
            .steering_set()
            .iter()
            .map(|c| model.hamiltonian(c).commutator(o).scale(C64::new(0.0, 1.0)))
            .collect();
        Ok(Self {
            model,
            protocol,
            mode,
            generators,
            increments: Cell::new(0),
        })
    }

    /// Number of SME increments evaluated so far.
    pub fn increments(&self) -> u64 {
        self.increments.get()
    }

    fn counted_gain(&self, rho: &Operator, choice: &SteeringChoice) -> Result<f64, SteeringError> {
        let n = Outcome::all(self.model.n_qubits()).len() as u64;
        self.increments.set(self.increments.get() + n);
        expected_gain(rho, choice, self.model, self.protocol.observable())
    }

    /// Gain of every choice, in steering-set order.
    pub fn gains(&self, rho: &Operator) -> Result<Vec<f64>, SteeringError> {
        let set = self.protocol.steering_set();
        match self.mode {
            DecisionMode::Exhaustive => set.iter().map(|c| self.counted_gain(rho, c)).collect(),
            DecisionMode::Factorized => {
                let dt = self.model.dt();
                let first = self.counted_gain(rho, &set[0])?;
                let common = first - dt * herm_expect(rho, &self.generators[0])?;
                self.generators
                    .iter()
                    .map(|k| Ok(common + dt * herm_expect(rho, k)?))
                    .collect()
            }
        }
    }

    /// First maximizer of the gain table within [`TIE_TOL`].
    pub fn choose(&self, rho: &Operator) -> Result<SteeringChoice, SteeringError> {
        let gains = self.gains(rho)?;
        Ok(self.protocol.steering_set()[argmax_first(&gains, TIE_TOL)])
    }
}

/// Smallest index whose value lies within `tol` of the maximum.
pub fn argmax_first(values: &[f64], tol: f64) -> usize {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values.iter().position(|&v| v >= max - tol).unwrap_or(0)
}

/// Greedy choice for `rho` using the factorized gain table.
pub fn choose_steering(
    rho: &Operator,
    protocol: &Protocol,
    model: &Model,
) -> Result<SteeringChoice, SteeringError> {
    GainEvaluator::new(model, protocol, DecisionMode::Factorized)?.choose(rho)
}

/// Bloch vector `r_j = Tr(rho sigma_j)` of a single-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn from_density(rho: &Operator) -> Result<Self, SteeringError> {
        if rho.dim() != 2 {
            return Err(SteeringError::NotSingleQubit);
        }
        let p = pauli::xyz();
        Ok(Self([
            rho.trace_product(&p[0]).re,
            rho.trace_product(&p[1]).re,
            rho.trace_product(&p[2]).re,
        ]))
    }

    /// `(1 + r . sigma) / 2`
    pub fn to_density(&self) -> Operator {
        let p = pauli::xyz();
        let mut rho = Operator::identity(2).unwrap();
        for (r, s) in self.0.iter().zip(&p) {
            rho += s.scale_re(*r);
        }
        rho.scale_re(0.5)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|r| r * r).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &BlochVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Closed-form single-qubit gain for `O = sigma_z` with `E_A` dropped from the
/// Hamiltonian:
///
/// `+-2 J dt eps_{z a j} r_j - dt G_AD (1 + r_z)
///  - dt G_ms [2 (1 - cos^2(p/2) / (1 - T sin^2(p/2))) r_z
///    + sqrt(1 - T) sin(p) / (1 - T sin^2(p/2)) r_y]`
///
/// with `G_ms = Lambda^2 dt`.
pub fn analytic_gain(r: &BlochVector, op: SteerOp, spec: &ModelSpec) -> f64 {
    let dt = spec.dt;
    let [_, ry, rz] = r.0;
    let steer = match op.axis_sign() {
        None => 0.0,
        Some((a, sign)) => {
            let mut s = 0.0;
            for (j, rj) in r.0.iter().enumerate() {
                s += levi_civita(2, a, j) * rj;
            }
            2.0 * sign * spec.steer_strength * dt * s
        }
    };
    let half = spec.phase / 2.0;
    let denom = 1.0 - spec.transmission * half.sin().powi(2);
    let g_ms = spec.coupling.powi(2) * dt;
    let bracket = 2.0 * (1.0 - half.cos().powi(2) / denom) * rz
        + (1.0 - spec.transmission).sqrt() * spec.phase.sin() / denom * ry;
    steer - dt * spec.gamma_ad * (1.0 + rz) - dt * g_ms * bracket
}

/// Single-qubit Bloch increment for one step:
///
/// `dr_j = 2 dt r_k [E_A eps_{jzk} +- J eps_{jak}]
///        + (xi / 2) r_k Tr[s_j S s_k S - s_j s_k]
///        + dt G_AD Tr(s_j D[sigma^-] rho)
///        + dt G_PD r_j (delta_{jz} - 1)`
pub fn bloch_iterate(
    r: &BlochVector,
    choice: &SteeringChoice,
    outcome: Outcome,
    spec: &ModelSpec,
) -> Result<BlochVector, SteeringError> {
    if spec.n_qubits != 1 {
        return Err(SteeringError::NotSingleQubit);
    }
    let norm = r.norm();
    if norm > 1.0 + BLOCH_NORM_TOL {
        return Err(SteeringError::BlochNorm(norm));
    }
    let dt = spec.dt;
    let e_a = crate::model::andreev_energy(spec);
    let mut dr = [0.0; 3];

    // precession about z from E_A and about the steering axis
    for (j, d) in dr.iter_mut().enumerate() {
        for (k, rk) in r.0.iter().enumerate() {
            let mut rate = e_a * levi_civita(j, 2, k);
            if let Some((a, sign)) = choice.op(0).axis_sign() {
                rate += sign * spec.steer_strength * levi_civita(j, a, k);
            }
            *d += 2.0 * dt * rk * rate;
        }
    }

    if outcome.is_jump() {
        let s = supercurrent_axis(spec)?;
        let p = pauli::xyz();
        for (j, d) in dr.iter_mut().enumerate() {
            for (k, rk) in r.0.iter().enumerate() {
                let m = (p[j] * s * p[k] * s - p[j] * p[k]).trace().re;
                *d += 0.5 * rk * m;
            }
        }
    }

    let [rx, ry, rz] = r.0;
    let ad = [-0.5 * rx, -0.5 * ry, -(1.0 + rz)];
    for j in 0..3 {
        dr[j] += dt * spec.gamma_ad * ad[j];
        if j != 2 {
            dr[j] -= dt * spec.gamma_pd * r.0[j];
        }
    }
    Ok(BlochVector(dr))
}

/// Advances a Bloch vector and a density matrix through the same choices and
/// outcomes and returns the largest componentwise disagreement.
pub fn bloch_vs_sme_crosscheck(
    model: &Model,
    initial: &BlochVector,
    choices: &[SteeringChoice],
    outcomes: &[Outcome],
) -> Result<f64, SteeringError> {
    if model.n_qubits() != 1 {
        return Err(SteeringError::NotSingleQubit);
    }
    let mut r = *initial;
    let mut rho = initial.to_density();
    let mut worst = 0.0f64;
    for (choice, &outcome) in choices.iter().zip(outcomes) {
        let dr = bloch_iterate(&r, choice, outcome, model.spec())?;
        for j in 0..3 {
            r.0[j] += dr.0[j];
        }
        rho += dynamics::sme_step(&rho, outcome, model, choice)?;
        worst = worst.max(r.max_abs_diff(&BlochVector::from_density(&rho)?));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::steering_set;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn n1(spec: ModelSpec) -> Model {
        Model::new(spec).unwrap()
    }

    fn random_bloch(rng: &mut impl Rng) -> BlochVector {
        loop {
            let r = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let b = BlochVector(r);
            if b.norm() <= 1.0 {
                return b;
            }
        }
    }

    #[test]
    fn protocols_validate_targets() {
        let p = Protocol::n1_target_zero();
        assert_eq!(p.steering_set().len(), 7);
        for name in ["n2-bell-0+", "n2-bell-0-", "n2-bell-1+", "n2-bell-1-"] {
            let p = Protocol::from_name(name).unwrap();
            assert_eq!(p.name(), name);
            assert_eq!(p.steering_set().len(), 49);
            assert!((p.observable().expect_state(p.target_state()).re - 2.0).abs() < 1e-12);
        }
        assert!(Protocol::from_name("n3").is_err());
        // |1> is the bottom eigenvector of sigma_z
        let bad = Protocol::new(
            "bad",
            StateVector::basis(2, 0).unwrap(),
            StateVector::basis(2, 1).unwrap(),
            pauli::z(),
            steering_set(1),
        );
        assert!(matches!(bad, Err(SteeringError::BadTarget(_))));
        // degenerate top eigenvalue
        let bad = Protocol::new(
            "bad",
            StateVector::basis(2, 0).unwrap(),
            StateVector::basis(2, 0).unwrap(),
            Operator::identity(2).unwrap(),
            steering_set(1),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn target_is_gain_maximum_at_half_flux() {
        let m = n1(ModelSpec {
            phase: PI,
            ..ModelSpec::default()
        });
        let p = Protocol::n1_target_zero();
        let rho = p.target_state().projector();
        for c in steering_set(1) {
            let g = expected_gain(&rho, &c, &m, p.observable()).unwrap();
            assert!(g <= 1e-15, "{c}: {g}");
        }
    }

    #[test]
    fn numeric_gain_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = Protocol::n1_target_zero();
        for _ in 0..100 {
            let spec = ModelSpec {
                gamma_ad: rng.random_range(0.0..1.0),
                gamma_pd: rng.random_range(0.0..1.0),
                ..ModelSpec::default()
            };
            let m = n1(spec);
            let r = random_bloch(&mut rng);
            let rho = r.to_density();
            for c in steering_set(1) {
                let num = expected_gain(&rho, &c, &m, p.observable()).unwrap();
                let closed = analytic_gain(&r, c.op(0), &spec);
                assert!((num - closed).abs() < 1e-10, "{c}: {num} vs {closed}");
            }
        }
    }

    #[test]
    fn half_flux_gain_vector() {
        // 2 dt r . (-+J d_{a,y}, +-J d_{a,x}, -G_ms)
        let spec = ModelSpec {
            phase: PI,
            ..ModelSpec::default()
        };
        let m = n1(spec);
        let p = Protocol::n1_target_zero();
        let r = BlochVector([0.3, -0.4, 0.5]);
        let (j, dt) = (spec.steer_strength, spec.dt);
        let g_ms = spec.coupling.powi(2) * dt;
        for c in steering_set(1) {
            let (vx, vy) = match c.op(0) {
                SteerOp::PlusY => (-j, 0.0),
                SteerOp::MinusY => (j, 0.0),
                SteerOp::PlusX => (0.0, j),
                SteerOp::MinusX => (0.0, -j),
                _ => (0.0, 0.0),
            };
            let want = 2.0 * dt * (r.0[0] * vx + r.0[1] * vy - g_ms * r.0[2]);
            let got = expected_gain(&r.to_density(), &c, &m, p.observable()).unwrap();
            assert!((got - want).abs() < 1e-12, "{c}: {got} vs {want}");
        }
    }

    #[test]
    fn greedy_rotates_negative_x_towards_target() {
        let m = n1(ModelSpec {
            phase: PI,
            gamma_pd: 1e-3,
            ..ModelSpec::default()
        });
        let p = Protocol::n1_target_zero();
        let rho = BlochVector([-0.6, 0.0, 0.5]).to_density();
        let c = choose_steering(&rho, &p, &m).unwrap();
        // +J sigma^y turns -x into +z
        assert_eq!(c.op(0), SteerOp::PlusY);
    }

    #[test]
    fn frustrated_decision_returns_first() {
        let m = n1(ModelSpec::default());
        let p = Protocol::n1_target_zero();
        let rho = BlochVector([0.0, 0.0, 0.4]).to_density();
        let gains = GainEvaluator::new(&m, &p, DecisionMode::Exhaustive)
            .unwrap()
            .gains(&rho)
            .unwrap();
        let spread = gains
            .iter()
            .fold(0.0f64, |a, g| a.max((g - gains[0]).abs()));
        assert!(spread < 1e-14);
        assert_eq!(
            choose_steering(&rho, &p, &m).unwrap(),
            SteeringChoice::single(SteerOp::None)
        );
    }

    #[test]
    fn factorized_matches_exhaustive_and_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = ModelSpec {
            n_qubits: 2,
            coupling: 0.49,
            gamma_ad: 0.2,
            gamma_pd: 0.3,
            asymmetry: 1.03,
            ..ModelSpec::default()
        };
        let m = Model::new(spec).unwrap();
        let p = Protocol::n2_bell(0, 1).unwrap();
        let fast = GainEvaluator::new(&m, &p, DecisionMode::Factorized).unwrap();
        let full = GainEvaluator::new(&m, &p, DecisionMode::Exhaustive).unwrap();
        for _ in 0..20 {
            let a = StateVector::new(&[
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            ])
            .unwrap()
            .normalized()
            .unwrap();
            let rho = a.projector().scale_re(0.7) + Operator::identity(4).unwrap().scale_re(0.075);
            let gf = fast.gains(&rho).unwrap();
            let ge = full.gains(&rho).unwrap();
            for (x, y) in gf.iter().zip(&ge) {
                assert!((x - y).abs() < 1e-13);
            }
            assert_eq!(fast.choose(&rho).unwrap(), full.choose(&rho).unwrap());
        }
        // two choose + gains calls per loop iteration on each evaluator
        assert_eq!(full.increments(), 40 * 4 * 49);
        assert_eq!(fast.increments(), 40 * 4);
    }

    #[test]
    fn bloch_zero_and_dephasing_examples() {
        let spec = ModelSpec::default();
        let none = SteeringChoice::single(SteerOp::None);
        let dr = bloch_iterate(
            &BlochVector([0.0, 0.0, 0.7]),
            &none,
            Outcome::NO_CLICK,
            &spec,
        )
        .unwrap();
        assert!(dr.norm() < 1e-15);

        let spec = ModelSpec {
            delta: 1e-9,
            steer_strength: 0.0,
            gamma_pd: 0.4,
            ..ModelSpec::default()
        };
        let r = BlochVector([0.3, -0.2, 0.5]);
        let dr = bloch_iterate(&r, &none, Outcome::NO_CLICK, &spec).unwrap();
        for j in 0..3 {
            let want = spec.dt * spec.gamma_pd * r.0[j] * (if j == 2 { 0.0 } else { -1.0 });
            assert!((dr.0[j] - want).abs() < 1e-10);
        }
        assert!(bloch_iterate(
            &BlochVector([1.0, 0.1, 0.0]),
            &none,
            Outcome::NO_CLICK,
            &spec
        )
        .is_err());
    }

    #[test]
    fn half_flux_stationary_point() {
        // no-jump flow under -J sigma^y at phi0 = pi with G_PD = 2J:
        // r_x is stationary on r_x = -r_z, r_y = 0 up to E_A
        let spec = ModelSpec {
            phase: PI,
            transmission: 1.0 - 1e-10,
            gamma_pd: 6.0,
            dt: 0.01,
            ..ModelSpec::default()
        };
        let c = SteeringChoice::single(SteerOp::MinusY);
        let r = BlochVector([-0.4, 0.0, 0.4]);
        let dr = bloch_iterate(&r, &c, Outcome::NO_CLICK, &spec).unwrap();
        assert!(dr.0[0].abs() < 1e-6, "{dr:?}");
        assert!(dr.0[2].abs() > 1e-3);
    }

    #[test]
    fn crosscheck_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..5 {
            let spec = ModelSpec {
                gamma_ad: if trial == 0 {
                    0.0
                } else {
                    rng.random_range(0.0..1.0)
                },
                gamma_pd: if trial == 0 {
                    0.0
                } else {
                    rng.random_range(0.0..1.0)
                },
                dt: 0.005,
                ..ModelSpec::default()
            };
            let m = n1(spec);
            let choices: Vec<_> = (0..100)
                .map(|_| SteeringChoice::single(SteerOp::ALL[rng.random_range(0..7)]))
                .collect();
            let outcomes: Vec<_> = (0..100)
                .map(|k| {
                    if k % 17 == 3 {
                        Outcome::CLICK
                    } else {
                        Outcome::NO_CLICK
                    }
                })
                .collect();
            let dev =
                bloch_vs_sme_crosscheck(&m, &BlochVector([0.3, 0.2, -0.1]), &choices, &outcomes)
                    .unwrap();
            assert!(dev < 1e-10, "deviation {dev}");
        }
    }

    proptest! {
        #[test]
        fn argmax_invariant_under_positive_affine(
            gains in proptest::collection::vec(-5.0f64..5.0, 1..49),
            scale in 0.1f64..10.0,
            shift in -3.0f64..3.0,
        ) {
            let mapped: Vec<f64> = gains.iter().map(|g| scale * g + shift).collect();
            prop_assert_eq!(argmax_first(&gains, 0.0), argmax_first(&mapped, 0.0));
        }
    }
}
