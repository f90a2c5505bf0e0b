// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Physical operators for Andreev system qubits weakly coupled to detector
//! qubits: the bare Hamiltonian, the steering menu, measurement jump
//! operators for single-detector and Bell-pair readout, and the amplitude
//! and phase error channels.
//!
//! Conventions: `sigma_z |0> = |0>`, the Andreev excited state is `|0>` and
//! the ground state is `|1>`, and `sigma_minus` maps `|0>` to `|1>`. The
//! detector Hamiltonian only contributes a global phase and is dropped.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{kron, pauli, LinalgError, Operator, StateVector, C64};

/// `J dt` or `Lambda dt` above this value leaves the weak-measurement regime.
pub const WEAK_MEASUREMENT_LIMIT: f64 = 0.3;

/// Smallest Andreev energy (relative to the gap) for which the supercurrent
/// axis is considered well defined.
const MIN_ANDREEV_ENERGY: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("n_qubits must be 1 or 2, got {0}")]
    QubitCount(usize),
    #[error("parameter `{name}` = {value} is out of range: {reason}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error(
        "Andreev energy vanishes (transmission = 1, phase = pi); supercurrent axis is singular"
    )]
    SingularAxis,
    #[error("outcome probability {value} outside [0, 1]; time step too large")]
    Probability { value: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Parameters of one protocol instance. Energies and rates are in units of
/// `delta`, times in units of `1 / delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub n_qubits: usize,
    pub delta: f64,
    pub transmission: f64,
    pub phase: f64,
    /// System-detector coupling `Lambda = lambda_0 I_0`.
    pub coupling: f64,
    pub steer_strength: f64,
    pub dt: f64,
    pub gamma_ad: f64,
    pub gamma_pd: f64,
    /// Multiplies coupling and steering strength of qubit 2. 1.0 is the
    /// symmetric setup.
    #[serde(default = "default_asymmetry")]
    pub asymmetry: f64,
}

fn default_asymmetry() -> f64 {
    1.0
}

impl Default for ModelSpec {
    /// Single Andreev qubit at the reference operating point.
    fn default() -> Self {
        Self {
            n_qubits: 1,
            delta: 1.0,
            transmission: 0.98,
            phase: 0.97 * std::f64::consts::PI,
            coupling: 0.98,
            steer_strength: 3.0,
            dt: 0.03,
            gamma_ad: 0.0,
            gamma_pd: 0.0,
            asymmetry: 1.0,
        }
    }
}

impl ModelSpec {
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Checks hard constraints and returns soft warnings.
    pub fn validate(&self) -> Result<Vec<String>, ModelError> {
        if self.n_qubits != 1 && self.n_qubits != 2 {
            return Err(ModelError::QubitCount(self.n_qubits));
        }
        let finite = [
            ("delta", self.delta),
            ("transmission", self.transmission),
            ("phase", self.phase),
            ("coupling", self.coupling),
            ("steer_strength", self.steer_strength),
            ("dt", self.dt),
            ("gamma_ad", self.gamma_ad),
            ("gamma_pd", self.gamma_pd),
            ("asymmetry", self.asymmetry),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(ModelError::OutOfRange {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        if self.delta <= 0.0 {
            return Err(ModelError::OutOfRange {
                name: "delta",
                value: self.delta,
                reason: "must be positive",
            });
        }
        if !(self.transmission > 0.0 && self.transmission <= 1.0) {
            return Err(ModelError::OutOfRange {
                name: "transmission",
                value: self.transmission,
                reason: "must lie in (0, 1]",
            });
        }
        if self.dt <= 0.0 {
            return Err(ModelError::OutOfRange {
                name: "dt",
                value: self.dt,
                reason: "must be positive",
            });
        }
        for (name, value) in [("gamma_ad", self.gamma_ad), ("gamma_pd", self.gamma_pd)] {
            if value < 0.0 {
                return Err(ModelError::OutOfRange {
                    name,
                    value,
                    reason: "rates must be non-negative",
                });
            }
        }
        if self.asymmetry <= 0.0 {
            return Err(ModelError::OutOfRange {
                name: "asymmetry",
                value: self.asymmetry,
                reason: "must be positive",
            });
        }
        if andreev_energy(self) < MIN_ANDREEV_ENERGY * self.delta {
            return Err(ModelError::SingularAxis);
        }
        let mut warnings = Vec::new();
        let scale = if self.n_qubits == 2 {
            self.asymmetry.max(1.0)
        } else {
            1.0
        };
        let j_dt = self.steer_strength.abs() * self.dt * scale;
        let l_dt = self.coupling.abs() * self.dt * scale;
        if j_dt > WEAK_MEASUREMENT_LIMIT {
            warnings.push(format!(
                "J*dt = {j_dt:.3} exceeds {WEAK_MEASUREMENT_LIMIT}; weak-measurement expansion is unreliable"
            ));
        }
        if l_dt > WEAK_MEASUREMENT_LIMIT {
            warnings.push(format!(
                "Lambda*dt = {l_dt:.3} exceeds {WEAK_MEASUREMENT_LIMIT}; weak-measurement expansion is unreliable"
            ));
        }
        Ok(warnings)
    }

    /// Supercurrent scale `I_0 = T delta sin(phase / 2)`, for display only.
    pub fn supercurrent_scale(&self) -> f64 {
        self.transmission * self.delta * (0.5 * self.phase).sin()
    }

    fn qubit_factor(&self, qubit: usize) -> f64 {
        if qubit == 1 {
            self.asymmetry
        } else {
            1.0
        }
    }
}

/// One entry of the single-qubit steering menu.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SteerOp {
    None,
    PlusX,
    MinusX,
    PlusY,
    MinusY,
    PlusZ,
    MinusZ,
}

impl SteerOp {
    pub const ALL: [SteerOp; 7] = [
        SteerOp::None,
        SteerOp::PlusX,
        SteerOp::MinusX,
        SteerOp::PlusY,
        SteerOp::MinusY,
        SteerOp::PlusZ,
        SteerOp::MinusZ,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<SteerOp> {
        Self::ALL.get(i).copied()
    }

    /// Pauli axis (0 = x, 1 = y, 2 = z) and sign; `None` for no steering.
    pub fn axis_sign(self) -> Option<(usize, f64)> {
        match self {
            SteerOp::None => None,
            SteerOp::PlusX => Some((0, 1.0)),
            SteerOp::MinusX => Some((0, -1.0)),
            SteerOp::PlusY => Some((1, 1.0)),
            SteerOp::MinusY => Some((1, -1.0)),
            SteerOp::PlusZ => Some((2, 1.0)),
            SteerOp::MinusZ => Some((2, -1.0)),
        }
    }

    /// Single-qubit operator `+-J sigma^a`, or zero.
    pub fn operator(self, strength: f64) -> Operator {
        match self.axis_sign() {
            None => Operator::zeros(2).unwrap(),
            Some((axis, sign)) => pauli::xyz()[axis].scale_re(sign * strength),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SteerOp::None => "none",
            SteerOp::PlusX => "+x",
            SteerOp::MinusX => "-x",
            SteerOp::PlusY => "+y",
            SteerOp::MinusY => "-y",
            SteerOp::PlusZ => "+z",
            SteerOp::MinusZ => "-z",
        }
    }
}

/// Steering decision for every system qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SteeringChoice {
    ops: [SteerOp; 2],
    n_qubits: usize,
}

impl SteeringChoice {
    pub fn single(op: SteerOp) -> Self {
        Self {
            ops: [op, SteerOp::None],
            n_qubits: 1,
        }
    }

    pub fn pair(first: SteerOp, second: SteerOp) -> Self {
        Self {
            ops: [first, second],
            n_qubits: 2,
        }
    }

    pub fn none(n_qubits: usize) -> Self {
        Self {
            ops: [SteerOp::None; 2],
            n_qubits,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[SteerOp] {
        &self.ops[..self.n_qubits]
    }

    pub fn op(&self, qubit: usize) -> SteerOp {
        self.ops[qubit]
    }

    /// Flat index: `alpha` for one qubit, `7 * alpha_1 + alpha_2` for two.
    pub fn index(&self) -> usize {
        self.ops()
            .iter()
            .fold(0, |acc, op| acc * SteerOp::ALL.len() + op.index())
    }

    pub fn from_index(n_qubits: usize, index: usize) -> Option<Self> {
        match n_qubits {
            1 => SteerOp::from_index(index).map(Self::single),
            2 if index < 49 => Some(Self::pair(
                SteerOp::from_index(index / 7)?,
                SteerOp::from_index(index % 7)?,
            )),
            _ => None,
        }
    }
}

impl fmt::Display for SteeringChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n_qubits {
            1 => f.write_str(self.ops[0].label()),
            _ => write!(f, "({},{})", self.ops[0].label(), self.ops[1].label()),
        }
    }
}

/// The full menu in tie-break order: lexicographic over qubits.
pub fn steering_set(n_qubits: usize) -> Vec<SteeringChoice> {
    let size = 7usize.pow(n_qubits as u32);
    (0..size)
        .filter_map(|i| SteeringChoice::from_index(n_qubits, i))
        .collect()
}

/// Detector readout. `eta` is fixed to +1 for single-qubit readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub xi: u8,
    pub eta: i8,
}

impl Outcome {
    pub const NO_CLICK: Outcome = Outcome { xi: 0, eta: 1 };
    pub const CLICK: Outcome = Outcome { xi: 1, eta: 1 };

    pub fn new(xi: u8, eta: i8) -> Self {
        debug_assert!(xi <= 1 && (eta == 1 || eta == -1));
        Self { xi, eta }
    }

    pub fn is_jump(&self) -> bool {
        self.xi == 1
    }

    /// All outcomes of an `n_qubits` readout, in a fixed order.
    pub fn all(n_qubits: usize) -> &'static [Outcome] {
        const ONE: [Outcome; 2] = [Outcome::NO_CLICK, Outcome::CLICK];
        const TWO: [Outcome; 4] = [
            Outcome { xi: 0, eta: 1 },
            Outcome { xi: 0, eta: -1 },
            Outcome { xi: 1, eta: 1 },
            Outcome { xi: 1, eta: -1 },
        ];
        if n_qubits == 1 {
            &ONE
        } else {
            &TWO
        }
    }
}

/// `E_A = delta sqrt(1 - T sin^2(phase / 2))`
pub fn andreev_energy(spec: &ModelSpec) -> f64 {
    let s = (0.5 * spec.phase).sin();
    spec.delta * (1.0 - spec.transmission * s * s).max(0.0).sqrt()
}

/// Rotated Pauli matrix `sigma^s` along which the supercurrent couples.
pub fn supercurrent_axis(spec: &ModelSpec) -> Result<Operator, ModelError> {
    let ea = andreev_energy(spec);
    if ea < MIN_ANDREEV_ENERGY * spec.delta {
        return Err(ModelError::SingularAxis);
    }
    let half = 0.5 * spec.phase;
    let pref = spec.delta / ea;
    let z_weight = -pref * half.cos();
    let y_weight = pref * (1.0 - spec.transmission).sqrt() * half.sin();
    Ok(pauli::z().scale_re(z_weight) + pauli::y().scale_re(y_weight))
}

/// Places a single-qubit operator on `qubit` of an `n_qubits` register.
pub fn embed(n_qubits: usize, qubit: usize, op: &Operator) -> Operator {
    match (n_qubits, qubit) {
        (1, 0) => *op,
        (2, 0) => kron(op, &pauli::identity()).unwrap(),
        (2, 1) => kron(&pauli::identity(), op).unwrap(),
        _ => panic!("qubit {qubit} out of range for {n_qubits} qubits"),
    }
}

/// `sum_n [E_A sigma_n^z + H_{s, alpha_n}]`
pub fn system_hamiltonian(spec: &ModelSpec, choice: &SteeringChoice) -> Operator {
    let ea = andreev_energy(spec);
    let mut h = Operator::zeros(spec.dim()).unwrap();
    for (qubit, op) in choice.ops().iter().enumerate().take(spec.n_qubits) {
        let local =
            pauli::z().scale_re(ea) + op.operator(spec.steer_strength * spec.qubit_factor(qubit));
        h += embed(spec.n_qubits, qubit, &local);
    }
    h
}

/// No-click effective Hamiltonian. The system-detector coupling has no
/// `<0|.|0>_d` element, so this equals the system Hamiltonian.
pub fn effective_hamiltonian(spec: &ModelSpec, choice: &SteeringChoice) -> Operator {
    system_hamiltonian(spec, choice)
}

/// Measurement jump operator `c = -i sqrt(dt) H_1` (single qubit) or
/// `c_eta = -i sqrt(dt) Lambda (eta sigma_1^s + sigma_2^s)` (Bell readout).
pub fn measurement_jump(spec: &ModelSpec, eta: i8) -> Result<Operator, ModelError> {
    let axis = supercurrent_axis(spec)?;
    let pref = C64::new(0.0, -spec.dt.sqrt());
    let h1 = match spec.n_qubits {
        1 => axis.scale_re(spec.coupling),
        2 => {
            let s1 = embed(2, 0, &axis).scale_re(spec.coupling * f64::from(eta));
            let s2 = embed(2, 1, &axis).scale_re(spec.coupling * spec.asymmetry);
            s1 + s2
        }
        n => return Err(ModelError::QubitCount(n)),
    };
    Ok(h1.scale(pref))
}

/// Error channel jump operators: `sqrt(Gamma_AD) sigma_n^-` then
/// `sqrt(Gamma_PD / 2) sigma_n^z` per qubit; zero-rate channels are omitted.
pub fn error_jumps(spec: &ModelSpec) -> Result<Vec<Operator>, ModelError> {
    for (name, value) in [("gamma_ad", spec.gamma_ad), ("gamma_pd", spec.gamma_pd)] {
        if value < 0.0 || !value.is_finite() {
            return Err(ModelError::OutOfRange {
                name,
                value,
                reason: "rates must be non-negative",
            });
        }
    }
    let mut out = Vec::new();
    for qubit in 0..spec.n_qubits {
        if spec.gamma_ad > 0.0 {
            out.push(embed(
                spec.n_qubits,
                qubit,
                &pauli::minus().scale_re(spec.gamma_ad.sqrt()),
            ));
        }
        if spec.gamma_pd > 0.0 {
            out.push(embed(
                spec.n_qubits,
                qubit,
                &pauli::z().scale_re((0.5 * spec.gamma_pd).sqrt()),
            ));
        }
    }
    Ok(out)
}

/// Outcome probabilities for one step.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    entries: Vec<(Outcome, f64)>,
}

impl ProbabilityTable {
    pub fn entries(&self) -> &[(Outcome, f64)] {
        &self.entries
    }

    pub fn get(&self, outcome: Outcome) -> f64 {
        self.entries
            .iter()
            .find(|(o, _)| *o == outcome)
            .map(|(_, p)| *p)
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    /// Inverse-CDF draw from a uniform `u` in `[0, 1)`.
    pub fn pick(&self, u: f64) -> Outcome {
        let mut acc = 0.0;
        for &(outcome, p) in &self.entries {
            acc += p;
            if u < acc && p > 0.0 {
                return outcome;
            }
        }
        self.entries
            .iter()
            .rev()
            .find(|(_, p)| *p > 0.0)
            .map(|(o, _)| *o)
            .unwrap_or(self.entries[0].0)
    }
}

const PROB_SLACK: f64 = 1e-10;

fn check_probability(p: f64) -> Result<f64, ModelError> {
    if !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&p) || !p.is_finite() {
        return Err(ModelError::Probability { value: p });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `P_1 = dt <c^dagger c>`, `P_0 = 1 - P_1` for one qubit;
/// `P_{xi,eta} = (delta_{xi,0} + (delta_{xi,1} - delta_{xi,0}) dt <c_eta^dagger c_eta>) / 2`
/// for Bell readout. Probabilities do not depend on the steering choice.
pub fn outcome_probabilities(
    rho: &Operator,
    spec: &ModelSpec,
) -> Result<ProbabilityTable, ModelError> {
    let jumps = MeasurementJumps::new(spec)?;
    jumps.probabilities(rho, spec.dt)
}

/// Measurement jump operators and their `c^dagger c` products, cached.
#[derive(Debug, Clone)]
pub struct MeasurementJumps {
    n_qubits: usize,
    /// `[c]` for one qubit, `[c_+, c_-]` for two.
    ops: Vec<Operator>,
    gram: Vec<Operator>,
}

impl MeasurementJumps {
    pub fn new(spec: &ModelSpec) -> Result<Self, ModelError> {
        let ops = match spec.n_qubits {
            1 => vec![measurement_jump(spec, 1)?],
            2 => vec![measurement_jump(spec, 1)?, measurement_jump(spec, -1)?],
            n => return Err(ModelError::QubitCount(n)),
        };
        let gram = ops.iter().map(|c| c.dagger() * *c).collect();
        Ok(Self {
            n_qubits: spec.n_qubits,
            ops,
            gram,
        })
    }

    fn slot(&self, eta: i8) -> usize {
        if self.n_qubits == 1 || eta > 0 {
            0
        } else {
            1
        }
    }

    /// Jump operator selected by the outcome's `eta`.
    pub fn jump(&self, outcome: Outcome) -> &Operator {
        &self.ops[self.slot(outcome.eta)]
    }

    /// `c^dagger c` for the outcome's `eta`.
    pub fn gram(&self, outcome: Outcome) -> &Operator {
        &self.gram[self.slot(outcome.eta)]
    }

    pub fn probabilities(&self, rho: &Operator, dt: f64) -> Result<ProbabilityTable, ModelError> {
        let mut entries = Vec::with_capacity(4);
        if self.n_qubits == 1 {
            let p1 = check_probability(dt * rho.trace_product(&self.gram[0]).re)?;
            entries.push((Outcome::NO_CLICK, check_probability(1.0 - p1)?));
            entries.push((Outcome::CLICK, p1));
        } else {
            let mut click = [0.0; 2];
            for (k, g) in self.gram.iter().enumerate() {
                click[k] = dt * rho.trace_product(g).re;
            }
            for &outcome in Outcome::all(2) {
                let a = click[self.slot(outcome.eta)];
                let p = if outcome.is_jump() {
                    0.5 * a
                } else {
                    0.5 * (1.0 - a)
                };
                entries.push((outcome, check_probability(p)?));
            }
        }
        Ok(ProbabilityTable { entries })
    }
}

/// First-order Kraus operators `A_0 = 1 - i dt H_0 - dt/2 c^dagger c`,
/// `A_1 = sqrt(dt) c` of the single-qubit protocol without error channels.
pub fn kraus_operators(
    spec: &ModelSpec,
    choice: &SteeringChoice,
) -> Result<[Operator; 2], ModelError> {
    let c = measurement_jump(spec, 1)?;
    let h0 = effective_hamiltonian(spec, choice);
    let id = Operator::identity(spec.dim())?;
    let a0 = id - h0.scale(C64::new(0.0, spec.dt)) - (c.dagger() * c).scale_re(0.5 * spec.dt);
    let a1 = c.scale_re(spec.dt.sqrt());
    Ok([a0, a1])
}

/// Largest entry of `sum_k A_k^dagger A_k - 1`.
pub fn kraus_completeness_residual(kraus: &[Operator]) -> f64 {
    let dim = kraus[0].dim();
    let mut acc = Operator::zeros(dim).unwrap();
    for a in kraus {
        acc += a.dagger() * *a;
    }
    (acc - Operator::identity(dim).unwrap()).max_abs()
}

/// Largest entry of `U^dagger U - 1`.
pub fn unitarity_residual(u: &Operator) -> f64 {
    (u.dagger() * *u - Operator::identity(u.dim()).unwrap()).max_abs()
}

/// Bell basis `[Phi_{0,+}, Phi_{0,-}, Phi_{1,+}, Phi_{1,-}]`.
pub fn bell_states() -> [StateVector; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        StateVector::from_real(&[s, 0.0, 0.0, s]).unwrap(),
        StateVector::from_real(&[s, 0.0, 0.0, -s]).unwrap(),
        StateVector::from_real(&[0.0, s, s, 0.0]).unwrap(),
        StateVector::from_real(&[0.0, s, -s, 0.0]).unwrap(),
    ]
}

/// Position of `Phi_{xi,eta}` in [`bell_states`].
pub fn bell_index(xi: u8, eta: i8) -> usize {
    2 * usize::from(xi) + usize::from(eta < 0)
}

/// Bell-measurement observables `(O^x, O^z) = (x_1 x_2, z_1 z_2)`.
pub fn bell_observables() -> (Operator, Operator) {
    (
        kron(&pauli::x(), &pauli::x()).unwrap(),
        kron(&pauli::z(), &pauli::z()).unwrap(),
    )
}

/// Every operator a trajectory needs, built once from a [`ModelSpec`].
#[derive(Debug, Clone)]
pub struct Model {
    spec: ModelSpec,
    jumps: MeasurementJumps,
    errors: Vec<Operator>,
    error_grams: Vec<Operator>,
    /// System Hamiltonian for every entry of the full steering menu, by flat index.
    hamiltonians: Vec<Operator>,
}

impl Model {
    pub fn new(spec: ModelSpec) -> Result<Self, ModelError> {
        spec.validate()?;
        let jumps = MeasurementJumps::new(&spec)?;
        let errors = error_jumps(&spec)?;
        let error_grams = errors.iter().map(|c| c.dagger() * *c).collect();
        let hamiltonians = steering_set(spec.n_qubits)
            .iter()
            .map(|choice| effective_hamiltonian(&spec, choice))
            .collect();
        Ok(Self {
            spec,
            jumps,
            errors,
            error_grams,
            hamiltonians,
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn n_qubits(&self) -> usize {
        self.spec.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn dt(&self) -> f64 {
        self.spec.dt
    }

    pub fn jumps(&self) -> &MeasurementJumps {
        &self.jumps
    }

    pub fn error_channels(&self) -> &[Operator] {
        &self.errors
    }

    /// `c_gamma^dagger c_gamma`, aligned with [`Model::error_channels`].
    pub fn error_grams(&self) -> &[Operator] {
        &self.error_grams
    }

    pub fn hamiltonian(&self, choice: &SteeringChoice) -> &Operator {
        &self.hamiltonians[choice.index()]
    }

    pub fn probabilities(&self, rho: &Operator) -> Result<ProbabilityTable, ModelError> {
        self.jumps.probabilities(rho, self.spec.dt)
    }
}
