// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra for one- and two-qubit Hilbert spaces.
//!
//! Everything here lives in fixed inline storage sized for four dimensions,
//! so operators and states are `Copy` and never touch the heap. The active
//! dimension is either 2 or 4.
//!
//! Tensor ordering: `kron(a, b)` places qubit 1 in the most significant slot,
//! so the two-qubit basis is `|00>, |01>, |10>, |11>` with the first label
//! belonging to qubit 1. Every two-qubit operator in the crate is built
//! through [`kron`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Slack for algebraic identities.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Slack for density-matrix traces.
pub const TRACE_TOL: f64 = 1e-10;
/// Slack for density-matrix eigenvalues.
pub const EIGEN_TOL: f64 = 1e-9;

const STRIDE: usize = 4;
const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("unsupported dimension {0} (expected 2 or 4)")]
    UnsupportedDim(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("expectation value has imaginary residue {0:e}; operator is not Hermitian")]
    NonHermitian(f64),
    #[error("cannot normalize a zero vector")]
    ZeroNorm,
    #[error("expected {expected} entries, got {got}")]
    BadLength { expected: usize, got: usize },
}

fn check_dim(dim: usize) -> Result<(), LinalgError> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(LinalgError::UnsupportedDim(d)),
    }
}

fn same_dim(left: usize, right: usize) -> Result<(), LinalgError> {
    if left == right {
        Ok(())
    } else {
        Err(LinalgError::DimMismatch { left, right })
    }
}

/// Pure state amplitudes.
#[derive(Clone, Copy, PartialEq)]
pub struct StateVector {
    dim: usize,
    amps: [C64; STRIDE],
}

impl StateVector {
    pub fn new(amps: &[C64]) -> Result<Self, LinalgError> {
        check_dim(amps.len())?;
        let mut out = [ZERO; STRIDE];
        out[..amps.len()].copy_from_slice(amps);
        Ok(Self {
            dim: amps.len(),
            amps: out,
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self, LinalgError> {
        let c: Vec<C64> = amps.iter().map(|&a| C64::new(a, 0.0)).collect();
        Self::new(&c)
    }

    /// Computational basis state `|k>`.
    pub fn basis(dim: usize, k: usize) -> Result<Self, LinalgError> {
        check_dim(dim)?;
        if k >= dim {
            return Err(LinalgError::BadLength {
                expected: dim,
                got: k + 1,
            });
        }
        let mut amps = [ZERO; STRIDE];
        amps[k] = ONE;
        Ok(Self { dim, amps })
    }

    pub fn zeros(dim: usize) -> Result<Self, LinalgError> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            amps: [ZERO; STRIDE],
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amps[..self.dim]
    }

    #[inline]
    pub fn amplitude(&self, k: usize) -> C64 {
        self.amps[k]
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> C64 {
        debug_assert_eq!(self.dim, other.dim);
        self.amplitudes()
            .iter()
            .zip(other.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Rescales to unit norm and returns the norm before rescaling.
    pub fn normalize(&mut self) -> Result<f64, LinalgError> {
        let n = self.norm_sqr().sqrt();
        if n <= 0.0 || !n.is_finite() {
            return Err(LinalgError::ZeroNorm);
        }
        let inv = 1.0 / n;
        for a in &mut self.amps[..self.dim] {
            *a *= inv;
        }
        Ok(n)
    }

    pub fn normalized(mut self) -> Result<Self, LinalgError> {
        self.normalize()?;
        Ok(self)
    }

    pub fn scale(&self, s: C64) -> StateVector {
        let mut out = *self;
        for a in &mut out.amps[..self.dim] {
            *a *= s;
        }
        out
    }

    /// `self += s * x`
    #[inline]
    pub fn axpy(&mut self, s: C64, x: &StateVector) {
        debug_assert_eq!(self.dim, x.dim);
        for k in 0..self.dim {
            self.amps[k] += s * x.amps[k];
        }
    }

    pub fn kron(&self, other: &StateVector) -> Result<StateVector, LinalgError> {
        same_dim(self.dim, 2)?;
        same_dim(other.dim, 2)?;
        let mut amps = [ZERO; STRIDE];
        for i in 0..2 {
            for j in 0..2 {
                amps[2 * i + j] = self.amps[i] * other.amps[j];
            }
        }
        Ok(StateVector { dim: 4, amps })
    }

    /// `|self><self|`
    pub fn projector(&self) -> Operator {
        outer(self, self)
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.amplitudes()).finish()
    }
}

impl Add for StateVector {
    type Output = StateVector;
    fn add(mut self, rhs: StateVector) -> StateVector {
        assert_eq!(self.dim, rhs.dim, "state dimension mismatch");
        for k in 0..self.dim {
            self.amps[k] += rhs.amps[k];
        }
        self
    }
}

impl Sub for StateVector {
    type Output = StateVector;
    fn sub(mut self, rhs: StateVector) -> StateVector {
        assert_eq!(self.dim, rhs.dim, "state dimension mismatch");
        for k in 0..self.dim {
            self.amps[k] -= rhs.amps[k];
        }
        self
    }
}

/// Square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Operator {
    dim: usize,
    m: [C64; STRIDE * STRIDE],
}

impl Operator {
    pub fn zeros(dim: usize) -> Result<Self, LinalgError> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            m: [ZERO; STRIDE * STRIDE],
        })
    }

    pub fn identity(dim: usize) -> Result<Self, LinalgError> {
        let mut out = Self::zeros(dim)?;
        for k in 0..dim {
            out.m[k * STRIDE + k] = ONE;
        }
        Ok(out)
    }

    /// Builds from row-major entries; `entries.len()` must be 4 or 16.
    pub fn from_rows(entries: &[C64]) -> Result<Self, LinalgError> {
        let dim = match entries.len() {
            4 => 2,
            16 => 4,
            n => {
                return Err(LinalgError::BadLength {
                    expected: 16,
                    got: n,
                })
            }
        };
        let mut out = Self::zeros(dim)?;
        for r in 0..dim {
            for c in 0..dim {
                out.m[r * STRIDE + c] = entries[r * dim + c];
            }
        }
        Ok(out)
    }

    pub fn diag(entries: &[C64]) -> Result<Self, LinalgError> {
        let mut out = Self::zeros(entries.len())?;
        for (k, &e) in entries.iter().enumerate() {
            out.m[k * STRIDE + k] = e;
        }
        Ok(out)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.m[r * STRIDE + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.m[r * STRIDE + c] = v;
    }

    pub fn dagger(&self) -> Operator {
        let mut out = *self;
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.m[r * STRIDE + c] = self.m[c * STRIDE + r].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self.m[k * STRIDE + k]).sum()
    }

    pub fn scale(&self, s: C64) -> Operator {
        let mut out = *self;
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.m[r * STRIDE + c] *= s;
            }
        }
        out
    }

    pub fn scale_re(&self, s: f64) -> Operator {
        self.scale(C64::new(s, 0.0))
    }

    pub fn checked_add(&self, other: &Operator) -> Result<Operator, LinalgError> {
        same_dim(self.dim, other.dim)?;
        Ok(*self + *other)
    }

    pub fn checked_mul(&self, other: &Operator) -> Result<Operator, LinalgError> {
        same_dim(self.dim, other.dim)?;
        Ok(*self * *other)
    }

    pub fn checked_apply(&self, psi: &StateVector) -> Result<StateVector, LinalgError> {
        same_dim(self.dim, psi.dim)?;
        Ok(self.apply(psi))
    }

    #[inline]
    pub fn apply(&self, psi: &StateVector) -> StateVector {
        debug_assert_eq!(self.dim, psi.dim);
        let mut amps = [ZERO; STRIDE];
        for (r, out) in amps.iter_mut().enumerate().take(self.dim) {
            let row = &self.m[r * STRIDE..r * STRIDE + self.dim];
            *out = row.iter().zip(psi.amplitudes()).map(|(a, b)| a * b).sum();
        }
        StateVector {
            dim: self.dim,
            amps,
        }
    }

    /// `<psi|A|psi>` for a (not necessarily Hermitian) operator.
    #[inline]
    pub fn expect_state(&self, psi: &StateVector) -> C64 {
        psi.inner(&self.apply(psi))
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Operator) -> C64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = ZERO;
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += self.m[r * STRIDE + c] * other.m[c * STRIDE + r];
            }
        }
        acc
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Operator) -> Operator {
        *self * *other + *other * *self
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += self.m[r * STRIDE + c].norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Largest absolute entry -- the distance measure used for identities.
    pub fn max_abs(&self) -> f64 {
        let mut acc: f64 = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc = acc.max(self.m[r * STRIDE + c].norm());
            }
        }
        acc
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.dagger()).max_abs() <= tol
    }

    /// Symmetrizes `(A + A^dagger) / 2`.
    pub fn hermitian_part(&self) -> Operator {
        (*self + self.dagger()).scale_re(0.5)
    }

    pub fn approx_eq(&self, other: &Operator, tol: f64) -> bool {
        self.dim == other.dim && (*self - *other).max_abs() <= tol
    }

    /// Eigenvalues of a Hermitian operator in ascending order.
    pub fn eigvals_hermitian(&self) -> Result<Vec<f64>, LinalgError> {
        if !self.is_hermitian(1e-9) {
            return Err(LinalgError::NonHermitian((*self - self.dagger()).max_abs()));
        }
        let mut vals = if self.dim == 2 {
            let a = self.get(0, 0).re;
            let d = self.get(1, 1).re;
            let b = self.get(0, 1);
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean - half_gap, mean + half_gap]
        } else {
            let h = self.hermitian_part();
            let mat = DMatrix::from_fn(self.dim, self.dim, |r, c| h.get(r, c));
            mat.symmetric_eigenvalues().iter().copied().collect()
        };
        vals.sort_by(f64::total_cmp);
        Ok(vals)
    }

    pub fn min_eigval(&self) -> Result<f64, LinalgError> {
        Ok(self.eigvals_hermitian()?[0])
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<C64>> = (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c)).collect())
            .collect();
        f.debug_struct("Operator")
            .field("dim", &self.dim)
            .field("rows", &rows)
            .finish()
    }
}

impl Add for Operator {
    type Output = Operator;
    #[inline]
    fn add(mut self, rhs: Operator) -> Operator {
        self += rhs;
        self
    }
}

impl AddAssign for Operator {
    #[inline]
    fn add_assign(&mut self, rhs: Operator) {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        for r in 0..self.dim {
            for c in 0..self.dim {
                self.m[r * STRIDE + c] += rhs.m[r * STRIDE + c];
            }
        }
    }
}

impl Sub for Operator {
    type Output = Operator;
    #[inline]
    fn sub(mut self, rhs: Operator) -> Operator {
        self -= rhs;
        self
    }
}

impl SubAssign for Operator {
    #[inline]
    fn sub_assign(&mut self, rhs: Operator) {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        for r in 0..self.dim {
            for c in 0..self.dim {
                self.m[r * STRIDE + c] -= rhs.m[r * STRIDE + c];
            }
        }
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_re(-1.0)
    }
}

impl Mul for Operator {
    type Output = Operator;
    #[inline]
    fn mul(self, rhs: Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let n = self.dim;
        let mut out = Operator {
            dim: n,
            m: [ZERO; STRIDE * STRIDE],
        };
        for r in 0..n {
            for k in 0..n {
                let a = self.m[r * STRIDE + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.m[r * STRIDE + c] += a * rhs.m[k * STRIDE + c];
                }
            }
        }
        out
    }
}

/// Tensor product of two single-qubit operators (qubit 1 first).
pub fn kron(a: &Operator, b: &Operator) -> Result<Operator, LinalgError> {
    same_dim(a.dim, 2)?;
    same_dim(b.dim, 2)?;
    let mut out = Operator::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            let aij = a.get(i, j);
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// `|ket><bra|`
pub fn outer(ket: &StateVector, bra: &StateVector) -> Operator {
    assert_eq!(ket.dim, bra.dim, "state dimension mismatch");
    let mut out = Operator {
        dim: ket.dim,
        m: [ZERO; STRIDE * STRIDE],
    };
    for r in 0..ket.dim {
        for c in 0..ket.dim {
            out.m[r * STRIDE + c] = ket.amps[r] * bra.amps[c].conj();
        }
    }
    out
}

/// `Tr(rho a)` for Hermitian `a`; rejects imaginary residues above 1e-10.
pub fn herm_expect(rho: &Operator, a: &Operator) -> Result<f64, LinalgError> {
    same_dim(rho.dim, a.dim)?;
    let v = rho.trace_product(a);
    if v.im.abs() > TRACE_TOL {
        return Err(LinalgError::NonHermitian(v.im.abs()));
    }
    Ok(v.re)
}

/// Single-qubit Pauli matrices and ladder operators, `sigma_z |0> = |0>`.
pub mod pauli {
    use super::{Operator, C64, I, ONE, ZERO};

    pub fn identity() -> Operator {
        Operator::from_rows(&[ONE, ZERO, ZERO, ONE]).unwrap()
    }

    pub fn x() -> Operator {
        Operator::from_rows(&[ZERO, ONE, ONE, ZERO]).unwrap()
    }

    pub fn y() -> Operator {
        Operator::from_rows(&[ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn z() -> Operator {
        Operator::from_rows(&[ONE, ZERO, ZERO, -ONE]).unwrap()
    }

    /// `(sigma_x - i sigma_y) / 2`, maps `|0>` to `|1>`.
    pub fn minus() -> Operator {
        (x() - y().scale(I)).scale(C64::new(0.5, 0.0))
    }

    pub fn plus() -> Operator {
        minus().dagger()
    }

    /// `[x, y, z]`
    pub fn xyz() -> [Operator; 3] {
        [x(), y(), z()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_identities() {
        let i4 = kron(&pauli::identity(), &pauli::identity()).unwrap();
        assert!(i4.approx_eq(&Operator::identity(4).unwrap(), 0.0));
        let zi = kron(&pauli::z(), &pauli::identity()).unwrap();
        let expected = Operator::diag(&[ONE, ONE, -ONE, -ONE]).unwrap();
        assert!(zi.approx_eq(&expected, 0.0));
    }

    #[test]
    fn kron_xx_fixes_bell_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_real(&[s, 0.0, 0.0, s]).unwrap();
        let xx = kron(&pauli::x(), &pauli::x()).unwrap();
        let out = xx.apply(&bell);
        assert!((out - bell).norm_sqr() < 1e-24);
    }

    #[test]
    fn kron_rejects_four_dim_inputs() {
        let i4 = Operator::identity(4).unwrap();
        assert!(matches!(
            kron(&i4, &pauli::x()),
            Err(LinalgError::DimMismatch { .. })
        ));
    }

    #[test]
    fn herm_expect_examples() {
        let zero = StateVector::basis(2, 0).unwrap().projector();
        assert_eq!(herm_expect(&zero, &pauli::z()).unwrap(), 1.0);
        let mixed = pauli::identity().scale_re(0.5);
        assert_eq!(herm_expect(&mixed, &pauli::z()).unwrap(), 0.0);
        let plus = StateVector::from_real(&[1.0, 1.0])
            .unwrap()
            .normalized()
            .unwrap();
        let v = herm_expect(&plus.projector(), &pauli::x()).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn herm_expect_flags_non_hermitian() {
        let rho = StateVector::new(&[ONE, I])
            .unwrap()
            .normalized()
            .unwrap()
            .projector();
        let a = pauli::y().scale(I); // anti-Hermitian, <a> = i
        assert!(matches!(
            herm_expect(&rho, &a),
            Err(LinalgError::NonHermitian(_))
        ));
        assert!(herm_expect(&rho, &Operator::identity(4).unwrap()).is_err());
    }

    #[test]
    fn trace_dagger_eigs() {
        assert_eq!(Operator::identity(4).unwrap().trace(), c(4.0, 0.0));
        let a =
            Operator::from_rows(&[c(1.0, 2.0), c(0.5, -1.0), c(3.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(a.dagger().dagger(), a);
        assert_eq!(pauli::z().eigvals_hermitian().unwrap(), vec![-1.0, 1.0]);
        let zz =
            kron(&pauli::z(), &pauli::x()).unwrap() + Operator::identity(4).unwrap().scale_re(0.5);
        let ev = zz.eigvals_hermitian().unwrap();
        for (got, want) in ev.iter().zip([-0.5, -0.5, 1.5, 1.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn ladder_operator_convention() {
        let zero = StateVector::basis(2, 0).unwrap();
        let one = StateVector::basis(2, 1).unwrap();
        let out = pauli::minus().apply(&zero);
        assert!((out - one).norm_sqr() < 1e-30);
        assert!(pauli::minus().apply(&one).norm_sqr() < 1e-30);
    }

    #[test]
    fn unsupported_dims() {
        assert!(matches!(
            Operator::zeros(3),
            Err(LinalgError::UnsupportedDim(3))
        ));
        assert!(StateVector::new(&[ONE; 3]).is_err());
        assert!(StateVector::zeros(2).unwrap().normalize().is_err());
    }

    fn arb_c64() -> impl Strategy<Value = C64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C64::new(a, b))
    }

    fn arb_hermitian2() -> impl Strategy<Value = Operator> {
        proptest::collection::vec(arb_c64(), 4)
            .prop_map(|v| Operator::from_rows(&v).unwrap().hermitian_part())
    }

    fn arb_op4() -> impl Strategy<Value = Operator> {
        proptest::collection::vec(arb_c64(), 16).prop_map(|v| Operator::from_rows(&v).unwrap())
    }

    proptest! {
        #[test]
        fn kron_mixed_product(a in arb_hermitian2(), b in arb_hermitian2(),
                              c in arb_hermitian2(), d in arb_hermitian2()) {
            let lhs = kron(&a, &b).unwrap() * kron(&c, &d).unwrap();
            let rhs = kron(&(a * c), &(b * d)).unwrap();
            prop_assert!(lhs.approx_eq(&rhs, ALGEBRA_TOL));
        }

        #[test]
        fn trace_is_cyclic(a in arb_op4(), b in arb_op4()) {
            let ab = (a * b).trace();
            let ba = (b * a).trace();
            prop_assert!((ab - ba).norm() <= ALGEBRA_TOL);
            prop_assert!((a.trace_product(&b) - ab).norm() <= ALGEBRA_TOL);
        }

        #[test]
        fn hermitian_eigs_sum_to_trace(a in arb_op4()) {
            let h = a.hermitian_part();
            let ev = h.eigvals_hermitian().unwrap();
            let sum: f64 = ev.iter().sum();
            prop_assert!((sum - h.trace().re).abs() < 1e-10);
        }
    }
}
