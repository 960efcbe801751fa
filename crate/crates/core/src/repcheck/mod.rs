//! The level `-1/2` action on Fock space and checks of its defining relations,
//! the screening commutant, ghost zero modes, kernels and characters.

mod kernel;
pub mod linalg;
mod relations;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::currents::{apply_mode, generator, phi, psi, screening_current, x_minus, x_plus, CurrentExpr, Generator, Scale};
use crate::fock::{apply_oscillator, BasisMonomial, FockVector, Osc, Sector};
use crate::qscalar::UScalar;

pub use kernel::{
    exact_sequence_dimension, hw_vector, hw_verify, hw_weight, kernel_character, kernel_dimension, qminus_matrix, rank_of,
    sector_of_family, KernelCharacter, FAMILY_OFFSETS,
};
pub use relations::{check_drinfeld, check_screening, check_screening_with, check_xplus_forms, clifford_check, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error("family index {0} out of range 1..=4")]
    BadFamily(u32),
}

/// Operators of the algebra (and a few auxiliary ones) acting on Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Op {
    K,
    KInv,
    /// `q^d`, with the grading shifted by `-1/8` on half-integer `l1`.
    Qd,
    QdInv,
    H(i32),
    XPlus(i32),
    XMinus(i32),
    Psi(i32),
    Phi(i32),
    /// `Q^- = eta_0`.
    QMinus,
    /// `xi_n`: coefficient of `z^-n` in `Yb+(z)`.
    Xi(i32),
    /// `eta_n`: coefficient of `z^{-n-1}` in `Yb-(z)`.
    Eta(i32),
    E0,
    E1,
    F0,
    F1,
    T0,
    T1,
    /// Coefficient of `z^{n4/4}` of a registered current expression.
    Mode(usize, i32),
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::K => write!(f, "K"),
            Op::KInv => write!(f, "K^-1"),
            Op::Qd => write!(f, "q^d"),
            Op::QdInv => write!(f, "q^-d"),
            Op::H(k) => write!(f, "h[{k}]"),
            Op::XPlus(k) => write!(f, "x+[{k}]"),
            Op::XMinus(k) => write!(f, "x-[{k}]"),
            Op::Psi(k) => write!(f, "psi[{k}]"),
            Op::Phi(k) => write!(f, "phi[{k}]"),
            Op::QMinus => write!(f, "Q-"),
            Op::Xi(n) => write!(f, "xi[{n}]"),
            Op::Eta(n) => write!(f, "eta[{n}]"),
            Op::E0 => write!(f, "e0"),
            Op::E1 => write!(f, "e1"),
            Op::F0 => write!(f, "f0"),
            Op::F1 => write!(f, "f1"),
            Op::T0 => write!(f, "t0"),
            Op::T1 => write!(f, "t1"),
            Op::Mode(id, n4) => write!(f, "mode{id}[{}]", crate::currents::fmt_quarter(*n4)),
        }
    }
}

/// `q^{a0}` eigenvalue `u^{2 l1x2}`.
pub fn k_eigenvalue(s: Sector) -> UScalar {
    UScalar::u_pow(2 * s.l1x2)
}

/// `q^{dbar}` eigenvalue as a power of `u`, with the grading on the
/// half-integer `l1` sectors shifted by `-1/8` so that it lies in the field.
pub fn qd_exponent(m: &BasisMonomial) -> i32 {
    let d8 = m.dbar8();
    (d8 - d8.rem_euclid(2)) as i32 / 2
}

/// `gamma^{1/2}`.
pub fn gamma_half() -> UScalar {
    UScalar::u_pow(-1)
}

/// `gamma`.
pub fn gamma() -> UScalar {
    UScalar::u_pow(-2)
}

type Memo = Mutex<HashMap<(Op, BasisMonomial), Arc<FockVector>>>;

/// Operator table of the representation, memoized per basis monomial.
pub struct AlgebraAction {
    currents: Vec<CurrentExpr>,
    memo: Memo,
}

const X_PLUS: usize = 0;
const X_MINUS: usize = 1;
const PSI: usize = 2;
const PHI: usize = 3;
const SCREENING: usize = 4;
const XI: usize = 5;

impl Default for AlgebraAction {
    fn default() -> Self {
        Self::new(x_plus(), x_minus(), screening_current())
    }
}

impl AlgebraAction {
    pub fn new(x_plus: CurrentExpr, x_minus: CurrentExpr, screening: CurrentExpr) -> Self {
        AlgebraAction {
            currents: vec![x_plus, x_minus, psi(), phi(), screening, generator(Generator::YbPlus, Scale::ONE)],
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// Registers an extra current; its modes are `Op::Mode(id, n4)`.
    pub fn register(&mut self, e: CurrentExpr) -> usize {
        self.currents.push(e);
        self.currents.len() - 1
    }

    pub fn current(&self, id: usize) -> &CurrentExpr {
        &self.currents[id]
    }

    fn mode_of(&self, id: usize, n4: i32, m: &BasisMonomial) -> Arc<FockVector> {
        let key = (Op::Mode(id, n4), m.clone());
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = Arc::new(
            apply_mode(&self.currents[id], n4, &FockVector::basis(m.clone()), u32::MAX)
                .expect("all scales in the operator table are integral"),
        );
        self.memo.lock().unwrap().insert(key, v.clone());
        v
    }

    fn mode(&self, id: usize, n4: i32, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in v.iter() {
            out.add_scaled(&self.mode_of(id, n4, m), c);
        }
        out
    }

    fn diagonal(v: &FockVector, f: impl Fn(&BasisMonomial) -> UScalar) -> FockVector {
        v.iter().map(|(m, c)| (m.clone(), c.mul_ref(&f(m)))).collect()
    }

    pub fn apply(&self, op: Op, v: &FockVector) -> FockVector {
        match op {
            Op::K | Op::T1 => Self::diagonal(v, |m| k_eigenvalue(m.sector)),
            Op::KInv => Self::diagonal(v, |m| UScalar::u_pow(-2 * m.sector.l1x2)),
            Op::Qd => Self::diagonal(v, |m| UScalar::u_pow(qd_exponent(m))),
            Op::QdInv => Self::diagonal(v, |m| UScalar::u_pow(-qd_exponent(m))),
            Op::T0 => Self::diagonal(v, |m| UScalar::u_pow(-2 - 2 * m.sector.l1x2)),
            Op::H(0) => FockVector::zero(),
            Op::H(k) => apply_oscillator(Osc::A, k, v),
            Op::XPlus(k) => self.mode(X_PLUS, -4 * k - 4, v),
            Op::XMinus(k) => self.mode(X_MINUS, -4 * k - 4, v),
            Op::Psi(k) => self.mode(PSI, -4 * k, v),
            Op::Phi(k) => self.mode(PHI, -4 * k, v),
            Op::QMinus => self.mode(SCREENING, -4, v),
            Op::Xi(n) => self.mode(XI, -4 * n, v),
            Op::Eta(n) => self.mode(SCREENING, -4 * n - 4, v),
            Op::E1 => self.apply(Op::XPlus(0), v),
            Op::F1 => self.apply(Op::XMinus(0), v),
            Op::E0 => self.apply(Op::XMinus(1), &self.apply(Op::KInv, v)),
            Op::F0 => self.apply(Op::K, &self.apply(Op::XPlus(-1), v)),
            Op::Mode(id, n4) => self.mode(id, n4, v),
        }
    }

    /// Applies `ops` right to left (`ops = [A, B]` gives `A B v`).
    pub fn apply_word(&self, ops: &[Op], v: &FockVector) -> FockVector {
        ops.iter().rev().fold(v.clone(), |acc, op| self.apply(*op, &acc))
    }

    /// `A B v - c B A v`.
    pub fn commutator(&self, a: Op, b: Op, c: &UScalar, v: &FockVector) -> FockVector {
        let ab = self.apply_word(&[a, b], v);
        let ba = self.apply_word(&[b, a], v);
        let mut out = ab;
        out.add_scaled(&ba, &-c.clone());
        out
    }

    pub fn clear_cache(&self) {
        self.memo.lock().unwrap().clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vac(l1x2: i32, l2: i32) -> FockVector {
        FockVector::vacuum(Sector::new(l1x2, l2))
    }

    #[test]
    fn ghost_modes_on_vacuum() {
        let act = AlgebraAction::default();
        assert_eq!(act.apply(Op::Xi(0), &vac(0, 0)), vac(0, 1));
        assert_eq!(act.apply(Op::QMinus, &vac(0, 1)), vac(0, 0));
        assert!(act.apply(Op::QMinus, &vac(0, 0)).is_zero());
    }

    #[test]
    fn e1_kills_vacuum() {
        let act = AlgebraAction::default();
        assert!(act.apply(Op::E1, &vac(0, 0)).is_zero());
    }
}
