//! Mode-by-mode checks of the defining relations, the screening commutant
//! and the ghost zero-mode algebra.

use std::fmt;
use std::str::FromStr;

use super::{AlgebraAction, Op, RepError, FAMILY_OFFSETS};
use crate::currents::{apply_mode, x_plus, x_plus_difference_form};
use crate::fock::{enumerate_basis_upto, BasisMonomial, FockVector, Sector};
use crate::qscalar::{qint, qint_half, UScalar};
use crate::report::{Failure, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
}

impl Relation {
    pub const ALL: [Relation; 7] =
        [Relation::R1, Relation::R2, Relation::R3, Relation::R4, Relation::R5, Relation::R6, Relation::R7];
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Relation {
    type Err = RepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL
            .iter()
            .copied()
            .find(|r| r.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| RepError::UnknownRelation(s.to_string()))
    }
}

fn q_pow(k: i32) -> UScalar {
    UScalar::u_pow(4 * k)
}

fn q_minus_qinv() -> UScalar {
    UScalar::u_pow(4) - UScalar::u_pow(-4)
}

/// Records a failure unless `residual` vanishes.
fn expect_zero(report: &mut VerificationReport, m: &BasisMonomial, modes: &[String], residual: &FockVector) {
    if !residual.is_zero() {
        report.fail(Failure::new(m.to_string()).modes(modes.to_vec()).residual(residual.render()));
    }
}

/// `lhs - rhs`.
fn diff(lhs: &FockVector, rhs: &FockVector) -> FockVector {
    lhs.sub(rhs)
}

fn nonzero_range(w: i32) -> impl Iterator<Item = i32> {
    (-w..=w).filter(|k| *k != 0)
}

/// Evaluates relation `rel` on every basis monomial of degree at most
/// `degree` in `sector`, for all modes in the window `[-window, window]`.
pub fn check_drinfeld(act: &AlgebraAction, rel: Relation, sector: Sector, degree: u32, window: u32) -> VerificationReport {
    let mut report = VerificationReport::new(rel.to_string())
        .with_sector(sector.l1x2, sector.l2)
        .with_degree(degree)
        .with_window(window);
    let w = window as i32;
    for m in enumerate_basis_upto(sector, degree) {
        let v = FockVector::basis(m.clone());
        match rel {
            Relation::R1 => {
                for (a, b) in [(Op::K, Op::KInv), (Op::KInv, Op::K), (Op::Qd, Op::QdInv), (Op::QdInv, Op::Qd)] {
                    expect_zero(&mut report, &m, &[format!("{a} {b}")], &diff(&act.apply_word(&[a, b], &v), &v));
                }
                let r = act.commutator(Op::K, Op::Qd, &UScalar::one(), &v);
                expect_zero(&mut report, &m, &["[K, q^d]".into()], &r);
            }
            Relation::R2 => {
                for k in nonzero_range(w) {
                    let lhs = act.apply_word(&[Op::Qd, Op::H(k), Op::QdInv], &v);
                    let rhs = act.apply(Op::H(k), &v).scale(&q_pow(k));
                    expect_zero(&mut report, &m, &[format!("h[{k}]")], &diff(&lhs, &rhs));
                }
                for k in -w..=w {
                    for (op, dl1x2, dl2) in [(Op::XPlus(k), 4, 2), (Op::XMinus(k), -4, -2)] {
                        let lhs = act.apply_word(&[Op::Qd, op, Op::QdInv], &v);
                        let out = act.apply(op, &v);
                        expect_zero(&mut report, &m, &[op.to_string()], &diff(&lhs, &out.scale(&q_pow(k))));
                        // grading and sector bookkeeping on the raw output
                        for (o, _) in out.iter() {
                            if o.dbar8() - m.dbar8() != 8 * k as i64 || o.sector != m.sector.shifted(dl1x2, dl2) {
                                report.fail(
                                    Failure::new(m.to_string())
                                        .modes(vec![op.to_string()])
                                        .message(format!("output {o} has the wrong grading or sector")),
                                );
                            }
                        }
                    }
                }
            }
            Relation::R3 => {
                for k in nonzero_range(w) {
                    let r = act.commutator(Op::H(k), Op::K, &UScalar::one(), &v);
                    expect_zero(&mut report, &m, &[format!("[h[{k}], K]")], &r);
                    for l in nonzero_range(w) {
                        let lhs = act.commutator(Op::H(k), Op::H(l), &UScalar::one(), &v);
                        let rhs = if k + l == 0 {
                            v.scale(&(qint(2 * k) * qint_half(-k)).mul_ref(&UScalar::from_ratio(1, k as i128)))
                        } else {
                            FockVector::zero()
                        };
                        expect_zero(&mut report, &m, &[format!("[h[{k}], h[{l}]]")], &diff(&lhs, &rhs));
                    }
                }
            }
            Relation::R4 => {
                for l in -w..=w {
                    for (sign, op) in [(1, Op::XPlus(l)), (-1, Op::XMinus(l))] {
                        let lhs = act.apply_word(&[Op::K, op, Op::KInv], &v);
                        let rhs = act.apply(op, &v).scale(&q_pow(2 * sign));
                        expect_zero(&mut report, &m, &[format!("K {op} K^-1")], &diff(&lhs, &rhs));
                        for k in nonzero_range(w) {
                            let lhs = act.commutator(Op::H(k), op, &UScalar::one(), &v);
                            let shifted = if sign > 0 { Op::XPlus(k + l) } else { Op::XMinus(k + l) };
                            let c = qint(2 * k)
                                .mul_ref(&UScalar::from_ratio(sign as i128, k as i128))
                                .mul_ref(&UScalar::u_pow(sign * k.abs()));
                            let rhs = act.apply(shifted, &v).scale(&c);
                            expect_zero(&mut report, &m, &[format!("[h[{k}], {op}]")], &diff(&lhs, &rhs));
                        }
                    }
                }
            }
            Relation::R5 | Relation::R6 => {
                let (x, c): (fn(i32) -> Op, UScalar) =
                    if rel == Relation::R6 { (Op::XPlus, q_pow(2)) } else { (Op::XMinus, q_pow(-2)) };
                for a in -w..=w {
                    for b in -w..=w {
                        // coefficient of z^{-a-1} w^{-b-1} in
                        // (z - c w) X(z) X(w) + (w - c z) X(w) X(z)
                        let mut r = act.apply_word(&[x(a + 1), x(b)], &v);
                        r.add_scaled(&act.apply_word(&[x(a), x(b + 1)], &v), &-c.clone());
                        r.add_scaled(&act.apply_word(&[x(b + 1), x(a)], &v), &UScalar::one());
                        r.add_scaled(&act.apply_word(&[x(b), x(a + 1)], &v), &-c.clone());
                        expect_zero(&mut report, &m, &[format!("m={a}"), format!("n={b}")], &r);
                    }
                }
            }
            Relation::R7 => {
                let norm = q_minus_qinv().inv().expect("nonzero");
                for a in -w..=w {
                    for b in -w..=w {
                        let lhs = act.commutator(Op::XPlus(a), Op::XMinus(b), &UScalar::one(), &v);
                        let mut rhs = act.apply(Op::Psi(a + b), &v).scale(&UScalar::u_pow(b - a));
                        rhs.add_scaled(&act.apply(Op::Phi(a + b), &v), &-UScalar::u_pow(a - b));
                        let rhs = rhs.scale(&norm);
                        expect_zero(&mut report, &m, &[format!("m={a}"), format!("n={b}")], &diff(&lhs, &rhs));
                    }
                }
            }
        }
    }
    report
}

/// Sectors of the four families at `l` in `{-2, 0, 2}`.
pub(crate) fn family_sectors() -> Vec<Sector> {
    let mut out = Vec::new();
    for (rx2, t) in FAMILY_OFFSETS {
        for l in [-2, 0, 2] {
            out.push(Sector::new(2 * l + rx2, l + t));
        }
    }
    out
}

/// `[x+-_k, Q^-] = [h_k, Q^-] = [K, Q^-] = 0` for `|k| <= kmax` on bases of
/// degree at most `degree` in every family sector, and `Q^- Q^- = 0` on
/// degree at most `degree + 1`.
pub fn check_screening(act: &AlgebraAction, kmax: u32, degree: u32) -> VerificationReport {
    check_screening_with(act, kmax, degree, &family_sectors())
}

pub fn check_screening_with(act: &AlgebraAction, kmax: u32, degree: u32, sectors: &[Sector]) -> VerificationReport {
    let mut report = VerificationReport::new("screening").with_degree(degree).with_window(kmax);
    let w = kmax as i32;
    for &sector in sectors {
        for m in enumerate_basis_upto(sector, degree) {
            let v = FockVector::basis(m.clone());
            let mut ops = vec![Op::K];
            for k in -w..=w {
                ops.push(Op::XPlus(k));
                ops.push(Op::XMinus(k));
                if k != 0 {
                    ops.push(Op::H(k));
                }
            }
            for op in ops {
                let r = act.commutator(op, Op::QMinus, &UScalar::one(), &v);
                expect_zero(&mut report, &m, &[format!("[{op}, Q-]")], &r);
            }
        }
        for m in enumerate_basis_upto(sector, degree + 1) {
            let v = FockVector::basis(m.clone());
            expect_zero(&mut report, &m, &["Q- Q-".into()], &act.apply_word(&[Op::QMinus, Op::QMinus], &v));
        }
    }
    report
}

/// `eta_0^2 = 0` and `xi_0 eta_0 + eta_0 xi_0 = 1` on bases of degree at most
/// `degree` in the highest-weight sectors and their neighbours.
pub fn clifford_check(act: &AlgebraAction, degree: u32) -> VerificationReport {
    let mut report = VerificationReport::new("clifford").with_degree(degree);
    let sectors = [
        Sector::new(0, 0),
        Sector::new(0, 1),
        Sector::new(0, -1),
        Sector::new(2, 1),
        Sector::new(-1, 0),
        Sector::new(1, 1),
        Sector::new(-3, -1),
    ];
    for sector in sectors {
        for m in enumerate_basis_upto(sector, degree) {
            let v = FockVector::basis(m.clone());
            let sq = act.apply_word(&[Op::Eta(0), Op::Eta(0)], &v);
            expect_zero(&mut report, &m, &["eta0 eta0".into()], &sq);
            let mut anti = act.apply_word(&[Op::Xi(0), Op::Eta(0)], &v);
            anti.add_scaled(&act.apply_word(&[Op::Eta(0), Op::Xi(0)], &v), &UScalar::one());
            expect_zero(&mut report, &m, &["xi0 eta0 + eta0 xi0 - 1".into()], &diff(&anti, &v));
        }
    }
    report
}

/// The difference-operator and three-term builders of `X^+` agree mode by
/// mode on the highest-weight sectors up to `degree`, `|k| <= window`.
pub fn check_xplus_forms(degree: u32, window: u32) -> VerificationReport {
    let mut report = VerificationReport::new("X+ forms").with_degree(degree).with_window(window);
    let (a, b) = (x_plus(), x_plus_difference_form());
    let w = window as i32;
    for (rx2, t) in FAMILY_OFFSETS {
        for m in enumerate_basis_upto(Sector::new(rx2, t), degree) {
            let v = FockVector::basis(m.clone());
            for k in -w..=w {
                let lhs = apply_mode(&a, -4 * k - 4, &v, u32::MAX).expect("integral scales");
                let rhs = apply_mode(&b, -4 * k - 4, &v, u32::MAX).expect("integral scales");
                expect_zero(&mut report, &m, &[format!("x+[{k}]")], &diff(&lhs, &rhs));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_names() {
        assert_eq!("r6".parse::<Relation>().unwrap(), Relation::R6);
        assert!("R8".parse::<Relation>().is_err());
    }

    #[test]
    fn r7_on_vacuum_smallest_window() {
        let act = AlgebraAction::default();
        let r = check_drinfeld(&act, Relation::R7, Sector::new(0, 0), 0, 1);
        assert!(r.passed(), "{}", r.to_json_line());
    }

    #[test]
    fn r3_and_r1_pass() {
        let act = AlgebraAction::default();
        for rel in [Relation::R1, Relation::R3] {
            let r = check_drinfeld(&act, rel, Sector::new(1, 0), 2, 2);
            assert!(r.passed(), "{}", r.to_json_line());
        }
    }

    #[test]
    fn ghost_anticommutator_on_vacuum() {
        let act = AlgebraAction::default();
        let r = clifford_check(&act, 1);
        assert!(r.passed(), "{}", r.to_json_line());
    }
}
