//! Intertwining relations with the Chevalley generators, the reduced
//! current-level conditions, screening anticommutation and normalization.

use std::fmt;
use std::str::FromStr;

use super::{Component, VertexPair, VertexSystem, VoError, VoType};
use crate::fock::{enumerate_basis_upto, BasisMonomial, FockVector};
use crate::qscalar::UScalar;
use crate::repcheck::{hw_vector, sector_of_family, Op};
use crate::report::{Failure, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
    V8,
    V9,
    V10,
    /// Commutation of the direct component with a whole current.
    A,
    /// Ratio of the two q-commutators of the direct component with a current.
    B,
}

impl Condition {
    pub const ALL: [Condition; 12] = [
        Condition::V1,
        Condition::V2,
        Condition::V3,
        Condition::V4,
        Condition::V5,
        Condition::V6,
        Condition::V7,
        Condition::V8,
        Condition::V9,
        Condition::V10,
        Condition::A,
        Condition::B,
    ];
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::A => write!(f, "(A)"),
            Condition::B => write!(f, "(B)"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl FromStr for Condition {
    type Err = VoError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        Condition::ALL
            .iter()
            .copied()
            .find(|c| c.to_string().trim_start_matches('(').trim_end_matches(')').eq_ignore_ascii_case(t))
            .ok_or_else(|| VoError::BadCondition(s.to_string()))
    }
}

/// A letter of an operator word: a vertex-operator mode or an algebra element.
#[derive(Debug, Clone, Copy)]
enum W {
    Phi(Component, i32),
    Alg(Op),
}

type Combination = Vec<(UScalar, Vec<W>)>;

fn q(e: i32) -> UScalar {
    UScalar::u_pow(4 * e)
}

fn qq(e4: i32) -> UScalar {
    UScalar::u_pow(e4)
}

impl VertexSystem {
    fn eval(&self, pair: VertexPair, comb: &Combination, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (c, word) in comb {
            let mut acc = v.clone();
            for w in word.iter().rev() {
                acc = match *w {
                    W::Phi(comp, n4) => self.component(pair, comp, n4, &acc),
                    W::Alg(op) => self.action().apply(op, &acc),
                };
                if acc.is_zero() {
                    break;
                }
            }
            out.add_scaled(&acc, c);
        }
        out
    }
}

/// `X g - c g X` for a vertex-operator mode `X`.
fn qcomm(x: W, g: Op, c: UScalar) -> Combination {
    vec![(UScalar::one(), vec![x, W::Alg(g)]), (-c, vec![W::Alg(g), x])]
}

fn term(c: UScalar, word: Vec<W>) -> Combination {
    vec![(c, word)]
}

fn join(parts: Vec<Combination>) -> Combination {
    parts.into_iter().flatten().collect()
}

/// Residual combinations of `cond` at vertex-operator exponent `n4` and
/// current modes `k` in `-window..=window`, each with a mode label.
fn combinations(ty: VoType, cond: Condition, n4: i32, window: i32) -> Vec<(String, Combination)> {
    use Component::{Minus, Plus};
    use Condition::*;
    let p = |n| W::Phi(Plus, n);
    let m = |n| W::Phi(Minus, n);
    let one = UScalar::one;
    let label = format!("z^{}", crate::currents::fmt_quarter(n4));
    let single = |c: Combination| vec![(label.clone(), c)];
    match (ty, cond) {
        // t Phi_+- t^-1 = q^(-+1) Phi_+-, written as t Phi - q^(-+1) Phi t
        (_, V1 | V2) => {
            let t = if cond == V1 { Op::T1 } else { Op::T0 };
            let s = if cond == V1 { -1 } else { 1 };
            [Plus, Minus]
                .into_iter()
                .map(|c| {
                    let x = W::Phi(c, n4);
                    let comb = vec![(one(), vec![W::Alg(t), x]), (-q(s * c.sign()), vec![x, W::Alg(t)])];
                    (format!("{label} {c}"), comb)
                })
                .collect()
        }
        (VoType::I, V3) => single(qcomm(p(n4), Op::E0, one())),
        (VoType::I, V4) => single(join(vec![qcomm(m(n4), Op::E0, one()), term(-one(), vec![W::Alg(Op::T0), p(n4 - 4)])])),
        (VoType::I, V5) => single(join(vec![qcomm(p(n4), Op::E1, one()), term(-one(), vec![W::Alg(Op::T1), m(n4)])])),
        (VoType::I, V6) => single(qcomm(m(n4), Op::E1, one())),
        (VoType::I, V7) => single(join(vec![qcomm(p(n4), Op::F0, q(1)), term(-one(), vec![m(n4 + 4)])])),
        (VoType::I, V8) => single(qcomm(m(n4), Op::F0, q(-1))),
        (VoType::I, V9) => single(join(vec![qcomm(m(n4), Op::F1, q(1)), term(-one(), vec![p(n4)])])),
        (VoType::I, V10) => single(qcomm(p(n4), Op::F1, q(-1))),
        (VoType::II, V3) => single(qcomm(p(n4), Op::E0, q(-1))),
        (VoType::II, V4) => single(join(vec![qcomm(m(n4), Op::E0, q(1)), term(-one(), vec![p(n4 - 4)])])),
        (VoType::II, V5) => single(join(vec![qcomm(p(n4), Op::E1, q(1)), term(-one(), vec![m(n4)])])),
        (VoType::II, V6) => single(qcomm(m(n4), Op::E1, q(-1))),
        // t0 [Phi_+, f0] = Phi_-(z) z^-1
        (VoType::II, V7) => {
            let c = qcomm(p(n4), Op::F0, one()).into_iter().map(|(c, mut w)| {
                w.insert(0, W::Alg(Op::T0));
                (c, w)
            });
            single(join(vec![c.collect(), term(-one(), vec![m(n4 + 4)])]))
        }
        (VoType::II, V8) => single(qcomm(m(n4), Op::F0, one())),
        (VoType::II, V9) => single(qcomm(p(n4), Op::F1, one())),
        // t1 [Phi_-, f1] = Phi_+
        (VoType::II, V10) => {
            let c = qcomm(m(n4), Op::F1, one()).into_iter().map(|(c, mut w)| {
                w.insert(0, W::Alg(Op::T1));
                (c, w)
            });
            single(join(vec![c.collect(), term(-one(), vec![p(n4)])]))
        }
        (_, A | B) => {
            // type I: direct Phi_- against X+ (A) and X- (B);
            // type II: direct Phi_+ against X- (A) and X+ (B)
            let (d, xa, xb): (fn(i32) -> W, fn(i32) -> Op, fn(i32) -> Op) = match ty {
                VoType::I => (|n| W::Phi(Minus, n), Op::XPlus, Op::XMinus),
                VoType::II => (|n| W::Phi(Plus, n), Op::XMinus, Op::XPlus),
            };
            let mut out = Vec::new();
            for k in -window..=window {
                let comb = if cond == A {
                    qcomm(d(n4), xa(k), one())
                } else {
                    // type I:  q^(1/2) z [Phi(z), X(w)]_q = w [Phi(z), X(w)]_(q^-1)
                    // type II: q^(1/2) z [Phi(z), X(w)]_(q^-1) = w [Phi(z), X(w)]_q
                    let e = if ty == VoType::I { 1 } else { -1 };
                    let left = qcomm(d(n4 - 4), xb(k), q(e)).into_iter().map(|(c, w)| (c * &qq(2), w));
                    let right = qcomm(d(n4), xb(k + 1), q(-e)).into_iter().map(|(c, w)| (-c, w));
                    left.chain(right).collect()
                };
                out.push((format!("{label} k={k}"), comb));
            }
            out
        }
    }
}

/// Source-module basis vectors: the family sectors at `l` in `{-2, 0, 2}`
/// up to `degree`, with the highest-weight vector first.
fn source_basis(pair: VertexPair, degree: u32) -> Vec<BasisMonomial> {
    let hw = hw_vector(pair.lambda).expect("valid family");
    let mut out = vec![hw.clone()];
    for l in [0, -2, 2] {
        let s = sector_of_family(pair.lambda, l).expect("valid family");
        out.extend(enumerate_basis_upto(s, degree).into_iter().filter(|m| *m != hw));
    }
    out
}

fn expect_zero(report: &mut VerificationReport, m: &BasisMonomial, modes: Vec<String>, r: &FockVector) {
    if !r.is_zero() {
        report.fail(Failure::new(m.to_string()).modes(modes).residual(r.render()));
    }
}

/// Evaluates `cond` for `pair` on source-module vectors up to `degree`, with
/// vertex-operator exponents `|n| <= window (+1/2)` and current modes
/// `|k| <= window`.
pub fn check_intertwining(
    sys: &VertexSystem,
    pair: VertexPair,
    cond: Condition,
    degree: u32,
    window: u32,
) -> VerificationReport {
    let mut report = VerificationReport::new(format!("{cond} type {} {}", pair.ty, pair.name()))
        .with_degree(degree)
        .with_window(window);
    let modes = sys.modes(pair, window);
    for m in source_basis(pair, degree) {
        let v = FockVector::basis(m.clone());
        for &n4 in &modes {
            for (label, comb) in combinations(pair.ty, cond, n4, window as i32) {
                let r = sys.eval(pair, &comb, &v);
                expect_zero(&mut report, &m, vec![label], &r);
            }
        }
    }
    report
}

/// `{Phi_+-(z), Q^-} = 0` on source-module vectors up to `degree`.
pub fn check_screening_anticommute(sys: &VertexSystem, pair: VertexPair, degree: u32, window: u32) -> VerificationReport {
    let mut report = VerificationReport::new(format!("screening type {} {}", pair.ty, pair.name()))
        .with_degree(degree)
        .with_window(window);
    for m in source_basis(pair, degree) {
        let v = FockVector::basis(m.clone());
        for n4 in sys.modes(pair, window) {
            for c in [Component::Plus, Component::Minus] {
                let x = W::Phi(c, n4);
                let comb = vec![
                    (UScalar::one(), vec![x, W::Alg(Op::QMinus)]),
                    (UScalar::one(), vec![W::Alg(Op::QMinus), x]),
                ];
                let r = sys.eval(pair, &comb, &v);
                expect_zero(&mut report, &m, vec![format!("z^{} {c}", crate::currents::fmt_quarter(n4))], &r);
            }
        }
    }
    report
}

/// The lowest `z`-power of `Phi(z)|lambda>` is `z^0`, where the leading
/// component is exactly `|mu>`. The other component at `z^0` is zero when
/// the leading one is `v_+`, and a multiple of `f_1|mu>` when it is `v_-`
/// (the leading tensor must be killed by `e_1`).
pub fn normalization_check(sys: &VertexSystem, pair: VertexPair) -> VerificationReport {
    let mut report = VerificationReport::new(format!("normalization type {} {}", pair.ty, pair.name()));
    let hw = hw_vector(pair.lambda).expect("valid family");
    let target = FockVector::basis(hw_vector(pair.mu).expect("valid family"));
    let v = FockVector::basis(hw.clone());
    let lead = pair.leading();
    let mut lowest = None;
    for n4 in -16..=16 {
        let a = sys.component(pair, lead, n4, &v);
        let b = sys.component(pair, lead.other(), n4, &v);
        if !a.is_zero() || !b.is_zero() {
            lowest = Some((n4, a, b));
            break;
        }
    }
    let Some((n4, a, b)) = lowest else {
        report.fail(Failure::new(hw.to_string()).message("no nonzero mode in [-4, 4]"));
        return report;
    };
    let label = vec![format!("z^{}", crate::currents::fmt_quarter(n4))];
    if n4 != 0 {
        report.fail(Failure::new(hw.to_string()).modes(label.clone()).message("leading power is not z^0"));
    }
    if a != target {
        report.fail(
            Failure::new(hw.to_string())
                .modes(label.clone())
                .residual(a.sub(&target).render())
                .message(format!("leading {lead} component differs from |mu>")),
        );
    }
    match lead {
        Component::Plus => expect_zero(&mut report, &hw, label, &b),
        Component::Minus => {
            let partner = sys.action().apply(Op::F1, &target);
            if !proportional(&b, &partner) {
                report.fail(
                    Failure::new(hw.to_string())
                        .modes(label)
                        .residual(b.render())
                        .message("subleading + component is not a multiple of f1|mu>"),
                );
            } else if !b.is_zero() {
                let (m, c) = b.iter().next().expect("nonzero");
                let ratio = c.checked_div(&partner.coeff(m)).expect("nonzero");
                report.note(format!("v+ component at z^0 is ({ratio}) f1|mu>"));
            }
        }
    }
    report.note(format!("leading component v{lead}"));
    report
}

/// `a = c b` for some scalar `c` (including `a = 0`).
fn proportional(a: &FockVector, b: &FockVector) -> bool {
    if a.is_zero() {
        return true;
    }
    let Some((m, c)) = b.iter().next() else {
        return false;
    };
    match a.coeff(m).checked_div(c) {
        Ok(ratio) => a == &b.scale(&ratio),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_names() {
        assert_eq!("v10".parse::<Condition>().unwrap(), Condition::V10);
        assert_eq!("(A)".parse::<Condition>().unwrap(), Condition::A);
        assert_eq!("b".parse::<Condition>().unwrap(), Condition::B);
        assert!("V11".parse::<Condition>().is_err());
    }
}
