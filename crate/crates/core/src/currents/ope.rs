//! Contractions of normal-ordered products and the eight basic OPEs.

use super::{prepared, CurrentError, CurrentTerm, Generator, Scale};
use crate::qscalar::UScalar;
use crate::qseries::TruncatedSeries;
use crate::report::{Failure, VerificationReport};

/// `left(z) right(w) = :left(z) right(w): * z^{zexp4/4} * series(w/z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Contraction {
    pub zexp4: i32,
    pub series: TruncatedSeries<UScalar>,
}

/// Contraction of the exponential parts of two terms (scalars and explicit
/// z-powers are not included).
pub fn contraction_series(left: &CurrentTerm, right: &CurrentTerm, order: u32) -> Result<Contraction, CurrentError> {
    contraction_with(left, right, order, false)
}

fn contraction_with(left: &CurrentTerm, right: &CurrentTerm, order: u32, flip: bool) -> Result<Contraction, CurrentError> {
    let (lp, rp) = (prepared(&left.factors), prepared(&right.factors));
    // exponent E = sum_k e_k x^k
    let mut e = vec![UScalar::zero()];
    for k in 1..=order {
        let [_, _, pa, pb] = lp.coefficients(k);
        let [ca, cb, _, _] = rp.coefficients(k);
        let mut ek = pa.mul_ref(&ca).add_ref(&pb.mul_ref(&cb));
        if flip {
            ek = -ek;
        }
        e.push(ek);
    }
    // exp via n f_n = sum_k k e_k f_{n-k}
    let mut f = vec![UScalar::one()];
    for n in 1..=order as usize {
        let mut acc = UScalar::zero();
        for k in 1..=n {
            if !e[k].is_zero() {
                acc += &e[k].mul_ref(&f[n - k]).mul_ref(&UScalar::from_int(k as i128));
            }
        }
        f.push(acc.mul_ref(&UScalar::from_ratio(1, n as i128)));
    }
    // zero modes of `left` see the shift of `right`
    let (dl1x2, dl2) = rp.shift;
    let mut zexp4 = 0;
    let mut pre = UScalar::one();
    for fac in lp.factors() {
        let (za, zb) = fac.gen.zero_mode_form();
        let e4 = za * dl1x2 + zb * dl2;
        zexp4 += e4;
        let c = fac.scale.pow_quarter(e4).ok_or(CurrentError::FractionalScale(e4, fac.scale))?;
        pre = pre.mul_ref(&c).mul_ref(&UScalar::u_pow(fac.gen.k_power() * dl1x2));
    }
    let series = TruncatedSeries::from_terms(
        &["x"],
        order as i32,
        f.into_iter().enumerate().map(|(n, c)| ((n as i32, 0), c.mul_ref(&pre))),
    );
    Ok(Contraction { zexp4, series })
}

/// `left(X) right(Y) = :left right: X^{prefactor4/4} prod_i (1 - u^{c_i} Y/X)^{e_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpeFormula {
    pub id: u32,
    pub sign: i32,
    pub left: Generator,
    pub right: Generator,
    pub prefactor4: i32,
    pub factors: Vec<(i32, i32)>,
}

fn ya(s: i32) -> Generator {
    if s > 0 {
        Generator::YaPlus
    } else {
        Generator::YaMinus
    }
}

fn yb(s: i32) -> Generator {
    if s > 0 {
        Generator::YbPlus
    } else {
        Generator::YbMinus
    }
}

fn j(s: i32) -> Generator {
    if s > 0 {
        Generator::JPlus
    } else {
        Generator::JMinus
    }
}

impl OpeFormula {
    /// Formula `id` (1..=8) for the upper (`sign = 1`) or lower sign.
    pub fn new(id: u32, sign: i32) -> Option<Self> {
        let s = sign.signum();
        let (left, right, prefactor4, factors) = match id {
            1 => (ya(s), ya(s), -16, vec![(8 * s, -1), (4, -1), (0, -1), (-4, -1)]),
            2 => (ya(s), ya(-s), 16, vec![(6, 1), (2, 1), (-2, 1), (-6, 1)]),
            3 => (yb(s), yb(s), 4, vec![(0, 1)]),
            4 => (yb(s), yb(-s), -4, vec![(0, -1)]),
            5 => (j(s), ya(s), -8, vec![(2, -1), (-2, -1)]),
            6 => (ya(s), j(s), -8, vec![(2, -1), (-2, -1)]),
            7 => (j(s), ya(-s), 8, vec![(0, 1), (-4 * s, 1)]),
            8 => (ya(-s), j(s), 8, vec![(0, 1), (-4 * s, 1)]),
            _ => return None,
        };
        Some(OpeFormula { id, sign: s, left, right, prefactor4, factors })
    }

    /// Expansion of the stated rational function in `x = Y/X`.
    pub fn expected(&self, order: u32) -> TruncatedSeries<UScalar> {
        let order = order as i32;
        let mut acc = TruncatedSeries::one(&["x"], order);
        for &(c, e) in &self.factors {
            let lin = TruncatedSeries::from_terms(&["x"], order, [((0, 0), UScalar::one()), ((1, 0), -UScalar::u_pow(c))]);
            let f = if e > 0 { lin } else { lin.inv().expect("unit constant term") };
            for _ in 0..e.abs() {
                acc = acc.mul(&f).expect("same variables").truncate(order);
            }
        }
        acc
    }
}

/// Checks formula `id` for both signs to `(w/z)`-order `order`.
pub fn check_ope_formula(id: u32, order: u32) -> VerificationReport {
    check_ope_formula_with(id, order, false)
}

/// As [`check_ope_formula`]; `flip_bracket` negates every oscillator bracket
/// (a deliberate corruption used to confirm that the check can fail).
pub fn check_ope_formula_with(id: u32, order: u32, flip_bracket: bool) -> VerificationReport {
    let mut report = VerificationReport::new(format!("OPE{id}")).with_order(order);
    for sign in [1, -1] {
        let Some(formula) = OpeFormula::new(id, sign) else {
            report.fail(Failure::new(format!("formula {id}")).message("unknown formula id"));
            return report;
        };
        let label = if sign > 0 { "upper" } else { "lower" };
        let term = |g| CurrentTerm { scalar: UScalar::one(), zpow4: 0, factors: vec![super::Factor { gen: g, scale: Scale::ONE }] };
        let got = match contraction_with(&term(formula.left), &term(formula.right), order, flip_bracket) {
            Ok(c) => c,
            Err(e) => {
                report.fail(Failure::new(label).message(e.to_string()));
                continue;
            }
        };
        if got.zexp4 != formula.prefactor4 {
            report.fail(Failure::new(label).message(format!(
                "zero-mode exponent {}/4, expected {}/4",
                got.zexp4, formula.prefactor4
            )));
        }
        let diffs = got.series.agrees_with(&formula.expected(order), order as i32);
        if !diffs.is_empty() {
            let residual = diffs.iter().map(|((i, _), a, b)| (format!("x^{i}"), (a.clone() - b).to_string())).collect();
            report.fail(
                Failure::new(label)
                    .modes(vec![format!("{}{}", formula.left, formula.right)])
                    .residual(residual)
                    .message(format!("first mismatch at x^{}", diffs[0].0 .0)),
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::currents::{generator, Generator};

    #[test]
    fn yb_pairs() {
        let t = |g| generator(g, Scale::ONE).terms[0].clone();
        let c = contraction_series(&t(Generator::YbPlus), &t(Generator::YbMinus), 5).unwrap();
        assert_eq!(c.zexp4, -4);
        for n in 0..=5 {
            assert!(c.series.coeff(n, 0).is_one());
        }
        let c = contraction_series(&t(Generator::YbPlus), &t(Generator::YbPlus), 5).unwrap();
        assert_eq!(c.zexp4, 4);
        assert!(c.series.coeff(0, 0).is_one());
        assert_eq!(c.series.coeff(1, 0), UScalar::from_int(-1));
        for n in 2..=5 {
            assert!(c.series.coeff(n, 0).is_zero());
        }
    }

    #[test]
    fn all_formulas_small_order() {
        for id in 1..=8 {
            let r = check_ope_formula(id, 4);
            assert!(r.passed(), "{}", r.to_json_line());
        }
    }

    #[test]
    fn flipped_bracket_fails_at_first_order() {
        let r = check_ope_formula_with(4, 8, true);
        assert!(!r.passed());
        assert!(r.failures[0].message.as_deref().unwrap().contains("x^1"));
    }
}
