//! Exponential currents, their normal-ordered products and mode action.
//!
//! A [`CurrentExpr`] is a linear combination of normal-ordered products of
//! named vertex-operator currents at rescaled arguments. Everything the
//! representation needs (`X^+-(z)`, the screening current, `psi`/`phi`,
//! vertex-operator components) is built from these.

mod apply;
mod ope;
mod parse;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qscalar::{qint, qint_half, ScalarError, UScalar};

pub use apply::{apply_mode, apply_term_mode, mode_support, prepared, PreparedTerm};
pub use ope::{check_ope_formula, check_ope_formula_with, contraction_series, Contraction, OpeFormula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurrentError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("z-power {0}/4 cannot be rescaled by {1}")]
    FractionalScale(i32, Scale),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    YaPlus,
    YaMinus,
    YbPlus,
    YbMinus,
    JPlus,
    JMinus,
    Psi,
    Phi,
}

pub const ALL_GENERATORS: [Generator; 8] = [
    Generator::YaPlus,
    Generator::YaMinus,
    Generator::YbPlus,
    Generator::YbMinus,
    Generator::JPlus,
    Generator::JMinus,
    Generator::Psi,
    Generator::Phi,
];

/// Which oscillator family a coefficient refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A,
    B,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::YaPlus => "Ya+",
            Generator::YaMinus => "Ya-",
            Generator::YbPlus => "Yb+",
            Generator::YbMinus => "Yb-",
            Generator::JPlus => "J+",
            Generator::JMinus => "J-",
            Generator::Psi => "Psi",
            Generator::Phi => "Phi",
        }
    }

    fn sign(self) -> i32 {
        match self {
            Generator::YaPlus | Generator::YbPlus | Generator::JPlus | Generator::Psi => 1,
            _ => -1,
        }
    }

    /// Coefficient of `a_-k z^k` (or `b_-k z^k`) in the creation exponent.
    pub fn creation(self, fam: Family, k: u32) -> UScalar {
        let s = self.sign();
        let ki = k as i32;
        match (self, fam) {
            (Generator::YaPlus | Generator::YaMinus, Family::A) => {
                UScalar::monomial(s as i128, s * ki).checked_div(&qint_half(-ki)).expect("nonzero")
            }
            (Generator::YbPlus | Generator::YbMinus, Family::B) => UScalar::from_ratio(s as i128, k as i128),
            (Generator::JPlus | Generator::JMinus, Family::A) => j_coefficient(k).mul_monomial(-s as i8, -s * ki),
            (Generator::Phi, Family::A) => -q_minus_qinv(),
            _ => UScalar::zero(),
        }
    }

    /// Coefficient of `a_k z^-k` (or `b_k z^-k`) in the annihilation exponent.
    pub fn annihilation(self, fam: Family, k: u32) -> UScalar {
        let s = self.sign();
        let ki = k as i32;
        match (self, fam) {
            (Generator::YaPlus | Generator::YaMinus, Family::A) => {
                UScalar::monomial(-s as i128, s * ki).checked_div(&qint_half(-ki)).expect("nonzero")
            }
            (Generator::YbPlus | Generator::YbMinus, Family::B) => UScalar::from_ratio(-s as i128, k as i128),
            (Generator::JPlus | Generator::JMinus, Family::A) => j_coefficient(k).mul_monomial(s as i8, -s * ki),
            (Generator::Psi, Family::A) => q_minus_qinv(),
            _ => UScalar::zero(),
        }
    }

    /// Zero-mode z-exponent in quarter units is `za * l1x2 + zb * l2`.
    pub fn zero_mode_form(self) -> (i32, i32) {
        match self {
            Generator::YaPlus => (-4, 0),
            Generator::YaMinus => (4, 0),
            Generator::YbPlus => (0, 4),
            Generator::YbMinus => (0, -4),
            Generator::JPlus => (-2, 0),
            Generator::JMinus => (2, 0),
            Generator::Psi | Generator::Phi => (0, 0),
        }
    }

    /// `q^{+-a0}` prefactor as a power of `u` per unit of `l1x2`.
    pub fn k_power(self) -> i32 {
        match self {
            Generator::Psi => 2,
            Generator::Phi => -2,
            _ => 0,
        }
    }

    /// Vacuum shift `(dl1x2, dl2)`.
    pub fn shift(self) -> (i32, i32) {
        match self {
            Generator::YaPlus => (4, 0),
            Generator::YaMinus => (-4, 0),
            Generator::YbPlus => (0, 1),
            Generator::YbMinus => (0, -1),
            Generator::JPlus => (2, 0),
            Generator::JMinus => (-2, 0),
            Generator::Psi | Generator::Phi => (0, 0),
        }
    }
}

/// `(q^{k/2} + q^{-k/2}) / [2k]`.
fn j_coefficient(k: u32) -> UScalar {
    let ki = k as i32;
    (UScalar::u_pow(2 * ki) + UScalar::u_pow(-2 * ki)).checked_div(&qint(2 * ki)).expect("nonzero")
}

fn q_minus_qinv() -> UScalar {
    UScalar::u_pow(4) - UScalar::u_pow(-4)
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = CurrentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_GENERATORS
            .iter()
            .copied()
            .find(|g| g.name() == s.trim())
            .ok_or_else(|| CurrentError::UnknownGenerator(s.to_string()))
    }
}

/// Argument rescaling `z -> sign * u^upow * z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Scale {
    pub sign: i8,
    pub upow: i32,
}

impl Scale {
    pub const ONE: Scale = Scale { sign: 1, upow: 0 };

    pub fn u(upow: i32) -> Self {
        Scale { sign: 1, upow }
    }

    pub fn mul(self, o: Scale) -> Scale {
        Scale { sign: self.sign * o.sign, upow: self.upow + o.upow }
    }

    /// `c^k` for integer `k`.
    pub fn pow(self, k: i32) -> UScalar {
        let sign = if self.sign < 0 && k % 2 != 0 { -1 } else { 1 };
        UScalar::monomial(sign, self.upow * k)
    }

    /// `c^{e4/4}`, defined when the result is an integral power of `u`.
    pub fn pow_quarter(self, e4: i32) -> Option<UScalar> {
        if e4 % 4 == 0 {
            return Some(self.pow(e4 / 4));
        }
        if self.sign < 0 || (self.upow * e4) % 4 != 0 {
            return None;
        }
        Some(UScalar::u_pow(self.upow * e4 / 4))
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "" };
        match self.upow {
            0 => write!(f, "{sign}1"),
            1 => write!(f, "{sign}u"),
            e => write!(f, "{sign}u^{e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub gen: Generator,
    pub scale: Scale,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.gen, self.scale)
    }
}

/// `scalar * z^{zpow4/4} * :factor_1(c_1 z) ... factor_n(c_n z):`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurrentTerm {
    pub scalar: UScalar,
    pub zpow4: i32,
    pub factors: Vec<Factor>,
}

impl CurrentTerm {
    pub fn identity() -> Self {
        CurrentTerm { scalar: UScalar::one(), zpow4: 0, factors: Vec::new() }
    }

    /// Total vacuum shift `(dl1x2, dl2)`.
    pub fn shift(&self) -> (i32, i32) {
        self.factors.iter().fold((0, 0), |(a, b), f| {
            let (da, db) = f.gen.shift();
            (a + da, b + db)
        })
    }

    pub fn rescale(&self, c: Scale) -> Result<CurrentTerm, CurrentError> {
        let s = c.pow_quarter(self.zpow4).ok_or(CurrentError::FractionalScale(self.zpow4, c))?;
        Ok(CurrentTerm {
            scalar: self.scalar.mul_ref(&s),
            zpow4: self.zpow4,
            factors: self.factors.iter().map(|f| Factor { gen: f.gen, scale: f.scale.mul(c) }).collect(),
        })
    }
}

impl fmt::Display for CurrentTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.scalar.is_one() || (self.zpow4 == 0 && self.factors.is_empty()) {
            parts.push(format!("[{}]", self.scalar));
        }
        if self.zpow4 != 0 {
            parts.push(format!("z^{}", fmt_quarter(self.zpow4)));
        }
        match self.factors.len() {
            0 => {}
            1 => parts.push(self.factors[0].to_string()),
            _ => {
                let inner: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
                parts.push(format!("nprod({})", inner.join(", ")));
            }
        }
        f.write_str(&parts.join("*"))
    }
}

/// Quarter-integer `x4/4` as `3`, `(1/2)`, `(-3/4)`.
pub fn fmt_quarter(x4: i32) -> String {
    if x4 % 4 == 0 {
        format!("{}", x4 / 4)
    } else if x4 % 2 == 0 {
        format!("({}/2)", x4 / 2)
    } else {
        format!("({x4}/4)")
    }
}

/// Parses `n`, `n/2`, `n/4` (with optional parentheses) into quarter units.
pub fn parse_quarter(s: &str) -> Option<i32> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if let Some((n, d)) = s.split_once('/') {
        let n: i32 = n.trim().parse().ok()?;
        match d.trim() {
            "1" => Some(4 * n),
            "2" => Some(2 * n),
            "4" => Some(n),
            _ => None,
        }
    } else {
        s.parse::<i32>().ok().map(|n| 4 * n)
    }
}

/// Linear combination of normal-ordered exponential terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CurrentExpr {
    pub terms: Vec<CurrentTerm>,
}

impl CurrentExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        CurrentExpr { terms: vec![CurrentTerm::identity()] }
    }

    /// The bare power `z^{zpow4/4}`.
    pub fn z_power(zpow4: i32) -> Self {
        CurrentExpr { terms: vec![CurrentTerm { zpow4, ..CurrentTerm::identity() }] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &CurrentExpr) -> CurrentExpr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        CurrentExpr { terms }.simplified()
    }

    pub fn sub(&self, other: &CurrentExpr) -> CurrentExpr {
        self.add(&other.scale(&UScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &UScalar) -> CurrentExpr {
        if c.is_zero() {
            return CurrentExpr::zero();
        }
        CurrentExpr {
            terms: self
                .terms
                .iter()
                .map(|t| CurrentTerm { scalar: t.scalar.mul_ref(c), ..t.clone() })
                .collect(),
        }
    }

    /// Multiplies by `z^{dz4/4}`.
    pub fn shift_z(&self, dz4: i32) -> CurrentExpr {
        CurrentExpr {
            terms: self.terms.iter().map(|t| CurrentTerm { zpow4: t.zpow4 + dz4, ..t.clone() }).collect(),
        }
    }

    /// `e(c z)`.
    pub fn rescale(&self, c: Scale) -> Result<CurrentExpr, CurrentError> {
        Ok(CurrentExpr { terms: self.terms.iter().map(|t| t.rescale(c)).collect::<Result<_, _>>()? })
    }

    /// Merges terms with identical factor lists and z-powers; drops zeros.
    pub fn simplified(&self) -> CurrentExpr {
        let mut out: Vec<CurrentTerm> = Vec::new();
        for t in &self.terms {
            let mut key = t.factors.clone();
            key.sort();
            if let Some(o) = out.iter_mut().find(|o| {
                let mut k2 = o.factors.clone();
                k2.sort();
                o.zpow4 == t.zpow4 && k2 == key
            }) {
                o.scalar = o.scalar.add_ref(&t.scalar);
            } else {
                out.push(t.clone());
            }
        }
        out.retain(|t| !t.scalar.is_zero());
        CurrentExpr { terms: out }
    }

    /// Total vacuum shift, if all terms agree.
    pub fn shift(&self) -> Option<(i32, i32)> {
        let mut it = self.terms.iter().map(|t| t.shift());
        let first = it.next()?;
        it.all(|s| s == first).then_some(first)
    }
}

impl fmt::Display for CurrentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("[0]");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl FromStr for CurrentExpr {
    type Err = CurrentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_expr(s)
    }
}

/// `name(scale * z)` as a single-term expression.
pub fn generator(gen: Generator, scale: Scale) -> CurrentExpr {
    CurrentExpr {
        terms: vec![CurrentTerm { scalar: UScalar::one(), zpow4: 0, factors: vec![Factor { gen, scale }] }],
    }
}

/// Normal-ordered product, distributed over the terms of each part.
pub fn nproduct(parts: &[CurrentExpr]) -> CurrentExpr {
    let mut acc = CurrentExpr::identity();
    for p in parts {
        let mut next = Vec::with_capacity(acc.terms.len() * p.terms.len());
        for a in &acc.terms {
            for b in &p.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().copied());
                next.push(CurrentTerm {
                    scalar: a.scalar.mul_ref(&b.scalar),
                    zpow4: a.zpow4 + b.zpow4,
                    factors,
                });
            }
        }
        acc = CurrentExpr { terms: next };
    }
    acc.simplified()
}

/// `(f(q^{1/2} z) - f(q^{-1/2} z)) / ((q^{1/2} - q^{-1/2}) z)`.
pub fn qdifference(e: &CurrentExpr) -> Result<CurrentExpr, CurrentError> {
    let up = e.rescale(Scale::u(2))?;
    let down = e.rescale(Scale::u(-2))?;
    let norm = (UScalar::u_pow(2) - UScalar::u_pow(-2)).inv()?;
    Ok(up.sub(&down).scale(&norm).shift_z(-4))
}

/// `M^+_1 = :Ya+(z) Yb+(qz) Yb+(z):`.
pub fn m_plus_1() -> CurrentExpr {
    nproduct(&[
        generator(Generator::YaPlus, Scale::ONE),
        generator(Generator::YbPlus, Scale::u(4)),
        generator(Generator::YbPlus, Scale::ONE),
    ])
}

/// `M^+_2 = :Ya+(z) Yb+(z) Yb+(q^-1 z):`.
pub fn m_plus_2() -> CurrentExpr {
    nproduct(&[
        generator(Generator::YaPlus, Scale::ONE),
        generator(Generator::YbPlus, Scale::ONE),
        generator(Generator::YbPlus, Scale::u(-4)),
    ])
}

/// `M^+_3 = :Ya+(z) Yb+(qz) Yb+(q^-1 z):`.
pub fn m_plus_3() -> CurrentExpr {
    nproduct(&[
        generator(Generator::YaPlus, Scale::ONE),
        generator(Generator::YbPlus, Scale::u(4)),
        generator(Generator::YbPlus, Scale::u(-4)),
    ])
}

/// `M^- = :Ya-(z) Yb-(q^{1/2} z) Yb-(q^{-1/2} z):`.
pub fn m_minus() -> CurrentExpr {
    nproduct(&[
        generator(Generator::YaMinus, Scale::ONE),
        generator(Generator::YbMinus, Scale::u(2)),
        generator(Generator::YbMinus, Scale::u(-2)),
    ])
}

fn half_sum() -> UScalar {
    UScalar::u_pow(2) + UScalar::u_pow(-2)
}

/// `X^+(z)` from the three `M^+_i` currents.
pub fn x_plus() -> CurrentExpr {
    let m = m_plus_1()
        .scale(&UScalar::u_pow(2))
        .add(&m_plus_2().scale(&UScalar::u_pow(-2)))
        .add(&m_plus_3().scale(&-half_sum()));
    let den = q_minus_qinv() * (UScalar::u_pow(2) - UScalar::u_pow(-2));
    m.scale(&-den.inv().expect("nonzero")).shift_z(-8)
}

/// `X^+(z)` from the difference-operator form
/// `(:Yb+ D^2 Yb+:/(q^{1/2}+q^{-1/2}) - :DYb+(q^{1/2}z) DYb+(q^{-1/2}z):) Ya+(z)`.
pub fn x_plus_difference_form() -> CurrentExpr {
    let yb = generator(Generator::YbPlus, Scale::ONE);
    let d1 = qdifference(&yb).expect("integral powers");
    let d2 = qdifference(&d1).expect("integral powers");
    let first = nproduct(&[yb, d2]).scale(&half_sum().inv().expect("nonzero"));
    let second = nproduct(&[d1.rescale(Scale::u(2)).expect("integral"), d1.rescale(Scale::u(-2)).expect("integral")]);
    nproduct(&[first.sub(&second), generator(Generator::YaPlus, Scale::ONE)])
}

/// `X^-(z) = M^-(z) / (q^{1/2} + q^{-1/2})`.
pub fn x_minus() -> CurrentExpr {
    m_minus().scale(&half_sum().inv().expect("nonzero"))
}

/// `psi(z) = K exp((q - q^-1) sum a_k z^-k)`.
pub fn psi() -> CurrentExpr {
    generator(Generator::Psi, Scale::ONE)
}

/// `phi(z) = K^-1 exp(-(q - q^-1) sum a_-k z^k)`, so `phi_-k` is the
/// coefficient of `z^k`.
pub fn phi() -> CurrentExpr {
    generator(Generator::Phi, Scale::ONE)
}

/// Screening current `Yb-(z)`; its `z^-1` coefficient is `Q^-`.
pub fn screening_current() -> CurrentExpr {
    generator(Generator::YbMinus, Scale::ONE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qdifference_on_powers() {
        let d = qdifference(&CurrentExpr::z_power(4)).unwrap();
        assert_eq!(d, CurrentExpr::identity());
        let d = qdifference(&CurrentExpr::z_power(8)).unwrap();
        assert_eq!(d, CurrentExpr::z_power(4).scale(&half_sum()));
        let d = qdifference(&generator(Generator::YbPlus, Scale::ONE)).unwrap();
        assert_eq!(d.terms.len(), 2);
        let scales: Vec<Scale> = d.terms.iter().map(|t| t.factors[0].scale).collect();
        assert_eq!(scales, vec![Scale::u(2), Scale::u(-2)]);
    }

    #[test]
    fn nproduct_structure() {
        assert_eq!(nproduct(&[]), CurrentExpr::identity());
        let m = m_plus_1();
        assert_eq!(m.terms.len(), 1);
        assert_eq!(m.terms[0].shift(), (4, 2));
        assert_eq!(m_minus().terms[0].shift(), (-4, -2));
    }

    #[test]
    fn display_round_trip() {
        for e in [x_plus(), x_minus(), x_plus_difference_form(), generator(Generator::JPlus, Scale::u(6))] {
            let s = e.to_string();
            let back: CurrentExpr = s.parse().unwrap();
            assert_eq!(back, e, "{s}");
        }
    }

    #[test]
    fn generator_names() {
        for g in ALL_GENERATORS {
            assert_eq!(g.name().parse::<Generator>().unwrap(), g);
        }
        assert!("Yc+".parse::<Generator>().is_err());
    }
}
