//! Sparse truncated Laurent series in one or two formal variables, and the
//! theta-type identities behind the character computation.
//!
//! Exponents are integers: `s = p^(1/2)` and `t = z^(1/2)` for characters,
//! `x = w/z` for operator products. Truncation applies to the first
//! variable only; the second is unbounded but every coefficient is a finite
//! sum as long as each factor with a `t`-power also carries a positive
//! power of `s` (the one exception is handled by [`TruncatedSeries::div_one_minus_t`]).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::qscalar::UScalar;
use crate::report::{Failure, VerificationReport};

/// Coefficient rings usable in series: exact rationals and `UScalar`.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Display
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn try_inv(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
}

impl Coeff for BigRational {
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Coeff for UScalar {
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn from_i64(v: i64) -> Self {
        UScalar::from_int(v as i128)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable sets differ: {0:?} vs {1:?}")]
    MismatchedVariables(Vec<String>, Vec<String>),
    #[error("lowest term is not an invertible monomial")]
    NotInvertible,
    #[error("infinitely many factors contribute below the truncation order")]
    NonStabilizing,
}

#[derive(Clone, PartialEq, Debug)]
pub struct TruncatedSeries<C> {
    vars: Vec<String>,
    order: i32,
    terms: BTreeMap<(i32, i32), C>,
}

pub type RatSeries = TruncatedSeries<BigRational>;

impl<C: Coeff> TruncatedSeries<C> {
    pub fn zero(vars: &[&str], order: i32) -> Self {
        assert!(matches!(vars.len(), 1 | 2), "one or two variables");
        TruncatedSeries {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &[&str], order: i32) -> Self {
        Self::monomial(vars, order, C::one(), 0, 0)
    }

    /// `c * v1^i * v2^j` (`j` must be 0 for one variable).
    pub fn monomial(vars: &[&str], order: i32, c: C, i: i32, j: i32) -> Self {
        let mut s = Self::zero(vars, order);
        s.add_term(i, j, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = ((i32, i32), C)>>(
        vars: &[&str],
        order: i32,
        terms: I,
    ) -> Self {
        let mut s = Self::zero(vars, order);
        for ((i, j), c) in terms {
            s.add_term(i, j, c);
        }
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: i32, j: i32) -> C {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(C::zero)
    }

    /// Lowest exponent of the first variable, if any term is stored.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().map(|k| k.0)
    }

    /// Accumulates `c` at `(i, j)`; terms beyond the order are dropped.
    pub fn add_term(&mut self, i: i32, j: i32, c: C) {
        if i > self.order || c.is_zero() {
            return;
        }
        debug_assert!(self.vars.len() == 2 || j == 0);
        match self.terms.entry((i, j)) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        TruncatedSeries {
            vars: self.vars.clone(),
            order,
            terms: self.terms.iter().filter(|(k, _)| k.0 <= order).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    fn check_vars(&self, other: &Self) -> Result<(), SeriesError> {
        if self.vars != other.vars {
            Err(SeriesError::MismatchedVariables(self.vars.clone(), other.vars.clone()))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_vars(other)?;
        let mut out = self.truncate(self.order.min(other.order));
        for ((i, j), c) in &other.terms {
            out.add_term(*i, *j, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            vars: self.vars.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.var_refs(), self.order);
        for ((i, j), v) in &self.terms {
            out.add_term(*i, *j, v.clone() * c);
        }
        out
    }

    /// Multiplication by the monomial `v1^i v2^j`.
    pub fn shift(&self, i: i32, j: i32) -> Self {
        TruncatedSeries {
            vars: self.vars.clone(),
            order: self.order + i,
            terms: self.terms.iter().map(|(k, v)| ((k.0 + i, k.1 + j), v.clone())).collect(),
        }
    }

    fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    /// Product. The result order is the largest for which every coefficient
    /// is determined by the operands' known coefficients.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_vars(other)?;
        let order = match (self.valuation(), other.valuation()) {
            (Some(va), Some(vb)) => (self.order + vb).min(other.order + va),
            _ => self.order.min(other.order),
        };
        let mut out = Self::zero(&self.var_refs(), order);
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                if i1 + i2 > order {
                    // terms are sorted by first exponent
                    break;
                }
                out.add_term(i1 + i2, j1 + j2, c1.clone() * c2);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse; the lowest `v1`-degree part must be a single
    /// monomial with invertible coefficient.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let a = self.valuation().ok_or(SeriesError::NotInvertible)?;
        let lowest: Vec<_> = self.terms.iter().filter(|(k, _)| k.0 == a).collect();
        if lowest.len() != 1 {
            return Err(SeriesError::NotInvertible);
        }
        let ((_, b), c) = lowest[0];
        let cinv = c.try_inv().ok_or(SeriesError::NotInvertible)?;
        // self = c s^a t^b (1 + h), every term of h has positive s-degree
        let rel_order = self.order - a;
        let vars = self.var_refs();
        let mut h = Self::zero(&vars, rel_order);
        for ((i, j), v) in &self.terms {
            if *i != a {
                h.add_term(i - a, j - b, v.clone() * &cinv);
            }
        }
        // 1/(1+h) = sum (-h)^k; h has valuation >= 1 so k <= rel_order
        let minus_h = h.neg();
        let mut acc = Self::one(&vars, rel_order);
        let mut power = Self::one(&vars, rel_order);
        for _ in 0..rel_order.max(0) {
            power = power.mul(&minus_h)?.truncate(rel_order);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        let mut out = acc.scale(&cinv).shift(-a, -*b);
        out.order = rel_order - a;
        Ok(out.truncate(rel_order - a))
    }

    /// Expansion of `prod_{n>=0} (1 - c s^i t^j s^(b n))`.
    pub fn pochhammer(
        vars: &[&str],
        c: C,
        i: i32,
        j: i32,
        base: i32,
        order: i32,
    ) -> Result<Self, SeriesError> {
        if c.is_zero() {
            return Ok(Self::one(vars, order));
        }
        if base <= 0 {
            return Err(SeriesError::NonStabilizing);
        }
        // Factors with nonpositive exponent are finitely many; multiply them
        // exactly first so their negative powers are accounted for when the
        // remaining power series is truncated.
        let big = i32::MAX / 4;
        let mut head = Self::one(vars, big);
        let mut n = 0;
        while i + base * n <= 0 {
            let mut f = Self::one(vars, big);
            f.add_term(i + base * n, j, -c.clone());
            head = head.mul(&f)?;
            n += 1;
        }
        if head.is_zero() {
            return Ok(Self::zero(vars, order));
        }
        let val = head.valuation().unwrap();
        let tail_order = order - val;
        let mut tail = Self::one(vars, tail_order);
        while i + base * n <= tail_order {
            let mut f = Self::one(vars, tail_order);
            f.add_term(i + base * n, j, -c.clone());
            tail = tail.mul(&f)?.truncate(tail_order);
            n += 1;
        }
        let mut head = head.truncate(big);
        head.order = big;
        let out = head.mul(&tail)?;
        Ok(out.truncate(order))
    }

    /// Multiplies by `1 / (1 - t)` (`dir = 1`) or `1 / (1 - t^-1)` (`dir = -1`)
    /// exactly, keeping `t`-exponents `j` with `dir * j <= bound`. Every
    /// retained coefficient is a finite cumulative sum of existing ones.
    pub fn div_one_minus_t(&self, dir: i32, bound: i32) -> Self {
        assert!(self.vars.len() == 2 && (dir == 1 || dir == -1));
        let mut out = Self::zero(&self.var_refs(), self.order);
        let mut by_s: BTreeMap<i32, Vec<(i32, C)>> = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            by_s.entry(*i).or_default().push((*j, c.clone()));
        }
        for (i, row) in by_s {
            for (j, c) in row {
                let mut k = j;
                while dir * k <= bound {
                    out.add_term(i, k, c.clone());
                    k += dir;
                }
            }
        }
        out
    }

    /// Coefficients up to `order` where the two series differ.
    pub fn agrees_with(&self, other: &Self, order: i32) -> Vec<((i32, i32), C, C)> {
        let mut keys: Vec<(i32, i32)> =
            self.terms.keys().chain(other.terms.keys()).filter(|k| k.0 <= order).copied().collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|(i, j)| {
                let a = self.coeff(i, j);
                let b = other.coeff(i, j);
                if a != b {
                    Some(((i, j), a, b))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((i, j), c)| {
                let e = if self.vars.len() == 2 { json!([i, j]) } else { json!([i]) };
                json!({"e": e, "c": c.to_string()})
            })
            .collect();
        json!({"vars": self.vars, "order": self.order, "terms": terms})
    }
}

impl<C: Coeff> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (n, ((i, j), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{}^{i}", self.vars[0])?;
            if self.vars.len() == 2 {
                write!(f, "*{}^{j}", self.vars[1])?;
            }
        }
        write!(f, " + O({}^{})", self.vars[0], self.order + 1)
    }
}

/// Euler-type expansion `(a x; p)_inf = sum_n (-1)^n p^(n(n-1)/2) a^n x^n / (p;p)_n`
/// for a scalar base `p`, exact in the coefficient field.
pub fn pochhammer_scalar_base<C: Coeff>(var: &str, a: &C, p: &C, order: i32) -> TruncatedSeries<C> {
    let mut out = TruncatedSeries::zero(&[var], order);
    let mut pp = C::one(); // (p;p)_n
    let mut an = C::one();
    let mut pn = C::one(); // p^n
    let mut ptri = C::one(); // p^(n(n-1)/2)
    for n in 0..=order.max(-1) {
        if n > 0 {
            pn = pn * p;
            pp = pp * &(C::one() - &pn);
            an = an * a;
        }
        let sign = if n % 2 == 0 { C::one() } else { -C::one() };
        let c = sign * &ptri * &an * &pp.try_inv().expect("p is not a root of unity");
        out.add_term(n, 0, c);
        ptri = ptri * &pn;
    }
    out
}

/// `1 / (a x; p)_inf = sum_n a^n x^n / (p;p)_n`.
pub fn pochhammer_scalar_base_inv<C: Coeff>(
    var: &str,
    a: &C,
    p: &C,
    order: i32,
) -> TruncatedSeries<C> {
    let mut out = TruncatedSeries::zero(&[var], order);
    let mut pp = C::one();
    let mut an = C::one();
    let mut pn = C::one();
    for n in 0..=order.max(-1) {
        if n > 0 {
            pn = pn * p;
            pp = pp * &(C::one() - &pn);
            an = an * a;
        }
        out.add_term(n, 0, an.clone() * &pp.try_inv().expect("p is not a root of unity"));
    }
    out
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `(p;p)_inf` in the single variable `p` (or `s` with step 2 for `s = p^(1/2)`).
pub fn euler_product(var: &str, step: i32, order: i32) -> RatSeries {
    TruncatedSeries::pochhammer(&[var], rat(1), step, 0, step, order).expect("stabilizes")
}

fn euler_product2(order: i32) -> RatSeries {
    TruncatedSeries::pochhammer(&["s", "t"], rat(1), 2, 0, 2, order).expect("stabilizes")
}

/// The inner sum `A = sum_m t^(-m) sum_{k>=-m} (-1)^(k+m) s^(k^2+k-m^2)`,
/// exact for `s`-degree up to `2N`.
///
/// For fixed `m >= 0` the indices `k` and `-1-k` in `[-m, m-1]` give equal
/// exponents with opposite signs, so the inner sum starts at `k = m` and has
/// `s`-valuation `m^2 + m - m^2 = m`; for `m < 0` it starts at `k = -m` with
/// valuation `|m|`. Hence `|m| > 2N` contributes nothing up to `s^(2N)`,
/// and the enumeration `|m| <= 2N + 2` is complete. The cancelling pairs are
/// still summed explicitly for the enumerated `m`.
fn star_inner(order_n: i32, flip: bool) -> RatSeries {
    let smax = 2 * order_n;
    let mut a = TruncatedSeries::zero(&["s", "t"], smax);
    let mbound = 2 * order_n as i64 + 2;
    for m in -mbound..=mbound {
        let mut k = -m;
        loop {
            let e = k * k + k - m * m;
            if e > smax as i64 && k >= 0 {
                break;
            }
            if e <= smax as i64 {
                let mut sg = sign(k + m);
                if flip {
                    sg = -sg;
                }
                a.add_term(e as i32, -m as i32, rat(sg));
            }
            k += 1;
        }
    }
    a
}

fn diff_failures(report: &mut VerificationReport, label: &str, lhs: &RatSeries, rhs: &RatSeries, order: i32) {
    for ((i, j), a, b) in lhs.agrees_with(rhs, order) {
        report.fail(
            Failure::new(format!("{label} coefficient {}^{i} {}", lhs.vars()[0], if lhs.vars().len() == 2 { format!("{}^{j}", lhs.vars()[1]) } else { String::new() }))
                .residual(vec![("lhs".into(), a.to_string()), ("rhs".into(), b.to_string())]),
        );
    }
}

/// Verifies the character identity
/// `(p;p)^-2 sum_m z^(-m/2) sum_{k>=-m} (-1)^(k+m) p^((k^2-m^2+k)/2)
///   = 1/((p^(1/2) z^(1/2);p)(p^(1/2) z^(-1/2);p))`
/// and its cleared form
/// `sum_n (-1)^n p^(n^2/2) z^(n/2) * (same double sum) = (p;p)^3`
/// through total `p`-order `order`.
pub fn check_star_identity(order: u32) -> VerificationReport {
    star_identity_report(order, false)
}

/// As [`check_star_identity`], optionally with the sign `(-1)^(k+m)` negated.
pub fn star_identity_report(order: u32, flip_sign: bool) -> VerificationReport {
    let n = order as i32;
    let smax = 2 * n;
    let mut report = VerificationReport::new("star").with_order(order);
    let a = star_inner(n, flip_sign);

    // displayed form
    let pp = euler_product2(smax);
    let lhs = pp.mul(&pp).unwrap().inv().unwrap().mul(&a).unwrap().truncate(smax);
    let rhs = TruncatedSeries::pochhammer(&["s", "t"], rat(1), 1, 1, 2, smax)
        .unwrap()
        .mul(&TruncatedSeries::pochhammer(&["s", "t"], rat(1), 1, -1, 2, smax).unwrap())
        .unwrap()
        .inv()
        .unwrap();
    diff_failures(&mut report, "character form", &lhs, &rhs, smax);

    // cleared form: multiply by the theta series sum_n (-1)^n s^(n^2) t^n
    let mut theta = TruncatedSeries::zero(&["s", "t"], smax);
    let mut k = 0i32;
    while k * k <= smax {
        theta.add_term(k * k, k, rat(sign(k as i64)));
        if k > 0 {
            theta.add_term(k * k, -k, rat(sign(k as i64)));
        }
        k += 1;
    }
    let lhs2 = theta.mul(&a).unwrap().truncate(smax);
    let cube = pp.mul(&pp).unwrap().mul(&pp).unwrap().truncate(smax);
    diff_failures(&mut report, "cleared form", &lhs2, &cube, smax);
    report.note(format!(
        "constant term {}, coefficient of s t (p^1/2 z^1/2) {}",
        rhs.coeff(0, 0),
        rhs.coeff(1, 1)
    ));
    report
}

/// `S_l = sum_m p^(m l) sum_{k>=-m} (-1)^k p^(k(k+1)/2)` through `p^order`.
///
/// After the same pairwise cancellation as in the star identity, the inner
/// sum for `m` has valuation `|m|(|m|+1)/2`, so only `m` with
/// `m l + |m|(|m|+1)/2 <= order` can contribute; that set is an interval
/// because the bound is convex in `m`.
pub fn s_series(l: i64, order: i32) -> RatSeries {
    let mut out = TruncatedSeries::zero(&["p"], order);
    let reach = 2 * l.abs() + 2 * order as i64 + 4;
    for m in -reach..=reach {
        let am = m.abs();
        if m * l + am * (am + 1) / 2 > order as i64 {
            continue;
        }
        let budget = order as i64 - m * l;
        let mut k = -m;
        loop {
            let e = k * (k + 1) / 2;
            if e > budget && k >= 0 {
                break;
            }
            if e <= budget {
                out.add_term((m * l + e) as i32, 0, rat(sign(k)));
            }
            k += 1;
        }
    }
    out
}

pub fn check_s(l: i64, order: u32) -> VerificationReport {
    let n = order as i32;
    let mut report = VerificationReport::new(format!("S[{l}]")).with_order(order);
    let s = s_series(l, n);
    if l != 0 {
        let zero = TruncatedSeries::zero(&["p"], n);
        diff_failures(&mut report, "S_l", &s, &zero, n);
        return report;
    }
    let pp = euler_product("p", 1, n);
    let cube = pp.mul(&pp).unwrap().mul(&pp).unwrap().truncate(n);
    let mut closed = TruncatedSeries::zero(&["p"], n);
    let mut k = 0i64;
    while k * (k + 1) / 2 <= n as i64 {
        closed.add_term((k * (k + 1) / 2) as i32, 0, rat(sign(k) * (2 * k + 1)));
        k += 1;
    }
    diff_failures(&mut report, "S_0 vs (p;p)^3", &s, &cube, n);
    diff_failures(&mut report, "S_0 vs odd-weight sum", &s, &closed, n);
    report.note(format!("coefficient of p: {}", s.coeff(1, 0)));
    report
}

/// `sum_m p^(m l) (-1)^m p^((m^2-m)/2) = (p;p)(p^l;p)(p^(1-l);p)` through `p^order`.
pub fn check_jacobi_step(l: i64, order: u32) -> VerificationReport {
    let n = order as i32;
    let mut report = VerificationReport::new(format!("jacobi[{l}]")).with_order(order);
    let mut lhs = TruncatedSeries::zero(&["p"], n);
    let reach = 2 * l.abs() + 2 * n as i64 + 4;
    for m in -reach..=reach {
        let e = m * l + (m * m - m) / 2;
        if e <= n as i64 {
            lhs.add_term(e as i32, 0, rat(sign(m)));
        }
    }
    let f = |i: i64| TruncatedSeries::pochhammer(&["p"], rat(1), i as i32, 0, 1, n).unwrap();
    let rhs = f(1).mul(&f(l)).unwrap().mul(&f(1 - l)).unwrap().truncate(n);
    diff_failures(&mut report, "triple product", &lhs, &rhs, n);
    report
}

/// The product form `1/((s t; s^2)(s t^-1; s^2))` of the `(m, m)`-sector
/// kernel characters, through `s`-degree `smax`.
pub fn product_form_even(smax: i32) -> RatSeries {
    TruncatedSeries::pochhammer(&["s", "t"], rat(1), 1, 1, 2, smax)
        .unwrap()
        .mul(&TruncatedSeries::pochhammer(&["s", "t"], rat(1), 1, -1, 2, smax).unwrap())
        .unwrap()
        .inv()
        .unwrap()
}

/// The product form `1/((s^2 t^-1; s^2)(t; s^2))` of the `(m - 1/2, m)`-sector
/// kernel characters (prefactor `p^(-1/8) z^(1/4)` kept aside), with
/// `t`-exponents up to `tmax`.
pub fn product_form_odd(smax: i32, tmax: i32) -> RatSeries {
    let g = TruncatedSeries::pochhammer(&["s", "t"], rat(1), 2, -1, 2, smax)
        .unwrap()
        .mul(&TruncatedSeries::pochhammer(&["s", "t"], rat(1), 2, 1, 2, smax).unwrap())
        .unwrap()
        .inv()
        .unwrap();
    g.div_one_minus_t(1, tmax)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1(order: i32, cs: &[i64]) -> RatSeries {
        TruncatedSeries::from_terms(&["x"], order, cs.iter().enumerate().map(|(i, c)| ((i as i32, 0), rat(*c))))
    }

    #[test]
    fn geometric_series() {
        let f = x1(3, &[1, -1]);
        let g = f.inv().unwrap();
        assert_eq!(g, x1(3, &[1, 1, 1, 1]));
        assert_eq!(f.mul(&g).unwrap().truncate(3), x1(3, &[1]));
    }

    #[test]
    fn two_variable_inverse() {
        let a = TruncatedSeries::from_terms(&["s", "t"], 4, [((0, 0), rat(1)), ((1, 1), rat(-1))]);
        let b = TruncatedSeries::from_terms(&["s", "t"], 4, [((0, 0), rat(1)), ((1, -1), rat(-1))]);
        let inv = a.mul(&b).unwrap().inv().unwrap();
        assert_eq!(inv.coeff(1, 1), rat(1));
        assert_eq!(inv.coeff(2, 2), rat(1));
        assert_eq!(inv.coeff(2, 0), rat(1));
        assert_eq!(inv.coeff(1, 0), rat(0));
    }

    #[test]
    fn pochhammer_examples() {
        let p = TruncatedSeries::pochhammer(&["s", "t"], rat(1), 1, 1, 2, 4).unwrap();
        assert_eq!(p.coeff(0, 0), rat(1));
        assert_eq!(p.coeff(1, 1), rat(-1));
        assert_eq!(p.coeff(3, 1), rat(-1));
        assert_eq!(p.coeff(4, 2), rat(1));
        // pentagonal numbers (3k^2 -+ k)/2: 0, 1, 2, 5, 7, 12, 15
        let e = euler_product("p", 1, 16);
        let want = [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)];
        assert_eq!(e.terms().count(), want.len());
        for (k, c) in want {
            assert_eq!(e.coeff(k, 0), rat(c));
        }
        let zero_prefactor = TruncatedSeries::pochhammer(&["p"], rat(0), 2, 0, 2, 6).unwrap();
        assert_eq!(zero_prefactor, TruncatedSeries::one(&["p"], 6));
        assert_eq!(
            TruncatedSeries::<BigRational>::pochhammer(&["p"], rat(1), 1, 0, 0, 6),
            Err(SeriesError::NonStabilizing)
        );
    }

    #[test]
    fn pochhammer_with_vanishing_factor() {
        // (p^-1; p) contains the factor (1 - p^0) = 0
        let z = TruncatedSeries::pochhammer(&["p"], rat(1), -1, 0, 1, 8).unwrap();
        assert!(z.is_zero());
        // (p^-1 x; p) has a genuine negative power
        let v = TruncatedSeries::pochhammer(&["p"], rat(2), -1, 0, 1, 3).unwrap();
        assert_eq!(v.coeff(-1, 0), rat(-2) * rat(-1));
    }

    #[test]
    fn mismatched_variables() {
        let a = x1(3, &[1]);
        let b = TruncatedSeries::one(&["p"], 3);
        assert!(matches!(a.mul(&b), Err(SeriesError::MismatchedVariables(..))));
    }

    #[test]
    fn identity_checks() {
        assert!(check_star_identity(2).passed());
        assert!(check_star_identity(0).passed());
        assert!(!star_identity_report(2, true).passed());
        let s0 = check_s(0, 8);
        assert!(s0.passed());
        assert_eq!(s_series(0, 8).coeff(1, 0), rat(-3));
        assert!(check_s(1, 8).passed());
        assert!(check_s(0, 0).passed());
        for l in 0..3 {
            assert!(check_jacobi_step(l, 8).passed());
        }
    }

    #[test]
    fn euler_expansions_are_inverse() {
        let a = UScalar::u_pow(12);
        let p = UScalar::u_pow(16);
        let f = pochhammer_scalar_base("z", &a, &p, 3);
        let g = pochhammer_scalar_base_inv("z", &a, &p, 3);
        let prod = f.mul(&g).unwrap().truncate(3);
        assert_eq!(prod, TruncatedSeries::one(&["z"], 3));
    }

    #[test]
    fn odd_form_counts_states() {
        let f = product_form_odd(12, 6);
        for ((_, _), c) in f.terms() {
            assert!(c.is_integer() && *c > rat(0));
        }
    }
}
