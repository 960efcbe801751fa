//! Fock modules `F_{l1,l2}` over two Heisenberg algebras.
//!
//! `[a_n, a_-n] = [2n][-n/2]/n` and `[b_n, b_-n] = n`. A basis monomial is a
//! PBW product of creation modes over the vacuum `|l1, l2>`; `l1` is a
//! half-integer and is stored doubled.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use smallvec::SmallVec;
use thiserror::Error;

use crate::qscalar::{qint, qint_half, UScalar};

pub type Parts = SmallVec<[u8; 8]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("malformed monomial {0:?}")]
    Monomial(String),
    #[error("malformed sector {0:?}")]
    Sector(String),
}

/// Vacuum labels `(l1, l2)` with `l1` doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sector {
    pub l1x2: i32,
    pub l2: i32,
}

impl Sector {
    pub const fn new(l1x2: i32, l2: i32) -> Self {
        Sector { l1x2, l2 }
    }

    pub fn shifted(self, dl1x2: i32, dl2: i32) -> Self {
        Sector { l1x2: self.l1x2 + dl1x2, l2: self.l2 + dl2 }
    }

    /// `8 (l1^2 - l2^2 + l2) / 2`, the vacuum grading eigenvalue times 8.
    pub fn vacuum_dbar8(self) -> i64 {
        let (a, b) = (self.l1x2 as i64, self.l2 as i64);
        a * a - 4 * b * b + 4 * b
    }
}

pub fn fmt_half(x2: i32) -> String {
    if x2 % 2 == 0 {
        format!("{}", x2 / 2)
    } else {
        format!("{x2}/2")
    }
}

/// Parses `3`, `-1/2` or `1.5` into a doubled half-integer.
pub fn parse_half(s: &str) -> Option<i32> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i32 = n.trim().parse().ok()?;
        match d.trim() {
            "1" => Some(2 * n),
            "2" => Some(n),
            _ => None,
        }
    } else if let Ok(n) = s.parse::<i32>() {
        Some(2 * n)
    } else {
        let f: f64 = s.parse().ok()?;
        let x2 = (2.0 * f).round();
        ((2.0 * f - x2).abs() < 1e-12).then_some(x2 as i32)
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", fmt_half(self.l1x2), self.l2)
    }
}

impl FromStr for Sector {
    type Err = FockError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FockError::Sector(s.to_string());
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let l1x2 = parse_half(a).ok_or_else(bad)?;
        let l2 = b.trim().parse().map_err(|_| bad())?;
        Ok(Sector { l1x2, l2 })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisMonomial {
    pub sector: Sector,
    /// Indices `m` of `a_-m`, weakly decreasing.
    pub a: Parts,
    /// Indices `n` of `b_-n`, weakly decreasing.
    pub b: Parts,
}

impl BasisMonomial {
    pub fn vacuum(sector: Sector) -> Self {
        BasisMonomial { sector, a: Parts::new(), b: Parts::new() }
    }

    pub fn new(sector: Sector, a: &[u8], b: &[u8]) -> Self {
        let mut a: Parts = a.iter().copied().collect();
        let mut b: Parts = b.iter().copied().collect();
        a.sort_unstable_by(|x, y| y.cmp(x));
        b.sort_unstable_by(|x, y| y.cmp(x));
        BasisMonomial { sector, a, b }
    }

    pub fn degree(&self) -> u32 {
        self.a.iter().chain(self.b.iter()).map(|x| *x as u32).sum()
    }

    /// Grading eigenvalue times 8: `8 (-degree + (l1^2 - l2^2 + l2)/2)`.
    pub fn dbar8(&self) -> i64 {
        self.sector.vacuum_dbar8() - 8 * self.degree() as i64
    }
}

impl fmt::Display for BasisMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in self.a.iter() {
            write!(f, "a[-{m}]")?;
        }
        for n in self.b.iter() {
            write!(f, "b[-{n}]")?;
        }
        write!(f, "|{}>", self.sector)
    }
}

impl FromStr for BasisMonomial {
    type Err = FockError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FockError::Monomial(s.to_string());
        let s = s.trim();
        let bar = s.find('|').ok_or_else(bad)?;
        let (ops, vac) = s.split_at(bar);
        let vac = vac.strip_prefix('|').and_then(|v| v.strip_suffix('>')).ok_or_else(bad)?;
        let sector: Sector = vac.parse().map_err(|_| bad())?;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        let mut rest = ops;
        while !rest.is_empty() {
            let kind = rest.as_bytes()[0];
            let close = rest.find(']').ok_or_else(bad)?;
            let inner = rest.get(1..close).and_then(|x| x.strip_prefix("[-")).ok_or_else(bad)?;
            let idx: u8 = inner.parse().map_err(|_| bad())?;
            if idx == 0 {
                return Err(bad());
            }
            match kind {
                b'a' => a.push(idx),
                b'b' => b.push(idx),
                _ => return Err(bad()),
            }
            rest = &rest[close + 1..];
        }
        Ok(BasisMonomial::new(sector, &a, &b))
    }
}

/// Finite linear combination of basis monomials.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<BasisMonomial, UScalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(m: BasisMonomial) -> Self {
        Self::term(m, UScalar::one())
    }

    pub fn vacuum(sector: Sector) -> Self {
        Self::basis(BasisMonomial::vacuum(sector))
    }

    pub fn term(m: BasisMonomial, c: UScalar) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisMonomial, &UScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &BasisMonomial) -> UScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: BasisMonomial, c: UScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                let v = e.get().add_ref(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &FockVector, c: &UScalar) {
        if c.is_zero() {
            return;
        }
        let one = c.is_one();
        for (m, v) in &other.terms {
            self.add_term(m.clone(), if one { v.clone() } else { v.mul_ref(c) });
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &UScalar::one());
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &UScalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &UScalar) -> FockVector {
        let mut out = FockVector::zero();
        out.add_scaled(self, c);
        out
    }

    /// Distinct sectors present.
    pub fn sectors(&self) -> Vec<Sector> {
        let mut s: Vec<Sector> = self.terms.keys().map(|m| m.sector).collect();
        s.dedup();
        s.sort();
        s.dedup();
        s
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Rendering as `(monomial, coefficient)` string pairs.
    pub fn render(&self) -> Vec<(String, String)> {
        self.terms.iter().map(|(m, c)| (m.to_string(), c.to_string())).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(m, c)| json!([m.to_string(), c.to_string()])).collect())
    }
}

impl FromIterator<(BasisMonomial, UScalar)> for FockVector {
    fn from_iter<I: IntoIterator<Item = (BasisMonomial, UScalar)>>(iter: I) -> Self {
        let mut v = FockVector::zero();
        for (m, c) in iter {
            v.add_term(m, c);
        }
        v
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {m}")?;
        }
        Ok(())
    }
}

/// Integer partitions of `n` with parts in weakly decreasing order, listed
/// in reverse lexicographic order (`[n]` first).
pub fn partitions(n: u32) -> Arc<Vec<Parts>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Parts>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    fn rec(n: u32, max: u32, cur: &mut Parts, out: &mut Vec<Parts>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(n)).rev() {
            cur.push(k as u8);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    assert!(n < 256, "mode index out of range");
    let mut out = Vec::new();
    rec(n, n, &mut Parts::new(), &mut out);
    let out = Arc::new(out);
    cache.lock().unwrap().insert(n, out.clone());
    out
}

/// Pairs of partitions `(a, b)` with `|a| + |b| = degree`, `|a|` descending.
pub fn two_colored_partitions(degree: u32) -> Arc<Vec<(Parts, Parts)>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<(Parts, Parts)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&degree) {
        return p.clone();
    }
    let mut out = Vec::new();
    for da in (0..=degree).rev() {
        for pa in partitions(da).iter() {
            for pb in partitions(degree - da).iter() {
                out.push((pa.clone(), pb.clone()));
            }
        }
    }
    let out = Arc::new(out);
    cache.lock().unwrap().insert(degree, out.clone());
    out
}

/// Basis of the degree-`degree` piece of `F_{l1,l2}`.
pub fn enumerate_basis(sector: Sector, degree: u32) -> Vec<BasisMonomial> {
    two_colored_partitions(degree)
        .iter()
        .map(|(a, b)| BasisMonomial { sector, a: a.clone(), b: b.clone() })
        .collect()
}

/// All basis monomials of degree at most `max_degree`.
pub fn enumerate_basis_upto(sector: Sector, max_degree: u32) -> Vec<BasisMonomial> {
    (0..=max_degree).flat_map(|d| enumerate_basis(sector, d)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Osc {
    A,
    B,
}

/// `[a_k, a_-k] = [2k][-k/2]/k`.
pub fn a_bracket(k: u32) -> UScalar {
    static CACHE: OnceLock<Mutex<HashMap<u32, UScalar>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&k) {
        return v.clone();
    }
    let v = (qint(2 * k as i32) * qint_half(-(k as i32))).mul_ref(&UScalar::from_ratio(1, k as i128));
    cache.lock().unwrap().insert(k, v.clone());
    v
}

pub fn bracket(kind: Osc, k: u32) -> UScalar {
    match kind {
        Osc::A => a_bracket(k),
        Osc::B => UScalar::from_int(k as i128),
    }
}

fn remove_one(parts: &Parts, k: u8) -> Option<(Parts, usize)> {
    let count = parts.iter().filter(|x| **x == k).count();
    if count == 0 {
        return None;
    }
    let pos = parts.iter().position(|x| *x == k).unwrap();
    let mut p = parts.clone();
    p.remove(pos);
    Some((p, count))
}

fn insert_part(parts: &Parts, k: u8) -> Parts {
    let mut p = parts.clone();
    let pos = p.iter().position(|x| *x < k).unwrap_or(p.len());
    p.insert(pos, k);
    p
}

/// Action of a nonzero oscillator mode; `n < 0` creates, `n > 0` annihilates.
pub fn apply_oscillator(kind: Osc, n: i32, v: &FockVector) -> FockVector {
    assert!(n != 0, "zero modes act diagonally");
    let k = n.unsigned_abs();
    assert!(k < 256, "mode index out of range");
    let k8 = k as u8;
    let mut out = FockVector::zero();
    if n < 0 {
        for (m, c) in v.iter() {
            let mut m2 = m.clone();
            match kind {
                Osc::A => m2.a = insert_part(&m.a, k8),
                Osc::B => m2.b = insert_part(&m.b, k8),
            }
            out.add_term(m2, c.clone());
        }
        return out;
    }
    let br = bracket(kind, k);
    for (m, c) in v.iter() {
        let parts = match kind {
            Osc::A => &m.a,
            Osc::B => &m.b,
        };
        if let Some((rest, count)) = remove_one(parts, k8) {
            let mut m2 = m.clone();
            match kind {
                Osc::A => m2.a = rest,
                Osc::B => m2.b = rest,
            }
            out.add_term(m2, c.mul_ref(&br).mul_ref(&UScalar::from_int(count as i128)));
        }
    }
    out
}

/// `e^{+-P_a}` / `e^{+-P_b}`: moves the vacuum label by one unit.
pub fn apply_shift(kind: Osc, direction: i32, v: &FockVector) -> FockVector {
    assert!(direction == 1 || direction == -1);
    v.iter()
        .map(|(m, c)| {
            let mut m2 = m.clone();
            m2.sector = match kind {
                Osc::A => m.sector.shifted(2 * direction, 0),
                Osc::B => m.sector.shifted(0, direction),
            };
            (m2, c.clone())
        })
        .collect()
}

/// Grading eigenvalue `-degree + (l1^2 - l2^2 + l2)/2`.
pub fn dbar_of(m: &BasisMonomial) -> Ratio<i64> {
    Ratio::new(m.dbar8(), 8)
}

/// Coefficients of `Lambda_0`, `Lambda_1` and `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub c_lambda0: Ratio<i64>,
    pub c_lambda1: Ratio<i64>,
    pub c_delta: Ratio<i64>,
}

impl Weight {
    pub fn new(c0: (i64, i64), c1: (i64, i64), cd: (i64, i64)) -> Self {
        Weight {
            c_lambda0: Ratio::new(c0.0, c0.1),
            c_lambda1: Ratio::new(c1.0, c1.1),
            c_delta: Ratio::new(cd.0, cd.1),
        }
    }

    /// Pairing with `h0 + h1`.
    pub fn level(&self) -> Ratio<i64> {
        self.c_lambda0 + self.c_lambda1
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})L0 + ({})L1 + ({})d", self.c_lambda0, self.c_lambda1, self.c_delta)
    }
}

/// `(-1/2 - l1) Lambda_0 + l1 Lambda_1 + dbar delta`.
pub fn weight_of(m: &BasisMonomial) -> Weight {
    let l1 = Ratio::new(m.sector.l1x2 as i64, 2);
    Weight { c_lambda0: Ratio::new(-1, 2) - l1, c_lambda1: l1, c_delta: dbar_of(m) }
}

/// Coefficient of the vacuum `|l1, l2>` in `v`.
pub fn extract_vacuum(v: &FockVector, sector: Sector) -> UScalar {
    v.coeff(&BasisMonomial::vacuum(sector))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(s: &str) -> BasisMonomial {
        s.parse().unwrap()
    }

    #[test]
    fn basis_counts() {
        assert_eq!(enumerate_basis(Sector::new(0, 0), 0), vec![mono("|0,0>")]);
        assert_eq!(
            enumerate_basis(Sector::new(0, 0), 1),
            vec![mono("a[-1]|0,0>"), mono("b[-1]|0,0>")]
        );
        let counts: Vec<usize> = (0..10).map(|d| enumerate_basis(Sector::new(2, 1), d).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 10, 20, 36, 65, 110, 185, 300]);
    }

    #[test]
    fn monomial_grammar_round_trip() {
        let m = mono("a[-2]a[-1]b[-3]|1/2,-1>");
        assert_eq!(m.a.as_slice(), &[2, 1]);
        assert_eq!(m.b.as_slice(), &[3]);
        assert_eq!(m.sector, Sector::new(1, -1));
        assert_eq!(m.to_string(), "a[-2]a[-1]b[-3]|1/2,-1>");
        assert_eq!(mono("a[-1]b[-3]a[-2]|1/2,-1>"), m);
        assert_eq!(mono(&m.to_string()), m);
        assert!("a[-0]|0,0>".parse::<BasisMonomial>().is_err());
        assert!("a[-1]|0>".parse::<BasisMonomial>().is_err());
    }

    #[test]
    fn oscillator_brackets() {
        let v = FockVector::basis(mono("a[-1]|0,0>"));
        let out = apply_oscillator(Osc::A, 1, &v);
        // [2][-1/2] = -(q + q^-1)/(q^1/2 + q^-1/2)
        let want = -(UScalar::u_pow(4) + UScalar::u_pow(-4))
            .checked_div(&(UScalar::u_pow(2) + UScalar::u_pow(-2)))
            .unwrap();
        assert_eq!(out, FockVector::term(mono("|0,0>"), want));
        let v = FockVector::basis(mono("b[-2]|0,0>"));
        assert_eq!(apply_oscillator(Osc::B, 2, &v), FockVector::term(mono("|0,0>"), UScalar::from_int(2)));
        assert!(apply_oscillator(Osc::A, 3, &FockVector::vacuum(Sector::new(10, 2))).is_zero());
        // repeated parts pick up their multiplicity
        let v = FockVector::basis(mono("b[-1]b[-1]|0,0>"));
        assert_eq!(apply_oscillator(Osc::B, 1, &v), FockVector::term(mono("b[-1]|0,0>"), UScalar::from_int(2)));
    }

    #[test]
    fn shifts() {
        let v = FockVector::vacuum(Sector::new(0, 0));
        assert_eq!(apply_shift(Osc::A, 1, &v), FockVector::vacuum(Sector::new(2, 0)));
        let w = FockVector::basis(mono("b[-1]|1,1>"));
        assert_eq!(apply_shift(Osc::B, -1, &w), FockVector::basis(mono("b[-1]|1,0>")));
        assert_eq!(apply_shift(Osc::A, -1, &apply_shift(Osc::A, 1, &w)), w);
    }

    #[test]
    fn grading_and_weights() {
        assert_eq!(dbar_of(&mono("|0,0>")), Ratio::new(0, 1));
        assert_eq!(dbar_of(&mono("|-1/2,0>")), Ratio::new(1, 8));
        assert_eq!(dbar_of(&mono("b[-1]|1,1>")), Ratio::new(-1, 2));
        assert_eq!(weight_of(&mono("|0,0>")), Weight::new((-1, 2), (0, 1), (0, 1)));
        assert_eq!(weight_of(&mono("b[-1]|1,1>")), Weight::new((-3, 2), (1, 1), (-1, 2)));
        assert_eq!(weight_of(&mono("|-3/2,-1>")), Weight::new((1, 1), (-3, 2), (1, 8)));
        assert_eq!(weight_of(&mono("|-1/2,0>")), Weight::new((0, 1), (-1, 2), (1, 8)));
    }

    #[test]
    fn vacuum_extraction() {
        let mut v = FockVector::vacuum(Sector::new(0, 0));
        v.add_term(mono("a[-1]|0,0>"), UScalar::from_int(3));
        assert!(extract_vacuum(&v, Sector::new(0, 0)).is_one());
        assert!(extract_vacuum(&FockVector::basis(mono("b[-1]|1,1>")), Sector::new(2, 1)).is_zero());
        let q = UScalar::u_pow(4);
        assert_eq!(extract_vacuum(&FockVector::term(mono("|0,-1>"), q.clone()), Sector::new(0, -1)), q);
    }
}
