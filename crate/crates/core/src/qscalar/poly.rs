//! Laurent polynomials in `u` with `i128` coefficients.
//!
//! Every arithmetic routine checks for overflow; the multiplication kernel
//! skips the checks when the operand bit lengths prove they cannot fire.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct LPoly {
    low: i32,
    coeffs: Vec<i128>,
}

#[cold]
fn overflow() -> ! {
    panic!("coefficient overflow in Laurent polynomial arithmetic")
}

fn bit_len(x: i128) -> u32 {
    128 - x.unsigned_abs().leading_zeros()
}

impl LPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: i128, e: i32) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            LPoly { low: e, coeffs: vec![c] }
        }
    }

    /// Builds `sum coeffs[i] u^(low + i)`, trimming zeros at both ends.
    pub fn from_coeffs(low: i32, mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| **c == 0).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        if lead > 0 {
            coeffs.drain(..lead);
        }
        LPoly { low: low + lead as i32, coeffs }
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i128)>>(terms: I) -> Self {
        let terms: Vec<(i32, i128)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![0i128; (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = slot.checked_add(c).unwrap_or_else(|| overflow());
        }
        Self::from_coeffs(lo, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs == [1]
    }

    /// Lowest exponent; meaningless for the zero polynomial.
    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i32) -> i128 {
        let i = e - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            0
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn leading(&self) -> i128 {
        *self.coeffs.last().unwrap_or(&0)
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, i128)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(move |(i, c)| (self.low + i as i32, *c))
    }

    pub fn max_bits(&self) -> u32 {
        self.coeffs.iter().map(|c| bit_len(*c)).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        LPoly {
            low: self.low,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.checked_neg().unwrap_or_else(|| overflow()))
                .collect(),
        }
    }

    pub fn shift(&self, e: i32) -> Self {
        LPoly { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn shift_in_place(&mut self, e: i32) {
        if !self.is_zero() {
            self.low += e;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, -1)
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, other: &Self, k: i128) -> Self {
        if other.is_zero() || k == 0 {
            return self.clone();
        }
        if self.is_zero() {
            return other.scale(k);
        }
        let lo = self.low.min(other.low);
        let hi = self.high().max(other.high());
        let mut coeffs = vec![0i128; (hi - lo + 1) as usize];
        let off = (self.low - lo) as usize;
        coeffs[off..off + self.coeffs.len()].copy_from_slice(&self.coeffs);
        let off = (other.low - lo) as usize;
        for (i, c) in other.coeffs.iter().enumerate() {
            let t = c.checked_mul(k).unwrap_or_else(|| overflow());
            let slot = &mut coeffs[off + i];
            *slot = slot.checked_add(t).unwrap_or_else(|| overflow());
        }
        Self::from_coeffs(lo, coeffs)
    }

    pub fn scale(&self, k: i128) -> Self {
        if k == 0 {
            return Self::zero();
        }
        LPoly {
            low: self.low,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.checked_mul(k).unwrap_or_else(|| overflow()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.coeffs.len() == 1 {
            let mut p = other.scale(self.coeffs[0]);
            p.low += self.low;
            return p;
        }
        if other.coeffs.len() == 1 {
            let mut p = self.scale(other.coeffs[0]);
            p.low += other.low;
            return p;
        }
        let (a, b) = (&self.coeffs, &other.coeffs);
        let mut out = vec![0i128; a.len() + b.len() - 1];
        let terms = a.len().min(b.len()) as i128;
        let safe = self.max_bits() + other.max_bits() + bit_len(terms) <= 126;
        if safe {
            for (i, x) in a.iter().enumerate() {
                if *x == 0 {
                    continue;
                }
                for (o, y) in out[i..].iter_mut().zip(b.iter()) {
                    *o += x * y;
                }
            }
        } else {
            for (i, x) in a.iter().enumerate() {
                if *x == 0 {
                    continue;
                }
                for (o, y) in out[i..].iter_mut().zip(b.iter()) {
                    let t = x.checked_mul(*y).unwrap_or_else(|| overflow());
                    *o = o.checked_add(t).unwrap_or_else(|| overflow());
                }
            }
        }
        Self::from_coeffs(self.low + other.low, out)
    }

    /// Nonnegative gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> i128 {
        let mut g: i128 = 0;
        for c in &self.coeffs {
            g = gcd_i128(g, *c);
            if g == 1 {
                break;
            }
        }
        g
    }

    /// Divides every coefficient by `k`, which must divide all of them.
    pub fn div_int_exact(&self, k: i128) -> Self {
        debug_assert!(k != 0);
        LPoly {
            low: self.low,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    debug_assert!(c % k == 0);
                    c / k
                })
                .collect(),
        }
    }

    /// Exact quotient by the ordinary monic polynomial `d` (ascending
    /// coefficients, constant term nonzero), or `None` if it does not divide.
    pub fn div_monic(&self, d: &[i128]) -> Option<Self> {
        let m = d.len() - 1;
        debug_assert_eq!(d[m], 1);
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.coeffs.len();
        if n <= m {
            return None;
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![0i128; n - m];
        for i in (m..n).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            q[i - m] = c;
            for (j, dj) in d.iter().enumerate() {
                if *dj != 0 {
                    let t = c.checked_mul(*dj).unwrap_or_else(|| overflow());
                    let slot = &mut r[i - m + j];
                    *slot = slot.checked_sub(t).unwrap_or_else(|| overflow());
                }
            }
        }
        if r[..m].iter().any(|c| *c != 0) {
            return None;
        }
        Some(Self::from_coeffs(self.low, q))
    }

    /// Value of `u^(-low) * self` at `w` modulo the prime `p < 2^32`.
    pub fn eval_mod(&self, p: u64, w: u64) -> u64 {
        let pi = p as i128;
        let mut acc: u64 = 0;
        for c in self.coeffs.iter().rev() {
            let cm = if let Ok(small) = i64::try_from(*c) {
                small.rem_euclid(p as i64) as u64
            } else {
                c.rem_euclid(pi) as u64
            };
            acc = (acc * w + cm) % p;
        }
        acc
    }

    /// Multiplies out `u^(-low) * self`, dropping the monomial factor.
    pub fn ordinary(&self) -> Self {
        LPoly { low: 0, coeffs: self.coeffs.clone() }
    }
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: i128,
    e: i32,
) -> fmt::Result {
    let mag = c.unsigned_abs();
    if first {
        if c < 0 {
            write!(f, "-")?;
        }
    } else if c < 0 {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    match (mag, e) {
        (_, 0) => write!(f, "{mag}"),
        (1, 1) => write!(f, "u"),
        (1, _) => write!(f, "u^{e}"),
        (_, 1) => write!(f, "{mag}*u"),
        _ => write!(f, "{mag}*u^{e}"),
    }
}

impl fmt::Display for LPoly {
    /// Highest power first, e.g. `-u^2 + 3` or `u^4 + u^-4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().rev().enumerate() {
            write_term(f, i == 0, c, e)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(low: i32, c: &[i128]) -> LPoly {
        LPoly::from_coeffs(low, c.to_vec())
    }

    #[test]
    fn trims_and_renders() {
        let x = p(-2, &[0, 0, 3, 0, -1, 0]);
        assert_eq!(x.low(), 0);
        assert_eq!(x.high(), 2);
        assert_eq!(x.to_string(), "-u^2 + 3");
        assert_eq!(p(-4, &[1, 0, 0, 0, 0, 0, 0, 0, 1]).to_string(), "u^4 + u^-4");
    }

    #[test]
    fn multiplication_and_exact_division() {
        let a = p(0, &[-1, 1]);
        let b = p(0, &[1, 1]);
        let ab = a.mul(&b);
        assert_eq!(ab, p(0, &[-1, 0, 1]));
        assert_eq!(ab.div_monic(&[1, 1]), Some(a.clone()));
        assert_eq!(p(0, &[1, 0, 1]).div_monic(&[1, 1]), None);
    }

    #[test]
    fn modular_evaluation() {
        // u^2 + 1 vanishes at a square root of -1 modulo 13 (5^2 = 25 = -1).
        assert_eq!(p(0, &[1, 0, 1]).eval_mod(13, 5), 0);
        assert_ne!(p(0, &[1, 0, 2]).eval_mod(13, 5), 0);
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_is_detected() {
        let big = LPoly::monomial(i128::MAX / 2, 0);
        let _ = big.mul(&LPoly::monomial(4, 0));
    }
}
