//! Integer polynomial gcd and exact division. Only reached when a
//! denominator acquires a factor that is not cyclotomic, which is rare.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::poly::LPoly;

fn to_big(p: &LPoly) -> Vec<BigInt> {
    p.coeffs().iter().map(|c| BigInt::from(*c)).collect()
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    if v.last().is_some_and(|c| c.is_negative()) {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

/// Pseudo-remainder of `a` by `b` (both nonzero, ascending coefficients).
fn prem(mut a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    while a.len() > db {
        let da = a.len() - 1;
        let la = a[da].clone();
        for c in a.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            a[da - db + j] -= &la * bj;
        }
        trim(&mut a);
    }
    a
}

/// Primitive gcd (positive leading coefficient) of two ordinary polynomials.
pub fn gcd(a: &LPoly, b: &LPoly) -> LPoly {
    let mut x = primitive(to_big(&a.ordinary()));
    let mut y = primitive(to_big(&b.ordinary()));
    if x.is_empty() {
        return from_big(&y);
    }
    while !y.is_empty() {
        let r = prem(x, &y);
        x = y;
        y = primitive(r);
    }
    from_big(&primitive(x))
}

fn from_big(v: &[BigInt]) -> LPoly {
    LPoly::from_coeffs(
        0,
        v.iter()
            .map(|c| c.to_i128().expect("coefficient overflow in polynomial gcd"))
            .collect(),
    )
}

/// Exact quotient `a / b` over the integers for ordinary polynomials.
pub fn div_exact(a: &LPoly, b: &LPoly) -> Option<LPoly> {
    let a = a.ordinary();
    let b = b.ordinary();
    if b.is_zero() {
        return None;
    }
    if a.is_zero() {
        return Some(a);
    }
    let mut r = to_big(&a);
    let bb = to_big(&b);
    let db = bb.len() - 1;
    if r.len() <= db {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let da = r.len() - 1;
        let (quo, rem) = r[da].div_rem(&bb[db]);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in bb.iter().enumerate() {
            r[da - db + j] -= &quo * bj;
        }
        q[da - db] = quo;
        trim(&mut r);
    }
    if !r.is_empty() {
        return None;
    }
    Some(from_big(&q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_products() {
        let f = LPoly::from_coeffs(0, vec![1, 1, 1, 2]); // not cyclotomic
        let g = LPoly::from_coeffs(0, vec![3, 0, 1]);
        let h = LPoly::from_coeffs(0, vec![-2, 5]);
        let a = f.mul(&g).scale(6);
        let b = f.mul(&h).scale(-4);
        assert_eq!(gcd(&a, &b), f);
        assert_eq!(div_exact(&a, &f), Some(g.scale(6)));
        assert_eq!(div_exact(&g, &h), None);
    }
}
