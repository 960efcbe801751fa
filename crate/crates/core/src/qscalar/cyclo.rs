//! Cyclotomic polynomials and the modular roots used to reject
//! non-divisibility quickly.
//!
//! Tables are built lazily and never change afterwards, so concurrent
//! readers only ever observe fully constructed entries.

use std::sync::{Arc, OnceLock, RwLock};

use super::poly::LPoly;

#[derive(Debug)]
pub struct Cyclotomic {
    pub n: u32,
    /// Ascending coefficients of the monic polynomial.
    pub coeffs: Vec<i128>,
    pub poly: LPoly,
    /// A prime `p = 1 (mod n)` below 2^31 and an element of order exactly `n`.
    prime: u64,
    root: u64,
}

impl Cyclotomic {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact quotient `p / Phi_n` when it divides.
    ///
    /// A primitive `n`-th root `w` modulo `prime` is a root of `Phi_n`
    /// there, so `p(w) != 0 (mod prime)` proves non-divisibility without
    /// a long division.
    pub fn try_divide(&self, p: &LPoly) -> Option<LPoly> {
        if p.len() <= self.degree() {
            return None;
        }
        if p.eval_mod(self.prime, self.root) != 0 {
            return None;
        }
        p.div_monic(&self.coeffs)
    }
}

fn table() -> &'static RwLock<Vec<Option<Arc<Cyclotomic>>>> {
    static TABLE: OnceLock<RwLock<Vec<Option<Arc<Cyclotomic>>>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Vec::new()))
}

pub fn cyclotomic(n: u32) -> Arc<Cyclotomic> {
    assert!(n >= 1);
    {
        let t = table().read().unwrap();
        if let Some(Some(c)) = t.get(n as usize) {
            return c.clone();
        }
    }
    let built = Arc::new(build(n));
    let mut t = table().write().unwrap();
    if t.len() <= n as usize {
        t.resize(n as usize + 1, None);
    }
    t[n as usize].get_or_insert(built).clone()
}

fn build(n: u32) -> Cyclotomic {
    // Phi_n = (u^n - 1) / prod_{d | n, d < n} Phi_d
    let mut c = vec![0i128; n as usize + 1];
    c[0] = -1;
    c[n as usize] = 1;
    let mut p = LPoly::from_coeffs(0, c);
    for d in 1..n {
        if n % d == 0 {
            let phi = cyclotomic(d);
            p = p.div_monic(&phi.coeffs).expect("cyclotomic factor divides u^n - 1");
        }
    }
    let coeffs = p.coeffs().to_vec();
    let (prime, root) = modular_root(n);
    Cyclotomic { n, coeffs, poly: p, prime, root }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for `n < 3.4e9` (bases 2, 3, 5, 7).
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

fn modular_root(n: u32) -> (u64, u64) {
    let n = n as u64;
    let factors = prime_factors(n);
    let mut k = (1u64 << 31) / n;
    loop {
        let p = k * n + 1;
        if is_prime(p) {
            for g in 2..p {
                let w = pow_mod(g, (p - 1) / n, p);
                if factors.iter().all(|r| pow_mod(w, n / r, p) != 1) && (n != 1 || w == 1) {
                    return (p, w);
                }
            }
        }
        k -= 1;
    }
}

/// All `n` whose cyclotomic polynomial has degree at most `d`.
///
/// `n / phi(n) < 7` for every `n < 10^20`, so scanning `n <= 7d + 30`
/// finds them all for any degree this crate can represent.
pub fn candidates_up_to_degree(d: usize) -> Vec<u32> {
    let limit = 7 * d as u64 + 30;
    (1..=limit)
        .filter(|n| euler_phi(*n) as usize <= d)
        .map(|n| n as u32)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).coeffs, vec![-1, 1]);
        assert_eq!(cyclotomic(2).coeffs, vec![1, 1]);
        assert_eq!(cyclotomic(4).coeffs, vec![1, 0, 1]);
        assert_eq!(cyclotomic(6).coeffs, vec![1, -1, 1]);
        assert_eq!(cyclotomic(12).coeffs, vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic(16).degree(), 8);
    }

    #[test]
    fn product_over_divisors_is_u_n_minus_one() {
        for n in 1..40u32 {
            let mut prod = LPoly::one();
            for d in 1..=n {
                if n % d == 0 {
                    prod = prod.mul(&cyclotomic(d).poly);
                }
            }
            let mut want = vec![0i128; n as usize + 1];
            want[0] = -1;
            want[n as usize] = 1;
            assert_eq!(prod, LPoly::from_coeffs(0, want), "n = {n}");
        }
    }

    #[test]
    fn modular_roots_have_exact_order() {
        for n in [1u32, 2, 3, 8, 15, 64, 105] {
            let c = cyclotomic(n);
            assert_eq!((c.prime - 1) % n as u64, 0);
            assert_eq!(c.poly.eval_mod(c.prime, c.root), 0);
        }
    }

    #[test]
    fn totient_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
    }
}
