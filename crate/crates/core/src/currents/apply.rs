//! Mode action of current expressions on Fock vectors.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use super::{CurrentError, CurrentExpr, CurrentTerm, Factor, Family};
use crate::fock::{a_bracket, two_colored_partitions, BasisMonomial, FockVector, Parts, Sector};
use crate::qscalar::UScalar;

type Expansion = Arc<Vec<(Parts, Parts, UScalar)>>;

/// Combined exponent coefficients of one normal-ordered product, with
/// cached creation expansions.
pub struct PreparedTerm {
    factors: Vec<Factor>,
    /// Zero-mode z-exponent (quarter units) is `za * l1x2 + zb * l2`.
    za: i32,
    zb: i32,
    kpow: i32,
    pub shift: (i32, i32),
    inner: RwLock<Inner>,
}

#[derive(Default)]
struct Inner {
    /// `ca[k]`: coefficient of `a_-k z^k`; index 0 unused.
    ca: Vec<UScalar>,
    cb: Vec<UScalar>,
    /// Annihilation coefficient of `a_k z^-k` times the bracket.
    pa: Vec<UScalar>,
    pb: Vec<UScalar>,
    expansions: HashMap<u32, Expansion>,
    zero_modes: HashMap<Sector, Option<UScalar>>,
}

/// Shared prepared form of a factor list.
pub fn prepared(factors: &[Factor]) -> Arc<PreparedTerm> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<Factor>, Arc<PreparedTerm>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap();
    guard
        .entry(factors.to_vec())
        .or_insert_with(|| Arc::new(PreparedTerm::new(factors)))
        .clone()
}

impl PreparedTerm {
    fn new(factors: &[Factor]) -> Self {
        let (mut za, mut zb, mut kpow, mut sa, mut sb) = (0, 0, 0, 0, 0);
        for f in factors {
            let (a, b) = f.gen.zero_mode_form();
            za += a;
            zb += b;
            kpow += f.gen.k_power();
            let (da, db) = f.gen.shift();
            sa += da;
            sb += db;
        }
        PreparedTerm {
            factors: factors.to_vec(),
            za,
            zb,
            kpow,
            shift: (sa, sb),
            inner: RwLock::new(Inner::default()),
        }
    }

    fn ensure(&self, kmax: u32) {
        if self.inner.read().unwrap().ca.len() > kmax as usize {
            return;
        }
        let mut guard = self.inner.write().unwrap();
        let inner = &mut *guard;
        let start = inner.ca.len().max(1) as u32;
        if inner.ca.is_empty() {
            for v in [&mut inner.ca, &mut inner.cb, &mut inner.pa, &mut inner.pb] {
                v.push(UScalar::zero());
            }
        }
        for k in start..=kmax {
            let ki = k as i32;
            let (mut ca, mut cb, mut aa, mut ab) = (UScalar::zero(), UScalar::zero(), UScalar::zero(), UScalar::zero());
            for f in &self.factors {
                let up = f.scale.pow(ki);
                let down = f.scale.pow(-ki);
                ca += &f.gen.creation(Family::A, k).mul_ref(&up);
                cb += &f.gen.creation(Family::B, k).mul_ref(&up);
                aa += &f.gen.annihilation(Family::A, k).mul_ref(&down);
                ab += &f.gen.annihilation(Family::B, k).mul_ref(&down);
            }
            inner.ca.push(ca);
            inner.cb.push(cb);
            inner.pa.push(aa.mul_ref(&a_bracket(k)));
            inner.pb.push(ab.mul_ref(&UScalar::from_int(k as i128)));
        }
    }

    /// `(ca, cb, pa, pb)` at index `k >= 1`: creation coefficients and
    /// bracket-weighted annihilation coefficients.
    pub fn coefficients(&self, k: u32) -> [UScalar; 4] {
        self.ensure(k);
        let inner = self.inner.read().unwrap();
        let k = k as usize;
        [inner.ca[k].clone(), inner.cb[k].clone(), inner.pa[k].clone(), inner.pb[k].clone()]
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Creation exponential restricted to total degree `d`.
    pub fn creation_expansion(&self, d: u32) -> Expansion {
        if let Some(e) = self.inner.read().unwrap().expansions.get(&d) {
            return e.clone();
        }
        self.ensure(d.max(1));
        let out = {
            let inner = self.inner.read().unwrap();
            let mut out = Vec::new();
            'outer: for (pa, pb) in two_colored_partitions(d).iter() {
                let mut c = UScalar::one();
                for (parts, coeffs) in [(pa, &inner.ca), (pb, &inner.cb)] {
                    for (k, n) in multiplicities(parts) {
                        let ck = &coeffs[k as usize];
                        if ck.is_zero() {
                            continue 'outer;
                        }
                        c = c.mul_ref(&ck.pow(n as i32)).mul_ref(&UScalar::from_ratio(1, factorial(n)));
                    }
                }
                out.push((pa.clone(), pb.clone(), c));
            }
            Arc::new(out)
        };
        self.inner.write().unwrap().expansions.insert(d, out.clone());
        out
    }

    /// Zero-mode scalar `prod c_f^{e_f} * q^{kpow a0 / 2}` at the incoming sector.
    fn zero_mode_scalar(&self, sector: Sector) -> Option<UScalar> {
        if let Some(v) = self.inner.read().unwrap().zero_modes.get(&sector) {
            return v.clone();
        }
        let mut s = Some(UScalar::u_pow(self.kpow * sector.l1x2));
        for f in &self.factors {
            let (a, b) = f.gen.zero_mode_form();
            let e4 = a * sector.l1x2 + b * sector.l2;
            s = s.and_then(|s| f.scale.pow_quarter(e4).map(|c| s.mul_ref(&c)));
        }
        self.inner.write().unwrap().zero_modes.insert(sector, s.clone());
        s
    }

    fn zero_mode_exponent4(&self, sector: Sector) -> i32 {
        self.za * sector.l1x2 + self.zb * sector.l2
    }

    /// Annihilation exponential applied to one monomial: list of
    /// (remaining monomial, removed degree, coefficient).
    fn annihilate(&self, m: &BasisMonomial) -> Vec<(BasisMonomial, u32, UScalar)> {
        let kmax = m.a.first().copied().unwrap_or(0).max(m.b.first().copied().unwrap_or(0)) as u32;
        self.ensure(kmax.max(1));
        let inner = self.inner.read().unwrap();
        let mut options: Vec<(Family, u8, usize, &UScalar)> = Vec::new();
        for (k, n) in multiplicities(&m.a) {
            if !inner.pa[k as usize].is_zero() {
                options.push((Family::A, k, n, &inner.pa[k as usize]));
            }
        }
        for (k, n) in multiplicities(&m.b) {
            if !inner.pb[k as usize].is_zero() {
                options.push((Family::B, k, n, &inner.pb[k as usize]));
            }
        }
        let mut out = vec![(m.clone(), 0u32, UScalar::one())];
        for (fam, k, n, p) in options {
            let mut next = Vec::with_capacity(out.len() * (n + 1));
            for (mono, removed, c) in &out {
                let mut cur = mono.clone();
                let mut pj = UScalar::one();
                next.push((cur.clone(), *removed, c.clone()));
                for j in 1..=n {
                    let parts = match fam {
                        Family::A => &mut cur.a,
                        Family::B => &mut cur.b,
                    };
                    let pos = parts.iter().position(|x| *x == k).expect("part present");
                    parts.remove(pos);
                    pj = pj.mul_ref(p);
                    let coeff = c.mul_ref(&pj).mul_ref(&UScalar::from_int(binomial(n, j)));
                    next.push((cur.clone(), removed + j as u32 * k as u32, coeff));
                }
            }
            out = next;
        }
        out
    }
}

fn multiplicities(parts: &Parts) -> Vec<(u8, usize)> {
    let mut out: Vec<(u8, usize)> = Vec::new();
    for &p in parts {
        match out.last_mut() {
            Some((k, n)) if *k == p => *n += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

fn binomial(n: usize, k: usize) -> i128 {
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

fn merge(a: &Parts, b: &Parts) -> Parts {
    let mut out = Parts::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] >= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Coefficient of `z^{n4/4}` in `term(z) v`, keeping output monomials of
/// oscillator degree at most `trunc`.
pub fn apply_term_mode(term: &CurrentTerm, n4: i32, v: &FockVector, trunc: u32) -> Result<FockVector, CurrentError> {
    let prep = prepared(&term.factors);
    let mut out = FockVector::zero();
    for (m, c) in v.iter() {
        let sector = m.sector;
        let base4 = term.zpow4 + prep.zero_mode_exponent4(sector);
        if (n4 - base4).rem_euclid(4) != 0 {
            continue;
        }
        let zm = prep.zero_mode_scalar(sector).ok_or_else(|| {
            CurrentError::Parse(format!("zero-mode power is not an integral power of u on sector {sector}"))
        })?;
        let c0 = c.mul_ref(&term.scalar).mul_ref(&zm);
        let out_sector = sector.shifted(prep.shift.0, prep.shift.1);
        for (rest, removed, ca) in prep.annihilate(m) {
            let d = (n4 - base4) / 4 + removed as i32;
            if d < 0 || rest.degree() + d as u32 > trunc {
                continue;
            }
            let c1 = c0.mul_ref(&ca);
            for (pa, pb, ce) in prep.creation_expansion(d as u32).iter() {
                let mono = BasisMonomial { sector: out_sector, a: merge(&rest.a, pa), b: merge(&rest.b, pb) };
                out.add_term(mono, c1.mul_ref(ce));
            }
        }
    }
    Ok(out)
}

/// Coefficient of `z^{n4/4}` in `e(z) v` (see [`apply_term_mode`]).
pub fn apply_mode(e: &CurrentExpr, n4: i32, v: &FockVector, trunc: u32) -> Result<FockVector, CurrentError> {
    let mut out = FockVector::zero();
    for t in &e.terms {
        let part = apply_term_mode(t, n4, v, trunc)?;
        out.add_scaled(&part, &UScalar::one());
    }
    Ok(out)
}

/// Exponents (quarter units) at which `apply_mode(e, n4, v, trunc)` can be nonzero.
pub fn mode_support(e: &CurrentExpr, v: &FockVector, trunc: u32) -> BTreeSet<i32> {
    let mut out = BTreeSet::new();
    for t in &e.terms {
        let prep = prepared(&t.factors);
        for (m, _) in v.iter() {
            let base4 = t.zpow4 + prep.zero_mode_exponent4(m.sector);
            let mut removable: BTreeSet<u32> = BTreeSet::from([0]);
            for &p in m.a.iter().chain(m.b.iter()) {
                let extra: Vec<u32> = removable.iter().map(|r| r + p as u32).collect();
                removable.extend(extra);
            }
            let deg = m.degree();
            for r in removable {
                let rest = deg - r;
                if rest > trunc {
                    continue;
                }
                for d in 0..=(trunc - rest) {
                    out.insert(base4 + 4 * (d as i32 - r as i32));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::currents::{generator, screening_current, Generator, Scale};
    use crate::fock::Sector;

    fn mono(s: &str) -> BasisMonomial {
        s.parse().unwrap()
    }

    #[test]
    fn screening_on_small_states() {
        let q = screening_current();
        let apply = |s: &str| apply_mode(&q, -4, &FockVector::basis(mono(s)), 10).unwrap();
        assert_eq!(apply("|0,1>"), FockVector::basis(mono("|0,0>")));
        assert!(apply("|0,0>").is_zero());
        assert!(apply("b[-1]|1,1>").is_zero());
        assert_eq!(apply("b[-1]|0,0>"), FockVector::basis(mono("|0,-1>")));
    }

    #[test]
    fn xi_zero_mode() {
        let xi = generator(Generator::YbPlus, Scale::ONE);
        let out = apply_mode(&xi, 0, &FockVector::vacuum(Sector::new(0, 0)), 1).unwrap();
        assert_eq!(out, FockVector::basis(mono("|0,1>")));
    }

    #[test]
    fn support_of_screening_current() {
        let q = screening_current();
        let s = mode_support(&q, &FockVector::vacuum(Sector::new(0, 0)), 2);
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![0, 4, 8]);
        assert!(mode_support(&q, &FockVector::zero(), 5).is_empty());
    }
}
