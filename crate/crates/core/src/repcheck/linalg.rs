//! Exact ranks of matrices over `Q(u)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::qscalar::UScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMethod {
    Symbolic,
    Specialized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankConfig {
    /// Specialization points for `u`, tried in order.
    pub points: Vec<BigRational>,
    /// Always eliminate over `Q(u)`.
    pub force_symbolic: bool,
    /// Matrices with at most this many entries are eliminated symbolically.
    pub symbolic_limit: usize,
}

impl Default for RankConfig {
    fn default() -> Self {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        RankConfig { points: vec![r(3, 2), r(7, 5), r(11, 3), r(2, 9), r(13, 8)], force_symbolic: false, symbolic_limit: 1600 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub method: RankMethod,
}

pub type Matrix = Vec<Vec<UScalar>>;

/// Rank over `Q(u)`. Small matrices are eliminated symbolically; larger ones
/// are specialized at two points and fall back to symbolic elimination when
/// the two ranks disagree.
pub fn rank(m: &Matrix, cfg: &RankConfig) -> RankResult {
    let entries = m.len() * m.first().map_or(0, |r| r.len());
    if entries == 0 {
        return RankResult { rank: 0, method: RankMethod::Symbolic };
    }
    if cfg.force_symbolic || entries <= cfg.symbolic_limit {
        return RankResult { rank: rank_symbolic(m), method: RankMethod::Symbolic };
    }
    let mut ranks = Vec::new();
    for p in &cfg.points {
        if let Some(r) = rank_specialized(m, p) {
            ranks.push(r);
            if ranks.len() == 2 {
                break;
            }
        }
    }
    match ranks.as_slice() {
        [a, b] if a == b => RankResult { rank: *a, method: RankMethod::Specialized },
        _ => RankResult { rank: rank_symbolic(m), method: RankMethod::Symbolic },
    }
}

/// Rank after substituting `u = u0`; `None` if an entry has a pole there.
pub fn rank_specialized(m: &Matrix, u0: &BigRational) -> Option<usize> {
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m.len());
    for r in m {
        rows.push(r.iter().map(|c| c.specialize(u0).ok()).collect::<Option<Vec<_>>>()?);
    }
    Some(eliminate(rows, |x| x.is_zero(), |a, b| a / b, |a, f, b| a - f * b))
}

pub fn rank_symbolic(m: &Matrix) -> usize {
    eliminate(
        m.clone(),
        |x| x.is_zero(),
        |a, b| a.checked_div(b).expect("pivot is nonzero"),
        |a, f, b| a.clone() - &f.mul_ref(b),
    )
}

fn eliminate<T: Clone>(
    mut rows: Vec<Vec<T>>,
    is_zero: impl Fn(&T) -> bool,
    div: impl Fn(&T, &T) -> T,
    sub_mul: impl Fn(&T, &T, &T) -> T,
) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for r in rank + 1..rows.len() {
            if is_zero(&rows[r][col]) {
                continue;
            }
            let f = div(&rows[r][col], &pivot_row[col]);
            for c in col..ncols {
                if !is_zero(&pivot_row[c]) {
                    rows[r][c] = sub_mul(&rows[r][c], &f, &pivot_row[c]);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Convenience for tests: the rank of an integer matrix.
pub fn rank_of_ints(m: &[Vec<i64>]) -> usize {
    let rows: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    eliminate(rows, |x| x.is_zero(), |a, b| a / b, |a, f, b| a - f * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn u(e: i32) -> UScalar {
        UScalar::u_pow(e)
    }

    #[test]
    fn symbolic_rank_detects_dependence() {
        // second row = u^2 * first row
        let m = vec![vec![u(1), UScalar::one()], vec![u(3), u(2)], vec![UScalar::zero(), UScalar::one()]];
        assert_eq!(rank_symbolic(&m), 2);
        let m = vec![vec![u(1), UScalar::one()], vec![u(3), u(2)]];
        assert_eq!(rank_symbolic(&m), 1);
    }

    #[test]
    fn bad_point_falls_back() {
        // u - 1 vanishes at u = 1, so that point alone would drop the rank
        let m = vec![vec![u(1) - UScalar::one()]];
        let one = BigRational::one();
        assert_eq!(rank_specialized(&m, &one), Some(0));
        let cfg = RankConfig { points: vec![one.clone(), BigRational::from_integer(2.into())], force_symbolic: false, symbolic_limit: 0 };
        assert_eq!(rank(&m, &cfg), RankResult { rank: 1, method: RankMethod::Symbolic });
    }

    #[test]
    fn integer_ranks() {
        assert_eq!(rank_of_ints(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank_of_ints(&[vec![1, 0], vec![0, 1]]), 2);
    }
}
