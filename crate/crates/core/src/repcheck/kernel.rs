//! Kernels of the screening charge, their characters and the highest-weight
//! vectors of the four irreducible submodules.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::linalg::{rank, Matrix, RankConfig, RankResult};
use super::{AlgebraAction, Op, RepError};
use crate::fock::{enumerate_basis, two_colored_partitions, weight_of, BasisMonomial, FockVector, Sector, Weight};
use crate::qscalar::UScalar;
use crate::qseries::{product_form_even, product_form_odd, RatSeries, TruncatedSeries};
use crate::report::{Failure, VerificationReport};

/// `(2 r_i, t_i)` for the four families of sectors `(l + r_i, l + t_i)`, `l` even.
pub const FAMILY_OFFSETS: [(i32, i32); 4] = [(0, 0), (2, 1), (-1, 0), (1, 1)];

pub fn sector_of_family(i: u32, l: i32) -> Result<Sector, RepError> {
    let (rx2, t) = *FAMILY_OFFSETS.get((i as usize).wrapping_sub(1)).ok_or(RepError::BadFamily(i))?;
    Ok(Sector::new(2 * l + rx2, l + t))
}

/// Degree of the image of a degree-`degree` vector of `sector` under `Q^-`.
fn image_degree(sector: Sector, degree: i64) -> i64 {
    degree + sector.l2 as i64 - 1
}

/// Matrix of `Q^-` from the degree-`degree` piece of `sector` to its image
/// piece; returns (source basis, target basis, rows indexed by target).
pub fn qminus_matrix(act: &AlgebraAction, sector: Sector, degree: u32) -> (Vec<BasisMonomial>, Vec<BasisMonomial>, Matrix) {
    let cols = enumerate_basis(sector, degree);
    let target = image_degree(sector, degree as i64);
    let rows = if target >= 0 { enumerate_basis(sector.shifted(0, -1), target as u32) } else { Vec::new() };
    let mut m = vec![vec![UScalar::zero(); cols.len()]; rows.len()];
    for (j, c) in cols.iter().enumerate() {
        let img = act.apply(Op::QMinus, &FockVector::basis(c.clone()));
        for (mono, coeff) in img.iter() {
            let i = rows.iter().position(|r| r == mono).expect("image lies in the target piece");
            m[i][j] = coeff.clone();
        }
    }
    (cols, rows, m)
}

pub fn rank_of(act: &AlgebraAction, sector: Sector, degree: u32, cfg: &RankConfig) -> RankResult {
    rank(&qminus_matrix(act, sector, degree).2, cfg)
}

/// `dim Ker Q^-` on the degree-`degree` piece of `sector`.
pub fn kernel_dimension(act: &AlgebraAction, sector: Sector, degree: u32, cfg: &RankConfig) -> usize {
    enumerate_basis(sector, degree).len() - rank_of(act, sector, degree, cfg).rank
}

fn p2(n: i64) -> i64 {
    if n < 0 {
        0
    } else {
        two_colored_partitions(n as u32).len() as i64
    }
}

/// Alternating sum `sum_k (-1)^k dim F_{l1, l2-k}[deg_k]` predicted by the
/// exact sequence, with `deg_k = degree - k (k - 2 l2 + 1) / 2`.
pub fn exact_sequence_dimension(sector: Sector, degree: u32) -> i64 {
    let l2 = sector.l2 as i64;
    let mut total = 0;
    let mut k = 0i64;
    loop {
        let dk = degree as i64 - k * (k - 2 * l2 + 1) / 2;
        // deg_k is concave in k, so once it is negative past its peak it stays so
        if dk < 0 && k > l2 {
            break;
        }
        total += if k % 2 == 0 { p2(dk) } else { -p2(dk) };
        k += 1;
    }
    total
}

#[derive(Debug, Clone)]
pub struct KernelCharacter {
    pub family: u32,
    /// Kernel dimensions assembled as a series in `s = p^{1/2}`, `t = z^{1/2}`.
    pub series: RatSeries,
    /// Monomial prefactor kept outside the series.
    pub prefactor: &'static str,
    /// `(sector, degree, dim Ker)`.
    pub dims: Vec<(Sector, u32, usize)>,
    pub report: VerificationReport,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Kernel dimensions of family `i` on sectors `l` in `2Z`, `|l| <= mwindow`,
/// degrees `<= maxdeg`, compared with the product formula and with the
/// exact-sequence prediction; exactness is checked at the two positions after
/// the kernel.
pub fn kernel_character(
    act: &AlgebraAction,
    i: u32,
    maxdeg: u32,
    mwindow: u32,
    cfg: &RankConfig,
) -> Result<KernelCharacter, RepError> {
    sector_of_family(i, 0)?;
    let even = i <= 2;
    let mut report = VerificationReport::new(format!("character-F{i}")).with_degree(maxdeg).with_window(mwindow);
    let w = mwindow as i32;
    let smax = 2 * maxdeg as i32 + w + 2;
    let product = if even { product_form_even(smax) } else { product_form_odd(smax, w + 2) };
    let prefactor = if even { "1" } else { "p^(-1/8) z^(1/4)" };
    report.note(format!(
        "product form {} with prefactor {prefactor}",
        if even { "1/((s t; s^2)(s t^-1; s^2))" } else { "1/((s^2 t^-1; s^2)(t; s^2))" }
    ));
    let mut series = TruncatedSeries::zero(&["s", "t"], smax);
    let mut dims = Vec::new();
    let mut l = -w + (w & 1);
    while l <= w {
        let sector = sector_of_family(i, l)?;
        let m = sector.l2;
        for d in 0..=maxdeg {
            let (s_exp, t_exp) = if even { (2 * d as i32 - m, -m) } else { (2 * d as i32, -m) };
            let r0 = rank_of(act, sector, d, cfg);
            let f0 = enumerate_basis(sector, d).len();
            let dim = f0 - r0.rank;
            dims.push((sector, d, dim));
            series.add_term(s_exp, t_exp, rat(dim as i64));
            let at = format!("{}", BasisMonomial::vacuum(sector));
            let modes = vec![format!("degree={d}")];
            let expected = product.coeff(s_exp, t_exp);
            if expected != rat(dim as i64) {
                report.fail(
                    Failure::new(at.clone())
                        .modes(modes.clone())
                        .message(format!("kernel dimension {dim}, product form gives {expected}")),
                );
            }
            let alt = exact_sequence_dimension(sector, d);
            if alt != dim as i64 {
                report.fail(
                    Failure::new(at.clone())
                        .modes(modes.clone())
                        .message(format!("kernel dimension {dim}, exact sequence gives {alt}")),
                );
            }
            // exactness at F_{l2-1} and F_{l2-2}: dim F_k - rank Q_k = rank Q_{k-1}
            let mut prev_rank = r0.rank;
            let mut cur_sector = sector;
            let mut cur_deg = d as i64;
            for k in 1..=2 {
                cur_deg = image_degree(cur_sector, cur_deg);
                cur_sector = cur_sector.shifted(0, -1);
                if cur_deg < 0 {
                    break;
                }
                let fk = enumerate_basis(cur_sector, cur_deg as u32).len();
                let rk = rank_of(act, cur_sector, cur_deg as u32, cfg).rank;
                if fk - rk != prev_rank {
                    report.fail(Failure::new(at.clone()).modes(modes.clone()).message(format!(
                        "not exact at position {k}: kernel {} vs image {prev_rank}",
                        fk - rk
                    )));
                }
                prev_rank = rk;
            }
        }
        l += 2;
    }
    Ok(KernelCharacter { family: i, series, prefactor, dims, report })
}

/// Highest-weight vector of family `i`.
pub fn hw_vector(i: u32) -> Result<BasisMonomial, RepError> {
    let s = match i {
        1 => "|0,0>",
        2 => "b[-1]|1,1>",
        3 => "|-1/2,0>",
        4 => "|-3/2,-1>",
        _ => return Err(RepError::BadFamily(i)),
    };
    Ok(s.parse().expect("valid monomial"))
}

/// The highest weights `lambda'_i`.
pub fn hw_weight(i: u32) -> Result<Weight, RepError> {
    Ok(match i {
        1 => Weight::new((-1, 2), (0, 1), (0, 1)),
        2 => Weight::new((-3, 2), (1, 1), (-1, 2)),
        3 => Weight::new((0, 1), (-1, 2), (1, 8)),
        4 => Weight::new((1, 1), (-3, 2), (1, 8)),
        _ => return Err(RepError::BadFamily(i)),
    })
}

/// Checks that the highest-weight vector of family `i` is killed by `e_0`,
/// `e_1` and `Q^-`, has the `t_0`, `t_1` eigenvalues of its weight, and has
/// the stated weight.
pub fn hw_verify(act: &AlgebraAction, i: u32) -> Result<VerificationReport, RepError> {
    let m = hw_vector(i)?;
    let want = hw_weight(i)?;
    let mut report = VerificationReport::new(format!("hw-{i}")).with_sector(m.sector.l1x2, m.sector.l2);
    let v = FockVector::basis(m.clone());
    for op in [Op::E0, Op::E1, Op::QMinus] {
        let out = act.apply(op, &v);
        if !out.is_zero() {
            report.fail(Failure::new(m.to_string()).modes(vec![op.to_string()]).residual(out.render()));
        }
    }
    let got = weight_of(&m);
    if got != want {
        report.fail(Failure::new(m.to_string()).message(format!("weight {got}, expected {want}")));
    }
    if got.level() != num_rational::Ratio::new(-1, 2) {
        report.fail(Failure::new(m.to_string()).message(format!("level {}", got.level())));
    }
    // t_1 = q^{<h_1, wt>}, t_0 = q^{<h_0, wt>}
    for (op, c) in [(Op::T1, want.c_lambda1), (Op::T0, want.c_lambda0)] {
        let e4 = c * num_rational::Ratio::from_integer(4);
        let expected = v.scale(&UScalar::u_pow(e4.to_integer() as i32));
        if !e4.is_integer() || act.apply(op, &v) != expected {
            report.fail(Failure::new(m.to_string()).modes(vec![op.to_string()]).message("wrong eigenvalue"));
        }
    }
    report.note(format!("weight {got}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_kernel_dimensions() {
        let act = AlgebraAction::default();
        let cfg = RankConfig::default();
        assert_eq!(kernel_dimension(&act, Sector::new(0, 0), 0, &cfg), 1);
        assert_eq!(kernel_dimension(&act, Sector::new(0, 0), 1, &cfg), 1);
        assert_eq!(kernel_dimension(&act, Sector::new(2, 1), 0, &cfg), 0);
    }

    #[test]
    fn exact_sequence_prediction() {
        assert_eq!(exact_sequence_dimension(Sector::new(0, 0), 0), 1);
        assert_eq!(exact_sequence_dimension(Sector::new(0, 0), 1), 1);
        assert_eq!(exact_sequence_dimension(Sector::new(2, 1), 0), 0);
    }

    #[test]
    fn highest_weight_vectors() {
        let act = AlgebraAction::default();
        for i in 1..=4 {
            let r = hw_verify(&act, i).unwrap();
            assert!(r.passed(), "{}", r.to_json_line());
        }
    }
}
