//! `<lambda_1| Phi(z_2) Phi(z_1) |lambda_1>` by composing modes through the
//! intermediate module.

use std::collections::{BTreeMap, BTreeSet};

use super::{Component, VertexPair, VertexSystem, VoType};
use crate::currents::mode_support;
use crate::fock::{extract_vacuum, FockVector, Sector};
use crate::qscalar::UScalar;
use crate::qseries::{pochhammer_scalar_base, pochhammer_scalar_base_inv, TruncatedSeries};
use crate::repcheck::{hw_vector, Op};
use crate::report::{Failure, VerificationReport};

pub struct TwoPoint {
    /// `F_{e2 e1}(z)`, `z = z_1 / z_2`, keyed by `(e2, e1)`; the overall
    /// power of `z_2` is dropped.
    pub components: BTreeMap<(Component, Component), TruncatedSeries<UScalar>>,
    /// `F_{+-}` divided by its leading coefficient.
    pub normalized: TruncatedSeries<UScalar>,
    pub expected: TruncatedSeries<UScalar>,
    /// Exponent of `z_2` (quarter units) multiplying every component.
    pub z2_power4: i32,
    pub report: VerificationReport,
}

/// `(q^3 z; q^4)(q^6 z; q^4) / ((q z; q^4)(q^4 z; q^4))` to `z^order`.
pub fn pochhammer_ratio(order: u32) -> TruncatedSeries<UScalar> {
    let o = order as i32;
    let q = |e: i32| UScalar::u_pow(4 * e);
    let p = q(4);
    let num = pochhammer_scalar_base("z", &q(3), &p, o).mul(&pochhammer_scalar_base("z", &q(6), &p, o));
    let den = pochhammer_scalar_base_inv("z", &q(1), &p, o).mul(&pochhammer_scalar_base_inv("z", &q(4), &p, o));
    num.and_then(|n| n.mul(&den.expect("same variables"))).expect("same variables")
}

fn zero_series(order: u32) -> TruncatedSeries<UScalar> {
    TruncatedSeries::zero(&["z"], order as i32)
}

/// Exponents at which component `c` of `pair` can map `w` to a multiple of
/// the vacuum of `target` (a superset, from the oscillator content of `w`).
fn vacuum_modes(sys: &VertexSystem, pair: VertexPair, c: Component, w: &FockVector, target: Sector) -> BTreeSet<i32> {
    let direct = sys.act.current(sys.ids[&pair]);
    if c == pair.direct() {
        return mode_support(direct, w, 0);
    }
    let g = pair.closing_generator();
    let mut out = mode_support(direct, &sys.act.apply(g, w), 0);
    // the closing generator preserves the grading, so before it the state
    // sits at the degree of the matching vacuum grade in the shifted sector
    let (d1, d2) = if g == Op::F1 { (4, 2) } else { (-4, -2) };
    let pre = target.shifted(d1, d2);
    let t8 = pre.vacuum_dbar8() - target.vacuum_dbar8();
    if t8 >= 0 && t8 % 8 == 0 {
        out.extend(mode_support(direct, w, (t8 / 8) as u32));
    }
    out
}

/// Two-point function of the type I operators `1 -> 2` at `z_1` followed by
/// `2 -> 1` at `z_2`, through `z^order`.
pub fn two_point(sys: &VertexSystem, order: u32) -> TwoPoint {
    let first = VertexPair::new(VoType::I, 1, 2).expect("valid pair");
    let second = VertexPair::new(VoType::I, 2, 1).expect("valid pair");
    let hw = hw_vector(1).expect("valid family");
    let vac = Sector::new(0, 0);
    let v = FockVector::basis(hw.clone());
    let mut report = VerificationReport::new("two-point").with_order(order);
    let comps = [Component::Plus, Component::Minus];
    let step = 4;
    let n_off = sys.mode_offset(first);

    // coefficient of z_1^(n/4) z_2^(m/4) for each (e2, e1)
    let mut raw: BTreeMap<(Component, Component), BTreeMap<i32, UScalar>> = BTreeMap::new();
    let mut total: Option<i32> = None;
    let mut max_intermediate = 0;
    let n_hi = 4 * order as i32;
    let mut n4 = -8 + n_off;
    while n4 <= n_hi {
        for e1 in comps {
            let w = sys.component(first, e1, n4, &v);
            if w.is_zero() {
                continue;
            }
            if n4 < 0 {
                report.fail(
                    Failure::new(hw.to_string())
                        .modes(vec![format!("z1^{}", crate::currents::fmt_quarter(n4))])
                        .message("negative power of z_1 acting on the highest-weight vector"),
                );
            }
            max_intermediate = max_intermediate.max(w.max_degree());
            let mut m_candidates = std::collections::BTreeSet::new();
            for e2 in comps {
                m_candidates.extend(vacuum_modes(sys, second, e2, &w, vac));
            }
            for m4 in m_candidates {
                for e2 in comps {
                    let c = extract_vacuum(&sys.component(second, e2, m4, &w), vac);
                    if c.is_zero() {
                        continue;
                    }
                    match total {
                        None => total = Some(n4 + m4),
                        Some(t) if t != n4 + m4 => report.fail(
                            Failure::new(hw.to_string())
                                .modes(vec![format!("n={n4}"), format!("m={m4}")])
                                .message("correlator is not homogeneous"),
                        ),
                        _ => {}
                    }
                    let slot = raw.entry((e2, e1)).or_default().entry(n4).or_insert_with(UScalar::zero);
                    *slot = slot.add_ref(&c);
                }
            }
        }
        n4 += step;
    }
    report.note(format!("largest intermediate degree {max_intermediate}"));
    if max_intermediate > order + 1 {
        report.fail(Failure::new(hw.to_string()).message(format!("intermediate degree {max_intermediate} exceeds order + 1")));
    }

    let mut components = BTreeMap::new();
    for e2 in comps {
        for e1 in comps {
            let mut s = zero_series(order);
            if let Some(row) = raw.get(&(e2, e1)) {
                for (n4, c) in row {
                    s.add_term((n4 - n_off) / step, 0, c.clone());
                }
            }
            components.insert((e2, e1), s);
        }
    }
    let pm = components[&(Component::Plus, Component::Minus)].clone();
    let mp = components[&(Component::Minus, Component::Plus)].clone();
    for key in [(Component::Plus, Component::Plus), (Component::Minus, Component::Minus)] {
        if !components[&key].is_zero() {
            report.fail(Failure::new(format!("F{}{}", key.0, key.1)).message(format!("nonzero: {}", components[&key])));
        }
    }
    let q = UScalar::u_pow(4);
    let diff = mp.sub(&pm.scale(&-q)).expect("same variables");
    if !diff.is_zero() {
        report.fail(Failure::new("F-+").message(format!("F-+ + q F+- = {diff}")));
    }
    let expected = pochhammer_ratio(order);
    let normalized = match pm.coeff(0, 0).inv() {
        Ok(c0) => pm.scale(&c0),
        Err(_) => {
            report.fail(Failure::new("F+-").message("vanishing leading coefficient"));
            zero_series(order)
        }
    };
    for ((i, _), got, want) in normalized.agrees_with(&expected, order as i32) {
        report.fail(Failure::new("F+-").modes(vec![format!("z^{i}")]).message(format!("got {got}, expected {want}")));
    }
    report.note(format!("leading coefficient {}", pm.coeff(0, 0)));
    TwoPoint { components, normalized, expected, z2_power4: total.unwrap_or(0), report }
}
