use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use proptest::prelude::*;

use qboson::currents::{apply_mode, generator, qdifference, Scale, ALL_GENERATORS};
use qboson::fock::{apply_oscillator, bracket, dbar_of, enumerate_basis, weight_of, BasisMonomial, FockVector, Osc, Sector};
use qboson::qscalar::{qint, UScalar};
use qboson::qseries::{euler_product, product_form_odd};
use qboson::repcheck::linalg::{rank, rank_symbolic, Matrix, RankConfig};
use qboson::repcheck::{k_eigenvalue, AlgebraAction, Op, FAMILY_OFFSETS};
use qboson::vertexops::{Component, VertexPair, VertexSystem};

fn laurent() -> impl Strategy<Value = UScalar> {
    prop::collection::vec((-4i128..=4, -8i32..=8), 1..4)
        .prop_map(|ts| ts.into_iter().fold(UScalar::zero(), |acc, (c, e)| acc.add_ref(&UScalar::monomial(c, e))))
}

fn scalar() -> impl Strategy<Value = UScalar> {
    (laurent(), laurent()).prop_map(|(n, d)| if d.is_zero() { n } else { n.checked_div(&d).unwrap() })
}

fn sector() -> impl Strategy<Value = Sector> {
    (-4i32..=4, -2i32..=2).prop_map(|(a, b)| Sector::new(a, b))
}

fn monomial(max_degree: u32) -> impl Strategy<Value = BasisMonomial> {
    (sector(), 0..=max_degree, any::<prop::sample::Index>()).prop_map(|(s, d, i)| {
        let basis = enumerate_basis(s, d);
        basis[i.index(basis.len())].clone()
    })
}

fn osc() -> impl Strategy<Value = Osc> {
    prop_oneof![Just(Osc::A), Just(Osc::B)]
}

fn mode() -> impl Strategy<Value = i32> {
    prop_oneof![-3i32..=-1, 1i32..=3]
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.add_ref(&b).add_ref(&c), a.add_ref(&b.add_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        if !a.is_zero() {
            prop_assert!(a.mul_ref(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        let back: UScalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn specialization_is_a_homomorphism(a in laurent(), b in laurent()) {
        let u0 = rational(3, 2);
        let prod = a.mul_ref(&b).specialize(&u0).unwrap();
        prop_assert_eq!(prod, a.specialize(&u0).unwrap() * b.specialize(&u0).unwrap());
    }

    #[test]
    fn oscillators_commute_except_conjugate_pairs(
        m in monomial(4), k1 in osc(), n1 in mode(), k2 in osc(), n2 in mode(),
    ) {
        let v = FockVector::basis(m);
        let ab = apply_oscillator(k1, n1, &apply_oscillator(k2, n2, &v));
        let ba = apply_oscillator(k2, n2, &apply_oscillator(k1, n1, &v));
        let comm = ab.sub(&ba);
        if k1 == k2 && n1 + n2 == 0 {
            let br = bracket(k1, n1.unsigned_abs());
            let want = if n1 > 0 { br } else { -br };
            prop_assert_eq!(comm, v.scale(&want));
        } else {
            prop_assert!(comm.is_zero());
        }
    }

    #[test]
    fn creation_lowers_grading(m in monomial(4), k in osc(), n in 1i32..=4) {
        let before = dbar_of(&m);
        for (m2, _) in apply_oscillator(k, -n, &FockVector::basis(m)).iter() {
            prop_assert_eq!(dbar_of(m2), before - Ratio::from_integer(n as i64));
        }
    }

    #[test]
    fn level_is_minus_one_half(m in monomial(5)) {
        prop_assert_eq!(weight_of(&m).level(), Ratio::new(-1, 2));
    }

    #[test]
    fn modes_are_linear_in_the_current(
        m in monomial(2), g1 in 0usize..8, g2 in 0usize..8, c in laurent(), n in -3i32..=3,
    ) {
        let (e1, e2) = (generator(ALL_GENERATORS[g1], Scale::ONE), generator(ALL_GENERATORS[g2], Scale::ONE));
        if e1.shift() != e2.shift() {
            return Ok(());
        }
        let v = FockVector::basis(m);
        let n4 = 4 * n;
        let sum = apply_mode(&e1.add(&e2.scale(&c)), n4, &v, u32::MAX).unwrap();
        let mut want = apply_mode(&e1, n4, &v, u32::MAX).unwrap();
        want.add_scaled(&apply_mode(&e2, n4, &v, u32::MAX).unwrap(), &c);
        prop_assert_eq!(sum, want);
    }

    #[test]
    fn qdifference_commutes_with_rescaling(m in monomial(2), g in 0usize..8, k in -3i32..=3, n in -3i32..=3) {
        let e = generator(ALL_GENERATORS[g], Scale::ONE);
        let c = Scale::u(4 * k);
        // D(f(cz)) = c (Df)(cz)
        let lhs = qdifference(&e.rescale(c).unwrap()).unwrap();
        let rhs = qdifference(&e).unwrap().rescale(c).unwrap().scale(&UScalar::u_pow(4 * k));
        let v = FockVector::basis(m);
        prop_assert_eq!(
            apply_mode(&lhs, 4 * n, &v, u32::MAX).unwrap(),
            apply_mode(&rhs, 4 * n, &v, u32::MAX).unwrap()
        );
    }

    #[test]
    fn drinfeld_generators_respect_grading_and_charge(m in monomial(2), k in -2i32..=2, plus in any::<bool>()) {
        let act = AlgebraAction::default();
        let (op, qpow) = if plus { (Op::XPlus(k), 2) } else { (Op::XMinus(k), -2) };
        let before = dbar_of(&m);
        let kin = k_eigenvalue(m.sector);
        // q^d x_k q^-d = q^k x_k
        for (m2, _) in act.apply(op, &FockVector::basis(m)).iter() {
            prop_assert_eq!(dbar_of(m2), before + Ratio::from_integer(k as i64));
            prop_assert_eq!(k_eigenvalue(m2.sector), kin.mul_ref(&UScalar::u_pow(4 * qpow)));
        }
    }

    #[test]
    fn specialized_rank_matches_symbolic(
        rows in prop::collection::vec(prop::collection::vec(laurent(), 3), 2..4),
        dependent in any::<bool>(),
    ) {
        let mut m: Matrix = rows;
        if dependent {
            let extra = m[0].iter().zip(&m[1]).map(|(a, b)| a.add_ref(&b.mul_ref(&UScalar::u_pow(4)))).collect();
            m.push(extra);
        }
        let cfg = RankConfig { symbolic_limit: 0, ..RankConfig::default() };
        prop_assert_eq!(rank(&m, &cfg).rank, rank_symbolic(&m));
    }
}

#[test]
fn quantum_integer_identities() {
    let d = UScalar::u_pow(4).add_ref(&-UScalar::u_pow(-4));
    for n in -6..=6 {
        let lhs = qint(n).mul_ref(&d);
        assert_eq!(lhs, UScalar::u_pow(4 * n).add_ref(&-UScalar::u_pow(-4 * n)), "n = {n}");
        assert_eq!(qint(-n), -qint(n));
        let u0 = rational(3, 2);
        let pw = |e: i32| if e >= 0 { u0.pow(e) } else { u0.pow(-e).recip() };
        let want = (pw(4 * n) - pw(-4 * n)) / (pw(4) - pw(-4));
        assert_eq!(qint(n).specialize(&u0).unwrap(), want);
    }
}

#[test]
fn euler_product_inverse() {
    for order in 0..=12 {
        let e = euler_product("p", 1, order);
        let one = e.mul(&e.inv().unwrap()).unwrap();
        for i in 0..=order {
            assert_eq!(one.coeff(i, 0), rational(i64::from(i == 0), 1), "order {order}, p^{i}");
        }
    }
}

#[test]
fn fock_character_is_inverse_euler_squared() {
    let e = euler_product("p", 1, 6);
    let inv2 = e.mul(&e).unwrap().inv().unwrap();
    for s in [Sector::new(0, 0), Sector::new(-1, 0), Sector::new(3, -2)] {
        for d in 0..=6u32 {
            assert_eq!(rational(enumerate_basis(s, d).len() as i64, 1), inv2.coeff(d as i32, 0), "{s} degree {d}");
        }
    }
}

#[test]
fn odd_product_form_counts_states() {
    let g = product_form_odd(6, 6);
    for ((i, j), c) in g.terms() {
        assert!(c.is_integer() && *c >= rational(0, 1), "s^{i} t^{j}: {c}");
    }
}

#[test]
fn vertex_components_land_in_target_family() {
    let sys = VertexSystem::default();
    for p in VertexPair::all() {
        let (rx2, t) = FAMILY_OFFSETS[p.mu as usize - 1];
        let v = FockVector::basis(qboson::repcheck::hw_vector(p.lambda).unwrap());
        for c in [Component::Plus, Component::Minus] {
            for n4 in sys.modes(p, 1) {
                for (m, _) in sys.component(p, c, n4, &v).iter() {
                    let (dl1x2, dl2) = (m.sector.l1x2 - rx2, m.sector.l2 - t);
                    assert!(dl1x2 == 2 * dl2 && dl2 % 2 == 0, "{p} {c} z^{n4}/4: {}", m.sector);
                }
            }
        }
    }
}
