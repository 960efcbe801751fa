use qboson::currents::Scale;
use qboson::qscalar::UScalar;
use qboson::vertexops::{
    check_intertwining, check_screening_anticommute, normalization_check, vertex_current, Component, Condition,
    VertexPair, VertexSystem, VoType,
};

fn pair(ty: VoType, name: &str) -> VertexPair {
    VertexPair::parse(ty, name).unwrap()
}

#[test]
fn mode_lattice_is_integral() {
    let sys = VertexSystem::default();
    for p in VertexPair::all() {
        assert_eq!(sys.mode_offset(p), 0, "{p}");
    }
}

#[test]
fn other_component_multiples() {
    let sys = VertexSystem::default();
    let cases = [
        (VoType::I, "1->2", "-u^4"),
        (VoType::I, "4->3", "(u^4 + 1)/u^4"),
        (VoType::II, "1->2", "-1/u^4"),
        (VoType::II, "4->3", "(u^4 + 1)/u^6"),
    ];
    for (ty, name, want) in cases {
        let r = normalization_check(&sys, pair(ty, name));
        assert!(r.passed(), "{}", r.to_json_line());
        let want: UScalar = want.parse().unwrap();
        let note = r.notes.iter().find(|n| n.contains("f1|mu>")).expect("proportionality note");
        let got: UScalar = note.split_once('(').unwrap().1.rsplit_once(") f1").unwrap().0.parse().unwrap();
        assert_eq!(got, want, "{ty} {name}");
    }
    for name in ["2->1", "3->4"] {
        for ty in [VoType::I, VoType::II] {
            let r = normalization_check(&sys, pair(ty, name));
            assert!(r.passed() && r.notes.iter().all(|n| !n.contains("f1|mu>")), "{}", r.to_json_line());
        }
    }
}

#[test]
fn leading_components_agree_between_types() {
    for name in ["1->2", "2->1", "3->4", "4->3"] {
        assert_eq!(pair(VoType::I, name).leading(), pair(VoType::II, name).leading());
    }
    assert_eq!(pair(VoType::I, "1->2").leading(), Component::Minus);
    assert_eq!(pair(VoType::II, "3->4").leading(), Component::Plus);
}

#[test]
fn type_one_low_degree_conditions() {
    let sys = VertexSystem::default();
    let p = pair(VoType::I, "1->2");
    for c in Condition::ALL {
        let r = check_intertwining(&sys, p, c, 1, 1);
        assert!(r.passed(), "{}", r.to_json_line());
    }
}

fn mutated(ty: VoType, name: &str, upow: i32) -> (VertexSystem, VertexPair) {
    let mut sys = VertexSystem::default();
    let p = pair(ty, name);
    let r = p.normalization();
    sys.set_direct(p, vertex_current(ty, Scale::u(upow)).scale(&r.scalar()).shift_z(r.zpow4));
    (sys, p)
}

fn failing(sys: &VertexSystem, p: VertexPair) -> Vec<Condition> {
    Condition::ALL.into_iter().filter(|&c| !check_intertwining(sys, p, c, 1, 1).passed()).collect()
}

// The ghost content alone fixes screening, so only the intertwining
// relations see the argument scale.
#[test]
fn wrong_type_one_scale_is_detected() {
    let (sys, p) = mutated(VoType::I, "1->2", 4);
    assert!(check_screening_anticommute(&sys, p, 1, 1).passed());
    assert_eq!(failing(&sys, p), [Condition::V4, Condition::V7, Condition::B]);
}

#[test]
fn wrong_type_two_scale_is_detected() {
    let (sys, p) = mutated(VoType::II, "2->1", 2);
    assert!(!normalization_check(&sys, p).passed());
    assert_eq!(failing(&sys, p), [Condition::V4, Condition::V7, Condition::B]);
}
