use staircase::bijection::{encode, realize, verify_bijection, BijectionLab, BijectionTheorem};
use staircase::basis;

const SUITE: &[(&str, &str)] = &[
    ("thm_123", "123"),
    ("thm_132", "132"),
    ("inf_upcore", "2314,3124"),
    ("inf_upcore", "2314,3124,1234"),
    ("inf_downcore", "2413,3142"),
    ("inf_rdcdrucu", "2413,3142,2314,3124"),
    ("inf_cu_cd_ru", "2314,3124,3142"),
    ("inf_rd_cd_cu", "2413,3142,3124"),
    ("inf_rd_cu", "2413,3124"),
    ("inf_rd_2134", "2134,2413"),
    ("inf_ru_2143", "2314,2143"),
];

#[test]
fn suite_passes_to_eight() {
    for &(t, b) in SUITE {
        let r = verify_bijection(t.parse().unwrap(), &basis(b), 8).unwrap();
        assert!(r.pass, "{r}");
        assert!(r.pairs.iter().all(|p| p.weighted_sets == p.class_members));
    }
}

#[test]
fn flagships_pass_to_ten() {
    for (t, b) in [("inf_rd_2134", "2134,2413"), ("inf_ru_2143", "2314,2143")] {
        let r = verify_bijection(t.parse().unwrap(), &basis(b), 10).unwrap();
        assert!(r.pass, "{r}");
    }
}

#[test]
fn parameterised_classes() {
    // each P meets the side conditions of its theorem
    for (t, b) in [
        ("inf_upcore", "2314,3124,1243"),
        ("inf_downcore", "2413,3142,1432"),
        ("inf_rdcdrucu", "2413,3142,2314,3124,1432"),
        ("inf_cu_cd_ru", "2314,3124,3142,1243"),
        ("inf_rd_cd_cu", "2413,3142,3124,1432"),
        ("inf_rd_cu", "2413,3124,13524"),
    ] {
        let r = verify_bijection(t.parse().unwrap(), &basis(b), 8).unwrap();
        assert!(r.pass, "{r}");
    }
}

#[test]
fn side_condition_matters() {
    // 132 is sum-decomposable, so the down-core bijection breaks for P = {132}
    let r = verify_bijection(BijectionTheorem::InfDowncore, &basis("2413,3142,1243"), 7).unwrap();
    assert!(!r.pass);
}

#[test]
fn report_round_trips_through_json() {
    let r = verify_bijection(BijectionTheorem::InfDowncore, &basis("2413,3142"), 5).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<staircase::bijection::BijectionReport>(&text).unwrap(), r);
}

#[test]
fn wrong_direction_is_caught() {
    // realizing up-core sets with increasing columns lands outside the class
    let lab = BijectionLab::new(BijectionTheorem::InfUpcore, &basis("2314,3124"), 6).unwrap();
    let mut outside = 0;
    lab.for_each_weighted_set(3, 6, |ws| {
        let s = realize(BijectionTheorem::InfDowncore, &ws).unwrap();
        if s.contains(&staircase::perm("2314")) || s.contains(&staircase::perm("3124")) {
            outside += 1;
        }
    })
    .unwrap();
    assert!(outside > 0);
    assert!(encode(BijectionTheorem::InfUpcore, &staircase::perm("2413")).is_ok());
}
