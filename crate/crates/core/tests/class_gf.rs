use num_bigint::BigInt;
use staircase::enumerator::{Enumerator, TheoremId};
use staircase::perm::{basis, distinct_images, ClassOracle};

const BASES: &[(&str, usize)] = &[
    ("123", 10),
    ("132", 10),
    ("2314,3124", 10),
    ("2413,3142", 10),
    ("2314,3124,1234", 9),
    ("2413,3142,2314,3124", 9),
    ("2314,3124,3142", 9),
    ("2413,3142,3124", 9),
    ("2413,3124", 10),
    ("2134,2413", 10),
    ("2314,2143", 10),
    ("2413,123", 9),
    ("213,1423", 9),
    ("2314,3124,2413,1324", 9),
];

fn oracle(b: &str, n: usize) -> Vec<BigInt> {
    ClassOracle::new(basis(b)).counts(n).into_iter().map(BigInt::from).collect()
}

#[test]
fn class_gf_matches_oracle() {
    let e = Enumerator::new();
    for &(b, n) in BASES {
        let (s, trace) = e.class_gf(&basis(b), n).unwrap();
        assert!(!trace.oracle_backed, "{b} should be theorem-backed: {trace:?}");
        assert_eq!(s.to_integers().unwrap(), oracle(b, n), "{b}");
    }
}

#[test]
fn symmetric_bases_give_equal_series() {
    for &(b, _) in BASES {
        let reference = Enumerator::new().counts(&basis(b), 8).unwrap();
        for img in distinct_images(&basis(b)) {
            // a fresh enumerator so the memo does not short-circuit the image
            assert_eq!(Enumerator::new().counts(&img, 8).unwrap(), reference, "{b} vs {img}");
        }
    }
}

#[test]
fn dispatch_uses_expected_theorems() {
    let e = Enumerator::new();
    let cases = [
        ("2314,3124,3142", TheoremId::GfRucupi),
        ("2413,3142,3124", TheoremId::GfRdcdpi),
        ("2413,3124", TheoremId::GfRdcu),
        ("2134,2413", TheoremId::Rd2134),
        ("2314,2143", TheoremId::Ru2143),
        ("2413,3142,2314,3124", TheoremId::GfRdcdrucu),
    ];
    for (b, want) in cases {
        let found: Vec<_> = e.detect(&basis(b)).iter().map(|m| m.theorem).collect();
        assert!(found.contains(&want), "{b}: {found:?}");
    }
    // priority puts the downcore theorem first on a reverse-complement image
    assert_eq!(e.detect(&basis("2413,3142,3124"))[0].theorem, TheoremId::GfDowncore);
    // but its subclass Av(231, 312) has no theorem, so the union core route is preferred
    let (_, t) = e.class_gf(&basis("2413,3142,2314,3124"), 9).unwrap();
    assert_eq!(t.theorem, "gf_rdcdrucu");
}

#[test]
fn every_detected_route_matches_oracle() {
    let e = Enumerator::new();
    for &(b, _) in BASES {
        let n = 8;
        let want = oracle(b, n);
        for m in e.detect(&basis(b)) {
            let (s, _) = e.class_gf_via(&basis(b), &m, n).unwrap();
            assert_eq!(s.to_integers().unwrap(), want, "{b} via {m}");
        }
    }
}

#[test]
fn merged_core_route_with_parameters() {
    // with the mesh condition assumed, non-empty P goes through the merged cores
    let e = Enumerator::new().assume_mesh_conditions();
    for b in ["2413,2134,1234", "2413,2134,1324,12534"] {
        let (s, t) = e.class_gf(&basis(b), 9).unwrap();
        assert_eq!(t.theorem, "rd_2134");
        assert_eq!(s.to_integers().unwrap(), oracle(b, 9), "{b}");
    }
}
