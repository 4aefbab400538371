use std::collections::HashMap;

use num_bigint::BigUint;
use staircase::perm::enumerate_class;
use staircase::sampler::{build_tables, Sampler};
use staircase::{basis, Permutation};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn decomposition_is_exact_to_twelve() {
    for b in ["2413,3142", "2314,3124"] {
        let t = build_tables(&basis(b), 12).unwrap();
        for n in 0..=12 {
            assert_eq!(t.decomposition_sum(n), t.class_counts[n], "{b} at {n}");
        }
        assert_eq!(t.class_counts[10], BigUint::from(206098u32));
    }
}

#[test]
fn uniform_at_six() {
    let b = basis("2413,3142");
    let members = enumerate_class(&b, 6);
    assert_eq!(members.len(), 394);
    let sampler = Sampler::new(&b, 6).unwrap();
    let draws = 394_000;
    let mut hits: HashMap<Permutation, u64> = HashMap::new();
    for p in sampler.sample_many(6, draws, 20_241_015).unwrap() {
        assert!(b.admits(&p), "{p}");
        *hits.entry(p).or_default() += 1;
    }
    assert_eq!(hits.len(), 394, "every member is hit");
    let expected = draws as f64 / 394.0;
    let stat: f64 = members.iter().map(|m| (hits[m] as f64 - expected).powi(2) / expected).sum();
    let p_value = 1.0 - ChiSquared::new(393.0).unwrap().cdf(stat);
    assert!(p_value > 1e-3, "chi-square {stat}, p = {p_value}");
}

#[test]
fn support_is_everything_at_small_sizes() {
    for b in ["2413,3142", "2314,3124", "2314,3124,1234"] {
        let b = basis(b);
        let s = Sampler::new(&b, 5).unwrap();
        let want = enumerate_class(&b, 5).len();
        let mut seen = std::collections::HashSet::new();
        for p in s.sample_many(5, 40 * want, 3).unwrap() {
            assert!(b.admits(&p));
            seen.insert(p);
        }
        assert_eq!(seen.len(), want, "{b}");
    }
}
