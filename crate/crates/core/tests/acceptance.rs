//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the verdict lines are printed whether or not a criterion passes.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use staircase::bijection::{verify_bijection, BijectionLab, BijectionTheorem};
use staircase::core_graph::{build_core, CoreKind};
use staircase::enumerator::Enumerator;
use staircase::gf::{self, brute_force_table, marker_coefficients, Family};
use staircase::grid::{row_column_profile, row_column_profile_off_diagonal, staircase_encode, Cell, Direction};
use staircase::perm::{enumerate_class, ClassOracle};
use staircase::sampler::{build_tables, Sampler};
use staircase::series::Series;
use staircase::{basis, perm, Basis, Permutation};
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Check = std::result::Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle(b: &str, n: usize) -> Vec<BigInt> {
    ClassOracle::new(basis(b)).counts(n).into_iter().map(BigInt::from).collect()
}

fn ints(s: &Series) -> Vec<BigInt> {
    s.to_integers().expect("integral series")
}

fn poly(coeffs: &[i64], order: usize) -> Series {
    Series::from_integers(coeffs).unwrap().pad(order)
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn gf_equals_oracle(e: &Enumerator, b: &str, n: usize) -> Check {
    let (s, t) = e.class_gf(&basis(b), n).map_err(|e| e.to_string())?;
    ensure(!t.oracle_backed, || format!("{b} used brute force: {t:?}"))?;
    let (got, want) = (ints(&s), oracle(b, n));
    ensure(got == want, || format!("{b}: {got:?} vs oracle {want:?}"))
}

fn catalan() -> Check {
    let want: Vec<BigInt> = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796].map(BigInt::from).to_vec();
    let e = Enumerator::new();
    for b in ["123", "132"] {
        let got = e.counts(&basis(b), 10).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{b}: {got:?}"))?;
        gf_equals_oracle(&e, b, 10)?;
    }
    Ok(())
}

fn schroeder() -> Check {
    let n = 10;
    let closed = (poly(&[3, -1], n) - poly(&[1, -6, 1], n).sqrt().unwrap()).scale(&half());
    let e = Enumerator::new();
    for b in ["2314,3124", "2413,3142"] {
        let got = e.counts(&basis(b), n).map_err(|e| e.to_string())?;
        ensure(got == ints(&closed), || format!("{b}: {got:?} vs closed form"))?;
        gf_equals_oracle(&e, b, n)?;
    }
    ensure(ints(&closed)[10] == BigInt::from(206098), || "c_10 is not 206098".into())
}

fn four_patterns() -> Check {
    let b = "2413,3142,2314,3124";
    let n = 9;
    let wide = n + 1;
    let root = poly(&[1, -6, 7, -2, 1], wide).sqrt().unwrap();
    let num = poly(&[1, -1, 1], wide) - root;
    let closed = num.div(&poly(&[0, 2], wide)).unwrap().truncate(n);
    let e = Enumerator::new();
    let got = e.counts(&basis(b), n).map_err(|e| e.to_string())?;
    ensure(got == ints(&closed), || format!("{got:?} vs closed form {closed}"))?;
    gf_equals_oracle(&e, b, n)?;
    ensure(got[4] == BigInt::from(20), || format!("c_4 = {}", got[4]))
}

fn rucupi_rdcdpi() -> Check {
    let e = Enumerator::new();
    gf_equals_oracle(&e, "2314,3124,3142", 9)?;
    gf_equals_oracle(&e, "2413,3142,3124", 9)
}

fn rdcu() -> Check {
    gf_equals_oracle(&Enumerator::new(), "2413,3124", 9)
}

fn flagship_2134() -> Check {
    let e = Enumerator::new();
    let (_, t) = e.class_gf(&basis("2134,2413"), 9).map_err(|e| e.to_string())?;
    ensure(t.theorem == "rd_2134", || format!("dispatched to {}", t.theorem))?;
    gf_equals_oracle(&e, "2134,2413", 9)
}

fn flagship_2143() -> Check {
    let b = "2314,2143";
    let n = 9;
    let wide = n + 1;
    let root = poly(&[1, -8, 16, -8], wide).sqrt().unwrap();
    let closed = (Series::one(wide) - root)
        .div(&poly(&[0, 4, -4], wide))
        .unwrap()
        .truncate(n);
    let e = Enumerator::new();
    let (s, t) = e.class_gf(&basis(b), n).map_err(|e| e.to_string())?;
    ensure(t.theorem == "ru_2143", || format!("dispatched to {}", t.theorem))?;
    ensure(ints(&s) == ints(&closed), || format!("{s} vs closed form {closed}"))?;
    gf_equals_oracle(&e, b, n)
}

fn formula_suite() -> Check {
    for family in Family::ALL {
        let formula = marker_coefficients(family, 6).map_err(|e| e.to_string())?;
        let brute = brute_force_table(family, 6).map_err(|e| e.to_string())?;
        for n in 0..=6 {
            ensure(formula[n] == brute[n], || format!("{family} at n={n}: {:?} vs {:?}", formula[n], brute[n]))?;
        }
    }
    Ok(())
}

const BIJECTIONS: &[(&str, &str)] = &[
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

fn bijection_suite() -> Check {
    for &(t, b) in BIJECTIONS {
        let theorem: BijectionTheorem = t.parse().map_err(|e: staircase::Error| e.to_string())?;
        let r = verify_bijection(theorem, &basis(b), 8).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("{t} on {b}: {:?}", r.first_counterexample))?;
    }
    Ok(())
}

fn wilf() -> Check {
    let n = 10;
    // the same-core pair has non-empty P in the merged-core theorem
    let e = Enumerator::new().assume_mesh_conditions();
    for (a, b) in [("2413,2134,1234", "2413,2134,1324,12534"), ("2134,2413", "2314,3124,13524,12435")] {
        let r = e.wilf_check(&basis(a), &basis(b), n).map_err(|e| e.to_string())?;
        ensure(r.equal, || format!("{a} vs {b}: {r}"))?;
        ensure(!r.trace1.oracle_backed && !r.trace2.oracle_backed, || format!("{a} vs {b} used brute force"))?;
    }
    // both auxiliary classes are F_UDC(x, x/(1-x), 1)
    let y = Series::x(n) * Series::geometric(n);
    let udc = ints(&gf::eval_udc(&y, &Series::one(n), n).map_err(|e| e.to_string())?);
    for b in ["2413,123", "213,1423"] {
        let got = e.counts(&basis(b), n).map_err(|e| e.to_string())?;
        ensure(got == udc, || format!("{b}: {got:?} vs F_UDC {udc:?}"))?;
    }
    Ok(())
}

fn sampler() -> Check {
    let b = basis("2413,3142");
    let t = build_tables(&b, 12).map_err(|e| e.to_string())?;
    for n in 0..=12 {
        ensure(t.decomposition_sum(n) == t.class_counts[n], || format!("decomposition differs at {n}"))?;
    }
    let members = enumerate_class(&b, 6);
    ensure(members.len() == 394, || format!("{} members at size 6", members.len()))?;
    let s = Sampler::new(&b, 6).map_err(|e| e.to_string())?;
    let draws = 394_000;
    let mut hits: HashMap<Permutation, u64> = HashMap::new();
    for p in s.sample_many(6, draws, 11).map_err(|e| e.to_string())? {
        ensure(b.admits(&p), || format!("{p} is not in the class"))?;
        *hits.entry(p).or_default() += 1;
    }
    let expected = draws as f64 / 394.0;
    let stat: f64 = members.iter().map(|m| (*hits.get(m).unwrap_or(&0) as f64 - expected).powi(2) / expected).sum();
    let p_value = 1.0 - ChiSquared::new(393.0).unwrap().cdf(stat);
    ensure(p_value > 1e-3, || format!("chi-square {stat:.1}, p = {p_value:.2e}"))
}

// off-diagonal cells moved to the inner grid B_{n-1}
fn independent_shifted(kind: CoreKind, n: usize, cells: &[Cell]) -> bool {
    let g = build_core(kind, n.saturating_sub(1)).unwrap();
    let inner: Vec<Cell> = cells.iter().map(|c| Cell::new(c.i, c.j - 1)).collect();
    g.is_independent(g.mask_of(inner).unwrap())
}

fn lemma_suite() -> Check {
    let (ru, cu, rd, cd) = (perm("2314"), perm("3124"), perm("2413"), perm("3142"));
    let (p2134, p2143) = (perm("2134"), perm("2143"));
    use Direction::{Decreasing, Increasing};
    for size in 0..=8 {
        for s in Permutation::all(size) {
            let enc = staircase_encode(&s);
            let n = enc.n();
            let active: Vec<Cell> = enc.active_cells().collect();
            let off: Vec<Cell> = active.iter().copied().filter(|c| !c.is_diagonal()).collect();
            let independent = |kind: CoreKind| {
                let g = build_core(kind, n).unwrap();
                g.is_independent(g.mask_of(active.iter().copied()).unwrap())
            };
            let prof = row_column_profile(&s);
            let (a_ru, a_cu, a_rd, a_cd) = (s.avoids(&ru), s.avoids(&cu), s.avoids(&rd), s.avoids(&cd));
            let fail = |lemma: &str| format!("{lemma} fails on {s}");
            // rows and columns interleave monotonically
            ensure(!a_ru || prof.rows_allow(Decreasing), || fail("row_col_interleaving (r_u)"))?;
            ensure(!a_cu || prof.columns_allow(Decreasing), || fail("row_col_interleaving (c_u)"))?;
            ensure(!a_rd || prof.rows_allow(Increasing), || fail("row_col_interleaving (r_d)"))?;
            ensure(!a_cd || prof.columns_allow(Increasing), || fail("row_col_interleaving (c_d)"))?;
            ensure(!(a_ru || a_cu) || independent(CoreKind::U), || fail("up_down_edge_const (U)"))?;
            ensure(!(a_rd || a_cd) || independent(CoreKind::D), || fail("up_down_edge_const (D)"))?;
            ensure(!(a_ru && a_rd) || independent(CoreKind::R), || fail("col_row_edges_const (R)"))?;
            ensure(!(a_cu && a_cd) || independent(CoreKind::C), || fail("col_row_edges_const (C)"))?;
            let cells_are = |inc: bool| off.iter().all(|c| {
                let p = enc.get(*c).unwrap();
                if inc { p.is_increasing() } else { p.is_decreasing() }
            });
            if s.avoids(&p2134) {
                let off_prof = row_column_profile_off_diagonal(&s);
                ensure(independent_shifted(CoreKind::U, n, &off), || fail("const_2134 (U)"))?;
                ensure(cells_are(false), || fail("const_2134 (cells)"))?;
                ensure(off_prof.rows_allow(Decreasing) && off_prof.columns_allow(Decreasing), || fail("const_2134 (interleaving)"))?;
                ensure(!a_rd || independent_shifted(CoreKind::R, n, &off), || fail("const_2134_rd"))?;
            }
            if s.avoids(&p2143) {
                let off_prof = row_column_profile_off_diagonal(&s);
                ensure(independent_shifted(CoreKind::D, n, &off), || fail("const_2143 (D)"))?;
                ensure(cells_are(true), || fail("const_2143 (cells)"))?;
                ensure(off_prof.rows_allow(Increasing) && off_prof.columns_allow(Increasing), || fail("const_2143 (interleaving)"))?;
                ensure(!a_ru || independent_shifted(CoreKind::R, n, &off), || fail("const_2143_ru"))?;
            }
        }
    }
    // realized weighted sets stay in the class
    for (theorem, core, extra) in [
        (BijectionTheorem::InfUpcore, "2314,3124", ["123", "132", "213"]),
        (BijectionTheorem::InfDowncore, "2413,3142", ["231", "312", "321"]),
    ] {
        for pi in extra {
            let p = perm(pi);
            let b: Basis = basis(core).with([perm("1").direct_sum(&p)]);
            let lab = BijectionLab::new(theorem, &b, 8).map_err(|e| e.to_string())?;
            let mut bad = None;
            for total in 1..=8 {
                for n in 1..=total {
                    lab.for_each_weighted_set(n, total, |ws| {
                        let s = staircase::bijection::realize(theorem, &ws).unwrap();
                        if bad.is_none() && !b.admits(&s) {
                            bad = Some(format!("{ws} realizes {s} outside {b}"));
                        }
                    })
                    .map_err(|e| e.to_string())?;
                }
            }
            if let Some(msg) = bad {
                let lemma = if theorem == BijectionTheorem::InfUpcore { "uperm_subset_av" } else { "dperm_subset_av" };
                return Err(format!("{lemma}: {msg}"));
            }
        }
    }
    Ok(())
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "Catalan classes Av(123), Av(132) to n=10", budget: secs(5), run: catalan },
        Criterion { name: "Schroeder classes to n=10 against the closed form", budget: secs(60), run: schroeder },
        Criterion { name: "Av(2413,3142,2314,3124) to n=9 against the closed form", budget: secs(30), run: four_patterns },
        Criterion { name: "Av(2314,3124,3142) and Av(2413,3142,3124) to n=9", budget: secs(60), run: rucupi_rdcdpi },
        Criterion { name: "Av(2413,3124) to n=9", budget: secs(60), run: rdcu },
        Criterion { name: "Av(2134,2413) through the merged core to n=9", budget: secs(60), run: flagship_2134 },
        Criterion { name: "Av(2314,2143) to n=9 against the closed form", budget: secs(60), run: flagship_2143 },
        Criterion { name: "independent-set formulas against exhaustive counts, n<=6", budget: secs(60), run: formula_suite },
        Criterion { name: "bijection suite, sizes <= 8", budget: secs(180), run: bijection_suite },
        Criterion { name: "Wilf-equivalences to order 10", budget: secs(60), run: wilf },
        Criterion { name: "sampler exactness and uniformity", budget: secs(120), run: sampler },
        Criterion { name: "structural lemmas on all permutations of size <= 8", budget: secs(120), run: lemma_suite },
    ];
    let mut failed = 0;
    for (k, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= c.budget, || format!("took {:.1}s, budget {}s", elapsed.as_secs_f64(), c.budget.as_secs()))
        });
        match outcome {
            Ok(()) => println!("criterion {:>2}: pass  {} ({:.1}s)", k + 1, c.name, elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {} ({:.1}s): {why}", k + 1, c.name, elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
