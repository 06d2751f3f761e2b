//! Acceptance suite: one test per criterion, every tolerance pinned in code.
//! Each test prints a `criterion N: PASS/FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Criteria 7 and 8 measure the published closed-form constants in both the
//! verbatim and the corrected reading and report which one reaches full
//! agreement with the rank algorithm; the verbatim defects found this way
//! are listed, not hidden (see the strata module notes).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use waring::bezout::count_distinct_real_roots_bj;
use waring::decompose::decompose_any;
use waring::forms::{
    monomial_family_x3y2, verify, BinaryForm, Scalar, VerifyOutcome, WaringDecomposition,
};
use waring::rank::{complex_rank, real_rank, stage, SearchBudget};
use waring::sample::{sample_ranks, Distribution};
use waring::scalar::{rat, ratio, sign, Rat};
use waring::strata::{
    canonical5_big_f, canonical5_f, canonical5_point, classify_deg3, classify_deg4,
    component_count, region_grid, ConstantsSet, GridFamily, GridRecord,
};
use waring::univar::{sturm_distinct_real_roots, UniPoly};

fn tol_1e30() -> Rat {
    Rat::new(1.into(), num::BigInt::from(10u8).pow(30))
}

fn budget() -> SearchBudget {
    SearchBudget {
        mu_samples: 2048,
        seed: 0,
        tolerance: tol_1e30(),
    }
}

fn quintic() -> BinaryForm {
    BinaryForm::from_raw(
        5,
        &[rat(1), rat(0), ratio(1, 2), rat(0), ratio(-1, 2), rat(0)],
    )
    .unwrap()
}

/// Canonical term comparison key: scale (alpha, beta) to alpha = 1 when
/// possible, folding the scale into lambda.
fn canonical_terms(dec: &WaringDecomposition) -> Vec<(Rat, Rat, Rat)> {
    let d = dec.degree;
    let mut out: Vec<(Rat, Rat, Rat)> = dec
        .terms
        .iter()
        .map(|t| {
            let l = t.lambda.re.as_exact().unwrap().clone();
            let a = t.alpha.re.as_exact().unwrap().clone();
            let b = t.beta.re.as_exact().unwrap().clone();
            if a == rat(0) {
                (l * b.pow(d as i32), rat(0), rat(1))
            } else {
                (l * a.pow(d as i32), rat(1), b / a)
            }
        })
        .collect();
    out.sort_by(|x, y| (x.1.clone(), x.2.clone(), x.0.clone()).cmp(&(y.1.clone(), y.2.clone(), y.0.clone())));
    out
}

#[test]
fn criterion_01_quintic_worked_example() {
    let p = quintic();
    let b = budget();
    let cert = real_rank(&p, &b).expect("rank");
    assert_eq!(cert.rank, 4, "real rank");

    // H_3 kernel exactly span{(0, 2, 0, 1)}
    let st3 = stage(&p, 3);
    assert_eq!(st3.delta, 1);
    let v = &st3.kernel[0];
    let scale = &v[1] / rat(2); // compare against (0,2,0,1) up to scale
    let expect: Vec<Rat> = [rat(0), rat(2), rat(0), rat(1)]
        .iter()
        .map(|x| x * &scale)
        .collect();
    assert_eq!(v, &expect, "H_3 kernel span");

    let (cr, cr_complete) = complex_rank(&p, &b).expect("complex rank");
    assert_eq!((cr, cr_complete), (3, true), "complex rank");

    // nodes {+-1, +-xi} with xi^2 = 57/361 certified below 1e-30
    let dec = &cert.decomposition;
    assert_eq!(dec.len(), 4);
    let mut exact_nodes = Vec::new();
    let mut interval_sq_ok = 0;
    for t in &dec.terms {
        assert_eq!(t.beta.re.as_exact(), Some(&rat(1)));
        match &t.alpha.re {
            Scalar::Exact(v) => exact_nodes.push(v.clone()),
            Scalar::Interval(iv) => {
                let sq = iv.mul(iv);
                let target = ratio(57, 361);
                assert!(sq.contains(&target), "xi^2 encloses 57/361");
                assert!(sq.width() < tol_1e30(), "xi^2 width below 1e-30");
                interval_sq_ok += 1;
            }
        }
    }
    exact_nodes.sort();
    assert_eq!(exact_nodes, vec![rat(-1), rat(1)], "rational nodes +-1");
    assert_eq!(interval_sq_ok, 2, "two certified irrational nodes");

    // lambda values exactly (-41/640, -41/640, 361/640, 361/640)
    let mut lams: Vec<Rat> = dec
        .terms
        .iter()
        .map(|t| t.lambda.re.as_exact().cloned().expect("exact lambda"))
        .collect();
    lams.sort();
    assert_eq!(
        lams,
        vec![ratio(-41, 640), ratio(-41, 640), ratio(361, 640), ratio(361, 640)]
    );

    // expansion residual certified below 1e-30
    match verify(dec, &p, &tol_1e30(), false).unwrap() {
        VerifyOutcome::Exact => {}
        VerifyOutcome::Certified(bound) => assert!(bound < tol_1e30()),
        VerifyOutcome::Failed(b) => panic!("residual {b} above tolerance"),
    }
    println!("criterion 1: PASS - quintic rank 4 / complex 3, kernel, nodes, lambdas, residual");
}

#[test]
fn criterion_02_degree4_example() {
    let p = BinaryForm::from_raw(4, &[rat(240), rat(224), rat(72), rat(8), rat(0)]).unwrap();
    let cert = real_rank(&p, &budget()).expect("rank");
    assert_eq!(cert.rank, 2);
    assert_eq!(cert.residual, VerifyOutcome::Exact, "exact zero residual");
    let canon = canonical_terms(&cert.decomposition);
    assert_eq!(
        canon,
        vec![(rat(-1), rat(1), rat(2)), (rat(1), rat(1), rat(4))],
        "term multiset equals -(x+2y)^4 + (x+4y)^4"
    );
    println!("criterion 2: PASS - degree-4 example rank 2 with the printed decomposition");
}

#[test]
fn criterion_03_monomials() {
    let b = budget();
    // real rank of x^m y^(d-m) equals d
    for d in 3..=6usize {
        for m in 1..d {
            let p = BinaryForm::monomial(d, m).unwrap();
            let cert = real_rank(&p, &b).expect("rank");
            assert_eq!(cert.rank, d, "monomial x^{m} y^{} rank", d - m);
        }
    }
    // the two-parameter family expands to x^3 y^2 for 20 admissible draws
    let target = BinaryForm::from_raw(5, &[rat(0), rat(0), rat(0), rat(1), rat(0), rat(0)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 20 {
        let a = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let bb = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let Ok(fam) = monomial_family_x3y2(&a, &bb) else {
            continue;
        };
        assert_eq!(
            verify(&fam, &target, &rat(0), false).unwrap(),
            VerifyOutcome::Exact
        );
        done += 1;
    }
    // the printed four-term x^2 y^2 decomposition verifies exactly
    let dec = WaringDecomposition::real_exact(
        4,
        vec![
            (ratio(1, 4), rat(1), rat(1)),
            (ratio(7, 108), rat(1), rat(-1)),
            (ratio(-1, 54), rat(1), rat(2)),
            (ratio(-8, 27), rat(1), ratio(1, 2)),
        ],
    );
    let x2y2 = BinaryForm::from_raw(4, &[rat(0), rat(0), rat(1), rat(0), rat(0)]).unwrap();
    assert_eq!(verify(&dec, &x2y2, &rat(0), false).unwrap(), VerifyOutcome::Exact);
    // perturbed forms have rank 3
    let p = BinaryForm::from_raw(5, &[rat(0), ratio(1, 10), rat(0), rat(1), rat(0), rat(0)]).unwrap();
    assert_eq!(real_rank(&p, &b).unwrap().rank, 3, "x^3y^2 + xy^4/10");
    let p = BinaryForm::from_raw(4, &[ratio(1, 10), rat(0), rat(1), rat(0), rat(0)]).unwrap();
    assert_eq!(real_rank(&p, &b).unwrap().rank, 3, "x^2y^2 + y^4/10");
    println!("criterion 3: PASS - monomial ranks, family identity, x2y2 decomposition, perturbations");
}

#[test]
fn criterion_04_construction_soundness() {
    let items: Vec<(usize, u64)> = (3..=8usize)
        .flat_map(|d| (0..100u64).map(move |i| (d, i)))
        .collect();
    let results = waring::par::map_indexed(items, |(d, i)| {
        let mut rng = ChaCha8Rng::seed_from_u64(40_000 + 1000 * d as u64 + i);
        let raw: Vec<Rat> = (0..=d).map(|_| rat(rng.gen_range(-50..=50))).collect();
        let Ok(p) = BinaryForm::from_raw(d, &raw) else {
            return Ok(());
        };
        let (dec, _) = decompose_any(&p, None, 7_700 + i)?;
        if dec.len() > d {
            return Err(waring::Error::Internal(format!("length {} > {d}", dec.len())));
        }
        match verify(&dec, &p, &rat(0), false)? {
            VerifyOutcome::Exact => Ok(()),
            other => Err(waring::Error::Internal(format!("inexact expansion {other:?}"))),
        }
    });
    for r in results {
        r.expect("construction sound");
    }
    println!("criterion 4: PASS - 600 random constructions expand back exactly, lengths <= d");
}

#[test]
fn criterion_05_borchardt_jacobi_vs_sturm() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut polys = Vec::with_capacity(1000);
    while polys.len() < 1000 {
        let deg = rng.gen_range(1..=8);
        let coeffs: Vec<Rat> = (0..=deg)
            .map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
            .collect();
        let q = UniPoly::from_coeffs(coeffs);
        if q.degree().unwrap_or(0) >= 1 {
            polys.push(q);
        }
    }
    let results = waring::par::map_indexed(polys, |q| {
        let bj = count_distinct_real_roots_bj(&q).unwrap();
        let st = sturm_distinct_real_roots(&q).unwrap();
        (bj, st, q)
    });
    let mut failures = 0;
    for (bj, st, q) in results {
        if bj != st {
            failures += 1;
            eprintln!("BJ {bj} != Sturm {st} for {:?}", q.coeffs());
        }
    }
    assert_eq!(failures, 0, "Borchardt-Jacobi equals Sturm on 1000 polynomials");
    println!("criterion 5: PASS - signature count = Sturm count on 1000 seeded polynomials");
}

fn random_projective_points(d: usize, n: usize, seed: u64) -> Vec<Vec<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let c: Vec<Rat> = (0..=d)
            .map(|_| ratio(rng.gen_range(-20..=20), rng.gen_range(1..=5)))
            .collect();
        if c.iter().any(|x| x != &rat(0)) {
            out.push(c);
        }
    }
    out
}

#[test]
fn criterion_06_strata_agreement_deg3() {
    let pts = random_projective_points(3, 500, 6);
    let b = budget();
    let results = waring::par::map_indexed(pts, move |c| {
        let label = classify_deg3(&c).unwrap().rank;
        let p = BinaryForm::from_normalized(3, &c).unwrap();
        let rank = real_rank(&p, &b).unwrap().rank;
        (label, rank, c)
    });
    let bad: Vec<_> = results.iter().filter(|(l, r, _)| l != r).collect();
    assert!(
        bad.is_empty(),
        "degree-3 disagreements: {:?}",
        bad.iter().take(5).collect::<Vec<_>>()
    );
    println!("criterion 6: PASS - degree-3 classifier agrees with the rank algorithm on 500 points");
}

#[test]
fn criterion_07_strata_agreement_deg4() {
    let pts = random_projective_points(4, 500, 7);
    let b = budget();
    let results = waring::par::map_indexed(pts, move |c| {
        let verbatim = classify_deg4(&c, ConstantsSet::Verbatim).unwrap().rank;
        let corrected = classify_deg4(&c, ConstantsSet::Corrected).unwrap().rank;
        let p = BinaryForm::from_normalized(4, &c).unwrap();
        let rank = real_rank(&p, &b).unwrap().rank;
        (verbatim, corrected, rank, c)
    });
    let verbatim_bad: Vec<_> = results.iter().filter(|(v, _, r, _)| v != r).collect();
    let corrected_bad: Vec<_> = results.iter().filter(|(_, c, r, _)| c != r).collect();
    println!(
        "criterion 7: verbatim set disagreements {}/500, corrected set disagreements {}/500",
        verbatim_bad.len(),
        corrected_bad.len()
    );
    for (v, _, r, c) in verbatim_bad.iter().take(5) {
        println!(
            "  verbatim says {v}, rank algorithm says {r} at {:?} (suspected misprint in the published f7/f8 clauses)",
            c.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        );
    }
    assert!(
        corrected_bad.is_empty(),
        "corrected constants set must reach 100% agreement"
    );
    println!(
        "criterion 7: PASS - corrected constants set reaches 100% agreement ({} verbatim disagreements documented)",
        verbatim_bad.len()
    );
}

#[test]
fn criterion_08_canonical_family_grid() {
    let b = budget();
    // the origin has rank 5
    let origin = canonical5_point(&rat(0), &rat(0));
    assert_eq!(real_rank(&origin, &b).unwrap().rank, 5, "rank at (0,0)");

    // 50x50 grid over [-3,3]^2: full rank computation at every point
    let n = 50usize;
    let cells: Vec<(Rat, Rat)> = (0..n)
        .flat_map(|i| {
            (0..n).map(move |j| {
                (
                    rat(-3) + rat(6) * rat(i as i64) / rat((n - 1) as i64),
                    rat(-3) + rat(6) * rat(j as i64) / rat((n - 1) as i64),
                )
            })
        })
        .collect();
    let results = waring::par::map_indexed(cells, |(a, bb)| {
        let f = canonical5_f(&a, &bb);
        let big = canonical5_big_f(&a, &bb);
        let p = canonical5_point(&a, &bb);
        let rank = real_rank(&p, &budget()).unwrap().rank;
        (a, bb, sign(&f), sign(&big), rank)
    });

    // literal reading of the published inequalities
    let lit_f_bad = results
        .iter()
        .filter(|(_, _, fs, _, r)| *fs > 0 && *r != 3)
        .count();
    let lit_big_bad = results
        .iter()
        .filter(|(_, _, _, bs, r)| *bs > 0 && *r != 4)
        .count();
    // corrected reading: f < 0 -> rank 3, f > 0 & F > 0 -> rank 4
    let cor_f_bad: Vec<_> = results
        .iter()
        .filter(|(_, _, fs, _, r)| *fs < 0 && *r != 3)
        .collect();
    let cor_big_bad: Vec<_> = results
        .iter()
        .filter(|(_, _, fs, bs, r)| *fs > 0 && *bs > 0 && *r != 4)
        .collect();
    println!(
        "criterion 8: literal published reading fails at {} (f>0) + {} (F>0) of 2500 grid points;",
        lit_f_bad, lit_big_bad
    );
    println!(
        "criterion 8: corrected reading (f<0 => rank 3, f>0 & F>0 => rank 4) exceptions: {} + {}",
        cor_f_bad.len(),
        cor_big_bad.len()
    );
    assert!(
        !cor_f_bad.is_empty() || cor_f_bad.is_empty(),
        "reporting only"
    );
    assert_eq!(cor_f_bad.len(), 0, "f<0 region is exactly rank 3 on the grid");
    assert_eq!(
        cor_big_bad.len(),
        0,
        "f>0 & F>0 region is exactly rank 4 on the grid"
    );
    // the literal reading is expected to fail (sign misprint; see strata
    // docs); assert the finding so silent regressions are caught
    assert!(
        lit_f_bad > 0 && lit_big_bad > 0,
        "the published inequalities were expected to misclassify; did the inputs change?"
    );

    // grid CSV with qualitative region shape: nonempty, component counts
    let recs = region_grid(
        &GridFamily::Canonical5Signs,
        (&rat(-3), &rat(3), &rat(-3), &rat(3)),
        (n, n),
        &b,
    )
    .unwrap();
    let rank3 = |r: &GridRecord| r.f_sign < 0;
    let rank4 = |r: &GridRecord| r.f_sign > 0 && r.big_f_sign > 0;
    let c3 = component_count(&recs, n, n, rank3);
    let c4 = component_count(&recs, n, n, rank4);
    assert!(c3 >= 1 && c4 >= 1, "both regions nonempty");
    let csv = waring::strata::grid_to_csv(&GridFamily::Canonical5Signs, &recs);
    assert!(csv.starts_with("a,b,f_sign,F_sign,label\n"));
    assert_eq!(csv.lines().count(), n * n + 1);
    println!(
        "criterion 8: PASS - rank-3 region components: {c3}, rank-4 region components: {c4}, 2500-point grid consistent under the corrected reading"
    );
}

#[test]
fn criterion_09_typical_rank_sampling() {
    let b = budget();
    let mut seen_incomplete = 0;
    for (d, expect_support, require_all) in [
        (3usize, vec![2usize, 3], true),
        (4, vec![3, 4], true),
        (5, vec![3, 4, 5], true),
    ] {
        let hist = sample_ranks(d, 1000, 1, Distribution::IntegerBox, &b).unwrap();
        let support: BTreeSet<usize> = hist.counts.keys().cloned().collect();
        let expected: BTreeSet<usize> = expect_support.iter().cloned().collect();
        if d <= 4 {
            assert_eq!(support, expected, "degree-{d} support");
        } else {
            assert!(support.is_subset(&expected), "degree-5 support within 3..=5");
            if require_all {
                assert_eq!(support, expected, "degree-5 support hits 3, 4 and 5");
            }
        }
        let floor = d / 2 + 1;
        assert!(
            support.iter().all(|r| *r >= floor),
            "no rank below {floor} observed for degree {d}"
        );
        seen_incomplete += hist.incomplete;
        println!(
            "criterion 9: degree {d} histogram {:?} (incomplete certificates: {})",
            hist.counts, hist.incomplete
        );
    }
    let _ = seen_incomplete;
    println!("criterion 9: PASS - supports {{2,3}}, {{3,4}}, {{3,4,5}} with the floor respected");
}

#[test]
fn criterion_10_complex_at_most_real() {
    let b = budget();
    let mut checked = 0;
    // forms from criteria 1-3
    let mut forms = vec![
        quintic(),
        BinaryForm::from_raw(4, &[rat(240), rat(224), rat(72), rat(8), rat(0)]).unwrap(),
        canonical5_point(&rat(0), &rat(0)),
    ];
    for d in 3..=6usize {
        for m in 1..d {
            forms.push(BinaryForm::monomial(d, m).unwrap());
        }
    }
    // plus random forms of each degree
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for d in 3..=5usize {
        for _ in 0..40 {
            let raw: Vec<Rat> = (0..=d).map(|_| rat(rng.gen_range(-30..=30))).collect();
            if let Ok(p) = BinaryForm::from_raw(d, &raw) {
                forms.push(p);
            }
        }
    }
    let results = waring::par::map_indexed(forms, |p| {
        let rr = real_rank(&p, &b).unwrap().rank;
        let (cr, _) = complex_rank(&p, &b).unwrap();
        (cr, rr)
    });
    for (cr, rr) in results {
        assert!(cr <= rr, "complex rank {cr} must not exceed real rank {rr}");
        checked += 1;
    }
    println!("criterion 10: PASS - complex <= real on {checked} forms");
}
