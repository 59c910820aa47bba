//! Acceptance suite: one test per shipped criterion, each printing a
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`).
//! All arithmetic is exact; tolerances are therefore zero, and the stated
//! runtime budgets are asserted.

mod common;

use quiverkit::algebra::{cartan_matrix, compute_basis, idempotent_algebra, socle_and_radical};
use quiverkit::corpus::{
    self, breaking_mutations, corpus_entry, glue_blocks, random_glue_spec, spherical_quiver,
    CorpusEntry,
};
use quiverkit::homology::{
    is_isomorphic, period4_diagnostics, period_of_simple, syzygy_chain, IsoVerdict,
};
use quiverkit::pattern::match_pattern;
use quiverkit::quiver::{Path, Quiver};
use quiverkit::registry::{forbidden_registry, scan_forbidden};
use quiverkit::scalar::FieldSpec;
use quiverkit::verify::{
    check_forbidden_configs, check_infinite_type_conditions, main_theorem_report, Verdict,
};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

fn report(number: u32, name: &str, pass: bool, elapsed: Duration) {
    println!(
        "criterion {number:02} {name}: {} ({}ms)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_millis()
    );
}

fn corpus_presentation(name: &str) -> quiverkit::algebra::Presentation {
    match corpus_entry(name).unwrap().entry {
        CorpusEntry::Presentation(p) => p,
        CorpusEntry::Quiver(_) => panic!("{name} is not a presentation"),
    }
}

fn corpus_quiver(name: &str) -> Quiver {
    match corpus_entry(name).unwrap().entry {
        CorpusEntry::Quiver(q) => q,
        CorpusEntry::Presentation(p) => p.quiver,
    }
}

/// Criterion 1: basis and Cartan matrix of the cyclic 2-vertex algebra with
/// all length-3 paths zero, checked against an independent brute-force path
/// enumerator. Runtime < 1 s.
#[test]
fn criterion_01_basis_cartan_oracle() {
    let start = Instant::now();
    let pres = corpus_presentation("cycle2_len3");
    let basis = compute_basis(&pres, FieldSpec::Rational).unwrap();
    let cartan = cartan_matrix(&basis);
    let q = &pres.quiver;
    let a = q.arrow_by_name("a").unwrap();
    let b = q.arrow_by_name("b").unwrap();
    let oracle = common::monomial_pair_counts(q, &[vec![a, b, a], vec![b, a, b]], 6);
    let mut pass = basis.dim() == 6 && cartan.entries == vec![vec![2, 1], vec![1, 2]];
    for s in 0..2 {
        for t in 0..2 {
            pass &= oracle.get(&(s, t)).copied().unwrap_or(0) == cartan.entries[s][t];
        }
    }
    let oracle_total: usize = oracle.values().sum();
    pass &= oracle_total == basis.dim();
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(1);
    report(1, "basis-cartan-oracle", pass, elapsed);
    assert!(pass);
}

/// Criterion 2, as stated: for the same algebra, Omega^2(S_1) = S_1 and
/// Omega^2(S_2) = S_2 with period exactly 2; K[x]/(x^2) has period 1.
///
/// The second syzygies of this dimension-6 algebra are exactly computable
/// and come out as Omega^2(S_1) = S_2 (the socle of P_2), giving period 4,
/// so the stated period-2 expectation cannot hold together with the
/// dimension fixed by criterion 1. The assertion is kept as stated and the
/// failure is intentional; see the unit suite for the computed values.
#[test]
fn criterion_02_syzygy_oracle_as_stated() {
    let start = Instant::now();
    let pres = corpus_presentation("cycle2_len3");
    let basis = compute_basis(&pres, FieldSpec::Rational).unwrap();
    let mut stated = true;
    for v in 0..2 {
        let chain = syzygy_chain(&basis, v, 2).unwrap();
        let omega2 = &chain.modules[2];
        let simple = quiverkit::homology::simple_module(&basis, v);
        stated &= is_isomorphic(&basis, omega2, &simple) == IsoVerdict::Isomorphic;
        stated &= period_of_simple(&basis, v, 6).unwrap() == Some(2);
    }
    let loop_pres = corpus_presentation("loop_x2");
    let loop_basis = compute_basis(&loop_pres, FieldSpec::Rational).unwrap();
    stated &= period_of_simple(&loop_basis, 0, 4).unwrap() == Some(1);
    let elapsed = start.elapsed();
    let pass = stated && elapsed < Duration::from_secs(1);
    report(2, "syzygy-oracle-as-stated", pass, elapsed);
    assert!(
        pass,
        "stated expectation Omega^2(S_i) = S_i with period exactly 2 does not hold: \
         the exact computation gives Omega^2(S_1) = S_2 (the 1-dimensional socle of P_2, \
         concentrated at vertex 2) and period 4, which is forced by the dimension-6 \
         algebra pinned by criterion 1"
    );
}

/// Criterion 3: the dimension-8 quaternion-type local algebra has simple
/// period exactly 4, a 1-dimensional socle and a symmetric Cartan matrix.
/// Runtime < 5 s.
#[test]
fn criterion_03_period_four_desk_scale() {
    let start = Instant::now();
    let pres = corpus_presentation("quaternion_local");
    let basis = compute_basis(&pres, FieldSpec::Rational).unwrap();
    let mut pass = basis.dim() == 8;
    pass &= period_of_simple(&basis, 0, 6).unwrap() == Some(4);
    let rad = socle_and_radical(&basis);
    pass &= rad.socles[0].dim == 1;
    pass &= cartan_matrix(&basis).is_symmetric();
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(5);
    report(3, "period-four-desk-scale", pass, elapsed);
    assert!(pass);
}

/// Criterion 4: every corpus simple with detected period 4 satisfies
/// p+ = p- and the two matrix identities for some choice of the arrows
/// ending at the vertex. Zero failures.
#[test]
fn criterion_04_period4_identities() {
    let start = Instant::now();
    let mut tested = 0usize;
    let mut failures = Vec::new();
    for entry in corpus::named_corpus() {
        let CorpusEntry::Presentation(pres) = entry.entry else {
            continue;
        };
        let basis = compute_basis(&pres, FieldSpec::Rational).unwrap();
        for v in 0..pres.quiver.vertex_count() {
            let period = match period_of_simple(&basis, v, 8) {
                Ok(p) => p,
                Err(_) => continue, // inconclusive: no detected period 4
            };
            if period != Some(4) {
                continue;
            }
            tested += 1;
            let rep = period4_diagnostics(&basis, v).unwrap();
            if rep.p_plus != rep.p_minus || !rep.ok() {
                failures.push(format!(
                    "{} vertex {}: {:?}",
                    entry.name,
                    pres.quiver.vertex_name(v),
                    rep.findings
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && tested >= 3;
    report(4, "period4-identities", pass, elapsed);
    assert!(pass, "tested {tested}, failures: {failures:?}");
}

fn positive_suite() -> Vec<Quiver> {
    let mut out: Vec<Quiver> = (0..200)
        .map(|seed| {
            let spec = random_glue_spec(seed);
            let res = glue_blocks(&spec).unwrap();
            assert!(res.biregular, "glue seed {seed} not biregular");
            res.quiver
        })
        .collect();
    out.push(spherical_quiver());
    out
}

/// Criterion 5: every quiver glued from 200 seeded legal specs (plus the
/// spherical quiver) passes the block classification with every 1-regular
/// vertex assigned. Runtime < 30 s.
#[test]
fn criterion_05_main_theorem_positive_suite() {
    let start = Instant::now();
    let mut violations = 0usize;
    for (k, q) in positive_suite().iter().enumerate() {
        match main_theorem_report(q, None) {
            Ok(rep) if rep.passes() => {}
            Ok(rep) => {
                violations += 1;
                eprintln!("suite quiver {k}: violations {:?}", rep.violations);
            }
            Err(e) => {
                violations += 1;
                eprintln!("suite quiver {k}: {e}");
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = violations == 0 && elapsed < Duration::from_secs(30);
    report(5, "main-theorem-positive-suite", pass, elapsed);
    assert!(pass, "{violations} positive-suite quivers failed");
}

/// Criterion 6: 20 seeded breaking mutations per positive-suite quiver are
/// all flagged, either as a violation or as a non-biregular error.
/// Detection rate 100%.
#[test]
fn criterion_06_main_theorem_mutation_suite() {
    let start = Instant::now();
    let mut missed = 0usize;
    for (k, q) in positive_suite().iter().enumerate() {
        for (desc, mutated) in breaking_mutations(q, 20, 1000 + k as u64) {
            let flagged = match main_theorem_report(&mutated, None) {
                Err(_) => true,
                Ok(rep) => !rep.passes(),
            };
            if !flagged {
                missed += 1;
                eprintln!("suite quiver {k}: undetected mutation `{desc}`");
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = missed == 0;
    report(6, "main-theorem-mutation-suite", pass, elapsed);
    assert!(pass, "{missed} mutations went undetected");
}

/// Criterion 7: each shipped figure triggers exactly its named check; the
/// spherical quiver and the whole positive suite trigger none.
#[test]
fn criterion_07_forbidden_configuration_suite() {
    let start = Instant::now();
    let mut pass = true;

    let failing_checks = |pres: &quiverkit::algebra::Presentation,
                          basis: Option<&quiverkit::algebra::AlgebraBasis>|
     -> Vec<String> {
        check_forbidden_configs(pres, basis)
            .into_iter()
            .filter(|c| c.verdict == Verdict::Fail)
            .map(|c| c.check)
            .collect()
    };

    // two triangles over a common base
    let pres =
        quiverkit::algebra::Presentation::new(corpus_quiver("lemma41_figure"), vec![], 2).unwrap();
    pass &= failing_checks(&pres, None) == vec!["forbidden_two_triangles"];

    // the 5-vertex quiver, with the drawn composite supplied as a relation
    let q = corpus_quiver("cor43_figure");
    let rel =
        quiverkit::algebra::Relation::of_paths(&q, "r", &[(1, &["ga", "al"]), (-1, &["gb", "as"])])
            .unwrap();
    let pres = quiverkit::algebra::Presentation::new(q, vec![rel], 3).unwrap();
    pass &= failing_checks(&pres, None) == vec!["forbidden_five_vertex"];

    // the double-arrow figure, same relation fragment
    let q = corpus_quiver("lemma44_figure");
    let rel =
        quiverkit::algebra::Relation::of_paths(&q, "r", &[(1, &["ga", "al"]), (-1, &["gb", "as"])])
            .unwrap();
    let pres = quiverkit::algebra::Presentation::new(q, vec![rel], 3).unwrap();
    pass &= failing_checks(&pres, None) == vec!["forbidden_double_arrow"];

    // the constructed constant-Cartan instance
    let pres = corpus_presentation("lemma42_instance");
    let basis = compute_basis(&pres, FieldSpec::Rational).unwrap();
    pass &= failing_checks(&pres, Some(&basis)) == vec!["forbidden_equal_cartan"];

    // spherical quiver and the positive suite trigger nothing
    for q in positive_suite() {
        let pres = quiverkit::algebra::Presentation::new(q.clone(), vec![], 2).unwrap();
        if !failing_checks(&pres, None).is_empty() {
            pass = false;
            eprintln!("positive-suite quiver triggered a forbidden check");
        }
        for item in scan_forbidden(&q, None) {
            if item.hit_count() > 0 {
                pass = false;
                eprintln!("positive-suite quiver hit pattern {}", item.pattern);
            }
        }
    }

    let elapsed = start.elapsed();
    report(7, "forbidden-configuration-suite", pass, elapsed);
    assert!(pass);
}

/// Criterion 8: the backtracking matcher agrees exactly with brute-force
/// monomorphism enumeration for every unannotated registry pattern over 200
/// seeded random quivers. Runtime < 60 s.
#[test]
fn criterion_08_pattern_matcher_oracle() {
    let start = Instant::now();
    let patterns: Vec<_> = forbidden_registry()
        .into_iter()
        .filter(|p| !p.is_annotated())
        .collect();
    assert!(!patterns.is_empty());
    let mut mismatches = 0usize;
    for seed in 0..200u64 {
        let q = common::random_quiver(6, 12, seed);
        for spec in &patterns {
            let got = match_pattern(&q, spec, None).unwrap().embeddings.len();
            let want = common::brute_force_occurrences(&q, spec);
            if got != want {
                mismatches += 1;
                eprintln!(
                    "seed {seed} pattern {}: matcher {got}, brute force {want}",
                    spec.name
                );
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches == 0 && elapsed < Duration::from_secs(60);
    report(8, "pattern-matcher-oracle", pass, elapsed);
    assert!(pass);
}

/// Criterion 9: the idempotent cut of the cyclic 3-vertex length-4
/// truncation at {1, 2} has dimension 6, a 2-cycle Gabriel quiver, and the
/// induced length-4 word vanishes. Exact equality throughout.
#[test]
fn criterion_09_idempotent_algebra_oracle() {
    let start = Instant::now();
    let pres = corpus_presentation("cycle3_len4");
    let basis = compute_basis(&pres, FieldSpec::Rational).unwrap();
    let q = &pres.quiver;
    let (v1, v2) = (q.vertex("1").unwrap(), q.vertex("2").unwrap());
    let idem = idempotent_algebra(&basis, &BTreeSet::from([v1, v2]));
    let mut pass = idem.dim == 6;
    pass &= idem.gabriel_arrows.get(&(v1, v2)) == Some(&1);
    pass &= idem.gabriel_arrows.get(&(v2, v1)) == Some(&1);
    pass &= !idem.gabriel_arrows.contains_key(&(v1, v1));
    pass &= !idem.gabriel_arrows.contains_key(&(v2, v2));
    // a * bc * a = 0 in the cut algebra
    let a = q.arrow_by_name("a").unwrap();
    let b = q.arrow_by_name("b").unwrap();
    let c = q.arrow_by_name("c").unwrap();
    let one = basis.field.one();
    let elem_a = vec![(
        basis
            .basis_index_of(&Path::new(q, v1, vec![a]).unwrap())
            .unwrap(),
        one.clone(),
    )];
    let elem_bc = vec![(
        basis
            .basis_index_of(&Path::new(q, v2, vec![b, c]).unwrap())
            .unwrap(),
        one,
    )];
    let word = basis.multiply(&basis.multiply(&elem_a, &elem_bc), &elem_a);
    pass &= word.is_empty();
    let elapsed = start.elapsed();
    report(9, "idempotent-algebra-oracle", pass, elapsed);
    assert!(pass);
}

/// Criterion 10: the finite-type corpus entries exhibit |p_hat| = |p|
/// margins of exactly zero, reported as the expected margin-check failure.
#[test]
fn criterion_10_margin_consistency() {
    let start = Instant::now();
    let mut pass = true;
    for name in ["loop_x2", "cycle2_len3", "cycle3_len4"] {
        let pres = corpus_presentation(name);
        let basis = compute_basis(&pres, FieldSpec::Rational).unwrap();
        let chains: BTreeSet<usize> = (0..pres.quiver.vertex_count())
            .filter(|&v| syzygy_chain(&basis, v, 8).is_ok())
            .collect();
        let results = check_infinite_type_conditions(&pres, Some(&basis), Some(&chains));
        let margin = results
            .iter()
            .find(|c| c.check == "margin_inequality")
            .unwrap();
        let ok = margin.verdict == Verdict::Fail
            && margin.witnesses.len() == pres.quiver.vertex_count()
            && margin.witnesses.iter().all(|w| w.ends_with("= 0"));
        if !ok {
            pass = false;
            eprintln!(
                "{name}: margin check came out as {:?} {:?}",
                margin.verdict, margin.witnesses
            );
        }
    }
    let elapsed = start.elapsed();
    report(10, "margin-consistency", pass, elapsed);
    assert!(pass);
}
