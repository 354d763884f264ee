//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{build_form, homogeneous_part, raw_terms, RawTerm};
use invariant_forms::canonical::canonical_duality_check;
use invariant_forms::corpus::corpus_files;
use invariant_forms::euler::{bracket_defect, euler_homology, EulerOperator, HomologyQuery};
use invariant_forms::invariant::hilbert_basis;
use invariant_forms::pullback::Surjectivity;
use invariant_forms::report::{analyze, AnalysisOptions, AnalysisReport};
use invariant_forms::smoothness::{monoid_smooth, shephard_todd_smooth, singular_locus, RouteVerdict};
use invariant_forms::ActionSpec;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus() -> Vec<(String, ActionSpec, AnalysisReport)> {
    corpus_files(&corpus_dir())
        .expect("corpus directory")
        .iter()
        .map(|p| {
            let a = ActionSpec::from_json(&std::fs::read_to_string(p).unwrap()).unwrap();
            let r = analyze(&a, &AnalysisOptions::default()).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), a, r)
        })
        .collect()
}

fn onto_all(r: &AnalysisReport, ks: std::ops::RangeInclusive<usize>) -> Option<bool> {
    let mut all = true;
    for k in ks {
        match r.surjectivity_for(k)?.verdict.is_surjective() {
            Some(b) => all &= b,
            None => return None,
        }
    }
    Some(all)
}

fn identities() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let strategy = (
        proptest::collection::vec(-3i64..=3, 2..=4),
        0usize..=4,
        0usize..=2,
        raw_terms(6),
        raw_terms(4),
    );
    let cases = 500;
    let mut failures = Vec::new();
    for case in 0..cases {
        let (w, k, l, r1, r2): (Vec<i64>, usize, usize, Vec<RawTerm>, Vec<RawTerm>) =
            strategy.new_tree(&mut runner).unwrap().current();
        let a = ActionSpec::torus(&w);
        let n = a.n;
        let (k, l) = (k.min(n), l.min(n));
        let f = build_form(n, k, &r1);
        let g = build_form(n, l, &r2);
        let e = EulerOperator::new(&a, 0).unwrap();
        let sign = |m: usize| num_rational::BigRational::from_integer(if m % 2 == 0 { 1 } else { -1 }.into());
        let ee = e.apply(&e.apply(&f)).is_zero();
        let el = {
            let lhs = e.apply(&f.wedge(&g).unwrap());
            let rhs = &f.wedge(&e.apply(&g)).unwrap() + &e.apply(&f).wedge(&g).unwrap().scale(&sign(l));
            (&lhs - &rhs).is_zero()
        };
        let dd = f.exterior_derivative().exterior_derivative().is_zero();
        let dl = {
            let lhs = f.wedge(&g).unwrap().exterior_derivative();
            let rhs = &f.exterior_derivative().wedge(&g).unwrap()
                + &f.wedge(&g.exterior_derivative()).unwrap().scale(&sign(k));
            (&lhs - &rhs).is_zero()
        };
        let br = bracket_defect(&a, 0, &homogeneous_part(&a, &f)).unwrap().is_zero();
        for (name, ok) in [("e∘e", ee), ("e Leibniz", el), ("d∘d", dd), ("d Leibniz", dl), ("bracket", br)] {
            if !ok {
                failures.push(format!("{} fails on case {}", name, case));
            }
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} random forms, 5 identities each", cases)
        } else {
            failures.join("; ")
        },
    )
}

fn exactness() -> Outcome {
    let mut weights: Vec<Vec<i64>> = Vec::new();
    for a in 1..=3 {
        for b in 1..=3 {
            weights.push(vec![a, b]);
            for c in 1..=3 {
                weights.push(vec![a, b, c]);
            }
        }
    }
    let mut bad = Vec::new();
    let mut pieces = 0;
    for w in &weights {
        let a = ActionSpec::torus(w);
        for d in 0..=10 {
            let mut q = HomologyQuery::new(0, d);
            q.require_point_quotient = true;
            let t = euler_homology(&a, &q).unwrap();
            let mut expected = vec![0; a.n + 1];
            if d == 0 {
                expected[0] = 1;
            }
            pieces += 1;
            if t.homology != expected {
                bad.push(format!("{:?} degree {}: {:?}", w, d, t.homology));
            }
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} weight vectors × degrees 0..=10 ({} pieces) exact", weights.len(), pieces)
        } else {
            bad.join("; ")
        },
    )
}

fn finite_equivalence(corpus: &[(String, ActionSpec, AnalysisReport)]) -> Outcome {
    let mut certified = 0;
    let mut bad = Vec::new();
    for (name, a, r) in corpus.iter().filter(|(_, a, _)| a.torus_rank == 0) {
        let hb = hilbert_basis(a, r.bounds.max_degree).unwrap();
        let monoid = monoid_smooth(&hb).as_bool();
        let st = shephard_todd_smooth(a).ok();
        let surj = onto_all(r, 1..=a.n);
        match (surj, monoid, st) {
            (Some(s), Some(m), Some(t)) => {
                certified += 1;
                if !(s == m && m == t) {
                    bad.push(format!("{}: surjective {} monoid {} reflections {}", name, s, m, t));
                }
            }
            _ => bad.push(format!("{}: not certified", name)),
        }
    }
    outcome(
        bad.is_empty() && certified >= 20,
        if bad.is_empty() {
            format!("{} certified finite instances, zero disagreements", certified)
        } else {
            bad.join("; ")
        },
    )
}

fn a1_golden() -> Outcome {
    let a = ActionSpec::cyclic(2, &[1, 1]);
    let r = analyze(&a, &AnalysisOptions::default()).unwrap();
    let golden = std::fs::read_to_string(corpus_dir().join("z2_1_1.golden.json")).unwrap_or_default();
    let k1 = r.surjectivity_for(1).unwrap();
    let cok: Vec<usize> = k1.cokernel.iter().filter(|c| c.degree <= 8).map(|c| c.cokernel_dim).collect();
    let mut problems = Vec::new();
    if cok != vec![0, 0, 1, 0, 0, 0, 0, 0, 0] {
        problems.push(format!("cokernel dims {:?}", cok));
    }
    let witnesses: Vec<&str> = k1.witnesses.iter().map(|w| w.form.as_str()).collect();
    if witnesses != vec!["x1*dx2 - x2*dx1"] {
        problems.push(format!("witnesses {:?}", witnesses));
    }
    if !matches!(k1.verdict, Surjectivity::NotSurjective { .. }) || r.smoothness.verdict != RouteVerdict::Singular {
        problems.push("verdicts".into());
    }
    if r.to_json() != golden {
        problems.push("report differs from golden file".into());
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            "cokernel (0,0,1,0,...) through degree 8, witness x1*dx2 - x2*dx1, golden report identical".to_string()
        } else {
            problems.join("; ")
        },
    )
}

fn smooth_onto(corpus: &[(String, ActionSpec, AnalysisReport)]) -> Outcome {
    let mut smooth = 0;
    let mut bad = Vec::new();
    for (name, _, r) in corpus {
        if r.smoothness.verdict != RouteVerdict::Smooth {
            continue;
        }
        smooth += 1;
        for s in &r.surjectivity {
            if let Some(row) = s.cokernel.iter().find(|c| c.image_dim != c.target_dim) {
                bad.push(format!("{} k={} degree {}", name, s.k, row.degree));
            }
        }
    }
    outcome(
        bad.is_empty() && smooth > 0,
        if bad.is_empty() {
            format!("{} smooth instances, image = target in every degree and form degree", smooth)
        } else {
            bad.join("; ")
        },
    )
}

fn duality(corpus: &[(String, ActionSpec, AnalysisReport)]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (name, a, _) in corpus.iter().filter(|(_, a, _)| a.torus_rank == 0) {
        match canonical_duality_check(a, 10) {
            Ok(c) => {
                checked += 1;
                if !c.matches {
                    bad.push(format!("{}: forms {:?} toric {:?}", name, c.forms, c.toric));
                }
            }
            Err(invariant_forms::Error::Precondition(_)) => {}
            Err(e) => bad.push(format!("{}: {}", name, e)),
        }
    }
    outcome(
        bad.is_empty() && checked > 0,
        if bad.is_empty() {
            format!("{} small-group instances, series equal through degree 10", checked)
        } else {
            bad.join("; ")
        },
    )
}

fn top_degree(corpus: &[(String, ActionSpec, AnalysisReport)]) -> Outcome {
    let mut applicable = 0;
    let mut bad = Vec::new();
    for (name, _, r) in corpus {
        let isolated = r.quotient.singular_locus.as_ref().is_some_and(|l| l.isolated);
        let n = r.quotient.dimension;
        if !isolated || n < 2 {
            continue;
        }
        let below = r.surjectivity_for(n - 1).and_then(|s| s.verdict.is_surjective());
        let top = r.surjectivity_for(n).and_then(|s| s.verdict.is_surjective());
        if below == Some(true) {
            applicable += 1;
            if top != Some(true) {
                bad.push(name.clone());
            }
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} isolated instances onto in degree n-1, all onto in degree n", applicable)
        } else {
            format!("counterexamples: {}", bad.join(", "))
        },
    )
}

fn torus_spot_check(corpus: &[(String, ActionSpec, AnalysisReport)]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (name, a, r) in corpus.iter().filter(|(_, a, _)| a.torus_rank > 0) {
        let hb = hilbert_basis(a, r.bounds.max_degree).unwrap();
        let Ok(locus) = singular_locus(a, &hb) else {
            continue;
        };
        if !locus.isolated {
            continue;
        }
        let n_y = r.quotient.dimension;
        let Some(onto) = onto_all(r, 1..=n_y) else {
            bad.push(format!("{}: inconclusive", name));
            continue;
        };
        checked += 1;
        if onto != locus.smooth || onto != (r.smoothness.monoid == RouteVerdict::Smooth) {
            bad.push(format!("{}: onto {} smooth {}", name, onto, locus.smooth));
        }
        if !onto {
            let witnessed = r
                .surjectivity
                .iter()
                .any(|s| matches!(s.verdict, Surjectivity::NotSurjective { .. }));
            if !witnessed {
                bad.push(format!("{}: no non-surjective degree", name));
            }
        }
    }
    outcome(
        bad.is_empty() && checked >= 5,
        if bad.is_empty() {
            format!("{} isolated torus quotients, onto iff smooth", checked)
        } else {
            bad.join("; ")
        },
    )
}

fn main() {
    let mut failed = 0;
    let mut report = |n: usize, title: &str, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let pass = o.pass && took <= limit;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {} ({}; {:.2}s of {}s)",
            if pass { "PASS" } else { "FAIL" },
            n,
            title,
            o.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
    };
    report(1, "algebraic identities", Duration::from_secs(30), &mut identities);
    report(2, "Euler complex exactness", Duration::from_secs(60), &mut exactness);
    let start = Instant::now();
    let corpus = corpus();
    let corpus_time = start.elapsed();
    report(3, "finite-group equivalence", Duration::from_secs(300).saturating_sub(corpus_time), &mut || {
        finite_equivalence(&corpus)
    });
    report(4, "A1 golden instance", Duration::from_secs(60), &mut a1_golden);
    report(5, "smooth quotients have onto pullbacks", Duration::from_secs(60), &mut || smooth_onto(&corpus));
    report(6, "canonical module duality", Duration::from_secs(60), &mut || duality(&corpus));
    report(7, "degree n-1 onto implies degree n onto", Duration::from_secs(60), &mut || top_degree(&corpus));
    report(8, "torus quotient spot-check", Duration::from_secs(60), &mut || torus_spot_check(&corpus));
    if failed > 0 {
        std::process::exit(1);
    }
}
