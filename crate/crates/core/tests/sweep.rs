use invariant_forms::report::{analyze, AnalysisOptions};
use invariant_forms::smoothness::RouteVerdict;
use invariant_forms::ActionSpec;

fn weight_vectors(m: i64, n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..m).map(move |w| {
                    let mut v = v.clone();
                    v.push(w);
                    v
                })
            })
            .collect();
    }
    // Weights up to permutation of coordinates.
    out.retain(|v| v.windows(2).all(|p| p[0] <= p[1]));
    out
}

#[test]
fn every_small_cyclic_action_is_consistent() {
    let mut count = 0;
    for m in 2..=8u64 {
        for n in 2..=3 {
            for w in weight_vectors(m as i64, n) {
                let a = ActionSpec::cyclic(m, &w);
                let r = analyze(&a, &AnalysisOptions::default()).unwrap();
                assert!(!r.is_inconclusive(), "{:?} mod {}: {:?}", w, m, r.inconclusive);
                assert!(r.checks.violations().is_empty(), "{:?} mod {}: {:?}", w, m, r.checks);
                assert_ne!(r.smoothness.verdict, RouteVerdict::Inconclusive);
                count += 1;
            }
        }
    }
    assert!(count > 200);
}

#[test]
fn small_torus_actions_are_consistent() {
    let mut count = 0;
    for w in weight_vectors(7, 3) {
        let w: Vec<i64> = w.iter().map(|x| x - 3).collect();
        let a = ActionSpec::torus(&w);
        let r = analyze(&a, &AnalysisOptions::default()).unwrap();
        assert!(r.checks.violations().is_empty(), "{:?}: {:?}", w, r.checks);
        if !r.is_inconclusive() {
            count += 1;
        }
    }
    assert!(count > 30);
}
