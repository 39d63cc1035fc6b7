use krnn_core::bench::{excess_percent, registry, Excess};
use krnn_core::claims::{
    check_lemma2_instance, check_plan, check_ratio_bound, check_theorem3, replay, ClaimId,
    TrialPlan, VerdictDocument,
};
use krnn_core::exact::optimal_tour;
use krnn_core::instance::{DistanceKind, GeneratorKind, Instance, Point};
use krnn_core::Result;

#[test]
fn published_excess_column_reproduces() {
    let mut cells = 0;
    for e in registry() {
        for k in [1, 2] {
            let p = e.paper(k).unwrap();
            assert_eq!(
                excess_percent(p.result as f64, e.optimum as f64).unwrap(),
                p.excess,
                "{} k={k}",
                e.name
            );
            cells += 1;
        }
    }
    assert_eq!(cells, 96);
}

#[test]
fn published_ratio_rows() {
    let berlin = registry().iter().find(|e| e.name == "berlin52").unwrap();
    assert_eq!(berlin.paper_2rnn.result, 7968);
    assert_eq!(
        excess_percent(7968.0, 7542.0).unwrap(),
        Excess::from_hundredths(565)
    );
    let p654 = registry().iter().find(|e| e.name == "p654").unwrap();
    let ratio = p654.paper_2rnn.result as f64 / p654.optimum as f64;
    assert!((ratio - 1.2394).abs() < 5e-5 && ratio < 1.25);
    assert!(registry()
        .iter()
        .all(|e| (e.paper_2rnn.result as f64) < 1.25 * e.optimum as f64));
}

#[test]
fn regular_pentagon_lemma2() {
    let pts = (0..5)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / 5.0;
            Point::new(a.cos(), a.sin())
        })
        .collect();
    let inst = Instance::from_points("pentagon", pts, DistanceKind::Euclidean).unwrap();
    let v = check_lemma2_instance(&inst).unwrap();
    assert_eq!(v.violations, 0);
    assert!((v.worst_ratio.unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn path_shaped_mst_gives_ratio_one() {
    let pts = (0..7)
        .map(|i| Point::new(i as f64, 0.01 * (i % 2) as f64))
        .collect();
    let inst = Instance::from_points("zigzag", pts, DistanceKind::Euclidean).unwrap();
    let v = check_theorem3(&inst).unwrap();
    assert_eq!(v.worst_ratio, Some(1.0));
    assert!(v.proven);
}

#[test]
fn theorem3_plan_has_no_violations() {
    let plan = TrialPlan::new(GeneratorKind::EuclideanUniform, 50, 200, 9);
    let v = check_plan(ClaimId::Theorem3, &plan, 2).unwrap();
    assert_eq!((v.trials, v.violations, v.errors), (200, 0, 0));
    assert!(v.worst_ratio.unwrap() <= 1.25);
    assert!(!v.is_defect());
}

#[test]
fn mst_bound_plan_with_exact_optima() {
    for kind in [
        GeneratorKind::EuclideanUniform,
        GeneratorKind::ArbitraryNonnegative,
    ] {
        let plan = TrialPlan::new(kind, 9, 50, 3);
        let v = check_plan(ClaimId::MstBound, &plan, 2).unwrap();
        assert_eq!((v.violations, v.errors), (0, 0), "{kind}");
    }
}

#[test]
fn ratio_plan_reports_and_replays() {
    let plan = TrialPlan::new(GeneratorKind::ArbitraryNonnegative, 8, 60, 100);
    let v = check_plan(ClaimId::ConjectureK, &plan, 1).unwrap();
    assert_eq!(v.claim_id, ClaimId::ConjectureK);
    assert_eq!(v.bound, Some(2.0));
    assert_eq!(v.counterexamples.is_empty(), v.violations == 0);
    let unused = |_: &str| -> Result<(Instance, Option<f64>)> { unreachable!() };
    for cx in &v.counterexamples {
        assert_eq!(replay(v.claim_id, v.k, cx, &unused).unwrap().violations, 1);
    }
    let doc = VerdictDocument::new(vec![v]);
    let back: VerdictDocument = serde_json::from_str(&doc.to_json()).unwrap();
    assert_eq!(back, doc);
}

#[test]
fn single_instance_ratio_uses_given_optimum() {
    let inst = krnn_core::random_instance(GeneratorKind::EuclideanUniform, 9, 1).unwrap();
    let opt = optimal_tour(&inst).unwrap().optimum_cost;
    let v = check_ratio_bound(&inst, opt, 2).unwrap();
    assert_eq!(v.claim_id, ClaimId::Theorem4Ratio);
    assert!(v.worst_ratio.unwrap() >= 1.0);
}
