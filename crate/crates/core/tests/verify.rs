use wedgebound_core::density::Estimator;
use wedgebound_core::verify::{self, check_five_sides, Outcome, Overrides};
use wedgebound_core::Dimension;

#[test]
fn every_registered_check_succeeds_at_reduced_budget() {
    let est = Estimator::new(200_000, 4);
    let quick = Overrides {
        d: None,
        grid: None,
        trials: Some(8),
    };
    for entry in verify::registry() {
        let o = if entry.name == "angle-bound" {
            Overrides {
                grid: Some(5_000),
                ..quick
            }
        } else {
            quick
        };
        for rep in entry.run(&est, &o).unwrap() {
            assert!(rep.outcome.is_success(), "{rep:#?}");
            assert!(rep.metrics.iter().all(|m| m.value.is_finite()), "{}", rep.name);
        }
    }
}

#[test]
fn five_sides_threshold_is_bracketed() {
    let seven = check_five_sides(Dimension::new(7).unwrap(), 100).unwrap();
    assert_eq!(seven.outcome, Outcome::ExpectedOutsideDomain);
    let eight = check_five_sides(Dimension::new(8).unwrap(), 100).unwrap();
    assert_eq!(eight.outcome, Outcome::Pass);
    let q7 = eight.metrics.iter().find(|m| m.name == "quadratic_d7").unwrap().value;
    assert!(q7 > 4.0);
}

#[test]
fn reports_are_deterministic() {
    let est = Estimator::new(50_000, 8);
    let o = Overrides {
        d: Some(8),
        grid: None,
        trials: Some(3),
    };
    let entry = verify::find("truncated-wedges").unwrap();
    assert_eq!(entry.run(&est, &o).unwrap(), entry.run(&est, &o).unwrap());
}

#[test]
fn witnesses_accompany_failures() {
    let rep = verify::check_centre_distance(50).unwrap();
    assert!(rep.witness.is_some());
    assert_eq!(verify::overall(std::slice::from_ref(&rep)), Outcome::Pass);
    let mut bad = rep;
    bad.outcome = Outcome::Inconclusive;
    assert_eq!(verify::overall(&[bad]), Outcome::Inconclusive);
}
