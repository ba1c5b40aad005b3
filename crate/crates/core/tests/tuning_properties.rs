use statrs::distribution::{ContinuousCDF, Normal};
use twinreg::tuning::{normal_quantile, universal_twin_a, universal_twin_b, UniversalInputs};

#[test]
fn quantile_agrees_with_statrs() {
    let reference = Normal::new(0.0, 1.0).unwrap();
    for i in 1..2000 {
        let p = i as f64 / 2000.0;
        let ours = normal_quantile(p).unwrap();
        assert!((ours - reference.inverse_cdf(p)).abs() < 1e-9, "p = {p}");
        assert!((reference.cdf(ours) - p).abs() < 1e-10);
    }
    for p in [1e-10, 1e-6, 1e-4, 1.0 - 1e-6] {
        assert!((normal_quantile(p).unwrap() - reference.inverse_cdf(p)).abs() < 1e-8 * (1.0 + p.ln().abs()));
    }
}

#[test]
fn universal_rules_scale_with_sigma_and_grow_with_p() {
    let n = 10_000;
    let mut previous = (0.0, 0.0, 0.0, 0.0);
    for p in [10, 100, 1000, 3000] {
        let one = UniversalInputs::new(n, p, 1.0);
        let three = UniversalInputs::new(n, p, 3.0);
        let (la, ta) = universal_twin_a(&one).unwrap();
        let (lb, tb) = universal_twin_b(&one, false).unwrap();
        let (la3, ta3) = universal_twin_a(&three).unwrap();
        let (lb3, tb3) = universal_twin_b(&three, false).unwrap();
        for (x, x3) in [(la, la3), (ta, ta3), (lb, lb3), (tb, tb3)] {
            assert!(x > 0.0);
            assert!((x3 - 3.0 * x).abs() <= 1e-12 * x3);
        }
        assert!(la >= previous.0 && ta >= previous.1 && lb >= previous.2 && tb >= previous.3);
        previous = (la, ta, lb, tb);
    }
}
