mod common;

use common::fuchsian;
use hitchin_core::asymptotic::*;
use hitchin_core::lengths::length_vector;
use hitchin_core::rep::{build_octagon_fuchsian, deform};
use hitchin_core::word::Word;
use hitchin_core::Error;

fn word(s: &str) -> Word {
    s.parse().unwrap()
}

const PAIRS: [(&str, &str); 2] = [("a1", "b1"), ("a1 b1", "a2")];

#[test]
fn constant_series_when_beta_is_alpha() {
    let rep = fuchsian(3);
    let a = word("a1 b2");
    let s = ratio_series(&rep, &a, &a, 20).unwrap();
    let l = length_vector(&rep, &a).unwrap();
    for i in 0..3 {
        for m in 1..=20 {
            assert!((s.log_ratio[i][m - 1] - l[i]).abs() <= 1e-10);
        }
    }
    let c = convergence_report(&s).unwrap();
    assert!(c.all_converged());
    for i in 0..3 {
        assert!(c.rate[i].is_none());
        assert!(c.tail_residual[i] <= 1e-11);
        assert!((c.limit_estimate[i] - l[i]).abs() <= 1e-10);
    }
}

#[test]
fn fuchsian_series_scale_with_index() {
    let base = build_octagon_fuchsian();
    for (a, b) in PAIRS {
        let (alpha, beta) = (word(a), word(b));
        let s2 = ratio_series(&base, &alpha, &beta, 40).unwrap();
        let c2 = convergence_report(&s2).unwrap();
        // independent oracle for the n = 2 series from traces
        for m in 1..=40 {
            let t = |w: &Word| (base.evaluate_plain(w).trace().abs() / 2.0).acosh();
            if m <= 12 {
                let expected = t(&alpha.pow(m).concat(&beta)) - m as f64 * t(&alpha);
                assert!((s2.log_ratio[0][m - 1] - expected).abs() <= 1e-8);
            }
        }
        for n in 3..=5 {
            let s = ratio_series(&fuchsian(n), &alpha, &beta, 40).unwrap();
            let c = convergence_report(&s).unwrap();
            for i in 0..n {
                let k = n as f64 - 1.0 - 2.0 * i as f64;
                for m in 1..=40 {
                    assert!((s.log_ratio[i][m - 1] - k * s2.log_ratio[0][m - 1]).abs() <= 1e-8);
                }
                assert!((c.limit_estimate[i] - k * c2.limit_estimate[0]).abs() <= 1e-8);
            }
        }
    }
}

#[test]
fn n2_differences_decay_below_threshold() {
    let s = ratio_series(&build_octagon_fuchsian(), &word("a1"), &word("b1"), 40).unwrap();
    let diffs: Vec<f64> = s.log_ratio[0].windows(2).map(|p| (p[1] - p[0]).abs()).collect();
    let first_small = diffs.iter().position(|&d| d < 1e-8).expect("decays below 1e-8");
    assert!(first_small + 2 < 40);
    // monotone until the noise floor
    let c = convergence_report(&s).unwrap();
    let floor = c.noise_floor[0];
    for p in diffs.windows(2) {
        assert!(p[1] <= p[0] || p[1] <= floor);
    }
    assert!(c.rate[0].unwrap() > 0.0 && c.rate[0].unwrap() < 1.0);
    assert!(c.correlation[0].unwrap() <= -0.99);
}

#[test]
fn deformed_point_converges_with_rate() {
    let rep = deform(&fuchsian(3), 5, 1e-3).unwrap();
    for (a, b) in PAIRS {
        let s = ratio_series(&rep, &word(a), &word(b), 40).unwrap();
        let c = convergence_report(&s).unwrap();
        assert!(c.all_converged(), "{c:?}");
        for i in 0..3 {
            let q = c.rate[i].expect("a geometric fit exists");
            assert!(q > 0.0 && q < 1.0);
        }
        // the middle limit is no longer forced to vanish
        assert!(c.limit_estimate[1].abs() > 1e-6);
    }
}

#[test]
fn sum_and_flip_rules() {
    for n in [3, 5] {
        let rep = fuchsian(n);
        let d = deform(&fuchsian(3), 9, 1e-3).unwrap();
        for rep in [&rep, &d] {
            let n = rep.n();
            for (a, b) in PAIRS {
                let (alpha, beta) = (word(a), word(b));
                let s = ratio_series(rep, &alpha, &beta, 30).unwrap();
                let inv = ratio_series(rep, &alpha.inverse(), &beta.inverse(), 30).unwrap();
                for m in 0..30 {
                    let sum: f64 = (0..n).map(|i| s.log_ratio[i][m]).sum();
                    assert!(sum.abs() <= 1e-8 * n as f64);
                    for i in 0..n {
                        assert!((inv.log_ratio[i][m] + s.log_ratio[n - 1 - i][m]).abs() <= 1e-8);
                    }
                }
            }
        }
    }
}

#[test]
fn long_series_stay_finite_and_reproducible() {
    let rep = fuchsian(6);
    let (alpha, beta) = (word("a1 b1"), word("a2"));
    let s = ratio_series(&rep, &alpha, &beta, 200).unwrap();
    assert_eq!(s.valid_count(), 200);
    assert!(s.log_ratio.iter().flatten().all(|x| x.is_finite()));
    let busy = SeriesConfig { reanchor_every: 8, renorm_every: 4, ..SeriesConfig::default() };
    let t = ratio_series_with(&rep, &alpha, &beta, 200, &busy).unwrap();
    for (x, y) in s.log_ratio.iter().flatten().zip(t.log_ratio.iter().flatten()) {
        assert!((x - y).abs() <= 1e-9, "{x} vs {y}");
    }
    let c = convergence_report(&s).unwrap();
    assert!(c.all_converged());
    // monotone tail beyond the reported burn-in
    for i in 0..6 {
        let m0 = c.burn_in[i];
        let floor = c.noise_floor[i];
        let tail: Vec<f64> = (m0..200)
            .map(|m| (s.log_ratio[i][m] - s.log_ratio[i][m - 1]).abs().max(floor))
            .collect();
        assert!(tail.windows(2).all(|p| p[1] <= p[0]), "index {i} from m0 = {m0}");
    }
}

#[test]
fn derivative_reading_matches_series() {
    for n in [2, 3] {
        let rep = fuchsian(n);
        let d = derivative_consistency(&rep, &word("a1"), &word("b1"), 40).unwrap();
        assert!(d.identity_holds(1e-12), "{}", d.max_identity_error);
        assert!(d.max_cross_route_error <= 1e-8);
        let c = convergence_report(&ratio_series(&rep, &word("a1"), &word("b1"), 40).unwrap()).unwrap();
        assert_eq!(d.derivative, c.limit_estimate);
        assert!(d.convergence.ratio_limit.iter().all(|&r| r > 0.0));
        assert!(d.signs_settled.iter().all(|&x| x));
    }
}

#[test]
fn invalid_inputs_and_values() {
    let rep = fuchsian(3);
    assert!(matches!(ratio_series(&rep, &Word::identity(), &word("b1"), 20), Err(Error::IdentityWord)));
    assert!(ratio_series(&rep, &word("a1"), &word("b1"), 7).is_err());

    // α³β is trivial, so m = 3 is excluded
    let s = ratio_series(&rep, &word("a1"), &word("A1 A1 A1"), 20).unwrap();
    assert!(!s.is_valid(3));
    assert!(s.log_ratio[0][2].is_nan());
    assert_eq!(s.invalid.len(), 1);
    assert!(!series_csv(&s).lines().any(|l| l.starts_with("3,")));
}

#[test]
fn non_decaying_series_is_a_verdict() {
    let rep = fuchsian(2);
    let mut s = ratio_series(&rep, &word("a1"), &word("b1"), 20).unwrap();
    for m in 0..20 {
        s.log_ratio[0][m] = 0.1 * m as f64;
        s.log_ratio[1][m] = -0.1 * m as f64;
    }
    let c = convergence_report(&s).unwrap();
    assert!(!c.all_converged());
    assert!(c.tail_residual[0] > 1e-8);
}

#[test]
fn csv_layout() {
    let s = ratio_series(&fuchsian(3), &word("a1"), &word("b1"), 10).unwrap();
    let csv = series_csv(&s);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("m,i,log_ratio,sign,diff"));
    let first = lines.next().unwrap();
    assert!(first.starts_with("1,1,") && first.ends_with(','));
    assert_eq!(csv.lines().count(), 1 + 10 * 3);
    assert_eq!(csv, series_csv(&ratio_series(&fuchsian(3), &word("a1"), &word("b1"), 10).unwrap()));
}
