use litt_core::litt::{game_constants, GameSpec, Word};
use litt_core::oracle::exact_distribution;
use litt_core::rational::to_f64;
use litt_core::{cumulants, litt::build_chain};

fn moments(spec: &GameSpec, n: u64) -> (f64, f64) {
    let d = exact_distribution(spec, n).unwrap();
    let windows = (n - spec.ell() as u64 + 1) as f64;
    (to_f64(&d.variance()) / windows, to_f64(&d.third_central_moment()) / windows)
}

#[test]
fn variance_per_window_converges_to_sigma2() {
    for (a, b) in [("HH", "HT"), ("HHH", "HTH"), ("HTT", "THH")] {
        let spec = GameSpec::parse_classic(2, a, b).unwrap();
        let sigma2 = to_f64(&game_constants(&spec).unwrap().sigma2);
        let errs: Vec<f64> = [256, 512, 1024].iter().map(|&n| (moments(&spec, n).0 - sigma2).abs()).collect();
        assert!(errs[2] <= errs[0], "{a}/{b}: {errs:?}");
        assert!(errs[2] <= 0.01 * sigma2, "{a}/{b}: {errs:?}");
    }
}

#[test]
fn third_cumulant_per_window_converges() {
    let spec = GameSpec::parse_classic(2, "HH", "HT").unwrap();
    let k3 = to_f64(&game_constants(&spec).unwrap().kappa3);
    assert_eq!(k3, 0.75);
    let (_, m3) = moments(&spec, 1024);
    assert!((m3 - k3).abs() <= 0.01 * k3, "{m3}");
}

#[test]
fn four_word_game_variance_matches_oracle() {
    let words = [("HH", 1), ("HT", -1), ("TH", -1), ("TT", 1)];
    let spec = GameSpec::new(2, words.iter().map(|(w, v)| (Word::parse(2, w).unwrap(), *v)).collect()).unwrap();
    let t = cumulants(&build_chain(&spec).unwrap()).unwrap();
    assert_eq!(t.sigma2_f64(), 1.0);
    let (var, _) = moments(&spec, 2048);
    assert!((var - 1.0).abs() <= 0.02, "{var}");
}

#[test]
fn mean_per_window_is_zero_for_equal_lengths() {
    let spec = GameSpec::parse_classic(3, "012", "210").unwrap();
    let d = exact_distribution(&spec, 40).unwrap();
    assert_eq!(to_f64(&d.mean()), 0.0);
}
