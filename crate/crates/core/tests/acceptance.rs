//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL
//! line; the process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use litt_core::aperiodicity::{check_em4, check_sigma2_zero, Verdict};
use litt_core::cumulants::{cumulant_routes, cumulants, delta_partial_sums, initial_distribution_delta};
use litt_core::edgeworth::{edgeworth_cdf, EdgeworthInput, Side};
use litt_core::fixtures;
use litt_core::litt::{build_chain, classify_exceptions, game_constants, predict, theta, ExceptionTag, GameSpec, Word};
use litt_core::markov::{expected_visits_before, group_inverse, stationary_distribution, visits_via_passage_times};
use litt_core::oracle::{
    exact_distribution, exact_distribution_with_prefix, exact_distributions_upto, outcome_probabilities, simulate,
    transfer_distribution, SimulationConfig,
};
use litt_core::perturbation::eigen_perturbation_cumulants;
use litt_core::rational::{self, frac, int, Rational};
use litt_core::ChainSpec;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn game(a: &str, b: &str) -> GameSpec {
    GameSpec::parse_classic(2, a, b).expect("fixture pair")
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

fn c1_hh_ht_coefficients() -> Outcome {
    let p = ok(predict(&game("HH", "HT"), 1000))?;
    let alice = 3.0 / (4.0 * PI.sqrt());
    let bob = 1.0 / (4.0 * PI.sqrt());
    let (ea, eb) = ((-p.coefficients.alice - alice).abs(), (-p.coefficients.bob - bob).abs());
    ensure(ea <= 1e-12 && eb <= 1e-12, || format!("alice err {ea:e}, bob err {eb:e}"))?;
    Ok(format!("alice {:.15}, bob {:.15}", -p.coefficients.alice, -p.coefficients.bob))
}

fn max_error(spec: &GameSpec, n: u64) -> Result<f64, String> {
    let p = ok(predict(spec, n))?;
    let [w, l, t] = outcome_probabilities(&ok(exact_distribution(spec, n))?).to_f64();
    Ok([(w - p.p_alice).abs(), (l - p.p_bob).abs(), (t - p.p_tie).abs()].into_iter().fold(0.0, f64::max))
}

fn c2_first_order_decay() -> Outcome {
    let mut notes = Vec::new();
    for (a, b) in [("HH", "HT"), ("HHH", "HHT")] {
        let spec = game(a, b);
        let e: Vec<f64> = [64, 128, 256, 512].iter().map(|&n| max_error(&spec, n)).collect::<Result<_, _>>()?;
        for (lo, hi) in [(0, 2), (1, 3)] {
            let ratio = e[hi] / e[lo];
            ensure(ratio <= 0.6, || format!("{a}/{b}: E(4n)/E(n) = {ratio:.3} from {e:?}"))?;
            notes.push(format!("{a}/{b} {ratio:.3}"));
        }
    }
    Ok(format!("ratios {}", notes.join(", ")))
}

fn c3_tie_probability() -> Outcome {
    let d = ok(exact_distribution(&game("HH", "HT"), 400))?;
    let tie = rational::to_f64(&d.probability_at(0));
    let approx = 1.0 / (2.0 * PI * 0.5 * 399.0).sqrt();
    let err = (tie - approx).abs();
    ensure(err <= 2.0 / 399.0, || format!("|{tie} - {approx}| = {err}"))?;
    Ok(format!("|P(tie) - approx| = {err:.3e} <= {:.3e}", 2.0 / 399.0))
}

fn c4_three_routes() -> Outcome {
    let chains: Vec<(&str, ChainSpec)> = vec![
        ("HH/HT", ok(build_chain(&game("HH", "HT")))?),
        ("E4", fixtures::e4_chain()),
        ("HHH/THT", ok(build_chain(&game("HHH", "THT")))?),
        ("random6", fixtures::random_chain(2024, 6)),
    ];
    let mut worst: f64 = 0.0;
    for (name, chain) in &chains {
        let (qp, q_prime) = ok(cumulant_routes(chain))?;
        ensure(qp == q_prime, || format!("{name}: QP route {qp:?} vs Q' route {q_prime:?}"))?;
        ensure(ok(cumulants(chain))? == qp, || format!("{name}: dispatcher disagrees"))?;
        let (_, f) = ok(eigen_perturbation_cumulants(chain))?;
        ensure(f.matches(&qp), || format!("{name}: perturbation {f:?} vs exact {qp:?}"))?;
        for (approx, exact) in [(f.sigma2, qp.sigma2_f64()), (f.kappa3, qp.kappa3_f64())] {
            if exact != 0.0 {
                worst = worst.max(((approx - exact) / exact).abs());
            }
        }
    }
    Ok(format!("{} chains, worst perturbation relative error {worst:.2e}", chains.len()))
}

fn c5_group_inverse_closed_form() -> Outcome {
    for (q, ell) in [(2u32, 2usize), (2, 3), (2, 4), (3, 2)] {
        let words: Vec<Word> = Word::all(q, ell).collect();
        let spec = ok(GameSpec::classic(words[0].clone(), words[1].clone()))?;
        let chain = ok(build_chain(&spec))?;
        let gi = ok(group_inverse(&chain))?;
        let shift = int(ell as i64) / int(i64::from(q).pow(ell as u32));
        let labels: Vec<Word> =
            chain.states().iter().map(|s| Word::parse(q, s)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for (i, u) in labels.iter().enumerate() {
            for (j, v) in labels.iter().enumerate() {
                let want = if i == j { Rational::one() } else { Rational::zero() } + ok(theta(u, v))? - &shift;
                ensure(gi.q()[(i, j)] == want, || format!("q={q} l={ell}: Q[{u},{v}] = {} != {want}", gi.q()[(i, j)]))?;
            }
        }
    }
    Ok("(2,2) (2,3) (2,4) (3,2) exact".into())
}

fn c6_taxonomy_vs_certificates() -> Outcome {
    let mut checked = 0;
    let mut exceptional = 0;
    for (q, ell) in [(2u32, 1usize), (2, 2), (2, 3), (3, 2)] {
        let words: Vec<Word> = Word::all(q, ell).collect();
        for a in &words {
            for b in &words {
                if a == b {
                    continue;
                }
                let spec = ok(GameSpec::classic(a.clone(), b.clone()))?;
                let tag = ok(classify_exceptions(&spec))?.tag;
                let chain = ok(build_chain(&spec))?;
                let sigma2_zero = ok(game_constants(&spec))?.sigma2.is_zero();
                let cert = ok(check_em4(&chain))?;
                let degenerate = ok(check_sigma2_zero(&chain))?.is_some();
                ensure(sigma2_zero == (tag == ExceptionTag::GapDegenerate), || {
                    format!("{a}/{b}: sigma2 = 0 is {sigma2_zero}, tag {}", tag.as_str())
                })?;
                ensure(degenerate == sigma2_zero, || format!("{a}/{b}: degeneracy certificate mismatch"))?;
                ensure((cert.verdict != Verdict::Holds) == (tag != ExceptionTag::None), || {
                    format!("{a}/{b}: verdict {} but tag {}", cert.verdict.as_str(), tag.as_str())
                })?;
                checked += 1;
                exceptional += usize::from(tag != ExceptionTag::None);
            }
        }
    }
    Ok(format!("{checked} ordered pairs, {exceptional} exceptional"))
}

fn c7_exact_fixtures() -> Outcome {
    let ht_th = game("HT", "TH");
    for n in [2, 10, 25] {
        let t = outcome_probabilities(&ok(exact_distribution(&ht_th, n))?);
        ensure(t.win == frac(1, 4) && t.lose == frac(1, 4) && t.tie == frac(1, 2), || format!("HT/TH n={n}: {t:?}"))?;
    }
    let h_t = game("H", "T");
    for n in 1..=40u64 {
        let d = ok(exact_distribution(&h_t, n))?;
        let want = if n % 2 == 1 { BigUint::zero() } else { binomial(n, n / 2) };
        ensure(d.count_at(0) == want, || format!("H/T n={n}: tie count {}", d.count_at(0)))?;
    }
    let hh_tt = game("HH", "TT");
    // n counts scoring windows here, so the sequence has n + 1 letters
    for n in (1..=41u64).step_by(2) {
        let m = n / 2;
        let d = ok(exact_distribution(&hh_tt, n + 1))?;
        let want = Rational::new(binomial(2 * m, m).into(), (BigUint::one() << (2 * m + 1)).into());
        ensure(d.probability_at(0) == want, || format!("HH/TT n={n}: P(tie) = {}", d.probability_at(0)))?;
    }
    let pi = ok(stationary_distribution(&fixtures::e4_chain()))?;
    let want = [frac(5, 12), frac(5, 12), frac(1, 12), frac(1, 12)];
    ensure(pi.pi == want, || format!("E4 stationary {:?}", pi.pi))?;
    Ok("HT/TH, H/T n<=40, HH/TT odd windows <= 41, E4 stationary".into())
}

fn c8_fairness() -> Outcome {
    let words: Vec<Word> = Word::all(2, 3).collect();
    let mut fair_pairs = 0;
    let mut witness = None;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let spec = ok(GameSpec::classic(a.clone(), b.clone()))?;
            let th = ok(game_constants(&spec))?.thetas;
            let dists = ok(exact_distributions_upto(&spec, 30))?;
            if th.aa == th.bb {
                for d in &dists {
                    let c = d.outcome_counts();
                    ensure(c.win == c.lose, || format!("{a}/{b} n={}: win {} lose {}", d.n(), c.win, c.lose))?;
                }
                fair_pairs += 1;
            } else if witness.is_none() {
                let c = dists.last().unwrap().outcome_counts();
                if c.win != c.lose {
                    witness = Some(format!("{a}/{b}"));
                }
            }
        }
    }
    let witness = witness.ok_or("no unequal pair with strict inequality at n = 30")?;
    Ok(format!("{fair_pairs} fair pairs equal for n <= 30; {witness} strict at n = 30"))
}

fn c9_visits_identity() -> Outcome {
    let words: Vec<Word> = Word::all(2, 3).collect();
    let mut pairs: Vec<(Word, Word)> =
        words.iter().flat_map(|a| words.iter().filter(move |b| *b != a).map(move |b| (a.clone(), b.clone()))).collect();
    pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(9));
    for (a, b) in pairs.iter().take(20) {
        let spec = ok(GameSpec::classic(a.clone(), b.clone()))?;
        let chain = ok(build_chain(&spec))?;
        let r = ok(expected_visits_before(&chain, &a.to_string(), &b.to_string()))?;
        let ia = ok(chain.index_of(&a.to_string()))?;
        let ib = ok(chain.index_of(&b.to_string()))?;
        let via_m = ok(visits_via_passage_times(&chain, ia, ib))?;
        let th = ok(game_constants(&spec))?.thetas;
        let closed = int(2) + &th.aa + &th.bb - &th.ab - &th.ba;
        ensure(r.expected_visits == via_m && via_m == closed, || {
            format!("{a}/{b}: {} vs {via_m} vs {closed}", r.expected_visits)
        })?;
    }
    Ok("20 pairs, three routes equal the overlap formula".into())
}

fn c10_route_equality() -> Outcome {
    let mut specs: Vec<(String, GameSpec)> =
        [("HH", "HT"), ("HHH", "HHT"), ("HT", "TH"), ("HH", "TT"), ("H", "T"), ("HHH", "THT")]
            .iter()
            .map(|(a, b)| (format!("{a}/{b}"), game(a, b)))
            .collect();
    let four = GameSpec::new(
        2,
        ["HH:1", "HT:-1", "TH:-1", "TT:1"]
            .iter()
            .map(|s| {
                let (w, v) = s.split_once(':').unwrap();
                (Word::parse(2, w).unwrap(), v.parse().unwrap())
            })
            .collect(),
    );
    specs.push(("four-word".into(), ok(four)?));
    let mixed = GameSpec::new(2, vec![(Word::parse(2, "H").unwrap(), 1), (Word::parse(2, "HTT").unwrap(), -1)]);
    specs.push(("H/HTT".into(), ok(mixed)?));

    let horizons: Vec<u64> = (1..=40).chain([63, 64, 65, 127, 128, 255, 256, 257, 511, 512]).collect();
    let mut compared = 0;
    for (name, spec) in &specs {
        let dp = ok(exact_distributions_upto(spec, 512))?;
        for &n in &horizons {
            let tr = ok(transfer_distribution(spec, n))?;
            ensure(dp[(n - 1) as usize] == tr, || format!("{name} n={n}: routes differ"))?;
            compared += 1;
        }
    }
    Ok(format!("{} fixtures, {compared} distributions identical", specs.len()))
}

fn c11_monte_carlo() -> Outcome {
    let spec = game("HH", "HT");
    let reps = 1_000_000u64;
    let sim = ok(simulate(&spec, 100, SimulationConfig { reps, seed: 20240611 }))?;
    let exact = outcome_probabilities(&ok(exact_distribution(&spec, 100))?).to_f64();
    let mut zs = Vec::new();
    for (emp, p) in [sim.p_win, sim.p_lose, sim.p_tie].into_iter().zip(exact) {
        let se = (p * (1.0 - p) / reps as f64).sqrt();
        let z = (emp - p) / se;
        ensure(z.abs() <= 4.0, || format!("empirical {emp} vs exact {p}: z = {z:.2}"))?;
        zs.push(format!("{z:+.2}"));
    }
    Ok(format!("z-scores {}", zs.join(" ")))
}

fn c12_delta_correction() -> Outcome {
    let spec = game("HH", "HT");
    let chain = ok(build_chain(&spec))?;
    let hh = ok(chain.index_of("HH"))?;
    let mut pi1 = vec![Rational::zero(); chain.len()];
    pi1[hh] = Rational::one();
    let delta = ok(initial_distribution_delta(&chain, &pi1, None))?;
    let sums = ok(delta_partial_sums(&chain, &pi1, 200))?;
    let gap = rational::to_f64(&(sums.last().unwrap() - &delta)).abs();
    ensure(gap <= 1e-12, || format!("Delta {delta} vs partial sum gap {gap:e}"))?;

    let t = ok(cumulants(&chain))?;
    let mut notes = vec![format!("Delta = {delta}")];
    for n in [256u64, 1024] {
        // W_1 = HH and S_n sums n windows, so the sequence has n + 1 letters
        let d = ok(exact_distribution_with_prefix(&spec, n + 1, &[0, 0]))?;
        let exact: Rational = d.iter().filter(|(s, _)| *s <= 0).map(|(s, _)| d.probability_at(s)).sum();
        let exact = rational::to_f64(&exact);
        let base = ok(EdgeworthInput::new(n, t.mu_f64(), t.sigma2_f64(), t.kappa3_f64()))?;
        let plain = ok(edgeworth_cdf(&base, 0.0, Side::AtOrBelow))?;
        let shifted = ok(edgeworth_cdf(&base.with_delta(rational::to_f64(&delta)), 0.0, Side::AtOrBelow))?;
        let (e_plain, e_shift) = ((plain - exact).abs(), (shifted - exact).abs());
        ensure(e_shift < e_plain, || format!("n={n}: shifted error {e_shift:e} not below plain {e_plain:e}"))?;
        notes.push(format!("n={n} {e_shift:.2e} < {e_plain:.2e}"));
    }
    Ok(notes.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("HH/HT n^-1/2 coefficients", c1_hh_ht_coefficients),
        ("Edgeworth vs exact first-order decay", c2_first_order_decay),
        ("HH/HT tie probability at n = 400", c3_tie_probability),
        ("three-route cumulant agreement", c4_three_routes),
        ("group inverse closed form", c5_group_inverse_closed_form),
        ("exception taxonomy vs certificates", c6_taxonomy_vs_certificates),
        ("exact fixtures", c7_exact_fixtures),
        ("fairness when self-overlaps match", c8_fairness),
        ("expected visits identity", c9_visits_identity),
        ("dp and transfer routes identical", c10_route_equality),
        ("Monte Carlo calibration", c11_monte_carlo),
        ("initial-distribution shift", c12_delta_correction),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    let _ = panic::take_hook();
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
