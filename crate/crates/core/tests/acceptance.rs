//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`cargo test --test acceptance`). The exit code is
//! 0 even when a criterion fails, so that failures stay visible without
//! masking the rest of the test run; set `RRPS_ACCEPTANCE_STRICT=1` to
//! exit non-zero on any failure.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rrps::bots::Population;
use rrps::engine::*;
use rrps::learners::*;
use rrps::pbe::*;
use sha2::{Digest, Sha256};

const SEED: u64 = 20_240_601;

struct Suite {
    results: Vec<(String, bool)>,
}

impl Suite {
    fn run(&mut self, name: &str, f: impl FnOnce() -> (bool, String)) {
        let start = Instant::now();
        let (ok, detail) = f();
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} {name}: {detail} [{:.1}s]", start.elapsed().as_secs_f64());
        self.results.push((name.to_string(), ok));
    }
}

fn payoff_oracle() -> (bool, String) {
    let mut ok = true;
    for a0 in ACTIONS {
        for a1 in ACTIONS {
            let expected = match (3 + a0.index() - a1.index()) % 3 {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            let (r0, r1) = payoff(a0, a1);
            ok &= r0 == expected && r0 + r1 == 0 && payoff(a1, a0) == (r1, r0);
        }
    }
    (ok, "9 cells checked against the cyclic rule, zero-sum and antisymmetric".into())
}

fn exploitation_caps(pop: &Population) -> (bool, String) {
    let cfg = EpisodeConfig::default();
    let v = |name: &str, n| omniscient_exploitability(pop.by_name(name).unwrap(), &cfg, n, SEED).unwrap();
    let (rock, rot, freq, r226) = (v("rockbot", 10), v("rotatebot", 10), v("freqbot2", 10), v("r226bot", 1000));
    let ok = rock == 1000.0 && rot >= 999.0 && freq >= 999.0 && (r226 - 400.0).abs() <= 10.0;
    (ok, format!("rockbot {rock:.3}, rotatebot {rot:.3}, freqbot2 {freq:.3}, r226bot {r226:.3} (1000 episodes)"))
}

fn uniform_metrics(pop: &Population) -> (bool, String) {
    let u = AgentConfig::new(AgentAlgorithm::Uniform).build(1000).unwrap();
    let run = evaluate_agent(u.as_ref(), pop, 100, &EpisodeConfig::default(), SEED, 0).unwrap();
    let rec = run.record("uniform");
    let ok = rec.pop_return.abs() <= 2.0 && (0.0..=15.0).contains(&rec.wp_expl);
    (
        ok,
        format!(
            "pop_return {:.3} ± {:.3}, wp_expl {:.3} (by {}), agg {:.3}",
            rec.pop_return,
            rec.pop_return_se,
            rec.wp_expl,
            rec.wp_expl_bot.unwrap_or_default(),
            rec.agg_score
        ),
    )
}

fn nash_recovery() -> (bool, String) {
    const T: usize = 100_000;
    let mut ok = true;
    let mut detail = Vec::new();
    for variant in [RegretVariant::Rm, RegretVariant::RmPlus] {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut players = [RegretMatcher::new(variant, 3), RegretMatcher::new(variant, 3)];
        let mut counts = [[0usize; 3]; 2];
        let mut earned = [0.0; 2];
        let mut fixed = [[0.0; 3]; 2];
        for _ in 0..T {
            let p: Vec<Vec<f64>> = players.iter_mut().map(|m| m.policy()).collect();
            let moves: Vec<Action> = p
                .iter()
                .map(|pi| ActionDistribution::from_weights([pi[0], pi[1], pi[2]]).sample_with(rng.gen()))
                .collect();
            for i in 0..2 {
                let u = PayoffVector::against(moves[1 - i]).0;
                counts[i][moves[i].index()] += 1;
                earned[i] += dot(&p[i], &u);
                for a in 0..3 {
                    fixed[i][a] += u[a];
                }
                players[i].update(&u);
            }
        }
        for i in 0..2 {
            let linf = counts[i].iter().map(|&c| (c as f64 / T as f64 - 1.0 / 3.0).abs()).fold(0.0, f64::max);
            let best = fixed[i].iter().cloned().fold(f64::MIN, f64::max);
            let regret = (best - earned[i]) / T as f64;
            ok &= linf <= 0.05 && regret <= 0.02;
            detail.push(format!("{variant:?} seat {i}: L∞ {linf:.4}, regret {regret:.4}"));
        }
    }
    (ok, detail.join("; "))
}

fn swap_meta() -> (bool, String) {
    let mut s = SwapRegret::new(3);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let p = s.policy();
        worst = worst.max(stationary_residual(&p, s.rows()));
        let mine = ActionDistribution::from_weights([p[0], p[1], p[2]]);
        s.update(&PayoffVector::against(mine.best_response()).0);
    }
    let equal = stationary_distribution(&vec![vec![0.2, 0.3, 0.5]; 3]);
    let cyclic = stationary_distribution(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]);
    let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12);
    let analytic = close(&equal, &[0.2, 0.3, 0.5]) && close(&cyclic, &[1.0 / 3.0; 3]);
    (worst <= 1e-9 && analytic, format!("max residual {worst:.2e} over 10^4 adversarial steps, analytic cases {analytic}"))
}

fn saol_structure() -> (bool, String) {
    let expected = [(1u64, 1usize), (8, 4), (1023, 10), (1024, 11)];
    let mut s = Saol::new(3);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut counts_ok = true;
    let mut weights_ok = true;
    let mut seen = Vec::new();
    for t in 1..=100_000u64 {
        s.policy();
        if let Some(&(_, n)) = expected.iter().find(|(et, _)| *et == t) {
            counts_ok &= s.active().len() == n && intervals_containing(t).len() == n;
            seen.push(format!("t={t}: {}", s.active().len()));
        }
        weights_ok &= s.weights().iter().all(|&w| w > 0.0) && s.active().iter().all(|i| i.log_weight.is_finite());
        s.update(&PayoffVector::against(Action::from_index(rng.gen_range(0..3))).0);
    }
    (counts_ok && weights_ok, format!("{}; weights positive over 10^5 steps: {weights_ok}", seen.join(", ")))
}

fn contextual_exploitation(pop: &Population) -> (bool, String) {
    let cfg = EpisodeConfig::default();
    let ac = AgentConfig::regret(RegretAlgorithm::RmPlus, ContextMode::Discrete, 1).persistent(true);
    let mut a = ac.build(1000).unwrap();
    let mut bot = pop.by_name("rotatebot").unwrap().instantiate();
    let returns: Vec<i64> = (0..100)
        .map(|e| play_episode(&mut a, &mut bot, &cfg, derive_episode_seed(SEED, 0, 0, e)).unwrap().return0)
        .collect();
    let (first, hundredth) = (returns[0], returns[99]);

    let episodes = 50_000u64;
    let mut q = AgentConfig::qlearn(1, episodes).build(1000).unwrap();
    let mut copy = pop.by_name("copybot").unwrap().instantiate();
    let mut block = 0i64;
    let mut reached = None;
    let mut best_block = f64::MIN;
    for e in 0..episodes {
        block += play_episode(&mut q, &mut copy, &cfg, derive_episode_seed(SEED, 1, 0, e)).unwrap().return0;
        if (e + 1) % 1000 == 0 {
            let mean = block as f64 / 1000.0;
            best_block = best_block.max(mean);
            if mean >= 900.0 && reached.is_none() {
                reached = Some(e + 1);
            }
            block = 0;
        }
    }
    let ok = first >= 600 && hundredth >= 900 && reached.is_some();
    (
        ok,
        format!(
            "RM+ R=1 vs rotatebot: episode 1 {first}, episode 100 {hundredth}; Q R=1 vs copybot: best 1000-episode mean {best_block:.1}, ≥900 reached after {} episodes",
            reached.map_or("never".into(), |e| e.to_string())
        ),
    )
}

fn experts_vs_discrete(pop: &Population) -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for alg in RegretAlgorithm::ALL {
        let wpe = |mode, recall| {
            let a = AgentConfig::regret(alg, mode, recall).build(1000).unwrap();
            let cfg = EpisodeConfig { steps: 1000, recall };
            evaluate_agent(a.as_ref(), pop, 100, &cfg, SEED, 0).unwrap().record("").wp_expl
        };
        let (experts, discrete) = (wpe(ContextMode::Experts, 1), wpe(ContextMode::Discrete, 2));
        ok &= experts < discrete;
        detail.push(format!("{}: experts R=1 {experts:.2} vs discrete R=2 {discrete:.2}", alg.as_str()));
    }
    (ok, detail.join("; "))
}

fn determinism(pop: &Population) -> (bool, String) {
    let digest = |workers| {
        let t = cross_table(pop, 100, &EpisodeConfig::default(), SEED, workers).unwrap();
        let hash = Sha256::digest(t.to_csv_string().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect::<String>()
    };
    let (one, eight) = (digest(1), digest(8));
    (one == eight, format!("sha256 workers=1 {}…, workers=8 {}… (100 episodes/cell)", &one[..16], &eight[..16]))
}

fn predictability(pop: &Population) -> (bool, String) {
    let m = predictability_matrix(pop, 1, 10, &EpisodeConfig::default(), SEED, 0).unwrap();
    let range = |name: &str| {
        let row = m.row(name).unwrap();
        (row.iter().cloned().fold(1.0, f64::min), row.iter().cloned().fold(0.0, f64::max))
    };
    let (rock, rand, rot) = (range("rockbot"), range("randbot"), range("rotatebot"));
    let ok = rock.0 == 1.0 && rand.0 >= 0.30 && rand.1 <= 0.37 && rot.0 >= 0.99;
    (
        ok,
        format!(
            "rockbot [{:.3}, {:.3}], randbot [{:.3}, {:.3}], rotatebot [{:.3}, {:.3}] (k=1, 10^4 steps/cell)",
            rock.0, rock.1, rand.0, rand.1, rot.0, rot.1
        ),
    )
}

fn holdout(pop: &Population) -> (bool, String) {
    let cfg = EpisodeConfig::default();
    let partitions_ok = (0..20).all(|f| {
        let (train, test) = fold_partition(43, 10, SEED, f);
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        train.len() == 33 && test.len() == 10 && all == (0..43).collect::<Vec<_>>()
    });
    let opts = HoldoutOptions { folds: 20, train_episodes: 1000, eval_episodes: 10, ..Default::default() };
    let uniform = holdout_eval(&AgentConfig::new(AgentAlgorithm::Uniform), pop, &opts, &cfg, SEED, 0).unwrap();
    let gap_ok = uniform.folds.iter().all(|f| {
        let noise = (f.train_return.stderr.powi(2) + f.test_return.stderr.powi(2)).sqrt();
        (f.train_return.mean - f.test_return.mean).abs() <= 4.0 * noise
    });
    let rm = AgentConfig::regret(RegretAlgorithm::RmPlus, ContextMode::Discrete, 1).persistent(true);
    let report = holdout_eval(&rm, pop, &opts, &cfg, SEED, 0).unwrap();
    let ordered = report.folds.iter().filter(|f| f.train_return.mean >= f.test_return.mean).count();
    let ok = partitions_ok && gap_ok && ordered * 5 >= report.folds.len() * 4;
    (
        ok,
        format!(
            "partitions 33/10 {partitions_ok}; uniform train {:.2} test {:.2} gap within noise {gap_ok}; RM+ R=1 persistent train {:.2} test {:.2}, train ≥ test on {ordered}/20 folds",
            uniform.train_mean, uniform.test_mean, report.train_mean, report.test_mean
        ),
    )
}

fn main() {
    let pop = Population::builtin();
    let mut suite = Suite { results: Vec::new() };
    suite.run("payoff oracle", payoff_oracle);
    suite.run("exploitation caps", || exploitation_caps(&pop));
    suite.run("uniform-agent metrics", || uniform_metrics(&pop));
    suite.run("Nash recovery", nash_recovery);
    suite.run("swap meta-algorithm", swap_meta);
    suite.run("SAOL structure", saol_structure);
    suite.run("contextual exploitation", || contextual_exploitation(&pop));
    suite.run("history experts vs discrete contexts", || experts_vs_discrete(&pop));
    suite.run("determinism", || determinism(&pop));
    suite.run("predictability", || predictability(&pop));
    suite.run("hold-out harness", || holdout(&pop));
    let passed = suite.results.iter().filter(|(_, ok)| *ok).count();
    println!("{passed}/{} criteria passed", suite.results.len());
    let strict = std::env::var("RRPS_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && passed < suite.results.len() {
        std::process::exit(1);
    }
}
