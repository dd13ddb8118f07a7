use proptest::prelude::*;
use rrps::bots::Population;
use rrps::engine::*;

fn bot(name: &str) -> Box<dyn Policy> {
    Population::builtin().by_name(name).unwrap().instantiate()
}

fn mean_return(a: &str, b: &str, episodes: u64) -> f64 {
    let (mut p, mut q) = (bot(a), bot(b));
    let cfg = EpisodeConfig::default();
    let total: i64 = (0..episodes).map(|e| play_episode(&mut p, &mut q, &cfg, e).unwrap().return0).sum();
    total as f64 / episodes as f64
}

#[test]
fn antiflatbot_exploits_flatbot3() {
    assert!(mean_return("antiflatbot", "flatbot3", 5) >= 900.0);
}

#[test]
fn antirotnbot_exploits_rotatebot() {
    assert!(mean_return("antirotnbot", "rotatebot", 5) >= 980.0);
}

#[test]
fn iocaine_learns_rotation_and_breaks_even_on_noise() {
    let (mut p, mut q) = (bot("iocainebot"), bot("rotatebot"));
    let r = play_episode(&mut p, &mut q, &EpisodeConfig { steps: 200, recall: 1 }, 3).unwrap();
    let wins = r.rewards0[100..].iter().filter(|&&x| x == 1).count();
    assert!(wins >= 90, "{wins}");
    let sigma = (2.0 * 1000.0 / 3.0f64).sqrt();
    let (mut p, mut q) = (bot("iocainebot"), bot("randbot"));
    let r = play_episode(&mut p, &mut q, &EpisodeConfig::default(), 3).unwrap();
    assert!((r.return0 as f64).abs() <= 3.0 * sigma);
}

/// Plays one episode and reports whether both seats only ever used point masses.
fn deterministic(name: &str) -> bool {
    struct Spy(Box<dyn Policy>, bool);
    impl Policy for Spy {
        fn reset(&mut self) {
            self.0.reset()
        }
        fn distribution(&mut self, h: &History) -> ActionDistribution {
            let d = self.0.distribution(h);
            self.1 &= d.is_point_mass();
            d
        }
        fn observe(&mut self, j: JointAction, r: i32) {
            self.0.observe(j, r)
        }
    }
    let mut a = Spy(bot(name), true);
    let mut b = Spy(bot(name), true);
    play_episode(&mut a, &mut b, &EpisodeConfig::default(), 0).unwrap();
    a.1 && b.1
}

#[test]
fn self_play_is_zero_sum_neutral() {
    let pop = Population::builtin();
    let mut checked_deterministic = 0;
    for spec in pop.specs() {
        if deterministic(&spec.name) {
            checked_deterministic += 1;
            let (mut a, mut b) = (spec.instantiate(), spec.instantiate());
            for e in 0..3 {
                let r = play_episode(&mut a, &mut b, &EpisodeConfig::default(), e).unwrap();
                assert_eq!(r.return0, 0, "{}", spec.name);
            }
        }
    }
    assert!(checked_deterministic >= 5);
    // a stochastic one: mean within three standard errors of zero
    let n = 400;
    let xs: Vec<f64> = {
        let (mut a, mut b) = (bot("r226bot"), bot("r226bot"));
        let cfg = EpisodeConfig { steps: 100, recall: 1 };
        (0..n).map(|e| play_episode(&mut a, &mut b, &cfg, e).unwrap().return0 as f64).collect()
    };
    let mean = xs.iter().sum::<f64>() / n as f64;
    let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0)).sqrt();
    assert!(mean.abs() <= 3.0 * sd / (n as f64).sqrt());
}

#[test]
fn sequence_bots_ignore_opponent() {
    for name in ["rotatebot", "pibot", "debruijn81", "textbot"] {
        let mut b = bot(name);
        let own = [Action::Rock, Action::Scissors, Action::Paper, Action::Paper, Action::Rock];
        let mut h1 = History::new();
        let mut h2 = History::new();
        b.reset();
        let mut seq1 = Vec::new();
        for (i, &m) in own.iter().enumerate() {
            seq1.push(b.distribution(&h1));
            let j = JointAction::new(m, Action::from_index(i));
            b.observe(j, j.reward());
            h1.push(j);
        }
        b.reset();
        for (i, &m) in own.iter().enumerate() {
            assert_eq!(b.distribution(&h2), seq1[i], "{name}");
            let j = JointAction::new(m, Action::from_index(i * 2 + 1));
            b.observe(j, j.reward());
            h2.push(j);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every bot yields valid distributions on arbitrary histories and
    /// replays identically after a reset.
    #[test]
    fn fuzzed_histories(moves in prop::collection::vec(0usize..9, 1..120)) {
        for spec in Population::builtin().specs() {
            let mut b = spec.instantiate();
            let mut first = Vec::new();
            for pass in 0..2 {
                b.reset();
                let mut h = History::new();
                for (t, &m) in moves.iter().enumerate() {
                    let d = b.distribution(&h);
                    prop_assert!(d.validate().is_ok(), "{}", spec.name);
                    if pass == 0 { first.push(d) } else { prop_assert_eq!(d, first[t]) }
                    let j = JointAction::from_index(m);
                    b.observe(j, j.reward());
                    h.push(j);
                }
            }
        }
    }
}
