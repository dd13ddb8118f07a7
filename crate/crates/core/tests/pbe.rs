use rrps::bots::Population;
use rrps::engine::*;
use rrps::learners::*;
use rrps::pbe::*;

fn short() -> EpisodeConfig {
    EpisodeConfig { steps: 200, recall: 1 }
}

fn small_pop() -> Population {
    let pop = Population::builtin();
    let slots: Vec<usize> =
        ["rockbot", "rotatebot", "randbot", "freqbot2", "copybot", "r226bot"].iter().map(|n| pop.slot_of(n).unwrap()).collect();
    pop.subset(&slots).unwrap()
}

#[test]
fn aggregate_score_examples() {
    assert!((aggregate_score(288.153, 3.648) - 284.505).abs() < 1e-9);
    assert!((aggregate_score(0.0, 9.31) + 9.31).abs() < 1e-12);
    assert_eq!(aggregate_score(0.0, 0.0), 0.0);
}

#[test]
fn always_paper_against_rockbot() {
    let pop = Population::builtin();
    let rock_only = pop.subset(&[pop.slot_of("rockbot").unwrap()]).unwrap();
    let paper = AgentConfig::new(AgentAlgorithm::Paper).build(1000).unwrap();
    let pr = population_return(paper.as_ref(), &rock_only, 3, &EpisodeConfig::default(), 1).unwrap();
    assert_eq!(pr.mean, 1000.0);
    assert_eq!(pr.stderr, 0.0);
}

#[test]
fn rockbot_as_agent_is_fully_exploitable() {
    let pop = Population::builtin();
    let rock = AgentConfig::new(AgentAlgorithm::Rock).build(1000).unwrap();
    let run = evaluate_agent(rock.as_ref(), &pop, 1, &EpisodeConfig::default(), 1, 0).unwrap();
    let rec = run.record("rockbot");
    assert_eq!(rec.wp_expl, 1000.0);
    assert_eq!(rec.agg_score, rec.pop_return - rec.wp_expl);
}

#[test]
fn within_pop_expl_dominates_every_bot() {
    let a = AgentConfig::regret(RegretAlgorithm::RmPlus, ContextMode::Discrete, 1).build(200).unwrap();
    let run = evaluate_agent(a.as_ref(), &small_pop(), 4, &short(), 3, 0).unwrap();
    let (wpe, slot) = run.within_pop_expl();
    for o in &run.outcomes {
        assert!(wpe.mean >= -o.agent_return().mean);
    }
    assert_eq!(wpe.mean, -run.outcomes[slot].agent_return().mean);
    let pr = run.population_return().mean;
    assert!((-1000.0..=1000.0).contains(&pr));
}

#[test]
fn evaluation_is_independent_of_workers() {
    let a = AgentConfig::regret(RegretAlgorithm::Saol, ContextMode::Experts, 1).persistent(true).build(200).unwrap();
    let one = evaluate_agent(a.as_ref(), &small_pop(), 3, &short(), 8, 1).unwrap();
    let many = evaluate_agent(a.as_ref(), &small_pop(), 3, &short(), 8, 4).unwrap();
    assert_eq!(one, many);
    let frozen = {
        let mut f = a.clone();
        f.set_learning(false);
        f
    };
    assert_eq!(
        evaluate_agent(frozen.as_ref(), &small_pop(), 3, &short(), 8, 1).unwrap(),
        evaluate_agent(frozen.as_ref(), &small_pop(), 3, &short(), 8, 3).unwrap()
    );
}

#[test]
fn uniform_exploitability_shrinks_with_more_episodes() {
    let pop = small_pop();
    let u = AgentConfig::new(AgentAlgorithm::Uniform).build(200).unwrap();
    let mean_wpe = |episodes| {
        let total: f64 = (0..8)
            .map(|s| within_pop_expl(u.as_ref(), &pop, episodes, &short(), s).unwrap().0.mean)
            .sum();
        total / 8.0
    };
    let few = mean_wpe(10);
    let many = mean_wpe(400);
    assert!(many < few, "{many} vs {few}");
    assert!(many >= -2.0);
}

#[test]
fn cross_table_properties() {
    let pop = small_pop();
    let t = cross_table(&pop, 20, &short(), 4, 1).unwrap();
    assert_eq!(t, cross_table(&pop, 20, &short(), 4, 3).unwrap());
    for name in ["rockbot", "rotatebot", "freqbot2"] {
        let i = pop.slot_of(name).unwrap();
        assert_eq!(t.cell(i, i), 0.0, "{name}");
    }
    let r = pop.slot_of("randbot").unwrap();
    for j in 0..pop.len() {
        assert!(t.cell(r, j).abs() <= 3.0 * t.stderrs[r][j] + 1e-9, "randbot vs {}", t.names[j]);
        // roles swapped: antisymmetric within sampling noise
        let noise = 3.0 * (t.stderrs[r][j].powi(2) + t.stderrs[j][r].powi(2)).sqrt();
        assert!((t.cell(r, j) + t.cell(j, r)).abs() <= noise + 1e-9);
    }
    let rot = pop.slot_of("rotatebot").unwrap();
    let copy = pop.slot_of("copybot").unwrap();
    assert!(t.cell(rot, copy).abs() <= 1.0);
    let rows = rank_population(&t.records());
    assert_eq!(rows.len(), pop.len());
    for w in rows.windows(2) {
        assert!(w[0].agg_score >= w[1].agg_score);
    }
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.rank, i + 1);
        assert!((r.agg_score - (r.pop_return - r.wp_expl)).abs() < 1e-12);
    }
    let mut buf = Vec::new();
    write_ranking_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("rank,name,pop_return,wp_expl,agg_score\n"));
}

#[test]
fn cross_table_logs_replay() {
    let run = cross_table_logged(&small_pop(), 2, &short(), 5, 0, 1).unwrap();
    assert_eq!(run.logs.len(), 36);
    for log in &run.logs {
        log.verify().unwrap();
        let i = run.table.ids.iter().position(|&id| id == log.row_id).unwrap();
        let j = run.table.ids.iter().position(|&id| id == log.col_id).unwrap();
        assert_eq!(log.seed, derive_episode_seed(5, log.row_id, log.col_id, 0));
        assert!(run.table.cell(i, j).is_finite());
    }
}

#[test]
fn single_bot_table() {
    let pop = Population::builtin();
    let rock = pop.subset(&[pop.slot_of("rockbot").unwrap()]).unwrap();
    let t = cross_table(&rock, 2, &short(), 0, 0).unwrap();
    assert_eq!(t.means, vec![vec![0.0]]);
}

#[test]
fn holdout_basics() {
    let pop = Population::builtin();
    let opts = HoldoutOptions { folds: 2, train_episodes: 20, eval_episodes: 2, ..Default::default() };
    let u = AgentConfig::new(AgentAlgorithm::Uniform);
    let rep = holdout_eval(&u, &pop, &opts, &short(), 1, 0).unwrap();
    assert_eq!(rep.folds.len(), 2);
    for f in &rep.folds {
        assert_eq!((f.train_ids.len(), f.test_ids.len()), (33, 10));
        assert!(f.train_ids.iter().all(|id| !f.test_ids.contains(id)));
        let noise = 4.0 * (f.train_return.stderr.powi(2) + f.test_return.stderr.powi(2)).sqrt();
        assert!((f.train_return.mean - f.test_return.mean).abs() <= noise);
    }
    let bad = HoldoutOptions { n_test: 43, ..opts.clone() };
    assert!(matches!(holdout_eval(&u, &pop, &bad, &short(), 1, 0), Err(PbeError::BadSplit { .. })));
    let forgetful = AgentConfig::regret(RegretAlgorithm::RmPlus, ContextMode::Discrete, 1);
    assert!(matches!(holdout_eval(&forgetful, &pop, &opts, &short(), 1, 0), Err(PbeError::CannotTrain(_))));
    let persistent = forgetful.persistent(true);
    let rep = holdout_eval(&persistent, &pop, &opts, &short(), 1, 0).unwrap();
    assert_eq!(rep, holdout_eval(&persistent, &pop, &opts, &short(), 1, 2).unwrap());
}

#[test]
fn predictability_rows() {
    let pop = small_pop();
    let m = predictability_matrix(&pop, 1, 3, &EpisodeConfig::default(), 2, 0).unwrap();
    assert!(m.accuracy.iter().flatten().all(|&x| (0.0..=1.0).contains(&x)));
    assert!(m.row("rockbot").unwrap().iter().all(|&x| x == 1.0));
    assert!(m.row("rotatebot").unwrap().iter().all(|&x| x >= 0.99));
    assert!(m.row("randbot").unwrap().iter().all(|&x| (0.28..=0.39).contains(&x)));
    assert!(matches!(predictability_matrix(&pop, 13, 1, &short(), 0, 0), Err(PbeError::OrderTooLarge(13))));
}
