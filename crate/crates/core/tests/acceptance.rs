//! Acceptance gate. Run with `cargo test -p barter-core --test acceptance`;
//! prints one PASS/FAIL line per criterion and exits non-zero on failure.

use std::time::{Duration, Instant};

use barter_core::engine::{run_to_completion, EngineConfig, Termination};
use barter_core::game::{build_matrix, pure_equilibria, BilateralView, EquilibriumProfile};
use barter_core::io::{export_scenario, parse_scenario, ResultDocument};
use barter_core::model::{reservation_radius, Agent, AgentId, FrustrationState, Point};
use barter_core::oracle::{self, Objective};
use barter_core::scenarios::{
    bipartite_case, cycling_ring, random_population, seesaw_line, seesaw_uniform, BipartiteCase, PopulationRanges,
    ScenarioSpec,
};
use barter_core::{Matching, Pair, StrategyKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn pair(a: u32, b: u32) -> Pair {
    Pair::new(AgentId(a), AgentId(b))
}

fn matching(pairs: &[(u32, u32)]) -> Matching {
    Matching::from_pairs(pairs.iter().map(|&(a, b)| pair(a, b))).unwrap()
}

fn run(spec: &ScenarioSpec, strategy: StrategyKind, seed: u64) -> barter_core::Outcome {
    run_to_completion(&spec.agents, EngineConfig::new(seed, 1000, strategy).unwrap()).unwrap()
}

fn c1_equilibrium_structure() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mutual_allure = 0;
    let open = |rng: &mut ChaCha8Rng| loop {
        let x: f64 = rng.gen();
        if x > 0.0 {
            return x;
        }
    };
    for _ in 0..10_000 {
        let row = BilateralView::new(1.0 - rng.gen::<f64>(), open(&mut rng), open(&mut rng)).unwrap();
        let col = BilateralView::new(1.0 - rng.gen::<f64>(), open(&mut rng), open(&mut rng)).unwrap();
        let eq = pure_equilibria(&build_matrix(&row, &col));
        ensure!(eq.len() <= 2, "{} equilibria", eq.len());
        ensure!(
            eq.iter()
                .all(|p| *p == EquilibriumProfile::MUTUAL_ALLURE || *p == EquilibriumProfile::MUTUAL_IGNORE),
            "asymmetric equilibrium in {eq:?}"
        );
        ensure!(eq.contains(&EquilibriumProfile::MUTUAL_IGNORE), "mutual ignore missing");
        let expect_allure = row.satisfaction() >= row.beta() && col.satisfaction() >= col.beta();
        ensure!(eq.contains(&EquilibriumProfile::MUTUAL_ALLURE) == expect_allure, "mutual allure mismatch");
        mutual_allure += usize::from(expect_allure);
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("10000 games, {mutual_allure} with two equilibria, {elapsed:.2?}"))
}

fn c2_seesaw_parity() -> Check {
    let (beta, gamma) = (0.1, 0.5);
    let even = seesaw_uniform(10, 30.0, 1.0, beta, gamma).unwrap();
    let out = run(&even, StrategyKind::default(), 0);
    ensure!(out.matching.len() == 5, "n=10 gave {} matches", out.matching.len());
    ensure!(out.agents.iter().all(|a| a.satisfaction == 1.0), "n=10 satisfaction not exactly 1");

    let odd = seesaw_uniform(11, 30.0, 1.0, beta, gamma).unwrap();
    let out = run(&odd, StrategyKind::default(), 0);
    let alone: Vec<_> = out.unmatched().collect();
    ensure!(out.matching.len() == 5 && alone.len() == 1, "n=11 gave {} matches, {} alone", out.matching.len(), alone.len());
    ensure!(out.agents.iter().filter(|a| a.partner.is_some()).all(|a| a.satisfaction == 1.0), "n=11 matched below 1");
    let lone = alone[0];
    let expected = beta * gamma.powi(lone.m as i32);
    ensure!((lone.satisfaction - expected).abs() <= 1e-12, "lone {} vs {expected}", lone.satisfaction);
    Ok(format!("n=10: 5 pairs at 1.0; n=11: agent {} alone at beta*gamma^{} = {:.3e}", lone.id, lone.m, lone.satisfaction))
}

fn c3_cycling_golden() -> Check {
    let spec = cycling_ring(1.0, 0.01, 0.5).unwrap();
    let out = run(&spec, StrategyKind::greedy(2), 42);
    let protocol = matching(&[(1, 3), (2, 4)]);
    ensure!(out.matching == protocol, "engine matched {:?}", out.matching.sorted_pairs());
    let avg = (-2.0f64).exp();
    for a in &out.agents {
        ensure!((a.satisfaction - avg).abs() <= 1e-12, "agent {} at {}", a.id, a.satisfaction);
    }
    let egal = oracle::max_welfare_matching(&spec.agents, Objective::EgalitarianMin).unwrap();
    ensure!(egal.matching == protocol, "egalitarian optimum is {:?}", egal.matching.sorted_pairs());
    let util = oracle::max_welfare_matching(&spec.agents, Objective::UtilitarianSum).unwrap();
    let engine = oracle::welfare(&out.matching, &spec.agents).unwrap();
    ensure!(util.total > engine.total, "engine not utilitarian-suboptimal");
    let util_closed = 2.0 * (1.0 + (-4.0f64).exp());
    let engine_closed = 4.0 * avg;
    ensure!((util.total - util_closed).abs() <= 1e-12, "oracle optimum {} vs {util_closed}", util.total);
    ensure!((engine.total - engine_closed).abs() <= 1e-12, "engine total {} vs {engine_closed}", engine.total);
    Ok(format!(
        "A-C, B-D at e^-2; oracle utilitarian {:.6} > engine {:.6}; egalitarian optimum = protocol",
        util.total, engine.total
    ))
}

fn c4_seesaw_line_golden() -> Check {
    let positions = [0.0, 7.0, 11.0, 18.0];
    let low = seesaw_line(&positions, 0.04, 0.001, 0.1).unwrap();
    let out = run(&low, StrategyKind::default(), 0);
    let expected = matching(&[(2, 3), (1, 4)]);
    ensure!(out.matching == expected, "beta=0.001 matched {:?}", out.matching.sorted_pairs());
    let s1 = out.final_satisfaction(AgentId(1)).unwrap();
    let s4 = out.final_satisfaction(AgentId(4)).unwrap();
    ensure!(s1 == s4 && s1 < 0.001 * 10.0, "S1={s1} S4={s4}");
    ensure!(oracle::blocking_pairs(&out.matching, &low.agents).unwrap().is_empty(), "engine matching has blocking pairs");
    // among perfect matchings the oracle agrees on 1-4 / 2-3
    let mut best: Option<(f64, Matching)> = None;
    for m in oracle::enumerate_matchings(&low.agents).unwrap().filter(|m| m.len() == 2) {
        let total = oracle::welfare(&m, &low.agents).unwrap().total;
        if best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, m));
        }
    }
    ensure!(best.unwrap().1 == expected, "oracle's best perfect matching differs");

    let high = seesaw_line(&positions, 0.04, 0.1, 0.1).unwrap();
    let out = run(&high, StrategyKind::default(), 0);
    ensure!(out.matching == matching(&[(2, 3)]), "beta=0.1 matched {:?}", out.matching.sorted_pairs());
    let optimum = oracle::max_welfare_matching(&high.agents, Objective::UtilitarianSum).unwrap();
    ensure!(optimum.matching == out.matching, "oracle optimum {:?}", optimum.matching.sorted_pairs());
    Ok(format!("beta=0.001: 2-3 and 1-4 with S1=S4={s1:.3e}; beta=0.1: 1 and 4 alone"))
}

fn c5_oracle_soundness() -> Check {
    let start = Instant::now();
    for k in 1..=5usize {
        let pop = seesaw_uniform(2 * k, 0.0, 1.0, 0.1, 0.5).unwrap().agents;
        let perfect = oracle::enumerate_matchings(&pop).unwrap().filter(|m| 2 * m.len() == pop.len()).count();
        let double_fact: usize = (1..2 * k).step_by(2).product();
        ensure!(perfect == double_fact, "2k={}: {perfect} perfect, expected {double_fact}", 2 * k);
    }
    let strategies = [StrategyKind::default(), StrategyKind::greedy(2), StrategyKind::greedy(1), StrategyKind::RandomAmongBest];
    let (mut static_ir_violations, mut blocking, mut within_n, mut max_round_hits) = (0, 0, 0, 0);
    for seed in 0..1000u64 {
        let n = (seed % 9) as usize;
        let spec = random_population(n, 2, seed, PopulationRanges::default()).unwrap();
        let strategy = strategies[(seed / 9) as usize % strategies.len()];
        let out = run_to_completion(&spec.agents, EngineConfig::new(seed, 200, strategy).unwrap()).unwrap();
        ensure!(out.rational_at_confirmation(), "seed {seed}: match below reservation");
        let ir_frustrated = oracle::is_individually_rational_against(&out.matching, &spec.agents, |a| {
            out.rounds
                .iter()
                .flat_map(|r| &r.matches)
                .flat_map(|m| &m.parties)
                .find(|p| p.id == a.id())
                .map_or(a.beta(), |p| p.reservation)
        })
        .unwrap();
        ensure!(ir_frustrated, "seed {seed}: oracle IR audit failed");
        static_ir_violations += usize::from(!oracle::is_individually_rational(&out.matching, &spec.agents).unwrap());
        let best = oracle::max_welfare_matching(&spec.agents, Objective::UtilitarianSum).unwrap();
        let engine = oracle::welfare(&out.matching, &spec.agents).unwrap();
        ensure!(engine.total <= best.total, "seed {seed}: engine {} > oracle {}", engine.total, best.total);
        ensure!(out.total_satisfaction() <= best.total, "seed {seed}: engine final welfare beats oracle");
        blocking += oracle::blocking_pairs(&out.matching, &spec.agents).unwrap().len();
        within_n += usize::from(out.termination != Termination::MaxRounds && out.rounds_executed as usize <= n.max(1));
        max_round_hits += usize::from(out.termination == Termination::MaxRounds);
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!(
        "(2k-1)!! for k=1..5; 1000 populations rational at confirmation and <= oracle; \
         reported: {static_ir_violations} below static beta, {blocking} blocking pairs, \
         {within_n} settled within n rounds, {max_round_hits} hit max_rounds; {elapsed:.2?}"
    ))
}

fn c6_satisfaction_function() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let at = |alpha: f64, d: f64| {
        let a = Agent::new(1, Point::new(vec![0.0]).unwrap(), Point::new(vec![0.0]).unwrap(), alpha, 0.5, 0.5).unwrap();
        a.satisfaction(&Point::new(vec![d]).unwrap()).unwrap()
    };
    let mut worst_fd = 0.0f64;
    for _ in 0..100 {
        let alpha = rng.gen_range(0.01..5.0);
        let d = rng.gen_range(0.05..2.0);
        let s = at(alpha, d);
        let closed = (-alpha * d * d).exp();
        ensure!((s - closed).abs() <= 1e-12, "alpha={alpha} d={d}: {s} vs {closed}");
        let h = 1e-5;
        let fd = (at(alpha, d + h) - at(alpha, d - h)) / (2.0 * h);
        let analytic = -2.0 * alpha * d * closed;
        let rel = ((fd - analytic) / analytic).abs();
        worst_fd = worst_fd.max(rel);
        ensure!(rel <= 1e-6, "alpha={alpha} d={d}: derivative rel err {rel}");

        let beta = rng.gen_range(0.01..0.99);
        let gamma = rng.gen_range(0.01..0.99);
        let m = rng.gen_range(0..20u32);
        let a = Agent::new(1, Point::new(vec![0.0]).unwrap(), Point::new(vec![0.0]).unwrap(), alpha, beta, gamma).unwrap();
        let f = FrustrationState::with_failures(a.id(), m);
        let r = reservation_radius(&a, &f);
        let back = a.satisfaction(&Point::new(vec![r]).unwrap()).unwrap();
        ensure!((back - a.reservation(m)).abs() <= 1e-12, "radius inversion off by {}", (back - a.reservation(m)).abs());
    }
    Ok(format!("100 points exact to 1e-12; worst derivative rel err {worst_fd:.2e}"))
}

fn c7_determinism() -> Check {
    let cases: Vec<(ScenarioSpec, EngineConfig)> = vec![
        (cycling_ring(1.0, 0.01, 0.5).unwrap(), EngineConfig::new(42, 100, StrategyKind::greedy(2)).unwrap()),
        (seesaw_uniform(11, 30.0, 1.0, 0.1, 0.5).unwrap(), EngineConfig::new(7, 100, StrategyKind::RandomAmongBest).unwrap()),
        (random_population(9, 3, 5, PopulationRanges::default()).unwrap(), EngineConfig::new(5, 100, StrategyKind::default()).unwrap()),
        (bipartite_case(BipartiteCase::Boredom, (2, 4), 1.0, 0.1, 0.5).unwrap(), EngineConfig::default()),
    ];
    for (spec, config) in &cases {
        let first = ResultDocument::run(spec, *config).unwrap().to_json();
        let second = ResultDocument::run(spec, *config).unwrap().to_json();
        ensure!(first == second, "{}: result documents differ", spec.name);
        let parsed = ResultDocument::from_json(first.as_bytes()).unwrap();
        ensure!(parsed.to_json() == first, "{}: result document does not round-trip", spec.name);

        let text = export_scenario(spec, config);
        let (back, back_config) = parse_scenario(text.as_bytes()).unwrap();
        ensure!(&back == spec && back_config == *config, "{}: scenario round trip lost data", spec.name);
        ensure!(export_scenario(&back, &back_config) == text, "{}: re-export differs", spec.name);
    }
    Ok(format!("{} scenarios: byte-identical results, lossless scenario files", cases.len()))
}

fn c8_bipartite_cases() -> Check {
    let (alpha, beta, gamma) = (1.0, 0.1, 0.5);

    let spec = bipartite_case(BipartiteCase::Match, (3, 3), alpha, beta, gamma).unwrap();
    let out = run(&spec, StrategyKind::default(), 0);
    ensure!(out.matching.len() == 3, "match: {} pairs", out.matching.len());
    ensure!(out.agents.iter().all(|a| a.satisfaction == 1.0), "match: not all at 1");

    let spec = bipartite_case(BipartiteCase::Dismatch, (2, 2), alpha, beta, gamma).unwrap();
    let out = run(&spec, StrategyKind::default(), 0);
    ensure!(out.matching.is_empty(), "dismatch: {} pairs", out.matching.len());
    ensure!(out.agents.iter().all(|a| a.satisfaction == beta && a.m == 0), "dismatch: not all at beta");

    let spec = bipartite_case(BipartiteCase::Popular, (3, 4), alpha, beta, gamma).unwrap();
    let out = run(&spec, StrategyKind::default(), 0);
    let red = AgentId(1);
    ensure!(out.agent(red).unwrap().partner.is_some(), "popular: red unmatched");
    let best_over_matchings = oracle::enumerate_matchings(&spec.agents)
        .unwrap()
        .map(|m| {
            let w = oracle::welfare(&m, &spec.agents).unwrap();
            w.per_agent.iter().find(|x| x.id == red).unwrap().satisfaction
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let red_s = out.final_satisfaction(red).unwrap();
    ensure!(red_s == best_over_matchings, "popular: red at {red_s}, oracle best {best_over_matchings}");

    let spec = bipartite_case(BipartiteCase::Boredom, (2, 4), alpha, beta, gamma).unwrap();
    let red_agent = spec.agent(red).unwrap();
    let side2: Vec<&Agent> = spec.agents.iter().skip(2).collect();
    let candidate: Vec<f64> = side2.iter().map(|b| red_agent.satisfaction(b.offer()).unwrap()).collect();
    for x in &candidate {
        for y in &candidate {
            ensure!((x - y).abs() <= 1e-12, "boredom: candidates differ {candidate:?}");
        }
    }
    let out = run(&spec, StrategyKind::default(), 0);
    let lowest = side2.iter().map(|a| a.id()).min().unwrap();
    ensure!(out.agent(red).unwrap().partner == Some(lowest), "boredom: red matched {:?}", out.agent(red).unwrap().partner);
    Ok(format!(
        "match 3 pairs at 1; dismatch empty at beta; popular red at its best {red_s:.4}; boredom ties {:.4} -> agent {lowest}",
        candidate[0]
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("equilibrium structure", c1_equilibrium_structure),
        ("seesaw parity", c2_seesaw_parity),
        ("cycling golden", c3_cycling_golden),
        ("seesaw line golden", c4_seesaw_line_golden),
        ("oracle soundness", c5_oracle_soundness),
        ("satisfaction function", c6_satisfaction_function),
        ("determinism", c7_determinism),
        ("bipartite cases", c8_bipartite_cases),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS  {}. {name}: {detail}", i + 1),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL  {}. {name}: {why}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("FAIL  {}. {name}: panicked", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
