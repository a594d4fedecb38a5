//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test -p ndcausal-core --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use common::*;
use ndcausal_core::dsl::{parse_domain, parse_query, print_domain, print_query};
use ndcausal_core::gen::{self, Rng, TheoryShape};
use ndcausal_core::oracle::Evaluator;
use ndcausal_core::regress::{is_pure_initial, RegressionEngine};
use ndcausal_core::simplify::simplify;
use ndcausal_core::theory::validate_theory;
use ndcausal_core::tree::build_execution_tree;
use ndcausal_core::verify::{fuzz_verify, FuzzConfig};
use ndcausal_core::{robot_theory, CausalQuery, DynamicFormula, Env, ExtendedFormula, SituationTerm};

fn report(criterion: u32, name: &str, ok: bool, elapsed: Duration) {
    println!(
        "acceptance criterion {criterion} ({name}): {} [{:.2?}]",
        if ok { "PASS" } else { "FAIL" },
        elapsed
    );
    assert!(ok, "criterion {criterion} ({name}) failed");
}

#[test]
fn criterion_1_causes_of_vulnerability_in_sigma1() {
    let start = Instant::now();
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let s = sigma1();
    let got = [
        evaluator.causes(&comm_sys("I0", "Succ"), 0, &vul(), &s).unwrap(),
        evaluator.causes(&move_sys("I0", "I1", "NotVul"), 1, &vul(), &s).unwrap(),
        evaluator.causes(&move_sys("I1", "I2", "Vul"), 2, &vul(), &s).unwrap(),
        evaluator.causes(&move_sys("I2", "I3", "NotVul"), 3, &vul(), &s).unwrap(),
    ];
    let elapsed = start.elapsed();
    let ok = got == [false, true, true, false] && elapsed < Duration::from_secs(1);
    report(1, "deterministic causes in sigma1", ok, elapsed);
}

#[test]
fn criterion_2_nd_cause_verdicts_over_alpha1() {
    let start = Instant::now();
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let alpha = alpha1();
    let got = [
        evaluator.pcauses(&comm_ag("I0"), 0, &vul(), &alpha).unwrap().holds,
        evaluator.ccauses(&move_ag("I0", "I1"), 1, &vul(), &alpha).unwrap().holds,
        evaluator.pcauses(&move_ag("I1", "I2"), 2, &vul(), &alpha).unwrap().holds,
        evaluator.ccauses(&move_ag("I1", "I2"), 2, &vul(), &alpha).unwrap().holds,
        evaluator.pcauses(&move_ag("I2", "I3"), 3, &vul(), &alpha).unwrap().holds,
    ];
    let elapsed = start.elapsed();
    let ok = got == [false, true, true, false, false] && elapsed < Duration::from_secs(1);
    report(2, "possibly/certainly causes over alpha1", ok, elapsed);
}

#[test]
fn criterion_3_execution_tree_of_alpha1() {
    let start = Instant::now();
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let execs = evaluator.enumerate_executions(&alpha1(), &SituationTerm::S0).unwrap();
    let vulnerable = execs
        .iter()
        .filter(|s| evaluator.eval(&vul().restore(s), &Env::new()).unwrap())
        .count();
    let tree = build_execution_tree(&theory, &alpha1(), &SituationTerm::S0).unwrap();
    let branching = tree.branching_per_level();
    let elapsed = start.elapsed();
    let ok = execs.len() == 4
        && vulnerable == 3
        && branching.len() >= 4
        && branching[0] == vec![1]
        && branching[1] == vec![2]
        && branching[2] == vec![2, 2]
        && branching[3] == vec![1, 1, 1, 1]
        && tree.leaf_situations().len() == 4
        && elapsed < Duration::from_secs(1);
    report(3, "execution tree shape of alpha1", ok, elapsed);
}

#[test]
fn criterion_4_golden_regression_of_ccauses() {
    let start = Instant::now();
    let theory = robot_theory();
    let engine = RegressionEngine::new(&theory);
    let query = CausalQuery::CCauses {
        action: move_ag("I0", "I1"),
        ts: 0,
        effect: vul(),
        scenario: alpha2(),
    };
    let verdict = engine.check_regression_theorem(&query).unwrap();
    let elapsed = start.elapsed();
    let ok = verdict.result.fixpoint == ExtendedFormula::True
        && verdict.result.top_level_reductions() == 3
        && verdict.oracle
        && verdict.regressed
        && verdict.agree
        && elapsed < Duration::from_secs(5);
    report(4, "golden regression derivation", ok, elapsed);
}

#[test]
fn criterion_5_regression_theorem_on_random_theories() {
    let start = Instant::now();
    let cfg = FuzzConfig { domains: 20, queries_per_domain: 50, seed: 20260808, max_scenario: 4 };
    let rep = fuzz_verify(&cfg);
    let elapsed = start.elapsed();
    let ok = rep.passed()
        && rep.domains >= 20
        && rep.queries >= 1000
        && rep.agreed == rep.queries
        && elapsed < Duration::from_secs(60);
    if !rep.mismatches.is_empty() {
        println!("  first mismatch: {:?}", rep.mismatches[0]);
    }
    if !rep.errors.is_empty() {
        println!("  first error: {}", rep.errors[0]);
    }
    report(5, "oracle/regression agreement on 1000 random queries", ok, elapsed);
}

#[test]
fn criterion_6_reduction_equivalences() {
    let start = Instant::now();
    let mut rng = Rng::new(61803);
    let shape = TheoryShape::default();
    let env = Env::new();

    // Actual-cause unfolding over a successor situation.
    let mut checked_causes = 0usize;
    while checked_causes < 500 {
        let theory = gen::gen_theory(&mut rng, &shape);
        if !validate_theory(&theory).is_empty() {
            continue;
        }
        let evaluator = Evaluator::new(&theory);
        for _ in 0..10 {
            let alpha = gen::gen_agent_sequence(&mut rng, &theory, 4);
            if alpha.is_empty() {
                continue;
            }
            let execs = evaluator.enumerate_executions(&alpha, &SituationTerm::S0).unwrap();
            let Some(scenario) = execs.first() else { continue };
            if scenario.depth() == 0 {
                continue;
            }
            let (actions, _) = scenario.decompose();
            let a = actions.last().unwrap();
            let s = scenario.prefix(scenario.depth() - 1).unwrap();
            let b = if rng.chance(70) {
                (*gen::Rng::pick(&mut rng, &actions)).clone()
            } else {
                gen::gen_system_action(&mut rng, &theory)
            };
            let ts = rng.range(0, 5) as i64 - 1;
            let effect = gen::gen_effect(&mut rng, &theory, 2);
            let lhs = evaluator
                .eval(
                    &ExtendedFormula::Causes {
                        action: b.clone(),
                        ts,
                        effect: Box::new(effect.clone()),
                        sit: scenario.clone(),
                    },
                    &env,
                )
                .unwrap();
            let rhs = evaluator.eval(&causes_unfolding(&b, ts, &effect, a, &s), &env).unwrap();
            assert_eq!(lhs, rhs, "cause unfolding differs on {b} @ {ts} in {scenario}");
            checked_causes += 1;
        }
    }

    // Peeling the last action off a certainly/possibly-after condition.
    let mut checked_after = 0usize;
    while checked_after < 500 {
        let theory = gen::gen_theory(&mut rng, &shape);
        if !validate_theory(&theory).is_empty() {
            continue;
        }
        let evaluator = Evaluator::new(&theory);
        for _ in 0..10 {
            let alpha = gen::gen_agent_sequence(&mut rng, &theory, 4);
            if alpha.is_empty() {
                continue;
            }
            let effect = gen::gen_effect(&mut rng, &theory, 2);
            let (last, rest) = alpha.split_last().unwrap();
            let s0 = SituationTerm::S0;
            let c_lhs = evaluator.eval_cafter(&alpha, &effect, &s0).unwrap();
            let c_rhs = evaluator
                .eval_cafter(rest, &peel_cond_universal(last, &effect), &s0)
                .unwrap();
            assert_eq!(c_lhs, c_rhs, "CAfter peel differs on {alpha:?}");
            let p_lhs = evaluator.eval_pafter(&alpha, &effect, &s0).unwrap();
            let p_rhs = evaluator
                .eval_pafter(rest, &peel_cond_existential(last, &effect), &s0)
                .unwrap();
            assert_eq!(p_lhs, p_rhs, "PAfter peel differs on {alpha:?}");
            checked_after += 1;
        }
    }

    // Certainly/possibly causes as certainly/possibly after.
    let mut checked_nd = 0usize;
    while checked_nd < 500 {
        let theory = gen::gen_theory(&mut rng, &shape);
        if !validate_theory(&theory).is_empty() {
            continue;
        }
        let evaluator = Evaluator::new(&theory);
        for _ in 0..10 {
            let alpha = gen::gen_agent_sequence(&mut rng, &theory, 4);
            let beta = if alpha.is_empty() || !rng.chance(80) {
                gen::gen_agent_action(&mut rng, &theory)
            } else {
                gen::Rng::pick(&mut rng, &alpha).clone()
            };
            let ts = rng.range(0, 5) as i64 - 1;
            let effect = gen::gen_effect(&mut rng, &theory, 2);
            let s0 = SituationTerm::S0;
            let c_lhs = evaluator.ccauses(&beta, ts, &effect, &alpha).unwrap().holds;
            let c_rhs = evaluator
                .eval_cafter(&alpha, &ccauses_cond(&beta, ts, &effect), &s0)
                .unwrap();
            assert_eq!(c_lhs, c_rhs, "CCauses reduction differs on {beta} @ {ts}");
            let p_lhs = evaluator.pcauses(&beta, ts, &effect, &alpha).unwrap().holds;
            let p_rhs = evaluator
                .eval_pafter(&alpha, &pcauses_cond(&beta, ts, &effect), &s0)
                .unwrap();
            assert_eq!(p_lhs, p_rhs, "PCauses reduction differs on {beta} @ {ts}");
            checked_nd += 1;
        }
    }

    let elapsed = start.elapsed();
    let ok = checked_causes >= 500
        && checked_after >= 500
        && checked_nd >= 500
        && elapsed < Duration::from_secs(60);
    report(6, "reduction equivalences on random instances", ok, elapsed);
}

#[test]
fn criterion_7_structural_properties() {
    let start = Instant::now();
    let mut rng = Rng::new(271828);
    let shape = TheoryShape::default();
    let env = Env::new();

    // Certainly causes implies possibly causes under valid settings.
    let mut implication_cases = 0usize;
    while implication_cases < 200 {
        let theory = gen::gen_theory(&mut rng, &shape);
        if !validate_theory(&theory).is_empty() {
            continue;
        }
        let evaluator = Evaluator::new(&theory);
        for _ in 0..10 {
            let alpha = gen::gen_agent_sequence(&mut rng, &theory, 4);
            let effect = gen::gen_effect(&mut rng, &theory, 1);
            if !evaluator.nd_setting_valid(&alpha, &effect).unwrap() {
                continue;
            }
            let beta = if alpha.is_empty() {
                continue;
            } else {
                gen::Rng::pick(&mut rng, &alpha).clone()
            };
            let ts = rng.range(0, alpha.len()) as i64;
            if evaluator.ccauses(&beta, ts, &effect, &alpha).unwrap().holds {
                assert!(
                    evaluator.pcauses(&beta, ts, &effect, &alpha).unwrap().holds,
                    "certainly-causes without possibly-causes for {beta} @ {ts}"
                );
            }
            implication_cases += 1;
        }
    }

    // Deterministic degenerate theories: one admissible reaction everywhere
    // collapses the three cause notions on the unique observed execution.
    let mut degenerate_cases = 0usize;
    let degenerate_shape = TheoryShape { degenerate: true, ..shape };
    while degenerate_cases < 200 {
        let theory = gen::gen_theory(&mut rng, &degenerate_shape);
        if !validate_theory(&theory).is_empty() {
            continue;
        }
        let evaluator = Evaluator::new(&theory);
        for _ in 0..10 {
            let alpha = gen::gen_agent_sequence(&mut rng, &theory, 4);
            let execs = evaluator.enumerate_executions(&alpha, &SituationTerm::S0).unwrap();
            if execs.len() != 1 {
                continue;
            }
            let unique = &execs[0];
            let effect = gen::gen_effect(&mut rng, &theory, 1);
            if !evaluator.eval(&effect.restore(unique), &env).unwrap() {
                continue;
            }
            let beta = if alpha.is_empty() {
                continue;
            } else {
                gen::Rng::pick(&mut rng, &alpha).clone()
            };
            let ts = rng.range(0, alpha.len()) as i64;
            let reaction = theory.action(&beta.name).unwrap().reactions[0].clone();
            let sys = beta.with_reaction(ndcausal_core::ReactionTerm::Const(reaction));
            let p = evaluator.pcauses(&beta, ts, &effect, &alpha).unwrap().holds;
            let c = evaluator.ccauses(&beta, ts, &effect, &alpha).unwrap().holds;
            let det = evaluator.causes(&sys, ts, &effect, unique).unwrap();
            assert_eq!(p, c, "degenerate pcauses != ccauses");
            assert_eq!(p, det, "degenerate nd-causes != deterministic causes");
            degenerate_cases += 1;
        }
    }

    // A primary cause is an actual cause.
    let mut direct_positive = 0usize;
    let mut direct_checked = 0usize;
    while direct_positive < 200 {
        let theory = gen::gen_theory(&mut rng, &shape);
        if !validate_theory(&theory).is_empty() {
            continue;
        }
        let evaluator = Evaluator::new(&theory);
        for _ in 0..10 {
            let alpha = gen::gen_agent_sequence(&mut rng, &theory, 4);
            let execs = evaluator.enumerate_executions(&alpha, &SituationTerm::S0).unwrap();
            let Some(scenario) = execs.first() else { continue };
            let effect = gen::gen_effect(&mut rng, &theory, 1);
            let (actions, _) = scenario.decompose();
            for (k, action) in actions.iter().enumerate() {
                direct_checked += 1;
                if evaluator.causes_directly(action, k as i64, &effect, scenario).unwrap() {
                    direct_positive += 1;
                    assert!(
                        evaluator.causes(action, k as i64, &effect, scenario).unwrap(),
                        "primary cause is not an actual cause: {action} @ {k}"
                    );
                }
            }
        }
    }

    // Fixpoint purity and idempotence over random regressable queries.
    let mut fixpoint_cases = 0usize;
    while fixpoint_cases < 200 {
        let theory = gen::gen_theory(&mut rng, &shape);
        if !validate_theory(&theory).is_empty() {
            continue;
        }
        let engine = RegressionEngine::new(&theory);
        for _ in 0..10 {
            let query = gen::gen_query(&mut rng, &theory, 3);
            let Some(formula) = query.to_formula() else { continue };
            let result = engine.regress_star(&formula).unwrap();
            assert!(
                is_pure_initial(&result.fixpoint),
                "impure fixpoint {} for {}",
                result.fixpoint,
                query
            );
            assert_eq!(
                engine.regress_one(&result.fixpoint).unwrap(),
                result.fixpoint,
                "fixpoint regresses further"
            );
            assert_eq!(
                simplify(&theory, &result.fixpoint),
                result.fixpoint,
                "fixpoint simplifies further"
            );
            fixpoint_cases += 1;
        }
    }

    // Suppression undoes restoration on After-free, Poss-free formulas.
    let mut roundtrip_cases = 0usize;
    while roundtrip_cases < 200 {
        let theory = gen::gen_theory(&mut rng, &shape);
        if validate_theory(&theory).is_empty() {
            let evaluator = Evaluator::new(&theory);
            for _ in 0..20 {
                let phi = gen_suppressed(&mut rng, &theory);
                let alpha = gen::gen_agent_sequence(&mut rng, &theory, 3);
                let execs = evaluator.enumerate_executions(&alpha, &SituationTerm::S0).unwrap();
                let s = execs.first().cloned().unwrap_or(SituationTerm::S0);
                assert_eq!(phi.restore(&s).suppress().unwrap(), phi);
                roundtrip_cases += 1;
            }
        }
    }

    // Printing and reparsing is the identity on parsed values.
    let mut dsl_cases = 0usize;
    while dsl_cases < 200 {
        let theory = gen::gen_theory(&mut rng, &shape);
        if !validate_theory(&theory).is_empty() {
            continue;
        }
        let text = print_domain(&theory);
        let parsed = parse_domain(&text).unwrap_or_else(|d| {
            panic!("printed domain does not reparse: {:?}\n{}", d.first(), text)
        });
        let reprinted = print_domain(&parsed);
        let reparsed = parse_domain(&reprinted).unwrap();
        assert_eq!(parsed, reparsed, "domain print/parse is not idempotent");
        for _ in 0..5 {
            let query = gen::gen_query(&mut rng, &theory, 3);
            let text = print_query(&query);
            let parsed_q = parse_query(&parsed, &text)
                .unwrap_or_else(|d| panic!("printed query does not reparse: {:?}\n{text}", d.first()));
            assert_eq!(print_query(&parsed_q), text, "query print is not stable");
            dsl_cases += 1;
        }
    }

    let elapsed = start.elapsed();
    let ok = implication_cases >= 200
        && degenerate_cases >= 200
        && direct_positive >= 200
        && direct_checked >= 200
        && fixpoint_cases >= 200
        && roundtrip_cases >= 200
        && dsl_cases >= 200;
    report(7, "structural property suite", ok, elapsed);
}

/// Random After-free, Poss-free suppressed formula over the theory.
fn gen_suppressed(rng: &mut Rng, theory: &ndcausal_core::NDBATheory) -> DynamicFormula {
    fn go(rng: &mut Rng, theory: &ndcausal_core::NDBATheory, depth: usize) -> DynamicFormula {
        use ndcausal_core::term::{ObjectTerm, Sort, Variable};
        if depth == 0 || rng.chance(40) {
            let fluent = Rng::pick(rng, &theory.fluents).clone();
            let args = fluent
                .param_sorts
                .iter()
                .map(|s| {
                    let domain = theory.object_domain(s);
                    ObjectTerm::Const(Rng::pick(rng, &domain).clone())
                })
                .collect();
            return DynamicFormula::Fluent(fluent.name, args);
        }
        match rng.below(5) {
            0 => go(rng, theory, depth - 1).not(),
            1 => DynamicFormula::And(vec![
                go(rng, theory, depth - 1),
                go(rng, theory, depth - 1),
            ]),
            2 => DynamicFormula::Or(vec![
                go(rng, theory, depth - 1),
                go(rng, theory, depth - 1),
            ]),
            3 => DynamicFormula::TimeCmp(
                if rng.chance(50) {
                    ndcausal_core::TimeOp::Eq
                } else {
                    ndcausal_core::TimeOp::Gt
                },
                rng.range(0, 4) as i64,
            ),
            _ => {
                let v = ndcausal_core::Symbol::from(format!("v{}", rng.range(1, 3)));
                let sort = theory.sorts[0].clone();
                let fluents: Vec<_> =
                    theory.fluents.iter().filter(|f| !f.param_sorts.is_empty()).collect();
                if fluents.is_empty() {
                    return go(rng, theory, depth - 1);
                }
                let fluent = Rng::pick(rng, &fluents);
                DynamicFormula::Exists(
                    vec![Variable::new(v.clone(), Sort::Object(sort))],
                    Box::new(DynamicFormula::Fluent(
                        fluent.name.clone(),
                        vec![ObjectTerm::Var(v)],
                    )),
                )
            }
        }
    }
    go(rng, theory, 2)
}
