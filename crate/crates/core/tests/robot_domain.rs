//! The bundled robot domain, exercised against the worked example facts:
//! the scenario σ1 and its causes, the agent scenario α⃗1 and its tree of
//! executions, and the possibly/certainly-causes verdicts over it.

use ndcausal_core::dsl::parse_domain;
use ndcausal_core::oracle::{CauseWarning, Evaluator};
use ndcausal_core::reqcheck::check_reaction_requirements;
use ndcausal_core::theory::validate_theory;
use ndcausal_core::tree::build_execution_tree;
use ndcausal_core::{
    robot_theory, AgentAction, DynamicFormula, ObjectTerm, ReactionTerm, SituationTerm,
    SystemAction,
};

fn obj(c: &str) -> ObjectTerm {
    ObjectTerm::constant(c)
}

fn move_sys(i: &str, j: &str, e: &str) -> SystemAction {
    SystemAction::new("move", vec![obj(i), obj(j)], ReactionTerm::constant(e))
}

fn comm_sys(i: &str, e: &str) -> SystemAction {
    SystemAction::new("comm", vec![obj(i)], ReactionTerm::constant(e))
}

fn move_ag(i: &str, j: &str) -> AgentAction {
    AgentAction::new("move", vec![obj(i), obj(j)])
}

fn comm_ag(i: &str) -> AgentAction {
    AgentAction::new("comm", vec![obj(i)])
}

fn vul() -> DynamicFormula {
    DynamicFormula::fluent("Vul", vec![])
}

fn at(i: &str) -> DynamicFormula {
    DynamicFormula::fluent("At", vec![obj(i)])
}

/// σ1 = do([comm(I0,Succ), move(I0,I1,NotVul), move(I1,I2,Vul), move(I2,I3,NotVul)], S0)
fn sigma1() -> SituationTerm {
    SituationTerm::chain(
        &[
            comm_sys("I0", "Succ"),
            move_sys("I0", "I1", "NotVul"),
            move_sys("I1", "I2", "Vul"),
            move_sys("I2", "I3", "NotVul"),
        ],
        SituationTerm::S0,
    )
}

/// α⃗1 = comm(I0); move(I0,I1); move(I1,I2); move(I2,I3)
fn alpha1() -> Vec<AgentAction> {
    vec![comm_ag("I0"), move_ag("I0", "I1"), move_ag("I1", "I2"), move_ag("I2", "I3")]
}

/// α⃗2 = move(I0,I1); move(I1,I2)
fn alpha2() -> Vec<AgentAction> {
    vec![move_ag("I0", "I1"), move_ag("I1", "I2")]
}

#[test]
fn bundled_domain_parses_with_expected_shape() {
    let theory = parse_domain(ndcausal_core::ROBOT_DOMAIN).expect("parses");
    assert_eq!(theory.fluents.len(), 3);
    assert_eq!(theory.actions.len(), 2);
    assert_eq!(theory.objects.len(), 4);
    let connected = theory.rigid(&"Connected".into()).expect("rigid declared");
    let edges: Vec<Vec<String>> = connected
        .tuples
        .iter()
        .map(|t| t.iter().map(|c| c.to_string()).collect())
        .collect();
    assert_eq!(
        edges,
        vec![vec!["I0", "I1"], vec!["I1", "I2"], vec!["I2", "I3"]]
    );
    assert!(validate_theory(&theory).is_empty());
}

#[test]
fn bundled_domain_passes_reaction_requirements() {
    let theory = robot_theory();
    let report = check_reaction_requirements(&theory, 4).expect("check runs");
    assert!(report.passed(), "{report}");
    // Passing at a depth implies passing at every smaller depth.
    for d in 1..4 {
        assert!(check_reaction_requirements(&theory, d).unwrap().passed());
    }
    assert!(check_reaction_requirements(&theory, 0).is_err());
}

#[test]
fn initial_state_matches_the_axioms() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let state = evaluator.fluent_state(&SituationTerm::S0).unwrap();
    let atoms: Vec<String> = state.true_atoms.iter().map(|a| a.to_string()).collect();
    assert_eq!(atoms, vec!["At(I0)", "Risky(I1)", "Risky(I2)"]);
}

#[test]
fn progression_matches_the_example_tree_nodes() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let env = Default::default();

    // After comm(I0,Succ); move(I0,I1,NotVul): not vulnerable, at I1.
    let s2b = SituationTerm::chain(
        &[comm_sys("I0", "Succ"), move_sys("I0", "I1", "NotVul")],
        SituationTerm::S0,
    );
    assert!(!evaluator.eval(&vul().restore(&s2b), &env).unwrap());
    assert!(evaluator.eval(&at("I1").restore(&s2b), &env).unwrap());

    // A vulnerable variant: move(I0,I1,Vul) from S0.
    let s_vul = SituationTerm::S0.succ(move_sys("I0", "I1", "Vul"));
    assert!(evaluator.eval(&vul().restore(&s_vul), &env).unwrap());
    assert!(evaluator.eval(&at("I1").restore(&s_vul), &env).unwrap());

    // Vulnerability is sticky along the branch through move(I1,I2,Vul).
    let s32a = SituationTerm::chain(
        &[comm_sys("I0", "Succ"), move_sys("I0", "I1", "NotVul"), move_sys("I1", "I2", "Vul")],
        SituationTerm::S0,
    );
    assert!(evaluator.eval(&vul().restore(&s32a), &env).unwrap());
}

#[test]
fn executability() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    assert!(evaluator.executable(&SituationTerm::S0).unwrap());
    assert!(evaluator.executable(&sigma1()).unwrap());
    // comm from a risky location is impossible.
    let bad = SituationTerm::chain(
        &[move_sys("I0", "I1", "NotVul"), comm_sys("I1", "Succ")],
        SituationTerm::S0,
    );
    assert!(!evaluator.executable(&bad).unwrap());
}

#[test]
fn executions_of_the_example_sequences() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let execs = evaluator.enumerate_executions(&alpha1(), &SituationTerm::S0).unwrap();
    assert_eq!(execs.len(), 4);

    assert_eq!(
        evaluator.enumerate_executions(&[], &SituationTerm::S0).unwrap(),
        vec![SituationTerm::S0]
    );

    let execs2 = evaluator.enumerate_executions(&alpha2(), &SituationTerm::S0).unwrap();
    assert_eq!(execs2.len(), 4);
}

#[test]
fn possibly_and_certainly_after() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let s0 = SituationTerm::S0;
    // Some execution of α⃗1 leaves the robot vulnerable, but not all do.
    assert!(evaluator.eval_pafter(&alpha1(), &vul(), &s0).unwrap());
    assert!(!evaluator.eval_cafter(&alpha1(), &vul(), &s0).unwrap());
    // Empty sequence: both collapse to evaluation at the start situation.
    assert!(!evaluator.eval_cafter(&[], &vul(), &s0).unwrap());
    assert!(!evaluator.eval_pafter(&[], &vul(), &s0).unwrap());
    assert!(evaluator.eval_cafter(&[], &at("I0"), &s0).unwrap());
}

#[test]
fn execution_tree_matches_the_figure() {
    let theory = robot_theory();
    let tree = build_execution_tree(&theory, &alpha1(), &SituationTerm::S0).unwrap();
    let leaves = tree.leaf_situations();
    assert_eq!(leaves.len(), 4);

    // Branching 1, 2, 2, 1 along the chain.
    let branching = tree.branching_per_level();
    assert_eq!(branching[0], vec![1]);
    assert_eq!(branching[1], vec![2]);
    assert_eq!(branching[2], vec![2, 2]);
    assert_eq!(branching[3], vec![1, 1, 1, 1]);

    // Exactly 3 of the 4 executions end vulnerable.
    let evaluator = Evaluator::new(&theory);
    let env = Default::default();
    let vulnerable = leaves
        .iter()
        .filter(|s| evaluator.eval(&vul().restore(s), &env).unwrap())
        .count();
    assert_eq!(vulnerable, 3);

    // The leaves agree with the flat enumeration.
    let mut flat = evaluator.enumerate_executions(&alpha1(), &SituationTerm::S0).unwrap();
    let mut from_tree = leaves;
    flat.sort();
    from_tree.sort();
    assert_eq!(flat, from_tree);
}

#[test]
fn empty_sequence_tree_is_a_single_node() {
    let theory = robot_theory();
    let tree = build_execution_tree(&theory, &[], &SituationTerm::S0).unwrap();
    assert!(tree.root.children.is_empty());
    assert_eq!(tree.leaf_situations(), vec![SituationTerm::S0]);
}

#[test]
fn inexecutable_first_action_yields_empty_tree_with_warning() {
    let theory = robot_theory();
    // comm(I1) from S0 fails its agent precondition: I1 is risky.
    let tree = build_execution_tree(&theory, &[comm_ag("I1")], &SituationTerm::S0).unwrap();
    assert!(tree.root.children.is_empty());
    assert!(!tree.warnings.is_empty());
}

#[test]
fn primary_causes_in_sigma1() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let s = sigma1();
    // The vulnerable-making move is the primary cause at timestamp 2.
    assert!(evaluator.causes_directly(&move_sys("I1", "I2", "Vul"), 2, &vul(), &s).unwrap());
    // The final move finds the effect already true: not a primary cause.
    assert!(!evaluator.causes_directly(&move_sys("I2", "I3", "NotVul"), 3, &vul(), &s).unwrap());
    // Nothing is caused in the empty scenario.
    assert!(!evaluator
        .causes_directly(&move_sys("I1", "I2", "Vul"), 0, &vul(), &SituationTerm::S0)
        .unwrap());
}

#[test]
fn actual_causes_of_vulnerability_in_sigma1() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let s = sigma1();
    assert!(!evaluator.causes(&comm_sys("I0", "Succ"), 0, &vul(), &s).unwrap());
    assert!(evaluator.causes(&move_sys("I0", "I1", "NotVul"), 1, &vul(), &s).unwrap());
    assert!(evaluator.causes(&move_sys("I1", "I2", "Vul"), 2, &vul(), &s).unwrap());
    assert!(!evaluator.causes(&move_sys("I2", "I3", "NotVul"), 3, &vul(), &s).unwrap());
}

#[test]
fn indirect_cause_decomposes_through_the_context_condition() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    // move(I0,I1,NotVul)@1 causes Vul because it directly causes the context
    // Poss(move(I1,I2,Vul)) ∧ After(move(I1,I2,Vul), Vul) at the prefix with
    // timestamp 2.
    let prefix = sigma1().prefix(2).unwrap();
    let context = DynamicFormula::and(vec![
        DynamicFormula::Poss(move_sys("I1", "I2", "Vul")),
        DynamicFormula::After(move_sys("I1", "I2", "Vul"), Box::new(vul())),
    ]);
    assert!(evaluator
        .causes_directly(&move_sys("I0", "I1", "NotVul"), 1, &context, &prefix)
        .unwrap());
}

#[test]
fn nd_causes_verdicts_over_alpha1() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let alpha = alpha1();
    assert!(!evaluator.pcauses(&comm_ag("I0"), 0, &vul(), &alpha).unwrap().holds);
    assert!(evaluator.ccauses(&move_ag("I0", "I1"), 1, &vul(), &alpha).unwrap().holds);
    assert!(evaluator.pcauses(&move_ag("I1", "I2"), 2, &vul(), &alpha).unwrap().holds);
    assert!(!evaluator.ccauses(&move_ag("I1", "I2"), 2, &vul(), &alpha).unwrap().holds);
    assert!(!evaluator.pcauses(&move_ag("I2", "I3"), 3, &vul(), &alpha).unwrap().holds);
}

#[test]
fn certainly_causes_in_the_shorter_scenario() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    assert!(evaluator.ccauses(&move_ag("I0", "I1"), 0, &vul(), &alpha2()).unwrap().holds);
}

#[test]
fn vacuous_certainly_causes_is_flagged() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    // comm alone can never make the robot vulnerable.
    let verdict = evaluator.ccauses(&comm_ag("I0"), 0, &vul(), &[comm_ag("I0")]).unwrap();
    assert!(verdict.holds);
    assert!(verdict.warnings.contains(&CauseWarning::Vacuous));
}

#[test]
fn candidate_outside_the_scenario_warns_but_evaluates() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let verdict = evaluator.pcauses(&move_ag("I2", "I3"), 0, &vul(), &alpha2()).unwrap();
    assert!(!verdict.holds);
    assert!(matches!(verdict.warnings[0], CauseWarning::NotInScenario(_)));
}

#[test]
fn nd_setting_validity() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    assert!(evaluator.nd_setting_valid(&alpha1(), &vul()).unwrap());
    assert!(!evaluator.nd_setting_valid(&[comm_ag("I0")], &vul()).unwrap());
    assert!(!evaluator.nd_setting_valid(&alpha1(), &vul().not()).unwrap());
}

#[test]
fn causes_is_false_at_or_beyond_the_scenario_time() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let s = sigma1();
    for ts in 4..8 {
        assert!(!evaluator.causes(&move_sys("I1", "I2", "Vul"), ts, &vul(), &s).unwrap());
    }
    assert!(!evaluator.causes(&move_sys("I1", "I2", "Vul"), -1, &vul(), &s).unwrap());
}

#[test]
fn eval_handles_quantifiers_and_constants() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let env = Default::default();

    // Some reaction makes the first move possible: I1 is risky, so both
    // Vul and NotVul are admissible.
    let phi = ndcausal_core::ExtendedFormula::Exists(
        vec![ndcausal_core::Variable::new("e", ndcausal_core::Sort::Reaction)],
        Box::new(ndcausal_core::ExtendedFormula::Poss(
            SystemAction::new("move", vec![obj("I0"), obj("I1")], ReactionTerm::var("e")),
            SituationTerm::S0,
        )),
    );
    assert!(evaluator.eval(&phi, &env).unwrap());
    assert!(!evaluator.eval(&ndcausal_core::ExtendedFormula::False, &env).unwrap());
}

#[test]
fn eval_rejects_unbound_variables_and_unground_situations() {
    let theory = robot_theory();
    let evaluator = Evaluator::new(&theory);
    let env = Default::default();
    let open = DynamicFormula::fluent("At", vec![ObjectTerm::var("x")]).restore(&SituationTerm::S0);
    assert!(matches!(
        evaluator.eval(&open, &env),
        Err(ndcausal_core::EvalError::UnboundVariable(_))
    ));
    let placeholder = vul().restore(&SituationTerm::Placeholder("now".into()));
    assert!(matches!(
        evaluator.eval(&placeholder, &env),
        Err(ndcausal_core::EvalError::UngroundSituation(_))
    ));
}

#[test]
fn tree_text_rendering_shows_the_branch_structure() {
    let theory = robot_theory();
    let tree = build_execution_tree(&theory, &alpha1(), &SituationTerm::S0).unwrap();
    let text = tree.render_text();
    // Root, one comm child, two move branches below it.
    assert!(text.starts_with("S0"));
    assert_eq!(text.matches("comm(I0,Succ)").count(), 1);
    assert_eq!(text.matches("move(I0,I1,Vul)").count(), 1);
    assert_eq!(text.matches("move(I0,I1,NotVul)").count(), 1);
    assert_eq!(text.matches("move(I2,I3,NotVul)").count(), 4);
}
