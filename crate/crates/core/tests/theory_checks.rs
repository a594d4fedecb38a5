//! Well-formedness findings and the bounded reaction-requirement checks,
//! including the mutation cases.

mod common;

use ndcausal_core::dsl::parse_domain;
use ndcausal_core::reqcheck::{check_reaction_requirements, ReqCheckError};
use ndcausal_core::theory::{validate_theory, FindingCode};
use ndcausal_core::{robot_theory, DynamicFormula, ROBOT_DOMAIN};

#[test]
fn bundled_domain_validates_cleanly_and_deterministically() {
    let theory = robot_theory();
    let first = validate_theory(&theory);
    assert!(first.is_empty(), "{first:?}");
    assert_eq!(first, validate_theory(&theory));
}

#[test]
fn missing_ssa_is_reported() {
    let mut theory = robot_theory();
    theory.ssas.retain(|s| s.fluent.as_str() != "Vul");
    let findings = validate_theory(&theory);
    assert!(findings
        .iter()
        .any(|f| f.code == FindingCode::MissingSSA && f.witness.contains(&"Vul".to_string())));
}

#[test]
fn reaction_variable_in_agent_precondition_is_reported() {
    let mut theory = robot_theory();
    let poss_sys = theory.actions[0].poss_sys.clone();
    theory.actions[0].poss_ag = poss_sys;
    let findings = validate_theory(&theory);
    assert!(findings.iter().any(|f| f.code == FindingCode::ReactionInAgentPrecondition));
}

#[test]
fn arity_and_declaration_errors_are_reported() {
    let text = ROBOT_DOMAIN.replace("init { At(I0) Risky(I1) Risky(I2) }", "init { At(I0, I1) }");
    assert!(parse_domain(&text).is_err() || {
        let theory = parse_domain(&text).unwrap();
        validate_theory(&theory).iter().any(|f| f.code == FindingCode::ArityMismatch)
    });
}

#[test]
fn reaction_constant_outside_the_declared_set_is_reported() {
    // comm's precondition pinning e to a reaction declared only for move.
    let text = ROBOT_DOMAIN.replace("~Vul() & ~Risky(i) & e = Succ", "~Vul() & ~Risky(i) & e = Vul");
    let theory = parse_domain(&text).expect("still parses");
    let findings = validate_theory(&theory);
    assert!(findings
        .iter()
        .any(|f| f.code == FindingCode::ReactionNotDeclaredForAction));
}

#[test]
fn depth_must_be_positive() {
    let theory = robot_theory();
    assert!(matches!(
        check_reaction_requirements(&theory, 0),
        Err(ReqCheckError::DepthNonPositive(0))
    ));
    assert!(matches!(
        check_reaction_requirements(&theory, -3),
        Err(ReqCheckError::DepthNonPositive(-3))
    ));
}

#[test]
fn reaction_existence_violation_is_found() {
    // Restrict move so that no reaction is admissible on a non-risky target,
    // while the agent precondition still holds: existence fails.
    let text = ROBOT_DOMAIN.replace(
        "& (~Risky(j) -> e = NotVul)",
        "& ~Risky(j) & e = NotVul & Risky(j)",
    );
    let theory = parse_domain(&text).expect("mutated domain parses");
    assert!(validate_theory(&theory).is_empty());
    let report = check_reaction_requirements(&theory, 4).unwrap();
    assert!(!report.passed());
    assert!(!report.existence.is_empty(), "{report}");
    // The witness names a move instance.
    assert!(report.existence.iter().any(|c| c.action.starts_with("move(")));
}

#[test]
fn reaction_independence_violation_is_found() {
    // Drop the agent-precondition conjunct from the system axiom and let
    // e = Vul unconditionally: Poss holds where the agent precondition fails.
    let mut theory = robot_theory();
    let action = theory.actions.iter_mut().find(|a| a.name.as_str() == "move").unwrap();
    action.poss_sys = DynamicFormula::Eq(
        ndcausal_core::Term::React(ndcausal_core::ReactionTerm::var("e")),
        ndcausal_core::Term::React(ndcausal_core::ReactionTerm::constant("Vul")),
    );
    assert!(validate_theory(&theory).is_empty());
    let report = check_reaction_requirements(&theory, 2).unwrap();
    assert!(!report.passed());
    assert!(!report.independence.is_empty(), "{report}");
}

#[test]
fn monotone_in_depth_on_the_bundled_domain() {
    let theory = robot_theory();
    let at4 = check_reaction_requirements(&theory, 4).unwrap();
    assert!(at4.passed());
    for d in 1..=3 {
        assert!(check_reaction_requirements(&theory, d).unwrap().passed());
    }
    // Deeper searches visit at least as many situations.
    let at2 = check_reaction_requirements(&theory, 2).unwrap();
    assert!(at4.situations_checked >= at2.situations_checked);
}

#[test]
fn ill_sorted_arguments_are_reported() {
    // A location constant where the agent precondition expects one is fine;
    // swapping a fluent argument for a constant of another sort is not.
    let text = "domain d {
      sorts { Loc, Item }
      objects { L1, L2 : Loc; X1 : Item }
      rigid Near/2 { (L1, L2) }
      fluent Holding(Item)
      fluent At(Loc)
      action grab(i: Item) {
        reactions { Ok }
        poss_ag: At(L1)
        poss: At(L1) & e = Ok
      }
      ssa Holding(i: Item): a = grab(i, Ok) | Holding(i)
      ssa At(l: Loc): At(l)
      init { At(L1) }
    }";
    let theory = parse_domain(text).expect("parses");
    assert!(validate_theory(&theory).is_empty());

    let mut broken = theory.clone();
    // Holding applied to a location.
    broken.ssas[0].body = DynamicFormula::Or(vec![
        broken.ssas[0].body.clone(),
        DynamicFormula::fluent("Holding", vec![ndcausal_core::ObjectTerm::constant("L1")]),
    ]);
    let findings = validate_theory(&broken);
    assert!(
        findings.iter().any(|f| f.code == FindingCode::SortMismatch),
        "{findings:?}"
    );
}
