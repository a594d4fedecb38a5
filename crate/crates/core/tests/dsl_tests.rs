//! Parsing, printing and diagnostics for the domain and query languages.

mod common;

use common::*;
use ndcausal_core::dsl::{parse_domain, parse_query, print_domain, print_query};
use ndcausal_core::{robot_theory, CausalQuery, DynamicFormula, SituationTerm, ROBOT_DOMAIN};

#[test]
fn robot_domain_round_trips() {
    let first = parse_domain(ROBOT_DOMAIN).expect("robot domain parses");
    let printed = print_domain(&first);
    let second = parse_domain(&printed).expect("printed domain parses");
    assert_eq!(first, second);
    // Printing is deterministic.
    assert_eq!(print_domain(&second), printed);
}

#[test]
fn empty_input_reports_a_missing_domain() {
    let err = parse_domain("").unwrap_err();
    assert!(err[0].message.contains("domain"), "{:?}", err[0]);
}

#[test]
fn ssa_for_an_undeclared_fluent_is_diagnosed_with_a_span() {
    let text = "domain d {\n  sorts { Loc }\n  objects { I0 : Loc }\n  ssa Vul(): true\n}";
    let err = parse_domain(text).unwrap_err();
    let diag = err.iter().find(|d| d.message.contains("undeclared fluent Vul")).unwrap();
    assert_eq!(diag.span.line, 4);
}

#[test]
fn diagnostics_are_ordered_by_span() {
    let text = "domain d {\n  sorts { Loc }\n  objects { I0 : Loc }\n  ssa A(): true\n  ssa B(): true\n}";
    let err = parse_domain(text).unwrap_err();
    assert!(err.len() >= 2);
    for pair in err.windows(2) {
        assert!(pair[0].span <= pair[1].span);
    }
}

#[test]
fn unknown_identifiers_in_formulas_are_diagnosed() {
    let text = "domain d {\n  sorts { Loc }\n  objects { I0 : Loc }\n  fluent F(Loc)\n  action act(i: Loc) {\n    reactions { R }\n    poss_ag: G(i)\n    poss: true\n  }\n  ssa F(j: Loc): F(j)\n}";
    let err = parse_domain(text).unwrap_err();
    assert!(err.iter().any(|d| d.message.contains("undeclared fluent or rigid relation G")));
}

#[test]
fn query_examples_from_the_surface_syntax() {
    let theory = robot_theory();

    let q = parse_query(
        &theory,
        "ccauses move(I0,I1) @ 0 effect Vul() scenario [move(I0,I1), move(I1,I2)]",
    )
    .expect("ccauses query parses");
    assert_eq!(
        q,
        CausalQuery::CCauses { action: move_ag("I0", "I1"), ts: 0, effect: vul(), scenario: alpha2() }
    );

    let q = parse_query(
        &theory,
        "causes move(I1,I2,Vul) @ 2 effect Vul() in do([comm(I0,Succ), move(I0,I1,NotVul), move(I1,I2,Vul), move(I2,I3,NotVul)], S0)",
    )
    .expect("causes query parses");
    assert_eq!(
        q,
        CausalQuery::Causes {
            action: move_sys("I1", "I2", "Vul"),
            ts: 2,
            effect: vul(),
            scenario: sigma1()
        }
    );

    let q = parse_query(&theory, "pafter [comm(I0)] effect Vul()").expect("pafter query parses");
    assert_eq!(
        q,
        CausalQuery::PAfter { seq: vec![comm_ag("I0")], effect: vul(), sit: SituationTerm::S0 }
    );
}

#[test]
fn bare_fluent_names_parse_as_atoms() {
    let theory = robot_theory();
    let q = parse_query(&theory, "pafter [comm(I0)] effect Vul").unwrap();
    assert_eq!(
        q,
        CausalQuery::PAfter { seq: vec![comm_ag("I0")], effect: vul(), sit: SituationTerm::S0 }
    );
}

#[test]
fn query_print_parse_round_trip() {
    let theory = robot_theory();
    let queries = vec![
        CausalQuery::CCauses { action: move_ag("I0", "I1"), ts: 0, effect: vul(), scenario: alpha2() },
        CausalQuery::PCauses {
            action: move_ag("I1", "I2"),
            ts: 2,
            effect: DynamicFormula::and(vec![vul(), DynamicFormula::fluent("At", vec![obj("I3")])]),
            scenario: alpha1(),
        },
        CausalQuery::Causes {
            action: move_sys("I1", "I2", "Vul"),
            ts: 2,
            effect: vul(),
            scenario: sigma1(),
        },
        CausalQuery::CausesDirectly {
            action: move_sys("I1", "I2", "Vul"),
            ts: 2,
            effect: vul(),
            scenario: sigma1(),
        },
        CausalQuery::CAfter {
            seq: alpha1(),
            effect: vul().not(),
            sit: SituationTerm::S0.succ(comm_sys("I0", "Succ")),
        },
        CausalQuery::PAfter { seq: vec![], effect: vul(), sit: SituationTerm::S0 },
    ];
    for q in queries {
        let text = print_query(&q);
        let parsed = parse_query(&theory, &text)
            .unwrap_or_else(|d| panic!("{text}: {:?}", d.first()));
        assert_eq!(parsed, q, "{text}");
        assert_eq!(print_query(&parsed), text);
    }
}

#[test]
fn formula_surface_syntax_lowering() {
    let theory = robot_theory();
    // Implication and disjunction lower onto the not/or connectives.
    let q = parse_query(&theory, "pafter [] effect Vul -> At(I0) | Risky(I1)").unwrap();
    let CausalQuery::PAfter { effect, .. } = q else { panic!() };
    let expected = DynamicFormula::or(vec![
        vul().not(),
        DynamicFormula::Or(vec![
            DynamicFormula::fluent("At", vec![obj("I0")]),
            DynamicFormula::fluent("Risky", vec![obj("I1")]),
        ]),
    ]);
    assert_eq!(effect, expected);

    // Quantifier, equality and time atoms.
    let q = parse_query(
        &theory,
        "pafter [] effect exists x: Loc. At(x) & Poss(move(x, I1, NotVul)) & time = 0",
    )
    .unwrap();
    let CausalQuery::PAfter { effect, .. } = q else { panic!() };
    assert!(effect.to_string().contains("exists x:Loc"));
}

#[test]
fn malformed_queries_are_rejected() {
    let theory = robot_theory();
    for bad in [
        "",
        "causes",
        "ccauses move(I0) @ 0 effect Vul scenario [move(I0,I1)]",
        "causes move(I0,I1) @ 0 effect Vul in S0",
        "pafter [move(I0,I1)] effect Unknown",
        "ccauses move(I0,I1) @ 0 effect Vul scenario [move(I0,I1)] trailing",
        "cafter [comm(I0)] effect Vul in do([comm(I0)], S0)",
    ] {
        assert!(parse_query(&theory, bad).is_err(), "{bad:?} should not parse");
    }
}

#[test]
fn lexical_errors_never_panic() {
    for bad in ["domain d { $ }", "domain d { \u{1F600} }", "domain", "}{", "# only a comment"] {
        let _ = parse_domain(bad);
    }
}
