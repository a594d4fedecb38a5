//! Shared fixtures and oracle-side reduction builders for the integration
//! suites.

#![allow(dead_code)]

use ndcausal_core::formula::{DynamicFormula, ExtendedFormula, TimeOp};
use ndcausal_core::term::{
    AgentAction, ObjectTerm, ReactionTerm, SituationTerm, Sort, SystemAction, Term, Variable,
};
use ndcausal_core::Symbol;

pub fn obj(c: &str) -> ObjectTerm {
    ObjectTerm::constant(c)
}

pub fn move_sys(i: &str, j: &str, e: &str) -> SystemAction {
    SystemAction::new("move", vec![obj(i), obj(j)], ReactionTerm::constant(e))
}

pub fn comm_sys(i: &str, e: &str) -> SystemAction {
    SystemAction::new("comm", vec![obj(i)], ReactionTerm::constant(e))
}

pub fn move_ag(i: &str, j: &str) -> AgentAction {
    AgentAction::new("move", vec![obj(i), obj(j)])
}

pub fn comm_ag(i: &str) -> AgentAction {
    AgentAction::new("comm", vec![obj(i)])
}

pub fn vul() -> DynamicFormula {
    DynamicFormula::fluent("Vul", vec![])
}

pub fn sigma1() -> SituationTerm {
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

pub fn alpha1() -> Vec<AgentAction> {
    vec![comm_ag("I0"), move_ag("I0", "I1"), move_ag("I1", "I2"), move_ag("I2", "I3")]
}

pub fn alpha2() -> Vec<AgentAction> {
    vec![move_ag("I0", "I1"), move_ag("I1", "I2")]
}

/// A fresh variable name not occurring in the formula.
pub fn fresh_for(phi: &DynamicFormula, base: &str) -> Symbol {
    let mut names = std::collections::BTreeSet::new();
    names.extend(phi.free_variables().into_keys());
    for n in 1.. {
        let candidate = Symbol::from(format!("{base}{n}"));
        if !names.contains(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

/// The three-disjunct unfolding of an actual-cause atom over a successor
/// situation, built as a formula for oracle evaluation.
pub fn causes_unfolding(
    b: &SystemAction,
    ts: i64,
    effect: &DynamicFormula,
    a: &SystemAction,
    s: &SituationTerm,
) -> ExtendedFormula {
    let do_as = s.succ(a.clone());
    let at_s = effect.restore(s);
    let at_do = effect.restore(&do_as);
    let context = DynamicFormula::and(vec![
        DynamicFormula::Poss(a.clone()),
        DynamicFormula::After(a.clone(), Box::new(effect.clone())),
    ]);
    ExtendedFormula::Or(vec![
        ExtendedFormula::And(vec![
            ExtendedFormula::TimeCmp(TimeOp::Eq, ts, s.clone()),
            ExtendedFormula::Eq(Term::Act(Box::new(b.clone())), Term::Act(Box::new(a.clone()))),
            at_s.clone().not(),
            at_do.clone(),
        ]),
        ExtendedFormula::And(vec![
            ExtendedFormula::TimeCmp(TimeOp::Gt, ts, s.clone()),
            at_s.clone(),
            at_do.clone(),
            ExtendedFormula::Causes {
                action: b.clone(),
                ts,
                effect: Box::new(effect.clone()),
                sit: s.clone(),
            },
        ]),
        ExtendedFormula::And(vec![
            ExtendedFormula::TimeCmp(TimeOp::Gt, ts, s.clone()),
            at_s.not(),
            at_do,
            ExtendedFormula::Causes {
                action: b.clone(),
                ts,
                effect: Box::new(context),
                sit: s.clone(),
            },
        ]),
    ])
}

/// `∀e. Poss(αₙ(e), now) ⊃ φ[do(αₙ(e), now)]` as a suppressed condition.
pub fn peel_cond_universal(last: &AgentAction, phi: &DynamicFormula) -> DynamicFormula {
    let evar = fresh_for(phi, "q");
    let sys = last.with_reaction(ReactionTerm::Var(evar.clone()));
    DynamicFormula::forall(
        vec![Variable::new(evar, Sort::Reaction)],
        DynamicFormula::or(vec![
            DynamicFormula::Poss(sys.clone()).not(),
            DynamicFormula::After(sys, Box::new(phi.clone())),
        ]),
    )
}

/// `∃e. Poss(αₙ(e), now) ∧ φ[do(αₙ(e), now)]` as a suppressed condition.
pub fn peel_cond_existential(last: &AgentAction, phi: &DynamicFormula) -> DynamicFormula {
    let evar = fresh_for(phi, "q");
    let sys = last.with_reaction(ReactionTerm::Var(evar.clone()));
    DynamicFormula::exists(
        vec![Variable::new(evar, Sort::Reaction)],
        DynamicFormula::and(vec![
            DynamicFormula::Poss(sys.clone()),
            DynamicFormula::After(sys, Box::new(phi.clone())),
        ]),
    )
}

/// `¬φ ∨ ∃e. Causes(β(e), t, φ)`, the certainly-causes condition.
pub fn ccauses_cond(beta: &AgentAction, ts: i64, phi: &DynamicFormula) -> DynamicFormula {
    let evar = fresh_for(phi, "q");
    DynamicFormula::or(vec![
        phi.clone().not(),
        DynamicFormula::exists(
            vec![Variable::new(evar.clone(), Sort::Reaction)],
            DynamicFormula::Causes(
                beta.with_reaction(ReactionTerm::Var(evar)),
                ts,
                Box::new(phi.clone()),
            ),
        ),
    ])
}

/// `φ ∧ ∃e. Causes(β(e), t, φ)`, the possibly-causes condition.
pub fn pcauses_cond(beta: &AgentAction, ts: i64, phi: &DynamicFormula) -> DynamicFormula {
    let evar = fresh_for(phi, "q");
    DynamicFormula::and(vec![
        phi.clone(),
        DynamicFormula::exists(
            vec![Variable::new(evar.clone(), Sort::Reaction)],
            DynamicFormula::Causes(
                beta.with_reaction(ReactionTerm::Var(evar)),
                ts,
                Box::new(phi.clone()),
            ),
        ),
    ])
}
