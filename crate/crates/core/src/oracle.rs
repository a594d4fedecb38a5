//! Ground-truth semantics: progression-based state computation, execution
//! tree enumeration, and direct implementations of the cause relations.
//!
//! Everything here evaluates in the fixed finite closed-world model given by
//! the theory's initial state, so entailment questions become evaluation.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use thiserror::Error;

use crate::formula::{DynamicFormula, ExtendedFormula, TimeOp};
use crate::symbol::Symbol;
use crate::term::{
    AgentAction, ObjectTerm, ReactionTerm, SituationTerm, Sort, SystemAction, Term,
};
use crate::theory::{GroundAtom, NDBATheory};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    UnboundVariable(Symbol),
    #[error("situation is not ground: {0}")]
    UngroundSituation(String),
    #[error("undeclared action {0}")]
    UndeclaredAction(Symbol),
    #[error("undeclared fluent {0}")]
    UndeclaredFluent(Symbol),
    #[error("quantification over {0} is not supported")]
    UnsupportedQuantifier(String),
    #[error("dynamic construct {0} cannot appear in a state formula")]
    NotAStateFormula(&'static str),
}

/// Variable environment; values are ground terms.
pub type Env = BTreeMap<Symbol, Term>;

/// The set of ground fluent atoms true at a ground situation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FluentState {
    pub situation: SituationTerm,
    pub true_atoms: BTreeSet<GroundAtom>,
}

/// A fully resolved term, compared under unique names.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum GroundTerm {
    Obj(Symbol),
    React(Symbol),
    Act(Symbol, Vec<Symbol>, Symbol),
}

/// Warnings attached to a cause verdict.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CauseWarning {
    /// The candidate agent action does not occur in the scenario.
    NotInScenario(AgentAction),
    /// Universal verdict over zero effect-satisfying executions.
    Vacuous,
}

impl std::fmt::Display for CauseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CauseWarning::NotInScenario(a) => {
                write!(f, "candidate action {a} does not occur in the scenario")
            }
            CauseWarning::Vacuous => {
                write!(f, "no execution satisfies the effect; the verdict is vacuous")
            }
        }
    }
}

/// A boolean verdict plus any warnings raised while computing it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CauseVerdict {
    pub holds: bool,
    pub warnings: Vec<CauseWarning>,
}

/// Evaluator over one theory, memoizing fluent states per ground situation.
pub struct Evaluator<'a> {
    theory: &'a NDBATheory,
    states: RefCell<BTreeMap<SituationTerm, Rc<BTreeSet<GroundAtom>>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(theory: &'a NDBATheory) -> Self {
        Evaluator { theory, states: RefCell::new(BTreeMap::new()) }
    }

    pub fn theory(&self) -> &NDBATheory {
        self.theory
    }

    /// Folds successor-state axioms from the initial extension along the
    /// action chain of a ground situation.
    pub fn fluent_state(&self, s: &SituationTerm) -> Result<FluentState, EvalError> {
        Ok(FluentState { situation: s.clone(), true_atoms: (*self.state(s)?).clone() })
    }

    fn state(&self, s: &SituationTerm) -> Result<Rc<BTreeSet<GroundAtom>>, EvalError> {
        if let Some(cached) = self.states.borrow().get(s) {
            return Ok(cached.clone());
        }
        let computed = match s {
            SituationTerm::S0 => self.theory.initial_state(),
            SituationTerm::Placeholder(p) => {
                return Err(EvalError::UngroundSituation(p.to_string()))
            }
            SituationTerm::Do(action, prior) => {
                if !action.is_ground() {
                    return Err(EvalError::UngroundSituation(s.to_string()));
                }
                if self.theory.action(&action.name).is_none() {
                    return Err(EvalError::UndeclaredAction(action.name.clone()));
                }
                let prior_state = self.state(prior)?;
                let mut next = BTreeSet::new();
                for fluent in &self.theory.fluents {
                    let ssa = self
                        .theory
                        .ssa(&fluent.name)
                        .ok_or_else(|| EvalError::UndeclaredFluent(fluent.name.clone()))?;
                    for args in self.theory.ground_tuples(&fluent.param_sorts) {
                        let mut env = Env::new();
                        for ((param, _), value) in ssa.params.iter().zip(&args) {
                            env.insert(param.clone(), Term::Obj(ObjectTerm::Const(value.clone())));
                        }
                        env.insert(ssa.action_var.clone(), Term::Act(action.clone()));
                        if self.eval_state(&prior_state, &ssa.body, &env)? {
                            next.insert(GroundAtom { name: fluent.name.clone(), args });
                        }
                    }
                }
                next
            }
        };
        let rc = Rc::new(computed);
        self.states.borrow_mut().insert(s.clone(), rc.clone());
        Ok(rc)
    }

    fn resolve_object(&self, t: &ObjectTerm, env: &Env) -> Result<Symbol, EvalError> {
        match t {
            ObjectTerm::Const(c) => Ok(c.clone()),
            ObjectTerm::Var(v) => match env.get(v) {
                Some(Term::Obj(ObjectTerm::Const(c))) => Ok(c.clone()),
                _ => Err(EvalError::UnboundVariable(v.clone())),
            },
        }
    }

    fn resolve_reaction(&self, t: &ReactionTerm, env: &Env) -> Result<Symbol, EvalError> {
        match t {
            ReactionTerm::Const(c) => Ok(c.clone()),
            ReactionTerm::Var(v) => match env.get(v) {
                Some(Term::React(ReactionTerm::Const(c))) => Ok(c.clone()),
                _ => Err(EvalError::UnboundVariable(v.clone())),
            },
        }
    }

    fn resolve_system_action(&self, a: &SystemAction, env: &Env) -> Result<SystemAction, EvalError> {
        let args = a
            .args
            .iter()
            .map(|t| self.resolve_object(t, env).map(ObjectTerm::Const))
            .collect::<Result<Vec<_>, _>>()?;
        let reaction = ReactionTerm::Const(self.resolve_reaction(&a.reaction, env)?);
        Ok(SystemAction { name: a.name.clone(), args, reaction })
    }

    fn resolve_agent_action(&self, a: &AgentAction, env: &Env) -> Result<AgentAction, EvalError> {
        let args = a
            .args
            .iter()
            .map(|t| self.resolve_object(t, env).map(ObjectTerm::Const))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AgentAction { name: a.name.clone(), args })
    }

    fn resolve_situation(&self, s: &SituationTerm, env: &Env) -> Result<SituationTerm, EvalError> {
        match s {
            SituationTerm::S0 => Ok(SituationTerm::S0),
            SituationTerm::Placeholder(p) => Err(EvalError::UngroundSituation(p.to_string())),
            SituationTerm::Do(a, prior) => Ok(SituationTerm::Do(
                Box::new(self.resolve_system_action(a, env)?),
                Box::new(self.resolve_situation(prior, env)?),
            )),
        }
    }

    fn resolve_term(&self, t: &Term, env: &Env) -> Result<GroundTerm, EvalError> {
        match t {
            Term::Obj(o) => Ok(GroundTerm::Obj(self.resolve_object(o, env)?)),
            Term::React(r) => Ok(GroundTerm::React(self.resolve_reaction(r, env)?)),
            Term::ActVar(v) => match env.get(v) {
                Some(Term::Act(a)) if a.is_ground() => Ok(GroundTerm::Act(
                    a.name.clone(),
                    a.args
                        .iter()
                        .map(|x| match x {
                            ObjectTerm::Const(c) => c.clone(),
                            ObjectTerm::Var(_) => unreachable!("ground action"),
                        })
                        .collect(),
                    match &a.reaction {
                        ReactionTerm::Const(c) => c.clone(),
                        ReactionTerm::Var(_) => unreachable!("ground action"),
                    },
                )),
                _ => Err(EvalError::UnboundVariable(v.clone())),
            },
            Term::Act(a) => {
                let resolved = self.resolve_system_action(a, env)?;
                Ok(GroundTerm::Act(
                    resolved.name.clone(),
                    resolved
                        .args
                        .iter()
                        .map(|x| match x {
                            ObjectTerm::Const(c) => c.clone(),
                            ObjectTerm::Var(_) => unreachable!("resolved"),
                        })
                        .collect(),
                    match resolved.reaction {
                        ReactionTerm::Const(c) => c,
                        ReactionTerm::Var(_) => unreachable!("resolved"),
                    },
                ))
            }
        }
    }

    fn quantifier_domain(&self, sort: &Sort) -> Result<Vec<Term>, EvalError> {
        match sort {
            Sort::Object(name) => Ok(self
                .theory
                .object_domain(name)
                .into_iter()
                .map(|c| Term::Obj(ObjectTerm::Const(c)))
                .collect()),
            Sort::Reaction => Ok(self
                .theory
                .reaction_domain()
                .into_iter()
                .map(|c| Term::React(ReactionTerm::Const(c)))
                .collect()),
            Sort::Action => Err(EvalError::UnsupportedQuantifier("actions".to_string())),
        }
    }

    /// Expands quantified variables over their finite domains, short-
    /// circuiting once any assignment evaluates to `stop_on`.
    fn expand(
        &self,
        vars: &[crate::term::Variable],
        env: &Env,
        stop_on: bool,
        eval: &mut dyn FnMut(&Evaluator<'a>, &Env) -> Result<bool, EvalError>,
    ) -> Result<bool, EvalError> {
        match vars.split_first() {
            None => eval(self, env),
            Some((v, rest)) => {
                for value in self.quantifier_domain(&v.sort)? {
                    let mut inner = env.clone();
                    inner.insert(v.name.clone(), value);
                    if self.expand(rest, &inner, stop_on, eval)? == stop_on {
                        return Ok(stop_on);
                    }
                }
                Ok(!stop_on)
            }
        }
    }

    /// Evaluates a state formula (no Poss/After/time/Causes) against a set of
    /// true ground atoms. Used for successor-state and precondition bodies.
    fn eval_state(
        &self,
        state: &BTreeSet<GroundAtom>,
        f: &DynamicFormula,
        env: &Env,
    ) -> Result<bool, EvalError> {
        match f {
            DynamicFormula::True => Ok(true),
            DynamicFormula::False => Ok(false),
            DynamicFormula::Fluent(name, args) => {
                let args = args
                    .iter()
                    .map(|a| self.resolve_object(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(state.contains(&GroundAtom { name: name.clone(), args }))
            }
            DynamicFormula::Rigid(name, args) => {
                let args = args
                    .iter()
                    .map(|a| self.resolve_object(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.theory.rigid_holds(name, &args))
            }
            DynamicFormula::Not(p) => Ok(!self.eval_state(state, p, env)?),
            DynamicFormula::And(ps) => {
                for p in ps {
                    if !self.eval_state(state, p, env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            DynamicFormula::Or(ps) => {
                for p in ps {
                    if self.eval_state(state, p, env)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            DynamicFormula::Exists(vs, p) => self.expand(
                vs,
                env,
                true,
                &mut |this, env| this.eval_state(state, p, env),
            ),
            DynamicFormula::Forall(vs, p) => self.expand(
                vs,
                env,
                false,
                &mut |this, env| this.eval_state(state, p, env),
            ),
            DynamicFormula::Eq(l, r) => {
                Ok(self.resolve_term(l, env)? == self.resolve_term(r, env)?)
            }
            DynamicFormula::Poss(_) => Err(EvalError::NotAStateFormula("Poss")),
            DynamicFormula::After(..) => Err(EvalError::NotAStateFormula("After")),
            DynamicFormula::TimeCmp(..) => Err(EvalError::NotAStateFormula("time")),
            DynamicFormula::Causes(..) => Err(EvalError::NotAStateFormula("Causes")),
        }
    }

    /// Whether the ground system action is possible in the given state.
    fn poss_in_state(
        &self,
        state: &BTreeSet<GroundAtom>,
        action: &SystemAction,
    ) -> Result<bool, EvalError> {
        debug_assert!(action.is_ground());
        let decl = self
            .theory
            .action(&action.name)
            .ok_or_else(|| EvalError::UndeclaredAction(action.name.clone()))?;
        let mut env = Env::new();
        for ((param, _), value) in decl.params.iter().zip(&action.args) {
            env.insert(param.clone(), Term::Obj(value.clone()));
        }
        env.insert(decl.reaction_var.clone(), Term::React(action.reaction.clone()));
        self.eval_state(state, &decl.poss_sys, &env)
    }

    /// Whether the ground agent action's own precondition holds.
    pub fn poss_ag(&self, action: &AgentAction, s: &SituationTerm) -> Result<bool, EvalError> {
        let decl = self
            .theory
            .action(&action.name)
            .ok_or_else(|| EvalError::UndeclaredAction(action.name.clone()))?;
        let state = self.state(s)?;
        let mut env = Env::new();
        for ((param, _), value) in decl.params.iter().zip(&action.args) {
            env.insert(param.clone(), Term::Obj(value.clone()));
        }
        self.eval_state(&state, &decl.poss_ag, &env)
    }

    /// `Poss(a, s)` for a ground system action and ground situation.
    pub fn poss(&self, action: &SystemAction, s: &SituationTerm) -> Result<bool, EvalError> {
        let state = self.state(s)?;
        self.poss_in_state(&state, action)
    }

    /// Every action along the chain was possible where it occurred.
    pub fn executable(&self, s: &SituationTerm) -> Result<bool, EvalError> {
        let (actions, base) = s.decompose();
        if base != &SituationTerm::S0 {
            return Err(EvalError::UngroundSituation(s.to_string()));
        }
        let mut cur = SituationTerm::S0;
        for a in actions {
            if !self.poss(a, &cur)? {
                return Ok(false);
            }
            cur = cur.succ(a.clone());
        }
        Ok(true)
    }

    /// Exactly the situations reachable by executing the agent action
    /// sequence from `s`, in reaction-declaration order.
    pub fn enumerate_executions(
        &self,
        alpha: &[AgentAction],
        s: &SituationTerm,
    ) -> Result<Vec<SituationTerm>, EvalError> {
        match alpha.split_first() {
            None => Ok(vec![s.clone()]),
            Some((head, rest)) => {
                if self.theory.action(&head.name).is_none() {
                    return Err(EvalError::UndeclaredAction(head.name.clone()));
                }
                let state = self.state(s)?;
                let mut out = Vec::new();
                for reaction in self.theory.candidate_reactions(&head.name) {
                    let sys = head.with_reaction(ReactionTerm::Const(reaction));
                    if self.poss_in_state(&state, &sys)? {
                        out.extend(self.enumerate_executions(rest, &s.succ(sys))?);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Evaluates a closed-under-env extended formula in the finite model.
    pub fn eval(&self, f: &ExtendedFormula, env: &Env) -> Result<bool, EvalError> {
        match f {
            ExtendedFormula::True => Ok(true),
            ExtendedFormula::False => Ok(false),
            ExtendedFormula::Fluent(name, args, sit) => {
                if self.theory.fluent(name).is_none() {
                    return Err(EvalError::UndeclaredFluent(name.clone()));
                }
                let args = args
                    .iter()
                    .map(|a| self.resolve_object(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                let sit = self.resolve_situation(sit, env)?;
                Ok(self.state(&sit)?.contains(&GroundAtom { name: name.clone(), args }))
            }
            ExtendedFormula::Rigid(name, args) => {
                let args = args
                    .iter()
                    .map(|a| self.resolve_object(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.theory.rigid_holds(name, &args))
            }
            ExtendedFormula::Poss(a, sit) => {
                let action = self.resolve_system_action(a, env)?;
                let sit = self.resolve_situation(sit, env)?;
                self.poss(&action, &sit)
            }
            ExtendedFormula::Not(p) => Ok(!self.eval(p, env)?),
            ExtendedFormula::And(ps) => {
                for p in ps {
                    if !self.eval(p, env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            ExtendedFormula::Or(ps) => {
                for p in ps {
                    if self.eval(p, env)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            ExtendedFormula::Exists(vs, p) => self.expand(
                vs,
                env,
                true,
                &mut |this, env| this.eval(p, env),
            ),
            ExtendedFormula::Forall(vs, p) => self.expand(
                vs,
                env,
                false,
                &mut |this, env| this.eval(p, env),
            ),
            ExtendedFormula::Eq(l, r) => {
                Ok(self.resolve_term(l, env)? == self.resolve_term(r, env)?)
            }
            ExtendedFormula::TimeCmp(op, rhs, sit) => {
                let sit = self.resolve_situation(sit, env)?;
                let t = sit
                    .timestamp()
                    .ok_or_else(|| EvalError::UngroundSituation(sit.to_string()))?;
                Ok(match op {
                    TimeOp::Eq => t == *rhs,
                    TimeOp::Gt => t > *rhs,
                })
            }
            ExtendedFormula::Causes { action, ts, effect, sit } => {
                let action = self.resolve_system_action(action, env)?;
                let sit = self.resolve_situation(sit, env)?;
                self.causes_env(&action, *ts, effect, &sit, env)
            }
            ExtendedFormula::CAfter { seq, cond, sit } => {
                let seq = seq
                    .iter()
                    .map(|a| self.resolve_agent_action(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                let sit = self.resolve_situation(sit, env)?;
                self.eval_cafter_env(&seq, cond, &sit, env)
            }
            ExtendedFormula::PAfter { seq, cond, sit } => {
                let seq = seq
                    .iter()
                    .map(|a| self.resolve_agent_action(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                let sit = self.resolve_situation(sit, env)?;
                self.eval_pafter_env(&seq, cond, &sit, env)
            }
            ExtendedFormula::CCauses { action, ts, effect, seq } => {
                let action = self.resolve_agent_action(action, env)?;
                let seq = seq
                    .iter()
                    .map(|a| self.resolve_agent_action(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.ccauses_env(&action, *ts, effect, &seq, env)?.holds)
            }
            ExtendedFormula::PCauses { action, ts, effect, seq } => {
                let action = self.resolve_agent_action(action, env)?;
                let seq = seq
                    .iter()
                    .map(|a| self.resolve_agent_action(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.pcauses_env(&action, *ts, effect, &seq, env)?.holds)
            }
        }
    }

    /// Evaluates a situation-suppressed condition at a ground situation.
    pub fn eval_at(
        &self,
        f: &DynamicFormula,
        s: &SituationTerm,
        env: &Env,
    ) -> Result<bool, EvalError> {
        self.eval(&f.restore(s), env)
    }

    /// Truth values of the effect at every prefix of the scenario, from the
    /// empty prefix up to the full chain.
    fn effect_profile(
        &self,
        effect: &DynamicFormula,
        s: &SituationTerm,
        env: &Env,
    ) -> Result<Vec<bool>, EvalError> {
        let (actions, base) = s.decompose();
        if base != &SituationTerm::S0 {
            return Err(EvalError::UngroundSituation(s.to_string()));
        }
        let mut vals = Vec::with_capacity(actions.len() + 1);
        let mut cur = SituationTerm::S0;
        vals.push(self.eval_at(effect, &cur, env)?);
        for a in actions {
            cur = cur.succ((*a).clone());
            vals.push(self.eval_at(effect, &cur, env)?);
        }
        Ok(vals)
    }

    /// The unique primary cause of the effect in the scenario, if any: the
    /// action that flipped the effect to true with no later falsification.
    fn primary_cause(
        &self,
        effect: &DynamicFormula,
        s: &SituationTerm,
        env: &Env,
    ) -> Result<Option<(SystemAction, i64)>, EvalError> {
        let vals = self.effect_profile(effect, s, env)?;
        let n = vals.len() - 1;
        if n == 0 || !vals[n] {
            return Ok(None);
        }
        // The flip point is the last prefix where the effect is false.
        match (0..n).rev().find(|&k| !vals[k]) {
            None => Ok(None),
            Some(k) => {
                let (actions, _) = s.decompose();
                Ok(Some((actions[k].clone(), k as i64)))
            }
        }
    }

    pub fn causes_directly(
        &self,
        action: &SystemAction,
        ts: i64,
        effect: &DynamicFormula,
        s: &SituationTerm,
    ) -> Result<bool, EvalError> {
        Ok(self
            .primary_cause(effect, s, &Env::new())?
            .is_some_and(|(a, t)| &a == action && t == ts))
    }

    pub fn causes(
        &self,
        action: &SystemAction,
        ts: i64,
        effect: &DynamicFormula,
        s: &SituationTerm,
    ) -> Result<bool, EvalError> {
        self.causes_env(action, ts, effect, s, &Env::new())
    }

    /// Least-fixpoint actual cause, by structural recursion on strict
    /// prefixes of the scenario.
    fn causes_env(
        &self,
        action: &SystemAction,
        ts: i64,
        effect: &DynamicFormula,
        s: &SituationTerm,
        env: &Env,
    ) -> Result<bool, EvalError> {
        match self.primary_cause(effect, s, env)? {
            None => Ok(false),
            Some((direct, direct_ts)) => {
                if &direct == action && direct_ts == ts {
                    return Ok(true);
                }
                // Earlier actions may have contributed the preconditions and
                // context conditions of the primary cause.
                let prefix = s
                    .prefix(direct_ts as usize)
                    .expect("primary cause timestamp within scenario");
                let context = DynamicFormula::and(vec![
                    DynamicFormula::Poss(direct.clone()),
                    DynamicFormula::After(direct, Box::new(effect.clone())),
                ]);
                self.causes_env(action, ts, &context, &prefix, env)
            }
        }
    }

    pub fn eval_pafter(
        &self,
        alpha: &[AgentAction],
        cond: &DynamicFormula,
        s: &SituationTerm,
    ) -> Result<bool, EvalError> {
        self.eval_pafter_env(alpha, cond, s, &Env::new())
    }

    fn eval_pafter_env(
        &self,
        alpha: &[AgentAction],
        cond: &DynamicFormula,
        s: &SituationTerm,
        env: &Env,
    ) -> Result<bool, EvalError> {
        for leaf in self.enumerate_executions(alpha, s)? {
            if self.eval_at(cond, &leaf, env)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn eval_cafter(
        &self,
        alpha: &[AgentAction],
        cond: &DynamicFormula,
        s: &SituationTerm,
    ) -> Result<bool, EvalError> {
        self.eval_cafter_env(alpha, cond, s, &Env::new())
    }

    fn eval_cafter_env(
        &self,
        alpha: &[AgentAction],
        cond: &DynamicFormula,
        s: &SituationTerm,
        env: &Env,
    ) -> Result<bool, EvalError> {
        for leaf in self.enumerate_executions(alpha, s)? {
            if !self.eval_at(cond, &leaf, env)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn pcauses(
        &self,
        beta: &AgentAction,
        ts: i64,
        effect: &DynamicFormula,
        alpha: &[AgentAction],
    ) -> Result<CauseVerdict, EvalError> {
        self.pcauses_env(beta, ts, effect, alpha, &Env::new())
    }

    fn pcauses_env(
        &self,
        beta: &AgentAction,
        ts: i64,
        effect: &DynamicFormula,
        alpha: &[AgentAction],
        env: &Env,
    ) -> Result<CauseVerdict, EvalError> {
        let mut warnings = Vec::new();
        if !alpha.contains(beta) {
            warnings.push(CauseWarning::NotInScenario(beta.clone()));
        }
        let mut holds = false;
        for leaf in self.enumerate_executions(alpha, &SituationTerm::S0)? {
            if self.eval_at(effect, &leaf, env)? && self.some_reaction_causes(beta, ts, effect, &leaf, env)? {
                holds = true;
                break;
            }
        }
        Ok(CauseVerdict { holds, warnings })
    }

    pub fn ccauses(
        &self,
        beta: &AgentAction,
        ts: i64,
        effect: &DynamicFormula,
        alpha: &[AgentAction],
    ) -> Result<CauseVerdict, EvalError> {
        self.ccauses_env(beta, ts, effect, alpha, &Env::new())
    }

    fn ccauses_env(
        &self,
        beta: &AgentAction,
        ts: i64,
        effect: &DynamicFormula,
        alpha: &[AgentAction],
        env: &Env,
    ) -> Result<CauseVerdict, EvalError> {
        let mut warnings = Vec::new();
        if !alpha.contains(beta) {
            warnings.push(CauseWarning::NotInScenario(beta.clone()));
        }
        let mut satisfying = 0usize;
        let mut holds = true;
        for leaf in self.enumerate_executions(alpha, &SituationTerm::S0)? {
            if self.eval_at(effect, &leaf, env)? {
                satisfying += 1;
                if !self.some_reaction_causes(beta, ts, effect, &leaf, env)? {
                    holds = false;
                    break;
                }
            }
        }
        if satisfying == 0 && holds {
            warnings.push(CauseWarning::Vacuous);
        }
        Ok(CauseVerdict { holds, warnings })
    }

    fn some_reaction_causes(
        &self,
        beta: &AgentAction,
        ts: i64,
        effect: &DynamicFormula,
        s: &SituationTerm,
        env: &Env,
    ) -> Result<bool, EvalError> {
        for reaction in self.theory.candidate_reactions(&beta.name) {
            let sys = beta.with_reaction(ReactionTerm::Const(reaction));
            if self.causes_env(&sys, ts, effect, s, env)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// A nondeterministic causal setting requires the effect false initially
    /// and possibly true after the scenario.
    pub fn nd_setting_valid(
        &self,
        alpha: &[AgentAction],
        effect: &DynamicFormula,
    ) -> Result<bool, EvalError> {
        Ok(!self.eval_at(effect, &SituationTerm::S0, &Env::new())?
            && self.eval_pafter(alpha, effect, &SituationTerm::S0)?)
    }
}
