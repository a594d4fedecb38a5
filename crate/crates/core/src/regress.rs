//! The one-step regression operator, its extension to the cause atoms, the
//! fixpoint driver with step traces, and the regression-theorem cross-check.

use std::cell::Cell;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{DynamicFormula, ExtendedFormula, FormulaError};
use crate::oracle::{Env, EvalError, Evaluator};
use crate::query::CausalQuery;
use crate::simplify::{eval_initial, simplify};
use crate::symbol::Symbol;
use crate::term::{
    AgentAction, Binding, ReactionTerm, SituationTerm, Sort, SystemAction, Term,
    Variable,
};
use crate::theory::NDBATheory;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegressError {
    #[error("formula is not extended regressable: {0}")]
    NotRegressable(String),
    #[error("no successor-state axiom for fluent {0}")]
    UnknownFluent(Symbol),
    #[error("no precondition axiom for action {0}")]
    UnknownAction(Symbol),
    #[error("regression exceeded the step budget of {budget}")]
    StepBudgetExceeded { budget: usize },
    #[error("regression produced a malformed intermediate: {0}")]
    Malformed(#[from] FormulaError),
    #[error("fixpoint is not decided by the initial theory: {0}")]
    ImpureFixpoint(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Rule applied by one regression step, at the outermost applicable
/// positions.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum RegressionRule {
    FluentSSA,
    PossExpansion,
    Connective,
    CausesReduction,
    CAfterReduction,
    PAfterReduction,
    CCausesReduction,
    PCausesReduction,
    NoChange,
}

/// One fixpoint iteration: `after` is `before` rewritten by `rule` and then
/// normalized by the simplifier.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegressionStep {
    pub rule: RegressionRule,
    pub before: ExtendedFormula,
    pub after: ExtendedFormula,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegressionResult {
    pub fixpoint: ExtendedFormula,
    pub trace: Vec<RegressionStep>,
    pub steps: usize,
}

impl RegressionResult {
    /// Steps that reduced a nondeterministic-cause atom at the top level.
    pub fn top_level_reductions(&self) -> usize {
        self.trace
            .iter()
            .filter(|s| {
                matches!(
                    s.rule,
                    RegressionRule::CAfterReduction
                        | RegressionRule::PAfterReduction
                        | RegressionRule::CCausesReduction
                        | RegressionRule::PCausesReduction
                )
            })
            .count()
    }

    /// Serializable trace: rule names with printed formulas.
    pub fn trace_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.trace
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "rule": format!("{:?}", s.rule),
                        "before": s.before.to_string(),
                        "after": s.after.to_string(),
                    })
                })
                .collect(),
        )
    }

    /// Plain-text derivation, one numbered application per line block.
    pub fn trace_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.trace.iter().enumerate() {
            out.push_str(&format!("application {} [{:?}]\n", i + 1, s.rule));
            out.push_str(&format!("  from: {}\n", s.before));
            out.push_str(&format!("  to:   {}\n", s.after));
        }
        out
    }
}

/// Outcome of checking the regression theorem on one query.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TheoremVerdict {
    pub oracle: bool,
    pub regressed: bool,
    pub agree: bool,
    pub result: RegressionResult,
}

/// Checks the conditions for membership in the extended regressable set:
/// no free variables, no situation placeholders, every situation a ground
/// chain from `S0`, and cause-atom effects free of nested cause atoms.
pub fn is_extended_regressable(f: &ExtendedFormula) -> Result<(), String> {
    let free = f.free_variables();
    if !free.is_empty() {
        let names: Vec<String> = free.keys().map(|s| s.to_string()).collect();
        return Err(format!("free variables: {}", names.join(", ")));
    }
    check_shape(f)
}

fn check_situation(sit: &SituationTerm) -> Result<(), String> {
    match sit.base() {
        SituationTerm::S0 => Ok(()),
        SituationTerm::Placeholder(p) => Err(format!(
            "situation contains the placeholder {p}; placeholders stand for quantified situations"
        )),
        SituationTerm::Do(..) => unreachable!("base is never a do"),
    }
}

fn check_shape(f: &ExtendedFormula) -> Result<(), String> {
    use ExtendedFormula as E;
    match f {
        E::True | E::False | E::Rigid(..) | E::Eq(..) => Ok(()),
        E::Fluent(_, _, sit) | E::Poss(_, sit) | E::TimeCmp(_, _, sit) => check_situation(sit),
        E::Not(p) => check_shape(p),
        E::And(ps) | E::Or(ps) => ps.iter().try_for_each(check_shape),
        E::Exists(_, p) | E::Forall(_, p) => check_shape(p),
        E::Causes { effect, sit, .. } => {
            check_situation(sit)?;
            if !effect.is_causes_free() {
                return Err("the effect of a Causes atom nests another cause atom".to_string());
            }
            Ok(())
        }
        E::CAfter { sit, .. } | E::PAfter { sit, .. } => check_situation(sit),
        E::CCauses { effect, .. } | E::PCauses { effect, .. } => {
            if !effect.is_causes_free() {
                return Err("the effect of a cause query nests another cause atom".to_string());
            }
            Ok(())
        }
    }
}

/// Structural scan for fixpoint purity: only `S0`-situated fluent atoms,
/// rigid relations, equalities, constants and object/reaction quantifiers.
pub fn is_pure_initial(f: &ExtendedFormula) -> bool {
    use ExtendedFormula as E;
    match f {
        E::True | E::False | E::Rigid(..) | E::Eq(..) => true,
        E::Fluent(_, _, sit) => sit == &SituationTerm::S0,
        E::Not(p) => is_pure_initial(p),
        E::And(ps) | E::Or(ps) => ps.iter().all(is_pure_initial),
        E::Exists(vs, p) | E::Forall(vs, p) => {
            vs.iter().all(|v| !matches!(v.sort, Sort::Action)) && is_pure_initial(p)
        }
        E::TimeCmp(..)
        | E::Poss(..)
        | E::Causes { .. }
        | E::CAfter { .. }
        | E::PAfter { .. }
        | E::CCauses { .. }
        | E::PCauses { .. } => false,
    }
}

pub struct RegressionEngine<'a> {
    theory: &'a NDBATheory,
    budget: Option<usize>,
    fresh: Cell<u64>,
}

impl<'a> RegressionEngine<'a> {
    pub fn new(theory: &'a NDBATheory) -> Self {
        RegressionEngine { theory, budget: None, fresh: Cell::new(0) }
    }

    /// Overrides the step ceiling; `None` derives it from the input size.
    pub fn with_budget(theory: &'a NDBATheory, budget: Option<usize>) -> Self {
        RegressionEngine { theory, budget, fresh: Cell::new(0) }
    }

    fn fresh_reaction_var(&self) -> Symbol {
        let n = self.fresh.get() + 1;
        self.fresh.set(n);
        Symbol::from(format!("e{n}"))
    }

    fn fresh_placeholder(&self) -> Symbol {
        let n = self.fresh.get() + 1;
        self.fresh.set(n);
        Symbol::from(format!("s{n}"))
    }

    /// One outermost pass of the extended operator: the highest-priority
    /// applicable rule is applied at all its outermost positions.
    pub fn regress_one(&self, f: &ExtendedFormula) -> Result<ExtendedFormula, RegressError> {
        match pick_rule(f) {
            None => Ok(f.clone()),
            Some(rule) => self.apply(f, rule),
        }
    }

    /// Alternates one-step regression and simplification until the formula
    /// stops changing; the trace records each changing pass and ends with a
    /// no-change detection step.
    pub fn regress_star(&self, f: &ExtendedFormula) -> Result<RegressionResult, RegressError> {
        is_extended_regressable(f).map_err(RegressError::NotRegressable)?;
        self.fresh.set(0);
        let budget = self.budget.unwrap_or_else(|| 40 * (f.size() + scenario_extent(f)) + 200);
        let mut trace = Vec::new();
        let mut cur = simplify(self.theory, f);
        loop {
            if trace.len() > budget {
                return Err(RegressError::StepBudgetExceeded { budget });
            }
            let rule = pick_rule(&cur);
            let rewritten = match rule {
                None => cur.clone(),
                Some(rule) => self.apply(&cur, rule)?,
            };
            let next = simplify(self.theory, &rewritten);
            if next == cur {
                trace.push(RegressionStep {
                    rule: RegressionRule::NoChange,
                    before: cur.clone(),
                    after: cur.clone(),
                });
                let steps = trace.len();
                return Ok(RegressionResult { fixpoint: cur, trace, steps });
            }
            trace.push(RegressionStep {
                rule: rule.unwrap_or(RegressionRule::NoChange),
                before: cur,
                after: next.clone(),
            });
            cur = next;
        }
    }

    /// Evaluates the query both ways: brute-force oracle semantics against
    /// regression to `S0` followed by initial-theory evaluation.
    pub fn check_regression_theorem(
        &self,
        query: &CausalQuery,
    ) -> Result<TheoremVerdict, RegressError> {
        let formula = query.to_formula().ok_or_else(|| {
            RegressError::NotRegressable(format!(
                "{} queries have no extended regression rule; use the oracle",
                query.kind_name()
            ))
        })?;
        let oracle = Evaluator::new(self.theory).eval(&formula, &Env::new())?;
        let result = self.regress_star(&formula)?;
        let regressed = eval_initial(self.theory, &result.fixpoint).ok_or_else(|| {
            RegressError::ImpureFixpoint(result.fixpoint.to_string())
        })?;
        Ok(TheoremVerdict { oracle, regressed, agree: oracle == regressed, result })
    }

    fn apply(
        &self,
        f: &ExtendedFormula,
        rule: RegressionRule,
    ) -> Result<ExtendedFormula, RegressError> {
        use ExtendedFormula as E;
        match f {
            E::Not(p) => Ok(self.apply(p, rule)?.not()),
            E::And(ps) => Ok(E::And(
                ps.iter().map(|p| self.apply(p, rule)).collect::<Result<_, _>>()?,
            )),
            E::Or(ps) => Ok(E::Or(
                ps.iter().map(|p| self.apply(p, rule)).collect::<Result<_, _>>()?,
            )),
            E::Exists(vs, p) => Ok(E::Exists(vs.clone(), Box::new(self.apply(p, rule)?))),
            E::Forall(vs, p) => Ok(E::Forall(vs.clone(), Box::new(self.apply(p, rule)?))),
            E::Fluent(..) if rule == RegressionRule::FluentSSA => self.rewrite_fluent(f),
            E::TimeCmp(..) if rule == RegressionRule::FluentSSA => self.rewrite_time(f),
            E::Poss(..) if rule == RegressionRule::PossExpansion => self.rewrite_poss(f),
            E::Causes { .. } if rule == RegressionRule::CausesReduction => self.rewrite_causes(f),
            E::CAfter { .. } if rule == RegressionRule::CAfterReduction => self.rewrite_after(f),
            E::PAfter { .. } if rule == RegressionRule::PAfterReduction => self.rewrite_after(f),
            E::CCauses { .. } if rule == RegressionRule::CCausesReduction => {
                self.rewrite_nd_causes(f)
            }
            E::PCauses { .. } if rule == RegressionRule::PCausesReduction => {
                self.rewrite_nd_causes(f)
            }
            _ => Ok(f.clone()),
        }
    }

    /// Case for relational fluents: replace `F(t⃗, do(α, σ))` by the
    /// successor-state axiom body instantiated at `(t⃗, α)` restored at `σ`.
    fn rewrite_fluent(&self, f: &ExtendedFormula) -> Result<ExtendedFormula, RegressError> {
        let ExtendedFormula::Fluent(name, args, sit) = f else { unreachable!() };
        let SituationTerm::Do(action, prior) = sit else {
            return Ok(f.clone());
        };
        let ssa = self
            .theory
            .ssa(name)
            .ok_or_else(|| RegressError::UnknownFluent(name.clone()))?;
        debug_assert_eq!(ssa.params.len(), args.len(), "validated theory");
        let mut binding = Binding::new();
        for ((param, _), value) in ssa.params.iter().zip(args) {
            binding.insert(param.clone(), Term::Obj(value.clone()));
        }
        binding.insert(ssa.action_var.clone(), Term::Act(action.clone()));
        let body = ssa.body.substitute(&binding)?;
        Ok(body.restore(prior))
    }

    /// The time of a successor situation steps down by one; `S0`-rooted
    /// chains are evaluated by the simplifier instead.
    fn rewrite_time(&self, f: &ExtendedFormula) -> Result<ExtendedFormula, RegressError> {
        let ExtendedFormula::TimeCmp(op, rhs, sit) = f else { unreachable!() };
        match sit {
            SituationTerm::Do(_, prior) => {
                Ok(ExtendedFormula::TimeCmp(*op, rhs - 1, (**prior).clone()))
            }
            _ => Ok(f.clone()),
        }
    }

    /// Precondition expansion: `Poss(A(t⃗, r), σ)` becomes the system
    /// precondition axiom body instantiated and restored at `σ`.
    fn rewrite_poss(&self, f: &ExtendedFormula) -> Result<ExtendedFormula, RegressError> {
        let ExtendedFormula::Poss(action, sit) = f else { unreachable!() };
        let decl = self
            .theory
            .action(&action.name)
            .ok_or_else(|| RegressError::UnknownAction(action.name.clone()))?;
        debug_assert_eq!(decl.params.len(), action.args.len(), "validated theory");
        let mut binding = Binding::new();
        for ((param, _), value) in decl.params.iter().zip(&action.args) {
            binding.insert(param.clone(), Term::Obj(value.clone()));
        }
        binding.insert(decl.reaction_var.clone(), Term::React(action.reaction.clone()));
        let body = decl.poss_sys.substitute(&binding)?;
        Ok(body.restore(sit))
    }

    /// The cause atom over a successor situation splits into the three
    /// disjuncts: the last action is itself the primary cause; the cause lies
    /// strictly earlier and the last action preserved the effect; or the last
    /// action is the primary cause and the candidate contributed its
    /// executability and context conditions.
    fn rewrite_causes(&self, f: &ExtendedFormula) -> Result<ExtendedFormula, RegressError> {
        let ExtendedFormula::Causes { action: b, ts, effect, sit } = f else { unreachable!() };
        match sit {
            SituationTerm::S0 => Ok(ExtendedFormula::False),
            SituationTerm::Placeholder(_) => Ok(f.clone()),
            SituationTerm::Do(a, s) => {
                let at_s = effect.restore(s);
                let at_do = effect.restore(sit);
                let d1 = ExtendedFormula::and(vec![
                    ExtendedFormula::TimeCmp(crate::formula::TimeOp::Eq, *ts, (**s).clone()),
                    ExtendedFormula::Eq(Term::Act(Box::new(b.clone())), Term::Act(a.clone())),
                    at_s.clone().not(),
                    at_do.clone(),
                ]);
                let d2 = ExtendedFormula::and(vec![
                    ExtendedFormula::TimeCmp(crate::formula::TimeOp::Gt, *ts, (**s).clone()),
                    at_s.clone(),
                    at_do.clone(),
                    ExtendedFormula::Causes {
                        action: b.clone(),
                        ts: *ts,
                        effect: effect.clone(),
                        sit: (**s).clone(),
                    },
                ]);
                let context = DynamicFormula::and(vec![
                    DynamicFormula::Poss((**a).clone()),
                    self.regress_suppressed(effect, a)?,
                ]);
                let d3 = ExtendedFormula::and(vec![
                    ExtendedFormula::TimeCmp(crate::formula::TimeOp::Gt, *ts, (**s).clone()),
                    at_s.not(),
                    at_do,
                    ExtendedFormula::Causes {
                        action: b.clone(),
                        ts: *ts,
                        effect: Box::new(context),
                        sit: (**s).clone(),
                    },
                ]);
                Ok(ExtendedFormula::Or(vec![d1, d2, d3]))
            }
        }
    }

    /// `R[φ[do(a, s′)]]⁻¹`: restore the suppressed formula one action above a
    /// fresh placeholder, regress down to the placeholder, suppress again.
    fn regress_suppressed(
        &self,
        effect: &DynamicFormula,
        action: &SystemAction,
    ) -> Result<DynamicFormula, RegressError> {
        let base = self.fresh_placeholder();
        let restored = effect.restore(
            &SituationTerm::Placeholder(base.clone()).succ(action.clone()),
        );
        let reduced = self.regress_to_base(restored)?;
        Ok(reduced.suppress()?)
    }

    /// Repeated inner regression until every atom sits at the bare base
    /// placeholder. Used for the situation-suppressed contexts the extended
    /// cases build.
    fn regress_to_base(&self, f: ExtendedFormula) -> Result<ExtendedFormula, RegressError> {
        let mut cur = simplify(self.theory, &f);
        let guard = 100 + 20 * f.size();
        for _ in 0..guard {
            let mut next = cur.clone();
            for rule in [
                RegressionRule::CausesReduction,
                RegressionRule::PossExpansion,
                RegressionRule::FluentSSA,
            ] {
                next = self.apply(&next, rule)?;
            }
            let next = simplify(self.theory, &next);
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
        Err(RegressError::StepBudgetExceeded { budget: guard })
    }

    /// Peeling case: `CAfter(ε, φ, s)` restores the condition at `s`;
    /// a nonempty sequence peels its last agent action into a reaction
    /// quantifier over the regressed-and-suppressed condition.
    fn rewrite_after(&self, f: &ExtendedFormula) -> Result<ExtendedFormula, RegressError> {
        let (seq, cond, sit, universal) = match f {
            ExtendedFormula::CAfter { seq, cond, sit } => (seq, cond, sit, true),
            ExtendedFormula::PAfter { seq, cond, sit } => (seq, cond, sit, false),
            _ => unreachable!(),
        };
        match seq.split_last() {
            None => Ok(cond.restore(sit)),
            Some((last, rest)) => {
                let new_cond = if universal {
                    self.peel(last, cond)?
                } else {
                    self.peel_existential(last, cond)?
                };
                Ok(if universal {
                    ExtendedFormula::CAfter {
                        seq: rest.to_vec(),
                        cond: Box::new(new_cond),
                        sit: sit.clone(),
                    }
                } else {
                    ExtendedFormula::PAfter {
                        seq: rest.to_vec(),
                        cond: Box::new(new_cond),
                        sit: sit.clone(),
                    }
                })
            }
        }
    }

    /// `∀e. Poss(αₙ(e)) ⊃ …` (or `∃e. Poss(αₙ(e)) ∧ …` for the possible
    /// variant), with the inner condition regressed through `do(αₙ(e), s′)`.
    fn peel(&self, last: &AgentAction, cond: &DynamicFormula) -> Result<DynamicFormula, RegressError> {
        let evar = self.fresh_reaction_var();
        let sys = last.with_reaction(ReactionTerm::Var(evar.clone()));
        let inner = self.regress_suppressed(cond, &sys)?;
        let poss = DynamicFormula::Poss(sys);
        Ok(DynamicFormula::forall(
            vec![Variable::new(evar, Sort::Reaction)],
            DynamicFormula::or(vec![poss.not(), inner]),
        ))
    }

    /// Existential dual of `peel`.
    fn peel_existential(
        &self,
        last: &AgentAction,
        cond: &DynamicFormula,
    ) -> Result<DynamicFormula, RegressError> {
        let evar = self.fresh_reaction_var();
        let sys = last.with_reaction(ReactionTerm::Var(evar.clone()));
        let inner = self.regress_suppressed(cond, &sys)?;
        let poss = DynamicFormula::Poss(sys);
        Ok(DynamicFormula::exists(
            vec![Variable::new(evar, Sort::Reaction)],
            DynamicFormula::and(vec![poss, inner]),
        ))
    }

    /// The nondeterministic-cause cases: `CCauses(β, t, φ, α⃗)` becomes a
    /// `CAfter` over the shorter sequence whose condition says the effect
    /// fails or some reaction makes `β` an actual cause; dually for
    /// `PCauses` with `PAfter`.
    fn rewrite_nd_causes(&self, f: &ExtendedFormula) -> Result<ExtendedFormula, RegressError> {
        let (beta, ts, effect, seq, universal) = match f {
            ExtendedFormula::CCauses { action, ts, effect, seq } => {
                (action, *ts, effect, seq, true)
            }
            ExtendedFormula::PCauses { action, ts, effect, seq } => {
                (action, *ts, effect, seq, false)
            }
            _ => unreachable!(),
        };
        let evar = self.fresh_reaction_var();
        let causes_atom = DynamicFormula::Causes(
            beta.with_reaction(ReactionTerm::Var(evar.clone())),
            ts,
            effect.clone(),
        );
        let exists_cause = DynamicFormula::exists(
            vec![Variable::new(evar, Sort::Reaction)],
            causes_atom,
        );
        let star = if universal {
            DynamicFormula::or(vec![(**effect).clone().not(), exists_cause])
        } else {
            DynamicFormula::and(vec![(**effect).clone(), exists_cause])
        };
        match seq.split_last() {
            None => Ok(star.restore(&SituationTerm::S0)),
            Some((last, rest)) => {
                if universal {
                    let new_cond = self.peel(last, &star)?;
                    Ok(ExtendedFormula::CAfter {
                        seq: rest.to_vec(),
                        cond: Box::new(new_cond),
                        sit: SituationTerm::S0,
                    })
                } else {
                    let new_cond = self.peel_existential(last, &star)?;
                    Ok(ExtendedFormula::PAfter {
                        seq: rest.to_vec(),
                        cond: Box::new(new_cond),
                        sit: SituationTerm::S0,
                    })
                }
            }
        }
    }
}

/// Combined sequence and chain extent, used for the default step budget.
fn scenario_extent(f: &ExtendedFormula) -> usize {
    use ExtendedFormula as E;
    match f {
        E::True | E::False | E::Rigid(..) | E::Eq(..) => 0,
        E::Fluent(_, _, sit) | E::Poss(_, sit) | E::TimeCmp(_, _, sit) => sit.depth(),
        E::Not(p) => scenario_extent(p),
        E::And(ps) | E::Or(ps) => ps.iter().map(scenario_extent).max().unwrap_or(0),
        E::Exists(_, p) | E::Forall(_, p) => scenario_extent(p),
        E::Causes { sit, .. } => sit.depth(),
        E::CAfter { seq, sit, .. } | E::PAfter { seq, sit, .. } => seq.len() + sit.depth(),
        E::CCauses { seq, .. } | E::PCauses { seq, .. } => seq.len(),
    }
}

/// The highest-priority rule applicable anywhere in the live formula.
/// Context fields of cause atoms are data, not live positions.
fn pick_rule(f: &ExtendedFormula) -> Option<RegressionRule> {
    use ExtendedFormula as E;
    use RegressionRule as R;
    fn best(a: Option<R>, b: Option<R>) -> Option<R> {
        fn rank(r: R) -> u8 {
            match r {
                R::CCausesReduction => 0,
                R::PCausesReduction => 1,
                R::CAfterReduction => 2,
                R::PAfterReduction => 3,
                R::CausesReduction => 4,
                R::PossExpansion => 5,
                R::FluentSSA => 6,
                R::Connective | R::NoChange => 7,
            }
        }
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => Some(if rank(x) <= rank(y) { x } else { y }),
        }
    }
    match f {
        E::True | E::False | E::Rigid(..) | E::Eq(..) => None,
        E::Fluent(_, _, sit) => match sit {
            SituationTerm::Do(..) => Some(R::FluentSSA),
            _ => None,
        },
        E::TimeCmp(_, _, sit) => match sit {
            SituationTerm::Do(..) => Some(R::FluentSSA),
            _ => None,
        },
        E::Poss(..) => Some(R::PossExpansion),
        E::Not(p) => pick_rule(p),
        E::And(ps) | E::Or(ps) => ps.iter().fold(None, |acc, p| best(acc, pick_rule(p))),
        E::Exists(_, p) | E::Forall(_, p) => pick_rule(p),
        E::Causes { sit, .. } => match sit {
            SituationTerm::Placeholder(_) => None,
            _ => Some(R::CausesReduction),
        },
        E::CAfter { .. } => Some(R::CAfterReduction),
        E::PAfter { .. } => Some(R::PAfterReduction),
        E::CCauses { .. } => Some(R::CCausesReduction),
        E::PCauses { .. } => Some(R::PCausesReduction),
    }
}
