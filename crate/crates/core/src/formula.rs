//! Situation-suppressed and situation-restored formulas, with restoration,
//! suppression, substitution and free-variable utilities.
//!
//! `DynamicFormula` is the situation-suppressed effect/condition language:
//! fluent atoms, `Poss`, `After`, the usual connectives and quantifiers,
//! equalities over object/reaction/action terms, time comparisons, and
//! suppressed actual-cause atoms (which regression introduces into the
//! conditions it builds). `ExtendedFormula` restores these over concrete
//! `SituationTerm`s and adds the nondeterministic-cause atoms `CAfter`,
//! `PAfter`, `CCauses` and `PCauses`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::symbol::Symbol;
use crate::term::{
    AgentAction, Binding, ObjectTerm, ReactionTerm, SituationTerm, SystemAction, Term,
    VarKind, Variable,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    /// Atoms disagree on the base situation being stripped; signals a
    /// malformed regression intermediate.
    #[error("mixed situation bases under suppression: {0} vs {1}")]
    MixedSituationBase(String, String),
    /// An atom kind that has no situation-suppressed form.
    #[error("cannot suppress {0} atom")]
    Unsuppressible(&'static str),
    /// A binding maps a variable to a term of the wrong kind.
    #[error("sort mismatch: variable {var} used as {expected}, bound to {got}")]
    SortMismatch { var: Symbol, expected: VarKind, got: String },
}

/// Comparison operator of a time atom.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TimeOp {
    Eq,
    Gt,
}

impl fmt::Display for TimeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeOp::Eq => write!(f, "="),
            TimeOp::Gt => write!(f, ">"),
        }
    }
}

/// A situation-suppressed formula.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum DynamicFormula {
    True,
    False,
    /// Relational fluent atom, situation argument suppressed.
    Fluent(Symbol, Vec<ObjectTerm>),
    /// Situation-independent relation; never takes a situation argument.
    Rigid(Symbol, Vec<ObjectTerm>),
    Poss(SystemAction),
    After(SystemAction, Box<DynamicFormula>),
    Not(Box<DynamicFormula>),
    And(Vec<DynamicFormula>),
    Or(Vec<DynamicFormula>),
    Exists(Vec<Variable>, Box<DynamicFormula>),
    Forall(Vec<Variable>, Box<DynamicFormula>),
    Eq(Term, Term),
    /// `time = t` / `time > t` about the suppressed situation.
    TimeCmp(TimeOp, i64),
    /// Suppressed actual-cause atom `Causes(b, t, φ)`.
    Causes(SystemAction, i64, Box<DynamicFormula>),
}

/// A formula restored over situation terms, extended with the cause atoms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ExtendedFormula {
    True,
    False,
    Fluent(Symbol, Vec<ObjectTerm>, SituationTerm),
    Rigid(Symbol, Vec<ObjectTerm>),
    Poss(SystemAction, SituationTerm),
    Not(Box<ExtendedFormula>),
    And(Vec<ExtendedFormula>),
    Or(Vec<ExtendedFormula>),
    Exists(Vec<Variable>, Box<ExtendedFormula>),
    Forall(Vec<Variable>, Box<ExtendedFormula>),
    Eq(Term, Term),
    /// `time(sit) = t` / `time(sit) > t`.
    TimeCmp(TimeOp, i64, SituationTerm),
    /// `Causes(b, t, φ, sit)`: `b` at timestamp `t` is an actual cause of the
    /// suppressed effect `φ` in scenario `sit`.
    Causes {
        action: SystemAction,
        ts: i64,
        effect: Box<DynamicFormula>,
        sit: SituationTerm,
    },
    /// `CAfter(α⃗, φ, sit)`: `φ` holds after every execution of `α⃗` from `sit`.
    CAfter {
        seq: Vec<AgentAction>,
        cond: Box<DynamicFormula>,
        sit: SituationTerm,
    },
    /// `PAfter(α⃗, φ, sit)`: `φ` holds after some execution of `α⃗` from `sit`.
    PAfter {
        seq: Vec<AgentAction>,
        cond: Box<DynamicFormula>,
        sit: SituationTerm,
    },
    /// `CCauses(β, t, φ, α⃗)`: `β` at `t` is a cause in every effect-satisfying
    /// execution of `α⃗` from `S0`.
    CCauses {
        action: AgentAction,
        ts: i64,
        effect: Box<DynamicFormula>,
        seq: Vec<AgentAction>,
    },
    /// Dual of `CCauses`: a cause in some effect-satisfying execution.
    PCauses {
        action: AgentAction,
        ts: i64,
        effect: Box<DynamicFormula>,
        seq: Vec<AgentAction>,
    },
}

#[allow(clippy::should_implement_trait)]
impl DynamicFormula {
    pub fn fluent(name: &str, args: Vec<ObjectTerm>) -> Self {
        DynamicFormula::Fluent(Symbol::new(name), args)
    }

    pub fn rigid(name: &str, args: Vec<ObjectTerm>) -> Self {
        DynamicFormula::Rigid(Symbol::new(name), args)
    }

    pub fn not(self) -> Self {
        DynamicFormula::Not(Box::new(self))
    }

    pub fn and(mut parts: Vec<DynamicFormula>) -> Self {
        match parts.len() {
            0 => DynamicFormula::True,
            1 => parts.pop().unwrap(),
            _ => DynamicFormula::And(parts),
        }
    }

    pub fn or(mut parts: Vec<DynamicFormula>) -> Self {
        match parts.len() {
            0 => DynamicFormula::False,
            1 => parts.pop().unwrap(),
            _ => DynamicFormula::Or(parts),
        }
    }

    pub fn implies(self, rhs: DynamicFormula) -> Self {
        DynamicFormula::or(vec![self.not(), rhs])
    }

    pub fn exists(vars: Vec<Variable>, body: DynamicFormula) -> Self {
        if vars.is_empty() {
            body
        } else {
            DynamicFormula::Exists(vars, Box::new(body))
        }
    }

    pub fn forall(vars: Vec<Variable>, body: DynamicFormula) -> Self {
        if vars.is_empty() {
            body
        } else {
            DynamicFormula::Forall(vars, Box::new(body))
        }
    }

    /// Node count, used for step-budget sizing.
    pub fn size(&self) -> usize {
        match self {
            DynamicFormula::True
            | DynamicFormula::False
            | DynamicFormula::Fluent(..)
            | DynamicFormula::Rigid(..)
            | DynamicFormula::Poss(_)
            | DynamicFormula::Eq(..)
            | DynamicFormula::TimeCmp(..) => 1,
            DynamicFormula::After(_, p) | DynamicFormula::Causes(_, _, p) => 1 + p.size(),
            DynamicFormula::Not(p) => 1 + p.size(),
            DynamicFormula::And(ps) | DynamicFormula::Or(ps) => {
                1 + ps.iter().map(|p| p.size()).sum::<usize>()
            }
            DynamicFormula::Exists(_, p) | DynamicFormula::Forall(_, p) => 1 + p.size(),
        }
    }

    /// True when no suppressed `Causes` atom occurs anywhere inside.
    pub fn is_causes_free(&self) -> bool {
        match self {
            DynamicFormula::Causes(..) => false,
            DynamicFormula::After(_, p) | DynamicFormula::Not(p) => p.is_causes_free(),
            DynamicFormula::And(ps) | DynamicFormula::Or(ps) => {
                ps.iter().all(|p| p.is_causes_free())
            }
            DynamicFormula::Exists(_, p) | DynamicFormula::Forall(_, p) => p.is_causes_free(),
            _ => true,
        }
    }

    /// Restores the situation argument `s` into the formula (the `φ[s]`
    /// operator): fluent and `Poss` atoms receive `s`, `After(a, φ′)` becomes
    /// `φ′[do(a, s)]`, connectives and quantifiers are homomorphic.
    pub fn restore(&self, s: &SituationTerm) -> ExtendedFormula {
        match self {
            DynamicFormula::True => ExtendedFormula::True,
            DynamicFormula::False => ExtendedFormula::False,
            DynamicFormula::Fluent(n, args) => {
                ExtendedFormula::Fluent(n.clone(), args.clone(), s.clone())
            }
            DynamicFormula::Rigid(n, args) => ExtendedFormula::Rigid(n.clone(), args.clone()),
            DynamicFormula::Poss(a) => ExtendedFormula::Poss(a.clone(), s.clone()),
            DynamicFormula::After(a, p) => p.restore(&s.succ(a.clone())),
            DynamicFormula::Not(p) => ExtendedFormula::Not(Box::new(p.restore(s))),
            DynamicFormula::And(ps) => {
                ExtendedFormula::And(ps.iter().map(|p| p.restore(s)).collect())
            }
            DynamicFormula::Or(ps) => {
                ExtendedFormula::Or(ps.iter().map(|p| p.restore(s)).collect())
            }
            DynamicFormula::Exists(vs, p) => {
                ExtendedFormula::Exists(vs.clone(), Box::new(p.restore(s)))
            }
            DynamicFormula::Forall(vs, p) => {
                ExtendedFormula::Forall(vs.clone(), Box::new(p.restore(s)))
            }
            DynamicFormula::Eq(l, r) => ExtendedFormula::Eq(l.clone(), r.clone()),
            DynamicFormula::TimeCmp(op, rhs) => ExtendedFormula::TimeCmp(*op, *rhs, s.clone()),
            DynamicFormula::Causes(b, t, eff) => ExtendedFormula::Causes {
                action: b.clone(),
                ts: *t,
                effect: eff.clone(),
                sit: s.clone(),
            },
        }
    }

    /// Capture-avoiding substitution of ground-or-open terms for free
    /// variables. Bound variables shadow the binding; binders are freshened
    /// when a replacement term would be captured.
    pub fn substitute(&self, binding: &Binding) -> Result<DynamicFormula, FormulaError> {
        if binding.is_empty() {
            return Ok(self.clone());
        }
        match self {
            DynamicFormula::True | DynamicFormula::False | DynamicFormula::TimeCmp(..) => {
                Ok(self.clone())
            }
            DynamicFormula::Fluent(n, args) => Ok(DynamicFormula::Fluent(
                n.clone(),
                subst_object_args(args, binding)?,
            )),
            DynamicFormula::Rigid(n, args) => Ok(DynamicFormula::Rigid(
                n.clone(),
                subst_object_args(args, binding)?,
            )),
            DynamicFormula::Poss(a) => Ok(DynamicFormula::Poss(subst_system_action(a, binding)?)),
            DynamicFormula::After(a, p) => Ok(DynamicFormula::After(
                subst_system_action(a, binding)?,
                Box::new(p.substitute(binding)?),
            )),
            DynamicFormula::Not(p) => Ok(p.substitute(binding)?.not()),
            DynamicFormula::And(ps) => Ok(DynamicFormula::And(
                ps.iter().map(|p| p.substitute(binding)).collect::<Result<_, _>>()?,
            )),
            DynamicFormula::Or(ps) => Ok(DynamicFormula::Or(
                ps.iter().map(|p| p.substitute(binding)).collect::<Result<_, _>>()?,
            )),
            DynamicFormula::Exists(vs, p) => {
                let (vs, p) = subst_under_binder(vs, p.as_ref(), binding, &|p, b| p.substitute(b))?;
                Ok(DynamicFormula::Exists(vs, Box::new(p)))
            }
            DynamicFormula::Forall(vs, p) => {
                let (vs, p) = subst_under_binder(vs, p.as_ref(), binding, &|p, b| p.substitute(b))?;
                Ok(DynamicFormula::Forall(vs, Box::new(p)))
            }
            DynamicFormula::Eq(l, r) => Ok(DynamicFormula::Eq(
                subst_term(l, binding)?,
                subst_term(r, binding)?,
            )),
            DynamicFormula::Causes(b, t, eff) => Ok(DynamicFormula::Causes(
                subst_system_action(b, binding)?,
                *t,
                Box::new(eff.substitute(binding)?),
            )),
        }
    }

    /// Exact free-variable set with occurrence kinds.
    pub fn free_variables(&self) -> BTreeMap<Symbol, VarKind> {
        let mut out = BTreeMap::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<Symbol>, out: &mut BTreeMap<Symbol, VarKind>) {
        match self {
            DynamicFormula::True | DynamicFormula::False | DynamicFormula::TimeCmp(..) => {}
            DynamicFormula::Fluent(_, args) | DynamicFormula::Rigid(_, args) => {
                collect_object_args(args, bound, out);
            }
            DynamicFormula::Poss(a) => collect_system_action(a, bound, out),
            DynamicFormula::After(a, p) => {
                collect_system_action(a, bound, out);
                p.collect_free(bound, out);
            }
            DynamicFormula::Not(p) => p.collect_free(bound, out),
            DynamicFormula::And(ps) | DynamicFormula::Or(ps) => {
                for p in ps {
                    p.collect_free(bound, out);
                }
            }
            DynamicFormula::Exists(vs, p) | DynamicFormula::Forall(vs, p) => {
                let added: Vec<_> =
                    vs.iter().filter(|v| bound.insert(v.name.clone())).map(|v| v.name.clone()).collect();
                p.collect_free(bound, out);
                for name in added {
                    bound.remove(&name);
                }
            }
            DynamicFormula::Eq(l, r) => {
                collect_term(l, bound, out);
                collect_term(r, bound, out);
            }
            DynamicFormula::Causes(b, _, eff) => {
                collect_system_action(b, bound, out);
                eff.collect_free(bound, out);
            }
        }
    }

    /// All variable names occurring anywhere, free or bound.
    pub(crate) fn all_var_names(&self, out: &mut BTreeSet<Symbol>) {
        let mut free = BTreeMap::new();
        self.collect_free(&mut BTreeSet::new(), &mut free);
        out.extend(free.into_keys());
        self.collect_binders(out);
    }

    fn collect_binders(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            DynamicFormula::Exists(vs, p) | DynamicFormula::Forall(vs, p) => {
                out.extend(vs.iter().map(|v| v.name.clone()));
                p.collect_binders(out);
            }
            DynamicFormula::Not(p)
            | DynamicFormula::After(_, p)
            | DynamicFormula::Causes(_, _, p) => p.collect_binders(out),
            DynamicFormula::And(ps) | DynamicFormula::Or(ps) => {
                for p in ps {
                    p.collect_binders(out);
                }
            }
            _ => {}
        }
    }
}

#[allow(clippy::should_implement_trait)]
impl ExtendedFormula {
    pub fn not(self) -> Self {
        ExtendedFormula::Not(Box::new(self))
    }

    pub fn and(mut parts: Vec<ExtendedFormula>) -> Self {
        match parts.len() {
            0 => ExtendedFormula::True,
            1 => parts.pop().unwrap(),
            _ => ExtendedFormula::And(parts),
        }
    }

    pub fn or(mut parts: Vec<ExtendedFormula>) -> Self {
        match parts.len() {
            0 => ExtendedFormula::False,
            1 => parts.pop().unwrap(),
            _ => ExtendedFormula::Or(parts),
        }
    }

    pub fn implies(self, rhs: ExtendedFormula) -> Self {
        ExtendedFormula::or(vec![self.not(), rhs])
    }

    pub fn exists(vars: Vec<Variable>, body: ExtendedFormula) -> Self {
        if vars.is_empty() {
            body
        } else {
            ExtendedFormula::Exists(vars, Box::new(body))
        }
    }

    pub fn forall(vars: Vec<Variable>, body: ExtendedFormula) -> Self {
        if vars.is_empty() {
            body
        } else {
            ExtendedFormula::Forall(vars, Box::new(body))
        }
    }

    pub fn size(&self) -> usize {
        match self {
            ExtendedFormula::True
            | ExtendedFormula::False
            | ExtendedFormula::Fluent(..)
            | ExtendedFormula::Rigid(..)
            | ExtendedFormula::Poss(..)
            | ExtendedFormula::Eq(..)
            | ExtendedFormula::TimeCmp(..) => 1,
            ExtendedFormula::Not(p) => 1 + p.size(),
            ExtendedFormula::And(ps) | ExtendedFormula::Or(ps) => {
                1 + ps.iter().map(|p| p.size()).sum::<usize>()
            }
            ExtendedFormula::Exists(_, p) | ExtendedFormula::Forall(_, p) => 1 + p.size(),
            ExtendedFormula::Causes { effect, .. } => 1 + effect.size(),
            ExtendedFormula::CAfter { cond, .. } | ExtendedFormula::PAfter { cond, .. } => {
                1 + cond.size()
            }
            ExtendedFormula::CCauses { effect, .. } | ExtendedFormula::PCauses { effect, .. } => {
                1 + effect.size()
            }
        }
    }

    /// Suppresses the situation argument: every fluent, `Poss`, time and
    /// cause atom loses its situation; all atoms must share one base
    /// situation (the outermost placeholder or ground situation reached by
    /// stripping `do` wrappers), which is forgotten.
    pub fn suppress(&self) -> Result<DynamicFormula, FormulaError> {
        let mut base: Option<SituationTerm> = None;
        self.suppress_with(&mut base)
    }

    fn suppress_with(
        &self,
        base: &mut Option<SituationTerm>,
    ) -> Result<DynamicFormula, FormulaError> {
        let mut note = |sit: &SituationTerm| -> Result<(), FormulaError> {
            let b = sit.base().clone();
            match base {
                None => {
                    *base = Some(b);
                    Ok(())
                }
                Some(prev) if *prev == b => Ok(()),
                Some(prev) => Err(FormulaError::MixedSituationBase(
                    prev.to_string(),
                    b.to_string(),
                )),
            }
        };
        match self {
            ExtendedFormula::True => Ok(DynamicFormula::True),
            ExtendedFormula::False => Ok(DynamicFormula::False),
            ExtendedFormula::Fluent(n, args, sit) => {
                note(sit)?;
                Ok(DynamicFormula::Fluent(n.clone(), args.clone()))
            }
            ExtendedFormula::Rigid(n, args) => Ok(DynamicFormula::Rigid(n.clone(), args.clone())),
            ExtendedFormula::Poss(a, sit) => {
                note(sit)?;
                Ok(DynamicFormula::Poss(a.clone()))
            }
            ExtendedFormula::Not(p) => Ok(p.suppress_with(base)?.not()),
            ExtendedFormula::And(ps) => Ok(DynamicFormula::And(
                ps.iter().map(|p| p.suppress_with(base)).collect::<Result<_, _>>()?,
            )),
            ExtendedFormula::Or(ps) => Ok(DynamicFormula::Or(
                ps.iter().map(|p| p.suppress_with(base)).collect::<Result<_, _>>()?,
            )),
            ExtendedFormula::Exists(vs, p) => Ok(DynamicFormula::Exists(
                vs.clone(),
                Box::new(p.suppress_with(base)?),
            )),
            ExtendedFormula::Forall(vs, p) => Ok(DynamicFormula::Forall(
                vs.clone(),
                Box::new(p.suppress_with(base)?),
            )),
            ExtendedFormula::Eq(l, r) => Ok(DynamicFormula::Eq(l.clone(), r.clone())),
            ExtendedFormula::TimeCmp(op, rhs, sit) => {
                note(sit)?;
                Ok(DynamicFormula::TimeCmp(*op, *rhs))
            }
            ExtendedFormula::Causes { action, ts, effect, sit } => {
                note(sit)?;
                Ok(DynamicFormula::Causes(action.clone(), *ts, effect.clone()))
            }
            ExtendedFormula::CAfter { .. } => Err(FormulaError::Unsuppressible("CAfter")),
            ExtendedFormula::PAfter { .. } => Err(FormulaError::Unsuppressible("PAfter")),
            ExtendedFormula::CCauses { .. } => Err(FormulaError::Unsuppressible("CCauses")),
            ExtendedFormula::PCauses { .. } => Err(FormulaError::Unsuppressible("PCauses")),
        }
    }

    pub fn substitute(&self, binding: &Binding) -> Result<ExtendedFormula, FormulaError> {
        if binding.is_empty() {
            return Ok(self.clone());
        }
        match self {
            ExtendedFormula::True | ExtendedFormula::False => Ok(self.clone()),
            ExtendedFormula::Fluent(n, args, sit) => Ok(ExtendedFormula::Fluent(
                n.clone(),
                subst_object_args(args, binding)?,
                subst_situation(sit, binding)?,
            )),
            ExtendedFormula::Rigid(n, args) => Ok(ExtendedFormula::Rigid(
                n.clone(),
                subst_object_args(args, binding)?,
            )),
            ExtendedFormula::Poss(a, sit) => Ok(ExtendedFormula::Poss(
                subst_system_action(a, binding)?,
                subst_situation(sit, binding)?,
            )),
            ExtendedFormula::Not(p) => Ok(p.substitute(binding)?.not()),
            ExtendedFormula::And(ps) => Ok(ExtendedFormula::And(
                ps.iter().map(|p| p.substitute(binding)).collect::<Result<_, _>>()?,
            )),
            ExtendedFormula::Or(ps) => Ok(ExtendedFormula::Or(
                ps.iter().map(|p| p.substitute(binding)).collect::<Result<_, _>>()?,
            )),
            ExtendedFormula::Exists(vs, p) => {
                let (vs, p) = subst_under_binder(vs, p.as_ref(), binding, &|p, b| p.substitute(b))?;
                Ok(ExtendedFormula::Exists(vs, Box::new(p)))
            }
            ExtendedFormula::Forall(vs, p) => {
                let (vs, p) = subst_under_binder(vs, p.as_ref(), binding, &|p, b| p.substitute(b))?;
                Ok(ExtendedFormula::Forall(vs, Box::new(p)))
            }
            ExtendedFormula::Eq(l, r) => Ok(ExtendedFormula::Eq(
                subst_term(l, binding)?,
                subst_term(r, binding)?,
            )),
            ExtendedFormula::TimeCmp(op, rhs, sit) => Ok(ExtendedFormula::TimeCmp(
                *op,
                *rhs,
                subst_situation(sit, binding)?,
            )),
            ExtendedFormula::Causes { action, ts, effect, sit } => Ok(ExtendedFormula::Causes {
                action: subst_system_action(action, binding)?,
                ts: *ts,
                effect: Box::new(effect.substitute(binding)?),
                sit: subst_situation(sit, binding)?,
            }),
            ExtendedFormula::CAfter { seq, cond, sit } => Ok(ExtendedFormula::CAfter {
                seq: subst_agent_actions(seq, binding)?,
                cond: Box::new(cond.substitute(binding)?),
                sit: subst_situation(sit, binding)?,
            }),
            ExtendedFormula::PAfter { seq, cond, sit } => Ok(ExtendedFormula::PAfter {
                seq: subst_agent_actions(seq, binding)?,
                cond: Box::new(cond.substitute(binding)?),
                sit: subst_situation(sit, binding)?,
            }),
            ExtendedFormula::CCauses { action, ts, effect, seq } => Ok(ExtendedFormula::CCauses {
                action: subst_agent_action(action, binding)?,
                ts: *ts,
                effect: Box::new(effect.substitute(binding)?),
                seq: subst_agent_actions(seq, binding)?,
            }),
            ExtendedFormula::PCauses { action, ts, effect, seq } => Ok(ExtendedFormula::PCauses {
                action: subst_agent_action(action, binding)?,
                ts: *ts,
                effect: Box::new(effect.substitute(binding)?),
                seq: subst_agent_actions(seq, binding)?,
            }),
        }
    }

    pub fn free_variables(&self) -> BTreeMap<Symbol, VarKind> {
        let mut out = BTreeMap::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<Symbol>, out: &mut BTreeMap<Symbol, VarKind>) {
        match self {
            ExtendedFormula::True | ExtendedFormula::False => {}
            ExtendedFormula::Fluent(_, args, sit) => {
                collect_object_args(args, bound, out);
                collect_situation(sit, bound, out);
            }
            ExtendedFormula::Rigid(_, args) => collect_object_args(args, bound, out),
            ExtendedFormula::Poss(a, sit) => {
                collect_system_action(a, bound, out);
                collect_situation(sit, bound, out);
            }
            ExtendedFormula::Not(p) => p.collect_free(bound, out),
            ExtendedFormula::And(ps) | ExtendedFormula::Or(ps) => {
                for p in ps {
                    p.collect_free(bound, out);
                }
            }
            ExtendedFormula::Exists(vs, p) | ExtendedFormula::Forall(vs, p) => {
                let added: Vec<_> =
                    vs.iter().filter(|v| bound.insert(v.name.clone())).map(|v| v.name.clone()).collect();
                p.collect_free(bound, out);
                for name in added {
                    bound.remove(&name);
                }
            }
            ExtendedFormula::Eq(l, r) => {
                collect_term(l, bound, out);
                collect_term(r, bound, out);
            }
            ExtendedFormula::TimeCmp(_, _, sit) => collect_situation(sit, bound, out),
            ExtendedFormula::Causes { action, effect, sit, .. } => {
                collect_system_action(action, bound, out);
                effect.collect_free(bound, out);
                collect_situation(sit, bound, out);
            }
            ExtendedFormula::CAfter { seq, cond, sit }
            | ExtendedFormula::PAfter { seq, cond, sit } => {
                for a in seq {
                    collect_agent_action(a, bound, out);
                }
                cond.collect_free(bound, out);
                collect_situation(sit, bound, out);
            }
            ExtendedFormula::CCauses { action, effect, seq, .. }
            | ExtendedFormula::PCauses { action, effect, seq, .. } => {
                collect_agent_action(action, bound, out);
                effect.collect_free(bound, out);
                for a in seq {
                    collect_agent_action(a, bound, out);
                }
            }
        }
    }

    pub(crate) fn all_var_names(&self, out: &mut BTreeSet<Symbol>) {
        out.extend(self.free_variables().into_keys());
        self.collect_binders(out);
    }

    fn collect_binders(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            ExtendedFormula::Exists(vs, p) | ExtendedFormula::Forall(vs, p) => {
                out.extend(vs.iter().map(|v| v.name.clone()));
                p.collect_binders(out);
            }
            ExtendedFormula::Not(p) => p.collect_binders(out),
            ExtendedFormula::And(ps) | ExtendedFormula::Or(ps) => {
                for p in ps {
                    p.collect_binders(out);
                }
            }
            ExtendedFormula::Causes { effect, .. }
            | ExtendedFormula::CCauses { effect, .. }
            | ExtendedFormula::PCauses { effect, .. } => effect.collect_binders(out),
            ExtendedFormula::CAfter { cond, .. } | ExtendedFormula::PAfter { cond, .. } => {
                cond.collect_binders(out)
            }
            _ => {}
        }
    }
}

fn subst_object_term(t: &ObjectTerm, binding: &Binding) -> Result<ObjectTerm, FormulaError> {
    match t {
        ObjectTerm::Const(_) => Ok(t.clone()),
        ObjectTerm::Var(v) => match binding.get(v) {
            None => Ok(t.clone()),
            Some(Term::Obj(o)) => Ok(o.clone()),
            Some(other) => Err(FormulaError::SortMismatch {
                var: v.clone(),
                expected: VarKind::Object,
                got: other.to_string(),
            }),
        },
    }
}

fn subst_object_args(args: &[ObjectTerm], binding: &Binding) -> Result<Vec<ObjectTerm>, FormulaError> {
    args.iter().map(|a| subst_object_term(a, binding)).collect()
}

fn subst_reaction_term(t: &ReactionTerm, binding: &Binding) -> Result<ReactionTerm, FormulaError> {
    match t {
        ReactionTerm::Const(_) => Ok(t.clone()),
        ReactionTerm::Var(v) => match binding.get(v) {
            None => Ok(t.clone()),
            Some(Term::React(r)) => Ok(r.clone()),
            Some(other) => Err(FormulaError::SortMismatch {
                var: v.clone(),
                expected: VarKind::Reaction,
                got: other.to_string(),
            }),
        },
    }
}

pub(crate) fn subst_system_action(
    a: &SystemAction,
    binding: &Binding,
) -> Result<SystemAction, FormulaError> {
    Ok(SystemAction {
        name: a.name.clone(),
        args: subst_object_args(&a.args, binding)?,
        reaction: subst_reaction_term(&a.reaction, binding)?,
    })
}

fn subst_agent_action(a: &AgentAction, binding: &Binding) -> Result<AgentAction, FormulaError> {
    Ok(AgentAction { name: a.name.clone(), args: subst_object_args(&a.args, binding)? })
}

fn subst_agent_actions(
    actions: &[AgentAction],
    binding: &Binding,
) -> Result<Vec<AgentAction>, FormulaError> {
    actions.iter().map(|a| subst_agent_action(a, binding)).collect()
}

pub(crate) fn subst_situation(
    sit: &SituationTerm,
    binding: &Binding,
) -> Result<SituationTerm, FormulaError> {
    match sit {
        SituationTerm::S0 | SituationTerm::Placeholder(_) => Ok(sit.clone()),
        SituationTerm::Do(a, s) => Ok(SituationTerm::Do(
            Box::new(subst_system_action(a, binding)?),
            Box::new(subst_situation(s, binding)?),
        )),
    }
}

fn subst_term(t: &Term, binding: &Binding) -> Result<Term, FormulaError> {
    match t {
        Term::Obj(o) => Ok(Term::Obj(subst_object_term(o, binding)?)),
        Term::React(r) => Ok(Term::React(subst_reaction_term(r, binding)?)),
        Term::ActVar(v) => match binding.get(v) {
            None => Ok(t.clone()),
            Some(Term::Act(a)) => Ok(Term::Act(a.clone())),
            Some(other) => Err(FormulaError::SortMismatch {
                var: v.clone(),
                expected: VarKind::Action,
                got: other.to_string(),
            }),
        },
        Term::Act(a) => Ok(Term::Act(Box::new(subst_system_action(a, binding)?))),
    }
}

/// Substitution under a binder: drops shadowed entries and renames binder
/// variables that would capture a free variable of a replacement term.
fn subst_under_binder<F: HasVarNames>(
    vars: &[Variable],
    body: &F,
    binding: &Binding,
    subst: &dyn Fn(&F, &Binding) -> Result<F, FormulaError>,
) -> Result<(Vec<Variable>, F), FormulaError> {
    let mut active: Binding = binding
        .iter()
        .filter(|(k, _)| !vars.iter().any(|v| &v.name == *k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    if active.is_empty() {
        return Ok((vars.to_vec(), body.clone()));
    }
    // Names free in any replacement term of the active binding.
    let mut replacement_vars: BTreeSet<Symbol> = BTreeSet::new();
    for t in active.values() {
        term_var_names(t, &mut replacement_vars);
    }
    let mut new_vars = vars.to_vec();
    let mut renames: Binding = Binding::new();
    if !replacement_vars.is_empty() {
        let mut avoid: BTreeSet<Symbol> = replacement_vars.clone();
        body.var_names(&mut avoid);
        for v in new_vars.iter_mut() {
            if replacement_vars.contains(&v.name) {
                let fresh = fresh_like(&v.name, &avoid);
                avoid.insert(fresh.clone());
                let replacement = match v.sort.kind() {
                    VarKind::Object => Term::Obj(ObjectTerm::Var(fresh.clone())),
                    VarKind::Reaction => Term::React(ReactionTerm::Var(fresh.clone())),
                    VarKind::Action => Term::ActVar(fresh.clone()),
                };
                renames.insert(v.name.clone(), replacement);
                v.name = fresh;
            }
        }
    }
    let body = if renames.is_empty() { body.clone() } else { subst(body, &renames)? };
    // Remove entries shadowed by the (possibly renamed) binder.
    active.retain(|k, _| !new_vars.iter().any(|v| &v.name == k));
    let body = if active.is_empty() { body } else { subst(&body, &active)? };
    Ok((new_vars, body))
}

pub(crate) trait HasVarNames: Clone {
    fn var_names(&self, out: &mut BTreeSet<Symbol>);
}

impl HasVarNames for DynamicFormula {
    fn var_names(&self, out: &mut BTreeSet<Symbol>) {
        self.all_var_names(out);
    }
}

impl HasVarNames for ExtendedFormula {
    fn var_names(&self, out: &mut BTreeSet<Symbol>) {
        self.all_var_names(out);
    }
}

fn term_var_names(t: &Term, out: &mut BTreeSet<Symbol>) {
    match t {
        Term::Obj(ObjectTerm::Var(v)) | Term::React(ReactionTerm::Var(v)) | Term::ActVar(v) => {
            out.insert(v.clone());
        }
        Term::Act(a) => {
            for arg in &a.args {
                if let ObjectTerm::Var(v) = arg {
                    out.insert(v.clone());
                }
            }
            if let ReactionTerm::Var(v) = &a.reaction {
                out.insert(v.clone());
            }
        }
        _ => {}
    }
}

/// Deterministic fresh name: bumps a numeric suffix until unused.
pub(crate) fn fresh_like(name: &Symbol, avoid: &BTreeSet<Symbol>) -> Symbol {
    let base: String = name.as_str().trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
    let base = if base.is_empty() { "v".to_string() } else { base };
    let mut n: u64 = 1;
    loop {
        let candidate = Symbol::from(format!("{base}{n}"));
        if !avoid.contains(&candidate) {
            return candidate;
        }
        n += 1;
    }
}

fn collect_object_args(
    args: &[ObjectTerm],
    bound: &BTreeSet<Symbol>,
    out: &mut BTreeMap<Symbol, VarKind>,
) {
    for a in args {
        if let ObjectTerm::Var(v) = a {
            if !bound.contains(v) {
                out.insert(v.clone(), VarKind::Object);
            }
        }
    }
}

fn collect_system_action(
    a: &SystemAction,
    bound: &BTreeSet<Symbol>,
    out: &mut BTreeMap<Symbol, VarKind>,
) {
    collect_object_args(&a.args, bound, out);
    if let ReactionTerm::Var(v) = &a.reaction {
        if !bound.contains(v) {
            out.insert(v.clone(), VarKind::Reaction);
        }
    }
}

fn collect_agent_action(
    a: &AgentAction,
    bound: &BTreeSet<Symbol>,
    out: &mut BTreeMap<Symbol, VarKind>,
) {
    collect_object_args(&a.args, bound, out);
}

fn collect_situation(
    sit: &SituationTerm,
    bound: &BTreeSet<Symbol>,
    out: &mut BTreeMap<Symbol, VarKind>,
) {
    if let SituationTerm::Do(a, s) = sit {
        collect_system_action(a, bound, out);
        collect_situation(s, bound, out);
    }
}

fn collect_term(t: &Term, bound: &BTreeSet<Symbol>, out: &mut BTreeMap<Symbol, VarKind>) {
    match t {
        Term::Obj(ObjectTerm::Var(v)) => {
            if !bound.contains(v) {
                out.insert(v.clone(), VarKind::Object);
            }
        }
        Term::React(ReactionTerm::Var(v)) => {
            if !bound.contains(v) {
                out.insert(v.clone(), VarKind::Reaction);
            }
        }
        Term::ActVar(v) => {
            if !bound.contains(v) {
                out.insert(v.clone(), VarKind::Action);
            }
        }
        Term::Act(a) => collect_system_action(a, bound, out),
        _ => {}
    }
}

fn fmt_args(f: &mut fmt::Formatter<'_>, args: &[ObjectTerm]) -> fmt::Result {
    write!(f, "(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, ")")
}

fn fmt_binders(f: &mut fmt::Formatter<'_>, vars: &[Variable]) -> fmt::Result {
    for (i, v) in vars.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

fn fmt_seq(f: &mut fmt::Formatter<'_>, seq: &[AgentAction]) -> fmt::Result {
    write!(f, "[")?;
    for (i, a) in seq.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, "]")
}

impl fmt::Display for DynamicFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicFormula::True => write!(f, "true"),
            DynamicFormula::False => write!(f, "false"),
            DynamicFormula::Fluent(n, args) | DynamicFormula::Rigid(n, args) => {
                write!(f, "{n}")?;
                fmt_args(f, args)
            }
            DynamicFormula::Poss(a) => write!(f, "Poss({a})"),
            DynamicFormula::After(a, p) => write!(f, "After({a}, {p})"),
            DynamicFormula::Not(p) => write!(f, "not({p})"),
            DynamicFormula::And(ps) => {
                write!(f, "and(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            DynamicFormula::Or(ps) => {
                write!(f, "or(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            DynamicFormula::Exists(vs, p) => {
                write!(f, "(exists ")?;
                fmt_binders(f, vs)?;
                write!(f, ". {p})")
            }
            DynamicFormula::Forall(vs, p) => {
                write!(f, "(forall ")?;
                fmt_binders(f, vs)?;
                write!(f, ". {p})")
            }
            DynamicFormula::Eq(l, r) => write!(f, "{l} = {r}"),
            DynamicFormula::TimeCmp(op, rhs) => write!(f, "time {op} {rhs}"),
            DynamicFormula::Causes(b, t, eff) => write!(f, "Causes({b}, {t}, {eff})"),
        }
    }
}

impl fmt::Display for ExtendedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedFormula::True => write!(f, "true"),
            ExtendedFormula::False => write!(f, "false"),
            ExtendedFormula::Fluent(n, args, sit) => {
                write!(f, "{n}")?;
                fmt_args(f, args)?;
                write!(f, "@{sit}")
            }
            ExtendedFormula::Rigid(n, args) => {
                write!(f, "{n}")?;
                fmt_args(f, args)
            }
            ExtendedFormula::Poss(a, sit) => write!(f, "Poss({a})@{sit}"),
            ExtendedFormula::Not(p) => write!(f, "not({p})"),
            ExtendedFormula::And(ps) => {
                write!(f, "and(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            ExtendedFormula::Or(ps) => {
                write!(f, "or(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            ExtendedFormula::Exists(vs, p) => {
                write!(f, "(exists ")?;
                fmt_binders(f, vs)?;
                write!(f, ". {p})")
            }
            ExtendedFormula::Forall(vs, p) => {
                write!(f, "(forall ")?;
                fmt_binders(f, vs)?;
                write!(f, ". {p})")
            }
            ExtendedFormula::Eq(l, r) => write!(f, "{l} = {r}"),
            ExtendedFormula::TimeCmp(op, rhs, sit) => write!(f, "time@{sit} {op} {rhs}"),
            ExtendedFormula::Causes { action, ts, effect, sit } => {
                write!(f, "Causes({action}, {ts}, {effect}, {sit})")
            }
            ExtendedFormula::CAfter { seq, cond, sit } => {
                write!(f, "CAfter(")?;
                fmt_seq(f, seq)?;
                write!(f, ", {cond}, {sit})")
            }
            ExtendedFormula::PAfter { seq, cond, sit } => {
                write!(f, "PAfter(")?;
                fmt_seq(f, seq)?;
                write!(f, ", {cond}, {sit})")
            }
            ExtendedFormula::CCauses { action, ts, effect, seq } => {
                write!(f, "CCauses({action}, {ts}, {effect}, ")?;
                fmt_seq(f, seq)?;
                write!(f, ")")
            }
            ExtendedFormula::PCauses { action, ts, effect, seq } => {
                write!(f, "PCauses({action}, {ts}, {effect}, ")?;
                fmt_seq(f, seq)?;
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{ObjectTerm as O, ReactionTerm as R, Sort};

    fn move_act(i: &str, j: &str, e: &str) -> SystemAction {
        SystemAction::new("move", vec![O::constant(i), O::constant(j)], R::constant(e))
    }

    fn vul() -> DynamicFormula {
        DynamicFormula::fluent("Vul", vec![])
    }

    #[test]
    fn restore_fluent_base_case() {
        assert_eq!(
            vul().restore(&SituationTerm::S0),
            ExtendedFormula::Fluent(Symbol::new("Vul"), vec![], SituationTerm::S0)
        );
    }

    #[test]
    fn restore_after_extends_the_situation() {
        let phi = DynamicFormula::After(move_act("I1", "I2", "Vul"), Box::new(vul()));
        let restored = phi.restore(&SituationTerm::S0);
        assert_eq!(
            restored,
            ExtendedFormula::Fluent(
                Symbol::new("Vul"),
                vec![],
                SituationTerm::S0.succ(move_act("I1", "I2", "Vul"))
            )
        );
    }

    #[test]
    fn restore_is_homomorphic_on_connectives() {
        let comm = SystemAction::new("comm", vec![O::constant("I0")], R::constant("Succ"));
        let phi = DynamicFormula::and(vec![
            vul().not(),
            DynamicFormula::Poss(comm.clone()),
        ]);
        let restored = phi.restore(&SituationTerm::S0);
        assert_eq!(
            restored,
            ExtendedFormula::And(vec![
                ExtendedFormula::Fluent(Symbol::new("Vul"), vec![], SituationTerm::S0).not(),
                ExtendedFormula::Poss(comm, SituationTerm::S0),
            ])
        );
    }

    #[test]
    fn suppress_accepts_a_ground_base() {
        let atom = vul().restore(&SituationTerm::S0);
        assert_eq!(atom.suppress().unwrap(), vul());
    }

    #[test]
    fn suppress_strips_a_uniform_base() {
        let s = SituationTerm::Placeholder(Symbol::new("s1"));
        let phi = DynamicFormula::and(vec![vul().not(), DynamicFormula::fluent("At", vec![O::constant("I0")])]);
        let restored = phi.restore(&s);
        assert_eq!(restored.suppress().unwrap(), phi);
    }

    #[test]
    fn suppress_strips_chains_down_to_the_base() {
        let s1 = SituationTerm::Placeholder(Symbol::new("s1"));
        let atom = ExtendedFormula::Fluent(
            Symbol::new("At"),
            vec![O::constant("I1")],
            s1.succ(move_act("I0", "I1", "NotVul")),
        );
        assert_eq!(
            atom.suppress().unwrap(),
            DynamicFormula::fluent("At", vec![O::constant("I1")])
        );
    }

    #[test]
    fn suppress_rejects_mixed_bases() {
        let phi = ExtendedFormula::And(vec![
            ExtendedFormula::Fluent(Symbol::new("Vul"), vec![], SituationTerm::S0),
            ExtendedFormula::Fluent(
                Symbol::new("Vul"),
                vec![],
                SituationTerm::Placeholder(Symbol::new("s1")),
            ),
        ]);
        assert!(matches!(phi.suppress(), Err(FormulaError::MixedSituationBase(..))));
    }

    #[test]
    fn substitute_grounds_an_action() {
        let open = SystemAction::new(
            "move",
            vec![O::var("i"), O::var("j")],
            R::var("e"),
        );
        let phi = DynamicFormula::Poss(open);
        let mut b = Binding::new();
        b.insert(Symbol::new("i"), Term::Obj(O::constant("I0")));
        b.insert(Symbol::new("j"), Term::Obj(O::constant("I1")));
        b.insert(Symbol::new("e"), Term::React(R::constant("Vul")));
        assert_eq!(
            phi.substitute(&b).unwrap(),
            DynamicFormula::Poss(move_act("I0", "I1", "Vul"))
        );
    }

    #[test]
    fn substitute_empty_binding_is_identity() {
        let phi = DynamicFormula::Exists(
            vec![Variable::new("e", Sort::Reaction)],
            Box::new(DynamicFormula::Causes(move_act("I0", "I1", "Vul"), 0, Box::new(vul()))),
        );
        assert_eq!(phi.substitute(&Binding::new()).unwrap(), phi);
    }

    #[test]
    fn substitute_respects_binders() {
        let phi = DynamicFormula::Exists(
            vec![Variable::new("e", Sort::Reaction)],
            Box::new(DynamicFormula::Poss(SystemAction::new(
                "move",
                vec![O::constant("I0"), O::constant("I1")],
                R::var("e"),
            ))),
        );
        let mut b = Binding::new();
        b.insert(Symbol::new("e"), Term::React(R::constant("Vul")));
        assert_eq!(phi.substitute(&b).unwrap(), phi);
    }

    #[test]
    fn substitute_rejects_ill_sorted_bindings() {
        let phi = DynamicFormula::fluent("At", vec![O::var("i")]);
        let mut b = Binding::new();
        b.insert(Symbol::new("i"), Term::React(R::constant("Vul")));
        assert!(matches!(
            phi.substitute(&b),
            Err(FormulaError::SortMismatch { .. })
        ));
    }

    #[test]
    fn free_variables_of_the_prop6_condition() {
        // Poss(move(I1,I2,e1)) ∧ (e1 = Vul ∨ Vul) has exactly e1 free.
        let phi = DynamicFormula::and(vec![
            DynamicFormula::Poss(SystemAction::new(
                "move",
                vec![O::constant("I1"), O::constant("I2")],
                R::var("e1"),
            )),
            DynamicFormula::or(vec![
                DynamicFormula::Eq(
                    Term::React(R::var("e1")),
                    Term::React(R::constant("Vul")),
                ),
                vul(),
            ]),
        ]);
        let fv = phi.free_variables();
        assert_eq!(fv.len(), 1);
        assert_eq!(fv.get(&Symbol::new("e1")), Some(&VarKind::Reaction));
    }

    #[test]
    fn free_variables_closed_formulas() {
        assert!(vul().restore(&SituationTerm::S0).free_variables().is_empty());
        let phi = DynamicFormula::Exists(
            vec![Variable::new("e", Sort::Reaction)],
            Box::new(DynamicFormula::Poss(SystemAction::new(
                "move",
                vec![O::constant("I0"), O::constant("I1")],
                R::var("e"),
            ))),
        );
        assert!(phi.free_variables().is_empty());
    }

    #[test]
    fn capture_is_avoided_by_freshening() {
        // Substituting x ↦ e into ∃e. At(x) must not capture e.
        let phi = DynamicFormula::Exists(
            vec![Variable::new("e", Sort::Reaction)],
            Box::new(DynamicFormula::And(vec![
                DynamicFormula::fluent("At", vec![O::var("x")]),
                DynamicFormula::Eq(Term::React(R::var("e")), Term::React(R::constant("Vul"))),
            ])),
        );
        let mut b = Binding::new();
        b.insert(Symbol::new("x"), Term::Obj(O::var("e")));
        let out = phi.substitute(&b).unwrap();
        let fv = out.free_variables();
        assert_eq!(fv.get(&Symbol::new("e")), Some(&VarKind::Object));
        assert_eq!(fv.len(), 1);
    }
}
