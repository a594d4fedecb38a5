//! Terms of the language: objects, reactions, actions and situations.

use std::collections::BTreeMap;
use std::fmt;

use crate::symbol::Symbol;

/// Sort of a bound variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sort {
    /// A named object sort declared by the domain (e.g. `Loc`).
    Object(Symbol),
    /// The built-in environment-reaction sort.
    Reaction,
    /// The built-in action sort; only the successor-state axiom's
    /// distinguished variable ever has it, never a quantifier.
    Action,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Object(s) => write!(f, "{s}"),
            Sort::Reaction => write!(f, "Reaction"),
            Sort::Action => write!(f, "Action"),
        }
    }
}

/// Coarse kind of a variable occurrence, used by free-variable reporting.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarKind {
    Object,
    Reaction,
    Action,
}

impl fmt::Display for VarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarKind::Object => write!(f, "Object"),
            VarKind::Reaction => write!(f, "Reaction"),
            VarKind::Action => write!(f, "Action"),
        }
    }
}

impl Sort {
    pub fn kind(&self) -> VarKind {
        match self {
            Sort::Object(_) => VarKind::Object,
            Sort::Reaction => VarKind::Reaction,
            Sort::Action => VarKind::Action,
        }
    }
}

/// A sorted bound variable, as it appears in a quantifier prefix.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Variable {
    pub name: Symbol,
    pub sort: Sort,
}

impl Variable {
    pub fn new(name: impl Into<Symbol>, sort: Sort) -> Self {
        Variable { name: name.into(), sort }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

/// An object-sorted term: a declared constant or a variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ObjectTerm {
    Const(Symbol),
    Var(Symbol),
}

impl ObjectTerm {
    pub fn constant(s: &str) -> Self {
        ObjectTerm::Const(Symbol::new(s))
    }

    pub fn var(s: &str) -> Self {
        ObjectTerm::Var(Symbol::new(s))
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, ObjectTerm::Const(_))
    }
}

impl fmt::Display for ObjectTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectTerm::Const(s) | ObjectTerm::Var(s) => write!(f, "{s}"),
        }
    }
}

/// A reaction-sorted term: a declared reaction constant or a variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ReactionTerm {
    Const(Symbol),
    Var(Symbol),
}

impl ReactionTerm {
    pub fn constant(s: &str) -> Self {
        ReactionTerm::Const(Symbol::new(s))
    }

    pub fn var(s: &str) -> Self {
        ReactionTerm::Var(Symbol::new(s))
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, ReactionTerm::Const(_))
    }
}

impl fmt::Display for ReactionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReactionTerm::Const(s) | ReactionTerm::Var(s) => write!(f, "{s}"),
        }
    }
}

/// The reaction-suppressed version of an action, `A(x⃗)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AgentAction {
    pub name: Symbol,
    pub args: Vec<ObjectTerm>,
}

impl AgentAction {
    pub fn new(name: impl Into<Symbol>, args: Vec<ObjectTerm>) -> Self {
        AgentAction { name: name.into(), args }
    }

    /// The system action obtained by supplying an environment reaction.
    pub fn with_reaction(&self, reaction: ReactionTerm) -> SystemAction {
        SystemAction { name: self.name.clone(), args: self.args.clone(), reaction }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(ObjectTerm::is_ground)
    }
}

impl fmt::Display for AgentAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// The full version of an action, `A(x⃗, e)`, with its environment reaction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SystemAction {
    pub name: Symbol,
    pub args: Vec<ObjectTerm>,
    pub reaction: ReactionTerm,
}

impl SystemAction {
    pub fn new(name: impl Into<Symbol>, args: Vec<ObjectTerm>, reaction: ReactionTerm) -> Self {
        SystemAction { name: name.into(), args, reaction }
    }

    /// Drops the reaction argument.
    pub fn agent(&self) -> AgentAction {
        AgentAction { name: self.name.clone(), args: self.args.clone() }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(ObjectTerm::is_ground) && self.reaction.is_ground()
    }
}

impl fmt::Display for SystemAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for a in &self.args {
            write!(f, "{a},")?;
        }
        write!(f, "{})", self.reaction)
    }
}

/// A situation: the initial situation, a successor, or a suppressed-context
/// marker such as `now`, `s1`, `s2` standing for an unknown base situation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SituationTerm {
    S0,
    Do(Box<SystemAction>, Box<SituationTerm>),
    Placeholder(Symbol),
}

impl SituationTerm {
    /// `do([a1,…,an], base)`: append the actions in order to `base`.
    pub fn chain(actions: &[SystemAction], base: SituationTerm) -> Self {
        actions.iter().fold(base, |s, a| {
            SituationTerm::Do(Box::new(a.clone()), Box::new(s))
        })
    }

    pub fn succ(&self, action: SystemAction) -> Self {
        SituationTerm::Do(Box::new(action), Box::new(self.clone()))
    }

    /// Ground iff rooted at `S0` with all actions ground.
    pub fn is_ground(&self) -> bool {
        match self {
            SituationTerm::S0 => true,
            SituationTerm::Do(a, s) => a.is_ground() && s.is_ground(),
            SituationTerm::Placeholder(_) => false,
        }
    }

    /// The root under all `do` wrappers: `S0` or a placeholder.
    pub fn base(&self) -> &SituationTerm {
        match self {
            SituationTerm::Do(_, s) => s.base(),
            other => other,
        }
    }

    /// Number of `do` wrappers above the base.
    pub fn depth(&self) -> usize {
        match self {
            SituationTerm::Do(_, s) => 1 + s.depth(),
            _ => 0,
        }
    }

    /// Derived timestamp: `time(S0) = 0`, `time(do(a,s)) = time(s) + 1`.
    /// `None` when the base is a placeholder.
    pub fn timestamp(&self) -> Option<i64> {
        match self.base() {
            SituationTerm::S0 => Some(self.depth() as i64),
            _ => None,
        }
    }

    /// The action sequence from the base outwards, plus the base itself.
    pub fn decompose(&self) -> (Vec<&SystemAction>, &SituationTerm) {
        let mut actions = Vec::new();
        let mut cur = self;
        while let SituationTerm::Do(a, s) = cur {
            actions.push(a.as_ref());
            cur = s;
        }
        actions.reverse();
        (actions, cur)
    }

    /// Prefix of `self` containing the first `n` actions above the base.
    pub fn prefix(&self, n: usize) -> Option<SituationTerm> {
        let (actions, base) = self.decompose();
        if n > actions.len() {
            return None;
        }
        Some(SituationTerm::chain(
            &actions[..n].iter().map(|a| (*a).clone()).collect::<Vec<_>>(),
            base.clone(),
        ))
    }
}

impl fmt::Display for SituationTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SituationTerm::S0 => write!(f, "S0"),
            SituationTerm::Do(a, s) => write!(f, "do({a}, {s})"),
            SituationTerm::Placeholder(p) => write!(f, "{p}"),
        }
    }
}

/// Operand of an equality atom: object, reaction or action term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Obj(ObjectTerm),
    React(ReactionTerm),
    /// The successor-state axiom's distinguished action variable.
    ActVar(Symbol),
    Act(Box<SystemAction>),
}

impl Term {
    pub fn is_ground(&self) -> bool {
        match self {
            Term::Obj(t) => t.is_ground(),
            Term::React(t) => t.is_ground(),
            Term::ActVar(_) => false,
            Term::Act(a) => a.is_ground(),
        }
    }

    pub fn var_name(&self) -> Option<(&Symbol, VarKind)> {
        match self {
            Term::Obj(ObjectTerm::Var(v)) => Some((v, VarKind::Object)),
            Term::React(ReactionTerm::Var(v)) => Some((v, VarKind::Reaction)),
            Term::ActVar(v) => Some((v, VarKind::Action)),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Obj(t) => write!(f, "{t}"),
            Term::React(t) => write!(f, "{t}"),
            Term::ActVar(v) => write!(f, "{v}"),
            Term::Act(a) => write!(f, "{a}"),
        }
    }
}

/// A substitution from variable names to terms.
pub type Binding = BTreeMap<Symbol, Term>;

#[cfg(test)]
mod tests {
    use super::*;

    fn move_act(i: &str, j: &str, e: &str) -> SystemAction {
        SystemAction::new(
            "move",
            vec![ObjectTerm::constant(i), ObjectTerm::constant(j)],
            ReactionTerm::constant(e),
        )
    }

    #[test]
    fn timestamps_count_do_wrappers() {
        let s0 = SituationTerm::S0;
        assert_eq!(s0.timestamp(), Some(0));
        let s1 = s0.succ(move_act("I0", "I1", "Vul"));
        let s2 = s1.succ(move_act("I1", "I2", "NotVul"));
        assert_eq!(s1.timestamp(), Some(1));
        assert_eq!(s2.timestamp(), Some(2));
        let ph = SituationTerm::Placeholder(Symbol::new("s1"));
        assert_eq!(ph.succ(move_act("I0", "I1", "Vul")).timestamp(), None);
    }

    #[test]
    fn prefixes_follow_the_chain() {
        let a1 = move_act("I0", "I1", "Vul");
        let a2 = move_act("I1", "I2", "NotVul");
        let s = SituationTerm::chain(&[a1.clone(), a2], SituationTerm::S0);
        assert_eq!(s.prefix(0), Some(SituationTerm::S0));
        assert_eq!(s.prefix(1), Some(SituationTerm::S0.succ(a1)));
        assert_eq!(s.prefix(2), Some(s.clone()));
        assert_eq!(s.prefix(3), None);
    }

    #[test]
    fn groundness() {
        let ground = move_act("I0", "I1", "Vul");
        assert!(ground.is_ground());
        let open = SystemAction::new(
            "move",
            vec![ObjectTerm::var("i"), ObjectTerm::constant("I1")],
            ReactionTerm::constant("Vul"),
        );
        assert!(!open.is_ground());
        assert!(!SituationTerm::Placeholder(Symbol::new("now")).is_ground());
    }
}
