//! Nondeterministic basic action theories with a complete finite initial
//! state, and their well-formedness checking.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::formula::DynamicFormula;
use crate::symbol::Symbol;
use crate::term::{ObjectTerm, ReactionTerm, Sort, SystemAction, Term};

/// Declaration of a relational fluent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FluentDecl {
    pub name: Symbol,
    pub param_sorts: Vec<Symbol>,
}

/// Declaration of a rigid (situation-independent) relation together with its
/// complete finite extension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RigidDecl {
    pub name: Symbol,
    pub arity: usize,
    pub tuples: Vec<Vec<Symbol>>,
}

/// Declaration of an action: parameters, its finite reaction set, the agent
/// precondition and the full system precondition.
///
/// `poss_sys` is the complete right-hand side of the system precondition
/// axiom `Poss(A(x⃗, e), s) ≡ φ`, over the parameters and the distinguished
/// reaction variable; it is not implicitly conjoined with `poss_ag`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ActionDecl {
    pub name: Symbol,
    /// Parameter names with their object sorts.
    pub params: Vec<(Symbol, Symbol)>,
    /// Declared reaction constants, in declaration order; never empty.
    pub reactions: Vec<Symbol>,
    /// Name of the reaction variable used in `poss_sys` (conventionally `e`).
    pub reaction_var: Symbol,
    pub poss_ag: DynamicFormula,
    pub poss_sys: DynamicFormula,
}

/// Successor-state axiom `F(x⃗, do(a, s)) ≡ body`, with `body` a
/// situation-suppressed formula over the fluent parameters and the
/// distinguished action variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SSADecl {
    pub fluent: Symbol,
    pub params: Vec<(Symbol, Symbol)>,
    /// Name of the action variable used in the body (conventionally `a`).
    pub action_var: Symbol,
    pub body: DynamicFormula,
}

/// A ground fluent atom, `F(c1, …, cn)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct GroundAtom {
    pub name: Symbol,
    pub args: Vec<Symbol>,
}

impl GroundAtom {
    pub fn new(name: &str, args: &[&str]) -> Self {
        GroundAtom {
            name: Symbol::new(name),
            args: args.iter().map(|a| Symbol::new(a)).collect(),
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// A nondeterministic basic action theory over a fixed finite initial model.
///
/// The closed world applies at `S0`: a ground fluent atom not listed in
/// `init` is false initially. Distinct constants denote distinct individuals
/// and distinct action terms denote distinct actions (unique names).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NDBATheory {
    pub name: Symbol,
    pub sorts: Vec<Symbol>,
    /// Object constants with their sorts, in declaration order.
    pub objects: Vec<(Symbol, Symbol)>,
    pub rigids: Vec<RigidDecl>,
    pub fluents: Vec<FluentDecl>,
    pub actions: Vec<ActionDecl>,
    pub ssas: Vec<SSADecl>,
    /// Exact set of ground fluent atoms true at `S0`, as written.
    pub init: Vec<GroundAtom>,
    /// Unique-names policy marker; always true for parsed theories.
    pub unique_names: bool,
}

impl NDBATheory {
    pub fn fluent(&self, name: &Symbol) -> Option<&FluentDecl> {
        self.fluents.iter().find(|f| &f.name == name)
    }

    pub fn rigid(&self, name: &Symbol) -> Option<&RigidDecl> {
        self.rigids.iter().find(|r| &r.name == name)
    }

    pub fn action(&self, name: &Symbol) -> Option<&ActionDecl> {
        self.actions.iter().find(|a| &a.name == name)
    }

    pub fn ssa(&self, fluent: &Symbol) -> Option<&SSADecl> {
        self.ssas.iter().find(|s| &s.fluent == fluent)
    }

    pub fn sort_declared(&self, sort: &Symbol) -> bool {
        self.sorts.iter().any(|s| s == sort)
    }

    /// Constants of one object sort, in declaration order.
    pub fn object_domain(&self, sort: &Symbol) -> Vec<Symbol> {
        self.objects
            .iter()
            .filter(|(_, s)| s == sort)
            .map(|(c, _)| c.clone())
            .collect()
    }

    pub fn object_sort(&self, constant: &Symbol) -> Option<&Symbol> {
        self.objects.iter().find(|(c, _)| c == constant).map(|(_, s)| s)
    }

    /// Union of all declared reaction constants, deduplicated, in declaration
    /// order. Reaction-sorted quantifiers range over this set.
    pub fn reaction_domain(&self) -> Vec<Symbol> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for a in &self.actions {
            for r in &a.reactions {
                if seen.insert(r.clone()) {
                    out.push(r.clone());
                }
            }
        }
        out
    }

    pub fn is_reaction_constant(&self, name: &Symbol) -> bool {
        self.actions.iter().any(|a| a.reactions.contains(name))
    }

    /// Candidate reactions when agent action `name` is resolved to a system
    /// action: the action's own declared reactions first, then the remaining
    /// global ones.
    pub fn candidate_reactions(&self, name: &Symbol) -> Vec<Symbol> {
        let mut out = match self.action(name) {
            Some(decl) => decl.reactions.clone(),
            None => Vec::new(),
        };
        for r in self.reaction_domain() {
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    pub fn rigid_holds(&self, name: &Symbol, args: &[Symbol]) -> bool {
        self.rigid(name)
            .map(|r| r.tuples.iter().any(|t| t.as_slice() == args))
            .unwrap_or(false)
    }

    pub fn initial_state(&self) -> BTreeSet<GroundAtom> {
        self.init.iter().cloned().collect()
    }

    /// All ground argument tuples for the given parameter sorts.
    pub fn ground_tuples(&self, sorts: &[Symbol]) -> Vec<Vec<Symbol>> {
        let mut out = vec![Vec::new()];
        for sort in sorts {
            let domain = self.object_domain(sort);
            let mut next = Vec::with_capacity(out.len() * domain.len());
            for prefix in &out {
                for c in &domain {
                    let mut t = prefix.clone();
                    t.push(c.clone());
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }

    /// Every ground instance of every declared fluent.
    pub fn ground_fluent_atoms(&self) -> Vec<GroundAtom> {
        let mut out = Vec::new();
        for f in &self.fluents {
            for args in self.ground_tuples(&f.param_sorts) {
                out.push(GroundAtom { name: f.name.clone(), args });
            }
        }
        out
    }

    /// All ground agent actions of the theory.
    pub fn ground_agent_actions(&self) -> Vec<crate::term::AgentAction> {
        let mut out = Vec::new();
        for a in &self.actions {
            let sorts: Vec<Symbol> = a.params.iter().map(|(_, s)| s.clone()).collect();
            for args in self.ground_tuples(&sorts) {
                out.push(crate::term::AgentAction::new(
                    a.name.clone(),
                    args.into_iter().map(ObjectTerm::Const).collect(),
                ));
            }
        }
        out
    }
}

/// Classification of a validation finding.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum FindingCode {
    DuplicateSort,
    DuplicateObject,
    DuplicateFluent,
    DuplicateRigid,
    DuplicateAction,
    DuplicateSSA,
    MissingSSA,
    EmptyReactions,
    ObjectReactionClash,
    UndeclaredSort,
    UndeclaredObject,
    UndeclaredFluent,
    UndeclaredAction,
    UndeclaredReaction,
    ReactionNotDeclaredForAction,
    ArityMismatch,
    ReactionInAgentPrecondition,
    UnboundVariable,
    UnsupportedQuantifierSort,
    InvalidStateFormula,
    SortMismatch,
    InitUndeclared,
    RigidTupleArity,
    UniqueNamesDisabled,
}

/// One structured validation finding.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct Finding {
    pub code: FindingCode,
    pub message: String,
    pub witness: Vec<String>,
}

impl Finding {
    fn new(code: FindingCode, message: impl Into<String>, witness: Vec<String>) -> Self {
        Finding { code, message: message.into(), witness }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.code, self.message)
    }
}

/// Context in which a formula is checked.
struct FormulaCtx<'a> {
    theory: &'a NDBATheory,
    /// Visible variables with their sorts.
    vars: BTreeMap<Symbol, Sort>,
    /// Whether the formula may use Poss/After/time/Causes. State formulas
    /// (SSA bodies and preconditions) must be uniform in the situation and
    /// may not.
    dynamic_constructs: bool,
    /// Action whose poss_sys is being checked, if any: reaction constants
    /// must come from its declared set.
    own_action: Option<&'a ActionDecl>,
    place: String,
}

/// Checks structural well-formedness; an empty report means well-formed.
///
/// Findings are data, deterministically ordered, never panics.
pub fn validate_theory(theory: &NDBATheory) -> Vec<Finding> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for s in &theory.sorts {
        if !seen.insert(s.clone()) {
            out.push(Finding::new(
                FindingCode::DuplicateSort,
                format!("sort {s} declared twice"),
                vec![s.to_string()],
            ));
        }
        if s.as_str() == "Reaction" || s.as_str() == "Action" {
            out.push(Finding::new(
                FindingCode::DuplicateSort,
                format!("sort name {s} is reserved"),
                vec![s.to_string()],
            ));
        }
    }

    let mut seen = BTreeSet::new();
    for (c, sort) in &theory.objects {
        if !seen.insert(c.clone()) {
            out.push(Finding::new(
                FindingCode::DuplicateObject,
                format!("object {c} declared twice"),
                vec![c.to_string()],
            ));
        }
        if !theory.sort_declared(sort) {
            out.push(Finding::new(
                FindingCode::UndeclaredSort,
                format!("object {c} has undeclared sort {sort}"),
                vec![c.to_string(), sort.to_string()],
            ));
        }
        if theory.is_reaction_constant(c) {
            out.push(Finding::new(
                FindingCode::ObjectReactionClash,
                format!("{c} is declared both as an object and as a reaction"),
                vec![c.to_string()],
            ));
        }
    }

    let mut seen = BTreeSet::new();
    for f in &theory.fluents {
        if !seen.insert(f.name.clone()) || theory.rigid(&f.name).is_some() {
            out.push(Finding::new(
                FindingCode::DuplicateFluent,
                format!("relation name {} declared more than once", f.name),
                vec![f.name.to_string()],
            ));
        }
        for s in &f.param_sorts {
            if !theory.sort_declared(s) {
                out.push(Finding::new(
                    FindingCode::UndeclaredSort,
                    format!("fluent {} uses undeclared sort {s}", f.name),
                    vec![f.name.to_string(), s.to_string()],
                ));
            }
        }
    }

    let mut seen = BTreeSet::new();
    for r in &theory.rigids {
        if !seen.insert(r.name.clone()) {
            out.push(Finding::new(
                FindingCode::DuplicateRigid,
                format!("rigid {} declared twice", r.name),
                vec![r.name.to_string()],
            ));
        }
        for t in &r.tuples {
            if t.len() != r.arity {
                out.push(Finding::new(
                    FindingCode::RigidTupleArity,
                    format!("rigid {} tuple has {} elements, arity is {}", r.name, t.len(), r.arity),
                    vec![r.name.to_string()],
                ));
            }
            for c in t {
                if theory.object_sort(c).is_none() {
                    out.push(Finding::new(
                        FindingCode::UndeclaredObject,
                        format!("rigid {} tuple mentions undeclared constant {c}", r.name),
                        vec![r.name.to_string(), c.to_string()],
                    ));
                }
            }
        }
    }

    let mut seen = BTreeSet::new();
    for a in &theory.actions {
        if !seen.insert(a.name.clone()) {
            out.push(Finding::new(
                FindingCode::DuplicateAction,
                format!("action {} declared twice", a.name),
                vec![a.name.to_string()],
            ));
        }
        if a.reactions.is_empty() {
            out.push(Finding::new(
                FindingCode::EmptyReactions,
                format!("action {} declares no reactions", a.name),
                vec![a.name.to_string()],
            ));
        }
        for (p, s) in &a.params {
            if !theory.sort_declared(s) {
                out.push(Finding::new(
                    FindingCode::UndeclaredSort,
                    format!("action {} parameter {p} has undeclared sort {s}", a.name),
                    vec![a.name.to_string(), s.to_string()],
                ));
            }
        }

        let mut vars: BTreeMap<Symbol, Sort> =
            a.params.iter().map(|(p, s)| (p.clone(), Sort::Object(s.clone()))).collect();
        check_formula(
            &a.poss_ag,
            &FormulaCtx {
                theory,
                vars: vars.clone(),
                dynamic_constructs: false,
                own_action: None,
                place: format!("poss_ag of {}", a.name),
            },
            &mut out,
        );
        if a.poss_ag.free_variables().contains_key(&a.reaction_var) {
            out.push(Finding::new(
                FindingCode::ReactionInAgentPrecondition,
                format!("agent precondition of {} mentions the reaction variable", a.name),
                vec![a.name.to_string()],
            ));
        }
        vars.insert(a.reaction_var.clone(), Sort::Reaction);
        check_formula(
            &a.poss_sys,
            &FormulaCtx {
                theory,
                vars,
                dynamic_constructs: false,
                own_action: Some(a),
                place: format!("poss of {}", a.name),
            },
            &mut out,
        );
    }

    let mut seen = BTreeSet::new();
    for ssa in &theory.ssas {
        match theory.fluent(&ssa.fluent) {
            None => out.push(Finding::new(
                FindingCode::UndeclaredFluent,
                format!("successor-state axiom for undeclared fluent {}", ssa.fluent),
                vec![ssa.fluent.to_string()],
            )),
            Some(decl) => {
                if decl.param_sorts.len() != ssa.params.len() {
                    out.push(Finding::new(
                        FindingCode::ArityMismatch,
                        format!(
                            "successor-state axiom for {} has {} parameters, fluent has {}",
                            ssa.fluent,
                            ssa.params.len(),
                            decl.param_sorts.len()
                        ),
                        vec![ssa.fluent.to_string()],
                    ));
                }
            }
        }
        if !seen.insert(ssa.fluent.clone()) {
            out.push(Finding::new(
                FindingCode::DuplicateSSA,
                format!("fluent {} has more than one successor-state axiom", ssa.fluent),
                vec![ssa.fluent.to_string()],
            ));
        }
        let mut vars: BTreeMap<Symbol, Sort> =
            ssa.params.iter().map(|(p, s)| (p.clone(), Sort::Object(s.clone()))).collect();
        vars.insert(ssa.action_var.clone(), Sort::Action);
        check_formula(
            &ssa.body,
            &FormulaCtx {
                theory,
                vars,
                dynamic_constructs: false,
                own_action: None,
                place: format!("successor-state axiom of {}", ssa.fluent),
            },
            &mut out,
        );
    }
    for f in &theory.fluents {
        if theory.ssa(&f.name).is_none() {
            out.push(Finding::new(
                FindingCode::MissingSSA,
                format!("fluent {} has no successor-state axiom", f.name),
                vec![f.name.to_string()],
            ));
        }
    }

    for atom in &theory.init {
        match theory.fluent(&atom.name) {
            None => out.push(Finding::new(
                FindingCode::InitUndeclared,
                format!("initial atom {atom} is not a declared fluent"),
                vec![atom.to_string()],
            )),
            Some(decl) => {
                if decl.param_sorts.len() != atom.args.len() {
                    out.push(Finding::new(
                        FindingCode::ArityMismatch,
                        format!("initial atom {atom} has wrong arity"),
                        vec![atom.to_string()],
                    ));
                } else {
                    for (arg, sort) in atom.args.iter().zip(&decl.param_sorts) {
                        if theory.object_sort(arg) != Some(sort) {
                            out.push(Finding::new(
                                FindingCode::InitUndeclared,
                                format!("initial atom {atom}: {arg} is not a constant of sort {sort}"),
                                vec![atom.to_string(), arg.to_string()],
                            ));
                        }
                    }
                }
            }
        }
    }

    if !theory.unique_names {
        out.push(Finding::new(
            FindingCode::UniqueNamesDisabled,
            "theory does not assume unique names; the evaluator requires them",
            vec![],
        ));
    }

    out.sort();
    out.dedup();
    out
}

fn check_formula(f: &DynamicFormula, ctx: &FormulaCtx<'_>, out: &mut Vec<Finding>) {
    match f {
        DynamicFormula::True | DynamicFormula::False => {}
        DynamicFormula::TimeCmp(..) => {
            if !ctx.dynamic_constructs {
                out.push(Finding::new(
                    FindingCode::InvalidStateFormula,
                    format!("time atom is not allowed in {}", ctx.place),
                    vec![ctx.place.clone()],
                ));
            }
        }
        DynamicFormula::Fluent(name, args) => {
            let mut expected = None;
            match ctx.theory.fluent(name) {
                None => out.push(Finding::new(
                    FindingCode::UndeclaredFluent,
                    format!("undeclared fluent {name} in {}", ctx.place),
                    vec![name.to_string(), ctx.place.clone()],
                )),
                Some(decl) => {
                    if decl.param_sorts.len() != args.len() {
                        out.push(Finding::new(
                            FindingCode::ArityMismatch,
                            format!("fluent {name} applied to {} arguments in {}", args.len(), ctx.place),
                            vec![name.to_string(), ctx.place.clone()],
                        ));
                    } else {
                        expected = Some(decl.param_sorts.as_slice());
                    }
                }
            }
            check_object_args(args, expected, ctx, out);
        }
        DynamicFormula::Rigid(name, args) => {
            match ctx.theory.rigid(name) {
                None => out.push(Finding::new(
                    FindingCode::UndeclaredFluent,
                    format!("undeclared rigid relation {name} in {}", ctx.place),
                    vec![name.to_string(), ctx.place.clone()],
                )),
                Some(decl) => {
                    if decl.arity != args.len() {
                        out.push(Finding::new(
                            FindingCode::ArityMismatch,
                            format!("rigid {name} applied to {} arguments in {}", args.len(), ctx.place),
                            vec![name.to_string(), ctx.place.clone()],
                        ));
                    }
                }
            }
            check_object_args(args, None, ctx, out);
        }
        DynamicFormula::Poss(a) => {
            if !ctx.dynamic_constructs {
                out.push(Finding::new(
                    FindingCode::InvalidStateFormula,
                    format!("Poss atom is not allowed in {}", ctx.place),
                    vec![ctx.place.clone()],
                ));
            }
            check_system_action(a, ctx, out);
        }
        DynamicFormula::After(a, p) => {
            if !ctx.dynamic_constructs {
                out.push(Finding::new(
                    FindingCode::InvalidStateFormula,
                    format!("After is not allowed in {}", ctx.place),
                    vec![ctx.place.clone()],
                ));
            }
            check_system_action(a, ctx, out);
            check_formula(p, ctx, out);
        }
        DynamicFormula::Causes(a, _, p) => {
            if !ctx.dynamic_constructs {
                out.push(Finding::new(
                    FindingCode::InvalidStateFormula,
                    format!("Causes is not allowed in {}", ctx.place),
                    vec![ctx.place.clone()],
                ));
            }
            check_system_action(a, ctx, out);
            check_formula(p, ctx, out);
        }
        DynamicFormula::Not(p) => check_formula(p, ctx, out),
        DynamicFormula::And(ps) | DynamicFormula::Or(ps) => {
            for p in ps {
                check_formula(p, ctx, out);
            }
        }
        DynamicFormula::Exists(vs, p) | DynamicFormula::Forall(vs, p) => {
            let mut inner = FormulaCtx {
                theory: ctx.theory,
                vars: ctx.vars.clone(),
                dynamic_constructs: ctx.dynamic_constructs,
                own_action: ctx.own_action,
                place: ctx.place.clone(),
            };
            for v in vs {
                match &v.sort {
                    Sort::Object(s) => {
                        if !ctx.theory.sort_declared(s) {
                            out.push(Finding::new(
                                FindingCode::UndeclaredSort,
                                format!("quantifier over undeclared sort {s} in {}", ctx.place),
                                vec![s.to_string(), ctx.place.clone()],
                            ));
                        }
                        inner.vars.insert(v.name.clone(), v.sort.clone());
                    }
                    Sort::Reaction => {
                        inner.vars.insert(v.name.clone(), Sort::Reaction);
                    }
                    Sort::Action => {
                        out.push(Finding::new(
                            FindingCode::UnsupportedQuantifierSort,
                            format!("quantification over actions in {}", ctx.place),
                            vec![ctx.place.clone()],
                        ));
                        inner.vars.insert(v.name.clone(), Sort::Action);
                    }
                }
            }
            check_formula(p, &inner, out);
        }
        DynamicFormula::Eq(l, r) => {
            check_term(l, ctx, out);
            check_term(r, ctx, out);
        }
    }
}

/// Checks object arguments against expected sorts; `None` checks
/// declaredness only (rigid relations declare an arity, not sorts).
fn check_object_args(
    args: &[ObjectTerm],
    expected: Option<&[Symbol]>,
    ctx: &FormulaCtx<'_>,
    out: &mut Vec<Finding>,
) {
    for (i, arg) in args.iter().enumerate() {
        let want = expected.and_then(|sorts| sorts.get(i));
        match arg {
            ObjectTerm::Const(c) => match ctx.theory.object_sort(c) {
                None => out.push(Finding::new(
                    FindingCode::UndeclaredObject,
                    format!("undeclared constant {c} in {}", ctx.place),
                    vec![c.to_string(), ctx.place.clone()],
                )),
                Some(have) => {
                    if let Some(want) = want {
                        if have != want {
                            out.push(Finding::new(
                                FindingCode::SortMismatch,
                                format!(
                                    "constant {c} has sort {have}, expected {want} in {}",
                                    ctx.place
                                ),
                                vec![c.to_string(), ctx.place.clone()],
                            ));
                        }
                    }
                }
            },
            ObjectTerm::Var(v) => match ctx.vars.get(v) {
                Some(Sort::Object(have)) => {
                    if let Some(want) = want {
                        if have != want {
                            out.push(Finding::new(
                                FindingCode::SortMismatch,
                                format!(
                                    "variable {v} has sort {have}, expected {want} in {}",
                                    ctx.place
                                ),
                                vec![v.to_string(), ctx.place.clone()],
                            ));
                        }
                    }
                }
                _ => out.push(Finding::new(
                    FindingCode::UnboundVariable,
                    format!("unbound or ill-sorted variable {v} in {}", ctx.place),
                    vec![v.to_string(), ctx.place.clone()],
                )),
            },
        }
    }
}

fn check_reaction_term(r: &ReactionTerm, ctx: &FormulaCtx<'_>, out: &mut Vec<Finding>) {
    match r {
        ReactionTerm::Const(c) => {
            if !ctx.theory.is_reaction_constant(c) {
                out.push(Finding::new(
                    FindingCode::UndeclaredReaction,
                    format!("undeclared reaction constant {c} in {}", ctx.place),
                    vec![c.to_string(), ctx.place.clone()],
                ));
            } else if let Some(own) = ctx.own_action {
                if !own.reactions.contains(c) {
                    out.push(Finding::new(
                        FindingCode::ReactionNotDeclaredForAction,
                        format!(
                            "reaction {c} in {} is not declared for action {}",
                            ctx.place, own.name
                        ),
                        vec![c.to_string(), own.name.to_string()],
                    ));
                }
            }
        }
        ReactionTerm::Var(v) => {
            if ctx.vars.get(v) != Some(&Sort::Reaction) {
                out.push(Finding::new(
                    FindingCode::UnboundVariable,
                    format!("unbound or ill-sorted reaction variable {v} in {}", ctx.place),
                    vec![v.to_string(), ctx.place.clone()],
                ));
            }
        }
    }
}

fn check_system_action(a: &SystemAction, ctx: &FormulaCtx<'_>, out: &mut Vec<Finding>) {
    let mut expected: Option<Vec<Symbol>> = None;
    match ctx.theory.action(&a.name) {
        None => out.push(Finding::new(
            FindingCode::UndeclaredAction,
            format!("undeclared action {} in {}", a.name, ctx.place),
            vec![a.name.to_string(), ctx.place.clone()],
        )),
        Some(decl) => {
            if decl.params.len() != a.args.len() {
                out.push(Finding::new(
                    FindingCode::ArityMismatch,
                    format!("action {} applied to {} arguments in {}", a.name, a.args.len(), ctx.place),
                    vec![a.name.to_string(), ctx.place.clone()],
                ));
            } else {
                expected = Some(decl.params.iter().map(|(_, s)| s.clone()).collect());
            }
        }
    }
    check_object_args(&a.args, expected.as_deref(), ctx, out);
    check_reaction_term(&a.reaction, ctx, out);
}

fn check_term(t: &Term, ctx: &FormulaCtx<'_>, out: &mut Vec<Finding>) {
    match t {
        Term::Obj(o) => check_object_args(std::slice::from_ref(o), None, ctx, out),
        Term::React(r) => check_reaction_term(r, ctx, out),
        Term::ActVar(v) => {
            if ctx.vars.get(v) != Some(&Sort::Action) {
                out.push(Finding::new(
                    FindingCode::UnboundVariable,
                    format!("unbound action variable {v} in {}", ctx.place),
                    vec![v.to_string(), ctx.place.clone()],
                ));
            }
        }
        Term::Act(a) => check_system_action(a, ctx, out),
    }
}
