//! Deterministic random generation of small well-formed theories and
//! extended regressable queries, for the verification harness and the
//! property suites.
//!
//! Generation is seed-stable across platforms: it uses a self-contained
//! PCG32 stream rather than an external RNG.

use crate::formula::DynamicFormula;
use crate::oracle::Evaluator;
use crate::query::CausalQuery;
use crate::symbol::Symbol;
use crate::term::{
    AgentAction, ObjectTerm, ReactionTerm, SituationTerm, Sort, SystemAction, Term, Variable,
};
use crate::theory::{ActionDecl, FluentDecl, GroundAtom, NDBATheory, RigidDecl, SSADecl};

/// PCG-XSH-RR 32-bit generator.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
    inc: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut rng = Rng { state: 0, inc: (seed << 1) | 1 };
        rng.next_u32();
        rng.state = rng.state.wrapping_add(seed);
        rng.next_u32();
        rng
    }

    pub fn next_u32(&mut self) -> u32 {
        let old = self.state;
        self.state = old
            .wrapping_mul(6364136223846793005)
            .wrapping_add(self.inc | 1);
        let xorshifted = (((old >> 18) ^ old) >> 27) as u32;
        let rot = (old >> 59) as u32;
        xorshifted.rotate_right(rot)
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u32() as usize) % n
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        lo + self.below(hi_inclusive - lo + 1)
    }

    pub fn chance(&mut self, percent: u32) -> bool {
        self.next_u32() % 100 < percent
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

/// Size limits for generated theories.
#[derive(Clone, Copy, Debug)]
pub struct TheoryShape {
    pub max_objects: usize,
    pub max_fluents: usize,
    pub max_actions: usize,
    pub max_reactions: usize,
    pub max_fluent_arity: usize,
    pub max_action_arity: usize,
    /// Split the objects over a second sort.
    pub two_sorts: bool,
    /// Every action gets exactly one reaction admissible everywhere.
    pub degenerate: bool,
}

impl Default for TheoryShape {
    fn default() -> Self {
        TheoryShape {
            max_objects: 4,
            max_fluents: 3,
            max_actions: 2,
            max_reactions: 2,
            max_fluent_arity: 1,
            max_action_arity: 1,
            two_sorts: false,
            degenerate: false,
        }
    }
}

const REACTION_POOL: [&str; 2] = ["R1", "R2"];

pub fn gen_theory(rng: &mut Rng, shape: &TheoryShape) -> NDBATheory {
    let mut sorts = vec![Symbol::new("Obj")];
    if shape.two_sorts {
        sorts.push(Symbol::new("Aux"));
    }
    let n_objects = rng.range(2, shape.max_objects.max(2));
    let objects: Vec<(Symbol, Symbol)> = (1..=n_objects)
        .map(|i| {
            let sort = if shape.two_sorts && i > n_objects / 2 { &sorts[1] } else { &sorts[0] };
            (Symbol::from(format!("O{i}")), sort.clone())
        })
        .collect();
    let object_names: Vec<Symbol> = objects.iter().map(|(c, _)| c.clone()).collect();
    let pick_sort = |rng: &mut Rng, sorts: &[Symbol]| sorts[rng.below(sorts.len())].clone();

    let n_fluents = rng.range(1, shape.max_fluents.max(1));
    let fluents: Vec<FluentDecl> = (1..=n_fluents)
        .map(|i| FluentDecl {
            name: Symbol::from(format!("F{i}")),
            param_sorts: (0..rng.below(shape.max_fluent_arity + 1))
                .map(|_| pick_sort(rng, &sorts))
                .collect(),
        })
        .collect();

    let rigids = if rng.chance(50) {
        let mut tuples = Vec::new();
        for a in &object_names {
            for b in &object_names {
                if rng.chance(40) {
                    tuples.push(vec![a.clone(), b.clone()]);
                }
            }
        }
        vec![RigidDecl { name: Symbol::new("G"), arity: 2, tuples }]
    } else {
        vec![]
    };

    let mut proto = NDBATheory {
        name: Symbol::new("fuzz"),
        sorts: sorts.clone(),
        objects,
        rigids,
        fluents,
        actions: vec![],
        ssas: vec![],
        init: vec![],
        unique_names: true,
    };

    let n_actions = rng.range(1, shape.max_actions.max(1));
    for i in 1..=n_actions {
        let arity = rng.below(shape.max_action_arity + 1);
        let params: Vec<(Symbol, Symbol)> = (0..arity)
            .map(|k| (Symbol::from(format!("x{}", k + 1)), pick_sort(rng, &sorts)))
            .collect();
        let reactions: Vec<Symbol> = if shape.degenerate {
            vec![Symbol::new(REACTION_POOL[rng.below(REACTION_POOL.len())])]
        } else {
            let n = rng.range(1, shape.max_reactions.clamp(1, REACTION_POOL.len()));
            REACTION_POOL.iter().take(n).map(|r| Symbol::new(r)).collect()
        };
        let poss_ag = gen_state_conjunction(rng, &proto, &params, 2);
        let constraint = gen_reaction_constraint(rng, &proto, &params, &reactions, shape.degenerate);
        let poss_sys = DynamicFormula::and(vec![poss_ag.clone(), constraint]);
        proto.actions.push(ActionDecl {
            name: Symbol::from(format!("A{i}")),
            params,
            reactions,
            reaction_var: Symbol::new("e"),
            poss_ag,
            poss_sys,
        });
    }

    for fluent in proto.fluents.clone() {
        let params: Vec<(Symbol, Symbol)> = fluent
            .param_sorts
            .iter()
            .enumerate()
            .map(|(k, s)| (Symbol::from(format!("y{}", k + 1)), s.clone()))
            .collect();
        let body = gen_ssa_body(rng, &proto, &fluent, &params);
        proto.ssas.push(SSADecl {
            fluent: fluent.name.clone(),
            params,
            action_var: Symbol::new("a"),
            body,
        });
    }

    for atom in proto.ground_fluent_atoms() {
        if rng.chance(35) {
            proto.init.push(atom);
        }
    }
    proto
}

/// A conjunction of state literals over the parameters and constants.
fn gen_state_conjunction(
    rng: &mut Rng,
    theory: &NDBATheory,
    params: &[(Symbol, Symbol)],
    max_literals: usize,
) -> DynamicFormula {
    let n = rng.below(max_literals + 1);
    let mut parts = Vec::new();
    for _ in 0..n {
        parts.push(gen_state_literal(rng, theory, params));
    }
    DynamicFormula::and(parts)
}

/// An object term of the given sort: a matching parameter or a constant.
fn gen_object_arg(
    rng: &mut Rng,
    theory: &NDBATheory,
    params: &[(Symbol, Symbol)],
    sort: &Symbol,
) -> ObjectTerm {
    let matching: Vec<&(Symbol, Symbol)> = params.iter().filter(|(_, s)| s == sort).collect();
    if !matching.is_empty() && rng.chance(60) {
        ObjectTerm::Var(rng.pick(&matching).0.clone())
    } else {
        let domain = theory.object_domain(sort);
        ObjectTerm::Const(rng.pick(&domain).clone())
    }
}

fn gen_state_literal(
    rng: &mut Rng,
    theory: &NDBATheory,
    params: &[(Symbol, Symbol)],
) -> DynamicFormula {
    let use_rigid = !theory.rigids.is_empty() && rng.chance(30);
    let atom = if use_rigid {
        let rigid = theory.rigids[0].clone();
        let any_sort = theory.sorts[rng.below(theory.sorts.len())].clone();
        DynamicFormula::Rigid(
            rigid.name.clone(),
            (0..rigid.arity).map(|_| gen_object_arg(rng, theory, params, &any_sort)).collect(),
        )
    } else {
        let fluent = rng.pick(&theory.fluents).clone();
        DynamicFormula::Fluent(
            fluent.name.clone(),
            fluent.param_sorts.iter().map(|s| gen_object_arg(rng, theory, params, s)).collect(),
        )
    };
    if rng.chance(40) {
        atom.not()
    } else {
        atom
    }
}

/// Reaction constraint that always admits at least one reaction, so the
/// reaction existence requirement holds by construction.
fn gen_reaction_constraint(
    rng: &mut Rng,
    theory: &NDBATheory,
    params: &[(Symbol, Symbol)],
    reactions: &[Symbol],
    degenerate: bool,
) -> DynamicFormula {
    let evar = Symbol::new("e");
    let eq = |r: &Symbol| {
        DynamicFormula::Eq(
            Term::React(ReactionTerm::Var(evar.clone())),
            Term::React(ReactionTerm::Const(r.clone())),
        )
    };
    let all_of = |rs: &[Symbol]| DynamicFormula::or(rs.iter().map(&eq).collect());
    if degenerate || reactions.len() == 1 || rng.chance(50) {
        all_of(reactions)
    } else {
        // A guarded split; both branches admit a reaction.
        let guard = gen_state_literal(rng, theory, params);
        let split = rng.range(1, reactions.len() - 1);
        let (first, second) = reactions.split_at(split);
        DynamicFormula::and(vec![
            guard.clone().implies(all_of(first)),
            guard.not().implies(all_of(second)),
        ])
    }
}

/// Successor-state axiom body in the canonical effect-plus-frame shape:
/// positive triggers, and persistence unless a negative trigger fires.
fn gen_ssa_body(
    rng: &mut Rng,
    theory: &NDBATheory,
    fluent: &FluentDecl,
    params: &[(Symbol, Symbol)],
) -> DynamicFormula {
    let mut disjuncts = Vec::new();
    let n_pos = rng.below(3);
    let mut fresh = 0usize;
    for _ in 0..n_pos {
        disjuncts.push(gen_trigger(rng, theory, params, &mut fresh));
    }
    let frame_atom = DynamicFormula::Fluent(
        fluent.name.clone(),
        params.iter().map(|(p, _)| ObjectTerm::Var(p.clone())).collect(),
    );
    let frame = if rng.chance(40) {
        let neg = gen_trigger(rng, theory, params, &mut fresh);
        DynamicFormula::and(vec![frame_atom, neg.not()])
    } else {
        frame_atom
    };
    disjuncts.push(frame);
    DynamicFormula::or(disjuncts)
}

/// `∃…. a = A(pattern) [∧ context]`.
fn gen_trigger(
    rng: &mut Rng,
    theory: &NDBATheory,
    params: &[(Symbol, Symbol)],
    fresh: &mut usize,
) -> DynamicFormula {
    let action = rng.pick(&theory.actions).clone();
    let mut binders: Vec<Variable> = Vec::new();
    let args: Vec<ObjectTerm> = action
        .params
        .iter()
        .map(|(_, sort)| {
            let matching: Vec<&(Symbol, Symbol)> =
                params.iter().filter(|(_, s)| s == sort).collect();
            match rng.below(3) {
                0 if !matching.is_empty() => ObjectTerm::Var(rng.pick(&matching).0.clone()),
                1 => {
                    let domain = theory.object_domain(sort);
                    ObjectTerm::Const(rng.pick(&domain).clone())
                }
                _ => {
                    *fresh += 1;
                    let v = Symbol::from(format!("z{fresh}"));
                    binders.push(Variable::new(v.clone(), Sort::Object(sort.clone())));
                    ObjectTerm::Var(v)
                }
            }
        })
        .collect();
    let reaction = if rng.chance(50) {
        ReactionTerm::Const(rng.pick(&action.reactions).clone())
    } else {
        *fresh += 1;
        let v = Symbol::from(format!("z{fresh}"));
        binders.push(Variable::new(v.clone(), Sort::Reaction));
        ReactionTerm::Var(v)
    };
    let pattern = SystemAction { name: action.name.clone(), args, reaction };
    let mut parts = vec![DynamicFormula::Eq(
        Term::ActVar(Symbol::new("a")),
        Term::Act(Box::new(pattern)),
    )];
    if rng.chance(35) {
        parts.push(gen_state_literal(rng, theory, params));
    }
    DynamicFormula::exists(binders, DynamicFormula::and(parts))
}

/// Random ground agent action.
pub fn gen_agent_action(rng: &mut Rng, theory: &NDBATheory) -> AgentAction {
    let decl = rng.pick(&theory.actions).clone();
    let args = decl
        .params
        .iter()
        .map(|(_, sort)| {
            let domain = theory.object_domain(sort);
            ObjectTerm::Const(rng.pick(&domain).clone())
        })
        .collect();
    AgentAction { name: decl.name, args }
}

pub fn gen_agent_sequence(rng: &mut Rng, theory: &NDBATheory, max_len: usize) -> Vec<AgentAction> {
    (0..rng.below(max_len + 1)).map(|_| gen_agent_action(rng, theory)).collect()
}

/// Random situation-suppressed effect in the query grammar.
pub fn gen_effect(rng: &mut Rng, theory: &NDBATheory, depth: usize) -> DynamicFormula {
    gen_effect_inner(rng, theory, depth, &mut 0)
}

fn gen_effect_inner(
    rng: &mut Rng,
    theory: &NDBATheory,
    depth: usize,
    fresh: &mut usize,
) -> DynamicFormula {
    if depth == 0 || rng.chance(35) {
        return gen_state_literal(rng, theory, &[]);
    }
    match rng.below(6) {
        0 => gen_effect_inner(rng, theory, depth - 1, fresh).not(),
        1 => DynamicFormula::and(vec![
            gen_effect_inner(rng, theory, depth - 1, fresh),
            gen_effect_inner(rng, theory, depth - 1, fresh),
        ]),
        2 => DynamicFormula::or(vec![
            gen_effect_inner(rng, theory, depth - 1, fresh),
            gen_effect_inner(rng, theory, depth - 1, fresh),
        ]),
        3 => DynamicFormula::Poss(gen_system_action(rng, theory)),
        4 => DynamicFormula::After(
            gen_system_action(rng, theory),
            Box::new(gen_effect_inner(rng, theory, depth - 1, fresh)),
        ),
        _ => {
            *fresh += 1;
            let v = Symbol::from(format!("w{fresh}"));
            let fluents_with_arg: Vec<&FluentDecl> =
                theory.fluents.iter().filter(|f| !f.param_sorts.is_empty()).collect();
            if fluents_with_arg.is_empty() {
                return gen_state_literal(rng, theory, &[]);
            }
            let fluent = (*rng.pick(&fluents_with_arg)).clone();
            let sort = fluent.param_sorts[0].clone();
            let rest: Vec<ObjectTerm> = fluent.param_sorts[1..]
                .iter()
                .map(|s| gen_object_arg(rng, theory, &[], s))
                .collect();
            let mut args = vec![ObjectTerm::Var(v.clone())];
            args.extend(rest);
            DynamicFormula::Exists(
                vec![Variable::new(v, Sort::Object(sort))],
                Box::new(DynamicFormula::Fluent(fluent.name.clone(), args)),
            )
        }
    }
}

pub fn gen_system_action(rng: &mut Rng, theory: &NDBATheory) -> SystemAction {
    let agent = gen_agent_action(rng, theory);
    let reactions = theory.candidate_reactions(&agent.name);
    agent.with_reaction(ReactionTerm::Const(rng.pick(&reactions).clone()))
}

/// Random extended regressable query over the theory. System-action
/// scenarios are taken from executions of random agent sequences, so they
/// are executable as the cause definitions presuppose.
pub fn gen_query(rng: &mut Rng, theory: &NDBATheory, max_scenario: usize) -> CausalQuery {
    let effect = gen_effect(rng, theory, 2);
    let alpha = gen_agent_sequence(rng, theory, max_scenario);
    let ts = rng.range(0, max_scenario + 1) as i64 - 1;
    match rng.below(5) {
        0 => {
            let evaluator = Evaluator::new(theory);
            let executions = evaluator
                .enumerate_executions(&alpha, &SituationTerm::S0)
                .unwrap_or_else(|_| vec![SituationTerm::S0]);
            let scenario = if executions.is_empty() {
                SituationTerm::S0
            } else {
                executions[rng.below(executions.len())].clone()
            };
            let action = if rng.chance(80) && scenario.depth() > 0 {
                let (actions, _) = scenario.decompose();
                let mut a = (*rng.pick(&actions)).clone();
                if rng.chance(25) {
                    let candidates = theory.candidate_reactions(&a.name);
                    a.reaction = ReactionTerm::Const(rng.pick(&candidates).clone());
                }
                a
            } else {
                gen_system_action(rng, theory)
            };
            CausalQuery::Causes { action, ts, effect, scenario }
        }
        1 => CausalQuery::CAfter { seq: alpha, effect, sit: SituationTerm::S0 },
        2 => CausalQuery::PAfter { seq: alpha, effect, sit: SituationTerm::S0 },
        3 => {
            let action = pick_beta(rng, theory, &alpha);
            CausalQuery::CCauses { action, ts, effect, scenario: alpha }
        }
        _ => {
            let action = pick_beta(rng, theory, &alpha);
            CausalQuery::PCauses { action, ts, effect, scenario: alpha }
        }
    }
}

fn pick_beta(rng: &mut Rng, theory: &NDBATheory, alpha: &[AgentAction]) -> AgentAction {
    if !alpha.is_empty() && rng.chance(80) {
        rng.pick(alpha).clone()
    } else {
        gen_agent_action(rng, theory)
    }
}

/// Ground fluent atoms make convenient targeted effects in tests.
pub fn atom_effect(atom: &GroundAtom) -> DynamicFormula {
    DynamicFormula::Fluent(
        atom.name.clone(),
        atom.args.iter().map(|c| ObjectTerm::Const(c.clone())).collect(),
    )
}
