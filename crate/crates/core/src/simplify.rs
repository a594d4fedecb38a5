//! Truth-preserving simplification and the restricted initial-model
//! evaluator used by the regression route.
//!
//! The simplifier applies unique-names equality resolution, boolean laws
//! (unit absorption, double negation, flattening, complement detection),
//! one-point quantifier elimination, ground time evaluation, ground rigid
//! facts, and finite-domain quantifier expansion when expansion closes a
//! subformula that the initial model can decide. It never consults the
//! oracle's progression or execution machinery, so the regression route
//! stays independent of it.

use std::collections::BTreeMap;

use crate::formula::{ExtendedFormula, TimeOp};
use crate::symbol::Symbol;
use crate::term::{Binding, ObjectTerm, ReactionTerm, SituationTerm, Sort, Term, Variable};
use crate::theory::{GroundAtom, NDBATheory};

/// Evaluates a formula against the initial state axioms and unique names
/// alone: fluent atoms exactly at `S0`, rigid relations, ground equalities,
/// ground time atoms, connectives and finite quantifiers. Returns `None`
/// when the formula mentions anything beyond that fragment.
pub fn eval_initial(theory: &NDBATheory, f: &ExtendedFormula) -> Option<bool> {
    eval_initial_env(theory, f, &BTreeMap::new())
}

fn eval_initial_env(
    theory: &NDBATheory,
    f: &ExtendedFormula,
    env: &BTreeMap<Symbol, Term>,
) -> Option<bool> {
    match f {
        ExtendedFormula::True => Some(true),
        ExtendedFormula::False => Some(false),
        ExtendedFormula::Fluent(name, args, SituationTerm::S0) => {
            let args = args
                .iter()
                .map(|a| resolve_object(a, env))
                .collect::<Option<Vec<_>>>()?;
            Some(theory.initial_state().contains(&GroundAtom { name: name.clone(), args }))
        }
        ExtendedFormula::Fluent(..) => None,
        ExtendedFormula::Rigid(name, args) => {
            let args = args
                .iter()
                .map(|a| resolve_object(a, env))
                .collect::<Option<Vec<_>>>()?;
            Some(theory.rigid_holds(name, &args))
        }
        ExtendedFormula::Not(p) => Some(!eval_initial_env(theory, p, env)?),
        ExtendedFormula::And(ps) => {
            let mut all = true;
            for p in ps {
                // Evaluate every conjunct so non-evaluable atoms poison the
                // result regardless of short-circuiting.
                all &= eval_initial_env(theory, p, env)?;
            }
            Some(all)
        }
        ExtendedFormula::Or(ps) => {
            let mut any = false;
            for p in ps {
                any |= eval_initial_env(theory, p, env)?;
            }
            Some(any)
        }
        ExtendedFormula::Exists(vs, p) => expand_initial(theory, vs, p, env, true),
        ExtendedFormula::Forall(vs, p) => expand_initial(theory, vs, p, env, false),
        ExtendedFormula::Eq(l, r) => {
            let l = resolve_term(l, env)?;
            let r = resolve_term(r, env)?;
            eq_ground(&l, &r)
        }
        ExtendedFormula::TimeCmp(op, rhs, sit) => {
            let t = sit.timestamp()?;
            Some(match op {
                TimeOp::Eq => t == *rhs,
                TimeOp::Gt => t > *rhs,
            })
        }
        ExtendedFormula::Poss(..)
        | ExtendedFormula::Causes { .. }
        | ExtendedFormula::CAfter { .. }
        | ExtendedFormula::PAfter { .. }
        | ExtendedFormula::CCauses { .. }
        | ExtendedFormula::PCauses { .. } => None,
    }
}

fn expand_initial(
    theory: &NDBATheory,
    vars: &[Variable],
    body: &ExtendedFormula,
    env: &BTreeMap<Symbol, Term>,
    existential: bool,
) -> Option<bool> {
    match vars.split_first() {
        None => eval_initial_env(theory, body, env),
        Some((v, rest)) => {
            let domain: Vec<Term> = match &v.sort {
                Sort::Object(s) => theory
                    .object_domain(s)
                    .into_iter()
                    .map(|c| Term::Obj(ObjectTerm::Const(c)))
                    .collect(),
                Sort::Reaction => theory
                    .reaction_domain()
                    .into_iter()
                    .map(|c| Term::React(ReactionTerm::Const(c)))
                    .collect(),
                Sort::Action => return None,
            };
            let mut acc = !existential;
            for value in domain {
                let mut inner = env.clone();
                inner.insert(v.name.clone(), value);
                let got = expand_initial(theory, rest, body, &inner, existential)?;
                if existential {
                    acc |= got;
                } else {
                    acc &= got;
                }
            }
            Some(acc)
        }
    }
}

fn resolve_object(t: &ObjectTerm, env: &BTreeMap<Symbol, Term>) -> Option<Symbol> {
    match t {
        ObjectTerm::Const(c) => Some(c.clone()),
        ObjectTerm::Var(v) => match env.get(v) {
            Some(Term::Obj(ObjectTerm::Const(c))) => Some(c.clone()),
            _ => None,
        },
    }
}

fn resolve_term(t: &Term, env: &BTreeMap<Symbol, Term>) -> Option<Term> {
    match t {
        Term::Obj(ObjectTerm::Var(v)) | Term::React(ReactionTerm::Var(v)) | Term::ActVar(v) => {
            env.get(v).cloned()
        }
        Term::Obj(_) | Term::React(_) => Some(t.clone()),
        Term::Act(a) => {
            let mut binding = Binding::new();
            for (name, value) in env {
                binding.insert(name.clone(), value.clone());
            }
            let resolved = crate::formula::subst_system_action(a, &binding).ok()?;
            Some(Term::Act(Box::new(resolved)))
        }
    }
}

fn eq_ground(l: &Term, r: &Term) -> Option<bool> {
    if !l.is_ground() || !r.is_ground() {
        return None;
    }
    Some(match (l, r) {
        (Term::Obj(ObjectTerm::Const(a)), Term::Obj(ObjectTerm::Const(b))) => a == b,
        (Term::React(ReactionTerm::Const(a)), Term::React(ReactionTerm::Const(b))) => a == b,
        (Term::Act(a), Term::Act(b)) => a == b,
        _ => false,
    })
}

/// Truth-preserving normalization. Idempotent: a second application returns
/// the same formula.
pub fn simplify(theory: &NDBATheory, f: &ExtendedFormula) -> ExtendedFormula {
    let mut cur = f.clone();
    for _ in 0..10_000 {
        let next = simp(theory, &cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
    debug_assert!(false, "simplifier failed to reach a fixpoint");
    cur
}

fn simp(theory: &NDBATheory, f: &ExtendedFormula) -> ExtendedFormula {
    use ExtendedFormula as E;
    match f {
        E::True | E::False | E::Fluent(..) | E::Poss(..) => f.clone(),
        E::Rigid(name, args) => {
            if args.iter().all(ObjectTerm::is_ground) {
                let args: Vec<Symbol> = args
                    .iter()
                    .map(|a| match a {
                        ObjectTerm::Const(c) => c.clone(),
                        ObjectTerm::Var(_) => unreachable!("ground"),
                    })
                    .collect();
                constant(theory.rigid_holds(name, &args))
            } else {
                f.clone()
            }
        }
        E::TimeCmp(op, rhs, sit) => match sit.timestamp() {
            Some(t) => constant(match op {
                TimeOp::Eq => t == *rhs,
                TimeOp::Gt => t > *rhs,
            }),
            // Timestamps are never negative, whatever the base stands for.
            None => {
                if *rhs < 0 {
                    constant(matches!(op, TimeOp::Gt))
                } else {
                    f.clone()
                }
            }
        },
        E::Eq(l, r) => simp_eq(l, r),
        E::Not(p) => match simp(theory, p) {
            E::True => E::False,
            E::False => E::True,
            E::Not(inner) => *inner,
            other => other.not(),
        },
        E::And(ps) => {
            let mut flat: Vec<ExtendedFormula> = Vec::new();
            for p in ps {
                match simp(theory, p) {
                    E::True => {}
                    E::False => return E::False,
                    E::And(inner) => flat.extend(inner),
                    other => {
                        if !flat.contains(&other) {
                            flat.push(other);
                        }
                    }
                }
            }
            if has_complement_pair(&flat) || has_equation_conflict(&flat) {
                return E::False;
            }
            let flat = absorb(flat, true);
            E::and(flat)
        }
        E::Or(ps) => {
            let mut flat: Vec<ExtendedFormula> = Vec::new();
            for p in ps {
                match simp(theory, p) {
                    E::False => {}
                    E::True => return E::True,
                    E::Or(inner) => flat.extend(inner),
                    other => {
                        if !flat.contains(&other) {
                            flat.push(other);
                        }
                    }
                }
            }
            if has_complement_pair(&flat) {
                return E::True;
            }
            let flat = absorb(flat, false);
            E::or(flat)
        }
        E::Exists(vs, p) => simp_quant(theory, vs, p, true),
        E::Forall(vs, p) => simp_quant(theory, vs, p, false),
        E::Causes { action, ts, effect, sit } => E::Causes {
            action: action.clone(),
            ts: *ts,
            effect: effect.clone(),
            sit: sit.clone(),
        },
        E::CAfter { .. } | E::PAfter { .. } | E::CCauses { .. } | E::PCauses { .. } => f.clone(),
    }
}

fn constant(b: bool) -> ExtendedFormula {
    if b {
        ExtendedFormula::True
    } else {
        ExtendedFormula::False
    }
}

/// Unique-names equality resolution. Applied actions with the same head
/// decompose into argument equalities; distinct heads and distinct ground
/// constants are unequal.
fn simp_eq(l: &Term, r: &Term) -> ExtendedFormula {
    use ExtendedFormula as E;
    if l == r {
        return E::True;
    }
    match (l, r) {
        (Term::Obj(ObjectTerm::Const(a)), Term::Obj(ObjectTerm::Const(b))) => constant(a == b),
        (Term::React(ReactionTerm::Const(a)), Term::React(ReactionTerm::Const(b))) => {
            constant(a == b)
        }
        // Cross-sort equalities are false: sorts denote disjoint individuals.
        (Term::Obj(_), Term::React(_)) | (Term::React(_), Term::Obj(_)) => E::False,
        (Term::Obj(_), Term::Act(_) | Term::ActVar(_))
        | (Term::Act(_) | Term::ActVar(_), Term::Obj(_))
        | (Term::React(_), Term::Act(_) | Term::ActVar(_))
        | (Term::Act(_) | Term::ActVar(_), Term::React(_)) => E::False,
        (Term::Act(a), Term::Act(b)) => {
            if a.name != b.name || a.args.len() != b.args.len() {
                return E::False;
            }
            let mut parts: Vec<ExtendedFormula> = Vec::new();
            for (x, y) in a.args.iter().zip(&b.args) {
                parts.push(E::Eq(Term::Obj(x.clone()), Term::Obj(y.clone())));
            }
            parts.push(E::Eq(
                Term::React(a.reaction.clone()),
                Term::React(b.reaction.clone()),
            ));
            E::and(parts)
        }
        _ => E::Eq(l.clone(), r.clone()),
    }
}

fn complement_of(f: &ExtendedFormula) -> ExtendedFormula {
    match f {
        ExtendedFormula::Not(p) => (**p).clone(),
        other => other.clone().not(),
    }
}

fn has_complement_pair(parts: &[ExtendedFormula]) -> bool {
    parts.iter().any(|p| parts.contains(&complement_of(p)))
}

/// A variable equated with two distinct ground terms contradicts unique
/// names.
fn has_equation_conflict(parts: &[ExtendedFormula]) -> bool {
    let mut seen: BTreeMap<Symbol, Term> = BTreeMap::new();
    for p in parts {
        if let ExtendedFormula::Eq(l, r) = p {
            let pair = match (l.var_name(), r.var_name()) {
                (Some((v, _)), None) if r.is_ground() => Some((v.clone(), r.clone())),
                (None, Some((v, _))) if l.is_ground() => Some((v.clone(), l.clone())),
                _ => None,
            };
            if let Some((v, t)) = pair {
                match seen.get(&v) {
                    Some(prev) if prev != &t => return true,
                    _ => {
                        seen.insert(v, t);
                    }
                }
            }
        }
    }
    false
}

/// Absorption and unit propagation at one connective level.
/// In a conjunction: `A ∧ (A ∨ B) → A` and `A ∧ (¬A ∨ B) → A ∧ B`;
/// dually in a disjunction.
fn absorb(parts: Vec<ExtendedFormula>, conjunction: bool) -> Vec<ExtendedFormula> {
    use ExtendedFormula as E;
    let units: Vec<ExtendedFormula> = parts
        .iter()
        .filter(|p| !matches!(p, E::And(_) | E::Or(_)))
        .cloned()
        .collect();
    if units.is_empty() {
        return parts;
    }
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        let inner = match (&p, conjunction) {
            (E::Or(qs), true) => Some(qs.clone()),
            (E::And(qs), false) => Some(qs.clone()),
            _ => None,
        };
        match inner {
            None => out.push(p),
            Some(qs) => {
                if qs.iter().any(|q| units.contains(q)) {
                    // Absorbed by a unit alongside it.
                    continue;
                }
                let filtered: Vec<ExtendedFormula> = qs
                    .into_iter()
                    .filter(|q| !units.contains(&complement_of(q)))
                    .collect();
                out.push(if conjunction { E::or(filtered) } else { E::and(filtered) });
            }
        }
    }
    out
}

fn simp_quant(
    theory: &NDBATheory,
    vars: &[Variable],
    body: &ExtendedFormula,
    existential: bool,
) -> ExtendedFormula {
    use ExtendedFormula as E;
    // A binder over an empty domain decides the quantifier outright; every
    // shortcut below presumes nonempty domains.
    let empty_domain = vars.iter().any(|v| match &v.sort {
        Sort::Object(s) => theory.object_domain(s).is_empty(),
        Sort::Reaction => theory.reaction_domain().is_empty(),
        Sort::Action => false,
    });
    if empty_domain {
        return constant(!existential);
    }
    let body = simp(theory, body);
    if matches!(body, E::True | E::False) {
        return body;
    }
    // Drop binder variables that no longer occur.
    let free = body.free_variables();
    let vars: Vec<Variable> = vars.iter().filter(|v| free.contains_key(&v.name)).cloned().collect();
    if vars.is_empty() {
        return body;
    }

    // One-point rule: ∃v. v = t ∧ φ ≡ φ[v↦t] and ∀v. v ≠ t ∨ φ ≡ φ[v↦t].
    if let Some(result) = one_point(&vars, &body, existential) {
        return simp(theory, &result);
    }

    // Finite-domain expansion when substitution closes the body and the
    // initial model decides every instance.
    if free.keys().all(|name| vars.iter().any(|v| &v.name == name)) {
        if let Some(value) = expand_initial(theory, &vars, &body, &BTreeMap::new(), existential) {
            return constant(value);
        }
    }

    if existential {
        E::Exists(vars, Box::new(body))
    } else {
        E::Forall(vars, Box::new(body))
    }
}

/// Finds `v = t` (or `¬(v = t)` under a universal) at the top boolean level
/// and substitutes the witness.
fn one_point(
    vars: &[Variable],
    body: &ExtendedFormula,
    existential: bool,
) -> Option<ExtendedFormula> {
    use ExtendedFormula as E;
    let parts: Vec<ExtendedFormula> = if existential {
        match body {
            E::And(ps) => ps.clone(),
            other => vec![other.clone()],
        }
    } else {
        match body {
            E::Or(ps) => ps.clone(),
            other => vec![other.clone()],
        }
    };
    for (idx, part) in parts.iter().enumerate() {
        let eq = if existential {
            match part {
                E::Eq(l, r) => Some((l, r)),
                _ => None,
            }
        } else {
            match part {
                E::Not(inner) => match inner.as_ref() {
                    E::Eq(l, r) => Some((l, r)),
                    _ => None,
                },
                _ => None,
            }
        };
        let Some((l, r)) = eq else { continue };
        for v in vars {
            let witness = if let Some((name, _)) = l.var_name() {
                if name == &v.name && !term_mentions(r, &v.name) {
                    Some(r.clone())
                } else {
                    None
                }
            } else {
                None
            }
            .or_else(|| {
                if let Some((name, _)) = r.var_name() {
                    if name == &v.name && !term_mentions(l, &v.name) {
                        Some(l.clone())
                    } else {
                        None
                    }
                } else {
                    None
                }
            });
            let Some(witness) = witness else { continue };
            let mut rest: Vec<ExtendedFormula> = parts.clone();
            rest.remove(idx);
            let rest = if existential { E::and(rest) } else { E::or(rest) };
            let mut binding = Binding::new();
            binding.insert(v.name.clone(), witness);
            let Ok(substituted) = rest.substitute(&binding) else { continue };
            let remaining: Vec<Variable> =
                vars.iter().filter(|w| w.name != v.name).cloned().collect();
            return Some(if existential {
                E::exists(remaining, substituted)
            } else {
                E::forall(remaining, substituted)
            });
        }
    }
    None
}

fn term_mentions(t: &Term, name: &Symbol) -> bool {
    match t {
        Term::Obj(ObjectTerm::Var(v)) | Term::React(ReactionTerm::Var(v)) | Term::ActVar(v) => {
            v == name
        }
        Term::Obj(_) | Term::React(_) => false,
        Term::Act(a) => {
            a.args.iter().any(|x| matches!(x, ObjectTerm::Var(v) if v == name))
                || matches!(&a.reaction, ReactionTerm::Var(v) if v == name)
        }
    }
}
