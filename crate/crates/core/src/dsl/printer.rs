//! Round-trip printer: parse(print(x)) yields a structurally equal value,
//! and printing is whitespace-deterministic.

use std::fmt::Write;

use crate::formula::{DynamicFormula, TimeOp};
use crate::query::CausalQuery;
use crate::term::{AgentAction, ObjectTerm, SituationTerm, Sort, SystemAction, Term, Variable};
use crate::theory::NDBATheory;

pub fn print_domain(theory: &NDBATheory) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "domain {} {{", theory.name);

    if !theory.sorts.is_empty() {
        let _ = writeln!(w, "  sorts {{ {} }}", join(&theory.sorts, ", "));
    }
    if !theory.objects.is_empty() {
        let mut groups: Vec<(Vec<String>, String)> = Vec::new();
        for (c, s) in &theory.objects {
            match groups.last_mut() {
                Some((cs, sort)) if sort == &s.to_string() => cs.push(c.to_string()),
                _ => groups.push((vec![c.to_string()], s.to_string())),
            }
        }
        let rendered: Vec<String> = groups
            .iter()
            .map(|(cs, s)| format!("{} : {}", cs.join(", "), s))
            .collect();
        let _ = writeln!(w, "  objects {{ {} }}", rendered.join("; "));
    }
    for r in &theory.rigids {
        let tuples: Vec<String> = r
            .tuples
            .iter()
            .map(|t| format!("({})", join(t, ", ")))
            .collect();
        let _ = writeln!(w, "  rigid {}/{} {{ {} }}", r.name, r.arity, tuples.join(" "));
    }
    if !theory.rigids.is_empty() || !theory.objects.is_empty() {
        let _ = writeln!(w);
    }
    for f in &theory.fluents {
        let _ = writeln!(w, "  fluent {}({})", f.name, join(&f.param_sorts, ", "));
    }
    for a in &theory.actions {
        let _ = writeln!(w);
        let params: Vec<String> = a.params.iter().map(|(p, s)| format!("{p}: {s}")).collect();
        let _ = writeln!(w, "  action {}({}) {{", a.name, params.join(", "));
        let _ = writeln!(w, "    reactions {{ {} }}", join(&a.reactions, ", "));
        let _ = writeln!(w, "    poss_ag: {}", print_formula(&a.poss_ag));
        let _ = writeln!(w, "    poss: {}", print_formula(&a.poss_sys));
        let _ = writeln!(w, "  }}");
    }
    if !theory.ssas.is_empty() {
        let _ = writeln!(w);
    }
    for ssa in &theory.ssas {
        let params: Vec<String> = ssa.params.iter().map(|(p, s)| format!("{p}: {s}")).collect();
        let _ = writeln!(
            w,
            "  ssa {}({}): {}",
            ssa.fluent,
            params.join(", "),
            print_formula(&ssa.body)
        );
    }
    if !theory.init.is_empty() {
        let atoms: Vec<String> = theory
            .init
            .iter()
            .map(|a| {
                if a.args.is_empty() {
                    format!("{}()", a.name)
                } else {
                    format!("{}({})", a.name, join(&a.args, ", "))
                }
            })
            .collect();
        let _ = writeln!(w);
        let _ = writeln!(w, "  init {{ {} }}", atoms.join(" "));
    }
    let _ = writeln!(w, "}}");
    out
}

pub fn print_query(q: &CausalQuery) -> String {
    match q {
        CausalQuery::CausesDirectly { action, ts, effect, scenario } => format!(
            "causes_directly {} @ {ts} effect {} in {}",
            system_action(action),
            print_formula(effect),
            situation(scenario)
        ),
        CausalQuery::Causes { action, ts, effect, scenario } => format!(
            "causes {} @ {ts} effect {} in {}",
            system_action(action),
            print_formula(effect),
            situation(scenario)
        ),
        CausalQuery::PCauses { action, ts, effect, scenario } => format!(
            "pcauses {} @ {ts} effect {} scenario {}",
            agent_action(action),
            print_formula(effect),
            agent_seq(scenario)
        ),
        CausalQuery::CCauses { action, ts, effect, scenario } => format!(
            "ccauses {} @ {ts} effect {} scenario {}",
            agent_action(action),
            print_formula(effect),
            agent_seq(scenario)
        ),
        CausalQuery::PAfter { seq, effect, sit } => {
            let mut s = format!("pafter {} effect {}", agent_seq(seq), print_formula(effect));
            if sit != &SituationTerm::S0 {
                s.push_str(&format!(" in {}", situation(sit)));
            }
            s
        }
        CausalQuery::CAfter { seq, effect, sit } => {
            let mut s = format!("cafter {} effect {}", agent_seq(seq), print_formula(effect));
            if sit != &SituationTerm::S0 {
                s.push_str(&format!(" in {}", situation(sit)));
            }
            s
        }
    }
}

fn join<T: std::fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(sep)
}

fn object_term(t: &ObjectTerm) -> String {
    t.to_string()
}

fn system_action(a: &SystemAction) -> String {
    let mut args: Vec<String> = a.args.iter().map(object_term).collect();
    args.push(a.reaction.to_string());
    format!("{}({})", a.name, args.join(", "))
}

fn agent_action(a: &AgentAction) -> String {
    format!("{}({})", a.name, a.args.iter().map(object_term).collect::<Vec<_>>().join(", "))
}

fn agent_seq(seq: &[AgentAction]) -> String {
    format!("[{}]", seq.iter().map(agent_action).collect::<Vec<_>>().join(", "))
}

fn situation(s: &SituationTerm) -> String {
    let (actions, base) = s.decompose();
    if actions.is_empty() {
        return base.to_string();
    }
    let rendered: Vec<String> = actions.iter().map(|a| system_action(a)).collect();
    format!("do([{}], {})", rendered.join(", "), base)
}

fn binder(v: &Variable) -> String {
    match &v.sort {
        Sort::Object(s) => format!("{}: {}", v.name, s),
        Sort::Reaction => format!("{}: Reaction", v.name),
        Sort::Action => format!("{}: Action", v.name),
    }
}

fn term(t: &Term) -> String {
    match t {
        Term::Obj(o) => o.to_string(),
        Term::React(r) => r.to_string(),
        Term::ActVar(v) => v.to_string(),
        Term::Act(a) => system_action(a),
    }
}

/// Infix rendering in the surface syntax: `~`, `&`, `|`, `exists/forall`.
/// Suppressed `Causes` atoms have no surface form and never occur in
/// parseable input; they render in the canonical prefix style.
pub fn print_formula(f: &DynamicFormula) -> String {
    print_prec(f, 0)
}

/// prec levels: 0 top, 1 or, 2 and, 3 unary
fn print_prec(f: &DynamicFormula, prec: u8) -> String {
    let (s, level) = match f {
        DynamicFormula::True => ("true".to_string(), 3),
        DynamicFormula::False => ("false".to_string(), 3),
        DynamicFormula::Fluent(n, args) | DynamicFormula::Rigid(n, args) => (
            format!("{}({})", n, args.iter().map(object_term).collect::<Vec<_>>().join(", ")),
            3,
        ),
        DynamicFormula::Poss(a) => (format!("Poss({})", system_action(a)), 3),
        DynamicFormula::After(a, p) => {
            (format!("After({}, {})", system_action(a), print_prec(p, 0)), 3)
        }
        DynamicFormula::Not(p) => (format!("~{}", print_prec(p, 3)), 3),
        DynamicFormula::And(ps) => (
            ps.iter().map(|p| print_prec(p, 3)).collect::<Vec<_>>().join(" & "),
            2,
        ),
        DynamicFormula::Or(ps) => (
            ps.iter().map(|p| print_prec(p, 2)).collect::<Vec<_>>().join(" | "),
            1,
        ),
        DynamicFormula::Exists(vs, p) => (
            format!(
                "exists {}. {}",
                vs.iter().map(binder).collect::<Vec<_>>().join(", "),
                print_prec(p, 0)
            ),
            0,
        ),
        DynamicFormula::Forall(vs, p) => (
            format!(
                "forall {}. {}",
                vs.iter().map(binder).collect::<Vec<_>>().join(", "),
                print_prec(p, 0)
            ),
            0,
        ),
        DynamicFormula::Eq(l, r) => (format!("{} = {}", term(l), term(r)), 3),
        DynamicFormula::TimeCmp(op, rhs) => {
            let op = match op {
                TimeOp::Eq => "=",
                TimeOp::Gt => ">",
            };
            (format!("time {op} {rhs}"), 3)
        }
        DynamicFormula::Causes(b, t, eff) => {
            (format!("Causes({}, {}, {})", system_action(b), t, print_formula(eff)), 3)
        }
    };
    if level < prec {
        format!("({s})")
    } else {
        s
    }
}
