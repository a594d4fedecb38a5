//! Execution trees: every way the environment can react to an agent action
//! sequence, with per-node fluent states; text and JSON renderings.

use serde_json::json;

use crate::oracle::{EvalError, Evaluator};
use crate::term::{AgentAction, ReactionTerm, SituationTerm, SystemAction};
use crate::theory::{GroundAtom, NDBATheory};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExecNode {
    pub situation: SituationTerm,
    /// True ground fluent atoms, sorted.
    pub state: Vec<GroundAtom>,
    /// System action that produced this node; `None` at the root.
    pub incoming: Option<SystemAction>,
    pub children: Vec<ExecNode>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExecutionTree {
    pub root: ExecNode,
    pub warnings: Vec<String>,
}

impl ExecNode {
    fn leaves<'a>(&'a self, out: &mut Vec<&'a ExecNode>) {
        if self.children.is_empty() {
            out.push(self);
        } else {
            for c in &self.children {
                c.leaves(out);
            }
        }
    }

    fn by_level<'a>(&'a self, depth: usize, out: &mut Vec<Vec<&'a ExecNode>>) {
        if out.len() <= depth {
            out.push(Vec::new());
        }
        out[depth].push(self);
        for c in &self.children {
            c.by_level(depth + 1, out);
        }
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "situation": self.situation.to_string(),
            "state": self.state.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "children": self.children.iter().map(|c| json!({
                "reaction": c.incoming.as_ref().map(|a| a.reaction.to_string()),
                "action": c.incoming.as_ref().map(|a| a.to_string()),
                "node": c.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl ExecutionTree {
    /// Structural leaf situations, left to right. Nodes cut short by an
    /// inexecutable continuation count as leaves here.
    pub fn leaf_situations(&self) -> Vec<SituationTerm> {
        let mut leaves = Vec::new();
        self.root.leaves(&mut leaves);
        leaves.into_iter().map(|n| n.situation.clone()).collect()
    }

    /// The executions of the full sequence: leaves at exactly `len` actions
    /// below the root.
    pub fn executions(&self, len: usize) -> Vec<SituationTerm> {
        let below = self.root.situation.depth();
        self.leaf_situations().into_iter().filter(|s| s.depth() == below + len).collect()
    }

    /// Child counts of the nodes at each depth, in tree order. A node that
    /// was cut short (inexecutable continuation) reports zero.
    pub fn branching_per_level(&self) -> Vec<Vec<usize>> {
        let mut levels = Vec::new();
        self.root.by_level(0, &mut levels);
        levels
            .iter()
            .map(|nodes| nodes.iter().map(|n| n.children.len()).collect())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "tree": self.root.to_json(),
            "warnings": self.warnings,
        })
    }

    /// Indented text rendering with the per-node true atoms.
    pub fn render_text(&self) -> String {
        fn go(node: &ExecNode, indent: usize, out: &mut String) {
            let pad = "  ".repeat(indent);
            let state: Vec<String> = node.state.iter().map(|a| a.to_string()).collect();
            let label = match &node.incoming {
                None => node.situation.base().to_string(),
                Some(a) => a.to_string(),
            };
            out.push_str(&format!("{pad}{label}  {{{}}}\n", state.join(", ")));
            for c in &node.children {
                go(c, indent + 1, out);
            }
        }
        let mut out = String::new();
        go(&self.root, 0, &mut out);
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

/// Builds the tree of executions of `alpha` from `s`: children of a node
/// executing agent action `A` are exactly the reactions making the system
/// action possible there, in reaction-declaration order.
pub fn build_execution_tree(
    theory: &NDBATheory,
    alpha: &[AgentAction],
    s: &SituationTerm,
) -> Result<ExecutionTree, EvalError> {
    let evaluator = Evaluator::new(theory);
    let mut warnings = Vec::new();
    let root = build_node(theory, &evaluator, alpha, s, None, &mut warnings)?;
    Ok(ExecutionTree { root, warnings })
}

fn build_node(
    theory: &NDBATheory,
    evaluator: &Evaluator<'_>,
    alpha: &[AgentAction],
    s: &SituationTerm,
    incoming: Option<SystemAction>,
    warnings: &mut Vec<String>,
) -> Result<ExecNode, EvalError> {
    let state: Vec<GroundAtom> = evaluator.fluent_state(s)?.true_atoms.into_iter().collect();
    let mut children = Vec::new();
    if let Some((head, rest)) = alpha.split_first() {
        let mut any = false;
        for reaction in theory.candidate_reactions(&head.name) {
            let sys = head.with_reaction(ReactionTerm::Const(reaction));
            if evaluator.poss(&sys, s)? {
                any = true;
                let child = build_node(
                    theory,
                    evaluator,
                    rest,
                    &s.succ(sys.clone()),
                    Some(sys),
                    warnings,
                )?;
                children.push(child);
            }
        }
        if !any {
            warnings.push(format!(
                "agent action {head} has no possible reaction at {s}; the branch below it is empty"
            ));
        }
    }
    Ok(ExecNode { situation: s.clone(), state, incoming, children })
}
