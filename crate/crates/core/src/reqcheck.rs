//! Bounded checking of the two NDBAT reaction requirements.
//!
//! Over every ground situation reachable by executable system actions up to
//! the given depth, and every ground action instance: possibility of any
//! system action must imply the agent precondition (reaction independence),
//! and the agent precondition must be realizable by some reaction (reaction
//! existence). The check is an exhaustive bounded search, not a proof; the
//! report carries the bound it was run at.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::oracle::{EvalError, Evaluator};
use crate::term::{ReactionTerm, SituationTerm};
use crate::theory::NDBATheory;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReqCheckError {
    #[error("depth must be positive, got {0}")]
    DepthNonPositive(i64),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A violation witness: the ground agent action and situation, plus the
/// offending reaction for independence failures.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct ReqCounterexample {
    pub action: String,
    pub reaction: Option<String>,
    pub situation: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ReactionReport {
    pub depth: u32,
    pub situations_checked: usize,
    pub independence: Vec<ReqCounterexample>,
    pub existence: Vec<ReqCounterexample>,
}

impl ReactionReport {
    pub fn passed(&self) -> bool {
        self.independence.is_empty() && self.existence.is_empty()
    }
}

impl fmt::Display for ReactionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(
                f,
                "reaction requirements hold on all {} situations reachable within depth {}",
                self.situations_checked, self.depth
            );
        }
        writeln!(f, "reaction requirement violations within depth {}:", self.depth)?;
        for c in &self.independence {
            writeln!(
                f,
                "  independence: Poss({}) with reaction {} does not imply the agent precondition at {}",
                c.action,
                c.reaction.as_deref().unwrap_or("?"),
                c.situation
            )?;
        }
        for c in &self.existence {
            writeln!(
                f,
                "  existence: agent precondition of {} holds at {} but no reaction makes it executable",
                c.action, c.situation
            )?;
        }
        Ok(())
    }
}

/// Exhaustively checks both requirements over all executable situations up
/// to `depth` actions from `S0`.
pub fn check_reaction_requirements(
    theory: &NDBATheory,
    depth: i64,
) -> Result<ReactionReport, ReqCheckError> {
    if depth <= 0 {
        return Err(ReqCheckError::DepthNonPositive(depth));
    }
    let depth = depth as u32;
    let evaluator = Evaluator::new(theory);
    let agent_actions = theory.ground_agent_actions();
    let mut report = ReactionReport {
        depth,
        situations_checked: 0,
        independence: Vec::new(),
        existence: Vec::new(),
    };

    let mut frontier = vec![SituationTerm::S0];
    for level in 0..=depth {
        let mut next = Vec::new();
        for sit in &frontier {
            report.situations_checked += 1;
            for agent in &agent_actions {
                let ag_possible = evaluator.poss_ag(agent, sit)?;
                let mut some_reaction = false;
                for reaction in theory.candidate_reactions(&agent.name) {
                    let sys = agent.with_reaction(ReactionTerm::Const(reaction.clone()));
                    if evaluator.poss(&sys, sit)? {
                        some_reaction = true;
                        if !ag_possible {
                            report.independence.push(ReqCounterexample {
                                action: agent.to_string(),
                                reaction: Some(reaction.to_string()),
                                situation: sit.to_string(),
                            });
                        }
                        if level < depth {
                            next.push(sit.succ(sys));
                        }
                    }
                }
                if ag_possible && !some_reaction {
                    report.existence.push(ReqCounterexample {
                        action: agent.to_string(),
                        reaction: None,
                        situation: sit.to_string(),
                    });
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    report.independence.sort();
    report.independence.dedup();
    report.existence.sort();
    report.existence.dedup();
    Ok(report)
}
