//! Causal queries: the five cause/after question kinds over one theory.

use std::fmt;

use crate::formula::{DynamicFormula, ExtendedFormula};
use crate::term::{AgentAction, SituationTerm, SystemAction};

/// One causal query. `Causes`/`CausesDirectly` are asked of a ground system
/// action scenario; `CCauses`/`PCauses` of an agent action sequence executed
/// from `S0`; `CAfter`/`PAfter` of a sequence and a start situation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CausalQuery {
    CausesDirectly {
        action: SystemAction,
        ts: i64,
        effect: DynamicFormula,
        scenario: SituationTerm,
    },
    Causes {
        action: SystemAction,
        ts: i64,
        effect: DynamicFormula,
        scenario: SituationTerm,
    },
    PCauses {
        action: AgentAction,
        ts: i64,
        effect: DynamicFormula,
        scenario: Vec<AgentAction>,
    },
    CCauses {
        action: AgentAction,
        ts: i64,
        effect: DynamicFormula,
        scenario: Vec<AgentAction>,
    },
    PAfter {
        seq: Vec<AgentAction>,
        effect: DynamicFormula,
        sit: SituationTerm,
    },
    CAfter {
        seq: Vec<AgentAction>,
        effect: DynamicFormula,
        sit: SituationTerm,
    },
}

impl CausalQuery {
    pub fn kind_name(&self) -> &'static str {
        match self {
            CausalQuery::CausesDirectly { .. } => "causes_directly",
            CausalQuery::Causes { .. } => "causes",
            CausalQuery::PCauses { .. } => "pcauses",
            CausalQuery::CCauses { .. } => "ccauses",
            CausalQuery::PAfter { .. } => "pafter",
            CausalQuery::CAfter { .. } => "cafter",
        }
    }

    /// The extended formula this query denotes, when it has one.
    /// `CausesDirectly` is oracle-only: the extended regression operator has
    /// no case for it.
    pub fn to_formula(&self) -> Option<ExtendedFormula> {
        match self {
            CausalQuery::CausesDirectly { .. } => None,
            CausalQuery::Causes { action, ts, effect, scenario } => Some(ExtendedFormula::Causes {
                action: action.clone(),
                ts: *ts,
                effect: Box::new(effect.clone()),
                sit: scenario.clone(),
            }),
            CausalQuery::PCauses { action, ts, effect, scenario } => {
                Some(ExtendedFormula::PCauses {
                    action: action.clone(),
                    ts: *ts,
                    effect: Box::new(effect.clone()),
                    seq: scenario.clone(),
                })
            }
            CausalQuery::CCauses { action, ts, effect, scenario } => {
                Some(ExtendedFormula::CCauses {
                    action: action.clone(),
                    ts: *ts,
                    effect: Box::new(effect.clone()),
                    seq: scenario.clone(),
                })
            }
            CausalQuery::PAfter { seq, effect, sit } => Some(ExtendedFormula::PAfter {
                seq: seq.clone(),
                cond: Box::new(effect.clone()),
                sit: sit.clone(),
            }),
            CausalQuery::CAfter { seq, effect, sit } => Some(ExtendedFormula::CAfter {
                seq: seq.clone(),
                cond: Box::new(effect.clone()),
                sit: sit.clone(),
            }),
        }
    }
}

impl fmt::Display for CausalQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::dsl::print_query(self))
    }
}
