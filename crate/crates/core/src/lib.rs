//! Reasoning about actual causes in nondeterministic action domains.
//!
//! The crate models nondeterministic basic action theories (NDBATs) with a
//! complete finite initial state and answers possibly-causes and
//! certainly-causes queries two ways: by a brute-force semantic oracle over
//! execution trees, and by an extended goal-regression operator that
//! rewrites queries into formulas about the initial situation. The two
//! routes cross-check each other.
//!
//! ```
//! use ndcausal_core::{robot_theory, RegressionEngine};
//! use ndcausal_core::dsl::parse_query;
//!
//! let theory = robot_theory();
//! let query = parse_query(
//!     &theory,
//!     "ccauses move(I0,I1) @ 0 effect Vul scenario [move(I0,I1), move(I1,I2)]",
//! )
//! .unwrap();
//! let verdict = RegressionEngine::new(&theory).check_regression_theorem(&query).unwrap();
//! assert!(verdict.oracle && verdict.regressed && verdict.agree);
//! ```

pub mod dsl;
pub mod formula;
pub mod gen;
pub mod oracle;
pub mod query;
pub mod regress;
pub mod reqcheck;
pub mod simplify;
pub mod symbol;
pub mod term;
pub mod theory;
pub mod tree;
pub mod verify;

pub use formula::{DynamicFormula, ExtendedFormula, FormulaError, TimeOp};
pub use oracle::{CauseVerdict, CauseWarning, Env, EvalError, Evaluator, FluentState};
pub use query::CausalQuery;
pub use regress::{
    is_extended_regressable, is_pure_initial, RegressError, RegressionEngine, RegressionResult,
    RegressionRule, RegressionStep, TheoremVerdict,
};
pub use simplify::{eval_initial, simplify};
pub use symbol::Symbol;
pub use term::{
    AgentAction, Binding, ObjectTerm, ReactionTerm, SituationTerm, Sort, SystemAction, Term,
    VarKind, Variable,
};
pub use theory::{
    validate_theory, ActionDecl, Finding, FindingCode, FluentDecl, GroundAtom, NDBATheory,
    RigidDecl, SSADecl,
};

/// The bundled robot navigation/communication domain.
pub const ROBOT_DOMAIN: &str = include_str!("../../../domains/robot.ndbat");

/// Parses the bundled robot domain; panics only if the bundled file is
/// broken, which the test suite guards.
pub fn robot_theory() -> NDBATheory {
    dsl::parse_domain(ROBOT_DOMAIN).expect("bundled robot domain parses")
}
