//! Randomized cross-verification: oracle evaluation against regression plus
//! initial-theory evaluation, over generated theories and queries.

use serde::Serialize;

use crate::gen::{gen_query, gen_theory, Rng, TheoryShape};
use crate::regress::RegressionEngine;
use crate::reqcheck::check_reaction_requirements;
use crate::theory::validate_theory;

#[derive(Clone, Copy, Debug)]
pub struct FuzzConfig {
    pub domains: usize,
    pub queries_per_domain: usize,
    pub seed: u64,
    pub max_scenario: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { domains: 20, queries_per_domain: 50, seed: 0, max_scenario: 4 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub domain_index: usize,
    pub query: String,
    pub oracle: bool,
    pub regressed: bool,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct FuzzReport {
    pub domains: usize,
    pub queries: usize,
    pub agreed: usize,
    pub mismatches: Vec<Mismatch>,
    pub errors: Vec<String>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.errors.is_empty() && self.queries == self.agreed
    }
}

/// Generates `domains` theories (each validated and reaction-checked at
/// depth 4) and `queries_per_domain` queries each, verifying the regression
/// theorem on every query.
pub fn fuzz_verify(cfg: &FuzzConfig) -> FuzzReport {
    let mut rng = Rng::new(cfg.seed);
    let mut report = FuzzReport::default();
    let shape = TheoryShape::default();
    for domain_index in 0..cfg.domains {
        let theory = gen_theory(&mut rng, &shape);
        let findings = validate_theory(&theory);
        if !findings.is_empty() {
            report.errors.push(format!(
                "generated theory {domain_index} failed validation: {}",
                findings[0]
            ));
            continue;
        }
        match check_reaction_requirements(&theory, 4) {
            Ok(rep) if rep.passed() => {}
            Ok(_) => {
                report.errors.push(format!(
                    "generated theory {domain_index} violates the reaction requirements"
                ));
                continue;
            }
            Err(e) => {
                report.errors.push(format!("reaction check failed on theory {domain_index}: {e}"));
                continue;
            }
        }
        report.domains += 1;
        let engine = RegressionEngine::new(&theory);
        for _ in 0..cfg.queries_per_domain {
            let query = gen_query(&mut rng, &theory, cfg.max_scenario);
            report.queries += 1;
            match engine.check_regression_theorem(&query) {
                Ok(verdict) => {
                    if verdict.agree {
                        report.agreed += 1;
                    } else {
                        report.mismatches.push(Mismatch {
                            domain_index,
                            query: query.to_string(),
                            oracle: verdict.oracle,
                            regressed: verdict.regressed,
                        });
                    }
                }
                Err(e) => {
                    report
                        .errors
                        .push(format!("query {query} on theory {domain_index} failed: {e}"));
                }
            }
        }
    }
    report
}
