//! Command-line front end: domain validation, cause queries answered by the
//! semantic oracle and/or the regression engine, execution-tree export, and
//! randomized cross-verification.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ndcausal_core::dsl::{parse_agent_sequence, parse_domain, parse_query};
use ndcausal_core::oracle::Evaluator;
use ndcausal_core::regress::{RegressError, RegressionEngine};
use ndcausal_core::reqcheck::check_reaction_requirements;
use ndcausal_core::theory::{validate_theory, NDBATheory};
use ndcausal_core::tree::build_execution_tree;
use ndcausal_core::verify::{fuzz_verify, FuzzConfig};
use ndcausal_core::{CausalQuery, SituationTerm};

use output::OutputRecord;

const EXIT_OK: u8 = 0;
const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "ndcausal",
    about = "Actual causation in nondeterministic action domains: semantic oracle, extended regression, and their cross-check",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a domain: well-formedness findings plus the bounded reaction
    /// requirement search.
    Validate(ValidateArgs),
    /// Answer cause queries from a file or the command line.
    Query(QueryArgs),
    /// Render the tree of executions of an agent action sequence.
    ExecTree(ExecTreeArgs),
    /// Generate random domains and queries and cross-check the two
    /// reasoning routes on all of them.
    FuzzVerify(FuzzArgs),
}

#[derive(Args)]
struct ValidateArgs {
    /// Domain file (.ndbat).
    domain: PathBuf,
    /// Exploration depth for the reaction requirement search.
    #[arg(long, default_value_t = 4)]
    depth: i64,
    /// Emit a JSON report.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Evaluate semantically over execution trees.
    Oracle,
    /// Regress to the initial situation and evaluate there.
    Regress,
    /// Run both routes and require agreement.
    Verify,
}

#[derive(Args)]
struct QueryArgs {
    /// Domain file (.ndbat).
    domain: PathBuf,
    /// Query file, one query per line; `#` starts a comment.
    query_file: Option<PathBuf>,
    /// Inline query text instead of a file.
    #[arg(long, short = 'q', conflicts_with = "query_file")]
    query: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Verify)]
    mode: Mode,
    /// Attach the regression derivation to the output.
    #[arg(long)]
    trace: bool,
    /// Emit JSON records (deterministic for identical inputs).
    #[arg(long)]
    json: bool,
    /// Interpret the query timestamp as a 1-based position in the scenario
    /// instead of an absolute time.
    #[arg(long)]
    at_position: bool,
}

#[derive(Args)]
struct ExecTreeArgs {
    /// Domain file (.ndbat).
    domain: PathBuf,
    /// Agent action sequence, e.g. "[comm(I0), move(I0,I1)]".
    sequence: String,
    #[arg(long, value_enum, default_value_t = TreeFormat::Text)]
    format: TreeFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreeFormat {
    Text,
    Json,
}

#[derive(Args)]
struct FuzzArgs {
    /// Number of random domains.
    #[arg(long, default_value_t = 20)]
    domains: usize,
    /// Number of random queries per domain.
    #[arg(long, default_value_t = 50)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Longest generated agent scenario.
    #[arg(long, default_value_t = 4)]
    max_scenario: usize,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Validate(args) => cmd_validate(args),
        Command::Query(args) => cmd_query(args),
        Command::ExecTree(args) => cmd_exec_tree(args),
        Command::FuzzVerify(args) => cmd_fuzz_verify(args),
    };
    ExitCode::from(code)
}

fn load_domain(path: &PathBuf) -> Result<NDBATheory, u8> {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return Err(EXIT_USAGE);
        }
    };
    match parse_domain(&text) {
        Ok(theory) => Ok(theory),
        Err(diags) => {
            for d in diags {
                eprintln!("{}: {d}", path.display());
            }
            Err(EXIT_USAGE)
        }
    }
}

/// Loads and additionally requires a well-formed theory; querying an
/// ill-formed one would only fail later with less useful errors.
fn load_valid_domain(path: &PathBuf) -> Result<NDBATheory, u8> {
    let theory = load_domain(path)?;
    let findings = validate_theory(&theory);
    if findings.is_empty() {
        Ok(theory)
    } else {
        for f in &findings {
            eprintln!("{}: {f}", path.display());
        }
        Err(EXIT_FAILURE)
    }
}

fn cmd_validate(args: ValidateArgs) -> u8 {
    if args.depth <= 0 {
        eprintln!("error: --depth must be positive");
        return EXIT_USAGE;
    }
    let theory = match load_domain(&args.domain) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let findings = validate_theory(&theory);
    if !findings.is_empty() {
        if args.json {
            let value = serde_json::json!({ "findings": findings, "reaction_report": null });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        } else {
            for f in &findings {
                println!("{f}");
            }
        }
        return EXIT_FAILURE;
    }
    let report = match check_reaction_requirements(&theory, args.depth) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if args.json {
        let value = serde_json::json!({ "findings": findings, "reaction_report": report });
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        println!("{}: no findings", args.domain.display());
        println!("{report}");
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn read_queries(args: &QueryArgs, theory: &NDBATheory) -> Result<Vec<CausalQuery>, u8> {
    let mut texts: Vec<String> = Vec::new();
    match (&args.query, &args.query_file) {
        (Some(q), None) => texts.push(q.clone()),
        (None, Some(path)) => {
            let content = match std::fs::read_to_string(path) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", path.display());
                    return Err(EXIT_USAGE);
                }
            };
            for line in content.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                texts.push(line.to_string());
            }
        }
        _ => {
            eprintln!("error: provide a query file or --query");
            return Err(EXIT_USAGE);
        }
    }
    if texts.is_empty() {
        eprintln!("error: no queries given");
        return Err(EXIT_USAGE);
    }
    let mut queries = Vec::new();
    for text in texts {
        match parse_query(theory, &text) {
            Ok(q) => queries.push(q),
            Err(diags) => {
                for d in diags {
                    eprintln!("{text}: {d}");
                }
                return Err(EXIT_USAGE);
            }
        }
    }
    Ok(queries)
}

/// Converts a 1-based scenario position into an absolute timestamp.
fn at_position(query: CausalQuery) -> Result<CausalQuery, String> {
    fn convert(pos: i64, len: usize, kind: &str) -> Result<i64, String> {
        if pos < 1 || pos > len as i64 {
            return Err(format!(
                "--at-position: position {pos} outside the {kind} scenario of length {len}"
            ));
        }
        Ok(pos - 1)
    }
    Ok(match query {
        CausalQuery::Causes { action, ts, effect, scenario } => {
            let ts = convert(ts, scenario.depth(), "system")?;
            CausalQuery::Causes { action, ts, effect, scenario }
        }
        CausalQuery::CausesDirectly { action, ts, effect, scenario } => {
            let ts = convert(ts, scenario.depth(), "system")?;
            CausalQuery::CausesDirectly { action, ts, effect, scenario }
        }
        CausalQuery::CCauses { action, ts, effect, scenario } => {
            let ts = convert(ts, scenario.len(), "agent")?;
            CausalQuery::CCauses { action, ts, effect, scenario }
        }
        CausalQuery::PCauses { action, ts, effect, scenario } => {
            let ts = convert(ts, scenario.len(), "agent")?;
            CausalQuery::PCauses { action, ts, effect, scenario }
        }
        other => other,
    })
}

fn oracle_answer(theory: &NDBATheory, query: &CausalQuery) -> Result<(bool, Vec<String>), String> {
    let evaluator = Evaluator::new(theory);
    let warn = |v: ndcausal_core::CauseVerdict| {
        let warnings = v.warnings.iter().map(|w| w.to_string()).collect();
        (v.holds, warnings)
    };
    match query {
        CausalQuery::CausesDirectly { action, ts, effect, scenario } => evaluator
            .causes_directly(action, *ts, effect, scenario)
            .map(|b| (b, vec![]))
            .map_err(|e| e.to_string()),
        CausalQuery::Causes { action, ts, effect, scenario } => {
            let mut warnings = Vec::new();
            if !evaluator.executable(scenario).map_err(|e| e.to_string())? {
                warnings.push("scenario is not executable".to_string());
            }
            evaluator
                .causes(action, *ts, effect, scenario)
                .map(|b| (b, warnings))
                .map_err(|e| e.to_string())
        }
        CausalQuery::PCauses { action, ts, effect, scenario } => evaluator
            .pcauses(action, *ts, effect, scenario)
            .map(warn)
            .map_err(|e| e.to_string()),
        CausalQuery::CCauses { action, ts, effect, scenario } => evaluator
            .ccauses(action, *ts, effect, scenario)
            .map(warn)
            .map_err(|e| e.to_string()),
        CausalQuery::PAfter { seq, effect, sit } => evaluator
            .eval_pafter(seq, effect, sit)
            .map(|b| (b, vec![]))
            .map_err(|e| e.to_string()),
        CausalQuery::CAfter { seq, effect, sit } => evaluator
            .eval_cafter(seq, effect, sit)
            .map(|b| (b, vec![]))
            .map_err(|e| e.to_string()),
    }
}

fn step_budget_from_env() -> Option<usize> {
    std::env::var("NDCAUSAL_STEP_BUDGET").ok().and_then(|v| v.parse().ok())
}

fn cmd_query(args: QueryArgs) -> u8 {
    let theory = match load_valid_domain(&args.domain) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let queries = match read_queries(&args, &theory) {
        Ok(qs) => qs,
        Err(code) => return code,
    };
    let budget = step_budget_from_env();
    let mut records = Vec::new();
    let mut all_ok = true;
    for query in queries {
        let query = if args.at_position {
            match at_position(query) {
                Ok(q) => q,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            }
        } else {
            query
        };
        let start = Instant::now();
        let mut record = OutputRecord::new(
            &query,
            match args.mode {
                Mode::Oracle => "oracle",
                Mode::Regress => "regress",
                Mode::Verify => "verify",
            },
        );

        match args.mode {
            Mode::Oracle => match oracle_answer(&theory, &query) {
                Ok((verdict, warnings)) => {
                    record.oracle = Some(verdict);
                    record.verdict = Some(verdict);
                    record.warnings = warnings;
                }
                Err(e) => {
                    record.error = Some(e);
                    all_ok = false;
                }
            },
            Mode::Regress => {
                let engine = RegressionEngine::with_budget(&theory, budget);
                match query
                    .to_formula()
                    .ok_or_else(|| {
                        RegressError::NotRegressable(format!(
                            "{} queries have no extended regression rule; use the oracle",
                            query.kind_name()
                        ))
                    })
                    .and_then(|f| engine.regress_star(&f))
                {
                    Ok(result) => {
                        let value = ndcausal_core::eval_initial(&theory, &result.fixpoint);
                        record.fixpoint = Some(result.fixpoint.to_string());
                        record.steps = Some(result.steps as u64);
                        record.regressed = value;
                        record.verdict = value;
                        if args.trace {
                            record.set_trace(&result);
                        }
                        if value.is_none() {
                            record.error =
                                Some("fixpoint is not decided by the initial theory".to_string());
                            all_ok = false;
                        }
                    }
                    Err(e) => {
                        record.error = Some(e.to_string());
                        all_ok = false;
                    }
                }
            }
            Mode::Verify => {
                let engine = RegressionEngine::with_budget(&theory, budget);
                match engine.check_regression_theorem(&query) {
                    Ok(v) => {
                        record.oracle = Some(v.oracle);
                        record.regressed = Some(v.regressed);
                        record.agree = Some(v.agree);
                        record.verdict = Some(v.oracle);
                        record.fixpoint = Some(v.result.fixpoint.to_string());
                        record.steps = Some(v.result.steps as u64);
                        if args.trace {
                            record.set_trace(&v.result);
                        }
                        if !v.agree {
                            all_ok = false;
                        }
                    }
                    Err(e) => {
                        record.error = Some(e.to_string());
                        all_ok = false;
                    }
                }
            }
        }
        record.elapsed = start.elapsed();
        records.push(record);
    }

    if args.json {
        let values: Vec<serde_json::Value> = records.iter().map(OutputRecord::to_json).collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Array(values)).expect("serializable")
        );
    } else {
        for r in &records {
            print!("{}", r.render_text());
        }
    }
    if all_ok {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn cmd_exec_tree(args: ExecTreeArgs) -> u8 {
    let theory = match load_valid_domain(&args.domain) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let seq = match parse_agent_sequence(&theory, &args.sequence) {
        Ok(s) => s,
        Err(diags) => {
            for d in diags {
                eprintln!("{}: {d}", args.sequence);
            }
            return EXIT_USAGE;
        }
    };
    match build_execution_tree(&theory, &seq, &SituationTerm::S0) {
        Ok(tree) => {
            match args.format {
                TreeFormat::Text => {
                    print!("{}", tree.render_text());
                    println!("executions: {}", tree.executions(seq.len()).len());
                }
                TreeFormat::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&tree.to_json()).expect("serializable")
                    );
                }
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn cmd_fuzz_verify(args: FuzzArgs) -> u8 {
    let cfg = FuzzConfig {
        domains: args.domains,
        queries_per_domain: args.queries,
        seed: args.seed,
        max_scenario: args.max_scenario,
    };
    let start = Instant::now();
    let report = fuzz_verify(&cfg);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "domains": report.domains,
                "queries": report.queries,
                "agreed": report.agreed,
                "mismatches": report.mismatches,
                "errors": report.errors,
            }))
            .expect("serializable")
        );
    } else {
        println!(
            "checked {} queries over {} random domains: {} agreed, {} mismatches, {} errors ({:.2?})",
            report.queries,
            report.domains,
            report.agreed,
            report.mismatches.len(),
            report.errors.len(),
            start.elapsed()
        );
        for m in &report.mismatches {
            println!(
                "mismatch on domain {}: {} (oracle={}, regressed={})",
                m.domain_index, m.query, m.oracle, m.regressed
            );
        }
        for e in &report.errors {
            println!("error: {e}");
        }
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}
