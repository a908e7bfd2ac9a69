//! Single-binary front end: aggregation, synergy, selection, coalition
//! tables, hull membership, mean-equality testing and the seeded property
//! suites, over the built-in map registry.
//!
//! Exit codes: 0 success, 1 validation or domain error, 2 internal numeric
//! failure, 3 property-suite failure.

use clap::error::ErrorKind;
use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use bajra::axioms::{run_axiom_suite, run_casuativity_suite, run_delegation_suite};
use bajra::convexity::{in_fconvex_hull, HullQuery};
use bajra::equality::{test_mean_equality, EqualityTolerances};
use bajra::maps::{check_admissibility_2d, default_grid, Verdict};
use bajra::means::aggregate;
use bajra::registry::build_map;
use bajra::sampling::sample_profile;
use bajra::selective::{arithmetic_effort, select, SelectiveRule};
use bajra::synergy::{
    check_null_synergy, coalition_table, stable_coalitions, CoalitionGame, Preference,
};
use bajra::{DecisionProfile, Error, Tolerance};

#[derive(Parser)]
#[command(
    name = "bajra",
    version,
    about = "Weighted decision aggregation: generalized means, efforts, synergy and coalitions"
)]
struct Cli {
    /// PRNG seed; falls back to the BAJRA_SEED variable, then 42.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Relative-tolerance override for property and equality verdicts.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Aggregate a profile: decision and effort.
    Mean {
        /// Registry spec such as gini:1,0 | power:2 | quasi:ln(x) |
        /// ratio:x^2,x,0,inf | hyperboloid.
        #[arg(long)]
        map: String,
        /// Inline JSON profile or a path to one.
        #[arg(long)]
        input: String,
    },
    /// Aggregated effort only.
    Effort {
        #[arg(long)]
        map: String,
        #[arg(long)]
        input: String,
    },
    /// Synergy: aggregated effort minus the weight sum.
    Synergy {
        #[arg(long)]
        map: String,
        #[arg(long)]
        input: String,
    },
    /// Apply a conservative selection rule (pe, re, fdd, fd).
    Select {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        input: String,
    },
    /// Coalition synergy table and stable pairs for a threshold voting game.
    Coalition {
        /// Comma-separated party vote weights, e.g. 45,35,20.
        #[arg(long)]
        weights: String,
        /// Votes needed to control the house.
        #[arg(long, default_value_t = 51.0)]
        quota: f64,
        /// Require strict preference when judging stability.
        #[arg(long)]
        strict_preference: bool,
    },
    /// Membership of a query point in the f-convex hull of generators.
    Hull {
        #[arg(long)]
        map: String,
        /// Inline JSON `{"generators": [...], "query": ...}` or a path.
        #[arg(long)]
        input: String,
    },
    /// Test mean equality of two maps (pass --map twice).
    Equality {
        #[arg(long = "map", action = ArgAction::Append, num_args = 1)]
        maps: Vec<String>,
        /// Number of random probe profiles.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Run the axiom, delegation, casuativity and null-synergy suites.
    Check {
        #[arg(long)]
        map: String,
        /// Trials per property.
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run(cli));
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::OutsideCone
        | Error::ConvergenceFailure
        | Error::DelegationMismatch { .. }
        | Error::SolverStalled => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> i32 {
    let seed = cli
        .seed
        .or_else(|| {
            std::env::var("BAJRA_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(42);
    let tol = match cli.tol {
        Some(rel) if rel > 0.0 && rel.is_finite() => Tolerance::new(rel, 1e-12),
        Some(bad) => {
            eprintln!("error: --tol must be a positive finite number, got {bad}");
            return 1;
        }
        None => Tolerance::DECISION,
    };
    let result = match cli.command {
        Command::Mean { ref map, ref input } => cmd_mean(map, input, cli.format, false),
        Command::Effort { ref map, ref input } => cmd_mean(map, input, cli.format, true),
        Command::Synergy { ref map, ref input } => cmd_synergy(map, input, cli.format),
        Command::Select { ref rule, ref input } => cmd_select(rule, input, cli.format),
        Command::Coalition {
            ref weights,
            quota,
            strict_preference,
        } => cmd_coalition(weights, quota, strict_preference, cli.format),
        Command::Hull { ref map, ref input } => cmd_hull(map, input, cli.format),
        Command::Equality { ref maps, trials } => {
            cmd_equality(maps, trials, seed, cli.tol, cli.format)
        }
        Command::Check { ref map, trials } => cmd_check(map, trials, seed, tol, cli.format),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

/// Inline JSON (anything starting with `{`) or the contents of a file.
fn read_input(input: &str) -> Result<String, Error> {
    if input.trim_start().starts_with('{') {
        Ok(input.to_string())
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| Error::InvalidInput(format!("cannot read `{input}`: {e}")))
    }
}

fn point_json(p: &[f64]) -> Value {
    if p.len() == 1 {
        json!(p[0])
    } else {
        json!(p)
    }
}

fn plain_point(p: &[f64]) -> String {
    p.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_mean(spec: &str, input: &str, format: Format, effort_only: bool) -> Result<i32, Error> {
    let map = build_map(spec)?;
    let profile = DecisionProfile::from_json_str(&read_input(input)?)?;
    let out = aggregate(map.as_ref(), &profile)?;
    match format {
        Format::Plain => {
            if effort_only {
                println!("effort: {}", out.effort);
            } else {
                println!("decision: {}", plain_point(&out.decision));
                println!("effort: {}", out.effort);
            }
        }
        Format::Json => {
            let value = if effort_only {
                json!({ "effort": out.effort })
            } else {
                json!({ "decision": point_json(&out.decision), "effort": out.effort })
            };
            println!("{value}");
        }
        Format::Csv => {
            if effort_only {
                println!("effort");
                println!("{}", out.effort);
            } else {
                let headers: Vec<String> =
                    (0..out.decision.len()).map(|i| format!("d{i}")).collect();
                println!("{},effort", headers.join(","));
                let coords: Vec<String> =
                    out.decision.iter().map(|c| c.to_string()).collect();
                println!("{},{}", coords.join(","), out.effort);
            }
        }
    }
    Ok(0)
}

fn cmd_synergy(spec: &str, input: &str, format: Format) -> Result<i32, Error> {
    let map = build_map(spec)?;
    let profile = DecisionProfile::from_json_str(&read_input(input)?)?;
    let out = aggregate(map.as_ref(), &profile)?;
    let weight_sum = arithmetic_effort(&profile);
    let sigma = out.effort - weight_sum;
    match format {
        Format::Plain => {
            println!("synergy: {sigma}");
            println!("effort: {}", out.effort);
            println!("weight_sum: {weight_sum}");
        }
        Format::Json => println!(
            "{}",
            json!({ "synergy": sigma, "effort": out.effort, "weight_sum": weight_sum })
        ),
        Format::Csv => {
            println!("synergy,effort,weight_sum");
            println!("{sigma},{},{weight_sum}", out.effort);
        }
    }
    Ok(0)
}

fn cmd_select(rule_name: &str, input: &str, format: Format) -> Result<i32, Error> {
    let rule = SelectiveRule::from_name(rule_name).ok_or_else(|| {
        Error::InvalidInput(format!(
            "unknown rule `{rule_name}` (expected pe, re, fdd or fd)"
        ))
    })?;
    let profile = DecisionProfile::from_json_str(&read_input(input)?)?;
    let chosen = select(rule, &profile);
    match format {
        Format::Plain => println!("decision: {}", plain_point(&chosen)),
        Format::Json => println!("{}", json!({ "decision": point_json(&chosen) })),
        Format::Csv => {
            let headers: Vec<String> = (0..chosen.len()).map(|i| format!("d{i}")).collect();
            println!("{}", headers.join(","));
            let coords: Vec<String> = chosen.iter().map(|c| c.to_string()).collect();
            println!("{}", coords.join(","));
        }
    }
    Ok(0)
}

fn party_label(index: usize) -> String {
    if index < 26 {
        char::from(b'A' + index as u8).to_string()
    } else {
        format!("P{index}")
    }
}

fn coalition_label(indices: &[usize]) -> String {
    indices.iter().map(|&i| party_label(i)).collect()
}

fn cmd_coalition(
    weights_text: &str,
    quota: f64,
    strict: bool,
    format: Format,
) -> Result<i32, Error> {
    let weights: Result<Vec<f64>, Error> = weights_text
        .split(',')
        .map(|w| {
            w.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad weight `{w}`")))
        })
        .collect();
    let game = CoalitionGame::new(weights?, quota)?;
    let table = coalition_table(&game);
    let preference = if strict {
        Preference::Strict
    } else {
        Preference::Weak
    };
    let stability = stable_coalitions(&game, preference);

    match format {
        Format::Csv => {
            println!("coalition,threshold_effort,sum_individual,synergy");
            for row in &table {
                println!(
                    "{},{},{},{}",
                    coalition_label(&row.coalition),
                    row.threshold_effort,
                    row.sum_individual,
                    row.synergy
                );
            }
        }
        Format::Plain => {
            println!("coalition threshold_effort sum_individual synergy");
            for row in &table {
                println!(
                    "{} {} {} {}",
                    coalition_label(&row.coalition),
                    row.threshold_effort,
                    row.sum_individual,
                    row.synergy
                );
            }
            match &stability {
                Ok(report) => {
                    let stable: Vec<String> =
                        report.stable.iter().map(|p| coalition_label(p)).collect();
                    let irrelevant: Vec<String> = report
                        .irrelevant
                        .iter()
                        .map(|p| format!("{} (zero synergy)", coalition_label(p)))
                        .collect();
                    println!(
                        "stable: {}",
                        if stable.is_empty() {
                            "none".to_string()
                        } else {
                            stable.join(" ")
                        }
                    );
                    if !irrelevant.is_empty() {
                        println!("irrelevant: {}", irrelevant.join(" "));
                    }
                }
                Err(Error::TooFewParties(_)) => println!("stable: n/a (needs 3 parties)"),
                Err(other) => return Err(other.clone()),
            }
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .iter()
                .map(|row| {
                    json!({
                        "coalition": coalition_label(&row.coalition),
                        "threshold_effort": row.threshold_effort,
                        "sum_individual": row.sum_individual,
                        "synergy": row.synergy,
                    })
                })
                .collect();
            let stability_json = match &stability {
                Ok(report) => json!({
                    "stable": report.stable.iter().map(|p| coalition_label(p)).collect::<Vec<_>>(),
                    "irrelevant": report.irrelevant.iter().map(|p| coalition_label(p)).collect::<Vec<_>>(),
                }),
                Err(Error::TooFewParties(_)) => Value::Null,
                Err(other) => return Err(other.clone()),
            };
            println!("{}", json!({ "table": rows, "stability": stability_json }));
        }
    }
    Ok(0)
}

fn cmd_hull(spec: &str, input: &str, format: Format) -> Result<i32, Error> {
    let map = build_map(spec)?;
    let query = HullQuery::from_json_str(&read_input(input)?)?;
    let member = in_fconvex_hull(map.as_ref(), &query)?;
    match format {
        Format::Plain => println!("member: {member}"),
        Format::Json => println!("{}", json!({ "member": member })),
        Format::Csv => {
            println!("member");
            println!("{member}");
        }
    }
    Ok(0)
}

fn matrix_json(matrix: &bajra::linalg::Matrix) -> Value {
    json!(matrix.to_rows())
}

fn cmd_equality(
    specs: &[String],
    trials: usize,
    seed: u64,
    tol_override: Option<f64>,
    format: Format,
) -> Result<i32, Error> {
    if specs.len() != 2 {
        return Err(Error::InvalidInput(
            "equality needs exactly two --map arguments".into(),
        ));
    }
    let f = build_map(&specs[0])?;
    let g = build_map(&specs[1])?;
    if f.domain() != g.domain() {
        return Err(Error::InvalidInput(format!(
            "maps live on different domains: {:?} vs {:?}",
            f.domain(),
            g.domain()
        )));
    }

    // evenly spread fit samples over the common window, then seeded probes
    let window = f.domain().sampling_window();
    let count = 8.max(2 * f.range_dim());
    let samples: Vec<Vec<f64>> = (0..count)
        .map(|k| {
            let t = (k as f64 + 0.5) / count as f64;
            window.iter().map(|(lo, hi)| lo + t * (hi - lo)).collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probes: Vec<DecisionProfile> = (0..trials)
        .map(|_| sample_profile(f.domain(), 2..=5, &mut rng))
        .collect::<Result<_, _>>()?;

    let gates = match tol_override {
        Some(rel) => EqualityTolerances {
            fit: rel,
            mean: rel,
            effort: rel,
        },
        None => EqualityTolerances::default(),
    };
    let verdict = test_mean_equality(f.as_ref(), g.as_ref(), &samples, &probes, gates)?;

    match format {
        Format::Plain => {
            println!(
                "verdict: {}",
                if verdict.equal {
                    "consistent with equality on probes"
                } else {
                    "not equal"
                }
            );
            println!("max_fit_residual: {:e}", verdict.max_fit_residual);
            println!("max_mean_discrepancy: {:e}", verdict.max_mean_discrepancy);
            println!(
                "max_effort_discrepancy: {:e}",
                verdict.max_effort_discrepancy
            );
            if let Some(matrix) = &verdict.linear_map {
                println!("linear_map rank: {}", f.range_dim());
                for row in matrix.to_rows() {
                    println!("  {}", plain_point(&row));
                }
            }
        }
        Format::Json => {
            let matrix = verdict.linear_map.as_ref().map(matrix_json);
            println!(
                "{}",
                json!({
                    "equal": verdict.equal,
                    "linear_map": matrix,
                    "max_fit_residual": verdict.max_fit_residual,
                    "max_mean_discrepancy": verdict.max_mean_discrepancy,
                    "max_effort_discrepancy": verdict.max_effort_discrepancy,
                    "probes": trials,
                    "seed": seed,
                })
            );
        }
        Format::Csv => {
            println!("equal,max_fit_residual,max_mean_discrepancy,max_effort_discrepancy");
            println!(
                "{},{:e},{:e},{:e}",
                verdict.equal,
                verdict.max_fit_residual,
                verdict.max_mean_discrepancy,
                verdict.max_effort_discrepancy
            );
        }
    }
    Ok(0)
}

fn cmd_check(
    spec: &str,
    trials: usize,
    seed: u64,
    tol: Tolerance,
    format: Format,
) -> Result<i32, Error> {
    let map = build_map(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut outcomes = run_axiom_suite(map.as_ref(), trials, tol, &mut rng)?;
    outcomes.extend(run_delegation_suite(map.as_ref(), trials, tol, &mut rng)?);
    outcomes.extend(run_casuativity_suite(map.as_ref(), trials, tol, &mut rng)?);
    let null_synergy = check_null_synergy(map.as_ref(), trials, tol, &mut rng)?;

    let admissibility = if map.range_dim() == 2 {
        let grid = default_grid(map.domain(), 256);
        Some(check_admissibility_2d(map.as_ref(), &grid, 1e-9)?)
    } else {
        None
    };

    let properties_failed = outcomes.iter().any(|o| !o.passed());
    let degeneracy_consistent = null_synergy.all_equivalent();
    let admissibility_failed = matches!(
        admissibility.as_ref().map(|c| &c.verdict),
        Some(Verdict::Fail)
    );
    let failed = properties_failed || !degeneracy_consistent || admissibility_failed;

    match format {
        Format::Plain => {
            println!("map: {}", map.describe());
            println!("seed: {seed}");
            if let Some(cert) = &admissibility {
                println!(
                    "admissibility ({} grid points): {}",
                    cert.samples_used,
                    match cert.verdict {
                        Verdict::Pass => "pass",
                        Verdict::Fail => "FAIL",
                        Verdict::Inconclusive => "inconclusive",
                    }
                );
            }
            for outcome in &outcomes {
                if outcome.passed() {
                    println!("{}: pass ({} trials)", outcome.name, outcome.trials);
                } else {
                    println!(
                        "{}: FAIL ({}/{} trials; first: {})",
                        outcome.name,
                        outcome.failures,
                        outcome.trials,
                        outcome.first_failure.as_deref().unwrap_or("-")
                    );
                }
            }
            println!(
                "null_synergy: zero={} associative={} flat={} ({})",
                null_synergy.zero_synergy,
                null_synergy.associative,
                null_synergy.flat_formula_matches,
                if degeneracy_consistent {
                    "consistent"
                } else {
                    "INCONSISTENT"
                }
            );
            println!("result: {}", if failed { "FAIL" } else { "pass" });
        }
        Format::Json => {
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "property": o.name,
                        "trials": o.trials,
                        "failures": o.failures,
                        "first_failure": o.first_failure,
                    })
                })
                .collect();
            let cert = admissibility.as_ref().map(|c| {
                json!({
                    "verdict": match c.verdict {
                        Verdict::Pass => "pass",
                        Verdict::Fail => "fail",
                        Verdict::Inconclusive => "inconclusive",
                    },
                    "samples_used": c.samples_used,
                })
            });
            println!(
                "{}",
                json!({
                    "map": map.describe(),
                    "seed": seed,
                    "admissibility": cert,
                    "properties": rows,
                    "null_synergy": {
                        "zero_synergy": null_synergy.zero_synergy,
                        "associative": null_synergy.associative,
                        "flat_formula_matches": null_synergy.flat_formula_matches,
                        "consistent": degeneracy_consistent,
                    },
                    "passed": !failed,
                })
            );
        }
        Format::Csv => {
            println!("property,trials,failures");
            for o in &outcomes {
                println!("{},{},{}", o.name, o.trials, o.failures);
            }
        }
    }
    Ok(if failed { 3 } else { 0 })
}
