use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};
use deflate_core::class::{enumerate_simples, shading_grid, ClassLevels, PermClass};
use deflate_core::decomposition::{
    is_indecomposable, is_simple, proper_intervals, substitution_decompose,
};
use deflate_core::deflate::{classify_principal, extend_to_simple, ExtensionMethod};
use deflate_core::perm::{contains, Permutation};
use deflate_core::witness::{
    bond_certificate, bundled_corpus, find_witnesses, inflation_family, parse_corpus, verify_table,
    CrossCheck,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

const EXIT_CODES: &str = "\
Exit codes:
  0  success (or a positive answer for predicate commands)
  1  negative answer: `contains` found no occurrence, `witness check` found no
     certificate, `extend` found no simple extension, `family` or
     `verify-table` did not verify
  2  usage, parse or precondition error

Permutations are written as space-separated values (quote them) or, up to
length 9, as a digit string such as 2413. A basis is a comma-separated list
of permutations. DEFLATE_THREADS caps the number of worker threads.";

#[derive(Parser, Debug)]
#[command(
    name = "deflate",
    version,
    about = "Deflatability analysis for permutation classes"
)]
#[command(after_help = EXIT_CODES)]
struct Cli {
    /// Emit a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find the leftmost occurrence of a pattern in a host
    Contains {
        pattern: Permutation,
        host: Permutation,
    },
    /// Print the substitution decomposition
    Decompose { perm: Permutation },
    /// List the simple members of a class
    Simples {
        #[arg(long)]
        basis: Basis,
        #[arg(long)]
        max_len: usize,
    },
    /// List the members of a class, shortest first
    Enumerate {
        #[arg(long)]
        basis: Basis,
        #[arg(long)]
        max_len: usize,
    },
    /// Draw the blocked insertion slots of a member
    Shade {
        #[arg(long)]
        perm: Permutation,
        #[arg(long)]
        basis: Basis,
    },
    /// Decide deflatability of Av(pi) from known results
    Classify { pi: Permutation },
    /// Search for or check witnesses of deflatability
    Witness {
        #[command(subcommand)]
        action: WitnessCommand,
    },
    /// Extend a member to a simple member of its class
    Extend {
        #[arg(long)]
        perm: Permutation,
        #[arg(long)]
        basis: Basis,
        #[arg(long)]
        max_len: usize,
    },
    /// Build and check the inflated pair for a given theta
    Family {
        #[arg(long)]
        theta: Permutation,
    },
    /// Check every row of a witness corpus (the bundled one by default)
    #[command(name = "verify-table", alias = "verify-paper")]
    VerifyTable {
        /// File of `basis | witness` lines
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum WitnessCommand {
    /// Scan a class for members with a bond certificate
    Search {
        #[arg(long)]
        basis: Basis,
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        limit: usize,
    },
    /// Look for a bond certificate on one member
    Check {
        #[arg(long)]
        perm: Permutation,
        #[arg(long)]
        basis: Basis,
    },
}

#[derive(Debug, Clone)]
struct Basis(Vec<Permutation>);

impl FromStr for Basis {
    type Err = deflate_core::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map(Basis)
    }
}

impl Basis {
    fn class(&self) -> Result<PermClass, deflate_core::Error> {
        PermClass::new(self.0.iter().cloned())
    }
}

/// The JSON document printed under `--json`.
#[derive(Debug, Serialize, Deserialize)]
struct Report {
    command: String,
    inputs: Value,
    results: Value,
    timing_ms: u64,
}

struct Outcome {
    inputs: Value,
    results: Value,
    text: String,
    positive: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = std::env::var("DEFLATE_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let name = command_name(&cli.command);
    let start = Instant::now();
    let outcome = match run(&cli.command, cli.json) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.json {
        let report = Report {
            command: name.to_string(),
            inputs: outcome.inputs,
            results: outcome.results,
            timing_ms: start.elapsed().as_millis() as u64,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print!("{}", outcome.text);
    }
    ExitCode::from(if outcome.positive { 0 } else { 1 })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Contains { .. } => "contains",
        Command::Decompose { .. } => "decompose",
        Command::Simples { .. } => "simples",
        Command::Enumerate { .. } => "enumerate",
        Command::Shade { .. } => "shade",
        Command::Classify { .. } => "classify",
        Command::Witness {
            action: WitnessCommand::Search { .. },
        } => "witness search",
        Command::Witness {
            action: WitnessCommand::Check { .. },
        } => "witness check",
        Command::Extend { .. } => "extend",
        Command::Family { .. } => "family",
        Command::VerifyTable { .. } => "verify-table",
    }
}

fn class_name(b: &Basis) -> Result<String, deflate_core::Error> {
    Ok(b.class()?.to_string())
}

fn run(command: &Command, json: bool) -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut text = String::new();
    let outcome = match command {
        Command::Contains { pattern, host } => {
            let occ = contains(pattern, host);
            match &occ {
                Some(o) => writeln!(text, "occurrence {o} (entries {})", join(&o.entries(host)))?,
                None => writeln!(text, "{pattern} is not contained in {host}")?,
            }
            Outcome {
                inputs: json!({ "pattern": pattern, "host": host }),
                results: json!({
                    "contained": occ.is_some(),
                    "positions": occ.as_ref().map(|o| o.positions.clone()),
                }),
                positive: occ.is_some(),
                text,
            }
        }
        Command::Decompose { perm } => {
            let tree = substitution_decompose(perm);
            let intervals = proper_intervals(perm);
            writeln!(text, "{tree}")?;
            writeln!(text, "simple: {}", is_simple(perm))?;
            writeln!(text, "indecomposable: {}", is_indecomposable(perm))?;
            writeln!(text, "proper intervals: {}", intervals.len())?;
            Outcome {
                inputs: json!({ "perm": perm }),
                results: json!({
                    "tree": tree.to_string(),
                    "decomposition": tree,
                    "simple": is_simple(perm),
                    "indecomposable": is_indecomposable(perm),
                    "proper_intervals": intervals,
                }),
                positive: true,
                text,
            }
        }
        Command::Simples { basis, max_len } => {
            let class = basis.class()?;
            let mut simples = enumerate_simples(&class, *max_len);
            simples.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            for s in &simples {
                writeln!(text, "{s}")?;
            }
            Outcome {
                inputs: json!({ "basis": class.basis(), "max_len": max_len }),
                results: json!({ "count": simples.len(), "simples": simples }),
                positive: true,
                text,
            }
        }
        Command::Enumerate { basis, max_len } => {
            let class = basis.class()?;
            let mut counts = Vec::new();
            let mut members = Vec::new();
            for mut level in ClassLevels::new(&class, *max_len) {
                level.sort();
                counts.push(level.len());
                if json {
                    members.extend(level);
                } else {
                    // Text output streams one level at a time.
                    use std::io::Write;
                    let mut out = std::io::stdout().lock();
                    for m in &level {
                        writeln!(out, "{m}")?;
                    }
                }
            }
            Outcome {
                inputs: json!({ "basis": class.basis(), "max_len": max_len }),
                results: json!({ "counts": counts, "members": members }),
                positive: true,
                text,
            }
        }
        Command::Shade { perm, basis } => {
            let class = basis.class()?;
            let grid = shading_grid(perm, &class)?;
            let n = perm.len();
            text.push_str(&grid.render());
            writeln!(
                text,
                "blocked {} of {} slots",
                grid.blocked.len(),
                (n + 1) * (n + 1)
            )?;
            Outcome {
                inputs: json!({ "perm": perm, "basis": class.basis() }),
                results: json!({
                    "blocked_count": grid.blocked.len(),
                    "blocked": grid.blocked,
                    "grid": grid.render(),
                }),
                positive: true,
                text,
            }
        }
        Command::Classify { pi } => {
            let verdict = classify_principal(pi);
            writeln!(text, "{verdict}")?;
            writeln!(text, "symmetry: {}", verdict.symmetry_used)?;
            Outcome {
                inputs: json!({ "pi": pi }),
                results: serde_json::to_value(verdict)?,
                positive: true,
                text,
            }
        }
        Command::Witness {
            action:
                WitnessCommand::Search {
                    basis,
                    max_len,
                    limit,
                },
        } => {
            let class = basis.class()?;
            let found = find_witnesses(&class, *max_len, *limit)?;
            for r in &found {
                writeln!(
                    text,
                    "witness {} ({}), no simple extension up to length {}",
                    r.witness, r.certificate.bond, r.cross_check_bound
                )?;
            }
            if found.is_empty() {
                writeln!(
                    text,
                    "no certified member of {class} up to length {max_len}"
                )?;
            }
            let witnesses: Vec<Value> = found
                .iter()
                .map(|r| {
                    json!({
                        "witness": r.witness,
                        "bond": r.certificate.bond,
                        "checked_slots": r.certificate.checked_slots.len(),
                        "cross_check_bound": r.cross_check_bound,
                    })
                })
                .collect();
            Outcome {
                inputs: json!({ "basis": class.basis(), "max_len": max_len, "limit": limit }),
                results: json!({ "count": found.len(), "witnesses": witnesses }),
                positive: true,
                text,
            }
        }
        Command::Witness {
            action: WitnessCommand::Check { perm, basis },
        } => {
            let class = basis.class()?;
            let cert = bond_certificate(perm, &class)?;
            match &cert {
                Some(c) => {
                    writeln!(text, "certified: {}", c.bond)?;
                    writeln!(text, "{} strip slots blocked", c.checked_slots.len())?;
                    writeln!(text, "{perm} extends to no simple member of {class}")?;
                }
                None => writeln!(text, "no bond of {perm} is certified in {class}")?,
            }
            Outcome {
                inputs: json!({ "perm": perm, "basis": class.basis() }),
                results: json!({
                    "certified": cert.is_some(),
                    "bond": cert.as_ref().map(|c| c.bond),
                    "checked_slots": cert.as_ref().map(|c| &c.checked_slots),
                }),
                positive: cert.is_some(),
                text,
            }
        }
        Command::Extend {
            perm,
            basis,
            max_len,
        } => {
            let class = basis.class()?;
            let found = extend_to_simple(perm, &class, *max_len)?;
            match &found {
                Some(ext) => {
                    let method = match ext.method {
                        ExtensionMethod::Greedy => "greedy",
                        ExtensionMethod::Exhaustive => "exhaustive",
                    };
                    writeln!(text, "simple {} ({method})", ext.simple)?;
                    if let Some(trace) = &ext.embedding {
                        for stage in &trace.stages {
                            writeln!(text, "  embed {stage}")?;
                        }
                    }
                    for step in &ext.chain {
                        writeln!(
                            text,
                            "  cut {} at {} -> {}",
                            step.interval, step.slot, step.extension
                        )?;
                    }
                }
                None => writeln!(
                    text,
                    "no simple member of {class} of length at most {max_len} contains {perm}"
                )?,
            }
            Outcome {
                inputs: json!({ "perm": perm, "basis": class.basis(), "max_len": max_len }),
                results: json!({ "found": found.is_some(), "extension": found }),
                positive: found.is_some(),
                text,
            }
        }
        Command::Family { theta } => {
            let r = inflation_family(theta);
            writeln!(text, "pi*    {}", r.pi_star)?;
            writeln!(text, "omega* {}", r.omega_star)?;
            writeln!(text, "verified: {}", r.verified)?;
            Outcome {
                inputs: json!({ "theta": theta }),
                results: serde_json::to_value(&r)?,
                positive: r.verified,
                text,
            }
        }
        Command::VerifyTable { corpus } => {
            let owned;
            let rows = match corpus {
                Some(path) => {
                    owned = parse_corpus(&std::fs::read_to_string(path)?)?;
                    &owned[..]
                }
                None => bundled_corpus(),
            };
            let checks = verify_table(rows)?;
            let mut passed = 0;
            for c in &checks {
                let basis = Basis(c.row.basis.clone());
                let detail = match (&c.certificate, c.member) {
                    (_, false) => "witness is not a member".to_string(),
                    (None, true) => "no certified bond".to_string(),
                    (Some(b), true) => b.to_string(),
                };
                let cross = match c.cross_check {
                    CrossCheck::Passed { bound } => format!("no simple extension up to {bound}"),
                    CrossCheck::Failed { bound } => format!("simple extension found by {bound}"),
                    CrossCheck::Skipped => "cross-check skipped".into(),
                };
                let mark = if c.passed() { "PASS" } else { "FAIL" };
                passed += usize::from(c.passed());
                writeln!(
                    text,
                    "{mark} {} | {}: {detail}; {cross}",
                    class_name(&basis)?,
                    c.row.witness
                )?;
            }
            writeln!(text, "{passed}/{} rows passed", checks.len())?;
            Outcome {
                inputs: json!({ "corpus": corpus.as_ref().map(|p| p.display().to_string()) }),
                results: json!({
                    "passed": passed,
                    "total": checks.len(),
                    "rows": checks.iter().map(|c| json!({
                        "basis": c.row.basis,
                        "witness": c.row.witness,
                        "passed": c.passed(),
                        "member": c.member,
                        "bond": c.certificate,
                        "cross_check": c.cross_check,
                    })).collect::<Vec<_>>(),
                }),
                positive: passed == checks.len(),
                text,
            }
        }
    };
    Ok(outcome)
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
