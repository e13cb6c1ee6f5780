//! Command-line front end: table reproduction, ranks, membership queries,
//! identity checks, the conjecture scan and numerical residuals.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mzv_core::element::parse_element;
use mzv_core::linalg::{Echelon, RelationMatrix};
use mzv_core::relations::{Family, FamilySpec};
use mzv_core::verify::{self, CorollaryPart, DerivationSpans, VerdictReport};
use mzv_core::word::composition_of_word;
use mzv_core::zeta::ZetaTable;

mod output;

pub use output::Format;

/// Exit code when every claim checked out.
pub const EXIT_OK: i32 = 0;
/// Exit code when a claim was falsified (or skipped under `--strict`).
pub const EXIT_FALSIFIED: i32 = 1;
/// Exit code for usage errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mzv", version, about = "Exact duality and derivation relations among multiple zeta values")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads (defaults to MZV_THREADS, then the number of CPUs).
    #[arg(long, global = true, env = "MZV_THREADS")]
    pub threads: Option<usize>,

    /// Wall-time budget per table cell, in seconds.
    #[arg(long, global = true, default_value_t = 60.0)]
    pub budget_secs: f64,

    /// Treat skipped (over-budget) results as failures.
    #[arg(long, global = true)]
    pub strict: bool,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Part {
    I,
    Ii,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ranks of the seven relation spans for weights 3..=max-weight.
    Table {
        #[arg(long)]
        max_weight: u32,
    },
    /// Rank of one family at one weight.
    Rank {
        #[arg(long)]
        family: String,
        #[arg(long)]
        weight: u32,
    },
    /// Whether an element lies in the span of a family.
    Member {
        #[arg(long)]
        element: String,
        #[arg(long)]
        family: String,
        #[arg(long)]
        weight: u32,
    },
    /// Checks one of the two identities up to a weight cutoff.
    VerifyTheorem {
        #[arg(long, value_enum)]
        part: Part,
        #[arg(long)]
        param: u32,
        #[arg(long)]
        cutoff: u32,
    },
    /// Checks that a duality element lies in the derivation span.
    Corollary {
        #[arg(long, value_enum)]
        part: Part,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
    },
    /// Scans (1-tau)(x^{m-1} y (1/(1-x) y)^{n-1}), m, n >= 3, against the derivation span.
    Conjecture {
        #[arg(long)]
        max_weight: u32,
    },
    /// Evaluates an element numerically by truncated nested sums.
    Numeric {
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 1_000_000)]
        terms: u64,
    },
}

/// Rendered report plus the exit status it implies.
#[derive(Debug)]
pub struct Outcome {
    pub status: i32,
    pub report: String,
}

#[derive(Debug, Serialize)]
pub struct RankReport {
    pub family: String,
    pub weight: u32,
    /// `None` when the budget ran out.
    pub rank: Option<usize>,
    pub rows: usize,
    pub columns: usize,
    pub elapsed_ms: u64,
}

#[derive(Debug, Serialize)]
pub struct NumericTerm {
    pub word: String,
    pub composition: Vec<u32>,
    pub coeff: String,
    pub value: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Serialize)]
pub struct NumericReport {
    pub element: String,
    pub terms_used: u64,
    pub value: f64,
    pub tail_bound: f64,
    pub within_bound: bool,
    pub terms: Vec<NumericTerm>,
}

#[derive(Debug, Serialize)]
pub struct ConjectureReport {
    pub max_weight: u32,
    pub all_true: bool,
    pub entries: Vec<verify::ConjectureEntry>,
    pub elapsed_ms: u64,
}

fn budget(cli: &Cli) -> anyhow::Result<Option<Duration>> {
    if !cli.budget_secs.is_finite() || cli.budget_secs < 0.0 {
        bail!("--budget-secs must be a non-negative number");
    }
    Ok(Some(Duration::from_secs_f64(cli.budget_secs)))
}

fn corollary_part(p: Part) -> CorollaryPart {
    match p {
        Part::I => CorollaryPart::I,
        Part::Ii => CorollaryPart::II,
    }
}

fn verdict_outcome(r: &VerdictReport, format: Format) -> anyhow::Result<Outcome> {
    Ok(Outcome {
        status: if r.verdict { EXIT_OK } else { EXIT_FALSIFIED },
        report: output::verdict(r, format)?,
    })
}

fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Table { max_weight } => {
            if *max_weight < 3 {
                bail!("--max-weight must be at least 3");
            }
            let report = verify::build_table(*max_weight, budget(cli)?)?;
            let violations = report.consistency_violations();
            let status = if !violations.is_empty() || (cli.strict && report.has_skipped()) {
                EXIT_FALSIFIED
            } else {
                EXIT_OK
            };
            Ok(Outcome {
                status,
                report: output::table(&report, format)?,
            })
        }
        Command::Rank { family, weight } => {
            let spec = FamilySpec::new(family.parse()?, *weight)?;
            let start = Instant::now();
            let m = RelationMatrix::from_polys(spec.weight, &spec.generate()?)?;
            let deadline = budget(cli)?.map(|b| start + b);
            let rank = Echelon::from_matrix_until(&m, deadline).ok().map(|e| e.rank());
            let report = RankReport {
                family: spec.family.to_string(),
                weight: spec.weight,
                rank,
                rows: m.len(),
                columns: m.columns(),
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            let status = if cli.strict && rank.is_none() { EXIT_FALSIFIED } else { EXIT_OK };
            Ok(Outcome {
                status,
                report: output::rank(&report, format)?,
            })
        }
        Command::Member {
            element,
            family,
            weight,
        } => {
            let start = Instant::now();
            let family: Family = family.parse()?;
            let spec = FamilySpec::new(family, *weight)?;
            let v = parse_element(element)?;
            if let Some(found) = v.terms().map(|(w, _)| w.weight()).find(|w| w != weight) {
                bail!("element has weight {found}, but --weight is {weight}");
            }
            let m = RelationMatrix::from_polys(spec.weight, &spec.generate()?)?;
            let verdict = Echelon::from_matrix(&m).contains(&v)?;
            let report = VerdictReport {
                claim: format!("member:{}", spec.family),
                params: [("weight".to_string(), *weight)].into(),
                cutoff: None,
                verdict,
                residual_terms: if verdict { Vec::new() } else { terms_of(&v) },
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            verdict_outcome(&report, format)
        }
        Command::VerifyTheorem { part, param, cutoff } => {
            let r = match part {
                Part::I => verify::verify_theorem_i(*param, *cutoff)?,
                Part::Ii => verify::verify_theorem_ii(*param, *cutoff)?,
            };
            verdict_outcome(&r, format)
        }
        Command::Corollary { part, s, t } => {
            let mut spans = DerivationSpans::new();
            let r = verify::check_corollary(corollary_part(*part), *s, *t, &mut spans)?;
            verdict_outcome(&r, format)
        }
        Command::Conjecture { max_weight } => {
            let start = Instant::now();
            let mut spans = DerivationSpans::new();
            let entries = verify::conjecture_scan(*max_weight, &mut spans)?;
            let all_true = entries.iter().all(|e| e.verdict);
            let report = ConjectureReport {
                max_weight: *max_weight,
                all_true,
                entries,
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            Ok(Outcome {
                status: if all_true { EXIT_OK } else { EXIT_FALSIFIED },
                report: output::conjecture(&report, format)?,
            })
        }
        Command::Numeric { element, terms } => {
            let v = parse_element(element)?;
            let mut table = ZetaTable::new(*terms);
            let total = table.residual(&v)?;
            let mut rows = Vec::new();
            for (w, c) in v.terms() {
                let z = table.get(w)?;
                rows.push(NumericTerm {
                    word: w.to_string(),
                    composition: if w.is_empty() { Vec::new() } else { composition_of_word(w)? },
                    coeff: c.to_string(),
                    value: z.value,
                    tail_bound: z.tail_bound,
                });
            }
            let within_bound = total.value.abs() <= total.tail_bound;
            let report = NumericReport {
                element: v.to_string(),
                terms_used: *terms,
                value: total.value,
                tail_bound: total.tail_bound,
                within_bound,
                terms: rows,
            };
            Ok(Outcome {
                status: if within_bound { EXIT_OK } else { EXIT_FALSIFIED },
                report: output::numeric(&report, format)?,
            })
        }
    }
}

fn terms_of(p: &mzv_core::Poly) -> Vec<verify::ResidualTerm> {
    p.terms()
        .map(|(w, c)| verify::ResidualTerm {
            word: w.to_string(),
            coeff: c.to_string(),
        })
        .collect()
}

/// Runs a parsed command on a dedicated thread pool. Errors in the input
/// (unparseable words, weight mismatches, bad parameters) map to
/// [`EXIT_USAGE`].
pub fn run(cli: &Cli) -> Outcome {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        builder = builder.num_threads(n);
    }
    let result = builder
        .build()
        .context("failed to start worker threads")
        .and_then(|pool| pool.install(|| execute(cli)));
    match result {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            status: EXIT_USAGE,
            report: format!("error: {e:#}\n"),
        },
    }
}
