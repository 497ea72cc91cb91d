//! Command-line surface for the interval-range transformation monoid toolkit.
//!
//! Exit status: 0 on success (and verified checks), 1 when a verification
//! fails, 2 on usage errors. Data goes to stdout, diagnostics to stderr.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use iomonoid::canonical::canonical_form;
use iomonoid::kb;
use iomonoid::monoid::{
    cardinality_formula, count_by_image_size, enumerate_direct, rank_exact, MonoidVariant,
    RankOutcome,
};
use iomonoid::relations::{relations, tietze_reduce, RelationSystem, SystemName};
use iomonoid::trace::check_trace;
use iomonoid::transform::generator;
use iomonoid::verify::{
    flip_suite, verify_presentation, verify_presentation_kb, CanonicalTarget, VerifyConfig,
};
use iomonoid::word::{Letter, Word};

#[derive(Parser)]
#[command(
    name = "iomonoid",
    version,
    about = "Order-preserving transformations of a finite chain with interval range: \
             enumeration, ranks, presentations, canonical forms and rewriting oracles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the data-parallel sweeps (default: all cores, or
    /// the IOMONOID_THREADS environment variable).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args)]
struct Common {
    /// Chain size n >= 1.
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print a single generator as its image vector.
    Gen {
        #[command(flatten)]
        common: Common,
        /// Generator name, e.g. a2 or b1.
        #[arg(long)]
        name: String,
    },
    /// List the elements of a monoid variant.
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// One of io, io-, io+.
        #[arg(long)]
        variant: String,
    },
    /// Print the closed-form cardinality and, when feasible, the enumerated
    /// count and the per-image-size breakdown.
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        variant: String,
    },
    /// Minimum size of a generating set, by pruned exhaustive search.
    Rank {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        variant: String,
        /// Bound on the number of closure computations.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Largest n for which the full product-table search is allowed.
        #[arg(long, default_value_t = 8)]
        table_ceiling: usize,
    },
    /// Canonical normal form of a word, with its stratum.
    Nf {
        #[command(flatten)]
        common: Common,
        /// Whitespace-separated letters, e.g. "b2 a2"; `e` is the empty word.
        #[arg(long)]
        word: String,
        /// Also print (and check) the derivation trace.
        #[arg(long)]
        trace: bool,
    },
    /// Run the guess-and-prove verifier for a presentation.
    Verify {
        #[command(flatten)]
        common: Common,
        /// One of R, R-, R+, R'.
        #[arg(long)]
        presentation: String,
        /// Exhaustive word length (default 6 for n <= 5, else 4).
        #[arg(long)]
        max_word_len: Option<usize>,
        /// Completion fuel (only used for R', which is verified through the
        /// rewriting oracle).
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
    },
    /// Knuth-Bendix completion of a presentation and its normal-form count.
    Kb {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        presentation: String,
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
        /// Print the completed rule list.
        #[arg(long)]
        dump_rules: bool,
    },
    /// Derive the reduced presentation on n-1 generators.
    Tietze {
        #[command(flatten)]
        common: Common,
    },
    /// Run the flip-automorphism property suite.
    FlipCheck {
        #[command(flatten)]
        common: Common,
    },
    /// List the relations of a presentation with their family labels.
    Relations {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        presentation: String,
    },
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn parse_variant(text: &str) -> Result<MonoidVariant, ExitCode> {
    MonoidVariant::parse(text)
        .ok_or_else(|| usage_error(&format!("unknown variant `{text}` (expected io, io- or io+)")))
}

fn parse_system(text: &str) -> Result<SystemName, ExitCode> {
    SystemName::parse(text)
        .ok_or_else(|| usage_error(&format!("unknown presentation `{text}` (expected R, R-, R+ or R')")))
}

fn load_system(n: usize, name: SystemName) -> Result<RelationSystem, ExitCode> {
    relations(n, name).map_err(|e| usage_error(&e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("IOMONOID_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(count) = threads {
        if count == 0 {
            return usage_error("--threads must be positive");
        }
        if let Err(e) = iomonoid::par::set_thread_count(count) {
            eprintln!("warning: could not configure {count} threads: {e}");
        }
    }
    run(cli)
}

fn run(cli: Cli) -> ExitCode {
    let json = cli.json;
    match cli.command {
        Command::Gen { common, name } => {
            if common.n == 0 {
                return usage_error("n must be at least 1");
            }
            let letter = match Letter::parse(&name) {
                Ok(l) => l,
                Err(e) => return usage_error(&e.to_string()),
            };
            match generator(letter, common.n) {
                Ok(t) => {
                    if json {
                        println!("{}", serde_json::to_string(&t).expect("serializes"));
                    } else {
                        println!("{t}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(&e.to_string()),
            }
        }
        Command::Enumerate { common, variant } => {
            let variant = match parse_variant(&variant) {
                Ok(v) => v,
                Err(code) => return code,
            };
            if common.n > 20 {
                return usage_error("enumeration above n = 20 is not supported");
            }
            match enumerate_direct(common.n, variant) {
                Ok(table) => {
                    if json {
                        println!("{}", table.to_json());
                    } else {
                        for element in &table.elements {
                            println!("{element}");
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(&e.to_string()),
            }
        }
        Command::Count { common, variant } => {
            let variant = match parse_variant(&variant) {
                Ok(v) => v,
                Err(code) => return code,
            };
            if common.n == 0 {
                return usage_error("n must be at least 1");
            }
            if common.n > 60 {
                return usage_error("the cardinality exceeds 64 bits above n = 60");
            }
            let formula = cardinality_formula(common.n, variant);
            let by_size = count_by_image_size(common.n, variant);
            let enumerated = if common.n <= 16 {
                enumerate_direct(common.n, variant).ok().map(|t| t.len() as u64)
            } else {
                None
            };
            if json {
                let by_size: BTreeMap<String, u64> =
                    by_size.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
                let value = serde_json::json!({
                    "n": common.n,
                    "variant": variant.to_string(),
                    "formula": formula,
                    "enumerated": enumerated,
                    "by_image_size": by_size,
                });
                println!("{value}");
            } else {
                println!("formula: {formula}");
                match enumerated {
                    Some(count) => println!("enumerated: {count}"),
                    None => println!("enumerated: skipped (n too large)"),
                }
                let sizes: Vec<String> =
                    by_size.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                println!("by image size: {{{}}}", sizes.join(", "));
            }
            if let Some(count) = enumerated {
                if count != formula {
                    eprintln!("error: enumerated count {count} disagrees with formula {formula}");
                    return ExitCode::FAILURE;
                }
            }
            ExitCode::SUCCESS
        }
        Command::Rank { common, variant, budget, table_ceiling } => {
            let variant = match parse_variant(&variant) {
                Ok(v) => v,
                Err(code) => return code,
            };
            if common.n > table_ceiling {
                return usage_error(&format!(
                    "rank search scans full product tables; n = {} exceeds the ceiling {} \
                     (raise it with --table-ceiling at your own cost)",
                    common.n, table_ceiling
                ));
            }
            let table = match enumerate_direct(common.n, variant) {
                Ok(t) => t,
                Err(e) => return usage_error(&e.to_string()),
            };
            match rank_exact(&table, budget) {
                RankOutcome::Exact { rank, witness } => {
                    if json {
                        let witness: Vec<String> =
                            witness.iter().map(|t| t.to_string()).collect();
                        println!(
                            "{}",
                            serde_json::json!({
                                "n": common.n,
                                "variant": variant.to_string(),
                                "rank": rank,
                                "witness": witness,
                            })
                        );
                    } else {
                        let list: Vec<String> = witness.iter().map(|t| t.to_string()).collect();
                        println!("rank: {rank}");
                        println!("witness: {}", list.join(" "));
                    }
                    ExitCode::SUCCESS
                }
                RankOutcome::Unknown { lower_bound, subsets_tested } => {
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "n": common.n,
                                "variant": variant.to_string(),
                                "rank": null,
                                "lower_bound": lower_bound,
                                "subsets_tested": subsets_tested,
                            })
                        );
                    } else {
                        println!(
                            "rank: unknown above lower bound {lower_bound} \
                             (budget exhausted after {subsets_tested} closure tests)"
                        );
                    }
                    ExitCode::FAILURE
                }
            }
        }
        Command::Nf { common, word, trace } => {
            let parsed = match Word::parse_for(&word, common.n) {
                Ok(w) => w,
                Err(e) => return usage_error(&e.to_string()),
            };
            let (canonical, stratum, derivation) = match canonical_form(&parsed, common.n) {
                Ok(result) => result,
                Err(e) => return usage_error(&e.to_string()),
            };
            let system = relations(common.n, SystemName::R).expect("R exists for n >= 1");
            let trace_ok = check_trace(&derivation, &system);
            if json {
                let value = serde_json::json!({
                    "n": common.n,
                    "word": parsed.to_string(),
                    "canonical": canonical.to_string(),
                    "stratum": stratum.to_string(),
                    "a_letters": stratum.k,
                    "trace_ok": trace_ok,
                    "trace": if trace { Some(&derivation) } else { None },
                });
                println!("{value}");
            } else {
                println!("{canonical}");
                println!("stratum: {stratum}");
                if trace {
                    println!("trace: start {}", derivation.start);
                    for step in &derivation.steps {
                        println!(
                            "  {} {} at {} -> {}",
                            step.label, step.direction, step.position, step.after
                        );
                    }
                    println!("trace: {} steps, {}", derivation.len(), if trace_ok { "checked" } else { "INVALID" });
                }
            }
            if trace_ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: derivation trace failed to replay");
                ExitCode::FAILURE
            }
        }
        Command::Verify { common, presentation, max_word_len, fuel } => {
            let name = match parse_system(&presentation) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let system = match load_system(common.n, name) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let config = VerifyConfig { max_word_len, ..VerifyConfig::default() };
            let report = match CanonicalTarget::for_system(name) {
                Some(target) => verify_presentation(common.n, &system, target, &config),
                None => verify_presentation_kb(common.n, &system, fuel, &config),
            };
            match report {
                Ok(report) => {
                    if json {
                        println!("{}", report.to_json());
                    } else {
                        println!("{report}");
                    }
                    if report.verdict {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => usage_error(&e.to_string()),
            }
        }
        Command::Kb { common, presentation, fuel, dump_rules } => {
            let name = match parse_system(&presentation) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let system = match load_system(common.n, name) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let oriented = kb::orient(&system);
            if oriented.dropped_trivial > 0 {
                eprintln!(
                    "warning: dropped {} relation(s) with identical sides",
                    oriented.dropped_trivial
                );
            }
            let completed = match kb::complete(&oriented, fuel) {
                Ok(c) => c,
                Err(e) => return usage_error(&e.to_string()),
            };
            let count = kb::count_irreducible(&completed, None);
            let expected = {
                let variant = match name {
                    SystemName::RMinus => MonoidVariant::IoMinus,
                    SystemName::RPlus => MonoidVariant::IoPlus,
                    _ => MonoidVariant::Io,
                };
                cardinality_formula(common.n, variant)
            };
            if json {
                let value = serde_json::json!({
                    "n": common.n,
                    "presentation": name.to_string(),
                    "status": completed.status.to_string(),
                    "rules": completed.rules.len(),
                    "irreducible": count.as_ref().ok(),
                    "monoid_size": expected,
                    "rule_list": if dump_rules { Some(&completed.rules) } else { None },
                });
                println!("{value}");
            } else {
                println!("status: {}", completed.status);
                println!("rules: {}", completed.rules.len());
                match &count {
                    Ok(c) => println!("irreducible words: {c} (monoid size {expected})"),
                    Err(e) => println!("irreducible words: {e}"),
                }
                if dump_rules {
                    for rule in &completed.rules {
                        println!("  {rule}");
                    }
                }
            }
            match count {
                Ok(c) if c as u64 == expected => ExitCode::SUCCESS,
                Ok(c) => {
                    eprintln!("error: {c} normal forms but the monoid has {expected} elements");
                    ExitCode::FAILURE
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Tietze { common } => match tietze_reduce(common.n) {
            Ok(system) => {
                if json {
                    println!("{}", system.to_json());
                } else {
                    for rel in &system.relations {
                        println!("{rel}");
                    }
                    println!("total: {} relations on {} generators", system.len(), common.n - 1);
                }
                ExitCode::SUCCESS
            }
            Err(e) => usage_error(&e.to_string()),
        },
        Command::FlipCheck { common } => {
            if common.n == 0 || common.n > 12 {
                return usage_error("flip-check supports 1 <= n <= 12");
            }
            match flip_suite(common.n) {
                Ok(report) => {
                    if json {
                        println!("{}", serde_json::to_string(&report).expect("serializes"));
                    } else {
                        println!("{report}");
                    }
                    if report.verdict {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => usage_error(&e.to_string()),
            }
        }
        Command::Relations { common, presentation } => {
            let name = match parse_system(&presentation) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match load_system(common.n, name) {
                Ok(system) => {
                    if json {
                        println!("{}", system.to_json());
                    } else {
                        for rel in &system.relations {
                            println!("{rel}");
                        }
                        println!("total: {}", system.len());
                    }
                    ExitCode::SUCCESS
                }
                Err(code) => code,
            }
        }
    }
}
