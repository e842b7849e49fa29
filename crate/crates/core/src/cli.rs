//! Command-line surface.
//!
//! [`dispatch`] parses an argument vector and returns the exit status
//! together with the text for stdout and stderr, so the binary is a thin
//! shell around it and tests can drive it directly. Machine-readable
//! output (JSON, DOT, member lists) goes to stdout; diagnostics and
//! timings go to stderr.
//!
//! Exit status: 0 on success, 1 for domain errors and failed suites, 2 for
//! usage errors.

use std::collections::BTreeMap;
use std::fmt::Display;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::filters::{self, classify, descriptor, filter_eq, filter_le, realize, upset_in_fprime};
use crate::gamma::{export_dot, gamma2, gamma_p};
use crate::numtheory::{self, PrimeSet};
use crate::progressions::closure;
use crate::verify::{run_suite, SuiteParams};

#[derive(Debug, Parser)]
#[command(name = "kirchlab", version, about = "Arithmetic of the Kirch space: closures, filters, Γ_p graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closure of a + bℕ₀; lists members with --window, JSON otherwise
    Closure {
        a: u64,
        b: u64,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        window: Option<Vec<u64>>,
    },
    /// Descriptor (E, A, Pi, alpha) of a finite set
    Filter {
        #[arg(required = true)]
        set: Vec<u64>,
    },
    /// Compare two filters: cmp E... -- F...
    Cmp {
        #[arg(required = true)]
        e: Vec<u64>,
        #[arg(last = true, required = true)]
        f: Vec<u64>,
    },
    /// Position of a filter in the top layers of the poset
    Classify {
        #[arg(required = true)]
        set: Vec<u64>,
    },
    /// Members of the first layer above a second-layer filter
    Upset {
        #[arg(required = true)]
        set: Vec<u64>,
    },
    /// A set with prescribed A and alpha
    Realize {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<u64>,
    },
    /// The graph Γ_P (P = 2 gives the chain of powers of two)
    Gamma {
        p: u64,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Run a verification suite and print its report
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Prime utilities
    Primes {
        #[command(subcommand)]
        command: PrimesCommand,
    },
}

#[derive(Debug, Subcommand)]
enum PrimesCommand {
    /// Fermat/Mersenne type of a prime
    Classify { p: u64 },
    /// Prime factorization
    Factors { x: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { status: 0, stdout, stderr: String::new() }
    }

    fn domain_error(err: impl Display) -> Self {
        Outcome { status: 1, stdout: String::new(), stderr: format!("error: {err}\n") }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Parses `argv` (including the program name) and runs the command.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome { status: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    run(cli.command)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Closure { a, b, window } => {
            if a == 0 || b == 0 {
                return usage("closure needs positive A and B");
            }
            let set = closure(a, b);
            match window.as_deref() {
                Some(&[lo, hi]) => {
                    let members: Vec<String> = set.members(lo, hi).iter().map(u64::to_string).collect();
                    Outcome::ok(format!("{}\n", members.join(" ")))
                }
                _ => Outcome::ok(to_json(&set)),
            }
        }
        Command::Filter { set } => result(descriptor(&set).map(|d| to_json(&d))),
        Command::Cmp { e, f } => result((|| {
            let (e, f) = (descriptor(&e)?, descriptor(&f)?);
            Ok::<_, filters::FilterError>(to_json(&json!({
                "le": filter_le(&e, &f),
                "ge": filter_le(&f, &e),
                "eq": filter_eq(&e, &f),
            })))
        })()),
        Command::Classify { set } => result(descriptor(&set).and_then(|d| classify(&d)).map(|l| to_json(&l))),
        Command::Upset { set } => result(descriptor(&set).and_then(|d| upset_in_fprime(&d)).map(|u| to_json(&u))),
        Command::Realize { primes, alpha } => {
            if primes.len() != alpha.len() {
                return usage("--primes and --alpha need the same number of entries");
            }
            let a = match PrimeSet::from_primes(primes.iter().copied()) {
                Ok(a) if a.len() == primes.len() => a,
                Ok(_) => return Outcome::domain_error("--primes has repeated entries"),
                Err(e) => return Outcome::domain_error(e),
            };
            let alpha: BTreeMap<u64, u64> = primes.into_iter().zip(alpha).collect();
            result(realize(&a, &alpha).map(|e| to_json(&e)))
        }
        Command::Gamma { p, bound, format } => {
            let graph = if p == 2 { Ok(gamma2(bound)) } else { gamma_p(p, bound) };
            result(graph.map(|g| match format {
                Format::Dot => export_dot(&g),
                Format::Json => to_json(&g.to_json()),
            }))
        }
        Command::Verify { suite, seed, bound, prime, samples } => {
            let params = SuiteParams { bound, seed, prime, samples };
            match run_suite(&suite, &params) {
                Err(e) => Outcome::domain_error(e),
                Ok(report) => Outcome {
                    status: if report.passed() { 0 } else { 1 },
                    stdout: format!("{}\n", report.body()),
                    stderr: format!(
                        "{}: {} instances, {} failures, {:.2?}\n",
                        report.suite,
                        report.instances_checked,
                        report.failures.len(),
                        report.elapsed
                    ),
                },
            }
        }
        Command::Primes { command: PrimesCommand::Classify { p } } => {
            result(numtheory::classify_prime(p).map(|t| to_json(&t)))
        }
        Command::Primes { command: PrimesCommand::Factors { x } } => {
            if x == 0 {
                return usage("X must be positive");
            }
            let factors: Vec<[u64; 2]> = numtheory::factorize(x).into_iter().map(|(p, e)| [p, e as u64]).collect();
            Outcome::ok(to_json(&factors))
        }
    }
}

fn usage(msg: &str) -> Outcome {
    Outcome { status: 2, stdout: String::new(), stderr: format!("usage error: {msg}\n") }
}

fn result<E: Display>(r: Result<String, E>) -> Outcome {
    match r {
        Ok(s) => Outcome::ok(s),
        Err(e) => Outcome::domain_error(e),
    }
}
