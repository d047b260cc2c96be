//! Command-line front end for the `fracspec` library.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 computation error,
//! 3 verification failure.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracspec::certify::{certify_all, Certifier, DEFAULT_TRUTH_LIMIT};
use fracspec::extremal::{
    build_extremal, matching_bound_connected, matching_bound_general,
    predicted_maximizer_connected, predicted_maximizer_general, ExtremalSpec, RegimePrediction,
};
use fracspec::formats::{from_edge_list, from_graph6, to_graph6};
use fracspec::matching::{
    fpm_partition, fractional_matching_number, fractional_transversal, matching_number,
    optimal_fractional_matching, wrc_decomposition,
};
use fracspec::numfmt::sig12;
use fracspec::spectral::{spectral_radius, SpectralError, DEFAULT_TOL};
use fracspec::verify::{
    audit_structure, cross_check_matching_implementations, sample_class, verify_certificates,
    verify_theorem, SweepOptions, Theorem, VerificationReport,
};
use fracspec::{Graph, HalfIntegral};

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn compute(message: impl ToString) -> Self {
        Failure {
            code: EXIT_COMPUTE,
            message: message.to_string(),
        }
    }

    fn verify(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VERIFY,
            message: message.into(),
        }
    }
}

type CliResult = Result<(), Failure>;

#[derive(Parser, Debug)]
#[command(
    name = "fracspec",
    version,
    about = "Spectral radius, (fractional) matchings and spectral matching certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where the graph comes from; standard input when neither flag is given
/// (graph6 if the first non-empty line has no space, an edge list otherwise).
#[derive(Args, Debug, Clone)]
struct GraphInput {
    /// Graph in graph6 format.
    #[arg(long = "g6", value_name = "GRAPH6", conflicts_with = "edges")]
    g6: Option<String>,
    /// File with `n m` on the first line and one `u v` pair per line.
    #[arg(long, value_name = "PATH")]
    edges: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral radius of the adjacency matrix.
    Rho {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Matching number.
    Beta {
        #[command(flatten)]
        input: GraphInput,
        /// Also print a maximum matching, one edge per line.
        #[arg(long)]
        witness: bool,
    },
    /// Fractional matching number.
    BetaStar {
        #[command(flatten)]
        input: GraphInput,
        /// Also print an optimal fractional matching with odd-cycle half-weight support.
        #[arg(long)]
        witness: bool,
    },
    /// Minimum fractional transversal and its W/R/C decomposition.
    Transversal {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Splits a fractional perfect matching into edges and odd cycles.
    Decompose {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Runs every spectral certificate and prints a JSON report.
    Certify {
        #[command(flatten)]
        input: GraphInput,
        /// Compute β and β* and check every fired certificate (default for n <= 12).
        #[arg(long, conflicts_with = "no_verify_truth")]
        verify_truth: bool,
        #[arg(long)]
        no_verify_truth: bool,
    },
    /// Builds `K_s ∨ (K_{2β*-2s} ∪ (n+s-2β*) K_1)`, or the predicted extremal graphs without `--s`.
    Extremal {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_half)]
        beta_star: HalfIntegral,
        #[arg(long)]
        s: Option<u64>,
        /// Predictions among all graphs instead of connected graphs (without `--s`).
        #[arg(long)]
        general: bool,
    },
    /// Threshold or bound of one of the results.
    Threshold {
        #[arg(long, value_enum)]
        theorem: ThresholdKind,
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_half, conflicts_with = "beta")]
        beta_star: Option<HalfIntegral>,
        #[arg(long)]
        beta: Option<u64>,
        /// Print the regime and predicted graphs as well.
        #[arg(long)]
        record: bool,
    },
    /// Exhaustive verification over all labelled graphs on `n` vertices.
    Verify {
        #[arg(long, value_enum)]
        theorem: VerifyKind,
        #[arg(long)]
        n: usize,
        /// Restrict a bound check to connected graphs (t33 becomes t32, t12 becomes t13).
        #[arg(long)]
        connected: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Report file; CSV, or JSON when the name ends in `.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow `n = 8`.
        #[arg(long)]
        long_run: bool,
        /// Check one class on constructed and random graphs instead of enumerating.
        #[arg(long, value_name = "CLASS")]
        sample_class: Option<u64>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, hide = true, default_value_t = 0.0, allow_hyphen_values = true)]
        bound_offset: f64,
    },
    /// Compares the matching algorithms with brute-force oracles.
    CrossCheck {
        /// Single order; default runs 1..=6 exhaustively and 7..=10 on samples.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ThresholdKind {
    /// Connected graphs by β*: class bound.
    T32,
    /// All graphs by β*: class bound.
    T33,
    /// Fractional perfect matching threshold (n only).
    T35,
    /// Threshold for β >= β + 1 (with --beta).
    T37,
    /// All graphs by β: class bound.
    T12,
    /// Connected graphs by β: class bound.
    T13,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum VerifyKind {
    T32,
    T33,
    T12,
    T13,
    /// Soundness of every certificate on connected graphs.
    Certificates,
    /// Duality, canonical witnesses, partitions and W/R/C properties.
    Structure,
}

fn parse_half(s: &str) -> Result<HalfIntegral, String> {
    s.parse::<HalfIntegral>()
        .map_err(|_| format!("expected a half-integer written k/2, x.0 or x.5, got {s:?}"))
}

fn read_graph(input: &GraphInput) -> Result<Graph, Failure> {
    if let Some(code) = &input.g6 {
        return from_graph6(code.trim()).map_err(|e| Failure::usage(e.to_string()));
    }
    if let Some(path) = &input.edges {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        return from_edge_list(&text).map_err(|e| Failure::usage(e.to_string()));
    }
    let mut text = String::new();
    io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| Failure::usage(format!("standard input: {e}")))?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.is_empty() {
        return Err(Failure::usage("no graph on standard input"));
    }
    if first.contains(char::is_whitespace) {
        from_edge_list(&text).map_err(|e| Failure::usage(e.to_string()))
    } else {
        from_graph6(first).map_err(|e| Failure::usage(e.to_string()))
    }
}

fn rho(g: &Graph, tol: f64) -> Result<f64, Failure> {
    match spectral_radius(g, tol) {
        Ok(r) => Ok(r.value),
        Err(SpectralError::EmptyGraph) => Ok(0.0),
        Err(e) => Err(Failure::compute(e)),
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Rho { input, tol } => {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Failure::usage("tolerance must be positive"));
            }
            let g = read_graph(&input)?;
            println!("{}", sig12(rho(&g, tol)?));
        }
        Command::Beta { input, witness } => {
            let g = read_graph(&input)?;
            let m = matching_number(&g);
            println!("{}", m.size());
            if witness {
                for (u, v) in &m.edges {
                    println!("{u} {v}");
                }
            }
        }
        Command::BetaStar { input, witness } => {
            let g = read_graph(&input)?;
            println!("{}", fractional_matching_number(&g));
            if witness {
                print!("{}", optimal_fractional_matching(&g).to_text());
            }
        }
        Command::Transversal { input } => {
            let g = read_graph(&input)?;
            let t = fractional_transversal(&g);
            println!("{}", t.total());
            print!("{}", t.to_text());
            let r = wrc_decomposition(&g, &t).map_err(Failure::compute)?;
            let list = |s: &fracspec::VertexSet| {
                s.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            println!("W: {}", list(&r.w));
            println!("R: {}", list(&r.r));
            println!("C: {}", list(&r.c));
        }
        Command::Decompose { input } => {
            let g = read_graph(&input)?;
            let m = optimal_fractional_matching(&g);
            let p = fpm_partition(&g, &m).map_err(Failure::compute)?;
            print!("{}", p.to_text());
        }
        Command::Certify {
            input,
            verify_truth,
            no_verify_truth,
        } => {
            let g = read_graph(&input)?;
            let truth = verify_truth || (!no_verify_truth && g.order() <= DEFAULT_TRUTH_LIMIT);
            let report = certify_all(&g, truth);
            println!("{}", report.to_json());
            if !report.sound {
                return Err(Failure::verify("a fired certificate's guarantee is false"));
            }
        }
        Command::Extremal {
            n,
            beta_star,
            s,
            general,
        } => match s {
            Some(s) => {
                let spec = ExtremalSpec::new(n, beta_star, s)
                    .map_err(|e| Failure::usage(e.to_string()))?;
                let g = build_extremal(spec).map_err(Failure::compute)?;
                println!("{}", to_graph6(&g).map_err(Failure::compute)?);
            }
            None => {
                let p = if general {
                    predicted_maximizer_general(n, beta_star)
                } else {
                    predicted_maximizer_connected(n, beta_star)
                }
                .map_err(|e| Failure::usage(e.to_string()))?;
                for e in &p.extremal {
                    println!("{}", to_graph6(&e.graph).map_err(Failure::compute)?);
                }
            }
        },
        Command::Threshold {
            theorem,
            n,
            beta_star,
            beta,
            record,
        } => threshold(theorem, n, beta_star, beta, record)?,
        Command::Verify {
            theorem,
            n,
            connected,
            jobs,
            out,
            long_run,
            sample_class: class,
            samples,
            seed,
            bound_offset,
        } => {
            let th = match (theorem, connected) {
                (VerifyKind::T32, _) | (VerifyKind::T33, true) => Theorem::ConnectedFractional,
                (VerifyKind::T33, false) => Theorem::GeneralFractional,
                (VerifyKind::T13, _) | (VerifyKind::T12, true) => Theorem::ConnectedMatching,
                (VerifyKind::T12, false) => Theorem::GeneralMatching,
                (VerifyKind::Certificates, _) => {
                    let a = verify_certificates(n, jobs, long_run)
                        .map_err(|e| Failure::usage(e.to_string()))?;
                    print!("{}", a.summary());
                    write_out(out.as_deref(), &a.to_json(), &a.to_json())?;
                    return if a.is_sound() {
                        Ok(())
                    } else {
                        Err(Failure::verify("unsound certificate"))
                    };
                }
                (VerifyKind::Structure, _) => {
                    let a = audit_structure(n, jobs, long_run)
                        .map_err(|e| Failure::usage(e.to_string()))?;
                    let json = serde_json::to_string_pretty(&a).expect("audit serializes");
                    println!("{json}");
                    write_out(out.as_deref(), &json, &json)?;
                    return if a.passed() {
                        Ok(())
                    } else {
                        Err(Failure::verify("structure audit failed"))
                    };
                }
            };
            let report = match class {
                Some(c) => sample_class(th, n, c, samples, seed),
                None => verify_theorem(
                    th,
                    n,
                    &SweepOptions {
                        jobs,
                        long_run,
                        bound_offset,
                    },
                ),
            }
            .map_err(|e| Failure::usage(e.to_string()))?;
            print!("{}", report.summary());
            write_report(out.as_deref(), &report)?;
            if !report.passed() {
                return Err(Failure::verify("verification failed"));
            }
        }
        Command::CrossCheck { n, samples, seed } => {
            let orders: Vec<usize> = match n {
                Some(n) => vec![n],
                None => (1..=10).collect(),
            };
            let mut ok = true;
            for n in orders {
                let r = cross_check_matching_implementations(n, samples, seed)
                    .map_err(|e| Failure::usage(e.to_string()))?;
                println!("{}", r.summary());
                ok &= r.passed();
            }
            if !ok {
                return Err(Failure::verify(
                    "matching implementations disagree with the oracles",
                ));
            }
        }
    }
    Ok(())
}

fn threshold(
    theorem: ThresholdKind,
    n: u64,
    beta_star: Option<HalfIntegral>,
    beta: Option<u64>,
    record: bool,
) -> CliResult {
    let need_star = || beta_star.ok_or_else(|| Failure::usage("this theorem needs --beta-star"));
    let need_beta = || beta.ok_or_else(|| Failure::usage("this theorem needs --beta"));
    let usage = |e: fracspec::extremal::ExtremalError| Failure::usage(e.to_string());
    let prediction: RegimePrediction = match theorem {
        ThresholdKind::T32 => predicted_maximizer_connected(n, need_star()?).map_err(usage)?,
        ThresholdKind::T33 => predicted_maximizer_general(n, need_star()?).map_err(usage)?,
        ThresholdKind::T12 => matching_bound_general(n, need_beta()?).map_err(usage)?,
        ThresholdKind::T13 => matching_bound_connected(n, need_beta()?).map_err(usage)?,
        ThresholdKind::T35 => {
            let c = Certifier::new(n as usize);
            let t = c.fpm_threshold().ok_or_else(|| {
                Failure::usage("the fractional perfect matching threshold needs n >= 3")
            })?;
            println!("{}", sig12(t));
            return Ok(());
        }
        ThresholdKind::T37 => {
            let b = need_beta()?;
            let c = Certifier::new(n as usize);
            let (t, case) = c
                .beta_threshold(b)
                .ok_or_else(|| Failure::usage(format!("no threshold for β = {b} at n = {n}")))?;
            println!("{}", sig12(t));
            if record {
                println!("case {case}");
            }
            return Ok(());
        }
    };
    if record {
        print!("{}", prediction.to_record());
    } else {
        println!("{}", sig12(prediction.bound));
    }
    Ok(())
}

fn write_out(path: Option<&Path>, csv: &str, json: &str) -> CliResult {
    let Some(path) = path else { return Ok(()) };
    let body = if path.extension().is_some_and(|e| e == "json") {
        json
    } else {
        csv
    };
    fs::write(path, body).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_report(path: Option<&Path>, report: &VerificationReport) -> CliResult {
    write_out(path, &report.to_csv_string(), &report.to_json())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
