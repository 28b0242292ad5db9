use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use cubecert::certifier::{
    certify, scan_bad_pairs, scan_exceptional, CertifyOptions, ScanMode, Status, CLASSPOLY_BUDGET,
    DEFAULT_EXCEPTIONAL_BUDGET, SCAN_DISC_BUDGET,
};
use cubecert::classpoly::{hilbert_class_poly_cached, ClassPolyCache};
use cubecert::Result;

#[derive(Parser)]
#[command(name = "cubecert", version, about = "Certificates for the Mordell family y^2 = x^3 + n at p = 2, 5 mod 9")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    D3,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the curve y^2 = x^3 + n at the prime p.
    Certify {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        json: bool,
        /// Also run the cube test when the 3c^2 <= p shortcut applies.
        #[arg(long)]
        cross_check: bool,
        #[arg(long, default_value_t = DEFAULT_EXCEPTIONAL_BUDGET)]
        exceptional_budget: u64,
        #[arg(long, default_value_t = CLASSPOLY_BUDGET)]
        classpoly_budget: u64,
    },
    /// Exceptional primes for every family prime up to a bound.
    Exceptional {
        #[arg(long)]
        p_max: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Search for (p, M) with H_{-M} a cube mod p.
    Badscan {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = SCAN_DISC_BUDGET)]
        max_disc: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the Hilbert class polynomial H_{-D}.
    Classpoly {
        #[arg(long)]
        disc: u64,
        /// Cache directory; defaults to $CERT_CACHE_DIR.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn open_cache(dir: Option<PathBuf>) -> Result<Option<ClassPolyCache>> {
    match dir {
        Some(dir) => ClassPolyCache::open(dir).map(Some),
        None => ClassPolyCache::from_env(),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Certify {
            p,
            n,
            json,
            cross_check,
            exceptional_budget,
            classpoly_budget,
        } => {
            let opts = CertifyOptions {
                exceptional_budget,
                classpoly_budget,
                cross_check,
                cache: open_cache(None)?.map(Arc::new),
            };
            let cert = certify(p, n, &opts)?;
            if json {
                print_json(&cert);
            } else {
                println!("p = {p}, n = {n}: {:?}", cert.status());
                for check in &cert.checks {
                    println!("  {:<20} {:?}", check.name, check.verdict);
                }
                let c = &cert.conclusions;
                println!("  integral_j = {}, same_conductor = {}, isogeny_conclusive = {}", c.integral_j, c.same_conductor, c.isogeny_conclusive);
            }
            Ok(match cert.status() {
                Status::Pass => 0,
                Status::Inconclusive => 2,
            })
        }
        Command::Exceptional { p_max, jobs, json } => {
            let scan = scan_exceptional(p_max, jobs)?;
            if json {
                print_json(&scan);
            } else {
                for row in &scan.rows {
                    let list: Vec<String> = row.exceptional.iter().map(ToString::to_string).collect();
                    println!("{:>6}  {{{}}}  cofactor {}  {} ms", row.p, list.join(", "), row.cofactor, row.millis);
                }
                println!("{} primes, all empty: {}", scan.rows.len(), scan.all_empty);
            }
            Ok(if scan.all_empty { 0 } else { 2 })
        }
        Command::Badscan {
            mode,
            bound,
            max_disc,
            jobs,
            json,
        } => {
            let mode = match mode {
                Mode::D3 => ScanMode::D3CRange,
                Mode::All => ScanMode::AllMRange,
            };
            let scan = scan_bad_pairs(mode, bound, max_disc, jobs)?;
            if json {
                print_json(&scan);
            } else {
                for pair in &scan.pairs {
                    match pair.c {
                        Some(c) => println!("(p, M) = ({}, {}) c = {c}", pair.p, pair.m),
                        None => println!("(p, M) = ({}, {})", pair.p, pair.m),
                    }
                }
                println!("{} bad pairs out of {} tested", scan.pairs.len(), scan.examined);
                if scan.partial {
                    println!("partial: {} discriminants above {} skipped", scan.skipped.len(), max_disc);
                }
            }
            Ok(if scan.partial { 2 } else { 0 })
        }
        Command::Classpoly { disc, cache, json } => {
            let cache = open_cache(cache)?;
            let poly = hilbert_class_poly_cached(disc, cache.as_ref())?;
            if json {
                print_json(&poly);
            } else {
                let terms: Vec<String> = poly
                    .coeffs
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                    .map(|(k, c)| match k {
                        0 => format!("({c})"),
                        1 => format!("({c})*t"),
                        _ => format!("({c})*t^{k}"),
                    })
                    .collect();
                println!("h = {}", poly.h);
                println!("{}", terms.join(" + "));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
