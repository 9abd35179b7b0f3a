//! Command-line front end.  All computation lives in the library; this
//! binary parses arguments, wires caches and maps outcomes to exit codes:
//! 0 success, 1 verification failure, 2 usage error, 3 mathematical
//! precondition failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hmf2::congruence::{self, CheckOptions};
use hmf2::graded_ring::{build_generators, RingData};
use hmf2::krieg::{krieg_expansion, KriegParams};
use hmf2::number_theory::QuadField;
use hmf2::qseries::FourierExpansion;
use hmf2::theta::{self, GramMatrix, ThetaError};
use hmf2::{cache, tables};

#[derive(Parser)]
#[command(
    name = "hmf2",
    about = "Exact Fourier expansions and mod-p congruence verification for degree-2 Hermitian modular forms",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Table,
    Records,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the Eisenstein-type expansion F_{k,K} and write it out.
    Eisenstein {
        /// Fundamental discriminant d_K < 0 (e.g. -4 for Q(i)).
        #[arg(long, allow_negative_numbers = true)]
        disc: i64,
        /// Even weight >= 4.
        #[arg(long)]
        weight: i64,
        /// Trace bound of the expansion.
        #[arg(long, default_value_t = 8)]
        trace: i64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cache directory (also HMF2_CACHE_DIR).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Compute the degree-2 theta series of a Gram matrix file.
    Theta {
        /// Gram matrix file (hermgram format).
        #[arg(long)]
        gram: PathBuf,
        #[arg(long, default_value_t = 4)]
        trace: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute a golden coefficient table and diff it.
    Table {
        /// Which table: 1 (rank-8 theta columns) or 2 (Leech theta).
        which: u8,
        /// Override the embedded golden data with a file.
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        trace: i64,
        /// Skip checks that need external Gram files.
        #[arg(long)]
        no_external_data: bool,
        /// Directory with external Gram files (h1.gram, h2.gram, h3.gram).
        #[arg(long)]
        external_dir: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Rebuild the generator set even if cached.
        #[arg(long)]
        build_generators: bool,
    },
    /// Run the named congruence checks (a prefix filters by check id).
    Verify {
        /// Check id prefix, or "all".
        #[arg(default_value = "all")]
        check: String,
        #[arg(long, default_value_t = 6)]
        trace: i64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
        format: ReportFormat,
        #[arg(long)]
        no_external_data: bool,
        #[arg(long)]
        external_dir: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        build_generators: bool,
    },
    /// Exploratory: test whether a rank-(p+1) lattice lies in the mod-p
    /// kernel of the theta operator (checked to the trace bound only).
    ConjectureScan {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        gram: PathBuf,
        #[arg(long, default_value_t = 4)]
        trace: i64,
    },
}

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

fn fail(code: u8, msg: impl AsRef<str>) -> ExitCode {
    eprintln!("error: {}", msg.as_ref());
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Eisenstein {
            disc,
            weight,
            trace,
            out,
            cache_dir,
        } => cmd_eisenstein(disc, weight, trace, out, resolve_cache(cache_dir)),
        Cmd::Theta { gram, trace, out } => cmd_theta(&gram, trace, out),
        Cmd::Table {
            which,
            golden,
            trace,
            no_external_data,
            external_dir,
            cache_dir,
            build_generators,
        } => cmd_table(
            which,
            golden,
            trace,
            check_options(no_external_data, external_dir),
            resolve_cache(cache_dir),
            build_generators,
        ),
        Cmd::Verify {
            check,
            trace,
            format,
            no_external_data,
            external_dir,
            cache_dir,
            build_generators,
        } => cmd_verify(
            &check,
            trace,
            format,
            check_options(no_external_data, external_dir),
            resolve_cache(cache_dir),
            build_generators,
        ),
        Cmd::ConjectureScan { prime, gram, trace } => cmd_conjecture_scan(prime, &gram, trace),
    }
}

fn resolve_cache(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os("HMF2_CACHE_DIR").map(PathBuf::from))
}

fn check_options(no_external_data: bool, external_dir: Option<PathBuf>) -> CheckOptions {
    CheckOptions {
        use_external_data: !no_external_data,
        external_dir: external_dir.or_else(|| {
            let default = PathBuf::from("data/grams/external");
            default.is_dir().then_some(default)
        }),
    }
}

fn write_expansion(f: &FourierExpansion, out: Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => cache::store_expansion(&path, f).map_err(|e| e.to_string()),
        None => {
            let mut buf = Vec::new();
            f.write_to(&mut buf).map_err(|e| e.to_string())?;
            print!("{}", String::from_utf8_lossy(&buf));
            Ok(())
        }
    }
}

fn cmd_eisenstein(
    disc: i64,
    weight: i64,
    trace: i64,
    out: Option<PathBuf>,
    cache_dir: Option<PathBuf>,
) -> ExitCode {
    if weight < 4 || weight % 2 != 0 {
        return fail(
            EXIT_USAGE,
            format!("weight must be even and >= 4, got {weight}"),
        );
    }
    if trace < 0 {
        return fail(EXIT_USAGE, "trace bound must be nonnegative");
    }
    let field = match QuadField::new(disc) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_USAGE, e.to_string()),
    };
    let params = KriegParams::new(field, weight);
    let cached = cache_dir
        .as_ref()
        .map(|d| d.join(cache::eisenstein_file(disc, weight, trace)));
    let f = cached
        .as_ref()
        .and_then(|p| cache::load_expansion(p))
        .unwrap_or_else(|| {
            let f = krieg_expansion(&params, trace);
            if let Some(p) = &cached {
                if let Err(e) = cache::store_expansion(p, &f) {
                    eprintln!("note: could not write cache {}: {e}", p.display());
                }
            }
            f
        });
    eprintln!(
        "F_{{{weight},K}} for d_K = {disc}, trace <= {trace}: {} coefficients, in-theorem-range = {}",
        f.support_len(),
        params.in_theorem_range()
    );
    match write_expansion(&f, out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_USAGE, e),
    }
}

fn cmd_theta(gram_path: &Path, trace: i64, out: Option<PathBuf>) -> ExitCode {
    let text = match std::fs::read_to_string(gram_path) {
        Ok(t) => t,
        Err(e) => {
            return fail(
                EXIT_USAGE,
                format!("cannot read {}: {e}", gram_path.display()),
            )
        }
    };
    let gram = match GramMatrix::parse(None, &text) {
        Ok(g) => g,
        Err(ThetaError::OddDiagonal) => return fail(EXIT_PRECONDITION, "Gram matrix is not even"),
        Err(ThetaError::NotPositiveDefinite) => {
            return fail(EXIT_PRECONDITION, "Gram matrix is not positive definite")
        }
        Err(e) => return fail(EXIT_USAGE, e.to_string()),
    };
    let vectors = match theta::short_vectors(&gram, trace) {
        Ok(v) => v,
        Err(e) => return fail(EXIT_PRECONDITION, e.to_string()),
    };
    eprintln!(
        "lattice '{}': rank {}, unimodular = {}",
        gram.label,
        gram.rank,
        gram.is_unimodular()
    );
    for (t, vs) in &vectors {
        eprintln!("  half-norm {t}: {} vectors", vs.len());
    }
    let f = match theta::theta_series(&gram, trace) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_PRECONDITION, e.to_string()),
    };
    match write_expansion(&f, out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_USAGE, e),
    }
}

/// Build or load the generator set at the given bound.
fn obtain_ring(trace: i64, cache_dir: &Option<PathBuf>, force: bool) -> Result<RingData, String> {
    if !force {
        if let Some(dir) = cache_dir {
            if let Some(ring) = cache::load_ring(dir, trace) {
                eprintln!("generators: cache hit ({})", dir.display());
                return Ok(ring);
            }
        }
    }
    eprintln!("generators: building at trace bound {trace}");
    let ring = build_generators(trace).map_err(|e| e.to_string())?;
    if let Some(dir) = cache_dir {
        if let Err(e) = cache::store_ring(dir, &ring) {
            eprintln!("note: could not write generator cache: {e}");
        }
    }
    Ok(ring)
}

fn cmd_table(
    which: u8,
    golden: Option<PathBuf>,
    trace: i64,
    opts: CheckOptions,
    cache_dir: Option<PathBuf>,
    force_build: bool,
) -> ExitCode {
    if trace < 6 {
        return fail(EXIT_USAGE, "table reproduction needs trace >= 6");
    }
    let ring = match obtain_ring(trace, &cache_dir, force_build) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_PRECONDITION, e),
    };
    let golden_text = match &golden {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => Some(t),
            Err(e) => return fail(EXIT_USAGE, format!("cannot read {}: {e}", p.display())),
        },
        None => None,
    };
    let diffs = match which {
        1 => {
            let e4sq = ring.gens.e4.mul(&ring.gens.e4).expect("same field");
            let h1 = FourierExpansion::linear_combine(&[
                (hmf2::number_theory::rat(1), &e4sq),
                (hmf2::number_theory::rat(-5760), &ring.gens.chi8),
            ])
            .expect("weight 8");
            let h2 = FourierExpansion::linear_combine(&[
                (hmf2::number_theory::rat(1), &e4sq),
                (hmf2::number_theory::rat(-3072), &ring.gens.chi8),
            ])
            .expect("weight 8");
            if !opts.use_external_data || opts.external_dir.is_none() {
                eprintln!(
                    "note: columns derived from the span combinations (no external Gram data)"
                );
            }
            let rows = match &golden_text {
                Some(t) => match tables::parse_table1(t) {
                    Ok(r) => r,
                    Err(e) => return fail(EXIT_USAGE, e),
                },
                None => tables::table1_rows().to_vec(),
            };
            let n = rows.len();
            let diffs = tables::check_table1_rows(&rows, &h1, &h2);
            println!("table 1: {n} rows x 2 columns, {} mismatches", diffs.len());
            diffs
        }
        2 => {
            let rows = match &golden_text {
                Some(t) => match tables::parse_table2(t) {
                    Ok(r) => r,
                    Err(e) => return fail(EXIT_USAGE, e),
                },
                None => tables::table2_rows().to_vec(),
            };
            let n = rows.len();
            let diffs = tables::check_table2_rows(&rows, &ring.theta_leech);
            println!(
                "table 2: {n} rows plus vanishing of unlisted rank-2 classes, {} mismatches",
                diffs.len()
            );
            diffs
        }
        _ => return fail(EXIT_USAGE, "table number must be 1 or 2"),
    };
    if diffs.is_empty() {
        println!("all rows match");
        ExitCode::SUCCESS
    } else {
        for d in &diffs {
            println!("mismatch: {d}");
        }
        ExitCode::from(EXIT_VERIFY_FAIL)
    }
}

fn cmd_verify(
    check: &str,
    trace: i64,
    format: ReportFormat,
    opts: CheckOptions,
    cache_dir: Option<PathBuf>,
    force_build: bool,
) -> ExitCode {
    // the largest Sturm bound any registry check needs is 6
    if trace < 6 {
        return fail(
            EXIT_USAGE,
            format!("verification needs trace >= 6 (the largest Sturm bound), got {trace}"),
        );
    }
    let ring = match obtain_ring(trace, &cache_dir, force_build) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_PRECONDITION, e),
    };
    let mut report = congruence::run_named_checks(&ring, &opts);
    if check != "all" {
        report.entries.retain(|e| e.id.starts_with(check));
        if report.entries.is_empty() {
            return fail(EXIT_USAGE, format!("no check id starts with '{check}'"));
        }
    }
    match format {
        ReportFormat::Table => print!("{}", report.render_table()),
        ReportFormat::Records => print!("{}", report.render_records()),
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAIL)
    }
}

fn cmd_conjecture_scan(prime: u64, gram_path: &Path, trace: i64) -> ExitCode {
    if prime < 5 || prime % 4 != 3 {
        return fail(EXIT_USAGE, "the scan is about primes p = 3 mod 4, p >= 7");
    }
    let text = match std::fs::read_to_string(gram_path) {
        Ok(t) => t,
        Err(e) => {
            return fail(
                EXIT_USAGE,
                format!("cannot read {}: {e}", gram_path.display()),
            )
        }
    };
    let gram = match GramMatrix::parse(Some(QuadField::gaussian()), &text) {
        Ok(g) => g,
        Err(ThetaError::OddDiagonal) | Err(ThetaError::NotPositiveDefinite) => {
            return fail(
                EXIT_PRECONDITION,
                "Gram matrix must be even positive definite",
            )
        }
        Err(e) => return fail(EXIT_USAGE, e.to_string()),
    };
    if gram.rank as u64 != prime + 1 {
        return fail(
            EXIT_USAGE,
            format!(
                "rank {} lattice, but the scan wants rank p + 1 = {}",
                gram.rank,
                prime + 1
            ),
        );
    }
    if !gram.is_unimodular() {
        eprintln!("note: lattice is not unimodular; scanning anyway");
    }
    let f = match theta::theta_series(&gram, trace) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_PRECONDITION, e.to_string()),
    };
    match congruence::theta_kernel_verify(&f, prime) {
        Ok(v) => {
            println!(
                "Theta(theta_{{{}}}) mod {prime}: {} (bound {})",
                gram.label, v.status, v.bound_used
            );
            if let Some((h, r)) = v.witness {
                println!("witness {} with residue {r}", h.render_qi());
            }
            if v.holds() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY_FAIL)
            }
        }
        Err(e) => fail(EXIT_PRECONDITION, e.to_string()),
    }
}
