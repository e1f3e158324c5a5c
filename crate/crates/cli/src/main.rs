//! `parity`: expand parity series, verify congruences, certify them, and
//! estimate odd densities.
//!
//! Eta quotients are written as `eta(d)^e` factors joined by `*`, with an
//! optional level suffix: `eta(1)^10 * eta(2)^2 * eta(11)^11 * eta(22)^-22 @ N=44`.
//! Without the suffix the level is the lcm of the divisors present.
//! Counting series are `p:t` (t-colored partitions) and `b:m` (m-regular).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parity_core::certifier::{
    catalog, certify, certify_with, find_claim, find_plan, numeric_verify, proof_plans,
    CertifyOptions, ProofCertificate,
};
use parity_core::density::{
    conjecture_table, landau_check, odd_density, regular_relation_check, DensityEstimate,
};
use parity_core::{parity_table, EtaQuotient, F2Series, TableKind};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "parity",
    version,
    about = "Parity congruences for partition functions"
)]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Rle,
    Raw,
}

#[derive(Clone, Copy)]
struct SeriesSpec(TableKind);

impl FromStr for SeriesSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, n) = s
            .split_once(':')
            .or_else(|| s.split_once('_'))
            .ok_or_else(|| format!("expected p:t or b:m, got {s:?}"))?;
        let n: u64 = n.parse().map_err(|_| format!("bad index in {s:?}"))?;
        if n == 0 {
            return Err("index must be positive".into());
        }
        match kind {
            "p" => Ok(SeriesSpec(TableKind::Multipartition { t: n })),
            "b" if n >= 2 => Ok(SeriesSpec(TableKind::Regular { m: n })),
            "b" => Err("b:m needs m >= 2".into()),
            _ => Err(format!("unknown series kind {kind:?}")),
        }
    }
}

#[derive(Args)]
struct CaseSelect {
    /// Catalog id: a triple `a,b,t` or an auxiliary identity name.
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    case: Option<String>,
    #[arg(long)]
    all: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the odd coefficients of a series below a horizon.
    Expand {
        #[arg(
            long,
            conflicts_with = "quotient",
            required_unless_present = "quotient"
        )]
        series: Option<SeriesSpec>,
        #[arg(long)]
        quotient: Option<String>,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        terms: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare both sides of catalog claims coefficientwise.
    Verify {
        #[command(flatten)]
        select: CaseSelect,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        terms: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Prove progression congruences up to the Sturm bound.
    Certify {
        #[command(flatten)]
        select: CaseSelect,
        /// Override the clearing power `j` of `eta(4z)^{24j}`.
        #[arg(long)]
        clearing_power: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the certificate document here (only if every case is proven).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Odd-coefficient densities.
    Density {
        #[command(subcommand)]
        which: DensityCommand,
    },
    /// Export a parity table.
    Table {
        #[arg(long)]
        series: SeriesSpec,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Rle)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DensityCommand {
    /// Odd count of one series below `x`.
    Series {
        #[arg(long)]
        series: SeriesSpec,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Estimated delta_t against the predicted 2^{-k-1}.
    Conjecture {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8")]
        ts: Vec<u64>,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// delta[5] against delta[20]/4 and delta[7] against delta[28]/2.
    Regular {
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Odd count of (q)^4 + q(q)^8(q^5)^4, which has density zero.
    Landau {
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Exit statuses: 1 for a failed check, 2 for bad input.
enum Failure {
    Check(String),
    Usage(String),
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is built once");
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Expand {
            series,
            quotient,
            terms,
            format,
        } => expand(series, quotient, terms as usize, format),
        Command::Verify {
            select,
            terms,
            format,
        } => verify(select, terms as usize, format),
        Command::Certify {
            select,
            clearing_power,
            format,
            out,
        } => run_certify(select, clearing_power, format, out),
        Command::Density { which } => density(which),
        Command::Table {
            series,
            x,
            format,
            out,
        } => table(series, x as usize, format, out),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn expand(
    series: Option<SeriesSpec>,
    quotient: Option<String>,
    terms: usize,
    format: Format,
) -> Outcome {
    let (name, s): (String, F2Series) = match (series, quotient) {
        (Some(SeriesSpec(kind)), _) => (kind.to_string(), parity_table(kind, terms).into_series()),
        (None, Some(text)) => {
            let q = EtaQuotient::from_str(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            (q.to_string(), q.expand(terms))
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let odd: Vec<usize> = s.support().collect();
    match format {
        Format::Text => {
            println!("{name}  offset {}/24  terms {}", s.offset24(), s.trunc());
            let list: Vec<String> = odd.iter().map(|n| n.to_string()).collect();
            println!("odd at: {}", list.join(" "));
        }
        Format::Structured => {
            let doc = serde_json::json!({
                "series": name,
                "offset24": s.offset24(),
                "terms": s.trunc(),
                "odd": odd,
            });
            println!("{}", to_json(&doc));
        }
    }
    Ok(())
}

fn verify(select: CaseSelect, terms: usize, format: Format) -> Outcome {
    let claims = if select.all {
        catalog()
    } else {
        let id = select.case.expect("clap requires a case");
        vec![find_claim(&id).ok_or_else(|| Failure::Usage(format!("unknown case {id:?}")))?]
    };
    let outcomes: Vec<_> = claims
        .par_iter()
        .map(|c| numeric_verify(c, terms))
        .collect();
    match format {
        Format::Text => {
            for o in &outcomes {
                match o.first_mismatch {
                    None => println!("{:<28} pass  ({} terms)", o.id, o.terms),
                    Some(n) => println!("{:<28} FAIL  first mismatch at q^{n}", o.id),
                }
            }
        }
        Format::Structured => println!("{}", to_json(&outcomes)),
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "verification failed: {}",
            failed.join(" ")
        )))
    }
}

fn print_certificate(c: &ProofCertificate) {
    let opt = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
    println!("case {} ({})", c.case, c.shape);
    println!("  claim           {}", c.claim);
    if let Some(p) = &c.p_set {
        println!("  P set           {p:?}");
    }
    if let Some(nu) = c.nu {
        println!("  nu              {nu}");
    }
    if let Some(s) = &c.s_vector {
        println!("  s               {s:?}");
    }
    println!("  level           {}", opt(c.level));
    for t in &c.rhs_terms {
        println!("  rhs[{}]          {} ({})", t.index, t.form, t.source);
    }
    if let Some(m) = &c.global_min_order {
        println!("  min order       {m}");
    }
    println!(
        "  clearing power  {} (minimal {})",
        opt(c.clearing_power),
        opt(c.minimal_clearing_power)
    );
    if let Some(same) = c.same_character {
        println!(
            "  characters      {}",
            if same { "same" } else { "different" }
        );
    }
    if let Some(flag) = &c.character_flag {
        println!("  note            {flag}");
    }
    println!("  sturm bound     {}", opt(c.sturm_bound));
    match (&c.failed_stage, &c.failure) {
        (Some(stage), Some(msg)) => println!("  verdict         FAILED at {stage}: {msg}"),
        _ => println!("  verdict         PROVEN on [0, {}]", opt(c.sturm_bound)),
    }
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(contents)?;
    f.sync_all()?;
    drop(f);
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn run_certify(
    select: CaseSelect,
    clearing_power: Option<u64>,
    format: Format,
    out: Option<PathBuf>,
) -> Outcome {
    let options = CertifyOptions {
        clearing_power,
        s_vector: None,
    };
    let (certs, document) = if select.all {
        let certs: Vec<ProofCertificate> = proof_plans()
            .par_iter()
            .map(|p| certify_with(p, &options))
            .collect();
        let doc = to_json(&certs);
        (certs, doc)
    } else {
        let id = select.case.expect("clap requires a case");
        let plan = find_plan(&id).ok_or_else(|| Failure::Usage(format!("unknown case {id:?}")))?;
        let cert = if clearing_power.is_some() {
            certify_with(&plan, &options)
        } else {
            certify(&plan)
        };
        let doc = cert.to_json();
        (vec![cert], doc)
    };
    match format {
        Format::Text => certs.iter().for_each(print_certificate),
        Format::Structured => println!("{document}"),
    }
    let failed: Vec<String> = certs
        .iter()
        .filter(|c| !c.proven())
        .map(|c| c.case.clone())
        .collect();
    if !failed.is_empty() {
        return Err(Failure::Check(format!(
            "certification failed: {}; no certificate written",
            failed.join(" ")
        )));
    }
    if let Some(path) = out {
        write_atomic(&path, format!("{document}\n").as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn print_estimate(d: &DensityEstimate) {
    println!(
        "{}  x={}  odd={}  ratio={:.6}",
        d.series,
        d.x,
        d.odd_count,
        d.ratio_f64()
    );
    for c in &d.checkpoints {
        println!("  x={:<10} odd={:<10} ratio={}", c.x, c.odd_count, c.ratio);
    }
}

fn density(which: DensityCommand) -> Outcome {
    match which {
        DensityCommand::Series { series, x, format } => {
            let d = odd_density(series.0, x);
            match format {
                Format::Text => print_estimate(&d),
                Format::Structured => println!("{}", to_json(&d)),
            }
        }
        DensityCommand::Conjecture { ts, x, format } => {
            if ts.contains(&0) {
                return Err(Failure::Usage("--ts entries must be positive".into()));
            }
            let rows = conjecture_table(&ts, x);
            match format {
                Format::Text => {
                    println!(
                        "{:>4} {:>3} {:>4} {:>10} {:>10} {:>10}",
                        "t", "k", "t0", "predicted", "estimate", "deviation"
                    );
                    for r in &rows {
                        let f =
                            |q: parity_core::arith::Rational| *q.numer() as f64 / *q.denom() as f64;
                        println!(
                            "{:>4} {:>3} {:>4} {:>10.6} {:>10.6} {:>+10.6}",
                            r.t,
                            r.k,
                            r.t0,
                            f(r.predicted),
                            r.estimate.ratio_f64(),
                            f(r.deviation)
                        );
                    }
                }
                Format::Structured => println!("{}", to_json(&rows)),
            }
        }
        DensityCommand::Regular { x, format } => {
            let r = regular_relation_check(x);
            match format {
                Format::Text => {
                    for d in [&r.b5, &r.b20, &r.b7, &r.b28] {
                        println!("{}  ratio={:.6}", d.series, d.ratio_f64());
                    }
                    println!("delta[5] - delta[20]/4 = {}", r.residual_5_20);
                    println!("delta[7] - delta[28]/2 = {}", r.residual_7_28);
                    for o in [&r.b5_identity, &r.b7_identity] {
                        let status = if o.passed {
                            "pass".to_string()
                        } else {
                            format!("FAIL at q^{:?}", o.first_mismatch)
                        };
                        println!("{} to {} terms: {status}", o.id, o.terms);
                    }
                }
                Format::Structured => println!("{}", to_json(&r)),
            }
            if !(r.b5_identity.passed && r.b7_identity.passed) {
                return Err(Failure::Check("regular-partition identity failed".into()));
            }
        }
        DensityCommand::Landau { x, format } => {
            let d = landau_check(x);
            match format {
                Format::Text => {
                    print_estimate(&d);
                    println!("strictly decreasing: {}", d.strictly_decreasing());
                }
                Format::Structured => println!("{}", to_json(&d)),
            }
        }
    }
    Ok(())
}

fn table(series: SeriesSpec, x: usize, format: TableFormat, out: Option<PathBuf>) -> Outcome {
    let t = parity_table(series.0, x);
    let bytes = match format {
        TableFormat::Rle => t.rle_text().into_bytes(),
        TableFormat::Raw => t.raw_bytes(),
    };
    match out {
        Some(path) => write_atomic(&path, &bytes)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| Failure::Usage(e.to_string())),
    }
}
