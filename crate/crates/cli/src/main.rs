use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qwalk::analytics::{verify_family_predictions_with, ClaimStatus, VerifyOptions};
use qwalk::certificates::{build_certificate, compare, Certificate, CertificateSpec, Comparison, DEFAULT_TOLERANCE};
use qwalk::graph::{detect_srg, read_graph6_file, srg_identity_residual};
use qwalk_cli::{init_thread_pool, load_family, scan_family, CliError, CliError::IndexOutOfRange};

/// Quantum-walk certificates for strongly regular graph families.
///
/// Spec strings use the form KIND,WALK,P[,stats][,t=..|T=..][,dt=..], e.g.
/// `L1,DT,1,t=3`, `L2,DT,1,T=32`, `L2tilde,DT,2,T=32`, `L1,CT,2,fermion,t=0.5`,
/// `L2,CT,2,boson,T=3,dt=0.5`. Set QWALK_THREADS to cap parallelism.
#[derive(Debug, Parser)]
#[command(name = "qwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    L0,
    L1,
    L2,
    L2tilde,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WalkArg {
    Dt,
    Ct,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StatsArg {
    Boson,
    Fermion,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that every graph in a graph6 catalog is strongly regular.
    ValidateSrg { file: PathBuf },
    /// Build one certificate for one catalog member.
    Certificate {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "dt")]
        walk: WalkArg,
        #[arg(long, default_value_t = 1)]
        particles: usize,
        /// Step count or continuous time (the horizon T for L2 kinds).
        #[arg(long)]
        time: f64,
        /// Continuous walks only; defaults to boson.
        #[arg(long, value_enum)]
        statistics: Option<StatsArg>,
        /// Grid spacing for continuous L2.
        #[arg(long)]
        dt: Option<f64>,
        /// Zero-based index of the graph in the catalog.
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// JSON output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write `value,multiplicity` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare two saved certificates: exit 0 if equal, 1 if they differ.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Count undistinguished pairs in a family under each spec.
    Scan {
        file: PathBuf,
        #[arg(long = "spec", required = true)]
        specs: Vec<CertificateSpec>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Write the JSON report here (use `-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check the closed-form predictions and negative controls on a family.
    Verify {
        file: PathBuf,
        /// Times for the continuous-time controls.
        #[arg(long, value_delimiter = ',')]
        ct_times: Option<Vec<f64>>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn spec_from_flags(
    kind: KindArg,
    walk: WalkArg,
    particles: usize,
    time: f64,
    statistics: Option<StatsArg>,
    dt: Option<f64>,
) -> Result<CertificateSpec, CliError> {
    let (kind, horizon) = match kind {
        KindArg::L0 => ("L0", false),
        KindArg::L1 => ("L1", false),
        KindArg::L2 => ("L2", true),
        KindArg::L2tilde => ("L2tilde", true),
    };
    let mut text = format!("{kind},{},{particles}", if matches!(walk, WalkArg::Dt) { "DT" } else { "CT" });
    match statistics {
        Some(StatsArg::Boson) => text.push_str(",boson"),
        Some(StatsArg::Fermion) => text.push_str(",fermion"),
        None => {}
    }
    text.push_str(&format!(",{}={time}", if horizon { "T" } else { "t" }));
    if let Some(dt) = dt {
        text.push_str(&format!(",dt={dt}"));
    }
    Ok(text.parse()?)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) if p != Path::new("-") => Box::new(BufWriter::new(File::create(p)?)),
        _ => Box::new(io::stdout().lock()),
    })
}

fn validate_srg(file: &Path) -> Result<ExitCode, CliError> {
    let graphs = read_graph6_file(file)?;
    let mut params = Vec::new();
    let mut ok = true;
    for (i, g) in graphs.iter().enumerate() {
        match detect_srg(g) {
            Ok(p) => {
                println!("graph {i}: {p}, identity residual {}", srg_identity_residual(g, &p));
                params.push(p);
            }
            Err(e) => {
                println!("graph {i}: not strongly regular ({e})");
                ok = false;
            }
        }
    }
    params.dedup();
    if params.len() > 1 {
        println!("catalog mixes {} parameter sets", params.len());
        ok = false;
    }
    println!("{} graphs, {}", graphs.len(), if ok { "all strongly regular, one family" } else { "INVALID" });
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn certificate(
    file: &Path,
    spec: &CertificateSpec,
    index: usize,
    out: Option<&Path>,
    csv: Option<&Path>,
) -> Result<(), CliError> {
    let graphs = read_graph6_file(file)?;
    let g = graphs.get(index).ok_or(IndexOutOfRange { index, len: graphs.len() })?;
    let cert = build_certificate(g, spec)?;
    match out {
        Some(p) => cert.save(p)?,
        None => cert.write_json(io::stdout().lock())?,
    }
    if let Some(p) = csv {
        cert.write_csv(BufWriter::new(File::create(p)?))?;
    }
    eprintln!("{spec}: {} entries in {} distinct values", cert.len(), cert.runs().len());
    Ok(())
}

fn compare_files(a: &Path, b: &Path, tol: f64) -> Result<ExitCode, CliError> {
    let (ca, cb) = (Certificate::load(a)?, Certificate::load(b)?);
    for c in [&ca, &cb] {
        if tol < c.spec.bin_width {
            eprintln!(
                "warning: tolerance {tol:e} is below the certificate bin width {:e}; equal values may straddle a bin edge",
                c.spec.bin_width
            );
        }
    }
    Ok(match compare(&ca, &cb, tol)? {
        Comparison::Equal => {
            println!("equal ({} entries)", ca.len());
            ExitCode::SUCCESS
        }
        Comparison::LengthMismatch { left, right } => {
            println!("differ: lengths {left} and {right}");
            ExitCode::from(1)
        }
        Comparison::ValueMismatch { index, difference } => {
            println!("differ: sorted entry {index} differs by {difference:e}");
            ExitCode::from(1)
        }
    })
}

fn scan(file: &Path, specs: &[CertificateSpec], tol: f64, json: Option<&Path>) -> Result<(), CliError> {
    let out = scan_family(file, specs, tol)?;
    let r = &out.report;
    eprintln!("family {}: {} graphs, {} pairs", r.family, r.graphs, r.pairs);
    for (o, t) in r.specs.iter().zip(&out.metadata.timings) {
        eprintln!("  {:<28} undistinguished {:>4} of {:<4} ({:.2}s)", o.spec, o.undistinguished, r.pairs, t.seconds);
    }
    if let Some(p) = json {
        let mut w = output(Some(p))?;
        serde_json::to_writer_pretty(&mut w, &out)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(())
}

fn verify(file: &Path, ct_times: Option<Vec<f64>>, json: Option<&Path>) -> Result<ExitCode, CliError> {
    let (graphs, _) = load_family(file)?;
    let mut opts = VerifyOptions::default();
    if let Some(t) = ct_times {
        opts.ct_times = t;
    }
    let report = verify_family_predictions_with(&graphs, &opts)?;
    for c in &report.claims {
        let status = if c.status == ClaimStatus::Pass { "PASS" } else { "FAIL" };
        eprintln!("{status} {:<40} dev {:.2e}  {}", c.id, c.max_deviation, c.detail);
    }
    if let Some(p) = json {
        let mut w = output(Some(p))?;
        serde_json::to_writer_pretty(&mut w, &report)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    init_thread_pool()?;
    match cli.command {
        Command::ValidateSrg { file } => validate_srg(&file),
        Command::Certificate { file, kind, walk, particles, time, statistics, dt, index, out, csv } => {
            let spec = spec_from_flags(kind, walk, particles, time, statistics, dt)?;
            certificate(&file, &spec, index, out.as_deref(), csv.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { a, b, tol } => compare_files(&a, &b, tol),
        Command::Scan { file, specs, tol, json } => {
            scan(&file, &specs, tol, json.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, ct_times, json } => verify(&file, ct_times, json.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
