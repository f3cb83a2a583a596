//! Command-line front end: generate regions, enumerate vertices, run the
//! verification pipelines, and drive seeded campaigns.
//!
//! Exit codes: 0 all checks passed / artifact written; 1 a verification check
//! failed (the report carries a witness); 2 input or schema error; 3 a
//! capability limit was exceeded (K too large, vertex dimension above 6,
//! unbounded vertex request).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use groupcast::geometry::{enumerate_vertices, minimize};
use groupcast::io;
use groupcast::network::CombinationNetwork;
use groupcast::regions::{generate_for_network, generate_for_valuation, RegionKind};
use groupcast::verify::{
    fme_pipeline, run_capacity_campaign, verify_binning_reduction, verify_capacity,
    verify_degraded_specializations, verify_example_k4, CampaignConfig, VerificationReport,
};
use groupcast::Error;

#[derive(Parser)]
#[command(
    name = "groupcast",
    version,
    about = "Exact-rational rate regions for combination networks with the diamond message set"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a rate region and write its minimized H-representation.
    Region(RegionArgs),
    /// Enumerate the vertices of a region or of an H-representation file.
    Vertices(VerticesArgs),
    /// Run the full verification pipelines on one network.
    Verify(VerifyArgs),
    /// Project the split-rate polytope step by step and compare against the
    /// closed-form region.
    Fme(FmeArgs),
    /// Match the symbolic four-receiver capacity region against the golden
    /// nine-row table.
    ExampleK4(ExampleArgs),
    /// Verify capacity on a seeded batch of random networks.
    Campaign(CampaignArgs),
}

#[derive(Args)]
struct RegionArgs {
    /// Region kind: inner | split9d | network-inner | capacity |
    /// three-degraded | two-degraded | binning-inner | binning-split11d |
    /// example-k4 (numbered aliases are accepted).
    #[arg(long, required_unless_present = "job")]
    kind: Option<RegionKind>,
    /// Network JSON file.
    #[arg(long, conflicts_with = "job")]
    net: Option<PathBuf>,
    /// Valuation JSON file (for valuation-based kinds).
    #[arg(long, conflicts_with = "job")]
    valuation: Option<PathBuf>,
    /// Self-contained job description: {"kind": ..., "network": {...}} or
    /// {"kind": ..., "valuation": {...}}.
    #[arg(long)]
    job: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerticesArgs {
    /// H-representation JSON file to enumerate directly.
    #[arg(long, conflicts_with_all = ["kind", "net"])]
    r#in: Option<PathBuf>,
    #[arg(long, requires = "net")]
    kind: Option<RegionKind>,
    #[arg(long)]
    net: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Network JSON file.
    #[arg(long)]
    net: PathBuf,
    /// Directory for report JSON files and the CSV summary.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed recorded in the reports.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct FmeArgs {
    #[arg(long)]
    net: Option<PathBuf>,
    #[arg(long)]
    valuation: Option<PathBuf>,
    /// Also compare the systems after steps 2, 3, and 4 against their
    /// closed-form descriptions and check the weak-pair symmetry.
    #[arg(long)]
    check_intermediates: bool,
    /// Directory for per-step H-representations and the report.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExampleArgs {
    /// Optional path for the report JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instances per receiver count.
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long, default_value_t = 3)]
    kmin: u8,
    #[arg(long, default_value_t = 6)]
    kmax: u8,
    /// Worker pool size; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Directory for per-instance reports and the CSV summary.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GROUPCAST_LOG", "error"))
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Capability(_) | Error::Unbounded(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> groupcast::Result<bool> {
    match cli.command {
        Command::Region(args) => {
            let region = match (&args.job, args.kind) {
                (Some(path), _) => io::region_from_job_json(&io::read_to_string(path)?)?,
                (None, Some(kind)) => {
                    load_region(kind, args.net.as_deref(), args.valuation.as_deref())?
                }
                (None, None) => return Err(Error::Schema("region needs --kind or --job".into())),
            };
            let reduced = minimize(&region);
            emit(args.out.as_deref(), &io::hrep_to_json(&reduced))?;
            Ok(true)
        }
        Command::Vertices(args) => {
            let poly = match &args.r#in {
                Some(path) => io::hrep_from_json(&io::read_to_string(path)?)?,
                None => {
                    let kind = args.kind.ok_or_else(|| {
                        Error::Schema("vertices needs either --in or --kind with --net".into())
                    })?;
                    load_region(kind, args.net.as_deref(), None)?
                }
            };
            let vertices = enumerate_vertices(&poly)?;
            emit(args.out.as_deref(), &io::vrep_to_json(&vertices))?;
            Ok(true)
        }
        Command::Verify(args) => {
            let net = load_network(&args.net)?;
            let seed = Some(args.seed);
            let reports = vec![
                verify_capacity(&net, seed)?,
                verify_degraded_specializations(&net, seed)?,
                verify_binning_reduction(&net.optimal_valuation()?, seed)?,
            ];
            finish_reports(
                &reports,
                args.out.as_deref(),
                &["capacity", "degraded", "binning"],
            )
        }
        Command::Fme(args) => {
            let v = match (&args.net, &args.valuation) {
                (_, Some(path)) => io::valuation_from_json(&io::read_to_string(path)?)?,
                (Some(path), None) => load_network(path)?.optimal_valuation()?,
                (None, None) => return Err(Error::Schema("fme needs --net or --valuation".into())),
            };
            let out = fme_pipeline(&v, args.check_intermediates, Some(args.seed))?;
            if let Some(dir) = &args.out {
                for (i, step) in out.steps.iter().enumerate() {
                    let path = dir.join(format!("step{}.json", i + 1));
                    io::write_string(&path, &io::hrep_to_json(step))?;
                }
            }
            finish_reports(
                std::slice::from_ref(&out.report),
                args.out.as_deref(),
                &["fme"],
            )
        }
        Command::ExampleK4(args) => {
            let (report, matches) = verify_example_k4()?;
            for m in &matches {
                println!(
                    "golden row {:>2}  ->  generated row {:>2}  matched",
                    m.golden_index + 1,
                    m.generated_index + 1
                );
            }
            println!("{}/9 rows matched", matches.len());
            if let Some(path) = &args.out {
                io::write_string(path, &report.to_json())?;
            }
            print_report(&report);
            Ok(report.pass)
        }
        Command::Campaign(args) => {
            let cfg = CampaignConfig {
                seed: args.seed,
                count: args.count,
                kmin: args.kmin,
                kmax: args.kmax,
                jobs: args.jobs,
            };
            let reports = run_capacity_campaign(&cfg)?;
            if let Some(dir) = &args.out {
                for (i, report) in reports.iter().enumerate() {
                    let name = format!(
                        "report-{:04}-k{}-seed{}.json",
                        i,
                        report.instance.k,
                        report.instance.seed.unwrap_or(0)
                    );
                    io::write_string(&dir.join(name), &report.to_json())?;
                }
                write_csv(&reports, &dir.join("summary.csv"))?;
            }
            let passed = reports.iter().filter(|r| r.pass).count();
            println!(
                "campaign: {passed}/{} instances passed (seed {})",
                reports.len(),
                args.seed
            );
            for report in &reports {
                if !report.pass {
                    print_report(report);
                }
            }
            Ok(passed == reports.len())
        }
    }
}

fn load_network(path: &Path) -> groupcast::Result<CombinationNetwork> {
    io::network_from_json(&io::read_to_string(path)?)
}

fn load_region(
    kind: RegionKind,
    net: Option<&Path>,
    valuation: Option<&Path>,
) -> groupcast::Result<groupcast::geometry::HPolytope> {
    match (net, valuation) {
        (_, Some(path)) => {
            let v = io::valuation_from_json(&io::read_to_string(path)?)?;
            generate_for_valuation(kind, &v)
        }
        (Some(path), None) => generate_for_network(kind, &load_network(path)?),
        (None, None) => Err(Error::Schema(
            "region generation needs --net or --valuation".into(),
        )),
    }
}

fn emit(out: Option<&Path>, contents: &str) -> groupcast::Result<()> {
    match out {
        Some(path) => io::write_string(path, contents),
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn print_report(report: &VerificationReport) {
    for check in &report.checks {
        let status = if check.pass { "pass" } else { "FAIL" };
        match &check.note {
            Some(note) => {
                println!(
                    "[{status}] {}::{} ({note})",
                    report.instance.label, check.name
                )
            }
            None => println!("[{status}] {}::{}", report.instance.label, check.name),
        }
        if let Some(witness) = &check.witness {
            println!(
                "        witness point {:?} violates row {:?} <= {}",
                witness.point, witness.row_coeffs, witness.row_rhs
            );
        }
    }
}

fn finish_reports(
    reports: &[VerificationReport],
    out: Option<&Path>,
    names: &[&str],
) -> groupcast::Result<bool> {
    if let Some(dir) = out {
        for (report, name) in reports.iter().zip(names) {
            io::write_string(&dir.join(format!("report-{name}.json")), &report.to_json())?;
        }
        write_csv(reports, &dir.join("summary.csv"))?;
    }
    for report in reports {
        print_report(report);
    }
    Ok(reports.iter().all(|r| r.pass))
}

fn write_csv(reports: &[VerificationReport], path: &Path) -> groupcast::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let file = std::fs::File::create(path)?;
    io::write_summary_csv(reports, file)
}
