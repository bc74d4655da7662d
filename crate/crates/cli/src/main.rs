use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use dynex::export::{export_curves, uniform_y_grid};
use dynex::figures::{check_caption_table, emit_figure, FigureId, FigureSpec};
use dynex::report::{all_passed, emit_report, summary_lines};
use dynex::suites;
use dynex_core::planar::{Family, InvariantCurve, PROBE_SET};
use dynex_core::CheckReport;

/// Numerical verification of the annulus, torus and planar constructions.
#[derive(Parser)]
#[command(name = "dynex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that RS displaces both R gamma and delta
    Annulus(AnnulusArgs),
    /// Check the non-Lagrangian torus against a rotation
    Torus(TorusArgs),
    /// Check a phase portrait or the linear classification
    Portrait(PortraitArgs),
    /// Write SVG figures
    Figures(FigureArgs),
    /// Run every suite at the default parameters
    All(AllArgs),
}

#[derive(Args)]
struct ReportArg {
    /// Write a JSON report here
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct AnnulusArgs {
    #[arg(long, default_value_t = 0.05)]
    eps1: f64,
    #[arg(long, default_value_t = 0.4)]
    eps2: f64,
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Args)]
struct TorusArgs {
    #[arg(long, default_value = "1", value_parser = ["1", "3"])]
    k: String,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Rotation angle along the first circle
    #[arg(long, default_value_t = PI)]
    v1: f64,
    #[arg(long, default_value_t = 512)]
    gridn: usize,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Linear,
    F1,
    F2,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Linear => Family::Linear,
            FamilyArg::F1 => Family::F1,
            FamilyArg::F2 => Family::F2,
        }
    }
}

#[derive(Args)]
struct PortraitArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    mu: f64,
    /// Also classify and integrate along the invariant curve with this parameter
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Integrator tolerance for the curve given by --a
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write curve samples as CSV
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure to write; all seven when omitted
    #[arg(long, value_parser = ["fig2-1", "fig4-1", "fig4-2", "fig4-3", "fig4-4", "fig4-5", "fig4-6"])]
    id: Option<String>,
    /// Output file with --id, otherwise output directory
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Args)]
struct AllArgs {
    /// Directory for the SVG figures
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    report: ReportArg,
}

fn finish(reports: &[CheckReport], report: Option<&Path>) -> anyhow::Result<ExitCode> {
    for line in summary_lines(reports) {
        println!("{line}");
    }
    if let Some(path) = report {
        emit_report(reports, path)?;
    }
    let ok = all_passed(reports);
    println!("{} of {} checks passed", reports.iter().filter(|r| r.passed()).count(), reports.len());
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn portrait_csv(args: &PortraitArgs, path: &Path) -> anyhow::Result<()> {
    let family = Family::from(args.family);
    let values: Vec<f64> = match args.a {
        Some(a) => vec![a],
        None => PROBE_SET.to_vec(),
    };
    let curves: Vec<InvariantCurve> = values
        .into_iter()
        .filter_map(|a| InvariantCurve::new(family, args.mu, a).ok())
        .collect();
    export_curves(&curves, &uniform_y_grid(4.0, 400), path)?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    check_caption_table()?;
    match cli.command {
        Command::Annulus(a) => {
            let reports = suites::annulus_suite(a.eps1, a.eps2, a.samples);
            finish(&reports, a.report.report.as_deref())
        }
        Command::Torus(t) => {
            let k: u32 = t.k.parse().context("--k")?;
            let reports = suites::torus_suite(2, k, t.eps, t.v1, t.gridn);
            finish(&reports, t.report.report.as_deref())
        }
        Command::Portrait(p) => {
            if let Some(out) = &p.out {
                if Family::from(p.family).is_quadratic() {
                    portrait_csv(&p, out)?;
                }
            }
            let reports = suites::portrait_suite(p.family.into(), p.mu, p.a, p.tol);
            finish(&reports, p.report.report.as_deref())
        }
        Command::Figures(f) => {
            let reports = match &f.id {
                Some(id) => {
                    let id: FigureId = id.parse()?;
                    emit_figure(&FigureSpec::default_for(id), &f.out)?;
                    vec![CheckReport::holds(format!("figure.{id}.written"), true)]
                }
                None => {
                    std::fs::create_dir_all(&f.out).with_context(|| format!("creating {}", f.out.display()))?;
                    suites::figure_suite(Some(&f.out))?
                }
            };
            finish(&reports, f.report.report.as_deref())
        }
        Command::All(a) => {
            if let Some(dir) = &a.out {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            let reports = suites::run_all(a.out.as_deref())?;
            finish(&reports, a.report.report.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
