//! `dosedesign` — compute, certify, and evaluate Bayesian D-optimal
//! dose-response designs from TOML problem descriptions.
//!
//! Exit codes: 0 success (including a certified check), 1 unusable input,
//! 2 failed computation, 3 completed check that refuted the design.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use dosedesign::{
    bayes_logdet, check_equivalence, common_location_design, common_location_scale_design,
    d_efficiency, locally_d_optimal, saturated_individual, validate_design, CompositeDesign,
    DiscretePrior, FullParameterVector, ParameterStructure, PsoConfig, SaturatedSolution,
    SharingMode, Verdict,
};

mod design_file;
mod problem;
mod report;

use design_file::DesignFile;
use problem::{Problem, ProblemFile};
use report::{render_design, sig7, write_efficiency_csv, write_tau_csv, EfficiencyTable};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable files, malformed problems or designs.
    Input(String),
    /// The computation itself failed: no root, singular reference, …
    Computation(String),
}

impl From<dosedesign::Error> for CliError {
    fn from(e: dosedesign::Error) -> Self {
        use dosedesign::Error::*;
        match &e {
            Invalid { .. } | Parameter(_) | Dimension(_) | Unsupported(_) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Computation(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "dosedesign", version, about = "Bayesian D-optimal dose-response designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an optimal design for a problem file.
    Solve(SolveArgs),
    /// Certify or refute a design via the equivalence theorem.
    Check(CheckArgs),
    /// Tabulate D-efficiencies against locally optimal references.
    Efficiency(EfficiencyArgs),
    /// Write the equivalence-theorem sensitivity curves as CSV.
    #[command(alias = "equivalence")]
    TauCurve(TauCurveArgs),
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Problem description (TOML).
    #[arg(long)]
    problem: PathBuf,
    /// Solver: the closed-form saturated construction, the particle swarm,
    /// or auto (swarm seeded by the saturated solution).
    #[arg(long, value_enum, default_value_t = SolveMode::Auto)]
    mode: SolveMode,
    /// Seed for the swarm's random stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the design as full-precision TOML here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMode {
    Auto,
    Saturated,
    Swarm,
}

#[derive(clap::Args)]
struct CheckArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Design file to certify (TOML, as written by `solve --out`).
    #[arg(long)]
    design: PathBuf,
    /// Scan points per group for the sensitivity functions.
    #[arg(long, default_value_t = 1001)]
    grid: usize,
    /// Largest tolerated sensitivity value.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Also write the τ curves as CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EfficiencyArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    design: PathBuf,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TauCurveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    design: PathBuf,
    #[arg(long, default_value_t = 1001)]
    grid: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Check(args) => check(args),
        Command::Efficiency(args) => efficiency(args),
        Command::TauCurve(args) => tau_curve(args),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn saturated_solution(
    s: &ParameterStructure,
    shape_priors: &[DiscretePrior],
) -> dosedesign::Result<SaturatedSolution> {
    match s.sharing() {
        SharingMode::Individual => saturated_individual(
            s.kind(),
            &shape_priors[0],
            s.spaces()[0].d_max(),
            s.sigma2()[0],
        ),
        SharingMode::CommonLocation => common_location_design(s, shape_priors),
        SharingMode::CommonLocationScale => common_location_scale_design(s, shape_priors),
    }
}

fn sharing_label(s: &ParameterStructure) -> String {
    let name = match s.sharing() {
        SharingMode::Individual => "individual",
        SharingMode::CommonLocation => "common_location",
        SharingMode::CommonLocationScale => "common_location_scale",
    };
    let groups = s.num_groups();
    let noun = if groups == 1 { "group" } else { "groups" };
    format!("{name} ({groups} {noun}, m = {})", s.m())
}

fn solve(args: SolveArgs) -> Result<i32, CliError> {
    let problem = ProblemFile::load(&args.problem)?;
    let s = &problem.structure;
    let out = std::io::stdout();
    let mut out = out.lock();
    let io = |e: std::io::Error| CliError::Input(format!("cannot write report: {e}"));

    writeln!(out, "model             {}", s.kind()).map_err(io)?;
    writeln!(out, "sharing           {}", sharing_label(s)).map_err(io)?;

    let mut file;
    match args.mode {
        SolveMode::Saturated => {
            let sol = saturated_solution(s, &problem.shape_priors)?;
            let phi = bayes_logdet(s, &sol.design, &problem.full_prior)?;
            writeln!(out, "mode              saturated").map_err(io)?;
            if let Some(case) = sol.case {
                writeln!(out, "case              {case}").map_err(io)?;
            }
            writeln!(out, "criterion value   {}", sig7(phi)).map_err(io)?;
            render_design(&mut out, &sol.design).map_err(io)?;
            writeln!(
                out,
                "interior points   {}",
                sol.interior_points
                    .iter()
                    .map(|&p| sig7(p))
                    .collect::<Vec<_>>()
                    .join("  ")
            )
            .map_err(io)?;
            writeln!(
                out,
                "residuals         {}",
                sol.residuals
                    .iter()
                    .map(|&r| format!("{r:.1e}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            )
            .map_err(io)?;

            file = DesignFile::from_design(&sol.design);
            file.phi = Some(phi);
            file.mode = Some("saturated".into());
            file.case = sol.case.map(|c| c.to_string());
            file.interior_points = Some(sol.interior_points.clone());
            file.residuals = Some(sol.residuals.clone());
        }
        SolveMode::Auto | SolveMode::Swarm => {
            let cfg = PsoConfig::with_seed(args.seed);
            let outcome = dosedesign::pso::optimize(s, &problem.full_prior, &cfg)?;
            writeln!(out, "mode              swarm (seed {})", args.seed).map_err(io)?;
            if let Ok(sat) = saturated_solution(s, &problem.shape_priors) {
                if let Some(case) = sat.case {
                    writeln!(out, "saturated case    {case}").map_err(io)?;
                }
            }
            writeln!(out, "criterion value   {}", sig7(outcome.phi)).map_err(io)?;
            render_design(&mut out, &outcome.design).map_err(io)?;

            file = DesignFile::from_design(&outcome.design);
            file.phi = Some(outcome.phi);
            file.mode = Some("swarm".into());
        }
    }

    if let Some(path) = &args.out {
        file.save(path)?;
        writeln!(out, "wrote {}", path.display()).map_err(io)?;
    }
    Ok(0)
}

fn load_design(
    problem: &Problem,
    path: &std::path::Path,
) -> Result<CompositeDesign, CliError> {
    let xi = DesignFile::load(path)?.to_design()?;
    let findings = validate_design(&xi, &problem.structure, false);
    if !findings.is_valid() {
        return Err(CliError::Input(format!(
            "{} does not fit the problem: {}",
            path.display(),
            findings.findings.join("; ")
        )));
    }
    Ok(xi)
}

fn check(args: CheckArgs) -> Result<i32, CliError> {
    let problem = ProblemFile::load(&args.problem)?;
    let s = &problem.structure;
    let xi = load_design(&problem, &args.design)?;

    let phi = bayes_logdet(s, &xi, &problem.full_prior)?;
    let report = check_equivalence(s, &xi, &problem.full_prior, args.grid, args.tol)?;

    println!("criterion value   {}", sig7(phi));
    match report.verdict {
        Verdict::Certified => println!("verdict           certified"),
        Verdict::Refuted => println!("verdict           refuted"),
    }
    println!(
        "max violation     {} at dose {} (group {})",
        sig7(report.max_violation),
        sig7(report.worst_dose),
        report.worst_group + 1
    );
    println!(
        "scan              {} points per group, tolerance {}",
        args.grid,
        sig7(report.tolerance)
    );

    if let Some(path) = &args.out {
        let mut f = std::fs::File::create(path)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        write_tau_csv(&mut f, &report)?;
        println!("wrote {}", path.display());
    }
    Ok(match report.verdict {
        Verdict::Certified => 0,
        Verdict::Refuted => 3,
    })
}

fn long_header(s: &ParameterStructure) -> Vec<String> {
    let mut header = vec!["theta0".to_string()];
    match s.sharing() {
        SharingMode::Individual => {
            header.push("theta1".into());
            header.push("theta2".into());
        }
        SharingMode::CommonLocation => {
            for i in 1..=s.num_groups() {
                header.push(format!("theta1_{i}"));
                header.push(format!("theta2_{i}"));
            }
        }
        SharingMode::CommonLocationScale => {
            header.push("theta1".into());
            for i in 1..=s.num_groups() {
                header.push(format!("theta2_{i}"));
            }
        }
    }
    header
}

fn efficiency(args: EfficiencyArgs) -> Result<i32, CliError> {
    let problem = ProblemFile::load(&args.problem)?;
    let s = &problem.structure;
    let xi = load_design(&problem, &args.design)?;

    let eff_at = |coords: Vec<f64>| -> Result<f64, CliError> {
        let theta = FullParameterVector::new(s, coords)?;
        let reference = locally_d_optimal(s, &theta)?;
        Ok(d_efficiency(s, &xi, &theta, &reference)?)
    };

    let dirac_loc_scale =
        problem.prior_location.len() == 1 && problem.prior_scale.len() == 1;
    let table = if s.sharing() == SharingMode::CommonLocationScale
        && s.num_groups() == 2
        && dirac_loc_scale
    {
        let loc = problem.prior_location.atoms()[0][0];
        let scale = problem.prior_scale.atoms()[0][0];
        let col_values: Vec<f64> =
            problem.shape_priors[0].atoms().iter().map(|a| a[0]).collect();
        let row_values: Vec<f64> =
            problem.shape_priors[1].atoms().iter().map(|a| a[0]).collect();
        let mut rows = Vec::with_capacity(row_values.len());
        for &t2 in &row_values {
            let mut effs = Vec::with_capacity(col_values.len());
            for &t1 in &col_values {
                effs.push(eff_at(vec![loc, scale, t1, t2])?);
            }
            rows.push((t2, effs));
        }
        EfficiencyTable::Wide { col_values, rows }
    } else {
        let mut rows = Vec::with_capacity(problem.full_prior.len());
        for atom in problem.full_prior.atoms() {
            rows.push((atom.clone(), eff_at(atom.clone())?));
        }
        EfficiencyTable::Long {
            header: long_header(s),
            rows,
        }
    };

    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            write_efficiency_csv(&mut f, &table)?;
            println!("wrote {}", path.display());
        }
        None => {
            let stdout = std::io::stdout();
            write_efficiency_csv(&mut stdout.lock(), &table)?;
        }
    }
    Ok(0)
}

fn tau_curve(args: TauCurveArgs) -> Result<i32, CliError> {
    let problem = ProblemFile::load(&args.problem)?;
    let xi = load_design(&problem, &args.design)?;
    let report =
        check_equivalence(&problem.structure, &xi, &problem.full_prior, args.grid, 1e-3)?;
    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            write_tau_csv(&mut f, &report)?;
            println!("wrote {}", path.display());
        }
        None => {
            let stdout = std::io::stdout();
            write_tau_csv(&mut stdout.lock(), &report)?;
        }
    }
    Ok(0)
}
