mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use halfline::harness::{
    emit_report, run_claim, sweep_weak_decay, Claim, SweepConfig, SweepReport,
};
use halfline::{
    asymptotic_evolve, comp_state_evolve, destruction_time, distance, kernel_evolve, kraus_apply,
    spectral_evolve, wold_projectors, EvolutionParams, GridF64, Preset, ResolutionReport,
    WaveFunctionF64,
};

use config::FileConfig;

const DEFAULT_L: f64 = 40.0;
const DEFAULT_N: usize = 1 << 16;

/// Half-line drift Schrödinger simulator and its small-viscosity limit.
#[derive(Debug, Parser)]
#[command(name = "halfline", version)]
struct Cli {
    /// Flat TOML file whose keys mirror the long flags; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve a preset with one engine, or cross-check kernel against spectral.
    #[command(allow_negative_numbers = true)]
    Evolve(EvolveArgs),
    /// Report the limit channel, the compact-algebra state and the destruction time.
    #[command(allow_negative_numbers = true)]
    Limit(LimitArgs),
    /// Run the epsilon sweep behind one convergence claim and write CSV + JSON.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Initial datum: xexp, bump12, bump23 or sine-mode:K [default: xexp]
    #[arg(long)]
    preset: Option<String>,
    /// Box length [default: 40]
    #[arg(long = "L", value_name = "L")]
    length: Option<f64>,
    /// Grid points, a power of two [default: 65536]
    #[arg(long = "N", value_name = "N")]
    points: Option<usize>,
    /// Drift [default: 1]
    #[arg(long)]
    b: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Engine {
    Spectral,
    Kernel,
    Asymptotic,
    Both,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// [default: spectral]
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    /// Regularisation strength [default: 0.1]
    #[arg(long)]
    eps: Option<f64>,
    /// Evolution time [default: 1]
    #[arg(long)]
    t: Option<f64>,
    /// Write the wavefunction as CSV with columns x,re,im
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Time [default: 1]
    #[arg(long)]
    t: Option<f64>,
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Which claim to measure
    #[arg(long, value_parser = ["thm1", "weak", "thm3", "thm5", "prop2", "thm2"])]
    claim: Option<String>,
    /// Comma-separated times [default: per claim]
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    times: Option<Vec<f64>>,
    /// Comma-separated, strictly decreasing epsilon ladder [default: per claim]
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    epsilons: Option<Vec<f64>>,
    /// Shorthand for a single time; same as --times T
    #[arg(long, conflicts_with = "times")]
    t: Option<f64>,
    /// Report directory [default: reports]
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// thm1 only: also record the kernel-vs-spectral gap (slow, O(N^2))
    #[arg(long)]
    kernel_check: bool,
    /// weak only: preset to test against [default: bump12]
    #[arg(long)]
    probe: Option<String>,
}

enum Failure {
    Refused(String),
    Internal(anyhow::Error),
}

impl From<halfline::Error> for Failure {
    fn from(e: halfline::Error) -> Self {
        if e.is_refusal() {
            Failure::Refused(e.to_string())
        } else {
            Failure::Internal(e.into())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(Failure::Refused(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(Failure::Refused)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Evolve(a) => cmd_evolve(a, file),
        Command::Limit(a) => cmd_limit(a, file),
        Command::Sweep(a) => cmd_sweep(a, file),
    }
}

/// Grid, preset and drift after merging flags over the file.
struct Setup {
    preset: Preset,
    grid: GridF64,
    b: f64,
}

fn setup(a: &GridArgs, file: &FileConfig) -> Result<Setup, Failure> {
    let name = a
        .preset
        .clone()
        .or_else(|| file.preset.clone())
        .unwrap_or_else(|| "xexp".into());
    let preset: Preset = name.parse()?;
    let length = a.length.or(file.length).unwrap_or(DEFAULT_L);
    let points = a.points.or(file.points).unwrap_or(DEFAULT_N);
    Ok(Setup {
        preset,
        grid: GridF64::new(length, points)?,
        b: a.b.or(file.b).unwrap_or(1.0),
    })
}

#[derive(Serialize)]
struct EvolveReport {
    preset: String,
    engine: Engine,
    epsilon: f64,
    b: f64,
    t: f64,
    length: f64,
    points: usize,
    resolution: ResolutionReport,
    norm: f64,
    max_abs: f64,
    /// `|u(+0)|` extrapolated to the wall.
    boundary_trace: f64,
    /// Raw `|u(x_0)|` at the first node, `h/2` from the wall.
    first_node: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_gap: Option<f64>,
}

fn cmd_evolve(a: EvolveArgs, file: FileConfig) -> Outcome {
    let s = setup(&a.grid, &file)?;
    let engine = match (a.engine, &file.engine) {
        (Some(e), _) => e,
        (None, Some(name)) => Engine::from_str(name, true)
            .map_err(|_| Failure::Refused(format!("unknown engine {name:?}")))?,
        (None, None) => Engine::Spectral,
    };
    let eps = a.eps.or(file.eps).unwrap_or(0.1);
    let t = a.t.or(file.t).unwrap_or(1.0);
    let json = a.json || file.json.unwrap_or(false);
    let out = a.out.or(file.out);

    let p = EvolutionParams::new(eps, s.b, t)?;
    let phi = s.preset.sample(s.grid);
    let (u, cross_gap) = match engine {
        Engine::Spectral => (spectral_evolve(&phi, &p)?, None),
        Engine::Kernel => (kernel_evolve(&phi, &p)?, None),
        Engine::Asymptotic => (asymptotic_evolve(&phi, &p)?, None),
        Engine::Both => {
            let k = kernel_evolve(&phi, &p)?;
            let u = spectral_evolve(&phi, &p)?;
            let gap = distance(&k, &u)?;
            (u, Some(gap))
        }
    };
    let report = EvolveReport {
        preset: s.preset.to_string(),
        engine,
        epsilon: eps,
        b: s.b,
        t,
        length: s.grid.length(),
        points: s.grid.points(),
        resolution: ResolutionReport::gauge(&s.grid, eps, s.b),
        norm: u.norm(),
        max_abs: u.max_abs(),
        boundary_trace: u.boundary_trace().norm(),
        first_node: u.amplitudes()[0].norm(),
        cross_gap,
    };
    if let Some(path) = &out {
        write_dump(path, &u)?;
    }
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).context("serialising report")?
        );
    } else {
        println!("preset         {}", report.preset);
        println!("engine         {:?}", engine);
        println!("eps, b, t      {eps}, {}, {t}", s.b);
        println!(
            "grid           L = {}, N = {}",
            report.length, report.points
        );
        println!(
            "resolution     {:.1} points per wavelength",
            report.resolution.points_per_wavelength
        );
        println!("||u||          {:.16e}", report.norm);
        println!("max |u|        {:.6e}", report.max_abs);
        println!("|u(+0)|        {:.3e}", report.boundary_trace);
        println!("|u(x_0)|       {:.3e}", report.first_node);
        if let Some(gap) = cross_gap {
            println!("cross-gap      {gap:.6e}  (||kernel - spectral||)");
        }
        if let Some(path) = &out {
            println!("wrote          {}", path.display());
        }
    }
    Ok(true)
}

fn write_dump(path: &Path, u: &WaveFunctionF64) -> Result<(), Failure> {
    let mut text = String::from("x,re,im\n");
    for (x, a) in u.grid().nodes().zip(u.amplitudes()) {
        writeln!(text, "{x:.16e},{:.16e},{:.16e}", a.re, a.im)
            .expect("writing to a String cannot fail");
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[derive(Serialize)]
struct LimitReport {
    preset: String,
    b: f64,
    t: f64,
    spacing: f64,
    branch_probabilities: [f64; 2],
    alpha: f64,
    singular_weight: f64,
    destroyed: bool,
    destruction_time: f64,
    wold_unitary_mass: f64,
    wold_shift_mass: f64,
}

fn cmd_limit(a: LimitArgs, file: FileConfig) -> Outcome {
    let s = setup(&a.grid, &file)?;
    let t = a.t.or(file.t).unwrap_or(1.0);
    let json = a.json || file.json.unwrap_or(false);
    let phi = s.preset.sample(s.grid);

    let kraus = kraus_apply(&phi, s.b, t)?;
    let state = comp_state_evolve(&phi, s.b, t)?;
    let t_star = destruction_time(&phi, s.b)?;
    let wold = wold_projectors(s.b, t, &s.grid)?;
    let report = LimitReport {
        preset: s.preset.to_string(),
        b: s.b,
        t,
        spacing: s.grid.spacing(),
        branch_probabilities: kraus.probabilities(),
        alpha: state.alpha(),
        singular_weight: state.singular_weight(),
        destroyed: state.is_singular(),
        destruction_time: t_star,
        wold_unitary_mass: wold.unitary(&phi)?.norm_sqr(),
        wold_shift_mass: wold.shift(&phi)?.norm_sqr(),
    };
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).context("serialising report")?
        );
        return Ok(true);
    }
    let [pv, pw] = report.branch_probabilities;
    println!("preset            {}", report.preset);
    println!("b, t              {}, {t}", s.b);
    println!("branch mass V, W  {pv:.12}, {pw:.12}");
    println!("alpha             {:.12}", report.alpha);
    println!("singular weight   {:.12}", report.singular_weight);
    println!(
        "T*                {t_star:.6}  (h = {:.3e})",
        report.spacing
    );
    println!(
        "Wold masses       unitary {:.12}, shift {:.12}",
        report.wold_unitary_mass, report.wold_shift_mass
    );
    if report.destroyed {
        println!("state destroyed at T* = {t_star:.6}: only the singular part remains");
    } else if report.alpha < 1.0 && t > t_star {
        println!("pure state lost mass after T* = {t_star:.6}");
    } else {
        println!("pure state intact");
    }
    Ok(true)
}

/// The acceptance ladder and times for each claim.
fn claim_defaults(claim: Claim) -> (Vec<f64>, Vec<f64>) {
    let coarse = vec![0.2, 0.1, 0.05, 0.025];
    match claim {
        Claim::Thm1 => (vec![0.5, 1.0, 2.0], coarse),
        Claim::Weak => (vec![1.5, 2.0], coarse),
        Claim::Thm3 | Claim::Thm5 => (vec![1.5], coarse),
        Claim::Prop2 => (vec![0.5, 1.0, 1.5], vec![0.025, 0.0125, 0.00625, 0.003125]),
        Claim::Thm2 => (vec![1.5], vec![0.1, 0.05, 0.025, 0.0125]),
    }
}

fn cmd_sweep(a: SweepArgs, file: FileConfig) -> Outcome {
    let s = setup(&a.grid, &file)?;
    let claim: Claim = a
        .claim
        .or(file.claim.clone())
        .ok_or_else(|| Failure::Refused("--claim is required".into()))?
        .parse()?;
    let (default_times, default_eps) = claim_defaults(claim);
    let times =
        a.t.map(|t| vec![t])
            .or(a.times)
            .or(file.times.clone())
            .unwrap_or(default_times);
    let epsilons = a.epsilons.or(file.epsilons.clone()).unwrap_or(default_eps);
    let out_dir = a
        .out_dir
        .or(file.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("reports"));
    let kernel_check = a.kernel_check || file.kernel_check.unwrap_or(false);

    let cfg = SweepConfig {
        preset: s.preset,
        length: s.grid.length(),
        points: s.grid.points(),
        b: s.b,
        times,
        epsilons,
    };
    let report = match claim {
        Claim::Weak => {
            let name = a
                .probe
                .or(file.probe.clone())
                .unwrap_or_else(|| "bump12".into());
            let probe: Preset = name.parse()?;
            sweep_weak_decay(&cfg, &probe.sample(s.grid))?
        }
        _ => run_claim(claim, &cfg, kernel_check)?,
    };
    let paths = emit_report(&report, &out_dir)?;
    print_summary(&report);
    println!("wrote {} and {}", paths.csv.display(), paths.json.display());
    Ok(report.passed())
}

fn print_summary(report: &SweepReport) {
    let summary = report.summary();
    println!("claim {}", report.claim.name());
    for s in &summary.series {
        let trend = if s.negligible {
            "negligible"
        } else if s.monotone {
            "decreasing"
        } else {
            "not decreasing"
        };
        let gate = if s.gated { "" } else { " (informational)" };
        println!("  {:<24} t = {:<8} {trend}{gate}", s.metric, s.t);
    }
    for c in &summary.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        println!(
            "  {mark} {}: {:.4e} {} {:e}",
            c.name, c.value, c.relation, c.limit
        );
    }
    if let Some(note) = &summary.note {
        println!("  note: {note}");
    }
    println!("verdict: {}", if summary.pass { "PASS" } else { "FAIL" });
}
