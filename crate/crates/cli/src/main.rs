use std::f64::consts::FRAC_PI_2;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use specmeasure_core::mele::{constraint_residuals, mele_spectral_prob_with, spectral_normalizer};
use specmeasure_core::table::fmt_f64;
use specmeasure_core::{
    empirical_spectral_measure, mise_sweep, pickands_function, pseudo_observations,
    read_sample_file, select_extremes, spectral_to_h, write_sample, AngularSample, Error,
    MiseConfig, NormOrder, SpectralModel,
};

const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_IO: u8 = 4;

/// Spectral measure estimation for bivariate extremes.
#[derive(Parser, Debug)]
#[command(name = "specmeasure", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the spectral measure of a two-column data file.
    Estimate(EstimateArgs),
    /// Draw a sample from a dependence model.
    Simulate(SimulateArgs),
    /// Monte Carlo MISE of both estimators over a grid of k.
    Benchmark(BenchmarkArgs),
    /// Pickands dependence function from the p = 1 MELE.
    Pickands(PickandsArgs),
}

#[derive(Args, Debug)]
struct Io {
    /// Output file (standard output if omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write a gnuplot script plotting the output file.
    #[arg(long, value_name = "PATH")]
    gnuplot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Norm order: a real >= 1 or `inf`.
    #[arg(long, default_value = "1")]
    p: NormOrder,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = EstimatorChoice::Both)]
    estimator: EstimatorChoice,
    #[command(flatten)]
    io: Io,
}

#[derive(Args, Debug)]
struct PickandsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    io: Io,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelName,
    /// Dependence parameter (logistic: r >= 1, default 2; mixture: r in [0, 1], default 0.5).
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    psi1: f64,
    #[arg(long, default_value_t = 1.0)]
    psi2: f64,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    io: Io,
}

#[derive(Args, Debug)]
struct BenchmarkArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value = "1")]
    p: NormOrder,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 200)]
    reps: usize,
    /// `a:b:step`, inclusive.
    #[arg(long, default_value = "10:200:10")]
    k_grid: String,
    /// `a,b` as fractions of pi/2 (model default if omitted).
    #[arg(long)]
    interval: Option<String>,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    io: Io,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EstimatorChoice {
    Empirical,
    Mele,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModelName {
    Logistic,
    CauchyQuadrant,
    CauchyFullplane,
    Mixture,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", one_line(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}

fn one_line(e: &anyhow::Error) -> String {
    format!("{e:#}").replace('\n', " ")
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::ConstraintInfeasible { .. } => EXIT_INFEASIBLE,
                Error::Io(_) => EXIT_IO,
                Error::NotConverged { .. } | Error::Consistency(_) => 1,
                _ => EXIT_USAGE,
            };
        }
        if cause.downcast_ref::<io::Error>().is_some() {
            return EXIT_IO;
        }
    }
    EXIT_USAGE
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Simulate(a) => simulate(a),
        Command::Benchmark(a) => benchmark(a),
        Command::Pickands(a) => pickands(a),
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(io_args: &Io, body: &str, script: impl FnOnce(&str) -> String) -> Result<()> {
    let mut out = open_output(io_args.output.as_deref())?;
    out.write_all(body.as_bytes())
        .context("cannot write output")?;
    out.flush().context("cannot write output")?;
    if let Some(gp) = &io_args.gnuplot {
        let data = io_args
            .output
            .as_ref()
            .expect("checked before computing")
            .display()
            .to_string();
        std::fs::write(gp, script(&data))
            .with_context(|| format!("cannot write {}", gp.display()))?;
    }
    Ok(())
}

fn check_io(io_args: &Io) -> Result<()> {
    if io_args.gnuplot.is_some() && io_args.output.is_none() {
        return Err(Error::Parameter(
            "--gnuplot needs --output so the script can reference the data".into(),
        )
        .into());
    }
    Ok(())
}

fn load_angular(input: &Path, k: usize, p: NormOrder) -> Result<AngularSample> {
    let sample = read_sample_file(input).with_context(|| format!("reading {}", input.display()))?;
    let pobs = pseudo_observations(&sample);
    if pobs.has_ties() {
        eprintln!("warning: input contains tied values; tied observations share the maximal rank");
    }
    Ok(select_extremes(&pobs, k, p)?)
}

fn estimate(a: EstimateArgs) -> Result<()> {
    check_io(&a.io)?;
    let ang = load_angular(&a.input, a.k, a.p)?;
    let emp = empirical_spectral_measure(&ang);
    let want_mele = a.estimator != EstimatorChoice::Empirical;
    let want_emp = a.estimator != EstimatorChoice::Mele;

    let mut summary = vec![
        format!("#n={}", ang.n()),
        format!("#k={}", ang.k()),
        format!("#p={}", ang.norm()),
        format!("#N_n={}", ang.count()),
    ];
    if want_emp {
        summary.push(format!(
            "#total_mass_empirical={}",
            fmt_f64(emp.total_mass())
        ));
    }
    let mele = if want_mele {
        let (q, sol) = mele_spectral_prob_with(&ang)?;
        let phi = q.scaled(1.0 / spectral_normalizer(&q)?);
        let (centred, r1, r2) = constraint_residuals(&q, &phi);
        summary.push(format!("#mu={}", fmt_f64(sol.mu)));
        summary.push(format!("#total_mass_mele={}", fmt_f64(phi.total_mass())));
        summary.push(format!("#residual_score_sum={}", fmt_f64(centred)));
        summary.push(format!("#residual_sin_moment={}", fmt_f64(r1)));
        summary.push(format!("#residual_cos_moment={}", fmt_f64(r2)));
        Some(phi)
    } else {
        None
    };

    let mut body = summary.join("\n");
    body.push('\n');
    let mut header = vec!["theta"];
    if want_emp {
        header.push("weight_empirical");
    }
    if want_mele {
        header.push("weight_mele");
    }
    header.push("score_f");
    body.push_str(&header.join(","));
    body.push('\n');
    // both measures sit on the same merged atoms
    for (i, atom) in emp.atoms().iter().enumerate() {
        let mut cells = vec![fmt_f64(atom.angle)];
        if want_emp {
            cells.push(fmt_f64(atom.weight));
        }
        if let Some(phi) = &mele {
            cells.push(fmt_f64(phi.atoms()[i].weight));
        }
        cells.push(fmt_f64(ang.norm().score(atom.angle)));
        body.push_str(&cells.join(","));
        body.push('\n');
    }

    let columns: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    emit(&a.io, &body, |data| {
        let plots: Vec<String> = (1..columns.len() - 1)
            .map(|j| {
                format!(
                    "'{data}' using 1:{} with impulses title '{}'",
                    j + 1,
                    columns[j]
                )
            })
            .collect();
        format!(
            "set datafile separator ','\nset key autotitle columnhead\nset xrange [0:pi/2]\nset xlabel 'theta'\nplot {}\n",
            plots.join(", \\\n     ")
        )
    })
}

fn pickands(a: PickandsArgs) -> Result<()> {
    check_io(&a.io)?;
    let ang = load_angular(&a.input, a.k, NormOrder::ONE)?;
    let (q, _) = mele_spectral_prob_with(&ang)?;
    let phi = q.scaled(1.0 / spectral_normalizer(&q)?);
    let pf = pickands_function(&spectral_to_h(&phi)?);
    let mut body = String::from("v,A\n");
    for (v, value) in pf.knots().iter().zip(pf.values()) {
        body.push_str(&format!("{},{}\n", fmt_f64(*v), fmt_f64(*value)));
    }
    emit(&a.io, &body, |data| {
        format!(
            "set datafile separator ','\nset xrange [0:1]\nset yrange [0.5:1]\nset xlabel 'v'\n\
             plot '{data}' using 1:2 skip 1 with lines title 'A', (x > 1 - x ? x : 1 - x) title 'lower bound'\n"
        )
    })
}

fn build_model(m: &ModelArgs, p: NormOrder) -> Result<SpectralModel> {
    Ok(match m.model {
        ModelName::Logistic => {
            SpectralModel::asymmetric_logistic(m.r.unwrap_or(2.0), m.psi1, m.psi2, p)?
        }
        ModelName::CauchyQuadrant => SpectralModel::cauchy_quadrant(p),
        ModelName::CauchyFullplane => SpectralModel::cauchy_fullplane(p),
        ModelName::Mixture => SpectralModel::mixture(m.r.unwrap_or(0.5), p)?,
    })
}

fn simulate(a: SimulateArgs) -> Result<()> {
    check_io(&a.io)?;
    if a.n == 0 {
        bail!(Error::Parameter("--n must be positive".into()));
    }
    let model = build_model(&a.model, NormOrder::ONE)?;
    if !model.has_sampler() {
        bail!(Error::Unsupported(format!(
            "no sampler for {}",
            model.name()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let sample = model.sample(a.n, &mut rng)?;
    let mut body = Vec::new();
    write_sample(&mut body, &sample)?;
    let body = String::from_utf8(body).expect("ascii output");
    emit(&a.io, &body, |data| {
        format!("set datafile separator ','\nset logscale xy\nplot '{data}' using 1:2 skip 1 with dots notitle\n")
    })
}

fn parse_k_grid(s: &str) -> Result<Vec<usize>> {
    let bad = || {
        Error::Parameter(format!(
            "--k-grid expects a:b:step with 1 <= a <= b and step >= 1, got {s:?}"
        ))
    };
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        bail!(bad());
    }
    let nums: Vec<usize> = parts
        .iter()
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    let (lo, hi, step) = (nums[0], nums[1], nums[2]);
    if lo == 0 || hi < lo || step == 0 {
        bail!(bad());
    }
    Ok((lo..=hi).step_by(step).collect())
}

fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let bad = || {
        Error::Parameter(format!(
            "--interval expects a,b with 0 <= a < b <= 1, got {s:?}"
        ))
    };
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a >= 0.0 && a < b && b <= 1.0) {
        bail!(bad());
    }
    Ok((a * FRAC_PI_2, b * FRAC_PI_2))
}

fn benchmark(a: BenchmarkArgs) -> Result<()> {
    check_io(&a.io)?;
    let model = build_model(&a.model, a.p)?;
    let k_grid = parse_k_grid(&a.k_grid)?;
    let interval = match &a.interval {
        Some(s) => parse_interval(s)?,
        None => model.default_interval(),
    };
    let cfg = MiseConfig {
        n: a.n,
        reps: a.reps,
        k_grid,
        interval,
        seed: a.seed,
    };
    let table = mise_sweep(&model, &cfg)?;
    emit(&a.io, &table.to_csv(), |data| {
        format!(
            "set datafile separator ','\nset xlabel 'k'\nset ylabel 'MISE'\n\
             plot '{data}' using 1:(stringcolumn(2) eq 'empirical' ? $3 : 1/0) with linespoints title 'empirical', \\\n     \
             '{data}' using 1:(stringcolumn(2) eq 'mele' ? $3 : 1/0) with linespoints title 'mele'\n"
        )
    })
}
