//! Command-line front end: fit estimators on fuzzy data files, fuzzify crisp
//! samples, and run the Monte Carlo study.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fuzzykuma::formats::{
    fuzzy_rows_to_csv, fuzzy_rows_to_json, read_crisp_csv, read_fuzzy_file, study_report_to_csv,
    study_tables,
};
use fuzzykuma::output::{
    to_json_string, FitBayesJson, FitMleJson, IntervalJson, McmcJson, PriorJson, TkJson,
};
use fuzzykuma::runner::run_study_parallel;
use fuzzykuma::CliError;
use fuzzykuma_core::bayes::{
    hpd_interval, mh_sample, posterior_mean, tierney_kadane, GammaPrior, McmcOptions, PriorPair,
    TkTarget,
};
use fuzzykuma_core::mle::{asymptotic_ci, fit_em, fit_newton_raphson, FitOptions};
use fuzzykuma_core::sim::{Method, StudyConfig};
use fuzzykuma_core::{default_fis, KumaParams, LikelihoodForm};

#[derive(Parser)]
#[command(name = "fuzzykuma", version, about = "Kumaraswamy parameter estimation from fuzzy data")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Maximum-likelihood fit (Newton-Raphson or EM) with asymptotic confidence intervals
    FitMle(FitMleArgs),
    /// Bayesian fit: Tierney-Kadane and/or Metropolis-Hastings with HPD intervals
    FitBayes(FitBayesArgs),
    /// Monte Carlo study: generate, fuzzify, fit by every method, tabulate
    Simulate(SimulateArgs),
    /// Encode a crisp sample as fuzzy observations via the information system
    Fuzzify(FuzzifyArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Nr,
    Em,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormArg {
    /// log of the fuzzy-event probability per observation
    Exact,
    /// per-statistic weighted integrals, logged separately
    Paper,
}

impl From<FormArg> for LikelihoodForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Exact => LikelihoodForm::Exact,
            FormArg::Paper => LikelihoodForm::Factored,
        }
    }
}

impl FormArg {
    fn label(self) -> &'static str {
        match self {
            FormArg::Exact => "exact",
            FormArg::Paper => "paper",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EstimatorArg {
    Tk,
    Mcmc,
    Both,
}

fn parse_prior(s: &str) -> Result<GammaPrior, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected 'shape,rate', got '{s}'"));
    }
    let shape: f64 = parts[0].trim().parse().map_err(|_| format!("bad shape '{}'", parts[0]))?;
    let rate: f64 = parts[1].trim().parse().map_err(|_| format!("bad rate '{}'", parts[1]))?;
    GammaPrior::new(shape, rate).map_err(|e| e.to_string())
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodChoice {
    Nr,
    Em,
    Mcmc,
    Tk,
}

impl From<MethodChoice> for Method {
    fn from(m: MethodChoice) -> Self {
        match m {
            MethodChoice::Nr => Method::NewtonRaphson,
            MethodChoice::Em => Method::Em,
            MethodChoice::Mcmc => Method::Mcmc,
            MethodChoice::Tk => Method::TierneyKadane,
        }
    }
}

#[derive(Args)]
struct FitMleArgs {
    /// Fuzzy data file (CSV with header xi,omega,delta,theta, or JSON)
    #[arg(long)]
    input: PathBuf,
    /// Write the JSON result here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "nr")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "exact")]
    form: FormArg,
    /// Confidence level for the asymptotic intervals
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Args)]
struct FitBayesArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    estimator: EstimatorArg,
    #[arg(long, value_enum, default_value = "exact")]
    form: FormArg,
    /// Credible level for the HPD intervals
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    chains: usize,
    /// Discarded draws at the start of every chain
    #[arg(long, default_value_t = 1000)]
    burn_in: usize,
    /// Total draws per chain including burn-in
    #[arg(long, default_value_t = 3000)]
    draws: usize,
    /// Initial random-walk spread on the log-parameters
    #[arg(long, default_value_t = 0.1)]
    step_scale: f64,
    /// Gamma prior for the first shape, as 'shape,rate'
    #[arg(long, value_parser = parse_prior, default_value = "2.1,1.7")]
    prior_a: GammaPrior,
    /// Gamma prior for the second shape, as 'shape,rate'
    #[arg(long, value_parser = parse_prior, default_value = "1.3,0.89")]
    prior_b: GammaPrior,
}

#[derive(Args)]
struct SimulateArgs {
    /// Write the CSV report here (tables then go to standard output)
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "50,200")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 2000)]
    replications: u32,
    /// Comma-separated subset of nr,em,mcmc,tk
    #[arg(long, value_enum, value_delimiter = ',', default_value = "nr,em,mcmc,tk")]
    methods: Vec<MethodChoice>,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "exact")]
    form: FormArg,
    /// Worker threads; never changes the report contents
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 2.0)]
    true_a: f64,
    #[arg(long, default_value_t = 3.0)]
    true_b: f64,
    #[arg(long, default_value_t = 4)]
    chains: usize,
    #[arg(long, default_value_t = 1000)]
    burn_in: usize,
    #[arg(long, default_value_t = 1500)]
    draws: usize,
    #[arg(long, default_value_t = 0.1)]
    step_scale: f64,
    #[arg(long, value_parser = parse_prior, default_value = "2.1,1.7")]
    prior_a: GammaPrior,
    #[arg(long, value_parser = parse_prior, default_value = "1.3,0.89")]
    prior_b: GammaPrior,
}

#[derive(Args)]
struct FuzzifyArgs {
    /// Single-column CSV of crisp values in (0, 1)
    #[arg(long)]
    input: PathBuf,
    /// Output file; .json selects the JSON format, anything else CSV
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_fit_mle(args: &FitMleArgs) -> Result<i32, CliError> {
    if !(args.level > 0.0 && args.level < 1.0) {
        return Err(CliError::Input("level must lie in (0, 1)".into()));
    }
    let sample = read_fuzzy_file(&args.input)?;
    let opts = FitOptions { form: args.form.into(), ..FitOptions::default() };
    let fit = match args.method {
        MethodArg::Nr => fit_newton_raphson(&sample, &opts),
        MethodArg::Em => fit_em(&sample, &opts),
    }?;
    let cis = if fit.converged { asymptotic_ci(&fit, args.level).ok() } else { None };
    let record = FitMleJson {
        a_hat: fit.params.a(),
        b_hat: fit.params.b(),
        ci_a: cis.map(|(a, _)| a.into()),
        ci_b: cis.map(|(_, b)| b.into()),
        converged: fit.converged,
        iterations: fit.iterations,
        loglik: fit.loglik,
        method: match args.method {
            MethodArg::Nr => "nr".into(),
            MethodArg::Em => "em".into(),
        },
        form: args.form.label().into(),
        n: sample.len(),
        trace: (!fit.converged)
            .then(|| fit.trace.iter().map(|p| [p.a(), p.b()]).collect()),
    };
    write_or_print(&args.output, &to_json_string(&record))?;
    Ok(if fit.converged { 0 } else { 2 })
}

fn cmd_fit_bayes(args: &FitBayesArgs) -> Result<i32, CliError> {
    if !(args.level > 0.0 && args.level < 1.0) {
        return Err(CliError::Input("level must lie in (0, 1)".into()));
    }
    let sample = read_fuzzy_file(&args.input)?;
    let form: LikelihoodForm = args.form.into();
    let priors = PriorPair { prior_a: args.prior_a, prior_b: args.prior_b };

    let tk = if args.estimator != EstimatorArg::Mcmc {
        let a = tierney_kadane(&sample, &priors, TkTarget::A, form)?;
        let b = tierney_kadane(&sample, &priors, TkTarget::B, form)?;
        Some(TkJson { a_mean: a, b_mean: b })
    } else {
        None
    };

    let mcmc = if args.estimator != EstimatorArg::Tk {
        let opts = McmcOptions {
            chains: args.chains,
            draws_per_chain: args.draws,
            burn_in: args.burn_in,
            step_scale: args.step_scale,
            seed: args.seed,
        };
        let draws = mh_sample(&sample, &priors, &opts, form)?;
        let mean = posterior_mean(&draws)?;
        let hpd_a: IntervalJson = hpd_interval(&draws.pooled_a(), args.level)?.into();
        let hpd_b: IntervalJson = hpd_interval(&draws.pooled_b(), args.level)?.into();
        let (dispersion_a, dispersion_b) = draws.dispersion();
        Some(McmcJson {
            a_mean: mean.a(),
            b_mean: mean.b(),
            hpd_a,
            hpd_b,
            acceptance_rate: draws.acceptance_rate,
            low_acceptance: draws.low_acceptance,
            dispersion_a,
            dispersion_b,
        })
    } else {
        None
    };

    let record = FitBayesJson {
        estimator: match args.estimator {
            EstimatorArg::Tk => "tk".into(),
            EstimatorArg::Mcmc => "mcmc".into(),
            EstimatorArg::Both => "both".into(),
        },
        n: sample.len(),
        form: args.form.label().into(),
        level: args.level,
        seed: args.seed,
        chains: args.chains,
        burn_in: args.burn_in,
        draws_per_chain: args.draws,
        prior_a: PriorJson { shape: args.prior_a.shape(), rate: args.prior_a.rate() },
        prior_b: PriorJson { shape: args.prior_b.shape(), rate: args.prior_b.rate() },
        tk,
        mcmc,
    };
    write_or_print(&args.output, &to_json_string(&record))?;
    Ok(0)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<i32, CliError> {
    let cfg = StudyConfig {
        true_params: KumaParams::new(args.true_a, args.true_b)
            .map_err(|e| CliError::Input(e.to_string()))?,
        sample_sizes: args.sizes.clone(),
        replications: args.replications,
        methods: args.methods.iter().map(|&m| m.into()).collect(),
        level: args.level,
        seed: args.seed,
        fis: default_fis(),
        priors: PriorPair { prior_a: args.prior_a, prior_b: args.prior_b },
        form: args.form.into(),
        init: KumaParams::new_unchecked(0.5, 6.0),
        mcmc_chains: args.chains,
        mcmc_draws_per_chain: args.draws,
        mcmc_burn_in: args.burn_in,
        mcmc_step_scale: args.step_scale,
    };
    let report = run_study_parallel(&cfg, args.workers.max(1))?;
    let csv = study_report_to_csv(&report);
    let tables = study_tables(&report);
    match &args.output {
        Some(p) => {
            fs::write(p, &csv).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            print!("{tables}");
        }
        None => {
            print!("{csv}");
            eprint!("{tables}");
        }
    }
    Ok(0)
}

fn cmd_fuzzify(args: &FuzzifyArgs) -> Result<i32, CliError> {
    let crisp = read_crisp_csv(&args.input)?;
    let fis = default_fis();
    let picks = fis
        .assign_events(&crisp, args.seed)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let rows: Vec<_> = picks.into_iter().map(|k| fis.events()[k]).collect();
    let json = args
        .output
        .as_ref()
        .is_some_and(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")));
    let content = if json { fuzzy_rows_to_json(&rows) } else { fuzzy_rows_to_csv(&rows) };
    write_or_print(&args.output, &content)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::FitMle(args) => cmd_fit_mle(args),
        Cmd::FitBayes(args) => cmd_fit_bayes(args),
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Fuzzify(args) => cmd_fuzzify(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
