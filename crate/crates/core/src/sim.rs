//! Monte Carlo study harness: generate crisp samples, fuzzify them, fit by
//! every requested method, and tabulate bias, MSE, coverage probability, and
//! expected interval width per method and sample size.
//!
//! Replications are pure functions of `(seed, size, replication index)`, so
//! they can be evaluated in any order — or concurrently by a caller — and
//! [`aggregate_report`] reduces them in index order for a bit-identical
//! report regardless of scheduling.

use alloc::vec::Vec;

use crate::bayes::{
    hpd_interval, mh_sample, posterior_mean, tierney_kadane, McmcOptions, PriorPair, TkTarget,
};
use crate::error::{Error, Result};
use crate::fuzzy::{default_fis, fuzzify, FuzzyInformationSystem};
use crate::kuma::{sample, KumaParams};
use crate::likelihood::LikelihoodForm;
use crate::mle::{asymptotic_ci, fit_em, fit_newton_raphson, FitOptions, IntervalEstimate};
use crate::rng::derive_seed;

/// Estimation methods the study can compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    NewtonRaphson,
    Em,
    Mcmc,
    TierneyKadane,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::NewtonRaphson, Method::Em, Method::Mcmc, Method::TierneyKadane];

    /// Short label used in reports and CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            Method::NewtonRaphson => "nr",
            Method::Em => "em",
            Method::Mcmc => "mcmc",
            Method::TierneyKadane => "tk",
        }
    }

    /// Whether the method produces an interval estimate.
    pub fn has_intervals(&self) -> bool {
        !matches!(self, Method::TierneyKadane)
    }
}

/// Full specification of one study run.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub true_params: KumaParams,
    pub sample_sizes: Vec<usize>,
    pub replications: u32,
    pub methods: Vec<Method>,
    /// Confidence/credible level for all intervals.
    pub level: f64,
    pub seed: u64,
    pub fis: FuzzyInformationSystem,
    pub priors: PriorPair,
    pub form: LikelihoodForm,
    /// Fitter initialization, deliberately far from the defaults truth.
    pub init: KumaParams,
    pub mcmc_chains: usize,
    pub mcmc_draws_per_chain: usize,
    pub mcmc_burn_in: usize,
    pub mcmc_step_scale: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            true_params: KumaParams::new_unchecked(2.0, 3.0),
            sample_sizes: alloc::vec![50, 75, 100, 150, 200],
            replications: 20_000,
            methods: Method::ALL.to_vec(),
            level: 0.95,
            seed: 0,
            fis: default_fis(),
            priors: PriorPair::default(),
            form: LikelihoodForm::Exact,
            init: KumaParams::new_unchecked(0.5, 6.0),
            mcmc_chains: 4,
            mcmc_draws_per_chain: 1500,
            mcmc_burn_in: 1000,
            mcmc_step_scale: 0.1,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::InvalidOptions("replications must be >= 1"));
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.iter().any(|&n| n == 0) {
            return Err(Error::InvalidOptions("sample sizes must be positive"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidOptions("level must lie in (0, 1)"));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidOptions("at least one method required"));
        }
        if self.mcmc_draws_per_chain <= self.mcmc_burn_in {
            return Err(Error::InvalidOptions("mcmc draws per chain must exceed burn-in"));
        }
        Ok(())
    }
}

/// Point estimate plus optional intervals from one method on one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutcome {
    pub est_a: f64,
    pub est_b: f64,
    pub interval_a: Option<IntervalEstimate>,
    pub interval_b: Option<IntervalEstimate>,
}

/// All method outcomes for one `(size, replication)` pair; `None` marks a
/// failed fit, counted but excluded from the averages.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationRecord {
    pub size: usize,
    pub rep: u32,
    pub outcomes: Vec<Option<MethodOutcome>>,
}

/// Aggregated statistics for one `(method, n)` cell of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct CellStats {
    pub method: Method,
    pub n: usize,
    pub bias_a: f64,
    pub bias_b: f64,
    pub mse_a: f64,
    pub mse_b: f64,
    pub coverage_a: Option<f64>,
    pub coverage_b: Option<f64>,
    pub mean_width_a: Option<f64>,
    pub mean_width_b: Option<f64>,
    pub failure_count: u32,
}

/// One row per `(method, n)`, sizes outermost, methods in config order.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub cells: Vec<CellStats>,
}

/// Coverage fraction and mean width of a batch of intervals against a known
/// truth. Order-independent by construction.
pub fn coverage_and_width(intervals: &[IntervalEstimate], truth: f64) -> (f64, f64) {
    let n = intervals.len() as f64;
    let covered = intervals.iter().filter(|iv| iv.contains(truth)).count() as f64;
    let width: f64 = intervals.iter().map(|iv| iv.width()).sum();
    (covered / n, width / n)
}

/// Runs one replication: sample, fuzzify, fit with every configured method.
///
/// Deterministic in `(cfg.seed, size, rep)` alone; method order and worker
/// scheduling cannot influence any random stream.
pub fn run_replication(cfg: &StudyConfig, size: usize, rep: u32) -> ReplicationRecord {
    let crisp_seed = derive_seed(&[cfg.seed, size as u64, rep as u64, 0]);
    let fuzz_seed = derive_seed(&[cfg.seed, size as u64, rep as u64, 1]);
    let mcmc_seed = derive_seed(&[cfg.seed, size as u64, rep as u64, 2]);

    let crisp = sample(size, cfg.true_params, crisp_seed);
    let data = fuzzify(&crisp, &cfg.fis, fuzz_seed).expect("generated values lie in (0,1)");

    let fit_opts = FitOptions { init: cfg.init, form: cfg.form, ..FitOptions::default() };
    let outcomes = cfg
        .methods
        .iter()
        .map(|method| match method {
            Method::NewtonRaphson => fit_newton_raphson(&data, &fit_opts)
                .ok()
                .filter(|r| r.converged)
                .and_then(|r| {
                    let (ia, ib) = asymptotic_ci(&r, cfg.level).ok()?;
                    Some(MethodOutcome {
                        est_a: r.params.a(),
                        est_b: r.params.b(),
                        interval_a: Some(ia),
                        interval_b: Some(ib),
                    })
                }),
            Method::Em => fit_em(&data, &fit_opts).ok().filter(|r| r.converged).and_then(|r| {
                let (ia, ib) = asymptotic_ci(&r, cfg.level).ok()?;
                Some(MethodOutcome {
                    est_a: r.params.a(),
                    est_b: r.params.b(),
                    interval_a: Some(ia),
                    interval_b: Some(ib),
                })
            }),
            Method::Mcmc => {
                let opts = McmcOptions {
                    chains: cfg.mcmc_chains,
                    draws_per_chain: cfg.mcmc_draws_per_chain,
                    burn_in: cfg.mcmc_burn_in,
                    step_scale: cfg.mcmc_step_scale,
                    seed: mcmc_seed,
                };
                mh_sample(&data, &cfg.priors, &opts, cfg.form).ok().and_then(|draws| {
                    let mean = posterior_mean(&draws).ok()?;
                    let ia = hpd_interval(&draws.pooled_a(), cfg.level).ok()?;
                    let ib = hpd_interval(&draws.pooled_b(), cfg.level).ok()?;
                    Some(MethodOutcome {
                        est_a: mean.a(),
                        est_b: mean.b(),
                        interval_a: Some(ia),
                        interval_b: Some(ib),
                    })
                })
            }
            Method::TierneyKadane => {
                let a = tierney_kadane(&data, &cfg.priors, TkTarget::A, cfg.form).ok();
                let b = tierney_kadane(&data, &cfg.priors, TkTarget::B, cfg.form).ok();
                match (a, b) {
                    (Some(est_a), Some(est_b)) => Some(MethodOutcome {
                        est_a,
                        est_b,
                        interval_a: None,
                        interval_b: None,
                    }),
                    _ => None,
                }
            }
        })
        .collect();

    ReplicationRecord { size, rep, outcomes }
}

/// Reduces replication records (in index order) into the study report.
///
/// `records` must hold, for each size in `cfg.sample_sizes` order, the
/// replications `0..cfg.replications` in order.
pub fn aggregate_report(cfg: &StudyConfig, records: &[ReplicationRecord]) -> StudyReport {
    let mut cells = Vec::new();
    let (ta, tb) = (cfg.true_params.a(), cfg.true_params.b());
    for &size in &cfg.sample_sizes {
        for (mi, &method) in cfg.methods.iter().enumerate() {
            let mut sum_err_a = 0.0;
            let mut sum_err_b = 0.0;
            let mut sum_sq_a = 0.0;
            let mut sum_sq_b = 0.0;
            let mut ivs_a: Vec<IntervalEstimate> = Vec::new();
            let mut ivs_b: Vec<IntervalEstimate> = Vec::new();
            let mut successes = 0_u32;
            let mut total = 0_u32;
            for rec in records.iter().filter(|r| r.size == size) {
                total += 1;
                if let Some(out) = &rec.outcomes[mi] {
                    successes += 1;
                    let (ea, eb) = (out.est_a - ta, out.est_b - tb);
                    sum_err_a += ea;
                    sum_err_b += eb;
                    sum_sq_a += ea * ea;
                    sum_sq_b += eb * eb;
                    if let Some(iv) = out.interval_a {
                        ivs_a.push(iv);
                    }
                    if let Some(iv) = out.interval_b {
                        ivs_b.push(iv);
                    }
                }
            }
            let k = successes as f64;
            let (coverage_a, mean_width_a) = if ivs_a.is_empty() {
                (None, None)
            } else {
                let (c, w) = coverage_and_width(&ivs_a, ta);
                (Some(c), Some(w))
            };
            let (coverage_b, mean_width_b) = if ivs_b.is_empty() {
                (None, None)
            } else {
                let (c, w) = coverage_and_width(&ivs_b, tb);
                (Some(c), Some(w))
            };
            cells.push(CellStats {
                method,
                n: size,
                bias_a: sum_err_a / k,
                bias_b: sum_err_b / k,
                mse_a: sum_sq_a / k,
                mse_b: sum_sq_b / k,
                coverage_a,
                coverage_b,
                mean_width_a,
                mean_width_b,
                failure_count: total - successes,
            });
        }
    }
    StudyReport { cells }
}

/// Sequential study runner; see [`run_replication`] for the per-task pieces.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.sample_sizes.len() * cfg.replications as usize);
    for &size in &cfg.sample_sizes {
        for rep in 0..cfg.replications {
            records.push(run_replication(cfg, size, rep));
        }
    }
    Ok(aggregate_report(cfg, &records))
}
