//! JSON result records written by the `fit-mle` and `fit-bayes` commands.
//! The field layout is published as JSON Schema files under `schemas/`.

use serde::Serialize;

use fuzzykuma_core::mle::IntervalEstimate;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntervalJson {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl From<IntervalEstimate> for IntervalJson {
    fn from(iv: IntervalEstimate) -> Self {
        IntervalJson { lower: iv.lower, upper: iv.upper, level: iv.level }
    }
}

#[derive(Debug, Serialize)]
pub struct FitMleJson {
    pub a_hat: f64,
    pub b_hat: f64,
    pub ci_a: Option<IntervalJson>,
    pub ci_b: Option<IntervalJson>,
    pub converged: bool,
    pub iterations: u32,
    pub loglik: f64,
    pub method: String,
    pub form: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize)]
pub struct PriorJson {
    pub shape: f64,
    pub rate: f64,
}

#[derive(Debug, Serialize)]
pub struct TkJson {
    pub a_mean: f64,
    pub b_mean: f64,
}

#[derive(Debug, Serialize)]
pub struct McmcJson {
    pub a_mean: f64,
    pub b_mean: f64,
    pub hpd_a: IntervalJson,
    pub hpd_b: IntervalJson,
    pub acceptance_rate: f64,
    pub low_acceptance: bool,
    /// Between- to within-chain variance ratios, one per parameter.
    pub dispersion_a: f64,
    pub dispersion_b: f64,
}

#[derive(Debug, Serialize)]
pub struct FitBayesJson {
    pub estimator: String,
    pub n: usize,
    pub form: String,
    pub level: f64,
    pub seed: u64,
    pub chains: usize,
    pub burn_in: usize,
    pub draws_per_chain: usize,
    pub prior_a: PriorJson,
    pub prior_b: PriorJson,
    pub tk: Option<TkJson>,
    pub mcmc: Option<McmcJson>,
}

/// Pretty JSON plus trailing newline; stable field order comes from the
/// struct definitions, so identical inputs yield identical bytes.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output records always serialize");
    s.push('\n');
    s
}
