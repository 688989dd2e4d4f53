//! Fuzzy-event probabilities, conditional expectations given a fuzzy event,
//! the observed-data log-likelihood, and its analytic score and Hessian.
//!
//! Two likelihood forms are available. [`LikelihoodForm::Exact`] is the
//! fuzzy-event likelihood: each observation contributes
//! `log ∫ f(x; a, b) μ_i(x) dx`. [`LikelihoodForm::Factored`] instead
//! integrates each sufficient statistic against the membership before taking
//! logs, giving `n(log a + log b) + (a-1) Σ log ∫ x μ_i dx +
//! (b-1) Σ log ∫ (1-x^a) μ_i dx`. Both coincide with the complete-data
//! log-likelihood in the crisp-point limit.
//!
//! Crisp points get the zero-width-limit convention throughout: weighted
//! integrals degenerate to the integrand evaluated at the point, so a sample
//! of crisp points reproduces classical complete-data inference exactly.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyObservation, FuzzySample, MembershipFunction};
use crate::kuma::{self, KumaParams};
use crate::quad::{integrate_weighted, QuadratureSpec};

/// Probabilities below this are treated as degenerate rather than `-inf`.
const MIN_PROB: f64 = 1e-300;

/// Which observed-data log-likelihood to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LikelihoodForm {
    /// Per-observation log of the fuzzy-event probability `∫ f μ dx`.
    #[default]
    Exact,
    /// Per-statistic weighted integrals, logged separately.
    Factored,
}

/// Gradient of the log-likelihood with respect to `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreVector {
    pub d_a: f64,
    pub d_b: f64,
}

impl ScoreVector {
    pub fn norm(&self) -> f64 {
        (self.d_a * self.d_a + self.d_b * self.d_b).sqrt()
    }
}

/// Second partial derivatives of the log-likelihood; symmetric by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianMatrix {
    pub d_aa: f64,
    pub d_ab: f64,
    pub d_bb: f64,
}

impl HessianMatrix {
    pub fn det(&self) -> f64 {
        self.d_aa * self.d_bb - self.d_ab * self.d_ab
    }

    /// Negation, e.g. observed information from a Hessian at the maximum.
    pub fn negated(&self) -> HessianMatrix {
        HessianMatrix { d_aa: -self.d_aa, d_ab: -self.d_ab, d_bb: -self.d_bb }
    }
}

/// Per-point derivatives of `log f`, shared by every derivative integrand.
struct LogPdfParts {
    g_a: f64,
    g_b: f64,
    /// d g_a / da
    g_aa: f64,
    /// d g_a / db = d g_b / da
    g_ab: f64,
}

fn log_pdf_parts(x: f64, p: KumaParams) -> LogPdfParts {
    let (a, b) = (p.a(), p.b());
    let lx = x.ln();
    let em = -(a * lx).exp_m1(); // 1 - x^a, full precision near 1
    let t = 1.0 - em; // x^a
    let ratio = t * lx / em; // x^a ln x / (1 - x^a)
    let ratio2 = t * lx * lx / (em * em);
    LogPdfParts {
        g_a: 1.0 / a + lx - (b - 1.0) * ratio,
        g_b: 1.0 / b + em.ln(),
        g_aa: -1.0 / (a * a) - (b - 1.0) * ratio2,
        g_ab: -ratio,
    }
}

#[derive(Debug, Clone)]
enum GroupKind {
    Point(f64),
    Fuzzy(MembershipFunction),
}

/// One distinct membership function and how often it occurs in the sample.
#[derive(Debug, Clone)]
struct Group {
    kind: GroupKind,
    count: f64,
    first_index: usize,
}

/// Likelihood evaluator for one sample.
///
/// Construction groups observations by identical membership functions, so a
/// sample fuzzified from a k-event information system costs k integrals per
/// evaluation rather than n.
pub struct SampleLikelihood {
    groups: Vec<Group>,
    n: f64,
    form: LikelihoodForm,
    spec: QuadratureSpec,
    /// `∫ x μ_g dx` per group; populated only for the factored form.
    x_mass: Vec<f64>,
}

impl SampleLikelihood {
    pub fn new(sample: &FuzzySample, form: LikelihoodForm) -> Result<Self> {
        Self::with_spec(sample, form, QuadratureSpec::default())
    }

    pub fn with_spec(sample: &FuzzySample, form: LikelihoodForm, spec: QuadratureSpec) -> Result<Self> {
        let mut groups: Vec<Group> = Vec::new();
        'outer: for (i, obs) in sample.observations().iter().enumerate() {
            let m = obs.membership();
            for g in groups.iter_mut() {
                if let GroupKind::Fuzzy(gm) = &g.kind {
                    if gm == m && !m.is_point() {
                        g.count += 1.0;
                        continue 'outer;
                    }
                }
                if let GroupKind::Point(x) = g.kind {
                    if m.is_point() && m.xi() == x {
                        g.count += 1.0;
                        continue 'outer;
                    }
                }
            }
            let kind = if m.is_point() { GroupKind::Point(m.xi()) } else { GroupKind::Fuzzy(*m) };
            groups.push(Group { kind, count: 1.0, first_index: i });
        }
        let mut lik = SampleLikelihood {
            groups,
            n: sample.len() as f64,
            form,
            spec,
            x_mass: Vec::new(),
        };
        if form == LikelihoodForm::Factored {
            let mut mass = Vec::with_capacity(lik.groups.len());
            for g in &lik.groups {
                let v = match &g.kind {
                    GroupKind::Point(x) => *x,
                    GroupKind::Fuzzy(m) => integrate_weighted(|x| x, m, &lik.spec)?,
                };
                mass.push(v);
            }
            lik.x_mass = mass;
        }
        Ok(lik)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn form(&self) -> LikelihoodForm {
        self.form
    }

    /// Fuzzy-event probability of one group (density value for crisp points).
    fn event_prob(&self, g: &Group, p: KumaParams) -> Result<f64> {
        let v = match &g.kind {
            GroupKind::Point(x) => kuma::ln_pdf(*x, p).exp(),
            GroupKind::Fuzzy(m) => integrate_weighted(|x| kuma::ln_pdf(x, p).exp(), m, &self.spec)?,
        };
        if v < MIN_PROB {
            Err(Error::DegenerateObservation { index: g.first_index })
        } else {
            Ok(v)
        }
    }

    /// `∫ w(x) f(x; p) μ_g(x) dx`, degenerating to `w(x0) f(x0)` on points.
    fn weighted_density<F: Fn(f64) -> f64>(&self, g: &Group, p: KumaParams, w: F) -> Result<f64> {
        match &g.kind {
            GroupKind::Point(x) => Ok(w(*x) * kuma::ln_pdf(*x, p).exp()),
            GroupKind::Fuzzy(m) => {
                integrate_weighted(|x| w(x) * kuma::ln_pdf(x, p).exp(), m, &self.spec)
            }
        }
    }

    /// `∫ w(x) μ_g(x) dx`, degenerating to `w(x0)` on points.
    fn weighted_plain<F: Fn(f64) -> f64>(&self, g: &Group, w: F) -> Result<f64> {
        match &g.kind {
            GroupKind::Point(x) => Ok(w(*x)),
            GroupKind::Fuzzy(m) => integrate_weighted(w, m, &self.spec),
        }
    }

    /// Observed-data log-likelihood at `p`.
    pub fn log_lik(&self, p: KumaParams) -> Result<f64> {
        match self.form {
            LikelihoodForm::Exact => {
                let mut acc = 0.0;
                for g in &self.groups {
                    acc += g.count * self.event_prob(g, p)?.ln();
                }
                Ok(acc)
            }
            LikelihoodForm::Factored => {
                let (a, b) = (p.a(), p.b());
                let mut acc = self.n * (a.ln() + b.ln());
                for (g, &xm) in self.groups.iter().zip(&self.x_mass) {
                    if xm < MIN_PROB {
                        return Err(Error::DegenerateObservation { index: g.first_index });
                    }
                    let d = self.weighted_plain(g, |x| kuma::one_minus_pow(x, a))?;
                    if d < MIN_PROB {
                        return Err(Error::DegenerateObservation { index: g.first_index });
                    }
                    acc += g.count * ((a - 1.0) * xm.ln() + (b - 1.0) * d.ln());
                }
                Ok(acc)
            }
        }
    }

    /// Analytic gradient of [`Self::log_lik`] at `p`.
    pub fn score(&self, p: KumaParams) -> Result<ScoreVector> {
        match self.form {
            LikelihoodForm::Exact => {
                let mut d_a = 0.0;
                let mut d_b = 0.0;
                for g in &self.groups {
                    let prob = self.event_prob(g, p)?;
                    let pa = self.weighted_density(g, p, |x| log_pdf_parts(x, p).g_a)?;
                    let pb = self.weighted_density(g, p, |x| log_pdf_parts(x, p).g_b)?;
                    d_a += g.count * pa / prob;
                    d_b += g.count * pb / prob;
                }
                Ok(ScoreVector { d_a, d_b })
            }
            LikelihoodForm::Factored => {
                let (a, b) = (p.a(), p.b());
                let mut d_a = self.n / a;
                let mut d_b = self.n / b;
                for (g, &xm) in self.groups.iter().zip(&self.x_mass) {
                    let d = self.weighted_plain(g, |x| kuma::one_minus_pow(x, a))?;
                    if d < MIN_PROB || xm < MIN_PROB {
                        return Err(Error::DegenerateObservation { index: g.first_index });
                    }
                    let num = self.weighted_plain(g, |x| (a * x.ln()).exp() * x.ln())?;
                    d_a += g.count * (xm.ln() - (b - 1.0) * num / d);
                    d_b += g.count * d.ln();
                }
                Ok(ScoreVector { d_a, d_b })
            }
        }
    }

    /// Score and Hessian in one pass, sharing the per-group integrals.
    pub fn score_and_hessian(&self, p: KumaParams) -> Result<(ScoreVector, HessianMatrix)> {
        match self.form {
            LikelihoodForm::Exact => {
                let mut d_a = 0.0;
                let mut d_b = 0.0;
                let mut d_aa = 0.0;
                let mut d_ab = 0.0;
                let mut d_bb = 0.0;
                for g in &self.groups {
                    let prob = self.event_prob(g, p)?;
                    let pa = self.weighted_density(g, p, |x| log_pdf_parts(x, p).g_a)?;
                    let pb = self.weighted_density(g, p, |x| log_pdf_parts(x, p).g_b)?;
                    let paa = self.weighted_density(g, p, |x| {
                        let q = log_pdf_parts(x, p);
                        q.g_a * q.g_a + q.g_aa
                    })?;
                    let pab = self.weighted_density(g, p, |x| {
                        let q = log_pdf_parts(x, p);
                        q.g_a * q.g_b + q.g_ab
                    })?;
                    let pbb = self.weighted_density(g, p, |x| {
                        let q = log_pdf_parts(x, p);
                        q.g_b * q.g_b - 1.0 / (p.b() * p.b())
                    })?;
                    let (ra, rb) = (pa / prob, pb / prob);
                    d_a += g.count * ra;
                    d_b += g.count * rb;
                    d_aa += g.count * (paa / prob - ra * ra);
                    d_ab += g.count * (pab / prob - ra * rb);
                    d_bb += g.count * (pbb / prob - rb * rb);
                }
                Ok((ScoreVector { d_a, d_b }, HessianMatrix { d_aa, d_ab, d_bb }))
            }
            LikelihoodForm::Factored => Ok((self.score(p)?, self.hessian(p)?)),
        }
    }

    /// Analytic Hessian of [`Self::log_lik`] at `p`.
    pub fn hessian(&self, p: KumaParams) -> Result<HessianMatrix> {
        match self.form {
            LikelihoodForm::Exact => {
                let mut d_aa = 0.0;
                let mut d_ab = 0.0;
                let mut d_bb = 0.0;
                for g in &self.groups {
                    let prob = self.event_prob(g, p)?;
                    let pa = self.weighted_density(g, p, |x| log_pdf_parts(x, p).g_a)?;
                    let pb = self.weighted_density(g, p, |x| log_pdf_parts(x, p).g_b)?;
                    let paa = self.weighted_density(g, p, |x| {
                        let q = log_pdf_parts(x, p);
                        q.g_a * q.g_a + q.g_aa
                    })?;
                    let pab = self.weighted_density(g, p, |x| {
                        let q = log_pdf_parts(x, p);
                        q.g_a * q.g_b + q.g_ab
                    })?;
                    let pbb = self.weighted_density(g, p, |x| {
                        let q = log_pdf_parts(x, p);
                        q.g_b * q.g_b - 1.0 / (p.b() * p.b())
                    })?;
                    let (ra, rb) = (pa / prob, pb / prob);
                    d_aa += g.count * (paa / prob - ra * ra);
                    d_ab += g.count * (pab / prob - ra * rb);
                    d_bb += g.count * (pbb / prob - rb * rb);
                }
                Ok(HessianMatrix { d_aa, d_ab, d_bb })
            }
            LikelihoodForm::Factored => {
                let (a, b) = (p.a(), p.b());
                let mut d_aa = -self.n / (a * a);
                let mut d_ab = 0.0;
                let d_bb = -self.n / (b * b);
                for g in &self.groups {
                    let d = self.weighted_plain(g, |x| kuma::one_minus_pow(x, a))?;
                    if d < MIN_PROB {
                        return Err(Error::DegenerateObservation { index: g.first_index });
                    }
                    let n1 = self.weighted_plain(g, |x| (a * x.ln()).exp() * x.ln())?;
                    let n2 = self.weighted_plain(g, |x| {
                        let lx = x.ln();
                        (a * lx).exp() * lx * lx
                    })?;
                    d_aa -= g.count * (b - 1.0) * (n2 * d + n1 * n1) / (d * d);
                    d_ab -= g.count * n1 / d;
                }
                Ok(HessianMatrix { d_aa, d_ab, d_bb })
            }
        }
    }

    /// E-step ingredients for one parameter point: per-group conditional
    /// expectations of `log x` under the fuzzy-event conditional density,
    /// together with the group weights. Crisp points short-circuit to their
    /// plain values.
    pub(crate) fn conditional_log_x(&self, p: KumaParams) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            let v = match &g.kind {
                GroupKind::Point(x) => x.ln(),
                GroupKind::Fuzzy(_) => {
                    let prob = self.event_prob(g, p)?;
                    self.weighted_density(g, p, |x| x.ln())? / prob
                }
            };
            out.push((g.count, v));
        }
        Ok(out)
    }

    /// Per-group conditional expectations of `log(1 - x^shape)` and its
    /// derivative in `shape`, conditioning on the density at `p`.
    pub(crate) fn conditional_log_one_minus_pow(
        &self,
        p: KumaParams,
        shape: f64,
        with_derivative: bool,
    ) -> Result<Vec<(f64, f64, f64)>> {
        let mut out = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            let (m, dm) = match &g.kind {
                GroupKind::Point(x) => {
                    let lx = x.ln();
                    let em = -(shape * lx).exp_m1();
                    let t = 1.0 - em;
                    (em.ln(), -t * lx / em)
                }
                GroupKind::Fuzzy(_) => {
                    let prob = self.event_prob(g, p)?;
                    let m = self.weighted_density(g, p, |x| kuma::ln_one_minus_pow(x, shape))? / prob;
                    let dm = if with_derivative {
                        self.weighted_density(g, p, |x| {
                            let lx = x.ln();
                            let em = -(shape * lx).exp_m1();
                            -(1.0 - em) * lx / em
                        })? / prob
                    } else {
                        0.0
                    };
                    (m, dm)
                }
            };
            out.push((g.count, m, dm));
        }
        Ok(out)
    }
}

/// Probability of the fuzzy event under the model: `∫ f(x; p) μ(x) dx`.
///
/// A crisp point degenerates to the density value at the point. Probabilities
/// below the underflow guard raise [`Error::ZeroProbability`].
pub fn fuzzy_event_prob(obs: &FuzzyObservation, p: KumaParams) -> Result<f64> {
    let m = obs.membership();
    let v = if m.is_point() {
        kuma::ln_pdf(m.xi(), p).exp()
    } else {
        integrate_weighted(|x| kuma::ln_pdf(x, p).exp(), m, &QuadratureSpec::default())?
    };
    if v < MIN_PROB {
        Err(Error::ZeroProbability)
    } else {
        Ok(v)
    }
}

/// Conditional expectation of `g` given the fuzzy event:
/// `∫ g(x) μ(x) f(x; p) dx / ∫ μ(x) f(x; p) dx`.
pub fn conditional_expectation<G>(g: G, obs: &FuzzyObservation, p: KumaParams) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let m = obs.membership();
    if m.is_point() {
        return Ok(g(m.xi()));
    }
    let spec = QuadratureSpec::default();
    let denom = integrate_weighted(|x| kuma::ln_pdf(x, p).exp(), m, &spec)?;
    if denom < MIN_PROB {
        return Err(Error::ZeroProbability);
    }
    let num = integrate_weighted(|x| g(x) * kuma::ln_pdf(x, p).exp(), m, &spec)?;
    Ok(num / denom)
}

/// Observed-data log-likelihood of the sample at `p` under the chosen form.
pub fn obs_loglik(s: &FuzzySample, p: KumaParams, form: LikelihoodForm) -> Result<f64> {
    SampleLikelihood::new(s, form)?.log_lik(p)
}

/// Analytic gradient of [`obs_loglik`].
pub fn score(s: &FuzzySample, p: KumaParams, form: LikelihoodForm) -> Result<ScoreVector> {
    SampleLikelihood::new(s, form)?.score(p)
}

/// Analytic Hessian of [`obs_loglik`].
pub fn hessian(s: &FuzzySample, p: KumaParams, form: LikelihoodForm) -> Result<HessianMatrix> {
    SampleLikelihood::new(s, form)?.hessian(p)
}
