//! Frequentist fitters: Newton–Raphson on the observed-data log-likelihood,
//! an EM-type algorithm built on fuzzy-event conditional expectations, and
//! Wald-type confidence intervals from the observed information.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fuzzy::FuzzySample;
use crate::kuma::KumaParams;
use crate::likelihood::{HessianMatrix, LikelihoodForm, SampleLikelihood};
use crate::norm;
use crate::quad::QuadratureSpec;

/// Relative slack when deciding whether a trial step improved the objective;
/// absorbs quadrature noise near a maximum.
const IMPROVE_SLACK: f64 = 1e-12;

/// M-step search bracket over the first shape parameter.
const M_STEP_BRACKET: (f64, f64) = (1e-3, 1e2);
const M_STEP_TOL: f64 = 1e-10;

/// Options shared by both fitters.
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    /// Starting point; must be strictly positive.
    pub init: KumaParams,
    /// Convergence threshold on the Euclidean parameter step.
    pub eps: f64,
    pub max_iter: u32,
    pub form: LikelihoodForm,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            init: KumaParams::new_unchecked(1.0, 1.0),
            eps: 1e-8,
            max_iter: 500,
            form: LikelihoodForm::default(),
        }
    }
}

impl FitOptions {
    fn validate(&self) -> Result<()> {
        if self.eps > 0.0 && self.max_iter >= 1 {
            Ok(())
        } else {
            Err(Error::InvalidOptions("eps must be positive and max_iter >= 1"))
        }
    }
}

/// Outcome of a fit: point estimate, log-likelihood, iteration trace, and the
/// observed information (negated Hessian) at the estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: KumaParams,
    pub loglik: f64,
    pub iterations: u32,
    pub converged: bool,
    pub observed_info: HessianMatrix,
    pub trace: Vec<KumaParams>,
}

/// Two-sided interval at the given confidence level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalEstimate {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl IntervalEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

fn step_norm(da: f64, db: f64) -> f64 {
    (da * da + db * db).sqrt()
}

/// Newton–Raphson ascent of the observed-data log-likelihood.
///
/// Iterates `delta <- delta - H^{-1} score` until the Euclidean step norm
/// drops to `opts.eps` or the iteration budget runs out. Steps that leave the
/// positive quadrant or decrease the log-likelihood are halved, up to 30
/// times; if no acceptable step exists the fit stops with `converged: false`.
/// A numerically singular Hessian fails with the trace attached.
pub fn fit_newton_raphson(s: &FuzzySample, opts: &FitOptions) -> Result<FitResult> {
    opts.validate()?;
    let lik = SampleLikelihood::new(s, opts.form)?;
    fit_newton_raphson_with(&lik, opts)
}

pub(crate) fn fit_newton_raphson_with(lik: &SampleLikelihood, opts: &FitOptions) -> Result<FitResult> {
    let mut p = opts.init;
    let mut ll = lik.log_lik(p)?;
    let mut trace = vec![p];
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=opts.max_iter {
        let (sc, h) = lik.score_and_hessian(p)?;
        let det = h.det();
        if det.abs() < 1e-14 {
            return Err(Error::SingularHessian { trace });
        }
        // d = H^{-1} score; update is p - d
        let mut d_a = (h.d_bb * sc.d_a - h.d_ab * sc.d_b) / det;
        let mut d_b = (h.d_aa * sc.d_b - h.d_ab * sc.d_a) / det;
        // far from the maximum the Hessian can be indefinite and the Newton
        // step points downhill; substitute a bounded gradient-ascent step
        if d_a * sc.d_a + d_b * sc.d_b >= 0.0 {
            let scale = -1.0 / (1.0 + sc.norm());
            d_a = sc.d_a * scale;
            d_b = sc.d_b * scale;
        }

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=30 {
            let cand_a = p.a() - t * d_a;
            let cand_b = p.b() - t * d_b;
            if cand_a > 0.0 && cand_b > 0.0 {
                let cand = KumaParams::new_unchecked(cand_a, cand_b);
                if let Ok(cand_ll) = lik.log_lik(cand) {
                    if cand_ll >= ll - IMPROVE_SLACK * (1.0 + ll.abs()) {
                        accepted = Some((cand, cand_ll, t));
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        iterations = iter;
        match accepted {
            None => break,
            Some((cand, cand_ll, t)) => {
                p = cand;
                ll = cand_ll;
                trace.push(p);
                if t * step_norm(d_a, d_b) <= opts.eps {
                    converged = true;
                    break;
                }
            }
        }
    }

    let observed_info = lik.hessian(p)?.negated();
    Ok(FitResult { params: p, loglik: ll, iterations, converged, observed_info, trace })
}

/// EM-type fitter.
///
/// The E-step computes, per observation, the conditional expectations of
/// `log x` and `log(1 - x^a)` under the fuzzy-event conditional density at
/// the current parameters. The M-step maximizes the expected complete-data
/// log-likelihood with the second shape profiled in closed form,
/// `b(a) = -n / Σ E[log(1 - X^a)]`, and the first shape found by a
/// derivative root search (golden-section fallback) on the fixed bracket.
pub fn fit_em(s: &FuzzySample, opts: &FitOptions) -> Result<FitResult> {
    opts.validate()?;
    // E/M integrals run tighter than the default so the ascent property
    // survives quadrature noise; the absolute floor respects the f64 noise
    // level of integrands evaluated next to the support clip at 1
    let em_spec = QuadratureSpec { rel_tol: 1e-12, abs_tol: 1e-11, max_subdivisions: 400 };
    let lik = SampleLikelihood::with_spec(s, opts.form, em_spec)?;
    let n = s.len() as f64;

    let mut p = opts.init;
    let mut trace = vec![p];
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=opts.max_iter {
        let log_x = lik.conditional_log_x(p)?;
        let sum_l: f64 = log_x.iter().map(|(c, v)| c * v).sum();

        // conditional expectations of log(1 - x^shape) and their shape
        // derivative, summed over the sample, at the frozen density `p`
        let sums = |shape: f64, with_d: bool| -> Result<(f64, f64)> {
            let rows = lik.conditional_log_one_minus_pow(p, shape, with_d)?;
            let mut m = 0.0;
            let mut dm = 0.0;
            for (c, v, d) in rows {
                m += c * v;
                dm += c * d;
            }
            Ok((m, dm))
        };
        let profiled_b = |sum_m: f64| -> Result<f64> {
            if sum_m >= 0.0 {
                Err(Error::InvalidEStep { sum: sum_m })
            } else {
                Ok(-n / sum_m)
            }
        };
        // derivative of the profiled objective Q*(a) = Q(a, b(a))
        let phi = |a: f64| -> Result<f64> {
            let (m, dm) = sums(a, true)?;
            let b = profiled_b(m)?;
            Ok(n / a + sum_l + (b - 1.0) * dm)
        };
        let q_at = |a: f64, b: f64| -> Result<f64> {
            let (m, _) = sums(a, false)?;
            Ok(n * (a.ln() + b.ln()) + (a - 1.0) * sum_l + (b - 1.0) * m)
        };

        let (lo, hi) = M_STEP_BRACKET;
        let phi_lo = phi(lo)?;
        let phi_hi = phi(hi)?;
        let mut a_new = if phi_lo <= 0.0 {
            lo
        } else if phi_hi >= 0.0 {
            hi
        } else {
            brent_root(&phi, lo, hi, phi_lo, phi_hi, M_STEP_TOL)?
        };
        // ascent guard: the root search assumed a unimodal profile; verify and
        // fall back to golden-section maximization if the step lost ground
        let q_old = q_at(p.a(), p.b())?;
        let q_new = q_at(a_new, profiled_b(sums(a_new, false)?.0)?)?;
        if q_new < q_old - 1e-12 * (1.0 + q_old.abs()) {
            a_new = golden_max(
                &|a: f64| {
                    let (m, _) = sums(a, false)?;
                    let b = profiled_b(m)?;
                    Ok(n * (a.ln() + b.ln()) + (a - 1.0) * sum_l + (b - 1.0) * m)
                },
                lo,
                hi,
                M_STEP_TOL,
            )?;
        }
        let b_new = profiled_b(sums(a_new, false)?.0)?;

        let step = step_norm(a_new - p.a(), b_new - p.b());
        p = KumaParams::new_unchecked(a_new, b_new);
        trace.push(p);
        iterations = iter;
        if step <= opts.eps {
            converged = true;
            break;
        }
    }

    let loglik = lik.log_lik(p)?;
    let observed_info = lik.hessian(p)?.negated();
    Ok(FitResult { params: p, loglik, iterations, converged, observed_info, trace })
}

/// Brent's method on a bracketed sign change of `f`.
fn brent_root<F>(f: &F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.abs() > fc.abs() {
            // make b the best estimate
            core::mem::swap(&mut b, &mut c);
            core::mem::swap(&mut fb, &mut fc);
            a = c;
            fa = fc;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // attempt inverse quadratic / secant interpolation
            let s = fb / fa;
            let (mut pp, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0)),
                    (q0 - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if pp > 0.0 {
                q = -q;
            }
            pp = pp.abs();
            if 2.0 * pp < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = pp / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1 * xm.signum() };
        fb = f(b)?;
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(Error::OptimizerFailed("root search did not converge"))
}

/// Golden-section maximization of `f` on `[lo, hi]`.
fn golden_max<F>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Wald-type confidence intervals from the observed information of a
/// converged fit. Lower bounds are floored at zero since both parameters are
/// positive.
pub fn asymptotic_ci(r: &FitResult, level: f64) -> Result<(IntervalEstimate, IntervalEstimate)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidOptions("confidence level must lie in (0, 1)"));
    }
    if !r.converged {
        return Err(Error::NotConverged);
    }
    let info = &r.observed_info;
    let det = info.det();
    if !(info.d_aa > 0.0 && det > 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let var_a = info.d_bb / det;
    let var_b = info.d_aa / det;
    let z = norm::quantile(0.5 * (1.0 + level));
    let make = |est: f64, var: f64| IntervalEstimate {
        lower: (est - z * var.sqrt()).max(0.0),
        upper: est + z * var.sqrt(),
        level,
    };
    Ok((make(r.params.a(), var_a), make(r.params.b(), var_b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{default_fis, fuzzify, FuzzyObservation, MembershipFunction};
    use crate::kuma::{self, sample};
    use crate::likelihood::{obs_loglik, score};

    fn params(a: f64, b: f64) -> KumaParams {
        KumaParams::new(a, b).unwrap()
    }

    /// Exact grid argmax of the complete-data log-likelihood on [lo, hi]^2.
    ///
    /// For fixed `a` the objective is strictly concave in `b`, so the best
    /// grid `b` is adjacent to the stationary point; scanning a few
    /// neighbours reproduces the full two-dimensional grid scan exactly.
    fn grid_search_mle(xs: &[f64], lo: f64, hi: f64, step: f64) -> (f64, f64) {
        let n = xs.len() as f64;
        let s1: f64 = xs.iter().map(|&x| x.ln()).sum();
        let k_max = ((hi - lo) / step).round() as usize;
        let mut best = (f64::NEG_INFINITY, lo, lo);
        for ka in 0..=k_max {
            let a = lo + ka as f64 * step;
            let s2: f64 = xs.iter().map(|&x| kuma::ln_one_minus_pow(x, a)).sum();
            let b_star = -n / s2;
            let kb_near = ((b_star - lo) / step).round() as isize;
            for kb in (kb_near - 2)..=(kb_near + 2) {
                let kb = kb.clamp(0, k_max as isize) as usize;
                let b = lo + kb as f64 * step;
                let ll = n * (a.ln() + b.ln()) + (a - 1.0) * s1 + (b - 1.0) * s2;
                if ll > best.0 {
                    best = (ll, a, b);
                }
            }
        }
        (best.1, best.2)
    }

    #[test]
    fn newton_raphson_matches_grid_oracle_on_crisp_data() {
        for seed in [1_u64, 2, 3] {
            let xs = sample(150, params(2.0, 3.0), seed);
            let s = FuzzySample::from_crisp(&xs).unwrap();
            let fit = fit_newton_raphson(&s, &FitOptions::default()).unwrap();
            assert!(fit.converged);
            let (ga, gb) = grid_search_mle(&xs, 0.5, 5.0, 5e-4);
            assert!((fit.params.a() - ga).abs() < 1e-3, "seed {seed}: {} vs {ga}", fit.params.a());
            assert!((fit.params.b() - gb).abs() < 1e-3, "seed {seed}: {} vs {gb}", fit.params.b());
        }
    }

    #[test]
    fn newton_raphson_fixed_point_converges_immediately() {
        let xs = sample(120, params(2.0, 3.0), 5);
        let s = FuzzySample::from_crisp(&xs).unwrap();
        let first = fit_newton_raphson(&s, &FitOptions::default()).unwrap();
        let again = fit_newton_raphson(&s, &FitOptions { init: first.params, ..Default::default() }).unwrap();
        assert!(again.converged);
        assert!(again.iterations <= 2, "{}", again.iterations);
    }

    #[test]
    fn newton_raphson_handles_distant_start_on_fuzzy_data() {
        let fis = default_fis();
        let xs = sample(120, params(2.0, 3.0), 7);
        let s = fuzzify(&xs, &fis, 8).unwrap();
        let opts = FitOptions { init: params(0.5, 6.0), ..Default::default() };
        let fit = fit_newton_raphson(&s, &opts).unwrap();
        assert!(fit.converged, "iterations {}", fit.iterations);
        assert!(fit.params.a() > 0.5 && fit.params.a() < 5.0);
        let sc = score(&s, fit.params, LikelihoodForm::Exact).unwrap();
        assert!(sc.norm() <= 1e-5, "score norm {}", sc.norm());
    }

    #[test]
    fn singular_hessian_is_reported_with_trace() {
        // a single full-support observation carries no information: the
        // log-likelihood is identically zero and the Hessian vanishes
        let m = MembershipFunction::crisp_interval(1e-9, 1.0 - 1e-9).unwrap();
        let s = FuzzySample::new(vec![FuzzyObservation::new(m).unwrap()]).unwrap();
        match fit_newton_raphson(&s, &FitOptions::default()) {
            Err(Error::SingularHessian { trace }) => assert!(!trace.is_empty()),
            other => panic!("expected singular Hessian, got {other:?}"),
        }
    }

    #[test]
    fn em_agrees_with_newton_raphson_on_crisp_data() {
        for seed in [11_u64, 12, 13] {
            let xs = sample(150, params(2.0, 3.0), seed);
            let s = FuzzySample::from_crisp(&xs).unwrap();
            let nr = fit_newton_raphson(&s, &FitOptions::default()).unwrap();
            let em = fit_em(&s, &FitOptions::default()).unwrap();
            assert!(em.converged);
            assert!((nr.params.a() - em.params.a()).abs() < 1e-4, "seed {seed}");
            assert!((nr.params.b() - em.params.b()).abs() < 1e-4, "seed {seed}");
        }
    }

    #[test]
    fn em_crisp_fixed_point_satisfies_profile_identity() {
        let xs = sample(100, params(2.0, 3.0), 21);
        let s = FuzzySample::from_crisp(&xs).unwrap();
        let em = fit_em(&s, &FitOptions::default()).unwrap();
        let a_hat = em.params.a();
        let s2: f64 = xs.iter().map(|&x| kuma::ln_one_minus_pow(x, a_hat)).sum();
        let b_profiled = -(xs.len() as f64) / s2;
        assert!((em.params.b() - b_profiled).abs() < 1e-8);
    }

    #[test]
    fn em_ascends_exact_loglik_on_fuzzy_data() {
        let fis = default_fis();
        for seed in [31_u64, 32, 33, 34, 35] {
            let xs = sample(50, params(2.0, 3.0), seed);
            let s = fuzzify(&xs, &fis, seed + 100).unwrap();
            let opts = FitOptions { init: params(0.5, 6.0), ..Default::default() };
            let em = fit_em(&s, &opts).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for &p in &em.trace {
                assert!(p.a() > 0.0 && p.b() > 0.0);
                let ll = obs_loglik(&s, p, LikelihoodForm::Exact).unwrap();
                assert!(ll >= prev - 1e-10, "seed {seed}: {ll} after {prev}");
                prev = ll;
            }
        }
    }

    #[test]
    fn em_and_newton_raphson_agree_on_fuzzy_data() {
        let fis = default_fis();
        let xs = sample(100, params(2.0, 3.0), 41);
        let s = fuzzify(&xs, &fis, 42).unwrap();
        let nr = fit_newton_raphson(&s, &FitOptions::default()).unwrap();
        let em = fit_em(&s, &FitOptions::default()).unwrap();
        assert!(nr.converged && em.converged);
        assert!((nr.params.a() - em.params.a()).abs() < 1e-4);
        assert!((nr.params.b() - em.params.b()).abs() < 1e-4);
    }

    #[test]
    fn asymptotic_ci_uses_normal_quantile() {
        let xs = sample(200, params(2.0, 3.0), 51);
        let s = FuzzySample::from_crisp(&xs).unwrap();
        let fit = fit_newton_raphson(&s, &FitOptions::default()).unwrap();
        let (ci_a, ci_b) = asymptotic_ci(&fit, 0.95).unwrap();
        let det = fit.observed_info.det();
        let se_a = (fit.observed_info.d_bb / det).sqrt();
        let z = (ci_a.upper - fit.params.a()) / se_a;
        assert!((z - 1.959964).abs() < 1e-5, "z={z}");
        assert!(ci_a.lower < fit.params.a() && fit.params.a() < ci_a.upper);
        assert!(ci_b.lower < fit.params.b() && fit.params.b() < ci_b.upper);
        assert_eq!(ci_a.level, 0.95);
    }

    #[test]
    fn asymptotic_ci_rejects_unconverged_fits() {
        let xs = sample(50, params(2.0, 3.0), 61);
        let s = FuzzySample::from_crisp(&xs).unwrap();
        let mut fit = fit_newton_raphson(&s, &FitOptions::default()).unwrap();
        fit.converged = false;
        assert!(matches!(asymptotic_ci(&fit, 0.95), Err(Error::NotConverged)));
        fit.converged = true;
        assert!(matches!(asymptotic_ci(&fit, 1.2), Err(Error::InvalidOptions(_))));
    }

    #[test]
    fn ci_width_shrinks_like_root_n() {
        let mut widths = [0.0_f64; 2];
        for (k, &n) in [400_usize, 800].iter().enumerate() {
            let mut acc = 0.0;
            let mut count = 0;
            for seed in 0..12_u64 {
                let xs = sample(n, params(2.0, 3.0), 70 + seed);
                let s = FuzzySample::from_crisp(&xs).unwrap();
                let fit = fit_newton_raphson(&s, &FitOptions::default()).unwrap();
                if let Ok((ci_a, _)) = asymptotic_ci(&fit, 0.95) {
                    acc += ci_a.width();
                    count += 1;
                }
            }
            widths[k] = acc / count as f64;
        }
        let ratio = widths[1] / widths[0];
        let expected = 1.0 / 2.0_f64.sqrt();
        assert!((ratio - expected).abs() < 0.1 * expected, "ratio {ratio}");
    }
}
