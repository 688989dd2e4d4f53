//! Fuzzy observations: trapezoidal membership functions, samples of fuzzy
//! data, and orthogonal fuzzy information systems used to fuzzify crisp data.
//!
//! A membership function is the trapezoid `(xi, omega, delta, theta)`: zero
//! outside `[xi, theta]`, one on the plateau `[omega, delta]`, linear on the
//! two edges. Triangular (`omega == delta`), crisp-interval
//! (`xi == omega, delta == theta`) and crisp-point (all four equal) shapes are
//! the degenerate cases.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng;

/// Margin by which observation supports are kept away from 0 and 1, so that
/// integrands such as `log x` or `(1-x^a)^{b-1}` stay finite on the support.
pub const SUPPORT_CLIP: f64 = 1e-9;

/// Piecewise-linear trapezoidal membership function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipFunction {
    xi: f64,
    omega: f64,
    delta: f64,
    theta: f64,
}

impl MembershipFunction {
    /// General trapezoid; knots must be finite and ordered.
    pub fn trapezoidal(xi: f64, omega: f64, delta: f64, theta: f64) -> Result<Self> {
        let ordered = xi <= omega && omega <= delta && delta <= theta;
        let finite = xi.is_finite() && omega.is_finite() && delta.is_finite() && theta.is_finite();
        if ordered && finite {
            Ok(MembershipFunction { xi, omega, delta, theta })
        } else {
            Err(Error::InvalidMembership { xi, omega, delta, theta })
        }
    }

    /// Triangle with apex `peak`.
    pub fn triangular(xi: f64, peak: f64, theta: f64) -> Result<Self> {
        Self::trapezoidal(xi, peak, peak, theta)
    }

    /// Indicator of the interval `[lo, hi]`.
    pub fn crisp_interval(lo: f64, hi: f64) -> Result<Self> {
        Self::trapezoidal(lo, lo, hi, hi)
    }

    /// Point mass at `x`.
    pub fn crisp_point(x: f64) -> Result<Self> {
        Self::trapezoidal(x, x, x, x)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Support endpoints `[xi, theta]`.
    pub fn support(&self) -> (f64, f64) {
        (self.xi, self.theta)
    }

    /// True when the support has zero length.
    pub fn is_point(&self) -> bool {
        self.xi == self.theta
    }

    /// Membership grade at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        if x < self.xi || x > self.theta {
            0.0
        } else if x < self.omega {
            (x - self.xi) / (self.omega - self.xi)
        } else if x <= self.delta {
            1.0
        } else {
            (self.theta - x) / (self.theta - self.delta)
        }
    }

    /// Intersects the trapezoid with `[lo, hi]`, keeping edge slopes intact.
    fn clipped(&self, lo: f64, hi: f64) -> MembershipFunction {
        MembershipFunction {
            xi: self.xi.max(lo).min(hi),
            omega: self.omega.max(lo).min(hi),
            delta: self.delta.max(lo).min(hi),
            theta: self.theta.max(lo).min(hi),
        }
    }
}

/// One fuzzy data point: a membership function clipped to the open unit interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyObservation {
    membership: MembershipFunction,
}

impl FuzzyObservation {
    /// Clips the membership support to `[SUPPORT_CLIP, 1 - SUPPORT_CLIP]` and
    /// requires that something usable is left: either an interval of positive
    /// length or a crisp point interior to (0, 1).
    pub fn new(m: MembershipFunction) -> Result<Self> {
        if m.is_point() {
            let x = m.xi;
            if x > 0.0 && x < 1.0 {
                return Ok(FuzzyObservation { membership: m });
            }
            return Err(Error::ObservationOutsideUnit { xi: m.xi, theta: m.theta });
        }
        let clipped = m.clipped(SUPPORT_CLIP, 1.0 - SUPPORT_CLIP);
        if clipped.theta - clipped.xi > 0.0 {
            Ok(FuzzyObservation { membership: clipped })
        } else {
            Err(Error::ObservationOutsideUnit { xi: m.xi, theta: m.theta })
        }
    }

    pub fn membership(&self) -> &MembershipFunction {
        &self.membership
    }
}

/// Ordered collection of fuzzy observations; never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySample {
    observations: Vec<FuzzyObservation>,
}

impl FuzzySample {
    pub fn new(observations: Vec<FuzzyObservation>) -> Result<Self> {
        if observations.is_empty() {
            Err(Error::EmptySample)
        } else {
            Ok(FuzzySample { observations })
        }
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn observations(&self) -> &[FuzzyObservation] {
        &self.observations
    }

    /// Sample of crisp points, the zero-width limit of fuzzy data.
    pub fn from_crisp(values: &[f64]) -> Result<Self> {
        let obs = values
            .iter()
            .map(|&x| MembershipFunction::crisp_point(x).and_then(FuzzyObservation::new))
            .collect::<Result<Vec<_>>>()?;
        Self::new(obs)
    }
}

/// Finite family of fuzzy events whose membership grades sum to one at every
/// point of (0, 1) — the orthogonality condition.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyInformationSystem {
    events: Vec<MembershipFunction>,
}

impl FuzzyInformationSystem {
    /// Validates orthogonality on a dense grid before accepting the events.
    pub fn new(events: Vec<MembershipFunction>) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::InvalidOptions("fuzzy information system needs at least one event"));
        }
        let fis = FuzzyInformationSystem { events };
        let grid = 4096;
        for i in 1..grid {
            let x = i as f64 / grid as f64;
            let total: f64 = fis.events.iter().map(|e| e.eval(x)).sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::NotOrthogonal { x, total });
            }
        }
        Ok(fis)
    }

    pub fn events(&self) -> &[MembershipFunction] {
        &self.events
    }

    /// Picks one event index per crisp value, with selection probability equal
    /// to the membership grade of the value in each event. Deterministic given
    /// `seed`; one uniform draw is consumed per value in order.
    pub fn assign_events(&self, crisp: &[f64], seed: u64) -> Result<Vec<usize>> {
        let mut r = rng::stream(seed);
        let mut picks = Vec::with_capacity(crisp.len());
        for &x in crisp {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::OutOfDomain { x });
            }
            let u = rng::uniform_open(&mut r);
            let mut acc = 0.0;
            let mut chosen = self.events.len() - 1;
            for (k, e) in self.events.iter().enumerate() {
                acc += e.eval(x);
                if u <= acc {
                    chosen = k;
                    break;
                }
            }
            picks.push(chosen);
        }
        Ok(picks)
    }
}

/// The fixed eight-event partition of (0, 1) used by default.
///
/// Plateau breakpoints sit at {0, 0.1, 0.25, 0.4, 0.55, 0.7, 0.8, 0.9, 1};
/// adjacent events overlap linearly over a band of width 0.04 centred on each
/// interior breakpoint, with complementary slopes so the grades always sum to
/// one.
pub fn default_fis() -> FuzzyInformationSystem {
    const BREAKS: [f64; 9] = [0.0, 0.1, 0.25, 0.4, 0.55, 0.7, 0.8, 0.9, 1.0];
    const HALF_BAND: f64 = 0.02;
    let mut events = Vec::with_capacity(BREAKS.len() - 1);
    for k in 0..BREAKS.len() - 1 {
        let (lo, hi) = (BREAKS[k], BREAKS[k + 1]);
        let (xi, omega) = if k == 0 { (0.0, 0.0) } else { (lo - HALF_BAND, lo + HALF_BAND) };
        let (delta, theta) = if k == BREAKS.len() - 2 {
            (1.0, 1.0)
        } else {
            (hi - HALF_BAND, hi + HALF_BAND)
        };
        events.push(MembershipFunction::trapezoidal(xi, omega, delta, theta).expect("fixed knots are ordered"));
    }
    FuzzyInformationSystem::new(events).expect("construction satisfies orthogonality")
}

/// Encodes each crisp value as one event of the information system, chosen
/// randomly with probability equal to its membership grade.
pub fn fuzzify(crisp: &[f64], fis: &FuzzyInformationSystem, seed: u64) -> Result<FuzzySample> {
    let picks = fis.assign_events(crisp, seed)?;
    let obs = picks
        .into_iter()
        .map(|k| FuzzyObservation::new(fis.events()[k]))
        .collect::<Result<Vec<_>>>()?;
    FuzzySample::new(obs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_evaluation() {
        let m = MembershipFunction::trapezoidal(0.2, 0.4, 0.6, 0.8).unwrap();
        assert!((m.eval(0.3) - 0.5).abs() < 1e-15);
        assert_eq!(m.eval(0.5), 1.0);
        assert_eq!(m.eval(0.1), 0.0);
        assert_eq!(m.eval(0.9), 0.0);
        assert!((m.eval(0.7) - 0.5).abs() < 1e-15);
        assert_eq!(m.eval(0.2), 0.0);
        assert_eq!(m.eval(0.8), 0.0);
    }

    #[test]
    fn triangular_apex_is_one() {
        let m = MembershipFunction::triangular(0.1, 0.3, 0.5).unwrap();
        assert_eq!(m.eval(0.3), 1.0);
        assert!((m.eval(0.2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn crisp_shapes() {
        let i = MembershipFunction::crisp_interval(0.2, 0.4).unwrap();
        assert_eq!(i.eval(0.2), 1.0);
        assert_eq!(i.eval(0.3), 1.0);
        assert_eq!(i.eval(0.41), 0.0);
        let p = MembershipFunction::crisp_point(0.7).unwrap();
        assert!(p.is_point());
        assert_eq!(p.eval(0.7), 1.0);
        assert_eq!(p.eval(0.700001), 0.0);
    }

    #[test]
    fn rejects_unordered_knots() {
        assert!(MembershipFunction::trapezoidal(0.4, 0.2, 0.6, 0.8).is_err());
        assert!(MembershipFunction::trapezoidal(0.1, 0.2, 0.9, 0.8).is_err());
        assert!(MembershipFunction::trapezoidal(f64::NAN, 0.2, 0.3, 0.4).is_err());
    }

    #[test]
    fn lipschitz_continuity() {
        let m = MembershipFunction::trapezoidal(0.2, 0.4, 0.6, 0.8).unwrap();
        let slope = 1.0 / 0.2;
        let mut prev = m.eval(0.0);
        let step = 1e-4;
        let mut x = step;
        while x < 1.0 {
            let v = m.eval(x);
            assert!((v - prev).abs() <= slope * step * (1.0 + 1e-9));
            prev = v;
            x += step;
        }
    }

    #[test]
    fn observation_clips_support() {
        let m = MembershipFunction::trapezoidal(0.0, 0.0, 0.08, 0.12).unwrap();
        let o = FuzzyObservation::new(m).unwrap();
        assert_eq!(o.membership().xi(), SUPPORT_CLIP);
        assert_eq!(o.membership().omega(), SUPPORT_CLIP);
        assert!(FuzzyObservation::new(MembershipFunction::crisp_point(0.5).unwrap()).is_ok());
        // entirely outside the unit interval
        let bad = MembershipFunction::trapezoidal(1.2, 1.3, 1.4, 1.5).unwrap();
        assert!(FuzzyObservation::new(bad).is_err());
        assert!(FuzzyObservation::new(MembershipFunction::crisp_point(1.0).unwrap()).is_err());
    }

    #[test]
    fn empty_sample_rejected() {
        assert!(FuzzySample::new(Vec::new()).is_err());
    }

    #[test]
    fn default_fis_shape() {
        let fis = default_fis();
        assert_eq!(fis.events().len(), 8);
        // orthogonality at an arbitrary interior point
        let total: f64 = fis.events().iter().map(|e| e.eval(0.37)).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn default_fis_orthogonal_on_dense_grid() {
        let fis = default_fis();
        let n = 100_000;
        let mut max_overlap = 0;
        for i in 1..n {
            let x = i as f64 / n as f64;
            let total: f64 = fis.events().iter().map(|e| e.eval(x)).sum();
            assert!((total - 1.0).abs() <= 1e-12, "x={x} total={total}");
            let positive = fis.events().iter().filter(|e| e.eval(x) > 0.0).count();
            max_overlap = max_overlap.max(positive);
        }
        assert!(max_overlap <= 2);
    }

    #[test]
    fn fuzzify_is_deterministic_and_size_preserving() {
        let fis = default_fis();
        let crisp: Vec<f64> = (1..60).map(|i| i as f64 / 60.0).collect();
        let s1 = fuzzify(&crisp, &fis, 5).unwrap();
        let s2 = fuzzify(&crisp, &fis, 5).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.len(), crisp.len());
    }

    #[test]
    fn fuzzify_rejects_out_of_range() {
        let fis = default_fis();
        assert!(fuzzify(&[0.5, 1.2], &fis, 1).is_err());
        assert!(fuzzify(&[0.0], &fis, 1).is_err());
    }

    #[test]
    fn plateau_point_is_assigned_with_certainty() {
        let fis = default_fis();
        // 0.5 lies on the plateau of the fourth event (0.38..0.53 band)
        let picks = fis.assign_events(&[0.5; 32], 77).unwrap();
        assert!(picks.iter().all(|&k| k == 3));
        assert_eq!(fis.events()[3].eval(0.5), 1.0);
    }

    #[test]
    fn boundary_point_splits_evenly_over_seeds() {
        let fis = default_fis();
        // interior breakpoint 0.4: events 2 and 3 each hold grade 0.5
        let x = 0.4;
        assert!((fis.events()[2].eval(x) - 0.5).abs() < 1e-15);
        assert!((fis.events()[3].eval(x) - 0.5).abs() < 1e-15);
        let trials = 10_000;
        let mut first = 0;
        for seed in 0..trials {
            let k = fis.assign_events(&[x], seed as u64).unwrap()[0];
            if k == 2 {
                first += 1;
            }
        }
        let freq = first as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.02, "freq={freq}");
    }

    #[test]
    fn orthogonality_rejected_when_violated() {
        let events = alloc::vec![
            MembershipFunction::trapezoidal(0.0, 0.0, 0.5, 0.5).unwrap(),
            MembershipFunction::trapezoidal(0.6, 0.6, 1.0, 1.0).unwrap(),
        ];
        assert!(matches!(
            FuzzyInformationSystem::new(events),
            Err(Error::NotOrthogonal { .. })
        ));
    }
}
