//! Two reference problems with closed-form trade-offs: hypothesis testing
//! over smoothed point masses, and estimation of the location of a discrete
//! cardioid under cosine loss.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::channels::PrivacyLevel;
use crate::decision::{bayes_optimal_risk, check_equalizer, minimax_risk, DecisionProblem, Prior};
use crate::geometry::staircase_row_sum;
use crate::groups::{Alphabet, PermGroup, Subset};
use crate::invariant::{ss_mechanism, InvariantPolytope};
use crate::put::{put_transitive_closed_form, PutError, PutResult, Sense, Value};
use crate::rational::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("alphabet size {m} is below the minimum {min}")]
    AlphabetTooSmall { m: usize, min: usize },
    #[error("smoothing parameter must lie in (0, 1]")]
    Gamma,
}

fn check_gamma(gamma: &Rational) -> Result<(), SpecError> {
    if !gamma.is_positive() || gamma > &Rational::one() {
        return Err(SpecError::Gamma);
    }
    Ok(())
}

fn ri(n: usize) -> Rational {
    Rational::from_integer((n as i64).into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HtSpec {
    pub m: usize,
    pub gamma: Rational,
    pub t: PrivacyLevel,
}

impl HtSpec {
    pub fn new(m: usize, gamma: Rational, t: PrivacyLevel) -> Result<Self, SpecError> {
        if m < 2 {
            return Err(SpecError::AlphabetTooSmall { m, min: 2 });
        }
        check_gamma(&gamma)?;
        Ok(Self { m, gamma, t })
    }
}

/// `Θ = X = A = [m]`, `P(x|θ) = (1-γ)/m + γ δ_{xθ}`, zero-one loss,
/// uniform prior.
pub fn ht_problem(spec: &HtSpec) -> DecisionProblem {
    let m = spec.m;
    let base = (Rational::one() - &spec.gamma) / ri(m);
    let peak = &base + &spec.gamma;
    let model = (0..m).map(|x| (0..m).map(|th| if x == th { peak.clone() } else { base.clone() }).collect()).collect();
    let loss = (0..m)
        .map(|th| (0..m).map(|a| if th == a { Rational::zero() } else { Rational::one() }).collect())
        .collect();
    let labels: Vec<String> = (0..m).map(|i| i.to_string()).collect();
    DecisionProblem::new(labels.clone(), Alphabet::indexed(m), labels, model, loss, Some(Prior::uniform(m)))
        .expect("well-formed by construction")
}

/// Bayes risk of the single-orbit channel on `k`-subsets:
/// `1 - (1-γ)/m - γ t / (k t + m - k)`.
pub fn ht_orbit_risk(spec: &HtSpec, k: usize) -> Rational {
    let m = ri(spec.m);
    Rational::one() - (Rational::one() - &spec.gamma) / m - &spec.gamma * spec.t.t() / staircase_row_sum(k, spec.m, spec.t.t())
}

/// `1 - (1-γ)/m - γ t / (t + m - 1)`.
pub fn ht_put_closed_form(spec: &HtSpec) -> Rational {
    ht_orbit_risk(spec, 1)
}

/// Minimization over the `Sym(m)` subset orbits, each evaluated through the
/// generic Bayes-risk engine.
pub fn ht_put_transitive(spec: &HtSpec, group_cap: usize) -> Result<PutResult, PutError> {
    let problem = ht_problem(spec);
    let prior = Prior::uniform(spec.m);
    let group = PermGroup::symmetric(spec.m, group_cap)?;
    let polytope = InvariantPolytope::new(group, &spec.t)?;
    put_transitive_closed_form(&polytope, Sense::Minimize, |o, w| {
        let q = polytope.orbit_channel(o, w).expect("transitive vertex weight");
        Value::Exact(bayes_optimal_risk(&problem, &prior, &q).expect("matching alphabet").0)
    })
}

/// At the optimal subset-selection channel (`k = 1`): the tie-splitting
/// Bayes rule equalizes exactly and the minimax LP reproduces the Bayes risk.
pub fn ht_minimax_equals_bayes(spec: &HtSpec) -> bool {
    let problem = ht_problem(spec);
    let prior = Prior::uniform(spec.m);
    let q = ss_mechanism(spec.m, 1, &spec.t).expect("m ≥ 2");
    let equalized = check_equalizer(&problem, &prior, &q, &Rational::zero()).expect("matching alphabet");
    let (bayes, _) = bayes_optimal_risk(&problem, &prior, &q).expect("matching alphabet");
    let (minimax, _) = minimax_risk(&problem, &q).expect("matching alphabet");
    equalized && minimax == bayes
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardioidSpec {
    pub m: usize,
    pub gamma: Rational,
    pub t: PrivacyLevel,
}

impl CardioidSpec {
    pub fn new(m: usize, gamma: Rational, t: PrivacyLevel) -> Result<Self, SpecError> {
        if m < 3 {
            return Err(SpecError::AlphabetTooSmall { m, min: 3 });
        }
        check_gamma(&gamma)?;
        Ok(Self { m, gamma, t })
    }

    fn gamma_f(&self) -> f64 {
        to_f64(&self.gamma)
    }

    fn t_f(&self) -> f64 {
        to_f64(self.t.t())
    }
}

/// `Z_y = Σ_{x∈y} e^{2πix/m}` as `(re, im)`.
pub fn z_vector(y: Subset, m: usize) -> (f64, f64) {
    y.letters().fold((0.0, 0.0), |(re, im), x| {
        let a = 2.0 * PI * x as f64 / m as f64;
        (re + libm::cos(a), im + libm::sin(a))
    })
}

/// `|Z_y|`.
pub fn z_magnitude(y: Subset, m: usize) -> f64 {
    let (re, im) = z_vector(y, m);
    libm::hypot(re, im)
}

/// Below this, `|Z_y|` is treated as an exact zero.
pub const Z_ZERO_TOLERANCE: f64 = 1e-12;

/// `1 - γ(t-1)|Z_y| / (2(k t + m - k))` for the orbit of `y` under `Z_m`.
pub fn cardioid_orbit_risk(spec: &CardioidSpec, y: Subset) -> f64 {
    let (g, t, m, k) = (spec.gamma_f(), spec.t_f(), spec.m as f64, y.len() as f64);
    1.0 - g * (t - 1.0) * z_magnitude(y, spec.m) / (2.0 * (k * t + m - k))
}

/// How the Bayes rule on an orbit behaves across `θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitCase {
    /// `|Z_y| = 0`: uniform random action, risk identically 1.
    Blind,
    /// `|Z_y| > 0` and `|O| ≥ 3`: deterministic rule `y ↦ arg Z_y`, risk
    /// constant in `θ`.
    Equalizing,
    /// Neither; cannot occur for a cyclic action.
    Unclassified,
}

pub fn cardioid_orbit_case(m: usize, orbit_size: usize, y: Subset) -> OrbitCase {
    if z_magnitude(y, m) <= Z_ZERO_TOLERANCE {
        OrbitCase::Blind
    } else if orbit_size >= 3 {
        OrbitCase::Equalizing
    } else {
        OrbitCase::Unclassified
    }
}

/// The `Z_m` invariant polytope on `m` letters.
pub fn cardioid_polytope(spec: &CardioidSpec) -> InvariantPolytope {
    InvariantPolytope::new(PermGroup::cyclic(spec.m), &spec.t).expect("cyclic group on m ≥ 3 letters")
}

/// `R(θ, Q, P*)` for `Q = w_O S_{X,O}` and the Bayes rule of the uniform
/// prior, summed directly over the orbit members and inputs.
pub fn cardioid_conditional_risk(spec: &CardioidSpec, polytope: &InvariantPolytope, orbit: usize, theta: f64) -> f64 {
    let m = spec.m;
    let g = spec.gamma_f();
    let t = spec.t_f();
    let w = to_f64(&polytope.transitive_vertex_weight(orbit).expect("cyclic action is transitive"));
    let members = &polytope.subset_orbits()[orbit].members;
    members
        .iter()
        .map(|&y| {
            let expected_loss = if z_magnitude(y, m) <= Z_ZERO_TOLERANCE {
                1.0
            } else {
                let (re, im) = z_vector(y, m);
                1.0 - libm::cos(theta - libm::atan2(im, re))
            };
            let mass: f64 = (0..m)
                .map(|x| {
                    let p = (1.0 + g * libm::cos(2.0 * PI * x as f64 / m as f64 - theta)) / m as f64;
                    p * w * if y.contains(x) { t } else { 1.0 }
                })
                .sum();
            mass * expected_loss
        })
        .sum()
}

/// Minimum over `Z_m` subset orbits of [`cardioid_orbit_risk`].
pub fn cardioid_put_transitive(spec: &CardioidSpec) -> Result<PutResult, PutError> {
    let polytope = cardioid_polytope(spec);
    put_transitive_closed_form(&polytope, Sense::Minimize, |o, _| {
        Value::Real(cardioid_orbit_risk(spec, polytope.subset_orbits()[o].representative()))
    })
}

/// `1 - γ(t-1)/(2 sin(π/m)) max_k sin(πk/m)/(k t + m - k)` and the
/// maximizing `k` (smallest on ties).
pub fn cardioid_put_closed_form(spec: &CardioidSpec) -> (f64, usize) {
    let (g, t, m) = (spec.gamma_f(), spec.t_f(), spec.m as f64);
    let score = |k: usize| libm::sin(PI * k as f64 / m) / (k as f64 * t + m - k as f64);
    let best = (2..spec.m).fold(1, |b, k| if score(k) > score(b) { k } else { b });
    (1.0 - g * (t - 1.0) / (2.0 * libm::sin(PI / m)) * score(best), best)
}

/// `{0, …, k-1}`. For `m ≤ 12` every `k`-subset is checked not to exceed its
/// `|Z|`.
pub fn cardioid_consecutive_maximizer(m: usize, k: usize) -> Subset {
    assert!(1 <= k && k < m, "k must lie in 1..m");
    let y = Subset::from_letters(&(0..k).collect::<Vec<_>>());
    if m <= 12 {
        let best = z_magnitude(y, m);
        for other in Subset::proper_nonempty(m).filter(|s| s.len() == k) {
            assert!(z_magnitude(other, m) <= best + 1e-12, "{} beats the consecutive subset", other.label());
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{verify_invariance, InvarianceDeclaration};
    use crate::rational::{int, rat};

    fn level(n: i64, d: i64) -> PrivacyLevel {
        PrivacyLevel::new(rat(n, d)).unwrap()
    }

    #[test]
    fn ht_problem_shape() {
        let spec = HtSpec::new(3, rat(1, 2), level(2, 1)).unwrap();
        let p = ht_problem(&spec);
        for th in 0..3 {
            let s: Rational = p.model().iter().map(|r| &r[th]).sum();
            assert_eq!(s, int(1));
        }
        let pure = ht_problem(&HtSpec::new(3, int(1), level(2, 1)).unwrap());
        assert_eq!(pure.model()[1][1], int(1));
        assert_eq!(pure.model()[0][1], int(0));
        assert!(verify_invariance(&p, &InvarianceDeclaration::natural(PermGroup::symmetric(3, 10).unwrap())));
        assert!(HtSpec::new(1, int(1), level(2, 1)).is_err());
        assert!(HtSpec::new(3, int(0), level(2, 1)).is_err());
    }

    #[test]
    fn ht_closed_form_examples() {
        assert_eq!(ht_put_closed_form(&HtSpec::new(2, int(1), level(3, 1)).unwrap()), rat(1, 4));
        assert_eq!(ht_put_closed_form(&HtSpec::new(3, int(1), level(2, 1)).unwrap()), rat(1, 2));
        let blind = HtSpec::new(4, rat(1, 4), level(1, 1)).unwrap();
        assert_eq!(ht_put_closed_form(&blind), rat(3, 4));
        let r = ht_put_transitive(&HtSpec::new(3, int(1), level(2, 1)).unwrap(), 100).unwrap();
        assert_eq!(r.value, Value::Exact(rat(1, 2)));
    }

    #[test]
    fn ht_minimax_examples() {
        assert!(ht_minimax_equals_bayes(&HtSpec::new(2, int(1), level(3, 1)).unwrap()));
        assert!(ht_minimax_equals_bayes(&HtSpec::new(4, rat(1, 2), level(2, 1)).unwrap()));
        assert!(ht_minimax_equals_bayes(&HtSpec::new(3, int(1), level(1, 1)).unwrap()));
    }

    #[test]
    fn ht_orbit_risk_increases_in_k() {
        let spec = HtSpec::new(5, rat(1, 2), level(3, 2)).unwrap();
        for k in 1..4 {
            assert!(ht_orbit_risk(&spec, k) < ht_orbit_risk(&spec, k + 1));
        }
    }

    #[test]
    fn z_examples() {
        assert!(z_magnitude(Subset::from_letters(&[0, 2]), 4) < 1e-15);
        let s2 = core::f64::consts::SQRT_2;
        assert!((z_magnitude(Subset::from_letters(&[0, 1]), 4) - s2).abs() < 1e-12);
        assert!((libm::sin(PI / 2.0) / libm::sin(PI / 4.0) - s2).abs() < 1e-12);
        assert!((z_magnitude(Subset::from_letters(&[0]), 3) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cardioid_examples() {
        let spec = CardioidSpec::new(4, int(1), level(3, 1)).unwrap();
        assert_eq!(cardioid_orbit_risk(&spec, Subset::from_letters(&[0, 2])), 1.0);
        let expected = 1.0 - core::f64::consts::SQRT_2 / 8.0;
        assert!((cardioid_orbit_risk(&spec, Subset::from_letters(&[0, 1])) - expected).abs() < 1e-12);
        let (v, k) = cardioid_put_closed_form(&spec);
        assert_eq!(k, 2);
        assert!((v - expected).abs() < 1e-12);
        let r = cardioid_put_transitive(&spec).unwrap();
        assert!((r.value.to_f64() - expected).abs() < 1e-9);
        assert_eq!(r.orbit.unwrap().k, 2);

        let flat = CardioidSpec::new(5, int(1), level(1, 1)).unwrap();
        assert!(Subset::proper_nonempty(5).all(|y| cardioid_orbit_risk(&flat, y) == 1.0));

        let spec3 = CardioidSpec::new(3, int(1), level(2, 1)).unwrap();
        let (v3, _) = cardioid_put_closed_form(&spec3);
        assert!((cardioid_put_transitive(&spec3).unwrap().value.to_f64() - v3).abs() < 1e-9);
    }

    #[test]
    fn cardioid_orbit_cases_cover_everything() {
        for m in 3..=8 {
            let spec = CardioidSpec::new(m, int(1), level(2, 1)).unwrap();
            let poly = cardioid_polytope(&spec);
            for o in poly.subset_orbits() {
                assert_ne!(cardioid_orbit_case(m, o.len(), o.representative()), OrbitCase::Unclassified);
            }
        }
    }

    #[test]
    fn consecutive_maximizer_examples() {
        let y = cardioid_consecutive_maximizer(5, 2);
        assert_eq!(y, Subset::from_letters(&[0, 1]));
        assert!((z_magnitude(y, 5) - 2.0 * libm::cos(PI / 5.0)).abs() < 1e-12);
        assert!((z_magnitude(cardioid_consecutive_maximizer(7, 6), 7) - 1.0).abs() < 1e-12);
        let y6 = cardioid_consecutive_maximizer(6, 3);
        assert!(z_magnitude(y6, 6) > z_magnitude(Subset::from_letters(&[0, 2, 4]), 6));
    }
}
