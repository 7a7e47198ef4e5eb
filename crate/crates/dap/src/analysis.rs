//! Closed-form diagnostics: adiabaticity parameters, dark-state overlap
//! errors, and identity-resonance prediction.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::core::{eigensystem, CouplingPair, CouplingRates};
use crate::error::Error;

/// Adiabaticity of the D₀ ↔ D± transition for a schedule passing through
/// couplings `c` with rates `dc`:
///
/// 𝒜 = |⟨D±| ∂ₜH |D₀⟩| / ℰ² = |Ω₁ Ω̇₂ − Ω₂ Ω̇₁| / (√2 ℰ³).
///
/// Adiabatic following needs 𝒜 ≪ 1. The relevant gap is ℰ; both bright
/// states give the same magnitude.
pub fn adiabaticity_general(c: CouplingPair, dc: CouplingRates) -> Result<f64, Error> {
    let gap = c.energy_gap();
    if gap == 0.0 {
        return Err(Error::DegenerateCouplings);
    }
    let numerator = (c.omega1() * dc.d_omega2 - c.omega2() * dc.d_omega1).abs();
    Ok(numerator / (SQRT_2 * gap.powi(3)))
}

/// Adiabaticity of the sin/cos schedule: π√2/(4 t_max Ω_M), independent of
/// time.
pub fn adiabaticity_sincos(t_max: f64, omega_max: f64) -> f64 {
    PI * SQRT_2 / (4.0 * t_max * omega_max)
}

/// Adiabaticity of the linear schedule at time `t`:
///
/// 𝒜(t) = 1/(4 t_max Ω_M) · [(t/t_max)² − t/t_max + 1/2]^{−3/2},
///
/// peaked at the midpoint where it reaches 2/(t_max Ω_M).
pub fn adiabaticity_linear(t: f64, t_max: f64, omega_max: f64) -> f64 {
    let u = t / t_max;
    let bracket = u * u - u + 0.5;
    bracket.powf(-1.5) / (4.0 * t_max * omega_max)
}

/// Dark-state overlap deficit 1 − |⟨D₀(a)|D₀(b)⟩|² between two coupling
/// pairs, computed numerically from the eigensystem.
///
/// This is the per-transition transfer error of a digital jump; it also
/// serves as the numeric route for schemes without a closed form.
pub fn dark_state_deficit(a: CouplingPair, b: CouplingPair) -> Result<f64, Error> {
    let da = eigensystem(a)?.d_zero;
    let db = eigensystem(b)?.d_zero;
    let overlap = da.dot(&db);
    Ok(1.0 - overlap * overlap)
}

/// Per-transition dark-state overlap error of the sin/cos digitisation:
/// η = sin²(π / 2(N−1)), the same for every step.
pub fn step_overlap_error(n_steps: usize) -> Result<f64, Error> {
    if n_steps < 2 {
        return Err(Error::TooFewSteps { n_steps, min: 2 });
    }
    let angle = PI / (2.0 * (n_steps as f64 - 1.0));
    Ok(angle.sin().powi(2))
}

/// Overlap-error budget of an `N`-step sin/cos protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    /// η, the per-transition dark-state overlap deficit.
    pub eta_step: f64,
    /// η_T = N·η, the summed error over the protocol.
    pub eta_total: f64,
    /// π²/4N, the large-N limit of η_T.
    pub eta_asymptotic: f64,
}

/// Total overlap-error estimate η_T = N sin²(π/2(N−1)) and its large-N
/// asymptote π²/4N.
///
/// The sum runs over N terms even though an N-step protocol has only N−1
/// dark-state jumps; [`total_error_transition_count`] exposes the
/// (N−1)-term alternative.
pub fn total_error_estimate(n_steps: usize) -> Result<ErrorEstimate, Error> {
    let eta_step = step_overlap_error(n_steps)?;
    Ok(ErrorEstimate {
        eta_step,
        eta_total: n_steps as f64 * eta_step,
        eta_asymptotic: PI * PI / (4.0 * n_steps as f64),
    })
}

/// Alternative error total counting the N−1 transitions actually present:
/// (N−1)·sin²(π/2(N−1)).
pub fn total_error_transition_count(n_steps: usize) -> Result<f64, Error> {
    Ok((n_steps as f64 - 1.0) * step_overlap_error(n_steps)?)
}

/// Protocol times at which uniform sin/cos evolution is the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSet {
    pub n_steps: usize,
    /// t_max values, in units of 1/Ω_M.
    pub times: Vec<f64>,
    /// Resonance index n for each time: t_max = 2nNπ/Ω_M.
    pub order: Vec<u32>,
}

/// Identity resonances t_max = 2nNπ/Ω_M for n = 1…n_max.
///
/// At each of these the per-step phase is ℰτ = 2nπ, every step unitary is
/// the identity, and so is the whole protocol — no transfer at all.
pub fn resonance_times(
    n_steps: usize,
    omega_max: f64,
    n_max: u32,
) -> Result<ResonanceSet, Error> {
    if n_steps < 3 {
        return Err(Error::TooFewSteps { n_steps, min: 3 });
    }
    if omega_max <= 0.0 || !omega_max.is_finite() {
        return Err(Error::NonPositiveOmegaMax { omega_max });
    }
    if n_max < 1 {
        return Err(Error::BadResonanceOrder);
    }
    let order: Vec<u32> = (1..=n_max).collect();
    let times = order
        .iter()
        .map(|&n| 2.0 * n as f64 * n_steps as f64 * PI / omega_max)
        .collect();
    Ok(ResonanceSet { n_steps, times, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{
        continuous_couplings, continuous_rates, digital_couplings, Scheme,
    };
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn general_formula_is_constant_for_sincos() {
        let (t_max, om) = (13.0, 0.8);
        let expected = adiabaticity_sincos(t_max, om);
        assert_abs_diff_eq!(expected, PI * SQRT_2 / (4.0 * t_max * om), epsilon = 1e-16);
        for k in 0..=100 {
            let t = t_max * k as f64 / 100.0;
            let c = continuous_couplings(Scheme::SinCos, t, t_max, om).unwrap();
            let dc = continuous_rates(Scheme::SinCos, t, t_max, om).unwrap();
            let a = adiabaticity_general(c, dc).unwrap();
            assert_relative_eq!(a, expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn general_formula_matches_linear_closed_form_at_random_points() {
        let (t_max, om) = (7.3, 1.4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let t = rng.gen_range(0.0..=t_max);
            let c = continuous_couplings(Scheme::Linear, t, t_max, om).unwrap();
            let dc = continuous_rates(Scheme::Linear, t, t_max, om).unwrap();
            let general = adiabaticity_general(c, dc).unwrap();
            let closed = adiabaticity_linear(t, t_max, om);
            assert_relative_eq!(general, closed, max_relative = 1e-12);
        }
    }

    #[test]
    fn linear_adiabaticity_profile() {
        let (t_max, om) = (10.0, 1.0);
        // Endpoint value (1/4t)·(1/2)^{-3/2} = √2/(2 t Ω).
        assert_relative_eq!(
            adiabaticity_linear(0.0, t_max, om),
            SQRT_2 / (2.0 * t_max * om),
            max_relative = 1e-15
        );
        // Midpoint maximum 2/(tΩ).
        assert_relative_eq!(
            adiabaticity_linear(t_max / 2.0, t_max, om),
            2.0 / (t_max * om),
            max_relative = 1e-15
        );
        // Symmetric about the midpoint, and maximised there.
        for k in 0..=50 {
            let t = t_max * k as f64 / 50.0;
            let a = adiabaticity_linear(t, t_max, om);
            let mirrored = adiabaticity_linear(t_max - t, t_max, om);
            assert_relative_eq!(a, mirrored, max_relative = 1e-12);
            assert!(a <= 2.0 / (t_max * om) + 1e-15);
        }
    }

    #[test]
    fn linear_peak_exceeds_sincos_at_equal_total_time() {
        // The peak decides adiabatic quality; the linear schedule's peak is
        // always above the sin/cos constant for matched t_max and Ω_M.
        let (t_max, om) = (10.0, 1.0);
        let peak = adiabaticity_linear(t_max / 2.0, t_max, om);
        assert!(peak > adiabaticity_sincos(t_max, om));
    }

    #[test]
    fn static_schedule_has_zero_adiabaticity() {
        let c = CouplingPair::new(0.4, 0.9).unwrap();
        let a = adiabaticity_general(c, CouplingRates { d_omega1: 0.0, d_omega2: 0.0 }).unwrap();
        assert_eq!(a, 0.0);
    }

    #[test]
    fn adiabaticity_rejects_degenerate_couplings() {
        let c = CouplingPair::new(0.0, 0.0).unwrap();
        let dc = CouplingRates { d_omega1: 1.0, d_omega2: 0.0 };
        assert!(matches!(
            adiabaticity_general(c, dc),
            Err(Error::DegenerateCouplings)
        ));
    }

    #[test]
    fn finite_difference_cross_check_of_rates() {
        let (t_max, om) = (9.0, 1.0);
        let h = 1e-6 * t_max;
        for &scheme in &[Scheme::SinCos, Scheme::Linear] {
            for k in 1..10 {
                let t = t_max * k as f64 / 10.0;
                let plus = continuous_couplings(scheme, t + h, t_max, om).unwrap();
                let minus = continuous_couplings(scheme, t - h, t_max, om).unwrap();
                let fd = CouplingRates {
                    d_omega1: (plus.omega1() - minus.omega1()) / (2.0 * h),
                    d_omega2: (plus.omega2() - minus.omega2()) / (2.0 * h),
                };
                let c = continuous_couplings(scheme, t, t_max, om).unwrap();
                let exact = continuous_rates(scheme, t, t_max, om).unwrap();
                let a_exact = adiabaticity_general(c, exact).unwrap();
                let a_fd = adiabaticity_general(c, fd).unwrap();
                assert_relative_eq!(a_fd, a_exact, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn overlap_error_examples() {
        assert_abs_diff_eq!(
            step_overlap_error(5).unwrap(),
            0.14644660940672624,
            epsilon = 1e-16
        );
        assert_eq!(step_overlap_error(2).unwrap(), 1.0);
        assert_abs_diff_eq!(
            step_overlap_error(45).unwrap(),
            0.0012739426948732292,
            epsilon = 1e-18
        );
        assert!(step_overlap_error(1).is_err());
    }

    #[test]
    fn overlap_error_matches_numeric_deficit_for_all_steps() {
        for n in 3..=64 {
            let eta = step_overlap_error(n).unwrap();
            for xi in 0..n - 1 {
                let a = digital_couplings(xi, n, 1.0, Scheme::SinCos).unwrap();
                let b = digital_couplings(xi + 1, n, 1.0, Scheme::SinCos).unwrap();
                let numeric = dark_state_deficit(a, b).unwrap();
                assert_abs_diff_eq!(numeric, eta, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn total_error_values() {
        let five = total_error_estimate(5).unwrap();
        assert_abs_diff_eq!(five.eta_total, 0.7322330470336312, epsilon = 1e-15);
        assert_abs_diff_eq!(five.eta_asymptotic, 0.4934802200544679, epsilon = 1e-15);

        let n45 = total_error_estimate(45).unwrap();
        assert_abs_diff_eq!(n45.eta_total, 0.05732742126929531, epsilon = 1e-15);
        assert_abs_diff_eq!(n45.eta_asymptotic, 0.05483113556160754, epsilon = 1e-15);
        assert!((n45.eta_total / n45.eta_asymptotic - 1.0).abs() < 0.05);

        let big = total_error_estimate(1_000_000).unwrap();
        assert!((big.eta_total / big.eta_asymptotic - 1.0).abs() < 1e-5);
    }

    #[test]
    fn transition_count_alternative() {
        let eta = step_overlap_error(5).unwrap();
        assert_abs_diff_eq!(
            total_error_transition_count(5).unwrap(),
            4.0 * eta,
            epsilon = 1e-16
        );
    }

    #[test]
    fn resonance_times_formula() {
        let set = resonance_times(5, 1.0, 3).unwrap();
        assert_eq!(set.order, vec![1, 2, 3]);
        assert_eq!(set.times, vec![10.0 * PI, 20.0 * PI, 30.0 * PI]);
        let n15 = resonance_times(15, 1.0, 1).unwrap();
        assert_eq!(n15.times, vec![30.0 * PI]);
        let n45 = resonance_times(45, 1.0, 2).unwrap();
        assert_eq!(n45.times[1], 180.0 * PI);
    }

    #[test]
    fn resonance_times_validation() {
        assert!(resonance_times(2, 1.0, 1).is_err());
        assert!(resonance_times(5, 0.0, 1).is_err());
        assert!(resonance_times(5, 1.0, 0).is_err());
    }
}
