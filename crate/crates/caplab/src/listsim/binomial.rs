//! Moment bounds for binomial counts with exponentially parameterized size
//! and success probability, plus a brute-force oracle.
//!
//! With N = exp(n*alpha) trials of success probability p = exp(-n*beta), the
//! bounds control the rho-th moment of the count B (the raw variant) and of
//! 1 + B (the shifted variant, which is how list sizes appear: the true
//! message plus the random number of impostors). The constant gamma depends
//! only on rho, and the case split at beta = alpha separates the regimes
//! where the expected count N*p is below or above one.

use crate::numeric::KahanSum;
use crate::SolveError;

/// Trial cap for the exact oracle.
const ORACLE_CAP: u64 = 1_000_000;

/// Which binomial moment is bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinomialVariant {
    /// E[B^rho].
    Raw,
    /// E[(1 + B)^rho].
    Shifted,
}

/// The rho-only constant `gamma = max(e^(e^rho - 1), (ceil(rho)!)^2 * ceil(rho))`.
///
/// The first term dominates for all rho above roughly 1; it overflows to
/// infinity once e^rho - 1 exceeds the exponent range (rho above roughly
/// 6.6), where the bounds become vacuous but stay valid.
pub fn binomial_gamma(rho: f64) -> f64 {
    assert!(rho > 0.0, "rho must be positive");
    let exponential_part = (rho.exp() - 1.0).exp();
    let r = rho.ceil();
    let mut factorial = 1.0f64;
    let mut i = 2.0f64;
    while i <= r {
        factorial *= i;
        i += 1.0;
    }
    exponential_part.max(factorial * factorial * r)
}

/// Closed-form upper bound on the binomial moment at N = exp(n*alpha),
/// p = exp(-n*beta).
///
/// For beta >= alpha (mean count at most one) the shifted moment is at most
/// `1 + gamma * exp(n*(alpha - beta))` and the raw moment at most
/// `gamma * exp(n*(alpha - beta))`; for beta < alpha (mean count above one)
/// both variants are at most `gamma * exp(n*rho*(alpha - beta))`.
pub fn binomial_moment_bound(
    n: u32,
    alpha: f64,
    beta: f64,
    rho: f64,
    variant: BinomialVariant,
) -> Result<f64, SolveError> {
    if !(alpha > 0.0) || !(beta >= 0.0) || !(rho > 0.0) || n == 0 {
        return Err(SolveError::InvalidArgument(format!(
            "need alpha > 0, beta >= 0, rho > 0, n >= 1; got alpha={alpha} beta={beta} rho={rho} n={n}"
        )));
    }
    let gamma = binomial_gamma(rho);
    let nf = n as f64;
    let bound = if beta >= alpha {
        let linear = gamma * (nf * (alpha - beta)).exp();
        match variant {
            BinomialVariant::Shifted => 1.0 + linear,
            BinomialVariant::Raw => linear,
        }
    } else {
        gamma * (nf * rho * (alpha - beta)).exp()
    };
    Ok(bound)
}

/// Exact binomial moment `E[(B + shift)^rho]` for B binomial with
/// `n_trials` trials and success probability `p`, by direct summation of the
/// probability mass function in log space with compensated accumulation.
pub fn binomial_moment_oracle(
    n_trials: u64,
    p: f64,
    rho: f64,
    variant: BinomialVariant,
) -> Result<f64, SolveError> {
    if !(rho > 0.0) {
        return Err(SolveError::InvalidArgument(format!(
            "rho must be positive, got {rho}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(SolveError::InvalidArgument(format!(
            "success probability must lie in [0, 1], got {p}"
        )));
    }
    if n_trials > ORACLE_CAP {
        return Err(SolveError::SizeCap {
            size: n_trials as u128,
            cap: ORACLE_CAP as u128,
        });
    }
    let shift: f64 = match variant {
        BinomialVariant::Shifted => 1.0,
        BinomialVariant::Raw => 0.0,
    };
    if p == 0.0 {
        return Ok(shift.powf(rho));
    }
    if p == 1.0 {
        return Ok((n_trials as f64 + shift).powf(rho));
    }
    let nf = n_trials as f64;
    let log_p = p.ln();
    // ln(1 - p) through ln_1p so small p keeps full precision.
    let log_q = (-p).ln_1p();
    let mut log_pmf = nf * log_q;
    let mut acc = KahanSum::new();
    for j in 0..=n_trials {
        let jf = j as f64;
        acc.add(log_pmf.exp() * (jf + shift).powf(rho));
        if j < n_trials {
            log_pmf += (nf - jf).ln() - (jf + 1.0).ln() + log_p - log_q;
        }
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::close;

    #[test]
    fn shifted_reference_point_is_exactly_three() {
        // Four fair trials: E[1 + B] = 1 + N*p = 3.
        let exact = binomial_moment_oracle(4, 0.5, 1.0, BinomialVariant::Shifted).unwrap();
        assert!(close(exact, 3.0, 1e-12));
        let alpha = 4.0f64.ln();
        let beta = 2.0f64.ln();
        let bound = binomial_moment_bound(1, alpha, beta, 1.0, BinomialVariant::Shifted).unwrap();
        let gamma = binomial_gamma(1.0);
        assert!(close(gamma, (std::f64::consts::E - 1.0).exp(), 1e-12));
        assert!(close(bound, gamma * 2.0, 1e-12));
        assert!(bound >= exact);
    }

    #[test]
    fn degenerate_success_probabilities() {
        assert_eq!(
            binomial_moment_oracle(10, 0.0, 1.5, BinomialVariant::Shifted).unwrap(),
            1.0
        );
        assert_eq!(
            binomial_moment_oracle(10, 0.0, 1.5, BinomialVariant::Raw).unwrap(),
            0.0
        );
        let raw = binomial_moment_oracle(10, 1.0, 2.0, BinomialVariant::Raw).unwrap();
        assert!(close(raw, 100.0, 1e-12));
        let shifted = binomial_moment_oracle(10, 1.0, 2.0, BinomialVariant::Shifted).unwrap();
        assert!(close(shifted, 121.0, 1e-12));
    }

    #[test]
    fn oracle_matches_moment_identities() {
        // E[B] = N*p and E[B^2] = N*p*(1-p) + (N*p)^2.
        let n = 100u64;
        let p = 0.03;
        let mean = binomial_moment_oracle(n, p, 1.0, BinomialVariant::Raw).unwrap();
        assert!(close(mean, 3.0, 1e-10));
        let second = binomial_moment_oracle(n, p, 2.0, BinomialVariant::Raw).unwrap();
        assert!(close(second, 3.0 * (1.0 - p) + 9.0, 1e-10));
    }

    #[test]
    fn gamma_takes_the_larger_branch() {
        assert!(close(binomial_gamma(0.5), (0.5f64.exp() - 1.0).exp(), 1e-12));
        // ceil(3.5) = 4: the factorial branch gives (4!)^2 * 4 = 2304, far
        // below the exponential branch.
        let g = binomial_gamma(3.5);
        assert!(close(g, (3.5f64.exp() - 1.0).exp(), 1e-6 * g));
        assert!(g > 2304.0);
        assert_eq!(binomial_gamma(8.0), f64::INFINITY);
    }

    #[test]
    fn bound_dominates_oracle_on_the_full_sweep() {
        for &big_n in &[2u64, 8, 64, 1024] {
            let alpha = (big_n as f64).ln();
            for &c in &[0.5, 1.0, 2.0] {
                let beta = c * alpha;
                let p = (-beta).exp();
                for &rho in &[0.5, 1.0, 2.0, 3.5] {
                    for variant in [BinomialVariant::Raw, BinomialVariant::Shifted] {
                        let exact = binomial_moment_oracle(big_n, p, rho, variant).unwrap();
                        let bound = binomial_moment_bound(1, alpha, beta, rho, variant).unwrap();
                        assert!(
                            bound >= exact,
                            "N={big_n} c={c} rho={rho} {variant:?}: bound {bound} < exact {exact}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn bound_is_within_the_scaling_factor_in_the_supercritical_regime() {
        // For beta < alpha the bound equals gamma * (N*p)^rho, so it can
        // exceed the exact moment by at most that factor over a trivial
        // floor of one.
        for &big_n in &[64u64, 1024] {
            let alpha = (big_n as f64).ln();
            let beta = 0.5 * alpha;
            let p = (-beta).exp();
            for &rho in &[0.5, 1.0, 2.0] {
                let exact = binomial_moment_oracle(big_n, p, rho, BinomialVariant::Raw).unwrap();
                let bound =
                    binomial_moment_bound(1, alpha, beta, rho, BinomialVariant::Raw).unwrap();
                let factor = binomial_gamma(rho) * (rho * (alpha - beta)).exp();
                assert!(bound <= factor * exact.max(1.0) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn oracle_rejects_oversized_and_invalid_input() {
        assert!(matches!(
            binomial_moment_oracle(2_000_000, 0.5, 1.0, BinomialVariant::Raw),
            Err(SolveError::SizeCap { .. })
        ));
        assert!(matches!(
            binomial_moment_oracle(10, 1.5, 1.0, BinomialVariant::Raw),
            Err(SolveError::InvalidArgument(_))
        ));
        assert!(matches!(
            binomial_moment_bound(0, 1.0, 1.0, 1.0, BinomialVariant::Raw),
            Err(SolveError::InvalidArgument(_))
        ));
    }
}
