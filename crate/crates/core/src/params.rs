//! Derived sampler constants.
//!
//! From the triple `(n, alpha, eps)` the walk sampler needs a degree
//! threshold `theta`, a walk-length bound `ell`, the layering fraction
//! `beta`, and the normalizer `rho = n * theta * (ell + 1)`. All logarithms
//! are base-2 ceilings. `theta` is rounded up to an integer via exact
//! rational arithmetic on the given `eps`, so ceiling semantics never depend
//! on floating-point rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("n must be at least 2, got {0}")]
    TooFewVertices(usize),
    #[error("alpha must be at least 1, got {0}")]
    ZeroAlpha(u64),
    #[error("eps must lie strictly inside (0, 1), got {0}")]
    EpsOutOfRange(f64),
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    debug_assert!(n >= 1);
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Constants driving one sampler configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerParams {
    pub n: usize,
    /// Arboricity bound the caller vouches for.
    pub alpha: u64,
    /// Target pointwise closeness.
    pub eps: f64,
    /// Degree threshold `ceil(4 * alpha * ceil(log2 n) / eps)`.
    pub theta: u64,
    /// Layering fraction `eps / (2 * ceil(log2 n))`; analysis-side only.
    pub beta: f64,
    /// Walk-length bound `ceil(log2 n)`.
    pub ell: u32,
    /// Normalizer `n * theta * (ell + 1)`; the per-ordered-edge return
    /// probability ceiling is `1/rho`.
    pub rho: u128,
}

impl SamplerParams {
    /// Derives all constants from `(n, alpha, eps)`.
    pub fn derive(n: usize, alpha: u64, eps: f64) -> Result<SamplerParams, ParamsError> {
        if n < 2 {
            return Err(ParamsError::TooFewVertices(n));
        }
        if alpha == 0 {
            return Err(ParamsError::ZeroAlpha(alpha));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(ParamsError::EpsOutOfRange(eps));
        }
        let ell = ceil_log2(n);
        let eps_exact = BigRational::from_float(eps).expect("eps is finite");
        let numer = BigRational::from_integer(BigInt::from(4u64 * alpha * ell as u64));
        let theta_exact = numer / eps_exact;
        let theta = ratio_ceil(&theta_exact)
            .to_u64()
            .expect("theta fits in u64 at desk scale");
        let beta = eps / (2.0 * ell as f64);
        let rho = n as u128 * theta as u128 * (ell as u128 + 1);
        Ok(SamplerParams {
            n,
            alpha,
            eps,
            theta,
            beta,
            ell,
            rho,
        })
    }

    /// `eps` as the exact rational value of the stored float.
    pub fn eps_exact(&self) -> BigRational {
        BigRational::from_float(self.eps).expect("eps is finite")
    }

    /// The exact rational value of the stored `beta` float. The layering
    /// and the certificate must agree on this exact value, so both read it
    /// from here rather than re-deriving `eps / (2 * ell)`.
    pub fn beta_exact(&self) -> BigRational {
        BigRational::from_float(self.beta).expect("beta is finite")
    }

    /// `rho` as an exact rational.
    pub fn rho_exact(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.rho))
    }

    /// Default retry budget for the repeat-until-success wrapper:
    /// `100 * rho / max(1, m_hint)` with a hint, else `10^6`.
    pub fn default_max_attempts(&self, m_hint: Option<u64>) -> u64 {
        match m_hint {
            Some(m) => {
                let denom = m.max(1) as u128;
                (100 * self.rho / denom).max(1).min(u64::MAX as u128) as u64
            }
            None => 1_000_000,
        }
    }
}

/// Ceiling of a non-negative rational as a `BigInt`.
pub(crate) fn ratio_ceil(r: &BigRational) -> BigInt {
    debug_assert!(!r.is_negative());
    let (q, rem) = (r.numer() / r.denom(), r.numer() % r.denom());
    if rem == BigInt::from(0) {
        q
    } else {
        q + BigInt::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(64), 6);
        assert_eq!(ceil_log2(65), 7);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }

    #[test]
    fn derive_matches_hand_arithmetic() {
        // 4 * 2 * 10 / 0.5 = 160, exactly representable.
        let p = SamplerParams::derive(1024, 2, 0.5).unwrap();
        assert_eq!(p.theta, 160);
        assert_eq!(p.ell, 10);
        assert_eq!(p.beta, 0.025);
        assert_eq!(p.rho, 1024 * 160 * 11);
    }

    #[test]
    fn derive_two_vertex_graph() {
        let p = SamplerParams::derive(2, 1, 0.5).unwrap();
        assert_eq!(p.theta, 8);
        assert_eq!(p.ell, 1);
        assert_eq!(p.beta, 0.25);
        assert_eq!(p.rho, 32);
    }

    #[test]
    fn theta_ceiling_strictness() {
        // 4 / (1 - 1e-9) is a hair above 4, so the ceiling must be 5.
        let p = SamplerParams::derive(2, 1, 1.0 - 1e-9).unwrap();
        assert_eq!(p.theta, 5);
        // An exactly-integer quotient must NOT be bumped.
        let p = SamplerParams::derive(2, 1, 0.5).unwrap();
        assert_eq!(p.theta, 8);
    }

    #[test]
    fn theta_never_below_exact_quotient() {
        for &(n, alpha, eps) in &[(65usize, 1u64, 0.1f64), (256, 4, 0.1), (53, 1, 0.1), (4096, 8, 0.5)] {
            let p = SamplerParams::derive(n, alpha, eps).unwrap();
            let exact = 4.0 * alpha as f64 * ceil_log2(n) as f64 / eps;
            assert!(p.theta as f64 >= exact - 1e-6, "theta {} < {}", p.theta, exact);
            assert!((p.theta as f64) < exact + 1.0 + 1e-6);
        }
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(matches!(SamplerParams::derive(1, 1, 0.5), Err(ParamsError::TooFewVertices(1))));
        assert!(matches!(SamplerParams::derive(4, 0, 0.5), Err(ParamsError::ZeroAlpha(0))));
        assert!(matches!(SamplerParams::derive(4, 1, 0.0), Err(ParamsError::EpsOutOfRange(_))));
        assert!(matches!(SamplerParams::derive(4, 1, 1.0), Err(ParamsError::EpsOutOfRange(_))));
    }

    #[test]
    fn default_max_attempts_policy() {
        let p = SamplerParams::derive(2, 1, 0.5).unwrap();
        assert_eq!(p.default_max_attempts(None), 1_000_000);
        assert_eq!(p.default_max_attempts(Some(1)), 3200);
        assert_eq!(p.default_max_attempts(Some(0)), 3200);
    }
}
