//! Exponent calculus: every mollifier-length and subconvexity exponent as an
//! exact function of the Hecke-parameter bound θ, recomputed from its defining
//! expression rather than quoted.
//!
//! θ lives in [0, 1/2]; the closed right endpoint is admitted because each
//! formula degenerates gracefully there (the 1−2θ numerators vanish).

use crate::rational::{rat, Rational};
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExponentError {
    #[error("theta = {0} outside [0, 1/2]")]
    ThetaOutOfRange(String),
    #[error("alpha = {0} outside (1/2 + theta, 1)")]
    AlphaOutOfRange(String),
    #[error("affine bounds fail to bracket a minimum")]
    InfeasibleCrossing,
}

fn check_theta(theta: &Rational) -> Result<(), ExponentError> {
    if *theta < Rational::zero() || *theta > rat(1, 2) {
        return Err(ExponentError::ThetaOutOfRange(theta.to_string()));
    }
    Ok(())
}

/// Best effective mollifier length: Δ_max(θ) = (1−2θ) / (4(5+2θ)).
pub fn delta_max(theta: &Rational) -> Result<Rational, ExponentError> {
    check_theta(theta)?;
    let num = Rational::one() - rat(2, 1) * theta;
    let den = rat(4, 1) * (rat(5, 1) + rat(2, 1) * theta);
    Ok(num / den)
}

/// Subconvexity saving: ω(θ) = (1−2θ) / (4(9+4θ)).
pub fn omega(theta: &Rational) -> Result<Rational, ExponentError> {
    check_theta(theta)?;
    let num = Rational::one() - rat(2, 1) * theta;
    let den = rat(4, 1) * (rat(9, 1) + rat(4, 1) * theta);
    Ok(num / den)
}

/// Effective length available from the twisted-moment error term alone,
/// Δ < inf(b₁/(4(a₁+1/2)), b₂/(4(a₂+1/2))) with the four exponent constants
/// (a₁, b₁) = (3/4, 1/12) and (a₂, b₂) = (17/8, 1/4) taken as inputs.
pub fn kmv_effective_delta() -> Rational {
    let branch = |a: Rational, b: Rational| b / (rat(4, 1) * (a + rat(1, 2)));
    let b1 = branch(rat(3, 4), rat(1, 12));
    let b2 = branch(rat(17, 8), rat(1, 4));
    b1.min(b2)
}

/// The two-branch effective length min((1−2θ)/(4(5+2θ)), (2α−1−2θ)/(2(11+2θ−4α))).
pub fn prop_d_effective_delta(
    theta: &Rational,
    alpha: &Rational,
) -> Result<Rational, ExponentError> {
    check_theta(theta)?;
    if *alpha <= rat(1, 2) + theta || *alpha >= Rational::one() {
        return Err(ExponentError::AlphaOutOfRange(alpha.to_string()));
    }
    let b1 = delta_max(theta)?;
    let num = rat(2, 1) * alpha - Rational::one() - rat(2, 1) * theta;
    let den = rat(2, 1) * (rat(11, 1) + rat(2, 1) * theta - rat(4, 1) * alpha);
    Ok(b1.min(num / den))
}

/// The equalizing choice α(θ) = 7/8 + θ/6 + θ²/6 for the two-branch length.
pub fn alpha_prop_d(theta: &Rational) -> Result<Rational, ExponentError> {
    check_theta(theta)?;
    Ok(rat(7, 8) + theta / rat(6, 1) + theta * theta / rat(6, 1))
}

/// The amplifier choice α(θ) = 19/22 + 2θ/11 + 2θ²/11.
pub fn alpha_thm_b(theta: &Rational) -> Result<Rational, ExponentError> {
    check_theta(theta)?;
    Ok(rat(19, 22) + rat(2, 11) * theta + rat(2, 11) * theta * theta)
}

/// The amplifier length exponent x = (1−2θ) / (2(9+4θ)), where L = q^{2x}.
pub fn x_amp(theta: &Rational) -> Result<Rational, ExponentError> {
    check_theta(theta)?;
    let num = Rational::one() - rat(2, 1) * theta;
    let den = rat(2, 1) * (rat(9, 1) + rat(4, 1) * theta);
    Ok(num / den)
}

/// Exponent of q as an affine function of x (with L = q^{2x}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineBound {
    pub intercept: Rational,
    pub slope: Rational,
}

impl AffineBound {
    pub fn new(intercept: Rational, slope: Rational) -> Self {
        Self { intercept, slope }
    }

    pub fn at(&self, x: &Rational) -> Rational {
        &self.intercept + &self.slope * x
    }
}

/// The three amplified-moment exponents 1−x, 1/2+θ+(8+4θ)x and
/// 3/2+θ−α+(9+2θ−4α)x with α = α(θ) from [`alpha_thm_b`].
pub fn amplifier_bounds(theta: &Rational) -> Result<[AffineBound; 3], ExponentError> {
    check_theta(theta)?;
    let alpha = alpha_thm_b(theta)?;
    let two_theta = rat(2, 1) * theta;
    Ok([
        AffineBound::new(Rational::one(), rat(-1, 1)),
        AffineBound::new(rat(1, 2) + theta, rat(8, 1) + rat(2, 1) * &two_theta),
        AffineBound::new(
            rat(3, 2) + theta - &alpha,
            rat(9, 1) + &two_theta - rat(4, 1) * &alpha,
        ),
    ])
}

/// Exact min-max over x ≥ 0 of the three amplifier exponents. Returns the
/// optimal x* together with the common exponent value, which is asserted to
/// equal 1 − 2ω(θ).
pub fn amplifier_optimum(theta: &Rational) -> Result<(Rational, Rational), ExponentError> {
    let lines = amplifier_bounds(theta)?;
    let max_at = |x: &Rational| -> Rational {
        lines
            .iter()
            .map(|l| l.at(x))
            .max()
            .expect("three lines present")
    };

    // Candidate optima: pairwise crossings with x >= 0, plus x = 0 itself
    // (the boundary case theta = 1/2, where no amplification helps).
    let mut candidates = vec![Rational::zero()];
    for i in 0..3 {
        for j in (i + 1)..3 {
            let ds = &lines[i].slope - &lines[j].slope;
            if ds.is_zero() {
                continue;
            }
            let x = (&lines[j].intercept - &lines[i].intercept) / ds;
            if x >= Rational::zero() {
                candidates.push(x);
            }
        }
    }
    let (x_star, exponent) = candidates
        .into_iter()
        .map(|x| {
            let v = max_at(&x);
            (x, v)
        })
        .min_by(|a, b| a.1.cmp(&b.1))
        .ok_or(ExponentError::InfeasibleCrossing)?;

    // The upper envelope of lines is convex piecewise-linear; the minimum is
    // bracketed only if some line decreases at 0 or all are flat at x* = 0.
    let bracketed = x_star.is_zero() || lines.iter().any(|l| l.slope < Rational::zero());
    if !bracketed {
        return Err(ExponentError::InfeasibleCrossing);
    }
    let expected = Rational::one() - rat(2, 1) * omega(theta)?;
    assert_eq!(
        exponent, expected,
        "amplifier min-max disagrees with 1-2*omega(theta)"
    );
    Ok((x_star, exponent))
}

/// The two spectral-method effective lengths: the method alone gives
/// (1−2θ)/(8(4+θ)); with averaging refinements, (1−2θ)/(4(7+2θ)).
pub fn spectral_deltas(theta: &Rational) -> Result<(Rational, Rational), ExponentError> {
    check_theta(theta)?;
    let num = Rational::one() - rat(2, 1) * theta;
    let alone = &num / (rat(8, 1) * (rat(4, 1) + theta));
    let refined = &num / (rat(4, 1) * (rat(7, 1) + rat(2, 1) * theta));
    Ok((alone, refined))
}
