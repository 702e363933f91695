//! Exact-rational machinery: the exponent calculus behind the mollifier-length
//! and subconvexity constants, and a small multivariate polynomial engine used
//! to certify the local Euler-factor identities.
//!
//! Everything in this crate is exact. Floating point never decides an equality
//! here; rational functions are compared by cross-multiplication of their
//! canonical polynomial forms.

pub mod exponents;
pub mod local;
pub mod poly;
pub mod ratfn;
pub mod rational;
pub mod series;

pub use exponents::{
    alpha_prop_d, alpha_thm_b, amplifier_optimum, delta_max, kmv_effective_delta, omega,
    prop_d_effective_delta, spectral_deltas, x_amp, AffineBound, ExponentError,
};
pub use local::{
    k_local, l_one, l_tilde, l_zero, phi_local, q_local_defect, rankin_local, sym2_local,
    verify_aaa, verify_bbb, verify_local_unit, PrimeClass, VerificationReport, ZShift,
};
pub use poly::{LocalPolynomial, Var};
pub use ratfn::LocalRationalFunction;
pub use rational::{parse_rational, rat, Rational};
pub use series::{hecke_lambda_power, nu_g, s_rational, s_series, SeriesError, TruncatedSeries};
