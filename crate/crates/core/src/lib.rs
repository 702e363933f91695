//! Numerical side of the toolkit: the mollified-moment main-term functional
//! and its zero-counting bound, deterministic quadrature, the (Υ, c̃)
//! optimizer, a synthetic-function check of the kernel-weighted zero-counting
//! identity, and the integer/special-function kernels (Kloosterman and
//! Ramanujan sums, Bessel J, the truncated trace-formula operator).

pub mod kernels;
pub mod moment;
pub mod optimizer;
pub mod quadrature;
pub mod selberg;

pub use kernels::{
    bessel_j, delta_operator, kloosterman, ramanujan, weil_check, KernelError,
    TruncationCertificate,
};
pub use moment::{
    eval_v, eval_v_limit, i_alpha_beta_closed, i_alpha_beta_quadrature, j1, j2, log_v,
    long_range_main, zero_bound, BoundResult, BoxParams, IntegralParams, MollifierPolynomial,
    MomentError, MomentParams, SignPair,
};
pub use optimizer::{evaluate_at_theta, optimize, OptimizationResult, SearchSpace};
pub use quadrature::{
    integrate_finite, integrate_semi_infinite, sinc, sinhc, QuadratureError, QuadratureSpec,
    TailEnvelope,
};
pub use selberg::{
    selberg_lhs, selberg_rhs, zero_config_lower_bound, SelbergError, SyntheticFunction, ZeroBox,
};
