//! Cross-module properties of the main-term functional and the long-range
//! integrals: grid positivity/symmetry of 𝒱, closed-form/quadrature agreement
//! over random admissible shifts with per-pair residual recording, and the
//! diagnostic consistency between 𝒱 and the long-range main term (the
//! normalization is recorded, not asserted).

use mollify_core::moment::{
    eval_v, i_alpha_beta_closed, i_alpha_beta_quadrature, long_range_main, IntegralParams,
    MollifierPolynomial, MomentParams, SignPair,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn headline_params() -> MomentParams {
    MomentParams::new(
        25.0 / 668.0 - 1e-10,
        MollifierPolynomial::default_p(0.44).unwrap(),
    )
    .unwrap()
}

#[test]
fn v_positive_and_even_on_grid() {
    let params = headline_params();
    let n = 50;
    for i in 0..n {
        for j in 0..n {
            let u = -30.0 + 60.0 * i as f64 / (n - 1) as f64;
            let v = -30.0 + 60.0 * j as f64 / (n - 1) as f64;
            if u == 0.0 && v == 0.0 {
                continue;
            }
            let val = eval_v(u, v, &params).unwrap();
            assert!(val >= 1.0, "V({u},{v}) = {val} < 1");
            let mirrored = eval_v(u, -v, &params).unwrap();
            assert_eq!(val.to_bits(), mirrored.to_bits(), "V({u},±{v})");
        }
    }
}

#[test]
fn closed_form_residuals_over_random_shifts() {
    let poly = MollifierPolynomial::default_p(0.44).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut worst = [(0.0f64, SignPair::PP); 4];
    for _ in 0..20 {
        let mu = Complex64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.5..0.5));
        if mu.norm() < 1e-3 {
            continue;
        }
        let log_l = rng.gen_range(2.0..15.0);
        let ip = IntegralParams::new(log_l, mu).unwrap();
        for (k, pair) in SignPair::ALL.into_iter().enumerate() {
            let q = i_alpha_beta_quadrature(pair, &ip, &poly).unwrap();
            let c = i_alpha_beta_closed(pair, &ip, &poly).unwrap();
            let resid = (q - c).norm() / (1.0 + c.norm());
            if resid > worst[k].0 {
                worst[k] = (resid, pair);
            }
        }
    }
    // recorded per-pair residuals; any systematic failure shows up here
    for (resid, pair) in worst {
        println!("residual[{pair:?}] = {resid:.3e}");
        assert!(resid <= 1e-9, "{pair:?} residual {resid}");
    }
}

#[test]
fn diagnostic_v_vs_long_range_normalization() {
    // u = 2 tau log q, v = 2 t log q, delta = log L / (2 log q); the identity
    // V(u,v) = 1 + normalization * (long_range_main - L^(-2tau(1-ups))) holds
    // with some q^{2tau}-type normalization. Record the fitted value.
    let poly = MollifierPolynomial::default_p(0.44).unwrap();
    let log_q = 6.0;
    let log_l = 2.0 * (25.0 / 668.0) * log_q; // delta = delta_max(7/64)
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let mu = Complex64::new(rng.gen_range(0.01..0.2), rng.gen_range(0.05..0.4));
        let ip = IntegralParams::new(log_l, mu).unwrap();
        let u = 2.0 * mu.re * log_q;
        let v = 2.0 * mu.im * log_q;
        let delta = log_l / (2.0 * log_q);
        let params =
            MomentParams::new(delta, MollifierPolynomial::default_p(0.44).unwrap()).unwrap();
        let v_val = eval_v(u, v, &params).unwrap();
        let main = long_range_main(&ip, log_q, &poly).unwrap();
        let boundary = (-2.0 * mu.re * log_l * (1.0 - poly.upsilon())).exp();
        let normalization = (v_val - 1.0) / (main - boundary);
        println!("mu = {mu}: fitted normalization = {normalization:.12} (recorded, not asserted)");
        assert!(normalization.is_finite());
    }
}

proptest! {
    #[test]
    fn sinhc_sinc_bounds_hold(x in -300.0f64..300.0) {
        prop_assert!(mollify_core::sinhc(x) >= 1.0);
        prop_assert!(mollify_core::sinc(x) <= 1.0);
    }

    #[test]
    fn quadrature_is_exact_on_low_degree_polynomials(
        coefs in proptest::array::uniform8(-3.0f64..3.0),
        a in -2.0f64..0.5,
        len in 0.1f64..3.0,
    ) {
        let b = a + len;
        let p = |x: f64| coefs.iter().enumerate().map(|(k, c)| c * x.powi(k as i32)).sum::<f64>();
        let exact = {
            let anti = |x: f64| {
                coefs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * x.powi(k as i32 + 1) / (k as f64 + 1.0))
                    .sum::<f64>()
            };
            anti(b) - anti(a)
        };
        let (got, _) = mollify_core::integrate_finite(
            p,
            a,
            b,
            &mollify_core::QuadratureSpec::default(),
        )
        .unwrap();
        prop_assert!((got - exact).abs() <= 1e-10 * (1.0 + exact.abs()));
    }

    #[test]
    fn eval_v_stays_at_least_one(u in -25.0f64..25.0, v in -25.0f64..25.0) {
        prop_assume!(u != 0.0 || v != 0.0);
        let params = headline_params();
        let val = eval_v(u, v, &params).unwrap();
        prop_assert!(val >= 1.0 - 1e-12, "V({u},{v}) = {val}");
    }
}
