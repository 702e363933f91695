//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured values at the stated tolerance. Run with
//! `cargo test --release -p mollify --test acceptance -- --nocapture`.

use mollify_core::kernels::{delta_operator, weil_check};
use mollify_core::moment::{
    eval_v, i_alpha_beta_closed, i_alpha_beta_quadrature, IntegralParams, MollifierPolynomial,
    MomentParams, SignPair,
};
use mollify_core::quadrature::QuadratureSpec;
use mollify_core::selberg::{random_cases, selberg_lhs, selberg_rhs, SyntheticFunction, ZeroBox};
use mollify_exact::exponents::{
    alpha_prop_d, amplifier_bounds, amplifier_optimum, delta_max, kmv_effective_delta, omega,
    prop_d_effective_delta, spectral_deltas, x_amp,
};
use mollify_exact::local::{q_local_defect, verify_aaa, verify_bbb, verify_local_unit, PrimeClass};
use mollify_exact::rational::{rat, Rational};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use std::time::Instant;

struct Criterion {
    id: &'static str,
    ok: bool,
    detail: String,
}

impl Criterion {
    fn report(id: &'static str, ok: bool, detail: String) -> Self {
        println!("{id} {}: {detail}", if ok { "PASS" } else { "FAIL" });
        Self { id, ok, detail }
    }

    fn assert(self) {
        assert!(self.ok, "{} failed: {}", self.id, self.detail);
    }
}

fn run_binary(args: &[&str]) -> serde_json::Value {
    let out = Command::new(env!("CARGO_BIN_EXE_mollify"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "mollify {args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn a1_headline_reproduction() {
    let start = Instant::now();
    let doc = run_binary(&[
        "optimize",
        "--theta",
        "7/64",
        "--upsilon",
        "0.44",
        "--ctilde",
        "23",
    ]);
    let elapsed = start.elapsed().as_secs_f64();
    let r = &doc["results"];
    let bound = r["bound"].as_f64().unwrap();
    let n = r["n"].as_u64().unwrap();
    let rank = r["rank_bound"].as_f64().unwrap();
    let prop = r["proportion"].as_f64().unwrap();
    // the runtime budget is for the optimized artifact
    let in_time = elapsed < 60.0 || cfg!(debug_assertions);
    let ok = (4.89..=4.93).contains(&bound)
        && n == 4
        && (9.78..=9.86).contains(&rank)
        && (0.016..=0.022).contains(&prop)
        && in_time;
    Criterion::report(
        "A1",
        ok,
        format!("bound={bound:.4} N={n} rank={rank:.4} proportion={prop:.4} in {elapsed:.2}s"),
    )
    .assert();
}

#[test]
fn a2_ramanujan_case_reproduction() {
    let doc = run_binary(&[
        "optimize",
        "--theta",
        "0",
        "--upsilon",
        "0.45",
        "--ctilde",
        "23.7",
    ]);
    let r = &doc["results"];
    let bound = r["bound"].as_f64().unwrap();
    let n = r["n"].as_u64().unwrap();
    let rank = r["rank_bound"].as_f64().unwrap();
    let prop = r["proportion"].as_f64().unwrap();
    let ok = (3.81..=3.85).contains(&bound)
        && n == 3
        && (7.62..=7.70).contains(&rank)
        && (0.035..=0.050).contains(&prop);
    Criterion::report(
        "A2",
        ok,
        format!("bound={bound:.4} N={n} rank={rank:.4} proportion={prop:.4}"),
    )
    .assert();
}

#[test]
fn a3_exact_exponent_identities() {
    let theta0 = rat(7, 64);
    let zero = rat(0, 1);
    let ok = delta_max(&theta0).unwrap() == rat(25, 668)
        && delta_max(&zero).unwrap() == rat(1, 20)
        && omega(&theta0).unwrap() == rat(25, 1208)
        && omega(&zero).unwrap() == rat(1, 36)
        && kmv_effective_delta() == rat(1, 60)
        && spectral_deltas(&zero).unwrap() == (rat(1, 32), rat(1, 28));
    Criterion::report(
        "A3",
        ok,
        "delta_max(7/64)=25/668, delta_max(0)=1/20, omega(7/64)=25/1208, omega(0)=1/36, \
         kmv=1/60, spectral(0)=(1/32,1/28), all exact"
            .into(),
    )
    .assert();
}

#[test]
fn a4_amplifier_min_max_exact() {
    let mut ok = true;
    let mut detail = String::new();
    for theta in [rat(0, 1), rat(7, 64)] {
        let (x_star, exponent) = amplifier_optimum(&theta).unwrap();
        let lines = amplifier_bounds(&theta).unwrap();
        let equalized = lines.iter().all(|l| l.at(&x_star) == exponent);
        let formula = x_star == x_amp(&theta).unwrap();
        let expected = Rational::from_integer(1.into()) - rat(2, 1) * omega(&theta).unwrap();
        ok &= equalized && formula && exponent == expected;
        detail.push_str(&format!(
            "theta={}: x*={} exponent={} equalized={equalized}; ",
            mollify_exact::rational::format_rational(&theta),
            mollify_exact::rational::format_rational(&x_star),
            mollify_exact::rational::format_rational(&exponent),
        ));
    }
    let (_, e0) = amplifier_optimum(&rat(0, 1)).unwrap();
    ok &= e0 == rat(17, 18);
    detail.push_str("theta=0 exponents all 17/18");
    Criterion::report("A4", ok, detail).assert();
}

#[test]
fn a5_prop_d_equalization_exact() {
    let mut ok = true;
    for theta in [rat(0, 1), rat(7, 64)] {
        let alpha = alpha_prop_d(&theta).unwrap();
        ok &= prop_d_effective_delta(&theta, &alpha).unwrap() == delta_max(&theta).unwrap();
    }
    Criterion::report(
        "A5",
        ok,
        "prop_d_effective_delta(theta, alpha(theta)) = delta_max(theta) at theta in {0, 7/64}"
            .into(),
    )
    .assert();
}

#[test]
fn a6_appendix_certification() {
    let aaa = verify_aaa().unwrap();
    let bbb = verify_bbb().unwrap();
    let split = verify_local_unit(PrimeClass::Split).unwrap();
    let defect = q_local_defect().unwrap();
    let q0 = defect
        .at_q_zero()
        .map(|f| f.eq_exact(&mollify_exact::ratfn::LocalRationalFunction::one()))
        .unwrap_or(false);
    // ramified runs in diagnostic mode; a failure must surface its residual
    let ram = verify_local_unit(PrimeClass::Ramified).unwrap();
    let ram_note = if ram.holds {
        "ramified chain holds".to_string()
    } else {
        format!("ramified chain residual: {}", ram.residual)
    };
    let ok = aaa.holds && bbb.holds && split.holds && q0;
    Criterion::report(
        "A6",
        ok,
        format!(
            "aaa={} bbb={} split_unit={} q_defect(Q=0)=1:{q0}; {ram_note}",
            aaa.holds, bbb.holds, split.holds
        ),
    )
    .assert();
}

#[test]
fn a7_closed_form_integral() {
    let poly = MollifierPolynomial::default_p(0.44).unwrap();
    let mus = [
        Complex64::new(0.1, 0.2),
        Complex64::new(0.15, -0.05),
        Complex64::new(0.05, 0.2),
        Complex64::new(-0.04, 0.12),
        Complex64::new(0.08, 0.31),
    ];
    let mut ok = true;
    let mut worst_pp = 0.0f64;
    for mu in mus {
        let ip = IntegralParams::new(10.0, mu).unwrap();
        let q = i_alpha_beta_quadrature(SignPair::PP, &ip, &poly).unwrap();
        let c = i_alpha_beta_closed(SignPair::PP, &ip, &poly).unwrap();
        let resid = (q - c).norm() / (1.0 + c.norm());
        worst_pp = worst_pp.max(resid);
        ok &= resid <= 1e-9;
    }
    // mandatory residual reporting for the other three pairs
    let mut pair_residuals = String::new();
    for pair in [SignPair::MP, SignPair::PM, SignPair::MM] {
        let mut worst = 0.0f64;
        for mu in mus {
            let ip = IntegralParams::new(10.0, mu).unwrap();
            let q = i_alpha_beta_quadrature(pair, &ip, &poly).unwrap();
            let c = i_alpha_beta_closed(pair, &ip, &poly).unwrap();
            worst = worst.max((q - c).norm() / (1.0 + c.norm()));
        }
        pair_residuals.push_str(&format!("{pair:?}:{worst:.2e} "));
        ok &= worst <= 1e-9;
    }
    Criterion::report(
        "A7",
        ok,
        format!("PP worst residual {worst_pp:.2e}; residuals {pair_residuals}"),
    )
    .assert();
}

#[test]
fn a8_weil_bound_exhaustive() {
    let start = Instant::now();
    let mut violations = 0u64;
    for c in 1..=300u64 {
        for m in 1..=20 {
            for n in 1..=20 {
                if !weil_check(m, n, c) {
                    violations += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let in_time = elapsed < 10.0 || cfg!(debug_assertions);
    let ok = violations == 0 && in_time;
    Criterion::report(
        "A8",
        ok,
        format!("120000 cases, {violations} violations, {elapsed:.2}s"),
    )
    .assert();
}

#[test]
fn a9_selberg_identity() {
    let spec = QuadratureSpec::new(1e-11, 1e-11, 20_000);
    let mut ok = true;
    let mut worst = 0.0f64;
    let check = |f: &SyntheticFunction, bx: &ZeroBox, worst: &mut f64, ok: &mut bool| {
        let lhs = selberg_lhs(f, bx).unwrap();
        let rhs = selberg_rhs(f, bx, &spec).unwrap();
        let resid = (lhs - rhs).abs() / (1.0 + lhs.abs());
        *worst = worst.max(resid);
        *ok &= (lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs());
    };
    let bx = ZeroBox::new(0.0, 2.0, 1.0, 1.5);
    check(&SyntheticFunction::default(), &bx, &mut worst, &mut ok);
    check(
        &SyntheticFunction::new(vec![(Complex64::new(1.0, 0.0), 1)]),
        &bx,
        &mut worst,
        &mut ok,
    );
    check(
        &SyntheticFunction::new(vec![(Complex64::new(-0.7, 0.4), 1)]),
        &bx,
        &mut worst,
        &mut ok,
    );
    for (f, bx) in random_cases(20_260_810, 20) {
        check(&f, &bx, &mut worst, &mut ok);
    }
    Criterion::report(
        "A9",
        ok,
        format!("23 cases (3 worked + 20 seeded), worst relative residual {worst:.2e}"),
    )
    .assert();
}

#[test]
fn a10_v_properties() {
    let params = MomentParams::new(
        25.0 / 668.0 - 1e-10,
        MollifierPolynomial::default_p(0.44).unwrap(),
    )
    .unwrap();
    let mut ok = true;
    let n = 200;
    for i in 0..n {
        for j in 0..n {
            let u = -30.0 + 60.0 * i as f64 / (n - 1) as f64;
            let v = -30.0 + 60.0 * j as f64 / (n - 1) as f64;
            if u == 0.0 && v == 0.0 {
                continue;
            }
            let val = eval_v(u, v, &params).unwrap();
            let mirror = eval_v(u, -v, &params).unwrap();
            ok &= val >= 1.0 && val.to_bits() == mirror.to_bits();
        }
    }
    // Simpson oracle on 10 seeded points
    let simpson = |u: f64, v: f64| -> f64 {
        let poly = &params.poly;
        let delta = params.delta;
        let ups = poly.upsilon();
        let steps = 10_000usize;
        let h = ups / steps as f64;
        let g = |x: f64| {
            let w2 = u * u + v * v;
            let p1 = poly.p1(x);
            let p2 = poly.p2(x);
            let m = p1 * p1 + p1 * p2 * u / (w2 * delta) + p2 * p2 / (4.0 * w2 * delta * delta);
            (-2.0 * u * delta * (1.0 - x)).exp() * m
        };
        let mut s = g(0.0) + g(ups);
        for i in 1..steps {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
        }
        1.0 + (-u).exp() / delta * (mollify_core::sinhc(u) - mollify_core::sinc(v)) * (s * h / 3.0)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let u: f64 = rng.gen_range(-5.0..5.0);
        let v: f64 = rng.gen_range(0.5..5.0);
        let ours = eval_v(u, v, &params).unwrap();
        let oracle = simpson(u, v);
        let resid = (ours - oracle).abs() / oracle.abs();
        worst = worst.max(resid);
        ok &= resid <= 1e-9;
    }
    Criterion::report(
        "A10",
        ok,
        format!("200x200 grid positivity+symmetry, Simpson oracle worst rel {worst:.2e}"),
    )
    .assert();
}

#[test]
fn a11_delta_operator_certificates() {
    let cert = delta_operator(1009, 1, 1, 12, 1e-8).unwrap();
    let within = (cert.value - 1.0).abs() <= cert.certified_tail;
    let small = cert.certified_tail < 1e-6;
    let rerun = delta_operator(1009, 1, 1, 12, 1e-9).unwrap();
    let stable = (rerun.value - cert.value).abs() <= cert.certified_tail;
    let ok = within && small && stable;
    Criterion::report(
        "A11",
        ok,
        format!(
            "value={} tail={:.2e} rerun within certificate: {stable}",
            cert.value, cert.certified_tail
        ),
    )
    .assert();
}
