//! Integer-arithmetic and special-function kernels: Kloosterman and Ramanujan
//! sums, the Weil-bound check, Bessel J of integer order, and the truncated
//! trace-formula operator Δ_N with a certified truncation error.

use mollify_exact::rational::Rational;
use num::{BigRational, FromPrimitive, Signed, ToPrimitive};
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("tail certificate cannot reach {tol} within {terms} terms (bound {reached})")]
    NoConvergence { tol: f64, terms: u64, reached: f64 },
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Inverse of a modulo c (gcd(a, c) = 1), by the extended Euclid algorithm.
fn mod_inverse(a: u64, c: u64) -> Option<u64> {
    if c == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % c as i128, c as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(c as i128) as u64)
}

/// S(m,n;c) = Σ_{x mod c, (x,c)=1} e((mx + nx̄)/c), real by the x ↔ −x pairing;
/// computed as a cosine sum in double precision.
pub fn kloosterman(m: u64, n: u64, c: u64) -> f64 {
    assert!(c >= 1);
    if c == 1 {
        return 1.0;
    }
    let mut sum = 0.0f64;
    for x in 1..c {
        if let Some(xinv) = mod_inverse(x, c) {
            let phase = ((m as u128 * x as u128 + n as u128 * xinv as u128) % c as u128) as f64;
            sum += (2.0 * PI * phase / c as f64).cos();
        }
    }
    sum
}

/// Complex-sum cross check: returns (real part, imaginary residue).
pub fn kloosterman_complex(m: u64, n: u64, c: u64) -> (f64, f64) {
    assert!(c >= 1);
    if c == 1 {
        return (1.0, 0.0);
    }
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for x in 1..c {
        if let Some(xinv) = mod_inverse(x, c) {
            let phase = ((m as u128 * x as u128 + n as u128 * xinv as u128) % c as u128) as f64;
            let theta = 2.0 * PI * phase / c as f64;
            re += theta.cos();
            im += theta.sin();
        }
    }
    (re, im)
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let snapshot = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(snapshot.iter().map(|d| d * pk));
        }
    }
    out
}

/// Ramanujan sum r(n;c) = Σ_{d | gcd(n,c)} d·μ(c/d); r(0;c) = φ(c).
pub fn ramanujan(n: u64, c: u64) -> i64 {
    assert!(c >= 1);
    let g = if n == 0 { c } else { gcd(n, c) };
    divisors(g)
        .into_iter()
        .map(|d| d as i64 * mobius(c / d))
        .sum()
}

/// Weil's bound |S(m,n;c)| ≤ τ(c)·gcd(m,n,c)^{1/2}·√c, with 1e−9 slack.
pub fn weil_check(m: u64, n: u64, c: u64) -> bool {
    let s = kloosterman(m, n, c);
    let rhs = divisor_count(c) as f64 * (gcd(gcd(m, n), c) as f64).sqrt() * (c as f64).sqrt();
    s.abs() <= rhs + 1e-9
}

// ---------------------------------------------------------------------------
// Bessel J
// ---------------------------------------------------------------------------

/// Ascending series in f64; fine while intermediate terms stay small
/// (x ≤ 8 keeps the cancellation below a couple of digits).
fn bessel_series_f64(k: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut log_t0 = k as f64 * half.ln();
    for j in 1..=k {
        log_t0 -= (j as f64).ln();
    }
    let mut term = log_t0.exp();
    let q = half * half;
    let mut sum = term;
    for m in 1..200u32 {
        term *= -q / (m as f64 * (m + k) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    sum
}

/// Ascending series with exact rational term staging: the alternating sum is
/// carried in arbitrary-precision rationals (x enters exactly as a dyadic),
/// so the cancellation that destroys f64 at moderate x costs nothing; the
/// only rounding is the final conversion.
fn bessel_series_exact(k: u32, x: f64) -> f64 {
    let half = BigRational::from_f64(0.5 * x).expect("finite x");
    let q = &half * &half;
    let mut term = num::pow::pow(half, k as usize);
    for j in 1..=k as i64 {
        term /= Rational::from_integer(j.into());
    }
    let mut sum = term.clone();
    let mut m: i64 = 1;
    loop {
        term = -term * &q / Rational::from_integer((m * (m + k as i64)).into());
        sum += &term;
        // stop once the term is far below the final double-precision ulp
        let small = term.abs().to_f64().map(|t| t < 1e-25).unwrap_or(false);
        if small || m > 400 {
            break;
        }
        m += 1;
    }
    mollify_exact::rational::to_f64(&sum)
}

/// Backward (Miller) recurrence normalized by J₀ + 2Σ J_{2m} = 1; the branch
/// for large arguments.
fn bessel_backward(k: u32, x: f64) -> f64 {
    let start = {
        let base = x.ceil().max(k as f64) as usize;
        base + 40 + (2.0 * x.sqrt()) as usize
    };
    let mut fp1 = 0.0f64; // f_{m+1}
    let mut f = 1e-300f64; // f_m
    let mut target = 0.0f64;
    let mut norm = 0.0f64;
    for m in (0..=start).rev() {
        let fm1 = (2.0 * (m as f64 + 1.0) / x) * f - fp1; // f_{m-1}... downward step
        fp1 = f;
        f = fm1;
        if m == k as usize {
            target = f;
        }
        if m % 2 == 0 && m > 0 {
            norm += 2.0 * f;
        }
        if f.abs() > 1e260 {
            // rescale everything carried so far
            let s = 1e-260;
            f *= s;
            fp1 *= s;
            target *= s;
            norm *= s;
        }
    }
    norm += f; // J_0 contribution
    target / norm
}

/// J_k(x) for integer k ≥ 0 and x ≥ 0: f64 series for small x, exact-rational
/// series up to the stability switch max(12, 2k), Miller recurrence beyond.
pub fn bessel_j(k: u32, x: f64) -> f64 {
    assert!(k <= 64, "order guard");
    assert!((0.0..=1e6).contains(&x), "argument guard");
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let switch = 12.0f64.max(2.0 * k as f64);
    if x <= 8.0 {
        bessel_series_f64(k, x)
    } else if x <= switch {
        bessel_series_exact(k, x)
    } else {
        bessel_backward(k, x)
    }
}

// ---------------------------------------------------------------------------
// Truncated trace-formula operator
// ---------------------------------------------------------------------------

/// Result of the certified c-sum truncation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TruncationCertificate {
    pub value: f64,
    /// Largest modulus actually summed (0 when the certificate killed the
    /// whole series before the first term).
    pub truncation_point: u64,
    /// Rigorous bound on everything beyond `truncation_point`.
    pub certified_tail: f64,
}

/// Δ_N(m,n) = δ_{m=n} + (2π/i^k) Σ_{c ≡ 0 (N)} S(m,n;c)/c · J_{k−1}(4π√(mn)/c),
/// summed until the closed-form Weil × Bessel-envelope tail drops below `tol`.
/// The envelope is |J_n(y)| ≤ (y/2)^n/n! · e^{y²/(4(n+1))}, a term-wise bound
/// on the ascending series valid for every y ≥ 0.
pub fn delta_operator(
    n_level: u64,
    m: u64,
    n: u64,
    k_weight: u32,
    tol: f64,
) -> Result<TruncationCertificate, KernelError> {
    assert!(n_level >= 1 && m >= 1 && n >= 1);
    assert!(
        k_weight >= 4 && k_weight.is_multiple_of(2),
        "even weight >= 4"
    );
    assert!(tol > 0.0);
    let kb = k_weight - 1;
    let sqrt_mn = ((m as f64) * (n as f64)).sqrt();
    let sign = if (k_weight / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let factor = 2.0 * PI * sign;
    let g0 = (gcd(m, n) as f64).sqrt();
    let tau_n = divisor_count(n_level) as f64;
    let nf = n_level as f64;

    // tail over c = jN for j > big_j: per-term Weil x envelope bound with
    // tau(jN) <= 2 sqrt(j) tau(N), gives a constant times j^-(k-1)
    let tail_bound = |big_j: u64| -> f64 {
        let y_next = 4.0 * PI * sqrt_mn / (nf * (big_j as f64 + 1.0));
        let mut log_c = (kb as f64) * (2.0 * PI * sqrt_mn / nf).ln();
        for j in 1..=kb as u64 {
            log_c -= (j as f64).ln();
        }
        let base = 2.0 * PI * 2.0 * tau_n * g0 / nf.sqrt()
            * (log_c + y_next * y_next / (4.0 * (kb as f64 + 1.0))).exp();
        let zeta_like = if big_j == 0 {
            1.0 + 1.0 / (kb as f64 - 1.0)
        } else {
            (big_j as f64).powi(-(kb as i32 - 1)) / (kb as f64 - 1.0)
        };
        base * zeta_like
    };

    let mut value = if m == n { 1.0 } else { 0.0 };
    let mut j: u64 = 0;
    loop {
        let tail = tail_bound(j);
        if tail < tol {
            return Ok(TruncationCertificate {
                value,
                truncation_point: j * n_level,
                certified_tail: tail,
            });
        }
        if j >= 10_000_000 {
            return Err(KernelError::NoConvergence {
                tol,
                terms: j,
                reached: tail,
            });
        }
        j += 1;
        let c = j * n_level;
        let y = 4.0 * PI * sqrt_mn / c as f64;
        value += factor * kloosterman(m, n, c) / c as f64 * bessel_j(kb, y);
    }
}
