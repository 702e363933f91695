//! Hecke-eigenvalue recursions and the local series S_g(a,b) =
//! Σ_k λ(p^{k+a}) λ(p^{k+b}) T^k with T = QUV, together with its certified
//! rational form. The candidate denominator is never trusted: multiplying the
//! truncated series back must kill every tail coefficient, or the computation
//! aborts.

use crate::local::PrimeClass;
use crate::poly::{LocalPolynomial, Var};
use crate::ratfn::LocalRationalFunction;
use thiserror::Error;

/// Default certification window for tail-vanishing checks.
pub const DEFAULT_ORDER: usize = 24;

/// Numerator T-degree of S_g(a,b)·D(T): the product sequence of two
/// second-order Hecke recursions satisfies the third-order recursion with
/// characteristic polynomial D from index zero on.
pub const NUMERATOR_DEGREE: usize = 2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("candidate denominator fails: T^{index} coefficient {coefficient} does not vanish")]
    DenominatorMismatch { index: usize, coefficient: String },
}

/// λ_g(p^k) as a polynomial in λ, from λ(p^{k+1}) = λ·λ(p^k) − ε_D·λ(p^{k−1}).
pub fn hecke_lambda_power(k: usize, class: PrimeClass) -> LocalPolynomial {
    assert!(k <= 64, "hecke power guard");
    let eps_d = class.eps_d();
    let mut prev = LocalPolynomial::one();
    if k == 0 {
        return prev;
    }
    let lam = LocalPolynomial::var(Var::Lambda);
    let mut cur = lam.clone();
    for _ in 1..k {
        let next = &lam * &cur - prev.scale(&crate::rational::rat(eps_d, 1));
        prev = cur;
        cur = next;
    }
    cur
}

/// A series in T truncated below `order`; coefficients are polynomials in λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<LocalPolynomial>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<LocalPolynomial>) -> Self {
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &LocalPolynomial {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[LocalPolynomial] {
        &self.coeffs
    }
}

/// S_g(a,b) = Σ_{k < order} λ(p^{k+a}) λ(p^{k+b}) T^k, exact.
pub fn s_series(a: usize, b: usize, class: PrimeClass, order: usize) -> TruncatedSeries {
    assert!(a <= 8 && b <= 8, "series shift guard");
    assert!(order >= 8, "order too small to certify anything");
    let coeffs = (0..order)
        .map(|k| &hecke_lambda_power(k + a, class) * &hecke_lambda_power(k + b, class))
        .collect();
    TruncatedSeries::new(coeffs)
}

/// The candidate denominator D(T) = (1 − ε_D T)(1 − (λ²−2ε_D)T + ε_D²T²),
/// as T-coefficients (index = power of T).
fn candidate_denominator(class: PrimeClass) -> Vec<LocalPolynomial> {
    let eps = LocalPolynomial::int(class.eps_d());
    let lam2 = LocalPolynomial::var(Var::Lambda).pow(2);
    // (1 - eps T) * (1 - (lam^2 - 2 eps) T + eps^2 T^2)
    let f1 = [LocalPolynomial::one(), -&eps];
    let f2 = [
        LocalPolynomial::one(),
        -(&lam2 - &eps - &eps),
        (&eps * &eps),
    ];
    let mut out = vec![LocalPolynomial::zero(); 4];
    for (i, a) in f1.iter().enumerate() {
        for (j, b) in f2.iter().enumerate() {
            let prod = a * b;
            out[i + j] = &out[i + j] + &prod;
        }
    }
    out
}

/// Convolves T-coefficient lists, truncated to `order`.
fn convolve(a: &[LocalPolynomial], b: &[LocalPolynomial], order: usize) -> Vec<LocalPolynomial> {
    let mut out = vec![LocalPolynomial::zero(); order];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if i + j >= order {
                break;
            }
            out[i + j] = &out[i + j] + &(ca * cb);
        }
    }
    out
}

/// Numerator coefficients of S_g(a,b)·D(T), certified: every coefficient of
/// index above [`NUMERATOR_DEGREE`] must vanish through the window.
fn certified_numerator(
    a: usize,
    b: usize,
    class: PrimeClass,
    order: usize,
) -> Result<Vec<LocalPolynomial>, SeriesError> {
    let series = s_series(a, b, class, order);
    let den = candidate_denominator(class);
    let prod = convolve(series.coeffs(), &den, order);
    for (idx, c) in prod.iter().enumerate().skip(NUMERATOR_DEGREE + 1) {
        if !c.is_zero() {
            return Err(SeriesError::DenominatorMismatch {
                index: idx,
                coefficient: c.to_string(),
            });
        }
    }
    Ok(prod.into_iter().take(NUMERATOR_DEGREE + 1).collect())
}

/// Assembles T-coefficients (λ-polynomials) into a polynomial in Q,U,V,λ.
fn t_coeffs_to_poly(coeffs: &[LocalPolynomial]) -> LocalPolynomial {
    let mut out = LocalPolynomial::zero();
    for (k, c) in coeffs.iter().enumerate() {
        out = &out + &(c * &LocalPolynomial::t_power(k as u16));
    }
    out
}

/// S_g(a,b) as a certified rational function of T and λ.
pub fn s_rational(
    a: usize,
    b: usize,
    class: PrimeClass,
) -> Result<LocalRationalFunction, SeriesError> {
    let num = certified_numerator(a, b, class, DEFAULT_ORDER)?;
    let den = candidate_denominator(class);
    Ok(LocalRationalFunction::new(
        t_coeffs_to_poly(&num),
        t_coeffs_to_poly(&den),
    ))
}

/// ν_g(p^k) = Σ_{i+j=k} U^i V^j S_g(i,j) / S_g(0,0); the common certified
/// denominator of the S-ratios cancels, leaving numerators over N_{0,0}.
pub fn nu_g(k: usize, class: PrimeClass) -> Result<LocalRationalFunction, SeriesError> {
    assert!(k <= 4, "nu_g defined for p^0..p^4");
    if k == 0 {
        return Ok(LocalRationalFunction::one());
    }
    let n00 = t_coeffs_to_poly(&certified_numerator(0, 0, class, DEFAULT_ORDER)?);
    let mut num = LocalPolynomial::zero();
    for i in 0..=k {
        let n_ab = t_coeffs_to_poly(&certified_numerator(i, k - i, class, DEFAULT_ORDER)?);
        let mono = LocalPolynomial::monomial(
            &[(Var::U, i as u16), (Var::V, (k - i) as u16)],
            crate::rational::rat(1, 1),
        );
        num = &num + &(&mono * &n_ab);
    }
    Ok(LocalRationalFunction::new(num, n00))
}

/// Re-expands a certified numerator/denominator pair as a T-series through
/// `order` (series division; the denominator has constant coefficient 1).
/// Test-side oracle for the series/rational coherence property.
pub fn expand_rational_in_t(
    a: usize,
    b: usize,
    class: PrimeClass,
    order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let num = certified_numerator(a, b, class, DEFAULT_ORDER)?;
    let den = candidate_denominator(class);
    assert!(den[0].is_one());
    let mut out: Vec<LocalPolynomial> = Vec::with_capacity(order);
    for k in 0..order {
        let mut c = if k < num.len() {
            num[k].clone()
        } else {
            LocalPolynomial::zero()
        };
        for i in 1..den.len().min(k + 1) {
            c = &c - &(&den[i] * &out[k - i]);
        }
        out.push(c);
    }
    Ok(TruncatedSeries::new(out))
}
