//! Numeric verification of the kernel-weighted zero-counting identity on
//! synthetic analytic functions with a known zero set: for ψ holomorphic and
//! nonvanishing on Re(z) ≥ W, and a box W₀ ± iH, W₁ ± iH with W₀ < W < W₁,
//!
//!   4H Σ_{β+iγ ∈ box} cos(πγ/2H) sinh(π(β−W₀)/2H)
//!     = ∫_{−H}^{H} cos(πt/2H) log|ψ(W₀+it)| dt
//!     + ∫_{W₀}^{W₁} sinh(π(α−W₀)/2H) log|ψ(α+iH)ψ(α−iH)| dα
//!     − Re ∫_{−H}^{H} cos(π(W₁−W₀+it)/(2iH)) (log ψ)(W₁+it) dt.
//!
//! Only polynomial ψ (explicit zero lists with multiplicity) are supported:
//! the hypotheses are then certifiable directly from the data.

use crate::quadrature::{integrate_finite, QuadratureError, QuadratureSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SelbergError {
    #[error("a zero lies within 1e-9 of the box boundary")]
    BoundaryZero,
    #[error("zero with real part {0} violates the non-vanishing half plane Re >= {1}")]
    HalfPlaneViolation(f64, f64),
    #[error("log branch failure: factor has non-positive real part on the right edge")]
    BranchFailure,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Rectangle W₀ ± iH, W₁ ± iH, with the non-vanishing abscissa W inside.
#[derive(Debug, Clone, Copy)]
pub struct ZeroBox {
    pub w0: f64,
    pub w1: f64,
    pub h: f64,
    pub w: f64,
}

impl ZeroBox {
    pub fn new(w0: f64, w1: f64, h: f64, w: f64) -> Self {
        assert!(w0 < w && w < w1, "need W0 < W < W1");
        assert!(h > 0.0, "need H > 0");
        Self { w0, w1, h, w }
    }
}

/// ψ(s) = ∏ (s − ρ_j)^{m_j}, held as the zero list.
#[derive(Debug, Clone, Default)]
pub struct SyntheticFunction {
    zeros: Vec<(Complex64, u32)>,
}

impl SyntheticFunction {
    pub fn new(zeros: Vec<(Complex64, u32)>) -> Self {
        Self { zeros }
    }

    pub fn zeros(&self) -> &[(Complex64, u32)] {
        &self.zeros
    }

    fn log_abs(&self, s: Complex64) -> f64 {
        self.zeros
            .iter()
            .map(|&(rho, m)| m as f64 * (s - rho).norm().ln())
            .sum()
    }

    /// Σ m_j Log(s − ρ_j), each factor on the principal branch; valid when
    /// every factor keeps positive real part along the path being used.
    fn log_psi(&self, s: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .map(|&(rho, m)| (s - rho).ln() * m as f64)
            .sum()
    }

    fn check_half_plane(&self, w: f64) -> Result<(), SelbergError> {
        for &(rho, _) in &self.zeros {
            if rho.re >= w {
                return Err(SelbergError::HalfPlaneViolation(rho.re, w));
            }
        }
        Ok(())
    }

    fn inside(&self, bx: &ZeroBox, rho: Complex64) -> bool {
        rho.re > bx.w0 && rho.re < bx.w1 && rho.im.abs() < bx.h
    }

    fn near_boundary(&self, bx: &ZeroBox, rho: Complex64) -> bool {
        let eps = 1e-9;
        let re_near = (rho.re - bx.w0).abs() < eps || (rho.re - bx.w1).abs() < eps;
        let im_near = (rho.im.abs() - bx.h).abs() < eps;
        let in_band_re = rho.re > bx.w0 - eps && rho.re < bx.w1 + eps;
        let in_band_im = rho.im.abs() < bx.h + eps;
        (re_near && in_band_im) || (im_near && in_band_re)
    }
}

/// Left side: 4H Σ m · cos(πγ/2H) sinh(π(β−W₀)/2H) over zeros in the box.
pub fn selberg_lhs(f: &SyntheticFunction, bx: &ZeroBox) -> Result<f64, SelbergError> {
    let mut sum = 0.0;
    for &(rho, m) in f.zeros() {
        if f.near_boundary(bx, rho) {
            return Err(SelbergError::BoundaryZero);
        }
        if f.inside(bx, rho) {
            sum += m as f64
                * (PI * rho.im / (2.0 * bx.h)).cos()
                * (PI * (rho.re - bx.w0) / (2.0 * bx.h)).sinh();
        }
    }
    Ok(4.0 * bx.h * sum)
}

/// Right side: the three kernel-weighted boundary integrals.
pub fn selberg_rhs(
    f: &SyntheticFunction,
    bx: &ZeroBox,
    spec: &QuadratureSpec,
) -> Result<f64, SelbergError> {
    f.check_half_plane(bx.w)?;
    for &(rho, _) in f.zeros() {
        if (bx.w1 - rho.re) <= 0.0 {
            return Err(SelbergError::BranchFailure);
        }
    }
    let (h, w0, w1) = (bx.h, bx.w0, bx.w1);

    let (i1, _) = integrate_finite(
        |t| (PI * t / (2.0 * h)).cos() * f.log_abs(Complex64::new(w0, t)),
        -h,
        h,
        spec,
    )?;
    let (i2, _) = integrate_finite(
        |a| {
            (PI * (a - w0) / (2.0 * h)).sinh()
                * (f.log_abs(Complex64::new(a, h)) + f.log_abs(Complex64::new(a, -h)))
        },
        w0,
        w1,
        spec,
    )?;
    // kernel cos(pi (W1-W0+it)/(2iH)) = cos(pi t/(2H) - i pi (W1-W0)/(2H))
    let (i3, _) = integrate_finite(
        |t| {
            let kernel = Complex64::new(PI * t / (2.0 * h), -PI * (w1 - w0) / (2.0 * h)).cos();
            (kernel * f.log_psi(Complex64::new(w1, t))).re
        },
        -h,
        h,
        spec,
    )?;
    Ok(i1 + i2 - i3)
}

/// A center zero of order 2n₁ plus the supplied real zeros (each paired with
/// its mirror about the W abscissa when the mirror lands inside the box).
/// Returns the computed left side and the unit threshold 8b·sinh(πc/2b) in
/// the box's (b, c) = (H, W−W₀) variables.
pub fn zero_config_lower_bound(
    n1: u32,
    real_zeros: &[f64],
    bx: &ZeroBox,
) -> Result<(f64, f64), SelbergError> {
    let mut zeros: Vec<(Complex64, u32)> = Vec::new();
    if n1 > 0 {
        zeros.push((Complex64::new(bx.w, 0.0), 2 * n1));
    }
    for &beta in real_zeros {
        assert!(beta > bx.w0 && beta < bx.w1, "real zero outside the box");
        zeros.push((Complex64::new(beta, 0.0), 1));
        let mirror = 2.0 * bx.w - beta;
        if mirror > bx.w0 && mirror < bx.w1 {
            zeros.push((Complex64::new(mirror, 0.0), 1));
        }
    }
    let lhs = selberg_lhs(&SyntheticFunction::new(zeros), bx)?;
    let b = bx.h;
    let c = bx.w - bx.w0;
    let threshold = 8.0 * b * (PI * c / (2.0 * b)).sinh();
    Ok((lhs, threshold))
}

/// Seeded random polynomial/box cases for the identity check: boxes with
/// moderate aspect, up to five zeros, all at margin ≥ 0.1 from the boundary
/// and strictly left of W.
pub fn random_cases(seed: u64, count: usize) -> Vec<(SyntheticFunction, ZeroBox)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let w0: f64 = rng.gen_range(-1.0..0.0);
        let width: f64 = rng.gen_range(1.0..3.0);
        let w1 = w0 + width;
        let h = rng.gen_range(0.6..2.0);
        let w = w1 - rng.gen_range(0.2..0.5 * width.min(1.5));
        let bx = ZeroBox::new(w0, w1, h, w);
        let n_zeros = rng.gen_range(1..=5);
        let mut zeros = Vec::new();
        for _ in 0..n_zeros {
            // half inside the box, half to the left of it
            if rng.gen_bool(0.5) && w - 0.1 > w0 + 0.1 {
                let re = rng.gen_range((w0 + 0.1)..(w - 0.1));
                let im = rng.gen_range((-h + 0.1)..(h - 0.1));
                zeros.push((Complex64::new(re, im), rng.gen_range(1..=2)));
            } else {
                let re = w0 - rng.gen_range(0.2..1.5);
                let im = rng.gen_range(-2.0 * h..2.0 * h);
                zeros.push((Complex64::new(re, im), 1));
            }
        }
        out.push((SyntheticFunction::new(zeros), bx));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::new(1e-11, 1e-11, 20_000)
    }

    fn unit_box() -> ZeroBox {
        ZeroBox::new(0.0, 2.0, 1.0, 1.5)
    }

    #[test]
    fn lhs_empty_and_center() {
        let bx = unit_box();
        assert_eq!(
            selberg_lhs(&SyntheticFunction::default(), &bx).unwrap(),
            0.0
        );
        // one simple zero at the box center (W0+W1)/2 on the real axis
        let f = SyntheticFunction::new(vec![(Complex64::new(1.0, 0.0), 1)]);
        let expect = 4.0 * bx.h * (PI * (1.0 - bx.w0) / (2.0 * bx.h)).sinh();
        assert!((selberg_lhs(&f, &bx).unwrap() - expect).abs() < 1e-14);
        // double zero doubles it
        let f2 = SyntheticFunction::new(vec![(Complex64::new(1.0, 0.0), 2)]);
        assert!((selberg_lhs(&f2, &bx).unwrap() - 2.0 * expect).abs() < 1e-13);
    }

    #[test]
    fn boundary_zero_rejected() {
        let bx = unit_box();
        let f = SyntheticFunction::new(vec![(Complex64::new(2.0 + 1e-12, 0.3), 1)]);
        assert!(matches!(
            selberg_lhs(&f, &bx),
            Err(SelbergError::BoundaryZero)
        ));
    }

    #[test]
    fn rhs_trivial_and_single_zero() {
        let bx = unit_box();
        // psi = 1: all three integrands vanish
        let rhs = selberg_rhs(&SyntheticFunction::default(), &bx, &spec()).unwrap();
        assert!(rhs.abs() < 1e-12);
        // zero inside the box: identity against lhs
        let f = SyntheticFunction::new(vec![(Complex64::new(0.8, 0.2), 1)]);
        let lhs = selberg_lhs(&f, &bx).unwrap();
        let rhs = selberg_rhs(&f, &bx, &spec()).unwrap();
        assert!(
            (lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()),
            "{lhs} vs {rhs}"
        );
        // zero left of the box: lhs = 0 and rhs = 0
        let g = SyntheticFunction::new(vec![(Complex64::new(-0.7, 0.4), 1)]);
        assert_eq!(selberg_lhs(&g, &bx).unwrap(), 0.0);
        assert!(selberg_rhs(&g, &bx, &spec()).unwrap().abs() < 1e-8);
    }

    #[test]
    fn half_plane_violation_rejected() {
        let bx = unit_box();
        let f = SyntheticFunction::new(vec![(Complex64::new(1.8, 0.1), 1)]);
        assert!(matches!(
            selberg_rhs(&f, &bx, &spec()),
            Err(SelbergError::HalfPlaneViolation(..))
        ));
    }

    #[test]
    fn identity_on_seeded_cases() {
        for (i, (f, bx)) in random_cases(20_260_810, 20).iter().enumerate() {
            let lhs = selberg_lhs(f, bx).unwrap();
            let rhs = selberg_rhs(f, bx, &spec()).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()),
                "case {i}: lhs {lhs} rhs {rhs}"
            );
        }
    }

    #[test]
    fn additivity_of_rhs() {
        let bx = unit_box();
        let f = SyntheticFunction::new(vec![(Complex64::new(0.5, 0.3), 1)]);
        let g = SyntheticFunction::new(vec![(Complex64::new(1.0, -0.4), 2)]);
        let fg = SyntheticFunction::new(f.zeros().iter().chain(g.zeros()).copied().collect());
        let sum = selberg_rhs(&f, &bx, &spec()).unwrap() + selberg_rhs(&g, &bx, &spec()).unwrap();
        let joint = selberg_rhs(&fg, &bx, &spec()).unwrap();
        assert!((sum - joint).abs() < 2e-8, "{sum} vs {joint}");
    }

    #[test]
    fn monotone_repulsion_in_beta() {
        let bx = unit_box();
        let mut last = -1.0;
        for i in 0..50 {
            let beta = bx.w0 + 0.02 + (bx.w1 - bx.w0 - 0.04) * i as f64 / 49.0;
            let f = SyntheticFunction::new(vec![(Complex64::new(beta, 0.0), 1)]);
            let lhs = selberg_lhs(&f, &bx).unwrap();
            assert!(lhs > last, "beta {beta}");
            last = lhs;
        }
    }

    #[test]
    fn config_lower_bound_worked_examples() {
        let bx = unit_box();
        // order-2 zero at the W abscissa: exactly one threshold unit
        let (lhs, unit) = zero_config_lower_bound(1, &[], &bx).unwrap();
        assert!((lhs / unit - 1.0).abs() < 1e-12);
        // one real zero at W: the mirror doubles it to one unit
        let (lhs, unit) = zero_config_lower_bound(0, &[bx.w], &bx).unwrap();
        assert!((lhs / unit - 1.0).abs() < 1e-12);
        // empty configuration
        let (lhs, _) = zero_config_lower_bound(0, &[], &bx).unwrap();
        assert_eq!(lhs, 0.0);
    }

    #[test]
    fn config_lower_bound_invariant() {
        let bx = unit_box();
        for (n1, zeros) in [
            (1u32, vec![]),
            (0, vec![1.6]),
            (2, vec![1.55, 1.9]),
            (0, vec![1.52, 1.7, 1.95]),
        ] {
            let (lhs, unit) = zero_config_lower_bound(n1, &zeros, &bx).unwrap();
            let expect = (n1 as usize + zeros.len()) as f64;
            assert!(
                lhs >= expect * unit - 1e-9,
                "n1={n1} zeros={zeros:?}: {lhs} < {expect} x {unit}"
            );
        }
    }

    #[test]
    fn kernel_properties_on_samples() {
        // k(s) = cos(pi (s - W0)/(2iH)): purely imaginary on Im(s) = H with
        // k(s) = -k(conj(s)), and Re(k) >= 0 inside the box
        let bx = unit_box();
        let k = |s: Complex64| {
            ((s - Complex64::new(bx.w0, 0.0)) * PI / (Complex64::new(0.0, 2.0 * bx.h))).cos()
        };
        for i in 0..20 {
            let x = bx.w0 + (bx.w1 - bx.w0) * i as f64 / 19.0;
            let top = k(Complex64::new(x, bx.h));
            assert!(top.re.abs() < 1e-12, "not imaginary at {x}");
            let bottom = k(Complex64::new(x, -bx.h));
            assert!((top + bottom).norm() < 1e-12, "k(s) != -k(conj s) at {x}");
            for j in 0..10 {
                let y = -bx.h + 2.0 * bx.h * j as f64 / 9.0;
                assert!(k(Complex64::new(x, y)).re >= -1e-12, "Re k < 0 at {x},{y}");
            }
        }
    }
}
