//! Deterministic adaptive quadrature on finite and semi-infinite intervals,
//! plus the numerically delicate scalar kernels sinh(u)/u and sin(v)/v.
//!
//! The rule is nested Gauss–Kronrod 7-15 with worst-interval-first bisection
//! and a fixed tie-break, so identical inputs give bit-identical results.
//! Semi-infinite integrals truncate where a caller-certified tail envelope
//! drops below half the absolute tolerance; the envelope bound is added to
//! the reported error estimate.

use thiserror::Error;

#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Self {
        assert!(abs_tol > 0.0 && rel_tol > 0.0 && max_subdivisions >= 1);
        Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        }
    }
}

/// Certifies |f(x)| ≤ amplitude · e^(−rate·x) / x^power for x ≥ valid_from.
#[derive(Debug, Clone, Copy)]
pub struct TailEnvelope {
    pub amplitude: f64,
    pub exponential_rate: f64,
    pub polynomial_power: f64,
    pub valid_from: f64,
}

impl TailEnvelope {
    pub fn new(
        amplitude: f64,
        exponential_rate: f64,
        polynomial_power: f64,
        valid_from: f64,
    ) -> Self {
        assert!(amplitude >= 0.0 && exponential_rate >= 0.0 && polynomial_power >= 0.0);
        Self {
            amplitude,
            exponential_rate,
            polynomial_power,
            valid_from,
        }
    }

    /// Integrable tail: positive exponential rate or polynomial power > 1.
    pub fn is_integrable(&self) -> bool {
        self.exponential_rate > 0.0 || self.polynomial_power > 1.0
    }

    /// Rigorous bound on ∫_T^∞ amplitude·e^(−rate·x)/x^power dx, T ≥ valid_from:
    /// the smaller of the pure-exponential bound e^(−rT)/(r·T^p) and the
    /// pure-polynomial bound e^(−rT)·T^(1−p)/(p−1), each valid on its own.
    pub fn tail_bound(&self, t: f64) -> f64 {
        assert!(t > 0.0);
        let decay = (-self.exponential_rate * t).exp();
        let mut best = f64::INFINITY;
        if self.exponential_rate > 0.0 {
            best = best.min(decay / (self.exponential_rate * t.powf(self.polynomial_power)));
        }
        if self.polynomial_power > 1.0 {
            best = best
                .min(decay * t.powf(1.0 - self.polynomial_power) / (self.polynomial_power - 1.0));
        }
        self.amplitude * best
    }
}

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("tolerance not reached after {subdivisions} subdivisions (best value {value}, error {error_estimate})")]
    ToleranceNotReached {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },
    #[error("tail envelope is not integrable (rate {rate}, power {power})")]
    NonIntegrableTail { rate: f64, power: f64 },
}

/// Gauss–Kronrod 7-15 abscissae and weights (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_41,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 15-point Kronrod panel; returns (value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv = [[0.0f64; 2]; 7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = [f1, f2];
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j][0] - mean).abs() + (fv[j][1] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half;
    (
        res_kronrod * half,
        rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    )
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: u64,
}

/// Adaptive integral of `f` over [a, b].
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64), QuadratureError> {
    assert!(a <= b, "inverted interval");
    if a == b {
        return Ok((0.0, 0.0));
    }
    let (v, e) = gk15(&f, a, b);
    let mut segments = vec![Segment {
        a,
        b,
        value: v,
        error: e,
        seq: 0,
    }];
    let mut seq = 1u64;
    let mut subdivisions = 0usize;

    loop {
        let total_value: f64 = segments.iter().map(|s| s.value).sum();
        let total_error: f64 = segments.iter().map(|s| s.error).sum();
        if total_value.is_nan() {
            return Err(QuadratureError::ToleranceNotReached {
                value: total_value,
                error_estimate: total_error,
                subdivisions,
            });
        }
        let target = spec.abs_tol.max(spec.rel_tol * total_value.abs());
        if total_error <= target {
            return Ok((total_value, total_error));
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(QuadratureError::ToleranceNotReached {
                value: total_value,
                error_estimate: total_error,
                subdivisions,
            });
        }
        // worst segment first; tie-break on insertion order for determinism
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.error.total_cmp(&y.error).then(y.seq.cmp(&x.seq)))
            .map(|(i, _)| i)
            .expect("nonempty segment list");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval at floating-point resolution; keep it as is
            segments.push(seg);
            return Ok((
                segments.iter().map(|s| s.value).sum(),
                segments.iter().map(|s| s.error).sum(),
            ));
        }
        for (lo, hi) in [(seg.a, mid), (mid, seg.b)] {
            let (v, e) = gk15(&f, lo, hi);
            segments.push(Segment {
                a: lo,
                b: hi,
                value: v,
                error: e,
                seq,
            });
            seq += 1;
        }
        subdivisions += 1;
    }
}

/// Adaptive integral of `f` over [a, ∞), truncated where the certified
/// envelope tail drops below abs_tol/2. The tail bound is added to the
/// reported error estimate.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    env: &TailEnvelope,
    spec: &QuadratureSpec,
) -> Result<(f64, f64), QuadratureError> {
    if !env.is_integrable() {
        return Err(QuadratureError::NonIntegrableTail {
            rate: env.exponential_rate,
            power: env.polynomial_power,
        });
    }
    let mut t = env.valid_from.max(a + 1.0).max(1.0);
    let mut doublings = 0;
    while env.tail_bound(t) >= 0.5 * spec.abs_tol {
        t *= 2.0;
        doublings += 1;
        if doublings > 4000 {
            return Err(QuadratureError::NonIntegrableTail {
                rate: env.exponential_rate,
                power: env.polynomial_power,
            });
        }
    }
    let tail = env.tail_bound(t);

    // dyadic segmentation of [a, T]
    let mut cuts = vec![a];
    let mut edge = (a.abs() * 2.0).max(1.0).max(env.valid_from);
    while edge < t {
        if edge > a {
            cuts.push(edge);
        }
        edge *= 2.0;
    }
    cuts.push(t);

    let per_segment = QuadratureSpec {
        abs_tol: spec.abs_tol / (2.0 * cuts.len() as f64),
        rel_tol: spec.rel_tol,
        max_subdivisions: spec.max_subdivisions,
    };
    let mut value = 0.0;
    let mut error = tail;
    for w in cuts.windows(2) {
        let (v, e) = integrate_finite(&f, w[0], w[1], &per_segment)?;
        value += v;
        error += e;
    }
    Ok((value, error))
}

/// sinh(u)/u, with a series branch below |u| = 1e−4.
pub fn sinhc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 + u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sinh() / u
    }
}

/// sin(v)/v, with a series branch below |v| = 1e−4.
pub fn sinc(v: f64) -> f64 {
    if v.abs() < 1e-4 {
        let v2 = v * v;
        1.0 - v2 / 6.0 + v2 * v2 / 120.0
    } else {
        v.sin() / v
    }
}

/// exp(−u)·sinh(u)/u = −expm1(−2u)/(2u); stable for large positive u where
/// sinh alone overflows. Requires u > −350 or so (the caller's regime).
pub fn exp_neg_sinhc(u: f64) -> f64 {
    if u == 0.0 {
        return 1.0;
    }
    -(-2.0 * u).exp_m1() / (2.0 * u)
}
