//! Search over (Υ, c̃) minimizing the zero-counting bound at fixed θ: a coarse
//! deterministic grid scan followed by a fixed-shape Nelder–Mead polish from
//! the grid argmin. Grid evaluations may fan out across threads; the reduction
//! merges by grid index, so results do not depend on scheduling.

use crate::moment::{zero_bound, BoundResult, MomentError};
use mollify_exact::exponents::delta_max;
use mollify_exact::rational::{to_f64, Rational};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct SearchSpace {
    pub upsilon_range: (f64, f64),
    pub c_range: (f64, f64),
    pub grid: (usize, usize),
    pub polish_iterations: usize,
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self {
            upsilon_range: (0.30, 0.60),
            c_range: (10.0, 40.0),
            grid: (24, 24),
            polish_iterations: 60,
        }
    }
}

impl SearchSpace {
    pub fn validate(&self) -> Result<(), MomentError> {
        let ok = self.upsilon_range.0 < self.upsilon_range.1
            && self.upsilon_range.0 > 0.0
            && self.upsilon_range.1 < 1.0
            && self.c_range.0 < self.c_range.1
            && self.c_range.0 > 0.0
            && self.c_range.1 <= 200.0
            && self.grid.0 >= 2
            && self.grid.1 >= 2;
        if ok {
            Ok(())
        } else {
            Err(MomentError::InvalidParams("invalid search space".into()))
        }
    }

    fn clamp(&self, p: (f64, f64)) -> (f64, f64) {
        (
            p.0.clamp(self.upsilon_range.0, self.upsilon_range.1),
            p.1.clamp(self.c_range.0, self.c_range.1),
        )
    }

    pub fn grid_points(&self) -> Vec<(f64, f64)> {
        let (nu, nc) = self.grid;
        let mut pts = Vec::with_capacity(nu * nc);
        for i in 0..nu {
            let ups = self.upsilon_range.0
                + (self.upsilon_range.1 - self.upsilon_range.0) * i as f64 / (nu - 1) as f64;
            for j in 0..nc {
                let c =
                    self.c_range.0 + (self.c_range.1 - self.c_range.0) * j as f64 / (nc - 1) as f64;
                pts.push((ups, c));
            }
        }
        pts
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizationResult {
    pub best_upsilon: f64,
    pub best_c_tilde: f64,
    pub result: BoundResult,
    pub evaluations: u64,
    /// Best-so-far bound after the grid stage and after each polish step.
    pub trace: Vec<f64>,
}

/// The headline evaluation at fixed θ: Δ = Δ_max(θ) − guard, then the
/// zero-counting bound at (Υ, c̃).
pub fn evaluate_at_theta(
    theta: &Rational,
    upsilon: f64,
    c_tilde: f64,
    guard: f64,
) -> Result<BoundResult, MomentError> {
    let dmax = delta_max(theta).map_err(|e| MomentError::InvalidParams(e.to_string()))?;
    let delta = to_f64(&dmax) - guard;
    zero_bound(upsilon, c_tilde, delta, guard)
}

/// Grid scan then deterministic Nelder–Mead polish. Returns the best point
/// seen anywhere, so the result dominates every grid evaluation.
pub fn optimize(
    theta: &Rational,
    space: &SearchSpace,
    guard: f64,
) -> Result<OptimizationResult, MomentError> {
    space.validate()?;
    let dmax = delta_max(theta).map_err(|e| MomentError::InvalidParams(e.to_string()))?;
    let delta = to_f64(&dmax) - guard;

    let objective =
        |p: (f64, f64)| -> Option<BoundResult> { zero_bound(p.0, p.1, delta, guard).ok() };

    let points = space.grid_points();
    // parallel map over indices; merge is by index, independent of schedule
    let scanned: Vec<Option<BoundResult>> = points.par_iter().map(|&p| objective(p)).collect();
    let mut evaluations = points.len() as u64;

    let mut best: Option<((f64, f64), BoundResult)> = None;
    for (p, r) in points.iter().zip(scanned.iter()) {
        if let Some(r) = r {
            let better = best
                .as_ref()
                .map(|(_, b)| r.bound < b.bound)
                .unwrap_or(true);
            if better {
                best = Some((*p, *r));
            }
        }
    }
    let (mut best_p, mut best_r) =
        best.ok_or_else(|| MomentError::InvalidParams("no feasible grid point".into()))?;
    let mut trace = vec![best_r.bound];

    // fixed-shape simplex from the grid argmin: steps of 5% of each range
    let du = 0.05 * (space.upsilon_range.1 - space.upsilon_range.0);
    let dc = 0.05 * (space.c_range.1 - space.c_range.0);
    let mut simplex: Vec<((f64, f64), BoundResult)> = Vec::with_capacity(3);
    simplex.push((best_p, best_r));
    for vertex in [
        space.clamp((best_p.0 + du, best_p.1)),
        space.clamp((best_p.0, best_p.1 + dc)),
    ] {
        let r = objective(vertex)
            .ok_or_else(|| MomentError::InvalidParams("simplex vertex infeasible".into()))?;
        evaluations += 1;
        simplex.push((vertex, r));
    }

    let eval_tracked = |p: (f64, f64), evals: &mut u64| -> Option<BoundResult> {
        *evals += 1;
        objective(p)
    };

    for _ in 0..space.polish_iterations {
        simplex.sort_by(|a, b| a.1.bound.total_cmp(&b.1.bound));
        let (pb, rb) = simplex[0];
        let (pw, rw) = simplex[2];
        let rs = simplex[1].1;
        let centroid = (
            0.5 * (simplex[0].0 .0 + simplex[1].0 .0),
            0.5 * (simplex[0].0 .1 + simplex[1].0 .1),
        );
        let reflect = space.clamp((
            centroid.0 + (centroid.0 - pw.0),
            centroid.1 + (centroid.1 - pw.1),
        ));
        let fr = eval_tracked(reflect, &mut evaluations);
        let mut replaced = false;
        if let Some(fr) = fr {
            if fr.bound < rb.bound {
                // try expansion
                let expand = space.clamp((
                    centroid.0 + 2.0 * (centroid.0 - pw.0),
                    centroid.1 + 2.0 * (centroid.1 - pw.1),
                ));
                let fe = eval_tracked(expand, &mut evaluations);
                if let Some(fe) = fe {
                    if fe.bound < fr.bound {
                        simplex[2] = (expand, fe);
                    } else {
                        simplex[2] = (reflect, fr);
                    }
                } else {
                    simplex[2] = (reflect, fr);
                }
                replaced = true;
            } else if fr.bound < rs.bound {
                simplex[2] = (reflect, fr);
                replaced = true;
            }
        }
        if !replaced {
            // contraction toward the centroid
            let contract = space.clamp((
                centroid.0 + 0.5 * (pw.0 - centroid.0),
                centroid.1 + 0.5 * (pw.1 - centroid.1),
            ));
            let fc = eval_tracked(contract, &mut evaluations);
            match fc {
                Some(fc) if fc.bound < rw.bound => simplex[2] = (contract, fc),
                _ => {
                    // shrink toward the best vertex
                    for vertex in simplex.iter_mut().skip(1) {
                        let p = space.clamp((
                            pb.0 + 0.5 * (vertex.0 .0 - pb.0),
                            pb.1 + 0.5 * (vertex.0 .1 - pb.1),
                        ));
                        if let Some(r) = eval_tracked(p, &mut evaluations) {
                            *vertex = (p, r);
                        }
                    }
                }
            }
        }
        for (p, r) in &simplex {
            if r.bound < best_r.bound {
                best_r = *r;
                best_p = *p;
            }
        }
        trace.push(best_r.bound);
    }

    Ok(OptimizationResult {
        best_upsilon: best_p.0,
        best_c_tilde: best_p.1,
        result: best_r,
        evaluations,
        trace,
    })
}
