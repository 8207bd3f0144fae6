//! Angle structures as points of an open polytope, and critical points of
//! the volume on it.

use std::f64::consts::PI;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::QuadratureOptions;
use crate::simplex::{edge_index, validate_angle_system, SimplexError};
use crate::triangulation::Triangulation;
use crate::volume::{total_gradient, total_volume, VolumeError};

const TWO_PI: f64 = 2.0 * PI;

/// Below this LP slack the polytope is treated as empty.
const MIN_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("angle structure space is empty or degenerate (max-min slack {slack})")]
    Infeasible { slack: f64 },
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("angle vector has length {actual}, expected {expected}")]
    WrongLength { expected: usize, actual: usize },
    #[error("tetrahedron {tet}: {source}")]
    NotAngled { tet: usize, source: SimplexError },
    #[error("edge {edge}: angle sum {sum} differs from 2π")]
    EdgeSum { edge: usize, sum: f64 },
    #[error("starting point is not strictly feasible")]
    NotStrictlyFeasible,
    #[error(transparent)]
    Volume(#[from] VolumeError),
}

/// A sparse linear row `Σ coeff·θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRow {
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl LinearRow {
    pub fn eval(&self, theta: &[f64]) -> f64 {
        self.terms.iter().map(|&(w, c)| c * theta[w]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.terms.iter().map(|&(_, c)| c * c).sum::<f64>().sqrt()
    }

    /// `eval − rhs`: the residual of an equality, the slack of an inequality.
    pub fn slack(&self, theta: &[f64]) -> f64 {
        self.eval(theta) - self.rhs
    }
}

/// Equalities `row = rhs` and strict inequalities `row > rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeConstraints {
    pub variables: usize,
    pub equalities: Vec<LinearRow>,
    pub inequalities: Vec<LinearRow>,
}

impl PolytopeConstraints {
    pub fn box_rows(&self) -> usize {
        2 * self.variables
    }

    /// Smallest inequality slack, unnormalized.
    pub fn min_slack(&self, theta: &[f64]) -> f64 {
        self.inequalities
            .iter()
            .map(|r| r.slack(theta))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_equality_residual(&self, theta: &[f64]) -> f64 {
        self.equalities
            .iter()
            .map(|r| r.slack(theta).abs())
            .fold(0.0, f64::max)
    }
}

/// One equality per interior edge; box rows for every wedge, then for every
/// (tetrahedron, vertex) the vertex-sum row and three triangle-inequality
/// rows.
pub fn polytope_constraints(t: &Triangulation) -> PolytopeConstraints {
    let n = t.wedge_count();
    let equalities = t
        .edge_orbits()
        .iter()
        .enumerate()
        .filter(|&(e, _)| t.edge_is_closed(e))
        .map(|(_, orbit)| LinearRow {
            terms: orbit.iter().map(|&w| (w, 1.0)).collect(),
            rhs: TWO_PI,
        })
        .collect();
    let mut inequalities = Vec::with_capacity(2 * n + 16 * t.tet_count());
    for w in 0..n {
        inequalities.push(LinearRow {
            terms: vec![(w, 1.0)],
            rhs: 0.0,
        });
        inequalities.push(LinearRow {
            terms: vec![(w, -1.0)],
            rhs: -PI,
        });
    }
    for tet in 0..t.tet_count() {
        for v in 0..4 {
            let ws: Vec<usize> = (0..4)
                .filter(|&u| u != v)
                .map(|u| 6 * tet + edge_index(v, u))
                .collect();
            inequalities.push(LinearRow {
                terms: ws.iter().map(|&w| (w, 1.0)).collect(),
                rhs: PI,
            });
            for k in 0..3 {
                inequalities.push(LinearRow {
                    terms: ws
                        .iter()
                        .enumerate()
                        .map(|(i, &w)| (w, if i == k { 1.0 } else { -1.0 }))
                        .collect(),
                    rhs: -PI,
                });
            }
        }
    }
    PolytopeConstraints {
        variables: n,
        equalities,
        inequalities,
    }
}

/// A strictly feasible assignment of angles to wedges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleStructure {
    theta: Vec<f64>,
}

/// Equality tolerance accepted for externally supplied angle vectors.
pub const EDGE_SUM_TOL: f64 = 1e-9;

impl AngleStructure {
    /// Validates every simplex and every interior edge sum.
    pub fn new(t: &Triangulation, theta: Vec<f64>) -> Result<Self, OptimizerError> {
        if theta.len() != t.wedge_count() {
            return Err(OptimizerError::WrongLength {
                expected: t.wedge_count(),
                actual: theta.len(),
            });
        }
        for (tet, c) in theta.chunks_exact(6).enumerate() {
            validate_angle_system([c[0], c[1], c[2], c[3], c[4], c[5]])
                .map_err(|source| OptimizerError::NotAngled { tet, source })?;
        }
        for (e, orbit) in t.edge_orbits().iter().enumerate() {
            if !t.edge_is_closed(e) {
                continue;
            }
            let sum: f64 = orbit.iter().map(|&w| theta[w]).sum();
            if !((sum - TWO_PI).abs() <= EDGE_SUM_TOL) {
                return Err(OptimizerError::EdgeSum { edge: e, sum });
            }
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.theta
    }
}

/// Solves `max t` subject to the equalities and `row ≥ rhs + t·‖row‖` for
/// every strict inequality. Returns the maximizer if `t* > 0`.
pub fn feasible_point(t: &Triangulation) -> Result<AngleStructure, OptimizerError> {
    let c = polytope_constraints(t);
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = (0..c.variables).map(|_| lp.add_var(0.0, (-PI, TWO_PI))).collect();
    let slack = lp.add_var(1.0, (-10.0, 10.0));
    for row in &c.equalities {
        let expr: Vec<_> = row.terms.iter().map(|&(w, k)| (vars[w], k)).collect();
        lp.add_constraint(expr, ComparisonOp::Eq, row.rhs);
    }
    for row in &c.inequalities {
        let mut expr: Vec<_> = row.terms.iter().map(|&(w, k)| (vars[w], k)).collect();
        expr.push((slack, -row.norm()));
        lp.add_constraint(expr, ComparisonOp::Ge, row.rhs);
    }
    let solution = match lp.solve() {
        Ok(outcome) => outcome
            .into_solution()
            .map_err(|_| OptimizerError::Lp("solver interrupted".into()))?,
        Err(microlp::Error::Infeasible) => {
            return Err(OptimizerError::Infeasible {
                slack: f64::NEG_INFINITY,
            })
        }
        Err(e) => return Err(OptimizerError::Lp(e.to_string())),
    };
    let t_star = solution.var_value(slack);
    if !(t_star > MIN_SLACK) {
        return Err(OptimizerError::Infeasible { slack: t_star });
    }
    let mut theta: Vec<f64> = vars.iter().map(|&v| solution.var_value(v)).collect();
    reproject(t, &mut theta);
    AngleStructure::new(t, theta)
}

/// Orthogonal projection onto the tangent space of the equalities. Edge
/// orbits are disjoint, so this subtracts the per-orbit mean.
pub fn project(t: &Triangulation, v: &mut [f64]) {
    for (e, orbit) in t.edge_orbits().iter().enumerate() {
        if t.edge_is_closed(e) {
            let mean = orbit.iter().map(|&w| v[w]).sum::<f64>() / orbit.len() as f64;
            for &w in orbit {
                v[w] -= mean;
            }
        }
    }
}

/// Nearest point of the affine equality set.
pub fn reproject(t: &Triangulation, theta: &mut [f64]) {
    for (e, orbit) in t.edge_orbits().iter().enumerate() {
        if t.edge_is_closed(e) {
            let excess = (orbit.iter().map(|&w| theta[w]).sum::<f64>() - TWO_PI) / orbit.len() as f64;
            for &w in orbit {
                theta[w] -= excess;
            }
        }
    }
}

/// The LP point, optionally moved halfway to the boundary along a random
/// tangent direction drawn from `seed`.
pub fn starting_point(t: &Triangulation, seed: Option<u64>) -> Result<AngleStructure, OptimizerError> {
    let base = feasible_point(t)?;
    let Some(seed) = seed else {
        return Ok(base);
    };
    let c = polytope_constraints(t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dir: Vec<f64> = (0..t.wedge_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
    project(t, &mut dir);
    let theta = base.theta();
    // largest s with every row slack positive along θ + s·dir
    let mut s_max = f64::INFINITY;
    for row in &c.inequalities {
        let rate = row.eval(&dir);
        if rate < 0.0 {
            s_max = s_max.min(row.slack(theta) / -rate);
        }
    }
    if !s_max.is_finite() {
        return Ok(base);
    }
    let mut out: Vec<f64> = theta.iter().zip(&dir).map(|(x, d)| x + 0.5 * s_max * d).collect();
    reproject(t, &mut out);
    AngleStructure::new(t, out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    /// Max-norm of the projected gradient at which to stop.
    pub grad_tol: f64,
    pub max_iter: usize,
    pub quadrature: QuadratureOptions,
    /// Projected-gradient max-norm below which Newton refinement is tried
    /// before an ascent step. `None` tries it at every iterate, which lets
    /// the run settle on saddle-type critical points.
    pub newton_threshold: Option<f64>,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-9,
            max_iter: 10_000,
            quadrature: QuadratureOptions::default(),
            newton_threshold: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    Start,
    Ascent,
    Newton,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub kind: StepKind,
    pub volume: f64,
    pub projected_gradient_norm: f64,
    pub min_slack: f64,
    pub equality_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub theta: AngleStructure,
    pub projected_gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The line search and the refinement both failed to make progress.
    pub stalled: bool,
    pub volume: f64,
    pub trace: Vec<TraceEntry>,
}

const ARMIJO_C: f64 = 1e-4;
const SHRINK: f64 = 0.5;
const FD_HESSIAN_STEP: f64 = 1e-6;
const BOUNDARY_SLACK: f64 = 1e-10;

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct Ascent<'a> {
    t: &'a Triangulation,
    c: PolytopeConstraints,
    opts: OptimizerOptions,
}

impl Ascent<'_> {
    fn projected_gradient(&self, theta: &[f64]) -> Result<Vec<f64>, OptimizerError> {
        let mut g = total_gradient(self.t, theta)?;
        project(self.t, &mut g);
        Ok(g)
    }

    fn volume(&self, theta: &[f64]) -> Result<f64, OptimizerError> {
        Ok(total_volume(self.t, theta, &self.opts.quadrature)?)
    }

    fn step(&self, theta: &[f64], dir: &[f64], s: f64) -> Option<Vec<f64>> {
        let mut out: Vec<f64> = theta.iter().zip(dir).map(|(x, d)| x + s * d).collect();
        reproject(self.t, &mut out);
        (self.c.min_slack(&out) > 0.0).then_some(out)
    }

    /// Armijo backtracking along the projected gradient.
    fn ascent_step(&self, theta: &[f64], pg: &[f64], v0: f64) -> Result<Option<(Vec<f64>, f64)>, OptimizerError> {
        let norm2: f64 = pg.iter().map(|x| x * x).sum();
        let mut s = 1.0 / norm2.sqrt();
        while s * norm2.sqrt() > 1e-15 {
            if let Some(cand) = self.step(theta, pg, s) {
                // a volume error here means the trial point is too close to a
                // transition to evaluate reliably; treat as a rejected step
                if let Ok(v) = self.volume(&cand) {
                    if v >= v0 + ARMIJO_C * s * norm2 && self.projected_gradient(&cand).is_ok() {
                        return Ok(Some((cand, v)));
                    }
                }
            }
            s *= SHRINK;
        }
        Ok(None)
    }

    /// Damped Newton step on the projected gradient with a finite-difference
    /// Hessian of the analytic gradient. Accepted only if the projected
    /// gradient shrinks.
    fn newton_step(&self, theta: &[f64], pg: &[f64]) -> Result<Option<Vec<f64>>, OptimizerError> {
        let n = theta.len();
        let mut h = DMatrix::<f64>::zeros(n, n);
        let mut probe = theta.to_vec();
        for j in 0..n {
            let x = theta[j];
            probe[j] = x + FD_HESSIAN_STEP;
            let plus = total_gradient(self.t, &probe);
            probe[j] = x - FD_HESSIAN_STEP;
            let minus = total_gradient(self.t, &probe);
            probe[j] = x;
            let (Ok(plus), Ok(minus)) = (plus, minus) else {
                return Ok(None);
            };
            for i in 0..n {
                h[(i, j)] = (plus[i] - minus[i]) / (2.0 * FD_HESSIAN_STEP);
            }
        }
        // P H P, with P the tangent projection
        let mut p = DMatrix::<f64>::identity(n, n);
        for (e, orbit) in self.t.edge_orbits().iter().enumerate() {
            if self.t.edge_is_closed(e) {
                let k = 1.0 / orbit.len() as f64;
                for &a in orbit {
                    for &b in orbit {
                        p[(a, b)] -= k;
                    }
                }
            }
        }
        let h = 0.5 * (&h + h.transpose());
        let j = &p * h * &p;
        let svd = j.svd(true, true);
        let sigma_max = svd.singular_values.max();
        if !(sigma_max > 0.0) {
            return Ok(None);
        }
        let Ok(pinv) = svd.pseudo_inverse(1e-8 * sigma_max) else {
            return Ok(None);
        };
        let mut delta: Vec<f64> = (-(pinv * DVector::from_column_slice(pg))).iter().copied().collect();
        project(self.t, &mut delta);

        let current = max_norm(pg);
        let mut s = 1.0;
        for _ in 0..30 {
            if let Some(cand) = self.step(theta, &delta, s) {
                if let Ok(g) = self.projected_gradient(&cand) {
                    if max_norm(&g) < current {
                        return Ok(Some(cand));
                    }
                }
            }
            s *= SHRINK;
        }
        Ok(None)
    }

    fn entry(&self, kind: StepKind, theta: &[f64], volume: f64, pg: &[f64]) -> TraceEntry {
        TraceEntry {
            kind,
            volume,
            projected_gradient_norm: max_norm(pg),
            min_slack: self.c.min_slack(theta),
            equality_residual: self.c.max_equality_residual(theta),
        }
    }
}

/// Projected gradient ascent on the volume, switching to Newton refinement
/// near a critical point (which may be a saddle).
pub fn find_critical(
    t: &Triangulation,
    start: &AngleStructure,
    opts: &OptimizerOptions,
) -> Result<CriticalPoint, OptimizerError> {
    opts.quadrature.validate().map_err(VolumeError::from)?;
    let run = Ascent {
        t,
        c: polytope_constraints(t),
        opts: *opts,
    };
    let mut theta = start.theta().to_vec();
    if theta.len() != t.wedge_count() || run.c.min_slack(&theta) <= 0.0 {
        return Err(OptimizerError::NotStrictlyFeasible);
    }
    let mut volume = run.volume(&theta)?;
    let mut pg = run.projected_gradient(&theta)?;
    let mut trace = vec![run.entry(StepKind::Start, &theta, volume, &pg)];
    let mut iterations = 0;
    let mut stalled = false;

    while max_norm(&pg) > opts.grad_tol && iterations < opts.max_iter {
        iterations += 1;
        let mut kind = None;
        if opts.newton_threshold.is_none_or(|limit| max_norm(&pg) < limit) {
            if let Some(next) = run.newton_step(&theta, &pg)? {
                theta = next;
                kind = Some(StepKind::Newton);
            }
        }
        if kind.is_none() {
            if let Some((next, v)) = run.ascent_step(&theta, &pg, volume)? {
                theta = next;
                volume = v;
                kind = Some(StepKind::Ascent);
            } else if let Some(next) = run.newton_step(&theta, &pg)? {
                theta = next;
                kind = Some(StepKind::Newton);
            }
        }
        let Some(kind) = kind else {
            stalled = true;
            break;
        };
        if run.c.min_slack(&theta) < BOUNDARY_SLACK {
            // ascent is leaving through the boundary of the polytope, where
            // critical points are out of scope
            stalled = true;
        }
        if kind == StepKind::Newton {
            volume = run.volume(&theta)?;
        }
        pg = run.projected_gradient(&theta)?;
        trace.push(run.entry(kind, &theta, volume, &pg));
        if stalled {
            break;
        }
    }

    let projected_gradient_norm = max_norm(&pg);
    Ok(CriticalPoint {
        theta: AngleStructure::new(t, theta)?,
        projected_gradient_norm,
        iterations,
        converged: projected_gradient_norm <= opts.grad_tol,
        stalled,
        volume,
        trace,
    })
}
