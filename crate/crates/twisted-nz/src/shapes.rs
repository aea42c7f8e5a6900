//! Shapes of the complete hyperbolic structure.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::triangulation::{Triangulation, TriangulationError};
use crate::IntMatrix;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 100;
const DEGENERATE_RADIUS: f64 = 1e-8;
const CERTIFICATE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ShapeError {
    #[error("tetrahedron {0} has a degenerate shape")]
    Degenerate(usize),
    #[error("Newton did not converge in {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("singular Jacobian at iteration {0}")]
    Singular(usize),
    #[error("solution fails equation {equation} (winding {winding}, residual {residual:e})")]
    Certificate { equation: String, winding: i64, residual: f64 },
    #[error("no meridian among the peripheral curves")]
    NoMeridian,
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaTriple {
    pub zeta: Vec<Complex64>,
    pub zeta_p: Vec<Complex64>,
    pub zeta_pp: Vec<Complex64>,
}

/// `ζ = 1/z`, `ζ' = 1/(1-z)`, `ζ'' = 1/(z(z-1))`.
pub fn zeta(z: &[Complex64]) -> Result<ZetaTriple, ShapeError> {
    if let Some(j) = z.iter().position(|&w| is_degenerate(w)) {
        return Err(ShapeError::Degenerate(j));
    }
    Ok(ZetaTriple {
        zeta: z.iter().map(|&w| 1.0 / w).collect(),
        zeta_p: z.iter().map(|&w| 1.0 / (1.0 - w)).collect(),
        zeta_pp: z.iter().map(|&w| 1.0 / (w * (w - 1.0))).collect(),
    })
}

fn is_degenerate(w: Complex64) -> bool {
    !w.is_finite() || w.norm() < DEGENERATE_RADIUS || (w - 1.0).norm() < DEGENERATE_RADIUS
}

/// `(log z, log z', log z'')` with principal branches.
pub fn shape_logs(w: Complex64) -> [Complex64; 3] {
    [w.ln(), (1.0 / (1.0 - w)).ln(), (1.0 - 1.0 / w).ln()]
}

/// `Σ_j C_j log z_j + C'_j log z'_j + C''_j log z''_j` for one row triple.
pub fn log_row(rows: [&[i64]; 3], z: &[Complex64]) -> Complex64 {
    z.iter()
        .enumerate()
        .map(|(j, &w)| {
            let l = shape_logs(w);
            (0..3).map(|q| l[q] * rows[q][j] as f64).sum::<Complex64>()
        })
        .sum()
}

fn jacobian_row(rows: [&[i64]; 3], zt: &ZetaTriple) -> Vec<Complex64> {
    (0..zt.zeta.len())
        .map(|j| zt.zeta[j] * rows[0][j] as f64 + zt.zeta_p[j] * rows[1][j] as f64 + zt.zeta_pp[j] * rows[2][j] as f64)
        .collect()
}

fn row_of(g: &[IntMatrix; 3], i: usize) -> [&[i64]; 3] {
    [&g[0][i], &g[1][i], &g[2][i]]
}

/// The square system solved by Newton: all edge equations but the last,
/// then the meridian.
pub struct ShapeSystem {
    g: [IntMatrix; 3],
    meridian: [Vec<i64>; 3],
}

impl ShapeSystem {
    pub fn new(t: &Triangulation) -> Result<Self, ShapeError> {
        let m = t.meridian().ok_or(ShapeError::NoMeridian)?;
        Ok(ShapeSystem { g: t.gluing_matrices()?, meridian: [m.c.clone(), m.cp.clone(), m.cpp.clone()] })
    }

    fn rows(&self) -> Vec<([&[i64]; 3], Complex64)> {
        let n = self.g[0].len();
        let mut out: Vec<_> = (0..n - 1).map(|i| (row_of(&self.g, i), Complex64::new(0.0, 2.0 * PI))).collect();
        out.push(([&self.meridian[0], &self.meridian[1], &self.meridian[2]], Complex64::new(0.0, 0.0)));
        out
    }

    /// Log equations minus their targets.
    pub fn residual(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.rows().into_iter().map(|(r, target)| log_row(r, z) - target).collect()
    }

    /// `G diag ζ + G' diag ζ' + G'' diag ζ''` on the chosen rows.
    pub fn jacobian(&self, z: &[Complex64]) -> Result<DMatrix<Complex64>, ShapeError> {
        let zt = zeta(z)?;
        let rows = self.rows();
        let n = z.len();
        let jr: Vec<Vec<Complex64>> = rows.iter().map(|(r, _)| jacobian_row(*r, &zt)).collect();
        Ok(DMatrix::from_fn(rows.len(), n, |i, j| jr[i][j]))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShapeSolution {
    pub z: Vec<Complex64>,
    pub residual: f64,
    /// One winding number per edge equation, then per peripheral curve;
    /// all zero when principal logarithms satisfy the equations.
    pub branch_certificate: Vec<i64>,
    pub geometric: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub edges: Vec<f64>,
    pub curves: Vec<(String, f64)>,
    pub windings: Vec<i64>,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.edges.iter().copied().chain(self.curves.iter().map(|c| c.1)).fold(0.0, f64::max)
    }
}

/// Residuals of every edge equation (target `2πi`) and every peripheral
/// equation (target 0) with principal logarithms.
pub fn verify_solution(t: &Triangulation, z: &[Complex64]) -> Result<ResidualReport, ShapeError> {
    let g = t.gluing_matrices()?;
    let mut windings = Vec::new();
    let mut measure = |value: Complex64, target: Complex64| {
        let d = value - target;
        windings.push((d.im / (2.0 * PI)).round() as i64);
        d.norm()
    };
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let edges = (0..t.n_tets).map(|i| measure(log_row(row_of(&g, i), z), two_pi_i)).collect();
    let curves = t
        .peripheral_curves
        .iter()
        .map(|c| {
            let [a, b, d] = c.rows();
            (c.name.clone(), measure(log_row([a, b, d], z), Complex64::new(0.0, 0.0)))
        })
        .collect();
    Ok(ResidualReport { edges, curves, windings })
}

/// Newton iteration from the regular ideal tetrahedron.
pub fn solve_shapes(t: &Triangulation, tolerance: f64) -> Result<ShapeSolution, ShapeError> {
    let system = ShapeSystem::new(t)?;
    let n = t.n_tets;
    let mut z = vec![Complex64::from_polar(1.0, PI / 3.0); n];
    let max_abs = |v: &[Complex64]| v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut f = system.residual(&z);
    let mut iterations = 0;
    while max_abs(&f) >= tolerance {
        if iterations == MAX_ITERATIONS {
            return Err(ShapeError::NonConvergence { iterations, residual: max_abs(&f) });
        }
        let jac = system.jacobian(&z)?;
        let rhs = DVector::from_iterator(n, f.iter().map(|c| -c));
        let step = jac.lu().solve(&rhs).ok_or(ShapeError::Singular(iterations))?;
        for (w, d) in z.iter_mut().zip(step.iter()) {
            *w += d;
        }
        if let Some(j) = z.iter().position(|&w| is_degenerate(w)) {
            return Err(ShapeError::Degenerate(j));
        }
        f = system.residual(&z);
        iterations += 1;
    }
    let report = verify_solution(t, &z)?;
    let names: Vec<String> =
        (0..n).map(|i| format!("edge {i}")).chain(t.peripheral_curves.iter().map(|c| c.name.clone())).collect();
    let residuals: Vec<f64> = report.edges.iter().copied().chain(report.curves.iter().map(|c| c.1)).collect();
    for (k, name) in names.iter().enumerate() {
        if report.windings[k] != 0 || residuals[k] > CERTIFICATE_TOLERANCE {
            return Err(ShapeError::Certificate { equation: name.clone(), winding: report.windings[k], residual: residuals[k] });
        }
    }
    Ok(ShapeSolution {
        geometric: z.iter().all(|w| w.im > 0.0),
        z,
        residual: max_abs(&f),
        branch_certificate: report.windings,
        iterations,
    })
}
