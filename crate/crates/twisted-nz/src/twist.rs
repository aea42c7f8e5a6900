//! Twisted gluing matrices, twisted NZ matrices and their structural checks.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::laurent::{ZMatrix, ZPoly};
use crate::triangulation::{nz_matrices, PachnerMove, Triangulation, TriangulationError};
use crate::IntMatrix;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TwistError {
    #[error("cocycle does not close around edge {edge} (offset {offset})")]
    Closure { edge: usize, offset: i64 },
    #[error("cocycle needs {expected} entries, got {found}")]
    CocycleLength { expected: usize, found: usize },
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// `G(t), G'(t), G''(t)` together with the cocycle and lifts used.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedGluingData {
    pub g: [ZMatrix; 3],
    pub cocycle_used: Vec<i64>,
    pub edge_lift_offsets: Vec<i64>,
    pub tet_lift_offsets: Vec<i64>,
}

impl TwistedGluingData {
    pub fn size(&self) -> usize {
        self.g[0].rows
    }

    /// Moves edge `i` up `edge[i]` levels and tetrahedron `j` up `tet[j]`
    /// levels: rows pick up `t^edge[i]`, columns `t^-tet[j]`.
    pub fn with_lifts(&self, edge: &[i64], tet: &[i64]) -> Self {
        let neg: Vec<i64> = tet.iter().map(|c| -c).collect();
        let g = self.g.clone().map(|m| m.shift_rows_cols(edge, &neg));
        let add = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        TwistedGluingData {
            g,
            cocycle_used: self.cocycle_used.clone(),
            edge_lift_offsets: add(&self.edge_lift_offsets, edge),
            tet_lift_offsets: add(&self.tet_lift_offsets, tet),
        }
    }

    pub fn at_one(&self) -> [IntMatrix; 3] {
        self.g.clone().map(|m| m.at_one())
    }
}

/// Walks every edge class, adding `t^d` for each corner where `d` is the
/// cocycle offset accumulated since the class's starting corner.
pub fn twisted_gluing_matrices(t: &Triangulation, phi: &[i64]) -> Result<TwistedGluingData, TwistError> {
    let n = t.n_tets;
    if phi.len() != 2 * n {
        return Err(TwistError::CocycleLength { expected: 2 * n, found: phi.len() });
    }
    let classes = t.compute_edge_classes()?;
    let mut g = [ZMatrix::zeros(n, n), ZMatrix::zeros(n, n), ZMatrix::zeros(n, n)];
    let one = BigInt::one();
    for (i, class) in classes.iter().enumerate() {
        let mut d = 0i64;
        for v in &class.walk {
            g[v.quad].get_mut(i, v.tet).add_term(d, &one);
            d += v.sign * phi[v.pairing];
        }
        if d != 0 {
            return Err(TwistError::Closure { edge: i, offset: d });
        }
    }
    Ok(TwistedGluingData { g, cocycle_used: phi.to_vec(), edge_lift_offsets: vec![0; n], tet_lift_offsets: vec![0; n] })
}

/// `A(t) = G(t) - G'(t)`, `B(t) = G''(t) - G'(t)`.
pub fn twisted_nz(d: &TwistedGluingData) -> (ZMatrix, ZMatrix) {
    (d.g[0].sub(&d.g[1]), d.g[2].sub(&d.g[1]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticReport {
    /// `A(t) B(1/t)^T - B(t) A(1/t)^T`.
    pub defect: ZMatrix,
    /// Largest coefficient magnitude of the defect.
    pub max_coefficient: f64,
    /// Largest deviation of `A(w) B(w)^*` from Hermitian over sample points.
    pub hermitian_residual: f64,
}

impl SymplecticReport {
    pub fn holds(&self) -> bool {
        self.max_coefficient == 0.0 && self.hermitian_residual < 1e-9
    }
}

pub fn check_symplectic(a: &ZMatrix, b: &ZMatrix) -> SymplecticReport {
    let left = a.mul(&b.involute().transpose());
    let right = b.mul(&a.involute().transpose());
    let defect = left.sub(&right);
    let max_coefficient = defect
        .entries()
        .iter()
        .flat_map(|p| p.terms().map(|(_, c)| c.abs().to_f64().unwrap_or(f64::INFINITY)).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    let mut hermitian_residual: f64 = 0.0;
    for k in 0..8 {
        let w = Complex64::from_polar(1.0, 0.3 + k as f64 * std::f64::consts::TAU / 8.0);
        let m = a.eval(w) * b.eval(w).adjoint();
        hermitian_residual = hermitian_residual.max((&m - m.adjoint()).camax());
    }
    SymplecticReport { defect, max_coefficient, hermitian_residual }
}

/// Block `(r, s)` of the result is the sum of the coefficients `X_k` with
/// `k = s - r (mod n)`.
pub fn circulant_assemble(x: &ZMatrix, n: usize) -> IntMatrix {
    let (rows, cols) = (x.rows, x.cols);
    let mut out = vec![vec![0i64; n * cols]; n * rows];
    for i in 0..rows {
        for j in 0..cols {
            for (e, c) in x.get(i, j).terms() {
                let c = c.to_i64().expect("small coefficient");
                for r in 0..n {
                    let s = (r as i64 + e).rem_euclid(n as i64) as usize;
                    out[r * rows + i][s * cols + j] += c;
                }
            }
        }
    }
    out
}

/// Circulant assemblies of `G, G', G''` for the `n`-fold cover.
pub fn circulant_gluing(d: &TwistedGluingData, n: usize) -> [IntMatrix; 3] {
    d.g.clone().map(|m| circulant_assemble(&m, n))
}

/// Cover NZ matrices from the circulant gluing matrices.
pub fn circulant_nz(d: &TwistedGluingData, n: usize) -> (IntMatrix, IntMatrix) {
    nz_matrices(&circulant_gluing(d, n))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PachnerNzReport {
    pub holds: bool,
    /// Lower-left column of `P` (first row of `P` is `(1, 0, ...)`).
    pub p_column: Vec<ZPoly>,
    pub target_a: ZMatrix,
    pub target_b: ZMatrix,
    pub reason: Option<String>,
}

/// Reconstructs the unipotent `P` relating the NZ matrices before and
/// after a 2-3 move and verifies both identities.
///
/// `old` must use the cocycle the move reports as `old_cocycle`, and
/// `new` the cocycle it stores on the new triangulation.
pub fn check_pachner_nz(old: &TwistedGluingData, new: &TwistedGluingData, mv: &PachnerMove) -> PachnerNzReport {
    let n = old.size();
    let (alpha, beta) = (mv.alpha, mv.beta);
    let r = mv.beta_rotation;
    let col = |m: &ZMatrix, j: usize| -> Vec<ZPoly> { (0..n).map(|i| m.get(i, j).clone()).collect() };
    let (a_old, b_old) = twisted_nz(old);
    // beta's quads read in the rotated frame
    let gb = [col(&old.g[r], beta), col(&old.g[(r + 1) % 3], beta), col(&old.g[(r + 2) % 3], beta)];
    let a2: Vec<ZPoly> = (0..n).map(|i| &gb[0][i] - &gb[1][i]).collect();
    let b2: Vec<ZPoly> = (0..n).map(|i| &gb[2][i] - &gb[1][i]).collect();
    let a1 = col(&a_old, alpha);
    let b1 = col(&b_old, alpha);

    let size = n + 1;
    let minus_one = ZPoly::from_ints(&[(0, -1)]);
    let mut target_a = ZMatrix::zeros(size, size);
    let mut target_b = ZMatrix::zeros(size, size);
    for k in 0..3 {
        target_a.set(0, k, minus_one.clone());
        target_b.set(0, k, minus_one.clone());
    }
    for i in 0..n {
        target_a.set(i + 1, 0, &b1[i] + &b2[i]);
        target_a.set(i + 1, 1, a1[i].clone());
        target_a.set(i + 1, 2, a2[i].clone());
        target_b.set(i + 1, 1, &a2[i] + &b1[i]);
        target_b.set(i + 1, 2, &a1[i] + &b2[i]);
        for (old_j, new_j) in mv.tet_map.iter().enumerate() {
            if let Some(new_j) = new_j {
                target_a.set(i + 1, *new_j, a_old.get(i, old_j).clone());
                target_b.set(i + 1, *new_j, b_old.get(i, old_j).clone());
            }
        }
    }

    let (a_new, b_new) = twisted_nz(new);
    let mut report =
        PachnerNzReport { holds: false, p_column: Vec::new(), target_a: target_a.clone(), target_b: target_b.clone(), reason: None };
    for j in 0..size {
        if a_new.get(0, j) != target_a.get(0, j) || b_new.get(0, j) != target_b.get(0, j) {
            report.reason = Some(format!("row of the new edge differs in column {j}"));
            return report;
        }
    }
    // row i of P * X is X_i + p_i X_0, and X_0 starts with -1
    let p: Vec<ZPoly> = (1..size).map(|i| a_new.get(i, 0) - target_a.get(i, 0)).collect();
    for i in 1..size {
        for j in 0..size {
            let pa = a_new.get(i, j) + &(&p[i - 1] * a_new.get(0, j));
            let pb = b_new.get(i, j) + &(&p[i - 1] * b_new.get(0, j));
            if &pa != target_a.get(i, j) || &pb != target_b.get(i, j) {
                report.reason = Some(format!("entry ({i}, {j}) differs after row reduction"));
                report.p_column = p;
                return report;
            }
        }
    }
    report.holds = true;
    report.p_column = p;
    report
}

/// True when every coefficient of every entry is nonnegative.
pub fn has_nonnegative_coefficients(m: &ZMatrix) -> bool {
    m.entries().iter().all(|p| p.terms().all(|(_, c)| !c.is_negative() || c.is_zero()))
}
