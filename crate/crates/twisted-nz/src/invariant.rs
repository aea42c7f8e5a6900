//! The 1-loop invariant, its twisted version, and checks of their
//! structural properties.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::homology::Flattening;
use crate::laurent::{det_exact, det_numeric, CMatrix, CPoly, CanonicalForm, LaurentError, ZMatrix};
use crate::shapes::{zeta, ShapeError, ZetaTriple};
use crate::triangulation::{cyclic_cover, nz_matrices, pachner_23, Triangulation, TriangulationError};
use crate::twist::{check_pachner_nz, twisted_gluing_matrices, twisted_nz, TwistError, TwistedGluingData};

/// Largest interpolation degree accepted by [`twisted_one_loop`].
pub const MAX_DEGREE: i64 = 4096;
/// Agreement required between the two determinant expressions.
pub const FORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum InvariantError {
    #[error("no peripheral curve named {0}")]
    NoCurve(String),
    #[error("degenerate shapes: zero denominator")]
    ZeroDenominator,
    #[error("determinant degree {0} exceeds the limit")]
    DegreeOverflow(i64),
    #[error("the two determinant expressions differ by {0:e}")]
    FormMismatch(f64),
    #[error("flattening is not valid for this triangulation")]
    InvalidFlattening,
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// `∏ ζ_j^{f_j} ζ'_j^{f'_j} ζ''_j^{f''_j}`.
pub fn flattening_factor(zt: &ZetaTriple, f: &Flattening) -> Complex64 {
    let mut out = Complex64::new(1.0, 0.0);
    for j in 0..zt.zeta.len() {
        out *= zt.zeta[j].powi(f.f[j] as i32) * zt.zeta_p[j].powi(f.fp[j] as i32) * zt.zeta_pp[j].powi(f.fpp[j] as i32);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneLoopValue {
    pub value: Complex64,
    pub curve: String,
    /// Difference between the NZ and gluing-matrix expressions.
    pub form_agreement: f64,
}

fn combine(rows: [&Vec<Vec<i64>>; 3], zt: &ZetaTriple) -> DMatrix<Complex64> {
    let n = zt.zeta.len();
    DMatrix::from_fn(n, n, |i, j| {
        zt.zeta[j] * rows[0][i][j] as f64 + zt.zeta_p[j] * rows[1][i][j] as f64 + zt.zeta_pp[j] * rows[2][i][j] as f64
    })
}

/// `det(Â diag ζ + B̂ diag ζ'') / (2 ∏ ζ^f ζ'^f' ζ''^f'')`, with the last
/// row replaced by the curve.
pub fn one_loop(t: &Triangulation, z: &[num_complex::Complex64], f: &Flattening, curve: &str) -> Result<OneLoopValue, InvariantError> {
    let c = t.peripheral_curve(curve).ok_or_else(|| InvariantError::NoCurve(curve.into()))?;
    let zt = zeta(z)?;
    let n = t.n_tets;
    let mut g = t.gluing_matrices()?;
    for (q, row) in c.rows().into_iter().enumerate() {
        g[q][n - 1] = row.clone();
    }
    let (a, b) = nz_matrices(&g);
    let zero = vec![vec![0i64; n]; n];
    let det_ab = combine([&a, &zero, &b], &zt).determinant();
    let det_g = combine([&g[0], &g[1], &g[2]], &zt).determinant();
    let denom = 2.0 * flattening_factor(&zt, f);
    if denom.norm() == 0.0 {
        return Err(InvariantError::ZeroDenominator);
    }
    let form_agreement = (det_ab - det_g).norm();
    if form_agreement > FORM_TOLERANCE * (1.0 + det_g.norm()) {
        return Err(InvariantError::FormMismatch(form_agreement));
    }
    Ok(OneLoopValue { value: det_ab / denom, curve: c.name.clone(), form_agreement })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedOneLoop {
    /// The quotient as computed, before choosing a representative.
    pub raw: CPoly,
    pub poly: CanonicalForm<num_complex::Complex64>,
    pub form_agreement: f64,
    pub cocycle: Vec<i64>,
    pub flattening: Flattening,
    pub shapes: Vec<Complex64>,
}

impl TwistedOneLoop {
    pub fn canonical(&self) -> &CPoly {
        &self.poly.poly
    }
}

fn diag_combination(d: &TwistedGluingData, zt: &ZetaTriple) -> (CMatrix, CMatrix) {
    let (a, b) = twisted_nz(d);
    let ab = a.to_complex().mul_diag(&zt.zeta).add(&b.to_complex().mul_diag(&zt.zeta_pp));
    let g = d.g[0]
        .to_complex()
        .mul_diag(&zt.zeta)
        .add(&d.g[1].to_complex().mul_diag(&zt.zeta_p))
        .add(&d.g[2].to_complex().mul_diag(&zt.zeta_pp));
    (ab, g)
}

fn degree_bound(m: &ZMatrix) -> i64 {
    (0..m.cols)
        .map(|j| {
            let exps: Vec<i64> = (0..m.rows).flat_map(|i| [m.get(i, j).min_exp(), m.get(i, j).max_exp()]).flatten().collect();
            exps.iter().max().unwrap_or(&0) - exps.iter().min().unwrap_or(&0)
        })
        .sum()
}

/// Twisted 1-loop invariant from precomputed twisted matrices.
pub fn twisted_one_loop_from(
    d: &TwistedGluingData,
    z: &[Complex64],
    f: &Flattening,
) -> Result<TwistedOneLoop, InvariantError> {
    let zt = zeta(z)?;
    let bound: i64 = d.g.iter().map(degree_bound).max().unwrap_or(0);
    if bound > MAX_DEGREE {
        return Err(InvariantError::DegreeOverflow(bound));
    }
    let (ab, g) = diag_combination(d, &zt);
    let det_ab = det_numeric(&ab)?;
    let det_g = det_numeric(&g)?;
    let scale = det_g.terms().map(|(_, c)| c.norm()).fold(1.0, f64::max);
    let form_agreement = det_ab.max_dist(&det_g);
    if form_agreement > FORM_TOLERANCE * scale {
        return Err(InvariantError::FormMismatch(form_agreement));
    }
    let denom = flattening_factor(&zt, f);
    if denom.norm() == 0.0 {
        return Err(InvariantError::ZeroDenominator);
    }
    let raw = det_ab.scale(&(1.0 / denom));
    Ok(TwistedOneLoop {
        poly: raw.canonicalize(),
        raw,
        form_agreement,
        cocycle: d.cocycle_used.clone(),
        flattening: f.clone(),
        shapes: z.to_vec(),
    })
}

/// `det(A(t) diag ζ + B(t) diag ζ'') / ∏ ζ^f ζ'^f' ζ''^f''` up to `±t^k`.
pub fn twisted_one_loop(
    t: &Triangulation,
    phi: &[i64],
    z: &[Complex64],
    f: &Flattening,
) -> Result<TwistedOneLoop, InvariantError> {
    twisted_one_loop_from(&twisted_gluing_matrices(t, phi)?, z, f)
}

/// Best complex `λ` minimizing `|q - λ p|`, and the relative residual.
pub fn fit_scalar(p: &[Complex64], q: &[Complex64]) -> (Complex64, f64) {
    let len = p.len().max(q.len());
    let get = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
    let pp: f64 = p.iter().map(|c| c.norm_sqr()).sum();
    if pp == 0.0 {
        let qn = q.iter().map(|c| c.norm()).fold(0.0, f64::max);
        return (Complex64::new(0.0, 0.0), qn);
    }
    let lambda: Complex64 = (0..len).map(|i| get(p, i).conj() * get(q, i)).sum::<Complex64>() / pp;
    let scale = q.iter().map(|c| c.norm()).fold(1e-300, f64::max);
    let residual = (0..len).map(|i| (get(q, i) - lambda * get(p, i)).norm()).fold(0.0, f64::max) / scale;
    (lambda, residual)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CyclicProductReport {
    pub pass: bool,
    pub residual: f64,
    pub scalar: Complex64,
    pub cover: CPoly,
    pub product: CPoly,
}

/// Compares the invariant of the explicit `n`-fold cover at `t^n` with
/// `∏_{ω^n = 1} τ(T, ωt)`.
pub fn check_cyclic_product(
    t: &Triangulation,
    phi: &[i64],
    z: &[Complex64],
    f: &Flattening,
    n: usize,
    tol: f64,
) -> Result<CyclicProductReport, InvariantError> {
    let base = twisted_one_loop(t, phi, z, f)?;
    let cover = cyclic_cover(t, phi, n)?;
    let cover_phi = cover.cocycle.clone().expect("cover carries its cocycle");
    let stack = |v: &[i64]| v.repeat(n);
    let cover_f = Flattening { f: stack(&f.f), fp: stack(&f.fp), fpp: stack(&f.fpp) };
    let cover_z = z.repeat(n);
    let lhs = twisted_one_loop(&cover, &cover_phi, &cover_z, &cover_f)?.raw.dilate(n as i64);
    let mut product = CPoly::one();
    for k in 0..n {
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
        let rotated = CPoly::from_terms(base.raw.terms().map(|(e, c)| (e, c * w.powi(e as i32))));
        product = &product * &rotated;
    }
    let lhs_c = lhs.canonicalize().coefficients();
    let rhs_c = product.canonicalize().coefficients();
    let (scalar, mut residual) = fit_scalar(&lhs_c, &rhs_c);
    if lhs_c.len() != rhs_c.len() {
        residual = residual.max(1.0);
    }
    residual = residual.max((scalar.norm() - 1.0).abs());
    Ok(CyclicProductReport {
        pass: residual < tol,
        residual,
        scalar,
        cover: lhs.canonicalize().poly,
        product: product.canonicalize().poly,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeReport {
    pub pass: bool,
    pub value_at_one: f64,
    pub derivative: f64,
    pub one_loop: f64,
    pub residual: f64,
}

/// `τ(T, 1) = 0` and `|τ'(T, 1)| = |τ_λ(T)|`.
pub fn check_derivative(
    t: &Triangulation,
    phi: &[i64],
    z: &[Complex64],
    f: &Flattening,
    curve: &str,
    tol: f64,
) -> Result<DerivativeReport, InvariantError> {
    let tau = twisted_one_loop(t, phi, z, f)?;
    let value_at_one = tau.raw.eval(Complex64::new(1.0, 0.0)).norm();
    let derivative = tau.raw.derivative_at_one().norm();
    let one_loop = one_loop(t, z, f, curve)?.value.norm();
    let residual = (derivative - one_loop).abs();
    Ok(DerivativeReport { pass: residual < tol && value_at_one < 1e-9, value_at_one, derivative, one_loop, residual })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport {
    pub symmetric: bool,
    pub det_a_palindromic: Option<(i8, i64)>,
    pub det_b_palindromic: Option<(i8, i64)>,
}

impl SymmetryReport {
    pub fn pass(&self) -> bool {
        self.symmetric && self.det_a_palindromic.is_some() && self.det_b_palindromic.is_some()
    }
}

/// `τ(t) ~ τ(1/t)`, and palindromicity of `det A(t)` and `det B(t)`.
pub fn check_symmetry(
    t: &Triangulation,
    phi: &[i64],
    z: &[Complex64],
    f: &Flattening,
    tol: f64,
) -> Result<SymmetryReport, InvariantError> {
    let d = twisted_gluing_matrices(t, phi)?;
    let tau = twisted_one_loop_from(&d, z, f)?;
    let scale = tau.canonical().terms().map(|(_, c)| c.norm()).fold(1.0, f64::max);
    let p = tau.canonical();
    let symmetric = p.eq_mod(&p.involute(), false, tol * scale);
    let (a, b) = twisted_nz(&d);
    Ok(SymmetryReport {
        symmetric,
        det_a_palindromic: det_exact(&a)?.is_palindromic(0.0),
        det_b_palindromic: det_exact(&b)?.is_palindromic(0.0),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PachnerInvarianceReport {
    pub pass: bool,
    pub residual: f64,
    /// Least-squares scalar relating the two canonical forms.
    pub scalar: Complex64,
    pub nz_identity: bool,
    pub before: CPoly,
    pub after: CPoly,
}

/// Invariant before and after the 2-3 move on `face`.
pub fn check_pachner_invariance(
    t: &Triangulation,
    phi: &[i64],
    z: &[Complex64],
    f: &Flattening,
    face: usize,
    tol: f64,
) -> Result<PachnerInvarianceReport, InvariantError> {
    let mut base = t.clone();
    base.cocycle = Some(phi.to_vec());
    let mv = pachner_23(&base, face, Some(z), Some(f))?;
    let old_phi = mv.old_cocycle.clone().expect("cocycle was set");
    let old = twisted_gluing_matrices(&base, &old_phi)?;
    let before = twisted_one_loop_from(&old, z, f)?;
    let new_t = &mv.triangulation;
    let new_f = mv.flattening.clone().expect("flattening was given");
    if !new_f.is_valid_for(new_t) {
        return Err(InvariantError::InvalidFlattening);
    }
    let new = twisted_gluing_matrices(new_t, new_t.cocycle.as_ref().expect("move carries the cocycle"))?;
    let after = twisted_one_loop_from(&new, mv.shapes.as_ref().expect("shapes were given"), &new_f)?;
    let nz_identity = check_pachner_nz(&old, &new, &mv).holds;
    let p = before.poly.coefficients();
    let q = after.poly.coefficients();
    let (scalar, fit) = fit_scalar(&p, &q);
    let sign_residual = (scalar - 1.0).norm().min((scalar + 1.0).norm());
    let mut residual = fit.max(sign_residual);
    if p.len() != q.len() {
        residual = residual.max(1.0);
    }
    Ok(PachnerInvarianceReport {
        pass: residual < tol,
        residual,
        scalar,
        nz_identity,
        before: before.poly.poly,
        after: after.poly.poly,
    })
}
