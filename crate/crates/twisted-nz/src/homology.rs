//! Integer linear algebra: Smith and Hermite normal forms, integer solving,
//! and the cocycle and flattening solvers built on them.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::triangulation::{Triangulation, TriangulationError};
use crate::IntMatrix;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum HomologyError {
    #[error("cohomology has free rank {0}, expected 1")]
    FreeRank(usize),
    #[error("edge relations admit no nonzero cocycle")]
    EmptyKernel,
    #[error("flattening system has no integer solution")]
    NoFlattening,
    #[error("a flattening needs at least one peripheral curve")]
    NoPeripheralCurves,
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(m: &IntMatrix, rows: usize, cols: usize) -> IntMatrix {
    (0..cols).map(|j| (0..rows).map(|i| m[i][j]).collect()).collect()
}

pub fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn matvec(a: &IntMatrix, x: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

/// Exact determinant (fraction-free elimination over big integers).
pub fn int_det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    if negate {
        -prev
    } else {
        prev
    }
}

type WideMatrix = Vec<Wide>;

fn widen_matrix(m: &IntMatrix) -> WideMatrix {
    m.iter().map(|r| widen(r)).collect()
}

fn narrow_matrix(m: &WideMatrix) -> IntMatrix {
    m.iter().map(|r| narrow(r)).collect()
}

fn wide_identity(n: usize) -> WideMatrix {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn col_op(m: &mut WideMatrix, i: usize, j: usize, coeffs: [i128; 4]) {
    // (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
    let [a, b, c, d] = coeffs;
    for row in m.iter_mut() {
        let (x, y) = (row[i], row[j]);
        row[i] = a * x + b * y;
        row[j] = c * x + d * y;
    }
}

/// Column-style Hermite form `A U = H`, returned with the pivot rows.
/// Columns of `U` past the rank span the kernel and are size-reduced.
pub fn column_hermite(a: &IntMatrix, cols: usize) -> (IntMatrix, IntMatrix, Vec<usize>) {
    let mut h = widen_matrix(a);
    let mut u = wide_identity(cols);
    let mut pivot_rows = Vec::new();
    let mut r = 0;
    for i in 0..h.len() {
        if r == cols {
            break;
        }
        // Euclid across the row: bring the smallest entry to column r and
        // reduce the others by it until they vanish
        loop {
            let Some(j) = (r..cols).filter(|&j| h[i][j] != 0).min_by_key(|&j| h[i][j].abs()) else { break };
            col_op(&mut h, r, j, [0, 1, 1, 0]);
            col_op(&mut u, r, j, [0, 1, 1, 0]);
            let mut done = true;
            for j in r + 1..cols {
                let q = round_div(h[i][j] * h[i][r].signum(), h[i][r].abs());
                if q != 0 {
                    col_op(&mut h, r, j, [1, 0, -q, 1]);
                    col_op(&mut u, r, j, [1, 0, -q, 1]);
                }
                done &= h[i][j] == 0;
            }
            if done {
                break;
            }
        }
        if h[i][r] == 0 {
            continue;
        }
        if h[i][r] < 0 {
            col_op(&mut h, r, r, [-1, 0, -1, 0]);
            col_op(&mut u, r, r, [-1, 0, -1, 0]);
        }
        for c in 0..r {
            let q = h[i][c].div_euclid(h[i][r]);
            if q != 0 {
                col_op(&mut h, c, r, [1, -q, 0, 1]);
                col_op(&mut u, c, r, [1, -q, 0, 1]);
            }
        }
        pivot_rows.push(i);
        r += 1;
    }
    // kernel columns can be added to any column without changing H
    let column = |u: &WideMatrix, c: usize| -> Wide { u.iter().map(|row| row[c]).collect() };
    let mut kernel: Vec<Wide> = (r..cols).map(|c| column(&u, c)).collect();
    reduce_basis(&mut kernel);
    for c in 0..r {
        let mut v = column(&u, c);
        reduce_wide(&mut v, &kernel);
        u.iter_mut().zip(&v).for_each(|(row, x)| row[c] = *x);
    }
    for (k, v) in kernel.iter().enumerate() {
        u.iter_mut().zip(v).for_each(|(row, x)| row[r + k] = *x);
    }
    (narrow_matrix(&h), narrow_matrix(&u), pivot_rows)
}

/// Row-style Hermite normal form: `U M = H` with `U` unimodular and `H`
/// in upper echelon form with positive pivots.
pub fn hermite_normal_form(m: &IntMatrix, cols: usize) -> (IntMatrix, IntMatrix) {
    let rows = m.len();
    let (h, u, _) = column_hermite(&transpose(m, rows, cols), rows);
    (transpose(&h, cols, rows), transpose(&u, rows, rows))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.len().min(self.d.first().map_or(0, |r| r.len()))).map(|i| self.d[i][i]).collect()
    }
}

/// `U M V = D` with `U`, `V` unimodular and `d_1 | d_2 | ...`.
pub fn smith_decomposition(m: &IntMatrix, cols: usize) -> Smith {
    let rows = m.len();
    let mut d = widen_matrix(m);
    let mut u = wide_identity(rows);
    let mut v = wide_identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Smith { u: narrow_matrix(&u), d: narrow_matrix(&d), v: narrow_matrix(&v) };
            };
            d.swap(t, bi);
            u.swap(t, bi);
            col_op(&mut d, t, bj, [0, 1, 1, 0]);
            col_op(&mut v, t, bj, [0, 1, 1, 0]);
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t] / d[t][t];
                if q != 0 {
                    for j in 0..cols {
                        d[i][j] -= q * d[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = d[t][j] / d[t][t];
                if q != 0 {
                    col_op(&mut d, t, j, [1, 0, -q, 1]);
                    col_op(&mut v, t, j, [1, 0, -q, 1]);
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % d[t][t] != 0));
            match bad {
                Some(i) => {
                    for j in 0..cols {
                        d[t][j] += d[i][j];
                    }
                    for j in 0..rows {
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            d[t].iter_mut().for_each(|x| *x = -*x);
            u[t].iter_mut().for_each(|x| *x = -*x);
        }
    }
    Smith { u: narrow_matrix(&u), d: narrow_matrix(&d), v: narrow_matrix(&v) }
}

type Wide = Vec<i128>;

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

fn widen(v: &[i64]) -> Wide {
    v.iter().map(|&x| x as i128).collect()
}

fn narrow(v: &[i128]) -> Vec<i64> {
    v.iter().map(|&x| i64::try_from(x).expect("reduced entry fits in i64")).collect()
}

/// Nearest integer to `a / b` for `b > 0`.
fn round_div(a: i128, b: i128) -> i128 {
    (2 * a + b).div_euclid(2 * b)
}

/// Subtracts integer multiples of the basis vectors while the norm drops.
fn reduce_wide(x: &mut Wide, basis: &[Wide]) -> bool {
    let mut any = false;
    for _ in 0..256 {
        let mut changed = false;
        for v in basis {
            let vv = dot(v, v);
            if vv == 0 {
                continue;
            }
            let q = round_div(dot(x, v), vv);
            if q != 0 {
                let trial: Wide = x.iter().zip(v).map(|(a, b)| a - q * b).collect();
                if dot(&trial, &trial) < dot(x, x) {
                    *x = trial;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        any = true;
    }
    any
}

/// Pairwise size reduction of a lattice basis.
fn reduce_basis(basis: &mut [Wide]) {
    for _ in 0..256 {
        basis.sort_by_key(|v| dot(v, v));
        let mut changed = false;
        for i in 0..basis.len() {
            let (head, tail) = basis.split_at_mut(i);
            changed |= reduce_wide(&mut tail[0], head);
        }
        if !changed {
            break;
        }
    }
}

fn reduce_against(x: &mut [i64], basis: &[Vec<i64>]) {
    let mut w = widen(x);
    let basis: Vec<Wide> = basis.iter().map(|v| widen(v)).collect();
    reduce_wide(&mut w, &basis);
    x.copy_from_slice(&narrow(&w));
}

/// Integer solution of `A x = b` of small norm, with a basis of the kernel.
pub fn solve_integer(a: &IntMatrix, b: &[i64]) -> Option<(Vec<i64>, Vec<Vec<i64>>)> {
    let cols = a.first().map_or(0, |r| r.len());
    let (h, u, pivots) = column_hermite(a, cols);
    let rank = pivots.len();
    let mut y = vec![0i64; cols];
    for (k, &i) in pivots.iter().enumerate() {
        let partial: i64 = (0..k).map(|c| h[i][c] * y[c]).sum();
        let rem = b[i] - partial;
        if rem % h[i][k] != 0 {
            return None;
        }
        y[k] = rem / h[i][k];
    }
    if matvec(&h, &y) != b {
        return None;
    }
    let wide_y = widen(&y);
    let mut x: Wide = u.iter().map(|row| dot(&widen(row), &wide_y)).collect();
    let mut kernel: Vec<Wide> = (rank..cols).map(|c| u.iter().map(|row| row[c] as i128).collect()).collect();
    reduce_basis(&mut kernel);
    reduce_wide(&mut x, &kernel);
    Some((narrow(&x), kernel.iter().map(|v| narrow(v)).collect()))
}

/// Basis of the integer kernel of `A`.
pub fn integer_kernel(a: &IntMatrix, cols: usize) -> Vec<Vec<i64>> {
    let (_, u, pivots) = column_hermite(a, cols);
    let mut kernel: Vec<Wide> = (pivots.len()..cols).map(|c| u.iter().map(|row| row[c] as i128).collect()).collect();
    reduce_basis(&mut kernel);
    kernel.iter().map(|v| narrow(v)).collect()
}

/// Integer value per face pairing representing the abelianization map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub values: Vec<i64>,
    /// Set when no meridian path fixed the sign (t and 1/t are then
    /// indistinguishable).
    pub sign_ambiguous: bool,
}

/// Coboundary matrix: column `j` is `δ e_j`, `(δc)(p) = c(head) - c(tail)`.
pub fn coboundary_matrix(t: &Triangulation) -> IntMatrix {
    let mut d = vec![vec![0i64; t.n_tets]; 2 * t.n_tets];
    for fp in t.face_pairings() {
        d[fp.index][fp.head()] += 1;
        d[fp.index][fp.tail()] -= 1;
    }
    d
}

pub fn apply_coboundary(t: &Triangulation, phi: &[i64], c: &[i64]) -> Vec<i64> {
    t.face_pairings().iter().map(|fp| phi[fp.index] + c[fp.head()] - c[fp.tail()]).collect()
}

/// Generator of the free part of `ker R / im δ`.
pub fn solve_cocycle(t: &Triangulation) -> Result<Cocycle, HomologyError> {
    let m = 2 * t.n_tets;
    let r = t.relation_matrix()?;
    let kernel = integer_kernel(&r, m);
    if kernel.is_empty() {
        return Err(HomologyError::EmptyKernel);
    }
    let k = kernel.len();
    let kmat = transpose(&kernel, k, m);
    let delta = coboundary_matrix(t);
    let coords: Vec<Vec<i64>> = (0..t.n_tets)
        .map(|j| {
            let col: Vec<i64> = delta.iter().map(|row| row[j]).collect();
            solve_integer(&kmat, &col).expect("coboundaries lie in the kernel").0
        })
        .collect();
    let x = transpose(&coords, t.n_tets, k);
    let smith = smith_decomposition(&x, t.n_tets);
    let rank = smith.diagonal().iter().filter(|d| **d != 0).count();
    if k - rank != 1 {
        return Err(HomologyError::FreeRank(k - rank));
    }
    let mut e = vec![0i64; k];
    e[rank] = 1;
    let y = solve_integer(&smith.u, &e).expect("unimodular").0;
    let mut values = matvec(&kmat, &y);
    let boundaries: Vec<Vec<i64>> = (0..t.n_tets).map(|j| delta.iter().map(|row| row[j]).collect()).collect();
    reduce_against(&mut values, &boundaries);
    let mut sign_ambiguous = true;
    let flip = match &t.meridian_dual_path {
        Some(path) => {
            sign_ambiguous = false;
            Triangulation::dual_path_value(path, &values) < 0
        }
        None => values.iter().find(|v| **v != 0).is_some_and(|v| *v < 0),
    };
    if flip {
        values.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(Cocycle { values, sign_ambiguous })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flattening {
    pub f: Vec<i64>,
    pub fp: Vec<i64>,
    pub fpp: Vec<i64>,
}

impl Flattening {
    pub fn rows(&self) -> [&Vec<i64>; 3] {
        [&self.f, &self.fp, &self.fpp]
    }

    /// Checks edge rows = 2, tetrahedron rows = 1, peripheral rows = 0.
    pub fn is_valid_for(&self, t: &Triangulation) -> bool {
        let Ok(g) = t.gluing_matrices() else { return false };
        let n = t.n_tets;
        if self.rows().iter().any(|r| r.len() != n) {
            return false;
        }
        let apply = |rows: [&Vec<i64>; 3]| -> i64 {
            (0..3).map(|q| rows[q].iter().zip(self.rows()[q]).map(|(a, b)| a * b).sum::<i64>()).sum()
        };
        let edges_ok = (0..n).all(|i| apply([&g[0][i], &g[1][i], &g[2][i]]) == 2);
        let tets_ok = (0..n).all(|j| self.f[j] + self.fp[j] + self.fpp[j] == 1);
        let curves_ok = t.peripheral_curves.iter().all(|c| apply(c.rows()) == 0);
        edges_ok && tets_ok && curves_ok
    }
}

pub fn solve_flattening(t: &Triangulation) -> Result<Flattening, HomologyError> {
    if t.peripheral_curves.is_empty() {
        return Err(HomologyError::NoPeripheralCurves);
    }
    let n = t.n_tets;
    let g = t.gluing_matrices()?;
    let mut rows: IntMatrix = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        rows.push((0..3).flat_map(|q| g[q][i].iter().copied()).collect());
        rhs.push(2);
    }
    for j in 0..n {
        let mut row = vec![0i64; 3 * n];
        for q in 0..3 {
            row[q * n + j] = 1;
        }
        rows.push(row);
        rhs.push(1);
    }
    for c in &t.peripheral_curves {
        rows.push(c.rows().iter().flat_map(|r| r.iter().copied()).collect());
        rhs.push(0);
    }
    let (x, _) = solve_integer(&rows, &rhs).ok_or(HomologyError::NoFlattening)?;
    Ok(Flattening { f: x[..n].to_vec(), fp: x[n..2 * n].to_vec(), fpp: x[2 * n..].to_vec() })
}
