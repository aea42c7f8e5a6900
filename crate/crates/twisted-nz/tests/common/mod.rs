#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use twisted_nz::homology::{hermite_normal_form, int_det, smith_decomposition, Flattening};
use twisted_nz::laurent::{ZMatrix, ZPoly};
use twisted_nz::triangulation::Triangulation;
use twisted_nz::twist::TwistedGluingData;
use twisted_nz::IntMatrix;

/// Parses `"2t^2 - t + 1"`, `"t+t^{-2}"`, `"-t"`, `"0"`.
pub fn poly(s: &str) -> ZPoly {
    let s: String = s.chars().filter(|c| !c.is_whitespace() && *c != '{' && *c != '}').collect();
    let b = s.as_bytes();
    let mut cuts = vec![0];
    for i in 1..b.len() {
        if (b[i] == b'+' || b[i] == b'-') && b[i - 1] != b'^' {
            cuts.push(i);
        }
    }
    cuts.push(b.len());
    let terms: Vec<(i64, i64)> = cuts
        .windows(2)
        .map(|w| {
            let term = s[w[0]..w[1]].trim_start_matches('+');
            let (sign, term) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term),
            };
            match term.find('t') {
                None => (0, sign * term.parse::<i64>().unwrap()),
                Some(i) => {
                    let c = if i == 0 { 1 } else { term[..i].parse::<i64>().unwrap() };
                    let e = if term.len() == i + 1 { 1 } else { term[i + 2..].parse::<i64>().unwrap() };
                    (e, sign * c)
                }
            }
        })
        .collect();
    ZPoly::from_ints(&terms)
}

pub fn pmatrix(rows: &[&[&str]]) -> ZMatrix {
    ZMatrix::from_fn(rows.len(), rows[0].len(), |i, j| poly(rows[i][j]))
}

pub const G41: [[i64; 2]; 2] = [[2, 2], [0, 0]];
pub const GP41: [[i64; 2]; 2] = [[1, 1], [1, 1]];
pub const GPP41: [[i64; 2]; 2] = [[0, 0], [2, 2]];
pub const A41: [[i64; 2]; 2] = [[1, 1], [-1, -1]];
pub const B41: [[i64; 2]; 2] = [[-1, -1], [1, 1]];
pub const ABT41: [[i64; 2]; 2] = [[-2, 2], [2, -2]];

pub fn gt41() -> [ZMatrix; 3] {
    [
        pmatrix(&[&["2t", "2t"], &["0", "0"]]),
        pmatrix(&[&["t^2", "1"], &["t", "t^2"]]),
        pmatrix(&[&["0", "0"], &["2t^2", "2t"]]),
    ]
}

pub fn abt41() -> (ZMatrix, ZMatrix) {
    (
        pmatrix(&[&["-t^2+2t", "2t-1"], &["-t", "-t^2"]]),
        pmatrix(&[&["-t^2", "-1"], &["2t^2-t", "-t^2+2t"]]),
    )
}

pub fn product41() -> ZMatrix {
    pmatrix(&[&["-2t+2-2t^-1", "t+t^-2"], &["t^2+t^-1", "-2t+2-2t^-1"]])
}

pub fn to_vecs<const N: usize>(m: &[[i64; N]; N]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

pub fn g63() -> [Vec<Vec<i64>>; 3] {
    [
        vec![
            vec![1, 1, 1, 1, 0, 1],
            vec![0; 6],
            vec![0; 6],
            vec![0; 6],
            vec![0, 0, 1, 0, 1, 0],
            vec![1, 1, 0, 1, 1, 1],
        ],
        vec![
            vec![0; 6],
            vec![1, 1, 0, 1, 0, 1],
            vec![0, 1, 1, 0, 1, 0],
            vec![0, 0, 1, 1, 1, 0],
            vec![1, 0, 0, 0, 0, 1],
            vec![0; 6],
        ],
        vec![
            vec![0; 6],
            vec![0, 2, 0, 2, 0, 0],
            vec![1, 0, 0, 0, 0, 1],
            vec![1, 0, 0, 0, 0, 1],
            vec![0, 0, 2, 0, 2, 0],
            vec![0; 6],
        ],
    ]
}

pub fn a63() -> Vec<Vec<i64>> {
    vec![
        vec![1, 1, 1, 1, 0, 1],
        vec![-1, -1, 0, -1, 0, -1],
        vec![0, -1, -1, 0, -1, 0],
        vec![0, 0, -1, -1, -1, 0],
        vec![-1, 0, 1, 0, 1, -1],
        vec![1, 1, 0, 1, 1, 1],
    ]
}

pub fn b63() -> Vec<Vec<i64>> {
    vec![
        vec![0; 6],
        vec![-1, 1, 0, 1, 0, -1],
        vec![1, -1, -1, 0, -1, 1],
        vec![1, 0, -1, -1, -1, 1],
        vec![-1, 0, 2, 0, 2, -1],
        vec![0; 6],
    ]
}

pub fn abt63() -> Vec<Vec<i64>> {
    vec![
        vec![0; 6],
        vec![0, 0, -1, -1, 2, 0],
        vec![0, -1, 3, 2, -4, 0],
        vec![0, -1, 2, 3, -4, 0],
        vec![0, 2, -4, -4, 6, 0],
        vec![0; 6],
    ]
}

pub fn gt63() -> [ZMatrix; 3] {
    [
        pmatrix(&[
            &["t", "t^2", "t", "1", "0", "t"],
            &["0", "0", "0", "0", "0", "0"],
            &["0", "0", "0", "0", "0", "0"],
            &["0", "0", "0", "0", "0", "0"],
            &["0", "0", "t", "0", "t", "0"],
            &["t^2", "t^2", "0", "t^2", "t^2", "t^2"],
        ]),
        pmatrix(&[
            &["0", "0", "0", "0", "0", "0"],
            &["1", "t^2", "0", "t", "0", "t^3"],
            &["0", "t", "t", "0", "1", "0"],
            &["0", "0", "t^2", "t^2", "t^3", "0"],
            &["t^2", "0", "0", "0", "0", "1"],
            &["0", "0", "0", "0", "0", "0"],
        ]),
        pmatrix(&[
            &["0", "0", "0", "0", "0", "0"],
            &["0", "t+t^3", "0", "1+t^2", "0", "0"],
            &["1", "0", "0", "0", "0", "t"],
            &["t^2", "0", "0", "0", "0", "t^3"],
            &["0", "0", "1+t^2", "0", "1+t^2", "0"],
            &["0", "0", "0", "0", "0", "0"],
        ]),
    ]
}

/// The printed A(t), B(t) for 6_3, with entry (2, 4) of A(t) corrected from
/// 0 to -t (G(t) has a zero row there and G'(t) has t).
pub fn abt63_twisted() -> (ZMatrix, ZMatrix) {
    (
        pmatrix(&[
            &["t", "t^2", "t", "1", "0", "t"],
            &["-1", "-t^2", "0", "-t", "0", "-t^3"],
            &["0", "-t", "-t", "0", "-1", "0"],
            &["0", "0", "-t^2", "-t^2", "-t^3", "0"],
            &["-t^2", "0", "t", "0", "t", "-1"],
            &["t^2", "t^2", "0", "t^2", "t^2", "t^2"],
        ]),
        pmatrix(&[
            &["0", "0", "0", "0", "0", "0"],
            &["-1", "t-t^2+t^3", "0", "1-t+t^2", "0", "-t^3"],
            &["1", "-t", "-t", "0", "-1", "t"],
            &["t^2", "0", "-t^2", "-t^2", "-t^3", "t^3"],
            &["-t^2", "0", "1+t^2", "0", "1+t^2", "-1"],
            &["0", "0", "0", "0", "0", "0"],
        ]),
    )
}

pub const TAU63: [f64; 10] = [-1.0, 6.0, -12.805, 33.472, -85.242, 85.242, -33.472, 12.805, -6.0, 1.0];

pub fn shapes63() -> [Complex64; 6] {
    let a = Complex64::new(0.23279, 0.64139);
    let b = Complex64::new(0.15884, 1.20014);
    let c = Complex64::new(0.84116, 1.20014);
    [a, b, c, b, c, a]
}

pub fn flattening41() -> Flattening {
    Flattening { f: vec![0, 0], fp: vec![1, 1], fpp: vec![0, 0] }
}

pub fn flattening63() -> Flattening {
    Flattening { f: vec![0, 1, 0, 1, 0, 0], fp: vec![1, 0, 1, 0, 1, 1], fpp: vec![0; 6] }
}

/// Shift `k` with `expected = t^k * actual`, if one exists.
pub fn row_shift(expected: &[ZPoly], actual: &[ZPoly]) -> Option<i64> {
    let mut shift = None;
    for (e, a) in expected.iter().zip(actual) {
        match (e.min_exp(), a.min_exp()) {
            (None, None) => continue,
            (Some(x), Some(y)) => {
                let k = x - y;
                if shift.is_some_and(|s| s != k) || &a.shift(k) != e {
                    return None;
                }
                shift = Some(k);
            }
            _ => return None,
        }
    }
    Some(shift.unwrap_or(0))
}

/// Per-row shifts aligning `actual` to `expected`, if every row aligns.
pub fn row_shifts(expected: &ZMatrix, actual: &ZMatrix) -> Option<Vec<i64>> {
    (0..expected.rows)
        .map(|i| {
            let e: Vec<ZPoly> = (0..expected.cols).map(|j| expected.get(i, j).clone()).collect();
            let a: Vec<ZPoly> = (0..actual.cols).map(|j| actual.get(i, j).clone()).collect();
            row_shift(&e, &a)
        })
        .collect()
}

/// Shifts that align all of several matrix pairs with the same row factors.
pub fn common_row_shifts(pairs: &[(&ZMatrix, &ZMatrix)]) -> Option<Vec<i64>> {
    let n = pairs[0].0.rows;
    let mut out = vec![None; n];
    for (e, a) in pairs {
        for i in 0..n {
            let er: Vec<ZPoly> = (0..e.cols).map(|j| e.get(i, j).clone()).collect();
            let ar: Vec<ZPoly> = (0..a.cols).map(|j| a.get(i, j).clone()).collect();
            let all_zero = er.iter().all(|p| p.is_zero()) && ar.iter().all(|p| p.is_zero());
            let k = row_shift(&er, &ar)?;
            if all_zero {
                continue;
            }
            match out[i] {
                None => out[i] = Some(k),
                Some(prev) if prev != k => return None,
                _ => {}
            }
        }
    }
    Some(out.into_iter().map(|k| k.unwrap_or(0)).collect())
}

// ---- independent polynomial oracle: dense i128 coefficient maps ----

pub type Oracle = BTreeMap<i64, i128>;

pub fn oracle_from(p: &ZPoly) -> Oracle {
    p.terms().map(|(e, c)| (e, c.to_i128().unwrap())).collect()
}

fn oracle_clean(mut p: Oracle) -> Oracle {
    p.retain(|_, c| *c != 0);
    p
}

pub fn oracle_mul(a: &Oracle, b: &Oracle) -> Oracle {
    let mut out = Oracle::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_default() += ca * cb;
        }
    }
    oracle_clean(out)
}

pub fn oracle_add(a: &Oracle, b: &Oracle, sign: i128) -> Oracle {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(*e).or_default() += sign * c;
    }
    oracle_clean(out)
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<Oracle>]) -> Oracle {
    let n = m.len();
    if n == 0 {
        return BTreeMap::from([(0, 1)]);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Oracle::new();
    for j in 0..n {
        if m[0][j].is_empty() {
            continue;
        }
        let minor: Vec<Vec<Oracle>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect()).collect();
        let term = oracle_mul(&m[0][j], &cofactor_det(&minor));
        acc = oracle_add(&acc, &term, if j % 2 == 0 { 1 } else { -1 });
    }
    acc
}

pub fn oracle_matrix(m: &ZMatrix) -> Vec<Vec<Oracle>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| oracle_from(m.get(i, j))).collect()).collect()
}

pub fn oracle_to_poly(p: &Oracle) -> ZPoly {
    ZPoly::from_terms(p.iter().map(|(e, c)| (*e, BigInt::from(*c))))
}

// ---- relabelings used by the independence properties ----

/// The same triangulation with tetrahedron `j` renamed `perm[j]`. The edge
/// order, cocycle and meridian path are dropped; curve columns move along.
pub fn relabel(t: &Triangulation, perm: &[usize]) -> Triangulation {
    let n = t.n_tets;
    let mut gluings = vec![[(0usize, [0u8, 1, 2, 3]); 4]; n];
    for j in 0..n {
        for f in 0..4 {
            let (nbr, p) = t.gluings[j][f];
            gluings[perm[j]][f] = (perm[nbr], p);
        }
    }
    let mv = |v: &Vec<i64>| {
        let mut out = vec![0; n];
        for j in 0..n {
            out[perm[j]] = v[j];
        }
        out
    };
    let curves = t
        .peripheral_curves
        .iter()
        .map(|c| twisted_nz::triangulation::PeripheralCurve { name: c.name.clone(), c: mv(&c.c), cp: mv(&c.cp), cpp: mv(&c.cpp) })
        .collect();
    Triangulation {
        n_tets: n,
        gluings,
        peripheral_curves: curves,
        meridian_dual_path: None,
        cocycle: None,
        edge_order: None,
    }
}

/// Evaluates a canonical coefficient vector's distance to another, allowing
/// an overall sign.
pub fn dist_up_to_sign(p: &[Complex64], q: &[Complex64]) -> f64 {
    if p.len() != q.len() {
        return f64::INFINITY;
    }
    let d = |s: f64| p.iter().zip(q).map(|(a, b)| (a * s - b).norm()).fold(0.0, f64::max);
    d(1.0).min(d(-1.0))
}

// ---- normal form checks, in i128 ----

/// Product in i128: the transforms can carry large entries.
pub fn wide_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    a.iter().map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect()).collect()
}

pub fn wide(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.iter().map(|r| r.iter().map(|x| *x as i128).collect()).collect()
}

pub fn check_smith(m: &IntMatrix, cols: usize) -> Result<(), String> {
    let s = smith_decomposition(m, cols);
    let rows = m.len();
    if wide_mul(&wide_mul(&wide(&s.u), &wide(m)), &wide(&s.v)) != wide(&s.d) {
        return Err("U M V != D".into());
    }
    if int_det(&s.u).abs() != BigInt::from(1) || int_det(&s.v).abs() != BigInt::from(1) {
        return Err("not unimodular".into());
    }
    for i in 0..rows {
        for j in 0..cols {
            if i != j && s.d[i][j] != 0 {
                return Err(format!("off-diagonal entry at ({i}, {j})"));
            }
        }
    }
    let diag = s.diagonal();
    if diag.iter().any(|d| *d < 0) {
        return Err("negative invariant factor".into());
    }
    for w in diag.windows(2) {
        let ok = if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 };
        if !ok {
            return Err(format!("divisibility fails on {diag:?}"));
        }
    }
    Ok(())
}

pub fn check_hermite(m: &IntMatrix, cols: usize) -> Result<(), String> {
    let (h, u) = hermite_normal_form(m, cols);
    if wide_mul(&wide(&u), &wide(m)) != wide(&h) {
        return Err("U M != H".into());
    }
    if int_det(&u).abs() != BigInt::from(1) {
        return Err("not unimodular".into());
    }
    // upper echelon with positive pivots and reduced entries above them
    let mut last = None::<usize>;
    for (i, row) in h.iter().enumerate() {
        match row.iter().position(|x| *x != 0) {
            None => {
                if h[i..].iter().any(|r| r.iter().any(|x| *x != 0)) {
                    return Err("zero row above nonzero row".into());
                }
                break;
            }
            Some(p) => {
                if last.is_some_and(|q| p <= q) || row[p] <= 0 {
                    return Err(format!("bad pivot in row {i}"));
                }
                if h[..i].iter().any(|r| r[p] < 0 || r[p] >= row[p]) {
                    return Err(format!("column {p} not reduced above pivot"));
                }
                last = Some(p);
            }
        }
    }
    Ok(())
}

// ---- moves that must leave the invariant alone ----

/// Rotates the quad roles of tetrahedron `j`: the new `z` is the old `z'`.
pub fn rotate_quad(d: &TwistedGluingData, z: &[Complex64], f: &Flattening, j: usize) -> (TwistedGluingData, Vec<Complex64>, Flattening) {
    let n = d.size();
    let pick = |q: usize| -> ZMatrix {
        ZMatrix::from_fn(n, n, |r, c| {
            let src = if c == j { (q + 1) % 3 } else { q };
            d.g[src].get(r, c).clone()
        })
    };
    let mut out = d.clone();
    out.g = [pick(0), pick(1), pick(2)];
    let mut z2 = z.to_vec();
    z2[j] = 1.0 / (1.0 - z[j]);
    let mut f2 = f.clone();
    (f2.f[j], f2.fp[j], f2.fpp[j]) = (f.fp[j], f.fpp[j], f.f[j]);
    (out, z2, f2)
}

/// The flattening system as a matrix on `(f, f', f'')`.
pub fn flattening_system(t: &Triangulation) -> Vec<Vec<i64>> {
    let n = t.n_tets;
    let g = t.gluing_matrices().unwrap();
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| (0..3).flat_map(|q| g[q][i].clone()).collect()).collect();
    for j in 0..n {
        rows.push((0..3 * n).map(|k| i64::from(k % n == j)).collect());
    }
    for c in &t.peripheral_curves {
        rows.push(c.rows().iter().flat_map(|r| r.iter().copied()).collect());
    }
    rows
}
