use num_complex::Complex64;

use super::{perm_compose, perm_inverse, perm_is_even, quad, PeripheralCurve, Perm, Triangulation, TriangulationError};
use crate::homology::{apply_coboundary, solve_integer, Flattening};

/// Result of a 2-3 move on the bipyramid around one face pairing.
///
/// The new tetrahedra are `0, 1, 2` (in the roles a, b, c); the surviving
/// tetrahedra follow in their old order. Edge 0 is the new edge; edge
/// `i + 1` is old edge `i` with the same starting lift.
#[derive(Clone, Debug)]
pub struct PachnerMove {
    pub triangulation: Triangulation,
    pub shapes: Option<Vec<Complex64>>,
    pub flattening: Option<Flattening>,
    pub alpha: usize,
    pub beta: usize,
    pub pairing: usize,
    /// Quad of beta playing the role of its z parameter.
    pub beta_rotation: usize,
    /// Old cocycle after a coboundary making the bipyramid one lift.
    pub old_cocycle: Option<Vec<i64>>,
    /// Old tetrahedron index to new index (None for alpha and beta).
    pub tet_map: Vec<Option<usize>>,
}

const N: usize = 0;
const S: usize = 1;

/// Vertices of new tetrahedron `k` as bipyramid points: N, S, then the
/// equatorial points 2 + i.
fn new_tet_points(k: usize) -> [usize; 4] {
    [N, 2 + (k + 2) % 3, S, 2 + (k + 1) % 3]
}

fn local_index(pts: &[usize; 4], point: usize) -> Option<u8> {
    pts.iter().position(|&q| q == point).map(|i| i as u8)
}

fn edge_shape(z: Complex64, q: usize) -> Complex64 {
    match q {
        0 => z,
        1 => 1.0 / (1.0 - z),
        _ => 1.0 - 1.0 / z,
    }
}

/// 2-3 move on the face pairing `shared_face`, transferring shapes,
/// flattening, peripheral curves and the stored cocycle when present.
pub fn pachner_23(
    t: &Triangulation,
    shared_face: usize,
    z: Option<&[Complex64]>,
    f: Option<&Flattening>,
) -> Result<PachnerMove, TriangulationError> {
    let pairings = t.face_pairings();
    let fp = *pairings
        .get(shared_face)
        .ok_or_else(|| TriangulationError::Invalid(format!("no face pairing {shared_face}")))?;
    let (alpha, fa) = fp.side_a;
    let beta = fp.side_b.0;
    if alpha == beta {
        return Err(TriangulationError::DegenerateMove(format!("face pairing {shared_face} glues tetrahedron {alpha} to itself")));
    }
    let p = t.gluings[alpha][fa as usize].1;

    // alpha vertices (fa, a0, a1, a2) positively ordered, with a0 on fa's z edge
    let a0 = fa ^ 1;
    let mut rest = (0..4u8).filter(|&v| v != fa && v != a0);
    let (x, y) = (rest.next().unwrap(), rest.next().unwrap());
    let a = if perm_is_even(&[fa, a0, x, y]) { [a0, x, y] } else { [a0, y, x] };
    let alpha_point = |label: u8| if label == fa { N } else { 2 + a.iter().position(|&v| v == label).unwrap() };
    let beta_point = |label: u8| if label == p[fa as usize] { S } else { 2 + a.iter().position(|&v| p[v as usize] == label).unwrap() };
    let beta_rotation = quad(p[fa as usize], p[a[0] as usize]);

    let n_old = t.n_tets;
    let mut tet_map = vec![None; n_old];
    let mut next = 3;
    for (old, slot) in tet_map.iter_mut().enumerate() {
        if old != alpha && old != beta {
            *slot = Some(next);
            next += 1;
        }
    }

    // external faces of the bipyramid: (new tet, local face, old tet, old face, local->old labels)
    let mut external: Vec<(usize, u8, usize, u8, Perm)> = Vec::new();
    for k in 0..3 {
        let pts = new_tet_points(k);
        let ak = a[k];
        let mut sigma = [0u8; 4];
        for u in 0..4 {
            sigma[u] = if pts[u] == S { ak } else { [fa, a[0], a[1], a[2]][if pts[u] == N { 0 } else { pts[u] - 1 }] };
        }
        external.push((k, 2, alpha, ak, sigma));
        let mut sigma = [0u8; 4];
        for u in 0..4 {
            sigma[u] = if pts[u] == N { p[ak as usize] } else if pts[u] == S { p[fa as usize] } else { p[a[pts[u] - 2] as usize] };
        }
        external.push((k, 0, beta, p[ak as usize], sigma));
    }

    let mut gluings: Vec<[(usize, Perm); 4]> = vec![[(0, [0, 1, 2, 3]); 4]; n_old + 1];
    for (old, new) in tet_map.iter().enumerate() {
        if let Some(new) = new {
            gluings[*new] = t.gluings[old];
            for entry in gluings[*new].iter_mut() {
                if let Some(m) = tet_map[entry.0] {
                    entry.0 = m;
                }
            }
        }
    }
    for k in 0..3 {
        let pts = new_tet_points(k);
        for face in [1u8, 3] {
            let shared: Vec<usize> = (0..4).filter(|&u| u != face as usize).map(|u| pts[u]).collect();
            let other = (0..3).find(|&m| m != k && shared.iter().all(|&q| new_tet_points(m).contains(&q))).unwrap();
            let opts = new_tet_points(other);
            let missing = (0..4u8).find(|&u| !shared.contains(&opts[u as usize])).unwrap();
            let mut perm = [0u8; 4];
            for u in 0..4 {
                perm[u] = if u == face as usize { missing } else { local_index(&opts, pts[u]).unwrap() };
            }
            gluings[k][face as usize] = (other, perm);
        }
    }
    for &(k, face, t0, f0, sigma) in &external {
        let (t1, q) = t.gluings[t0][f0 as usize];
        let f1 = q[f0 as usize];
        let to_old = perm_compose(&q, &sigma);
        if t1 == alpha || t1 == beta {
            let &(k1, face1, _, _, sigma1) = external.iter().find(|e| e.2 == t1 && e.3 == f1).unwrap();
            gluings[k][face as usize] = (k1, perm_compose(&perm_inverse(&sigma1), &to_old));
            debug_assert_eq!(perm_compose(&perm_inverse(&sigma1), &to_old)[face as usize], face1);
        } else {
            let m = tet_map[t1].unwrap();
            gluings[k][face as usize] = (m, to_old);
            gluings[m][f1 as usize] = (k, perm_inverse(&to_old));
        }
    }

    // how old quads of alpha and beta split over the new tetrahedra:
    // (old tet, old quad, [(new tet, new quad); 2])
    let mut splits: Vec<(usize, usize, [(usize, usize); 2])> = Vec::new();
    for i in 0..3 {
        splits.push((alpha, quad(fa, a[i]), [((i + 1) % 3, 0), ((i + 2) % 3, 2)]));
        splits.push((beta, quad(p[fa as usize], p[a[i] as usize]), [((i + 2) % 3, 0), ((i + 1) % 3, 2)]));
    }

    let classes = t.compute_edge_classes()?;
    let mut edge_order = vec![(0usize, 0u8, 2u8)];
    for c in &classes {
        let (tet, x, y) = c.start;
        if let Some(m) = tet_map[tet] {
            edge_order.push((m, x, y));
            continue;
        }
        let (px, py) = if tet == alpha { (alpha_point(x), alpha_point(y)) } else { (beta_point(x), beta_point(y)) };
        let k = (0..3).find(|&k| new_tet_points(k).contains(&px) && new_tet_points(k).contains(&py)).unwrap();
        let pts = new_tet_points(k);
        edge_order.push((k, local_index(&pts, px).unwrap(), local_index(&pts, py).unwrap()));
    }

    let curves = t
        .peripheral_curves
        .iter()
        .map(|curve| {
            let mut rows = [vec![0i64; n_old + 1], vec![0i64; n_old + 1], vec![0i64; n_old + 1]];
            for (old, new) in tet_map.iter().enumerate() {
                if let Some(new) = new {
                    for q in 0..3 {
                        rows[q][*new] = curve.rows()[q][old];
                    }
                }
            }
            for (old, q, targets) in &splits {
                let c = curve.rows()[*q][*old];
                for (k, nq) in targets {
                    rows[*nq][*k] += c;
                }
            }
            let [c, cp, cpp] = rows;
            PeripheralCurve { name: curve.name.clone(), c, cp, cpp }
        })
        .collect();

    let mut new_t = Triangulation {
        n_tets: n_old + 1,
        gluings,
        peripheral_curves: curves,
        meridian_dual_path: None,
        cocycle: None,
        edge_order: Some(edge_order),
    };

    let mut old_cocycle = None;
    if let Some(phi) = &t.cocycle {
        let mut c = vec![0i64; n_old];
        c[beta] = -phi[shared_face];
        let adjusted = apply_coboundary(t, phi, &c);
        let table = t.pairing_table();
        let mut values = Vec::new();
        for np in new_t.face_pairings() {
            let (tet, face) = np.side_a;
            let old_side = if tet < 3 {
                external.iter().find(|e| e.0 == tet && e.1 == face).map(|e| (e.2, e.3))
            } else {
                Some(((0..n_old).find(|&o| tet_map[o] == Some(tet)).unwrap(), face))
            };
            values.push(match old_side {
                Some((ot, of)) => {
                    let (idx, s) = table[ot][of as usize];
                    s * adjusted[idx]
                }
                None => 0,
            });
        }
        new_t.cocycle = Some(values);
        old_cocycle = Some(adjusted);
    }

    new_t.validate()?;

    let shapes = match z {
        None => None,
        Some(z) => {
            let za = edge_shape(z[alpha], 0);
            let w = edge_shape(z[beta], beta_rotation);
            let denom = 1.0 - w * za;
            if denom.norm() < 1e-12 {
                return Err(TriangulationError::DegenerateMove("z_alpha z_beta = 1".into()));
            }
            let s = za * (1.0 - w) / denom;
            let eq = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), za];
            let mut out = vec![Complex64::new(0.0, 0.0); n_old + 1];
            for k in 0..3 {
                let (v1, v3) = (eq[(k + 2) % 3], eq[(k + 1) % 3]);
                let zk = (v3 - v1) / (s - v1);
                if !zk.is_finite() || zk.norm() < 1e-12 || (zk - 1.0).norm() < 1e-12 {
                    return Err(TriangulationError::DegenerateMove(format!("new tetrahedron {k} is flat")));
                }
                out[k] = zk;
            }
            for (old, new) in tet_map.iter().enumerate() {
                if let Some(new) = new {
                    out[*new] = z[old];
                }
            }
            Some(out)
        }
    };

    let flattening = match f {
        None => None,
        Some(f) => {
            // unknowns: (f_k, f'_k, f''_k) for k = 0, 1, 2
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for (old, q, targets) in &splits {
                let mut row = vec![0i64; 9];
                for (k, nq) in targets {
                    row[3 * k + nq] += 1;
                }
                rows.push(row);
                rhs.push(f.rows()[*q][*old]);
            }
            for k in 0..3 {
                let mut row = vec![0i64; 9];
                row[3 * k..3 * k + 3].copy_from_slice(&[1, 1, 1]);
                rows.push(row);
                rhs.push(1);
            }
            rows.push(vec![0, 1, 0, 0, 1, 0, 0, 1, 0]);
            rhs.push(2);
            let sol = solve_integer(&rows, &rhs)
                .ok_or_else(|| TriangulationError::DegenerateMove("flattening does not transfer".into()))?
                .0;
            let mut nf = Flattening { f: vec![0; n_old + 1], fp: vec![0; n_old + 1], fpp: vec![0; n_old + 1] };
            for k in 0..3 {
                nf.f[k] = sol[3 * k];
                nf.fp[k] = sol[3 * k + 1];
                nf.fpp[k] = sol[3 * k + 2];
            }
            for (old, new) in tet_map.iter().enumerate() {
                if let Some(new) = new {
                    nf.f[*new] = f.f[old];
                    nf.fp[*new] = f.fp[old];
                    nf.fpp[*new] = f.fpp[old];
                }
            }
            Some(nf)
        }
    };

    Ok(PachnerMove {
        triangulation: new_t,
        shapes,
        flattening,
        alpha,
        beta,
        pairing: shared_face,
        beta_rotation,
        old_cocycle,
        tet_map,
    })
}
