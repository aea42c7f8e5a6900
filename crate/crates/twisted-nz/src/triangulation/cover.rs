use super::{Triangulation, TriangulationError};

/// The `n`-fold cyclic cover determined by `phi`.
///
/// Tetrahedron `(j, k)` of the cover has index `k * N + j`. Edge classes are
/// ordered so that class `r * N + i` starts at the lift to level `r` of the
/// starting tetrahedron edge of class `i`. The cover carries the cocycle
/// counting wraps around the `n` levels.
pub fn cyclic_cover(t: &Triangulation, phi: &[i64], n: usize) -> Result<Triangulation, TriangulationError> {
    if n == 0 {
        return Err(TriangulationError::Invalid("cover degree must be positive".into()));
    }
    t.check_cocycle(phi)?;
    let big_n = t.n_tets;
    let table = t.pairing_table();
    let level = |j: usize, f: usize, k: usize| -> i64 {
        let (idx, s) = table[j][f];
        k as i64 + s * phi[idx]
    };
    let mut gluings = Vec::with_capacity(n * big_n);
    for k in 0..n {
        for j in 0..big_n {
            let mut row = t.gluings[j];
            for (f, entry) in row.iter_mut().enumerate() {
                let k2 = level(j, f, k).rem_euclid(n as i64) as usize;
                entry.0 = k2 * big_n + entry.0;
            }
            gluings.push(row);
        }
    }
    let classes = t.compute_edge_classes()?;
    let edge_order = (0..n)
        .flat_map(|r| classes.iter().map(move |c| (r * big_n + c.start.0, c.start.1, c.start.2)))
        .collect();
    let mut cover = Triangulation {
        n_tets: n * big_n,
        gluings,
        peripheral_curves: Vec::new(),
        meridian_dual_path: None,
        cocycle: None,
        edge_order: Some(edge_order),
    };
    let wraps = cover
        .face_pairings()
        .iter()
        .map(|fp| {
            let (tet, f) = fp.side_a;
            level(tet % big_n, f as usize, tet / big_n).div_euclid(n as i64)
        })
        .collect();
    cover.cocycle = Some(wraps);
    cover.validate()?;
    Ok(cover)
}
