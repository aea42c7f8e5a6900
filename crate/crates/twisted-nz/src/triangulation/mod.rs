//! Ideal triangulations: gluing data, face pairings, edge classes and
//! gluing-equation matrices.
//!
//! Face `i` of a tetrahedron is the face opposite vertex `i`. A gluing
//! `(nbr, p)` stored at `(tet, face)` identifies vertex `v` of `tet` with
//! vertex `p[v]` of `nbr`.

mod cover;
mod pachner;

pub use cover::cyclic_cover;
pub use pachner::{pachner_23, PachnerMove};

use serde::{Deserialize, Serialize};

use crate::IntMatrix;

pub type Perm = [u8; 4];

/// Quad index (0 = z, 1 = z', 2 = z'') of the edge spanned by two vertices.
pub fn quad(a: u8, b: u8) -> usize {
    match (a.min(b), a.max(b)) {
        (0, 1) | (2, 3) => 0,
        (0, 2) | (1, 3) => 1,
        (0, 3) | (1, 2) => 2,
        _ => panic!("not an edge: {a}{b}"),
    }
}

pub const EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn perm_inverse(p: &Perm) -> Perm {
    let mut q = [0u8; 4];
    for (i, &v) in p.iter().enumerate() {
        q[v as usize] = i as u8;
    }
    q
}

/// `(a ∘ b)[v] = a[b[v]]`.
pub fn perm_compose(a: &Perm, b: &Perm) -> Perm {
    [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize], a[b[3] as usize]]
}

pub fn perm_is_even(p: &Perm) -> bool {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

fn is_bijection(p: &[u8]) -> bool {
    p.len() == 4 && (0..4u8).all(|v| p.contains(&v))
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum TriangulationError {
    #[error("malformed triangulation file: {0}")]
    Syntax(String),
    #[error("tetrahedron {tet} face {face}: {msg}")]
    BadGluing { tet: usize, face: usize, msg: String },
    #[error("expected {expected} edge classes, found {found} (class sizes {sizes:?})")]
    EdgeCount { expected: usize, found: usize, sizes: Vec<usize> },
    #[error("edge walk from tetrahedron {tet} edge {a}{b} does not close")]
    NonClosingWalk { tet: usize, a: u8, b: u8 },
    #[error("{0}")]
    Invalid(String),
    #[error("cocycle violates the relation of edge {edge} (offset {offset})")]
    InvalidCocycle { edge: usize, offset: i64 },
    #[error("degenerate 2-3 move: {0}")]
    DegenerateMove(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeripheralCurve {
    pub name: String,
    #[serde(rename = "C")]
    pub c: Vec<i64>,
    #[serde(rename = "Cp")]
    pub cp: Vec<i64>,
    #[serde(rename = "Cpp")]
    pub cpp: Vec<i64>,
}

impl PeripheralCurve {
    pub fn rows(&self) -> [&Vec<i64>; 3] {
        [&self.c, &self.cp, &self.cpp]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub n_tets: usize,
    pub gluings: Vec<[(usize, Perm); 4]>,
    pub peripheral_curves: Vec<PeripheralCurve>,
    pub meridian_dual_path: Option<Vec<i64>>,
    pub cocycle: Option<Vec<i64>>,
    /// One tetrahedron edge per edge class, fixing order and starting point.
    pub edge_order: Option<Vec<(usize, u8, u8)>>,
}

#[derive(Serialize, Deserialize)]
struct RawTriangulation {
    num_tetrahedra: usize,
    gluings: Vec<Vec<(usize, Vec<u8>)>>,
    #[serde(default)]
    peripheral_curves: Vec<PeripheralCurve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meridian_dual_path: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cocycle: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge_order: Option<Vec<(usize, u8, u8)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FacePairing {
    pub index: usize,
    pub side_a: (usize, u8),
    pub side_b: (usize, u8),
}

impl FacePairing {
    pub fn tail(&self) -> usize {
        self.side_a.0
    }
    pub fn head(&self) -> usize {
        self.side_b.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Visit {
    pub tet: usize,
    pub edge: (u8, u8),
    pub quad: usize,
    /// Face pairing crossed when leaving this tetrahedron.
    pub pairing: usize,
    pub sign: i64,
    pub offset: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    pub index: usize,
    pub start: (usize, u8, u8),
    pub walk: Vec<Visit>,
}

impl EdgeClass {
    pub fn valence(&self) -> usize {
        self.walk.len()
    }
}

pub fn parse_triangulation(text: &str) -> Result<Triangulation, TriangulationError> {
    let raw: RawTriangulation = serde_json::from_str(text).map_err(|e| TriangulationError::Syntax(e.to_string()))?;
    let n = raw.num_tetrahedra;
    if n == 0 {
        return Err(TriangulationError::Invalid("num_tetrahedra must be positive".into()));
    }
    if raw.gluings.len() != n {
        return Err(TriangulationError::Invalid(format!("expected {n} gluing rows, found {}", raw.gluings.len())));
    }
    let mut gluings = Vec::with_capacity(n);
    for (t, row) in raw.gluings.iter().enumerate() {
        if row.len() != 4 {
            return Err(TriangulationError::BadGluing { tet: t, face: row.len(), msg: "expected 4 faces".into() });
        }
        let mut faces = [(0usize, [0u8; 4]); 4];
        for (f, (nbr, p)) in row.iter().enumerate() {
            if !is_bijection(p) {
                return Err(TriangulationError::BadGluing {
                    tet: t,
                    face: f,
                    msg: format!("permutation {p:?} is not a bijection of 0..3"),
                });
            }
            faces[f] = (*nbr, [p[0], p[1], p[2], p[3]]);
        }
        gluings.push(faces);
    }
    let tri = Triangulation {
        n_tets: n,
        gluings,
        peripheral_curves: raw.peripheral_curves,
        meridian_dual_path: raw.meridian_dual_path,
        cocycle: raw.cocycle,
        edge_order: raw.edge_order,
    };
    tri.validate()?;
    Ok(tri)
}

impl Triangulation {
    /// Checks every structural invariant, including the edge count.
    pub fn validate(&self) -> Result<(), TriangulationError> {
        let n = self.n_tets;
        if self.gluings.len() != n {
            return Err(TriangulationError::Invalid("gluing table length differs from n_tets".into()));
        }
        for t in 0..n {
            for f in 0..4 {
                let (u, p) = self.gluings[t][f];
                let bad = |msg: String| TriangulationError::BadGluing { tet: t, face: f, msg };
                if !is_bijection(&p) {
                    return Err(bad(format!("permutation {p:?} is not a bijection of 0..3")));
                }
                if u >= n {
                    return Err(bad(format!("neighbour {u} out of range")));
                }
                let g = p[f] as usize;
                if (u, g) == (t, f) {
                    return Err(bad("face glued to itself".into()));
                }
                let (back, q) = self.gluings[u][g];
                if back != t || perm_compose(&q, &p) != [0, 1, 2, 3] {
                    return Err(bad(format!("gluing is not an involution (partner tetrahedron {u} face {g})")));
                }
                if perm_is_even(&p) {
                    return Err(bad(format!("permutation {p:?} reverses orientation")));
                }
            }
        }
        for c in &self.peripheral_curves {
            if c.rows().iter().any(|r| r.len() != n) {
                return Err(TriangulationError::Invalid(format!("peripheral curve {} has wrong length", c.name)));
            }
        }
        if let Some(phi) = &self.cocycle {
            if phi.len() != 2 * n {
                return Err(TriangulationError::Invalid(format!("cocycle needs {} entries", 2 * n)));
            }
        }
        if let Some(path) = &self.meridian_dual_path {
            if path.iter().any(|&k| k == 0 || k.unsigned_abs() as usize > 2 * n) {
                return Err(TriangulationError::Invalid("dual path entries must be ±1..±2N".into()));
            }
        }
        if let Some(order) = &self.edge_order {
            if order.len() != n {
                return Err(TriangulationError::Invalid(format!("edge_order needs {n} entries")));
            }
            for &(t, a, b) in order {
                if t >= n || a > 3 || b > 3 || a == b {
                    return Err(TriangulationError::Invalid(format!("bad edge representative [{t},{a},{b}]")));
                }
            }
        }
        let classes = self.compute_edge_classes()?;
        if classes.len() != n {
            return Err(TriangulationError::EdgeCount {
                expected: n,
                found: classes.len(),
                sizes: classes.iter().map(|c| c.valence()).collect(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let raw = RawTriangulation {
            num_tetrahedra: self.n_tets,
            gluings: self.gluings.iter().map(|row| row.iter().map(|(u, p)| (*u, p.to_vec())).collect()).collect(),
            peripheral_curves: self.peripheral_curves.clone(),
            meridian_dual_path: self.meridian_dual_path.clone(),
            cocycle: self.cocycle.clone(),
            edge_order: self.edge_order.clone(),
        };
        serde_json::to_value(raw).expect("triangulation serializes")
    }

    pub fn peripheral_curve(&self, name: &str) -> Option<&PeripheralCurve> {
        self.peripheral_curves.iter().find(|c| c.name == name)
    }

    /// The curve used for completeness: named "meridian"/"mu", else the first.
    pub fn meridian(&self) -> Option<&PeripheralCurve> {
        self.peripheral_curve("meridian").or_else(|| self.peripheral_curve("mu")).or(self.peripheral_curves.first())
    }

    /// The curve with vanishing cocycle value: named "longitude"/"lambda".
    pub fn longitude(&self) -> Option<&PeripheralCurve> {
        self.peripheral_curve("longitude").or_else(|| self.peripheral_curve("lambda"))
    }

    /// Face pairings ordered by their lexicographically smaller side.
    pub fn face_pairings(&self) -> Vec<FacePairing> {
        let mut out = Vec::with_capacity(2 * self.n_tets);
        for t in 0..self.n_tets {
            for f in 0..4u8 {
                let (u, p) = self.gluings[t][f as usize];
                let other = (u, p[f as usize]);
                if (t, f) < other {
                    out.push(FacePairing { index: out.len(), side_a: (t, f), side_b: other });
                }
            }
        }
        out
    }

    /// `(pairing index, +1 if (tet, face) is side_a else -1)`.
    pub fn pairing_table(&self) -> Vec<[(usize, i64); 4]> {
        let mut table = vec![[(0usize, 0i64); 4]; self.n_tets];
        for fp in self.face_pairings() {
            table[fp.side_a.0][fp.side_a.1 as usize] = (fp.index, 1);
            table[fp.side_b.0][fp.side_b.1 as usize] = (fp.index, -1);
        }
        table
    }

    fn walk_from(
        &self,
        table: &[[(usize, i64); 4]],
        tet: usize,
        a: u8,
        b: u8,
    ) -> Result<Vec<Visit>, TriangulationError> {
        let (a, b) = (a.min(b), a.max(b));
        let mut rest = (0..4u8).filter(|v| *v != a && *v != b);
        let (c, d) = (rest.next().unwrap(), rest.next().unwrap());
        let (mut t, mut va, mut vb, mut vc, mut vd) = (tet, a, b, c, d);
        let mut walk = Vec::new();
        loop {
            let (pairing, sign) = table[t][vc as usize];
            walk.push(Visit { tet: t, edge: (va.min(vb), va.max(vb)), quad: quad(va, vb), pairing, sign, offset: 0 });
            let (u, p) = self.gluings[t][vc as usize];
            (va, vb, vc, vd) = (p[va as usize], p[vb as usize], p[vd as usize], p[vc as usize]);
            t = u;
            if t == tet && (va.min(vb), va.max(vb)) == (a, b) {
                return Ok(walk);
            }
            if walk.len() > 6 * self.n_tets {
                return Err(TriangulationError::NonClosingWalk { tet, a, b });
            }
        }
    }

    /// Orbits of tetrahedron edges under the gluings, in `edge_order` if
    /// present, otherwise in order of first appearance.
    pub fn compute_edge_classes(&self) -> Result<Vec<EdgeClass>, TriangulationError> {
        let table = self.pairing_table();
        let mut seen = vec![[false; 6]; self.n_tets];
        let edge_slot = |a: u8, b: u8| EDGES.iter().position(|&e| e == (a.min(b), a.max(b))).unwrap();
        let mut starts: Vec<(usize, u8, u8)> = self.edge_order.clone().unwrap_or_default();
        let mut classes = Vec::new();
        let mut scan = (0..self.n_tets).flat_map(|t| EDGES.iter().map(move |&(a, b)| (t, a, b)));
        loop {
            let start = if classes.len() < starts.len() {
                starts[classes.len()]
            } else {
                match scan.by_ref().find(|&(t, a, b)| !seen[t][edge_slot(a, b)]) {
                    Some(s) => {
                        starts.push(s);
                        s
                    }
                    None => break,
                }
            };
            if seen[start.0][edge_slot(start.1, start.2)] {
                return Err(TriangulationError::Invalid(format!(
                    "edge representative {start:?} repeats an earlier edge class"
                )));
            }
            let walk = self.walk_from(&table, start.0, start.1, start.2)?;
            for v in &walk {
                seen[v.tet][edge_slot(v.edge.0, v.edge.1)] = true;
            }
            let (t, a, b) = start;
            classes.push(EdgeClass { index: classes.len(), start: (t, a.min(b), a.max(b)), walk });
        }
        Ok(classes)
    }

    /// Edge-by-face-pairing matrix of signed crossing counts.
    pub fn relation_matrix(&self) -> Result<IntMatrix, TriangulationError> {
        let classes = self.compute_edge_classes()?;
        let mut r = vec![vec![0i64; 2 * self.n_tets]; classes.len()];
        for (i, class) in classes.iter().enumerate() {
            for v in &class.walk {
                r[i][v.pairing] += v.sign;
            }
        }
        Ok(r)
    }

    /// `(G, G', G'')`: entry `(i, j)` counts corners of tetrahedron `j` with
    /// the given quad at edge `i`.
    pub fn gluing_matrices(&self) -> Result<[IntMatrix; 3], TriangulationError> {
        let classes = self.compute_edge_classes()?;
        let n = self.n_tets;
        let mut g = [vec![vec![0i64; n]; classes.len()], vec![vec![0i64; n]; classes.len()], vec![
            vec![0i64; n];
            classes.len()
        ]];
        for (i, class) in classes.iter().enumerate() {
            for v in &class.walk {
                g[v.quad][i][v.tet] += 1;
            }
        }
        Ok(g)
    }

    /// Checks `R φ = 0`.
    pub fn check_cocycle(&self, phi: &[i64]) -> Result<(), TriangulationError> {
        if phi.len() != 2 * self.n_tets {
            return Err(TriangulationError::Invalid(format!("cocycle needs {} entries", 2 * self.n_tets)));
        }
        for (edge, row) in self.relation_matrix()?.iter().enumerate() {
            let offset: i64 = row.iter().zip(phi).map(|(a, b)| a * b).sum();
            if offset != 0 {
                return Err(TriangulationError::InvalidCocycle { edge, offset });
            }
        }
        Ok(())
    }

    /// Value of a cocycle along a signed dual path.
    pub fn dual_path_value(path: &[i64], phi: &[i64]) -> i64 {
        path.iter().map(|&k| k.signum() * phi[k.unsigned_abs() as usize - 1]).sum()
    }
}

/// `A = G - G'`, `B = G'' - G'`.
pub fn nz_matrices(g: &[IntMatrix; 3]) -> (IntMatrix, IntMatrix) {
    let sub = |x: &IntMatrix, y: &IntMatrix| -> IntMatrix {
        x.iter().zip(y).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a - b).collect()).collect()
    };
    (sub(&g[0], &g[1]), sub(&g[2], &g[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn quads_pair_opposite_edges() {
        assert_eq!(quad(0, 1), quad(2, 3));
        assert_eq!(quad(0, 2), quad(1, 3));
        assert_eq!(quad(3, 0), quad(1, 2));
    }

    #[test]
    fn figure_eight_classes() {
        let t = fixtures::figure_eight();
        let classes = t.compute_edge_classes().unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.valence() == 6));
        assert_eq!(t.face_pairings().len(), 4);
    }

    #[test]
    fn rejects_non_bijection() {
        let text = fixtures::FIGURE_EIGHT_JSON.replacen("[1, 0, 2, 3]", "[0, 0, 1, 2]", 1);
        match parse_triangulation(&text) {
            Err(TriangulationError::BadGluing { tet: 0, face: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_broken_involution() {
        let text = fixtures::FIGURE_EIGHT_JSON.replacen("[1, [0, 2, 1, 3]]", "[1, [0, 3, 2, 1]]", 1);
        assert!(matches!(parse_triangulation(&text), Err(TriangulationError::BadGluing { .. })));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_triangulation("{\"num_tetrahedra\": 2"), Err(TriangulationError::Syntax(_))));
    }
}
