mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use twisted_nz::fixtures::{figure_eight, six_three, FIGURE_EIGHT_JSON};
use twisted_nz::homology::Flattening;
use twisted_nz::triangulation::*;
use twisted_nz::twist::circulant_gluing;
use twisted_nz::twist::twisted_gluing_matrices;

fn matmul_t(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter().map(|r| b.iter().map(|s| r.iter().zip(s).map(|(x, y)| x * y).sum()).collect()).collect()
}

#[test]
fn figure_eight_parses() {
    let t = figure_eight();
    assert_eq!(t.n_tets, 2);
    let classes = t.compute_edge_classes().unwrap();
    assert_eq!(classes.len(), 2);
    assert!(classes.iter().all(|c| c.valence() == 6));
    assert_eq!(t.face_pairings().len(), 4);
}

#[test]
fn six_three_parses() {
    let t = six_three();
    assert_eq!(t.n_tets, 6);
    let classes = t.compute_edge_classes().unwrap();
    assert_eq!(classes.len(), 6);
    assert_eq!(classes.iter().map(|c| c.valence()).sum::<usize>(), 36);
}

#[test]
fn bad_permutation_names_tetrahedron_and_face() {
    let text = FIGURE_EIGHT_JSON.replacen("[1, [0, 2, 1, 3]]", "[1, [0, 0, 1, 2]]", 1);
    match parse_triangulation(&text) {
        Err(e @ TriangulationError::BadGluing { tet: 0, face: 1, .. }) => {
            let msg = e.to_string();
            assert!(msg.contains("tetrahedron 0") && msg.contains("face 1"), "{msg}");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn inconsistent_and_malformed_inputs_are_rejected() {
    assert!(matches!(parse_triangulation("{"), Err(TriangulationError::Syntax(_))));
    let text = FIGURE_EIGHT_JSON.replacen("\"num_tetrahedra\": 2", "\"num_tetrahedra\": 3", 1);
    assert!(parse_triangulation(&text).is_err());
    // face 0 of tet 0 no longer points back at a matching face
    let text = FIGURE_EIGHT_JSON.replacen("[[1, [1, 0, 2, 3]]", "[[1, [0, 1, 2, 3]]", 1);
    assert!(parse_triangulation(&text).is_err());
}

#[test]
fn figure_eight_gluing_and_nz_matrices() {
    let g = figure_eight().gluing_matrices().unwrap();
    assert_eq!(g, [to_vecs(&G41), to_vecs(&GP41), to_vecs(&GPP41)]);
    let (a, b) = nz_matrices(&g);
    assert_eq!(a, to_vecs(&A41));
    assert_eq!(b, to_vecs(&B41));
    assert_eq!(matmul_t(&a, &b), to_vecs(&ABT41));
}

#[test]
fn six_three_gluing_and_nz_matrices() {
    let g = six_three().gluing_matrices().unwrap();
    assert_eq!(g, g63());
    let (a, b) = nz_matrices(&g);
    assert_eq!(a, a63());
    assert_eq!(b, b63());
    let abt = matmul_t(&a, &b);
    assert_eq!(abt, abt63());
    for i in 0..6 {
        for j in 0..6 {
            assert_eq!(abt[i][j], abt[j][i]);
        }
    }
}

#[test]
fn row_sums_are_valences_and_columns_sum_to_six() {
    for t in [figure_eight(), six_three()] {
        let g = t.gluing_matrices().unwrap();
        let classes = t.compute_edge_classes().unwrap();
        for (i, c) in classes.iter().enumerate() {
            let row: i64 = (0..t.n_tets).map(|j| g[0][i][j] + g[1][i][j] + g[2][i][j]).sum();
            assert_eq!(row as usize, c.valence());
        }
        for j in 0..t.n_tets {
            for q in 0..3 {
                assert_eq!((0..t.n_tets).map(|i| g[q][i][j]).sum::<i64>(), 2);
            }
        }
    }
}

#[test]
fn equal_gluing_matrices_give_zero_nz() {
    let g = vec![vec![1, 2], vec![3, 4]];
    let (a, b) = nz_matrices(&[g.clone(), g.clone(), g]);
    assert!(a.iter().chain(&b).flatten().all(|x| *x == 0));
}

#[test]
fn serialization_round_trips() {
    for t in [figure_eight(), six_three()] {
        let text = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(parse_triangulation(&text).unwrap(), t);
    }
}

#[test]
fn cover_of_degree_one_is_the_same_table() {
    for t in [figure_eight(), six_three()] {
        let phi = t.cocycle.clone().unwrap();
        let c = cyclic_cover(&t, &phi, 1).unwrap();
        assert_eq!(c.gluings, t.gluings);
        assert_eq!(c.gluing_matrices().unwrap(), t.gluing_matrices().unwrap());
    }
}

#[test]
fn covers_have_expected_sizes_and_circulant_gluing() {
    for t in [figure_eight(), six_three()] {
        let phi = t.cocycle.clone().unwrap();
        let d = twisted_gluing_matrices(&t, &phi).unwrap();
        for n in [2usize, 3] {
            let c = cyclic_cover(&t, &phi, n).unwrap();
            assert_eq!(c.n_tets, n * t.n_tets);
            let classes = c.compute_edge_classes().unwrap();
            assert_eq!(classes.len(), n * t.n_tets);
            assert_eq!(classes.iter().map(|e| e.valence()).sum::<usize>(), 6 * n * t.n_tets);
            assert_eq!(c.gluing_matrices().unwrap(), circulant_gluing(&d, n));
        }
    }
}

#[test]
fn pachner_move_on_figure_eight() {
    let t = figure_eight();
    let z0 = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    let z = [z0, z0];
    let f = flattening41();
    let mv = pachner_23(&t, 0, Some(&z), Some(&f)).unwrap();
    let t2 = &mv.triangulation;
    assert_eq!(t2.n_tets, 3);
    assert_eq!(t2.compute_edge_classes().unwrap().len(), 3);

    let g = t2.gluing_matrices().unwrap();
    assert_eq!(g[1][0][..3], [1, 1, 1]);
    assert_eq!(g[0][0][..3], [0, 0, 0]);
    assert_eq!(g[2][0][..3], [0, 0, 0]);

    let shapes = mv.shapes.as_ref().unwrap();
    // z'_a = z_alpha z_beta
    let zp = |w: Complex64| 1.0 / (1.0 - w);
    assert!((zp(shapes[0]) - z0 * z0).norm() < 1e-12);
    assert!((z0 * z0 - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-12);

    let f2: &Flattening = mv.flattening.as_ref().unwrap();
    assert!(f2.is_valid_for(t2));
    assert_eq!(f2.fp[0] + f2.fp[1] + f2.fp[2], 2);
}

#[test]
fn pachner_moves_keep_edge_count_equal_to_tet_count() {
    for t in [figure_eight(), six_three()] {
        for face in 0..t.face_pairings().len() {
            let Ok(mv) = pachner_23(&t, face, None, None) else { continue };
            let t2 = mv.triangulation;
            assert_eq!(t2.n_tets, t.n_tets + 1);
            assert_eq!(t2.compute_edge_classes().unwrap().len(), t2.n_tets);
            let g = t2.gluing_matrices().unwrap();
            assert_eq!(g[1][0][..3], [1, 1, 1]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabelled_fixture_round_trips_and_keeps_valences(seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let t = six_three();
        let mut perm: Vec<usize> = (0..t.n_tets).collect();
        perm.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        let r = relabel(&t, &perm);
        prop_assert!(r.validate().is_ok());
        let text = serde_json::to_string(&r.to_json()).unwrap();
        prop_assert_eq!(&parse_triangulation(&text).unwrap(), &r);
        let mut v1: Vec<usize> = t.compute_edge_classes().unwrap().iter().map(|c| c.valence()).collect();
        let mut v2: Vec<usize> = r.compute_edge_classes().unwrap().iter().map(|c| c.valence()).collect();
        v1.sort();
        v2.sort();
        prop_assert_eq!(v1, v2);
    }
}
