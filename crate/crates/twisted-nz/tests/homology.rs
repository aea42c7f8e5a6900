mod common;

use common::*;
use proptest::prelude::*;
use twisted_nz::fixtures::{figure_eight, six_three};
use twisted_nz::homology::*;
use twisted_nz::triangulation::Triangulation;
use twisted_nz::twist::twisted_gluing_matrices;
use twisted_nz::IntMatrix;

#[test]
fn smith_examples() {
    assert_eq!(smith_decomposition(&vec![vec![3, 0], vec![0, 5]], 2).diagonal(), vec![1, 15]);
    assert_eq!(smith_decomposition(&vec![vec![2, 4], vec![6, 8]], 2).diagonal(), vec![2, 4]);
    let z = smith_decomposition(&vec![vec![0; 3]; 2], 3);
    assert_eq!(z.d, vec![vec![0; 3]; 2]);
    assert_eq!(z.u, vec![vec![1, 0], vec![0, 1]]);
    assert_eq!(z.v, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    for m in [vec![vec![3, 0], vec![0, 5]], vec![vec![2, 4], vec![6, 8]]] {
        check_smith(&m, 2).unwrap();
        check_hermite(&m, 2).unwrap();
    }
}

#[test]
fn integer_solver_and_kernel() {
    let a = vec![vec![2, 4, 6], vec![1, 1, 1]];
    let (x, kernel) = solve_integer(&a, &[4, 1]).unwrap();
    assert_eq!(matvec(&a, &x), vec![4, 1]);
    assert_eq!(kernel.len(), 1);
    assert_eq!(matvec(&a, &kernel[0]), vec![0, 0]);
    assert!(solve_integer(&a, &[3, 1]).is_none());
    assert_eq!(integer_kernel(&a, 3).len(), 1);
}

#[test]
fn solved_cocycles_satisfy_the_edge_relations() {
    for t in [figure_eight(), six_three()] {
        let phi = solve_cocycle(&t).unwrap();
        assert!(!phi.sign_ambiguous);
        let r = t.relation_matrix().unwrap();
        assert!(matvec(&r, &phi.values).iter().all(|x| *x == 0));
        assert!(t.check_cocycle(&phi.values).is_ok());
        assert!(Triangulation::dual_path_value(t.meridian_dual_path.as_ref().unwrap(), &phi.values) > 0);
    }
}

#[test]
fn solved_cocycle_is_cohomologous_to_the_pinned_one() {
    for t in [figure_eight(), six_three()] {
        let pinned = t.cocycle.clone().unwrap();
        let solved = solve_cocycle(&t).unwrap().values;
        let diff: Vec<i64> = solved.iter().zip(&pinned).map(|(a, b)| a - b).collect();
        let (c, _) = solve_integer(&coboundary_matrix(&t), &diff).expect("differ by a coboundary");
        assert_eq!(apply_coboundary(&t, &pinned, &c), solved);

        // the twisted matrices then differ by column and row monomials only
        let dp = twisted_gluing_matrices(&t, &pinned).unwrap();
        let ds = twisted_gluing_matrices(&t, &solved).unwrap();
        let neg: Vec<i64> = c.iter().map(|x| -x).collect();
        let lifted = dp.with_lifts(&vec![0; t.n_tets], &neg);
        let pairs: Vec<_> = (0..3).map(|q| (&ds.g[q], &lifted.g[q])).collect();
        assert!(common_row_shifts(&pairs).is_some());
    }
}

#[test]
fn coboundary_examples() {
    let t = figure_eight();
    let phi = t.cocycle.clone().unwrap();
    assert_eq!(apply_coboundary(&t, &phi, &[0, 0]), phi);
    assert_eq!(apply_coboundary(&t, &phi, &[3, 3]), phi);

    let moved = apply_coboundary(&t, &phi, &[1, 0]);
    assert_ne!(moved, phi);
    let d0 = twisted_gluing_matrices(&t, &phi).unwrap();
    let d1 = twisted_gluing_matrices(&t, &moved).unwrap();
    // column 0 moves by a power of t, column 1 stays up to row factors
    let lifted = d0.with_lifts(&[0, 0], &[-1, 0]);
    let pairs: Vec<_> = (0..3).map(|q| (&d1.g[q], &lifted.g[q])).collect();
    let rows = common_row_shifts(&pairs).expect("column rescaling");
    for q in 0..3 {
        assert_eq!(d1.g[q], lifted.g[q].shift_rows_cols(&rows, &[0, 0]));
    }
}

#[test]
fn flattenings_are_valid() {
    for (t, printed) in [(figure_eight(), flattening41()), (six_three(), flattening63())] {
        assert!(printed.is_valid_for(&t));
        let f = solve_flattening(&t).unwrap();
        assert!(f.is_valid_for(&t));
        assert!((0..t.n_tets).all(|j| f.f[j] + f.fp[j] + f.fpp[j] == 1));
    }
    let mut broken = flattening41();
    broken.fp[0] = 0;
    assert!(!broken.is_valid_for(&figure_eight()));
}

fn int_matrix(max: usize) -> impl Strategy<Value = (IntMatrix, usize)> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(move |m| (m, c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn smith_form_is_correct((m, cols) in int_matrix(6)) {
        prop_assert_eq!(check_smith(&m, cols), Ok(()));
    }

    #[test]
    fn hermite_form_is_correct((m, cols) in int_matrix(6)) {
        prop_assert_eq!(check_hermite(&m, cols), Ok(()));
    }

    #[test]
    fn solver_finds_preimages((m, cols) in int_matrix(5), x in prop::collection::vec(-5i64..=5, 5)) {
        let x = &x[..cols];
        let b = matvec(&m, x);
        let (y, kernel) = solve_integer(&m, &b).unwrap();
        prop_assert_eq!(matvec(&m, &y), b);
        for k in kernel {
            prop_assert!(matvec(&m, &k).iter().all(|v| *v == 0));
        }
    }
}
