use twisted_nz::fixtures;
use twisted_nz::homology::{smith_decomposition, solve_cocycle, solve_flattening};
use twisted_nz::triangulation::Triangulation;

fn main() {
    for mut t in [fixtures::figure_eight(), fixtures::six_three()] {
        let r = t.relation_matrix().unwrap();
        let smith = smith_decomposition(&r, 2 * t.n_tets);
        println!("--- {} tetrahedra", t.n_tets);
        println!("relation matrix invariant factors: {:?}", smith.diagonal());
        let c = solve_cocycle(&t).unwrap();
        println!("cocycle {:?} (sign ambiguous: {})", c.values, c.sign_ambiguous);
        if let Some(path) = &t.meridian_dual_path {
            println!("value on the meridian: {}", Triangulation::dual_path_value(path, &c.values));
        }
        println!("flattening {:?}", solve_flattening(&t).unwrap());

        t.meridian_dual_path = None;
        let c = solve_cocycle(&t).unwrap();
        println!("without a meridian path: {:?} (sign ambiguous: {})", c.values, c.sign_ambiguous);
    }
}
