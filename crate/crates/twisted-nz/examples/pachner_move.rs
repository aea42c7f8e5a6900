use twisted_nz::fixtures;
use twisted_nz::homology::solve_flattening;
use twisted_nz::invariant::check_pachner_invariance;
use twisted_nz::shapes::solve_shapes;
use twisted_nz::triangulation::pachner_23;

fn main() {
    let t = fixtures::figure_eight();
    let z = solve_shapes(&t, 1e-12).unwrap().z;
    let f = solve_flattening(&t).unwrap();

    let mv = pachner_23(&t, 0, Some(&z), Some(&f)).unwrap();
    let t2 = &mv.triangulation;
    println!("tetrahedra {} -> {}", t.n_tets, t2.n_tets);
    println!("new shapes: {:?}", mv.shapes.as_ref().unwrap());
    println!("new flattening valid: {}", mv.flattening.as_ref().unwrap().is_valid_for(t2));
    println!("G' row of the new edge: {:?}", t2.gluing_matrices().unwrap()[1][0]);

    let phi = t.cocycle.clone().unwrap();
    for face in 0..4 {
        let r = check_pachner_invariance(&t, &phi, &z, &f, face, 1e-8).unwrap();
        println!("face {face}: residual {:.1e}, NZ identity {}", r.residual, r.nz_identity);
    }

    // a second move on the result
    let z2 = mv.shapes.clone().unwrap();
    let f2 = mv.flattening.clone().unwrap();
    let r = check_pachner_invariance(t2, t2.cocycle.as_ref().unwrap(), &z2, &f2, 4, 1e-8).unwrap();
    println!("second move: residual {:.1e}", r.residual);
}
