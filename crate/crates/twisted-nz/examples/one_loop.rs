use twisted_nz::fixtures;
use twisted_nz::homology::solve_flattening;
use twisted_nz::invariant::{one_loop, twisted_one_loop};
use twisted_nz::shapes::solve_shapes;

fn main() {
    for t in [fixtures::figure_eight(), fixtures::six_three()] {
        let z = solve_shapes(&t, 1e-12).unwrap().z;
        let f = solve_flattening(&t).unwrap();
        let phi = t.cocycle.clone().unwrap();
        let tau = twisted_one_loop(&t, &phi, &z, &f).unwrap();
        let coeffs: Vec<String> = tau.poly.coefficients().iter().map(|c| format!("{:.3}", c.re)).collect();
        println!("--- {} tetrahedra", t.n_tets);
        println!("tau(t) coefficients: {}", coeffs.join(", "));
        println!("tau(1) = {:.2e}", tau.raw.eval(1.0.into()).norm());
        println!("|tau'(1)| = {:.9}", tau.raw.derivative_at_one().norm());
        for c in &t.peripheral_curves {
            let v = one_loop(&t, &z, &f, &c.name).unwrap();
            println!("tau_{} = {:.9}", c.name, v.value);
        }
    }
}
