use twisted_nz::fixtures;
use twisted_nz::homology::apply_coboundary;
use twisted_nz::twist::{check_symplectic, twisted_gluing_matrices, twisted_nz};

fn main() {
    let t = fixtures::figure_eight();
    let phi = t.cocycle.clone().unwrap();
    let d = twisted_gluing_matrices(&t, &phi).unwrap();
    let (a, b) = twisted_nz(&d);
    for (name, m) in [("G(t)", &d.g[0]), ("G'(t)", &d.g[1]), ("G''(t)", &d.g[2]), ("A(t)", &a), ("B(t)", &b)] {
        println!("{name}");
        for i in 0..m.rows {
            let row: Vec<String> = (0..m.cols).map(|j| m.get(i, j).to_string()).collect();
            println!("  [{}]", row.join(", "));
        }
    }

    let product = a.mul(&b.involute().transpose());
    println!("A(t) B(1/t)^T");
    for i in 0..2 {
        println!("  [{}, {}]", product.get(i, 0), product.get(i, 1));
    }
    println!("defect: {}", check_symplectic(&a, &b).max_coefficient);

    // changing lifts by a coboundary keeps the relation
    let moved = apply_coboundary(&t, &phi, &[3, -1]);
    let d2 = twisted_gluing_matrices(&t, &moved).unwrap();
    let (a2, b2) = twisted_nz(&d2);
    println!("after coboundary {moved:?}: defect {}", check_symplectic(&a2, &b2).max_coefficient);
}
