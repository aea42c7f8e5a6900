use twisted_nz::fixtures;
use twisted_nz::shapes::{solve_shapes, verify_solution, zeta, DEFAULT_TOLERANCE};

fn main() {
    for t in [fixtures::figure_eight(), fixtures::six_three()] {
        let sol = solve_shapes(&t, DEFAULT_TOLERANCE).unwrap();
        println!("--- {} tetrahedra, {} Newton steps", t.n_tets, sol.iterations);
        for (j, z) in sol.z.iter().enumerate() {
            println!("  z{} = {:.6} {:+.6}i", j + 1, z.re, z.im);
        }
        let report = verify_solution(&t, &sol.z).unwrap();
        println!("  max residual {:e}, geometric {}", report.max(), sol.geometric);
        for (name, r) in &report.curves {
            println!("  {name}: {r:e}");
        }
        let zt = zeta(&sol.z).unwrap();
        let worst = (0..t.n_tets).map(|j| (zt.zeta[j] + zt.zeta_p[j] + zt.zeta_pp[j]).norm()).fold(0.0, f64::max);
        println!("  |ζ + ζ' + ζ''| <= {worst:e}");
    }
}
