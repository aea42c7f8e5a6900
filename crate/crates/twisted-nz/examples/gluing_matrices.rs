use twisted_nz::fixtures;
use twisted_nz::triangulation::nz_matrices;

fn show(name: &str, m: &[Vec<i64>]) {
    println!("{name}:");
    for row in m {
        println!("  {row:?}");
    }
}

fn main() {
    for t in [fixtures::figure_eight(), fixtures::six_three()] {
        let g = t.gluing_matrices().unwrap();
        let (a, b) = nz_matrices(&g);
        println!("--- {} tetrahedra", t.n_tets);
        show("G", &g[0]);
        show("G'", &g[1]);
        show("G''", &g[2]);
        let abt: Vec<Vec<i64>> =
            a.iter().map(|r| b.iter().map(|s| r.iter().zip(s).map(|(x, y)| x * y).sum()).collect()).collect();
        show("A B^T", &abt);
        let symmetric = (0..t.n_tets).all(|i| (0..t.n_tets).all(|j| abt[i][j] == abt[j][i]));
        println!("A B^T symmetric: {symmetric}");
    }
}
