use twisted_nz::fixtures;
use twisted_nz::triangulation::cyclic_cover;
use twisted_nz::twist::{circulant_gluing, twisted_gluing_matrices};

fn main() {
    let t = fixtures::six_three();
    let phi = t.cocycle.clone().unwrap();
    let d = twisted_gluing_matrices(&t, &phi).unwrap();
    for n in 1..=3 {
        let cover = cyclic_cover(&t, &phi, n).unwrap();
        let explicit = cover.gluing_matrices().unwrap();
        let assembled = circulant_gluing(&d, n);
        println!("n = {n}: {} tetrahedra, matches block circulant: {}", cover.n_tets, explicit == assembled);
    }

    let cover = cyclic_cover(&fixtures::figure_eight(), &[0, -1, 0, -1], 2).unwrap();
    println!("{}", serde_json::to_string(&cover.to_json()).unwrap());
}
