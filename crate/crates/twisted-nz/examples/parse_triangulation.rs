use twisted_nz::triangulation::parse_triangulation;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| format!("{}/fixtures/6_3.json", env!("CARGO_MANIFEST_DIR")));
    let text = std::fs::read_to_string(&path).expect("readable file");
    let t = match parse_triangulation(&text) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(2);
        }
    };
    println!("{path}: {} tetrahedra", t.n_tets);
    for fp in t.face_pairings() {
        println!("  pairing {:2}: {:?} -> {:?}", fp.index, fp.side_a, fp.side_b);
    }
    for class in t.compute_edge_classes().unwrap() {
        let corners: Vec<String> = class.walk.iter().map(|v| format!("{}{}{}", v.tet, v.edge.0, v.edge.1)).collect();
        println!("  edge {} (valence {}): {}", class.index, class.valence(), corners.join(" "));
    }

    // a broken permutation is reported with its location
    let bad = text.replacen("[1,0,2,3]", "[0,0,1,2]", 1);
    if let Err(e) = parse_triangulation(&bad) {
        println!("corrupted copy: {e}");
    }
}
