use twisted_nz::cli;

// Runs the full check suite through the command-line front end.
fn main() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let mut code = 0;
    for name in ["4_1", "6_3"] {
        let path = format!("{dir}/fixtures/{name}.json");
        code = code.max(cli::run(["tnz", "verify", path.as_str(), "--format", "text"]));
    }
    std::process::exit(code);
}
