//! Command-line front end.
//!
//! Exit codes: 0 success, 1 check failure, 2 input error, 3 solver failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::homology::{solve_cocycle, solve_flattening, Flattening, HomologyError};
use crate::invariant::{
    check_cyclic_product, check_derivative, check_pachner_invariance, check_symmetry, one_loop, twisted_one_loop,
    InvariantError,
};
use crate::laurent::CPoly;
use crate::shapes::{solve_shapes, ShapeError, ShapeSolution, DEFAULT_TOLERANCE};
use crate::triangulation::{cyclic_cover, nz_matrices, pachner_23, parse_triangulation, Triangulation, TriangulationError};
use crate::twist::{check_symplectic, circulant_gluing, twisted_gluing_matrices, twisted_nz, TwistError};
use crate::IntMatrix;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "tnz", version, about = "Twisted Neumann-Zagier matrices and 1-loop invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Triangulation file (".json" is appended if the path does not exist).
    #[arg(global = true)]
    pub input: Option<PathBuf>,
    /// Comma-separated cocycle, one value per face pairing.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub cocycle: Option<Vec<i64>>,
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Cover degree.
    #[arg(long, global = true, default_value_t = 2)]
    pub n: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Peripheral curve for the 1-loop invariant.
    #[arg(long, global = true, default_value = "longitude")]
    pub curve: String,
    /// Face pairing for the 2-3 move.
    #[arg(long, global = true, default_value_t = 0)]
    pub face: usize,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Validate a triangulation and echo it.
    Parse,
    /// Shapes of the complete structure.
    Shapes,
    /// Gluing and Neumann-Zagier matrices.
    Nz,
    /// Twisted gluing and Neumann-Zagier matrices.
    TwistedNz,
    /// 1-loop invariant for a peripheral curve.
    OneLoop,
    /// Twisted 1-loop invariant.
    TwistedOneLoop,
    /// The n-fold cyclic cover, as a triangulation file.
    Cover,
    /// The 2-3 move on a face pairing, as a triangulation file.
    Pachner,
    /// Run every check.
    Verify,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(m: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: m.to_string() }
    }
    fn solver(m: impl ToString) -> Self {
        Failure { code: EXIT_SOLVER, message: m.to_string() }
    }
}

impl From<TriangulationError> for Failure {
    fn from(e: TriangulationError) -> Self {
        Failure::input(e)
    }
}

impl From<TwistError> for Failure {
    fn from(e: TwistError) -> Self {
        Failure::input(e)
    }
}

impl From<ShapeError> for Failure {
    fn from(e: ShapeError) -> Self {
        Failure::solver(e)
    }
}

impl From<HomologyError> for Failure {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Triangulation(e) => Failure::input(e),
            e => Failure::solver(e),
        }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::NoCurve(_) | InvariantError::Triangulation(_) | InvariantError::Twist(_) => Failure::input(e),
            e => Failure::solver(e),
        }
    }
}

/// Output of a command: a JSON document, its text rendering, and whether
/// every check passed.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

fn resolve(path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_path_buf();
    }
    let mut with_ext = path.as_os_str().to_owned();
    with_ext.push(".json");
    PathBuf::from(with_ext)
}

pub fn load(path: &Path) -> Result<Triangulation, Failure> {
    let path = resolve(path);
    let text = std::fs::read_to_string(&path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(parse_triangulation(&text)?)
}

/// Rounds to 15 significant digits and clears negative zero.
pub fn round15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Applies [`round15`] to every float in a JSON document.
pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json!(round15(n.as_f64().unwrap())),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        v => v,
    }
}

fn complex_json(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn fmt_complex(c: Complex64) -> String {
    if c.im.abs() < 1e-12 {
        format!("{:.12}", c.re)
    } else {
        format!("{:.12} {} {:.12}i", c.re, if c.im < 0.0 { '-' } else { '+' }, c.im.abs())
    }
}

fn fmt_poly(p: &CPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.terms().map(|(e, c)| format!("({}) t^{e}", fmt_complex(*c))).collect::<Vec<_>>().join(" + ")
}

fn fmt_matrix(m: &[Vec<String>]) -> String {
    let width = m.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    m.iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            format!("  [ {} ]", cells.join("  "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn fmt_int_matrix(m: &IntMatrix) -> String {
    fmt_matrix(&m.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect::<Vec<_>>())
}

fn section(name: &str, body: String) -> String {
    format!("{name}:\n{body}\n")
}

fn cocycle_for(t: &Triangulation, cli: &Cli) -> Result<Vec<i64>, Failure> {
    let phi = match (&cli.cocycle, &t.cocycle) {
        (Some(c), _) => c.clone(),
        (None, Some(c)) => c.clone(),
        (None, None) => solve_cocycle(t)?.values,
    };
    t.check_cocycle(&phi)?;
    Ok(phi)
}

fn shapes_for(t: &Triangulation, cli: &Cli) -> Result<ShapeSolution, Failure> {
    Ok(solve_shapes(t, cli.tolerance)?)
}

fn check_json(pass: bool, residual: f64) -> Value {
    json!({"pass": pass, "residual": residual})
}

/// Runs one command on a parsed triangulation.
pub fn execute(cli: &Cli, t: &Triangulation) -> Result<Output, Failure> {
    if cli.n == 0 {
        return Err(Failure::input("--n must be at least 1"));
    }
    if !(cli.tolerance > 0.0) {
        return Err(Failure::input("--tolerance must be positive"));
    }
    match cli.command {
        Command::Parse => {
            let classes = t.compute_edge_classes()?;
            let text = format!(
                "tetrahedra: {}\nedge classes: {}\nvalences: {:?}\nperipheral curves: {:?}\n",
                t.n_tets,
                classes.len(),
                classes.iter().map(|c| c.valence()).collect::<Vec<_>>(),
                t.peripheral_curves.iter().map(|c| c.name.as_str()).collect::<Vec<_>>()
            );
            Ok(Output { json: t.to_json(), text, ok: true })
        }
        Command::Shapes => {
            let s = shapes_for(t, cli)?;
            let json = json!({
                "shapes": s.z.iter().map(|c| complex_json(*c)).collect::<Vec<_>>(),
                "residual": s.residual,
                "iterations": s.iterations,
                "geometric": s.geometric,
                "branch_certificate": s.branch_certificate,
            });
            let mut text = String::new();
            for (j, z) in s.z.iter().enumerate() {
                text += &format!("z{} = {}\n", j + 1, fmt_complex(*z));
            }
            text += &format!("residual {:e} after {} iterations\n", s.residual, s.iterations);
            Ok(Output { json, text, ok: true })
        }
        Command::Nz => {
            let g = t.gluing_matrices()?;
            let (a, b) = nz_matrices(&g);
            let abt: IntMatrix =
                a.iter().map(|r| b.iter().map(|s| r.iter().zip(s).map(|(x, y)| x * y).sum()).collect()).collect();
            let json = json!({"G": g[0], "Gp": g[1], "Gpp": g[2], "A": a, "B": b, "ABt": abt});
            let text = [("G", &g[0]), ("G'", &g[1]), ("G''", &g[2]), ("A", &a), ("B", &b), ("A B^T", &abt)]
                .iter()
                .map(|(n, m)| section(n, fmt_int_matrix(m)))
                .collect();
            Ok(Output { json, text, ok: true })
        }
        Command::TwistedNz => {
            let phi = cocycle_for(t, cli)?;
            let d = twisted_gluing_matrices(t, &phi)?;
            let (a, b) = twisted_nz(&d);
            let report = check_symplectic(&a, &b);
            let json = json!({
                "cocycle": phi,
                "Gt": d.g[0].to_json(), "Gpt": d.g[1].to_json(), "Gppt": d.g[2].to_json(),
                "At": a.to_json(), "Bt": b.to_json(),
                "symplectic_defect": report.max_coefficient,
            });
            let show = |m: &crate::laurent::ZMatrix| {
                fmt_matrix(&(0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).to_string()).collect()).collect::<Vec<_>>())
            };
            let text = format!(
                "cocycle: {phi:?}\n{}{}{}{}{}symplectic defect: {}\n",
                section("G(t)", show(&d.g[0])),
                section("G'(t)", show(&d.g[1])),
                section("G''(t)", show(&d.g[2])),
                section("A(t)", show(&a)),
                section("B(t)", show(&b)),
                report.max_coefficient
            );
            Ok(Output { json, text, ok: true })
        }
        Command::OneLoop => {
            let s = shapes_for(t, cli)?;
            let f = solve_flattening(t)?;
            let v = one_loop(t, &s.z, &f, &cli.curve)?;
            let json = json!({"curve": v.curve, "value": complex_json(v.value), "abs": v.value.norm()});
            let text = format!("tau_{} = {}  (|.| = {:.12})\n", v.curve, fmt_complex(v.value), v.value.norm());
            Ok(Output { json, text, ok: true })
        }
        Command::TwistedOneLoop => {
            let phi = cocycle_for(t, cli)?;
            let s = shapes_for(t, cli)?;
            let f = solve_flattening(t)?;
            let tau = twisted_one_loop(t, &phi, &s.z, &f)?;
            let json = json!({
                "tau_twisted": tau.canonical().to_json(),
                "cocycle": phi,
                "flattening": flattening_json(&f),
                "value_at_one": tau.raw.eval(Complex64::new(1.0, 0.0)).norm(),
            });
            let text = format!("tau(t) = {}\n", fmt_poly(tau.canonical()));
            Ok(Output { json, text, ok: true })
        }
        Command::Cover => {
            let phi = cocycle_for(t, cli)?;
            let cover = cyclic_cover(t, &phi, cli.n)?;
            let text = format!("{}-fold cover with {} tetrahedra\n", cli.n, cover.n_tets);
            Ok(Output { json: cover.to_json(), text, ok: true })
        }
        Command::Pachner => {
            let mut base = t.clone();
            base.cocycle = Some(cocycle_for(t, cli)?);
            let mv = pachner_23(&base, cli.face, None, None)?;
            let text = format!(
                "2-3 move on face pairing {}: tetrahedra {} and {} replaced; {} tetrahedra\n",
                mv.pairing, mv.alpha, mv.beta, mv.triangulation.n_tets
            );
            Ok(Output { json: mv.triangulation.to_json(), text, ok: true })
        }
        Command::Verify => verify(cli, t),
    }
}

fn flattening_json(f: &Flattening) -> Value {
    json!({"f": f.f, "fp": f.fp, "fpp": f.fpp})
}

fn verify(cli: &Cli, t: &Triangulation) -> Result<Output, Failure> {
    let phi = cocycle_for(t, cli)?;
    let s = shapes_for(t, cli)?;
    let f = solve_flattening(t)?;
    let tau = twisted_one_loop(t, &phi, &s.z, &f)?;
    let mut checks: BTreeMap<String, Value> = BTreeMap::new();
    let mut ok = true;
    let mut record = |name: &str, pass: bool, residual: f64| {
        ok &= pass;
        checks.insert(name.to_string(), check_json(pass, residual));
    };

    let d = twisted_gluing_matrices(t, &phi)?;
    let (a, b) = twisted_nz(&d);
    let sym = check_symplectic(&a, &b);
    record("symplectic", sym.holds(), sym.max_coefficient.max(sym.hermitian_residual));

    let cover = cyclic_cover(t, &phi, cli.n)?;
    let same = cover.gluing_matrices()? == circulant_gluing(&d, cli.n);
    record("circulant_cover", same, if same { 0.0 } else { 1.0 });

    let faces: Vec<usize> = (0..2 * t.n_tets).collect();
    let mut worst: f64 = 0.0;
    let mut pachner_ok = true;
    let mut nz_ok = true;
    let mut moves = 0;
    for face in faces {
        match check_pachner_invariance(t, &phi, &s.z, &f, face, 1e-8) {
            Ok(r) => {
                moves += 1;
                worst = worst.max(r.residual);
                pachner_ok &= r.pass;
                nz_ok &= r.nz_identity;
            }
            Err(InvariantError::Triangulation(TriangulationError::DegenerateMove(_))) => {}
            Err(e) => return Err(e.into()),
        }
    }
    record("pachner_invariance", pachner_ok && moves > 0, worst);
    record("pachner_nz", nz_ok && moves > 0, if nz_ok { 0.0 } else { 1.0 });

    let cyc = check_cyclic_product(t, &phi, &s.z, &f, 2, 1e-6)?;
    record("cyclic_product", cyc.pass, cyc.residual);

    let mut one_loop_values = serde_json::Map::new();
    if t.peripheral_curve(&cli.curve).is_some() {
        let der = check_derivative(t, &phi, &s.z, &f, &cli.curve, 1e-8)?;
        record("vanishing_at_one", der.value_at_one < 1e-9, der.value_at_one);
        record("derivative", der.pass, der.residual);
    }
    for c in &t.peripheral_curves {
        let v = one_loop(t, &s.z, &f, &c.name)?;
        one_loop_values.insert(c.name.clone(), complex_json(v.value));
    }

    let symm = check_symmetry(t, &phi, &s.z, &f, 1e-8)?;
    record("symmetry", symm.symmetric, 0.0);
    record(
        "palindromic",
        symm.det_a_palindromic.is_some() && symm.det_b_palindromic.is_some(),
        0.0,
    );

    let text = checks
        .iter()
        .map(|(name, v)| {
            let pass = v["pass"].as_bool().unwrap_or(false);
            format!("{:<20} {}  residual {:e}\n", name, if pass { "pass" } else { "FAIL" }, v["residual"].as_f64().unwrap_or(0.0))
        })
        .collect::<String>()
        + &format!("tau(t) = {}\n", fmt_poly(tau.canonical()));
    let json = json!({
        "tau_twisted": tau.canonical().to_json(),
        "tau_one_loop": one_loop_values,
        "checks": checks,
    });
    Ok(Output { json, text, ok })
}

/// Parses arguments, runs the command, prints the result and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run_cli(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&normalize(out.json)).expect("serializable")),
                Format::Text => print!("{}", out.text),
            }
            if out.ok {
                EXIT_OK
            } else {
                EXIT_CHECK
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn run_cli(cli: &Cli) -> Result<Output, Failure> {
    let path = cli.input.as_ref().ok_or_else(|| Failure::input("missing input file"))?;
    let t = load(path)?;
    execute(cli, &t)
}
