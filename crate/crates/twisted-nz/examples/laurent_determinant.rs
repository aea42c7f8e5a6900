use num_complex::Complex64;
use twisted_nz::laurent::{det_exact, det_numeric, ZMatrix, ZPoly};

fn main() {
    // A(t) for the figure-eight knot
    let a = ZMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => ZPoly::from_ints(&[(1, 2), (2, -1)]),
        (0, 1) => ZPoly::from_ints(&[(0, -1), (1, 2)]),
        (1, 0) => ZPoly::from_ints(&[(1, -1)]),
        _ => ZPoly::from_ints(&[(2, -1)]),
    });
    let exact = det_exact(&a).unwrap();
    let numeric = det_numeric(&a.to_complex()).unwrap();
    println!("det A(t)          = {exact}");
    println!("interpolated      = {}", numeric.canonicalize().reconstruct().to_json());
    println!("agree             = {}", exact.to_complex().eq_mod(&numeric, false, 1e-9));
    println!("palindromic       = {:?}", exact.is_palindromic(0.0));

    let c = exact.canonicalize();
    println!("canonical         = {} (shift {}, sign {})", c.poly, c.shift, c.sign);
    println!("value at t = i    = {}", exact.to_complex().eval(Complex64::i()));
}
