//! The analytic surface instantiates at f32 as well as f64.

use latspec_core::cartan::{cartan_decompose, sl2_diag, xi_p_montecarlo};
use latspec_core::linalg::{symmetric_eigenvalues, DMat};
use latspec_core::trees::{eigen_to_p, p_to_eigen, xi_tree};

#[test]
fn cartan_lengths_in_f32() {
    let g = sl2_diag::<f32>(2.0);
    let c = cartan_decompose(&g).unwrap();
    assert!((c.length - 2.0).abs() < 1e-5);
    assert!((c.length_tilde - 1.0).abs() < 1e-5);
}

#[test]
fn eigensolver_in_f32() {
    let m = DMat::<f32>::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
    let e = symmetric_eigenvalues(&m).unwrap();
    assert!((e[0] - 1.0).abs() < 1e-5 && (e[1] - 3.0).abs() < 1e-5);
}

#[test]
fn dictionary_in_f32() {
    let lam = p_to_eigen(3.0f32, 4).unwrap();
    assert!((eigen_to_p(lam, 4).unwrap() - 3.0).abs() < 1e-4);
    assert!((xi_tree(0, 3.0f32, 4).unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn monte_carlo_in_f32() {
    let est = xi_p_montecarlo(&DMat::<f32>::identity(2), 2.0, 2000, 9).unwrap();
    assert!((est.estimate - 1.0).abs() < 1e-4);
}
