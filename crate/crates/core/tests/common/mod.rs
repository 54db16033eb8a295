//! Dense reference constructions shared by the integration tests.
#![allow(dead_code)]

use lrspread::ed::{SpinHamiltonian, StateVector};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type C = Complex64;
pub type Mat = DMatrix<C>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn pauli(name: char) -> Mat {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let e = match name {
        'I' => [l, o, o, l],
        'X' => [o, l, l, o],
        'Y' => [o, -i, i, o],
        'Z' => [l, o, o, -l],
        // |0><1| and |1><0|
        '+' => [o, l, o, o],
        '-' => [o, o, l, o],
        _ => unreachable!(),
    };
    Mat::from_row_slice(2, 2, &e)
}

/// Operator with `ops[k]` on site `k`; site 0 is the least significant bit,
/// so it is the rightmost Kronecker factor.
pub fn embed(n: usize, ops: &[(usize, char)]) -> Mat {
    let mut m = Mat::identity(1, 1);
    for site in (0..n).rev() {
        let p = ops.iter().find(|(s, _)| *s == site).map_or('I', |(_, p)| *p);
        m = m.kronecker(&pauli(p));
    }
    m
}

pub fn dense_xxz(n: usize, j_perp: f64, j_z: f64, alpha: f64) -> Mat {
    let dim = 1 << n;
    let mut h = Mat::zeros(dim, dim);
    for i in 0..n {
        for j in i + 1..n {
            let d = ((j - i) as f64).powf(-alpha);
            let hop = embed(n, &[(i, '+'), (j, '-')]) + embed(n, &[(i, '-'), (j, '+')]);
            h += hop * c(0.5 * j_perp * d, 0.0) + embed(n, &[(i, 'Z'), (j, 'Z')]) * c(j_z * d, 0.0);
        }
    }
    h
}

pub fn library_matrix(h: &SpinHamiltonian) -> Mat {
    let compiled = h.compile();
    let dim = compiled.dim();
    let mut m = Mat::zeros(dim, dim);
    for col in 0..dim {
        let e = StateVector::basis(h.n_sites, col).unwrap();
        let out = compiled.apply(&e).unwrap();
        for (row, a) in out.amplitudes().iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    m
}

pub fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps: Vec<C> = (0..1 << n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    StateVector::from_raw(n, amps).unwrap().normalized().unwrap()
}

pub fn to_dvec(psi: &StateVector) -> DVector<C> {
    DVector::from_column_slice(psi.amplitudes())
}

pub fn dense_expectation(op: &Mat, psi: &DVector<C>) -> C {
    psi.dotc(&(op * psi))
}

/// `exp(-i H t) v` through the Hermitian eigendecomposition.
pub fn dense_evolve(h: &Mat, v: &DVector<C>, t: f64) -> DVector<C> {
    let eig = h.clone().symmetric_eigen();
    let u = &eig.eigenvectors;
    let coeffs = u.adjoint() * v;
    let phased = DVector::from_iterator(
        coeffs.len(),
        coeffs.iter().zip(eig.eigenvalues.iter()).map(|(a, &e)| a * C::from_polar(1.0, -e * t)),
    );
    u * phased
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}


/// `exp(-i H t)|+>^N` for `H = -sum_{i<j} J_ij Z_i Z_j`, built from the
/// diagonal energies.
pub fn evolved_plus_state(n: usize, coupling: impl Fn(usize, usize) -> f64, t: f64) -> Vec<C> {
    let dim = 1usize << n;
    let amp = (dim as f64).powf(-0.5);
    (0..dim)
        .map(|x| {
            let z = |k: usize| if (x >> k) & 1 == 0 { 1.0 } else { -1.0 };
            let mut e = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    e -= coupling(i, j) * z(i) * z(j);
                }
            }
            C::from_polar(amp, -e * t)
        })
        .collect()
}

/// `<psi| X-string |psi>` for the sites set in `mask`.
pub fn flip_expectation(psi: &[C], mask: usize) -> f64 {
    psi.iter()
        .enumerate()
        .map(|(x, a)| (psi[x ^ mask].conj() * a).re)
        .sum()
}
