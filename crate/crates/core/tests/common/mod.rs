//! Dense reference implementations shared by the integration tests. Nothing here
//! calls into the library's dense or schedule code.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type Mat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn letter_matrix(ch: char) -> Mat {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let entries = match ch {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, -i, i, z],
        'Z' => [o, z, z, -o],
        _ => panic!("bad letter {ch}"),
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// Kronecker product of single-qubit matrices, leftmost letter most significant.
pub fn pauli_matrix(letters: &str) -> Mat {
    letters
        .chars()
        .fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, ch| {
            acc.kronecker(&letter_matrix(ch))
        })
}

/// `Σ c_j P_j` from `(letters, coefficient)` pairs.
pub fn sum_matrix(n_qubits: usize, terms: &[(String, Complex64)]) -> Mat {
    let dim = 1 << n_qubits;
    terms.iter().fold(DMatrix::zeros(dim, dim), |acc, (p, w)| {
        acc + pauli_matrix(p) * *w
    })
}

/// Matrix exponential by scaling and squaring of a Taylor series.
pub fn expm(a: &Mat) -> Mat {
    let norm: f64 = a.iter().map(|x| x.norm()).sum();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale /= 2.0;
        squarings += 1;
    }
    let x = a * c(scale, 0.0);
    let dim = a.nrows();
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    let mut sum = term.clone();
    for n in 1..30 {
        term = &term * &x * c(1.0 / n as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Symmetric Suzuki formula by its recursive definition on dense matrices.
pub fn suzuki(k: u32, terms: &[Mat], mu: Complex64) -> Mat {
    if k == 1 {
        let dim = terms[0].nrows();
        let mut left = DMatrix::<Complex64>::identity(dim, dim);
        for h in terms {
            left *= expm(&(h * (mu / 2.0)));
        }
        let mut right = DMatrix::<Complex64>::identity(dim, dim);
        for h in terms.iter().rev() {
            right *= expm(&(h * (mu / 2.0)));
        }
        return left * right;
    }
    let p = 1.0 / (4.0 - 4f64.powf(1.0 / (2.0 * k as f64 - 1.0)));
    let outer = suzuki(k - 1, terms, mu * p);
    let middle = suzuki(k - 1, terms, mu * (1.0 - 4.0 * p));
    &outer * &outer * middle * &outer * &outer
}

/// Taylor coefficient of order `l` of an analytic matrix function, from a
/// trapezoidal Cauchy integral on a circle.
pub fn taylor_coefficient(
    f: impl Fn(Complex64) -> Mat,
    l: usize,
    radius: f64,
    points: usize,
) -> Mat {
    let mut acc: Option<Mat> = None;
    for j in 0..points {
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / points as f64);
        let weight = w.powu(l as u32).inv() / (points as f64 * radius.powi(l as i32));
        let v = f(w * radius) * weight;
        acc = Some(match acc {
            Some(a) => a + v,
            None => v,
        });
    }
    acc.expect("at least one point")
}

/// Coefficient of `P` in the Pauli expansion of `m`.
pub fn pauli_component(m: &Mat, letters: &str) -> Complex64 {
    (pauli_matrix(letters) * m).trace() / m.nrows() as f64
}

pub fn all_strings(n_qubits: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..n_qubits {
        out = out
            .into_iter()
            .flat_map(|s| "IXYZ".chars().map(move |ch| format!("{s}{ch}")))
            .collect();
    }
    out
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn spectral_norm(m: &Mat) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}
