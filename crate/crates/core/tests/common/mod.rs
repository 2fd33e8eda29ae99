#![allow(dead_code)]

use std::path::PathBuf;

use hqc_core::lie_core::ComplexMatrix;
use hqc_core::model::ParamPoint;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Na = DMatrix<Complex64>;

pub fn na(m: &ComplexMatrix) -> Na {
    let rows = m.rows();
    let n = rows.len();
    Na::from_fn(n, n, |i, j| rows[i][j])
}

pub fn commutator(a: &Na, b: &Na) -> Na {
    a * b - b * a
}

pub fn max_abs(m: &Na) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `Re tr(A^dag B)`.
pub fn real_inner(a: &Na, b: &Na) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub fn cosine(a: &Na, b: &Na) -> f64 {
    real_inner(a, b) / (real_inner(a, a).sqrt() * real_inner(b, b).sqrt())
}

/// Rank over the reals of `mats` viewed as vectors in `R^{2 n^2}`, by SVD.
pub fn real_rank(mats: &[Na], rel_tol: f64) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let len = 2 * mats[0].len();
    let cols: Vec<DVector<f64>> = mats
        .iter()
        .map(|m| DVector::from_iterator(len, m.iter().flat_map(|z| [z.re, z.im])))
        .collect();
    let a = DMatrix::from_columns(&cols);
    let sv = a.svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * top).count()
}

/// Independent `exp` by truncated Taylor series with scaling and squaring.
pub fn expm_taylor(m: &Na) -> Na {
    let n = m.nrows();
    let norm = m.iter().map(|z| z.norm()).sum::<f64>();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let a = m / Complex64::new(2f64.powi(s), 0.0);
    let mut term = Na::identity(n, n);
    let mut sum = Na::identity(n, n);
    for k in 1..30 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

pub fn random_points(seed: u64, n: usize, rmin: f64, rmax: f64, cart: f64) -> Vec<ParamPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut v = [0.0; 12];
            for (k, x) in v.iter_mut().enumerate() {
                *x = match k {
                    2 | 4 | 6 | 10 => rng.random_range(rmin..=rmax),
                    3 | 5 | 7 | 11 => rng.random_range(0.0..std::f64::consts::TAU),
                    _ => rng.random_range(-cart..=cart),
                };
            }
            ParamPoint::from_array(v)
        })
        .collect()
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn hqc() -> std::process::Command {
    std::process::Command::new(env!("CARGO_BIN_EXE_hqc"))
}
