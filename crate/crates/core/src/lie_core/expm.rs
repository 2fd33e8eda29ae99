//! Matrix exponential and principal logarithm.
//!
//! The exponential is a degree-13 Padé approximant with scaling and squaring
//! (Higham 2005 coefficients, always the top degree). The logarithm takes
//! repeated square roots until the argument is close to the identity and then
//! sums the Mercator series.

use num_complex::Complex64;

use super::matrix::{c, ComplexMatrix};
use crate::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring.
pub fn mat_exp(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite("mat_exp input".into()));
    }
    let n = m.dim();
    let norm = m.norm_one();
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scale_real(0.5f64.powi(squarings));

    let id = ComplexMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| c(PADE13[k], 0.0);

    let u_inner = &a6.scale(b(13)) + &a4.scale(b(11)) + a2.scale(b(9));
    let u_inner = &a6 * &u_inner;
    let u_tail = a6.scale(b(7)) + a4.scale(b(5)) + a2.scale(b(3)) + id.scale(b(1));
    let u = &a * &(u_inner + u_tail);

    let v_inner = &a6.scale(b(12)) + &a4.scale(b(10)) + a2.scale(b(8));
    let v_inner = &a6 * &v_inner;
    let v = v_inner + a6.scale(b(6)) + a4.scale(b(4)) + a2.scale(b(2)) + id.scale(b(0));

    let p = (&v + &u).inner().clone();
    let q = (&v - &u).inner().clone();
    let mut r = ComplexMatrix::from_inner(
        q.lu()
            .solve(&p)
            .ok_or_else(|| Error::Singular("Pade denominator".into()))?,
    );
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(Error::NonFinite("mat_exp result".into()));
    }
    Ok(r)
}

/// Exponential of a matrix that decomposes into independent sectors.
///
/// Basis states are grouped into the connected components of the graph whose
/// edges are the nonzero entries of `m`; each component is exponentiated on
/// its own. This is exact (not an approximation) and is what makes the
/// two-mode Fock operators tractable, since their generators conserve a
/// photon-number combination.
#[derive(Clone, Debug)]
pub struct SectorExp {
    dim: usize,
    sectors: Vec<(Vec<usize>, ComplexMatrix)>,
}

impl SectorExp {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sector_count(&self) -> usize {
        self.sectors.len()
    }

    pub fn largest_sector(&self) -> usize {
        self.sectors.iter().map(|(idx, _)| idx.len()).max().unwrap_or(0)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (idx, block) in &self.sectors {
            let local: Vec<Complex64> = idx.iter().map(|&k| v[k]).collect();
            let mapped = block.mul_vec(&local);
            for (&k, z) in idx.iter().zip(mapped) {
                out[k] = z;
            }
        }
        out
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim);
        for (idx, block) in &self.sectors {
            for (a, &i) in idx.iter().enumerate() {
                for (b, &j) in idx.iter().enumerate() {
                    m[(i, j)] = block[(a, b)];
                }
            }
        }
        m
    }

    /// Frobenius unitarity defect of the full block-diagonal operator.
    pub fn unitarity_defect(&self) -> f64 {
        self.sectors
            .iter()
            .map(|(_, b)| b.unitarity_defect().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

pub fn mat_exp_by_sectors(m: &ComplexMatrix) -> Result<SectorExp> {
    let n = m.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)] != Complex64::new(0.0, 0.0) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for k in 0..n {
        let root = find(&mut parent, k);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(k);
    }
    let sectors = groups
        .into_iter()
        .map(|idx| {
            let block = mat_exp(&m.submatrix(&idx))?;
            Ok((idx, block))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SectorExp { dim: n, sectors })
}

/// Principal square root by the Denman-Beavers iteration.
fn sqrtm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.dim();
    let mut y = m.clone();
    let mut z = ComplexMatrix::identity(n);
    for _ in 0..100 {
        let y_inv = inverse(&y)?;
        let z_inv = inverse(&z)?;
        let y_next = (&y + &z_inv).scale_real(0.5);
        let z_next = (&z + &y_inv).scale_real(0.5);
        let delta = (&y_next - &y).frobenius_norm();
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * y.frobenius_norm().max(1.0) {
            return Ok(y);
        }
    }
    Err(Error::NoConvergence("matrix square root".into()))
}

fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.inner()
        .clone()
        .try_inverse()
        .map(ComplexMatrix::from_inner)
        .ok_or_else(|| Error::Singular("matrix inverse".into()))
}

/// Principal logarithm of a unitary matrix close to the identity.
///
/// Requires `||u - Id||_F < 1`; the result is projected onto the
/// anti-Hermitian matrices.
pub fn mat_log_unitary(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = u.dim();
    let defect = u.unitarity_defect();
    if defect > 1e-8 {
        return Err(Error::NotUnitary(defect));
    }
    let id = ComplexMatrix::identity(n);
    let dist = (u - &id).frobenius_norm();
    if dist >= 1.0 {
        return Err(Error::LogOutOfRange(dist));
    }

    let mut x = u.clone();
    let mut roots = 0;
    while (&x - &id).frobenius_norm() > 0.05 {
        x = sqrtm(&x)?;
        roots += 1;
    }
    let e = &x - &id;
    let mut term = e.clone();
    let mut sum = e.clone();
    for k in 2..=20 {
        term = &term * &e;
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        sum += &term.scale_real(sign / k as f64);
    }
    let log = sum.scale_real(2f64.powi(roots));
    Ok((&log - &log.adjoint()).scale_real(0.5))
}
