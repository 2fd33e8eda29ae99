//! Real spans of matrix sets, Lie-bracket closure and block structure.
//!
//! All geometry here uses the real inner product `<A, B> = Re tr(A^dagger B)`,
//! under which `u(n)` is a Euclidean space of dimension `n^2`.

use nalgebra::DMatrix;

use super::matrix::ComplexMatrix;
use crate::{Error, Result};

/// Default relative singular-value threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

pub fn bracket(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_same_dim(b)?;
    Ok(&(a * b) - &(b * a))
}

/// Orthonormal basis (real inner product) of a real span of matrices.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
    tol: f64,
}

impl SpanBasis {
    fn empty(dim: usize, tol: f64) -> Self {
        Self {
            dim,
            elements: Vec::new(),
            tol,
        }
    }

    /// Matrix dimension `n` of the elements (0 for a basis built from nothing).
    pub fn matrix_dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Component of `m` orthogonal to the span.
    pub fn residual(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut r = m.clone();
        // Two passes of modified Gram-Schmidt keep the projection accurate
        // when the basis is long.
        for _ in 0..2 {
            for e in &self.elements {
                let coeff = e.real_inner(&r);
                r = &r - &e.scale_real(coeff);
            }
        }
        r
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.real_inner(b) - target).abs());
            }
        }
        worst
    }

    /// Tries to extend the basis by the direction of `m`; returns whether a
    /// new element was added.
    fn try_push(&mut self, m: &ComplexMatrix) -> bool {
        let norm = m.frobenius_norm();
        if norm <= self.tol {
            return false;
        }
        let r = self.residual(&m.scale_real(1.0 / norm));
        let rn = r.frobenius_norm();
        if rn <= self.tol {
            return false;
        }
        self.elements.push(r.scale_real(1.0 / rn));
        true
    }
}

fn common_dim(mats: &[ComplexMatrix]) -> Result<usize> {
    let dim = mats.first().map(|m| m.dim()).unwrap_or(0);
    for m in mats {
        if m.dim() != dim {
            return Err(Error::DimensionMismatch(dim, m.dim()));
        }
    }
    Ok(dim)
}

/// Dimension of the real span of `mats`, with an orthonormal basis.
///
/// Each matrix is flattened to `2 n^2` reals and normalized; inputs whose norm
/// is at most `tol` times the largest input norm are treated as zero. The rank
/// counts singular values above `tol * sigma_max`.
pub fn real_span_dimension(mats: &[ComplexMatrix], tol: f64) -> Result<(usize, SpanBasis)> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let dim = common_dim(mats)?;
    if mats.is_empty() {
        return Ok((0, SpanBasis::empty(0, tol)));
    }
    let max_norm = mats.iter().map(|m| m.frobenius_norm()).fold(0.0, f64::max);
    let rows: Vec<Vec<f64>> = mats
        .iter()
        .filter_map(|m| {
            let n = m.frobenius_norm();
            (n > tol * max_norm && n > 0.0).then(|| m.to_real_vec().iter().map(|x| x / n).collect())
        })
        .collect();
    if rows.is_empty() {
        return Ok((0, SpanBasis::empty(dim, tol)));
    }
    let width = 2 * dim * dim;
    let a = DMatrix::from_fn(rows.len(), width, |i, j| rows[i][j]);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::NoConvergence("SVD".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma_max = svd.singular_values[order[0]];
    let rank = order
        .iter()
        .filter(|&&k| svd.singular_values[k] > tol * sigma_max)
        .count();

    let mut basis = SpanBasis::empty(dim, tol);
    for &k in order.iter().take(rank) {
        let v: Vec<f64> = v_t.row(k).iter().copied().collect();
        basis.try_push(&ComplexMatrix::from_real_vec(dim, &v));
    }
    Ok((rank, basis))
}

/// Real Lie algebra generated by `generators`, as an orthonormal basis.
///
/// Breadth-first: element `k` is bracketed with every earlier element `j < k`
/// in insertion order, and any new direction is appended. Stops at a fixed
/// point or when `max_dim` elements have been found.
pub fn bracket_closure(generators: &[ComplexMatrix], tol: f64, max_dim: usize) -> Result<SpanBasis> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let dim = common_dim(generators)?;
    if dim > 0 && max_dim > dim * dim {
        return Err(Error::InvalidArgument(format!(
            "max_dim {max_dim} exceeds dim u({dim}) = {}",
            dim * dim
        )));
    }
    for (index, g) in generators.iter().enumerate() {
        let defect = g.anti_hermitian_defect();
        if defect > tol * g.frobenius_norm().max(1.0) {
            return Err(Error::NotAntiHermitian { index, defect });
        }
    }
    let mut basis = SpanBasis::empty(dim, tol);
    for g in generators {
        if basis.len() >= max_dim {
            return Ok(basis);
        }
        basis.try_push(g);
    }
    let mut k = 0;
    while k < basis.len() && basis.len() < max_dim {
        for j in 0..k {
            let candidate = bracket(&basis.elements[j], &basis.elements[k])?;
            basis.try_push(&candidate);
            if basis.len() >= max_dim {
                break;
            }
        }
        k += 1;
    }
    Ok(basis)
}

/// Dimension of the subspace of `span(basis)` that commutes with every basis
/// element (the center, when the basis is bracket-closed).
pub fn center_dimension(basis: &SpanBasis, tol: f64) -> Result<usize> {
    let d = basis.len();
    if d == 0 {
        return Ok(0);
    }
    let n = basis.matrix_dim();
    let block = 2 * n * n;
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    for x in basis.elements() {
        let mut col = Vec::with_capacity(d * block);
        for b in basis.elements() {
            col.extend(bracket(x, b)?.to_real_vec());
        }
        cols.push(col);
    }
    let map = DMatrix::from_fn(d * block, d, |i, j| cols[j][i]);
    let sv = map.svd(false, false).singular_values;
    let scale = sv.iter().copied().fold(0.0, f64::max).max(1.0);
    Ok(sv.iter().filter(|&&s| s <= tol * scale).count())
}

/// Two disjoint index sets covering `0..dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Partition {
    pub fn new(left: &[usize], right: &[usize], dim: usize) -> Result<Self> {
        let mut seen = vec![false; dim];
        for &k in left.iter().chain(right) {
            if k >= dim || seen[k] {
                return Err(Error::InvalidArgument(format!(
                    "partition {left:?}|{right:?} is not a partition of 0..{dim}"
                )));
            }
            seen[k] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument(format!(
                "partition {left:?}|{right:?} does not cover 0..{dim}"
            )));
        }
        Ok(Self {
            left: left.to_vec(),
            right: right.to_vec(),
        })
    }

    /// `{|00>, |11>} | {|01>, |10>}` in the two-qubit basis.
    pub fn two_qubit_parity() -> Self {
        Self::new(&[0, 3], &[1, 2], 4).expect("static partition")
    }
}

/// Largest magnitude of an entry coupling the two halves of the partition.
pub fn block_coupling(m: &ComplexMatrix, partition: &Partition) -> f64 {
    let mut worst: f64 = 0.0;
    for &i in &partition.left {
        for &j in &partition.right {
            worst = worst.max(m[(i, j)].norm()).max(m[(j, i)].norm());
        }
    }
    worst
}

pub fn block_preserving(m: &ComplexMatrix, partition: &Partition) -> bool {
    block_coupling(m, partition) < 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::matrix::{c, I};

    fn isx() -> ComplexMatrix {
        ComplexMatrix::sparse(2, &[(0, 1, I), (1, 0, I)])
    }
    fn isy() -> ComplexMatrix {
        ComplexMatrix::sparse(2, &[(0, 1, c(1.0, 0.0)), (1, 0, c(-1.0, 0.0))])
    }
    fn isz() -> ComplexMatrix {
        ComplexMatrix::real_diagonal(&[1.0, -1.0], I)
    }

    #[test]
    fn bracket_of_self_vanishes() {
        let m = ComplexMatrix::from_fn(3, |i, j| c(i as f64, j as f64));
        assert_eq!(bracket(&m, &m).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn pauli_bracket() {
        // [i sx, i sy] = -[sx, sy] = -2i sz
        let b = bracket(&isx(), &isy()).unwrap();
        let expected = isz().scale_real(-2.0);
        assert!((&b - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let r = bracket(&ComplexMatrix::zeros(2), &ComplexMatrix::zeros(3));
        assert!(matches!(r, Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn span_examples() {
        let id = ComplexMatrix::identity(2).scale(I);
        assert_eq!(real_span_dimension(std::slice::from_ref(&id), 1e-9).unwrap().0, 1);
        assert_eq!(real_span_dimension(&[isx(), isy(), isz(), id], 1e-9).unwrap().0, 4);
        let m = isx();
        let n = isz().scale_real(0.3);
        let dependent = [m.clone(), m.scale_real(2.0), &m + &n];
        let (d, basis) = real_span_dimension(&dependent, 1e-9).unwrap();
        assert_eq!(d, 2);
        assert!(basis.gram_defect() < 1e-12);
    }

    #[test]
    fn span_of_nothing() {
        let (d, basis) = real_span_dimension(&[], 1e-9).unwrap();
        assert_eq!(d, 0);
        assert!(basis.is_empty());
    }

    #[test]
    fn closure_su2_and_abelian() {
        assert_eq!(bracket_closure(&[isx(), isy()], 1e-9, 4).unwrap().len(), 3);
        let diag = ComplexMatrix::real_diagonal(&[1.0, 3.0], I);
        assert_eq!(bracket_closure(&[diag], 1e-9, 4).unwrap().len(), 1);
    }

    #[test]
    fn closure_rejects_non_anti_hermitian() {
        let herm = ComplexMatrix::real_diagonal(&[1.0, 2.0], c(1.0, 0.0));
        match bracket_closure(&[isx(), herm], 1e-9, 4) {
            Err(Error::NotAntiHermitian { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn center_of_u2_is_one_dimensional() {
        let id = ComplexMatrix::identity(2).scale(I);
        let basis = bracket_closure(&[isx(), isy(), id], 1e-9, 4).unwrap();
        assert_eq!(basis.len(), 4);
        assert_eq!(center_dimension(&basis, 1e-9).unwrap(), 1);
    }

    #[test]
    fn block_structure() {
        let p = Partition::two_qubit_parity();
        let d = ComplexMatrix::real_diagonal(&[1.0, 2.0, 3.0, 4.0], I);
        assert!(block_preserving(&d, &p));
        let coupling = ComplexMatrix::sparse(4, &[(0, 2, c(1e-3, 0.0))]);
        assert!(!block_preserving(&coupling, &p));
        assert!(Partition::new(&[0, 1], &[1, 2, 3], 4).is_err());
        assert!(Partition::new(&[0], &[1, 2], 4).is_err());
    }
}
