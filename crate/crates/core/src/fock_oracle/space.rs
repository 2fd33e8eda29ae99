use num_complex::Complex64;

use crate::lie_core::{c, mat_exp_by_sectors, ComplexMatrix, SectorExp};
use crate::{Error, Result};

/// Truncated single-mode Fock space with basis `|0>, ..., |N_c - 1>`.
#[derive(Clone, Debug)]
pub struct FockSpace {
    cutoff: usize,
    annihilator: ComplexMatrix,
    creator: ComplexMatrix,
    number: ComplexMatrix,
}

impl FockSpace {
    pub const MIN_CUTOFF: usize = 4;

    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < Self::MIN_CUTOFF {
            return Err(Error::InvalidArgument(format!(
                "Fock cutoff must be at least {}, got {cutoff}",
                Self::MIN_CUTOFF
            )));
        }
        let annihilator = ComplexMatrix::from_fn(cutoff, |i, j| {
            if j == i + 1 {
                c((j as f64).sqrt(), 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let creator = annihilator.adjoint();
        let number = ComplexMatrix::from_fn(cutoff, |i, j| if i == j { c(i as f64, 0.0) } else { c(0.0, 0.0) });
        Ok(Self {
            cutoff,
            annihilator,
            creator,
            number,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn annihilator(&self) -> &ComplexMatrix {
        &self.annihilator
    }

    pub fn creator(&self) -> &ComplexMatrix {
        &self.creator
    }

    pub fn number(&self) -> &ComplexMatrix {
        &self.number
    }

    /// Basis vector `|k>`.
    pub fn basis(&self, k: usize) -> Vec<Complex64> {
        let mut v = vec![c(0.0, 0.0); self.cutoff];
        v[k] = c(1.0, 0.0);
        v
    }

    /// Index of `|n1 n2>` in the two-mode product space (mode 1 is the left
    /// Kronecker factor).
    pub fn pair_index(&self, n1: usize, n2: usize) -> usize {
        n1 * self.cutoff + n2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum OperatorKind {
    SingleMode,
    TwoMode,
}

/// A product of exponentials on a truncated Fock space, stored factor by
/// factor in sector-block form.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    kind: OperatorKind,
    cutoff: usize,
    /// Factors in product order: `U = factors[0] * factors[1] * ...`.
    factors: Vec<SectorExp>,
    /// `(lambda, mu)` for single mode, `(xi, zeta)` for two mode.
    params: (Complex64, Complex64),
}

impl OperatorSet {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn params(&self) -> (Complex64, Complex64) {
        self.params
    }

    pub fn dim(&self) -> usize {
        self.factors[0].dim()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.factors.iter().rev().fold(v.to_vec(), |acc, f| f.apply(&acc))
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        self.factors
            .iter()
            .map(|f| f.to_dense())
            .reduce(|a, b| &a * &b)
            .expect("at least one factor")
    }

    /// Sum of the factors' unitarity defects; bounds the defect of the
    /// product to first order. The exponential of a truncated anti-Hermitian
    /// generator is unitary, so this only measures roundoff.
    pub fn unitarity_defect(&self) -> f64 {
        self.factors.iter().map(|f| f.unitarity_defect()).sum()
    }

    /// Largest weight that the images of the given basis states place on the
    /// two highest Fock levels of any mode; shrinks as the cutoff grows.
    pub fn truncation_weight(&self, inputs: &[usize]) -> f64 {
        let n = self.cutoff;
        let edge = |k: usize| match self.kind {
            OperatorKind::SingleMode => k + 2 >= n,
            OperatorKind::TwoMode => k / n + 2 >= n || k % n + 2 >= n,
        };
        inputs
            .iter()
            .map(|&k| {
                let mut e = vec![c(0.0, 0.0); self.dim()];
                e[k] = c(1.0, 0.0);
                self.apply(&e)
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| edge(*i))
                    .map(|(_, z)| z.norm_sqr())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// `D(lambda) S(mu)` with `S(mu) = exp(mu a^dag^2 - conj(mu) a^2)` and
/// `D(lambda) = exp(lambda a^dag - conj(lambda) a)`.
pub fn single_mode_unitary(fs: &FockSpace, lambda: Complex64, mu: Complex64) -> Result<OperatorSet> {
    let (a, ad) = (fs.annihilator(), fs.creator());
    let disp = &ad.scale(lambda) - &a.scale(lambda.conj());
    let squeeze = &(ad * ad).scale(mu) - &(a * a).scale(mu.conj());
    Ok(OperatorSet {
        kind: OperatorKind::SingleMode,
        cutoff: fs.cutoff(),
        factors: vec![mat_exp_by_sectors(&disp)?, mat_exp_by_sectors(&squeeze)?],
        params: (lambda, mu),
    })
}

/// `N(xi) M(zeta)` on the product space, with
/// `M(zeta) = exp(zeta a1^dag a2^dag - conj(zeta) a1 a2)` and
/// `N(xi) = exp(xi a1^dag a2 - conj(xi) a1 a2^dag)`.
pub fn two_mode_unitary(fs: &FockSpace, xi: Complex64, zeta: Complex64) -> Result<OperatorSet> {
    let (a, ad) = (fs.annihilator(), fs.creator());
    let m_gen = &ad.kron(ad).scale(zeta) - &a.kron(a).scale(zeta.conj());
    let n_gen = &ad.kron(a).scale(xi) - &a.kron(ad).scale(xi.conj());
    Ok(OperatorSet {
        kind: OperatorKind::TwoMode,
        cutoff: fs.cutoff(),
        factors: vec![mat_exp_by_sectors(&n_gen)?, mat_exp_by_sectors(&m_gen)?],
        params: (xi, zeta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::{bracket, cis};

    #[test]
    fn ladder_operators() {
        let fs = FockSpace::new(10).unwrap();
        let n3 = fs.number().mul_vec(&fs.basis(3));
        assert!((n3[3] - c(3.0, 0.0)).norm() < 1e-15);
        assert!(fs.annihilator().mul_vec(&fs.basis(0)).iter().all(|z| z.norm() == 0.0));
        let comm = &(fs.creator() * fs.annihilator()) - &(fs.annihilator() * fs.creator());
        for k in 0..9 {
            let v = comm.mul_vec(&fs.basis(k));
            assert!((v[k] + c(1.0, 0.0)).norm() < 1e-12);
        }
        assert!((&(fs.creator() * fs.annihilator()) - fs.number()).max_abs() < 1e-14);
        assert!(FockSpace::new(3).is_err());
    }

    #[test]
    fn identity_at_zero_parameters() {
        let fs = FockSpace::new(8).unwrap();
        let u = single_mode_unitary(&fs, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((&u.to_dense() - &ComplexMatrix::identity(8)).max_abs() < 1e-15);
        let u = two_mode_unitary(&fs, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((&u.to_dense() - &ComplexMatrix::identity(64)).max_abs() < 1e-15);
    }

    #[test]
    fn squeezing_is_unitary_at_cutoff_48() {
        let fs = FockSpace::new(48).unwrap();
        let u = single_mode_unitary(&fs, c(0.0, 0.0), cis(0.7) * 0.3).unwrap();
        assert!(u.to_dense().unitarity_defect() < 1e-8);
    }

    #[test]
    fn coherent_state_mean_photon_number() {
        let fs = FockSpace::new(48).unwrap();
        let lambda = cis(1.1) * 0.3;
        let u = single_mode_unitary(&fs, lambda, c(0.0, 0.0)).unwrap();
        let v = u.apply(&fs.basis(0));
        let mean: f64 = v.iter().enumerate().map(|(k, z)| k as f64 * z.norm_sqr()).sum();
        assert!((mean - 0.09).abs() < 1e-6);
    }

    #[test]
    fn beam_splitter_conserves_total_number() {
        let fs = FockSpace::new(6).unwrap();
        let (a, ad) = (fs.annihilator(), fs.creator());
        let xi = cis(0.4) * 0.5;
        let n_gen = &ad.kron(a).scale(xi) - &a.kron(ad).scale(xi.conj());
        let id = ComplexMatrix::identity(6);
        let total = &fs.number().kron(&id) + &id.kron(fs.number());
        assert_eq!(bracket(&n_gen, &total).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn two_mode_squeezing_populates_11() {
        let fs = FockSpace::new(16).unwrap();
        let u = two_mode_unitary(&fs, c(0.0, 0.0), cis(0.2) * 0.4).unwrap();
        let v = u.apply(&fs.basis_pair(0, 0));
        assert!(v[fs.pair_index(1, 1)].norm() > 0.1);
        assert!(u.truncation_weight(&[0]) < 1e-10);
    }

    impl FockSpace {
        fn basis_pair(&self, n1: usize, n2: usize) -> Vec<Complex64> {
            let mut v = vec![c(0.0, 0.0); self.cutoff * self.cutoff];
            v[self.pair_index(n1, n2)] = c(1.0, 0.0);
            v
        }
    }
}
