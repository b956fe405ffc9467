//! Diagonalisation of sector Hamiltonians and the analytic spectra used to
//! cross-check it.
//!
//! The numeric eigensystem is the single source of truth for dynamics. The
//! closed-form two-site energies and the three-site quartic are only ever used
//! as independent checks on it.

use crate::error::{KitaevError, Result};
use crate::linalg::CMatrix;
use crate::model::{BasisLabel, ChainSpec2, ChainSpec3, KitaevChain, ParitySector, SectorHamiltonian};
use crate::scalar::Real;

/// Orthonormal eigendecomposition of a [`SectorHamiltonian`].
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// Columns are eigenvectors, in the order of `values`.
    pub vectors: CMatrix<T>,
    pub basis: Vec<BasisLabel>,
    pub sector: ParitySector,
}

impl<T: Real> EigenSystem<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<crate::Cplx<T>> {
        self.vectors.column(k)
    }

    pub fn ground_energy(&self) -> T {
        self.values[0]
    }
}

/// Full eigendecomposition of a Hermitian sector Hamiltonian.
///
/// Rejects inputs whose Hermitian defect exceeds the strict tolerance scaled
/// by the matrix magnitude. Degenerate subspaces come back in an arbitrary
/// orthonormal basis.
pub fn diagonalize<T: Real>(h: &SectorHamiltonian<T>) -> Result<EigenSystem<T>> {
    let scale = h.matrix.max_abs().max(T::one());
    let defect = h.matrix.hermitian_defect();
    if defect > T::strict_tol() * scale {
        return Err(KitaevError::NotHermitian {
            defect: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let (values, vectors) = h.matrix.eigh();
    Ok(EigenSystem {
        values,
        vectors,
        basis: h.basis.clone(),
        sector: h.sector,
    })
}

/// Diagonalises a full-space Hamiltonian block by block.
///
/// Each parity block is solved on its own and embedded back into the full
/// basis, so every eigenvector has definite parity (exact zeros elsewhere).
/// Sector inputs are passed straight to [`diagonalize`].
pub fn diagonalize_by_parity<T: Real>(h: &SectorHamiltonian<T>) -> Result<EigenSystem<T>> {
    if h.sector != ParitySector::Full {
        return diagonalize(h);
    }
    let n = h.dim();
    let mut pairs: Vec<(T, Vec<crate::Cplx<T>>)> = Vec::with_capacity(n);
    for sector in [ParitySector::Even, ParitySector::Odd] {
        let block = h.block(sector);
        let eig = diagonalize(&block)?;
        for k in 0..eig.dim() {
            let mut col = vec![num_complex::Complex::new(T::zero(), T::zero()); n];
            for (i, label) in block.basis.iter().enumerate() {
                let target = h.basis.iter().position(|b| b == label).expect("label in full basis");
                col[target] = eig.vectors[(i, k)];
            }
            pairs.push((eig.values[k], col));
        }
    }
    // Stable sort keeps even-before-odd among exact ties.
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let vectors = CMatrix::from_fn(n, |i, j| pairs[j].1[i]);
    Ok(EigenSystem {
        values: pairs.into_iter().map(|p| p.0).collect(),
        vectors,
        basis: h.basis.clone(),
        sector: ParitySector::Full,
    })
}

/// Closed-form two-site energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSiteSpectrum<T> {
    pub even_minus: T,
    pub even_plus: T,
    pub odd_minus: T,
    pub odd_plus: T,
}

/// `E_e^± = ε₊ ± √(ε₊² + Δ²)`, `E_o^± = ε₊ ± √(ε₋² + τ²)`, `ε_± = (ε₁ ± ε₂)/2`.
pub fn two_site_analytic_spectrum<T: Real>(spec: &ChainSpec2<T>) -> TwoSiteSpectrum<T> {
    let half = T::lit(0.5);
    let eps_p = (spec.eps1 + spec.eps2) * half;
    let eps_m = (spec.eps1 - spec.eps2) * half;
    let even = eps_p.hypot(spec.delta);
    let odd = eps_m.hypot(spec.tau);
    TwoSiteSpectrum {
        even_minus: eps_p - even,
        even_plus: eps_p + even,
        odd_minus: eps_p - odd,
        odd_plus: eps_p + odd,
    }
}

/// Coefficients `(A, B, C)` of `z⁴ − 6εz³ + A z² + B z + C` for a uniform
/// three-site chain.
pub fn three_site_quartic_coefficients<T: Real>(
    spec: &ChainSpec3<T>,
    sector: ParitySector,
) -> Result<(T, T, T)> {
    let (e, t, d) = spec.uniform_parameters().ok_or(KitaevError::NonUniform)?;
    let c = T::lit;
    let (e2, t2, d2) = (e * e, t * t, d * d);
    let a = c(12.0) * e2 - c(2.0) * t2 - c(2.0) * d2;
    match sector {
        ParitySector::Even => Ok((
            a,
            c(4.0) * e * t2 + c(8.0) * e * d2 - c(8.0) * e2 * e,
            -c(8.0) * e2 * d2,
        )),
        ParitySector::Odd => Ok((
            a,
            c(8.0) * e * t2 + c(4.0) * e * d2 - c(10.0) * e2 * e,
            -c(2.0) * e2 * d2 - c(6.0) * e2 * t2 + c(3.0) * e2 * e2,
        )),
        ParitySector::Full => Err(KitaevError::FullSectorQuartic),
    }
}

/// Evaluates the sector quartic at `z`.
pub fn three_site_quartic_residual<T: Real>(
    spec: &ChainSpec3<T>,
    sector: ParitySector,
    z: T,
) -> Result<T> {
    let (a, b, c) = three_site_quartic_coefficients(spec, sector)?;
    let eps = spec.eps1;
    Ok((((z - T::lit(6.0) * eps) * z + a) * z + b) * z + c)
}

/// An eigenvalue whose quartic residual exceeds `1e-8·(1+|z|⁴)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarticDiscrepancy<T> {
    pub sector: ParitySector,
    pub eigenvalue: T,
    pub residual: T,
}

/// Plugs every numeric eigenvalue of both sectors into the quartic and
/// returns the ones that miss. An empty vector means full agreement.
pub fn quartic_discrepancies<T: Real>(spec: &ChainSpec3<T>) -> Result<Vec<QuarticDiscrepancy<T>>> {
    let mut out = Vec::new();
    for sector in [ParitySector::Even, ParitySector::Odd] {
        let eig = diagonalize(&spec.hamiltonian(sector))?;
        for &z in &eig.values {
            let residual = three_site_quartic_residual(spec, sector, z)?;
            let bound = T::lit(1e-8) * (T::one() + z.abs().powi(4));
            if residual.abs() > bound {
                out.push(QuarticDiscrepancy {
                    sector,
                    eigenvalue: z,
                    residual,
                });
            }
        }
    }
    Ok(out)
}

/// `|min eig(even) − min eig(odd)|`; zero marks a parity-degenerate ground
/// state.
pub fn ground_state_splitting<T: Real, C: KitaevChain<T> + ?Sized>(chain: &C) -> Result<T> {
    let even = diagonalize(&chain.hamiltonian(ParitySector::Even))?;
    let odd = diagonalize(&chain.hamiltonian(ParitySector::Odd))?;
    Ok((even.ground_energy() - odd.ground_energy()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_three_site, build_two_site};
    use nalgebra::{DMatrix, SymmetricEigen};
    use proptest::prelude::*;

    /// Independent eigenvalue oracle.
    fn nalgebra_eigenvalues(h: &SectorHamiltonian<f64>) -> Vec<f64> {
        let n = h.dim();
        let m = DMatrix::from_fn(n, n, |i, j| h.matrix[(i, j)].re);
        let mut v: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn two_site_even_at_zero_onsite() {
        let h = build_two_site(&ChainSpec2::new(0.0, 0.0, 1.0, 1.0).unwrap(), ParitySector::Even);
        assert_close(&diagonalize(&h).unwrap().values, &[-1.0, 1.0], 1e-14);
    }

    #[test]
    fn three_site_even_at_genuine_sweet_spot() {
        // The even block at ε=0, τ=Δ has eigenvalues {−2Δ, 0, 0, 2Δ}.
        let d = 0.7;
        let h = build_three_site(&ChainSpec3::sweet_spot(d), ParitySector::Even);
        assert_close(&diagonalize(&h).unwrap().values, &[-2.0 * d, 0.0, 0.0, 2.0 * d], 1e-13);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut h = build_two_site(&ChainSpec2::new(0.0, 0.0, 1.0, 1.0).unwrap(), ParitySector::Even);
        h.matrix[(0, 1)] = num_complex::Complex::new(2.0, 0.0);
        assert!(matches!(diagonalize(&h), Err(KitaevError::NotHermitian { .. })));
    }

    #[test]
    fn analytic_two_site_examples() {
        let s = two_site_analytic_spectrum(&ChainSpec2::new(0.0, 0.0, 1.0, 1.0).unwrap());
        assert_eq!((s.even_minus, s.even_plus, s.odd_minus, s.odd_plus), (-1.0, 1.0, -1.0, 1.0));

        let s = two_site_analytic_spectrum(&ChainSpec2::new(2.0, 0.0, 1.0, 0.0).unwrap());
        assert!((s.odd_minus - (1.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!((s.odd_plus - (1.0 + 2f64.sqrt())).abs() < 1e-15);

        let eps = 0.37;
        let spec = ChainSpec2::new(eps, eps, 1.0, 0.6).unwrap();
        let s = two_site_analytic_spectrum(&spec);
        let r = (eps * eps + 0.36f64).sqrt();
        assert!((s.even_minus - (eps - r)).abs() < 1e-15);
        let numeric = diagonalize(&build_two_site(&spec, ParitySector::Even)).unwrap();
        assert_close(&numeric.values, &[s.even_minus, s.even_plus], 1e-12);
    }

    #[test]
    fn quartic_at_zero_onsite() {
        let spec = ChainSpec3::<f64>::uniform(0.0, 1.0, 1.0);
        assert_eq!(three_site_quartic_residual(&spec, ParitySector::Even, 0.0).unwrap(), 0.0);
        // z⁴ − 2(τ²+Δ²)z² at z = Δ = 1 → 1 − 4.
        assert_eq!(three_site_quartic_residual(&spec, ParitySector::Even, 1.0).unwrap(), -3.0);
        assert!(three_site_quartic_residual(&spec, ParitySector::Even, 2.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn quartic_rejects_nonuniform_and_full() {
        let spec = ChainSpec3::new(0.0, 0.1, 0.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            three_site_quartic_residual(&spec, ParitySector::Even, 0.0),
            Err(KitaevError::NonUniform)
        );
        let spec = ChainSpec3::sweet_spot(1.0);
        assert_eq!(
            three_site_quartic_residual(&spec, ParitySector::Full, 0.0),
            Err(KitaevError::FullSectorQuartic)
        );
    }

    #[test]
    fn splitting_examples() {
        let s = ground_state_splitting(&ChainSpec2::<f64>::new(0.0, 0.0, 1.0, 1.0).unwrap()).unwrap();
        assert!(s < 1e-15);
        let s = ground_state_splitting(&ChainSpec2::<f64>::new(0.0, 0.0, 0.5, 1.0).unwrap()).unwrap();
        assert!((s - 0.5).abs() < 1e-14);
        let s = ground_state_splitting(&ChainSpec3::sweet_spot(1.0)).unwrap();
        assert!(s < 1e-12);
    }

    #[test]
    fn splitting_vanishes_at_effective_and_delocalised_sweet_spots() {
        for (e1, e2, e3) in [(0.0, 1.0, 0.0), (0.0, -0.4, 0.0), (0.5, 0.0, 0.5), (1.3, 0.0, 1.3)] {
            let spec = ChainSpec3::new(e1, e2, e3, 1.0, 1.0, 1.0, 1.0).unwrap();
            assert!(ground_state_splitting(&spec).unwrap() < 1e-12, "{spec:?}");
        }
    }

    #[test]
    fn three_site_sectors_degenerate_at_zero_onsite() {
        for d in [0.3, 0.5, 1.4] {
            assert!(ground_state_splitting(&ChainSpec3::uniform(0.0, 1.0, d)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn splitting_lifted_away_from_tau_equals_delta() {
        for d in [0.3, 0.5, 1.4] {
            assert!(ground_state_splitting(&ChainSpec3::uniform(0.3, 1.0, d)).unwrap() > 1e-2);
            assert!(ground_state_splitting(&ChainSpec2::new(0.0, 0.0, 1.0, d).unwrap()).unwrap() > 1e-3);
        }
    }

    #[test]
    fn block_diagonalisation_keeps_parity() {
        let spec = ChainSpec3::new(0.2, -0.3, 0.1, 1.0, 0.8, 0.6, 1.1).unwrap();
        let eig = diagonalize_by_parity(&build_three_site(&spec, ParitySector::Full)).unwrap();
        for k in 0..8 {
            let v = eig.vector(k);
            let even: f64 = eig.basis.iter().zip(&v).filter(|(l, _)| l.parity() == ParitySector::Even).map(|(_, z)| z.norm()).sum();
            let odd: f64 = eig.basis.iter().zip(&v).filter(|(l, _)| l.parity() == ParitySector::Odd).map(|(_, z)| z.norm()).sum();
            assert!(even == 0.0 || odd == 0.0);
        }
    }

    proptest! {
        #[test]
        fn two_site_numeric_matches_closed_form(e1 in -3.0f64..3.0, e2 in -3.0f64..3.0, t in -2.0f64..2.0, d in -2.0f64..2.0) {
            let spec = ChainSpec2 { eps1: e1, eps2: e2, tau: t, delta: d };
            let s = two_site_analytic_spectrum(&spec);
            let even = diagonalize(&build_two_site(&spec, ParitySector::Even)).unwrap();
            let odd = diagonalize(&build_two_site(&spec, ParitySector::Odd)).unwrap();
            prop_assert!((even.values[0] - s.even_minus).abs() < 1e-12);
            prop_assert!((even.values[1] - s.even_plus).abs() < 1e-12);
            prop_assert!((odd.values[0] - s.odd_minus).abs() < 1e-12);
            prop_assert!((odd.values[1] - s.odd_plus).abs() < 1e-12);
        }

        #[test]
        fn eigensystem_residual_and_orthonormality(p in prop::array::uniform7(-2.0f64..2.0)) {
            let spec = ChainSpec3 { eps1: p[0], eps2: p[1], eps3: p[2], tau1: p[3], tau2: p[4], delta1: p[5], delta2: p[6] };
            for sector in [ParitySector::Even, ParitySector::Odd, ParitySector::Full] {
                let h = build_three_site(&spec, sector);
                let eig = diagonalize(&h).unwrap();
                let norm = h.matrix.frobenius_norm().max(1.0);
                for k in 0..h.dim() {
                    let v = eig.vector(k);
                    let hv = h.matrix.apply(&v);
                    for i in 0..h.dim() {
                        prop_assert!((hv[i] - v[i] * eig.values[k]).norm() < 1e-12 * norm);
                    }
                }
                let gram = eig.vectors.adjoint().matmul(&eig.vectors);
                for i in 0..h.dim() {
                    for j in 0..h.dim() {
                        let target = if i == j { 1.0 } else { 0.0 };
                        prop_assert!((gram[(i, j)].re - target).abs() < 1e-12 && gram[(i, j)].im.abs() < 1e-12);
                    }
                }
                let oracle = nalgebra_eigenvalues(&h);
                for (a, b) in eig.values.iter().zip(&oracle) {
                    prop_assert!((a - b).abs() < 1e-12 * norm);
                }
            }
        }

        #[test]
        fn quartic_agrees_with_numeric_eigenvalues(e in -2.0f64..2.0, t in -2.0f64..2.0, d in -2.0f64..2.0) {
            let spec = ChainSpec3::uniform(e, t, d);
            prop_assert!(quartic_discrepancies(&spec).unwrap().is_empty());
        }
    }
}
