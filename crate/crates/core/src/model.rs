//! Many-body Hamiltonians of the two- and three-site Kitaev chains in the
//! occupation-number basis.
//!
//! Basis orders are fixed:
//!
//! | chain | even                       | odd                        | full            |
//! |-------|----------------------------|----------------------------|-----------------|
//! | 2     | `00, 11`                   | `01, 10`                   | `00,01,10,11`   |
//! | 3     | `000, 011, 101, 110`       | `001, 010, 100, 111`       | lexicographic   |
//!
//! All downstream amplitude indexing depends on these orders.

use std::fmt;

use crate::error::{KitaevError, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;

/// Fermion-parity sector of the many-body Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParitySector {
    Even,
    Odd,
    Full,
}

impl ParitySector {
    pub fn as_str(self) -> &'static str {
        match self {
            ParitySector::Even => "even",
            ParitySector::Odd => "odd",
            ParitySector::Full => "full",
        }
    }
}

impl fmt::Display for ParitySector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Occupation pattern `|n₁ n₂ … n_L⟩`, stored with site 1 as the most
/// significant bit so that `index()` is the lexicographic position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    sites: u8,
    bits: u8,
}

impl BasisLabel {
    /// Label from a bit string such as `"011"`.
    pub fn parse(s: &str) -> Option<Self> {
        if !(2..=3).contains(&s.len()) {
            return None;
        }
        let mut bits = 0u8;
        for c in s.chars() {
            bits = (bits << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return None,
                };
        }
        Some(Self {
            sites: s.len() as u8,
            bits,
        })
    }

    /// Label at lexicographic position `index` in a chain of `sites` sites.
    pub fn from_index(sites: usize, index: usize) -> Self {
        assert!((2..=3).contains(&sites) && index < (1 << sites));
        Self {
            sites: sites as u8,
            bits: index as u8,
        }
    }

    pub fn sites(self) -> usize {
        self.sites as usize
    }

    /// Lexicographic position in the full basis.
    pub fn index(self) -> usize {
        self.bits as usize
    }

    /// Occupation `n_site` (1-based site index).
    pub fn occupation(self, site: usize) -> u8 {
        assert!(site >= 1 && site <= self.sites());
        (self.bits >> (self.sites() - site)) & 1
    }

    pub fn particle_number(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn parity(self) -> ParitySector {
        if self.particle_number().is_multiple_of(2) {
            ParitySector::Even
        } else {
            ParitySector::Odd
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for site in 1..=self.sites() {
            write!(f, "{}", self.occupation(site))?;
        }
        Ok(())
    }
}

fn labels(sites: usize, strs: &[&str]) -> Vec<BasisLabel> {
    strs.iter()
        .map(|s| {
            let l = BasisLabel::parse(s).expect("static label");
            debug_assert_eq!(l.sites(), sites);
            l
        })
        .collect()
}

/// Ordered basis of a sector.
pub fn sector_basis(sites: usize, sector: ParitySector) -> Vec<BasisLabel> {
    match (sites, sector) {
        (2, ParitySector::Even) => labels(2, &["00", "11"]),
        (2, ParitySector::Odd) => labels(2, &["01", "10"]),
        (3, ParitySector::Even) => labels(3, &["000", "011", "101", "110"]),
        (3, ParitySector::Odd) => labels(3, &["001", "010", "100", "111"]),
        (n, ParitySector::Full) if n == 2 || n == 3 => {
            (0..1 << n).map(|i| BasisLabel::from_index(n, i)).collect()
        }
        _ => panic!("unsupported chain length {sites}"),
    }
}

fn check_finite<T: Real>(fields: &[(&'static str, T)]) -> Result<()> {
    match fields.iter().find(|(_, v)| !v.is_finite()) {
        Some((name, _)) => Err(KitaevError::NonFinite { name }),
        None => Ok(()),
    }
}

/// Two-site chain parameters, energies in units of the hopping `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec2<T> {
    pub eps1: T,
    pub eps2: T,
    pub tau: T,
    pub delta: T,
}

impl<T: Real> ChainSpec2<T> {
    pub fn new(eps1: T, eps2: T, tau: T, delta: T) -> Result<Self> {
        let spec = Self {
            eps1,
            eps2,
            tau,
            delta,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `ε₁ = ε₂ = 0`, `τ = Δ = delta`.
    pub fn sweet_spot(delta: T) -> Self {
        Self {
            eps1: T::zero(),
            eps2: T::zero(),
            tau: delta,
            delta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_finite(&[
            ("eps1", self.eps1),
            ("eps2", self.eps2),
            ("tau", self.tau),
            ("delta", self.delta),
        ])
    }
}

/// Three-site chain parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec3<T> {
    pub eps1: T,
    pub eps2: T,
    pub eps3: T,
    pub tau1: T,
    pub tau2: T,
    pub delta1: T,
    pub delta2: T,
}

impl<T: Real> ChainSpec3<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(eps1: T, eps2: T, eps3: T, tau1: T, tau2: T, delta1: T, delta2: T) -> Result<Self> {
        let spec = Self {
            eps1,
            eps2,
            eps3,
            tau1,
            tau2,
            delta1,
            delta2,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Uniform parameters: every `ε_i = eps`, `τ_i = tau`, `Δ_i = delta`.
    pub fn uniform(eps: T, tau: T, delta: T) -> Self {
        Self {
            eps1: eps,
            eps2: eps,
            eps3: eps,
            tau1: tau,
            tau2: tau,
            delta1: delta,
            delta2: delta,
        }
    }

    /// Genuine sweet spot: `ε_i = 0`, `τ_i = Δ_i = delta`.
    pub fn sweet_spot(delta: T) -> Self {
        Self::uniform(T::zero(), delta, delta)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite(&[
            ("eps1", self.eps1),
            ("eps2", self.eps2),
            ("eps3", self.eps3),
            ("tau1", self.tau1),
            ("tau2", self.tau2),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
        ])
    }

    /// `Some((ε, τ, Δ))` when all three families are uniform (exactly).
    pub fn uniform_parameters(&self) -> Option<(T, T, T)> {
        let uniform = self.eps1 == self.eps2
            && self.eps2 == self.eps3
            && self.tau1 == self.tau2
            && self.delta1 == self.delta2;
        uniform.then_some((self.eps1, self.tau1, self.delta1))
    }
}

/// Dense Hamiltonian on one parity sector (or the full space).
#[derive(Debug, Clone, PartialEq)]
pub struct SectorHamiltonian<T> {
    pub matrix: CMatrix<T>,
    pub basis: Vec<BasisLabel>,
    pub sector: ParitySector,
}

impl<T: Real> SectorHamiltonian<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn sites(&self) -> usize {
        self.basis[0].sites()
    }

    /// Block of the given sector, extracted by label.
    pub fn block(&self, sector: ParitySector) -> SectorHamiltonian<T> {
        if sector == self.sector {
            return self.clone();
        }
        let basis = sector_basis(self.sites(), sector);
        let idx: Vec<usize> = basis
            .iter()
            .map(|l| {
                self.basis
                    .iter()
                    .position(|b| b == l)
                    .expect("sector label present in parent basis")
            })
            .collect();
        SectorHamiltonian {
            matrix: self.matrix.restrict(&idx),
            basis,
            sector,
        }
    }
}

/// Common interface of the two chain geometries.
pub trait KitaevChain<T: Real> {
    fn sites(&self) -> usize;
    fn hamiltonian(&self, sector: ParitySector) -> SectorHamiltonian<T>;
}

impl<T: Real> KitaevChain<T> for ChainSpec2<T> {
    fn sites(&self) -> usize {
        2
    }

    fn hamiltonian(&self, sector: ParitySector) -> SectorHamiltonian<T> {
        build_two_site(self, sector)
    }
}

impl<T: Real> KitaevChain<T> for ChainSpec3<T> {
    fn sites(&self) -> usize {
        3
    }

    fn hamiltonian(&self, sector: ParitySector) -> SectorHamiltonian<T> {
        build_three_site(self, sector)
    }
}

/// Either chain geometry, for callers that pick the length at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Chain<T> {
    Two(ChainSpec2<T>),
    Three(ChainSpec3<T>),
}

impl<T: Real> KitaevChain<T> for Chain<T> {
    fn sites(&self) -> usize {
        match self {
            Chain::Two(_) => 2,
            Chain::Three(_) => 3,
        }
    }

    fn hamiltonian(&self, sector: ParitySector) -> SectorHamiltonian<T> {
        match self {
            Chain::Two(c) => build_two_site(c, sector),
            Chain::Three(c) => build_three_site(c, sector),
        }
    }
}

/// Places the even and odd blocks into the lexicographic full basis.
fn assemble_full<T: Real>(
    sites: usize,
    even: &SectorHamiltonian<T>,
    odd: &SectorHamiltonian<T>,
) -> SectorHamiltonian<T> {
    let basis = sector_basis(sites, ParitySector::Full);
    let mut matrix = CMatrix::zeros(basis.len());
    for block in [even, odd] {
        for (i, li) in block.basis.iter().enumerate() {
            for (j, lj) in block.basis.iter().enumerate() {
                matrix[(li.index(), lj.index())] = block.matrix[(i, j)];
            }
        }
    }
    SectorHamiltonian {
        matrix,
        basis,
        sector: ParitySector::Full,
    }
}

/// Two-site Hamiltonian.
///
/// Even block on `{|00⟩, |11⟩}` is `[[0, Δ], [Δ, ε₁+ε₂]]`; odd block on
/// `{|01⟩, |10⟩}` is `[[ε₂, τ], [τ, ε₁]]`.
pub fn build_two_site<T: Real>(spec: &ChainSpec2<T>, sector: ParitySector) -> SectorHamiltonian<T> {
    let z = T::zero();
    let even = SectorHamiltonian {
        matrix: CMatrix::from_real_rows(&[
            vec![z, spec.delta],
            vec![spec.delta, spec.eps1 + spec.eps2],
        ]),
        basis: sector_basis(2, ParitySector::Even),
        sector: ParitySector::Even,
    };
    let odd = SectorHamiltonian {
        matrix: CMatrix::from_real_rows(&[vec![spec.eps2, spec.tau], vec![spec.tau, spec.eps1]]),
        basis: sector_basis(2, ParitySector::Odd),
        sector: ParitySector::Odd,
    };
    match sector {
        ParitySector::Even => even,
        ParitySector::Odd => odd,
        ParitySector::Full => assemble_full(2, &even, &odd),
    }
}

/// Three-site Hamiltonian: the even and odd 4×4 blocks, or their
/// block-diagonal assembly in the lexicographic 8-dimensional basis.
pub fn build_three_site<T: Real>(
    spec: &ChainSpec3<T>,
    sector: ParitySector,
) -> SectorHamiltonian<T> {
    let z = T::zero();
    let ChainSpec3 {
        eps1: e1,
        eps2: e2,
        eps3: e3,
        tau1: t1,
        tau2: t2,
        delta1: d1,
        delta2: d2,
    } = *spec;
    let even = SectorHamiltonian {
        matrix: CMatrix::from_real_rows(&[
            vec![z, d2, z, d1],
            vec![d2, e2 + e3, t1, z],
            vec![z, t1, e1 + e3, t2],
            vec![d1, z, t2, e1 + e2],
        ]),
        basis: sector_basis(3, ParitySector::Even),
        sector: ParitySector::Even,
    };
    let odd = SectorHamiltonian {
        matrix: CMatrix::from_real_rows(&[
            vec![e3, t2, z, d1],
            vec![t2, e2, t1, z],
            vec![z, t1, e1, d2],
            vec![d1, z, d2, e1 + e2 + e3],
        ]),
        basis: sector_basis(3, ParitySector::Odd),
        sector: ParitySector::Odd,
    };
    match sector {
        ParitySector::Even => even,
        ParitySector::Odd => odd,
        ParitySector::Full => assemble_full(3, &even, &odd),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real_entries(h: &SectorHamiltonian<f64>) -> Vec<Vec<f64>> {
        (0..h.dim())
            .map(|i| (0..h.dim()).map(|j| h.matrix[(i, j)].re).collect())
            .collect()
    }

    #[test]
    fn label_roundtrip_and_parity() {
        let l = BasisLabel::parse("011").unwrap();
        assert_eq!(l.index(), 3);
        assert_eq!(l.occupation(1), 0);
        assert_eq!(l.occupation(3), 1);
        assert_eq!(l.parity(), ParitySector::Even);
        assert_eq!(l.to_string(), "011");
        assert!(BasisLabel::parse("0120").is_none());
        assert!(BasisLabel::parse("2").is_none());
    }

    #[test]
    fn sector_labels_have_matching_parity() {
        for sites in [2, 3] {
            for sector in [ParitySector::Even, ParitySector::Odd] {
                for l in sector_basis(sites, sector) {
                    assert_eq!(l.parity(), sector);
                }
            }
        }
    }

    #[test]
    fn two_site_full_at_sweet_spot() {
        let h = build_two_site(&ChainSpec2::new(0.0, 0.0, 1.0, 1.0).unwrap(), ParitySector::Full);
        let m = real_entries(&h);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i, j) == (0, 3) || (i, j) == (3, 0) || (i, j) == (1, 2) || (i, j) == (2, 1)
                {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(m[i][j], expected, "entry ({i},{j})");
            }
            assert_eq!(h.matrix[(i, i)].im, 0.0);
        }
    }

    #[test]
    fn two_site_even_block() {
        let h = build_two_site(&ChainSpec2::new(1.0, 2.0, 0.3, 0.7).unwrap(), ParitySector::Even);
        assert_eq!(real_entries(&h), vec![vec![0.0, 0.7], vec![0.7, 3.0]]);
    }

    #[test]
    fn two_site_odd_block() {
        let h = build_two_site(&ChainSpec2::new(1.0, 2.0, 0.3, 0.7).unwrap(), ParitySector::Odd);
        assert_eq!(real_entries(&h), vec![vec![2.0, 0.3], vec![0.3, 1.0]]);
    }

    #[test]
    fn three_site_odd_at_sweet_spot_matches_appendix_matrix() {
        let d = 0.8;
        let h = build_three_site(&ChainSpec3::sweet_spot(d), ParitySector::Odd);
        let expected = vec![
            vec![0.0, d, 0.0, d],
            vec![d, 0.0, d, 0.0],
            vec![0.0, d, 0.0, d],
            vec![d, 0.0, d, 0.0],
        ];
        assert_eq!(real_entries(&h), expected);
    }

    #[test]
    fn three_site_even_first_row() {
        let h = build_three_site(&ChainSpec3::sweet_spot(1.0), ParitySector::Even);
        assert_eq!(real_entries(&h)[0], vec![0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn onsite_only_is_diagonal_with_occupied_sums() {
        let spec = ChainSpec3::new(0.5, -1.0, 2.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let h = build_three_site(&spec, ParitySector::Full);
        let eps = [0.5, -1.0, 2.0];
        for (i, l) in h.basis.iter().enumerate() {
            let sum: f64 = (1..=3).map(|s| eps[s - 1] * l.occupation(s) as f64).sum();
            for j in 0..8 {
                let expected = if i == j { sum } else { 0.0 };
                assert_eq!(h.matrix[(i, j)].re, expected);
            }
        }
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(
            ChainSpec2::new(f64::NAN, 0.0, 1.0, 1.0),
            Err(KitaevError::NonFinite { name: "eps1" })
        );
        assert!(ChainSpec3::new(0.0, 0.0, 0.0, 1.0, f64::INFINITY, 1.0, 1.0).is_err());
    }

    fn arb_spec3() -> impl Strategy<Value = ChainSpec3<f64>> {
        prop::array::uniform7(-3.0f64..3.0).prop_map(|p| ChainSpec3 {
            eps1: p[0],
            eps2: p[1],
            eps3: p[2],
            tau1: p[3],
            tau2: p[4],
            delta1: p[5],
            delta2: p[6],
        })
    }

    proptest! {
        #[test]
        fn every_build_is_real_symmetric(spec in arb_spec3(), e1 in -3.0f64..3.0, e2 in -3.0f64..3.0, t in -2.0f64..2.0, d in -2.0f64..2.0) {
            let spec2 = ChainSpec2 { eps1: e1, eps2: e2, tau: t, delta: d };
            for sector in [ParitySector::Even, ParitySector::Odd, ParitySector::Full] {
                for h in [build_three_site(&spec, sector), build_two_site(&spec2, sector)] {
                    prop_assert_eq!(h.matrix.hermitian_defect(), 0.0);
                    prop_assert!(h.matrix.as_slice().iter().all(|z| z.im == 0.0));
                    prop_assert_eq!(h.matrix.dim(), h.basis.len());
                }
            }
        }

        #[test]
        fn full_build_never_mixes_parity(spec in arb_spec3()) {
            let h = build_three_site(&spec, ParitySector::Full);
            for (i, li) in h.basis.iter().enumerate() {
                for (j, lj) in h.basis.iter().enumerate() {
                    if li.parity() != lj.parity() {
                        prop_assert_eq!(h.matrix[(i, j)].norm(), 0.0);
                    }
                }
            }
        }

        #[test]
        fn full_blocks_equal_direct_sector_builds(spec in arb_spec3()) {
            let full = build_three_site(&spec, ParitySector::Full);
            for sector in [ParitySector::Even, ParitySector::Odd] {
                prop_assert_eq!(full.block(sector), build_three_site(&spec, sector));
            }
        }
    }
}
