//! Exact unitary evolution `|ψ(t)⟩ = Σ_j e^{−iλ_j t} ⟨λ_j|ψ(0)⟩ |λ_j⟩` and
//! the closed-form sweet-spot evolutions that serve as its oracles.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{KitaevError, Result};
use crate::linalg::{inner, norm};
use crate::model::{sector_basis, BasisLabel, ChainSpec2, ChainSpec3, KitaevChain, ParitySector};
use crate::scalar::{cis, re, Cplx, Real};
use crate::spectral::{diagonalize, diagonalize_by_parity, two_site_analytic_spectrum, EigenSystem};

/// Unit-norm state vector with its basis labels attached.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Cplx<T>>,
    basis: Vec<BasisLabel>,
}

impl<T: Real> PureState<T> {
    /// Validated constructor: lengths must agree and the norm must be 1.
    pub fn new(amplitudes: Vec<Cplx<T>>, basis: Vec<BasisLabel>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(KitaevError::Dimension {
                expected: basis.len(),
                found: amplitudes.len(),
            });
        }
        let deviation = (norm(&amplitudes) - T::one()).abs();
        if deviation > T::strict_tol() {
            return Err(KitaevError::NotNormalized {
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { amplitudes, basis })
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(amplitudes: Vec<Cplx<T>>, basis: Vec<BasisLabel>) -> Result<Self> {
        let n = norm(&amplitudes);
        Self::new(amplitudes.into_iter().map(|a| a / n).collect(), basis)
    }

    pub(crate) fn from_parts(amplitudes: Vec<Cplx<T>>, basis: Vec<BasisLabel>) -> Self {
        debug_assert_eq!(amplitudes.len(), basis.len());
        Self { amplitudes, basis }
    }

    /// Basis state `|label⟩` in the full space of its chain.
    pub fn basis_state(label: BasisLabel) -> Self {
        let basis = sector_basis(label.sites(), ParitySector::Full);
        let mut amplitudes = vec![Complex::zero(); basis.len()];
        amplitudes[label.index()] = Complex::new(T::one(), T::zero());
        Self { amplitudes, basis }
    }

    /// Full-space state from `(label, amplitude)` pairs, normalised.
    pub fn from_terms(sites: usize, terms: &[(&str, Cplx<T>)]) -> Result<Self> {
        let basis = sector_basis(sites, ParitySector::Full);
        let mut amplitudes = vec![Complex::zero(); basis.len()];
        for (s, a) in terms {
            let l = BasisLabel::parse(s)
                .filter(|l| l.sites() == sites)
                .ok_or_else(|| KitaevError::UnsupportedInitial((*s).to_string()))?;
            amplitudes[l.index()] = amplitudes[l.index()] + *a;
        }
        Self::normalized(amplitudes, basis)
    }

    /// Haar-random state supported on `sector` (Gaussian amplitudes, normalised).
    /// The result is expressed in that sector's basis.
    pub fn random<R: Rng + ?Sized>(sites: usize, sector: ParitySector, rng: &mut R) -> Self {
        let basis = sector_basis(sites, sector);
        let amplitudes: Vec<Cplx<T>> = basis
            .iter()
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(T::lit(re), T::lit(im))
            })
            .collect();
        let n = norm(&amplitudes);
        Self {
            amplitudes: amplitudes.into_iter().map(|a| a / n).collect(),
            basis,
        }
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell_plus() -> Self {
        let one = re(T::one());
        Self::from_terms(2, &[("00", one), ("11", one)]).expect("static state")
    }

    /// `(|000⟩ + |111⟩)/√2`.
    pub fn ghz() -> Self {
        let one = re(T::one());
        Self::from_terms(3, &[("000", one), ("111", one)]).expect("static state")
    }

    /// Even-parity W state `(|011⟩ + |101⟩ + |110⟩)/√3`.
    pub fn w_even() -> Self {
        let one = re(T::one());
        Self::from_terms(3, &[("011", one), ("101", one), ("110", one)]).expect("static state")
    }

    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amplitudes
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn sites(&self) -> usize {
        self.basis[0].sites()
    }

    pub fn norm(&self) -> T {
        norm(&self.amplitudes)
    }

    /// Amplitude on `label`, zero when the label is outside this basis.
    pub fn amplitude(&self, label: BasisLabel) -> Cplx<T> {
        self.basis
            .iter()
            .position(|&b| b == label)
            .map_or(Complex::zero(), |i| self.amplitudes[i])
    }

    /// Amplitude on the label written as a bit string. Panics on a bad label.
    pub fn amp(&self, label: &str) -> Cplx<T> {
        self.amplitude(BasisLabel::parse(label).expect("valid label"))
    }

    /// Same state expressed in the lexicographic full basis.
    pub fn to_full(&self) -> Self {
        let basis = sector_basis(self.sites(), ParitySector::Full);
        if basis == self.basis {
            return self.clone();
        }
        let mut amplitudes = vec![Complex::zero(); basis.len()];
        for (l, a) in self.basis.iter().zip(&self.amplitudes) {
            amplitudes[l.index()] = *a;
        }
        Self { amplitudes, basis }
    }

    /// `⟨self|other⟩`; the bases must match.
    pub fn overlap(&self, other: &Self) -> Result<Cplx<T>> {
        if self.basis != other.basis {
            return Err(KitaevError::BasisMismatch);
        }
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    /// Equality up to a global phase: `|⟨a|b⟩| > 1 − tol`.
    pub fn equals_up_to_phase(&self, other: &Self, tol: T) -> bool {
        self.overlap(other)
            .map(|o| o.norm() > T::one() - tol)
            .unwrap_or(false)
    }

    /// `min_φ max_i |e^{iφ} a_i − b_i|`, with the phase taken from `⟨a|b⟩`.
    /// A stricter companion to [`Self::equals_up_to_phase`].
    pub fn phase_aligned_distance(&self, other: &Self) -> Result<T> {
        let o = self.overlap(other)?;
        let phase = if o.norm().is_zero() {
            re(T::one())
        } else {
            o / o.norm()
        };
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (*a * phase - *b).norm())
            .fold(T::zero(), T::max))
    }
}

/// Named initial states accepted by the drivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialState {
    /// `|00⟩`
    Empty2,
    /// `|11⟩`
    Filled2,
    /// `(|00⟩ + |11⟩)/√2`
    BellPlus,
    /// `|000⟩`
    Empty3,
    /// `|111⟩`
    Filled3,
    /// `(|000⟩ + |111⟩)/√2`
    Ghz,
}

impl InitialState {
    pub fn sites(self) -> usize {
        match self {
            InitialState::Empty2 | InitialState::Filled2 | InitialState::BellPlus => 2,
            _ => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            InitialState::Empty2 => "00",
            InitialState::Filled2 => "11",
            InitialState::BellPlus => "bell+",
            InitialState::Empty3 => "000",
            InitialState::Filled3 => "111",
            InitialState::Ghz => "ghz",
        }
    }

    pub fn state<T: Real>(self) -> PureState<T> {
        match self {
            InitialState::BellPlus => PureState::bell_plus(),
            InitialState::Ghz => PureState::ghz(),
            other => PureState::basis_state(BasisLabel::parse(other.label()).expect("static label")),
        }
    }
}

impl FromStr for InitialState {
    type Err = KitaevError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "00" => InitialState::Empty2,
            "11" => InitialState::Filled2,
            "bell+" | "bell" => InitialState::BellPlus,
            "000" => InitialState::Empty3,
            "111" => InitialState::Filled3,
            "ghz" => InitialState::Ghz,
            _ => return Err(KitaevError::UnsupportedInitial(s.to_string())),
        })
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Precomputed spectral data for evolving one initial state.
///
/// Immutable after construction, so evolving at many times (also from many
/// threads) only costs one matrix-vector product each.
#[derive(Debug, Clone)]
pub struct EvolutionPlan<T> {
    eigensystem: EigenSystem<T>,
    initial: PureState<T>,
    projections: Vec<Cplx<T>>,
}

impl<T: Real> EvolutionPlan<T> {
    pub fn new(eigensystem: EigenSystem<T>, initial: PureState<T>) -> Result<Self> {
        if eigensystem.basis != initial.basis {
            return Err(KitaevError::BasisMismatch);
        }
        let v = &eigensystem.vectors;
        let n = eigensystem.dim();
        let projections = (0..n)
            .map(|j| {
                (0..n).fold(Complex::zero(), |acc: Cplx<T>, i| {
                    acc + v[(i, j)].conj() * initial.amplitudes[i]
                })
            })
            .collect();
        Ok(Self {
            eigensystem,
            initial,
            projections,
        })
    }

    /// Plan for a full-space initial state, diagonalising each parity block
    /// separately so that mixed-parity states (GHZ) evolve blockwise.
    pub fn for_chain<C: KitaevChain<T> + ?Sized>(chain: &C, initial: &PureState<T>) -> Result<Self> {
        if initial.sites() != chain.sites() {
            return Err(KitaevError::Dimension {
                expected: 1 << chain.sites(),
                found: initial.dim(),
            });
        }
        let eig = diagonalize_by_parity(&chain.hamiltonian(ParitySector::Full))?;
        Self::new(eig, initial.to_full())
    }

    /// Plan restricted to one parity sector; `initial` must already be
    /// expressed in that sector's basis.
    pub fn for_sector<C: KitaevChain<T> + ?Sized>(
        chain: &C,
        sector: ParitySector,
        initial: PureState<T>,
    ) -> Result<Self> {
        Self::new(diagonalize(&chain.hamiltonian(sector))?, initial)
    }

    pub fn initial(&self) -> &PureState<T> {
        &self.initial
    }

    pub fn eigensystem(&self) -> &EigenSystem<T> {
        &self.eigensystem
    }

    /// `⟨λ_j|ψ(0)⟩`.
    pub fn projections(&self) -> &[Cplx<T>] {
        &self.projections
    }

    pub fn evolve(&self, t: T) -> PureState<T> {
        let n = self.eigensystem.dim();
        let v = &self.eigensystem.vectors;
        let weights: Vec<Cplx<T>> = self
            .projections
            .iter()
            .zip(&self.eigensystem.values)
            .map(|(c, &lam)| {
                if c.is_zero() {
                    Complex::zero()
                } else {
                    *c * cis(-lam * t)
                }
            })
            .collect();
        let amplitudes = (0..n)
            .map(|i| {
                (0..n).fold(Complex::zero(), |acc: Cplx<T>, j| {
                    if weights[j].is_zero() {
                        acc
                    } else {
                        acc + v[(i, j)] * weights[j]
                    }
                })
            })
            .collect();
        PureState::from_parts(amplitudes, self.eigensystem.basis.clone())
    }
}

/// `|ψ(t)⟩` for a prepared plan.
pub fn evolve<T: Real>(plan: &EvolutionPlan<T>, t: T) -> PureState<T> {
    plan.evolve(t)
}

/// Closed-form two-site evolution at `Δ = τ` from `|00⟩`, `|11⟩` or
/// `(|00⟩+|11⟩)/√2`, returned in the full four-dimensional basis.
///
/// Written with `λ₃ = E_e^−`, `λ₄ = E_e^+`, `N₃² = Δ²/(Δ²+λ₄²)` and
/// `N₄² = Δ²/(Δ²+λ₃²)`. The signs follow the even block `[[0, Δ], [Δ, 2ε₊]]`
/// as built by [`crate::model::build_two_site`].
pub fn two_site_closed_form<T: Real>(
    spec: &ChainSpec2<T>,
    initial: InitialState,
    t: T,
) -> Result<PureState<T>> {
    spec.validate()?;
    let d = spec.delta;
    let scale = T::one().max(d.abs());
    if (d - spec.tau).abs() > T::strict_tol() * scale {
        return Err(KitaevError::NotSweetSpot(format!(
            "two-site closed form needs Δ = τ (Δ = {d}, τ = {})",
            spec.tau
        )));
    }
    if d.is_zero() {
        return Err(KitaevError::NotSweetSpot("two-site closed form needs Δ ≠ 0".into()));
    }
    let spectrum = two_site_analytic_spectrum(spec);
    let (l3, l4) = (spectrum.even_minus, spectrum.even_plus);
    let n3 = d * d / (d * d + l4 * l4);
    let n4 = d * d / (d * d + l3 * l3);
    let e3 = cis(-l3 * t);
    let e4 = cis(-l4 * t);
    let (r3, r4) = (l3 / d, l4 / d);

    let (alpha, delta) = match initial {
        InitialState::Empty2 => (
            e3 * (n3 * r4 * r4) + e4 * (n4 * r3 * r3),
            -(e3 * (n3 * r4) + e4 * (n4 * r3)),
        ),
        InitialState::Filled2 => (
            -(e3 * (n3 * r4) + e4 * (n4 * r3)),
            e3 * n3 + e4 * n4,
        ),
        InitialState::BellPlus => {
            let s = T::SQRT_2();
            (
                (e3 * (n3 * r4 * (r4 - T::one())) + e4 * (n4 * r3 * (r3 - T::one()))) / s,
                (e3 * (n3 * (T::one() - r4)) + e4 * (n4 * (T::one() - r3))) / s,
            )
        }
        other => return Err(KitaevError::UnsupportedInitial(other.label().to_string())),
    };
    let mut amplitudes = vec![Complex::zero(); 4];
    amplitudes[0] = alpha;
    amplitudes[3] = delta;
    Ok(PureState::from_parts(
        amplitudes,
        sector_basis(2, ParitySector::Full),
    ))
}

/// Closed-form three-site evolution at the genuine sweet spot
/// (`ε_i = 0`, `τ_i = Δ_i = Δ`), in the full eight-dimensional basis.
///
/// From `|000⟩`: `cos²(Δt)|000⟩ − sin²(Δt)|101⟩ − (i/2)sin(2Δt)(|011⟩+|110⟩)`,
/// and the mirrored pattern `|111⟩, |010⟩, |001⟩+|100⟩` from `|111⟩`. GHZ is
/// the normalised sum of the two.
pub fn three_site_sweet_spot_closed_form<T: Real>(
    spec: &ChainSpec3<T>,
    initial: InitialState,
    t: T,
) -> Result<PureState<T>> {
    spec.validate()?;
    let d = spec.delta1;
    let tol = T::strict_tol() * T::one().max(d.abs());
    let onsite_zero = [spec.eps1, spec.eps2, spec.eps3].iter().all(|e| e.abs() <= tol);
    let couplings_equal = [spec.delta2, spec.tau1, spec.tau2].iter().all(|x| (*x - d).abs() <= tol);
    if !(onsite_zero && couplings_equal) {
        return Err(KitaevError::NotSweetSpot(
            "three-site closed form needs ε_i = 0 and τ_i = Δ_i".into(),
        ));
    }

    let (s, c) = (d * t).sin_cos();
    let stay = re(c * c);
    let hop = re(-s * s);
    let mix = Complex::new(T::zero(), -T::lit(0.5) * (T::lit(2.0) * d * t).sin());
    let mut amplitudes = vec![Complex::zero(); 8];
    let mut place = |weight: T, labels: [&str; 4]| {
        let [home, far, side_a, side_b] = labels.map(|l| BasisLabel::parse(l).expect("label").index());
        amplitudes[home] = amplitudes[home] + stay * weight;
        amplitudes[far] = amplitudes[far] + hop * weight;
        amplitudes[side_a] = amplitudes[side_a] + mix * weight;
        amplitudes[side_b] = amplitudes[side_b] + mix * weight;
    };
    let even = ["000", "101", "011", "110"];
    let odd = ["111", "010", "001", "100"];
    match initial {
        InitialState::Empty3 => place(T::one(), even),
        InitialState::Filled3 => place(T::one(), odd),
        InitialState::Ghz => {
            let w = T::FRAC_1_SQRT_2();
            place(w, even);
            place(w, odd);
        }
        other => return Err(KitaevError::UnsupportedInitial(other.label().to_string())),
    }
    Ok(PureState::from_parts(
        amplitudes,
        sector_basis(3, ParitySector::Full),
    ))
}
