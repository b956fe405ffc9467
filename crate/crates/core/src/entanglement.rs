//! Entanglement measures on two- and three-qubit occupation states.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{KitaevError, Result};
use crate::evolution::PureState;
use crate::linalg::{inner, sigma_y, CMatrix};
use crate::model::{BasisLabel, ParitySector};
use crate::scalar::{re, Cplx, Real};

/// Tolerance for the X-pattern test on off-pattern entries.
pub const X_FORM_TOL: f64 = 1e-10;

/// Grid size for the phase-free GME search over θ.
pub const GME_GRID_POINTS: usize = 2048;

fn require_dim<T: Real>(psi: &PureState<T>, dim: usize) -> Result<PureState<T>> {
    let full = psi.to_full();
    if full.dim() != dim {
        return Err(KitaevError::Dimension {
            expected: dim,
            found: full.dim(),
        });
    }
    Ok(full)
}

/// `C = 2|αδ − βγ|` for `α|00⟩ + β|01⟩ + γ|10⟩ + δ|11⟩`.
pub fn concurrence_pure_2q<T: Real>(psi: &PureState<T>) -> Result<T> {
    let psi = require_dim(psi, 4)?;
    let a = psi.amplitudes();
    Ok(((a[0] * a[3] - a[1] * a[2]) * T::lit(2.0)).norm())
}

/// `|⟨ψ|ψ̃⟩|` with `|ψ̃⟩ = (σ_y⊗σ_y)|ψ*⟩`.
pub fn spin_flip_overlap<T: Real>(psi: &PureState<T>) -> Result<T> {
    let psi = require_dim(psi, 4)?;
    let yy = sigma_y::<T>().kron(&sigma_y());
    let conj: Vec<Cplx<T>> = psi.amplitudes().iter().map(|a| a.conj()).collect();
    let flipped = yy.apply(&conj);
    Ok(inner(psi.amplitudes(), &flipped).norm())
}

/// Two-qubit GME as a function of concurrence, `(1 − √(1 − C²))/2`.
pub fn gme_two_qubit<T: Real>(c: T) -> Result<T> {
    let tol = T::strict_tol();
    if !(c >= -tol && c <= T::one() + tol) {
        return Err(KitaevError::ConcurrenceOutOfRange(c.to_f64().unwrap_or(f64::NAN)));
    }
    let c = c.max(T::zero()).min(T::one());
    Ok((T::one() - (T::one() - c * c).sqrt()) * T::lit(0.5))
}

/// Two-qubit GME of a pure state, equal to `gme_two_qubit(C)`.
///
/// Uses `√(1 − C²) = √((a − d)² + 4|b|²)` for the one-site reduced state
/// `[[a, b], [b*, d]]`, which stays accurate as `C → 1`.
pub fn gme_pure_2q<T: Real>(psi: &PureState<T>) -> Result<T> {
    let psi = require_dim(psi, 4)?;
    let x = psi.amplitudes();
    let a = x[0].norm_sqr() + x[1].norm_sqr();
    let d = x[2].norm_sqr() + x[3].norm_sqr();
    let b = x[0] * x[2].conj() + x[1] * x[3].conj();
    let gap = ((a - d) * (a - d) + T::lit(4.0) * b.norm_sqr()).sqrt();
    Ok(((T::one() - gap) * T::lit(0.5)).max(T::zero()))
}

/// Pair of sites kept by a three-site partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SitePair {
    S12,
    S23,
    S13,
}

impl SitePair {
    pub const ALL: [SitePair; 3] = [SitePair::S12, SitePair::S23, SitePair::S13];

    pub fn new(i: usize, j: usize) -> Result<Self> {
        match (i, j) {
            (1, 2) => Ok(SitePair::S12),
            (2, 3) => Ok(SitePair::S23),
            (1, 3) => Ok(SitePair::S13),
            _ => Err(KitaevError::InvalidPair(i, j)),
        }
    }

    /// Kept sites, 1-based, in qubit order.
    pub fn kept(self) -> (usize, usize) {
        match self {
            SitePair::S12 => (1, 2),
            SitePair::S23 => (2, 3),
            SitePair::S13 => (1, 3),
        }
    }

    pub fn traced(self) -> usize {
        6 - self.kept().0 - self.kept().1
    }
}

impl fmt::Display for SitePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.kept();
        write!(f, "{i}{j}")
    }
}

/// Reduced two-qubit density matrix in the basis `00, 01, 10, 11`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> TwoQubitDensity<T> {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        if matrix.dim() != 4 {
            return Err(KitaevError::Dimension {
                expected: 4,
                found: matrix.dim(),
            });
        }
        let rho = Self { matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// No validation. Used on hot paths where the parent state is known to be normalised.
    pub fn new_unchecked(matrix: CMatrix<T>) -> Self {
        debug_assert_eq!(matrix.dim(), 4);
        Self { matrix }
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::strict_tol();
        let defect = self.matrix.hermitian_defect();
        if defect > tol {
            return Err(KitaevError::NotHermitian {
                defect: defect.to_f64().unwrap_or(f64::NAN),
            });
        }
        let deviation = (self.matrix.trace() - re(T::one())).norm();
        if deviation > tol {
            return Err(KitaevError::BadTrace {
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (values, _) = self.matrix.eigh();
        if values[0] < -tol {
            return Err(KitaevError::NotPsd {
                min_eigenvalue: values[0].to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// Largest magnitude outside the diagonal and anti-diagonal.
    pub fn x_form_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn is_x_form(&self, tol: T) -> bool {
        self.x_form_defect() <= tol
    }
}

/// `ρ = Tr_k |ψ⟩⟨ψ|` keeping `pair` of a three-site state.
pub fn partial_trace<T: Real>(psi: &PureState<T>, pair: SitePair) -> Result<TwoQubitDensity<T>> {
    let psi = require_dim(psi, 8)?;
    let [v0, v1] = conditional_amplitudes(psi.amplitudes(), pair);
    let mut m = CMatrix::outer(&v0, &v0);
    let m1 = CMatrix::outer(&v1, &v1);
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = m[(i, j)] + m1[(i, j)];
        }
    }
    Ok(TwoQubitDensity::new_unchecked(m))
}

/// Columns of `V` with `ρ = V V†`: the kept-pair amplitudes with the traced
/// site fixed to 0 and to 1.
fn conditional_amplitudes<T: Real>(amps: &[Cplx<T>], pair: SitePair) -> [[Cplx<T>; 4]; 2] {
    let (i, j) = pair.kept();
    let k = pair.traced();
    let mut out = [[Complex::zero(); 4]; 2];
    for (idx, a) in amps.iter().enumerate() {
        let l = BasisLabel::from_index(3, idx);
        let row = 2 * l.occupation(i) as usize + l.occupation(j) as usize;
        out[l.occupation(k) as usize][row] = *a;
    }
    out
}

/// Closed-form concurrence of an X-shaped density matrix,
/// `2 max{0, |ρ₂₃| − √(ρ₁₁ρ₄₄), |ρ₁₄| − √(ρ₂₂ρ₃₃)}`.
pub fn concurrence_x<T: Real>(rho: &TwoQubitDensity<T>) -> Result<T> {
    let defect = rho.x_form_defect();
    if defect > T::lit(X_FORM_TOL) {
        return Err(KitaevError::NotXForm {
            offending: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let m = rho.matrix();
    let d = |i: usize| m[(i, i)].re.max(T::zero());
    let a = m[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    let b = m[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    Ok((T::lit(2.0) * a.max(b).max(T::zero())).min(T::one()))
}

/// Wootters concurrence `max{0, η₁ − η₂ − η₃ − η₄}` for any two-qubit state.
///
/// The `η` are obtained as singular values of `τ = Vᵀ(σ_y⊗σ_y)V` for a
/// factorisation `ρ = VV†`, which avoids square roots of roundoff-sized
/// eigenvalues of `ρρ̃`.
pub fn concurrence_wootters<T: Real>(rho: &TwoQubitDensity<T>) -> Result<T> {
    let (p, e) = rho.matrix().eigh();
    if p[0] < -T::strict_tol() {
        return Err(KitaevError::NotPsd {
            min_eigenvalue: p[0].to_f64().unwrap_or(f64::NAN),
        });
    }
    let cutoff = T::epsilon() * T::lit(16.0) * p[3].max(T::zero());
    let cols: Vec<Vec<Cplx<T>>> = (0..4)
        .filter(|&k| p[k] > cutoff)
        .map(|k| e.column(k).into_iter().map(|x| x * p[k].sqrt()).collect())
        .collect();
    let eta = flip_singular_values(&cols);
    let c = eta.first().copied().unwrap_or(T::zero()) - eta.iter().skip(1).fold(T::zero(), |acc, &x| acc + x);
    let c = c.max(T::zero());
    if c > T::one() + T::loose_tol() {
        return Err(KitaevError::ConcurrenceOutOfRange(c.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(c.min(T::one()))
}

/// Descending singular values of `τ_ij = v_iᵀ (σ_y⊗σ_y) v_j`.
fn flip_singular_values<T: Real>(cols: &[Vec<Cplx<T>>]) -> Vec<T> {
    let r = cols.len();
    if r == 0 {
        return Vec::new();
    }
    let yy = sigma_y::<T>().kron(&sigma_y());
    let flipped: Vec<Vec<Cplx<T>>> = cols.iter().map(|v| yy.apply(v)).collect();
    let tau = |i: usize, j: usize| {
        cols[i]
            .iter()
            .zip(&flipped[j])
            .fold(Complex::zero(), |acc: Cplx<T>, (a, b)| acc + *a * *b)
    };
    if r == 1 {
        return vec![tau(0, 0).norm()];
    }
    // Hermitian dilation [[0, τ], [τ†, 0]] has eigenvalues ±σ_i.
    let dil = CMatrix::from_fn(2 * r, |i, j| match (i < r, j < r) {
        (true, false) => tau(i, j - r),
        (false, true) => tau(j, i - r).conj(),
        _ => Complex::zero(),
    });
    let (vals, _) = dil.eigh();
    vals[r..].iter().rev().map(|v| v.max(T::zero())).collect()
}

/// Concurrence with the closed X-form expression when it applies,
/// Wootters otherwise.
pub fn concurrence<T: Real>(rho: &TwoQubitDensity<T>) -> Result<T> {
    if rho.is_x_form(T::lit(X_FORM_TOL)) {
        concurrence_x(rho)
    } else {
        concurrence_wootters(rho)
    }
}

/// `|⟨ψ(0)|ψ(t)⟩|²`.
pub fn return_probability<T: Real>(psi0: &PureState<T>, psit: &PureState<T>) -> Result<T> {
    Ok(psi0.overlap(psit)?.norm_sqr())
}

/// Fixed entangled states used as projection targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TargetKind {
    /// `(|00⟩ + |11⟩)/√2`
    Bell2,
    /// `(|000⟩ + |111⟩)/√2`
    Phi1Ghz,
    /// `(|000⟩ + |101⟩)/√2`
    Phi2Outer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetState<T> {
    pub kind: TargetKind,
    pub state: PureState<T>,
}

impl<T: Real> TargetState<T> {
    pub fn new(kind: TargetKind) -> Self {
        let one = re(T::one());
        let state = match kind {
            TargetKind::Bell2 => PureState::bell_plus(),
            TargetKind::Phi1Ghz => PureState::ghz(),
            TargetKind::Phi2Outer => PureState::from_terms(3, &[("000", one), ("101", one)]).expect("static state"),
        };
        Self { kind, state }
    }
}

/// `|⟨φ|ψ(t)⟩|²`.
pub fn entanglement_dynamics<T: Real>(target: &TargetState<T>, psit: &PureState<T>) -> Result<T> {
    return_probability(&target.state, &psit.to_full())
}

/// Which amplitudes enter the phase-free overlap `Λ(θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GmeReference {
    /// `|000⟩, |111⟩`
    Ghz,
    /// `|000⟩, |011⟩, |101⟩, |110⟩`
    WEven,
    /// All eight configurations.
    FullState,
}

impl GmeReference {
    pub fn includes(self, label: BasisLabel) -> bool {
        match self {
            GmeReference::Ghz => label.index() == 0 || label.index() == 7,
            GmeReference::WEven => label.parity() == ParitySector::Even,
            GmeReference::FullState => true,
        }
    }

    pub fn filter(self) -> Vec<BasisLabel> {
        (0..8)
            .map(|i| BasisLabel::from_index(3, i))
            .filter(|&l| self.includes(l))
            .collect()
    }
}

impl FromStr for GmeReference {
    type Err = KitaevError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(GmeReference::Ghz),
            "w" | "w-even" => Ok(GmeReference::WEven),
            "full" => Ok(GmeReference::FullState),
            _ => Err(KitaevError::UnknownMeasure(s.to_string())),
        }
    }
}

/// Phase-free GME maximiser with the θ grid tabulated once.
///
/// Separable states are `(cos θ|0⟩ + sin θ|1⟩)^⊗3`, so
/// `Λ(θ) = Σ_k A_k cos^{3−k}θ sin^kθ` where `A_k` sums the filtered
/// amplitudes with `k` occupied sites. `|Λ|` has period π; the grid covers
/// `[0, π)` and each near-best local maximum is refined by golden section.
#[derive(Debug, Clone)]
pub struct GmeOptimizer<T> {
    step: T,
    table: Vec<[T; 4]>,
}

impl<T: Real> Default for GmeOptimizer<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> GmeOptimizer<T> {
    pub fn new() -> Self {
        Self::with_grid(GME_GRID_POINTS)
    }

    pub fn with_grid(points: usize) -> Self {
        let points = points.max(8);
        let step = T::PI() / T::lit(points as f64);
        let table = (0..points).map(|k| powers(step * T::lit(k as f64))).collect();
        Self { step, table }
    }

    /// `max_θ |Λ(θ)|`.
    pub fn max_overlap(&self, psi: &PureState<T>, reference: GmeReference) -> Result<T> {
        let psi = require_dim(psi, 8)?;
        let mut a = [Complex::zero(); 4];
        for (l, amp) in psi.basis().iter().zip(psi.amplitudes()) {
            if reference.includes(*l) {
                let k = l.particle_number() as usize;
                a[k] = a[k] + *amp;
            }
        }
        Ok(self.maximize(&a))
    }

    /// `1 − Λ_max²`.
    pub fn gme(&self, psi: &PureState<T>, reference: GmeReference) -> Result<T> {
        let lam = self.max_overlap(psi, reference)?;
        Ok((T::one() - lam * lam).max(T::zero()))
    }

    fn maximize(&self, a: &[Cplx<T>; 4]) -> T {
        let eval_w = |w: &[T; 4]| {
            let mut s_re = T::zero();
            let mut s_im = T::zero();
            for k in 0..4 {
                s_re = s_re + a[k].re * w[k];
                s_im = s_im + a[k].im * w[k];
            }
            (s_re * s_re + s_im * s_im).sqrt()
        };
        let values: Vec<T> = self.table.iter().map(eval_w).collect();
        let n = values.len();
        let best = values.iter().copied().fold(T::zero(), T::max);
        let window = T::lit(1e-3);
        let mut result = best;
        for k in 0..n {
            let v = values[k];
            let left = values[(k + n - 1) % n];
            let right = values[(k + 1) % n];
            if v >= left && v >= right && v >= best - window {
                let centre = self.step * T::lit(k as f64);
                let refined = golden_max(
                    |th| eval_w(&powers(th)),
                    centre - self.step,
                    centre + self.step,
                    T::lit(1e-10),
                );
                result = result.max(refined);
            }
        }
        result
    }
}

fn powers<T: Real>(theta: T) -> [T; 4] {
    let (s, c) = theta.sin_cos();
    [c * c * c, c * c * s, c * s * s, s * s * s]
}

fn golden_max<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> T {
    let g = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = f1.max(f2);
    for _ in 0..200 {
        if hi - lo < tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
        best = best.max(f1).max(f2);
    }
    best
}

/// Phase-free multipartite GME, `1 − max_θ |Λ(θ)|²`.
pub fn gme_multipartite<T: Real>(psi: &PureState<T>, reference: GmeReference) -> Result<T> {
    GmeOptimizer::new().gme(psi, reference)
}

/// GME over all three-qubit product states (phases included), by alternating
/// single-site maximisation from deterministic starts.
///
/// Validation oracle only: the reported measures use [`gme_multipartite`].
pub fn gme_full_product<T: Real>(psi: &PureState<T>) -> Result<T> {
    let psi = require_dim(psi, 8)?;
    let amps = psi.amplitudes();
    let mut starts: Vec<[[Cplx<T>; 2]; 3]> = Vec::new();
    for bits in 0..8usize {
        let site = |s: usize| {
            if bits >> (2 - s) & 1 == 0 {
                [re(T::one()), Complex::zero()]
            } else {
                [Complex::zero(), re(T::one())]
            }
        };
        starts.push([site(0), site(1), site(2)]);
    }
    let h = re(T::FRAC_1_SQRT_2());
    starts.push([[h, h]; 3]);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d65);
    for _ in 0..16 {
        let mut s = [[Complex::zero(); 2]; 3];
        for site in s.iter_mut() {
            let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            *site = [
                Complex::new(T::lit(v[0] / n), T::lit(v[1] / n)),
                Complex::new(T::lit(v[2] / n), T::lit(v[3] / n)),
            ];
        }
        starts.push(s);
    }

    let mut best = T::zero();
    for mut x in starts {
        let mut last = T::zero();
        for _ in 0..500 {
            let mut val = T::zero();
            for site in 0..3 {
                let mut v: [Cplx<T>; 2] = [Complex::zero(); 2];
                for (idx, a) in amps.iter().enumerate() {
                    let mut w = *a;
                    for other in 0..3 {
                        if other != site {
                            w = w * x[other][idx >> (2 - other) & 1].conj();
                        }
                    }
                    v[idx >> (2 - site) & 1] = v[idx >> (2 - site) & 1] + w;
                }
                val = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
                if val > T::zero() {
                    x[site] = [v[0] / val, v[1] / val];
                }
            }
            if (val - last).abs() < T::epsilon() * T::lit(4.0) {
                last = val;
                break;
            }
            last = val;
        }
        best = best.max(last);
    }
    Ok((T::one() - best * best).max(T::zero()))
}
