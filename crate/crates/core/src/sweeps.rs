//! Parameter sweeps over `(ε, t)` and `(ε, Δ)` grids.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::entanglement::{
    concurrence, concurrence_pure_2q, entanglement_dynamics, gme_pure_2q, gme_two_qubit, partial_trace, return_probability,
    GmeOptimizer, GmeReference, SitePair, TargetKind, TargetState,
};
use crate::error::{KitaevError, Result};
use crate::evolution::{EvolutionPlan, InitialState, PureState};
use crate::model::{sector_basis, Chain, ChainSpec3, KitaevChain, ParitySector};
use crate::scalar::{re, Real};
use crate::spectral::diagonalize;

/// Registry of time-resolved measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Two-site concurrence.
    C,
    /// Two-site GME from the concurrence.
    EG,
    Rp,
    /// Overlap with `(|00⟩+|11⟩)/√2` or `(|000⟩+|101⟩)/√2`.
    Ed,
    C12,
    C23,
    C13,
    /// `(1 − √(1 − C₁₂²))/2`.
    EG12,
    /// Overlap with `(|000⟩+|111⟩)/√2`.
    EdGhz,
    EgGhz,
    EgW,
}

impl Measure {
    pub const ALL: [Measure; 11] = [
        Measure::C,
        Measure::EG,
        Measure::Rp,
        Measure::Ed,
        Measure::C12,
        Measure::C23,
        Measure::C13,
        Measure::EG12,
        Measure::EdGhz,
        Measure::EgGhz,
        Measure::EgW,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::C => "C",
            Measure::EG => "EG",
            Measure::Rp => "Rp",
            Measure::Ed => "Ed",
            Measure::C12 => "C12",
            Measure::C23 => "C23",
            Measure::C13 => "C13",
            Measure::EG12 => "EG12",
            Measure::EdGhz => "Ed_GHZ",
            Measure::EgGhz => "EG_GHZ",
            Measure::EgW => "EG_W",
        }
    }

    pub fn applies_to(self, sites: usize) -> bool {
        match self {
            Measure::Rp | Measure::Ed => true,
            Measure::C | Measure::EG => sites == 2,
            _ => sites == 3,
        }
    }

    /// Closed interval the value must lie in.
    pub fn range(self) -> (f64, f64) {
        match self {
            Measure::EG | Measure::EG12 => (0.0, 0.5),
            _ => (0.0, 1.0),
        }
    }

    /// Measures plotted by default for a chain length.
    pub fn defaults(sites: usize) -> Vec<Measure> {
        if sites == 2 {
            vec![Measure::C, Measure::EG, Measure::Rp, Measure::Ed]
        } else {
            vec![Measure::C12, Measure::EG12, Measure::Rp, Measure::Ed]
        }
    }

    /// Parses a comma-separated list.
    pub fn parse_list(s: &str) -> Result<Vec<Measure>> {
        s.split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl FromStr for Measure {
    type Err = KitaevError;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| KitaevError::UnknownMeasure(s.to_string()))
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive grid `lo, lo + step, …` up to `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange<T> {
    pub lo: T,
    pub hi: T,
    pub step: T,
}

impl<T: Real> AxisRange<T> {
    pub fn new(lo: T, hi: T, step: T) -> Result<Self> {
        let bad = |reason: &str| {
            Err(KitaevError::InvalidAxis {
                name: format!("{lo}..{hi} step {step}"),
                reason: reason.to_string(),
            })
        };
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return bad("non-finite bound");
        }
        if step <= T::zero() {
            return bad("step must be positive");
        }
        if hi < lo {
            return bad("empty range");
        }
        Ok(Self { lo, hi, step })
    }

    /// Single point.
    pub fn point(x: T) -> Self {
        Self {
            lo: x,
            hi: x,
            step: T::one(),
        }
    }

    /// Parses `lo,hi,step`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let nums: Option<Vec<f64>> = parts.iter().map(|p| p.parse().ok()).collect();
        match nums.as_deref() {
            Some([lo, hi, step]) => Self::new(T::lit(*lo), T::lit(*hi), T::lit(*step)),
            _ => Err(KitaevError::InvalidAxis {
                name: s.to_string(),
                reason: "expected lo,hi,step".into(),
            }),
        }
    }

    pub fn len(&self) -> usize {
        let n = ((self.hi - self.lo) / self.step + T::lit(1e-9)).floor();
        n.to_usize().unwrap_or(0) + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.len()).map(|k| self.lo + self.step * T::lit(k as f64)).collect()
    }
}

/// Which onsite energies follow the swept ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpsAxis {
    /// All sites.
    Eps,
    Eps1,
    Eps2,
    Eps3,
    /// Outer sites of a three-site chain.
    Eps13,
}

impl EpsAxis {
    pub fn name(self) -> &'static str {
        match self {
            EpsAxis::Eps => "eps",
            EpsAxis::Eps1 => "eps1",
            EpsAxis::Eps2 => "eps2",
            EpsAxis::Eps3 => "eps3",
            EpsAxis::Eps13 => "eps13",
        }
    }

    /// Copy of `chain` with the axis set to `value`.
    pub fn apply<T: Real>(self, chain: &Chain<T>, value: T) -> Result<Chain<T>> {
        let mut out = *chain;
        match (&mut out, self) {
            (Chain::Two(c), EpsAxis::Eps) => {
                c.eps1 = value;
                c.eps2 = value;
            }
            (Chain::Two(c), EpsAxis::Eps1) => c.eps1 = value,
            (Chain::Two(c), EpsAxis::Eps2) => c.eps2 = value,
            (Chain::Three(c), EpsAxis::Eps) => {
                c.eps1 = value;
                c.eps2 = value;
                c.eps3 = value;
            }
            (Chain::Three(c), EpsAxis::Eps1) => c.eps1 = value,
            (Chain::Three(c), EpsAxis::Eps2) => c.eps2 = value,
            (Chain::Three(c), EpsAxis::Eps3) => c.eps3 = value,
            (Chain::Three(c), EpsAxis::Eps13) => {
                c.eps1 = value;
                c.eps3 = value;
            }
            (Chain::Two(_), _) => {
                return Err(KitaevError::InvalidAxis {
                    name: self.name().into(),
                    reason: "not defined for a two-site chain".into(),
                })
            }
        }
        Ok(out)
    }
}

impl FromStr for EpsAxis {
    type Err = KitaevError;

    fn from_str(s: &str) -> Result<Self> {
        [EpsAxis::Eps, EpsAxis::Eps1, EpsAxis::Eps2, EpsAxis::Eps3, EpsAxis::Eps13]
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| KitaevError::InvalidAxis {
                name: s.to_string(),
                reason: "expected eps, eps1, eps2, eps3 or eps13".into(),
            })
    }
}

impl fmt::Display for EpsAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sets the pairing amplitude: `Δ` for two sites, `Δ₁ = Δ₂` for three.
pub fn with_delta<T: Real>(chain: &Chain<T>, delta: T) -> Chain<T> {
    let mut out = *chain;
    match &mut out {
        Chain::Two(c) => c.delta = delta,
        Chain::Three(c) => {
            c.delta1 = delta;
            c.delta2 = delta;
        }
    }
    out
}

fn validate_chain<T: Real>(chain: &Chain<T>) -> Result<()> {
    match chain {
        Chain::Two(c) => c.validate(),
        Chain::Three(c) => c.validate(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec<T> {
    pub chain: Chain<T>,
    /// `None` evolves the template chain only.
    pub eps: Option<(EpsAxis, AxisRange<T>)>,
    pub initial: InitialState,
    pub measures: Vec<Measure>,
    pub times: AxisRange<T>,
    /// Validate every reduced density matrix and value range.
    pub strict: bool,
}

impl<T: Real> SweepSpec<T> {
    pub fn validate(&self) -> Result<()> {
        validate_chain(&self.chain)?;
        let sites = self.chain.sites();
        if self.initial.sites() != sites {
            return Err(KitaevError::UnsupportedInitial(format!("{} on a {sites}-site chain", self.initial)));
        }
        if self.measures.is_empty() {
            return Err(KitaevError::UnknownMeasure("(empty list)".into()));
        }
        for m in &self.measures {
            if !m.applies_to(sites) {
                return Err(KitaevError::MeasureNotApplicable {
                    measure: m.name().into(),
                    sites,
                });
            }
        }
        if let Some((axis, range)) = &self.eps {
            AxisRange::new(range.lo, range.hi, range.step)?;
            axis.apply(&self.chain, range.lo)?;
        }
        AxisRange::new(self.times.lo, self.times.hi, self.times.step)?;
        Ok(())
    }
}

/// One value on the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureRecord<T> {
    pub epsilon: Option<T>,
    pub delta: Option<T>,
    pub t: Option<T>,
    pub measure: Measure,
    pub value: T,
}

/// Evaluates measures on states evolved from a fixed initial state.
pub struct MeasureContext<'a, T> {
    sites: usize,
    initial: PureState<T>,
    optimizer: &'a GmeOptimizer<T>,
    bell: TargetState<T>,
    ghz: TargetState<T>,
    outer: TargetState<T>,
    strict: bool,
}

impl<'a, T: Real> MeasureContext<'a, T> {
    pub fn new(initial: PureState<T>, optimizer: &'a GmeOptimizer<T>, strict: bool) -> Self {
        Self {
            sites: initial.sites(),
            initial: initial.to_full(),
            optimizer,
            bell: TargetState::new(TargetKind::Bell2),
            ghz: TargetState::new(TargetKind::Phi1Ghz),
            outer: TargetState::new(TargetKind::Phi2Outer),
            strict,
        }
    }

    fn pair_concurrence(&self, psi: &PureState<T>, pair: SitePair) -> Result<T> {
        let rho = partial_trace(psi, pair)?;
        if self.strict {
            rho.validate()?;
        }
        concurrence(&rho)
    }

    /// Value of `measure` on `psi`, which must be expressed in the full basis.
    pub fn evaluate(&self, measure: Measure, psi: &PureState<T>) -> Result<T> {
        if !measure.applies_to(self.sites) {
            return Err(KitaevError::MeasureNotApplicable {
                measure: measure.name().into(),
                sites: self.sites,
            });
        }
        let value = match measure {
            Measure::C => concurrence_pure_2q(psi)?,
            Measure::EG => gme_pure_2q(psi)?,
            Measure::Rp => return_probability(&self.initial, psi)?,
            Measure::Ed if self.sites == 2 => entanglement_dynamics(&self.bell, psi)?,
            Measure::Ed => entanglement_dynamics(&self.outer, psi)?,
            Measure::C12 => self.pair_concurrence(psi, SitePair::S12)?,
            Measure::C23 => self.pair_concurrence(psi, SitePair::S23)?,
            Measure::C13 => self.pair_concurrence(psi, SitePair::S13)?,
            Measure::EG12 => gme_two_qubit(self.pair_concurrence(psi, SitePair::S12)?)?,
            Measure::EdGhz => entanglement_dynamics(&self.ghz, psi)?,
            Measure::EgGhz => self.optimizer.gme(psi, GmeReference::Ghz)?,
            Measure::EgW => self.optimizer.gme(psi, GmeReference::WEven)?,
        };
        let (lo, hi) = measure.range();
        let tol = T::loose_tol();
        if !(value >= T::lit(lo) - tol && value <= T::lit(hi) + tol) {
            return Err(KitaevError::OutOfRange {
                measure: measure.name().into(),
                value: value.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(value.max(T::lit(lo)).min(T::lit(hi)))
    }
}

/// Runs `f` inside a rayon pool of `workers` threads.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        return Err(KitaevError::Workers("worker count must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| KitaevError::Workers(e.to_string()))?;
    Ok(pool.install(f))
}

fn trace_row<T: Real>(
    chain: &Chain<T>,
    spec: &SweepSpec<T>,
    optimizer: &GmeOptimizer<T>,
    times: &[T],
    epsilon: Option<T>,
) -> Result<Vec<MeasureRecord<T>>> {
    let initial = spec.initial.state::<T>();
    let plan = EvolutionPlan::for_chain(chain, &initial)?;
    let ctx = MeasureContext::new(initial, optimizer, spec.strict);
    let mut out = Vec::with_capacity(times.len() * spec.measures.len());
    for &t in times {
        let psi = plan.evolve(t);
        if spec.strict {
            let dev = (psi.norm() - T::one()).abs();
            if dev > T::loose_tol() {
                return Err(KitaevError::NotNormalized {
                    deviation: dev.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        for &m in &spec.measures {
            out.push(MeasureRecord {
                epsilon,
                delta: None,
                t: Some(t),
                measure: m,
                value: ctx.evaluate(m, &psi)?,
            });
        }
    }
    Ok(out)
}

/// Time traces of the requested measures for every ε on the axis.
///
/// Records are ordered by ε, then t, then measure in the order requested.
pub fn sweep_time_epsilon<T: Real>(spec: &SweepSpec<T>, workers: usize) -> Result<Vec<MeasureRecord<T>>> {
    spec.validate()?;
    if workers == 0 {
        return Err(KitaevError::Workers("worker count must be at least 1".into()));
    }
    let times = spec.times.values();
    let optimizer = GmeOptimizer::new();
    let Some((axis, range)) = spec.eps else {
        return trace_row(&spec.chain, spec, &optimizer, &times, None);
    };
    let eps = range.values();
    let rows: Vec<Result<Vec<MeasureRecord<T>>>> = with_workers(workers, || {
        eps.par_iter()
            .map(|&e| {
                let chain = axis.apply(&spec.chain, e)?;
                trace_row(&chain, spec, &optimizer, &times, Some(e))
            })
            .collect()
    })?;
    let mut out = Vec::with_capacity(eps.len() * times.len() * spec.measures.len());
    for row in rows {
        out.extend(row?);
    }
    Ok(out)
}

/// `max_t C₁₃(t)` from `|000⟩` on an `(ε, Δ)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct C13Map<T> {
    pub epsilon: Vec<T>,
    pub delta: Vec<T>,
    /// Row-major: ε outer, Δ inner.
    pub values: Vec<T>,
}

impl<T: Real> C13Map<T> {
    pub fn get(&self, i_eps: usize, i_delta: usize) -> T {
        self.values[i_eps * self.delta.len() + i_delta]
    }

    /// Value at the grid point nearest `(epsilon, delta)`.
    pub fn nearest(&self, epsilon: T, delta: T) -> T {
        let closest = |axis: &[T], x: T| {
            (0..axis.len())
                .min_by(|&a, &b| (axis[a] - x).abs().partial_cmp(&(axis[b] - x).abs()).expect("finite axis"))
                .unwrap_or(0)
        };
        self.get(closest(&self.epsilon, epsilon), closest(&self.delta, delta))
    }

    pub fn records(&self) -> impl Iterator<Item = MeasureRecord<T>> + '_ {
        self.epsilon.iter().enumerate().flat_map(move |(i, &e)| {
            self.delta.iter().enumerate().map(move |(j, &d)| MeasureRecord {
                epsilon: Some(e),
                delta: Some(d),
                t: None,
                measure: Measure::C13,
                value: self.get(i, j),
            })
        })
    }
}

/// Maximum outer-dot concurrence over `t ∈ [0, horizon]` sampled every `dt`,
/// evolving `|000⟩` in the even sector. `template` supplies τ and whatever
/// onsite energies `axis` leaves alone; `Δ₁ = Δ₂` follow the Δ axis.
pub fn max_c13_map<T: Real>(
    template: &ChainSpec3<T>,
    axis: EpsAxis,
    eps: &AxisRange<T>,
    delta: &AxisRange<T>,
    horizon: T,
    dt: T,
    workers: usize,
) -> Result<C13Map<T>> {
    template.validate()?;
    let times = AxisRange::new(T::zero(), horizon, dt)?.values();
    let eps_values = eps.values();
    let delta_values = delta.values();
    let chain = Chain::Three(*template);
    axis.apply(&chain, eps.lo)?;
    let basis = sector_basis(3, ParitySector::Even);
    let mut amps = vec![re(T::zero()); basis.len()];
    amps[0] = re(T::one());
    let initial = PureState::new(amps, basis)?;

    let cells: Vec<(T, T)> = eps_values
        .iter()
        .flat_map(|&e| delta_values.iter().map(move |&d| (e, d)))
        .collect();
    let values: Vec<Result<T>> = with_workers(workers, || {
        cells
            .par_iter()
            .map(|&(e, d)| {
                let cell = with_delta(&axis.apply(&chain, e)?, d);
                let eig = diagonalize(&cell.hamiltonian(ParitySector::Even))?;
                let plan = EvolutionPlan::new(eig, initial.clone())?;
                let mut best = T::zero();
                for &t in &times {
                    let rho = partial_trace(&plan.evolve(t), SitePair::S13)?;
                    best = best.max(concurrence(&rho)?);
                }
                Ok(best)
            })
            .collect()
    })?;
    Ok(C13Map {
        epsilon: eps_values,
        delta: delta_values,
        values: values.into_iter().collect::<Result<_>>()?,
    })
}

/// One eigenvalue of a spectrum sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRecord<T> {
    pub epsilon: T,
    pub sector: ParitySector,
    pub level_index: usize,
    pub energy: T,
}

/// Even and odd spectra along an ε axis, ordered by ε, sector, level.
pub fn spectrum_sweep<T: Real>(chain: &Chain<T>, axis: EpsAxis, eps: &AxisRange<T>) -> Result<Vec<SpectrumRecord<T>>> {
    validate_chain(chain)?;
    let mut out = Vec::new();
    for e in eps.values() {
        let c = axis.apply(chain, e)?;
        for sector in [ParitySector::Even, ParitySector::Odd] {
            let eig = diagonalize(&c.hamiltonian(sector))?;
            out.extend(eig.values.iter().enumerate().map(|(k, &energy)| SpectrumRecord {
                epsilon: e,
                sector,
                level_index: k,
                energy,
            }));
        }
    }
    Ok(out)
}
