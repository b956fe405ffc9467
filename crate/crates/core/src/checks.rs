//! Randomised invariant suite behind the `check` command.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entanglement::{
    concurrence, concurrence_pure_2q, concurrence_wootters, concurrence_x, gme_multipartite, partial_trace,
    spin_flip_overlap, GmeOptimizer, GmeReference, SitePair,
};
use crate::error::Result;
use crate::evolution::{three_site_sweet_spot_closed_form, two_site_closed_form, EvolutionPlan, InitialState, PureState};
use crate::model::{Chain, ChainSpec2, ChainSpec3, KitaevChain, ParitySector};
use crate::spectral::{diagonalize, ground_state_splitting, quartic_discrepancies};
use crate::sweeps::{Measure, MeasureContext};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: &'static str, worst: f64, tolerance: f64) -> Self {
        Self {
            name,
            worst,
            tolerance,
            passed: worst.is_finite() && worst <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    /// Random draws per randomised check.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { samples: 1000, seed: 7 }
    }
}

fn random_spec2(rng: &mut ChaCha8Rng) -> ChainSpec2<f64> {
    ChainSpec2 {
        eps1: rng.gen_range(-2.0..2.0),
        eps2: rng.gen_range(-2.0..2.0),
        tau: rng.gen_range(-2.0..2.0),
        delta: rng.gen_range(-2.0..2.0),
    }
}

fn random_spec3(rng: &mut ChaCha8Rng) -> ChainSpec3<f64> {
    ChainSpec3 {
        eps1: rng.gen_range(-2.0..2.0),
        eps2: rng.gen_range(-2.0..2.0),
        eps3: rng.gen_range(-2.0..2.0),
        tau1: rng.gen_range(-2.0..2.0),
        tau2: rng.gen_range(-2.0..2.0),
        delta1: rng.gen_range(-2.0..2.0),
        delta2: rng.gen_range(-2.0..2.0),
    }
}

fn hamiltonian_structure(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples {
        let h = random_spec3(&mut rng).hamiltonian(ParitySector::Full);
        worst = worst.max(h.matrix.hermitian_defect());
        for (i, li) in h.basis.iter().enumerate() {
            for (j, lj) in h.basis.iter().enumerate() {
                if li.parity() != lj.parity() {
                    worst = worst.max(h.matrix[(i, j)].norm());
                }
            }
        }
    }
    Ok(CheckOutcome::new("hamiltonian hermitian and parity-block diagonal", worst, 0.0))
}

fn eigen_residuals(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 1);
    let mut worst = 0.0f64;
    for k in 0..cfg.samples {
        let chain = if k % 2 == 0 {
            Chain::Two(random_spec2(&mut rng))
        } else {
            Chain::Three(random_spec3(&mut rng))
        };
        for sector in [ParitySector::Even, ParitySector::Odd] {
            let h = chain.hamiltonian(sector);
            let eig = diagonalize(&h)?;
            for k in 0..eig.dim() {
                let v = eig.vector(k);
                let hv = h.matrix.apply(&v);
                let r = hv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b * eig.values[k]).norm())
                    .fold(0.0, f64::max);
                worst = worst.max(r);
            }
        }
    }
    Ok(CheckOutcome::new("eigenpair residuals", worst, 1e-10))
}

fn quartic_agreement(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 2);
    let mut failures = 0usize;
    for _ in 0..cfg.samples {
        let spec = ChainSpec3::uniform(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        failures += quartic_discrepancies(&spec)?.len();
    }
    Ok(CheckOutcome::new("three-site quartic roots equal eigenvalues", failures as f64, 0.0))
}

fn closed_form_evolution(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 3);
    let mut worst = 0.0f64;
    for k in 0..cfg.samples {
        let t = rng.gen_range(0.0..10.0);
        let d = rng.gen_range(0.1..2.0);
        let (closed, numeric) = if k % 2 == 0 {
            let spec = ChainSpec2 {
                eps1: rng.gen_range(-2.0..2.0),
                eps2: rng.gen_range(-2.0..2.0),
                tau: d,
                delta: d,
            };
            let init = [InitialState::Empty2, InitialState::Filled2, InitialState::BellPlus][k / 2 % 3];
            let plan = EvolutionPlan::for_chain(&spec, &init.state())?;
            (two_site_closed_form(&spec, init, t)?, plan.evolve(t))
        } else {
            let spec = ChainSpec3::sweet_spot(d);
            let init = [InitialState::Empty3, InitialState::Filled3, InitialState::Ghz][k / 2 % 3];
            let plan = EvolutionPlan::for_chain(&spec, &init.state())?;
            (three_site_sweet_spot_closed_form(&spec, init, t)?, plan.evolve(t))
        };
        worst = worst.max(closed.phase_aligned_distance(&numeric)?);
        worst = worst.max(1.0 - closed.overlap(&numeric)?.norm());
    }
    Ok(CheckOutcome::new("closed-form evolution equals spectral evolution", worst, 1e-10))
}

fn norm_preservation(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 4);
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples {
        let spec = random_spec3(&mut rng);
        let psi0 = PureState::<f64>::random(3, ParitySector::Full, &mut rng);
        let psi = EvolutionPlan::for_chain(&spec, &psi0)?.evolve(rng.gen_range(0.0..50.0));
        worst = worst.max((psi.norm() - 1.0).abs());
    }
    Ok(CheckOutcome::new("unitary evolution preserves the norm", worst, 1e-12))
}

fn pure_concurrence_oracle(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 5);
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples * 10 {
        let psi = PureState::<f64>::random(2, ParitySector::Full, &mut rng);
        worst = worst.max((concurrence_pure_2q(&psi)? - spin_flip_overlap(&psi)?).abs());
    }
    Ok(CheckOutcome::new("pure concurrence equals spin-flip overlap", worst, 1e-12))
}

fn mixed_concurrence_oracle(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 6);
    let mut worst = 0.0f64;
    for k in 0..cfg.samples {
        let sector = if k % 2 == 0 { ParitySector::Even } else { ParitySector::Odd };
        let psi = PureState::<f64>::random(3, sector, &mut rng);
        let rho = partial_trace(&psi, SitePair::ALL[k % 3])?;
        worst = worst.max((concurrence_x(&rho)? - concurrence_wootters(&rho)?).abs());
    }
    Ok(CheckOutcome::new("X-form concurrence equals Wootters", worst, 1e-10))
}

fn reduced_states_valid(cfg: &CheckConfig) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 7);
    let mut failures = 0usize;
    for k in 0..cfg.samples {
        let psi = PureState::<f64>::random(3, ParitySector::Full, &mut rng);
        let rho = partial_trace(&psi, SitePair::ALL[k % 3])?;
        if rho.validate().is_err() || concurrence(&rho).is_err() {
            failures += 1;
        }
    }
    Ok(CheckOutcome::new("reduced states are Hermitian, unit-trace and PSD", failures as f64, 0.0))
}

fn degeneracies() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for (e1, e2, e3) in [(0.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.5, 0.0, 0.5)] {
        let spec = ChainSpec3::new(e1, e2, e3, 1.0, 1.0, 1.0, 1.0)?;
        worst = worst.max(ground_state_splitting(&spec)?);
    }
    let lifted = ground_state_splitting(&ChainSpec2::<f64>::new(0.0, 0.0, 0.5, 1.0)?)?;
    worst = worst.max((lifted - 0.5).abs());
    Ok(CheckOutcome::new("sweet-spot ground-state degeneracies", worst, 1e-12))
}

fn gme_constants() -> Result<CheckOutcome> {
    let a = (gme_multipartite(&PureState::<f64>::ghz(), GmeReference::Ghz)? - 0.5).abs();
    let b = (gme_multipartite(&PureState::<f64>::w_even(), GmeReference::WEven)? - 5.0 / 9.0).abs();
    Ok(CheckOutcome::new("GHZ and W reference GME values", a.max(b), 1e-8))
}

fn sweet_spot_traces() -> Result<CheckOutcome> {
    let optimizer = GmeOptimizer::new();
    let mut worst = 0.0f64;

    let spec2 = ChainSpec2::sweet_spot(1.0);
    let psi0 = InitialState::Empty2.state();
    let plan = EvolutionPlan::for_chain(&spec2, &psi0)?;
    let ctx = MeasureContext::new(psi0, &optimizer, true);
    for k in 0..=1000 {
        let t = k as f64 * 0.01;
        let psi = plan.evolve(t);
        worst = worst.max((ctx.evaluate(Measure::C, &psi)? - (2.0 * t).sin().abs()).abs());
        worst = worst.max((ctx.evaluate(Measure::EG, &psi)? - (1.0 - (2.0 * t).cos().abs()) / 2.0).abs());
        worst = worst.max((ctx.evaluate(Measure::Rp, &psi)? - t.cos().powi(2)).abs());
        worst = worst.max((ctx.evaluate(Measure::Ed, &psi)? - 0.5).abs());
    }

    let spec3 = ChainSpec3::sweet_spot(1.0);
    let psi0 = InitialState::Empty3.state();
    let plan = EvolutionPlan::for_chain(&spec3, &psi0)?;
    let ctx = MeasureContext::new(psi0, &optimizer, true);
    for k in 0..=1000 {
        let t = k as f64 * 0.01;
        let psi = plan.evolve(t);
        let c12 = ctx.evaluate(Measure::C12, &psi)?;
        worst = worst.max((c12 - (4.0 * t).sin().abs() / 2.0).abs());
        worst = worst.max((ctx.evaluate(Measure::C23, &psi)? - c12).abs());
        worst = worst.max(ctx.evaluate(Measure::C13, &psi)?);
        worst = worst.max((ctx.evaluate(Measure::Rp, &psi)? - t.cos().powi(4)).abs());
        worst = worst.max((ctx.evaluate(Measure::Ed, &psi)? - (2.0 * t).cos().powi(2) / 2.0).abs());
    }

    let psi0 = InitialState::Ghz.state();
    let plan = EvolutionPlan::for_chain(&spec3, &psi0)?;
    let ctx = MeasureContext::new(psi0, &optimizer, true);
    for (t, expected) in [(0.0, 0.5), (PI / 2.0, 1.0), (PI, 0.5)] {
        worst = worst.max((ctx.evaluate(Measure::EgGhz, &plan.evolve(t))? - expected).abs());
    }
    Ok(CheckOutcome::new("sweet-spot measure traces", worst, 1e-9))
}

/// Runs every invariant; errors from the library propagate.
pub fn run_invariant_suite(cfg: &CheckConfig) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        hamiltonian_structure(cfg)?,
        eigen_residuals(cfg)?,
        quartic_agreement(cfg)?,
        closed_form_evolution(cfg)?,
        norm_preservation(cfg)?,
        pure_concurrence_oracle(cfg)?,
        mixed_concurrence_oracle(cfg)?,
        reduced_states_valid(cfg)?,
        degeneracies()?,
        gme_constants()?,
        sweet_spot_traces()?,
    ])
}
