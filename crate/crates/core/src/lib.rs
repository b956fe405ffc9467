//! Exact diagonalisation and entanglement dynamics of two- and three-site
//! Kitaev chains.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the command-line tool uses.

pub mod checks;
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod spectral;
pub mod sweeps;

pub use checks::{run_invariant_suite, CheckConfig, CheckOutcome};
pub use entanglement::{
    concurrence, concurrence_pure_2q, concurrence_wootters, concurrence_x, entanglement_dynamics, gme_full_product,
    gme_multipartite, gme_pure_2q, gme_two_qubit, partial_trace, return_probability, spin_flip_overlap, GmeOptimizer, GmeReference,
    SitePair, TargetKind, TargetState, TwoQubitDensity,
};
pub use error::{KitaevError, Result};
pub use evolution::{evolve, three_site_sweet_spot_closed_form, two_site_closed_form, EvolutionPlan, InitialState, PureState};
pub use linalg::CMatrix;
pub use model::{
    build_three_site, build_two_site, sector_basis, BasisLabel, Chain, ChainSpec2, ChainSpec3, KitaevChain,
    ParitySector, SectorHamiltonian,
};
pub use scalar::{Cplx, Real};
pub use sweeps::{
    max_c13_map, spectrum_sweep, sweep_time_epsilon, with_delta, AxisRange, C13Map, EpsAxis, Measure, MeasureContext,
    MeasureRecord, SpectrumRecord, SweepSpec,
};
pub use spectral::{
    diagonalize, diagonalize_by_parity, ground_state_splitting, quartic_discrepancies, three_site_quartic_coefficients,
    three_site_quartic_residual, two_site_analytic_spectrum, EigenSystem, QuarticDiscrepancy, TwoSiteSpectrum,
};

pub type C64 = Cplx<f64>;
pub type Chain2 = ChainSpec2<f64>;
pub type Chain3 = ChainSpec3<f64>;
pub type Hamiltonian = SectorHamiltonian<f64>;
pub type Eigen = EigenSystem<f64>;
pub type State = PureState<f64>;
pub type Plan = EvolutionPlan<f64>;
pub type Density = TwoQubitDensity<f64>;
