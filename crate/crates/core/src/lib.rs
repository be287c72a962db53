//! Schrödinger dynamics on the half-line with a first-order drift,
//! `H_eps = -eps d^2/dx^2 + i b d/dx` with a Dirichlet wall at the origin, and
//! the `eps -> 0` limit dynamics it converges to in the weak sense.
//!
//! The math modules are generic over [`Real`] (`f32` or `f64`); the harness is
//! `f64` only.
//!
//! ```
//! use halfline::{spectral_evolve, EvolutionParams, GridF64, Preset};
//!
//! let grid = GridF64::new(40.0, 1 << 12).unwrap();
//! let phi = Preset::Xexp.sample(grid);
//! let u = spectral_evolve(&phi, &EvolutionParams::new(0.1, 1.0, 1.0).unwrap()).unwrap();
//! assert!((u.norm() - 1.0).abs() < 1e-9);
//! ```

pub mod error;
pub mod evolve;
pub mod grid;
pub mod harness;
pub mod limit;
pub mod observables;
pub mod presets;
pub mod scalar;

pub use error::{Error, Result};
pub use evolve::{
    asymptotic_branches, asymptotic_evolve, free_dirichlet_propagate, kernel_evolve, limit_group_v,
    min_admissible_epsilon, reflected_wave, remainder_norm, spectral_evolve, AsymptoticBranches,
    EvolutionParams, ResolutionReport, PPW_MIN,
};
pub use grid::{
    distance, indicator_project, inner, reflect_sample, shift_sample, BoundedFunction, Grid,
    WaveFunction, BOUNDARY_TOL,
};
pub use limit::{
    comp_semigroup_check, comp_state_evolve, destruction_time, kraus_apply, mult_expectation_limit,
    reflect_w, shift_v, wold_projectors, CompAlgebraState, KrausBranchState, WoldProjectors,
};
pub use observables::{
    comp_expectation_limit, comp_state_expectation, expectation, regularized_expectation,
    FiniteRankObservable, MultiplicationObservable, Observable,
};
pub use presets::Preset;
pub use scalar::Real;

pub type GridF64 = Grid<f64>;
pub type GridF32 = Grid<f32>;
pub type WaveFunctionF64 = WaveFunction<f64>;
pub type WaveFunctionF32 = WaveFunction<f32>;
pub type BoundedFunctionF64 = BoundedFunction<f64>;
pub type BoundedFunctionF32 = BoundedFunction<f32>;
pub type EvolutionParamsF64 = EvolutionParams<f64>;
pub type EvolutionParamsF32 = EvolutionParams<f32>;
