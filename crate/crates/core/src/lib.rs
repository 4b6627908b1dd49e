//! Coupled-coil wireless power transfer to many receivers: the circuit model,
//! outage analysis of a typical receiver in a Poisson field, Monte Carlo
//! validation, and the non-cooperative load-selection game.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod error;
pub mod game;
pub mod montecarlo;
pub mod presets;
pub mod quadrature;
pub mod stochastic;

pub use circuit::{
    alignment_factor, coil_constant, harvested_power, harvested_power_loose, harvested_powers,
    mutual_inductance, typical_power, CoilGeometry, LoadBounds, NetworkInstance, Receiver,
    ReceiverPlacement, SystemParams, VACUUM_PERMEABILITY,
};
pub use error::{Error, Result};
pub use game::{
    best_response, interaction_terms, solve_equilibrium, symmetric_limit_power,
    verify_standard_function, EquilibriumResult, GameSpec, InteractionTerms,
    StandardFunctionReport, StandardProperty, UpdateOrder,
};
pub use montecarlo::{
    sample_ppp, sample_s, simulate_outage_loose, simulate_outage_strong, AngleMode, SimConfig,
    SimEstimate, TypicalMode,
};
pub use stochastic::{
    calibrate_omega, characteristic_fn_s, distance_cdf, expected_abs_alignment,
    interference_exceedance, lambda_threshold, min_power_zero_outage, outage_loose, outage_strong,
    InnerMethod, OutageDiagnostics, OutageQuery, OutageResult, QuadratureConfig,
};
