//! Reference cell used throughout the numerical study: a 200-turn 20 cm
//! transmitter coil, 10-turn 5 cm receivers, a 5 m cell.
//!
//! The resonant angular frequency is not part of the preset. Callers supply
//! it, usually from [`crate::stochastic::calibrate_omega`] against
//! [`MIN_POWER_ANCHOR_DBW`].

use crate::circuit::{coil_constant, CoilGeometry, LoadBounds, SystemParams, VACUUM_PERMEABILITY};

pub const TX_TURNS: u32 = 200;
pub const TX_RADIUS: f64 = 0.20;
pub const RX_TURNS: u32 = 10;
pub const RX_RADIUS: f64 = 0.05;

pub const TX_RESISTANCE: f64 = 1.3440;
pub const RX_RESISTANCE: f64 = 0.0672;
pub const CELL_RADIUS: f64 = 5.0;
pub const DENSITY: f64 = 0.1;
pub const POWER_THRESHOLD: f64 = 0.1;
pub const LOAD_LOWER: f64 = 0.01;
pub const LOAD_UPPER: f64 = 5.0;

/// Common load used for the outage sweeps, Ω.
pub const OUTAGE_LOAD: f64 = 2.0;

/// Loosely coupled zero-outage power for alignment 0.5 and `x = r`, dBW.
pub const MIN_POWER_ANCHOR_DBW: f64 = 24.5847;
pub const MIN_POWER_ANCHOR_ALIGNMENT: f64 = 0.5;

/// Four-receiver network of the load game, H.
pub const GAME_MUTUAL_INDUCTANCES: [f64; 4] = [-0.0921e-6, 0.0402e-6, 0.0370e-6, 0.0245e-6];
/// Published equilibrium loads of that network, Ω.
pub const GAME_EQUILIBRIUM_LOADS: [f64; 4] = [0.1505, 0.0796, 0.0776, 0.0716];
/// Transmit power of the load game, dBW.
pub const GAME_POWER_DBW: f64 = 10.0;

pub fn reference_coils() -> CoilGeometry {
    CoilGeometry {
        tx_turns: TX_TURNS,
        tx_radius: TX_RADIUS,
        rx_turns: RX_TURNS,
        rx_radius: RX_RADIUS,
        permeability: VACUUM_PERMEABILITY,
    }
}

/// Reference parameters with zero transmit power; set it with
/// [`SystemParams::with_power`].
pub fn reference_params(omega: f64) -> SystemParams {
    SystemParams {
        transmit_power: 0.0,
        omega,
        tx_resistance: TX_RESISTANCE,
        rx_resistance: RX_RESISTANCE,
        coil_constant: coil_constant(&reference_coils()),
        cell_radius: CELL_RADIUS,
        density: DENSITY,
        power_threshold: POWER_THRESHOLD,
        load_bounds: LoadBounds {
            lower: LOAD_LOWER,
            upper: LOAD_UPPER,
        },
    }
}
