//! Shared fixtures for the benchmarks.

use mrcwpt_core::{calibrate_omega, presets, OutageQuery, SystemParams};

/// Reference system with ω calibrated to the published zero-outage anchor.
pub fn calibrated_params() -> SystemParams {
    let base = presets::reference_params(1.0);
    let q = OutageQuery::loose(
        presets::POWER_THRESHOLD,
        presets::MIN_POWER_ANCHOR_ALIGNMENT,
        presets::RX_RESISTANCE,
    )
    .expect("preset query is valid");
    let anchor = 10f64.powf(presets::MIN_POWER_ANCHOR_DBW / 10.0);
    let omega = calibrate_omega(anchor, &base, &q).expect("anchor is reachable");
    presets::reference_params(omega)
}
