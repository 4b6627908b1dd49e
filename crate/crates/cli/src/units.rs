//! Decibel conversions. Transmit power in dB means dBW throughout.

use anyhow::{bail, Result};
use mrcwpt_core::{calibrate_omega, OutageQuery, SystemParams};

pub fn db_to_watts(dbw: f64) -> f64 {
    10f64.powf(dbw / 10.0)
}

pub fn watts_to_db(watts: f64) -> f64 {
    10.0 * watts.log10()
}

/// `ω` for which the loosely coupled zero-outage power equals `anchor_dbw`.
pub fn calibrate_omega_db(anchor_dbw: f64, params: &SystemParams, q: &OutageQuery) -> Result<f64> {
    let anchor = db_to_watts(anchor_dbw);
    if !(anchor > 0.0 && anchor.is_finite()) {
        bail!("calibration anchor {anchor_dbw} dBW is not a finite positive power");
    }
    Ok(calibrate_omega(anchor, params, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for db in [-30.0, -3.0, 0.0, 10.0, 24.5847, 60.0] {
            assert!((watts_to_db(db_to_watts(db)) - db).abs() < 1e-12);
        }
        assert_eq!(db_to_watts(10.0), 10.0);
        assert_eq!(db_to_watts(0.0), 1.0);
    }
}
