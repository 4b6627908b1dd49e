//! Circuit model of a single-transmitter cell at resonance.
//!
//! Every receiver is tuned to the transmitter's resonant frequency, so the
//! reactances cancel and the network reduces to resistances coupled through
//! mutual inductances. The harvested power of receiver `i` is
//!
//! ```text
//!            P ω² M_i² x_i / (r + x_i)²
//! p_i = -----------------------------------
//!        R + ω² Σ_k M_k² / (r + x_k)
//! ```
//!
//! and the mutual inductance follows the dipole approximation `M = e·I/d³`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_non_negative, require_positive, Error, Result};

/// Magnetic permeability of free space, H/m.
pub const VACUUM_PERMEABILITY: f64 = 4.0e-7 * PI;

/// Turns and radii of the transmitter and receiver coils.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoilGeometry {
    pub tx_turns: u32,
    /// Transmitter coil radius, m.
    pub tx_radius: f64,
    pub rx_turns: u32,
    /// Receiver coil radius, m.
    pub rx_radius: f64,
    /// H/m.
    pub permeability: f64,
}

impl CoilGeometry {
    pub fn new(tx_turns: u32, tx_radius: f64, rx_turns: u32, rx_radius: f64) -> Result<Self> {
        let geom = CoilGeometry {
            tx_turns,
            tx_radius,
            rx_turns,
            rx_radius,
            permeability: VACUUM_PERMEABILITY,
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn with_permeability(self, permeability: f64) -> Result<Self> {
        let geom = CoilGeometry {
            permeability,
            ..self
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tx_turns == 0 {
            return Err(invalid("tx_turns", "must be >= 1"));
        }
        if self.rx_turns == 0 {
            return Err(invalid("rx_turns", "must be >= 1"));
        }
        require_positive("tx_radius", self.tx_radius)?;
        require_positive("rx_radius", self.rx_radius)?;
        require_positive("permeability", self.permeability)?;
        Ok(())
    }
}

/// Coupling constant `e = π μ0 N A² n a² / 4`, in H·m³.
pub fn coil_constant(geom: &CoilGeometry) -> f64 {
    PI * geom.permeability
        * f64::from(geom.tx_turns)
        * geom.tx_radius.powi(2)
        * f64::from(geom.rx_turns)
        * geom.rx_radius.powi(2)
        / 4.0
}

/// Orientation factor `2 sin θt sin θi + cos θt cos θi`, always in `[-2, 2]`.
pub fn alignment_factor(theta_t: f64, theta_i: f64) -> f64 {
    2.0 * theta_t.sin() * theta_i.sin() + theta_t.cos() * theta_i.cos()
}

/// Dipole approximation `M = e·I/d³`. The sign follows `alignment`.
pub fn mutual_inductance(coil_constant: f64, alignment: f64, distance: f64) -> Result<f64> {
    require_positive("distance", distance)?;
    Ok(coil_constant * alignment / distance.powi(3))
}

/// Inclusive interval of admissible receiver loads, Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadBounds {
    pub lower: f64,
    pub upper: f64,
}

impl LoadBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        let bounds = LoadBounds { lower, upper };
        bounds.validate()?;
        Ok(bounds)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("load_bounds.lower", self.lower)?;
        require_positive("load_bounds.upper", self.upper)?;
        if self.lower > self.upper {
            return Err(invalid(
                "load_bounds",
                format!("lower {} exceeds upper {}", self.lower, self.upper),
            ));
        }
        Ok(())
    }

    pub fn clamp(&self, load: f64) -> f64 {
        load.clamp(self.lower, self.upper)
    }

    pub fn contains(&self, load: f64) -> bool {
        (self.lower..=self.upper).contains(&load)
    }
}

/// Physical constants of one cell. All quantities are SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Transmitter output power `P`, W.
    pub transmit_power: f64,
    /// Common resonant angular frequency `ω`, rad/s.
    pub omega: f64,
    /// Transmitter coil resistance `R`, Ω.
    pub tx_resistance: f64,
    /// Receiver coil resistance `r`, Ω.
    pub rx_resistance: f64,
    /// Coupling constant `e`, H·m³.
    pub coil_constant: f64,
    /// Cell radius `ρ`, m.
    pub cell_radius: f64,
    /// Receiver density `λ`, receivers/m².
    pub density: f64,
    /// Minimum harvested power `τ`, W.
    pub power_threshold: f64,
    pub load_bounds: LoadBounds,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        require_non_negative("transmit_power", self.transmit_power)?;
        require_positive("omega", self.omega)?;
        require_positive("tx_resistance", self.tx_resistance)?;
        require_positive("rx_resistance", self.rx_resistance)?;
        require_positive("coil_constant", self.coil_constant)?;
        require_positive("cell_radius", self.cell_radius)?;
        require_non_negative("density", self.density)?;
        require_positive("power_threshold", self.power_threshold)?;
        self.load_bounds.validate()
    }

    pub fn with_power(self, transmit_power: f64) -> Self {
        SystemParams {
            transmit_power,
            ..self
        }
    }

    pub fn with_omega(self, omega: f64) -> Self {
        SystemParams { omega, ..self }
    }

    pub fn with_density(self, density: f64) -> Self {
        SystemParams { density, ..self }
    }

    pub fn with_tx_resistance(self, tx_resistance: f64) -> Self {
        SystemParams {
            tx_resistance,
            ..self
        }
    }

    /// `ω² e²`, the factor converting `I²/d⁶` sums into `ω² M²` sums.
    pub(crate) fn coupling_scale(&self) -> f64 {
        (self.omega * self.coil_constant).powi(2)
    }
}

/// A receiver's position relative to the transmitter and the resulting coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReceiverPlacement {
    /// m.
    pub distance: f64,
    /// Receiver coil angle, rad.
    pub rx_angle: f64,
    pub alignment: f64,
    /// H.
    pub mutual_inductance: f64,
}

impl ReceiverPlacement {
    pub fn from_geometry(
        coil_constant: f64,
        theta_t: f64,
        rx_angle: f64,
        distance: f64,
    ) -> Result<Self> {
        let alignment = alignment_factor(theta_t, rx_angle);
        Ok(ReceiverPlacement {
            distance,
            rx_angle,
            alignment,
            mutual_inductance: mutual_inductance(coil_constant, alignment, distance)?,
        })
    }

    /// Placement with the alignment forced to one (both coil angles zero).
    pub fn unit_aligned(coil_constant: f64, distance: f64) -> Result<Self> {
        Self::from_geometry(coil_constant, 0.0, 0.0, distance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Receiver {
    /// Signed mutual inductance with the transmitter, H.
    pub mutual_inductance: f64,
    /// Load resistance, Ω.
    pub load: f64,
}

/// A concrete, non-empty set of receivers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkInstance {
    receivers: Vec<Receiver>,
}

impl NetworkInstance {
    pub fn new(receivers: Vec<Receiver>) -> Result<Self> {
        if receivers.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        for rx in &receivers {
            require_positive("load", rx.load)?;
            if !rx.mutual_inductance.is_finite() {
                return Err(invalid("mutual_inductance", "must be finite"));
            }
        }
        Ok(NetworkInstance { receivers })
    }

    /// Pairs up mutual inductances and loads; the slices must have equal length.
    pub fn from_parts(mutual_inductances: &[f64], loads: &[f64]) -> Result<Self> {
        if mutual_inductances.len() != loads.len() {
            return Err(invalid(
                "loads",
                format!(
                    "{} loads for {} receivers",
                    loads.len(),
                    mutual_inductances.len()
                ),
            ));
        }
        Self::new(
            mutual_inductances
                .iter()
                .zip(loads)
                .map(|(&mutual_inductance, &load)| Receiver {
                    mutual_inductance,
                    load,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.receivers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.receivers.is_empty()
    }

    pub fn receivers(&self) -> &[Receiver] {
        &self.receivers
    }

    pub fn mutual_inductances(&self) -> Vec<f64> {
        self.receivers.iter().map(|r| r.mutual_inductance).collect()
    }

    pub fn loads(&self) -> Vec<f64> {
        self.receivers.iter().map(|r| r.load).collect()
    }
}

/// Harvested power of receiver `index`, W.
pub fn harvested_power(params: &SystemParams, net: &NetworkInstance, index: usize) -> Result<f64> {
    if index >= net.len() {
        return Err(Error::ReceiverIndex {
            index,
            len: net.len(),
        });
    }
    let rx = &net.receivers[index];
    let reflected: f64 = net
        .receivers
        .iter()
        .map(|k| k.mutual_inductance.powi(2) / (params.rx_resistance + k.load))
        .sum();
    Ok(power_from_reflected(
        params,
        rx.mutual_inductance,
        rx.load,
        reflected,
    ))
}

/// Harvested power of every receiver, in network order.
pub fn harvested_powers(params: &SystemParams, net: &NetworkInstance) -> Vec<f64> {
    let reflected: f64 = net
        .receivers
        .iter()
        .map(|k| k.mutual_inductance.powi(2) / (params.rx_resistance + k.load))
        .sum();
    net.receivers
        .iter()
        .map(|rx| power_from_reflected(params, rx.mutual_inductance, rx.load, reflected))
        .collect()
}

/// Shared kernel of every full-coupling power expression. `reflected` is
/// `Σ_k M_k²/(r + x_k)` over the whole network, including receiver `i`.
#[inline]
pub(crate) fn power_from_reflected(
    params: &SystemParams,
    mutual: f64,
    load: f64,
    reflected: f64,
) -> f64 {
    let w2 = params.omega * params.omega;
    let r = params.rx_resistance;
    params.transmit_power * w2 * mutual * mutual * load
        / (r + load).powi(2)
        / (params.tx_resistance + w2 * reflected)
}

/// Harvested power when the coupling fed back to the transmitter is neglected.
pub fn harvested_power_loose(params: &SystemParams, mutual: f64, load: f64) -> Result<f64> {
    require_positive("load", load)?;
    let w2 = params.omega * params.omega;
    Ok(params.transmit_power * w2 * mutual * mutual * load
        / (params.tx_resistance * (params.rx_resistance + load).powi(2)))
}

/// Harvested power of a typical receiver at `(alignment, distance)` whose
/// neighbours contribute the interference sum `s = Σ I_k²/d_k⁶` (m⁻⁶), all
/// loads equal to `load`.
pub fn typical_power(
    params: &SystemParams,
    alignment: f64,
    distance: f64,
    load: f64,
    s: f64,
) -> Result<f64> {
    require_positive("distance", distance)?;
    require_positive("load", load)?;
    if s.is_nan() || s < 0.0 {
        return Err(invalid(
            "interference sum",
            format!("must be >= 0, got {s}"),
        ));
    }
    Ok(typical_power_unchecked(
        params, alignment, distance, load, s,
    ))
}

#[inline]
pub(crate) fn typical_power_unchecked(
    params: &SystemParams,
    alignment: f64,
    distance: f64,
    load: f64,
    s: f64,
) -> f64 {
    let own = alignment * alignment / distance.powi(6);
    let r_x = params.rx_resistance + load;
    let scale = params.coupling_scale();
    params.transmit_power * scale * own * load
        / (r_x * r_x)
        / (params.tx_resistance + scale * (own + s) / r_x)
}
