//! Load selection as a non-cooperative game among the receivers of one
//! transmitter. Each receiver picks its load in `[x_l, x_u]` to maximise its
//! own harvested power; the others only enter through
//!
//! ```text
//! β = ω² M_i²,   γ = R + ω² Σ_{k≠i} M_k² / (r + x_k)
//! ```
//!
//! and the best response is `√(r (r + β/γ))` clamped to the bounds. It does
//! not involve the transmit power, so neither does the equilibrium.

use serde::{Deserialize, Serialize};

use crate::circuit::{harvested_power_loose, power_from_reflected, SystemParams};
use crate::error::{invalid, require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateOrder {
    /// Players update in index order, each seeing the loads already updated
    /// in the same sweep.
    #[default]
    GaussSeidel,
    /// All players respond to the previous sweep.
    Jacobi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    /// Signed, H.
    pub mutual_inductances: Vec<f64>,
    /// Supplies `ω`, `R`, `r` and the load bounds; `P` only scales utilities.
    pub params: SystemParams,
    /// Stop once no load moves by more than this in a sweep, Ω.
    pub tolerance: f64,
    pub max_sweeps: usize,
    pub order: UpdateOrder,
}

impl GameSpec {
    pub const DEFAULT_TOLERANCE: f64 = 1e-8;
    pub const DEFAULT_MAX_SWEEPS: usize = 1000;

    pub fn new(mutual_inductances: Vec<f64>, params: SystemParams) -> Result<Self> {
        let spec = GameSpec {
            mutual_inductances,
            params,
            tolerance: Self::DEFAULT_TOLERANCE,
            max_sweeps: Self::DEFAULT_MAX_SWEEPS,
            order: UpdateOrder::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_order(self, order: UpdateOrder) -> Self {
        GameSpec { order, ..self }
    }

    pub fn with_tolerance(self, tolerance: f64) -> Self {
        GameSpec { tolerance, ..self }
    }

    pub fn with_max_sweeps(self, max_sweeps: usize) -> Self {
        GameSpec { max_sweeps, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mutual_inductances.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        for &m in &self.mutual_inductances {
            if !m.is_finite() {
                return Err(invalid("mutual_inductances", "must be finite"));
            }
        }
        self.params.validate()?;
        require_positive("tolerance", self.tolerance)?;
        if self.max_sweeps == 0 {
            return Err(invalid("max_sweeps", "must be >= 1"));
        }
        Ok(())
    }

    pub fn players(&self) -> usize {
        self.mutual_inductances.len()
    }

    fn check_profile(&self, loads: &[f64]) -> Result<()> {
        if loads.len() != self.players() {
            return Err(invalid(
                "loads",
                format!("expected {} loads, got {}", self.players(), loads.len()),
            ));
        }
        let bounds = self.params.load_bounds;
        if let Some(&x) = loads.iter().find(|&&x| !bounds.contains(x)) {
            return Err(invalid(
                "loads",
                format!("{x} outside [{}, {}]", bounds.lower, bounds.upper),
            ));
        }
        Ok(())
    }

    fn check_player(&self, i: usize) -> Result<()> {
        if i >= self.players() {
            return Err(Error::ReceiverIndex {
                index: i,
                len: self.players(),
            });
        }
        Ok(())
    }

    fn reflected_excluding(&self, i: usize, loads: &[f64]) -> f64 {
        let r = self.params.rx_resistance;
        self.mutual_inductances
            .iter()
            .zip(loads)
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, (m, x))| m * m / (r + x))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionTerms {
    /// `ω² M_i²`, Ω².
    pub beta: f64,
    /// `R` plus the resistance reflected by the other receivers, Ω.
    pub gamma: f64,
}

/// `(β, γ)` of player `i`. `loads` is a full profile; `loads[i]` is ignored.
pub fn interaction_terms(spec: &GameSpec, i: usize, loads: &[f64]) -> Result<InteractionTerms> {
    spec.check_player(i)?;
    spec.check_profile(loads)?;
    Ok(terms_unchecked(spec, i, loads))
}

fn terms_unchecked(spec: &GameSpec, i: usize, loads: &[f64]) -> InteractionTerms {
    let w2 = spec.params.omega * spec.params.omega;
    let m = spec.mutual_inductances[i];
    InteractionTerms {
        beta: w2 * m * m,
        gamma: spec.params.tx_resistance + w2 * spec.reflected_excluding(i, loads),
    }
}

/// Maximiser of the utility over `x > 0`: `√(r (r + β/γ))`.
pub fn unconstrained_best_load(rx_resistance: f64, terms: InteractionTerms) -> f64 {
    (rx_resistance * (rx_resistance + terms.beta / terms.gamma)).sqrt()
}

pub fn best_response(spec: &GameSpec, i: usize, loads: &[f64]) -> Result<f64> {
    let terms = interaction_terms(spec, i, loads)?;
    Ok(spec
        .params
        .load_bounds
        .clamp(unconstrained_best_load(spec.params.rx_resistance, terms)))
}

fn best_response_unchecked(spec: &GameSpec, i: usize, loads: &[f64]) -> f64 {
    let terms = terms_unchecked(spec, i, loads);
    spec.params
        .load_bounds
        .clamp(unconstrained_best_load(spec.params.rx_resistance, terms))
}

/// Harvested power of player `i` if it switches to `load` while the others
/// keep `loads`. Goes through the single circuit power kernel.
pub fn utility(spec: &GameSpec, i: usize, load: f64, loads: &[f64]) -> Result<f64> {
    spec.check_player(i)?;
    if loads.len() != spec.players() {
        return Err(invalid(
            "loads",
            "profile length must equal the player count",
        ));
    }
    require_positive("load", load)?;
    Ok(utility_unchecked(spec, i, load, loads))
}

fn utility_unchecked(spec: &GameSpec, i: usize, load: f64, loads: &[f64]) -> f64 {
    let m = spec.mutual_inductances[i];
    let own = m * m / (spec.params.rx_resistance + load);
    let reflected = spec.reflected_excluding(i, loads) + own;
    power_from_reflected(&spec.params, m, load, reflected)
}

/// Utility under the loosely coupled power law, with `γ` standing in for
/// `R`: the player's own reflected resistance is neglected.
pub fn loose_utility(spec: &GameSpec, i: usize, load: f64, loads: &[f64]) -> Result<f64> {
    let terms = interaction_terms(spec, i, loads)?;
    let params = spec.params.with_tx_resistance(terms.gamma);
    harvested_power_loose(&params, spec.mutual_inductances[i], load)
}

/// `d utility / d load` in closed form,
/// `α (β r + γ r² − γ x²) / ((r + x)² (β + γ r + γ x)²)` with `α = P β`.
pub fn utility_derivative(spec: &GameSpec, i: usize, load: f64, loads: &[f64]) -> Result<f64> {
    let terms = interaction_terms(spec, i, loads)?;
    require_positive("load", load)?;
    let r = spec.params.rx_resistance;
    let InteractionTerms { beta, gamma } = terms;
    let alpha = spec.params.transmit_power * beta;
    let tail = beta + gamma * r + gamma * load;
    Ok(alpha * (beta * r + gamma * r * r - gamma * load * load)
        / ((r + load).powi(2) * tail * tail))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub loads: Vec<f64>,
    /// Harvested power at the equilibrium, W.
    pub utilities: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
    /// `|x_i − BR_i(x_{−i})|` at the returned profile.
    pub residuals: Vec<f64>,
}

/// Best-response dynamics from `initial` (all `x_l` when `None`).
pub fn solve_equilibrium(spec: &GameSpec, initial: Option<&[f64]>) -> Result<EquilibriumResult> {
    spec.validate()?;
    let k = spec.players();
    let mut loads = match initial {
        Some(x) => {
            spec.check_profile(x)?;
            x.to_vec()
        }
        None => vec![spec.params.load_bounds.lower; k],
    };
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < spec.max_sweeps {
        sweeps += 1;
        let mut change: f64 = 0.0;
        match spec.order {
            UpdateOrder::GaussSeidel => {
                for i in 0..k {
                    let next = best_response_unchecked(spec, i, &loads);
                    change = change.max((next - loads[i]).abs());
                    loads[i] = next;
                }
            }
            UpdateOrder::Jacobi => {
                let next: Vec<f64> = (0..k)
                    .map(|i| best_response_unchecked(spec, i, &loads))
                    .collect();
                for (x, n) in loads.iter_mut().zip(next) {
                    change = change.max((n - *x).abs());
                    *x = n;
                }
            }
        }
        if change < spec.tolerance {
            converged = true;
            break;
        }
    }
    let residuals: Vec<f64> = (0..k)
        .map(|i| (loads[i] - best_response_unchecked(spec, i, &loads)).abs())
        .collect();
    if !converged {
        return Err(Error::NotConverged {
            sweeps,
            max_residual: residuals.iter().copied().fold(0.0, f64::max),
            loads,
            residuals,
        });
    }
    let utilities = (0..k)
        .map(|i| utility_unchecked(spec, i, loads[i], &loads))
        .collect();
    Ok(EquilibriumResult {
        loads,
        utilities,
        sweeps,
        converged,
        residuals,
    })
}

/// Largest gain any player can get by a unilateral move to one of `points`
/// evenly spaced loads in the bounds. Non-positive at a Nash equilibrium.
pub fn max_deviation_gain(spec: &GameSpec, loads: &[f64], points: usize) -> Result<f64> {
    spec.validate()?;
    spec.check_profile(loads)?;
    let b = spec.params.load_bounds;
    let step = (b.upper - b.lower) / (points.max(2) - 1) as f64;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..spec.players() {
        let current = utility_unchecked(spec, i, loads[i], loads);
        for j in 0..points.max(2) {
            let x = b.lower + j as f64 * step;
            worst = worst.max(utility_unchecked(spec, i, x, loads) - current);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StandardProperty {
    Positivity,
    Unimodality,
    Scalability,
    DerivativeSignChange,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertyViolation {
    pub property: StandardProperty,
    /// Load at which the property fails, Ω.
    pub witness: f64,
    /// Scale factor for scalability failures, else 1.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardFunctionReport {
    /// Unclamped maximiser.
    pub peak: f64,
    pub points_checked: usize,
    pub violations: Vec<PropertyViolation>,
}

impl StandardFunctionReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn holds_for(&self, property: StandardProperty) -> bool {
        self.violations.iter().all(|v| v.property != property)
    }
}

/// Probes player `i`'s utility `f(x)` (others fixed at `loads`) on an
/// ascending positive `grid`: `f > 0`; `f` rising before its peak and falling
/// after; `c f(x) > f(c x)` for each `c > 1` in `scales`; `f'` changing sign
/// between the two grid points around the peak.
pub fn verify_standard_function(
    spec: &GameSpec,
    i: usize,
    loads: &[f64],
    grid: &[f64],
    scales: &[f64],
) -> Result<StandardFunctionReport> {
    spec.validate()?;
    spec.check_player(i)?;
    if loads.len() != spec.players() {
        return Err(invalid(
            "loads",
            "profile length must equal the player count",
        ));
    }
    if grid.is_empty() || grid.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(invalid("grid", "must be nonempty, finite and positive"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("grid", "must be strictly ascending"));
    }
    if scales.iter().any(|&c| !(c > 1.0 && c.is_finite())) {
        return Err(invalid("scales", "every scale must exceed 1"));
    }
    let r = spec.params.rx_resistance;
    let peak = unconstrained_best_load(r, terms_unchecked(spec, i, loads));
    let f = |x: f64| utility_unchecked(spec, i, x, loads);
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut violations = Vec::new();
    let mut flag = |property, witness, scale| {
        violations.push(PropertyViolation {
            property,
            witness,
            scale,
        })
    };

    for (&x, &v) in grid.iter().zip(&values) {
        if !(v > 0.0) {
            flag(StandardProperty::Positivity, x, 1.0);
        }
    }
    for (xs, vs) in grid.windows(2).zip(values.windows(2)) {
        // rounding can tie values that straddle the peak closely
        let slack = 1e-13 * vs[0].abs().max(vs[1].abs());
        if xs[1] <= peak && vs[1] < vs[0] - slack {
            flag(StandardProperty::Unimodality, xs[1], 1.0);
        }
        if xs[0] >= peak && vs[1] > vs[0] + slack {
            flag(StandardProperty::Unimodality, xs[1], 1.0);
        }
    }
    for &c in scales {
        for (&x, &v) in grid.iter().zip(&values) {
            if !(c * v - f(c * x) > 0.0) {
                flag(StandardProperty::Scalability, x, c);
            }
        }
    }
    let slopes: Vec<f64> = grid
        .iter()
        .map(|&x| utility_derivative(spec, i, x, loads))
        .collect::<Result<_>>()?;
    match slopes.iter().position(|&d| d <= 0.0) {
        Some(0) if grid[0] < peak => flag(StandardProperty::DerivativeSignChange, grid[0], 1.0),
        Some(k) if k > 0 && !(grid[k - 1] <= peak && peak <= grid[k]) => {
            flag(StandardProperty::DerivativeSignChange, grid[k], 1.0)
        }
        None if peak < grid[grid.len() - 1] => flag(
            StandardProperty::DerivativeSignChange,
            grid[grid.len() - 1],
            1.0,
        ),
        _ => {}
    }
    if let Some(k) = slopes.iter().position(|&d| d <= 0.0) {
        if let Some(j) = slopes[k..].iter().position(|&d| d > 0.0) {
            flag(StandardProperty::DerivativeSignChange, grid[k + j], 1.0);
        }
    }
    Ok(StandardFunctionReport {
        peak,
        points_checked: grid.len(),
        violations,
    })
}

/// Per-receiver power of `receivers` identical receivers (common inductance
/// `mutual`, common load `load`) when both coil resistances equal `epsilon`.
/// Tends to `power / receivers` as `epsilon → 0`.
pub fn symmetric_limit_power(
    receivers: usize,
    power: f64,
    epsilon: f64,
    omega: f64,
    mutual: f64,
    load: f64,
) -> Result<f64> {
    if receivers == 0 {
        return Err(Error::EmptyNetwork);
    }
    require_positive("epsilon", epsilon)?;
    require_positive("omega", omega)?;
    require_positive("load", load)?;
    if mutual == 0.0 || !mutual.is_finite() {
        return Err(invalid("mutual", "must be finite and nonzero"));
    }
    let params = SystemParams {
        transmit_power: power,
        omega,
        tx_resistance: epsilon,
        rx_resistance: epsilon,
        ..crate::presets::reference_params(omega)
    };
    params.validate()?;
    let reflected = receivers as f64 * mutual * mutual / (epsilon + load);
    Ok(power_from_reflected(&params, mutual, load, reflected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn spec(omega: f64) -> GameSpec {
        GameSpec::new(
            presets::GAME_MUTUAL_INDUCTANCES.to_vec(),
            presets::reference_params(omega).with_power(10.0),
        )
        .unwrap()
    }

    #[test]
    fn single_player_sees_only_tx_resistance() {
        let s = GameSpec::new(
            vec![5e-8],
            presets::reference_params(1.42e7).with_power(1.0),
        )
        .unwrap();
        let t = interaction_terms(&s, 0, &[1.0]).unwrap();
        assert_eq!(t.gamma, presets::TX_RESISTANCE);
        let eq = solve_equilibrium(&s, None).unwrap();
        let r = presets::RX_RESISTANCE;
        let expected = (r * (r + (1.42e7f64 * 5e-8).powi(2) / presets::TX_RESISTANCE)).sqrt();
        assert!((eq.loads[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn silent_neighbours_leave_gamma_at_tx_resistance() {
        let s = GameSpec::new(
            vec![5e-8, 0.0, 0.0],
            presets::reference_params(1.42e7).with_power(1.0),
        )
        .unwrap();
        let t = interaction_terms(&s, 0, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(t.gamma, presets::TX_RESISTANCE);
    }

    #[test]
    fn weak_coupling_best_response_is_rx_resistance() {
        let s = GameSpec::new(
            vec![1e-15],
            presets::reference_params(1.42e7).with_power(1.0),
        )
        .unwrap();
        let x = best_response(&s, 0, &[1.0]).unwrap();
        assert!((x - presets::RX_RESISTANCE).abs() < 1e-12);
    }

    #[test]
    fn best_response_clamps() {
        let mut s = spec(1.42e7);
        s.params.load_bounds.lower = 1.0;
        assert_eq!(best_response(&s, 0, &[1.0; 4]).unwrap(), 1.0);
        let mut s = spec(1.42e7);
        s.params.load_bounds.upper = 0.02;
        assert_eq!(best_response(&s, 0, &[0.01; 4]).unwrap(), 0.02);
    }

    #[test]
    fn rejects_bad_profiles() {
        let s = spec(1.42e7);
        assert!(interaction_terms(&s, 4, &[0.1; 4]).is_err());
        assert!(interaction_terms(&s, 0, &[0.1; 3]).is_err());
        assert!(interaction_terms(&s, 0, &[0.1, 0.1, 0.1, 9.0]).is_err());
        assert!(GameSpec::new(vec![], s.params).is_err());
        assert!(solve_equilibrium(&s.clone().with_tolerance(0.0), None).is_err());
    }

    #[test]
    fn orders_reach_the_same_equilibrium() {
        let gs = solve_equilibrium(&spec(1.42e7), None).unwrap();
        let jac = solve_equilibrium(&spec(1.42e7).with_order(UpdateOrder::Jacobi), None).unwrap();
        for (a, b) in gs.loads.iter().zip(&jac.loads) {
            assert!((a - b).abs() < 1e-7);
        }
        assert!(gs.residuals.iter().all(|&r| r <= 1e-8));
    }

    #[test]
    fn non_convergence_reports_last_iterate() {
        let s = spec(1.42e7).with_max_sweeps(1).with_tolerance(1e-300);
        match solve_equilibrium(&s, None) {
            Err(Error::NotConverged {
                sweeps,
                loads,
                residuals,
                ..
            }) => {
                assert_eq!(sweeps, 1);
                assert_eq!(loads.len(), 4);
                assert_eq!(residuals.len(), 4);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let s = spec(1.42e7);
        let loads = [0.15, 0.08, 0.07, 0.07];
        for i in 0..4 {
            for &x in &[0.02, 0.05, 0.1, 0.3, 1.0, 3.0] {
                let h = 1e-6 * x;
                let fd = (utility(&s, i, x + h, &loads).unwrap()
                    - utility(&s, i, x - h, &loads).unwrap())
                    / (2.0 * h);
                let d = utility_derivative(&s, i, x, &loads).unwrap();
                assert!(
                    (fd - d).abs() <= 1e-6 * d.abs().max(1e-12),
                    "i={i} x={x}: {fd} vs {d}"
                );
            }
        }
    }

    #[test]
    fn loose_utility_at_rx_resistance() {
        let s = GameSpec::new(
            vec![1e-10, 5e-8],
            presets::reference_params(1.42e7).with_power(3.0),
        )
        .unwrap();
        let loads = [presets::RX_RESISTANCE, 0.5];
        let t = interaction_terms(&s, 0, &loads).unwrap();
        let r = presets::RX_RESISTANCE;
        let closed = 3.0 * t.beta / (4.0 * t.gamma * r);
        let loose = loose_utility(&s, 0, r, &loads).unwrap();
        assert!((loose - closed).abs() <= 1e-15 * closed);
        // the full utility differs only through the own reflected term
        let full = utility(&s, 0, r, &loads).unwrap();
        let own = 2.0 * t.beta / (4.0 * t.gamma * r);
        assert!(full < closed && (closed - full) <= 1.01 * own * closed);
    }

    #[test]
    fn standard_function_report_flags_wrong_grid_claims() {
        let s = spec(1.42e7);
        let grid: Vec<f64> = (1..=500).map(|k| 0.01 * k as f64).collect();
        let rep = verify_standard_function(&s, 0, &[0.1; 4], &grid, &[1.5, 2.0, 10.0]).unwrap();
        assert!(rep.holds(), "{:?}", rep.violations);
        let zero_power = GameSpec {
            params: s.params.with_power(0.0),
            ..s.clone()
        };
        let rep = verify_standard_function(&zero_power, 0, &[0.1; 4], &grid, &[2.0]).unwrap();
        assert!(!rep.holds_for(StandardProperty::Positivity));
        assert!(verify_standard_function(&s, 0, &[0.1; 4], &[0.2, 0.1], &[2.0]).is_err());
        assert!(verify_standard_function(&s, 0, &[0.1; 4], &grid, &[0.5]).is_err());
    }

    #[test]
    fn symmetric_limit() {
        let p = symmetric_limit_power(4, 10.0, 1e-9, 1.42e7, 1e-7, 1.0).unwrap();
        assert!((p - 2.5).abs() < 2.5e-3);
        let one = symmetric_limit_power(1, 10.0, 1e-9, 1.42e7, 1e-7, 1.0).unwrap();
        assert!((one - 10.0).abs() < 1e-6);
        let many = symmetric_limit_power(1_000_000, 10.0, 1e-9, 1.42e7, 1e-7, 1.0).unwrap();
        assert!(many <= 1e-5 * 10.0);
        assert!(symmetric_limit_power(0, 10.0, 1e-9, 1.42e7, 1e-7, 1.0).is_err());
        assert!(symmetric_limit_power(4, 10.0, 0.0, 1.42e7, 1e-7, 1.0).is_err());
    }
}
