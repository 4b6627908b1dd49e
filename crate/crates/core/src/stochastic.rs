//! Outage probability of a typical receiver in a Poisson field of receivers.
//!
//! The other receivers form a homogeneous PPP of density `λ` in a disk of
//! radius `ρ`, all with unit alignment. They load the transmitter through the
//! interference sum `S = Σ d_k⁻⁶`. The typical receiver is in outage exactly
//! when `S` exceeds a threshold `Λ(τ)`, so the outage probability is the tail
//! of `S`, recovered from its characteristic function
//!
//! ```text
//! φ_S(jt) = exp(2πλ ∫₀^ρ (e^{jt v⁻⁶} − 1) v dv)
//! ```
//!
//! by Gil-Pelaez inversion. Only the characteristic function is ever
//! evaluated: the real-argument moment generating function diverges for every
//! `t > 0` because `e^{t v⁻⁶}` is not integrable at `v = 0`.
//!
//! # Inner integral
//!
//! With `u = v⁻⁶` the exponent becomes
//! `(1/6) ∫_{ρ⁻⁶}^∞ (e^{jtu} − 1) u^{-4/3} du`, and with `w = t·u` it is
//! `(t^{1/3}/6)·K(t ρ⁻⁶)` where `K(b) = ∫_b^∞ (e^{jw} − 1) w^{-4/3} dw`.
//! `K` is evaluated either through the upper incomplete gamma function
//! `Γ(−1/3, −jb)` or by oscillatory quadrature; both are shipped and must
//! agree.
//!
//! # Outer integral
//!
//! `S` has an atom of mass `p₀ = e^{−πλρ²}` at zero (empty cell). The atom is
//! removed analytically, which leaves an integrand decaying like `t⁻²`. Near
//! `t = 0` the integrand behaves like `t^{-2/3}` (the tail of `S` is heavy,
//! `P[S > s] ~ πλ s^{-1/3}`), so the first half-period is integrated in
//! `s = t^{1/3}`, where it is smooth. The remainder is split into half-periods
//! of `e^{−jtΛ}` and the alternating partial sums are extrapolated with the
//! epsilon algorithm.

use std::cell::RefCell;
use std::f64::consts::{E, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::SystemParams;
use crate::error::{invalid, require_non_negative, require_positive, Error, Result};
use crate::quadrature::{integrate, AcceleratedSum};

/// How the inner integral `∫₀^ρ (e^{jtv⁻⁶} − 1) v dv` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InnerMethod {
    /// Series / continued fraction for `Γ(−1/3, −jb)`.
    #[default]
    IncompleteGamma,
    /// Zero-partitioned quadrature with epsilon acceleration.
    OscillatoryQuadrature,
}

/// Numerical controls of the outage inversion. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    /// Target absolute error on the probability.
    pub abs_tol: f64,
    /// Relative tolerance of the inner integral (oscillatory route only; the
    /// incomplete-gamma route runs to machine precision).
    pub inner_rel_tol: f64,
    /// Cap on the number of half-period intervals of the outer integral.
    pub max_intervals: usize,
    pub inner_method: InnerMethod,
    /// Epsilon-accelerate the outer alternating series. Without it the series
    /// is summed out to the rigorous truncation point, which can exceed
    /// `max_intervals` for large thresholds.
    pub acceleration: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-4,
            inner_rel_tol: 1e-8,
            max_intervals: 20_000,
            inner_method: InnerMethod::IncompleteGamma,
            acceleration: true,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        require_positive("abs_tol", self.abs_tol)?;
        require_positive("inner_rel_tol", self.inner_rel_tol)?;
        if self.max_intervals == 0 {
            return Err(invalid("max_intervals", "must be >= 1"));
        }
        Ok(())
    }
}

/// Threshold, typical-receiver geometry and common load of an outage query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageQuery {
    /// `τ`, W.
    pub threshold: f64,
    /// `I₀`.
    pub alignment: f64,
    /// `d₀`, m. Only the strongly coupled analysis uses it; in the loosely
    /// coupled analysis the distance is uniform over the cell.
    pub distance: Option<f64>,
    /// Common load `x`, Ω.
    pub load: f64,
}

impl OutageQuery {
    pub fn strong(threshold: f64, alignment: f64, distance: f64, load: f64) -> Result<Self> {
        let q = OutageQuery {
            threshold,
            alignment,
            distance: Some(distance),
            load,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn loose(threshold: f64, alignment: f64, load: f64) -> Result<Self> {
        let q = OutageQuery {
            threshold,
            alignment,
            distance: None,
            load,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        require_non_negative("threshold", self.threshold)?;
        require_positive("load", self.load)?;
        if !(self.alignment.abs() <= 2.0) {
            return Err(invalid(
                "alignment",
                format!("must lie in [-2, 2], got {}", self.alignment),
            ));
        }
        if let Some(d) = self.distance {
            require_positive("distance", d)?;
        }
        Ok(())
    }

    pub(crate) fn require_distance(&self) -> Result<f64> {
        self.distance
            .ok_or_else(|| invalid("distance", "the strongly coupled analysis needs d0"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct OutageDiagnostics {
    /// `Λ(τ)`, m⁻⁶. Zero for tail queries made directly on `S`.
    pub threshold_lambda: f64,
    /// Half-period intervals summed after the first one.
    pub intervals: usize,
    /// Adaptive panels spent on the first half-period.
    pub head_panels: usize,
    /// Bound (or extrapolation change) attributed to the truncated tail.
    pub tail_estimate: f64,
    /// Probability before clamping to `[0, 1]`.
    pub raw_probability: f64,
    /// Clamping moved the value by more than the error estimate.
    pub clamped_beyond_error: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageResult {
    pub probability: f64,
    pub error: f64,
    /// `Λ(τ) >= 0`: the threshold is reachable at all.
    pub feasible: bool,
    pub diagnostics: OutageDiagnostics,
}

fn gamma_minus_third() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    // Γ(−1/3) = Γ(2/3) / (−1/3)
    *VALUE.get_or_init(|| -3.0 * statrs::function::gamma::gamma(2.0 / 3.0))
}

/// Below this `b` the power series is used for `K(b)`, above it the continued fraction.
const SERIES_LIMIT: f64 = 6.0;

/// `K(b) = ∫_b^∞ (e^{jw} − 1) w^{-4/3} dw` through `Γ(−1/3, −jb)`.
pub fn oscillatory_tail_gamma(b: f64) -> Complex64 {
    debug_assert!(b > 0.0);
    let rotation = Complex64::from_polar(1.0, -PI / 6.0);
    if b <= SERIES_LIMIT {
        // K(b) = e^{−jπ/6} Γ(−1/3) − b^{−1/3} Σ_{n≥1} (jb)ⁿ / (n! (n − 1/3));
        // the n = 0 term of the lower gamma cancels the −3 b^{−1/3} exactly.
        let jb = Complex64::new(0.0, b);
        let mut power = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 1..200 {
            let nf = n as f64;
            power = power * jb / nf;
            let term = power / (nf - 1.0 / 3.0);
            sum += term;
            if nf > b && term.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        rotation * gamma_minus_third() - sum * b.powf(-1.0 / 3.0)
    } else {
        let z = Complex64::new(0.0, -b);
        rotation * upper_gamma_continued_fraction(-1.0 / 3.0, z) - 3.0 * b.powf(-1.0 / 3.0)
    }
}

/// `Γ(s, z)` by the Legendre continued fraction (modified Lentz), valid for
/// `|z|` not small and `z` off the negative real axis.
fn upper_gamma_continued_fraction(s: f64, z: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let tiny = Complex64::new(TINY, 0.0);
    let mut b = z + 1.0 - s;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let fi = i as f64;
        let an = -fi * (fi - s);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = tiny;
        }
        c = b + an / c;
        if c.norm() < TINY {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (-z).exp() * z.powf(s) * h
}

/// `e^{jx} − 1` without cancellation for small `x`.
fn exp_j_minus_one(x: f64) -> Complex64 {
    let half = (0.5 * x).sin();
    Complex64::new(-2.0 * half * half, x.sin())
}

/// `K(b)` by quadrature: `[b, c]` in the variable `w = s³` (smooth at 0), then
/// half-periods `[c + kπ, c + (k+1)π]` of `e^{jw}` whose alternating
/// contributions are epsilon-extrapolated, real and imaginary parts apart.
pub fn oscillatory_tail_quadrature(b: f64, rel_tol: f64) -> Result<Complex64> {
    const MAX_TERMS: usize = 400;
    let c = PI * ((b / PI).floor() + 1.0);
    let head = integrate(
        |s: f64| exp_j_minus_one(s * s * s) * (3.0 / (s * s)),
        b.cbrt(),
        c.cbrt(),
        1e-15,
        0.1 * rel_tol,
        500,
    );
    if !head.converged {
        return Err(Error::Quadrature {
            context: "inner integral head",
            intervals: head.subdivisions,
            partial: head.value.norm(),
            last_correction: head.error,
        });
    }
    let base = head.value - 3.0 * c.powf(-1.0 / 3.0);
    let mut re = AcceleratedSum::new(0.0, 30);
    let mut im = AcceleratedSum::new(0.0, 30);
    let scale = base.norm().max(c.powf(-1.0 / 3.0));
    for k in 0..MAX_TERMS {
        let lo = c + k as f64 * PI;
        let piece = integrate(
            |w: f64| Complex64::from_polar(w.powf(-4.0 / 3.0), w),
            lo,
            lo + PI,
            1e-17,
            1e-13,
            50,
        );
        re.push(piece.value.re);
        im.push(piece.value.im);
        if k >= 8 {
            let change = re.recent_change(3).max(im.recent_change(3));
            if change <= 0.1 * rel_tol * scale {
                return Ok(base + Complex64::new(re.estimate(), im.estimate()));
            }
        }
    }
    Err(Error::Quadrature {
        context: "inner integral tail",
        intervals: MAX_TERMS,
        partial: (base + Complex64::new(re.estimate(), im.estimate())).norm(),
        last_correction: re.recent_change(3).max(im.recent_change(3)),
    })
}

/// `∫₀^ρ (e^{jtv⁻⁶} − 1) v dv` for any real `t`.
pub fn inner_integral(t: f64, rho: f64, method: InnerMethod, rel_tol: f64) -> Result<Complex64> {
    if t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if t < 0.0 {
        return inner_integral(-t, rho, method, rel_tol).map(|z| z.conj());
    }
    let b = t * rho.powi(-6);
    let k = match method {
        InnerMethod::IncompleteGamma => oscillatory_tail_gamma(b),
        InnerMethod::OscillatoryQuadrature => oscillatory_tail_quadrature(b, rel_tol)?,
    };
    Ok(k * (t.cbrt() / 6.0))
}

/// Characteristic function `E[e^{jtS}]` of the interference sum with unit
/// alignments.
pub fn characteristic_fn_s(
    t: f64,
    density: f64,
    cell_radius: f64,
    quad: &QuadratureConfig,
) -> Result<Complex64> {
    if !t.is_finite() {
        return Err(invalid("t", "must be finite"));
    }
    require_non_negative("density", density)?;
    require_positive("cell_radius", cell_radius)?;
    quad.validate()?;
    if density == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let inner = inner_integral(t, cell_radius, quad.inner_method, quad.inner_rel_tol)?;
    Ok((inner * (2.0 * PI * density)).exp())
}

/// Mean of `|I|` for independent uniform coil angles,
/// `(4/π²) ∫₀^{π/2} √(1 + 3 sin²θ) dθ`, by adaptive Gauss-Kronrod. Close
/// enough to one that neighbours are modelled with unit alignment.
pub fn expected_abs_alignment() -> f64 {
    alignment_mean_integral(3.0)
}

/// `(4/π²) ∫₀^{π/2} √(1 + k sin²θ) dθ`.
pub fn alignment_mean_integral(k: f64) -> f64 {
    let r = integrate(
        |theta: f64| (1.0 + k * theta.sin().powi(2)).sqrt(),
        0.0,
        PI / 2.0,
        1e-15,
        1e-15,
        200,
    );
    4.0 / (PI * PI) * r.value
}

/// Same integral by the trapezoidal rule over a full period of the
/// integrand, which converges geometrically for this smooth periodic
/// function. Independent cross-check of [`expected_abs_alignment`].
pub fn expected_abs_alignment_periodic(points: usize) -> f64 {
    let n = points.max(1);
    let h = 2.0 * PI / n as f64;
    let sum: f64 = (0..n)
        .map(|k| (1.0 + 3.0 * (k as f64 * h).sin().powi(2)).sqrt())
        .sum();
    // ∫₀^{π/2} = ¼ ∫₀^{2π}
    4.0 / (PI * PI) * 0.25 * h * sum
}

/// `Λ(τ)`: the typical receiver is in outage iff `S > Λ(τ)`. Negative when
/// the threshold is out of reach even with no neighbours.
pub fn lambda_threshold(params: &SystemParams, q: &OutageQuery) -> Result<f64> {
    let d0 = q.require_distance()?;
    let own = q.alignment.powi(2) / d0.powi(6);
    let r_x = params.rx_resistance + q.load;
    Ok(
        own * (params.transmit_power * q.load / r_x - q.threshold) / q.threshold
            - params.tx_resistance * r_x / params.coupling_scale(),
    )
}

/// Smallest transmit power for which `Λ(τ) >= 0`.
pub fn strong_feasibility_power(params: &SystemParams, q: &OutageQuery) -> Result<f64> {
    let d0 = q.require_distance()?;
    let r_x = params.rx_resistance + q.load;
    let m0_sq = (params.coil_constant * q.alignment / d0.powi(3)).powi(2);
    let w2 = params.omega * params.omega;
    Ok(q.threshold * r_x / q.load * (params.tx_resistance * r_x / (w2 * m0_sq) + 1.0))
}

/// Outage probability in the strongly coupled regime, by Gil-Pelaez inversion
/// of the interference characteristic function.
pub fn outage_strong(
    params: &SystemParams,
    q: &OutageQuery,
    quad: &QuadratureConfig,
) -> Result<OutageResult> {
    params.validate()?;
    q.validate()?;
    quad.validate()?;
    if q.threshold == 0.0 {
        // Λ(0) = +∞: any positive harvested power clears a zero threshold
        q.require_distance()?;
        return Ok(OutageResult {
            probability: 0.0,
            error: 0.0,
            feasible: true,
            diagnostics: OutageDiagnostics {
                threshold_lambda: f64::INFINITY,
                ..OutageDiagnostics::default()
            },
        });
    }
    let threshold = lambda_threshold(params, q)?;
    if threshold < 0.0 {
        return Ok(OutageResult {
            probability: 1.0,
            error: 0.0,
            feasible: false,
            diagnostics: OutageDiagnostics {
                threshold_lambda: threshold,
                raw_probability: 1.0,
                ..OutageDiagnostics::default()
            },
        });
    }
    let mut result = interference_exceedance(threshold, params.density, params.cell_radius, quad)?;
    result.diagnostics.threshold_lambda = threshold;
    Ok(result)
}

/// `P[S > s]` for the unit-alignment interference sum, `s >= 0`.
pub fn interference_exceedance(
    s: f64,
    density: f64,
    cell_radius: f64,
    quad: &QuadratureConfig,
) -> Result<OutageResult> {
    require_non_negative("interference threshold", s)?;
    require_non_negative("density", density)?;
    require_positive("cell_radius", cell_radius)?;
    quad.validate()?;
    if density == 0.0 {
        return Ok(OutageResult {
            probability: 0.0,
            error: 0.0,
            feasible: true,
            diagnostics: OutageDiagnostics::default(),
        });
    }
    GilPelaez {
        density,
        cell_radius,
        quad: *quad,
        failure: RefCell::new(None),
    }
    .exceedance(s)
}

struct GilPelaez {
    density: f64,
    cell_radius: f64,
    quad: QuadratureConfig,
    failure: RefCell<Option<Error>>,
}

impl GilPelaez {
    fn void_probability(&self) -> f64 {
        (-PI * self.density * self.cell_radius.powi(2)).exp()
    }

    /// `φ_S(jt)` for `t > 0`; inner failures are parked and surface after
    /// the surrounding integration.
    fn phi(&self, t: f64) -> Complex64 {
        match inner_integral(
            t,
            self.cell_radius,
            self.quad.inner_method,
            self.quad.inner_rel_tol,
        ) {
            Ok(inner) => (inner * (2.0 * PI * self.density)).exp(),
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        }
    }

    fn take_failure(&self) -> Result<()> {
        match self.failure.borrow_mut().take() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Truncation point of the outer integral and a bound on what is cut off.
    fn tail_cutoff(&self, tol: f64) -> (f64, f64) {
        let p0 = self.void_probability();
        let a_inv = self.cell_radius.powi(6);
        // |2πλ(ln φ/(2πλ) + ρ²/2)| <= c/t once t·ρ⁻⁶ >= 1
        let c = 2.0 * PI * self.density * a_inv.powf(4.0 / 3.0) / 3.0;
        let mut best = (f64::INFINITY, f64::INFINITY);
        if p0 > 0.0 {
            let t = a_inv.max(c).max(p0 * (E - 1.0) * c / tol);
            best = (t, p0 * (E - 1.0) * c / t);
        }
        if p0 < 1e-3 * tol {
            // before saturating at p0, |φ| decays like exp(−κ t^{1/3})
            let mut t = 2f64.powi(-120);
            for _ in 0..240 {
                let m = self.phi(t).norm();
                if m < 1e-3 * tol {
                    let t_env = 2.0 * t;
                    let m_env = self.phi(t_env).norm().max(f64::MIN_POSITIVE);
                    let bound = 3.0 * m_env / (-m_env.ln()).max(1.0) + p0 * t_env;
                    if t_env < best.0 {
                        best = (t_env, bound);
                    }
                    break;
                }
                t *= 2.0;
            }
        }
        best
    }

    fn exceedance(&self, s: f64) -> Result<OutageResult> {
        let p0 = self.void_probability();
        let tol = self.quad.abs_tol * PI / 8.0;
        let (t_tail, tail_bound) = self.tail_cutoff(tol);
        self.take_failure()?;

        let continuous = |t: f64| self.phi(t) - p0;
        let rotate = |t: f64| Complex64::from_polar(1.0, -t * s);

        let half_period = if s > 0.0 { PI / s } else { f64::INFINITY };
        let head_end = half_period.min(t_tail);
        // t = σ³: dt/t = 3 dσ/σ, and the t^{-2/3} singularity becomes a constant
        let head = integrate(
            |sigma: f64| {
                let t = sigma * sigma * sigma;
                3.0 * (continuous(t) * rotate(t)).im / sigma
            },
            0.0,
            head_end.cbrt(),
            0.5 * tol,
            1e-12,
            4000,
        );
        self.take_failure()?;
        if !head.converged {
            return Err(Error::Quadrature {
                context: "Gil-Pelaez head",
                intervals: head.subdivisions,
                partial: head.value,
                last_correction: head.error,
            });
        }

        let integrand = |t: f64| (continuous(t) * rotate(t)).im / t;
        let mut intervals = 0usize;
        let (total, mut error, tail_estimate) = if head_end >= t_tail {
            (head.value, head.error + tail_bound, tail_bound)
        } else {
            let mut acc = AcceleratedSum::new(head.value, 40);
            let mut k = 1usize;
            loop {
                let lo = k as f64 * half_period;
                let hi = lo + half_period;
                let piece = integrate(integrand, lo, hi, 1e-3 * tol, 1e-10, 200);
                self.take_failure()?;
                acc.push(piece.value);
                intervals = k;
                if self.quad.acceleration && k >= 6 {
                    let change = acc.recent_change(2);
                    if change <= 0.25 * tol {
                        break (acc.estimate(), head.error + change, change);
                    }
                }
                if hi >= t_tail {
                    break (acc.partial_sum(), head.error + tail_bound, tail_bound);
                }
                if k >= self.quad.max_intervals {
                    return Err(Error::Quadrature {
                        context: "Gil-Pelaez tail",
                        intervals: k,
                        partial: 0.5 * (1.0 - p0) + acc.estimate() / PI,
                        last_correction: acc.recent_change(2) / PI,
                    });
                }
                k += 1;
            }
        };
        error /= PI;
        // sub-probability Gil-Pelaez: the continuous part has mass 1 − p0
        let raw = 0.5 * (1.0 - p0) + total / PI;
        let probability = raw.clamp(0.0, 1.0);
        let clamped_beyond_error = (raw - probability).abs() > error;
        if clamped_beyond_error {
            log::warn!(
                "outage {raw:.6e} clamped to {probability} beyond its error estimate {error:.3e} (S threshold {s:.6e})"
            );
        }
        Ok(OutageResult {
            probability,
            error,
            feasible: true,
            diagnostics: OutageDiagnostics {
                threshold_lambda: s,
                intervals,
                head_panels: head.subdivisions,
                tail_estimate: tail_estimate / PI,
                raw_probability: raw,
                clamped_beyond_error,
            },
        })
    }
}

/// Loosely coupled outage of a receiver placed uniformly in the cell.
pub fn outage_loose(params: &SystemParams, q: &OutageQuery) -> Result<f64> {
    // 1 − (d*/ρ)² with d*⁶ ∝ P, written through P_min so that P = P_min
    // gives exactly zero
    let p_min = min_power_zero_outage(params, q)?;
    if p_min == 0.0 {
        return Ok(0.0);
    }
    let ratio = params.transmit_power / p_min;
    Ok((1.0 - ratio.cbrt()).clamp(0.0, 1.0))
}

/// Transmit power at which the loosely coupled outage reaches zero.
pub fn min_power_zero_outage(params: &SystemParams, q: &OutageQuery) -> Result<f64> {
    params.validate()?;
    q.validate()?;
    Ok(params.cell_radius.powi(6)
        * q.threshold
        * params.tx_resistance
        * (params.rx_resistance + q.load).powi(2)
        / (params.coupling_scale() * q.alignment.powi(2) * q.load))
}

/// Inverts [`min_power_zero_outage`] for `ω`, given the power (W) at which
/// zero outage is first reached. `params.omega` is ignored.
pub fn calibrate_omega(anchor_power: f64, params: &SystemParams, q: &OutageQuery) -> Result<f64> {
    require_positive("anchor power", anchor_power)?;
    q.validate()?;
    params.with_omega(1.0).validate()?;
    let denominator = anchor_power * params.coil_constant.powi(2) * q.alignment.powi(2) * q.load;
    if !(denominator > 0.0) {
        return Err(invalid(
            "calibration anchor",
            "alignment must be nonzero for a finite zero-outage power",
        ));
    }
    let omega_sq = params.cell_radius.powi(6)
        * q.threshold
        * params.tx_resistance
        * (params.rx_resistance + q.load).powi(2)
        / denominator;
    require_positive("calibrated omega", omega_sq.sqrt())
}

/// CDF of the distance of a point uniform in a disk of radius `rho`.
pub fn distance_cdf(x: f64, rho: f64) -> Result<f64> {
    require_non_negative("x", x)?;
    require_positive("rho", rho)?;
    Ok((x * x / (rho * rho)).min(1.0))
}
