//! Adaptive Gauss-Kronrod integration and Wynn's epsilon algorithm.
//!
//! These are the building blocks of the oscillatory integrals in
//! [`crate::stochastic`]: finite pieces are integrated adaptively, infinite
//! oscillatory tails are split at (approximate) zeros and the resulting
//! alternating partial sums are extrapolated with the epsilon algorithm.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One 21-point Kronrod panel with the embedded 10-point Gauss rule.
/// Returns the Kronrod value and a QUADPACK-style error estimate.
pub fn gauss_kronrod_21<T, F>(f: &F, a: f64, b: f64) -> (T, f64)
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::default();
    let mut abs_sum = fc.magnitude() * WGK[10];
    let mut samples = [(T::default(), T::default()); 10];
    for (j, sample) in samples.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod = kronrod + (f1 + f2) * WGK[j];
        abs_sum += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
        *sample = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).magnitude() * WGK[10];
    for (j, (f1, f2)) in samples.iter().enumerate() {
        asc += ((*f1 - mean).magnitude() + (*f2 - mean).magnitude()) * WGK[j];
    }
    let width = half.abs();
    let result = kronrod * half;
    let abs_sum = abs_sum * width;
    let asc = asc * width;
    let mut err = ((kronrod - gauss) * half).magnitude();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_sum);
    }
    (result, err)
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration on `[a, b]`: the panel with the largest
/// error is bisected until `error <= max(abs_tol, rel_tol·|value|)` or the
/// panel budget is spent. Non-convergence is reported through
/// [`Integral::converged`], never hidden.
pub fn integrate<T, F>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Integral<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if a == b {
        return Integral {
            value: T::default(),
            error: 0.0,
            subdivisions: 0,
            converged: true,
        };
    }
    let (value, error) = gauss_kronrod_21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_error = error;
    let max_panels = max_panels.max(1);
    while total_error > abs_tol.max(rel_tol * total.magnitude()) && heap.len() < max_panels {
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // cannot split further in floating point
            heap.push(worst);
            break;
        }
        let (v1, e1) = gauss_kronrod_21(&f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_21(&f, mid, worst.b);
        total = total - worst.value + v1 + v2;
        total_error = total_error - worst.error + e1 + e2;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // resum to shed the drift of the running updates
    let mut value = T::default();
    let mut error = 0.0;
    for panel in heap.iter() {
        value = value + panel.value;
        error += panel.error;
    }
    Integral {
        value,
        error,
        subdivisions: heap.len(),
        converged: error <= abs_tol.max(rel_tol * value.magnitude()),
    }
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums. Returns
/// the deepest even-column estimate that could be formed before the table
/// degenerated (two equal neighbours). With fewer than three sums the last
/// sum is returned unchanged.
pub fn wynn_epsilon(partial_sums: &[f64]) -> f64 {
    let n = partial_sums.len();
    let Some(&last) = partial_sums.last() else {
        return f64::NAN;
    };
    if n < 3 {
        return last;
    }
    let mut previous = vec![0.0; n + 1];
    let mut current = partial_sums.to_vec();
    let mut best = last;
    let mut column = 0usize;
    while current.len() > 1 {
        let mut next = Vec::with_capacity(current.len() - 1);
        for k in 0..current.len() - 1 {
            let diff = current[k + 1] - current[k];
            let scale = current[k + 1].abs().max(current[k].abs());
            if diff.abs() <= 4.0 * f64::EPSILON * scale || !diff.is_finite() {
                // converged to working precision; deeper columns are noise
                return if column % 2 == 0 {
                    current[current.len() - 1]
                } else {
                    best
                };
            }
            next.push(previous[k + 1] + 1.0 / diff);
        }
        previous = current;
        current = next;
        column += 1;
        if column % 2 == 0 {
            let candidate = current[current.len() - 1];
            if candidate.is_finite() {
                best = candidate;
            }
        }
    }
    best
}

/// Incremental driver for summing a series with epsilon acceleration.
#[derive(Debug, Clone)]
pub struct AcceleratedSum {
    window: usize,
    partial_sums: Vec<f64>,
    estimates: Vec<f64>,
}

impl AcceleratedSum {
    /// `window` bounds how many trailing partial sums enter the table.
    pub fn new(start: f64, window: usize) -> Self {
        AcceleratedSum {
            window: window.max(3),
            partial_sums: vec![start],
            estimates: vec![start],
        }
    }

    pub fn push(&mut self, term: f64) -> f64 {
        let next = self.partial_sums.last().copied().unwrap_or(0.0) + term;
        self.partial_sums.push(next);
        let from = self.partial_sums.len().saturating_sub(self.window);
        let estimate = wynn_epsilon(&self.partial_sums[from..]);
        self.estimates.push(estimate);
        estimate
    }

    pub fn partial_sum(&self) -> f64 {
        *self.partial_sums.last().expect("at least the start value")
    }

    pub fn estimate(&self) -> f64 {
        *self.estimates.last().expect("at least the start value")
    }

    pub fn terms(&self) -> usize {
        self.partial_sums.len() - 1
    }

    /// Largest change among the last `lookback` estimates.
    pub fn recent_change(&self, lookback: usize) -> f64 {
        let n = self.estimates.len();
        if n < lookback + 1 {
            return f64::INFINITY;
        }
        self.estimates[n - lookback - 1..]
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max)
    }
}
