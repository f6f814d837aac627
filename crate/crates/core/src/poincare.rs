//! Critical exponent of a group from orbit counting.

use crate::error::{Error, Result};
use crate::group::OrbitSample;

/// `N(T)`: how many enumerated elements move the base point by at most `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitCountingCurve {
    pub thresholds: Vec<f64>,
    pub counts: Vec<u64>,
    pub max_word_len: usize,
    /// Smallest displacement among words of exactly the maximal length;
    /// above it the truncated counts fall behind the true ones. ∞ when no
    /// word of that length exists.
    pub t_sat: f64,
    /// Dimension of the boundary sphere.
    pub boundary_dim: usize,
}

fn orbit_dim(sample: &OrbitSample) -> usize {
    match sample.base() {
        crate::group::OrbitPoint::Interior(p) => p.dim(),
        crate::group::OrbitPoint::Boundary(p) => p.dim(),
    }
}

fn saturation(sample: &OrbitSample) -> f64 {
    let l = sample.max_len();
    sample.lengths_and_displacements().filter(|(len, _)| *len == l && l > 0).map(|(_, d)| d).fold(f64::INFINITY, f64::min)
}

/// `n` equally spaced thresholds on `[0, T_sat]`, or on `[0, max displacement]`
/// when nothing saturates.
pub fn default_threshold_grid(sample: &OrbitSample, n: usize) -> Vec<f64> {
    let sat = saturation(sample);
    let top = if sat.is_finite() { sat } else { sample.displacements().fold(0.0, f64::max).max(1.0) };
    (0..n).map(|i| top * i as f64 / n as f64).collect()
}

/// Exact counts over the sample at each threshold of `grid` (sorted on input).
pub fn orbit_counting_curve(sample: &OrbitSample, grid: &[f64]) -> Result<OrbitCountingCurve> {
    if sample.is_empty() {
        return Err(Error::Contract("orbit sample is empty".into()));
    }
    let mut thresholds = grid.to_vec();
    thresholds.sort_by(f64::total_cmp);
    let mut disp: Vec<f64> = sample.displacements().collect();
    disp.sort_by(f64::total_cmp);
    let counts = thresholds.iter().map(|&t| disp.partition_point(|&d| d <= t + 1e-12) as u64).collect();
    Ok(OrbitCountingCurve {
        thresholds,
        counts,
        max_word_len: sample.max_len(),
        t_sat: saturation(sample),
        boundary_dim: orbit_dim(sample) - 1,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaEstimate {
    pub delta: f64,
    pub stderr: f64,
    /// Thresholds used by the regression.
    pub window: (f64, f64),
    pub points_used: usize,
    /// Set when the slope left `[0, d]` and was clamped.
    pub warning: Option<String>,
}

/// Least-squares slope and its standard error.
pub(crate) fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let stderr = if x.len() > 2 { (ssr / (n - 2.0) / sxx).sqrt() } else { f64::INFINITY };
    (slope, stderr, intercept)
}

/// Slope of `ln N(T)` against `T` below saturation: thresholds under
/// `T_sat` are kept, the top 20% of them dropped, and the fit starts at the
/// first threshold with `N > 1`.
pub fn estimate_delta(curve: &OrbitCountingCurve) -> Result<DeltaEstimate> {
    if curve.counts.iter().all(|&c| c <= 1) {
        let t = curve.thresholds.last().copied().unwrap_or(0.0);
        return Ok(DeltaEstimate { delta: 0.0, stderr: 0.0, window: (0.0, t), points_used: curve.counts.len(), warning: None });
    }
    let below: Vec<usize> = (0..curve.thresholds.len()).filter(|&i| curve.thresholds[i] < curve.t_sat).collect();
    let keep = (below.len() * 4).div_ceil(5);
    let window: Vec<usize> = below[..keep].iter().copied().filter(|&i| curve.counts[i] > 1).collect();
    if window.len() < 5 {
        return Err(Error::Estimator(format!(
            "only {} usable thresholds below saturation T_sat = {:.4}; increase the maximal word length",
            window.len(),
            curve.t_sat
        )));
    }
    let x: Vec<f64> = window.iter().map(|&i| curve.thresholds[i]).collect();
    let y: Vec<f64> = window.iter().map(|&i| (curve.counts[i] as f64).ln()).collect();
    let (slope, stderr, _) = fit_line(&x, &y);
    let d = curve.boundary_dim as f64;
    let (delta, warning) = if slope < 0.0 || slope > d {
        let c = slope.clamp(0.0, d);
        (c, Some(format!("slope {slope:.6} outside [0, {d}] clamped to {c}")))
    } else {
        (slope, None)
    };
    Ok(DeltaEstimate { delta, stderr, window: (x[0], x[x.len() - 1]), points_used: x.len(), warning })
}

/// Cross-check: the exponent `s` at which the last two word-length levels
/// of the Poincaré series have equal mass, `Σ_{|g|=L} e^{-s d} =
/// Σ_{|g|=L-1} e^{-s d}`, found by bisection on `[0, d + 1]`.
pub fn bisection_diagnostic(sample: &OrbitSample) -> Result<f64> {
    let l = sample.max_len();
    if l < 2 {
        return Err(Error::Estimator("bisection needs words of length at least 2".into()));
    }
    let top: Vec<f64> = sample.lengths_and_displacements().filter(|(n, _)| *n == l).map(|(_, d)| d).collect();
    let prev: Vec<f64> = sample.lengths_and_displacements().filter(|(n, _)| *n == l - 1).map(|(_, d)| d).collect();
    if top.is_empty() || prev.is_empty() {
        return Err(Error::Estimator("no words at the last two lengths".into()));
    }
    let log_mass = |ds: &[f64], s: f64| {
        let m = ds.iter().map(|d| -s * d).fold(f64::NEG_INFINITY, f64::max);
        m + ds.iter().map(|d| (-s * d - m).exp()).sum::<f64>().ln()
    };
    // log(top/prev) is decreasing in s
    let g = |s: f64| log_mass(&top, s) - log_mass(&prev, s);
    let (mut lo, mut hi) = (0.0, orbit_dim(sample) as f64);
    if g(lo) <= 0.0 {
        return Ok(0.0);
    }
    if g(hi) > 0.0 {
        return Ok(hi);
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
