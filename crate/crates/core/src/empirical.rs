//! Brute-force dimension estimators: covering numbers of point clouds,
//! two-scale counts, empirical Assouad and lower spectra, box dimension,
//! pointwise measure exponents of a [`MeasureModel`], and the slab check.

use rayon::prelude::*;

use crate::error::{contract, Error, Result};
use crate::hyperbolic::BoundaryPoint;
use crate::measure::MeasureModel;
use crate::poincare::fit_line;
use crate::sampler::PointCloud;

/// Relative slack on ball membership.
const BALL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoveringMethod {
    /// Occupied boxes of a fixed grid; each box fits inside a ball of radius
    /// `r` (side `2r` on the line, `√2 r` in the plane).
    GridBoxes,
    /// Optimal cover by intervals of length `2r`, found greedily (line only).
    Exact1d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterStrategy {
    All,
    /// At each scale `r`, one point per occupied cell of side `r^θ/4`, at
    /// most `n` of them.
    Stratified(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSide {
    Assouad,
    Lower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    pub theta_grid: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub scales_per_decade: usize,
    pub centers: CenterStrategy,
    pub method: CoveringMethod,
}

impl EstimatorConfig {
    /// Requires `r_min ≥ 10 · resolution`, `r_min < r_max < 1`, and
    /// `r_max^θ` below the cloud diameter for every θ of the grid.
    pub fn validate(&self, cloud: &PointCloud) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max < 1.0) {
            return Err(Error::Validation(format!(
                "scale window must satisfy 0 < r_min < r_max < 1, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.r_min < 10.0 * cloud.resolution() {
            return Err(Error::Validation(format!(
                "r_min = {} is below ten times the cloud resolution {}",
                self.r_min,
                cloud.resolution()
            )));
        }
        if self.scales_per_decade == 0 {
            return Err(Error::Validation("need at least one scale per decade".into()));
        }
        if self.method == CoveringMethod::Exact1d && cloud.dim() != 1 {
            return Err(Error::Validation("exact covering is only available on the line".into()));
        }
        let diam = cloud.diameter();
        for &t in &self.theta_grid {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Validation(format!("theta = {t} outside (0, 1)")));
            }
            if self.r_max.powf(t) >= diam {
                return Err(Error::Validation(format!(
                    "r_max^theta = {} reaches the cloud diameter {diam} at theta = {t}",
                    self.r_max.powf(t)
                )));
            }
        }
        Ok(())
    }

    /// Log-spaced scales from `r_min` to `r_max`, both included.
    pub fn scales(&self) -> Vec<f64> {
        let decades = (self.r_max / self.r_min).log10();
        let n = ((decades * self.scales_per_decade as f64).round() as usize).max(1);
        (0..=n).map(|i| self.r_min * (self.r_max / self.r_min).powf(i as f64 / n as f64)).collect()
    }
}

/// The set whose cover is counted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Whole,
    /// Cloud points in the closed ball `B(center, radius)`.
    Ball { center: [f64; 2], radius: f64 },
}

fn grid_side(dim: usize, r: f64) -> f64 {
    if dim == 1 {
        2.0 * r
    } else {
        2.0 * r / (dim as f64).sqrt()
    }
}

/// Occupied cells of one grid, sorted by `(row, column)`, with the points of
/// each cell. On the line everything sits in row 0.
struct CellIndex<'a> {
    points: &'a [[f64; 2]],
    side: f64,
    cells: Vec<(i64, i64)>,
    starts: Vec<u32>,
    members: Vec<u32>,
}

impl<'a> CellIndex<'a> {
    fn new(cloud: &'a PointCloud, side: f64) -> Self {
        let points = cloud.points();
        let key = |p: &[f64; 2]| -> (i64, i64) {
            let i = (p[0] / side).floor() as i64;
            if cloud.dim() == 1 {
                (0, i)
            } else {
                (i, (p[1] / side).floor() as i64)
            }
        };
        let mut keyed: Vec<((i64, i64), u32)> = points.iter().enumerate().map(|(i, p)| (key(p), i as u32)).collect();
        keyed.sort_unstable();
        let mut cells = Vec::new();
        let mut starts = Vec::new();
        for (n, (k, _)) in keyed.iter().enumerate() {
            if cells.last() != Some(k) {
                cells.push(*k);
                starts.push(n as u32);
            }
        }
        starts.push(keyed.len() as u32);
        let members = keyed.into_iter().map(|(_, i)| i).collect();
        Self { points, side, cells, starts, members }
    }

    /// Occupied cells holding at least one point of `B(c, radius)`.
    fn count_in_ball(&self, c: &[f64; 2], radius: f64, line: bool) -> usize {
        let r = radius * (1.0 + BALL_TOL);
        let s = self.side;
        let rows = if line { (0, 0) } else { (((c[0] - r) / s).floor() as i64, ((c[0] + r) / s).floor() as i64) };
        let mut count = 0;
        for row in rows.0..=rows.1 {
            let (lo_col, hi_col) = if line {
                (((c[0] - r) / s).floor() as i64, ((c[0] + r) / s).floor() as i64)
            } else {
                (((c[1] - r) / s).floor() as i64, ((c[1] + r) / s).floor() as i64)
            };
            let a = self.cells.partition_point(|k| *k < (row, lo_col));
            let b = self.cells.partition_point(|k| *k <= (row, hi_col));
            for idx in a..b {
                let (ci, cj) = self.cells[idx];
                let (x0, y0) = if line { (cj as f64 * s, 0.0) } else { (ci as f64 * s, cj as f64 * s) };
                let (x1, y1) = if line { (x0 + s, 0.0) } else { (x0 + s, y0 + s) };
                // farthest corner inside the ball: every point counts
                let fx = (c[0] - x0).abs().max((c[0] - x1).abs());
                let fy = (c[1] - y0).abs().max((c[1] - y1).abs());
                if fx * fx + fy * fy <= r * r {
                    count += 1;
                    continue;
                }
                let hit = self.members[self.starts[idx] as usize..self.starts[idx + 1] as usize].iter().any(|&m| {
                    let p = self.points[m as usize];
                    (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) <= r * r
                });
                if hit {
                    count += 1;
                }
            }
        }
        count
    }
}

/// Greedy cover of the sorted line points `xs[a..b]` by closed intervals of
/// length `2r`; optimal in one dimension.
fn greedy_cover(xs: &[[f64; 2]], r: f64) -> usize {
    let mut count = 0;
    let mut i = 0;
    while i < xs.len() {
        count += 1;
        let reach = xs[i][0] + 2.0 * r * (1.0 + BALL_TOL);
        i += xs[i..].partition_point(|p| p[0] <= reach);
    }
    count
}

fn line_window(points: &[[f64; 2]], target: &Target) -> (usize, usize) {
    match target {
        Target::Whole => (0, points.len()),
        Target::Ball { center, radius } => {
            let r = radius * (1.0 + BALL_TOL);
            let a = points.partition_point(|p| p[0] < center[0] - r);
            let b = points.partition_point(|p| p[0] <= center[0] + r);
            (a, b)
        }
    }
}

/// Number of radius-`r` pieces needed to cover the part of the cloud in
/// `target`: occupied grid boxes, or the optimal interval count on the line.
pub fn covering_number(cloud: &PointCloud, target: &Target, r: f64, method: CoveringMethod) -> Result<usize> {
    if !(r > 0.0) {
        return contract(format!("covering scale must be positive, got {r}"));
    }
    match method {
        CoveringMethod::Exact1d => {
            if cloud.dim() != 1 {
                return contract("exact covering is only available on the line");
            }
            let (a, b) = line_window(cloud.points(), target);
            Ok(greedy_cover(&cloud.points()[a..b], r))
        }
        CoveringMethod::GridBoxes => {
            let index = CellIndex::new(cloud, grid_side(cloud.dim(), r));
            Ok(count_with(&index, cloud, target))
        }
    }
}

fn count_with(index: &CellIndex, cloud: &PointCloud, target: &Target) -> usize {
    match target {
        Target::Whole => index.cells.len(),
        Target::Ball { center, radius } => index.count_in_ball(center, *radius, cloud.dim() == 1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoScaleRecord {
    pub center: [f64; 2],
    pub r: f64,
    pub theta: f64,
    pub count: usize,
}

/// `N_r(B(x, r^θ) ∩ cloud)`.
pub fn two_scale_count(
    cloud: &PointCloud,
    x: [f64; 2],
    r: f64,
    theta: f64,
    method: CoveringMethod,
) -> Result<TwoScaleRecord> {
    if !(theta > 0.0 && theta < 1.0) {
        return contract(format!("theta = {theta} outside (0, 1)"));
    }
    if !(r > 0.0 && r < 1.0) {
        return contract(format!("two-scale counts need 0 < r < 1, got {r}"));
    }
    let target = Target::Ball { center: x, radius: r.powf(theta) };
    let count = covering_number(cloud, &target, r, method)?;
    Ok(TwoScaleRecord { center: x, r, theta, count })
}

/// Centres for balls of radius `big`: the lexicographically smallest point
/// of every occupied cell of side `big / 4`, thinned to at most `n` by
/// evenly spaced ranks. Returned in cloud order.
fn select_centers(cloud: &PointCloud, strategy: CenterStrategy, big: f64) -> Vec<[f64; 2]> {
    let pts = cloud.points();
    let n = match strategy {
        CenterStrategy::All => return pts.to_vec(),
        CenterStrategy::Stratified(n) => n.max(1),
    };
    let index = CellIndex::new(cloud, 0.25 * big);
    let mut reps: Vec<u32> = index.starts[..index.cells.len()].iter().map(|&s| index.members[s as usize]).collect();
    reps.sort_unstable();
    if reps.len() > n {
        let m = reps.len();
        let mut keep: Vec<u32> = (0..n).map(|i| reps[if n == 1 { 0 } else { i * (m - 1) / (n - 1) }]).collect();
        keep.dedup();
        reps = keep;
    }
    reps.into_iter().map(|i| pts[i as usize]).collect()
}

/// Extremal two-scale count at one scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleExtreme {
    pub r: f64,
    pub count: usize,
    pub center: [f64; 2],
    /// Centres skipped because their ball meets a flagged region.
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    pub theta: f64,
    pub value: f64,
    pub stderr: f64,
    pub scales: Vec<ScaleExtreme>,
}

/// Slope of `ln M(r)` against `ln r^{θ-1}`, with `M(r)` the largest
/// (Assouad) or smallest (lower) two-scale count over the centres. The lower
/// side skips centres whose `r^θ`-ball meets a flagged region; ties go to
/// the lexicographically smallest centre.
pub fn estimate_spectrum(
    cloud: &PointCloud,
    side: SpectrumSide,
    theta: f64,
    config: &EstimatorConfig,
) -> Result<SpectrumEstimate> {
    let mut cfg = config.clone();
    cfg.theta_grid = vec![theta];
    cfg.validate(cloud)?;
    let mut scales = Vec::new();
    for r in cfg.scales() {
        let big = r.powf(theta);
        let centers = select_centers(cloud, cfg.centers, big);
        let index = match cfg.method {
            CoveringMethod::GridBoxes => Some(CellIndex::new(cloud, grid_side(cloud.dim(), r))),
            CoveringMethod::Exact1d => None,
        };
        let line = cloud.dim() == 1;
        let counts: Vec<Option<usize>> = centers
            .par_iter()
            .map(|c| {
                if side == SpectrumSide::Lower && cloud.is_flagged(c, big) {
                    return None;
                }
                let target = Target::Ball { center: *c, radius: big };
                Some(match &index {
                    Some(ix) => ix.count_in_ball(c, big, line),
                    None => {
                        let (a, b) = line_window(cloud.points(), &target);
                        greedy_cover(&cloud.points()[a..b], r)
                    }
                })
            })
            .collect();
        let excluded = counts.iter().filter(|c| c.is_none()).count();
        // centres are sorted, so the first extremum is the smallest one
        let mut best: Option<(usize, [f64; 2])> = None;
        for (c, n) in centers.iter().zip(&counts) {
            let Some(n) = *n else { continue };
            let better = match (best, side) {
                (None, _) => true,
                (Some((b, _)), SpectrumSide::Assouad) => n > b,
                (Some((b, _)), SpectrumSide::Lower) => n < b,
            };
            if better {
                best = Some((n, *c));
            }
        }
        if let Some((count, center)) = best {
            scales.push(ScaleExtreme { r, count, center, excluded });
        }
    }
    if side == SpectrumSide::Lower && scales.is_empty() {
        return Err(Error::Estimator("every centre meets a flagged region".into()));
    }
    if scales.len() < 4 {
        return Err(Error::Estimator(format!("only {} usable scales; need at least 4", scales.len())));
    }
    let x: Vec<f64> = scales.iter().map(|s| (theta - 1.0) * s.r.ln()).collect();
    let y: Vec<f64> = scales.iter().map(|s| (s.count as f64).ln()).collect();
    let (value, stderr, _) = fit_line(&x, &y);
    Ok(SpectrumEstimate { theta, value, stderr, scales })
}

/// Slope of `ln N_r(cloud)` against `ln(1/r)` over the configured scales.
pub fn estimate_box_dimension(cloud: &PointCloud, config: &EstimatorConfig) -> Result<(f64, f64)> {
    let mut cfg = config.clone();
    cfg.theta_grid.clear();
    cfg.validate(cloud)?;
    let scales = cfg.scales();
    if scales.len() < 4 {
        return Err(Error::Estimator(format!("only {} scales; need at least 4", scales.len())));
    }
    let counts: Vec<usize> =
        scales.iter().map(|&r| covering_number(cloud, &Target::Whole, r, cfg.method)).collect::<Result<_>>()?;
    let x: Vec<f64> = scales.iter().map(|r| -r.ln()).collect();
    let y: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let (slope, stderr, _) = fit_line(&x, &y);
    Ok((slope, stderr))
}

/// Pointwise measure exponent
/// `ln(μ(B(z, e^{-Tθ})) / μ(B(z, e^{-T}))) / (T(1 - θ))`.
pub fn measure_spectrum_ratio(model: &MeasureModel, z: &BoundaryPoint, t: f64, theta: f64) -> Result<f64> {
    if !(t > 0.0) {
        return contract(format!("time must be positive, got {t}"));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return contract(format!("theta = {theta} outside (0, 1)"));
    }
    let near = model.log_ball_measure(z, t * theta)?;
    let far = model.log_ball_measure(z, t)?;
    Ok((near - far) / (t * (1.0 - theta)))
}

/// Extremes of [`measure_spectrum_ratio`] over a sweep of boundary points
/// and times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSweep {
    pub theta: f64,
    pub sup: f64,
    pub inf: f64,
    /// Indices `(point, time)` of the extremes.
    pub argsup: (usize, usize),
    pub arginf: (usize, usize),
}

pub fn measure_spectrum_sweep(
    model: &MeasureModel,
    points: &[BoundaryPoint],
    times: &[f64],
    theta: f64,
) -> Result<MeasureSweep> {
    if points.is_empty() || times.is_empty() {
        return contract("measure sweep needs at least one point and one time");
    }
    let values: Vec<Vec<f64>> = points
        .par_iter()
        .map(|z| times.iter().map(|&t| measure_spectrum_ratio(model, z, t, theta)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut out = MeasureSweep {
        theta,
        sup: f64::NEG_INFINITY,
        inf: f64::INFINITY,
        argsup: (0, 0),
        arginf: (0, 0),
    };
    for (i, row) in values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > out.sup {
                out.sup = v;
                out.argsup = (i, j);
            }
            if v < out.inf {
                out.inf = v;
                out.arginf = (i, j);
            }
        }
    }
    Ok(out)
}

/// An affine subspace `origin + span(directions)` of the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSubspace {
    origin: [f64; 2],
    basis: Vec<[f64; 2]>,
}

impl AffineSubspace {
    /// Directions are orthonormalised; dependent ones are dropped.
    pub fn new(origin: [f64; 2], directions: &[[f64; 2]]) -> Result<Self> {
        let mut basis: Vec<[f64; 2]> = Vec::new();
        for d in directions {
            let mut v = *d;
            for b in &basis {
                let dot = v[0] * b[0] + v[1] * b[1];
                v = [v[0] - dot * b[0], v[1] - dot * b[1]];
            }
            let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
            if n > 1e-12 {
                basis.push([v[0] / n, v[1] / n]);
            }
        }
        if directions.iter().any(|d| !d[0].is_finite() || !d[1].is_finite()) {
            return contract("subspace directions must be finite");
        }
        Ok(Self { origin, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn distance(&self, p: &[f64; 2]) -> f64 {
        let mut v = [p[0] - self.origin[0], p[1] - self.origin[1]];
        for b in &self.basis {
            let dot = v[0] * b[0] + v[1] * b[1];
            v = [v[0] - dot * b[0], v[1] - dot * b[1]];
        }
        (v[0] * v[0] + v[1] * v[1]).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabReport {
    pub max_deviation: f64,
    pub points: usize,
}

impl SlabReport {
    pub fn passes(&self, lambda: f64) -> bool {
        self.max_deviation <= lambda
    }
}

/// Largest distance to `subspace` among cloud points within `window` of the
/// subspace origin. The cloud is expected in a chart where the cusp sits at
/// ∞; a line cloud is read as lying on the first axis.
pub fn slab_check(cloud: &PointCloud, subspace: &AffineSubspace, window: f64) -> Result<SlabReport> {
    if !(window > 0.0) {
        return contract(format!("window radius must be positive, got {window}"));
    }
    let o = subspace.origin;
    let mut report = SlabReport { max_deviation: 0.0, points: 0 };
    for p in cloud.points() {
        if ((p[0] - o[0]).powi(2) + (p[1] - o[1]).powi(2)).sqrt() <= window {
            report.points += 1;
            report.max_deviation = report.max_deviation.max(subspace.distance(p));
        }
    }
    Ok(report)
}
