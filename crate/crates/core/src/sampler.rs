//! Finite point clouds approximating limit sets and reference sets.

use std::collections::HashMap;

use crate::error::{contract, Error, Result};
use crate::group::{walk_words, GroupPresentation, PointIndex, DEFAULT_ORBIT_CAP};
use crate::hyperbolic::{BoundaryPoint, IsometryKind};

/// A region where a cloud is known not to be dense.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// The closed ball `|x - center| ≤ radius`.
    Ball { center: [f64; 2], radius: f64 },
    /// Everything outside the open ball `|x - center| < radius`.
    Outside { center: [f64; 2], radius: f64 },
}

fn dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

impl Region {
    /// Whether the closed ball `B(x, r)` meets the region.
    pub fn meets_ball(&self, x: &[f64; 2], r: f64) -> bool {
        match self {
            Region::Ball { center, radius } => dist(center, x) <= radius + r,
            Region::Outside { center, radius } => dist(center, x) + r >= *radius,
        }
    }
}

/// Finite sample of a subset of R¹ or R². Points are stored sorted and
/// deduplicated at spacing `resolution / 10`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    points: Vec<[f64; 2]>,
    resolution: f64,
    provenance: String,
    flagged: Vec<Region>,
}

impl PointCloud {
    pub fn new(
        dim: usize,
        mut points: Vec<[f64; 2]>,
        resolution: f64,
        provenance: impl Into<String>,
        flagged: Vec<Region>,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return contract(format!("cloud dimension must be 1 or 2, got {dim}"));
        }
        if points.is_empty() {
            return Err(Error::Geometry("point cloud is empty".into()));
        }
        if !(resolution > 0.0) || !resolution.is_finite() {
            return contract(format!("cloud resolution must be positive, got {resolution}"));
        }
        if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite() || (dim == 1 && p[1] != 0.0)) {
            return contract("cloud points must be finite and lie in the chart");
        }
        points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        let points = dedupe(points, dim, resolution / 10.0);
        Ok(Self { dim, points, resolution, provenance: provenance.into(), flagged })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn flagged(&self) -> &[Region] {
        &self.flagged
    }

    /// True when `B(x, r)` meets a flagged region.
    pub fn is_flagged(&self, x: &[f64; 2], r: f64) -> bool {
        self.flagged.iter().any(|f| f.meets_ball(x, r))
    }

    /// Diameter of the bounding box (an upper bound within √2 of the true
    /// diameter in the plane, exact on the line).
    pub fn diameter(&self) -> f64 {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &self.points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt()
    }

    /// Distance from each point to its nearest neighbour in the cloud
    /// (∞ for a single point).
    pub fn nearest_neighbour_gaps(&self) -> Vec<f64> {
        nn_gaps(&self.points, self.dim)
    }
}

fn dedupe(points: Vec<[f64; 2]>, dim: usize, spacing: f64) -> Vec<[f64; 2]> {
    if dim == 1 {
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(points.len());
        for p in points {
            if out.last().map_or(true, |q| p[0] - q[0] >= spacing) {
                out.push(p);
            }
        }
        return out;
    }
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(points.len());
    let cell = |p: &[f64; 2]| ((p[0] / spacing).floor() as i64, (p[1] / spacing).floor() as i64);
    for p in points {
        let (cx, cy) = cell(&p);
        let close = (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                grid.get(&(cx + dx, cy + dy)).map_or(false, |ids| ids.iter().any(|&i| dist(&out[i], &p) < spacing))
            })
        });
        if !close {
            grid.entry((cx, cy)).or_default().push(out.len());
            out.push(p);
        }
    }
    out
}

fn nn_gaps(points: &[[f64; 2]], dim: usize) -> Vec<f64> {
    let n = points.len();
    if dim == 1 {
        return (0..n)
            .map(|i| {
                let l = if i > 0 { points[i][0] - points[i - 1][0] } else { f64::INFINITY };
                let r = if i + 1 < n { points[i + 1][0] - points[i][0] } else { f64::INFINITY };
                l.min(r)
            })
            .collect();
    }
    // expanding-ring search on a grid sized for ~1 point per cell
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let area = ((hi[0] - lo[0]) * (hi[1] - lo[1])).max(1e-300);
    let side = (area / n as f64).sqrt().max(1e-300);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let cell = |p: &[f64; 2]| (((p[0] - lo[0]) / side).floor() as i64, ((p[1] - lo[1]) / side).floor() as i64);
    for (i, p) in points.iter().enumerate() {
        grid.entry(cell(p)).or_default().push(i);
    }
    let span = (((hi[0] - lo[0]).max(hi[1] - lo[1])) / side).ceil() as i64 + 1;
    (0..n)
        .map(|i| {
            let (cx, cy) = cell(&points[i]);
            let mut best = f64::INFINITY;
            for ring in 0..=span {
                // anything found in ring k is within (k+1)·side·√2; stop once
                // the ring's inner edge is beyond the best distance
                if (ring - 1) as f64 * side > best {
                    break;
                }
                for dx in -ring..=ring {
                    for dy in -ring..=ring {
                        if dx.abs() != ring && dy.abs() != ring {
                            continue;
                        }
                        if let Some(ids) = grid.get(&(cx + dx, cy + dy)) {
                            for &j in ids {
                                if j != i {
                                    best = best.min(dist(&points[i], &points[j]));
                                }
                            }
                        }
                    }
                }
            }
            best
        })
        .collect()
}

fn chart_point(p: &BoundaryPoint) -> Option<[f64; 2]> {
    if p.is_infinity() {
        return None;
    }
    let c = p.chart();
    Some([c[0], c.get(1).copied().unwrap_or(0.0)])
}

/// Generator fixed points and declared cusps: the points whose orbits are sampled.
fn seed_points(group: &GroupPresentation) -> Vec<BoundaryPoint> {
    let mut seeds: PointIndex<()> = PointIndex::new();
    let mut out = Vec::new();
    let candidates = group.generators().iter().flat_map(|g| g.fixed_points()).chain(group.declared_cusps().iter().map(|c| c.point));
    for p in candidates {
        if seeds.insert(p, ()).1 {
            out.push(p);
        }
    }
    out
}

/// Chart window: when ∞ is a seed the chart stretches the set near ∞, so
/// only the ball of radius `max(|v|/2, 2 max |finite seed|)` about 0 is
/// treated as sampled (`v` the translation of a declared cusp at ∞).
fn chart_window(group: &GroupPresentation, seeds: &[BoundaryPoint]) -> Option<f64> {
    if !seeds.iter().any(|p| p.is_infinity()) {
        return None;
    }
    let reach = seeds.iter().filter_map(chart_point).map(|x| dist(&x, &[0.0, 0.0])).fold(0.0, f64::max);
    let strip = translation_at_infinity(group).map_or(0.0, |v| 0.5 * v);
    let radius = strip.max(2.0 * reach);
    (radius > 0.0).then_some(radius)
}

fn in_window(window: Option<f64>, x: &[f64; 2]) -> bool {
    window.map_or(true, |r| dist(x, &[0.0, 0.0]) < r)
}

/// Largest pairwise distance; ∞ if any point is missing (at ∞).
fn spread(pts: &[Option<[f64; 2]>]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        let Some(a) = a else { return f64::INFINITY };
        for b in pts[i + 1..].iter().flatten() {
            d = d.max(dist(a, b));
        }
    }
    d
}

fn sort_points(v: &mut [[f64; 2]]) {
    v.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
}

/// Images of the generators' fixed points and the declared cusps under every
/// reduced word of length ≤ `max_len`, in the boundary chart of the
/// half-space (∞ is omitted).
///
/// The resolution is the largest spread of the seed images under a word of
/// length exactly `max_len` inside the chart window: every limit point lies
/// in such a deepest cylinder and the seed images span it. Flagged as
/// under-sampled: the outside of the chart window (see [`chart_window`]),
/// and the truncated parabolic tail around each cusp image whose hole
/// (twice its nearest-neighbour gap) is wider than the resolution.
pub fn sample_limit_set(group: &GroupPresentation, max_len: usize) -> Result<PointCloud> {
    let dim = group.dim() - 1;
    let seeds = seed_points(group);
    let window = chart_window(group, &seeds);
    let cusp_seed: Vec<bool> = seeds.iter().map(|p| group.declared_cusps().iter().any(|c| c.point == *p)).collect();
    let walk = walk_words(group, max_len, DEFAULT_ORBIT_CAP, |node| {
        let g = node.element;
        let pts: Vec<Option<[f64; 2]>> =
            seeds.iter().map(|p| chart_point(&g.apply_boundary(p).expect("matching dimensions"))).collect();
        (node.len, pts)
    })?;
    let mut omitted = 0usize;
    let mut points = Vec::new();
    let mut cusp_points = Vec::new();
    let mut resolution: f64 = 0.0;
    for (len, pts) in &walk.values {
        if *len == max_len && pts.iter().flatten().any(|x| in_window(window, x)) {
            let s = spread(pts);
            if s.is_finite() {
                resolution = resolution.max(s);
            }
        }
        for (p, &is_cusp) in pts.iter().zip(&cusp_seed) {
            match p {
                Some(x) => {
                    points.push(*x);
                    if is_cusp {
                        cusp_points.push(*x);
                    }
                }
                None => omitted += 1,
            }
        }
    }
    if points.is_empty() {
        return Err(Error::Geometry(format!("group '{}' has no finite limit points to sample", group.name())));
    }
    if !(resolution > 0.0) {
        resolution = 1.0;
    }
    let mut sorted = points.clone();
    sort_points(&mut sorted);
    sorted.dedup();
    let gaps = nn_gaps(&sorted, dim);
    sort_points(&mut cusp_points);
    cusp_points.dedup();
    let mut flagged: Vec<Region> = Vec::new();
    for c in &cusp_points {
        let i = sorted
            .binary_search_by(|p| p[0].total_cmp(&c[0]).then(p[1].total_cmp(&c[1])))
            .expect("cusp images are among the sampled points");
        let hole = 2.0 * gaps[i];
        if hole.is_finite() && hole > resolution && in_window(window, c) {
            flagged.push(Region::Ball { center: *c, radius: hole });
        }
    }
    if let Some(radius) = window {
        flagged.push(Region::Outside { center: [0.0, 0.0], radius });
    }
    let provenance = format!(
        "limit set of {} from reduced words of length <= {max_len}; {} seed points; {omitted} images at infinity omitted",
        group.name(),
        seeds.len()
    );
    PointCloud::new(dim, points, resolution, provenance, flagged)
}

/// Default cap on the number of cylinders visited by the adaptive sampler.
pub const DEFAULT_ADAPTIVE_CAP: usize = 20_000_000;

/// Images of the seed points under words chosen by cylinder size rather than
/// word length: a word `w` ending in letter `l` is extended while the chart
/// spread of `w(S_l)` exceeds `eps`, where `S_l` holds the images of the
/// seeds under the letters that may follow `l`. Parabolic tails are thereby
/// followed until their remaining extent is below `eps`.
///
/// Only points inside the chart window are kept; the outside of the window
/// is flagged. The reported resolution is the largest spread of a leaf
/// cylinder inside the window (at most `eps`).
pub fn sample_limit_set_adaptive(group: &GroupPresentation, eps: f64, cap: usize) -> Result<PointCloud> {
    if !(eps > 0.0) {
        return contract(format!("sampling resolution must be positive, got {eps}"));
    }
    let dim = group.dim() - 1;
    let seeds = seed_points(group);
    let window = chart_window(group, &seeds);
    let n = group.generators().len();
    let letters: Vec<i8> = (1..=n as i8).flat_map(|i| [i, -i]).collect();
    let mats: Vec<_> = letters.iter().map(|&l| group.letter(l)).collect::<Result<_>>()?;
    // reference points of the cylinder of each letter
    let refs: Vec<Vec<BoundaryPoint>> = letters
        .iter()
        .map(|&l| {
            letters
                .iter()
                .zip(&mats)
                .filter(|(&u, _)| u != -l)
                .flat_map(|(_, m)| seeds.iter().map(move |q| m.apply_boundary(q).expect("matching dimensions")))
                .collect()
        })
        .collect();

    let mut points: Vec<[f64; 2]> = seeds.iter().filter_map(chart_point).filter(|x| in_window(window, x)).collect();
    let mut omitted = seeds.len() - points.len();
    let mut resolution: f64 = 0.0;
    let mut visited = 0usize;
    // depth-first over (element, index of last letter)
    let mut stack: Vec<(crate::hyperbolic::MobiusIsometry, usize, u32)> = Vec::new();
    for (i, m) in mats.iter().enumerate() {
        stack.push((*m, i, 1));
    }
    let inverse_of = |i: usize| i ^ 1;
    while let Some((g, li, depth)) = stack.pop() {
        visited += 1;
        if visited > cap {
            return Err(Error::CapExceeded { requested: visited as u128, cap });
        }
        let g = if depth % 8 == 0 { g.renormalized() } else { g };
        let cyl: Vec<Option<[f64; 2]>> =
            refs[li].iter().map(|q| chart_point(&g.apply_boundary(q).expect("matching dimensions"))).collect();
        if !cyl.iter().flatten().any(|x| in_window(window, x)) {
            continue;
        }
        for q in &seeds {
            match chart_point(&g.apply_boundary(q)?) {
                Some(x) if in_window(window, &x) => points.push(x),
                _ => omitted += 1,
            }
        }
        let s = spread(&cyl);
        if s > eps {
            for (j, m) in mats.iter().enumerate() {
                if j != inverse_of(li) {
                    stack.push((g * *m, j, depth + 1));
                }
            }
        } else {
            resolution = resolution.max(s);
        }
    }
    if points.is_empty() {
        return Err(Error::Geometry(format!("group '{}' has no finite limit points to sample", group.name())));
    }
    let resolution = if resolution > 0.0 { resolution } else { eps };
    let mut flagged = Vec::new();
    if let Some(radius) = window {
        flagged.push(Region::Outside { center: [0.0, 0.0], radius });
    }
    let provenance = format!(
        "limit set of {} refined to cylinder spread <= {eps}; {visited} cylinders; {} seed points; {omitted} images at infinity or outside the chart window omitted",
        group.name(),
        seeds.len()
    );
    PointCloud::new(dim, points, resolution, provenance, flagged)
}

/// Length of the shortest declared translation fixing ∞, if any.
fn translation_at_infinity(group: &GroupPresentation) -> Option<f64> {
    group
        .declared_cusps()
        .iter()
        .filter(|c| c.point.is_infinity())
        .flat_map(|c| c.witnesses.iter())
        .filter_map(|w| {
            let g = w.evaluate(group).ok()?;
            if g.classify() != IsometryKind::Parabolic {
                return None;
            }
            let [a, b, _, d] = g.entries();
            Some((b / d).norm().min((b * a).norm()))
        })
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))))
}

/// `{m / |m|² : m ∈ Z^k, 1 ≤ |m|∞ ≤ n} ∪ {0}`.
///
/// The resolution is the largest distance from a point of the next shell
/// `|m|∞ = n + 1` to the cloud; the ball of radius `1/n` about 0, which
/// holds every omitted point, is flagged.
pub fn synth_inverted_lattice(k: usize, n: usize) -> Result<PointCloud> {
    if k != 1 && k != 2 {
        return contract(format!("lattice rank must be 1 or 2, got {k}"));
    }
    if n < 1 {
        return contract("lattice truncation must be at least 1");
    }
    let ni = n as i64;
    let inv = |m: (i64, i64)| -> [f64; 2] {
        let (x, y) = (m.0 as f64, m.1 as f64);
        let r2 = x * x + y * y;
        [x / r2, y / r2]
    };
    let mut points = vec![[0.0, 0.0]];
    let mut resolution: f64 = 0.0;
    if k == 1 {
        for m in 1..=ni {
            points.push(inv((m, 0)));
            points.push(inv((-m, 0)));
        }
        resolution = 1.0 / (ni * (ni + 1)) as f64;
    } else {
        for a in -ni..=ni {
            for b in -ni..=ni {
                if (a, b) != (0, 0) {
                    points.push(inv((a, b)));
                }
            }
        }
        let outer = ni + 1;
        for a in -outer..=outer {
            for b in -outer..=outer {
                if a.abs().max(b.abs()) != outer {
                    continue;
                }
                let p = inv((a, b));
                let mut best = dist(&p, &[0.0, 0.0]);
                for da in -1..=1 {
                    for db in -1..=1 {
                        let m = (a + da, b + db);
                        if m != (0, 0) && m.0.abs().max(m.1.abs()) <= ni {
                            best = best.min(dist(&p, &inv(m)));
                        }
                    }
                }
                resolution = resolution.max(best);
            }
        }
    }
    let flagged = vec![Region::Ball { center: [0.0, 0.0], radius: 1.0 / n as f64 }];
    let provenance = format!("inverted Z^{k} lattice, 1 <= |m|inf <= {n}; ball of radius 1/{n} about 0 is truncated");
    PointCloud::new(k, points, resolution, provenance, flagged)
}

/// `{0} ∪ {1/j : 1 ≤ j ≤ n}`. The resolution is the gap `1/(n(n+1))` to the
/// first omitted point; the tail `[0, 1/n]` is flagged.
pub fn synth_reciprocal_set(n: usize) -> Result<PointCloud> {
    if n < 1 {
        return contract("reciprocal set needs n >= 1");
    }
    let mut points = vec![[0.0, 0.0]];
    points.extend((1..=n).map(|j| [1.0 / j as f64, 0.0]));
    let nf = n as f64;
    let resolution = 1.0 / (nf * (nf + 1.0));
    let tail = 0.5 / nf;
    let flagged = vec![Region::Ball { center: [tail, 0.0], radius: tail }];
    let provenance = format!("reciprocal set 1/j, 1 <= j <= {n}, with 0; tail [0, 1/{n}] is truncated");
    PointCloud::new(1, points, resolution, provenance, flagged)
}
