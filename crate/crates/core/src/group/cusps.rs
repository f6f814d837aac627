use std::collections::HashMap;

use super::orbit::{walk_words, DEFAULT_ORBIT_CAP};
use super::{GroupPresentation, Word};
use crate::error::{contract, Error, Result};
use crate::hyperbolic::{horoball_image, BoundaryPoint, Horoball, IsometryKind, MobiusIsometry, Model};

/// Euclidean threshold below which two cusp points are merged.
pub const CUSP_DEDUP_TOL: f64 = 1e-8;

/// A parabolic fixed point found by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct Cusp {
    pub point: BoundaryPoint,
    pub rank: u32,
    /// Parabolic word fixing `point`.
    pub witness: Word,
    /// Index of the declared cusp whose orbit contains `point`.
    pub declared: usize,
    /// Word `h` with `point = h(declared point)`.
    pub orbit_word: Word,
}

#[derive(Debug, Clone, Default)]
pub struct CuspSearch {
    pub cusps: Vec<Cusp>,
    /// Words whose trace sits just outside the parabolic band.
    pub ambiguous: Vec<Word>,
    /// Parabolic words whose fixed point is not in the enumerated orbit of
    /// any declared cusp, so no rank can be inherited.
    pub unmatched: Vec<Word>,
}

/// Spatial hash of boundary points for merging within [`CUSP_DEDUP_TOL`].
pub(crate) struct PointIndex<V> {
    cells: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<BoundaryPoint>,
    values: Vec<V>,
    infinity: Option<usize>,
}

fn tol_for(p: &BoundaryPoint) -> f64 {
    let scale = p.chart().iter().fold(1.0f64, |m, x| m.max(x.abs()));
    CUSP_DEDUP_TOL * scale
}

impl<V> PointIndex<V> {
    pub fn new() -> Self {
        Self { cells: HashMap::new(), points: Vec::new(), values: Vec::new(), infinity: None }
    }

    fn cell(p: &BoundaryPoint) -> (i64, i64) {
        let c = p.chart();
        let q = |x: f64| (x / CUSP_DEDUP_TOL).floor() as i64;
        (q(c[0]), c.get(1).map_or(0, |&y| q(y)))
    }

    pub fn find(&self, p: &BoundaryPoint) -> Option<usize> {
        if p.is_infinity() {
            return self.infinity;
        }
        let tol = tol_for(p);
        let reach = (tol / CUSP_DEDUP_TOL).ceil() as i64;
        let (cx, cy) = Self::cell(p);
        let ry = if p.chart().len() > 1 { reach } else { 0 };
        let mut best: Option<(f64, usize)> = None;
        // for very large coordinates the relative tolerance spans many
        // cells; fall back to a linear scan there
        if reach > 4 {
            for (i, q) in self.points.iter().enumerate() {
                if let Some(d) = p.euclidean_distance(q) {
                    if d <= tol && best.map_or(true, |(bd, _)| d < bd) {
                        best = Some((d, i));
                    }
                }
            }
            return best.map(|b| b.1);
        }
        for dx in -reach..=reach {
            for dy in -ry..=ry {
                if let Some(ids) = self.cells.get(&(cx.saturating_add(dx), cy.saturating_add(dy))) {
                    for &i in ids {
                        let d = p.euclidean_distance(&self.points[i]).unwrap_or(f64::INFINITY);
                        if d <= tol && best.map_or(true, |(bd, bi)| d < bd || (d == bd && i < bi)) {
                            best = Some((d, i));
                        }
                    }
                }
            }
        }
        best.map(|b| b.1)
    }

    /// Inserts `p` unless a point within tolerance is present; returns the
    /// index of the stored point and whether it was new.
    pub fn insert(&mut self, p: BoundaryPoint, v: V) -> (usize, bool) {
        if let Some(i) = self.find(&p) {
            return (i, false);
        }
        let i = self.points.len();
        if p.is_infinity() {
            self.infinity = Some(i);
        } else {
            self.cells.entry(Self::cell(&p)).or_default().push(i);
        }
        self.points.push(p);
        self.values.push(v);
        (i, true)
    }

    pub fn value(&self, i: usize) -> &V {
        &self.values[i]
    }
}

enum Visit {
    Plain,
    Parabolic(BoundaryPoint),
    Ambiguous,
}

/// Parabolic fixed points of all reduced words of length ≤ `max_len`, with
/// ranks inherited from the declared cusps.
pub fn find_parabolic_cusps(group: &GroupPresentation, max_len: usize) -> Result<CuspSearch> {
    let declared = group.declared_cusps();
    let walk = walk_words(group, max_len, DEFAULT_ORBIT_CAP, |node| {
        let g = node.element;
        let images: Vec<BoundaryPoint> =
            declared.iter().map(|c| g.apply_boundary(&c.point).expect("matching dimensions")).collect();
        let (kind, ambiguous) = g.classify_with_margin();
        let visit = match kind {
            IsometryKind::Parabolic => Visit::Parabolic(g.fixed_points()[0]),
            _ if ambiguous => Visit::Ambiguous,
            _ => Visit::Plain,
        };
        (images, visit)
    })?;

    // orbit of the declared cusps; the first (shortest) word reaching a point wins
    let mut orbit: PointIndex<(usize, usize)> = PointIndex::new();
    for (i, (images, _)) in walk.values.iter().enumerate() {
        for (j, p) in images.iter().enumerate() {
            orbit.insert(*p, (j, i));
        }
    }

    let mut out = CuspSearch::default();
    let mut seen: PointIndex<()> = PointIndex::new();
    for (i, (_, visit)) in walk.values.iter().enumerate() {
        match visit {
            Visit::Plain => {}
            Visit::Ambiguous => out.ambiguous.push(walk.word(i)),
            Visit::Parabolic(p) => {
                if seen.find(p).is_some() {
                    continue;
                }
                match orbit.find(p) {
                    Some(k) => {
                        let (j, h) = *orbit.value(k);
                        seen.insert(*p, ());
                        out.cusps.push(Cusp {
                            point: *p,
                            rank: declared[j].rank,
                            witness: walk.word(i),
                            declared: j,
                            orbit_word: walk.word(h),
                        });
                    }
                    None => out.unmatched.push(walk.word(i)),
                }
            }
        }
    }
    Ok(out)
}

/// A horoball of the standard family with the rank of its cusp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedHoroball {
    pub horoball: Horoball,
    pub rank: u32,
}

/// Largest factor `λ ≤ 1` such that scaling every finite horoball diameter by
/// `λ` (and dividing the height at ∞ by `λ`) leaves the family with
/// pairwise disjoint interiors, none containing the base point `(0, …, 0, 1)`.
/// Uniform scaling is the same hyperbolic shrink for every horoball, so it
/// preserves equivariance.
pub fn disjointness_scale(horoballs: &[Horoball]) -> Result<f64> {
    let mut lambda = 1.0f64;
    let mut finite: Vec<(&[f64], f64)> = Vec::new();
    let mut at_infinity: Option<f64> = None;
    for h in horoballs {
        if h.model() != Model::HalfSpace {
            return contract("standard horoballs are kept in the half-space model");
        }
        if h.base().is_infinity() {
            if at_infinity.is_some() {
                return Err(Error::Geometry("two horoballs based at infinity".into()));
            }
            at_infinity = Some(h.size());
            lambda = lambda.min(h.size());
        } else {
            let x = h.base().chart();
            let s = h.size();
            let norm_sq: f64 = x.iter().map(|v| v * v).sum();
            lambda = lambda.min((norm_sq + 1.0) / s);
            finite.push((x, s));
        }
    }
    if let Some(height) = at_infinity {
        for &(_, s) in &finite {
            lambda = lambda.min((height / s).sqrt());
        }
    }
    finite.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]));
    let s_max = finite.iter().fold(0.0f64, |m, f| m.max(f.1));
    for (i, &(x1, s1)) in finite.iter().enumerate() {
        for &(x2, s2) in &finite[i + 1..] {
            let dx = x2[0] - x1[0];
            if dx * dx >= s1 * s_max {
                break;
            }
            let d2: f64 = x1.iter().zip(x2).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 < s1 * s2 {
                lambda = lambda.min((d2 / (s1 * s2)).sqrt());
            }
        }
    }
    if !(lambda > 0.0) {
        return Err(Error::Geometry("coincident horoball bases: duplicate cusps were not merged".into()));
    }
    Ok(lambda)
}

/// One horoball per cusp: declared cusps get the horoball of diameter 1
/// (height 1 at ∞), every other cusp the image of its declared cusp's
/// horoball under the orbit word, then the whole family is shrunk by
/// [`disjointness_scale`].
pub fn assign_standard_horoballs(group: &GroupPresentation, search: &CuspSearch) -> Result<Vec<RankedHoroball>> {
    let declared = group.declared_cusps();
    let mut raw = Vec::with_capacity(search.cusps.len());
    for cusp in &search.cusps {
        let q = &declared[cusp.declared];
        let h0 = Horoball::new(q.point, 1.0)?;
        let h = cusp.orbit_word.evaluate(group)?;
        let img = horoball_image(&h, &h0)?;
        raw.push(Horoball::new(cusp.point, img.size())?);
    }
    let lambda = disjointness_scale(&raw)?;
    raw.iter()
        .zip(&search.cusps)
        .map(|(h, c)| Ok(RankedHoroball { horoball: if lambda < 1.0 { h.squeezed(lambda)? } else { *h }, rank: c.rank }))
        .collect()
}

/// One row of [`cusp_horoball_scaling_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n: u64,
    /// `|f^n(p') - p| · n`
    pub distance_scaled: f64,
    /// `|f^n(H)| · n²`
    pub size_scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// max / min of `distance_scaled` over the rows.
    pub distance_band: f64,
    /// max / min of `size_scaled` over the rows.
    pub size_band: f64,
}

/// Tracks how the images of a horoball under powers of a parabolic `f`
/// approach its fixed point `p`: distances should fall like `1/n` and
/// diameters like `1/n²`.
pub fn cusp_horoball_scaling_check(
    f: &MobiusIsometry,
    p: &BoundaryPoint,
    h: &Horoball,
    ns: impl IntoIterator<Item = u64>,
) -> Result<ScalingReport> {
    if f.classify() != IsometryKind::Parabolic {
        return contract("scaling check needs a parabolic isometry");
    }
    if h.base().euclidean_distance(p).map_or(false, |d| d <= CUSP_DEDUP_TOL) {
        return contract("the horoball must not be based at the fixed point");
    }
    let mut rows = Vec::new();
    for n in ns {
        if n < 2 {
            return contract("the scaling statement is asymptotic; use n ≥ 2");
        }
        let fnn = f.pow(n as i64);
        let img = horoball_image(&fnn, h)?;
        let dist = img
            .base()
            .euclidean_distance(p)
            .ok_or_else(|| Error::Geometry("image reached infinity; measure in the ball model".into()))?;
        let nf = n as f64;
        rows.push(ScalingRow { n, distance_scaled: dist * nf, size_scaled: img.size() * nf * nf });
    }
    let band = |vals: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = vals.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi / lo
    };
    let distance_band = band(&mut rows.iter().map(|r| r.distance_scaled));
    let size_band = band(&mut rows.iter().map(|r| r.size_scaled));
    Ok(ScalingReport { rows, distance_band, size_band })
}
