//! Explicit measure model built from the global measure formula
//! `μ(B(z, e^{-T})) = e^{-Tδ} e^{-ρ(z,T)(δ - k(z,T))}` with all comparability
//! constants set to 1.

use crate::error::{contract, Error, Result};
use crate::group::RankedHoroball;
use crate::hyperbolic::{
    cayley_boundary, dist_sq, geodesic_offset, norm_sq, BoundaryPoint, Horoball, Model, ModelPoint,
};

/// Relative slack allowed when testing tangent horoballs for overlap.
const TANGENCY_TOL: f64 = 1e-12;

/// A family of pairwise disjoint horoballs with cusp ranks.
///
/// Horoballs may be given in either model; they are evaluated in the
/// half-space, where depth below a horosphere has a closed form.
#[derive(Debug, Clone)]
pub struct CuspGeometry {
    dim: usize,
    /// As supplied, in membership-test order.
    horoballs: Vec<(Horoball, u32)>,
    half_space: Vec<Horoball>,
}

fn overlap(a: &Horoball, b: &Horoball) -> bool {
    match (a.base().is_infinity(), b.base().is_infinity()) {
        (true, true) => true,
        (true, false) => b.size() > a.size() * (1.0 + TANGENCY_TOL),
        (false, true) => a.size() > b.size() * (1.0 + TANGENCY_TOL),
        (false, false) => {
            dist_sq(a.base().chart(), b.base().chart()) < a.size() * b.size() * (1.0 - TANGENCY_TOL)
        }
    }
}

impl CuspGeometry {
    /// No cusps at all; `dim` is the dimension of hyperbolic space.
    pub fn empty(dim: usize) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return contract(format!("hyperbolic dimension must be 2 or 3, got {dim}"));
        }
        Ok(Self { dim, horoballs: Vec::new(), half_space: Vec::new() })
    }

    /// Checks ranks and pairwise disjointness (tangency allowed). The
    /// horoballs are reordered largest first: the one at ∞, then by
    /// decreasing half-space diameter, ties by base coordinates.
    pub fn new(dim: usize, horoballs: Vec<(Horoball, u32)>) -> Result<Self> {
        let mut out = Self::empty(dim)?;
        let d = dim as u32 - 1;
        let mut items: Vec<((Horoball, u32), Horoball)> = Vec::with_capacity(horoballs.len());
        for (h, k) in horoballs {
            if h.dim() != dim {
                return contract(format!("horoball of dimension {} in a geometry of dimension {dim}", h.dim()));
            }
            if !(1..=d).contains(&k) {
                return contract(format!("cusp rank {k} outside [1, {d}]"));
            }
            items.push(((h, k), h.to_model(Model::HalfSpace)));
        }
        items.sort_by(|a, b| {
            let (x, y) = (&a.1, &b.1);
            y.base()
                .is_infinity()
                .cmp(&x.base().is_infinity())
                .then(y.size().total_cmp(&x.size()))
                .then_with(|| {
                    x.base().chart().iter().zip(y.base().chart()).fold(std::cmp::Ordering::Equal, |o, (p, q)| {
                        o.then(p.total_cmp(q))
                    })
                })
        });
        // sweep along the first chart coordinate; two finite horoballs can
        // only meet when their bases are closer than the larger diameter
        let mut order: Vec<usize> = (0..items.len()).collect();
        let key = |i: usize| if items[i].1.base().is_infinity() { f64::NEG_INFINITY } else { items[i].1.base().chart()[0] };
        order.sort_by(|&i, &j| key(i).total_cmp(&key(j)));
        let s_max = items.iter().filter(|it| !it.1.base().is_infinity()).fold(0.0f64, |m, it| m.max(it.1.size()));
        for (a, &i) in order.iter().enumerate() {
            for &j in &order[a + 1..] {
                let (hi, hj) = (&items[i].1, &items[j].1);
                if !hi.base().is_infinity() && key(j) - key(i) > s_max {
                    break;
                }
                if overlap(hi, hj) {
                    return Err(Error::Geometry(format!(
                        "horoballs at {:?} and {:?} overlap",
                        items[i].0 .0.base().coords(),
                        items[j].0 .0.base().coords()
                    )));
                }
            }
        }
        for (orig, half) in items {
            out.horoballs.push(orig);
            out.half_space.push(half);
        }
        Ok(out)
    }

    /// Standard horoballs produced from a group's cusp search.
    pub fn from_ranked(dim: usize, ranked: &[RankedHoroball]) -> Result<Self> {
        Self::new(dim, ranked.iter().map(|r| (r.horoball, r.rank)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boundary_dim(&self) -> usize {
        self.dim - 1
    }

    pub fn horoballs(&self) -> &[(Horoball, u32)] {
        &self.horoballs
    }

    pub fn len(&self) -> usize {
        self.horoballs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.horoballs.is_empty()
    }

    pub fn max_rank(&self) -> u32 {
        self.horoballs.iter().map(|h| h.1).max().unwrap_or(0)
    }

    pub fn min_rank(&self) -> u32 {
        self.horoballs.iter().map(|h| h.1).min().unwrap_or(0)
    }
}

/// Value of the escape function together with the horoball it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Escape {
    pub rho: f64,
    pub rank: u32,
    /// Index into [`CuspGeometry::horoballs`], `None` outside all of them.
    pub horoball: Option<usize>,
}

impl Escape {
    const OUTSIDE: Escape = Escape { rho: 0.0, rank: 0, horoball: None };
}

#[derive(Debug, Clone)]
pub struct MeasureModel {
    delta: f64,
    geometry: CuspGeometry,
}

/// The geodesic point `z_T` on the ray from `(0, …, 0, 1)` to `z`, kept as
/// the endpoint chart plus the offset pair so that depths stay accurate
/// however deep `z_T` sits.
struct RayPoint {
    chart: [f64; 2],
    q: f64,
    /// Log of the height; the height itself underflows for T beyond ~700
    /// and its square beyond ~350.
    ln_h: f64,
    at_infinity: bool,
}

impl RayPoint {
    fn new(z: &BoundaryPoint, t: f64) -> Self {
        if z.is_infinity() {
            return Self { chart: [0.0; 2], q: 0.0, ln_h: t, at_infinity: true };
        }
        let mut chart = [0.0; 2];
        chart[..z.chart().len()].copy_from_slice(z.chart());
        let (q, _) = geodesic_offset(z.chart(), t);
        // h = (1 + |z|²) e^{-T} / (1 + |z|² e^{-2T})
        let r2 = norm_sq(z.chart());
        let ln_h = r2.ln_1p() - t - (r2 * (-2.0 * t).exp()).ln_1p();
        Self { chart, q, ln_h, at_infinity: false }
    }

    fn depth_in(&self, h: &Horoball) -> f64 {
        if h.base().is_infinity() {
            return self.ln_h - h.size().ln();
        }
        if self.at_infinity {
            // the vertical ray over the origin
            return log_depth_below(norm_sq(h.base().chart()).sqrt(), self.ln_h, h.size());
        }
        // z_T - x₀ = (z - x₀) - q z, formed in this order to keep the
        // cancellation exact when z is the base
        let base = h.base().chart();
        let (a, b) = match base.len() {
            1 => ((self.chart[0] - base[0]) - self.q * self.chart[0], 0.0),
            _ => (
                (self.chart[0] - base[0]) - self.q * self.chart[0],
                (self.chart[1] - base[1]) - self.q * self.chart[1],
            ),
        };
        log_depth_below(a.hypot(b), self.ln_h, h.size())
    }
}

/// `ln(D h / (v² + h²))` for horizontal offset `v` and height `h = e^{ln_h}`,
/// without forming `h²`.
fn log_depth_below(offset: f64, ln_h: f64, diameter: f64) -> f64 {
    let denom = if offset == 0.0 {
        2.0 * ln_h
    } else {
        let lv = offset.ln();
        let (hi, lo) = if lv > ln_h { (lv, ln_h) } else { (ln_h, lv) };
        2.0 * hi + (2.0 * (lo - hi)).exp().ln_1p()
    };
    diameter.ln() + ln_h - denom
}

impl MeasureModel {
    /// Requires `k_max/2 < δ ≤ d` for the largest rank present (`0 < δ ≤ d`
    /// without cusps).
    pub fn new(delta: f64, geometry: CuspGeometry) -> Result<Self> {
        let d = geometry.boundary_dim() as f64;
        let k_max = geometry.max_rank() as f64;
        if !(delta > 0.5 * k_max && delta > 0.0 && delta <= d) {
            return Err(Error::Validation(format!(
                "delta = {delta} outside the window ({}, {d}] for maximal rank {k_max}",
                0.5 * k_max
            )));
        }
        Ok(Self { delta, geometry })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn geometry(&self) -> &CuspGeometry {
        &self.geometry
    }

    pub fn boundary_dim(&self) -> usize {
        self.geometry.boundary_dim()
    }

    fn to_half_space(&self, z: &BoundaryPoint) -> Result<BoundaryPoint> {
        if z.dim() != self.geometry.dim {
            return contract("boundary point and geometry live in different dimensions");
        }
        Ok(match z.model() {
            Model::HalfSpace => *z,
            Model::Ball => cayley_boundary(z),
        })
    }

    /// `ρ(z, T)` and `k(z, T)`: depth of `z_T` inside the horoball that
    /// contains it and that horoball's rank, or zero outside all of them.
    pub fn escape_function(&self, z: &BoundaryPoint, t: f64) -> Result<Escape> {
        if !(t >= 0.0) {
            return contract(format!("time must be non-negative, got {t}"));
        }
        let ray = RayPoint::new(&self.to_half_space(z)?, t);
        for (i, h) in self.geometry.half_space.iter().enumerate() {
            let depth = ray.depth_in(h);
            if depth >= 0.0 {
                return Ok(Escape { rho: depth, rank: self.geometry.horoballs[i].1, horoball: Some(i) });
            }
        }
        Ok(Escape::OUTSIDE)
    }

    /// `ln μ(B(z, e^{-T})) = -Tδ - ρ(z,T)(δ - k(z,T))`.
    pub fn log_ball_measure(&self, z: &BoundaryPoint, t: f64) -> Result<f64> {
        let e = self.escape_function(z, t)?;
        Ok(-t * self.delta - e.rho * (self.delta - e.rank as f64))
    }

    pub fn model_ball_measure(&self, z: &BoundaryPoint, t: f64) -> Result<f64> {
        Ok(self.log_ball_measure(z, t)?.exp())
    }

    /// `λ^{2δ-k} |H|^δ`, with `|H|` the diameter of `H` in its own model.
    pub fn squeezed_shadow_measure(&self, h: &Horoball, rank: u32, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return contract(format!("squeeze factor must lie in (0, 1], got {lambda}"));
        }
        if h.base().is_infinity() {
            return contract("a horoball at infinity has no Euclidean diameter");
        }
        Ok(lambda.powf(2.0 * self.delta - rank as f64) * h.size().powf(self.delta))
    }

    /// Sum of `|H_p|^δ` over cusps in `B(z, e^{-t})` whose horoballs have
    /// `e^{-t} > |H_p| ≥ e^{-T}`, divided by `(T - t) μ(B(z, e^{-t}))`.
    /// Distances and diameters are taken in the ball model.
    pub fn horoball_count_diagnostic(&self, z: &BoundaryPoint, t: f64, big_t: f64) -> Result<HoroballCount> {
        if !(big_t > t && t > 0.0) {
            return contract(format!("need T > t > 0, got t = {t}, T = {big_t}"));
        }
        let zb = match z.model() {
            Model::Ball => *z,
            Model::HalfSpace => cayley_boundary(z),
        };
        let (r, lo) = ((-t).exp(), (-big_t).exp());
        let mut sum = 0.0;
        let mut count = 0;
        for (h, _) in &self.geometry.horoballs {
            let hb = h.to_model(Model::Ball);
            let s = hb.size();
            if s < r && s >= lo && dist_sq(hb.base().coords(), zb.coords()) <= r * r {
                sum += s.powf(self.delta);
                count += 1;
            }
        }
        let denom = (big_t - t) * self.model_ball_measure(z, t)?;
        Ok(HoroballCount { sum, count, ratio: sum / denom, empty: count == 0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoroballCount {
    pub sum: f64,
    pub count: usize,
    pub ratio: f64,
    /// No horoball fell in the window; the ratio is then 0.
    pub empty: bool,
}

/// Time at which the ray from the base point towards the base of `h` enters
/// `h`. Busemann functions grow at unit speed along geodesics ending at
/// their base point, so this is minus the depth of the base point itself,
/// and `ρ(p, T) = T - S` afterwards.
pub fn cusp_entry_time(h: &Horoball) -> f64 {
    let o = ModelPoint::origin(h.model(), h.dim());
    -h.depth(&o).expect("same model and dimension")
}
