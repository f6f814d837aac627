use super::point::{dist_sq, norm_sq, BoundaryPoint, Model, ModelPoint};
use crate::error::{contract, Result};

fn same_space(p: &ModelPoint, q: &ModelPoint) -> Result<()> {
    if p.model() != q.model() || p.dim() != q.dim() {
        return contract(format!(
            "points live in different spaces ({:?}/{} vs {:?}/{})",
            p.model(),
            p.dim(),
            q.model(),
            q.dim()
        ));
    }
    Ok(())
}

/// Hyperbolic distance between two points of the same model.
///
/// Uses the half-angle forms `2 asinh(...)` of the arccosh formulas, which
/// keep full relative precision for nearby points.
pub fn hyperbolic_distance(p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    same_space(p, q)?;
    let chord = dist_sq(p.coords(), q.coords()).sqrt();
    if chord == 0.0 {
        return Ok(0.0);
    }
    let d = match p.model() {
        Model::Ball => {
            let cp = 1.0 - norm_sq(p.coords());
            let cq = 1.0 - norm_sq(q.coords());
            2.0 * (chord / (cp * cq).sqrt()).asinh()
        }
        Model::HalfSpace => 2.0 * (chord / (2.0 * (p.height() * q.height()).sqrt())).asinh(),
    };
    Ok(d)
}

/// Hyperbolic distance in the ball from the cross ratio of `P`, `Q` and the
/// endpoints `A`, `B` of the geodesic through them:
/// `|log(|AQ||BP| / (|AP||BQ|))|`. Swapping `A` and `B` flips the sign, so
/// the labelling does not matter.
///
/// Works in the plane spanned by the origin, `P` and `Q`.
pub fn cross_ratio_distance(p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    same_space(p, q)?;
    if p.model() != Model::Ball {
        return contract("cross-ratio distance is evaluated in the ball model");
    }
    if dist_sq(p.coords(), q.coords()) == 0.0 {
        return Ok(0.0);
    }
    let (p2, q2) = planar_frame(p.coords(), q.coords());
    let cross = p2[0] * q2[1] - p2[1] * q2[0];
    let (a, b) = if cross.abs() <= 1e-14 * (norm_sq(&p2) * norm_sq(&q2)).sqrt().max(1e-300) {
        // P, Q and the origin are collinear: the geodesic is a diameter.
        let dir = if norm_sq(&p2) >= norm_sq(&q2) { p2 } else { q2 };
        let n = norm_sq(&dir).sqrt();
        let u = [dir[0] / n, dir[1] / n];
        ([u[0], u[1]], [-u[0], -u[1]])
    } else {
        // Circle orthogonal to the unit circle: 2 c·X = 1 + |X|² for X = P, Q.
        let rp = 0.5 * (1.0 + norm_sq(&p2));
        let rq = 0.5 * (1.0 + norm_sq(&q2));
        let c = [(rp * q2[1] - rq * p2[1]) / cross, (p2[0] * rq - q2[0] * rp) / cross];
        let c2 = norm_sq(&c);
        let foot = [c[0] / c2, c[1] / c2];
        let h = (1.0 - 1.0 / c2).max(0.0).sqrt() / c2.sqrt();
        let perp = [-c[1], c[0]];
        (
            [foot[0] + h * perp[0], foot[1] + h * perp[1]],
            [foot[0] - h * perp[0], foot[1] - h * perp[1]],
        )
    };
    let d = |x: [f64; 2], y: [f64; 2]| dist_sq(&x, &y).sqrt();
    Ok(((d(a, q2) * d(b, p2)) / (d(a, p2) * d(b, q2))).ln().abs())
}

/// Coordinates of `p`, `q` in an orthonormal frame of a plane containing
/// the origin and both points.
fn planar_frame(p: &[f64], q: &[f64]) -> ([f64; 2], [f64; 2]) {
    if p.len() == 2 {
        return ([p[0], p[1]], [q[0], q[1]]);
    }
    let anchor = if norm_sq(p) >= norm_sq(q) { p } else { q };
    let n = norm_sq(anchor).sqrt();
    let e1: Vec<f64> = if n > 0.0 { anchor.iter().map(|x| x / n).collect() } else { vec![1.0, 0.0, 0.0] };
    let other = if std::ptr::eq(anchor, p) { q } else { p };
    let along: f64 = other.iter().zip(&e1).map(|(a, b)| a * b).sum();
    let mut rest: Vec<f64> = other.iter().zip(&e1).map(|(o, e)| o - along * e).collect();
    let rn = norm_sq(&rest).sqrt();
    if rn > 0.0 {
        rest.iter_mut().for_each(|x| *x /= rn);
    } else {
        // any unit vector orthogonal to e1
        let pick = if e1[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let dot: f64 = pick.iter().zip(&e1).map(|(a, b)| a * b).sum();
        rest = pick.iter().zip(&e1).map(|(a, e)| a - dot * e).collect();
        let m = norm_sq(&rest).sqrt();
        rest.iter_mut().for_each(|x| *x /= m);
    }
    let proj = |x: &[f64]| -> [f64; 2] {
        [
            x.iter().zip(&e1).map(|(a, b)| a * b).sum(),
            x.iter().zip(&rest).map(|(a, b)| a * b).sum(),
        ]
    };
    (proj(p), proj(q))
}

/// Cayley map between the half-space and the ball, in either direction.
///
/// The map is the inversion `x ↦ -e_n + 2 (x + e_n) / |x + e_n|²` in the
/// sphere of radius √2 about `-e_n`; it is its own inverse, sends the
/// half-space base point `e_n` to the centre of the ball, and sends ∞ to
/// [`cayley_infinity_image`]`(dim) = -e_n`.
pub fn cayley_point(x: &ModelPoint) -> ModelPoint {
    let n = x.dim();
    let y = invert(x.coords());
    let target = match x.model() {
        Model::Ball => Model::HalfSpace,
        Model::HalfSpace => Model::Ball,
    };
    let mut coords = [0.0; 3];
    coords[..n].copy_from_slice(&y[..n]);
    match target {
        Model::HalfSpace => coords[n - 1] = coords[n - 1].max(f64::MIN_POSITIVE),
        Model::Ball => {
            let r = norm_sq(&coords[..n]);
            if r >= 1.0 {
                // rounding on the boundary; pull back inside
                let s = (1.0 - 1e-16) / r.sqrt();
                coords.iter_mut().for_each(|c| *c *= s);
            }
        }
    }
    ModelPoint::new_unchecked(target, n, coords)
}

fn invert(x: &[f64]) -> [f64; 3] {
    let n = x.len();
    let mut shifted = [0.0; 3];
    shifted[..n].copy_from_slice(x);
    shifted[n - 1] += 1.0;
    let r2 = norm_sq(&shifted[..n]);
    let mut out = [0.0; 3];
    for i in 0..n {
        out[i] = 2.0 * shifted[i] / r2;
    }
    out[n - 1] -= 1.0;
    out
}

/// The boundary point of the ball that the Cayley map sends ∞ to.
pub fn cayley_infinity_image(dim: usize) -> BoundaryPoint {
    let mut coords = [0.0; 3];
    coords[dim - 1] = -1.0;
    BoundaryPoint::new_unchecked(Model::Ball, dim, coords, false)
}

/// Cayley map on the sphere at infinity, in either direction.
pub fn cayley_boundary(x: &BoundaryPoint) -> BoundaryPoint {
    let n = x.dim();
    match x.model() {
        Model::HalfSpace => {
            if x.is_infinity() {
                return cayley_infinity_image(n);
            }
            let mut y = invert(x.coords());
            let r = norm_sq(&y[..n]).sqrt();
            y.iter_mut().for_each(|c| *c /= r);
            BoundaryPoint::new_unchecked(Model::Ball, n, y, false)
        }
        Model::Ball => {
            let c = x.coords();
            let gap = 1.0 + c[n - 1];
            if gap <= 1e-300 || dist_sq(c, cayley_infinity_image(n).coords()) == 0.0 {
                return BoundaryPoint::new_unchecked(Model::HalfSpace, n, [0.0; 3], true);
            }
            let mut y = invert(c);
            y[n - 1] = 0.0;
            BoundaryPoint::new_unchecked(Model::HalfSpace, n, y, false)
        }
    }
}

/// Point at hyperbolic distance `t` from the centre of the ball along the
/// radius towards `z`. Half-space inputs are carried to the ball first.
pub fn geodesic_point(z: &BoundaryPoint, t: f64) -> Result<ModelPoint> {
    if !(t >= 0.0) {
        return contract(format!("geodesic time must be non-negative, got {t}"));
    }
    let zb = match z.model() {
        Model::Ball => *z,
        Model::HalfSpace => cayley_boundary(z),
    };
    let s = (0.5 * t).tanh();
    let mut coords = zb.raw();
    coords.iter_mut().for_each(|c| *c *= s);
    if norm_sq(&coords[..zb.dim()]) >= 1.0 {
        return contract(format!("geodesic time {t} is beyond double precision in the ball"));
    }
    Ok(ModelPoint::new_unchecked(Model::Ball, zb.dim(), coords))
}

/// Offset of the geodesic point `z_T` from its endpoint, in the half-space.
///
/// For the ray from the base point `e_n` to a finite boundary point `z`,
/// `z_T = z - q z + h e_n` with
/// `q = e^{-2T}(1+|z|²)/(1+|z|²e^{-2T})` and `h = e^{-T}(1+|z|²)/(1+|z|²e^{-2T})`.
/// The pair `(q, h)` is returned, which keeps full precision however deep
/// `z_T` sits.
pub(crate) fn geodesic_offset(chart: &[f64], t: f64) -> (f64, f64) {
    let r2 = norm_sq(chart);
    let e1 = (-t).exp();
    let e2 = (-2.0 * t).exp();
    let denom = 1.0 + r2 * e2;
    ((1.0 + r2) * e2 / denom, (1.0 + r2) * e1 / denom)
}

/// Point at hyperbolic distance `t` from the half-space base point `e_n`
/// along the geodesic ray towards `z`. Ball inputs are carried to the
/// half-space first.
pub fn geodesic_point_half_space(z: &BoundaryPoint, t: f64) -> Result<ModelPoint> {
    if !(t >= 0.0) {
        return contract(format!("geodesic time must be non-negative, got {t}"));
    }
    let zh = match z.model() {
        Model::HalfSpace => *z,
        Model::Ball => cayley_boundary(z),
    };
    let n = zh.dim();
    let mut coords = [0.0; 3];
    if zh.is_infinity() {
        coords[n - 1] = t.exp();
    } else {
        let chart = zh.chart();
        let (q, h) = geodesic_offset(chart, t);
        for i in 0..n - 1 {
            coords[i] = chart[i] - q * chart[i];
        }
        coords[n - 1] = h;
    }
    if !(coords[n - 1] > 0.0) || !coords[n - 1].is_finite() {
        return contract(format!("geodesic time {t} overflows the half-space chart"));
    }
    Ok(ModelPoint::new_unchecked(Model::HalfSpace, n, coords))
}
