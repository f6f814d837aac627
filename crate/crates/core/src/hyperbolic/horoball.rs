use super::metric::{cayley_boundary, cayley_point};
use super::mobius::MobiusIsometry;
use super::point::{dist_sq, norm_sq, BoundaryPoint, Model, ModelPoint};
use crate::error::{contract, Error, Result};

/// A closed horoball.
///
/// `size` is the Euclidean diameter, except for a half-space horoball based
/// at ∞, where it is the height of the bounding horizontal plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horoball {
    base: BoundaryPoint,
    size: f64,
}

impl Horoball {
    pub fn new(base: BoundaryPoint, size: f64) -> Result<Self> {
        if !(size > 0.0) || !size.is_finite() {
            return contract(format!("horoball size must be positive, got {size}"));
        }
        if base.model() == Model::Ball && size >= 2.0 {
            return contract(format!("ball-model horoball diameter must be below 2, got {size}"));
        }
        Ok(Self { base, size })
    }

    pub fn base(&self) -> &BoundaryPoint {
        &self.base
    }

    pub fn size(&self) -> f64 {
        self.size
    }

    pub fn model(&self) -> Model {
        self.base.model()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Same base, size multiplied by `lambda` (height divided by `lambda`
    /// at ∞). In the half-space this is an inward shift by `ln(1/lambda)`.
    pub fn squeezed(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return contract(format!("squeeze factor must be positive, got {lambda}"));
        }
        let size = if self.base.is_infinity() { self.size / lambda } else { self.size * lambda };
        Self::new(self.base, size)
    }

    /// Euclidean centre and radius of the bounding sphere (finite bases only).
    pub fn euclidean_ball(&self) -> Option<([f64; 3], f64)> {
        if self.base.is_infinity() {
            return None;
        }
        let r = 0.5 * self.size;
        let mut centre = self.base.raw();
        let n = self.dim();
        match self.model() {
            Model::Ball => centre[..n].iter_mut().for_each(|x| *x *= 1.0 - r),
            Model::HalfSpace => centre[n - 1] = r,
        }
        Some((centre, r))
    }

    /// A point of the bounding horosphere: the top of the horoball in the
    /// half-space, the tip nearest the origin in the ball.
    pub fn witness(&self) -> ModelPoint {
        let n = self.dim();
        let mut coords = self.base.raw();
        match self.model() {
            Model::HalfSpace => {
                if self.base.is_infinity() {
                    coords = [0.0; 3];
                }
                coords[n - 1] = self.size;
            }
            Model::Ball => coords[..n].iter_mut().for_each(|x| *x *= 1.0 - self.size),
        }
        ModelPoint::new_unchecked(self.model(), n, coords)
    }

    /// Signed hyperbolic distance from `x` to the bounding horosphere,
    /// positive inside.
    ///
    /// In the half-space, conjugating the base `x₀` to ∞ by
    /// `z ↦ -1/(z - x₀)` turns the horoball into `{height ≥ 1/size}` and
    /// sends `(y, t)` to height `t / (|y - x₀|² + t²)`; the depth is the log of
    /// the height ratio. In the ball the same quantity comes from the
    /// Poisson kernel `(1 - |x|²)/|x - p|²`.
    pub fn depth(&self, x: &ModelPoint) -> Result<f64> {
        if x.model() != self.model() || x.dim() != self.dim() {
            return contract("horoball and point live in different spaces");
        }
        let n = self.dim();
        Ok(match self.model() {
            Model::HalfSpace => {
                let t = x.height();
                if self.base.is_infinity() {
                    (t / self.size).ln()
                } else {
                    let off = dist_sq(&x.coords()[..n - 1], self.base.chart());
                    depth_below(off, t, self.size)
                }
            }
            Model::Ball => {
                let poisson = (1.0 - norm_sq(x.coords())) / dist_sq(x.coords(), self.base.coords());
                (poisson * self.size / (2.0 - self.size)).ln()
            }
        })
    }

    pub fn contains(&self, x: &ModelPoint) -> Result<bool> {
        Ok(self.depth(x)? >= 0.0)
    }

    /// The same horoball expressed in the other model, via the Cayley map.
    pub fn to_model(&self, model: Model) -> Horoball {
        if model == self.model() {
            return *self;
        }
        let base = cayley_boundary(&self.base);
        let witness = cayley_point(&self.witness());
        Horoball { base, size: size_through(&base, &witness) }
    }

    /// Euclidean diameter of the radial projection of the horoball to the
    /// unit sphere. The tangent cone from the origin to the bounding sphere
    /// (centre at distance `1 - r`, radius `r`) has half-angle `α` with
    /// `sin α = r / (1 - r)`, and the shadow's chord diameter is `2 sin α`.
    pub fn shadow_diameter(&self) -> Result<f64> {
        let ball = self.to_model(Model::Ball);
        if ball.size >= 1.0 {
            return Err(Error::Geometry(format!(
                "horoball of diameter {} contains the origin; its shadow is undefined",
                ball.size
            )));
        }
        let r = 0.5 * ball.size;
        Ok(2.0 * r / (1.0 - r))
    }
}

/// Depth below a half-space horosphere based at a finite point, from the
/// squared horizontal offset to the base, the height and the diameter.
pub(crate) fn depth_below(offset_sq: f64, height: f64, diameter: f64) -> f64 {
    (diameter * height / (offset_sq + height * height)).ln()
}

/// Size of the horoball based at `base` whose horosphere passes through `w`.
fn size_through(base: &BoundaryPoint, w: &ModelPoint) -> f64 {
    let n = base.dim();
    match base.model() {
        Model::HalfSpace => {
            if base.is_infinity() {
                w.height()
            } else {
                // |y - x₀|² + (t - R)² = R²
                let t = w.height();
                (dist_sq(&w.coords()[..n - 1], base.chart()) + t * t) / t
            }
        }
        Model::Ball => {
            // |w - (1 - r)p|² = r²  ⇒  r = |w - p|² / (2 (1 - w·p))
            let wp: f64 = w.coords().iter().zip(base.coords()).map(|(a, b)| a * b).sum();
            dist_sq(w.coords(), base.coords()) / (1.0 - wp)
        }
    }
}

/// Image of a horoball under an isometry: the base is carried by the
/// boundary action, one point of the horosphere by the interior action, and
/// the size is solved from the two.
pub fn horoball_image(g: &MobiusIsometry, h: &Horoball) -> Result<Horoball> {
    let base = g.apply_boundary(h.base())?;
    let witness = g.apply_point(&h.witness())?;
    let size = size_through(&base, &witness);
    if base.model() == Model::Ball && size >= 2.0 {
        return Err(Error::Geometry("image horoball swallows the ball".into()));
    }
    Horoball::new(base, size)
}

/// Point of the circle of radius `radius` tangent to the x-axis at the
/// origin, at angle `angle` from the tangency point:
/// `(R sin θ, R (1 - cos θ))`. This is a planar slice of a horoball.
pub fn tangent_circle_point(radius: f64, angle: f64) -> (f64, f64) {
    (radius * angle.sin(), radius * (1.0 - angle.cos()))
}
