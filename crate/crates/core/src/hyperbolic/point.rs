use crate::error::{contract, Result};

/// Boundary tolerance for points on the unit sphere.
pub const SPHERE_TOL: f64 = 1e-12;

/// Which model of hyperbolic space a point is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Poincaré ball: the open unit ball in R^n.
    Ball,
    /// Upper half-space: points of R^n with positive last coordinate.
    HalfSpace,
}

/// An interior point of H² or H³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    model: Model,
    dim: usize,
    coords: [f64; 3],
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        contract(format!("hyperbolic dimension must be 2 or 3, got {dim}"))
    }
}

fn pack(c: &[f64]) -> [f64; 3] {
    let mut out = [0.0; 3];
    out[..c.len()].copy_from_slice(c);
    out
}

pub(crate) fn norm_sq(c: &[f64]) -> f64 {
    c.iter().map(|x| x * x).sum()
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl ModelPoint {
    /// Point of the Poincaré ball; `coords.len()` is the dimension.
    pub fn ball(coords: &[f64]) -> Result<Self> {
        check_dim(coords.len())?;
        if !coords.iter().all(|c| c.is_finite()) || norm_sq(coords) >= 1.0 {
            return contract(format!("{coords:?} is not inside the unit ball"));
        }
        Ok(Self { model: Model::Ball, dim: coords.len(), coords: pack(coords) })
    }

    /// Point of the upper half-space; the last coordinate is the height.
    pub fn half_space(coords: &[f64]) -> Result<Self> {
        check_dim(coords.len())?;
        let h = coords[coords.len() - 1];
        if !coords.iter().all(|c| c.is_finite()) || h <= 0.0 {
            return contract(format!("{coords:?} is not in the upper half-space"));
        }
        Ok(Self { model: Model::HalfSpace, dim: coords.len(), coords: pack(coords) })
    }

    pub(crate) fn new_unchecked(model: Model, dim: usize, coords: [f64; 3]) -> Self {
        Self { model, dim, coords }
    }

    /// The base point: the centre of the ball, or (0, …, 0, 1) in half-space.
    /// The Cayley map exchanges the two.
    pub fn origin(model: Model, dim: usize) -> Self {
        let mut coords = [0.0; 3];
        if model == Model::HalfSpace {
            coords[dim - 1] = 1.0;
        }
        Self { model, dim, coords }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    /// Height above the boundary (half-space only).
    pub fn height(&self) -> f64 {
        self.coords[self.dim - 1]
    }

    pub(crate) fn raw(&self) -> [f64; 3] {
        self.coords
    }
}

/// A point on the sphere at infinity.
///
/// In the half-space model finite points have last coordinate 0 and the
/// point at infinity is a flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    model: Model,
    dim: usize,
    coords: [f64; 3],
    at_infinity: bool,
}

impl BoundaryPoint {
    /// Point of the unit sphere S^{dim-1}.
    pub fn ball(coords: &[f64]) -> Result<Self> {
        check_dim(coords.len())?;
        if !coords.iter().all(|c| c.is_finite()) || (norm_sq(coords).sqrt() - 1.0).abs() > SPHERE_TOL {
            return contract(format!("{coords:?} is not on the unit sphere"));
        }
        Ok(Self { model: Model::Ball, dim: coords.len(), coords: pack(coords), at_infinity: false })
    }

    /// Finite boundary point of the half-space of dimension `chart.len() + 1`,
    /// given by its coordinates in R^{dim-1}.
    pub fn half_space(chart: &[f64]) -> Result<Self> {
        check_dim(chart.len() + 1)?;
        if !chart.iter().all(|c| c.is_finite()) {
            return contract(format!("{chart:?} is not a finite boundary point"));
        }
        Ok(Self {
            model: Model::HalfSpace,
            dim: chart.len() + 1,
            coords: pack(chart),
            at_infinity: false,
        })
    }

    /// The point at infinity of the half-space model.
    pub fn infinity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { model: Model::HalfSpace, dim, coords: [0.0; 3], at_infinity: true })
    }

    pub(crate) fn new_unchecked(model: Model, dim: usize, coords: [f64; 3], at_infinity: bool) -> Self {
        Self { model, dim, coords, at_infinity }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_infinity(&self) -> bool {
        self.at_infinity
    }

    /// Full coordinates in R^dim (last coordinate 0 for finite half-space points).
    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    /// Chart coordinates: R^{dim-1} for the half-space, R^dim for the ball.
    pub fn chart(&self) -> &[f64] {
        match self.model {
            Model::HalfSpace => &self.coords[..self.dim - 1],
            Model::Ball => &self.coords[..self.dim],
        }
    }

    pub(crate) fn raw(&self) -> [f64; 3] {
        self.coords
    }

    /// Euclidean distance in the model's own coordinates; `None` when exactly
    /// one of the points is at infinity.
    pub fn euclidean_distance(&self, other: &BoundaryPoint) -> Option<f64> {
        match (self.at_infinity, other.at_infinity) {
            (true, true) => Some(0.0),
            (false, false) => Some(dist_sq(self.coords(), other.coords()).sqrt()),
            _ => None,
        }
    }
}
