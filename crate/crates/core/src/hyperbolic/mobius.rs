use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use super::metric::{cayley_boundary, cayley_point};
use super::point::{BoundaryPoint, Model, ModelPoint};
use crate::error::{contract, Result};

/// Width of the band around |trace| = 2 that classifies as parabolic.
pub const PARABOLIC_BAND: f64 = 1e-9;

/// Traces closer than this to the band edge (but outside it) are reported
/// as ambiguous by [`MobiusIsometry::classify_with_margin`].
pub const AMBIGUITY_BAND: f64 = 1e-6;

/// Tolerance on |det - 1| after normalisation.
#[cfg(test)]
const DET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsometryKind {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

/// Orientation-preserving isometry of H² (real matrix) or H³ (complex
/// matrix), stored as a unit-determinant 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, PartialEq)]
pub struct MobiusIsometry {
    dim: usize,
    m: [Complex64; 4],
}

impl fmt::Debug for MobiusIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        if self.dim == 2 {
            write!(f, "Mobius2[[{}, {}], [{}, {}]]", a.re, b.re, c.re, d.re)
        } else {
            write!(f, "Mobius3[[{a}, {b}], [{c}, {d}]]")
        }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl MobiusIsometry {
    /// Isometry of H² from a real matrix with positive determinant,
    /// rescaled to determinant 1.
    pub fn real(a: f64, b: f64, cc: f64, d: f64) -> Result<Self> {
        let det = a * d - b * cc;
        if !(det > 0.0) || !det.is_finite() {
            return contract(format!("real Möbius matrix needs positive determinant, got {det}"));
        }
        let s = det.sqrt();
        Ok(Self { dim: 2, m: [c(a / s), c(b / s), c(cc / s), c(d / s)] })
    }

    /// Isometry of H³ from a complex matrix with non-zero determinant.
    pub fn complex(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * cc;
        if !(det.norm() > 0.0) || !det.is_finite() {
            return contract("complex Möbius matrix is singular");
        }
        let s = det.sqrt();
        Ok(Self { dim: 3, m: [a / s, b / s, cc / s, d / s] })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, m: [c(1.0), c(0.0), c(0.0), c(1.0)] }
    }

    /// Translation `z ↦ z + v` of the half-space boundary.
    pub fn translation(dim: usize, v: Complex64) -> Self {
        let v = if dim == 2 { c(v.re) } else { v };
        Self { dim, m: [c(1.0), v, c(0.0), c(1.0)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> [Complex64; 4] {
        self.m
    }

    pub fn det(&self) -> Complex64 {
        let [a, b, cc, d] = self.m;
        a * d - b * cc
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0] + self.m[3]
    }

    pub fn inverse(&self) -> Self {
        let [a, b, cc, d] = self.m;
        Self { dim: self.dim, m: [d, -b, -cc, a] }
    }

    /// Rescale so that the determinant is exactly representable as 1 again;
    /// used after long products. Once the entries are large, `ad - bc` is
    /// lost to cancellation while the product itself is still accurate in
    /// relative terms, so the matrix is left alone.
    pub fn renormalized(&self) -> Self {
        let det = self.det();
        if self.frobenius_sq() > 1e8 || !(det.re > 0.5 && det.re < 2.0) {
            let mut m = self.m;
            if self.dim == 2 {
                m.iter_mut().for_each(|x| x.im = 0.0);
            }
            return Self { dim: self.dim, m };
        }
        let s = det.sqrt();
        let mut m = self.m;
        m.iter_mut().for_each(|x| *x /= s);
        if self.dim == 2 {
            m.iter_mut().for_each(|x| x.im = 0.0);
        }
        Self { dim: self.dim, m }
    }

    /// Squared Frobenius norm; `cosh d(o, g o) = ‖g‖² / 2` for the base point o.
    pub fn frobenius_sq(&self) -> f64 {
        self.m.iter().map(|x| x.norm_sqr()).sum()
    }

    /// Hyperbolic displacement of the base point, `d(o, g o)`.
    pub fn displacement(&self) -> f64 {
        (0.5 * self.frobenius_sq()).max(1.0).acosh()
    }

    fn is_identity(&self) -> bool {
        let [a, b, cc, d] = self.m;
        let scale = self.frobenius_sq().sqrt().max(1.0);
        let tol = PARABOLIC_BAND * scale;
        b.norm() <= tol && cc.norm() <= tol && (a - d).norm() <= tol
    }

    /// Distance of the trace from the parabolic locus `trace = ±2`.
    fn parabolic_gap(&self) -> f64 {
        let t = self.trace();
        (t - c(2.0)).norm().min((t + c(2.0)).norm())
    }

    pub fn classify(&self) -> IsometryKind {
        self.classify_with_margin().0
    }

    /// Classification together with an ambiguity flag: `true` when the trace
    /// is outside the parabolic band but within [`AMBIGUITY_BAND`] of it.
    pub fn classify_with_margin(&self) -> (IsometryKind, bool) {
        if self.is_identity() {
            return (IsometryKind::Identity, false);
        }
        let gap = self.parabolic_gap();
        if gap <= PARABOLIC_BAND {
            return (IsometryKind::Parabolic, false);
        }
        let ambiguous = gap <= AMBIGUITY_BAND;
        let t = self.trace();
        let kind = if t.im.abs() <= PARABOLIC_BAND && t.re.abs() < 2.0 {
            IsometryKind::Elliptic
        } else {
            IsometryKind::Loxodromic
        };
        (kind, ambiguous)
    }

    /// Fixed points on the boundary of the half-space. Parabolics return a
    /// single point; the identity returns none.
    pub fn fixed_points(&self) -> Vec<BoundaryPoint> {
        let [a, b, cc, d] = self.m;
        let to_point = |z: Complex64| self.boundary_from_complex(z);
        if self.is_identity() {
            return vec![];
        }
        if cc.norm() <= 1e-14 * self.frobenius_sq().sqrt() {
            // z ↦ (a z + b)/d fixes ∞ and, unless a = d, b/(d - a)
            let mut out = vec![BoundaryPoint::infinity(self.dim).expect("dim")];
            if (a - d).norm() > PARABOLIC_BAND {
                out.push(to_point(b / (d - a)));
            }
            return out;
        }
        let disc = (a + d) * (a + d) - c(4.0);
        if self.classify() == IsometryKind::Parabolic || disc.norm() == 0.0 {
            return vec![to_point((a - d) / (c(2.0) * cc))];
        }
        let s = disc.sqrt();
        vec![to_point((a - d + s) / (c(2.0) * cc)), to_point((a - d - s) / (c(2.0) * cc))]
    }

    /// Attracting fixed point of a loxodromic, or the fixed point of a parabolic.
    pub fn attracting_fixed_point(&self) -> Option<BoundaryPoint> {
        let fixed = self.fixed_points();
        match fixed.len() {
            0 => None,
            1 => Some(fixed[0]),
            _ => {
                // |g'(z)| = 1/|cz + d|² < 1 at the attracting point
                let deriv = |p: &BoundaryPoint| -> f64 {
                    let [a, _, cc, d] = self.m;
                    if p.is_infinity() {
                        // at ∞ the multiplier is |d/a|²
                        (d / a).norm_sqr()
                    } else {
                        1.0 / (cc * self.complex_of(p) + d).norm_sqr()
                    }
                };
                fixed.into_iter().min_by(|x, y| deriv(x).total_cmp(&deriv(y)))
            }
        }
    }

    fn complex_of(&self, p: &BoundaryPoint) -> Complex64 {
        let ch = p.chart();
        if self.dim == 2 {
            c(ch[0])
        } else {
            Complex64::new(ch[0], ch[1])
        }
    }

    fn boundary_from_complex(&self, z: Complex64) -> BoundaryPoint {
        if !z.is_finite() {
            return BoundaryPoint::new_unchecked(Model::HalfSpace, self.dim, [0.0; 3], true);
        }
        let coords = if self.dim == 2 { [z.re, 0.0, 0.0] } else { [z.re, z.im, 0.0] };
        BoundaryPoint::new_unchecked(Model::HalfSpace, self.dim, coords, false)
    }

    fn check(&self, dim: usize) -> Result<()> {
        if dim != self.dim {
            return contract(format!("isometry of H{} applied to a point of H{}", self.dim, dim));
        }
        Ok(())
    }

    /// Action on the sphere at infinity: `z ↦ (a z + b)/(c z + d)` in the
    /// half-space chart, conjugated by the Cayley map in the ball.
    pub fn apply_boundary(&self, x: &BoundaryPoint) -> Result<BoundaryPoint> {
        self.check(x.dim())?;
        match x.model() {
            Model::HalfSpace => Ok(self.apply_boundary_half(x)),
            Model::Ball => Ok(cayley_boundary(&self.apply_boundary_half(&cayley_boundary(x)))),
        }
    }

    fn apply_boundary_half(&self, x: &BoundaryPoint) -> BoundaryPoint {
        let [a, b, cc, d] = self.m;
        if x.is_infinity() {
            if cc.norm() == 0.0 {
                return *x;
            }
            return self.boundary_from_complex(a / cc);
        }
        let z = self.complex_of(x);
        let den = cc * z + d;
        if den.norm() == 0.0 {
            return self.boundary_from_complex(c(f64::INFINITY));
        }
        self.boundary_from_complex((a * z + b) / den)
    }

    /// Action on interior points via the quaternionic formula
    /// `(w, t) ↦ (((a w + b) conj(c w + d) + a conj(c) t²) / D, t / D)` with
    /// `D = |c w + d|² + |c|² t²`.
    pub fn apply_point(&self, x: &ModelPoint) -> Result<ModelPoint> {
        self.check(x.dim())?;
        match x.model() {
            Model::HalfSpace => Ok(self.apply_point_half(x)),
            Model::Ball => Ok(cayley_point(&self.apply_point_half(&cayley_point(x)))),
        }
    }

    fn apply_point_half(&self, x: &ModelPoint) -> ModelPoint {
        let [a, b, cc, d] = self.m;
        let raw = x.raw();
        let n = self.dim;
        let w = if n == 2 { c(raw[0]) } else { Complex64::new(raw[0], raw[1]) };
        let t = raw[n - 1];
        let cwd = cc * w + d;
        let den = cwd.norm_sqr() + cc.norm_sqr() * t * t;
        let num = (a * w + b) * cwd.conj() + a * cc.conj() * (t * t);
        let nw = num / den;
        let nt = t / den;
        let coords = if n == 2 { [nw.re, nt, 0.0] } else { [nw.re, nw.im, nt] };
        ModelPoint::new_unchecked(Model::HalfSpace, n, coords)
    }

    /// Integer power (negative powers use the inverse).
    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut k = n.unsigned_abs();
        let mut acc = Self::identity(self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// True when the two isometries commute up to sign, within `tol`
    /// relative to the size of the entries.
    pub fn commutes_with(&self, other: &Self, tol: f64) -> bool {
        let ab = *self * *other;
        let ba = *other * *self;
        let scale = ab.frobenius_sq().sqrt().max(1.0);
        let diff = |s: f64| -> f64 {
            ab.m.iter().zip(&ba.m).map(|(x, y)| (x - y * s).norm()).fold(0.0, f64::max)
        };
        diff(1.0).min(diff(-1.0)) <= tol * scale
    }
}

impl Mul for MobiusIsometry {
    type Output = MobiusIsometry;

    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        let [a, b, cc, d] = self.m;
        let [e, f, g, h] = rhs.m;
        let mut m = [a * e + b * g, a * f + b * h, cc * e + d * g, cc * f + d * h];
        if self.dim == 2 {
            m.iter_mut().for_each(|x| x.im = 0.0);
        }
        MobiusIsometry { dim: self.dim, m }
    }
}
