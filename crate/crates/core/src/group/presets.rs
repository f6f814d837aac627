//! Small gallery of groups used by the tests and the command line.

use super::{DeclaredCusp, GroupPresentation, Word};
use crate::error::{contract, Result};
use crate::hyperbolic::{BoundaryPoint, MobiusIsometry};

fn word(letters: &[i8]) -> Word {
    Word::from_reduced(letters.to_vec())
}

/// The trivial group on H² (no generators).
pub fn identity() -> GroupPresentation {
    GroupPresentation::new("identity", 2, vec![], vec![]).expect("valid preset")
}

/// `⟨z ↦ z + 1⟩` on the upper half-plane. Elementary, one rank-1 cusp at ∞.
pub fn cyclic_parabolic() -> GroupPresentation {
    let t = MobiusIsometry::real(1.0, 1.0, 0.0, 1.0).expect("valid matrix");
    let inf = BoundaryPoint::infinity(2).expect("dim 2");
    GroupPresentation::new("cyclic-parabolic", 2, vec![t], vec![DeclaredCusp { point: inf, rank: 1, witnesses: vec![word(&[1])] }])
        .expect("valid preset")
}

/// `⟨z ↦ z + λ, z ↦ z / (c z + 1)⟩`, free and discrete for `λ c ≥ 4`, with
/// rank-1 cusps at ∞ and 0.
pub fn two_parabolic(lambda: f64, c: f64) -> Result<GroupPresentation> {
    if !(lambda > 0.0 && c > 0.0) || !(lambda * c >= 4.0) || !(lambda * c).is_finite() {
        return contract(format!("two-parabolic preset needs λ, c > 0 with λ·c ≥ 4, got λ = {lambda}, c = {c}"));
    }
    let a = MobiusIsometry::real(1.0, lambda, 0.0, 1.0)?;
    let b = MobiusIsometry::real(1.0, 0.0, c, 1.0)?;
    let cusps = vec![
        DeclaredCusp { point: BoundaryPoint::infinity(2)?, rank: 1, witnesses: vec![word(&[1])] },
        DeclaredCusp { point: BoundaryPoint::half_space(&[0.0])?, rank: 1, witnesses: vec![word(&[2])] },
    ];
    GroupPresentation::new("two-parabolic", 2, vec![a, b], cusps)
}

/// Smallest translation length for which the isometric circles of the
/// Schottky pair are disjoint: `2 ln(1 + √2)`.
pub fn schottky_min_length() -> f64 {
    2.0 * (1.0 + 2f64.sqrt()).ln()
}

/// Two loxodromics of translation length `ℓ` with axes `(-1, 1)` and
/// `(0, ∞)`; a parabolic-free Schottky group for `ℓ > 2 ln(1 + √2)`.
pub fn schottky(ell: f64) -> Result<GroupPresentation> {
    if !(ell > schottky_min_length()) || !ell.is_finite() {
        return contract(format!("Schottky preset needs ℓ > {:.6}, got {ell}", schottky_min_length()));
    }
    let (ch, sh) = ((0.5 * ell).cosh(), (0.5 * ell).sinh());
    let g1 = MobiusIsometry::real(ch, sh, sh, ch)?;
    let e = (0.5 * ell).exp();
    let g2 = MobiusIsometry::real(e, 0.0, 0.0, 1.0 / e)?;
    GroupPresentation::new("schottky", 2, vec![g1, g2], vec![])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::IsometryKind;

    #[test]
    fn generator_types() {
        let g = two_parabolic(4.0, 4.0).unwrap();
        assert!(g.generators().iter().all(|m| m.classify() == IsometryKind::Parabolic));
        let ab = g.generators()[0] * g.generators()[1];
        assert_eq!(ab.classify(), IsometryKind::Loxodromic);
        let s = schottky(3.0).unwrap();
        assert!(s.generators().iter().all(|m| m.classify() == IsometryKind::Loxodromic));
        assert!((s.generators()[1].displacement() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn parameter_ranges() {
        assert!(two_parabolic(1.0, 3.0).is_err());
        assert!(two_parabolic(2.0, 2.0).is_ok());
        assert!(schottky(1.0).is_err());
    }
}
