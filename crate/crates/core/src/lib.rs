//! Dimension spectra of Kleinian limit sets and Patterson-Sullivan measures.
//!
//! The crate has three layers:
//!
//! * geometry: [`hyperbolic`] (models of H² and H³, Möbius isometries,
//!   horoballs) and [`group`] (presentations, orbit enumeration, cusps and
//!   standard horoballs);
//! * models and closed forms: [`sampler`] (finite point clouds of limit sets
//!   and reference sets), [`poincare`] (critical exponent from orbit
//!   counting), [`measure`] (the global measure formula as an explicit
//!   model) and [`formulas`] (piecewise closed forms for the spectra);
//! * independent estimators: [`empirical`] (covering numbers, two-scale
//!   counts, spectrum and box-dimension regressions, measure ratios).

pub mod empirical;
pub mod error;
pub mod formulas;
pub mod group;
pub mod hyperbolic;
pub mod measure;
pub mod poincare;
pub mod sampler;

pub use error::{Error, Result};
