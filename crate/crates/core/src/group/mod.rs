//! Group presentations, orbit enumeration, cusps and standard horoballs.

mod cusps;
mod orbit;
pub mod presets;
mod presentation;
mod word;

pub use cusps::{
    assign_standard_horoballs, cusp_horoball_scaling_check, disjointness_scale, find_parabolic_cusps, Cusp,
    CuspSearch, RankedHoroball, ScalingReport, ScalingRow, CUSP_DEDUP_TOL,
};
pub(crate) use cusps::PointIndex;
pub(crate) use orbit::walk_words;
pub use orbit::{
    enumerate_orbit, enumerate_orbit_capped, reduced_word_count, OrbitPoint, OrbitSample, DEFAULT_ORBIT_CAP,
};
pub use presentation::{DeclaredCusp, GroupPresentation, CUSP_FIX_TOL};
pub use word::Word;
