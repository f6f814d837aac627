//! Closed forms for the dimensions and spectra of limit sets and
//! Patterson-Sullivan measures of geometrically finite groups.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `min{1, θ/(1-θ)}`, the interpolation weight shared by all spectra.
pub fn interpolation_weight(theta: f64) -> f64 {
    (theta / (1.0 - theta)).min(1.0)
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::Validation(format!("θ must lie in (0, 1), got {theta}")))
    }
}

/// Critical exponent, extreme cusp ranks and boundary dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameters {
    delta: f64,
    k_min: u32,
    k_max: u32,
    d: u32,
}

impl SpectralParameters {
    /// Requires `1 ≤ k_min ≤ k_max ≤ d` and `k_max/2 < δ ≤ d`.
    pub fn new(delta: f64, k_min: u32, k_max: u32, d: u32) -> Result<Self> {
        if !(1 <= k_min && k_min <= k_max && k_max <= d) {
            return Err(Error::Validation(format!("cusp ranks need 1 ≤ k_min ≤ k_max ≤ d, got k_min = {k_min}, k_max = {k_max}, d = {d}")));
        }
        if !(delta > k_max as f64 / 2.0 && delta <= d as f64) {
            return Err(Error::Validation(format!(
                "δ must satisfy k_max/2 < δ ≤ d, got δ = {delta} with k_max = {k_max}, d = {d}"
            )));
        }
        Ok(Self { delta, k_min, k_max, d })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn k_min(&self) -> u32 {
        self.k_min
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    fn ks(&self) -> (f64, f64, f64) {
        (self.delta, self.k_min as f64, self.k_max as f64)
    }
}

/// `max{δ, 2δ - k_min}`.
pub fn mu_box_dimension(p: &SpectralParameters) -> f64 {
    let (delta, kmin, _) = p.ks();
    delta.max(2.0 * delta - kmin)
}

pub fn mu_assouad_spectrum(p: &SpectralParameters, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let (delta, kmin, kmax) = p.ks();
    let w = interpolation_weight(theta);
    Ok(if delta < kmin {
        delta + w * (kmax - delta)
    } else if delta < 0.5 * (kmin + kmax) {
        2.0 * delta - kmin + w * (kmin + kmax - 2.0 * delta)
    } else {
        2.0 * delta - kmin
    })
}

pub fn mu_lower_spectrum(p: &SpectralParameters, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let (delta, kmin, kmax) = p.ks();
    let w = interpolation_weight(theta);
    Ok(if delta > kmax {
        delta - w * (delta - kmin)
    } else if delta > 0.5 * (kmin + kmax) {
        2.0 * delta - kmax - w * (2.0 * delta - kmin - kmax)
    } else {
        2.0 * delta - kmax
    })
}

pub fn set_assouad_spectrum(p: &SpectralParameters, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let (delta, _, kmax) = p.ks();
    Ok(if delta < kmax { delta + interpolation_weight(theta) * (kmax - delta) } else { delta })
}

pub fn set_lower_spectrum(p: &SpectralParameters, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let (delta, kmin, _) = p.ks();
    Ok(if delta <= kmin { delta } else { delta - interpolation_weight(theta) * (delta - kmin) })
}

/// Assouad and lower dimensions of the limit set and of the measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoints {
    pub set_assouad: f64,
    pub set_lower: f64,
    pub mu_assouad: f64,
    pub mu_lower: f64,
}

pub fn endpoint_dimensions(p: &SpectralParameters) -> Endpoints {
    let (delta, kmin, kmax) = p.ks();
    Endpoints {
        set_assouad: delta.max(kmax),
        set_lower: delta.min(kmin),
        mu_assouad: (2.0 * delta - kmin).max(kmax),
        mu_lower: (2.0 * delta - kmax).min(kmin),
    }
}

/// Assouad spectrum of the inverted lattice `{m/|m|² : m ∈ Z^k}`:
/// `min{k, k/(2(1-θ))}`.
pub fn lattice_spectrum(k: u32, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if k < 1 {
        return Err(Error::Validation("lattice rank must be at least 1".into()));
    }
    let k = k as f64;
    Ok(k.min(k / (2.0 * (1.0 - theta))))
}

/// Upper bound valid for any set: `min{dim_A F, dim_B F/(1-θ)}` with the
/// limit-set values `dim_A = max{δ, k_max}` and `dim_B = δ`.
pub fn general_assouad_bound(p: &SpectralParameters, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(endpoint_dimensions(p).set_assouad.min(p.delta / (1.0 - theta)))
}

/// Lower bound `dim_B F + ((1-ρ)θ / ((1-θ)ρ)) (dim_A F - dim_B F)` for a set
/// whose Assouad spectrum reaches the Assouad dimension at `θ = ρ`, valid
/// for `θ < ρ`.
pub fn interpolation_lower_bound(box_dim: f64, assouad_dim: f64, rho: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if !(theta < rho && rho < 1.0) {
        return Err(Error::Validation(format!("the bound needs θ < ρ < 1, got θ = {theta}, ρ = {rho}")));
    }
    Ok(box_dim + (1.0 - rho) * theta / ((1.0 - theta) * rho) * (assouad_dim - box_dim))
}

/// Which quantity a profile holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumKind {
    SetAssouad,
    SetLower,
    MuAssouad,
    MuLower,
    MuBox,
    SetBox,
    Lattice,
}

impl SpectrumKind {
    pub const ALL: [SpectrumKind; 7] = [
        SpectrumKind::SetAssouad,
        SpectrumKind::SetLower,
        SpectrumKind::MuAssouad,
        SpectrumKind::MuLower,
        SpectrumKind::MuBox,
        SpectrumKind::SetBox,
        SpectrumKind::Lattice,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SpectrumKind::SetAssouad => "set_assouad",
            SpectrumKind::SetLower => "set_lower",
            SpectrumKind::MuAssouad => "mu_assouad",
            SpectrumKind::MuLower => "mu_lower",
            SpectrumKind::MuBox => "mu_box",
            SpectrumKind::SetBox => "set_box",
            SpectrumKind::Lattice => "lattice",
        }
    }

    /// Whether the quantity depends on θ.
    pub fn is_spectrum(&self) -> bool {
        !matches!(self, SpectrumKind::MuBox | SpectrumKind::SetBox)
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpectrumKind {
    type Err = Error;

    /// Accepts `set_assouad` and `set-assouad` spellings.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace('-', "_");
        SpectrumKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| Error::Validation(format!("unknown spectrum kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    ClosedForm,
    Empirical,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::ClosedForm => "closed_form",
            Source::Empirical => "empirical",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "closed_form" => Ok(Source::ClosedForm),
            "empirical" => Ok(Source::Empirical),
            _ => Err(Error::Validation(format!("unknown profile source '{s}'"))),
        }
    }
}

/// A sampled map `θ ↦ value`. Box dimensions are stored as a single row
/// with `theta = None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumProfile {
    pub theta: Vec<Option<f64>>,
    pub values: Vec<f64>,
    pub stderr: Vec<Option<f64>>,
    pub kind: SpectrumKind,
    pub source: Source,
}

impl SpectrumProfile {
    /// Checks that the θ grid is strictly increasing inside (0, 1), values
    /// lie in `[0, 2d]`, and closed-form spectra are monotone in the
    /// direction of their kind.
    pub fn validate(&self, d: u32) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Validation("profile is empty".into()));
        }
        if self.theta.len() != self.values.len() || self.stderr.len() != self.values.len() {
            return Err(Error::Validation("profile columns have different lengths".into()));
        }
        if !self.kind.is_spectrum() {
            return if self.values.len() == 1 && self.theta[0].is_none() {
                Ok(())
            } else {
                Err(Error::Validation(format!("{} is a single value without θ", self.kind)))
            };
        }
        let thetas: Vec<f64> = self
            .theta
            .iter()
            .map(|t| t.ok_or_else(|| Error::Validation("spectrum rows need θ".into())))
            .collect::<Result<_>>()?;
        for t in &thetas {
            check_theta(*t)?;
        }
        if thetas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Validation("θ grid must be strictly increasing".into()));
        }
        let band = 2.0 * d as f64;
        if self.values.iter().any(|v| !(*v >= -1e-12 && *v <= band + 1e-12)) {
            return Err(Error::Validation(format!("profile values leave the band [0, {band}]")));
        }
        if self.source == Source::ClosedForm {
            let increasing = matches!(self.kind, SpectrumKind::SetAssouad | SpectrumKind::MuAssouad | SpectrumKind::Lattice);
            let ok = self.values.windows(2).all(|w| if increasing { w[1] >= w[0] - 1e-12 } else { w[1] <= w[0] + 1e-12 });
            if !ok {
                return Err(Error::Validation(format!("closed-form {} profile is not monotone", self.kind)));
            }
        }
        Ok(())
    }
}

/// `0.01, 0.02, …, 0.99`.
pub fn default_theta_grid() -> Vec<f64> {
    (1..=99).map(|i| i as f64 / 100.0).collect()
}

/// Closed-form profile of `kind` over `grid`. `lattice` uses `k_max` as
/// the lattice rank; box dimensions ignore the grid.
pub fn closed_form_profile(p: &SpectralParameters, kind: SpectrumKind, grid: &[f64]) -> Result<SpectrumProfile> {
    let (theta, values): (Vec<Option<f64>>, Vec<f64>) = match kind {
        SpectrumKind::MuBox => (vec![None], vec![mu_box_dimension(p)]),
        SpectrumKind::SetBox => (vec![None], vec![p.delta]),
        _ => {
            let f = |t: f64| -> Result<f64> {
                match kind {
                    SpectrumKind::SetAssouad => set_assouad_spectrum(p, t),
                    SpectrumKind::SetLower => set_lower_spectrum(p, t),
                    SpectrumKind::MuAssouad => mu_assouad_spectrum(p, t),
                    SpectrumKind::MuLower => mu_lower_spectrum(p, t),
                    _ => lattice_spectrum(p.k_max, t),
                }
            };
            let values = grid.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
            (grid.iter().map(|&t| Some(t)).collect(), values)
        }
    };
    let n = values.len();
    let profile = SpectrumProfile { theta, values, stderr: vec![None; n], kind, source: Source::ClosedForm };
    profile.validate(p.d)?;
    Ok(profile)
}
