//! Text formats: cloud CSV, profile CSV, compare report, geometry file.

use std::fmt::Write as _;

use kleinian_spectra::formulas::{Source, SpectrumKind, SpectrumProfile};
use kleinian_spectra::hyperbolic::{BoundaryPoint, Horoball};
use kleinian_spectra::sampler::{PointCloud, Region};

use crate::CliError;

pub const CLOUD_HEADER: &str = "# kleinian-spectra cloud v1";
pub const PROFILE_HEADER: &str = "# kleinian-spectra profile v1";
pub const REPORT_HEADER: &str = "# kleinian-spectra compare v1";
pub const GEOMETRY_HEADER: &str = "# kleinian-spectra geometry v1";
pub const PROFILE_COLUMNS: &str = "theta,value,stderr,kind,source";
pub const REPORT_COLUMNS: &str = "theta,closed_form,empirical,stderr,abs_deviation";

/// Shortest rendering with 12 significant digits: plain decimals for
/// moderate exponents, scientific otherwise.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let plain = format!("{:.*}", (11 - exp).max(0) as usize, x);
        trim_zeros(&plain)
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn parse_num(s: &str, what: &str) -> Result<f64, CliError> {
    match s.trim() {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t.parse().map_err(|_| CliError::Validation(format!("cannot read {what} from '{s}'"))),
    }
}

/// `# config: a=1; b=2` from sorted pairs.
pub fn config_footer(pairs: &[(String, String)]) -> String {
    let body: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("# config: {}\n", body.join("; "))
}

pub fn write_cloud(cloud: &PointCloud, config: &[(String, String)]) -> String {
    let mut out = String::new();
    out.push_str(CLOUD_HEADER);
    out.push('\n');
    out.push_str(if cloud.dim() == 1 { "x0\n" } else { "x0,x1\n" });
    for p in cloud.points() {
        if cloud.dim() == 1 {
            let _ = writeln!(out, "{}", fmt_num(p[0]));
        } else {
            let _ = writeln!(out, "{},{}", fmt_num(p[0]), fmt_num(p[1]));
        }
    }
    let _ = writeln!(out, "# provenance: {}", cloud.provenance());
    let _ = writeln!(out, "# resolution: {}", fmt_num(cloud.resolution()));
    let _ = writeln!(out, "# dim: {}", cloud.dim());
    for f in cloud.flagged() {
        let (name, c, r) = match f {
            Region::Ball { center, radius } => ("ball", center, radius),
            Region::Outside { center, radius } => ("outside", center, radius),
        };
        let _ = writeln!(out, "# flagged: {name} {} {} {}", fmt_num(c[0]), fmt_num(c[1]), fmt_num(*r));
    }
    out.push_str(&config_footer(config));
    out
}

pub fn read_cloud(text: &str) -> Result<PointCloud, CliError> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CLOUD_HEADER) {
        return Err(CliError::Validation(format!("not a cloud file: first line must be '{CLOUD_HEADER}'")));
    }
    let columns = lines.next().unwrap_or("").trim();
    let width = match columns {
        "x0" => 1,
        "x0,x1" => 2,
        other => return Err(CliError::Validation(format!("unexpected cloud columns '{other}'"))),
    };
    let mut points = Vec::new();
    let (mut provenance, mut resolution, mut dim, mut flagged) = (String::new(), None, None, Vec::new());
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (key, value) = rest.split_once(':').unwrap_or((rest, ""));
            let value = value.trim();
            match key.trim() {
                "provenance" => provenance = value.to_string(),
                "resolution" => resolution = Some(parse_num(value, "resolution")?),
                "dim" => dim = Some(value.parse::<usize>().map_err(|_| CliError::Validation("bad dim footer".into()))?),
                "flagged" => flagged.push(parse_region(value)?),
                _ => {}
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(CliError::Validation(format!("cloud row '{line}' has {} fields, expected {width}", fields.len())));
        }
        let x = parse_num(fields[0], "coordinate")?;
        let y = if width == 2 { parse_num(fields[1], "coordinate")? } else { 0.0 };
        points.push([x, y]);
    }
    let resolution = resolution.ok_or_else(|| CliError::Validation("cloud file lacks a resolution footer".into()))?;
    let dim = dim.unwrap_or(width);
    Ok(PointCloud::new(dim, points, resolution, provenance, flagged)?)
}

fn parse_region(s: &str) -> Result<Region, CliError> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(CliError::Validation(format!("bad flagged region '{s}'")));
    }
    let center = [parse_num(parts[1], "centre")?, parse_num(parts[2], "centre")?];
    let radius = parse_num(parts[3], "radius")?;
    match parts[0] {
        "ball" => Ok(Region::Ball { center, radius }),
        "outside" => Ok(Region::Outside { center, radius }),
        other => Err(CliError::Validation(format!("unknown region kind '{other}'"))),
    }
}

pub fn write_profile(p: &SpectrumProfile, config: &[(String, String)]) -> String {
    let mut out = format!("{PROFILE_HEADER}\n{PROFILE_COLUMNS}\n");
    for i in 0..p.values.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.theta[i].map(fmt_num).unwrap_or_default(),
            fmt_num(p.values[i]),
            p.stderr[i].map(fmt_num).unwrap_or_default(),
            p.kind,
            p.source
        );
    }
    out.push_str(&config_footer(config));
    out
}

pub fn read_profile(text: &str) -> Result<SpectrumProfile, CliError> {
    let mut rows = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    if rows.next() != Some(PROFILE_COLUMNS) {
        return Err(CliError::Validation(format!("profile must start with the columns '{PROFILE_COLUMNS}'")));
    }
    let mut profile: Option<SpectrumProfile> = None;
    for line in rows {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(CliError::Validation(format!("profile row '{line}' needs 5 fields")));
        }
        let theta = if f[0].is_empty() { None } else { Some(parse_num(f[0], "theta")?) };
        let value = parse_num(f[1], "value")?;
        let stderr = if f[2].is_empty() { None } else { Some(parse_num(f[2], "stderr")?) };
        let kind: SpectrumKind = f[3].parse()?;
        let source: Source = f[4].parse()?;
        let p = profile.get_or_insert_with(|| SpectrumProfile {
            theta: vec![],
            values: vec![],
            stderr: vec![],
            kind,
            source,
        });
        if p.kind != kind || p.source != source {
            return Err(CliError::Validation("a profile file holds a single kind and source".into()));
        }
        p.theta.push(theta);
        p.values.push(value);
        p.stderr.push(stderr);
    }
    profile.ok_or_else(|| CliError::Validation("profile has no rows".into()))
}

/// Horoballs with ranks and sweep points of a synthetic cusp geometry.
pub struct GeometryFile {
    pub dim: usize,
    pub horoballs: Vec<(Horoball, u32)>,
    pub points: Vec<BoundaryPoint>,
}

/// Rows `horoball,<x0>[,<x1>],<size>,<rank>` and `point,<x0>[,<x1>]`, where a
/// coordinate `inf` denotes the point at ∞ (its other coordinates are left
/// empty). The hyperbolic dimension is one more than the number of chart
/// coordinates, given by the column line `kind,x0,size,rank` or
/// `kind,x0,x1,size,rank`.
pub fn read_geometry(text: &str) -> Result<GeometryFile, CliError> {
    let mut rows = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let chart = match rows.next() {
        Some("kind,x0,size,rank") => 1,
        Some("kind,x0,x1,size,rank") => 2,
        _ => return Err(CliError::Validation("geometry columns must be 'kind,x0[,x1],size,rank'".into())),
    };
    let dim = chart + 1;
    let mut out = GeometryFile { dim, horoballs: vec![], points: vec![] };
    for line in rows {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != chart + 3 {
            return Err(CliError::Validation(format!("geometry row '{line}' needs {} fields", chart + 3)));
        }
        let base = if f[1] == "inf" {
            BoundaryPoint::infinity(dim)?
        } else {
            let c: Vec<f64> = f[1..=chart].iter().map(|s| parse_num(s, "coordinate")).collect::<Result<_, _>>()?;
            BoundaryPoint::half_space(&c)?
        };
        match f[0] {
            "horoball" => {
                let size = parse_num(f[chart + 1], "size")?;
                let rank: u32 =
                    f[chart + 2].parse().map_err(|_| CliError::Validation(format!("bad rank in '{line}'")))?;
                out.horoballs.push((Horoball::new(base, size)?, rank));
            }
            "point" => out.points.push(base),
            other => return Err(CliError::Validation(format!("unknown geometry record '{other}'"))),
        }
    }
    Ok(out)
}
