//! Acceptance run: seven criteria, one pass/fail line each. Runs as a plain
//! binary so the lines show up in `cargo test` output.

mod common;

use std::time::{Duration, Instant};

use kleinian_spectra::empirical::*;
use kleinian_spectra::formulas::*;
use kleinian_spectra::group::*;
use kleinian_spectra::hyperbolic::*;
use kleinian_spectra::measure::*;
use kleinian_spectra::poincare::*;
use kleinian_spectra::sampler::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 7] = [
        ("closed-form exactness suite", Duration::from_secs(1), closed_forms),
        ("inverted-lattice reproduction", Duration::from_secs(120), lattice_reproduction),
        ("Poincaré exponent desk checks", Duration::from_secs(60), exponent_checks),
        ("Kleinian self-consistency", Duration::from_secs(300), self_consistency),
        ("measure-model branch suite", Duration::from_secs(60), measure_branches),
        ("geometric lemma suite", Duration::from_secs(30), geometric_lemmas),
        ("determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let pass = o.pass && took <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name} ({:.2} s of {} s): {}",
            i + 1,
            if pass { "pass" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs(),
            o.detail
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

// 1 -------------------------------------------------------------------------

fn closed_forms() -> Outcome {
    const TOL: f64 = 1e-9;
    let mut tuples = 0;
    let mut errors = Vec::new();
    let ranks = [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (3, 3)];
    let thetas: Vec<f64> = (1..40).map(|i| i as f64 / 40.0).collect();
    for &(kmin, kmax) in &ranks {
        let lo = kmax as f64 / 2.0;
        for j in 1..=12 {
            let delta = lo + (3.0 - lo) * j as f64 / 12.0;
            let p = SpectralParameters::new(delta, kmin, kmax, 3).unwrap();
            let e = endpoint_dimensions(&p);
            let at = |t: f64| {
                (
                    mu_lower_spectrum(&p, t).unwrap(),
                    set_lower_spectrum(&p, t).unwrap(),
                    set_assouad_spectrum(&p, t).unwrap(),
                    mu_assouad_spectrum(&p, t).unwrap(),
                )
            };
            for &t in &thetas {
                tuples += 1;
                let (ml, sl, sa, ma) = at(t);
                if !(ml <= sl + TOL && sl <= sa + TOL && sa <= ma + TOL) {
                    errors.push(format!("order at {delta},{kmin},{kmax},{t}"));
                }
                if sa > general_assouad_bound(&p, t).unwrap() + TOL {
                    errors.push(format!("general bound at {delta},{kmin},{kmax},{t}"));
                }
            }
            let (ml, sl, sa, ma) = at(1.0 - 1e-12);
            for (got, want) in [(ml, e.mu_lower), (sl, e.set_lower), (sa, e.set_assouad), (ma, e.mu_assouad)] {
                if (got - want).abs() > TOL {
                    errors.push(format!("θ → 1 at {delta},{kmin},{kmax}: {got} vs {want}"));
                }
            }
            let (_, _, sa, ma) = at(1e-12);
            if (sa - delta).abs() > TOL || (ma - mu_box_dimension(&p)).abs() > TOL {
                errors.push(format!("θ → 0 at {delta},{kmin},{kmax}"));
            }
            // the weight min{1, θ/(1-θ)} switches at θ = 1/2
            let (a, b) = (at(0.5 - 1e-12), at(0.5 + 1e-12));
            for (x, y) in [(a.0, b.0), (a.1, b.1), (a.2, b.2), (a.3, b.3)] {
                if (x - y).abs() > TOL {
                    errors.push(format!("jump at θ = 1/2 for {delta},{kmin},{kmax}"));
                }
            }
        }
        // branches also switch where δ crosses k_min and k_max
        for &k in &[kmin, kmax] {
            let k = k as f64;
            if k <= lo + 1e-9 || k >= 3.0 {
                continue;
            }
            for &t in &thetas {
                let f = |d: f64| {
                    let p = SpectralParameters::new(d, kmin, kmax, 3).unwrap();
                    [
                        mu_lower_spectrum(&p, t).unwrap(),
                        set_lower_spectrum(&p, t).unwrap(),
                        set_assouad_spectrum(&p, t).unwrap(),
                        mu_assouad_spectrum(&p, t).unwrap(),
                    ]
                };
                let (a, b) = (f(k - 1e-12), f(k + 1e-12));
                if a.iter().zip(&b).any(|(x, y)| (x - y).abs() > TOL) {
                    errors.push(format!("jump at δ = {k} for ranks {kmin},{kmax}, θ = {t}"));
                }
            }
        }
    }
    let detail = format!("{tuples} tuples, {} violations{}", errors.len(), errors.first().map(|e| format!(", first: {e}")).unwrap_or_default());
    outcome(tuples >= 500 && errors.is_empty(), detail)
}

// 2 -------------------------------------------------------------------------

fn spectrum_of(cloud: &PointCloud, theta: f64, r_min: f64, r_max: f64, method: CoveringMethod) -> SpectrumEstimate {
    let config = EstimatorConfig {
        theta_grid: vec![theta],
        r_min,
        r_max,
        scales_per_decade: 4,
        centers: CenterStrategy::Stratified(20_000),
        method,
    };
    estimate_spectrum(cloud, SpectrumSide::Assouad, theta, &config).unwrap()
}

fn lattice_reproduction() -> Outcome {
    let reciprocal = synth_reciprocal_set(100_000).unwrap();
    let mut worst: f64 = 0.0;
    let mut vals = Vec::new();
    for t in [0.25, 0.5, 0.75] {
        let v = spectrum_of(&reciprocal, t, 1e-6, 1e-3, CoveringMethod::Exact1d).value;
        worst = worst.max((v - lattice_spectrum(1, t).unwrap()).abs());
        vals.push(format!("{v:.3}"));
    }
    let lattice = synth_inverted_lattice(2, 300).unwrap();
    let v = spectrum_of(&lattice, 0.25, 1.2e-4, 1e-2, CoveringMethod::GridBoxes).value;
    let dev2 = (v - lattice_spectrum(2, 0.25).unwrap()).abs();
    outcome(
        worst <= 0.1 && dev2 <= 0.15,
        format!("reciprocal {} (worst deviation {worst:.3}), Z² lattice {v:.3} vs 4/3", vals.join("/")),
    )
}

// 3 -------------------------------------------------------------------------

fn delta_at(group: &GroupPresentation, max_len: usize) -> DeltaEstimate {
    let base = OrbitPoint::Interior(ModelPoint::origin(Model::HalfSpace, group.dim()));
    let sample = enumerate_orbit(group, base, max_len).unwrap();
    let curve = orbit_counting_curve(&sample, &default_threshold_grid(&sample, 64)).unwrap();
    estimate_delta(&curve).unwrap()
}

const TWO_PARABOLIC_LEN: usize = 13;

fn exponent_checks() -> Outcome {
    let cyclic = delta_at(&presets::cyclic_parabolic(), 200);
    let two = delta_at(&presets::two_parabolic(4.0, 4.0).unwrap(), TWO_PARABOLIC_LEN);
    outcome(
        (cyclic.delta - 0.5).abs() <= 0.05 && two.delta > 0.5 && two.stderr < 0.05,
        format!(
            "cyclic {:.4} ± {:.4}; two-parabolic at length {TWO_PARABOLIC_LEN}: {:.4} ± {:.4}",
            cyclic.delta, cyclic.stderr, two.delta, two.stderr
        ),
    )
}

// 4 -------------------------------------------------------------------------

fn self_consistency() -> Outcome {
    let g = presets::two_parabolic(4.0, 4.0).unwrap();
    let delta = delta_at(&g, TWO_PARABOLIC_LEN).delta;
    let p = match SpectralParameters::new(delta, 1, 1, 1) {
        Ok(p) => p,
        Err(e) => return outcome(false, format!("δ̂ = {delta} is not a valid parameter: {e}")),
    };
    let cloud = sample_limit_set_adaptive(&g, 1e-6, DEFAULT_ADAPTIVE_CAP).unwrap();
    let mut worst: f64 = 0.0;
    let mut vals = Vec::new();
    for t in [0.25, 0.5, 0.75] {
        let v = spectrum_of(&cloud, t, 1e-5, 1e-3, CoveringMethod::Exact1d).value;
        let want = set_assouad_spectrum(&p, t).unwrap();
        worst = worst.max((v - want).abs());
        vals.push(format!("{v:.3} vs {want:.3}"));
    }
    outcome(worst <= 0.15, format!("δ̂ = {delta:.4}, {} points; {} (worst {worst:.3})", cloud.len(), vals.join(", ")))
}

// 5 -------------------------------------------------------------------------

/// Horoballs at ∞ (rank `top`) and 0 (rank `bottom`) with families of
/// shrinking horoballs accumulating at each, plus the points swept by z.
fn synthetic_geometry(top: u32, bottom: u32) -> (CuspGeometry, Vec<BoundaryPoint>) {
    let hs = |x: f64| BoundaryPoint::half_space(&[x, 0.0]).unwrap();
    let mut balls = vec![
        (Horoball::new(BoundaryPoint::infinity(3).unwrap(), 1.01).unwrap(), top),
        (Horoball::new(hs(0.0), 0.99).unwrap(), bottom),
    ];
    let mut points = vec![BoundaryPoint::infinity(3).unwrap(), hs(0.0)];
    for i in 0..=84 {
        let u = 1.0 + 0.25 * i as f64;
        balls.push((Horoball::new(hs(u.exp()), 0.75).unwrap(), bottom));
        balls.push((Horoball::new(hs((-u).exp()), 0.75 * (-2.0 * u).exp()).unwrap(), top));
        points.push(hs(u.exp()));
        points.push(hs((-u).exp()));
    }
    for i in 0..=1100 {
        let u = 0.02 * i as f64;
        points.push(hs(-u.exp()));
        points.push(hs(-(-u).exp()));
    }
    (CuspGeometry::new(3, balls).unwrap(), points)
}

fn measure_branches() -> Outcome {
    let cases: [(u32, u32, &[f64]); 3] = [(2, 1, &[1.2, 1.5, 1.8, 2.0]), (1, 1, &[0.75, 1.4]), (2, 2, &[1.2, 1.8])];
    let thetas: Vec<f64> = (1..=19).map(|i| 0.05 * i as f64).collect();
    let mut worst: f64 = 0.0;
    let mut at = String::new();
    let mut branches = std::collections::BTreeSet::new();
    for (top, bottom, deltas) in cases {
        let (geo, points) = synthetic_geometry(top, bottom);
        for &delta in deltas {
            let model = MeasureModel::new(delta, geo.clone()).unwrap();
            let p = SpectralParameters::new(delta, top.min(bottom), top.max(bottom), 2).unwrap();
            branches.insert(branch_name(&p));
            for &t in &thetas {
                let s = measure_spectrum_sweep(&model, &points, &[40.0], t).unwrap();
                let hi = (s.sup - mu_assouad_spectrum(&p, t).unwrap()).abs();
                let lo = (s.inf - mu_lower_spectrum(&p, t).unwrap()).abs();
                if hi.max(lo) > worst {
                    worst = hi.max(lo);
                    at = format!("δ = {delta}, ranks {top}/{bottom}, θ = {t:.2}");
                }
            }
        }
    }
    let names: Vec<&str> = branches.into_iter().collect();
    outcome(worst <= 0.05, format!("worst deviation {worst:.4} at {at}; regimes {}", names.join(", ")))
}

fn branch_name(p: &SpectralParameters) -> &'static str {
    let (d, lo, hi) = (p.delta(), p.k_min() as f64, p.k_max() as f64);
    if d < lo {
        "δ < k_min"
    } else if d > hi {
        "δ > k_max"
    } else if lo < hi {
        "k_min ≤ δ ≤ k_max, mixed ranks"
    } else {
        "δ = k"
    }
}

// 6 -------------------------------------------------------------------------

fn geometric_lemmas() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    // horoball slices: height ≍ x²/R and x ≍ √(R y)
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &radius in &[0.01, 0.1, 1.0, 10.0, 100.0] {
        for i in 1..=100 {
            let (x, y) = tangent_circle_point(radius, 0.015 * i as f64);
            let r = y * radius / (x * x);
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    pass &= lo >= 0.25 && hi <= 1.0;
    notes.push(format!("slice yR/x² in [{lo:.3}, {hi:.3}]"));

    // entry time: after S the ray runs straight down the cusp
    let mut worst = f64::INFINITY;
    for &(x, size) in &[(0.3, 0.2), (0.0, 1e-3), (5.0, 0.01), (-2.0, 0.5)] {
        let h = Horoball::new(BoundaryPoint::half_space(&[x]).unwrap(), size).unwrap();
        let s = cusp_entry_time(&h);
        let m = MeasureModel::new(0.75, CuspGeometry::new(2, vec![(h, 1)]).unwrap()).unwrap();
        let z = BoundaryPoint::half_space(&[x]).unwrap();
        for j in 0..=40 {
            let t = 10.0 * s * (1.0 + 0.25 * j as f64);
            worst = worst.min(m.escape_function(&z, t).unwrap().rho / t);
        }
    }
    pass &= worst >= 0.9;
    notes.push(format!("min ρ/T {worst:.3}"));

    // parabolic images of a horoball: distance ~ 1/n, size ~ 1/n²
    let f = MobiusIsometry::real(1.0, 1.0, 0.0, 1.0).unwrap();
    let h = Horoball::new(cayley_boundary(&BoundaryPoint::half_space(&[0.0]).unwrap()), 0.5).unwrap();
    let r = cusp_horoball_scaling_check(&f, &cayley_infinity_image(2), &h, (10..=1000).step_by(10)).unwrap();
    pass &= r.distance_band <= 16.0 && r.size_band <= 16.0;
    notes.push(format!("bands {:.3}/{:.3}", r.distance_band, r.size_band));

    // geodesic points of endpoints e^{-T} apart stay close
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &a in &[0.0f64, 0.7, 2.0, 4.5] {
        for i in 0..=50 {
            let t = 5.0 + 0.5 * i as f64;
            let z = BoundaryPoint::ball(&[a.cos(), a.sin()]).unwrap();
            let b = a + 2.0 * (0.5 * (-t).exp()).asin();
            let u = BoundaryPoint::ball(&[b.cos(), b.sin()]).unwrap();
            let d = hyperbolic_distance(&geodesic_point(&z, t).unwrap(), &geodesic_point(&u, t).unwrap()).unwrap();
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    pass &= hi.max(1.0 / lo) < 4.0;
    notes.push(format!("d(z_T, u_T) in [{lo:.3}, {hi:.3}]"));

    // ρ inequalities on random disjoint horoballs in the upper half-space
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut lipschitz, mut separate, mut checks) = (0usize, 0usize, 0usize);
    for _ in 0..300 {
        let n = rng.gen_range(1..12);
        let raw: Vec<([f64; 2], f64, u32)> = (0..n)
            .map(|_| ([rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)], rng.gen_range(0.01..1.5), rng.gen_range(1..=2)))
            .collect();
        let mut scale: f64 = 1.0;
        for (i, a) in raw.iter().enumerate() {
            for b in &raw[i + 1..] {
                let d2 = (a.0[0] - b.0[0]).powi(2) + (a.0[1] - b.0[1]).powi(2);
                scale = scale.min(0.99 * d2 / (a.1 * b.1));
            }
        }
        let mut balls: Vec<(Horoball, u32)> = raw
            .iter()
            .filter(|r| r.1 * scale > 1e-9)
            .map(|r| (Horoball::new(BoundaryPoint::half_space(&r.0).unwrap(), r.1 * scale).unwrap(), r.2))
            .collect();
        if rng.gen_bool(0.5) {
            let top = balls.iter().map(|b| b.0.size()).fold(0.5, f64::max) * 1.01;
            balls.push((Horoball::new(BoundaryPoint::infinity(3).unwrap(), top).unwrap(), 2));
        }
        let m = MeasureModel::new(rng.gen_range(1.01..2.0), CuspGeometry::new(3, balls).unwrap()).unwrap();
        for _ in 0..10 {
            let z = BoundaryPoint::half_space(&[rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5)]).unwrap();
            let t = rng.gen_range(0.5..30.0);
            let dt = rng.gen_range(0.0..5.0);
            let theta = rng.gen_range(0.05..0.95);
            checks += 1;
            let a = m.escape_function(&z, t).unwrap();
            let b = m.escape_function(&z, t + dt).unwrap();
            if (a.rho - b.rho).abs() > dt + 1e-9 {
                lipschitz += 1;
            }
            let early = m.escape_function(&z, t * theta).unwrap();
            if (a.horoball.is_none() || a.horoball != early.horoball) && a.rho > t * (1.0 - theta) - early.rho + 1e-9 {
                separate += 1;
            }
        }
    }
    pass &= lipschitz == 0 && separate == 0;
    notes.push(format!("ρ inequalities: {lipschitz}+{separate} violations in {checks} checks"));

    outcome(pass, notes.join("; "))
}

// 7 -------------------------------------------------------------------------

fn determinism() -> Outcome {
    let runs = [("t1a", 1), ("t1b", 1), ("t8", 8)];
    let mut outputs = Vec::new();
    for (tag, threads) in runs {
        match common::run_suite(tag, Some(threads)) {
            Ok(files) => outputs.push(files),
            Err(e) => return outcome(false, e),
        }
    }
    let differing: Vec<String> = outputs[0]
        .iter()
        .filter(|(name, bytes)| outputs[1..].iter().any(|o| o.get(*name) != Some(bytes)))
        .map(|(name, _)| name.clone())
        .collect();
    let stale = common::golden_mismatches(&outputs[0]);
    outcome(
        differing.is_empty() && stale.is_empty(),
        format!(
            "{} golden files, {} differ between runs, {} differ from the checked-in goldens",
            outputs[0].len(),
            differing.len(),
            stale.len()
        ),
    )
}
