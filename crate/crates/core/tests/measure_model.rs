use kleinian_spectra::empirical::measure_spectrum_ratio;
use kleinian_spectra::group::{assign_standard_horoballs, find_parabolic_cusps, presets};
use kleinian_spectra::hyperbolic::{BoundaryPoint, Horoball};
use kleinian_spectra::measure::*;
use proptest::prelude::*;

fn hs(c: &[f64]) -> BoundaryPoint {
    BoundaryPoint::half_space(c).unwrap()
}

fn inf(dim: usize) -> BoundaryPoint {
    BoundaryPoint::infinity(dim).unwrap()
}

fn model(dim: usize, delta: f64, balls: Vec<(Horoball, u32)>) -> MeasureModel {
    MeasureModel::new(delta, CuspGeometry::new(dim, balls).unwrap()).unwrap()
}

#[test]
fn no_cusps_gives_pure_exponential_decay() {
    let m = MeasureModel::new(0.7, CuspGeometry::empty(2).unwrap()).unwrap();
    for &x in &[-3.0, 0.0, 0.4, 10.0] {
        for &t in &[0.0, 1.0, 7.5, 30.0] {
            let z = hs(&[x]);
            assert_eq!(m.escape_function(&z, t).unwrap().rho, 0.0);
            assert!((m.model_ball_measure(&z, t).unwrap() - (-0.7 * t).exp()).abs() < 1e-15);
            assert!((measure_spectrum_ratio(&m, &z, t.max(1.0), 0.5).unwrap() - 0.7).abs() < 1e-12);
        }
    }
}

#[test]
fn vertical_ray_depth_is_the_log_height() {
    let m = model(2, 0.75, vec![(Horoball::new(inf(2), 1.0).unwrap(), 1)]);
    for &t in &[0.0, 0.5, 3.0, 20.0] {
        let e = m.escape_function(&inf(2), t).unwrap();
        assert!((e.rho - t).abs() < 1e-12);
        assert_eq!(e.rank, 1);
    }
    // rays to finite points leave the horoball {y ≥ 1} straight away
    assert_eq!(m.escape_function(&hs(&[0.0]), 2.0).unwrap(), Escape { rho: 0.0, rank: 0, horoball: None });
}

#[test]
fn cusp_rays_escape_at_unit_speed_after_entry() {
    let h = Horoball::new(hs(&[0.3]), 0.2).unwrap();
    let s = cusp_entry_time(&h);
    assert!(s > 0.0);
    let m = model(2, 0.75, vec![(h, 1)]);
    for i in 0..50 {
        let t = s + 0.7 * i as f64;
        let e = m.escape_function(&hs(&[0.3]), t).unwrap();
        assert!((e.rho - (t - s)).abs() < 1e-9, "T = {t}");
        if t >= 10.0 * s {
            assert!(e.rho / t >= 0.9 && e.rho / t <= 1.0);
        }
    }
    let t = s + 12.0;
    let want = (-t * 0.75 - (t - s) * (0.75 - 1.0)).exp();
    assert!((m.model_ball_measure(&hs(&[0.3]), t).unwrap() / want - 1.0).abs() < 1e-9);
}

/// Heights of e^{-T} underflow past T ≈ 700 and their squares past 350.
#[test]
fn escape_stays_exact_at_very_large_times() {
    for &(x, size) in &[(0.0, 1e-3), (5.0, 0.01)] {
        let h = Horoball::new(hs(&[x]), size).unwrap();
        let s = cusp_entry_time(&h);
        let m = model(2, 0.75, vec![(h, 1)]);
        for &t in &[300.0, 400.0, 700.0, 900.0] {
            let rho = m.escape_function(&hs(&[x]), t).unwrap().rho;
            assert!((rho - (t - s)).abs() < 1e-9 * t, "T = {t}: {rho}");
        }
    }
    let m = model(2, 0.75, vec![(Horoball::new(inf(2), 1.0).unwrap(), 1)]);
    assert_eq!(m.escape_function(&inf(2), 900.0).unwrap().rho, 900.0);
}

#[test]
fn log_slope_at_a_cusp_tends_to_twice_delta_minus_rank() {
    let h = Horoball::new(hs(&[0.0]), 0.5).unwrap();
    let m = model(2, 0.8, vec![(h, 1)]);
    let z = hs(&[0.0]);
    let slope = |t: f64| m.log_ball_measure(&z, t).unwrap() - m.log_ball_measure(&z, t + 1.0).unwrap();
    assert!((slope(40.0) - (2.0 * 0.8 - 1.0)).abs() < 1e-9);
    // cusp centre, δ > k, θ = 1/2: the ratio reaches 2δ - k once Tθ passes
    // the entry time S = ln 10⁴
    let h = Horoball::new(hs(&[0.0]), 1e-4).unwrap();
    let s = cusp_entry_time(&h);
    let m = model(2, 0.9, vec![(h, 1)]);
    let mut last = f64::INFINITY;
    for i in 1..=40 {
        let t = 0.75 * i as f64;
        let gap = (measure_spectrum_ratio(&m, &z, t, 0.5).unwrap() - (2.0 * 0.9 - 1.0)).abs();
        assert!(gap <= last + 1e-12, "T = {t}");
        if 0.5 * t >= s {
            assert!(gap < 1e-9);
        } else {
            assert!(gap > 0.0);
        }
        last = gap;
    }
}

#[test]
fn common_horoball_with_delta_equal_rank_gives_delta() {
    let h = Horoball::new(hs(&[0.0, 0.0]), 0.5).unwrap();
    let m = model(3, 1.0, vec![(h, 1)]);
    let z = hs(&[1e-9, 0.0]);
    let (t, theta) = (15.0, 0.6);
    assert!(m.escape_function(&z, t * theta).unwrap().horoball.is_some());
    assert!(m.escape_function(&z, t).unwrap().horoball.is_some());
    assert!((measure_spectrum_ratio(&m, &z, t, theta).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn squeezed_shadows_follow_the_power_law() {
    let m = model(2, 0.75, vec![]);
    let h = Horoball::new(hs(&[2.0]), 0.1).unwrap();
    assert!((m.squeezed_shadow_measure(&h, 1, 1.0).unwrap() - 0.1f64.powf(0.75)).abs() < 1e-15);
    let v = m.squeezed_shadow_measure(&h, 1, 0.01).unwrap();
    assert!((v - 0.017783).abs() < 5e-7, "{v}");
    let half = m.squeezed_shadow_measure(&h, 1, 0.005).unwrap();
    assert!((half / v - 2f64.powf(-0.5)).abs() < 1e-12);
    assert!(m.squeezed_shadow_measure(&h, 1, 0.0).is_err());
    assert!(m.squeezed_shadow_measure(&Horoball::new(inf(2), 1.0).unwrap(), 1, 0.5).is_err());
}

#[test]
fn horoball_window_diagnostic() {
    let empty = MeasureModel::new(0.75, CuspGeometry::empty(2).unwrap()).unwrap();
    let r = empty.horoball_count_diagnostic(&hs(&[0.0]), 1.0, 5.0).unwrap();
    assert!(r.empty && r.ratio == 0.0);

    let g = presets::two_parabolic(4.0, 4.0).unwrap();
    let search = find_parabolic_cusps(&g, 5).unwrap();
    let balls = assign_standard_horoballs(&g, &search).unwrap();
    let geo = CuspGeometry::from_ranked(2, &balls).unwrap();
    let m = MeasureModel::new(0.6, geo).unwrap();
    let z = hs(&[0.0]);
    let a = m.horoball_count_diagnostic(&z, 0.5, 6.0).unwrap();
    let b = m.horoball_count_diagnostic(&z, 0.5, 11.5).unwrap();
    assert!(!a.empty);
    // no enumerated horoball is smaller than e^{-6} in this window, so
    // doubling T - t halves the ratio
    assert_eq!(a.count, b.count);
    assert!((b.ratio / a.ratio - 0.5).abs() < 1e-12);
    let mut worst: f64 = 0.0;
    for i in 1..8 {
        for j in 1..6 {
            let t = 0.5 * i as f64;
            let r = m.horoball_count_diagnostic(&z, t, t + 1.5 * j as f64).unwrap();
            worst = worst.max(r.ratio);
        }
    }
    assert!(worst.is_finite() && worst < 10.0, "largest ratio {worst}");
}

#[test]
fn geometry_and_model_validation() {
    let a = Horoball::new(hs(&[0.0]), 1.0).unwrap();
    let b = Horoball::new(hs(&[0.5]), 1.0).unwrap();
    assert!(CuspGeometry::new(2, vec![(a, 1), (b, 1)]).is_err());
    assert!(CuspGeometry::new(2, vec![(a, 2)]).is_err());
    let geo = CuspGeometry::new(2, vec![(a, 1)]).unwrap();
    assert!(MeasureModel::new(0.5, geo.clone()).is_err());
    assert!(MeasureModel::new(1.5, geo.clone()).is_err());
    assert!(MeasureModel::new(0.51, geo).is_ok());
}

#[test]
fn measure_decreases_when_delta_dominates_every_rank() {
    let balls = vec![
        (Horoball::new(inf(3), 2.0).unwrap(), 2),
        (Horoball::new(hs(&[0.0, 0.0]), 1.0).unwrap(), 1),
        (Horoball::new(hs(&[1.5, 0.0]), 0.5).unwrap(), 2),
    ];
    let m = model(3, 2.0, balls);
    for z in [hs(&[0.0, 0.0]), hs(&[1.5, 1e-6]), hs(&[3.0, 3.0]), inf(3)] {
        let mut last = f64::INFINITY;
        for i in 0..200 {
            let v = m.log_ball_measure(&z, 0.1 * i as f64).unwrap();
            assert!(v <= last + 1e-12);
            last = v;
        }
    }
}

/// Random disjoint horoballs in the upper half-space of dimension 3: finite
/// bases in a square with sizes shrunk until `|x - y|² ≥ s_x s_y` for every
/// pair, plus one at ∞ above all of them.
fn configuration() -> impl Strategy<Value = (Vec<(Horoball, u32)>, f64)> {
    (
        prop::collection::vec(((-2.0..2.0f64, -2.0..2.0f64), 0.01..1.5f64, 1u32..=2), 1..12),
        1.01..2.0f64,
        prop::bool::ANY,
    )
        .prop_map(|(raw, delta, top)| {
            let mut scale: f64 = 1.0;
            for (i, a) in raw.iter().enumerate() {
                for b in &raw[i + 1..] {
                    let d2 = (a.0 .0 - b.0 .0).powi(2) + (a.0 .1 - b.0 .1).powi(2);
                    scale = scale.min(0.99 * d2 / (a.1 * b.1));
                }
            }
            let mut balls: Vec<(Horoball, u32)> = raw
                .iter()
                .filter(|r| r.1 * scale > 1e-9)
                .map(|r| (Horoball::new(hs(&[r.0 .0, r.0 .1]), r.1 * scale).unwrap(), r.2))
                .collect();
            if top {
                let h = balls.iter().map(|b| b.0.size()).fold(0.5, f64::max) * 1.01;
                balls.push((Horoball::new(inf(3), h).unwrap(), 2));
            }
            (balls, delta)
        })
}

fn ray_target() -> impl Strategy<Value = BoundaryPoint> {
    (-2.5..2.5f64, -2.5..2.5f64).prop_map(|(x, y)| hs(&[x, y]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn escape_is_one_lipschitz_in_time(
        (balls, delta) in configuration(),
        z in ray_target(),
        t in 0.0..30.0f64,
        dt in 0.0..5.0f64,
    ) {
        let m = model(3, delta, balls);
        let a = m.escape_function(&z, t).unwrap().rho;
        let b = m.escape_function(&z, t + dt).unwrap().rho;
        prop_assert!((a - b).abs() <= dt + 1e-9, "{} {} {}", a, b, dt);
    }

    #[test]
    fn separate_horoballs_bound_the_escape(
        (balls, delta) in configuration(),
        z in ray_target(),
        t in 0.5..30.0f64,
        theta in 0.05..0.95f64,
    ) {
        let m = model(3, delta, balls);
        let late = m.escape_function(&z, t).unwrap();
        let early = m.escape_function(&z, t * theta).unwrap();
        if late.horoball.is_none() || late.horoball != early.horoball {
            prop_assert!(late.rho <= t * (1.0 - theta) - early.rho + 1e-9);
        }
    }
}
