use proptest::prelude::*;
use tempmap::degrade::{
    degrade_temporal, make_training_pair, spatial_degrade_with, DegradationConfig, Interval, SpatialParams,
    TemporalParams,
};
use tempmap::{
    extract_ipe, fill_cold_pixels, normalize, psnr, remove_hot_pixels, simulate_capture, simulate_capture_dynamic,
    simulate_event_stream, ssim, time_to_intensity, HotPixelTable, Image64, Intensity64, Polarity, Profile64,
    Radiance64, Scenes64, Sensor64, TableSource, TemporalMatrix, COLD,
};

fn analytic_profile() -> impl Strategy<Value = Profile64> {
    prop_oneof![
        Just(Profile64::step()),
        (1.0f64..1e6).prop_map(|t| Profile64::linear(t).unwrap()),
        (1.0f64..1e6).prop_map(|t| Profile64::quadratic(t).unwrap()),
    ]
}

/// Monotone knot tables starting at `(0, 0)` and ending at TR = 1.
fn tabulated_profile() -> impl Strategy<Value = Profile64> {
    prop::collection::vec((1.0f64..1e4, 0.0f64..1.0), 1..6).prop_map(|steps| {
        let mut knots = vec![(0.0, 0.0)];
        let (mut t, mut tr) = (0.0, 0.0);
        let n = steps.len();
        for (i, (dt, frac)) in steps.into_iter().enumerate() {
            t += dt;
            tr = if i + 1 == n { 1.0 } else { tr + (1.0 - tr) * frac };
            knots.push((t, tr));
        }
        Profile64::tabulated(knots).unwrap()
    })
}

fn any_profile() -> impl Strategy<Value = Profile64> {
    prop_oneof![analytic_profile(), tabulated_profile()]
}

fn scene(w: usize, h: usize) -> impl Strategy<Value = Radiance64> {
    prop::collection::vec(1e-5f64..0.05, w * h).prop_map(move |v| Radiance64::from_vec(w, h, v).unwrap())
}

proptest! {
    #[test]
    fn h_is_monotone(p in any_profile(), a in 0.0f64..2e6, b in 0.0f64..2e6) {
        let (t1, t2) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(p.h_integral(t1).unwrap() <= p.h_integral(t2).unwrap());
    }

    #[test]
    fn inversion_round_trip(p in any_profile(), frac in 0.0f64..1.0) {
        let v = frac * p.h_integral(3.0 * p.t_end().max(1.0)).unwrap();
        let t = p.h_inverse(v).unwrap();
        let back = p.h_integral(t).unwrap();
        prop_assert!((back - v).abs() <= p.transmittance(t) * 0.5 + 1e-9 * v.max(1.0), "v={v} t={t} back={back}");
    }

    #[test]
    fn earlier_means_brighter(p in any_profile(), a in 1u64..5_000_000, d in 1u64..1_000_000) {
        let m = TemporalMatrix::new(2, 1, 1, vec![a, a + d]).unwrap();
        let raw = time_to_intensity(&m, &p).unwrap();
        prop_assert!(raw[(0, 0)] > raw[(1, 0)]);
    }

    #[test]
    fn normalize_range_and_idempotence(v in prop::collection::vec(1e-9f64..1e3, 2..64), k in 1e-6f64..1e6) {
        prop_assume!(v.iter().any(|x| *x != v[0]));
        let img = Image64::new(v.len(), 1, v.clone()).unwrap();
        let n = normalize(&img).unwrap();
        let lo = n.data().iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = n.data().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!((lo, hi), (0.0, 1.0));
        let again = normalize(&n.clone().into_image()).unwrap();
        for (a, b) in again.data().iter().zip(n.data()) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
        let scaled = normalize(&img.map(|x| x * k)).unwrap();
        for (a, b) in scaled.data().iter().zip(n.data()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn brighter_fires_no_later(s in scene(16, 1), p in analytic_profile()) {
        let m = simulate_capture(&s, &Sensor64::new(0.2, 16, 1, 1).unwrap(), &p).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                if s[(i, 0)] > s[(j, 0)] && !m.is_cold(j, 0) {
                    prop_assert!(m.get(i, 0).unwrap() <= m.get(j, 0).unwrap());
                }
            }
        }
    }

    #[test]
    fn ramp_streams_are_positive_and_consistent(s in scene(6, 5), p in analytic_profile(), c in 0.05f64..0.5) {
        let sensor = Sensor64::new(c, 6, 5, 1).unwrap();
        let m = simulate_capture(&s, &sensor, &p).unwrap();
        let t_max = m.max_valid().unwrap_or(0);
        let stream = simulate_event_stream(&s, &sensor, &p, t_max).unwrap();
        prop_assert!(stream.events().iter().all(|e| e.polarity == Polarity::Positive));
        prop_assert_eq!(extract_ipe(&stream), m);
    }

    #[test]
    fn constant_sequence_reduces_to_static(s in scene(5, 4), p in any_profile(), n in 1usize..6, dt in 1.0f64..5e4) {
        let sensor = Sensor64::new(0.2, 5, 4, 1).unwrap();
        let seq = Scenes64::new(vec![s.clone(); n], dt).unwrap();
        prop_assert_eq!(
            simulate_capture_dynamic(&seq, &sensor, &p).unwrap(),
            simulate_capture(&s, &sensor, &p).unwrap()
        );
    }

    #[test]
    fn remove_and_fill_commute(
        legit in prop::collection::vec(prop::option::weighted(0.8, 1_000u64..1_000_000), 36),
        hot_mask in prop::collection::vec(prop::bool::weighted(0.1), 36),
        hot_t in prop::collection::vec(1u64..1_000, 36),
    ) {
        prop_assume!(legit.iter().zip(&hot_mask).any(|(t, h)| t.is_some() && !h));
        let mut table = HotPixelTable::new(6, 6, TableSource::File).unwrap();
        let data: Vec<u64> = (0..36)
            .map(|i| {
                if hot_mask[i] {
                    table.insert(i % 6, i / 6).unwrap();
                    hot_t[i]
                } else {
                    legit[i].unwrap_or(COLD)
                }
            })
            .collect();
        let m = TemporalMatrix::new(6, 6, 1, data).unwrap();
        let a = fill_cold_pixels(&remove_hot_pixels(&m, &table).unwrap()).unwrap();
        let b = remove_hot_pixels(&fill_cold_pixels(&m).unwrap(), &table).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.cold_count(), 0);
        prop_assert!(time_to_intensity(&a, &Profile64::linear(1e5).unwrap()).is_ok());
    }

    #[test]
    fn ssim_bounds_and_identity(v in prop::collection::vec(0.0f64..=1.0, 16 * 12), w in prop::collection::vec(0.0f64..=1.0, 16 * 12)) {
        let a = Intensity64::from_vec(16, 12, v).unwrap();
        let b = Intensity64::from_vec(16, 12, w).unwrap();
        let s = ssim(&a, &b).unwrap();
        prop_assert!((-1.0..=1.0).contains(&s));
        prop_assert!((ssim(&a, &a).unwrap() - 1.0).abs() < 1e-9);
        prop_assert!((s - ssim(&b, &a).unwrap()).abs() < 1e-12);
        if a != b {
            prop_assert!(s < 1.0);
        }
    }

    #[test]
    fn decibels_compose(c in 1e-6f64..1e3, r1 in 1.0001f64..1e3, r2 in 1.0001f64..1e3) {
        let b = c * r2;
        let a = b * r1;
        let whole = tempmap::dynamic_range(a, c).unwrap().range_db;
        let parts = tempmap::dynamic_range(a, b).unwrap().range_db + tempmap::dynamic_range(b, c).unwrap().range_db;
        prop_assert!((whole - parts).abs() < 1e-9);
    }
}

fn patch(side: usize) -> Radiance64 {
    Radiance64::from_vec(
        side,
        side,
        (0..side * side).map(|i| 1e-4 + 0.02 * (((i * 37) % 101) as f64 / 100.0)).collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pairs_are_deterministic(seed in 0u64..(1 << 62)) {
        let cfg = DegradationConfig { seed: Some(seed), downsample_factor: 1, ..Default::default() };
        let p = Profile64::linear(1e5).unwrap();
        let sensor = Sensor64::default();
        let a = make_training_pair(&patch(72), &sensor, &p, &cfg).unwrap();
        let b = make_training_pair(&patch(72), &sensor, &p, &cfg).unwrap();
        prop_assert_eq!(a.lq, b.lq);
        prop_assert_eq!(a.hq, b.hq);
        prop_assert_eq!(a.hot_pixels, b.hot_pixels);
    }

    /// LQ is always spatial(intensity(temporal(scene))), whatever the spatial order.
    #[test]
    fn temporal_stage_precedes_spatial_stage(seed in 0u64..(1 << 62), shuffle in any::<bool>()) {
        let cfg = DegradationConfig { seed: Some(seed), downsample_factor: 2, shuffle_spatial: shuffle, ..Default::default() };
        let p = Profile64::linear(1e5).unwrap();
        let sensor = Sensor64::default().with_resolution(144, 144).unwrap();
        let scene = patch(144);
        let pair = make_training_pair(&scene, &sensor, &p, &cfg).unwrap();
        prop_assert_eq!(pair.temporal, TemporalParams::sample(&cfg, seed));
        prop_assert_eq!(pair.spatial, SpatialParams::sample(&cfg, seed));
        let temporal = degrade_temporal(&scene, &sensor, &p, &pair.temporal, seed).unwrap();
        let intensity = tempmap::reconstruct(&temporal.matrix, &p).unwrap();
        prop_assert_eq!(pair.lq, spatial_degrade_with(&intensity, &pair.spatial, seed).unwrap());
    }

    #[test]
    fn zero_configuration_is_the_ideal_pipeline(c in 0.05f64..0.5, seed in any::<u64>()) {
        let mut cfg = DegradationConfig::identity(c);
        cfg.seed = Some(seed >> 1);
        let p = Profile64::linear(1e5).unwrap();
        let sensor = Sensor64::new(c, 72, 72, 1).unwrap();
        let pair = make_training_pair(&patch(72), &sensor, &p, &cfg).unwrap();
        let ideal = tempmap::reconstruct(&fill_cold_pixels(&simulate_capture(&patch(72), &sensor, &p).unwrap()).unwrap(), &p).unwrap();
        prop_assert_eq!(&pair.lq, &ideal);
        prop_assert_eq!(&pair.hq, &ideal);
        prop_assert_eq!(cfg.c_range, Interval(c, c));
    }
}

#[test]
fn psnr_decreases_with_noise() {
    use tempmap::degrade::add_gaussian_noise;
    let base = Image64::from_fn(64, 64, |x, y| 0.25 + 0.5 * ((x ^ y) % 7) as f64 / 6.0);
    let reference = Intensity64::new(base.clone()).unwrap();
    let sigmas: Vec<f64> = (1..=20).map(|i| i as f64 * 0.005).collect();
    let scores: Vec<f64> = sigmas
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let noisy = Intensity64::clamped(add_gaussian_noise(&base, s, 1000 + i as u64));
            psnr(&reference, &noisy, 1.0).unwrap()
        })
        .collect();
    let mut ordered = 0;
    let mut total = 0;
    for i in 0..scores.len() {
        for j in i + 1..scores.len() {
            total += 1;
            if scores[i] >= scores[j] {
                ordered += 1;
            }
        }
    }
    assert!(ordered as f64 >= 0.95 * total as f64, "{ordered}/{total}");
}
