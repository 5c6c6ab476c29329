use std::io::Write;

use proptest::prelude::*;
use tempmap::degrade::{DegradationConfig, Interval};
use tempmap::io::{self, Pgm, TMAT_HEADER_LEN};
use tempmap::{Error, Event, EventStream, HotPixelTable, Intensity64, Polarity, TableSource, TemporalMatrix, COLD};

fn stream() -> impl Strategy<Value = EventStream> {
    (1usize..300, 1usize..300).prop_flat_map(|(w, h)| {
        prop::collection::vec((0u64..u64::MAX, 0..w as u16, 0..h as u16, any::<bool>()), 0..200).prop_map(
            move |raw| {
                let events = raw
                    .into_iter()
                    .map(|(t, x, y, p)| Event::new(t, x, y, if p { Polarity::Positive } else { Polarity::Negative }))
                    .collect();
                EventStream::from_unsorted(w, h, events).unwrap().0
            },
        )
    })
}

fn matrix() -> impl Strategy<Value = TemporalMatrix> {
    (1usize..40, 1usize..40, 1u32..1000).prop_flat_map(|(w, h, tick)| {
        prop::collection::vec(prop_oneof![Just(COLD), any::<u64>()], w * h)
            .prop_map(move |data| TemporalMatrix::new(w, h, tick, data).unwrap())
    })
}

fn pgm() -> impl Strategy<Value = Pgm> {
    (1usize..30, 1usize..30, 1u16..=u16::MAX).prop_flat_map(|(width, height, maxval)| {
        prop::collection::vec(0..=maxval, width * height).prop_map(move |data| Pgm { width, height, maxval, data })
    })
}

proptest! {
    #[test]
    fn evs0_is_a_bijection(s in stream()) {
        let mut buf = Vec::new();
        io::write_events(&mut buf, &s).unwrap();
        prop_assert_eq!(buf.len(), io::EVS_HEADER_LEN + s.len() * io::EVS_RECORD_LEN);
        prop_assert_eq!(io::read_events(buf.as_slice(), None).unwrap(), s);
    }

    #[test]
    fn csv_round_trip(s in stream()) {
        let mut buf = Vec::new();
        io::write_events_csv(&mut buf, &s).unwrap();
        prop_assert_eq!(io::read_events(buf.as_slice(), Some((s.width(), s.height()))).unwrap(), s);
    }

    #[test]
    fn tmat_is_a_bijection(m in matrix()) {
        let mut buf = Vec::new();
        io::write_temporal_matrix(&mut buf, &m).unwrap();
        prop_assert_eq!(buf.len(), TMAT_HEADER_LEN + m.timestamps().len() * 8);
        prop_assert_eq!(io::read_temporal_matrix(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn pgm_is_a_bijection(p in pgm()) {
        let mut buf = Vec::new();
        p.write(&mut buf).unwrap();
        prop_assert_eq!(Pgm::read(buf.as_slice()).unwrap(), p);
    }

    #[test]
    fn pgm16_quantization_bound(v in prop::collection::vec(0.0f64..=1.0, 1..200)) {
        let img = Intensity64::from_vec(v.len(), 1, v).unwrap();
        let mut buf = Vec::new();
        io::write_image(&mut buf, &img, 16).unwrap();
        let back: Intensity64 = io::read_image(buf.as_slice()).unwrap();
        for (a, b) in img.data().iter().zip(back.data()) {
            prop_assert!((a - b).abs() <= 1.0 / 131_070.0 + 1e-15);
        }
    }

    #[test]
    fn hot_table_round_trip(w in 1usize..500, h in 1usize..500, pts in prop::collection::vec((0usize..500, 0usize..500), 0..50)) {
        let mut t = HotPixelTable::new(w, h, TableSource::Calibrated).unwrap();
        for (x, y) in pts {
            if x < w && y < h {
                t.insert(x, y).unwrap();
            }
        }
        let mut buf = Vec::new();
        io::write_hot_table(&mut buf, &t).unwrap();
        let back = io::read_hot_table(buf.as_slice()).unwrap();
        prop_assert_eq!((back.width(), back.height()), (w, h));
        prop_assert_eq!(back.iter().collect::<Vec<_>>(), t.iter().collect::<Vec<_>>());
    }

    #[test]
    fn config_round_trip(seed in prop::option::of(0u64..(1 << 63)), lo in 0.01f64..0.3, span in 0.0f64..0.2, factor in 1u32..8, shuffle in any::<bool>()) {
        let cfg = DegradationConfig {
            seed,
            c_range: Interval(lo, lo + span),
            downsample_factor: factor,
            shuffle_spatial: shuffle,
            ..Default::default()
        };
        let text = cfg.to_toml_string().unwrap();
        prop_assert_eq!(DegradationConfig::from_toml_str(&text).unwrap(), cfg);
    }
}

#[test]
fn hd_matrix_file_size() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hd.tmat");
    let m = TemporalMatrix::new(1280, 720, 1, (0..1280 * 720).collect()).unwrap();
    io::save_temporal_matrix(&path, &m).unwrap();
    assert_eq!(std::fs::metadata(&path).unwrap().len(), 14 + 1280 * 720 * 8);
    assert_eq!(io::load_temporal_matrix(&path).unwrap(), m);
}

#[test]
fn events_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("e.csv");
    std::fs::File::create(&csv).unwrap().write_all(b"t,x,y,p\n300,1,0,-1\n100,0,0,1\n").unwrap();
    let s = io::parse_events(&csv, Some((2, 1))).unwrap();
    assert_eq!(s.events().iter().map(|e| e.t).collect::<Vec<_>>(), vec![100, 300]);

    let bin = dir.path().join("e.evs");
    io::save_events(&bin, &s).unwrap();
    assert_eq!(io::parse_events(&bin, None).unwrap(), s);

    let err = io::parse_events(dir.path().join("missing.evs"), None).unwrap_err();
    assert!(err.is_io());
}

#[test]
fn pgm_examples() {
    let img: Intensity64 = io::read_image(&b"P5 1 1 255 \x80"[..]).unwrap();
    assert_eq!(img[(0, 0)], 128.0 / 255.0);
    let wide: Intensity64 = io::read_image(&b"P5\n1 1\n65535\n\x80\x00"[..]).unwrap();
    assert_eq!(wide[(0, 0)], 32768.0 / 65535.0);
    assert!(matches!(io::read_image::<f64, _>(&b"P2\n1 1\n255\n128\n"[..]), Err(Error::Unsupported(_))));
}

#[test]
fn chart_files_are_standard_greymaps() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/charts");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = io::load_pgm(entry.unwrap().path()).unwrap();
        assert_eq!((p.width, p.height, p.maxval), (512, 512, 255));
        n += 1;
    }
    assert!(n >= 10);
}
