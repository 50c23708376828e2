mod common;

use common::*;
use emowave::audio::{synth_corpus, Recording};
use emowave::features::{extract_corpus, extract_recording, feature_names, subband_stats, FeatureMatrix, STAT_NAMES};
use emowave::wavelet::{daubechies_filter, parse_wavelet_list};
use emowave::Emotion;
use proptest::prelude::*;

fn rec(samples: Vec<f64>) -> Recording {
    Recording {
        id: "r".into(),
        samples,
        sample_rate: 16_000,
        label: Emotion::Neutral,
    }
}

fn stat_index(name: &str) -> usize {
    STAT_NAMES.iter().position(|s| *s == name).unwrap()
}

#[test]
fn feature_count_and_names() {
    let wavelets = parse_wavelet_list("db1,db6,db8,db10").unwrap();
    let names = feature_names(&wavelets, 10);
    assert_eq!(names.len(), 352);
    assert!(names.contains(&"db6.D3.kurtosis".to_string()));
    assert_eq!(names[0], "db1.D1.absmax");
    assert_eq!(names[351], "db10.A10.skewness");
    for levels in [1usize, 4, 7] {
        let x = random_signal(&mut rng(levels as u64), 1 << levels);
        let fv = extract_recording(&rec(x), &wavelets[..2], levels).unwrap();
        assert_eq!(fv.values.len(), 8 * (levels + 1) * 2);
    }
}

#[test]
fn constant_signal_has_no_detail() {
    let wavelets = parse_wavelet_list("db1,db6,db8,db10").unwrap();
    let names = feature_names(&wavelets, 10);
    let fv = extract_recording(&rec(vec![0.3; 1024]), &wavelets, 10).unwrap();
    for (n, v) in names.iter().zip(&fv.values) {
        if n.contains(".D") && n.ends_with(".absmax") {
            assert!(v.abs() < 1e-12, "{n} = {v}");
        }
    }
    assert!(!fv.degenerate.is_empty());
}

#[test]
fn haar_approximation_mean_matches_cascade() {
    let db1 = daubechies_filter(1).unwrap();
    let corpus = synth_corpus(2, 2, 4096).unwrap();
    let names = feature_names(std::slice::from_ref(&db1), 10);
    let col = names.iter().position(|n| n == "db1.A10.mean").unwrap();
    for r in &corpus {
        let bands = cascade(&r.samples, &db1.lowpass, &db1.highpass, 10);
        let want = mean(bands.last().unwrap());
        let fv = extract_recording(r, std::slice::from_ref(&db1), 10).unwrap();
        assert!((fv.values[col] - want).abs() < 1e-12);
    }
}

#[test]
fn synthetic_matrix_shape_and_csv_round_trip() {
    let wavelets = parse_wavelet_list("db1,db6,db8,db10").unwrap();
    let corpus = synth_corpus(3, 10, 1024).unwrap();
    let m = extract_corpus(&corpus, &wavelets, 10).unwrap();
    assert_eq!((m.n_rows(), m.n_features()), (70, 352));
    let mut buf = Vec::new();
    m.write_csv(&mut buf).unwrap();
    let back = FeatureMatrix::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, m);
    for (a, b) in back.rows.iter().zip(&m.rows) {
        assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    m.save(&path).unwrap();
    assert_eq!(FeatureMatrix::load(&path).unwrap(), m);
}

#[test]
fn permuting_corpus_permutes_rows() {
    let wavelets = parse_wavelet_list("db1,db8").unwrap();
    let corpus = synth_corpus(5, 3, 1024).unwrap();
    let m = extract_corpus(&corpus, &wavelets, 10).unwrap();
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    order.reverse();
    order.swap(0, 7);
    let shuffled: Vec<Recording> = order.iter().map(|&i| corpus[i].clone()).collect();
    let ms = extract_corpus(&shuffled, &wavelets, 10).unwrap();
    for (k, &i) in order.iter().enumerate() {
        assert_eq!(ms.rows[k], m.rows[i]);
    }
}

#[test]
fn failing_recording_is_named() {
    let wavelets = parse_wavelet_list("db1").unwrap();
    let mut corpus = synth_corpus(5, 2, 1024).unwrap();
    corpus[3].samples.truncate(100);
    let err = extract_corpus(&corpus, &wavelets, 10).unwrap_err();
    assert!(err.to_string().contains(&corpus[3].id), "{err}");
}

fn stats_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn amplitude_scaling(seed: u64, c in 0.01f64..20.0) {
        let wavelets = parse_wavelet_list("db1,db6").unwrap();
        let x = random_signal(&mut rng(seed), 512);
        let y: Vec<f64> = x.iter().map(|v| c * v).collect();
        let fx = extract_recording(&rec(x), &wavelets, 6).unwrap().values;
        let fy = extract_recording(&rec(y), &wavelets, 6).unwrap().values;
        for (i, (a, b)) in fx.iter().zip(&fy).enumerate() {
            let stat = STAT_NAMES[i % 8];
            let want = match stat {
                "zcr" | "kurtosis" | "skewness" => *a,
                _ => c * a,
            };
            prop_assert!(stats_close(*b, want), "{} {} vs {}", stat, b, want);
        }
    }

    #[test]
    fn sign_flip(seed: u64) {
        let wavelets = parse_wavelet_list("db8,db10").unwrap();
        let x = random_signal(&mut rng(seed), 512);
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        let fx = extract_recording(&rec(x), &wavelets, 6).unwrap().values;
        let fy = extract_recording(&rec(y), &wavelets, 6).unwrap().values;
        for (i, (a, b)) in fx.iter().zip(&fy).enumerate() {
            let stat = STAT_NAMES[i % 8];
            let want = match stat {
                "mean" | "median" | "skewness" => -a,
                _ => *a,
            };
            prop_assert!(stats_close(*b, want), "{} {} vs {}", stat, b, want);
        }
    }

    #[test]
    fn stats_match_direct_moments(x in prop::collection::vec(-5.0f64..5.0, 2..60)) {
        let s = subband_stats(&x).unwrap().values();
        let n = x.len() as f64;
        let m = mean(&x);
        let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
        let m3 = x.iter().map(|v| (v - m).powi(3)).sum::<f64>() / n;
        let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
        prop_assert!(stats_close(s[stat_index("mean")], m));
        prop_assert!(stats_close(s[stat_index("std")], m2.sqrt()));
        prop_assert!(stats_close(s[stat_index("absmax")], x.iter().fold(0.0, |a: f64, v| a.max(v.abs()))));
        if m2.sqrt() > 1e-6 {
            prop_assert!(stats_close(s[stat_index("kurtosis")], m4 / (m2 * m2)));
            prop_assert!(stats_close(s[stat_index("skewness")], m3 / m2.powf(1.5)));
        }
        let zcr = s[stat_index("zcr")];
        prop_assert!((0.0..=1.0).contains(&zcr));
        prop_assert!(s[stat_index("iqr")] >= 0.0);
    }
}
