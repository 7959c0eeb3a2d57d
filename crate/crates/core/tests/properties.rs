use std::f64::consts::PI;

use efdkit::benchkit::{generate, q_map, rmse, QGrid, SignalId, TestSignalSpec};
use efdkit::efd::{efd_with_segmentation, EfdOptions};
use efdkit::ewt::{ewt_transform, EwtOptions};
use efdkit::fdm::{fdm_scan, ScanDirection, DEFAULT_IF_TOLERANCE};
use efdkit::spectral::{spectrum_of, Complex64};
use efdkit::{
    analytic_signal, build_filter_bank, efd_decompose, forward_spectrum, inverse_spectrum, segment_improved,
    segment_lowest_minima, Boundary, MagnitudeProfile, Method, Segmentation, Signal, Technique,
};
use proptest::prelude::*;

fn samples(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, min..=max)
}

fn even_samples(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    (min / 2..=max / 2).prop_flat_map(|h| prop::collection::vec(-10.0f64..10.0, 2 * h))
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Sorted interior boundaries plus the endpoints 0 and pi.
fn full_segmentation() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(1u32..999, 0..4).prop_map(|s| {
        let mut b = vec![0.0];
        b.extend(s.into_iter().map(|v| PI * v as f64 / 1000.0));
        b.push(PI);
        b
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_round_trip(x in samples(1, 300)) {
        let s = Signal::new(x.clone(), 1.0).unwrap();
        let back = inverse_spectrum(&forward_spectrum(&s));
        prop_assert!(max_abs_diff(&back, &x) <= 1e-10 * norm(&x).max(1e-300));
    }

    #[test]
    fn parseval(x in samples(1, 300)) {
        let spec = spectrum_of(&x).unwrap();
        let e: f64 = x.iter().map(|v| v * v).sum();
        prop_assert!((spec.parseval_energy() - e).abs() <= 1e-9 * e.max(1.0));
    }

    #[test]
    fn analytic_real_part_and_one_sided(x in samples(2, 200)) {
        let s = Signal::new(x.clone(), 1.0).unwrap();
        let z = analytic_signal(&s);
        prop_assert!(max_abs_diff(&z.real(), &x) <= 1e-10 * norm(&x).max(1.0));
        let r = x.len();
        let scale = norm(&x).max(1.0) * (r as f64).sqrt();
        for k in (r / 2 + 1)..r {
            let coeff: Complex64 = z
                .values()
                .iter()
                .enumerate()
                .map(|(n, v)| *v * Complex64::from_polar(1.0, -2.0 * PI * ((k * n) % r) as f64 / r as f64))
                .sum();
            prop_assert!(coeff.norm() <= 1e-9 * scale, "bin {} of {}", k, r);
        }
    }

    #[test]
    fn efd_reconstructs(x in samples(8, 400), n in 1usize..5) {
        let s = Signal::new(x.clone(), 1.0).unwrap();
        if let Ok(m) = efd_decompose(&s, n) {
            let total: Vec<f64> = m.sum().iter().zip(m.residual()).map(|(a, b)| a + b).collect();
            prop_assert!(max_abs_diff(&total, &x) <= 1e-10 * norm(&x).max(1.0));
            prop_assert!(m.modes().iter().all(|mode| mode.len() == x.len()));
        }
    }

    #[test]
    fn efd_full_range_is_exact_and_linear(
        (x, y) in (8usize..200).prop_flat_map(|r| (prop::collection::vec(-10.0f64..10.0, r), prop::collection::vec(-10.0f64..10.0, r))),
        b in full_segmentation(),
        alpha in -3.0f64..3.0,
    ) {
        let seg = Segmentation::new(Technique::LowestMinima, b).unwrap();
        let opts = EfdOptions { boundary: Boundary::Periodic };
        let sx = Signal::new(x.clone(), 1.0).unwrap();
        let sy = Signal::new(y.clone(), 1.0).unwrap();
        let combo = Signal::new(x.iter().zip(&y).map(|(a, c)| alpha * a + c).collect(), 1.0).unwrap();
        let (mx, my, mc) = match (
            efd_with_segmentation(&sx, &seg, opts),
            efd_with_segmentation(&sy, &seg, opts),
            efd_with_segmentation(&combo, &seg, opts),
        ) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            _ => return Ok(()),
        };
        let tol = 1e-9 * (norm(&x) + norm(&y)).max(1.0);
        prop_assert!(max_abs_diff(&mx.sum(), &x) <= tol);
        prop_assert!(mx.residual().iter().all(|v| *v == 0.0));
        for i in 0..mx.len() {
            let want: Vec<f64> = mx.modes()[i].samples().iter().zip(my.modes()[i].samples()).map(|(a, c)| alpha * a + c).collect();
            prop_assert!(max_abs_diff(mc.modes()[i].samples(), &want) <= tol);
        }
    }

    #[test]
    fn efd_modes_are_idempotent_and_confined(x in samples(8, 200), b in full_segmentation()) {
        let seg = Segmentation::new(Technique::LowestMinima, b).unwrap();
        let opts = EfdOptions { boundary: Boundary::Periodic };
        let s = Signal::new(x.clone(), 1.0).unwrap();
        let m = match efd_with_segmentation(&s, &seg, opts) {
            Ok(m) => m,
            Err(_) => return Ok(()),
        };
        let bank = efdkit::build_ideal_bank(&seg, x.len()).unwrap();
        let tol = 1e-9 * norm(&x).max(1.0);
        for (i, mode) in m.modes().iter().enumerate() {
            let again = efd_with_segmentation(mode, &seg, opts).unwrap();
            for (j, sub) in again.modes().iter().enumerate() {
                let want: Vec<f64> = if i == j { mode.samples().to_vec() } else { vec![0.0; x.len()] };
                prop_assert!(max_abs_diff(sub.samples(), &want) <= tol);
            }
            let spec = spectrum_of(mode.samples()).unwrap();
            for (k, c) in spec.bins().iter().enumerate() {
                if bank.band_of(k) != Some(i) {
                    prop_assert!(c.norm() <= tol * (x.len() as f64).sqrt());
                }
            }
        }
    }

    #[test]
    fn ewt_is_linear(
        (x, y) in (16usize..200).prop_flat_map(|r| (prop::collection::vec(-10.0f64..10.0, r), prop::collection::vec(-10.0f64..10.0, r))),
        b in full_segmentation(),
        alpha in -3.0f64..3.0,
    ) {
        let seg = Segmentation::new(Technique::LowestMinima, b).unwrap();
        let opts = EwtOptions::default();
        let run = |v: &[f64]| ewt_transform(&Signal::new(v.to_vec(), 1.0).unwrap(), &seg, opts);
        let combo: Vec<f64> = x.iter().zip(&y).map(|(a, c)| alpha * a + c).collect();
        let (dx, dy, dc) = match (run(&x), run(&y), run(&combo)) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            _ => return Ok(()),
        };
        let tol = 1e-9 * (norm(&x) + norm(&y)).max(1.0);
        for i in 0..dx.modes().len() {
            let want: Vec<f64> = dx.modes().modes()[i].samples().iter().zip(dy.modes().modes()[i].samples()).map(|(a, c)| alpha * a + c).collect();
            prop_assert!(max_abs_diff(dc.modes().modes()[i].samples(), &want) <= tol);
        }
        prop_assert!(max_abs_diff(&dx.reconstruct(), &x) <= tol);
    }

    #[test]
    fn ewt_frame_preserves_energy(x in samples(16, 256), b in full_segmentation()) {
        // a tight frame with unit bound: sum of squared mode spectra equals the
        // input energy on the periodic grid
        let seg = Segmentation::new(Technique::LowestMinima, b).unwrap();
        let s = Signal::new(x.clone(), 1.0).unwrap();
        let d = match ewt_transform(&s, &seg, EwtOptions { boundary: Boundary::Periodic }) {
            Ok(d) => d,
            Err(_) => return Ok(()),
        };
        let e: f64 = d.modes().modes().iter().map(|m| m.energy()).sum();
        prop_assert!((e - s.energy()).abs() <= 1e-8 * s.energy().max(1.0));
        let bank = build_filter_bank(&seg, x.len()).unwrap();
        for resp in bank.responses() {
            prop_assert!(resp.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn fdm_bands_tile_and_sum_to_input(x in even_samples(8, 96), htl in any::<bool>()) {
        let s = Signal::new(x.clone(), 1.0).unwrap();
        let dir = if htl { ScanDirection::Htl } else { ScanDirection::Lth };
        let f = fdm_scan(&s, dir, DEFAULT_IF_TOLERANCE).unwrap();
        let u = x.len();
        let top = u / 2 - 1;
        let mut bands = f.bands().to_vec();
        bands.sort();
        prop_assert_eq!(bands[0].0, 1);
        prop_assert_eq!(bands[bands.len() - 1].1, top);
        prop_assert!(bands.windows(2).all(|w| w[1].0 == w[0].1 + 1));
        let edges = f.band_edges();
        if htl {
            prop_assert_eq!(edges[0], u / 2);
            prop_assert!(edges.windows(2).all(|w| w[0] > w[1]));
        } else {
            prop_assert_eq!(edges[0], 0);
            prop_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        }
        // the sum leaves out the mean and the alternating Nyquist term
        let mean = x.iter().sum::<f64>() / u as f64;
        let nyq = x.iter().enumerate().map(|(i, v)| if i % 2 == 0 { *v } else { -v }).sum::<f64>() / u as f64;
        let want: Vec<f64> = (0..u).map(|i| x[i] - mean - if i % 2 == 0 { nyq } else { -nyq }).collect();
        let got: Vec<f64> = (0..u).map(|i| f.fibfs().iter().map(|g| g.samples()[i]).sum()).collect();
        prop_assert!(max_abs_diff(&got, &want) <= 1e-8 * norm(&x).max(1.0));
        // disjoint bands give orthogonal band functions
        let g = f.fibfs();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                let dot: f64 = g[i].samples().iter().zip(g[j].samples()).map(|(a, b)| a * b).sum();
                prop_assert!(dot.abs() <= 1e-8 * norm(&x).max(1.0).powi(2));
            }
        }
        for z in f.analytic() {
            prop_assert!(efdkit::fdm::admissible(z, DEFAULT_IF_TOLERANCE));
        }
    }

    #[test]
    fn rmse_is_a_metric(a in samples(1, 64), shift in -5.0f64..5.0) {
        prop_assert_eq!(rmse(&a, &a).unwrap(), 0.0);
        let b: Vec<f64> = a.iter().map(|v| v + shift).collect();
        let d = rmse(&a, &b).unwrap();
        prop_assert!((d - shift.abs()).abs() <= 1e-9);
        prop_assert_eq!(d, rmse(&b, &a).unwrap());
    }

    #[test]
    fn improved_segmentation_is_ordered(x in samples(32, 300), n in 1usize..4) {
        let profile = MagnitudeProfile::from_spectrum(&spectrum_of(&x).unwrap());
        if let Ok(seg) = segment_improved(&profile, n) {
            let b = seg.boundaries();
            prop_assert_eq!(b.len(), n + 1);
            prop_assert!(b.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(b[0] >= 0.0 && b[n] <= PI);
        }
        if let Ok(seg) = segment_lowest_minima(&profile, n) {
            let b = seg.boundaries();
            prop_assert_eq!(b[0], 0.0);
            prop_assert_eq!(b[n], PI);
        }
    }
}

#[test]
fn q_map_is_monotone_in_epsilon() {
    let grid = QGrid::new(vec![0.01, 1.0, 50.0], vec![0.3, 0.7]).unwrap();
    let map = q_map(Method::Efd, &grid, 0.5).unwrap();
    let mut last = map.with_epsilon(0.0).q.iter().map(|&v| v as u32).sum::<u32>();
    for eps in [0.1, 0.3, 0.5, 1.0, 2.0, 10.0] {
        let count = map.with_epsilon(eps).q.iter().map(|&v| v as u32).sum::<u32>();
        assert!(count <= last);
        last = count;
    }
    assert!(map.q.iter().all(|&v| v <= 1));
}

#[test]
fn generation_and_decomposition_are_deterministic() {
    for id in SignalId::ALL {
        let spec = TestSignalSpec::new(id);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a.signal, b.signal);
        if id == SignalId::Sig6 {
            continue;
        }
        for m in Method::ALL {
            let n = id.mode_count(m);
            let x = m.decompose(&a.signal, n);
            let y = m.decompose(&b.signal, n);
            assert_eq!(x.is_ok(), y.is_ok());
            if let (Ok(x), Ok(y)) = (x, y) {
                assert_eq!(x, y, "{id} {m}");
            }
        }
    }
    let other = generate(&TestSignalSpec::new(SignalId::Sig1).with_seed(7)).unwrap();
    assert_ne!(
        other.signal,
        generate(&TestSignalSpec::new(SignalId::Sig1)).unwrap().signal
    );
}

#[test]
fn noise_realization_has_exact_snr() {
    for id in [SignalId::Sig1, SignalId::Sig2] {
        let ts = generate(&TestSignalSpec::new(id)).unwrap();
        let noise = ts.noise.unwrap();
        let clean: Vec<f64> = (0..ts.signal.len())
            .map(|r| ts.components.iter().map(|c| c.samples()[r]).sum())
            .collect();
        let snr = 10.0 * (clean.iter().map(|v| v * v).sum::<f64>() / noise.energy()).log10();
        assert!((snr - 10.0).abs() < 0.1, "{id}: {snr}");
    }
}
