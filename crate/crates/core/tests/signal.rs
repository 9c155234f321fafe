use ifir_core::linalg::{CMatrix, CVector, C64};
use ifir_core::signal::{
    build_block_matrix, build_channel_matrix, gold_codes, isi_span, noise_variance_from_ebn0,
    synthesize_received, ChannelRealization, DopplerDesign, FadingProcess, PathProfile,
    SpreadingSet, SymbolFrame,
};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn periodic_xcorr(a: &[f64], b: &[f64], shift: usize) -> f64 {
    let n = a.len();
    (0..n).map(|i| a[i] * b[(i + shift) % n]).sum()
}

#[test]
fn gold_cross_correlation_is_three_valued() {
    for (degree, expected) in [(5u32, [-9i64, -1, 7]), (6, [-17, -1, 15])] {
        let n = (1usize << degree) - 1;
        let codes = gold_codes(degree, n + 2).unwrap();
        let scaled: Vec<Vec<f64>> = codes
            .iter()
            .map(|c| c.iter().map(|x| x * (n as f64).sqrt()).collect())
            .collect();
        let mut values = BTreeSet::new();
        for i in 0..scaled.len() {
            for j in (i + 1)..scaled.len() {
                for s in 0..n {
                    values.insert(periodic_xcorr(&scaled[i], &scaled[j], s).round() as i64);
                }
            }
        }
        assert_eq!(
            values.into_iter().collect::<Vec<_>>(),
            expected.to_vec(),
            "degree {degree}"
        );
        for c in &codes {
            assert!((c.norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn block_matrix_examples() {
    let code = CVector::from_vec(vec![C64::from(0.6), C64::from(-0.8)]);
    let s = build_block_matrix(&code, 2);
    assert_eq!(s.shape(), (6, 3));
    for j in 0..3 {
        for i in 0..6 {
            let expect = if i / 2 == j {
                code[i % 2]
            } else {
                C64::from(0.0)
            };
            assert_eq!(s[(i, j)], expect);
        }
    }
    let g = s.adjoint() * &s;
    assert!((g - CMatrix::identity(3, 3)).norm() < 1e-12);
}

fn convolve(a: &[f64], h: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::from(0.0); a.len() + h.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &g) in h.iter().enumerate() {
            out[i + j] += g * x;
        }
    }
    out
}

#[test]
fn noiseless_single_user_is_convolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let spreading = SpreadingSet::gold(5, 1).unwrap();
    let code: Vec<f64> = spreading.codes[0].iter().copied().collect();
    for lp in [1usize, 2, 4, 6] {
        let gains: Vec<f64> = (0..lp).map(|l| 1.0 / (l as f64 + 1.0)).collect();
        let channel = ChannelRealization::fixed(PathProfile::new(gains).unwrap());
        let ls = isi_span(lp, 31);
        let mut bits = DMatrix::from_element(1, 2 * ls - 1, 1.0);
        for j in 0..2 * ls - 1 {
            if j != ls - 1 {
                bits[(0, j)] = -1.0;
            }
        }
        let r_pos = synthesize_received(
            &spreading,
            &channel,
            &SymbolFrame::new(bits.clone(), vec![1.0]).unwrap(),
            0.0,
            &mut rng,
        )
        .unwrap();
        let mut flipped = bits;
        flipped[(0, ls - 1)] = -1.0;
        let r_neg = synthesize_received(
            &spreading,
            &channel,
            &SymbolFrame::new(flipped, vec![1.0]).unwrap(),
            0.0,
            &mut rng,
        )
        .unwrap();
        // the difference isolates twice the current-symbol contribution
        let diff = (&r_pos.samples - &r_neg.samples) * C64::from(0.5);
        let expect = convolve(&code, channel.gains.as_slice());
        assert_eq!(diff.len(), 31 + lp - 1);
        for (a, b) in diff.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-12, "lp {lp}");
        }
    }
}

#[test]
fn single_user_single_path_noiseless_is_code() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let spreading = SpreadingSet::gold(5, 1).unwrap();
    let channel = ChannelRealization::fixed(PathProfile::new(vec![1.0]).unwrap());
    let frame = SymbolFrame::new(DMatrix::from_element(1, 1, 1.0), vec![1.0]).unwrap();
    let r = synthesize_received(&spreading, &channel, &frame, 0.0, &mut rng).unwrap();
    assert!((r.samples - spreading.code(0)).norm() < 1e-15);
}

#[test]
fn noise_covariance_matches_sigma2() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let spreading = SpreadingSet::gold(5, 2).unwrap();
    let channel = ChannelRealization::fixed(PathProfile::new(vec![1.0, 0.5]).unwrap());
    let ls = isi_span(2, 31);
    let frame =
        SymbolFrame::new(DMatrix::from_element(2, 2 * ls - 1, 1.0), vec![1.0, 1.0]).unwrap();
    let clean = synthesize_received(&spreading, &channel, &frame, 0.0, &mut rng).unwrap();
    let sigma2 = noise_variance_from_ebn0(6.0);
    let trials = 20000;
    let m = clean.len();
    let mut cov = CMatrix::zeros(m, m);
    for _ in 0..trials {
        let r = synthesize_received(&spreading, &channel, &frame, sigma2, &mut rng).unwrap();
        let n = r.samples - &clean.samples;
        cov += &n * n.adjoint();
    }
    cov /= C64::from(trials as f64);
    let err =
        (cov - CMatrix::identity(m, m) * C64::from(sigma2)).norm() / (sigma2 * (m as f64).sqrt());
    assert!(err < 0.05, "relative covariance error {err}");
}

/// `J0(x) = (1/pi) int_0^pi cos(x sin t) dt` by composite Simpson.
fn bessel_j0(x: f64) -> f64 {
    let n = 2000;
    let h = std::f64::consts::PI / n as f64;
    let f = |t: f64| (x * t.sin()).cos();
    let mut s = f(0.0) + f(std::f64::consts::PI);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0 / std::f64::consts::PI
}

#[test]
fn fading_power_and_autocorrelation_follow_clarke() {
    let fd = 0.02;
    let design = DopplerDesign::new(fd);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (procs, len, max_lag) = (100, 4000, 60);
    let mut acf = vec![C64::from(0.0); max_lag + 1];
    let mut count = vec![0usize; max_lag + 1];
    let mut power = 0.0;
    for _ in 0..procs {
        let mut p = FadingProcess::new(fd, Some(&design), &mut rng);
        let xs: Vec<C64> = (0..len).map(|_| p.next(&mut rng)).collect();
        power += xs.iter().map(|z| z.norm_sqr()).sum::<f64>() / len as f64;
        for lag in 0..=max_lag {
            for i in 0..len - lag {
                acf[lag] += xs[i + lag] * xs[i].conj();
                count[lag] += 1;
            }
        }
    }
    power /= procs as f64;
    assert!((power - 1.0).abs() < 0.1, "power {power}");
    for lag in 0..=max_lag {
        let est = acf[lag].re / count[lag] as f64;
        let oracle = bessel_j0(2.0 * std::f64::consts::PI * fd * lag as f64);
        assert!((est - oracle).abs() < 0.1, "lag {lag}: {est} vs {oracle}");
    }
}

#[test]
fn gains_respect_profile_power() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let profile = PathProfile::from_delays_db(6, &[0, 2, 4], &[0.0, -6.0, -10.0]).unwrap();
    let total: f64 = profile.amplitudes.iter().map(|p| p * p).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let draws = 4000;
    let mut avg = 0.0;
    for _ in 0..draws {
        let ch = ChannelRealization::fading(profile.clone(), 0.0, None, &mut rng).unwrap();
        avg += ch.gains.norm_squared();
        assert_eq!(ch.gains[1], C64::from(0.0));
    }
    avg /= draws as f64;
    assert!((avg - 1.0).abs() < 0.05, "{avg}");
}

#[test]
fn channel_matrix_has_convolution_rows() {
    let gains = [C64::from(1.0), C64::new(0.0, 0.5), C64::from(-0.25)];
    let h = build_channel_matrix(&gains, 4, isi_span(3, 4));
    let code = [0.5, -0.5, 0.5, 0.5];
    // current symbol block is the centre one
    let ls = isi_span(3, 4);
    let mut z = CVector::zeros(h.ncols());
    for c in 0..4 {
        z[(ls - 1) * 4 + c] = C64::from(code[c]);
    }
    let y = &h * z;
    let expect = convolve(&code, &gains);
    for (a, b) in y.iter().zip(&expect) {
        assert!((a - b).norm() < 1e-15);
    }
}
