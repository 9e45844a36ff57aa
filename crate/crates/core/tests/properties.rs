//! Property tests for the analytic core and the model/solver plumbing.

use nalgebra::DVector;
use num_complex::Complex64;
use phasetrans::farmodel::{build_theta, generate_codes, generate_scene, FarConfig, Scene};
use phasetrans::montecarlo::derive_seed;
use phasetrans::recovery::{block_soft_threshold, l21_norm, l21_norm_complex};
use phasetrans::statdim::{
    complex_curve_value, curve_value, far_budget, CurveQuery, FarBudget, RecoveryKind,
};
use proptest::prelude::*;

fn small_query() -> impl Strategy<Value = CurveQuery> {
    (1usize..=8, 2usize..=64).prop_flat_map(|(m, d)| {
        (Just(m), Just(d), 0usize..=d).prop_map(|(m, d, s)| CurveQuery::new(m, d, s).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curve_stays_in_range(q in small_query()) {
        let v = curve_value::<f64>(&q).unwrap();
        prop_assert!(v.value >= 0.0);
        prop_assert!(v.value <= (q.block_width * q.block_count) as f64 + 1e-9);
        prop_assert!(v.converged);
    }

    #[test]
    fn stationarity_residual_is_tiny(q in small_query()) {
        let v = curve_value::<f64>(&q).unwrap();
        if q.block_sparsity > 0 && q.block_sparsity < q.block_count {
            let scale = (v.tau_star * q.block_sparsity as f64).max(1.0);
            prop_assert!(v.residual <= 1e-8 * scale, "residual {} at {:?}", v.residual, q);
        }
    }

    #[test]
    fn complex_curve_is_exactly_half(q in small_query()) {
        let c = complex_curve_value::<f64>(&q).unwrap();
        let doubled = CurveQuery::new(2 * q.block_width, q.block_count, q.block_sparsity).unwrap();
        let r = curve_value::<f64>(&doubled).unwrap();
        prop_assert_eq!(c.value, 0.5 * r.value);
        prop_assert_eq!(c.tau_star, r.tau_star);
    }

    #[test]
    fn budget_stays_in_range(m in 1usize..=8, n in 2usize..=64, frac in 0.0f64..=1.0) {
        let k = frac * n as f64;
        for kind in [RecoveryKind::Block, RecoveryKind::Standard] {
            let b = far_budget::<f64>(&FarBudget { m_freqs: m, n_pulses: n, k, kind }).unwrap();
            prop_assert!(b.value >= 0.0);
            prop_assert!(b.value <= (m * n) as f64 + 1e-9);
        }
    }

    #[test]
    fn shrinkage_zeroes_small_blocks_and_scales_large_ones(
        data in proptest::collection::vec(-10.0f64..10.0, 8),
        radius in 0.1f64..5.0,
        width in prop_oneof![Just(1usize), Just(2), Just(4)],
    ) {
        let mut out = vec![0.0; data.len()];
        block_soft_threshold(&data, radius, width, &mut out);
        for (src, dst) in data.chunks(width).zip(out.chunks(width)) {
            let norm = src.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm <= radius {
                prop_assert!(dst.iter().all(|&x| x == 0.0));
            } else {
                let scale = 1.0 - radius / norm;
                for (s, d) in src.iter().zip(dst) {
                    prop_assert!((d - s * scale).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn embedding_norm_identity(
        parts in proptest::collection::vec(-5.0f64..5.0, 24),
        width in prop_oneof![Just(1usize), Just(2), Just(3)],
    ) {
        // complex vector of length 12 from interleaved parts
        let x = DVector::from_iterator(12, parts.chunks(2).map(|c| Complex64::new(c[0], c[1])));
        // real embedding of the vector alone: blocks [Re x_q; Im x_q]
        let blocks = 12 / width;
        let mut x_bar = DVector::<f64>::zeros(24);
        for q in 0..blocks {
            for j in 0..width {
                x_bar[q * 2 * width + j] = x[q * width + j].re;
                x_bar[q * 2 * width + width + j] = x[q * width + j].im;
            }
        }
        let a = l21_norm_complex(&x, width);
        let b = l21_norm(x_bar.as_slice(), 2 * width);
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn theta_has_unit_modulus_everywhere(
        m in 1usize..=4,
        n in 1usize..=12,
        seed in any::<u64>(),
    ) {
        let cfg = FarConfig { m_freqs: m, n_pulses: n, freq_ratio: 0.02, seed };
        let codes = generate_codes(&cfg).unwrap();
        let theta = build_theta(&cfg, &codes).unwrap();
        for z in theta.iter() {
            prop_assert!((z.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn scene_block_count_is_exact(
        m in 1usize..=4,
        n in 2usize..=16,
        seed in any::<u64>(),
    ) {
        let cfg = FarConfig { m_freqs: m, n_pulses: n, freq_ratio: 0.02, seed: 1 };
        for k in [0, 1, n / 2, n] {
            let s = generate_scene(&cfg, k, seed).unwrap();
            prop_assert_eq!(s.block_sparsity(), k);
            let occupied = (0..n).filter(|&q| s.occupancy(q).iter().any(|&b| b)).count();
            prop_assert_eq!(occupied, k);
        }
    }

    #[test]
    fn scene_json_round_trips(seed in any::<u64>(), k in 0usize..=6) {
        let cfg = FarConfig { m_freqs: 3, n_pulses: 6, freq_ratio: 0.02, seed: 9 };
        let s = generate_scene(&cfg, k.min(6), seed).unwrap();
        let back = Scene::from_json(&s.to_json().unwrap()).unwrap();
        prop_assert_eq!(s, back);
    }

    #[test]
    fn seed_derivation_depends_on_every_coordinate(
        base in any::<u64>(), s in any::<u64>(), n in any::<u64>(), t in any::<u64>(),
    ) {
        let h = derive_seed(base, s, n, t);
        prop_assert_eq!(h, derive_seed(base, s, n, t));
        prop_assert_ne!(h, derive_seed(base, s, n, t.wrapping_add(1)));
        prop_assert_ne!(h, derive_seed(base, s, n.wrapping_add(1), t));
        prop_assert_ne!(h, derive_seed(base, s.wrapping_add(1), n, t));
        prop_assert_ne!(h, derive_seed(base.wrapping_add(1), s, n, t));
    }
}
