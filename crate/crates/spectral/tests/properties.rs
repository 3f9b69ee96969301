use num_complex::Complex64;
use proptest::prelude::*;
use spectral::{GridSpec, SpectralField};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spatial_round_trip_preserves_norm(
        vals in prop::collection::vec(-1.0f64..1.0, 256),
        period in 0.5f64..20.0,
    ) {
        let grid = GridSpec::new(16, period).unwrap();
        let x: Vec<Complex64> = vals.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let f = SpectralField::from_spatial(grid, &x).unwrap();
        prop_assert!(f.is_real_valued());
        let norm = SpectralField::spatial_l2(&grid, &x);
        prop_assert!((f.l2_norm() - norm).abs() <= 1e-10 * norm.max(1e-300));
        let y = f.to_spatial();
        for (a, b) in x.iter().zip(&y) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }
}
