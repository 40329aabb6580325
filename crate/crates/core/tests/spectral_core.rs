use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strip_boussinesq::diagnostics::{norm, NormId, NormKind, Weight};
use strip_boussinesq::spectral::*;
use strip_boussinesq::{Parity, StripGrid};

fn grid() -> StripGrid {
    StripGrid::new(6.0 * PI, 48, 10, 1.0).unwrap()
}

fn random_field(grid: StripGrid, parity: Parity, rng: &mut ChaCha8Rng) -> SpectralField {
    let mut f = SpectralField::from_fn(grid, parity, |_, _, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    f.enforce_hermitian();
    f
}

#[test]
fn three_planted_modes_are_recovered() {
    let g = grid();
    let s = g.dxi() / PI.sqrt();
    // Physical synthesis written out by hand from the series definition.
    let planted = [(0i64, 1usize, 0.7, 0.0), (3, 2, 0.2, -0.5), (-7, 5, -0.1, 0.3)];
    let f = PhysicalField::from_fn(g, Parity::Odd, |x, y| {
        planted
            .iter()
            .map(|&(j, k, re, im)| {
                let xi = j as f64 * g.dxi();
                let c = Complex64::new(re, im);
                let mult = if j == 0 { 1.0 } else { 2.0 };
                mult * s * (c * Complex64::from_polar(1.0, xi * x)).re * (k as f64 * PI * y).sin()
            })
            .sum()
    });
    let c = to_spectral(&f).unwrap();
    let mut expect = SpectralField::zeros(g, Parity::Odd);
    for &(j, k, re, im) in &planted {
        expect.set(j, k, Complex64::new(re, im)).unwrap();
        if j != 0 {
            expect.set(-j, k, Complex64::new(re, -im)).unwrap();
        }
    }
    assert!(c.sub(&expect).unwrap().max_abs() <= 1e-13);
}

#[test]
fn round_trips_in_both_directions() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for parity in [Parity::Odd, Parity::Even] {
        for _ in 0..20 {
            let f = random_field(g, parity, &mut rng);
            let p = to_physical(&f);
            let back = to_spectral(&p).unwrap();
            assert!(back.sub(&f).unwrap().max_abs() <= 1e-12 * f.max_abs());
            let again = to_physical(&back);
            let err = again
                .values()
                .iter()
                .zip(p.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err <= 1e-12 * p.max_abs());
        }
    }
}

#[test]
fn parseval_matches_node_quadrature() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for parity in [Parity::Odd, Parity::Even] {
        for _ in 0..10 {
            let f = random_field(g, parity, &mut rng);
            let physical = to_physical(&f).quadrature(|v| v * v);
            let spectral = f.l2_norm_sq();
            assert!((physical - spectral).abs() <= 1e-10 * physical, "{parity:?}");
            if parity == Parity::Odd {
                let l2 = norm(&f, NormId::new(NormKind::L2Hat, Weight::One));
                assert!((l2 * l2 - physical).abs() <= 1e-10 * physical);
            }
        }
    }
}

#[test]
fn poisson_inverse_is_bounded_by_lowest_symbol() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let bound = 1.0 / (PI * PI);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let f = random_field(g, Parity::Odd, &mut rng);
        let ratio = (poisson_inverse(&f).unwrap().l2_norm_sq() / f.l2_norm_sq()).sqrt();
        worst = worst.max(ratio);
    }
    let mut lowest = SpectralField::zeros(g, Parity::Odd);
    lowest.set(0, 1, Complex64::new(1.0, 0.0)).unwrap();
    let attained = (poisson_inverse(&lowest).unwrap().l2_norm_sq() / lowest.l2_norm_sq()).sqrt();
    assert!(worst <= bound + 1e-12);
    assert!((attained - bound).abs() <= 1e-15);
}

#[test]
fn single_mode_poisson_symbol() {
    let g = grid();
    let mut f = SpectralField::zeros(g, Parity::Odd);
    f.set(4, 3, Complex64::new(1.0, 2.0)).unwrap();
    let xi = 4.0 * g.dxi();
    let p = poisson_inverse(&f).unwrap();
    let expect = Complex64::new(1.0, 2.0) / (xi * xi + 9.0 * PI * PI);
    assert!((p.get(4, 3) - expect).norm() <= 1e-16);
}

#[test]
fn velocity_walls_and_identities() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let w = random_field(g, Parity::Odd, &mut rng);
        let (u1, u2) = velocity_from_vorticity(&w).unwrap();
        assert_eq!(u1.parity(), Parity::Even);
        assert_eq!(u2.parity(), Parity::Odd);
        assert_eq!(to_physical(&u2).boundary_max_abs(), 0.0);
        assert!(divergence(&u1, &u2).unwrap().max_abs() <= 1e-13);
        assert!(curl(&u1, &u2).unwrap().sub(&w).unwrap().max_abs() <= 1e-13);
        let residual = neg_laplacian(&poisson_inverse(&w).unwrap()).sub(&w).unwrap();
        assert!(residual.max_abs() <= 1e-13);
    }
    assert!(velocity_from_vorticity(&SpectralField::zeros(g, Parity::Even)).is_err());
}

#[test]
fn odd_fields_vanish_on_walls_with_even_derivatives() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let f = random_field(g, Parity::Odd, &mut rng);
    let d2 = derivative_y(&derivative_y(&f));
    assert_eq!(d2.parity(), Parity::Odd);
    assert_eq!(to_physical(&f).boundary_max_abs(), 0.0);
    assert_eq!(to_physical(&d2).boundary_max_abs(), 0.0);
}

#[test]
fn hermitian_projection_gives_real_fields() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut f = SpectralField::from_fn(g, Parity::Odd, |_, _, _| Complex64::new(rng.gen(), rng.gen()));
    assert!(f.hermitian_defect() > 0.1);
    f.enforce_hermitian();
    assert_eq!(f.hermitian_defect(), 0.0);
    assert_eq!(f.get(-(g.nx() as i64) / 2, 1), Complex64::new(0.0, 0.0));
}

#[test]
fn parallel_reductions_are_reproducible() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let f = random_field(g, Parity::Odd, &mut rng);
    let id = NormId::new(NormKind::Hm(3), Weight::Xi);
    let first = norm(&f, id).to_bits();
    for _ in 0..10 {
        assert_eq!(norm(&f, id).to_bits(), first);
        assert_eq!(to_physical(&f), to_physical(&f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_on_random_grids(seed in any::<u64>(), half in 2usize..12, ny in 2usize..9, lx in 0.5f64..50.0) {
        let g = StripGrid::new(lx, 2 * half, ny, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for parity in [Parity::Odd, Parity::Even] {
            let f = random_field(g, parity, &mut rng);
            let back = to_spectral(&to_physical(&f)).unwrap();
            prop_assert!(back.sub(&f).unwrap().max_abs() <= 1e-12 * f.max_abs().max(1e-300));
        }
    }
}
