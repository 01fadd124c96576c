//! Invariance suite for the isotropy analysis: scaling, rotation, symmetry,
//! and monotonicity of the support function.

mod common;

use common::random_map;
use dyniso::isotropy::{acceleration_cloud, directional_max_acceleration, isotropy_score};
use dyniso::morphology::{build_acceleration_map, AccelerationMap, BoundKind, Morphology};
use dyniso::rng::SplitMix64;
use dyniso::sampling::{sample_directions, Sampler};
use nalgebra::{Rotation3, Vector3};
use proptest::prelude::*;

fn octahedron_map() -> AccelerationMap {
    let dirs = [
        Vector3::x(),
        -Vector3::x(),
        Vector3::y(),
        -Vector3::y(),
        Vector3::z(),
        -Vector3::z(),
    ];
    build_acceleration_map(&Morphology::radial_legs("oct", &dirs, 1.0, 1.0)).unwrap()
}

fn rotate_map(map: &AccelerationMap, rot: &Rotation3<f64>) -> AccelerationMap {
    let columns = map.columns().iter().map(|c| rot * c).collect();
    AccelerationMap::new(
        columns,
        map.limits().to_vec(),
        map.bounds().to_vec(),
        map.mass(),
    )
    .unwrap()
}

#[test]
fn eta_is_scale_invariant() {
    let dirs = sample_directions(512, Sampler::Fibonacci, 0).unwrap();
    let mut rng = SplitMix64::new(21);
    for _ in 0..20 {
        let n = 3 + (rng.next_u64() % 10) as usize;
        let map = random_map(&mut rng, n, true);
        let base = isotropy_score(&map, &dirs).unwrap().eta;

        for scale in [0.001, 0.5, 3.0, 1e6] {
            let scaled_limits = AccelerationMap::new(
                map.columns().to_vec(),
                map.limits().iter().map(|l| l * scale).collect(),
                map.bounds().to_vec(),
                map.mass(),
            )
            .unwrap();
            let eta = isotropy_score(&scaled_limits, &dirs).unwrap().eta;
            assert!((eta - base).abs() <= 1e-12 * base.max(1.0), "limit scale {scale}");

            // Mass scaling acts as a uniform 1/c on every column.
            let scaled_mass = AccelerationMap::new(
                map.columns().iter().map(|c| c / scale).collect(),
                map.limits().to_vec(),
                map.bounds().to_vec(),
                map.mass() * scale,
            )
            .unwrap();
            let eta = isotropy_score(&scaled_mass, &dirs).unwrap().eta;
            assert!((eta - base).abs() <= 1e-12 * base.max(1.0), "mass scale {scale}");
        }
    }
}

#[test]
fn joint_rotation_leaves_magnitudes_bit_stable() {
    let mut rng = SplitMix64::new(5);
    let rot = Rotation3::from_axis_angle(&Vector3::y_axis(), 0.7)
        * Rotation3::from_axis_angle(&Vector3::z_axis(), -1.2);
    for _ in 0..10 {
        let n = 2 + (rng.next_u64() % 10) as usize;
        let map = random_map(&mut rng, n, true);
        let rotated = rotate_map(&map, &rot);
        for _ in 0..64 {
            let u = rng.next_unit_vector();
            let a = directional_max_acceleration(&map, &u).unwrap();
            let b = directional_max_acceleration(&rotated, &(rot * u).normalize()).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
        }
    }
}

#[test]
fn fixed_sampling_rotation_drift_is_within_lattice_tolerance() {
    let dirs = sample_directions(2048, Sampler::Fibonacci, 0).unwrap();
    let map = octahedron_map();
    let base = isotropy_score(&map, &dirs).unwrap().eta;
    let mut etas = vec![base];
    for step in 1..12 {
        let rot = Rotation3::from_axis_angle(
            &Vector3::z_axis(),
            (step as f64) * 30.0f64.to_radians(),
        );
        let eta = isotropy_score(&rotate_map(&map, &rot), &dirs).unwrap().eta;
        assert!((eta - base).abs() <= 0.01, "step {step}: {eta} vs {base}");
        etas.push(eta);
    }
    let lo = etas.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = etas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(hi - lo <= 0.01, "drift {}", hi - lo);
}

#[test]
fn bilateral_support_is_centrally_symmetric_exactly() {
    let mut rng = SplitMix64::new(17);
    for _ in 0..20 {
        let n = 1 + (rng.next_u64() % 12) as usize;
        let map = random_map(&mut rng, n, false);
        for _ in 0..32 {
            let u = rng.next_unit_vector();
            let pos = directional_max_acceleration(&map, &u).unwrap();
            let neg = directional_max_acceleration(&map, &-u).unwrap();
            assert_eq!(pos.to_bits(), neg.to_bits());
        }
    }
}

#[test]
fn adding_an_actuator_never_reduces_reach() {
    let mut rng = SplitMix64::new(33);
    let dirs = sample_directions(256, Sampler::Fibonacci, 0).unwrap();
    for _ in 0..30 {
        let n = 1 + (rng.next_u64() % 10) as usize;
        let map = random_map(&mut rng, n, true);
        let extra_bound = if rng.next_f64() < 0.5 {
            BoundKind::Bilateral
        } else {
            BoundKind::Unilateral
        };
        let bigger = map.with_column(
            rng.next_unit_vector() * (0.1 + rng.next_f64()),
            0.1 + rng.next_f64(),
            extra_bound,
        );
        for u in dirs.directions() {
            let before = directional_max_acceleration(&map, u).unwrap();
            let after = directional_max_acceleration(&bigger, u).unwrap();
            assert!(
                after >= before * (1.0 - 1e-12) - 1e-300,
                "{after} < {before}"
            );
        }
    }
}

#[test]
fn normalized_cloud_peaks_at_one() {
    let mut rng = SplitMix64::new(2);
    let dirs = sample_directions(128, Sampler::UniformRandom, 9).unwrap();
    for _ in 0..20 {
        let n = 1 + (rng.next_u64() % 8) as usize;
        let map = random_map(&mut rng, n, true);
        let cloud = acceleration_cloud(&map, &dirs).unwrap();
        if cloud.is_degenerate() {
            assert!(cloud.normalized().iter().all(|&x| x == 0.0));
        } else {
            let max = cloud.normalized().iter().cloned().fold(f64::MIN, f64::max);
            assert_eq!(max, 1.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prop_central_symmetry(seed in any::<u64>(), n in 1usize..=12) {
        let mut rng = SplitMix64::new(seed);
        let map = random_map(&mut rng, n, false);
        let u = rng.next_unit_vector();
        let pos = directional_max_acceleration(&map, &u).unwrap();
        let neg = directional_max_acceleration(&map, &-u).unwrap();
        prop_assert_eq!(pos.to_bits(), neg.to_bits());
    }

    #[test]
    fn prop_support_monotone_in_actuators(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = SplitMix64::new(seed);
        let map = random_map(&mut rng, n, true);
        let bigger = map.with_column(rng.next_unit_vector(), 0.5, BoundKind::Bilateral);
        let u = rng.next_unit_vector();
        let before = directional_max_acceleration(&map, &u).unwrap();
        let after = directional_max_acceleration(&bigger, &u).unwrap();
        prop_assert!(after >= before * (1.0 - 1e-12) - 1e-300);
    }
}
