//! Shared helpers for the integration suites.
#![allow(dead_code)] // not every suite uses every helper

use dyniso::morphology::{AccelerationMap, BoundKind};
use dyniso::rng::SplitMix64;
use nalgebra::Vector3;

/// Random map with unit-ish columns, positive limits, and (optionally) a mix
/// of bilateral and unilateral bounds.
pub fn random_map(rng: &mut SplitMix64, n: usize, mixed_bounds: bool) -> AccelerationMap {
    let columns: Vec<Vector3<f64>> = (0..n)
        .map(|_| rng.next_unit_vector() * (0.25 + 1.5 * rng.next_f64()))
        .collect();
    let limits: Vec<f64> = (0..n).map(|_| 0.25 + 2.0 * rng.next_f64()).collect();
    let bounds: Vec<BoundKind> = (0..n)
        .map(|_| {
            if mixed_bounds && rng.next_f64() < 0.4 {
                BoundKind::Unilateral
            } else {
                BoundKind::Bilateral
            }
        })
        .collect();
    AccelerationMap::new(columns, limits, bounds, 1.0).unwrap()
}

/// Exhaustive support function: maximum of `uᵀAτ` over all effort-box
/// vertices (bilateral coordinates at ±limit, unilateral at {0, limit}).
/// Independent of the closed-form path it checks.
pub fn brute_force_support(map: &AccelerationMap, u: &Vector3<f64>) -> f64 {
    let n = map.len();
    assert!(n <= 20, "vertex enumeration is exponential");
    let sensitivities: Vec<f64> = map.columns().iter().map(|a| u.dot(a)).collect();
    let mut best = f64::NEG_INFINITY;
    for vertex in 0..(1u32 << n) {
        let mut total = 0.0;
        for (i, ((&c, &limit), &bound)) in sensitivities
            .iter()
            .zip(map.limits())
            .zip(map.bounds())
            .enumerate()
        {
            let high = (vertex >> i) & 1 == 1;
            let effort = match bound {
                BoundKind::Bilateral => {
                    if high {
                        limit
                    } else {
                        -limit
                    }
                }
                BoundKind::Unilateral => {
                    if high {
                        limit
                    } else {
                        0.0
                    }
                }
            };
            total += c * effort;
        }
        best = best.max(total);
    }
    best
}
