//! Actuator layout synthesis.
//!
//! Near-uniform placements come from minimizing the Thomson energy
//! `E = Σ_{i<j} 1/‖p_i − p_j‖` over points on the unit sphere with a
//! tangent-space projected gradient descent (backtracking line search,
//! re-normalization each step, best-of-restarts). Asymmetric layouts come
//! from a seeded generator that mixes uniform sphere samples with a
//! concentrated spherical cap, the mixture controlled by a `spread`
//! parameter in [0, 1]. Batch sweeps score both over a shared direction set.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::isotropy::isotropy_score;
use crate::morphology::{build_acceleration_map, Morphology};
use crate::rng::SplitMix64;
use crate::sampling::DirectionSet;

/// Iteration cap for a single descent run.
const MAX_ITERATIONS: usize = 50_000;

/// Half-angle (radians) of the concentration cap used by
/// [`random_morphology`] at `spread = 0`.
const CAP_HALF_ANGLE: f64 = 0.2;

/// Points on the unit sphere together with their Thomson energy.
#[derive(Debug, Clone, Serialize)]
pub struct SpherePointSet {
    points: Vec<[f64; 3]>,
    energy: f64,
}

impl SpherePointSet {
    pub fn points(&self) -> Vec<Vector3<f64>> {
        self.points.iter().map(|p| Vector3::from(*p)).collect()
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Sum of inverse pairwise distances. Errors on coincident points
/// (pairwise distance ≤ 1e-9).
pub fn thomson_energy(points: &[Vector3<f64>]) -> Result<f64, Error> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "Thomson energy needs at least two points".into(),
        ));
    }
    let mut energy = 0.0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let dist = (points[i] - points[j]).norm();
            if dist <= 1e-9 {
                return Err(Error::DegenerateGeometry(format!(
                    "points {i} and {j} coincide"
                )));
            }
            energy += 1.0 / dist;
        }
    }
    Ok(energy)
}

/// Riemannian (tangent-projected) gradient of the Thomson energy.
///
/// The ambient gradient at point `i` is `Σ_{j≠i} −(p_i − p_j)/‖p_i − p_j‖³`;
/// each entry is then projected onto the tangent plane of its point.
pub fn thomson_gradient(points: &[Vector3<f64>]) -> Vec<Vector3<f64>> {
    let n = points.len();
    let mut grad = vec![Vector3::zeros(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = points[i] - points[j];
            let dist = diff.norm();
            let pull = diff / (dist * dist * dist);
            grad[i] -= pull;
            grad[j] += pull;
        }
    }
    for (g, p) in grad.iter_mut().zip(points) {
        *g -= p * g.dot(p);
    }
    grad
}

/// One seeded descent run. Returns the relaxed points and their energy.
fn descend(mut points: Vec<Vector3<f64>>, tol: f64) -> (Vec<Vector3<f64>>, f64) {
    let mut energy = thomson_energy(&points).expect("initial points are distinct");
    let mut step = 1.0 / points.len() as f64;

    for _ in 0..MAX_ITERATIONS {
        let grad = thomson_gradient(&points);
        let grad_norm2: f64 = grad.iter().map(|g| g.norm_squared()).sum();
        if grad_norm2 == 0.0 {
            break;
        }

        // Backtracking: shrink until the energy decreases, grow on success.
        let mut accepted = None;
        while step > 1e-18 {
            let candidate: Vec<Vector3<f64>> = points
                .iter()
                .zip(&grad)
                .map(|(p, g)| (p - g * step).normalize())
                .collect();
            match thomson_energy(&candidate) {
                Ok(e) if e < energy => {
                    accepted = Some((candidate, e));
                    break;
                }
                _ => step *= 0.5,
            }
        }
        let Some((candidate, new_energy)) = accepted else {
            break; // line search stalled at machine precision
        };
        let decrease = energy - new_energy;
        points = candidate;
        energy = new_energy;
        step *= 1.5;
        if decrease < tol {
            break;
        }
    }
    (points, energy)
}

/// Rotate into the principal frame and sort, so equal-energy solutions from
/// different seeds serialize comparably. Orientation normalization is
/// best-effort for symmetric configurations (their moments vanish), but the
/// output is still a pure function of the input points.
fn canonicalize(points: &mut Vec<Vector3<f64>>) {
    let mut second_moment = Matrix3::zeros();
    for p in points.iter() {
        second_moment += p * p.transpose();
    }
    let eigen = SymmetricEigen::new(second_moment);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]));
    let mut frame = Matrix3::zeros();
    for (slot, &src) in order.iter().enumerate() {
        frame.set_column(slot, &eigen.eigenvectors.column(src));
    }

    let mut rotated: Vec<Vector3<f64>> = points.iter().map(|p| frame.transpose() * p).collect();

    // Fix axis signs by third moments, then restore right-handedness by
    // flipping the least-committed axis.
    let mut third = [0.0f64; 3];
    for p in &rotated {
        for (k, t) in third.iter_mut().enumerate() {
            *t += p[k] * p[k] * p[k];
        }
    }
    let mut signs = [1.0f64; 3];
    for k in 0..3 {
        if third[k] < -1e-12 {
            signs[k] = -1.0;
        }
    }
    if signs.iter().product::<f64>() * frame.determinant() < 0.0 {
        let weakest = (0..3)
            .min_by(|&a, &b| third[a].abs().total_cmp(&third[b].abs()))
            .unwrap();
        signs[weakest] = -signs[weakest];
    }
    for p in &mut rotated {
        for k in 0..3 {
            p[k] *= signs[k];
        }
    }

    rotated.sort_by(|a, b| {
        a.x.total_cmp(&b.x)
            .then(a.y.total_cmp(&b.y))
            .then(a.z.total_cmp(&b.z))
    });
    *points = rotated;
}

/// Minimize the Thomson energy of `n` points from seeded random restarts.
///
/// Each restart derives its generator from `(seed, n, restart_index)`, so
/// results are independent of execution order. A run converges when the
/// per-iteration energy decrease drops below `tol` (default 1e-12) or after
/// 50,000 iterations; the lowest-energy restart wins and is returned in
/// canonical orientation and order.
pub fn minimize_thomson(
    n: usize,
    restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<SpherePointSet, Error> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 points, got {n}"
        )));
    }
    if restarts < 1 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }

    let runs: Vec<(Vec<Vector3<f64>>, f64)> = (0..restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = SplitMix64::derive(seed, &[n as u64, restart as u64]);
            let init = loop {
                let candidate: Vec<Vector3<f64>> =
                    (0..n).map(|_| rng.next_unit_vector()).collect();
                if thomson_energy(&candidate).is_ok() {
                    break candidate;
                }
            };
            descend(init, tol)
        })
        .collect();

    let best = runs
        .iter()
        .enumerate()
        .min_by(|(ia, (_, ea)), (ib, (_, eb))| ea.total_cmp(eb).then(ia.cmp(ib)))
        .map(|(i, _)| i)
        .expect("at least one restart");

    let mut points = runs[best].0.clone();
    canonicalize(&mut points);
    let energy = thomson_energy(&points)?;
    Ok(SpherePointSet {
        points: points.iter().map(|p| [p.x, p.y, p.z]).collect(),
        energy,
    })
}

/// Seeded random radial-legs morphology.
///
/// Each leg direction is drawn either uniformly on the sphere or uniformly
/// inside a spherical cap (half-angle 0.2 rad) around a seeded pole, via
/// rejection. `spread` is the mixture weight: 1 keeps every draw uniform,
/// 0 sends every draw to the cap. Equal unit limits, unit mass.
pub fn random_morphology(leg_count: usize, seed: u64, spread: f64) -> Result<Morphology, Error> {
    if leg_count < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 legs, got {leg_count}"
        )));
    }
    if !(0.0..=1.0).contains(&spread) {
        return Err(Error::InvalidArgument(format!(
            "spread must lie in [0, 1], got {spread}"
        )));
    }

    let mut rng = SplitMix64::derive(seed, &[leg_count as u64, spread.to_bits()]);
    let pole = rng.next_unit_vector();
    let cos_cap = CAP_HALF_ANGLE.cos();

    let directions: Vec<Vector3<f64>> = (0..leg_count)
        .map(|_| {
            if rng.next_f64() < spread {
                rng.next_unit_vector()
            } else {
                // Spherical-cap rejection around the pole.
                loop {
                    let candidate = rng.next_unit_vector();
                    if candidate.dot(&pole) >= cos_cap {
                        break candidate;
                    }
                }
            }
        })
        .collect();

    Ok(Morphology::radial_legs(
        format!("random-{leg_count}-{seed}-{spread:.6}"),
        &directions,
        1.0,
        1.0,
    ))
}

/// One scored variant of a morphology sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub leg_count: usize,
    pub variant_index: usize,
    /// Per-variant derived seed; feeding it back to [`random_morphology`]
    /// with the same `leg_count` and `spread` regenerates the morphology.
    pub seed: u64,
    pub spread: f64,
    pub eta: f64,
    pub eta_ellipsoid: f64,
    pub thomson_energy: f64,
    pub morphology: Morphology,
}

fn stratified_spread(index: usize, count_per: usize) -> f64 {
    if count_per <= 1 {
        1.0
    } else {
        index as f64 / (count_per - 1) as f64
    }
}

/// Generate and score `count_per` random variants per leg count, spreads
/// stratified over [0, 1]. Records are emitted in `(leg_count,
/// variant_index)` order independent of execution order.
pub fn morphology_sweep(
    leg_counts: &[usize],
    count_per: usize,
    seed: u64,
    dirs: &DirectionSet,
) -> Result<Vec<SweepRecord>, Error> {
    if leg_counts.is_empty() || count_per == 0 {
        return Err(Error::InvalidArgument(
            "sweep needs leg counts and a positive per-count total".into(),
        ));
    }
    let jobs: Vec<(usize, usize)> = leg_counts
        .iter()
        .flat_map(|&n| (0..count_per).map(move |j| (n, j)))
        .collect();

    jobs.par_iter()
        .map(|&(leg_count, variant_index)| {
            let spread = stratified_spread(variant_index, count_per);
            let variant_seed = SplitMix64::derive(
                seed,
                &[leg_count as u64, variant_index as u64],
            )
            .next_u64();
            let morphology = random_morphology(leg_count, variant_seed, spread)?;
            let map = build_acceleration_map(&morphology)?;
            let report = isotropy_score(&map, dirs)?;
            let leg_dirs: Vec<Vector3<f64>> = morphology
                .actuators
                .as_ref()
                .expect("radial legs")
                .iter()
                .map(|a| Vector3::from(a.direction))
                .collect();
            let thomson = thomson_energy(&leg_dirs)?;
            Ok(SweepRecord {
                leg_count,
                variant_index,
                seed: variant_seed,
                spread,
                eta: report.eta,
                eta_ellipsoid: report.eta_ellipsoid,
                thomson_energy: thomson,
                morphology,
            })
        })
        .collect()
}

/// Isotropy of the Thomson-optimal layout per leg count.
#[derive(Debug, Clone, Serialize)]
pub struct LegCountScore {
    pub leg_count: usize,
    pub eta: f64,
    pub eta_ellipsoid: f64,
    pub thomson_energy: f64,
}

/// Build the Thomson-optimal radial-legs design for each count and score it.
/// The table is ordered by ascending leg count.
pub fn isotropy_vs_legcount(
    leg_counts: &[usize],
    restarts: usize,
    seed: u64,
    dirs: &DirectionSet,
) -> Result<Vec<LegCountScore>, Error> {
    if leg_counts.iter().any(|&n| n < 3) {
        return Err(Error::InvalidArgument(
            "leg counts must be at least 3".into(),
        ));
    }
    let mut counts = leg_counts.to_vec();
    counts.sort_unstable();
    counts.dedup();

    counts
        .par_iter()
        .map(|&n| {
            let set = minimize_thomson(n, restarts, seed, 1e-12)?;
            let morph = Morphology::radial_legs(format!("thomson-{n}"), &set.points(), 1.0, 1.0);
            let map = build_acceleration_map(&morph)?;
            let report = isotropy_score(&map, dirs)?;
            Ok(LegCountScore {
                leg_count: n,
                eta: report.eta,
                eta_ellipsoid: report.eta_ellipsoid,
                thomson_energy: set.energy(),
            })
        })
        .collect()
}
