//! Directional acceleration analysis and the isotropy score.
//!
//! For a unit query direction `u`, actuator `i`'s directional sensitivity is
//! `c_i(u) = uᵀA_i`. Saturating every actuator at the bound that favors `u`
//! gives the largest attainable acceleration along `u` in closed form:
//! bilateral columns contribute `|c_i|·limit_i`, unilateral columns
//! `max(0, c_i)·limit_i`. Scanning a [`DirectionSet`] produces an
//! [`AccelerationCloud`]; the ratio of its extremes is the isotropy score
//! `η = a_min / a_max ∈ [0, 1]`, where 1 means direction-agnostic authority.

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ellipsoid::{self, Ellipsoid};
use crate::error::Error;
use crate::morphology::{AccelerationMap, BoundKind};
use crate::sampling::{DirectionSet, Sampler};

/// Direction count above which the per-direction loop runs on the rayon pool.
/// Results are assembled in index order, so the output is identical to the
/// serial path.
const PARALLEL_THRESHOLD: usize = 1024;

fn check_unit(u: &Vector3<f64>) -> Result<(), Error> {
    if (u.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "query direction must be unit norm, got ‖u‖ = {}",
            u.norm()
        )));
    }
    Ok(())
}

/// Sensitivities `c_i(u) = uᵀA_i` for every actuator.
pub fn directional_sensitivity(
    map: &AccelerationMap,
    u: &Vector3<f64>,
) -> Result<Vec<f64>, Error> {
    check_unit(u)?;
    Ok(map.columns().iter().map(|a| u.dot(a)).collect())
}

/// Largest attainable CoM acceleration magnitude along `u`.
pub fn directional_max_acceleration(map: &AccelerationMap, u: &Vector3<f64>) -> Result<f64, Error> {
    check_unit(u)?;
    Ok(support_value(map, u))
}

/// Closed-form support of the actuator box image, Neumaier-compensated so
/// wide maps (n in the dozens) lose no precision.
pub(crate) fn support_value(map: &AccelerationMap, u: &Vector3<f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for ((column, &limit), &bound) in map
        .columns()
        .iter()
        .zip(map.limits())
        .zip(map.bounds())
    {
        let c = u.dot(column);
        let contribution = match bound {
            BoundKind::Bilateral => c.abs() * limit,
            BoundKind::Unilateral if map.paper_compat() => c.abs() * limit,
            BoundKind::Unilateral => c.max(0.0) * limit,
        };
        let t = sum + contribution;
        compensation += if sum.abs() >= contribution.abs() {
            (sum - t) + contribution
        } else {
            (contribution - t) + sum
        };
        sum = t;
    }
    sum + compensation
}

/// Per-direction maximum accelerations over a direction set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AccelerationCloud {
    directions: DirectionSet,
    magnitudes: Vec<f64>,
    normalized: Vec<f64>,
    argmin_index: usize,
    argmax_index: usize,
    degenerate: bool,
}

impl AccelerationCloud {
    pub fn directions(&self) -> &DirectionSet {
        &self.directions
    }

    /// `a_max(u_k)` per direction, in m/s².
    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// Magnitudes divided by the global maximum (all zero when degenerate).
    pub fn normalized(&self) -> &[f64] {
        &self.normalized
    }

    pub fn argmin_index(&self) -> usize {
        self.argmin_index
    }

    pub fn argmax_index(&self) -> usize {
        self.argmax_index
    }

    /// True when the global maximum is zero.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn min_magnitude(&self) -> f64 {
        self.magnitudes[self.argmin_index]
    }

    pub fn max_magnitude(&self) -> f64 {
        self.magnitudes[self.argmax_index]
    }
}

/// Evaluate the support function over every direction of `dirs`.
///
/// Ties for the extremes resolve to the lowest index so reports are
/// deterministic.
pub fn acceleration_cloud(
    map: &AccelerationMap,
    dirs: &DirectionSet,
) -> Result<AccelerationCloud, Error> {
    if dirs.is_empty() {
        return Err(Error::InvalidArgument("direction set is empty".into()));
    }
    let magnitudes: Vec<f64> = if dirs.count() >= PARALLEL_THRESHOLD {
        dirs.directions()
            .par_iter()
            .map(|u| support_value(map, u))
            .collect()
    } else {
        dirs.directions()
            .iter()
            .map(|u| support_value(map, u))
            .collect()
    };

    let mut argmin = 0;
    let mut argmax = 0;
    for (k, &m) in magnitudes.iter().enumerate() {
        if m < magnitudes[argmin] {
            argmin = k;
        }
        if m > magnitudes[argmax] {
            argmax = k;
        }
    }
    let global_max = magnitudes[argmax];
    let degenerate = global_max == 0.0;
    let normalized = if degenerate {
        vec![0.0; magnitudes.len()]
    } else {
        magnitudes.iter().map(|m| m / global_max).collect()
    };

    Ok(AccelerationCloud {
        directions: dirs.clone(),
        magnitudes,
        normalized,
        argmin_index: argmin,
        argmax_index: argmax,
        degenerate,
    })
}

/// Isotropy score with extremal directions, ellipsoid spectrum, and
/// sampling provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsotropyReport {
    /// `a_min / a_max` over the sampled directions; 0 for degenerate maps.
    pub eta: f64,
    pub a_min: f64,
    pub a_max: f64,
    pub u_min: [f64; 3],
    pub u_max: [f64; 3],
    /// Number of sampled directions.
    pub samples: usize,
    pub sampler: Sampler,
    pub seed: u64,
    /// `√(λ₃/λ₁)` of the shape matrix — the ellipsoidal approximation of
    /// `eta`. The two can differ materially; both are reported.
    pub eta_ellipsoid: f64,
    /// Shape-matrix eigenvalues, descending.
    pub eigenvalues: [f64; 3],
    /// Set when the map cannot span all three directions
    /// (rank-deficient or all-zero); `eta` is 0 by convention.
    pub degenerate: bool,
}

/// Score a map over a direction set.
///
/// `eta = min_k a_max(u_k) / max_k a_max(u_k)`. Maps whose attainable set is
/// rank-deficient (shape-matrix `λ₃ ≤ 1e-12·λ₁`) are flagged degenerate and
/// scored 0 by convention.
pub fn isotropy_score(map: &AccelerationMap, dirs: &DirectionSet) -> Result<IsotropyReport, Error> {
    let cloud = acceleration_cloud(map, dirs)?;
    let ellipsoid = ellipsoid::shape_matrix(map);
    Ok(report_from_parts(&cloud, &ellipsoid))
}

/// Build the report from an existing cloud and ellipsoid (used by callers
/// that need all three artifacts without re-evaluating the support function).
pub fn report_from_parts(cloud: &AccelerationCloud, ellipsoid: &Ellipsoid) -> IsotropyReport {
    let [l1, _, l3] = ellipsoid.eigenvalues();
    let rank_deficient = l3 <= 1e-12 * l1 || l1 == 0.0;
    let degenerate = cloud.is_degenerate() || rank_deficient;
    let eta = if degenerate || cloud.max_magnitude() == 0.0 {
        0.0
    } else {
        cloud.min_magnitude() / cloud.max_magnitude()
    };
    let dirs = cloud.directions();
    let u_min = dirs.directions()[cloud.argmin_index()];
    let u_max = dirs.directions()[cloud.argmax_index()];
    IsotropyReport {
        eta,
        a_min: cloud.min_magnitude(),
        a_max: cloud.max_magnitude(),
        u_min: [u_min.x, u_min.y, u_min.z],
        u_max: [u_max.x, u_max.y, u_max.z],
        samples: dirs.count(),
        sampler: dirs.sampler(),
        seed: dirs.seed(),
        eta_ellipsoid: ellipsoid.eta(),
        eigenvalues: ellipsoid.eigenvalues(),
        degenerate,
    }
}

/// Score an ordered sequence of maps against a shared direction set
/// (pose-sequence analysis). Order is preserved.
pub fn isotropy_sequence(
    maps: &[AccelerationMap],
    dirs: &DirectionSet,
) -> Result<Vec<IsotropyReport>, Error> {
    if maps.is_empty() {
        return Err(Error::InvalidArgument("map sequence is empty".into()));
    }
    maps.iter().map(|map| isotropy_score(map, dirs)).collect()
}
