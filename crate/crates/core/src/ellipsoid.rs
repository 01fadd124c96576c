//! Ellipsoidal approximation of the attainable acceleration set.
//!
//! The shape matrix `Q = Σ limit_i²·A_iA_iᵀ` is symmetric positive
//! semidefinite by construction; its eigen-spectrum `λ₁ ≥ λ₂ ≥ λ₃`
//! approximates the attainable set's principal extents. Derived quantities:
//!
//! * `eta_ellipsoid = √(λ₃/λ₁)` — the ellipsoidal isotropy approximation,
//!   inversely tied to the condition number `κ = λ₁/λ₃`;
//! * `margin = 1 − a_reqᵀQ⁻¹a_req` — distance of a required corrective
//!   acceleration from the feasible boundary;
//! * `√λ₃` — the worst-case disturbance bound along the weakest axis;
//! * the minimum-energy effort `τ* = A†·a_des` realizing a desired
//!   acceleration, with its per-axis effort decomposition `α_i²/λ_i`.
//!
//! Note `eta_ellipsoid` and the sampled score can differ materially (the
//! octahedral map scores 1.0 here versus ≈0.577 sampled); reports carry both.

use nalgebra::{DVector, Matrix3, SymmetricEigen, Vector3, SVD};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::morphology::AccelerationMap;

/// Relative eigenvalue floor below which the ellipsoid counts as singular.
/// Separates genuine rank deficiency (a coplanar multirotor) from
/// conditioning noise.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// Eigen-decomposed shape matrix of the attainable set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Ellipsoid {
    q: Matrix3<f64>,
    /// Descending; clamped to 0 for round-off negatives in (−1e-14, 0).
    eigenvalues: [f64; 3],
    /// Columns are the orthonormal eigenvectors matching `eigenvalues`.
    eigenvectors: Matrix3<f64>,
}

impl Ellipsoid {
    pub fn q(&self) -> &Matrix3<f64> {
        &self.q
    }

    pub fn eigenvalues(&self) -> [f64; 3] {
        self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Matrix3<f64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> Vector3<f64> {
        self.eigenvectors.column(i).into_owned()
    }

    /// Condition number `λ₁/λ₃`; infinite when `λ₃ = 0`.
    pub fn kappa(&self) -> f64 {
        let [l1, _, l3] = self.eigenvalues;
        if l3 > 0.0 {
            l1 / l3
        } else {
            f64::INFINITY
        }
    }

    /// Ellipsoidal isotropy `√(λ₃/λ₁)`; 0 when `λ₁ = 0`.
    pub fn eta(&self) -> f64 {
        let [l1, _, l3] = self.eigenvalues;
        if l1 > 0.0 {
            (l3.max(0.0) / l1).sqrt()
        } else {
            0.0
        }
    }

    pub fn is_singular(&self) -> bool {
        let [l1, _, l3] = self.eigenvalues;
        l1 == 0.0 || l3 <= SINGULARITY_THRESHOLD * l1
    }
}

/// Build the shape matrix `Q = Σ limit_i²·A_iA_iᵀ` and its spectrum.
pub fn shape_matrix(map: &AccelerationMap) -> Ellipsoid {
    let mut q = Matrix3::zeros();
    for (column, &limit) in map.columns().iter().zip(map.limits()) {
        q += column * column.transpose() * (limit * limit);
    }

    let eigen = SymmetricEigen::new(q);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]));

    // Q is PSD by construction, so negative eigenvalues are round-off; the
    // clamp window scales with the spectrum so large limits stay covered.
    let scale = eigen.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut eigenvalues = [0.0; 3];
    let mut eigenvectors = Matrix3::zeros();
    for (slot, &src) in order.iter().enumerate() {
        let mut value = eigen.eigenvalues[src];
        if value < 0.0 && value > -1e-14 * scale {
            value = 0.0;
        }
        eigenvalues[slot] = value;
        eigenvectors.set_column(slot, &eigen.eigenvectors.column(src));
    }

    Ellipsoid {
        q,
        eigenvalues,
        eigenvectors,
    }
}

/// Feasibility of a required corrective acceleration against the ellipsoid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarginReport {
    /// `1 − quadratic_form`; 1 with no demand, 0 at the feasible boundary.
    pub margin: f64,
    /// `a_reqᵀ Q⁻¹ a_req`.
    pub quadratic_form: f64,
    /// `quadratic_form ≤ 1`.
    pub feasible: bool,
}

/// Stability margin `1 − a_reqᵀQ⁻¹a_req`.
///
/// Errors with the weak eigenvector when the ellipsoid is singular.
pub fn stability_margin(ell: &Ellipsoid, a_req: &Vector3<f64>) -> Result<MarginReport, Error> {
    if ell.is_singular() {
        let weak = ell.eigenvector(2);
        return Err(Error::SingularEllipsoid {
            weak_axis: [weak.x, weak.y, weak.z],
        });
    }
    // Q⁻¹ through the eigenframe: Σ (v_iᵀ a)² / λ_i.
    let mut quadratic_form = 0.0;
    for i in 0..3 {
        let alpha = ell.eigenvector(i).dot(a_req);
        quadratic_form += alpha * alpha / ell.eigenvalues[i];
    }
    Ok(MarginReport {
        margin: 1.0 - quadratic_form,
        quadratic_form,
        feasible: quadratic_form <= 1.0,
    })
}

/// Worst-case disturbance bound along the weakest principal axis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DisturbanceBound {
    /// `√λ₃`, in m/s². The force bound is model-relative: the
    /// proportionality constant is fixed at 1.
    pub bound: f64,
    /// The algebraic identity `eta_ellipsoid·√λ₁`, for cross-checking.
    pub cross_check: f64,
}

pub fn max_disturbance_bound(ell: &Ellipsoid) -> DisturbanceBound {
    let [l1, _, l3] = ell.eigenvalues();
    DisturbanceBound {
        bound: l3.sqrt(),
        cross_check: ell.eta() * l1.sqrt(),
    }
}

/// Minimum-energy effort solution for a desired acceleration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EffortReport {
    /// `τ* = A†·a_des`, the least-squared-norm effort realizing `a_des`.
    pub torque: Vec<f64>,
    /// `‖τ*‖²`, exactly the sum of squared entries.
    pub effort: f64,
    /// Diagnostic `α_i²/λ_i` over the shape-matrix eigenframe (the
    /// ellipsoidal effort approximation; exact only under unit limits).
    pub decomposition: [f64; 3],
    /// `‖Aτ* − a_des‖`.
    pub residual: f64,
    /// Columns whose commanded effort exceeds the stated limit. Limits are
    /// advisory here — the minimum-energy program has no inequality
    /// constraints — so saturation is flagged, not enforced.
    pub saturated: Vec<usize>,
}

/// Solve `min ‖τ‖² s.t. Aτ = a_des` through a rank-revealing SVD.
///
/// Errors when `a_des` is outside the column space of `A` (relative residual
/// above 1e-9), carrying the least-squares residual.
pub fn min_energy_torque(
    map: &AccelerationMap,
    a_des: &Vector3<f64>,
) -> Result<EffortReport, Error> {
    let a = map.matrix();
    let svd = SVD::new(a.clone(), true, true);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let rank_eps = if sigma_max > 0.0 {
        SINGULARITY_THRESHOLD * sigma_max
    } else {
        f64::MIN_POSITIVE
    };

    let rhs = DVector::from_column_slice(a_des.as_slice());
    let tau = svd
        .solve(&rhs, rank_eps)
        .map_err(|msg| Error::InvalidArgument(msg.to_string()))?;

    let reproduced = &a * &tau;
    let residual = (&reproduced - &rhs).norm();
    if residual > 1e-9 * 1.0f64.max(a_des.norm()) {
        return Err(Error::InfeasibleAcceleration { residual });
    }

    let effort = tau.iter().map(|t| t * t).sum();

    let ell = shape_matrix(map);
    let tiny = 1e-12 * a_des.norm().max(1.0);
    let mut decomposition = [0.0; 3];
    for (i, entry) in decomposition.iter_mut().enumerate() {
        let alpha = ell.eigenvector(i).dot(a_des);
        let lambda = ell.eigenvalues()[i];
        // Components below numerical zero are reported as zero effort so a
        // feasible target on a rank-deficient map does not divide 0 by 0.
        *entry = if alpha.abs() <= tiny || lambda <= 0.0 {
            0.0
        } else {
            alpha * alpha / lambda
        };
    }

    let saturated = tau
        .iter()
        .enumerate()
        .filter(|(i, t)| t.abs() > map.limits()[*i])
        .map(|(i, _)| i)
        .collect();

    Ok(EffortReport {
        torque: tau.iter().cloned().collect(),
        effort,
        decomposition,
        residual,
        saturated,
    })
}

/// Before/after comparison for duplicated-actuator redundancy.
#[derive(Debug, Clone)]
pub struct RedundancyComparison {
    pub before: Ellipsoid,
    pub after: Ellipsoid,
    /// The map with the duplicates appended.
    pub augmented: AccelerationMap,
}

impl RedundancyComparison {
    pub fn eta_before(&self) -> f64 {
        self.before.eta()
    }

    pub fn eta_after(&self) -> f64 {
        self.after.eta()
    }
}

/// Append `copies` exact duplicates of column `source_index` (same limit
/// and bounds) and compare the resulting ellipsoids.
pub fn redundancy_augment(
    map: &AccelerationMap,
    source_index: usize,
    copies: usize,
) -> Result<RedundancyComparison, Error> {
    if copies == 0 {
        return Err(Error::InvalidArgument("copies must be at least 1".into()));
    }
    let augmented = map.with_duplicated_column(source_index, copies)?;
    Ok(RedundancyComparison {
        before: shape_matrix(map),
        after: shape_matrix(&augmented),
        augmented,
    })
}
