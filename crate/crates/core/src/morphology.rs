//! Declarative morphology descriptions and the canonical acceleration map.
//!
//! A [`Morphology`] is a JSON-loadable description of an actuation system in
//! one of four families:
//!
//! * `radial_legs` — linear legs pointing through the CoM; each column of the
//!   map is the leg direction scaled by 1/mass, bilateral bounds.
//! * `multirotor` — thrust-only rotors; same columns, unilateral bounds.
//! * `tensegrity` — node/element frames; each actuated element contributes a
//!   column along its axis scaled by 1/mass. Cables are folded into
//!   bilateral-equivalent columns under the optimal-grounding assumption, so
//!   tensegrity magnitudes are upper bounds.
//! * `generic` — raw dynamics: either a CoM Jacobian `J_c` (3×n) with a
//!   symmetric positive-definite inertia `M` (n×n), giving `A = J_c M⁻¹`, or
//!   a direct 3×n map.
//!
//! All analyses consume the resulting [`AccelerationMap`].

use nalgebra::{DMatrix, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// How an actuator's effort interval is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Effort in `[-limit, +limit]`.
    Bilateral,
    /// Effort in `[0, +limit]` (thrust-only).
    Unilateral,
}

/// Finite and strictly positive (rejects NaN and infinities).
fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// A single actuator: unit direction, positive effort limit, bound kind.
///
/// `bounds` may be omitted in the file, in which case the family default
/// applies (bilateral for `radial_legs`, unilateral for `multirotor`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActuatorSpec {
    pub direction: [f64; 3],
    pub limit: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundKind>,
}

impl ActuatorSpec {
    /// Validated unit direction. Directions within 1e-6 of zero norm are
    /// rejected as corrupted input rather than renormalized.
    fn unit_direction(&self) -> Result<Vector3<f64>, Error> {
        let d = Vector3::from(self.direction);
        let norm = d.norm();
        if norm < 1e-6 {
            return Err(Error::InvalidActuator(format!(
                "direction [{}, {}, {}] has near-zero norm",
                d.x, d.y, d.z
            )));
        }
        Ok(d / norm)
    }
}

/// Tensegrity element kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Rod,
    Cable,
}

/// A rod or cable connecting two nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Element {
    pub kind: ElementKind,
    pub ends: [usize; 2],
    pub limit: f64,
}

/// Node/element frame of a tensegrity morphology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensegrityFrame {
    pub nodes: Vec<[f64; 3]>,
    pub elements: Vec<Element>,
}

/// Raw dynamics input for the generic family: either `(jacobian, inertia)`
/// or a direct `map`, plus per-joint limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobian: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertia: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<Vec<f64>>>,
    pub limits: Vec<f64>,
}

/// Model family of a [`Morphology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RadialLegs,
    Multirotor,
    Tensegrity,
    Generic,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::RadialLegs => write!(f, "radial_legs"),
            Family::Multirotor => write!(f, "multirotor"),
            Family::Tensegrity => write!(f, "tensegrity"),
            Family::Generic => write!(f, "generic"),
        }
    }
}

/// Declarative description of an actuation system.
///
/// Exactly one of `actuators`, `tensegrity`, or `dynamics` must be populated,
/// determined by `family` (`radial_legs`/`multirotor` use `actuators`).
/// Unknown JSON fields are rejected with a diagnostic naming the field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Morphology {
    pub name: String,
    pub family: Family,
    pub mass: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actuators: Option<Vec<ActuatorSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensegrity: Option<TensegrityFrame>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsInput>,
}

impl Morphology {
    /// Parse and validate a morphology from JSON text.
    pub fn from_json_str(text: &str) -> Result<Self, Error> {
        let morph: Morphology = serde_json::from_str(text)?;
        morph.validate()?;
        Ok(morph)
    }

    /// Serialize to pretty JSON (the on-disk format).
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("morphology serialization cannot fail")
    }

    /// Convenience constructor for a radial-legs morphology with equal unit
    /// limits and the given mass.
    pub fn radial_legs(
        name: impl Into<String>,
        directions: &[Vector3<f64>],
        limit: f64,
        mass: f64,
    ) -> Self {
        Morphology {
            name: name.into(),
            family: Family::RadialLegs,
            mass,
            actuators: Some(
                directions
                    .iter()
                    .map(|d| ActuatorSpec {
                        direction: [d.x, d.y, d.z],
                        limit,
                        bounds: None,
                    })
                    .collect(),
            ),
            tensegrity: None,
            dynamics: None,
        }
    }

    /// Check the family/field pairing and per-family invariants.
    pub fn validate(&self) -> Result<(), Error> {
        if !positive(self.mass) {
            return Err(Error::InvalidArgument(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }

        let groups = [
            ("actuators", self.actuators.is_some()),
            ("tensegrity", self.tensegrity.is_some()),
            ("dynamics", self.dynamics.is_some()),
        ];
        let populated: Vec<&str> = groups
            .iter()
            .filter(|(_, present)| *present)
            .map(|(name, _)| *name)
            .collect();
        let expected = match self.family {
            Family::RadialLegs | Family::Multirotor => "actuators",
            Family::Tensegrity => "tensegrity",
            Family::Generic => "dynamics",
        };
        if populated != [expected] {
            return Err(Error::Parse(format!(
                "family `{}` requires exactly the `{}` group, found [{}]",
                self.family,
                expected,
                populated.join(", ")
            )));
        }

        if let Some(actuators) = &self.actuators {
            if actuators.is_empty() {
                return Err(Error::InvalidArgument("actuator list is empty".into()));
            }
            for (i, a) in actuators.iter().enumerate() {
                a.unit_direction()
                    .map_err(|e| Error::InvalidActuator(format!("actuator {i}: {e}")))?;
                if !positive(a.limit) {
                    return Err(Error::InvalidActuator(format!(
                        "actuator {i}: limit must be positive, got {}",
                        a.limit
                    )));
                }
            }
        }

        if let Some(frame) = &self.tensegrity {
            if frame.elements.is_empty() {
                return Err(Error::InvalidArgument("tensegrity has no elements".into()));
            }
            for (i, e) in frame.elements.iter().enumerate() {
                let [p, q] = e.ends;
                if p >= frame.nodes.len() || q >= frame.nodes.len() {
                    return Err(Error::IndexOutOfRange {
                        index: p.max(q),
                        len: frame.nodes.len(),
                    });
                }
                if p == q {
                    return Err(Error::DegenerateGeometry(format!(
                        "element {i} connects node {p} to itself"
                    )));
                }
                if !positive(e.limit) {
                    return Err(Error::InvalidActuator(format!(
                        "element {i}: limit must be positive, got {}",
                        e.limit
                    )));
                }
            }
        }

        if let Some(dynamics) = &self.dynamics {
            match (&dynamics.jacobian, &dynamics.inertia, &dynamics.map) {
                (Some(_), Some(_), None) | (None, None, Some(_)) => {}
                _ => {
                    return Err(Error::Parse(
                        "dynamics requires either `jacobian` and `inertia`, or `map`".into(),
                    ))
                }
            }
            if dynamics.limits.is_empty() {
                return Err(Error::InvalidArgument("dynamics limits are empty".into()));
            }
            for (i, &l) in dynamics.limits.iter().enumerate() {
                if !positive(l) {
                    return Err(Error::InvalidActuator(format!(
                        "joint {i}: limit must be positive, got {l}"
                    )));
                }
            }
        }

        Ok(())
    }
}

/// The canonical 3×n acceleration map with per-column effort bounds.
///
/// Column `i` is the CoM acceleration produced by one unit of actuator `i`'s
/// effort; `limits[i]` is that effort's magnitude bound and `bounds[i]` its
/// kind. `mass` is carried for provenance only. When `paper_compat` is set,
/// unilateral columns are evaluated with the bilateral closed form
/// `Σ|c_i|·limit_i` instead of `Σ max(0, c_i)·limit_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccelerationMap {
    columns: Vec<Vector3<f64>>,
    limits: Vec<f64>,
    bounds: Vec<BoundKind>,
    mass: f64,
    #[serde(default)]
    paper_compat: bool,
}

impl AccelerationMap {
    /// Assemble a map from parallel column/limit/bound lists.
    pub fn new(
        columns: Vec<Vector3<f64>>,
        limits: Vec<f64>,
        bounds: Vec<BoundKind>,
        mass: f64,
    ) -> Result<Self, Error> {
        if columns.is_empty() {
            return Err(Error::InvalidArgument("map needs at least one column".into()));
        }
        if columns.len() != limits.len() || columns.len() != bounds.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} limits and bounds", columns.len()),
                found: format!("{} limits, {} bounds", limits.len(), bounds.len()),
            });
        }
        if let Some(l) = limits.iter().find(|l| !positive(**l)) {
            return Err(Error::InvalidActuator(format!(
                "limits must be positive, got {l}"
            )));
        }
        Ok(AccelerationMap {
            columns,
            limits,
            bounds,
            mass,
            paper_compat: false,
        })
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Vector3<f64>] {
        &self.columns
    }

    pub fn limits(&self) -> &[f64] {
        &self.limits
    }

    pub fn bounds(&self) -> &[BoundKind] {
        &self.bounds
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn paper_compat(&self) -> bool {
        self.paper_compat
    }

    /// Toggle the bilateral closed form for unilateral columns.
    pub fn with_paper_compat(mut self, on: bool) -> Self {
        self.paper_compat = on;
        self
    }

    /// The 3×n matrix view of the columns.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(3, self.len(), |r, c| self.columns[c][r])
    }

    /// Append `copies` duplicates of column `index` (same limit and bounds).
    pub fn with_duplicated_column(&self, index: usize, copies: usize) -> Result<Self, Error> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        let mut out = self.clone();
        for _ in 0..copies {
            out.columns.push(self.columns[index]);
            out.limits.push(self.limits[index]);
            out.bounds.push(self.bounds[index]);
        }
        Ok(out)
    }

    /// Append a single arbitrary column.
    pub fn with_column(&self, column: Vector3<f64>, limit: f64, bounds: BoundKind) -> Self {
        let mut out = self.clone();
        out.columns.push(column);
        out.limits.push(limit);
        out.bounds.push(bounds);
        out
    }
}

/// Convert a validated morphology into its acceleration map.
pub fn build_acceleration_map(morph: &Morphology) -> Result<AccelerationMap, Error> {
    morph.validate()?;
    let inv_mass = 1.0 / morph.mass;

    match morph.family {
        Family::RadialLegs | Family::Multirotor => {
            let actuators = morph.actuators.as_ref().expect("validated");
            let family_default = match morph.family {
                Family::RadialLegs => BoundKind::Bilateral,
                _ => BoundKind::Unilateral,
            };
            let mut columns = Vec::with_capacity(actuators.len());
            let mut limits = Vec::with_capacity(actuators.len());
            let mut bounds = Vec::with_capacity(actuators.len());
            for a in actuators {
                columns.push(a.unit_direction()? * inv_mass);
                limits.push(a.limit);
                // An explicit per-actuator value in the file wins over the
                // family default.
                bounds.push(a.bounds.unwrap_or(family_default));
            }
            AccelerationMap::new(columns, limits, bounds, morph.mass)
        }
        Family::Tensegrity => {
            let frame = morph.tensegrity.as_ref().expect("validated");
            let mut columns = Vec::with_capacity(frame.elements.len());
            let mut limits = Vec::with_capacity(frame.elements.len());
            let mut bounds = Vec::with_capacity(frame.elements.len());
            for (i, e) in frame.elements.iter().enumerate() {
                let p = Vector3::from(frame.nodes[e.ends[0]]);
                let q = Vector3::from(frame.nodes[e.ends[1]]);
                let axis = q - p;
                let len = axis.norm();
                if len < 1e-9 {
                    return Err(Error::DegenerateGeometry(format!(
                        "element {i} has zero length"
                    )));
                }
                columns.push(axis / len * inv_mass);
                limits.push(e.limit);
                // Cables are unilateral in hardware, but optimal grounding of
                // either endpoint recovers both force signs, so the map folds
                // them into bilateral-equivalent columns. Downstream figures
                // for tensegrity morphologies are therefore upper bounds.
                bounds.push(BoundKind::Bilateral);
            }
            AccelerationMap::new(columns, limits, bounds, morph.mass)
        }
        Family::Generic => {
            let dynamics = morph.dynamics.as_ref().expect("validated");
            if let Some(map_rows) = &dynamics.map {
                let a = matrix_from_rows(map_rows, "map")?;
                if a.nrows() != 3 || a.ncols() != dynamics.limits.len() {
                    return Err(Error::DimensionMismatch {
                        expected: format!("3×{} map", dynamics.limits.len()),
                        found: format!("{}×{}", a.nrows(), a.ncols()),
                    });
                }
                let columns = (0..a.ncols())
                    .map(|c| Vector3::new(a[(0, c)], a[(1, c)], a[(2, c)]))
                    .collect();
                AccelerationMap::new(
                    columns,
                    dynamics.limits.clone(),
                    vec![BoundKind::Bilateral; a.ncols()],
                    morph.mass,
                )
            } else {
                let jac = matrix_from_rows(dynamics.jacobian.as_ref().expect("validated"), "jacobian")?;
                let inertia =
                    matrix_from_rows(dynamics.inertia.as_ref().expect("validated"), "inertia")?;
                compose_from_dynamics(&jac, &inertia, &dynamics.limits)
                    .map(|m| AccelerationMap { mass: morph.mass, ..m })
            }
        }
    }
}

/// Build the map `A = J_c M⁻¹` from a CoM Jacobian and an SPD inertia matrix,
/// solving through a Cholesky factorization rather than an explicit inverse.
pub fn compose_from_dynamics(
    jacobian: &DMatrix<f64>,
    inertia: &DMatrix<f64>,
    limits: &[f64],
) -> Result<AccelerationMap, Error> {
    let n = inertia.nrows();
    if jacobian.nrows() != 3 {
        return Err(Error::DimensionMismatch {
            expected: "3-row Jacobian".into(),
            found: format!("{} rows", jacobian.nrows()),
        });
    }
    if inertia.ncols() != n || jacobian.ncols() != n || limits.len() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("J_c 3×{n}, M {n}×{n}, {n} limits"),
            found: format!(
                "J_c {}×{}, M {}×{}, {} limits",
                jacobian.nrows(),
                jacobian.ncols(),
                inertia.nrows(),
                inertia.ncols(),
                limits.len()
            ),
        });
    }
    if let Some(l) = limits.iter().find(|l| !positive(**l)) {
        return Err(Error::InvalidActuator(format!(
            "limits must be positive, got {l}"
        )));
    }

    // Symmetry within 1e-9 relative, then a positive-definiteness check on
    // the eigenvalue spread.
    let scale = inertia.amax().max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in (i + 1)..n {
            if (inertia[(i, j)] - inertia[(j, i)]).abs() > 1e-9 * scale {
                return Err(Error::IllConditionedDynamics(format!(
                    "inertia is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    let symmetric = (inertia + inertia.transpose()) * 0.5;
    let eigenvalues = symmetric.clone().symmetric_eigenvalues();
    let max_eig = eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_eig = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig.partial_cmp(&(1e-12 * max_eig)) != Some(std::cmp::Ordering::Greater) || !positive(max_eig) {
        return Err(Error::IllConditionedDynamics(format!(
            "inertia eigenvalues span [{min_eig:e}, {max_eig:e}]"
        )));
    }
    let cholesky = symmetric
        .cholesky()
        .ok_or_else(|| Error::IllConditionedDynamics("Cholesky factorization failed".into()))?;

    // A = J M⁻¹ = (M⁻¹ Jᵀ)ᵀ since M is symmetric.
    let solved = cholesky.solve(&jacobian.transpose());
    let a = solved.transpose();
    let columns = (0..n)
        .map(|c| Vector3::new(a[(0, c)], a[(1, c)], a[(2, c)]))
        .collect();
    AccelerationMap::new(columns, limits.to_vec(), vec![BoundKind::Bilateral; n], 1.0)
}

fn matrix_from_rows(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>, Error> {
    if rows.is_empty() {
        return Err(Error::Parse(format!("{what} matrix is empty")));
    }
    let ncols = rows[0].len();
    if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse(format!("{what} matrix rows have uneven lengths")));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(DMatrix::from_row_slice(rows.len(), ncols, &flat))
}
