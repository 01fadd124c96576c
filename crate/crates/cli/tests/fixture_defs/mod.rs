//! Closed-form constructions of the bundled reference morphologies.
//!
//! Vertex coordinates come from exact golden-ratio constructions; polyhedron
//! vertices are projected onto the unit sphere. The shipped JSON files in
//! `fixtures/` must stay equal to these builders (see `fixtures_check.rs`).

use dyniso::morphology::{
    ActuatorSpec, Element, ElementKind, Family, Morphology, TensegrityFrame,
};
use nalgebra::Vector3;

pub fn phi() -> f64 {
    (1.0 + 5.0_f64.sqrt()) / 2.0
}

pub fn octahedron_vertices() -> Vec<Vector3<f64>> {
    vec![
        Vector3::x(),
        -Vector3::x(),
        Vector3::y(),
        -Vector3::y(),
        Vector3::z(),
        -Vector3::z(),
    ]
}

/// Cyclic permutations of (0, ±1, ±φ), unit-normalized.
pub fn icosahedron_vertices() -> Vec<Vector3<f64>> {
    let p = phi();
    let mut vertices = Vec::with_capacity(12);
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            vertices.push(Vector3::new(0.0, s1, s2 * p));
            vertices.push(Vector3::new(s1, s2 * p, 0.0));
            vertices.push(Vector3::new(s1 * p, 0.0, s2));
        }
    }
    vertices.iter().map(|v| v.normalize()).collect()
}

/// (±1, ±1, ±1) plus cyclic permutations of (0, ±1/φ, ±φ), unit-normalized
/// (all dodecahedron vertices lie at radius √3).
pub fn dodecahedron_vertices() -> Vec<Vector3<f64>> {
    let p = phi();
    let q = 1.0 / p;
    let mut vertices = Vec::with_capacity(20);
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            for s3 in [1.0, -1.0] {
                vertices.push(Vector3::new(s1, s2, s3));
            }
        }
    }
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            vertices.push(Vector3::new(0.0, s1 * q, s2 * p));
            vertices.push(Vector3::new(s1 * q, s2 * p, 0.0));
            vertices.push(Vector3::new(s1 * p, 0.0, s2 * q));
        }
    }
    vertices.iter().map(|v| v.normalize()).collect()
}

/// The 32 rhombic-triacontahedron vertices are the dodecahedron's 20 plus
/// the icosahedron's 12; the two classes sit at different radii and are both
/// projected onto the unit sphere here.
pub fn rhombic_triacontahedron_vertices() -> Vec<Vector3<f64>> {
    let mut vertices = dodecahedron_vertices();
    vertices.extend(icosahedron_vertices());
    vertices
}

pub fn cube_vertices() -> Vec<Vector3<f64>> {
    let mut vertices = Vec::with_capacity(8);
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            for s3 in [1.0, -1.0] {
                vertices.push(Vector3::new(s1, s2, s3).normalize());
            }
        }
    }
    vertices
}

fn radial(name: &str, directions: &[Vector3<f64>]) -> Morphology {
    Morphology::radial_legs(name, directions, 1.0, 1.0)
}

fn multirotor(name: &str, directions: &[Vector3<f64>]) -> Morphology {
    Morphology {
        name: name.into(),
        family: Family::Multirotor,
        mass: 1.0,
        actuators: Some(
            directions
                .iter()
                .map(|d| ActuatorSpec {
                    direction: [d.x, d.y, d.z],
                    limit: 1.0,
                    bounds: None,
                })
                .collect(),
        ),
        tensegrity: None,
        dynamics: None,
    }
}

/// Six-strut tensegrity on the icosahedron: the 30 edges split into 6
/// parallel pairs (struts) and 24 cables.
fn tensegrity_six_bar() -> Morphology {
    let nodes = icosahedron_vertices();
    let edge_length = 2.0 / (1.0 + phi() * phi()).sqrt();

    let mut rods = Vec::new();
    let mut cables = Vec::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let dist = (nodes[i] - nodes[j]).norm();
            if (dist - edge_length).abs() < 1e-9 {
                // A strut's midpoint lies on a coordinate axis.
                let mid = nodes[i] + nodes[j];
                let nonzero = [mid.x, mid.y, mid.z]
                    .iter()
                    .filter(|c| c.abs() > 1e-9)
                    .count();
                if nonzero == 1 {
                    rods.push([i, j]);
                } else {
                    cables.push([i, j]);
                }
            }
        }
    }
    assert_eq!(rods.len(), 6);
    assert_eq!(cables.len(), 24);

    let element = |kind: ElementKind, ends: [usize; 2]| Element {
        kind,
        ends,
        limit: 1.0,
    };
    Morphology {
        name: "tensegrity-6bar".into(),
        family: Family::Tensegrity,
        mass: 1.0,
        actuators: None,
        tensegrity: Some(TensegrityFrame {
            nodes: nodes.iter().map(|n| [n.x, n.y, n.z]).collect(),
            elements: rods
                .into_iter()
                .map(|ends| element(ElementKind::Rod, ends))
                .chain(
                    cables
                        .into_iter()
                        .map(|ends| element(ElementKind::Cable, ends)),
                )
                .collect(),
        }),
        dynamics: None,
    }
}

/// All bundled fixtures as (file stem, morphology).
pub fn all() -> Vec<(&'static str, Morphology)> {
    vec![
        ("octahedron-6", radial("octahedron-6", &octahedron_vertices())),
        (
            "icosahedron-12",
            radial("icosahedron-12", &icosahedron_vertices()),
        ),
        (
            "dodecahedron-20",
            radial("dodecahedron-20", &dodecahedron_vertices()),
        ),
        (
            "rhombic-triacontahedron-32",
            radial(
                "rhombic-triacontahedron-32",
                &rhombic_triacontahedron_vertices(),
            ),
        ),
        (
            "quadrotor-4",
            multirotor("quadrotor-4", &[Vector3::z(), Vector3::z(), Vector3::z(), Vector3::z()]),
        ),
        ("cube-rotor-8", multirotor("cube-rotor-8", &cube_vertices())),
        ("tensegrity-6bar", tensegrity_six_bar()),
    ]
}
