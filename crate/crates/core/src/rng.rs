//! Minimal deterministic random generator.
//!
//! All randomized routines in this crate draw from [`SplitMix64`]
//! (Steele, Lea & Flood 2014; the reference `splitmix64` used to seed
//! xorshift-family generators). The algorithm is fixed here rather than
//! taken from an external crate so that seeded outputs are identical
//! across platforms and releases. Gaussian variates use the Box–Muller
//! transform with `libm` transcendentals for the same reason.

use nalgebra::Vector3;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Avalanching finalizer of the splitmix64 step. Also used to derive
/// independent streams from a (seed, salt) pair.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 generator state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare_normal: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare_normal: None,
        }
    }

    /// Derive an independent stream from a base seed and salts, so that
    /// parallel work units get schedule-independent generators.
    pub fn derive(seed: u64, salts: &[u64]) -> Self {
        let mut s = mix64(seed.wrapping_add(GOLDEN_GAMMA));
        for &salt in salts {
            s = mix64(s ^ mix64(salt.wrapping_add(GOLDEN_GAMMA)));
        }
        Self::new(s)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in [0, 1), 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1]; safe as a logarithm argument.
    fn next_open_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate (Box–Muller; pairs are consumed in order,
    /// one kept as spare).
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.next_open_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * libm::log(u1)).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(r * libm::sin(theta));
        r * libm::cos(theta)
    }

    /// Uniform direction on the unit sphere: a normalized 3-vector of
    /// independent standard normals. Re-draws the (measure-zero) case of a
    /// nearly zero vector.
    pub fn next_unit_vector(&mut self) -> Vector3<f64> {
        loop {
            let v = Vector3::new(self.next_normal(), self.next_normal(), self.next_normal());
            let norm = v.norm();
            if norm > 1e-9 {
                return v / norm;
            }
        }
    }
}
