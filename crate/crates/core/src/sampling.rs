//! Seeded, portable random test points.
//!
//! Floats are built from the top 53 bits of each SplitMix64 output, so a seed
//! yields the same sequence on every platform and toolchain.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::Result;
use crate::phasespace::DarbouxPoint;

/// Half-width of the default sampling box `[-2, 2]^(2n+1)`.
pub const DEFAULT_BOX: f64 = 2.0;

#[derive(Debug, Clone)]
pub struct PointSampler {
    rng: SplitMix64,
}

impl PointSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// A point with every coordinate uniform in `[-half_width, half_width]`.
    pub fn point(&mut self, n: usize, half_width: f64) -> Result<DarbouxPoint> {
        let coords: Vec<f64> = (0..2 * n + 1)
            .map(|_| self.uniform(-half_width, half_width))
            .collect();
        DarbouxPoint::from_coords(&coords)
    }

    /// `count` points from the default box.
    pub fn points(&mut self, n: usize, count: usize) -> Result<Vec<DarbouxPoint>> {
        (0..count).map(|_| self.point(n, DEFAULT_BOX)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let a: Vec<f64> = {
            let mut s = PointSampler::new(7);
            (0..16).map(|_| s.unit()).collect()
        };
        let b: Vec<f64> = {
            let mut s = PointSampler::new(7);
            (0..16).map(|_| s.unit()).collect()
        };
        assert_eq!(a, b);
        assert!(a.iter().all(|v| (0.0..1.0).contains(v)));
    }

    #[test]
    fn first_draw_is_splitmix64_reference_value() {
        // SplitMix64 seeded with 0 produces 0xe220a8397b1dcdaf first.
        let mut s = PointSampler::new(0);
        let expected = (0xe220a8397b1dcdafu64 >> 11) as f64 / (1u64 << 53) as f64;
        assert_eq!(s.unit(), expected);
    }

    #[test]
    fn points_stay_in_box() {
        let mut s = PointSampler::new(1);
        for x in s.points(2, 200).unwrap() {
            assert!(x.to_vec().iter().all(|v| v.abs() <= DEFAULT_BOX));
        }
    }
}
