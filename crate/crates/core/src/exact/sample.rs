//! Deterministic rational sample points for pointwise rank checks.
//!
//! Points are drawn from a seeded stream, so a report is reproducible
//! byte for byte from (seed, count, box, avoid).

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use num_traits::Zero;

use super::poly::Poly;
use super::{ratio, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SamplePlan {
    pub seed: u64,
    pub count: usize,
    /// Coordinates are rationals in [-box_bound, box_bound].
    pub box_bound: i64,
    /// Polynomials that must not vanish at any emitted point.
    pub avoid: Vec<Poly>,
}

impl SamplePlan {
    pub fn new(seed: u64, count: usize, box_bound: i64) -> Self {
        SamplePlan { seed, count, box_bound, avoid: Vec::new() }
    }

    pub fn avoiding(mut self, polys: Vec<Poly>) -> Self {
        self.avoid = polys;
        self
    }

    /// Exactly `count` distinct admissible points in dimension `n`.
    pub fn sample_points(&self, n: usize) -> Result<Vec<Vec<Rat>>> {
        assert!(n >= 1, "sampling needs a positive dimension");
        for p in &self.avoid {
            assert_eq!(p.vars().len(), n, "avoid polynomial on a different chart");
        }
        let mut rng = StdRng::seed_from_u64(self.seed);
        let mut points: Vec<Vec<Rat>> = Vec::with_capacity(self.count);
        let budget = 200 * self.count.max(1);
        let mut tried = 0;
        while points.len() < self.count {
            if tried >= budget {
                return Err(Error::SampleExhausted { wanted: self.count, tried });
            }
            tried += 1;
            let point: Vec<Rat> = (0..n)
                .map(|_| {
                    let den = rng.gen_range(1..=4i64);
                    let num = rng.gen_range(-self.box_bound * den..=self.box_bound * den);
                    ratio(num, den)
                })
                .collect();
            if points.contains(&point) {
                continue;
            }
            if self.avoid.iter().any(|p| p.eval(&point).is_zero()) {
                continue;
            }
            points.push(point);
        }
        Ok(points)
    }
}
