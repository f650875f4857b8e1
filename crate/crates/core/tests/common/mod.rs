#![allow(dead_code)]

use advdual::{GroundSet, Norm, TwoClassMeasure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded random instance: up to 40 points in 1-D or 2-D, sparse random
/// masses, random epsilon.
pub fn random_instance(seed: u64) -> (GroundSet<f64>, TwoClassMeasure<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=40);
    let dim = rng.gen_range(1..=2);
    let norm = [Norm::L1, Norm::L2, Norm::Linf][rng.gen_range(0..3)];
    let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
    let eps = rng.gen_range(0.0..0.4);
    let mut mass = |p: f64| -> Vec<f64> {
        (0..n).map(|_| if rng.gen_bool(p) { rng.gen_range(0.01..1.0) } else { 0.0 }).collect()
    };
    let mut m0 = mass(0.5);
    let mut m1 = mass(0.5);
    m0[0] += 0.1;
    m1[n - 1] += 0.1;
    let total: f64 = m0.iter().chain(&m1).sum();
    m0.iter_mut().chain(m1.iter_mut()).for_each(|v| *v /= total);
    (GroundSet::new(&pts, norm, eps).unwrap(), TwoClassMeasure::new(m0, m1).unwrap())
}

pub fn line(xs: &[f64], eps: f64) -> GroundSet<f64> {
    let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
    GroundSet::new(&pts, Norm::L2, eps).unwrap()
}
