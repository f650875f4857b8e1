//! Two-class finite measures, couplings supported on the epsilon-ball edge
//! set, and the infinity-Wasserstein distance.
//!
//! `W_inf(p, q) <= t` is decided exactly as a bipartite max-flow: unit
//! source capacities `p`, sink capacities `q`, unbounded middle edges between
//! points at distance at most `t`. The distance itself is the smallest
//! feasible pairwise distance, found by binary search over the sorted
//! source-target distances.

use crate::error::{Error, Result};
use crate::flow::MaxFlow;
use crate::ground::{argmax_ball, GroundSet};
use crate::scalar::{ordered_sum, Scalar};

/// Relative tolerance for equal total masses (f64; widened for coarser types).
pub const MASS_TOL: f64 = 1e-9;
/// Feasibility slack of the flow check, per unit of mass.
pub const FLOW_SLACK: f64 = 1e-10;

/// `base`, or a few hundred ulps of `T` if that is coarser.
pub(crate) fn scaled_tol<T: Scalar>(base: f64) -> T {
    T::lit(base).max(T::lit(256.0) * T::epsilon())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoClassMeasure<T> {
    pub mass0: Vec<T>,
    pub mass1: Vec<T>,
}

impl<T: Scalar> TwoClassMeasure<T> {
    pub fn new(mass0: Vec<T>, mass1: Vec<T>) -> Result<Self> {
        if mass0.len() != mass1.len() {
            return Err(Error::LengthMismatch { expected: mass0.len(), found: mass1.len() });
        }
        check_masses(&mass0)?;
        check_masses(&mass1)?;
        Ok(Self { mass0, mass1 })
    }

    pub fn len(&self) -> usize {
        self.mass0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass0.is_empty()
    }

    pub fn class(&self, c: usize) -> &[T] {
        if c == 0 {
            &self.mass0
        } else {
            &self.mass1
        }
    }

    pub fn total0(&self) -> T {
        ordered_sum(self.mass0.iter().copied())
    }

    pub fn total1(&self) -> T {
        ordered_sum(self.mass1.iter().copied())
    }

    pub fn total(&self) -> T {
        self.total0() + self.total1()
    }

    /// Class labels exchanged.
    pub fn swapped(&self) -> Self {
        Self { mass0: self.mass1.clone(), mass1: self.mass0.clone() }
    }

    pub fn check_ground(&self, g: &GroundSet<T>) -> Result<()> {
        if self.len() != g.len() {
            return Err(Error::LengthMismatch { expected: g.len(), found: self.len() });
        }
        Ok(())
    }
}

pub fn check_masses<T: Scalar>(m: &[T]) -> Result<()> {
    for (index, &v) in m.iter().enumerate() {
        if !(v >= T::zero()) || !v.is_finite() {
            return Err(Error::NegativeMass { index, value: v.as_f64() });
        }
    }
    Ok(())
}

/// Sparse transport plan stored as `(source, target, mass)` triples sorted by
/// `(source, target)` with no repeated pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Coupling<T> {
    entries: Vec<(usize, usize, T)>,
}

impl<T: Scalar> Coupling<T> {
    /// Sorts, merges repeated pairs and drops zero entries.
    pub fn from_entries(mut entries: Vec<(usize, usize, T)>) -> Self {
        entries.sort_by_key(|&(i, j, _)| (i, j));
        let mut out: Vec<(usize, usize, T)> = Vec::with_capacity(entries.len());
        for (i, j, w) in entries {
            match out.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += w,
                _ => out.push((i, j, w)),
            }
        }
        out.retain(|e| e.2 != T::zero());
        Self { entries: out }
    }

    /// All mass stays in place.
    pub fn identity(p: &[T]) -> Self {
        Self::from_entries(p.iter().enumerate().map(|(i, &w)| (i, i, w)).collect())
    }

    pub fn entries(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    pub fn total(&self) -> T {
        ordered_sum(self.entries.iter().map(|e| e.2))
    }

    pub fn source_marginal(&self, n: usize) -> Vec<T> {
        let mut m = vec![T::zero(); n];
        for &(i, _, w) in &self.entries {
            m[i] += w;
        }
        m
    }

    /// Validates nonnegativity, index range and support in the epsilon-ball
    /// edge set of `g`.
    pub fn check_support(&self, g: &GroundSet<T>) -> Result<()> {
        for &(i, j, w) in &self.entries {
            if i >= g.len() || j >= g.len() {
                return Err(Error::InfeasibleDual(format!("pair ({i}, {j}) out of range")));
            }
            if !(w >= T::zero()) || !w.is_finite() {
                return Err(Error::InfeasibleDual(format!("pair ({i}, {j}) has mass {w}")));
            }
            if !g.are_neighbors(i, j) {
                return Err(Error::InfeasibleDual(format!(
                    "pair ({i}, {j}) at distance {} exceeds epsilon {}",
                    g.distance(i, j),
                    g.epsilon()
                )));
            }
        }
        Ok(())
    }

    /// Checks that the source marginal reproduces `p` within `tol` per entry.
    pub fn check_marginal(&self, p: &[T], tol: T) -> Result<()> {
        let m = self.source_marginal(p.len());
        for (i, (&a, &b)) in m.iter().zip(p).enumerate() {
            if (a - b).abs() > tol {
                return Err(Error::InfeasibleDual(format!("source marginal at {i} is {a}, expected {b}")));
            }
        }
        Ok(())
    }
}

/// Target marginal of a coupling.
pub fn pushforward<T: Scalar>(c: &Coupling<T>, n: usize) -> Vec<T> {
    let mut m = vec![T::zero(); n];
    for &(_, j, w) in c.entries() {
        m[j] += w;
    }
    m
}

fn check_totals<T: Scalar>(p: &[T], q: &[T]) -> Result<(T, T)> {
    check_masses(p)?;
    check_masses(q)?;
    let (tp, tq) = (ordered_sum(p.iter().copied()), ordered_sum(q.iter().copied()));
    if (tp - tq).abs() > scaled_tol::<T>(MASS_TOL) * T::one().max(tp.max(tq)) {
        return Err(Error::MassMismatch(tp.as_f64(), tq.as_f64()));
    }
    Ok((tp, tq))
}

fn support<T: Scalar>(m: &[T]) -> Vec<usize> {
    m.iter().enumerate().filter(|(_, &w)| w > T::zero()).map(|(i, _)| i).collect()
}

fn flow_feasible<T: Scalar>(g: &GroundSet<T>, p: &[T], q: &[T], sp: &[usize], sq: &[usize], t: T, total: T) -> bool {
    let (src, sink) = (0, 1);
    let mut net = MaxFlow::new(2 + sp.len() + sq.len(), T::lit(1e-3) * scaled_tol::<T>(FLOW_SLACK) * total);
    for (a, &i) in sp.iter().enumerate() {
        net.add_edge(src, 2 + a, p[i]);
        for (b, &j) in sq.iter().enumerate() {
            if g.distance(i, j) <= t {
                net.add_edge(2 + a, 2 + sp.len() + b, T::infinity());
            }
        }
    }
    for (b, &j) in sq.iter().enumerate() {
        net.add_edge(2 + sp.len() + b, sink, q[j]);
    }
    let target = ordered_sum(sq.iter().map(|&j| q[j]));
    net.run(src, sink) >= target - scaled_tol::<T>(FLOW_SLACK) * total.max(T::one())
}

/// Whether a coupling of `p` and `q` exists whose support only joins points
/// of `g` (under `g`'s norm) at distance at most `epsilon`.
pub fn winf_feasible<T: Scalar>(g: &GroundSet<T>, p: &[T], q: &[T], epsilon: T) -> Result<bool> {
    let (tp, _) = check_totals(p, q)?;
    let (sp, sq) = (support(p), support(q));
    Ok(flow_feasible(g, p, q, &sp, &sq, epsilon, tp))
}

/// Candidate thresholds: sorted distinct distances between the supports.
pub fn distance_spectrum<T: Scalar>(g: &GroundSet<T>, p: &[T], q: &[T]) -> Vec<T> {
    let (sp, sq) = (support(p), support(q));
    let mut d: Vec<T> = sp.iter().flat_map(|&i| sq.iter().map(move |&j| g.distance(i, j))).collect();
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    d.dedup();
    d
}

pub fn winf_distance<T: Scalar>(g: &GroundSet<T>, p: &[T], q: &[T]) -> Result<T> {
    let (tp, _) = check_totals(p, q)?;
    let (sp, sq) = (support(p), support(q));
    let spectrum = distance_spectrum(g, p, q);
    if spectrum.is_empty() {
        return Ok(T::zero());
    }
    let (mut lo, mut hi) = (0, spectrum.len() - 1);
    // The largest distance always admits the product coupling.
    while lo < hi {
        let mid = (lo + hi) / 2;
        if flow_feasible(g, p, q, &sp, &sq, spectrum[mid], tp) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(spectrum[lo])
}

/// Each source sends all of its mass to the lowest-index maximizer of
/// `field` over its ball.
pub fn greedy_attack<T: Scalar>(g: &GroundSet<T>, field: &[T], p: &[T]) -> Coupling<T> {
    let entries = p
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > T::zero())
        .map(|(i, &w)| (i, argmax_ball(g, field, i), w))
        .collect();
    Coupling::from_entries(entries)
}

/// `sum_i p(i) * field(T(i))` for the targets of a coupling, with `0 * inf = 0`.
pub fn transported_integral<T: Scalar>(c: &Coupling<T>, field: &[T]) -> T {
    ordered_sum(c.entries().iter().map(|&(_, j, w)| crate::scalar::mul0(w, field[j])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::{sup_ball, Norm};

    fn line(xs: &[f64], eps: f64) -> GroundSet<f64> {
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        GroundSet::new(&pts, Norm::L2, eps).unwrap()
    }

    #[test]
    fn measure_validation() {
        assert!(TwoClassMeasure::new(vec![0.5, -0.1], vec![0.0, 0.0]).is_err());
        assert!(TwoClassMeasure::new(vec![0.5], vec![0.0, 0.0]).is_err());
        let m = TwoClassMeasure::new(vec![0.5, 0.0], vec![0.0, 0.7]).unwrap();
        assert_eq!(m.total(), 1.2);
    }

    #[test]
    fn pushforward_examples() {
        let p = vec![0.2, 0.3, 0.5];
        assert_eq!(pushforward(&Coupling::identity(&p), 3), p);
        let split = Coupling::from_entries(vec![(0, 1, 0.5), (0, 2, 0.5)]);
        assert_eq!(pushforward(&split, 3), vec![0.0, 0.5, 0.5]);
        assert_eq!(split.source_marginal(3), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn entries_merge_and_sort() {
        let c = Coupling::from_entries(vec![(1, 0, 0.25), (0, 1, 0.5), (1, 0, 0.25), (2, 2, 0.0)]);
        assert_eq!(c.entries(), &[(0, 1, 0.5), (1, 0, 0.5)]);
    }

    #[test]
    fn support_check() {
        let g = line(&[0.0, 0.5, 1.0], 0.6);
        assert!(Coupling::from_entries(vec![(0, 1, 1.0)]).check_support(&g).is_ok());
        assert!(matches!(
            Coupling::from_entries(vec![(0, 2, 1.0)]).check_support(&g),
            Err(Error::InfeasibleDual(_))
        ));
    }

    #[test]
    fn winf_single_edge() {
        let g = line(&[0.0, 1.0], 0.0);
        let (p, q) = (vec![1.0, 0.0], vec![0.0, 1.0]);
        assert!(winf_feasible(&g, &p, &q, 1.0).unwrap());
        assert!(!winf_feasible(&g, &p, &q, 0.9).unwrap());
        assert_eq!(winf_distance(&g, &p, &q).unwrap(), 1.0);
        assert_eq!(winf_distance(&g, &p, &p).unwrap(), 0.0);
        assert!(winf_feasible(&g, &p, &p, 0.0).unwrap());
        assert!(matches!(winf_distance(&g, &p, &[0.0, 2.0]), Err(Error::MassMismatch(..))));
    }

    #[test]
    fn winf_two_atoms() {
        // Both matchings: {0->0.4, 1->1.4} costs 0.4, {0->1.4, 1->0.4} costs 1.4.
        let g = line(&[0.0, 1.0, 0.4, 1.4], 0.0);
        let (p, q) = (vec![0.5, 0.5, 0.0, 0.0], vec![0.0, 0.0, 0.5, 0.5]);
        let brute = [0.4_f64.max(0.4), 1.4_f64.max(0.6)].into_iter().fold(f64::INFINITY, f64::min);
        assert!(winf_feasible(&g, &p, &q, 0.4).unwrap());
        assert!(!winf_feasible(&g, &p, &q, 0.39).unwrap());
        assert_eq!(winf_distance(&g, &p, &q).unwrap(), brute);
    }

    #[test]
    fn greedy_attack_examples() {
        let g = line(&[0.0, 0.5, 1.0], 0.6);
        let field = [0.0, 1.0, 2.0];
        let c = greedy_attack(&g, &field, &[1.0, 0.0, 0.0]);
        assert_eq!(c.entries(), &[(0, 1, 1.0)]);
        let g0 = line(&[0.0, 0.5, 1.0], 0.0);
        let p = [0.2, 0.3, 0.5];
        assert_eq!(greedy_attack(&g0, &field, &p), Coupling::identity(&p));
    }

    #[test]
    fn greedy_attack_attains_ball_sup() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let xs: Vec<f64> = (0..12).map(|_| rng.gen_range(0.0..3.0)).collect();
            let g = line(&xs, rng.gen_range(0.0..1.0));
            let f: Vec<f64> = (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let p: Vec<f64> = (0..12).map(|_| rng.gen_range(0.0..1.0)).collect();
            let c = greedy_attack(&g, &f, &p);
            let s = sup_ball(&g, &f);
            let lhs: f64 = p.iter().zip(s.iter()).map(|(a, b)| a * b).sum();
            assert_eq!(transported_integral(&c, &f), ordered_sum(p.iter().zip(s.iter()).map(|(a, b)| a * b)));
            assert!((lhs - transported_integral(&c, &f)).abs() < 1e-12);
            assert!(winf_feasible(&g, &p, &pushforward(&c, 12), g.epsilon()).unwrap());
        }
    }

    #[test]
    fn feasibility_monotone_in_epsilon() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..2.0)).collect();
        let g = line(&xs, 0.0);
        let mut p: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..1.0)).collect();
        let mut q: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..1.0)).collect();
        let (sp, sq): (f64, f64) = (p.iter().sum(), q.iter().sum());
        p.iter_mut().for_each(|x| *x /= sp);
        q.iter_mut().for_each(|x| *x /= sq);
        let mut prev = false;
        for k in 0..=40 {
            let ok = winf_feasible(&g, &p, &q, k as f64 * 0.05).unwrap();
            assert!(ok || !prev);
            prev = ok;
        }
        assert!(prev);
    }
}
