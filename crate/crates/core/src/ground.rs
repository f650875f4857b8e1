//! Finite metric ground sets and the ball operators on them.
//!
//! A [`GroundSet`] stores the points, the norm, the radius `epsilon` and the
//! closed-ball neighbor relation `{(i, j) : |x_i - x_j| <= epsilon}` in CSR
//! form. [`sup_ball`] and [`inf_ball`] are the morphological dilation and
//! erosion of a [`Field`] over that relation; [`dilate`] is the set version.

use std::collections::HashMap;
use std::ops::{Deref, DerefMut, Index};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{emax, emin, Scalar};

const PAR_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub fn distance<T: Scalar>(self, a: &[T], b: &[T]) -> T {
        let diffs = a.iter().zip(b).map(|(&x, &y)| (x - y).abs());
        match self {
            Norm::L1 => diffs.fold(T::zero(), |s, d| s + d),
            Norm::L2 => diffs.fold(T::zero(), |s, d| s + d * d).sqrt(),
            Norm::Linf => diffs.fold(T::zero(), emax),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            "linf" => Ok(Norm::Linf),
            other => Err(Error::Parse(format!("unknown norm '{other}'"))),
        }
    }
}

/// Finite point cloud with its closed epsilon-ball neighbor index.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundSet<T> {
    dim: usize,
    coords: Vec<T>,
    norm: Norm,
    epsilon: T,
    offsets: Vec<usize>,
    nbrs: Vec<usize>,
}

impl<T: Scalar> GroundSet<T> {
    /// Builds the neighbor index, using uniform grid buckets of side `epsilon`
    /// for `d <= 3` and the quadratic scan otherwise.
    pub fn new(points: &[Vec<T>], norm: Norm, epsilon: T) -> Result<Self> {
        let (dim, coords) = validate_points(points)?;
        check_epsilon(epsilon)?;
        let lists = if dim <= 3 {
            bucket_neighbors(&coords, dim, norm, epsilon)
                .unwrap_or_else(|| brute_neighbors(&coords, dim, norm, epsilon))
        } else {
            brute_neighbors(&coords, dim, norm, epsilon)
        };
        Ok(Self::from_lists(dim, coords, norm, epsilon, lists))
    }

    /// Quadratic reference construction.
    pub fn new_brute(points: &[Vec<T>], norm: Norm, epsilon: T) -> Result<Self> {
        let (dim, coords) = validate_points(points)?;
        check_epsilon(epsilon)?;
        let lists = brute_neighbors(&coords, dim, norm, epsilon);
        Ok(Self::from_lists(dim, coords, norm, epsilon, lists))
    }

    /// Same points and norm, re-indexed for a different radius.
    pub fn with_epsilon(&self, epsilon: T) -> Result<Self> {
        Self::new(&self.points(), self.norm, epsilon)
    }

    fn from_lists(dim: usize, coords: Vec<T>, norm: Norm, epsilon: T, lists: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut nbrs = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        offsets.push(0);
        for mut l in lists {
            l.sort_unstable();
            nbrs.extend_from_slice(&l);
            offsets.push(nbrs.len());
        }
        Self { dim, coords, norm, epsilon, offsets, nbrs }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> Vec<Vec<T>> {
        (0..self.len()).map(|i| self.point(i).to_vec()).collect()
    }

    /// Sorted indices `j` with `|x_i - x_j| <= epsilon`; always contains `i`.
    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.nbrs[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Position of the first edge of `i` in the flat edge arrays.
    #[inline]
    pub fn edge_offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// Number of directed edges, self loops included.
    pub fn num_edges(&self) -> usize {
        self.nbrs.len()
    }

    pub fn distance(&self, i: usize, j: usize) -> T {
        self.norm.distance(self.point(i), self.point(j))
    }

    pub fn are_neighbors(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&j).is_ok()
    }

    /// Indices whose distance to `i` is at most `radius` (not restricted to the
    /// stored neighbor index).
    pub fn within(&self, i: usize, radius: T) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.distance(i, j) <= radius).collect()
    }
}

fn validate_points<T: Scalar>(points: &[Vec<T>]) -> Result<(usize, Vec<T>)> {
    let first = points.first().ok_or(Error::EmptyGround)?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::Validation("points must have at least one coordinate".into()));
    }
    let mut coords = Vec::with_capacity(points.len() * dim);
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { point: i, expected: dim, found: p.len() });
        }
        for (c, &x) in p.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteCoordinate { point: i, coord: c });
            }
            coords.push(x);
        }
    }
    Ok((dim, coords))
}

fn check_epsilon<T: Scalar>(epsilon: T) -> Result<()> {
    if epsilon < T::zero() || epsilon.is_nan() || epsilon.is_infinite() {
        return Err(Error::NegativeEpsilon(epsilon.as_f64()));
    }
    Ok(())
}

fn brute_neighbors<T: Scalar>(coords: &[T], dim: usize, norm: Norm, eps: T) -> Vec<Vec<usize>> {
    let n = coords.len() / dim;
    let pt = |i: usize| &coords[i * dim..(i + 1) * dim];
    let mut lists = vec![Vec::new(); n];
    for i in 0..n {
        lists[i].push(i);
        for j in (i + 1)..n {
            if norm.distance(pt(i), pt(j)) <= eps {
                lists[i].push(j);
                lists[j].push(i);
            }
        }
    }
    lists
}

/// Uniform grid bucketing with cells of side `eps`. Every closed ball of the
/// supported norms fits in the surrounding 3^d block of cells. Returns `None`
/// when cell indices would overflow, so the caller can fall back.
fn bucket_neighbors<T: Scalar>(coords: &[T], dim: usize, norm: Norm, eps: T) -> Option<Vec<Vec<usize>>> {
    let n = coords.len() / dim;
    let pt = |i: usize| &coords[i * dim..(i + 1) * dim];
    if eps == T::zero() {
        let mut groups: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
        for i in 0..n {
            let key = pt(i).iter().map(|x| (x.as_f64() + 0.0).to_bits()).collect();
            groups.entry(key).or_default().push(i);
        }
        let mut lists = vec![Vec::new(); n];
        for g in groups.values() {
            for &i in g {
                lists[i] = g.clone();
            }
        }
        return Some(lists);
    }
    let limit = 1e15;
    let mut cells: Vec<[i64; 3]> = Vec::with_capacity(n);
    for i in 0..n {
        let mut key = [0_i64; 3];
        for (c, &x) in pt(i).iter().enumerate() {
            let q = (x / eps).floor().as_f64();
            if !q.is_finite() || q.abs() > limit {
                return None;
            }
            key[c] = q as i64;
        }
        cells.push(key);
    }
    let mut buckets: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for (i, key) in cells.iter().enumerate() {
        buckets.entry(*key).or_default().push(i);
    }
    let span = |c: usize| if c < dim { -1..=1_i64 } else { 0..=0_i64 };
    let mut lists = vec![Vec::new(); n];
    for (i, key) in cells.iter().enumerate() {
        for dx in span(0) {
            for dy in span(1) {
                for dz in span(2) {
                    let probe = [key[0] + dx, key[1] + dy, key[2] + dz];
                    if let Some(b) = buckets.get(&probe) {
                        for &j in b {
                            if j == i || norm.distance(pt(i), pt(j)) <= eps {
                                lists[i].push(j);
                            }
                        }
                    }
                }
            }
        }
    }
    Some(lists)
}

/// Adds `level` equally spaced interior points on every segment joining two
/// points at distance at most `2 * epsilon` (pairs whose balls can share a
/// point). Duplicates of existing points are dropped. The original points keep
/// their indices; new points are appended.
pub fn refine_points<T: Scalar>(points: &[Vec<T>], norm: Norm, epsilon: T, level: usize) -> Vec<Vec<T>> {
    let mut out = points.to_vec();
    if level == 0 {
        return out;
    }
    let key = |p: &[T]| p.iter().map(|x| (x.as_f64() + 0.0).to_bits()).collect::<Vec<u64>>();
    let mut seen: std::collections::HashSet<Vec<u64>> = points.iter().map(|p| key(p)).collect();
    let two_eps = epsilon + epsilon;
    let denom = T::from_usize_lossy(level + 1);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let (a, b) = (&points[i], &points[j]);
            let d = norm.distance(a, b);
            if d == T::zero() || d > two_eps {
                continue;
            }
            for k in 1..=level {
                let s = T::from_usize_lossy(k) / denom;
                let p: Vec<T> = a.iter().zip(b).map(|(&x, &y)| x + s * (y - x)).collect();
                if seen.insert(key(&p)) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Values of a function on the ground set, extended reals allowed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Field<T>(pub Vec<T>);

impl<T: Scalar> Field<T> {
    pub fn constant(n: usize, value: T) -> Self {
        Field(vec![value; n])
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Field(self.0.iter().map(|&x| f(x)).collect())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    /// Indicator of the strict upper level set `{f > a}` as an index list.
    pub fn level_set_above(&self, a: T) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &x)| x > a).map(|(i, _)| i).collect()
    }
}

impl<T> From<Vec<T>> for Field<T> {
    fn from(v: Vec<T>) -> Self {
        Field(v)
    }
}

impl<T> Deref for Field<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> DerefMut for Field<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.0
    }
}

impl<T> Index<usize> for Field<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

fn ball_reduce<T: Scalar>(g: &GroundSet<T>, f: &[T], init: T, op: fn(T, T) -> T) -> Field<T> {
    assert_eq!(f.len(), g.len(), "field length must match ground set");
    let one = |i: usize| g.neighbors(i).iter().fold(init, |acc, &j| op(acc, f[j]));
    let out = if g.len() >= PAR_THRESHOLD {
        (0..g.len()).into_par_iter().map(one).collect()
    } else {
        (0..g.len()).map(one).collect()
    };
    Field(out)
}

/// `S_eps(f)(i) = max_{j in ball(i)} f(j)`.
pub fn sup_ball<T: Scalar>(g: &GroundSet<T>, f: &[T]) -> Field<T> {
    ball_reduce(g, f, T::neg_infinity(), emax)
}

/// `I_eps(f)(i) = min_{j in ball(i)} f(j)`.
pub fn inf_ball<T: Scalar>(g: &GroundSet<T>, f: &[T]) -> Field<T> {
    ball_reduce(g, f, T::infinity(), emin)
}

/// Index of the maximum of `f` over the ball of `i`, lowest index on ties.
#[inline]
pub fn argmax_ball<T: Scalar>(g: &GroundSet<T>, f: &[T], i: usize) -> usize {
    let nb = g.neighbors(i);
    let mut best = nb[0];
    for &j in &nb[1..] {
        if f[j] > f[best] {
            best = j;
        }
    }
    best
}

/// Index of the minimum of `f` over the ball of `i`, lowest index on ties.
#[inline]
pub fn argmin_ball<T: Scalar>(g: &GroundSet<T>, f: &[T], i: usize) -> usize {
    let nb = g.neighbors(i);
    let mut best = nb[0];
    for &j in &nb[1..] {
        if f[j] < f[best] {
            best = j;
        }
    }
    best
}

/// Set dilation `A^eps`: the union of the balls around members of `a`.
pub fn dilate<T: Scalar>(g: &GroundSet<T>, a: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; g.len()];
    for &i in a {
        for &j in g.neighbors(i) {
            mark[j] = true;
        }
    }
    mark.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect()
}

/// Windowed maximum over `[i - k, i + k]` (clipped to the array) using the
/// block prefix/suffix scheme: at most `3n` comparisons regardless of `k`.
pub fn sliding_max_1d<T: Scalar>(values: &[T], k: usize) -> Vec<T> {
    sliding_max_1d_counted(values, k).0
}

/// As [`sliding_max_1d`], also returning the number of `max` evaluations.
pub fn sliding_max_1d_counted<T: Scalar>(values: &[T], k: usize) -> (Vec<T>, usize) {
    let n = values.len();
    if n == 0 || k == 0 {
        return (values.to_vec(), 0);
    }
    let w = 2 * k + 1;
    let mut ops = 0_usize;
    let mut prefix = values.to_vec();
    let mut suffix = values.to_vec();
    for i in 1..n {
        if i % w != 0 {
            prefix[i] = emax(prefix[i - 1], values[i]);
            ops += 1;
        }
    }
    for i in (0..n.saturating_sub(1)).rev() {
        if (i + 1) % w != 0 {
            suffix[i] = emax(suffix[i + 1], values[i]);
            ops += 1;
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo = i.saturating_sub(k);
        let hi = (i + k).min(n - 1);
        let v = if lo / w == hi / w {
            // Same block: the window is a block prefix or ends at the array end.
            if lo % w == 0 {
                prefix[hi]
            } else {
                suffix[lo]
            }
        } else {
            ops += 1;
            emax(suffix[lo], prefix[hi])
        };
        out.push(v);
    }
    (out, ops)
}

/// Window half-width of a uniformly spaced, increasing 1-D ground set, or
/// `NonUniformGrid`.
pub fn uniform_window<T: Scalar>(g: &GroundSet<T>) -> Result<usize> {
    if g.dim() != 1 {
        return Err(Error::NonUniformGrid);
    }
    let n = g.len();
    if n < 2 {
        return Ok(0);
    }
    let h = g.point(1)[0] - g.point(0)[0];
    if h <= T::zero() {
        return Err(Error::NonUniformGrid);
    }
    let tol = h * T::lit(1e-9);
    for i in 1..n {
        let d = g.point(i)[0] - g.point(i - 1)[0];
        if (d - h).abs() > tol {
            return Err(Error::NonUniformGrid);
        }
    }
    // Read the half-width off the index so it agrees with the stored balls.
    let k = g.neighbors(0).len() - 1;
    for i in 0..n {
        let lo = i.saturating_sub(k);
        let hi = (i + k).min(n - 1);
        let nb = g.neighbors(i);
        if nb.first() != Some(&lo) || nb.last() != Some(&hi) || nb.len() != hi - lo + 1 {
            return Err(Error::NonUniformGrid);
        }
    }
    Ok(k)
}

/// `sup_ball` through the linear-time sliding window on uniform 1-D grids.
pub fn sup_ball_uniform_1d<T: Scalar>(g: &GroundSet<T>, f: &[T]) -> Result<Field<T>> {
    let k = uniform_window(g)?;
    Ok(Field(sliding_max_1d(f, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(xs: &[f64], eps: f64) -> GroundSet<f64> {
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        GroundSet::new(&pts, Norm::L2, eps).unwrap()
    }

    #[test]
    fn three_point_neighbors() {
        let g = line(&[0.0, 0.5, 1.0], 0.6);
        assert_eq!(g.neighbors(0), &[0, 1]);
        assert_eq!(g.neighbors(1), &[0, 1, 2]);
        assert_eq!(g.neighbors(2), &[1, 2]);
    }

    #[test]
    fn zero_epsilon_is_identity() {
        let g = line(&[0.0, 0.5, 1.0, 3.0], 0.0);
        for i in 0..g.len() {
            assert_eq!(g.neighbors(i), &[i]);
        }
        let f = vec![3.0, -1.0, f64::INFINITY, 0.0];
        assert_eq!(sup_ball(&g, &f).0, f);
        assert_eq!(inf_ball(&g, &f).0, f);
        assert_eq!(dilate(&g, &[1, 3]), vec![1, 3]);
    }

    #[test]
    fn linf_diagonal_adjacent() {
        let g = GroundSet::new(&[vec![0.0, 0.0], vec![1.0, 1.0]], Norm::Linf, 1.0).unwrap();
        assert!(g.are_neighbors(0, 1));
        let g2 = GroundSet::new(&[vec![0.0, 0.0], vec![1.0, 1.0]], Norm::L2, 1.0).unwrap();
        assert!(!g2.are_neighbors(0, 1));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            GroundSet::new(&[vec![f64::NAN]], Norm::L2, 1.0),
            Err(Error::NonFiniteCoordinate { point: 0, coord: 0 })
        ));
        assert!(matches!(GroundSet::new(&[vec![0.0]], Norm::L2, -1.0), Err(Error::NegativeEpsilon(_))));
        assert!(matches!(GroundSet::<f64>::new(&[], Norm::L2, 1.0), Err(Error::EmptyGround)));
    }

    #[test]
    fn ball_operators_on_three_points() {
        let g = line(&[0.0, 0.5, 1.0], 0.6);
        assert_eq!(sup_ball(&g, &[0.0, 1.0, 2.0]).0, vec![1.0, 2.0, 2.0]);
        assert_eq!(inf_ball(&g, &[0.0, 1.0, 2.0]).0, vec![0.0, 0.0, 1.0]);
        assert_eq!(sup_ball(&g, &[4.0, 4.0, 4.0]).0, vec![4.0; 3]);
        assert_eq!(dilate(&g, &[2]), vec![1, 2]);
        assert!(dilate(&g, &[]).is_empty());
    }

    #[test]
    fn infinities_propagate() {
        let g = line(&[0.0, 0.5, 1.0], 0.6);
        let f = [f64::NEG_INFINITY, 0.0, f64::INFINITY];
        assert_eq!(sup_ball(&g, &f).0, vec![0.0, f64::INFINITY, f64::INFINITY]);
        assert_eq!(inf_ball(&g, &f).0, vec![f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0]);
    }

    #[test]
    fn sliding_examples() {
        assert_eq!(sliding_max_1d(&[0.0, 1.0, 2.0], 1), vec![1.0, 2.0, 2.0]);
        assert_eq!(sliding_max_1d(&[3.0, 1.0, 2.0], 0), vec![3.0, 1.0, 2.0]);
    }

    #[test]
    fn sliding_matches_naive_window() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let v: Vec<f64> = (0..1000).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let k = 7;
        let naive: Vec<f64> = (0..v.len())
            .map(|i| {
                let lo = i.saturating_sub(k);
                let hi = (i + k).min(v.len() - 1);
                v[lo..=hi].iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        let (fast, ops) = sliding_max_1d_counted(&v, k);
        assert_eq!(fast, naive);
        assert!(ops <= 3 * v.len());
    }

    #[test]
    fn uniform_fast_path_matches_sup_ball() {
        let xs: Vec<f64> = (0..50).map(f64::from).collect();
        let g = line(&xs, 3.5);
        let f: Vec<f64> = xs.iter().map(|x| (x * 1.7).sin()).collect();
        assert_eq!(sup_ball_uniform_1d(&g, &f).unwrap(), sup_ball(&g, &f));
        let bad = line(&[0.0, 1.0, 3.0], 1.0);
        assert!(matches!(sup_ball_uniform_1d(&bad, &[0.0; 3]), Err(Error::NonUniformGrid)));
    }

    #[test]
    fn refinement_adds_midpoints_of_close_pairs() {
        let pts = refine_points(&[vec![0.0], vec![1.0]], Norm::L2, 0.6, 1);
        assert_eq!(pts, vec![vec![0.0], vec![1.0], vec![0.5]]);
        let far = refine_points(&[vec![0.0], vec![2.0]], Norm::L2, 0.6, 1);
        assert_eq!(far.len(), 2);
        let dup = refine_points(&[vec![0.0], vec![0.5], vec![1.0]], Norm::L2, 0.6, 1);
        assert_eq!(dup.len(), 5); // 0.25, 0.75 added; 0.5 already present
    }

    #[test]
    fn f32_ground_set() {
        let g = GroundSet::<f32>::new(&[vec![0.0], vec![0.5], vec![1.0]], Norm::L1, 0.6).unwrap();
        assert_eq!(sup_ball(&g, &[0.0f32, 1.0, 2.0]).0, vec![1.0f32, 2.0, 2.0]);
    }

    fn cloud() -> impl Strategy<Value = (Vec<Vec<f64>>, f64, usize)> {
        (1usize..=3, 1usize..40).prop_flat_map(|(d, n)| {
            (prop::collection::vec(prop::collection::vec(-2.0..2.0f64, d), n), 0.0..1.5f64, 0usize..3)
        })
    }

    fn norm_of(k: usize) -> Norm {
        [Norm::L1, Norm::L2, Norm::Linf][k]
    }

    proptest! {
        #[test]
        fn bucket_index_equals_brute((pts, eps, k) in cloud()) {
            let a = GroundSet::new(&pts, norm_of(k), eps).unwrap();
            let b = GroundSet::new_brute(&pts, norm_of(k), eps).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn neighbor_relation_symmetric_reflexive((pts, eps, k) in cloud()) {
            let g = GroundSet::new(&pts, norm_of(k), eps).unwrap();
            for i in 0..g.len() {
                prop_assert!(g.are_neighbors(i, i));
                for &j in g.neighbors(i) {
                    prop_assert!(g.are_neighbors(j, i));
                }
            }
        }

        #[test]
        fn sup_inf_duality_and_monotonicity(
            (pts, eps, k) in cloud(),
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let g = GroundSet::new(&pts, norm_of(k), eps).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let bump: Vec<f64> = f.iter().map(|x| x + rng.gen_range(0.0..1.0)).collect();
            let s = sup_ball(&g, &f);
            let neg: Vec<f64> = f.iter().map(|x| -x).collect();
            let i = inf_ball(&g, &f);
            prop_assert_eq!(i.0, sup_ball(&g, &neg).neg().0);
            let sb = sup_ball(&g, &bump);
            for x in 0..g.len() {
                prop_assert!(s[x] >= f[x]);
                prop_assert!(sb[x] >= s[x]);
            }
        }

        #[test]
        fn double_dilation_within_twice_radius((pts, eps, k) in cloud(), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let g = GroundSet::new(&pts, norm_of(k), eps).unwrap();
            let g2 = g.with_epsilon(2.0 * eps).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let twice = sup_ball(&g, &sup_ball(&g, &f));
            let wide = sup_ball(&g2, &f);
            for x in 0..g.len() {
                prop_assert!(twice[x] <= wide[x]);
            }
        }
    }

    #[test]
    fn double_dilation_exact_on_uniform_grid() {
        let xs: Vec<f64> = (0..60).map(f64::from).collect();
        let g = line(&xs, 2.0);
        let g2 = line(&xs, 4.0);
        let f: Vec<f64> = xs.iter().map(|x| (x * 0.37).cos() * x).collect();
        assert_eq!(sup_ball(&g, &sup_ball(&g, &f)), sup_ball(&g2, &f));
    }
}
