//! One-dimensional search helpers.

use crate::scalar::Scalar;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximizer of a unimodal (quasi-concave)
/// function on `[lo, hi]`. Returns `(argmax, max)`; the endpoints are always
/// considered, and on equal values the smaller abscissa wins.
pub fn golden_max<T: Scalar>(f: impl Fn(T) -> T, lo: T, hi: T, max_iter: usize) -> (T, T) {
    let r = T::lit(INV_PHI);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..max_iter {
        if b - a <= T::epsilon() * (T::one() + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.1 || (fx == best.1 && x < best.0) {
            best = (x, fx);
        }
    }
    best
}

pub fn golden_min<T: Scalar>(f: impl Fn(T) -> T, lo: T, hi: T, max_iter: usize) -> (T, T) {
    let (x, v) = golden_max(|x| -f(x), lo, hi, max_iter);
    (x, -v)
}

/// Largest `x` in `[lo, hi]` (up to bisection resolution) such that `pred`
/// holds, assuming `pred` holds on an initial segment `[lo, k)` only.
pub fn bisect_last_true<T: Scalar>(pred: impl Fn(T) -> bool, lo: T, hi: T, iters: usize) -> T {
    let (mut a, mut b) = (lo, hi);
    let two = T::lit(2.0);
    for _ in 0..iters {
        let m = (a + b) / two;
        if m <= a || m >= b {
            break;
        }
        if pred(m) {
            a = m;
        } else {
            b = m;
        }
    }
    b
}
