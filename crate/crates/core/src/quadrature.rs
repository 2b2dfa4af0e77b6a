//! Product integration for Abel-type kernels and adaptive Gauss-Kronrod.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::special::rgamma;

/// A kernel `K(s)`, `s > 0`, described by its first two primitives vanishing at 0:
/// `K1(s) = ∫_0^s K` and `K2(s) = ∫_0^s K1`.
pub trait AbelKernel: Sync {
    fn first_primitive(&self, s: f64) -> Result<f64>;
    fn second_primitive(&self, s: f64) -> Result<f64>;
}

/// `K(s) = s^{μ-1}/Γ(μ)`, the Riemann-Liouville kernel.
#[derive(Debug, Clone, Copy)]
pub struct PowerKernel {
    mu: f64,
    r1: f64,
    r2: f64,
}

impl PowerKernel {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return domain(format!("kernel order must be positive, got {mu}"));
        }
        Ok(Self { mu, r1: rgamma(mu + 1.0)?, r2: rgamma(mu + 2.0)? })
    }
}

impl AbelKernel for PowerKernel {
    fn first_primitive(&self, s: f64) -> Result<f64> {
        Ok(s.powf(self.mu) * self.r1)
    }

    fn second_primitive(&self, s: f64) -> Result<f64> {
        Ok(s.powf(self.mu + 1.0) * self.r2)
    }
}

/// Lower-triangular weight table of the product-integration rule.
///
/// For the transformed nodes `u_0 < … < u_N`, row `i` holds weights `w_ij`, `j ≤ i`, with
/// `Σ_j w_ij f(u_j) = ∫_{u_0}^{u_i} K(u_i - u) f̂(u) du` where `f̂` is the piecewise-linear
/// interpolant. The moments of each cell are exact.
#[derive(Debug, Clone)]
pub struct ProductRule {
    rows: Vec<Vec<f64>>,
}

impl ProductRule {
    pub fn new<K: AbelKernel>(u: &[f64], kernel: &K) -> Result<Self> {
        if u.len() < 2 {
            return domain("product rule needs at least two nodes");
        }
        if let Some(i) = u.windows(2).position(|w| !(w[1] > w[0])) {
            return domain(format!("transformed grid is not increasing at node {}", i + 1));
        }
        let n = u.len();
        let h0 = u[1] - u[0];
        let uniform = u.windows(2).all(|w| ((w[1] - w[0]) - h0).abs() <= 1e-12 * h0);
        let rows = if uniform {
            // Differences u_i - u_j only depend on i - j.
            let mut p1 = Vec::with_capacity(n);
            let mut p2 = Vec::with_capacity(n);
            for k in 0..n {
                let s = h0 * k as f64;
                p1.push(kernel.first_primitive(s)?);
                p2.push(kernel.second_primitive(s)?);
            }
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut row = vec![0.0; i + 1];
                    for j in 0..i {
                        let (a, b) = (i - j, i - j - 1);
                        accumulate(&mut row, j, h0, p1[a], p1[b], p2[a], p2[b]);
                    }
                    row
                })
                .collect()
        } else {
            (0..n)
                .into_par_iter()
                .map(|i| -> Result<Vec<f64>> {
                    let mut p1 = Vec::with_capacity(i + 1);
                    let mut p2 = Vec::with_capacity(i + 1);
                    for j in 0..=i {
                        let s = u[i] - u[j];
                        p1.push(kernel.first_primitive(s)?);
                        p2.push(kernel.second_primitive(s)?);
                    }
                    let mut row = vec![0.0; i + 1];
                    for j in 0..i {
                        let h = u[j + 1] - u[j];
                        accumulate(&mut row, j, h, p1[j], p1[j + 1], p2[j], p2[j + 1]);
                    }
                    Ok(row)
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Self { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// `Σ_j w_ij f_j` summed in ascending `j`.
    pub fn apply_at(&self, i: usize, f: &[f64]) -> f64 {
        self.rows[i].iter().zip(f).map(|(w, v)| w * v).sum()
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.rows.len(), "value count must match the rule");
        (0..self.rows.len()).into_par_iter().map(|i| self.apply_at(i, f)).collect()
    }
}

// Cell [u_j, u_j + h] seen from target u_i, with A = u_i - u_j and B = A - h.
#[inline]
fn accumulate(row: &mut [f64], j: usize, h: f64, k1a: f64, k1b: f64, k2a: f64, k2b: f64) {
    let m0 = k1a - k1b;
    let m1 = k2a - k2b - h * k1b;
    row[j] += m0 - m1 / h;
    row[j + 1] += m1 / h;
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let x = r * XGK[k];
        let s = f(c - x) + f(c + x);
        kron += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    (kron * r, ((kron - gauss) * r).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive G7-K15 quadrature of `f` over `[a, b]`.
///
/// Bisects the segment with the largest error estimate until the summed estimate is
/// below `tol` or `max_segments` is reached (an accuracy error).
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64, max_segments: usize) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return domain(format!("bad integration interval [{a}, {b}]"));
    }
    if !(tol > 0.0) {
        return domain("quadrature tolerance must be positive");
    }
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let (value, error) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total_err = error;
    let mut evaluations = 15;
    while total_err > tol {
        if heap.len() >= max_segments {
            let value: f64 = heap.iter().map(|s| s.value).sum();
            return Err(Error::Accuracy(format!(
                "adaptive quadrature used {max_segments} segments; error estimate {total_err:e} > {tol:e} (value {value})"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::Accuracy(format!("segment [{}, {}] cannot be bisected further", worst.a, worst.b)));
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
        // Resum rather than update to avoid drift.
        total_err = heap.iter().map(|s| s.error).sum();
    }
    let mut segs = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segs.iter().map(|s| s.value).sum();
    Ok(Integral { value, error: total_err, evaluations })
}
