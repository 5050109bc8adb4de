//! Adaptive Gauss-Legendre quadrature in one and two dimensions.
//!
//! Rules are generated at runtime by Newton iteration on the Legendre
//! polynomials, so no node tables are transcribed. The adaptive driver is
//! globally greedy: it always splits the panel with the worst error
//! estimate, which handles integrable endpoint singularities (log and
//! log-squared) at the cost of a deeper panel tree near the singular set.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::fmath;
use crate::summation::Accumulator;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Generates the `n`-point rule; nodes converge to machine precision
    /// in a handful of Newton steps from the Chebyshev initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule order must be positive");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = fmath::cos(core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5));
            for _ in 0..60 {
                let (p, dp) = legendre_pair(n, x);
                let dx = p / dp;
                x -= dx;
                if fmath::abs(dx) <= 1e-16 * (1.0 + fmath::abs(x)) {
                    break;
                }
            }
            let (_, dp) = legendre_pair(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // The initial guess enumerates roots from the largest down.
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Single-panel integral of `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, f: &mut F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = Accumulator::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(mid + half * x));
        }
        half * acc.total()
    }
}

/// Value of `P_n` and its derivative at `x` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    debug_assert!(n >= 1);
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    // Interior roots keep |x| < 1, so the denominator never vanishes.
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Heap entry ordered by error estimate (worst first).
struct Panel1 {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel1 {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Panel1 {}

impl PartialOrd for Panel1 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel1 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive integral of `f` over `[a, b]` to absolute tolerance.
pub fn integrate_1d<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    tol_abs: f64,
    budget: usize,
) -> Result<f64> {
    integrate_1d_cuts(f, a, b, &[], tol_abs, budget)
}

/// Same as [`integrate_1d`] with forced initial cut points inside `(a, b)`.
pub fn integrate_1d_cuts<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    cuts: &[f64],
    tol_abs: f64,
    budget: usize,
) -> Result<f64> {
    if !(a < b) || !tol_abs.is_finite() || tol_abs <= 0.0 {
        return Err(Error::InvalidParameter { name: "tol_abs" });
    }
    let coarse = GaussLegendre::new(7);
    let fine = GaussLegendre::new(15);
    let mut evals = 0usize;
    let make = |lo: f64, hi: f64, f: &mut F, evals: &mut usize| -> Panel1 {
        let c = coarse.integrate(lo, hi, f);
        let v = fine.integrate(lo, hi, f);
        *evals += coarse.len() + fine.len();
        let err = fmath::abs(v - c);
        Panel1 { a: lo, b: hi, value: v, err: if err.is_finite() { err } else { f64::INFINITY } }
    };

    let mut edges: Vec<f64> = cuts.iter().copied().filter(|&c| c > a && c < b).collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    edges.insert(0, a);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    let mut err_sum = 0.0;
    for pair in edges.windows(2) {
        let p = make(pair[0], pair[1], f, &mut evals);
        err_sum += p.err;
        heap.push(p);
    }
    let mut done: Vec<Panel1> = Vec::new();
    let panel_cost = coarse.len() + fine.len();
    while err_sum > tol_abs {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        err_sum -= worst.err;
        let width_floor = 1e-14 * (1.0 + fmath::abs(worst.a) + fmath::abs(worst.b));
        if worst.err == 0.0 || worst.b - worst.a <= width_floor {
            // Roundoff-limited panel: accept its value as is.
            done.push(worst);
            continue;
        }
        if evals + 2 * panel_cost > budget {
            return Err(Error::QuadratureFailure {
                evals,
                achieved: err_sum + worst.err,
                requested: tol_abs,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = make(worst.a, mid, f, &mut evals);
        let right = make(mid, worst.b, f, &mut evals);
        err_sum += left.err + right.err;
        heap.push(left);
        heap.push(right);
    }
    done.extend(heap.into_vec());
    // Deterministic final reduction: sum panels in spatial order.
    done.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut acc = Accumulator::new();
    for p in &done {
        acc.add(p.value);
    }
    Ok(acc.total())
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if x0 < x1 && y0 < y1 && x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()
        {
            Ok(Self { x0, x1, y0, y1 })
        } else {
            Err(Error::InvalidParameter { name: "rect" })
        }
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }
}

struct Panel2 {
    rect: Rect,
    value: f64,
    err: f64,
}

impl PartialEq for Panel2 {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Panel2 {}

impl PartialOrd for Panel2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel2 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn tensor<F: FnMut(f64, f64) -> f64>(gl: &GaussLegendre, r: Rect, f: &mut F) -> f64 {
    let midx = 0.5 * (r.x0 + r.x1);
    let halfx = 0.5 * (r.x1 - r.x0);
    let midy = 0.5 * (r.y0 + r.y1);
    let halfy = 0.5 * (r.y1 - r.y0);
    let mut acc = Accumulator::new();
    for (&x, &wx) in gl.nodes.iter().zip(&gl.weights) {
        for (&y, &wy) in gl.nodes.iter().zip(&gl.weights) {
            acc.add(wx * wy * f(midx + halfx * x, midy + halfy * y));
        }
    }
    halfx * halfy * acc.total()
}

/// Globally adaptive 2D integral over `rect` to tolerance
/// `tol_abs + tol_rel * |integral|`, with forced initial cuts.
///
/// Panels compare a 4x4 and an 8x8 tensor Gauss rule and split along
/// their longer side. `cuts_x` and `cuts_y` seed the initial partition,
/// which keeps known discontinuity lines (truncation discs, the charge
/// axis) on panel boundaries.
pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(
    f: &mut F,
    rect: Rect,
    cuts_x: &[f64],
    cuts_y: &[f64],
    tol_rel: f64,
    tol_abs: f64,
    budget: usize,
) -> Result<f64> {
    if !(tol_rel >= 0.0) || !(tol_abs >= 0.0) || (tol_rel == 0.0 && tol_abs == 0.0) {
        return Err(Error::InvalidParameter { name: "tol" });
    }
    let coarse = GaussLegendre::new(4);
    let fine = GaussLegendre::new(8);
    let panel_cost = coarse.len() * coarse.len() + fine.len() * fine.len();
    let mut evals = 0usize;
    let make = |r: Rect, f: &mut F, evals: &mut usize| -> Panel2 {
        let c = tensor(&coarse, r, f);
        let v = tensor(&fine, r, f);
        *evals += panel_cost;
        let err = fmath::abs(v - c);
        Panel2 { rect: r, value: v, err: if err.is_finite() { err } else { f64::INFINITY } }
    };

    let mut xs: Vec<f64> = cuts_x.iter().copied().filter(|&c| c > rect.x0 && c < rect.x1).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.insert(0, rect.x0);
    xs.push(rect.x1);
    let mut ys: Vec<f64> = cuts_y.iter().copied().filter(|&c| c > rect.y0 && c < rect.y1).collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    ys.insert(0, rect.y0);
    ys.push(rect.y1);

    let mut heap = BinaryHeap::new();
    let mut err_sum = 0.0;
    let mut val_sum = 0.0;
    for xw in xs.windows(2) {
        for yw in ys.windows(2) {
            let p = make(Rect { x0: xw[0], x1: xw[1], y0: yw[0], y1: yw[1] }, f, &mut evals);
            err_sum += p.err;
            val_sum += p.value;
            heap.push(p);
        }
    }
    let mut done: Vec<Panel2> = Vec::new();
    loop {
        if err_sum <= tol_abs + tol_rel * fmath::abs(val_sum) {
            break;
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        err_sum -= worst.err;
        let r = worst.rect;
        let scale = 1.0 + fmath::abs(r.x0) + fmath::abs(r.x1) + fmath::abs(r.y0) + fmath::abs(r.y1);
        if worst.err == 0.0 || (r.x1 - r.x0) + (r.y1 - r.y0) <= 1e-13 * scale {
            done.push(worst);
            continue;
        }
        if evals + 2 * panel_cost > budget {
            return Err(Error::QuadratureFailure {
                evals,
                achieved: err_sum + worst.err,
                requested: tol_abs + tol_rel * fmath::abs(val_sum),
            });
        }
        val_sum -= worst.value;
        let (ra, rb) = if r.x1 - r.x0 >= r.y1 - r.y0 {
            let mid = 0.5 * (r.x0 + r.x1);
            (Rect { x1: mid, ..r }, Rect { x0: mid, ..r })
        } else {
            let mid = 0.5 * (r.y0 + r.y1);
            (Rect { y1: mid, ..r }, Rect { y0: mid, ..r })
        };
        let pa = make(ra, f, &mut evals);
        let pb = make(rb, f, &mut evals);
        err_sum += pa.err + pb.err;
        val_sum += pa.value + pb.value;
        heap.push(pa);
        heap.push(pb);
    }
    done.extend(heap.into_vec());
    done.sort_by(|p, q| {
        p.rect.x0.total_cmp(&q.rect.x0).then(p.rect.y0.total_cmp(&q.rect.y0))
    });
    let mut acc = Accumulator::new();
    for p in &done {
        acc.add(p.value);
    }
    Ok(acc.total())
}
