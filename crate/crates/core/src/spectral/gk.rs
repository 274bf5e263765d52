#![allow(clippy::excessive_precision)]

//! Vector-valued adaptive Gauss-Kronrod (21-point) integration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208931302269,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Gauss weights for the odd-indexed Kronrod nodes `XGK[1], XGK[3], ..`.
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-13, rel: 1e-11, max_intervals: 20_000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub intervals: usize,
}

/// How a piece of the real line is parametrised on `[a, b]`.
#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// `omega = start + scale * t / (1 - t)` for `t` in `[0, 1)`.
    Tail { start: f64, scale: f64 },
}

impl Map {
    fn apply(self, t: f64) -> (f64, f64) {
        match self {
            Map::Identity => (t, 1.0),
            Map::Tail { start, scale } => {
                let s = 1.0 - t;
                (start + scale * t / s, scale / (s * s))
            }
        }
    }
}

struct Piece<const N: usize> {
    a: f64,
    b: f64,
    map: Map,
    value: [f64; N],
    error: [f64; N],
    priority: f64,
}

impl<const N: usize> PartialEq for Piece<N> {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}
impl<const N: usize> Eq for Piece<N> {}
impl<const N: usize> PartialOrd for Piece<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Piece<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority)
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err.abs();
    if resasc != 0.0 && e != 0.0 {
        e = resasc * (200.0 * e / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * resabs);
    }
    e
}

fn kronrod<F, const N: usize>(f: &F, a: f64, b: f64, map: Map) -> ([f64; N], [f64; N])
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |t: f64| {
        let (w, jac) = map.apply(t);
        let mut v = f(w);
        for x in v.iter_mut() {
            *x *= jac;
        }
        v
    };
    let fc = eval(center);
    let mut fv1 = [[0.0; N]; 10];
    let mut fv2 = [[0.0; N]; 10];
    let mut res_k = [0.0; N];
    let mut res_g = [0.0; N];
    let mut res_abs = [0.0; N];
    for c in 0..N {
        res_k[c] = fc[c] * WGK[10];
        res_abs[c] = fc[c].abs() * WGK[10];
    }
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx);
        let f2 = eval(center + dx);
        for c in 0..N {
            res_k[c] += WGK[j] * (f1[c] + f2[c]);
            res_abs[c] += WGK[j] * (f1[c].abs() + f2[c].abs());
            if j % 2 == 1 {
                res_g[c] += WG[j / 2] * (f1[c] + f2[c]);
            }
        }
        fv1[j] = f1;
        fv2[j] = f2;
    }
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for c in 0..N {
        let mean = 0.5 * res_k[c];
        let mut asc = WGK[10] * (fc[c] - mean).abs();
        for j in 0..10 {
            asc += WGK[j] * ((fv1[j][c] - mean).abs() + (fv2[j][c] - mean).abs());
        }
        let h = half.abs();
        value[c] = res_k[c] * half;
        error[c] = rescale_error((res_k[c] - res_g[c]) * half, res_abs[c] * h, asc * h);
    }
    (value, error)
}

/// Integrates `f` over `[breakpoints[0], breakpoints.last()]` and, when
/// `tail` is set, over `[breakpoints.last(), inf)` with length scale `tail`.
pub fn integrate<F, const N: usize>(f: F, breakpoints: &[f64], tail: Option<f64>, tol: Tolerance) -> Result<Estimate<N>>
where
    F: Fn(f64) -> [f64; N],
{
    let mut segments: Vec<(f64, f64, Map)> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1], Map::Identity))
        .collect();
    if let (Some(scale), Some(&start)) = (tail, breakpoints.last()) {
        segments.push((0.0, 1.0, Map::Tail { start, scale }));
    }

    let initial: Vec<([f64; N], [f64; N])> = segments.iter().map(|&(a, b, m)| kronrod(&f, a, b, m)).collect();
    let mut norm = [0.0; N];
    for (v, _) in &initial {
        for c in 0..N {
            norm[c] += v[c];
        }
    }
    let target = |total: &[f64; N]| -> [f64; N] {
        let mut t = [0.0; N];
        for c in 0..N {
            t[c] = tol.abs.max(tol.rel * total[c].abs());
        }
        t
    };
    let mut goal = target(&norm);
    let priority = |err: &[f64; N], goal: &[f64; N]| (0..N).map(|c| err[c] / goal[c]).fold(0.0, f64::max);

    let mut heap = BinaryHeap::new();
    for ((a, b, map), (value, error)) in segments.into_iter().zip(initial) {
        heap.push(Piece { a, b, map, priority: priority(&error, &goal), value, error });
    }

    loop {
        let mut total = [0.0; N];
        let mut err = [0.0; N];
        for piece in heap.iter() {
            for c in 0..N {
                total[c] += piece.value[c];
                err[c] += piece.error[c];
            }
        }
        goal = target(&total);
        if let Some(c) = (0..N).find(|&c| !(total[c].is_finite() && err[c].is_finite())) {
            return Err(Error::QuadratureNonConvergence { achieved: err[c].abs(), requested: tol.abs });
        }
        if (0..N).all(|c| err[c] <= goal[c]) {
            return Ok(Estimate { value: total, error: err, intervals: heap.len() });
        }
        if heap.len() >= tol.max_intervals {
            let worst = (0..N).map(|c| err[c] / goal[c]).fold(0.0, f64::max);
            let c = (0..N).find(|&c| err[c] / goal[c] == worst).unwrap_or(0);
            return Err(Error::QuadratureNonConvergence { achieved: err[c], requested: goal[c] });
        }
        let Some(piece) = heap.pop() else { unreachable!() };
        let mid = 0.5 * (piece.a + piece.b);
        if !(mid > piece.a && mid < piece.b) {
            // interval exhausted at machine precision; keep it frozen
            let mut frozen = piece;
            frozen.priority = -1.0;
            heap.push(frozen);
            if heap.iter().all(|p| p.priority < 0.0) {
                let c = (0..N).max_by(|&x, &y| (err[x] / goal[x]).total_cmp(&(err[y] / goal[y]))).unwrap_or(0);
                return Err(Error::QuadratureNonConvergence { achieved: err[c], requested: goal[c] });
            }
            continue;
        }
        for (a, b) in [(piece.a, mid), (mid, piece.b)] {
            let (value, error) = kronrod(&f, a, b, piece.map);
            heap.push(Piece { a, b, map: piece.map, priority: priority(&error, &goal), value, error });
        }
    }
}
