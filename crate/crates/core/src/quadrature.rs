//! Gauss–Legendre quadrature with order doubling.

use std::f64::consts::PI;
use std::sync::OnceLock;

const ORDERS: [usize; 6] = [16, 32, 64, 128, 256, 512];
const TOL: f64 = 1e-13;
const MAX_SPLIT_DEPTH: u32 = 12;

/// Nodes and weights on [-1, 1].
fn rule(order: usize) -> &'static [(f64, f64)] {
    static TABLES: OnceLock<Vec<Vec<(f64, f64)>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| ORDERS.iter().map(|&n| legendre_rule(n)).collect());
    let idx = ORDERS.iter().position(|&n| n == order).expect("tabulated order");
    &tables[idx]
}

fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, order: usize) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    half * rule(order)
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}

/// Integral of `f` over `[a, b]`, doubling the order until successive
/// estimates agree to `1e-13`; bisects the interval when the largest order
/// is not enough.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    integrate_rec(&f, a, b, 0)
}

fn integrate_rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> f64 {
    let mut prev = fixed(f, a, b, ORDERS[0]);
    for &order in &ORDERS[1..] {
        let cur = fixed(f, a, b, order);
        if (cur - prev).abs() < TOL * cur.abs().max(1.0) {
            return cur;
        }
        prev = cur;
    }
    if depth >= MAX_SPLIT_DEPTH {
        return prev;
    }
    let mid = 0.5 * (a + b);
    integrate_rec(f, a, mid, depth + 1) + integrate_rec(f, mid, b, depth + 1)
}
