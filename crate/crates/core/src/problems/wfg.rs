//! WFG1-WFG9 with two objectives, `k` position-related and `n - k`
//! distance-related parameters.
//!
//! Variable `i` (1-based) ranges over `[0, 2i]`. Each problem normalizes the
//! variables, applies its transformation chain and maps the reduced position
//! `x1` and distance `x2` to `f1 = x2 + 2*h1(x1)`, `f2 = x2 + 4*h2(x1)`.

use std::f64::consts::{FRAC_PI_2, PI};

use super::front;
use crate::domain::{Bounds, ObjectiveVector};

pub(super) fn bounds(n: usize) -> Bounds {
    let upper = (1..=n).map(|i| 2.0 * i as f64).collect();
    Bounds::new(vec![0.0; n], upper).expect("valid WFG bounds")
}

/// One unit beyond the front's nadir point `(2, 4)`.
pub(super) fn metric_reference() -> Vec<f64> {
    vec![3.0, 5.0]
}

pub(super) fn evaluate(index: u8, z: &[f64], k: usize) -> ObjectiveVector {
    let y: Vec<f64> = z
        .iter()
        .enumerate()
        .map(|(i, &v)| v / (2.0 * (i + 1) as f64))
        .collect();
    evaluate_unit(index, y, k)
}

fn evaluate_unit(index: u8, y: Vec<f64>, k: usize) -> ObjectiveVector {
    let n = y.len();
    let (position, distance) = match index {
        1 => wfg1(y, k),
        2 | 3 => wfg2_3(y, k),
        4 => {
            let y = map(&y, |v| s_multi(v, 30.0, 10.0, 0.35));
            sum_reduce(&y, k)
        }
        5 => {
            let y = map(&y, |v| s_decept(v, 0.35, 0.001, 0.05));
            sum_reduce(&y, k)
        }
        6 => {
            let y = linear_distance(y, k);
            nonsep_reduce(&y, k)
        }
        7 => {
            let mut t = y.clone();
            for i in 0..k {
                t[i] = b_param(y[i], mean(&y[i + 1..]), 0.98 / 49.98, 0.02, 50.0);
            }
            let t = linear_distance(t, k);
            sum_reduce(&t, k)
        }
        8 => {
            let mut t = y.clone();
            for i in k..n {
                t[i] = b_param(y[i], mean(&y[..i]), 0.98 / 49.98, 0.02, 50.0);
            }
            let t = linear_distance(t, k);
            sum_reduce(&t, k)
        }
        9 => {
            let mut t = y.clone();
            for i in 0..n - 1 {
                t[i] = b_param(y[i], mean(&y[i + 1..]), 0.98 / 49.98, 0.02, 50.0);
            }
            for (i, v) in t.iter_mut().enumerate() {
                *v = if i < k {
                    s_decept(*v, 0.35, 0.001, 0.05)
                } else {
                    s_multi(*v, 30.0, 95.0, 0.35)
                };
            }
            nonsep_reduce(&t, k)
        }
        _ => unreachable!("WFG index checked at construction"),
    };
    let h = shape(index, position);
    vec![distance + 2.0 * h[0], distance + 4.0 * h[1]]
}

pub(super) fn front(index: u8, resolution: usize) -> Vec<ObjectiveVector> {
    front::filtered_curve(resolution, |t| {
        let h = shape(index, t);
        vec![2.0 * h[0], 4.0 * h[1]]
    })
}

fn shape(index: u8, x: f64) -> [f64; 2] {
    match index {
        1 => {
            let mixed = 1.0 - x - (10.0 * PI * x + FRAC_PI_2).cos() / (10.0 * PI);
            [1.0 - (FRAC_PI_2 * x).cos(), mixed]
        }
        2 => {
            let c = (5.0 * PI * x).cos();
            [1.0 - (FRAC_PI_2 * x).cos(), 1.0 - x * c * c]
        }
        3 => [x, 1.0 - x],
        _ => [(FRAC_PI_2 * x).sin(), (FRAC_PI_2 * x).cos()],
    }
}

fn wfg1(y: Vec<f64>, k: usize) -> (f64, f64) {
    let mut y = linear_distance(y, k);
    for v in &mut y[k..] {
        *v = b_flat(*v, 0.8, 0.75, 0.85);
    }
    let y = map(&y, |v| v.powf(0.02));
    let weights: Vec<f64> = (1..=y.len()).map(|i| 2.0 * i as f64).collect();
    (
        weighted_sum(&y[..k], &weights[..k]),
        weighted_sum(&y[k..], &weights[k..]),
    )
}

fn wfg2_3(y: Vec<f64>, k: usize) -> (f64, f64) {
    let y = linear_distance(y, k);
    let paired: Vec<f64> = y[k..].chunks(2).map(|pair| r_nonsep(pair, 2)).collect();
    (mean(&y[..k]), mean(&paired))
}

fn linear_distance(mut y: Vec<f64>, k: usize) -> Vec<f64> {
    for v in &mut y[k..] {
        *v = s_linear(*v, 0.35);
    }
    y
}

fn sum_reduce(y: &[f64], k: usize) -> (f64, f64) {
    (mean(&y[..k]), mean(&y[k..]))
}

fn nonsep_reduce(y: &[f64], k: usize) -> (f64, f64) {
    (r_nonsep(&y[..k], k), r_nonsep(&y[k..], y.len() - k))
}

fn map(y: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
    y.iter().map(|&v| f(v)).collect()
}

fn unit(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

fn mean(y: &[f64]) -> f64 {
    unit(y.iter().sum::<f64>() / y.len() as f64)
}

fn weighted_sum(y: &[f64], w: &[f64]) -> f64 {
    unit(y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / w.iter().sum::<f64>())
}

fn s_linear(y: f64, a: f64) -> f64 {
    unit((y - a).abs() / ((a - y).floor() + a).abs())
}

fn s_decept(y: f64, a: f64, b: f64, c: f64) -> f64 {
    let t1 = (y - a + b).floor() * (1.0 - c + (a - b) / b) / (a - b);
    let t2 = (a + b - y).floor() * (1.0 - c + (1.0 - a - b) / b) / (1.0 - a - b);
    unit(1.0 + ((y - a).abs() - b) * (t1 + t2 + 1.0 / b))
}

fn s_multi(y: f64, a: f64, b: f64, c: f64) -> f64 {
    let ratio = (y - c).abs() / (2.0 * ((c - y).floor() + c));
    unit((1.0 + ((4.0 * a + 2.0) * PI * (0.5 - ratio)).cos() + 4.0 * b * ratio * ratio) / (b + 2.0))
}

fn b_flat(y: f64, a: f64, b: f64, c: f64) -> f64 {
    // Piecewise form of the flat-region bias; exact at y = 0.
    if y < b {
        unit(a * y / b)
    } else if y > c {
        unit(a + (1.0 - a) * (y - c) / (1.0 - c))
    } else {
        a
    }
}

fn b_param(y: f64, u: f64, a: f64, b: f64, c: f64) -> f64 {
    let exponent = b + (c - b) * (a - (1.0 - 2.0 * u) * ((0.5 - u).floor() + a).abs());
    unit(y.powf(exponent))
}

fn r_nonsep(y: &[f64], a: usize) -> f64 {
    let len = y.len();
    let mut numerator = 0.0;
    for j in 0..len {
        numerator += y[j];
        for step in 0..a.saturating_sub(1) {
            numerator += (y[j] - y[(j + step + 1) % len]).abs();
        }
    }
    let half = a.div_ceil(2) as f64;
    let af = a as f64;
    unit(numerator / ((len as f64 / af) * half * (1.0 + 2.0 * af - 2.0 * half)))
}
