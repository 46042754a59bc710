//! GLT1-GLT6: problems with complicated Pareto sets (nonlinear variable
//! linkage through `sin(2*pi*x1 + i*pi/n)`) and complex Pareto fronts
//! (disconnected, convex, strongly bent).
//!
//! The first one (two for GLT5/GLT6) variables lie in `[0, 1]`, the rest in
//! `[-1, 1]`. The linkage penalty `g` is zero exactly on the Pareto set.

use std::f64::consts::{FRAC_PI_2, PI};

use super::front;
use crate::domain::{Bounds, ObjectiveVector};

pub(super) fn objectives(index: u8) -> usize {
    if index >= 5 {
        3
    } else {
        2
    }
}

fn position_params(index: u8) -> usize {
    objectives(index) - 1
}

pub(super) fn bounds(index: u8, n: usize) -> Bounds {
    let p = position_params(index);
    let lower = (0..n).map(|i| if i < p { 0.0 } else { -1.0 }).collect();
    Bounds::new(lower, vec![1.0; n]).expect("valid GLT bounds")
}

pub(super) fn metric_reference(index: u8) -> Vec<f64> {
    match index {
        1 | 3 => vec![2.0, 2.0],
        2 => vec![2.0, 11.0],
        4 => vec![2.0, 3.0],
        _ => vec![2.0, 2.0, 2.0],
    }
}

fn linkage(index: u8, x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let p = position_params(index);
    x.iter()
        .enumerate()
        .skip(p)
        .map(|(i, &xi)| {
            // Variables are numbered from 1 in the linkage term.
            let d = xi - (2.0 * PI * x[0] + (i + 1) as f64 * PI / n).sin();
            d * d
        })
        .sum()
}

/// Objective values on the Pareto set (`g = 0`) as a function of the
/// position variables.
fn shape(index: u8, x1: f64, x2: f64) -> ObjectiveVector {
    match index {
        1 => vec![x1, 2.0 - x1 - (2.0 * PI * x1).cos().signum_or_zero()],
        2 => vec![
            1.0 - (FRAC_PI_2 * x1).cos(),
            10.0 - 10.0 * (FRAC_PI_2 * x1).sin(),
        ],
        3 => {
            let f2 = if x1 <= 0.05 {
                1.0 - 19.0 * x1
            } else {
                1.0 / 19.0 - x1 / 19.0
            };
            vec![x1, f2]
        }
        4 => {
            let s = x1.sqrt();
            let c = (3.0 * PI * s).cos();
            vec![x1, 2.0 - 2.0 * s * c * c]
        }
        5 | 6 => {
            let a = 1.0 - (FRAC_PI_2 * x1).cos();
            let f1 = a * (1.0 - (FRAC_PI_2 * x2).cos());
            let f2 = a * (1.0 - (FRAC_PI_2 * x2).sin());
            let f3 = if index == 5 {
                1.0 - (FRAC_PI_2 * x1).sin()
            } else {
                2.0 - (FRAC_PI_2 * x1).sin() - (4.0 * PI * x1).cos().signum_or_zero()
            };
            vec![f1, f2, f3]
        }
        _ => unreachable!("GLT index checked at construction"),
    }
}

pub(super) fn evaluate(index: u8, x: &[f64]) -> ObjectiveVector {
    let scale = 1.0 + linkage(index, x);
    let x2 = if position_params(index) > 1 {
        x[1]
    } else {
        0.0
    };
    shape(index, x[0], x2)
        .into_iter()
        .map(|v| scale * v)
        .collect()
}

pub(super) fn front(index: u8, resolution: usize) -> Vec<ObjectiveVector> {
    if objectives(index) == 2 {
        front::filtered_curve(resolution, |t| shape(index, t, 0.0))
    } else {
        front::filtered_surface(resolution, |s, t| shape(index, s, t))
    }
}

trait SignumOrZero {
    fn signum_or_zero(self) -> f64;
}

impl SignumOrZero for f64 {
    /// The mathematical sign: -1, 0 or 1.
    fn signum_or_zero(self) -> f64 {
        if self > 0.0 {
            1.0
        } else if self < 0.0 {
            -1.0
        } else {
            0.0
        }
    }
}
