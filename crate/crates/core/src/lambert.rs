//! The lower real branch W₋₁ of the Lambert W function.
//!
//! For `x ∈ [-1/e, 0)` the equation `w e^w = x` has a solution `w <= -1`;
//! this module returns that one.

use crate::error::{domain, Result};
use std::f64::consts::E;

/// `-1/e`, the branch point.
pub const BRANCH_POINT: f64 = -0.367_879_441_171_442_33;

/// Depth of the nested-logarithm initializer.
pub const CONTINUED_FRACTION_DEPTH: usize = 8;

/// Below this argument the branch-point series gives the initial guess.
const SERIES_SWITCH: f64 = -0.27;

const MAX_HALLEY: usize = 10;

fn check_arg(func: &'static str, x: f64) -> Result<()> {
    if x.is_nan() {
        return Err(domain(func, "argument is NaN"));
    }
    if x < BRANCH_POINT {
        return Err(domain(func, format!("argument {x} is below -1/e")));
    }
    if x >= 0.0 {
        return Err(domain(func, format!("argument {x} must be negative")));
    }
    Ok(())
}

/// W₋₁(x) for `x ∈ [-1/e, 0)`.
pub fn w_m1(x: f64) -> Result<f64> {
    check_arg("w_m1", x)?;
    Ok(w_m1_unchecked(x))
}

pub(crate) fn w_m1_unchecked(x: f64) -> f64 {
    if x == BRANCH_POINT {
        return -1.0;
    }
    let mut w = if x < SERIES_SWITCH {
        branch_point_guess(x)
    } else {
        continued_fraction_guess(x, CONTINUED_FRACTION_DEPTH)
    };
    for _ in 0..MAX_HALLEY {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 || f == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        if !step.is_finite() {
            break;
        }
        w -= step;
        if step.abs() < 1e-15 * w.abs() {
            break;
        }
    }
    w.min(-1.0)
}

/// The nested logarithm `ln(x / ln(x / ln(x / …)))` truncated after `depth`
/// levels with `ln(-x)` innermost.
///
/// Each level is the fixed-point map `w ↦ ln(x / w)`, written as
/// `ln(-x) - ln(-w)` so that every intermediate stays real.
pub fn continued_fraction_guess(x: f64, depth: usize) -> f64 {
    let lx = (-x).ln();
    let mut w = lx;
    for _ in 0..depth {
        w = lx - (-w).ln();
    }
    w
}

/// Series of W₋₁ about the branch point in `p = √(2(1 + e x))`.
fn branch_point_guess(x: f64) -> f64 {
    let p = (2.0 * (1.0 + E * x)).max(0.0).sqrt();
    -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p
}

/// `W₋₁(x) / ln(-x)`, which tends to 1 as `x → 0⁻`.
pub fn w_m1_log_ratio(x: f64) -> Result<f64> {
    check_arg("w_m1_log_ratio", x)?;
    Ok(w_m1_unchecked(x) / (-x).ln())
}
