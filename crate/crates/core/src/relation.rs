//! The scalar function `f(x) = x R_D(1, 1, x²) / 3` and its inverses.
//!
//! `f` equals half the second derivative of `arccos(x)²`, which gives the
//! closed forms
//!
//! ```text
//! x < 1:  f(x) = 1/(1 − x²) − x arccos(x) / (1 − x²)^{3/2}
//! x > 1:  f(x) = x arctanh(√(1 − 1/x²)) / (x² − 1)^{3/2} − 1/(x² − 1)
//! ```
//!
//! `f` decreases strictly from `f(0⁺) = 1` through `f(1) = 1/3` to `f(∞) = 0`.
//! On the axially symmetric line of the ACG distribution the distinct
//! second-moment eigenvalue is `a = f(β^{3/4})`, see [`crate::acg::axial_forward`].

use crate::error::{domain, Result};
use crate::lambert;
use std::f64::consts::{E, PI};

/// Half-width of the window around `x = 1` where the Taylor series replaces
/// the closed forms.
pub const NEAR_ONE: f64 = 0.05;

/// Taylor coefficients of `f(1 − h)` in powers of `h`.
const TAYLOR_AT_ONE: [f64; 13] = [
    1.0 / 3.0,
    4.0 / 15.0,
    6.0 / 35.0,
    32.0 / 315.0,
    40.0 / 693.0,
    32.0 / 1001.0,
    112.0 / 6435.0,
    1024.0 / 109_395.0,
    1152.0 / 230_945.0,
    2560.0 / 969_969.0,
    2816.0 / 2_028_117.0,
    12288.0 / 16_900_975.0,
    13312.0 / 35_102_025.0,
];

fn check_finite(func: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(domain(func, format!("argument must be finite, got {v}")))
    }
}

/// `x R_D(1, 1, x²) / 3` for `x > 0`, from the closed forms.
pub fn f_axial(x: f64) -> Result<f64> {
    check_finite("f_axial", x)?;
    if x <= 0.0 {
        return Err(domain("f_axial", format!("x must be > 0, got {x}")));
    }
    Ok(f_axial_unchecked(x))
}

pub(crate) fn f_axial_unchecked(x: f64) -> f64 {
    let h = 1.0 - x;
    if h.abs() < NEAR_ONE {
        return TAYLOR_AT_ONE.iter().rev().fold(0.0, |acc, &c| acc * h + c);
    }
    if x < 1.0 {
        let s = (1.0 - x) * (1.0 + x);
        1.0 / s - x * x.acos() / (s * s.sqrt())
    } else {
        // arctanh(√(1 − 1/x²)) = arccosh(x); the latter keeps full precision
        // once 1 − 1/x² rounds to one.
        let s = (x - 1.0) * (x + 1.0);
        x * x.acosh() / (s * s.sqrt()) - 1.0 / s
    }
}

/// `f(x)` straight from the closed forms, without the series window.
///
/// Loses accuracy only through cancellation within about `1e-3` of `x = 1`.
/// `arctanh(u)` with `u = √(1 − 1/x²)` is evaluated as `ln(x (1 + u))`,
/// which is the same number (`1 − u = 1/(x²(1 + u))`) but does not round
/// `u` against one for large `x`.
pub fn f_closed_form(x: f64) -> Result<f64> {
    check_finite("f_closed_form", x)?;
    if x <= 0.0 {
        return Err(domain("f_closed_form", format!("x must be > 0, got {x}")));
    }
    Ok(if x < 1.0 {
        let s = (1.0 - x) * (1.0 + x);
        1.0 / s - x * x.acos() / (s * s.sqrt())
    } else if x > 1.0 {
        let s = (x - 1.0) * (x + 1.0);
        let u = (s.sqrt() / x).min(1.0);
        let atanh_u = (x * (1.0 + u)).ln();
        x * atanh_u / (s * s.sqrt()) - 1.0 / s
    } else {
        1.0 / 3.0
    })
}

/// `(f(1 − h) − 1/3)/h` from the Taylor series, for `|h| < NEAR_ONE`.
pub(crate) fn f_axial_slope_at_one(h: f64) -> f64 {
    TAYLOR_AT_ONE[1..]
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * h + c)
}

/// Degree-four Taylor polynomial of `f` at zero,
/// `1 − πx/2 + 2x² − 3πx³/4 + 8x⁴/3`, for `x ∈ [0, 0.1]`.
pub fn f_axial_series0(x: f64) -> Result<f64> {
    if !(0.0..=0.1).contains(&x) {
        return Err(domain(
            "f_axial_series0",
            format!("x must lie in [0, 0.1], got {x}"),
        ));
    }
    Ok(1.0 + x * (-PI / 2.0 + x * (2.0 + x * (-3.0 * PI / 4.0 + x * (8.0 / 3.0)))))
}

/// Upper end of the domain of [`inv_asym_zero`], `2e⁻³`.
pub fn asym_zero_limit() -> f64 {
    2.0 * (-3f64).exp()
}

/// `W₋₁(−e²a/2)` clamped onto the branch domain for `a` up to `2e⁻³`.
pub(crate) fn w_m1_of_scaled(a: f64) -> f64 {
    let arg = (-E * E * a / 2.0).max(lambert::BRANCH_POINT);
    lambert::w_m1_unchecked(arg)
}

pub(crate) fn check_asym_zero(func: &'static str, a: f64) -> Result<()> {
    check_finite(func, a)?;
    if a <= 0.0 {
        return Err(domain(func, format!("a must be > 0, got {a}")));
    }
    // allow one ulp of slack so that 2e^-3 itself is accepted
    if a > asym_zero_limit() * (1.0 + f64::EPSILON) {
        return Err(domain(
            func,
            format!("a must be <= 2e^-3 so that -e^2 a/2 >= -1/e, got {a}"),
        ));
    }
    Ok(())
}

/// Large root of `a = (ln 2x − 1)/x²`,
/// `x = (e/2) exp(−W₋₁(−e²a/2)/2)`, valid for `0 < a <= 2e⁻³`.
pub fn inv_asym_zero(a: f64) -> Result<f64> {
    check_asym_zero("inv_asym_zero", a)?;
    let w = w_m1_of_scaled(a);
    Ok(0.5 * E * (-0.5 * w).exp())
}

/// First-order inverse near `a = 1`: `x = 2(1 − a)/π`.
pub fn inv_first_order_one(a: f64) -> Result<f64> {
    check_finite("inv_first_order_one", a)?;
    if a <= 0.0 || a > 1.0 {
        return Err(domain(
            "inv_first_order_one",
            format!("a must lie in (0, 1], got {a}"),
        ));
    }
    Ok(2.0 / PI * (1.0 - a))
}

/// Smallest `a` accepted by [`inv_second_order_one`], `1 − π²/32`.
pub fn second_order_limit() -> f64 {
    1.0 - PI * PI / 32.0
}

/// Second-order inverse near `a = 1`: the small root of
/// `a = 1 − πx/2 + 2x²`, i.e. `x = (π − √(32a + π² − 32))/8`.
pub fn inv_second_order_one(a: f64) -> Result<f64> {
    check_finite("inv_second_order_one", a)?;
    let radicand = 32.0 * (a - 1.0) + PI * PI;
    if radicand < 0.0 || a > 1.0 {
        return Err(domain(
            "inv_second_order_one",
            format!("a must lie in [1 - pi^2/32, 1], got {a}"),
        ));
    }
    Ok((PI - radicand.sqrt()) / 8.0)
}

/// `−(ln 2x)²`, the large-`x` asymptote of `Re[arccos(x)²]`.
pub fn arccos_sq_asymptote(x: f64) -> Result<f64> {
    check_finite("arccos_sq_asymptote", x)?;
    if x <= 1.0 {
        return Err(domain(
            "arccos_sq_asymptote",
            format!("x must be > 1, got {x}"),
        ));
    }
    let l = (2.0 * x).ln();
    Ok(-l * l)
}

/// `Re[arccos(x)²]` for `x > 0`: `arccos(x)²` below one and
/// `−arccosh(x)²` above, since `arccos(x) = i arccosh(x)` there.
pub fn arccos_sq_real(x: f64) -> Result<f64> {
    check_finite("arccos_sq_real", x)?;
    if x <= 0.0 {
        return Err(domain("arccos_sq_real", format!("x must be > 0, got {x}")));
    }
    Ok(if x <= 1.0 {
        let c = x.acos();
        c * c
    } else {
        let c = x.acosh();
        -c * c
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlson::rd;

    fn closed_below(x: f64) -> f64 {
        let s = 1.0 - x * x;
        1.0 / s - x * x.acos() / s.powf(1.5)
    }

    #[test]
    fn value_at_one() {
        assert!((f_axial(1.0).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        let rd_side = rd(1.0, 1.0, 1.0).unwrap() / 3.0;
        assert_eq!(rd_side, 1.0 / 3.0);
    }

    #[test]
    fn limit_at_zero() {
        assert!((f_axial(1e-8).unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn value_at_half() {
        let v = f_axial(0.5).unwrap();
        assert!((v - closed_below(0.5)).abs() < 1e-15);
        assert!((v - 0.527_200_282_562_569_8).abs() < 1e-15);
        let via_rd = 0.5 * rd(1.0, 1.0, 0.25).unwrap() / 3.0;
        assert!(((v - via_rd) / v).abs() < 1e-14);
    }

    #[test]
    fn agrees_with_rd_on_log_grid() {
        for i in 0..100 {
            let x = 10f64.powf(-3.0 + 6.0 * i as f64 / 99.0);
            let lhs = x * rd(1.0, 1.0, x * x).unwrap() / 3.0;
            let rhs = f_axial(x).unwrap();
            assert!(
                ((lhs - rhs) / rhs).abs() <= 1e-12,
                "x = {x}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn taylor_window_matches_closed_forms_at_edges() {
        for x in [
            1.0 - NEAR_ONE,
            1.0 + NEAR_ONE,
            1.0 - 1.01 * NEAR_ONE,
            1.0 + 1.01 * NEAR_ONE,
        ] {
            let series = TAYLOR_AT_ONE
                .iter()
                .rev()
                .fold(0.0, |acc, &c| acc * (1.0 - x) + c);
            let closed = if x < 1.0 {
                closed_below(x)
            } else {
                let s = x * x - 1.0;
                x * x.acosh() / s.powf(1.5) - 1.0 / s
            };
            assert!(((series - closed) / closed).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn continuity_through_one() {
        // slope at one is -4/15
        let eps = 1e-6;
        let diff = f_axial(1.0 - eps).unwrap() - f_axial(1.0 + eps).unwrap();
        assert!((diff - 8.0 / 15.0 * eps).abs() <= 1e-15);
        // series and closed forms agree at the window edges
        for x in [1.0 - NEAR_ONE, 1.0 + NEAR_ONE] {
            let below = f_axial(x * (1.0 - 1e-15)).unwrap();
            let above = f_axial(x * (1.0 + 1e-15)).unwrap();
            assert!((below - above).abs() <= 1e-14, "x = {x}");
        }
    }

    #[test]
    fn monotone_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..2000 {
            let x = 10f64.powf(-6.0 + 12.0 * i as f64 / 1999.0);
            let v = f_axial(x).unwrap();
            assert!(v < prev, "not decreasing at {x}");
            prev = v;
        }
        assert!(f_axial(1e8).unwrap() <= 1e-14);
    }

    #[test]
    fn series_at_zero() {
        assert_eq!(f_axial_series0(0.0).unwrap(), 1.0);
        assert!((f_axial_series0(0.05).unwrap() - f_axial(0.05).unwrap()).abs() <= 1e-6);
        let x: f64 = 0.1;
        let direct =
            1.0 - PI * x / 2.0 + 2.0 * x * x - 3.0 * PI * x.powi(3) / 4.0 + 8.0 * x.powi(4) / 3.0;
        assert!((f_axial_series0(0.1).unwrap() - direct).abs() < 1e-15);
        assert!(f_axial_series0(0.2).is_err());
        assert!(f_axial_series0(-0.01).is_err());
    }

    #[test]
    fn asym_zero_inverse() {
        let x = inv_asym_zero(asym_zero_limit()).unwrap();
        assert!((x - 1.5f64.exp() / 2.0).abs() < 1e-6, "{x}");

        // bisection on g(x) = (ln 2x - 1)/x², decreasing beyond e^{3/2}/2
        let a = 1e-4;
        let g = |x: f64| ((2.0 * x).ln() - 1.0) / (x * x);
        let (mut lo, mut hi) = (1.5f64.exp() / 2.0, 1e6);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > a {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let x = inv_asym_zero(a).unwrap();
        assert!(((x - oracle) / oracle).abs() < 1e-10, "{x} vs {oracle}");

        for a in [1e-8, 1e-4, 0.01, 0.09] {
            let w = lambert::w_m1(-E * E * a / 2.0).unwrap();
            let sqrt_form = (-w / (2.0 * a)).sqrt();
            let x = inv_asym_zero(a).unwrap();
            assert!(((x - sqrt_form) / x).abs() < 1e-13);
        }
        assert!(inv_asym_zero(0.0).is_err());
        assert!(inv_asym_zero(0.1).is_err());
    }

    #[test]
    fn asym_zero_inverse_consistency() {
        let dev = |a: f64| (f_axial(inv_asym_zero(a).unwrap()).unwrap() / a - 1.0).abs();
        assert!(dev(1e-6) < dev(1e-3));
    }

    #[test]
    fn first_order_inverse() {
        assert_eq!(inv_first_order_one(1.0).unwrap(), 0.0);
        assert!((inv_first_order_one(0.9).unwrap() - 0.2 / PI).abs() < 1e-16);
        let x = inv_first_order_one(0.999).unwrap();
        assert!((f_axial(x).unwrap() - 0.999).abs() < 5e-6);
        assert!(inv_first_order_one(0.0).is_err());
        assert!(inv_first_order_one(1.1).is_err());
    }

    #[test]
    fn second_order_inverse() {
        assert_eq!(inv_second_order_one(1.0).unwrap(), 0.0);
        let expected = (PI - (PI * PI - 3.2).sqrt()) / 8.0;
        assert!((inv_second_order_one(0.9).unwrap() - expected).abs() < 1e-15);
        let x = inv_second_order_one(0.95).unwrap();
        assert!((1.0 - PI * x / 2.0 + 2.0 * x * x - 0.95).abs() < 1e-14);
        assert!(inv_second_order_one(second_order_limit()).is_ok());
        assert!(inv_second_order_one(second_order_limit() - 1e-3).is_err());
    }

    #[test]
    fn arccos_asymptote() {
        let v = arccos_sq_asymptote(10.0).unwrap();
        assert!((v + 20f64.ln().powi(2)).abs() < 1e-14);
        assert!((v + 8.9744).abs() < 1e-4);
        let err = |x: f64| {
            let exact = -x.acosh().powi(2);
            ((arccos_sq_asymptote(x).unwrap() - exact) / exact).abs()
        };
        assert!(err(1000.0) < err(10.0));
        assert!(err(1000.0) < 0.01);
        assert!(arccos_sq_asymptote(1.0).is_err());
        assert!((arccos_sq_real(0.5).unwrap() - (PI / 3.0).powi(2)).abs() < 1e-15);
        assert!(arccos_sq_real(2.0).unwrap() < 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(f_axial(0.0).is_err());
        assert!(f_axial(-1.0).is_err());
        assert!(f_axial(f64::NAN).is_err());
        assert!(f_axial(f64::INFINITY).is_err());
    }

    #[test]
    fn closed_form_agrees_with_f_axial() {
        for x in [1e-3, 0.5, 0.9, 1.2, 3.0, 1e3, 1e6] {
            let v = f_closed_form(x).unwrap();
            assert!(((v - f_axial(x).unwrap()) / v).abs() < 1e-13, "x = {x}");
        }
        assert_eq!(f_closed_form(1.0).unwrap(), 1.0 / 3.0);
        assert!(f_closed_form(0.0).is_err());
    }
}
