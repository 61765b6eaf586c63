//! Carlson symmetric elliptic integrals R_C, R_F, R_D and R_J for real
//! nonnegative arguments.
//!
//! All four are evaluated with the duplication theorem: the arguments are
//! repeatedly replaced by `(x + λ) / 4` with `λ = √x√y + √y√z + √z√x`, which
//! shrinks their relative spread by a factor of four per step. Once the spread
//! falls below [`SPREAD_TOL`] the remaining integral is summed from the
//! fifth-order (seventh-order for R_C) symmetric-polynomial expansion around
//! the mean.
//!
//! ```text
//! R_F(x,y,z)   = 1/2 ∫₀^∞ dt / s(t)
//! R_J(x,y,z,p) = 3/2 ∫₀^∞ dt / (s(t) (t + p))
//! R_D(x,y,z)   = R_J(x,y,z,z)
//! R_C(x,y)     = R_F(x,y,y)
//! s(t)         = √(t+x) √(t+y) √(t+z)
//! ```

use crate::error::{domain, Result};

/// Relative spread of the arguments at which duplication stops.
pub const SPREAD_TOL: f64 = 1e-6;

/// Relative node spacing of the stencil used by [`rd_partials`] when one of
/// the first two arguments is close to the third.
pub const PARTIAL_REL_STEP: f64 = 1e-3;

const MAX_DUPLICATIONS: usize = 200;

fn check_finite(func: &'static str, name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(domain(func, format!("{name} must be finite, got {v}")))
    }
}

fn check_nonneg(func: &'static str, name: &str, v: f64) -> Result<()> {
    check_finite(func, name, v)?;
    if v < 0.0 {
        return Err(domain(func, format!("{name} must be >= 0, got {v}")));
    }
    Ok(())
}

fn check_positive(func: &'static str, name: &str, v: f64) -> Result<()> {
    check_finite(func, name, v)?;
    if v <= 0.0 {
        return Err(domain(func, format!("{name} must be > 0, got {v}")));
    }
    Ok(())
}

fn zero_count(vals: &[f64]) -> usize {
    vals.iter().filter(|&&v| v == 0.0).count()
}

/// R_C(x, y) for `x >= 0`, `y > 0`.
pub fn rc(x: f64, y: f64) -> Result<f64> {
    check_nonneg("rc", "x", x)?;
    check_positive("rc", "y", y)?;
    Ok(rc_unchecked(x, y))
}

/// R_F(x, y, z) for nonnegative arguments of which at most one is zero.
pub fn rf(x: f64, y: f64, z: f64) -> Result<f64> {
    check_nonneg("rf", "x", x)?;
    check_nonneg("rf", "y", y)?;
    check_nonneg("rf", "z", z)?;
    if zero_count(&[x, y, z]) > 1 {
        return Err(domain("rf", "at most one of x, y, z may be zero"));
    }
    Ok(rf_unchecked(x, y, z))
}

/// R_D(x, y, z) for `z > 0`, `x, y >= 0` and not both zero.
pub fn rd(x: f64, y: f64, z: f64) -> Result<f64> {
    check_nonneg("rd", "x", x)?;
    check_nonneg("rd", "y", y)?;
    check_positive("rd", "z", z)?;
    if x == 0.0 && y == 0.0 {
        return Err(domain("rd", "at most one of x, y may be zero"));
    }
    Ok(rd_unchecked(x, y, z))
}

/// R_J(x, y, z, p) for `p > 0` and nonnegative `x, y, z` of which at most one
/// is zero. The Cauchy principal value for `p < 0` is not provided.
pub fn rj(x: f64, y: f64, z: f64, p: f64) -> Result<f64> {
    check_nonneg("rj", "x", x)?;
    check_nonneg("rj", "y", y)?;
    check_nonneg("rj", "z", z)?;
    check_positive("rj", "p", p)?;
    if zero_count(&[x, y, z]) > 1 {
        return Err(domain("rj", "at most one of x, y, z may be zero"));
    }
    Ok(rj_unchecked(x, y, z, p))
}

/// Gradient of R_D with respect to its three arguments.
///
/// The symmetric-variable components use the divided differences
///
/// ```text
/// ∂R_D/∂x = (R_D(y,z,x) − R_D(x,y,z)) / (2(x − z))
/// ∂R_D/∂y = (R_D(x,z,y) − R_D(x,y,z)) / (2(y − z))
/// ```
///
/// and the last one follows from
/// `∂R_D/∂z = −3/2 x^{-1/2} y^{-1/2} z^{-3/2} − ∂R_D/∂x − ∂R_D/∂y`.
///
/// The quotient is analytic in `x` but cancels as `x → z`. When
/// `|x − z| < h = PARTIAL_REL_STEP · z` it is evaluated at `z ± h, z ± 2h`
/// instead and interpolated by the cubic through those nodes, which keeps
/// the result accurate to about `1e-11` relative through the coincident case.
///
/// All three arguments must be strictly positive; the gradient is unbounded
/// at a zero argument.
pub fn rd_partials(x: f64, y: f64, z: f64) -> Result<(f64, f64, f64)> {
    check_positive("rd_partials", "x", x)?;
    check_positive("rd_partials", "y", y)?;
    check_positive("rd_partials", "z", z)?;
    Ok(rd_partials_unchecked(x, y, z))
}

pub(crate) fn rd_partials_unchecked(x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let dx = rd_first_partial(x, y, z);
    let dy = rd_first_partial(y, x, z);
    let dz = -1.5 / (x.sqrt() * y.sqrt() * z * z.sqrt()) - dx - dy;
    (dx, dy, dz)
}

/// ∂R_D/∂x at (x, y, z).
fn rd_first_partial(x: f64, y: f64, z: f64) -> f64 {
    let quotient = |s: f64| (rd_unchecked(y, z, s) - rd_unchecked(s, y, z)) / (2.0 * (s - z));
    let h = PARTIAL_REL_STEP * z;
    if (x - z).abs() >= h {
        return quotient(x);
    }
    let t = (x - z) / h;
    let nodes = [-2.0, -1.0, 1.0, 2.0];
    let mut sum = 0.0;
    for (k, &tk) in nodes.iter().enumerate() {
        let mut w = 1.0;
        for (m, &tm) in nodes.iter().enumerate() {
            if m != k {
                w *= (t - tm) / (tk - tm);
            }
        }
        sum += w * quotient(z + tk * h);
    }
    sum
}

pub(crate) fn rc_unchecked(x: f64, y: f64) -> f64 {
    let y0 = y;
    let (mut x, mut y) = (x, y);
    let a0 = (x + 2.0 * y) / 3.0;
    let mut a = a0;
    let q = (a0 - x).abs() / SPREAD_TOL;
    let mut fac = 1.0;
    for _ in 0..MAX_DUPLICATIONS {
        if fac * q < a.abs() {
            break;
        }
        let lambda = 2.0 * x.sqrt() * y.sqrt() + y;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        a = 0.25 * (a + lambda);
        fac *= 0.25;
    }
    let s = (y0 - a0) * fac / a;
    let poly = 1.0
        + s * s
            * (3.0 / 10.0
                + s * (1.0 / 7.0
                    + s * (3.0 / 8.0 + s * (9.0 / 22.0 + s * (159.0 / 208.0 + s * (9.0 / 8.0))))));
    poly / a.sqrt()
}

pub(crate) fn rf_unchecked(x: f64, y: f64, z: f64) -> f64 {
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let mut a = a0;
    let q = (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs()) / SPREAD_TOL;
    let mut fac = 1.0;
    for _ in 0..MAX_DUPLICATIONS {
        if fac * q < a.abs() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        fac *= 0.25;
    }
    let dx = (a0 - x0) * fac / a;
    let dy = (a0 - y0) * fac / a;
    let dz = -(dx + dy);
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    let poly = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0;
    poly / a.sqrt()
}

pub(crate) fn rd_unchecked(x: f64, y: f64, z: f64) -> f64 {
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let mut a = a0;
    let q = (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs()) / SPREAD_TOL;
    let mut fac = 1.0;
    let mut sum = 0.0;
    for _ in 0..MAX_DUPLICATIONS {
        if fac * q < a.abs() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        sum += fac / (sz * (z + lambda));
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        fac *= 0.25;
    }
    let dx = (a0 - x0) * fac / a;
    let dy = (a0 - y0) * fac / a;
    let dz = -(dx + dy) / 3.0;
    let xy = dx * dy;
    let z2 = dz * dz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * dz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * dz;
    let poly = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    fac * poly / (a * a.sqrt()) + 3.0 * sum
}

pub(crate) fn rj_unchecked(x: f64, y: f64, z: f64, p: f64) -> f64 {
    let (x0, y0, z0) = (x, y, z);
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let a0 = (x + y + z + 2.0 * p) / 5.0;
    let mut a = a0;
    let delta = (p - x) * (p - y) * (p - z);
    let q = (a0 - x)
        .abs()
        .max((a0 - y).abs())
        .max((a0 - z).abs())
        .max((a0 - p).abs())
        / SPREAD_TOL;
    let mut fac = 1.0;
    let mut sum = 0.0;
    for _ in 0..MAX_DUPLICATIONS {
        if fac * q < a.abs() {
            break;
        }
        let (sx, sy, sz, sp) = (x.sqrt(), y.sqrt(), z.sqrt(), p.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        let d = (sp + sx) * (sp + sy) * (sp + sz);
        let e = fac * fac * fac * delta / (d * d);
        sum += fac / d * rc_unchecked(1.0, 1.0 + e);
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        p = 0.25 * (p + lambda);
        a = 0.25 * (a + lambda);
        fac *= 0.25;
    }
    let dx = (a0 - x0) * fac / a;
    let dy = (a0 - y0) * fac / a;
    let dz = (a0 - z0) * fac / a;
    let dp = -(dx + dy + dz) / 2.0;
    let xyz = dx * dy * dz;
    let p2 = dp * dp;
    let e2 = dx * dy + dx * dz + dy * dz - 3.0 * p2;
    let e3 = xyz + 2.0 * e2 * dp + 4.0 * p2 * dp;
    let e4 = (2.0 * xyz + e2 * dp + 3.0 * p2 * dp) * dp;
    let e5 = xyz * p2;
    let poly = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    fac * poly / (a * a.sqrt()) + 6.0 * sum
}
