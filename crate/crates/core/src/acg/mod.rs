//! Second and fourth moments of the three-dimensional angular central
//! Gaussian (ACG) distribution in the eigenbasis of its parameter matrix.
//!
//! With `B = diag(b)` (`Π b_i = 1`) the second moment is `A = diag(a)` where
//!
//! ```text
//! a_1 = R_D(b_2, b_3, b_1)/3,  a_2 = R_D(b_1, b_3, b_2)/3,  a_3 = R_D(b_1, b_2, b_3)/3
//! ```
//!
//! and the fourth moment has only `A_iijj`-type components,
//!
//! ```text
//! A_iijj = D_ij / 2                          (i ≠ j)
//! A_iiii = (2 a_i − D_ik − D_il) / 2
//! D_ij   = (a_i b_i − a_j b_j) / (b_i − b_j)
//! ```
//!
//! The closure problem runs the first map backwards (`a → b`, by Newton's
//! method) and then evaluates the second.

mod tensor;

pub use tensor::{EigenTriple, SymTensor2, SymTensor4, NORMALIZATION_TOL, SYM4_INDICES};

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use crate::carlson::{rd_partials_unchecked, rd_unchecked};
use crate::error::{domain, Error, Result};
use crate::relation;

/// Input `b` whose determinant is within this distance of one is rescaled to
/// unit determinant; anything further away is rejected.
pub const DET_RENORMALIZE_TOL: f64 = 1e-8;

/// Eigenvalues of `A` below this are treated as zero (planar and
/// unidirectional states).
pub const BOUNDARY_A: f64 = 1e-10;

/// Two eigenvalues of `A` closer than this are treated as equal.
pub const AXIAL_TOL: f64 = 1e-12;

/// `|b_i − b_j| < DEGENERATE_REL · max(b_i, b_j)` switches the divided
/// difference `D_ij` to its analytic limit.
pub const DEGENERATE_REL: f64 = 1e-7;

/// Maximum `|a − a(b)|` accepted by [`exact_closure`].
pub const CONSISTENCY_TOL: f64 = 1e-8;

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;
const MAX_HALVINGS: usize = 20;

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn unit_det_b(b: &EigenTriple, func: &'static str) -> Result<[f64; 3]> {
    b.check_positive(func)?;
    let det = b.product();
    if (det - 1.0).abs() > DET_RENORMALIZE_TOL {
        return Err(domain(func, format!("det(B) = {det} must equal 1")));
    }
    let s = det.cbrt();
    Ok(b.0.map(|v| v / s))
}

pub(crate) fn a_from_b_raw(b: &[f64; 3]) -> [f64; 3] {
    [
        rd_unchecked(b[1], b[2], b[0]) / 3.0,
        rd_unchecked(b[0], b[2], b[1]) / 3.0,
        rd_unchecked(b[0], b[1], b[2]) / 3.0,
    ]
}

/// Second-moment spectrum `a` of the ACG distribution with parameter
/// spectrum `b`.
pub fn a_from_b(b: &EigenTriple) -> Result<EigenTriple> {
    let b = unit_det_b(b, "a_from_b")?;
    Ok(EigenTriple(a_from_b_raw(&b)))
}

/// Result of the Newton inversion `a → b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub b: EigenTriple,
    pub iterations: usize,
    /// Final `max |a_i(b)/a_i − 1|` over the two solved components.
    pub residual: f64,
}

/// Parameter spectrum `b` (unit determinant) reproducing the second-moment
/// spectrum `a`. All `a_i` must be at least [`BOUNDARY_A`].
pub fn b_from_a(a: &EigenTriple) -> Result<EigenTriple> {
    b_from_a_newton(a).map(|inv| inv.b)
}

/// [`b_from_a`] with iteration statistics.
///
/// The unknowns are `ln b` for the two smaller eigenvalues of `a`; the third
/// `b` is fixed by `det B = 1`. The residual is the relative mismatch of
/// those two components, so small eigenvalues are matched to full relative
/// accuracy and the largest one follows from `Σ a_i = 1`.
pub fn b_from_a_newton(a: &EigenTriple) -> Result<Inversion> {
    a.check_simplex("b_from_a")?;
    if a.min() < BOUNDARY_A {
        return Err(domain(
            "b_from_a",
            format!(
                "a = {a} has an eigenvalue below {BOUNDARY_A:e}; use the planar or unidirectional closure"
            ),
        ));
    }
    let av = a.0;
    let k = (0..3).fold(0, |m, l| if av[l] > av[m] { l } else { m });
    let (i, j) = others(k);

    let cube_root_prod = a.product().cbrt();
    let mut u = [(cube_root_prod / av[i]).ln(), (cube_root_prod / av[j]).ln()];

    let eval = |u: &[f64; 2]| {
        let mut b = [0.0; 3];
        b[i] = u[0].exp();
        b[j] = u[1].exp();
        b[k] = (-u[0] - u[1]).exp();
        let am = a_from_b_raw(&b);
        (b, [am[i] / av[i] - 1.0, am[j] / av[j] - 1.0])
    };
    let norm = |r: &[f64; 2]| r[0].abs().max(r[1].abs());

    let (mut b, mut r) = eval(&u);
    for it in 0..=NEWTON_MAX_ITER {
        let res = norm(&r);
        if res < NEWTON_TOL {
            return Ok(Inversion {
                b: EigenTriple(b),
                iterations: it,
                residual: res,
            });
        }
        if it == NEWTON_MAX_ITER || !res.is_finite() {
            break;
        }
        let g = jacobian_a_wrt_b(&b);
        let j00 = (g[i][i] * b[i] - g[i][k] * b[k]) / av[i];
        let j01 = (g[i][j] * b[j] - g[i][k] * b[k]) / av[i];
        let j10 = (g[j][i] * b[i] - g[j][k] * b[k]) / av[j];
        let j11 = (g[j][j] * b[j] - g[j][k] * b[k]) / av[j];
        let det = j00 * j11 - j01 * j10;
        let step = [
            -(j11 * r[0] - j01 * r[1]) / det,
            -(-j10 * r[0] + j00 * r[1]) / det,
        ];

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let cand = [u[0] + t * step[0], u[1] + t * step[1]];
            let (bc, rc) = eval(&cand);
            let accept = norm(&rc) < res;
            accepted = Some((cand, bc, rc));
            if accept {
                break;
            }
            t *= 0.5;
        }
        // no decrease after all halvings: take the shortest step and carry on
        let (cand, bc, rc) = accepted.expect("at least one trial step");
        u = cand;
        b = bc;
        r = rc;
    }
    Err(Error::NoConvergence {
        method: "b_from_a Newton iteration",
        iterations: NEWTON_MAX_ITER,
        residual: norm(&r),
    })
}

/// `∂a_l/∂b_m` (rows `l`, columns `m`).
fn jacobian_a_wrt_b(b: &[f64; 3]) -> [[f64; 3]; 3] {
    let mut g = [[0.0; 3]; 3];
    for (l, row) in g.iter_mut().enumerate() {
        let (m, n) = others(l);
        let (dx, dy, dz) = rd_partials_unchecked(b[m], b[n], b[l]);
        row[m] = dx / 3.0;
        row[n] = dy / 3.0;
        row[l] = dz / 3.0;
    }
    g
}

/// Distinct eigenvalue `a` on the axially symmetric line
/// `b = (β^{-1/2}, β^{-1/2}, β)`: `a = R_D(β^{-1/2}, β^{-1/2}, β)/3 = f(β^{3/4})`.
pub fn axial_forward(beta: f64) -> Result<f64> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(domain(
            "axial_forward",
            format!("beta must be > 0, got {beta}"),
        ));
    }
    Ok(relation::f_axial_unchecked(beta.powf(0.75)))
}

/// Inverse of [`axial_forward`] for `a ∈ (1e-12, 1 − 1e-12)`.
pub fn axial_invert(a: f64) -> Result<f64> {
    if !a.is_finite() || a <= 1e-12 || a >= 1.0 - 1e-12 {
        return Err(domain(
            "axial_invert",
            format!("a must lie in (1e-12, 1 - 1e-12), got {a}"),
        ));
    }
    // bisection in ln x, x = β^{3/4}; f is strictly decreasing
    let (mut lo, mut hi) = (-45.0f64, 30.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if relation::f_axial_unchecked(mid.exp()) > a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi) * 4.0 / 3.0).exp())
}

/// Exact `A_iiii` on the axially symmetric line with distinct eigenvalue
/// `a`, returned with `β`. With `x = β^{3/4}`,
/// `A_iiii = (3a − 1)/(2 − 2x²)`; near `x = 1` both numerator and
/// denominator are replaced by their series in `1 − x`.
pub fn axial_aiiii(a: f64) -> Result<(f64, f64)> {
    let beta = axial_invert(a)?;
    let x = beta.powf(0.75);
    let h = 1.0 - x;
    let v = if h.abs() < relation::NEAR_ONE {
        3.0 * relation::f_axial_slope_at_one(h) / (2.0 * (2.0 - h))
    } else {
        (3.0 * a - 1.0) / (2.0 - 2.0 * x * x)
    };
    Ok((beta, v))
}

/// Divided difference `D_ij = (a_i b_i − a_j b_j)/(b_i − b_j)`, replaced by
/// its limit `[R_D(c, b_k, c) + c(∂_z − ∂_x)R_D(c, b_k, c)]/3` at the
/// midpoint `c` when `b_i ≈ b_j`.
fn pair_quotient(a: &[f64; 3], b: &[f64; 3], i: usize, j: usize) -> f64 {
    let (bi, bj) = (b[i], b[j]);
    if (bi - bj).abs() < DEGENERATE_REL * bi.max(bj) {
        let k = 3 - i - j;
        let c = 0.5 * (bi + bj);
        let r = rd_unchecked(c, b[k], c);
        let (dx, _, dz) = rd_partials_unchecked(c, b[k], c);
        (r + c * (dz - dx)) / 3.0
    } else {
        (a[i] * bi - a[j] * bj) / (bi - bj)
    }
}

/// Exact fourth moment for a consistent pair `(a, b)`.
///
/// The divided differences are taken from `a(b)` so they stay well
/// conditioned; the diagonal uses the supplied `a`, which makes
/// `Σ_j A_iijj = a_i` hold to rounding.
pub fn exact_closure(a: &EigenTriple, b: &EigenTriple) -> Result<SymTensor4> {
    a.check_simplex("exact_closure")?;
    let b = unit_det_b(b, "exact_closure")?;
    let ab = a_from_b_raw(&b);
    let mismatch = (0..3).map(|i| (ab[i] - a[i]).abs()).fold(0.0, f64::max);
    if mismatch > CONSISTENCY_TOL {
        return Err(Error::Inconsistent(format!(
            "a = {a} differs from a(b) = {} by {mismatch:e}",
            EigenTriple(ab)
        )));
    }
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        let (k, l) = others(i);
        let dk = pair_quotient(&ab, &b, i, k);
        let dl = pair_quotient(&ab, &b, i, l);
        m[i][i] = 0.5 * (2.0 * a[i] - dk - dl);
        m[i][k] = 0.5 * dk;
        m[i][l] = 0.5 * dl;
    }
    Ok(SymTensor4::from_iijj(&m))
}

fn zero_slots(a: &EigenTriple, tol: f64) -> Vec<usize> {
    (0..3).filter(|&i| a[i] <= tol).collect()
}

/// In-plane parameters `b_i = 1/a_i − 1` of a planar state (exactly one
/// `a_i` zero). The out-of-plane slot is returned as `+∞`.
pub fn planar_b_from_a(a: &EigenTriple) -> Result<EigenTriple> {
    a.check_simplex("planar_b_from_a")?;
    let zeros = zero_slots(a, 1e-14);
    if zeros.len() != 1 {
        return Err(domain(
            "planar_b_from_a",
            format!("exactly one eigenvalue must be zero, got a = {a}"),
        ));
    }
    Ok(EigenTriple(std::array::from_fn(|i| {
        if i == zeros[0] {
            f64::INFINITY
        } else {
            1.0 / a[i] - 1.0
        }
    })))
}

/// Closure for planar and unidirectional states, `A_iijj = a_i (a_j + δ_ij)/2`.
pub fn planar_closure(a: &EigenTriple) -> Result<SymTensor4> {
    a.check_simplex("planar_closure")?;
    if zero_slots(a, 1e-14).is_empty() {
        return Err(domain(
            "planar_closure",
            format!("at least one eigenvalue must be zero, got a = {a}"),
        ));
    }
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            *v = 0.5 * a[i] * (a[j] + delta);
        }
    }
    Ok(SymTensor4::from_iijj(&m))
}

/// `A_iiii ≈ (3a − 1)/(2 + W₋₁(−e²a/2)/a)` as `a → 0⁺`, for `0 < a <= 2e⁻³`.
pub fn aiiii_asym1(a: f64) -> Result<f64> {
    relation::check_asym_zero("aiiii_asym1", a)?;
    let w = relation::w_m1_of_scaled(a);
    Ok((3.0 * a - 1.0) / (2.0 + w / a))
}

/// The same asymptote with W₋₁ replaced by its leading logarithm,
/// `(3a − 1)/(2 + ln(e²a/2)/a)`, for `0 < a < 2/e²`. It does not tend to
/// the exact moment as `a → 0⁺`.
pub fn aiiii_asym2(a: f64) -> Result<f64> {
    if !a.is_finite() || a <= 0.0 || a >= 2.0 / (E * E) {
        return Err(domain(
            "aiiii_asym2",
            format!("a must lie in (0, 2/e^2), got {a}"),
        ));
    }
    let den = 2.0 + (E * E * a / 2.0).ln() / a;
    if den == 0.0 {
        return Err(domain(
            "aiiii_asym2",
            format!("denominator vanishes at a = {a}"),
        ));
    }
    Ok((3.0 * a - 1.0) / den)
}

/// First-order asymptote as `a → 1⁻`, `(3a − 1)/(2 − 8(a − 1)²/π²)`.
pub fn aiiii_asym4(a: f64) -> Result<f64> {
    if !a.is_finite() || a <= 0.0 || a > 1.0 {
        return Err(domain(
            "aiiii_asym4",
            format!("a must lie in (0, 1], got {a}"),
        ));
    }
    Ok((3.0 * a - 1.0) / (2.0 - 8.0 / (PI * PI) * (a - 1.0) * (a - 1.0)))
}

/// Second-order asymptote as `a → 1⁻`,
/// `(3a − 1)/(2 − (π − √(32(a − 1) + π²))²/32)`, for `a >= 1 − π²/32`.
pub fn aiiii_asym5(a: f64) -> Result<f64> {
    let radicand = 32.0 * (a - 1.0) + PI * PI;
    if !a.is_finite() || a > 1.0 || radicand < 0.0 {
        return Err(domain(
            "aiiii_asym5",
            format!("a must lie in [1 - pi^2/32, 1], got {a}"),
        ));
    }
    let d = PI - radicand.sqrt();
    Ok((3.0 * a - 1.0) / (2.0 - d * d / 32.0))
}

/// Evaluation path for [`closure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosureMethod {
    Exact,
    Planar,
    Unidirectional,
    Asym1,
    Asym2,
    Asym4,
    Asym5,
}

impl ClosureMethod {
    pub const ALL: [ClosureMethod; 7] = [
        Self::Exact,
        Self::Planar,
        Self::Unidirectional,
        Self::Asym1,
        Self::Asym2,
        Self::Asym4,
        Self::Asym5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Planar => "planar",
            Self::Unidirectional => "unidirectional",
            Self::Asym1 => "asym1",
            Self::Asym2 => "asym2",
            Self::Asym4 => "asym4",
            Self::Asym5 => "asym5",
        }
    }

    pub fn is_asymptotic(self) -> bool {
        matches!(self, Self::Asym1 | Self::Asym2 | Self::Asym4 | Self::Asym5)
    }
}

impl fmt::Display for ClosureMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClosureMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| domain("closure method", format!("unknown method `{s}`")))
    }
}

/// Output of [`closure`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closure {
    pub moment: SymTensor4,
    /// Parameter spectrum used (or implied) by the route; infinite entries
    /// mark eigenvalues of `A` that are zero.
    pub b: EigenTriple,
    /// Short description of the evaluation route.
    pub route: &'static str,
}

/// Index of the distinct eigenvalue when the other two agree within
/// [`AXIAL_TOL`]. Returns `None` when no pair agrees or all three do.
pub fn axial_index(a: &EigenTriple) -> Option<usize> {
    let eq = |i: usize, j: usize| (a[i] - a[j]).abs() <= AXIAL_TOL;
    match (eq(1, 2), eq(0, 2), eq(0, 1)) {
        (true, true, true) => None,
        (true, _, _) => Some(0),
        (_, true, _) => Some(1),
        (_, _, true) => Some(2),
        _ => None,
    }
}

fn is_isotropic(a: &EigenTriple) -> bool {
    (0..3).all(|i| (a[i] - 1.0 / 3.0).abs() <= AXIAL_TOL)
}

fn axial_b(i: usize, x: f64) -> EigenTriple {
    // b_i = β = x^{4/3}, remaining pair β^{-1/2} = x^{-2/3}
    let beta = x.powf(4.0 / 3.0);
    let side = x.powf(-2.0 / 3.0);
    EigenTriple(std::array::from_fn(|l| if l == i { beta } else { side }))
}

/// Completes an axially symmetric fourth moment from its `A_iiii` entry using
/// the contraction identity and transverse isotropy (`A_jjjj = 3 A_jjkk`).
fn axial_tensor(a: &EigenTriple, i: usize, aiiii: f64) -> SymTensor4 {
    let (j, k) = others(i);
    let mut m = [[0.0; 3]; 3];
    m[i][i] = aiiii;
    let mixed = 0.5 * (a[i] - aiiii);
    m[i][j] = mixed;
    m[j][i] = mixed;
    m[i][k] = mixed;
    m[k][i] = mixed;
    let rest_j = a[j] - mixed;
    let rest_k = a[k] - mixed;
    m[j][j] = 0.75 * rest_j;
    m[k][k] = 0.75 * rest_k;
    m[j][k] = 0.125 * (rest_j + rest_k);
    m[k][j] = m[j][k];
    SymTensor4::from_iijj(&m)
}

fn clean_boundary(a: &EigenTriple) -> EigenTriple {
    let v = a.0.map(|x| if x < BOUNDARY_A { 0.0 } else { x });
    let s: f64 = v.iter().sum();
    EigenTriple(v.map(|x| x / s))
}

fn boundary_b(a: &EigenTriple) -> Result<EigenTriple> {
    let zeros = zero_slots(a, 0.0);
    if zeros.len() == 1 {
        planar_b_from_a(a)
    } else {
        Ok(EigenTriple(a.0.map(|x| {
            if x == 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })))
    }
}

/// Fourth moment for the second-moment spectrum `a` along the selected path.
///
/// `Exact` dispatches on the pattern of `a`: eigenvalues below
/// [`BOUNDARY_A`] route to the planar or unidirectional formula, two equal
/// eigenvalues to the scalar axial inversion, and everything else to the
/// Newton inversion, followed by [`exact_closure`].
pub fn closure(a: &EigenTriple, method: ClosureMethod) -> Result<Closure> {
    a.check_simplex("closure")?;
    let mismatch = |reason: String| Error::MethodMismatch {
        method: method.name().to_string(),
        reason,
    };
    let n_zero = zero_slots(a, BOUNDARY_A).len();
    match method {
        ClosureMethod::Exact => {
            if n_zero > 0 {
                let clean = clean_boundary(a);
                return Ok(Closure {
                    moment: planar_closure(&clean)?,
                    b: boundary_b(&clean)?,
                    route: if n_zero == 1 {
                        "planar"
                    } else {
                        "unidirectional"
                    },
                });
            }
            let (b, route) = if is_isotropic(a) {
                (EigenTriple::new(1.0, 1.0, 1.0), "isotropic")
            } else if let Some(i) = axial_index(a) {
                let beta = axial_invert(a[i])?;
                let side = beta.powf(-0.5);
                let b = EigenTriple(std::array::from_fn(|l| if l == i { beta } else { side }));
                (b, "axial inversion")
            } else {
                (b_from_a(a)?, "newton inversion")
            };
            Ok(Closure {
                moment: exact_closure(a, &b)?,
                b,
                route,
            })
        }
        ClosureMethod::Planar => {
            if n_zero == 0 {
                return Err(mismatch(format!("a = {a} has no zero eigenvalue")));
            }
            let clean = clean_boundary(a);
            Ok(Closure {
                moment: planar_closure(&clean)?,
                b: boundary_b(&clean)?,
                route: "planar",
            })
        }
        ClosureMethod::Unidirectional => {
            if n_zero != 2 {
                return Err(mismatch(format!("a = {a} is not a unidirectional state")));
            }
            let clean = clean_boundary(a);
            Ok(Closure {
                moment: planar_closure(&clean)?,
                b: boundary_b(&clean)?,
                route: "unidirectional",
            })
        }
        ClosureMethod::Asym1
        | ClosureMethod::Asym2
        | ClosureMethod::Asym4
        | ClosureMethod::Asym5 => {
            let i = axial_index(a).ok_or_else(|| {
                mismatch(format!(
                    "a = {a} is not axially symmetric with a distinct eigenvalue"
                ))
            })?;
            let ai = a[i];
            let (aiiii, x) = match method {
                ClosureMethod::Asym1 => (aiiii_asym1(ai)?, relation::inv_asym_zero(ai)?),
                ClosureMethod::Asym2 => {
                    let v = aiiii_asym2(ai)?;
                    let x = (-(E * E * ai / 2.0).ln() / (2.0 * ai)).sqrt();
                    (v, x)
                }
                ClosureMethod::Asym4 => (aiiii_asym4(ai)?, relation::inv_first_order_one(ai)?),
                _ => (aiiii_asym5(ai)?, relation::inv_second_order_one(ai)?),
            };
            Ok(Closure {
                moment: axial_tensor(a, i, aiiii),
                b: axial_b(i, x),
                route: "axial asymptote",
            })
        }
    }
}
