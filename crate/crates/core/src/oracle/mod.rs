//! Slow brute-force evaluators used to validate the fast paths.
//!
//! Nothing here shares code with [`crate::carlson`] or [`crate::acg`]: the
//! hypergeometric R-function is integrated from its defining single
//! integral, moment tensors are integrated over the sphere (or circle)
//! against the ACG density, and the fourth moment is also obtained from its
//! t-integral representation with a literal 24-permutation symmetrization.

pub mod quad;

use std::f64::consts::PI;

use crate::acg::{EigenTriple, SymTensor2, SymTensor4, SYM4_INDICES};
use crate::error::{domain, Error, Result};

pub use quad::{gauss_legendre, ln_gamma};

const T_ABS_TOL: f64 = 1e-13;
const T_REL_TOL: f64 = 1e-12;
const T_MAX_PANELS: usize = 5000;

/// Parameters of `R_{-a}(b; z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperParams {
    pub a: f64,
    pub b: Vec<f64>,
    pub z: Vec<f64>,
}

impl HyperParams {
    pub fn new(a: f64, b: Vec<f64>, z: Vec<f64>) -> Self {
        Self { a, b, z }
    }

    /// `a′ = −a + Σ b_j`.
    pub fn a_prime(&self) -> f64 {
        self.b.iter().sum::<f64>() - self.a
    }

    /// Parameters of `R_F(x, y, z)`.
    pub fn rf(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.5, vec![0.5; 3], vec![x, y, z])
    }

    /// Parameters of `R_D(x, y, z)`.
    pub fn rd(x: f64, y: f64, z: f64) -> Self {
        Self::new(1.5, vec![0.5, 0.5, 1.5], vec![x, y, z])
    }

    /// Parameters of `R_J(x, y, z, p)`.
    pub fn rj(x: f64, y: f64, z: f64, p: f64) -> Self {
        Self::new(1.5, vec![0.5, 0.5, 0.5, 1.0], vec![x, y, z, p])
    }

    fn check(&self) -> Result<()> {
        if self.b.len() != self.z.len() {
            return Err(domain("r_hyper", "b and z must have equal length"));
        }
        let ap = self.a_prime();
        if self.a.is_nan() || ap.is_nan() || self.a <= 0.0 || ap <= 0.0 {
            return Err(domain(
                "r_hyper",
                format!("need a > 0 and a' > 0, got a = {}, a' = {ap}", self.a),
            ));
        }
        if self.z.iter().any(|z| !z.is_finite() || *z < 0.0) {
            return Err(domain(
                "r_hyper",
                "arguments z must be finite and nonnegative",
            ));
        }
        Ok(())
    }
}

/// `R_{-a}(b; z) = B(a, a′)⁻¹ ∫₀^∞ t^{a′−1} Π (t + z_j)^{−b_j} dt` by
/// adaptive quadrature.
///
/// A zero argument is accepted as long as the integral stays finite.
pub fn r_hyper(p: &HyperParams) -> Result<f64> {
    p.check()?;
    let ap = p.a_prime();
    let g = |t: f64| {
        let mut v = t.powf(ap - 1.0);
        for (b, z) in p.b.iter().zip(&p.z) {
            v *= (t + z).powf(-b);
        }
        [v]
    };
    let est = quad::half_line(g, 0.0, T_REL_TOL, T_MAX_PANELS)?;
    Ok(est.value[0] / quad::beta(p.a, ap))
}

/// Moment tensor of rank two or four.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentTensor {
    Second(SymTensor2),
    Fourth(SymTensor4),
}

impl MomentTensor {
    pub fn second(&self) -> Option<&SymTensor2> {
        match self {
            Self::Second(t) => Some(t),
            Self::Fourth(_) => None,
        }
    }

    pub fn fourth(&self) -> Option<&SymTensor4> {
        match self {
            Self::Fourth(t) => Some(t),
            Self::Second(_) => None,
        }
    }
}

/// Parameter range in which the sphere quadrature is documented to reach
/// its tolerance.
pub const SPHERE_WINDOW: (f64, f64) = (0.02, 50.0);

const SPHERE_N0: usize = 128;
const SPHERE_NMAX: usize = 1024;
const SPHERE_TOL: f64 = 1e-9;

/// Both moments from the sphere quadrature, with convergence information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereMoments {
    pub second: SymTensor2,
    pub fourth: SymTensor4,
    /// Gauss–Legendre nodes in `cos θ` of the accepted rule.
    pub nodes: usize,
    /// Largest component change in the last refinement.
    pub change: f64,
    /// Whether every `b_i` lies in [`SPHERE_WINDOW`].
    pub in_window: bool,
}

fn sphere_rule(b: &[f64; 3], n: usize) -> ([f64; 6], [f64; 15]) {
    let (ct, wt) = gauss_legendre(n);
    let nphi = 2 * n;
    let wphi = 2.0 * PI / nphi as f64;
    let norm = (b[0] * b[1] * b[2]).sqrt() / (4.0 * PI);
    let trig: Vec<(f64, f64)> = (0..nphi)
        .map(|k| (wphi * k as f64).sin_cos())
        .map(|(s, c)| (c, s))
        .collect();
    let mut m2 = [0.0; 6];
    let mut m4 = [0.0; 15];
    for (c, w) in ct.iter().zip(&wt) {
        let s = (1.0 - c * c).max(0.0).sqrt();
        for &(cp, sp) in &trig {
            let p = [s * cp, s * sp, *c];
            let q = b[0] * p[0] * p[0] + b[1] * p[1] * p[1] + b[2] * p[2] * p[2];
            let dens = w * wphi * norm / (q * q.sqrt());
            m2[0] += dens * p[0] * p[0];
            m2[1] += dens * p[0] * p[1];
            m2[2] += dens * p[0] * p[2];
            m2[3] += dens * p[1] * p[1];
            m2[4] += dens * p[1] * p[2];
            m2[5] += dens * p[2] * p[2];
            for (slot, m) in SYM4_INDICES.iter().enumerate() {
                m4[slot] += dens * p[m[0]] * p[m[1]] * p[m[2]] * p[m[3]];
            }
        }
    }
    (m2, m4)
}

/// Second and fourth moments of the ACG distribution with `B = diag(b)` by
/// product quadrature on the sphere against the density
/// `√det B / (4π) (pᵀBp)^{-3/2}`.
///
/// The rule starts at 128 Gauss–Legendre nodes in `cos θ` (and twice as
/// many in `φ`) and doubles until two successive rules agree to `1e-9` or
/// 1024 nodes are reached.
pub fn sphere_moments(b: &EigenTriple) -> Result<SphereMoments> {
    b.check_positive("sphere_moment")?;
    let bv = b.0;
    let in_window = bv
        .iter()
        .all(|&v| (SPHERE_WINDOW.0..=SPHERE_WINDOW.1).contains(&v));
    let mut n = SPHERE_N0;
    let (mut m2, mut m4) = sphere_rule(&bv, n);
    let mut change = f64::INFINITY;
    while n < SPHERE_NMAX {
        n *= 2;
        let (n2, n4) = sphere_rule(&bv, n);
        change = m2
            .iter()
            .zip(&n2)
            .chain(m4.iter().zip(&n4))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        m2 = n2;
        m4 = n4;
        if change < SPHERE_TOL {
            break;
        }
    }
    Ok(SphereMoments {
        second: SymTensor2::from_components(m2),
        fourth: SymTensor4::from_components(m4),
        nodes: n,
        change,
        in_window,
    })
}

fn check_rank(func: &'static str, r: usize) -> Result<()> {
    if r == 2 || r == 4 {
        Ok(())
    } else {
        Err(domain(func, format!("rank must be 2 or 4, got {r}")))
    }
}

/// Rank-`r` moment (`r ∈ {2, 4}`) from [`sphere_moments`].
pub fn sphere_moment(b: &EigenTriple, r: usize) -> Result<MomentTensor> {
    check_rank("sphere_moment", r)?;
    let m = sphere_moments(b)?;
    Ok(if r == 2 {
        MomentTensor::Second(m.second)
    } else {
        MomentTensor::Fourth(m.fourth)
    })
}

/// All 24 orderings of four slots.
fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Fourth moment from the t-integral
/// `(3/4) √det B ∫₀^∞ t 𝒮(M ⊗ M) / √det(B + tI) dt`, `M = (B + tI)⁻¹`,
/// with `𝒮` the average over all 24 index permutations.
pub fn aiv_t_integral(b: &EigenTriple) -> Result<SymTensor4> {
    b.check_positive("aiv_t_integral")?;
    let bv = b.0;
    let perms = permutations4();
    let scale = 0.75 * b.product().sqrt();
    let g = |t: f64| {
        let mut m = [[0.0; 3]; 3];
        let mut det = 1.0;
        for i in 0..3 {
            m[i][i] = 1.0 / (bv[i] + t);
            det *= bv[i] + t;
        }
        let w = t / det.sqrt();
        let mut out = [0.0; 15];
        for (slot, idx) in SYM4_INDICES.iter().enumerate() {
            let mut s = 0.0;
            for p in &perms {
                s += m[idx[p[0]]][idx[p[1]]] * m[idx[p[2]]][idx[p[3]]];
            }
            out[slot] = w * s / 24.0;
        }
        out
    };
    let est = quad::half_line(g, T_ABS_TOL, T_REL_TOL, T_MAX_PANELS)?;
    Ok(SymTensor4::from_components(est.value.map(|v| scale * v)))
}

const CIRCLE_N0: usize = 64;
const CIRCLE_NMAX: usize = 1 << 16;
const CIRCLE_TOL: f64 = 1e-15;

/// Rank-`r` moment of the planar ACG distribution with in-plane parameters
/// `(b1, b2)`, `b1 b2 = 1`, embedded in 3D with the third direction empty.
///
/// Periodic trapezoid rule for `(1/2π) ∫ p^{⊗r} (pᵀBp)^{-1} dφ`, doubled until
/// successive rules agree to `1e-15`.
pub fn circle_moment(b1: f64, b2: f64, r: usize) -> Result<MomentTensor> {
    check_rank("circle_moment", r)?;
    if !(b1 > 0.0 && b2 > 0.0 && b1.is_finite() && b2.is_finite()) {
        return Err(domain(
            "circle_moment",
            format!("b = ({b1}, {b2}) must be positive"),
        ));
    }
    if (b1 * b2 - 1.0).abs() > 1e-10 {
        return Err(domain(
            "circle_moment",
            format!("b1 b2 = {} must equal 1", b1 * b2),
        ));
    }
    // components: 11, 12, 22 for r = 2; 1111, 1112, 1122, 1222, 2222 for r = 4
    let rule = |n: usize| {
        let mut m = [0.0; 5];
        let h = 2.0 * PI / n as f64;
        for k in 0..n {
            let (s, c) = (h * k as f64).sin_cos();
            let w = 1.0 / (n as f64 * (b1 * c * c + b2 * s * s));
            if r == 2 {
                m[0] += w * c * c;
                m[1] += w * c * s;
                m[2] += w * s * s;
            } else {
                for (e, v) in m.iter_mut().enumerate() {
                    *v += w * c.powi(4 - e as i32) * s.powi(e as i32);
                }
            }
        }
        m
    };
    let mut n = CIRCLE_N0;
    let mut m = rule(n);
    loop {
        n *= 2;
        let next = rule(n);
        let change = m
            .iter()
            .zip(&next)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        m = next;
        if change < CIRCLE_TOL {
            break;
        }
        if n >= CIRCLE_NMAX {
            return Err(Error::Quadrature {
                estimate: change,
                panels: n,
            });
        }
    }
    Ok(if r == 2 {
        MomentTensor::Second(SymTensor2::from_components([
            m[0], m[1], 0.0, m[2], 0.0, 0.0,
        ]))
    } else {
        let mut t = SymTensor4::zeros();
        t.set(0, 0, 0, 0, m[0]);
        t.set(0, 0, 0, 1, m[1]);
        t.set(0, 0, 1, 1, m[2]);
        t.set(0, 1, 1, 1, m[3]);
        t.set(1, 1, 1, 1, m[4]);
        MomentTensor::Fourth(t)
    })
}
