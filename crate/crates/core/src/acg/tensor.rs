use std::fmt;
use std::ops::Index;

use crate::error::{domain, Result};

/// Tolerance on `Σ a_i = 1` and `Π b_i = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Three eigenvalues of a diagonal(ized) tensor.
///
/// Used both for the second-moment spectrum `a` (on the unit simplex) and for
/// the ACG parameter spectrum `b` (positive with unit product). Component
/// order is preserved as given; nothing here sorts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenTriple(pub [f64; 3]);

impl EigenTriple {
    pub const fn new(v1: f64, v2: f64, v3: f64) -> Self {
        Self([v1, v2, v3])
    }

    pub const fn isotropic_a() -> Self {
        Self([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn product(&self) -> f64 {
        self.0.iter().product()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Copy sorted in descending order.
    pub fn sorted_desc(&self) -> Self {
        let mut v = self.0;
        v.sort_by(|a, b| b.total_cmp(a));
        Self(v)
    }

    /// Checks that this is a second-moment spectrum: finite components in
    /// `[0, 1]` summing to one.
    pub fn check_simplex(&self, func: &'static str) -> Result<()> {
        for (i, &v) in self.0.iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(domain(func, format!("a{} = {v} is not in [0, 1]", i + 1)));
            }
        }
        let s = self.sum();
        if (s - 1.0).abs() > NORMALIZATION_TOL {
            return Err(domain(func, format!("a must sum to 1, got {s}")));
        }
        Ok(())
    }

    /// Checks that every component is positive and finite.
    pub fn check_positive(&self, func: &'static str) -> Result<()> {
        for (i, &v) in self.0.iter().enumerate() {
            if !v.is_finite() || v <= 0.0 {
                return Err(domain(
                    func,
                    format!("b{} = {v} must be positive and finite", i + 1),
                ));
            }
        }
        Ok(())
    }

    /// Relative distance to another triple, `max_i |x_i − y_i| / |y_i|`.
    pub fn max_rel_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(x, y)| ((x - y) / y).abs())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for EigenTriple {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<[f64; 3]> for EigenTriple {
    fn from(v: [f64; 3]) -> Self {
        Self(v)
    }
}

impl fmt::Display for EigenTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// Sorted multi-indices of the 15 independent components of a fully
/// symmetric rank-4 tensor in three dimensions.
pub const SYM4_INDICES: [[usize; 4]; 15] = [
    [0, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 0, 2],
    [0, 0, 1, 1],
    [0, 0, 1, 2],
    [0, 0, 2, 2],
    [0, 1, 1, 1],
    [0, 1, 1, 2],
    [0, 1, 2, 2],
    [0, 2, 2, 2],
    [1, 1, 1, 1],
    [1, 1, 1, 2],
    [1, 1, 2, 2],
    [1, 2, 2, 2],
    [2, 2, 2, 2],
];

const fn sym4_slot(i: usize, j: usize, k: usize, l: usize) -> usize {
    // An orbit is determined by how often each index value occurs.
    let n = [
        (i == 0) as usize + (j == 0) as usize + (k == 0) as usize + (l == 0) as usize,
        (i == 1) as usize + (j == 1) as usize + (k == 1) as usize + (l == 1) as usize,
    ];
    let mut s = 0;
    while s < 15 {
        let m = SYM4_INDICES[s];
        let c0 = (m[0] == 0) as usize
            + (m[1] == 0) as usize
            + (m[2] == 0) as usize
            + (m[3] == 0) as usize;
        let c1 = (m[0] == 1) as usize
            + (m[1] == 1) as usize
            + (m[2] == 1) as usize
            + (m[3] == 1) as usize;
        if c0 == n[0] && c1 == n[1] {
            return s;
        }
        s += 1;
    }
    panic!("index out of range");
}

const SYM4_TABLE: [u8; 81] = {
    let mut t = [0u8; 81];
    let mut f = 0;
    while f < 81 {
        t[f] = sym4_slot(f / 27, (f / 9) % 3, (f / 3) % 3, f % 3) as u8;
        f += 1;
    }
    t
};

/// Fully symmetric rank-4 tensor in 3D, one stored value per index orbit.
///
/// Indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTensor4 {
    c: [f64; 15],
}

impl SymTensor4 {
    pub const fn zeros() -> Self {
        Self { c: [0.0; 15] }
    }

    pub fn from_components(c: [f64; 15]) -> Self {
        Self { c }
    }

    /// Builds a tensor whose only nonzero components are `A_iijj` (and its
    /// permutations), e.g. the moment of a distribution with diagonal
    /// parameter matrix.
    #[allow(clippy::needless_range_loop)]
    pub fn from_iijj(m: &[[f64; 3]; 3]) -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            for j in i..3 {
                t.set(i, i, j, j, m[i][j]);
            }
        }
        t
    }

    /// Index of the stored component for `(i, j, k, l)` in any order.
    pub fn slot(i: usize, j: usize, k: usize, l: usize) -> usize {
        SYM4_TABLE[27 * i + 9 * j + 3 * k + l] as usize
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.c[Self::slot(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.c[Self::slot(i, j, k, l)] = v;
    }

    pub fn components(&self) -> &[f64; 15] {
        &self.c
    }

    /// The 3×3 view `A_iijj`.
    pub fn iijj(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.get(i, i, j, j);
            }
        }
        m
    }

    /// `Σ_j A_iijj`, which equals `a_i` for a moment tensor.
    pub fn contraction(&self, i: usize) -> f64 {
        (0..3).map(|j| self.get(i, i, j, j)).sum()
    }

    /// Largest component whose multi-index contains some value an odd
    /// number of times.
    pub fn max_odd_component(&self) -> f64 {
        SYM4_INDICES
            .iter()
            .zip(self.c.iter())
            .filter(|(m, _)| (0..3).any(|v| m.iter().filter(|&&x| x == v).count() % 2 == 1))
            .map(|(_, c)| c.abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.c
            .iter()
            .zip(other.c.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Default for SymTensor4 {
    fn default() -> Self {
        Self::zeros()
    }
}

/// Symmetric rank-2 tensor in 3D, stored as `[00, 01, 02, 11, 12, 22]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor2 {
    c: [f64; 6],
}

impl SymTensor2 {
    pub fn from_components(c: [f64; 6]) -> Self {
        Self { c }
    }

    fn slot(i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        match (i, j) {
            (0, 0) => 0,
            (0, 1) => 1,
            (0, 2) => 2,
            (1, 1) => 3,
            (1, 2) => 4,
            (2, 2) => 5,
            _ => panic!("index out of range"),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.c[Self::slot(i, j)]
    }

    pub fn components(&self) -> &[f64; 6] {
        &self.c
    }

    pub fn diagonal(&self) -> EigenTriple {
        EigenTriple([self.c[0], self.c[3], self.c[5]])
    }

    pub fn max_off_diagonal(&self) -> f64 {
        self.c[1].abs().max(self.c[2].abs()).max(self.c[4].abs())
    }

    pub fn trace(&self) -> f64 {
        self.c[0] + self.c[3] + self.c[5]
    }
}
