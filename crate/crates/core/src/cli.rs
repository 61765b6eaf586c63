//! Command-line front end: argument definitions, sweeps, the verification
//! report and output formatting. `main.rs` only parses and dispatches.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::acg::{self, Closure, ClosureMethod, EigenTriple};
use crate::carlson::{rc, rd, rf, rj};
use crate::error::{domain, Error, Result};
use crate::lambert::{self, w_m1};
use crate::oracle;
use crate::relation::{self, f_axial};

/// Exit code for domain, convergence and check failures.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for malformed command lines.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "acg-closure",
    version,
    about = "Carlson elliptic integrals and the exact ACG fourth-moment closure"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one function at a point: rc, rf, rd, rj, w_m1, f_axial.
    #[command(allow_negative_numbers = true)]
    Eval {
        function: EvalFunction,
        #[arg(required = true)]
        args: Vec<f64>,
    },
    /// Fourth moment for the second-moment eigenvalues a1 a2 a3.
    #[command(allow_negative_numbers = true)]
    Closure {
        #[arg(num_args = 3, required = true)]
        a: Vec<f64>,
        #[arg(long, default_value = "exact", value_parser = parse_method)]
        method: ClosureMethod,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Parameter eigenvalues b for a1 a2 a3, or beta for a single axial a.
    #[command(allow_negative_numbers = true)]
    Invert {
        #[arg(required = true, num_args = 1..=3)]
        a: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Write figure data as CSV.
    Sweep(SweepArgs),
    /// Run the identity and oracle checks.
    Verify {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print a gnuplot script for a sweep CSV.
    Gnuplot {
        line: SweepLine,
        /// CSV file the script reads.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    pub line: SweepLine,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Range as lo:hi (for a_to_1 this is the range of 1 - a).
    #[arg(long, value_parser = parse_range)]
    pub range: Option<(f64, f64)>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    /// Output file; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFunction {
    Rc,
    Rf,
    Rd,
    Rj,
    #[value(name = "w_m1")]
    WM1,
    #[value(name = "f_axial")]
    FAxial,
}

impl EvalFunction {
    pub fn arity(self) -> usize {
        match self {
            Self::Rc => 2,
            Self::Rf | Self::Rd => 3,
            Self::Rj => 4,
            Self::WM1 | Self::FAxial => 1,
        }
    }

    pub fn eval(self, x: &[f64]) -> Result<f64> {
        if x.len() != self.arity() {
            return Err(domain(
                "eval",
                format!("expected {} arguments, got {}", self.arity(), x.len()),
            ));
        }
        match self {
            Self::Rc => rc(x[0], x[1]),
            Self::Rf => rf(x[0], x[1], x[2]),
            Self::Rd => rd(x[0], x[1], x[2]),
            Self::Rj => rj(x[0], x[1], x[2], x[3]),
            Self::WM1 => w_m1(x[0]),
            Self::FAxial => f_axial(x[0]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Table,
}

fn parse_method(s: &str) -> std::result::Result<ClosureMethod, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound: {e}"))?;
    Ok((lo, hi))
}

/// Value with 17 significant digits, fixed notation for moderate
/// magnitudes (`1` prints as `1.0000000000000000`).
pub fn format_value(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if (-5..16).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, v)
    } else {
        sci
    }
}

/// Shortest decimal that round-trips to `v`, in exponent notation. Used for
/// CSV cells; NaN marks a value outside the domain of its formula.
pub fn format_cell(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:e}")
    }
}

/// Output line of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepLine {
    #[value(name = "a_to_0")]
    AToZero,
    #[value(name = "a_to_1")]
    AToOne,
    #[value(name = "lemma")]
    Lemma,
    #[value(name = "arccos_fig2")]
    ArccosFig2,
}

impl SweepLine {
    pub fn name(self) -> &'static str {
        match self {
            Self::AToZero => "a_to_0",
            Self::AToOne => "a_to_1",
            Self::Lemma => "lemma",
            Self::ArccosFig2 => "arccos_fig2",
        }
    }

    /// Default sweep variable range (for `a_to_1`, the range of `1 − a`).
    pub fn default_range(self) -> (f64, f64) {
        match self {
            Self::AToZero => (1e-6, 0.1),
            Self::AToOne => (1e-4, 0.3),
            Self::Lemma => (0.01, 0.99),
            Self::ArccosFig2 => (0.01, 1000.0),
        }
    }

    pub fn header(self) -> &'static [&'static str] {
        match self {
            Self::AToZero => &[
                "a",
                "b",
                "Aiiii_exact",
                "Aiiii_asym1",
                "Aiiii_asym2",
                "relerr_asym1",
                "relerr_asym2",
            ],
            Self::AToOne => &[
                "a",
                "b",
                "Aiiii_exact",
                "Aiiii_asym4",
                "Aiiii_asym5",
                "relerr_asym4",
                "relerr_asym5",
            ],
            Self::Lemma => &["x", "lhs", "rhs", "relerr"],
            Self::ArccosFig2 => &["x", "arccos_sq", "neg_ln2x_sq", "relerr"],
        }
    }
}

impl FromStr for SweepLine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(s, true)
            .map_err(|_| domain("sweep", format!("unknown line `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

/// What to sweep and over which grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub line: SweepLine,
    pub range: (f64, f64),
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    /// Default grid for `line`: its figure range, log-spaced.
    pub fn new(line: SweepLine, points: usize) -> Self {
        Self {
            line,
            range: line.default_range(),
            points,
            spacing: Spacing::Log,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(domain(
                "sweep",
                format!("range must satisfy lo < hi, got {lo}:{hi}"),
            ));
        }
        if self.points < 2 {
            return Err(domain(
                "sweep",
                format!("need at least 2 points, got {}", self.points),
            ));
        }
        if self.spacing == Spacing::Log && lo <= 0.0 {
            return Err(domain("sweep", "log spacing requires lo > 0"));
        }
        Ok(())
    }

    /// Grid of the sweep variable, endpoints included.
    pub fn grid(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let (lo, hi) = self.range;
        let n = self.points - 1;
        Ok((0..=n)
            .map(|k| {
                let s = k as f64 / n as f64;
                if k == 0 {
                    lo
                } else if k == n {
                    hi
                } else {
                    match self.spacing {
                        Spacing::Log => (lo.ln() + s * (hi.ln() - lo.ln())).exp(),
                        Spacing::Linear => lo + s * (hi - lo),
                    }
                }
            })
            .collect())
    }

    /// Rows of the sweep in grid order.
    pub fn rows(&self) -> Result<Vec<Vec<f64>>> {
        let grid = self.grid()?;
        grid.iter().map(|&v| sweep_row(self.line, v)).collect()
    }

    /// The CSV document: header row, comma separated, LF line endings.
    pub fn csv(&self) -> Result<String> {
        let rows = self.rows()?;
        let mut s = self.line.header().join(",");
        s.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(|&v| format_cell(v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        Ok(s)
    }
}

fn rel_err(approx: f64, exact: f64) -> f64 {
    ((approx - exact) / exact).abs()
}

fn sweep_row(line: SweepLine, v: f64) -> Result<Vec<f64>> {
    Ok(match line {
        SweepLine::AToZero => {
            let a = v;
            let (b, exact) = acg::axial_aiiii(a)?;
            let a1 = acg::aiiii_asym1(a).unwrap_or(f64::NAN);
            let a2 = acg::aiiii_asym2(a).unwrap_or(f64::NAN);
            vec![a, b, exact, a1, a2, rel_err(a1, exact), rel_err(a2, exact)]
        }
        SweepLine::AToOne => {
            let a = 1.0 - v;
            let (b, exact) = acg::axial_aiiii(a)?;
            let a4 = acg::aiiii_asym4(a).unwrap_or(f64::NAN);
            let a5 = acg::aiiii_asym5(a).unwrap_or(f64::NAN);
            vec![a, b, exact, a4, a5, rel_err(a4, exact), rel_err(a5, exact)]
        }
        SweepLine::Lemma => {
            let lhs = v * rd(1.0, 1.0, v * v)? / 3.0;
            let rhs = relation::f_closed_form(v)?;
            vec![v, lhs, rhs, rel_err(lhs, rhs)]
        }
        SweepLine::ArccosFig2 => {
            let exact = relation::arccos_sq_real(v)?;
            let asym = relation::arccos_sq_asymptote(v).unwrap_or(f64::NAN);
            vec![v, exact, asym, rel_err(asym, exact)]
        }
    })
}

/// gnuplot script plotting the error columns of a sweep CSV.
pub fn gnuplot_recipe(line: SweepLine, csv: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# generate the data with: acg-closure sweep {} --out {csv}",
        line.name()
    );
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set logscale xy");
    let _ = writeln!(s, "set format y '10^{{%L}}'");
    match line {
        SweepLine::AToZero => {
            let _ = writeln!(s, "set xlabel 'a'");
            let _ = writeln!(s, "set ylabel 'relative error of A_iiii'");
            let _ = writeln!(
                s,
                "plot '{csv}' using 1:6 with lines, '' using 1:7 with lines"
            );
        }
        SweepLine::AToOne => {
            let _ = writeln!(s, "set xlabel '1 - a'");
            let _ = writeln!(s, "set ylabel 'relative error of A_iiii'");
            let _ = writeln!(
                s,
                "plot '{csv}' using (1-$1):6 with lines, '' using (1-$1):7 with lines"
            );
        }
        SweepLine::Lemma => {
            let _ = writeln!(s, "unset logscale y");
            let _ = writeln!(s, "set format y '%g'");
            let _ = writeln!(s, "set xlabel 'x'");
            let _ = writeln!(
                s,
                "plot '{csv}' using 1:2 with lines, '' using 1:3 with points"
            );
        }
        SweepLine::ArccosFig2 => {
            let _ = writeln!(s, "set xlabel 'x'");
            let _ = writeln!(s, "set ylabel 'relative error'");
            let _ = writeln!(s, "plot '{csv}' using 1:4 with lines");
        }
    }
    s
}

/// One row of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Results of [`verify`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn record(&mut self, name: &'static str, err: Result<f64>, tolerance: f64) {
        let max_error = err.unwrap_or(f64::INFINITY);
        self.checks.push(Check {
            name,
            max_error,
            tolerance,
            passed: max_error <= tolerance,
        });
    }

    /// Records a check that is a yes/no condition.
    fn record_flag(&mut self, name: &'static str, ok: Result<bool>) {
        let max_error = if matches!(ok, Ok(true)) { 0.0 } else { 1.0 };
        self.checks.push(Check {
            name,
            max_error,
            tolerance: 0.0,
            passed: max_error == 0.0,
        });
    }

    pub fn render(&self, format: Format) -> String {
        let mut s = String::new();
        match format {
            Format::Csv => {
                s.push_str("check,max_error,tolerance,pass\n");
                for c in &self.checks {
                    let _ = writeln!(
                        s,
                        "{},{},{},{}",
                        c.name,
                        format_cell(c.max_error),
                        format_cell(c.tolerance),
                        c.passed
                    );
                }
            }
            Format::Table => {
                let _ = writeln!(
                    s,
                    "{:<28} {:>12} {:>12}  result",
                    "check", "max error", "tolerance"
                );
                for c in &self.checks {
                    let _ = writeln!(
                        s,
                        "{:<28} {:>12.3e} {:>12.1e}  {}",
                        c.name,
                        c.max_error,
                        c.tolerance,
                        if c.passed { "pass" } else { "FAIL" }
                    );
                }
                let _ = writeln!(
                    s,
                    "overall: {}",
                    if self.passed() { "pass" } else { "FAIL" }
                );
            }
        }
        s
    }
}

/// Deterministic points in `[0, 1)³` (additive recurrence on the plastic
/// number), so the report is reproducible without a random generator.
fn sample_unit(n: usize) -> Vec<[f64; 3]> {
    let g = 1.220_744_084_605_759_5_f64;
    let alpha = [1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g)];
    (1..=n)
        .map(|k| alpha.map(|a| (0.5 + a * k as f64).fract()))
        .collect()
}

fn log_map(u: f64, lo: f64, hi: f64) -> f64 {
    (lo.ln() + u * (hi.ln() - lo.ln())).exp()
}

fn max_over<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    let mut m = 0.0f64;
    for v in it {
        m = m.max(v?);
    }
    Ok(m)
}

/// Unit-determinant triples with log-uniform components in `[lo, hi]`
/// before normalization.
fn det_one_samples(n: usize, lo: f64, hi: f64) -> Vec<EigenTriple> {
    sample_unit(n)
        .into_iter()
        .map(|u| {
            let b = u.map(|v| log_map(v, lo, hi));
            let s = (b[0] * b[1] * b[2]).cbrt();
            EigenTriple(b.map(|v| v / s))
        })
        .collect()
}

/// Cross-module identity and oracle checks.
pub fn verify() -> VerifyReport {
    let mut r = VerifyReport::default();
    let triples: Vec<[f64; 3]> = sample_unit(200)
        .into_iter()
        .map(|u| u.map(|v| log_map(v, 0.05, 50.0)))
        .collect();

    r.record(
        "rd_sum_identity",
        max_over(triples.iter().map(|&[x, y, z]| {
            let s = rd(x, y, z)? + rd(y, z, x)? + rd(z, x, y)?;
            Ok(rel_err(s, 3.0 / (x * y * z).sqrt()))
        })),
        1e-12,
    );
    r.record(
        "rd_weighted_sum_identity",
        max_over(triples.iter().map(|&[x, y, z]| {
            let s = x * rd(y, z, x)? + y * rd(z, x, y)? + z * rd(x, y, z)?;
            Ok(rel_err(s, 3.0 * rf(x, y, z)?))
        })),
        1e-12,
    );

    let log_grid = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n)
            .map(|k| log_map(k as f64 / (n - 1) as f64, lo, hi))
            .collect()
    };
    r.record(
        "lemma_below_one",
        max_over(log_grid(1e-3, 0.999, 500).into_iter().map(|x| {
            Ok(rel_err(
                x * rd(1.0, 1.0, x * x)? / 3.0,
                relation::f_closed_form(x)?,
            ))
        })),
        1e-11,
    );
    r.record(
        "lemma_above_one",
        max_over(log_grid(1.001, 1e3, 500).into_iter().map(|x| {
            Ok(rel_err(
                x * rd(1.0, 1.0, x * x)? / 3.0,
                relation::f_closed_form(x)?,
            ))
        })),
        1e-11,
    );
    r.record(
        "limit_xRD_3",
        rd(1.0, 1.0, 1e-12).map(|v| (1e-6 * v - 3.0).abs()),
        1e-4,
    );
    let x1 = 1.0 - 1e-9;
    r.record(
        "limit_xRD_1",
        rd(1.0, 1.0, x1 * x1).map(|v| (x1 * v - 1.0).abs()),
        1e-6,
    );
    r.record("limit_xRD_0", rd(1.0, 1.0, 1e12).map(|v| 1e6 * v), 1e-8);

    r.record(
        "lambert_residual",
        max_over(
            log_grid(1e-12, -lambert::BRANCH_POINT * (1.0 - 1e-12), 100)
                .into_iter()
                .map(|m| {
                    let x = -m;
                    let w = w_m1(x)?;
                    Ok(((w * w.exp() - x) / x).abs())
                }),
        ),
        1e-13,
    );
    r.record(
        "lambert_branch_point",
        w_m1(lambert::BRANCH_POINT).map(|w| (w + 1.0).abs()),
        1e-8,
    );

    let oracle_args: Vec<[f64; 4]> = sample_unit(50)
        .into_iter()
        .zip(sample_unit(57).into_iter().skip(7))
        .map(|(u, v)| [u[0], u[1], u[2], v[0]].map(|s| log_map(s, 0.05, 50.0)))
        .collect();
    r.record(
        "oracle_r_hyper",
        max_over(oracle_args.iter().map(|&[x, y, z, p]| {
            let e1 = rel_err(
                rf(x, y, z)?,
                oracle::r_hyper(&oracle::HyperParams::rf(x, y, z))?,
            );
            let e2 = rel_err(
                rd(x, y, z)?,
                oracle::r_hyper(&oracle::HyperParams::rd(x, y, z))?,
            );
            let e3 = rel_err(
                rj(x, y, z, p)?,
                oracle::r_hyper(&oracle::HyperParams::rj(x, y, z, p))?,
            );
            Ok(e1.max(e2).max(e3))
        })),
        1e-8,
    );

    let bs = det_one_samples(4, 0.1, 10.0);
    r.record(
        "oracle_sphere_second",
        max_over(bs.iter().map(|b| {
            let a = acg::a_from_b(b)?;
            let m = oracle::sphere_moments(b)?;
            Ok((0..3)
                .map(|i| (m.second.get(i, i) - a[i]).abs())
                .fold(m.second.max_off_diagonal(), f64::max))
        })),
        1e-7,
    );
    r.record(
        "oracle_sphere_fourth",
        max_over(bs.iter().map(|b| {
            let a = acg::a_from_b(b)?;
            let exact = acg::exact_closure(&a, b)?;
            Ok(exact.max_abs_diff(&oracle::sphere_moments(b)?.fourth))
        })),
        1e-6,
    );
    r.record(
        "oracle_t_integral",
        max_over(det_one_samples(20, 0.1, 10.0).iter().map(|b| {
            let a = acg::a_from_b(b)?;
            let exact = acg::exact_closure(&a, b)?;
            Ok(exact.max_abs_diff(&oracle::aiv_t_integral(b)?))
        })),
        1e-6,
    );

    let rb = det_one_samples(50, 0.05, 20.0);
    r.record(
        "inversion_roundtrip",
        max_over(rb.iter().map(|b| {
            let inv = acg::b_from_a_newton(&acg::a_from_b(b)?)?;
            if inv.iterations > 30 {
                return Ok(f64::INFINITY);
            }
            Ok(inv.b.max_rel_diff(b))
        })),
        1e-9,
    );

    r.record(
        "contraction_identity",
        max_over(sample_unit(100).into_iter().enumerate().map(|(k, u)| {
            let mut a = u.map(|v| 0.02 + v);
            if k % 4 == 0 {
                a[k % 3] = 0.0;
            }
            let s: f64 = a.iter().sum();
            let a = EigenTriple(a.map(|v| v / s));
            let c = acg::closure(&a, ClosureMethod::Exact)?;
            Ok((0..3)
                .map(|i| (c.moment.contraction(i) - a[i]).abs())
                .fold(0.0, f64::max))
        })),
        1e-12,
    );

    r.record(
        "planar_limit",
        max_over((1..=10).map(|k| {
            let a1 = 0.05 + 0.09 * k as f64;
            let eps = 1e-4;
            let a = EigenTriple::new(a1 * (1.0 - eps), (1.0 - a1) * (1.0 - eps), eps);
            let exact = acg::closure(&a, ClosureMethod::Exact)?.moment;
            let planar = acg::planar_closure(&EigenTriple::new(a1, 1.0 - a1, 0.0))?;
            Ok(exact.max_abs_diff(&planar))
        })),
        1e-3,
    );
    r.record(
        "unidirectional",
        acg::closure(&EigenTriple::new(1.0, 0.0, 0.0), ClosureMethod::Exact)
            .map(|c| (c.moment.get(0, 0, 0, 0) - 1.0).abs()),
        0.0,
    );
    r.record(
        "isotropic_values",
        acg::closure(&EigenTriple::isotropic_a(), ClosureMethod::Exact).and_then(|c| {
            let o = oracle::sphere_moments(&EigenTriple::new(1.0, 1.0, 1.0))?.fourth;
            let mut e = c.moment.max_abs_diff(&o);
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { 0.2 } else { 1.0 / 15.0 };
                    e = e.max((c.moment.get(i, i, j, j) - want).abs());
                }
            }
            Ok(e)
        }),
        1e-8,
    );

    r.record_flag(
        "asym_zero_ordering",
        SweepSpec {
            range: (1e-6, 1e-2),
            ..SweepSpec::new(SweepLine::AToZero, 60)
        }
        .rows()
        .map(|rows| rows.iter().all(|row| row[5] < row[6]) && rows[0][5] <= 0.05),
    );
    r.record_flag(
        "asym_one_ordering",
        SweepSpec {
            range: (1e-4, 0.1),
            ..SweepSpec::new(SweepLine::AToOne, 60)
        }
        .rows()
        .map(|rows| rows.iter().all(|row| row[6] <= row[5]) && rows[0][5] <= 1e-4),
    );
    r.record_flag(
        "arccos_asymptote_monotone",
        SweepSpec {
            range: (10.0, 1000.0),
            ..SweepSpec::new(SweepLine::ArccosFig2, 50)
        }
        .rows()
        .map(|rows| rows.windows(2).all(|w| w[1][3] < w[0][3])),
    );
    r
}

fn render_closure(a: &EigenTriple, c: &Closure, format: Format) -> String {
    let m = c.moment.iijj();
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str("row,j=1,j=2,j=3\n");
            for (i, row) in m.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|&v| format_cell(v)).collect();
                let _ = writeln!(s, "A_{0}{0}jj,{1}", i + 1, cells.join(","));
            }
            let cells: Vec<String> = c.b.0.iter().map(|&v| format_cell(v)).collect();
            let _ = writeln!(s, "b,{}", cells.join(","));
        }
        Format::Table => {
            let _ = writeln!(s, "a     = {a}");
            let _ = writeln!(s, "route = {}", c.route);
            for (i, row) in m.iter().enumerate() {
                let cells: Vec<String> = row
                    .iter()
                    .map(|&v| format!("{:>24}", format_value(v)))
                    .collect();
                let _ = writeln!(s, "A_{0}{0}jj {1}", i + 1, cells.join(" "));
            }
            let cells: Vec<String> =
                c.b.0
                    .iter()
                    .map(|&v| format!("{:>24}", format_value(v)))
                    .collect();
            let _ = writeln!(s, "b      {}", cells.join(" "));
        }
    }
    s
}

/// Normalizes a command-line `a` onto the simplex: rejects negative
/// entries, rescales silently within `1e-8` of unit sum and with a warning
/// beyond that.
fn simplex_from_args(a: &[f64], warn: &mut dyn Write) -> Result<EigenTriple> {
    if a.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(domain(
            "closure",
            format!("a = {a:?} must be finite and nonnegative"),
        ));
    }
    let s: f64 = a.iter().sum();
    if s <= 0.0 {
        return Err(domain("closure", "a must have a positive sum"));
    }
    if (s - 1.0).abs() > 1e-8 {
        let _ = writeln!(warn, "warning: a sums to {s}; renormalizing");
    }
    Ok(EigenTriple([a[0] / s, a[1] / s, a[2] / s]))
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Eval { function, args } => {
            if args.len() != function.arity() {
                let _ = writeln!(
                    err,
                    "error: {} takes {} arguments, got {}",
                    function
                        .to_possible_value()
                        .map(|v| v.get_name().to_string())
                        .unwrap_or_default(),
                    function.arity(),
                    args.len()
                );
                return Ok(EXIT_USAGE);
            }
            let v = function.eval(&args)?;
            let _ = writeln!(out, "{}", format_value(v));
        }
        Command::Closure { a, method, format } => {
            let a = simplex_from_args(&a, err)?;
            let c = acg::closure(&a, method)?;
            let _ = write!(out, "{}", render_closure(&a, &c, format));
        }
        Command::Invert { a, format } => match a.len() {
            1 => {
                let beta = acg::axial_invert(a[0])?;
                let _ = match format {
                    Format::Csv => {
                        writeln!(out, "a,beta\n{},{}", format_cell(a[0]), format_cell(beta))
                    }
                    Format::Table => writeln!(out, "beta = {}", format_value(beta)),
                };
            }
            3 => {
                let a = simplex_from_args(&a, err)?;
                let c = acg::closure(&a, ClosureMethod::Exact)?;
                let _ = match format {
                    Format::Csv => {
                        let cells: Vec<String> = c.b.0.iter().map(|&v| format_cell(v)).collect();
                        writeln!(out, "b1,b2,b3\n{}", cells.join(","))
                    }
                    Format::Table => {
                        let cells: Vec<String> = c.b.0.iter().map(|&v| format_value(v)).collect();
                        writeln!(out, "b = ({})  [{}]", cells.join(", "), c.route)
                    }
                };
            }
            n => {
                let _ = writeln!(err, "error: invert takes 1 or 3 values, got {n}");
                return Ok(EXIT_USAGE);
            }
        },
        Command::Sweep(args) => {
            let spec = SweepSpec {
                line: args.line,
                range: args.range.unwrap_or(args.line.default_range()),
                points: args.points,
                spacing: args.spacing.unwrap_or(Spacing::Log),
            };
            let csv = spec.csv()?;
            match args.out {
                Some(path) => std::fs::write(&path, csv).map_err(|e| {
                    domain("sweep", format!("cannot write {}: {e}", path.display()))
                })?,
                None => {
                    let _ = out.write_all(csv.as_bytes());
                }
            }
        }
        Command::Verify { format } => {
            let report = verify();
            let _ = write!(out, "{}", report.render(format));
            if !report.passed() {
                return Ok(EXIT_FAILURE);
            }
        }
        Command::Gnuplot { line, csv } => {
            let csv = csv
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| format!("{}.csv", line.name()));
            let _ = write!(out, "{}", gnuplot_recipe(line, &csv));
        }
    }
    Ok(0)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, &mut stdout.lock(), &mut stderr.lock()),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                0
            }
        }
    }
}
