//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::{Command, ExitCode};

use acg_closure::acg::{self, ClosureMethod, EigenTriple};
use acg_closure::carlson::{rd, rf, rj};
use acg_closure::cli::{SweepLine, SweepSpec};
use acg_closure::lambert::{w_m1, BRANCH_POINT};
use acg_closure::oracle::{self, HyperParams};
use acg_closure::relation;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Unit-determinant triple with every component in `[lo, hi]`.
fn det_one(rng: &mut StdRng, lo: f64, hi: f64) -> EigenTriple {
    loop {
        let b1 = log_uniform(rng, lo, hi);
        let b2 = log_uniform(rng, lo, hi);
        let b3 = 1.0 / (b1 * b2);
        if (lo..=hi).contains(&b3) {
            return EigenTriple::new(b1, b2, b3);
        }
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lemma_rd(x: f64) -> f64 {
    x * rd(1.0, 1.0, x * x).unwrap() / 3.0
}

fn c01_lemma_below_one() -> Outcome {
    let worst = log_space(1e-3, 0.999, 500)
        .into_iter()
        .map(|x| {
            let s = (1.0 - x) * (1.0 + x);
            let closed = 1.0 / s - x * x.acos() / s.powf(1.5);
            rel(lemma_rd(x), closed)
        })
        .fold(0.0, f64::max);
    check(
        worst <= 1e-11,
        format!("max rel err {worst:.2e} (tol 1e-11)"),
    )
}

fn c02_lemma_above_one() -> Outcome {
    let worst = log_space(1.001, 1e3, 500)
        .into_iter()
        .map(|x: f64| {
            let s = (x - 1.0) * (x + 1.0);
            // arctanh(u), u = √(1 − 1/x²), written as ln(x(1 + u))
            let u = s.sqrt() / x;
            let closed = x * (x * (1.0 + u)).ln() / s.powf(1.5) - 1.0 / s;
            rel(lemma_rd(x), closed)
        })
        .fold(0.0, f64::max);
    check(
        worst <= 1e-11,
        format!("max rel err {worst:.2e} (tol 1e-11)"),
    )
}

fn c03_sum_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let [x, y, z] = [0; 3].map(|_| rng.random_range(0.05..50.0));
        let s = rd(x, y, z).unwrap() + rd(y, z, x).unwrap() + rd(z, x, y).unwrap();
        worst = worst.max(rel(s, 3.0 / (x * y * z).sqrt()));
        let w = x * rd(y, z, x).unwrap() + y * rd(z, x, y).unwrap() + z * rd(x, y, z).unwrap();
        worst = worst.max(rel(w, 3.0 * rf(x, y, z).unwrap()));
    }
    check(
        worst <= 1e-12,
        format!("max rel err {worst:.2e} (tol 1e-12)"),
    )
}

fn c04_limits() -> Outcome {
    let small = 1e-6 * rd(1.0, 1.0, 1e-12).unwrap();
    let x = 1.0 - 1e-9;
    let near = x * rd(1.0, 1.0, x * x).unwrap();
    let large = 1e6 * rd(1.0, 1.0, 1e12).unwrap();
    check(
        (small - 3.0).abs() <= 1e-4 && (near - 1.0).abs() <= 1e-6 && large <= 1e-8,
        format!("x=1e-6: {small:.8}, x=1-1e-9: {near:.10}, x=1e6: {large:.2e}"),
    )
}

fn c05_lambert() -> Outcome {
    let top = (-BRANCH_POINT).log10();
    let mut worst = 0.0f64;
    for k in 0..100 {
        // from -1e-12 up to (not including) the branch point
        let x = -(10f64.powf(-12.0 + (top + 12.0) * k as f64 / 100.0));
        let w = w_m1(x).unwrap();
        worst = worst.max(((w * w.exp() - x) / x).abs());
    }
    let at_branch = w_m1(-(-1f64).exp()).unwrap();
    check(
        worst <= 1e-13 && (at_branch + 1.0).abs() <= 1e-8,
        format!("max residual {worst:.2e}, W(-1/e) = {at_branch}"),
    )
}

fn c06_oracles() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut worst_r = 0.0f64;
    for _ in 0..50 {
        let [x, y, z, p] = [0; 4].map(|_| log_uniform(&mut rng, 0.05, 50.0));
        worst_r = worst_r
            .max(rel(
                rf(x, y, z).unwrap(),
                oracle::r_hyper(&HyperParams::rf(x, y, z)).unwrap(),
            ))
            .max(rel(
                rd(x, y, z).unwrap(),
                oracle::r_hyper(&HyperParams::rd(x, y, z)).unwrap(),
            ))
            .max(rel(
                rj(x, y, z, p).unwrap(),
                oracle::r_hyper(&HyperParams::rj(x, y, z, p)).unwrap(),
            ));
    }
    let (mut worst_a, mut worst_s4, mut worst_t) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let b = det_one(&mut rng, 0.1, 10.0);
        let a = acg::a_from_b(&b).unwrap();
        let sphere = oracle::sphere_moments(&b).unwrap();
        for i in 0..3 {
            worst_a = worst_a.max((sphere.second.get(i, i) - a[i]).abs());
        }
        worst_a = worst_a.max(sphere.second.max_off_diagonal());
        let exact = acg::exact_closure(&a, &b).unwrap();
        worst_s4 = worst_s4.max(exact.max_abs_diff(&sphere.fourth));
        worst_t = worst_t.max(exact.max_abs_diff(&oracle::aiv_t_integral(&b).unwrap()));
    }
    check(
        worst_r <= 1e-8 && worst_a <= 1e-7 && worst_s4 <= 1e-6 && worst_t <= 1e-6,
        format!(
            "r_hyper {worst_r:.2e} (1e-8), a vs sphere {worst_a:.2e} (1e-7), \
             closure vs sphere {worst_s4:.2e} (1e-6), vs t-integral {worst_t:.2e} (1e-6)"
        ),
    )
}

fn c07_roundtrip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let (mut worst, mut iters) = (0.0f64, 0usize);
    for _ in 0..50 {
        let b = det_one(&mut rng, 0.05, 20.0);
        let inv = acg::b_from_a_newton(&acg::a_from_b(&b).unwrap()).unwrap();
        worst = worst.max(inv.b.max_rel_diff(&b));
        iters = iters.max(inv.iterations);
    }
    check(
        worst <= 1e-9 && iters <= 30,
        format!("max rel err {worst:.2e} (tol 1e-9), max iterations {iters}"),
    )
}

fn c08_contraction() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let mut v = [0; 3].map(|_| rng.random_range(0.0..1.0f64));
        let method = if k % 2 == 0 {
            ClosureMethod::Exact
        } else {
            v[rng.random_range(0..3)] = 0.0;
            ClosureMethod::Planar
        };
        let s: f64 = v.iter().sum();
        let a = EigenTriple(v.map(|x| x / s));
        let c = acg::closure(&a, method).unwrap();
        for i in 0..3 {
            worst = worst.max((c.moment.contraction(i) - a[i]).abs());
        }
    }
    check(
        worst <= 1e-12,
        format!("max |sum_j A_iijj - a_i| {worst:.2e} (tol 1e-12)"),
    )
}

fn c09_planar_limit() -> Outcome {
    let eps = 1e-4;
    let mut worst = 0.0f64;
    for k in 0..10 {
        let a1 = 0.05 + 0.1 * k as f64;
        let a = EigenTriple::new(a1 * (1.0 - eps), (1.0 - a1) * (1.0 - eps), eps);
        let exact = acg::closure(&a, ClosureMethod::Exact).unwrap().moment;
        let planar = acg::planar_closure(&EigenTriple::new(a1, 1.0 - a1, 0.0)).unwrap();
        worst = worst.max(exact.max_abs_diff(&planar));
    }
    let uni = acg::closure(
        &EigenTriple::new(1.0, 0.0, 0.0),
        ClosureMethod::Unidirectional,
    )
    .unwrap()
    .moment
    .get(0, 0, 0, 0);
    check(
        worst <= 1e-3 && uni == 1.0,
        format!("max componentwise diff {worst:.2e} (tol 1e-3), unidirectional A_1111 = {uni}"),
    )
}

fn c10_isotropic() -> Outcome {
    let m = acg::closure(&EigenTriple::isotropic_a(), ClosureMethod::Exact)
        .unwrap()
        .moment;
    let sphere = oracle::sphere_moments(&EigenTriple::new(1.0, 1.0, 1.0))
        .unwrap()
        .fourth;
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { 0.2 } else { 1.0 / 15.0 };
            worst = worst.max((m.get(i, i, j, j) - want).abs());
            worst = worst.max((sphere.get(i, i, j, j) - want).abs());
        }
    }
    check(
        worst <= 1e-8,
        format!("max deviation from 1/5, 1/15 {worst:.2e} (tol 1e-8)"),
    )
}

fn c11_a_to_zero() -> Outcome {
    let spec = SweepSpec {
        range: (1e-6, 1e-2),
        ..SweepSpec::new(SweepLine::AToZero, 200)
    };
    let rows = spec.rows().map_err(|e| e.to_string())?;
    let ordered = rows.iter().all(|r| r[5] < r[6]);
    let e1 = rows[0][5];
    let e2_6 = rows[0][6];
    let (_, exact8) = acg::axial_aiiii(1e-8).unwrap();
    let e2_8 = rel(acg::aiiii_asym2(1e-8).unwrap(), exact8);
    check(
        ordered && e1 <= 0.05 && e2_8 > 0.5 * e2_6,
        format!(
            "asym1 < asym2 pointwise: {ordered}, asym1 err at 1e-6 {e1:.2e}, \
             asym2 err {e2_6:.3} at 1e-6 vs {e2_8:.3} at 1e-8"
        ),
    )
}

fn c12_a_to_one() -> Outcome {
    let spec = SweepSpec {
        range: (1e-4, 0.1),
        ..SweepSpec::new(SweepLine::AToOne, 200)
    };
    let rows = spec.rows().map_err(|e| e.to_string())?;
    let ordered = rows.iter().all(|r| r[6] <= r[5]);
    let (e4, e5) = (rows[0][5], rows[0][6]);
    check(
        ordered && e4 <= 1e-4 && e5 <= 1e-4,
        format!("asym5 <= asym4 pointwise: {ordered}, errors at 1-a=1e-4: {e4:.2e}, {e5:.2e}"),
    )
}

fn c13_arccos() -> Outcome {
    let errs: Vec<f64> = log_space(10.0, 1000.0, 100)
        .into_iter()
        .map(|x: f64| {
            let exact = x.acosh().powi(2);
            let l = (2.0 * x).ln();
            assert!((relation::arccos_sq_real(x).unwrap() + exact).abs() <= 1e-12 * exact);
            rel(l * l, exact)
        })
        .collect();
    let mono = errs.windows(2).all(|w| w[1] < w[0]);
    check(
        mono,
        format!(
            "monotone decrease {mono}, {:.2e} at 10 to {:.2e} at 1000",
            errs[0],
            errs[errs.len() - 1]
        ),
    )
}

fn c14_cli() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_acg-closure");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for name in ["run1.csv", "run2.csv"] {
        let path = dir.path().join(name);
        let status = Command::new(bin)
            .args(["sweep", "a_to_0", "--points", "100", "--out"])
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("sweep exited with {status}"));
        }
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let identical = outputs[0] == outputs[1] && !outputs[0].is_empty();
    let verify = Command::new(bin)
        .arg("verify")
        .output()
        .map_err(|e| e.to_string())?;
    let code = verify.status.code();
    check(
        identical && code == Some(0),
        format!("sweep byte-identical: {identical}, verify exit code {code:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("lemma below one", c01_lemma_below_one),
        ("lemma above one", c02_lemma_above_one),
        ("rd sum identities", c03_sum_identities),
        ("limits of x rd(1,1,x^2)", c04_limits),
        ("lambert residual", c05_lambert),
        ("oracle equivalence", c06_oracles),
        ("inversion roundtrip", c07_roundtrip),
        ("contraction identity", c08_contraction),
        ("planar limit", c09_planar_limit),
        ("isotropic values", c10_isotropic),
        ("a -> 0 asymptote ordering", c11_a_to_zero),
        ("a -> 1 asymptote ordering", c12_a_to_one),
        ("arccos asymptote error", c13_arccos),
        ("cli determinism and verify", c14_cli),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag}  {name}: {detail}", k + 1);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
