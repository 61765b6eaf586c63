use acg_closure::acg::{self, ClosureMethod, EigenTriple};
use acg_closure::carlson::{rc, rd, rd_partials, rf, rj};
use acg_closure::lambert::w_m1;
use acg_closure::relation::f_axial;
use proptest::prelude::*;

fn rel(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

fn arg() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

/// Unit-determinant parameter triple with components roughly in [1e-2, 1e2].
fn det_one() -> impl Strategy<Value = EigenTriple> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(u, v)| {
        let (b1, b2) = (10f64.powf(u / 2.0), 10f64.powf(v / 2.0));
        EigenTriple::new(b1, b2, 1.0 / (b1 * b2))
    })
}

fn simplex_interior() -> impl Strategy<Value = EigenTriple> {
    (0.01f64..1.0, 0.01f64..1.0, 0.01f64..1.0).prop_map(|(x, y, z)| {
        let s = x + y + z;
        EigenTriple::new(x / s, y / s, z / s)
    })
}

proptest! {
    #[test]
    fn homogeneity(x in arg(), y in arg(), z in arg(), p in arg(), l in arg()) {
        prop_assert!(rel(rf(l * x, l * y, l * z).unwrap(), rf(x, y, z).unwrap() / l.sqrt()) < 1e-13);
        prop_assert!(rel(rd(l * x, l * y, l * z).unwrap(), rd(x, y, z).unwrap() / (l * l.sqrt())) < 1e-13);
        prop_assert!(rel(rj(l * x, l * y, l * z, l * p).unwrap(), rj(x, y, z, p).unwrap() / (l * l.sqrt())) < 1e-13);
        prop_assert!(rel(rc(l * x, l * y).unwrap(), rc(x, y).unwrap() / l.sqrt()) < 1e-13);
    }

    #[test]
    fn symmetry(x in arg(), y in arg(), z in arg(), p in arg()) {
        let f = rf(x, y, z).unwrap();
        prop_assert!(rel(rf(z, x, y).unwrap(), f) < 1e-14);
        prop_assert!(rel(rf(y, z, x).unwrap(), f) < 1e-14);
        prop_assert!(rel(rd(y, x, z).unwrap(), rd(x, y, z).unwrap()) < 1e-14);
        prop_assert!(rel(rj(y, z, x, p).unwrap(), rj(x, y, z, p).unwrap()) < 1e-14);
    }

    #[test]
    fn sum_identities(x in 0.05f64..50.0, y in 0.05f64..50.0, z in 0.05f64..50.0) {
        let s = rd(x, y, z).unwrap() + rd(y, z, x).unwrap() + rd(z, x, y).unwrap();
        prop_assert!(rel(s, 3.0 / (x * y * z).sqrt()) < 1e-12);
        let w = x * rd(y, z, x).unwrap() + y * rd(z, x, y).unwrap() + z * rd(x, y, z).unwrap();
        prop_assert!(rel(w, 3.0 * rf(x, y, z).unwrap()) < 1e-12);
        prop_assert!(rel(rj(x, y, z, z).unwrap(), rd(x, y, z).unwrap()) < 1e-12);
    }

    #[test]
    fn partials_euler_relation(x in arg(), y in arg(), z in arg()) {
        // R_D is homogeneous of degree -3/2
        let (dx, dy, dz) = rd_partials(x, y, z).unwrap();
        prop_assert!(rel(x * dx + y * dy + z * dz, -1.5 * rd(x, y, z).unwrap()) < 1e-9);
    }

    #[test]
    fn lambert_residual(e in -12.0f64..-0.435) {
        let x = -(10f64.powf(e));
        let w = w_m1(x).unwrap();
        prop_assert!(w <= -1.0);
        prop_assert!(((w * w.exp() - x) / x).abs() < 1e-13);
    }

    #[test]
    fn f_axial_matches_rd(x in arg()) {
        prop_assert!(rel(f_axial(x).unwrap(), x * rd(1.0, 1.0, x * x).unwrap() / 3.0) < 1e-11);
    }

    #[test]
    fn a_on_simplex(b in det_one()) {
        let a = acg::a_from_b(&b).unwrap();
        prop_assert!((a.sum() - 1.0).abs() < 1e-12);
        // ordering of a is the reverse of b
        for i in 0..3 {
            for j in 0..3 {
                if b[i] < b[j] {
                    prop_assert!(a[i] > a[j]);
                }
            }
        }
    }

    #[test]
    fn roundtrip(b in det_one()) {
        let inv = acg::b_from_a_newton(&acg::a_from_b(&b).unwrap()).unwrap();
        prop_assert!(inv.b.max_rel_diff(&b) < 1e-9);
        prop_assert!(inv.iterations <= 30);
    }

    #[test]
    fn contraction_and_parity(a in simplex_interior()) {
        let c = acg::closure(&a, ClosureMethod::Exact).unwrap();
        for i in 0..3 {
            prop_assert!((c.moment.contraction(i) - a[i]).abs() < 1e-12);
        }
        prop_assert_eq!(c.moment.max_odd_component(), 0.0);
        // positivity of the diagonal moments
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!(c.moment.get(i, i, j, j) > 0.0);
            }
        }
    }

    #[test]
    fn closure_is_permutation_equivariant(a in simplex_interior()) {
        let p = EigenTriple::new(a[2], a[0], a[1]);
        let m = acg::closure(&a, ClosureMethod::Exact).unwrap().moment;
        let n = acg::closure(&p, ClosureMethod::Exact).unwrap().moment;
        let map = [1, 2, 0];
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((m.get(i, i, j, j) - n.get(map[i], map[i], map[j], map[j])).abs() < 1e-10);
            }
        }
    }
}
