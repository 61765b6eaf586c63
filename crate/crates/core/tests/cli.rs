use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acg-closure"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_seventeen_digits() {
    let o = run(&["eval", "rd", "1", "1", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1.0000000000000000\n");
    let v: f64 = stdout(&run(&["eval", "f_axial", "0.5"]))
        .trim()
        .parse()
        .unwrap();
    assert!((v - 0.527_200_282_562_569_8).abs() < 1e-15);
    let v: f64 = stdout(&run(&["eval", "w_m1", "-0.1"]))
        .trim()
        .parse()
        .unwrap();
    assert!((v + 3.577_152_063_957_297).abs() < 1e-14);
}

#[test]
fn exit_codes() {
    let o = run(&["eval", "rf", "-1", "1", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("x must be >= 0"));
    assert_eq!(run(&["eval", "rd", "1", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "nope", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["sweep", "a_to_0", "--range", "1:0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["sweep", "a_to_0", "--range", "bad"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["closure", "0.5", "0.3", "0.2", "--method", "planar"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn closure_csv() {
    let o = run(&[
        "closure", "0.5", "0.5", "0", "--method", "planar", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .skip(1)
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(row, vec![0.375, 0.125, 0.0]);

    let o = run(&[
        "closure", "0.333333", "0.333333", "0.333334", "--format", "csv",
    ]);
    for (i, line) in stdout(&o).lines().skip(1).take(3).enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|c| c.parse().unwrap())
            .collect();
        for (j, v) in row.iter().enumerate() {
            let want = if i == j { 0.2 } else { 1.0 / 15.0 };
            assert!((v - want).abs() < 1e-5);
        }
    }

    let o = run(&["closure", "1", "0", "0", "--format", "csv"]);
    assert!(stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("A_11jj,1e0,"));
}

#[test]
fn sweep_stdout_matches_file_and_is_lf() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lemma.csv");
    let o = run(&[
        "sweep",
        "lemma",
        "--points",
        "20",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let file = std::fs::read_to_string(&path).unwrap();
    let printed = stdout(&run(&["sweep", "lemma", "--points", "20"]));
    assert_eq!(file, printed);
    assert!(!file.contains('\r'));
    assert!(file.starts_with("x,lhs,rhs,relerr\n"));
    assert_eq!(file.lines().count(), 21);
}

#[test]
fn invert_and_gnuplot() {
    let o = run(&["invert", "0.9", "--format", "csv"]);
    let beta: f64 = stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((beta - 0.028_473_981_420_503_05).abs() < 1e-12);
    let o = run(&["gnuplot", "a_to_1", "--csv", "data.csv"]);
    assert!(stdout(&o).contains("plot 'data.csv'"));
}
