use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rough_besov::oracle::enumerate_partition_supremum;
use rough_besov::path::{lift, EuclideanPath, GridInterval, TimeGrid};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_roughbesov"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn first_value(out: &Output) -> f64 {
    assert!(out.status.success(), "stderr: {}", stderr(out));
    stdout(out).lines().next().unwrap().parse().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn csv(times: &[f64], rows: &[Vec<f64>]) -> String {
    let dim = rows[0].len();
    let mut s = String::from("t");
    for i in 1..=dim {
        s += &format!(",x{i}");
    }
    s.push('\n');
    for (t, r) in times.iter().zip(rows) {
        s += &t.to_string();
        for v in r {
            s += &format!(",{v}");
        }
        s.push('\n');
    }
    s
}

fn uniform(n: usize, horizon: f64) -> Vec<f64> {
    (0..=n).map(|j| horizon * j as f64 / n as f64).collect()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn norm_of_linear_path() {
    let dir = TempDir::new().unwrap();
    let t = uniform(8, 2.0);
    let rows: Vec<Vec<f64>> = t.iter().map(|t| vec![3.0 * t, 4.0 * t]).collect();
    let f = write(&dir, "lin.csv", &csv(&t, &rows));
    let q = first_value(&run(&["norm", p(&f), "--kind", "QVar", "--p", "2"]));
    assert!((q - 10.0).abs() < 1e-9, "{q}");
    let (delta, pp) = (0.4, 5.0);
    let r = first_value(&run(&["norm", p(&f), "--kind", "RieszV", "--delta", "0.4", "--p", "5"]));
    let expected = 5.0 * 2.0_f64.powf(1.0 - delta + 1.0 / pp);
    assert!((r - expected).abs() < 1e-9 * expected, "{r} vs {expected}");
}

#[test]
fn norm_of_constant_path_is_zero_for_every_kind() {
    let dir = TempDir::new().unwrap();
    let t = uniform(6, 1.0);
    let f = write(&dir, "c.csv", &csv(&t, &vec![vec![1.5]; 7]));
    for kind in ["Hoelder", "QVar", "RieszV", "MixedV", "Nikolskii", "RefinedNikolskii", "FracSobolev"] {
        let v = first_value(&run(&["norm", p(&f), "--kind", kind, "--delta", "0.5", "--p", "3"]));
        assert_eq!(v, 0.0, "{kind}");
    }
}

#[test]
fn norm_json_and_interval() {
    let dir = TempDir::new().unwrap();
    let t = uniform(4, 1.0);
    let rows: Vec<Vec<f64>> = t.iter().map(|t| vec![t * t]).collect();
    let f = write(&dir, "sq.csv", &csv(&t, &rows));
    let out = dir.path().join("n.json");
    let v = first_value(&run(&["norm", p(&f), "--kind", "qvar", "--p", "1", "--interval", "0.25:0.75", "--json", p(&out)]));
    assert!((v - 0.5).abs() < 1e-12);
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["kind"], "QVar");
    assert_eq!(doc["grid_points"], 5);
    assert_eq!(doc["interval"][0], 0.25);
    assert_eq!(doc["value"].as_f64().unwrap(), v);
}

#[test]
fn norm_errors_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.csv", "t,x1\n0,0\n0.5,zz\n1,1\n");
    let out = run(&["norm", p(&bad), "--kind", "QVar", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
    let good = write(&dir, "g.csv", "t,x1\n0,0\n0.5,1\n1,1\n");
    let out = run(&["norm", p(&good), "--kind", "RieszV", "--delta", "0.5", "--p", "1.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("1/δ"), "{}", stderr(&out));
    let out = run(&["norm", p(&good), "--kind", "Bogus"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["norm", p(&good), "--kind", "QVar", "--interval", "0.2:1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["norm", p(&dir.path().join("missing.csv")), "--kind", "QVar"]);
    assert_eq!(out.status.code(), Some(2));
    let nonuni = write(&dir, "nu.csv", "t,x1\n0,0\n0.3,1\n1,1\n");
    let out = run(&["norm", p(&nonuni), "--kind", "Nikolskii", "--delta", "0.5", "--p", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("uniform"));
}

fn sig_json(file: &Path, depth: &str) -> serde_json::Value {
    let out = run(&["sig", p(file), "--depth", depth]);
    assert!(out.status.success(), "{}", stderr(&out));
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn signatures() {
    let dir = TempDir::new().unwrap();
    let seg = write(&dir, "seg.csv", "t,x1,x2\n0,0,0\n1,2,-1\n");
    let v = sig_json(&seg, "3");
    let a = [2.0, -1.0];
    for i in 0..2 {
        assert!((v["levels"][1][i].as_f64().unwrap() - a[i]).abs() < 1e-15);
        for j in 0..2 {
            assert!((v["levels"][2][i][j].as_f64().unwrap() - a[i] * a[j] / 2.0).abs() < 1e-15);
            for k in 0..2 {
                let e = a[i] * a[j] * a[k] / 6.0;
                assert!((v["levels"][3][i][j][k].as_f64().unwrap() - e).abs() < 1e-15);
            }
        }
    }
    // L-path: e1 then e2 gives S^{12} = 1, S^{21} = 0.
    let l = write(&dir, "l.csv", "t,x1,x2\n0,0,0\n1,1,0\n2,1,1\n");
    let v = sig_json(&l, "2");
    let lvl2: Vec<Vec<f64>> = serde_json::from_value(v["levels"][2].clone()).unwrap();
    assert_eq!(lvl2, vec![vec![0.5, 1.0], vec![0.0, 0.5]]);
    let c = write(&dir, "const.csv", "t,x1,x2\n0,1,1\n1,1,1\n2,1,1\n");
    let v = sig_json(&c, "2");
    assert_eq!(v["levels"][0], 1.0);
    assert_eq!(v["levels"][1], serde_json::json!([0.0, 0.0]));
    assert_eq!(v["levels"][2], serde_json::json!([[0.0, 0.0], [0.0, 0.0]]));
    let out = run(&["sig", p(&c), "--depth", "9"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn distances() {
    let dir = TempDir::new().unwrap();
    let t = uniform(6, 1.0);
    let f: Vec<Vec<f64>> = t.iter().map(|t| vec![(4.0 * t).sin(), t * t]).collect();
    let g: Vec<Vec<f64>> = t.iter().map(|t| vec![(4.0 * t).cos() - 1.0, -t]).collect();
    let d: Vec<Vec<f64>> = f.iter().zip(&g).map(|(a, b)| vec![a[0] - b[0], a[1] - b[1]]).collect();
    let (ff, gf, df) = (write(&dir, "f.csv", &csv(&t, &f)), write(&dir, "g.csv", &csv(&t, &g)), write(&dir, "d.csv", &csv(&t, &d)));

    let same = run(&["dist", p(&ff), p(&ff), "--kind", "MixedDist", "--delta", "0.4", "--p", "3"]);
    assert_eq!(first_value(&same), 0.0);

    let rho = first_value(&run(&["dist", p(&ff), p(&gf), "--kind", "QVarDist", "--p", "2", "--depth", "1"]));
    let norm = first_value(&run(&["norm", p(&df), "--kind", "QVar", "--p", "2"]));
    assert!((rho - norm).abs() < 1e-9 * norm);

    // Golden value from full partition enumeration of the level-2 mixed distance.
    let out = run(&["dist", p(&ff), p(&gf), "--kind", "MixedDist", "--delta", "0.4", "--p", "3", "--depth", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let level2: f64 = text.lines().find_map(|l| l.strip_prefix("level 2: ")).unwrap().parse().unwrap();
    let grid = TimeGrid::new(t.clone()).unwrap();
    let x1 = lift(&EuclideanPath::new(grid.clone(), f).unwrap(), 2).unwrap();
    let x2 = lift(&EuclideanPath::new(grid.clone(), g).unwrap(), 2).unwrap();
    let e = |u: usize, v: usize| {
        let (a, b) = (x1.increment(u, v).unwrap(), x2.increment(u, v).unwrap());
        a.level(2).iter().zip(b.level(2)).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    };
    let (delta, pp) = (0.4, 3.0);
    let golden = enumerate_partition_supremum(&grid, GridInterval::full(&grid), |u, v| {
        let inner = enumerate_partition_supremum(&grid, GridInterval::new(u, v), |a, b| e(a, b).powf(1.0 / (2.0 * delta))).unwrap();
        inner.powf(delta * pp) / (t[v] - t[u]).powf(delta * pp - 1.0)
    })
    .unwrap()
    .powf(2.0 / pp);
    assert!((level2 - golden).abs() < 1e-9 * golden, "{level2} vs {golden}");

    let other = write(&dir, "o.csv", &csv(&uniform(6, 2.0), &d));
    let out = run(&["dist", p(&ff), p(&other), "--kind", "MixedDist", "--delta", "0.4", "--p", "3"]);
    assert_eq!(out.status.code(), Some(4));
}

fn field(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    write(dir, name, text)
}

fn terminal(out: &Output) -> Vec<f64> {
    assert!(out.status.success(), "{}", stderr(out));
    stdout(out).trim().split(',').map(|v| v.parse().unwrap()).collect()
}

#[test]
fn solve_closed_forms() {
    let dir = TempDir::new().unwrap();
    let t = uniform(100, 1.0);
    let x: Vec<Vec<f64>> = t.iter().map(|t| vec![*t]).collect();
    let drv = write(&dir, "x.csv", &csv(&t, &x));
    let lin = field(&dir, "lin.json", r#"{"family":"linear","m":1,"n":1,"coefficients":[[[1.0]]],"box_radius":10,"lip_gamma":3}"#);
    let sol = dir.path().join("y.csv");
    let out = run(&["solve", p(&drv), "--field", p(&lin), "--y0", "1", "--substeps", "100", "--out", p(&sol)]);
    let y = terminal(&out);
    assert!((y[0] - std::f64::consts::E).abs() < 2e-4, "{y:?}");
    let written = rough_besov::io::read_path_file(&sol).unwrap();
    assert_eq!(written.grid().len(), 101);
    assert!((written.point(100)[0] - y[0]).abs() < 1e-11 * y[0]);

    let zero = field(&dir, "z.json", r#"{"family":"linear","m":2,"n":1,"coefficients":[[[0,0],[0,0]]],"box_radius":10,"lip_gamma":3}"#);
    let y = terminal(&run(&["solve", p(&drv), "--field", p(&zero), "--y0", "0.5,-2", "--depth", "2", "--out", p(&sol)]));
    assert_eq!(y, vec![0.5, -2.0]);

    let aff = field(&dir, "a.json", r#"{"family":"affine","m":1,"n":1,"coefficients":[[[2.0,0.0]]],"box_radius":10,"lip_gamma":3}"#);
    let y = terminal(&run(&["solve", p(&drv), "--field", p(&aff), "--y0", "1", "--depth", "2", "--out", p(&sol)]));
    assert!((y[0] - 3.0).abs() < 1e-12);

    // Without --out the solution CSV goes to stdout.
    let out = run(&["solve", p(&drv), "--field", p(&aff), "--y0", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("t,x1\n"));
}

#[test]
fn solve_errors() {
    let dir = TempDir::new().unwrap();
    let t = uniform(100, 1.0);
    let x: Vec<Vec<f64>> = t.iter().map(|t| vec![*t]).collect();
    let drv = write(&dir, "x.csv", &csv(&t, &x));
    let fast = field(&dir, "f.json", r#"{"family":"affine","m":1,"n":1,"coefficients":[[[4.5,0.0]]],"box_radius":1,"lip_gamma":3}"#);
    let out = run(&["solve", p(&drv), "--field", p(&fast), "--y0", "0"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr(&out).contains("t = 0.2"), "{}", stderr(&out));
    let broken = field(&dir, "b.json", "{\"family\":\n\"cubic\"}");
    let out = run(&["solve", p(&drv), "--field", p(&broken), "--y0", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let lin = field(&dir, "l.json", r#"{"family":"linear","m":1,"n":1,"coefficients":[[[1.0]]],"box_radius":10,"lip_gamma":3}"#);
    let out = run(&["solve", p(&drv), "--field", p(&lin), "--y0", "0,1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_is_deterministic_and_rejects_unknown_suites() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let res = run(&["verify", "--suite", "algebra", "--seed", "7", "--out", p(out)]);
        assert!(res.status.success(), "{}\n{}", stdout(&res), stderr(&res));
        assert!(stdout(&res).contains("PASS"));
    }
    let ja = fs::read(a.join("report.json")).unwrap();
    assert_eq!(ja, fs::read(b.join("report.json")).unwrap());
    let doc: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    let recs = doc.as_array().unwrap();
    assert!(recs.iter().all(|r| r["schema_version"] == 1));
    assert!(recs.iter().any(|r| r["expect_fail"] == true && r["pass"] == false));
    assert!(fs::read_to_string(a.join("report.csv")).unwrap().starts_with("id,delta,p"));

    let out = run(&["verify", "--suite", "nonsense", "--out", p(&a)]);
    assert_eq!(out.status.code(), Some(3));
}
