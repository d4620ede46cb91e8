use std::path::Path;
use std::process::{Command, Output};

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    summary: Vec<(String, String)>,
}

impl Csv {
    fn parse(text: &str) -> Self {
        let mut lines = text.lines();
        let header = lines.next().expect("header").split(',').map(str::to_owned).collect();
        let (mut rows, mut summary) = (Vec::new(), Vec::new());
        for line in lines {
            if let Some(kv) = line.strip_prefix("# ") {
                let (k, v) = kv.split_once('=').expect("key=value");
                summary.push((k.to_owned(), v.to_owned()));
            } else {
                rows.push(line.split(',').map(str::to_owned).collect());
            }
        }
        Self { header, rows, summary }
    }

    fn col(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
    }

    fn num(&self, row: usize, name: &str) -> f64 {
        self.rows[row][self.col(name)].parse().expect("numeric cell")
    }

    fn column(&self, name: &str) -> Vec<f64> {
        (0..self.rows.len()).map(|r| self.num(r, name)).collect()
    }

    fn note(&self, key: &str) -> f64 {
        let v = &self.summary.iter().find(|(k, _)| k == key).expect("summary key").1;
        v.parse().expect("numeric summary")
    }

    fn row_at(&self, s: f64) -> usize {
        let col = self.column("s");
        col.iter().position(|x| (x - s).abs() < 1e-12).expect("grid node")
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adiasearch")).args(args).output().expect("binary runs")
}

fn csv(args: &[&str]) -> Csv {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    Csv::parse(&String::from_utf8(out.stdout).expect("utf-8"))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn spectrum_two_qubits() {
    let t = csv(&["spectrum", "--n", "2"]);
    assert_eq!(t.header[..5], ["s", "E0", "E1", "E2", "E3"]);
    let mid = t.row_at(0.5);
    assert!((t.num(mid, "gap") - 0.5).abs() < 1e-12);
    assert!(t.num(0, "E0").abs() < 1e-12);
    assert!((t.num(0, "E1") - 1.0).abs() < 1e-12);
    assert!((t.note("g_min") - 0.5).abs() < 1e-10);
    assert!((t.note("s_star") - 0.5).abs() < 1e-10);
}

#[test]
fn spectrum_five_qubits() {
    let t = csv(&["spectrum", "--n", "5", "--grid", "201"]);
    assert!(t.header.contains(&"E31".to_owned()));
    assert!(!t.header.contains(&"E32".to_owned()));
    let mid = t.row_at(0.5);
    assert!((t.num(mid, "gap") - 32f64.sqrt().recip()).abs() < 1e-10);
}

#[test]
fn entanglement_traces() {
    let t = csv(&["entanglement", "--n", "2"]);
    let s = t.column("entropy");
    assert!(s[0].abs() < 1e-10 && s[s.len() - 1].abs() < 1e-10);
    assert!((t.note("s_of_max") - 0.5).abs() < 1e-12);
    assert!((t.note("max_entropy") - 0.187_298_598_568_772).abs() < 1e-9);

    let t = csv(&["entanglement", "--n", "2", "--initial", "bell"]);
    assert!((t.note("initial_entropy") - 1.0).abs() < 1e-10);
    assert!(t.note("final_entropy").abs() < 1e-10);
    assert!((t.num(0, "concurrence") - 0.5).abs() < 1e-12);
}

#[test]
fn product_start_stays_unentangled() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "amps.json", "[1, 0, 0, 0]");
    let t = csv(&["entanglement", "--marked", "0", "--initial", &format!("file:{path}")]);
    assert!(t.column("entropy").iter().all(|e| e.abs() < 1e-10));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "cfg.json", r#"{"n": 3, "grid": 101, "marked": 5}"#);
    let t = csv(&["spectrum", "--config", &path]);
    assert_eq!(t.rows.len(), 101);
    assert!(t.header.contains(&"E7".to_owned()));
    let t = csv(&["spectrum", "--config", &path, "--n", "2", "--marked", "1"]);
    assert!(!t.header.contains(&"E4".to_owned()));
}

#[test]
fn grover_table() {
    let t = csv(&["grover", "--n", "2"]);
    assert_eq!(t.note("k0"), 1.0);
    assert!((t.note("p_k0") - 1.0).abs() < 1e-12);
    let t = csv(&["grover", "--n", "6", "--k-max", "20"]);
    assert_eq!(t.rows.len(), 21);
    assert!(t.note("p_k0") >= t.note("bound"));
}

#[test]
fn evolve_reaches_marked_state() {
    let t = csv(&["evolve", "--n", "2"]);
    assert!(t.note("final_fidelity_marked") >= 0.99);
    assert_eq!(t.note("target_met"), 1.0);
    assert!(t.column("norm_drift").iter().all(|d| *d <= 1e-9));

    let t = csv(&["evolve", "--n", "3", "--T", "1e-9", "--steps", "16"]);
    assert!((t.note("final_fidelity_marked") - 0.125).abs() < 1e-9);
}

#[test]
fn sweep_anchors() {
    let t = csv(&["sweep", "--resolution", "3"]);
    let label = t.col("label");
    let uniform = t.rows.iter().position(|r| r[label] == "uniform").expect("uniform row");
    assert!(t.num(uniform, "initial_entropy").abs() < 1e-12);
    assert!((t.num(uniform, "g_min") - 0.5).abs() < 1e-10);
    let bell = t.rows.iter().position(|r| r[label] == "bell").expect("bell row");
    assert!((t.num(bell, "initial_entropy") - 1.0).abs() < 1e-10);
}

#[test]
fn scaling_small_range() {
    let t = csv(&["scaling", "--n-min", "2", "--n-max", "5", "--grid", "256"]);
    assert_eq!(t.column("N"), vec![4.0, 8.0, 16.0, 32.0]);
    let local = t.column("t_min_local");
    let linear = t.column("t_min_linear");
    assert!(local.iter().zip(&linear).all(|(a, b)| a < b));
    assert!((local[0] - 3f64.sqrt() / 0.1).abs() / local[0] < 1e-3);
}

#[test]
fn output_is_bit_stable_and_can_go_to_a_file() {
    let args = ["entanglement", "--n", "3", "--cut", "0", "--grid", "129"];
    let a = run(&args).stdout;
    assert_eq!(a, run(&args).stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = run(&with_out);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a);
}

#[test]
fn configuration_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = write(dir.path(), "bad.json", r#"{"n": 2, "colour": "blue"}"#);
    for args in [
        vec!["spectrum", "--config", bad_key.as_str()],
        vec!["spectrum", "--bogus"],
        vec!["spectrum", "--n", "11"],
        vec!["spectrum", "--n", "2", "--marked", "4"],
        vec!["evolve", "--n", "2", "--T", "-1"],
        vec!["entanglement", "--n", "2", "--initial", "file:/nonexistent/amps.json"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
