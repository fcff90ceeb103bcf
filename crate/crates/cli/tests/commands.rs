use std::path::PathBuf;

use relans_cli::{run_command, EXIT_ERROR, EXIT_FALSE, EXIT_TRUE};

fn run(args: &str) -> relans_cli::Outcome {
    run_command(std::iter::once("relans").chain(args.split_whitespace()))
}

fn value(stdout: &str, key: &str) -> String {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}\t")))
        .unwrap_or_else(|| panic!("no row {key} in\n{stdout}"))
        .to_string()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("relans-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

// weight-2 words of length 4, most significant coordinate first
const SHELL_TWO: [usize; 6] = [3, 5, 6, 9, 10, 12];

#[test]
fn scheme_info_hamming() {
    let out = run("scheme info --family hamming --d 3 --q 2");
    assert_eq!(out.code, EXIT_TRUE, "{}", out.stderr);
    assert_eq!(value(&out.stdout, "k"), "1,3,3,1");
    assert_eq!(value(&out.stdout, "m"), "1,3,3,1");
    assert_eq!(value(&out.stdout, "formally_self_dual"), "true");
}

#[test]
fn scheme_info_johnson_is_not_self_dual() {
    let out = run("scheme info --family johnson --v 5 --d 2");
    assert_eq!(out.code, EXIT_TRUE);
    assert_eq!(value(&out.stdout, "k"), "1,6,3");
    assert_eq!(value(&out.stdout, "m"), "1,4,5");
    assert_eq!(value(&out.stdout, "formally_self_dual"), "false");
}

#[test]
fn fisher_on_one_shell() {
    let out = run("fisher --family hamming --d 4 --q 2 --shells 2 --e 1");
    assert_eq!(out.code, EXIT_TRUE);
    for key in ["hom_bound", "l_bound", "k_sum", "m_sum"] {
        assert_eq!(value(&out.stdout, key), "4");
    }
}

#[test]
fn full_shell_is_a_design() {
    let mut body = String::from("scheme: family=hamming d=4 q=2\nu0: 0\n");
    for x in SHELL_TWO {
        body.push_str(&format!("{x} 1\n"));
    }
    let path = temp_file("shell.design", &body);
    let out = run(&format!("design verify --file {} --t 2 --variant q", path.display()));
    assert_eq!(out.code, EXIT_TRUE, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("\tdesign\n"));
}

#[test]
fn partial_shell_is_refuted() {
    let path = temp_file("partial.design", "scheme: family=hamming d=4 q=2\nu0: 0\n3 1\n5 1\n");
    let out = run(&format!("design verify --file {} --t 1 --variant p", path.display()));
    assert_eq!(out.code, EXIT_FALSE);
    assert!(out.stdout.contains("not-a-design"));
}

#[test]
fn malformed_design_file_reports_line() {
    let path = temp_file("bad.design", "scheme: family=hamming d=4 q=2\nu0: 0\n3 1\n5 one\n");
    let out = run(&format!("design verify --file {} --t 1", path.display()));
    assert_eq!(out.code, EXIT_ERROR);
    assert!(out.stderr.contains("line 4"), "{}", out.stderr);
}

#[test]
fn missing_file_is_an_error() {
    let out = run("design verify --file /nonexistent/relans.design --t 1");
    assert_eq!(out.code, EXIT_ERROR);
}

#[test]
fn unknown_flags_and_parameters_are_rejected() {
    assert_eq!(run("fisher --family hamming --d 4 --q 2 --shells 2 --e 1 --bogus 3").code, EXIT_ERROR);
    assert_eq!(run("scheme info --family hamming --d 4").code, EXIT_ERROR);
    assert_eq!(run("scheme info --family petersen --d 4 --q 2").code, EXIT_ERROR);
    assert_eq!(run("reproduce --suite nonsense").code, EXIT_ERROR);
}

#[test]
fn decompose_doob() {
    let out = run("decompose --family doob --n 1 --m 0");
    assert_eq!(out.code, EXIT_TRUE);
    assert!(out.stdout.contains("# total_dim=16"));
    let witness = out
        .stdout
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split('\t').collect::<Vec<_>>())
        .any(|f| f[2] == "1" && f[3] == "2");
    assert!(witness);
}

#[test]
fn search_respects_the_bound() {
    let out = run("search --family hamming --d 4 --q 2 --shells 2 --t 2 --max-size 6 --mode uniform");
    assert_eq!(out.code, EXIT_TRUE, "{}", out.stderr);
    for line in out.stdout.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let size: usize = line.split('\t').next().unwrap().parse().unwrap();
        assert!(size >= 4);
    }
}

#[test]
fn characters_are_orthogonal() {
    let out = run("hamming characters --d 2 --q 3 --check orthogonality");
    assert_eq!(out.code, EXIT_TRUE);
    let rows: Vec<&str> = out.stdout.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows, ["1\t0\t4\t0", "2\t0\t4\t0", "2\t1\t16\t0"]);
}

#[test]
fn dual_polar_gates_small() {
    let out = run("dualpolar check --d 2 --q 2 --suite gates");
    assert_eq!(out.code, EXIT_TRUE);
    assert_eq!(out.stdout.lines().filter(|l| l.ends_with("\tpass")).count(), 8);
}

#[test]
fn reproduce_doob_and_json() {
    let out = run("reproduce --suite doob");
    assert_eq!(out.code, EXIT_TRUE, "{}", out.stdout);
    assert!(out.stdout.starts_with("# suite=doob\n# seed=1729\n"));
    let json = run("reproduce --suite doob --format json");
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["meta"]["failed"], "0");
    assert_eq!(v["rows"].as_array().unwrap().len(), out.stdout.lines().filter(|l| l.starts_with("doob:")).count());
}

#[test]
fn reproduce_is_deterministic_and_sorted() {
    let a = run("reproduce --suite hom-l --seed 7");
    let b = run("reproduce --suite hom-l --seed 7");
    assert_eq!(a, b);
    assert_eq!(a.code, EXIT_TRUE, "{}", a.stdout);
    let claims: Vec<&str> = a.stdout.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split('\t').next().unwrap()).collect();
    let mut sorted = claims.clone();
    sorted.sort();
    assert_eq!(claims, sorted);
}

#[test]
fn help_exits_cleanly() {
    let out = run("--help");
    assert_eq!(out.code, EXIT_TRUE);
    assert!(out.stdout.contains("reproduce"));
}
