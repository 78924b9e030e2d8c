use std::path::Path;
use std::process::{Command, Output};

fn cnfbox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cnfbox")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn generate_prints_a_parseable_formula() {
    let o = cnfbox(&["generate", "--depth", "1", "--vars", "3", "--clauses", "4", "--clause-size", "3", "--prop-prob", "0.5"]);
    assert!(o.status.success());
    let f = cnfbox_core::parse_formula(&stdout(&o)).unwrap();
    assert_eq!(f.len(), 4);
    assert_eq!(stdout(&o), format!("{f}\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(cnfbox(&["--help"]).status.code(), Some(0));
    assert_eq!(cnfbox(&["frobnicate"]).status.code(), Some(1));
    // two distinct propositions needed, one available
    let o = cnfbox(&["generate", "--depth", "0", "--vars", "1", "--clauses", "1", "--clause-size", "2", "--prop-prob", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("N = 1"));
    // only four distinct unit clauses exist over two variables
    let o = cnfbox(&["generate", "--depth", "0", "--vars", "2", "--clause-size", "1", "--clauses", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(cnfbox(&["decide", "/nonexistent/formula"]).status.code(), Some(1));
}

#[test]
fn infer_reports_specs() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.txt", "(and (or A1 (box 1 (or A2))) (or (not A3) (box 1 (or (not A1)))))");
    let o = cnfbox(&["infer", &f]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "depth=1\nboxes=1\nvars=3\nclauses=2\nlength-spec=[[0, 2], [2]]\nprop-spec=[[[], [0, 2, 0]]]\n"
    );
    let o = cnfbox(&["infer", "--normalize", &f]);
    assert!(stdout(&o).contains("length-spec=[[0, 1], [1]]\nprop-spec=[[[], [0, 1, 0]]]"));
}

#[test]
fn decide_reports_status_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let sat = write(dir.path(), "sat.txt", "(and (or A1 (box 1 (or A2))))");
    let unsat = write(dir.path(), "unsat.txt", "(and (or (box 1 (or A1))) (or (not (box 1 (or A1)))))");
    let o = stdout(&cnfbox(&["decide", &sat]));
    assert!(o.starts_with("sat trivially_sat=true trivially_unsat=false elapsed_ms="), "{o}");
    let o = stdout(&cnfbox(&["decide", "--timeout", "1.5", &unsat]));
    assert!(o.starts_with("unsat trivially_sat=false trivially_unsat=true"), "{o}");
}

#[test]
fn probability_of_a_small_formula() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.txt", "(and (or A1))");
    let o = cnfbox(&["probability", &f, "--depth", "0", "--vars", "2", "--clauses", "1", "--length-spec", "[[1]]"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("probability=1/4\n"), "{}", stdout(&o));
}

#[test]
fn campaign_reads_config_file_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let cfg = write(
        dir.path(),
        "c.conf",
        "# transition sweep\ndepth=1\nvars=3\nclause-size=3\nprop-prob=0.5\nl-from=3\nl-to=12\nl-step=3\nsamples=4\n",
    );
    let o = cnfbox(&["campaign", "--config", &cfg, "--samples", "2", "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (points, _) = cnfbox_core::campaign::parse_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(points.iter().map(|p| p.l).collect::<Vec<_>>(), vec![3, 6, 9, 12]);
    assert!(points.iter().all(|p| p.n == 2));

    let bad = write(dir.path(), "bad.conf", "depth=1\nnonsense\n");
    let o = cnfbox(&["campaign", "--config", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}
