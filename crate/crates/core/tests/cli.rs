use std::process::Command;

use telecloning::sweep::Table;

fn gtc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gtc"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn figure_output_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for path in [&a, &b] {
        let out = gtc(&[
            "figure",
            "cpro-vs-eg-copy",
            "--grid",
            "0.1",
            "--samples",
            "200",
            "--seed",
            "9",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);

    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("# gtc figure cpro-vs-eg-copy"));
    let table = Table::read_csv(text.as_bytes()).unwrap();
    assert_eq!(table.rows.len(), 11);
    let mut rewritten = Vec::new();
    table.write_csv(&mut rewritten, &[]).unwrap();
    let body: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
    assert_eq!(String::from_utf8(rewritten).unwrap(), body);
}

#[test]
fn run_reports_ideal_values() {
    let out = gtc(&["run", "--alpha", "1", "--beta", "0", "--n", "1,1,1,1", "--m", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("0.2500000000 0.8333333333 0.8333333333").count(), 4);
}

#[test]
fn probabilistic_run() {
    let out = gtc(&[
        "run",
        "--alpha",
        "0.6",
        "--beta",
        "0.8",
        "--n",
        "0.5,1,1,1",
        "--m",
        "0.5",
        "--accept",
        "phi-,psi+",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("conditional fidelity: copy 1 0.8333333333, copy 2 0.8333333333"));
}

#[test]
fn exit_codes() {
    assert_eq!(gtc(&["run", "--alpha", "0.6", "--beta", "0.9"]).status.code(), Some(2));
    assert_eq!(
        gtc(&["run", "--alpha", "1", "--beta", "0", "--n", "1,1,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(gtc(&["figure", "nope"]).status.code(), Some(2));
    assert_eq!(
        gtc(&["figure", "eg1-curve", "--out", "/nonexistent/dir/x.csv"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(gtc(&["verify", "conversion"]).status.code(), Some(0));
}

#[test]
fn sweep_with_port_policy() {
    let out = gtc(&["sweep", "--vary", "n_p:0.2:0.8:0.3", "--m", "port"]);
    assert!(out.status.success());
    let table = Table::read_csv(&out.stdout[..]).unwrap();
    assert_eq!(table.header[..2], ["n_p".to_owned(), "m".to_owned()]);
    for row in &table.rows {
        assert_eq!(row[0], row[1]);
    }
}
