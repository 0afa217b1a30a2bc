use std::path::PathBuf;
use std::process::{Command, Output};

use flextile::reproduce::{Row, HEADER};

fn flextile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flextile"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_file(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn generated(family: &str, n: usize) -> String {
    let o = flextile(&["gen-pot", "--family", family, "--n", &n.to_string()]);
    assert!(o.status.success());
    scratch_file(&format!("{family}-{n}.pot"), &stdout(&o))
}

#[test]
fn gen_pot_wheel_s3() {
    let o = flextile(&["gen-pot", "--family", "wheel-s3", "--n", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "t1: a1, a1, a1, a1, a1, a1\n\
         t2: a1*, a2, a2\n\
         t3: a1*, a2*, a3\n\
         t4: a1*, a3*, a4\n\
         t5: a1*, a4*, a4*\n"
    );
}

#[test]
fn matrix_of_s12() {
    let pot = generated("wheel-s12", 7);
    let o = flextile(&["matrix", &pot]);
    assert_eq!(
        stdout(&o),
        "-1 6 | 0\n1 1 | 1\nunique r = (6/7 1/7)\nadmissible=true\n"
    );
}

#[test]
fn min_order_reports() {
    let pot = generated("wheel-s3", 8);
    assert_eq!(stdout(&flextile(&["min-order", &pot])), "min_order=8\nusage=1 1 2 2 1 1\n");
    let bad = scratch_file("unrealizable.pot", "x: a1, a1\ny: a1, a2*\n");
    let o = flextile(&["min-order", &bad]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "unrealizable\n".to_string()));
}

#[test]
fn enumerate_counts_classes() {
    let pot = generated("wheel-s12", 7);
    let o = flextile(&["enumerate", &pot, "--order", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("classes=74\n"));
    assert_eq!(text.matches("n=7").count(), 74);
}

#[test]
fn verify_exit_codes() {
    let s3 = generated("wheel-s3", 6);
    let o = flextile(&["verify", &s3, "--target", "wheel:6", "--scenario", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS\nscenario=3\n"));

    let s12 = generated("wheel-s12", 7);
    let o = flextile(&["verify", &s12, "--target", "wheel:7", "--scenario", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("FAIL\n") && text.contains("counterexample:\nn=7\n"));

    let o = flextile(&["verify", &s3, "--target", "wheel:6", "--scenario", "3", "--budget", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("INDETERMINATE\n"));
}

#[test]
fn graph_file_targets() {
    let graph = scratch_file("w5.graph", "# wheel on five vertices\nn=5\n0 1\n1 2\n2 3\n3 0\n4 0\n4 1\n4 2\n4 3\n");
    let pot = generated("wheel-s3", 5);
    let o = flextile(&["verify", &pot, "--target", &graph, "--scenario", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["bogus"],
        vec!["gen-pot", "--family", "wheel-s3", "--n", "3"],
        vec!["verify", "/nonexistent.pot", "--target", "wheel:5", "--scenario", "1"],
        vec!["search-min", "--target", "wheel:5", "--scenario", "4"],
        vec!["search-min", "--target", "wheel:5", "--scenario", "1", "--frobnicate"],
        vec!["search-min", "--target", "star:5", "--scenario", "1"],
    ] {
        assert_eq!(flextile(&args).status.code(), Some(2), "{args:?}");
    }
    let bad = scratch_file("syntax.pot", "t1: a1, b2\n");
    let o = flextile(&["min-order", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 9"));
}

#[test]
fn search_min_output() {
    let o = flextile(&["search-min", "--target", "cycle:5", "--scenario", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("bonds-first: B=3 T=4\ntiles-first: B=3 T=4\nexhaustive=true\n"));
    let single = flextile(&["--threads", "1", "search-min", "--target", "cycle:5", "--scenario", "3"]);
    assert_eq!(stdout(&single), text);
}

#[test]
fn reproduce_rows_six_and_seven() {
    let o = flextile(&["reproduce", "--from", "6", "--to", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let rows: Vec<Row> = lines.map(|l| l.parse().unwrap()).collect();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert_eq!(row.values().map(Option::unwrap), [1, 2, 1, 2, 4, 5]);
        assert!(!row.has_mismatch());
    }
    let rendered: String = rows.iter().map(|r| format!("{r}\n")).collect();
    assert_eq!(format!("{HEADER}\n{rendered}"), text);
    assert!(text.contains("\t4 formula+search\t5 formula+search\n"));
    assert!(text.contains("\t4 formula+search-pruned\t5 formula+search-pruned\n"));
}

#[test]
fn reproduce_row_four_matches_k4() {
    let o = flextile(&["reproduce", "--from", "4", "--to", "4"]);
    let row: Row = stdout(&o).lines().nth(1).unwrap().parse().unwrap();
    for s in 1..=3 {
        let k4 = flextile(&["search-min", "--target", "complete:4", "--scenario", &s.to_string()]);
        let first = stdout(&k4).lines().next().unwrap().to_string();
        let (b, t) = (row.values()[2 * (s - 1)].unwrap(), row.values()[2 * s - 1].unwrap());
        assert_eq!(first, format!("bonds-first: B={b} T={t}"));
    }
}
