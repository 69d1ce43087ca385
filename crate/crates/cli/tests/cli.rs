use std::process::{Command, Output};

fn burgess(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burgess"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

#[test]
fn charsum_header_is_fixed() {
    let out = burgess(&["charsum", "--q", "101", "--samples", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "N,H,magnitude,bound_chang,bound_vin,ratio_vin");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn charsum_full_period_vanishes() {
    let out = burgess(&["charsum", "--q", "499", "--phase", "zero", "--h-exp", "1", "--n", "0,17"]);
    assert!(out.status.success());
    for row in rows(&out) {
        assert!(row[2].parse::<f64>().unwrap() < 1e-9);
    }
}

#[test]
fn charsum_gauss_sum_has_modulus_sqrt_q() {
    let out = burgess(&["charsum", "--q", "997", "--phase", "gauss", "--h-exp", "1", "--n", "0"]);
    let row = &rows(&out)[0];
    let mag: f64 = row[2].parse().unwrap();
    assert!((mag - 997f64.sqrt()).abs() < 1e-6 * 997f64.sqrt());
}

#[test]
fn charsum_is_reproducible() {
    let args = ["charsum", "--q", "1009", "--seed", "7", "--samples", "5", "--h-exp", "0.4,0.5"];
    assert_eq!(burgess(&args).stdout, burgess(&args).stdout);
}

#[test]
fn jcount_columns() {
    let out = burgess(&["jcount", "--r", "1", "--d", "2", "--x-max", "6"]);
    for row in rows(&out) {
        assert_eq!(row[0], row[1]);
    }
    let out = burgess(&["jcount", "--r", "2", "--d", "1", "--x-max", "5"]);
    let table = rows(&out);
    assert_eq!(table[1][1], "6");
    for row in &table {
        assert_eq!(row[1], row[2]);
    }
}

#[test]
fn bounds_delta_columns() {
    let out = burgess(&["bounds", "--kappa", "0.05", "--d", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    for col in ["delta_chang", "delta_chang_refined", "delta_vin"] {
        assert!(header.split(',').any(|c| c == col));
    }
    let row = &rows(&out)[0];
    assert_eq!(row[5], "40");
    assert_eq!(row[7], "14");
}

#[test]
fn bounds_rejects_go_to_the_log() {
    let out = burgess(&["bounds", "--q", "1e6", "--d", "2", "--r", "3", "--h-exp", "0.3"]);
    assert!(out.status.success());
    let log = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(log.contains("reject: vinogradov"));
    assert!(rows(&out).iter().all(|r| r[5] != "vinogradov"));
}

#[test]
fn grid_tallies_pass() {
    let out = burgess(&["grid"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS 256/256"));
    let out = burgess(&["grid", "--r", "1", "--d", "1", "--base", "2", "--tau", "5"]);
    assert!(stdout(&out).contains("PASS 25/25"));
}

#[test]
fn pipeline_moments() {
    let out = burgess(&["pipeline", "--q", "10007"]);
    assert!(out.status.success());
    let table = rows(&out);
    assert_eq!(table.len(), 6);
    for row in table {
        let s1: u64 = row[5].parse().unwrap();
        let s2: u64 = row[6].parse().unwrap();
        assert!(s1 <= s2);
        assert!(row[8].parse::<u64>().unwrap() <= 2 * 10007);
    }
}

#[test]
fn verify_single_criterion() {
    let out = burgess(&["verify", "--criterion", "9"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("[PASS]"));
}

#[test]
fn exit_codes() {
    assert_eq!(burgess(&["charsum", "--q", "100"]).status.code(), Some(2));
    assert_eq!(burgess(&["jcount", "--r", "5", "--x-max", "100"]).status.code(), Some(3));
    assert_eq!(burgess(&["verify", "--criterion", "42"]).status.code(), Some(2));
    assert_eq!(burgess(&["bounds", "--kappa", "-1"]).status.code(), Some(2));
}
