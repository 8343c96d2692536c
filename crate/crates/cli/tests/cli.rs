use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn symtri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symtri"))
        .args(args)
        .env_remove("SYMTRI_THREADS")
        .output()
        .expect("run symtri")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = symtri(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn count_symmetric_d4() {
    let v = json(&["count", "--d", "4", "--symmetric"]);
    assert_eq!(v["count"], "74");
    assert_eq!(v["group_order"], 2);
    assert_eq!(v["symmetric"], true);
}

#[test]
fn count_golden_small() {
    for (d, sym, want) in [(1, true, "1"), (2, true, "2"), (3, true, "7"), (1, false, "1"), (2, false, "4"), (3, false, "79")] {
        let d = d.to_string();
        let mut args = vec!["count", "--d", &d];
        if sym {
            args.push("--symmetric");
        }
        let v = json(&args);
        assert_eq!(v["count"], want, "d={d} symmetric={sym}");
        assert_eq!(v["region"], "full");
        assert_eq!(v["mode"], "unimodular");
        assert!(v.get("elapsed").is_none());
    }
    for (d, want) in [("1", "1"), ("2", "1"), ("3", "4"), ("4", "24")] {
        assert_eq!(json(&["count", "--d", d, "--region", "half"])["count"], want, "half d={d}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(symtri(&["count", "--d", "0"]).status.code(), Some(2));
    assert_eq!(symtri(&["count", "--d", "3", "--symmetric", "--region", "half"]).status.code(), Some(2));
    assert_eq!(symtri(&["verify", "--d-max", "9"]).status.code(), Some(2));
    assert_eq!(symtri(&["bounds"]).status.code(), Some(2));
}

#[test]
fn jobs_do_not_change_counts() {
    for d in ["3", "4", "5"] {
        let one = json(&["count", "--d", d, "--symmetric", "--jobs", "1"]);
        let four = json(&["count", "--d", d, "--symmetric", "--jobs", "4"]);
        assert_eq!(one["count"], four["count"], "d={d}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_symtri"))
        .args(["count", "--d", "4", "--format", "plain"])
        .env("SYMTRI_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "7424");
}

#[test]
fn verify_small_passes() {
    let o = symtri(&["verify", "--d-max", "4"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "PASS");
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "oracle d=4" && c["status"] == "PASS"));
    assert!(checks.iter().all(|c| c["status"] != "FAIL"));
}

#[test]
fn bounds_values() {
    let v = json(&["bounds", "--d", "5"]);
    assert_eq!(v["rows"][0]["l2"], "54");
    let v = json(&["bounds", "--d", "6"]);
    assert_eq!(v["rows"][0]["l1"], "144");
    let o = symtri(&["bounds", "--d-max", "3", "--format", "csv"]);
    let text = stdout(&o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(&r.headers().unwrap()[0], "d");
    assert_eq!(r.records().count(), 3);
}

#[test]
fn tables_report_whitelist() {
    let v = json(&["tables", "--which", "table2", "--compute-max", "3"]);
    let rows = v["tables"][0]["rows"].as_array().unwrap();
    let u = rows.iter().find(|r| r["key"] == "u").unwrap();
    assert!(u["cells"].as_array().unwrap().iter().all(|c| c["status"] == "whitelisted"));
}

#[test]
fn stream_round_trip_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("s.txt");
    let o = symtri(&["enumerate", "--d", "3", "--symmetric", "--out", stream.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&stream).unwrap();
    let mut lines = text.lines();
    let header: Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["points"].as_array().unwrap().len(), 10);
    assert_eq!(header["points"][9], serde_json::json!([0, 3]));
    let bodies: Vec<&str> = lines.collect();
    assert_eq!(bodies.len(), 7);
    for (i, line) in bodies.iter().enumerate() {
        assert_eq!(line.split(' ').count(), 9, "{line}");
        let svg = dir.path().join(format!("{i}.svg"));
        let o = symtri(&["render", "--file", stream.to_str().unwrap(), "--index", &i.to_string(), "--out", svg.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(fs::read_to_string(&svg).unwrap().matches(r#"class="edge""#).count(), 18);
    }
    let out = dir.path().join("x.svg");
    let o = symtri(&["render", "--file", stream.to_str().unwrap(), "--index", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn render_small() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    assert!(symtri(&["render", "--d", "1", "--out", a.to_str().unwrap(), "--axis"]).status.success());
    let svg = fs::read_to_string(&a).unwrap();
    assert!(svg.contains("<svg") && svg.contains(r#"class="axis""#));
    assert_eq!(svg.matches(r#"class="point""#).count(), 3);
    assert_eq!(svg.matches(r#"class="edge""#).count(), 3);

    let b = dir.path().join("b.svg");
    assert!(symtri(&["render", "--d", "2", "--symmetric", "--out", b.to_str().unwrap()]).status.success());
    let svg = fs::read_to_string(&b).unwrap();
    assert_eq!(svg.matches(r#"class="point""#).count(), 6);
    assert_eq!(svg.matches(r#"class="edge""#).count(), 9);
}

#[test]
fn render_rejects_malformed_file() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    let out = dir.path().join("o.svg");
    fs::write(&bad, "not json\n0,1,2\n").unwrap();
    assert_eq!(symtri(&["render", "--file", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(), Some(1));
    fs::write(
        &bad,
        "{\"d\":1,\"region\":\"full\",\"mode\":\"unimodular\",\"symmetric\":false,\"points\":[[0,0],[1,0],[0,1]]}\n0,1,7\n",
    )
    .unwrap();
    assert_eq!(symtri(&["render", "--file", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(), Some(1));
    assert!(!out.exists());
}
