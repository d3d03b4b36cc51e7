use std::path::PathBuf;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn singcurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singcurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = singcurve(args);
    assert!(
        out.status.success(),
        "singcurve {args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn exit_code(args: &[&str]) -> i32 {
    singcurve(args).status.code().expect("exited normally")
}

fn schema(name: &str) -> JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).expect("schema is JSON");
    JSONSchema::compile(&value).expect("schema compiles")
}

fn json_against(schema_name: &str, args: &[&str]) -> Value {
    let v: Value = serde_json::from_str(&stdout_ok(args)).expect("stdout is JSON");
    let compiled = schema(schema_name);
    if let Err(errors) = compiled.validate(&v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{schema_name} rejects output of {args:?}:\n{}", msgs.join("\n"));
    }
    v
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("singcurve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir.join(name)
}

#[test]
fn genus_sixteen_semigroup_is_non_smoothable_at_k1() {
    let v = json_against("semigroup.schema.json", &["semigroup", "13,14,15,16,17,18,20,22,23", "--json"]);
    assert_eq!(v["delta"], 16);
    assert_eq!(v["verdict"]["outcome"], "NON_SMOOTHABLE");
    assert_eq!(v["verdict"]["witnesses"]["k"], 1);
    assert_eq!(v["verdict"]["witnesses"]["sumset"], 46);
    assert_eq!(v["dedekind"]["1"], 33);
}

#[test]
fn cusp_t1_profile() {
    let v = json_against("semigroup.schema.json", &["semigroup", "2,3", "--t1", "--json"]);
    let p = &v["presentation"];
    assert_eq!(p["t1"], serde_json::json!({"-6": 1, "-4": 1}));
    assert_eq!(p["t1_total"], 2);
    assert_eq!(p["relations"].as_array().unwrap().len(), 1);
    assert_eq!(v["verdict"]["outcome"], "UNKNOWN");
    assert_eq!(v["dedekind"], serde_json::json!({}));
}

#[test]
fn semigroup_with_presentation_validates() {
    let v = json_against("semigroup.schema.json", &["semigroup", "6,7,8,9,10", "--t1", "--json"]);
    assert_eq!(v["symmetric"], true);
    assert_eq!(v["presentation"]["relations"].as_array().unwrap().len(), 9);
}

#[test]
fn exit_codes() {
    assert_eq!(exit_code(&["semigroup", "4,6"]), 3);
    assert_eq!(exit_code(&["semigroup", "0,3"]), 3);
    assert_eq!(exit_code(&["semigroup", "1,x"]), 2);
    assert_eq!(exit_code(&["no-such-command"]), 2);
    assert_eq!(exit_code(&["pointset", "--random", "6", "11"]), 2);
    assert_eq!(exit_code(&["table", "--n", "3"]), 2);
    assert_eq!(exit_code(&["table", "--n", "9..6"]), 2);

    let flat = scratch("flat.csv");
    std::fs::write(&flat, "1,0,0\n0,1,0\n1,1,0\n2,1,0\n").unwrap();
    assert_eq!(exit_code(&["pointset", "--file", flat.to_str().unwrap(), "--t1-auto"]), 4);
    let zero = scratch("zero.csv");
    std::fs::write(&zero, "1,0,0\n0,0,0\n0,0,1\n").unwrap();
    assert_eq!(exit_code(&["pointset", "--file", zero.to_str().unwrap()]), 4);
    assert_eq!(exit_code(&["pointset", "--file", "/nonexistent/points.csv"]), 4);

    assert_eq!(exit_code(&["semigroup", "3,5,7"]), 0);
}

#[test]
fn tetrahedron_gale_cone() {
    let v = json_against(
        "pointset.schema.json",
        &["pointset", "--builder", "tetrahedron-midpoints", "--gale", "-", "--t1-auto", "--json"],
    );
    assert_eq!(v["n"], 4);
    assert_eq!(v["r"], 10);
    assert_eq!(v["general_position"], true);
    assert_eq!(v["uniform_position"], false);
    assert_eq!(v["gale"]["n"], 6);
    let cone = &v["cone"];
    assert_eq!(cone["target"], "gale");
    assert_eq!(cone["delta"], 13);
    assert_eq!(cone["e"], 20);
    assert_eq!(cone["generators"]["2"], 11);
    assert_eq!(cone["t1"]["0"], 15);
    assert_eq!(cone["total"], 15);
    assert_eq!(cone["quadric_test"]["outcome"], "OBSTRUCTED");
    assert_eq!(cone["checks"]["tplusnul"], true);
}

#[test]
fn gale_file_round_trip() {
    let gale = scratch("gale.json");
    let gale_path = gale.to_str().unwrap();
    let first = json_against(
        "pointset.schema.json",
        &["pointset", "--builder", "tetrahedron-midpoints", "--gale", gale_path, "--json"],
    );
    assert_eq!(first["gale_file"], gale_path);
    let v = json_against("pointset.schema.json", &["pointset", "--file", gale_path, "--t1", "-1", "1", "--json"]);
    assert_eq!(v["n"], 6);
    assert_eq!(v["cone"]["target"], "input");
    assert_eq!(v["cone"]["window"], serde_json::json!([-1, 1]));
    assert_eq!(v["cone"]["t1"], serde_json::json!({"-1": 0, "0": 15, "1": 0}));
}

#[test]
fn random_configuration_is_deterministic() {
    let args = ["pointset", "--random", "6", "11", "--seed", "7", "--t1-auto", "--json"];
    let a = stdout_ok(&args);
    assert_eq!(a, stdout_ok(&args));
    let v = json_against("pointset.schema.json", &args);
    assert_eq!(v["cone"]["total"], 24);
    assert_eq!(v["general_position"], true);
    let other = stdout_ok(&["pointset", "--random", "6", "11", "--seed", "8", "--json"]);
    assert_ne!(a, other);
}

#[test]
fn self_associated_cone_is_negatively_graded() {
    let v = json_against(
        "pointset.schema.json",
        &["pointset", "--self-associated", "9", "--seed", "3", "--t1-auto", "--json"],
    );
    assert_eq!(v["r"], 18);
    assert_eq!(v["self_associated"], true);
    assert_eq!(v["cone"]["t1"]["-1"], 1);
    assert_eq!(v["cone"]["checks"]["negatively_graded"], true);
}

#[test]
fn summary_table_matches_published_sets() {
    let v = json_against("table.schema.json", &["table", "--n", "6..10", "--format", "json"]);
    let rows = v.as_array().unwrap();
    let expect = [
        (6, "42", "{10,12}∪[15,42]"),
        (7, "138", "{11}∪[13,138]"),
        (8, "419", "[12,419]"),
        (9, "1845/2", "[13,922]"),
        (10, "7909/3", "[14,2636]"),
    ];
    assert_eq!(rows.len(), expect.len());
    for (row, (n, m, set)) in rows.iter().zip(expect) {
        assert_eq!(row["n"], n);
        assert_eq!(row["m_bound"], m);
        assert_eq!(row["non_smoothable"], set, "n = {n}");
    }
}

#[test]
fn low_dimension_rows_carry_provenance() {
    let v = json_against("table.schema.json", &["table", "--n", "4..5", "--format", "json"]);
    for row in v.as_array().unwrap() {
        assert_eq!(row["m_bound"], Value::Null);
        let prov: Vec<&str> = row["provenance"].as_array().unwrap().iter().map(|p| p.as_str().unwrap()).collect();
        assert!(prov.contains(&"published computation: T1_{-1} = 0"), "{prov:?}");
    }
    assert_eq!(v[1]["non_smoothable"], "[41,60]");
}

#[test]
fn table_formats_agree() {
    let base = ["table", "--n", "6..7", "--r", "8..16", "--columns", "d,delta,type,e,moduli"];
    let with = |f: &str| {
        let mut a = base.to_vec();
        a.extend(["--format", f]);
        stdout_ok(&a)
    };
    let json: Value = serde_json::from_str(&with("json")).unwrap();
    let cols = ["n", "r", "outcome", "d", "delta", "type", "e", "moduli"];
    let from_json: Vec<Vec<String>> = json
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            cols.iter()
                .map(|c| match &row[*c] {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect()
        })
        .collect();
    assert_eq!(from_json.len(), 2 * 9);

    let csv_text = with("csv");
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[..cols.len()], cols.map(String::from));
    let from_csv: Vec<Vec<String>> = reader
        .records()
        .map(|r| r.unwrap().iter().take(cols.len()).map(String::from).collect())
        .collect();
    assert_eq!(from_csv, from_json);

    let table_text = with("table");
    let from_table: Vec<Vec<String>> = table_text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().take(cols.len()).map(String::from).collect())
        .collect();
    assert_eq!(from_table, from_json);
}

#[test]
fn text_output_names_the_verdict() {
    let text = stdout_ok(&["semigroup", "13,14,15,16,17,18,20,22,23"]);
    assert!(text.lines().any(|l| l.starts_with("verdict") && l.contains("NON_SMOOTHABLE")), "{text}");
    let text = stdout_ok(&["pointset", "--builder", "tetrahedron-midpoints", "--gale", "-", "--t1", "0", "0"]);
    assert!(text.contains("OBSTRUCTED"), "{text}");
}
