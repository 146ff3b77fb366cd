use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mincomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mincomp"))
        .args(args)
        .env_remove("MINCOMP_MAX_MODULUS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = mincomp(&all);
    let v = serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&o.stderr)));
    (v, code(&o))
}

fn schema_for(command: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{command}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

/// One run per command, with its expected exit status.
const RUNS: &[(&[&str], i32)] = &[
    (&["sumset", "fin:1,3,7,15", "fin:-1,-3", "--window=-3:14"], 0),
    (&["sumset", "gen:pow2", "per:m=8;R=0", "--window=0:6"], 2),
    (&["gap", "gen:pow2", "--window=0:100"], 0),
    (&["verify-mac", "per:m=2;R=0", "fin:0,1"], 0),
    (&["verify-mac", "per:m=2;R=0", "fin:0,1,2"], 0),
    (&["verify-mac", "fin:0", "fin:0,1,2"], 0),
    (
        &["build-cominimal", "gen:lacunary(lambda=2,start=1)", "--window=-10:10"],
        0,
    ),
    (&["build-cominimal", "gen:mersenne", "--depth=3"], 0),
    (&["refute", "ep:m=4;A=0,1,2", "--w-size-max=2", "--radius=10"], 2),
    (&["solve-cyclic", "per:m=6;R=0,1,2"], 0),
    (&["solve-cyclic", "per:m=5;R=0,1,2,3"], 0),
    (&["enum-min-complements", "per:m=6;R=0,3"], 0),
    (&["cayley-dom", "12"], 0),
    (&["classify-ep", "ep:m=4;A=0,1,2"], 0),
    (&["classify-ep", "ep:m=2;A=0;F=3"], 0),
    (&["classify-ep", "ep:m=2;A=0"], 0),
    (&["classify-ep", "ep:m=7;A=0,1;F=3"], 2),
    (&["density", "ep:m=4;A=0,1,2", "--two-sided"], 0),
    (&["cover-construct", "rest", "--f=0,1"], 0),
    (&["cover-construct", "arising", "--f=1,4"], 0),
    (&["cover-construct", "prime", "ep:m=5;A=0,1;F=3", "--window=-30:30"], 0),
];

#[test]
fn exit_codes_match_the_answers() {
    for (args, want) in RUNS {
        let o = mincomp(args);
        assert_eq!(code(&o), *want, "{args:?}\n{}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn json_reports_validate_against_their_schemas() {
    for (args, _) in RUNS {
        let (v, _) = json_of(args);
        let validator = schema_for(args[0]);
        let errors: Vec<String> = validator
            .iter_errors(&v)
            .map(|e| format!("{} at {}", e, e.instance_path()))
            .collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}

#[test]
fn text_and_json_report_the_same_verdict() {
    for (args, _) in RUNS {
        let (v, json_code) = json_of(args);
        let o = mincomp(args);
        let text = String::from_utf8(o.stdout.clone()).unwrap();
        let first = text.lines().next().unwrap_or_default();
        assert_eq!(
            first,
            format!("verdict: {}", v["verdict"].as_str().unwrap()),
            "{args:?}"
        );
        assert_eq!(code(&o), json_code, "{args:?}");
    }
}

#[test]
fn documented_examples() {
    let (v, c) = json_of(&["classify-ep", "ep:m=4;A=0,1,2"]);
    assert_eq!(
        (v["verdict"].as_str(), v["reason"].as_str(), c),
        (Some("RuledOut"), Some("DensityCor"), 0)
    );

    let (v, _) = json_of(&["cayley-dom", "2"]);
    assert_eq!(v["result"]["gamma"], 1);

    let (v, _) = json_of(&["sumset", "fin:1,3,7,15", "fin:-1,-3", "--window=-3:14"]);
    assert_eq!(v["result"]["elements"], serde_json::json!([-2, 0, 2, 4, 6, 12, 14]));

    let (v, _) = json_of(&["density", "ep:m=4;A=0,1,2", "--two-sided"]);
    assert_eq!(v["density"]["upper_banach"], "3/4");
    assert_eq!(v["density"]["lower_banach"], "3/4");

    let (v, _) = json_of(&["cover-construct", "rest", "--f=0,1", "--w=per:m=1;R=0"]);
    assert_eq!(v["witnesses"], serde_json::json!([[0, 2], [1, 4]]));
}

#[test]
fn certificates_from_the_cli_check_out() {
    let (v, _) = json_of(&["build-cominimal", "gen:pow2", "--window=-10:10"]);
    let pair = &v["pair"];
    assert_eq!(pair["c_to_w"]["verdict"]["kind"], "certified_on_window");
    assert_eq!(pair["w_to_c"]["verdict"]["kind"], "certified_on_window");
    // Re-check the partner independently of the construction.
    let w: Vec<String> = pair["w"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.to_string().trim_matches('"').to_string())
        .collect();
    let o = mincomp(&[
        "verify-mac",
        "gen:pow2",
        &format!("fin:{}", w.join(",")),
        "--window=-10:10",
    ]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .starts_with("verdict: certified_on_window"));
}

#[test]
fn modulus_cap_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_mincomp"))
        .args(["solve-cyclic", "per:m=9;R=0,1"])
        .env("MINCOMP_MAX_MODULUS", "8")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the configured maximum 8"));
    let o = mincomp(&["solve-cyclic", "per:m=9;R=0,1", "--max-modulus=8"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&mincomp(&["solve-cyclic", "per:m=9;R=0,1"])), 0);
}

#[test]
fn errors_exit_with_one() {
    for args in [
        &["sumset", "fin:1,", "fin:0"][..],
        &["classify-ep", "fin:1"],
        &["solve-cyclic", "ep:m=2;A=0"],
        &["gap", "fin:1", "--window=0:5"],
        &["build-cominimal", "fin:1,2"],
        &["cover-construct", "prime", "ep:m=5;A=0,1;F=2"],
    ] {
        let o = mincomp(args);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "), "{args:?}");
    }
}
