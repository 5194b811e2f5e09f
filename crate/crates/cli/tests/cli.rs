use std::path::PathBuf;
use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use torex_cli::figure::Figure;
use torex_cli::report::*;
use torex_core::collections::ExceptionalCollection;

fn fan(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fans", &format!("{name}.json")]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn torex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torex"))
        .args(args)
        .env_remove("NO_COLOR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn report(o: &Output) -> Report {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn typed<T: DeserializeOwned>(v: &serde_json::Value) -> T {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn p2_collection() {
    let o = torex(&["collection", "--fan", &fan("p2"), "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = report(&o);
    assert_eq!(r.command, "collection");
    assert_eq!(r.fan_name, "P2");
    let c: ExceptionalCollection = typed(&r.result);
    assert_eq!(c.classes.len(), 3);
    let w: CollectionWitnesses = typed(&r.witnesses);
    assert!(w.count_check);
    assert!(w.verification.passed);
    let text = torex(&["collection", "--fan", &fan("p2")]);
    assert!(stdout(&text).starts_with("3 classes, count_check: true\n"));
}

#[test]
fn weighted_line_cohomology() {
    let o = torex(&["cohom", "--fan", &fan("p23"), "--class", r#"{"free":[-6],"torsion":[]}"#, "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows: Vec<CohomResult> = typed(&report(&o).result);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].table.dims, vec![0, 0]);

    let o = torex(&[
        "acyclic",
        "--fan",
        &fan("p23"),
        "--class",
        r#"{"free":[-6],"torsion":[]}"#,
        "--class",
        r#"{"free":[-5],"torsion":[]}"#,
        "--json",
    ]);
    let rows: Vec<AcyclicResult> = typed(&report(&o).result);
    assert!(rows[0].acyclic && !rows[0].strongly_acyclic);
    assert!(!rows[1].acyclic);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"d\": 1,\n  \"rays\": [[1], [-1]\n}\n").unwrap();
    let o = torex(&["picard", "--fan", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bad.json:4:1:"), "{}", stderr(&o));

    let extra = dir.path().join("extra.json");
    std::fs::write(&extra, r#"{"d": 1, "rays": [[1], [-1]], "colour": "red"}"#).unwrap();
    let o = torex(&["picard", "--fan", extra.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown field"));

    assert_eq!(code(&torex(&["picard"])), 2);
    assert_eq!(code(&torex(&["frobnicate", "--fan", &fan("p1")])), 2);
    assert_eq!(code(&torex(&["cohom", "--fan", &fan("p1")])), 2);
    let o = torex(&["cohom", "--fan", &fan("p1"), "--class", "{\"free\": [1]"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--class #1:1:"));
    let o = torex(&["cohom", "--fan", &fan("p1"), "--class", r#"{"free":[1,2],"torsion":[]}"#]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&torex(&["figure", "--fan", &fan("p1xp1"), "--viewport", "0,0,0,1"])), 2);
    assert_eq!(code(&torex(&["--version"])), 0);
}

#[test]
fn failed_verification_exits_one() {
    let classes = r#"[{"free":[0],"torsion":[]},{"free":[1],"torsion":[]},{"free":[3],"torsion":[]}]"#;
    let o = torex(&["verify", "--fan", &fan("p2"), "--class", classes, "--json"]);
    assert_eq!(code(&o), 1);
    let r: VerifyResult = typed(&report(&o).result);
    assert!(!r.report.passed);
    let o = torex(&["verify", "--fan", &fan("p1xp2")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn invalid_fan_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("open.json");
    std::fs::write(&f, r#"{"d": 2, "rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2]]}"#).unwrap();
    let o = torex(&["validate", "--fan", f.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    let r: ValidateResult = typed(&report(&o).result);
    assert!(!r.valid && !r.diagnostics.is_empty());
    assert_eq!(code(&torex(&["classify", "--fan", f.to_str().unwrap()])), 2);
}

#[test]
fn counterclockwise_rays_warn() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("ccw.json");
    std::fs::write(&f, r#"{"d": 2, "rays": [[1,0],[0,1],[-1,-1]]}"#).unwrap();
    let o = torex(&["picard", "--fan", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("warning: rays re-sorted clockwise"));
}

#[test]
fn pentagon_figure() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for p in [&a, &b] {
        let o = torex(&["figure", "--fan", &fan("pentagon"), "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    assert!(svg.contains(r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1""#));
    let polygons: Vec<&str> = svg.lines().filter(|l| l.starts_with("<polygon ")).collect();
    assert_eq!(polygons.len(), 2);
    for p in polygons {
        let points = p.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(points.split(' ').count(), 10);
    }
    assert_eq!(svg.matches(r#"class="wedge""#).count(), 11);
    assert_eq!(svg.matches(r#"r="4""#).count(), 5);
}

#[test]
fn rank_two_figure() {
    let o = torex(&["figure", "--fan", &fan("p1xp1")]);
    assert_eq!(code(&o), 0);
    let svg = stdout(&o);
    assert_eq!(svg.matches("<polygon ").count(), 1);
    assert_eq!(svg.matches(r#"class="wedge""#).count(), 3);
    let o = torex(&["figure", "--fan", &fan("p1xp1"), "--viewport=-3,-3,1/2,1", "--json"]);
    let fig: Figure = typed(&report(&o).result);
    assert_eq!(fig.viewport, torex_cli::figure::Viewport::parse("-3,-3,1/2,1").unwrap());
}

#[test]
fn unsupported_figure_is_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.svg");
    let o = torex(&["figure", "--fan", &fan("hexagon"), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("no figure"));
    assert!(!out.exists());
}

#[test]
fn closure_replays() {
    let o = torex(&["closure", "--fan", &fan("p1xp1"), "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = report(&o);
    let w: ClosureWitnesses = typed(&r.witnesses);
    assert!(w.replay_ok);
    assert_eq!(w.known, w.target_count);
    let trace: ClosureResult = typed(&r.result);
    assert!(trace.complete);
}

#[test]
fn reports_round_trip_and_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["validate"],
        &["classify"],
        &["picard"],
        &["forbidden"],
        &["window", "--seed", "7"],
        &["collection", "--seed", "3"],
        &["verify"],
        &["cohom", "--class", r#"{"free":[1,-2,0],"torsion":[]}"#],
    ];
    for (i, extra) in cases.iter().enumerate() {
        let out = dir.path().join(format!("{i}.json"));
        let mut args = extra.to_vec();
        let f = fan("pentagon");
        args.extend(["--fan", &f, "--json", "--out", out.to_str().unwrap()]);
        let first = torex(&args);
        assert_eq!(code(&first), 0, "{extra:?}: {}", stderr(&first));
        let bytes = std::fs::read(&out).unwrap();
        torex(&args);
        assert_eq!(bytes, std::fs::read(&out).unwrap(), "{extra:?}");
        let r: Report = serde_json::from_slice(&bytes).unwrap();
        let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
        assert_eq!(again.as_bytes(), &bytes[..]);
        match r.command.as_str() {
            "validate" => assert!(typed::<ValidateResult>(&r.result).valid),
            "classify" => {
                typed::<ClassifyResult>(&r.result);
            }
            "picard" => assert_eq!(typed::<PicardSummary>(&r.result).rank, 3),
            "forbidden" => assert_eq!(typed::<ForbiddenResult>(&r.result).cones.len(), 11),
            "window" => assert_eq!(typed::<WindowResult>(&r.result).shift.seed, 7),
            "collection" => {
                let c: CollectionResult = typed(&r.result);
                assert_eq!(serde_json::to_value(&c).unwrap(), r.result);
            }
            "verify" => assert!(typed::<VerifyResult>(&r.result).report.passed),
            "cohom" => {
                typed::<Vec<CohomResult>>(&r.result);
            }
            other => panic!("{other}"),
        }
    }
}
