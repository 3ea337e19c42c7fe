use extremal::corpus::{check_item, find, Provenance, CORPUS};
use extremal::report::{emit_report, parse_report, run_scene, Format, RunConfig};
use extremal::scene::parse_scene;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_extremal"))
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let config = RunConfig::default();
    for item in CORPUS {
        let scene = item.parse().unwrap();
        let a = emit_report(&run_scene(&scene, &config), Format::Json);
        let b = emit_report(&run_scene(&scene, &config), Format::Json);
        assert_eq!(a, b, "{}", item.name);
        let back = emit_report(&parse_report(&a).unwrap(), Format::Json);
        assert_eq!(a, back, "{}", item.name);
        assert_eq!(emit_report(&run_scene(&scene, &config), Format::Text), emit_report(&parse_report(&a).unwrap(), Format::Text));
    }
}

#[test]
fn corpus_covers_every_example_with_goldens() {
    let want = [
        ("crossing_halfplanes", vec![Provenance::Exact]),
        ("ex_3_1_1", vec![Provenance::StandIn, Provenance::Oracle]),
        ("ex_3_1_2", vec![Provenance::StandIn, Provenance::Oracle]),
        ("ex_3_2", vec![Provenance::Exact]),
        ("ex_4_2_1", vec![Provenance::StandIn, Provenance::Oracle]),
        ("ex_4_2_2", vec![Provenance::StandIn, Provenance::Oracle]),
        ("ex_4_2_3", vec![Provenance::StandIn, Provenance::Oracle]),
    ];
    for (stem, kinds) in want {
        for k in kinds {
            let name = match k {
                Provenance::Exact => stem.to_string(),
                Provenance::StandIn => format!("{stem}_standin"),
                Provenance::Oracle => format!("{stem}_oracle"),
            };
            let item = find(&name).unwrap_or_else(|| panic!("missing {name}"));
            let g = item.golden().unwrap();
            assert_eq!(g.provenance, k, "{name}");
            assert_eq!(g.expect.len(), item.parse().unwrap().queries.len(), "{name}");
        }
    }
}

#[test]
fn goldens_match() {
    for item in CORPUS {
        let (_, checks) = check_item(item, &RunConfig::default()).unwrap();
        for c in checks {
            assert!(c.ok(), "{}: query {} expected {:?} got {:?}", c.scene, c.query, c.expected, c.got);
        }
    }
}

#[test]
fn parse_errors_point_at_the_input() {
    let bad = "{\n  \"name\": \"x\",\n  \"dim\": 2,\n  \"norm\": {\"kind\": \"max\"},\n  \"regions\": {\"A\": {\"pieces\": [[{\"coef\": [\"1\", \"1.5\"], \"le\": \"0\"}]]}},\n  \"queries\": []\n}";
    let e = parse_scene(bad).unwrap_err();
    assert_eq!(e.line, 5);
    assert_eq!(e.token.as_deref(), Some("1.5"));
    let unknown = "{\"name\": \"x\", \"dim\": 2, \"norm\": {\"kind\": \"sum\"}, \"regions\": {}, \"points\": {\"p\": [\"0\", \"0\"]},\n \"queries\": [{\"kind\": \"extremal\", \"sets\": [\"A\", \"B\"], \"points\": [\"p\", \"p\"]}]}";
    let e = parse_scene(unknown).unwrap_err();
    assert_eq!(e.line, 2);
    assert!(e.message.contains('A'), "{}", e.message);
}

#[test]
fn binary_exit_codes() {
    let out = bin().args(["--scene", "corpus:crossing_halfplanes", "--format", "json", "check"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = parse_report(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(report.exit_code(), 0);

    let dir = std::env::temp_dir().join(format!("extremal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let broken = dir.join("broken.scene.json");
    std::fs::write(&broken, "{\"name\": 1}").unwrap();
    let out = bin().args(["--scene", broken.to_str().unwrap(), "check"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin().args(["--scene", "corpus:crossing_halfplanes", "--eps-schedule", "1/2,3/4", "check"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let solid = dir.join("solid.scene.json");
    std::fs::write(
        &solid,
        r#"{"name": "solid", "dim": 3, "norm": {"kind": "max"},
            "regions": {"A": {"pieces": [[{"coef": ["0", "0", "1"], "le": "0"}]]}},
            "points": {"o": ["0", "0", "0"]},
            "queries": [{"kind": "extremal", "sets": ["A", "A"], "points": ["o", "o"]}]}"#,
    )
    .unwrap();
    let out = bin().args(["--scene", solid.to_str().unwrap(), "check"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin().args(["--scene", solid.to_str().unwrap(), "plot"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();

    let out = bin().args(["--scene", "corpus:ex_3_2", "plot", "--certificates"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("viewBox=\"0 0 800 600\"") && !svg.contains("<script"));
}

#[test]
fn subcommands_run_on_the_corpus() {
    for cmd in ["separate", "rates"] {
        let out = bin().args(["--scene", "corpus:complementary_halfspaces", "--format", "json", cmd]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        parse_report(&String::from_utf8(out.stdout).unwrap()).unwrap();
    }
    let out = bin().args(["--seed", "3", "corpus", "--name", "crossing_halfplanes"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
