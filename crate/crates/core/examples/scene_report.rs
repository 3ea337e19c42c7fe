use extremal::report::{emit_report, run_scene, Format, RunConfig};
use extremal::scene::parse_scene;
use extremal::svg::{emit_svg, Window};
use extremal::verify::verify_report;

const SCENE: &str = r#"{
  "name": "wedge_on_a_floor",
  "dim": 2,
  "norm": {"kind": "max"},
  "regions": {
    "floor": {"pieces": [[{"coef": ["0", "1"], "le": "0"}]]},
    "wedge": {"pieces": [[{"coef": ["1", "1"], "ge": "0"}, {"coef": ["-1", "1"], "ge": "0"}]]}
  },
  "points": {"o": ["0", "0"]},
  "queries": [
    {"kind": "chain", "sets": ["floor", "wedge"], "points": ["o", "o"]},
    {"kind": "separation-infimum", "sets": ["floor", "wedge"], "points": ["o", "o"]},
    {"kind": "ep-condition", "sets": ["floor", "wedge"], "points": ["o", "o"], "args": {"eps": "1/8", "form": "ii"}}
  ]
}"#;

fn main() {
    let scene = parse_scene(SCENE).unwrap();
    let config = RunConfig::default();
    let report = run_scene(&scene, &config);
    print!("{}", emit_report(&report, Format::Text));

    let check = verify_report(&scene, &report, &config);
    println!("independent check: {} Farkas, {} shifts, {} dual pairs, ok = {}", check.emptiness, check.shifts, check.pairs, check.ok());

    let svg = emit_svg(&scene, Some(&report), &Window::around(&scene)).unwrap();
    let path = std::env::temp_dir().join("wedge_on_a_floor.svg");
    std::fs::write(&path, svg).unwrap();
    println!("wrote {}", path.display());
}
