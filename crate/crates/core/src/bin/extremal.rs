use clap::{Parser, Subcommand, ValueEnum};
use extremal::corpus::{self, CORPUS};
use extremal::num::parse_scalar;
use extremal::primal::check_translation_invariance;
use extremal::report::{emit_report, run_scene, system_for, Format, Report, RunConfig};
use extremal::scene::{parse_scene, Query, QueryArgs, QueryKind, Scene};
use extremal::svg::{emit_svg, Window};
use extremal::verify::verify_report;
use extremal::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "extremal", version, about = "Exact extremality, stationarity and separation checks for polyhedral scenes")]
struct Cli {
    /// Scene file (.scene.json), or `corpus:NAME` for a built-in scene.
    #[arg(long, global = true)]
    scene: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutFormat,
    /// Comma-separated rationals, strictly decreasing in (0, 1).
    #[arg(long, global = true, value_delimiter = ',')]
    eps_schedule: Option<Vec<String>>,
    /// Maximum number of face pairs examined by dual searches.
    #[arg(long, global = true)]
    face_cap: Option<usize>,
    /// Grid points per axis for oracle regions and rate sampling.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Seed for the random translations of `corpus`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Record per-query wall-clock times (reports are then not reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the scene's queries.
    Check,
    /// Separation value and dual pair for every pair the scene queries.
    Separate,
    /// Sampled regularity rates for every pair the scene queries.
    Rates,
    /// Draw a planar scene as SVG.
    Plot {
        /// World window `x0,x1,y0,y1`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Overlay certificates from running the scene's queries.
        #[arg(long)]
        certificates: bool,
    },
    /// Run the built-in corpus against its golden files.
    Corpus {
        /// Only this scene.
        #[arg(long)]
        name: Option<String>,
        /// Random translations per reference pair.
        #[arg(long, default_value_t = 3)]
        translations: usize,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn load(spec: &Option<String>) -> Result<Scene, String> {
    let spec = spec.as_ref().ok_or("--scene is required")?;
    let text = match spec.strip_prefix("corpus:") {
        Some(name) => corpus::find(name).ok_or(format!("no corpus scene `{name}`"))?.scene.to_string(),
        None => std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?,
    };
    parse_scene(&text).map_err(|e| format!("{spec}: {e}"))
}

/// Distinct (sets, points) pairs used by the scene's queries.
fn pairs(scene: &Scene) -> Vec<([String; 2], [String; 2])> {
    let mut out: Vec<([String; 2], [String; 2])> = Vec::new();
    for q in &scene.queries {
        if let Some(p) = &q.points {
            let key = (q.sets.clone(), p.clone());
            if !out.contains(&key) {
                out.push(key);
            }
        }
    }
    out
}

fn derived(scene: &Scene, kinds: &[(QueryKind, QueryArgs)]) -> Scene {
    let mut s = scene.clone();
    s.queries = pairs(scene)
        .into_iter()
        .flat_map(|(sets, points)| {
            kinds.iter().map(move |(kind, args)| Query { kind: *kind, sets: sets.clone(), points: Some(points.clone()), args: args.clone() })
        })
        .collect();
    s
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_report(r: &Report, format: Format) -> ExitCode {
    emit(&emit_report(r, format));
    ExitCode::from(r.exit_code() as u8)
}

fn random_shift(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Scalar> {
    (0..dim).map(|_| Scalar::new(rng.gen_range(-12..=12).into(), rng.gen_range(1..=4).into())).collect()
}

fn run_corpus(cli: &Cli, config: &RunConfig, name: &Option<String>, translations: usize) -> ExitCode {
    let items: Vec<_> = CORPUS.iter().filter(|c| name.as_ref().is_none_or(|n| n == c.name)).collect();
    if items.is_empty() {
        return fail("no matching corpus scene");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let (mut failures, mut soundness) = (0usize, false);
    let mut lines = Vec::new();
    for item in items {
        let (report, checks) = match corpus::check_item(item, config) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        soundness |= report.exit_code() == 3;
        let scene = item.parse().expect("checked above");
        let mut details = Vec::new();
        let golden_bad: Vec<_> = checks.iter().filter(|c| !c.ok()).collect();
        for c in &golden_bad {
            details.push(format!("  {} query {}: expected {:?}, got {:?}", c.scene, c.query, c.expected, c.got));
        }
        let verify_bad = verify_report(&scene, &report, config).failures;
        soundness |= !verify_bad.is_empty();
        for v in &verify_bad {
            details.push(format!("  {}: verifier: {v}", item.name));
        }
        let mut moved_bad = 0;
        for (sets, points) in pairs(&scene) {
            let q = Query { kind: QueryKind::Chain, sets, points: Some(points), args: QueryArgs::default() };
            let Ok(s) = system_for(&scene, &q, config) else { continue };
            if !s.is_exact() {
                continue;
            }
            for _ in 0..translations {
                let (u, v) = (random_shift(&mut rng, s.dim()), random_shift(&mut rng, s.dim()));
                if !matches!(check_translation_invariance(&s, &u, &v), Ok(true)) {
                    moved_bad += 1;
                }
            }
        }
        if moved_bad > 0 {
            details.push(format!("  {}: {moved_bad} translations changed a verdict", item.name));
        }
        let bad = golden_bad.len() + verify_bad.len() + moved_bad;
        failures += bad;
        lines.push(format!("{} {} ({} golden checks)", if bad == 0 { "ok  " } else { "FAIL" }, item.name, checks.len()));
        lines.extend(details);
    }
    match cli.format {
        OutFormat::Text => {
            emit(&format!("{}\n{failures} failures\n", lines.join("\n")));
        }
        OutFormat::Json => {
            let doc = serde_json::json!({ "schema": extremal::report::SCHEMA, "lines": lines, "failures": failures });
            emit(&(serde_json::to_string_pretty(&doc).expect("json") + "\n"));
        }
    }
    if soundness {
        ExitCode::from(3)
    } else if failures > 0 {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutFormat::Text => Format::Text,
        OutFormat::Json => Format::Json,
    };
    let schedule = match &cli.eps_schedule {
        None => None,
        Some(v) => match v.iter().map(|t| parse_scalar(t.trim())).collect::<Result<Vec<_>, _>>() {
            Ok(s) => {
                if let Err(e) = extremal::primal::validate_schedule(&s) {
                    return fail(e);
                }
                Some(s)
            }
            Err(e) => return fail(format!("--eps-schedule: {e}")),
        },
    };
    let config = RunConfig { schedule, face_cap: cli.face_cap, grid: cli.grid, timings: cli.timings };
    if let Cmd::Corpus { name, translations } = &cli.cmd {
        return run_corpus(&cli, &config, name, *translations);
    }
    let scene = match load(&cli.scene) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match &cli.cmd {
        Cmd::Check => print_report(&run_scene(&scene, &config), format),
        Cmd::Separate => {
            let kinds = [
                (QueryKind::SeparationInfimum, QueryArgs::default()),
                (QueryKind::EpCondition, QueryArgs::default()),
            ];
            print_report(&run_scene(&derived(&scene, &kinds), &config), format)
        }
        Cmd::Rates => {
            let args = QueryArgs { grid: cli.grid, ..QueryArgs::default() };
            print_report(&run_scene(&derived(&scene, &[(QueryKind::Rates, args)]), &config), format)
        }
        Cmd::Plot { window, certificates } => {
            let w = match window {
                Some(text) => match text.split(',').map(|t| t.trim().parse::<f64>()).collect::<Result<Vec<_>, _>>() {
                    Ok(v) if v.len() == 4 => Window { x0: v[0], x1: v[1], y0: v[2], y1: v[3] },
                    _ => return fail("--window takes four numbers x0,x1,y0,y1"),
                },
                None => Window::around(&scene),
            };
            let report = certificates.then(|| run_scene(&scene, &config));
            match emit_svg(&scene, report.as_ref(), &w) {
                Ok(svg) => {
                    emit(&svg);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Cmd::Corpus { .. } => unreachable!("handled above"),
    }
}
