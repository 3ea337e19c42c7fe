//! Query dispatch and report emission.

use crate::dual::{check_ep_condition, nonlocal_ep, separation_infimum, Form, SeparationValue, ZnOutcome};
use crate::error::{Error, Result};
use crate::geometry::dist_region_region;
use crate::mappings::{crosscheck_primal_dual, estimate_rate, product_boundary_condition, CrosscheckReport, MappingView, RateEstimate, RateProperty, Which};
use crate::num::{fmt_scalar, frac, one, serde_scalar, serde_vector, Scalar};
use crate::primal::{
    check_relative_approx_stationary, check_relative_extremal, check_relative_locally_extremal, check_relative_stationary,
    default_schedule, dual_locality, implication_chain, ChainReport, Limits, Mode, SetSystem,
};
use crate::scene::{Query, QueryKind, Scene};
use crate::verdict::{Certificate, Status, Verdict};
use crate::vector::{fmt_vector, Vector};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::time::Instant;

pub const SCHEMA: &str = "v1";

/// Settings that apply to every query of a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunConfig {
    /// Overrides the default ε schedule where a query gives none.
    pub schedule: Option<Vector>,
    pub face_cap: Option<usize>,
    pub grid: Option<usize>,
    /// Record wall-clock time per query. Off by default so reports stay
    /// byte-identical across runs.
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Exact,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Outcome {
    Verdict {
        verdict: Verdict,
    },
    Chain {
        report: ChainReport,
    },
    Separation {
        value: SeparationValue,
    },
    Zn {
        outcome: Option<ZnOutcome>,
    },
    Rates {
        estimates: Vec<RateEstimate>,
    },
    Crosscheck {
        report: CrosscheckReport,
    },
    Distance {
        #[serde(with = "serde_scalar")]
        value: Scalar,
        #[serde(with = "serde_vector")]
        a: Vector,
        #[serde(with = "serde_vector")]
        b: Vector,
    },
    Error {
        kind: String,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub index: usize,
    pub query: Query,
    pub regime: Regime,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub scene: String,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(scene: &str) -> Self {
        Report { schema: SCHEMA.into(), scene: scene.into(), entries: Vec::new() }
    }

    /// 3 if any query hit a soundness error, 2 for any other error, else 0.
    pub fn exit_code(&self) -> i32 {
        let kinds: Vec<&str> = self
            .entries
            .iter()
            .filter_map(|e| match &e.outcome {
                Outcome::Error { kind, .. } => Some(kind.as_str()),
                _ => None,
            })
            .collect();
        if kinds.contains(&"soundness") {
            3
        } else if kinds.is_empty() {
            0
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// The system a query refers to, with the run's limits applied.
pub fn system_for(scene: &Scene, q: &Query, config: &RunConfig) -> Result<SetSystem> {
    let region = |n: &String| scene.regions.get(n).cloned().ok_or_else(|| Error::Input(format!("unknown region `{n}`")));
    let point = |n: &String| scene.points.get(n).cloned().ok_or_else(|| Error::Input(format!("unknown point `{n}`")));
    let [pa, pb] = q.points.as_ref().ok_or_else(|| Error::Input("query has no reference points".into()))?;
    let mut limits = Limits::default();
    if let Some(g) = config.grid {
        limits.grid = g;
    }
    if let Some(c) = config.face_cap {
        limits.face_cap = c;
    }
    Ok(SetSystem::new(region(&q.sets[0])?, region(&q.sets[1])?, point(pa)?, point(pb)?, scene.norm.clone())?.with_limits(limits))
}

fn dispatch(scene: &Scene, q: &Query, config: &RunConfig) -> Result<Outcome> {
    let args = &q.args;
    if q.kind == QueryKind::Distance {
        let (a, b) = (&scene.regions[&q.sets[0]], &scene.regions[&q.sets[1]]);
        let (value, pa, pb) = dist_region_region(a, b, &scene.norm)?;
        return Ok(Outcome::Distance { value, a: pa, b: pb });
    }
    let s = system_for(scene, q, config)?;
    let schedule = || args.schedule.clone().or_else(|| config.schedule.clone()).unwrap_or_else(default_schedule);
    let eps = || args.eps.clone().unwrap_or_else(|| frac(1, 4));
    let tau = || match (&args.tau, args.zn3) {
        (Some(t), _) => Some(t.clone()),
        (None, Some(true)) => Some(frac(1, 2)),
        _ => None,
    };
    let verdict = |v: Verdict| Outcome::Verdict { verdict: v };
    Ok(match q.kind {
        QueryKind::Extremal => {
            let mode = if args.single_shift == Some(true) { Mode::SingleShift } else { Mode::BothShifts };
            verdict(check_relative_extremal(&s, mode)?)
        }
        QueryKind::LocallyExtremal => verdict(check_relative_locally_extremal(&s, &args.rho.clone().unwrap_or_else(one))?),
        QueryKind::Stationary => verdict(check_relative_stationary(&s, &schedule())?),
        QueryKind::ApproxStationary => verdict(check_relative_approx_stationary(&s, &schedule())?),
        QueryKind::EpCondition => verdict(check_ep_condition(&s, args.form.unwrap_or(Form::II), &eps())?),
        QueryKind::SeparationInfimum => {
            let locality = match &args.delta {
                Some(d) => d.clone(),
                None => dual_locality(&s)?,
            };
            Outcome::Separation { value: separation_infimum(&s, &locality)? }
        }
        QueryKind::Zn => Outcome::Zn {
            outcome: crate::dual::zn_separation(&s, &eps(), &args.lambda.clone().unwrap_or_else(|| frac(1, 2)), tau().as_ref())?,
        },
        QueryKind::NonlocalEp => verdict(nonlocal_ep(&s, &eps(), tau().as_ref())?),
        QueryKind::Rates => {
            let view = MappingView { system: s, which: Which::S };
            let delta = args.delta.clone().unwrap_or_else(|| frac(1, 2));
            let grid = args.grid.or(config.grid).unwrap_or(2);
            let props: Vec<RateProperty> = match args.property {
                Some(p) => vec![p],
                None => RateProperty::ALL.to_vec(),
            };
            let estimates = props.into_iter().map(|p| estimate_rate(&view, p, &delta, grid)).collect::<Result<_>>()?;
            Outcome::Rates { estimates }
        }
        QueryKind::Crosscheck => Outcome::Crosscheck { report: crosscheck_primal_dual(&s)? },
        QueryKind::ProductBoundary => verdict(product_boundary_condition(&s)?),
        QueryKind::Chain => Outcome::Chain { report: implication_chain(&s)? },
        QueryKind::Distance => unreachable!("handled above"),
    })
}

/// Runs one query; module errors become error outcomes.
pub fn run_query(scene: &Scene, index: usize, q: &Query, config: &RunConfig) -> Entry {
    let exact = q.sets.iter().all(|n| scene.regions.get(n).is_some_and(|r| r.is_exact()));
    let start = Instant::now();
    let outcome = dispatch(scene, q, config)
        .unwrap_or_else(|e| Outcome::Error { kind: e.kind().into(), message: e.to_string() });
    Entry {
        index,
        query: q.clone(),
        regime: if exact { Regime::Exact } else { Regime::Oracle },
        outcome,
        millis: config.timings.then(|| start.elapsed().as_millis() as u64),
    }
}

pub fn run_scene(scene: &Scene, config: &RunConfig) -> Report {
    let mut r = Report::new(&scene.name);
    r.entries = scene.queries.iter().enumerate().map(|(i, q)| run_query(scene, i, q, config)).collect();
    r
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        Format::Text => text(r),
    }
}

pub fn parse_report(json: &str) -> Result<Report> {
    serde_json::from_str(json).map_err(|e| Error::Input(e.to_string()))
}

fn opt(x: &Option<Scalar>) -> String {
    x.as_ref().map_or("inf".into(), fmt_scalar)
}

fn certificate_block(c: &Certificate, out: &mut String) {
    let line = match c {
        Certificate::Emptiness { certificate } => format!("emptiness: {} Farkas rows", certificate.multipliers.len()),
        Certificate::CommonPoint { point } => format!("common point {}", fmt_vector(point)),
        Certificate::Shifts { witnesses, escape } => {
            let mut s = format!("{} shift witnesses", witnesses.len());
            if let Some(w) = witnesses.last() {
                let _ = write!(s, ", last at eps {}: u = {}, v = {}", fmt_scalar(&w.eps), fmt_vector(&w.witness.u), fmt_vector(&w.witness.v));
            }
            if let Some(e) = escape {
                let _ = write!(s, ", escape {}", fmt_vector(e));
            }
            s
        }
        Certificate::Boundary { escape, reach } => format!("boundary point, escape {} reach {}", fmt_vector(escape), opt(reach)),
        Certificate::Interior { radius, .. } => format!("interior point, radius {}", opt(radius)),
        Certificate::Dual { pair } => format!(
            "dual pair {:?} at a' = {}, b' = {}: a* = {}, b* = {}, eps {}",
            pair.form,
            fmt_vector(&pair.aprime),
            fmt_vector(&pair.bprime),
            fmt_vector(&pair.astar),
            fmt_vector(&pair.bstar),
            fmt_scalar(&pair.eps)
        ),
        Certificate::Separation { value, witnesses } => format!(
            "separation value {} over {} face pairs (locality {}), {} witnesses",
            opt(&value.value),
            value.face_pairs,
            fmt_scalar(&value.locality),
            witnesses.len()
        ),
        Certificate::Grid { resolution, samples } => format!("grid resolution {}, {samples} samples", fmt_scalar(resolution)),
    };
    let _ = writeln!(out, "    certificate: {line}");
}

fn status_text(s: &Status) -> String {
    match s {
        Status::Likely { holds, resolution } => format!("likely {} (grid step {})", if *holds { "holds" } else { "fails" }, fmt_scalar(resolution)),
        other => other.label().to_string(),
    }
}

fn verdict_lines(v: &Verdict, out: &mut String) {
    if let Some(c) = &v.certificate {
        certificate_block(c, out);
    }
    for n in &v.notes {
        let _ = writeln!(out, "    note: {n}");
    }
}

fn text(r: &Report) -> String {
    let mut out = format!("scene {} (schema {})\n", r.scene, r.schema);
    if r.entries.is_empty() {
        out.push_str("no queries\n");
    }
    for e in &r.entries {
        let q = &e.query;
        let at = q.points.as_ref().map_or(String::new(), |[a, b]| format!(" at {a},{b}"));
        let regime = match e.regime {
            Regime::Exact => "exact",
            Regime::Oracle => "oracle",
        };
        let _ = write!(out, "[{}] {} {},{}{} ({regime}): ", e.index, q.kind.label(), q.sets[0], q.sets[1], at);
        match &e.outcome {
            Outcome::Verdict { verdict } => {
                let _ = writeln!(out, "{}", status_text(&verdict.status));
                verdict_lines(verdict, &mut out);
            }
            Outcome::Chain { report } => {
                let labels: Vec<String> =
                    report.levels.iter().map(|l| format!("{} {}", l.level.label(), status_text(&l.verdict.status))).collect();
                let _ = writeln!(out, "{}", labels.join(", "));
                for v in &report.violations {
                    let _ = writeln!(out, "    violation: {v}");
                }
            }
            Outcome::Separation { value } => {
                let _ = writeln!(out, "{} (locality {}, {} face pairs)", opt(&value.value), fmt_scalar(&value.locality), value.face_pairs);
            }
            Outcome::Zn { outcome: None } => out.push_str("no separation found\n"),
            Outcome::Zn { outcome: Some(z) } => {
                let _ = writeln!(
                    out,
                    "a' = {}, b' = {}, a* = {}, deviation {}",
                    fmt_vector(&z.aprime),
                    fmt_vector(&z.bprime),
                    fmt_vector(&z.astar),
                    fmt_scalar(&z.deviation)
                );
            }
            Outcome::Rates { estimates } => {
                out.push('\n');
                for est in estimates {
                    let _ = writeln!(
                        out,
                        "    {}: {} <= alpha <= {} ({} samples, delta {})",
                        est.property.label(),
                        fmt_scalar(&est.alpha_lower),
                        opt(&est.alpha_upper),
                        est.samples.len(),
                        fmt_scalar(&est.delta)
                    );
                }
            }
            Outcome::Crosscheck { report } => {
                let _ = writeln!(
                    out,
                    "{} (extremal {}, dom boundary {}, approx-stationary {})",
                    if report.consistent() { "consistent" } else { "inconsistent" },
                    status_text(&report.extremal),
                    report.dom_boundary,
                    status_text(&report.approx_stationary)
                );
                for m in report.errors.iter().chain(&report.warnings) {
                    let _ = writeln!(out, "    {m}");
                }
            }
            Outcome::Distance { value, a, b } => {
                let _ = writeln!(out, "{} between {} and {}", fmt_scalar(value), fmt_vector(a), fmt_vector(b));
            }
            Outcome::Error { kind, message } => {
                let _ = writeln!(out, "error ({kind}): {message}");
            }
        }
        if let Some(ms) = e.millis {
            let _ = writeln!(out, "    time: {ms} ms");
        }
    }
    out
}
