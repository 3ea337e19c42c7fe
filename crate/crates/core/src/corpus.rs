//! The built-in example corpus and its golden expectations.

use crate::error::{Error, Result};
use crate::num::fmt_scalar;
use crate::report::{run_scene, Entry, Outcome, Report, RunConfig};
use crate::scene::{parse_scene, Scene};
use crate::verdict::{Status, Verdict};
use serde::{Deserialize, Serialize};

macro_rules! item {
    ($name:literal) => {
        CorpusItem {
            name: $name,
            scene: include_str!(concat!("../corpus/", $name, ".scene.json")),
            golden: include_str!(concat!("../corpus/golden/", $name, ".json")),
        }
    };
}

#[derive(Debug, Clone, Copy)]
pub struct CorpusItem {
    pub name: &'static str,
    pub scene: &'static str,
    pub golden: &'static str,
}

pub const CORPUS: &[CorpusItem] = &[
    item!("crossing_halfplanes"),
    item!("complementary_halfspaces"),
    item!("ex_3_1_1_standin"),
    item!("ex_3_1_1_oracle"),
    item!("ex_3_1_2_standin"),
    item!("ex_3_1_2_oracle"),
    item!("ex_3_2"),
    item!("ex_4_2_1_standin"),
    item!("ex_4_2_1_oracle"),
    item!("ex_4_2_2_standin"),
    item!("ex_4_2_2_oracle"),
    item!("ex_4_2_3_standin"),
    item!("ex_4_2_3_oracle"),
];

/// How a scene relates to the example it encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    StandIn,
    Oracle,
}

/// Expected summaries, one per query; `null` leaves a query unpinned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Golden {
    pub scene: String,
    pub provenance: Provenance,
    pub expect: Vec<Option<Vec<String>>>,
}

impl CorpusItem {
    pub fn parse(&self) -> Result<Scene> {
        parse_scene(self.scene).map_err(|e| Error::Input(format!("{}: {e}", self.name)))
    }

    pub fn golden(&self) -> Result<Golden> {
        serde_json::from_str(self.golden).map_err(|e| Error::Input(format!("{} golden: {e}", self.name)))
    }
}

pub fn find(name: &str) -> Option<&'static CorpusItem> {
    CORPUS.iter().find(|c| c.name == name)
}

fn status(s: &Status) -> String {
    match s {
        Status::Likely { holds, .. } => format!("likely_{holds}"),
        other => other.label().to_string(),
    }
}

fn verdict(v: &Verdict) -> String {
    status(&v.status)
}

/// Short comparable form of an outcome.
pub fn summarize(e: &Entry) -> Vec<String> {
    match &e.outcome {
        Outcome::Verdict { verdict: v } => vec![verdict(v)],
        Outcome::Chain { report } => report.levels.iter().map(|l| verdict(&l.verdict)).collect(),
        Outcome::Separation { value } => vec![value.value.as_ref().map_or("none".into(), fmt_scalar)],
        Outcome::Zn { outcome } => vec![if outcome.is_some() { "found" } else { "none" }.into()],
        Outcome::Rates { estimates } => estimates
            .iter()
            .map(|r| format!("{}:{}", r.property.label(), r.alpha_upper.as_ref().map_or("inf".into(), fmt_scalar)))
            .collect(),
        Outcome::Crosscheck { report } => vec![if report.consistent() { "consistent" } else { "inconsistent" }.into()],
        Outcome::Distance { value, .. } => vec![fmt_scalar(value)],
        Outcome::Error { kind, .. } => vec![format!("error:{kind}")],
    }
}

/// One golden comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub scene: String,
    pub query: usize,
    pub expected: Vec<String>,
    pub got: Vec<String>,
}

impl GoldenCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.got
    }
}

/// Runs a corpus scene and compares it with its golden file.
pub fn check_item(item: &CorpusItem, config: &RunConfig) -> Result<(Report, Vec<GoldenCheck>)> {
    let scene = item.parse()?;
    let golden = item.golden()?;
    if golden.scene != scene.name || golden.expect.len() != scene.queries.len() {
        return Err(Error::Input(format!("{}: golden file does not match the scene", item.name)));
    }
    let report = run_scene(&scene, config);
    let checks = report
        .entries
        .iter()
        .zip(&golden.expect)
        .filter_map(|(e, g)| {
            g.as_ref().map(|g| GoldenCheck { scene: scene.name.clone(), query: e.index, expected: g.clone(), got: summarize(e) })
        })
        .collect();
    Ok((report, checks))
}
