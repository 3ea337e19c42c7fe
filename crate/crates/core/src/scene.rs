//! Scene files: regions, points, a norm and a list of queries, written as
//! JSON with rationals as `"p/q"` strings.

use crate::dual::Form;
use crate::error::Error;
use crate::geometry::{NormKind, OracleFamily, OracleRegion, PolyhedralNorm, Polyhedron, Region, Row};
use crate::mappings::RateProperty;
use crate::num::{serde_opt_scalar, serde_opt_vector, serde_scalar, serde_vector, serde_vectors, Scalar};
use crate::vector::{neg, Vector};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A scene error with its position in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: Option<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)?;
        if let Some(t) = &self.token {
            write!(f, " (at `{t}`)")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueryKind {
    Extremal,
    LocallyExtremal,
    Stationary,
    ApproxStationary,
    EpCondition,
    SeparationInfimum,
    Zn,
    NonlocalEp,
    Rates,
    Crosscheck,
    ProductBoundary,
    Chain,
    Distance,
}

impl QueryKind {
    pub fn label(&self) -> &'static str {
        match self {
            QueryKind::Extremal => "extremal",
            QueryKind::LocallyExtremal => "locally-extremal",
            QueryKind::Stationary => "stationary",
            QueryKind::ApproxStationary => "approx-stationary",
            QueryKind::EpCondition => "ep-condition",
            QueryKind::SeparationInfimum => "separation-infimum",
            QueryKind::Zn => "zn",
            QueryKind::NonlocalEp => "nonlocal-ep",
            QueryKind::Rates => "rates",
            QueryKind::Crosscheck => "crosscheck",
            QueryKind::ProductBoundary => "product-boundary",
            QueryKind::Chain => "chain",
            QueryKind::Distance => "distance",
        }
    }

    /// Argument names the kind accepts.
    pub fn accepts(&self) -> &'static [&'static str] {
        match self {
            QueryKind::Extremal => &["single_shift"],
            QueryKind::LocallyExtremal => &["rho"],
            QueryKind::Stationary | QueryKind::ApproxStationary => &["schedule"],
            QueryKind::EpCondition => &["eps", "form"],
            QueryKind::SeparationInfimum => &["delta"],
            QueryKind::Zn => &["eps", "lambda", "tau", "zn3"],
            QueryKind::NonlocalEp => &["eps", "tau", "zn3"],
            QueryKind::Rates => &["property", "delta", "grid"],
            QueryKind::Crosscheck | QueryKind::ProductBoundary | QueryKind::Chain | QueryKind::Distance => &[],
        }
    }

    pub fn needs_points(&self) -> bool {
        *self != QueryKind::Distance
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryArgs {
    #[serde(default, with = "serde_opt_scalar", skip_serializing_if = "Option::is_none")]
    pub eps: Option<Scalar>,
    #[serde(default, with = "serde_opt_scalar", skip_serializing_if = "Option::is_none")]
    pub rho: Option<Scalar>,
    #[serde(default, with = "serde_opt_scalar", skip_serializing_if = "Option::is_none")]
    pub delta: Option<Scalar>,
    #[serde(default, with = "serde_opt_scalar", skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Scalar>,
    #[serde(default, with = "serde_opt_scalar", skip_serializing_if = "Option::is_none")]
    pub tau: Option<Scalar>,
    #[serde(default, with = "serde_opt_vector", skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub single_shift: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zn3: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<Form>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub property: Option<RateProperty>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

impl QueryArgs {
    /// Names of the arguments that are set.
    pub fn present(&self) -> Vec<&'static str> {
        let flags = [
            ("eps", self.eps.is_some()),
            ("rho", self.rho.is_some()),
            ("delta", self.delta.is_some()),
            ("lambda", self.lambda.is_some()),
            ("tau", self.tau.is_some()),
            ("schedule", self.schedule.is_some()),
            ("single_shift", self.single_shift.is_some()),
            ("zn3", self.zn3.is_some()),
            ("form", self.form.is_some()),
            ("property", self.property.is_some()),
            ("grid", self.grid.is_some()),
        ];
        flags.iter().filter(|(_, on)| *on).map(|(n, _)| *n).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    pub kind: QueryKind,
    pub sets: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<[String; 2]>,
    #[serde(default)]
    pub args: QueryArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scene {
    pub name: String,
    pub note: String,
    pub dim: usize,
    pub norm: PolyhedralNorm,
    pub regions: BTreeMap<String, Region>,
    pub points: BTreeMap<String, Vector>,
    pub queries: Vec<Query>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    name: String,
    #[serde(default)]
    note: String,
    dim: usize,
    norm: RawNorm,
    regions: BTreeMap<String, RawRegion>,
    #[serde(default)]
    points: BTreeMap<String, RawPoint>,
    #[serde(default)]
    queries: Vec<Query>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNorm {
    kind: NormKind,
    #[serde(default, with = "serde_vectors")]
    facets: Vec<Vector>,
}

#[derive(Deserialize)]
struct RawPoint(#[serde(with = "serde_vector")] Vector);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    #[serde(with = "serde_vector")]
    coef: Vector,
    #[serde(default, with = "serde_opt_scalar")]
    le: Option<Scalar>,
    #[serde(default, with = "serde_opt_scalar")]
    ge: Option<Scalar>,
    #[serde(default, with = "serde_opt_scalar")]
    eq: Option<Scalar>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegion {
    #[serde(default)]
    pieces: Option<Vec<Vec<RawRow>>>,
    #[serde(default)]
    oracle: Option<RawOracle>,
}

#[derive(Deserialize)]
struct RawOracle {
    #[serde(flatten)]
    family: OracleFamily,
    bbox: Vec<RawRow>,
    #[serde(with = "serde_scalar")]
    modulus: Scalar,
}

/// Position of the first `"needle"` at or after the first `anchor`.
fn locate(text: &str, needle: &str, anchor: &str) -> (usize, usize) {
    let quoted = format!("\"{needle}\"");
    let start = text.find(anchor).unwrap_or(0);
    let at = text[start..].find(&quoted).map(|i| i + start).or_else(|| text.find(&quoted)).unwrap_or(0);
    let line = text[..at].matches('\n').count() + 1;
    let column = at - text[..at].rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn semantic(text: &str, needle: &str, anchor: &str, message: String) -> ParseError {
    let (line, column) = locate(text, needle, anchor);
    ParseError { line, column, token: Some(needle.to_string()), message }
}

/// The token ending at (or spanning) the reported position.
fn token_at(text: &str, line: usize, column: usize) -> Option<String> {
    let l = text.lines().nth(line.checked_sub(1)?)?;
    let chars: Vec<char> = l.chars().collect();
    if chars.is_empty() {
        return None;
    }
    let end = column.clamp(1, chars.len());
    let stop = |c: char| matches!(c, ',' | ':' | '[' | ']' | '{' | '}') || c.is_whitespace();
    let mut lo = end;
    while lo > 0 && !stop(chars[lo - 1]) {
        lo -= 1;
    }
    let mut hi = end;
    while hi < chars.len() && !stop(chars[hi]) {
        hi += 1;
    }
    let tok: String = chars[lo..hi].iter().collect();
    (!tok.is_empty()).then_some(tok)
}

fn rows(raw: &[RawRow], dim: usize) -> std::result::Result<Vec<Row>, String> {
    let mut out = Vec::new();
    for r in raw {
        if r.coef.len() != dim {
            return Err(format!("row has {} coefficients, scene dimension is {dim}", r.coef.len()));
        }
        match (&r.le, &r.ge, &r.eq) {
            (Some(b), None, None) => out.push(Row::new(r.coef.clone(), b.clone())),
            (None, Some(b), None) => out.push(Row::new(neg(&r.coef), -b.clone())),
            (None, None, Some(b)) => {
                out.push(Row::new(r.coef.clone(), b.clone()));
                out.push(Row::new(neg(&r.coef), -b.clone()));
            }
            _ => return Err("each row needs exactly one of le, ge, eq".into()),
        }
    }
    Ok(out)
}

pub fn parse_scene(text: &str) -> std::result::Result<Scene, ParseError> {
    let raw: RawScene = serde_json::from_str(text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        let message = e.to_string();
        let message = message.split(" at line ").next().unwrap_or(&message).to_string();
        // Custom value errors name the literal in backticks; point at it directly.
        let quoted = message.split('`').nth(1).filter(|t| !t.is_empty());
        let hit = quoted.and_then(|t| {
            let l = text.lines().nth(line.checked_sub(1)?)?;
            l.find(t).map(|i| (l[..i].chars().count() + 1, t.to_string()))
        });
        match hit {
            Some((col, t)) => ParseError { line, column: col, token: Some(t), message },
            None => ParseError { line, column, token: token_at(text, line, column), message },
        }
    })?;
    let dim = raw.dim;
    if dim == 0 {
        return Err(semantic(text, "dim", "", "dimension must be positive".into()));
    }
    let norm = match raw.norm.kind {
        NormKind::Max => Ok(PolyhedralNorm::max(dim)),
        NormKind::Sum => Ok(PolyhedralNorm::sum(dim)),
        NormKind::PolytopeBall => {
            let f: Vec<(Vector, Scalar)> = raw.norm.facets.into_iter().map(|f| (f, Scalar::from_integer(1.into()))).collect();
            PolyhedralNorm::polytope_ball(dim, &f)
        }
    }
    .map_err(|e: Error| semantic(text, "norm", "", e.to_string()))?;
    let mut regions = BTreeMap::new();
    for (name, r) in raw.regions {
        let err = |m: String| semantic(text, &name, "\"regions\"", m);
        let region = match (r.pieces, r.oracle) {
            (Some(pieces), None) => {
                let mut ps = Vec::new();
                for p in &pieces {
                    ps.push(Polyhedron::new(dim, rows(p, dim).map_err(err)?).map_err(|e| err(e.to_string()))?);
                }
                Region::exact(dim, ps).map_err(|e| err(e.to_string()))?
            }
            (None, Some(o)) => {
                let bbox = Polyhedron::new(dim, rows(&o.bbox, dim).map_err(err)?).map_err(|e| err(e.to_string()))?;
                Region::Oracle(OracleRegion::new(o.family, bbox, o.modulus).map_err(|e| err(e.to_string()))?)
            }
            _ => return Err(err("a region has either pieces or an oracle".into())),
        };
        if region.is_empty() {
            return Err(err("region is empty".into()));
        }
        regions.insert(name, region);
    }
    let mut points = BTreeMap::new();
    for (name, RawPoint(p)) in raw.points {
        if p.len() != dim {
            return Err(semantic(text, &name, "\"points\"", format!("point has {} coordinates, expected {dim}", p.len())));
        }
        points.insert(name, p);
    }
    for q in &raw.queries {
        let anchor = "\"queries\"";
        for s in &q.sets {
            if !regions.contains_key(s) {
                return Err(semantic(text, s, anchor, format!("unknown region `{s}`")));
            }
        }
        match &q.points {
            Some(ps) => {
                for p in ps {
                    if !points.contains_key(p) {
                        return Err(semantic(text, p, anchor, format!("unknown point `{p}`")));
                    }
                }
            }
            None if q.kind.needs_points() => {
                return Err(semantic(text, q.kind.label(), anchor, format!("{} needs reference points", q.kind.label())));
            }
            None => {}
        }
        for a in q.args.present() {
            if !q.kind.accepts().contains(&a) {
                return Err(semantic(text, a, anchor, format!("{} does not take `{a}`", q.kind.label())));
            }
        }
    }
    Ok(Scene { name: raw.name, note: raw.note, dim, norm, regions, points, queries: raw.queries })
}
