//! Command implementations behind the `sgzeta` binary.
//!
//! Everything here returns data or rendered text; printing and exit codes are
//! left to `main`.

use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use sgzeta::dirichlet::{eval_closed_form, ClosedFormExpr, DirichletError};
use sgzeta::enumeration::census;
use sgzeta::formulas::{
    a_formula, c_formula, family_a_formula, normal_zeta_closed_form, zeta_closed_form, FormulaError,
};
use sgzeta::spacegroup::GroupError;
use sgzeta::{BuiltinGroup, GroupId, SpaceGroupSpec};

/// Above this maximum index, enumeration mode prints a warning.
pub const ENUMERATE_WARN_LIMIT: usize = 200;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("invalid group definition: {0}")]
    Group(#[from] GroupError),
    #[error(transparent)]
    Series(#[from] DirichletError),
    #[error("cannot read group file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed group file {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("group file declares rank {declared} but its action has {actual} rows")]
    RankMismatch { declared: usize, actual: usize },
    #[error("group {0:?} has no reference closed form; only enumerate mode is available")]
    NoReference(String),
    #[error("--max must be at least 1")]
    ZeroMax,
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Every error is a usage or data error; verification mismatches are not
    /// errors and are reported through [`VerifyReport`].
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Piecewise divisor-sum expressions.
    Formula,
    /// Coefficients of the closed-form Dirichlet series.
    Series,
    /// Brute-force subgroup census.
    Enumerate,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Formula => "formula",
            Mode::Series => "series",
            Mode::Enumerate => "enumerate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// On-disk group definition. `action` is row-major; column j is the image of e_j.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub rank: usize,
    pub action: Vec<Vec<i64>>,
    pub square_word: Vec<i64>,
}

impl GroupFile {
    pub fn from_spec(spec: &SpaceGroupSpec) -> Self {
        Self {
            name: spec.name().to_string(),
            rank: spec.rank(),
            action: spec.action().to_vec(),
            square_word: spec.square_word().to_vec(),
        }
    }
}

/// A presentation to enumerate, plus the closed forms to compare it against.
///
/// For a group file whose name is a known id, the reference is that id, so a
/// corrupted presentation of `C2` is still checked against the `C2` formulas.
#[derive(Debug, Clone)]
pub struct ResolvedGroup {
    pub spec: SpaceGroupSpec,
    pub reference: Option<GroupId>,
}

impl ResolvedGroup {
    pub fn from_id(id: GroupId) -> Result<Self> {
        Ok(Self {
            spec: id.spec()?,
            reference: Some(id),
        })
    }

    pub fn label(&self) -> &str {
        self.spec.name()
    }

    fn reference(&self) -> Result<GroupId> {
        self.reference
            .ok_or_else(|| CliError::NoReference(self.spec.name().to_string()))
    }
}

pub fn resolve(name: &str) -> Result<ResolvedGroup> {
    ResolvedGroup::from_id(name.parse()?)
}

pub fn parse_group_file(text: &str, path: &str) -> Result<ResolvedGroup> {
    let file: GroupFile = serde_json::from_str(text).map_err(|source| CliError::Json {
        path: path.to_string(),
        source,
    })?;
    if file.rank != file.action.len() {
        return Err(CliError::RankMismatch {
            declared: file.rank,
            actual: file.action.len(),
        });
    }
    let reference = file.name.parse::<GroupId>().ok();
    if let Some(id) = reference {
        let expected = id.spec()?.rank();
        if expected != file.rank {
            return Err(CliError::Usage(format!(
                "group file {path} is named {} but has rank {} (expected {expected})",
                file.name, file.rank
            )));
        }
    }
    let spec = SpaceGroupSpec::new(file.name, file.action, file.square_word)?;
    Ok(ResolvedGroup { spec, reference })
}

pub fn load_group_file(path: &Path) -> Result<ResolvedGroup> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: display.clone(),
        source,
    })?;
    parse_group_file(&text, &display)
}

pub fn closed_form(id: GroupId, normal: bool) -> Result<ClosedFormExpr> {
    Ok(if normal {
        normal_zeta_closed_form(id)?
    } else {
        zeta_closed_form(id)?
    })
}

/// Counts for n = 1..=max through one path.
pub fn compute(group: &ResolvedGroup, max: usize, normal: bool, mode: Mode) -> Result<Vec<i64>> {
    if max == 0 {
        return Err(CliError::ZeroMax);
    }
    match mode {
        Mode::Enumerate => Ok(census(&group.spec, max, normal).into_vec()),
        Mode::Series => {
            let expr = closed_form(group.reference()?, normal)?;
            Ok(eval_closed_form(&expr, max)?.into_vec())
        }
        Mode::Formula => {
            let id = group.reference()?;
            let ns = 1..=max as u64;
            match (id, normal) {
                (GroupId::Builtin(g), false) => Ok(ns.map(|n| a_formula(g, n)).collect()),
                (GroupId::Builtin(g), true) => Ok(ns.map(|n| c_formula(g, n)).collect()),
                (GroupId::Family { variant, rank }, false) => {
                    Ok(ns.map(|n| family_a_formula(variant, rank, n)).collect())
                }
                (GroupId::Family { .. }, true) => Err(FormulaError::NoNormalForm(id).into()),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableOutput {
    pub group: String,
    pub normal: bool,
    pub mode: Mode,
    pub max: usize,
    pub counts: Vec<i64>,
}

pub fn render_csv(counts: &[i64]) -> String {
    let mut out = String::from("n,count\n");
    for (i, c) in counts.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, c));
    }
    out
}

/// Inverse of [`render_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<i64>> {
    let mut lines = text.lines();
    if lines.next() != Some("n,count") {
        return Err(CliError::Usage("missing n,count header".to_string()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || CliError::Usage(format!("bad CSV row {line:?}"));
            let (n, count) = line.split_once(',').ok_or_else(bad)?;
            if n.parse::<usize>().map_err(|_| bad())? != i + 1 {
                return Err(bad());
            }
            count.parse::<i64>().map_err(|_| bad())
        })
        .collect()
}

pub fn render_json(table: &TableOutput) -> String {
    serde_json::to_string(table).expect("table serializes") + "\n"
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub n: usize,
    pub formula: i64,
    pub series: i64,
    pub enumerate: i64,
}

/// Outcome of comparing the three paths for one group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub group: String,
    pub normal: bool,
    pub modes: [Mode; 3],
    pub max: usize,
    pub first_mismatch: Option<usize>,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn success(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = if self.normal {
            "normal subgroups"
        } else {
            "subgroups"
        };
        match self.first_mismatch {
            None => writeln!(
                f,
                "{}: {what}, n = 1..{}: formula = series = enumerate",
                self.group, self.max
            ),
            Some(first) => {
                writeln!(
                    f,
                    "{}: {what}, n = 1..{}: MISMATCH (first at n = {first})",
                    self.group, self.max
                )?;
                for m in &self.mismatches {
                    writeln!(
                        f,
                        "  n = {}: formula {} series {} enumerate {}",
                        m.n, m.formula, m.series, m.enumerate
                    )?;
                }
                Ok(())
            }
        }
    }
}

/// Runs all three paths up to `max` and compares them entry by entry.
pub fn verify(group: &ResolvedGroup, max: usize, normal: bool) -> Result<VerifyReport> {
    let formula = compute(group, max, normal, Mode::Formula)?;
    let series = compute(group, max, normal, Mode::Series)?;
    let enumerate = compute(group, max, normal, Mode::Enumerate)?;
    let mismatches: Vec<Mismatch> = (0..max)
        .filter(|&i| !(formula[i] == series[i] && series[i] == enumerate[i]))
        .map(|i| Mismatch {
            n: i + 1,
            formula: formula[i],
            series: series[i],
            enumerate: enumerate[i],
        })
        .collect();
    Ok(VerifyReport {
        group: group.label().to_string(),
        normal,
        modes: [Mode::Formula, Mode::Series, Mode::Enumerate],
        max,
        first_mismatch: mismatches.first().map(|m| m.n),
        mismatches,
    })
}

/// Verifies the eight builtins; reports come back in the canonical order.
pub fn verify_all(max: usize, normal: bool) -> Result<Vec<VerifyReport>> {
    BuiltinGroup::ALL
        .par_iter()
        .map(|&g| verify(&ResolvedGroup::from_id(GroupId::Builtin(g))?, max, normal))
        .collect()
}

fn format_matrix(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| {
            format!(
                "[{}]",
                r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            )
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn format_vector(v: &[i64]) -> String {
    format!(
        "[{}]",
        v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    )
}

/// One line per builtin (name, rank, row-major M, w), then the family syntax.
pub fn groups_listing() -> String {
    let mut out = String::new();
    for g in BuiltinGroup::ALL {
        let spec = g.spec();
        out.push_str(&format!(
            "{:<4} rank={} M={} w={}\n",
            spec.name(),
            spec.rank(),
            format_matrix(spec.action()),
            format_vector(spec.square_word())
        ));
    }
    out.push_str("Family:inversion:m  rank=m M=-I w=0  (m >= 2)\n");
    out.push_str("Family:twisted:m    rank=m M: e1->e1+e2, ei->-ei (i >= 2) w=0  (m >= 2)\n");
    out
}
