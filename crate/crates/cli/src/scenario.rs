//! Scenario files: TOML with `[scale]`, `[defaults]`, `[nets]`, `[boxes]`
//! and `[[tasks]]`. The grammar is documented in `docs/scenario.md`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use cepalg::expr::{GaugeExpr, NetExpr};
use cepalg::scale::{
    Schedule, ScaleError, DEFAULT_DEGREE, DEFAULT_SCHEDULE_LEN, DEFAULT_SCHEDULE_RATIO,
    DEFAULT_SCHEDULE_START, DEFAULT_TAIL,
};
use cepalg::seminorm::{CompactBox, Grid, DEFAULT_GRID_POINTS};
use cepalg::{Family, Region};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("task `{task}` references undeclared {what} `{name}`")]
    Dangling {
        task: String,
        what: &'static str,
        name: String,
    },
    #[error("invalid schedule: {0}")]
    Schedule(ScaleError),
    #[error("net `{name}`: {message}")]
    Net { name: String, message: String },
    #[error("box `{name}`: {message}")]
    Box { name: String, message: String },
    #[error("task `{task}`: {message}")]
    Task { task: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Moderate,
    Negligible,
    Theorem,
    Equality,
    Embedding,
    Dominate,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Moderate => "moderate",
            Kind::Negligible => "negligible",
            Kind::Theorem => "theorem",
            Kind::Equality => "equality",
            Kind::Embedding => "embedding",
            Kind::Dominate => "dominate",
        })
    }
}

/// Outcome of a task, also used for `expect`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScale {
    gauges: Option<Vec<String>>,
    start: Option<f64>,
    ratio: Option<f64>,
    count: Option<usize>,
    tail: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDefaults {
    degree: Option<u32>,
    grid: Option<usize>,
    order: Option<usize>,
    csv_dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawNet {
    Text(String),
    Table { expr: String, dim: Option<usize> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTask {
    kind: Kind,
    name: Option<String>,
    net: Option<String>,
    boxes: Option<Vec<String>>,
    lhs: Option<String>,
    rhs: Option<String>,
    order: Option<usize>,
    degree: Option<u32>,
    grid: Option<usize>,
    expect: Option<Outcome>,
    #[serde(default)]
    csv: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(default)]
    scale: RawScale,
    #[serde(default)]
    defaults: RawDefaults,
    #[serde(default)]
    nets: BTreeMap<String, RawNet>,
    #[serde(default)]
    boxes: BTreeMap<String, Vec<[f64; 2]>>,
    #[serde(default)]
    tasks: Vec<RawTask>,
}

/// Geometric schedule `start·ratio^j`, `j = 0..count`, judged on its last
/// `tail` points.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleSpec {
    pub gauges: Vec<String>,
    pub start: f64,
    pub ratio: f64,
    pub count: usize,
    pub tail: usize,
}

impl ScaleSpec {
    pub fn family(&self) -> Result<Family, ScaleError> {
        let gauges = self
            .gauges
            .iter()
            .map(|g| GaugeExpr::parse(g))
            .collect::<Result<Vec<_>, _>>()
            .expect("gauges are validated on load");
        Family::declare(gauges, Schedule::geometric(self.start, self.ratio, self.count)?, self.tail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Defaults {
    pub degree: u32,
    pub grid: usize,
    pub order: usize,
}

#[derive(Clone, Debug)]
pub struct Net {
    pub name: String,
    pub text: String,
    pub expr: NetExpr,
}

#[derive(Clone, Debug)]
pub struct NamedBox {
    pub name: String,
    pub region: Region,
}

/// Task arguments after name resolution.
#[derive(Clone, Debug)]
pub enum Args {
    /// `moderate`, `negligible`, `theorem`.
    Net { net: usize, boxes: Vec<usize> },
    Equality { lhs: usize, rhs: usize, boxes: Vec<usize> },
    Embedding { net: usize, boxes: Vec<usize> },
    /// Gauge expressions in λ.
    Dominate { lhs: GaugeExpr, rhs: GaugeExpr },
}

#[derive(Clone, Debug)]
pub struct Task {
    pub name: String,
    pub kind: Kind,
    pub args: Args,
    /// Explicit per-task settings; `None` falls back to the defaults.
    pub order: Option<usize>,
    pub degree: Option<u32>,
    pub grid: Option<usize>,
    pub expect: Option<Outcome>,
    pub csv: bool,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub source: PathBuf,
    pub scale: ScaleSpec,
    pub defaults: Defaults,
    /// Relative paths are resolved against the scenario's directory.
    pub csv_dir: PathBuf,
    pub nets: Vec<Net>,
    pub boxes: Vec<NamedBox>,
    pub tasks: Vec<Task>,
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text, path)
}

/// 1-based line and column of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, column)
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// `path` is only used to resolve relative CSV directories.
pub fn parse_scenario(text: &str, path: &Path) -> Result<Scenario, ScenarioError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| position(text, s.start));
        ScenarioError::Parse {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;

    let scale = ScaleSpec {
        gauges: raw.scale.gauges.unwrap_or_else(|| vec!["lambda".into()]),
        start: raw.scale.start.unwrap_or(DEFAULT_SCHEDULE_START),
        ratio: raw.scale.ratio.unwrap_or(DEFAULT_SCHEDULE_RATIO),
        count: raw.scale.count.unwrap_or(DEFAULT_SCHEDULE_LEN),
        tail: raw.scale.tail.unwrap_or(DEFAULT_TAIL),
    };
    for g in &scale.gauges {
        GaugeExpr::parse(g).map_err(|e| ScenarioError::Invalid(format!("gauge `{g}`: {e}")))?;
    }
    scale.family().map_err(ScenarioError::Schedule)?;

    let defaults = Defaults {
        degree: raw.defaults.degree.unwrap_or(DEFAULT_DEGREE),
        grid: raw.defaults.grid.unwrap_or(DEFAULT_GRID_POINTS),
        order: raw.defaults.order.unwrap_or(1),
    };
    Grid::new(defaults.grid).map_err(|e| ScenarioError::Invalid(format!("defaults.grid: {e}")))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let csv_dir = base.join(raw.defaults.csv_dir.unwrap_or_else(|| "csv".into()));

    let mut nets = Vec::with_capacity(raw.nets.len());
    for (name, net) in raw.nets {
        let (text, dim) = match net {
            RawNet::Text(t) => (t, 1),
            RawNet::Table { expr, dim } => (expr, dim.unwrap_or(1)),
        };
        let err = |message: String| ScenarioError::Net {
            name: name.clone(),
            message,
        };
        if !valid_name(&name) {
            return Err(err("names may only contain letters, digits, `_` and `-`".into()));
        }
        let expr = NetExpr::parse(&text, dim).map_err(|e| err(format!("{e} in `{text}`")))?;
        nets.push(Net { name, text, expr });
    }

    let mut boxes = Vec::with_capacity(raw.boxes.len());
    for (name, intervals) in raw.boxes {
        if !valid_name(&name) {
            return Err(ScenarioError::Box {
                name,
                message: "names may only contain letters, digits, `_` and `-`".into(),
            });
        }
        let region = CompactBox::new(intervals.iter().map(|[a, b]| (*a, *b)).collect())
            .map_err(|e| ScenarioError::Box {
                name: name.clone(),
                message: e.to_string(),
            })?;
        boxes.push(NamedBox { name, region });
    }

    let mut seen = HashSet::new();
    let mut tasks = Vec::with_capacity(raw.tasks.len());
    for (i, t) in raw.tasks.into_iter().enumerate() {
        let name = t.name.clone().unwrap_or_else(|| format!("task{}", i + 1));
        if !valid_name(&name) || !seen.insert(name.clone()) {
            return Err(ScenarioError::Task {
                task: name,
                message: "task names must be unique and use only letters, digits, `_` and `-`".into(),
            });
        }
        tasks.push(resolve_task(t, name, &nets, &boxes)?);
    }

    Ok(Scenario {
        source: path.to_path_buf(),
        scale,
        defaults,
        csv_dir,
        nets,
        boxes,
        tasks,
    })
}

fn resolve_task(t: RawTask, name: String, nets: &[Net], boxes: &[NamedBox]) -> Result<Task, ScenarioError> {
    let task_err = |message: String| ScenarioError::Task {
        task: name.clone(),
        message,
    };
    let require = |field: &Option<String>, key: &str| {
        field
            .clone()
            .ok_or_else(|| task_err(format!("`{}` requires `{key}`", t.kind)))
    };
    let net_index = |n: String| {
        nets.iter().position(|x| x.name == n).ok_or(ScenarioError::Dangling {
            task: name.clone(),
            what: "net",
            name: n,
        })
    };
    let box_indices = |dim: usize| -> Result<Vec<usize>, ScenarioError> {
        let names = t.boxes.clone().unwrap_or_default();
        if names.is_empty() {
            return Err(task_err(format!("`{}` requires a non-empty `boxes` list", t.kind)));
        }
        names
            .into_iter()
            .map(|b| {
                let i = boxes.iter().position(|x| x.name == b).ok_or(ScenarioError::Dangling {
                    task: name.clone(),
                    what: "box",
                    name: b.clone(),
                })?;
                let found = boxes[i].region.dimension();
                if found != dim {
                    return Err(task_err(format!("box `{b}` has dimension {found}, net has dimension {dim}")));
                }
                Ok(i)
            })
            .collect()
    };

    let args = match t.kind {
        Kind::Moderate | Kind::Negligible | Kind::Theorem | Kind::Embedding => {
            let net = net_index(require(&t.net, "net")?)?;
            let boxes = box_indices(nets[net].expr.dimension())?;
            if t.kind == Kind::Embedding {
                Args::Embedding { net, boxes }
            } else {
                Args::Net { net, boxes }
            }
        }
        Kind::Equality => {
            let lhs = net_index(require(&t.lhs, "lhs")?)?;
            let rhs = net_index(require(&t.rhs, "rhs")?)?;
            let dim = nets[lhs].expr.dimension();
            if nets[rhs].expr.dimension() != dim {
                return Err(task_err("`lhs` and `rhs` have different dimensions".into()));
            }
            Args::Equality {
                lhs,
                rhs,
                boxes: box_indices(dim)?,
            }
        }
        Kind::Dominate => {
            let gauge = |key: &str, text: String| {
                GaugeExpr::parse(&text).map_err(|e| task_err(format!("`{key}` = `{text}`: {e}")))
            };
            Args::Dominate {
                lhs: gauge("lhs", require(&t.lhs, "lhs")?)?,
                rhs: gauge("rhs", require(&t.rhs, "rhs")?)?,
            }
        }
    };
    if let Some(n) = t.grid {
        Grid::new(n).map_err(|e| task_err(format!("grid: {e}")))?;
    }
    Ok(Task {
        name,
        kind: t.kind,
        args,
        order: t.order,
        degree: t.degree,
        grid: t.grid,
        expect: t.expect,
        csv: t.csv,
    })
}

/// Command-line settings that replace the scenario's defaults.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub degree: Option<u32>,
    pub grid: Option<usize>,
    pub tail: Option<usize>,
    pub csv_dir: Option<PathBuf>,
}

impl Scenario {
    /// Per-task settings still take precedence over overridden defaults.
    pub fn apply(&mut self, o: &Overrides) -> Result<(), ScenarioError> {
        if let Some(d) = o.degree {
            self.defaults.degree = d;
        }
        if let Some(n) = o.grid {
            Grid::new(n).map_err(|e| ScenarioError::Invalid(format!("grid: {e}")))?;
            self.defaults.grid = n;
        }
        if let Some(t) = o.tail {
            self.scale.tail = t;
            self.scale.family().map_err(ScenarioError::Schedule)?;
        }
        if let Some(dir) = &o.csv_dir {
            self.csv_dir = dir.clone();
        }
        Ok(())
    }
}
