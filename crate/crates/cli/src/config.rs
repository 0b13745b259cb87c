//! Experiment configuration: a TOML file overlaid with command-line flags.
//!
//! ```toml
//! algorithm = "alg3"
//! c = 3
//! seeds = "0..50"
//! ns = [32, 64, 128]
//! csv = "alg3.csv"
//!
//! [graph]
//! kind = "gnp-degree"   # clique | path | pairs | gnp | gnp-degree | file
//! degree = 8.0
//!
//! [wake]
//! kind = "staggered"    # all-at | staggered | file
//! stride = 1
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use beepnet::protocols::{ceil_log2, ProtocolKind};
use beepnet::topology::{make_clique, make_disjoint_pairs, make_gnp, make_path, parse_edge_list, parse_scenario};
use beepnet::{EngineConfig, FeedbackMode, Graph, Round, WakeMode, WakeupSchedule};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    Clique,
    Path,
    Pairs,
    Gnp { p: f64 },
    /// G(n, degree / n).
    GnpDegree { degree: f64 },
    File { path: PathBuf },
}

impl GraphSpec {
    pub fn build(&self, n: Option<usize>, seed: u64) -> Result<Graph, CliError> {
        if let GraphSpec::File { path } = self {
            return Ok(parse_edge_list(&read(path)?)?);
        }
        let n = n.ok_or_else(|| CliError::Config("graph size --n is required".into()))?;
        Ok(match self {
            GraphSpec::Clique => make_clique(n)?,
            GraphSpec::Path => make_path(n)?,
            GraphSpec::Pairs => make_disjoint_pairs(n)?,
            GraphSpec::Gnp { p } => make_gnp(n, *p, seed)?,
            GraphSpec::GnpDegree { degree } => make_gnp(n, (degree / n as f64).min(1.0), seed)?,
            GraphSpec::File { .. } => unreachable!(),
        })
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Clique => f.write_str("clique"),
            GraphSpec::Path => f.write_str("path"),
            GraphSpec::Pairs => f.write_str("pairs"),
            GraphSpec::Gnp { p } => write!(f, "gnp:{p}"),
            GraphSpec::GnpDegree { degree } => write!(f, "gnp-degree:{degree}"),
            GraphSpec::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

/// `clique`, `path`, `pairs`, `gnp:<p>`, `gnp-degree:<d>` or `file:<path>`.
impl FromStr for GraphSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (s, None),
        };
        let number = |what: &str| -> Result<f64, CliError> {
            arg.and_then(|a| a.parse().ok())
                .ok_or_else(|| CliError::Config(format!("graph `{s}` needs a numeric {what}")))
        };
        Ok(match name {
            "clique" => GraphSpec::Clique,
            "path" => GraphSpec::Path,
            "pairs" => GraphSpec::Pairs,
            "gnp" => GraphSpec::Gnp { p: number("p")? },
            "gnp-degree" => GraphSpec::GnpDegree { degree: number("degree")? },
            "file" => GraphSpec::File {
                path: PathBuf::from(arg.filter(|a| !a.is_empty()).ok_or_else(|| {
                    CliError::Config("graph `file:` needs a path".into())
                })?),
            },
            _ => return Err(CliError::Config(format!("unknown graph `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WakeSpec {
    AllAt {
        #[serde(default)]
        round: Round,
    },
    /// Node `u` wakes at `u * stride`.
    Staggered { stride: Round },
    /// A scenario file with `# wake <node> <round>` lines; unlisted nodes are
    /// only woken by beeps.
    File { path: PathBuf },
}

impl WakeSpec {
    pub fn build(&self, n: usize) -> Result<WakeupSchedule, CliError> {
        Ok(match self {
            WakeSpec::AllAt { round } => WakeupSchedule::all_at(n, *round),
            WakeSpec::Staggered { stride } => WakeupSchedule::staggered(n, *stride),
            WakeSpec::File { path } => {
                let parsed = parse_scenario(&read(path)?)?;
                if parsed.wakeup.len() != n {
                    return Err(CliError::Config(format!(
                        "wake file {} describes {} nodes, graph has {n}",
                        path.display(),
                        parsed.wakeup.len()
                    )));
                }
                WakeupSchedule::new(parsed.wakeup)
            }
        })
    }
}

/// `all-at:<r>` (or `all-at-0`), `staggered:<stride>` or `file:<path>`.
impl FromStr for WakeSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("unknown wake spec `{s}`"));
        if s == "all-at-0" || s == "all-at" {
            return Ok(WakeSpec::AllAt { round: 0 });
        }
        let (name, arg) = s.split_once(':').ok_or_else(bad)?;
        Ok(match name {
            "all-at" => WakeSpec::AllAt { round: arg.parse().map_err(|_| bad())? },
            "staggered" => WakeSpec::Staggered { stride: arg.parse().map_err(|_| bad())? },
            "file" if !arg.is_empty() => WakeSpec::File { path: arg.into() },
            _ => return Err(bad()),
        })
    }
}

pub fn parse_feedback(s: &str) -> Result<FeedbackMode, CliError> {
    match s {
        "plain" => Ok(FeedbackMode::Plain),
        "sender-cd" => Ok(FeedbackMode::SenderCd),
        _ => Err(CliError::Config(format!("unknown feedback mode `{s}`"))),
    }
}

pub fn parse_wake_mode(s: &str) -> Result<WakeMode, CliError> {
    match s {
        "adversarial" => Ok(WakeMode::AdversarialOnly),
        "wake-on-beep" => Ok(WakeMode::WakeOnBeep),
        _ => Err(CliError::Config(format!("unknown wake mode `{s}`"))),
    }
}

/// `a..b` (half open), or a comma-separated list.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Config(format!("bad seed list `{s}`"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if a >= b {
            return Err(bad());
        }
        return Ok((a..b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect()
}

pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Config(format!("bad list `{s}`")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum SeedsField {
    List(Vec<u64>),
    Text(String),
}

/// The file form; every field is optional so flags can fill the gaps.
#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    algorithm: Option<String>,
    #[serde(rename = "N")]
    n_bound: Option<u64>,
    c: Option<u64>,
    feedback: Option<String>,
    wake_mode: Option<String>,
    n: Option<usize>,
    ns: Option<Vec<usize>>,
    seed: Option<u64>,
    seeds: Option<SeedsField>,
    horizon: Option<Round>,
    csv: Option<PathBuf>,
    trace: Option<PathBuf>,
    graph: Option<GraphSpec>,
    wake: Option<WakeSpec>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        toml::from_str(&read(path)?)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Command-line values; `None` leaves the file value in place.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub algorithm: Option<String>,
    pub n_bound: Option<u64>,
    pub c: Option<u64>,
    pub feedback: Option<String>,
    pub wake_mode: Option<String>,
    pub n: Option<usize>,
    pub ns: Option<String>,
    pub seed: Option<u64>,
    pub seeds: Option<String>,
    pub horizon: Option<Round>,
    pub csv: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub graph: Option<String>,
    pub wake: Option<String>,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: ProtocolKind,
    pub n_bound: Option<u64>,
    pub c: Option<u64>,
    pub engine: EngineConfig,
    pub graph: GraphSpec,
    /// Sizes to run; empty for file graphs.
    pub ns: Vec<usize>,
    pub wake: WakeSpec,
    pub seeds: Vec<u64>,
    /// `None` selects the default for each size.
    pub horizon: Option<Round>,
    pub csv: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

/// `200 * ceil(log2 n)^3`, with the logarithm at least 1.
pub fn default_horizon(n: usize) -> Round {
    let log = Round::from(ceil_log2(n as u64).max(1));
    200 * log * log * log
}

impl ExperimentConfig {
    pub fn resolve(file: FileConfig, flags: Overrides) -> Result<Self, CliError> {
        let algorithm: ProtocolKind = flags
            .algorithm
            .or(file.algorithm)
            .ok_or_else(|| CliError::Config("--algorithm is required".into()))?
            .parse()?;
        let natural = algorithm.engine_config();
        let feedback = match flags.feedback.or(file.feedback) {
            Some(s) => parse_feedback(&s)?,
            None => natural.feedback,
        };
        let wake_mode = match flags.wake_mode.or(file.wake_mode) {
            Some(s) => parse_wake_mode(&s)?,
            None => natural.wake,
        };
        let graph = match flags.graph {
            Some(s) => s.parse()?,
            None => file
                .graph
                .ok_or_else(|| CliError::Config("--graph is required".into()))?,
        };
        let wake = match flags.wake {
            Some(s) => s.parse()?,
            None => file.wake.unwrap_or(WakeSpec::AllAt { round: 0 }),
        };
        let ns = match (flags.ns, flags.n) {
            (Some(list), _) => parse_list(&list)?,
            (None, Some(n)) => vec![n],
            (None, None) => file.ns.or(file.n.map(|n| vec![n])).unwrap_or_default(),
        };
        let seeds = match (flags.seeds, flags.seed) {
            (Some(s), _) => parse_seeds(&s)?,
            (None, Some(s)) => vec![s],
            (None, None) => match (file.seeds, file.seed) {
                (Some(SeedsField::List(v)), _) => v,
                (Some(SeedsField::Text(s)), _) => parse_seeds(&s)?,
                (None, Some(s)) => vec![s],
                (None, None) => vec![0],
            },
        };
        let config = ExperimentConfig {
            algorithm,
            n_bound: flags.n_bound.or(file.n_bound),
            c: flags.c.or(file.c),
            engine: EngineConfig::new(feedback, wake_mode),
            graph,
            ns,
            wake,
            seeds,
            horizon: flags.horizon.or(file.horizon),
            csv: flags.csv.or(file.csv),
            trace: flags.trace.or(file.trace),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        let alg = self.algorithm;
        if (self.engine.feedback == FeedbackMode::SenderCd) != (alg == ProtocolKind::Alg2) {
            return Err(CliError::Config(if alg == ProtocolKind::Alg2 {
                "alg2 requires --feedback sender-cd".into()
            } else {
                format!("--feedback sender-cd is only valid with alg2, not {alg}")
            }));
        }
        if alg == ProtocolKind::Alg4 {
            match self.wake {
                WakeSpec::AllAt { round: 0 } | WakeSpec::File { .. } => {}
                _ => {
                    return Err(CliError::Config(
                        "alg4 requires --wake all-at-0 or an explicit wake file".into(),
                    ))
                }
            }
        }
        if let Some(bound) = self.n_bound {
            if alg == ProtocolKind::Alg1 {
                if let Some(&n) = self.ns.iter().find(|&&n| n as u64 > bound) {
                    return Err(CliError::Config(format!("alg1 requires N >= n, got N={bound}, n={n}")));
                }
            }
        }
        if matches!(self.graph, GraphSpec::File { .. }) {
            if !self.ns.is_empty() {
                return Err(CliError::Config("--n/--ns cannot be combined with a graph file".into()));
            }
        } else if self.ns.is_empty() {
            return Err(CliError::Config("--n is required".into()));
        }
        if self.seeds.is_empty() {
            return Err(CliError::Config("no seeds given".into()));
        }
        if self.horizon == Some(0) {
            return Err(CliError::Config("--horizon must be positive".into()));
        }
        Ok(())
    }

    /// The size bound handed to alg1 for a graph of `n` nodes: `N` if given,
    /// otherwise `n`.
    pub fn n_bound_for(&self, n: usize) -> Result<u64, CliError> {
        let bound = self.n_bound.unwrap_or(n as u64);
        if self.algorithm == ProtocolKind::Alg1 && bound < n as u64 {
            return Err(CliError::Config(format!("alg1 requires N >= n, got N={bound}, n={n}")));
        }
        Ok(bound)
    }

    pub fn horizon_for(&self, n: usize) -> Round {
        self.horizon.unwrap_or_else(|| default_horizon(n))
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}
