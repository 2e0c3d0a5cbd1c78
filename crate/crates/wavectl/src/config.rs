//! Run configuration: a `key = value` file merged with command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use wavectl_core::expr::PointProfile;
use wavectl_core::{Profile, Rational};

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    SolveLine,
    SolvePeriodic,
    SolveDirichlet,
    SolveNeumann,
    WaveMap,
    CurvatureFlow,
    Radial3d,
    Check,
}

/// One problem parameter. `key` is used in config files, `flag` on the
/// command line.
#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub key: &'static str,
    pub flag: &'static str,
    pub help: &'static str,
}

const fn p(key: &'static str, flag: &'static str, help: &'static str) -> Param {
    Param { key, flag, help }
}

const OUTPUT: [Param; 4] = [
    p("csv", "csv", "write the sampled field to this CSV file"),
    p("report", "report", "write the JSON verification report to this file"),
    p("nt", "nt", "time samples in the CSV output [default: 11]"),
    p("nx", "nx", "space samples in the CSV output [default: 101]"),
];

const F: Param = p("f", "f", "initial profile y(0, x)");
const G: Param = p("g", "g", "terminal profile y(T, x)");
const T: Param = p("T", "T", "time horizon as an integer fraction, e.g. 1/4");
const L: Param = p("L", "L", "period or interval length as an integer fraction");
const LEFT: Param = p("left", "left", "boundary datum at x = 0 as a function of t [default: 0]");
const RIGHT: Param = p("right", "right", "boundary datum at x = L as a function of t [default: 0]");
const WINDOW: Param = p("window", "window", "report window [-w, w] [default: 5]");
const POINTS: Param = p("points", "points", "verification points on the window [default: 2001]");

const LINE: [Param; 7] = [
    F,
    G,
    T,
    p("bridge", "bridge", "bridge function: poly or sine [default: poly]"),
    WINDOW,
    POINTS,
    p("integration", "integration", "quadrature or primitive [default: quadrature]"),
];
const PERIODIC: [Param; 5] = [F, G, T, L, p("k_max", "k-max", "retained Fourier modes [default: 64]")];
const BOUNDED: [Param; 7] = [F, G, T, L, LEFT, RIGHT, p("k_max", "k-max", "retained Fourier modes [default: 512]")];
const WAVEMAP: [Param; 5] = [F, G, T, WINDOW, POINTS];
const CURVATURE: [Param; 5] = [
    p("f", "f", "initial curvature k(0, s)"),
    T,
    L,
    p("k_star", "k-star", "target constant curvature [default: 1]"),
    p("k_max", "k-max", "retained Fourier modes [default: 64]"),
];
const RADIAL: [Param; 10] = [
    p("f", "f", "initial profile in x, y, z"),
    p("g", "g", "terminal profile in x, y, z"),
    T,
    p("points", "points", "evaluation points `x,y,z; x,y,z; ...` [default: 0,0,0]"),
    p("grid", "grid", "n: use an n x n x n grid on [-1, 1]^3 instead of --points"),
    p("dimension", "dimension", "spatial dimension [default: 3]"),
    p("quad_order", "quad-order", "Gauss-Legendre order of the sphere rule [default: 16]"),
    p("table_step", "table-step", "radial table spacing [default: 1e-3]"),
    p("margin", "margin", "radial range beyond T [default: 5]"),
    p("bridge", "bridge", "bridge function: poly or sine [default: poly]"),
];
const CHECK: [Param; 7] = [
    p("kind", "kind", "dirichlet, neumann or periodic"),
    F,
    p("g", "g", "terminal profile [default: 0]"),
    p("T", "T", "time horizon; needed for admissibility and boundary data"),
    L,
    LEFT,
    RIGHT,
];

impl Command {
    pub const ALL: [Command; 8] = [
        Command::SolveLine,
        Command::SolvePeriodic,
        Command::SolveDirichlet,
        Command::SolveNeumann,
        Command::WaveMap,
        Command::CurvatureFlow,
        Command::Radial3d,
        Command::Check,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::SolveLine => "solve-line",
            Command::SolvePeriodic => "solve-periodic",
            Command::SolveDirichlet => "solve-dirichlet",
            Command::SolveNeumann => "solve-neumann",
            Command::WaveMap => "wavemap",
            Command::CurvatureFlow => "curvature-flow",
            Command::Radial3d => "radial3d",
            Command::Check => "check",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Command::SolveLine => "Control on the whole line",
            Command::SolvePeriodic => "Control on the circle of length L",
            Command::SolveDirichlet => "Control on [0, L] with Dirichlet data",
            Command::SolveNeumann => "Control on [0, L] with Neumann data",
            Command::WaveMap => "Control of the wave map y_tt - y_xx = y_t^2 - y_x^2",
            Command::CurvatureFlow => "Steer a closed curve's curvature to a constant",
            Command::Radial3d => "3-D control at points via spherical means",
            Command::Check => "Compatibility and admissibility checks only",
        }
    }

    /// Problem parameters of this command, without the output keys.
    pub fn problem_params(self) -> &'static [Param] {
        match self {
            Command::SolveLine => &LINE,
            Command::SolvePeriodic => &PERIODIC,
            Command::SolveDirichlet | Command::SolveNeumann => &BOUNDED,
            Command::WaveMap => &WAVEMAP,
            Command::CurvatureFlow => &CURVATURE,
            Command::Radial3d => &RADIAL,
            Command::Check => &CHECK,
        }
    }

    pub fn params(self) -> impl Iterator<Item = &'static Param> {
        self.problem_params().iter().chain(OUTPUT.iter())
    }

    pub fn accepts(self, key: &str) -> bool {
        self.params().any(|p| p.key == key)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| UsageError(format!("unknown command `{s}`")))
    }
}

/// Parsed `key = value` lines. `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(UsageError(format!("config line {}: expected `key = value`", n + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(UsageError(format!("config line {}: empty key or value", n + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(UsageError(format!("config line {}: duplicate key `{k}`", n + 1)));
        }
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// A fully resolved run: the command and every parameter given.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub values: BTreeMap<String, String>,
}

impl RunConfig {
    /// Merges file values with flags; flags win. The file may name the
    /// command with `command = ...`.
    pub fn resolve(
        command: Option<Command>,
        file: BTreeMap<String, String>,
        flags: BTreeMap<String, String>,
    ) -> Result<RunConfig, UsageError> {
        let mut values = file;
        let from_file = match values.remove("command") {
            Some(name) => Some(name.parse::<Command>()?),
            None => None,
        };
        let command = match (command, from_file) {
            (Some(a), Some(b)) if a != b => {
                return Err(UsageError(format!("config file is for `{b}`, but `{a}` was requested")))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(UsageError("no command given".into())),
        };
        if let Some(k) = values.keys().find(|k| !command.accepts(k)) {
            return Err(UsageError(format!("unknown key `{k}` for `{command}`")));
        }
        values.extend(flags);
        Ok(RunConfig { command, values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, UsageError> {
        self.get(key).ok_or_else(|| UsageError(format!("missing required parameter `{key}`")))
    }

    /// Problem parameters only, for the report echo.
    pub fn problem_echo(&self) -> BTreeMap<String, String> {
        self.values
            .iter()
            .filter(|(k, _)| self.command.problem_params().iter().any(|p| p.key == k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    pub fn profile(&self, key: &str) -> Result<Profile, UsageError> {
        parse_profile(key, self.require(key)?)
    }

    pub fn profile_or(&self, key: &str, default: &str) -> Result<Profile, UsageError> {
        parse_profile(key, self.get(key).unwrap_or(default))
    }

    pub fn point_profile(&self, key: &str) -> Result<PointProfile, UsageError> {
        let text = self.require(key)?;
        PointProfile::parse(text).map_err(|e| UsageError(format!("`{key}`: {e}")))
    }

    pub fn rational(&self, key: &str) -> Result<Rational, UsageError> {
        let text = self.require(key)?;
        let r: Rational = text.parse().map_err(|e| UsageError(format!("`{key}`: {e}")))?;
        if !r.is_positive() {
            return Err(UsageError(format!("`{key}` must be positive, got {r}")));
        }
        Ok(r)
    }

    pub fn number<N: FromStr>(&self, key: &str, default: N) -> Result<N, UsageError> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s.parse().map_err(|_| UsageError(format!("`{key}`: cannot parse `{s}`"))),
        }
    }

    pub fn choice(&self, key: &str, options: &[&'static str], default: &'static str) -> Result<&'static str, UsageError> {
        let s = self.get(key).unwrap_or(default);
        options
            .iter()
            .copied()
            .find(|o| *o == s)
            .ok_or_else(|| UsageError(format!("`{key}` must be one of {}, got `{s}`", options.join(", "))))
    }
}

fn parse_profile(key: &str, text: &str) -> Result<Profile, UsageError> {
    Profile::parse(text).map_err(|e| UsageError(format!("`{key}`: {e}")))
}
