//! Flag, config-file, and environment resolution for the scenario runner.
//!
//! Precedence: command-line flags, then the TOML config file (path from
//! `QOPTICS_CONFIG`, falling back to `./qoptics.toml` when present), then
//! the `QOPTICS_OUT_DIR` environment variable for the output directory.

use std::path::{Path, PathBuf};

use clap::Parser;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const ENV_OUT_DIR: &str = "QOPTICS_OUT_DIR";
pub const ENV_CONFIG: &str = "QOPTICS_CONFIG";
pub const DEFAULT_CONFIG_FILE: &str = "qoptics.toml";

#[derive(Debug, Parser)]
#[command(
    name = "qoptics",
    about = "Deterministic quantum-optics scenario runner: every row pairs a \
             numerical result with its analytic value and the deviation between them",
    after_help = "Exit codes: 0 success, 1 invalid configuration, 2 a verification \
                  row exceeded its tolerance."
)]
pub struct Cli {
    /// Scenario name (same as --scenario)
    #[arg(value_name = "SCENARIO")]
    pub scenario_pos: Option<String>,

    /// Scenario: coherent-stats, phase-dist, phase-variance, trig-estimators,
    /// pathology, homodyne, quadrature, mz-sweep, g2, splitter, identities
    #[arg(long)]
    pub scenario: Option<String>,

    /// Fock-space truncation (defaults per scenario)
    #[arg(long)]
    pub nmax: Option<usize>,

    /// Coherent amplitude as "re+imi" or "r@theta" (e.g. "1.5+0.5i", "2@0.785")
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,

    /// Local-oscillator / second amplitude, same syntax as --gamma
    #[arg(long, allow_hyphen_values = true)]
    pub gamma2: Option<String>,

    /// Interferometer internal phase (radians)
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,

    /// Local-oscillator phase (radians)
    #[arg(long, allow_hyphen_values = true)]
    pub phi2: Option<f64>,

    /// Sweep specification "start:stop:points" (points >= 2)
    #[arg(long)]
    pub sweep: Option<String>,

    /// Point count for the scenario's default sweep range
    #[arg(long)]
    pub points: Option<usize>,

    /// Photon number for number-state scenarios
    #[arg(long)]
    pub n: Option<usize>,

    /// Input state kind: vacuum, number, coherent, phase
    #[arg(long)]
    pub state: Option<String>,

    /// |gamma|^2 for the phase-variance scenario (single-point mode)
    #[arg(long, allow_hyphen_values = true)]
    pub gammasq: Option<f64>,

    /// Output format: csv or json
    #[arg(long)]
    pub format: Option<String>,

    /// Output path ("-" for standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Override every row tolerance with this value
    #[arg(long)]
    pub tol: Option<f64>,

    /// Angular frequency (rad/s) for physical-unit output
    #[arg(long)]
    pub omega: Option<f64>,

    /// Mode volume (m^3) for physical-unit output
    #[arg(long)]
    pub volume: Option<f64>,
}

/// Optional defaults loaded from the TOML config file.
#[derive(Debug, Default, Deserialize)]
pub struct FileConfig {
    pub nmax: Option<usize>,
    pub format: Option<String>,
    pub out_dir: Option<PathBuf>,
    pub tol: Option<f64>,
}

impl FileConfig {
    pub fn load() -> Result<Self, String> {
        let explicit = std::env::var_os(ENV_CONFIG).map(PathBuf::from);
        let path = match explicit {
            Some(p) => p,
            None => {
                let fallback = Path::new(DEFAULT_CONFIG_FILE);
                if !fallback.exists() {
                    return Ok(Self::default());
                }
                fallback.to_path_buf()
            }
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config file {}: {e}", path.display()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    CoherentStats,
    PhaseDist,
    PhaseVariance,
    TrigEstimators,
    Pathology,
    Homodyne,
    Quadrature,
    MzSweep,
    G2,
    Splitter,
    Identities,
}

impl Scenario {
    pub const ALL: [Scenario; 11] = [
        Scenario::CoherentStats,
        Scenario::PhaseDist,
        Scenario::PhaseVariance,
        Scenario::TrigEstimators,
        Scenario::Pathology,
        Scenario::Homodyne,
        Scenario::Quadrature,
        Scenario::MzSweep,
        Scenario::G2,
        Scenario::Splitter,
        Scenario::Identities,
    ];

    pub fn parse(name: &str) -> Result<Self, String> {
        Self::ALL
            .iter()
            .copied()
            .find(|s| s.name() == name)
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|s| s.name()).collect();
                format!("unknown scenario '{name}'; expected one of: {}", names.join(", "))
            })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::CoherentStats => "coherent-stats",
            Scenario::PhaseDist => "phase-dist",
            Scenario::PhaseVariance => "phase-variance",
            Scenario::TrigEstimators => "trig-estimators",
            Scenario::Pathology => "pathology",
            Scenario::Homodyne => "homodyne",
            Scenario::Quadrature => "quadrature",
            Scenario::MzSweep => "mz-sweep",
            Scenario::G2 => "g2",
            Scenario::Splitter => "splitter",
            Scenario::Identities => "identities",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Vacuum,
    Number,
    Coherent,
    Phase,
}

impl StateKind {
    fn parse(name: &str) -> Result<Self, String> {
        match name {
            "vacuum" => Ok(Self::Vacuum),
            "number" => Ok(Self::Number),
            "coherent" => Ok(Self::Coherent),
            "phase" => Ok(Self::Phase),
            other => Err(format!(
                "unknown state '{other}'; expected vacuum, number, coherent, or phase"
            )),
        }
    }
}

/// Uniform sweep `start..=stop` with `points` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Sweep {
    pub fn parse(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("sweep must be start:stop:points, got '{text}'"));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| format!("invalid sweep start '{}'", parts[0]))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|_| format!("invalid sweep stop '{}'", parts[1]))?;
        let points: usize = parts[2]
            .parse()
            .map_err(|_| format!("invalid sweep point count '{}'", parts[2]))?;
        Self::new(start, stop, points)
    }

    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self, String> {
        if points < 2 {
            return Err(format!("sweeps need at least 2 points, got {points}"));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err("sweep endpoints must be finite".into());
        }
        Ok(Self { start, stop, points })
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(move |k| self.start + step * k as f64)
    }
}

/// Parses "re+imi" / "re-imi" / "bi" / "re" / "r@theta" complex literals.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Some((r, theta)) = s.split_once('@') {
        let r: f64 = r
            .trim()
            .parse()
            .map_err(|_| format!("invalid magnitude in '{text}'"))?;
        let theta: f64 = theta
            .trim()
            .parse()
            .map_err(|_| format!("invalid angle in '{text}'"))?;
        let z = Complex64::from_polar(r, theta);
        return if z.re.is_finite() && z.im.is_finite() {
            Ok(z)
        } else {
            Err(format!("non-finite complex value '{text}'"))
        };
    }
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Find the sign splitting real and imaginary parts: the last '+'/'-'
        // that is neither leading nor part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let b = bytes[idx];
            if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_part, im_part) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let re: f64 = if re_part.is_empty() {
            0.0
        } else {
            re_part
                .trim()
                .parse()
                .map_err(|_| format!("invalid real part in '{text}'"))?
        };
        let im: f64 = match im_part.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse()
                .map_err(|_| format!("invalid imaginary part in '{text}'"))?,
        };
        if !re.is_finite() || !im.is_finite() {
            return Err(format!("non-finite complex value '{text}'"));
        }
        return Ok(Complex64::new(re, im));
    }
    let re: f64 = s
        .parse()
        .map_err(|_| format!("invalid complex literal '{text}'"))?;
    if !re.is_finite() {
        return Err(format!("non-finite complex value '{text}'"));
    }
    Ok(Complex64::new(re, 0.0))
}

/// Canonical string form used in the config echo so reruns are byte-stable.
pub fn format_complex(z: Complex64) -> String {
    format!("{:+e}{:+e}i", z.re, z.im)
}

/// Where the report goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutTarget {
    Stdout,
    File(PathBuf),
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub nmax: Option<usize>,
    pub gamma: Option<Complex64>,
    pub gamma2: Option<Complex64>,
    pub phi: Option<f64>,
    pub phi2: Option<f64>,
    pub sweep: Option<Sweep>,
    pub points: Option<usize>,
    pub n: Option<usize>,
    pub state: Option<StateKind>,
    pub gammasq: Option<f64>,
    pub format: Format,
    pub out: OutTarget,
    pub tol_override: Option<f64>,
    pub omega: Option<f64>,
    pub volume: Option<f64>,
}

impl RunConfig {
    pub fn resolve(cli: Cli, file: FileConfig) -> Result<Self, String> {
        let name = match (&cli.scenario, &cli.scenario_pos) {
            (Some(flag), Some(pos)) if flag != pos => {
                return Err(format!(
                    "conflicting scenarios '{pos}' (positional) and '{flag}' (--scenario)"
                ));
            }
            (Some(flag), _) => flag.clone(),
            (None, Some(pos)) => pos.clone(),
            (None, None) => return Err("no scenario given (positional or --scenario)".into()),
        };
        let scenario = Scenario::parse(&name)?;

        let format = match cli.format.or(file.format) {
            None => Format::Csv,
            Some(f) if f == "csv" => Format::Csv,
            Some(f) if f == "json" => Format::Json,
            Some(other) => return Err(format!("unknown format '{other}'; expected csv or json")),
        };

        let out = match cli.out {
            Some(p) if p.as_os_str() == "-" => OutTarget::Stdout,
            Some(p) => OutTarget::File(p),
            None => {
                let dir = file
                    .out_dir
                    .or_else(|| std::env::var_os(ENV_OUT_DIR).map(PathBuf::from));
                match dir {
                    Some(dir) => {
                        let ext = match format {
                            Format::Csv => "csv",
                            Format::Json => "json",
                        };
                        OutTarget::File(dir.join(format!("{}.{ext}", scenario.name())))
                    }
                    None => OutTarget::Stdout,
                }
            }
        };

        let gamma = cli.gamma.as_deref().map(parse_complex).transpose()?;
        let gamma2 = cli.gamma2.as_deref().map(parse_complex).transpose()?;
        let sweep = cli.sweep.as_deref().map(Sweep::parse).transpose()?;
        let state = cli.state.as_deref().map(StateKind::parse).transpose()?;

        if let Some(t) = cli.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(format!("tolerance must be a nonnegative finite value, got {t}"));
            }
        }
        if let Some(p) = cli.points {
            if p < 2 {
                return Err(format!("--points needs at least 2, got {p}"));
            }
        }
        for (flag, value) in [("--phi", cli.phi), ("--phi2", cli.phi2)] {
            if let Some(v) = value {
                if !v.is_finite() {
                    return Err(format!("{flag} must be finite, got {v}"));
                }
            }
        }
        for (flag, value) in [("--omega", cli.omega), ("--volume", cli.volume)] {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(format!("{flag} must be positive and finite, got {v}"));
                }
            }
        }
        if let Some(g) = cli.gammasq {
            if !(g.is_finite() && g >= 0.0) {
                return Err(format!("--gammasq must be nonnegative, got {g}"));
            }
        }
        if cli.omega.is_some() != cli.volume.is_some() {
            return Err("--omega and --volume must be given together".into());
        }

        Ok(Self {
            scenario,
            nmax: cli.nmax.or(file.nmax),
            gamma,
            gamma2,
            phi: cli.phi,
            phi2: cli.phi2,
            sweep,
            points: cli.points,
            n: cli.n,
            state,
            gammasq: cli.gammasq,
            format,
            out,
            tol_override: cli.tol.or(file.tol),
            omega: cli.omega,
            volume: cli.volume,
        })
    }

    pub fn mode_scale(&self) -> Result<qoptics::ModeScale, String> {
        match (self.omega, self.volume) {
            (Some(w), Some(v)) => qoptics::ModeScale::physical(w, v).map_err(|e| e.to_string()),
            _ => Ok(qoptics::ModeScale::unit()),
        }
    }
}
