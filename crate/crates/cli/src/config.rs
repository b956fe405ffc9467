//! Run configuration: built-in defaults, then a preset, then the config
//! file, then command-line flags.
//!
//! Config files are flat `section.key = value` lines; `#` starts a comment.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use kitaev_core::{
    AxisRange, Chain, ChainSpec2, ChainSpec3, CheckConfig, EpsAxis, InitialState, KitaevChain, Measure,
};

use crate::error::{CliError, CliResult};
use crate::presets::{self, PresetKind};

pub const WORKERS_ENV: &str = "KITAEV_WORKERS";

/// Settings that may come from flags or from a config file. `None` means
/// "not given here".
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Overrides {
    /// Number of sites
    #[arg(long = "chain", value_parser = clap::value_parser!(u8).range(2..=3))]
    pub sites: Option<u8>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps3: Option<f64>,
    /// Hopping; on three sites sets both τ1 and τ2
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau2: Option<f64>,
    /// Pairing; on three sites sets both Δ1 and Δ2
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta2: Option<f64>,
    /// 00, 11, bell+, 000, 111 or ghz
    #[arg(long)]
    pub initial: Option<String>,
    /// Comma-separated, e.g. C,EG,Rp,Ed or C12,C13,EG_GHZ
    #[arg(long)]
    pub measures: Option<String>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// lo,hi,step
    #[arg(long, allow_hyphen_values = true)]
    pub eps_range: Option<String>,
    /// eps, eps1, eps2, eps3 or eps13
    #[arg(long)]
    pub eps_axis: Option<String>,
    /// lo,hi,step; selects the max-C13 map in `sweep`
    #[arg(long, allow_hyphen_values = true)]
    pub delta_range: Option<String>,
    /// Figure dataset, e.g. fig2a, fig3c, fig5a, fig6ab
    #[arg(long)]
    pub preset: Option<String>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads [default: $KITAEV_WORKERS or all cores]
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
}

macro_rules! overlay_fields {
    ($base:expr, $top:expr, $($f:ident),*) => {
        Overrides { $($f: $top.$f.or($base.$f)),* }
    };
}

impl Overrides {
    /// Fields set in `top` win.
    pub fn overlay(self, top: Overrides) -> Overrides {
        overlay_fields!(
            self, top, sites, eps1, eps2, eps3, tau, tau1, tau2, delta, delta1, delta2, initial, measures, t_max, dt,
            eps_range, eps_axis, delta_range, preset, out, workers
        )
    }

    /// Parses config-file text.
    pub fn parse_config(text: &str) -> CliResult<Overrides> {
        let mut o = Overrides::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {}: expected `section.key = value`", n + 1)))?;
            o.set(key.trim(), value.trim())
                .map_err(|e| CliError::usage(format!("config line {}: {e}", n + 1)))?;
        }
        Ok(o)
    }

    pub fn load(path: &Path) -> CliResult<Overrides> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_config(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<Option<T>, String> {
            v.parse().map(Some).map_err(|_| format!("`{key}` expects a number, got `{v}`"))
        }
        let text = Some(value.to_string());
        match key {
            "chain.sites" => self.sites = num(key, value)?,
            "chain.eps1" => self.eps1 = num(key, value)?,
            "chain.eps2" => self.eps2 = num(key, value)?,
            "chain.eps3" => self.eps3 = num(key, value)?,
            "chain.tau" => self.tau = num(key, value)?,
            "chain.tau1" => self.tau1 = num(key, value)?,
            "chain.tau2" => self.tau2 = num(key, value)?,
            "chain.delta" => self.delta = num(key, value)?,
            "chain.delta1" => self.delta1 = num(key, value)?,
            "chain.delta2" => self.delta2 = num(key, value)?,
            "run.initial" => self.initial = text,
            "run.measures" => self.measures = text,
            "run.preset" => self.preset = text,
            "run.out" => self.out = Some(PathBuf::from(value)),
            "run.workers" => self.workers = num(key, value)?,
            "time.t_max" => self.t_max = num(key, value)?,
            "time.dt" => self.dt = num(key, value)?,
            "sweep.eps_range" => self.eps_range = text,
            "sweep.eps_axis" => self.eps_axis = text,
            "sweep.delta_range" => self.delta_range = text,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }
}

/// What a resolved run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Spectrum,
    Evolve,
    TimeMap,
    MaxC13,
}

/// Subcommand that requested the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandName {
    Spectrum,
    Evolve,
    Sweep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub chain: Chain<f64>,
    pub initial: InitialState,
    pub measures: Vec<Measure>,
    pub times: AxisRange<f64>,
    pub eps_axis: EpsAxis,
    pub eps: AxisRange<f64>,
    pub delta: AxisRange<f64>,
    pub out: Option<PathBuf>,
    pub workers: usize,
}

pub const DEFAULT_T_MAX: f64 = 10.0;
pub const DEFAULT_MAP_HORIZON: f64 = 7.0;
pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_EPS: (f64, f64, f64) = (-2.0, 2.0, 0.01);
pub const DEFAULT_MAP_EPS: (f64, f64, f64) = (-2.0, 2.0, 0.02);
pub const DEFAULT_MAP_DELTA: (f64, f64, f64) = (0.0, 2.0, 0.01);

fn range(spec: &Option<String>, default: (f64, f64, f64)) -> CliResult<AxisRange<f64>> {
    Ok(match spec {
        Some(s) => AxisRange::parse(s)?,
        None => AxisRange::new(default.0, default.1, default.2)?,
    })
}

/// Worker count from the flag, then `KITAEV_WORKERS`, then the core count.
pub fn resolve_workers(flag: Option<u32>) -> CliResult<usize> {
    if let Some(w) = flag {
        return Ok(w as usize);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(w) if w >= 1 => Ok(w),
            _ => Err(CliError::usage(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn apply_chain(base: Chain<f64>, o: &Overrides) -> CliResult<Chain<f64>> {
    match base {
        Chain::Two(mut c) => {
            let three_only = [
                ("--eps3", o.eps3),
                ("--tau1", o.tau1),
                ("--tau2", o.tau2),
                ("--delta1", o.delta1),
                ("--delta2", o.delta2),
            ];
            if let Some((flag, _)) = three_only.iter().find(|(_, v)| v.is_some()) {
                return Err(CliError::usage(format!("{flag} applies to three-site chains only")));
            }
            c.eps1 = o.eps1.unwrap_or(c.eps1);
            c.eps2 = o.eps2.unwrap_or(c.eps2);
            c.tau = o.tau.unwrap_or(c.tau);
            c.delta = o.delta.unwrap_or(c.delta);
            c.validate()?;
            Ok(Chain::Two(c))
        }
        Chain::Three(mut c) => {
            c.eps1 = o.eps1.unwrap_or(c.eps1);
            c.eps2 = o.eps2.unwrap_or(c.eps2);
            c.eps3 = o.eps3.unwrap_or(c.eps3);
            c.tau1 = o.tau1.or(o.tau).unwrap_or(c.tau1);
            c.tau2 = o.tau2.or(o.tau).unwrap_or(c.tau2);
            c.delta1 = o.delta1.or(o.delta).unwrap_or(c.delta1);
            c.delta2 = o.delta2.or(o.delta).unwrap_or(c.delta2);
            c.validate()?;
            Ok(Chain::Three(c))
        }
    }
}

impl RunConfig {
    pub fn resolve(command: CommandName, o: &Overrides) -> CliResult<RunConfig> {
        let preset = match &o.preset {
            Some(name) => Some(presets::find(name).ok_or_else(|| CliError::usage(format!("unknown preset `{name}`")))?),
            None => None,
        };
        let task = match (command, preset.as_ref().map(|p| p.kind)) {
            (CommandName::Spectrum, None | Some(PresetKind::Spectrum)) => Task::Spectrum,
            (CommandName::Evolve, None | Some(PresetKind::Trace)) => Task::Evolve,
            (CommandName::Sweep, Some(PresetKind::Spectrum)) => Task::Spectrum,
            (CommandName::Sweep, Some(PresetKind::Trace)) => Task::Evolve,
            (CommandName::Sweep, Some(PresetKind::TimeMap)) => Task::TimeMap,
            (CommandName::Sweep, Some(PresetKind::MaxC13)) => Task::MaxC13,
            (CommandName::Sweep, None) if o.delta_range.is_some() => Task::MaxC13,
            (CommandName::Sweep, None) => Task::TimeMap,
            (_, Some(_)) => {
                return Err(CliError::usage(format!(
                    "preset `{}` is not a {} dataset; run it with `sweep`",
                    o.preset.as_deref().unwrap_or_default(),
                    if command == CommandName::Spectrum { "spectrum" } else { "time-trace" }
                )))
            }
        };

        let sites = o.sites.map(usize::from);
        let base = match (&preset, sites) {
            (Some(p), Some(s)) if p.chain.sites() != s => {
                return Err(CliError::usage(format!("preset `{}` is a {}-site chain", p.name, p.chain.sites())))
            }
            (Some(p), _) => p.chain,
            (None, Some(3)) => Chain::Three(ChainSpec3::sweet_spot(1.0)),
            (None, None) if task == Task::MaxC13 => Chain::Three(ChainSpec3::sweet_spot(1.0)),
            (None, _) => Chain::Two(ChainSpec2::sweet_spot(1.0)),
        };
        let chain = apply_chain(base, o)?;
        let sites = chain.sites();
        if task == Task::MaxC13 && sites != 3 {
            return Err(CliError::usage("the max-C13 map needs a three-site chain"));
        }

        let initial = match (&o.initial, &preset) {
            (Some(s), _) => s.parse()?,
            (None, Some(p)) => p.initial,
            (None, None) if sites == 2 => InitialState::Empty2,
            (None, None) => InitialState::Empty3,
        };
        if initial.sites() != sites {
            return Err(CliError::usage(format!("initial state `{initial}` does not fit a {sites}-site chain")));
        }
        if task == Task::MaxC13 && initial != InitialState::Empty3 {
            return Err(CliError::usage("the max-C13 map always starts from 000"));
        }
        let measures = match (&o.measures, &preset) {
            (Some(s), _) => Measure::parse_list(s)?,
            (None, Some(p)) if !p.measures.is_empty() => p.measures.clone(),
            _ => Measure::defaults(sites),
        };
        if let Some(m) = measures.iter().find(|m| !m.applies_to(sites)) {
            return Err(CliError::usage(format!("measure `{m}` does not apply to a {sites}-site chain")));
        }

        let is_map = task == Task::MaxC13;
        let t_max = o.t_max.unwrap_or(if is_map { DEFAULT_MAP_HORIZON } else { DEFAULT_T_MAX });
        let times = AxisRange::new(0.0, t_max, o.dt.unwrap_or(DEFAULT_DT))?;
        let eps_axis = match (&o.eps_axis, &preset) {
            (Some(s), _) => s.parse()?,
            (None, Some(p)) => p.eps_axis,
            (None, None) => EpsAxis::Eps,
        };
        eps_axis.apply(&chain, 0.0)?;
        let eps = range(&o.eps_range, if is_map { DEFAULT_MAP_EPS } else { DEFAULT_EPS })?;
        let delta = range(&o.delta_range, DEFAULT_MAP_DELTA)?;

        Ok(RunConfig {
            task,
            chain,
            initial,
            measures,
            times,
            eps_axis,
            eps,
            delta,
            out: o.out.clone(),
            workers: resolve_workers(o.workers)?,
        })
    }
}

/// `check` settings.
#[derive(Debug, Clone, PartialEq, Args)]
pub struct CheckArgs {
    /// Random draws per randomised invariant
    #[arg(long, default_value_t = CheckConfig::default().samples)]
    pub samples: usize,
    #[arg(long, default_value_t = CheckConfig::default().seed)]
    pub seed: u64,
    /// Report file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> Overrides {
        Overrides {
            workers: Some(1),
            ..Overrides::default()
        }
    }

    #[test]
    fn config_file_parsing() {
        let text = "# comment\nchain.sites = 3\nchain.eps2 = -0.5  # trailing\nsweep.eps_range = -1,1,0.5\nrun.measures = C12,C13\n\n";
        let parsed = Overrides::parse_config(text).unwrap();
        assert_eq!(parsed.sites, Some(3));
        assert_eq!(parsed.eps2, Some(-0.5));
        assert_eq!(parsed.eps_range.as_deref(), Some("-1,1,0.5"));
        assert!(Overrides::parse_config("chain.bogus = 1").is_err());
        assert!(Overrides::parse_config("chain.eps1 = x").is_err());
        assert!(Overrides::parse_config("no equals sign").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = Overrides {
            eps1: Some(1.0),
            dt: Some(0.1),
            ..Overrides::default()
        };
        let flags = Overrides {
            eps1: Some(2.0),
            ..Overrides::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.eps1, Some(2.0));
        assert_eq!(merged.dt, Some(0.1));
    }

    #[test]
    fn defaults() {
        let cfg = RunConfig::resolve(CommandName::Evolve, &o()).unwrap();
        assert_eq!(cfg.task, Task::Evolve);
        assert_eq!(cfg.chain, Chain::Two(ChainSpec2::sweet_spot(1.0)));
        assert_eq!(cfg.initial, InitialState::Empty2);
        assert_eq!(cfg.times.len(), 1001);
        assert_eq!(cfg.measures, Measure::defaults(2));

        let cfg = RunConfig::resolve(
            CommandName::Sweep,
            &Overrides {
                delta_range: Some("0,1,0.5".into()),
                ..o()
            },
        )
        .unwrap();
        assert_eq!(cfg.task, Task::MaxC13);
        assert_eq!(cfg.times.hi, 7.0);
        assert_eq!(cfg.eps.len(), 201);
    }

    #[test]
    fn three_site_parameter_overrides() {
        let cfg = RunConfig::resolve(
            CommandName::Evolve,
            &Overrides {
                sites: Some(3),
                tau: Some(0.8),
                delta: Some(0.7),
                delta2: Some(0.5),
                ..o()
            },
        )
        .unwrap();
        let Chain::Three(c) = cfg.chain else { panic!() };
        assert_eq!((c.tau1, c.tau2, c.delta1, c.delta2), (0.8, 0.8, 0.7, 0.5));
        assert_eq!(cfg.initial, InitialState::Empty3);
    }

    #[test]
    fn preset_then_flags() {
        let cfg = RunConfig::resolve(
            CommandName::Sweep,
            &Overrides {
                preset: Some("fig5b".into()),
                dt: Some(0.05),
                ..o()
            },
        )
        .unwrap();
        assert_eq!(cfg.task, Task::MaxC13);
        assert_eq!(cfg.eps_axis, EpsAxis::Eps2);
        assert_eq!(cfg.times.step, 0.05);
    }

    #[test]
    fn usage_errors() {
        let bad = |ov: Overrides, cmd| RunConfig::resolve(cmd, &ov).unwrap_err().exit_code();
        assert_eq!(bad(Overrides { preset: Some("fig9z".into()), ..o() }, CommandName::Sweep), 2);
        assert_eq!(bad(Overrides { preset: Some("fig5a".into()), ..o() }, CommandName::Spectrum), 2);
        assert_eq!(bad(Overrides { eps3: Some(1.0), ..o() }, CommandName::Evolve), 2);
        assert_eq!(bad(Overrides { initial: Some("ghz".into()), ..o() }, CommandName::Evolve), 2);
        assert_eq!(bad(Overrides { measures: Some("C13".into()), ..o() }, CommandName::Evolve), 2);
        assert_eq!(bad(Overrides { measures: Some("C,Negativity".into()), ..o() }, CommandName::Evolve), 2);
        assert_eq!(bad(Overrides { eps_range: Some("1,0,0.1".into()), ..o() }, CommandName::Spectrum), 2);
        assert_eq!(bad(Overrides { dt: Some(0.0), ..o() }, CommandName::Evolve), 2);
        assert_eq!(bad(Overrides { eps1: Some(f64::NAN), ..o() }, CommandName::Evolve), 2);
        assert_eq!(bad(Overrides { sites: Some(2), delta_range: Some("0,1,0.5".into()), ..o() }, CommandName::Sweep), 2);
    }
}
