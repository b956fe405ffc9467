//! Subcommand bodies. Each writes CSV to the configured sink.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use kitaev_core::{
    max_c13_map, run_invariant_suite, spectrum_sweep, sweep_time_epsilon, Chain, CheckConfig, SweepSpec,
};

use crate::config::{RunConfig, Task};
use crate::error::{CliError, CliResult};
use crate::format::{fmt_num, CsvSink};

/// Opens `path`, or stdout when `None`.
pub fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn execute(cfg: &RunConfig) -> CliResult<()> {
    let out = open_output(cfg.out.as_deref())?;
    render(cfg, out)
}

/// Computes the configured dataset and writes it to `out`.
pub fn render<W: Write>(cfg: &RunConfig, out: W) -> CliResult<()> {
    match cfg.task {
        Task::Spectrum => spectrum(cfg, out),
        Task::Evolve => traces(cfg, false, out),
        Task::TimeMap => traces(cfg, true, out),
        Task::MaxC13 => c13_map(cfg, out),
    }
}

fn spectrum<W: Write>(cfg: &RunConfig, out: W) -> CliResult<()> {
    let records = spectrum_sweep(&cfg.chain, cfg.eps_axis, &cfg.eps)?;
    let mut sink = CsvSink::new(out, &["epsilon", "sector", "level_index", "energy"])?;
    for r in records {
        sink.row([fmt_num(r.epsilon), r.sector.to_string(), r.level_index.to_string(), fmt_num(r.energy)])?;
    }
    sink.finish()
}

fn traces<W: Write>(cfg: &RunConfig, over_eps: bool, out: W) -> CliResult<()> {
    let spec = SweepSpec {
        chain: cfg.chain,
        eps: over_eps.then_some((cfg.eps_axis, cfg.eps)),
        initial: cfg.initial,
        measures: cfg.measures.clone(),
        times: cfg.times,
        strict: !over_eps,
    };
    let records = sweep_time_epsilon(&spec, cfg.workers)?;
    let mut header: Vec<&str> = if over_eps { vec!["epsilon", "t"] } else { vec!["t"] };
    header.extend(cfg.measures.iter().map(|m| m.name()));
    let mut sink = CsvSink::new(out, &header)?;
    for row in records.chunks(cfg.measures.len()) {
        let first = &row[0];
        let mut fields = Vec::with_capacity(header.len());
        if over_eps {
            fields.push(fmt_num(first.epsilon.unwrap_or_default()));
        }
        fields.push(fmt_num(first.t.unwrap_or_default()));
        fields.extend(row.iter().map(|r| fmt_num(r.value)));
        sink.row(fields)?;
    }
    sink.finish()
}

fn c13_map<W: Write>(cfg: &RunConfig, out: W) -> CliResult<()> {
    let Chain::Three(template) = cfg.chain else {
        return Err(CliError::usage("the max-C13 map needs a three-site chain"));
    };
    let map = max_c13_map(&template, cfg.eps_axis, &cfg.eps, &cfg.delta, cfg.times.hi, cfg.times.step, cfg.workers)?;
    let mut sink = CsvSink::new(out, &["epsilon", "delta", "max_c13"])?;
    for r in map.records() {
        sink.row([
            fmt_num(r.epsilon.unwrap_or_default()),
            fmt_num(r.delta.unwrap_or_default()),
            fmt_num(r.value),
        ])?;
    }
    sink.finish()
}

/// Runs the invariant suite and writes one line per check.
pub fn check<W: Write>(cfg: &CheckConfig, mut out: W) -> CliResult<()> {
    let outcomes = run_invariant_suite(cfg)?;
    let io_err = |source| CliError::Io {
        path: "<output>".into(),
        source,
    };
    let mut failed = 0;
    for o in &outcomes {
        if !o.passed {
            failed += 1;
        }
        writeln!(
            out,
            "{} {:<50} worst={:.3e} tol={:.1e}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.worst,
            o.tolerance
        )
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}
