//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use kitaev_cli::commands::render;
use kitaev_cli::config::{CommandName, Overrides, RunConfig};
use kitaev_core::{
    concurrence_pure_2q, concurrence_wootters, concurrence_x, gme_multipartite, ground_state_splitting, partial_trace,
    return_probability, spin_flip_overlap, sweep_time_epsilon, three_site_sweet_spot_closed_form,
    two_site_closed_form, AxisRange, Chain, Chain2, Chain3, EvolutionPlan, GmeReference, InitialState, Measure,
    ParitySector, SitePair, State, SweepSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn verdict(name: &'static str, passed: bool, detail: String) -> Verdict {
    Verdict { name, passed, detail }
}

fn sci(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" ")
}

fn timed<R>(f: impl FnOnce() -> R) -> (R, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

fn trace(chain: Chain<f64>, initial: InitialState, measures: &[Measure], t_max: f64, dt: f64) -> Vec<Vec<f64>> {
    let spec = SweepSpec {
        chain,
        eps: None,
        initial,
        measures: measures.to_vec(),
        times: AxisRange::new(0.0, t_max, dt).unwrap(),
        strict: true,
    };
    let records = sweep_time_epsilon(&spec, 1).unwrap();
    records
        .chunks(measures.len())
        .map(|row| {
            let mut v = vec![row[0].t.unwrap()];
            v.extend(row.iter().map(|r| r.value));
            v
        })
        .collect()
}

fn max_by(rows: &[Vec<f64>], f: impl Fn(&[f64]) -> f64) -> f64 {
    rows.iter().map(|r| f(r)).fold(0.0, f64::max)
}

fn two_site_sweet_spot() -> Verdict {
    let chain = Chain::Two(Chain2::sweet_spot(1.0));
    let measures = [Measure::C, Measure::Rp, Measure::Ed, Measure::EG];
    let (rows, elapsed) = timed(|| trace(chain, InitialState::Empty2, &measures, 10.0, 0.01));
    let errs = [
        max_by(&rows, |r| (r[1] - (2.0 * r[0]).sin().abs()).abs()),
        max_by(&rows, |r| (r[2] - r[0].cos().powi(2)).abs()),
        max_by(&rows, |r| (r[3] - 0.5).abs()),
        max_by(&rows, |r| (r[4] - (1.0 - (2.0 * r[0]).cos().abs()) / 2.0).abs()),
    ];
    let worst = errs.iter().copied().fold(0.0, f64::max);
    let passed = rows.len() == 1001 && worst < 1e-9 && elapsed < Duration::from_secs(1);
    verdict(
        "two-site sweet spot traces",
        passed,
        format!("max err C/Rp/Ed/EG = {}, {} ms", sci(&errs), elapsed.as_millis()),
    )
}

fn three_site_sweet_spot() -> Verdict {
    let chain = Chain::Three(Chain3::sweet_spot(1.0));
    let measures = [Measure::C12, Measure::C13, Measure::C23];
    let (rows, elapsed) = timed(|| trace(chain, InitialState::Empty3, &measures, 10.0, 0.01));
    let c12 = max_by(&rows, |r| (r[1] - (4.0 * r[0]).sin().abs() / 2.0).abs());
    let c13 = max_by(&rows, |r| r[2]);
    let c23 = max_by(&rows, |r| (r[3] - r[1]).abs());
    let passed = c12 < 1e-9 && c13 < 1e-10 && c23 < 1e-10 && elapsed < Duration::from_secs(2);
    verdict(
        "three-site sweet spot concurrences",
        passed,
        format!("C12 err {c12:.2e}, max C13 {c13:.2e}, |C23-C12| {c23:.2e}, {} ms", elapsed.as_millis()),
    )
}

fn reference_gme() -> Verdict {
    let ghz = gme_multipartite(&State::ghz(), GmeReference::Ghz).unwrap();
    let w = gme_multipartite(&State::w_even(), GmeReference::WEven).unwrap();
    let passed = (ghz - 0.5).abs() < 1e-8 && (w - 5.0 / 9.0).abs() < 1e-8;
    verdict("GHZ and W reference values", passed, format!("GHZ {ghz:.12}, W {w:.12} (5/9 = {:.12})", 5.0 / 9.0))
}

fn ghz_dynamics() -> Verdict {
    let spec = Chain3::sweet_spot(1.0);
    let ghz = State::ghz();
    let plan = EvolutionPlan::for_chain(&spec, &ghz).unwrap();
    let eg = |t: f64| gme_multipartite(&plan.evolve(t), GmeReference::Ghz).unwrap();
    let rp = |t: f64| return_probability(&ghz, &plan.evolve(t)).unwrap();
    let (e0, e1, e2) = (eg(0.0), eg(PI / 2.0), eg(PI));
    let (r0, r1) = (rp(0.0), rp(PI / 2.0));
    let rows = trace(Chain::Three(spec), InitialState::Ghz, &[Measure::EgW], 10.0, 0.01);
    let w_max = max_by(&rows, |r| r[1]);
    let passed = (e0 - 0.5).abs() < 1e-8
        && (e1 - 1.0).abs() < 1e-6
        && (e2 - 0.5).abs() < 1e-6
        && (r0 - 1.0).abs() < 1e-10
        && r1.abs() < 1e-10
        && w_max < 1.0 - 1e-3;
    verdict(
        "GHZ dynamics at the sweet spot",
        passed,
        format!("E_G^GHZ(0, π/2, π) = ({e0:.10}, {e1:.10}, {e2:.10}), Rp(0, π/2) = ({r0:.3e}, {r1:.3e}), max E_G^W {w_max:.6}"),
    )
}

fn splittings() -> Verdict {
    let genuine = Chain3::sweet_spot(1.0);
    let effective = Chain3 { eps2: 1.0, ..genuine };
    let delocalised = Chain3 {
        eps1: 0.5,
        eps3: 0.5,
        ..genuine
    };
    let s3 = [genuine, effective, delocalised].map(|c| ground_state_splitting(&c).unwrap());
    let s2 = ground_state_splitting(&Chain2 {
        eps1: 0.0,
        eps2: 0.0,
        tau: 0.5,
        delta: 1.0,
    })
    .unwrap();
    let passed = s3.iter().all(|s| *s < 1e-12) && (s2 - 0.5).abs() < 1e-12;
    verdict("ground-state splittings", passed, format!("three-site {}, two-site {s2:.15}", sci(&s3)))
}

fn oracle_equivalences() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let sector = |rng: &mut ChaCha8Rng| if rng.gen() { ParitySector::Even } else { ParitySector::Odd };
    let (errs, elapsed) = timed(|| {
        let mut mixed = 0.0f64;
        for _ in 0..1000 {
            let s = sector(&mut rng);
            let psi = State::random(3, s, &mut rng);
            let pair = SitePair::ALL[rng.gen_range(0..3)];
            let rho = partial_trace(&psi, pair).unwrap();
            mixed = mixed.max((concurrence_x(&rho).unwrap() - concurrence_wootters(&rho).unwrap()).abs());
        }
        let mut pure = 0.0f64;
        for _ in 0..10_000 {
            let s = sector(&mut rng);
            let psi = State::random(2, s, &mut rng);
            pure = pure.max((concurrence_pure_2q(&psi).unwrap() - spin_flip_overlap(&psi).unwrap()).abs());
        }
        let mut evolution = 0.0f64;
        let inits2 = [InitialState::Empty2, InitialState::Filled2, InitialState::BellPlus];
        let inits3 = [InitialState::Empty3, InitialState::Filled3, InitialState::Ghz];
        for k in 0..1000 {
            let d: f64 = rng.gen_range(0.1..2.0);
            let t: f64 = rng.gen_range(0.0..10.0);
            let (closed, spectral) = if k % 2 == 0 {
                let spec = Chain2 {
                    eps1: rng.gen_range(-2.0..2.0),
                    eps2: rng.gen_range(-2.0..2.0),
                    tau: d,
                    delta: d,
                };
                let init = inits2[rng.gen_range(0..3)];
                let plan = EvolutionPlan::for_chain(&spec, &init.state()).unwrap();
                (two_site_closed_form(&spec, init, t).unwrap(), plan.evolve(t))
            } else {
                let spec = Chain3::sweet_spot(d);
                let init = inits3[rng.gen_range(0..3)];
                let plan = EvolutionPlan::for_chain(&spec, &init.state()).unwrap();
                (three_site_sweet_spot_closed_form(&spec, init, t).unwrap(), plan.evolve(t))
            };
            evolution = evolution.max(closed.phase_aligned_distance(&spectral.to_full()).unwrap());
        }
        [mixed, pure, evolution]
    });
    let passed = errs[0] < 1e-10 && errs[1] < 1e-12 && errs[2] < 1e-10 && elapsed < Duration::from_secs(30);
    verdict(
        "oracle equivalences",
        passed,
        format!("X vs Wootters {:.2e}, pure vs spin-flip {:.2e}, closed vs spectral {:.2e}, {} ms", errs[0], errs[1], errs[2], elapsed.as_millis()),
    )
}

fn preset_config(name: &str, workers: u32) -> RunConfig {
    let o = Overrides {
        preset: Some(name.into()),
        workers: Some(workers),
        ..Overrides::default()
    };
    RunConfig::resolve(CommandName::Sweep, &o).unwrap()
}

fn preset_csv(name: &str, workers: u32) -> Vec<u8> {
    let mut out = Vec::new();
    render(&preset_config(name, workers), &mut out).unwrap();
    out
}

fn c13_map(fig5a: &[u8], elapsed: Duration) -> Verdict {
    let text = std::str::from_utf8(fig5a).unwrap();
    let mut lines = text.lines();
    let header_ok = lines.next() == Some("epsilon,delta,max_c13");
    let cells: Vec<[f64; 3]> = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    let dist = |c: &[f64; 3]| c[0].powi(2) + (c[1] - 1.0).powi(2);
    let nearest = cells.iter().min_by(|a, b| dist(a).total_cmp(&dist(b))).unwrap();
    let best = cells.iter().map(|c| c[2]).fold(0.0, f64::max);
    let passed = header_ok && nearest[2] < 1e-6 && best > 0.95 && elapsed < Duration::from_secs(60);
    verdict(
        "max-C13 map",
        passed,
        format!(
            "{} cells, at ({}, {}) {:.2e}, max {best:.6}, {} ms",
            cells.len(),
            nearest[0],
            nearest[1],
            nearest[2],
            elapsed.as_millis()
        ),
    )
}

fn determinism(fig5a: &[u8]) -> Verdict {
    let mut mismatched = Vec::new();
    if preset_csv("fig5a", 1) != fig5a {
        mismatched.push("fig5a".to_string());
    }
    for name in ["fig2c", "fig3a", "fig3h", "fig4c", "fig4d", "fig6ab", "fig6c"] {
        if preset_csv(name, 1) != preset_csv(name, 3) {
            mismatched.push(name.to_string());
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = ["a.csv", "b.csv"].iter().map(|f| dir.path().join(f)).collect();
    for f in &files {
        let status = Command::new(env!("CARGO_BIN_EXE_kitaev"))
            .args(["sweep", "--preset", "fig3p", "--out"])
            .arg(f)
            .status()
            .unwrap();
        assert!(status.success());
    }
    if std::fs::read(&files[0]).unwrap() != std::fs::read(&files[1]).unwrap() {
        mismatched.push("fig3p (binary)".into());
    }
    verdict("byte-identical reruns", mismatched.is_empty(), format!("mismatched: {mismatched:?}"))
}

fn main() {
    let mut verdicts = vec![
        two_site_sweet_spot(),
        three_site_sweet_spot(),
        reference_gme(),
        ghz_dynamics(),
        splittings(),
        oracle_equivalences(),
    ];
    let (fig5a, elapsed) = timed(|| preset_csv("fig5a", 4));
    verdicts.push(c13_map(&fig5a, elapsed));
    verdicts.push(determinism(&fig5a));

    let mut failed = 0;
    for (k, v) in verdicts.iter().enumerate() {
        println!("{} {}: {} ({})", if v.passed { "PASS" } else { "FAIL" }, k + 1, v.name, v.detail);
        failed += usize::from(!v.passed);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
