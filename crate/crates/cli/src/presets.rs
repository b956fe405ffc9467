//! Named datasets for each figure panel.
//!
//! `fig3a`–`fig3j` are the two-site panels at Δ = τ = 1 and `fig3k`–`fig3t`
//! the same panels at Δ = 0.5, τ = 1.

use kitaev_core::{Chain, ChainSpec2, ChainSpec3, EpsAxis, InitialState, Measure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    /// Even and odd levels along ε.
    Spectrum,
    /// Measures on a (ε, t) grid.
    TimeMap,
    /// Measures along t at fixed parameters.
    Trace,
    /// `max_t C₁₃` on a (ε, Δ) grid.
    MaxC13,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub kind: PresetKind,
    pub chain: Chain<f64>,
    pub initial: InitialState,
    pub measures: Vec<Measure>,
    pub eps_axis: EpsAxis,
    pub description: String,
}

fn two(eps1: f64, eps2: f64, delta: f64) -> Chain<f64> {
    Chain::Two(ChainSpec2 {
        eps1,
        eps2,
        tau: 1.0,
        delta,
    })
}

fn three(eps: [f64; 3], delta1: f64, delta2: f64) -> Chain<f64> {
    Chain::Three(ChainSpec3 {
        eps1: eps[0],
        eps2: eps[1],
        eps3: eps[2],
        tau1: 1.0,
        tau2: 1.0,
        delta1,
        delta2,
    })
}

fn preset(
    name: impl Into<String>,
    kind: PresetKind,
    chain: Chain<f64>,
    initial: InitialState,
    measures: &[Measure],
    eps_axis: EpsAxis,
    description: impl Into<String>,
) -> Preset {
    Preset {
        name: name.into(),
        kind,
        chain,
        initial,
        measures: measures.to_vec(),
        eps_axis,
        description: description.into(),
    }
}

fn spectra() -> Vec<Preset> {
    use PresetKind::Spectrum;
    let none: &[Measure] = &[];
    vec![
        preset("fig2a", Spectrum, two(0.0, 0.0, 1.0), InitialState::Empty2, none, EpsAxis::Eps, "two-site spectrum, Δ = τ = 1"),
        preset("fig2b", Spectrum, two(0.0, 0.0, 0.5), InitialState::Empty2, none, EpsAxis::Eps, "two-site spectrum, Δ = 0.5"),
        preset("fig2c", Spectrum, three([0.0; 3], 1.0, 1.0), InitialState::Empty3, none, EpsAxis::Eps, "three-site spectrum, Δ_i = τ_i = 1"),
        preset("fig2d", Spectrum, three([0.0; 3], 0.5, 0.5), InitialState::Empty3, none, EpsAxis::Eps, "three-site spectrum, Δ_i = 0.5"),
    ]
}

fn two_site_panels() -> Vec<Preset> {
    let all = [Measure::C, Measure::EG, Measure::Rp, Measure::Ed];
    let letters: Vec<char> = ('a'..='t').collect();
    let mut out = Vec::new();
    let mut k = 0;
    for delta in [1.0, 0.5] {
        for initial in [InitialState::Empty2, InitialState::BellPlus] {
            let mut push = |kind, chain, measures: &[Measure], what: String| {
                out.push(preset(
                    format!("fig3{}", letters[k]),
                    kind,
                    chain,
                    initial,
                    measures,
                    EpsAxis::Eps,
                    format!("{what}, Δ = {delta}, τ = 1, from {initial}"),
                ));
                k += 1;
            };
            push(PresetKind::TimeMap, two(0.0, 0.0, delta), &[Measure::C], "C over (ε, t)".into());
            push(PresetKind::TimeMap, two(0.0, 0.0, delta), &[Measure::EG], "E_G over (ε, t)".into());
            push(PresetKind::Trace, two(1.0, 1.0, delta), &all, "traces at ε = 1".into());
            push(PresetKind::Trace, two(0.0, 1.0, delta), &all, "traces at ε1 = 0, ε2 = 1".into());
            push(PresetKind::Trace, two(0.0, 0.0, delta), &all, "traces at ε = 0".into());
        }
    }
    out
}

fn three_site_panels() -> Vec<Preset> {
    use PresetKind::{TimeMap, Trace};
    let init = InitialState::Empty3;
    let traces = [Measure::C12, Measure::EG12, Measure::Rp, Measure::Ed];
    let mut out = Vec::new();
    for (letters, delta2) in [(['a', 'b', 'c', 'd'], 1.0), (['e', 'f', 'g', 'h'], 0.5)] {
        let chain = three([0.0; 3], 1.0, delta2);
        let tag = format!("Δ2 = {delta2}");
        out.push(preset(format!("fig4{}", letters[0]), TimeMap, chain, init, &[Measure::C12], EpsAxis::Eps, format!("C12 over (ε, t), {tag}")));
        out.push(preset(format!("fig4{}", letters[1]), TimeMap, chain, init, &[Measure::C12], EpsAxis::Eps1, format!("C12 over (ε1, t), {tag}")));
        out.push(preset(format!("fig4{}", letters[2]), TimeMap, chain, init, &[Measure::C13], EpsAxis::Eps, format!("C13 over (ε, t), {tag}")));
        out.push(preset(format!("fig4{}", letters[3]), Trace, chain, init, &traces, EpsAxis::Eps, format!("traces at ε = 0, {tag}")));
    }
    out
}

fn c13_maps() -> Vec<Preset> {
    let chain = three([0.0; 3], 1.0, 1.0);
    vec![
        preset("fig5a", PresetKind::MaxC13, chain, InitialState::Empty3, &[Measure::C13], EpsAxis::Eps, "max C13 over (ε, Δ)"),
        preset("fig5b", PresetKind::MaxC13, chain, InitialState::Empty3, &[Measure::C13], EpsAxis::Eps2, "max C13 over (ε2, Δ)"),
    ]
}

fn ghz_panels() -> Vec<Preset> {
    use PresetKind::{TimeMap, Trace};
    let init = InitialState::Ghz;
    let mut out = Vec::new();
    for (letters, delta2) in [(['a', 'b', 'c'], 1.0), (['d', 'e', 'f'], 0.5)] {
        let chain = three([0.0; 3], 1.0, delta2);
        let tag = format!("Δ2 = {delta2}");
        out.push(preset(format!("fig6{}", letters[0]), TimeMap, chain, init, &[Measure::EgGhz], EpsAxis::Eps, format!("E_G^GHZ over (ε, t), {tag}")));
        out.push(preset(format!("fig6{}", letters[1]), TimeMap, chain, init, &[Measure::EgW], EpsAxis::Eps, format!("E_G^W over (ε, t), {tag}")));
        out.push(preset(
            format!("fig6{}", letters[2]),
            Trace,
            chain,
            init,
            &[Measure::EgGhz, Measure::EgW, Measure::Rp],
            EpsAxis::Eps,
            format!("traces at ε = 0, {tag}"),
        ));
        out.push(preset(
            format!("fig6{}{}", letters[0], letters[1]),
            TimeMap,
            chain,
            init,
            &[Measure::EgGhz, Measure::EgW],
            EpsAxis::Eps,
            format!("E_G^GHZ and E_G^W over (ε, t), {tag}"),
        ));
    }
    out
}

/// Every preset, in figure order.
pub fn all() -> Vec<Preset> {
    let mut v = spectra();
    v.extend(two_site_panels());
    v.extend(three_site_panels());
    v.extend(c13_maps());
    v.extend(ghz_panels());
    v
}

pub fn find(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name.eq_ignore_ascii_case(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kitaev_core::KitaevChain;

    #[test]
    fn names_are_unique_and_complete() {
        let names: Vec<String> = all().into_iter().map(|p| p.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        for n in ["fig2a", "fig2d", "fig3a", "fig3j", "fig3k", "fig3t", "fig4h", "fig5a", "fig5b", "fig6ab", "fig6de", "fig6f"] {
            assert!(find(n).is_some(), "{n}");
        }
        assert!(find("fig7a").is_none());
    }

    #[test]
    fn presets_are_consistent() {
        for p in all() {
            assert_eq!(p.initial.sites(), p.chain.sites(), "{}", p.name);
            for m in &p.measures {
                assert!(m.applies_to(p.chain.sites()), "{}", p.name);
            }
            assert!(p.eps_axis.apply(&p.chain, 0.0).is_ok(), "{}", p.name);
        }
    }

    #[test]
    fn panel_parameters() {
        let p = find("fig3d").unwrap();
        assert_eq!(p.chain, two(0.0, 1.0, 1.0));
        assert_eq!(p.initial, InitialState::Empty2);
        let p = find("fig3h").unwrap();
        assert_eq!(p.initial, InitialState::BellPlus);
        let p = find("fig3m").unwrap();
        assert_eq!(p.chain, two(1.0, 1.0, 0.5));
        assert_eq!(p.initial, InitialState::Empty2);
        let p = find("fig3p").unwrap();
        assert_eq!(p.chain, two(0.0, 0.0, 0.5));
        assert_eq!((p.kind, p.initial), (PresetKind::TimeMap, InitialState::BellPlus));
        let p = find("fig6f").unwrap();
        assert_eq!(p.chain, three([0.0; 3], 1.0, 0.5));
        assert_eq!(p.kind, PresetKind::Trace);
    }
}
