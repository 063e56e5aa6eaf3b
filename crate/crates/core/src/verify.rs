//! One-shot invariant suite behind `isi verify`.

use serde::Serialize;

use crate::channel::ChannelTaps;
use crate::corrmat::{event_matrix, CorrelationMatrix};
use crate::distance::{min_distance, DEFAULT_CEILING};
use crate::eigen::{eigen_all, interlacing_check};
use crate::error::Result;
use crate::events::{canonicalize, AlphabetSpec};
use crate::mlse::{
    exhaustive_detect, q_function, simulate_errors, simulate_transmission, viterbi_detect,
    NoiseSource, SimConfig,
};
use crate::worstcase::{
    augmentation_probe, sweep, uniqueness_probe, worst_channel, worst_channel_with, SearchOptions,
    SearchSpace, ROOT_TOLERANCE,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

struct Budget {
    max_len: usize,
    interlacing_samples: usize,
    viterbi_blocks: u64,
}

impl Level {
    fn budget(self) -> Budget {
        match self {
            Level::Quick => Budget {
                max_len: 3,
                interlacing_samples: 100,
                viterbi_blocks: 20,
            },
            Level::Full => Budget {
                max_len: 6,
                interlacing_samples: 500,
                viterbi_blocks: 100,
            },
        }
    }
}

fn outcome(name: &'static str, result: Result<(bool, String)>) -> CheckOutcome {
    match result {
        Ok((pass, detail)) => CheckOutcome { name, pass, detail },
        Err(e) => CheckOutcome {
            name,
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn eigen_closed_forms() -> Result<(bool, String)> {
    let a = eigen_all(&CorrelationMatrix::from_first_row(vec![2, -1])?);
    let b = eigen_all(&CorrelationMatrix::from_first_row(vec![3, -2, 1])?);
    let r = 33f64.sqrt();
    let want = [(7.0 - r) / 2.0, 2.0, (7.0 + r) / 2.0];
    let err = (a.values[0] - 1.0)
        .abs()
        .max((a.values[1] - 3.0).abs())
        .max(
            b.values
                .iter()
                .zip(want)
                .map(|(g, w)| (g - w).abs())
                .fold(0.0, f64::max),
        );
    Ok((err <= 1e-12, format!("max error {err:.3e}")))
}

fn worst_values(max_len: usize) -> Result<(bool, String)> {
    // λ_min,L = 2 - 2cos(π/(L+1)) for L ≥ 2 (event (1,1)), 1 at L = 1.
    let mut worst = 0.0f64;
    for len in 1..=max_len {
        let r = worst_channel(len, AlphabetSpec::for_channel_length(2, len)?)?;
        let want = if len == 1 {
            1.0
        } else {
            2.0 - 2.0 * (std::f64::consts::PI / (len + 1) as f64).cos()
        };
        worst = worst.max((r.lambda_min - want).abs());
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.3e}")))
}

fn sweep_monotone(max_len: usize) -> Result<(bool, String)> {
    let s = sweep(max_len, SearchSpace::binary())?;
    let flags: Vec<String> = s
        .rows
        .iter()
        .map(|r| match r.strict {
            None => "-".into(),
            Some(b) => b.to_string(),
        })
        .collect();
    Ok((s.non_increasing(), format!("strict {}", flags.join(","))))
}

fn interlacing(samples: usize) -> Result<(bool, String)> {
    let mut src = NoiseSource::new(0x1a7e);
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let levels: i32 = if src.next_index(2) == 0 { 2 } else { 4 };
        let len = 1 + src.next_index(10) as usize;
        let order = 2 + src.next_index(7) as usize;
        let k = levels - 1;
        let mut raw: Vec<i32> = (0..len)
            .map(|_| src.next_index(2 * k as u32 + 1) as i32 - k)
            .collect();
        if raw[0] == 0 {
            raw[0] = 1;
        }
        if raw[len - 1] == 0 {
            raw[len - 1] = -1;
        }
        let r = interlacing_check(&event_matrix(&canonicalize(&raw)?, order)?)?;
        worst = worst.min(r.worst_margin);
    }
    Ok((
        worst >= -1e-9,
        format!("{samples} samples, worst margin {worst:.3e}"),
    ))
}

fn prune_exactness(max_len: usize) -> Result<(bool, String)> {
    let mut ok = true;
    for len in 1..=max_len.min(4) {
        let spec = AlphabetSpec::for_channel_length(2, len)?;
        let a = worst_channel_with(len, spec, SearchOptions { prune: true })?;
        let b = worst_channel_with(len, spec, SearchOptions { prune: false })?;
        ok &= a.lambda_min == b.lambda_min && a.achieving_events == b.achieving_events;
    }
    Ok((ok, format!("L <= {}", max_len.min(4))))
}

fn distance_oracle(max_len: usize) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for len in 1..=max_len.min(4) {
        let r = worst_channel(len, AlphabetSpec::for_channel_length(2, len)?)?;
        let d = min_distance(&r.channel, 2, DEFAULT_CEILING)?;
        let d = d.d2_min.unwrap_or(f64::INFINITY);
        worst = worst.max((d - r.lambda_min).abs());
    }
    Ok((
        worst <= 1e-9,
        format!("max |d2_min - lambda_min| {worst:.3e}"),
    ))
}

fn probe_cross_term(max_len: usize) -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for len in 1..max_len {
        let p = augmentation_probe(len, AlphabetSpec::for_channel_length(2, len)?, 0.01)?;
        for e in &p.entries {
            if e.cross_term.abs() > 1e-12 && !e.improves {
                ok = false;
            }
        }
        detail.push(format!("L={len}:{:.6}", p.min));
    }
    Ok((ok, detail.join(" ")))
}

fn roots_on_circle(max_len: usize) -> Result<(bool, String)> {
    let mut ok = true;
    let mut checked = Vec::new();
    for len in 2..=max_len {
        let r = worst_channel(len, AlphabetSpec::for_channel_length(2, len)?)?;
        if uniqueness_probe(&r).unique {
            let dev = r
                .root_moduli
                .iter()
                .map(|m| (m - 1.0).abs())
                .fold(0.0, f64::max);
            ok &= dev <= ROOT_TOLERANCE;
            checked.push(len.to_string());
        }
    }
    Ok((ok, format!("unique at L = {}", checked.join(","))))
}

fn viterbi_exhaustive(blocks: u64) -> Result<(bool, String)> {
    let h = 0.5f64.sqrt();
    let channels = [
        ChannelTaps::identity(),
        ChannelTaps::new(vec![h, h])?,
        ChannelTaps::new(vec![0.5, -h, 0.5])?,
    ];
    let mut mismatches = 0;
    for seed in 0..blocks {
        let f = &channels[(seed % 3) as usize];
        let cfg = SimConfig {
            channel: f.clone(),
            n_symbols: 8 + (seed % 7) as usize,
            noise_sigma: 0.7,
            seed,
            levels: 2,
        };
        let tx = simulate_transmission(&cfg)?;
        if viterbi_detect(f, &tx.received, 2)? != exhaustive_detect(f, &tx.received, 2)? {
            mismatches += 1;
        }
    }
    Ok((
        mismatches == 0,
        format!("{blocks} blocks, {mismatches} mismatches"),
    ))
}

fn ber_identity_channel() -> Result<(bool, String)> {
    let n = 100_000;
    let cfg = SimConfig {
        channel: ChannelTaps::identity(),
        n_symbols: n,
        noise_sigma: 0.5,
        seed: 7,
        levels: 2,
    };
    let ber = simulate_errors(&cfg)? as f64 / n as f64;
    let p = q_function(2.0);
    let se = (p * (1.0 - p) / n as f64).sqrt();
    Ok((
        (ber - p).abs() <= 3.0 * se,
        format!("ber {ber:.5} vs Q(2) {p:.5} (3se {:.5})", 3.0 * se),
    ))
}

/// Run every check at `level`.
pub fn run(level: Level) -> Vec<CheckOutcome> {
    let b = level.budget();
    let mut out = vec![
        outcome("eigen-closed-forms", eigen_closed_forms()),
        outcome("worst-values", worst_values(b.max_len)),
        outcome("sweep-non-increasing", sweep_monotone(b.max_len)),
        outcome("interlacing", interlacing(b.interlacing_samples)),
        outcome("prune-exactness", prune_exactness(b.max_len)),
        outcome("distance-oracle", distance_oracle(b.max_len)),
        outcome("augmentation-cross-term", probe_cross_term(b.max_len)),
        outcome("roots-on-unit-circle", roots_on_circle(b.max_len)),
        outcome("viterbi-exhaustive", viterbi_exhaustive(b.viterbi_blocks)),
    ];
    if level == Level::Full {
        out.push(outcome("ber-identity-channel", ber_identity_channel()));
    }
    out
}
