//! Worst-case channels of a given length.
//!
//! For a fixed event the unit-energy channel minimizing `fᵀ A f` is the
//! eigenvector of `A`'s smallest eigenvalue, so the worst channel of length
//! `L` is found by minimizing `λ_min(A_ε)` over all events `ε`.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::ChannelTaps;
use crate::corrmat::{raw_autocorrelation, CorrelationMatrix};
use crate::eigen::{eigen_min, EigenPair};
use crate::error::{input, Result};
use crate::events::{alternate_signs, canonicalize, enumerate_events, AlphabetSpec, ErrorEvent};
use crate::roots::root_check;

/// Minima closer than this are ties.
pub const TIE_TOLERANCE: f64 = 1e-9;
/// Tolerance for the unit-circle test on worst channels.
pub const ROOT_TOLERANCE: f64 = 1e-6;

const BATCH: usize = 2048;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Skip matrices whose Gershgorin lower bound already exceeds the
    /// incumbent.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { prune: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WorstCaseReport {
    #[serde(rename = "L")]
    pub len: usize,
    pub lambda_min: f64,
    pub channel: ChannelTaps,
    /// Every canonical event within [`TIE_TOLERANCE`] of the minimum, in
    /// canonical order.
    pub achieving_events: Vec<ErrorEvent>,
    /// First row of the first achieving event's matrix.
    pub matrix_first_row: Vec<i64>,
    pub multiplicity: usize,
    pub relative_gap: f64,
    /// Number of non-equivalent (sign/reversal orbit) achieving events.
    pub ties: usize,
    pub root_moduli: Vec<f64>,
    pub events_scanned: u64,
    /// Distinct correlation matrices evaluated by an eigen solve.
    pub matrices_evaluated: u64,
    /// Distinct correlation matrices skipped by the Gershgorin bound.
    pub prune_count: u64,
    pub alphabet: AlphabetSpec,
    pub warnings: Vec<String>,
}

/// Worst channel of length `len` over the events described by `spec`.
pub fn worst_channel(len: usize, spec: AlphabetSpec) -> Result<WorstCaseReport> {
    worst_channel_with(len, spec, SearchOptions::default())
}

pub fn worst_channel_with(
    len: usize,
    spec: AlphabetSpec,
    options: SearchOptions,
) -> Result<WorstCaseReport> {
    if len < 1 {
        return input("channel length must be at least 1");
    }
    spec.validate()?;
    let mut warnings = Vec::new();
    if spec.max_event_len < len {
        warnings.push(format!(
            "max_event_len {} is shorter than the channel length {len}",
            spec.max_event_len
        ));
    }

    // Pass 1: distinct autocorrelations in first-seen (canonical) order.
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut distinct: Vec<Vec<i64>> = Vec::new();
    let mut events_scanned = 0u64;
    for e in enumerate_events(spec)? {
        events_scanned += 1;
        let beta = raw_autocorrelation(e.symbols(), len);
        if !index.contains_key(&beta) {
            index.insert(beta.clone(), distinct.len());
            distinct.push(beta);
        }
    }

    // Eigen solves in fixed batches; the incumbent only changes between
    // batches so the prune count does not depend on the worker count.
    let mut incumbent = f64::INFINITY;
    let mut minima: Vec<Option<f64>> = vec![None; distinct.len()];
    let mut prune_count = 0u64;
    let mut matrices_evaluated = 0u64;
    for (b, chunk) in distinct.chunks(BATCH).enumerate() {
        let bound = incumbent + TIE_TOLERANCE;
        let results: Vec<Option<f64>> = chunk
            .par_iter()
            .map(|beta| {
                let a = CorrelationMatrix::from_first_row(beta.clone()).expect("len >= 1");
                if options.prune && a.gershgorin_lower_bound() as f64 > bound {
                    None
                } else {
                    Some(eigen_min(&a).value)
                }
            })
            .collect();
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Some(v) => {
                    matrices_evaluated += 1;
                    incumbent = incumbent.min(v);
                }
                None => prune_count += 1,
            }
            minima[b * BATCH + i] = r;
        }
    }

    let lambda_min = incumbent;
    let achieving: HashSet<usize> = minima
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_some_and(|v| v <= lambda_min + TIE_TOLERANCE))
        .map(|(i, _)| i)
        .collect();

    // Pass 2: collect the achieving events themselves.
    let mut achieving_events = Vec::new();
    for e in enumerate_events(spec)? {
        let beta = raw_autocorrelation(e.symbols(), len);
        if achieving.contains(&index[&beta]) {
            achieving_events.push(e);
        }
    }

    let first = &achieving_events[0];
    let matrix = CorrelationMatrix::from_first_row(raw_autocorrelation(first.symbols(), len))?;
    let pair = eigen_min(&matrix);
    let channel = ChannelTaps::normalized(pair.vector.clone())?;
    let root_moduli = root_check(&channel, ROOT_TOLERANCE)
        .map(|r| r.moduli)
        .unwrap_or_default();

    Ok(WorstCaseReport {
        len,
        lambda_min,
        channel,
        ties: achieving_events.len(),
        achieving_events,
        matrix_first_row: matrix.first_row().to_vec(),
        multiplicity: pair.multiplicity,
        relative_gap: pair.relative_gap,
        root_moduli,
        events_scanned,
        matrices_evaluated,
        prune_count,
        alphabet: spec,
        warnings,
    })
}

/// Eigen pair of a specific event viewed at `len` lags.
pub fn event_eigen(event: &ErrorEvent, len: usize) -> Result<(CorrelationMatrix, EigenPair)> {
    let a = CorrelationMatrix::from_first_row(raw_autocorrelation(event.symbols(), len))?;
    let p = eigen_min(&a);
    Ok((a, p))
}

/// Event search bounds for a sweep; unset fields follow the per-length
/// defaults of [`AlphabetSpec::for_channel_length`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchSpace {
    pub levels: u32,
    pub max_event_len: Option<usize>,
    pub max_zero_run: Option<usize>,
}

impl SearchSpace {
    pub fn binary() -> Self {
        SearchSpace {
            levels: 2,
            max_event_len: None,
            max_zero_run: None,
        }
    }

    pub fn alphabet_for(&self, len: usize) -> Result<AlphabetSpec> {
        let d = AlphabetSpec::for_channel_length(self.levels, len)?;
        AlphabetSpec::new(
            self.levels,
            self.max_event_len.unwrap_or(d.max_event_len),
            self.max_zero_run.unwrap_or(d.max_zero_run),
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    #[serde(rename = "L")]
    pub len: usize,
    pub lambda_min: f64,
    /// `λ_min(L) - λ_min(L-1)`.
    pub delta_from_previous: Option<f64>,
    /// Whether the step from `L-1` decreased by more than [`TIE_TOLERANCE`].
    pub strict: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    pub reports: Vec<WorstCaseReport>,
}

impl Sweep {
    /// `λ_min(L+1) ≤ λ_min(L) + TIE_TOLERANCE` for every step.
    pub fn non_increasing(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.delta_from_previous.is_none_or(|d| d <= TIE_TOLERANCE))
    }
}

pub fn sweep(max_len: usize, space: SearchSpace) -> Result<Sweep> {
    if max_len < 1 {
        return input("sweep needs a maximum length of at least 1");
    }
    let mut rows: Vec<SweepRow> = Vec::with_capacity(max_len);
    let mut reports = Vec::with_capacity(max_len);
    for len in 1..=max_len {
        let report = worst_channel(len, space.alphabet_for(len)?)?;
        let delta = rows.last().map(|p| report.lambda_min - p.lambda_min);
        rows.push(SweepRow {
            len,
            lambda_min: report.lambda_min,
            delta_from_previous: delta,
            strict: delta.map(|d| d < -TIE_TOLERANCE),
        });
        reports.push(report);
    }
    Ok(Sweep { rows, reports })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeEntry {
    pub event: ErrorEvent,
    /// `λ_min` of this event's length-`L` matrix.
    pub lambda_event: f64,
    /// Length-`L` eigenvector that forms the prefix of the augmented channel.
    pub prefix: Vec<f64>,
    /// `β_L f_0 + Σ_{i=1}^{L-1} β_{L-i} f_i`.
    pub cross_term: f64,
    pub grid_min: f64,
    pub grid_argmin: f64,
    /// Renormalized value at the minimizer of the unnormalized quadratic,
    /// `f_L = -c / β_0`.
    pub quadratic_min: f64,
    pub quadratic_argmin: f64,
    /// Exact minimum of the renormalized quotient over `f_L`.
    pub exact_min: f64,
    pub min: f64,
    /// `min < λ_min,L - TIE_TOLERANCE`.
    pub improves: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    #[serde(rename = "L")]
    pub len: usize,
    pub lambda_min: f64,
    pub grid_step: f64,
    pub entries: Vec<ProbeEntry>,
    /// Smallest augmented distance over all entries.
    pub min: f64,
}

/// Append one tap to the worst length-`len` channel(s) and see how far the
/// distance of the same event drops.
///
/// With prefix `f` (unit energy, `fᵀA_L f = λ`) and new tap `x`, the same
/// event viewed at `len + 1` lags gives
/// `d²(x) = (λ + 2 c x + β_0 x²) / (1 + x²)` after renormalization, where
/// `c` is the cross term. It drops below `λ` for small `x` of sign `-c`
/// whenever `c ≠ 0`.
pub fn augmentation_probe(len: usize, spec: AlphabetSpec, grid_step: f64) -> Result<ProbeReport> {
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return input("grid step must lie in (0, 0.5]");
    }
    let report = worst_channel(len, spec)?;
    let steps = (1.0 / grid_step).floor() as i64;

    let mut entries = Vec::with_capacity(report.achieving_events.len());
    for event in &report.achieving_events {
        let (_, pair) = event_eigen(event, len)?;
        let f = pair.vector;
        let lambda = pair.value;
        let augmented =
            CorrelationMatrix::from_first_row(raw_autocorrelation(event.symbols(), len + 1))?;
        let beta = augmented.first_row();
        let beta0 = beta[0] as f64;
        let cross_term =
            beta[len] as f64 * f[0] + (1..len).map(|i| beta[len - i] as f64 * f[i]).sum::<f64>();

        let eval = |x: f64| -> Result<f64> {
            let mut g = f.clone();
            g.push(x);
            let norm = g.iter().map(|v| v * v).sum::<f64>();
            let g: Vec<f64> = g.iter().map(|v| v / norm.sqrt()).collect();
            augmented.quadratic_form(&g)
        };

        let mut grid_min = f64::INFINITY;
        let mut grid_argmin = 0.0;
        for k in -steps..=steps {
            let x = k as f64 * grid_step;
            let d = eval(x)?;
            if d < grid_min {
                grid_min = d;
                grid_argmin = x;
            }
        }

        let quadratic_argmin = -cross_term / beta0;
        let quadratic_min = eval(quadratic_argmin)?;

        // Rayleigh quotient on span{(f, 0), e_L}: smallest eigenvalue of
        // [[λ, c], [c, β_0]].
        let mean = 0.5 * (lambda + beta0);
        let half = 0.5 * (beta0 - lambda);
        let exact_min = mean - (half * half + cross_term * cross_term).sqrt();

        let min = grid_min.min(quadratic_min).min(exact_min);
        entries.push(ProbeEntry {
            event: event.clone(),
            lambda_event: lambda,
            prefix: f,
            cross_term,
            grid_min,
            grid_argmin,
            quadratic_min,
            quadratic_argmin,
            exact_min,
            min,
            improves: min < report.lambda_min - TIE_TOLERANCE,
        });
    }
    let min = entries.iter().map(|e| e.min).fold(f64::INFINITY, f64::min);
    Ok(ProbeReport {
        len,
        lambda_min: report.lambda_min,
        grid_step,
        entries,
        min,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UniquenessVerdict {
    pub multiplicity: usize,
    pub relative_gap: f64,
    /// Eigenvalue separated from the rest of its spectrum.
    pub simple: bool,
    /// Achieving events that are distinct under sign and reversal.
    pub ties: usize,
    /// Achieving events that are distinct once alternating-sign modulation,
    /// which maps a channel to an equivalent one, is also factored out.
    pub tie_classes: usize,
    pub unique: bool,
}

fn modulation_class(event: &ErrorEvent) -> ErrorEvent {
    let alt = canonicalize(&alternate_signs(event.symbols())).expect("same borders");
    event.clone().min(alt)
}

/// Whether the worst event and its minimum eigenvalue are unique.
pub fn uniqueness_probe(report: &WorstCaseReport) -> UniquenessVerdict {
    let classes: HashSet<ErrorEvent> = report
        .achieving_events
        .iter()
        .map(modulation_class)
        .collect();
    let simple = report.multiplicity == 1;
    UniquenessVerdict {
        multiplicity: report.multiplicity,
        relative_gap: report.relative_gap,
        simple,
        ties: report.ties,
        tie_classes: classes.len(),
        unique: simple && classes.len() == 1,
    }
}
