//! Signal generation, Viterbi MLSE and Monte Carlo bit error rates.
//!
//! # Reproducible streams
//!
//! All randomness comes from one SplitMix64 generator seeded with the raw
//! 64-bit seed (`state = seed`; each draw adds `0x9E3779B97F4A7C15`, then
//! mixes with `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`). For a block of
//! `n` symbols the stream is consumed in this order:
//!
//! 1. `n` symbol draws: `index = (next_u64() >> 32) % M`, level
//!    `2 * index - (M - 1)`.
//! 2. Gaussian noise in Box–Muller pairs from two draws `x`, `y`:
//!    `u1 = ((x >> 11) + 1) * 2⁻⁵³`, `u2 = (y >> 11) * 2⁻⁵³`,
//!    `r = sqrt(-2 ln u1)`, samples `r cos(2π u2)` then `r sin(2π u2)`.
//!    An unused final sample is discarded.
//!
//! The received sample is `z_k = Σ_i f_i a_{k-i} + σ n_k` with `a_j = 0`
//! for `j < 0`. SNR in dB is `10 log10(1 / σ²)` for a unit-energy channel and
//! unit-power binary symbols.

use std::io::{self, Write};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::ChannelTaps;
use crate::error::{input, Error, Result};

pub const DEFAULT_MAX_STATES: usize = 4096;

/// SplitMix64 source with a Box–Muller Gaussian on top.
pub struct NoiseSource {
    rng: SplitMix64,
    spare: Option<f64>,
}

impl NoiseSource {
    pub fn new(seed: u64) -> Self {
        NoiseSource {
            rng: SplitMix64::from_seed(seed.to_le_bytes()),
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_index(&mut self, m: u32) -> u32 {
        ((self.next_u64() >> 32) % m as u64) as u32
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(s) = self.spare.take() {
            return s;
        }
        let x = self.next_u64();
        let y = self.next_u64();
        let u1 = ((x >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = (y >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

fn level(index: usize, m: usize) -> f64 {
    (2 * index) as f64 - (m - 1) as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct SimConfig {
    pub channel: ChannelTaps,
    pub n_symbols: usize,
    pub noise_sigma: f64,
    pub seed: u64,
    pub levels: u32,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_symbols < 1 {
            return input("simulation needs at least one symbol");
        }
        if !(self.noise_sigma > 0.0) || !self.noise_sigma.is_finite() {
            return input("noise sigma must be positive and finite");
        }
        if self.levels < 2 {
            return input("alphabet needs at least 2 levels");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transmission {
    /// PAM levels `±1, ±3, ...`.
    pub symbols: Vec<i32>,
    pub received: Vec<f64>,
}

/// Noiseless channel output with a silent prefix.
pub fn convolve(channel: &[f64], symbols: &[i32]) -> Vec<f64> {
    (0..symbols.len())
        .map(|k| {
            channel
                .iter()
                .enumerate()
                .take(k + 1)
                .map(|(i, f)| f * symbols[k - i] as f64)
                .sum()
        })
        .collect()
}

pub fn simulate_transmission(cfg: &SimConfig) -> Result<Transmission> {
    cfg.validate()?;
    let m = cfg.levels as usize;
    let mut src = NoiseSource::new(cfg.seed);
    let symbols: Vec<i32> = (0..cfg.n_symbols)
        .map(|_| level(src.next_index(cfg.levels) as usize, m) as i32)
        .collect();
    let received = convolve(&cfg.channel, &symbols)
        .into_iter()
        .map(|y| y + cfg.noise_sigma * src.next_gaussian())
        .collect();
    Ok(Transmission { symbols, received })
}

#[derive(Clone, Copy, Debug)]
pub struct ViterbiOptions {
    pub max_states: usize,
    /// Decision delay; `None` means `5 L`.
    pub traceback_depth: Option<usize>,
}

impl Default for ViterbiOptions {
    fn default() -> Self {
        ViterbiOptions {
            max_states: DEFAULT_MAX_STATES,
            traceback_depth: None,
        }
    }
}

pub fn viterbi_detect(channel: &[f64], received: &[f64], levels: u32) -> Result<Vec<i32>> {
    viterbi_detect_with(channel, received, levels, ViterbiOptions::default())
}

/// Survivor memory: a ring of decision rows plus the state arithmetic.
struct Survivors {
    m: usize,
    /// Weight of the oldest memory digit, `M^(mem-1)`.
    oldest: usize,
    rows: Vec<Vec<u8>>,
}

impl Survivors {
    fn row(&self, t: usize) -> &[u8] {
        &self.rows[t % self.rows.len()]
    }

    fn pred(&self, t: usize, s: usize) -> usize {
        s / self.m + self.row(t)[s] as usize * self.oldest
    }

    /// Compare the survivor paths ending in states `a` and `b` at time `t`,
    /// earliest symbol first. Decisions older than the ring are unavailable
    /// and the comparison falls back to the remaining memory digits.
    fn cmp_paths(&self, mut a: usize, mut b: usize, t: usize) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let mut verdict = Ordering::Equal;
        let floor = (t + 1).saturating_sub(self.rows.len() - 1);
        let mut tau = t;
        while a != b {
            let (sa, sb) = (a % self.m, b % self.m);
            if sa != sb {
                verdict = sa.cmp(&sb);
            }
            if tau == 0 {
                break;
            }
            if tau <= floor {
                // Out of ring: older digits of the boundary states decide.
                let mut w = self.oldest;
                while w > 1 {
                    let (da, db) = ((a / w) % self.m, (b / w) % self.m);
                    if da != db {
                        return da.cmp(&db);
                    }
                    w /= self.m;
                }
                break;
            }
            a = self.pred(tau, a);
            b = self.pred(tau, b);
            tau -= 1;
        }
        verdict
    }
}

/// ML sequence detection over `M^(L-1)` states.
///
/// Symbols before the block are taken as silent, so the trellis starts from
/// one known state. Decisions are released with a delay of
/// `traceback_depth` from the best current state; the final stretch comes
/// from the best final state. Equal path metrics resolve to the
/// lexicographically smaller survivor.
pub fn viterbi_detect_with(
    channel: &[f64],
    received: &[f64],
    levels: u32,
    options: ViterbiOptions,
) -> Result<Vec<i32>> {
    if channel.is_empty() {
        return input("channel needs at least one tap");
    }
    if levels < 2 {
        return input("alphabet needs at least 2 levels");
    }
    if levels > 256 {
        return input("at most 256 levels are supported");
    }
    let len = channel.len();
    let m = levels as usize;
    m.checked_pow((len - 1) as u32)
        .filter(|&s| s <= options.max_states)
        .ok_or_else(|| {
            Error::Resource(format!(
                "{levels}^{} trellis states exceed the limit of {}",
                len - 1,
                options.max_states
            ))
        })?;
    let n = received.len();
    if n == 0 {
        return Ok(Vec::new());
    }

    // A memoryless channel runs as a two-tap channel with a zero tail.
    let mem = (len - 1).max(1);
    let mut taps = channel.to_vec();
    taps.resize(mem + 1, 0.0);
    let states = m.pow(mem as u32);
    let oldest = m.pow(mem as u32 - 1);
    let depth = options.traceback_depth.unwrap_or(5 * len).max(1);

    // Expected output for (new state, dropped digit), all taps active.
    let steady: Vec<f64> = (0..states * m)
        .map(|idx| {
            let (s, j) = (idx / m, idx % m);
            let mut y = 0.0;
            let mut rest = s;
            for tap in taps.iter().take(mem) {
                y += tap * level(rest % m, m);
                rest /= m;
            }
            y + taps[mem] * level(j, m)
        })
        .collect();
    let early = |s: usize, t: usize| -> f64 {
        let mut y = 0.0;
        let mut rest = s;
        for tap in taps.iter().take(mem.min(t + 1)) {
            y += tap * level(rest % m, m);
            rest /= m;
        }
        y
    };

    let mut surv = Survivors {
        m,
        oldest,
        rows: vec![vec![0u8; states]; depth + 1],
    };
    let mut metric = vec![f64::INFINITY; states];
    metric[0] = 0.0;
    let mut next = vec![f64::INFINITY; states];
    let mut out = vec![0i32; n];

    for t in 0..n {
        let z = received[t];
        let mut row = std::mem::take(&mut surv.rows[t % (depth + 1)]);
        for s in 0..states {
            let base = s / m;
            let mut best = f64::INFINITY;
            let mut best_j = 0usize;
            for j in 0..m {
                let p = base + j * oldest;
                let pm = metric[p];
                if pm == f64::INFINITY {
                    continue;
                }
                let y = if t >= mem {
                    steady[s * m + j]
                } else {
                    early(s, t)
                };
                let cand = pm + (z - y) * (z - y);
                let take = if cand < best {
                    true
                } else if cand == best && t > 0 {
                    let incumbent = base + best_j * oldest;
                    surv.cmp_paths(p, incumbent, t - 1) == std::cmp::Ordering::Less
                } else {
                    false
                };
                if take {
                    best = cand;
                    best_j = j;
                }
            }
            next[s] = best;
            row[s] = best_j as u8;
        }
        surv.rows[t % (depth + 1)] = row;
        std::mem::swap(&mut metric, &mut next);

        if t % 1024 == 1023 {
            let lo = metric.iter().copied().fold(f64::INFINITY, f64::min);
            metric.iter_mut().for_each(|x| *x -= lo);
        }

        if t >= depth {
            let mut s = argmin(&metric);
            for tau in (t - depth + 1..=t).rev() {
                s = surv.pred(tau, s);
            }
            out[t - depth] = level(s % m, m) as i32;
        }
    }

    // Best final state, ties to the smaller survivor.
    let mut s = 0usize;
    for c in 1..states {
        if metric[c] < metric[s]
            || (metric[c] == metric[s]
                && metric[c] < f64::INFINITY
                && surv.cmp_paths(c, s, n - 1) == std::cmp::Ordering::Less)
        {
            s = c;
        }
    }
    out[n - 1] = level(s % m, m) as i32;
    for tau in (n.saturating_sub(depth).max(1)..n).rev() {
        s = surv.pred(tau, s);
        out[tau - 1] = level(s % m, m) as i32;
    }
    Ok(out)
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x < v[best] {
            best = i;
        }
    }
    best
}

/// Sum of squared residuals for `symbols` against `received`.
pub fn path_metric(channel: &[f64], received: &[f64], symbols: &[i32]) -> f64 {
    convolve(channel, symbols)
        .iter()
        .zip(received)
        .map(|(y, z)| (z - y) * (z - y))
        .sum()
}

/// Brute-force ML over all `M^n` sequences (small blocks only); ties go to
/// the lexicographically smaller sequence.
pub fn exhaustive_detect(channel: &[f64], received: &[f64], levels: u32) -> Result<Vec<i32>> {
    let n = received.len();
    let m = levels as usize;
    if levels < 2 {
        return input("alphabet needs at least 2 levels");
    }
    let total = m
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 22)
        .ok_or_else(|| Error::Resource(format!("{m}^{n} sequences is too many to enumerate")))?;
    let mut best = f64::INFINITY;
    let mut best_seq = vec![0i32; n];
    let mut seq = vec![0i32; n];
    for code in 0..total {
        // Most significant digit first, so codes ascend lexicographically.
        let mut c = code;
        for k in (0..n).rev() {
            seq[k] = level(c % m, m) as i32;
            c /= m;
        }
        let d = path_metric(channel, received, &seq);
        if d < best {
            best = d;
            best_seq.copy_from_slice(&seq);
        }
    }
    Ok(best_seq)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub errors: u64,
    pub trials: u64,
    pub ber: f64,
}

pub fn sigma_for_snr_db(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 20.0)
}

pub fn snr_db_for_sigma(sigma: f64) -> f64 {
    10.0 * (1.0 / (sigma * sigma)).log10()
}

/// Symbol errors of one simulated block (bit errors when `M = 2`).
pub fn simulate_errors(cfg: &SimConfig) -> Result<u64> {
    let tx = simulate_transmission(cfg)?;
    let decided = viterbi_detect(&cfg.channel, &tx.received, cfg.levels)?;
    Ok(decided
        .iter()
        .zip(&tx.symbols)
        .filter(|(a, b)| a != b)
        .count() as u64)
}

/// Binary BER at each SNR; point `i` uses seed `seed + i`.
pub fn ber_curve(
    channel: &ChannelTaps,
    snr_db: &[f64],
    n_symbols: usize,
    seed: u64,
) -> Result<Vec<BerPoint>> {
    if snr_db.is_empty() {
        return input("SNR list is empty");
    }
    snr_db
        .par_iter()
        .enumerate()
        .map(|(i, &snr)| {
            let cfg = SimConfig {
                channel: channel.clone(),
                n_symbols,
                noise_sigma: sigma_for_snr_db(snr),
                seed: seed.wrapping_add(i as u64),
                levels: 2,
            };
            let errors = simulate_errors(&cfg)?;
            Ok(BerPoint {
                snr_db: snr,
                errors,
                trials: n_symbols as u64,
                ber: errors as f64 / n_symbols as f64,
            })
        })
        .collect()
}

/// Gaussian tail probability `Q(x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// SNR where the curve crosses `target`, interpolating `log10(ber)`
/// linearly between the first bracketing pair of points.
pub fn snr_at_ber(points: &[BerPoint], target: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.ber >= target && b.ber <= target && a.ber > 0.0 && b.ber > 0.0 && a.ber > b.ber {
            let (la, lb, lt) = (a.ber.log10(), b.ber.log10(), target.log10());
            Some(a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db))
        } else {
            None
        }
    })
}

/// C `printf("%.*e")` formatting: two-digit signed exponent.
pub fn format_exp(x: f64, precision: usize) -> String {
    let s = format!("{x:.precision$e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let (sign, digits) = match exp.strip_prefix('-') {
                Some(d) => ('-', d),
                None => ('+', exp),
            };
            format!("{mantissa}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

pub const BER_CSV_HEADER: &str = "snr_db,errors,trials,ber";

pub fn write_ber_csv<W: Write>(mut w: W, points: &[BerPoint]) -> io::Result<()> {
    writeln!(w, "{BER_CSV_HEADER}")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{}",
            p.snr_db,
            p.errors,
            p.trials,
            format_exp(p.ber, 6)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn taps(v: &[f64]) -> ChannelTaps {
        ChannelTaps::normalized(v.to_vec()).unwrap()
    }

    #[test]
    fn splitmix_reference_stream() {
        // Reference outputs of SplitMix64 seeded with 0.
        let mut s = NoiseSource::new(0);
        assert_eq!(s.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(s.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn noiseless_identity_channel() {
        let cfg = SimConfig {
            channel: ChannelTaps::identity(),
            n_symbols: 64,
            noise_sigma: 1e-12,
            seed: 3,
            levels: 2,
        };
        let tx = simulate_transmission(&cfg).unwrap();
        for (a, z) in tx.symbols.iter().zip(&tx.received) {
            assert!((*a as f64 - z).abs() < 1e-9);
            assert!(*a == 1 || *a == -1);
        }
    }

    #[test]
    fn seeded_runs_are_identical() {
        let cfg = SimConfig {
            channel: taps(&[1.0, 1.0]),
            n_symbols: 8,
            noise_sigma: 0.3,
            seed: 42,
            levels: 2,
        };
        let a = simulate_transmission(&cfg).unwrap();
        let b = simulate_transmission(&cfg).unwrap();
        assert_eq!(a, b);
        let bits: Vec<u64> = a.received.iter().map(|x| x.to_bits()).collect();
        let bits_b: Vec<u64> = b.received.iter().map(|x| x.to_bits()).collect();
        assert_eq!(bits, bits_b);
    }

    #[test]
    fn noise_variance_concentrates() {
        let n = 1_000_000;
        let sigma = 0.7;
        let mut src = NoiseSource::new(11);
        let samples: Vec<f64> = (0..n).map(|_| sigma * src.next_gaussian()).collect();
        let var = samples.iter().map(|x| x * x).sum::<f64>() / n as f64;
        let s2 = sigma * sigma;
        assert!(
            (var - s2).abs() <= 3.0 * s2 * (2.0 / n as f64).sqrt(),
            "{var}"
        );
    }

    #[test]
    fn config_validation() {
        let mut cfg = SimConfig {
            channel: ChannelTaps::identity(),
            n_symbols: 0,
            noise_sigma: 1.0,
            seed: 0,
            levels: 2,
        };
        assert!(simulate_transmission(&cfg).is_err());
        cfg.n_symbols = 4;
        cfg.noise_sigma = 0.0;
        assert!(simulate_transmission(&cfg).is_err());
    }

    #[test]
    fn noiseless_recovery() {
        for v in [
            &[1.0][..],
            &[1.0, 0.5],
            &[0.5, -0.7, 0.5],
            &[0.3, 0.6, -0.6, 0.3],
        ] {
            let f = taps(v);
            for levels in [2, 4] {
                let cfg = SimConfig {
                    channel: f.clone(),
                    n_symbols: 200,
                    noise_sigma: 1.0,
                    seed: 5,
                    levels,
                };
                let tx = simulate_transmission(&cfg).unwrap();
                let clean = convolve(&f, &tx.symbols);
                let got = viterbi_detect(&f, &clean, levels).unwrap();
                assert_eq!(got, tx.symbols, "{v:?} M={levels}");
            }
        }
    }

    #[test]
    fn state_limit() {
        let f = vec![0.1; 14];
        let err = viterbi_detect(&f, &[0.0; 4], 2).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
        assert!(viterbi_detect(&[1.0], &[], 2).unwrap().is_empty());
    }

    #[test]
    fn exact_ties_take_smaller_sequence() {
        // On f = (1) a zero sample is equidistant from both levels.
        let got = viterbi_detect(&[1.0], &[0.0, 0.0, 2.0], 2).unwrap();
        assert_eq!(got, vec![-1, -1, 1]);
        let brute = exhaustive_detect(&[1.0], &[0.0, 0.0, 2.0], 2).unwrap();
        assert_eq!(got, brute);
    }

    #[test]
    fn matches_exhaustive_search() {
        let h = 0.5f64.sqrt();
        let channels = [vec![1.0], vec![h, h], vec![0.5, -h, 0.5], vec![0.8, 0.6]];
        for seed in 0..100u64 {
            let f = taps(&channels[seed as usize % channels.len()]);
            let n = 6 + (seed as usize % 9);
            let cfg = SimConfig {
                channel: f.clone(),
                n_symbols: n,
                noise_sigma: 0.6,
                seed,
                levels: 2,
            };
            let tx = simulate_transmission(&cfg).unwrap();
            let v = viterbi_detect(&f, &tx.received, 2).unwrap();
            let b = exhaustive_detect(&f, &tx.received, 2).unwrap();
            assert_eq!(v, b, "seed {seed}");
        }
    }

    #[test]
    fn four_level_matches_exhaustive() {
        for seed in 0..20u64 {
            let f = taps(&[0.9, 0.4]);
            let cfg = SimConfig {
                channel: f.clone(),
                n_symbols: 7,
                noise_sigma: 0.8,
                seed,
                levels: 4,
            };
            let tx = simulate_transmission(&cfg).unwrap();
            let v = viterbi_detect(&f, &tx.received, 4).unwrap();
            let b = exhaustive_detect(&f, &tx.received, 4).unwrap();
            assert_eq!(v, b);
        }
    }

    #[test]
    fn short_traceback_still_decodes_clean_signal() {
        let f = taps(&[0.5, -0.7, 0.5]);
        let cfg = SimConfig {
            channel: f.clone(),
            n_symbols: 500,
            noise_sigma: 0.05,
            seed: 9,
            levels: 2,
        };
        let tx = simulate_transmission(&cfg).unwrap();
        let opts = ViterbiOptions {
            traceback_depth: Some(3),
            ..Default::default()
        };
        let got = viterbi_detect_with(&f, &tx.received, 2, opts).unwrap();
        assert_eq!(got, tx.symbols);
    }

    #[test]
    fn q_function_values() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-15);
        assert!((q_function(2.0) - 0.022750131948179195).abs() < 1e-15);
        assert!((q_function(3.090232306167813) - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn snr_sigma_round_trip() {
        assert!((sigma_for_snr_db(20.0) - 0.1).abs() < 1e-15);
        assert!((snr_db_for_sigma(0.5) - 6.020599913279624).abs() < 1e-12);
    }

    #[test]
    fn interpolated_crossing() {
        let pts = vec![
            BerPoint {
                snr_db: 0.0,
                errors: 100,
                trials: 1000,
                ber: 0.1,
            },
            BerPoint {
                snr_db: 1.0,
                errors: 10,
                trials: 1000,
                ber: 0.01,
            },
        ];
        assert!((snr_at_ber(&pts, 10f64.powf(-1.5)).unwrap() - 0.5).abs() < 1e-12);
        assert!(snr_at_ber(&pts, 1e-3).is_none());
    }

    #[test]
    fn c_style_exponent() {
        assert_eq!(format_exp(0.02275, 6), "2.275000e-02");
        assert_eq!(format_exp(0.0, 6), "0.000000e+00");
        assert_eq!(format_exp(1.0, 6), "1.000000e+00");
        assert_eq!(format_exp(1.5e-120, 2), "1.50e-120");
    }

    #[test]
    fn csv_layout() {
        let pts = vec![BerPoint {
            snr_db: 2.5,
            errors: 3,
            trials: 100,
            ber: 0.03,
        }];
        let mut buf = Vec::new();
        write_ber_csv(&mut buf, &pts).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "snr_db,errors,trials,ber\n2.5,3,100,3.000000e-02\n"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn scaling_leaves_decisions_unchanged(seed in 0u64..1000, scale in 0.1f64..10.0) {
            let f = taps(&[0.6, 0.7, 0.3]);
            let cfg = SimConfig { channel: f.clone(), n_symbols: 40, noise_sigma: 0.5, seed, levels: 2 };
            let tx = simulate_transmission(&cfg).unwrap();
            let scaled_f: Vec<f64> = f.iter().map(|x| x * scale).collect();
            let scaled_z: Vec<f64> = tx.received.iter().map(|x| x * scale).collect();
            let a = viterbi_detect(&f, &tx.received, 2).unwrap();
            let b = viterbi_detect(&scaled_f, &scaled_z, 2).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
