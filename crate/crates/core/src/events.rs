//! Error events over an M-PAM difference alphabet.
//!
//! An error event is the normalized difference `(a - a') / 2` between two
//! symbol sequences, trimmed so that its first and last symbols are nonzero.
//! For M-PAM the symbols lie in `{-(M-1), ..., M-1}`; binary signalling gives
//! `{-1, 0, 1}`.
//!
//! Events related by negation or time reversal produce the same distance on
//! every channel, so only one representative of each orbit is kept. The
//! representative is the orbit minimum under [`symbol_order`], compared
//! lexicographically.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// Total order on error symbols: by magnitude, then positive before negative.
///
/// `0 < 1 < -1 < 2 < -2 < ...`
pub fn symbol_order(a: i32, b: i32) -> Ordering {
    a.unsigned_abs()
        .cmp(&b.unsigned_abs())
        .then_with(|| (a < 0).cmp(&(b < 0)))
}

fn lex_cmp<I, J>(a: I, b: J) -> Ordering
where
    I: IntoIterator<Item = i32>,
    J: IntoIterator<Item = i32>,
{
    let mut a = a.into_iter();
    let mut b = b.into_iter();
    loop {
        match (a.next(), b.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) => match symbol_order(x, y) {
                Ordering::Equal => continue,
                o => return o,
            },
        }
    }
}

/// A canonical error event.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ErrorEvent(Vec<i32>);

impl ErrorEvent {
    pub fn symbols(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest symbol magnitude.
    pub fn max_magnitude(&self) -> u32 {
        self.0.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0)
    }

    /// Longest run of consecutive zeros inside the event.
    pub fn max_zero_run(&self) -> usize {
        longest_zero_run(&self.0)
    }
}

impl fmt::Debug for ErrorEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ErrorEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

impl Ord for ErrorEvent {
    /// Canonical enumeration order: by length, then lexicographic under
    /// [`symbol_order`].
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| lex_cmp(self.0.iter().copied(), other.0.iter().copied()))
    }
}

impl PartialOrd for ErrorEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn longest_zero_run(s: &[i32]) -> usize {
    let mut best = 0;
    let mut run = 0;
    for &x in s {
        if x == 0 {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

fn check_borders(raw: &[i32]) -> Result<()> {
    match (raw.first(), raw.last()) {
        (None, _) | (_, None) => input("error event must be nonempty"),
        (Some(0), _) | (_, Some(0)) => input(format!(
            "error event {raw:?} must start and end with nonzero symbols"
        )),
        _ => Ok(()),
    }
}

/// `true` when `s` (nonzero borders, positive first symbol) is the orbit
/// minimum under negation and reversal.
fn is_canonical(s: &[i32]) -> bool {
    if s[0] < 0 {
        return false;
    }
    // Of the two reversed images, the one with a positive leading symbol is
    // the smaller; the negation of `s` itself always loses to `s`.
    let sign = if s[s.len() - 1] < 0 { -1 } else { 1 };
    lex_cmp(s.iter().copied(), s.iter().rev().map(|&x| sign * x)) != Ordering::Greater
}

/// Return the representative of the orbit of `raw` under
/// `{identity, negation, reversal, negation∘reversal}`.
pub fn canonicalize(raw: &[i32]) -> Result<ErrorEvent> {
    check_borders(raw)?;
    let fwd_sign = if raw[0] < 0 { -1 } else { 1 };
    let rev_sign = if raw[raw.len() - 1] < 0 { -1 } else { 1 };
    let fwd = raw.iter().map(|&x| fwd_sign * x);
    let rev = raw.iter().rev().map(|&x| rev_sign * x);
    let symbols = if lex_cmp(fwd.clone(), rev.clone()) == Ordering::Greater {
        rev.collect()
    } else {
        fwd.collect()
    };
    Ok(ErrorEvent(symbols))
}

/// Map `ε_k -> (-1)^k ε_k`. Applied to an event it maps the channel
/// `f_k -> (-1)^k f_k` and leaves every distance unchanged.
pub fn alternate_signs(raw: &[i32]) -> Vec<i32> {
    raw.iter()
        .enumerate()
        .map(|(k, &x)| if k % 2 == 1 { -x } else { x })
        .collect()
}

/// Search space for error events.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetSpec {
    pub levels: u32,
    pub max_event_len: usize,
    pub max_zero_run: usize,
}

impl AlphabetSpec {
    pub fn new(levels: u32, max_event_len: usize, max_zero_run: usize) -> Result<Self> {
        let spec = AlphabetSpec {
            levels,
            max_event_len,
            max_zero_run,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Defaults for an analysis at channel length `len`: event cap
    /// `max(2L, 12)` and zero runs of at most `L - 2` (a run of `L - 1` zeros
    /// closes an event in the length-`L` trellis).
    pub fn for_channel_length(levels: u32, len: usize) -> Result<Self> {
        Self::new(levels, default_event_cap(len), default_zero_run(len))
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels < 2 {
            return input(format!(
                "alphabet needs at least 2 levels, got {}",
                self.levels
            ));
        }
        if self.max_event_len < 1 {
            return input("max_event_len must be at least 1");
        }
        Ok(())
    }

    /// Largest error symbol magnitude, `M - 1`.
    pub fn max_symbol(&self) -> i32 {
        self.levels as i32 - 1
    }
}

pub fn default_event_cap(len: usize) -> usize {
    (2 * len).max(12)
}

pub fn default_zero_run(len: usize) -> usize {
    len.saturating_sub(2)
}

/// Stream every canonical event within `spec`, ordered by length and then
/// lexicographically under [`symbol_order`].
pub fn enumerate_events(spec: AlphabetSpec) -> Result<EventIter> {
    spec.validate()?;
    Ok(EventIter::new(spec))
}

/// Iterator returned by [`enumerate_events`].
///
/// Odometer over symbol indices into the ordered alphabet
/// `[0, 1, -1, 2, -2, ...]`; position 0 is restricted to positive symbols and
/// the last position to nonzero ones.
pub struct EventIter {
    spec: AlphabetSpec,
    alphabet: Vec<i32>,
    digits: Vec<usize>,
    symbols: Vec<i32>,
    fresh: bool,
}

impl EventIter {
    fn new(spec: AlphabetSpec) -> Self {
        let m = spec.max_symbol();
        let mut alphabet = vec![0];
        for k in 1..=m {
            alphabet.push(k);
            alphabet.push(-k);
        }
        let mut it = EventIter {
            spec,
            alphabet,
            digits: Vec::new(),
            symbols: Vec::new(),
            fresh: true,
        };
        it.reset_len(1);
        it
    }

    fn reset_len(&mut self, len: usize) {
        // Smallest valid digit string of this length: 1, 0, ..., 0, 1.
        self.digits = vec![0; len];
        self.digits[0] = 1;
        self.digits[len - 1] = 1;
        self.fresh = true;
    }

    fn min_digit(&self, pos: usize) -> usize {
        if pos == 0 || pos + 1 == self.digits.len() {
            1
        } else {
            0
        }
    }

    fn step(&self, pos: usize) -> usize {
        // Position 0 visits only positive symbols (odd indices).
        if pos == 0 {
            2
        } else {
            1
        }
    }

    /// Advance the odometer; returns false when the current length is
    /// exhausted.
    fn advance(&mut self) -> bool {
        let n = self.digits.len();
        for pos in (0..n).rev() {
            let next = self.digits[pos] + self.step(pos);
            if next < self.alphabet.len() {
                self.digits[pos] = next;
                for p in pos + 1..n {
                    self.digits[p] = self.min_digit(p);
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for EventIter {
    type Item = ErrorEvent;

    fn next(&mut self) -> Option<ErrorEvent> {
        loop {
            if self.fresh {
                self.fresh = false;
            } else if !self.advance() {
                let len = self.digits.len() + 1;
                if len > self.spec.max_event_len {
                    return None;
                }
                self.reset_len(len);
                self.fresh = false;
            }
            self.symbols.clear();
            self.symbols
                .extend(self.digits.iter().map(|&d| self.alphabet[d]));
            if longest_zero_run(&self.symbols) <= self.spec.max_zero_run
                && is_canonical(&self.symbols)
            {
                return Some(ErrorEvent(self.symbols.clone()));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn ev(s: &[i32]) -> ErrorEvent {
        ErrorEvent(s.to_vec())
    }

    fn orbit(s: &[i32]) -> Vec<Vec<i32>> {
        let neg: Vec<i32> = s.iter().map(|x| -x).collect();
        let rev: Vec<i32> = s.iter().rev().copied().collect();
        let negrev: Vec<i32> = rev.iter().map(|x| -x).collect();
        vec![s.to_vec(), neg, rev, negrev]
    }

    /// Every sequence of length <= max_len over {-m..m} with nonzero borders,
    /// reduced to orbit minima by brute force.
    fn brute_force(levels: u32, max_len: usize, max_zero_run: usize) -> Vec<ErrorEvent> {
        let m = levels as i32 - 1;
        let mut out = BTreeSet::new();
        for len in 1..=max_len {
            let base = (2 * m + 1) as usize;
            let total = base.pow(len as u32);
            for mut code in 0..total {
                let mut s = Vec::with_capacity(len);
                for _ in 0..len {
                    s.push((code % base) as i32 - m);
                    code /= base;
                }
                if s[0] == 0 || s[len - 1] == 0 || longest_zero_run(&s) > max_zero_run {
                    continue;
                }
                let best = orbit(&s).into_iter().map(ErrorEvent).min().unwrap();
                out.insert(best);
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn single_symbol_binary() {
        let spec = AlphabetSpec::new(2, 1, 0).unwrap();
        let all: Vec<_> = enumerate_events(spec).unwrap().collect();
        assert_eq!(all, vec![ev(&[1])]);
    }

    #[test]
    fn length_two_binary() {
        let spec = AlphabetSpec::new(2, 2, 0).unwrap();
        let all: Vec<_> = enumerate_events(spec).unwrap().collect();
        assert_eq!(all, vec![ev(&[1]), ev(&[1, 1]), ev(&[1, -1])]);
    }

    #[test]
    fn length_three_binary_counts() {
        let spec = AlphabetSpec::new(2, 3, 1).unwrap();
        let all: Vec<_> = enumerate_events(spec).unwrap().collect();
        assert_eq!(all.len(), 8);
        let per_len: Vec<usize> = (1..=3)
            .map(|l| all.iter().filter(|e| e.len() == l).count())
            .collect();
        assert_eq!(per_len, vec![1, 2, 5]);
    }

    #[test]
    fn matches_brute_force() {
        for (levels, max_len) in [(2, 6), (3, 4), (4, 3)] {
            for zr in 0..3 {
                let spec = AlphabetSpec::new(levels, max_len, zr).unwrap();
                let got: Vec<_> = enumerate_events(spec).unwrap().collect();
                let want = brute_force(levels, max_len, zr);
                assert_eq!(got, want, "M={levels} len={max_len} zr={zr}");
            }
        }
    }

    #[test]
    fn order_is_sorted_and_unique() {
        let spec = AlphabetSpec::new(3, 5, 2).unwrap();
        let all: Vec<_> = enumerate_events(spec).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|e| e.max_magnitude() <= 2));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&[-1, 1]).unwrap(), ev(&[1, -1]));
        assert_eq!(canonicalize(&[1, 1, -1]).unwrap(), ev(&[1, 1, -1]));
        assert_eq!(canonicalize(&[-1, 1, 1]).unwrap(), ev(&[1, 1, -1]));
        assert_eq!(canonicalize(&[1, 0, 1]).unwrap(), ev(&[1, 0, 1]));
    }

    #[test]
    fn canonicalize_rejects_bad_borders() {
        assert!(canonicalize(&[]).is_err());
        assert!(canonicalize(&[0, 1]).is_err());
        assert!(canonicalize(&[1, 0]).is_err());
    }

    #[test]
    fn invalid_spec() {
        assert!(AlphabetSpec::new(1, 3, 0).is_err());
        assert!(AlphabetSpec::new(2, 0, 0).is_err());
    }

    #[test]
    fn default_bounds() {
        let s = AlphabetSpec::for_channel_length(2, 1).unwrap();
        assert_eq!((s.max_event_len, s.max_zero_run), (12, 0));
        let s = AlphabetSpec::for_channel_length(2, 8).unwrap();
        assert_eq!((s.max_event_len, s.max_zero_run), (16, 6));
    }

    fn raw_event() -> impl Strategy<Value = Vec<i32>> {
        (1usize..10).prop_flat_map(|n| {
            proptest::collection::vec(-3i32..=3, n).prop_map(|mut v| {
                let n = v.len();
                if v[0] == 0 {
                    v[0] = 2;
                }
                if v[n - 1] == 0 {
                    v[n - 1] = -1;
                }
                v
            })
        })
    }

    fn acf(s: &[i32]) -> Vec<i64> {
        (0..s.len())
            .map(|m| {
                s.iter()
                    .zip(&s[m..])
                    .map(|(&a, &b)| a as i64 * b as i64)
                    .sum()
            })
            .collect()
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(raw in raw_event()) {
            let c = canonicalize(&raw).unwrap();
            prop_assert_eq!(canonicalize(c.symbols()).unwrap(), c.clone());
            prop_assert!(is_canonical(c.symbols()));
            let min = orbit(&raw).into_iter().map(ErrorEvent).min().unwrap();
            prop_assert_eq!(c, min);
        }

        #[test]
        fn canonicalize_preserves_autocorrelation(raw in raw_event()) {
            let c = canonicalize(&raw).unwrap();
            prop_assert_eq!(acf(c.symbols()), acf(&raw));
        }
    }
}
