//! Error correlation matrices.
//!
//! For an event `ε` the squared distance it produces on a channel `f` is
//! `d² = fᵀ A f`, where `A` is the symmetric Toeplitz matrix built from the
//! event's lag autocorrelation `β_m = Σ_k ε_k ε_{k+m}`. The β values stay
//! integral until an eigen solve needs floats.

use serde::{Deserialize, Serialize};

use crate::eigen::Matrix;
use crate::error::{input, Result};
use crate::events::ErrorEvent;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Autocorrelation {
    beta: Vec<i64>,
}

impl Autocorrelation {
    pub fn beta(&self) -> &[i64] {
        &self.beta
    }

    /// `β_m`, zero beyond the stored lags.
    pub fn lag(&self, m: usize) -> i64 {
        self.beta.get(m).copied().unwrap_or(0)
    }
}

/// `(β_0, ..., β_{lags-1})`, zero-padded past the event support.
pub fn autocorrelation(event: &ErrorEvent, lags: usize) -> Result<Autocorrelation> {
    if lags < 1 {
        return input("autocorrelation needs at least one lag");
    }
    Ok(Autocorrelation {
        beta: raw_autocorrelation(event.symbols(), lags),
    })
}

pub(crate) fn raw_autocorrelation(s: &[i32], lags: usize) -> Vec<i64> {
    (0..lags)
        .map(|m| {
            if m >= s.len() {
                return 0;
            }
            s.iter()
                .zip(&s[m..])
                .map(|(&a, &b)| a as i64 * b as i64)
                .sum()
        })
        .collect()
}

/// Symmetric Toeplitz matrix stored by its first row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    first_row: Vec<i64>,
}

impl CorrelationMatrix {
    pub fn from_first_row(first_row: Vec<i64>) -> Result<Self> {
        if first_row.is_empty() {
            return input("correlation matrix order must be at least 1");
        }
        Ok(CorrelationMatrix { first_row })
    }

    pub fn order(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[i64] {
        &self.first_row
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.first_row[i.abs_diff(j)]
    }

    pub fn dense(&self) -> Matrix {
        let n = self.order();
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.entry(i, j) as f64;
            }
        }
        m
    }

    fn row_off_diagonal(&self, i: usize) -> i64 {
        let n = self.order();
        (0..n)
            .filter(|&j| j != i)
            .map(|j| self.entry(i, j).abs())
            .sum()
    }

    /// Gershgorin lower bound on the spectrum, exact in integers.
    pub fn gershgorin_lower_bound(&self) -> i64 {
        (0..self.order())
            .map(|i| self.first_row[0] - self.row_off_diagonal(i))
            .min()
            .unwrap_or(0)
    }

    pub fn gershgorin_upper_bound(&self) -> i64 {
        (0..self.order())
            .map(|i| self.first_row[0] + self.row_off_diagonal(i))
            .max()
            .unwrap_or(0)
    }

    /// `fᵀ A f`.
    pub fn quadratic_form(&self, f: &[f64]) -> Result<f64> {
        let n = self.order();
        if f.len() != n {
            return input(format!(
                "vector of length {} does not match matrix order {n}",
                f.len()
            ));
        }
        // Σ_i Σ_j β_|i-j| f_i f_j = β_0 Σ f_i² + 2 Σ_{m≥1} β_m Σ_i f_i f_{i+m}
        let mut total = 0.0;
        for (m, &b) in self.first_row.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let lagged: f64 = f.iter().zip(&f[m..]).map(|(x, y)| x * y).sum();
            total += if m == 0 { 1.0 } else { 2.0 } * b as f64 * lagged;
        }
        Ok(total)
    }
}

/// `L × L` matrix with entry `(i, j) = β_|i-j|`; missing lags read as zero.
pub fn build_matrix(acf: &Autocorrelation, order: usize) -> Result<CorrelationMatrix> {
    if order < 1 {
        return input("correlation matrix order must be at least 1");
    }
    CorrelationMatrix::from_first_row((0..order).map(|m| acf.lag(m)).collect())
}

/// Shorthand for `build_matrix(autocorrelation(event, order), order)`.
pub fn event_matrix(event: &ErrorEvent, order: usize) -> Result<CorrelationMatrix> {
    build_matrix(&autocorrelation(event, order)?, order)
}
