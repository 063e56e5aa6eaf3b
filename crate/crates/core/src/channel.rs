use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// Energy tolerance for a normalized channel.
pub const ENERGY_TOLERANCE: f64 = 1e-12;

/// FIR channel `f_0 ... f_{L-1}` with unit energy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChannelTaps {
    taps: Vec<f64>,
}

pub fn energy(taps: &[f64]) -> f64 {
    taps.iter().map(|x| x * x).sum()
}

impl ChannelTaps {
    /// Accepts taps whose energy is already 1 within [`ENERGY_TOLERANCE`].
    pub fn new(taps: Vec<f64>) -> Result<Self> {
        check_finite(&taps)?;
        let e = energy(&taps);
        if (e - 1.0).abs() > ENERGY_TOLERANCE {
            return input(format!("channel energy {e} is not 1"));
        }
        Ok(ChannelTaps { taps })
    }

    /// Scales `taps` to unit energy.
    pub fn normalized(taps: Vec<f64>) -> Result<Self> {
        check_finite(&taps)?;
        let e = energy(&taps);
        if e == 0.0 {
            return input("channel has zero energy");
        }
        let s = e.sqrt();
        Ok(ChannelTaps {
            taps: taps.into_iter().map(|x| x / s).collect(),
        })
    }

    /// The ISI-free channel `(1)`.
    pub fn identity() -> Self {
        ChannelTaps { taps: vec![1.0] }
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.taps
    }
}

fn check_finite(taps: &[f64]) -> Result<()> {
    if taps.is_empty() {
        return input("channel needs at least one tap");
    }
    if taps.iter().any(|x| !x.is_finite()) {
        return input("channel taps must be finite");
    }
    Ok(())
}

impl Deref for ChannelTaps {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.taps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        let h = 0.5f64.sqrt();
        assert!(ChannelTaps::new(vec![h, h]).is_ok());
        assert!(ChannelTaps::new(vec![1.0, 1.0]).is_err());
        assert!(ChannelTaps::new(vec![]).is_err());
        assert!(ChannelTaps::normalized(vec![0.0, 0.0]).is_err());
        assert!(ChannelTaps::normalized(vec![f64::NAN]).is_err());
        let c = ChannelTaps::normalized(vec![3.0, 4.0]).unwrap();
        assert!((c[0] - 0.6).abs() < 1e-15 && (c[1] - 0.8).abs() < 1e-15);
        assert!((energy(&c) - 1.0).abs() <= ENERGY_TOLERANCE);
    }
}
