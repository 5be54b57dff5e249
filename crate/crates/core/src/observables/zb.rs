//! Separating the constant drift from the transient Zitterbewegung of a scalar series.
//!
//! Drift: Hann-weighted mean over the second half of the record, which suppresses the residual
//! oscillation better than a plain mean. Frequency: peak of the Hann-windowed, zero-padded DFT of
//! the detrended series, refined by a parabola through the log magnitudes. Envelope: running
//! maximum of |v − drift| taken from the end of the record, so it is non-increasing by
//! construction.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::observables::series::ObservableSeries;

pub const MIN_POINTS: usize = 16;
/// Largest sample spacing accepted: 8 points per period of frequency 2.
pub const MAX_SPACING: f64 = PI / 8.0;
const PAD_FACTOR: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZbFit {
    pub drift: f64,
    /// Angular frequency of the dominant oscillation (mc²/ħ units); `None` when the detrended
    /// series is identically zero.
    pub frequency: Option<f64>,
    pub times: Vec<f64>,
    pub envelope: Vec<f64>,
    /// Largest |v − drift| over the record.
    pub amplitude: f64,
}

impl ZbFit {
    /// First time after which the envelope stays below `fraction` of its initial value.
    pub fn time_to_fraction(&self, fraction: f64) -> Option<f64> {
        let a0 = *self.envelope.first()?;
        if a0 == 0.0 {
            return Some(self.times[0]);
        }
        self.envelope
            .iter()
            .position(|&e| e <= fraction * a0)
            .map(|i| self.times[i])
    }
}

fn check_sampling(times: &[f64]) -> Result<f64> {
    if times.len() < MIN_POINTS {
        return Err(Error::Undersampled(format!(
            "{} samples, at least {MIN_POINTS} needed",
            times.len()
        )));
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(dt > 0.0) {
        return Err(Error::Undersampled("zero time span".into()));
    }
    if times.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt) {
        return Err(Error::Undersampled("samples must be uniformly spaced".into()));
    }
    if dt > MAX_SPACING {
        return Err(Error::Undersampled(format!(
            "spacing {dt:.4} exceeds π/8; fewer than 8 samples per oscillation period"
        )));
    }
    Ok(dt)
}

fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (PI * (i as f64 + 0.5) / n as f64).sin().powi(2))
        .collect()
}

pub fn zb_fit(series: &ObservableSeries) -> Result<ZbFit> {
    let values = series
        .scalar_values()
        .ok_or_else(|| Error::InvalidInput("zb_fit needs a scalar series; select a component".into()))?;
    zb_fit_values(&series.times, values)
}

pub fn zb_fit_values(times: &[f64], values: &[f64]) -> Result<ZbFit> {
    if times.len() != values.len() {
        return Err(Error::InvalidInput("times and values differ in length".into()));
    }
    let dt = check_sampling(times)?;
    let n = times.len();

    let tail = &values[n / 2..];
    let w = hann(tail.len());
    let drift = tail.iter().zip(&w).map(|(v, w)| v * w).sum::<f64>() / w.iter().sum::<f64>();

    let resid: Vec<f64> = values.iter().map(|v| v - drift).collect();
    let mut envelope = vec![0.0; n];
    let mut run = 0.0f64;
    for i in (0..n).rev() {
        run = run.max(resid[i].abs());
        envelope[i] = run;
    }
    let amplitude = envelope[0];

    let frequency = if amplitude == 0.0 {
        None
    } else {
        Some(dominant_frequency(&resid, dt))
    };
    Ok(ZbFit {
        drift,
        frequency,
        times: times.to_vec(),
        envelope,
        amplitude,
    })
}

fn dominant_frequency(resid: &[f64], dt: f64) -> f64 {
    let n = resid.len();
    let mean = resid.iter().sum::<f64>() / n as f64;
    let w = hann(n);
    let len = (n * PAD_FACTOR).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for i in 0..n {
        buf[i] = Complex64::new((resid[i] - mean) * w[i], 0.0);
    }
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let mag: Vec<f64> = buf[..len / 2].iter().map(|c| c.norm()).collect();
    let k = (1..mag.len())
        .max_by(|&a, &b| mag[a].total_cmp(&mag[b]))
        .unwrap_or(1);
    let shift = if k + 1 < mag.len() && mag[k - 1] > 0.0 && mag[k + 1] > 0.0 {
        let (a, b, c) = (mag[k - 1].ln(), mag[k].ln(), mag[k + 1].ln());
        let den = a - 2.0 * b + c;
        if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 }
    } else {
        0.0
    };
    2.0 * PI * (k as f64 + shift) / (len as f64 * dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::series::Provenance;
    use approx::assert_abs_diff_eq;

    fn grid(n: usize, dt: f64) -> Vec<f64> {
        (0..n).map(|i| i as f64 * dt).collect()
    }

    #[test]
    fn pure_cosine() {
        let t = grid(400, 0.1);
        let v: Vec<f64> = t.iter().map(|t| (2.0 * t).cos()).collect();
        let s = ObservableSeries::scalar("v", Provenance::QuadratureOracle, t, v).unwrap();
        let fit = zb_fit(&s).unwrap();
        assert!((fit.frequency.unwrap() - 2.0).abs() < 0.02);
        assert!(fit.drift.abs() < 0.01);
    }

    #[test]
    fn constant_has_no_oscillation() {
        let t = grid(64, 0.2);
        let fit = zb_fit_values(&t, &vec![0.3; 64]).unwrap();
        assert_eq!(fit.amplitude, 0.0);
        assert_eq!(fit.frequency, None);
        assert_abs_diff_eq!(fit.drift, 0.3, epsilon = 1e-15);
    }

    #[test]
    fn damped_oscillation_with_offset() {
        let t = grid(600, 0.05);
        let v: Vec<f64> = t.iter().map(|t| 0.02 + (-t / 5.0).exp() * (2.1 * t).cos()).collect();
        let fit = zb_fit_values(&t, &v).unwrap();
        assert!((fit.frequency.unwrap() - 2.1).abs() < 0.05);
        assert_abs_diff_eq!(fit.drift, 0.02, epsilon = 2e-3);
        assert!(fit.envelope.windows(2).all(|w| w[1] <= w[0]));
        let t10 = fit.time_to_fraction(0.1).unwrap();
        assert!((t10 - 5.0 * 10f64.ln()).abs() < 1.0, "{t10}");
    }

    #[test]
    fn sampling_errors() {
        assert!(matches!(zb_fit_values(&grid(8, 0.1), &[0.0; 8]), Err(Error::Undersampled(_))));
        assert!(matches!(zb_fit_values(&grid(32, 0.5), &[0.0; 32]), Err(Error::Undersampled(_))));
        let mut t = grid(32, 0.1);
        t[5] += 0.03;
        assert!(matches!(zb_fit_values(&t, &[0.0; 32]), Err(Error::Undersampled(_))));
    }
}
