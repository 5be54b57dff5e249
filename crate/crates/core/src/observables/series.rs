//! Time series of expectation values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spinor::Axis;

/// Where a series came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    GridMoment,
    QuadratureOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeriesValues {
    Scalar(Vec<f64>),
    Vector(Vec<[f64; 3]>),
}

impl SeriesValues {
    pub fn len(&self) -> usize {
        match self {
            SeriesValues::Scalar(v) => v.len(),
            SeriesValues::Vector(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub values: SeriesValues,
    pub label: String,
    pub provenance: Provenance,
}

impl ObservableSeries {
    pub fn scalar(label: impl Into<String>, provenance: Provenance, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let s = ObservableSeries {
            times,
            values: SeriesValues::Scalar(values),
            label: label.into(),
            provenance,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn vector(
        label: impl Into<String>,
        provenance: Provenance,
        times: Vec<f64>,
        values: Vec<[f64; 3]>,
    ) -> Result<Self> {
        let s = ObservableSeries {
            times,
            values: SeriesValues::Vector(values),
            label: label.into(),
            provenance,
        };
        s.validate()?;
        Ok(s)
    }

    /// Velocity series additionally need every component in [−1, 1] (a little slack for
    /// quadrature rounding).
    pub fn velocity(provenance: Provenance, times: Vec<f64>, values: Vec<[f64; 3]>) -> Result<Self> {
        if let Some(v) = values.iter().flatten().find(|v| v.abs() > 1.0 + 1e-9) {
            return Err(Error::InvalidInput(format!("velocity component {v} exceeds c")));
        }
        Self::vector("velocity", provenance, times, values)
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.values.len() {
            return Err(Error::InvalidInput(format!(
                "{} times but {} values",
                self.times.len(),
                self.values.len()
            )));
        }
        if self.times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("series times must be strictly increasing".into()));
        }
        let finite = match &self.values {
            SeriesValues::Scalar(v) => v.iter().all(|x| x.is_finite()),
            SeriesValues::Vector(v) => v.iter().flatten().all(|x| x.is_finite()),
        };
        if !finite || self.times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidInput("series contains non-finite entries".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// One Cartesian component of a vector series (a scalar series is returned as is).
    pub fn component(&self, axis: Axis) -> ObservableSeries {
        let values = match &self.values {
            SeriesValues::Scalar(v) => v.clone(),
            SeriesValues::Vector(v) => v.iter().map(|x| x[axis.index()]).collect(),
        };
        ObservableSeries {
            times: self.times.clone(),
            values: SeriesValues::Scalar(values),
            label: format!("{}_{}", self.label, axis),
            provenance: self.provenance,
        }
    }

    pub fn scalar_values(&self) -> Option<&[f64]> {
        match &self.values {
            SeriesValues::Scalar(v) => Some(v),
            SeriesValues::Vector(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ObservableSeries::scalar("a", Provenance::GridMoment, vec![0.0, 1.0], vec![1.0, 2.0]).is_ok());
        assert!(ObservableSeries::scalar("a", Provenance::GridMoment, vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(ObservableSeries::scalar("a", Provenance::GridMoment, vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
        assert!(ObservableSeries::scalar("a", Provenance::GridMoment, vec![0.0], vec![1.0, 2.0]).is_err());
        assert!(ObservableSeries::velocity(Provenance::QuadratureOracle, vec![0.0], vec![[0.0, 0.0, 1.2]]).is_err());
        let v = ObservableSeries::velocity(Provenance::QuadratureOracle, vec![0.0, 1.0], vec![[0.1, 0.2, 0.3]; 2]).unwrap();
        assert_eq!(v.component(Axis::Y).scalar_values().unwrap(), &[0.2, 0.2]);
    }
}
