//! Points of the configuration space.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{PlanError, Result};

type Coords = SmallVec<[f64; 3]>;

/// A configuration `z` in `d`-dimensional Euclidean space.
///
/// Coordinates are stored inline for `d <= 3`, which covers every shipped
/// scenario; higher dimensions spill to the heap.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConfigPoint(Coords);

impl ConfigPoint {
    pub fn new(coords: impl IntoIterator<Item = f64>) -> Self {
        ConfigPoint(coords.into_iter().collect())
    }

    /// Like [`ConfigPoint::new`] but rejects non-finite coordinates and
    /// fewer than two dimensions.
    pub fn try_new(coords: impl IntoIterator<Item = f64>) -> Result<Self> {
        let p = Self::new(coords);
        if p.dim() < 2 {
            return Err(PlanError::InvalidArgument(format!(
                "a configuration needs at least 2 coordinates, got {}",
                p.dim()
            )));
        }
        if !p.is_finite() {
            return Err(PlanError::InvalidArgument(format!(
                "non-finite coordinate in {p:?}"
            )));
        }
        Ok(p)
    }

    pub fn zeros(dim: usize) -> Self {
        ConfigPoint(SmallVec::from_elem(0.0, dim))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    #[inline]
    pub fn dist_sq(&self, other: &ConfigPoint) -> f64 {
        dist_sq(&self.0, &other.0)
    }

    #[inline]
    pub fn dist(&self, other: &ConfigPoint) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `self + t * (other - self)`.
    pub fn lerp(&self, other: &ConfigPoint, t: f64) -> ConfigPoint {
        ConfigPoint(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        )
    }

    /// `self + s * v`.
    pub fn add_scaled(&self, v: &ConfigPoint, s: f64) -> ConfigPoint {
        ConfigPoint(
            self.0
                .iter()
                .zip(v.0.iter())
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &ConfigPoint) -> ConfigPoint {
        ConfigPoint(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> ConfigPoint {
        ConfigPoint(self.0.iter().map(|a| a * s).collect())
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(PlanError::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }
}

#[inline]
pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl Index<usize> for ConfigPoint {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Debug for ConfigPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl From<Vec<f64>> for ConfigPoint {
    fn from(v: Vec<f64>) -> Self {
        ConfigPoint::new(v)
    }
}

impl<const N: usize> From<[f64; N]> for ConfigPoint {
    fn from(v: [f64; N]) -> Self {
        ConfigPoint::new(v)
    }
}

/// Euclidean length of a polyline.
pub fn path_length(path: &[ConfigPoint]) -> f64 {
    path.windows(2).map(|w| w[0].dist(&w[1])).sum()
}
