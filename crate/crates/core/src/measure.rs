//! Discrete probability measures on R^n.
//!
//! A [`DiscreteMeasure`] is a finite weighted point cloud whose weights sum to
//! one. Points are stored row-major in a flat buffer so that the pairwise
//! loops in the potential and flow code stay allocation free.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Weight sums further than this from one are rejected instead of rescaled.
pub const WEIGHT_SUM_TOL: f64 = 1e-6;

/// A position in R^n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

#[inline]
pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[inline]
pub(crate) fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Weighted point cloud representing a probability measure on R^n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "MeasureFile", try_from = "MeasureFile")]
pub struct DiscreteMeasure {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Builds a measure from explicit points. `weights = None` means uniform.
    pub fn new(dim: usize, points: Vec<Vec<f64>>, weights: Option<Vec<f64>>) -> Result<Self> {
        if let Some(bad) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::InvalidMeasure(format!(
                "point {bad} has length {} but dim is {dim}",
                points[bad].len()
            )));
        }
        let coords = points.into_iter().flatten().collect();
        Self::from_flat(dim, coords, weights)
    }

    /// Uniform weights over the given points.
    pub fn uniform(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(dim, points, None)
    }

    /// Builds a measure from a row-major coordinate buffer.
    pub fn from_flat(dim: usize, coords: Vec<f64>, weights: Option<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMeasure("dimension must be positive".into()));
        }
        if coords.is_empty() {
            return Err(Error::InvalidMeasure("measure needs at least one point".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::InvalidMeasure(format!(
                "coordinate buffer of length {} is not a multiple of dim {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite coordinate".into()));
        }
        let n = coords.len() / dim;
        let weights = match weights {
            None => vec![1.0 / n as f64; n],
            Some(w) => {
                if w.len() != n {
                    return Err(Error::InvalidMeasure(format!(
                        "{} weights for {n} points",
                        w.len()
                    )));
                }
                if let Some(bad) = w.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
                    return Err(Error::InvalidMeasure(format!(
                        "weight {bad} = {} is not positive",
                        w[bad]
                    )));
                }
                let total = w.iter().copied().collect::<CompensatedSum>().value();
                if (total - 1.0).abs() > WEIGHT_SUM_TOL {
                    return Err(Error::InvalidMeasure(format!(
                        "weights sum to {total}, not 1"
                    )));
                }
                w.into_iter().map(|x| x / total).collect()
            }
        };
        Ok(Self { dim, coords, weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// True when every atom carries the same weight (to 1e-12).
    pub fn is_uniform(&self) -> bool {
        let w0 = 1.0 / self.len() as f64;
        self.weights.iter().all(|w| (w - w0).abs() <= 1e-12)
    }

    /// Σ w_i x_i.
    pub fn center_of_mass(&self) -> Point {
        let mut acc = vec![CompensatedSum::new(); self.dim];
        for (x, w) in self.points().zip(&self.weights) {
            for (a, xi) in acc.iter_mut().zip(x) {
                a.add(w * xi);
            }
        }
        Point(acc.iter().map(CompensatedSum::value).collect())
    }

    /// Translate so that the center of mass sits at the origin.
    pub fn centered(&self) -> Self {
        let c = self.center_of_mass();
        let mut out = self.translated(&c.0.iter().map(|v| -v).collect::<Vec<_>>());
        // A second pass removes the residual left by rounding in the first.
        let c2 = out.center_of_mass();
        if c2.norm() > 0.0 {
            out = out.translated(&c2.0.iter().map(|v| -v).collect::<Vec<_>>());
        }
        out
    }

    pub fn translated(&self, shift: &[f64]) -> Self {
        assert_eq!(shift.len(), self.dim, "shift dimension mismatch");
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|x| x.iter().zip(shift).map(|(a, b)| a + b))
            .collect();
        Self { dim: self.dim, coords, weights: self.weights.clone() }
    }

    /// Dilate all positions about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            coords: self.coords.iter().map(|c| c * factor).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Apply a linear map (row-major `dim x dim` matrix) to every point.
    pub fn linear_map(&self, matrix: &DMatrix<f64>) -> Self {
        assert_eq!(matrix.nrows(), self.dim);
        assert_eq!(matrix.ncols(), self.dim);
        let mut coords = Vec::with_capacity(self.coords.len());
        for x in self.points() {
            for i in 0..self.dim {
                coords.push((0..self.dim).map(|j| matrix[(i, j)] * x[j]).sum());
            }
        }
        Self { dim: self.dim, coords, weights: self.weights.clone() }
    }

    /// Σ w_i x_i x_iᵀ.
    pub fn second_moment_matrix(&self) -> DMatrix<f64> {
        let n = self.dim;
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self
                    .points()
                    .zip(&self.weights)
                    .map(|(x, w)| w * x[i] * x[j])
                    .collect::<CompensatedSum>()
                    .value();
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        out
    }

    /// Largest pairwise distance between atoms; zero for a single atom.
    pub fn support_diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                best = best.max(dist(self.point(i), self.point(j)));
            }
        }
        best
    }

    /// Largest distance from the center of mass to an atom.
    pub fn support_radius(&self) -> f64 {
        let c = self.center_of_mass();
        self.points().map(|x| dist(x, &c.0)).fold(0.0, f64::max)
    }

    /// The mixture (1 - t) self + t other, as a union of atoms.
    pub fn mixture(&self, other: &Self, t: f64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::InvalidMeasure("mixture of measures with different dims".into()));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("mixture parameter {t} outside [0, 1]")));
        }
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        for (m, s) in [(self, 1.0 - t), (other, t)] {
            if s == 0.0 {
                continue;
            }
            for (x, w) in m.points().zip(m.weights()) {
                coords.extend_from_slice(x);
                weights.push(w * s);
            }
        }
        Self::from_flat(self.dim, coords, Some(weights))
    }

    pub fn to_file_format(&self) -> MeasureFile {
        MeasureFile {
            dim: self.dim,
            points: self.points().map(<[f64]>::to_vec).collect(),
            weights: Some(self.weights.clone()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file_format())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: MeasureFile = serde_json::from_str(s)?;
        f.try_into()
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// On-disk JSON layout: `{"dim": n, "points": [[...], ...], "weights": [...]}`.
/// Omitting `weights` means uniform.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureFile {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl From<DiscreteMeasure> for MeasureFile {
    fn from(m: DiscreteMeasure) -> Self {
        m.to_file_format()
    }
}

impl TryFrom<MeasureFile> for DiscreteMeasure {
    type Error = Error;

    fn try_from(f: MeasureFile) -> Result<Self> {
        DiscreteMeasure::new(f.dim, f.points, f.weights)
    }
}

/// ρ = plus − minus, a signed measure of total mass zero.
#[derive(Clone, Debug)]
pub struct SignedMeasure {
    pub plus: DiscreteMeasure,
    pub minus: DiscreteMeasure,
}

impl SignedMeasure {
    pub fn new(plus: DiscreteMeasure, minus: DiscreteMeasure) -> Result<Self> {
        if plus.dim() != minus.dim() {
            return Err(Error::InvalidMeasure(format!(
                "signed measure parts have dims {} and {}",
                plus.dim(),
                minus.dim()
            )));
        }
        Ok(Self { plus, minus })
    }

    pub fn dim(&self) -> usize {
        self.plus.dim()
    }

    /// All atoms with signed weights: plus first, then minus.
    pub fn signed_atoms(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.plus
            .points()
            .zip(self.plus.weights().iter().copied())
            .chain(self.minus.points().zip(self.minus.weights().iter().map(|w| -w)))
    }

    pub fn total_mass(&self) -> f64 {
        self.signed_atoms().map(|(_, w)| w).collect::<CompensatedSum>().value()
    }

    pub fn first_moment(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|k| {
                self.signed_atoms()
                    .map(|(x, w)| w * x[k])
                    .collect::<CompensatedSum>()
                    .value()
            })
            .collect()
    }
}
