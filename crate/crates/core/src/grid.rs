use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::Layout;

/// Periodic box `[0, ℓ₁) × … × [0, ℓₙ)` sampled at `N₁ × … × Nₙ` nodes,
/// stored row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub shape: Vec<usize>,
    pub lengths: Vec<f64>,
}

impl Grid {
    pub fn new(shape: Vec<usize>, lengths: Vec<f64>) -> Result<Grid> {
        if shape.is_empty() || shape.len() != lengths.len() {
            return Err(Error::GridMismatch(format!(
                "shape {shape:?} and lengths {lengths:?} disagree"
            )));
        }
        if shape.iter().any(|&s| s < 3) {
            return Err(Error::GridMismatch(format!("shape {shape:?} has an axis below 3 nodes")));
        }
        if lengths.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::GridMismatch(format!("box lengths {lengths:?} must be positive")));
        }
        Ok(Grid { shape, lengths })
    }

    /// Cubic grid on the unit box.
    pub fn unit(dim: usize, n: usize) -> Grid {
        Grid::new(vec![n; dim], vec![1.0; dim]).expect("valid unit grid")
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, d: usize) -> f64 {
        self.lengths[d] / self.shape[d] as f64
    }

    pub fn spacings(&self) -> Vec<f64> {
        (0..self.dim()).map(|d| self.spacing(d)).collect()
    }

    pub fn max_spacing(&self) -> f64 {
        (0..self.dim()).map(|d| self.spacing(d)).fold(0.0, f64::max)
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|d| self.spacing(d)).product()
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dim()];
        for d in (0..self.dim().saturating_sub(1)).rev() {
            s[d] = s[d + 1] * self.shape[d + 1];
        }
        s
    }

    pub fn coords(&self, idx: usize) -> Vec<usize> {
        let mut c = vec![0; self.dim()];
        let mut r = idx;
        for d in (0..self.dim()).rev() {
            c[d] = r % self.shape[d];
            r /= self.shape[d];
        }
        c
    }

    pub fn position(&self, idx: usize) -> Vec<f64> {
        self.coords(idx)
            .iter()
            .enumerate()
            .map(|(d, &i)| i as f64 * self.spacing(d))
            .collect()
    }

    /// Periodic neighbour of `idx` displaced by `delta` nodes along axis `d`.
    pub fn shift(&self, idx: usize, d: usize, delta: isize) -> usize {
        let strides = self.strides();
        self.shift_with(&strides, idx, d, delta)
    }

    #[inline]
    pub(crate) fn shift_with(&self, strides: &[usize], idx: usize, d: usize, delta: isize) -> usize {
        let n = self.shape[d] as isize;
        let c = ((idx / strides[d]) % self.shape[d]) as isize;
        let nc = (c + delta).rem_euclid(n) as usize;
        idx - (c as usize) * strides[d] + nc * strides[d]
    }

    pub fn sample(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        (0..self.len()).map(|i| f(&self.position(i))).collect()
    }

    pub fn layout(&self) -> Layout {
        Layout::Grid {
            shape: self.shape.clone(),
            periodic: vec![true; self.dim()],
        }
    }
}
