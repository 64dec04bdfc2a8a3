use std::sync::Arc;

use super::partition::{same_space, Partition};
use super::prob::{FiniteProbSpace, MASS_TOLERANCE};
use crate::{Error, Result};

/// Tolerance for the triangle inequality and symmetry checks, and the
/// margin used for every strict "distance < ε" comparison.
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// A symmetric, zero-diagonal real kernel on `n` atoms (row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    n: usize,
    data: Vec<f64>,
}

impl Kernel {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::invalid(format!("kernel needs {} entries, got {}", n * n, data.len())));
        }
        for x in 0..n {
            if data[x * n + x] != 0.0 {
                return Err(Error::invalid(format!("kernel diagonal at {x} is non-zero")));
            }
            for y in 0..x {
                let (a, b) = (data[x * n + y], data[y * n + x]);
                if !a.is_finite() || (a - b).abs() > METRIC_TOLERANCE {
                    return Err(Error::invalid(format!("kernel is not symmetric at ({x}, {y})")));
                }
            }
        }
        Ok(Kernel { n, data })
    }

    pub fn zero(n: usize) -> Self {
        Kernel { n, data: vec![0.0; n * n] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.n + y]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn scaled(&self, c: f64) -> Kernel {
        Kernel {
            n: self.n,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Kernel) -> Result<Kernel> {
        if self.n != other.n {
            return Err(Error::Mismatch("kernel sizes"));
        }
        Ok(Kernel {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// A semimetric on the atoms of a finite probability space.
#[derive(Clone, Debug)]
pub struct Semimetric {
    space: Arc<FiniteProbSpace>,
    n: usize,
    data: Vec<f64>,
}

impl Semimetric {
    /// Validates symmetry, zero diagonal, non-negativity and every triangle
    /// inequality (to [`METRIC_TOLERANCE`]).
    pub fn new(space: Arc<FiniteProbSpace>, data: Vec<f64>) -> Result<Self> {
        let n = space.len();
        let kernel = Kernel::new(n, data)?;
        let rho = Semimetric {
            space,
            n,
            data: kernel.data,
        };
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a matrix that is a semimetric by construction.
    pub(crate) fn from_raw(space: Arc<FiniteProbSpace>, data: Vec<f64>) -> Self {
        let n = space.len();
        debug_assert_eq!(data.len(), n * n);
        Semimetric { space, n, data }
    }

    pub fn from_fn(space: Arc<FiniteProbSpace>, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let n = space.len();
        let data = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::new(space, data)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for x in 0..n {
            if self.get(x, x) != 0.0 {
                return Err(Error::invalid(format!("ρ({x},{x}) ≠ 0")));
            }
            for y in 0..n {
                let d = self.get(x, y);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::invalid(format!("ρ({x},{y}) = {d} is not a distance")));
                }
                if (d - self.get(y, x)).abs() > METRIC_TOLERANCE {
                    return Err(Error::invalid(format!("ρ is not symmetric at ({x},{y})")));
                }
            }
        }
        for x in 0..n {
            let rx = self.row(x);
            for y in 0..n {
                let dxy = rx[y];
                let ry = self.row(y);
                for z in 0..n {
                    if rx[z] > dxy + ry[z] + METRIC_TOLERANCE {
                        return Err(Error::invalid(format!("triangle inequality fails at ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn zero(space: Arc<FiniteProbSpace>) -> Self {
        let n = space.len();
        Self::from_raw(space, vec![0.0; n * n])
    }

    /// `ρ(x, y) = 1` for `x ≠ y`.
    pub fn discrete(space: Arc<FiniteProbSpace>) -> Self {
        let n = space.len();
        let data = (0..n * n).map(|i| if i / n == i % n { 0.0 } else { 1.0 }).collect();
        Self::from_raw(space, data)
    }

    /// Cut semimetric: 0 inside a cell, 1 across cells.
    pub fn cut(xi: &Partition) -> Self {
        let n = xi.space().len();
        let data = (0..n * n)
            .map(|i| if xi.label(i / n) == xi.label(i % n) { 0.0 } else { 1.0 })
            .collect();
        Self::from_raw(xi.space().clone(), data)
    }

    /// Pointwise convex combination `Σ wᵢ ρᵢ`.
    pub fn combine(weights: &[f64], metrics: &[&Semimetric]) -> Result<Self> {
        if weights.len() != metrics.len() || metrics.is_empty() {
            return Err(Error::invalid("combine needs one positive weight per metric"));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::invalid("combination weights must be positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::invalid(format!("combination weights sum to {total}, not 1")));
        }
        let space = metrics[0].space.clone();
        if metrics.iter().any(|m| !same_space(&m.space, &space)) {
            return Err(Error::Mismatch("probability spaces"));
        }
        let mut data = vec![0.0; space.len() * space.len()];
        for (w, m) in weights.iter().zip(metrics) {
            for (acc, v) in data.iter_mut().zip(&m.data) {
                *acc += w * v;
            }
        }
        Ok(Self::from_raw(space, data))
    }

    /// `Σ_{i ≤ r} 2^{-i} ρ_{ξᵢ}` together with whether the partitions jointly
    /// separate atoms (so that the sum is a metric).
    pub fn dyadic_sum(parts: &[&Partition]) -> Result<(Self, bool)> {
        let first = parts
            .first()
            .ok_or_else(|| Error::invalid("dyadic_sum needs at least one partition"))?;
        let space = first.space().clone();
        if parts.iter().any(|p| !same_space(p.space(), &space)) {
            return Err(Error::Mismatch("probability spaces"));
        }
        let n = space.len();
        let mut data = vec![0.0; n * n];
        let mut weight = 1.0;
        for xi in parts {
            weight *= 0.5;
            for x in 0..n {
                for y in 0..n {
                    if xi.label(x) != xi.label(y) {
                        data[x * n + y] += weight;
                    }
                }
            }
        }
        let separating = (0..n).all(|x| (0..x).all(|y| data[x * n + y] > 0.0));
        Ok((Self::from_raw(space, data), separating))
    }

    pub fn space(&self) -> &Arc<FiniteProbSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.n + y]
    }

    #[inline]
    pub fn row(&self, x: usize) -> &[f64] {
        &self.data[x * self.n..(x + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn kernel(&self) -> Kernel {
        Kernel {
            n: self.n,
            data: self.data.clone(),
        }
    }

    /// `ρ − σ` as a kernel.
    pub fn difference(&self, other: &Semimetric) -> Result<Kernel> {
        if self.n != other.n {
            return Err(Error::Mismatch("probability spaces"));
        }
        Ok(Kernel {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// `Σ_{x,y} μ(x) μ(y) ρ(x, y)`.
    pub fn l1_norm(&self) -> f64 {
        let m = self.space.masses();
        (0..self.n)
            .map(|x| m[x] * self.row(x).iter().zip(m).map(|(d, my)| d * my).sum::<f64>())
            .sum()
    }

    pub fn diameter(&self) -> f64 {
        self.data.iter().fold(0.0, |a, &b| a.max(b))
    }

    /// Diameter of a subset of atoms.
    pub fn diameter_of(&self, atoms: &[usize]) -> f64 {
        let mut d: f64 = 0.0;
        for (i, &x) in atoms.iter().enumerate() {
            for &y in &atoms[..i] {
                d = d.max(self.get(x, y));
            }
        }
        d
    }

    /// `c·ρ` for `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::invalid("scale factor must be finite and non-negative"));
        }
        Ok(Self::from_raw(
            self.space.clone(),
            self.data.iter().map(|v| v * c).collect(),
        ))
    }

    pub fn max_abs_diff(&self, other: &Semimetric) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `ρ ≤ σ` pointwise up to `tol`.
    pub fn le_pointwise(&self, other: &Semimetric, tol: f64) -> bool {
        self.data.iter().zip(&other.data).all(|(a, b)| *a <= b + tol)
    }

    /// Invariant under the atom permutation `perm`: `ρ(perm x, perm y) = ρ(x, y)`.
    pub fn is_invariant_under(&self, perm: &[usize], tol: f64) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| (self.get(perm[x], perm[y]) - self.get(x, y)).abs() <= tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> Arc<FiniteProbSpace> {
        FiniteProbSpace::uniform(n).unwrap()
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let s = space(3);
        assert!(Semimetric::new(s.clone(), vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0]).is_err());
        assert!(Semimetric::new(s.clone(), vec![0.0, 1.0, 1.0, 2.0, 0.0, 1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(Semimetric::new(s.clone(), vec![1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(Semimetric::new(s.clone(), vec![0.0; 4]).is_err());
        assert!(Semimetric::new(s, vec![0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn cut_examples() {
        let s = space(3);
        assert_eq!(Semimetric::cut(&Partition::trivial(s.clone())).diameter(), 0.0);
        let d = Semimetric::cut(&Partition::singletons(s.clone()));
        assert_eq!(d.as_slice(), Semimetric::discrete(s.clone()).as_slice());
        let c = Semimetric::cut(&Partition::new(s, &[0, 0, 1]).unwrap());
        assert_eq!((c.get(0, 1), c.get(0, 2)), (0.0, 1.0));
        c.validate().unwrap();
    }

    #[test]
    fn combine_examples() {
        let s = space(3);
        let a = Semimetric::cut(&Partition::new(s.clone(), &[0, 0, 1]).unwrap());
        let b = Semimetric::cut(&Partition::new(s.clone(), &[0, 1, 0]).unwrap());
        assert_eq!(Semimetric::combine(&[1.0], &[&a]).unwrap().as_slice(), a.as_slice());
        assert_eq!(Semimetric::combine(&[0.5, 0.5], &[&a, &a]).unwrap().as_slice(), a.as_slice());
        let m = Semimetric::combine(&[0.5, 0.5], &[&a, &b]).unwrap();
        assert_eq!((m.get(0, 1), m.get(0, 2), m.get(1, 2)), (0.5, 0.5, 1.0));
        m.validate().unwrap();
        assert!(Semimetric::combine(&[0.5, 0.4], &[&a, &b]).is_err());
        assert!(Semimetric::combine(&[1.5, -0.5], &[&a, &b]).is_err());
    }

    #[test]
    fn dyadic_examples() {
        let s = space(4);
        let a = Partition::new(s.clone(), &[0, 0, 1, 1]).unwrap();
        let b = Partition::new(s.clone(), &[0, 1, 0, 1]).unwrap();
        let (r1, sep1) = Semimetric::dyadic_sum(&[&a]).unwrap();
        assert_eq!(r1.as_slice(), Semimetric::cut(&a).scaled(0.5).unwrap().as_slice());
        assert!(!sep1);
        let (r2, sep2) = Semimetric::dyadic_sum(&[&a, &b]).unwrap();
        assert!(sep2);
        r2.validate().unwrap();
        // geometric tail bound
        let c = Partition::new(s, &[0, 1, 1, 0]).unwrap();
        let (r3, _) = Semimetric::dyadic_sum(&[&a, &b, &c]).unwrap();
        assert!(r1.max_abs_diff(&r3) <= 0.5 + 1e-15);
        assert!(r2.max_abs_diff(&r3) <= 0.25 + 1e-15);
    }

    #[test]
    fn l1_examples() {
        assert_eq!(Semimetric::zero(space(5)).l1_norm(), 0.0);
        for n in 1..8 {
            let d = Semimetric::discrete(space(n));
            assert!((d.l1_norm() - (1.0 - 1.0 / n as f64)).abs() < 1e-12);
        }
        let s = space(4);
        let c = Semimetric::cut(&Partition::new(s, &[0, 0, 1, 1]).unwrap());
        assert!((c.l1_norm() - 0.5).abs() < 1e-12);
    }
}
