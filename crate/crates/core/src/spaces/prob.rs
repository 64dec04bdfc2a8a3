use std::sync::Arc;

use num_rational::Ratio;

use crate::{Error, Result};

/// Tolerance on the total mass, and the margin used for every strict
/// "mass < ε" comparison.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A finite probability space on atoms `0..n`.
///
/// Masses are floats; spaces built from rationals (including every uniform
/// space) also keep the exact values.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteProbSpace {
    masses: Vec<f64>,
    exact: Option<Vec<Ratio<u64>>>,
}

impl FiniteProbSpace {
    pub fn uniform(n: usize) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::invalid("a probability space needs at least one atom"));
        }
        Self::from_ratios(vec![Ratio::new(1, n as u64); n])
    }

    pub fn from_masses(masses: Vec<f64>) -> Result<Arc<Self>> {
        if masses.is_empty() {
            return Err(Error::invalid("a probability space needs at least one atom"));
        }
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::invalid("masses must be finite and non-negative"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::invalid(format!("masses sum to {total}, not 1")));
        }
        Ok(Arc::new(FiniteProbSpace { masses, exact: None }))
    }

    pub fn from_ratios(ratios: Vec<Ratio<u64>>) -> Result<Arc<Self>> {
        if ratios.is_empty() {
            return Err(Error::invalid("a probability space needs at least one atom"));
        }
        let total = ratios.iter().fold(Ratio::from_integer(0u64), |acc, r| acc + r);
        if total != Ratio::from_integer(1) {
            return Err(Error::invalid(format!("masses sum to {total}, not 1")));
        }
        let masses = ratios.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect();
        Ok(Arc::new(FiniteProbSpace {
            masses,
            exact: Some(ratios),
        }))
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    #[inline]
    pub fn mass(&self, atom: usize) -> f64 {
        self.masses[atom]
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn exact_masses(&self) -> Option<&[Ratio<u64>]> {
        self.exact.as_deref()
    }

    pub fn mass_of(&self, atoms: impl IntoIterator<Item = usize>) -> f64 {
        atoms.into_iter().map(|a| self.masses[a]).sum()
    }

    pub fn is_uniform(&self) -> bool {
        match &self.exact {
            Some(r) => r.iter().all(|x| *x == r[0]),
            None => self.masses.iter().all(|&m| (m - self.masses[0]).abs() <= MASS_TOLERANCE),
        }
    }

    pub fn strictly_positive(&self) -> bool {
        self.masses.iter().all(|&m| m > 0.0)
    }
}

/// `mass < eps` with the comparison pushed away from float ties.
#[inline]
pub(crate) fn mass_below(mass: f64, eps: f64) -> bool {
    mass < eps - MASS_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(FiniteProbSpace::uniform(0).is_err());
        assert!(FiniteProbSpace::from_masses(vec![0.5, 0.4]).is_err());
        assert!(FiniteProbSpace::from_masses(vec![1.5, -0.5]).is_err());
        assert!(FiniteProbSpace::from_ratios(vec![Ratio::new(1, 3); 2]).is_err());
        let s = FiniteProbSpace::from_masses(vec![0.5, 0.25, 0.25]).unwrap();
        assert_eq!(s.len(), 3);
        assert!(!s.is_uniform());
        assert!(FiniteProbSpace::uniform(7).unwrap().is_uniform());
    }

    #[test]
    fn strict_mass_comparison() {
        // three tenths summed in floats overshoot 0.3
        let m = 0.1 + 0.1 + 0.1;
        assert!(!mass_below(m, 0.3));
        assert!(!mass_below(0.1, 0.1));
        assert!(mass_below(0.2, 0.25));
    }
}
