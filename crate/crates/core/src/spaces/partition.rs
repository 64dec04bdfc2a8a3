use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Ratio;

use super::prob::FiniteProbSpace;
use crate::{Error, Result};

/// A partition of the atoms of a space, labels canonicalized to first
/// occurrence order so that cells are `0..cells` with every label in use.
#[derive(Clone, Debug)]
pub struct Partition {
    space: Arc<FiniteProbSpace>,
    labels: Vec<u32>,
    cells: usize,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.labels == other.labels
    }
}

pub(crate) fn same_space(a: &Arc<FiniteProbSpace>, b: &Arc<FiniteProbSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Partition {
    /// Builds a partition from arbitrary per-atom labels.
    pub fn new<L: Eq + std::hash::Hash + Copy>(space: Arc<FiniteProbSpace>, labels: &[L]) -> Result<Self> {
        if labels.len() != space.len() {
            return Err(Error::invalid(format!(
                "{} labels for a space of {} atoms",
                labels.len(),
                space.len()
            )));
        }
        let mut ids = HashMap::new();
        let labels: Vec<u32> = labels
            .iter()
            .map(|l| {
                let next = ids.len() as u32;
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        Ok(Partition {
            cells: ids.len(),
            space,
            labels,
        })
    }

    pub fn trivial(space: Arc<FiniteProbSpace>) -> Self {
        let n = space.len();
        Partition {
            space,
            labels: vec![0; n],
            cells: 1,
        }
    }

    pub fn singletons(space: Arc<FiniteProbSpace>) -> Self {
        let n = space.len();
        Partition {
            space,
            labels: (0..n as u32).collect(),
            cells: n,
        }
    }

    pub fn space(&self) -> &Arc<FiniteProbSpace> {
        &self.space
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, atom: usize) -> u32 {
        self.labels[atom]
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    pub fn cell_masses(&self) -> Vec<f64> {
        let mut masses = vec![0.0; self.cells];
        for (atom, &l) in self.labels.iter().enumerate() {
            masses[l as usize] += self.space.mass(atom);
        }
        masses
    }

    /// Cell masses in exact arithmetic, for spaces with rational masses.
    pub fn exact_cell_masses(&self) -> Option<Vec<Ratio<u64>>> {
        let exact = self.space.exact_masses()?;
        let mut masses = vec![Ratio::from_integer(0); self.cells];
        for (atom, &l) in self.labels.iter().enumerate() {
            masses[l as usize] += exact[atom];
        }
        Some(masses)
    }

    pub fn cells(&self) -> Vec<Vec<usize>> {
        let mut cells = vec![Vec::new(); self.cells];
        for (atom, &l) in self.labels.iter().enumerate() {
            cells[l as usize].push(atom);
        }
        cells
    }

    /// Shannon entropy in bits, `0·log 0 = 0`.
    pub fn shannon_entropy(&self) -> f64 {
        let masses = match self.exact_cell_masses() {
            Some(exact) => exact
                .iter()
                .map(|r| *r.numer() as f64 / *r.denom() as f64)
                .collect(),
            None => self.cell_masses(),
        };
        -masses
            .iter()
            .filter(|&&m| m > 0.0)
            .map(|&m| m * m.log2())
            .sum::<f64>()
    }

    /// True when every atom is alone in its cell.
    pub fn is_discrete(&self) -> bool {
        self.cells == self.labels.len()
    }
}

/// Common refinement: atoms share a cell iff they share a cell in every input.
pub fn refine(parts: &[&Partition]) -> Result<Partition> {
    let first = parts
        .first()
        .ok_or_else(|| Error::invalid("refine needs at least one partition"))?;
    if parts.iter().any(|p| !same_space(&p.space, &first.space)) {
        return Err(Error::Mismatch("probability spaces"));
    }
    let n = first.space.len();
    let keys: Vec<Vec<u32>> = (0..n)
        .map(|a| parts.iter().map(|p| p.labels[a]).collect())
        .collect();
    let mut ids: HashMap<&[u32], u32> = HashMap::new();
    let labels: Vec<u32> = keys
        .iter()
        .map(|k| {
            let next = ids.len() as u32;
            *ids.entry(k.as_slice()).or_insert(next)
        })
        .collect();
    Ok(Partition {
        cells: ids.len(),
        space: first.space.clone(),
        labels,
    })
}
