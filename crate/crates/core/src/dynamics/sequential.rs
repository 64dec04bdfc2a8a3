use std::collections::HashMap;

use super::{ActionTable, FolnerFamily};
use crate::spaces::{same_space, Partition};
use crate::{Error, Result};

/// `⋁_{g ∈ P} g⁻¹ξ`, where `g⁻¹ξ` labels `x` by `ξ(g·x)`.
pub fn refined_orbit_partition(action: &ActionTable, subset: &[usize], xi: &Partition) -> Result<Partition> {
    if subset.is_empty() {
        return Err(Error::invalid("refinement over an empty subset"));
    }
    if !same_space(action.space(), xi.space()) {
        return Err(Error::Mismatch("probability spaces"));
    }
    let n = xi.space().len();
    let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let labels: Vec<u32> = (0..n)
        .map(|x| {
            let key: Vec<u32> = subset.iter().map(|&g| xi.label(action.apply(g, x))).collect();
            let next = ids.len() as u32;
            *ids.entry(key).or_insert(next)
        })
        .collect();
    Partition::new(xi.space().clone(), &labels)
}

/// `min_l H(⋁_{g ∈ P^l} g⁻¹ξ) / |P^l|`, in bits per group element.
pub fn seq_entropy_functional(action: &ActionTable, xi: &Partition, blocks: &[&[usize]]) -> Result<f64> {
    Ok(block_entropies(action, xi, blocks)?
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}

fn block_entropies(action: &ActionTable, xi: &Partition, blocks: &[&[usize]]) -> Result<Vec<f64>> {
    if blocks.is_empty() {
        return Err(Error::invalid("at least one block is required"));
    }
    blocks
        .iter()
        .map(|b| Ok(refined_orbit_partition(action, b, xi)?.shannon_entropy() / b.len() as f64))
        .collect()
}

/// Functional value at one `n`, with the normalized entropy of every block.
#[derive(Clone, Debug, PartialEq)]
pub struct SequentialRow {
    pub n: usize,
    pub value: f64,
    pub per_block: Vec<f64>,
}

/// Finite-horizon table of the sequential entropy functional along the
/// blocks of `family` (a window without blocks counts as one block).
pub fn sequential_entropy_profile(
    action: &ActionTable,
    xi: &Partition,
    family: &FolnerFamily,
    horizon: usize,
) -> Result<Vec<SequentialRow>> {
    if horizon > family.len() {
        return Err(Error::invalid(format!(
            "horizon {horizon} exceeds the {} windows available",
            family.len()
        )));
    }
    (1..=horizon)
        .map(|n| {
            let per_block = block_entropies(action, xi, &family.blocks(n)?)?;
            let value = per_block.iter().copied().fold(f64::INFINITY, f64::min);
            Ok(SequentialRow { n, value, per_block })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteGroup;
    use crate::spaces::FiniteProbSpace;
    use std::sync::Arc;

    fn identity_action(group_order: usize, atoms: usize) -> ActionTable {
        let g = Arc::new(FiniteGroup::cyclic(group_order).unwrap());
        let s = FiniteProbSpace::uniform(atoms).unwrap();
        ActionTable::from_perms(g, s, vec![(0..atoms).collect(); group_order]).unwrap()
    }

    #[test]
    fn trivial_cases() {
        let a = identity_action(4, 6);
        let xi = Partition::new(a.space().clone(), &[0, 0, 1, 1, 2, 2]).unwrap();
        assert_eq!(refined_orbit_partition(&a, &[0], &xi).unwrap(), xi);
        let triv = Partition::trivial(a.space().clone());
        assert_eq!(refined_orbit_partition(&a, &[0, 1, 2], &triv).unwrap(), triv);
        assert!(refined_orbit_partition(&a, &[], &xi).is_err());
        let h = xi.shannon_entropy();
        assert!((seq_entropy_functional(&a, &xi, &[&[0]]).unwrap() - h).abs() < 1e-12);
        assert_eq!(seq_entropy_functional(&a, &triv, &[&[0, 1]]).unwrap(), 0.0);
    }

    #[test]
    fn identity_action_profile_decays() {
        let a = identity_action(8, 4);
        let xi = Partition::new(a.space().clone(), &[0, 0, 1, 1]).unwrap();
        let fam = FolnerFamily::new(a.group().clone(), vec![vec![0, 1], vec![0, 1, 2, 3], (0..8).collect()])
            .unwrap()
            .with_blocks(vec![
                vec![vec![0], vec![1]],
                vec![vec![0, 1], vec![2, 3]],
                vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]],
            ])
            .unwrap();
        let rows = sequential_entropy_profile(&a, &xi, &fam, 3).unwrap();
        let got: Vec<f64> = rows.iter().map(|r| r.value).collect();
        assert_eq!(got, vec![1.0, 0.5, 0.25]);
        assert!(sequential_entropy_profile(&a, &xi, &fam, 0).unwrap().is_empty());
        assert!(sequential_entropy_profile(&a, &xi, &fam, 4).is_err());
    }
}
