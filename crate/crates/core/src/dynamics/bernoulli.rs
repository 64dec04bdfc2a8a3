use std::sync::Arc;

use super::ActionTable;
use crate::algebra::FiniteGroup;
use crate::spaces::{FiniteProbSpace, Partition};
use crate::{Error, Result};

/// Default cap on the number of configurations `a^{|G|}`.
pub const BERNOULLI_ATOM_CAP: u64 = 1 << 20;

/// The shift of `G` on `A^G` with uniform product measure.
#[derive(Clone, Debug)]
pub struct BernoulliShift {
    pub space: Arc<FiniteProbSpace>,
    pub action: ActionTable,
    /// `x ↦ x(e)`.
    pub coordinate: Partition,
    pub alphabet: usize,
}

/// Configurations are encoded in base `a`, digit `h` being `x(h)`; the action
/// is `(g·x)(h) = x(g⁻¹h)`.
pub fn bernoulli_shift(group: Arc<FiniteGroup>, alphabet: usize, cap: u64) -> Result<BernoulliShift> {
    if alphabet == 0 {
        return Err(Error::invalid("alphabet must be non-empty"));
    }
    let order = group.order();
    let atoms = (alphabet as u128).checked_pow(order as u32).unwrap_or(u128::MAX);
    if atoms > cap as u128 {
        return Err(Error::budget(
            format!("Bernoulli configurations {alphabet}^{order}"),
            atoms,
            cap,
        ));
    }
    let atoms = atoms as usize;
    let space = FiniteProbSpace::uniform(atoms)?;
    let digits = |mut x: usize| -> Vec<usize> {
        (0..order)
            .map(|_| {
                let d = x % alphabet;
                x /= alphabet;
                d
            })
            .collect()
    };
    let encode = |d: &[usize]| d.iter().rev().fold(0usize, |acc, &v| acc * alphabet + v);
    let mut flat = vec![0u32; order * atoms];
    for x in 0..atoms {
        let dx = digits(x);
        for g in 0..order {
            let ginv = group.inv(g);
            let moved: Vec<usize> = (0..order).map(|h| dx[group.mul(ginv, h)]).collect();
            flat[g * atoms + x] = encode(&moved) as u32;
        }
    }
    let e = group.identity();
    let labels: Vec<usize> = (0..atoms).map(|x| digits(x)[e]).collect();
    let coordinate = Partition::new(space.clone(), &labels)?;
    let action = ActionTable::from_flat_unchecked(group, space.clone(), flat);
    Ok(BernoulliShift {
        space,
        action,
        coordinate,
        alphabet,
    })
}
