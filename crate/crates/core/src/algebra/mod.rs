//! Finite fields, finite groups and `SL(2, F_q)`.

mod field;
mod group;
mod sl2;

pub use field::{is_prime, FieldElement, FieldTable, FieldTower, FIELD_TABLE_CAP};
pub use group::{FiniteGroup, GroupLaw, IntegerLattice, TripleProduct, CAYLEY_TABLE_CAP};
pub use sl2::{sl2_enumerate, sl2_inclusion, Mat2, SL2_ENUMERATION_CAP};

/// `SL(2, F_q)` for a prime power `q = p^{2^k}`, together with its tower.
pub fn sl2_for_order(q: u64, cap: u64) -> crate::Result<(FieldTower, FiniteGroup)> {
    let (p, level) = tower_coordinates(q)
        .ok_or_else(|| crate::Error::invalid(format!("{q} is not p^(2^k) for an odd prime p")))?;
    let tower = FieldTower::new(p, level)?;
    let group = sl2_enumerate(&tower, level, cap)?;
    Ok((tower, group))
}

/// Writes `q = p^{2^k}` with `p` an odd prime, if possible.
pub fn tower_coordinates(q: u64) -> Option<(u64, usize)> {
    let mut root = q;
    let mut level = 0;
    loop {
        if is_prime(root) && root != 2 {
            return Some((root, level));
        }
        let s = (root as f64).sqrt().round() as u64;
        if s < 2 || s * s != root {
            return None;
        }
        root = s;
        level += 1;
    }
}
