//! `SL(2, F_q)` over a level of a [`FieldTower`].

use std::collections::HashMap;
use std::sync::Arc;

use super::field::{FieldElement, FieldTable, FieldTower};
use super::group::FiniteGroup;
use crate::{Error, Result};

/// Default cap on `q(q² − 1)` for enumeration.
pub const SL2_ENUMERATION_CAP: u64 = 1_000_000;

/// A 2×2 matrix `[[a, b], [c, d]]` over one level of a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl Mat2 {
    pub fn det(&self, tower: &FieldTower) -> FieldElement {
        tower.sub(&tower.mul(&self.a, &self.d), &tower.mul(&self.b, &self.c))
    }

    pub fn mul(&self, tower: &FieldTower, rhs: &Mat2) -> Mat2 {
        let dot = |x: &FieldElement, y: &FieldElement, z: &FieldElement, w: &FieldElement| {
            tower.add(&tower.mul(x, y), &tower.mul(z, w))
        };
        Mat2 {
            a: dot(&self.a, &rhs.a, &self.b, &rhs.c),
            b: dot(&self.a, &rhs.b, &self.b, &rhs.d),
            c: dot(&self.c, &rhs.a, &self.d, &rhs.c),
            d: dot(&self.c, &rhs.b, &self.d, &rhs.d),
        }
    }
}

/// Matrix multiplication oracle over canonical field indices.
#[derive(Debug)]
pub(crate) struct MatrixLaw {
    tower_p: u64,
    field: FieldTable,
    entries: Vec<[u32; 4]>,
    lookup: HashMap<[u32; 4], u32>,
}

impl MatrixLaw {
    pub(crate) fn mul(&self, x: usize, y: usize) -> usize {
        let [a, b, c, d] = self.entries[x];
        let [e, f, g, h] = self.entries[y];
        let fl = &self.field;
        let m = [
            fl.add(fl.mul(a, e), fl.mul(b, g)),
            fl.add(fl.mul(a, f), fl.mul(b, h)),
            fl.add(fl.mul(c, e), fl.mul(d, g)),
            fl.add(fl.mul(c, f), fl.mul(d, h)),
        ];
        self.lookup[&m] as usize
    }

    pub(crate) fn inv(&self, x: usize) -> usize {
        let [a, b, c, d] = self.entries[x];
        let fl = &self.field;
        self.lookup[&[d, fl.neg(b), fl.neg(c), a]] as usize
    }
}

/// Enumerates `SL(2, F_q)` for `q` the order of `level`, in lexicographic
/// order of the entry indices `(a, b, c, d)`.
pub fn sl2_enumerate(tower: &FieldTower, level: usize, cap: u64) -> Result<FiniteGroup> {
    if level > tower.depth() {
        return Err(Error::invalid(format!("tower has no level {level}")));
    }
    let q = tower.order(level);
    let size = q as u128 * (q as u128 * q as u128 - 1);
    if size > cap as u128 {
        return Err(Error::budget(format!("|SL(2, F_{q})| = q(q²−1)"), size, cap));
    }
    let field = FieldTable::new(tower, level)?;
    let q = q as u32;
    let one = 1u32;
    let minus_one = field.neg(one);
    let mut entries = Vec::with_capacity(size as usize);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                if a != 0 {
                    // d = (1 + bc) / a
                    let d = field.mul(field.add(one, field.mul(b, c)), field.inv(a));
                    entries.push([a, b, c, d]);
                } else if field.mul(b, c) == minus_one {
                    entries.extend((0..q).map(|d| [a, b, c, d]));
                }
            }
        }
    }
    debug_assert_eq!(entries.len() as u128, size);
    let lookup: HashMap<[u32; 4], u32> = entries
        .iter()
        .enumerate()
        .map(|(i, m)| (*m, i as u32))
        .collect();
    let identity = lookup[&[1, 0, 0, 1]] as usize;
    let order = entries.len();
    let law = Arc::new(MatrixLaw {
        tower_p: tower.characteristic(),
        field,
        entries,
        lookup,
    });
    Ok(FiniteGroup::matrix(format!("SL(2,F_{q})"), order, identity, law))
}

impl FiniteGroup {
    /// Canonical entry indices `(a, b, c, d)` of a matrix group element.
    pub fn matrix_entries(&self, g: usize) -> Option<[u32; 4]> {
        self.matrix_law().map(|m| m.entries[g])
    }

    /// Index of the matrix with the given entry indices, if it is in the group.
    pub fn index_of_entries(&self, entries: [u32; 4]) -> Option<usize> {
        self.matrix_law()?.lookup.get(&entries).map(|&i| i as usize)
    }

    /// The element as a [`Mat2`] over `tower`.
    pub fn to_mat2(&self, tower: &FieldTower, g: usize) -> Option<Mat2> {
        let m = self.matrix_law()?;
        let level = m.field.level();
        let [a, b, c, d] = m.entries[g].map(|x| tower.element(level, x as u64));
        Some(Mat2 { a, b, c, d })
    }

    /// Field order of a matrix group.
    pub fn field_order(&self) -> Option<u64> {
        self.matrix_law().map(|m| m.field.order() as u64)
    }

    /// The unipotent element `[[1, 1], [0, 1]]`.
    pub fn unipotent(&self) -> Option<usize> {
        self.index_of_entries([1, 1, 0, 1])
    }
}

/// Indices in `big` of the elements of `small`, for two `SL(2, ·)` groups over
/// levels of the same tower. Embedding is index preserving on entries.
pub fn sl2_inclusion(small: &FiniteGroup, big: &FiniteGroup) -> Result<Vec<usize>> {
    let (s, b) = match (small.matrix_law(), big.matrix_law()) {
        (Some(s), Some(b)) => (s, b),
        _ => return Err(Error::invalid("sl2_inclusion needs matrix groups")),
    };
    if s.tower_p != b.tower_p || s.field.level() > b.field.level() {
        return Err(Error::Mismatch("field levels"));
    }
    s.entries
        .iter()
        .map(|e| {
            b.lookup
                .get(e)
                .map(|&i| i as usize)
                .ok_or(Error::Mismatch("field towers"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn group(p: u64, depth: usize) -> (FieldTower, FiniteGroup) {
        let t = FieldTower::new(p, depth).unwrap();
        let g = sl2_enumerate(&t, depth, SL2_ENUMERATION_CAP).unwrap();
        (t, g)
    }

    #[test]
    fn orders_match_formula() {
        for (p, depth, order) in [(3, 0, 24), (5, 0, 120), (7, 0, 336), (3, 1, 720)] {
            let (t, g) = group(p, depth);
            let q = t.order(depth) as usize;
            assert_eq!(g.order(), order);
            assert_eq!(g.order(), q * (q * q - 1));
            assert!(q < g.order() && g.order() < q.pow(4));
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_unimodular() {
        let (t, g) = group(3, 1);
        let mut prev = None;
        for x in g.elements() {
            let e = g.matrix_entries(x).unwrap();
            assert!(prev.is_none_or(|p: [u32; 4]| p < e));
            prev = Some(e);
            assert_eq!(g.to_mat2(&t, x).unwrap().det(&t), t.one(1));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let t = FieldTower::new(3, 1).unwrap();
        match sl2_enumerate(&t, 1, 100) {
            Err(Error::BudgetExceeded { size, .. }) => assert_eq!(size, 720),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn group_laws_sampled() {
        let (t, g) = group(5, 0);
        for x in g.elements() {
            assert_eq!(g.mul(g.identity(), x), x);
            assert_eq!(g.mul(x, g.inv(x)), g.identity());
        }
        let mut rng = crate::util::seeded_rng(11);
        for _ in 0..500 {
            let (a, b, c) = (
                rng.gen_range(0..g.order()),
                rng.gen_range(0..g.order()),
                rng.gen_range(0..g.order()),
            );
            assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            let prod = g.to_mat2(&t, a).unwrap().mul(&t, &g.to_mat2(&t, b).unwrap());
            assert_eq!(g.to_mat2(&t, g.mul(a, b)).unwrap(), prod);
        }
    }

    #[test]
    fn unipotent_order_is_characteristic() {
        for (p, depth) in [(3, 0), (3, 1), (5, 0), (7, 0)] {
            let (_, g) = group(p, depth);
            assert_eq!(g.element_order(g.unipotent().unwrap()), p);
            assert_eq!(g.element_order(g.identity()), 1);
        }
    }

    #[test]
    fn sl2_f3_inside_sl2_f9() {
        let t = FieldTower::new(3, 1).unwrap();
        let small = sl2_enumerate(&t, 0, SL2_ENUMERATION_CAP).unwrap();
        let big = sl2_enumerate(&t, 1, SL2_ENUMERATION_CAP).unwrap();
        let inc = sl2_inclusion(&small, &big).unwrap();
        assert_eq!(inc.len(), 24);
        for x in small.elements() {
            for y in small.elements() {
                assert_eq!(inc[small.mul(x, y)], big.mul(inc[x], inc[y]));
            }
        }
        let reps = big.coset_representatives(&inc).unwrap();
        assert_eq!(reps.len(), 30);
        assert_eq!(reps[0], 0);
        // cosets partition the group
        let mut hit = vec![0u32; big.order()];
        for &r in &reps {
            for &h in &inc {
                hit[big.mul(h, r)] += 1;
            }
        }
        assert!(hit.iter().all(|&c| c == 1));
    }

    #[test]
    fn triple_product_random_generating_set() {
        let (_, g) = group(5, 0);
        let g0 = g.unipotent().unwrap();
        let mut rng = crate::util::seeded_rng(5);
        for _ in 0..10 {
            let h = rng.gen_range(0..g.order());
            let t = g.triple_product_size(&[g0, g.inv(g0), h]);
            assert!(t.cube >= t.size);
            assert!(t.cube == 120 || t.cube > t.size);
        }
    }
}
