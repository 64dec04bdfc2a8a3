//! Finite groups on indexed element sets, plus the integer lattices used as
//! infinite test groups for colorings.

use std::collections::{HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use super::sl2::MatrixLaw;
use crate::{Error, Result};

/// Groups whose multiplication table is cached instead of recomputed.
pub const CAYLEY_TABLE_CAP: usize = 10_000;

/// Minimal group interface shared by finite groups and `Z^d`.
pub trait GroupLaw {
    type Elem: Copy + Eq + Hash + Ord + Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inverse(&self, a: Self::Elem) -> Self::Elem;
}

/// The additive lattice `Z^D`.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntegerLattice<const D: usize>;

impl<const D: usize> GroupLaw for IntegerLattice<D> {
    type Elem = [i64; D];

    fn identity(&self) -> [i64; D] {
        [0; D]
    }

    fn op(&self, a: [i64; D], b: [i64; D]) -> [i64; D] {
        std::array::from_fn(|i| a[i] + b[i])
    }

    fn inverse(&self, a: [i64; D]) -> [i64; D] {
        a.map(|x| -x)
    }
}

#[derive(Debug)]
pub(crate) enum Law {
    Table(Vec<u32>),
    Cyclic,
    Product(Arc<FiniteGroup>, Arc<FiniteGroup>),
    Matrix(Arc<MatrixLaw>),
}

/// A finite group on the element indices `0..order`.
#[derive(Debug)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    identity: usize,
    inverses: Vec<u32>,
    law: Law,
    matrices: Option<Arc<MatrixLaw>>,
}

impl FiniteGroup {
    /// Assembles a group from a multiplication oracle, caching the Cayley
    /// table when the order is at most [`CAYLEY_TABLE_CAP`].
    pub(crate) fn from_law(label: String, order: usize, identity: usize, law: Law) -> Self {
        let mut group = FiniteGroup {
            label,
            order,
            identity,
            inverses: Vec::new(),
            matrices: match &law {
                Law::Matrix(m) => Some(m.clone()),
                _ => None,
            },
            law,
        };
        if order <= CAYLEY_TABLE_CAP && !matches!(group.law, Law::Table(_)) {
            let table: Vec<u32> = (0..order)
                .flat_map(|a| (0..order).map(move |b| (a, b)))
                .map(|(a, b)| group.mul(a, b) as u32)
                .collect();
            group.law = Law::Table(table);
        }
        group.inverses = (0..order).map(|a| group.find_inverse(a) as u32).collect();
        group
    }

    /// Builds a group from an explicit `order × order` table, verifying the
    /// identity, inverses and (exhaustively) associativity.
    pub fn from_table(label: impl Into<String>, order: usize, table: Vec<u32>) -> Result<Self> {
        if table.len() != order * order || table.iter().any(|&x| x as usize >= order) {
            return Err(Error::invalid("Cayley table has the wrong shape"));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e * order + g] as usize == g && table[g * order + e] as usize == g))
            .ok_or_else(|| Error::invalid("table has no identity"))?;
        for a in 0..order {
            if !(0..order).any(|b| table[a * order + b] as usize == identity) {
                return Err(Error::invalid(format!("element {a} has no inverse")));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b] as usize;
                for c in 0..order {
                    let bc = table[b * order + c] as usize;
                    if table[ab * order + c] != table[a * order + bc] {
                        return Err(Error::invalid("table is not associative"));
                    }
                }
            }
        }
        Ok(Self::from_law(label.into(), order, identity, Law::Table(table)))
    }

    /// `Z/n` with element `i` standing for `i mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cyclic group of order 0"));
        }
        Ok(Self::from_law(format!("Z/{n}"), n, 0, Law::Cyclic))
    }

    /// Direct product; element `(a, b)` has index `a * |H| + b`.
    pub fn product(left: Arc<FiniteGroup>, right: Arc<FiniteGroup>) -> Result<Self> {
        let order = left
            .order
            .checked_mul(right.order)
            .ok_or_else(|| Error::invalid("product order overflows"))?;
        let identity = left.identity * right.order + right.identity;
        let label = format!("{} x {}", left.label, right.label);
        Ok(Self::from_law(label, order, identity, Law::Product(left, right)))
    }

    pub(crate) fn matrix(label: String, order: usize, identity: usize, law: Arc<MatrixLaw>) -> Self {
        Self::from_law(label, order, identity, Law::Matrix(law))
    }

    pub(crate) fn matrix_law(&self) -> Option<&Arc<MatrixLaw>> {
        self.matrices.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// True when products are served from a cached Cayley table.
    pub fn has_table(&self) -> bool {
        matches!(self.law, Law::Table(_))
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.law {
            Law::Table(t) => t[a * self.order + b] as usize,
            Law::Cyclic => (a + b) % self.order,
            Law::Product(g, h) => {
                let (a0, a1) = (a / h.order, a % h.order);
                let (b0, b1) = (b / h.order, b % h.order);
                g.mul(a0, b0) * h.order + h.mul(a1, b1)
            }
            Law::Matrix(m) => m.mul(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    fn find_inverse(&self, a: usize) -> usize {
        match &self.law {
            Law::Cyclic => (self.order - a) % self.order,
            Law::Product(g, h) => g.inv(a / h.order) * h.order + h.inv(a % h.order),
            Law::Matrix(m) => m.inv(a),
            Law::Table(_) => (0..self.order)
                .find(|&b| self.mul(a, b) == self.identity)
                .expect("validated group has inverses"),
        }
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Least `m ≥ 1` with `g^m = e`.
    pub fn element_order(&self, g: usize) -> u64 {
        let mut m = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            m += 1;
        }
        m
    }

    /// Checks closure under products and inverses, returning a witness pair
    /// `(a, b)` with `a·b` (or `(a, a)` with `a⁻¹`) outside the subset.
    pub fn check_subgroup(&self, subset: &[usize]) -> Result<()> {
        if subset.is_empty() {
            return Err(Error::invalid("empty subset is not a subgroup"));
        }
        let mut member = vec![false; self.order];
        for &x in subset {
            member[x] = true;
        }
        for &a in subset {
            if !member[self.inv(a)] {
                return Err(Error::NotSubgroup(a, a));
            }
            for &b in subset {
                if !member[self.mul(a, b)] {
                    return Err(Error::NotSubgroup(a, b));
                }
            }
        }
        Ok(())
    }

    /// One representative per right coset `H·g`, namely the least element
    /// index of each coset, listed in increasing order (the first one is the
    /// identity's coset).
    pub fn coset_representatives(&self, subgroup: &[usize]) -> Result<Vec<usize>> {
        self.check_subgroup(subgroup)?;
        let mut seen = vec![false; self.order];
        let mut reps = Vec::with_capacity(self.order / subgroup.len());
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &h in subgroup {
                seen[self.mul(h, g)] = true;
            }
        }
        Ok(reps)
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut queue = VecDeque::from([self.identity]);
        seen[self.identity] = true;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// `{a·b : a ∈ A, b ∈ B}`, sorted and deduplicated.
    pub fn product_set(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        for &x in a {
            for &y in b {
                seen[self.mul(x, y)] = true;
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// `(|A|, |A²|, |A³|, ⟨A⟩ = G)` by exhaustive product-set expansion.
    pub fn triple_product_size(&self, subset: &[usize]) -> TripleProduct {
        let a: Vec<usize> = subset.iter().copied().collect::<HashSet<_>>().into_iter().collect();
        let a2 = self.product_set(&a, &a);
        let a3 = self.product_set(&a2, &a);
        TripleProduct {
            size: a.len(),
            square: a2.len(),
            cube: a3.len(),
            generates: self.generated_subgroup(&a).len() == self.order,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripleProduct {
    pub size: usize,
    pub square: usize,
    pub cube: usize,
    pub generates: bool,
}

impl GroupLaw for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn op(&self, a: usize, b: usize) -> usize {
        self.mul(a, b)
    }

    fn inverse(&self, a: usize) -> usize {
        self.inv(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn s3_table() -> Vec<u32> {
        // permutations of {0,1,2} in lexicographic order, composed as (a∘b)(i) = a(b(i))
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
        let mut t = Vec::new();
        for a in &perms {
            for b in &perms {
                t.push(idx([a[b[0]], a[b[1]], a[b[2]]]));
            }
        }
        t
    }

    #[test]
    fn table_group_laws() {
        let g = FiniteGroup::from_table("S3", 6, s3_table()).unwrap();
        assert_eq!(g.identity(), 0);
        for x in g.elements() {
            assert_eq!(g.mul(g.identity(), x), x);
            assert_eq!(g.mul(x, g.inv(x)), g.identity());
        }
        assert_eq!(g.element_order(1), 2);
        assert_eq!(g.element_order(3), 3);
        let bad = vec![0u32; 4];
        assert!(FiniteGroup::from_table("bad", 2, bad).is_err());
    }

    #[test]
    fn cyclic_and_product() {
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let p = FiniteGroup::product(z4.clone(), z2).unwrap();
        assert_eq!(p.order(), 8);
        let mut rng = crate::util::seeded_rng(3);
        for _ in 0..200 {
            let (a, b, c) = (rng.gen_range(0..8), rng.gen_range(0..8), rng.gen_range(0..8));
            assert_eq!(p.mul(p.mul(a, b), c), p.mul(a, p.mul(b, c)));
        }
        assert_eq!(z4.element_order(1), 4);
        assert_eq!(z4.element_order(2), 2);
        assert_eq!(z4.element_order(0), 1);
        assert!(FiniteGroup::cyclic(0).is_err());
    }

    #[test]
    fn cosets_and_subgroups() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(z6.coset_representatives(&[0, 2, 4]).unwrap(), vec![0, 1]);
        assert_eq!(z6.coset_representatives(&[0]).unwrap(), (0..6).collect::<Vec<_>>());
        assert_eq!(z6.coset_representatives(&(0..6).collect::<Vec<_>>()).unwrap(), vec![0]);
        match z6.coset_representatives(&[0, 1]) {
            Err(Error::NotSubgroup(a, b)) => assert!(![0, 1].contains(&z6.mul(a, b)) || a == b),
            other => panic!("expected witness, got {other:?}"),
        }
        assert_eq!(z6.generated_subgroup(&[2]), vec![0, 2, 4]);
    }

    #[test]
    fn triple_product_trivial_cases() {
        let z5 = FiniteGroup::cyclic(5).unwrap();
        let t = z5.triple_product_size(&[0]);
        assert_eq!((t.size, t.square, t.cube, t.generates), (1, 1, 1, false));
        let all: Vec<usize> = (0..5).collect();
        let t = z5.triple_product_size(&all);
        assert_eq!((t.size, t.square, t.cube, t.generates), (5, 5, 5, true));
        let t = z5.triple_product_size(&[0, 1]);
        assert_eq!((t.size, t.square, t.cube), (2, 3, 4));
    }

    #[test]
    fn lattice_law() {
        let z2 = IntegerLattice::<2>;
        assert_eq!(z2.op([1, 2], z2.inverse([1, 2])), z2.identity());
    }
}
