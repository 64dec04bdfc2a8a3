//! Finite fields `F_{p^{2^k}}` as an iterated quadratic tower over `F_p`.
//!
//! Level `k+1` is `level_k[x]/(x² − n_k)` where `n_k` is the first non-square
//! of level `k` in canonical order. An element of level `k` is a vector of
//! `2^k` coefficients in `[0, p)`; its lower half is the level-`k−1` part and
//! its upper half multiplies the adjoined root. The canonical index of an
//! element is `Σ c_i p^i`, so a subfield occupies the first indices of every
//! larger level and embedding is index preserving.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::{Error, Result};

static NEXT_TOWER_ID: AtomicU64 = AtomicU64::new(1);

/// Trial-division primality test; the primes here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    tower: u64,
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn level(&self) -> usize {
        self.coeffs.len().trailing_zeros() as usize
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

#[derive(Debug)]
pub struct FieldTower {
    id: u64,
    p: u32,
    /// `orders[k] = p^{2^k}`.
    orders: Vec<u64>,
    /// `nonsquares[k]` lives in level `k` and is the square of the root adjoined at level `k+1`.
    nonsquares: Vec<Vec<u32>>,
}

impl FieldTower {
    /// Builds the tower `F_p ⊂ … ⊂ F_{p^{2^depth}}`.
    pub fn new(p: u64, depth: usize) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if p > u32::MAX as u64 / 2 {
            return Err(Error::invalid(format!("prime {p} too large for u32 coefficients")));
        }
        let mut orders = Vec::with_capacity(depth + 1);
        for k in 0..=depth {
            let exp = 1u32
                .checked_shl(k as u32)
                .ok_or_else(|| Error::invalid("tower depth too large"))?;
            // indices and Euler exponents must stay in u64
            let q = p
                .checked_pow(exp)
                .filter(|q| *q < (1u64 << 62))
                .ok_or_else(|| Error::budget(format!("field order {p}^{exp}"), u128::MAX, 1u128 << 62))?;
            orders.push(q);
        }
        let mut tower = FieldTower {
            id: NEXT_TOWER_ID.fetch_add(1, Ordering::Relaxed),
            p: p as u32,
            orders,
            nonsquares: Vec::with_capacity(depth),
        };
        for k in 0..depth {
            let q = tower.orders[k];
            let n = (1..q)
                .map(|i| tower.element(k, i))
                .find(|x| !tower.is_square(x))
                .expect("every odd-order finite field has non-squares");
            tower.nonsquares.push(n.coeffs);
        }
        Ok(tower)
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn depth(&self) -> usize {
        self.orders.len() - 1
    }

    /// Order of the field at `level`.
    pub fn order(&self, level: usize) -> u64 {
        self.orders[level]
    }

    /// The non-square of level `level` whose square root generates level `level + 1`.
    pub fn nonsquare(&self, level: usize) -> FieldElement {
        FieldElement {
            tower: self.id,
            coeffs: self.nonsquares[level].clone(),
        }
    }

    /// Element of `level` with canonical index `index`.
    pub fn element(&self, level: usize, mut index: u64) -> FieldElement {
        assert!(index < self.orders[level], "index out of range");
        let p = self.p as u64;
        let coeffs = (0..1usize << level)
            .map(|_| {
                let c = (index % p) as u32;
                index /= p;
                c
            })
            .collect();
        FieldElement { tower: self.id, coeffs }
    }

    pub fn index_of(&self, x: &FieldElement) -> u64 {
        x.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn zero(&self, level: usize) -> FieldElement {
        self.element(level, 0)
    }

    pub fn one(&self, level: usize) -> FieldElement {
        self.element(level, 1)
    }

    fn check(&self, x: &FieldElement) {
        assert_eq!(x.tower, self.id, "element from a different tower");
    }

    fn check_pair(&self, a: &FieldElement, b: &FieldElement) {
        self.check(a);
        self.check(b);
        assert_eq!(a.coeffs.len(), b.coeffs.len(), "elements at different levels");
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check_pair(a, b);
        FieldElement {
            tower: self.id,
            coeffs: add_raw(self.p, &a.coeffs, &b.coeffs),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check_pair(a, b);
        FieldElement {
            tower: self.id,
            coeffs: sub_raw(self.p, &a.coeffs, &b.coeffs),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.check(a);
        FieldElement {
            tower: self.id,
            coeffs: a.coeffs.iter().map(|&c| (self.p - c) % self.p).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check_pair(a, b);
        FieldElement {
            tower: self.id,
            coeffs: self.mul_raw(&a.coeffs, &b.coeffs),
        }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        self.check(a);
        let mut base = a.coeffs.clone();
        let mut acc = self.one(a.level()).coeffs;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            base = self.mul_raw(&base, &base);
            e >>= 1;
        }
        FieldElement {
            tower: self.id,
            coeffs: acc,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        self.check(a);
        if a.is_zero() {
            return None;
        }
        Some(FieldElement {
            tower: self.id,
            coeffs: self.inv_raw(&a.coeffs),
        })
    }

    /// Euler's criterion: `x` is a square iff `x = 0` or `x^{(q−1)/2} = 1`.
    pub fn is_square(&self, x: &FieldElement) -> bool {
        if x.is_zero() {
            return true;
        }
        let q = self.orders[x.level()];
        self.pow(x, (q - 1) / 2) == self.one(x.level())
    }

    /// Zero-padding inclusion of `x` into level `target`.
    pub fn embed(&self, x: &FieldElement, target: usize) -> Result<FieldElement> {
        if x.tower != self.id {
            return Err(Error::Mismatch("field towers"));
        }
        if target < x.level() || target > self.depth() {
            return Err(Error::invalid(format!(
                "cannot embed level {} into level {target}",
                x.level()
            )));
        }
        let mut coeffs = x.coeffs.clone();
        coeffs.resize(1 << target, 0);
        Ok(FieldElement { tower: self.id, coeffs })
    }

    fn mul_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p;
        if a.len() == 1 {
            return vec![((a[0] as u64 * b[0] as u64) % p as u64) as u32];
        }
        let h = a.len() / 2;
        let (a0, a1) = a.split_at(h);
        let (b0, b1) = b.split_at(h);
        let lo = self.mul_raw(a0, b0);
        let hi = self.mul_raw(a1, b1);
        let mid = self.mul_raw(&add_raw(p, a0, a1), &add_raw(p, b0, b1));
        let cross = sub_raw(p, &sub_raw(p, &mid, &lo), &hi);
        let level = h.trailing_zeros() as usize;
        let twisted = self.mul_raw(&hi, &self.nonsquares[level]);
        let mut out = add_raw(p, &lo, &twisted);
        out.extend(cross);
        out
    }

    fn inv_raw(&self, a: &[u32]) -> Vec<u32> {
        let p = self.p;
        if a.len() == 1 {
            // Fermat
            let mut acc = 1u64;
            let mut base = a[0] as u64;
            let mut e = p as u64 - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % p as u64;
                }
                base = base * base % p as u64;
                e >>= 1;
            }
            return vec![acc as u32];
        }
        // (a0 + a1 x)^{-1} = (a0 − a1 x) / (a0² − a1² n)
        let h = a.len() / 2;
        let (a0, a1) = a.split_at(h);
        let level = h.trailing_zeros() as usize;
        let a1sq_n = self.mul_raw(&self.mul_raw(a1, a1), &self.nonsquares[level]);
        let norm = sub_raw(p, &self.mul_raw(a0, a0), &a1sq_n);
        let ninv = self.inv_raw(&norm);
        let mut out = self.mul_raw(a0, &ninv);
        let neg_a1: Vec<u32> = a1.iter().map(|&c| (p - c) % p).collect();
        out.extend(self.mul_raw(&neg_a1, &ninv));
        out
    }
}

fn add_raw(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| (x + y) % p).collect()
}

fn sub_raw(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| (x + p - y) % p).collect()
}

/// Precomputed arithmetic tables for one level of a tower, indexed by
/// canonical element index. Only built for small fields.
#[derive(Clone, Debug)]
pub struct FieldTable {
    p: u32,
    q: u32,
    level: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// Largest field order for which [`FieldTable`] is built.
pub const FIELD_TABLE_CAP: u64 = 1024;

impl FieldTable {
    pub fn new(tower: &FieldTower, level: usize) -> Result<Self> {
        let q = tower.order(level);
        if q > FIELD_TABLE_CAP {
            return Err(Error::budget("field table order", q, FIELD_TABLE_CAP));
        }
        let elems: Vec<FieldElement> = (0..q).map(|i| tower.element(level, i)).collect();
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                add[i * qs + j] = tower.index_of(&tower.add(a, b)) as u32;
                mul[i * qs + j] = tower.index_of(&tower.mul(a, b)) as u32;
            }
        }
        let neg = elems.iter().map(|a| tower.index_of(&tower.neg(a)) as u32).collect();
        let inv = elems
            .iter()
            .map(|a| tower.inv(a).map_or(0, |x| tower.index_of(&x) as u32))
            .collect();
        Ok(FieldTable {
            p: tower.characteristic() as u32,
            q: q as u32,
            level,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn level(&self) -> usize {
        self.level
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    /// Inverse of a non-zero element.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares(tower: &FieldTower, level: usize) -> Vec<u64> {
        let mut s: Vec<u64> = (0..tower.order(level))
            .map(|i| {
                let x = tower.element(level, i);
                tower.index_of(&tower.mul(&x, &x))
            })
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    #[test]
    fn rejects_non_odd_primes() {
        assert!(matches!(FieldTower::new(2, 1), Err(Error::NotOddPrime(2))));
        assert!(matches!(FieldTower::new(9, 0), Err(Error::NotOddPrime(9))));
        assert!(matches!(FieldTower::new(1, 0), Err(Error::NotOddPrime(1))));
    }

    #[test]
    fn prime_field_f3() {
        let t = FieldTower::new(3, 0).unwrap();
        assert_eq!(t.order(0), 3);
        let elems: Vec<u64> = (0..3).map(|i| t.index_of(&t.element(0, i))).collect();
        assert_eq!(elems, vec![0, 1, 2]);
    }

    #[test]
    fn f9_built_on_two() {
        let t = FieldTower::new(3, 1).unwrap();
        // squares of F_3 by brute force
        assert_eq!(squares(&t, 0), vec![0, 1]);
        assert_eq!(t.index_of(&t.nonsquare(0)), 2);
        assert_eq!(t.order(1), 9);
    }

    #[test]
    fn f25_built_on_two() {
        let t = FieldTower::new(5, 1).unwrap();
        assert_eq!(squares(&t, 0), vec![0, 1, 4]);
        assert_eq!(t.index_of(&t.nonsquare(0)), 2);
    }

    #[test]
    fn adjoined_root_squares_to_nonsquare() {
        let t = FieldTower::new(3, 2).unwrap();
        for level in 0..2 {
            let mut root = t.zero(level + 1).coeffs().to_vec();
            root[1 << level] = 1;
            let x = FieldElement { tower: t.id, coeffs: root };
            let sq = t.mul(&x, &x);
            assert_eq!(sq, t.embed(&t.nonsquare(level), level + 1).unwrap());
        }
    }

    #[test]
    fn levels_are_fields() {
        for (p, depth) in [(3, 2), (5, 1), (7, 1)] {
            let t = FieldTower::new(p, depth).unwrap();
            for level in 0..=depth {
                let q = t.order(level);
                let one = t.one(level);
                for i in 1..q {
                    let x = t.element(level, i);
                    assert_eq!(t.mul(&x, &t.inv(&x).unwrap()), one);
                    // x^{q-1} = 1
                    assert_eq!(t.pow(&x, q - 1), one);
                }
                // exactly half the units are squares
                assert_eq!(squares(&t, level).len() as u64, q.div_ceil(2));
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let t = FieldTower::new(3, 1).unwrap();
        let one = t.embed(&t.one(0), 1).unwrap();
        assert_eq!(one, t.one(1));
        let two = t.element(0, 2);
        assert_eq!(t.embed(&two, 0).unwrap(), two);
        let two9 = t.embed(&two, 1).unwrap();
        assert_eq!(t.mul(&two9, &two9), t.one(1));
        assert_eq!(t.index_of(&two9), 2);
    }

    #[test]
    fn embedding_rejects_other_tower() {
        let a = FieldTower::new(3, 1).unwrap();
        let b = FieldTower::new(3, 1).unwrap();
        assert!(matches!(b.embed(&a.one(0), 1), Err(Error::Mismatch(_))));
        assert!(a.embed(&a.one(1), 0).is_err());
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let t = FieldTower::new(3, 2).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let (x, y) = (t.element(1, i), t.element(1, j));
                let (ex, ey) = (t.embed(&x, 2).unwrap(), t.embed(&y, 2).unwrap());
                assert_eq!(t.embed(&t.add(&x, &y), 2).unwrap(), t.add(&ex, &ey));
                assert_eq!(t.embed(&t.mul(&x, &y), 2).unwrap(), t.mul(&ex, &ey));
            }
        }
        // functoriality
        let x = t.element(0, 2);
        let two_step = t.embed(&t.embed(&x, 1).unwrap(), 2).unwrap();
        assert_eq!(two_step, t.embed(&x, 2).unwrap());
    }

    #[test]
    fn table_matches_tower() {
        let t = FieldTower::new(3, 2).unwrap();
        let tab = FieldTable::new(&t, 2).unwrap();
        assert_eq!(tab.order(), 81);
        for a in [0u32, 1, 5, 17, 80] {
            for b in [0u32, 2, 9, 44, 79] {
                let (x, y) = (t.element(2, a as u64), t.element(2, b as u64));
                assert_eq!(tab.mul(a, b) as u64, t.index_of(&t.mul(&x, &y)));
                assert_eq!(tab.sub(a, b) as u64, t.index_of(&t.sub(&x, &y)));
            }
        }
        assert!(FieldTable::new(&FieldTower::new(3, 3).unwrap(), 3).is_err());
    }
}
