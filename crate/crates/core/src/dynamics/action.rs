use std::sync::Arc;

use rand::Rng;

use crate::algebra::FiniteGroup;
use crate::spaces::{FiniteProbSpace, MASS_TOLERANCE};
use crate::util::seeded_rng;
use crate::{Error, Result};

/// Groups up to this order get an exhaustive homomorphism check.
pub const HOMOMORPHISM_FULL_CHECK: usize = 1_000;

const SAMPLED_PAIRS: usize = 2_000;

#[derive(Clone, Debug)]
enum Kind {
    /// `perms[g * n + x] = g·x`
    Explicit(Vec<u32>),
    /// The group acting on its own elements by left multiplication.
    LeftRegular,
}

/// A measure-preserving action of a finite group on the atoms of a space,
/// with `apply(g·h, x) = apply(g, apply(h, x))`.
#[derive(Clone, Debug)]
pub struct ActionTable {
    group: Arc<FiniteGroup>,
    space: Arc<FiniteProbSpace>,
    kind: Kind,
}

impl ActionTable {
    /// Validates permutations, identity, the homomorphism law (exhaustive up
    /// to [`HOMOMORPHISM_FULL_CHECK`] elements, sampled above) and invariance
    /// of the measure.
    pub fn from_perms(
        group: Arc<FiniteGroup>,
        space: Arc<FiniteProbSpace>,
        perms: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = space.len();
        if perms.len() != group.order() {
            return Err(Error::invalid("one permutation per group element is required"));
        }
        let mut flat = Vec::with_capacity(group.order() * n);
        for (g, p) in perms.iter().enumerate() {
            let mut hit = vec![false; n];
            if p.len() != n {
                return Err(Error::invalid(format!("permutation of {g} has the wrong length")));
            }
            for &x in p {
                if x >= n || hit[x] {
                    return Err(Error::invalid(format!("element {g} does not act by a permutation")));
                }
                hit[x] = true;
            }
            flat.extend(p.iter().map(|&x| x as u32));
        }
        let table = ActionTable {
            group,
            space,
            kind: Kind::Explicit(flat),
        };
        table.validate()?;
        Ok(table)
    }

    /// Left translation of `G` on itself, with the uniform measure.
    pub fn left_regular(group: Arc<FiniteGroup>) -> Result<Self> {
        let space = FiniteProbSpace::uniform(group.order())?;
        Ok(ActionTable {
            group,
            space,
            kind: Kind::LeftRegular,
        })
    }

    pub(crate) fn from_flat_unchecked(
        group: Arc<FiniteGroup>,
        space: Arc<FiniteProbSpace>,
        flat: Vec<u32>,
    ) -> Self {
        ActionTable {
            group,
            space,
            kind: Kind::Explicit(flat),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        let n = self.space.len();
        let e = g.identity();
        if (0..n).any(|x| self.apply(e, x) != x) {
            return Err(Error::invalid("identity does not act trivially"));
        }
        let check = |a: usize, b: usize| -> Result<()> {
            let ab = g.mul(a, b);
            if (0..n).any(|x| self.apply(ab, x) != self.apply(a, self.apply(b, x))) {
                return Err(Error::invalid(format!("action is not a homomorphism at ({a}, {b})")));
            }
            Ok(())
        };
        if g.order() <= HOMOMORPHISM_FULL_CHECK {
            for a in g.elements() {
                for b in g.elements() {
                    check(a, b)?;
                }
            }
        } else {
            let mut rng = seeded_rng(0x5eed);
            for _ in 0..SAMPLED_PAIRS {
                check(rng.gen_range(0..g.order()), rng.gen_range(0..g.order()))?;
            }
        }
        let exact = self.space.exact_masses();
        for a in g.elements() {
            for x in 0..n {
                let y = self.apply(a, x);
                let same = match exact {
                    Some(m) => m[x] == m[y],
                    None => (self.space.mass(x) - self.space.mass(y)).abs() <= MASS_TOLERANCE,
                };
                if !same {
                    return Err(Error::invalid(format!("element {a} does not preserve the measure")));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn space(&self) -> &Arc<FiniteProbSpace> {
        &self.space
    }

    /// `g·x`.
    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        match &self.kind {
            Kind::Explicit(t) => t[g * self.space.len() + x] as usize,
            Kind::LeftRegular => self.group.mul(g, x),
        }
    }

    /// The permutation `x ↦ g·x`.
    pub fn perm(&self, g: usize) -> Vec<usize> {
        (0..self.space.len()).map(|x| self.apply(g, x)).collect()
    }
}

/// A finite list of windows `F_1, F_2, …` with optional disjoint blocks
/// `F_n = ∪_l P_n^l`.
#[derive(Clone, Debug)]
pub struct FolnerFamily {
    group: Arc<FiniteGroup>,
    sets: Vec<Vec<usize>>,
    blocks: Option<Vec<Vec<Vec<usize>>>>,
}

impl FolnerFamily {
    pub fn new(group: Arc<FiniteGroup>, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut clean = Vec::with_capacity(sets.len());
        for (i, mut set) in sets.into_iter().enumerate() {
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(Error::invalid(format!("window F_{} is empty", i + 1)));
            }
            if set.iter().any(|&g| g >= group.order()) {
                return Err(Error::invalid(format!("window F_{} leaves the group", i + 1)));
            }
            clean.push(set);
        }
        Ok(FolnerFamily {
            group,
            sets: clean,
            blocks: None,
        })
    }

    /// Windows made of the first `sizes[n]` elements in index order.
    pub fn prefixes(group: Arc<FiniteGroup>, sizes: &[usize]) -> Result<Self> {
        let sets = sizes.iter().map(|&s| (0..s.min(group.order())).collect()).collect();
        Self::new(group, sets)
    }

    /// Attaches blocks; each `blocks[n]` must partition `F_n`.
    pub fn with_blocks(mut self, blocks: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if blocks.len() != self.sets.len() {
            return Err(Error::invalid("one block list per window is required"));
        }
        for (n, (set, parts)) in self.sets.iter().zip(&blocks).enumerate() {
            let mut all: Vec<usize> = parts.iter().flatten().copied().collect();
            let total = all.len();
            all.sort_unstable();
            all.dedup();
            if all.len() != total || all != *set || parts.iter().any(|p| p.is_empty()) {
                return Err(Error::invalid(format!(
                    "blocks of F_{} are not a partition of the window",
                    n + 1
                )));
            }
        }
        self.blocks = Some(blocks);
        Ok(self)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `F_n`, 1-based.
    pub fn window(&self, n: usize) -> Result<&[usize]> {
        n.checked_sub(1)
            .and_then(|i| self.sets.get(i))
            .map(Vec::as_slice)
            .ok_or_else(|| Error::invalid(format!("n = {n} is outside the horizon 1..={}", self.len())))
    }

    /// Blocks of `F_n` (the window itself when no blocks are attached).
    pub fn blocks(&self, n: usize) -> Result<Vec<&[usize]>> {
        let window = self.window(n)?;
        Ok(match &self.blocks {
            Some(b) => b[n - 1].iter().map(Vec::as_slice).collect(),
            None => vec![window],
        })
    }
}
