//! `⟨g_0⟩`-transversal partitions and left-invariant semimetrics on finite
//! groups acting on themselves.

use std::sync::Arc;

use rand::Rng;

use super::tower::TOWER_METRIC_CAP;
use crate::algebra::FiniteGroup;
use crate::dynamics::ActionTable;
use crate::spaces::{Partition, Semimetric};
use crate::util::seeded_rng;
use crate::{Error, Result};

/// Partition into `p` cells meeting every `⟨g_0⟩`-orbit exactly once: the
/// atom `g_0^j · b` lies in cell `j`, where `b` is the least atom of its orbit.
/// Hence `ξ(g_0 x) = ξ(x) + 1 mod p`.
pub fn transversal_partition(action: &ActionTable, g0: usize, p: u64) -> Result<Partition> {
    let group = action.group();
    if g0 >= group.order() {
        return Err(Error::invalid(format!("{g0} is not a group element")));
    }
    let order = group.element_order(g0);
    if order != p {
        return Err(Error::invalid(format!("g_0 has order {order}, expected {p}")));
    }
    let n = action.space().len();
    let p = p as usize;
    let mut labels = vec![usize::MAX; n];
    for base in 0..n {
        if labels[base] != usize::MAX {
            continue;
        }
        let mut x = base;
        for j in 0..p {
            if labels[x] != usize::MAX {
                return Err(Error::invalid(format!("⟨g_0⟩ does not act freely at atom {base}")));
            }
            labels[x] = j;
            x = action.apply(g0, x);
        }
        debug_assert_eq!(x, base);
    }
    Partition::new(action.space().clone(), &labels)
}

fn check_left_regular(action: &ActionTable) -> Result<&Arc<FiniteGroup>> {
    let group = action.group();
    let n = action.space().len();
    if n != group.order() {
        return Err(Error::invalid("expected the group acting on itself"));
    }
    if n > TOWER_METRIC_CAP {
        return Err(Error::budget("invariant semimetric atoms", n as u128, TOWER_METRIC_CAP as u128));
    }
    for g in group.elements() {
        if (0..n).any(|x| action.apply(g, x) != group.mul(g, x)) {
            return Err(Error::invalid("expected left translation of the group on itself"));
        }
    }
    Ok(group)
}

/// Path-metric closure of `d(x, y) = root(x⁻¹y)` on the group acting on itself
/// by left translation. `root` may be `∞` off a generating set; the closure
/// must be finite. The result is left-invariant by construction.
pub fn left_invariant_semimetric(action: &ActionTable, root: &[f64]) -> Result<Semimetric> {
    let group = check_left_regular(action)?;
    let n = group.order();
    if root.len() != n {
        return Err(Error::invalid("root needs one value per group element"));
    }
    let e = group.identity();
    if root[e] != 0.0 {
        return Err(Error::invalid("root(e) must be 0"));
    }
    for g in group.elements() {
        let r = root[g];
        if r.is_nan() || r < 0.0 {
            return Err(Error::invalid(format!("root({g}) = {r} is not non-negative")));
        }
        if r != root[group.inv(g)] {
            return Err(Error::invalid(format!("root is not symmetric at {g}")));
        }
    }
    // dense Dijkstra from e: dist(u → v) = root(u⁻¹v)
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[e] = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !done[v])
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
            .expect("unsettled vertex");
        if dist[u].is_infinite() {
            return Err(Error::invalid("root does not connect the group (closure is infinite)"));
        }
        done[u] = true;
        let ui = group.inv(u);
        for v in 0..n {
            if !done[v] {
                let w = dist[u] + root[group.mul(ui, v)];
                if w < dist[v] {
                    dist[v] = w;
                }
            }
        }
    }
    let inverses: Vec<usize> = group.elements().map(|x| group.inv(x)).collect();
    let mut data = vec![0.0; n * n];
    for x in 0..n {
        for y in 0..n {
            data[x * n + y] = dist[group.mul(inverses[x], y)];
        }
    }
    Semimetric::new(action.space().clone(), data)
}

/// Root functions for [`left_invariant_semimetric`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantRecipe {
    /// `root = 1` off the identity.
    Discrete,
    /// Word length over the elementary matrices `[[1, t], [0, 1]]`,
    /// `[[1, 0], [t, 1]]` and their inverses, `t` running over the additive
    /// basis `1, ω, ω², …` of the field.
    Word,
    Zero,
    /// `root(g) = root(g⁻¹)` drawn uniformly from `[1/2, 1]`.
    Random { seed: u64 },
}

impl InvariantRecipe {
    pub fn name(&self) -> &'static str {
        match self {
            InvariantRecipe::Discrete => "discrete",
            InvariantRecipe::Word => "word",
            InvariantRecipe::Zero => "zero",
            InvariantRecipe::Random { .. } => "random",
        }
    }

    pub fn parse(name: &str, seed: u64) -> Result<Self> {
        Ok(match name {
            "discrete" => InvariantRecipe::Discrete,
            "word" => InvariantRecipe::Word,
            "zero" => InvariantRecipe::Zero,
            "random" => InvariantRecipe::Random { seed },
            _ => return Err(Error::invalid(format!("unknown semimetric recipe {name:?}"))),
        })
    }

    pub fn root(&self, group: &FiniteGroup) -> Result<Vec<f64>> {
        let e = group.identity();
        let n = group.order();
        Ok(match *self {
            InvariantRecipe::Discrete => (0..n).map(|g| if g == e { 0.0 } else { 1.0 }).collect(),
            InvariantRecipe::Zero => vec![0.0; n],
            InvariantRecipe::Word => {
                let mut root = vec![f64::INFINITY; n];
                root[e] = 0.0;
                for s in elementary_generators(group)? {
                    root[s] = 1.0;
                    root[group.inv(s)] = 1.0;
                }
                root
            }
            InvariantRecipe::Random { seed } => {
                let mut rng = seeded_rng(seed);
                let mut root = vec![0.0; n];
                for g in group.elements() {
                    let gi = group.inv(g);
                    if g != e && g <= gi {
                        let r = rng.gen_range(0.5..=1.0);
                        root[g] = r;
                        root[gi] = r;
                    }
                }
                root
            }
        })
    }
}

/// Elementary generators of an `SL(2, F_q)` group (see [`InvariantRecipe::Word`]).
pub fn elementary_generators(group: &FiniteGroup) -> Result<Vec<usize>> {
    let q = group
        .field_order()
        .ok_or_else(|| Error::invalid("word metrics need a matrix group"))?;
    let p = crate::algebra::tower_coordinates(q)
        .ok_or_else(|| Error::invalid("unsupported field order"))?
        .0;
    let mut gens = Vec::new();
    let mut t = 1u64;
    while t < q {
        let t32 = t as u32;
        for entries in [[1, t32, 0, 1], [1, 0, t32, 1]] {
            gens.push(group.index_of_entries(entries).expect("elementary matrix"));
        }
        t *= p;
    }
    Ok(gens)
}
