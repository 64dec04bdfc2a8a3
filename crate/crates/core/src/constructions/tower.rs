//! The compact action of `SL(2, F̄_p)` truncated at a finite depth: atoms are
//! the elements of `G_n = SL(2, F_{q_n})`, `q_n = p^{2^{n-1}}`, with
//! coordinates given by iterated right-coset decomposition.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{sl2_enumerate, sl2_inclusion, FieldTower, FiniteGroup, SL2_ENUMERATION_CAP};
use crate::dynamics::ActionTable;
use crate::spaces::Semimetric;
use crate::util::seeded_rng;
use crate::{Error, Result};

/// Atom budget for building a tower action.
pub const TOWER_ACTION_CAP: usize = SL2_ENUMERATION_CAP as usize;
/// Atom budget for pairwise metrics on a tower.
pub const TOWER_METRIC_CAP: usize = 10_000;

const UNSET: u32 = u32::MAX;

#[derive(Debug)]
pub struct TowerAction {
    p: u64,
    tower: FieldTower,
    /// `G_1 ⊂ … ⊂ G_n`, each enumerated over its own field level.
    groups: Vec<Arc<FiniteGroup>>,
    /// Indices in `G_n` of the elements of each `G_m`.
    inclusions: Vec<Vec<usize>>,
    /// `C_m` as elements of `G_m` (`C_1 = G_1`).
    coset_reps: Vec<Vec<usize>>,
    /// `components[m][x]`: position in `C_{m+1}` of the coordinate of atom `x`.
    components: Vec<Vec<u32>>,
    action: ActionTable,
}

/// `q_n = p^{2^{n-1}}`.
pub fn tower_field_order(p: u64, n: usize) -> Option<u64> {
    let mut q = p;
    for _ in 1..n {
        q = q.checked_mul(q)?;
    }
    Some(q)
}

/// Right cosets `H·c` of a subgroup: the representatives (least elements, in
/// increasing order) and the coset index of every element.
fn right_cosets(group: &FiniteGroup, subgroup: &[usize]) -> Result<(Vec<usize>, Vec<u32>)> {
    let reps = group.coset_representatives(subgroup)?;
    let mut coset = vec![UNSET; group.order()];
    for (j, &c) in reps.iter().enumerate() {
        for &h in subgroup {
            coset[group.mul(h, c)] = j as u32;
        }
    }
    Ok((reps, coset))
}

/// Builds `G_1 ⊂ … ⊂ G_depth` and the component maps on `G_depth`, failing
/// if `|G_depth|` exceeds `cap`.
pub fn sl2_tower_action(p: u64, depth: usize, cap: usize) -> Result<TowerAction> {
    if depth == 0 {
        return Err(Error::invalid("tower depth must be at least 1"));
    }
    let q = tower_field_order(p, depth).ok_or_else(|| Error::budget("q_n", u128::MAX, cap as u128))?;
    let size = q as u128 * (q as u128 * q as u128 - 1);
    if size > cap as u128 {
        return Err(Error::budget(format!("|SL(2, F_{q})| at tower depth {depth}"), size, cap as u128));
    }
    let tower = FieldTower::new(p, depth - 1)?;
    let groups: Vec<Arc<FiniteGroup>> = (0..depth)
        .map(|level| sl2_enumerate(&tower, level, cap as u64).map(Arc::new))
        .collect::<Result<_>>()?;
    let top = &groups[depth - 1];
    let inclusions: Vec<Vec<usize>> = groups
        .iter()
        .map(|g| sl2_inclusion(g, top))
        .collect::<Result<_>>()?;

    // C_1 = G_1; for m ≥ 2 the right cosets of G_{m-1} in G_m
    let mut coset_reps = vec![groups[0].elements().collect::<Vec<_>>()];
    let mut coset_of = vec![(0..groups[0].order() as u32).collect::<Vec<_>>()];
    // parent[m][x] = index in G_m of x ∈ G_{m+1}, or UNSET
    let mut parent = Vec::new();
    for m in 1..depth {
        let small = sl2_inclusion(&groups[m - 1], &groups[m])?;
        let (reps, coset) = right_cosets(&groups[m], &small)?;
        let mut back = vec![UNSET; groups[m].order()];
        for (i, &x) in small.iter().enumerate() {
            back[x] = i as u32;
        }
        coset_reps.push(reps);
        coset_of.push(coset);
        parent.push(back);
    }

    let n = top.order();
    let mut components = vec![vec![0u32; n]; depth];
    for x in 0..n {
        let mut g = x;
        for m in (0..depth).rev() {
            let group = &groups[m];
            let j = coset_of[m][g];
            components[m][x] = j;
            if m > 0 {
                let c = coset_reps[m][j as usize];
                g = parent[m - 1][group.mul(g, group.inv(c))] as usize;
                debug_assert_ne!(g, UNSET as usize);
            }
        }
    }
    let action = ActionTable::left_regular(top.clone())?;
    Ok(TowerAction {
        p,
        tower,
        groups,
        inclusions,
        coset_reps,
        components,
        action,
    })
}

impl TowerAction {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.groups.len()
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    /// `G_m`, 1-based.
    pub fn group(&self, m: usize) -> &Arc<FiniteGroup> {
        &self.groups[m - 1]
    }

    /// Indices in `G_n` (the atoms) of the elements of `G_m`, 1-based.
    pub fn inclusion(&self, m: usize) -> &[usize] {
        &self.inclusions[m - 1]
    }

    /// `C_m` as elements of `G_m`, 1-based.
    pub fn coset_reps(&self, m: usize) -> &[usize] {
        &self.coset_reps[m - 1]
    }

    /// Coordinate of every atom in `C_m`, 1-based.
    pub fn component(&self, m: usize) -> &[u32] {
        &self.components[m - 1]
    }

    pub fn component_sizes(&self) -> Vec<usize> {
        self.coset_reps.iter().map(Vec::len).collect()
    }

    pub fn atoms(&self) -> usize {
        self.action.space().len()
    }

    /// Left translation of `G_n` on its own elements.
    pub fn action(&self) -> &ActionTable {
        &self.action
    }

    /// Whether the atom `g·x` (for `g` given as an atom) has the same
    /// coordinates as `x` in all components above `m`.
    pub fn fixes_components_above(&self, m: usize, g: usize, x: usize) -> bool {
        let y = self.action.apply(g, x);
        (m..self.depth()).all(|i| self.components[i][x] == self.components[i][y])
    }

    /// Checks `∏|C_i| = |G_n|`, joint injectivity of the component maps and
    /// that each `G_m` fixes the components above `m`. Exhaustive for at
    /// most [`TOWER_METRIC_CAP`] atoms, sampled above.
    pub fn verify(&self) -> Result<()> {
        let n = self.atoms();
        if self.component_sizes().iter().product::<usize>() != n {
            return Err(Error::invalid("component sizes do not multiply to |G_n|"));
        }
        let mut seen = std::collections::HashSet::with_capacity(n);
        for x in 0..n {
            let key: Vec<u32> = self.components.iter().map(|c| c[x]).collect();
            if !seen.insert(key) {
                return Err(Error::invalid(format!("atom {x} shares all coordinates with another atom")));
            }
        }
        let mut rng = seeded_rng(0x70e7);
        for m in 1..self.depth() {
            let sub = &self.inclusions[m - 1];
            let pairs: Box<dyn Iterator<Item = (usize, usize)>> = if n <= TOWER_METRIC_CAP {
                Box::new(sub.iter().flat_map(move |&g| (0..n).map(move |x| (g, x))))
            } else {
                let draws: Vec<(usize, usize)> = (0..20_000)
                    .map(|_| (sub[rng.gen_range(0..sub.len())], rng.gen_range(0..n)))
                    .collect();
                Box::new(draws.into_iter())
            };
            for (g, x) in pairs {
                if !self.fixes_components_above(m, g, x) {
                    return Err(Error::invalid(format!("G_{m} moves a component above {m} of atom {x}")));
                }
            }
        }
        Ok(())
    }
}

/// `Σ_{i ≤ r} 2^{-i} ρ_i` where `ρ_i` separates atoms whose first `i`
/// coordinates differ.
pub fn component_metric(tower: &TowerAction, r: usize) -> Result<Semimetric> {
    if r > tower.depth() {
        return Err(Error::invalid(format!("r = {r} exceeds the tower depth {}", tower.depth())));
    }
    let n = tower.atoms();
    if n > TOWER_METRIC_CAP {
        return Err(Error::budget("pairwise tower metric atoms", n as u128, TOWER_METRIC_CAP as u128));
    }
    // tail[j] = Σ_{i=j+1}^{r} 2^{-i}, the distance when coordinate j (0-based) is the first to differ
    let mut tail = vec![0.0; r + 1];
    for j in (0..r).rev() {
        tail[j] = tail[j + 1] + 0.5f64.powi(j as i32 + 1);
    }
    let comps = &tower.components[..r];
    let mut data = vec![0.0; n * n];
    for x in 0..n {
        for y in 0..n {
            if let Some(j) = comps.iter().position(|c| c[x] != c[y]) {
                data[x * n + y] = tail[j];
            }
        }
    }
    Ok(Semimetric::from_raw(tower.action.space().clone(), data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::folner_average;
    use crate::spaces::Partition;

    #[test]
    fn depth_one_is_sl2_f3() {
        let t = sl2_tower_action(3, 1, TOWER_ACTION_CAP).unwrap();
        assert_eq!(t.atoms(), 24);
        assert_eq!(t.component_sizes(), vec![24]);
        assert_eq!(t.component(1), (0..24).collect::<Vec<u32>>().as_slice());
        t.verify().unwrap();
    }

    #[test]
    fn depth_two_components() {
        let t = sl2_tower_action(3, 2, TOWER_ACTION_CAP).unwrap();
        assert_eq!(t.atoms(), 720);
        assert_eq!(t.component_sizes(), vec![24, 30]);
        t.verify().unwrap();
        t.action().validate().unwrap();
        for &g in t.inclusion(1) {
            for x in 0..720 {
                assert_eq!(t.component(2)[x], t.component(2)[t.action().apply(g, x)]);
            }
        }
    }

    #[test]
    fn coordinates_reassemble_atoms() {
        let t = sl2_tower_action(5, 1, TOWER_ACTION_CAP).unwrap();
        assert_eq!(t.atoms(), 120);
        let t = sl2_tower_action(3, 2, TOWER_ACTION_CAP).unwrap();
        let (g1, g2) = (t.group(1), t.group(2));
        let inc = t.inclusion(1);
        for x in 0..t.atoms() {
            let h = inc[t.coset_reps(1)[t.component(1)[x] as usize]];
            let c = t.coset_reps(2)[t.component(2)[x] as usize];
            assert_eq!(g2.mul(h, c), x);
            assert!(g1.order() == 24);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = sl2_tower_action(3, 2, 500).unwrap_err();
        assert!(err.is_budget());
        let t = sl2_tower_action(3, 2, TOWER_ACTION_CAP).unwrap();
        assert!(component_metric(&t, 3).is_err());
    }

    #[test]
    fn component_metric_shape() {
        let t = sl2_tower_action(3, 2, TOWER_ACTION_CAP).unwrap();
        let r1 = component_metric(&t, 1).unwrap();
        let first = Partition::new(t.action().space().clone(), t.component(1)).unwrap();
        assert!(r1.max_abs_diff(&Semimetric::cut(&first).scaled(0.5).unwrap()) == 0.0);
        let r2 = component_metric(&t, 2).unwrap();
        r2.validate().unwrap();
        assert!(r1.le_pointwise(&r2, 0.0));
        assert!(r2.diameter() <= 0.75);
        assert!((0..720).all(|x| r2.get(x, x) == 0.0));
        // metric at full depth: distinct atoms are separated
        assert!((0..720).all(|x| (0..720).all(|y| x == y || r2.get(x, y) > 0.0)));
    }

    #[test]
    fn averages_ignore_coordinates_above_the_window_level() {
        let t = sl2_tower_action(3, 2, TOWER_ACTION_CAP).unwrap();
        let rho = component_metric(&t, 1).unwrap();
        let avg = folner_average(t.action(), t.inclusion(1), &rho).unwrap();
        let c1 = t.component(1);
        for x in 0..720 {
            for y in 0..720 {
                // replace x by the atom with the same first coordinate and second coordinate 0
                let x0 = (0..720).find(|&z| c1[z] == c1[x] && t.component(2)[z] == 0).unwrap();
                assert!((avg.get(x, y) - avg.get(x0, y)).abs() < 1e-12);
            }
            if x > 40 {
                break;
            }
        }
    }

    #[test]
    fn depth_three_action_only() {
        let t = sl2_tower_action(3, 3, TOWER_ACTION_CAP).unwrap();
        assert_eq!(t.atoms(), 531_360);
        assert_eq!(t.component_sizes(), vec![24, 30, 738]);
        t.verify().unwrap();
    }
}
