//! Exact ε-entropy by branch and bound.
//!
//! Atoms at distance zero are merged first: moving a point next to a
//! zero-distance twin never raises a diameter, so some optimal decomposition
//! keeps twins together. The search then assigns merged units one at a time
//! to an existing compatible cell, to `X_0` while its mass stays below `ε`,
//! or to a fresh cell. The bound at a node counts the open cells plus a
//! greedy set of remaining units that fit no open cell and are pairwise
//! incompatible, minus those that could still be absorbed by `X_0`.

use super::bounds::{eps_entropy_greedy_upper, eps_entropy_packing_lower};
use super::{check_epsilon, dist_below, Decomposition, EntropyOptions, EpsEntropyResult};
use crate::spaces::{mass_below, Semimetric};
use crate::util::BitSet;
use crate::{Error, Result};

/// Default atom cap for the exact solver.
pub const EXACT_ATOM_CAP: usize = 24;

/// Distances at or below this are treated as zero when merging twins.
const TWIN_TOLERANCE: f64 = 1e-12;

pub fn eps_entropy_exact(rho: &Semimetric, eps: f64, opts: &EntropyOptions) -> Result<EpsEntropyResult> {
    check_epsilon(eps)?;
    let n = rho.len();
    if n > opts.exact_cap {
        return Err(Error::budget("exact ε-entropy atoms", n as u64, opts.exact_cap as u64));
    }
    let lower = eps_entropy_packing_lower(rho, eps)?.lower_cells;
    let greedy = eps_entropy_greedy_upper(rho, eps)?;
    let mut search = Search::new(rho, eps, opts.node_limit);
    search.best = greedy.upper_cells;
    search.best_assignment = None;
    search.floor = lower;
    if search.best > lower {
        search.run();
    }
    let witness = match search.best_assignment.take() {
        Some(assign) => search.decomposition(&assign),
        None => greedy.witness.expect("greedy cover always has a witness"),
    };
    let lower = if search.aborted { lower } else { search.best };
    Ok(EpsEntropyResult::new(eps, lower, search.best, Some(witness)))
}

struct Unit {
    atoms: Vec<usize>,
    mass: f64,
}

struct Search {
    units: Vec<Unit>,
    /// compat[u] has bit v iff units u and v may share a cell.
    compat: Vec<BitSet>,
    budget: f64,
    eps: f64,
    best: usize,
    /// unit → cell id (0 = X_0, 1.. = cells)
    best_assignment: Option<Vec<usize>>,
    floor: usize,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
    // working state
    cells: Vec<BitSet>,
    assign: Vec<usize>,
    x0_mass: f64,
}

impl Search {
    fn new(rho: &Semimetric, eps: f64, node_limit: u64) -> Self {
        let n = rho.len();
        let space = rho.space();
        let mut twin_of: Vec<Option<usize>> = vec![None; n];
        let mut units: Vec<Unit> = Vec::new();
        for x in 0..n {
            if twin_of[x].is_some() {
                continue;
            }
            let id = units.len();
            let atoms: Vec<usize> = (x..n)
                .filter(|&y| twin_of[y].is_none() && rho.get(x, y) <= TWIN_TOLERANCE)
                .collect();
            for &y in &atoms {
                twin_of[y] = Some(id);
            }
            let mass = space.mass_of(atoms.iter().copied());
            units.push(Unit { atoms, mass });
        }
        // heavy units first, then the most constrained ones
        let degrees: Vec<usize> = units
            .iter()
            .map(|u| {
                units
                    .iter()
                    .filter(|v| dist_below(rho.get(u.atoms[0], v.atoms[0]), eps))
                    .count()
            })
            .collect();
        let mut keyed: Vec<(usize, Unit)> = degrees.into_iter().zip(units).collect();
        keyed.sort_by(|(da, a), (db, b)| {
            b.mass
                .total_cmp(&a.mass)
                .then(da.cmp(db))
                .then(a.atoms[0].cmp(&b.atoms[0]))
        });
        let units: Vec<Unit> = keyed.into_iter().map(|(_, u)| u).collect();
        let m = units.len();
        let compat = (0..m)
            .map(|u| {
                let mut set = BitSet::new(m);
                for v in 0..m {
                    let d = units[u]
                        .atoms
                        .iter()
                        .flat_map(|&a| units[v].atoms.iter().map(move |&b| (a, b)))
                        .fold(0.0f64, |acc, (a, b)| acc.max(rho.get(a, b)));
                    if dist_below(d, eps) {
                        set.insert(v);
                    }
                }
                set
            })
            .collect();
        Search {
            units,
            compat,
            budget: eps,
            eps,
            best: usize::MAX,
            best_assignment: None,
            floor: 1,
            nodes: 0,
            node_limit,
            aborted: false,
            cells: Vec::new(),
            assign: vec![0; m],
            x0_mass: 0.0,
        }
    }

    fn run(&mut self) {
        self.descend(0);
    }

    fn done(&self) -> bool {
        self.aborted || self.best <= self.floor
    }

    fn bound(&self, pos: usize) -> usize {
        let mut picked: Vec<usize> = Vec::new();
        for u in pos..self.units.len() {
            if self.cells.iter().any(|c| c.contains(u)) {
                continue;
            }
            if picked.iter().all(|&v| !self.compat[u].contains(v)) {
                picked.push(u);
            }
        }
        // lightest picked units first into what is left of the X_0 budget
        let mut masses: Vec<f64> = picked.iter().map(|&u| self.units[u].mass).collect();
        masses.sort_by(f64::total_cmp);
        let mut absorbed = 0;
        let mut mass = self.x0_mass;
        for m in masses {
            if !mass_below(mass + m, self.budget) {
                break;
            }
            mass += m;
            absorbed += 1;
        }
        self.cells.len() + picked.len() - absorbed
    }

    fn descend(&mut self, pos: usize) {
        if self.done() {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        if pos == self.units.len() {
            if self.cells.len() < self.best {
                self.best = self.cells.len();
                self.best_assignment = Some(self.assign.clone());
            }
            return;
        }
        if self.bound(pos) >= self.best {
            return;
        }
        // join an open cell
        for c in 0..self.cells.len() {
            if self.cells[c].contains(pos) {
                let saved = self.cells[c].clone();
                self.cells[c].intersect_with(&self.compat[pos]);
                self.assign[pos] = c + 1;
                self.descend(pos + 1);
                self.cells[c] = saved;
                if self.done() {
                    return;
                }
            }
        }
        // hide in X_0
        let m = self.units[pos].mass;
        if mass_below(self.x0_mass + m, self.eps) {
            self.x0_mass += m;
            self.assign[pos] = 0;
            self.descend(pos + 1);
            self.x0_mass -= m;
            if self.done() {
                return;
            }
        }
        // open a new cell
        if self.cells.len() + 1 < self.best {
            self.cells.push(self.compat[pos].clone());
            self.assign[pos] = self.cells.len();
            self.descend(pos + 1);
            self.cells.pop();
        }
    }

    fn decomposition(&self, assign: &[usize]) -> Decomposition {
        let k = assign.iter().copied().max().unwrap_or(0);
        let mut cells = vec![Vec::new(); k];
        let mut exceptional = Vec::new();
        for (u, &c) in assign.iter().enumerate() {
            let target = if c == 0 { &mut exceptional } else { &mut cells[c - 1] };
            target.extend(&self.units[u].atoms);
        }
        exceptional.sort_unstable();
        for cell in &mut cells {
            cell.sort_unstable();
        }
        Decomposition { exceptional, cells }
    }
}
