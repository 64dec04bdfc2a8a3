//! Difference graphs `Γ_K` on a window and the separated families obtained
//! from their greedy colorings.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::GroupLaw;
use crate::{Error, Result};

/// Undirected graph on the vertices of a window, in window order.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph<E> {
    pub vertices: Vec<E>,
    pub adjacency: Vec<Vec<usize>>,
}

impl<E> Graph<E> {
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

fn dedup<E: Ord + Copy>(v: &[E]) -> Vec<E> {
    v.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

/// `g ~ h` iff `g h⁻¹ ∈ K` or `h g⁻¹ ∈ K`. The identity must not be in `K`.
pub fn difference_graph<G: GroupLaw>(group: &G, window: &[G::Elem], forbidden: &[G::Elem]) -> Result<Graph<G::Elem>> {
    let e = group.identity();
    if forbidden.contains(&e) {
        return Err(Error::invalid("the forbidden set K must not contain the identity"));
    }
    let vertices = dedup(window);
    let index: HashMap<G::Elem, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); vertices.len()];
    // h = k⁻¹ g  ⇔  g h⁻¹ = k, so each vertex has at most 2|K| neighbours
    for (i, &g) in vertices.iter().enumerate() {
        for &k in forbidden {
            for h in [group.op(group.inverse(k), g), group.op(k, g)] {
                if let Some(&j) = index.get(&h) {
                    if j != i {
                        adj[i].insert(j);
                        adj[j].insert(i);
                    }
                }
            }
        }
    }
    Ok(Graph {
        vertices,
        adjacency: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
    })
}

/// Greedy proper coloring in vertex order: each vertex takes the least color
/// missing among its already-colored neighbours, so at most `Δ + 1` colors.
pub fn greedy_coloring<E>(graph: &Graph<E>) -> Vec<usize> {
    let n = graph.vertices.len();
    let mut colors: Vec<Option<usize>> = vec![None; n];
    for v in 0..n {
        let used: BTreeSet<usize> = graph.adjacency[v].iter().filter_map(|&u| colors[u]).collect();
        colors[v] = Some((0..).find(|c| !used.contains(c)).expect("unbounded range"));
    }
    colors.into_iter().map(|c| c.expect("all colored")).collect()
}

pub fn is_proper<E>(graph: &Graph<E>, colors: &[usize]) -> bool {
    graph
        .adjacency
        .iter()
        .enumerate()
        .all(|(v, ns)| ns.iter().all(|&u| colors[u] != colors[v]))
}

/// Window `F` cut into blocks with no quotient `g h⁻¹` (g ≠ h) in `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatedFamily<E> {
    pub window: Vec<E>,
    pub forbidden: Vec<E>,
    pub blocks: Vec<Vec<E>>,
}

impl<E: Copy + Ord + std::hash::Hash + std::fmt::Debug> SeparatedFamily<E> {
    /// Checks the partition, the separation property (exhaustively) and the
    /// `2|K| + 1` block bound.
    pub fn verify<G: GroupLaw<Elem = E>>(&self, group: &G) -> Result<()> {
        let mut all: Vec<E> = self.blocks.iter().flatten().copied().collect();
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        if all.len() != total || all != dedup(&self.window) {
            return Err(Error::invalid("blocks do not partition the window"));
        }
        let forbidden: BTreeSet<E> = self.forbidden.iter().copied().collect();
        for block in &self.blocks {
            for &g in block {
                for &h in block {
                    if g != h && forbidden.contains(&group.op(g, group.inverse(h))) {
                        return Err(Error::invalid(format!("block contains {g:?}, {h:?} with quotient in K")));
                    }
                }
            }
        }
        if self.blocks.len() > 2 * forbidden.len() + 1 {
            return Err(Error::invalid(format!(
                "{} blocks exceed the bound 2|K| + 1 = {}",
                self.blocks.len(),
                2 * forbidden.len() + 1
            )));
        }
        Ok(())
    }
}

/// Color classes of the greedy coloring of `Γ_K` on the window.
pub fn separated_family<G: GroupLaw>(
    group: &G,
    window: &[G::Elem],
    forbidden: &[G::Elem],
) -> Result<SeparatedFamily<G::Elem>> {
    let graph = difference_graph(group, window, forbidden)?;
    let colors = greedy_coloring(&graph);
    let k = colors.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); k];
    for (v, &c) in graph.vertices.iter().zip(&colors) {
        blocks[c].push(*v);
    }
    blocks.retain(|b| !b.is_empty());
    Ok(SeparatedFamily {
        window: graph.vertices,
        forbidden: dedup(forbidden),
        blocks,
    })
}
