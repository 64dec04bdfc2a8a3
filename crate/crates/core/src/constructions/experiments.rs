//! Desk-scale experiments on `SL(2, F_q)`: ε-entropy of invariant
//! semimetrics, the tower gap profile, transversal lower bounds and product
//! growth. Grid points run in parallel; rows come back in grid order.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::tower::{component_metric, sl2_tower_action, tower_field_order};
use super::transversal::{left_invariant_semimetric, transversal_partition, InvariantRecipe};
use crate::algebra::{sl2_for_order, tower_coordinates, FiniteGroup};
use crate::dynamics::{folner_average, ActionTable};
use crate::entropy::{eps_entropy, EntropyOptions, EpsEntropyResult};
use crate::spaces::Semimetric;
use crate::table::{fmt_f64, CsvTable};
use crate::util::seeded_rng;
use crate::{Error, Result};

fn check_grid(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(Error::invalid("empty ε grid"));
    }
    match eps.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
        Some(e) => Err(Error::invalid(format!("ε = {e} is outside (0, 1]"))),
        None => Ok(()),
    }
}

fn regular_sl2(q: u64, cap: usize) -> Result<ActionTable> {
    let (_, group) = sl2_for_order(q, cap as u64)?;
    ActionTable::left_regular(Arc::new(group))
}

#[derive(Clone, Debug)]
pub struct Claim52Row {
    pub q: u64,
    pub recipe: &'static str,
    pub epsilon: f64,
    /// Diameter before normalization.
    pub diam: f64,
    /// Whether the normalized diameter exceeds `3ε`.
    pub hypothesis: bool,
    pub result: EpsEntropyResult,
    pub log2_q: f64,
}

#[derive(Clone, Debug)]
pub struct Claim52Report {
    pub rows: Vec<Claim52Row>,
    /// `min H_ε / log₂ q` over rows meeting the hypothesis, using the lower
    /// end of each bracket.
    pub c_emp: Option<f64>,
}

impl Claim52Report {
    pub const HEADER: [&'static str; 8] = [
        "q", "recipe", "epsilon", "diam", "lower_bits", "upper_bits", "log2_q", "hypothesis",
    ];

    pub fn table(&self) -> CsvTable {
        let mut t = CsvTable::new(&Self::HEADER);
        for r in &self.rows {
            t.push(vec![
                r.q.to_string(),
                r.recipe.to_string(),
                fmt_f64(r.epsilon),
                fmt_f64(r.diam),
                fmt_f64(r.result.lower_bits),
                fmt_f64(r.result.upper_bits),
                fmt_f64(r.log2_q),
                r.hypothesis.to_string(),
            ]);
        }
        t
    }
}

/// ε-entropy of a left-invariant semimetric on `SL(2, F_q)` (normalized to
/// diameter 1, uniform measure) for each `q`, next to `log₂ q`.
pub fn claim52_experiment(
    qs: &[u64],
    eps: f64,
    recipe: InvariantRecipe,
    opts: &EntropyOptions,
    cap: usize,
) -> Result<Claim52Report> {
    check_grid(&[eps])?;
    let rows: Vec<Claim52Row> = qs
        .par_iter()
        .map(|&q| {
            let action = regular_sl2(q, cap)?;
            let root = recipe.root(action.group())?;
            let rho = left_invariant_semimetric(&action, &root)?;
            let diam = rho.diameter();
            let normalized = if diam > 0.0 { rho.scaled(1.0 / diam)? } else { rho };
            let result = eps_entropy(&normalized, eps, opts)?;
            Ok(Claim52Row {
                q,
                recipe: recipe.name(),
                epsilon: eps,
                diam,
                hypothesis: normalized.diameter() > 3.0 * eps,
                result,
                log2_q: (q as f64).log2(),
            })
        })
        .collect::<Result<_>>()?;
    let c_emp = rows
        .iter()
        .filter(|r| r.hypothesis)
        .map(|r| r.result.lower_bits / r.log2_q)
        .min_by(f64::total_cmp);
    Ok(Claim52Report { rows, c_emp })
}

/// `G_av ρ_ξ` over the whole group for the `⟨g_0⟩`-transversal partition `ξ`
/// with `g_0 = [[1, 1], [0, 1]]` of order `p`.
fn averaged_transversal(action: &ActionTable, p: u64) -> Result<Semimetric> {
    let group = action.group();
    let g0 = group
        .unipotent()
        .ok_or_else(|| Error::invalid("transversal runs need a matrix group"))?;
    let xi = transversal_partition(action, g0, p)?;
    let window: Vec<usize> = group.elements().collect();
    folner_average(action, &window, &Semimetric::cut(&xi))
}

#[derive(Clone, Debug)]
pub struct TransversalRow {
    pub q: u64,
    pub order: usize,
    /// The radius actually used, `ε²`.
    pub epsilon: f64,
    pub result: EpsEntropyResult,
    pub log2_q: f64,
    /// L¹ norm of the averaged cut semimetric.
    pub l1_mean: f64,
}

#[derive(Clone, Debug)]
pub struct TransversalReport {
    pub rows: Vec<TransversalRow>,
    /// `min H / log₂ q` using the lower end of each bracket.
    pub c_emp: f64,
}

impl TransversalReport {
    pub const HEADER: [&'static str; 8] = [
        "q", "order", "epsilon", "lower_bits", "upper_bits", "exact", "log2_q", "l1_mean",
    ];

    pub fn table(&self) -> CsvTable {
        let mut t = CsvTable::new(&Self::HEADER);
        for r in &self.rows {
            t.push(vec![
                r.q.to_string(),
                r.order.to_string(),
                fmt_f64(r.epsilon),
                fmt_f64(r.result.lower_bits),
                fmt_f64(r.result.upper_bits),
                r.result.exact.to_string(),
                fmt_f64(r.log2_q),
                fmt_f64(r.l1_mean),
            ]);
        }
        t
    }
}

/// `H_{ε²}(G_av ρ_ξ)` on `SL(2, F_q)` for each `q`: the lower-bound side of
/// the growth gap, one row per `q`.
pub fn transversal_experiment(qs: &[u64], eps: f64, opts: &EntropyOptions, cap: usize) -> Result<TransversalReport> {
    check_grid(&[eps])?;
    let rows: Vec<TransversalRow> = qs
        .par_iter()
        .map(|&q| {
            let (p, _) = tower_coordinates(q).ok_or_else(|| Error::invalid(format!("{q} is not p^(2^k)")))?;
            let action = regular_sl2(q, cap)?;
            let avg = averaged_transversal(&action, p)?;
            Ok(TransversalRow {
                q,
                order: action.group().order(),
                epsilon: eps * eps,
                result: eps_entropy(&avg, eps * eps, opts)?,
                log2_q: (q as f64).log2(),
                l1_mean: avg.l1_norm(),
            })
        })
        .collect::<Result<_>>()?;
    let c_emp = rows
        .iter()
        .map(|r| r.result.lower_bits / r.log2_q)
        .min_by(f64::total_cmp)
        .unwrap_or(0.0);
    Ok(TransversalReport { rows, c_emp })
}

#[derive(Clone, Debug)]
pub struct GapRow {
    pub p: u64,
    pub n: usize,
    pub order: usize,
    pub epsilon: f64,
    pub result: EpsEntropyResult,
    pub log2_order: f64,
    pub log2_qn: f64,
}

impl GapRow {
    pub const HEADER: [&'static str; 8] = [
        "p", "n", "order_Gn", "epsilon", "lower_bits", "upper_bits", "log2_order", "log2_qn",
    ];

    pub fn table(rows: &[GapRow]) -> CsvTable {
        let mut t = CsvTable::new(&Self::HEADER);
        for r in rows {
            t.push(vec![
                r.p.to_string(),
                r.n.to_string(),
                r.order.to_string(),
                fmt_f64(r.epsilon),
                fmt_f64(r.result.lower_bits),
                fmt_f64(r.result.upper_bits),
                fmt_f64(r.log2_order),
                fmt_f64(r.log2_qn),
            ]);
        }
        t
    }
}

#[derive(Clone, Debug)]
pub struct GapReport {
    /// `Φ_ρ(n, ε)` for the dyadic component metric, in `(n, ε)` order.
    pub phi_rows: Vec<GapRow>,
    /// `H_{ε²}(G_av^{G_n} ρ_ξ)`, with `epsilon` holding `ε²`.
    pub transversal_rows: Vec<GapRow>,
    /// L¹ norm of `G_av^{G_n} ρ_ξ` per level.
    pub transversal_l1: Vec<f64>,
}

/// For each level `n ≤ depth`, on the truncated tower `G_1 ⊂ … ⊂ G_n` acting
/// on `G_n`: `Φ_ρ(n, ε)` for `ρ = Σ_{i ≤ n} 2^{-i} ρ_i` averaged over
/// `F_n = G_n`, and the transversal lower-bound run.
pub fn gap_experiment(p: u64, depth: usize, eps_grid: &[f64], opts: &EntropyOptions, cap: usize) -> Result<GapReport> {
    check_grid(eps_grid)?;
    let mut report = GapReport {
        phi_rows: Vec::new(),
        transversal_rows: Vec::new(),
        transversal_l1: Vec::new(),
    };
    for n in 1..=depth {
        let tower = sl2_tower_action(p, n, cap)?;
        let action = tower.action();
        let window: Vec<usize> = action.group().elements().collect();
        let phi_metric = folner_average(action, &window, &component_metric(&tower, n)?)?;
        let transversal = averaged_transversal(action, p)?;
        let order = window.len();
        let q = tower_field_order(p, n).expect("within budget");
        let row = |epsilon: f64, result| GapRow {
            p,
            n,
            order,
            epsilon,
            result,
            log2_order: (order as f64).log2(),
            log2_qn: (q as f64).log2(),
        };
        let phi: Vec<EpsEntropyResult> = eps_grid
            .par_iter()
            .map(|&e| eps_entropy(&phi_metric, e, opts))
            .collect::<Result<_>>()?;
        let lower: Vec<EpsEntropyResult> = eps_grid
            .par_iter()
            .map(|&e| eps_entropy(&transversal, e * e, opts))
            .collect::<Result<_>>()?;
        report.phi_rows.extend(eps_grid.iter().zip(phi).map(|(&e, r)| row(e, r)));
        report.transversal_rows.extend(eps_grid.iter().zip(lower).map(|(&e, r)| row(e * e, r)));
        report.transversal_l1.push(transversal.l1_norm());
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductGrowthTrial {
    pub p: u64,
    pub trial: usize,
    pub order: usize,
    pub size: usize,
    pub square: usize,
    pub cube: usize,
    /// `log|A³| / log|A| − 1`, when `A³ ≠ G`.
    pub delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductGrowthReport {
    pub trials: Vec<ProductGrowthTrial>,
    /// Largest `δ` with `|A³| ≥ |A|^{1+δ}` on every trial with `A³ ≠ G`.
    pub fitted_delta: Option<f64>,
}

impl ProductGrowthReport {
    pub const HEADER: [&'static str; 7] = ["p", "trial", "order", "size", "square", "cube", "delta"];

    pub fn table(&self) -> CsvTable {
        let mut t = CsvTable::new(&Self::HEADER);
        for r in &self.trials {
            t.push(vec![
                r.p.to_string(),
                r.trial.to_string(),
                r.order.to_string(),
                r.size.to_string(),
                r.square.to_string(),
                r.cube.to_string(),
                r.delta.map(fmt_f64).unwrap_or_default(),
            ]);
        }
        t
    }

    /// Trials where `A³ ≠ G` but `|A³| ≤ |A|`.
    pub fn violations(&self) -> Vec<&ProductGrowthTrial> {
        self.trials
            .iter()
            .filter(|t| t.cube < t.order && t.cube <= t.size)
            .collect()
    }
}

/// Smallest and largest size of the random generating sets.
pub const GROWTH_SET_SIZES: (usize, usize) = (2, 8);

fn random_generating_set(group: &FiniteGroup, rng: &mut impl Rng) -> Vec<usize> {
    let all: Vec<usize> = group.elements().collect();
    loop {
        let k = rng.gen_range(GROWTH_SET_SIZES.0..=GROWTH_SET_SIZES.1);
        let mut a: Vec<usize> = all.choose_multiple(rng, k).copied().collect();
        a.sort_unstable();
        if group.generated_subgroup(&a).len() == group.order() {
            return a;
        }
    }
}

/// `|A|, |A²|, |A³|` for random generating sets `A ⊂ SL(2, F_p)`.
pub fn product_growth_experiment(ps: &[u64], trials: usize, seed: u64) -> Result<ProductGrowthReport> {
    let per_p: Vec<Vec<ProductGrowthTrial>> = ps
        .par_iter()
        .map(|&p| {
            let (_, group) = sl2_for_order(p, crate::algebra::SL2_ENUMERATION_CAP)?;
            let mut rng = seeded_rng(seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            Ok((0..trials)
                .map(|trial| {
                    let a = random_generating_set(&group, &mut rng);
                    let tp = group.triple_product_size(&a);
                    let delta = (tp.cube < group.order())
                        .then(|| (tp.cube as f64).ln() / (tp.size as f64).ln() - 1.0);
                    ProductGrowthTrial {
                        p,
                        trial,
                        order: group.order(),
                        size: tp.size,
                        square: tp.square,
                        cube: tp.cube,
                        delta,
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let trials: Vec<ProductGrowthTrial> = per_p.into_iter().flatten().collect();
    let fitted_delta = trials.iter().filter_map(|t| t.delta).min_by(f64::total_cmp);
    Ok(ProductGrowthReport { trials, fitted_delta })
}
