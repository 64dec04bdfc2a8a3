use super::{check_epsilon, dist_below, Decomposition, EpsEntropyResult};
use crate::spaces::{mass_below, Semimetric, METRIC_TOLERANCE};
use crate::Result;

/// Upper bound by a greedy ball cover.
///
/// Balls have radius `ε/2·(1 − 10⁻⁹)` less the metric margin, so every ball
/// has diameter `< ε`. The center with the most uncovered mass in its ball is
/// taken first (ties by atom index); covering stops as soon as the uncovered
/// mass is below `ε`, and that residue becomes `X_0`.
pub fn eps_entropy_greedy_upper(rho: &Semimetric, eps: f64) -> Result<EpsEntropyResult> {
    check_epsilon(eps)?;
    let n = rho.len();
    let space = rho.space();
    let radius = eps / 2.0 * (1.0 - 1e-9) - METRIC_TOLERANCE;
    let in_ball = |c: usize, x: usize| rho.get(c, x) <= radius;

    let mut covered = vec![false; n];
    let mut uncovered_total: f64 = space.masses().iter().sum();
    let mut ball_mass: Vec<f64> = (0..n)
        .map(|c| (0..n).filter(|&x| in_ball(c, x)).map(|x| space.mass(x)).sum())
        .collect();
    let mut cells = Vec::new();
    while !mass_below(uncovered_total, eps) {
        let center = (0..n)
            .max_by(|&a, &b| ball_mass[a].total_cmp(&ball_mass[b]).then(b.cmp(&a)))
            .expect("non-empty space");
        let cell: Vec<usize> = (0..n).filter(|&x| !covered[x] && in_ball(center, x)).collect();
        for &x in &cell {
            covered[x] = true;
            let m = space.mass(x);
            uncovered_total -= m;
            for (c, bm) in ball_mass.iter_mut().enumerate() {
                if in_ball(c, x) {
                    *bm -= m;
                }
            }
        }
        cells.push(cell);
    }
    let exceptional = (0..n).filter(|&x| !covered[x]).collect();
    let k = cells.len();
    let witness = Decomposition { exceptional, cells };
    let mut result = EpsEntropyResult::new(eps, 0, k, Some(witness));
    result.exact = false;
    Ok(result)
}

/// Lower bound from an ε-separated set.
///
/// A cell of diameter `< ε` holds at most one point of a set whose pairwise
/// distances are `≥ ε`, so such a set `S` forces `|S|` cells except for the
/// points that can hide in `X_0`; at most the largest number of the lightest
/// points of `S` with total mass `< ε` can.
pub fn eps_entropy_packing_lower(rho: &Semimetric, eps: f64) -> Result<EpsEntropyResult> {
    check_epsilon(eps)?;
    let space = rho.space();
    let mut order: Vec<usize> = (0..rho.len()).collect();
    order.sort_by(|&a, &b| space.mass(b).total_cmp(&space.mass(a)).then(a.cmp(&b)));
    let mut separated: Vec<usize> = Vec::new();
    for &x in &order {
        if separated.iter().all(|&s| !dist_below(rho.get(x, s), eps)) {
            separated.push(x);
        }
    }
    // separated is sorted by mass descending, so the lightest are at the end
    let mut hidden = 0;
    let mut hidden_mass = 0.0;
    for &s in separated.iter().rev() {
        if !mass_below(hidden_mass + space.mass(s), eps) {
            break;
        }
        hidden_mass += space.mass(s);
        hidden += 1;
    }
    let k = separated.len().saturating_sub(hidden).max(1);
    let mut result = EpsEntropyResult::new(eps, k, k, None);
    result.upper_cells = usize::MAX;
    result.upper_bits = f64::INFINITY;
    result.exact = false;
    Ok(result)
}
