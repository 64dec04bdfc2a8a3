//! Randomized verification suites for the entropy inequalities, averaging
//! identities and constructions the rest of the crate relies on. Each suite
//! is deterministic in its seed and reports violations rather than panicking.

use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{sl2_enumerate, FieldTower, FiniteGroup, GroupLaw, IntegerLattice, SL2_ENUMERATION_CAP};
use crate::constructions::{difference_graph, greedy_coloring, is_proper, separated_family};
use crate::dynamics::{bernoulli_shift, folner_average, refined_orbit_partition, translate_semimetric, ActionTable};
use crate::entropy::{
    eps_entropy_exact, eps_entropy_greedy_upper, eps_entropy_packing_lower, EntropyOptions,
};
use crate::spaces::{m_norm, refine, FiniteProbSpace, Partition, Semimetric, M_NORM_CAP};
use crate::table::{fmt_f64, CsvTable};
use crate::util::seeded_rng;
use crate::Result;

/// ε values of the sandwich suite.
pub const SANDWICH_EPSILONS: [f64; 5] = [0.05, 0.1, 0.2, 0.3, 0.5];

/// Absolute tolerance of the averaging identities.
pub const AVERAGING_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub violations: usize,
    /// Short description of the first violation.
    pub first_violation: Option<String>,
    /// Free-form summary statistics.
    pub note: String,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            trials: 0,
            violations: 0,
            first_violation: None,
            note: String::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.trials > 0 && self.violations == 0
    }

    pub const HEADER: [&'static str; 5] = ["suite", "trials", "violations", "status", "note"];

    pub fn table(reports: &[SuiteReport]) -> CsvTable {
        let mut t = CsvTable::new(&Self::HEADER);
        for r in reports {
            let note = match &r.first_violation {
                Some(v) => format!("{}; first violation: {v}", r.note),
                None => r.note.clone(),
            };
            t.push(vec![
                r.name.to_string(),
                r.trials.to_string(),
                r.violations.to_string(),
                if r.passed() { "pass" } else { "fail" }.to_string(),
                note,
            ]);
        }
        t
    }
}

/// Space on `n` atoms with random rational masses `w_i / Σw`, `w_i ∈ 1..=10`.
pub fn random_space(rng: &mut ChaCha8Rng, n: usize) -> Result<Arc<FiniteProbSpace>> {
    let w: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=10)).collect();
    let total: u64 = w.iter().sum();
    FiniteProbSpace::from_ratios(w.into_iter().map(|x| Ratio::new(x, total)).collect())
}

pub fn random_partition(rng: &mut ChaCha8Rng, space: &Arc<FiniteProbSpace>, max_cells: usize) -> Result<Partition> {
    let cells = rng.gen_range(1..=max_cells);
    let labels: Vec<usize> = (0..space.len()).map(|_| rng.gen_range(0..cells)).collect();
    Partition::new(space.clone(), &labels)
}

/// Positive weights summing to 1.
pub fn random_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.gen_range(1..=10) as f64).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Convex combination of `1..=max_terms` cut semimetrics (so bounded by 1).
pub fn random_cut_combination(
    rng: &mut ChaCha8Rng,
    space: &Arc<FiniteProbSpace>,
    max_terms: usize,
    max_cells: usize,
) -> Result<Semimetric> {
    let k = rng.gen_range(1..=max_terms);
    let cuts: Vec<Semimetric> = (0..k)
        .map(|_| Ok(Semimetric::cut(&random_partition(rng, space, max_cells)?)))
        .collect::<Result<_>>()?;
    let refs: Vec<&Semimetric> = cuts.iter().collect();
    Semimetric::combine(&random_weights(rng, k), &refs)
}

fn exact_opts() -> EntropyOptions {
    EntropyOptions {
        node_limit: u64::MAX,
        ..EntropyOptions::default()
    }
}

/// Packing lower bound ≤ exact value ≤ greedy upper bound, and the exact
/// witness is a valid decomposition.
pub fn sandwich_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = seeded_rng(seed);
    let mut report = SuiteReport::new("eps_entropy_sandwich");
    let mut tight = 0;
    for t in 0..trials {
        let n = rng.gen_range(2..=12);
        let space = random_space(&mut rng, n)?;
        let rho = random_cut_combination(&mut rng, &space, 4, 4)?;
        let eps = SANDWICH_EPSILONS[t % SANDWICH_EPSILONS.len()];
        let lower = eps_entropy_packing_lower(&rho, eps)?.lower_cells;
        let exact = eps_entropy_exact(&rho, eps, &exact_opts())?;
        let upper = eps_entropy_greedy_upper(&rho, eps)?.upper_cells;
        let witness_ok = exact
            .witness
            .as_ref()
            .is_some_and(|w| w.validate(&rho, eps).is_ok() && w.cells.len() == exact.upper_cells);
        tight += usize::from(lower == upper);
        report.check(
            exact.exact && lower <= exact.upper_cells && exact.upper_cells <= upper && witness_ok,
            || format!("trial {t}: N = {n}, ε = {eps}: {lower} ≤ {} ≤ {upper}, witness ok = {witness_ok}", exact.upper_cells),
        );
    }
    report.note = format!("bracket already tight on {tight} instances");
    Ok(report)
}

/// For `ρ̃ = Σ α_i ρ_i` with `ρ_i ≤ 1`: some `m` has `H_{2√ε}(ρ_m) ≤ H_ε(ρ̃)`.
pub fn lemma_lowerbound_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = seeded_rng(seed);
    let mut report = SuiteReport::new("mixture_lower_bound");
    let opts = exact_opts();
    for t in 0..trials {
        let n = rng.gen_range(2..=12);
        let k = rng.gen_range(1..=4);
        let space = random_space(&mut rng, n)?;
        let parts: Vec<Semimetric> = (0..k)
            .map(|_| random_cut_combination(&mut rng, &space, 2, 4))
            .collect::<Result<_>>()?;
        let refs: Vec<&Semimetric> = parts.iter().collect();
        let mix = Semimetric::combine(&random_weights(&mut rng, k), &refs)?;
        // 2√ε must stay in (0, 1]
        let eps = rng.gen_range(0.01..=0.25);
        let mixed = eps_entropy_exact(&mix, eps, &opts)?.upper_cells;
        let best = parts
            .iter()
            .map(|r| eps_entropy_exact(r, 2.0 * eps.sqrt(), &opts).map(|h| h.upper_cells))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .expect("k ≥ 1");
        report.check(best <= mixed, || {
            format!("trial {t}: N = {n}, k = {k}, ε = {eps}: min_m k(ρ_m) = {best} > k(ρ̃) = {mixed}")
        });
    }
    Ok(report)
}

/// `H(ξ)/k ≤ H_ε(ρ)/k + 2ε log m − ε log ε − (1−ε) log(1−ε) + 1/k` for
/// `ρ` the average of the cut semimetrics of `k` partitions with at most `m`
/// cells and `ξ` their common refinement (logs base 2).
pub fn lemma_partitions_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = seeded_rng(seed);
    let mut report = SuiteReport::new("partition_estimate");
    let opts = exact_opts();
    let mut min_slack = f64::INFINITY;
    for t in 0..trials {
        let n = rng.gen_range(2..=12);
        let k = rng.gen_range(1..=4);
        let space = random_space(&mut rng, n)?;
        let parts: Vec<Partition> = (0..k)
            .map(|_| random_partition(&mut rng, &space, 4))
            .collect::<Result<_>>()?;
        let cuts: Vec<Semimetric> = parts.iter().map(Semimetric::cut).collect();
        let refs: Vec<&Semimetric> = cuts.iter().collect();
        let rho = Semimetric::combine(&vec![1.0 / k as f64; k], &refs)?;
        let eps = rng.gen_range(0.01..0.5);
        let m = parts.iter().map(Partition::cell_count).max().expect("k ≥ 1") as f64;
        let xi = refine(&parts.iter().collect::<Vec<_>>())?;
        let kf = k as f64;
        let lhs = xi.shannon_entropy() / kf;
        let h = eps_entropy_exact(&rho, eps, &opts)?.upper_bits;
        let rhs = h / kf + 2.0 * eps * m.log2() - eps * eps.log2() - (1.0 - eps) * (1.0 - eps).log2() + 1.0 / kf;
        min_slack = min_slack.min(rhs - lhs);
        report.check(lhs <= rhs + 1e-12, || {
            format!("trial {t}: N = {n}, k = {k}, m = {m}, ε = {eps}: {lhs} > {rhs}")
        });
    }
    report.note = format!("smallest slack rhs − lhs = {}", fmt_f64(min_slack));
    Ok(report)
}

/// Pairs with `‖ρ₁ − ρ₂‖_m < ε²/32`: the cell counts satisfy
/// `k_ε(ρ₁) ≤ k_{ε/4}(ρ₂)`. Strictness is only tallied.
pub fn lemma_mnorm_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = seeded_rng(seed);
    let mut report = SuiteReport::new("mnorm_stability");
    let opts = exact_opts();
    let mut strict = 0;
    let mut comparable = 0;
    while report.trials < trials {
        let n = rng.gen_range(2..=8);
        let space = random_space(&mut rng, n)?;
        let rho1 = random_cut_combination(&mut rng, &space, 3, 4)?;
        let sigma = random_cut_combination(&mut rng, &space, 3, 4)?;
        let eps: f64 = rng.gen_range(0.05..=1.0);
        let bound = eps * eps / 32.0;
        // ρ₁ − ρ₂ = t (ρ₁ − σ) and the m-norm is homogeneous
        let full = m_norm(&space, &rho1.difference(&sigma)?, M_NORM_CAP)?;
        let t = if full > 0.0 {
            (rng.gen_range(0.1..0.99) * bound / full).min(0.99)
        } else {
            rng.gen_range(0.01..0.99)
        };
        let rho2 = Semimetric::combine(&[1.0 - t, t], &[&rho1, &sigma])?;
        let dist = m_norm(&space, &rho1.difference(&rho2)?, M_NORM_CAP)?;
        if dist + 1e-8 >= bound {
            continue;
        }
        let k1 = eps_entropy_exact(&rho1, eps, &opts)?.upper_cells;
        let k2 = eps_entropy_exact(&rho2, eps / 4.0, &opts)?.upper_cells;
        if k2 > 1 {
            comparable += 1;
            strict += usize::from(k1 < k2);
        }
        let trial = report.trials;
        report.check(k1 <= k2, || {
            format!("trial {trial}: N = {n}, ε = {eps}, ‖ρ₁−ρ₂‖_m = {dist}: k₁ = {k1} > k₂ = {k2}")
        });
    }
    report.note = format!("strict k₁ < k₂ on {strict} of {comparable} pairs with k₂ > 1");
    Ok(report)
}

fn random_group(rng: &mut ChaCha8Rng, sl2: &Arc<FiniteGroup>) -> Result<Arc<FiniteGroup>> {
    Ok(match rng.gen_range(0..3) {
        0 => Arc::new(FiniteGroup::cyclic(rng.gen_range(1..=8))?),
        1 => Arc::new(FiniteGroup::product(
            Arc::new(FiniteGroup::cyclic(rng.gen_range(2..=4))?),
            Arc::new(FiniteGroup::cyclic(rng.gen_range(2..=4))?),
        )?),
        _ => sl2.clone(),
    })
}

/// `r` disjoint copies of the left-regular action, copy `j` carrying the
/// mass `w_j / (|G| Σw)` on each of its atoms.
fn random_action(rng: &mut ChaCha8Rng, group: Arc<FiniteGroup>) -> Result<ActionTable> {
    let order = group.order();
    let copies = if order > 12 { 1 } else { rng.gen_range(1..=3) };
    let w: Vec<u64> = (0..copies).map(|_| rng.gen_range(1..=5)).collect();
    let total: u64 = w.iter().sum::<u64>() * order as u64;
    let masses = (0..copies * order).map(|x| Ratio::new(w[x / order], total)).collect();
    let space = FiniteProbSpace::from_ratios(masses)?;
    let perms = group
        .elements()
        .map(|g| (0..copies * order).map(|x| (x / order) * order + group.mul(g, x % order)).collect())
        .collect();
    ActionTable::from_perms(group, space, perms)
}

/// L¹ preservation by averaging, the block decomposition of an average, the
/// half-mass comparison and `(gh)⁻¹ρ = h⁻¹(g⁻¹ρ)` on random actions.
pub fn averaging_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = seeded_rng(seed);
    let mut report = SuiteReport::new("averaging_identities");
    let tower = FieldTower::new(3, 0)?;
    let sl2 = Arc::new(sl2_enumerate(&tower, 0, SL2_ENUMERATION_CAP)?);
    let tol = AVERAGING_TOLERANCE;
    for t in 0..trials {
        let group = random_group(&mut rng, &sl2)?;
        let action = random_action(&mut rng, group.clone())?;
        let space = action.space().clone();
        let rho = random_cut_combination(&mut rng, &space, 3, 4)?;
        let elements: Vec<usize> = group.elements().collect();
        let size = rng.gen_range(1..=elements.len());
        let mut window: Vec<usize> = elements.choose_multiple(&mut rng, size).copied().collect();
        window.sort_unstable();

        let avg = folner_average(&action, &window, &rho)?;
        let l1_gap = (avg.l1_norm() - rho.l1_norm()).abs();

        // F̃ ⊆ F of at least half the size, cut into random blocks
        let keep = rng.gen_range(window.len().div_ceil(2)..=window.len());
        let mut sub: Vec<usize> = window.choose_multiple(&mut rng, keep).copied().collect();
        sub.sort_unstable();
        let nblocks = rng.gen_range(1..=sub.len().min(4));
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &g) in sub.iter().enumerate() {
            let b = if i < nblocks { i } else { rng.gen_range(0..nblocks) };
            blocks[b].push(g);
        }
        let sub_avg = folner_average(&action, &sub, &rho)?;
        let mut decomposed = vec![0.0; space.len() * space.len()];
        for b in &blocks {
            let part = folner_average(&action, b, &rho)?;
            let w = b.len() as f64 / sub.len() as f64;
            for (acc, v) in decomposed.iter_mut().zip(part.as_slice()) {
                *acc += w * v;
            }
        }
        let decomposition_gap = sub_avg
            .as_slice()
            .iter()
            .zip(&decomposed)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let half_mass = sub_avg
            .as_slice()
            .iter()
            .zip(avg.as_slice())
            .all(|(s, f)| *s <= 2.0 * f + tol);

        let (g, h) = (rng.gen_range(0..group.order()), rng.gen_range(0..group.order()));
        let composed = translate_semimetric(&action, h, &translate_semimetric(&action, g, &rho)?)?;
        let direct = translate_semimetric(&action, group.mul(g, h), &rho)?;
        let translation_gap = composed.max_abs_diff(&direct);

        report.check(
            l1_gap <= tol && decomposition_gap <= tol && half_mass && translation_gap == 0.0,
            || {
                format!(
                    "trial {t} on {}: L¹ gap {l1_gap}, decomposition gap {decomposition_gap}, half-mass {half_mass}, translation gap {translation_gap}",
                    group.label()
                )
            },
        );
    }
    Ok(report)
}

fn coloring_ok<G: GroupLaw>(group: &G, window: &[G::Elem], forbidden: &[G::Elem]) -> Result<bool> {
    let graph = difference_graph(group, window, forbidden)?;
    let colors = greedy_coloring(&graph);
    let count = colors.iter().max().map_or(0, |c| c + 1);
    let family = separated_family(group, window, forbidden)?;
    Ok(is_proper(&graph, &colors)
        && graph.max_degree() <= 2 * forbidden.len()
        && count <= 2 * forbidden.len() + 1
        && family.verify(group).is_ok())
}

fn distinct<T: Ord + Copy>(mut v: Vec<T>) -> Vec<T> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Greedy colorings of `Γ_K` on random windows of `Z`, `Z²` and
/// `SL(2, F_3)`: proper, at most `2|K| + 1` colors, separated blocks.
pub fn coloring_suite(trials_per_group: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = seeded_rng(seed);
    let mut report = SuiteReport::new("coloring");
    let z1 = IntegerLattice::<1>;
    let z2 = IntegerLattice::<2>;
    let tower = FieldTower::new(3, 0)?;
    let sl2 = sl2_enumerate(&tower, 0, SL2_ENUMERATION_CAP)?;
    for t in 0..trials_per_group {
        let window: Vec<[i64; 1]> = (0..rng.gen_range(1..=30)).map(|_| [rng.gen_range(-20..=20)]).collect();
        let k: Vec<[i64; 1]> = distinct((0..rng.gen_range(0..=4)).map(|_| [rng.gen_range(1..=6) * [-1, 1][rng.gen_range(0..2)]]).collect());
        let ok = coloring_ok(&z1, &window, &k)?;
        report.check(ok, || format!("Z trial {t}: K = {k:?}"));

        let window: Vec<[i64; 2]> = (0..rng.gen_range(1..=40))
            .map(|_| [rng.gen_range(-6..=6), rng.gen_range(-6..=6)])
            .collect();
        let k: Vec<[i64; 2]> = distinct(
            (0..rng.gen_range(0..=5))
                .map(|_| [rng.gen_range(-3..=3), rng.gen_range(-3..=3)])
                .filter(|v| *v != [0, 0])
                .collect(),
        );
        let ok = coloring_ok(&z2, &window, &k)?;
        report.check(ok, || format!("Z² trial {t}: K = {k:?}"));

        let all: Vec<usize> = sl2.elements().collect();
        let others: Vec<usize> = sl2.elements().filter(|&g| g != sl2.identity()).collect();
        let (w, kk) = (rng.gen_range(1..=24), rng.gen_range(0..=5));
        let window: Vec<usize> = all.choose_multiple(&mut rng, w).copied().collect();
        let k: Vec<usize> = others.choose_multiple(&mut rng, kk).copied().collect();
        let ok = coloring_ok(&sl2, &window, &k)?;
        report.check(ok, || format!("SL(2,F_3) trial {t}: K = {k:?}"));
    }
    Ok(report)
}

/// Small groups used by the Bernoulli suite, all of order at most 10.
fn small_groups() -> Result<Vec<Arc<FiniteGroup>>> {
    let mut groups: Vec<Arc<FiniteGroup>> = (1..=10)
        .map(|n| FiniteGroup::cyclic(n).map(Arc::new))
        .collect::<Result<_>>()?;
    let c2 = Arc::new(FiniteGroup::cyclic(2)?);
    let c3 = Arc::new(FiniteGroup::cyclic(3)?);
    let c4 = Arc::new(FiniteGroup::cyclic(4)?);
    let v4 = Arc::new(FiniteGroup::product(c2.clone(), c2.clone())?);
    groups.push(v4.clone());
    groups.push(Arc::new(FiniteGroup::product(v4, c2.clone())?));
    groups.push(Arc::new(FiniteGroup::product(c2, c4)?));
    groups.push(Arc::new(FiniteGroup::product(c3.clone(), c3)?));
    Ok(groups)
}

/// For the binary Bernoulli shift of each small group and every `P ⊆ G`:
/// `⋁_{g ∈ P} g⁻¹ξ` has `2^{|P|}` cells of exactly equal mass, i.e.
/// entropy exactly `|P|` bits.
pub fn bernoulli_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("bernoulli_additivity");
    let mut subsets = 0usize;
    for group in small_groups()? {
        let shift = bernoulli_shift(group.clone(), 2, 1 << 10)?;
        let order = group.order();
        let mut failures = String::new();
        let mut ok = true;
        for mask in 1u32..(1 << order) {
            let p: Vec<usize> = (0..order).filter(|&g| mask >> g & 1 == 1).collect();
            let refined = refined_orbit_partition(&shift.action, &p, &shift.coordinate)?;
            let cells = 1usize << p.len();
            let target = Ratio::new(1, cells as u64);
            let exact = refined
                .exact_cell_masses()
                .is_some_and(|m| m.len() == cells && m.iter().all(|&c| c == target));
            let h = refined.shannon_entropy();
            subsets += 1;
            if !(exact && h == p.len() as f64) {
                ok = false;
                if failures.is_empty() {
                    let _ = write!(failures, "P = {p:?}: {} cells, H = {h}", refined.cell_count());
                }
            }
        }
        report.check(ok, || format!("{}: {failures}", group.label()));
    }
    report.note = format!("{subsets} subsets checked");
    Ok(report)
}
