use rayon::prelude::*;

use super::{ActionTable, FolnerFamily};
use crate::entropy::{eps_entropy, EntropyOptions, EpsEntropyResult};
use crate::spaces::{same_space, Semimetric};
use crate::table::{fmt_f64, CsvTable};
use crate::{Error, Result};

/// `(g⁻¹ρ)(x, y) = ρ(g·x, g·y)`.
pub fn translate_semimetric(action: &ActionTable, g: usize, rho: &Semimetric) -> Result<Semimetric> {
    check_space(action, rho)?;
    let n = rho.len();
    let perm = action.perm(g);
    let data = (0..n * n).map(|i| rho.get(perm[i / n], perm[i % n])).collect();
    Ok(Semimetric::from_raw(rho.space().clone(), data))
}

fn check_space(action: &ActionTable, rho: &Semimetric) -> Result<()> {
    if same_space(action.space(), rho.space()) {
        Ok(())
    } else {
        Err(Error::Mismatch("probability spaces"))
    }
}

/// `(1/|F|) Σ_{g ∈ F} ρ(g·x, g·y)`.
pub fn folner_average(action: &ActionTable, window: &[usize], rho: &Semimetric) -> Result<Semimetric> {
    check_space(action, rho)?;
    if window.is_empty() {
        return Err(Error::invalid("cannot average over an empty window"));
    }
    let n = rho.len();
    let perms: Vec<Vec<usize>> = window.iter().map(|&g| action.perm(g)).collect();
    let scale = 1.0 / window.len() as f64;
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(x, row)| {
        for perm in &perms {
            let src = rho.row(perm[x]);
            for (y, acc) in row.iter_mut().enumerate() {
                *acc += src[perm[y]];
            }
        }
        for v in row.iter_mut() {
            *v *= scale;
        }
    });
    Ok(Semimetric::from_raw(rho.space().clone(), data))
}

/// `Φ_ρ(n, ε) = H_ε(X, μ, G^n_av ρ)`, exact or bracketed per `opts`.
pub fn phi(
    action: &ActionTable,
    family: &FolnerFamily,
    rho: &Semimetric,
    n: usize,
    eps: f64,
    opts: &EntropyOptions,
) -> Result<EpsEntropyResult> {
    let avg = folner_average(action, family.window(n)?, rho)?;
    eps_entropy(&avg, eps, opts)
}

/// One row of a Φ profile.
#[derive(Clone, Debug)]
pub struct PhiRow {
    pub n: usize,
    pub window_size: usize,
    pub result: EpsEntropyResult,
}

impl PhiRow {
    pub const HEADER: [&'static str; 6] = ["n", "F_n_size", "epsilon", "lower_bits", "upper_bits", "exact"];

    pub fn table(rows: &[PhiRow]) -> CsvTable {
        let mut t = CsvTable::new(&Self::HEADER);
        for r in rows {
            t.push(vec![
                r.n.to_string(),
                r.window_size.to_string(),
                fmt_f64(r.result.epsilon),
                fmt_f64(r.result.lower_bits),
                fmt_f64(r.result.upper_bits),
                r.result.exact.to_string(),
            ]);
        }
        t
    }
}

/// `Φ_ρ(n, ε)` over `n = 1..=horizon` and the given ε grid, rows ordered by
/// `(n, ε)` whatever the evaluation order.
pub fn phi_profile(
    action: &ActionTable,
    family: &FolnerFamily,
    rho: &Semimetric,
    horizon: usize,
    eps_grid: &[f64],
    opts: &EntropyOptions,
) -> Result<Vec<PhiRow>> {
    if horizon > family.len() {
        return Err(Error::invalid(format!(
            "horizon {horizon} exceeds the {} windows available",
            family.len()
        )));
    }
    let averages: Vec<Semimetric> = (1..=horizon)
        .map(|n| folner_average(action, family.window(n)?, rho))
        .collect::<Result<_>>()?;
    let grid: Vec<(usize, f64)> = (1..=horizon)
        .flat_map(|n| eps_grid.iter().map(move |&e| (n, e)))
        .collect();
    grid.par_iter()
        .map(|&(n, eps)| {
            Ok(PhiRow {
                n,
                window_size: family.window(n)?.len(),
                result: eps_entropy(&averages[n - 1], eps, opts)?,
            })
        })
        .collect()
}
