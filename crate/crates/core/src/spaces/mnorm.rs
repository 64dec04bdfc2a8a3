use minilp::{ComparisonOp, OptimizationDirection, Problem};

use super::prob::FiniteProbSpace;
use super::semimetric::Kernel;
use crate::{Error, Result};

/// Default atom cap for the m-norm linear program (constraints grow as `N³`).
pub const M_NORM_CAP: usize = 16;

/// Feasibility tolerance accepted on the solver's output.
const LP_TOLERANCE: f64 = 1e-8;

/// `‖f‖_m = min { ‖ρ‖_{L¹(μ²)} : ρ semimetric, ρ ≥ |f| }`.
///
/// The minimum is the optimum of a linear program over the `N(N−1)/2` pair
/// distances with every triangle inequality as a constraint. Variables are
/// shifted to `s = ρ − |f| ≥ 0`.
pub fn m_norm(space: &FiniteProbSpace, f: &Kernel, cap: usize) -> Result<f64> {
    let n = space.len();
    if f.len() != n {
        return Err(Error::Mismatch("kernel and space sizes"));
    }
    if n > cap {
        return Err(Error::budget("m-norm atoms", n as u64, cap as u64));
    }
    if !space.strictly_positive() {
        return Err(Error::invalid("m-norm needs strictly positive masses"));
    }
    if n < 2 {
        return Ok(0.0);
    }
    let mu = space.masses();
    let abs = |x: usize, y: usize| f.get(x, y).abs();

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let mut var = vec![None; n * n];
    let mut constant = 0.0;
    for x in 0..n {
        for y in (x + 1)..n {
            let w = 2.0 * mu[x] * mu[y];
            constant += w * abs(x, y);
            let v = lp.add_var(w, (0.0, f64::INFINITY));
            var[x * n + y] = Some(v);
            var[y * n + x] = Some(v);
        }
    }
    let v = |x: usize, y: usize| var[x * n + y].expect("off-diagonal pair");
    // ρ(x,z) ≤ ρ(x,y) + ρ(y,z) for each unordered {x,z} and middle point y
    for x in 0..n {
        for z in (x + 1)..n {
            for y in (0..n).filter(|&y| y != x && y != z) {
                let rhs = abs(x, y) + abs(y, z) - abs(x, z);
                lp.add_constraint(
                    [(v(x, z), 1.0), (v(x, y), -1.0), (v(y, z), -1.0)],
                    ComparisonOp::Le,
                    rhs,
                );
            }
        }
    }
    let solution = lp.solve().map_err(|e| match e {
        // the constant max|f| matrix is always feasible
        minilp::Error::Infeasible => Error::Solver("m-norm LP reported infeasible".into()),
        minilp::Error::Unbounded => Error::Solver("m-norm LP reported unbounded".into()),
    })?;

    let rho = |x: usize, y: usize| {
        if x == y {
            0.0
        } else {
            abs(x, y) + solution[v(x, y)]
        }
    };
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if rho(x, z) > rho(x, y) + rho(y, z) + LP_TOLERANCE {
                    return Err(Error::Solver(format!(
                        "m-norm optimum violates a triangle inequality at ({x},{y},{z})"
                    )));
                }
            }
        }
    }
    Ok(constant + solution.objective())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Partition, Semimetric};
    use proptest::prelude::*;

    #[test]
    fn zero_kernel() {
        let s = FiniteProbSpace::uniform(5).unwrap();
        assert!(m_norm(&s, &Kernel::zero(5), M_NORM_CAP).unwrap().abs() < 1e-12);
    }

    #[test]
    fn semimetric_is_its_own_optimum() {
        let s = FiniteProbSpace::from_masses(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a = Semimetric::cut(&Partition::new(s.clone(), &[0, 0, 1, 1]).unwrap());
        let b = Semimetric::cut(&Partition::new(s.clone(), &[0, 1, 1, 2]).unwrap());
        let rho = Semimetric::combine(&[0.3, 0.7], &[&a, &b]).unwrap();
        let m = m_norm(&s, &rho.kernel(), M_NORM_CAP).unwrap();
        assert!((m - rho.l1_norm()).abs() < 1e-9);
    }

    /// Grid oracle over `(ρ12, ρ13, ρ23) ∈ [0, 1]³` at step 10⁻³.
    fn grid_min(f12: f64, f13: f64, f23: f64) -> f64 {
        let w = 2.0 / 9.0;
        let mut best = f64::INFINITY;
        for i in 0..=1000 {
            let r23 = i as f64 / 1000.0;
            if r23 < f23 {
                continue;
            }
            for j in 0..=1000 {
                let r12 = j as f64 / 1000.0;
                if r12 < f12 {
                    continue;
                }
                for k in 0..=1000 {
                    let r13 = k as f64 / 1000.0;
                    if r13 < f13 {
                        continue;
                    }
                    let feasible = r23 <= r12 + r13 + 1e-12
                        && r12 <= r13 + r23 + 1e-12
                        && r13 <= r12 + r23 + 1e-12;
                    if feasible {
                        best = best.min(w * (r12 + r13 + r23));
                    }
                }
            }
        }
        best
    }

    #[test]
    fn three_atom_tradeoff_matches_grid() {
        let s = FiniteProbSpace::uniform(3).unwrap();
        let f = Kernel::new(3, vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        let lp = m_norm(&s, &f, M_NORM_CAP).unwrap();
        let grid = grid_min(0.0, 0.0, 1.0);
        assert!((grid - 4.0 / 9.0).abs() < 1e-12);
        assert!((lp - grid).abs() < 1e-8, "lp {lp} grid {grid}");
    }

    #[test]
    fn caps_and_preconditions() {
        let s = FiniteProbSpace::uniform(17).unwrap();
        assert!(m_norm(&s, &Kernel::zero(17), M_NORM_CAP).unwrap_err().is_budget());
        let s = FiniteProbSpace::from_masses(vec![0.0, 1.0]).unwrap();
        assert!(m_norm(&s, &Kernel::zero(2), M_NORM_CAP).is_err());
    }

    fn kernel_strategy() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>)> {
        (2usize..7).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                proptest::collection::vec(-1.0f64..1.0, pairs),
                proptest::collection::vec(-1.0f64..1.0, pairs),
            )
        })
    }

    fn kernel_from_pairs(n: usize, vals: &[f64]) -> Kernel {
        let mut data = vec![0.0; n * n];
        let mut it = vals.iter();
        for x in 0..n {
            for y in (x + 1)..n {
                let v = *it.next().unwrap();
                data[x * n + y] = v;
                data[y * n + x] = v;
            }
        }
        Kernel::new(n, data).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn seminorm_on_samples((n, fv, gv) in kernel_strategy(), c in -3.0f64..3.0) {
            let s = FiniteProbSpace::uniform(n).unwrap();
            let f = kernel_from_pairs(n, &fv);
            let g = kernel_from_pairs(n, &gv);
            let mf = m_norm(&s, &f, M_NORM_CAP).unwrap();
            let mg = m_norm(&s, &g, M_NORM_CAP).unwrap();
            let mcf = m_norm(&s, &f.scaled(c), M_NORM_CAP).unwrap();
            let mfg = m_norm(&s, &f.add(&g).unwrap(), M_NORM_CAP).unwrap();
            prop_assert!((mcf - c.abs() * mf).abs() < 1e-6);
            prop_assert!(mfg <= mf + mg + 1e-6);
            // the constant max|f| completion is feasible
            let completion = f.max_abs() * (1.0 - 1.0 / n as f64);
            prop_assert!(mf <= completion + 1e-6);
            prop_assert!(mf >= -1e-12);
        }
    }
}
