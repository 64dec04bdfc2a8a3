//! ε-entropy of a semimetric on a finite probability space.
//!
//! `H_ε(X, μ, ρ) = log₂ k` for the least `k` such that the atoms split into an
//! exceptional set `X_0` with `μ(X_0) < ε` and cells `X_1 … X_k` each of
//! `ρ`-diameter `< ε`. Both inequalities are strict; every comparison keeps a
//! margin ([`MASS_TOLERANCE`](crate::spaces::MASS_TOLERANCE), [`METRIC_TOLERANCE`]) so that float ties such as
//! `0.1 + 0.1 + 0.1` versus `0.3` resolve to "not below".

mod bounds;
mod exact;

use std::io::Write;

pub use bounds::{eps_entropy_greedy_upper, eps_entropy_packing_lower};
pub use exact::{eps_entropy_exact, EXACT_ATOM_CAP};

use crate::spaces::mass_below;
use crate::spaces::{Semimetric, METRIC_TOLERANCE};
use crate::{Error, Result};

/// `d < ε` with the float margin.
#[inline]
pub(crate) fn dist_below(d: f64, eps: f64) -> bool {
    d < eps - METRIC_TOLERANCE
}

/// `log₂ k`, with `H = 0` for `k ≤ 1`.
pub fn bits(cells: usize) -> f64 {
    if cells <= 1 {
        0.0
    } else {
        (cells as f64).log2()
    }
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("ε = {eps} is outside (0, 1]")))
    }
}

/// An admissible decomposition `X_0, X_1 … X_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub exceptional: Vec<usize>,
    pub cells: Vec<Vec<usize>>,
}

impl Decomposition {
    /// Checks that the sets partition the atoms, `μ(X_0) < ε` and every cell
    /// has diameter `< ε`.
    pub fn validate(&self, rho: &Semimetric, eps: f64) -> Result<()> {
        let n = rho.len();
        let mut seen = vec![false; n];
        for &a in self.exceptional.iter().chain(self.cells.iter().flatten()) {
            if a >= n || seen[a] {
                return Err(Error::invalid(format!("atom {a} is missing or repeated")));
            }
            seen[a] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("decomposition does not cover every atom"));
        }
        let x0 = rho.space().mass_of(self.exceptional.iter().copied());
        if !mass_below(x0, eps) {
            return Err(Error::invalid(format!("μ(X_0) = {x0} is not below ε = {eps}")));
        }
        for (i, cell) in self.cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::invalid(format!("cell {} is empty", i + 1)));
            }
            let d = rho.diameter_of(cell);
            if !dist_below(d, eps) {
                return Err(Error::invalid(format!("cell {} has diameter {d} ≥ ε", i + 1)));
            }
        }
        Ok(())
    }

    /// Per-atom cell id, `0` for the exceptional set and `1..=k` for cells.
    pub fn cell_ids(&self, atoms: usize) -> Vec<usize> {
        let mut ids = vec![0; atoms];
        for (i, cell) in self.cells.iter().enumerate() {
            for &a in cell {
                ids[a] = i + 1;
            }
        }
        ids
    }

    /// `atom,cell` rows, cell 0 being the exceptional set.
    pub fn write_csv<W: Write>(&self, out: W, atoms: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["atom", "cell"])?;
        for (a, c) in self.cell_ids(atoms).iter().enumerate() {
            w.write_record([a.to_string(), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Bracket (or exact value) of `H_ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsEntropyResult {
    pub epsilon: f64,
    /// Lower bound on the minimal cell count.
    pub lower_cells: usize,
    /// Cell count of the best decomposition found.
    pub upper_cells: usize,
    pub lower_bits: f64,
    pub upper_bits: f64,
    pub exact: bool,
    pub witness: Option<Decomposition>,
}

impl EpsEntropyResult {
    pub(crate) fn new(
        epsilon: f64,
        lower_cells: usize,
        upper_cells: usize,
        witness: Option<Decomposition>,
    ) -> Self {
        debug_assert!(lower_cells <= upper_cells);
        EpsEntropyResult {
            epsilon,
            lower_cells,
            upper_cells,
            lower_bits: bits(lower_cells),
            upper_bits: bits(upper_cells),
            exact: lower_cells == upper_cells,
            witness,
        }
    }

    /// The exact value, when known.
    pub fn value(&self) -> Option<f64> {
        self.exact.then_some(self.upper_bits)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EntropyOptions {
    /// Largest space handed to the exact solver.
    pub exact_cap: usize,
    /// Search-node budget for the exact solver; exhausting it yields a bracket.
    pub node_limit: u64,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        EntropyOptions {
            exact_cap: EXACT_ATOM_CAP,
            node_limit: 5_000_000,
        }
    }
}

/// Exact value when the space is within `opts.exact_cap`, otherwise the
/// packing/greedy bracket.
pub fn eps_entropy(rho: &Semimetric, eps: f64, opts: &EntropyOptions) -> Result<EpsEntropyResult> {
    if rho.len() <= opts.exact_cap {
        eps_entropy_exact(rho, eps, opts)
    } else {
        let lower = eps_entropy_packing_lower(rho, eps)?;
        let upper = eps_entropy_greedy_upper(rho, eps)?;
        Ok(EpsEntropyResult::new(
            eps,
            lower.lower_cells,
            upper.upper_cells.max(lower.lower_cells),
            upper.witness,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::FiniteProbSpace;

    #[test]
    fn bits_convention() {
        assert_eq!(bits(0), 0.0);
        assert_eq!(bits(1), 0.0);
        assert_eq!(bits(8), 3.0);
    }

    #[test]
    fn epsilon_range() {
        assert!(check_epsilon(0.0).is_err());
        assert!(check_epsilon(1.5).is_err());
        assert!(check_epsilon(1.0).is_ok());
    }

    #[test]
    fn witness_validation_and_csv() {
        let s = FiniteProbSpace::uniform(4).unwrap();
        let rho = Semimetric::discrete(s);
        let ok = Decomposition {
            exceptional: vec![3],
            cells: vec![vec![0], vec![1], vec![2]],
        };
        ok.validate(&rho, 0.3).unwrap();
        assert!(ok.validate(&rho, 0.25).is_err());
        let wide = Decomposition {
            exceptional: vec![],
            cells: vec![vec![0, 1], vec![2, 3]],
        };
        assert!(wide.validate(&rho, 1.0).is_err());
        let mut buf = Vec::new();
        ok.write_csv(&mut buf, 4).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "atom,cell\n0,1\n1,2\n2,3\n3,0\n");
    }
}
