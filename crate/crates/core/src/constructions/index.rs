//! Selection of the forbidden-set index `i(n)` along a Følner family.

use crate::{Error, Result};

/// For windows of sizes `|F_n|`, a positive sequence `φ(n)` and the color
/// bounds `r_{K_0} ≤ r_{K_1} ≤ …` of a chain of forbidden sets, returns the
/// 0-based indices
///
/// `i(n) = max{ i : r_{K_i} ≤ √(|F_n| / φ(n)) }`
///
/// (0 when no index qualifies), so that `r_{K_{i(n)}} φ(n) / |F_n| ≤ (|F_n| / φ(n))^{-1/2}`.
/// The ratio `|F_n| / φ(n)` must be non-decreasing, which makes `i(n)`
/// non-decreasing and piecewise constant.
pub fn choose_index_sequence(sizes: &[usize], phi: &[f64], chain: &[usize]) -> Result<Vec<usize>> {
    if sizes.len() != phi.len() {
        return Err(Error::invalid("window sizes and φ must have the same length"));
    }
    if chain.is_empty() {
        return Err(Error::invalid("the forbidden-set chain is empty"));
    }
    if chain.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("chain bounds r_K must be non-decreasing"));
    }
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(sizes.len());
    for (n, (&size, &f)) in sizes.iter().zip(phi).enumerate() {
        if !(f > 0.0 && f.is_finite()) {
            return Err(Error::invalid(format!("φ({}) = {f} is not positive", n + 1)));
        }
        let ratio = size as f64 / f;
        if ratio < prev {
            return Err(Error::invalid(format!("|F_n|/φ(n) decreases at n = {}", n + 1)));
        }
        prev = ratio;
        let gap = ratio.sqrt();
        let i = chain.iter().rposition(|&r| r as f64 <= gap).unwrap_or(0);
        out.push(i);
    }
    Ok(out)
}
