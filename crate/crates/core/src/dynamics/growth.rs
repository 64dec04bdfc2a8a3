//! Finite-horizon comparison of two growth profiles.
//!
//! The order on scaling-entropy functions is asymptotic and cannot be decided
//! from finitely many values; this report only tabulates ratios and is never
//! used as evidence inside property checks.

use std::collections::BTreeMap;

use crate::table::{fmt_f64, CsvTable};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfilePoint {
    pub n: usize,
    pub epsilon: f64,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthRow {
    pub epsilon: f64,
    pub delta: f64,
    pub n: usize,
    pub ratio: f64,
}

/// For each ε of the first profile: the δ of the second profile with the
/// smallest worst-case ratio, and that ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthSummary {
    pub epsilon: f64,
    pub best_delta: f64,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub label: &'static str,
    pub rows: Vec<GrowthRow>,
    pub summary: Vec<GrowthSummary>,
}

impl GrowthReport {
    pub const LABEL: &'static str = "HEURISTIC: finite-horizon ratios, not an asymptotic comparison";

    pub fn table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["epsilon", "delta", "n", "ratio"]);
        for r in &self.rows {
            t.push(vec![fmt_f64(r.epsilon), fmt_f64(r.delta), r.n.to_string(), fmt_f64(r.ratio)]);
        }
        t
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

type Grid = BTreeMap<u64, BTreeMap<usize, f64>>;

fn grid(profile: &[ProfilePoint]) -> Grid {
    let mut g: Grid = BTreeMap::new();
    for p in profile {
        g.entry(p.epsilon.to_bits()).or_default().insert(p.n, p.value);
    }
    g
}

/// Ratios `A(n, ε) / B(n, δ)` over the common `n` range, for every pair of
/// grid values ε (of `a`) and δ (of `b`).
pub fn growth_compare(a: &[ProfilePoint], b: &[ProfilePoint]) -> Result<GrowthReport> {
    let (ga, gb) = (grid(a), grid(b));
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let mut eps_keys: Vec<u64> = ga.keys().copied().collect();
    eps_keys.sort_by(|x, y| f64::from_bits(*x).total_cmp(&f64::from_bits(*y)));
    let mut delta_keys: Vec<u64> = gb.keys().copied().collect();
    delta_keys.sort_by(|x, y| f64::from_bits(*x).total_cmp(&f64::from_bits(*y)));
    for &ek in &eps_keys {
        let mut best: Option<(f64, f64)> = None;
        for &dk in &delta_keys {
            let (va, vb) = (&ga[&ek], &gb[&dk]);
            let mut worst = f64::NEG_INFINITY;
            for (&n, &x) in va {
                if let Some(&y) = vb.get(&n) {
                    let r = ratio(x, y);
                    worst = worst.max(r);
                    rows.push(GrowthRow {
                        epsilon: f64::from_bits(ek),
                        delta: f64::from_bits(dk),
                        n,
                        ratio: r,
                    });
                }
            }
            if worst > f64::NEG_INFINITY && best.is_none_or(|(_, w)| worst < w) {
                best = Some((f64::from_bits(dk), worst));
            }
        }
        if let Some((best_delta, max_ratio)) = best {
            summary.push(GrowthSummary {
                epsilon: f64::from_bits(ek),
                best_delta,
                max_ratio,
            });
        }
    }
    if rows.is_empty() {
        return Err(Error::invalid("profiles share no n values"));
    }
    Ok(GrowthReport {
        label: GrowthReport::LABEL,
        rows,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(f: impl Fn(usize) -> f64) -> Vec<ProfilePoint> {
        (1..=8)
            .map(|n| ProfilePoint {
                n,
                epsilon: 0.1,
                value: f(n),
            })
            .collect()
    }

    #[test]
    fn identical_profiles() {
        let a = profile(|n| n as f64);
        let r = growth_compare(&a, &a).unwrap();
        assert!(r.rows.iter().all(|row| row.ratio == 1.0));
        assert_eq!(r.summary[0].max_ratio, 1.0);
        assert!(r.label.starts_with("HEURISTIC"));
    }

    #[test]
    fn doubled_profile() {
        let a = profile(|n| n as f64 + 1.0);
        let b = profile(|n| 2.0 * (n as f64 + 1.0));
        let r = growth_compare(&a, &b).unwrap();
        assert!(r.rows.iter().all(|row| row.ratio == 0.5));
    }

    #[test]
    fn bounded_against_logarithmic() {
        let a = profile(|_| 1.0);
        let b = profile(|n| ((n + 1) as f64).log2());
        let r = growth_compare(&a, &b).unwrap();
        let ratios: Vec<f64> = r.rows.iter().map(|row| row.ratio).collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]));
        assert!(*ratios.last().unwrap() < 0.35);
    }

    #[test]
    fn disjoint_ranges() {
        let a = profile(|n| n as f64);
        let b: Vec<ProfilePoint> = a.iter().map(|p| ProfilePoint { n: p.n + 100, ..*p }).collect();
        assert!(growth_compare(&a, &b).is_err());
    }
}
