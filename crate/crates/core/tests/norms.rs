//! m-norm versus L¹ norm, and seminorm properties of the LP m-norm.

use std::sync::Arc;

use num_rational::Ratio;
use proptest::prelude::*;
use scaling_entropy::spaces::{m_norm, FiniteProbSpace, Kernel, Partition, Semimetric, M_NORM_CAP};

fn space(weights: &[u64]) -> Arc<FiniteProbSpace> {
    let total: u64 = weights.iter().sum();
    FiniteProbSpace::from_ratios(weights.iter().map(|&w| Ratio::new(w, total)).collect()).unwrap()
}

/// Points on a line give a metric `|t_x − t_y|`.
fn line_metric(space: Arc<FiniteProbSpace>, points: &[f64]) -> Semimetric {
    Semimetric::from_fn(space, |x, y| (points[x] - points[y]).abs()).unwrap()
}

fn symmetric(n: usize, upper: &[f64]) -> Kernel {
    let mut data = vec![0.0; n * n];
    let mut k = 0;
    for x in 0..n {
        for y in (x + 1)..n {
            data[x * n + y] = upper[k];
            data[y * n + x] = upper[k];
            k += 1;
        }
    }
    Kernel::new(n, data).unwrap()
}

fn setup() -> impl Strategy<Value = (Vec<u64>, Vec<f64>, Vec<f64>)> {
    (2usize..=6).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            prop::collection::vec(1u64..=5, n),
            prop::collection::vec(-1.0f64..1.0, pairs),
            prop::collection::vec(-1.0f64..1.0, pairs),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn m_norm_of_a_semimetric_is_its_l1_norm(weights in prop::collection::vec(1u64..=5, 2..=7), pts in prop::collection::vec(0.0f64..1.0, 7), labels in prop::collection::vec(0u8..3, 7)) {
        let n = weights.len();
        let sp = space(&weights);
        let line = line_metric(sp.clone(), &pts[..n]);
        let cut = Semimetric::cut(&Partition::new(sp.clone(), &labels[..n]).unwrap());
        for rho in [line, cut] {
            let m = m_norm(&sp, &rho.kernel(), M_NORM_CAP).unwrap();
            prop_assert!((m - rho.l1_norm()).abs() <= 1e-6, "m = {m}, l1 = {}", rho.l1_norm());
        }
    }

    #[test]
    fn m_norm_is_a_seminorm((weights, f, g) in setup(), c in -3.0f64..3.0) {
        let n = weights.len();
        let sp = space(&weights);
        let (f, g) = (symmetric(n, &f), symmetric(n, &g));
        let mf = m_norm(&sp, &f, M_NORM_CAP).unwrap();
        let mg = m_norm(&sp, &g, M_NORM_CAP).unwrap();
        let mcf = m_norm(&sp, &f.scaled(c), M_NORM_CAP).unwrap();
        let msum = m_norm(&sp, &f.add(&g).unwrap(), M_NORM_CAP).unwrap();
        prop_assert!((mcf - c.abs() * mf).abs() <= 1e-6);
        prop_assert!(msum <= mf + mg + 1e-6);
        // the m-norm dominates the L¹ norm of |f|
        let l1: f64 = (0..n).flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| sp.mass(x) * sp.mass(y) * f.get(x, y).abs())
            .sum();
        prop_assert!(mf >= l1 - 1e-6);
    }

    #[test]
    fn cut_semimetrics_are_valid(weights in prop::collection::vec(1u64..=5, 1..=10), labels in prop::collection::vec(0u8..4, 10)) {
        let sp = space(&weights);
        let xi = Partition::new(sp.clone(), &labels[..weights.len()]).unwrap();
        prop_assert!(Semimetric::cut(&xi).validate().is_ok());
    }
}

#[test]
fn m_norm_sees_the_triangle_completion() {
    // |f| = 1 on one pair only: any dominating semimetric needs 1 ≤ ρ(0,2) + ρ(2,1)
    let sp = space(&[1, 1, 1]);
    let f = symmetric(3, &[1.0, 0.0, 0.0]);
    let m = m_norm(&sp, &f, M_NORM_CAP).unwrap();
    // grid oracle: ρ(0,1) = 1, ρ(0,2) = a, ρ(1,2) = 1 − a costs (2/9)(1 + a + 1 − a) = 4/9
    assert!((m - 4.0 / 9.0).abs() < 1e-9);
}
