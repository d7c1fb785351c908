use proptest::prelude::*;
use rand::Rng;
use spintop_core::nash::{brute_force_nash, exploitability, max_entropy_nash, nash_clustering, rpp, SolverOptions};
use spintop_core::rng::stream;
use spintop_core::{Matrix, PayoffMatrix};

fn random_antisymmetric(n: usize, seed: u64, discrete: bool) -> PayoffMatrix {
    let mut rng = stream(seed, &[n as u64]);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = if discrete {
                [-1.0, 0.0, 1.0][rng.random_range(0..3)]
            } else {
                rng.random_range(-1.0..1.0)
            };
            m.set(i, j, v);
            m.set(j, i, -v);
        }
    }
    PayoffMatrix::new(m).unwrap()
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn solver_matches_oracle_on_continuous_and_tied_payoffs() {
    let opts = SolverOptions::default();
    for seed in 0..300u64 {
        let n = 2 + (seed as usize % 7);
        let p = random_antisymmetric(n, seed, seed % 2 == 0);
        let all: Vec<usize> = (0..n).collect();
        let x = max_entropy_nash(&p, &all, &opts).unwrap();
        let y = brute_force_nash(&p, &all).unwrap();
        assert!(exploitability(&p, &x) <= 1e-4);
        let d = sup_dist(&x.weights, &y.weights);
        assert!(d <= 1e-4, "seed {seed} n {n}: {:?} vs {:?}", x.weights, y.weights);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clustering_is_a_partition(n in 1usize..25, seed in any::<u64>(), discrete in any::<bool>()) {
        let p = random_antisymmetric(n, seed, discrete);
        let c = nash_clustering(&p, &SolverOptions::default()).unwrap();
        prop_assert!(c.is_partition(n));
        for k in &c.clusters {
            prop_assert!(k.exploitability <= 1e-4);
            let s: f64 = k.mixture.weights.iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-9);
            prop_assert!(k.mixture.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn rpp_is_antisymmetric_and_consistent(n in 2usize..16, seed in any::<u64>(), split in 1usize..15) {
        let split = split.min(n - 1);
        let p = random_antisymmetric(n, seed, seed % 3 == 0);
        let a: Vec<usize> = (0..split).collect();
        let b: Vec<usize> = (split..n).collect();
        let opts = SolverOptions::default();
        let ab = rpp(&p, &a, &b, &opts).unwrap();
        let ba = rpp(&p, &b, &a, &opts).unwrap();
        prop_assert!((ab.value + ba.value).abs() < 1e-8, "{} {}", ab.value, ba.value);
        let m = p.matrix().select(&a, &b);
        let v: f64 = (0..a.len())
            .map(|i| ab.p_a.weights[i] * (0..b.len()).map(|j| m.get(i, j) * ab.p_b.weights[j]).sum::<f64>())
            .sum();
        prop_assert!((v - ab.value).abs() < 1e-9);
    }
}
