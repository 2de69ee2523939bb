//! Sampled checks of the classical and qubit bounds.

use ctxdim_core::behavior::{behavior_from, Behavior, Scenario};
use ctxdim_core::certify::BoundsRegistry;
use ctxdim_core::classical::classical_max;
use ctxdim_core::functional::{cglmp4, cglmp4_value, chsh, chsh_value};
use ctxdim_core::quantum::steer;
use ctxdim_core::random::{random_density_matrix, random_povm, rng_from_seed};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `Σ_λ p(λ) p(a|x,λ) p(b|y,λ)` with random deterministic response functions.
fn local_mixture(scenario: Scenario, rng: &mut ChaCha8Rng) -> Behavior {
    let terms = rng.random_range(1..=6);
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let mut table = vec![0.0; scenario.len()];
    for w in weights {
        let alice: Vec<usize> = (0..scenario.settings_x).map(|_| rng.random_range(0..scenario.outcomes_a)).collect();
        let bob: Vec<usize> = (0..scenario.settings_y).map(|_| rng.random_range(0..scenario.outcomes_b)).collect();
        let d = Behavior::deterministic(scenario, &alice, &bob);
        for (t, p) in table.iter_mut().zip(d.table()) {
            *t += w / total * p;
        }
    }
    Behavior::raw(scenario, table).unwrap()
}

#[test]
fn local_mixtures_respect_classical_bounds() {
    let mut rng = rng_from_seed(314);
    for _ in 0..1000 {
        assert!(cglmp4_value(&local_mixture(Scenario::CGLMP4, &mut rng)).unwrap() <= 1e-9);
        assert!(chsh_value(&local_mixture(Scenario::CHSH, &mut rng)).unwrap() <= 2.0 + 1e-9);
    }
}

#[test]
fn registry_agrees_with_vertex_enumeration() {
    let reg = BoundsRegistry::standard();
    assert_eq!(reg.get("cglmp4").unwrap().noncontextual.value, classical_max(&cglmp4()).unwrap().value);
    assert_eq!(reg.get("chsh").unwrap().noncontextual.value, classical_max(&chsh()).unwrap().value);
}

#[test]
fn qubit_setups_stay_below_the_qubit_bound() {
    let x2 = std::f64::consts::FRAC_1_SQRT_2 - 0.5;
    let mut rng = rng_from_seed(2718);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let rank = rng.random_range(1..=4);
        let rho = random_density_matrix(4, rank, &mut rng);
        let n: Vec<_> = (0..2).map(|_| random_povm(2, 4, &mut rng)).collect();
        let m: Vec<_> = (0..2).map(|_| random_povm(2, 4, &mut rng)).collect();
        let ass = steer(&rho, &n).unwrap();
        let v = cglmp4_value(&behavior_from(&ass, &m).unwrap()).unwrap();
        best = best.max(v);
        assert!(v <= x2 + 1e-6, "qubit value {v}");
    }
    assert!(best.is_finite());
}
