use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tsp_hopfield::annealing::{anneal, swap_cities, swap_positions, SaConfig, MIN_TEMPERATURE};
use tsp_hopfield::builtin;
use tsp_hopfield::instance::generate_random_instance;
use tsp_hopfield::tour::brute_force_optimum;
use tsp_hopfield::Tour;

#[test]
fn swapping_the_same_pairs_twice_restores_the_tour() {
    let t = Tour::new(vec![4, 2, 0, 5, 1, 3, 6, 7]).unwrap();
    let pairs = [(0, 5), (2, 7), (1, 3)];
    let once = swap_positions(&t, &pairs).unwrap();
    assert_ne!(once, t);
    let mut back_pairs = pairs;
    back_pairs.reverse();
    assert_eq!(swap_positions(&once, &back_pairs).unwrap(), t);
}

#[test]
fn swaps_always_produce_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let t = Tour::identity(10);
    for trial in 0..1000 {
        let k = 1 + trial % 5;
        let s = swap_cities(&t, k, &mut rng).unwrap();
        assert!(Tour::new(s.order().to_vec()).is_ok());
        let moved = s
            .order()
            .iter()
            .zip(t.order())
            .filter(|(a, b)| a != b)
            .count();
        assert_eq!(moved, 2 * k);
    }
}

#[test]
fn single_swap_neighbourhood_at_n4() {
    let t = Tour::new(vec![2, 0, 3, 1]).unwrap();
    let mut reached = std::collections::HashSet::new();
    for a in 0..4 {
        for b in (a + 1)..4 {
            let s = swap_positions(&t, &[(a, b)]).unwrap();
            assert!(Tour::new(s.order().to_vec()).is_ok());
            let diff = s
                .order()
                .iter()
                .zip(t.order())
                .filter(|(x, y)| x != y)
                .count();
            assert_eq!(diff, 2);
            reached.insert(s);
        }
    }
    assert_eq!(reached.len(), 6);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        assert!(reached.contains(&swap_cities(&t, 1, &mut rng).unwrap()));
    }
}

#[test]
fn tiny_budget_keeps_the_start_tour() {
    let m = builtin::paper8().distance_matrix();
    // start from the optimum so any proposal is worse
    let (opt, len) = brute_force_optimum(&m).unwrap();
    let cfg = SaConfig {
        t0: MIN_TEMPERATURE,
        cooling_rate: 0.5,
        iterations: 1,
        swap_count: 1,
        seed: 3,
    };
    let out = anneal(&m, &opt, &cfg).unwrap();
    assert_eq!(out.tour, opt);
    assert_eq!(out.length, len);
}

#[test]
fn paper8_never_worse_than_start() {
    let m = builtin::paper8().distance_matrix();
    let start = Tour::identity(8);
    for seed in 0..10 {
        let cfg = SaConfig {
            t0: 10.0,
            cooling_rate: 0.995,
            iterations: 3000,
            swap_count: 1,
            seed,
        };
        let out = anneal(&m, &start, &cfg).unwrap();
        assert!(out.length <= 35.9550 + 1e-9);
        assert_eq!(m.tour_length(&out.tour).unwrap(), out.length);
    }
}

#[test]
fn trace_invariants_and_determinism() {
    let m = generate_random_instance(12, 4, 1.0)
        .unwrap()
        .distance_matrix();
    let cfg = SaConfig {
        t0: 1.0,
        cooling_rate: 0.99,
        iterations: 2000,
        swap_count: 2,
        seed: 17,
    };
    let start = Tour::identity(12);
    let a = anneal(&m, &start, &cfg).unwrap();
    let b = anneal(&m, &start, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.trace.records.len(), 2000);
    for w in a.trace.records.windows(2) {
        assert!(w[1].best <= w[0].best);
        assert!(w[1].temperature < w[0].temperature || w[1].temperature == MIN_TEMPERATURE);
    }
    let last = a.trace.records.last().unwrap();
    assert_eq!(last.best, a.length);
    assert_eq!(last.current, a.trace.final_length);
    assert_eq!(
        m.tour_length(&a.trace.final_tour).unwrap(),
        a.trace.final_length
    );
    assert!(a.length <= m.tour_length(&start).unwrap());
    let csv = a.trace.to_csv();
    assert!(csv.starts_with("iteration,temperature,current,best\n"));
    assert_eq!(csv.lines().count(), 2001);
}

#[test]
fn frozen_temperature_is_hill_climbing() {
    for seed in 0..20 {
        let m = generate_random_instance(9, seed, 1.0)
            .unwrap()
            .distance_matrix();
        let cfg = SaConfig {
            t0: MIN_TEMPERATURE,
            cooling_rate: 0.9,
            iterations: 500,
            swap_count: 1,
            seed,
        };
        let out = anneal(&m, &Tour::identity(9), &cfg).unwrap();
        for w in out.trace.records.windows(2) {
            if w[1].accepted {
                assert!(w[1].current <= w[0].current + 1e-9);
            }
        }
    }
}

#[test]
fn cityset1_best_of_twenty_runs() {
    let inst = builtin::cityset1();
    let m = inst.distance_matrix();
    let (_, opt) = brute_force_optimum(&m).unwrap();
    let best = (0..20)
        .map(|seed| {
            let cfg = SaConfig {
                seed,
                ..SaConfig::default()
            };
            let start = tsp_hopfield::pipeline::random_tour(10, seed);
            anneal(&m, &start, &cfg).unwrap().length
        })
        .fold(f64::INFINITY, f64::min);
    assert!(best <= opt * 1.01, "{best} vs {opt}");
}
