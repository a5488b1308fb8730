use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsp_hopfield::builtin;
use tsp_hopfield::hopfield::{
    build_weights, decode, energy, energy_terms, random_grid, run, run_observed, unit_update,
    ActivationGrid, HopfieldParams,
};
use tsp_hopfield::instance::generate_random_instance;
use tsp_hopfield::tour::{is_valid_permutation_matrix, tour_to_matrix};
use tsp_hopfield::{DistanceMatrix, Tour};

fn random_tour(n: usize, rng: &mut ChaCha8Rng) -> Tour {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Tour::new(order).unwrap()
}

fn norm_instance(n: usize, seed: u64) -> DistanceMatrix {
    generate_random_instance(n, seed, 1.0)
        .unwrap()
        .distance_matrix()
        .normalized()
        .unwrap()
}

/// Distance term by walking the tour: every edge seen from both endpoints.
fn distance_term_by_walk(m: &DistanceMatrix, t: &Tour) -> f64 {
    let o = t.order();
    let n = o.len();
    (0..n)
        .map(|i| m.get(o[i], o[(i + 1) % n]) + m.get(o[i], o[(i + n - 1) % n]))
        .sum()
}

#[test]
fn valid_grids_have_energy_d_times_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for trial in 0..1000 {
        let n = 4 + trial % 7;
        let m = norm_instance(n, trial as u64);
        let t = random_tour(n, &mut rng);
        let g = tour_to_matrix(&t);
        let p = HopfieldParams {
            a_pen: rng.gen_range(0.0..500.0),
            b_pen: rng.gen_range(0.0..500.0),
            c_pen: rng.gen_range(0.0..500.0),
            d_pen: 100.0,
            ..HopfieldParams::default()
        };
        let terms = energy_terms(&g, &m);
        assert_eq!((terms.row, terms.column, terms.count), (0.0, 0.0, 0.0));
        assert!((terms.distance - distance_term_by_walk(&m, &t)).abs() < 1e-9);
        let len = m.tour_length(&t).unwrap();
        assert!((energy(&g, &m, &p) - p.d_pen * len).abs() < 1e-9);
    }
}

#[test]
fn constraint_terms_vanish_exactly_on_permutations_n3() {
    let m = norm_instance(3, 1);
    for bits in 0u32..512 {
        let rows: Vec<Vec<u8>> = (0..3)
            .map(|r| (0..3).map(|c| ((bits >> (r * 3 + c)) & 1) as u8).collect())
            .collect();
        let g = ActivationGrid::from_rows(&rows).unwrap();
        let t = energy_terms(&g, &m);
        let zero = t.row == 0.0 && t.column == 0.0 && t.count == 0.0;
        assert_eq!(zero, is_valid_permutation_matrix(&g), "{rows:?}");
    }
}

#[test]
fn single_flip_energy_change_matches_local_field() {
    let m = builtin::matrix4().distance_matrix();
    let p = HopfieldParams::default();
    let w = build_weights(&m, &p);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let g = random_grid(4, &mut rng);
        for u in 0..16 {
            let (x, i) = (u / 4, u % 4);
            let mut flipped = g.clone();
            flipped.set(x, i, 1 - g.get(x, i));
            let dv = f64::from(flipped.get(x, i)) - f64::from(g.get(x, i));
            let analytic = -dv * w.net_input(&g, u);
            let direct = energy(&flipped, &m, &p) - energy(&g, &m, &p);
            assert!((analytic - direct).abs() < 1e-6, "{analytic} vs {direct}");
        }
    }
}

#[test]
fn unit_update_uses_weighted_sum_and_threshold() {
    let m = builtin::matrix4().distance_matrix();
    let p = HopfieldParams::default();
    let w = build_weights(&m, &p);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let g = random_grid(4, &mut rng);
        for u in 0..16 {
            let net = w.net_input(&g, u);
            assert_eq!(
                unit_update(&g, &w, (u / 4, u % 4), 0.0),
                u8::from(net >= 0.0)
            );
            assert_eq!(
                unit_update(&g, &w, (u / 4, u % 4), 25.0),
                u8::from(net >= 25.0)
            );
        }
    }
}

#[test]
fn no_update_raises_energy() {
    for seed in 0..1000u64 {
        let m = norm_instance(6, seed);
        let p = HopfieldParams {
            d_pen: [1.0, 10.0, 100.0][seed as usize % 3],
            seed,
            ..HopfieldParams::default()
        };
        let r = run_observed(&m, &p, None, |upd, g| {
            let mut before = g.clone();
            before.set(upd.city, upd.position, upd.before);
            let e_before = energy(&before, &m, &p);
            let e_after = energy(g, &m, &p);
            assert!(
                e_after <= e_before + 1e-9,
                "seed {seed}: {e_before} -> {e_after}"
            );
        });
        let mut last = r.initial_energy;
        for &e in &r.energy_trace {
            assert!(e <= last + 1e-9);
            last = e;
        }
    }
}

#[test]
fn converged_grids_are_fixed_points() {
    for seed in 0..200u64 {
        let m = norm_instance(6, seed);
        let p = HopfieldParams {
            d_pen: 10.0,
            seed,
            ..HopfieldParams::default()
        };
        let r = run(&m, &p, None);
        assert!(r.converged);
        let again = run(
            &m,
            &HopfieldParams {
                seed: seed + 1,
                ..p
            },
            Some(&r.grid),
        );
        assert!(again.converged);
        assert_eq!(again.sweeps_used, 1);
        assert_eq!(again.grid, r.grid);
        assert_eq!(r.valid, r.tour.is_some());
        if r.valid {
            assert!(is_valid_permutation_matrix(&r.grid));
            let len = m.tour_length(r.tour.as_ref().unwrap()).unwrap();
            assert!((r.length.unwrap() - len).abs() < 1e-12);
        }
    }
}

#[test]
fn valid_local_minimum_reconverges_in_one_sweep() {
    let m = norm_instance(8, 3);
    let p = HopfieldParams {
        d_pen: 5.0,
        seed: 4,
        ..HopfieldParams::default()
    };
    let first = (0..50)
        .map(|s| run(&m, &HopfieldParams { seed: s, ..p }, None))
        .find(|r| r.valid)
        .expect("some run reaches a valid grid");
    let again = run(&m, &p, Some(&first.grid));
    assert!(again.converged && again.valid);
    assert_eq!(again.sweeps_used, 1);
    assert_eq!(again.tour, first.tour);
}

#[test]
fn runs_are_deterministic() {
    let m = norm_instance(7, 5);
    let p = HopfieldParams {
        seed: 99,
        ..HopfieldParams::default()
    };
    assert_eq!(run(&m, &p, None), run(&m, &p, None));
}

#[test]
fn decode_examples() {
    let figure = ActivationGrid::from_rows(&[
        vec![0, 1, 0, 0],
        vec![1, 0, 0, 0],
        vec![0, 0, 0, 1],
        vec![0, 0, 1, 0],
    ])
    .unwrap();
    assert_eq!(decode(&figure).unwrap().order(), &[1, 0, 3, 2]);
    assert_eq!(decode(&ActivationGrid::zeros(4)), None);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..100 {
        let t = random_tour(4, &mut rng);
        assert_eq!(decode(&tour_to_matrix(&t)), Some(t));
    }
}
