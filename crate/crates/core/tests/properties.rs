mod common;

use std::collections::BTreeMap;

use common::{hub_family, random_hermitian};
use ctqw::engine::{assemble, evolve, uniform_grid, Generator, HamiltonianSpec};
use ctqw::graph::*;
use ctqw::krylov::*;
use ctqw::linalg::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn any_graph() -> impl Strategy<Value = Graph> {
    (0usize..6, 2usize..=16, 0.0f64..=1.0, any::<u64>()).prop_map(|(family, n, p, seed)| match family {
        0 => make_star(n).unwrap(),
        1 => make_wheel(n.max(4)).unwrap(),
        2 => make_complete(n).unwrap(),
        3 => make_near_complete(n.max(3)).unwrap(),
        4 => make_path(n).unwrap(),
        _ => make_random_with_hub(n, p, seed).unwrap(),
    })
}

fn hub_graph() -> impl Strategy<Value = Graph> {
    any_graph().prop_filter("needs a hub", |g| g.hub().is_some())
}

fn normalized_state(n: usize, seed: u64) -> StateVector {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::from_amplitudes(amps).normalized().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn handshaking(g in any_graph()) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn laplacian_is_degree_minus_adjacency(g in any_graph()) {
        let diff = &g.degree_matrix() - &g.adjacency_matrix();
        prop_assert_eq!(g.laplacian_matrix(), diff);
    }

    #[test]
    fn hub_implies_connected(g in hub_graph()) {
        prop_assert!(g.is_connected());
    }

    #[test]
    fn random_hub_is_deterministic(n in 2usize..20, p in 0.0f64..=1.0, seed in any::<u64>()) {
        prop_assert_eq!(make_random_with_hub(n, p, seed).unwrap(), make_random_with_hub(n, p, seed).unwrap());
    }

    #[test]
    fn hermitian_evolution_preserves_norm(n in 1usize..12, seed in any::<u64>(), t in 0.0f64..100.0) {
        let h = random_hermitian(n, seed);
        let s = normalized_state(n, seed ^ 1);
        let out = expm_mul(&h, &s, t).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn group_property(n in 1usize..10, seed in any::<u64>(), t1 in 0.0f64..10.0, t2 in 0.0f64..10.0) {
        let h = random_hermitian(n, seed);
        let s = normalized_state(n, seed ^ 2);
        let two_steps = expm_mul(&h, &expm_mul(&h, &s, t1).unwrap(), t2).unwrap();
        let one_step = expm_mul(&h, &s, t1 + t2).unwrap();
        prop_assert!(two_steps.distance(&one_step) < 1e-8);
    }

    #[test]
    fn gram_schmidt_output_orthonormal(n in 2usize..10, k in 1usize..5, seed in any::<u64>()) {
        let k = k.min(n - 1);
        let mut basis: Vec<StateVector> = Vec::new();
        let mut s = seed;
        while basis.len() < k {
            s = s.wrapping_add(1);
            if let Orthogonalized::Independent(v) = gram_schmidt_step(&normalized_state(n, s), &basis, 1e-9) {
                basis.push(v);
            }
        }
        let candidate = normalized_state(n, seed ^ 3);
        if let Orthogonalized::Independent(u) = gram_schmidt_step(&candidate, &basis, 1e-9) {
            prop_assert!((u.norm() - 1.0).abs() < 1e-12);
            for b in &basis {
                prop_assert!(b.inner(&u).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn reduced_laplacians_coincide(g1 in hub_graph(), seed in any::<u64>(), p in 0.0f64..=1.0) {
        let n = g1.order();
        let g2 = make_random_with_hub(n, p, seed).unwrap();
        let reduce = |g: &Graph| {
            let w = StateVector::basis(n, g.hub().unwrap()).unwrap();
            let sub = build_invariant_subspace(&g.laplacian_matrix(), &w, DEPENDENCE_TOL).unwrap();
            reduce_operator(&g.laplacian_matrix(), &sub).unwrap()
        };
        prop_assert!(reduce(&g1).max_abs_diff(&reduce(&g2)).unwrap() <= 1e-10);
    }

    #[test]
    fn reduced_evolution_equivalence(g in hub_graph()) {
        let n = g.order();
        let w = g.hub().unwrap();
        let l = g.laplacian_matrix();
        let red = closed_form_reduced_laplacian(n).unwrap();
        let e1 = StateVector::from_real(&[1.0, 0.0]);
        for t in [0.1, 1.0, 5.0, 20.0] {
            let full = expm_mul(&l, &StateVector::basis(n, w).unwrap(), t).unwrap();
            let reduced = expm_mul(&red, &e1, t).unwrap();
            prop_assert!((full[w] - reduced[0]).norm() < 1e-8);
        }
    }

    #[test]
    fn marked_subspace_is_invariant(
        n in 4usize..14, hubs in 1usize..4, p in 0.0f64..=1.0, seed in any::<u64>(),
        gamma in 0.05f64..2.0, lambda in -2.0f64..2.0, kappa in 0.0f64..2.0,
    ) {
        let hubs = hubs.min(n - 2);
        let g = make_random_with_hubs(n, hubs, p, seed).unwrap();
        let marks: Vec<usize> = (0..hubs).collect();
        let lambdas: Vec<Complex64> =
            marks.iter().map(|&w| Complex64::new(lambda + w as f64 * 0.25, -kappa)).collect();
        let mut spec = HamiltonianSpec::new(Generator::Laplacian, gamma).unwrap();
        for (&w, &l) in marks.iter().zip(&lambdas) {
            spec = spec.with_mark(w, l);
        }
        let h = assemble(&spec, &g).unwrap();
        let sub = marked_subspace(&g, &VertexSet::new(marks, n).unwrap()).unwrap();
        prop_assert!(sub.closure_residual(&h).unwrap() < 1e-9);
        let red = reduce_operator(&h, &sub).unwrap();
        let closed = closed_form_reduced_grover(n, gamma, &lambdas).unwrap();
        prop_assert!(red.max_abs_diff(&closed).unwrap() <= 1e-10);
    }

    #[test]
    fn trapping_never_increases_norm(n in 3usize..10, kappa in 0.1f64..3.0, start in 1usize..10) {
        let g = make_star(n).unwrap();
        let spec = HamiltonianSpec::new(Generator::Laplacian, 1.0).unwrap().with_mark(0, Complex64::new(0.0, -kappa));
        let psi0 = StateVector::basis(n, start % (n - 1) + 1).unwrap();
        let tr = evolve(&spec, &g, &psi0, &uniform_grid(20.0, 40).unwrap(), &[]).unwrap();
        let norms = tr.norms();
        prop_assert!(norms.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}

#[test]
fn hub_subspace_is_two_dimensional_for_all_small_orders() {
    for n in 2..=16 {
        let mut graphs = vec![make_star(n).unwrap(), make_complete(n).unwrap()];
        if n >= 3 {
            graphs.push(make_near_complete(n).unwrap());
        }
        if n >= 4 {
            graphs.push(make_wheel(n).unwrap());
        }
        for seed in 0..5 {
            for p in [0.2, 0.5, 0.8] {
                graphs.push(make_random_with_hub(n, p, seed).unwrap());
            }
        }
        for g in graphs {
            for w in g.fully_connected_vertices().iter() {
                let seed_state = StateVector::basis(n, w).unwrap();
                let sub = build_invariant_subspace(&g.laplacian_matrix(), &seed_state, DEPENDENCE_TOL).unwrap();
                assert_eq!(sub.dim(), 2, "n={n} hub={w} {:?}", g.edges().collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn reduced_laplacian_is_degree_minus_adjacency() {
    for (name, g) in hub_family(8) {
        let sub = hub_subspace(&g, 0).unwrap();
        let l = reduce_operator(&g.laplacian_matrix(), &sub).unwrap();
        let d = reduce_operator(&g.degree_matrix(), &sub).unwrap();
        let a = reduce_operator(&g.adjacency_matrix(), &sub).unwrap();
        assert!(l.max_abs_diff(&(&d - &a)).unwrap() < 1e-12, "{name}");
    }
}

#[test]
fn trapped_population_bounded_by_trappable_overlap() {
    // the non-trappable part of |v⟩ evolves unitarily, so 1 - ‖ψ(t)‖² never exceeds 1/(N-μ)
    let g = make_near_complete(7).unwrap();
    let kappas = BTreeMap::from([(0, 0.7), (2, 1.9)]);
    let mut spec = HamiltonianSpec::new(Generator::Laplacian, 1.0).unwrap();
    for (&w, &k) in &kappas {
        spec = spec.with_mark(w, Complex64::new(0.0, -k));
    }
    let tr = evolve(&spec, &g, &StateVector::basis(7, 6).unwrap(), &uniform_grid(200.0, 100).unwrap(), &[]).unwrap();
    for n2 in tr.norms() {
        assert!(1.0 - n2 <= 0.2 + 1e-9);
    }
}
