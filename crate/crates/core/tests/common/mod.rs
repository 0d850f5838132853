#![allow(dead_code)]

use ctqw::graph::*;
use ctqw::{ComplexOperator, Graph};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(n: usize, seed: u64) -> ComplexOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = ComplexOperator::zeros(n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(rng.gen_range(-2.0..2.0), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Star, wheel, complete, near-complete and three random-hub graphs of order `n`
/// (where the family exists), each with vertex 0 fully connected.
pub fn hub_family(n: usize) -> Vec<(String, Graph)> {
    let mut out = vec![
        (format!("S_{n}"), make_star(n).unwrap()),
        (format!("K_{n}"), make_complete(n).unwrap()),
        (format!("near-complete({n})"), make_near_complete(n).unwrap()),
    ];
    if n >= 4 {
        out.push((format!("W_{n}"), make_wheel(n).unwrap()));
    }
    for seed in 1..=3 {
        out.push((format!("random-hub({n}, seed {seed})"), make_random_with_hub(n, 0.5, seed).unwrap()));
    }
    out
}
