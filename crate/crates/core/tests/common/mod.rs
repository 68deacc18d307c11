#![allow(dead_code)]

use num_integer::Integer;
use quasitoric::QuasitoricModel;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const X: &[(i64, i64)] = &[(1, 0), (0, 1), (-1, 2), (-2, 3), (1, -2), (0, 1), (-1, -1)];
pub const Y: &[(i64, i64)] = &[(1, 0), (-1, 2), (-2, 3), (1, -2), (0, 1), (-1, -1)];
pub const Z: &[(i64, i64)] = &[(1, 0), (0, 1), (-2, 3), (1, -2), (0, 1), (-1, -1)];
pub const CP2: &[(i64, i64)] = &[(1, 0), (0, 1), (-1, -1)];
pub const SQUARE: &[(i64, i64)] = &[(1, 0), (0, 1), (-1, 0), (0, -1)];
pub const M4: &[(i64, i64)] = &[(1, 0), (0, 1), (-1, 3), (0, -1)];

pub fn model(edges: &[(i64, i64)]) -> QuasitoricModel {
    QuasitoricModel::from_i64(edges).expect("valid model")
}

pub fn det(u: (i64, i64), v: (i64, i64)) -> i64 {
    u.0 * v.1 - u.1 * v.0
}

fn primitive(v: (i64, i64)) -> bool {
    v.0.gcd(&v.1) == 1
}

fn draw(rng: &mut ChaCha8Rng, bound: i64) -> (i64, i64) {
    loop {
        let v = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        if primitive(v) {
            return v;
        }
    }
}

/// Random positively omnioriented edge list of 3 to `max_edges` vectors with
/// entries in `[-bound, bound]`, built as a walk with positive turns.
pub fn random_edges(rng: &mut ChaCha8Rng, max_edges: usize, bound: i64) -> Vec<(i64, i64)> {
    'outer: loop {
        let n = rng.gen_range(3..=max_edges);
        let mut edges = vec![draw(rng, bound)];
        while edges.len() < n {
            let prev = *edges.last().unwrap();
            let next = (0..64).map(|_| draw(rng, bound)).find(|&v| det(prev, v) > 0);
            match next {
                Some(v) => edges.push(v),
                None => continue 'outer,
            }
        }
        if det(*edges.last().unwrap(), edges[0]) > 0 {
            return edges;
        }
    }
}

/// Local group at the cone spanned by `u, v`, by brute force: all `(j1, j2)`
/// in `[0, d)^2` with `(j1 u + j2 v) / d` integral.
pub fn grid_group(u: (i64, i64), v: (i64, i64)) -> Vec<(i64, i64)> {
    let d = det(u, v).abs();
    let mut out = Vec::new();
    for j1 in 0..d {
        for j2 in 0..d {
            let x = j1 * u.0 + j2 * v.0;
            let y = j1 * u.1 + j2 * v.1;
            if x % d == 0 && y % d == 0 {
                out.push((j1, j2));
            }
        }
    }
    out
}

/// Ages `(j1 + j2) / d` of the nontrivial grid elements.
pub fn grid_ages(u: (i64, i64), v: (i64, i64)) -> Vec<(i64, i64)> {
    let d = det(u, v).abs();
    grid_group(u, v)
        .into_iter()
        .filter(|&(j1, j2)| (j1, j2) != (0, 0))
        .map(|(j1, j2)| {
            let g = (j1 + j2).gcd(&d);
            ((j1 + j2) / g, d / g)
        })
        .collect()
}
