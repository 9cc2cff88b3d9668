//! Cross-checks the split decomposition dimensions against a direct count.
//!
//! `V_ij` is the set of vectors in the range of `P_j = E_0 + ... + E_j` that
//! vanish outside the ball of radius `i` around the base vertex, so
//! `dim V_ij = rank P_j - rank (P_j with only the rows outside the ball)`.

use drgkit_core::families::{cycle, hamming, johnson, DEFAULT_SIZE_CAP};
use drgkit_core::terwilliger::{displacement_from_split, split_decomposition, LocalAlgebra};
use drgkit_core::{DrgProfile, Graph, Matrix, Rational, Scalar};
use num_traits::Zero;

fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for k in r + 1..rows.len() {
            if rows[k][c].is_zero() {
                continue;
            }
            let f = rows[k][c].clone() / pivot.clone();
            for j in c..cols {
                let t = rows[r][j].clone() * f.clone();
                rows[k][j] -= t;
            }
        }
        r += 1;
    }
    r
}

fn brute_dims(profile: &DrgProfile<Rational>, ordering: &[usize], x: usize) -> Vec<Vec<usize>> {
    let n = profile.n();
    let d = profile.diameter();
    let mut p = Matrix::<Rational>::zeros(n, n);
    let mut out = vec![vec![0; d + 1]; d + 1];
    for j in 0..=d {
        p = &p + &profile.idempotent(ordering[j]);
        let full = rank((0..n).map(|y| p.row(y).to_vec()).collect());
        for (i, row) in out.iter_mut().enumerate() {
            let outside: Vec<Vec<Rational>> =
                (0..n).filter(|&y| profile.distances().get(x, y) > i).map(|y| p.row(y).to_vec()).collect();
            row[j] = full - rank(outside);
        }
    }
    out
}

fn check(graph: Graph, vertices: &[usize]) {
    let name = graph.name().to_string();
    let profile = DrgProfile::<Rational>::certify(graph).unwrap();
    let d = profile.diameter() as isize;
    for ordering in profile.qpoly_orderings() {
        for &x in vertices {
            let local = LocalAlgebra::new(&profile, ordering, x).unwrap();
            let split = split_decomposition(&local).unwrap();
            let brute = brute_dims(&profile, ordering, x);
            assert_eq!(split.v_dims(), brute, "{name} x={x} ordering={ordering:?}");
            let b = |i: isize, j: isize| if i < 0 || j < 0 { 0 } else { brute[i as usize][j as usize] as isize };
            for i in 0..=d {
                for j in 0..=d {
                    let expected = b(i, j) - b(i, j - 1) - b(i - 1, j) + b(i - 1, j - 1);
                    assert_eq!(split.vtilde(i, j).dim() as isize, expected, "{name} x={x} Ṽ({i},{j})");
                }
            }
            let disp = displacement_from_split(&split).unwrap();
            for (eta, part) in disp.parts().iter().enumerate() {
                let expected: isize = (0..=d)
                    .map(|i| (i, d + eta as isize - i))
                    .filter(|&(_, j)| j <= d)
                    .map(|(i, j)| b(i, j) - b(i, j - 1) - b(i - 1, j) + b(i - 1, j - 1))
                    .sum();
                assert_eq!(part.dim() as isize, expected, "{name} x={x} V_{eta}");
            }
        }
    }
}

#[test]
fn hypercube_golden_table() {
    let profile = DrgProfile::<Rational>::certify(hamming(3, 2, DEFAULT_SIZE_CAP).unwrap()).unwrap();
    for x in 0..8 {
        let brute = brute_dims(&profile, &[0, 1, 2, 3], x);
        let b = |i: usize, j: usize| -> isize {
            let g = |i: isize, j: isize| if i < 0 || j < 0 { 0 } else { brute[i as usize][j as usize] as isize };
            let (i, j) = (i as isize, j as isize);
            g(i, j) - g(i, j - 1) - g(i - 1, j) + g(i - 1, j - 1)
        };
        assert_eq!([b(0, 3), b(1, 2), b(2, 1), b(3, 0)], [1, 3, 3, 1]);
        let total: isize = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| b(i, j)).sum();
        assert_eq!(total, 8);
    }
}

#[test]
fn hypercube_matches() {
    check(hamming(3, 2, DEFAULT_SIZE_CAP).unwrap(), &(0..8).collect::<Vec<_>>());
}

#[test]
fn four_cube_matches() {
    check(hamming(4, 2, DEFAULT_SIZE_CAP).unwrap(), &[0, 5, 15]);
}

#[test]
fn johnson_matches() {
    check(johnson(6, 3, DEFAULT_SIZE_CAP).unwrap(), &[0, 11]);
}

#[test]
fn hexagon_matches() {
    check(cycle(6, DEFAULT_SIZE_CAP).unwrap(), &(0..6).collect::<Vec<_>>());
}

#[test]
fn modes_agree() {
    for g in [hamming(3, 2, DEFAULT_SIZE_CAP).unwrap(), johnson(6, 3, DEFAULT_SIZE_CAP).unwrap(), cycle(6, DEFAULT_SIZE_CAP).unwrap()] {
        let exact = DrgProfile::<Rational>::certify(g.clone()).unwrap();
        let float = DrgProfile::<f64>::certify(g).unwrap();
        assert_eq!(exact.qpoly_orderings(), float.qpoly_orderings());
        let ord = exact.ordering(0).unwrap().to_vec();
        let e = split_decomposition(&LocalAlgebra::new(&exact, &ord, 1).unwrap()).unwrap();
        let f = split_decomposition(&LocalAlgebra::new(&float, &ord, 1).unwrap()).unwrap();
        assert_eq!(e.v_dims(), f.v_dims());
        assert_eq!(e.vtilde_dims(), f.vtilde_dims());
        let theta_e: Vec<f64> = exact.theta().iter().map(Scalar::to_f64).collect();
        for (a, b) in theta_e.iter().zip(float.theta()) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
