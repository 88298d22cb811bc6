//! Brute-force oracles shared by the integration tests. Each one recomputes a
//! result by exhaustive enumeration without calling the code it checks.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pstlab::Graph;

/// All set partitions of `0..n` as cell-of vectors (restricted growth strings).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            cur.push(c);
            rec(i + 1, n, cur, max.max(c), out);
            cur.pop();
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut cur = vec![0];
    rec(1, n, &mut cur, 0, &mut out);
    out
}

pub fn equitable(adj: &[Vec<f64>], cell_of: &[usize], tol: f64) -> bool {
    let n = adj.len();
    let m = cell_of.iter().max().map_or(0, |x| x + 1);
    let sums: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            let mut s = vec![0.0; m];
            for y in 0..n {
                s[cell_of[y]] += adj[x][y];
            }
            s
        })
        .collect();
    (0..n).all(|x| (0..n).all(|y| cell_of[x] != cell_of[y] || (0..m).all(|k| (sums[x][k] - sums[y][k]).abs() <= tol)))
}

fn refines(fine: &[usize], coarse: &[usize]) -> bool {
    let n = fine.len();
    (0..n).all(|x| (0..n).all(|y| fine[x] != fine[y] || coarse[x] == coarse[y]))
}

/// Coarsest equitable partition refining `initial`, by exhaustive search.
pub fn coarsest_equitable(g: &Graph, initial: &[usize]) -> Vec<Vec<usize>> {
    let adj = dense(g);
    let best = set_partitions(g.n())
        .into_iter()
        .filter(|p| refines(p, initial) && equitable(&adj, p, 1e-9))
        .min_by_key(|p| p.iter().max().map_or(0, |x| x + 1))
        .expect("the discrete partition is equitable");
    cells_of(&best)
}

pub fn cells_of(cell_of: &[usize]) -> Vec<Vec<usize>> {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut ids: Vec<usize> = Vec::new();
    for (v, &c) in cell_of.iter().enumerate() {
        match ids.iter().position(|&x| x == c) {
            Some(i) => cells[i].push(v),
            None => {
                ids.push(c);
                cells.push(vec![v]);
            }
        }
    }
    cells
}

pub fn dense(g: &Graph) -> Vec<Vec<f64>> {
    (0..g.n()).map(|u| (0..g.n()).map(|v| g.weight(u, v)).collect()).collect()
}

/// Heap's algorithm over all `n!` permutations.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

pub fn automorphism_count(g: &Graph) -> usize {
    let adj = dense(g);
    let n = g.n();
    all_permutations(n)
        .iter()
        .filter(|p| (0..n).all(|u| (0..n).all(|v| (adj[p[u]][p[v]] - adj[u][v]).abs() <= 1e-9)))
        .count()
}

/// Connected simple graph on `n` vertices: random spanning tree plus extra edges.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, weighted: bool) -> Graph {
    let mut edges = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    let extra = rng.gen_range(0..=n * (n - 1) / 2);
    for _ in 0..extra {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    let list: Vec<(usize, usize, f64)> = edges
        .into_iter()
        .map(|(u, v)| (u, v, if weighted { rng.gen_range(1..=3) as f64 } else { 1.0 }))
        .collect();
    Graph::from_edges(n, &list).expect("valid edges")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Codewords of the row space of `rows` (bit `j` of a row is position `j`),
/// enumerating every subset of rows.
pub fn codewords(rows: &[u64]) -> BTreeSet<u64> {
    (0u64..1 << rows.len())
        .map(|mask| {
            rows.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0, |acc, (_, r)| acc ^ r)
        })
        .collect()
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Rows of the generator matrix: row `i` has bit `j` set iff generator `j` has bit `i`.
pub fn generator_rows(d: u32, gens: &[u32]) -> Vec<u64> {
    (0..d)
        .map(|i| {
            gens.iter()
                .enumerate()
                .filter(|(_, &g)| g >> i & 1 == 1)
                .fold(0u64, |acc, (j, _)| acc | 1 << j)
        })
        .collect()
}
