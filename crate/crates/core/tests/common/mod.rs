//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use ruled_strata::plumbing::{blow_down, PlumbingGraph, Space};
use ruled_strata::stable_trees::StableTree;

/// Number of partitions of `n`, by the coin-change recurrence.
pub fn partition_count(n: usize) -> u64 {
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// `L(p, q)` with `p = det A`, `q = det A'`, where `A` is the tridiagonal
/// matrix with `-eᵢ` on the diagonal and `-1` beside it and `A'` drops
/// its first row and column.
pub fn lens_from_determinants(chain: &[i64]) -> Space {
    let n = chain.len();
    let a: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        -chain[i] as i128
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let minor: Vec<Vec<i128>> = a[1..].iter().map(|r| r[1..].to_vec()).collect();
    Space::lens(det(a) as i64, det(minor) as i64)
}

/// Blow down, remove `0` vertices, then read off the lens space: directly
/// for zero or one vertex, by determinants otherwise.
pub fn chain_oracle(chain: &[i64]) -> Space {
    let mut cur = chain.to_vec();
    loop {
        if cur.len() <= 1 {
            break;
        }
        let g = PlumbingGraph::chain(&cur);
        let next = blow_down(&g);
        if next != g {
            cur = next.as_chain().unwrap();
            continue;
        }
        match cur.iter().position(|&e| e == 0) {
            Some(i) if i > 0 && i + 1 < cur.len() => {
                let merged = cur[i - 1] + cur[i + 1];
                cur = [&cur[..i - 1], &[merged], &cur[i + 2..]].concat();
            }
            Some(0) => cur = cur[2..].to_vec(),
            Some(i) => cur = cur[..i - 1].to_vec(),
            None => break,
        }
    }
    match cur.as_slice() {
        [] => Space::S3,
        // The circle bundle of O(e) is L(-e, 1).
        [e] => Space::lens(-e, 1),
        _ => lens_from_determinants(&cur),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Counts vertex permutations preserving edges, classes and marks, fixing
/// the stem and each of its neighbors.
pub fn brute_force_isotropy(t: &StableTree) -> u64 {
    let comps = t.components();
    let n = comps.len();
    let mut fixed = Vec::new();
    if let Some(s) = t.stem() {
        fixed.push(s);
        fixed.extend(t.neighbors(s));
    }
    let has_edge = |a: usize, b: usize| t.edges().contains(&(a.min(b), a.max(b)));
    permutations(n)
        .into_iter()
        .filter(|p| {
            fixed.iter().all(|&v| p[v] == v)
                && (0..n).all(|v| {
                    comps[v].class == comps[p[v]].class && comps[v].marked == comps[p[v]].marked
                })
                && t.edges().iter().all(|&(a, b)| has_edge(p[a], p[b]))
        })
        .count() as u64
}
