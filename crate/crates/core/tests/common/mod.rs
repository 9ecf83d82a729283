//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use hotplug_core::combinatorics::PointSet;
use hotplug_core::designs::TDesign;
use hotplug_core::hppda::AMap;
use itertools::Itertools;
use rand::Rng;

/// Pascal-triangle binomial, independent of the library's.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row[k as usize]
}

pub fn subsets(v: u32, k: usize) -> Vec<Vec<u32>> {
    (1..=v).combinations(k).collect()
}

fn contains_all(block: &PointSet, pts: &[u32]) -> bool {
    pts.iter().all(|p| block.contains(*p))
}

fn avoids(block: &PointSet, pts: &[u32]) -> bool {
    pts.iter().all(|p| !block.contains(*p))
}

/// Blocks through every s-subset, by counting. `None` if the count varies.
pub fn brute_lambda_s(d: &TDesign, s: usize) -> Option<u64> {
    let counts: Vec<u64> = subsets(d.v(), s)
        .iter()
        .map(|set| d.blocks().iter().filter(|b| contains_all(b, set)).count() as u64)
        .collect();
    counts.iter().all_equal().then(|| counts[0])
}

/// Blocks containing an i-set and avoiding a disjoint j-set, by counting over
/// every such pair. `None` if the count varies.
pub fn brute_lambda_i_j(d: &TDesign, i: usize, j: usize) -> Option<u64> {
    let mut counts = Vec::new();
    for inner in subsets(d.v(), i) {
        let rest: Vec<u32> = (1..=d.v()).filter(|p| !inner.contains(p)).collect();
        for outer in rest.iter().copied().combinations(j) {
            let n = d
                .blocks()
                .iter()
                .filter(|b| contains_all(b, &inner) && avoids(b, &outer))
                .count();
            counts.push(n as u64);
        }
    }
    counts.iter().all_equal().then(|| counts[0])
}

/// Blocks meeting a fixed j-set, by counting over every j-set.
pub fn brute_meeting(d: &TDesign, j: usize) -> Option<u64> {
    let counts: Vec<u64> = subsets(d.v(), j)
        .iter()
        .map(|set| d.blocks().iter().filter(|b| !avoids(b, set)).count() as u64)
        .collect();
    counts.iter().all_equal().then(|| counts[0])
}

/// (K′_j, F′_j, Z′_j, S_j) from the closed forms.
pub fn closed_form_bj(d: &TDesign, r: u32, j: u32, a: &AMap) -> (u64, u64, u64, u64) {
    let (v, t, r, j64) = (d.v() as u64, d.t() as u64, r as u64, j as u64);
    let tail = binom(v - t, r - j64);
    let (mut f, mut z, mut s_total) = (0, 0, 0);
    for s in 1..=(t - j64) {
        let a_sj = a.get(s as u32, j);
        f += a_sj * binom(t, s);
        z += a_sj * (binom(t, s) - binom(t - j64, s));
        s_total += a_sj * binom(t, s + j64) * tail;
    }
    (binom(t, j64) * tail, f, z, s_total)
}

/// Y_j computed from counted block intersections: blocks meeting a j-set plus
/// the extra rows Σ_s a_{s,j} C(t−j,s).
pub fn brute_y(d: &TDesign, r: u32, a: &AMap) -> Vec<u64> {
    let t = d.t() as u64;
    (1..=r)
        .map(|j| {
            let extra: u64 = (1..=(t - j as u64))
                .map(|s| a.get(s as u32, j) * binom(t - j as u64, s))
                .sum();
            brute_meeting(d, j as usize).expect("design meets j-sets uniformly") + extra
        })
        .collect()
}

/// A uniformly random a map with 0 ≤ a_{s,j} ≤ λ_s^t over the admissible (s, j).
pub fn random_a(d: &TDesign, r: u32, rng: &mut impl Rng) -> AMap {
    let mut a = AMap::new();
    for j in 1..=r {
        for s in 1..=d.t().saturating_sub(j) {
            let bound = d.lambda_s_t(s).unwrap();
            a.set(s, j, rng.gen_range(0..=bound));
        }
    }
    a
}

/// The instance used throughout: 3-(8,4,1), r = 2, a_{1,2}=1, a_{1,1}=2, a_{2,1}=1.
pub fn example_a() -> AMap {
    AMap::new().with(1, 2, 1).with(1, 1, 2).with(2, 1, 1)
}
