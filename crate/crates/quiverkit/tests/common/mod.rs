#![allow(dead_code)] // each test binary uses a subset

//! Shared helpers for the integration suites: independent oracles and
//! seeded generators. Everything here deliberately avoids the library's
//! computation paths it is used to check.

use quiverkit::pattern::{DegreeConstraint, PatternSpec};
use quiverkit::quiver::Quiver;
use quiverkit::rng::SplitMix64;
use std::collections::BTreeMap;

/// Brute-force path-class counter for monomial relations: enumerates every
/// path up to `max_len` by direct recursion and drops those containing a
/// forbidden word as a contiguous subword. Independent of the algebra
/// engine's reduction machinery.
pub fn monomial_pair_counts(
    q: &Quiver,
    forbidden: &[Vec<usize>],
    max_len: usize,
) -> BTreeMap<(usize, usize), usize> {
    fn contains_subword(path: &[usize], word: &[usize]) -> bool {
        path.len() >= word.len() && path.windows(word.len()).any(|w| w == word)
    }
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for v in 0..q.vertex_count() {
        // depth-first over arrow sequences
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(v, Vec::new())];
        while let Some((at, arrows)) = stack.pop() {
            if forbidden.iter().any(|w| contains_subword(&arrows, w)) {
                continue;
            }
            *counts.entry((v, at)).or_default() += 1;
            if arrows.len() < max_len {
                for (idx, a) in q.arrows().iter().enumerate() {
                    if a.source == at {
                        let mut next = arrows.clone();
                        next.push(idx);
                        stack.push((a.target, next));
                    }
                }
            }
        }
    }
    counts
}

/// Brute-force monomorphism counter: all injective vertex assignments, then
/// per parallel-class subset choices, with the same occurrence semantics as
/// the matcher (one occurrence per ambient arrow set).
pub fn brute_force_occurrences(q: &Quiver, spec: &PatternSpec) -> usize {
    let pn = spec.quiver.vertex_count();
    let an = q.vertex_count();
    if pn > an {
        return 0;
    }
    let mut total = 0usize;
    let mut assignment = vec![usize::MAX; pn];
    let mut used = vec![false; an];
    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut acc = 1usize;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }
    fn rec(
        q: &Quiver,
        spec: &PatternSpec,
        pv: usize,
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
        total: &mut usize,
    ) {
        let pn = spec.quiver.vertex_count();
        if pv == pn {
            // degree constraints against the ambient quiver
            for (p, c) in spec.constraints.iter().enumerate() {
                if let DegreeConstraint::Exact {
                    in_degree,
                    out_degree,
                } = c
                {
                    if q.in_degree(assignment[p]) != *in_degree
                        || q.out_degree(assignment[p]) != *out_degree
                    {
                        return;
                    }
                }
            }
            let mut need: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for a in spec.quiver.arrows() {
                *need
                    .entry((assignment[a.source], assignment[a.target]))
                    .or_default() += 1;
            }
            let mut ways = 1usize;
            for ((s, t), k) in need {
                ways *= binom(q.arrows_between(s, t).len(), k);
                if ways == 0 {
                    return;
                }
            }
            *total += ways;
            return;
        }
        for cand in 0..q.vertex_count() {
            if !used[cand] {
                assignment[pv] = cand;
                used[cand] = true;
                rec(q, spec, pv + 1, assignment, used, total);
                used[cand] = false;
            }
        }
    }
    rec(q, spec, 0, &mut assignment, &mut used, &mut total);
    total
}

/// Seeded random quiver with up to `max_vertices` vertices and up to
/// `max_arrows` arrows (loops and parallels allowed).
pub fn random_quiver(max_vertices: usize, max_arrows: usize, seed: u64) -> Quiver {
    let mut rng = SplitMix64::new(seed);
    let n = 1 + rng.below(max_vertices as u64) as usize;
    let m = rng.below(max_arrows as u64 + 1) as usize;
    let mut q = Quiver::new();
    for i in 0..n {
        q.add_vertex(&format!("v{i}")).unwrap();
    }
    for k in 0..m {
        let s = rng.below(n as u64) as usize;
        let t = rng.below(n as u64) as usize;
        q.add_arrow(&format!("a{k}"), &format!("v{s}"), &format!("v{t}"))
            .unwrap();
    }
    q
}

/// Relabels the vertices of a quiver by a seeded permutation, preserving
/// the arrow structure.
pub fn relabel_vertices(q: &Quiver, seed: u64) -> Quiver {
    let mut rng = SplitMix64::new(seed);
    let n = q.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut perm);
    let fresh: Vec<String> = (0..n).map(|i| format!("w{}", perm[i])).collect();
    let mut out = Quiver::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| fresh[i].clone());
    for &i in &order {
        out.add_vertex(&fresh[i]).unwrap();
    }
    for a in q.arrows() {
        out.add_arrow(&a.name, &fresh[a.source], &fresh[a.target])
            .unwrap();
    }
    out
}
