//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

/// OSA distance by direct recursion over the definition; no table.
pub fn osa_recursive(a: &[u8], b: &[u8]) -> usize {
    fn go(a: &[u8], b: &[u8], i: usize, j: usize) -> usize {
        if i == 0 {
            return j;
        }
        if j == 0 {
            return i;
        }
        let cost = usize::from(a[i - 1] != b[j - 1]);
        let mut best = (go(a, b, i - 1, j) + 1)
            .min(go(a, b, i, j - 1) + 1)
            .min(go(a, b, i - 1, j - 1) + cost);
        if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
            best = best.min(go(a, b, i - 2, j - 2) + 1);
        }
        best
    }
    go(a, b, a.len(), b.len())
}

/// Plain Levenshtein by direct recursion.
pub fn levenshtein_recursive(a: &[u8], b: &[u8]) -> usize {
    match (a.split_last(), b.split_last()) {
        (None, _) => b.len(),
        (_, None) => a.len(),
        (Some((x, ra)), Some((y, rb))) => (levenshtein_recursive(ra, b) + 1)
            .min(levenshtein_recursive(a, rb) + 1)
            .min(levenshtein_recursive(ra, rb) + usize::from(x != y)),
    }
}

/// The same recursion as `osa_recursive` with a memo table, for inputs too
/// long to recurse on naively.
pub fn osa_memo(a: &[char], b: &[char]) -> usize {
    fn go(a: &[char], b: &[char], i: usize, j: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if i == 0 {
            return j;
        }
        if j == 0 {
            return i;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let cost = usize::from(a[i - 1] != b[j - 1]);
        let mut best = (go(a, b, i - 1, j, memo) + 1)
            .min(go(a, b, i, j - 1, memo) + 1)
            .min(go(a, b, i - 1, j - 1, memo) + cost);
        if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
            best = best.min(go(a, b, i - 2, j - 2, memo) + 1);
        }
        memo.insert((i, j), best);
        best
    }
    go(a, b, a.len(), b.len(), &mut HashMap::new())
}

/// Every string over `alphabet` of length `0..=max_len`.
pub fn all_strings(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &c in alphabet {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Rank of each value as `#smaller + (#equal + 1) / 2`, computed by
/// counting rather than sorting.
pub fn naive_ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|x| {
            let less = xs.iter().filter(|y| *y < x).count() as f64;
            let equal = xs.iter().filter(|y| *y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Pearson on ranks via the textbook covariance formula.
pub fn naive_spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let rx = naive_ranks(xs);
    let ry = naive_ranks(ys);
    let n = rx.len() as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n;
    let (mx, my) = (mean(&rx), mean(&ry));
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my) * (b - my)).sum();
    if vx == 0.0 || vy == 0.0 {
        None
    } else {
        Some(cov / (vx * vy).sqrt())
    }
}

/// Connected components by reachability closure over an adjacency matrix.
/// Components are returned as sorted index sets, sorted by smallest member.
pub fn brute_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        reach[a][b] = true;
        reach[b][a] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..n {
        if seen.contains(&i) {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&j| reach[i][j]).collect();
        seen.extend(comp.iter().copied());
        out.push(comp);
    }
    out
}

/// The matching acceptance rule written out case by case.
pub fn accept_oracle(sim: f64, len_a: usize, len_b: usize, same_author: bool) -> bool {
    let short = len_a.min(len_b);
    if sim >= 0.8 && short >= 30 {
        return true;
    }
    if sim >= 0.7 && same_author {
        return true;
    }
    false
}
