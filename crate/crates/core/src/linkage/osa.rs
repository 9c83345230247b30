//! Optimal string alignment distance (restricted Damerau-Levenshtein).
//!
//! Insertions, deletions, substitutions and transpositions of adjacent
//! characters each cost 1, and no substring may be edited more than once.
//! Strings are compared by Unicode scalar value.

/// Full OSA distance between `a` and `b`.
pub fn osa_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    osa_chars(&a, &b)
}

pub(crate) fn osa_chars(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let width = b.len() + 1;
    let mut two_back: Vec<usize> = vec![0; width];
    let mut prev: Vec<usize> = (0..width).collect();
    let mut cur: Vec<usize> = vec![0; width];

    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut best = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                best = best.min(two_back[j - 2] + 1);
            }
            cur[j] = best;
        }
        std::mem::swap(&mut two_back, &mut prev);
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// OSA distance if it is at most `bound`, otherwise `None`.
///
/// Only the diagonal band of width `2 * bound + 1` is evaluated and the scan
/// stops as soon as a whole row exceeds the bound.
pub fn osa_distance_within(a: &[char], b: &[char], bound: usize) -> Option<usize> {
    let (n, m) = (a.len(), b.len());
    if n.abs_diff(m) > bound {
        return None;
    }
    if n == 0 || m == 0 {
        return Some(n.max(m));
    }
    let cap = bound + 1;
    let width = m + 1;
    let mut two_back: Vec<usize> = vec![cap; width];
    let mut prev: Vec<usize> = (0..width).map(|j| j.min(cap)).collect();
    let mut cur: Vec<usize> = vec![cap; width];

    for i in 1..=n {
        let lo = i.saturating_sub(bound).max(1);
        let hi = (i + bound).min(m);
        cur.fill(cap);
        cur[0] = i.min(cap);
        let mut row_min = cur[0];
        for j in lo..=hi {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut best = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                best = best.min(two_back[j - 2] + 1);
            }
            let best = best.min(cap);
            cur[j] = best;
            row_min = row_min.min(best);
        }
        if row_min > bound {
            return None;
        }
        std::mem::swap(&mut two_back, &mut prev);
        std::mem::swap(&mut prev, &mut cur);
    }
    let d = prev[m];
    (d <= bound).then_some(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_values() {
        assert_eq!(osa_distance("abc", "abc"), 0);
        assert_eq!(osa_distance("ca", "ac"), 1);
        assert_eq!(osa_distance("kitten", "sitting"), 3);
        assert_eq!(osa_distance("", "abc"), 3);
        assert_eq!(osa_distance("abc", ""), 3);
        // OSA forbids editing the transposed pair again; unrestricted DL gives 2.
        assert_eq!(osa_distance("ca", "abc"), 3);
        assert_eq!(osa_distance("café", "cafe"), 1);
    }

    proptest! {
        #[test]
        fn bounded_agrees_with_full(a in "[abcd ]{0,14}", b in "[abcd ]{0,14}", bound in 0usize..10) {
            let ac: Vec<char> = a.chars().collect();
            let bc: Vec<char> = b.chars().collect();
            let full = osa_chars(&ac, &bc);
            let banded = osa_distance_within(&ac, &bc, bound);
            if full <= bound {
                prop_assert_eq!(banded, Some(full));
            } else {
                prop_assert_eq!(banded, None);
            }
        }
    }
}
