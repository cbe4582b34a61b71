//! Unshuffle enumeration.
//!
//! An (i1, ..., ir)-unshuffle of {0, ..., n-1} (n = sum of sizes) is an
//! ordered set partition into blocks of the given sizes; as a permutation it
//! is order-preserving on each consecutive slot interval. We represent one
//! as the concatenation of its blocks, each block listed increasing, so
//! `u[slot] = element`. All enumerations are deterministic (lexicographic in
//! the block contents).
//!
//! Two restricted variants index the deduplicated sums of the transfer
//! machinery: the sorted variant (block sizes non-decreasing, and adjacent
//! equal-size blocks ordered by their first elements) and the anchored
//! variant (sorted, plus element 0 in the first slot).

/// All (sizes)-unshuffles. Blocks of size zero are allowed and contribute
/// nothing to the output slots.
pub fn unshuffles(sizes: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = sizes.iter().sum();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let pool: Vec<usize> = (0..n).collect();
    fill(sizes, &pool, &mut current, &mut out);
    out
}

fn fill(sizes: &[usize], pool: &[usize], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    match sizes.split_first() {
        None => out.push(current.clone()),
        Some((&size, rest)) => {
            for combo in combinations(pool.len(), size) {
                let before = current.len();
                current.extend(combo.iter().map(|&i| pool[i]));
                let remaining: Vec<usize> = (0..pool.len())
                    .filter(|i| !combo.contains(i))
                    .map(|i| pool[i])
                    .collect();
                fill(rest, &remaining, current, out);
                current.truncate(before);
            }
        }
    }
}

/// All increasing `k`-subsets of {0, ..., n-1}, lexicographically.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The sorted variant: requires non-decreasing sizes; adjacent blocks of
/// equal size must have increasing first elements, so each set partition
/// with the given size multiset appears exactly once.
pub fn sorted_unshuffles(sizes: &[usize]) -> Vec<Vec<usize>> {
    assert!(
        sizes.windows(2).all(|w| w[0] <= w[1]),
        "sorted unshuffles need non-decreasing block sizes, got {sizes:?}"
    );
    unshuffles(sizes)
        .into_iter()
        .filter(|u| {
            let mut start = 0;
            for w in sizes.windows(2) {
                if w[0] == w[1] && u[start] > u[start + w[0]] {
                    return false;
                }
                start += w[0];
            }
            true
        })
        .collect()
}

/// The anchored variant: sorted, and the first slot holds element 0.
pub fn anchored_unshuffles(sizes: &[usize]) -> Vec<Vec<usize>> {
    sorted_unshuffles(sizes)
        .into_iter()
        .filter(|u| u.first() == Some(&0))
        .collect()
}

/// Ordered compositions of n into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Compositions of n with non-decreasing parts (that is, partitions of n
/// written in increasing order).
pub fn sorted_compositions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, min: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in min..=n {
            for mut rest in go(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    go(n, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn two_block_counts_are_binomial() {
        for n in 0..=7 {
            for p in 0..=n {
                assert_eq!(unshuffles(&[p, n - p]).len(), binomial(n, p), "({p},{})", n - p);
            }
        }
    }

    #[test]
    fn blocks_are_increasing_and_partition_everything() {
        for u in unshuffles(&[2, 1, 3]) {
            assert!(u[0] < u[1]);
            assert!(u[3] < u[4] && u[4] < u[5]);
            let mut sorted = u.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..6).collect::<Vec<_>>());
        }
        assert_eq!(unshuffles(&[2, 1, 3]).len(), 60); // 6!/(2!1!3!)
    }

    #[test]
    fn sorted_variant_dedups_equal_blocks() {
        // sizes (1,1,2) of 4 elements: 12 plain, 6 after the tie-break
        assert_eq!(unshuffles(&[1, 1, 2]).len(), 12);
        assert_eq!(sorted_unshuffles(&[1, 1, 2]).len(), 6);
        // sizes (2,2): 6 plain, 3 sorted
        assert_eq!(sorted_unshuffles(&[2, 2]).len(), 3);
        for u in sorted_unshuffles(&[2, 2]) {
            assert!(u[0] < u[2]);
        }
    }

    #[test]
    fn anchored_variant_pins_element_zero() {
        // S-bar(1,2) keeps only ({0},{1,2})
        assert_eq!(anchored_unshuffles(&[1, 2]), vec![vec![0, 1, 2]]);
        // S-bar(1,1) is the identity alone
        assert_eq!(anchored_unshuffles(&[1, 1]), vec![vec![0, 1]]);
        for u in anchored_unshuffles(&[2, 2]) {
            assert_eq!(u[0], 0);
        }
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(4).len(), 8); // 2^(n-1)
        assert_eq!(
            sorted_compositions(4),
            vec![vec![1, 1, 1, 1], vec![1, 1, 2], vec![1, 3], vec![2, 2], vec![4]]
        );
        assert_eq!(compositions(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn empty_blocks_are_legal() {
        assert_eq!(unshuffles(&[3, 0]).len(), 1);
        assert_eq!(unshuffles(&[0, 3]).len(), 1);
        assert_eq!(unshuffles(&[0, 0]), vec![Vec::<usize>::new()]);
    }
}
