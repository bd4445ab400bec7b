//! Integer partitions and compositions for the combinatorial sums.

/// All partitions of `n` as `(part, multiplicity)` lists with distinct
/// parts in descending order. `partitions(0)` is the single empty
/// partition.
pub fn partitions(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn descend(rest: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest == 0 {
            let mut grouped: Vec<(usize, usize)> = Vec::new();
            for &p in current.iter() {
                match grouped.last_mut() {
                    Some((q, m)) if *q == p => *m += 1,
                    _ => grouped.push((p, 1)),
                }
            }
            out.push(grouped);
            return;
        }
        let top = rest.min(max_part);
        for p in (1..=top).rev() {
            current.push(p);
            descend(rest - p, p, current, out);
            current.pop();
        }
    }
    descend(n, n, &mut current, &mut out);
    out
}

/// All compositions of `n` (ordered tuples of positive integers summing
/// to `n`). There are `2^(n-1)` of them, so keep `n` small.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn descend(rest: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(current.clone());
            return;
        }
        for first in 1..=rest {
            current.push(first);
            descend(rest - first, current, out);
            current.pop();
        }
    }
    descend(n, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts_match_the_classical_table() {
        // p(n) for n = 0..10: 1 1 2 3 5 7 11 15 22 30 42.
        let expected = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(partitions(n).len(), e, "p({n})");
        }
        assert_eq!(partitions(20).len(), 627);
    }

    #[test]
    fn partitions_preserve_total_and_distinctness() {
        for part in partitions(9) {
            let total: usize = part.iter().map(|(p, m)| p * m).sum();
            assert_eq!(total, 9);
            for w in part.windows(2) {
                assert!(w[0].0 > w[1].0);
            }
        }
    }

    #[test]
    fn composition_counts_are_powers_of_two() {
        for n in 1..=8 {
            assert_eq!(compositions(n).len(), 1 << (n - 1));
        }
    }
}
