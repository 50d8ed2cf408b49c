//! Maximum bipartite matching (augmenting paths). Inputs here are author
//! lists and given-name components, so the O(V·E) bound is never an issue.

pub fn max_bipartite_matching<F>(n_left: usize, n_right: usize, edge: F) -> usize
where
    F: Fn(usize, usize) -> bool,
{
    let adj: Vec<Vec<usize>> = (0..n_left)
        .map(|i| (0..n_right).filter(|&j| edge(i, j)).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; n_right];
    let mut size = 0;
    for left in 0..n_left {
        let mut seen = vec![false; n_right];
        if augment(left, &adj, &mut owner, &mut seen) {
            size += 1;
        }
    }
    size
}

fn augment(
    left: usize,
    adj: &[Vec<usize>],
    owner: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &right in &adj[left] {
        if seen[right] {
            continue;
        }
        seen[right] = true;
        let free = match owner[right] {
            None => true,
            Some(other) => augment(other, adj, owner, seen),
        };
        if free {
            owner[right] = Some(left);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_augmenting_path() {
        // left0 -> {0,1}, left1 -> {0}; greedy 0->0 must be undone
        let edges = [[true, true], [true, false]];
        assert_eq!(max_bipartite_matching(2, 2, |i, j| edges[i][j]), 2);
    }

    #[test]
    fn empty_sides() {
        assert_eq!(max_bipartite_matching(0, 3, |_, _| true), 0);
        assert_eq!(max_bipartite_matching(3, 0, |_, _| true), 0);
    }
}
