use std::collections::VecDeque;

/// Breadth-first level structure from `start`, restricted to unvisited nodes.
fn bfs_levels(adj: &[Vec<usize>], start: usize, mask: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut levels = vec![vec![start]];
    loop {
        let mut next = Vec::new();
        for &v in levels.last().expect("nonempty") {
            for &w in &adj[v] {
                if !seen[w] && !mask[w] {
                    seen[w] = true;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            return levels;
        }
        levels.push(next);
    }
}

/// George–Liu pseudo-peripheral node search.
fn pseudo_peripheral(adj: &[Vec<usize>], start: usize, mask: &[bool]) -> usize {
    let mut root = start;
    let mut levels = bfs_levels(adj, root, mask);
    loop {
        let last = levels.last().expect("nonempty");
        let cand = *last
            .iter()
            .min_by_key(|&&v| (adj[v].len(), v))
            .expect("nonempty level");
        let cand_levels = bfs_levels(adj, cand, mask);
        if cand_levels.len() > levels.len() {
            root = cand;
            levels = cand_levels;
        } else {
            return root;
        }
    }
}

/// Reverse Cuthill–McKee ordering; returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (adj[v].len(), v));
    for &seed in &by_degree {
        if placed[seed] {
            continue;
        }
        let root = pseudo_peripheral(adj, seed, &placed);
        let mut queue = VecDeque::from([root]);
        placed[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = adj[v].iter().copied().filter(|&w| !placed[w]).collect();
            nbrs.sort_by_key(|&w| (adj[w].len(), w));
            for w in nbrs {
                placed[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Maximum lower bandwidth of the pattern under `perm`.
pub fn bandwidth(adj: &[Vec<usize>], perm: &[usize]) -> usize {
    let mut inv = vec![0usize; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    adj.iter()
        .enumerate()
        .flat_map(|(v, nb)| nb.iter().map(move |&w| (v, w)))
        .map(|(v, w)| inv[v].abs_diff(inv[w]))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<Vec<usize>> {
        let id = |i: usize, j: usize| j * n + i;
        let mut adj = vec![Vec::new(); n * n];
        for j in 0..n {
            for i in 0..n {
                if i + 1 < n {
                    adj[id(i, j)].push(id(i + 1, j));
                    adj[id(i + 1, j)].push(id(i, j));
                }
                if j + 1 < n {
                    adj[id(i, j)].push(id(i, j + 1));
                    adj[id(i, j + 1)].push(id(i, j));
                }
            }
        }
        adj
    }

    #[test]
    fn rcm_is_permutation_with_small_band() {
        let adj = grid(10);
        let p = reverse_cuthill_mckee(&adj);
        let mut s = p.clone();
        s.sort_unstable();
        assert_eq!(s, (0..100).collect::<Vec<_>>());
        assert!(bandwidth(&adj, &p) <= 11);
    }

    #[test]
    fn disconnected_components() {
        let adj = vec![vec![1], vec![0], vec![], vec![4], vec![3]];
        let p = reverse_cuthill_mckee(&adj);
        assert_eq!(p.len(), 5);
    }
}
