//! Exhaustive oracles shared by the integration tests.
#![allow(dead_code)]

/// Calls `f` on every permutation of `items` (Heap's algorithm).
pub fn for_each_permutation(items: &mut [usize], f: &mut impl FnMut(&[usize])) {
    fn go(k: usize, items: &mut [usize], f: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            f(items);
            return;
        }
        for i in 0..k {
            go(k - 1, items, f);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            items.swap(j, k - 1);
        }
    }
    let k = items.len();
    go(k, items, f);
}

/// Optimal GTSP cost by enumerating every order (set 0 first) and every
/// node choice. `cost[u][v]` is indexed by global node id; `sets[i]` lists
/// the node ids of set `i`.
pub fn brute_gtsp(sets: &[Vec<usize>], cost: &[Vec<f64>]) -> f64 {
    let n = sets.len();
    if n == 1 {
        return 0.0;
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = f64::INFINITY;
    for_each_permutation(&mut rest, &mut |perm| {
        let order: Vec<usize> = std::iter::once(0).chain(perm.iter().copied()).collect();
        let mut pick = vec![0usize; n];
        loop {
            let mut c = 0.0;
            for i in 0..n {
                let (a, b) = (order[i], order[(i + 1) % n]);
                c += cost[sets[a][pick[a]]][sets[b][pick[b]]];
            }
            best = best.min(c);
            // odometer over choices
            let mut k = 0;
            while k < n {
                pick[k] += 1;
                if pick[k] < sets[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    });
    best
}

/// Optimal directed cycle over all nodes.
pub fn brute_atsp(cost: &[Vec<f64>]) -> f64 {
    let sets: Vec<Vec<usize>> = (0..cost.len()).map(|i| vec![i]).collect();
    brute_gtsp(&sets, cost)
}

/// Optimal Hamiltonian cycle of a symmetric matrix, enumerating every cycle
/// that avoids infinite edges by depth-first search from node 0.
pub fn brute_stsp(cost: &[Vec<f64>]) -> f64 {
    fn dfs(cost: &[Vec<f64>], here: usize, visited: &mut [bool], count: usize, acc: f64, best: &mut f64) {
        let n = cost.len();
        if count == n {
            *best = best.min(acc + cost[here][0]);
            return;
        }
        for next in 1..n {
            if !visited[next] && cost[here][next].is_finite() {
                visited[next] = true;
                dfs(cost, next, visited, count + 1, acc + cost[here][next], best);
                visited[next] = false;
            }
        }
    }
    let mut visited = vec![false; cost.len()];
    visited[0] = true;
    let mut best = f64::INFINITY;
    dfs(cost, 0, &mut visited, 1, 0.0, &mut best);
    best
}
