//! Transportation simplex on the complete bipartite graph.
//!
//! Rows are sources, columns are targets. A basis is a spanning tree of the
//! `n + m` nodes with `n + m - 1` basic cells (some of them degenerate, with
//! zero flow). Each iteration prices all cells against the node potentials,
//! brings in the most negative reduced cost, and pivots around the unique
//! cycle the new cell closes in the tree. After a long run of degenerate
//! pivots pricing switches to Bland's rule, which cannot cycle.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const DEGENERATE_STREAK: usize = 50;

/// A basic cell `(row, col, flow)`.
type Cell = (usize, usize, f64);

struct Tree {
    potential: Vec<f64>,
    parent: Vec<usize>,
    parent_cell: Vec<usize>,
    depth: Vec<usize>,
}

/// Minimises `sum cost[i][j] x_ij` subject to row sums `supply` and column
/// sums `demand`. Returns the positive cells of an optimal solution.
pub(crate) fn solve(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<Vec<Cell>> {
    let (n, m) = (supply.len(), demand.len());
    debug_assert_eq!(cost.len(), n * m);
    let cmax = cost.iter().fold(0.0f64, |a, &c| a.max(c.abs()));
    let eps = 1e-12 * cmax.max(1.0);

    let mut basis = northwest_corner(supply, demand);
    let max_iter = 10_000 + 20 * n * m;
    let mut streak = 0;
    for _ in 0..max_iter {
        let tree = span(n, m, &basis, cost)?;
        let entering = if streak > DEGENERATE_STREAK {
            bland(n, m, cost, &tree, eps)
        } else {
            dantzig(n, m, cost, &tree, eps)
        };
        let Some((i, j)) = entering else {
            basis.retain(|c| c.2 > 0.0);
            return Ok(basis);
        };
        let theta = pivot(n, &mut basis, &tree, i, j);
        streak = if theta > 0.0 { 0 } else { streak + 1 };
    }
    Err(Error::SolverFault(format!("no optimum after {max_iter} pivots on a {n}x{m} problem")))
}

fn northwest_corner(supply: &[f64], demand: &[f64]) -> Vec<Cell> {
    let (n, m) = (supply.len(), demand.len());
    let mut a = supply.to_vec();
    let mut b = demand.to_vec();
    let (mut i, mut j) = (0, 0);
    let mut basis = Vec::with_capacity(n + m - 1);
    loop {
        let x = a[i].min(b[j]).max(0.0);
        basis.push((i, j, x));
        a[i] -= x;
        b[j] -= x;
        if i == n - 1 && j == m - 1 {
            break;
        }
        if i == n - 1 {
            j += 1;
        } else if j == m - 1 || a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    basis
}

/// Potentials `u_i` (node `i`) and `v_j` (node `n + j`) with
/// `u_i + v_j = c_ij` on basic cells, plus the tree rooted at row 0.
fn span(n: usize, m: usize, basis: &[Cell], cost: &[f64]) -> Result<Tree> {
    let nodes = n + m;
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
    for (k, &(i, j, _)) in basis.iter().enumerate() {
        adj[i].push((n + j, k));
        adj[n + j].push((i, k));
    }
    let mut tree = Tree {
        potential: vec![0.0; nodes],
        parent: vec![usize::MAX; nodes],
        parent_cell: vec![usize::MAX; nodes],
        depth: vec![0; nodes],
    };
    let mut seen = vec![false; nodes];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &(w, k) in &adj[u] {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            reached += 1;
            let (i, j, _) = basis[k];
            let c = cost[i * m + j];
            tree.potential[w] = c - tree.potential[u];
            tree.parent[w] = u;
            tree.parent_cell[w] = k;
            tree.depth[w] = tree.depth[u] + 1;
            queue.push_back(w);
        }
    }
    if reached != nodes {
        return Err(Error::SolverFault("basis does not span the bipartite graph".into()));
    }
    Ok(tree)
}

fn reduced(cost: &[f64], m: usize, n: usize, tree: &Tree, i: usize, j: usize) -> f64 {
    cost[i * m + j] - tree.potential[i] - tree.potential[n + j]
}

fn dantzig(n: usize, m: usize, cost: &[f64], tree: &Tree, eps: f64) -> Option<(usize, usize)> {
    let mut best = -eps;
    let mut found = None;
    for i in 0..n {
        for j in 0..m {
            let r = reduced(cost, m, n, tree, i, j);
            if r < best {
                best = r;
                found = Some((i, j));
            }
        }
    }
    found
}

fn bland(n: usize, m: usize, cost: &[f64], tree: &Tree, eps: f64) -> Option<(usize, usize)> {
    (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).find(|&(i, j)| reduced(cost, m, n, tree, i, j) < -eps)
}

/// Adds cell `(i, j)` to the basis, shifts flow around the cycle it closes
/// and drops the blocking cell. Returns the amount shifted.
fn pivot(n: usize, basis: &mut [Cell], tree: &Tree, i: usize, j: usize) -> f64 {
    // Tree path from column node n + j to row node i. Walking it from the
    // column side, edges alternate -, +, -, ... with the entering cell +.
    let (mut a, mut b) = (n + j, i);
    let mut from_col: Vec<usize> = Vec::new();
    let mut from_row: Vec<usize> = Vec::new();
    while tree.depth[a] > tree.depth[b] {
        from_col.push(tree.parent_cell[a]);
        a = tree.parent[a];
    }
    while tree.depth[b] > tree.depth[a] {
        from_row.push(tree.parent_cell[b]);
        b = tree.parent[b];
    }
    while a != b {
        from_col.push(tree.parent_cell[a]);
        a = tree.parent[a];
        from_row.push(tree.parent_cell[b]);
        b = tree.parent[b];
    }
    from_col.extend(from_row.into_iter().rev());
    let path = from_col;

    let mut leave = usize::MAX;
    let mut theta = f64::INFINITY;
    for &k in path.iter().step_by(2) {
        let (ki, kj, x) = basis[k];
        let better = x < theta || (x == theta && (ki, kj) < (basis[leave].0, basis[leave].1));
        if better {
            theta = x;
            leave = k;
        }
    }
    for (pos, &k) in path.iter().enumerate() {
        if pos % 2 == 0 {
            basis[k].2 -= theta;
        } else {
            basis[k].2 += theta;
        }
    }
    basis[leave] = (i, j, theta);
    theta
}
