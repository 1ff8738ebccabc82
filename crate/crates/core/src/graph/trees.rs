//! Spanning trees, the matrix-tree count and fundamental-cycle data.

use num_bigint::BigInt;
use num_traits::Zero;

use super::model::StableGraph;
use crate::error::{Error, Result};
use crate::exactmath::rational::{int, Rational};

/// A spanning tree as a sorted list of edge indices.
pub type SpanningTree = Vec<usize>;

/// Every spanning tree exactly once, in lexicographic order of edge sets.
pub fn spanning_trees(g: &StableGraph) -> Result<Vec<SpanningTree>> {
    if !g.is_connected() {
        return Err(Error::Graph("spanning trees of a disconnected graph".into()));
    }
    let nv = g.num_vertices();
    let cand: Vec<usize> = (0..g.num_edges()).filter(|&e| !g.edges[e].is_loop()).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        g: &StableGraph,
        cand: &[usize],
        start: usize,
        need: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == need {
            if acyclic(g, cur) {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..cand.len() {
            if cand.len() - i < need - cur.len() {
                break;
            }
            cur.push(cand[i]);
            rec(g, cand, i + 1, need, cur, out);
            cur.pop();
        }
    }
    rec(g, &cand, 0, nv - 1, &mut cur, &mut out);
    Ok(out)
}

fn acyclic(g: &StableGraph, edges: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..g.num_vertices()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &e in edges {
        let (a, b) = (find(&mut parent, g.edges[e].tail), find(&mut parent, g.edges[e].head));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Number of spanning trees from the reduced Laplacian determinant.
pub fn kirchhoff_count(g: &StableGraph) -> BigInt {
    let n = g.num_vertices();
    if n == 1 {
        return BigInt::from(1);
    }
    let m = n - 1;
    let mut a = vec![vec![Rational::zero(); m]; m];
    for e in &g.edges {
        if e.is_loop() {
            continue;
        }
        let (u, v) = (e.tail, e.head);
        for (x, y) in [(u, v), (v, u)] {
            if x < m {
                a[x][x] += int(1);
                if y < m {
                    a[x][y] -= int(1);
                }
            }
        }
    }
    let mut det = int(1);
    for col in 0..m {
        let Some(piv) = (col..m).find(|&r| !a[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col].clone();
        for r in col + 1..m {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..m {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det.to_integer()
}

/// Fundamental-cycle data of a spanning tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleData {
    /// For a non-tree edge: signed coefficients over all edges, `+1` on the edge itself.
    pub cycle: Vec<Option<Vec<i64>>>,
    /// For a tree edge: vertices of the component of `T - e` containing the head of `e`.
    pub head_side: Vec<Option<Vec<usize>>>,
}

pub fn cycle_data(g: &StableGraph, tree: &[usize]) -> Result<CycleData> {
    let ne = g.num_edges();
    let nv = g.num_vertices();
    if tree.len() + 1 != nv || !acyclic(g, tree) {
        return Err(Error::Graph("not a spanning tree".into()));
    }
    let in_tree = |e: usize| tree.contains(&e);
    let mut cycle = vec![None; ne];
    let mut head_side = vec![None; ne];
    for e in 0..ne {
        if in_tree(e) {
            let (tail, head) = (g.edges[e].tail, g.edges[e].head);
            let mut seen = vec![false; nv];
            seen[head] = true;
            let mut stack = vec![head];
            while let Some(v) = stack.pop() {
                for &f in tree {
                    if f == e {
                        continue;
                    }
                    let ed = g.edges[f];
                    for (a, b) in [(ed.tail, ed.head), (ed.head, ed.tail)] {
                        if a == v && !seen[b] {
                            seen[b] = true;
                            stack.push(b);
                        }
                    }
                }
            }
            debug_assert!(!seen[tail]);
            head_side[e] = Some((0..nv).filter(|&v| seen[v]).collect());
        } else {
            let mut coeffs = vec![0i64; ne];
            coeffs[e] = 1;
            let ed = g.edges[e];
            if !ed.is_loop() {
                // Walk the tree from head(e) back to tail(e); an edge crossed along its
                // orientation counts +1.
                for (f, forward) in tree_path(g, tree, ed.head, ed.tail) {
                    coeffs[f] += if forward { 1 } else { -1 };
                }
            }
            cycle[e] = Some(coeffs);
        }
    }
    Ok(CycleData { cycle, head_side })
}

/// Tree edges on the path from `from` to `to`, with whether each is crossed tail-to-head.
fn tree_path(g: &StableGraph, tree: &[usize], from: usize, to: usize) -> Vec<(usize, bool)> {
    let nv = g.num_vertices();
    let mut prev: Vec<Option<(usize, usize, bool)>> = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[from] = true;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &f in tree {
            let ed = g.edges[f];
            for (a, b, fwd) in [(ed.tail, ed.head, true), (ed.head, ed.tail, false)] {
                if a == v && !seen[b] {
                    seen[b] = true;
                    prev[b] = Some((v, f, fwd));
                    queue.push_back(b);
                }
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, f, fwd) = prev[cur].expect("tree spans");
        path.push((f, fwd));
        cur = p;
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::model::Vertex;

    fn v(g: u32) -> Vertex {
        StableGraph::v(g, &[])
    }

    #[test]
    fn tree_counts() {
        let lp = StableGraph::raw(vec![v(1)], vec![StableGraph::e(0, 0)], false);
        assert_eq!(spanning_trees(&lp).unwrap(), vec![Vec::<usize>::new()]);
        let two = StableGraph::raw(vec![v(0), v(0)], vec![StableGraph::e(0, 1); 2], false);
        assert_eq!(spanning_trees(&two).unwrap().len(), 2);
        let three = StableGraph::raw(vec![v(0), v(0)], vec![StableGraph::e(0, 1); 3], false);
        assert_eq!(spanning_trees(&three).unwrap().len(), 3);
        assert_eq!(kirchhoff_count(&three), BigInt::from(3));
        let tri = StableGraph::raw(
            vec![v(0), v(0), v(0)],
            vec![StableGraph::e(0, 1), StableGraph::e(1, 2), StableGraph::e(2, 0), StableGraph::e(0, 1)],
            false,
        );
        assert_eq!(kirchhoff_count(&tri), BigInt::from(spanning_trees(&tri).unwrap().len()));
    }

    #[test]
    fn cycles() {
        let lp = StableGraph::raw(vec![v(1)], vec![StableGraph::e(0, 0)], false);
        let cd = cycle_data(&lp, &[]).unwrap();
        assert_eq!(cd.cycle[0], Some(vec![1]));
        let two = StableGraph::raw(vec![v(0), v(0)], vec![StableGraph::e(0, 1); 2], false);
        let cd = cycle_data(&two, &[0]).unwrap();
        assert_eq!(cd.cycle[1], Some(vec![-1, 1]));
        assert_eq!(cd.head_side[0], Some(vec![1]));
        let tree = StableGraph::raw(vec![v(1), v(1)], vec![StableGraph::e(0, 1)], false);
        assert_eq!(cycle_data(&tree, &[0]).unwrap().head_side[0], Some(vec![1]));
    }
}
