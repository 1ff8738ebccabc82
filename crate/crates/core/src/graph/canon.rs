//! Canonical labeling and automorphism counting by exhaustive search.
//!
//! Works on labeled multigraphs: each vertex carries a label and each
//! half-edge carries a label. Vertices are first split into classes by a
//! local invariant, then every within-class permutation is tried.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_VERTICES: usize = 8;

pub type HalfEdge<H> = (usize, H);
pub type LabeledEdge<H> = (HalfEdge<H>, HalfEdge<H>);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonKey<V, H> {
    pub vertices: Vec<V>,
    pub edges: Vec<LabeledEdge<H>>,
}

#[derive(Clone, Debug)]
pub struct Canon<V, H> {
    pub key: CanonKey<V, H>,
    /// `vertex_perm[old] = new`.
    pub vertex_perm: Vec<usize>,
    /// `edge_map[old] = (new, swapped)`; `swapped` means the old tail half became the second half.
    pub edge_map: Vec<(usize, bool)>,
    pub aut: u64,
}

fn encode<H: Ord + Clone>(edges: &[LabeledEdge<H>], pos: &[usize]) -> Vec<(LabeledEdge<H>, usize, bool)> {
    let mut out: Vec<(LabeledEdge<H>, usize, bool)> = edges
        .iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let a2 = (pos[a.0], a.1.clone());
            let b2 = (pos[b.0], b.1.clone());
            if b2 < a2 {
                ((b2, a2), i, true)
            } else {
                ((a2, b2), i, false)
            }
        })
        .collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

pub fn canonicalize<V, H>(labels: &[V], edges: &[LabeledEdge<H>], max_vertices: usize) -> Result<Canon<V, H>>
where
    V: Ord + Clone,
    H: Ord + Clone,
{
    let n = labels.len();
    if n > max_vertices {
        return Err(Error::Budget(format!("{n} vertices exceeds the bound {max_vertices}")));
    }
    // Local invariant: own label plus the sorted incidence profile.
    let mut inv: Vec<(V, Vec<(H, bool, V, H)>, usize)> = (0..n)
        .map(|v| {
            let mut prof = Vec::new();
            for (a, b) in edges {
                if a.0 == v {
                    prof.push((a.1.clone(), b.0 == v, labels[b.0].clone(), b.1.clone()));
                }
                if b.0 == v {
                    prof.push((b.1.clone(), a.0 == v, labels[a.0].clone(), a.1.clone()));
                }
            }
            prof.sort();
            (labels[v].clone(), prof, v)
        })
        .collect();
    inv.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, item) in inv.iter().enumerate() {
        if i > 0 && (&inv[i - 1].0, &inv[i - 1].1) == (&item.0, &item.1) {
            classes.last_mut().expect("nonempty").push(item.2);
        } else {
            classes.push(vec![item.2]);
        }
    }
    let sorted_labels: Vec<V> = inv.iter().map(|x| x.0.clone()).collect();

    // Enumerate all within-class orderings.
    let mut best: Option<Vec<(LabeledEdge<H>, usize, bool)>> = None;
    let mut best_pos: Vec<usize> = Vec::new();
    let mut count: u64 = 0;
    let mut order: Vec<Vec<usize>> = classes.clone();
    loop {
        let mut pos = vec![0usize; n];
        let mut next = 0;
        for c in &order {
            for &v in c {
                pos[v] = next;
                next += 1;
            }
        }
        let enc = encode(edges, &pos);
        let cmp = best.as_ref().map(|b| enc.iter().map(|x| &x.0).cmp(b.iter().map(|x| &x.0)));
        match cmp {
            None | Some(std::cmp::Ordering::Less) => {
                best = Some(enc);
                best_pos = pos;
                count = 1;
            }
            Some(std::cmp::Ordering::Equal) => count += 1,
            Some(std::cmp::Ordering::Greater) => {}
        }
        if !advance(&mut order) {
            break;
        }
    }
    let best = best.expect("at least one ordering");
    let mut edge_map = vec![(0, false); edges.len()];
    for (new, (_, old, sw)) in best.iter().enumerate() {
        edge_map[*old] = (new, *sw);
    }
    let key_edges: Vec<LabeledEdge<H>> = best.into_iter().map(|x| x.0).collect();
    let mut aut = count;
    let mut i = 0;
    while i < key_edges.len() {
        let mut j = i;
        while j < key_edges.len() && key_edges[j] == key_edges[i] {
            j += 1;
        }
        aut *= (1..=(j - i) as u64).product::<u64>();
        i = j;
    }
    for (a, b) in &key_edges {
        if a == b {
            aut *= 2;
        }
    }
    Ok(Canon { key: CanonKey { vertices: sorted_labels, edges: key_edges }, vertex_perm: best_pos, edge_map, aut })
}

/// Next permutation within each class (odometer over classes, lexicographic inside).
fn advance(order: &mut [Vec<usize>]) -> bool {
    for c in order.iter_mut().rev() {
        if next_permutation(c) {
            return true;
        }
        // next_permutation wrapped this class back to ascending; carry.
    }
    false
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.sort_unstable();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_cover_all() {
        let mut v = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
        assert_eq!(v, vec![0, 1, 2]);
    }

    #[test]
    fn banana_and_loop() {
        let e = ((0usize, ()), (1usize, ()));
        let c = canonicalize(&[0u32, 0], &[e, e, e], 8).unwrap();
        assert_eq!(c.aut, 12);
        let l = ((0usize, ()), (0usize, ()));
        let c = canonicalize(&[1u32], &[l], 8).unwrap();
        assert_eq!(c.aut, 2);
        let d = ((0usize, 0u8), (0usize, 1u8));
        let c = canonicalize(&[1u32], &[d], 8).unwrap();
        assert_eq!(c.aut, 1);
    }

    #[test]
    fn vertex_bound() {
        let labels = vec![0u32; 9];
        assert!(canonicalize::<u32, ()>(&labels, &[], 8).is_err());
    }
}
