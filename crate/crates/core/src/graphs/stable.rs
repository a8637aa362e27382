use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;

use super::decorated::{DecoratedGraph, Half, HalfRef, Vertex};

/// Undecorated stable graph; the canonical form of a [`DecoratedGraph`]
/// whose decorations and weights are all zero.
pub type StableGraph = DecoratedGraph;

/// All ways of splitting vertex `v` of `g` into two vertices joined by a
/// new edge, or of adding a self-loop at `v`. Decorations on half-edges
/// follow them; κ decorations at `v` are dropped (callers redistribute).
/// The new edge is the last one, its first end on the side keeping index
/// `v`. Ordered splits: `(g1, S1)` and `(g2, S2)` are both produced.
pub fn vertex_degenerations(g: &DecoratedGraph, v: usize) -> Vec<DecoratedGraph> {
    let mut out = Vec::new();
    let gv = g.vertices[v].genus;
    let halves = g.halves_at(v);
    if gv >= 1 {
        let mut h = g.clone();
        h.vertices[v] = Vertex::new(gv - 1);
        h.edges.push((Half::new(v, 0), Half::new(v, 0)));
        out.push(h);
    }
    let m = halves.len();
    for mask in 0u64..(1u64 << m) {
        let side2: Vec<HalfRef> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| halves[i]).collect();
        let n1 = m - side2.len() + 1;
        let n2 = side2.len() + 1;
        for g1 in 0..=gv {
            let g2 = gv - g1;
            if 2 * g1 as i64 - 2 + n1 as i64 <= 0 || 2 * g2 as i64 - 2 + n2 as i64 <= 0 {
                continue;
            }
            let mut h = g.clone();
            let nv = h.vertices.len();
            h.vertices[v] = Vertex::new(g1);
            h.vertices.push(Vertex::new(g2));
            for &r in &side2 {
                h.half_mut(r).vertex = nv;
            }
            h.edges.push((Half::new(v, 0), Half::new(nv, 0)));
            out.push(h);
        }
    }
    out
}

type GraphCache = RwLock<HashMap<(u32, usize), Arc<Vec<Vec<StableGraph>>>>>;

static GRAPHS: std::sync::LazyLock<GraphCache> = std::sync::LazyLock::new(|| RwLock::new(HashMap::new()));

/// Stable graphs of `M̄_{g,n}` grouped by number of edges (index = edge
/// count), up to `3g - 3 + n` edges, in deterministic order.
pub fn stable_graphs_by_edges(g: u32, n: usize) -> Arc<Vec<Vec<StableGraph>>> {
    if let Some(v) = GRAPHS.read().get(&(g, n)) {
        return v.clone();
    }
    let dim = 3 * g as i64 - 3 + n as i64;
    assert!(dim >= 0, "unstable (g, n) = ({g}, {n})");
    let mut levels: Vec<Vec<StableGraph>> = vec![vec![DecoratedGraph::smooth(g, &vec![0; n]).canonical()]];
    for _ in 0..dim {
        let mut next = BTreeSet::new();
        for gr in levels.last().unwrap() {
            for v in 0..gr.num_vertices() {
                for h in vertex_degenerations(gr, v) {
                    next.insert(h.canonical());
                }
            }
        }
        levels.push(next.into_iter().collect());
    }
    let arc = Arc::new(levels);
    GRAPHS.write().insert((g, n), arc.clone());
    arc
}

/// `enumerate_stable_graphs(g, n, max_edges)`: one representative per
/// isomorphism class with at most `max_edges` edges.
pub fn enumerate_stable_graphs(g: u32, n: usize, max_edges: usize) -> Vec<StableGraph> {
    stable_graphs_by_edges(g, n).iter().take(max_edges + 1).flatten().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_stable_graphs(0, 3, 5).len(), 1);
        assert_eq!(enumerate_stable_graphs(1, 1, 1).len(), 2);
        assert_eq!(enumerate_stable_graphs(2, 0, 3).len(), 7);
        assert_eq!(enumerate_stable_graphs(0, 4, 1).len(), 4);
        assert_eq!(enumerate_stable_graphs(0, 5, 2).len(), 1 + 10 + 15);
        assert_eq!(enumerate_stable_graphs(1, 2, 2).len(), 5);
    }
}
