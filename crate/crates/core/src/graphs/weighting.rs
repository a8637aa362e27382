use super::decorated::{DecoratedGraph, HalfRef};

/// Weight of the opposite end of a node whose end carries `k`. Balanced
/// nodes: the two ends sum to zero mod `r`.
pub fn opposite(k: u64, r: u64) -> u64 {
    (r - k % r) % r
}

/// Residue required by the local selection rule at `v`:
/// `s(2g_v - 2 + n_v) - Σ_h k_h ≡ 0 mod r`.
fn vertex_target(g: &DecoratedGraph, v: usize, r: u64) -> u64 {
    let e = 2 * g.vertices[v].genus as i64 - 2 + g.valence(v) as i64;
    e.rem_euclid(r as i64) as u64
}

pub fn vertex_rule_holds(g: &DecoratedGraph, v: usize, r: u64) -> bool {
    let s: u64 = g.halves_at(v).iter().map(|&h| g.half(h).weight).sum();
    (s % r) == vertex_target(g, v, r)
}

/// All spin weightings of `graph` with the given leg residues: an
/// assignment `k_h ∈ Z/r` on edge ends with opposite ends balanced and the
/// local selection rule at every vertex. The graph's own weights are
/// overwritten; its vertex and edge order are preserved.
pub fn enumerate_weightings(graph: &DecoratedGraph, r: u64, leg_weights: &[u64]) -> Vec<DecoratedGraph> {
    let mut base = graph.clone();
    for (i, &w) in leg_weights.iter().enumerate() {
        base.legs[i].weight = w % r;
    }
    let nv = base.num_vertices();
    // BFS spanning tree from vertex 0
    let mut parent_edge: Vec<Option<(usize, usize)>> = vec![None; nv];
    let mut seen = vec![false; nv];
    let mut order = vec![0usize];
    seen[0] = true;
    let mut tree = vec![false; base.num_edges()];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for (e, (a, b)) in base.edges.iter().enumerate() {
            for (side, (x, y)) in [(0usize, (a, b)), (1, (b, a))] {
                if x.vertex == v && !seen[y.vertex] {
                    seen[y.vertex] = true;
                    tree[e] = true;
                    // the child's end is the opposite side
                    parent_edge[y.vertex] = Some((e, 1 - side));
                    order.push(y.vertex);
                }
            }
        }
    }
    let free: Vec<usize> = (0..base.num_edges()).filter(|&e| !tree[e]).collect();
    let total = (r as usize).pow(free.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut g = base.clone();
        let mut c = code;
        for &e in &free {
            let k = (c % r as usize) as u64;
            c /= r as usize;
            g.edges[e].0.weight = k;
            g.edges[e].1.weight = opposite(k, r);
        }
        for &v in order.iter().skip(1).rev() {
            let (e, side) = parent_edge[v].unwrap();
            let mine = HalfRef::Edge(e, side);
            let others: u64 =
                g.halves_at(v).iter().filter(|&&h| h != mine).map(|&h| g.half(h).weight).sum::<u64>() % r;
            let k = (vertex_target(&g, v, r) + r - others) % r;
            g.half_mut(mine).weight = k;
            g.half_mut(HalfRef::Edge(e, 1 - side)).weight = opposite(k, r);
        }
        if vertex_rule_holds(&g, 0, r) {
            out.push(g);
        }
    }
    debug_assert!(out.is_empty() || out.len() == total);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::enumerate_stable_graphs;

    #[test]
    fn loop_on_m11() {
        let graphs = enumerate_stable_graphs(1, 1, 1);
        let lp = graphs.iter().find(|g| g.num_edges() == 1).unwrap();
        assert_eq!(enumerate_weightings(lp, 3, &[1]).len(), 3);
        let smooth = graphs.iter().find(|g| g.num_edges() == 0).unwrap();
        assert_eq!(enumerate_weightings(smooth, 3, &[1]).len(), 1);
        assert_eq!(enumerate_weightings(smooth, 3, &[2]).len(), 0);
    }

    #[test]
    fn counts_are_powers_of_r() {
        for (g, n) in [(1u32, 2usize), (2, 1), (0, 5)] {
            for gr in enumerate_stable_graphs(g, n, 10) {
                for r in [2u64, 3, 5] {
                    let legs: Vec<u64> = (0..n as u64).map(|i| if i == 0 { (2 * g as u64 + n as u64 + 3 * r - 2 - (n as u64 - 1)) % r } else { 1 }).collect();
                    let ws = enumerate_weightings(&gr, r, &legs);
                    assert_eq!(ws.len(), (r as usize).pow(gr.h1() as u32));
                    for w in &ws {
                        assert!((0..w.num_vertices()).all(|v| vertex_rule_holds(w, v, r)));
                    }
                }
            }
        }
    }
}
