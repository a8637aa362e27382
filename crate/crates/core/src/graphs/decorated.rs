use std::collections::BTreeMap;

/// One end of an edge, or a leg: the vertex it sits on, its ψ power and
/// its spin weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Half {
    pub vertex: usize,
    pub psi: u32,
    pub weight: u64,
}

impl Half {
    pub fn new(vertex: usize, weight: u64) -> Self {
        Half { vertex, psi: 0, weight }
    }
}

/// Vertex genus with a κ monomial, stored as a sorted list of indices
/// (`[1, 1, 2]` is `κ_1² κ_2`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub genus: u32,
    pub kappa: Vec<u32>,
}

impl Vertex {
    pub fn new(genus: u32) -> Self {
        Vertex { genus, kappa: Vec::new() }
    }
}

/// Reference to a half-edge of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HalfRef {
    Leg(usize),
    Edge(usize, usize),
}

/// Stable graph with decorations: κ monomials at vertices, ψ powers and
/// spin weights on legs and edge ends. Legs are indexed by label - 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedGraph {
    pub vertices: Vec<Vertex>,
    pub legs: Vec<Half>,
    pub edges: Vec<(Half, Half)>,
}

impl DecoratedGraph {
    /// Single vertex of genus `g` carrying all legs.
    pub fn smooth(g: u32, leg_weights: &[u64]) -> Self {
        DecoratedGraph {
            vertices: vec![Vertex::new(g)],
            legs: leg_weights.iter().map(|&w| Half::new(0, w)).collect(),
            edges: Vec::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn h1(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn genus(&self) -> u32 {
        self.vertices.iter().map(|v| v.genus).sum::<u32>() + self.h1() as u32
    }

    pub fn half(&self, h: HalfRef) -> &Half {
        match h {
            HalfRef::Leg(i) => &self.legs[i],
            HalfRef::Edge(e, 0) => &self.edges[e].0,
            HalfRef::Edge(e, _) => &self.edges[e].1,
        }
    }

    pub fn half_mut(&mut self, h: HalfRef) -> &mut Half {
        match h {
            HalfRef::Leg(i) => &mut self.legs[i],
            HalfRef::Edge(e, 0) => &mut self.edges[e].0,
            HalfRef::Edge(e, _) => &mut self.edges[e].1,
        }
    }

    pub fn all_halves(&self) -> Vec<HalfRef> {
        let mut out: Vec<HalfRef> = (0..self.legs.len()).map(HalfRef::Leg).collect();
        for e in 0..self.edges.len() {
            out.push(HalfRef::Edge(e, 0));
            out.push(HalfRef::Edge(e, 1));
        }
        out
    }

    pub fn halves_at(&self, v: usize) -> Vec<HalfRef> {
        self.all_halves().into_iter().filter(|&h| self.half(h).vertex == v).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|h| h.vertex == v).count()
            + self.edges.iter().map(|(a, b)| (a.vertex == v) as usize + (b.vertex == v) as usize).sum::<usize>()
    }

    /// `3g_v - 3 + n_v`.
    pub fn vertex_dim(&self, v: usize) -> i64 {
        3 * self.vertices[v].genus as i64 - 3 + self.valence(v) as i64
    }

    /// Degree of the decoration living on `M̄_{g_v, n_v}`.
    pub fn vertex_degree(&self, v: usize) -> i64 {
        let k: u32 = self.vertices[v].kappa.iter().sum();
        let p: u32 = self.all_halves().iter().map(|&h| self.half(h)).filter(|h| h.vertex == v).map(|h| h.psi).sum();
        (k + p) as i64
    }

    /// Codimension in `M̄_{g,n}`: edges plus decoration degrees.
    pub fn degree(&self) -> i64 {
        self.edges.len() as i64 + (0..self.vertices.len()).map(|v| self.vertex_degree(v)).sum::<i64>()
    }

    pub fn is_stable(&self) -> bool {
        (0..self.vertices.len()).all(|v| 2 * self.vertices[v].genus as i64 - 2 + self.valence(v) as i64 > 0)
    }

    /// Some vertex carries more decoration than its dimension allows.
    pub fn overloaded(&self) -> bool {
        (0..self.vertices.len()).any(|v| self.vertex_degree(v) > self.vertex_dim(v))
    }

    /// Forgets ψ and κ decorations.
    pub fn undecorated(&self) -> Self {
        let mut g = self.clone();
        for v in &mut g.vertices {
            v.kappa.clear();
        }
        for h in g.all_halves() {
            g.half_mut(h).psi = 0;
        }
        g
    }

    /// Forgets decorations and weights.
    pub fn shape_only(&self) -> Self {
        let mut g = self.undecorated();
        for h in g.all_halves() {
            g.half_mut(h).weight = 0;
        }
        g
    }

    fn relabeled(&self, new_of_old: &[usize]) -> Self {
        let mut vertices = vec![Vertex::new(0); self.vertices.len()];
        for (old, v) in self.vertices.iter().enumerate() {
            vertices[new_of_old[old]] = v.clone();
        }
        let map = |h: &Half| Half { vertex: new_of_old[h.vertex], psi: h.psi, weight: h.weight };
        let legs = self.legs.iter().map(map).collect();
        let mut edges: Vec<(Half, Half)> = self
            .edges
            .iter()
            .map(|(a, b)| {
                let (a, b) = (map(a), map(b));
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        edges.sort();
        DecoratedGraph { vertices, legs, edges }
    }

    fn vertex_invariant(&self, v: usize) -> (Vertex, Vec<(usize, u32, u64)>, Vec<(u32, u64, bool)>) {
        let mut legs: Vec<(usize, u32, u64)> = self
            .legs
            .iter()
            .enumerate()
            .filter(|(_, h)| h.vertex == v)
            .map(|(i, h)| (i, h.psi, h.weight))
            .collect();
        legs.sort();
        let mut ends = Vec::new();
        for (a, b) in &self.edges {
            let lp = a.vertex == b.vertex;
            if a.vertex == v {
                ends.push((a.psi, a.weight, lp));
            }
            if b.vertex == v {
                ends.push((b.psi, b.weight, lp));
            }
        }
        ends.sort();
        (self.vertices[v].clone(), legs, ends)
    }

    /// Canonical representative and the number of vertex permutations
    /// realizing it.
    fn canonical_with_count(&self) -> (Self, usize) {
        let nv = self.vertices.len();
        let mut order: Vec<(_, usize)> = (0..nv).map(|v| (self.vertex_invariant(v), v)).collect();
        order.sort();
        // blocks of equal invariants
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, (inv, v)) in order.iter().enumerate() {
            if i > 0 && order[i - 1].0 == *inv {
                blocks.last_mut().unwrap().push(*v);
            } else {
                blocks.push(vec![*v]);
            }
        }
        let mut best: Option<DecoratedGraph> = None;
        let mut count = 0usize;
        let mut perm: Vec<usize> = Vec::with_capacity(nv);
        enumerate_block_perms(&blocks, 0, &mut perm, &mut |seq: &[usize]| {
            // seq lists old vertices in new order
            let mut new_of_old = vec![0; nv];
            for (new, &old) in seq.iter().enumerate() {
                new_of_old[old] = new;
            }
            let cand = self.relabeled(&new_of_old);
            match &best {
                Some(b) if cand > *b => {}
                Some(b) if cand == *b => count += 1,
                _ => {
                    best = Some(cand);
                    count = 1;
                }
            }
        });
        (best.unwrap(), count)
    }

    pub fn canonical(&self) -> Self {
        self.canonical_with_count().0
    }

    /// Order of the automorphism group fixing legs pointwise and preserving
    /// all decorations and weights.
    pub fn automorphism_count(&self) -> u64 {
        let (canon, vperms) = self.canonical_with_count();
        let mut acc = vperms as u64;
        let mut i = 0;
        while i < canon.edges.len() {
            let mut j = i;
            while j < canon.edges.len() && canon.edges[j] == canon.edges[i] {
                j += 1;
            }
            acc *= (1..=(j - i) as u64).product::<u64>();
            i = j;
        }
        for (a, b) in &canon.edges {
            if a == b {
                acc *= 2;
            }
        }
        acc
    }

    /// Contracts every edge except `keep`, returning the resulting
    /// single-edge graph (undecorated; weights kept on the surviving edge
    /// and legs) and the map from vertices of `self` to its vertices.
    pub fn contract_all_but(&self, keep: usize) -> (DecoratedGraph, Vec<usize>) {
        let nv = self.vertices.len();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for (e, (a, b)) in self.edges.iter().enumerate() {
            if e != keep {
                let (ra, rb) = (find(&mut parent, a.vertex), find(&mut parent, b.vertex));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        let (a, b) = &self.edges[keep];
        let ca = find(&mut parent, a.vertex);
        let cb = find(&mut parent, b.vertex);
        let mut comp_of = vec![0usize; nv];
        for v in 0..nv {
            let c = find(&mut parent, v);
            comp_of[v] = if c == ca { 0 } else if c == cb { 1 } else { usize::MAX };
        }
        let ncomp = if ca == cb { 1 } else { 2 };
        let mut genus = vec![0u32; ncomp];
        let mut nverts = vec![0i64; ncomp];
        let mut nedges = vec![0i64; ncomp];
        for v in 0..nv {
            genus[comp_of[v]] += self.vertices[v].genus;
            nverts[comp_of[v]] += 1;
        }
        for (e, (x, _)) in self.edges.iter().enumerate() {
            if e != keep {
                nedges[comp_of[x.vertex]] += 1;
            }
        }
        for c in 0..ncomp {
            genus[c] += (nedges[c] - nverts[c] + 1) as u32;
        }
        let g = DecoratedGraph {
            vertices: genus.into_iter().map(Vertex::new).collect(),
            legs: self.legs.iter().map(|h| Half::new(comp_of[h.vertex], h.weight)).collect(),
            edges: vec![(Half::new(comp_of[a.vertex], a.weight), Half::new(comp_of[b.vertex], b.weight))],
        };
        (g, comp_of)
    }
}

fn enumerate_block_perms(blocks: &[Vec<usize>], bi: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if bi == blocks.len() {
        f(acc);
        return;
    }
    permute(&blocks[bi], &mut Vec::new(), &mut vec![false; blocks[bi].len()], &mut |p: &[usize]| {
        let len = acc.len();
        acc.extend_from_slice(p);
        enumerate_block_perms(blocks, bi + 1, acc, f);
        acc.truncate(len);
    });
}

fn permute(items: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == items.len() {
        f(cur);
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            permute(items, cur, used, f);
            cur.pop();
            used[i] = false;
        }
    }
}

/// Expands `Π_i (Σ_{v ∈ targets} κ_{a_i}(v))`: every way of distributing the
/// κ factors of a monomial over a set of vertices.
pub fn distribute_kappa(kappa: &[u32], targets: &[usize]) -> Vec<BTreeMap<usize, Vec<u32>>> {
    let mut out = vec![BTreeMap::new()];
    for &a in kappa {
        let mut next = Vec::with_capacity(out.len() * targets.len());
        for m in &out {
            for &v in targets {
                let mut m2: BTreeMap<usize, Vec<u32>> = m.clone();
                m2.entry(v).or_default().push(a);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vertex(g0: u32, g1: u32, edges: usize) -> DecoratedGraph {
        DecoratedGraph {
            vertices: vec![Vertex::new(g0), Vertex::new(g1)],
            legs: vec![],
            edges: (0..edges).map(|_| (Half::new(0, 0), Half::new(1, 0))).collect(),
        }
    }

    #[test]
    fn automorphisms() {
        assert_eq!(DecoratedGraph::smooth(2, &[0]).automorphism_count(), 1);
        let lp = DecoratedGraph {
            vertices: vec![Vertex::new(0)],
            legs: vec![Half::new(0, 0)],
            edges: vec![(Half::new(0, 0), Half::new(0, 0))],
        };
        assert_eq!(lp.automorphism_count(), 2);
        assert_eq!(two_vertex(1, 1, 2).automorphism_count(), 4);
        assert_eq!(two_vertex(0, 0, 3).automorphism_count(), 12);
        // weights (1, 2) on a self-loop break the half-edge swap
        let mut w = lp.clone();
        w.edges[0] = (Half::new(0, 1), Half::new(0, 2));
        assert_eq!(w.automorphism_count(), 1);
    }

    #[test]
    fn canonical_is_relabeling_invariant() {
        let g = DecoratedGraph {
            vertices: vec![Vertex::new(0), Vertex::new(1), Vertex::new(0)],
            legs: vec![Half::new(2, 0)],
            edges: vec![(Half::new(0, 0), Half::new(1, 0)), (Half::new(0, 0), Half::new(2, 0)), (Half::new(0, 0), Half::new(0, 0))],
        };
        let h = g.relabeled(&[2, 0, 1]);
        assert_eq!(g.canonical(), h.canonical());
        assert_eq!(g.genus(), 2);
        let (c, comp) = g.contract_all_but(0);
        assert_eq!(c.vertices.len(), 2);
        assert_eq!(comp, vec![0, 1, 0]);
        assert_eq!(c.vertices[0].genus, 1);
    }
}
