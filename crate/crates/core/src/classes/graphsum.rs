use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;

use super::assemble::{channel_coefficient, prefactor, SectorSetup, Specialization};
use super::chiodo::edge_polynomial;
use crate::arith::{Coeff, Rat};
use crate::error::ValidationError;
use crate::graphs::{enumerate_stable_graphs, enumerate_weightings, DecoratedGraph, HalfRef};
use crate::graphs::Conventions;
use crate::integrate::vertex_integral;

type Poly2<C> = BTreeMap<(u32, u32), C>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct VertexKey {
    genus: u32,
    edge_psi: Vec<u32>,
    legs: Vec<(usize, u32)>,
}

/// Closed-form evaluation of `∫ total_class · ψ^b` as a sum over weighted
/// stable graphs: the exponential of the boundary part factors into one
/// series per edge, so no strata products are formed.
pub struct GraphSum<C: Coeff> {
    dim: i64,
    g: u32,
    n: usize,
    r: u64,
    prefactor: C,
    /// `κ`-monomials of each degree with their coefficients.
    kappa_terms: Vec<Vec<(Vec<u32>, C)>>,
    /// Series `exp(-Σ ℓ_{i,l} ψ^l)` per leg.
    leg_series: Vec<Vec<C>>,
    /// Edge factor per residue of the first half.
    edge_tables: Vec<Poly2<C>>,
    graphs: Vec<(DecoratedGraph, Rat)>,
    memo: RwLock<HashMap<VertexKey, C>>,
}

fn exp_series<C: Coeff>(f: &[C], len: usize) -> Vec<C> {
    // f[0] is ignored (taken to be 0); e' = f'e
    let mut e = vec![C::unit()];
    for m in 1..len {
        let mut acc = C::nil();
        for k in 1..=m {
            if k < f.len() && !f[k].is_nil() {
                acc.add_assign_ref(&f[k].times(&e[m - k]).scaled(&Rat::from_integer(BigInt::from(k))));
            }
        }
        e.push(acc.scaled(&Rat::new(BigInt::one(), BigInt::from(m))));
    }
    e
}

fn poly2_mul<C: Coeff>(a: &Poly2<C>, b: &Poly2<C>, cap: u32) -> Poly2<C> {
    let mut out: Poly2<C> = BTreeMap::new();
    for (&(x1, y1), c1) in a {
        for (&(x2, y2), c2) in b {
            if x1 + x2 + y1 + y2 > cap {
                continue;
            }
            let c = c1.times(c2);
            out.entry((x1 + x2, y1 + y2)).and_modify(|v| v.add_assign_ref(&c)).or_insert(c);
        }
    }
    out.retain(|_, v| !v.is_nil());
    out
}

fn partitions(m: u32, max_part: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in (1..=max_part.min(m)).rev() {
        for mut rest in partitions(m - p, p) {
            rest.insert(0, p);
            out.push(rest);
        }
    }
    out
}

impl<C: Coeff> GraphSum<C> {
    pub fn new<S: Specialization<C = C>>(spec: &S, setup: &SectorSetup, conv: &Conventions) -> Self {
        let dim = setup.dim();
        let amb = &setup.ambient;
        let (g, n, r) = (amb.g, amb.n, amb.r);
        let lmax = dim.max(0) as usize;
        let coeffs: Vec<Vec<C>> = (1..=lmax)
            .map(|l| setup.channels.iter().map(|ch| channel_coefficient(spec, ch, l)).collect())
            .collect();
        let combine = |l: usize, f: &dyn Fn(&super::chiodo::ChiodoInput) -> Rat| -> C {
            let mut acc = C::nil();
            for (ch, c) in setup.channels.iter().zip(&coeffs[l - 1]) {
                let q = f(&ch.input);
                if !q.is_zero() {
                    acc.add_assign_ref(&c.scaled(&q));
                }
            }
            acc
        };
        let kappa_lin: Vec<C> = (1..=lmax).map(|l| combine(l, &|inp| inp.kappa_coeff(l))).collect();
        let mut kappa_terms = Vec::with_capacity(lmax + 1);
        for m in 0..=lmax as u32 {
            let mut list = Vec::new();
            for part in partitions(m, m) {
                let mut c = C::unit();
                let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
                for &p in &part {
                    c = c.times(&kappa_lin[p as usize - 1]);
                    *counts.entry(p).or_default() += 1;
                }
                for (_, k) in counts {
                    c = c.scaled(&Rat::new(BigInt::one(), crate::arith::factorial(k as u64)));
                }
                if !c.is_nil() {
                    let mut kappa = part.clone();
                    kappa.sort_unstable();
                    list.push((kappa, c));
                }
            }
            kappa_terms.push(list);
        }
        let leg_series = (0..n)
            .map(|i| {
                let mut f = vec![C::nil()];
                for l in 1..=lmax {
                    f.push(combine(l, &|inp| inp.leg_coeff(l, i)).negated());
                }
                exp_series(&f, lmax + 1)
            })
            .collect();
        let cap = (dim - 1).max(0) as u32;
        let edge_tables = (0..r)
            .map(|k| {
                if dim < 1 {
                    return BTreeMap::new();
                }
                let mut a: Poly2<C> = BTreeMap::new();
                for l in 1..=lmax {
                    let phi = combine(l, &|inp| inp.edge_coeff(l, k)).scaled(&conv.boundary_scale);
                    if phi.is_nil() {
                        continue;
                    }
                    for (x, y, sign) in edge_polynomial(l, conv.orientation) {
                        let c = phi.scaled(&sign);
                        a.entry((x, y)).and_modify(|v| v.add_assign_ref(&c)).or_insert(c);
                    }
                }
                let mut p: Poly2<C> = BTreeMap::new();
                p.insert((1, 0), C::from_rat(&conv.excess));
                p.insert((0, 1), C::from_rat(&conv.excess));
                // Σ_{k≥1} A^k (c P)^{k-1} / k!
                let mut total: Poly2<C> = BTreeMap::new();
                let mut term = a.clone();
                let mut kk = 1u64;
                while !term.is_empty() {
                    let f = Rat::new(BigInt::one(), crate::arith::factorial(kk));
                    for (key, c) in &term {
                        let c = c.scaled(&f);
                        total.entry(*key).and_modify(|v| v.add_assign_ref(&c)).or_insert(c);
                    }
                    term = poly2_mul(&poly2_mul(&term, &a, cap), &p, cap);
                    kk += 1;
                }
                total.retain(|_, v| !v.is_nil());
                total
            })
            .collect();
        let mut graphs = Vec::new();
        if amb.nonempty() && dim >= 0 {
            for gr in enumerate_stable_graphs(g, n, dim as usize) {
                let aut = gr.automorphism_count();
                let e = 2 * g as i64 - 1 - gr.h1() as i64;
                let w = Rat::from_integer(BigInt::from(r)).pow(e as i32) / Rat::from_integer(BigInt::from(aut));
                for wg in enumerate_weightings(&gr, r, &amb.leg_weights) {
                    graphs.push((wg, w.clone()));
                }
            }
        }
        GraphSum {
            dim,
            g,
            n,
            r,
            prefactor: prefactor(spec, setup),
            kappa_terms,
            leg_series,
            edge_tables,
            graphs,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn num_weighted_graphs(&self) -> usize {
        self.graphs.len()
    }

    /// `∫_{M̄_{g,n}} total_class · Π ψ_i^{b_i}`.
    pub fn pair(&self, b: &[u32]) -> Result<C, ValidationError> {
        if b.len() != self.n {
            return Err(ValidationError::Ambient(format!("{} ψ powers for {} markings", b.len(), self.n)));
        }
        if b.iter().map(|&x| x as i64).sum::<i64>() > self.dim {
            return Ok(C::nil());
        }
        let total = self
            .graphs
            .par_iter()
            .map(|(gr, w)| self.graph_contribution(gr, b).scaled(w))
            .reduce(C::nil, |a, c| a.plus(&c));
        Ok(total.times(&self.prefactor))
    }

    /// Pairing without the prefactor (the exponential part only).
    pub fn pair_exponential(&self, b: &[u32]) -> C {
        self.graphs
            .par_iter()
            .map(|(gr, w)| self.graph_contribution(gr, b).scaled(w))
            .reduce(C::nil, |a, c| a.plus(&c))
    }

    pub fn prefactor(&self) -> &C {
        &self.prefactor
    }

    fn graph_contribution(&self, gr: &DecoratedGraph, b: &[u32]) -> C {
        let nv = gr.num_vertices();
        let mut budget: Vec<i64> = (0..nv).map(|v| gr.vertex_dim(v)).collect();
        for (i, leg) in gr.legs.iter().enumerate() {
            budget[leg.vertex] -= b[i] as i64;
        }
        if budget.iter().any(|&x| x < 0) {
            return C::nil();
        }
        let mut psi = vec![(0u32, 0u32); gr.num_edges()];
        let mut acc = C::nil();
        self.edge_dfs(gr, b, 0, &mut budget, &mut psi, C::unit(), &mut acc);
        acc
    }

    #[allow(clippy::too_many_arguments)]
    fn edge_dfs(
        &self,
        gr: &DecoratedGraph,
        b: &[u32],
        e: usize,
        budget: &mut [i64],
        psi: &mut [(u32, u32)],
        coef: C,
        acc: &mut C,
    ) {
        if e == gr.num_edges() {
            let mut c = coef;
            for v in 0..gr.num_vertices() {
                let x = self.vertex_value(gr, b, psi, v);
                if x.is_nil() {
                    return;
                }
                c = c.times(&x);
            }
            acc.add_assign_ref(&c);
            return;
        }
        let (h0, h1) = &gr.edges[e];
        let table = &self.edge_tables[(h0.weight % self.r) as usize];
        for (&(x, y), c) in table {
            let (v0, v1) = (h0.vertex, h1.vertex);
            budget[v0] -= x as i64;
            budget[v1] -= y as i64;
            if budget[v0] >= 0 && budget[v1] >= 0 {
                psi[e] = (x, y);
                self.edge_dfs(gr, b, e + 1, budget, psi, coef.times(c), acc);
            }
            budget[v0] += x as i64;
            budget[v1] += y as i64;
        }
    }

    fn vertex_value(&self, gr: &DecoratedGraph, b: &[u32], psi: &[(u32, u32)], v: usize) -> C {
        let mut edge_psi = Vec::new();
        let mut legs = Vec::new();
        for h in gr.halves_at(v) {
            match h {
                HalfRef::Leg(i) => legs.push((i, b[i])),
                HalfRef::Edge(e, 0) => edge_psi.push(psi[e].0),
                HalfRef::Edge(e, _) => edge_psi.push(psi[e].1),
            }
        }
        edge_psi.sort_unstable();
        legs.sort_unstable();
        let key = VertexKey { genus: gr.vertices[v].genus, edge_psi, legs };
        if let Some(x) = self.memo.read().get(&key) {
            return x.clone();
        }
        let x = self.compute_vertex(&key);
        self.memo.write().insert(key, x.clone());
        x
    }

    fn compute_vertex(&self, key: &VertexKey) -> C {
        let nv = key.edge_psi.len() + key.legs.len();
        let dim = 3 * key.genus as i64 - 3 + nv as i64;
        let used: i64 = key.edge_psi.iter().map(|&x| x as i64).sum::<i64>()
            + key.legs.iter().map(|&(_, b)| b as i64).sum::<i64>();
        let rem = dim - used;
        if rem < 0 {
            return C::nil();
        }
        let mut acc = C::nil();
        let mut p = vec![0u32; key.legs.len()];
        self.leg_dfs(key, 0, rem as u32, &mut p, C::unit(), &mut acc);
        acc
    }

    fn leg_dfs(&self, key: &VertexKey, i: usize, rem: u32, p: &mut Vec<u32>, coef: C, acc: &mut C) {
        if i == key.legs.len() {
            let mut psi = key.edge_psi.clone();
            for (j, &(_, b)) in key.legs.iter().enumerate() {
                psi.push(b + p[j]);
            }
            for (kappa, kc) in &self.kappa_terms[rem as usize] {
                let x = vertex_integral(key.genus, &psi, kappa);
                if !x.is_zero() {
                    acc.add_assign_ref(&coef.times(kc).scaled(&x));
                }
            }
            return;
        }
        let series = &self.leg_series[key.legs[i].0];
        for q in 0..=rem {
            let c = &series[q as usize];
            if c.is_nil() {
                continue;
            }
            p[i] = q;
            self.leg_dfs(key, i + 1, rem - q, p, coef.times(c), acc);
        }
        p[i] = 0;
    }

    pub fn genus(&self) -> u32 {
        self.g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..7).map(|m| partitions(m, m).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11]);
        let e = exp_series(&[Rat::zero(), Rat::one()], 5);
        assert_eq!(e[4], Rat::new(BigInt::one(), BigInt::from(24)));
        assert!(Rat::one() > Rat::zero());
    }
}
