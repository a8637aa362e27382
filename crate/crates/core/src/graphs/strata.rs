use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::decorated::{distribute_kappa, DecoratedGraph, HalfRef};
use super::stable::vertex_degenerations;
use super::weighting::{opposite, vertex_rule_holds};
use crate::arith::{Coeff, Rat};
use crate::error::ValidationError;
use crate::integrate::vertex_integral;

/// Sign arrangement of the edge polynomial `Σ_{x+y=l-1} …` in boundary
/// terms: `ψ_h^x (−ψ_h')^y` or `(−ψ_h)^x ψ_h'^y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    PsiFirst,
    PsiSecond,
}

/// Gluing constants of the strata algebra. They are not asserted from a
/// formula but pinned by the calibration suite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conventions {
    /// Overall factor of the boundary part of `ch_l`.
    pub boundary_scale: Rat,
    /// Factor `c` in the excess class `c·(ψ_h + ψ_h')` of a coinciding edge.
    pub excess: Rat,
    pub orientation: Orientation,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions { boundary_scale: Rat::one(), excess: -Rat::one(), orientation: Orientation::PsiFirst }
    }
}

/// `(g, n)`, root order `r` and leg residues shared by all terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ambient {
    pub g: u32,
    pub n: usize,
    pub r: u64,
    pub leg_weights: Vec<u64>,
}

impl Ambient {
    pub fn new(g: u32, r: u64, leg_weights: &[u64]) -> Self {
        Ambient { g, n: leg_weights.len(), r, leg_weights: leg_weights.iter().map(|w| w % r).collect() }
    }

    pub fn dim(&self) -> i64 {
        3 * self.g as i64 - 3 + self.n as i64
    }

    /// The smooth graph with the leg residues (carries the fundamental
    /// class when the selection rule holds).
    pub fn smooth_graph(&self) -> DecoratedGraph {
        DecoratedGraph::smooth(self.g, &self.leg_weights)
    }

    pub fn nonempty(&self) -> bool {
        vertex_rule_holds(&self.smooth_graph(), 0, self.r)
    }
}

/// Formal combination `Σ c · T(Γ, w, α)` where `T(Γ, w, α)` is the
/// pushforward to `M̄_{g,n}` of the decorated stratum of root-curves with
/// dual graph `Γ` and weighting `w`, equal to `r^{2g-1-h¹(Γ)} ξ_{Γ*}(α)`.
/// Keys are canonical decorated weighted graphs.
#[derive(Clone, Debug, PartialEq)]
pub struct StrataExpression<C: Coeff> {
    pub ambient: Ambient,
    terms: BTreeMap<DecoratedGraph, C>,
}

impl<C: Coeff> StrataExpression<C> {
    pub fn zero(ambient: Ambient) -> Self {
        StrataExpression { ambient, terms: BTreeMap::new() }
    }

    /// Fundamental class of the root-curve moduli (zero if empty).
    pub fn one(ambient: Ambient) -> Self {
        let mut x = Self::zero(ambient);
        if x.ambient.nonempty() {
            let g = x.ambient.smooth_graph();
            x.add_term(g, C::unit());
        }
        x
    }

    pub fn add_term(&mut self, graph: DecoratedGraph, c: C) {
        if c.is_nil() {
            return;
        }
        let key = graph.canonical();
        match self.terms.get_mut(&key) {
            Some(v) => {
                v.add_assign_ref(&c);
                if v.is_nil() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DecoratedGraph, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, graph: &DecoratedGraph) -> C {
        self.terms.get(&graph.canonical()).cloned().unwrap_or_else(C::nil)
    }

    fn check_ambient(&self, other: &Self) -> Result<(), ValidationError> {
        if self.ambient != other.ambient {
            return Err(ValidationError::Ambient(format!("{:?} vs {:?}", self.ambient, other.ambient)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ValidationError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.ambient.clone());
        for (g, v) in &self.terms {
            let p = v.times(c);
            if !p.is_nil() {
                out.terms.insert(g.clone(), p);
            }
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&C::from_rat(r))
    }

    /// Part of codimension exactly `k`.
    pub fn graded_part(&self, k: i64) -> Self {
        let mut out = Self::zero(self.ambient.clone());
        out.terms = self.terms.iter().filter(|(g, _)| g.degree() == k).map(|(g, c)| (g.clone(), c.clone())).collect();
        out
    }

    pub fn truncate(&self, dim_cap: i64) -> Self {
        let mut out = Self::zero(self.ambient.clone());
        out.terms = self.terms.iter().filter(|(g, _)| g.degree() <= dim_cap).map(|(g, c)| (g.clone(), c.clone())).collect();
        out
    }

    pub fn max_edges(&self) -> usize {
        self.terms.keys().map(|g| g.num_edges()).max().unwrap_or(0)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> StrataExpression<D> {
        let mut out = StrataExpression::zero(self.ambient.clone());
        for (g, c) in &self.terms {
            let d = f(c);
            if !d.is_nil() {
                out.terms.insert(g.clone(), d);
            }
        }
        out
    }

    /// Tautological product. One factor must have all terms with at most
    /// one edge (the case needed to exponentiate boundary divisors); terms
    /// above codimension `dim_cap` are dropped.
    pub fn mul(&self, other: &Self, dim_cap: i64, conv: &Conventions) -> Result<Self, ValidationError> {
        self.check_ambient(other)?;
        let (x, y) = if other.max_edges() <= 1 {
            (self, other)
        } else if self.max_edges() <= 1 {
            (other, self)
        } else {
            return Err(ValidationError::Unsupported(
                "product of two expressions that both contain multi-edge terms".into(),
            ));
        };
        let r = self.ambient.r;
        let xs: Vec<(&DecoratedGraph, &C)> = x.terms.iter().collect();
        let partials: Vec<BTreeMap<DecoratedGraph, C>> = xs
            .par_iter()
            .map(|(a, ca)| {
                let mut acc: BTreeMap<DecoratedGraph, C> = BTreeMap::new();
                for (b, cb) in &y.terms {
                    if a.degree() + b.degree() > dim_cap {
                        continue;
                    }
                    let cab = ca.times(cb);
                    for (g, m) in product_terms(a, b, r, conv) {
                        if g.degree() > dim_cap || g.overloaded() {
                            continue;
                        }
                        let key = g.canonical();
                        let c = cab.scaled(&m);
                        match acc.get_mut(&key) {
                            Some(v) => v.add_assign_ref(&c),
                            None => {
                                acc.insert(key, c);
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        let mut out = Self::zero(self.ambient.clone());
        for part in partials {
            for (g, c) in part {
                match out.terms.get_mut(&g) {
                    Some(v) => v.add_assign_ref(&c),
                    None => {
                        out.terms.insert(g, c);
                    }
                }
            }
        }
        out.terms.retain(|_, c| !c.is_nil());
        Ok(out)
    }

    /// `∫_{M̄_{g,n}} X · Π ψ_i^{b_i}`.
    pub fn pair(&self, psi_powers: &[u32]) -> Result<C, ValidationError> {
        if psi_powers.len() != self.ambient.n {
            return Err(ValidationError::Ambient(format!(
                "{} ψ powers for {} markings",
                psi_powers.len(),
                self.ambient.n
            )));
        }
        let mut acc = C::nil();
        for (g, c) in &self.terms {
            let v = integrate_term(g, psi_powers, self.ambient.g, self.ambient.r);
            if !v.is_zero() {
                acc.add_assign_ref(&c.scaled(&v));
            }
        }
        Ok(acc)
    }
}

/// `r^{2g-1-h¹} Π_v ∫ α_v Π ψ^{b}`.
pub fn integrate_term(g: &DecoratedGraph, psi_powers: &[u32], genus: u32, r: u64) -> Rat {
    let mut acc = Rat::one();
    for v in 0..g.num_vertices() {
        let mut psi = Vec::new();
        for h in g.halves_at(v) {
            let mut p = g.half(h).psi;
            if let HalfRef::Leg(i) = h {
                p += psi_powers[i];
            }
            psi.push(p);
        }
        let x = vertex_integral(g.vertices[v].genus, &psi, &g.vertices[v].kappa);
        if x.is_zero() {
            return x;
        }
        acc *= x;
    }
    let e = 2 * genus as i64 - 1 - g.h1() as i64;
    let rp = Rat::from_integer(BigInt::from(r)).pow(e as i32);
    acc * rp
}

/// Isomorphisms from the undecorated single-edge graph `x` onto the shape
/// of `b`: vertex map and whether the edge ends are swapped.
fn single_edge_isos(x: &DecoratedGraph, b: &DecoratedGraph) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    if x.num_vertices() != b.num_vertices() {
        return out;
    }
    let (xe0, xe1) = &x.edges[0];
    let (be0, be1) = &b.edges[0];
    for swap in [false, true] {
        let (t0, t1) = if swap { (be1, be0) } else { (be0, be1) };
        if xe0.weight != t0.weight || xe1.weight != t1.weight {
            continue;
        }
        let mut map = vec![usize::MAX; x.num_vertices()];
        let mut ok = true;
        for (s, t) in [(xe0.vertex, t0.vertex), (xe1.vertex, t1.vertex)] {
            if map[s] == usize::MAX {
                map[s] = t;
            } else if map[s] != t {
                ok = false;
            }
        }
        if !ok || map.iter().any(|&m| m == usize::MAX) {
            continue;
        }
        // injective on two vertices
        if map.len() == 2 && map[0] == map[1] {
            continue;
        }
        if (0..x.num_vertices()).any(|v| x.vertices[v].genus != b.vertices[map[v]].genus) {
            continue;
        }
        if x.legs.iter().zip(&b.legs).any(|(l, m)| map[l.vertex] != m.vertex || l.weight != m.weight) {
            continue;
        }
        out.push((map, swap));
    }
    out
}

/// Pulls the decorations of the single-edge term `b` back along a
/// contraction of `g` onto it: ψ on `b`'s edge ends go to edge `e` of
/// `g`, leg ψ to the legs, and `b`'s κ monomials are distributed over the
/// vertices of `g` mapping to each vertex of `b`.
fn pull_back_single_edge(
    g: &DecoratedGraph,
    e: usize,
    comp: &[usize],
    iso: &(Vec<usize>, bool),
    b: &DecoratedGraph,
) -> Vec<DecoratedGraph> {
    let (map, swap) = iso;
    let mut base = g.clone();
    let (p0, p1) = if *swap { (b.edges[0].1.psi, b.edges[0].0.psi) } else { (b.edges[0].0.psi, b.edges[0].1.psi) };
    base.edges[e].0.psi += p0;
    base.edges[e].1.psi += p1;
    for (i, l) in b.legs.iter().enumerate() {
        base.legs[i].psi += l.psi;
    }
    let mut out = vec![base];
    for (bv, vert) in b.vertices.iter().enumerate() {
        if vert.kappa.is_empty() {
            continue;
        }
        let targets: Vec<usize> = (0..g.num_vertices()).filter(|&v| map[comp[v]] == bv).collect();
        out = out
            .into_iter()
            .flat_map(|h| {
                distribute_kappa(&vert.kappa, &targets).into_iter().map(move |dist| {
                    let mut h2 = h.clone();
                    for (v, ks) in dist {
                        h2.vertices[v].kappa.extend(ks);
                        h2.vertices[v].kappa.sort_unstable();
                    }
                    h2
                })
            })
            .collect();
    }
    out
}

/// Generic products of a term `a` with a term `b` having at most one edge,
/// with rational multiplicities.
fn product_terms(a: &DecoratedGraph, b: &DecoratedGraph, r: u64, conv: &Conventions) -> Vec<(DecoratedGraph, Rat)> {
    let mut out = Vec::new();
    if b.num_edges() == 0 {
        let mut base = a.clone();
        for (i, l) in b.legs.iter().enumerate() {
            base.legs[i].psi += l.psi;
        }
        let all: Vec<usize> = (0..a.num_vertices()).collect();
        for dist in distribute_kappa(&b.vertices[0].kappa, &all) {
            let mut h = base.clone();
            for (v, ks) in dist {
                h.vertices[v].kappa.extend(ks);
                h.vertices[v].kappa.sort_unstable();
            }
            out.push((h, Rat::one()));
        }
        return out;
    }
    let b_shape = b.undecorated();
    // (i) the edge of b coincides with an edge of a: excess intersection
    for e in 0..a.num_edges() {
        let (x, comp) = a.contract_all_but(e);
        for iso in single_edge_isos(&x, &b_shape) {
            for h in pull_back_single_edge(a, e, &comp, &iso, b) {
                for side in 0..2 {
                    let mut h2 = h.clone();
                    h2.half_mut(HalfRef::Edge(e, side)).psi += 1;
                    out.push((h2, conv.excess.clone()));
                }
            }
        }
    }
    // (ii) the edge of b is new: split a vertex of a
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    for v in 0..a.num_vertices() {
        let kappa_v = a.vertices[v].kappa.clone();
        for deg in vertex_degenerations(a, v) {
            let e = deg.num_edges() - 1;
            let weighted: Vec<DecoratedGraph> = if deg.edges[e].0.vertex == deg.edges[e].1.vertex {
                (0..r)
                    .map(|k| {
                        let mut w = deg.clone();
                        w.edges[e].0.weight = k;
                        w.edges[e].1.weight = opposite(k, r);
                        w
                    })
                    .collect()
            } else {
                let mut w = deg.clone();
                let vv = w.edges[e].0.vertex;
                let target = (2 * w.vertices[vv].genus as i64 - 2 + w.valence(vv) as i64).rem_euclid(r as i64) as u64;
                let others: u64 = w
                    .halves_at(vv)
                    .iter()
                    .filter(|&&hr| hr != HalfRef::Edge(e, 0))
                    .map(|&hr| w.half(hr).weight)
                    .sum::<u64>()
                    % r;
                let k = (target + r - others) % r;
                w.edges[e].0.weight = k;
                w.edges[e].1.weight = opposite(k, r);
                vec![w]
            };
            let new_v = deg.num_vertices() - 1;
            let split_targets: Vec<usize> =
                if deg.num_vertices() > a.num_vertices() { vec![v, new_v] } else { vec![v] };
            for w in weighted {
                let (x, comp) = w.contract_all_but(e);
                let isos = single_edge_isos(&x, &b_shape);
                if isos.is_empty() {
                    continue;
                }
                for dist in distribute_kappa(&kappa_v, &split_targets) {
                    let mut wk = w.clone();
                    for (t, ks) in dist {
                        wk.vertices[t].kappa.extend(ks);
                        wk.vertices[t].kappa.sort_unstable();
                    }
                    for iso in &isos {
                        for h in pull_back_single_edge(&wk, e, &comp, iso, b) {
                            out.push((h, half.clone()));
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::graphs::decorated::{Half, Vertex};

    fn loop_m11(r: u64, k: u64) -> DecoratedGraph {
        DecoratedGraph {
            vertices: vec![Vertex::new(0)],
            legs: vec![Half::new(0, 1)],
            edges: vec![(Half::new(0, k), Half::new(0, opposite(k, r)))],
        }
    }

    #[test]
    fn identity_and_pairing() {
        let amb = Ambient::new(1, 1, &[1]);
        let one = StrataExpression::<Rat>::one(amb.clone());
        let mut d = StrataExpression::<Rat>::zero(amb.clone());
        // δ_irr = ξ_*(1)/|Aut| = T(loop)/2 for r = 1
        d.add_term(loop_m11(1, 0), rat(1, 2));
        assert_eq!(d.pair(&[0]).unwrap(), rat(1, 2));
        let p = d.mul(&one, 1, &Conventions::default()).unwrap();
        assert_eq!(p, d);
        let sq = d.mul(&d, 2, &Conventions::default()).unwrap();
        assert_eq!(sq.pair(&[0]).unwrap(), Rat::zero());
    }
}
