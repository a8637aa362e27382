use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{bernoulli_poly, factorial, Rat};
use crate::error::ValidationError;
use crate::graphs::{enumerate_weightings, stable_graphs_by_edges, Ambient, Conventions, DecoratedGraph, HalfRef, Orientation, StrataExpression};

/// Data `(r, s, a)` of a line bundle `L` with `L^r ≅ ω_log^s(-Σ a_i σ_i)` on
/// the universal `r`-root curve. `u` is its residue multiplier: at a node
/// end where the root has residue `k`, `L` has residue `u·k mod r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChiodoInput {
    pub r: u64,
    pub s: i64,
    pub a: Vec<u64>,
    pub u: u64,
}

impl ChiodoInput {
    /// `R^•π_* ω = E - O`, i.e. `s = r`, `a_i = r`, trivial residues.
    pub fn hodge(r: u64, n: usize) -> Self {
        ChiodoInput { r, s: r as i64, a: vec![r; n], u: 0 }
    }

    /// Checks the integrality congruence and consistency with the ambient
    /// leg residues.
    pub fn validate(&self, amb: &Ambient) -> Result<(), ValidationError> {
        if self.r != amb.r || self.a.len() != amb.n {
            return Err(ValidationError::Ambient(format!("Chiodo input {:?} on {:?}", self, amb)));
        }
        let r = self.r as i64;
        let total = self.s * (2 * amb.g as i64 - 2 + amb.n as i64) - self.a.iter().map(|&x| x as i64).sum::<i64>();
        if total.rem_euclid(r) != 0 {
            return Err(ValidationError::Sector(format!(
                "s(2g-2+n) - Σa = {total} is not divisible by r = {r}"
            )));
        }
        for (i, (&a, &k)) in self.a.iter().zip(&amb.leg_weights).enumerate() {
            if a > self.r || (a % self.r) != (self.u * k) % self.r {
                return Err(ValidationError::Sector(format!(
                    "twist a_{} = {a} incompatible with root residue {k}",
                    i + 1
                )));
            }
        }
        if (self.s - self.u as i64).rem_euclid(r) != 0 {
            return Err(ValidationError::Sector("s and u differ mod r".into()));
        }
        Ok(())
    }

    /// Riemann–Roch: `ch_0 = (s(2g-2+n) - Σ a_i)/r + 1 - g`.
    pub fn ch0(&self, g: u32, n: usize) -> Rat {
        let deg = self.s * (2 * g as i64 - 2 + n as i64) - self.a.iter().map(|&x| x as i64).sum::<i64>();
        Rat::new(BigInt::from(deg), BigInt::from(self.r)) + Rat::from_integer(BigInt::from(1 - g as i64))
    }

    /// `B_{l+1}(x/r)/(l+1)!`
    pub fn bern(&self, l: usize, x: i64) -> Rat {
        bernoulli_poly(l + 1, &Rat::new(BigInt::from(x), BigInt::from(self.r)))
            / Rat::from_integer(factorial(l as u64 + 1))
    }

    /// Coefficient of `κ_l` in `ch_l`.
    pub fn kappa_coeff(&self, l: usize) -> Rat {
        self.bern(l, self.s)
    }

    /// Coefficient of `-ψ_i^l` in `ch_l`.
    pub fn leg_coeff(&self, l: usize, i: usize) -> Rat {
        self.bern(l, self.a[i] as i64)
    }

    /// Boundary coefficient for a node end with root residue `k`.
    pub fn edge_coeff(&self, l: usize, k: u64) -> Rat {
        self.bern(l, ((self.u * k) % self.r) as i64)
    }
}

/// Monomials `(x, y, sign)` of the edge polynomial of degree `l - 1`.
pub fn edge_polynomial(l: usize, orientation: Orientation) -> Vec<(u32, u32, Rat)> {
    (0..l)
        .map(|x| {
            let y = l - 1 - x;
            let neg = match orientation {
                Orientation::PsiFirst => y % 2 == 1,
                Orientation::PsiSecond => x % 2 == 1,
            };
            (x as u32, y as u32, if neg { -Rat::one() } else { Rat::one() })
        })
        .collect()
}

/// Single-edge weighted graphs of the ambient with `1/|Aut|`.
pub fn single_edge_terms(amb: &Ambient) -> Vec<(DecoratedGraph, Rat)> {
    let levels = stable_graphs_by_edges(amb.g, amb.n);
    let mut out = Vec::new();
    if levels.len() < 2 {
        return out;
    }
    for gr in &levels[1] {
        let aut = Rat::new(BigInt::one(), BigInt::from(gr.automorphism_count()));
        for w in enumerate_weightings(gr, amb.r, &amb.leg_weights) {
            out.push((w, aut.clone()));
        }
    }
    out
}

/// `ch_l(R^•π_* L)` on the root-curve moduli, as a strata expression.
pub fn chiodo_ch(l: usize, input: &ChiodoInput, amb: &Ambient, conv: &Conventions) -> Result<StrataExpression<Rat>, ValidationError> {
    input.validate(amb)?;
    let mut out = StrataExpression::zero(amb.clone());
    if !amb.nonempty() {
        return Ok(out);
    }
    let smooth = amb.smooth_graph();
    if l == 0 {
        out.add_term(smooth, input.ch0(amb.g, amb.n));
        return Ok(out);
    }
    if 3 * amb.g as i64 - 3 + amb.n as i64 >= l as i64 {
        let mut k = smooth.clone();
        k.vertices[0].kappa.push(l as u32);
        out.add_term(k, input.kappa_coeff(l));
        for i in 0..amb.n {
            let mut p = smooth.clone();
            p.legs[i].psi = l as u32;
            out.add_term(p, -input.leg_coeff(l, i));
        }
    }
    for (w, aut) in single_edge_terms(amb) {
        let c = input.edge_coeff(l, w.edges[0].0.weight);
        if c.is_zero() {
            continue;
        }
        for (x, y, sign) in edge_polynomial(l, conv.orientation) {
            let mut t = w.clone();
            t.half_mut(HalfRef::Edge(0, 0)).psi = x;
            t.half_mut(HalfRef::Edge(0, 1)).psi = y;
            if t.overloaded() {
                continue;
            }
            out.add_term(t, &conv.boundary_scale * &aut * &c * sign);
        }
    }
    Ok(out)
}
