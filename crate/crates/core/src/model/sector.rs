use std::fmt;

use super::orbifold::{LGOrbifold, Shape};
use crate::error::ValidationError;

/// Genus-`g`, `n`-pointed component of the spin moduli, labeled by the
/// monodromies `γ(i) = γ_gen^{k_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sector {
    pub genus: u32,
    /// `k_i` mod `r` for each marking.
    pub monodromies: Vec<u64>,
    /// `m_j(i)`, indexed `[i][j]`.
    pub mult: Vec<Vec<u64>>,
    /// `γ_j(i) = 1`, indexed `[i][j]`.
    pub broad: Vec<Vec<bool>>,
    /// Decoration `R`, a subset of the broad entries, indexed `[i][j]`.
    pub decorated: Vec<Vec<bool>>,
    /// The selection rule fails and the component is empty.
    pub empty: bool,
}

/// `γ(1)⋯γ(n) = J^{2g-2+n}` componentwise.
pub fn selection_rule(orb: &LGOrbifold, g: u32, monodromies: &[u64]) -> bool {
    let r = orb.exponent();
    let total: u64 = monodromies.iter().map(|k| k % r).sum();
    let target = (2 * g as i64 - 2 + monodromies.len() as i64).rem_euclid(r as i64) as u64;
    (0..orb.num_vars()).all(|j| orb.multiplicity(j, total) == orb.multiplicity(j, target))
}

/// `m_j(i) = w_j k_i mod d` for `G = ⟨J⟩`.
pub fn multiplicity_table(orb: &LGOrbifold, monodromies: &[u64]) -> Vec<Vec<u64>> {
    monodromies.iter().map(|&k| (0..orb.num_vars()).map(|j| orb.multiplicity(j, k)).collect()).collect()
}

/// Chain decoration at one marking: broad variables must be a suffix
/// `x_{b+1}..x_N`; the decoration is `{x_{N-2l} : N-2l > b}` and is balanced
/// iff `N - b` is even.
pub fn chain_decoration(broad: &[bool]) -> Result<(Vec<bool>, bool), ValidationError> {
    let n = broad.len();
    let b = broad.iter().position(|&x| x).unwrap_or(n);
    if broad[b..].iter().any(|&x| !x) {
        return Err(ValidationError::Sector(format!(
            "broad variables {:?} do not form a suffix of the chain",
            broad.iter().enumerate().filter(|(_, &x)| x).map(|(j, _)| j + 1).collect::<Vec<_>>()
        )));
    }
    // variable x_j (1-based) decorated iff j > b and N - j even
    let dec: Vec<bool> = (1..=n).map(|j| j > b && (n - j) % 2 == 0).collect();
    Ok((dec, (n - b) % 2 == 0))
}

impl Sector {
    pub fn new(orb: &LGOrbifold, genus: u32, monodromies: &[u64]) -> Result<Self, ValidationError> {
        let n = monodromies.len();
        if n == 0 {
            return Err(ValidationError::Sector("at least one marking is required".into()));
        }
        if 2 * genus as i64 - 2 + n as i64 <= 0 {
            return Err(ValidationError::Sector(format!("(g, n) = ({genus}, {n}) is unstable")));
        }
        let r = orb.exponent();
        let monodromies: Vec<u64> = monodromies.iter().map(|k| k % r).collect();
        let mult = multiplicity_table(orb, &monodromies);
        let broad: Vec<Vec<bool>> = mult.iter().map(|row| row.iter().map(|&m| m == 0).collect()).collect();
        let mut decorated = vec![vec![false; orb.num_vars()]; n];
        for (i, row) in broad.iter().enumerate() {
            if !row.iter().any(|&b| b) {
                continue;
            }
            match &orb.shape {
                Shape::Fermat(_) | Shape::Chain(_) => {
                    let (dec, balanced) = chain_decoration(row)?;
                    if !balanced {
                        return Err(ValidationError::Sector(format!(
                            "marking {} has no balanced decoration (N - b odd)",
                            i + 1
                        )));
                    }
                    decorated[i] = dec;
                }
                Shape::Loop(_) => {
                    return Err(ValidationError::Unsupported(format!(
                        "broad marking {} on a loop polynomial",
                        i + 1
                    )));
                }
            }
        }
        let empty = !selection_rule(orb, genus, &monodromies);
        let sector = Sector { genus, monodromies, mult, broad, decorated, empty };
        sector.check_constraints(orb)?;
        Ok(sector)
    }

    pub fn n(&self) -> usize {
        self.monodromies.len()
    }

    /// `3g - 3 + n`.
    pub fn dim(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.n() as i64
    }

    pub fn is_narrow(&self) -> bool {
        self.broad.iter().all(|row| row.iter().all(|&b| !b))
    }

    /// Twisted multiplicities entering Chiodo's formula for `L_j^R`:
    /// `m_j(i)`, replaced by `r` on decorated entries.
    pub fn twisted_mult(&self, orb: &LGOrbifold, j: usize) -> Vec<u64> {
        (0..self.n()).map(|i| if self.decorated[i][j] { orb.exponent() } else { self.mult[i][j] }).collect()
    }

    /// Number `r_j` of markings broad in variable `j`.
    pub fn broad_count(&self, j: usize) -> i64 {
        self.broad.iter().filter(|row| row[j]).count() as i64
    }

    /// Number of decorated markings in variable `j`.
    pub fn decorated_count(&self, j: usize) -> i64 {
        self.decorated.iter().filter(|row| row[j]).count() as i64
    }

    /// `deg L_j^R` on the coarse curve, `(w_j(2g-2+n) - Σ a_j(i))/d`.
    pub fn bundle_degree(&self, orb: &LGOrbifold, j: usize) -> Result<i64, ValidationError> {
        let a: i64 = self.twisted_mult(orb, j).iter().map(|&x| x as i64).sum();
        let num = orb.weights[j] as i64 * (2 * self.genus as i64 - 2 + self.n() as i64) - a;
        let r = orb.exponent() as i64;
        if num.rem_euclid(r) != 0 {
            return Err(ValidationError::Sector(format!(
                "non-integral degree {num}/{r} for L_{}; the selection rule is violated",
                j + 1
            )));
        }
        Ok(num / r)
    }

    /// `ch_0(R^•π_* L_j^R) = deg + 1 - g`.
    pub fn ch0(&self, orb: &LGOrbifold, j: usize) -> Result<i64, ValidationError> {
        Ok(self.bundle_degree(orb, j)? + 1 - self.genus as i64)
    }

    /// Untwisted `ch_0(R^•π_* L_j)`.
    pub fn ch0_untwisted(&self, orb: &LGOrbifold, j: usize) -> Result<i64, ValidationError> {
        Ok(self.ch0(orb, j)? + self.decorated_count(j))
    }

    /// Chow degree of the virtual class, `-Σ_j ch_0(R^•π_* L_j^R)`.
    pub fn degvir(&self, orb: &LGOrbifold) -> Result<i64, ValidationError> {
        let mut acc = 0;
        for j in 0..orb.num_vars() {
            acc -= self.ch0(orb, j)?;
        }
        Ok(acc)
    }

    /// `p = 2g - 3 + n - degvir`, bounding the pole order in `ε`.
    pub fn pole_bound(&self, orb: &LGOrbifold) -> Result<i64, ValidationError> {
        Ok(2 * self.genus as i64 - 3 + self.n() as i64 - self.degvir(orb)?)
    }

    /// Every monomial `M` of `W` gives `Σ_j M_j m_j(i) ≡ 0 mod r`.
    fn check_constraints(&self, orb: &LGOrbifold) -> Result<(), ValidationError> {
        let r = orb.exponent();
        for (i, row) in self.mult.iter().enumerate() {
            for (k, mono) in orb.shape.exponent_matrix().iter().enumerate() {
                let s: u64 = mono.iter().zip(row).map(|(&e, &m)| e as u64 * m).sum();
                if s % r != 0 {
                    return Err(ValidationError::Sector(format!(
                        "marking {} violates the constraint of monomial {}",
                        i + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }

    fn permute_columns(&self, perm: &[usize]) -> Self {
        let p = |v: &Vec<Vec<u64>>| v.iter().map(|row| perm.iter().map(|&j| row[j]).collect()).collect();
        let q = |v: &Vec<Vec<bool>>| v.iter().map(|row| perm.iter().map(|&j| row[j]).collect()).collect();
        Sector {
            genus: self.genus,
            monodromies: self.monodromies.clone(),
            mult: p(&self.mult),
            broad: q(&self.broad),
            decorated: q(&self.decorated),
            empty: self.empty,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} k={:?}", self.genus, self.monodromies)
    }
}

/// Valid non-empty sectors with monodromies `k_1 ≤ … ≤ k_n` in `1..=r`
/// (`r` standing for the identity), optionally only the narrow ones.
pub fn enumerate_sectors(orb: &LGOrbifold, genus: u32, n: usize, narrow_only: bool) -> Vec<Sector> {
    let r = orb.exponent();
    let mut out = Vec::new();
    let mut k = vec![1u64; n];
    loop {
        if let Ok(s) = Sector::new(orb, genus, &k) {
            if !s.empty && (!narrow_only || s.is_narrow()) && loop_hypothesis(orb, &s).is_some() {
                out.push(s);
            }
        }
        // next nondecreasing tuple
        let Some(i) = (0..n).rev().find(|&i| k[i] < r) else { break };
        let v = k[i] + 1;
        for x in &mut k[i..] {
            *x = v;
        }
    }
    out
}

/// Index `j0` of a variable satisfying the loop hypothesis (`w_{j0} | d`,
/// monodromies in `⟨exp(2πi w_{j0}/d)⟩`, every broad entry of column `j0`
/// decorated). Fermat and chain polynomials always use the last variable.
pub fn loop_hypothesis(orb: &LGOrbifold, sector: &Sector) -> Option<usize> {
    let n = orb.num_vars();
    if !orb.shape.is_loop() {
        return Some(n - 1);
    }
    let d = orb.degree;
    (0..n).rev().find(|&j| {
        let w = orb.weights[j];
        let step = w % d;
        let in_subgroup = sector.mult.iter().all(|row| {
            // ⟨exp(2πi w/d)⟩ = multiples of gcd(w, d) mod d
            let g = num_integer::gcd(step, d);
            row[j] % g == 0
        });
        d % w == 0 && in_subgroup && sector.broad.iter().zip(&sector.decorated).all(|(b, r)| !b[j] || r[j])
    })
}

/// Applies the loop rotation so the hypothesis variable is last.
pub fn normalize_for_theorem(orb: &LGOrbifold, sector: &Sector) -> Result<(LGOrbifold, Sector), ValidationError> {
    let j0 = loop_hypothesis(orb, sector).ok_or_else(|| {
        ValidationError::Unsupported(format!(
            "{} fails the loop hypothesis: no variable x_j with w_j | d",
            orb.shape
        ))
    })?;
    let n = orb.num_vars();
    if j0 == n - 1 {
        return Ok((orb.clone(), sector.clone()));
    }
    let shift = (j0 + 1) % n;
    let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
    Ok((orb.rotated(j0), sector.permute_columns(&perm)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_and_degrees() {
        let f3 = LGOrbifold::fermat(3).unwrap();
        assert!(selection_rule(&f3, 0, &[2, 2, 2, 2]));
        assert!(!selection_rule(&f3, 0, &[1, 1, 1, 1]));
        let s = Sector::new(&f3, 0, &[2, 2, 2, 2]).unwrap();
        assert_eq!(s.bundle_degree(&f3, 0).unwrap(), -2);
        assert_eq!(s.ch0(&f3, 0).unwrap(), -1);
        assert_eq!(s.degvir(&f3).unwrap(), 1);
        let s = Sector::new(&f3, 1, &[1]).unwrap();
        assert_eq!(s.degvir(&f3).unwrap(), 0);
        let e = Sector::new(&f3, 0, &[1, 1, 1, 1]).unwrap();
        assert!(e.empty);
    }

    #[test]
    fn chain_decorations() {
        assert_eq!(chain_decoration(&[false, false]).unwrap(), (vec![false, false], true));
        assert_eq!(chain_decoration(&[true, true]).unwrap(), (vec![false, true], true));
        assert_eq!(chain_decoration(&[false, true]).unwrap().1, false);
        assert!(chain_decoration(&[true, false]).is_err());
        let c = LGOrbifold::chain(&[2, 3]).unwrap();
        assert_eq!(multiplicity_table(&c, &[2]), vec![vec![2, 2]]);
        let f3 = LGOrbifold::fermat(3).unwrap();
        assert!(Sector::new(&f3, 1, &[0]).is_err());
    }

    #[test]
    fn loop_rotation() {
        let l = LGOrbifold::looped(&[2, 2]).unwrap();
        let s = Sector::new(&l, 0, &[1, 1, 2]).unwrap();
        assert_eq!(loop_hypothesis(&l, &s), Some(1));
        let l34 = LGOrbifold::looped(&[3, 4]).unwrap();
        let s = Sector::new(&l34, 0, &[1, 1, 10]).unwrap();
        assert_eq!(loop_hypothesis(&l34, &s), None);
        let l23 = LGOrbifold::looped(&[3, 2]).unwrap();
        let s = Sector::new(&l23, 0, &[1, 1, 2]).unwrap();
        let (o, s2) = normalize_for_theorem(&l23, &s).unwrap();
        assert_eq!(o.weights, vec![2, 1]);
        assert_eq!(s2.mult[0], vec![2, 1]);
    }
}
