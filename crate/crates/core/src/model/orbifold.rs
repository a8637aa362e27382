use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rat;
use crate::error::ValidationError;

/// Atomic invertible polynomial types.
///
/// * `Fermat(a)`: `x^a`
/// * `Chain(a_1..a_N)`: `x_1^{a_1} x_2 + … + x_{N-1}^{a_{N-1}} x_N + x_N^{a_N}`
/// * `Loop(a_1..a_N)`: `x_1^{a_1} x_2 + … + x_N^{a_N} x_1`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Fermat(u32),
    Chain(Vec<u32>),
    Loop(Vec<u32>),
}

impl Shape {
    pub fn exponents(&self) -> Vec<u32> {
        match self {
            Shape::Fermat(a) => vec![*a],
            Shape::Chain(a) | Shape::Loop(a) => a.clone(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.exponents().len()
    }

    pub fn is_loop(&self) -> bool {
        matches!(self, Shape::Loop(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Shape::Fermat(_) => "fermat",
            Shape::Chain(_) => "chain",
            Shape::Loop(_) => "loop",
        }
    }

    /// Row `k` lists the exponents of monomial `k` in each variable.
    pub fn exponent_matrix(&self) -> Vec<Vec<u32>> {
        let a = self.exponents();
        let n = a.len();
        let mut m = vec![vec![0u32; n]; n];
        for j in 0..n {
            m[j][j] = a[j];
            match self {
                Shape::Fermat(_) => {}
                Shape::Chain(_) => {
                    if j + 1 < n {
                        m[j][j + 1] = 1;
                    }
                }
                Shape::Loop(_) => m[j][(j + 1) % n] += 1,
            }
        }
        m
    }

    fn monomial_name(&self, k: usize) -> String {
        let row = &self.exponent_matrix()[k];
        row.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| if e == 1 { format!("x{}", j + 1) } else { format!("x{}^{}", j + 1, e) })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn polynomial(&self) -> String {
        (0..self.num_vars()).map(|k| self.monomial_name(k)).collect::<Vec<_>>().join(" + ")
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.exponents().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}({})", self.kind(), a)
    }
}

/// Unique primitive solution `(w, d)` of the quasi-homogeneity equations
/// `Σ_j E_kj w_j = d`.
pub fn weights_from_shape(shape: &Shape) -> Result<(Vec<u64>, u64), ValidationError> {
    let a = shape.exponents();
    if a.is_empty() {
        return Err(ValidationError::Shape("no variables".into()));
    }
    if shape.is_loop() && a.len() < 2 {
        return Err(ValidationError::Shape("a loop needs at least two variables".into()));
    }
    if let Some(j) = a.iter().position(|&x| x < 2) {
        return Err(ValidationError::Shape(format!("exponent a_{} = {} must be at least 2", j + 1, a[j])));
    }
    let m = shape.exponent_matrix();
    let n = a.len();
    // Gaussian elimination on [E | 1].
    let mut rows: Vec<Vec<Rat>> = m
        .iter()
        .map(|r| {
            let mut v: Vec<Rat> = r.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect();
            v.push(Rat::one());
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !rows[r][col].is_zero()).ok_or_else(|| {
            ValidationError::Shape(format!("singular exponent matrix for {}", shape.polynomial()))
        })?;
        rows.swap(col, piv);
        let p = rows[col][col].clone();
        for x in rows[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=n {
                    let v = &rows[col][c] * &f;
                    rows[r][c] -= v;
                }
            }
        }
    }
    let q: Vec<Rat> = rows.iter().map(|r| r[n].clone()).collect();
    for (k, qj) in q.iter().enumerate() {
        if !qj.is_positive() || *qj >= Rat::one() {
            return Err(ValidationError::Shape(format!(
                "no admissible weights: q_{} = {} from monomial {}",
                k + 1,
                qj,
                shape.monomial_name(k)
            )));
        }
    }
    let d = q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let w: Vec<u64> = q.iter().map(|x| (x * Rat::from_integer(d.clone())).to_integer().to_u64().unwrap()).collect();
    Ok((w, d.to_u64().unwrap()))
}

/// Landau–Ginzburg orbifold `(W, G)` with `G` cyclic containing the grading
/// element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LGOrbifold {
    pub shape: Shape,
    pub weights: Vec<u64>,
    pub degree: u64,
    pub group_order: u64,
    /// Generator of `G` as residues `γ_j = exp(2πi · generator_j / group_order)`.
    pub generator: Vec<u64>,
}

impl LGOrbifold {
    /// Builds `(W, ⟨J⟩)`; `group_order` defaults to the degree. Larger cyclic
    /// groups are rejected: their spin moduli carry several independent
    /// roots and are not covered by the single-root bookkeeping used here.
    pub fn new(shape: Shape, group_order: Option<u64>) -> Result<Self, ValidationError> {
        let (weights, degree) = weights_from_shape(&shape)?;
        let group_order = group_order.unwrap_or(degree);
        if group_order == 0 || group_order % degree != 0 {
            return Err(ValidationError::Group(format!(
                "grading element of order {degree} is not contained in a cyclic group of order {group_order}"
            )));
        }
        if group_order != degree {
            return Err(ValidationError::Unsupported(format!(
                "cyclic group of order {group_order} strictly containing the grading element (order {degree})"
            )));
        }
        let generator = weights.iter().map(|w| w % degree).collect();
        let orb = LGOrbifold { shape, weights, degree, group_order, generator };
        orb.check_generator_fixes_w()?;
        Ok(orb)
    }

    pub fn fermat(a: u32) -> Result<Self, ValidationError> {
        Self::new(Shape::Fermat(a), None)
    }

    pub fn chain(a: &[u32]) -> Result<Self, ValidationError> {
        Self::new(Shape::Chain(a.to_vec()), None)
    }

    pub fn looped(a: &[u32]) -> Result<Self, ValidationError> {
        Self::new(Shape::Loop(a.to_vec()), None)
    }

    fn check_generator_fixes_w(&self) -> Result<(), ValidationError> {
        for (k, row) in self.shape.exponent_matrix().iter().enumerate() {
            let s: u64 = row.iter().zip(&self.generator).map(|(&e, &g)| e as u64 * g).sum();
            if s % self.group_order != 0 {
                return Err(ValidationError::Group(format!(
                    "generator does not fix monomial {}",
                    self.shape.monomial_name(k)
                )));
            }
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    /// Exponent `r` of `G`: the root order of the spin structure.
    pub fn exponent(&self) -> u64 {
        self.group_order
    }

    /// Residue of `γ_gen^k` in variable `j`, in `0..r`.
    pub fn multiplicity(&self, j: usize, k: u64) -> u64 {
        (self.generator[j] * (k % self.group_order)) % self.group_order
    }

    /// Cyclic relabeling for loops putting variable `j0` last.
    pub fn rotated(&self, j0: usize) -> Self {
        let n = self.num_vars();
        let shift = (j0 + 1) % n;
        let rot = |v: &[u64]| (0..n).map(|i| v[(i + shift) % n]).collect::<Vec<_>>();
        let shape = match &self.shape {
            Shape::Loop(a) => Shape::Loop((0..n).map(|i| a[(i + shift) % n]).collect()),
            other => other.clone(),
        };
        LGOrbifold {
            shape,
            weights: rot(&self.weights),
            degree: self.degree,
            group_order: self.group_order,
            generator: rot(&self.generator),
        }
    }
}

impl fmt::Display for LGOrbifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with weights {:?}, degree {}, G = mu_{}", self.shape, self.weights, self.degree, self.group_order)
    }
}

/// Group element as residues mod `group_order`, together with the power of
/// the generator representing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub residues: Vec<u64>,
    pub power: u64,
}

/// The grading element `J = (w_1/d, …, w_N/d)` located in `G`.
pub fn grading_element(orb: &LGOrbifold) -> Result<GroupElement, ValidationError> {
    let residues: Vec<u64> = orb.weights.iter().map(|w| w * orb.group_order / orb.degree % orb.group_order).collect();
    for k in 0..orb.group_order {
        if (0..orb.num_vars()).all(|j| orb.multiplicity(j, k) == residues[j]) {
            return Ok(GroupElement { residues, power: k });
        }
    }
    Err(ValidationError::Group("grading element is not a power of the generator".into()))
}

/// Exponents `e_j` with `t_j = t^{e_j}`: `e_1 = 1`, `e_{j+1} = -a_j e_j` and
/// `e_{N+1} = -(d/w_N) e_N`.
pub fn t_exponents(orb: &LGOrbifold) -> Result<Vec<i64>, ValidationError> {
    let a = orb.shape.exponents();
    let n = a.len();
    let wn = orb.weights[n - 1];
    if orb.degree % wn != 0 {
        return Err(ValidationError::Shape(format!("w_N = {wn} does not divide d = {}", orb.degree)));
    }
    let mut e = vec![1i64];
    for j in 0..n - 1 {
        e.push(-(a[j] as i64) * e[j]);
    }
    e.push(-((orb.degree / wn) as i64) * e[n - 1]);
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_systems() {
        assert_eq!(weights_from_shape(&Shape::Fermat(3)).unwrap(), (vec![1], 3));
        assert_eq!(weights_from_shape(&Shape::Chain(vec![2, 3])).unwrap(), (vec![1, 1], 3));
        assert_eq!(weights_from_shape(&Shape::Loop(vec![2, 2])).unwrap(), (vec![1, 1], 3));
        assert_eq!(weights_from_shape(&Shape::Loop(vec![3, 4])).unwrap(), (vec![3, 2], 11));
        assert_eq!(weights_from_shape(&Shape::Chain(vec![3, 2])).unwrap(), (vec![1, 3], 6));
        assert!(weights_from_shape(&Shape::Fermat(1)).is_err());
        assert!(weights_from_shape(&Shape::Loop(vec![2])).is_err());
    }

    #[test]
    fn exponents_of_t() {
        assert_eq!(t_exponents(&LGOrbifold::fermat(3).unwrap()).unwrap(), vec![1, -3]);
        assert_eq!(t_exponents(&LGOrbifold::chain(&[2, 3]).unwrap()).unwrap(), vec![1, -2, 6]);
        assert_eq!(t_exponents(&LGOrbifold::chain(&[5]).unwrap()).unwrap(), vec![1, -5]);
    }

    #[test]
    fn group_checks() {
        let orb = LGOrbifold::chain(&[2, 3]).unwrap();
        assert_eq!(grading_element(&orb).unwrap(), GroupElement { residues: vec![1, 1], power: 1 });
        assert!(matches!(LGOrbifold::new(Shape::Fermat(3), Some(4)), Err(ValidationError::Group(_))));
        assert!(matches!(LGOrbifold::new(Shape::Fermat(3), Some(6)), Err(ValidationError::Unsupported(_))));
        let r = LGOrbifold::looped(&[2, 3]).unwrap();
        let rot = r.rotated(0);
        assert_eq!(rot.shape, Shape::Loop(vec![3, 2]));
        assert_eq!(rot.weights, vec![r.weights[1], r.weights[0]]);
    }
}
