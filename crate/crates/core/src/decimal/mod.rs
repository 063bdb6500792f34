//! Polyhedral subsets of the half-open cube `[0,1)^n`.
//!
//! A [`DecimalSet`] is a finite union of [`ConvexRegion`]s, each a conjunction
//! of linear constraints with integer coefficients and `≤`, `<` or `=`
//! relations. The cube constraints `0 ≤ d_i` and `d_i < 1` are materialized in
//! every region. Empty regions are pruned eagerly; there is no syntactic
//! normal form, so equality is decided semantically (mutual inclusion).

mod coalesce;
mod fm;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::presburger::check_permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DRel {
    Le,
    Lt,
    Eq,
}

impl DRel {
    pub fn symbol(self) -> &'static str {
        match self {
            DRel::Le => "<=",
            DRel::Lt => "<",
            DRel::Eq => "=",
        }
    }
}

/// `coeffs · d  rel  constant`, integer coefficients only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearConstraintD {
    pub coeffs: Vec<BigInt>,
    pub rel: DRel,
    pub constant: BigInt,
}

impl LinearConstraintD {
    pub fn new(coeffs: Vec<BigInt>, rel: DRel, constant: BigInt) -> Self {
        LinearConstraintD {
            coeffs,
            rel,
            constant,
        }
    }

    pub fn from_i64(coeffs: &[i64], rel: DRel, constant: i64) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), rel, BigInt::from(constant))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// `holds` at the point `n / l`, for `l > 0`.
    fn holds_scaled(&self, n: &[BigInt], l: &BigInt) -> bool {
        let mut lhs = BigInt::zero();
        for (a, x) in self.coeffs.iter().zip(n) {
            if !a.is_zero() {
                lhs += a * x;
            }
        }
        let c = &self.constant * l;
        match self.rel {
            DRel::Le => lhs <= c,
            DRel::Lt => lhs < c,
            DRel::Eq => lhs == c,
        }
    }

    pub fn holds(&self, p: &[BigRational]) -> bool {
        let mut lhs = BigRational::zero();
        for (a, x) in self.coeffs.iter().zip(p) {
            if !a.is_zero() {
                lhs += BigRational::from_integer(a.clone()) * x;
            }
        }
        let c = BigRational::from_integer(self.constant.clone());
        match self.rel {
            DRel::Le => lhs <= c,
            DRel::Lt => lhs < c,
            DRel::Eq => lhs == c,
        }
    }

    pub(crate) fn scaled(&self, k: &BigInt) -> Self {
        LinearConstraintD::new(self.coeffs.iter().map(|a| a * k).collect(), self.rel, &self.constant * k)
    }

    /// Disjuncts of the negation.
    pub fn negate(&self) -> Vec<LinearConstraintD> {
        let neg: Vec<BigInt> = self.coeffs.iter().map(|a| -a).collect();
        let nc = -&self.constant;
        match self.rel {
            DRel::Le => vec![LinearConstraintD::new(neg, DRel::Lt, nc)],
            DRel::Lt => vec![LinearConstraintD::new(neg, DRel::Le, nc)],
            DRel::Eq => vec![
                LinearConstraintD::new(self.coeffs.clone(), DRel::Lt, self.constant.clone()),
                LinearConstraintD::new(neg, DRel::Lt, nc),
            ],
        }
    }

    fn is_domain(&self) -> bool {
        let mut nz = self.coeffs.iter().filter(|a| !a.is_zero());
        let (Some(a), None) = (nz.next(), nz.next()) else { return false };
        (a == &BigInt::from(-1) && self.rel == DRel::Le && self.constant.is_zero())
            || (a.is_one() && self.rel == DRel::Lt && self.constant.is_one())
    }

    fn remove_coord(&self, i: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.remove(i);
        LinearConstraintD::new(coeffs, self.rel, self.constant.clone())
    }

    fn widened(&self, before: usize, after: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); before];
        coeffs.extend(self.coeffs.iter().cloned());
        coeffs.extend(std::iter::repeat(BigInt::zero()).take(after));
        LinearConstraintD::new(coeffs, self.rel, self.constant.clone())
    }
}

impl fmt::Display for LinearConstraintD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else { "+" };
            let mag = a.abs();
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "d{i}")?;
            } else {
                write!(f, "{mag}*d{i}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " {} {}", self.rel.symbol(), self.constant)
    }
}

/// Cube constraints `0 ≤ d_i`, `d_i < 1`.
fn domain(dim: usize) -> Vec<LinearConstraintD> {
    let mut out = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        let mut lo = vec![BigInt::zero(); dim];
        lo[i] = BigInt::from(-1);
        out.push(LinearConstraintD::new(lo, DRel::Le, BigInt::zero()));
        let mut hi = vec![BigInt::zero(); dim];
        hi[i] = BigInt::one();
        out.push(LinearConstraintD::new(hi, DRel::Lt, BigInt::one()));
    }
    out
}

/// A convex polyhedral subset of `[0,1)^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConvexRegion {
    dim: usize,
    constraints: Vec<LinearConstraintD>,
}

impl ConvexRegion {
    /// The region cut out by `constraints` inside the cube. Returns `None`
    /// when the conjunction is unsatisfiable.
    pub fn new(dim: usize, constraints: Vec<LinearConstraintD>) -> Result<Option<Self>> {
        for c in &constraints {
            Error::check_dim(dim, c.dim())?;
        }
        Ok(Self::build(dim, constraints))
    }

    fn build(dim: usize, mut constraints: Vec<LinearConstraintD>) -> Option<Self> {
        constraints.extend(domain(dim));
        let constraints = fm::simplify(constraints).ok()?;
        if !fm::is_feasible(&constraints) {
            return None;
        }
        Some(ConvexRegion { dim, constraints })
    }

    /// The whole cube.
    pub fn cube(dim: usize) -> Self {
        ConvexRegion {
            dim,
            constraints: fm::simplify(domain(dim)).expect("the cube is nonempty"),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[LinearConstraintD] {
        &self.constraints
    }

    pub fn contains(&self, p: &[BigRational]) -> bool {
        self.constraints.iter().all(|c| c.holds(p))
    }

    pub fn is_empty(&self) -> bool {
        !fm::is_feasible(&self.constraints)
    }

    pub fn sample(&self) -> Option<Vec<BigRational>> {
        fm::sample(&self.constraints, self.dim)
    }

    fn meet(&self, other: &ConvexRegion) -> Option<ConvexRegion> {
        let mut cs = self.constraints.clone();
        cs.extend(other.constraints.iter().cloned());
        Self::build(self.dim, cs)
    }

    fn with(&self, extra: impl IntoIterator<Item = LinearConstraintD>) -> Option<ConvexRegion> {
        let mut cs = self.constraints.clone();
        cs.extend(extra);
        Self::build(self.dim, cs)
    }

    /// `self \ other` as a list of pairwise disjoint nonempty regions.
    fn minus(&self, other: &ConvexRegion) -> Vec<ConvexRegion> {
        if self.meet(other).is_none() {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        let mut prefix: Vec<LinearConstraintD> = Vec::new();
        for c in other.constraints.iter().filter(|c| !c.is_domain()) {
            let mut pieces_nonempty = false;
            for neg in c.negate() {
                let mut extra = prefix.clone();
                extra.push(neg);
                if let Some(r) = self.with(extra) {
                    out.push(r);
                    pieces_nonempty = true;
                }
            }
            // A constraint already implied by `self` adds nothing to later
            // pieces.
            if pieces_nonempty {
                prefix.push(c.clone());
            }
        }
        out
    }

    fn project(&self, i: usize) -> Option<ConvexRegion> {
        let rows = fm::eliminate(&self.constraints, i).ok()?;
        let rows = rows.iter().map(|r| r.remove_coord(i)).collect();
        Self::build(self.dim - 1, rows)
    }
}

impl fmt::Display for ConvexRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .constraints
            .iter()
            .filter(|c| !c.is_domain())
            .map(|c| c.to_string())
            .collect();
        if parts.is_empty() {
            write!(f, "cube")
        } else {
            write!(f, "{}", parts.join(" and "))
        }
    }
}

/// A finite union of convex regions of `[0,1)^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecimalSet {
    dim: usize,
    regions: Vec<ConvexRegion>,
}

impl DecimalSet {
    pub fn empty(dim: usize) -> Self {
        DecimalSet {
            dim,
            regions: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        DecimalSet {
            dim,
            regions: vec![ConvexRegion::cube(dim)],
        }
    }

    /// One convex region given by a conjunction.
    pub fn from_constraints(dim: usize, constraints: Vec<LinearConstraintD>) -> Result<Self> {
        Ok(DecimalSet {
            dim,
            regions: ConvexRegion::new(dim, constraints)?.into_iter().collect(),
        })
    }

    pub fn from_regions(dim: usize, regions: Vec<ConvexRegion>) -> Result<Self> {
        for r in &regions {
            Error::check_dim(dim, r.dim)?;
        }
        Ok(DecimalSet {
            dim,
            regions: regions.into_iter().filter(|r| !r.is_empty()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn regions(&self) -> &[ConvexRegion] {
        &self.regions
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn contains(&self, p: &[BigRational]) -> Result<bool> {
        Error::check_dim(self.dim, p.len())?;
        for x in p {
            if x.is_negative() || *x >= BigRational::one() {
                return Err(Error::PointOutsideCube(x.to_string()));
            }
        }
        let l = p.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let n: Vec<BigInt> = p.iter().map(|x| x.numer() * (&l / x.denom())).collect();
        Ok(self
            .regions
            .iter()
            .any(|r| r.constraints.iter().all(|c| c.is_domain() || c.holds_scaled(&n, &l))))
    }

    pub fn sample(&self) -> Option<Vec<BigRational>> {
        self.regions.iter().find_map(|r| r.sample())
    }

    pub fn intersect(&self, other: &DecimalSet) -> Result<DecimalSet> {
        Error::check_dim(self.dim, other.dim)?;
        let mut regions = Vec::new();
        for a in &self.regions {
            for b in &other.regions {
                if let Some(r) = a.meet(b) {
                    regions.push(r);
                }
            }
        }
        Ok(DecimalSet {
            dim: self.dim,
            regions,
        })
    }

    pub fn union(&self, other: &DecimalSet) -> Result<DecimalSet> {
        Error::check_dim(self.dim, other.dim)?;
        let mut regions = self.regions.clone();
        for r in &other.regions {
            if !regions.contains(r) {
                regions.push(r.clone());
            }
        }
        Ok(DecimalSet {
            dim: self.dim,
            regions,
        })
    }

    pub fn difference(&self, other: &DecimalSet) -> Result<DecimalSet> {
        Error::check_dim(self.dim, other.dim)?;
        let mut pieces = self.regions.clone();
        for b in &other.regions {
            if pieces.is_empty() {
                break;
            }
            pieces = pieces.iter().flat_map(|p| p.minus(b)).collect();
        }
        Ok(DecimalSet {
            dim: self.dim,
            regions: pieces,
        })
    }

    /// Complement relative to the cube.
    pub fn complement(&self) -> DecimalSet {
        DecimalSet::full(self.dim)
            .difference(self)
            .expect("same dimension")
    }

    pub fn is_subset(&self, other: &DecimalSet) -> Result<bool> {
        Error::check_dim(self.dim, other.dim)?;
        // Region by region, stopping at the first leftover piece.
        for a in &self.regions {
            let mut pieces = vec![a.clone()];
            for b in &other.regions {
                pieces = pieces.iter().flat_map(|p| p.minus(b)).collect();
                if pieces.is_empty() {
                    break;
                }
            }
            if !pieces.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &DecimalSet) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    pub fn is_full(&self) -> bool {
        DecimalSet::full(self.dim).is_subset(self).unwrap_or(false)
    }

    pub fn is_disjoint(&self, other: &DecimalSet) -> Result<bool> {
        Error::check_dim(self.dim, other.dim)?;
        Ok(self
            .regions
            .iter()
            .all(|a| other.regions.iter().all(|b| a.meet(b).is_none())))
    }

    /// Existential projection of coordinate `i`.
    pub fn project(&self, i: usize) -> Result<DecimalSet> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        let mut regions: Vec<ConvexRegion> = Vec::new();
        for r in &self.regions {
            if let Some(p) = r.project(i) {
                if !regions.contains(&p) {
                    regions.push(p);
                }
            }
        }
        Ok(DecimalSet {
            dim: self.dim - 1,
            regions: coalesce::coalesce(regions),
        })
    }

    /// Component `k` of a result point is component `perm[k]` of a member.
    pub fn reorder(&self, perm: &[usize]) -> Result<DecimalSet> {
        check_permutation(perm, self.dim)?;
        let regions = self
            .regions
            .iter()
            .map(|r| {
                let cs = r
                    .constraints
                    .iter()
                    .map(|c| {
                        let coeffs = perm.iter().map(|&p| c.coeffs[p].clone()).collect();
                        LinearConstraintD::new(coeffs, c.rel, c.constant.clone())
                    })
                    .collect();
                ConvexRegion {
                    dim: r.dim,
                    constraints: fm::simplify(cs).expect("reordering preserves feasibility"),
                }
            })
            .collect();
        Ok(DecimalSet {
            dim: self.dim,
            regions,
        })
    }

    /// Cartesian product; coordinates of `self` come first.
    pub fn product(&self, other: &DecimalSet) -> DecimalSet {
        let dim = self.dim + other.dim;
        let mut regions = Vec::new();
        for a in &self.regions {
            for b in &other.regions {
                let mut cs: Vec<LinearConstraintD> =
                    a.constraints.iter().map(|c| c.widened(0, other.dim)).collect();
                cs.extend(b.constraints.iter().map(|c| c.widened(self.dim, 0)));
                regions.push(ConvexRegion {
                    dim,
                    constraints: fm::simplify(cs).expect("product of nonempty regions"),
                });
            }
        }
        DecimalSet { dim, regions }
    }

    /// Merge regions that differ in one complementary constraint and drop
    /// regions syntactically contained in another. Semantics unchanged.
    pub fn coalesced(self) -> DecimalSet {
        DecimalSet {
            dim: self.dim,
            regions: coalesce::coalesce(self.regions),
        }
    }

    /// Drop regions covered by the union of the others. Semantics unchanged.
    pub fn compact(&self) -> DecimalSet {
        let mut regions = self.regions.clone();
        let mut i = 0;
        while i < regions.len() {
            let others = DecimalSet {
                dim: self.dim,
                regions: regions
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, r)| r.clone())
                    .collect(),
            };
            let single = DecimalSet {
                dim: self.dim,
                regions: vec![regions[i].clone()],
            };
            if single.is_subset(&others).unwrap_or(false) {
                regions.remove(i);
            } else {
                i += 1;
            }
        }
        DecimalSet {
            dim: self.dim,
            regions,
        }
    }
}

impl fmt::Display for DecimalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.regions.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self.regions.iter().map(|r| format!("({r})")).collect();
        write!(f, "{}", parts.join(" or "))
    }
}

#[cfg(test)]
mod tests;
