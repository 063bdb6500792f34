//! Integer-decimal functions: canonical finite unions `⋃ Z + f(Z)`.
//!
//! An [`IdfSet`] is a list of cells `(Z, D)` with `Z` a Presburger set and `D`
//! a decimal set. The decimal parts partition `[0,1)^n` and the integer labels
//! are pairwise distinct; the cell labelled `∅` collects the decimals that
//! belong to no sum. Under those invariants two values denote the same set of
//! reals iff their cells match label by label with equal decimal parts.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::decimal::DecimalSet;
use crate::error::{Error, Result};
use crate::presburger::IntegerSet;

/// One pair `(Z, f(Z))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub zpart: IntegerSet,
    pub dpart: DecimalSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdfSet {
    dim: usize,
    cells: Vec<Cell>,
}

/// Size figures reported by [`IdfSet::stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stats {
    pub cells: usize,
    pub states: usize,
    pub regions: usize,
}

/// Labels under construction; `BTreeMap` keeps equal canonical automata merged.
type Labels = BTreeMap<IntegerSet, DecimalSet>;

fn add(labels: &mut Labels, z: IntegerSet, d: DecimalSet) {
    if d.is_empty() {
        return;
    }
    match labels.get_mut(&z) {
        Some(cur) => *cur = cur.union(&d).expect("same dimension"),
        None => {
            labels.insert(z, d);
        }
    }
}

impl IdfSet {
    fn from_labels(dim: usize, labels: Labels) -> IdfSet {
        let (mut empty, mut cells): (Vec<Cell>, Vec<Cell>) = labels
            .into_iter()
            .map(|(zpart, dpart)| Cell {
                zpart,
                dpart: dpart.coalesced(),
            })
            .partition(|c| c.zpart.is_empty());
        // BTreeMap order is already the canonical key order.
        cells.append(&mut empty);
        IdfSet { dim, cells }
    }

    /// The empty set of `R^dim`.
    pub fn empty(dim: usize) -> Result<IdfSet> {
        let mut labels = Labels::new();
        labels.insert(IntegerSet::empty(dim)?, DecimalSet::full(dim));
        Ok(IdfSet::from_labels(dim, labels))
    }

    /// All of `R^dim`.
    pub fn universe(dim: usize) -> Result<IdfSet> {
        let mut labels = Labels::new();
        labels.insert(IntegerSet::universe(dim)?, DecimalSet::full(dim));
        Ok(IdfSet::from_labels(dim, labels))
    }

    /// Canonical form of `⋃ (Z_i + D_i)`.
    ///
    /// Starting from the single cell `(∅, cube)`, each pair `(Z, D)` splits
    /// every cell `(Z', D')` into `(Z' ∪ Z, D' ∩ D)` and `(Z', D' \ D)`;
    /// cells whose labels coincide are then merged.
    pub fn normalize(dim: usize, pairs: &[(IntegerSet, DecimalSet)]) -> Result<IdfSet> {
        for (z, d) in pairs {
            Error::check_dim(dim, z.dim())?;
            Error::check_dim(dim, d.dim())?;
        }
        let mut labels = Labels::new();
        labels.insert(IntegerSet::empty(dim)?, DecimalSet::full(dim));
        for (z, d) in pairs {
            if z.is_empty() || d.is_empty() {
                continue;
            }
            let mut next = Labels::new();
            for (zl, dl) in labels {
                let joined = zl.union(z)?;
                if joined == zl {
                    add(&mut next, zl, dl);
                    continue;
                }
                add(&mut next, joined, dl.intersect(d)?);
                add(&mut next, zl, dl.difference(d)?);
            }
            labels = next;
        }
        Ok(IdfSet::from_labels(dim, labels))
    }

    /// Assemble cells read back from an external source, checking every
    /// invariant.
    pub fn from_cells(dim: usize, cells: Vec<Cell>) -> Result<IdfSet> {
        let mut labels = Labels::new();
        for c in cells {
            Error::check_dim(dim, c.zpart.dim())?;
            Error::check_dim(dim, c.dpart.dim())?;
            if labels.contains_key(&c.zpart) {
                return Err(Error::Malformed("duplicate integer label".into()));
            }
            if c.dpart.is_empty() {
                return Err(Error::Malformed("cell with an empty decimal part".into()));
            }
            labels.insert(c.zpart.canonicalize(), c.dpart);
        }
        let f = IdfSet::from_labels(dim, labels);
        f.check_partition().map_err(Error::Malformed)?;
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Partition invariant: decimal parts pairwise disjoint and covering the
    /// cube, labels distinct.
    pub fn check_partition(&self) -> std::result::Result<(), String> {
        for (i, a) in self.cells.iter().enumerate() {
            if a.dpart.is_empty() {
                return Err(format!("cell {i} has an empty decimal part"));
            }
            for (j, b) in self.cells.iter().enumerate().skip(i + 1) {
                if a.zpart == b.zpart {
                    return Err(format!("cells {i} and {j} share a label"));
                }
                if !a.dpart.is_disjoint(&b.dpart).map_err(|e| e.to_string())? {
                    return Err(format!("decimal parts of cells {i} and {j} overlap"));
                }
            }
        }
        let all = self
            .cells
            .iter()
            .try_fold(DecimalSet::empty(self.dim), |acc, c| acc.union(&c.dpart))
            .map_err(|e| e.to_string())?;
        if !all.is_full() {
            return Err("decimal parts do not cover the cube".into());
        }
        Ok(())
    }

    fn refine(&self, other: &IdfSet, op: impl Fn(&IntegerSet, &IntegerSet) -> Result<IntegerSet>) -> Result<IdfSet> {
        Error::check_dim(self.dim, other.dim)?;
        let mut labels = Labels::new();
        for a in &self.cells {
            for b in &other.cells {
                let d = a.dpart.intersect(&b.dpart)?;
                if d.is_empty() {
                    continue;
                }
                add(&mut labels, op(&a.zpart, &b.zpart)?, d);
            }
        }
        Ok(IdfSet::from_labels(self.dim, labels))
    }

    pub fn union(&self, other: &IdfSet) -> Result<IdfSet> {
        self.refine(other, |a, b| a.union(b))
    }

    pub fn intersect(&self, other: &IdfSet) -> Result<IdfSet> {
        self.refine(other, |a, b| a.intersect(b))
    }

    pub fn difference(&self, other: &IdfSet) -> Result<IdfSet> {
        self.refine(other, |a, b| a.difference(b))
    }

    pub fn complement(&self) -> IdfSet {
        let labels = self
            .cells
            .iter()
            .map(|c| (c.zpart.complement(), c.dpart.clone()))
            .collect();
        IdfSet::from_labels(self.dim, labels)
    }

    /// Cartesian product; coordinates of `self` come first.
    pub fn product(&self, other: &IdfSet) -> Result<IdfSet> {
        let dim = self.dim + other.dim;
        let mut labels = Labels::new();
        for a in &self.cells {
            for b in &other.cells {
                add(&mut labels, a.zpart.product(&b.zpart)?, a.dpart.product(&b.dpart));
            }
        }
        Ok(IdfSet::from_labels(dim, labels))
    }

    /// Existential projection of coordinate `i`.
    pub fn project(&self, i: usize) -> Result<IdfSet> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        let mut pairs = Vec::new();
        for c in &self.cells {
            if c.zpart.is_empty() {
                continue;
            }
            pairs.push((c.zpart.project(i)?, c.dpart.project(i)?));
        }
        IdfSet::normalize(self.dim - 1, &pairs)
    }

    /// Component `k` of a result vector is component `perm[k]` of a member.
    pub fn reorder(&self, perm: &[usize]) -> Result<IdfSet> {
        let mut labels = Labels::new();
        for c in &self.cells {
            labels.insert(c.zpart.reorder(perm)?, c.dpart.reorder(perm)?);
        }
        Ok(IdfSet::from_labels(self.dim, labels))
    }

    pub fn contains(&self, r: &[BigRational]) -> Result<bool> {
        Error::check_dim(self.dim, r.len())?;
        let z: Vec<BigInt> = r.iter().map(|x| x.numer().div_floor(x.denom())).collect();
        let d: Vec<BigRational> = r
            .iter()
            .zip(&z)
            .map(|(x, zi)| x - BigRational::from_integer(zi.clone()))
            .collect();
        for c in &self.cells {
            if c.dpart.contains(&d)? {
                return c.zpart.contains(&z);
            }
        }
        Err(Error::Malformed("decimal parts do not cover the point".into()))
    }

    /// Label-by-label comparison; sound and complete for values satisfying
    /// the invariants.
    pub fn equals(&self, other: &IdfSet) -> Result<bool> {
        Error::check_dim(self.dim, other.dim)?;
        if self.cells.len() != other.cells.len() {
            return Ok(false);
        }
        for (a, b) in self.cells.iter().zip(&other.cells) {
            if a.zpart != b.zpart || !a.dpart.equals(&b.dpart)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_subset(&self, other: &IdfSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.zpart.is_empty())
    }

    pub fn is_universal(&self) -> bool {
        self.cells.len() == 1 && self.cells[0].zpart.is_universe()
    }

    pub fn stats(&self) -> Stats {
        Stats {
            cells: self.cells.len(),
            states: self.cells.iter().map(|c| c.zpart.num_states()).sum(),
            regions: self.cells.iter().map(|c| c.dpart.regions().len()).sum(),
        }
    }

    /// Some member, if nonempty.
    pub fn witness(&self) -> Option<Vec<BigRational>> {
        for c in &self.cells {
            let Some(z) = c.zpart.witness() else { continue };
            let d = c.dpart.sample()?;
            return Some(
                z.into_iter()
                    .zip(d)
                    .map(|(zi, di)| BigRational::from_integer(zi) + di)
                    .collect(),
            );
        }
        None
    }

    /// The set `{ r | r_i is an integer }`.
    pub fn integral_coordinate(dim: usize, i: usize) -> Result<IdfSet> {
        if i >= dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        let mut coeffs = vec![BigInt::zero(); dim];
        coeffs[i] = BigInt::one();
        let d = DecimalSet::from_constraints(
            dim,
            vec![crate::decimal::LinearConstraintD::new(
                coeffs,
                crate::decimal::DRel::Eq,
                BigInt::zero(),
            )],
        )?;
        IdfSet::normalize(dim, &[(IntegerSet::universe(dim)?, d)])
    }
}

impl fmt::Display for IdfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.cells.iter().enumerate() {
            let label = if c.zpart.is_empty() {
                "empty".to_string()
            } else if c.zpart.is_universe() {
                "all".to_string()
            } else {
                format!("{} states", c.zpart.num_states())
            };
            writeln!(f, "cell {i}: Z = {label}; D = {}", c.dpart)?;
        }
        Ok(())
    }
}
