//! Difference bound matrices and their Presburger-parameterized extension.
//!
//! A [`Dbm`] over `n` clocks is an `(n+1)×(n+1)` matrix of bounds; entry
//! `(i, j)` constrains `r_i - r_j`, with the fictive clock `r_0 = 0`.
//! A [`CpDbmPlus`] replaces the constants by a parameter vector ranging over a
//! Presburger set, and denotes the union of the corresponding DBM sets.

mod cpdbm;
mod demo;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::decimal::{DRel, DecimalSet, LinearConstraintD};
use crate::error::{Error, Result};

pub use cpdbm::{param_name, CpDbmPlus, SignRegion};
pub use demo::{timed_demo, timed_demo_dbms, timed_demo_formula, timed_demo_shapes, TimedDemo};

/// `≺ c`, or no constraint when `value` is `None` (+∞).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bound {
    pub value: Option<BigInt>,
    pub strict: bool,
}

impl Bound {
    pub fn le(c: i64) -> Bound {
        Bound {
            value: Some(BigInt::from(c)),
            strict: false,
        }
    }

    pub fn lt(c: i64) -> Bound {
        Bound {
            value: Some(BigInt::from(c)),
            strict: true,
        }
    }

    pub fn inf() -> Bound {
        Bound {
            value: None,
            strict: false,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_none()
    }

    fn add(&self, other: &Bound) -> Bound {
        match (&self.value, &other.value) {
            (Some(a), Some(b)) => Bound {
                value: Some(a + b),
                strict: self.strict || other.strict,
            },
            _ => Bound::inf(),
        }
    }

    /// Tightness order: smaller admits fewer differences.
    fn tightness(&self, other: &Bound) -> Ordering {
        match (&self.value, &other.value) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(b).then_with(|| other.strict.cmp(&self.strict)),
        }
    }

    fn admits(&self, delta: &BigRational) -> bool {
        match &self.value {
            None => true,
            Some(c) => {
                let c = BigRational::from_integer(c.clone());
                if self.strict {
                    *delta < c
                } else {
                    *delta <= c
                }
            }
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            None => write!(f, "<inf"),
            Some(c) if self.strict => write!(f, "<{c}"),
            Some(c) => write!(f, "<={c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dbm {
    n: usize,
    bounds: Vec<Vec<Bound>>,
}

impl Dbm {
    /// No constraint except the diagonal.
    pub fn unconstrained(n: usize) -> Dbm {
        let mut bounds = vec![vec![Bound::inf(); n + 1]; n + 1];
        for (i, row) in bounds.iter_mut().enumerate() {
            row[i] = Bound::le(0);
        }
        Dbm { n, bounds }
    }

    pub fn from_bounds(n: usize, bounds: Vec<Vec<Bound>>) -> Result<Dbm> {
        if bounds.len() != n + 1 || bounds.iter().any(|r| r.len() != n + 1) {
            return Err(Error::Malformed(format!("a DBM over {n} clocks needs a {0}x{0} matrix", n + 1)));
        }
        Ok(Dbm { n, bounds })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self, i: usize, j: usize) -> &Bound {
        &self.bounds[i][j]
    }

    pub fn bounds(&self) -> &[Vec<Bound>] {
        &self.bounds
    }

    pub fn set(&mut self, i: usize, j: usize, b: Bound) {
        self.bounds[i][j] = b;
    }

    /// Keep the tighter of the current bound and `b`.
    pub fn tighten(&mut self, i: usize, j: usize, b: Bound) {
        if b.tightness(&self.bounds[i][j]) == Ordering::Less {
            self.bounds[i][j] = b;
        }
    }

    /// Shortest-path closure; `None` when the set is empty.
    pub fn canonical(&self) -> Option<Dbm> {
        let k = self.n + 1;
        let mut m = self.bounds.clone();
        for via in 0..k {
            for i in 0..k {
                if m[i][via].is_infinite() {
                    continue;
                }
                for j in 0..k {
                    let cand = m[i][via].add(&m[via][j]);
                    if cand.tightness(&m[i][j]) == Ordering::Less {
                        m[i][j] = cand;
                    }
                }
            }
        }
        let zero = Bound::le(0);
        if (0..k).any(|i| m[i][i].tightness(&zero) == Ordering::Less) {
            return None;
        }
        Some(Dbm { n: self.n, bounds: m })
    }

    /// Difference `r_i - r_j` of a point, with `r_0 = 0`.
    fn delta(r: &[BigRational], i: usize, j: usize) -> BigRational {
        let get = |k: usize| if k == 0 { BigRational::zero() } else { r[k - 1].clone() };
        get(i) - get(j)
    }

    pub fn contains(&self, r: &[BigRational]) -> Result<bool> {
        Error::check_dim(self.n, r.len())?;
        for i in 0..=self.n {
            for j in 0..=self.n {
                if !self.bounds[i][j].admits(&Dbm::delta(r, i, j)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The DBM set intersected with the cube, as a single region.
    pub fn to_decimal(&self) -> DecimalSet {
        let n = self.n;
        let mut cs = Vec::new();
        for i in 0..=n {
            for j in 0..=n {
                let b = &self.bounds[i][j];
                let Some(c) = &b.value else { continue };
                let mut coeffs = vec![BigInt::zero(); n];
                if i > 0 {
                    coeffs[i - 1] += 1;
                }
                if j > 0 {
                    coeffs[j - 1] -= 1;
                }
                let rel = if b.strict { DRel::Lt } else { DRel::Le };
                cs.push(LinearConstraintD::new(coeffs, rel, c.clone()));
            }
        }
        DecimalSet::from_constraints(n, cs).expect("dimensions agree")
    }

    /// This DBM intersected with `0 <= r_i < 1`.
    pub fn within_cube(&self) -> Dbm {
        let mut out = self.clone();
        for i in 1..=self.n {
            out.tighten(i, 0, Bound::lt(1));
            out.tighten(0, i, Bound::le(0));
        }
        out
    }
}

impl fmt::Display for Dbm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.bounds {
            let cells: Vec<String> = row.iter().map(|b| b.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
