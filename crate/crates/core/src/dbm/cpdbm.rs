use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Bound, Dbm};
use crate::decimal::{DRel, DecimalSet, LinearConstraintD};
use crate::error::{Error, Result};
use crate::frontend::{compile, Formula, Sort, VarContext};
use crate::idf::IdfSet;
use crate::presburger::{IntegerSet, LinearConstraintZ, ZRel};

/// Name of the parameter for entry `(i, j)` in formula text.
pub fn param_name(i: usize, j: usize) -> String {
    format!("c_{i}_{j}")
}

/// A DBM whose constant matrix ranges over a Presburger set.
///
/// `phi` has one integer coordinate per matrix entry, row-major. Entries
/// flagged in `infinite` are unconstrained: their coordinate in `phi` is
/// ignored and they contribute no conjunct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpDbmPlus {
    n: usize,
    strict: Vec<Vec<bool>>,
    infinite: Vec<Vec<bool>>,
    phi: IntegerSet,
}

/// A decimal region on which every sign `d_i - d_j ≺_{ij} 0` is fixed.
#[derive(Debug, Clone)]
pub struct SignRegion {
    /// `m[i][j]` is false iff `d_i - d_j ≺_{ij} 0` holds on the region.
    pub m: Vec<Vec<bool>>,
    pub region: DecimalSet,
}

fn square(n: usize, v: bool) -> Vec<Vec<bool>> {
    vec![vec![v; n + 1]; n + 1]
}

impl CpDbmPlus {
    pub fn new(n: usize, strict: Vec<Vec<bool>>, infinite: Vec<Vec<bool>>, phi: IntegerSet) -> Result<Self> {
        let k = n + 1;
        for m in [&strict, &infinite] {
            if m.len() != k || m.iter().any(|r| r.len() != k) {
                return Err(Error::Malformed(format!("relation matrices must be {k}x{k}")));
            }
        }
        Error::check_dim(k * k, phi.dim())?;
        Ok(CpDbmPlus {
            n,
            strict,
            infinite,
            phi,
        })
    }

    /// Parameters constrained by a formula over the names [`param_name`].
    pub fn from_formula(n: usize, strict: Vec<Vec<bool>>, infinite: Vec<Vec<bool>>, phi: &Formula) -> Result<Self> {
        let k = n + 1;
        let ctx = VarContext::new(
            (0..k)
                .flat_map(|i| (0..k).map(move |j| (param_name(i, j), Sort::Int)))
                .collect(),
        );
        let f = compile(phi, &ctx)?;
        let origin = vec![BigRational::zero(); k * k];
        let mut set = IntegerSet::empty(k * k)?;
        for c in f.cells() {
            if c.dpart.contains(&origin)? {
                set = c.zpart.clone();
            }
        }
        CpDbmPlus::new(n, strict, infinite, set)
    }

    /// The plain DBM `m` as a constant parameter vector.
    pub fn from_dbm(m: &Dbm) -> Result<Self> {
        let n = m.n();
        let k = n + 1;
        let mut strict = square(n, false);
        let mut infinite = square(n, false);
        let mut cs = Vec::new();
        for i in 0..k {
            for j in 0..k {
                let b = m.bound(i, j);
                let Some(c) = &b.value else {
                    infinite[i][j] = true;
                    continue;
                };
                strict[i][j] = b.strict;
                let mut a = vec![BigInt::zero(); k * k];
                a[i * k + j] = BigInt::one();
                cs.push(LinearConstraintZ::new(a, ZRel::Eq, c.clone()));
            }
        }
        CpDbmPlus::new(n, strict, infinite, IntegerSet::from_constraints(k * k, &cs)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phi(&self) -> &IntegerSet {
        &self.phi
    }

    pub fn is_strict(&self, i: usize, j: usize) -> bool {
        self.strict[i][j]
    }

    pub fn is_infinite(&self, i: usize, j: usize) -> bool {
        self.infinite[i][j]
    }

    fn k(&self) -> usize {
        self.n + 1
    }

    fn param(&self, i: usize, j: usize) -> usize {
        i * self.k() + j
    }

    fn finite_entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.k();
        (0..k)
            .flat_map(move |i| (0..k).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.infinite[i][j])
    }

    /// `Z + m`, where `m` is first intersected with the cube.
    ///
    /// The parameters are `p_ij = c_ij + z_i - z_j` for `z ∈ Z`, `z_0 = 0`.
    pub fn compose(z: &IntegerSet, m: &Dbm) -> Result<Self> {
        let n = m.n();
        Error::check_dim(n, z.dim())?;
        let m = m.within_cube();
        let k = n + 1;
        let params = k * k;
        let mut strict = square(n, false);
        let mut infinite = square(n, false);
        let mut cs = Vec::new();
        for i in 0..k {
            for j in 0..k {
                let b: &Bound = m.bound(i, j);
                let Some(c) = &b.value else {
                    infinite[i][j] = true;
                    continue;
                };
                strict[i][j] = b.strict;
                let mut a = vec![BigInt::zero(); params + n];
                a[i * k + j] = BigInt::one();
                if i > 0 {
                    a[params + i - 1] -= 1;
                }
                if j > 0 {
                    a[params + j - 1] += 1;
                }
                cs.push(LinearConstraintZ::new(a, ZRel::Eq, c.clone()));
            }
        }
        let tied = IntegerSet::from_constraints(params + n, &cs)?;
        let with_z = IntegerSet::universe(params)?.product(z)?;
        let drop: Vec<usize> = (params..params + n).collect();
        let phi = tied.intersect(&with_z)?.project_many(&drop)?;
        CpDbmPlus::new(n, strict, infinite, phi)
    }

    /// Membership of a real point, decided on `phi` without enumeration:
    /// the point satisfies parameter `c` iff every finite `c_ij` is at least
    /// the least integer admitting `r_i - r_j`.
    pub fn contains(&self, r: &[BigRational]) -> Result<bool> {
        Error::check_dim(self.n, r.len())?;
        let params = self.k() * self.k();
        let mut cs = Vec::new();
        for (i, j) in self.finite_entries() {
            let delta = Dbm::delta(r, i, j);
            let floor = delta.numer().div_floor(delta.denom());
            let beta = if self.strict[i][j] || !delta.is_integer() {
                floor + 1
            } else {
                floor
            };
            let mut a = vec![BigInt::zero(); params];
            a[self.param(i, j)] = BigInt::from(-1);
            cs.push(LinearConstraintZ::new(a, ZRel::Le, -beta));
        }
        self.phi.intersects_constraints(&cs)
    }

    /// Regions of `[0,1)^n` with a fixed sign matrix, one per weak order of
    /// the fractional parts compatible with `d_0 = 0` being the least.
    /// Regions sharing a sign matrix are merged.
    pub fn sign_regions(&self) -> Vec<SignRegion> {
        let n = self.n;
        let mut out: Vec<SignRegion> = Vec::new();
        let mut ranks = vec![0usize; n + 1];
        loop {
            if contiguous(&ranks) {
                let m = self.signs(&ranks);
                let region = rank_region(&ranks);
                match out.iter_mut().find(|s| s.m == m) {
                    Some(s) => s.region = s.region.union(&region).expect("same dimension"),
                    None => out.push(SignRegion { m, region }),
                }
            }
            // next rank vector; ranks[0] stays 0
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                if ranks[i] < n {
                    ranks[i] += 1;
                    break;
                }
                ranks[i] = 0;
                i -= 1;
            }
        }
    }

    fn signs(&self, ranks: &[usize]) -> Vec<Vec<bool>> {
        let k = self.k();
        let mut m = square(self.n, false);
        for i in 0..k {
            for j in 0..k {
                if self.infinite[i][j] {
                    continue;
                }
                let holds = if self.strict[i][j] {
                    ranks[i] < ranks[j]
                } else {
                    ranks[i] <= ranks[j]
                };
                m[i][j] = !holds;
            }
        }
        m
    }

    /// `I_m = { z | ∃c ∈ phi. z_i - z_j <= c_ij - m_ij }` with `z_0 = 0`.
    ///
    /// Clock tracks are added one at a time; entries whose clocks are all
    /// present are constrained and projected away immediately, which keeps
    /// the alphabet small.
    pub fn integer_label(&self, m: &[Vec<bool>]) -> Result<IntegerSet> {
        let k = self.k();
        let infinite: Vec<usize> = (0..k * k)
            .filter(|&p| self.infinite[p / k][p % k])
            .collect();
        let mut set = self.phi.project_many(&infinite)?;
        // Some((i, j)) for a parameter track, None for a clock track
        let mut tracks: Vec<Option<(usize, usize)>> = self.finite_entries().map(Some).collect();
        let mut clocks: Vec<usize> = Vec::new();
        for t in 0..k {
            if t > 0 {
                set = set.product(&IntegerSet::universe(1)?)?;
                tracks.push(None);
                clocks.push(t);
            }
            let clock_pos = |c: usize, tracks: &[Option<(usize, usize)>]| {
                let first = tracks.iter().position(|x| x.is_none()).unwrap_or(tracks.len());
                first + clocks.iter().position(|&x| x == c).expect("clock present")
            };
            let dim = tracks.len();
            let mut cs = Vec::new();
            let mut done = Vec::new();
            for (p, e) in tracks.iter().enumerate() {
                let Some((i, j)) = *e else { continue };
                if i.max(j) != t {
                    continue;
                }
                let mut a = vec![BigInt::zero(); dim];
                a[p] = BigInt::from(-1);
                if i > 0 {
                    a[clock_pos(i, &tracks)] += 1;
                }
                if j > 0 {
                    a[clock_pos(j, &tracks)] -= 1;
                }
                cs.push(LinearConstraintZ::new(a, ZRel::Le, -BigInt::from(m[i][j] as i64)));
                done.push(p);
            }
            if done.is_empty() {
                continue;
            }
            set = set.intersect(&IntegerSet::from_constraints(dim, &cs)?)?.project_many(&done)?;
            let mut p = 0;
            tracks.retain(|_| {
                p += 1;
                !done.contains(&(p - 1))
            });
        }
        Ok(set)
    }

    /// The IDF denoting the same set of reals.
    pub fn decompose(&self) -> Result<IdfSet> {
        let mut labels: HashMap<Vec<Vec<bool>>, IntegerSet> = HashMap::new();
        let mut pairs = Vec::new();
        for s in self.sign_regions() {
            let z = match labels.get(&s.m) {
                Some(z) => z.clone(),
                None => {
                    let z = self.integer_label(&s.m)?;
                    labels.insert(s.m.clone(), z.clone());
                    z
                }
            };
            pairs.push((z, s.region));
        }
        IdfSet::normalize(self.n, &pairs)
    }
}

/// Ranks used form `{0, …, k}`.
fn contiguous(ranks: &[usize]) -> bool {
    let max = *ranks.iter().max().unwrap_or(&0);
    (0..=max).all(|r| ranks.contains(&r))
}

/// `d_i = 0` at rank 0, equal ranks tie, higher ranks are strictly larger.
fn rank_region(ranks: &[usize]) -> DecimalSet {
    let n = ranks.len() - 1;
    let mut cs = Vec::new();
    let unit = |i: usize, j: usize| {
        let mut a = vec![BigInt::zero(); n];
        if i > 0 {
            a[i - 1] += 1;
        }
        if j > 0 {
            a[j - 1] -= 1;
        }
        a
    };
    for i in 0..=n {
        for j in i + 1..=n {
            let c = match ranks[i].cmp(&ranks[j]) {
                std::cmp::Ordering::Less => LinearConstraintD::new(unit(i, j), DRel::Lt, BigInt::zero()),
                std::cmp::Ordering::Equal => LinearConstraintD::new(unit(i, j), DRel::Eq, BigInt::zero()),
                std::cmp::Ordering::Greater => LinearConstraintD::new(unit(j, i), DRel::Lt, BigInt::zero()),
            };
            cs.push(c);
        }
    }
    DecimalSet::from_constraints(n, cs).expect("dimensions agree")
}
