use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
#[cfg(test)]
use num_traits::{Signed, Zero};

use super::{check_capacity, IntegerSet};
use crate::error::{Error, Result};

/// Relation of an integer atom. Strict and reversed relations are rewritten
/// into these two before reaching the backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZRel {
    Le,
    Eq,
}

/// `coeffs · z  rel  constant` over `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearConstraintZ {
    pub coeffs: Vec<BigInt>,
    pub rel: ZRel,
    pub constant: BigInt,
}

impl LinearConstraintZ {
    pub fn new(coeffs: Vec<BigInt>, rel: ZRel, constant: BigInt) -> Self {
        LinearConstraintZ {
            coeffs,
            rel,
            constant,
        }
    }

    pub fn from_i64(coeffs: &[i64], rel: ZRel, constant: i64) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), rel, BigInt::from(constant))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn holds(&self, z: &[BigInt]) -> bool {
        let lhs: BigInt = self.coeffs.iter().zip(z).map(|(a, b)| a * b).sum();
        match self.rel {
            ZRel::Le => lhs <= self.constant,
            ZRel::Eq => lhs == self.constant,
        }
    }
}

impl IntegerSet {
    pub fn from_constraint(c: &LinearConstraintZ) -> Result<Self> {
        Self::from_constraints(c.dim(), std::slice::from_ref(c))
    }

    /// Automaton of a conjunction of linear constraints.
    ///
    /// Each constraint is built on its own and the results are intersected
    /// with minimization in between; a joint residual automaton over many
    /// constraints on disjoint coordinates grows multiplicatively.
    pub fn from_constraints(dim: usize, constraints: &[LinearConstraintZ]) -> Result<Self> {
        check_capacity(dim)?;
        for c in constraints {
            Error::check_dim(dim, c.dim())?;
        }
        let mut acc = match constraints.first() {
            None => return IntegerSet::universe(dim),
            Some(c) => Self::residual_automaton(dim, std::slice::from_ref(c)),
        };
        for c in &constraints[1..] {
            if acc.is_empty() {
                break;
            }
            acc = acc.intersect(&Self::residual_automaton(dim, std::slice::from_ref(c)))?;
        }
        Ok(acc)
    }

    /// Whether `self` meets the conjunction of `constraints`, explored on the
    /// fly: the constraint automaton is never built or minimized, and states
    /// of `self` that cannot reach acceptance are pruned.
    pub fn intersects_constraints(&self, constraints: &[LinearConstraintZ]) -> Result<bool> {
        let dim = self.dim();
        for c in constraints {
            Error::check_dim(dim, c.dim())?;
        }
        let k = self.alphabet_size();
        let live = self.coaccessible();
        if !live[self.initial() as usize] {
            return Ok(false);
        }
        let dots = letter_dots(dim, constraints);
        let init: Vec<BigInt> = constraints.iter().map(|c| c.constant.clone()).collect();
        let mut seen: HashSet<(u32, Vec<BigInt>)> = HashSet::new();
        let mut stack = vec![(self.initial(), init)];
        while let Some((q, res)) = stack.pop() {
            for letter in 0..k {
                let t = self.next(q, letter);
                if !live[t as usize] {
                    continue;
                }
                let Some((r, flag)) = step(constraints, &dots, &res, letter) else {
                    continue;
                };
                if flag && self.is_accepting(t) {
                    return Ok(true);
                }
                let key = (t, r);
                if !seen.contains(&key) {
                    seen.insert(key.clone());
                    stack.push(key);
                }
            }
        }
        Ok(false)
    }

    /// Automaton of a conjunction of linear constraints, built in one pass.
    ///
    /// A state holds one residual per constraint: after reading the prefix
    /// `v` (unsigned value of the digits so far, `k` digits), the residual is
    /// the bound the remaining suffix `t` must meet in `a·t rel γ`, where
    /// `z = v + 2^k t`. Reading letter `b` maps `γ` to `⌊(γ - a·b)/2⌋` for
    /// `≤`, or to `(γ - a·b)/2` for `=` (a dead state when odd). A word that
    /// stops after `b` means `t = -b`, so the flag of the target state records
    /// `-a·b rel γ'`. Residuals stay within `max(|c|, Σ|a|)`.
    fn residual_automaton(dim: usize, constraints: &[LinearConstraintZ]) -> Self {
        let k = 1usize << dim;
        let dots = letter_dots(dim, constraints);

        type Key = Option<(Vec<BigInt>, bool)>;
        let mut index: HashMap<Key, u32> = HashMap::new();
        let mut states: Vec<Key> = Vec::new();
        let mut trans: Vec<u32> = Vec::new();

        // State 0 is the initial state; it is never accepting.
        let init: Key = Some((constraints.iter().map(|c| c.constant.clone()).collect(), false));
        // The initial state gets a distinct key so it is not merged with a
        // later state holding the same residuals and flag.
        states.push(init);
        let mut next = 0usize;
        while next < states.len() {
            let key = states[next].clone();
            for letter in 0..k {
                let target: Key = match &key {
                    None => None,
                    Some((res, _)) => step(constraints, &dots, res, letter),
                };
                let id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = states.len() as u32;
                        index.insert(target.clone(), id);
                        states.push(target);
                        id
                    }
                };
                trans.push(id);
            }
            next += 1;
        }
        let mut accepting: Vec<bool> = states
            .iter()
            .map(|s| matches!(s, Some((_, true))))
            .collect();
        accepting[0] = false;
        IntegerSet::raw(dim, 0, accepting, trans).minimized()
    }
}

/// `dots[i][letter] = a_i · b` for the digit-vector `b` of `letter`.
fn letter_dots(dim: usize, constraints: &[LinearConstraintZ]) -> Vec<Vec<BigInt>> {
    constraints
        .iter()
        .map(|c| {
            (0..1usize << dim)
                .map(|letter| {
                    c.coeffs
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| IntegerSet::digit(dim, letter, *j))
                        .map(|(_, a)| a.clone())
                        .sum()
                })
                .collect()
        })
        .collect()
}

fn step(
    constraints: &[LinearConstraintZ],
    dots: &[Vec<BigInt>],
    res: &[BigInt],
    letter: usize,
) -> Option<(Vec<BigInt>, bool)> {
    let two = BigInt::from(2);
    let mut out = Vec::with_capacity(res.len());
    let mut accept = true;
    for (i, c) in constraints.iter().enumerate() {
        let ab = &dots[i][letter];
        let diff = &res[i] - ab;
        let g = match c.rel {
            ZRel::Le => diff.div_floor(&two),
            ZRel::Eq => {
                if diff.is_odd() {
                    return None;
                }
                diff / &two
            }
        };
        let neg_ab = -ab;
        accept &= match c.rel {
            ZRel::Le => neg_ab <= g,
            ZRel::Eq => neg_ab == g,
        };
        out.push(g);
    }
    Some((out, accept))
}

/// Bound on residual magnitudes reachable from a constraint.
#[cfg(test)]
pub(crate) fn residual_bound(c: &LinearConstraintZ) -> BigInt {
    let sum: BigInt = c.coeffs.iter().map(|a| a.abs()).sum();
    let m = c.constant.abs();
    if m > sum {
        m
    } else if sum.is_zero() {
        BigInt::zero()
    } else {
        sum
    }
}
