//! Exact Fourier–Motzkin elimination over integer-coefficient systems.
//!
//! Equalities are eliminated by pivoting; inequalities by pairing every lower
//! bound with every upper bound, the combination being strict iff one of its
//! parents is. Rows are kept normalized (content divided out) and dominated
//! rows with identical coefficients are dropped after every step.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{DRel, LinearConstraintD};

/// Marker for a system proven infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Infeasible;

pub(crate) type Rows = Vec<LinearConstraintD>;

enum Normal {
    True,
    False,
    Row(LinearConstraintD),
}

fn normalize(mut c: LinearConstraintD) -> Normal {
    let mut g = BigInt::zero();
    for a in &c.coeffs {
        g = g.gcd(a);
    }
    if g.is_zero() {
        let ok = match c.rel {
            DRel::Le => !c.constant.is_negative(),
            DRel::Lt => c.constant.is_positive(),
            DRel::Eq => c.constant.is_zero(),
        };
        return if ok { Normal::True } else { Normal::False };
    }
    if c.rel == DRel::Eq {
        if !(&c.constant % &g).is_zero() {
            // still satisfiable over the rationals; keep the full content
            g = g.gcd(&c.constant);
        }
        let first = c.coeffs.iter().find(|a| !a.is_zero()).unwrap();
        if first.is_negative() {
            g = -g;
        }
    } else {
        g = g.gcd(&c.constant);
    }
    if !g.is_one() {
        for a in c.coeffs.iter_mut() {
            *a = &*a / &g;
        }
        c.constant = &c.constant / &g;
    }
    Normal::Row(c)
}

/// Normalize, drop trivial rows, keep the tightest row per coefficient
/// vector, and detect contradictions between a row and its opposite.
pub(crate) fn simplify(rows: Rows) -> Result<Rows, Infeasible> {
    // key: coefficient vector; value: (strict, constant) for inequalities
    let mut ineqs: BTreeMap<Vec<BigInt>, (bool, BigInt)> = BTreeMap::new();
    let mut eqs: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
    for r in rows {
        match normalize(r) {
            Normal::True => {}
            Normal::False => return Err(Infeasible),
            Normal::Row(r) => match r.rel {
                DRel::Eq => match eqs.get(&r.coeffs) {
                    Some(k) if *k != r.constant => return Err(Infeasible),
                    Some(_) => {}
                    None => {
                        eqs.insert(r.coeffs, r.constant);
                    }
                },
                rel => {
                    let strict = rel == DRel::Lt;
                    match ineqs.get_mut(&r.coeffs) {
                        Some(cur) => {
                            if r.constant < cur.1 || (r.constant == cur.1 && strict) {
                                *cur = (strict, r.constant);
                            }
                        }
                        None => {
                            ineqs.insert(r.coeffs, (strict, r.constant));
                        }
                    }
                }
            },
        }
    }

    // a·x ≺ c together with -a·x ≺' c' requires -c' ≺ c; when both are
    // non-strict and -c' = c the pair is the equality a·x = c.
    let keys: Vec<Vec<BigInt>> = ineqs.keys().cloned().collect();
    for key in keys {
        let Some((s1, c1)) = ineqs.get(&key).cloned() else { continue };
        let neg: Vec<BigInt> = key.iter().map(|a| -a).collect();
        let Some((s2, c2)) = ineqs.get(&neg).cloned() else { continue };
        let sum = &c1 + &c2;
        if sum.is_negative() || (sum.is_zero() && (s1 || s2)) {
            return Err(Infeasible);
        }
        if sum.is_zero() {
            ineqs.remove(&key);
            ineqs.remove(&neg);
            let eq = LinearConstraintD::new(key, DRel::Eq, c1);
            match normalize(eq) {
                Normal::Row(r) => match eqs.get(&r.coeffs) {
                    Some(k) if *k != r.constant => return Err(Infeasible),
                    _ => {
                        eqs.insert(r.coeffs, r.constant);
                    }
                },
                Normal::False => return Err(Infeasible),
                Normal::True => {}
            }
        }
    }

    // An inequality implied or refuted by an equality with the same or the
    // opposite coefficient vector.
    let mut out: Rows = Vec::with_capacity(eqs.len() + ineqs.len());
    for (coeffs, (strict, c)) in ineqs {
        let neg: Vec<BigInt> = coeffs.iter().map(|a| -a).collect();
        let fixed = if let Some(k) = eqs.get(&coeffs) {
            Some(k.clone())
        } else {
            eqs.get(&neg).map(|k| -k)
        };
        if let Some(v) = fixed {
            let ok = if strict { v < c } else { v <= c };
            if !ok {
                return Err(Infeasible);
            }
            continue;
        }
        let rel = if strict { DRel::Lt } else { DRel::Le };
        out.push(LinearConstraintD::new(coeffs, rel, c));
    }
    for (coeffs, c) in eqs {
        out.push(LinearConstraintD::new(coeffs, DRel::Eq, c));
    }
    out.sort();
    Ok(out)
}

/// Remove variable `var` (the column stays, with coefficient zero).
pub(crate) fn eliminate(rows: &[LinearConstraintD], var: usize) -> Result<Rows, Infeasible> {
    if let Some(p) = rows.iter().position(|r| r.rel == DRel::Eq && !r.coeffs[var].is_zero()) {
        let mut pivot = rows[p].clone();
        if pivot.coeffs[var].is_negative() {
            pivot = pivot.scaled(&BigInt::from(-1));
        }
        let a = pivot.coeffs[var].clone();
        let out: Rows = rows
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != p)
            .map(|(_, r)| {
                if r.coeffs[var].is_zero() {
                    r.clone()
                } else {
                    // a·r - b·pivot, with a > 0, keeps the relation of r.
                    let b = r.coeffs[var].clone();
                    let coeffs = r
                        .coeffs
                        .iter()
                        .zip(&pivot.coeffs)
                        .map(|(x, y)| &a * x - &b * y)
                        .collect();
                    LinearConstraintD::new(coeffs, r.rel, &a * &r.constant - &b * &pivot.constant)
                }
            })
            .collect();
        return simplify(out);
    }

    let mut keep = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for r in rows {
        let a = &r.coeffs[var];
        if a.is_zero() {
            keep.push(r.clone());
        } else if a.is_positive() {
            upper.push(r);
        } else {
            lower.push(r);
        }
    }
    for u in &upper {
        for l in &lower {
            let cu = u.coeffs[var].clone();
            let cl = -l.coeffs[var].clone();
            let coeffs = u
                .coeffs
                .iter()
                .zip(&l.coeffs)
                .map(|(x, y)| &cl * x + &cu * y)
                .collect();
            let strict = u.rel == DRel::Lt || l.rel == DRel::Lt;
            let rel = if strict { DRel::Lt } else { DRel::Le };
            keep.push(LinearConstraintD::new(coeffs, rel, &cl * &u.constant + &cu * &l.constant));
        }
    }
    simplify(keep)
}

fn occurs(rows: &[LinearConstraintD], var: usize) -> bool {
    rows.iter().any(|r| !r.coeffs[var].is_zero())
}

/// Cheapest next variable: equality pivots first, then the smallest
/// lower × upper product.
fn pick(rows: &[LinearConstraintD], vars: &[usize]) -> usize {
    let mut best = (usize::MAX, vars[0]);
    for &v in vars {
        if rows.iter().any(|r| r.rel == DRel::Eq && !r.coeffs[v].is_zero()) {
            return v;
        }
        let lo = rows.iter().filter(|r| r.coeffs[v].is_negative()).count();
        let hi = rows.iter().filter(|r| r.coeffs[v].is_positive()).count();
        let cost = lo * hi;
        if cost < best.0 {
            best = (cost, v);
        }
    }
    best.1
}

pub(crate) fn is_feasible(rows: &[LinearConstraintD]) -> bool {
    let Ok(mut cur) = simplify(rows.to_vec()) else { return false };
    let dim = rows.first().map_or(0, |r| r.coeffs.len());
    let mut vars: Vec<usize> = (0..dim).filter(|&v| occurs(&cur, v)).collect();
    while !vars.is_empty() {
        let v = pick(&cur, &vars);
        match eliminate(&cur, v) {
            Ok(next) => cur = next,
            Err(Infeasible) => return false,
        }
        vars.retain(|&w| w != v && occurs(&cur, w));
    }
    true
}

/// A rational point satisfying every row, if one exists.
pub(crate) fn sample(rows: &[LinearConstraintD], dim: usize) -> Option<Vec<BigRational>> {
    let cur = simplify(rows.to_vec()).ok()?;
    let mut point = vec![BigRational::zero(); dim];
    let order: Vec<usize> = (0..dim).collect();
    if fill(&cur, &order, &mut point) {
        Some(point)
    } else {
        None
    }
}

/// The last variable of `vars` is eliminated first and assigned last, once
/// the others hold values satisfying the projected system.
fn fill(rows: &[LinearConstraintD], vars: &[usize], point: &mut [BigRational]) -> bool {
    let Some((&v, rest)) = vars.split_last() else {
        return rows.iter().all(|r| r.holds(point));
    };
    let Ok(projected) = eliminate(rows, v) else { return false };
    if !fill(&projected, rest, point) {
        return false;
    }
    // Bounds on v once the other coordinates are fixed.
    let mut lo: Option<(BigRational, bool)> = None;
    let mut hi: Option<(BigRational, bool)> = None;
    for r in rows {
        let a = &r.coeffs[v];
        if a.is_zero() {
            continue;
        }
        let mut rest_val = BigRational::zero();
        for (i, c) in r.coeffs.iter().enumerate() {
            if i != v && !c.is_zero() {
                rest_val += BigRational::from_integer(c.clone()) * &point[i];
            }
        }
        let bound = (BigRational::from_integer(r.constant.clone()) - rest_val)
            / BigRational::from_integer(a.clone());
        if r.rel == DRel::Eq {
            point[v] = bound;
            return rows.iter().all(|r| r.holds(point));
        }
        let strict = r.rel == DRel::Lt;
        if a.is_positive() {
            if hi.as_ref().map_or(true, |(h, s)| bound < *h || (bound == *h && strict && !s)) {
                hi = Some((bound, strict));
            }
        } else if lo.as_ref().map_or(true, |(l, s)| bound > *l || (bound == *l && strict && !s)) {
            lo = Some((bound, strict));
        }
    }
    let one = BigRational::one();
    point[v] = match (lo, hi) {
        (None, None) => BigRational::zero(),
        (Some((l, _)), None) => l + one,
        (None, Some((h, _))) => h - one,
        (Some((l, ls)), Some((h, hs))) => {
            if l == h && !ls && !hs {
                l
            } else {
                (l + h) / BigRational::from_integer(BigInt::from(2))
            }
        }
    };
    rows.iter().all(|r| r.holds(point))
}
