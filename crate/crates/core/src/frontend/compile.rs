//! Lowering of formulas to [`IdfSet`]s.
//!
//! Every variable `x_i` is split as `z_i + d_i`. An atom `Σ a_i x_i ▹ c`
//! becomes a finite union over the integer value `k` of `s = Σ a_i d_i`
//! (the carry) of pairs `(⟦Σ a_i z_i ▹' c'⟧, ⟦s ▹'' k⟧)`; connectives and
//! quantifiers map to the corresponding IDF operations.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ast::{Atom, Formula, Rel, Sort, VarContext};
use crate::decimal::{DRel, DecimalSet, LinearConstraintD};
use crate::error::{Error, Result};
use crate::idf::IdfSet;
use crate::presburger::{IntegerSet, LinearConstraintZ, ZRel};

/// Bounds `[L, U]` on the carry of an atom: `L` sums the negative
/// coefficients of real-sorted coordinates, `U` the positive ones.
pub fn carry_range(coeffs: &[BigInt], sorts: &[Sort]) -> (BigInt, BigInt) {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for (a, s) in coeffs.iter().zip(sorts) {
        if *s == Sort::Int {
            continue;
        }
        if a.is_negative() {
            lo += a;
        } else {
            hi += a;
        }
    }
    (lo, hi)
}

fn zc(coeffs: &[BigInt], rel: ZRel, k: BigInt) -> Result<IntegerSet> {
    IntegerSet::from_constraint(&LinearConstraintZ::new(coeffs.to_vec(), rel, k))
}

/// The pairs of the carry decomposition for carries `lo..=hi`, before
/// normalization. Empty decimal parts are dropped.
pub fn carry_pairs(
    coeffs: &[BigInt],
    rel: Rel,
    c: &BigInt,
    sorts: &[Sort],
    lo: &BigInt,
    hi: &BigInt,
) -> Result<Vec<(IntegerSet, DecimalSet)>> {
    let n = coeffs.len();
    Error::check_dim(n, sorts.len())?;
    let real: Vec<BigInt> = coeffs
        .iter()
        .zip(sorts)
        .map(|(a, s)| if *s == Sort::Real { a.clone() } else { BigInt::zero() })
        .collect();
    let neg: Vec<BigInt> = real.iter().map(|a| -a).collect();
    // integer-sorted coordinates have no decimal part
    let pinned: Vec<LinearConstraintD> = (0..n)
        .filter(|&i| sorts[i] == Sort::Int)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            LinearConstraintD::new(e, DRel::Eq, BigInt::zero())
        })
        .collect();
    let region = |extra: Vec<LinearConstraintD>| -> Result<DecimalSet> {
        let mut cs = pinned.clone();
        cs.extend(extra);
        DecimalSet::from_constraints(n, cs)
    };
    let s_eq = |k: &BigInt| LinearConstraintD::new(real.clone(), DRel::Eq, k.clone());
    let s_gt = |k: &BigInt| LinearConstraintD::new(neg.clone(), DRel::Lt, -k);
    let s_ge = |k: &BigInt| LinearConstraintD::new(neg.clone(), DRel::Le, -k);
    let s_lt = |k: &BigInt| LinearConstraintD::new(real.clone(), DRel::Lt, k.clone());

    let mut out = Vec::new();
    let mut push = |z: IntegerSet, d: DecimalSet| {
        if !d.is_empty() && !z.is_empty() {
            out.push((z, d));
        }
    };
    let mut k = lo.clone();
    while k <= *hi {
        let k1 = &k + 1;
        match rel {
            Rel::Le => {
                push(zc(coeffs, ZRel::Le, c - &k)?, region(vec![s_eq(&k)])?);
                push(zc(coeffs, ZRel::Le, c - &k1)?, region(vec![s_gt(&k), s_lt(&k1)])?);
            }
            Rel::Lt => {
                push(zc(coeffs, ZRel::Le, c - &k1)?, region(vec![s_ge(&k), s_lt(&k1)])?);
            }
            Rel::Eq => {
                push(zc(coeffs, ZRel::Eq, c - &k)?, region(vec![s_eq(&k)])?);
            }
        }
        k = k1;
    }
    Ok(out)
}

/// Atom over real-sorted coordinates.
pub fn compile_atom(coeffs: &[BigInt], rel: Rel, c: &BigInt) -> Result<IdfSet> {
    compile_atom_sorted(coeffs, rel, c, &vec![Sort::Real; coeffs.len()])
}

/// Atom with per-coordinate sorts; integer-sorted coordinates contribute
/// nothing to the carry and are pinned to decimal part 0.
pub fn compile_atom_sorted(coeffs: &[BigInt], rel: Rel, c: &BigInt, sorts: &[Sort]) -> Result<IdfSet> {
    let (lo, hi) = carry_range(coeffs, sorts);
    let pairs = carry_pairs(coeffs, rel, c, sorts, &lo, &hi)?;
    IdfSet::normalize(coeffs.len(), &pairs)
}

/// `{ r | r_i ∈ Z for every integer-sorted i }`.
pub fn sort_domain(sorts: &[Sort]) -> Result<IdfSet> {
    let n = sorts.len();
    let pinned: Vec<LinearConstraintD> = (0..n)
        .filter(|&i| sorts[i] == Sort::Int)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            LinearConstraintD::new(e, DRel::Eq, BigInt::zero())
        })
        .collect();
    if pinned.is_empty() {
        return IdfSet::universe(n);
    }
    let d = DecimalSet::from_constraints(n, pinned)?;
    IdfSet::normalize(n, &[(IntegerSet::universe(n)?, d)])
}

struct Compiler {
    env: Vec<(String, Sort)>,
}

impl Compiler {
    fn sorts(&self) -> Vec<Sort> {
        self.env.iter().map(|(_, s)| *s).collect()
    }

    fn has_ints(&self) -> bool {
        self.env.iter().any(|(_, s)| *s == Sort::Int)
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        self.env.iter().rposition(|(n, _)| n == name)
    }

    fn negate(&self, f: IdfSet) -> Result<IdfSet> {
        let c = f.complement();
        if self.has_ints() {
            c.intersect(&sort_domain(&self.sorts())?)
        } else {
            Ok(c)
        }
    }

    fn atom(&self, a: &Atom) -> Result<IdfSet> {
        let mut coeffs = vec![BigInt::zero(); self.env.len()];
        for (x, v) in &a.coeffs {
            let i = self.lookup(x).ok_or_else(|| Error::UnboundVariable(x.clone()))?;
            coeffs[i] += v;
        }
        compile_atom_sorted(&coeffs, a.rel, &a.constant, &self.sorts())
    }

    fn quantify(&mut self, x: &str, sort: Sort, body: &Formula) -> Result<IdfSet> {
        self.env.push((x.to_string(), sort));
        let f = self.run(body);
        self.env.pop();
        f?.project(self.env.len())
    }

    fn run(&mut self, f: &Formula) -> Result<IdfSet> {
        match f {
            Formula::Bool(true) => sort_domain(&self.sorts()),
            Formula::Bool(false) => IdfSet::empty(self.env.len()),
            Formula::Atom(a) => self.atom(a),
            Formula::Not(a) => {
                let a = self.run(a)?;
                self.negate(a)
            }
            Formula::And(a, b) => self.run(a)?.intersect(&self.run(b)?),
            Formula::Or(a, b) => self.run(a)?.union(&self.run(b)?),
            Formula::Implies(a, b) => {
                let na = self.run(a)?;
                let na = self.negate(na)?;
                na.union(&self.run(b)?)
            }
            Formula::Iff(a, b) => {
                let fa = self.run(a)?;
                let fb = self.run(b)?;
                let both = fa.intersect(&fb)?;
                let neither = self.negate(fa.union(&fb)?)?;
                both.union(&neither)
            }
            Formula::Exists(x, s, body) => self.quantify(x, *s, body),
            Formula::Forall(x, s, body) => {
                let inner = Formula::not((**body).clone());
                let e = self.quantify(x, *s, &inner)?;
                self.negate(e)
            }
        }
    }
}

/// Compile `f` over the coordinates of `ctx`. Variables of `f` that are not
/// bound must appear in `ctx`.
pub fn compile(f: &Formula, ctx: &VarContext) -> Result<IdfSet> {
    let mut c = Compiler {
        env: ctx.vars().to_vec(),
    };
    c.run(f)
}

/// Truth value of a closed formula.
pub fn decide(f: &Formula) -> Result<bool> {
    let free = f.free_names();
    if !free.is_empty() {
        return Err(Error::NotClosed(free.into_iter().collect()));
    }
    Ok(compile(f, &VarContext::default())?.is_universal())
}
