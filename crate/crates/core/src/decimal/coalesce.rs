//! Exact merging of regions in a union.
//!
//! Two regions `S ∧ t ∈ I1` and `S ∧ t ∈ I2`, where every constraint outside
//! `S` bounds the same linear form `t = a·d`, merge into `S ∧ t ∈ I1 ∪ I2`
//! when that union is an interval. A region whose constraints include all of
//! another's is dropped, as is one confined to a sub-interval of another.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{ConvexRegion, DRel, LinearConstraintD};

/// Endpoint of an interval on `t`: value and strictness.
type End = Option<(BigRational, bool)>;

/// `c` as `t ∈ (lo, hi)` for the primitive form `t = a·d` whose first
/// nonzero coefficient is positive.
fn as_interval(c: &LinearConstraintD) -> Option<(Vec<BigInt>, End, End)> {
    let g = c.coeffs.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
    let first = c.coeffs.iter().find(|a| !a.is_zero())?;
    let g = if first.is_negative() { -g } else { g };
    let a: Vec<BigInt> = c.coeffs.iter().map(|x| x / &g).collect();
    let k = BigRational::new(c.constant.clone(), g.clone());
    let flip = g.is_negative();
    let end = |strict| Some((k.clone(), strict));
    Some(match (c.rel, flip) {
        (DRel::Eq, _) => (a, end(false), end(false)),
        (DRel::Le, false) => (a, None, end(false)),
        (DRel::Lt, false) => (a, None, end(true)),
        (DRel::Le, true) => (a, end(false), None),
        (DRel::Lt, true) => (a, end(true), None),
    })
}

#[derive(Clone, Debug)]
struct Interval {
    lo: End,
    hi: End,
}

fn tighter(x: End, y: End, lower: bool) -> End {
    match (x, y) {
        (None, e) | (e, None) => e,
        (Some((a, sa)), Some((b, sb))) => {
            let pick_a = if a == b { sa } else { (a > b) == lower };
            Some(if pick_a { (a, sa) } else { (b, sb) })
        }
    }
}

fn looser(x: End, y: End, lower: bool) -> End {
    match (x, y) {
        (Some((a, sa)), Some((b, sb))) => {
            let pick_a = if a == b { !sa } else { (a < b) == lower };
            Some(if pick_a { (a, sa) } else { (b, sb) })
        }
        _ => None,
    }
}

impl Interval {
    fn meet(self, lo: End, hi: End) -> Interval {
        Interval {
            lo: tighter(self.lo, lo, true),
            hi: tighter(self.hi, hi, false),
        }
    }

    fn within(&self, other: &Interval) -> bool {
        let lo_ok = match (&self.lo, &other.lo) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some((a, sa)), Some((b, sb))) => a > b || (a == b && (*sa || !*sb)),
        };
        let hi_ok = match (&self.hi, &other.hi) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some((a, sa)), Some((b, sb))) => a < b || (a == b && (*sa || !*sb)),
        };
        lo_ok && hi_ok
    }

    /// The union, when it is again an interval.
    fn join(&self, other: &Interval) -> Option<Interval> {
        let gap = |hi: &End, lo: &End| match (hi, lo) {
            (Some((h, sh)), Some((l, sl))) => h < l || (h == l && *sh && *sl),
            _ => false,
        };
        if gap(&self.hi, &other.lo) || gap(&other.hi, &self.lo) {
            return None;
        }
        Some(Interval {
            lo: looser(self.lo.clone(), other.lo.clone(), true),
            hi: looser(self.hi.clone(), other.hi.clone(), false),
        })
    }

    fn constraints(&self, a: &[BigInt]) -> Vec<LinearConstraintD> {
        let scaled = |k: &BigRational, sign: i32| -> (Vec<BigInt>, BigInt) {
            let d = k.denom();
            (a.iter().map(|x| x * d * sign).collect(), k.numer() * sign)
        };
        let rel = |strict: bool| if strict { DRel::Lt } else { DRel::Le };
        match (&self.lo, &self.hi) {
            (Some((l, false)), Some((h, false))) if l == h => {
                let (coeffs, k) = scaled(l, 1);
                vec![LinearConstraintD::new(coeffs, DRel::Eq, k)]
            }
            (lo, hi) => {
                let mut out = Vec::new();
                if let Some((l, s)) = lo {
                    let (coeffs, k) = scaled(l, -1);
                    out.push(LinearConstraintD::new(coeffs, rel(*s), k));
                }
                if let Some((h, s)) = hi {
                    let (coeffs, k) = scaled(h, 1);
                    out.push(LinearConstraintD::new(coeffs, rel(*s), k));
                }
                out
            }
        }
    }
}

fn sorted(r: &ConvexRegion) -> Vec<LinearConstraintD> {
    let mut cs = r.constraints.clone();
    cs.sort();
    cs
}

/// Each linear form bounded in `cs`: the key (remaining constraints plus the
/// form) and the interval the form is confined to.
fn splits(cs: &[LinearConstraintD]) -> Vec<((Vec<LinearConstraintD>, Vec<BigInt>), Interval)> {
    let forms: Vec<Option<(Vec<BigInt>, End, End)>> = cs.iter().map(as_interval).collect();
    let mut out: Vec<((Vec<LinearConstraintD>, Vec<BigInt>), Interval)> = Vec::new();
    for f in &forms {
        let Some((a, _, _)) = f else { continue };
        if out.iter().any(|((_, b), _)| b == a) {
            continue;
        }
        let mut rest = Vec::new();
        let mut iv = Interval { lo: None, hi: None };
        for (j, g) in forms.iter().enumerate() {
            match g {
                Some((b, lo, hi)) if b == a => iv = iv.meet(lo.clone(), hi.clone()),
                _ => rest.push(cs[j].clone()),
            }
        }
        out.push(((rest, a.clone()), iv));
    }
    out
}

/// Merge regions pairwise until no rule applies. The union is unchanged.
pub(super) fn coalesce(regions: Vec<ConvexRegion>) -> Vec<ConvexRegion> {
    let mut regions = regions;
    loop {
        let n = regions.len();
        if n < 2 {
            return regions;
        }
        let dim = regions[0].dim;
        let sets: Vec<Vec<LinearConstraintD>> = regions.iter().map(sorted).collect();
        let mut full: HashMap<&[LinearConstraintD], usize> = HashMap::new();
        for (i, s) in sets.iter().enumerate() {
            full.entry(s.as_slice()).or_insert(i);
        }
        let mut alive = vec![true; n];
        let mut merged: Vec<ConvexRegion> = Vec::new();
        type Key = (Vec<LinearConstraintD>, Vec<BigInt>);
        let mut by_key: HashMap<Key, Vec<(usize, Interval)>> = HashMap::new();
        'region: for (j, s) in sets.iter().enumerate() {
            if full[s.as_slice()] < j {
                alive[j] = false;
                continue;
            }
            let parts = splits(s);
            // contained in a region that leaves one of our forms unbounded
            for ((rest, _), _) in &parts {
                if let Some(&k) = full.get(rest.as_slice()) {
                    if alive[k] && k != j {
                        alive[j] = false;
                        continue 'region;
                    }
                }
            }
            for (key, iv) in parts {
                let entry = by_key.entry(key.clone()).or_default();
                for (k, other) in entry.iter() {
                    if !alive[*k] {
                        continue;
                    }
                    if iv.within(other) {
                        alive[j] = false;
                        continue 'region;
                    }
                    if let Some(u) = iv.join(other) {
                        let mut cs = key.0.clone();
                        cs.extend(u.constraints(&key.1));
                        alive[*k] = false;
                        alive[j] = false;
                        if let Some(r) = ConvexRegion::build(dim, cs) {
                            merged.push(r);
                        }
                        continue 'region;
                    }
                }
                entry.push((j, iv));
            }
        }
        if merged.is_empty() && alive.iter().all(|a| *a) {
            return regions;
        }
        let mut next: Vec<ConvexRegion> =
            regions.into_iter().zip(alive).filter(|(_, a)| *a).map(|(r, _)| r).collect();
        for r in merged {
            if !next.contains(&r) {
                next.push(r);
            }
        }
        regions = next;
    }
}
