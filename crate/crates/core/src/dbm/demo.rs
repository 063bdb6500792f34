//! The two-clock zone family with a regular pattern along `x`.
//!
//! For `0 <= i <= M` the zone is the closed segment `x - y = i`,
//! `0 <= y <= 1`; past `M` the abstraction keeps the whole strip
//! `x - y >= M`, `0 <= y <= 1`. Clocks are numbered `0` (fictive), `x`, `y`.

use super::{Bound, CpDbmPlus, Dbm};
use crate::decimal::{DRel, DecimalSet, LinearConstraintD};
use crate::error::{Error, Result};
use crate::frontend::{parse, Formula};
use crate::idf::IdfSet;
use crate::presburger::{IntegerSet, LinearConstraintZ, ZRel};

/// The three representations of the same set of clock valuations.
#[derive(Debug, Clone)]
pub struct TimedDemo {
    pub max_const: i64,
    pub cpdbm: CpDbmPlus,
    pub shapes: IdfSet,
    pub formula: Formula,
}

fn check(m: i64) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("maximal constant must be at least 1, got {m}")));
    }
    Ok(())
}

/// Parameter constraints: the matrices
/// `[[0,-i,0],[i+1,0,i],[1,-i,0]]` for `0 <= i <= M`, and the abstraction
/// `[[0,0,0],[K,0,K],[1,-M,0]]` for any `K >= M`, which stands for the
/// unbounded entries of the last zone.
fn phi_text(m: i64) -> String {
    format!(
        "(exists i:int. 0 <= i and i <= {m} and c_0_0 = 0 and c_0_1 = -i and c_0_2 = 0 \
         and c_1_0 = i + 1 and c_1_1 = 0 and c_1_2 = i \
         and c_2_0 = 1 and c_2_1 = -i and c_2_2 = 0) \
         or (exists k:int. k >= {m} and c_0_0 = 0 and c_0_1 = 0 and c_0_2 = 0 \
         and c_1_0 = k and c_1_1 = 0 and c_1_2 = k \
         and c_2_0 = 1 and c_2_1 = -{m} and c_2_2 = 0)"
    )
}

/// The concrete zones: one per `i <= M`, then the strip with `+∞` entries.
pub fn timed_demo_dbms(m: i64) -> Vec<Dbm> {
    let mk = |rows: [[Bound; 3]; 3]| {
        Dbm::from_bounds(2, rows.into_iter().map(|r| r.to_vec()).collect()).expect("3x3")
    };
    let mut out: Vec<Dbm> = (0..=m)
        .map(|i| {
            mk([
                [Bound::le(0), Bound::le(-i), Bound::le(0)],
                [Bound::le(i + 1), Bound::le(0), Bound::le(i)],
                [Bound::le(1), Bound::le(-i), Bound::le(0)],
            ])
        })
        .collect();
    out.push(mk([
        [Bound::le(0), Bound::le(0), Bound::le(0)],
        [Bound::inf(), Bound::le(0), Bound::inf()],
        [Bound::le(1), Bound::le(-m), Bound::le(0)],
    ]));
    out
}

/// Free variables `x`, `y`.
pub fn timed_demo_formula(m: i64) -> Result<Formula> {
    check(m)?;
    parse(&format!(
        "0 <= y and y <= 1 and ((exists i:int. 0 <= i and i <= {} and x - y = i) or x - y >= {m})",
        m - 1
    ))
}

fn zset(cs: &[(&[i64], ZRel, i64)]) -> Result<IntegerSet> {
    let cs: Vec<LinearConstraintZ> = cs
        .iter()
        .map(|(a, r, k)| LinearConstraintZ::from_i64(a, *r, *k))
        .collect();
    IntegerSet::from_constraints(2, &cs)
}

fn dset(cs: &[(&[i64], DRel, i64)]) -> Result<DecimalSet> {
    let cs = cs
        .iter()
        .map(|(a, r, k)| LinearConstraintD::from_i64(a, *r, *k))
        .collect();
    DecimalSet::from_constraints(2, cs)
}

/// The direct decomposition: the line on `{0..M-1}×{0}`, the triangle
/// `d_x >= d_y` on `{M}×{0}` and the full square on `{M+1..}×{0}`, plus the
/// points with `y = 1` (integer part 1, decimal part 0) that close the
/// segments and the strip from above.
pub fn timed_demo_shapes(m: i64) -> Result<IdfSet> {
    check(m)?;
    use DRel::{Eq as DEq, Le as DLe, Lt as DLt};
    use ZRel::{Eq, Le};
    let line = dset(&[(&[1, -1], DEq, 0)])?;
    let triangle = dset(&[(&[-1, 1], DLe, 0)])?;
    let square = DecimalSet::full(2);
    let corner = dset(&[(&[1, 0], DEq, 0), (&[0, 1], DEq, 0)])?;
    let top_edge = dset(&[(&[0, 1], DEq, 0), (&[-1, 0], DLt, 0)])?;
    let pairs = vec![
        (zset(&[(&[-1, 0], Le, 0), (&[1, 0], Le, m - 1), (&[0, 1], Eq, 0)])?, line),
        (zset(&[(&[1, 0], Eq, m), (&[0, 1], Eq, 0)])?, triangle),
        (zset(&[(&[-1, 0], Le, -(m + 1)), (&[0, 1], Eq, 0)])?, square),
        (zset(&[(&[-1, 0], Le, -1), (&[0, 1], Eq, 1)])?, corner),
        (zset(&[(&[-1, 0], Le, -(m + 1)), (&[0, 1], Eq, 1)])?, top_edge),
    ];
    IdfSet::normalize(2, &pairs)
}

pub fn timed_demo(m: i64) -> Result<TimedDemo> {
    check(m)?;
    let phi = parse(&phi_text(m))?;
    let cpdbm = CpDbmPlus::from_formula(2, vec![vec![false; 3]; 3], vec![vec![false; 3]; 3], &phi)?;
    Ok(TimedDemo {
        max_const: m,
        cpdbm,
        shapes: timed_demo_shapes(m)?,
        formula: timed_demo_formula(m)?,
    })
}
