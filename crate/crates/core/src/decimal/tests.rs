use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;

fn c(coeffs: &[i64], rel: DRel, k: i64) -> LinearConstraintD {
    LinearConstraintD::from_i64(coeffs, rel, k)
}

fn set(dim: usize, cs: Vec<LinearConstraintD>) -> DecimalSet {
    DecimalSet::from_constraints(dim, cs).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Every point of `[0,1)^dim` whose coordinates are multiples of `1/den`.
fn grid(dim: usize, den: i64) -> Vec<Vec<BigRational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: Vec<BigRational>| {
                (0..den).map(move |k| {
                    let mut p = p.clone();
                    p.push(q(k, den));
                    p
                })
            })
            .collect();
    }
    out
}

fn has(s: &DecimalSet, p: &[BigRational]) -> bool {
    s.contains(p).unwrap()
}

#[test]
fn region_emptiness() {
    assert!(set(2, vec![c(&[1, -1], DRel::Lt, 0), c(&[-1, 1], DRel::Lt, 0)]).is_empty());
    let le = set(2, vec![c(&[1, -1], DRel::Le, 0)]);
    assert!(!le.is_empty());
    assert!(has(&le, &[q(0, 1), q(0, 1)]));
    let s = set(1, vec![c(&[2], DRel::Eq, 1), c(&[3], DRel::Le, 1)]);
    assert!(s.is_empty());
    assert!(grid(1, 6).iter().all(|p| !has(&s, p)));
    // a hidden contradiction needing a full elimination
    let s = set(
        3,
        vec![
            c(&[1, -1, 0], DRel::Lt, 0),
            c(&[0, 1, -1], DRel::Lt, 0),
            c(&[-1, 0, 1], DRel::Le, 0),
        ],
    );
    assert!(s.is_empty());
}

#[test]
fn boolean_examples() {
    assert!(DecimalSet::full(2).complement().is_empty());
    let le = set(2, vec![c(&[1, -1], DRel::Le, 0)]);
    let gt = set(2, vec![c(&[-1, 1], DRel::Lt, 0)]);
    assert!(le.union(&gt).unwrap().equals(&DecimalSet::full(2)).unwrap());
    assert!(le.union(&gt).unwrap().is_full());

    let a = set(2, vec![c(&[1, 1], DRel::Lt, 1)]);
    let b = set(2, vec![c(&[2, 0], DRel::Lt, 1)]);
    let expect = set(2, vec![c(&[-2, 0], DRel::Le, -1), c(&[1, 1], DRel::Lt, 1)]);
    let diff = a.difference(&b).unwrap();
    assert!(diff.equals(&expect).unwrap());
    for p in grid(2, 8) {
        assert_eq!(has(&diff, &p), has(&expect, &p));
    }
}

#[test]
fn query_examples() {
    let le = set(2, vec![c(&[1, -1], DRel::Le, 0)]);
    assert!(has(&le, &[q(1, 3), q(1, 2)]));
    let ge = set(2, vec![c(&[-1, 1], DRel::Le, 0)]);
    assert!(le.union(&ge).unwrap().equals(&DecimalSet::full(2)).unwrap());

    let a = set(2, vec![c(&[1, 1], DRel::Eq, 1), c(&[2, 0], DRel::Lt, 1)]);
    let b = set(2, vec![c(&[1, -1], DRel::Lt, 0)]);
    assert!(a.is_subset(&b).unwrap());
    assert!(a.difference(&b).unwrap().is_empty());
    for p in grid(2, 8) {
        assert!(!has(&a, &p) || has(&b, &p));
    }
    assert!(!b.is_subset(&a).unwrap());

    assert!(matches!(
        le.contains(&[q(1, 1), q(0, 1)]),
        Err(Error::PointOutsideCube(_))
    ));
    assert!(matches!(le.contains(&[q(0, 1)]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn projection_examples() {
    let eq = set(2, vec![c(&[1, -1], DRel::Eq, 0)]);
    assert!(eq.project(0).unwrap().equals(&DecimalSet::full(1)).unwrap());

    let a = set(2, vec![c(&[2, -1], DRel::Le, 0)]);
    let p = a.project(1).unwrap();
    let expect = set(1, vec![c(&[2], DRel::Lt, 1)]);
    assert!(p.equals(&expect).unwrap());
    for x in grid(1, 8) {
        assert_eq!(has(&p, &x), x[0] < q(1, 2));
    }
    assert!(matches!(a.project(2), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn reorder_and_product() {
    let a = set(3, vec![c(&[1, -2, 0], DRel::Lt, 0), c(&[0, 1, 1], DRel::Le, 1)]);
    let perm = [2, 0, 1];
    let back = a
        .reorder(&perm)
        .unwrap()
        .reorder(&crate::presburger::invert_permutation(&perm))
        .unwrap();
    assert!(back.equals(&a).unwrap());
    let r = a.reorder(&perm).unwrap();
    for p in grid(3, 4) {
        let moved: Vec<BigRational> = perm.iter().map(|&i| p[i].clone()).collect();
        assert_eq!(has(&r, &moved), has(&a, &p));
    }
    assert!(a.reorder(&[0, 0, 1]).is_err());

    let x = set(1, vec![c(&[2], DRel::Lt, 1)]);
    let y = set(1, vec![c(&[-4], DRel::Le, -1)]);
    let xy = x.product(&y);
    assert_eq!(xy.dim(), 2);
    for p in grid(2, 8) {
        assert_eq!(has(&xy, &p), has(&x, &p[..1]) && has(&y, &p[1..]));
    }
    assert!(DecimalSet::full(2).product(&DecimalSet::full(1)).is_full());
    assert!(x.product(&DecimalSet::empty(1)).is_empty());
}

#[test]
fn sample_points_are_members() {
    let s = set(
        3,
        vec![
            c(&[3, -1, 0], DRel::Lt, 0),
            c(&[0, 2, -3], DRel::Le, -1),
            c(&[1, 1, 1], DRel::Eq, 1),
        ],
    );
    let p = s.sample().expect("nonempty");
    assert!(has(&s, &p));
    assert!(DecimalSet::empty(2).sample().is_none());
}

#[test]
fn dimension_zero() {
    let t = DecimalSet::full(0);
    assert!(!t.is_empty());
    assert!(t.complement().is_empty());
    assert!(has(&t, &[]));
    assert!(set(0, vec![c(&[], DRel::Le, -1)]).is_empty());
}

#[test]
fn coalescing_merges_adjacent_slabs() {
    // 4d ∈ [0,1), [1,2), [2,3] and 4d = 3 ∪ 4d > 3 together fill the line
    let slab = |lo: i64, hi: i64| set(1, vec![c(&[-4], DRel::Le, -lo), c(&[4], DRel::Lt, hi)]);
    let pieces = slab(0, 1)
        .union(&slab(1, 2))
        .unwrap()
        .union(&set(1, vec![c(&[-2], DRel::Le, -1), c(&[4], DRel::Le, 3)]))
        .unwrap()
        .union(&set(1, vec![c(&[-4], DRel::Lt, -3)]))
        .unwrap();
    assert_eq!(pieces.regions().len(), 4);
    let merged = pieces.coalesced();
    assert_eq!(merged.regions().len(), 1);
    assert!(merged.is_full());
    // a gap at 1/2 stays
    let split = set(1, vec![c(&[2], DRel::Lt, 1)])
        .union(&set(1, vec![c(&[-2], DRel::Lt, -1)]))
        .unwrap()
        .coalesced();
    assert_eq!(split.regions().len(), 2);
    assert!(!has(&split, &[q(1, 2)]));
    // a region inside another disappears
    let nested = set(2, vec![c(&[1, 1], DRel::Le, 1)])
        .union(&set(2, vec![c(&[1, 1], DRel::Le, 1), c(&[1, -1], DRel::Eq, 0)]))
        .unwrap()
        .coalesced();
    assert_eq!(nested.regions().len(), 1);
}

fn arb_constraint(dim: usize) -> impl Strategy<Value = LinearConstraintD> {
    (
        prop::collection::vec(-3i64..=3, dim),
        prop_oneof![3 => Just(DRel::Le), 3 => Just(DRel::Lt), 1 => Just(DRel::Eq)],
        -4i64..=4,
    )
        .prop_map(|(a, rel, k)| LinearConstraintD::from_i64(&a, rel, k))
}

fn arb_set(dim: usize) -> impl Strategy<Value = DecimalSet> {
    prop::collection::vec(prop::collection::vec(arb_constraint(dim), 1..=4), 1..=2).prop_map(
        move |regions| {
            regions
                .into_iter()
                .map(|cs| set(dim, cs))
                .fold(DecimalSet::empty(dim), |acc, s| acc.union(&s).unwrap())
        },
    )
}

fn arb_pair() -> impl Strategy<Value = (DecimalSet, DecimalSet)> {
    (1usize..=3).prop_flat_map(|n| (arb_set(n), arb_set(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boolean_ops_pointwise((a, b) in arb_pair()) {
        let n = a.dim();
        let inter = a.intersect(&b).unwrap();
        let uni = a.union(&b).unwrap();
        let diff = a.difference(&b).unwrap();
        let comp = a.complement();
        for p in grid(n, 8) {
            let (x, y) = (has(&a, &p), has(&b, &p));
            prop_assert_eq!(has(&inter, &p), x && y);
            prop_assert_eq!(has(&uni, &p), x || y);
            prop_assert_eq!(has(&diff, &p), x && !y);
            prop_assert_eq!(has(&comp, &p), !x);
        }
        prop_assert!(comp.complement().equals(&a).unwrap());
        prop_assert!(a.intersect(&comp).unwrap().is_empty());
        prop_assert_eq!(a.is_subset(&b).unwrap(), diff.is_empty());
    }

    #[test]
    fn coalescing_preserves_points((a, b) in arb_pair()) {
        let n = a.dim();
        // differences and complements produce many mergeable fragments
        let raw = a.difference(&b).unwrap().union(&b.complement()).unwrap().union(&a).unwrap();
        let merged = raw.clone().coalesced();
        prop_assert!(merged.regions().len() <= raw.regions().len());
        for p in grid(n, 8) {
            prop_assert_eq!(has(&merged, &p), has(&raw, &p));
        }
        prop_assert!(merged.equals(&raw).unwrap());
    }

    #[test]
    fn projection_matches_witness_grid(a in (2usize..=3).prop_flat_map(arb_set), i in 0usize..3) {
        let n = a.dim();
        let i = i % n;
        let p = a.project(i).unwrap();
        // Bounds on the dropped coordinate have denominators dividing 48
        // once the others sit on the 1/8 grid; 1/96 steps fall strictly
        // between any two of them.
        let grid_n = if n == 3 { 4 } else { 8 };
        for x in grid(n - 1, grid_n) {
            let extend = |w: i64| {
                let mut full = x.clone();
                full.insert(i, q(w, 96));
                full
            };
            let by_grid = (0..96).any(|w| has(&a, &extend(w)));
            let mut fixing: Vec<LinearConstraintD> = Vec::new();
            for (j, v) in x.iter().enumerate() {
                let jj = if j < i { j } else { j + 1 };
                let mut coeffs = vec![BigInt::from(0); n];
                coeffs[jj] = v.denom().clone();
                fixing.push(LinearConstraintD::new(coeffs, DRel::Eq, v.numer().clone()));
            }
            let by_fm = !a.intersect(&set(n, fixing)).unwrap().is_empty();
            prop_assert_eq!(has(&p, &x), by_grid);
            prop_assert_eq!(by_grid, by_fm);
        }
    }
}
