use super::*;
use proptest::prelude::*;

fn c(coeffs: &[i64], rel: ZRel, constant: i64) -> LinearConstraintZ {
    LinearConstraintZ::from_i64(coeffs, rel, constant)
}

fn set(coeffs: &[i64], rel: ZRel, constant: i64) -> IntegerSet {
    IntegerSet::from_constraint(&c(coeffs, rel, constant)).unwrap()
}

fn has(s: &IntegerSet, z: &[i64]) -> bool {
    s.contains_i64(z).unwrap()
}

fn points(dim: usize, bound: i64) -> Vec<Vec<i64>> {
    IntegerSet::universe(dim).unwrap().enumerate(bound)
}

fn eval(coeffs: &[i64], rel: ZRel, constant: i64, z: &[i64]) -> bool {
    let lhs: i64 = coeffs.iter().zip(z).map(|(a, b)| a * b).sum();
    match rel {
        ZRel::Le => lhs <= constant,
        ZRel::Eq => lhs == constant,
    }
}

#[test]
fn constraint_examples() {
    let le = set(&[1, -1], ZRel::Le, 0);
    assert!(has(&le, &[2, 3]));
    assert!(!has(&le, &[3, 2]));

    let sum = set(&[1, 1, -1], ZRel::Eq, 0);
    assert!(has(&sum, &[1, 2, 3]));
    assert!(!has(&sum, &[1, 2, 4]));

    let falsum = set(&[], ZRel::Le, -1);
    assert!(falsum.is_empty());
    assert_eq!(falsum, IntegerSet::empty(0).unwrap());
    let verum = set(&[], ZRel::Le, 0);
    assert_eq!(verum, IntegerSet::universe(0).unwrap());
    assert!(verum.contains(&[]).unwrap());
}

#[test]
fn boolean_examples() {
    let empty = IntegerSet::empty(1).unwrap();
    assert_eq!(empty.complement(), IntegerSet::universe(1).unwrap());

    let ge0 = set(&[-1], ZRel::Le, 0);
    let le0 = set(&[1], ZRel::Le, 0);
    let zero = set(&[1], ZRel::Eq, 0);
    assert_eq!(ge0.intersect(&le0).unwrap(), zero);

    let le1 = set(&[1], ZRel::Le, 0);
    let ge1 = set(&[-1], ZRel::Le, -1);
    assert!(le1.union(&ge1).unwrap().is_universe());
}

#[test]
fn difference_matches_enumeration() {
    let le = set(&[1, -1], ZRel::Le, 0);
    let eq = set(&[1, -1], ZRel::Eq, 0);
    let lt = set(&[1, -1], ZRel::Le, -1);
    let diff = le.difference(&eq).unwrap();
    assert_eq!(diff, lt);
    for z in points(2, 8) {
        assert_eq!(has(&diff, &z), z[0] < z[1], "{z:?}");
    }
}

#[test]
fn product_examples() {
    let zero = set(&[1], ZRel::Eq, 0);
    let all = IntegerSet::universe(1).unwrap();
    let p = zero.product(&all).unwrap();
    assert_eq!(p, set(&[1, 0], ZRel::Eq, 0));

    let empty = IntegerSet::empty(1).unwrap();
    assert!(empty.product(&zero).unwrap().is_empty());

    let le2 = set(&[1], ZRel::Le, 2);
    let ge5 = set(&[-1], ZRel::Le, -5);
    let p = le2.product(&ge5).unwrap();
    assert!(has(&p, &[2, 5]));
    assert!(!has(&p, &[3, 5]));
    assert!(!has(&p, &[2, 4]));
}

#[test]
fn projection_examples() {
    let eq = set(&[1, -1], ZRel::Eq, 0);
    assert!(eq.project(0).unwrap().is_universe());

    // 2 z1 = z2, eliminate z1: the even integers.
    let double = set(&[2, -1], ZRel::Eq, 0);
    let even = double.project(0).unwrap();
    assert_eq!(even.dim(), 1);
    for z in -8..=8i64 {
        assert_eq!(has(&even, &[z]), z % 2 == 0, "{z}");
    }

    let empty = IntegerSet::empty(2).unwrap();
    assert!(empty.project(0).unwrap().is_empty());

    assert!(matches!(eq.project(2), Err(Error::IndexOutOfRange { index: 2, dim: 2 })));
}

#[test]
fn projection_needs_longer_witness() {
    // z1 = 64 z0 + 3 with z0 ∈ [5, 6]: the witness z0 is short but z1 long,
    // and conversely 8 z1 = z0 makes the dropped component the long one.
    let s = IntegerSet::from_constraints(
        2,
        &[c(&[1, 0], ZRel::Le, 6), c(&[-1, 0], ZRel::Le, -5), c(&[-64, 1], ZRel::Eq, 3)],
    )
    .unwrap();
    let p = s.project(0).unwrap();
    for z in -400..=400i64 {
        assert_eq!(has(&p, &[z]), z == 323 || z == 387, "{z}");
    }
    let t = set(&[1, -8], ZRel::Eq, 0);
    let q = t.project(0).unwrap();
    for z in -20..=20i64 {
        assert!(has(&q, &[z]));
    }
    let r = t.project(1).unwrap();
    for z in -40..=40i64 {
        assert_eq!(has(&r, &[z]), z % 8 == 0, "{z}");
    }
}

#[test]
fn reorder_examples() {
    let le = set(&[1, -1], ZRel::Le, 0);
    assert_eq!(le.reorder(&[0, 1]).unwrap(), le);
    assert_eq!(le.reorder(&[1, 0]).unwrap(), set(&[-1, 1], ZRel::Le, 0));

    let s = set(&[1, 2, -3], ZRel::Le, 1);
    let perm = [2, 0, 1];
    let back = s.reorder(&perm).unwrap().reorder(&invert_permutation(&perm)).unwrap();
    assert_eq!(back, s);
    assert!(matches!(s.reorder(&[0, 0, 1]), Err(Error::InvalidPermutation(_))));
}

#[test]
fn queries() {
    assert!(set(&[0], ZRel::Le, -1).is_empty());
    let le0 = set(&[1], ZRel::Le, 0);
    let ge1 = set(&[-1], ZRel::Le, -1);
    assert!(le0.union(&ge1).unwrap().equals(&IntegerSet::universe(1).unwrap()).unwrap());
    let eq = set(&[1, -1], ZRel::Eq, 0);
    assert_eq!(eq.enumerate(1), vec![vec![-1, -1], vec![0, 0], vec![1, 1]]);
    assert!(eq.equals(&le0).is_err());
    assert!(le0.contains_i64(&[0, 0]).is_err());
}

#[test]
fn big_constants_and_members() {
    let big = BigInt::from(10).pow(30);
    let s = IntegerSet::from_constraint(&LinearConstraintZ::new(
        vec![BigInt::from(1)],
        ZRel::Eq,
        big.clone(),
    ))
    .unwrap();
    assert!(s.contains(&[big.clone()]).unwrap());
    assert!(!s.contains(&[big.clone() + 1]).unwrap());
    assert_eq!(s.witness().unwrap(), vec![big]);
    let neg = set(&[1], ZRel::Eq, -1000);
    assert_eq!(neg.witness().unwrap(), vec![BigInt::from(-1000)]);
}

#[test]
fn capacity_limit() {
    let too_wide = DEFAULT_VAR_LIMIT + 1;
    assert!(matches!(IntegerSet::universe(too_wide), Err(Error::Capacity { .. })));
    let a = IntegerSet::universe(DEFAULT_VAR_LIMIT).unwrap();
    let b = IntegerSet::universe(1).unwrap();
    assert!(matches!(a.product(&b), Err(Error::Capacity { .. })));
}

#[test]
fn construction_state_count_is_bounded() {
    let con = c(&[3, -2, 1], ZRel::Le, 7);
    let bound = build::residual_bound(&con);
    let s = IntegerSet::from_constraint(&con).unwrap();
    // two flags per residual, plus the initial and dead states
    let limit = 2 * (2 * bound + 1) + 2;
    assert!(BigInt::from(s.num_states()) <= limit);
}

#[test]
fn encode_decode() {
    for v in -70..=70i64 {
        let z = vec![BigInt::from(v), BigInt::from(-v / 3)];
        let w = IntegerSet::encode(&z);
        assert_eq!(IntegerSet::decode(2, &w), z);
    }
}

// ---- random families -------------------------------------------------------

fn arb_constraint(dim: usize) -> impl Strategy<Value = (Vec<i64>, ZRel, i64)> {
    (
        prop::collection::vec(-3i64..=3, dim),
        prop_oneof![Just(ZRel::Le), Just(ZRel::Eq)],
        -4i64..=4,
    )
}

fn words_of(dim: usize, max_len: usize) -> Vec<Vec<usize>> {
    let k = 1usize << dim;
    let mut all = vec![];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .into_iter()
            .flat_map(|w| (0..k).map(move |a| {
                let mut w = w.clone();
                w.push(a);
                w
            }))
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constraint_matches_arithmetic((dim, (coeffs, rel, k)) in (1usize..=3).prop_flat_map(|d| (Just(d), arb_constraint(d)))) {
        let s = set(&coeffs, rel, k);
        for z in points(dim, 6) {
            prop_assert_eq!(has(&s, &z), eval(&coeffs, rel, k, &z));
        }
    }

    #[test]
    fn boolean_ops_match_pointwise(a in arb_constraint(2), b in arb_constraint(2)) {
        let sa = set(&a.0, a.1, a.2);
        let sb = set(&b.0, b.1, b.2);
        let inter = sa.intersect(&sb).unwrap();
        let uni = sa.union(&sb).unwrap();
        let diff = sa.difference(&sb).unwrap();
        let comp = sa.complement();
        for z in points(2, 8) {
            let (x, y) = (eval(&a.0, a.1, a.2, &z), eval(&b.0, b.1, b.2, &z));
            prop_assert_eq!(has(&inter, &z), x && y);
            prop_assert_eq!(has(&uni, &z), x || y);
            prop_assert_eq!(has(&diff, &z), x && !y);
            prop_assert_eq!(has(&comp, &z), !x);
        }
        // De Morgan, double complement, absorption
        prop_assert_eq!(sa.union(&sb).unwrap().complement(), comp.intersect(&sb.complement()).unwrap());
        prop_assert_eq!(comp.complement(), sa.clone());
        prop_assert_eq!(sa.union(&inter).unwrap(), sa.clone());
    }

    #[test]
    fn saturation_holds(a in arb_constraint(2), b in arb_constraint(2)) {
        let s = set(&a.0, a.1, a.2).difference(&set(&b.0, b.1, b.2)).unwrap();
        let p = s.project(1).unwrap();
        for (aut, dim) in [(&s, 2usize), (&p, 1usize)] {
            for w in words_of(dim, 4) {
                let mut ext = w.clone();
                ext.push(*w.last().unwrap());
                prop_assert_eq!(aut.accepts_word(&w), aut.accepts_word(&ext));
            }
        }
    }

    #[test]
    fn projection_matches_bounded_witness(a in arb_constraint(3), b in arb_constraint(3), i in 0usize..3) {
        let s = set(&a.0, a.1, a.2).intersect(&set(&b.0, b.1, b.2)).unwrap();
        let p = s.project(i).unwrap();
        // Any witness can be moved to within |c| + Σ|a_j z_j| + 1 of zero:
        // 4 + 3 * 2 * 4 + 1 = 29 for this family.
        for z in points(2, 4) {
            let found = (-29..=29).any(|w| {
                let mut full = z.clone();
                full.insert(i, w);
                has(&s, &full)
            });
            prop_assert_eq!(has(&p, &z), found, "{:?}", z);
        }
    }

    #[test]
    fn canonical_idempotent(a in arb_constraint(2), perm in Just(vec![1usize, 0])) {
        let s = set(&a.0, a.1, a.2).reorder(&perm).unwrap();
        prop_assert!(s.is_canonical());
        prop_assert_eq!(s.canonicalize().canonicalize(), s.canonicalize());
        let raw = IntegerSet::raw(s.dim, s.initial, s.accepting.clone(), s.trans.clone());
        prop_assert_eq!(raw.canonicalize(), s);
    }

    #[test]
    fn on_the_fly_intersection_agrees(a in arb_constraint(3), b in arb_constraint(3), c in arb_constraint(3)) {
        let s = set(&a.0, a.1, a.2).union(&set(&b.0, b.1, b.2)).unwrap();
        let cs = [c_of(&c), c_of(&a)];
        let built = IntegerSet::from_constraints(3, &cs).unwrap();
        prop_assert_eq!(s.intersects_constraints(&cs).unwrap(), s.intersects(&built).unwrap());
        prop_assert_eq!(s.intersects_constraints(&cs).unwrap(), !s.intersect(&built).unwrap().is_empty());
    }
}

fn c_of(t: &(Vec<i64>, ZRel, i64)) -> LinearConstraintZ {
    c(&t.0, t.1, t.2)
}
