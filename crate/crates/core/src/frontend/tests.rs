use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::decimal::{DRel, DecimalSet, LinearConstraintD};
use crate::error::Error;
use crate::idf::IdfSet;
use crate::presburger::{IntegerSet, LinearConstraintZ, ZRel};

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn zset(coeffs: &[i64], rel: ZRel, k: i64) -> IntegerSet {
    IntegerSet::from_constraint(&LinearConstraintZ::from_i64(coeffs, rel, k)).unwrap()
}

fn dset(coeffs: &[i64], rel: DRel, k: i64) -> DecimalSet {
    DecimalSet::from_constraints(coeffs.len(), vec![LinearConstraintD::from_i64(coeffs, rel, k)]).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn compiled(text: &str) -> IdfSet {
    let f = parse(text).unwrap();
    compile(&f, &free_vars(&f)).unwrap()
}

fn decided(text: &str) -> bool {
    decide(&parse(text).unwrap()).unwrap()
}

#[test]
fn parse_examples() {
    let f = parse("exists z:int. z + z = 1").unwrap();
    assert!(f.free_names().is_empty());
    let f = parse("x <= y").unwrap();
    assert_eq!(free_vars(&f).names(), vec!["x", "y"]);
    assert!(matches!(f, Formula::Atom(_)));

    let Formula::Atom(a) = parse("x < (1/2)").unwrap() else { panic!("atom expected") };
    assert_eq!(a.rel, Rel::Lt);
    assert_eq!(a.coeffs["x"], BigInt::from(2));
    assert_eq!(a.constant, BigInt::from(1));

    let Formula::Atom(a) = parse("1/3*x + 2 >= y - 1/2 # comment").unwrap() else { panic!() };
    // 6y - 2x <= 15
    assert_eq!(a.rel, Rel::Le);
    assert_eq!(a.coeffs["x"], BigInt::from(-2));
    assert_eq!(a.coeffs["y"], BigInt::from(6));
    assert_eq!(a.constant, BigInt::from(15));

    assert!(matches!(parse("x != 1").unwrap(), Formula::Or(..)));
    assert!(matches!(parse("0 <= x < 1").unwrap(), Formula::And(..)));
    assert!(matches!(parse("(x <= 1) and (1/2) <= x").unwrap(), Formula::And(..)));
    assert!(matches!(parse("a <= 1 -> b <= 1 -> c <= 1").unwrap(), Formula::Implies(_, r) if matches!(*r, Formula::Implies(..))));
}

#[test]
fn parse_errors_carry_positions() {
    match parse("x <= \n  y +") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 6)),
        other => panic!("unexpected {other:?}"),
    }
    match parse("x ? y") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 3)),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        parse("exists x:int. exists x:real. x = 0"),
        Err(Error::SortClash(_))
    ));
    assert!(matches!(parse("exists x:int. exists x:int. x = 0"), Err(Error::Parse { .. })));
    assert!(matches!(parse("x < 1/0"), Err(Error::Parse { .. })));
    assert!(matches!(parse("x <= y)"), Err(Error::Parse { .. })));
}

#[test]
fn display_round_trips() {
    for text in [
        "forall x:real. exists y:real. x + y = 0 and (exists z:int. y = z) -> (exists z:int. x = z)",
        "not (x <= 1 or y < -3) <-> 2*x - 3*y = 7",
        "(a <= 1 -> b <= 1) -> c <= 1",
    ] {
        let f = parse(text).unwrap();
        assert_eq!(parse(&f.to_string()).unwrap(), f, "{f}");
    }
}

#[test]
fn decide_examples() {
    assert!(decided("forall x:real. exists z:int. z <= x and x < z + 1"));
    assert!(!decided("exists x:int. x + x = 1"));
    assert!(decided("exists x:real. x + x = 1"));
    assert!(decided("forall x:real. x <= x"));
    assert!(!decided("exists x:real. x < x"));
    assert!(decided(
        "forall x:real. exists y:real. x + y = 0 and (exists z:int. y = z) implies (exists z:int. x = z)"
            .replace("implies", "->")
            .as_str()
    ));
    assert!(decided("forall x:real. (exists z:int. x = z) <-> (exists z:int. -x = z)"));
    assert!(!decided("forall x:real. exists z:int. x = z"));
    assert!(decided("forall x:int. forall y:int. 2*x + 1 != 2*y"));
    assert!(decided("exists x:real. 0 < x < 1/1000"));
    assert!(matches!(decide(&parse("x <= 1").unwrap()), Err(Error::NotClosed(_))));
}

#[test]
fn leq_gives_two_cells() {
    let f = compiled("x1 <= x2");
    assert_eq!(f.cells().len(), 2);
    let le = f.cells().iter().find(|c| c.zpart == zset(&[1, -1], ZRel::Le, 0)).unwrap();
    assert!(le.dpart.equals(&dset(&[1, -1], DRel::Le, 0)).unwrap());
    let lt = f.cells().iter().find(|c| c.zpart == zset(&[1, -1], ZRel::Le, -1)).unwrap();
    assert!(lt.dpart.equals(&dset(&[-1, 1], DRel::Lt, 0)).unwrap());
}

#[test]
fn sum_gives_two_carries() {
    let f = compiled("x1 + x2 = x3");
    assert_eq!(f.cells().len(), 3);
    for carry in [0, 1] {
        let z = zset(&[1, 1, -1], ZRel::Eq, -carry);
        let cell = f.cells().iter().find(|c| c.zpart == z).expect("carry cell");
        assert!(cell.dpart.equals(&dset(&[1, 1, -1], DRel::Eq, carry)).unwrap());
    }
    assert!(f.cells()[2].zpart.is_empty());
}

#[test]
fn single_real_equality() {
    let (lo, hi) = carry_range(&big(&[1]), &[Sort::Real]);
    let pairs = carry_pairs(&big(&[1]), Rel::Eq, &BigInt::from(0), &[Sort::Real], &lo, &hi).unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0].0, zset(&[1], ZRel::Eq, 0));
    assert!(pairs[0].1.equals(&dset(&[1], DRel::Eq, 0)).unwrap());
}

#[test]
fn integer_sorts() {
    let ctx = VarContext::new(vec![("n".into(), Sort::Int), ("x".into(), Sort::Real)]);
    let f = compile(&parse("n <= x").unwrap(), &ctx).unwrap();
    assert!(f.contains(&[q(2, 1), q(5, 2)]).unwrap());
    assert!(!f.contains(&[q(1, 2), q(5, 2)]).unwrap());
    let g = compile(&parse("not n <= x").unwrap(), &ctx).unwrap();
    assert!(g.contains(&[q(3, 1), q(5, 2)]).unwrap());
    assert!(!g.contains(&[q(5, 2), q(1, 1)]).unwrap());
    let t = compile(&Formula::Bool(true), &ctx).unwrap();
    assert!(f.union(&g).unwrap().equals(&t).unwrap());
}

#[test]
fn unbound_and_capacity_errors() {
    let f = parse("x <= y").unwrap();
    assert!(matches!(
        compile(&f, &VarContext::reals(&["x"])),
        Err(Error::UnboundVariable(_))
    ));
    let names: Vec<String> = (0..13).map(|i| format!("v{i}")).collect();
    let text = names.join(" + ") + " <= 0";
    let f = parse(&text).unwrap();
    assert!(matches!(compile(&f, &free_vars(&f)), Err(Error::Capacity { .. })));
}

/// Random quantifier-free formula text over `x`, `y`, `z`.
fn arb_qf() -> impl Strategy<Value = Formula> {
    let atom = (prop::collection::vec(-3i64..=3, 3), 0u8..6, -4i64..=4).prop_map(|(a, r, k)| {
        let rel = ["<=", "<", "=", ">=", ">", "!="][r as usize];
        let text = format!("({})*x + ({})*y + ({})*z {rel} {k}", a[0], a[1], a[2]);
        parse(&text).unwrap()
    });
    atom.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

fn point(v: &[BigRational]) -> HashMap<String, BigRational> {
    ["x", "y", "z"].iter().map(|s| s.to_string()).zip(v.iter().cloned()).collect()
}

/// De Morgan and atom flips; preserves meaning.
fn rewrite(f: &Formula) -> Formula {
    match f {
        Formula::Atom(a) => {
            // a·x ≤ c  ~>  not (c < a·x)
            let neg = Atom::new(
                a.coeffs.iter().map(|(x, v)| (x.clone(), -v)),
                a.rel,
                -a.constant.clone(),
            );
            match a.rel {
                Rel::Le => Formula::not(Formula::Atom(Atom::new(neg.coeffs, Rel::Lt, neg.constant))),
                Rel::Lt => Formula::not(Formula::Atom(Atom::new(neg.coeffs, Rel::Le, neg.constant))),
                Rel::Eq => Formula::Atom(neg),
            }
        }
        Formula::And(a, b) => Formula::not(Formula::or(Formula::not(rewrite(b)), Formula::not(rewrite(a)))),
        Formula::Or(a, b) => Formula::or(rewrite(b), rewrite(a)),
        Formula::Not(a) => Formula::not(Formula::not(Formula::not(rewrite(a)))),
        other => other.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn quantifier_free_soundness(f in arb_qf()) {
        let ctx = VarContext::reals(&["x", "y", "z"]);
        let g = compile(&f, &ctx).unwrap();
        prop_assert!(g.check_partition().is_ok());
        let g2 = compile(&rewrite(&f), &ctx).unwrap();
        prop_assert!(g.equals(&g2).unwrap());
        for i in -2i64..=2 {
            for j in 0..8 {
                for k in 0..8 {
                    let p = [q(4 * i + j % 4, 4), q(j - 4, 2), q(k - 2 * i, 4)];
                    prop_assert_eq!(g.contains(&p).unwrap(), f.eval(&point(&p)).unwrap());
                }
            }
        }
    }

    #[test]
    fn carry_decomposition_matches_brute_force(
        a in prop::collection::vec(-3i64..=3, 1..=3),
        r in 0u8..3,
        c in -4i64..=4,
    ) {
        let rel = [Rel::Le, Rel::Lt, Rel::Eq][r as usize];
        let coeffs = big(&a);
        let sorts = vec![Sort::Real; a.len()];
        let f = compile_atom(&coeffs, rel, &BigInt::from(c)).unwrap();
        let (lo, hi) = carry_range(&coeffs, &sorts);
        let wide = carry_pairs(&coeffs, rel, &BigInt::from(c), &sorts, &(lo - 3), &(hi + 3)).unwrap();
        let g = IdfSet::normalize(a.len(), &wide).unwrap();
        prop_assert!(f.equals(&g).unwrap());
    }
}
