use ampgen_symbolic::{Expr, Limit, RatFn, Sym, NSYMS};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const VARS: [Sym; 4] = [Sym::Gm, Sym::Re, Sym::Rc, Sym::Ro];

fn leaf() -> impl Strategy<Value = RatFn> {
    prop_oneof![
        (-3i64..=3).prop_map(RatFn::int),
        (0usize..VARS.len()).prop_map(|i| RatFn::var(VARS[i])),
    ]
}

fn ratfn() -> impl Strategy<Value = RatFn> {
    leaf().prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner).prop_map(|(a, b)| b.recip().map(|r| a * r).unwrap_or(RatFn::one())),
        ]
    })
}

fn point(vals: [i64; 4]) -> [BigRational; NSYMS] {
    let mut p: [BigRational; NSYMS] = std::array::from_fn(|_| BigRational::from_integer(BigInt::from(1)));
    for (s, v) in VARS.iter().zip(vals) {
        p[s.index()] = BigRational::new(BigInt::from(v), BigInt::from(7));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws(a in ratfn(), b in ratfn(), c in ratfn()) {
        prop_assert!((&(&a + &b) - &b).equals(&a));
        prop_assert!((&a * &(&b + &c)).equals(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a * &b).equals(&(&b * &a)));
        if let Ok(r) = b.recip() {
            prop_assert!((&(&a * &b) * &r).equals(&a));
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in ratfn(), b in ratfn(), vals in prop::array::uniform4(1i64..50)) {
        let p = point(vals);
        if let (Some(x), Some(y)) = (a.eval_rational(&p), b.eval_rational(&p)) {
            prop_assert_eq!((&a + &b).eval_rational(&p), Some(&x + &y));
            prop_assert_eq!((&a * &b).eval_rational(&p), Some(x * y));
        }
    }

    #[test]
    fn substitution_is_simultaneous(a in ratfn()) {
        let swap = [(Sym::Re, RatFn::var(Sym::Rc)), (Sym::Rc, RatFn::var(Sym::Re))];
        prop_assert!(a.substitute(&swap).substitute(&swap).equals(&a));
    }

    #[test]
    fn parallel_is_symmetric(a in ratfn(), b in ratfn()) {
        if let (Ok(x), Ok(y)) = (a.parallel(&b), b.parallel(&a)) {
            prop_assert!(x.equals(&y));
        }
    }
}

#[test]
fn parallel_limits() {
    let re = RatFn::var(Sym::Re);
    let rc = RatFn::var(Sym::Rc);
    let p = re.parallel(&rc).unwrap();
    match p.limit_at_infinity(Sym::Rc) {
        Limit::Finite(l) => assert!(l.equals(&re)),
        other => panic!("{other:?}"),
    }
    match p.limit_at_zero(Sym::Rc) {
        Limit::Finite(l) => assert!(l.is_zero()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn expr_lowering_matches_direct_build() {
    let e = Expr::sym(Sym::Re).par(&Expr::sym(Sym::Rc)) + Expr::int(2) * Expr::sym(Sym::Ro);
    let direct = &RatFn::var(Sym::Re).parallel(&RatFn::var(Sym::Rc)).unwrap() + &(&RatFn::int(2) * &RatFn::var(Sym::Ro));
    assert!(e.to_ratfn().unwrap().equals(&direct));
}
