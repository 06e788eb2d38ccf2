use num_traits::{One, Zero};
use proptest::prelude::*;
use tlbq::qfield::{delta, delta_q, kappa, parse_ratfunc, qfact, qint, qnum, GaussRat, RatFunc};

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}

/// Small random rational functions `a s^j Q^k + b s^m` over `(c s^n + d)`.
fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (-3i64..=3, -4i32..=4, -2i32..=2, -3i64..=3, -4i32..=4, 1i64..=3, -3i32..=3, -2i64..=2).prop_map(
        |(a, j, k, b, m, c, n, d)| {
            let num = RatFunc::from_int(a) * &RatFunc::s_pow(j) * &RatFunc::big_q_pow(k)
                + &(RatFunc::from_int(b) * &RatFunc::s_pow(m));
            let den = RatFunc::from_int(c) * &RatFunc::s_pow(n) + &RatFunc::from_int(d);
            match den.inv() {
                Ok(inv) => num * &inv,
                Err(_) => num,
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn text_round_trip(a in ratfunc()) {
        prop_assert_eq!(rf(&a.to_string()), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in ratfunc(), b in ratfunc(), p in 2i64..30, q in 2i64..7) {
        let s0 = GaussRat::ratio(p, q);
        let q0 = GaussRat::ratio(q + 1, p);
        let ev = |x: &RatFunc| x.eval_point(&s0, &q0);
        if let (Ok(x), Ok(y), Ok(z)) = (ev(&a), ev(&b), ev(&(&a * &b))) {
            prop_assert_eq!(x * &y, z);
        }
    }
}

#[test]
fn loop_scalars() {
    assert_eq!(delta_q(), rf("-s^2 - s^-2"));
    assert_eq!(delta(&RatFunc::i()).unwrap(), RatFunc::zero());
    assert_eq!(kappa(), rf("s^2*Q^-1 + Q*s^-2"));
    assert!(delta(&RatFunc::zero()).is_err());
}

#[test]
fn quantum_numbers() {
    assert_eq!(qnum(2), rf("s^2 + s^-2"));
    assert_eq!(qnum(-3), -qnum(3));
    assert!(qnum(0).is_zero());
    // [n] = q^{n−1} ⟨n⟩
    for n in 1..6 {
        assert_eq!(qnum(n), RatFunc::q_pow(n - 1) * &qint(n as u32));
    }
    assert!(qfact(0).is_one());
    assert_eq!(qfact(4), qfact(3) * &qint(4));
}

#[test]
fn parse_errors() {
    assert!(parse_ratfunc("(s").is_err());
    assert!(parse_ratfunc("1/0").is_err());
    assert_eq!(rf("i*i"), RatFunc::from_int(-1));
}
