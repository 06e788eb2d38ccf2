//! Exact arithmetic over `ℚ(i)(s, Q)`, where `s = q^{1/2}`, plus the quantum
//! numbers and loop scalars used throughout the crate.
//!
//! Every value is kept in a canonical form, so `==` decides equality of
//! rational functions.

mod gauss;
mod laurent;
mod parse;
mod ratfunc;
mod upoly;

pub use gauss::GaussRat;
pub use laurent::{Exponent, LaurentPoly};
pub use parse::parse_ratfunc;
pub use ratfunc::RatFunc;

use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at {point}")]
    Pole { point: String },
    #[error("substitution makes the factor {factor} vanish")]
    VanishingDenominator { factor: String },
    #[error("parse error: {0}")]
    Parse(String),
}

/// `δ_x = −(x + x⁻¹)`; errors if `x = 0`.
pub fn delta(x: &RatFunc) -> Result<RatFunc, FieldError> {
    Ok(-(x + &x.inv()?))
}

/// `δ_q = −(q + q⁻¹) = −(s² + s⁻²)`, the value of a free loop.
pub fn delta_q() -> RatFunc {
    -(RatFunc::q_pow(1) + RatFunc::q_pow(-1))
}

/// `δ_Q = −(Q + Q⁻¹)`, the cost of removing a surplus mark.
pub fn delta_big_q() -> RatFunc {
    -(RatFunc::big_q_pow(1) + RatFunc::big_q_pow(-1))
}

/// `κ = q/Q + Q/q`, the value of a loop carrying one mark.
pub fn kappa() -> RatFunc {
    let q = RatFunc::q_pow(1);
    let big_q = RatFunc::big_q_pow(1);
    &q * &big_q.inv().expect("Q is a unit") + &big_q * &q.inv().expect("q is a unit")
}

/// `⟨k⟩ = (1 − q^{−2k})/(1 − q^{−2}) = Σ_{j<k} q^{−2j}`, a Laurent polynomial in `s`.
pub fn qint(k: u32) -> RatFunc {
    let mut acc = LaurentPoly::zero();
    for j in 0..k as i32 {
        acc = &acc + &LaurentPoly::s_pow(-4 * j);
    }
    RatFunc::from_laurent(acc)
}

/// `⟨k⟩! = ⟨1⟩⟨2⟩⋯⟨k⟩`, with `⟨0⟩! = 1`.
pub fn qfact(k: u32) -> RatFunc {
    (1..=k).fold(RatFunc::one(), |acc, j| &acc * &qint(j))
}

/// The balanced quantum integer `[n] = (q^n − q^{−n})/(q − q^{−1})`, for any integer `n`.
pub fn qnum(n: i32) -> RatFunc {
    let m = n.abs();
    let mut acc = LaurentPoly::zero();
    for j in 0..m {
        acc = &acc + &LaurentPoly::s_pow(2 * (m - 1 - 2 * j));
    }
    let v = RatFunc::from_laurent(acc);
    if n < 0 {
        -v
    } else {
        v
    }
}

/// Evaluate at a point; convenience wrapper around [`RatFunc::eval_point`].
pub fn eval_point(f: &RatFunc, s0: &GaussRat, q0: &GaussRat) -> Result<GaussRat, FieldError> {
    f.eval_point(s0, q0)
}

/// Substitute `Q ↦ value` (a function of `s`).
pub fn specialize(f: &RatFunc, value: &RatFunc) -> Result<RatFunc, FieldError> {
    f.specialize_q(value)
}

/// The value `i·q^{e}` used to specialise `Q` for the Verma weight `ℓ`.
pub fn i_q_pow(e: i32) -> RatFunc {
    &RatFunc::i() * &RatFunc::q_pow(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn add_equal_terms() {
        assert_eq!(rf("s^2") + rf("s^2"), rf("2*s^2"));
        assert_eq!((rf("s^2") + rf("s^2")).to_string(), "(2*s^2)");
    }

    #[test]
    fn delta_q_times_one() {
        assert_eq!(&delta_q() * &RatFunc::one(), rf("-s^2-s^-2"));
        assert_eq!(delta_q().to_string(), "(-s^2 - s^-2)");
    }

    #[test]
    fn self_quotient_is_one() {
        let f = rf("(1-s^-4)/(1-s^-4)");
        assert!(f.is_one());
        let g = rf("(1 - s^-4)");
        assert!(g.checked_div(&g).unwrap().is_one());
        assert_eq!(g.checked_div(&RatFunc::zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn qint_values() {
        assert!(qint(0).is_zero());
        assert!(qint(1).is_one());
        assert_eq!(qint(2), rf("1 + s^-4"));
        // ⟨k⟩ agrees with the quotient definition.
        for k in 0..6 {
            let quotient =
                (RatFunc::one() - RatFunc::q_pow(-2 * k)).checked_div(&(RatFunc::one() - RatFunc::q_pow(-2))).unwrap();
            assert_eq!(qint(k as u32), quotient);
        }
        assert_eq!(qfact(3), &qint(2) * &qint(3));
    }

    #[test]
    fn qnum_matches_quotient() {
        for n in -4..=4 {
            let quotient = (RatFunc::q_pow(n) - RatFunc::q_pow(-n))
                .checked_div(&(RatFunc::q_pow(1) - RatFunc::q_pow(-1)))
                .unwrap();
            assert_eq!(qnum(n), quotient);
        }
    }

    #[test]
    fn specialize_examples() {
        assert!(specialize(&delta_big_q(), &RatFunc::i()).unwrap().is_zero());
        assert_eq!(specialize(&rf("Q"), &i_q_pow(1)).unwrap(), rf("i*s^2"));
        assert!(specialize(&RatFunc::one(), &rf("s^7")).unwrap().is_one());
        let err = specialize(&rf("1/(Q - i)"), &RatFunc::i()).unwrap_err();
        assert!(matches!(err, FieldError::VanishingDenominator { .. }));
    }

    #[test]
    fn eval_examples() {
        let one = GaussRat::one();
        assert_eq!(eval_point(&delta_q(), &one, &one).unwrap(), GaussRat::from_int(-2));
        assert_eq!(eval_point(&kappa(), &one, &one).unwrap(), GaussRat::from_int(2));
        assert_eq!(eval_point(&qint(2), &GaussRat::from_int(2), &one).unwrap(), GaussRat::ratio(17, 16));
        assert!(eval_point(&rf("1/(s-1)"), &one, &one).is_err());
    }

    #[test]
    fn display_round_trips() {
        for src in ["(s^2 + Q)/(s - 3*Q^2)", "i*s^-3*Q + 1/2", "(1+2*i)*s - 7", "(Q^2 + 1)/(s^2*Q)"] {
            let f = rf(src);
            assert_eq!(rf(&f.to_string()), f, "{src} -> {f}");
        }
    }

    #[test]
    fn canonical_form_cancels_common_factor() {
        let f = rf("(s^2 - Q^2)/(s + Q)");
        assert_eq!(f, rf("s - Q"));
        let g = rf("(s*Q - 1)*(s + 2)/((s*Q - 1)*(Q + 5))");
        assert_eq!(g, rf("(s + 2)/(Q + 5)"));
    }
}
