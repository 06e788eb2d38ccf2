//! Canonical rational functions in `s` and `Q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gauss::GaussRat;
use super::laurent::LaurentPoly;
use super::FieldError;

/// A quotient `num/den` kept in canonical form: the denominator is a genuine
/// polynomial not divisible by `s` or `Q`, its leading coefficient (largest
/// exponent, lexicographic with `s` first) is 1, and `gcd(num, den)` is a unit.
/// Equality of values is therefore structural equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn from_laurent(p: LaurentPoly) -> Self {
        RatFunc { num: p, den: LaurentPoly::one() }
    }

    pub fn constant(c: GaussRat) -> Self {
        RatFunc::from_laurent(LaurentPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::constant(GaussRat::from_int(n))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        RatFunc::constant(GaussRat::i())
    }

    /// `s^e` where `s = q^{1/2}`.
    pub fn s_pow(e: i32) -> Self {
        RatFunc::from_laurent(LaurentPoly::s_pow(e))
    }

    /// `q^e = s^{2e}`.
    pub fn q_pow(e: i32) -> Self {
        RatFunc::s_pow(2 * e)
    }

    /// `Q^e`.
    pub fn big_q_pow(e: i32) -> Self {
        RatFunc::from_laurent(LaurentPoly::q_pow(e))
    }

    /// Build `num/den`, normalising; errors if `den` is zero.
    pub fn from_parts(num: LaurentPoly, den: LaurentPoly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(RatFunc::normalize(num, den))
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    /// True when the denominator is 1, i.e. the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn involves_q(&self) -> bool {
        self.num.involves_q() || self.den.involves_q()
    }

    /// The constant value, if this is a constant.
    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.is_laurent() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero();
        }
        // Move the monomial part of the denominator into the numerator.
        let (ms, mq) = den.min_exponents();
        let mut den = den.shift(-ms, -mq);
        let mut num = num.shift(-ms, -mq);
        if let Some(c) = den.as_constant() {
            let inv = c.inv().expect("nonzero constant denominator");
            return RatFunc { num: num.scale(&inv), den: LaurentPoly::one() };
        }
        if !num.is_monomial() {
            let (ns, nq) = num.min_exponents();
            let shifted = num.shift(-ns, -nq);
            let g = shifted.poly_gcd(&den);
            if g.as_constant().is_none() {
                num = shifted.poly_exact_div(&g).expect("gcd divides numerator").shift(ns, nq);
                den = den.poly_exact_div(&g).expect("gcd divides denominator");
            }
        }
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn inv(&self) -> Result<RatFunc, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(RatFunc::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &RatFunc) -> Result<RatFunc, FieldError> {
        Ok(self * &o.inv()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i32) -> Result<RatFunc, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Exact evaluation at `(s0, Q0)`.
    pub fn eval_point(&self, s0: &GaussRat, q0: &GaussRat) -> Result<GaussRat, FieldError> {
        let pole = || FieldError::Pole { point: format!("s={s0}, Q={q0}") };
        let n = self.num.eval(s0, q0).ok_or_else(pole)?;
        let d = self.den.eval(s0, q0).ok_or_else(pole)?;
        let dinv = d.inv().ok_or_else(pole)?;
        Ok(&n * &dinv)
    }

    /// Replace `s` and `Q` by the given rational functions.
    pub fn substitute(&self, s_val: &RatFunc, q_val: &RatFunc) -> Result<RatFunc, FieldError> {
        let mut cache: BTreeMap<(bool, i32), RatFunc> = BTreeMap::new();
        let mut power = |is_s: bool, e: i32| -> Result<RatFunc, FieldError> {
            if let Some(v) = cache.get(&(is_s, e)) {
                return Ok(v.clone());
            }
            let base = if is_s { s_val } else { q_val };
            let v = base
                .pow(e)
                .map_err(|_| FieldError::VanishingDenominator { factor: if is_s { "s".into() } else { "Q".into() } })?;
            cache.insert((is_s, e), v.clone());
            Ok(v)
        };
        let mut eval = |p: &LaurentPoly| -> Result<RatFunc, FieldError> {
            let mut acc = RatFunc::zero();
            for ((a, b), c) in p.terms() {
                let t = &(&power(true, *a)? * &power(false, *b)?) * &RatFunc::constant(c.clone());
                acc = &acc + &t;
            }
            Ok(acc)
        };
        let n = eval(&self.num)?;
        let d = eval(&self.den)?;
        if d.is_zero() {
            return Err(FieldError::VanishingDenominator { factor: self.den.to_string() });
        }
        n.checked_div(&d)
    }

    /// Substitute `Q ↦ value`, keeping `s`.
    pub fn specialize_q(&self, value: &RatFunc) -> Result<RatFunc, FieldError> {
        if !self.involves_q() {
            return Ok(self.clone());
        }
        self.substitute(&RatFunc::s_pow(1), value)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return RatFunc::from_laurent(&self.num + &o.num);
            }
            return RatFunc::normalize(&self.num + &o.num, self.den.clone());
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::normalize(num, &self.den * &o.den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_laurent(&self.num * &o.num);
        }
        RatFunc::normalize(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

crate::forward_owned_ops!(RatFunc);
