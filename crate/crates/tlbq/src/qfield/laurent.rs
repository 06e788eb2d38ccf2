//! Laurent polynomials in `s` and `Q` with Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gauss::GaussRat;
use super::upoly::{BiPoly, UPoly};

/// Exponent pair `(e_s, e_Q)`; the derived order is lexicographic with `s` first.
pub type Exponent = (i32, i32);

fn add_exp(a: Exponent, b: Exponent) -> Exponent {
    (a.0.checked_add(b.0).expect("exponent overflow in s"), a.1.checked_add(b.1).expect("exponent overflow in Q"))
}

/// A finite sum `Σ c·s^a·Q^b` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponent, GaussRat>,
}

impl LaurentPoly {
    pub fn monomial(c: GaussRat, es: i32, eq: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((es, eq), c);
        }
        LaurentPoly { terms }
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `s^e`.
    pub fn s_pow(e: i32) -> Self {
        Self::monomial(GaussRat::one(), e, 0)
    }

    /// `Q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self::monomial(GaussRat::one(), 0, e)
    }

    /// Build from `(e_s, e_Q, coefficient)` triples, summing repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (i32, i32, GaussRat)>>(it: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (a, b, c) in it {
            p.add_term((a, b), c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &GaussRat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: Exponent) -> GaussRat {
        self.terms.get(&e).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The constant value if the polynomial has only an `s^0 Q^0` term (or is zero).
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// True if some term carries a nonzero power of `Q`.
    pub fn involves_q(&self) -> bool {
        self.terms.keys().any(|e| e.1 != 0)
    }

    /// Coefficient of the largest exponent in the lexicographic order.
    pub fn leading_coeff(&self) -> Option<&GaussRat> {
        self.terms.values().next_back()
    }

    /// Componentwise minimal exponents, `(0, 0)` for the zero polynomial.
    pub fn min_exponents(&self) -> Exponent {
        let ms = self.terms.keys().map(|e| e.0).min().unwrap_or(0);
        let mq = self.terms.keys().map(|e| e.1).min().unwrap_or(0);
        (ms, mq)
    }

    /// Multiply by `s^ds·Q^dq`.
    pub fn shift(&self, ds: i32, dq: i32) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (add_exp(*e, (ds, dq)), c.clone())).collect() }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect() }
    }

    /// Evaluate at `(s0, Q0)`; `None` if a negative power of a zero value occurs.
    pub fn eval(&self, s0: &GaussRat, q0: &GaussRat) -> Option<GaussRat> {
        let mut acc = GaussRat::zero();
        let mut spow: BTreeMap<i32, GaussRat> = BTreeMap::new();
        let mut qpow: BTreeMap<i32, GaussRat> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            if !spow.contains_key(a) {
                spow.insert(*a, s0.pow(*a)?);
            }
            if !qpow.contains_key(b) {
                qpow.insert(*b, q0.pow(*b)?);
            }
            acc = &acc + &(&(c * &spow[a]) * &qpow[b]);
        }
        Some(acc)
    }

    /// Convert a polynomial with nonnegative exponents to the dense gcd form.
    pub(crate) fn to_bi(&self) -> BiPoly {
        let (ms, mq) = self.min_exponents();
        assert!(ms >= 0 && mq >= 0, "to_bi needs a genuine polynomial");
        let dq = self.terms.keys().map(|e| e.1).max().unwrap_or(-1);
        let mut rows: Vec<Vec<GaussRat>> = vec![Vec::new(); (dq + 1) as usize];
        for ((a, b), c) in &self.terms {
            let row = &mut rows[*b as usize];
            if row.len() <= *a as usize {
                row.resize(*a as usize + 1, GaussRat::zero());
            }
            row[*a as usize] = c.clone();
        }
        BiPoly(rows.into_iter().map(|r| UPoly(r).trimmed()).collect()).trimmed()
    }

    pub(crate) fn from_bi(p: &BiPoly) -> Self {
        let mut out = LaurentPoly::zero();
        for (b, row) in p.0.iter().enumerate() {
            for (a, c) in row.0.iter().enumerate() {
                if !c.is_zero() {
                    out.terms.insert((a as i32, b as i32), c.clone());
                }
            }
        }
        out
    }

    /// Greatest common divisor of two genuine polynomials (up to a unit).
    pub(crate) fn poly_gcd(&self, o: &LaurentPoly) -> LaurentPoly {
        if !self.involves_q() && !o.involves_q() {
            let a = self.to_bi().0.into_iter().next().unwrap_or_else(UPoly::zero);
            let b = o.to_bi().0.into_iter().next().unwrap_or_else(UPoly::zero);
            return LaurentPoly::from_bi(&BiPoly(vec![a.gcd(&b)]).trimmed());
        }
        LaurentPoly::from_bi(&self.to_bi().gcd(&o.to_bi()))
    }

    /// Exact quotient of genuine polynomials, `None` if not divisible.
    pub(crate) fn poly_exact_div(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        self.to_bi().exact_div(&d.to_bi()).map(|q| LaurentPoly::from_bi(&q))
    }

    fn fmt_monomial(es: i32, eq: i32) -> String {
        let mut parts = Vec::new();
        for (name, e) in [("s", es), ("Q", eq)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in decreasing lexicographic order, e.g. `-s^2 - s^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            let mono = LaurentPoly::fmt_monomial(*a, *b);
            let (neg, mag) = if c.renders_negative() { (true, -c) } else { (false, c.clone()) };
            let body = if mono.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                mono
            } else {
                format!("{mag}*{mono}")
            };
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::constant(GaussRat::one())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(add_exp(*e1, *e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

crate::forward_owned_ops!(LaurentPoly);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_descending_lex() {
        let d = -(LaurentPoly::s_pow(2) + LaurentPoly::s_pow(-2));
        assert_eq!(d.to_string(), "-s^2 - s^-2");
        let k = LaurentPoly::from_terms([(2, -1, GaussRat::one()), (-2, 1, GaussRat::from_int(3))]);
        assert_eq!(k.to_string(), "s^2*Q^-1 + 3*s^-2*Q");
    }

    #[test]
    fn poly_gcd_mixed() {
        // (1 + s Q)(1 - s) and (1 + s Q)(2 + Q)
        let f = LaurentPoly::one() + LaurentPoly::monomial(GaussRat::one(), 1, 1);
        let a = &f * &(LaurentPoly::one() - LaurentPoly::s_pow(1));
        let b = &f * &(LaurentPoly::constant(GaussRat::from_int(2)) + LaurentPoly::q_pow(1));
        let g = a.poly_gcd(&b);
        assert!(f.poly_exact_div(&g).is_some());
        assert!(g.poly_exact_div(&f).is_some());
    }
}
