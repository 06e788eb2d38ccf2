//! Dense polynomials used by the gcd machinery: univariate polynomials in `s`
//! over the Gaussian rationals, and bivariate polynomials viewed as univariate
//! in `Q` with coefficients in `ℚ(i)[s]`.

use num_traits::{One, Zero};

use super::gauss::GaussRat;

/// A univariate polynomial in `s`; `coeffs[k]` multiplies `s^k`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct UPoly(pub Vec<GaussRat>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: GaussRat) -> Self {
        UPoly(vec![c]).trimmed()
    }

    pub fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> &GaussRat {
        self.0.last().expect("leading coefficient of the zero polynomial")
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = GaussRat::zero();
        let v = (0..n).map(|k| self.0.get(k).unwrap_or(&z) - o.0.get(k).unwrap_or(&z)).collect();
        UPoly(v).trimmed()
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![GaussRat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = &v[i + j] + &(a * b);
                }
            }
        }
        UPoly(v).trimmed()
    }

    pub fn scale(&self, c: &GaussRat) -> UPoly {
        UPoly(self.0.iter().map(|a| a * c).collect()).trimmed()
    }

    /// Euclidean division over the field `ℚ(i)`.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.deg().expect("division by the zero polynomial");
        let inv = d.lc().inv().expect("nonzero leading coefficient");
        let mut r = self.clone();
        let mut q = vec![GaussRat::zero(); self.0.len().saturating_sub(dd)];
        while let Some(rd) = r.deg() {
            if rd < dd {
                break;
            }
            let c = r.lc() * &inv;
            let shift = rd - dd;
            for (k, b) in d.0.iter().enumerate() {
                r.0[k + shift] = &r.0[k + shift] - &(&c * b);
            }
            q[shift] = c;
            r = r.trimmed();
        }
        (UPoly(q).trimmed(), r)
    }

    pub fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let inv = self.lc().inv().expect("nonzero");
        self.scale(&inv)
    }

    /// Monic greatest common divisor (zero only when both inputs vanish).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }
}

/// A polynomial in `Q` whose coefficients are polynomials in `s`;
/// `0[k]` multiplies `Q^k`, no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BiPoly(pub Vec<UPoly>);

impl BiPoly {
    pub fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Monic gcd of the `s`-coefficients.
    pub fn content(&self) -> UPoly {
        let mut g = UPoly::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_upoly(&self, c: &UPoly) -> BiPoly {
        BiPoly(self.0.iter().map(|a| a.exact_div(c).expect("content divides every coefficient")).collect())
    }

    pub fn mul_upoly(&self, c: &UPoly) -> BiPoly {
        BiPoly(self.0.iter().map(|a| a.mul(c)).collect()).trimmed()
    }

    pub fn primitive_part(&self) -> BiPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.div_upoly(&c)
    }

    /// Pseudo-remainder of `self` by `b` with respect to `Q`.
    fn prem(&self, b: &BiPoly) -> BiPoly {
        let db = b.deg().expect("nonzero divisor");
        let lb = b.0[db].clone();
        let mut r = self.clone();
        while let Some(dr) = r.deg() {
            if dr < db {
                break;
            }
            let lr = r.0[dr].clone();
            let shift = dr - db;
            let mut next: Vec<UPoly> = r.0.iter().map(|c| c.mul(&lb)).collect();
            for (k, c) in b.0.iter().enumerate() {
                next[k + shift] = next[k + shift].sub(&c.mul(&lr));
            }
            r = BiPoly(next).trimmed();
        }
        r
    }

    /// Greatest common divisor up to a unit, via a primitive pseudo-remainder
    /// sequence in `Q` over `ℚ(i)[s]` combined with the gcd of `s`-contents.
    pub fn gcd(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let cont = self.content().gcd(&o.content());
        let (mut a, mut b) = (self.primitive_part(), o.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.deg() == Some(0) {
                // A primitive polynomial of degree zero in Q is a unit.
                a = BiPoly(vec![UPoly::constant(GaussRat::one())]);
                break;
            }
            let r = a.prem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.mul_upoly(&cont)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &BiPoly) -> Option<BiPoly> {
        let dd = d.deg().expect("division by zero");
        let ld = &d.0[dd];
        let mut r = self.clone();
        let mut q = vec![UPoly::zero(); self.0.len().saturating_sub(dd)];
        while let Some(dr) = r.deg() {
            if dr < dd {
                return None;
            }
            let c = r.0[dr].exact_div(ld)?;
            let shift = dr - dd;
            for (k, b) in d.0.iter().enumerate() {
                r.0[k + shift] = r.0[k + shift].sub(&c.mul(b));
            }
            q[shift] = c;
            r = r.trimmed();
        }
        Some(BiPoly(q).trimmed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(v: &[i64]) -> UPoly {
        UPoly(v.iter().map(|&c| GaussRat::from_int(c)).collect()).trimmed()
    }

    #[test]
    fn univariate_gcd() {
        // (s-1)(s+2) and (s-1)(s+3)
        let a = up(&[-2, 1, 1]);
        let b = up(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), up(&[-1, 1]));
    }

    #[test]
    fn bivariate_gcd_and_division() {
        // a = (s + Q)(s - 1), b = (s + Q)(Q + 2)
        let a = BiPoly(vec![up(&[0, -1, 1]), up(&[-1, 1])]);
        let b = BiPoly(vec![up(&[0, 2]), up(&[2, 1]), up(&[1])]);
        let g = a.gcd(&b);
        let q1 = a.exact_div(&g).unwrap();
        let q2 = b.exact_div(&g).unwrap();
        assert_eq!(g.deg(), Some(1));
        assert_eq!(q1.gcd(&q2).deg(), Some(0));
    }
}
