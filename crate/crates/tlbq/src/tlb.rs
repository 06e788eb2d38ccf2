//! The algebras `TLB_n(q, Q) = End(n)` of marked diagrams, their generators,
//! structure constants and presentation.
//!
//! The abstract algebra with generators `x₁, e₁, …, e_{n−1}` and relations
//!
//! * `(x₁ − Q)(x₁ + Q⁻¹) = 0`, `e₁x₁e₁ = −q(Q − Q⁻¹)e₁`,
//! * `e_i² = δ_q e_i`, `e_i e_{i±1} e_i = e_i`, far commutation,
//! * `x₁e_j = e_jx₁` for `j ≥ 2`,
//!
//! is realised inside the diagram algebra by `x₁ = c₀ + Q` and `e_i = c_i`,
//! where `c₀` marks the first strand and `c_i` is the cup-cap on strands
//! `i, i+1`. [`check_presentation`] verifies all of these identically in `(s, Q)`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::diagrams::{enumerate, DiagramError, DiagramSum, LoopRules, MarkedDiagram};
use crate::qfield::{delta_q, RatFunc};

/// An element of `TLB_n`: a combination of diagrams `n → n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    n: usize,
    value: DiagramSum,
}

impl AlgebraElement {
    pub fn new(value: DiagramSum) -> Result<Self, DiagramError> {
        if value.n_bottom() != value.n_top() {
            return Err(DiagramError::ShapeMismatch { top_bottom: value.n_top(), bottom_top: value.n_bottom() });
        }
        Ok(AlgebraElement { n: value.n_bottom(), value })
    }

    pub fn from_diagram(d: MarkedDiagram) -> Self {
        AlgebraElement::new(DiagramSum::from_diagram(d)).expect("square diagram")
    }

    pub fn identity(n: usize) -> Self {
        AlgebraElement::from_diagram(MarkedDiagram::identity(n))
    }

    pub fn zero(n: usize) -> Self {
        AlgebraElement { n, value: DiagramSum::zero(n, n) }
    }

    /// `c·1`.
    pub fn scalar(n: usize, c: RatFunc) -> Self {
        AlgebraElement { n, value: DiagramSum::term(c, MarkedDiagram::identity(n)) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> &DiagramSum {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        AlgebraElement { n: self.n, value: self.value.add(&o.value) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        AlgebraElement { n: self.n, value: self.value.sub(&o.value) }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        AlgebraElement { n: self.n, value: self.value.scale(c) }
    }

    /// `self · o`: `o` is applied first, i.e. drawn below `self`.
    pub fn mul(&self, o: &Self, rules: &LoopRules) -> Result<Self, DiagramError> {
        Ok(AlgebraElement { n: self.n, value: self.value.compose(&o.value, rules)? })
    }

    /// Product of several factors, left to right.
    pub fn product(factors: &[&Self], rules: &LoopRules) -> Result<Self, DiagramError> {
        let (first, rest) = factors.split_first().expect("at least one factor");
        rest.iter().try_fold((*first).clone(), |acc, f| acc.mul(f, rules))
    }

    /// The anti-automorphism induced by reflection.
    pub fn star(&self) -> Self {
        AlgebraElement { n: self.n, value: self.value.reflect() }
    }

    /// Coordinates in a basis (every diagram of `self` must occur in it).
    pub fn coordinates(&self, index: &HashMap<MarkedDiagram, usize>) -> Vec<RatFunc> {
        let mut out = vec![RatFunc::zero(); index.len()];
        for (d, c) in self.value.terms() {
            out[index[d]] = c.clone();
        }
        out
    }
}

impl std::fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The standard basis of `TLB_n`: all `C(2n, n)` marked diagrams `n → n`.
pub fn basis(n: usize) -> Vec<MarkedDiagram> {
    enumerate(n, n).expect("n + n is even")
}

/// The generators `c₀ = C₀ ⊗ I^{n−1}` and `c_i = I^{i−1} ⊗ (U∘A) ⊗ I^{n−i−1}`.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub c0: AlgebraElement,
    /// `c[i-1]` is `c_i`.
    pub c: Vec<AlgebraElement>,
}

/// The cup-cap diagram `U∘A : 2 → 2`.
pub fn cup_cap() -> MarkedDiagram {
    let (_, d) = MarkedDiagram::cup().compose(&MarkedDiagram::cap(), &LoopRules::generic()).expect("cup over cap");
    d
}

pub fn generators(n: usize) -> GeneratorSet {
    assert!(n >= 1, "TLB_0 has no generators");
    let c0 = MarkedDiagram::marked_strand().tensor_right(&MarkedDiagram::identity(n - 1)).expect("unmarked identity");
    let c = (1..n)
        .map(|i| {
            let d = MarkedDiagram::identity(i - 1)
                .juxtapose(&cup_cap())
                .and_then(|d| d.juxtapose(&MarkedDiagram::identity(n - i - 1)))
                .expect("planar");
            AlgebraElement::from_diagram(d)
        })
        .collect();
    GeneratorSet { c0: AlgebraElement::from_diagram(c0), c }
}

/// The product of two basis diagrams is a scalar times a basis diagram, so
/// the table stores one `(coefficient, index)` per ordered pair.
#[derive(Clone, Debug)]
pub struct StructureTable {
    pub basis: Vec<MarkedDiagram>,
    /// `products[i][j]` describes `basis[i] · basis[j]`.
    pub products: Vec<Vec<(RatFunc, usize)>>,
}

impl StructureTable {
    /// CSV with a header row of basis indices; each cell is `coefficient*d<k>`.
    pub fn to_csv(&self) -> String {
        let n = self.basis.len();
        let mut out = String::from("i\\j");
        for j in 0..n {
            out.push_str(&format!(",{j}"));
        }
        out.push('\n');
        for (i, row) in self.products.iter().enumerate() {
            out.push_str(&i.to_string());
            for (c, k) in row {
                out.push_str(&format!(",{c}*d{k}"));
            }
            out.push('\n');
        }
        out
    }
}

/// The full multiplication table of `TLB_n` over its standard basis.
pub fn structure_constants(n: usize, rules: &LoopRules) -> StructureTable {
    let basis = basis(n);
    let index: HashMap<&MarkedDiagram, usize> = basis.iter().enumerate().map(|(k, d)| (d, k)).collect();
    let products = basis
        .par_iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| {
                    let (c, d) = a.compose(b, rules).expect("same shape");
                    (c, index[&d])
                })
                .collect()
        })
        .collect();
    StructureTable { basis, products }
}

/// Outcome of checking one relation.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RelationCheck {
    pub relation: String,
    pub passed: bool,
    /// Text of the residual (`"0"` when the relation holds).
    pub residual: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PresentationReport {
    pub n: usize,
    pub checks: Vec<RelationCheck>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn record(checks: &mut Vec<RelationCheck>, relation: String, residual: AlgebraElement) {
    checks.push(RelationCheck { passed: residual.is_zero(), residual: residual.to_string(), relation });
}

/// Verify the type-B presentation with `x₁ = c₀ + Q`, `e_i = c_i`, where
/// `big_q` is the parameter `Q` (normally the symbol `Q`).
pub fn check_presentation_with(
    n: usize,
    rules: &LoopRules,
    big_q: &RatFunc,
) -> Result<PresentationReport, DiagramError> {
    assert!(n >= 2, "the presentation involves e_1");
    let g = generators(n);
    let one = AlgebraElement::identity(n);
    let q = RatFunc::q_pow(1);
    let q_inv = big_q.inv().expect("Q is nonzero");
    let x1 = g.c0.add(&AlgebraElement::scalar(n, big_q.clone()));
    let e = &g.c;
    let mut checks = Vec::new();

    let quad = x1.sub(&one.scale(big_q)).mul(&x1.add(&one.scale(&q_inv)), rules)?;
    record(&mut checks, "(x1 - Q)(x1 + Q^-1) = 0".into(), quad);

    let exe = AlgebraElement::product(&[&e[0], &x1, &e[0]], rules)?;
    let rhs = e[0].scale(&-(&q * &(big_q - &q_inv)));
    record(&mut checks, "e1 x1 e1 = -q(Q - Q^-1) e1".into(), exe.sub(&rhs));

    for (i, ei) in e.iter().enumerate() {
        let sq = ei.mul(ei, rules)?.sub(&ei.scale(&rules.delta_q));
        record(&mut checks, format!("e{0}^2 = delta_q e{0}", i + 1), sq);
    }
    for i in 0..e.len() {
        for j in 0..e.len() {
            let name = (i + 1, j + 1);
            if i.abs_diff(j) == 1 {
                let r = AlgebraElement::product(&[&e[i], &e[j], &e[i]], rules)?.sub(&e[i]);
                record(&mut checks, format!("e{0} e{1} e{0} = e{0}", name.0, name.1), r);
            } else if i < j && j - i > 1 {
                let r = e[i].mul(&e[j], rules)?.sub(&e[j].mul(&e[i], rules)?);
                record(&mut checks, format!("e{} e{} = e{} e{}", name.0, name.1, name.1, name.0), r);
            }
        }
    }
    for (j, ej) in e.iter().enumerate().skip(1) {
        let r = x1.mul(ej, rules)?.sub(&ej.mul(&x1, rules)?);
        record(&mut checks, format!("x1 e{0} = e{0} x1", j + 1), r);
    }
    Ok(PresentationReport { n, checks })
}

/// [`check_presentation_with`] over `ℚ(i)(s, Q)` with the standard loop rules.
pub fn check_presentation(n: usize) -> Result<PresentationReport, DiagramError> {
    check_presentation_with(n, &LoopRules::generic(), &RatFunc::big_q_pow(1))
}

/// The sign-flipped realisation `x₁' = −(c₀ + Q)` satisfies the presentation
/// with parameter `−Q`; checked exactly like [`check_presentation`].
pub fn check_presentation_flipped(n: usize) -> Result<PresentationReport, DiagramError> {
    let rules = LoopRules::generic();
    let big_q = RatFunc::big_q_pow(1);
    let minus_q = -&big_q;
    let g = generators(n);
    let x1 = g.c0.add(&AlgebraElement::scalar(n, big_q)).scale(&-RatFunc::one());
    let one = AlgebraElement::identity(n);
    let q = RatFunc::q_pow(1);
    let mq_inv = minus_q.inv().expect("nonzero");
    let mut checks = Vec::new();
    let quad = x1.sub(&one.scale(&minus_q)).mul(&x1.add(&one.scale(&mq_inv)), &rules)?;
    record(&mut checks, "(x1' + Q)(x1' - Q^-1) = 0".into(), quad);
    let exe = AlgebraElement::product(&[&g.c[0], &x1, &g.c[0]], &rules)?;
    let rhs = g.c[0].scale(&-(&q * &(&minus_q - &mq_inv)));
    record(&mut checks, "e1 x1' e1 = q(Q - Q^-1) e1".into(), exe.sub(&rhs));
    Ok(PresentationReport { n, checks })
}

/// Affine Temperley-Lieb relations inside `TLB_n`: with `x₁ = c₀ + Q` and
/// `x_{i+1} = (q + e_i) x_i (q + e_i)`, the `x_i` commute, and the constraint
/// and its multiplied-out consequences hold.
pub fn check_affine_relations(n: usize) -> Result<PresentationReport, DiagramError> {
    assert!(n >= 2);
    let rules = LoopRules::generic();
    let g = generators(n);
    let q = RatFunc::q_pow(1);
    let one = AlgebraElement::identity(n);
    let mut xs = vec![g.c0.add(&AlgebraElement::scalar(n, RatFunc::big_q_pow(1)))];
    for ei in &g.c {
        let t = ei.add(&one.scale(&q));
        let next = AlgebraElement::product(&[&t, xs.last().expect("nonempty"), &t], &rules)?;
        xs.push(next);
    }
    let mut checks = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let r = xs[i].mul(&xs[j], &rules)?.sub(&xs[j].mul(&xs[i], &rules)?);
            record(&mut checks, format!("x{} x{} = x{} x{}", i + 1, j + 1, j + 1, i + 1), r);
        }
    }
    let (e1, x1) = (&g.c[0], &xs[0]);
    let x1sq = x1.mul(x1, &rules)?;
    let left = e1.mul(&x1sq, &rules)?.scale(&q).add(&AlgebraElement::product(&[e1, x1, e1, x1], &rules)?);
    let right = x1sq.mul(e1, &rules)?.scale(&q).add(&AlgebraElement::product(&[x1, e1, x1, e1], &rules)?);
    record(&mut checks, "q e1 x1^2 + e1 x1 e1 x1 = q x1^2 e1 + x1 e1 x1 e1".into(), left.sub(&right));
    let middle = AlgebraElement::product(&[e1, &x1sq, e1], &rules)?
        .scale(&q)
        .add(&AlgebraElement::product(&[e1, x1, e1, x1, e1], &rules)?);
    let d = delta_q();
    record(
        &mut checks,
        "delta(q e1 x1^2 + e1 x1 e1 x1) = q e1 x1^2 e1 + e1 x1 e1 x1 e1".into(),
        left.scale(&d).sub(&middle),
    );
    record(
        &mut checks,
        "q e1 x1^2 e1 + e1 x1 e1 x1 e1 = delta(q x1^2 e1 + x1 e1 x1 e1)".into(),
        middle.sub(&right.scale(&d)),
    );
    Ok(PresentationReport { n, checks })
}

/// A basis of `Hom(r, s)` with the two-sided action by composition.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub r: usize,
    pub s: usize,
    pub basis: Vec<MarkedDiagram>,
    pub rules: LoopRules,
}

impl HomSpace {
    /// `a · d` for `a ∈ TLB_s`.
    pub fn left_action(&self, a: &AlgebraElement, d: &DiagramSum) -> Result<DiagramSum, DiagramError> {
        a.value.compose(d, &self.rules)
    }

    /// `d · b` for `b ∈ TLB_r`.
    pub fn right_action(&self, d: &DiagramSum, b: &AlgebraElement) -> Result<DiagramSum, DiagramError> {
        d.compose(&b.value, &self.rules)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn hom_space(r: usize, s: usize) -> Result<HomSpace, DiagramError> {
    Ok(HomSpace { r, s, basis: enumerate(r, s)?, rules: LoopRules::generic() })
}

/// Convenience: `true` when `a` equals `c·1` for the given scalar.
pub fn is_scalar_multiple_of_identity(a: &AlgebraElement, c: &RatFunc) -> bool {
    a.sub(&AlgebraElement::scalar(a.n, c.clone())).is_zero() || (c.is_zero() && a.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{delta_big_q, kappa};

    #[test]
    fn basis_sizes() {
        assert_eq!(basis(1).len(), 2);
        assert_eq!(basis(2).len(), 6);
        assert_eq!(basis(3).len(), 20);
    }

    #[test]
    fn generator_products() {
        let rules = LoopRules::generic();
        let g = generators(2);
        let one = AlgebraElement::identity(2);
        assert_eq!(one.mul(&g.c0, &rules).unwrap(), g.c0);
        assert_eq!(g.c0.mul(&g.c0, &rules).unwrap(), g.c0.scale(&delta_big_q()));
        assert_eq!(g.c[0].mul(&g.c[0], &rules).unwrap(), g.c[0].scale(&delta_q()));
        let t = AlgebraElement::product(&[&g.c[0], &g.c0, &g.c[0]], &rules).unwrap();
        assert_eq!(t, g.c[0].scale(&kappa()));
    }

    #[test]
    fn structure_constant_examples() {
        let rules = LoopRules::generic();
        let t0 = structure_constants(0, &rules);
        assert_eq!(t0.products, vec![vec![(RatFunc::one(), 0)]]);
        let t1 = structure_constants(1, &rules);
        let c0 = t1.basis.iter().position(|d| d.total_marks() == 1).unwrap();
        assert_eq!(t1.products[c0][c0], (delta_big_q(), c0));
        let t2 = structure_constants(2, &rules);
        assert_eq!(t2.products.len(), 6);
        assert!(t2.to_csv().starts_with("i\\j,0,1,2,3,4,5\n"));
    }

    #[test]
    fn presentation_holds() {
        for n in [2, 3] {
            let rep = check_presentation(n).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
        assert!(check_presentation_flipped(2).unwrap().passed());
    }

    #[test]
    fn perturbed_kappa_breaks_presentation() {
        let mut rules = LoopRules::generic();
        rules.kappa = &rules.kappa + &RatFunc::one();
        let rep = check_presentation_with(2, &rules, &RatFunc::big_q_pow(1)).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn affine_relations_hold_in_diagrams() {
        for n in [2, 3] {
            let rep = check_affine_relations(n).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn hom_space_sizes() {
        assert_eq!(hom_space(0, 2).unwrap().dim(), 2);
        assert_eq!(hom_space(1, 3).unwrap().dim(), 6);
        assert_eq!(hom_space(0, 0).unwrap().dim(), 1);
        assert!(hom_space(1, 2).is_err());
    }
}
