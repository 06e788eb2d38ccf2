//! Marked planar diagrams: the morphisms of the type-B Temperley-Lieb category.
//!
//! A diagram `r → s` has `r` bottom points `b1..br` and `s` top points `t1..ts`,
//! both numbered left to right, with the pole on the far left. Points are
//! joined in pairs by noncrossing arcs. Arcs that bound the leftmost region may
//! carry marks. Composition stacks diagrams and removes loops and surplus marks:
//!
//! * a loop without marks is worth `δ_q`;
//! * a loop with `k ≥ 1` marks is worth `κ·δ_Q^{k−1}`;
//! * an arc with `k ≥ 2` marks becomes an arc with one mark times `δ_Q^{k−1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::qfield::{delta, delta_big_q, delta_q, kappa, RatFunc};

/// A boundary point, numbered from 1 as in the text format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Bottom(usize),
    Top(usize),
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Bottom(i) => write!(f, "b{i}"),
            Endpoint::Top(j) => write!(f, "t{j}"),
        }
    }
}

pub type Pair = (Endpoint, Endpoint);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("{0} + {1} boundary points cannot be perfectly matched")]
    Parity(usize, usize),
    #[error("pairs do not form a perfect matching: {0}")]
    NotMatching(String),
    #[error("arcs {0}-{1} and {2}-{3} cross")]
    Crossing(Endpoint, Endpoint, Endpoint, Endpoint),
    #[error("mark on {0}-{1}, which does not bound the left region")]
    MarkNotExposed(Endpoint, Endpoint),
    #[error("cannot compose: top has {top_bottom} bottom points, bottom has {bottom_top} top points")]
    ShapeMismatch { top_bottom: usize, bottom_top: usize },
    #[error("right tensor factor must be unmarked")]
    MarkedRightFactor,
    #[error("cannot parse diagram: {0}")]
    Parse(String),
}

/// The three loop/mark scalars used to reduce composites to standard form.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopRules {
    /// Value of an unmarked loop.
    pub delta_q: RatFunc,
    /// Cost of removing one surplus mark.
    pub delta_big_q: RatFunc,
    /// Value of a loop with one mark.
    pub kappa: RatFunc,
}

impl LoopRules {
    /// The generic rules over `ℚ(i)(s, Q)`.
    pub fn generic() -> Self {
        LoopRules { delta_q: delta_q(), delta_big_q: delta_big_q(), kappa: kappa() }
    }

    /// The rules with `Q` replaced by a nonzero value.
    pub fn with_q(q_value: &RatFunc) -> Result<Self, crate::qfield::FieldError> {
        let q = RatFunc::q_pow(1);
        let k = &q * &q_value.inv()? + q_value * &q.inv()?;
        Ok(LoopRules { delta_q: delta_q(), delta_big_q: delta(q_value)?, kappa: k })
    }

    fn loop_value(&self, marks: u32) -> RatFunc {
        match marks {
            0 => self.delta_q.clone(),
            k => &self.kappa * &pow(&self.delta_big_q, k - 1),
        }
    }
}

impl Default for LoopRules {
    fn default() -> Self {
        LoopRules::generic()
    }
}

fn pow(x: &RatFunc, k: u32) -> RatFunc {
    (0..k).fold(RatFunc::one(), |acc, _| &acc * x)
}

/// A planar matching with mark counts on its arcs.
///
/// Pairs are stored with the smaller endpoint first and sorted by that
/// endpoint (bottom points before top points), so equal diagrams are
/// structurally equal. The derived order is lexicographic on the pair list,
/// then on the marks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedDiagram {
    n_bottom: usize,
    n_top: usize,
    pairs: Vec<Pair>,
    marks: Vec<u32>,
}

impl MarkedDiagram {
    /// Build and validate a diagram from pairs with mark counts.
    pub fn new(n_bottom: usize, n_top: usize, arcs: Vec<(Endpoint, Endpoint, u32)>) -> Result<Self, DiagramError> {
        if (n_bottom + n_top) % 2 == 1 {
            return Err(DiagramError::Parity(n_bottom, n_top));
        }
        let d = MarkedDiagram::assemble(n_bottom, n_top, arcs);
        d.validate()?;
        Ok(d)
    }

    fn assemble(n_bottom: usize, n_top: usize, arcs: Vec<(Endpoint, Endpoint, u32)>) -> Self {
        let mut arcs: Vec<(Pair, u32)> =
            arcs.into_iter().map(|(a, b, m)| (if a <= b { (a, b) } else { (b, a) }, m)).collect();
        arcs.sort();
        let (pairs, marks) = arcs.into_iter().unzip();
        MarkedDiagram { n_bottom, n_top, pairs, marks }
    }

    fn validate(&self) -> Result<(), DiagramError> {
        let n = self.n_bottom + self.n_top;
        let mut seen = vec![false; n];
        for &(a, b) in &self.pairs {
            for e in [a, b] {
                let ok = match e {
                    Endpoint::Bottom(i) => (1..=self.n_bottom).contains(&i),
                    Endpoint::Top(j) => (1..=self.n_top).contains(&j),
                };
                if !ok {
                    return Err(DiagramError::NotMatching(format!("endpoint {e} out of range")));
                }
                let p = self.position(e);
                if seen[p] {
                    return Err(DiagramError::NotMatching(format!("endpoint {e} used twice")));
                }
                seen[p] = true;
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(DiagramError::NotMatching(format!("boundary point {} unmatched", self.endpoint_at(p))));
        }
        let intervals = self.intervals();
        let mut stack: Vec<usize> = Vec::new();
        let mut owner = vec![usize::MAX; n];
        for (k, &(lo, hi)) in intervals.iter().enumerate() {
            owner[lo] = k;
            owner[hi] = k;
        }
        for (p, &k) in owner.iter().enumerate() {
            if intervals[k].0 == p {
                stack.push(k);
            } else {
                let top = stack.pop().expect("closing an opened arc");
                if top != k {
                    let (a, b) = self.pairs[top];
                    let (c, d) = self.pairs[k];
                    return Err(DiagramError::Crossing(a, b, c, d));
                }
            }
        }
        let exposed = self.exposed_mask();
        for (k, &m) in self.marks.iter().enumerate() {
            if m > 0 && !exposed[k] {
                let (a, b) = self.pairs[k];
                return Err(DiagramError::MarkNotExposed(a, b));
            }
        }
        Ok(())
    }

    /// The identity diagram `n → n`.
    pub fn identity(n: usize) -> Self {
        MarkedDiagram::assemble(n, n, (1..=n).map(|i| (Endpoint::Bottom(i), Endpoint::Top(i), 0)).collect())
    }

    /// The empty diagram `0 → 0`.
    pub fn empty() -> Self {
        MarkedDiagram::identity(0)
    }

    /// The cup `U : 0 → 2`.
    pub fn cup() -> Self {
        MarkedDiagram::assemble(0, 2, vec![(Endpoint::Top(1), Endpoint::Top(2), 0)])
    }

    /// The cap `A : 2 → 0`.
    pub fn cap() -> Self {
        MarkedDiagram::assemble(2, 0, vec![(Endpoint::Bottom(1), Endpoint::Bottom(2), 0)])
    }

    /// The marked strand `C₀ : 1 → 1`.
    pub fn marked_strand() -> Self {
        MarkedDiagram::assemble(1, 1, vec![(Endpoint::Bottom(1), Endpoint::Top(1), 1)])
    }

    pub fn n_bottom(&self) -> usize {
        self.n_bottom
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// Pairs with their mark counts.
    pub fn arcs(&self) -> impl Iterator<Item = (Pair, u32)> + '_ {
        self.pairs.iter().copied().zip(self.marks.iter().copied())
    }

    pub fn marks_on(&self, pair: Pair) -> u32 {
        self.pairs.iter().position(|&p| p == pair).map_or(0, |k| self.marks[k])
    }

    pub fn total_marks(&self) -> u32 {
        self.marks.iter().sum()
    }

    /// Standard form: at most one mark per arc.
    pub fn is_standard(&self) -> bool {
        self.marks.iter().all(|&m| m <= 1)
    }

    /// Number of arcs joining a bottom point to a top point.
    pub fn through_strings(&self) -> usize {
        self.pairs.iter().filter(|(a, b)| is_through(*a, *b)).count()
    }

    /// True if some through string carries a mark.
    pub fn has_marked_through_string(&self) -> bool {
        self.arcs().any(|((a, b), m)| m > 0 && is_through(a, b))
    }

    /// The same matching with every mark removed.
    pub fn unmarked(&self) -> Self {
        MarkedDiagram { marks: vec![0; self.marks.len()], ..self.clone() }
    }

    /// The same diagram with the marks on through strings removed.
    pub fn without_through_marks(&self) -> Self {
        let marks = self.arcs().map(|((a, b), m)| if is_through(a, b) { 0 } else { m }).collect();
        MarkedDiagram { marks, ..self.clone() }
    }

    /// The same diagram with one extra mark on `pair` (which must bound the left region).
    pub fn with_mark(&self, pair: Pair) -> Result<Self, DiagramError> {
        let k = self
            .pairs
            .iter()
            .position(|&p| p == pair)
            .ok_or_else(|| DiagramError::NotMatching(format!("no arc {}-{}", pair.0, pair.1)))?;
        let mut d = self.clone();
        d.marks[k] += 1;
        d.validate()?;
        Ok(d)
    }

    /// Position on the boundary cycle read from the pole: bottom points left
    /// to right, then top points right to left.
    fn position(&self, e: Endpoint) -> usize {
        match e {
            Endpoint::Bottom(i) => i - 1,
            Endpoint::Top(j) => self.n_bottom + self.n_top - j,
        }
    }

    fn endpoint_at(&self, p: usize) -> Endpoint {
        if p < self.n_bottom {
            Endpoint::Bottom(p + 1)
        } else {
            Endpoint::Top(self.n_bottom + self.n_top - p)
        }
    }

    fn intervals(&self) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.position(a), self.position(b));
                (x.min(y), x.max(y))
            })
            .collect()
    }

    /// For each pair, whether it bounds the face touching the pole.
    ///
    /// Cutting the boundary cycle at the pole turns the planar matching into
    /// nested intervals; the face incident to the pole is bounded exactly by
    /// the intervals not enclosed by any other interval.
    fn exposed_mask(&self) -> Vec<bool> {
        let iv = self.intervals();
        let mut order: Vec<usize> = (0..iv.len()).collect();
        order.sort_by_key(|&k| iv[k].0);
        let mut mask = vec![false; iv.len()];
        let mut reach: Option<usize> = None;
        for k in order {
            let (lo, hi) = iv[k];
            if reach.is_none_or(|r| lo > r) {
                mask[k] = true;
                reach = Some(hi);
            }
        }
        mask
    }

    /// The arcs bounding the leftmost region.
    pub fn left_exposed_arcs(&self) -> Vec<Pair> {
        self.pairs.iter().zip(self.exposed_mask()).filter(|(_, e)| *e).map(|(p, _)| *p).collect()
    }

    /// Mirror in a horizontal line: top and bottom swap, marks are kept.
    pub fn reflect(&self) -> Self {
        let flip = |e: Endpoint| match e {
            Endpoint::Bottom(i) => Endpoint::Top(i),
            Endpoint::Top(j) => Endpoint::Bottom(j),
        };
        MarkedDiagram::assemble(
            self.n_top,
            self.n_bottom,
            self.arcs().map(|((a, b), m)| (flip(a), flip(b), m)).collect(),
        )
    }

    /// Swing the bottom edge up to the right of the top edge, giving a diagram
    /// `0 → r + s`; bottom point `b_k` becomes top point `t_{r+s+1−k}`.
    pub fn rotate_to_top(&self) -> Self {
        let n = self.n_bottom + self.n_top;
        let lift = |e: Endpoint| match e {
            Endpoint::Bottom(k) => Endpoint::Top(n + 1 - k),
            t => t,
        };
        MarkedDiagram::assemble(0, n, self.arcs().map(|((a, b), m)| (lift(a), lift(b), m)).collect())
    }

    /// Juxtapose `self` (on the pole side) with an arbitrary diagram on the right.
    pub fn juxtapose(&self, right: &MarkedDiagram) -> Result<Self, DiagramError> {
        let shift = |e: Endpoint| match e {
            Endpoint::Bottom(i) => Endpoint::Bottom(i + self.n_bottom),
            Endpoint::Top(j) => Endpoint::Top(j + self.n_top),
        };
        let mut arcs: Vec<(Endpoint, Endpoint, u32)> = self.arcs().map(|((a, b), m)| (a, b, m)).collect();
        arcs.extend(right.arcs().map(|((a, b), m)| (shift(a), shift(b), m)));
        let d = MarkedDiagram::assemble(self.n_bottom + right.n_bottom, self.n_top + right.n_top, arcs);
        d.validate()?;
        Ok(d)
    }

    /// `self ⊗ t` for an unmarked diagram `t`.
    pub fn tensor_right(&self, t: &MarkedDiagram) -> Result<Self, DiagramError> {
        if t.total_marks() > 0 {
            return Err(DiagramError::MarkedRightFactor);
        }
        self.juxtapose(t)
    }

    /// Stack `self` on top of `bottom` and reduce to standard form.
    pub fn compose(&self, bottom: &MarkedDiagram, rules: &LoopRules) -> Result<(RatFunc, MarkedDiagram), DiagramError> {
        if self.n_bottom != bottom.n_top {
            return Err(DiagramError::ShapeMismatch { top_bottom: self.n_bottom, bottom_top: bottom.n_top });
        }
        let (r, s, u) = (bottom.n_bottom, bottom.n_top, self.n_top);
        let lower = |e: Endpoint| match e {
            Endpoint::Bottom(i) => i - 1,
            Endpoint::Top(j) => r + j - 1,
        };
        let upper = |e: Endpoint| match e {
            Endpoint::Bottom(j) => r + j - 1,
            Endpoint::Top(k) => r + s + k - 1,
        };
        let mut edges: Vec<(usize, usize, u32)> = Vec::with_capacity(bottom.pairs.len() + self.pairs.len());
        edges.extend(bottom.arcs().map(|((a, b), m)| (lower(a), lower(b), m)));
        edges.extend(self.arcs().map(|((a, b), m)| (upper(a), upper(b), m)));
        let n_nodes = r + s + u;
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n_nodes];
        for (k, &(a, b, _)) in edges.iter().enumerate() {
            incident[a].push(k);
            incident[b].push(k);
        }
        let is_middle = |v: usize| v >= r && v < r + s;
        let mut used = vec![false; edges.len()];
        let walk = |start: usize, first: usize, used: &mut Vec<bool>| -> (usize, u32) {
            let (mut node, mut edge, mut marks) = (start, first, 0u32);
            loop {
                used[edge] = true;
                let (a, b, m) = edges[edge];
                marks += m;
                node = if a == node { b } else { a };
                if !is_middle(node) {
                    return (node, marks);
                }
                match incident[node].iter().copied().find(|&e| !used[e]) {
                    Some(e) => edge = e,
                    None => return (node, marks),
                }
            }
        };
        let outer = |v: usize| {
            if v < r {
                Endpoint::Bottom(v + 1)
            } else {
                Endpoint::Top(v - r - s + 1)
            }
        };
        let mut coeff = RatFunc::one();
        let mut arcs = Vec::new();
        for v in (0..r).chain(r + s..n_nodes) {
            let e = incident[v][0];
            if used[e] {
                continue;
            }
            let (w, marks) = walk(v, e, &mut used);
            if marks >= 2 {
                coeff = &coeff * &pow(&rules.delta_big_q, marks - 1);
            }
            arcs.push((outer(v), outer(w), marks.min(1)));
        }
        for e in 0..edges.len() {
            if !used[e] {
                let (_, marks) = walk(edges[e].0, e, &mut used);
                coeff = &coeff * &rules.loop_value(marks);
            }
        }
        let d = MarkedDiagram::assemble(r, u, arcs);
        debug_assert!(d.validate().is_ok(), "composite left standard form: {d}");
        Ok((coeff, d))
    }
}

fn is_through(a: Endpoint, b: Endpoint) -> bool {
    matches!((a, b), (Endpoint::Bottom(_), Endpoint::Top(_)) | (Endpoint::Top(_), Endpoint::Bottom(_)))
}

impl fmt::Display for MarkedDiagram {
    /// `r->s : b1-b2*, t1-t2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} :", self.n_bottom, self.n_top)?;
        for (k, ((a, b), m)) in self.arcs().enumerate() {
            let sep = if k == 0 { " " } else { ", " };
            write!(f, "{sep}{a}-{b}{}", "*".repeat(m as usize))?;
        }
        Ok(())
    }
}

fn parse_endpoint(s: &str) -> Result<Endpoint, DiagramError> {
    let bad = || DiagramError::Parse(format!("bad endpoint '{s}'"));
    let (kind, num) = s.split_at(1.min(s.len()));
    let n: usize = num.parse().map_err(|_| bad())?;
    match kind {
        "b" => Ok(Endpoint::Bottom(n)),
        "t" => Ok(Endpoint::Top(n)),
        _ => Err(bad()),
    }
}

impl FromStr for MarkedDiagram {
    type Err = DiagramError;

    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let (shape, body) = src.split_once(':').ok_or_else(|| DiagramError::Parse("missing ':'".into()))?;
        let (r, s) = shape.trim().split_once("->").ok_or_else(|| DiagramError::Parse("missing '->'".into()))?;
        let parse_n = |x: &str| x.trim().parse::<usize>().map_err(|_| DiagramError::Parse(format!("bad count '{x}'")));
        let (r, s) = (parse_n(r)?, parse_n(s)?);
        let mut arcs = Vec::new();
        for item in body.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let stars = item.len() - item.trim_end_matches('*').len();
            let (a, b) = item
                .trim_end_matches('*')
                .split_once('-')
                .ok_or_else(|| DiagramError::Parse(format!("bad pair '{item}'")))?;
            arcs.push((parse_endpoint(a.trim())?, parse_endpoint(b.trim())?, stars as u32));
        }
        MarkedDiagram::new(r, s, arcs)
    }
}

/// All noncrossing perfect matchings of `0..n` as interval lists.
fn noncrossing_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    type Matchings = Vec<Vec<(usize, usize)>>;
    fn rec(lo: usize, hi: usize, memo: &mut BTreeMap<(usize, usize), Matchings>) -> Matchings {
        if lo >= hi {
            return vec![Vec::new()];
        }
        if let Some(v) = memo.get(&(lo, hi)) {
            return v.clone();
        }
        let mut out = Vec::new();
        for partner in (lo + 1..hi).step_by(2) {
            let inner = rec(lo + 1, partner, memo);
            let outer = rec(partner + 1, hi, memo);
            for a in &inner {
                for b in &outer {
                    let mut m = Vec::with_capacity(a.len() + b.len() + 1);
                    m.push((lo, partner));
                    m.extend_from_slice(a);
                    m.extend_from_slice(b);
                    out.push(m);
                }
            }
        }
        memo.insert((lo, hi), out.clone());
        out
    }
    if n % 2 == 1 {
        return Vec::new();
    }
    rec(0, n, &mut BTreeMap::new())
}

/// Every standard marked diagram `r → s`, sorted.
pub fn enumerate(r: usize, s: usize) -> Result<Vec<MarkedDiagram>, DiagramError> {
    if (r + s) % 2 == 1 {
        return Err(DiagramError::Parity(r, s));
    }
    let n = r + s;
    let at = |p: usize| if p < r { Endpoint::Bottom(p + 1) } else { Endpoint::Top(n - p) };
    let mut out = Vec::new();
    for m in noncrossing_matchings(n) {
        let base = MarkedDiagram::assemble(r, s, m.iter().map(|&(a, b)| (at(a), at(b), 0)).collect());
        let exposed: Vec<usize> = base.exposed_mask().iter().enumerate().filter(|(_, e)| **e).map(|(k, _)| k).collect();
        for subset in 0u64..(1u64 << exposed.len()) {
            let mut d = base.clone();
            for (bit, &k) in exposed.iter().enumerate() {
                if subset >> bit & 1 == 1 {
                    d.marks[k] = 1;
                }
            }
            out.push(d);
        }
    }
    out.sort();
    Ok(out)
}

/// Catalan number `c(n)`.
pub fn catalan(n: u64) -> u64 {
    binomial(2 * n, n) / (n + 1)
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("diagram count disagreement at m={m}: recursion {recursion}, enumeration {enumeration}, binomial {binomial}")]
pub struct CountMismatch {
    pub m: u64,
    pub recursion: u64,
    pub enumeration: u64,
    pub binomial: u64,
}

/// Count marked diagrams `0 → 2m` three ways: by the recursion
/// `d(m) = 2 Σ_{i=1}^{m} c(i−1)·d(m−i)` (the arc through the first point
/// either is marked or not), by enumeration, and as `C(2m, m)`.
pub fn count_oracle(m: u64) -> Result<u64, CountMismatch> {
    let mut d = vec![1u64];
    for k in 1..=m {
        let v = 2 * (1..=k).map(|i| catalan(i - 1) * d[(k - i) as usize]).sum::<u64>();
        d.push(v);
    }
    let recursion = d[m as usize];
    let enumeration = enumerate(0, 2 * m as usize).expect("even").len() as u64;
    let binomial = binomial(2 * m, m);
    if recursion == enumeration && enumeration == binomial {
        Ok(binomial)
    } else {
        Err(CountMismatch { m, recursion, enumeration, binomial })
    }
}

/// A finite linear combination of diagrams of one shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramSum {
    n_bottom: usize,
    n_top: usize,
    terms: BTreeMap<MarkedDiagram, RatFunc>,
}

impl DiagramSum {
    pub fn zero(n_bottom: usize, n_top: usize) -> Self {
        DiagramSum { n_bottom, n_top, terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: MarkedDiagram) -> Self {
        DiagramSum::term(RatFunc::one(), d)
    }

    pub fn term(c: RatFunc, d: MarkedDiagram) -> Self {
        let mut s = DiagramSum::zero(d.n_bottom, d.n_top);
        s.add_term(c, d);
        s
    }

    pub fn n_bottom(&self) -> usize {
        self.n_bottom
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MarkedDiagram, &RatFunc)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &MarkedDiagram) -> RatFunc {
        self.terms.get(d).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn add_term(&mut self, c: RatFunc, d: MarkedDiagram) {
        assert_eq!((d.n_bottom, d.n_top), (self.n_bottom, self.n_top), "shape mismatch in DiagramSum");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&d) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&d);
                }
            }
            None => {
                self.terms.insert(d, c);
            }
        }
    }

    pub fn add(&self, o: &DiagramSum) -> DiagramSum {
        let mut out = self.clone();
        for (d, c) in &o.terms {
            out.add_term(c.clone(), d.clone());
        }
        out
    }

    pub fn sub(&self, o: &DiagramSum) -> DiagramSum {
        self.add(&o.scale(&-RatFunc::one()))
    }

    pub fn scale(&self, c: &RatFunc) -> DiagramSum {
        let mut out = DiagramSum::zero(self.n_bottom, self.n_top);
        for (d, a) in &self.terms {
            out.add_term(a * c, d.clone());
        }
        out
    }

    /// Stack `self` on top of `bottom`, bilinearly.
    pub fn compose(&self, bottom: &DiagramSum, rules: &LoopRules) -> Result<DiagramSum, DiagramError> {
        if self.n_bottom != bottom.n_top {
            return Err(DiagramError::ShapeMismatch { top_bottom: self.n_bottom, bottom_top: bottom.n_top });
        }
        let mut out = DiagramSum::zero(bottom.n_bottom, self.n_top);
        for (dt, ct) in &self.terms {
            for (db, cb) in &bottom.terms {
                let (f, d) = dt.compose(db, rules)?;
                out.add_term(&(ct * cb) * &f, d);
            }
        }
        Ok(out)
    }

    pub fn reflect(&self) -> DiagramSum {
        let mut out = DiagramSum::zero(self.n_top, self.n_bottom);
        for (d, c) in &self.terms {
            out.add_term(c.clone(), d.reflect());
        }
        out
    }

    /// Apply a coefficient map, e.g. a specialisation of `Q`.
    pub fn try_map_coefficients<E>(&self, f: impl Fn(&RatFunc) -> Result<RatFunc, E>) -> Result<DiagramSum, E> {
        let mut out = DiagramSum::zero(self.n_bottom, self.n_top);
        for (d, c) in &self.terms {
            out.add_term(f(c)?, d.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for DiagramSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (d, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*[{d}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dg(s: &str) -> MarkedDiagram {
        s.parse().unwrap()
    }

    fn fig2() -> MarkedDiagram {
        dg("4->6 : b1-t5, b2-b3, b4-t6, t1-t4, t2-t3")
    }

    #[test]
    fn text_format_round_trip() {
        let d = dg("2->2 : b1-b2*, t1-t2");
        assert_eq!(d.to_string(), "2->2 : b1-b2*, t1-t2");
        assert_eq!(MarkedDiagram::empty().to_string(), "0->0 :");
        assert_eq!(dg("0->0 :"), MarkedDiagram::empty());
        assert_eq!(dg("2->2 : t2-t1, b2-b1*"), d);
    }

    #[test]
    fn invalid_diagrams_are_rejected() {
        assert!(matches!("2->2 : b1-t2, b2-t1".parse::<MarkedDiagram>(), Err(DiagramError::Crossing(..))));
        assert!(matches!("2->2 : b1-t1, b2-t2*".parse::<MarkedDiagram>(), Err(DiagramError::MarkNotExposed(..))));
        assert!(matches!("1->2 : b1-t1".parse::<MarkedDiagram>(), Err(DiagramError::Parity(1, 2))));
    }

    #[test]
    fn left_exposure_examples() {
        use Endpoint::*;
        assert_eq!(MarkedDiagram::identity(1).left_exposed_arcs(), vec![(Bottom(1), Top(1))]);
        let cc = dg("2->2 : b1-b2, t1-t2");
        assert_eq!(cc.left_exposed_arcs(), vec![(Bottom(1), Bottom(2)), (Top(1), Top(2))]);
        assert_eq!(fig2().left_exposed_arcs(), vec![(Bottom(1), Top(5)), (Top(1), Top(4))]);
        assert_eq!(MarkedDiagram::identity(3).left_exposed_arcs(), vec![(Bottom(1), Top(1))]);
    }

    #[test]
    fn composition_examples() {
        let rules = LoopRules::generic();
        let (c, d) = MarkedDiagram::cap().compose(&MarkedDiagram::cup(), &rules).unwrap();
        assert_eq!((c, d), (delta_q(), MarkedDiagram::empty()));
        let c0 = MarkedDiagram::marked_strand();
        let (c, d) = c0.compose(&c0, &rules).unwrap();
        assert_eq!((c, d), (delta_big_q(), c0.clone()));
        let c1 = dg("2->2 : b1-b2, t1-t2");
        let c0_2 = c0.tensor_right(&MarkedDiagram::identity(1)).unwrap();
        let (a, x) = c0_2.compose(&c1, &rules).unwrap();
        let (b, y) = c1.compose(&x, &rules).unwrap();
        assert_eq!((&a * &b, y), (kappa(), c1));
    }

    #[test]
    fn loop_with_many_marks() {
        let rules = LoopRules::generic();
        let mcup = dg("0->2 : t1-t2*");
        let mcap = mcup.reflect();
        let (c, _) = mcap.compose(&mcup, &rules).unwrap();
        assert_eq!(c, &kappa() * &delta_big_q());
        let (c, d) = dg("1->1 : b1-t1**").compose(&MarkedDiagram::marked_strand(), &rules).unwrap();
        assert_eq!(c, &delta_big_q() * &delta_big_q());
        assert_eq!(d, MarkedDiagram::marked_strand());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let err = MarkedDiagram::cup().compose(&MarkedDiagram::cup(), &LoopRules::generic()).unwrap_err();
        assert!(matches!(err, DiagramError::ShapeMismatch { .. }));
    }

    #[test]
    fn tensor_examples() {
        let c0 = MarkedDiagram::marked_strand();
        assert_eq!(c0.tensor_right(&MarkedDiagram::identity(1)).unwrap(), dg("2->2 : b1-t1*, b2-t2"));
        assert_eq!(MarkedDiagram::empty().tensor_right(&MarkedDiagram::cup()).unwrap(), MarkedDiagram::cup());
        let mcup = dg("0->2 : t1-t2*");
        assert_eq!(mcup.tensor_right(&MarkedDiagram::cup()).unwrap(), dg("0->4 : t1-t2*, t3-t4"));
        assert_eq!(MarkedDiagram::cup().tensor_right(&mcup), Err(DiagramError::MarkedRightFactor));
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(MarkedDiagram::identity(3).reflect(), MarkedDiagram::identity(3));
        assert_eq!(MarkedDiagram::cup().reflect(), MarkedDiagram::cap());
        let fig3 = dg("4->6 : b1-t5**, b2-b3, b4-t6, t1-t4*, t2-t3");
        let mirror = fig3.reflect();
        assert_eq!((mirror.n_bottom(), mirror.n_top(), mirror.total_marks()), (6, 4, 3));
        assert_eq!(mirror.reflect(), fig3);
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(MarkedDiagram::identity(1).rotate_to_top(), MarkedDiagram::cup());
        assert_eq!(MarkedDiagram::marked_strand().rotate_to_top(), dg("0->2 : t1-t2*"));
        let fig3 = dg("4->6 : b1-t5**, b2-b3, b4-t6, t1-t4*, t2-t3");
        let rotated = fig3.rotate_to_top();
        assert_eq!(rotated.unmarked(), dg("0->10 : t1-t4, t2-t3, t5-t10, t6-t7, t8-t9"));
        assert_eq!(rotated.total_marks(), 3);
        assert_eq!(rotated.left_exposed_arcs().len(), 2);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate(1, 1).unwrap().len(), 2);
        assert_eq!(enumerate(0, 4).unwrap().len(), 6);
        assert_eq!(enumerate(0, 0).unwrap(), vec![MarkedDiagram::empty()]);
        assert_eq!(enumerate(1, 2), Err(DiagramError::Parity(1, 2)));
        let listed: Vec<String> = enumerate(1, 1).unwrap().iter().map(|d| d.to_string()).collect();
        assert_eq!(listed, vec!["1->1 : b1-t1", "1->1 : b1-t1*"]);
    }

    #[test]
    fn count_oracle_values() {
        assert_eq!(count_oracle(0), Ok(1));
        assert_eq!(count_oracle(2), Ok(6));
        assert_eq!(count_oracle(3), Ok(20));
    }

    #[test]
    fn with_mark_validates() {
        use Endpoint::*;
        let id2 = MarkedDiagram::identity(2);
        assert!(id2.with_mark((Bottom(1), Top(1))).is_ok());
        assert!(id2.with_mark((Bottom(2), Top(2))).is_err());
    }
}
