//! Cellular structure of `TLB_n(q, Q)`: cell datum, cell modules, Gram
//! matrices, semisimplicity verdicts and intertwiner spaces.
//!
//! The poset is `Λ_B(n) = {t : |t| ≤ n, t ≡ n mod 2}`. For each `t` the set
//! `M(t)` consists of the monic diagrams `|t| → n` (every bottom point on a
//! through string) whose through strings carry no mark. The cellular basis is
//! `C^t_{S,T} = S ∘ m_t ∘ T*` where `m_t` is the identity on `|t|` strands
//! for `t ≥ 0` and `C₀ ⊗ I^{|t|−1}` for `t < 0`.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagrams::{binomial, enumerate, DiagramError, LoopRules, MarkedDiagram};
use crate::linalg::Mat;
use crate::qfield::{i_q_pow, FieldError, RatFunc};
use crate::tlb::{basis, generators, AlgebraElement};

#[derive(Debug, Error)]
pub enum CellularError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{t} is not a cell index for n = {n}")]
    NotACell { n: usize, t: i32 },
    #[error("the parameter Q must be a nonzero function of s alone, got {0}")]
    BadParameter(String),
    #[error("cellular basis map is not a bijection for n = {n}: {detail}")]
    Bijection { n: usize, detail: String },
}

/// `Λ_B(n)` in increasing order.
pub fn cell_indices(n: usize) -> Vec<i32> {
    let n = n as i32;
    (-n..=n).filter(|t| (n - t) % 2 == 0).collect()
}

fn check_cell(n: usize, t: i32) -> Result<(), CellularError> {
    if cell_indices(n).contains(&t) {
        Ok(())
    } else {
        Err(CellularError::NotACell { n, t })
    }
}

/// The middle element `m_t : |t| → |t|`.
pub fn middle(t: i32) -> MarkedDiagram {
    let k = t.unsigned_abs() as usize;
    if t < 0 {
        MarkedDiagram::marked_strand().tensor_right(&MarkedDiagram::identity(k - 1)).expect("identity carries no marks")
    } else {
        MarkedDiagram::identity(k)
    }
}

/// `M(t)` for `TLB_n`, sorted.
pub fn half_diagrams(n: usize, t: i32) -> Result<Vec<MarkedDiagram>, CellularError> {
    check_cell(n, t)?;
    let k = t.unsigned_abs() as usize;
    Ok(enumerate(k, n)?.into_iter().filter(|d| d.through_strings() == k && !d.has_marked_through_string()).collect())
}

/// The cell datum `(Λ_B(n), M, β)` of `TLB_n`.
#[derive(Clone, Debug)]
pub struct CellDatum {
    pub n: usize,
    pub lambda: Vec<i32>,
    pub m_sets: BTreeMap<i32, Vec<MarkedDiagram>>,
}

impl CellDatum {
    /// `β_t(S, T) = S ∘ m_t ∘ T*`.
    pub fn beta(&self, t: i32, s: &MarkedDiagram, u: &MarkedDiagram) -> Result<MarkedDiagram, CellularError> {
        beta(t, s, u)
    }
}

fn beta(t: i32, s: &MarkedDiagram, u: &MarkedDiagram) -> Result<MarkedDiagram, CellularError> {
    let rules = LoopRules::generic();
    let (c1, top) = s.compose(&middle(t), &rules)?;
    let (c2, d) = top.compose(&u.reflect(), &rules)?;
    debug_assert!(c1.is_one() && c2.is_one(), "no loops or repeated marks arise");
    Ok(d)
}

/// Build the cell datum and check that `β` is a bijection onto the diagram basis.
pub fn cell_datum(n: usize) -> Result<CellDatum, CellularError> {
    let lambda = cell_indices(n);
    let mut m_sets = BTreeMap::new();
    for &t in &lambda {
        m_sets.insert(t, half_diagrams(n, t)?);
    }
    let mut image = HashSet::new();
    for (&t, m) in &m_sets {
        for s in m {
            for u in m {
                let d = beta(t, s, u)?;
                if !image.insert(d.clone()) {
                    return Err(CellularError::Bijection { n, detail: format!("{d} is hit twice") });
                }
            }
        }
    }
    let full: HashSet<MarkedDiagram> = basis(n).into_iter().collect();
    if image != full {
        let detail = format!("image has {} diagrams, basis has {}", image.len(), full.len());
        return Err(CellularError::Bijection { n, detail });
    }
    Ok(CellDatum { n, lambda, m_sets })
}

/// The predicted size `C(|t|+2k, k)` of `M(t)` where `n = |t| + 2k`.
pub fn predicted_cell_dim(n: usize, t: i32) -> u64 {
    let k = (n - t.unsigned_abs() as usize) / 2;
    binomial(n as u64, k as u64)
}

/// The cell module `W_t(n)` with basis `M(t)`.
#[derive(Clone, Debug)]
pub struct CellModule {
    pub n: usize,
    pub t: i32,
    pub basis: Vec<MarkedDiagram>,
    pub rules: LoopRules,
    index: HashMap<MarkedDiagram, usize>,
}

impl CellModule {
    pub fn new(n: usize, t: i32, rules: LoopRules) -> Result<Self, CellularError> {
        let basis = half_diagrams(n, t)?;
        let index = basis.iter().enumerate().map(|(k, d)| (d.clone(), k)).collect();
        Ok(CellModule { n, t, basis, rules, index })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduce `d ∘ S` modulo diagrams of lower cells: returns the surviving
    /// basis element with its coefficient.
    fn reduce(&self, c: RatFunc, d: MarkedDiagram) -> Option<(RatFunc, usize)> {
        let k = self.t.unsigned_abs() as usize;
        if d.through_strings() < k {
            return None;
        }
        if d.has_marked_through_string() {
            if self.t > 0 {
                return None;
            }
            // the mark merges with the one in m_t
            let c = &c * &self.rules.delta_big_q;
            return Some((c, self.index[&d.without_through_marks()]));
        }
        Some((c, self.index[&d]))
    }

    /// Matrix of a single diagram `n → n`.
    pub fn diagram_matrix(&self, d: &MarkedDiagram) -> Result<Mat<RatFunc>, CellularError> {
        let dim = self.dim();
        let mut m = Mat::<RatFunc>::zeros(dim, dim);
        for (j, s) in self.basis.iter().enumerate() {
            let (c, r) = d.compose(s, &self.rules)?;
            if let Some((c, i)) = self.reduce(c, r) {
                let v = m.get(i, j).clone() + &c;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Matrix of an algebra element acting on `W_t(n)`.
    pub fn action(&self, a: &AlgebraElement) -> Result<Mat<RatFunc>, CellularError> {
        let dim = self.dim();
        let mut m = Mat::<RatFunc>::zeros(dim, dim);
        for (d, c) in a.value().terms() {
            m = m.add(&self.diagram_matrix(d)?.scale(c));
        }
        Ok(m)
    }

    /// Matrices of the generators `c₀, c₁, …, c_{n−1}`.
    pub fn generator_matrices(&self) -> Result<Vec<Mat<RatFunc>>, CellularError> {
        let g = generators(self.n);
        std::iter::once(&g.c0).chain(g.c.iter()).map(|a| self.action(a)).collect()
    }

    /// The Gram matrix of the cell form.
    pub fn gram(&self) -> Result<Mat<RatFunc>, CellularError> {
        let mid = middle(self.t);
        let mut g = Mat::<RatFunc>::zeros(self.dim(), self.dim());
        for (i, u) in self.basis.iter().enumerate() {
            let left = mid.compose(&u.reflect(), &self.rules)?;
            for (j, v) in self.basis.iter().enumerate() {
                let (c1, x) = left.1.compose(v, &self.rules)?;
                let (c2, y) = x.compose(&mid, &self.rules)?;
                if y == mid {
                    g.set(i, j, &(&left.0 * &c1) * &c2);
                }
            }
        }
        Ok(g)
    }
}

/// Gram matrix of `W_t(n)` over `ℚ(i)(s, Q)`.
pub fn gram(n: usize, t: i32) -> Result<Mat<RatFunc>, CellularError> {
    CellModule::new(n, t, LoopRules::generic())?.gram()
}

/// Gram matrix of `W_t(n)` with `Q` specialised to a function of `s`.
pub fn gram_at(n: usize, t: i32, q_value: &RatFunc) -> Result<Mat<RatFunc>, CellularError> {
    CellModule::new(n, t, rules_at(q_value)?)?.gram()
}

fn rules_at(q_value: &RatFunc) -> Result<LoopRules, CellularError> {
    if q_value.is_zero() || q_value.involves_q() {
        return Err(CellularError::BadParameter(q_value.to_string()));
    }
    Ok(LoopRules::with_q(q_value)?)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct GramDeterminant {
    pub t: i32,
    pub dim: usize,
    pub det: String,
    pub vanishes: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SemisimplicityVerdict {
    pub n: usize,
    pub q: String,
    pub semisimple: bool,
    pub gram_dets: Vec<GramDeterminant>,
}

/// Semisimplicity of `TLB_n(q, Q)` at a specialised `Q`: semisimple exactly
/// when every Gram determinant is nonzero.
pub fn is_semisimple(n: usize, q_value: &RatFunc) -> Result<SemisimplicityVerdict, CellularError> {
    let rules = rules_at(q_value)?;
    let gram_dets = cell_indices(n)
        .par_iter()
        .map(|&t| {
            let g = CellModule::new(n, t, rules.clone())?.gram()?;
            let det = g.det_bareiss();
            Ok(GramDeterminant { t, dim: g.rows(), vanishes: det.is_zero(), det: det.to_string() })
        })
        .collect::<Result<Vec<_>, CellularError>>()?;
    let semisimple = gram_dets.iter().all(|g| !g.vanishes);
    Ok(SemisimplicityVerdict { n, q: q_value.to_string(), semisimple, gram_dets })
}

/// The two specialisations of `Q` attached to a Verma highest weight `ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QVariant {
    /// `Q = i·q^{−(ℓ+1)}`
    Inverse,
    /// `Q = i·q^{ℓ+1}`
    Direct,
}

impl QVariant {
    pub fn value(self, ell: i32) -> RatFunc {
        match self {
            QVariant::Inverse => i_q_pow(-(ell + 1)),
            QVariant::Direct => i_q_pow(ell + 1),
        }
    }
}

/// Pairs `(s, t)` with a predicted nonzero map `W_s(r) → W_t(r)` at
/// `Q = i·q^{−(ℓ+1)}`.
pub fn predicted_homs(ell: i32, r: usize) -> Vec<(i32, i32)> {
    let lambda = cell_indices(r);
    let mut out = Vec::new();
    if ell == -1 {
        // Q = i: W_t ≅ W_{−t} for every t > 0
        for &t in lambda.iter().filter(|&&t| t > 0) {
            out.push((t, -t));
            out.push((-t, t));
        }
    }
    let target = ell + 1;
    for &t in &lambda {
        for &s in &lambda {
            if t >= 0 && s > t {
                // s = t + 2m, Q = i q^{−(t+m)}
                let m = (s - t) / 2;
                if t + m == target {
                    out.push((s, t));
                }
            }
            if t < 0 && s > 0 && t % 2 == 0 {
                // t = −2m, s = 4m, Q = i q^{m}
                let m = -t / 2;
                if s == 4 * m && m == -target {
                    out.push((s, t));
                }
            }
            if t < 0 && s > t.abs() {
                // s = |t| + 2m, Q = i q^{−m}
                let m = (s - t.abs()) / 2;
                if m == target {
                    out.push((s, t));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// [`predicted_homs`] for either specialisation. The algebras at the two
/// values coincide, with the cell labels `t` and `−t` exchanged.
pub fn predicted_homs_for(ell: i32, r: usize, variant: QVariant) -> Vec<(i32, i32)> {
    let base = predicted_homs(ell, r);
    match variant {
        QVariant::Inverse => base,
        QVariant::Direct => {
            let mut out: Vec<_> = base.into_iter().map(|(s, t)| (-s, -t)).collect();
            out.sort();
            out
        }
    }
}

/// Dimension of the space of module maps `W_from(n) → W_to(n)`, with `Q`
/// specialised (`Some`) or generic (`None`).
pub fn intertwiner_dim(n: usize, t_from: i32, t_to: i32, q_value: Option<&RatFunc>) -> Result<usize, CellularError> {
    let rules = match q_value {
        Some(v) => rules_at(v)?,
        None => LoopRules::generic(),
    };
    let from = CellModule::new(n, t_from, rules.clone())?;
    let to = CellModule::new(n, t_to, rules)?;
    let (df, dt) = (from.dim(), to.dim());
    let unknowns = dt * df;
    let mut rows = Vec::new();
    for (gf, gt) in from.generator_matrices()?.iter().zip(to.generator_matrices()?.iter()) {
        // (φ ρ_from(g) − ρ_to(g) φ)_{ij} = 0 with φ_{ab} at index a·df + b
        for i in 0..dt {
            for j in 0..df {
                let mut row = vec![RatFunc::zero(); unknowns];
                for b in 0..df {
                    row[i * df + b] = &row[i * df + b] + gf.get(b, j);
                }
                for a in 0..dt {
                    row[a * df + j] = &row[a * df + j] - gt.get(i, a);
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return Ok(unknowns);
    }
    Ok(unknowns - Mat::from_rows(rows).rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{delta_big_q, delta_q, kappa};

    #[test]
    fn cell_datum_examples() {
        let d1 = cell_datum(1).unwrap();
        assert_eq!(d1.lambda, vec![-1, 1]);
        assert_eq!(d1.m_sets[&1], vec![MarkedDiagram::identity(1)]);
        let id = MarkedDiagram::identity(1);
        assert_eq!(d1.beta(-1, &id, &id).unwrap(), MarkedDiagram::marked_strand());
        assert_eq!(d1.beta(1, &id, &id).unwrap(), id);
        let d2 = cell_datum(2).unwrap();
        assert_eq!(d2.lambda, vec![-2, 0, 2]);
        assert_eq!(d2.m_sets[&0].len(), 2);
        assert_eq!(cell_datum(3).unwrap().m_sets[&1].len(), 3);
    }

    #[test]
    fn gram_examples() {
        assert_eq!(gram(1, 1).unwrap(), Mat::identity(1));
        assert_eq!(*gram(1, -1).unwrap().get(0, 0), delta_big_q());
        let g = gram(2, 0).unwrap();
        let expect = Mat::from_rows(vec![vec![delta_q(), kappa()], vec![kappa(), &kappa() * &delta_big_q()]]);
        assert_eq!(g, expect);
    }

    #[test]
    fn semisimplicity_examples() {
        assert!(!is_semisimple(1, &RatFunc::i()).unwrap().semisimple);
        assert!(is_semisimple(1, &i_q_pow(-2)).unwrap().semisimple);
        assert!(!is_semisimple(3, &i_q_pow(-2)).unwrap().semisimple);
        assert!(is_semisimple(1, &RatFunc::zero()).is_err());
    }

    #[test]
    fn predicted_hom_examples() {
        assert_eq!(predicted_homs(0, 2), vec![(2, 0)]);
        assert!(predicted_homs(1, 2).is_empty());
        assert_eq!(predicted_homs(-1, 3), vec![(-3, 3), (-1, 1), (1, -1), (3, -3)]);
        assert_eq!(predicted_homs(0, 3), vec![(3, -1)]);
    }

    #[test]
    fn intertwiner_examples() {
        assert_eq!(intertwiner_dim(1, 1, -1, Some(&RatFunc::i())).unwrap(), 1);
        assert!(intertwiner_dim(2, 2, 0, Some(&i_q_pow(-1))).unwrap() >= 1);
        assert_eq!(intertwiner_dim(2, 2, 0, None).unwrap(), 0);
    }
}
