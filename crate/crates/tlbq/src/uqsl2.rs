//! Based modules over `U_q(sl₂)`: the two-dimensional simple module `V(1)`,
//! depth-truncated Verma modules `M(ℓ)`, their tensor products, and the
//! R-matrix obtained from the truncated universal formula
//!
//! `R = Ξ · Σ_j (q − q⁻¹)^j / ⟨j⟩! · E^j ⊗ F^j`, with `Ξ(w₁ ⊗ w₂) = q^{k₁k₂/2} w₁ ⊗ w₂`.
//!
//! A Verma module truncated at depth `D` keeps the vectors `F^k m₊` for
//! `k ≤ D`. Applying `F` to `F^D m₊` leaves the model, so every operator
//! carries a column mask: a column is *valid* when it is the true image of
//! that basis vector. Products, sums and tensor products propagate the mask,
//! and comparisons refuse to look at invalid columns they are asked to check.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{Field, Mat};
use crate::qfield::{qfact, qnum, FieldError, GaussRat, RatFunc};

#[derive(Debug, Error, PartialEq)]
pub enum UqError {
    #[error("column {column} ({label}) depends on vectors beyond the truncation depth")]
    Truncation { column: usize, label: String },
    #[error("the R-matrix series does not terminate on {0}")]
    NonTerminating(String),
    #[error("only the leftmost tensor factor may be truncated")]
    TruncatedRightFactor,
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A linear map together with the set of columns it computes exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<F> {
    pub matrix: Mat<F>,
    pub valid: Vec<bool>,
}

fn column_is_zero<F: Field>(m: &Mat<F>, j: usize) -> bool {
    (0..m.rows()).all(|i| m.get(i, j).is_zero())
}

impl<F: Field> Operator<F> {
    /// An operator known exactly on every column.
    pub fn exact(matrix: Mat<F>) -> Self {
        let valid = vec![true; matrix.cols()];
        Operator { matrix, valid }
    }

    pub fn identity(n: usize) -> Self {
        Operator::exact(Mat::identity(n))
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn is_exact(&self) -> bool {
        self.valid.iter().all(|&v| v)
    }

    /// `self ∘ o`. A column is valid when `o`'s column is valid and only
    /// touches valid columns of `self`.
    pub fn mul(&self, o: &Self) -> Self {
        let matrix = self.matrix.mul(&o.matrix);
        let valid = (0..o.cols())
            .map(|j| o.valid[j] && (0..o.rows()).all(|k| o.matrix.get(k, j).is_zero() || self.valid[k]))
            .collect();
        Operator { matrix, valid }
    }

    /// `self ⊗ o`. A zero factor column makes the product column exact.
    pub fn kron(&self, o: &Self) -> Self {
        let matrix = self.matrix.kron(&o.matrix);
        let mut valid = Vec::with_capacity(matrix.cols());
        let zero_a: Vec<bool> = (0..self.cols()).map(|j| column_is_zero(&self.matrix, j)).collect();
        let zero_b: Vec<bool> = (0..o.cols()).map(|j| column_is_zero(&o.matrix, j)).collect();
        for (&va, &za) in self.valid.iter().zip(&zero_a) {
            for (&vb, &zb) in o.valid.iter().zip(&zero_b) {
                valid.push((va && vb) || (va && za) || (vb && zb));
            }
        }
        Operator { matrix, valid }
    }

    pub fn add(&self, o: &Self) -> Self {
        let valid = self.valid.iter().zip(&o.valid).map(|(a, b)| *a && *b).collect();
        Operator { matrix: self.matrix.add(&o.matrix), valid }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let valid = self.valid.iter().zip(&o.valid).map(|(a, b)| *a && *b).collect();
        Operator { matrix: self.matrix.sub(&o.matrix), valid }
    }

    pub fn scale(&self, c: &F) -> Self {
        Operator { matrix: self.matrix.scale(c), valid: self.valid.clone() }
    }

    /// `true` when the operator is exactly zero.
    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.matrix.is_zero()
    }

    /// Compare with `o` on every column valid in both. Each column flagged in
    /// `required` must be valid on both sides, otherwise a truncation error
    /// names it.
    pub fn agrees_with(&self, o: &Self, required: &[bool], labels: &[String]) -> Result<bool, UqError> {
        assert_eq!((self.rows(), self.cols()), (o.rows(), o.cols()), "shape mismatch in comparison");
        assert_eq!(required.len(), self.cols(), "required mask has the wrong length");
        for (j, &needed) in required.iter().enumerate() {
            let both = self.valid[j] && o.valid[j];
            if needed && !both {
                let label = labels.get(j).cloned().unwrap_or_else(|| j.to_string());
                return Err(UqError::Truncation { column: j, label });
            }
            if both && (0..self.rows()).any(|i| self.matrix.get(i, j) != o.matrix.get(i, j)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The valid columns listed in `cols`, as a dense block.
    pub fn columns(&self, cols: &[usize]) -> Result<Mat<F>, UqError> {
        if let Some(&j) = cols.iter().find(|&&j| !self.valid[j]) {
            return Err(UqError::Truncation { column: j, label: j.to_string() });
        }
        Ok(Mat::from_fn(self.rows(), cols.len(), |i, k| self.matrix.get(i, cols[k]).clone()))
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Operator<G>, E> {
        Ok(Operator { matrix: self.matrix.try_map(f)?, valid: self.valid.clone() })
    }
}

impl Operator<RatFunc> {
    /// Evaluate every entry at `s = s0`.
    pub fn eval_at(&self, s0: &GaussRat) -> Result<Operator<GaussRat>, UqError> {
        Ok(self.try_map(|x| x.eval_point(s0, &GaussRat::one()))?)
    }
}

/// A weight module given by explicit matrices in a weight basis.
#[derive(Clone, Debug)]
pub struct WeightModule {
    pub labels: Vec<String>,
    /// `K v = q^{weight} v`.
    pub weights: Vec<i32>,
    /// Depth of the Verma component (`k` in `F^k m₊`), zero for `V`-only vectors.
    pub depth: Vec<usize>,
    pub e: Operator<RatFunc>,
    pub f: Operator<RatFunc>,
    pub k: Operator<RatFunc>,
    pub k_inv: Operator<RatFunc>,
    /// The truncation depth of the Verma factor, if any.
    pub truncation: Option<usize>,
}

fn diagonal_k(weights: &[i32], sign: i32) -> Operator<RatFunc> {
    let n = weights.len();
    Operator::exact(Mat::from_fn(n, n, |i, j| if i == j { RatFunc::q_pow(sign * weights[i]) } else { RatFunc::zero() }))
}

/// `V(1)` with basis `v₁, v₋₁`.
pub fn module_v1() -> WeightModule {
    let z = RatFunc::zero;
    let o = RatFunc::one;
    let weights = vec![1, -1];
    WeightModule {
        labels: vec!["v1".into(), "v-1".into()],
        depth: vec![0, 0],
        e: Operator::exact(Mat::from_rows(vec![vec![z(), o()], vec![z(), z()]])),
        f: Operator::exact(Mat::from_rows(vec![vec![z(), z()], vec![o(), z()]])),
        k: diagonal_k(&weights, 1),
        k_inv: diagonal_k(&weights, -1),
        weights,
        truncation: None,
    }
}

/// The coefficients `c_k` with `E F^k m₊ = c_k F^{k−1} m₊`, from
/// `EF − FE = (K − K⁻¹)/(q − q⁻¹)`: `c_k = c_{k−1} + [ℓ − 2k + 2]`.
pub fn verma_e_coefficients(ell: i32, depth: usize) -> Vec<RatFunc> {
    let mut c = vec![RatFunc::zero()];
    for k in 1..=depth as i32 {
        let prev = c.last().expect("nonempty").clone();
        c.push(prev + &qnum(ell - 2 * k + 2));
    }
    c
}

/// The Verma module `M(ℓ)` truncated at depth `D`: basis `F^k m₊`, `0 ≤ k ≤ D`.
pub fn verma(ell: i32, depth: usize) -> Result<WeightModule, UqError> {
    if depth < 1 {
        return Err(UqError::Argument("truncation depth must be at least 1".into()));
    }
    let n = depth + 1;
    let c = verma_e_coefficients(ell, depth);
    let weights: Vec<i32> = (0..n as i32).map(|k| ell - 2 * k).collect();
    let e = Operator::exact(Mat::from_fn(n, n, |i, j| if j == i + 1 { c[j].clone() } else { RatFunc::zero() }));
    let mut f = Operator::exact(Mat::from_fn(n, n, |i, j| if i == j + 1 { RatFunc::one() } else { RatFunc::zero() }));
    f.valid[depth] = false;
    let labels = (0..n)
        .map(|k| match k {
            0 => "m+".to_string(),
            1 => "Fm+".to_string(),
            _ => format!("F^{k}m+"),
        })
        .collect();
    Ok(WeightModule {
        labels,
        depth: (0..n).collect(),
        e,
        f,
        k: diagonal_k(&weights, 1),
        k_inv: diagonal_k(&weights, -1),
        weights,
        truncation: Some(depth),
    })
}

/// `A ⊗ B` with `Δ(E) = E⊗K + 1⊗E`, `Δ(F) = F⊗1 + K⁻¹⊗F`, `Δ(K) = K⊗K`.
pub fn tensor(a: &WeightModule, b: &WeightModule) -> Result<WeightModule, UqError> {
    if b.truncation.is_some() {
        return Err(UqError::TruncatedRightFactor);
    }
    let ia = Operator::identity(a.dim());
    let ib = Operator::identity(b.dim());
    let mut labels = Vec::with_capacity(a.dim() * b.dim());
    let mut weights = Vec::with_capacity(a.dim() * b.dim());
    let mut depth = Vec::with_capacity(a.dim() * b.dim());
    for x in 0..a.dim() {
        for y in 0..b.dim() {
            labels.push(format!("{}⊗{}", a.labels[x], b.labels[y]));
            weights.push(a.weights[x] + b.weights[y]);
            depth.push(a.depth[x] + b.depth[y]);
        }
    }
    Ok(WeightModule {
        e: a.e.kron(&b.k).add(&ia.kron(&b.e)),
        f: a.f.kron(&ib).add(&a.k_inv.kron(&b.f)),
        k: a.k.kron(&b.k),
        k_inv: a.k_inv.kron(&b.k_inv),
        labels,
        weights,
        depth,
        truncation: a.truncation,
    })
}

/// Left-associated tensor product of several modules.
pub fn tensor_all(factors: &[&WeightModule]) -> Result<WeightModule, UqError> {
    let (first, rest) = factors.split_first().ok_or_else(|| UqError::Argument("empty tensor product".into()))?;
    rest.iter().try_fold((*first).clone(), |acc, m| tensor(&acc, m))
}

/// `M(ℓ; D) ⊗ V^{⊗r}`.
pub fn verma_tensor_v(ell: i32, depth: usize, r: usize) -> Result<WeightModule, UqError> {
    let v = module_v1();
    let mut m = verma(ell, depth)?;
    for _ in 0..r {
        m = tensor(&m, &v)?;
    }
    Ok(m)
}

/// One relation of the quantum group checked on a module.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleCheck {
    pub relation: &'static str,
    pub passed: bool,
}

impl WeightModule {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Columns that must be exact in any comparison: every vector strictly
    /// inside the truncation boundary.
    pub fn interior(&self) -> Vec<bool> {
        match self.truncation {
            None => vec![true; self.dim()],
            Some(d) => self.depth.iter().map(|&k| k < d).collect(),
        }
    }

    /// Columns `m₊ ⊗ …` of Verma depth zero.
    pub fn top_columns(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.depth[j] == 0).collect()
    }

    pub fn identity(&self) -> Operator<RatFunc> {
        Operator::identity(self.dim())
    }

    /// `KEK⁻¹ = q²E`, `KFK⁻¹ = q⁻²F`, `KK⁻¹ = 1` and
    /// `EF − FE = (K − K⁻¹)/(q − q⁻¹)` on the interior.
    pub fn check_relations(&self) -> Result<Vec<ModuleCheck>, UqError> {
        let req = self.interior();
        let q2 = RatFunc::q_pow(2);
        let qm2 = RatFunc::q_pow(-2);
        let one = self.identity();
        let kek = self.k.mul(&self.e).mul(&self.k_inv);
        let kfk = self.k.mul(&self.f).mul(&self.k_inv);
        let comm = self.e.mul(&self.f).sub(&self.f.mul(&self.e));
        let denom = (RatFunc::q_pow(1) - &RatFunc::q_pow(-1)).inv()?;
        let rhs = self.k.sub(&self.k_inv).scale(&denom);
        Ok(vec![
            ModuleCheck {
                relation: "K K^-1 = 1",
                passed: self.k.mul(&self.k_inv).agrees_with(&one, &req, &self.labels)?,
            },
            ModuleCheck {
                relation: "K E K^-1 = q^2 E",
                passed: kek.agrees_with(&self.e.scale(&q2), &req, &self.labels)?,
            },
            ModuleCheck {
                relation: "K F K^-1 = q^-2 F",
                passed: kfk.agrees_with(&self.f.scale(&qm2), &req, &self.labels)?,
            },
            ModuleCheck {
                relation: "EF - FE = (K - K^-1)/(q - q^-1)",
                passed: comm.agrees_with(&rhs, &req, &self.labels)?,
            },
        ])
    }

    /// The Casimir `z = FE + (qK + q⁻¹K⁻¹)/(q − q⁻¹)²`.
    pub fn casimir(&self) -> Result<Operator<RatFunc>, UqError> {
        let d = (RatFunc::q_pow(1) - &RatFunc::q_pow(-1)).pow(-2)?;
        let part = self.k.scale(&RatFunc::q_pow(1)).add(&self.k_inv.scale(&RatFunc::q_pow(-1))).scale(&d);
        Ok(self.f.mul(&self.e).add(&part))
    }

    /// Vectors of the given weight killed by `E` (a basis over `ℚ(i)(s)`).
    pub fn highest_weight_vectors(&self, weight: i32) -> Vec<Vec<RatFunc>> {
        let cols: Vec<usize> = (0..self.dim()).filter(|&j| self.weights[j] == weight).collect();
        if cols.is_empty() {
            return Vec::new();
        }
        let block = Mat::from_fn(self.dim(), cols.len(), |i, k| self.e.matrix.get(i, cols[k]).clone());
        block
            .nullspace()
            .into_iter()
            .map(|x| {
                let mut v = vec![RatFunc::zero(); self.dim()];
                for (k, &j) in cols.iter().enumerate() {
                    v[j] = x[k].clone();
                }
                v
            })
            .collect()
    }
}

/// `χ(ℓ) = (q^{ℓ+1} + q^{−ℓ−1})/(q − q⁻¹)²`, the Casimir eigenvalue.
pub fn chi(ell: i32) -> RatFunc {
    let num = RatFunc::q_pow(ell + 1) + &RatFunc::q_pow(-ell - 1);
    let den = RatFunc::q_pow(1) - &RatFunc::q_pow(-1);
    num * &den.pow(-2).expect("q - q^-1 is nonzero")
}

/// Drinfeld's central element on highest weight `ℓ`: `q^{−ℓ(ℓ+2)/2} = s^{−ℓ(ℓ+2)}`.
pub fn drinfeld_scalar(ell: i32) -> RatFunc {
    RatFunc::s_pow(-ell * (ell + 2))
}

/// Exponent (in powers of `q^{1/2}`, i.e. of `s`) of `R^T R` on a highest
/// weight submodule of weight `ℓ` inside `M(ℓ₁) ⊗ M(ℓ₂)`.
pub fn rtr_eigen_s_exponent(ell: i32, ell1: i32, ell2: i32) -> i32 {
    ell * (ell + 2) - ell1 * (ell1 + 2) - ell2 * (ell2 + 2)
}

/// The permutation `P : A ⊗ B → B ⊗ A`.
pub fn permutation(dim_a: usize, dim_b: usize) -> Operator<RatFunc> {
    let n = dim_a * dim_b;
    let mut m = Mat::<RatFunc>::zeros(n, n);
    for x in 0..dim_a {
        for y in 0..dim_b {
            m.set(y * dim_a + x, x * dim_b + y, RatFunc::one());
        }
    }
    Operator::exact(m)
}

fn xi(a: &WeightModule, b: &WeightModule, sign: i32) -> Operator<RatFunc> {
    let n = a.dim() * b.dim();
    let mut m = Mat::<RatFunc>::zeros(n, n);
    for x in 0..a.dim() {
        for y in 0..b.dim() {
            let idx = x * b.dim() + y;
            m.set(idx, idx, RatFunc::s_pow(sign * a.weights[x] * b.weights[y]));
        }
    }
    Operator::exact(m)
}

fn r_series(
    a: &WeightModule,
    b: &WeightModule,
    left: &Operator<RatFunc>,
    right: &Operator<RatFunc>,
) -> Result<Operator<RatFunc>, UqError> {
    let n = a.dim() * b.dim();
    let h = RatFunc::q_pow(1) - &RatFunc::q_pow(-1);
    let mut sum = Operator::identity(n);
    let mut lp = Operator::identity(a.dim());
    let mut rp = Operator::identity(b.dim());
    let bound = a.dim().max(b.dim()) + 1;
    for j in 1..=bound {
        lp = left.mul(&lp);
        rp = right.mul(&rp);
        let term = lp.kron(&rp);
        if term.is_exact_zero() {
            return Ok(xi(a, b, 1).mul(&sum));
        }
        let coeff = h.pow(j as i32)? * &qfact(j as u32).inv()?;
        sum = sum.add(&term.scale(&coeff));
    }
    Err(UqError::NonTerminating(format!("{} x {}", a.dim(), b.dim())))
}

/// `R` on `A ⊗ B`.
pub fn rmat(a: &WeightModule, b: &WeightModule) -> Result<Operator<RatFunc>, UqError> {
    r_series(a, b, &a.e, &b.f)
}

/// `R^T = Ξ Σ_j (q − q⁻¹)^j/⟨j⟩! F^j ⊗ E^j` on `A ⊗ B`.
pub fn rmat_transpose(a: &WeightModule, b: &WeightModule) -> Result<Operator<RatFunc>, UqError> {
    r_series(a, b, &a.f, &b.e)
}

/// `Ř = P ∘ R : A ⊗ B → B ⊗ A`.
pub fn rcheck(a: &WeightModule, b: &WeightModule) -> Result<Operator<RatFunc>, UqError> {
    Ok(permutation(a.dim(), b.dim()).mul(&rmat(a, b)?))
}

/// `R⁻¹` on `A ⊗ B`: `R = Ξ(1 + N)` with `N` nilpotent, so
/// `R⁻¹ = (Σ_k (−N)^k) Ξ⁻¹` is a finite sum and keeps the truncation mask.
pub fn rmat_inverse(a: &WeightModule, b: &WeightModule) -> Result<Operator<RatFunc>, UqError> {
    let n = a.dim() * b.dim();
    let xi_inv = xi(a, b, -1);
    let unipotent = xi_inv.mul(&rmat(a, b)?);
    let minus_n = Operator::identity(n).sub(&unipotent);
    let mut sum = Operator::identity(n);
    let mut power = Operator::identity(n);
    for _ in 0..=n {
        power = minus_n.mul(&power);
        sum = sum.add(&power);
        // higher powers vanish on every column that is still valid in the sum
        if power.matrix.is_zero() && power.valid.iter().zip(&sum.valid).all(|(p, s)| *p || !*s) {
            return Ok(sum.mul(&xi_inv));
        }
    }
    Err(UqError::NonTerminating(format!("inverse on {} x {}", a.dim(), b.dim())))
}

/// `Ř_{A,B}⁻¹ = R_{A,B}⁻¹ ∘ P_{B,A} : B ⊗ A → A ⊗ B`.
pub fn rcheck_inverse(a: &WeightModule, b: &WeightModule) -> Result<Operator<RatFunc>, UqError> {
    Ok(rmat_inverse(a, b)?.mul(&permutation(b.dim(), a.dim())))
}

/// `Č : 1 → V ⊗ V`, `1 ↦ −q v₁⊗v₋₁ + v₋₁⊗v₁`.
pub fn cup() -> Operator<RatFunc> {
    let z = RatFunc::zero;
    Operator::exact(Mat::from_rows(vec![vec![z()], vec![-RatFunc::q_pow(1)], vec![RatFunc::one()], vec![z()]]))
}

/// `Ĉ : V ⊗ V → 1` from the form `(v₁, v₋₁) = 1`, `(v₋₁, v₁) = −q⁻¹`.
pub fn cap() -> Operator<RatFunc> {
    let z = RatFunc::zero;
    Operator::exact(Mat::from_rows(vec![vec![z(), RatFunc::one(), -RatFunc::q_pow(-1), z()]]))
}

/// The closed form for `R^T R (m₊ ⊗ v)` on `M(ℓ; D) ⊗ B`, where `v` is the
/// basis vector `v_index` of `B`:
/// `Σ_k (q − q⁻¹)^k q^{jℓ + k(ℓ − j − 2k)}/⟨k⟩! · F^k m₊ ⊗ E^k v`.
pub fn rtr_oracle(ell: i32, depth: usize, b: &WeightModule, v_index: usize) -> Result<Vec<RatFunc>, UqError> {
    let j = b.weights[v_index];
    let h = RatFunc::q_pow(1) - &RatFunc::q_pow(-1);
    let mut out = vec![RatFunc::zero(); (depth + 1) * b.dim()];
    let mut ekv = vec![RatFunc::zero(); b.dim()];
    ekv[v_index] = RatFunc::one();
    for k in 0..=depth as i32 {
        if ekv.iter().all(|x| x.is_zero()) {
            return Ok(out);
        }
        let coeff = h.pow(k)? * &RatFunc::q_pow(j * ell + k * (ell - j - 2 * k)) * &qfact(k as u32).inv()?;
        for (y, x) in ekv.iter().enumerate() {
            if !x.is_zero() {
                let idx = k as usize * b.dim() + y;
                out[idx] = out[idx].clone() + &(coeff.clone() * x);
            }
        }
        ekv = b.e.matrix.apply(&ekv);
    }
    if ekv.iter().all(|x| x.is_zero()) {
        Ok(out)
    } else {
        Err(UqError::Truncation { column: v_index, label: b.labels[v_index].clone() })
    }
}

/// Place `op` (acting on a block of dimension `op.rows()`) between identities.
pub fn place<F: Field>(left: usize, op: &Operator<F>, right: usize) -> Operator<F> {
    Operator::identity(left).kron(op).kron(&Operator::identity(right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::delta_q;

    #[test]
    fn v1_matrices() {
        let v = module_v1();
        assert_eq!(*v.k.matrix.get(0, 0), RatFunc::q_pow(1));
        assert_eq!(v.e.matrix.apply(&[RatFunc::zero(), RatFunc::one()]), vec![RatFunc::one(), RatFunc::zero()]);
        assert!(v.e.matrix.apply(&[RatFunc::one(), RatFunc::zero()]).iter().all(|x| x.is_zero()));
        assert_eq!(v.f.matrix.apply(&[RatFunc::one(), RatFunc::zero()]), vec![RatFunc::zero(), RatFunc::one()]);
        assert!(v.check_relations().unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn verma_basics() {
        for ell in -1..=3 {
            let m = verma(ell, 4).unwrap();
            assert!(m.check_relations().unwrap().iter().all(|c| c.passed), "ell={ell}");
            let z = m.casimir().unwrap();
            assert_eq!(*z.matrix.get(0, 0), chi(ell));
            // E F m₊ = [ℓ] m₊
            assert_eq!(*m.e.mul(&m.f).matrix.get(0, 0), qnum(ell));
        }
        assert!(verma(0, 0).is_err());
        assert!(!verma(0, 3).unwrap().f.valid[3]);
    }

    #[test]
    fn tensor_and_cup() {
        let v = module_v1();
        let vv = tensor(&v, &v).unwrap();
        let c0 = cup().matrix.column(0);
        assert!(vv.e.matrix.apply(&c0).iter().all(|x| x.is_zero()));
        let loop_value = cap().mul(&cup());
        assert_eq!(*loop_value.matrix.get(0, 0), delta_q());
        let m = verma(2, 3).unwrap();
        let mv = tensor(&m, &v).unwrap();
        assert_eq!(*mv.k.matrix.get(0, 0), RatFunc::q_pow(3));
        assert_eq!(tensor(&v, &m).unwrap_err(), UqError::TruncatedRightFactor);
    }

    #[test]
    fn normal_r() {
        let v = module_v1();
        let r = rcheck(&v, &v).unwrap().scale(&RatFunc::s_pow(1));
        let expect = Operator::identity(4).scale(&RatFunc::q_pow(1)).add(&cup().mul(&cap()));
        assert_eq!(r, expect);
    }

    #[test]
    fn inverses() {
        let v = module_v1();
        let m = verma(1, 3).unwrap();
        let id4 = Operator::identity(4);
        assert_eq!(rcheck(&v, &v).unwrap().mul(&rcheck_inverse(&v, &v).unwrap()), id4);
        let all = vec![true; 8];
        let labels = vec![String::new(); 8];
        let x = rcheck_inverse(&m, &v).unwrap().mul(&rcheck(&m, &v).unwrap());
        assert!(x.agrees_with(&Operator::identity(8), &all, &labels).unwrap());
        let y = rcheck_inverse(&v, &m).unwrap().mul(&rcheck(&v, &m).unwrap());
        let interior: Vec<bool> = (0..8).map(|j| j % 4 != 3).collect();
        assert!(y.agrees_with(&Operator::identity(8), &interior, &labels).unwrap());
    }

    #[test]
    fn rtr_on_lowest_vector() {
        let ell = -1;
        let m = verma(ell, 3).unwrap();
        let v = module_v1();
        let x = rmat_transpose(&m, &v).unwrap().mul(&rmat(&m, &v).unwrap());
        let col = x.matrix.column(1);
        let h = RatFunc::q_pow(1) - &RatFunc::q_pow(-1);
        let mut expect = vec![RatFunc::zero(); 8];
        expect[1] = RatFunc::q_pow(1);
        expect[2] = RatFunc::q_pow(-1) * &h;
        assert_eq!(col, expect);
        assert_eq!(rtr_oracle(ell, 3, &v, 1).unwrap(), expect);
    }
}
