use tlbq::qfield::RatFunc;
use tlbq::uqsl2::{
    chi, module_v1, place, rcheck, rmat, rmat_transpose, rtr_eigen_s_exponent, rtr_oracle, tensor, verma,
    verma_tensor_v, Operator, UqError, WeightModule,
};

fn apply(op: &Operator<RatFunc>, v: &[RatFunc]) -> Vec<RatFunc> {
    op.matrix.apply(v)
}

fn scaled(v: &[RatFunc], c: &RatFunc) -> Vec<RatFunc> {
    v.iter().map(|x| x.clone() * c).collect()
}

#[test]
fn rtr_closed_form_on_top_vectors() {
    let v = module_v1();
    let vv = tensor(&v, &v).unwrap();
    for ell in -1..=3 {
        for b in [&v, &vv] {
            let m = verma(ell, 4).unwrap();
            let x = rmat_transpose(&m, b).unwrap().mul(&rmat(&m, b).unwrap());
            for idx in 0..b.dim() {
                // column m₊ ⊗ b_idx
                assert!(x.valid[idx]);
                let oracle = rtr_oracle(ell, 4, b, idx).unwrap();
                assert_eq!(x.matrix.column(idx), oracle, "ell={ell} dim B={} idx={idx}", b.dim());
            }
        }
    }
}

#[test]
fn rtr_and_casimir_on_highest_weight_vectors() {
    let v = module_v1();
    for ell in -1..=3 {
        let mv = verma_tensor_v(ell, 3, 1).unwrap();
        let m = verma(ell, 3).unwrap();
        let rtr = rmat_transpose(&m, &v).unwrap().mul(&rmat(&m, &v).unwrap());
        let z = mv.casimir().unwrap();
        for w in [ell + 1, ell - 1] {
            let hw = mv.highest_weight_vectors(w);
            assert_eq!(hw.len(), 1, "ell={ell} weight={w}");
            let h = &hw[0];
            let eig = RatFunc::s_pow(rtr_eigen_s_exponent(w, ell, 1));
            assert_eq!(apply(&rtr, h), scaled(h, &eig), "R^T R, ell={ell} weight={w}");
            assert_eq!(apply(&z, h), scaled(h, &chi(w)), "Casimir, ell={ell} weight={w}");
        }
    }
}

#[test]
fn coproduct_is_coassociative() {
    let v = module_v1();
    let left = tensor(&tensor(&v, &v).unwrap(), &v).unwrap();
    let right = tensor(&v, &tensor(&v, &v).unwrap()).unwrap();
    for (a, b) in [(&left.e, &right.e), (&left.f, &right.f), (&left.k, &right.k)] {
        assert_eq!(a, b);
    }
    let m = verma(1, 3).unwrap();
    let ml = tensor(&tensor(&m, &v).unwrap(), &v).unwrap();
    let mr = tensor(&m, &tensor(&v, &v).unwrap()).unwrap();
    assert_eq!(ml.e, mr.e);
    assert_eq!(ml.f.matrix, mr.f.matrix);
    assert!(ml.check_relations().unwrap().iter().all(|c| c.passed));
}

fn commutes(g: &Operator<RatFunc>, module: &WeightModule) -> bool {
    let req = module.interior();
    [&module.e, &module.f, &module.k].iter().all(|x| g.mul(x).agrees_with(&x.mul(g), &req, &module.labels).unwrap())
}

#[test]
fn braiding_is_a_module_map() {
    let v = module_v1();
    let vv = tensor(&v, &v).unwrap();
    assert!(commutes(&rcheck(&v, &v).unwrap(), &vv));
    let mvv = verma_tensor_v(2, 4, 2).unwrap();
    let sigma = place(5, &rcheck(&v, &v).unwrap(), 1);
    assert!(commutes(&sigma, &mvv));
}

#[test]
fn yang_baxter_on_three_copies_of_v() {
    let v = module_v1();
    let r = rcheck(&v, &v).unwrap();
    let i2 = Operator::identity(2);
    let (a, b) = (r.kron(&i2), i2.kron(&r));
    assert_eq!(a.mul(&b).mul(&a), b.mul(&a).mul(&b));
}

#[test]
fn truncated_columns_are_reported() {
    let m = verma(0, 2).unwrap();
    let all = vec![true; 3];
    let err = m.f.agrees_with(&m.f, &all, &m.labels).unwrap_err();
    assert!(matches!(err, UqError::Truncation { column: 2, .. }));
    assert!(m.f.agrees_with(&m.f, &m.interior(), &m.labels).unwrap());
}
