use tlbq::cellular::QVariant;
use tlbq::duality::{
    algebra_image_dimension, functoriality, rational_points, semisimplicity_experiment, semisimplicity_rule,
    truncation_stability, verify_affine_relations, verify_category_relations, FunctorContext, Generator,
};
use tlbq::qfield::RatFunc;
use tlbq::uqsl2::Operator;

#[test]
fn category_relations_small() {
    for ell in -1..=2 {
        for r in 1..=2 {
            let ctx = FunctorContext::with_default_depth(ell, r).unwrap();
            let c = verify_category_relations(&ctx).unwrap();
            assert!(c.passed(), "ell={ell} r={r}: {}", c.witness["failed"]);
        }
    }
}

#[test]
fn affine_relations_small() {
    for ell in -1..=2 {
        let ctx = FunctorContext::with_default_depth(ell, 2).unwrap();
        let c = verify_affine_relations(&ctx).unwrap();
        assert!(c.passed(), "ell={ell}: {}", c.witness["failed"]);
    }
}

#[test]
fn c0_sign_matters() {
    // with x₁ ↦ −i·q·L the quadratic (x₁ − Q)(x₁ + Q⁻¹) fails
    let ctx = FunctorContext::new(1, 1, 3).unwrap();
    let q = ctx.q_value(QVariant::Inverse);
    let id = Operator::identity(ctx.dim());
    let required: Vec<bool> = ctx.module.depth.iter().map(|&d| d == 0).collect();
    let zero = id.scale(&RatFunc::from_int(0));
    for (sign, expect) in [(1, true), (-1, false)] {
        let x1 = ctx.x1_image().scale(&RatFunc::from_int(sign));
        let quad = x1.sub(&id.scale(&q)).mul(&x1.add(&id.scale(&q.inv().unwrap())));
        assert_eq!(quad.agrees_with(&zero, &required, &ctx.module.labels).unwrap(), expect);
    }
}

#[test]
fn x_generators_follow_the_recursion() {
    let ctx = FunctorContext::new(0, 3, 4).unwrap();
    let x2 = ctx.generator_image(Generator::X(2)).unwrap();
    let s1 = ctx.generator_image(Generator::Sigma(1)).unwrap();
    let l = ctx.generator_image(Generator::L).unwrap();
    assert_eq!(x2, s1.mul(&l).mul(&s1));
    assert!(ctx.generator_image(Generator::X(4)).is_err());
}

#[test]
fn dimensions_up_to_two() {
    for ell in -1..=3 {
        for r in 1..=2 {
            let c = algebra_image_dimension(&FunctorContext::with_default_depth(ell, r).unwrap()).unwrap();
            assert!(c.passed(), "ell={ell} r={r}: {}", c.witness);
        }
    }
}

#[test]
fn functoriality_exact() {
    for ell in [-1, 1] {
        let ctx = FunctorContext::with_default_depth(ell, 2).unwrap();
        let c = functoriality(&ctx, 60, 7).unwrap();
        assert!(c.passed(), "ell={ell}: {}", c.witness);
    }
}

#[test]
fn semisimplicity_scan_small() {
    let c = semisimplicity_experiment(&[-1, 0, 1, 2], 3).unwrap();
    assert!(c.passed(), "{}", c.witness);
    assert!(!semisimplicity_rule(-1, 1));
    assert!(semisimplicity_rule(0, 1) && !semisimplicity_rule(0, 2));
}

#[test]
fn stability_under_deeper_truncation() {
    let c = truncation_stability(1, 2, 3).unwrap();
    assert!(c.passed(), "{}", c.witness);
}

#[test]
fn points_are_deterministic() {
    assert_eq!(rational_points(5, 3), rational_points(5, 3));
    assert_ne!(rational_points(5, 2)[0], rational_points(5, 2)[1]);
}
