use proptest::prelude::*;
use tlbq::diagrams::{binomial, LoopRules};
use tlbq::qfield::RatFunc;
use tlbq::tlb::{basis, check_presentation, generators, hom_space, structure_constants, AlgebraElement};

fn element(n: usize) -> impl Strategy<Value = AlgebraElement> {
    let b = basis(n);
    let len = b.len();
    prop::collection::vec((0..len, -3i64..=3), 1..4).prop_map(move |terms| {
        terms.iter().fold(AlgebraElement::zero(n), |acc, &(k, c)| {
            acc.add(&AlgebraElement::from_diagram(b[k].clone()).scale(&RatFunc::from_int(c)))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(a in element(3), b in element(3), c in element(3)) {
        let rules = LoopRules::generic();
        let left = a.mul(&b, &rules).unwrap().mul(&c, &rules).unwrap();
        let right = a.mul(&b.mul(&c, &rules).unwrap(), &rules).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn star_is_an_anti_involution(a in element(3), b in element(3)) {
        let rules = LoopRules::generic();
        prop_assert_eq!(a.mul(&b, &rules).unwrap().star(), b.star().mul(&a.star(), &rules).unwrap());
        prop_assert_eq!(a.star().star(), a);
    }
}

#[test]
fn algebra_dimensions() {
    for n in 0..=5 {
        assert_eq!(basis(n).len() as u64, binomial(2 * n as u64, n as u64));
    }
}

#[test]
fn hom_dimensions_depend_only_on_total() {
    for total in (0..=8).step_by(2) {
        for r in 0..=total {
            assert_eq!(hom_space(r, total - r).unwrap().dim() as u64, binomial(total as u64, total as u64 / 2));
        }
    }
}

#[test]
fn generators_star_fixed() {
    let g = generators(3);
    assert_eq!(g.c0.star(), g.c0);
    for c in &g.c {
        assert_eq!(c.star(), *c);
    }
}

#[test]
fn presentation_for_four_strands() {
    let report = check_presentation(4).unwrap();
    assert!(report.passed(), "{:?}", report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
}

#[test]
fn tables_are_deterministic() {
    let rules = LoopRules::generic();
    let a = structure_constants(2, &rules).to_csv();
    assert_eq!(a, structure_constants(2, &rules).to_csv());
    assert_eq!(a.lines().count(), 7);
    assert!(a.starts_with("i\\j,0,1,2,3,4,5"));
}
