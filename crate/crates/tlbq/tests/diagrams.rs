use proptest::prelude::*;
use tlbq::diagrams::{binomial, count_oracle, enumerate, DiagramSum, LoopRules, MarkedDiagram};
use tlbq::qfield::{delta_big_q, kappa, RatFunc};

fn d(s: &str) -> MarkedDiagram {
    s.parse().unwrap()
}

#[test]
fn counts_depend_only_on_total() {
    for total in (0..=10).step_by(2) {
        for r in 0..=total {
            assert_eq!(enumerate(r, total - r).unwrap().len() as u64, binomial(total as u64, total as u64 / 2));
        }
    }
    for m in 0..=5 {
        assert_eq!(count_oracle(m).unwrap(), binomial(2 * m, m));
    }
    assert!(enumerate(2, 1).is_err());
}

#[test]
fn every_enumerated_diagram_round_trips() {
    for (r, s) in [(0, 4), (2, 2), (3, 3), (1, 5)] {
        let list = enumerate(r, s).unwrap();
        let mut sorted = list.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, list);
        for x in &list {
            assert_eq!(&d(&x.to_string()), x);
            assert_eq!(&x.reflect().reflect(), x);
        }
    }
}

#[test]
fn marked_loop_rules() {
    let rules = LoopRules::generic();
    let marked_cap = d("2->0 : b1-b2*");
    let marked_cup = d("0->2 : t1-t2*");
    let plain_cup = d("0->2 : t1-t2");
    let (c, e) = marked_cap.compose(&marked_cup, &rules).unwrap();
    assert_eq!(c, kappa() * &delta_big_q());
    assert_eq!(e, MarkedDiagram::empty());
    let (c, _) = marked_cap.compose(&plain_cup, &rules).unwrap();
    assert_eq!(c, kappa());
    // c0 c0 = δ_Q c0 on one strand
    let c0 = MarkedDiagram::marked_strand();
    let (c, x) = c0.compose(&c0, &rules).unwrap();
    assert_eq!((c, x), (delta_big_q(), c0));
}

#[test]
fn specialised_rules() {
    let rules = LoopRules::with_q(&RatFunc::i()).unwrap();
    let c0 = MarkedDiagram::marked_strand();
    let (c, _) = c0.compose(&c0, &rules).unwrap();
    assert_eq!(c, RatFunc::from_int(0));
}

fn diagram(n: usize) -> impl Strategy<Value = MarkedDiagram> {
    let all = enumerate(n, n).unwrap();
    (0..all.len()).prop_map(move |k| all[k].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(a in diagram(3), b in diagram(3), c in diagram(3)) {
        let rules = LoopRules::generic();
        let (a, b, c) = (DiagramSum::from_diagram(a), DiagramSum::from_diagram(b), DiagramSum::from_diagram(c));
        let left = a.compose(&b, &rules).unwrap().compose(&c, &rules).unwrap();
        let right = a.compose(&b.compose(&c, &rules).unwrap(), &rules).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn reflection_reverses_composition(a in diagram(3), b in diagram(3)) {
        let rules = LoopRules::generic();
        let (ca, x) = a.compose(&b, &rules).unwrap();
        let (cb, y) = b.reflect().compose(&a.reflect(), &rules).unwrap();
        prop_assert_eq!(ca, cb);
        prop_assert_eq!(x.reflect(), y);
    }
}
