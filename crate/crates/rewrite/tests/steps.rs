use ldf_rewrite::{common_reduct, ld_successors, replay, sigma_neighbors, trace_records, Rule};
use ldf_term::{enumerate_upto, parse, Term};
use proptest::prelude::*;

#[test]
fn ld_steps_grow_by_duplicated_subterm() {
    for t in enumerate_upto(6, true) {
        for s in ld_successors(&t) {
            let sub = t.at(&s.position).unwrap();
            let (a, _) = sub.children().unwrap();
            assert_eq!(s.after.leaves(), t.leaves() + a.leaves());
            assert_eq!(replay(&t, std::slice::from_ref(&s)), Some(s.after.clone()));
        }
    }
}

#[test]
fn sigma_steps_are_reversible() {
    for t in enumerate_upto(5, false) {
        for s in sigma_neighbors(&t) {
            let back = sigma_neighbors(&s.after);
            assert!(
                back.iter().any(|b| b.after == t && b.rule == s.rule.inverse() && b.position == s.position),
                "{} --{}--> {}",
                t,
                s.rule,
                s.after
            );
        }
    }
}

#[test]
fn trace_serializes() {
    let u = parse("x (x (x x))").unwrap();
    let v = parse("(x x) ((x x) (x x))").unwrap();
    let r = common_reduct(&u, &v, 500).unwrap();
    let json = serde_json::to_value(trace_records(&r.left)).unwrap();
    let arr = json.as_array().unwrap();
    assert_eq!(arr.len(), r.left.len());
    for rec in arr {
        assert_eq!(rec["rule"], "ld_expand");
        assert!(parse(rec["term"].as_str().unwrap()).is_ok());
    }
}

#[test]
fn local_confluence_small() {
    for t in enumerate_upto(5, true) {
        let succ = ld_successors(&t);
        for (i, a) in succ.iter().enumerate() {
            for b in &succ[i + 1..] {
                let r = common_reduct(&a.after, &b.after, 2_000).expect("confluent");
                assert_eq!(replay(&a.after, &r.left), Some(r.term.clone()));
                assert_eq!(replay(&b.after, &r.right), Some(r.term.clone()));
            }
        }
    }
}

fn arb_a_term() -> impl Strategy<Value = Term> {
    Just(Term::gen()).prop_recursive(4, 12, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Term::app(a, b))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn one_step_reducts_meet(t in arb_a_term()) {
        let succ = ld_successors(&t);
        if succ.len() >= 2 {
            let r = common_reduct(&succ[0].after, &succ[1].after, 5_000);
            prop_assert!(r.is_ok());
        }
    }

    #[test]
    fn every_ld_step_is_a_sigma_step(t in arb_a_term()) {
        let sig = sigma_neighbors(&t);
        for s in ld_successors(&t) {
            prop_assert!(sig.iter().any(|n| n.after == s.after && n.rule == Rule::LdExpand));
        }
    }
}
