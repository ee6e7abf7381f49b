use ldf_oracle::{
    check_certificate, equality_classes, guided_equal, oracle_compare, oracle_equal, verdict_between, Budget,
    Certificate, Explored, Value,
};
use ldf_rewrite::sigma_neighbors;
use ldf_term::{enumerate_upto, parse, Term};
use proptest::prelude::*;

fn t(s: &str) -> Term {
    parse(s).unwrap()
}

#[test]
fn sigma_laws_are_found() {
    let b = Budget::new(2_000);
    for (u, v) in [
        ("(x o x) x", "x (x x)"),
        ("(x o x) o x", "x o (x o x)"),
        ("x (x o x)", "x x o x x"),
        ("x o x", "x x o x"),
    ] {
        let (u, v) = (t(u), t(v));
        let r = oracle_equal(&u, &v, &b);
        assert_eq!(r.value, Value::Equal, "{u} = {v}");
        assert!(matches!(r.certificate, Some(Certificate::SigmaPath(_))));
        assert!(check_certificate(&u, &v, &r));
    }
}

#[test]
fn ld_terms_get_common_reducts() {
    let u = t("x (x (x x))");
    let v = t("x x (x x) (x x (x x))");
    let r = oracle_equal(&u, &v, &Budget::new(5_000));
    assert_eq!(r.value, Value::Equal);
    assert!(matches!(r.certificate, Some(Certificate::CommonReduct { .. })));
    assert!(check_certificate(&u, &v, &r));
}

#[test]
fn certificates_do_not_transfer() {
    let (u, v) = (t("x (x x)"), t("(x x) (x x)"));
    let r = oracle_equal(&u, &v, &Budget::new(1_000));
    assert!(check_certificate(&u, &v, &r));
    assert!(!check_certificate(&u, &t("x x x"), &r));
    let lt = oracle_compare(&t("x"), &t("x x"), &Budget::new(1_000));
    assert_eq!(lt.value, Value::Less);
    assert!(check_certificate(&t("x"), &t("x x"), &lt));
    let mut flipped = lt.clone();
    flipped.value = Value::Greater;
    assert!(!check_certificate(&t("x"), &t("x x"), &flipped));
}

#[test]
fn tiny_budget_is_unknown_not_wrong() {
    let (u, v) = (t("x (x (x x))"), t("x x (x x) (x (x x))"));
    assert_eq!(oracle_equal(&u, &v, &Budget::new(1)).value, Value::Unknown);
    assert_eq!(oracle_equal(&u, &v, &Budget::new(5_000)).value, Value::Equal);
}

#[test]
fn order_is_antisymmetric_on_small_terms() {
    let terms = enumerate_upto(4, true);
    let b = Budget::new(300);
    let ex: Vec<Explored> = terms.iter().map(|x| Explored::new(x, &b)).collect();
    for i in 0..ex.len() {
        for j in 0..ex.len() {
            let a = verdict_between(&ex[i], &ex[j]).value;
            let c = verdict_between(&ex[j], &ex[i]).value;
            let mirrored = match a {
                Value::Less => Value::Greater,
                Value::Greater => Value::Less,
                other => other,
            };
            assert_eq!(mirrored, c, "{} vs {}", terms[i], terms[j]);
            if i == j {
                assert_eq!(a, Value::Equal);
            }
        }
    }
}

#[test]
fn classes_only_merge_equal_terms() {
    let terms = enumerate_upto(4, true);
    let b = Budget::new(300);
    let ex: Vec<Explored> = terms.iter().map(|x| Explored::new(x, &b)).collect();
    let classes = equality_classes(&ex);
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            if classes[i] == classes[j] {
                let r = oracle_equal(&terms[i], &terms[j], &Budget::new(20_000));
                assert_eq!(r.value, Value::Equal, "{} ~ {}", terms[i], terms[j]);
            }
        }
    }
}

#[test]
fn guided_rejects_a_lying_hint() {
    let (u, v) = (t("x"), t("x x"));
    let lie = |_: &Term| t("x");
    let r = guided_equal(&u, &v, &lie, &Budget::new(2_000));
    assert_eq!(r.value, Value::Unknown);
}

fn term(max_leaves: usize) -> impl Strategy<Value = Term> {
    let pool: Vec<Term> = enumerate_upto(max_leaves, false);
    proptest::sample::select(pool)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_walks_are_recovered(start in term(4), picks in proptest::collection::vec(any::<usize>(), 1..4)) {
        let mut cur = start.clone();
        for p in picks {
            let next = sigma_neighbors(&cur);
            if next.is_empty() {
                break;
            }
            let s = &next[p % next.len()];
            if s.after.leaves() > 6 {
                continue;
            }
            cur = s.after.clone();
        }
        let r = oracle_equal(&start, &cur, &Budget::new(20_000));
        prop_assert!(check_certificate(&start, &cur, &r));
        prop_assert_ne!(r.value, Value::Less);
        prop_assert_ne!(r.value, Value::Greater);
    }
}
