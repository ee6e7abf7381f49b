use std::collections::HashMap;

use ldf_divform::Engine;
use ldf_normalform::{nf_of, Normalizer};
use ldf_oracle::{oracle_equal, Budget, Value};
use ldf_term::{enumerate_upto, Term};
use proptest::prelude::*;

#[test]
fn normal_forms_are_valid_and_faithful() {
    let eng = Engine::default();
    let ws = enumerate_upto(5, false);
    for p in enumerate_upto(3, false) {
        let pe = eng.df_of_term(&p).unwrap();
        let nz = Normalizer::new(&eng, &pe);
        let mut seen = HashMap::new();
        for w in &ws {
            let we = eng.df_of_term(w).unwrap();
            let u = nz.nf(&we).unwrap();
            assert!(nz.is_valid(&u).unwrap(), "|{w}|_{p} = {u}");
            assert_eq!(nz.value(&u).unwrap(), we, "|{w}|_{p} = {u}");
            if let Some(prev) = seen.insert(u.clone(), we.clone()) {
                assert_eq!(prev, we, "{u} names two elements");
            }
        }
        let forms: Vec<_> = seen.into_iter().collect();
        for (u, a) in &forms {
            for (v, b) in &forms {
                assert_eq!(nz.compare(u, v).unwrap(), eng.lex(a, b).unwrap(), "{u} vs {v} over {p}");
            }
        }
    }
}

#[test]
fn round_trip_is_sigma_equal() {
    let eng = Engine::default();
    for p in enumerate_upto(2, false) {
        for w in enumerate_upto(3, false) {
            let f = nf_of(&eng, &p, &w).unwrap();
            let v = oracle_equal(&f.to_term(), &w, &Budget::new(50_000));
            assert_eq!(v.value, Value::Equal, "{} vs {w}", f.to_term());
        }
    }
}

fn pool(leaves: usize) -> impl Strategy<Value = Term> {
    proptest::sample::select(enumerate_upto(leaves, false))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn larger_terms_normalize(p in pool(4), w1 in pool(6), w2 in pool(6)) {
        let eng = Engine::default();
        let pe = eng.df_of_term(&p).unwrap();
        let nz = Normalizer::new(&eng, &pe);
        let (a, b) = (eng.df_of_term(&w1).unwrap(), eng.df_of_term(&w2).unwrap());
        let (u, v) = (nz.nf(&a).unwrap(), nz.nf(&b).unwrap());
        prop_assert!(nz.is_valid(&u).unwrap());
        prop_assert_eq!(nz.value(&u).unwrap(), a.clone());
        prop_assert_eq!(nz.compare(&u, &v).unwrap(), eng.lex(&a, &b).unwrap());
        prop_assert_eq!(u == v, a == b);
    }
}
