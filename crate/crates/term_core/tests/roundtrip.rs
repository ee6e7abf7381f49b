use ldf_term::{enumerate_upto, parse, Format, Term};
use proptest::prelude::*;

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = Just(Term::gen());
    leaf.prop_recursive(6, 40, 2, |inner| {
        (inner.clone(), inner, any::<bool>())
            .prop_map(|(a, b, app)| if app { Term::app(a, b) } else { Term::comp(a, b) })
    })
}

#[test]
fn enumerated_round_trips() {
    for t in enumerate_upto(7, false) {
        for f in [Format::Infix, Format::Sexpr, Format::Compact] {
            assert_eq!(parse(&t.render(f)).unwrap(), t, "{f:?} {t}");
        }
        assert_eq!(t.spine().reassemble(), t);
    }
}

#[test]
fn canonical_text_is_fixed() {
    for t in enumerate_upto(5, false) {
        let s = t.to_string();
        assert_eq!(parse(&s).unwrap().to_string(), s);
    }
}

proptest! {
    #[test]
    fn print_parse_identity(t in arb_term()) {
        prop_assert_eq!(parse(&t.to_string()).unwrap(), t.clone());
        prop_assert_eq!(parse(&t.sexpr()).unwrap(), t.clone());
    }

    #[test]
    fn spine_reassembles(t in arb_term()) {
        let s = t.spine();
        prop_assert!(s.head.is_gen() || matches!(s.head.kind(), ldf_term::Kind::Comp(..)));
        prop_assert_eq!(s.reassemble(), t);
    }

    #[test]
    fn subterm_count_matches_nodes(t in arb_term()) {
        let subs = t.subterms();
        prop_assert_eq!(subs.len(), t.nodes());
        for (path, s) in subs {
            prop_assert_eq!(t.at(&path).unwrap(), &s);
            prop_assert_eq!(t.replace_at(&path, s.clone()).unwrap(), t.clone());
        }
    }
}
