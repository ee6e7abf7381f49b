use std::cmp::Ordering;
use std::collections::HashSet;

use ldf_divform::{Calculus, DfTerm, Elem, Engine};
use ldf_term::{enumerate_upto, Star};

fn forms(eng: &Engine, leaves: usize, a_only: bool) -> Vec<DfTerm> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in enumerate_upto(leaves, a_only) {
        let e = eng.df_of_term(&t).unwrap();
        if seen.insert(e.clone()) {
            out.push(DfTerm::from_x(&e));
        }
    }
    out
}

#[test]
fn explicit_products_agree_with_division() {
    let eng = Engine::default();
    let p = Elem::gen();
    let calc = Calculus::new(&eng, &p);
    let fs = forms(&eng, 5, false);
    let mut sharp_pairs = 0;
    for u in &fs {
        for v in &fs {
            if calc.sharp(u, v).unwrap().is_none() {
                continue;
            }
            sharp_pairs += 1;
            for star in [Star::App, Star::Comp] {
                let (r, _) = if star == Star::App { calc.mul_df(u, v) } else { calc.comp_df(u, v) }
                    .unwrap_or_else(|e| panic!("{u} {star} {v}: {e}"));
                let val = eng
                    .apply(star, &eng.df_value(&p, u).unwrap(), &eng.df_value(&p, v).unwrap())
                    .unwrap();
                assert_eq!(r, DfTerm::from_x(&val), "{u} {star} {v}");
                if star == Star::App {
                    assert!(calc.sharp(&r, u).unwrap().is_some(), "result {r} of {u} {v}");
                }
            }
        }
    }
    eprintln!("{} forms, {sharp_pairs} dominated pairs, {:?}", fs.len(), calc.stats());
}

#[test]
fn dominance_is_downward_closed() {
    let eng = Engine::default();
    let p = Elem::gen();
    let calc = Calculus::new(&eng, &p);
    let fs = forms(&eng, 4, false);
    for u in &fs {
        for v in &fs {
            let Some(w) = calc.sharp(u, v).unwrap() else { continue };
            assert!(calc.replay(u, v, &w).unwrap());
            for smaller in &fs {
                if eng.df_lex(&p, smaller, v).unwrap() != Ordering::Greater {
                    assert!(calc.sharp(u, smaller).unwrap().is_some(), "{u} ⊐ {v} but not {smaller}");
                }
            }
        }
    }
}

#[test]
fn proper_subterms_are_smaller() {
    let eng = Engine::default();
    let p = Elem::gen();
    for u in forms(&eng, 6, false) {
        for s in u.subterms().into_iter().skip(1) {
            assert_eq!(eng.df_lex(&p, s, &u).unwrap(), Ordering::Less, "{s} in {u}");
        }
    }
}

#[test]
fn literal_comp_clause_breaks_the_conclusion() {
    let eng = Engine::default();
    let p = Elem::gen();
    let calc = Calculus::new(&eng, &p);
    let u = DfTerm::from_x(&eng.df_of_term(&ldf_term::parse("x o ((xx)x)").unwrap()).unwrap());
    let v = DfTerm::from_x(&eng.df_of_term(&ldf_term::parse("x o x").unwrap()).unwrap());
    assert!(calc.sharp(&u, &v).unwrap().is_none());
    let (r, _) = calc.mul_df(&u, &v).unwrap();
    assert!(calc.sharp(&r, &u).unwrap().is_none());
}
