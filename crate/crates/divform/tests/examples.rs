use std::cmp::Ordering;

use ldf_divform::{divide, Calculus, Clause, DfTerm, Elem, Engine, Tier};
use ldf_term::{parse, Star, Term};

fn t(s: &str) -> Term {
    parse(s).unwrap()
}

fn x() -> DfTerm {
    DfTerm::Leaf(Elem::gen())
}

fn df(eng: &Engine, s: &str) -> DfTerm {
    DfTerm::from_x(&eng.df_of_term(&t(s)).unwrap())
}

#[test]
fn canonical_forms() {
    let eng = Engine::default();
    assert_eq!(df(&eng, "x(xx)"), DfTerm::Node(vec![DfTerm::Node(vec![x()], Star::App)], Star::App));
    assert_eq!(df(&eng, "(xx)(xx)"), df(&eng, "x(xx)"));
    assert_eq!(df(&eng, "x o x"), DfTerm::Node(vec![x()], Star::Comp));
    assert_eq!(df(&eng, "xx o x"), df(&eng, "x o x"));
}

#[test]
fn term_comparisons() {
    let eng = Engine::default();
    let cmp = |a: &str, b: &str| eng.compare_terms(&t(a), &t(b)).unwrap();
    assert_eq!(cmp("x", "xx"), Ordering::Less);
    assert_eq!(cmp("x", "x o x"), Ordering::Less);
    assert_eq!(cmp("x(xx)", "(xx)(xx)"), Ordering::Equal);
    assert_eq!(cmp("(xx)x", "x(xx)"), Ordering::Less);
    assert_eq!(cmp("(xx)x", "x o x"), Ordering::Less);
}

#[test]
fn lex_on_forms() {
    let eng = Engine::default();
    let p = Elem::gen();
    let xxx = DfTerm::Node(vec![x(), x()], Star::App);
    let xox = DfTerm::Node(vec![x()], Star::Comp);
    assert_eq!(eng.df_lex(&p, &x(), &DfTerm::Node(vec![x()], Star::App)).unwrap(), Ordering::Less);
    assert_eq!(eng.df_lex(&p, &xxx, &xox).unwrap(), Ordering::Less);
    assert_eq!(eng.df_lex(&p, &df(&eng, "(xx)x"), &df(&eng, "x(xx)")).unwrap(), Ordering::Less);
}

#[test]
fn prenormality() {
    let eng = Engine::default();
    let p = Elem::gen();
    let xx = DfTerm::Node(vec![x()], Star::App);
    assert!(eng.is_prenormal(&p, &[xx.clone(), x(), x()], Star::App).unwrap());
    assert!(eng.is_prenormal(&p, &[x()], Star::Comp).unwrap());
    let xxx = DfTerm::Node(vec![x(), x()], Star::App);
    assert!(eng.is_prenormal(&p, &[x(), x(), xx.clone()], Star::App).unwrap());
    assert!(!eng.is_prenormal(&p, &[x(), x(), xxx], Star::App).unwrap());
    assert!(!eng.is_prenormal(&p, &[x(), xx.clone()], Star::App).unwrap());
    assert!(!eng.is_prenormal(&p, &[x(), x(), xx], Star::Comp).unwrap());
}

#[test]
fn dominance_examples() {
    let eng = Engine::default();
    let calc = Calculus::new(&eng, &Elem::gen());
    let w = calc.sharp(&x(), &df(&eng, "x o (xx)")).unwrap().unwrap();
    assert_eq!(w.clause, Clause::Divisor);
    let pa = DfTerm::Node(vec![x()], Star::App);
    assert_eq!(calc.sharp(&pa, &x()).unwrap().unwrap().clause, Clause::SingleLeaf);
}

#[test]
fn products() {
    let eng = Engine::default();
    let calc = Calculus::new(&eng, &Elem::gen());
    let v = df(&eng, "x o x");
    assert_eq!(calc.mul_df(&x(), &v).unwrap(), (DfTerm::Node(vec![v.clone()], Star::App), Tier::One));
    let pa = DfTerm::Node(vec![x()], Star::App);
    assert_eq!(calc.mul_df(&pa, &x()).unwrap().0, DfTerm::Node(vec![x(), x()], Star::App));
    assert_eq!(calc.comp_df(&x(), &x()).unwrap().0, DfTerm::Node(vec![x()], Star::Comp));
}

#[test]
fn division_examples() {
    let eng = Engine::default();
    let d = divide(&eng, &t("xx"), &t("(xx)x")).unwrap();
    assert_eq!(d.root, DfTerm::Node(vec![x()], Star::App));
    assert_eq!(d.sexpr(), "(df (xx) [x] app)");
    let d = divide(&eng, &t("xx"), &t("x o x")).unwrap();
    assert_eq!(d.root, DfTerm::Node(vec![x()], Star::Comp));
    let d = divide(&eng, &t("x(xx)"), &t("x")).unwrap();
    assert_eq!(d.root, x());
}

#[test]
fn powers() {
    let eng = Engine::default();
    assert_eq!(eng.find_power(&t("x"), &t("x")).unwrap(), 1);
    assert_eq!(eng.find_power(&t("x"), &t("xx")).unwrap(), 2);
    assert_eq!(eng.find_power(&t("xx"), &t("x")).unwrap(), 1);
}

#[test]
fn prenormal_head_bound() {
    let eng = Engine::default();
    let e = eng.df_of_term(&t("((xx)x)(xx)")).unwrap();
    let xx = DfTerm::Node(vec![x()], Star::App);
    assert_eq!(DfTerm::from_x(&e), DfTerm::Node(vec![x(), x(), xx], Star::App));
    assert!(eng.is_valid(&e).unwrap());
}
