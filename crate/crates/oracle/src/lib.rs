//! Bounded brute-force decisions of Σ-equality and the left-division order.
//!
//! Everything here is a semi-decision: `Unknown` means the budget ran out, never that
//! the terms are unrelated.

use std::collections::{HashMap, VecDeque};

use ldf_rewrite::{common_reduct, ld_successors, sigma_neighbors, RewriteStep};
use ldf_term::{Dir, Kind, Path, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of expanded terms per search.
    pub nodes: usize,
    /// Σ-search size cap as a percentage of the larger input's leaf count.
    pub leaf_percent: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { nodes: 20_000, leaf_percent: 300 }
    }
}

impl Budget {
    pub fn new(nodes: usize) -> Budget {
        Budget { nodes, ..Budget::default() }
    }

    pub fn with_leaf_percent(self, leaf_percent: usize) -> Budget {
        Budget { leaf_percent, ..self }
    }

    fn leaf_cap(&self, leaves: usize) -> usize {
        (leaves * self.leaf_percent).div_ceil(100).max(leaves)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value {
    Less,
    Equal,
    Greater,
    Unknown,
}

#[derive(Debug, Clone)]
pub enum Certificate {
    /// Both sides rewrite by `→` to `term`.
    CommonReduct { term: Term, left: Vec<RewriteStep>, right: Vec<RewriteStep> },
    /// Σ-steps turning the left input into the right one.
    SigmaPath(Vec<RewriteStep>),
    /// `representative` is equal to the larger input and `factor` is on its left spine
    /// and equal to the smaller input.
    LeftFactor { representative: Term, factor: Term, larger: Vec<RewriteStep>, smaller: Vec<RewriteStep> },
}

#[derive(Debug, Clone)]
pub struct OracleVerdict {
    pub value: Value,
    pub certificate: Option<Certificate>,
    pub cost: usize,
}

impl OracleVerdict {
    fn unknown(cost: usize) -> OracleVerdict {
        OracleVerdict { value: Value::Unknown, certificate: None, cost }
    }

    pub fn is_definite(&self) -> bool {
        self.value != Value::Unknown
    }
}

/// Equal when a common `→`-reduct (LD-only inputs) or a Σ-path is found within budget.
pub fn oracle_equal(u: &Term, v: &Term, budget: &Budget) -> OracleVerdict {
    if u.is_a() && v.is_a() {
        return match common_reduct(u, v, budget.nodes) {
            Ok(r) => OracleVerdict {
                value: Value::Equal,
                certificate: Some(Certificate::CommonReduct { term: r.term, left: r.left, right: r.right }),
                cost: r.cost,
            },
            Err(e) => OracleVerdict::unknown(e.cost),
        };
    }
    let mut cost = 0;
    match sigma_path(u, v, budget, &mut cost) {
        Some(path) => OracleVerdict { value: Value::Equal, certificate: Some(Certificate::SigmaPath(path)), cost },
        None => OracleVerdict::unknown(cost),
    }
}

fn lift(steps: Vec<RewriteStep>, dir: Dir, sibling: &Term, comp: bool) -> Vec<RewriteStep> {
    let wrap = |t: Term| {
        let (a, b) = if dir == Dir::L { (t, sibling.clone()) } else { (sibling.clone(), t) };
        if comp { Term::comp(a, b) } else { Term::app(a, b) }
    };
    steps
        .into_iter()
        .map(|s| {
            let mut p = vec![dir];
            p.extend(s.position.0);
            RewriteStep { position: Path(p), rule: s.rule, before: wrap(s.before), after: wrap(s.after) }
        })
        .collect()
}

/// Σ-path from `u` to `v`: congruence first, then bidirectional search.
fn sigma_path(u: &Term, v: &Term, budget: &Budget, cost: &mut usize) -> Option<Vec<RewriteStep>> {
    if u == v {
        return Some(Vec::new());
    }
    let same_op = matches!(
        (u.kind(), v.kind()),
        (Kind::App(..), Kind::App(..)) | (Kind::Comp(..), Kind::Comp(..))
    );
    if same_op {
        let comp = matches!(u.kind(), Kind::Comp(..));
        let (a, b) = u.children().unwrap();
        let (c, d) = v.children().unwrap();
        let sub = Budget { nodes: budget.nodes / 4, ..*budget };
        if let Some(left) = sigma_path(a, c, &sub, cost) {
            if let Some(right) = sigma_path(b, d, &sub, cost) {
                let mut path = lift(left, Dir::L, b, comp);
                path.extend(lift(right, Dir::R, c, comp));
                return Some(path);
            }
        }
    }
    bidirectional(u, v, budget, cost)
}

/// Equality through waypoints proposed by `hint`, a map sending a term to a claimed equal
/// term such as a canonical flattening. Nothing is trusted: both inputs must reach the
/// same waypoint, and every link, including each congruence step through a subterm, is a
/// Σ-path found by search. The certificate replays like any other.
pub fn guided_equal(u: &Term, v: &Term, hint: &dyn Fn(&Term) -> Term, budget: &Budget) -> OracleVerdict {
    let direct = Budget { nodes: (budget.nodes / 8).max(1), ..*budget };
    let mut cost = 0;
    if let Some(path) = sigma_path(u, v, &direct, &mut cost) {
        return OracleVerdict { value: Value::Equal, certificate: Some(Certificate::SigmaPath(path)), cost };
    }
    if hint(u) != hint(v) {
        return OracleVerdict::unknown(cost);
    }
    let mut memo = HashMap::new();
    let found = toward_hint(u, hint, budget, &mut memo, &mut cost)
        .and_then(|pu| toward_hint(v, hint, budget, &mut memo, &mut cost).map(|pv| (pu, pv)));
    match found {
        Some((mut path, pv)) => {
            path.extend(reverse_path(pv));
            OracleVerdict { value: Value::Equal, certificate: Some(Certificate::SigmaPath(path)), cost }
        }
        None => OracleVerdict::unknown(cost),
    }
}

type Proofs = HashMap<Term, Option<Vec<RewriteStep>>>;

/// Σ-path from `t` to `hint(t)`: directly, or by rewriting both children to their hints
/// and then linking the result.
fn toward_hint(
    t: &Term,
    hint: &dyn Fn(&Term) -> Term,
    budget: &Budget,
    memo: &mut Proofs,
    cost: &mut usize,
) -> Option<Vec<RewriteStep>> {
    if let Some(p) = memo.get(t) {
        return p.clone();
    }
    let h = hint(t);
    let small = Budget { nodes: (budget.nodes / 8).max(1), ..*budget };
    let mut found = if *t == h { Some(Vec::new()) } else { bidirectional(t, &h, &small, cost) };
    if found.is_none() {
        if let Some((a, b)) = t.children() {
            let comp = matches!(t.kind(), Kind::Comp(..));
            found = toward_hint(a, hint, budget, memo, cost).and_then(|pa| {
                let pb = toward_hint(b, hint, budget, memo, cost)?;
                let ha = hint(a);
                let mid = if comp { Term::comp(ha.clone(), hint(b)) } else { Term::app(ha.clone(), hint(b)) };
                let link = if mid == h { Vec::new() } else { bidirectional(&mid, &h, budget, cost)? };
                let mut path = lift(pa, Dir::L, b, comp);
                path.extend(lift(pb, Dir::R, &ha, comp));
                path.extend(link);
                Some(path)
            });
        }
    }
    memo.insert(t.clone(), found.clone());
    found
}

type Parents = HashMap<Term, Option<RewriteStep>>;

fn path_to(parents: &Parents, t: &Term) -> Vec<RewriteStep> {
    let mut steps = Vec::new();
    let mut cur = t.clone();
    while let Some(Some(s)) = parents.get(&cur) {
        steps.push(s.clone());
        cur = s.before.clone();
    }
    steps.reverse();
    steps
}

fn reverse_path(steps: Vec<RewriteStep>) -> Vec<RewriteStep> {
    steps
        .into_iter()
        .rev()
        .map(|s| RewriteStep { position: s.position, rule: s.rule.inverse(), before: s.after, after: s.before })
        .collect()
}

fn bidirectional(u: &Term, v: &Term, budget: &Budget, cost: &mut usize) -> Option<Vec<RewriteStep>> {
    let cap = budget.leaf_cap(u.leaves().max(v.leaves()));
    let mut sides = [Search::new(u, cap, false), Search::new(v, cap, false)];
    let mut spent = 0;
    loop {
        // expand the side with the smaller frontier to keep the two balls balanced
        let side = match (sides[0].frontier.len(), sides[1].frontier.len()) {
            (0, 0) => break,
            (0, _) => 1,
            (_, 0) => 0,
            (a, b) => usize::from(b < a),
        };
        if spent >= budget.nodes {
            break;
        }
        spent += 1;
        for t in sides[side].expand_one() {
            if sides[1 - side].parents.contains_key(&t) {
                *cost += spent;
                let mut path = path_to(&sides[0].parents, &t);
                path.extend(reverse_path(path_to(&sides[1].parents, &t)));
                return Some(path);
            }
        }
    }
    *cost += spent;
    None
}

/// Bounded exploration of an equivalence class, by `→` for LD-only terms and by Σ otherwise.
pub struct Search {
    parents: Parents,
    frontier: VecDeque<Term>,
    cap: usize,
    ld_only: bool,
}

impl Search {
    fn new(t: &Term, cap: usize, ld_only: bool) -> Search {
        let mut parents = Parents::new();
        parents.insert(t.clone(), None);
        Search { parents, frontier: VecDeque::from([t.clone()]), cap, ld_only }
    }

    fn expand_one(&mut self) -> Vec<Term> {
        let Some(t) = self.frontier.pop_front() else {
            return Vec::new();
        };
        let steps = if self.ld_only { ld_successors(&t) } else { sigma_neighbors(&t) };
        let mut fresh = Vec::new();
        for s in steps {
            if s.after.leaves() > self.cap || self.parents.contains_key(&s.after) {
                continue;
            }
            fresh.push(s.after.clone());
            self.frontier.push_back(s.after.clone());
            self.parents.insert(s.after.clone(), Some(s));
        }
        fresh
    }
}

/// A bounded part of one equivalence class plus the left-spine factors of its members.
pub struct Explored {
    root: Term,
    search: Search,
    factors: HashMap<Term, Term>,
    pub cost: usize,
}

impl Explored {
    /// Explores `t` by `→` when it is LD-only, else by Σ with the budget's size cap.
    pub fn new(t: &Term, budget: &Budget) -> Explored {
        let ld_only = t.is_a();
        let cap = if ld_only { usize::MAX } else { budget.leaf_cap(t.leaves()) };
        let mut search = Search::new(t, cap, ld_only);
        let mut cost = 0;
        while cost < budget.nodes && !search.frontier.is_empty() {
            search.expand_one();
            cost += 1;
        }
        let mut factors = HashMap::new();
        for m in search.parents.keys() {
            for f in m.left_chain() {
                factors.entry(f).or_insert_with(|| m.clone());
            }
        }
        Explored { root: t.clone(), search, factors, cost }
    }

    pub fn root(&self) -> &Term {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.search.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.search.parents.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.search.parents.contains_key(t)
    }

    pub fn members(&self) -> impl Iterator<Item = &Term> {
        self.search.parents.keys()
    }

    fn path(&self, t: &Term) -> Vec<RewriteStep> {
        path_to(&self.search.parents, t)
    }

    fn meet(&self, other: &Explored) -> Option<Term> {
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut hits: Vec<&Term> = small.members().filter(|t| big.contains(t)).collect();
        hits.sort_by_key(|t| (t.leaves(), t.nodes(), t.to_string()));
        hits.first().map(|t| (*t).clone())
    }

    /// A member of `self` whose left spine carries a member of `smaller`.
    fn left_witness(&self, smaller: &Explored) -> Option<(Term, Term)> {
        let mut hits: Vec<(&Term, &Term)> =
            self.factors.iter().filter(|(f, _)| smaller.contains(f)).collect();
        hits.sort_by_key(|(f, m)| (m.leaves(), f.leaves(), m.to_string(), f.to_string()));
        hits.first().map(|(f, m)| ((*m).clone(), (*f).clone()))
    }
}

/// Verdict from two explorations. Equal needs a shared member, Less a member of `v`'s
/// class with a left factor in `u`'s class.
pub fn verdict_between(eu: &Explored, ev: &Explored) -> OracleVerdict {
    let cost = eu.cost + ev.cost;
    if let Some(m) = eu.meet(ev) {
        let certificate = if eu.search.ld_only && ev.search.ld_only {
            Certificate::CommonReduct { term: m.clone(), left: eu.path(&m), right: ev.path(&m) }
        } else {
            let mut path = eu.path(&m);
            path.extend(reverse_path(ev.path(&m)));
            Certificate::SigmaPath(path)
        };
        return OracleVerdict { value: Value::Equal, certificate: Some(certificate), cost };
    }
    let less = ev.left_witness(eu);
    let greater = eu.left_witness(ev);
    match (less, greater) {
        (Some((rep, f)), None) => OracleVerdict {
            value: Value::Less,
            certificate: Some(Certificate::LeftFactor {
                larger: ev.path(&rep),
                smaller: eu.path(&f),
                representative: rep,
                factor: f,
            }),
            cost,
        },
        (None, Some((rep, f))) => OracleVerdict {
            value: Value::Greater,
            certificate: Some(Certificate::LeftFactor {
                larger: eu.path(&rep),
                smaller: ev.path(&f),
                representative: rep,
                factor: f,
            }),
            cost,
        },
        // both directions would contradict irreflexivity; refuse to decide
        _ => OracleVerdict::unknown(cost),
    }
}

/// Less when a term equal to `v` has a left factor equal to `u`, Greater symmetrically.
pub fn oracle_compare(u: &Term, v: &Term, budget: &Budget) -> OracleVerdict {
    let eq = oracle_equal(u, v, budget);
    if eq.is_definite() {
        return eq;
    }
    let (eu, ev) = (Explored::new(u, budget), Explored::new(v, budget));
    let mut verdict = verdict_between(&eu, &ev);
    verdict.cost += eq.cost;
    verdict
}

/// Groups terms whose explorations share a member; sound but budget-limited.
pub fn equality_classes(explored: &[Explored]) -> Vec<usize> {
    let n = explored.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let next = p[j];
            p[j] = r;
            j = next;
        }
        r
    }
    let mut owner: HashMap<&Term, usize> = HashMap::new();
    for (i, e) in explored.iter().enumerate() {
        for m in e.members() {
            if let Some(&j) = owner.get(m) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            } else {
                owner.insert(m, i);
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// Checks a certificate against its claimed endpoints by replaying every step.
pub fn check_certificate(u: &Term, v: &Term, verdict: &OracleVerdict) -> bool {
    fn replays(start: &Term, steps: &[RewriteStep]) -> Option<Term> {
        ldf_rewrite::replay(start, steps)
    }
    match (&verdict.value, &verdict.certificate) {
        (Value::Equal, Some(Certificate::CommonReduct { term, left, right })) => {
            replays(u, left).as_ref() == Some(term) && replays(v, right).as_ref() == Some(term)
        }
        (Value::Equal, Some(Certificate::SigmaPath(path))) => replays(u, path).as_ref() == Some(v),
        (Value::Less | Value::Greater, Some(Certificate::LeftFactor { representative, factor, larger, smaller })) => {
            let (lo, hi) = if verdict.value == Value::Less { (u, v) } else { (v, u) };
            replays(hi, larger).as_ref() == Some(representative)
                && replays(lo, smaller).as_ref() == Some(factor)
                && representative.left_chain().contains(factor)
        }
        (Value::Unknown, None) => true,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldf_term::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn equal_examples() {
        let b = Budget::new(1_000);
        let v = oracle_equal(&t("x (x x)"), &t("(x x) (x x)"), &b);
        assert_eq!(v.value, Value::Equal);
        assert!(check_certificate(&t("x (x x)"), &t("(x x) (x x)"), &v));
        let v = oracle_equal(&t("x o x"), &t("x x o x"), &b);
        assert_eq!(v.value, Value::Equal);
        assert!(check_certificate(&t("x o x"), &t("x x o x"), &v));
        assert_eq!(oracle_equal(&t("x"), &t("x x"), &b).value, Value::Unknown);
    }

    #[test]
    fn compare_examples() {
        let b = Budget::new(2_000);
        for (u, v) in [("x", "x x"), ("x x", "x o x"), ("x x x", "x (x x)")] {
            let (u, v) = (t(u), t(v));
            let r = oracle_compare(&u, &v, &b);
            assert_eq!(r.value, Value::Less, "{u} {v}");
            assert!(check_certificate(&u, &v, &r));
            let r = oracle_compare(&v, &u, &b);
            assert_eq!(r.value, Value::Greater);
            assert!(check_certificate(&v, &u, &r));
        }
    }

    #[test]
    fn congruence_path_replays() {
        let b = Budget::new(500);
        let u = t("(x (x x)) o (x o x)");
        let v = t("((x x) (x x)) o (x x o x)");
        let r = oracle_equal(&u, &v, &b);
        assert_eq!(r.value, Value::Equal);
        assert!(check_certificate(&u, &v, &r));
    }

    #[test]
    fn classes_group_equal_terms() {
        let b = Budget::new(200);
        let ts = [t("x (x x)"), t("(x x) (x x)"), t("x x x"), t("x")];
        let ex: Vec<_> = ts.iter().map(|x| Explored::new(x, &b)).collect();
        let c = equality_classes(&ex);
        assert_eq!(c[0], c[1]);
        assert_ne!(c[0], c[2]);
        assert_ne!(c[2], c[3]);
    }
}

#[cfg(test)]
mod guided_tests {
    use super::*;
    use ldf_term::parse;

    #[test]
    fn waypoints_are_certified() {
        let u = parse("x (x (x x))").unwrap();
        let v = parse("(x x) ((x x) (x x))").unwrap();
        let inner = parse("x (x x)").unwrap();
        let flat = parse("(x x) (x x)").unwrap();
        let hint = |t: &Term| {
            if *t == inner {
                flat.clone()
            } else if *t == u {
                v.clone()
            } else {
                t.clone()
            }
        };
        let r = guided_equal(&u, &v, &hint, &Budget::new(2_000));
        assert_eq!(r.value, Value::Equal);
        assert!(check_certificate(&u, &v, &r));
        let liar = |_: &Term| Term::gen();
        let r = guided_equal(&parse("x x").unwrap(), &parse("x (x x)").unwrap(), &liar, &Budget::new(500));
        assert_eq!(r.value, Value::Unknown);
    }
}
