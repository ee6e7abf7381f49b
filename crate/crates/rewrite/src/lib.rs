//! One-step LD rewriting, Σ-law neighborhoods and confluence search.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use ldf_term::{Kind, Path, Term};
use serde::Serialize;

/// Directed law applications. `LdExpand` is the rewriting relation `a(bc) → (ab)(ac)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// a(bc) → (ab)(ac)
    LdExpand,
    /// (ab)(ac) → a(bc)
    LdCollapse,
    /// a∘(b∘c) → (a∘b)∘c
    AssocLeft,
    /// (a∘b)∘c → a∘(b∘c)
    AssocRight,
    /// (a∘b)c → a(bc)
    CompApply,
    /// a(bc) → (a∘b)c
    ApplyComp,
    /// a(b∘c) → ab∘ac
    DistComp,
    /// ab∘ac → a(b∘c)
    UndistComp,
    /// a∘b → ab∘a
    CompExpand,
    /// ab∘a → a∘b
    CompCollapse,
}

impl Rule {
    pub const SIGMA: [Rule; 10] = [
        Rule::LdExpand,
        Rule::LdCollapse,
        Rule::AssocLeft,
        Rule::AssocRight,
        Rule::CompApply,
        Rule::ApplyComp,
        Rule::DistComp,
        Rule::UndistComp,
        Rule::CompExpand,
        Rule::CompCollapse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::LdExpand => "ld_expand",
            Rule::LdCollapse => "ld_collapse",
            Rule::AssocLeft => "assoc_left",
            Rule::AssocRight => "assoc_right",
            Rule::CompApply => "comp_apply",
            Rule::ApplyComp => "apply_comp",
            Rule::DistComp => "dist_comp",
            Rule::UndistComp => "undist_comp",
            Rule::CompExpand => "comp_expand",
            Rule::CompCollapse => "comp_collapse",
        }
    }

    pub fn inverse(self) -> Rule {
        match self {
            Rule::LdExpand => Rule::LdCollapse,
            Rule::LdCollapse => Rule::LdExpand,
            Rule::AssocLeft => Rule::AssocRight,
            Rule::AssocRight => Rule::AssocLeft,
            Rule::CompApply => Rule::ApplyComp,
            Rule::ApplyComp => Rule::CompApply,
            Rule::DistComp => Rule::UndistComp,
            Rule::UndistComp => Rule::DistComp,
            Rule::CompExpand => Rule::CompCollapse,
            Rule::CompCollapse => Rule::CompExpand,
        }
    }

    /// Result of applying the rule at the root, if the term has the right shape.
    pub fn apply(self, t: &Term) -> Option<Term> {
        use Kind::{App, Comp};
        let app = Term::app;
        let comp = Term::comp;
        match (self, t.kind()) {
            (Rule::LdExpand, App(a, r)) => match r.kind() {
                App(b, c) => Some(app(app(a.clone(), b.clone()), app(a.clone(), c.clone()))),
                _ => None,
            },
            (Rule::LdCollapse, App(l, r)) => match (l.kind(), r.kind()) {
                (App(a, b), App(a2, c)) if a == a2 => Some(app(a.clone(), app(b.clone(), c.clone()))),
                _ => None,
            },
            (Rule::AssocLeft, Comp(a, r)) => match r.kind() {
                Comp(b, c) => Some(comp(comp(a.clone(), b.clone()), c.clone())),
                _ => None,
            },
            (Rule::AssocRight, Comp(l, c)) => match l.kind() {
                Comp(a, b) => Some(comp(a.clone(), comp(b.clone(), c.clone()))),
                _ => None,
            },
            (Rule::CompApply, App(l, c)) => match l.kind() {
                Comp(a, b) => Some(app(a.clone(), app(b.clone(), c.clone()))),
                _ => None,
            },
            (Rule::ApplyComp, App(a, r)) => match r.kind() {
                App(b, c) => Some(app(comp(a.clone(), b.clone()), c.clone())),
                _ => None,
            },
            (Rule::DistComp, App(a, r)) => match r.kind() {
                Comp(b, c) => Some(comp(app(a.clone(), b.clone()), app(a.clone(), c.clone()))),
                _ => None,
            },
            (Rule::UndistComp, Comp(l, r)) => match (l.kind(), r.kind()) {
                (App(a, b), App(a2, c)) if a == a2 => Some(app(a.clone(), comp(b.clone(), c.clone()))),
                _ => None,
            },
            (Rule::CompExpand, Comp(a, b)) => Some(comp(app(a.clone(), b.clone()), a.clone())),
            (Rule::CompCollapse, Comp(l, a2)) => match l.kind() {
                App(a, b) if a == a2 => Some(comp(a.clone(), b.clone())),
                _ => None,
            },
            _ => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub position: Path,
    pub rule: Rule,
    pub before: Term,
    pub after: Term,
}

/// Serializable view of one step; `term` is the term after the step.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TraceRecord {
    pub position: String,
    pub rule: Rule,
    pub term: String,
}

pub fn trace_records(steps: &[RewriteStep]) -> Vec<TraceRecord> {
    steps
        .iter()
        .map(|s| TraceRecord { position: s.position.to_string(), rule: s.rule, term: s.after.to_string() })
        .collect()
}

fn steps_with(t: &Term, rules: &[Rule]) -> Vec<RewriteStep> {
    let mut out = Vec::new();
    for (position, sub) in t.subterms() {
        for &rule in rules {
            if let Some(new) = rule.apply(&sub) {
                let after = t.replace_at(&position, new).expect("position taken from subterms");
                out.push(RewriteStep { position: position.clone(), rule, before: t.clone(), after });
            }
        }
    }
    out
}

/// Every single `a(bc) → (ab)(ac)` step from `t`.
pub fn ld_successors(t: &Term) -> Vec<RewriteStep> {
    steps_with(t, &[Rule::LdExpand])
}

/// Every single application of a Σ law, in either direction, at any position.
pub fn sigma_neighbors(t: &Term) -> Vec<RewriteStep> {
    steps_with(t, &Rule::SIGMA)
}

/// Outcome of a successful confluence search.
#[derive(Debug, Clone)]
pub struct Reduct {
    pub term: Term,
    pub left: Vec<RewriteStep>,
    pub right: Vec<RewriteStep>,
    pub cost: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExhausted {
    pub cost: usize,
}

impl fmt::Display for BudgetExhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "budget exhausted after {} expansions", self.cost)
    }
}

impl std::error::Error for BudgetExhausted {}

type Parents = HashMap<Term, Option<RewriteStep>>;

fn trace_to(parents: &Parents, t: &Term) -> Vec<RewriteStep> {
    let mut steps = Vec::new();
    let mut cur = t.clone();
    while let Some(Some(step)) = parents.get(&cur) {
        steps.push(step.clone());
        cur = step.before.clone();
    }
    steps.reverse();
    steps
}

/// Breadth-first `→` closure kept as a parent map so traces can be recovered.
pub struct Closure {
    parents: Parents,
    frontier: VecDeque<Term>,
}

impl Closure {
    pub fn new(t: &Term) -> Closure {
        let mut parents = Parents::new();
        parents.insert(t.clone(), None);
        Closure { parents, frontier: VecDeque::from([t.clone()]) }
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.parents.contains_key(t)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.parents.keys()
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.frontier.is_empty()
    }

    pub fn trace(&self, t: &Term) -> Vec<RewriteStep> {
        trace_to(&self.parents, t)
    }

    /// Expands every term of the current layer; returns the newly reached terms.
    pub fn expand_layer(&mut self, cost: &mut usize) -> Vec<Term> {
        let mut fresh = Vec::new();
        for t in std::mem::take(&mut self.frontier) {
            *cost += 1;
            for step in ld_successors(&t) {
                if !self.parents.contains_key(&step.after) {
                    fresh.push(step.after.clone());
                    self.parents.insert(step.after.clone(), Some(step));
                }
            }
        }
        self.frontier.extend(fresh.iter().cloned());
        fresh
    }

    /// Grows whole layers until the next one would exceed `budget` expansions in total.
    pub fn grow(&mut self, budget: usize, cost: &mut usize) {
        while !self.frontier.is_empty() && *cost + self.frontier.len() <= budget {
            self.expand_layer(cost);
        }
    }
}

/// Lockstep breadth-first search for a common `→`-descendant of `u` and `v`.
/// Failure only means the budget ran out; it never shows the terms differ.
pub fn common_reduct(u: &Term, v: &Term, budget: usize) -> Result<Reduct, BudgetExhausted> {
    let mut sides = [Closure::new(u), Closure::new(v)];
    let mut cost = 0;
    if u == v {
        return Ok(Reduct { term: u.clone(), left: vec![], right: vec![], cost });
    }
    let mut turn = 0;
    loop {
        if sides[0].is_complete() && sides[1].is_complete() {
            return Err(BudgetExhausted { cost });
        }
        if sides[turn].is_complete() {
            turn = 1 - turn;
        }
        let frontier = sides[turn].frontier.len();
        if cost + frontier > budget {
            return Err(BudgetExhausted { cost });
        }
        let fresh = sides[turn].expand_layer(&mut cost);
        let other = &sides[1 - turn];
        // smallest meeting term first keeps the certificate short and the output deterministic
        if let Some(m) = fresh.iter().filter(|t| other.contains(t)).min_by_key(|t| t.leaves()) {
            return Ok(Reduct {
                term: m.clone(),
                left: sides[0].trace(m),
                right: sides[1].trace(m),
                cost,
            });
        }
        turn = 1 - turn;
    }
}

/// Replays a trace from `start`, checking every step against its rule.
pub fn replay(start: &Term, steps: &[RewriteStep]) -> Option<Term> {
    let mut cur = start.clone();
    for s in steps {
        if s.before != cur {
            return None;
        }
        let sub = cur.at(&s.position)?;
        let new = s.rule.apply(sub)?;
        cur = cur.replace_at(&s.position, new).ok()?;
        if cur != s.after {
            return None;
        }
    }
    Some(cur)
}
