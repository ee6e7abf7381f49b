use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use ldf_term::{Kind, Star, Term};

use crate::elem::{Chain, Elem};
use crate::DfError;

/// Resource limits; exceeding one is reported as an error, never as a wrong answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum nesting of product/division calls.
    pub depth: usize,
    /// Maximum number of associated-sequence entries examined by one comparison.
    pub lex_bound: usize,
    /// Largest exponent tried by `find_power`.
    pub power_bound: usize,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { depth: 4_000, lex_bound: 256, power_bound: 10_000 }
    }
}

/// Work counters. `tier1` counts products evaluated by the explicit case formulas over a
/// divisor, `tier2` counts products evaluated by the general chain calculus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub tier1: u64,
    pub tier2: u64,
    pub divisions: u64,
    pub comparisons: u64,
    pub max_depth: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    Mul,
    Comp,
}

/// Memoizing evaluator for canonical x-division forms.
///
/// Results never depend on cache state; the tables only avoid recomputation.
pub struct Engine {
    limits: Limits,
    depth: Cell<usize>,
    pub(crate) stats: RefCell<Stats>,
    lex_memo: RefCell<HashMap<(Elem, Elem), Ordering>>,
    op_memo: RefCell<HashMap<(Op, Elem, Elem), Elem>>,
    chain_memo: RefCell<HashMap<(Op, Elem, Chain, Elem), Chain>>,
    qdiv_memo: RefCell<HashMap<(Elem, Elem), (Star, Vec<Elem>)>>,
    term_memo: RefCell<HashMap<Term, Elem>>,
    valid_memo: RefCell<HashSet<Elem>>,
}

pub(crate) struct DepthGuard<'a>(&'a Engine);

impl Drop for DepthGuard<'_> {
    fn drop(&mut self) {
        self.0.depth.set(self.0.depth.get() - 1);
    }
}

impl Default for Engine {
    fn default() -> Engine {
        Engine::new(Limits::default())
    }
}

impl Engine {
    pub fn new(limits: Limits) -> Engine {
        Engine {
            limits,
            depth: Cell::new(0),
            stats: RefCell::new(Stats::default()),
            lex_memo: RefCell::default(),
            op_memo: RefCell::default(),
            chain_memo: RefCell::default(),
            qdiv_memo: RefCell::default(),
            term_memo: RefCell::default(),
            valid_memo: RefCell::default(),
        }
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn stats(&self) -> Stats {
        *self.stats.borrow()
    }

    pub fn reset_stats(&self) {
        *self.stats.borrow_mut() = Stats::default();
    }

    pub(crate) fn enter(&self, what: &'static str) -> Result<DepthGuard<'_>, DfError> {
        let d = self.depth.get() + 1;
        if d > self.limits.depth {
            return Err(DfError::Watchdog { what, limit: self.limits.depth });
        }
        self.depth.set(d);
        let mut st = self.stats.borrow_mut();
        st.max_depth = st.max_depth.max(d);
        Ok(DepthGuard(self))
    }

    // ---- order ----

    /// Lexicographic comparison of associated sequences, which coincides with `<_L`.
    pub fn lex(&self, u: &Elem, v: &Elem) -> Result<Ordering, DfError> {
        if u == v {
            return Ok(Ordering::Equal);
        }
        match (u.is_gen(), v.is_gen()) {
            (true, _) => return Ok(Ordering::Less),
            (_, true) => return Ok(Ordering::Greater),
            _ => {}
        }
        let key = (u.clone(), v.clone());
        if let Some(&o) = self.lex_memo.borrow().get(&key) {
            return Ok(o);
        }
        let _g = self.enter("lex")?;
        self.stats.borrow_mut().comparisons += 1;
        let (mut su, mut sv) = (Seq::new(u), Seq::new(v));
        let mut steps = 0;
        let o = loop {
            match (su.next(), sv.next()) {
                (None, None) => {
                    return Err(DfError::Invariant(format!("distinct forms {u} and {v} share a sequence")))
                }
                (None, Some(_)) => break Ordering::Less,
                (Some(_), None) => break Ordering::Greater,
                (Some(a), Some(b)) => {
                    let o = self.lex(&a, &b)?;
                    if o != Ordering::Equal {
                        break o;
                    }
                }
            }
            steps += 1;
            if steps > self.limits.lex_bound {
                return Err(DfError::Watchdog { what: "lex", limit: self.limits.lex_bound });
            }
        };
        self.lex_memo.borrow_mut().insert(key, o);
        self.lex_memo.borrow_mut().insert((v.clone(), u.clone()), o.reverse());
        Ok(o)
    }

    pub(crate) fn le(&self, u: &Elem, v: &Elem) -> Result<bool, DfError> {
        Ok(self.lex(u, v)? != Ordering::Greater)
    }

    /// Full recursive prenormality check of an x-division form.
    pub fn is_valid(&self, e: &Elem) -> Result<bool, DfError> {
        if e.is_gen() || self.valid_memo.borrow().contains(e) {
            return Ok(true);
        }
        let c = e.components();
        for a in c {
            if !self.is_valid(a)? {
                return Ok(false);
            }
        }
        if !self.prenormal_x(c, e.star())? {
            return Ok(false);
        }
        self.valid_memo.borrow_mut().insert(e.clone());
        Ok(true)
    }

    /// Prenormality of `x c_0 ... * c_n` given valid components.
    pub fn prenormal_x(&self, c: &[Elem], star: Star) -> Result<bool, DfError> {
        let mut q = Elem::gen();
        for (j, a) in c.iter().enumerate() {
            if !q.is_gen() && !self.le(a, &q.prefix())? {
                return Ok(false);
            }
            if j + 1 < c.len() {
                q = q.append(a.clone(), Star::App);
            }
        }
        if star == Star::Comp && c.len() >= 2 && self.lex(c.last().unwrap(), &q.prefix())? != Ordering::Less {
            return Ok(false);
        }
        Ok(true)
    }

    // ---- products over x ----

    pub fn mul(&self, u: &Elem, v: &Elem) -> Result<Elem, DfError> {
        self.op(Op::Mul, u, v)
    }

    pub fn comp(&self, u: &Elem, v: &Elem) -> Result<Elem, DfError> {
        self.op(Op::Comp, u, v)
    }

    pub fn apply(&self, star: Star, u: &Elem, v: &Elem) -> Result<Elem, DfError> {
        match star {
            Star::App => self.mul(u, v),
            Star::Comp => self.comp(u, v),
        }
    }

    fn op(&self, op: Op, u: &Elem, v: &Elem) -> Result<Elem, DfError> {
        let key = (op, u.clone(), v.clone());
        if let Some(r) = self.op_memo.borrow().get(&key) {
            return Ok(r.clone());
        }
        let _g = self.enter("product")?;
        self.stats.borrow_mut().tier2 += 1;
        let x = Elem::gen();
        let a = Chain::from_x(u);
        let r = match op {
            Op::Mul => self.ch_mul(&x, &a, v)?,
            Op::Comp => self.ch_comp(&x, &a, v)?,
        }
        .into_x();
        self.op_memo.borrow_mut().insert(key, r.clone());
        Ok(r)
    }

    /// Value of a chain over `q`.
    pub fn chain_value(&self, q: &Elem, a: &Chain) -> Result<Elem, DfError> {
        if q.is_gen() {
            return Ok(a.clone().into_x());
        }
        match a {
            Chain::Leaf(u) => Ok(u.clone()),
            Chain::Node(bs, s) => {
                let mut e = q.clone();
                for (i, b) in bs.iter().enumerate() {
                    let star = if i + 1 == bs.len() { *s } else { Star::App };
                    e = self.apply(star, &e, b)?;
                }
                Ok(e)
            }
        }
    }

    fn leaf_or_divide(&self, q: &Elem, w: Elem) -> Result<Chain, DfError> {
        if self.le(&w, q)? {
            Ok(Chain::Leaf(w))
        } else {
            let (s, g) = self.qdiv(&w, q)?;
            Ok(Chain::Node(g, s))
        }
    }

    fn chain_step(&self, star: Star, q: &Elem, a: &Chain, y: &Elem) -> Result<Chain, DfError> {
        match star {
            Star::App => self.ch_mul(q, a, y),
            Star::Comp => self.ch_comp(q, a, y),
        }
    }

    /// Top-level `q`-division of `a · y` where `a` is a chain over `q`.
    pub fn ch_mul(&self, q: &Elem, a: &Chain, y: &Elem) -> Result<Chain, DfError> {
        let key = (Op::Mul, q.clone(), a.clone(), y.clone());
        if let Some(r) = self.chain_memo.borrow().get(&key) {
            return Ok(r.clone());
        }
        let _g = self.enter("chain product")?;
        let r = self.ch_mul_inner(q, a, y)?;
        self.chain_memo.borrow_mut().insert(key, r.clone());
        Ok(r)
    }

    fn ch_mul_inner(&self, q: &Elem, a: &Chain, y: &Elem) -> Result<Chain, DfError> {
        let (bs, star) = match a {
            Chain::Leaf(u) if u == q => return Ok(Chain::Node(vec![y.clone()], Star::App)),
            Chain::Leaf(u) => return self.leaf_or_divide(q, self.mul(u, y)?),
            Chain::Node(bs, s) => (bs, *s),
        };
        let pre = a.prefix(q);
        let bk = bs.last().unwrap();
        if star == Star::Comp {
            // (Y' ∘ b) y = Y'(b y)
            return self.ch_mul(q, &pre, &self.mul(bk, y)?);
        }
        let yp = self.chain_value(q, &pre)?;
        if self.le(y, &yp)? {
            let mut c = bs.clone();
            c.push(y.clone());
            return Ok(Chain::Node(c, Star::App));
        }
        let (s, g) = self.qdiv(y, &yp)?;
        if g.len() == 1 {
            if s == Star::App {
                return self.ch_mul(q, &pre, &self.mul(bk, &g[0])?);
            }
            // (Y' b)(Y' ∘ g) = Y'(b ∘ g) Y' ∘ Y'(b g)
            let r = self.ch_mul(q, &pre, &self.comp(bk, &g[0])?)?;
            let r = self.ch_mul(q, &r, &yp)?;
            let z = self.mul(&yp, &self.mul(bk, &g[0])?)?;
            return self.ch_comp(q, &r, &z);
        }
        let whole = self.chain_value(q, a)?;
        if g.len() == 2 && s == Star::Comp {
            let r = self.ch_mul(q, &pre, &self.mul(bk, &g[0])?)?;
            return self.ch_comp(q, &r, &self.mul(&whole, &g[1])?);
        }
        let r = self.ch_mul(q, &pre, &self.comp(bk, &g[0])?)?;
        let mut r = self.ch_mul(q, &r, &g[1])?;
        for (j, gj) in g.iter().enumerate().skip(2) {
            let z = self.mul(&whole, gj)?;
            let st = if j + 1 == g.len() { s } else { Star::App };
            r = self.chain_step(st, q, &r, &z)?;
        }
        Ok(r)
    }

    /// Top-level `q`-division of `a ∘ y` where `a` is a chain over `q`.
    pub fn ch_comp(&self, q: &Elem, a: &Chain, y: &Elem) -> Result<Chain, DfError> {
        let key = (Op::Comp, q.clone(), a.clone(), y.clone());
        if let Some(r) = self.chain_memo.borrow().get(&key) {
            return Ok(r.clone());
        }
        let _g = self.enter("chain composition")?;
        let r = self.ch_comp_inner(q, a, y)?;
        self.chain_memo.borrow_mut().insert(key, r.clone());
        Ok(r)
    }

    fn ch_comp_inner(&self, q: &Elem, a: &Chain, y: &Elem) -> Result<Chain, DfError> {
        let (bs, star) = match a {
            Chain::Leaf(u) if u == q => return Ok(Chain::Node(vec![y.clone()], Star::Comp)),
            Chain::Leaf(u) => return self.leaf_or_divide(q, self.comp(u, y)?),
            Chain::Node(bs, s) => (bs, *s),
        };
        let pre = a.prefix(q);
        let bk = bs.last().unwrap();
        if star == Star::Comp {
            return self.ch_comp(q, &pre, &self.comp(bk, y)?);
        }
        let yp = self.chain_value(q, &pre)?;
        match self.lex(y, &yp)? {
            Ordering::Less => {
                let mut c = bs.clone();
                c.push(y.clone());
                return Ok(Chain::Node(c, Star::Comp));
            }
            // Y' b ∘ Y' = Y' ∘ b
            Ordering::Equal => return self.ch_comp(q, &pre, bk),
            Ordering::Greater => {}
        }
        let (s, g) = self.qdiv(y, &yp)?;
        if g.len() == 1 {
            let bg = self.comp(bk, &g[0])?;
            return self.chain_step(s, q, &pre, &bg);
        }
        // Y ∘ y = Y y ∘ Y
        let r = self.ch_mul(q, a, y)?;
        self.ch_comp(q, &r, &self.chain_value(q, a)?)
    }

    /// Top-level `q`-division of `v`: components `g` and star `s` with
    /// `v = q g_0 ... * g_k`. Requires `v >_L q`.
    pub fn qdiv(&self, v: &Elem, q: &Elem) -> Result<(Star, Vec<Elem>), DfError> {
        if q.is_gen() {
            if v.is_gen() {
                return Err(DfError::Invariant("division of x by x".into()));
            }
            return Ok((v.star(), v.components().to_vec()));
        }
        let key = (v.clone(), q.clone());
        if let Some(r) = self.qdiv_memo.borrow().get(&key) {
            return Ok(r.clone());
        }
        let _g = self.enter("division")?;
        if self.lex(v, q)? != Ordering::Greater {
            return Err(DfError::Invariant(format!("division of {v} by larger {q}")));
        }
        self.stats.borrow_mut().divisions += 1;
        let r = self.qdiv_inner(v, q)?;
        self.qdiv_memo.borrow_mut().insert(key, r.clone());
        Ok(r)
    }

    fn qdiv_inner(&self, v: &Elem, q: &Elem) -> Result<(Star, Vec<Elem>), DfError> {
        let (qp, c, op) = (q.prefix(), q.last().clone(), q.star());
        let (s, e) = self.qdiv(v, &qp)?;
        if op == Star::App && e[0] == c {
            if e.len() > 1 {
                return Ok((s, e[1..].to_vec()));
            }
            if s == Star::Comp {
                // Q' ∘ c = Q c ∘ Q'
                return Ok((Star::Comp, vec![qp]));
            }
            return Err(DfError::Invariant(format!("{v} equals divisor {q}")));
        }
        let (t, f) = self.qdiv(&e[0], &c)?;
        let items: Vec<Elem> = match op {
            Star::App => f.iter().map(|fi| self.mul(&qp, fi)).collect::<Result<_, _>>()?,
            Star::Comp if f.len() == 1 && t == Star::Comp => vec![f[0].clone(), self.mul(&qp, &c)?],
            Star::Comp => {
                let mut items = vec![f[0].clone()];
                for fi in &f[1..] {
                    items.push(self.mul(&qp, fi)?);
                }
                items
            }
        };
        let mut d = Chain::Leaf(q.clone());
        for (i, it) in items.iter().enumerate() {
            let st = if t == Star::Comp && i + 1 == items.len() { Star::Comp } else { Star::App };
            d = self.chain_step(st, q, &d, it)?;
        }
        for (j, ej) in e.iter().enumerate().skip(1) {
            let st = if s == Star::Comp && j + 1 == e.len() { Star::Comp } else { Star::App };
            d = self.chain_step(st, q, &d, ej)?;
        }
        if e.len() == 1 && s == Star::Comp {
            d = self.ch_comp(q, &d, &qp)?;
        }
        match d {
            Chain::Node(g, st) => Ok((st, g)),
            Chain::Leaf(_) => Err(DfError::Invariant(format!("division of {v} by {q} collapsed"))),
        }
    }

    // ---- terms ----

    /// Canonical x-division form of a raw term.
    pub fn df_of_term(&self, t: &Term) -> Result<Elem, DfError> {
        if let Some(e) = self.term_memo.borrow().get(t) {
            return Ok(e.clone());
        }
        let e = match t.kind() {
            Kind::Gen => Elem::gen(),
            Kind::App(a, b) => self.mul(&self.df_of_term(a)?, &self.df_of_term(b)?)?,
            Kind::Comp(a, b) => self.comp(&self.df_of_term(a)?, &self.df_of_term(b)?)?,
        };
        self.term_memo.borrow_mut().insert(t.clone(), e.clone());
        Ok(e)
    }

    pub fn compare_terms(&self, s: &Term, t: &Term) -> Result<Ordering, DfError> {
        self.lex(&self.df_of_term(s)?, &self.df_of_term(t)?)
    }

    /// `p^(n)` as an element.
    pub fn power_app(&self, p: &Elem, n: usize) -> Result<Elem, DfError> {
        let mut e = p.clone();
        for _ in 0..n {
            e = self.mul(p, &e)?;
        }
        Ok(e)
    }

    /// Least `n ≥ 1` with `p^(n) >_L q`.
    pub fn find_power(&self, p: &Term, q: &Term) -> Result<usize, DfError> {
        let (p, q) = (self.df_of_term(p)?, self.df_of_term(q)?);
        let mut e = p.clone();
        for n in 1..=self.limits.power_bound {
            e = self.mul(&p, &e)?;
            if self.lex(&e, &q)? == Ordering::Greater {
                return Ok(n);
            }
        }
        Err(DfError::Watchdog { what: "find_power", limit: self.limits.power_bound })
    }
}

/// Lazily generated associated sequence of an x-form, without the leading `x`.
struct Seq {
    comps: Vec<Elem>,
    comp: bool,
    i: usize,
    prev: Option<Elem>,
    cur: Option<Elem>,
}

impl Seq {
    fn new(e: &Elem) -> Seq {
        Seq { comps: e.components().to_vec(), comp: e.is_comp(), i: 0, prev: None, cur: None }
    }

    fn next(&mut self) -> Option<Elem> {
        let i = self.i;
        self.i += 1;
        if i < self.comps.len() {
            return self.comps.get(i).cloned();
        }
        if !self.comp {
            return None;
        }
        // I_1 = u, I_2 = u a_n, I_{m+2} = I_{m+1} I_m with u the prefix
        let n = self.comps.len();
        let next = match (&self.prev, &self.cur) {
            (None, None) if n == 1 => Elem::gen(),
            (None, None) => Elem::node(self.comps[..n - 1].to_vec(), Star::App),
            (None, Some(u)) => u.append(self.comps[n - 1].clone(), Star::App),
            (Some(p), Some(c)) => c.append(p.clone(), Star::App),
            (Some(_), None) => unreachable!(),
        };
        self.prev = self.cur.take();
        self.cur = Some(next.clone());
        Some(next)
    }
}
