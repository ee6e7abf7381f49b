//! p-normal forms: terms over the alphabet `{q <_L p} ∪ {p^(i)}` headed by a power of `p`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use ldf_divform::{Chain, DfError, Elem, Engine};
use ldf_term::{power_app, Star, Term};
use serde_json::{json, Value};

/// A leaf `q <_L p`, or `p^(i) a_0 ... a_{n-1} * a_n`. An empty component list is the
/// bare power `p^(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NfTerm {
    Leaf(Elem),
    Node { power: usize, comps: Vec<NfTerm>, star: Star },
}

impl NfTerm {
    pub fn bare(power: usize) -> NfTerm {
        NfTerm::Node { power, comps: Vec::new(), star: Star::App }
    }

    pub fn components(&self) -> &[NfTerm] {
        match self {
            NfTerm::Leaf(_) => &[],
            NfTerm::Node { comps, .. } => comps,
        }
    }

    fn extend(&self, a: NfTerm) -> NfTerm {
        let NfTerm::Node { power, comps, .. } = self else { unreachable!("extend of a leaf") };
        let mut comps = comps.clone();
        comps.push(a);
        NfTerm::Node { power: *power, comps, star: Star::App }
    }

    /// The literal term with every `p^(i)` expanded.
    pub fn to_term(&self, p: &Term) -> Term {
        match self {
            NfTerm::Leaf(e) => e.to_term(),
            NfTerm::Node { power, comps, star } => {
                let head = power_app(p, *power);
                match comps.split_last() {
                    None => head,
                    Some((last, init)) => {
                        let pre = head.apply_all(init.iter().map(|a| a.to_term(p)));
                        star.join(pre, last.to_term(p))
                    }
                }
            }
        }
    }

    fn sexpr_body(&self) -> String {
        match self {
            NfTerm::Leaf(e) => e.to_string(),
            NfTerm::Node { power, comps, .. } if comps.is_empty() => format!("p^({power})"),
            NfTerm::Node { power, comps, star } => {
                let items: Vec<String> = comps
                    .iter()
                    .map(|a| match a.components() {
                        [] => a.sexpr_body(),
                        _ => format!("({})", a.sexpr_body()),
                    })
                    .collect();
                format!("p^({power}) [{}] {star}", items.join(" "))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            NfTerm::Leaf(e) => Value::String(e.to_string()),
            NfTerm::Node { power, comps, star } => json!({
                "power": power,
                "components": comps.iter().map(NfTerm::to_json).collect::<Vec<_>>(),
                "star": star.name(),
            }),
        }
    }
}

impl fmt::Display for NfTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sexpr_body())
    }
}

/// `|w|_p` with the divisor it was computed for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NfForm {
    pub divisor: Term,
    pub root: NfTerm,
}

impl NfForm {
    pub fn to_term(&self) -> Term {
        self.root.to_term(&self.divisor)
    }

    /// `(nf HEAD BODY)`, e.g. `(nf x p^(1) [x] app)`.
    pub fn sexpr(&self) -> String {
        format!("(nf {} {})", self.divisor.compact(), self.root)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "p": self.divisor.compact() });
        match self.root.to_json() {
            Value::Object(m) => v.as_object_mut().unwrap().extend(m),
            leaf => {
                v["leaf"] = leaf;
            }
        }
        v
    }
}

/// Normal forms over a fixed `p`, memoized by element.
pub struct Normalizer<'e> {
    eng: &'e Engine,
    p: Elem,
    powers: RefCell<Vec<Elem>>,
    memo: RefCell<HashMap<Elem, NfTerm>>,
}

impl<'e> Normalizer<'e> {
    pub fn new(eng: &'e Engine, p: &Elem) -> Normalizer<'e> {
        Normalizer { eng, p: p.clone(), powers: RefCell::new(vec![p.clone()]), memo: RefCell::default() }
    }

    /// `p^(i)` as an element.
    pub fn power(&self, i: usize) -> Result<Elem, DfError> {
        let mut pw = self.powers.borrow_mut();
        while pw.len() <= i {
            let next = self.eng.mul(&self.p, pw.last().unwrap())?;
            pw.push(next);
        }
        Ok(pw[i].clone())
    }

    pub fn nf(&self, w: &Elem) -> Result<NfTerm, DfError> {
        if let Some(r) = self.memo.borrow().get(w) {
            return Ok(r.clone());
        }
        let r = self.nf_inner(w)?;
        self.memo.borrow_mut().insert(w.clone(), r.clone());
        Ok(r)
    }

    fn nf_inner(&self, w: &Elem) -> Result<NfTerm, DfError> {
        let eng = self.eng;
        match eng.lex(w, &self.p)? {
            Ordering::Less => return Ok(NfTerm::Leaf(w.clone())),
            Ordering::Equal => return Ok(NfTerm::bare(0)),
            Ordering::Greater => {}
        }
        let (s, a) = eng.qdiv(w, &self.p)?;
        let (power, chain) = if eng.lex(&a[0], &self.p)? == Ordering::Less {
            (0, Chain::Node(a, s))
        } else {
            // p (p^(m) b_0 ... * b_k) = p^(m+1) (p b_0) ... * (p b_k)
            let NfTerm::Node { power: m, comps: b, star: t } = self.nf(&a[0])? else {
                return Err(DfError::Invariant(format!("quotient {} of {w} below the divisor", a[0])));
            };
            let h = self.power(m + 1)?;
            let mut d = Chain::Leaf(h.clone());
            for (i, bi) in b.iter().enumerate() {
                let pb = eng.mul(&self.p, &self.value(bi)?)?;
                let st = if i + 1 == b.len() { t } else { Star::App };
                d = self.step(st, &h, &d, &pb)?;
            }
            for (j, aj) in a.iter().enumerate().skip(1) {
                let st = if j + 1 == a.len() { s } else { Star::App };
                d = self.step(st, &h, &d, aj)?;
            }
            if a.len() == 1 && s == Star::Comp {
                // p ∘ a_0 = p a_0 ∘ p
                d = eng.ch_comp(&h, &d, &self.p)?;
            }
            (m + 1, d)
        };
        match chain {
            Chain::Leaf(_) => Ok(NfTerm::bare(power)),
            Chain::Node(g, star) => {
                let comps = g.iter().map(|c| self.nf(c)).collect::<Result<Vec<_>, _>>()?;
                let h = self.power(power)?;
                if eng.lex(&g[0], &h)? != Ordering::Less {
                    return Err(DfError::Invariant(format!("first component {} of {w} not below p^({power})", g[0])));
                }
                Ok(NfTerm::Node { power, comps, star })
            }
        }
    }

    fn step(&self, star: Star, h: &Elem, d: &Chain, y: &Elem) -> Result<Chain, DfError> {
        match star {
            Star::App => self.eng.ch_mul(h, d, y),
            Star::Comp => self.eng.ch_comp(h, d, y),
        }
    }

    /// The element denoted by a normal-form term.
    pub fn value(&self, u: &NfTerm) -> Result<Elem, DfError> {
        match u {
            NfTerm::Leaf(e) => Ok(e.clone()),
            NfTerm::Node { power, comps, star } => {
                let mut e = self.power(*power)?;
                for (i, a) in comps.iter().enumerate() {
                    let st = if i + 1 == comps.len() { *star } else { Star::App };
                    e = self.eng.apply(st, &e, &self.value(a)?)?;
                }
                Ok(e)
            }
        }
    }

    /// Leaves below `p`, `a_0 <_L p^(i)`, and prenormality of every node.
    pub fn is_valid(&self, u: &NfTerm) -> Result<bool, DfError> {
        let eng = self.eng;
        let NfTerm::Node { power, comps, star } = u else {
            let NfTerm::Leaf(e) = u else { unreachable!() };
            return Ok(eng.is_valid(e)? && eng.lex(e, &self.p)? == Ordering::Less);
        };
        for c in comps {
            if !self.is_valid(c)? {
                return Ok(false);
            }
        }
        if comps.is_empty() {
            return Ok(*star == Star::App);
        }
        let vals = comps.iter().map(|c| self.value(c)).collect::<Result<Vec<_>, _>>()?;
        let mut prefixes = vec![self.power(*power)?];
        for v in &vals[..vals.len() - 1] {
            prefixes.push(eng.mul(prefixes.last().unwrap(), v)?);
        }
        if eng.lex(&vals[0], &prefixes[0])? != Ordering::Less {
            return Ok(false);
        }
        for j in 1..vals.len() {
            let o = eng.lex(&vals[j], &prefixes[j - 1])?;
            let strict = *star == Star::Comp && j + 1 == vals.len();
            if o == Ordering::Greater || (strict && o == Ordering::Equal) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lexicographic comparison of associated sequences `⟨p^(i), a_0, ..., a_n, I_1, ...⟩`.
    pub fn compare(&self, u: &NfTerm, v: &NfTerm) -> Result<Ordering, DfError> {
        if u == v {
            return Ok(Ordering::Equal);
        }
        let (pu, pv) = match (u, v) {
            (NfTerm::Leaf(a), NfTerm::Leaf(b)) => return self.eng.lex(a, b),
            (NfTerm::Leaf(_), _) => return Ok(Ordering::Less),
            (_, NfTerm::Leaf(_)) => return Ok(Ordering::Greater),
            (NfTerm::Node { power: i, .. }, NfTerm::Node { power: j, .. }) => (*i, *j),
        };
        if pu != pv {
            return Ok(pu.cmp(&pv));
        }
        let bound = self.eng.limits().lex_bound;
        let (mut su, mut sv) = (NfSeq::new(u), NfSeq::new(v));
        for _ in 0..=bound {
            match (su.next(), sv.next()) {
                (None, None) => return Err(DfError::Invariant(format!("distinct forms {u} and {v} share a sequence"))),
                (None, Some(_)) => return Ok(Ordering::Less),
                (Some(_), None) => return Ok(Ordering::Greater),
                (Some(a), Some(b)) => {
                    let o = self.compare(&a, &b)?;
                    if o != Ordering::Equal {
                        return Ok(o);
                    }
                }
            }
        }
        Err(DfError::Watchdog { what: "lex", limit: bound })
    }
}

/// Entries after the head: the components, then the iterates of a composition node.
struct NfSeq {
    term: NfTerm,
    i: usize,
    prev: Option<NfTerm>,
    cur: Option<NfTerm>,
}

impl NfSeq {
    fn new(u: &NfTerm) -> NfSeq {
        NfSeq { term: u.clone(), i: 0, prev: None, cur: None }
    }

    fn next(&mut self) -> Option<NfTerm> {
        let NfTerm::Node { power, comps, star } = &self.term else { return None };
        let i = self.i;
        self.i += 1;
        if i < comps.len() {
            return Some(comps[i].clone());
        }
        if *star == Star::App {
            return None;
        }
        let n = comps.len();
        let next = match (&self.prev, &self.cur) {
            (None, None) => NfTerm::Node { power: *power, comps: comps[..n - 1].to_vec(), star: Star::App },
            (None, Some(u)) => u.extend(comps[n - 1].clone()),
            (Some(p), Some(c)) => c.extend(p.clone()),
            (Some(_), None) => unreachable!(),
        };
        self.prev = self.cur.take();
        self.cur = Some(next.clone());
        Some(next)
    }
}

/// `|w|_p`.
pub fn nf_of(eng: &Engine, p: &Term, w: &Term) -> Result<NfForm, DfError> {
    let pe = eng.df_of_term(p)?;
    let root = Normalizer::new(eng, &pe).nf(&eng.df_of_term(w)?)?;
    Ok(NfForm { divisor: p.clone(), root })
}
