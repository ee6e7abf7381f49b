use std::cmp::Ordering;
use std::fmt;

use ldf_term::{Star, Term};

use crate::elem::Elem;
use crate::engine::Engine;
use crate::DfError;

/// A term in p-division form for an implicit divisor `p`: a leaf holding an element
/// `≤_L p`, or `p a_0 ... a_{n-1} * a_n` with prenormal components.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum DfTerm {
    Leaf(Elem),
    Node(Vec<DfTerm>, Star),
}

impl DfTerm {
    pub fn components(&self) -> &[DfTerm] {
        match self {
            DfTerm::Leaf(_) => &[],
            DfTerm::Node(c, _) => c,
        }
    }

    pub fn star(&self) -> Star {
        match self {
            DfTerm::Leaf(_) => Star::App,
            DfTerm::Node(_, s) => *s,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, DfTerm::Leaf(_))
    }

    /// `p a_0 ... a_{n-1}`; the divisor itself for single-component nodes.
    pub fn prefix(&self, p: &Elem) -> DfTerm {
        let c = self.components();
        match c.len() {
            0 => panic!("prefix of a leaf"),
            1 => DfTerm::Leaf(p.clone()),
            n => DfTerm::Node(c[..n - 1].to_vec(), Star::App),
        }
    }

    /// Appends a component to the divisor or to an application node.
    pub fn extend(&self, a: DfTerm, star: Star) -> DfTerm {
        let mut c = self.components().to_vec();
        c.push(a);
        DfTerm::Node(c, star)
    }

    /// The x-form of an element viewed as an x-division form.
    pub fn from_x(e: &Elem) -> DfTerm {
        if e.is_gen() {
            DfTerm::Leaf(e.clone())
        } else {
            DfTerm::Node(e.components().iter().map(DfTerm::from_x).collect(), e.star())
        }
    }

    /// Literal flattening `p a_0 ... * a_n` with `p` spelled as the given term.
    pub fn to_term(&self, p: &Term) -> Term {
        match self {
            DfTerm::Leaf(e) => e.to_term(),
            DfTerm::Node(c, star) => {
                let (last, init) = c.split_last().unwrap();
                let pre = p.clone().apply_all(init.iter().map(|a| a.to_term(p)));
                star.join(pre, last.to_term(p))
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            DfTerm::Leaf(_) => 1,
            DfTerm::Node(c, _) => 1 + c.iter().map(DfTerm::size).sum::<usize>(),
        }
    }

    /// True when `sub` occurs as a component at any depth.
    pub fn has_proper_subterm(&self, sub: &DfTerm) -> bool {
        self.components().iter().any(|c| c == sub || c.has_proper_subterm(sub))
    }

    pub fn subterms(&self) -> Vec<&DfTerm> {
        let mut out = vec![self];
        for c in self.components() {
            out.extend(c.subterms());
        }
        out
    }
}

impl fmt::Display for DfTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DfTerm::Leaf(e) => write!(f, "{e}"),
            DfTerm::Node(c, s) => {
                f.write_str("[")?;
                for (i, a) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    if a.is_leaf() {
                        write!(f, "{a}")?;
                    } else {
                        write!(f, "({a})")?;
                    }
                }
                write!(f, "] {s}")
            }
        }
    }
}

/// Associated sequence of a division-form term, generated on demand.
///
/// Leaves give `⟨w⟩`, application nodes `⟨p, a_0, ..., a_n⟩`, composition nodes continue
/// with the iterates `I_m(p a_0 ... a_{n-1}, a_n)`.
#[derive(Clone, Debug)]
pub struct AssocSeq {
    p: Elem,
    term: DfTerm,
    i: usize,
    prev: Option<DfTerm>,
    cur: Option<DfTerm>,
}

impl AssocSeq {
    pub fn new(p: &Elem, term: &DfTerm) -> AssocSeq {
        AssocSeq { p: p.clone(), term: term.clone(), i: 0, prev: None, cur: None }
    }
}

impl Iterator for AssocSeq {
    type Item = DfTerm;

    fn next(&mut self) -> Option<DfTerm> {
        let i = self.i;
        self.i += 1;
        let (c, star) = match &self.term {
            DfTerm::Leaf(_) => return (i == 0).then(|| self.term.clone()),
            DfTerm::Node(c, s) => (c, *s),
        };
        if i == 0 {
            return Some(DfTerm::Leaf(self.p.clone()));
        }
        if i <= c.len() {
            return Some(c[i - 1].clone());
        }
        if star == Star::App {
            return None;
        }
        let next = match (&self.prev, &self.cur) {
            (None, None) => self.term.prefix(&self.p),
            (None, Some(u)) => u.extend(c.last().unwrap().clone(), Star::App),
            (Some(p), Some(cur)) => cur.extend(p.clone(), Star::App),
            (Some(_), None) => unreachable!(),
        };
        self.prev = self.cur.take();
        self.cur = Some(next.clone());
        Some(next)
    }
}

impl Engine {
    /// The element denoted by a p-division-form term.
    pub fn df_value(&self, p: &Elem, u: &DfTerm) -> Result<Elem, DfError> {
        match u {
            DfTerm::Leaf(e) => Ok(e.clone()),
            DfTerm::Node(c, s) => {
                let mut e = p.clone();
                for (i, a) in c.iter().enumerate() {
                    let star = if i + 1 == c.len() { *s } else { Star::App };
                    e = self.apply(star, &e, &self.df_value(p, a)?)?;
                }
                Ok(e)
            }
        }
    }

    /// Lexicographic comparison of associated sequences over the same divisor.
    pub fn df_lex(&self, p: &Elem, u: &DfTerm, v: &DfTerm) -> Result<Ordering, DfError> {
        if u == v {
            return Ok(Ordering::Equal);
        }
        match (u, v) {
            (DfTerm::Leaf(a), DfTerm::Leaf(b)) => return self.lex(a, b),
            (DfTerm::Leaf(_), _) => return Ok(Ordering::Less),
            (_, DfTerm::Leaf(_)) => return Ok(Ordering::Greater),
            _ => {}
        }
        let _g = self.enter("lex")?;
        let (mut su, mut sv) = (AssocSeq::new(p, u), AssocSeq::new(p, v));
        su.next();
        sv.next();
        let bound = self.limits().lex_bound;
        for _ in 0..=bound {
            match (su.next(), sv.next()) {
                (None, None) => {
                    return Err(DfError::Invariant(format!("distinct forms {u} and {v} share a sequence")))
                }
                (None, Some(_)) => return Ok(Ordering::Less),
                (Some(_), None) => return Ok(Ordering::Greater),
                (Some(a), Some(b)) => {
                    let o = self.df_lex(p, &a, &b)?;
                    if o != Ordering::Equal {
                        return Ok(o);
                    }
                }
            }
        }
        Err(DfError::Watchdog { what: "lex", limit: bound })
    }

    pub(crate) fn df_le(&self, p: &Elem, u: &DfTerm, v: &DfTerm) -> Result<bool, DfError> {
        Ok(self.df_lex(p, u, v)? != Ordering::Greater)
    }

    /// Prenormality of `p c_0 ... * c_n`: `c_j ⪯ p c_0 ... c_{j-2}` for `j ≥ 1`, and for a
    /// final composition with at least two components the last bound is strict.
    pub fn is_prenormal(&self, p: &Elem, c: &[DfTerm], star: Star) -> Result<bool, DfError> {
        if c.is_empty() {
            return Ok(false);
        }
        let mut q = DfTerm::Leaf(p.clone());
        let mut bound: Option<DfTerm> = None;
        for (j, a) in c.iter().enumerate() {
            if let Some(b) = &bound {
                let last_comp = star == Star::Comp && j + 1 == c.len();
                let o = self.df_lex(p, a, b)?;
                if o == Ordering::Greater || (last_comp && o == Ordering::Equal) {
                    return Ok(false);
                }
            }
            bound = Some(q.clone());
            q = q.extend(a.clone(), Star::App);
        }
        Ok(true)
    }

    /// Full structural check of a p-division-form term.
    pub fn is_valid_df(&self, p: &Elem, u: &DfTerm) -> Result<bool, DfError> {
        match u {
            DfTerm::Leaf(e) => Ok(self.is_valid(e)? && self.le(e, p)?),
            DfTerm::Node(c, s) => {
                for a in c {
                    if !self.is_valid_df(p, a)? {
                        return Ok(false);
                    }
                }
                self.is_prenormal(p, c, *s)
            }
        }
    }

    /// `|w|^p` for elements: a leaf when `w ≤_L p`, otherwise the divided node.
    pub fn to_df(&self, p: &Elem, w: &Elem) -> Result<DfTerm, DfError> {
        if self.le(w, p)? {
            return Ok(DfTerm::Leaf(w.clone()));
        }
        let (s, g) = self.qdiv(w, p)?;
        let c = g.iter().map(|a| self.to_df(p, a)).collect::<Result<_, _>>()?;
        Ok(DfTerm::Node(c, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> DfTerm {
        DfTerm::Leaf(Elem::gen())
    }

    #[test]
    fn comp_node_sequence_continues_with_iterates() {
        let u = DfTerm::Node(vec![x()], Star::Comp);
        let seq: Vec<_> = AssocSeq::new(&Elem::gen(), &u).take(5).collect();
        let xx = DfTerm::Node(vec![x()], Star::App);
        let xxx = DfTerm::Node(vec![x(), x()], Star::App);
        assert_eq!(seq, vec![x(), x(), x(), xx, xxx]);
    }

    #[test]
    fn flattening_uses_the_divisor() {
        let p = Term::app(Term::gen(), Term::gen());
        let u = DfTerm::Node(vec![x(), x()], Star::Comp);
        assert_eq!(u.to_term(&p).compact(), "(xxx o x)");
    }
}
