use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use ldf_term::Star;

use crate::dfterm::DfTerm;
use crate::elem::Elem;
use crate::engine::Engine;
use crate::DfError;

/// Which clause of the dominance relation `u ⊐^p v` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    /// `u <_L p`, `u >_L v` and `u ∘ v ≤_L p`.
    BelowDivisor,
    /// `u = p`.
    Divisor,
    /// `u = pa`, `v ≤_L p`.
    SingleLeaf,
    /// `u = pa`, `v = p b_0 ...` with `a ⊐ b_0`.
    SingleNode,
    /// `u = p ∘ a` with `a ⊐ v`.
    SingleComp,
    /// `u = p a_0 ... a_n`, `v ≤_L p a_0 ... a_{n-1}`.
    Below,
    /// `u = p a_0 ... a_n`, `v = p a_0 ... a_{n-1} v_n ...` with `a_n ⊐ v_n` and
    /// `a_n ∘ v_n ≤_L p a_0 ... a_{n-2}`.
    Extends,
    /// `u = p a_0 ... a_{n-1} ∘ a_n` with `a_n ⊐ v` and `a_n ∘ v ≤_L p a_0 ... a_{n-2}`.
    CompNode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpWitness {
    pub clause: Clause,
    pub sub: Option<Box<SharpWitness>>,
}

impl SharpWitness {
    fn leaf(clause: Clause) -> SharpWitness {
        SharpWitness { clause, sub: None }
    }

    fn with(clause: Clause, sub: SharpWitness) -> SharpWitness {
        SharpWitness { clause, sub: Some(Box::new(sub)) }
    }

    pub fn depth(&self) -> usize {
        1 + self.sub.as_ref().map_or(0, |s| s.depth())
    }
}

/// How a product was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tier {
    /// Explicit case formulas under `u ⊐^p v`.
    One,
    /// Division of the product's value computed by the x-form chain calculus.
    Two,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CalculusStats {
    pub tier1: u64,
    pub tier2: u64,
    /// Recursive explicit-formula calls checked for strict descent.
    pub descent_checks: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Op {
    Mul,
    Comp,
}

impl Op {
    fn star(self) -> Star {
        match self {
            Op::Mul => Star::App,
            Op::Comp => Star::Comp,
        }
    }
}

type Frame = (DfTerm, DfTerm, Op);

/// Products of p-division forms over a fixed divisor.
pub struct Calculus<'e> {
    eng: &'e Engine,
    p: Elem,
    sharp_memo: RefCell<HashMap<(DfTerm, DfTerm), Option<SharpWitness>>>,
    prod_memo: RefCell<HashMap<(Op, DfTerm, DfTerm), (DfTerm, Tier)>>,
    stats: RefCell<CalculusStats>,
}

impl<'e> Calculus<'e> {
    pub fn new(eng: &'e Engine, p: &Elem) -> Calculus<'e> {
        Calculus {
            eng,
            p: p.clone(),
            sharp_memo: RefCell::default(),
            prod_memo: RefCell::default(),
            stats: RefCell::default(),
        }
    }

    pub fn divisor(&self) -> &Elem {
        &self.p
    }

    pub fn stats(&self) -> CalculusStats {
        *self.stats.borrow()
    }

    fn leaf_p(&self) -> DfTerm {
        DfTerm::Leaf(self.p.clone())
    }

    /// Bound `p a_0 ... a_{n-2}` for a node with components `a_0 ... a_n`, `n ≥ 1`.
    fn bound(&self, c: &[DfTerm]) -> DfTerm {
        debug_assert!(c.len() >= 2);
        if c.len() == 2 {
            self.leaf_p()
        } else {
            DfTerm::Node(c[..c.len() - 2].to_vec(), Star::App)
        }
    }

    // ---- dominance ----

    pub fn sharp(&self, u: &DfTerm, v: &DfTerm) -> Result<Option<SharpWitness>, DfError> {
        let key = (u.clone(), v.clone());
        if let Some(w) = self.sharp_memo.borrow().get(&key) {
            return Ok(w.clone());
        }
        let _g = self.eng.enter("sharp")?;
        let w = self.sharp_inner(u, v)?;
        self.sharp_memo.borrow_mut().insert(key, w.clone());
        Ok(w)
    }

    fn sharp_inner(&self, u: &DfTerm, v: &DfTerm) -> Result<Option<SharpWitness>, DfError> {
        let eng = self.eng;
        let (c, star) = match u {
            DfTerm::Leaf(e) if *e == self.p => return Ok(Some(SharpWitness::leaf(Clause::Divisor))),
            DfTerm::Leaf(e) => {
                let DfTerm::Leaf(f) = v else { return Ok(None) };
                let ok = eng.lex(e, f)? == Ordering::Greater && eng.le(&eng.comp(e, f)?, &self.p)?;
                return Ok(ok.then(|| SharpWitness::leaf(Clause::BelowDivisor)));
            }
            DfTerm::Node(c, s) => (c, *s),
        };
        let n = c.len() - 1;
        match (star, n) {
            (Star::Comp, 0) => Ok(self.sharp(&c[0], v)?.map(|w| SharpWitness::with(Clause::SingleComp, w))),
            (Star::App, 0) => match v {
                DfTerm::Leaf(_) => Ok(Some(SharpWitness::leaf(Clause::SingleLeaf))),
                DfTerm::Node(b, _) => Ok(self.sharp(&c[0], &b[0])?.map(|w| SharpWitness::with(Clause::SingleNode, w))),
            },
            (Star::App, _) => {
                let q = u.prefix(&self.p);
                if eng.df_le(&self.p, v, &q)? {
                    return Ok(Some(SharpWitness::leaf(Clause::Below)));
                }
                let vc = v.components();
                if vc.len() <= n || vc[..n] != c[..n] {
                    return Ok(None);
                }
                let Some(w) = self.sharp(&c[n], &vc[n])? else { return Ok(None) };
                let prod = self.explicit(Op::Comp, &c[n], &vc[n], None)?;
                if eng.df_le(&self.p, &prod, &self.bound(c))? {
                    Ok(Some(SharpWitness::with(Clause::Extends, w)))
                } else {
                    Ok(None)
                }
            }
            (Star::Comp, _) => {
                let Some(w) = self.sharp(&c[n], v)? else { return Ok(None) };
                let prod = self.explicit(Op::Comp, &c[n], v, None)?;
                if eng.df_le(&self.p, &prod, &self.bound(c))? {
                    Ok(Some(SharpWitness::with(Clause::CompNode, w)))
                } else {
                    Ok(None)
                }
            }
        }
    }

    /// Re-checks the conditions named by a witness, recursively.
    pub fn replay(&self, u: &DfTerm, v: &DfTerm, w: &SharpWitness) -> Result<bool, DfError> {
        let eng = self.eng;
        let sub_ok = |a: &DfTerm, b: &DfTerm| -> Result<bool, DfError> {
            match &w.sub {
                Some(s) => self.replay(a, b, s),
                None => Ok(false),
            }
        };
        let c = u.components();
        Ok(match (w.clause, u) {
            (Clause::Divisor, DfTerm::Leaf(e)) => *e == self.p,
            (Clause::BelowDivisor, DfTerm::Leaf(e)) => match v {
                DfTerm::Leaf(f) => {
                    eng.lex(e, &self.p)? == Ordering::Less
                        && eng.lex(e, f)? == Ordering::Greater
                        && eng.le(&eng.comp(e, f)?, &self.p)?
                }
                _ => false,
            },
            (Clause::SingleComp, _) => c.len() == 1 && u.star() == Star::Comp && sub_ok(&c[0], v)?,
            (Clause::SingleLeaf, _) => c.len() == 1 && u.star() == Star::App && v.is_leaf(),
            (Clause::SingleNode, _) => {
                c.len() == 1 && u.star() == Star::App && !v.is_leaf() && sub_ok(&c[0], &v.components()[0])?
            }
            (Clause::Below, _) => {
                c.len() >= 2 && u.star() == Star::App && eng.df_le(&self.p, v, &u.prefix(&self.p))?
            }
            (Clause::Extends, _) => {
                let n = c.len() - 1;
                let vc = v.components();
                n >= 1
                    && u.star() == Star::App
                    && vc.len() > n
                    && vc[..n] == c[..n]
                    && sub_ok(&c[n], &vc[n])?
                    && eng.df_le(&self.p, &self.explicit(Op::Comp, &c[n], &vc[n], None)?, &self.bound(c))?
            }
            (Clause::CompNode, _) => {
                let n = c.len() - 1;
                n >= 1
                    && u.star() == Star::Comp
                    && sub_ok(&c[n], v)?
                    && eng.df_le(&self.p, &self.explicit(Op::Comp, &c[n], v, None)?, &self.bound(c))?
            }
            _ => false,
        })
    }

    // ---- products ----

    /// `|u v|^p`: explicit formulas when `u ⊐^p v`, otherwise division of the product's value.
    pub fn mul_df(&self, u: &DfTerm, v: &DfTerm) -> Result<(DfTerm, Tier), DfError> {
        self.product(Op::Mul, u, v)
    }

    /// `|u ∘ v|^p`, same strategy as `mul_df`.
    pub fn comp_df(&self, u: &DfTerm, v: &DfTerm) -> Result<(DfTerm, Tier), DfError> {
        self.product(Op::Comp, u, v)
    }

    fn product(&self, op: Op, u: &DfTerm, v: &DfTerm) -> Result<(DfTerm, Tier), DfError> {
        let key = (op, u.clone(), v.clone());
        if let Some(r) = self.prod_memo.borrow().get(&key) {
            return Ok(r.clone());
        }
        let r = if self.sharp(u, v)?.is_some() {
            (self.explicit(op, u, v, None)?, Tier::One)
        } else {
            self.stats.borrow_mut().tier2 += 1;
            let (a, b) = (self.eng.df_value(&self.p, u)?, self.eng.df_value(&self.p, v)?);
            let w = self.eng.apply(op.star(), &a, &b)?;
            (self.eng.to_df(&self.p, &w)?, Tier::Two)
        };
        self.prod_memo.borrow_mut().insert(key, r.clone());
        Ok(r)
    }

    /// Recursive call with a strict-descent check against the calling frame.
    fn sub(&self, op: Op, u: &DfTerm, v: &DfTerm, parent: &Frame) -> Result<DfTerm, DfError> {
        let (pu, pv, pop) = parent;
        let descends = pu.has_proper_subterm(u)
            || (u == pu && (pv.has_proper_subterm(v) || (v == pv && op < *pop)));
        self.stats.borrow_mut().descent_checks += 1;
        if !descends {
            return Err(DfError::Invariant(format!("explicit product recursion does not descend at ({u}, {v})")));
        }
        if self.sharp(u, v)?.is_none() {
            return Err(DfError::Invariant(format!("dominance fails for sub-product ({u}, {v})")));
        }
        self.explicit(op, u, v, Some(parent))
    }

    /// Case formulas for `u v` and `u ∘ v`; requires `u ⊐^p v`.
    fn explicit(&self, op: Op, u: &DfTerm, v: &DfTerm, _parent: Option<&Frame>) -> Result<DfTerm, DfError> {
        let key = (op, u.clone(), v.clone());
        if let Some((r, Tier::One)) = self.prod_memo.borrow().get(&key) {
            return Ok(r.clone());
        }
        let _g = self.eng.enter("explicit product")?;
        self.stats.borrow_mut().tier1 += 1;
        self.eng.stats.borrow_mut().tier1 += 1;
        let r = self.explicit_inner(op, u, v)?;
        self.prod_memo.borrow_mut().insert(key, (r.clone(), Tier::One));
        Ok(r)
    }

    fn explicit_inner(&self, op: Op, u: &DfTerm, v: &DfTerm) -> Result<DfTerm, DfError> {
        let frame: Frame = (u.clone(), v.clone(), op);
        let (c, star) = match u {
            DfTerm::Leaf(e) if *e == self.p => return Ok(DfTerm::Node(vec![v.clone()], op.star())),
            DfTerm::Leaf(e) => {
                let DfTerm::Leaf(f) = v else {
                    return Err(DfError::Invariant(format!("leaf {e} below the divisor against node {v}")));
                };
                return Ok(DfTerm::Leaf(self.eng.apply(op.star(), e, f)?));
            }
            DfTerm::Node(c, s) => (c, *s),
        };
        let n = c.len() - 1;
        let a = &c[n];
        if star == Star::Comp {
            let q = &c[..n];
            if n == 0 {
                // (p ∘ a) v = p (a v), (p ∘ a) ∘ v = p ∘ (a ∘ v)
                let r = self.sub(op, a, v, &frame)?;
                return Ok(DfTerm::Node(vec![r], op.star()));
            }
            let r = self.sub(op, a, v, &frame)?;
            return match op {
                Op::Mul => Ok(DfTerm::Node(with(q, [r]), Star::App)),
                Op::Comp => self.close_comp(q.to_vec(), r),
            };
        }
        let qc = &c[..n];
        let q = u.prefix(&self.p);
        if self.eng.df_le(&self.p, v, &q)? {
            return match op {
                Op::Mul => Ok(u.extend(v.clone(), Star::App)),
                Op::Comp => self.close_comp(c.clone(), v.clone()),
            };
        }
        let g = &v.components()[n..];
        let s = v.star();
        let t = g.len() - 1;
        let ag = |o: Op| self.sub(o, a, &g[0], &frame);
        match (op, s, t) {
            (Op::Mul, Star::App, 0) => Ok(DfTerm::Node(with(qc, [ag(Op::Mul)?]), Star::App)),
            // Q a (Q ∘ g) = Q (a ∘ g) Q ∘ Q (a g)
            (Op::Mul, Star::Comp, 0) => {
                let tail = DfTerm::Node(with(qc, [ag(Op::Mul)?]), Star::App);
                Ok(DfTerm::Node(with(qc, [ag(Op::Comp)?, q, tail]), Star::Comp))
            }
            // Q a (Q g_0 ∘ g_1) = Q (a ∘ g_0) g_1 ∘ Q (a g_0)
            (Op::Mul, Star::Comp, 1) => {
                let tail = DfTerm::Node(with(qc, [ag(Op::Mul)?]), Star::App);
                Ok(DfTerm::Node(with(qc, [ag(Op::Comp)?, g[1].clone(), tail]), Star::Comp))
            }
            (Op::Mul, _, _) => Ok(DfTerm::Node(self.long_product(qc, &frame, g, t)?, s)),
            (Op::Comp, Star::App, 0) => Ok(DfTerm::Node(with(qc, [ag(Op::Comp)?]), Star::App)),
            (Op::Comp, Star::Comp, 0) => self.close_comp(qc.to_vec(), ag(Op::Comp)?),
            (Op::Comp, Star::Comp, 1) => self.close_comp(with(qc, [ag(Op::Comp)?]), g[1].clone()),
            // u ∘ v = u v ∘ u
            (Op::Comp, Star::App, _) => self.close_comp(self.long_product(qc, &frame, g, t)?, u.clone()),
            (Op::Comp, Star::Comp, _) => {
                let head = self.long_product(qc, &frame, g, t - 1)?;
                let last = self.sub(Op::Comp, u, &g[t], &frame)?;
                self.close_comp(head, last)
            }
        }
    }

    /// `Q (a ∘ g_0) g_1 |u g_2| ... |u g_k|` for the first `k + 1` entries of `g`.
    fn long_product(&self, qc: &[DfTerm], frame: &Frame, g: &[DfTerm], k: usize) -> Result<Vec<DfTerm>, DfError> {
        let (u, _, _) = frame;
        let a = u.components().last().unwrap();
        let mut out = with(qc, [self.sub(Op::Comp, a, &g[0], frame)?, g[1].clone()]);
        for gj in &g[2..=k] {
            out.push(self.sub(Op::Mul, u, gj, frame)?);
        }
        Ok(out)
    }

    /// `p c_0 ... c_k ∘ y` made prenormal using `Y b ∘ Y = Y ∘ b`.
    fn close_comp(&self, mut c: Vec<DfTerm>, mut y: DfTerm) -> Result<DfTerm, DfError> {
        loop {
            if c.is_empty() {
                return Ok(DfTerm::Node(vec![y], Star::Comp));
            }
            let bound = DfTerm::Node(c.clone(), Star::App).prefix(&self.p);
            match self.eng.df_lex(&self.p, &y, &bound)? {
                Ordering::Less => {
                    c.push(y);
                    return Ok(DfTerm::Node(c, Star::Comp));
                }
                Ordering::Equal => y = c.pop().unwrap(),
                Ordering::Greater => {
                    return Err(DfError::Invariant(format!("composition with {y} exceeds bound {bound}")))
                }
            }
        }
    }
}

fn with<const N: usize>(head: &[DfTerm], tail: [DfTerm; N]) -> Vec<DfTerm> {
    let mut v = head.to_vec();
    v.extend(tail);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> DfTerm {
        DfTerm::Leaf(Elem::gen())
    }

    #[test]
    fn divisor_dominates_everything() {
        let eng = Engine::default();
        let calc = Calculus::new(&eng, &Elem::gen());
        let v = DfTerm::Node(vec![x(), x()], Star::Comp);
        let w = calc.sharp(&x(), &v).unwrap().unwrap();
        assert_eq!(w.clause, Clause::Divisor);
        assert!(calc.replay(&x(), &v, &w).unwrap());
    }

    #[test]
    fn composition_with_prefix_collapses() {
        let eng = Engine::default();
        let calc = Calculus::new(&eng, &Elem::gen());
        let u = DfTerm::Node(vec![x()], Star::App);
        let (r, tier) = calc.comp_df(&u, &x()).unwrap();
        assert_eq!((r, tier), (DfTerm::Node(vec![x()], Star::Comp), Tier::One));
    }
}
