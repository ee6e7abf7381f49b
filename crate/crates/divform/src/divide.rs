use std::cmp::Ordering;

use ldf_term::{Star, Term};

use crate::dfterm::DfTerm;
use crate::elem::Elem;
use crate::engine::Engine;
use crate::DfError;

/// `|w|^p` together with the divisor it was computed over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivForm {
    pub divisor: Term,
    pub p: Elem,
    pub root: DfTerm,
}

impl DivForm {
    /// Literal term `p a_0 ... * a_n` with the divisor spelled as given.
    pub fn to_term(&self) -> Term {
        self.root.to_term(&self.divisor)
    }
}

/// Division of `w` by `p`.
pub fn divide(eng: &Engine, p: &Term, w: &Term) -> Result<DivForm, DfError> {
    let pe = eng.df_of_term(p)?;
    let we = eng.df_of_term(w)?;
    let root = eng.to_df(&pe, &we)?;
    Ok(DivForm { divisor: p.clone(), p: pe, root })
}

/// A ⟨p,q⟩-division form: a p-division form whose head components are q-divided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hybrid {
    Leaf(Elem),
    Node { head: DfTerm, rest: Vec<Hybrid>, star: Star },
}

/// Replaces the first component of every node of `u` (a p-division form) by its q-division form.
pub fn hybrid_df(eng: &Engine, p: &Elem, q: &Elem, u: &DfTerm) -> Result<Hybrid, DfError> {
    match u {
        DfTerm::Leaf(e) => Ok(Hybrid::Leaf(e.clone())),
        DfTerm::Node(c, star) => {
            let head = eng.to_df(q, &eng.df_value(p, &c[0])?)?;
            let rest = c[1..].iter().map(|a| hybrid_df(eng, p, q, a)).collect::<Result<_, _>>()?;
            Ok(Hybrid::Node { head, rest, star: *star })
        }
    }
}

impl Engine {
    /// Checks the greatest-quotient property at the root of `u`: `p a_0 ≤_L w`, and no
    /// listed candidate `a >_L a_0` has `p a ≤_L w`.
    pub fn quotient_is_greatest(&self, p: &Elem, u: &DfTerm, candidates: &[Elem]) -> Result<bool, DfError> {
        let DfTerm::Node(c, _) = u else { return Ok(true) };
        let w = self.df_value(p, u)?;
        let a0 = self.df_value(p, &c[0])?;
        if self.lex(&self.mul(p, &a0)?, &w)? == Ordering::Greater {
            return Ok(false);
        }
        for a in candidates {
            if self.lex(&a0, a)? == Ordering::Less && self.lex(&self.mul(p, a)?, &w)? != Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
