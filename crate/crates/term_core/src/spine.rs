use crate::{Kind, Star, Term};

/// `head args[0] ... args[k-1] * args[k]`; with no args the term is the head itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spine {
    pub head: Term,
    pub args: Vec<Term>,
    pub star: Star,
}

fn app_chain(t: &Term) -> (Term, Vec<Term>) {
    let mut args = Vec::new();
    let mut cur = t.clone();
    while let Kind::App(a, b) = cur.kind() {
        args.push(b.clone());
        cur = a.clone();
    }
    args.reverse();
    (cur, args)
}

impl Term {
    pub fn spine(&self) -> Spine {
        match self.kind() {
            Kind::Comp(l, r) => {
                let (head, mut args) = app_chain(l);
                args.push(r.clone());
                Spine { head, args, star: Star::Comp }
            }
            _ => {
                let (head, args) = app_chain(self);
                Spine { head, args, star: Star::App }
            }
        }
    }

    /// Left factors of the spine: `head`, `head a_0`, ..., excluding the term itself.
    pub fn left_chain(&self) -> Vec<Term> {
        let s = self.spine();
        let mut out = vec![s.head.clone()];
        let mut cur = s.head;
        if let Some((_, init)) = s.args.split_last() {
            for a in init {
                cur = Term::app(cur, a.clone());
                out.push(cur.clone());
            }
        } else {
            out.clear();
        }
        out
    }
}

impl Spine {
    pub fn reassemble(&self) -> Term {
        match self.args.split_last() {
            None => self.head.clone(),
            Some((last, init)) => {
                let pre = self.head.clone().apply_all(init.iter().cloned());
                self.star.join(pre, last.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    #[test]
    fn examples() {
        let x = Term::gen();
        let s = parse("(x x) x").unwrap().spine();
        assert_eq!((s.head.clone(), s.args.len(), s.star), (x.clone(), 2, Star::App));
        let s = parse("x x o x").unwrap().spine();
        assert_eq!((s.head.clone(), s.args.len(), s.star), (x.clone(), 2, Star::Comp));
        let s = x.spine();
        assert_eq!((s.head.clone(), s.args.len(), s.star), (x.clone(), 0, Star::App));
    }

    #[test]
    fn comp_head() {
        let t = parse("(x o x) x x").unwrap();
        let s = t.spine();
        assert_eq!(s.head, parse("x o x").unwrap());
        assert_eq!(s.reassemble(), t);
        assert_eq!(t.left_chain(), vec![parse("x o x").unwrap(), parse("(x o x) x").unwrap()]);
        assert!(x_chain_empty());
    }

    fn x_chain_empty() -> bool {
        Term::gen().left_chain().is_empty()
    }
}
