//! Raw terms over the single generator `x` with application and composition.

mod enumerate;
mod parse;
mod print;
mod spine;

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use enumerate::{enumerate, enumerate_upto, Enumerator};
pub use parse::{parse, parse_corpus, ParseError};
pub use print::Format;
pub use spine::Spine;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("{what} requires n >= 1, got 0")]
    ZeroIndex { what: &'static str },
    #[error("no subterm at position {0}")]
    BadPosition(Path),
}

/// The final operation of a product chain `p a_0 ... a_{n-1} * a_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Star {
    App,
    Comp,
}

impl Star {
    pub fn name(self) -> &'static str {
        match self {
            Star::App => "app",
            Star::Comp => "comp",
        }
    }

    pub fn join(self, a: Term, b: Term) -> Term {
        match self {
            Star::App => Term::app(a, b),
            Star::Comp => Term::comp(a, b),
        }
    }
}

impl fmt::Display for Star {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Kind {
    Gen,
    App(Term, Term),
    Comp(Term, Term),
}

#[derive(Debug)]
struct Inner {
    kind: Kind,
    hash: u64,
    leaves: usize,
    nodes: usize,
    depth: usize,
    has_comp: bool,
}

/// Immutable, cheaply clonable term with cached size data and a structural hash.
#[derive(Clone)]
pub struct Term(Arc<Inner>);

impl Term {
    pub fn gen() -> Term {
        thread_local! {
            static GEN: Term = Term::build(Kind::Gen);
        }
        GEN.with(Term::clone)
    }

    pub fn app(a: Term, b: Term) -> Term {
        Term::build(Kind::App(a, b))
    }

    pub fn comp(a: Term, b: Term) -> Term {
        Term::build(Kind::Comp(a, b))
    }

    fn build(kind: Kind) -> Term {
        let mut h = DefaultHasher::new();
        let (leaves, nodes, depth, has_comp) = match &kind {
            Kind::Gen => {
                0u8.hash(&mut h);
                (1, 1, 0, false)
            }
            Kind::App(a, b) | Kind::Comp(a, b) => {
                let tag: u8 = if matches!(kind, Kind::App(..)) { 1 } else { 2 };
                tag.hash(&mut h);
                a.0.hash.hash(&mut h);
                b.0.hash.hash(&mut h);
                (
                    a.leaves() + b.leaves(),
                    a.nodes() + b.nodes() + 1,
                    a.depth().max(b.depth()) + 1,
                    tag == 2 || a.0.has_comp || b.0.has_comp,
                )
            }
        };
        Term(Arc::new(Inner { kind, hash: h.finish(), leaves, nodes, depth, has_comp }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn is_gen(&self) -> bool {
        matches!(self.0.kind, Kind::Gen)
    }

    /// True when the term has no composition node, i.e. it lives in the LD-only algebra.
    pub fn is_a(&self) -> bool {
        !self.0.has_comp
    }

    pub fn leaves(&self) -> usize {
        self.0.leaves
    }

    pub fn nodes(&self) -> usize {
        self.0.nodes
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    pub fn children(&self) -> Option<(&Term, &Term)> {
        match &self.0.kind {
            Kind::Gen => None,
            Kind::App(a, b) | Kind::Comp(a, b) => Some((a, b)),
        }
    }

    /// Left-nested product `self r_0 r_1 ...`.
    pub fn apply_all<I: IntoIterator<Item = Term>>(self, args: I) -> Term {
        args.into_iter().fold(self, Term::app)
    }

    pub fn subterms(&self) -> Vec<(Path, Term)> {
        let mut out = Vec::with_capacity(self.nodes());
        let mut stack = vec![(Path::root(), self.clone())];
        while let Some((path, t)) = stack.pop() {
            if let Some((a, b)) = t.children() {
                stack.push((path.child(Dir::R), b.clone()));
                stack.push((path.child(Dir::L), a.clone()));
            }
            out.push((path, t));
        }
        out
    }

    pub fn at(&self, path: &Path) -> Option<&Term> {
        let mut t = self;
        for d in &path.0 {
            let (a, b) = t.children()?;
            t = if *d == Dir::L { a } else { b };
        }
        Some(t)
    }

    /// Copy of `self` with the subterm at `path` swapped for `new`.
    pub fn replace_at(&self, path: &Path, new: Term) -> Result<Term, TermError> {
        fn go(t: &Term, dirs: &[Dir], new: Term) -> Option<Term> {
            let Some((d, rest)) = dirs.split_first() else {
                return Some(new);
            };
            let (a, b) = t.children()?;
            let (a, b) = match d {
                Dir::L => (go(a, rest, new)?, b.clone()),
                Dir::R => (a.clone(), go(b, rest, new)?),
            };
            Some(match t.kind() {
                Kind::App(..) => Term::app(a, b),
                _ => Term::comp(a, b),
            })
        }
        go(self, &path.0, new).ok_or_else(|| TermError::BadPosition(path.clone()))
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.nodes == other.0.nodes
                && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({})", self)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Format::Infix))
    }
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Term, ParseError> {
        parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    L,
    R,
}

/// Path from the root; the empty path is printed as `ε`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Path(pub Vec<Dir>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn child(&self, d: Dir) -> Path {
        let mut v = self.0.clone();
        v.push(d);
        Path(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for d in &self.0 {
            f.write_str(if *d == Dir::L { "L" } else { "R" })?;
        }
        Ok(())
    }
}

/// `I_1 = a`, `I_2 = ab`, `I_{n+2} = I_{n+1} I_n`.
pub fn iterate(a: &Term, b: &Term, n: usize) -> Result<Term, TermError> {
    if n == 0 {
        return Err(TermError::ZeroIndex { what: "iterate" });
    }
    let (mut prev, mut cur) = (a.clone(), Term::app(a.clone(), b.clone()));
    if n == 1 {
        return Ok(prev);
    }
    for _ in 2..n {
        let next = Term::app(cur.clone(), prev);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `p^1 = p`, `p^{n+1} = p ∘ p^n`.
pub fn power_comp(p: &Term, n: usize) -> Result<Term, TermError> {
    if n == 0 {
        return Err(TermError::ZeroIndex { what: "power_comp" });
    }
    let mut t = p.clone();
    for _ in 1..n {
        t = Term::comp(p.clone(), t);
    }
    Ok(t)
}

/// `p^(0) = p`, `p^(n+1) = p p^(n)`.
pub fn power_app(p: &Term, n: usize) -> Term {
    let mut t = p.clone();
    for _ in 0..n {
        t = Term::app(p.clone(), t);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn iterates() {
        let x = Term::gen();
        assert_eq!(iterate(&x, &x, 1).unwrap(), x);
        assert_eq!(iterate(&x, &x, 3).unwrap(), t("(x x) x"));
        assert_eq!(iterate(&x, &t("x x"), 4).unwrap(), t("((x (x x)) x) (x (x x))"));
        assert!(iterate(&x, &x, 0).is_err());
    }

    #[test]
    fn powers() {
        let x = Term::gen();
        assert_eq!(power_comp(&x, 1).unwrap(), x);
        assert_eq!(power_comp(&x, 2).unwrap(), t("x o x"));
        assert_eq!(power_comp(&t("x x"), 3).unwrap(), t("(x x) o ((x x) o (x x))"));
        assert!(power_comp(&x, 0).is_err());
        assert_eq!(power_app(&x, 0), x);
        assert_eq!(power_app(&x, 2), t("x (x x)"));
        assert_eq!(power_app(&t("x x"), 1), t("(x x) (x x)"));
    }

    #[test]
    fn subterm_listing() {
        let x = Term::gen();
        assert_eq!(x.subterms(), vec![(Path::root(), x.clone())]);
        let xx = t("x x");
        let s = xx.subterms();
        assert_eq!(s.len(), 3);
        assert_eq!(s[1].0.to_string(), "L");
        assert_eq!(s[2].0.to_string(), "R");
        assert_eq!(t("x (x x)").subterms().len(), 5);
    }

    #[test]
    fn replace() {
        let u = t("x (x x)");
        let p = Path(vec![Dir::R]);
        assert_eq!(u.replace_at(&p, Term::gen()).unwrap(), t("x x"));
        assert!(u.replace_at(&Path(vec![Dir::L, Dir::L]), Term::gen()).is_err());
    }

    #[test]
    fn cached_sizes() {
        let u = t("(x o x) (x x)");
        assert_eq!((u.leaves(), u.nodes(), u.depth()), (4, 7, 2));
        assert!(!u.is_a());
        assert!(t("x (x x)").is_a());
    }
}
