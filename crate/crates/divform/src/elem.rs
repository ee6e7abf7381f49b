use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use ldf_term::{Star, Term};

/// An element of the free algebra held in its canonical x-division form:
/// either the generator or a prenormal node `x a_0 ... a_{n-1} * a_n`.
#[derive(Clone)]
pub struct Elem(Arc<Inner>);

struct Inner {
    node: Option<(Vec<Elem>, Star)>,
    hash: u64,
    leaves: usize,
}

impl Elem {
    pub fn gen() -> Elem {
        thread_local! {
            static GEN: Elem = Elem::build(None);
        }
        GEN.with(Elem::clone)
    }

    /// Unchecked constructor; callers are responsible for prenormality.
    pub(crate) fn node(comps: Vec<Elem>, star: Star) -> Elem {
        debug_assert!(!comps.is_empty());
        Elem::build(Some((comps, star)))
    }

    fn build(node: Option<(Vec<Elem>, Star)>) -> Elem {
        let mut h = DefaultHasher::new();
        let leaves = match &node {
            None => {
                0u8.hash(&mut h);
                1
            }
            Some((comps, star)) => {
                1u8.hash(&mut h);
                star.hash(&mut h);
                for c in comps {
                    c.0.hash.hash(&mut h);
                }
                1 + comps.iter().map(Elem::leaves).sum::<usize>()
            }
        };
        Elem(Arc::new(Inner { node, hash: h.finish(), leaves }))
    }

    pub fn is_gen(&self) -> bool {
        self.0.node.is_none()
    }

    pub fn components(&self) -> &[Elem] {
        self.0.node.as_ref().map_or(&[], |n| &n.0)
    }

    pub fn star(&self) -> Star {
        self.0.node.as_ref().map_or(Star::App, |n| n.1)
    }

    pub fn is_comp(&self) -> bool {
        self.star() == Star::Comp && !self.is_gen()
    }

    /// Leaf count of the flattened term.
    pub fn leaves(&self) -> usize {
        self.0.leaves
    }

    /// `x a_0 ... a_{n-1}` for a node `x a_0 ... * a_n`.
    pub fn prefix(&self) -> Elem {
        let c = self.components();
        match c.len() {
            0 => panic!("prefix of the generator"),
            1 => Elem::gen(),
            n => Elem::node(c[..n - 1].to_vec(), Star::App),
        }
    }

    pub fn last(&self) -> &Elem {
        self.components().last().expect("last component of the generator")
    }

    /// `self · a` by appending; only meaningful when `self` is the generator or an app node.
    pub(crate) fn append(&self, a: Elem, star: Star) -> Elem {
        debug_assert!(!self.is_comp());
        let mut c = self.components().to_vec();
        c.push(a);
        Elem::node(c, star)
    }

    /// The literal term `x a_0 ... * a_n`, recursively flattened.
    pub fn to_term(&self) -> Term {
        match &self.0.node {
            None => Term::gen(),
            Some((comps, star)) => {
                let (last, init) = comps.split_last().unwrap();
                let pre = Term::gen().apply_all(init.iter().map(Elem::to_term));
                star.join(pre, last.to_term())
            }
        }
    }
}

impl PartialEq for Elem {
    fn eq(&self, other: &Elem) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.0.leaves == other.0.leaves && self.0.node == other.0.node)
    }
}

impl Eq for Elem {}

impl Hash for Elem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_term().compact())
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem({self})")
    }
}

/// A chain over a divisor `q`: either a leaf `u ≤ q`, or `q b_0 ... * b_k` with
/// elements as components.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Chain {
    Leaf(Elem),
    Node(Vec<Elem>, Star),
}

impl Chain {
    pub(crate) fn prefix(&self, q: &Elem) -> Chain {
        match self {
            Chain::Node(bs, _) if bs.len() > 1 => Chain::Node(bs[..bs.len() - 1].to_vec(), Star::App),
            _ => Chain::Leaf(q.clone()),
        }
    }

    pub(crate) fn from_x(e: &Elem) -> Chain {
        if e.is_gen() {
            Chain::Leaf(e.clone())
        } else {
            Chain::Node(e.components().to_vec(), e.star())
        }
    }

    pub(crate) fn into_x(self) -> Elem {
        match self {
            Chain::Leaf(e) => e,
            Chain::Node(bs, s) => Elem::node(bs, s),
        }
    }
}
