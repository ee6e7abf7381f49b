use crate::Term;

/// Memoized enumerator of all terms with a given leaf count.
#[derive(Debug, Default)]
pub struct Enumerator {
    a_only: bool,
    by_size: Vec<Vec<Term>>,
}

impl Enumerator {
    pub fn new(a_only: bool) -> Enumerator {
        Enumerator { a_only, by_size: vec![Vec::new(), vec![Term::gen()]] }
    }

    pub fn exactly(&mut self, leaves: usize) -> &[Term] {
        while self.by_size.len() <= leaves {
            let n = self.by_size.len();
            let mut level = Vec::new();
            for k in 1..n {
                for a in &self.by_size[k] {
                    for b in &self.by_size[n - k] {
                        level.push(Term::app(a.clone(), b.clone()));
                        if !self.a_only {
                            level.push(Term::comp(a.clone(), b.clone()));
                        }
                    }
                }
            }
            self.by_size.push(level);
        }
        &self.by_size[leaves]
    }

    pub fn upto(&mut self, leaves: usize) -> Vec<Term> {
        (1..=leaves).flat_map(|n| self.exactly(n).to_vec()).collect()
    }
}

/// All terms with exactly `leaves` leaves, smaller left factors first.
pub fn enumerate(leaves: usize, a_only: bool) -> Vec<Term> {
    Enumerator::new(a_only).exactly(leaves).to_vec()
}

/// All terms with 1 to `leaves` leaves, by size.
pub fn enumerate_upto(leaves: usize, a_only: bool) -> Vec<Term> {
    Enumerator::new(a_only).upto(leaves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| enumerate(n, true).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132]);
        assert_eq!(enumerate_upto(7, true).len(), 197);
        assert_eq!(enumerate_upto(4, false).len(), 51);
        assert_eq!(enumerate(0, true).len(), 0);
    }

    #[test]
    fn distinct() {
        let all = enumerate_upto(6, false);
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        assert!(enumerate_upto(6, true).iter().all(Term::is_a));
    }
}
