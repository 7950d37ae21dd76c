//! String rewriting over a finite alphabet, ordered shortlex, with
//! Knuth–Bendix completion.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};

pub type Word = Vec<u32>;

/// Shorter words first, then lexicographic by letter index.
pub fn shortlex(a: &[u32], b: &[u32]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, Default)]
pub struct RewriteSystem {
    rules: Vec<(Word, Word)>,
    by_first: HashMap<u32, Vec<usize>>,
    max_lhs: usize,
}

/// Outcome of a completion run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub rounds: usize,
    pub added: usize,
    pub rules: usize,
}

impl RewriteSystem {
    /// Each equation is oriented from the shortlex-larger side; trivial
    /// equations are dropped.
    pub fn new(equations: impl IntoIterator<Item = (Word, Word)>) -> Self {
        let mut s = RewriteSystem::default();
        for (a, b) in equations {
            s.add(a, b);
        }
        s
    }

    fn add(&mut self, a: Word, b: Word) -> bool {
        let (l, r) = match shortlex(&a, &b) {
            Ordering::Equal => return false,
            Ordering::Greater => (a, b),
            Ordering::Less => (b, a),
        };
        if self.rules.iter().any(|(x, _)| *x == l) {
            return false;
        }
        self.max_lhs = self.max_lhs.max(l.len());
        self.by_first.entry(l[0]).or_default().push(self.rules.len());
        self.rules.push((l, r));
        true
    }

    pub fn rules(&self) -> &[(Word, Word)] {
        &self.rules
    }

    /// Normal form by leftmost rewriting.
    pub fn reduce(&self, word: &[u32]) -> Word {
        let mut w: Word = word.to_vec();
        let mut p = 0;
        while p < w.len() {
            let hit = self.by_first.get(&w[p]).and_then(|ids| {
                ids.iter()
                    .map(|&i| &self.rules[i])
                    .find(|(l, _)| w.len() - p >= l.len() && w[p..p + l.len()] == l[..])
            });
            match hit {
                Some((l, r)) => {
                    w.splice(p..p + l.len(), r.iter().copied());
                    p = p.saturating_sub(self.max_lhs);
                }
                None => p += 1,
            }
        }
        w
    }

    pub fn is_reduced(&self, word: &[u32]) -> bool {
        self.reduce(word) == word
    }

    /// Critical pairs between rules `i` and `j`: overlaps of a suffix of
    /// `l_i` with a prefix of `l_j`, and `l_j` occurring inside `l_i`.
    fn critical_pairs(&self, i: usize, j: usize) -> Vec<(Word, Word)> {
        let (l1, r1) = &self.rules[i];
        let (l2, r2) = &self.rules[j];
        let mut out = Vec::new();
        for k in 0..l1.len() {
            let tail = &l1[k..];
            if k > 0 && tail.len() < l2.len() && l2.starts_with(tail) {
                // l1 = u·tail, l2 = tail·v: word u·tail·v.
                let mut a = r1.clone();
                a.extend_from_slice(&l2[tail.len()..]);
                let mut b = l1[..k].to_vec();
                b.extend_from_slice(r2);
                out.push((a, b));
            }
            if (i != j || k > 0) && tail.len() >= l2.len() && tail.starts_with(l2) {
                // l1 = u·l2·v.
                let mut b = l1[..k].to_vec();
                b.extend_from_slice(r2);
                b.extend_from_slice(&tail[l2.len()..]);
                out.push((r1.clone(), b));
            }
        }
        out
    }

    /// Critical pairs whose two reductions disagree.
    pub fn unjoinable_pairs(&self) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        for i in 0..self.rules.len() {
            for j in 0..self.rules.len() {
                for (a, b) in self.critical_pairs(i, j) {
                    let (na, nb) = (self.reduce(&a), self.reduce(&b));
                    if na != nb {
                        out.push((na, nb));
                    }
                }
            }
        }
        out
    }

    /// Knuth–Bendix completion: adds oriented rules until every critical
    /// pair is joinable, or fails once more than `max_rules` rules exist.
    pub fn complete(&mut self, max_rules: usize) -> Result<Completion> {
        let mut added = 0;
        let mut rounds = 0;
        // Pairs (i, j) with max(i, j) ≥ done are still unchecked.
        let mut done = 0;
        while done < self.rules.len() {
            rounds += 1;
            let upto = self.rules.len();
            let mut fresh = Vec::new();
            for i in 0..upto {
                for j in 0..upto {
                    if i.max(j) < done {
                        continue;
                    }
                    for (a, b) in self.critical_pairs(i, j) {
                        let (na, nb) = (self.reduce(&a), self.reduce(&b));
                        if na != nb {
                            fresh.push((na, nb));
                        }
                    }
                }
            }
            done = upto;
            for (a, b) in fresh {
                let (na, nb) = (self.reduce(&a), self.reduce(&b));
                if self.add(na, nb) {
                    added += 1;
                    if self.rules.len() > max_rules {
                        return Err(Error::NonConfluentRules(format!(
                            "completion exceeded {max_rules} rules after {rounds} rounds"
                        )));
                    }
                }
            }
        }
        Ok(Completion {
            rounds,
            added,
            rules: self.rules.len(),
        })
    }
}
