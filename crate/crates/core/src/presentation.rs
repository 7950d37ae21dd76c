//! Finite group presentations with Tietze simplification.
//!
//! A word is a list of nonzero integers: `k` is generator `k − 1`, `−k` its
//! inverse.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<i32>>,
}

pub fn free_reduce(word: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &x in word {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_reduce(word: &[i32]) -> Vec<i32> {
    let mut w = free_reduce(word);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

pub fn invert(word: &[i32]) -> Vec<i32> {
    word.iter().rev().map(|&x| -x).collect()
}

fn generator_name(k: usize) -> String {
    let letters = "abcdefghijklmnopqrstuvwxyz";
    if k < letters.len() {
        letters[k..k + 1].to_string()
    } else {
        format!("x{k}")
    }
}

impl Presentation {
    pub fn new(generator_count: usize, relators: Vec<Vec<i32>>) -> Self {
        Presentation {
            generators: (0..generator_count).map(generator_name).collect(),
            relators,
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Free of the current rank: no relators left.
    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    /// Tietze moves: drop trivial and duplicate relators, and eliminate
    /// any generator occurring exactly once in some relator. Generators
    /// are renamed `a, b, …` afterwards.
    pub fn simplify(&self) -> Presentation {
        let mut alive: Vec<bool> = vec![true; self.generators.len()];
        let mut rels: Vec<Vec<i32>> = self.relators.iter().map(|r| cyclic_reduce(r)).collect();
        loop {
            rels.retain(|r| !r.is_empty());
            rels.sort();
            rels.dedup();
            let pick = rels.iter().enumerate().find_map(|(ri, r)| {
                r.iter().enumerate().find_map(|(pos, &x)| {
                    let g = x.abs();
                    (r.iter().filter(|y| y.abs() == g).count() == 1).then_some((ri, pos))
                })
            });
            let Some((ri, pos)) = pick else { break };
            let r = rels.remove(ri);
            let x = r[pos];
            // r = u·x·v = 1 gives x = u⁻¹·v⁻¹.
            let u = &r[..pos];
            let v = &r[pos + 1..];
            let mut value = invert(u);
            value.extend(invert(v));
            let value = if x > 0 { value } else { invert(&value) };
            let g = x.abs();
            alive[(g - 1) as usize] = false;
            for rel in rels.iter_mut() {
                let mut out = Vec::with_capacity(rel.len());
                for &y in rel.iter() {
                    if y == g {
                        out.extend_from_slice(&value);
                    } else if y == -g {
                        out.extend(invert(&value));
                    } else {
                        out.push(y);
                    }
                }
                *rel = cyclic_reduce(&out);
            }
        }
        // Renumber the surviving generators.
        let mut map = vec![0i32; alive.len() + 1];
        let mut next = 0;
        for (k, &a) in alive.iter().enumerate() {
            if a {
                next += 1;
                map[k + 1] = next;
            }
        }
        let relators = rels
            .iter()
            .map(|r| r.iter().map(|&x| x.signum() * map[x.unsigned_abs() as usize]).collect())
            .collect();
        Presentation::new(next as usize, relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = self.generators.join(", ");
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| {
                        let name = &self.generators[(x.unsigned_abs() - 1) as usize];
                        if x > 0 {
                            name.clone()
                        } else {
                            format!("{name}⁻¹")
                        }
                    })
                    .collect::<String>()
            })
            .collect();
        if rels.is_empty() {
            write!(f, "⟨{gens} |⟩")
        } else {
            write!(f, "⟨{gens} | {}⟩", rels.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eliminating_redundant_generators() {
        // ⟨a, b, c | a b c⁻¹⟩ ≅ free on two generators.
        let p = Presentation::new(3, vec![vec![1, 2, -3]]).simplify();
        assert_eq!(p.rank(), 2);
        assert!(p.is_free());
        assert_eq!(p.to_string(), "⟨a, b |⟩");
    }

    #[test]
    fn commutator_survives() {
        let p = Presentation::new(2, vec![vec![1, 2, -1, -2]]).simplify();
        assert_eq!(p.to_string(), "⟨a, b | aba⁻¹b⁻¹⟩");
        assert_eq!(Presentation::new(1, vec![vec![1]]).simplify().to_string(), "⟨ |⟩");
    }
}
