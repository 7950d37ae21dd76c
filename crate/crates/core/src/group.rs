//! Small finite groups given by multiplication tables.
//!
//! Elements are `0..order` with `0` the identity. `mul(a, b)` is the
//! product "a then b", matching groupoid composition.

use crate::error::{Error, Result};
use crate::groupoid::Groupoid;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a table, checking identity at `0`, closure,
    /// associativity and inverses.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::Invalid("group table must be square with entries < order".into()));
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::Invalid("element 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Invalid(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == 0)
                .ok_or_else(|| Error::Invalid(format!("element {a} has no inverse")))?;
        }
        Ok(FiniteGroup {
            name: name.into(),
            table,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("Z{n}"), table).expect("cyclic table")
    }

    /// Dihedral group of order `2n`; element `r^k s^e` is `2k + e`.
    pub fn dihedral(n: usize) -> Self {
        let enc = |k: usize, e: usize| 2 * (k % n) + e;
        let table = (0..2 * n)
            .map(|x| {
                let (k1, e1) = (x / 2, x % 2);
                (0..2 * n)
                    .map(|y| {
                        let (k2, e2) = (y / 2, y % 2);
                        // r^k1 s^e1 r^k2 s^e2 = r^(k1 ± k2) s^(e1+e2)
                        let k = if e1 == 0 { k1 + k2 } else { k1 + n - k2 };
                        enc(k, (e1 + e2) % 2)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(format!("D{n}"), table).expect("dihedral table")
    }

    /// The symmetric group on three letters.
    pub fn s3() -> Self {
        let mut perms: Vec<[usize; 3]> = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if a != b && b != c && a != c {
                        perms.push([a, b, c]);
                    }
                }
            }
        }
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        // "p then q": apply p first.
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| idx([q[p[0]], q[p[1]], q[p[2]]])).collect())
            .collect();
        Self::from_table("S3", table).expect("S3 table")
    }

    /// Quaternion group: `±1, ±i, ±j, ±k` encoded as `2u + sign`.
    pub fn quaternion() -> Self {
        // unit products: (unit, unit) -> (unit, negate)
        const M: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (u, neg) = M[x / 2][y / 2];
                        2 * u + ((x % 2) ^ (y % 2) ^ neg as usize)
                    })
                    .collect()
            })
            .collect();
        Self::from_table("Q8", table).expect("Q8 table")
    }

    /// Direct product; `(a, b)` is `a * |H| + b`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let m = h.order();
        let n = g.order() * m;
        let table = (0..n)
            .map(|x| (0..n).map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m)).collect())
            .collect();
        Self::from_table(format!("{}x{}", g.name, h.name), table).expect("product table")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `p⁻¹ a p`, a right action.
    pub fn conjugate(&self, a: usize, p: usize) -> usize {
        self.mul(self.mul(self.inv(p), a), p)
    }

    pub fn is_homomorphism_to(&self, other: &FiniteGroup, f: &[usize]) -> bool {
        f.len() == self.order()
            && self
                .elements()
                .all(|a| self.elements().all(|b| f[self.mul(a, b)] == other.mul(f[a], f[b])))
    }

    /// Every isomorphism `self → other`, as element maps.
    pub fn isomorphisms_to(&self, other: &FiniteGroup) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut out = Vec::new();
        if n != other.order() {
            return out;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[0] = 0;
        used[0] = true;
        self.extend_iso(other, 1, &mut map, &mut used, &mut out);
        out
    }

    fn extend_iso(
        &self,
        other: &FiniteGroup,
        next: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = self.order();
        if next == n {
            out.push(map.clone());
            return;
        }
        for img in 1..n {
            if used[img] {
                continue;
            }
            map[next] = img;
            used[img] = true;
            let consistent = (0..=next).all(|a| {
                (0..=next).all(|b| {
                    let ab = self.mul(a, b);
                    map[ab] == usize::MAX || map[ab] == other.mul(map[a], map[b])
                })
            });
            if consistent {
                self.extend_iso(other, next + 1, map, used, out);
            }
            used[img] = false;
            map[next] = usize::MAX;
        }
    }
}

/// A group viewed as a one-object groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupGroupoid(pub FiniteGroup);

impl Groupoid for GroupGroupoid {
    type Object = ();
    type Arrow = usize;

    fn source(&self, _: &usize) {}
    fn target(&self, _: &usize) {}
    fn identity(&self, _: &()) -> usize {
        0
    }
    fn inverse(&self, a: &usize) -> usize {
        self.0.inv(*a)
    }
    fn compose(&self, g: &usize, h: &usize) -> Result<usize> {
        Ok(self.0.mul(*g, *h))
    }
    fn arrows_equal(&self, a: &usize, b: &usize) -> bool {
        a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups_are_groups() {
        for g in [
            FiniteGroup::cyclic(5),
            FiniteGroup::dihedral(4),
            FiniteGroup::s3(),
            FiniteGroup::quaternion(),
            FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        ] {
            assert!(FiniteGroup::from_table(g.name(), g.table.clone()).is_ok());
        }
        assert!(!FiniteGroup::s3().is_abelian());
        assert!(!FiniteGroup::quaternion().is_abelian());
    }

    #[test]
    fn automorphism_counts() {
        let v4 = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert_eq!(v4.isomorphisms_to(&v4).len(), 6);
        assert_eq!(FiniteGroup::cyclic(8).isomorphisms_to(&FiniteGroup::cyclic(8)).len(), 4);
        assert_eq!(FiniteGroup::s3().isomorphisms_to(&FiniteGroup::s3()).len(), 6);
        assert_eq!(FiniteGroup::dihedral(3).isomorphisms_to(&FiniteGroup::s3()).len(), 6);
        assert!(FiniteGroup::cyclic(4).isomorphisms_to(&v4).is_empty());
    }

    #[test]
    fn rejects_non_group_table() {
        let t = vec![vec![0, 1, 2], vec![1, 1, 0], vec![2, 0, 1]];
        assert!(FiniteGroup::from_table("bad", t).is_err());
    }
}
