//! Cyclic permutations of the color set.
//!
//! A regular embedding of an `(n+1)`-colored graph into a surface is driven
//! by a cyclic permutation `ε = (ε₀, …, ε_n)` of the colors; two cyclic
//! permutations describe the same embedding data when they differ by
//! rotation or reversal, so there are `n!/2` *classes*.
//!
//! For 5-colored graphs two extra structures matter:
//!
//! * the *associated* permutation `ε' = (ε₀, ε₂, ε₄, ε₁, ε₃)`, whose
//!   consecutive pairs are exactly the pairs missed by `ε` (applying the map
//!   twice returns the inverse, hence the same class);
//! * the family of representatives with a chosen color anchored last,
//!   `ε₄ = 4`, modulo reversal — 12 members, used when color 4 plays the
//!   singular role.

use crate::graph::Color;
use crate::{GemError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A cyclic permutation of the colors `0..k`, stored as one explicit
/// sequence.  Class-level identity (rotation + reversal) is available via
/// [`CyclicPerm::class_key`] and [`CyclicPerm::same_class`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CyclicPerm {
    seq: Vec<Color>,
}

impl CyclicPerm {
    /// Builds from an explicit sequence; it must be a permutation of `0..k`.
    pub fn new(seq: Vec<Color>) -> Result<Self> {
        let k = seq.len();
        let mut seen = vec![false; k];
        for &c in &seq {
            if (c as usize) >= k || seen[c as usize] {
                return Err(GemError::Invalid(format!("{seq:?} is not a permutation of 0..{k}")));
            }
            seen[c as usize] = true;
        }
        Ok(CyclicPerm { seq })
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn seq(&self) -> &[Color] {
        &self.seq
    }

    /// The color at position `i`, indices mod `k`.
    pub fn at(&self, i: isize) -> Color {
        let k = self.seq.len() as isize;
        self.seq[(i.rem_euclid(k)) as usize]
    }

    /// The `k` consecutive color pairs `{ε_j, ε_{j+1}}`.
    pub fn consecutive_pairs(&self) -> Vec<(Color, Color)> {
        let k = self.seq.len();
        (0..k).map(|j| (self.seq[j], self.seq[(j + 1) % k])).collect()
    }

    /// Reversed sequence: the inverse cyclic permutation.
    pub fn inverse(&self) -> CyclicPerm {
        let mut seq = self.seq.clone();
        seq.reverse();
        CyclicPerm { seq }
    }

    /// Canonical representative of the class {rotations, reversals}.
    pub fn class_key(&self) -> Vec<Color> {
        let k = self.seq.len();
        let mut best: Option<Vec<Color>> = None;
        let mut consider = |seq: &[Color]| {
            for r in 0..k {
                let mut cand = Vec::with_capacity(k);
                cand.extend_from_slice(&seq[r..]);
                cand.extend_from_slice(&seq[..r]);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        };
        consider(&self.seq);
        let rev: Vec<Color> = self.seq.iter().rev().copied().collect();
        consider(&rev);
        best.expect("non-empty sequence")
    }

    pub fn normalized(&self) -> CyclicPerm {
        CyclicPerm { seq: self.class_key() }
    }

    pub fn same_class(&self, other: &CyclicPerm) -> bool {
        self.class_key() == other.class_key()
    }

    /// Rotates the sequence so that color `c` sits in the last position.
    pub fn anchored_last(&self, c: Color) -> Result<CyclicPerm> {
        let k = self.seq.len();
        let Some(pos) = self.seq.iter().position(|&x| x == c) else {
            return Err(GemError::Invalid(format!("color {c} not in {self}")));
        };
        let shift = (pos + 1) % k;
        let mut seq = Vec::with_capacity(k);
        seq.extend_from_slice(&self.seq[shift..]);
        seq.extend_from_slice(&self.seq[..shift]);
        Ok(CyclicPerm { seq })
    }

    /// Drops the entry at position `i`, keeping the cyclic order of the rest.
    pub fn without_position(&self, i: usize) -> CyclicPerm {
        let mut seq = self.seq.clone();
        seq.remove(i % self.seq.len());
        CyclicPerm { seq }
    }

    /// Drops color `c`, keeping the cyclic order of the rest.
    pub fn without_color(&self, c: Color) -> Result<CyclicPerm> {
        let Some(pos) = self.seq.iter().position(|&x| x == c) else {
            return Err(GemError::Invalid(format!("color {c} not in {self}")));
        };
        Ok(self.without_position(pos))
    }

    /// The associated permutation `(ε₀, ε₂, ε₄, ε₁, ε₃)`.
    /// Defined for 5 colors, where doubling positions is a bijection.
    pub fn associated(&self) -> CyclicPerm {
        assert_eq!(self.seq.len(), 5, "associated permutations are a 5-color notion");
        let seq = (0..5).map(|j| self.seq[(2 * j) % 5]).collect();
        CyclicPerm { seq }
    }
}

impl fmt::Display for CyclicPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.seq.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for CyclicPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All cyclic permutation classes of `0..num_colors`, as canonical
/// representatives in ascending order.  There are `(num_colors-1)!/2` of
/// them for `num_colors ≥ 3`.
pub fn classes(num_colors: usize) -> Vec<CyclicPerm> {
    assert!(num_colors >= 3, "cyclic classes need at least 3 colors");
    let mut out = Vec::new();
    let mut rest: Vec<Color> = (1..num_colors as Color).collect();
    // Fix 0 first (rotation anchor) and enumerate the rest.
    permutations(&mut rest, 0, &mut |tail| {
        let mut seq = Vec::with_capacity(num_colors);
        seq.push(0);
        seq.extend_from_slice(tail);
        let perm = CyclicPerm { seq };
        if perm.class_key() == perm.seq {
            out.push(perm);
        }
    });
    out.sort();
    out
}

/// The 12 representatives with `ε₄ = 4`, modulo reversal (for each pair
/// `{(a,b,c,d,4), (d,c,b,a,4)}` the lexicographically smaller one is kept),
/// in ascending order.
pub fn p4_members() -> Vec<CyclicPerm> {
    let mut out = Vec::new();
    let mut rest: Vec<Color> = vec![0, 1, 2, 3];
    permutations(&mut rest, 0, &mut |head| {
        let mut seq = head.to_vec();
        seq.push(4);
        let twin: Vec<Color> = head.iter().rev().copied().chain([4]).collect();
        if seq <= twin {
            out.push(CyclicPerm { seq });
        }
    });
    out.sort();
    out
}

fn permutations(items: &mut Vec<Color>, at: usize, visit: &mut impl FnMut(&[Color])) {
    if at == items.len() {
        visit(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permutations(items, at + 1, visit);
        items.swap(at, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_match_factorials() {
        assert_eq!(classes(4).len(), 3);
        assert_eq!(classes(5).len(), 12);
        assert_eq!(classes(6).len(), 60);
    }

    #[test]
    fn p4_has_twelve_members_each_ending_in_four() {
        let members = p4_members();
        assert_eq!(members.len(), 12);
        for eps in &members {
            assert_eq!(eps.at(4), 4);
            // Reversal twin is not listed separately.
            let twin = CyclicPerm::new(vec![eps.at(3), eps.at(2), eps.at(1), eps.at(0), 4]).unwrap();
            assert!(members.iter().filter(|m| m.same_class(&twin)).count() >= 1);
            assert_eq!(members.iter().filter(|m| m.seq() == twin.seq()).count(),
                if twin.seq() == eps.seq() { 1 } else { 0 });
        }
        // Each P4 member lands in a distinct cyclic class.
        let mut keys: Vec<_> = members.iter().map(|m| m.class_key()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 12);
    }

    #[test]
    fn inverse_is_the_same_class() {
        for eps in classes(5) {
            assert!(eps.same_class(&eps.inverse()));
        }
    }

    #[test]
    fn associated_pairs_cover_all_color_pairs() {
        for eps in classes(5) {
            let assoc = eps.associated();
            let mut pairs: Vec<(Color, Color)> = eps
                .consecutive_pairs()
                .into_iter()
                .chain(assoc.consecutive_pairs())
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            pairs.sort();
            pairs.dedup();
            assert_eq!(pairs.len(), 10, "ε and ε' pairs partition all 10 color pairs");
        }
    }

    #[test]
    fn associated_twice_returns_the_class() {
        for eps in classes(5) {
            let twice = eps.associated().associated();
            assert!(twice.same_class(&eps));
            // … and the associated class is genuinely different.
            assert!(!eps.associated().same_class(&eps));
        }
    }

    #[test]
    fn anchoring_and_induced_orders() {
        let eps = CyclicPerm::new(vec![0, 1, 2, 3, 4]).unwrap();
        let anchored = eps.anchored_last(2).unwrap();
        assert_eq!(anchored.seq(), &[3, 4, 0, 1, 2]);
        let induced = eps.without_color(2).unwrap();
        assert_eq!(induced.seq(), &[0, 1, 3, 4]);
        assert_eq!(eps.without_position(0).seq(), &[1, 2, 3, 4]);
    }

    #[test]
    fn class_key_identifies_rotations_and_reversals() {
        let a = CyclicPerm::new(vec![0, 1, 2, 3, 4]).unwrap();
        let b = CyclicPerm::new(vec![2, 3, 4, 0, 1]).unwrap();
        let c = CyclicPerm::new(vec![4, 3, 2, 1, 0]).unwrap();
        assert!(a.same_class(&b));
        assert!(a.same_class(&c));
        let d = CyclicPerm::new(vec![0, 2, 4, 1, 3]).unwrap();
        assert!(!a.same_class(&d));
    }
}
