//! Permutations of `{0, …, n-1}` acting on the right.
//!
//! `x^(g·h) = (x^g)^h`, so [`Perm::then`] composes left to right, the same
//! order in which words act on the tree.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

/// Action of an element on the `p^n` leaves of level `n`.
pub type LeafPermutation = Perm;

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// The cyclic shift `i ↦ i + k mod n`.
    pub fn rotation(degree: usize, k: usize) -> Self {
        Perm {
            images: (0..degree).map(|i| ((i + k) % degree) as u32).collect(),
        }
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)`; `()` or an empty string is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut moved = vec![false; degree];
        let bad = |msg: String| Error::InvalidPermutation(msg);
        let mut rest = text.trim();
        while !rest.is_empty() {
            let inner_end = rest
                .find(')')
                .filter(|_| rest.starts_with('('))
                .ok_or_else(|| bad(format!("malformed cycle notation `{text}`")))?;
            let cycle = rest[1..inner_end]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&x| x < degree)
                        .ok_or_else(|| bad(format!("bad point `{s}` in `{text}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            for (k, &x) in cycle.iter().enumerate() {
                if moved[x] {
                    return Err(bad(format!("point {x} repeated in `{text}`")));
                }
                moved[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()] as u32;
            }
            rest = rest[inner_end + 1..].trim_start();
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Perm::identity(self.degree());
        for _ in 0..e.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut order = 1u64;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(i, &x)| i as u32 != x)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trips() {
        let p = Perm::parse_cycles("(0 1 2)", 3).unwrap();
        assert_eq!(p, Perm::rotation(3, 1));
        assert_eq!(p.to_string(), "(0 1 2)");
        assert_eq!(Perm::parse_cycles("()", 3).unwrap(), Perm::identity(3));
        assert_eq!(Perm::identity(2).to_string(), "()");
        let q = Perm::parse_cycles("(0 3)(1 2)", 4).unwrap();
        assert_eq!(Perm::parse_cycles(&q.to_string(), 4).unwrap(), q);
    }

    #[test]
    fn rejects_bad_cycles() {
        assert!(Perm::parse_cycles("(0 1 1)", 3).is_err());
        assert!(Perm::parse_cycles("(0 5)", 3).is_err());
        assert!(Perm::parse_cycles("0 1", 3).is_err());
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Perm::rotation(3, 1);
        let swap = Perm::parse_cycles("(0 1)", 3).unwrap();
        // 0 -a-> 1 -swap-> 0
        assert_eq!(a.then(&swap).apply(0), 0);
        assert_eq!(swap.then(&a).apply(0), 2);
        assert_eq!(a.pow(3), Perm::identity(3));
        assert_eq!(a.pow(-1), a.inverse());
        assert_eq!(a.order(), 3);
        assert_eq!(a.then(&a.inverse()), Perm::identity(3));
    }
}
